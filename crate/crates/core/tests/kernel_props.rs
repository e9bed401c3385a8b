use backlund_core::scalar::rat;
use backlund_core::symcore::{Derivation, Monomial, Symbol, SymbolKind, SymbolTable};
use backlund_core::{QExpr, QPoly, Rational};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn vars() -> [Symbol; 3] {
    let mut t = SymbolTable::new();
    let x = t.push("a", SymbolKind::State).unwrap();
    let y = t.push("b", SymbolKind::State).unwrap();
    let z = t.push("c", SymbolKind::Parameter).unwrap();
    [x, y, z]
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 128,
        rng_seed: RngSeed::Fixed(0x5eed_cafe),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn poly() -> impl Strategy<Value = QPoly> {
    prop::collection::vec(((0u16..3, 0u16..3, 0u16..2), -6i64..=6, 1i64..=3), 0..5).prop_map(|terms| {
        let [x, y, z] = vars();
        QPoly::from_terms(terms.into_iter().map(|((i, j, k), n, d)| {
            let m = Monomial::var_pow(x, i).mul(&Monomial::var_pow(y, j)).mul(&Monomial::var_pow(z, k));
            (m, rat(n, d))
        }))
    })
}

fn nonzero_poly() -> impl Strategy<Value = QPoly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn expr() -> impl Strategy<Value = QExpr> {
    (poly(), nonzero_poly()).prop_map(|(n, d)| QExpr::new(n, d).unwrap())
}

fn point() -> impl Strategy<Value = Vec<Option<Rational>>> {
    prop::collection::vec((-9i64..=9, 1i64..=5), 3).prop_map(|v| v.into_iter().map(|(n, d)| Some(rat(n, d))).collect())
}

fn derivation() -> Derivation<Rational> {
    let [x, y, z] = vars();
    let e = |p: QPoly| QExpr::from(p);
    Derivation::new()
        .with(x, e(&QPoly::var(y) * &QPoly::var(z)))
        .with(y, e(&QPoly::var(x) - &QPoly::constant(rat(1, 2))))
        .with(z, QExpr::new(QPoly::one(), QPoly::var(x)).unwrap())
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &QPoly::zero(), a.clone());
        prop_assert_eq!(&a * &QPoly::one(), a.clone());
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a + &(-&a), QPoly::zero());
    }

    #[test]
    fn rational_field_axioms(a in expr(), b in expr(), c in expr()) {
        prop_assert!((&a + &b).equiv(&(&b + &a)));
        prop_assert!((&(&a * &b) * &c).equiv(&(&a * &(&b * &c))));
        prop_assert!((&a * &(&b + &c)).equiv(&(&(&a * &b) + &(&a * &c))));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.recip().unwrap()).equiv(&QExpr::one()));
        }
    }

    #[test]
    fn leibniz_partial(a in poly(), b in poly(), i in 0usize..3) {
        let s = vars()[i];
        let lhs = (&a * &b).partial(s);
        let rhs = &(&a.partial(s) * &b) + &(&a * &b.partial(s));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn leibniz_derivation(a in expr(), b in expr()) {
        let d = derivation();
        let lhs = d.apply(&(&a * &b));
        let rhs = &(&d.apply(&a) * &b) + &(&a * &d.apply(&b));
        prop_assert!((&lhs - &rhs).is_zero());
    }

    #[test]
    fn exact_division_round_trip(a in poly(), b in nonzero_poly()) {
        let prod = &a * &b;
        prop_assert_eq!(prod.exact_quotient(&b), Some(a.clone()));
        let qa = QExpr::from(a.clone());
        let qb = QExpr::from(b.clone());
        let back = &(&qa * &qb).try_div(&qb).unwrap() - &qa;
        prop_assert!(back.is_zero());
    }

    #[test]
    fn non_divisor_is_rejected(a in nonzero_poly()) {
        let [x, ..] = vars();
        // a * x + 1 is never divisible by x.
        let p = &(&a * &QPoly::var(x)) + &QPoly::one();
        prop_assert_eq!(p.exact_quotient(&QPoly::var(x)), None);
    }

    #[test]
    fn evaluation_homomorphism(a in poly(), b in poly(), p in point()) {
        let ea = a.eval(&p).unwrap();
        let eb = b.eval(&p).unwrap();
        prop_assert_eq!((&a + &b).eval(&p).unwrap(), ea.clone() + eb.clone());
        prop_assert_eq!((&a * &b).eval(&p).unwrap(), ea.clone() * eb.clone());
        prop_assert_eq!((-&a).eval(&p).unwrap(), -ea);
    }

    #[test]
    fn evaluation_homomorphism_rational(a in expr(), b in expr(), p in point()) {
        if let (Ok(ea), Ok(eb)) = (a.eval(&p), b.eval(&p)) {
            prop_assert_eq!((&a + &b).eval(&p).unwrap(), ea.clone() + eb.clone());
            prop_assert_eq!((&a * &b).eval(&p).unwrap(), ea * eb);
        }
    }
}
