use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};

use super::{Monomial, SymError, Symbol};
use crate::scalar::{powi, Embed, Field};

/// Sparse multivariate polynomial.
///
/// Terms are kept in descending graded lexicographic order with no zero
/// coefficients and no repeated monomials, so structural equality is
/// polynomial equality. The zero polynomial has no terms.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<C> {
    terms: Vec<(Monomial, C)>,
}

impl<C: Field> Default for Poly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Field> Poly<C> {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(s: Symbol) -> Self {
        Self::term(Monomial::var(s), C::one())
    }

    pub fn term(m: Monomial, c: C) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Collects arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(terms: I) -> Self {
        let mut acc: BTreeMap<Monomial, C> = BTreeMap::new();
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(v) => *v = v.clone() + c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let terms = acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, C)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the polynomial is the constant `c` (zero included).
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.as_slice() {
            [] => Some(C::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn leading(&self) -> Option<&(Monomial, C)> {
        self.terms.first()
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, syms: &[Symbol]) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree_in(syms)).max().unwrap_or(0)
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms.iter().flat_map(|(m, _)| m.factors().map(|(s, _)| s)).collect()
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(s) > 0)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, k)| (m.clone(), k.clone() * c.clone())).collect() }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Self {
        Poly { terms: self.terms.iter().map(|(m, k)| (m.mul(mono), k.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn partial(&self, s: Symbol) -> Self {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(s);
            if e == 0 {
                return None;
            }
            let mut exps = m.exps().to_vec();
            exps[s.index()] -= 1;
            Some((Monomial::from_exps(exps), c.clone() * from_u16::<C>(e)))
        });
        Self::from_terms(terms)
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |g, (m, _)| g.gcd(m))
    }

    /// Divides every term by `m`; callers guarantee divisibility.
    pub fn div_monomial(&self, m: &Monomial) -> Self {
        Poly { terms: self.terms.iter().map(|(t, c)| (m.quotient_of(t), c.clone())).collect() }
    }

    /// Exact quotient `self / d` by repeated leading-term reduction.
    ///
    /// Returns `None` as soon as a leading term of the running remainder is
    /// not divisible by the leading term of `d`. With a single divisor this
    /// is exact: `d | self` iff the reduction reaches zero.
    pub fn exact_quotient(&self, d: &Poly<C>) -> Option<Poly<C>> {
        let (dm, dc) = d.leading()?;
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&(C::one() / c)));
        }
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((rm, rc)) = rem.leading().cloned() {
            if !dm.divides(&rm) {
                return None;
            }
            let qm = dm.quotient_of(&rm);
            let qc = rc / dc.clone();
            rem = &rem - &d.mul_monomial(&qm).scale(&qc);
            quot.push((qm, qc));
        }
        Some(Poly::from_terms(quot))
    }

    /// Groups terms by their monomial in `vars`; each group's coefficient is
    /// a polynomial in the remaining symbols.
    pub fn split_by(&self, vars: &[Symbol]) -> BTreeMap<Monomial, Poly<C>> {
        let mut groups: BTreeMap<Monomial, Vec<(Monomial, C)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            groups.entry(m.restrict(vars)).or_default().push((m.without(vars), c.clone()));
        }
        groups.into_iter().map(|(k, v)| (k, Poly::from_terms(v))).collect()
    }

    pub fn map_coeffs<D: Field>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Evaluates at a dense point indexed by symbol; unbound symbols error.
    pub fn eval<T: Field>(&self, point: &[Option<T>]) -> Result<T, SymError>
    where
        C: Embed<T>,
    {
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let mut v: T = c.embed();
            for (s, e) in m.factors() {
                let x = point
                    .get(s.index())
                    .and_then(|x| x.as_ref())
                    .ok_or(SymError::Unbound(s))?;
                v = v * powi(x, e as u32);
            }
            acc = acc + v;
        }
        Ok(acc)
    }

    fn merge(&self, other: &Poly<C>, negate_other: bool) -> Poly<C> {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let sign = |c: &C| if negate_other { -c.clone() } else { c.clone() };
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match ma.cmp(mb) {
                std::cmp::Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((mb.clone(), sign(cb)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = ca.clone() + sign(cb);
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(m, c)| (m.clone(), sign(c))));
        Poly { terms: out }
    }

    fn product(&self, other: &Poly<C>) -> Poly<C> {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let mut acc: BTreeMap<Monomial, C> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca.clone() * cb.clone();
                match acc.get_mut(&m) {
                    Some(v) => *v = v.clone() + c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Poly { terms: acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect() }
    }
}

fn from_u16<C: Field>(n: u16) -> C {
    let mut acc = C::zero();
    for _ in 0..n {
        acc = acc + C::one();
    }
    acc
}

impl<C: Field> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        self.merge(rhs, false)
    }
}

impl<C: Field> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        self.merge(rhs, true)
    }
}

impl<C: Field> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        self.product(rhs)
    }
}

impl<C: Field> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl<C: Field> $tr for Poly<C> {
            type Output = Poly<C>;
            fn $f(self, rhs: Poly<C>) -> Poly<C> {
                (&self).$f(&rhs)
            }
        }
        impl<C: Field> $tr<&Poly<C>> for Poly<C> {
            type Output = Poly<C>;
            fn $f(self, rhs: &Poly<C>) -> Poly<C> {
                (&self).$f(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl<C: Field> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use crate::QPoly;

    fn x() -> QPoly {
        Poly::var(Symbol(0))
    }
    fn z() -> QPoly {
        Poly::var(Symbol(2))
    }

    #[test]
    fn additive_inverse_is_empty() {
        let p = &x() * &z() + QPoly::constant(rat(1, 2));
        assert!((&p - &p).is_zero());
        assert!((&p - &p).terms().is_empty());
    }

    #[test]
    fn exact_quotient_cases() {
        // (x^2 z - x z) / x = x z - z
        let n = &(&x() * &x()) * &z() - &x() * &z();
        assert_eq!(n.exact_quotient(&x()), Some(&x() * &z() - z()));
        // (x^2 - 1) / (x + 1) = x - 1
        let n = &x() * &x() - QPoly::one();
        assert_eq!(n.exact_quotient(&(x() + QPoly::one())), Some(x() - QPoly::one()));
        // x^2 + 1 is not divisible by x
        let n = &x() * &x() + QPoly::one();
        assert_eq!(n.exact_quotient(&x()), None);
    }

    #[test]
    fn partial_derivative_power_rule() {
        let p = x().pow(3).scale(&int(2));
        assert_eq!(p.partial(Symbol(0)), x().pow(2).scale(&int(6)));
        assert!(p.partial(Symbol(1)).is_zero());
    }

    #[test]
    fn split_by_groups_coefficients() {
        let a = QPoly::var(Symbol(5));
        let p = &(&a * &x()) + &x() + QPoly::constant(int(3));
        let parts = p.split_by(&[Symbol(0)]);
        assert_eq!(parts[&Monomial::var(Symbol(0))], a + QPoly::one());
        assert_eq!(parts[&Monomial::one()], QPoly::constant(int(3)));
    }

    #[test]
    fn eval_reports_unbound() {
        let p = &x() * &z();
        let pt = vec![Some(int(2)), None, None];
        assert!(matches!(p.eval(&pt), Err(SymError::Unbound(Symbol(2)))));
    }
}
