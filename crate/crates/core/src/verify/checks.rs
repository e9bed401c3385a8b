use std::collections::BTreeSet;
use std::time::Instant;

use super::{Residual, VerificationReport, VerifyError};
use crate::models::{registry, Clock, Registry, SolutionKind, Variant, VectorFieldSystem};
use crate::scalar::int;
use crate::symcore::{jacobian_determinant, Bindings, SymError, Symbol};
use crate::{QDerivation, QExpr, QPoly, Rational};

fn reduce(reg: &Registry, e: &QExpr) -> Result<QExpr, VerifyError> {
    Ok(reg.relation().apply(e)?)
}

fn subst(check: &str, e: &QExpr, b: &Bindings<Rational>) -> Result<QExpr, VerifyError> {
    e.substitute(b).map_err(|err| match err {
        SymError::SingularSubstitution { symbols } => VerifyError::Singular {
            check: check.to_string(),
            symbols: symbols.iter().map(|&s| registry().table.name(s).to_string()).collect(),
        },
        other => other.into(),
    })
}

fn name(s: Symbol) -> &'static str {
    registry().table.name(s)
}

fn var(s: Symbol) -> QExpr {
    QExpr::var(s)
}

fn zero_bindings(syms: impl IntoIterator<Item = Symbol>) -> Bindings<Rational> {
    syms.into_iter().map(|s| (s, QExpr::zero())).collect()
}

/// Maximum total degree of the rhs in the state symbols. The rhs must be
/// polynomial in the state (denominators free of state symbols).
pub fn vector_field_degree(system_id: &str) -> Result<u32, VerifyError> {
    let sys = registry().system(system_id)?;
    let mut deg = 0;
    for (s, f) in sys.state.iter().zip(&sys.rhs) {
        if sys.state.iter().any(|&v| f.den().contains(v)) {
            return Err(VerifyError::structural(
                &format!("degree/{system_id}"),
                format!("rhs of {} is not polynomial in the state", name(*s)),
            ));
        }
        deg = deg.max(f.num().degree_in(&sys.state));
    }
    Ok(deg)
}

pub fn check_vector_field_degree(system_id: &str, expected: u32) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let deg = vector_field_degree(system_id)?;
    let mut r = VerificationReport::new(format!("degree/{system_id}"));
    r.residuals.push(if deg == expected {
        Residual::zero("state degree")
    } else {
        Residual { label: "state degree".into(), value: format!("{deg}, expected {expected}") }
    });
    r.refresh();
    Ok(r.note(format!("max state degree {deg}")).timed(start))
}

/// `eps * D(phi_i) - F_i^{alpha', eta'}(phi, eps*u)` for every target
/// component, reduced by the parameter relation.
pub fn symmetry_residuals(
    sys: &VectorFieldSystem,
    target: &VectorFieldSystem,
    var_map: &[(Symbol, QExpr)],
    action: &crate::weyl::ParameterAction,
    check: &str,
) -> Result<Vec<(String, QExpr)>, VerifyError> {
    let reg = registry();
    let d = sys.derivation();
    let eta = reg.sym("eta");
    let mut b = action.bindings(reg.alphas(), eta);
    if action.indep_sign < 0 {
        b.insert(target.indep, -var(target.indep));
    }
    for (s, phi) in var_map {
        b.insert(*s, phi.clone());
    }
    let eps = int(i64::from(action.indep_sign));
    let mut out = Vec::new();
    for (s, f) in target.state.iter().zip(&target.rhs) {
        let phi = var_map
            .iter()
            .find(|(t, _)| t == s)
            .map(|(_, e)| e)
            .ok_or_else(|| VerifyError::structural(check, format!("map has no component for {}", name(*s))))?;
        let lhs = d.apply(phi).scale(&eps);
        let rhs = subst(check, f, &b)?;
        out.push((format!("d{}", name(*s)), reduce(reg, &(&lhs - &rhs))?));
    }
    Ok(out)
}

fn variant_id(base: String, reg: &Registry, map_id: &str, variant: Variant) -> String {
    if reg.is_disputed(map_id) {
        format!("{base}[{variant}]")
    } else {
        base
    }
}

/// Symmetry of `system_id` under a Bäcklund map or Hamiltonian change of
/// variables.
pub fn check_symmetry(system_id: &str, map_id: &str, variant: Variant) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let reg = registry();
    let sys = reg.system(system_id)?;
    let map = reg.map(map_id, variant)?;
    let id = variant_id(format!("symmetry/{system_id}/{map_id}"), reg, map_id, variant);
    if map.source != sys.id {
        return Err(VerifyError::structural(&id, format!("map acts on `{}`", map.source)));
    }
    if map.clock != Clock::Linear {
        return Err(VerifyError::structural(&id, "map changes the independent variable non-linearly"));
    }
    let target = reg.system(&map.target)?;
    let res = symmetry_residuals(sys, target, &map.var_map, &map.action, &id)?;
    Ok(VerificationReport::from_residuals(id, res).timed(start))
}

pub fn check_first_integral(system_id: &str, integral_id: &str) -> Result<VerificationReport, VerifyError> {
    let fi = registry().integral(integral_id)?;
    if fi.system_id != system_id {
        return Err(VerifyError::structural(
            &format!("integral/{system_id}/{integral_id}"),
            format!("integral belongs to `{}`", fi.system_id),
        ));
    }
    check_first_integral_expr(system_id, integral_id, &fi.expr, &fi.lambda)
}

/// `D(expr) - lambda * expr` along `system_id`.
pub fn check_first_integral_expr(
    system_id: &str,
    label: &str,
    expr: &QExpr,
    lambda: &Rational,
) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let reg = registry();
    let sys = reg.system(system_id)?;
    let r = &sys.derivation().apply(expr) - &expr.scale(lambda);
    let res = vec![(format!("D({label}) - lambda*{label}"), reduce(reg, &r)?)];
    Ok(VerificationReport::from_residuals(format!("integral/{system_id}/{label}"), res)
        .note(format!("lambda = {}", crate::scalar::fmt_rational(lambda)))
        .timed(start))
}

/// Inverse, unit Jacobian and polynomial transformed rhs for a triangular
/// chart `v -> v + c_v`.
pub fn check_chart(system_id: &str, chart_id: &str, variant: Variant) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let reg = registry();
    let sys = reg.system(system_id)?;
    let map = reg.map(chart_id, variant)?;
    let id = variant_id(format!("chart/{system_id}/{chart_id}"), reg, chart_id, variant);
    if map.source != sys.id || map.target != sys.id {
        return Err(VerifyError::structural(&id, "chart must map the system to itself"));
    }
    let phi: Vec<QExpr> = sys
        .state
        .iter()
        .map(|&s| map.component(s).cloned().ok_or_else(|| VerifyError::structural(&id, "missing component")))
        .collect::<Result<_, _>>()?;
    let corrections: Vec<QExpr> = sys.state.iter().zip(&phi).map(|(&s, f)| f - &var(s)).collect();
    let changed: BTreeSet<Symbol> =
        sys.state.iter().zip(&corrections).filter(|(_, c)| !c.is_zero()).map(|(&s, _)| s).collect();
    for (s, c) in sys.state.iter().zip(&corrections) {
        if let Some(bad) = changed.iter().find(|&&v| c.contains(v)) {
            return Err(VerifyError::structural(
                &id,
                format!("not triangular: correction of {} involves {}", name(*s), name(*bad)),
            ));
        }
    }
    let fwd: Bindings<Rational> = sys.state.iter().copied().zip(phi.iter().cloned()).collect();
    let inv: Bindings<Rational> =
        sys.state.iter().zip(&corrections).map(|(&s, c)| (s, &var(s) - c)).collect();

    let mut inverse = Vec::new();
    for &s in &sys.state {
        let back = subst(&id, &inv[&s], &fwd)?;
        inverse.push((format!("inverse({})", name(s)), &back - &var(s)));
    }
    let jac = jacobian_determinant(&phi, &sys.state)?;
    let jacobian = vec![("det J - 1".to_string(), &jac - &QExpr::one())];

    let d = sys.derivation();
    let mut poly = VerificationReport::new(format!("{id}/polynomial_rhs"));
    for (&s, f) in sys.state.iter().zip(&phi) {
        let g = reduce(reg, &subst(&id, &d.apply(f), &inv)?)?;
        let label = format!("d{}", name(s));
        match g.num().exact_quotient(g.den()) {
            Some(_) => poly.residuals.push(Residual::zero(label)),
            None => poly.residuals.push(Residual {
                label,
                value: format!("not polynomial, denominator {}", g.den().display(&reg.table)),
            }),
        }
    }
    poly.refresh();

    let mut r = VerificationReport::new(id.clone());
    r.push_child(VerificationReport::from_residuals(format!("{id}/inverse"), inverse));
    r.push_child(VerificationReport::from_residuals(format!("{id}/jacobian"), jacobian));
    r.push_child(poly);
    Ok(r.timed(start))
}

/// Runs both variants of a disputed map; passes iff exactly one verifies.
pub fn check_disputed(map_id: &str) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let reg = registry();
    let variants = reg.variants(map_id);
    if variants.len() < 2 {
        return Err(VerifyError::structural(&format!("disputed/{map_id}"), "map has a single variant"));
    }
    let mut r = VerificationReport::new(format!("disputed/{map_id}"));
    let mut passing = Vec::new();
    for v in variants {
        let m = reg.map(map_id, v)?;
        let child = if m.id.starts_with("chart") {
            check_chart(&m.source, map_id, v)?
        } else {
            check_symmetry(&m.source, map_id, v)?
        };
        if child.passed() {
            passing.push(v);
        }
        r.children.push(child);
    }
    if let [v] = passing[..] {
        r.status = super::Status::Pass;
        r.resolved_variant = Some(v);
        r.notes.push(format!("exactly one variant verifies: {v}"));
    } else {
        r.status = super::Status::Fail;
        r.notes.push(format!("{} variants verify; expected exactly one", passing.len()));
    }
    Ok(r.timed(start))
}

/// The Bäcklund map `s2` and chart 2 must be settled in favour of the same
/// variant.
pub fn check_typo_consistency() -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let a = check_disputed("s2_5d")?;
    let b = check_disputed("chart2")?;
    let agree = a.resolved_variant.is_some() && a.resolved_variant == b.resolved_variant;
    let mut r = VerificationReport::new("disputed/s2_5d_vs_chart2");
    r.residuals.push(if agree {
        Residual::zero("same variant")
    } else {
        Residual {
            label: "same variant".into(),
            value: format!("{:?} vs {:?}", a.resolved_variant, b.resolved_variant),
        }
    });
    r.resolved_variant = if agree { a.resolved_variant } else { None };
    r.push_child(a);
    r.push_child(b);
    Ok(r.timed(start))
}

/// Hamilton's equations for the stored pairing, plus the printed
/// decomposition of `H` where one is stored.
pub fn check_hamiltonian_consistency(system_id: &str) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let reg = registry();
    let sys = reg.system(system_id)?;
    let id = format!("hamiltonian/{system_id}");
    let ham = sys.hamiltonian.as_ref().ok_or_else(|| VerifyError::structural(&id, "system has no Hamiltonian"))?;
    let mut res = Vec::new();
    for &(q, p) in &ham.pairs {
        let (Some(fq), Some(fp)) = (sys.rhs_of(q), sys.rhs_of(p)) else {
            return Err(VerifyError::structural(&id, "pairing names a non-state symbol"));
        };
        res.push((format!("d{} - dH/d{}", name(q), name(p)), reduce(reg, &(fq - &ham.h.partial(p)))?));
        res.push((format!("d{} + dH/d{}", name(p), name(q)), reduce(reg, &(fp + &ham.h.partial(q)))?));
    }
    if !ham.parts.is_empty() {
        let sum = ham.parts.iter().fold(QExpr::zero(), |acc, (_, e)| &acc + e);
        let names: Vec<&str> = ham.parts.iter().map(|(n, _)| n.as_str()).collect();
        res.push((format!("H - ({})", names.join(" + ")), reduce(reg, &(&ham.h - &sum))?));
    }
    if let Some(e) = &ham.expanded {
        res.push(("H - expanded".into(), reduce(reg, &(&ham.h - e))?));
    }
    let mut r = VerificationReport::from_residuals(id.clone(), res);

    // Principal parts: the full system with the other pair set to zero.
    if matches!(system_id, "K1_sys" | "K2_sys") {
        let full = reg.system("ham_4d")?;
        let zero = zero_bindings(full.state.iter().copied().filter(|s| sys.position(*s).is_none()));
        let mut sub = Vec::new();
        for (&s, f) in sys.state.iter().zip(&sys.rhs) {
            let g = subst(&id, full.rhs_of(s).expect("pair of the full system"), &zero)?;
            sub.push((format!("d{} - restricted", name(s)), reduce(reg, &(&g - f))?));
        }
        let full_h = &full.hamiltonian.as_ref().expect("ham_4d carries H").h;
        sub.push(("H restricted - H".into(), reduce(reg, &(&subst(&id, full_h, &zero)? - &ham.h))?));
        r.push_child(VerificationReport::from_residuals(format!("{id}/restriction_of_ham_4d"), sub));
    }
    // The scaled system is reached from K2 through the change of variables.
    if system_id == "tildeK2_sys" {
        r.push_child(check_symmetry("K2_sys", "scale_step", Variant::Printed)?);
    }
    Ok(r.timed(start))
}

/// Which integral constant the reduction substitutes for `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionAnsatz {
    /// `y = w q + e^{-t}`
    WithExponential,
    /// `y = w q`, which is wrong
    DropExponential,
}

pub fn check_reduction_5d_to_4d() -> Result<VerificationReport, VerifyError> {
    check_reduction_with(ReductionAnsatz::WithExponential)
}

/// Eliminates `y` through `y - w q = s` with `s = e^{-t}` and compares the
/// pushed-forward field, with `d/ds = -(1/s) d/dt`, against the
/// four-dimensional system.
pub fn check_reduction_with(ansatz: ReductionAnsatz) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let reg = registry();
    let id = match ansatz {
        ReductionAnsatz::WithExponential => "reduction/five_dim/ham_4d".to_string(),
        ReductionAnsatz::DropExponential => "reduction/five_dim/ham_4d[y=wq]".to_string(),
    };
    let five = reg.system("five_dim")?;
    let ham = reg.system("ham_4d")?;
    let map = reg.map("reduce_5d_4d", Variant::Printed)?;
    let s = reg.sym("s");
    let (x, y, z, w, q) = (reg.sym("x"), reg.sym("y"), reg.sym("z"), reg.sym("w"), reg.sym("q"));
    let (q1, p1, q2, p2) = (reg.sym("q1"), reg.sym("p1"), reg.sym("q2"), reg.sym("p2"));

    let d = five.derivation().with(s, -var(s));
    let mut y_val = &var(w) * &var(q);
    if ansatz == ReductionAnsatz::WithExponential {
        y_val = &y_val + &var(s);
    }
    let elim: Bindings<Rational> = [(y, y_val)].into();
    let inverse: Bindings<Rational> = [
        (w, var(q1)),
        (x, var(p1)),
        (q, &var(s) * &var(q2)),
        (z, var(p2).try_div(&var(s))?),
    ]
    .into();
    let minus_inv_s = -var(s).recip()?;

    let mut roundtrip = Vec::new();
    for (t, phi) in &map.var_map {
        roundtrip.push((format!("{} after inverse", name(*t)), &subst(&id, phi, &inverse)? - &var(*t)));
    }
    let mut res = Vec::new();
    for (t, phi) in &map.var_map {
        let dt = subst(&id, &d.apply(phi), &elim)?;
        let ds = subst(&id, &(&minus_inv_s * &dt), &inverse)?;
        let target = ham.rhs_of(*t).ok_or_else(|| VerifyError::structural(&id, "target component missing"))?;
        res.push((format!("d{}/ds", name(*t)), reduce(reg, &(&ds - target))?));
    }
    let mut r = VerificationReport::from_residuals(id.clone(), res);
    r.push_child(VerificationReport::from_residuals(format!("{id}/change_of_variables_inverse"), roundtrip));
    Ok(r.timed(start))
}

/// For each `(q, p, dp)`: solves `dp/du = a q + b` for `q`, substitutes
/// the solutions simultaneously into `d^2 p/du^2`, and returns the second
/// derivatives as functions of `p`, `dp` and the remaining symbols.
pub fn eliminate_to_second_order(
    sys: &VectorFieldSystem,
    elim: &[(Symbol, Symbol, Symbol)],
) -> Result<Vec<QExpr>, VerifyError> {
    let check = format!("elimination/{}", sys.id);
    let eliminated: Vec<Symbol> = elim.iter().map(|e| e.0).collect();
    let mut solved = Bindings::new();
    for &(q, p, dp) in elim {
        let f = sys.rhs_of(p).ok_or_else(|| VerifyError::structural(&check, "momentum is not a state symbol"))?;
        let a = f.partial(q);
        let b = f - &(&a * &var(q));
        if a.is_zero() || eliminated.iter().any(|&e| a.contains(e) || b.contains(e)) {
            return Err(VerifyError::structural(&check, format!("d{} is not linear in {} alone", name(p), name(q))));
        }
        solved.insert(q, (&var(dp) - &b).try_div(&a)?);
    }
    let d = sys.derivation();
    elim.iter()
        .map(|&(_, p, _)| subst(&check, &d.apply(sys.rhs_of(p).expect("checked")), &solved))
        .collect()
}

/// Whether the `p1 p2` coupling is kept in the four-dimensional Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CouplingTerm {
    Kept,
    Deleted,
}

pub fn check_second_order_forms() -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let mut r = check_second_order_forms_with(CouplingTerm::Kept)?;
    let decoupled = check_second_order_forms_with(CouplingTerm::Deleted)?;
    r.push_child(VerificationReport::expect_failure("second_order_forms/decoupled_detector", decoupled));
    Ok(r.timed(start))
}

pub fn check_second_order_forms_with(coupling: CouplingTerm) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let reg = registry();
    let id = match coupling {
        CouplingTerm::Kept => "second_order_forms".to_string(),
        CouplingTerm::Deleted => "second_order_forms[no p1*p2]".to_string(),
    };
    let sym = |n: &str| reg.sym(n);

    // (a) x'' from the (x, z, w) system
    let xzw = reg.system("xzw")?;
    let target_a = reg.system("second_order_x")?;
    let xpp = eliminate_to_second_order(xzw, &[(sym("w"), sym("x"), sym("dx"))])?;
    let res_a = vec![("x''".to_string(), reduce(reg, &(&xpp[0] - target_a.rhs_of(sym("dx")).expect("dx")))?)];
    let mut a = VerificationReport::from_residuals(format!("{id}/a"), res_a);

    // The (x, z, w) system is five_dim on y = q = 0 with alpha1 = 0.
    let five = reg.system("five_dim")?;
    let mut restr = zero_bindings([sym("y"), sym("q")]);
    restr.insert(sym("alpha1"), QExpr::zero());
    let mut res_r = Vec::new();
    for (&s, f) in five.state.iter().zip(&five.rhs) {
        let g = subst(&id, f, &restr)?;
        let want = xzw.rhs_of(s).cloned().unwrap_or_else(QExpr::zero);
        res_r.push((format!("d{}", name(s)), &g - &want));
    }
    a.push_child(VerificationReport::from_residuals(format!("{id}/a/xzw_restriction"), res_r));

    // (b) the coupled pair from the Hamiltonian system, y := p1, w := p2
    let ham = reg.system("ham_4d")?;
    let decoupled;
    let source = match coupling {
        CouplingTerm::Kept => ham,
        CouplingTerm::Deleted => {
            let h = ham.hamiltonian.as_ref().expect("ham_4d carries H");
            let kept = h.parts.iter().filter(|(n, _)| n != "coupling").fold(QExpr::zero(), |acc, (_, e)| &acc + e);
            decoupled = VectorFieldSystem::from_hamiltonian(
                "ham_4d_decoupled",
                kept,
                h.pairs.clone(),
                ham.indep,
                ham.params.clone(),
                ham.constants.clone(),
                ham.relation.clone(),
            );
            &decoupled
        }
    };
    let target_b = reg.system("coupled_second_order")?;
    let pp = eliminate_to_second_order(
        source,
        &[(sym("q1"), sym("p1"), sym("dp1")), (sym("q2"), sym("p2"), sym("dp2"))],
    )?;
    let res_b = vec![
        ("p1''".to_string(), reduce(reg, &(&pp[0] - target_b.rhs_of(sym("dp1")).expect("dp1")))?),
        ("p2''".to_string(), reduce(reg, &(&pp[1] - target_b.rhs_of(sym("dp2")).expect("dp2")))?),
    ];
    let b = VerificationReport::from_residuals(format!("{id}/b"), res_b);

    let mut r = VerificationReport::new(id);
    r.push_child(a);
    r.push_child(b);
    Ok(r.timed(start))
}

pub fn check_particular_solution(solution_id: &str) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let reg = registry();
    let sol = reg.solution(solution_id)?;
    let sys = reg.system(&sol.system_id)?;
    let id = format!("solution/{solution_id}");
    let res = match &sol.kind {
        SolutionKind::Closed { bindings, generator_rules } => {
            let b: Bindings<Rational> = bindings.iter().cloned().collect();
            if let Some(s) = sys.state.iter().find(|s| !b.contains_key(s)) {
                return Err(VerifyError::structural(&id, format!("no binding for {}", name(*s))));
            }
            let d = generator_rules.iter().fold(QDerivation::new().with(sys.indep, QExpr::one()), |d, (g, r)| {
                d.with(*g, r.clone())
            });
            let mut res = Vec::new();
            for (s, f) in sys.state.iter().zip(&sys.rhs) {
                let lhs = d.apply(&b[s]);
                let rhs = subst(&id, f, &b)?;
                res.push((format!("d{}", name(*s)), reduce(reg, &(&lhs - &rhs))?));
            }
            res
        }
        SolutionKind::Restriction { source, zeroed, param_values } => {
            let src = reg.system(source)?;
            let mut b = zero_bindings(zeroed.iter().copied());
            b.extend(param_values.iter().cloned());
            let survivors: Vec<Symbol> = src.state.iter().copied().filter(|s| !zeroed.contains(s)).collect();
            if survivors != sys.state {
                return Err(VerifyError::structural(&id, "surviving components differ from the target state"));
            }
            let mut res = Vec::new();
            for (&s, f) in src.state.iter().zip(&src.rhs) {
                let g = subst(&id, f, &b)?;
                match sys.rhs_of(s) {
                    Some(want) => res.push((format!("d{}", name(s)), &g - want)),
                    None => res.push((format!("d{} on {} = 0", name(s), name(s)), g)),
                }
            }
            res
        }
    };
    Ok(VerificationReport::from_residuals(id, res).timed(start))
}

/// Quotient of the `dy` numerator by `y` for the given value of `alpha1`
/// (symbolic when `None`), if the division is exact.
pub fn invariant_divisor_quotient(alpha1: Option<Rational>) -> Result<Option<QPoly>, VerifyError> {
    let reg = registry();
    let five = reg.system("five_dim")?;
    let y = reg.sym("y");
    let mut f = five.rhs_of(y).expect("dy").clone();
    if let Some(a) = alpha1 {
        f = f.substitute(&[(reg.sym("alpha1"), QExpr::constant(a))].into())?;
    }
    let p = f.as_poly().ok_or_else(|| VerifyError::structural("invariant_divisor", "dy is not polynomial"))?;
    Ok(p.exact_quotient(&QPoly::var(y)))
}

pub fn check_invariant_divisor() -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let reg = registry();
    let t = &reg.table;
    let y = reg.sym("y");
    let mut r = VerificationReport::new("invariant_divisor");

    let expected = crate::symcore::parse_poly("x*w + z*q - 1", t)?;
    let mut zero = VerificationReport::new("invariant_divisor/alpha1=0");
    match invariant_divisor_quotient(Some(int(0)))? {
        Some(quot) => {
            let diff = QExpr::from(&quot - &expected);
            zero = VerificationReport::from_residuals(zero.check_id, vec![("quotient - (x*w + z*q - 1)".into(), diff)])
                .note(format!("dy = y*({})", quot.display(t)));
        }
        None => {
            zero.residuals.push(Residual { label: "y divides dy".into(), value: "not divisible".into() });
            zero.refresh();
        }
    }
    r.push_child(zero);

    let mut free = VerificationReport::new("invariant_divisor/alpha1_free");
    let f = reg.system("five_dim")?.rhs_of(y).expect("dy").as_poly().expect("polynomial");
    let remainder = QPoly::from_terms(f.terms().iter().filter(|(m, _)| m.degree_in(&[y]) == 0).cloned());
    let want = crate::symcore::parse_poly("alpha1*w*q", t)?;
    free.residuals.push(match invariant_divisor_quotient(None)? {
        None => Residual::zero("y does not divide dy"),
        Some(_) => Residual { label: "y does not divide dy".into(), value: "divisible".into() },
    });
    free.residuals.push(if remainder == want {
        Residual::zero("remainder - alpha1*w*q")
    } else {
        Residual { label: "remainder - alpha1*w*q".into(), value: (&remainder - &want).display(t).to_string() }
    });
    free.refresh();
    r.push_child(free.note(format!("remainder {}", remainder.display(t))));

    let five = reg.system("five_dim")?;
    let reduced = reg.system("reduced_alpha1_zero")?;
    let mut b = zero_bindings([y]);
    b.insert(reg.sym("alpha1"), QExpr::zero());
    let mut res = Vec::new();
    for (&s, f) in five.state.iter().zip(&five.rhs) {
        let g = subst("invariant_divisor", f, &b)?;
        let want = reduced.rhs_of(s).cloned().unwrap_or_else(QExpr::zero);
        res.push((format!("d{}", name(s)), &g - &want));
    }
    r.push_child(VerificationReport::from_residuals("invariant_divisor/reduced_system", res));
    Ok(r.timed(start))
}
