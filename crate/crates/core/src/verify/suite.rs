use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use super::checks::*;
use super::search::{first_integral_search, SearchConfig};
use super::{Residual, VerificationReport, VerifyError};
use crate::models::{registry, Variant};
use crate::scalar::int;
use crate::QExpr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    All,
    Symmetry,
    Charts,
    Integrals,
    Hamiltonian,
    Reduction,
    Solutions,
    Search,
}

impl Scope {
    pub const NAMES: [&'static str; 8] =
        ["all", "symmetry", "charts", "integrals", "hamiltonian", "reduction", "solutions", "search"];

    fn includes(self, other: Scope) -> bool {
        self == Scope::All || self == other
    }
}

impl FromStr for Scope {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "all" => Scope::All,
            "symmetry" => Scope::Symmetry,
            "charts" => Scope::Charts,
            "integrals" => Scope::Integrals,
            "hamiltonian" => Scope::Hamiltonian,
            "reduction" => Scope::Reduction,
            "solutions" => Scope::Solutions,
            "search" => Scope::Search,
            other => return Err(format!("unknown scope `{other}`")),
        })
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = [
            Scope::All,
            Scope::Symmetry,
            Scope::Charts,
            Scope::Integrals,
            Scope::Hamiltonian,
            Scope::Reduction,
            Scope::Solutions,
            Scope::Search,
        ]
        .iter()
        .position(|s| s == self)
        .expect("listed");
        f.write_str(Self::NAMES[i])
    }
}

/// Which variants of disputed maps to run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum VariantSelection {
    Printed,
    Corrected,
    /// Both, combined into a composite that passes iff exactly one verifies.
    #[default]
    Both,
}

impl FromStr for VariantSelection {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "printed" => Ok(VariantSelection::Printed),
            "corrected" => Ok(VariantSelection::Corrected),
            "both" => Ok(VariantSelection::Both),
            other => Err(format!("unknown variant `{other}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub variant: VariantSelection,
    /// Restrict map-based checks to this map.
    pub map: Option<String>,
    pub seed: u64,
    pub samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { variant: VariantSelection::Both, map: None, seed: 20, samples: 20 }
    }
}

type Job = Box<dyn Fn() -> Result<VerificationReport, VerifyError> + Send + Sync>;

fn job(f: impl Fn() -> Result<VerificationReport, VerifyError> + Send + Sync + 'static) -> Job {
    Box::new(f)
}

fn error_report(id: String, e: &VerifyError) -> VerificationReport {
    let mut r = VerificationReport::new(id);
    r.residuals.push(Residual { label: "error".into(), value: e.to_string() });
    r.refresh();
    r
}

/// `a` and `b` agree up to a constant factor.
fn proportional_residual(a: &QExpr, b: &QExpr) -> QExpr {
    let (Some(pa), Some(pb)) = (a.as_poly(), b.as_poly()) else {
        return a - b;
    };
    match (pa.leading(), pb.leading()) {
        (Some((_, ca)), Some((_, cb))) => &a.scale(&(cb.clone() / ca.clone())) - b,
        _ => a - b,
    }
}

fn search_report(
    system_id: &'static str,
    state_degree: u32,
    indep_degree: u32,
    lambdas: Vec<i64>,
    expected: Option<&'static str>,
) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let config = SearchConfig::new(state_degree, indep_degree, lambdas.iter().map(|&l| int(l)).collect());
    let found = first_integral_search(system_id, &config)?;
    let table = &registry().table;
    let id = format!("search/{system_id}");
    let mut r = match expected {
        Some(integral_id) => {
            let want = &registry().integral(integral_id)?.expr;
            let mut r = VerificationReport::from_residuals(
                id,
                found.iter().map(|f| (format!("found ~ {integral_id}"), proportional_residual(&f.expr, want))).collect(),
            );
            r.residuals.push(if found.len() == 1 {
                Residual::zero("dimension - 1")
            } else {
                Residual { label: "dimension - 1".into(), value: format!("{}", found.len() as i64 - 1) }
            });
            r.refresh();
            r
        }
        None => {
            let mut r = VerificationReport::new(id);
            r.residuals.push(if found.is_empty() {
                Residual::zero("dimension")
            } else {
                Residual { label: "dimension".into(), value: found.len().to_string() }
            });
            r.refresh();
            r
        }
    };
    let ls: Vec<String> = lambdas.iter().map(|l| l.to_string()).collect();
    r.notes.push(format!(
        "state degree <= {state_degree}, indep degree <= {indep_degree}, lambda in {{{}}}",
        ls.join(", ")
    ));
    for f in &found {
        r.notes.push(format!(
            "found (lambda {}): {}",
            crate::scalar::fmt_rational(&f.lambda),
            f.expr.to_infix(table)
        ));
    }
    Ok(r.timed(start))
}

fn jobs(scope: Scope, opts: &SuiteOptions) -> Vec<(String, Job)> {
    let mut out: Vec<(String, Job)> = Vec::new();
    let map_ok = |m: &str| opts.map.as_deref().is_none_or(|f| f == m);
    let variant = opts.variant;
    let mut push = |id: &str, j: Job| out.push((id.to_string(), j));

    if scope == Scope::All && opts.map.is_none() {
        push("degree/five_dim", job(|| check_vector_field_degree("five_dim", 3)));
        push("degree/linear_xz", job(|| check_vector_field_degree("linear_xz", 1)));
        push("degree/K1_sys", job(|| check_vector_field_degree("K1_sys", 3)));
    }

    if scope.includes(Scope::Symmetry) {
        let maps: [(&'static str, &'static str); 7] = [
            ("five_dim", "s0_5d"),
            ("five_dim", "s1_5d"),
            ("five_dim", "s2_5d"),
            ("ham_4d", "s0_4d"),
            ("ham_4d", "s1_4d"),
            ("ham_4d", "s2_4d"),
            ("ham_4d", "pi_4d"),
        ];
        for (sys, m) in maps {
            if !map_ok(m) {
                continue;
            }
            if registry().is_disputed(m) {
                match variant {
                    VariantSelection::Both => push(&format!("disputed/{m}"), job(move || check_disputed(m))),
                    VariantSelection::Printed => {
                        push(m, job(move || check_symmetry(sys, m, Variant::Printed)));
                    }
                    VariantSelection::Corrected => {
                        push(m, job(move || check_symmetry(sys, m, Variant::Corrected)));
                    }
                }
            } else {
                push(m, job(move || check_symmetry(sys, m, Variant::Printed)));
            }
        }
    }

    if scope.includes(Scope::Charts) {
        for m in ["chart0", "chart1", "chart2"] {
            if !map_ok(m) {
                continue;
            }
            if registry().is_disputed(m) {
                match variant {
                    VariantSelection::Both => push(&format!("disputed/{m}"), job(move || check_disputed(m))),
                    VariantSelection::Printed => push(m, job(move || check_chart("five_dim", m, Variant::Printed))),
                    VariantSelection::Corrected => {
                        push(m, job(move || check_chart("five_dim", m, Variant::Corrected)))
                    }
                }
            } else {
                push(m, job(move || check_chart("five_dim", m, Variant::Printed)));
            }
        }
        if variant == VariantSelection::Both && (map_ok("s2_5d") || map_ok("chart2")) {
            push("disputed/s2_5d_vs_chart2", job(check_typo_consistency));
        }
    }

    if opts.map.is_some() {
        return out;
    }

    if scope.includes(Scope::Integrals) {
        push("integral/ywq", job(|| check_first_integral("five_dim", "ywq")));
        push("integral/I1", job(|| check_first_integral("K1_sys", "I1")));
        push("integral/I2", job(|| check_first_integral("tildeK2_sys", "I2")));
        push(
            "integral/perturbed",
            job(|| {
                let start = Instant::now();
                let e = crate::symcore::parse_expr("y - 2*w*q", &registry().table)?;
                let inner = check_first_integral_expr("five_dim", "y-2wq", &e, &int(-1))?;
                Ok(VerificationReport::expect_failure("integral/five_dim/perturbed_detector", inner).timed(start))
            }),
        );
    }

    if scope.includes(Scope::Hamiltonian) {
        for s in ["ham_4d", "K1_sys", "K2_sys", "tildeK2_sys"] {
            push(s, job(move || check_hamiltonian_consistency(s)));
        }
    }

    if scope.includes(Scope::Reduction) {
        push("reduction", job(check_reduction_5d_to_4d));
        push(
            "reduction/detector",
            job(|| {
                let start = Instant::now();
                let inner = check_reduction_with(ReductionAnsatz::DropExponential)?;
                Ok(VerificationReport::expect_failure("reduction/five_dim/ham_4d/y=wq_detector", inner).timed(start))
            }),
        );
    }

    if scope.includes(Scope::Solutions) {
        for s in ["linear_xz_sol", "second_order_sol_a", "second_order_sol_b", "rest_wq_zero"] {
            push(s, job(move || check_particular_solution(s)));
        }
        push("invariant_divisor", job(check_invariant_divisor));
        push("second_order_forms", job(check_second_order_forms));
    }

    if scope.includes(Scope::Search) {
        push("search/five_dim", job(|| search_report("five_dim", 2, 0, vec![-1], Some("ywq"))));
        push("search/K1_sys", job(|| search_report("K1_sys", 4, 0, vec![0], Some("I1"))));
        push("search/ham_4d", job(|| search_report("ham_4d", 3, 2, vec![0, -1, 1], None)));
    }

    if scope == Scope::All {
        let (samples, seed) = (opts.samples, opts.seed);
        push("group/relations", job(move || crate::weyl::verify_group_relations(samples, seed)));
    }
    out
}

/// Runs every check in `scope` concurrently; reports come back in the
/// fixed registry order. Errors become failing reports naming the error.
pub fn run_suite(scope: Scope, opts: &SuiteOptions) -> Vec<VerificationReport> {
    jobs(scope, opts)
        .into_par_iter()
        .map(|(id, j)| j().unwrap_or_else(|e| error_report(id, &e)))
        .collect()
}
