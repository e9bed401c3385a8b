use backlund_core::models::{registry, Variant};
use backlund_core::numeric::*;
use backlund_core::symcore::parse_expr;

const INIT_5D: [f64; 5] = [0.3, 0.4, 0.2, 0.5, 0.6];

fn params() -> Params<f64> {
    Params::normalized(0.3, 0.2, 0.7)
}

fn cfg() -> NumericConfig {
    NumericConfig::default()
}

fn five_dim(p: &Params<f64>, h: f64) -> Trajectory<f64> {
    integrate("five_dim", p, &INIT_5D, (0.0, 1.0), Output::FixedStep(h), &cfg()).unwrap()
}

fn close(a: &[f64], b: &[f64]) {
    assert!(a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12), "{a:?} vs {b:?}");
}

#[test]
fn linear_xz_matches_closed_form() {
    let p = Params::normalized(0.0, 0.5, 0.0);
    let tr = integrate("linear_xz", &p, &[0.0, 0.0], (0.0, 1.0), Output::Adaptive, &cfg()).unwrap();
    assert_eq!(tr.meta.termination, Termination::Completed);
    let (t, y) = tr.last().unwrap();
    assert_eq!(t, 1.0);
    assert!((y[0] - (0.5f64.exp() - 1.0)).abs() < 1e-8, "{}", y[0]);
    assert!(tr.is_well_formed());
}

#[test]
fn equilibrium_stays_put() {
    let (a0, a2, eta): (f64, f64, f64) = (0.25, 0.5, 0.3);
    let p = Params::normalized(a0, a2, eta);
    let eq = [-1.0 / (2.0 * a2), eta / (2.0 * a0)];
    let tr = integrate("linear_xz", &p, &eq, (0.0, 2.0), Output::FixedStep(0.1), &cfg()).unwrap();
    for s in &tr.states {
        assert!((s[0] - eq[0]).abs() < 1e-14 && (s[1] - eq[1]).abs() < 1e-14);
    }
}

#[test]
fn singular_independent_variable_is_refused() {
    let err = integrate("ham_4d", &params(), &[0.1, 0.2, 0.3, 0.4], (-1.0, 1.0), Output::Adaptive, &cfg())
        .unwrap_err();
    assert!(matches!(&err, NumericError::Domain(m) if m.contains("span crosses s=0")), "{err}");
    let err = integrate("ham_4d", &params(), &[0.1, 0.2, 0.3, 0.4], (0.0, 1.0), Output::Adaptive, &cfg())
        .unwrap_err();
    assert!(matches!(err, NumericError::Domain(_)));
}

#[test]
fn usage_errors() {
    let p = params();
    assert!(matches!(
        integrate("five_dim", &p, &[0.0; 3], (0.0, 1.0), Output::Adaptive, &cfg()),
        Err(NumericError::Usage(_))
    ));
    assert!(matches!(
        integrate("five_dim", &p, &INIT_5D, (0.0, 0.0), Output::Adaptive, &cfg()),
        Err(NumericError::Usage(_))
    ));
    assert!(matches!(
        integrate("five_dim", &p, &INIT_5D, (0.0, 1.0), Output::At(vec![0.0, 0.5, 0.4]), &cfg()),
        Err(NumericError::Usage(_))
    ));
    assert!(matches!(
        integrate("nope", &p, &INIT_5D, (0.0, 1.0), Output::Adaptive, &cfg()),
        Err(NumericError::Model(_))
    ));
}

#[test]
fn blow_up_is_reported() {
    // dx = -x^2 w + ... with large x w < 0 escapes in finite time.
    let tr = integrate("five_dim", &params(), &[5.0, 0.0, 0.0, -5.0, 0.0], (0.0, 10.0), Output::Adaptive, &cfg())
        .unwrap();
    assert_ne!(tr.meta.termination, Termination::Completed);
}

#[test]
fn integral_drift_is_small() {
    let tr = integrate("five_dim", &params(), &INIT_5D, (0.0, 1.0), Output::Adaptive, &cfg()).unwrap();
    let d = invariant_drift(&tr, "ywq").unwrap();
    assert!(d < 1e-6, "{d}");

    let tr = integrate("K1_sys", &params(), &[0.4, 0.3], (1.0, 2.0), Output::Adaptive, &cfg()).unwrap();
    let d = invariant_drift(&tr, "I1").unwrap();
    assert!(d < 1e-6, "{d}");

    assert!(matches!(invariant_drift(&tr, "ywq"), Err(NumericError::Usage(_))));
}

#[test]
fn perturbed_system_drifts() {
    let reg = registry();
    let mut sys = reg.system("five_dim").unwrap().clone();
    sys.rhs[1] = &sys.rhs[1] + &parse_expr("1/100", &reg.table).unwrap();
    let tr = integrate_system(&sys, &params(), &INIT_5D, (0.0, 1.0), Output::Adaptive, &cfg()).unwrap();
    let d = invariant_drift(&tr, "ywq").unwrap();
    assert!(d > 1e-3, "{d}");
}

#[test]
fn tighter_tolerance_reduces_drift() {
    let run = |tol: f64| {
        let c = cfg().with_tolerances(tol, tol);
        let tr = integrate("five_dim", &params(), &INIT_5D, (0.0, 2.0), Output::Adaptive, &c).unwrap();
        invariant_drift(&tr, "ywq").unwrap()
    };
    let (loose, tight) = (run(1e-6), run(1e-8));
    assert!(loose >= 10.0 * tight, "{loose} vs {tight}");
}

#[test]
fn self_residual_and_convergence() {
    let p = params();
    let r = dynamics_residual(&five_dim(&p, 1e-3), "five_dim", &p).unwrap();
    assert!(r < 1e-5, "{r}");
    let rs: Vec<f64> = [0.04, 0.02, 0.01, 0.005].iter().map(|&h| dynamics_residual(&five_dim(&p, h), "five_dim", &p).unwrap()).collect();
    for w in rs.windows(2) {
        let ratio = w[0] / w[1];
        assert!((3.0..5.0).contains(&ratio), "{rs:?}");
    }
}

#[test]
fn residual_needs_uniform_samples() {
    let p = params();
    let tr = integrate("five_dim", &p, &INIT_5D, (0.0, 1.0), Output::At(vec![0.0, 0.1, 0.3, 0.4, 0.5, 0.6]), &cfg())
        .unwrap();
    assert!(matches!(dynamics_residual(&tr, "five_dim", &p), Err(NumericError::Usage(_))));
}

#[test]
fn sample_times_are_hit_exactly() {
    let ts = vec![0.0, 0.25, 0.5, 1.0];
    let tr = integrate("five_dim", &params(), &INIT_5D, (0.0, 1.0), Output::At(ts.clone()), &cfg()).unwrap();
    assert_eq!(tr.times, ts);
    let back = integrate("five_dim", &params(), &INIT_5D, (1.0, 0.0), Output::FixedStep(0.25), &cfg()).unwrap();
    assert_eq!(back.times, vec![1.0, 0.75, 0.5, 0.25, 0.0]);
}

#[test]
fn s1_pushforward_solves_the_transformed_system() {
    let p = params();
    let tr = five_dim(&p, 1e-3);
    let img = pushforward(&tr, "s1_5d", Variant::Printed, &cfg()).unwrap();
    close(&img.params.alpha, &[0.8, -0.5, 0.7]);
    assert_eq!(img.params.eta, p.eta);
    let r = dynamics_residual(&img, "five_dim", &img.params).unwrap();
    assert!(r < 1e-4, "{r}");
}

#[test]
fn s1_with_alpha1_zero_is_identity() {
    let p = Params::new(0.4, 0.0, 0.6, 0.7);
    let tr = five_dim(&p, 1e-2);
    let img = pushforward(&tr, "s1_5d", Variant::Printed, &cfg()).unwrap();
    assert_eq!(img.times, tr.times);
    for (a, b) in img.states.iter().zip(&tr.states) {
        close(a, b);
    }
}

#[test]
fn s0_pushforward_params_and_residual() {
    let p = params();
    // z decays towards 0, where the image is singular; stay where 1/z^2 is moderate.
    let tr = integrate("five_dim", &p, &INIT_5D, (0.0, 0.1), Output::FixedStep(2.5e-4), &cfg()).unwrap();
    let img = pushforward(&tr, "s0_5d", Variant::Printed, &cfg()).unwrap();
    close(&img.params.alpha, &[-0.3, 1.1, 0.2]);
    assert_eq!(img.params.eta, -0.7);
    let r = dynamics_residual(&img, "five_dim", &img.params).unwrap();
    assert!(r < 1e-4, "{r}");
}

#[test]
fn s2_variants_separate_numerically() {
    // The image carries 1/x^2 terms, so the difference quotient needs a finer grid.
    let p = params();
    let tr = five_dim(&p, 2.5e-4);
    let good = pushforward(&tr, "s2_5d", Variant::Corrected, &cfg()).unwrap();
    let bad = pushforward(&tr, "s2_5d", Variant::Printed, &cfg()).unwrap();
    let rg = dynamics_residual(&good, "five_dim", &good.params).unwrap();
    let rb = dynamics_residual(&bad, "five_dim", &bad.params).unwrap();
    assert!(rg < 1e-4, "{rg}");
    assert!(rb > 1e-2, "{rb}");
}

#[test]
fn wrong_parameters_are_detected() {
    let p = params();
    let img = pushforward(&five_dim(&p, 1e-3), "s1_5d", Variant::Printed, &cfg()).unwrap();
    let mut wrong = img.params;
    wrong.alpha[0] += 1.0;
    let r = dynamics_residual(&img, "five_dim", &wrong).unwrap();
    assert!(r > 1e-2, "{r}");
}

#[test]
fn time_reversing_map_on_ham_4d() {
    let p = params();
    let tr = integrate("ham_4d", &p, &[0.3, 0.4, 0.2, 0.5], (1.0, 1.5), Output::FixedStep(1e-3), &cfg()).unwrap();
    let img = pushforward(&tr, "s0_4d", Variant::Printed, &cfg()).unwrap();
    assert!(img.times.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(img.times[0], -1.5);
    let r = dynamics_residual(&img, "ham_4d", &img.params).unwrap();
    assert!(r < 1e-4, "{r}");
}

#[test]
fn near_singular_sample_is_refused() {
    let p = params();
    // x = 0 at t = 0 makes the s2 image singular.
    let init = [0.0, 0.4, 0.2, 0.5, 0.6];
    let tr = integrate("five_dim", &p, &init, (0.0, 0.1), Output::FixedStep(0.01), &cfg()).unwrap();
    let err = pushforward(&tr, "s2_5d", Variant::Corrected, &cfg()).unwrap_err();
    assert!(matches!(err, NumericError::NearSingular { index: 0, .. }), "{err}");
}

#[test]
fn reduction_trajectory_solves_ham_4d() {
    let p = params();
    let (s_hi, h, n) = (0.9, 1e-3, 400);
    let times: Vec<f64> = (0..=n).map(|k| -(s_hi - k as f64 * h).ln()).collect();
    let t0 = times[0];
    let (x, z, w, q) = (0.3, 0.2, 0.5, 0.6);
    let init = [x, w * q + (-t0).exp(), z, w, q];
    let c = cfg().with_tolerances(1e-12, 1e-12);
    let tr = integrate("five_dim", &p, &init, (t0, times[n]), Output::At(times), &c).unwrap();
    let img = pushforward(&tr, "reduce_5d_4d", Variant::Printed, &cfg()).unwrap();
    assert_eq!(img.system_id, "ham_4d");
    assert!(img.times.windows(2).all(|w| w[1] > w[0]));
    let r = dynamics_residual(&img, "ham_4d", &img.params).unwrap();
    assert!(r < 1e-4, "{r}");

    // Dropping the exponential from the initial data breaks it.
    let init = [x, w * q, z, w, q];
    let tr = integrate("five_dim", &p, &init, (t0, *tr.times.last().unwrap()), Output::At(tr.times.clone()), &c)
        .unwrap();
    let img = pushforward(&tr, "reduce_5d_4d", Variant::Printed, &cfg()).unwrap();
    let r = dynamics_residual(&img, "ham_4d", &img.params).unwrap();
    assert!(r > 1e-2, "{r}");
}

#[test]
fn integration_is_deterministic() {
    let a = integrate("five_dim", &params(), &INIT_5D, (0.0, 1.0), Output::Adaptive, &cfg()).unwrap();
    let b = integrate("five_dim", &params(), &INIT_5D, (0.0, 1.0), Output::Adaptive, &cfg()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn f32_smoke() {
    let p = Params::<f32>::normalized(0.0, 0.5, 0.0);
    let c = cfg().with_tolerances(1e-6, 1e-6);
    let tr = integrate("linear_xz", &p, &[0.0f32, 0.0], (0.0, 1.0), Output::Adaptive, &c).unwrap();
    let (_, y) = tr.last().unwrap();
    assert!((y[0] - (0.5f32.exp() - 1.0)).abs() < 1e-5);
}

#[test]
fn csv_and_sidecar() {
    let p = Params::normalized(0.0, 0.5, 0.0);
    let tr = integrate("linear_xz", &p, &[0.0, 0.0], (0.0, 1.0), Output::FixedStep(0.5), &cfg()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.csv");
    let side = write_trajectory(&tr, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "u,x,z");
    assert_eq!(lines.len(), 4);
    let last: f64 = lines[3].split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(last, tr.states[2][0]);
    let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(side).unwrap()).unwrap();
    assert_eq!(meta["system"], "linear_xz");
    assert_eq!(meta["integrator"]["termination"], "completed");
    assert_eq!(meta["samples"], 3);
}
