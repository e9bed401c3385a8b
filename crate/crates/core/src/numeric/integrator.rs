use super::compiled::CompiledSystem;
use super::{Float, IntegratorMeta, NumericConfig, NumericError, Output, Params, Termination, Trajectory};
use crate::models::{registry, VectorFieldSystem};

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// 5th-order weights minus 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates the registered system `system_id`.
pub fn integrate<T: Float>(
    system_id: &str,
    params: &Params<T>,
    init: &[T],
    span: (T, T),
    output: Output<T>,
    cfg: &NumericConfig,
) -> Result<Trajectory<T>, NumericError> {
    let sys = registry().system(system_id)?;
    integrate_system(sys, params, init, span, output, cfg)
}

/// Integrates an arbitrary system over the shared symbol table.
pub fn integrate_system<T: Float>(
    sys: &VectorFieldSystem,
    params: &Params<T>,
    init: &[T],
    span: (T, T),
    output: Output<T>,
    cfg: &NumericConfig,
) -> Result<Trajectory<T>, NumericError> {
    let (u0, u1) = span;
    if init.len() != sys.dim() {
        return Err(NumericError::Usage(format!("{} initial values for a {}-dimensional system", init.len(), sys.dim())));
    }
    if !(cfg.abs_tol > 0.0 && cfg.rel_tol > 0.0) {
        return Err(NumericError::Usage("tolerances must be positive".into()));
    }
    if u0 == u1 || !u0.is_finite() || !u1.is_finite() {
        return Err(NumericError::Usage("empty or non-finite span".into()));
    }
    let indep_name = registry().table.name(sys.indep);
    if sys.rhs.iter().any(|f| f.den().contains(sys.indep)) && (u0 * u1 <= T::zero()) {
        return Err(NumericError::Domain(format!("span crosses {indep_name}=0")));
    }

    let dir = if u1 > u0 { T::one() } else { -T::one() };
    let targets: Vec<T> = match &output {
        Output::Adaptive => vec![u1],
        Output::FixedStep(h) => {
            let h = h.abs();
            if !(h > T::zero()) {
                return Err(NumericError::Usage("fixed step must be positive".into()));
            }
            let n = ((u1 - u0).abs() / h).round().to_usize().unwrap_or(0);
            if n == 0 {
                return Err(NumericError::Usage("fixed step longer than the span".into()));
            }
            (1..=n).map(|k| u0 + dir * h * T::lit(k as f64)).collect()
        }
        Output::At(ts) => {
            if ts.first() != Some(&u0) {
                return Err(NumericError::Usage("sample times must start at the initial time".into()));
            }
            if !ts.windows(2).all(|w| (w[1] - w[0]) * dir > T::zero()) {
                return Err(NumericError::Usage("sample times must be strictly monotone along the span".into()));
            }
            ts[1..].to_vec()
        }
    };
    let record_every_step = matches!(output, Output::Adaptive);
    let mode = match output {
        Output::Adaptive => "adaptive",
        Output::FixedStep(_) => "fixed_step",
        Output::At(_) => "at",
    };

    let mut f = CompiledSystem::new(sys, params);
    let n = sys.dim();
    let mut k: Vec<Vec<T>> = vec![vec![T::zero(); n]; 7];
    f.eval(u0, init, &mut k[0]);
    if k[0].iter().any(|v| !v.is_finite()) {
        return Err(NumericError::Domain("initial point is singular for the system".into()));
    }

    let lit = T::lit;
    let (abs_tol, rel_tol) = (lit(cfg.abs_tol), lit(cfg.rel_tol));
    let mut times = vec![u0];
    let mut states = vec![init.to_vec()];
    let mut u = u0;
    let mut y = init.to_vec();
    let mut h = (u1 - u0).abs() * lit(1e-3);
    let mut accepted = 0;
    let mut rejected = 0;
    let mut termination = Termination::Completed;
    let mut tmp = vec![T::zero(); n];
    let mut y_new = vec![T::zero(); n];
    let mut next = 0;

    while next < targets.len() {
        let target = targets[next];
        let remaining = (target - u).abs();
        let min_step = lit(cfg.min_step) * T::one().max(u.abs());
        let hits = h >= remaining;
        let step = if hits { remaining } else { h };
        if step < min_step && !(hits && remaining > T::zero()) || accepted + rejected >= cfg.max_steps {
            termination = Termination::StepUnderflow;
            break;
        }
        let hs = dir * step;
        for s in 1..7 {
            for i in 0..n {
                let mut acc = y[i];
                for (j, kj) in k.iter().enumerate().take(s) {
                    if A[s][j] != 0.0 {
                        acc = acc + hs * lit(A[s][j]) * kj[i];
                    }
                }
                tmp[i] = acc;
            }
            let (head, tail) = k.split_at_mut(s);
            let _ = head;
            f.eval(u + hs * lit(C[s]), &tmp, &mut tail[0]);
        }
        // Stage 7 is evaluated at the 5th-order solution (FSAL).
        y_new.copy_from_slice(&tmp);
        let mut err = T::zero();
        for i in 0..n {
            let mut e = T::zero();
            for (j, kj) in k.iter().enumerate() {
                if E[j] != 0.0 {
                    e = e + lit(E[j]) * kj[i];
                }
            }
            let sc = abs_tol + rel_tol * y[i].abs().max(y_new[i].abs());
            err = err.max((hs * e).abs() / sc);
        }
        if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            if step <= min_step {
                termination = Termination::BlowUp;
                break;
            }
            rejected += 1;
            h = step * lit(cfg.min_factor);
            continue;
        }
        let factor = if err == T::zero() {
            lit(cfg.max_factor)
        } else {
            (lit(cfg.safety) * err.powf(lit(-0.2))).max(lit(cfg.min_factor)).min(lit(cfg.max_factor))
        };
        if err <= T::one() {
            accepted += 1;
            u = if hits { target } else { u + hs };
            std::mem::swap(&mut y, &mut y_new);
            let last = k.pop().expect("seven stages");
            k.insert(0, last);
            if y.iter().fold(T::zero(), |m, v| m.max(v.abs())) > lit(cfg.blow_up) {
                termination = Termination::BlowUp;
                break;
            }
            if hits {
                next += 1;
            }
            if hits || record_every_step {
                times.push(u);
                states.push(y.clone());
            }
            // Keep the unclipped step size when a step was shortened to hit
            // a sample time.
            h = if hits { h.max(step * factor) } else { step * factor };
        } else {
            rejected += 1;
            h = step * factor.min(T::one());
        }
    }

    Ok(Trajectory {
        system_id: sys.id.clone(),
        params: *params,
        times,
        states,
        meta: IntegratorMeta {
            abs_tol: cfg.abs_tol,
            rel_tol: cfg.rel_tol,
            accepted_steps: accepted,
            rejected_steps: rejected,
            termination,
            mode: mode.to_string(),
        },
    })
}
