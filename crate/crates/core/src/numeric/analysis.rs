use super::compiled::{base_point, CompiledExpr, CompiledSystem};
use super::{Float, NumericConfig, NumericError, Params, Trajectory};
use crate::models::{registry, Clock, Variant};

/// Relative drift of a first integral along a trajectory:
/// `max |v - v0| / max(|v0|, 1e-12)` with `v = I * exp(-lambda u)`.
pub fn invariant_drift<T: Float>(traj: &Trajectory<T>, integral_id: &str) -> Result<f64, NumericError> {
    let reg = registry();
    let integral = reg.integral(integral_id)?;
    if integral.system_id != traj.system_id {
        return Err(NumericError::Usage(format!(
            "integral {integral_id} belongs to {}, trajectory is on {}",
            integral.system_id, traj.system_id
        )));
    }
    let sys = reg.system(&traj.system_id)?;
    let expr = CompiledExpr::<f64>::new(&integral.expr);
    let lambda = f64::from_rational(&integral.lambda);
    let params = Params {
        alpha: traj.params.alpha.map(|a| a.to_f64().unwrap_or(f64::NAN)),
        eta: traj.params.eta.to_f64().unwrap_or(f64::NAN),
    };
    let mut x = base_point(&params);
    let mut values = Vec::with_capacity(traj.len());
    for (u, y) in traj.times.iter().zip(&traj.states) {
        let u = u.to_f64().unwrap_or(f64::NAN);
        x[sys.indep.index()] = u;
        for (s, v) in sys.state.iter().zip(y) {
            x[s.index()] = v.to_f64().unwrap_or(f64::NAN);
        }
        values.push(expr.eval(&x) * (-lambda * u).exp());
    }
    let Some(&v0) = values.first() else {
        return Err(NumericError::Usage("empty trajectory".into()));
    };
    let dev = values.iter().fold(0.0f64, |m, v| m.max((v - v0).abs()));
    Ok(dev / v0.abs().max(1e-12))
}

/// Max-norm of `(y[k+1] - y[k-1]) / 2h - f(u_k, y_k)` over interior samples.
/// The samples must be equally spaced.
pub fn dynamics_residual<T: Float>(
    traj: &Trajectory<T>,
    system_id: &str,
    params: &Params<T>,
) -> Result<f64, NumericError> {
    let sys = registry().system(system_id)?;
    if traj.len() < 5 {
        return Err(NumericError::Usage("need at least 5 samples".into()));
    }
    if traj.states.iter().any(|s| s.len() != sys.dim()) {
        return Err(NumericError::Usage(format!("state dimension does not match {system_id}")));
    }
    let t: Vec<f64> = traj.times.iter().map(|u| u.to_f64().unwrap_or(f64::NAN)).collect();
    let h = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    let tol = 10.0 * f64::EPSILON.sqrt() * h.abs().max(f64::MIN_POSITIVE);
    if t.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > tol) {
        return Err(NumericError::Usage("samples are not equally spaced".into()));
    }
    let params = Params {
        alpha: params.alpha.map(|a| a.to_f64().unwrap_or(f64::NAN)),
        eta: params.eta.to_f64().unwrap_or(f64::NAN),
    };
    let mut f = CompiledSystem::new(sys, &params);
    let to64 = |s: &[T]| s.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect::<Vec<f64>>();
    let mut out = vec![0.0; sys.dim()];
    let mut worst = 0.0f64;
    for k in 1..traj.len() - 1 {
        let (prev, cur, next) = (to64(&traj.states[k - 1]), to64(&traj.states[k]), to64(&traj.states[k + 1]));
        f.eval(t[k], &cur, &mut out);
        for i in 0..sys.dim() {
            let r = (next[i] - prev[i]) / (2.0 * h) - out[i];
            worst = if r.is_nan() { f64::NAN } else { worst.max(r.abs()) };
        }
    }
    Ok(worst)
}

/// Image of a trajectory under a map: sample-wise evaluation of the
/// components, transformed parameters and independent variable.
pub fn pushforward<T: Float>(
    traj: &Trajectory<T>,
    map_id: &str,
    variant: Variant,
    cfg: &NumericConfig,
) -> Result<Trajectory<T>, NumericError> {
    let reg = registry();
    let map = reg.map(map_id, variant)?;
    if map.source != traj.system_id {
        return Err(NumericError::Usage(format!(
            "map {map_id} applies to {}, trajectory is on {}",
            map.source, traj.system_id
        )));
    }
    let source = reg.system(&map.source)?;
    let target = reg.system(&map.target)?;
    let comps: Vec<(String, CompiledExpr<T>)> = target
        .state
        .iter()
        .map(|s| {
            map.component(*s)
                .map(|e| (reg.table.name(*s).to_string(), CompiledExpr::new(e)))
                .ok_or_else(|| NumericError::Usage(format!("map {map_id} has no component for {}", reg.table.name(*s))))
        })
        .collect::<Result<_, _>>()?;

    let mut x = base_point(&traj.params);
    let mut times = Vec::with_capacity(traj.len());
    let mut states = Vec::with_capacity(traj.len());
    for (index, (u, y)) in traj.times.iter().zip(&traj.states).enumerate() {
        x[source.indep.index()] = *u;
        for (s, v) in source.state.iter().zip(y) {
            x[s.index()] = *v;
        }
        let new_u = match map.clock {
            Clock::Linear => *u * T::lit(f64::from(map.indep_sign())),
            Clock::ExpNeg => {
                let s = (-*u).exp();
                x[target.indep.index()] = s;
                s
            }
        };
        let mut image = Vec::with_capacity(comps.len());
        for (name, c) in &comps {
            let (n, d) = c.eval_parts(&x);
            let mag = d.abs().to_f64().unwrap_or(f64::NAN);
            if !(mag >= cfg.near_singular) {
                return Err(NumericError::NearSingular { index, component: name.clone(), magnitude: mag });
            }
            image.push(n / d);
        }
        times.push(new_u);
        states.push(image);
    }
    let reverse = match map.clock {
        Clock::Linear => map.indep_sign() < 0,
        Clock::ExpNeg => true,
    };
    if reverse {
        times.reverse();
        states.reverse();
    }
    let alpha = map.action.apply(&traj.params.alpha);
    let params = Params { alpha, eta: traj.params.eta * T::lit(f64::from(map.eta_sign())) };
    let mut meta = traj.meta.clone();
    meta.mode = format!("pushforward:{map_id}");
    Ok(Trajectory { system_id: map.target.clone(), params, times, states, meta })
}
