use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use super::{Float, NumericError, Trajectory};
use crate::models::registry;

fn io(e: impl std::fmt::Display) -> NumericError {
    NumericError::Io(e.to_string())
}

fn state_names(system_id: &str) -> Result<Vec<String>, NumericError> {
    let reg = registry();
    let sys = reg.system(system_id)?;
    Ok(sys.state.iter().map(|s| reg.table.name(*s).to_string()).collect())
}

/// CSV with header `u,<state symbols>`; values carry 17 significant digits.
pub fn write_csv<T: Float, W: Write>(traj: &Trajectory<T>, out: W) -> Result<(), NumericError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["u".to_string()];
    header.extend(state_names(&traj.system_id)?);
    w.write_record(&header).map_err(io)?;
    for (u, y) in traj.times.iter().zip(&traj.states) {
        let row = std::iter::once(u).chain(y).map(|v| format!("{v:.16e}"));
        w.write_record(row).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Metadata describing a trajectory written by [`write_csv`].
pub fn sidecar_json<T: Float>(traj: &Trajectory<T>) -> Result<Value, NumericError> {
    let reg = registry();
    let sys = reg.system(&traj.system_id)?;
    let f = |v: T| v.to_f64().unwrap_or(f64::NAN);
    Ok(json!({
        "system": traj.system_id,
        "independent": reg.table.name(sys.indep),
        "state": state_names(&traj.system_id)?,
        "params": {
            "alpha0": f(traj.params.alpha[0]),
            "alpha1": f(traj.params.alpha[1]),
            "alpha2": f(traj.params.alpha[2]),
            "eta": f(traj.params.eta),
        },
        "samples": traj.len(),
        "float": std::any::type_name::<T>(),
        "integrator": traj.meta,
    }))
}

/// Writes `path` as CSV and the sidecar next to it with extension `json`.
/// Returns the sidecar path.
pub fn write_trajectory<T: Float>(traj: &Trajectory<T>, path: &Path) -> Result<PathBuf, NumericError> {
    let file = std::fs::File::create(path).map_err(io)?;
    write_csv(traj, std::io::BufWriter::new(file))?;
    let side = path.with_extension("json");
    let text = serde_json::to_string_pretty(&sidecar_json(traj)?).map_err(io)?;
    std::fs::write(&side, text + "\n").map_err(io)?;
    Ok(side)
}
