//! Floating-point realization: Dormand-Prince 5(4) integration generic over
//! the float type, invariant-drift monitoring, pushforward of trajectories
//! through the maps, and central-difference dynamics residuals.

mod analysis;
mod compiled;
mod export;
mod integrator;

use std::fmt::{Display, LowerExp};

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::models::ModelError;
use crate::scalar::Field;

pub use analysis::{dynamics_residual, invariant_drift, pushforward};
pub use compiled::{CompiledExpr, CompiledSystem};
pub use export::{sidecar_json, write_csv, write_trajectory};
pub use integrator::{integrate, integrate_system};

/// Float types the integrator runs on.
pub trait Float: num_traits::Float + Field + Display + LowerExp + Default + 'static {
    fn from_rational(q: &BigRational) -> Self;
    fn lit(x: f64) -> Self;
}

impl Float for f64 {
    fn from_rational(q: &BigRational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
    fn lit(x: f64) -> Self {
        x
    }
}

impl Float for f32 {
    fn from_rational(q: &BigRational) -> Self {
        q.to_f64().map(|v| v as f32).unwrap_or(f32::NAN)
    }
    fn lit(x: f64) -> Self {
        x as f32
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("near-singular point at sample {index}: |denominator| = {magnitude:e} in component {component}")]
    NearSingular { index: usize, component: String, magnitude: f64 },
    #[error("i/o error: {0}")]
    Io(String),
}

/// Parameter values of a trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Params<T> {
    pub alpha: [T; 3],
    pub eta: T,
}

impl<T: Float> Params<T> {
    pub fn new(alpha0: T, alpha1: T, alpha2: T, eta: T) -> Self {
        Params { alpha: [alpha0, alpha1, alpha2], eta }
    }

    /// `alpha1 = 1 - alpha0 - alpha2`.
    pub fn normalized(alpha0: T, alpha2: T, eta: T) -> Self {
        Params { alpha: [alpha0, T::one() - alpha0 - alpha2, alpha2], eta }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Output<T> {
    /// Every accepted step.
    Adaptive,
    /// Equally spaced samples `u0 + k h`.
    FixedStep(T),
    /// The given strictly monotone sample times, starting at `u0`.
    At(Vec<T>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Completed,
    BlowUp,
    StepUnderflow,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegratorMeta {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub termination: Termination,
    /// `adaptive`, `fixed_step`, `at` or `pushforward:<map>`.
    pub mode: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<T> {
    pub system_id: String,
    pub params: Params<T>,
    pub times: Vec<T>,
    pub states: Vec<Vec<T>>,
    pub meta: IntegratorMeta,
}

impl<T: Float> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(T, &[T])> {
        Some((*self.times.last()?, self.states.last()?.as_slice()))
    }

    /// Samples are strictly monotone and all states have the same length.
    pub fn is_well_formed(&self) -> bool {
        let inc = self.times.windows(2).all(|w| w[1] > w[0]);
        let dec = self.times.windows(2).all(|w| w[1] < w[0]);
        let dim = self.states.first().map_or(0, Vec::len);
        (inc || dec) && self.states.len() == self.times.len() && self.states.iter().all(|s| s.len() == dim)
    }
}

/// Every numeric tolerance and threshold in one place.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub safety: f64,
    pub min_factor: f64,
    pub max_factor: f64,
    /// State max-norm that ends integration as a blow-up.
    pub blow_up: f64,
    /// Smallest step relative to `max(1, |u|)`.
    pub min_step: f64,
    pub max_steps: usize,
    /// Denominator magnitude below which pushforward refuses a sample.
    pub near_singular: f64,
    pub fixed_step: f64,
    pub drift_tolerance: f64,
    pub self_residual: f64,
    pub pushforward_residual: f64,
    pub mismatch_residual: f64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            safety: 0.9,
            min_factor: 0.2,
            max_factor: 5.0,
            blow_up: 1e8,
            min_step: 1e-14,
            max_steps: 2_000_000,
            near_singular: 1e-12,
            fixed_step: 1e-3,
            drift_tolerance: 1e-6,
            self_residual: 1e-5,
            pushforward_residual: 1e-4,
            mismatch_residual: 1e-2,
        }
    }
}

impl NumericConfig {
    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }
}
