//! Exact and numerical verification toolkit for a five-dimensional
//! Painlevé-type system with affine Weyl group symmetry of type D3(2),
//! its Bäcklund transformations, holomorphy charts, first integrals and
//! the four-dimensional polynomial Hamiltonian reduction.
//!
//! Layers, bottom up:
//! - [`symcore`]: exact polynomials and rational expressions, generic over
//!   the coefficient field;
//! - [`models`]: the closed registry of systems, maps, integrals and
//!   particular solutions;
//! - [`verify`]: every identity reduced to an exact zero test;
//! - [`weyl`]: words, parameter actions and sampled relation checks;
//! - [`numeric`]: an embedded 4(5) integrator generic over `Float`, drift
//!   monitors, pushforward and finite-difference residuals.

pub mod models;
pub mod numeric;
pub mod scalar;
pub mod symcore;
pub mod verify;
pub mod weyl;

use num_rational::BigRational;

pub type Rational = BigRational;
pub type QPoly = symcore::Poly<Rational>;
pub type QExpr = symcore::RatExpr<Rational>;
pub type QDerivation = symcore::Derivation<Rational>;
pub type QRelation = symcore::ParameterRelation<Rational>;

pub type Trajectory64 = numeric::Trajectory<f64>;
pub type Trajectory32 = numeric::Trajectory<f32>;
