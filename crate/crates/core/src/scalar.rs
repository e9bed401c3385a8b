//! Scalar abstractions shared by the exact and floating-point layers.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Coefficient field for polynomials and rational expressions.
///
/// Anything with exact field arithmetic qualifies. `BigRational` is the
/// coefficient type of every identity check; floating types also satisfy
/// the bound but their zero test is only as good as rounding allows.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
}

impl<T> Field for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
        + Send
        + Sync
{
}

/// Conversion of a coefficient into the scalar a point is evaluated in.
pub trait Embed<T> {
    fn embed(&self) -> T;
}

impl Embed<BigRational> for BigRational {
    fn embed(&self) -> BigRational {
        self.clone()
    }
}

impl Embed<f64> for BigRational {
    fn embed(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Embed<f32> for BigRational {
    fn embed(&self) -> f32 {
        self.to_f32().unwrap_or(f32::NAN)
    }
}

impl Embed<f64> for f64 {
    fn embed(&self) -> f64 {
        *self
    }
}

impl Embed<f32> for f32 {
    fn embed(&self) -> f32 {
        *self
    }
}

/// Integer power by repeated squaring; works for any field.
pub fn powi<T: Field>(base: &T, exp: u32) -> T {
    let mut acc = T::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b.clone();
        }
        e >>= 1;
        if e > 0 {
            b = b.clone() * b;
        }
    }
    acc
}

/// Shorthand for the rational `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Renders a rational as `n` or `n/d`.
pub fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn is_negative(q: &BigRational) -> bool {
    q.is_negative()
}

/// Random rational `n/d` with `n` uniform in `[-bound, bound]` and `d`
/// uniform in `[-bound, bound] \ {0}`.
pub fn random_rational<R: rand::Rng + ?Sized>(rng: &mut R, bound: i64) -> BigRational {
    let n = rng.gen_range(-bound..=bound);
    let mut d = 0;
    while d == 0 {
        d = rng.gen_range(-bound..=bound);
    }
    rat(n, d)
}
