//! Scalar abstraction shared by the real-valued parts of the crate.

use std::fmt::Debug;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point types usable for circle values, connective data and
/// quadrature. Implemented for `f32` and `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + nalgebra::RealField + Copy + Debug + Send + Sync + 'static
{
    /// Converts an `f64` constant (tolerances, quadrature nodes) into `Self`.
    fn of(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 constant representable")
    }

    fn to_f64_lossy(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `exp(2πi·t)`.
pub fn circle_from_turns<T: Real>(t: T) -> Complex<T> {
    let angle = T::TAU() * t;
    Complex::new(Float::cos(angle), Float::sin(angle))
}

/// Principal angle fraction of a circle value, in `[0, 1)`.
pub fn turns_of<T: Real>(z: Complex<T>) -> T {
    let mut t = Float::atan2(z.im, z.re) / T::TAU();
    if t < T::zero() {
        t += T::one();
    }
    if t >= T::one() {
        t -= T::one();
    }
    t
}

/// Signed angle fraction in `(-1/2, 1/2]`.
pub fn wrap_turns<T: Real>(t: T) -> T {
    let half = T::of(0.5);
    let r = t - Float::floor(t + half);
    if r <= -half {
        r + T::one()
    } else {
        r
    }
}

/// Rescales a nonzero complex number to unit modulus.
pub fn renormalize<T: Real>(z: Complex<T>) -> Complex<T> {
    let n = Float::hypot(z.re, z.im);
    if n > T::zero() {
        Complex::new(z.re / n, z.im / n)
    } else {
        Complex::new(T::one(), T::zero())
    }
}

pub fn circle_distance<T: Real>(a: Complex<T>, b: Complex<T>) -> T {
    let d = a - b;
    Float::hypot(d.re, d.im)
}
