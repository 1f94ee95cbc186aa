//! Coefficient groups for cochains: ℤ, ℝ, U(1) and ℤₙ.

use std::fmt::{self, Debug};
use std::marker::PhantomData;

use num_complex::Complex;

use crate::scalar::{renormalize, Real};

/// Runtime tag of a coefficient system, as used in the JSON schemas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoefficientTag {
    Integers,
    Reals,
    Circle,
    Cyclic(u64),
}

impl fmt::Display for CoefficientTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientTag::Integers => write!(f, "Z"),
            CoefficientTag::Reals => write!(f, "R"),
            CoefficientTag::Circle => write!(f, "U1"),
            CoefficientTag::Cyclic(n) => write!(f, "Zn:{n}"),
        }
    }
}

impl std::str::FromStr for CoefficientTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Z" => Ok(Self::Integers),
            "R" => Ok(Self::Reals),
            "U1" => Ok(Self::Circle),
            _ => {
                let n = s
                    .strip_prefix("Zn:")
                    .and_then(|n| n.parse::<u64>().ok())
                    .ok_or_else(|| format!("unknown coefficient system {s:?}"))?;
                if n < 2 {
                    return Err(format!("cyclic order must be at least 2, got {n}"));
                }
                Ok(Self::Cyclic(n))
            }
        }
    }
}

/// An abelian group of cochain values.
///
/// The group law is written additively for ℤ, ℝ and ℤₙ and
/// multiplicatively for the circle; `combine` is whichever applies.
pub trait Coefficients: Clone + Debug + PartialEq + Send + Sync {
    type Value: Clone + Debug + PartialEq + Send + Sync;

    fn tag(&self) -> CoefficientTag;
    fn identity(&self) -> Self::Value;
    fn combine(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn inverse(&self, a: &Self::Value) -> Self::Value;

    /// `a` combined with itself `k` times (`k` may be negative).
    fn power(&self, a: &Self::Value, k: i64) -> Self::Value {
        let base = if k < 0 { self.inverse(a) } else { a.clone() };
        let mut acc = self.identity();
        for _ in 0..k.unsigned_abs() {
            acc = self.combine(&acc, &base);
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl Coefficients for Integers {
    type Value = i64;

    fn tag(&self) -> CoefficientTag {
        CoefficientTag::Integers
    }
    fn identity(&self) -> i64 {
        0
    }
    fn combine(&self, a: &i64, b: &i64) -> i64 {
        a.checked_add(*b).expect("integer cochain overflow")
    }
    fn inverse(&self, a: &i64) -> i64 {
        -a
    }
    fn power(&self, a: &i64, k: i64) -> i64 {
        a.checked_mul(k).expect("integer cochain overflow")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Reals<T>(PhantomData<T>);

impl<T> Default for Reals<T> {
    fn default() -> Self {
        Self(PhantomData)
    }
}

impl<T: Real> Coefficients for Reals<T> {
    type Value = T;

    fn tag(&self) -> CoefficientTag {
        CoefficientTag::Reals
    }
    fn identity(&self) -> T {
        T::zero()
    }
    fn combine(&self, a: &T, b: &T) -> T {
        *a + *b
    }
    fn inverse(&self, a: &T) -> T {
        -*a
    }
    fn power(&self, a: &T, k: i64) -> T {
        *a * T::of(k as f64)
    }
}

/// Unit complex numbers under multiplication; every product is renormalized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Circle<T>(PhantomData<T>);

impl<T> Default for Circle<T> {
    fn default() -> Self {
        Self(PhantomData)
    }
}

impl<T: Real> Coefficients for Circle<T> {
    type Value = Complex<T>;

    fn tag(&self) -> CoefficientTag {
        CoefficientTag::Circle
    }
    fn identity(&self) -> Complex<T> {
        Complex::new(T::one(), T::zero())
    }
    fn combine(&self, a: &Complex<T>, b: &Complex<T>) -> Complex<T> {
        renormalize(a * b)
    }
    fn inverse(&self, a: &Complex<T>) -> Complex<T> {
        a.conj()
    }
}

/// ℤₙ with values in `0..n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cyclic {
    order: u64,
}

impl Cyclic {
    pub fn new(order: u64) -> Self {
        assert!(order >= 2, "cyclic order must be at least 2");
        Self { order }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.order as i64) as u64
    }
}

impl Coefficients for Cyclic {
    type Value = u64;

    fn tag(&self) -> CoefficientTag {
        CoefficientTag::Cyclic(self.order)
    }
    fn identity(&self) -> u64 {
        0
    }
    fn combine(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.order
    }
    fn inverse(&self, a: &u64) -> u64 {
        (self.order - a % self.order) % self.order
    }
    fn power(&self, a: &u64, k: i64) -> u64 {
        self.reduce((*a as i64 % self.order as i64) * (k % self.order as i64))
    }
}
