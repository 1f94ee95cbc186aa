//! Trivializations and stable isomorphism.

use nalgebra::{DMatrix, DVector};
use num_traits::Float;

use crate::chain_complex::cochain::same_complex;
use crate::chain_complex::{Circle, Cochain};
use crate::error::{Error, Result};
use crate::scalar::{circle_from_turns, turns_of, Real};

use super::dd::{DdComputer, DixmierDouadyClass};
use super::gerbe::{circle_tol, max_circle_distance, validate_gerbe, LineCocycle, LocalGerbe};

/// Outcome of [`trivialize`]: either `h` with `δh = g`, or the class that
/// prevents one.
#[derive(Clone, Debug, PartialEq)]
pub enum Trivialization<T: Real> {
    Trivial { h: LineCocycle<T>, residual: f64 },
    Nontrivial(DixmierDouadyClass),
}

impl<T: Real> Trivialization<T> {
    pub fn is_trivial(&self) -> bool {
        matches!(self, Self::Trivial { .. })
    }
}

/// Real solutions of `δx = a` are accepted up to this residual.
const REAL_SOLVE_TOL: f64 = 1e-6;

pub fn trivialize<T: Real>(gerbe: &LocalGerbe<T>) -> Result<Trivialization<T>> {
    trivialize_with(&DdComputer::new(gerbe.complex().clone())?, gerbe)
}

/// [`trivialize`] reusing precomputed cohomology data.
pub fn trivialize_with<T: Real>(dd: &DdComputer, gerbe: &LocalGerbe<T>) -> Result<Trivialization<T>> {
    let report = validate_gerbe(gerbe, circle_tol::<T>());
    if !report.is_valid() {
        return Err(Error::NotACocycle(format!(
            "δg differs from 1 on {} tetrahedra (max {:.3e})",
            report.violations.len(),
            report.max_defect
        )));
    }
    let class = dd.class(gerbe)?;
    if !class.is_zero() {
        return Ok(Trivialization::Nontrivial(class));
    }
    if gerbe.is_varying() {
        return Err(Error::Unsupported(
            "trivializing gerbes with varying transition data needs the underlying functions".into(),
        ));
    }
    let complex = gerbe.complex();
    let c = class.representative.as_ref().expect("fresh classes carry their representative");
    let b = dd
        .cohomology()
        .solve_coboundary(c)?
        .ok_or_else(|| Error::Inconsistent("zero class without an integral primitive".into()))?;
    // a' = lift − b is an honest real cocycle
    let target: Vec<T> = gerbe
        .g()
        .values()
        .iter()
        .zip(b.values())
        .map(|(z, &m)| turns_of(*z) - T::of(m as f64))
        .collect();
    let (n1, n2) = (complex.count(1), complex.count(2));
    let mut x = vec![T::zero(); n1];
    if n1 > 0 && n2 > 0 {
        let mut m = DMatrix::<T>::zeros(n2, n1);
        for (r, fs) in complex.face_indices(1).iter().enumerate() {
            for (i, &col) in fs.iter().enumerate() {
                m[(r, col)] = if i % 2 == 0 { T::one() } else { -T::one() };
            }
        }
        let rhs = DVector::from_vec(target.clone());
        let svd = m.clone().svd(true, true);
        let sol = svd
            .solve(&rhs, T::of(1e-9))
            .map_err(|e| Error::Inconsistent(format!("least squares failed: {e}")))?;
        let misfit = (&m * &sol - &rhs).amax().to_f64_lossy();
        if misfit > REAL_SOLVE_TOL {
            return Err(Error::Unsupported(format!(
                "the class vanishes but g is not the coboundary of constant data (flat residue {misfit:.3e}; H²(K;ℝ) ≠ 0)"
            )));
        }
        x = sol.iter().copied().collect();
    } else if target.iter().any(|t| Float::abs(*t) > T::of(REAL_SOLVE_TOL)) {
        return Err(Error::Unsupported("g is not the coboundary of constant data".into()));
    }
    let h = LineCocycle::new(Cochain::new(
        complex.clone(),
        1,
        Circle::default(),
        x.into_iter().map(circle_from_turns).collect(),
    )?)?;
    let residual = max_circle_distance(h.coboundary().g(), gerbe.g())?;
    Ok(Trivialization::Trivial { h, residual })
}

pub fn stably_isomorphic<T: Real>(a: &LocalGerbe<T>, b: &LocalGerbe<T>) -> Result<bool> {
    if !same_complex(a.complex(), b.complex()) {
        return Err(Error::ContractViolation("gerbes live on different complexes".into()));
    }
    stably_isomorphic_with(&DdComputer::new(a.complex().clone())?, a, b)
}

pub fn stably_isomorphic_with<T: Real>(dd: &DdComputer, a: &LocalGerbe<T>, b: &LocalGerbe<T>) -> Result<bool> {
    if !same_complex(a.complex(), b.complex()) {
        return Err(Error::ContractViolation("gerbes live on different complexes".into()));
    }
    Ok(dd.class(a)?.coords == dd.class(b)?.coords)
}

/// `h₁·h₂⁻¹` for two trivializations of the same gerbe; a line bundle
/// cocycle on the base.
pub fn trivialization_difference<T: Real>(h1: &LineCocycle<T>, h2: &LineCocycle<T>) -> Result<LineCocycle<T>> {
    if !same_complex(h1.complex(), h2.complex()) {
        return Err(Error::ContractViolation("trivializations live on different complexes".into()));
    }
    let gap = max_circle_distance(h1.coboundary().g(), h2.coboundary().g())?;
    let tol = 1e-8f64.max(circle_tol::<T>());
    if gap > tol {
        return Err(Error::ContractViolation(format!(
            "the two cochains trivialize different gerbes (δ mismatch {gap:.3e})"
        )));
    }
    h1.combine(&h2.inverse())
}
