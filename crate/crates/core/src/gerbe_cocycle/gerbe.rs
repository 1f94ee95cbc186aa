//! Local gerbes: circle-valued 2-cocycles on a nerve.

use std::sync::Arc;

use num_complex::Complex;
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::chain_complex::cochain::same_complex;
use crate::chain_complex::complex::{face, sort_with_parity};
use crate::chain_complex::{Circle, Cochain, Integers, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::scalar::{circle_distance, circle_from_turns, Real};

/// Circle values closer than this are equal.
pub const CIRCLE_TOL: f64 = 1e-10;

/// [`CIRCLE_TOL`], loosened to what the scalar type can resolve.
pub fn circle_tol<T: Real>() -> f64 {
    CIRCLE_TOL.max(100.0 * T::epsilon().to_f64_lossy())
}

/// A Hitchin–Chatterjee gerbe: `g_{αβγ}` on the triangles of a nerve.
///
/// The optional variation records, for a triangle `τ` and a tetrahedron `T`
/// containing it, how far the continuous real logarithm of `g_τ` moves (in
/// turns) between the sample used for `τ` and the quadruple overlap of `T`.
/// Constant cocycles have no variation; gerbes built from smooth transition
/// functions need it, since a constant `U(1)` cocycle on a nerve only sees
/// flat information and its Dixmier–Douady class is torsion.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalGerbe<T: Real> {
    g: Cochain<Circle<T>>,
    /// `variation[t][i]` belongs to face `i` of tetrahedron `t`.
    variation: Option<Vec<[T; 4]>>,
}

/// A circle-valued 1-cochain, e.g. a trivialization of a gerbe.
#[derive(Clone, Debug, PartialEq)]
pub struct LineCocycle<T: Real> {
    h: Cochain<Circle<T>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GerbeViolation {
    pub simplex: Simplex,
    /// `|δg − 1|` on the circle.
    pub defect: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GerbeReport {
    pub tolerance: f64,
    pub max_defect: f64,
    pub violations: Vec<GerbeViolation>,
}

impl GerbeReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check_degree<C: crate::chain_complex::Coefficients>(c: &Cochain<C>, degree: usize, what: &str) -> Result<()> {
    if c.degree() != degree {
        return Err(Error::ContractViolation(format!("{what} must have degree {degree}, got {}", c.degree())));
    }
    Ok(())
}

impl<T: Real> LocalGerbe<T> {
    pub fn new(g: Cochain<Circle<T>>) -> Result<Self> {
        check_degree(&g, 2, "gerbe cocycle")?;
        Ok(Self { g, variation: None })
    }

    pub fn with_variation(g: Cochain<Circle<T>>, variation: Vec<[T; 4]>) -> Result<Self> {
        check_degree(&g, 2, "gerbe cocycle")?;
        if variation.len() != g.complex().count(3) {
            return Err(Error::ContractViolation(format!(
                "variation needs one entry per tetrahedron ({}), got {}",
                g.complex().count(3),
                variation.len()
            )));
        }
        Ok(Self { g, variation: Some(variation) })
    }

    pub fn trivial(complex: Arc<SimplicialComplex>) -> Self {
        Self { g: Cochain::identity(complex, 2, Circle::default()), variation: None }
    }

    /// `g = exp(2πi·turns)`.
    pub fn from_turns(complex: Arc<SimplicialComplex>, turns: &[T]) -> Result<Self> {
        let values = turns.iter().map(|&t| circle_from_turns(t)).collect();
        Self::new(Cochain::new(complex, 2, Circle::default(), values)?)
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        self.g.complex()
    }

    pub fn g(&self) -> &Cochain<Circle<T>> {
        &self.g
    }

    pub fn variation(&self) -> Option<&[[T; 4]]> {
        self.variation.as_deref()
    }

    /// Increment of face `i` of tetrahedron `t` (zero without variation).
    pub fn increment(&self, t: usize, i: usize) -> T {
        self.variation.as_ref().map_or(T::zero(), |v| v[t][i])
    }

    /// True when some increment is nonzero.
    pub fn is_varying(&self) -> bool {
        self.variation
            .as_ref()
            .is_some_and(|v| v.iter().any(|row| row.iter().any(|x| !x.is_zero())))
    }

    /// `δg` at tetrahedron `t`, with each face value transported to the
    /// quadruple overlap.
    pub fn coboundary_at(&self, t: usize, faces: &[usize]) -> Complex<T> {
        let mut acc = Complex::new(T::one(), T::zero());
        for (i, &f) in faces.iter().enumerate() {
            let v = *self.g.get(f) * circle_from_turns(self.increment(t, i));
            acc = if i % 2 == 0 { acc * v } else { acc * v.conj() };
        }
        acc
    }

    /// Twists by an integer 3-cochain: the class of the result is the class
    /// of this gerbe plus the class of `z`, while `g` itself is unchanged.
    pub fn twisted(&self, z: &Cochain<Integers>) -> Result<Self> {
        check_degree(z, 3, "twisting cochain")?;
        if !same_complex(z.complex(), self.complex()) {
            return Err(Error::ContractViolation("twisting cochain lives on another complex".into()));
        }
        let mut variation = self
            .variation
            .clone()
            .unwrap_or_else(|| vec![[T::zero(); 4]; self.complex().count(3)]);
        for (row, &k) in variation.iter_mut().zip(z.values()) {
            row[0] += T::of(k as f64);
        }
        Ok(Self { g: self.g.clone(), variation: Some(variation) })
    }

    /// Pointwise inverse.
    pub fn dual(&self) -> Self {
        Self {
            g: self.g.inverse(),
            variation: self
                .variation
                .as_ref()
                .map(|v| v.iter().map(|row| row.map(|x| -x)).collect()),
        }
    }

    /// Pointwise product on a shared nerve.
    pub fn product(&self, other: &Self) -> Result<Self> {
        let g = self.g.combine(&other.g)?;
        let variation = match (&self.variation, &other.variation) {
            (None, None) => None,
            _ => Some(
                (0..self.complex().count(3))
                    .map(|t| std::array::from_fn(|i| self.increment(t, i) + other.increment(t, i)))
                    .collect(),
            ),
        };
        Ok(Self { g, variation })
    }

    /// Pullback along the simplicial map `v ↦ vertex_map[v]` from `source`.
    pub fn pullback(&self, source: Arc<SimplicialComplex>, vertex_map: &[usize]) -> Result<Self> {
        let g = self.g.pullback(source.clone(), vertex_map)?;
        let Some(variation) = &self.variation else {
            return Ok(Self { g, variation: None });
        };
        let target = self.complex();
        let mut pulled = Vec::with_capacity(source.count(3));
        for tet in source.simplices(3) {
            let mut image: Vec<usize> = tet.iter().map(|&v| vertex_map[v]).collect();
            let mut row = [T::zero(); 4];
            if sort_with_parity(&mut image).is_some() {
                let t = target.index_of(&image).ok_or_else(|| {
                    Error::InvalidMap(format!("image {image:?} of {tet:?} is not a simplex of the target"))
                })?;
                for (i, slot) in row.iter_mut().enumerate() {
                    let mut face_image: Vec<usize> = face(tet, i).iter().map(|&v| vertex_map[v]).collect();
                    let odd = sort_with_parity(&mut face_image).expect("faces of an injective image are injective");
                    let missing = vertex_map[tet[i]];
                    let pos = image.iter().position(|&v| v == missing).expect("vertex of the image");
                    let d = variation[t][pos];
                    *slot = if odd { -d } else { d };
                }
            }
            pulled.push(row);
        }
        Ok(Self { g, variation: Some(pulled) })
    }
}

/// Lists every tetrahedron where `δg` differs from 1 by more than `tol`.
pub fn validate_gerbe<T: Real>(gerbe: &LocalGerbe<T>, tol: f64) -> GerbeReport {
    let complex = gerbe.complex();
    let faces = if complex.count(3) > 0 { complex.face_indices(2) } else { Vec::new() };
    let one = Complex::new(T::one(), T::zero());
    let mut violations = Vec::new();
    let mut max_defect = 0.0f64;
    for (t, fs) in faces.iter().enumerate() {
        let defect = circle_distance(gerbe.coboundary_at(t, fs), one).to_f64_lossy();
        max_defect = max_defect.max(defect);
        if defect > tol || Float::is_nan(defect) {
            violations.push(GerbeViolation { simplex: complex.simplices(3)[t].clone(), defect });
        }
    }
    GerbeReport { tolerance: tol, max_defect, violations }
}

impl<T: Real> LineCocycle<T> {
    pub fn new(h: Cochain<Circle<T>>) -> Result<Self> {
        check_degree(&h, 1, "line cocycle")?;
        Ok(Self { h })
    }

    pub fn trivial(complex: Arc<SimplicialComplex>) -> Self {
        Self { h: Cochain::identity(complex, 1, Circle::default()) }
    }

    pub fn from_turns(complex: Arc<SimplicialComplex>, turns: &[T]) -> Result<Self> {
        let values = turns.iter().map(|&t| circle_from_turns(t)).collect();
        Self::new(Cochain::new(complex, 1, Circle::default(), values)?)
    }

    pub fn h(&self) -> &Cochain<Circle<T>> {
        &self.h
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        self.h.complex()
    }

    /// The gerbe `δh`.
    pub fn coboundary(&self) -> LocalGerbe<T> {
        LocalGerbe { g: self.h.coboundary(), variation: None }
    }

    pub fn combine(&self, other: &Self) -> Result<Self> {
        Ok(Self { h: self.h.combine(&other.h)? })
    }

    pub fn inverse(&self) -> Self {
        Self { h: self.h.inverse() }
    }
}

/// Largest circle distance between two cochains of the same shape.
pub fn max_circle_distance<T: Real>(a: &Cochain<Circle<T>>, b: &Cochain<Circle<T>>) -> Result<f64> {
    if !same_complex(a.complex(), b.complex()) || a.degree() != b.degree() {
        return Err(Error::ContractViolation("cochains have different shapes".into()));
    }
    Ok(a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| circle_distance(*x, *y).to_f64_lossy())
        .fold(0.0, f64::max))
}
