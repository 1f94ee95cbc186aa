//! Cochains with alternating extension, coboundary and pullback.

use std::sync::Arc;

use crate::error::{Error, Result};

use super::coefficients::Coefficients;
use super::complex::{face, sort_with_parity, SimplicialComplex};

/// A degree-`p` cochain: one coefficient value per `p`-simplex, in the
/// complex's canonical order.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain<C: Coefficients> {
    complex: Arc<SimplicialComplex>,
    degree: usize,
    coeffs: C,
    values: Vec<C::Value>,
}

pub(crate) fn same_complex(a: &Arc<SimplicialComplex>, b: &Arc<SimplicialComplex>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<C: Coefficients> Cochain<C> {
    pub fn new(
        complex: Arc<SimplicialComplex>,
        degree: usize,
        coeffs: C,
        values: Vec<C::Value>,
    ) -> Result<Self> {
        if values.len() != complex.count(degree) {
            return Err(Error::ContractViolation(format!(
                "degree-{degree} cochain needs {} values, got {}",
                complex.count(degree),
                values.len()
            )));
        }
        Ok(Self { complex, degree, coeffs, values })
    }

    /// The cochain that is the identity element everywhere.
    pub fn identity(complex: Arc<SimplicialComplex>, degree: usize, coeffs: C) -> Self {
        let values = vec![coeffs.identity(); complex.count(degree)];
        Self { complex, degree, coeffs, values }
    }

    pub fn from_fn(
        complex: Arc<SimplicialComplex>,
        degree: usize,
        coeffs: C,
        mut f: impl FnMut(usize, &[usize]) -> C::Value,
    ) -> Self {
        let values = complex
            .simplices(degree)
            .iter()
            .enumerate()
            .map(|(i, s)| f(i, s))
            .collect();
        Self { complex, degree, coeffs, values }
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> &C {
        &self.coeffs
    }

    pub fn values(&self) -> &[C::Value] {
        &self.values
    }

    pub fn get(&self, index: usize) -> &C::Value {
        &self.values[index]
    }

    pub fn set(&mut self, index: usize, value: C::Value) {
        self.values[index] = value;
    }

    /// Value on an arbitrarily ordered vertex tuple: odd permutations act by
    /// the group inverse and tuples with a repeated vertex give the identity.
    /// `None` when the underlying set is not a simplex of the complex.
    pub fn evaluate(&self, tuple: &[usize]) -> Option<C::Value> {
        if tuple.len() != self.degree + 1 {
            return None;
        }
        let mut sorted = tuple.to_vec();
        match sort_with_parity(&mut sorted) {
            None => Some(self.coeffs.identity()),
            Some(odd) => {
                let v = &self.values[self.complex.index_of(&sorted)?];
                Some(if odd { self.coeffs.inverse(v) } else { v.clone() })
            }
        }
    }

    /// `(δc)(v₀…v_{p+1}) = Σᵢ (−1)ⁱ c(v₀…v̂ᵢ…v_{p+1})`, written in the group law
    /// of the coefficients. Empty when the complex has no `(p+1)`-simplices.
    pub fn coboundary(&self) -> Self {
        let faces = self.complex.face_indices(self.degree);
        let values = faces
            .iter()
            .map(|fs| {
                fs.iter().enumerate().fold(self.coeffs.identity(), |acc, (i, &f)| {
                    let v = &self.values[f];
                    if i % 2 == 0 {
                        self.coeffs.combine(&acc, v)
                    } else {
                        self.coeffs.combine(&acc, &self.coeffs.inverse(v))
                    }
                })
            })
            .collect();
        Self {
            complex: self.complex.clone(),
            degree: self.degree + 1,
            coeffs: self.coeffs.clone(),
            values,
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if !same_complex(&self.complex, &other.complex) {
            return Err(Error::ContractViolation("cochains live on different complexes".into()));
        }
        if self.degree != other.degree || self.coeffs != other.coeffs {
            return Err(Error::ContractViolation(format!(
                "degree/coefficient mismatch: ({}, {}) vs ({}, {})",
                self.degree,
                self.coeffs.tag(),
                other.degree,
                other.coeffs.tag()
            )));
        }
        Ok(())
    }

    /// Pointwise group operation.
    pub fn combine(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| self.coeffs.combine(a, b))
            .collect();
        Ok(Self { values, ..self.clone() })
    }

    pub fn inverse(&self) -> Self {
        let values = self.values.iter().map(|a| self.coeffs.inverse(a)).collect();
        Self { values, ..self.clone() }
    }

    pub fn power(&self, k: i64) -> Self {
        let values = self.values.iter().map(|a| self.coeffs.power(a, k)).collect();
        Self { values, ..self.clone() }
    }

    /// Applies `f` to every value, changing the coefficient system.
    pub fn map<D: Coefficients>(&self, coeffs: D, f: impl Fn(&C::Value) -> D::Value) -> Cochain<D> {
        Cochain {
            complex: self.complex.clone(),
            degree: self.degree,
            values: self.values.iter().map(f).collect(),
            coeffs,
        }
    }

    /// Pullback along the simplicial map `source vertex v ↦ vertex_map[v]`
    /// into this cochain's complex.
    pub fn pullback(&self, source: Arc<SimplicialComplex>, vertex_map: &[usize]) -> Result<Self> {
        check_vertex_map(&source, &self.complex, vertex_map, self.degree)?;
        let mut values = Vec::with_capacity(source.count(self.degree));
        for s in source.simplices(self.degree) {
            let image: Vec<usize> = s.iter().map(|&v| vertex_map[v]).collect();
            values.push(self.evaluate(&image).ok_or_else(|| {
                Error::InvalidMap(format!("image {image:?} of {s:?} is not a simplex of the target"))
            })?);
        }
        Ok(Self { complex: source, degree: self.degree, coeffs: self.coeffs.clone(), values })
    }
}

/// Checks that every simplex of `source` up to dimension `degree + 1` maps to
/// a (possibly degenerate) simplex of `target`.
pub(crate) fn check_vertex_map(
    source: &SimplicialComplex,
    target: &SimplicialComplex,
    vertex_map: &[usize],
    degree: usize,
) -> Result<()> {
    if vertex_map.len() < source.vertex_count() {
        return Err(Error::InvalidMap(format!(
            "vertex map covers {} of {} source vertices",
            vertex_map.len(),
            source.vertex_count()
        )));
    }
    let top = source.dimension().map_or(0, |d| d.min(degree + 1));
    for d in 0..=top {
        for s in source.simplices(d) {
            let mut image: Vec<usize> = s.iter().map(|&v| vertex_map[v]).collect();
            image.sort_unstable();
            image.dedup();
            if !target.contains(&image) {
                return Err(Error::InvalidMap(format!(
                    "image {image:?} of {s:?} is not a simplex of the target"
                )));
            }
        }
    }
    Ok(())
}

/// Faces of `simplex` paired with their coboundary signs.
pub fn signed_faces(simplex: &[usize]) -> impl Iterator<Item = (i64, Vec<usize>)> + '_ {
    (0..simplex.len()).map(move |i| (if i % 2 == 0 { 1 } else { -1 }, face(simplex, i)))
}
