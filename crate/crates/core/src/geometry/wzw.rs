//! The Wess–Zumino–Witten term of maps into SU(2) ≅ S³.

use num_complex::Complex;
use rayon::prelude::*;

use crate::connective::{surface_holonomy, ChartedSurface};
use crate::error::{Error, Result};
use crate::scalar::Real;

use super::discretize::{assemble, integrate_tet, DescentMode};
use super::fields::BasicGerbeS3;
use super::mesh::EmbeddedTriangulation;
use super::quadrature::QuadratureRule;
use super::Point4;

/// Unit quaternion `[w, x, y, z]`.
pub type Quaternion = [f64; 4];

pub fn quaternion_mul(a: Quaternion, b: Quaternion) -> Quaternion {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

/// `w + xi + yj + zk` as the point `(x, y, z, w)` of S³.
pub fn quaternion_to_point(q: Quaternion) -> Point4 {
    [q[1], q[2], q[3], q[0]]
}

pub fn point_to_quaternion(p: Point4) -> Quaternion {
    [p[3], p[0], p[1], p[2]]
}

const UNIT_TOL: f64 = 1e-12;
const ANTIPODAL_TOL: f64 = 1e-9;

/// A piecewise-geodesic map from a triangulated surface or 3-manifold into
/// SU(2), given by its values at the domain vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct SU2Map {
    domain: EmbeddedTriangulation,
    values: Vec<Quaternion>,
}

impl SU2Map {
    pub fn new(domain: EmbeddedTriangulation, values: Vec<Quaternion>) -> Result<Self> {
        let used = domain.cells.iter().flatten().copied().max().map_or(0, |m| m + 1);
        if values.len() < used {
            return Err(Error::InvalidMap(format!("{} values for {} domain vertices", values.len(), used)));
        }
        for (i, q) in values.iter().enumerate() {
            let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !n.is_finite() || (n - 1.0).abs() > UNIT_TOL {
                return Err(Error::InvalidMap(format!("value {i} has norm {n}, not a unit quaternion")));
            }
        }
        for cell in &domain.cells {
            for (x, &a) in cell.iter().enumerate() {
                for &b in &cell[x + 1..] {
                    let d: f64 = values[a].iter().zip(&values[b]).map(|(p, q)| p * q).sum();
                    if d <= -1.0 + ANTIPODAL_TOL {
                        return Err(Error::InvalidMap(format!(
                            "adjacent vertices {a} and {b} map to antipodal points; refine the domain"
                        )));
                    }
                }
            }
        }
        Ok(Self { domain, values })
    }

    /// The map `p ↦ f(p)` on the vertices of `domain`, with `f` given on
    /// points of ℝ⁴ in `(x, y, z, w)` order and normalized afterwards.
    pub fn from_fn(domain: EmbeddedTriangulation, f: impl Fn(Point4) -> Point4) -> Result<Self> {
        let values = domain
            .vertices
            .iter()
            .map(|&p| {
                let q = f(p);
                let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
                if n < 1e-12 || !n.is_finite() {
                    return Err(Error::InvalidMap(format!("the map vanishes near {p:?}")));
                }
                Ok(point_to_quaternion(q.map(|x| x / n)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(domain, values)
    }

    pub fn domain(&self) -> &EmbeddedTriangulation {
        &self.domain
    }

    pub fn values(&self) -> &[Quaternion] {
        &self.values
    }

    /// The same domain cells with vertex coordinates replaced by images.
    fn image_mesh(&self) -> EmbeddedTriangulation {
        EmbeddedTriangulation {
            vertices: self.values.iter().map(|&q| quaternion_to_point(q)).collect(),
            cells: self.domain.cells.clone(),
            level: self.domain.level,
        }
    }

    /// The restriction to a set of oriented boundary faces.
    pub fn restrict(&self, faces: &[[usize; 3]]) -> Result<Self> {
        let domain = EmbeddedTriangulation {
            vertices: self.domain.vertices.clone(),
            cells: faces.iter().map(|f| f.to_vec()).collect(),
            level: self.domain.level,
        };
        Self::new(domain, self.values.clone())
    }
}

/// `Γ(φ) = hol(Σ, φ*(A, f))` for the level-k basic gerbe.
pub fn wzw_holonomy<T: Real>(map: &SU2Map, k: i64, rule: &QuadratureRule<T>) -> Result<Complex<T>> {
    if map.domain.cell_dimension() != 2 {
        return Err(Error::Domain("WZW holonomy needs a closed surface domain".into()));
    }
    let d = assemble(&BasicGerbeS3::new(k), &map.image_mesh(), rule, DescentMode::Enforced)?;
    let faces: Vec<[usize; 3]> = map.domain.cells.iter().map(|c| [c[0], c[1], c[2]]).collect();
    let surface = ChartedSurface::new(faces, d.chi, d.admissible)?;
    Ok(surface_holonomy(&d.connective, &surface)?.value)
}

/// `∫_X φ̂*ω` for the level-k basic gerbe, in turns.
pub fn witten_action<T: Real>(map: &SU2Map, k: i64, rule: &QuadratureRule<T>) -> Result<T> {
    if map.domain.cell_dimension() != 3 {
        return Err(Error::Domain("the Witten action needs a 3-dimensional domain".into()));
    }
    let data = BasicGerbeS3::<T>::new(k);
    let image = map.image_mesh();
    let parts: Vec<T> = image
        .cells
        .par_iter()
        .map(|c| {
            let v = std::array::from_fn(|i| image.vertices[c[i]].map(T::of));
            integrate_tet(rule, v, |p, a, b, c| data.three_curvature(p, a, b, c))
        })
        .collect();
    Ok(parts.into_iter().fold(T::zero(), |s, x| s + x))
}
