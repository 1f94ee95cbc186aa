//! Surface holonomy, three-curvature and the boundary identity.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{circle_distance, circle_from_turns, renormalize, Real};

use super::structure::ConnectiveStructure;
use super::surface::{oriented_faces, ChartedSurface, ChartedVolume};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolonomyResult<T: Real> {
    pub value: Complex<T>,
    /// `Σf + ΣA`, in turns.
    pub log_real_part: T,
    pub vertex_factor: Complex<T>,
}

fn missing(what: &str, detail: String) -> Error {
    Error::IncompleteStructure(format!("missing {what} {detail}"))
}

/// The triangulated holonomy formula:
///
/// `exp(2πi·[Σ_σ f(χσ, σ) + Σ_{e⊂σ} A(χσ, χe, e)]) · Π_{v⊂e⊂σ} g_{χσ χe χv}(v)^{−s}`
///
/// with edges oriented by their face and `s = ±1` the sign of `v` in `∂e`
/// (`+1` at the head). The exponent `−s` is what makes the value
/// independent of the chart choice under the descent equations.
pub fn surface_holonomy<T: Real>(cs: &ConnectiveStructure<T>, surface: &ChartedSurface) -> Result<HolonomyResult<T>> {
    let mut log = T::zero();
    let mut vertex = Complex::new(T::one(), T::zero());
    for face in surface.faces() {
        let cf = surface.chart(face);
        log += cs.f(cf, *face).ok_or_else(|| missing("f", format!("for chart {cf} on face {face:?}")))?;
        for (tail, head) in [(face[0], face[1]), (face[1], face[2]), (face[2], face[0])] {
            let ce = surface.chart(&[tail, head]);
            log += cs.a(cf, ce, [tail, head])
                    .ok_or_else(|| missing("A", format!("for charts ({cf}, {ce}) on edge {tail}→{head}")))?;
            for (v, head_end) in [(tail, false), (head, true)] {
                let cv = surface.chart(&[v]);
                let g = cs
                    .g([cf, ce, cv], v)
                    .ok_or_else(|| missing("g sample", format!("for charts ({cf}, {ce}, {cv}) at vertex {v}")))?;
                vertex *= if head_end { g.conj() } else { g };
            }
        }
    }
    let vertex = renormalize(vertex);
    Ok(HolonomyResult { value: renormalize(circle_from_turns(log) * vertex), log_real_part: log, vertex_factor: vertex })
}

/// `ω(σ³) = Σ_{σ²⊂∂σ³} f(chart, σ²)` with induced face orientations.
pub fn three_curvature_in_chart<T: Real>(cs: &ConnectiveStructure<T>, tet: [usize; 4], chart: usize) -> Result<T> {
    let mut total = T::zero();
    for face in oriented_faces(tet) {
        total += cs.f(chart, face).ok_or_else(|| missing("f", format!("for chart {chart} on face {face:?}")))?;
    }
    Ok(total)
}

/// Three-curvature of every tetrahedron of `x` in its assigned chart.
pub fn three_curvature<T: Real>(cs: &ConnectiveStructure<T>, x: &ChartedVolume) -> Result<Vec<T>> {
    x.tets().iter().map(|t| three_curvature_in_chart(cs, *t, x.chart(t))).collect()
}

/// Largest change of `ω` over all admissible charts of each tetrahedron.
pub fn three_curvature_chart_spread<T: Real>(cs: &ConnectiveStructure<T>, x: &ChartedVolume) -> Result<f64> {
    let mut spread = 0.0f64;
    for t in x.tets() {
        let mut key = t.to_vec();
        key.sort_unstable();
        let base = three_curvature_in_chart(cs, *t, x.chart(t))?;
        for &c in &x.admissible()[&key] {
            let other = three_curvature_in_chart(cs, *t, c)?;
            spread = spread.max((other - base).to_f64_lossy().abs());
        }
    }
    Ok(spread)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryReport {
    pub tolerance: f64,
    /// Holonomy of `∂X` as `[re, im]`.
    pub holonomy: [f64; 2],
    /// `Σ ω` over `X`, in turns.
    pub curvature_integral: f64,
    pub distance: f64,
    pub pass: bool,
}

/// Compares `hol(∂X)` with `exp(2πi·Σ_X ω)`.
pub fn boundary_holonomy_check<T: Real>(cs: &ConnectiveStructure<T>, x: &ChartedVolume, tol: f64) -> Result<BoundaryReport> {
    let hol = surface_holonomy(cs, &x.boundary()?)?;
    let omega = three_curvature(cs, x)?.into_iter().fold(T::zero(), |s, w| s + w);
    let distance = circle_distance(hol.value, circle_from_turns(omega)).to_f64_lossy();
    Ok(BoundaryReport {
        tolerance: tol,
        holonomy: [hol.value.re.to_f64_lossy(), hol.value.im.to_f64_lossy()],
        curvature_integral: omega.to_f64_lossy(),
        distance,
        pass: distance <= tol,
    })
}
