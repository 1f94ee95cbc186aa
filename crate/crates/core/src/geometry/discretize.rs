//! Discretization of the monopole and the basic gerbe onto sphere meshes.
//!
//! Simplices are parametrized by radial projection of the flat simplex,
//! `P = Q/|Q|` with `Q = Σ bⱼpⱼ`, so integrals are over the true spherical
//! simplices and only quadrature error remains.

use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;

use crate::chain_complex::{Cochain, Circle, SimplicialComplex};
use crate::connective::{ChartMap, ChartedSurface, ChartedVolume, ConnectiveStructure, Witnesses};
use crate::error::{Error, Result};
use crate::gerbe_cocycle::LocalGerbe;
use crate::scalar::{circle_from_turns, Real};

use super::fields::{cap, dot, gauge, BasicGerbeS3, MonopoleData, P4, CHARTS, NORTH, SOUTH};
use super::mesh::EmbeddedTriangulation;
use super::quadrature::QuadratureRule;
use super::Point4;

/// How the discrete connective structure is assembled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DescentMode {
    /// Cap-1 curvings are the cap-0 curving plus the boundary flux of the
    /// discrete transition connection, and the two gauges differ by the exact
    /// change of the gauge function, so the descent equations hold to
    /// rounding.
    #[default]
    Enforced,
    /// Every datum by its own quadrature; descent holds up to quadrature error.
    Independent,
}

fn lift<T: Real>(p: &Point4) -> P4<T> {
    p.map(T::of)
}

/// `P = Q/|Q|` at barycentric coordinates `b`, and `|Q|`.
pub fn project<T: Real>(verts: &[P4<T>], b: &[T]) -> (P4<T>, T) {
    let mut q = [T::zero(); 4];
    for (v, &w) in verts.iter().zip(b) {
        for i in 0..4 {
            q[i] += w * v[i];
        }
    }
    let n = num_traits::Float::sqrt(dot(&q, &q));
    (q.map(|x| x / n), n)
}

/// Differential of the projection applied to the flat direction `v`.
pub fn push<T: Real>(p: &P4<T>, norm: T, v: &P4<T>) -> P4<T> {
    let s = dot(p, v);
    std::array::from_fn(|i| (v[i] - p[i] * s) / norm)
}

fn diff<T: Real>(a: &P4<T>, b: &P4<T>) -> P4<T> {
    std::array::from_fn(|i| a[i] - b[i])
}

pub fn integrate_edge<T: Real>(rule: &QuadratureRule<T>, v: [P4<T>; 2], form: impl Fn(&P4<T>, &P4<T>) -> T) -> T {
    let e = diff(&v[1], &v[0]);
    rule.segment.iter().fold(T::zero(), |acc, (b, w)| {
        let (p, n) = project(&v, b);
        acc + *w * form(&p, &push(&p, n, &e))
    })
}

pub fn integrate_face<T: Real>(
    rule: &QuadratureRule<T>,
    v: [P4<T>; 3],
    form: impl Fn(&P4<T>, &P4<T>, &P4<T>) -> T,
) -> T {
    let (e1, e2) = (diff(&v[1], &v[0]), diff(&v[2], &v[0]));
    rule.triangle.iter().fold(T::zero(), |acc, (b, w)| {
        let (p, n) = project(&v, b);
        acc + *w * form(&p, &push(&p, n, &e1), &push(&p, n, &e2))
    })
}

pub fn integrate_tet<T: Real>(
    rule: &QuadratureRule<T>,
    v: [P4<T>; 4],
    form: impl Fn(&P4<T>, &P4<T>, &P4<T>, &P4<T>) -> T,
) -> T {
    let (e1, e2, e3) = (diff(&v[1], &v[0]), diff(&v[2], &v[0]), diff(&v[3], &v[0]));
    rule.tetrahedron.iter().fold(T::zero(), |acc, (b, w)| {
        let (p, n) = project(&v, b);
        acc + *w * form(&p, &push(&p, n, &e1), &push(&p, n, &e2), &push(&p, n, &e3))
    })
}

fn cell_vertices<T: Real, const N: usize>(mesh: &EmbeddedTriangulation, cell: &[usize]) -> [P4<T>; N] {
    std::array::from_fn(|i| lift(&mesh.vertices[cell[i]]))
}

fn xyz<T: Real>(p: &P4<T>) -> [T; 3] {
    [p[0], p[1], p[2]]
}

/// `∫_{S²} F` over an oriented S² mesh, in turns.
pub fn monopole_flux<T: Real>(m: &MonopoleData<T>, mesh: &EmbeddedTriangulation, rule: &QuadratureRule<T>) -> Result<T> {
    if mesh.cell_dimension() != 2 {
        return Err(Error::Domain("the monopole lives on a 2-sphere mesh".into()));
    }
    let parts: Vec<T> = mesh
        .cells
        .par_iter()
        .map(|c| integrate_face(rule, cell_vertices(mesh, c), |p, a, b| m.curvature(&xyz(p), &xyz(a), &xyz(b))))
        .collect();
    Ok(parts.into_iter().fold(T::zero(), |s, x| s + x))
}

/// `∫ ω` over the given oriented tetrahedra of an S³ mesh, in turns.
pub fn three_curvature_integral<T: Real>(
    data: &BasicGerbeS3<T>,
    mesh: &EmbeddedTriangulation,
    tets: &[[usize; 4]],
    rule: &QuadratureRule<T>,
) -> T {
    let parts: Vec<T> = tets
        .par_iter()
        .map(|t| integrate_tet(rule, cell_vertices(mesh, t), |p, a, b, c| data.three_curvature(p, a, b, c)))
        .collect();
    parts.into_iter().fold(T::zero(), |s, x| s + x)
}

fn all_tets(mesh: &EmbeddedTriangulation) -> Result<Vec<[usize; 4]>> {
    if mesh.cell_dimension() != 3 {
        return Err(Error::Domain("the basic gerbe lives on a 3-sphere mesh".into()));
    }
    Ok(mesh.cells.iter().map(|c| [c[0], c[1], c[2], c[3]]).collect())
}

/// `∫_{S³} ω` by direct quadrature.
pub fn total_three_curvature<T: Real>(data: &BasicGerbeS3<T>, mesh: &EmbeddedTriangulation, rule: &QuadratureRule<T>) -> Result<T> {
    Ok(three_curvature_integral(data, mesh, &all_tets(mesh)?, rule))
}

fn barycentre(mesh: &EmbeddedTriangulation, s: &[usize]) -> Point4 {
    let mut q = [0.0; 4];
    for &v in s {
        for (qi, x) in q.iter_mut().zip(mesh.vertices[v]) {
            *qi += x;
        }
    }
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    q.map(|x| x / n)
}

fn charts_of(mask: u8) -> impl Iterator<Item = usize> {
    (0..CHARTS).filter(move |c| mask >> c & 1 == 1)
}

/// Chart in `mask` whose centre is closest to `p` (lowest index on ties).
fn nearest_chart(mask: u8, p: &Point4) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for c in charts_of(mask) {
        let d = dot(&BasicGerbeS3::<f64>::chart_centre(c), p);
        if best.is_none_or(|(_, bd)| d > bd) {
            best = Some((c, d));
        }
    }
    best.map(|b| b.0)
}

/// Admissible charts of every simplex as bit masks, by dimension: a chart
/// must contain the projected barycentre and be admissible for every face.
fn admissible_masks<T: Real>(
    data: &BasicGerbeS3<T>,
    mesh: &EmbeddedTriangulation,
    complex: &SimplicialComplex,
) -> Result<Vec<Vec<u8>>> {
    let geometric = BasicGerbeS3::<f64> { monopole: MonopoleData { k: data.k(), mu: data.monopole.mu.to_f64_lossy() }, lambda: data.lambda.to_f64_lossy(), band: data.band.to_f64_lossy() };
    let mut masks: Vec<Vec<u8>> = Vec::new();
    for dim in 0..=complex.dimension().unwrap_or(0) {
        let faces = if dim > 0 { complex.face_indices(dim - 1) } else { Vec::new() };
        let layer: Vec<u8> = complex
            .simplices(dim)
            .par_iter()
            .enumerate()
            .map(|(i, s)| {
                let p = barycentre(mesh, s);
                let mut m = (0..CHARTS).filter(|&c| geometric.admissible(c, &p)).fold(0u8, |m, c| m | 1 << c);
                if dim > 0 {
                    for &f in &faces[i] {
                        m &= masks[dim - 1][f];
                    }
                }
                m
            })
            .collect();
        if let Some(i) = layer.iter().position(|&m| m == 0) {
            let s = complex.simplices(dim)[i].clone();
            let near = barycentre(mesh, &s);
            return Err(Error::Subordination { simplex: s, near });
        }
        masks.push(layer);
    }
    Ok(masks)
}

/// Connective data of the basic gerbe on a mesh (or pulled back along a
/// map, when the mesh vertices are image points) with its chart data.
#[derive(Clone, Debug)]
pub struct Discretization<T: Real> {
    pub complex: Arc<SimplicialComplex>,
    pub mesh: EmbeddedTriangulation,
    pub admissible: Witnesses,
    pub chi: ChartMap,
    pub connective: ConnectiveStructure<T>,
}

impl<T: Real> Discretization<T> {
    pub fn volume(&self, tets: Vec<[usize; 4]>) -> Result<ChartedVolume> {
        ChartedVolume::new(tets, self.chi.clone(), self.admissible.clone())
    }

    /// The tetrahedra with `w ≥ 0` (or `w ≤ 0`).
    pub fn hemisphere(&self, upper: bool) -> Result<ChartedVolume> {
        self.volume(self.mesh.hemisphere(upper)?)
    }

    /// The equator `w = 0`, oriented as the boundary of the upper hemisphere.
    pub fn equator(&self) -> Result<ChartedSurface> {
        self.hemisphere(true)?.boundary()
    }

    pub fn whole(&self) -> Result<ChartedVolume> {
        self.volume(all_tets(&self.mesh)?)
    }
}

/// Edge integrals of `a_N` and `a_S` pulled back through the retraction.
fn gauge_potentials<T: Real>(data: &BasicGerbeS3<T>, rule: &QuadratureRule<T>, v: [P4<T>; 2], mode: DescentMode) -> [T; 2] {
    let quad = |g: usize| integrate_edge(rule, v, |p, d| data.pulled_potential(g, p, d));
    match mode {
        DescentMode::Independent => [quad(NORTH), quad(SOUTH)],
        DescentMode::Enforced => {
            let (r0, _) = BasicGerbeS3::retract(&v[0]);
            let (r1, _) = BasicGerbeS3::retract(&v[1]);
            let change = data.monopole.gauge_log_change(&r0, &r1);
            if r0[2] + r1[2] >= T::zero() {
                let n = quad(NORTH);
                [n, n + change]
            } else {
                let s = quad(SOUTH);
                [s - change, s]
            }
        }
    }
}

/// Discretizes `data` onto the S³ mesh: `f` for every admissible chart of
/// every triangle, `A` for every admissible chart pair of every edge, `g` at
/// every vertex for every admissible chart triple, and the greedy chart
/// choice (nearest chart centre).
pub fn discretize<T: Real>(
    data: &BasicGerbeS3<T>,
    mesh: &EmbeddedTriangulation,
    rule: &QuadratureRule<T>,
    mode: DescentMode,
) -> Result<Discretization<T>> {
    all_tets(mesh)?;
    assemble(data, mesh, rule, mode)
}

/// Connective data on the cells of `mesh`, whose vertex coordinates may be
/// the images of a domain mesh; cells of dimension 2 or 3.
pub(crate) fn assemble<T: Real>(
    data: &BasicGerbeS3<T>,
    mesh: &EmbeddedTriangulation,
    rule: &QuadratureRule<T>,
    mode: DescentMode,
) -> Result<Discretization<T>> {
    let complex = Arc::new(mesh.complex()?);
    let masks = admissible_masks(data, mesh, &complex)?;

    let edges = complex.simplices(1);
    let potentials: Vec<Option<[T; 2]>> = edges
        .par_iter()
        .zip(&masks[1])
        .map(|(e, &m)| {
            let caps = charts_of(m).fold(0u8, |acc, c| acc | 1 << cap(c));
            (caps == 3).then(|| gauge_potentials(data, rule, cell_vertices(mesh, e), mode))
        })
        .collect();

    let tri_faces = complex.face_indices(1);
    let curvings: Vec<Vec<(usize, T)>> = complex
        .simplices(2)
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let v: [P4<T>; 3] = cell_vertices(mesh, s);
            let m = masks[2][i];
            let has_cap0 = charts_of(m).any(|c| cap(c) == 0);
            let f0 = has_cap0.then(|| integrate_face(rule, v, |p, a, b| data.curving(0, p, a, b)));
            let f1_direct = || integrate_face(rule, v, |p, a, b| data.curving(1, p, a, b));
            let mut out = Vec::new();
            let mut f1_cached: Option<T> = None;
            for c in charts_of(m) {
                let value = if cap(c) == 0 {
                    f0.unwrap()
                } else {
                    match (mode, f0) {
                        (DescentMode::Enforced, Some(f0)) => {
                            // ∂[v0 v1 v2] = [v1 v2] − [v0 v2] + [v0 v1]; face i omits vertex i
                            let fi = &tri_faces[i];
                            let pot = |e: usize| potentials[e].expect("band edge has potentials")[gauge(c)];
                            f0 + pot(fi[0]) - pot(fi[1]) + pot(fi[2])
                        }
                        _ => *f1_cached.get_or_insert_with(f1_direct),
                    }
                };
                out.push((c, value));
            }
            out
        })
        .collect();

    let mut cs = ConnectiveStructure::new();
    for (i, s) in complex.simplices(2).iter().enumerate() {
        for &(c, value) in &curvings[i] {
            cs.set_f(c, [s[0], s[1], s[2]], value)?;
        }
    }
    for (i, e) in edges.iter().enumerate() {
        let charts: Vec<usize> = charts_of(masks[1][i]).collect();
        for (x, &a) in charts.iter().enumerate() {
            for &b in &charts[x + 1..] {
                let eps = BasicGerbeS3::<T>::pair_sign(a, b);
                let value = match potentials[i] {
                    Some(p) if eps != 0 => T::of(eps as f64) * p[BasicGerbeS3::<T>::pair_gauge(a, b)],
                    _ => T::zero(),
                };
                cs.set_a(a, b, [e[0], e[1]], value)?;
            }
        }
    }
    for (v, &m) in masks[0].iter().enumerate() {
        let charts: Vec<usize> = charts_of(m).collect();
        let p: P4<T> = lift(&mesh.vertices[v]);
        for (x, &a) in charts.iter().enumerate() {
            for (y, &b) in charts.iter().enumerate().skip(x + 1) {
                for &c in &charts[y + 1..] {
                    cs.set_g([a, b, c], v, circle_from_turns(data.transition_log([a, b, c], &p)))?;
                }
            }
        }
    }

    let mut admissible = Witnesses::new();
    let mut chi = ChartMap::new();
    for (dim, layer) in masks.iter().enumerate() {
        for (s, &m) in complex.simplices(dim).iter().zip(layer) {
            admissible.insert(s.clone(), charts_of(m).collect());
            chi.insert(s.clone(), nearest_chart(m, &barycentre(mesh, s)).expect("nonempty mask"));
        }
    }
    Ok(Discretization { complex, mesh: mesh.clone(), admissible, chi, connective: cs })
}

/// The basic gerbe as a `U(1)` cocycle on the nerve of the vertex-star cover
/// of the mesh (whose nerve is the mesh itself).
///
/// Each vertex gets a chart containing its closed star; `g` on a triangle is
/// the chart transition at its projected barycentre, and the variation data
/// records the continuous change of its logarithm to each tetrahedron's
/// barycentre.
pub fn s3_gerbe<T: Real>(data: &BasicGerbeS3<T>, mesh: &EmbeddedTriangulation) -> Result<LocalGerbe<T>> {
    all_tets(mesh)?;
    let complex = Arc::new(mesh.complex()?);
    let masks = admissible_masks(data, mesh, &complex)?;
    let mut star = vec![(1u8 << CHARTS) - 1; complex.count(0)];
    for (t, s) in complex.simplices(3).iter().enumerate() {
        for &v in s {
            star[v] &= masks[3][t];
        }
    }
    let mut rho = Vec::with_capacity(star.len());
    for (v, &m) in star.iter().enumerate() {
        match nearest_chart(m, &mesh.vertices[v]) {
            Some(c) => rho.push(c),
            None => return Err(Error::Subordination { simplex: vec![v], near: mesh.vertices[v] }),
        }
    }
    let charts = |s: &[usize]| [rho[s[0]], rho[s[1]], rho[s[2]]];
    let triangles = complex.simplices(2);
    let g: Vec<Complex<T>> = triangles
        .iter()
        .map(|s| circle_from_turns(data.transition_log(charts(s), &lift(&barycentre(mesh, s)))))
        .collect();
    let faces = complex.face_indices(2);
    let variation: Vec<[T; 4]> = complex
        .simplices(3)
        .par_iter()
        .zip(&faces)
        .map(|(t, fs)| {
            let c_t: P4<T> = lift(&barycentre(mesh, t));
            std::array::from_fn(|i| {
                let s = &triangles[fs[i]];
                data.transition_log_change(charts(s), &lift(&barycentre(mesh, s)), &c_t)
            })
        })
        .collect();
    let g = Cochain::new(complex, 2, Circle::default(), g)?;
    LocalGerbe::with_variation(g, variation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connective::{boundary_holonomy_check, check_connective, surface_holonomy, three_curvature};

    #[test]
    fn monopole_flux_is_the_winding() {
        let rule = QuadratureRule::<f64>::default();
        let mesh = EmbeddedTriangulation::s2(3);
        for k in [0, 1, -2, 5] {
            let flux = monopole_flux(&MonopoleData::new(k), &mesh, &rule).unwrap();
            assert!((flux - k as f64).abs() < 1e-6, "k={k}: {flux}");
        }
    }

    #[test]
    fn three_curvature_integrates_to_the_level() {
        let rule = QuadratureRule::<f64>::default();
        let mesh = EmbeddedTriangulation::s3(2);
        let total = total_three_curvature(&BasicGerbeS3::new(1), &mesh, &rule).unwrap();
        assert!((total - 1.0).abs() < 5e-2, "{total}");
        let zero = total_three_curvature(&BasicGerbeS3::new(0), &mesh, &rule).unwrap();
        assert_eq!(zero, 0.0);
    }

    #[test]
    fn enforced_descent_is_exact() {
        let rule = QuadratureRule::<f64>::default();
        let mesh = EmbeddedTriangulation::s3(2);
        let d = discretize(&BasicGerbeS3::new(2), &mesh, &rule, DescentMode::Enforced).unwrap();
        let report = check_connective(&d.connective, 1e-10);
        assert!(report.is_valid(), "{:?}", (report.max_connection_residual, report.max_curving_residual));
        assert!(report.connection_checks > 0 && report.curving_checks > 0);
        // a closed 3-manifold has integral total three-curvature
        let whole = d.whole().unwrap();
        let total: f64 = three_curvature(&d.connective, &whole).unwrap().iter().sum();
        assert!((total - total.round()).abs() < 1e-9, "{total}");
    }

    #[test]
    fn hemisphere_boundary_identity() {
        let rule = QuadratureRule::<f64>::default();
        let mesh = EmbeddedTriangulation::s3(2);
        let d = discretize(&BasicGerbeS3::new(1), &mesh, &rule, DescentMode::Enforced).unwrap();
        let x = d.hemisphere(true).unwrap();
        let report = boundary_holonomy_check(&d.connective, &x, 1e-9).unwrap();
        assert!(report.pass, "{report:?}");
        // Σω over the upper hemisphere is close to k/2, so the equator's holonomy is close to −1
        let hol = surface_holonomy(&d.connective, &d.equator().unwrap()).unwrap();
        assert!((hol.value - Complex::new(-1.0, 0.0)).norm() < 5e-2, "{:?}", hol.value);
    }

    #[test]
    fn zero_level_gives_trivial_data() {
        let rule = QuadratureRule::<f64>::default();
        let d = discretize(&BasicGerbeS3::new(0), &EmbeddedTriangulation::s3(1), &rule, DescentMode::Enforced).unwrap();
        assert!(d.connective.a_entries().all(|e| e.2 == 0.0));
        assert!(d.connective.f_entries().all(|e| e.2 == 0.0));
        assert!(d.connective.g_entries().all(|e| (e.2 - Complex::new(1.0, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn straddling_simplex_fails_subordination() {
        let c = (1.0f64 - 0.81).sqrt();
        let mesh = EmbeddedTriangulation {
            vertices: vec![[c, 0.0, 0.0, 0.9], [0.0, c, 0.0, -0.9], [0.0, 0.0, 1.0, 0.0], [-1.0, 0.0, 0.0, 0.0]],
            cells: vec![vec![0, 1, 2, 3]],
            level: 0,
        };
        let err = discretize(&BasicGerbeS3::<f64>::new(1), &mesh, &QuadratureRule::default(), DescentMode::Enforced);
        match err {
            Err(Error::Subordination { simplex, .. }) => assert_eq!(simplex, vec![0, 1]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn nerve_gerbe_has_class_k() {
        let mesh = EmbeddedTriangulation::s3(3);
        for k in [1, -2, 3] {
            let g = s3_gerbe(&BasicGerbeS3::<f64>::new(k), &mesh).unwrap();
            let class = crate::gerbe_cocycle::dd_class(&g).unwrap();
            assert_eq!(class.coords.free, vec![k]);
        }
    }
}
