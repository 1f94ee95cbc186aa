//! Triangulations of S² ⊂ ℝ³ and S³ ⊂ ℝ⁴ by recursive midpoint refinement.

use std::collections::HashMap;

use crate::chain_complex::SimplicialComplex;
use crate::error::{Error, Result};

use super::Point4;

/// Vertices on a unit sphere and oriented top cells.
///
/// S² meshes store points as `(x, y, z, 0)`, which is also the equator
/// `w = 0` of S³.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddedTriangulation {
    pub vertices: Vec<Point4>,
    pub cells: Vec<Vec<usize>>,
    pub level: usize,
}

pub fn det3(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

pub fn det4(p: [Point4; 4]) -> f64 {
    let minor = |skip: usize| {
        let rows: Vec<[f64; 3]> = p.iter().map(|r| {
            let mut out = [0.0; 3];
            let mut j = 0;
            for (i, &x) in r.iter().enumerate() {
                if i != skip {
                    out[j] = x;
                    j += 1;
                }
            }
            out
        }).collect();
        det3(rows[1], rows[2], rows[3])
    };
    (0..4).map(|c| if c % 2 == 0 { p[0][c] * minor(c) } else { -p[0][c] * minor(c) }).sum()
}

fn normalized(p: Point4) -> Point4 {
    let n = p.iter().map(|x| x * x).sum::<f64>().sqrt();
    p.map(|x| x / n)
}

struct Midpoints<'a> {
    vertices: &'a mut Vec<Point4>,
    cache: HashMap<(usize, usize), usize>,
}

impl Midpoints<'_> {
    fn get(&mut self, a: usize, b: usize) -> usize {
        let key = (a.min(b), a.max(b));
        if let Some(&m) = self.cache.get(&key) {
            return m;
        }
        let (pa, pb) = (self.vertices[a], self.vertices[b]);
        let m = self.vertices.len();
        self.vertices.push(normalized(std::array::from_fn(|i| pa[i] + pb[i])));
        self.cache.insert(key, m);
        m
    }
}

impl EmbeddedTriangulation {
    /// Octahedron refined `level` times (1 → 4), outward oriented.
    pub fn s2(level: usize) -> Self {
        let mut vertices: Vec<Point4> = Vec::new();
        for i in 0..3 {
            for s in [1.0, -1.0] {
                let mut p = [0.0; 4];
                p[i] = s;
                vertices.push(p);
            }
        }
        let mut cells: Vec<[usize; 3]> = Vec::new();
        for x in [0, 1] {
            for y in [2, 3] {
                for z in [4, 5] {
                    let positive = det3(xyz(vertices[x]), xyz(vertices[y]), xyz(vertices[z])) > 0.0;
                    cells.push(if positive { [x, y, z] } else { [x, z, y] });
                }
            }
        }
        for _ in 0..level {
            let mut mid = Midpoints { vertices: &mut vertices, cache: HashMap::new() };
            let mut next = Vec::with_capacity(cells.len() * 4);
            for [a, b, c] in cells {
                let (ab, bc, ca) = (mid.get(a, b), mid.get(b, c), mid.get(c, a));
                next.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
            }
            cells = next;
        }
        Self { vertices, cells: cells.into_iter().map(|c| c.to_vec()).collect(), level }
    }

    /// The 16-cell refined `level` times (1 → 8, Bey's rule), with 16·8^level
    /// tetrahedra oriented by the outward normal. Labels are arranged so the
    /// first tetrahedron in sorted order is positively oriented.
    pub fn s3(level: usize) -> Self {
        let mut vertices: Vec<Point4> = Vec::new();
        for i in 0..4 {
            for s in [1.0, -1.0] {
                let mut p = [0.0; 4];
                p[i] = s;
                vertices.push(p);
            }
        }
        let mut cells: Vec<[usize; 4]> = Vec::new();
        for mask in 0..16usize {
            cells.push(std::array::from_fn(|i| 2 * i + (mask >> i & 1)));
        }
        for _ in 0..level {
            let mut mid = Midpoints { vertices: &mut vertices, cache: HashMap::new() };
            let mut next = Vec::with_capacity(cells.len() * 8);
            for [x0, x1, x2, x3] in cells {
                let (m01, m02, m03) = (mid.get(x0, x1), mid.get(x0, x2), mid.get(x0, x3));
                let (m12, m13, m23) = (mid.get(x1, x2), mid.get(x1, x3), mid.get(x2, x3));
                next.extend([
                    [x0, m01, m02, m03],
                    [m01, x1, m12, m13],
                    [m02, m12, x2, m23],
                    [m03, m13, m23, x3],
                    [m01, m02, m03, m13],
                    [m01, m02, m12, m13],
                    [m02, m03, m13, m23],
                    [m02, m12, m13, m23],
                ]);
            }
            cells = next;
        }
        let orient = |vertices: &[Point4], cells: &[[usize; 4]]| -> Vec<Vec<usize>> {
            cells
                .iter()
                .map(|&[a, b, c, d]| {
                    let mut s = [a, b, c, d];
                    s.sort_unstable();
                    if det4(s.map(|v| vertices[v])) > 0.0 {
                        s.to_vec()
                    } else {
                        vec![s[0], s[1], s[3], s[2]]
                    }
                })
                .collect()
        };
        let mut oriented = orient(&vertices, &cells);
        let first = oriented.iter().map(|c| sorted(c)).min().expect("nonempty mesh");
        if det4([0, 1, 2, 3].map(|i| vertices[first[i]])) < 0.0 {
            // the vertex set is symmetric under x₁ ↦ −x₁; reflecting flips every orientation
            for v in vertices.iter_mut() {
                v[0] = -v[0] + 0.0;
            }
            oriented = orient(&vertices, &cells);
        }
        Self { vertices, cells: oriented, level }
    }

    pub fn cell_dimension(&self) -> usize {
        self.cells.first().map_or(0, |c| c.len() - 1)
    }

    pub fn complex(&self) -> Result<SimplicialComplex> {
        SimplicialComplex::from_facets(self.cells.iter().cloned())
    }

    /// Oriented tetrahedra with all vertices in `w ≥ 0` (or `w ≤ 0`).
    pub fn hemisphere(&self, upper: bool) -> Result<Vec<[usize; 4]>> {
        if self.cell_dimension() != 3 {
            return Err(Error::Domain("hemispheres need a 3-dimensional mesh".into()));
        }
        Ok(self
            .cells
            .iter()
            .filter(|c| c.iter().all(|&v| if upper { self.vertices[v][3] >= 0.0 } else { self.vertices[v][3] <= 0.0 }))
            .map(|c| [c[0], c[1], c[2], c[3]])
            .collect())
    }

    /// Largest deviation of a vertex norm from 1.
    pub fn max_norm_defect(&self) -> f64 {
        self.vertices
            .iter()
            .map(|p| (p.iter().map(|x| x * x).sum::<f64>().sqrt() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

fn xyz(p: Point4) -> [f64; 3] {
    [p[0], p[1], p[2]]
}

fn sorted(c: &[usize]) -> Vec<usize> {
    let mut s = c.to_vec();
    s.sort_unstable();
    s
}
