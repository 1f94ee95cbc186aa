//! Ordered finite abstract simplicial complexes.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};

/// A simplex stored as a strictly increasing vertex tuple.
pub type Simplex = Vec<usize>;

/// Finite abstract simplicial complex, closed under faces.
///
/// Simplices of each dimension are kept sorted lexicographically; the
/// position of a simplex in that list is its canonical index, which every
/// cochain and coboundary matrix uses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    simplices: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

/// Sorts `tuple` in place and returns the parity of the sorting permutation
/// (`true` for odd), or `None` when a vertex repeats.
pub fn sort_with_parity(tuple: &mut [usize]) -> Option<bool> {
    let mut odd = false;
    for i in 1..tuple.len() {
        let mut j = i;
        while j > 0 && tuple[j - 1] > tuple[j] {
            tuple.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if tuple.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(odd)
    }
}

/// The `i`-th face of a simplex (vertex `i` removed).
pub fn face(simplex: &[usize], i: usize) -> Simplex {
    simplex
        .iter()
        .enumerate()
        .filter_map(|(j, &v)| (j != i).then_some(v))
        .collect()
}

impl SimplicialComplex {
    /// Downward closure of `facets`. Vertex ids `0..=max` are all counted as
    /// vertices even when some id does not occur.
    pub fn from_facets<I, F>(facets: I) -> Result<Self>
    where
        I: IntoIterator<Item = F>,
        F: AsRef<[usize]>,
    {
        let mut layers: Vec<BTreeSet<Simplex>> = Vec::new();
        let mut max_vertex: Option<usize> = None;
        for facet in facets {
            let mut f = facet.as_ref().to_vec();
            if f.is_empty() {
                continue;
            }
            if sort_with_parity(&mut f).is_none() {
                return Err(Error::MalformedInput(format!(
                    "facet {:?} repeats a vertex",
                    facet.as_ref()
                )));
            }
            max_vertex = max_vertex.max(f.last().copied());
            let n = f.len();
            // every nonempty subset of the facet
            for mask in 1u64..(1u64 << n) {
                let sub: Simplex = (0..n).filter(|b| mask & (1 << b) != 0).map(|b| f[b]).collect();
                let d = sub.len() - 1;
                if layers.len() <= d {
                    layers.resize_with(d + 1, BTreeSet::new);
                }
                layers[d].insert(sub);
            }
        }
        let vertex_count = max_vertex.map_or(0, |m| m + 1);
        if let Some(first) = layers.first_mut() {
            for v in 0..vertex_count {
                first.insert(vec![v]);
            }
        }
        let simplices: Vec<Vec<Simplex>> = layers.into_iter().map(|l| l.into_iter().collect()).collect();
        Ok(Self::from_layers(vertex_count, simplices))
    }

    fn from_layers(vertex_count: usize, simplices: Vec<Vec<Simplex>>) -> Self {
        let index = simplices
            .iter()
            .map(|layer| layer.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        Self { vertex_count, simplices, index }
    }

    pub fn empty() -> Self {
        Self::from_layers(0, Vec::new())
    }

    /// Full simplex on `n + 1` vertices.
    pub fn simplex(n: usize) -> Self {
        Self::from_facets([(0..=n).collect::<Vec<_>>()]).expect("distinct vertices")
    }

    /// Boundary of the `n`-simplex, a triangulated `(n-1)`-sphere.
    pub fn simplex_boundary(n: usize) -> Self {
        let full: Vec<usize> = (0..=n).collect();
        Self::from_facets((0..=n).map(|i| face(&full, i))).expect("distinct vertices")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Top dimension, `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.simplices.len().checked_sub(1)
    }

    pub fn count(&self, dim: usize) -> usize {
        self.simplices.get(dim).map_or(0, Vec::len)
    }

    pub fn simplices(&self, dim: usize) -> &[Simplex] {
        self.simplices.get(dim).map_or(&[], |l| l.as_slice())
    }

    pub fn index_of(&self, simplex: &[usize]) -> Option<usize> {
        let dim = simplex.len().checked_sub(1)?;
        self.index.get(dim)?.get(simplex).copied()
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        self.index_of(simplex).is_some()
    }

    /// Maximal simplices, in dimension order.
    pub fn facets(&self) -> Vec<Simplex> {
        let mut out = Vec::new();
        for (d, layer) in self.simplices.iter().enumerate() {
            for s in layer {
                let is_face = self.simplices.get(d + 1).is_some_and(|up| {
                    up.iter().any(|t| s.iter().all(|v| t.binary_search(v).is_ok()))
                });
                if !is_face {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    /// Indices of the `(p+1)`-simplices having simplex `idx` of dimension `p`
    /// as a face, computed by scanning.
    pub fn cofaces(&self, dim: usize, idx: usize) -> Vec<usize> {
        let s = &self.simplices[dim][idx];
        self.simplices(dim + 1)
            .iter()
            .enumerate()
            .filter(|(_, t)| s.iter().all(|v| t.binary_search(v).is_ok()))
            .map(|(i, _)| i)
            .collect()
    }

    /// For every `(p+1)`-simplex, the indices of its faces in order
    /// (face `i` omits vertex `i`).
    pub fn face_indices(&self, dim: usize) -> Vec<Vec<usize>> {
        self.simplices(dim + 1)
            .iter()
            .map(|t| (0..t.len()).map(|i| self.index[dim][&face(t, i)]).collect())
            .collect()
    }

    /// For every `p`-simplex, the `(p+1)`-simplices it is a face of, paired
    /// with its position in each of them.
    pub fn coface_lists(&self, dim: usize) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.count(dim)];
        for (t, faces) in self.face_indices(dim).into_iter().enumerate() {
            for (pos, f) in faces.into_iter().enumerate() {
                out[f].push((t, pos));
            }
        }
        out
    }

    /// Euler characteristic.
    pub fn euler_characteristic(&self) -> i64 {
        self.simplices
            .iter()
            .enumerate()
            .map(|(d, l)| if d % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }
}
