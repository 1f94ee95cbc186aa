//! Oriented triangulated surfaces and volumes with chart assignments.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

/// Chart per simplex, keyed by the sorted vertex list.
pub type ChartMap = BTreeMap<Vec<usize>, usize>;
/// Admissible charts per simplex (the subordination certificate).
pub type Witnesses = BTreeMap<Vec<usize>, Vec<usize>>;

fn sorted<const N: usize>(s: [usize; N]) -> Vec<usize> {
    let mut v = s.to_vec();
    v.sort_unstable();
    v
}

/// Every vertex, edge and face of the given faces, as sorted keys.
fn closure_of_faces(faces: &[[usize; 3]]) -> BTreeSet<Vec<usize>> {
    let mut keys = BTreeSet::new();
    for f in faces {
        let s = sorted(*f);
        keys.insert(vec![s[0]]);
        keys.insert(vec![s[1]]);
        keys.insert(vec![s[2]]);
        keys.insert(vec![s[0], s[1]]);
        keys.insert(vec![s[0], s[2]]);
        keys.insert(vec![s[1], s[2]]);
        keys.insert(s);
    }
    keys
}

fn check_charts(keys: &BTreeSet<Vec<usize>>, chi: &ChartMap, admissible: &Witnesses) -> Result<()> {
    for k in keys {
        let c = chi
            .get(k)
            .ok_or_else(|| Error::InvalidChart(format!("no chart assigned to simplex {k:?}")))?;
        let ok = admissible.get(k).is_some_and(|w| w.contains(c));
        if !ok {
            return Err(Error::InvalidChart(format!("chart {c} is not admissible for simplex {k:?}")));
        }
    }
    Ok(())
}

fn restrict<V: Clone>(map: &BTreeMap<Vec<usize>, V>, keys: &BTreeSet<Vec<usize>>) -> BTreeMap<Vec<usize>, V> {
    keys.iter().filter_map(|k| map.get(k).map(|v| (k.clone(), v.clone()))).collect()
}

/// A closed oriented triangulated surface with a subordinate chart choice.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartedSurface {
    faces: Vec<[usize; 3]>,
    chi: ChartMap,
    admissible: Witnesses,
}

impl ChartedSurface {
    pub fn new(faces: Vec<[usize; 3]>, chi: ChartMap, admissible: Witnesses) -> Result<Self> {
        let mut directed: BTreeSet<(usize, usize)> = BTreeSet::new();
        for f in &faces {
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(Error::Inconsistent(format!("degenerate face {f:?}")));
            }
            for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                if !directed.insert((a, b)) {
                    return Err(Error::Inconsistent(format!(
                        "edge {a}→{b} used twice with the same orientation; the surface is not oriented"
                    )));
                }
            }
        }
        if let Some(&(a, b)) = directed.iter().find(|&&(a, b)| !directed.contains(&(b, a))) {
            return Err(Error::Inconsistent(format!(
                "edge {a}–{b} bounds only one face; surfaces must be closed"
            )));
        }
        let keys = closure_of_faces(&faces);
        check_charts(&keys, &chi, &admissible)?;
        let chi = restrict(&chi, &keys);
        let admissible = restrict(&admissible, &keys);
        Ok(Self { faces, chi, admissible })
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn chi(&self) -> &ChartMap {
        &self.chi
    }

    pub fn admissible(&self) -> &Witnesses {
        &self.admissible
    }

    /// Chart of the simplex with the given vertices (any order).
    pub fn chart(&self, simplex: &[usize]) -> usize {
        let mut k = simplex.to_vec();
        k.sort_unstable();
        self.chi[&k]
    }

    /// The same surface with a new chart assignment.
    pub fn rechart(&self, chi: ChartMap) -> Result<Self> {
        let keys: BTreeSet<Vec<usize>> = self.chi.keys().cloned().collect();
        check_charts(&keys, &chi, &self.admissible)?;
        Ok(Self { faces: self.faces.clone(), chi: restrict(&chi, &keys), admissible: self.admissible.clone() })
    }

    /// The surface with the opposite orientation.
    pub fn reversed(&self) -> Self {
        Self {
            faces: self.faces.iter().map(|f| [f[1], f[0], f[2]]).collect(),
            chi: self.chi.clone(),
            admissible: self.admissible.clone(),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        let mut counts = [0i64; 3];
        for k in self.chi.keys() {
            counts[k.len() - 1] += 1;
        }
        counts[0] - counts[1] + counts[2]
    }
}

/// A compact oriented triangulated 3-manifold with boundary and charts.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartedVolume {
    tets: Vec<[usize; 4]>,
    chi: ChartMap,
    admissible: Witnesses,
}

/// Faces of an oriented tetrahedron with their induced orientations.
pub fn oriented_faces(t: [usize; 4]) -> [[usize; 3]; 4] {
    let [a, b, c, d] = t;
    // ∂(abcd) = bcd − acd + abd − abc
    [[b, c, d], [c, a, d], [a, b, d], [b, a, c]]
}

impl ChartedVolume {
    pub fn new(tets: Vec<[usize; 4]>, chi: ChartMap, admissible: Witnesses) -> Result<Self> {
        let mut seen: BTreeMap<Vec<usize>, Vec<[usize; 3]>> = BTreeMap::new();
        let mut keys = BTreeSet::new();
        for t in &tets {
            let s = sorted(*t);
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Inconsistent(format!("degenerate tetrahedron {t:?}")));
            }
            for f in oriented_faces(*t) {
                seen.entry(sorted(f)).or_default().push(f);
            }
            keys.extend(closure_of_faces(&oriented_faces(*t)));
            keys.insert(s);
        }
        for (k, fs) in &seen {
            match fs.len() {
                1 => {}
                2 if opposite(fs[0], fs[1]) => {}
                _ => {
                    return Err(Error::Inconsistent(format!(
                        "face {k:?} is shared inconsistently by {} tetrahedra",
                        fs.len()
                    )))
                }
            }
        }
        check_charts(&keys, &chi, &admissible)?;
        let chi = restrict(&chi, &keys);
        let admissible = restrict(&admissible, &keys);
        Ok(Self { tets, chi, admissible })
    }

    pub fn tets(&self) -> &[[usize; 4]] {
        &self.tets
    }

    pub fn chi(&self) -> &ChartMap {
        &self.chi
    }

    pub fn admissible(&self) -> &Witnesses {
        &self.admissible
    }

    pub fn chart(&self, simplex: &[usize]) -> usize {
        let mut k = simplex.to_vec();
        k.sort_unstable();
        self.chi[&k]
    }

    /// Boundary faces with induced orientation, in the order met.
    pub fn boundary_faces(&self) -> Vec<[usize; 3]> {
        let mut count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for t in &self.tets {
            for f in oriented_faces(*t) {
                *count.entry(sorted(f)).or_default() += 1;
            }
        }
        self.tets
            .iter()
            .flat_map(|t| oriented_faces(*t))
            .filter(|f| count[&sorted(*f)] == 1)
            .collect()
    }

    /// `∂X` with inherited charts and witnesses.
    pub fn boundary(&self) -> Result<ChartedSurface> {
        let faces = self.boundary_faces();
        let keys = closure_of_faces(&faces);
        ChartedSurface::new(faces, restrict(&self.chi, &keys), restrict(&self.admissible, &keys))
    }
}

/// Whether two orderings of the same triangle have opposite orientation.
fn opposite(a: [usize; 3], b: [usize; 3]) -> bool {
    let rotations = [[b[0], b[1], b[2]], [b[1], b[2], b[0]], [b[2], b[0], b[1]]];
    !rotations.contains(&a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_chart(keys: impl IntoIterator<Item = Vec<usize>>) -> (ChartMap, Witnesses) {
        let mut chi = ChartMap::new();
        let mut adm = Witnesses::new();
        for k in keys {
            chi.insert(k.clone(), 0);
            adm.insert(k, vec![0, 1]);
        }
        (chi, adm)
    }

    pub(crate) fn tetra_boundary() -> Vec<[usize; 3]> {
        oriented_faces([0, 1, 2, 3]).to_vec()
    }

    #[test]
    fn tetrahedron_boundary_is_a_sphere() {
        let faces = tetra_boundary();
        let (chi, adm) = single_chart(closure_of_faces(&faces));
        let s = ChartedSurface::new(faces, chi, adm).unwrap();
        assert_eq!(s.euler_characteristic(), 2);
        let r = s.reversed();
        assert_eq!(r.reversed(), s);
    }

    #[test]
    fn open_or_unoriented_surfaces_are_rejected() {
        let mut faces = tetra_boundary();
        faces.pop();
        let (chi, adm) = single_chart(closure_of_faces(&faces));
        assert!(matches!(ChartedSurface::new(faces, chi, adm), Err(Error::Inconsistent(_))));
        let mut faces = tetra_boundary();
        faces[0] = [faces[0][1], faces[0][0], faces[0][2]];
        let (chi, adm) = single_chart(closure_of_faces(&faces));
        assert!(ChartedSurface::new(faces, chi, adm).is_err());
    }

    #[test]
    fn inadmissible_charts_are_rejected() {
        let faces = tetra_boundary();
        let (mut chi, adm) = single_chart(closure_of_faces(&faces));
        let s = ChartedSurface::new(faces.clone(), chi.clone(), adm.clone()).unwrap();
        chi.insert(vec![1, 2], 1);
        assert!(s.rechart(chi.clone()).is_ok());
        chi.insert(vec![1, 2], 5);
        assert!(matches!(s.rechart(chi), Err(Error::InvalidChart(_))));
    }

    #[test]
    fn volume_boundary() {
        // two tetrahedra glued along 123: boundary has six faces
        let tets = vec![[0, 1, 2, 3], [4, 1, 3, 2]];
        let mut keys = BTreeSet::new();
        for t in &tets {
            keys.extend(closure_of_faces(&oriented_faces(*t)));
            keys.insert(sorted(*t));
        }
        let (chi, adm) = single_chart(keys);
        let x = ChartedVolume::new(tets, chi, adm).unwrap();
        let b = x.boundary().unwrap();
        assert_eq!(b.faces().len(), 6);
        assert_eq!(b.euler_characteristic(), 2);
    }
}
