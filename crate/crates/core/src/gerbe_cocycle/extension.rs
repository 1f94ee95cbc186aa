//! Finite central extensions `0 → ℤₙ → Ĝ → Q → 1` and the obstruction to
//! lifting `Q`-valued transition data.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chain_complex::SimplicialComplex;
use crate::error::{Error, Result};

use super::bockstein::CyclicCocycle;

/// `Ĝ = Q × ℤₙ` with `(q₁, a)(q₂, b) = (q₁q₂, a + b + ω(q₁, q₂))`.
///
/// `quotient` is the Cayley table of `Q` with element 0 the identity; the
/// section is `q ↦ (q, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralExtensionTable {
    pub n: u64,
    pub quotient: Vec<Vec<usize>>,
    pub omega: Vec<Vec<u64>>,
}

pub type ExtensionElement = (usize, u64);

impl CentralExtensionTable {
    pub fn new(n: u64, quotient: Vec<Vec<usize>>, omega: Vec<Vec<u64>>) -> Result<Self> {
        let table = Self { n, quotient, omega };
        table.validate()?;
        Ok(table)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Inconsistent(msg));
        if self.n < 2 {
            return bad(format!("kernel order must be at least 2, got {}", self.n));
        }
        let m = self.quotient.len();
        if m == 0 {
            return bad("empty quotient group".into());
        }
        for (i, row) in self.quotient.iter().enumerate() {
            if row.len() != m || row.iter().any(|&v| v >= m) {
                return bad(format!("quotient table row {i} is not a row of a {m}×{m} table"));
            }
            let mut seen = vec![false; m];
            for &v in row {
                seen[v] = true;
            }
            if seen.iter().any(|s| !s) {
                return bad(format!("quotient table row {i} is not a permutation"));
            }
        }
        for a in 0..m {
            if self.quotient[0][a] != a || self.quotient[a][0] != a {
                return bad("element 0 is not the identity of the quotient".into());
            }
            for b in 0..m {
                for c in 0..m {
                    if self.mul_q(self.mul_q(a, b), c) != self.mul_q(a, self.mul_q(b, c)) {
                        return bad(format!("quotient table is not associative at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        if self.omega.len() != m || self.omega.iter().any(|r| r.len() != m || r.iter().any(|&v| v >= self.n)) {
            return bad(format!("omega must be a {m}×{m} table with entries below {}", self.n));
        }
        for a in 0..m {
            if self.omega[0][a] != 0 || self.omega[a][0] != 0 {
                return bad("omega must be normalized (ω(0, q) = ω(q, 0) = 0)".into());
            }
            for b in 0..m {
                for c in 0..m {
                    let lhs = self.omega[a][b] + self.omega[self.mul_q(a, b)][c];
                    let rhs = self.omega[b][c] + self.omega[a][self.mul_q(b, c)];
                    if lhs % self.n != rhs % self.n {
                        return bad(format!("omega violates the cocycle identity at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn quotient_order(&self) -> usize {
        self.quotient.len()
    }

    pub fn mul_q(&self, a: usize, b: usize) -> usize {
        self.quotient[a][b]
    }

    pub fn inv_q(&self, a: usize) -> usize {
        self.quotient[a].iter().position(|&v| v == 0).expect("group table")
    }

    pub fn mul(&self, x: ExtensionElement, y: ExtensionElement) -> ExtensionElement {
        (self.mul_q(x.0, y.0), (x.1 + y.1 + self.omega[x.0][y.0]) % self.n)
    }

    pub fn inv(&self, x: ExtensionElement) -> ExtensionElement {
        let q = self.inv_q(x.0);
        let phase = (2 * self.n - x.1 % self.n - self.omega[x.0][q]) % self.n;
        (q, phase)
    }

    pub fn section(&self, q: usize) -> ExtensionElement {
        (q, 0)
    }
}

/// `ε(αβγ)`: the central phase of `s(t_βγ)·s(t_αγ)⁻¹·s(t_αβ)` for a
/// `Q`-valued transition cochain `t` on the edges of `complex`.
pub fn lifting_obstruction(
    ext: &CentralExtensionTable,
    complex: &Arc<SimplicialComplex>,
    t: &[usize],
) -> Result<CyclicCocycle> {
    if t.len() != complex.count(1) {
        return Err(Error::InvalidTransition(format!(
            "transition data needs {} edge values, got {}",
            complex.count(1),
            t.len()
        )));
    }
    if let Some(v) = t.iter().find(|&&v| v >= ext.quotient_order()) {
        return Err(Error::InvalidTransition(format!("{v} is not an element of the quotient")));
    }
    let edges = if complex.count(2) > 0 { complex.face_indices(1) } else { Vec::new() };
    let mut values = Vec::with_capacity(edges.len());
    for (tri, fs) in edges.iter().enumerate() {
        let (bg, ag, ab) = (t[fs[0]], t[fs[1]], t[fs[2]]);
        if ext.mul_q(ext.mul_q(bg, ext.inv_q(ag)), ab) != 0 {
            return Err(Error::InvalidTransition(format!(
                "t_βγ·t_αγ⁻¹·t_αβ ≠ 1 on {:?}",
                complex.simplices(2)[tri]
            )));
        }
        let lifted = ext.mul(ext.mul(ext.section(bg), ext.inv(ext.section(ag))), ext.section(ab));
        debug_assert_eq!(lifted.0, 0);
        values.push(lifted.1);
    }
    CyclicCocycle::from_values(complex.clone(), 2, ext.n, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gerbe_cocycle::bockstein::{cyclic_cocycle_generators, is_cyclic_coboundary};

    /// ℤ₄ as an extension of ℤ₂ by ℤ₂.
    fn z4_by_z2() -> CentralExtensionTable {
        CentralExtensionTable::new(2, vec![vec![0, 1], vec![1, 0]], vec![vec![0, 0], vec![0, 1]]).unwrap()
    }

    fn rp2() -> Arc<SimplicialComplex> {
        Arc::new(
            SimplicialComplex::from_facets(vec![
                vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 4], vec![0, 4, 5], vec![0, 1, 5],
                vec![1, 2, 4], vec![2, 3, 5], vec![1, 3, 4], vec![1, 3, 5], vec![2, 4, 5],
            ])
            .unwrap(),
        )
    }

    /// Phase computed directly in ℤ₄: s(q) = q, kernel element 2 ↦ phase 1.
    fn brute_force(complex: &SimplicialComplex, t: &[usize]) -> Vec<u64> {
        complex
            .face_indices(1)
            .iter()
            .map(|fs| {
                let g = (t[fs[0]] as i64 - t[fs[1]] as i64 + t[fs[2]] as i64).rem_euclid(4);
                assert!(g == 0 || g == 2);
                (g / 2) as u64
            })
            .collect()
    }

    #[test]
    fn trivial_extension_and_trivial_transitions() {
        let k = rp2();
        let split = CentralExtensionTable::new(3, vec![vec![0, 1], vec![1, 0]], vec![vec![0, 0], vec![0, 0]]).unwrap();
        let gens = cyclic_cocycle_generators(&k, 1, 2).unwrap();
        let t: Vec<usize> = gens[0].values().iter().map(|&v| v as usize).collect();
        let eps = lifting_obstruction(&split, &k, &t).unwrap();
        assert!(eps.cochain().values().iter().all(|&v| v == 0));
        let eps = lifting_obstruction(&z4_by_z2(), &k, &vec![0; k.count(1)]).unwrap();
        assert!(eps.cochain().values().iter().all(|&v| v == 0));
    }

    #[test]
    fn nonsplit_extension_matches_group_multiplication() {
        let k = rp2();
        let ext = z4_by_z2();
        let mut nontrivial = false;
        for z in cyclic_cocycle_generators(&k, 1, 2).unwrap() {
            let t: Vec<usize> = z.values().iter().map(|&v| v as usize).collect();
            let eps = lifting_obstruction(&ext, &k, &t).unwrap();
            assert_eq!(eps.cochain().values(), brute_force(&k, &t).as_slice());
            nontrivial |= !is_cyclic_coboundary(&eps).unwrap();
        }
        // w₁² ≠ 0 on ℝP²: the nontrivial ℤ₂ bundle does not lift to ℤ₄
        assert!(nontrivial);
    }

    #[test]
    fn bad_inputs() {
        let k = rp2();
        let mut t = vec![0; k.count(1)];
        t[0] = 1;
        assert!(matches!(lifting_obstruction(&z4_by_z2(), &k, &t), Err(Error::InvalidTransition(_))));
        assert!(CentralExtensionTable::new(2, vec![vec![0, 1], vec![1, 0]], vec![vec![0, 1], vec![0, 0]]).is_err());
        assert!(CentralExtensionTable::new(2, vec![vec![0, 1], vec![0, 1]], vec![vec![0, 0], vec![0, 0]]).is_err());
    }

    #[test]
    fn inverses() {
        let ext = z4_by_z2();
        for q in 0..2 {
            for a in 0..2 {
                assert_eq!(ext.mul((q, a), ext.inv((q, a))), (0, 0));
            }
        }
    }
}
