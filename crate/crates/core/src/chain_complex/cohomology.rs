//! Integral cohomology groups and class coordinates.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::coefficients::Integers;
use super::cochain::Cochain;
use super::complex::SimplicialComplex;
use super::matrix::{coboundary_matrix, IntegerMatrix};
use super::smith::{smith_normal_form, SmithDecomposition};

/// `Hᵖ(K; ℤ) ≅ ℤ^free_rank ⊕ ⨁ ℤ/tᵢ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyGroup {
    pub degree: usize,
    pub free_rank: usize,
    /// Invariant factors greater than one, in divisibility order.
    pub torsion: Vec<u64>,
}

impl CohomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for CohomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A torsion coordinate: residue modulo `order`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorsionCoordinate {
    pub order: u64,
    pub residue: u64,
}

/// Coordinates of a cohomology class in the decomposition of its group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassCoords {
    pub free: Vec<i64>,
    pub torsion: Vec<TorsionCoordinate>,
}

impl ClassCoords {
    pub fn zero(group: &CohomologyGroup) -> Self {
        Self {
            free: vec![0; group.free_rank],
            torsion: group.torsion.iter().map(|&order| TorsionCoordinate { order, residue: 0 }).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free.iter().all(|&v| v == 0) && self.torsion.iter().all(|t| t.residue == 0)
    }

    fn assert_same_group(&self, other: &Self) {
        assert_eq!(self.free.len(), other.free.len(), "classes from different groups");
        assert!(
            self.torsion.iter().zip(&other.torsion).all(|(a, b)| a.order == b.order)
                && self.torsion.len() == other.torsion.len(),
            "classes from different groups"
        );
    }

    /// `k` times this class.
    pub fn scale(&self, k: i64) -> Self {
        Self {
            free: self.free.iter().map(|v| v * k).collect(),
            torsion: self
                .torsion
                .iter()
                .map(|t| TorsionCoordinate {
                    order: t.order,
                    residue: ((t.residue as i128 * k as i128).rem_euclid(t.order as i128)) as u64,
                })
                .collect(),
        }
    }
}

impl Add for &ClassCoords {
    type Output = ClassCoords;
    fn add(self, other: &ClassCoords) -> ClassCoords {
        self.assert_same_group(other);
        ClassCoords {
            free: self.free.iter().zip(&other.free).map(|(a, b)| a + b).collect(),
            torsion: self
                .torsion
                .iter()
                .zip(&other.torsion)
                .map(|(a, b)| TorsionCoordinate { order: a.order, residue: (a.residue + b.residue) % a.order })
                .collect(),
        }
    }
}

impl Neg for &ClassCoords {
    type Output = ClassCoords;
    fn neg(self) -> ClassCoords {
        self.scale(-1)
    }
}

impl Sub for &ClassCoords {
    type Output = ClassCoords;
    fn sub(self, other: &ClassCoords) -> ClassCoords {
        self + &(-other)
    }
}

impl fmt::Display for ClassCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.free.iter().map(|v| v.to_string()).collect();
        parts.extend(self.torsion.iter().map(|t| format!("{} mod {}", t.residue, t.order)));
        write!(f, "({})", parts.join(", "))
    }
}

/// Precomputed data for one degree: Smith forms of `δₚ` and of `δₚ₋₁`
/// restricted to the cocycle coordinates.
///
/// With `D_A = U_A δₚ V_A` of rank `r`, the last columns of `V_A` span the
/// cocycles. `B'` is `δₚ₋₁` written in those coordinates and
/// `D' = U' B' V'`. A cocycle `z` has coordinates `y = U'·(V_A⁻¹ z)[r..]`.
#[derive(Clone, Debug)]
pub struct CohomologyComputer {
    complex: Arc<SimplicialComplex>,
    degree: usize,
    group: CohomologyGroup,
    cochain_count: usize,
    snf_a: SmithDecomposition,
    snf_b: SmithDecomposition,
    /// Sign making each free coordinate functional's first nonzero entry positive.
    free_signs: Vec<i64>,
    lower_count: usize,
}

fn to_u64(v: &BigInt) -> Result<u64> {
    v.to_u64().ok_or_else(|| Error::Unsupported(format!("invariant factor {v} exceeds 64 bits")))
}

fn to_i64(v: &BigInt) -> Result<i64> {
    v.to_i64().ok_or_else(|| Error::Unsupported(format!("class coordinate {v} exceeds 64 bits")))
}

impl CohomologyComputer {
    pub fn new(complex: Arc<SimplicialComplex>, degree: usize) -> Result<Self> {
        let n = complex.count(degree);
        let a = if n == 0 {
            IntegerMatrix::zeros(0, 0)
        } else {
            coboundary_matrix(&complex, degree)?
        };
        let lower_count = if degree == 0 { 0 } else { complex.count(degree - 1) };
        let b = if degree == 0 || n == 0 {
            IntegerMatrix::zeros(n, lower_count)
        } else {
            coboundary_matrix(&complex, degree - 1)?
        };
        let snf_a = smith_normal_form(&a);
        let mut b = b;
        snf_a.apply_v_inverse_to_rows(&mut b);
        let b_prime = b.rows_from(snf_a.rank());
        let snf_b = smith_normal_form(&b_prime);
        let cocycle_dim = n - snf_a.rank();
        let free_rank = cocycle_dim - snf_b.rank();
        let torsion = snf_b
            .diagonal()
            .iter()
            .filter(|d| !d.is_one())
            .map(to_u64)
            .collect::<Result<Vec<_>>>()?;
        let mut computer = Self {
            complex,
            degree,
            group: CohomologyGroup { degree, free_rank, torsion },
            cochain_count: n,
            snf_a,
            snf_b,
            free_signs: Vec::new(),
            lower_count,
        };
        computer.free_signs = (0..free_rank)
            .map(|i| {
                let lambda = computer.free_functional_unsigned(i);
                match lambda.iter().find(|v| !v.is_zero()) {
                    Some(v) if v.is_negative() => -1,
                    _ => 1,
                }
            })
            .collect();
        Ok(computer)
    }

    pub fn group(&self) -> &CohomologyGroup {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    fn free_functional_unsigned(&self, i: usize) -> Vec<BigInt> {
        let r_a = self.snf_a.rank();
        let mut e = vec![BigInt::zero(); self.cochain_count - r_a];
        e[self.snf_b.rank() + i] = BigInt::one();
        self.snf_b.apply_u_transpose(&mut e);
        let mut lambda = vec![BigInt::zero(); r_a];
        lambda.extend(e);
        self.snf_a.apply_v_inverse_transpose(&mut lambda);
        lambda
    }

    /// The linear functional on cochains reading off free coordinate `i`.
    pub fn free_functional(&self, i: usize) -> Vec<BigInt> {
        let s = BigInt::from(self.free_signs[i]);
        self.free_functional_unsigned(i).into_iter().map(|v| v * &s).collect()
    }

    fn check_length(&self, len: usize) -> Result<()> {
        if len != self.cochain_count {
            return Err(Error::ContractViolation(format!(
                "degree-{} cochain needs {} values, got {len}",
                self.degree, self.cochain_count
            )));
        }
        Ok(())
    }

    fn is_cocycle(&self, z: &[BigInt]) -> bool {
        if self.cochain_count == 0 {
            return true;
        }
        match self.complex.dimension() {
            Some(d) if self.degree < d => {}
            _ => return true,
        }
        self.complex
            .face_indices(self.degree)
            .iter()
            .all(|fs| {
                let mut acc = BigInt::zero();
                for (i, &c) in fs.iter().enumerate() {
                    if i % 2 == 0 {
                        acc += &z[c];
                    } else {
                        acc -= &z[c];
                    }
                }
                acc.is_zero()
            })
    }

    /// `y = U'·(V_A⁻¹ z)[r..]`.
    fn reduced(&self, z: &[BigInt]) -> Result<Vec<BigInt>> {
        self.check_length(z.len())?;
        if !self.is_cocycle(z) {
            return Err(Error::NotACocycle(format!("degree-{} cochain has nonzero coboundary", self.degree)));
        }
        let mut x = z.to_vec();
        self.snf_a.apply_v_inverse(&mut x);
        let mut w = x.split_off(self.snf_a.rank());
        self.snf_b.apply_u(&mut w);
        Ok(w)
    }

    /// Class of an integer cocycle given as big integers.
    pub fn class_of_big(&self, z: &[BigInt]) -> Result<ClassCoords> {
        let y = self.reduced(z)?;
        let r_b = self.snf_b.rank();
        let mut torsion = Vec::new();
        for (i, d) in self.snf_b.diagonal().iter().enumerate() {
            if !d.is_one() {
                torsion.push(TorsionCoordinate { order: to_u64(d)?, residue: to_u64(&y[i].mod_floor(d))? });
            }
        }
        let free = (0..self.group.free_rank)
            .map(|i| to_i64(&(&y[r_b + i] * self.free_signs[i])))
            .collect::<Result<Vec<_>>>()?;
        Ok(ClassCoords { free, torsion })
    }

    pub fn class_of(&self, z: &Cochain<Integers>) -> Result<ClassCoords> {
        self.check_cochain(z)?;
        let big: Vec<BigInt> = z.values().iter().map(|&v| BigInt::from(v)).collect();
        self.class_of_big(&big)
    }

    fn check_cochain(&self, z: &Cochain<Integers>) -> Result<()> {
        if z.degree() != self.degree || **z.complex() != *self.complex {
            return Err(Error::ContractViolation("cochain does not match the cohomology degree/complex".into()));
        }
        Ok(())
    }

    /// A cocycle representing the given coordinates.
    pub fn representative(&self, class: &ClassCoords) -> Result<Cochain<Integers>> {
        if class.free.len() != self.group.free_rank || class.torsion.len() != self.group.torsion.len() {
            return Err(Error::ContractViolation("class coordinates do not match the group".into()));
        }
        let r_a = self.snf_a.rank();
        let r_b = self.snf_b.rank();
        let mut y = vec![BigInt::zero(); self.cochain_count - r_a];
        let mut t = class.torsion.iter();
        for (i, d) in self.snf_b.diagonal().iter().enumerate() {
            if !d.is_one() {
                y[i] = BigInt::from(t.next().expect("torsion count checked").residue);
            }
        }
        for (i, &v) in class.free.iter().enumerate() {
            y[r_b + i] = BigInt::from(v * self.free_signs[i]);
        }
        self.snf_b.apply_u_inverse(&mut y);
        let mut x = vec![BigInt::zero(); r_a];
        x.extend(y);
        self.snf_a.apply_v(&mut x);
        let values = x.iter().map(to_i64).collect::<Result<Vec<_>>>()?;
        Cochain::new(self.complex.clone(), self.degree, Integers, values)
    }

    /// Some `b` with `δb = z`, or `None` when `z` is a cocycle with nonzero
    /// class.
    pub fn solve_coboundary_big(&self, z: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        if self.degree == 0 {
            return Err(Error::Domain("there are no coboundaries in degree 0".into()));
        }
        let y = self.reduced(z)?;
        let r_b = self.snf_b.rank();
        if y[r_b..].iter().any(|v| !v.is_zero()) {
            return Ok(None);
        }
        let mut x = vec![BigInt::zero(); self.lower_count];
        for (i, d) in self.snf_b.diagonal().iter().enumerate() {
            let (q, r) = y[i].div_mod_floor(d);
            if !r.is_zero() {
                return Ok(None);
            }
            x[i] = q;
        }
        self.snf_b.apply_v(&mut x);
        Ok(Some(x))
    }

    pub fn solve_coboundary(&self, z: &Cochain<Integers>) -> Result<Option<Cochain<Integers>>> {
        self.check_cochain(z)?;
        let big: Vec<BigInt> = z.values().iter().map(|&v| BigInt::from(v)).collect();
        match self.solve_coboundary_big(&big)? {
            None => Ok(None),
            Some(b) => {
                let values = b.iter().map(to_i64).collect::<Result<Vec<_>>>()?;
                Ok(Some(Cochain::new(self.complex.clone(), self.degree - 1, Integers, values)?))
            }
        }
    }
}

/// `Hᵖ(K; ℤ)`; degrees outside `0..=dim K` give the zero group.
pub fn cohomology_group(complex: &Arc<SimplicialComplex>, degree: usize) -> Result<CohomologyGroup> {
    Ok(CohomologyComputer::new(complex.clone(), degree)?.group)
}

/// Coordinates of the class of an integer cocycle.
pub fn cocycle_class(z: &Cochain<Integers>) -> Result<ClassCoords> {
    CohomologyComputer::new(z.complex().clone(), z.degree())?.class_of(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arc(facets: &[&[usize]]) -> Arc<SimplicialComplex> {
        Arc::new(SimplicialComplex::from_facets(facets.iter().map(|f| f.to_vec())).unwrap())
    }

    /// 6-vertex triangulation of ℝP².
    fn rp2() -> Arc<SimplicialComplex> {
        arc(&[
            &[0, 1, 2], &[0, 2, 3], &[0, 3, 4], &[0, 4, 5], &[0, 1, 5],
            &[1, 2, 4], &[2, 3, 5], &[1, 3, 4], &[1, 3, 5], &[2, 4, 5],
        ])
    }

    fn torus() -> Arc<SimplicialComplex> {
        // 3×3 grid with identified sides
        let v = |i: usize, j: usize| (i % 3) * 3 + (j % 3);
        let mut facets = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                facets.push(vec![v(i, j), v(i + 1, j), v(i + 1, j + 1)]);
                facets.push(vec![v(i, j), v(i, j + 1), v(i + 1, j + 1)]);
            }
        }
        Arc::new(SimplicialComplex::from_facets(facets).unwrap())
    }

    fn group(k: &Arc<SimplicialComplex>, p: usize) -> String {
        cohomology_group(k, p).unwrap().to_string()
    }

    #[test]
    fn spheres() {
        for n in 1..5 {
            let k = Arc::new(SimplicialComplex::simplex_boundary(n + 1));
            for p in 0..=n + 1 {
                let expected = if p == 0 || p == n { "Z" } else { "0" };
                assert_eq!(group(&k, p), expected, "H^{p}(S^{n})");
            }
        }
    }

    #[test]
    fn projective_plane_and_torus() {
        let k = rp2();
        assert_eq!(k.euler_characteristic(), 1);
        assert_eq!([group(&k, 0), group(&k, 1), group(&k, 2)], ["Z", "0", "Z/2"]);
        let t = torus();
        assert_eq!([group(&t, 0), group(&t, 1), group(&t, 2)], ["Z", "Z^2", "Z"]);
    }

    #[test]
    fn empty_complex_and_high_degrees() {
        let e = Arc::new(SimplicialComplex::empty());
        assert!(cohomology_group(&e, 0).unwrap().is_trivial());
        let k = Arc::new(SimplicialComplex::simplex(2));
        assert!(cohomology_group(&k, 7).unwrap().is_trivial());
    }

    #[test]
    fn fundamental_class_of_tetrahedron_boundary() {
        let k = Arc::new(SimplicialComplex::simplex_boundary(3));
        let c = CohomologyComputer::new(k.clone(), 2).unwrap();
        // evaluation on the fundamental cycle Σ (-1)^i [face_i of 0123]
        let lambda = c.free_functional(0);
        let fundamental: Vec<i64> = k
            .simplices(2)
            .iter()
            .map(|t| {
                let missing = (0..4).find(|v| !t.contains(v)).unwrap();
                if missing % 2 == 0 { 1 } else { -1 }
            })
            .collect();
        let sign = if fundamental[0] > 0 { 1 } else { -1 };
        for (l, f) in lambda.iter().zip(&fundamental) {
            assert_eq!(*l, BigInt::from(f * sign));
        }
        for t in 0..4 {
            let mut v = vec![0i64; 4];
            v[t] = 1;
            let z = Cochain::new(k.clone(), 2, Integers, v).unwrap();
            let cls = c.class_of(&z).unwrap();
            assert_eq!(cls.free[0].abs(), 1);
        }
    }

    #[test]
    fn torsion_class_on_rp2() {
        let k = rp2();
        let c = CohomologyComputer::new(k.clone(), 2).unwrap();
        let mut v = vec![0; k.count(2)];
        v[0] = 1;
        let z = Cochain::new(k.clone(), 2, Integers, v).unwrap();
        let cls = c.class_of(&z).unwrap();
        assert_eq!(cls.torsion, vec![TorsionCoordinate { order: 2, residue: 1 }]);
        assert!(c.solve_coboundary(&z).unwrap().is_none());
        let twice = z.power(2);
        let b = c.solve_coboundary(&twice).unwrap().unwrap();
        assert_eq!(b.coboundary(), twice);
    }

    #[test]
    fn non_cocycles_are_rejected() {
        let k = Arc::new(SimplicialComplex::simplex_boundary(3));
        let z = Cochain::new(k, 1, Integers, vec![1, 0, 0, 0, 0, 0]).unwrap();
        assert!(matches!(cocycle_class(&z), Err(Error::NotACocycle(_))));
    }

    proptest! {
        #[test]
        fn classes_are_additive_and_coboundaries_vanish(
            a in prop::collection::vec(-3i64..4, 10),
            b in prop::collection::vec(-3i64..4, 10),
            p in 1usize..3,
        ) {
            let k = torus();
            let c = CohomologyComputer::new(k.clone(), p).unwrap();
            let lower = |v: &[i64]| {
                let vals: Vec<i64> = (0..k.count(p - 1)).map(|i| v[i % v.len()]).collect();
                Cochain::new(k.clone(), p - 1, Integers, vals).unwrap().coboundary()
            };
            let ex = lower(&a);
            prop_assert!(c.class_of(&ex).unwrap().is_zero());
            let gens: Vec<ClassCoords> = (0..c.group().free_rank)
                .map(|i| {
                    let mut cls = ClassCoords::zero(c.group());
                    cls.free[i] = a[i] + 2 * b[i];
                    cls
                })
                .collect();
            for g in gens {
                let rep = c.representative(&g).unwrap();
                prop_assert_eq!(rep.coboundary().values().iter().all(|&v| v == 0), true);
                let shifted = rep.combine(&lower(&b)).unwrap();
                prop_assert_eq!(c.class_of(&shifted).unwrap(), g.clone());
                let sum = c.class_of(&rep.combine(&rep).unwrap()).unwrap();
                prop_assert_eq!(sum, &g + &g);
            }
        }
    }
}
