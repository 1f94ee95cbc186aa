//! ℤₙ cocycles and the Bockstein map `Hᵖ(K; ℤₙ) → Hᵖ⁺¹(K; ℤ)`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::chain_complex::{coboundary_matrix, smith_normal_form, Cochain, CohomologyComputer, Cyclic, Integers, SimplicialComplex};
use crate::error::{Error, Result};

use super::dd::DixmierDouadyClass;

/// A ℤₙ-valued cocycle.
#[derive(Clone, Debug, PartialEq)]
pub struct CyclicCocycle {
    eps: Cochain<Cyclic>,
}

impl CyclicCocycle {
    pub fn new(eps: Cochain<Cyclic>) -> Result<Self> {
        if let Some(t) = eps.coboundary().values().iter().position(|&v| v != 0) {
            let simplex = eps.complex().simplices(eps.degree() + 1)[t].clone();
            return Err(Error::NotACocycle(format!("δε ≠ 0 mod {} on {simplex:?}", eps.coefficients().order())));
        }
        Ok(Self { eps })
    }

    pub fn from_values(complex: Arc<SimplicialComplex>, degree: usize, n: u64, values: Vec<u64>) -> Result<Self> {
        let c = Cyclic::new(n);
        let values = values.into_iter().map(|v| v % n).collect();
        Self::new(Cochain::new(complex, degree, c, values)?)
    }

    pub fn cochain(&self) -> &Cochain<Cyclic> {
        &self.eps
    }

    pub fn order(&self) -> u64 {
        self.eps.coefficients().order()
    }

    pub fn degree(&self) -> usize {
        self.eps.degree()
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        self.eps.complex()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self { eps: self.eps.combine(&other.eps)? })
    }

    /// Lift to representatives in `0..n`.
    pub fn lift(&self) -> Cochain<Integers> {
        self.eps.map(Integers, |&v| v as i64)
    }

    /// Reduction of an integer cocycle mod `n`.
    pub fn reduce(z: &Cochain<Integers>, n: u64) -> Result<Self> {
        let c = Cyclic::new(n);
        Self::new(z.map(c, |&v| c.reduce(v)))
    }
}

/// `β(ε) = [δ(lift ε)/n]`.
pub fn bockstein(eps: &CyclicCocycle) -> Result<DixmierDouadyClass> {
    let computer = CohomologyComputer::new(eps.complex().clone(), eps.degree() + 1)?;
    bockstein_with(&computer, eps)
}

pub fn bockstein_with(computer: &CohomologyComputer, eps: &CyclicCocycle) -> Result<DixmierDouadyClass> {
    if computer.degree() != eps.degree() + 1 || **computer.complex() != **eps.complex() {
        return Err(Error::ContractViolation("cohomology data does not match the cocycle".into()));
    }
    let n = eps.order() as i64;
    let d = eps.lift().coboundary();
    let values = d
        .values()
        .iter()
        .map(|&v| {
            debug_assert_eq!(v % n, 0);
            v / n
        })
        .collect();
    let z = Cochain::new(eps.complex().clone(), eps.degree() + 1, Integers, values)?;
    let coords = computer.class_of(&z)?;
    Ok(DixmierDouadyClass { group: computer.group().clone(), coords, representative: Some(z) })
}

/// Whether `ε = δb` for some ℤₙ cochain `b`.
pub fn is_cyclic_coboundary(eps: &CyclicCocycle) -> Result<bool> {
    if eps.degree() == 0 {
        return Ok(eps.cochain().values().iter().all(|&v| v == 0));
    }
    let m = coboundary_matrix(eps.complex(), eps.degree() - 1)?;
    let snf = smith_normal_form(&m);
    let n = BigInt::from(eps.order());
    let mut y: Vec<BigInt> = eps.cochain().values().iter().map(|&v| BigInt::from(v)).collect();
    snf.apply_u(&mut y);
    // U·ε must lie in D·ℤ + n·ℤ coordinatewise
    for (i, yi) in y.iter().enumerate() {
        let modulus = snf.diagonal().get(i).map_or(n.clone(), |d| d.gcd(&n));
        if !yi.mod_floor(&modulus).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Generators of the ℤₙ-valued `degree`-cocycles, as integer lifts.
///
/// With `δ = U⁻¹·D·V⁻¹`, `δx ≡ 0 (mod n)` iff `y = V⁻¹x` has `dᵢyᵢ ≡ 0`, so
/// the generators are `V·(mᵢeᵢ)` with `mᵢ = n / gcd(dᵢ, n)` below the rank
/// and `V·eᵢ` above it.
pub fn cyclic_cocycle_generators(complex: &Arc<SimplicialComplex>, degree: usize, n: u64) -> Result<Vec<Cochain<Integers>>> {
    let count = complex.count(degree);
    let top = complex.dimension().is_some_and(|d| degree < d);
    let snf = if top && count > 0 { Some(smith_normal_form(&coboundary_matrix(complex, degree)?)) } else { None };
    let big_n = BigInt::from(n);
    let mut gens = Vec::new();
    for i in 0..count {
        let mut e = vec![BigInt::zero(); count];
        match &snf {
            Some(snf) => {
                let m = snf.diagonal().get(i).map_or(BigInt::from(1), |d| &big_n / d.gcd(&big_n));
                if m == big_n {
                    continue;
                }
                e[i] = m;
                snf.apply_v(&mut e);
            }
            None => e[i] = BigInt::from(1),
        }
        let values = e
            .iter()
            .map(|v| v.mod_floor(&big_n).to_i64().expect("reduced mod n"))
            .collect();
        gens.push(Cochain::new(complex.clone(), degree, Integers, values)?);
    }
    Ok(gens)
}

/// `n` times the class, which must vanish for Bockstein images.
pub fn is_n_torsion(class: &DixmierDouadyClass, n: u64) -> bool {
    class.coords.scale(n.to_i64().unwrap_or(i64::MAX)).is_zero()
}
