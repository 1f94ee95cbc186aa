//! Dixmier–Douady classes of local gerbes.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chain_complex::{ClassCoords, Cochain, CohomologyComputer, CohomologyGroup, Integers, SimplicialComplex};
use crate::error::{Error, Result};
use crate::scalar::{turns_of, Real};

use super::gerbe::LocalGerbe;

/// Distance from the integers beyond which `δa` is rejected.
pub fn integrality_tol<T: Real>() -> f64 {
    1e-6f64.max(1e3 * T::epsilon().to_f64_lossy())
}

/// A class in `H³(K; ℤ)` with a representing cocycle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DixmierDouadyClass {
    pub group: CohomologyGroup,
    pub coords: ClassCoords,
    #[serde(skip)]
    pub representative: Option<Cochain<Integers>>,
}

impl DixmierDouadyClass {
    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }
}

/// `c = δa` for the principal real lift `a` of `g` (plus the recorded
/// variation), rounded to integers. `offsets` shifts the lift by integers.
pub fn integer_obstruction<T: Real>(gerbe: &LocalGerbe<T>, offsets: Option<&[i64]>) -> Result<Cochain<Integers>> {
    let complex = gerbe.complex();
    if let Some(o) = offsets {
        if o.len() != complex.count(2) {
            return Err(Error::ContractViolation("one lift offset per triangle required".into()));
        }
    }
    let lift: Vec<f64> = gerbe
        .g()
        .values()
        .iter()
        .enumerate()
        .map(|(i, z)| turns_of(*z).to_f64_lossy() + offsets.map_or(0.0, |o| o[i] as f64))
        .collect();
    let tol = integrality_tol::<T>();
    let faces = if complex.count(3) > 0 { complex.face_indices(2) } else { Vec::new() };
    let mut values = Vec::with_capacity(faces.len());
    for (t, fs) in faces.iter().enumerate() {
        let mut c = 0.0;
        for (i, &f) in fs.iter().enumerate() {
            let a = lift[f] + gerbe.increment(t, i).to_f64_lossy();
            c += if i % 2 == 0 { a } else { -a };
        }
        let rounded = c.round();
        if (c - rounded).abs() > tol || !c.is_finite() {
            return Err(Error::Inconsistent(format!(
                "lifted coboundary {c} on {:?} is not integral; the gerbe is not a cocycle",
                complex.simplices(3)[t]
            )));
        }
        values.push(rounded as i64);
    }
    Cochain::new(complex.clone(), 3, Integers, values)
}

/// Reuses the Smith forms of one complex for many classes.
#[derive(Clone, Debug)]
pub struct DdComputer {
    cohomology: CohomologyComputer,
}

impl DdComputer {
    pub fn new(complex: Arc<SimplicialComplex>) -> Result<Self> {
        Ok(Self { cohomology: CohomologyComputer::new(complex, 3)? })
    }

    pub fn group(&self) -> &CohomologyGroup {
        self.cohomology.group()
    }

    pub fn cohomology(&self) -> &CohomologyComputer {
        &self.cohomology
    }

    pub fn class_of_cocycle(&self, z: Cochain<Integers>) -> Result<DixmierDouadyClass> {
        let coords = self.cohomology.class_of(&z)?;
        Ok(DixmierDouadyClass { group: self.group().clone(), coords, representative: Some(z) })
    }

    pub fn class<T: Real>(&self, gerbe: &LocalGerbe<T>) -> Result<DixmierDouadyClass> {
        self.class_with_offsets(gerbe, None)
    }

    pub fn class_with_offsets<T: Real>(
        &self,
        gerbe: &LocalGerbe<T>,
        offsets: Option<&[i64]>,
    ) -> Result<DixmierDouadyClass> {
        if **gerbe.complex() != **self.cohomology.complex() {
            return Err(Error::ContractViolation("gerbe lives on another complex".into()));
        }
        self.class_of_cocycle(integer_obstruction(gerbe, offsets)?)
    }
}

pub fn dd_class<T: Real>(gerbe: &LocalGerbe<T>) -> Result<DixmierDouadyClass> {
    DdComputer::new(gerbe.complex().clone())?.class(gerbe)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gerbe_cocycle::gerbe::LineCocycle;
    use crate::scalar::circle_from_turns;
    use crate::chain_complex::Circle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_and_exact_gerbes_have_zero_class() {
        let k = Arc::new(SimplicialComplex::simplex_boundary(4));
        let dd = DdComputer::new(k.clone()).unwrap();
        assert_eq!(dd.group().free_rank, 1);
        assert!(dd.class(&LocalGerbe::<f64>::trivial(k.clone())).unwrap().is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let turns: Vec<f64> = (0..10).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let g = LineCocycle::from_turns(k.clone(), &turns).unwrap().coboundary();
            let offsets: Vec<i64> = (0..10).map(|_| rng.gen_range(-5..5)).collect();
            assert!(dd.class(&g).unwrap().is_zero());
            assert!(dd.class_with_offsets(&g, Some(&offsets)).unwrap().is_zero());
        }
    }

    #[test]
    fn twisting_by_a_generator_gives_unit_class() {
        let k = Arc::new(SimplicialComplex::simplex_boundary(4));
        let dd = DdComputer::new(k.clone()).unwrap();
        for t in 0..5 {
            let mut v = vec![0; 5];
            v[t] = 1;
            let z = Cochain::new(k.clone(), 3, Integers, v).unwrap();
            let g = LocalGerbe::<f64>::trivial(k.clone()).twisted(&z).unwrap();
            assert_eq!(dd.class(&g).unwrap().coords.free[0].abs(), 1);
        }
    }

    #[test]
    fn non_integral_data_is_rejected() {
        let k = Arc::new(SimplicialComplex::simplex_boundary(4));
        let mut values = vec![circle_from_turns(0.0f64); 10];
        values[0] = circle_from_turns(0.25);
        let g = LocalGerbe::new(Cochain::new(k, 2, Circle::default(), values).unwrap()).unwrap();
        assert!(matches!(dd_class(&g), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn low_dimensional_complexes_have_trivial_h3() {
        let k = Arc::new(SimplicialComplex::simplex_boundary(3));
        let c = dd_class(&LocalGerbe::<f32>::trivial(k)).unwrap();
        assert!(c.group.is_trivial() && c.is_zero());
    }
}
