#![allow(dead_code)]

use std::sync::Arc;

use gerbe_kit::chain_complex::{Cochain, CohomologyComputer, Integers, SimplicialComplex};
use gerbe_kit::gerbe_cocycle::{LineCocycle, LocalGerbe};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn arc(facets: &[Vec<usize>]) -> Arc<SimplicialComplex> {
    Arc::new(SimplicialComplex::from_facets(facets).unwrap())
}

/// ∂Δ⁴, a 3-sphere with five tetrahedra.
pub fn boundary_4_simplex() -> Arc<SimplicialComplex> {
    Arc::new(SimplicialComplex::simplex_boundary(4))
}

pub const RP2: [[usize; 3]; 10] = [
    [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 1, 5],
    [1, 2, 4], [2, 3, 5], [1, 3, 4], [1, 3, 5], [2, 4, 5],
];

pub fn rp2() -> Arc<SimplicialComplex> {
    arc(&RP2.iter().map(|t| t.to_vec()).collect::<Vec<_>>())
}

/// Suspension of ℝP² with apexes 6 and 7: H² = 0, H³ = ℤ/2.
pub fn suspended_rp2() -> Arc<SimplicialComplex> {
    let mut facets = Vec::new();
    for t in RP2 {
        for apex in [6, 7] {
            facets.push(vec![t[0], t[1], t[2], apex]);
        }
    }
    arc(&facets)
}

/// ∂Δ⁴ ⊔ (suspended ℝP² shifted by 5): H³ = ℤ ⊕ ℤ/2.
pub fn mixed_complex() -> Arc<SimplicialComplex> {
    let mut facets: Vec<Vec<usize>> = (0..5).map(|skip| (0..5).filter(|&v| v != skip).collect()).collect();
    for t in RP2 {
        for apex in [6, 7] {
            facets.push(vec![t[0] + 5, t[1] + 5, t[2] + 5, apex + 5]);
        }
    }
    arc(&facets)
}

pub fn random_turns(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// `δh` for random `h`.
pub fn random_coboundary(complex: &Arc<SimplicialComplex>, rng: &mut ChaCha8Rng) -> LocalGerbe<f64> {
    let h = LineCocycle::from_turns(complex.clone(), &random_turns(rng, complex.count(1))).unwrap();
    h.coboundary()
}

/// A random integer 3-cocycle: random multiples of the generator
/// representatives plus the coboundary of a random integer 2-cochain.
pub fn random_integer_cocycle(
    computer: &CohomologyComputer,
    rng: &mut ChaCha8Rng,
) -> (Cochain<Integers>, Vec<i64>, Vec<u64>) {
    let complex = computer.complex().clone();
    let group = computer.group().clone();
    let free: Vec<i64> = (0..group.free_rank).map(|_| rng.gen_range(-3..=3)).collect();
    let torsion: Vec<u64> = group.torsion.iter().map(|&t| rng.gen_range(0..t)).collect();
    let coords = gerbe_kit::chain_complex::ClassCoords {
        free: free.clone(),
        torsion: group
            .torsion
            .iter()
            .zip(&torsion)
            .map(|(&order, &residue)| gerbe_kit::chain_complex::TorsionCoordinate { order, residue })
            .collect(),
    };
    let rep = computer.representative(&coords).unwrap();
    let b = Cochain::new(
        complex.clone(),
        2,
        Integers,
        (0..complex.count(2)).map(|_| rng.gen_range(-2..=2)).collect(),
    )
    .unwrap();
    (rep.combine(&b.coboundary()).unwrap(), free, torsion)
}

/// A gerbe with prescribed class: a random coboundary twisted by a random
/// integer cocycle.
pub fn random_gerbe(computer: &CohomologyComputer, rng: &mut ChaCha8Rng) -> (LocalGerbe<f64>, Vec<i64>, Vec<u64>) {
    let (z, free, torsion) = random_integer_cocycle(computer, rng);
    let g = random_coboundary(computer.complex(), rng).twisted(&z).unwrap();
    (g, free, torsion)
}
