mod common;

use std::sync::{Arc, OnceLock};

use gerbe_kit::chain_complex::{cohomology_group, Cochain, Integers, SimplicialComplex};
use gerbe_kit::connective::{surface_holonomy, ChartMap, ChartedSurface, ConnectiveStructure, Witnesses};
use gerbe_kit::gerbe_cocycle::{
    bockstein, cyclic_cocycle_generators, integer_obstruction, is_n_torsion, max_circle_distance, trivialize, CyclicCocycle,
    DdComputer, Trivialization,
};
use num_complex::Complex;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mixed() -> &'static DdComputer {
    static C: OnceLock<DdComputer> = OnceLock::new();
    C.get_or_init(|| DdComputer::new(common::mixed_complex()).unwrap())
}

fn sphere() -> &'static DdComputer {
    static C: OnceLock<DdComputer> = OnceLock::new();
    C.get_or_init(|| DdComputer::new(common::boundary_4_simplex()).unwrap())
}

fn permutation_sign(p: &[usize]) -> i64 {
    let mut sign = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                sign = -sign;
            }
        }
    }
    sign
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dd_recovers_prescribed_class_and_is_additive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dd = mixed();
        let (a, free_a, torsion_a) = common::random_gerbe(dd.cohomology(), &mut rng);
        let (b, _, _) = common::random_gerbe(dd.cohomology(), &mut rng);
        let ca = dd.class(&a).unwrap();
        let cb = dd.class(&b).unwrap();
        prop_assert_eq!(&ca.coords.free, &free_a);
        prop_assert_eq!(ca.coords.torsion.iter().map(|t| t.residue).collect::<Vec<_>>(), torsion_a);
        prop_assert_eq!(dd.class(&a.product(&b).unwrap()).unwrap().coords, &ca.coords + &cb.coords);
        prop_assert_eq!(dd.class(&a.dual()).unwrap().coords, ca.coords.scale(-1));
    }

    #[test]
    fn dd_is_natural_under_vertex_maps(seed in any::<u64>(), map in prop::collection::vec(0usize..5, 5)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dd = sphere();
        let complex = dd.cohomology().complex().clone();
        let (g, free, _) = common::random_gerbe(dd.cohomology(), &mut rng);
        let pulled = g.pullback(complex.clone(), &map).unwrap();
        let mut sorted = map.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let degree = if sorted.len() == 5 { permutation_sign(&map) } else { 0 };
        prop_assert_eq!(&dd.class(&pulled).unwrap().coords.free, &vec![degree * free[0]]);
        // cochain level: the obstruction of the pullback is cohomologous to the pulled obstruction
        let z = integer_obstruction(&g, None).unwrap().pullback(complex, &map).unwrap();
        prop_assert_eq!(dd.class_of_cocycle(z).unwrap().coords, dd.class(&pulled).unwrap().coords);
    }

    #[test]
    fn coboundaries_trivialize(seed in any::<u64>(), on_sphere in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let complex = if on_sphere { common::boundary_4_simplex() } else { common::mixed_complex() };
        let g = common::random_coboundary(&complex, &mut rng);
        match trivialize(&g).unwrap() {
            Trivialization::Trivial { h, residual } => {
                prop_assert!(residual <= 1e-9);
                prop_assert!(max_circle_distance(h.coboundary().g(), g.g()).unwrap() <= 1e-9);
            }
            Trivialization::Nontrivial(c) => prop_assert!(false, "coboundary reported as {:?}", c.coords),
        }
    }

    #[test]
    fn euler_characteristic_matches_betti_numbers(facets in prop::collection::vec(prop::collection::btree_set(0usize..7, 1..5), 1..9)) {
        let facets: Vec<Vec<usize>> = facets.into_iter().map(|f| f.into_iter().collect()).collect();
        let complex = Arc::new(SimplicialComplex::from_facets(&facets).unwrap());
        let top = complex.dimension().unwrap();
        let betti: i64 = (0..=top)
            .map(|d| {
                let rank = cohomology_group(&complex, d).unwrap().free_rank as i64;
                if d % 2 == 0 { rank } else { -rank }
            })
            .sum();
        prop_assert_eq!(betti, complex.euler_characteristic());
    }

    #[test]
    fn bockstein_images_are_n_torsion(seed in any::<u64>(), n in 2u64..7, suspended in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (complex, degree) = if suspended { (common::suspended_rp2(), 2) } else { (common::rp2(), 1) };
        let random_eps = |rng: &mut ChaCha8Rng| {
            let gens = cyclic_cocycle_generators(&complex, degree, n).unwrap();
            let b = Cochain::new(
                complex.clone(),
                degree - 1,
                Integers,
                (0..complex.count(degree - 1)).map(|_| rng.gen_range(-5..=5)).collect(),
            )
            .unwrap()
            .coboundary();
            let mut values: Vec<i64> = b.values().to_vec();
            for g in &gens {
                let c: i64 = rng.gen_range(0..n as i64);
                for (v, x) in values.iter_mut().zip(g.values()) {
                    *v += c * x;
                }
            }
            CyclicCocycle::from_values(complex.clone(), degree, n, values.iter().map(|v| v.rem_euclid(n as i64) as u64).collect()).unwrap()
        };
        let a = random_eps(&mut rng);
        let b = random_eps(&mut rng);
        let ba = bockstein(&a).unwrap();
        let bb = bockstein(&b).unwrap();
        prop_assert!(is_n_torsion(&ba, n));
        prop_assert_eq!(bockstein(&a.add(&b).unwrap()).unwrap().coords, &ba.coords + &bb.coords);
    }
}

/// The octahedron with outward orientation: vertex `2i` is `+eᵢ`, `2i+1` is `−eᵢ`.
fn octahedron() -> Vec<[usize; 3]> {
    let mut faces = Vec::new();
    for x in [0, 1] {
        for y in [2, 3] {
            for z in [4, 5] {
                let odd = (x % 2 + y % 2 + z % 2) % 2 == 1;
                faces.push(if odd { [y, x, z] } else { [x, y, z] });
            }
        }
    }
    faces
}

fn closure(faces: &[[usize; 3]]) -> Vec<Vec<usize>> {
    let mut keys = std::collections::BTreeSet::new();
    for f in faces {
        let mut s = f.to_vec();
        s.sort_unstable();
        for mask in 1u8..8 {
            keys.insert((0..3).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect::<Vec<_>>());
        }
    }
    keys.into_iter().collect()
}

/// Descent data built from a global curving `B`, chart connections `aα`
/// and vertex functions `ψαβ`: `A_{αβ} = a_β − a_α + dψ_{αβ}`,
/// `f_α = B + ∮a_α`, `g = exp 2πi δψ`. Its holonomy is `exp 2πi ΣB`.
fn synthetic(rng: &mut ChaCha8Rng, faces: &[[usize; 3]], charts: usize) -> (ConnectiveStructure<f64>, f64) {
    let vertices = 6;
    let mut a = std::collections::BTreeMap::new();
    for key in closure(faces).into_iter().filter(|k| k.len() == 2) {
        for c in 0..charts {
            a.insert((c, key[0], key[1]), rng.gen_range(-1.0..1.0));
        }
    }
    let a_of = |c: usize, t: usize, h: usize| if t < h { a[&(c, t, h)] } else { -a[&(c, h, t)] };
    let psi: Vec<Vec<Vec<f64>>> = (0..charts)
        .map(|_| (0..charts).map(|_| (0..vertices).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect())
        .collect();
    let psi_of = |al: usize, be: usize, v: usize| if al < be { psi[al][be][v] } else { -psi[be][al][v] };
    let mut cs = ConnectiveStructure::new();
    for key in closure(faces).into_iter().filter(|k| k.len() == 2) {
        let (t, h) = (key[0], key[1]);
        for al in 0..charts {
            for be in al + 1..charts {
                let value = a_of(be, t, h) - a_of(al, t, h) + psi_of(al, be, h) - psi_of(al, be, t);
                cs.set_a(al, be, [t, h], value).unwrap();
            }
        }
    }
    let mut total_b = 0.0;
    for f in faces {
        let b: f64 = rng.gen_range(-1.0..1.0);
        total_b += b;
        for c in 0..charts {
            let loop_sum = a_of(c, f[1], f[2]) + a_of(c, f[2], f[0]) + a_of(c, f[0], f[1]);
            cs.set_f(c, *f, b + loop_sum).unwrap();
        }
    }
    for al in 0..charts {
        for be in al + 1..charts {
            for ga in be + 1..charts {
                for v in 0..vertices {
                    let turns = psi_of(be, ga, v) - psi_of(al, ga, v) + psi_of(al, be, v);
                    let phase = std::f64::consts::TAU * turns;
                    cs.set_g([al, be, ga], v, Complex::new(phase.cos(), phase.sin())).unwrap();
                }
            }
        }
    }
    (cs, total_b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn holonomy_is_independent_of_charts(seed in any::<u64>(), choices in prop::collection::vec(0usize..3, 26)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let faces = octahedron();
        let keys = closure(&faces);
        prop_assert_eq!(keys.len(), 26);
        let (cs, total_b) = synthetic(&mut rng, &faces, 3);
        let witnesses: Witnesses = keys.iter().map(|k| (k.clone(), vec![0, 1, 2])).collect();
        let zero: ChartMap = keys.iter().map(|k| (k.clone(), 0)).collect();
        let chi: ChartMap = keys.iter().cloned().zip(choices).collect();
        let base = ChartedSurface::new(faces.clone(), zero, witnesses).unwrap();
        let moved = base.rechart(chi).unwrap();
        let expected = Complex::new((std::f64::consts::TAU * total_b).cos(), (std::f64::consts::TAU * total_b).sin());
        for s in [&base, &moved] {
            let h = surface_holonomy(&cs, s).unwrap().value;
            prop_assert!((h - expected).norm() < 1e-9, "{h} vs {expected}");
        }
        // orientation reversal conjugates
        let r = surface_holonomy(&cs, &moved.reversed()).unwrap().value;
        prop_assert!((r - expected.conj()).norm() < 1e-9);
    }
}
