//! Refinement and independent-quadrature oracles for the geometric data.

use gerbe_kit::connective::{check_connective, surface_holonomy, three_curvature};
use gerbe_kit::geometry::discretize::{discretize, monopole_flux, total_three_curvature, DescentMode};
use gerbe_kit::geometry::fields::{basic_gerbe_s3, monopole_data, BasicGerbeS3};
use gerbe_kit::geometry::mesh::EmbeddedTriangulation;
use gerbe_kit::geometry::quadrature::QuadratureRule;

#[test]
fn independent_descent_residual_decreases_with_level() {
    let rule = QuadratureRule::<f64>::default();
    let data = BasicGerbeS3::<f64>::new(1);
    let residuals: Vec<(f64, f64)> = (2..=4)
        .map(|level| {
            let d = discretize(&data, &EmbeddedTriangulation::s3(level), &rule, DescentMode::Independent).unwrap();
            let r = check_connective(&d.connective, 0.0);
            (r.max_connection_residual, r.max_curving_residual)
        })
        .collect();
    println!("{residuals:?}");
    for w in residuals.windows(2) {
        assert!(w[1].0 < w[0].0 && w[1].1 < w[0].1, "{residuals:?}");
    }
}

#[test]
fn monopole_flux_matches_refinement() {
    let rule = QuadratureRule::<f64>::new(4);
    for k in [1, -2] {
        let coarse = monopole_flux(&monopole_data(k), &EmbeddedTriangulation::s2(2), &rule).unwrap();
        let fine = monopole_flux(&monopole_data(k), &EmbeddedTriangulation::s2(4), &rule).unwrap();
        assert!((coarse - fine).abs() < 1e-6 && (fine - k as f64).abs() < 1e-6, "{coarse} {fine}");
    }
    assert_eq!(monopole_flux(&monopole_data::<f64>(0), &EmbeddedTriangulation::s2(1), &rule).unwrap(), 0.0);
}

#[test]
fn level_three_total_curvature() {
    let rule = QuadratureRule::<f64>::default();
    let mesh = EmbeddedTriangulation::s3(4);
    let total = total_three_curvature(&basic_gerbe_s3(3), &mesh, &rule).unwrap();
    assert!((total - 3.0).abs() < 3e-2, "{total}");
    // the discrete total over a closed manifold is exactly the level
    let d = discretize(&basic_gerbe_s3::<f64>(3), &EmbeddedTriangulation::s3(2), &rule, DescentMode::Enforced).unwrap();
    let discrete: f64 = three_curvature(&d.connective, &d.whole().unwrap()).unwrap().iter().sum();
    assert!((discrete - 3.0).abs() < 1e-9, "{discrete}");
}

#[test]
fn equator_holonomy_matches_direct_flux() {
    // on w = 0 every chart's curving is ∓F/2, so the holonomy is exp(2πi·(−½∫F))
    let rule = QuadratureRule::<f64>::default();
    let flux = monopole_flux(&monopole_data(1), &EmbeddedTriangulation::s2(3), &rule).unwrap();
    let expected = gerbe_kit::scalar::circle_from_turns(-0.5 * flux);
    let d = discretize(&basic_gerbe_s3::<f64>(1), &EmbeddedTriangulation::s3(3), &rule, DescentMode::Enforced).unwrap();
    let hol = surface_holonomy(&d.connective, &d.equator().unwrap()).unwrap().value;
    assert!((hol - expected).norm() < 1e-2, "{hol} vs {expected}");
}

#[test]
fn chart_choice_does_not_change_three_curvature() {
    let rule = QuadratureRule::<f64>::default();
    let d = discretize(&basic_gerbe_s3::<f64>(2), &EmbeddedTriangulation::s3(2), &rule, DescentMode::Enforced).unwrap();
    let spread = gerbe_kit::connective::three_curvature_chart_spread(&d.connective, &d.whole().unwrap()).unwrap();
    assert!(spread < 1e-12, "{spread}");
}

#[test]
fn wzw_is_stable_under_refinement() {
    use gerbe_kit::geometry::wzw::{wzw_holonomy, SU2Map};
    let rule = QuadratureRule::<f64>::default();
    let tilt = |p: [f64; 4]| [p[0] + 0.2 * p[2], p[1], p[2] - 0.1 * p[0], 0.3 * p[0] * p[1] + 0.2];
    let values: Vec<_> = (3..=5)
        .map(|level| {
            let s2 = EmbeddedTriangulation::s2(level);
            wzw_holonomy(&SU2Map::from_fn(s2, tilt).unwrap(), 1, &rule).unwrap()
        })
        .collect();
    // the piecewise-geodesic interpolant converges quadratically in the mesh size
    let (d1, d2) = ((values[0] - values[1]).norm(), (values[1] - values[2]).norm());
    assert!(d2 < 1e-2 && d1 / d2 > 3.0, "{values:?}");
}

#[test]
fn nerve_class_matches_curvature_integral() {
    let rule = QuadratureRule::<f64>::default();
    let mesh = EmbeddedTriangulation::s3(3);
    let data = basic_gerbe_s3::<f64>(-1);
    let class = gerbe_kit::gerbe_cocycle::dd_class(&gerbe_kit::geometry::discretize::s3_gerbe(&data, &mesh).unwrap()).unwrap();
    let total = total_three_curvature(&data, &mesh, &rule).unwrap();
    assert_eq!(class.coords.free, vec![total.round() as i64]);
}

#[test]
fn single_precision_discretization() {
    let rule = QuadratureRule::<f32>::default();
    let total = total_three_curvature(&basic_gerbe_s3::<f32>(1), &EmbeddedTriangulation::s3(3), &rule).unwrap();
    assert!((total - 1.0).abs() < 1e-2, "{total}");
    let d = discretize(&basic_gerbe_s3::<f32>(1), &EmbeddedTriangulation::s3(2), &rule, DescentMode::Enforced).unwrap();
    assert!(check_connective(&d.connective, 1e-4).is_valid());
}
