//! Gauss–Legendre rules on segments and collapsed (Duffy) product rules on
//! triangles and tetrahedra.

use crate::scalar::Real;

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1, "a quadrature rule needs at least one point");
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Newton iteration on P_n from the Chebyshev-like initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push(((1.0 - x) / 2.0, w / 2.0));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Sample points in barycentric coordinates with positive weights summing
/// to the measure of the reference simplex (1, 1/2 and 1/6).
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule<T: Real> {
    pub order: usize,
    pub segment: Vec<([T; 2], T)>,
    pub triangle: Vec<([T; 3], T)>,
    pub tetrahedron: Vec<([T; 4], T)>,
}

/// Default number of points per direction.
pub const DEFAULT_ORDER: usize = 4;

impl<T: Real> QuadratureRule<T> {
    pub fn new(order: usize) -> Self {
        let gl = gauss_legendre(order);
        let segment = gl.iter().map(|&(x, w)| ([T::of(1.0 - x), T::of(x)], T::of(w))).collect();
        let mut triangle = Vec::new();
        let mut tetrahedron = Vec::new();
        for &(x, wx) in &gl {
            for &(y, wy) in &gl {
                let (u, v) = (x, (1.0 - x) * y);
                triangle.push(([T::of(1.0 - u - v), T::of(u), T::of(v)], T::of(wx * wy * (1.0 - x))));
                for &(z, wz) in &gl {
                    let w = (1.0 - x) * (1.0 - y) * z;
                    let weight = wx * wy * wz * (1.0 - x) * (1.0 - x) * (1.0 - y);
                    tetrahedron.push(([T::of(1.0 - u - v - w), T::of(u), T::of(v), T::of(w)], T::of(weight)));
                }
            }
        }
        Self { order, segment, triangle, tetrahedron }
    }
}

impl<T: Real> Default for QuadratureRule<T> {
    fn default() -> Self {
        Self::new(DEFAULT_ORDER)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// ∫ over the reference simplex of x^a y^b z^c = a! b! c! / (a+b+c+d)!.
    fn monomial_exact(exps: &[u32]) -> f64 {
        let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
        let num: f64 = exps.iter().map(|&e| fact(e)).product();
        num / fact(exps.iter().sum::<u32>() + exps.len() as u32)
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in 1..8 {
            let rule = gauss_legendre(n);
            for deg in 0..2 * n as i32 {
                let q: f64 = rule.iter().map(|(x, w)| w * x.powi(deg)).sum();
                assert!((q - 1.0 / (deg as f64 + 1.0)).abs() < 1e-14, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn simplex_rules_have_positive_weights_and_correct_measure() {
        for order in 2..6 {
            let r = QuadratureRule::<f64>::new(order);
            assert!(r.triangle.iter().all(|p| p.1 > 0.0) && r.tetrahedron.iter().all(|p| p.1 > 0.0));
            let tri: f64 = r.triangle.iter().map(|p| p.1).sum();
            let tet: f64 = r.tetrahedron.iter().map(|p| p.1).sum();
            let seg: f64 = r.segment.iter().map(|p| p.1).sum();
            assert!((seg - 1.0).abs() < 1e-13 && (tri - 0.5).abs() < 1e-13 && (tet - 1.0 / 6.0).abs() < 1e-13, "{order} {seg} {tri} {tet}");
            for b in r.triangle.iter().map(|p| p.0) {
                assert!((b.iter().sum::<f64>() - 1.0).abs() < 1e-14 && b.iter().all(|&x| x >= 0.0));
            }
        }
    }

    #[test]
    fn simplex_rules_integrate_monomials() {
        let r = QuadratureRule::<f64>::new(4);
        for (a, b) in [(0, 0), (1, 0), (2, 3), (4, 2)] {
            let q: f64 = r.triangle.iter().map(|(p, w)| w * p[1].powi(a) * p[2].powi(b)).sum();
            assert!((q - monomial_exact(&[a as u32, b as u32])).abs() < 1e-13);
        }
        for (a, b, c) in [(0, 0, 0), (1, 2, 0), (1, 1, 1), (0, 2, 2)] {
            let q: f64 = r.tetrahedron.iter().map(|(p, w)| w * p[1].powi(a) * p[2].powi(b) * p[3].powi(c)).sum();
            assert!((q - monomial_exact(&[a as u32, b as u32, c as u32])).abs() < 1e-13);
        }
    }

    #[test]
    fn f32_rules() {
        let r = QuadratureRule::<f32>::new(3);
        let tet: f32 = r.tetrahedron.iter().map(|p| p.1).sum();
        assert!((tet - 1.0 / 6.0).abs() < 1e-6);
    }
}
