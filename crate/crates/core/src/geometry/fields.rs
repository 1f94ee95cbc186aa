//! Closed-form data: the winding-k monopole on S² and the basic gerbe on S³.
//!
//! Points of S³ are `(x₁, x₂, x₃, w)`; a unit quaternion `w + x₁i + x₂j + x₃k`
//! is the same point. All forms are in turns (divided by 2πi).

use num_traits::Float;

use crate::scalar::Real;

pub type P4<T> = [T; 4];

pub fn dot<T: Real>(a: &P4<T>, b: &P4<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

pub fn cross3<T: Real>(a: &P4<T>, b: &P4<T>) -> [T; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// The winding-k line bundle on S² with the north/south gauges
/// `V_N = {z > −μ}`, `V_S = {z < μ}`:
/// `a_N = (k/4π)(x dy − y dx)/(1 + z)`, `a_S = a_N − d(kφ/2π)`,
/// `F = (k/4π)·area`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonopoleData<T: Real> {
    pub k: i64,
    pub mu: T,
}

/// Gauge labels.
pub const NORTH: usize = 0;
pub const SOUTH: usize = 1;

impl<T: Real> MonopoleData<T> {
    pub fn new(k: i64) -> Self {
        Self { k, mu: T::of(0.5) }
    }

    fn coupling(&self) -> T {
        T::of(self.k as f64) / (T::of(4.0) * T::PI())
    }

    pub fn in_gauge(&self, gauge: usize, r: &[T; 3]) -> bool {
        if gauge == NORTH { r[2] > -self.mu } else { r[2] < self.mu }
    }

    /// `a_gauge` at the unit vector `r`, applied to `v` (only the part
    /// tangent to S² matters).
    pub fn potential(&self, gauge: usize, r: &[T; 3], v: &[T; 3]) -> T {
        let rot = r[0] * v[1] - r[1] * v[0];
        if gauge == NORTH {
            self.coupling() * rot / (T::one() + r[2])
        } else {
            -self.coupling() * rot / (T::one() - r[2])
        }
    }

    /// `F(a, b)` at `r`.
    pub fn curvature(&self, r: &[T; 3], a: &[T; 3], b: &[T; 3]) -> T {
        let c = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
        self.coupling() * (r[0] * c[0] + r[1] * c[1] + r[2] * c[2])
    }

    /// `Lτ_S = −kφ/2π`, the logarithm (in turns) of the transition from the
    /// north to the south section; `Lτ_N = 0`.
    pub fn gauge_log(&self, gauge: usize, r: &[T; 3]) -> T {
        if gauge == NORTH {
            T::zero()
        } else {
            -T::of(self.k as f64) * Float::atan2(r[1], r[0]) / T::TAU()
        }
    }

    /// Continuous change of `Lτ_S` from `r0` to a nearby `r1`.
    pub fn gauge_log_change(&self, r0: &[T; 3], r1: &[T; 3]) -> T {
        let d = Float::atan2(r1[1], r1[0]) - Float::atan2(r0[1], r0[0]);
        let wrapped = d - T::TAU() * Float::round(d / T::TAU());
        -T::of(self.k as f64) * wrapped / T::TAU()
    }
}

/// The winding-k monopole with the default gauge overlap.
pub fn monopole_data<T: Real>(k: i64) -> MonopoleData<T> {
    MonopoleData::new(k)
}

/// The level-k basic gerbe with the default caps and band.
pub fn basic_gerbe_s3<T: Real>(k: i64) -> BasicGerbeS3<T> {
    BasicGerbeS3::new(k)
}

/// Chart labels for the refined cover of S³: cap `i ∈ {0, 1}` times gauge
/// `X ∈ {N, S}`, numbered `2i + X`.
pub const CHARTS: usize = 4;

pub fn cap(chart: usize) -> usize {
    chart / 2
}

pub fn gauge(chart: usize) -> usize {
    chart % 2
}

/// The level-k basic gerbe on S³: caps `U₀ = {w > −λ}`, `U₁ = {w < λ}`,
/// overlap retraction `r(p) = x/|x|`, partition of unity `ψ₀` a smoothstep
/// in `w` over `|w| < b`, curvings `f₀ = −ψ₁ r*F`, `f₁ = ψ₀ r*F` and
/// three-curvature `ω = ψ₀'(w) dw ∧ r*F`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BasicGerbeS3<T: Real> {
    pub monopole: MonopoleData<T>,
    pub lambda: T,
    pub band: T,
}

impl<T: Real> BasicGerbeS3<T> {
    pub fn new(k: i64) -> Self {
        Self { monopole: MonopoleData::new(k), lambda: T::of(0.5), band: T::of(0.25) }
    }

    pub fn k(&self) -> i64 {
        self.monopole.k
    }

    pub fn psi0(&self, w: T) -> T {
        let t = Float::min(Float::max((w + self.band) / (self.band + self.band), T::zero()), T::one());
        t * t * (T::of(3.0) - t - t)
    }

    pub fn psi1(&self, w: T) -> T {
        T::one() - self.psi0(w)
    }

    pub fn dpsi0(&self, w: T) -> T {
        let t = (w + self.band) / (self.band + self.band);
        if t <= T::zero() || t >= T::one() {
            T::zero()
        } else {
            T::of(6.0) * t * (T::one() - t) / (self.band + self.band)
        }
    }

    /// `r(p) = x/|x|` and `|x|`.
    pub fn retract(p: &P4<T>) -> ([T; 3], T) {
        let n = Float::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
        ([p[0] / n, p[1] / n, p[2] / n], n)
    }

    pub fn in_cap(&self, cap: usize, p: &P4<T>) -> bool {
        if cap == 0 { p[3] > -self.lambda } else { p[3] < self.lambda }
    }

    /// Whether `p` lies in chart `(cap, gauge)`; the gauge constraint only
    /// applies where both caps meet.
    pub fn admissible(&self, chart: usize, p: &P4<T>) -> bool {
        if !self.in_cap(cap(chart), p) {
            return false;
        }
        if Float::abs(p[3]) >= self.lambda {
            return true;
        }
        let (r, _) = Self::retract(p);
        self.monopole.in_gauge(gauge(chart), &r)
    }

    /// Centre used for the greedy chart choice.
    pub fn chart_centre(chart: usize) -> P4<T> {
        let s = T::of(std::f64::consts::FRAC_1_SQRT_2);
        let z = if gauge(chart) == NORTH { s } else { -s };
        let w = if cap(chart) == 0 { s } else { -s };
        [T::zero(), T::zero(), z, w]
    }

    /// `r*F(a, b)` at `p`.
    pub fn pulled_curvature(&self, p: &P4<T>, a: &P4<T>, b: &P4<T>) -> T {
        let (r, n) = Self::retract(p);
        let c = cross3(a, b);
        self.monopole.coupling() * (r[0] * c[0] + r[1] * c[1] + r[2] * c[2]) / (n * n)
    }

    /// `r*a_gauge(v)` at `p`.
    pub fn pulled_potential(&self, gauge: usize, p: &P4<T>, v: &P4<T>) -> T {
        let (r, n) = Self::retract(p);
        self.monopole.potential(gauge, &r, &[v[0] / n, v[1] / n, v[2] / n])
    }

    /// Curving of cap `i` applied to `(a, b)` at `p`.
    pub fn curving(&self, cap: usize, p: &P4<T>, a: &P4<T>, b: &P4<T>) -> T {
        let weight = if cap == 0 { -self.psi1(p[3]) } else { self.psi0(p[3]) };
        if weight == T::zero() {
            return T::zero();
        }
        weight * self.pulled_curvature(p, a, b)
    }

    /// `ω(a, b, c)` at `p`.
    pub fn three_curvature(&self, p: &P4<T>, a: &P4<T>, b: &P4<T>, c: &P4<T>) -> T {
        let d = self.dpsi0(p[3]);
        if d == T::zero() {
            return T::zero();
        }
        d * (a[3] * self.pulled_curvature(p, b, c) - b[3] * self.pulled_curvature(p, a, c)
            + c[3] * self.pulled_curvature(p, a, b))
    }

    /// Integer multiple of `Lτ_S` in `log g_{αβγ}`: with `ε = cap(β) − cap(α)`
    /// and `ℓ(α, β) = ε·Lτ(gauge of the cap-1 member)`,
    /// `log g_{αβγ} = ℓ(α,β) + ℓ(β,γ) − ℓ(α,γ)`.
    pub fn south_coefficient(charts: [usize; 3]) -> i64 {
        let ell = |a: usize, b: usize| -> i64 {
            let eps = cap(b) as i64 - cap(a) as i64;
            let member = if cap(a) == 1 { a } else { b };
            if eps != 0 && gauge(member) == SOUTH { eps } else { 0 }
        };
        let [a, b, c] = charts;
        ell(a, b) + ell(b, c) - ell(a, c)
    }

    /// `(1/2πi) log g_{αβγ}(p)` on the principal branch of `φ`.
    pub fn transition_log(&self, charts: [usize; 3], p: &P4<T>) -> T {
        let c = Self::south_coefficient(charts);
        if c == 0 {
            return T::zero();
        }
        let (r, _) = Self::retract(p);
        T::of(c as f64) * self.monopole.gauge_log(SOUTH, &r)
    }

    /// Continuous change of `(1/2πi) log g_{αβγ}` between nearby points.
    pub fn transition_log_change(&self, charts: [usize; 3], p0: &P4<T>, p1: &P4<T>) -> T {
        let c = Self::south_coefficient(charts);
        if c == 0 {
            return T::zero();
        }
        let (r0, _) = Self::retract(p0);
        let (r1, _) = Self::retract(p1);
        T::of(c as f64) * self.monopole.gauge_log_change(&r0, &r1)
    }

    /// Sign `ε(α, β)` of the transition bundle between two charts.
    pub fn pair_sign(a: usize, b: usize) -> i64 {
        cap(b) as i64 - cap(a) as i64
    }

    /// Gauge in which the pair's connection is written (the cap-1 member's).
    pub fn pair_gauge(a: usize, b: usize) -> usize {
        if cap(a) == 1 { gauge(a) } else { gauge(b) }
    }
}
