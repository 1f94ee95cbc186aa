//! Discrete connective structures `(A, f)` with sampled transition data.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::chain_complex::complex::sort_with_parity;
use crate::error::{Error, Result};
use crate::scalar::{circle_distance, circle_from_turns, Real};

/// Connection and curving integrals in turns (`(1/2πi)∫`), and samples of
/// `g_{αβγ}` at mesh vertices.
///
/// Storage is canonical: chart pairs and edges increasing, faces and chart
/// triples sorted; lookups apply the alternating rules.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ConnectiveStructure<T: Real> {
    a: BTreeMap<(usize, usize, usize, usize), T>,
    f: BTreeMap<(usize, [usize; 3]), T>,
    g: BTreeMap<([usize; 3], usize), Complex<T>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectionViolation {
    pub charts: [usize; 3],
    pub edge: [usize; 2],
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvingViolation {
    pub charts: [usize; 2],
    pub face: [usize; 3],
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectiveReport {
    pub tolerance: f64,
    pub connection_checks: usize,
    pub curving_checks: usize,
    pub max_connection_residual: f64,
    pub max_curving_residual: f64,
    pub connection_violations: Vec<ConnectionViolation>,
    pub curving_violations: Vec<CurvingViolation>,
}

impl ConnectiveReport {
    pub fn is_valid(&self) -> bool {
        self.connection_violations.is_empty() && self.curving_violations.is_empty()
    }
}

fn sorted3(mut s: [usize; 3]) -> Result<([usize; 3], bool)> {
    let odd = sort_with_parity(&mut s).ok_or_else(|| Error::MalformedInput(format!("repeated vertex in {s:?}")))?;
    Ok((s, odd))
}

impl<T: Real> ConnectiveStructure<T> {
    pub fn new() -> Self {
        Self { a: BTreeMap::new(), f: BTreeMap::new(), g: BTreeMap::new() }
    }

    /// Sets `A(α, β, v₀→v₁)`.
    pub fn set_a(&mut self, alpha: usize, beta: usize, edge: [usize; 2], value: T) -> Result<()> {
        if alpha == beta {
            return Err(Error::MalformedInput(format!("A needs two distinct charts, got ({alpha}, {beta})")));
        }
        if edge[0] == edge[1] {
            return Err(Error::MalformedInput(format!("degenerate edge {edge:?}")));
        }
        let flips = (alpha > beta) as u8 + (edge[0] > edge[1]) as u8;
        let v = if flips % 2 == 1 { -value } else { value };
        self.a.insert((alpha.min(beta), alpha.max(beta), edge[0].min(edge[1]), edge[0].max(edge[1])), v);
        Ok(())
    }

    /// `A(α, β, e)`; `A(α, α, e) = 0`.
    pub fn a(&self, alpha: usize, beta: usize, edge: [usize; 2]) -> Option<T> {
        if alpha == beta {
            return Some(T::zero());
        }
        let flips = (alpha > beta) as u8 + (edge[0] > edge[1]) as u8;
        let v = *self.a.get(&(alpha.min(beta), alpha.max(beta), edge[0].min(edge[1]), edge[0].max(edge[1])))?;
        Some(if flips % 2 == 1 { -v } else { v })
    }

    pub fn set_f(&mut self, chart: usize, face: [usize; 3], value: T) -> Result<()> {
        let (s, odd) = sorted3(face)?;
        self.f.insert((chart, s), if odd { -value } else { value });
        Ok(())
    }

    /// `f(α, σ)` for the oriented face `σ`.
    pub fn f(&self, chart: usize, face: [usize; 3]) -> Option<T> {
        let (s, odd) = sorted3(face).ok()?;
        let v = *self.f.get(&(chart, s))?;
        Some(if odd { -v } else { v })
    }

    pub fn set_g(&mut self, charts: [usize; 3], vertex: usize, value: Complex<T>) -> Result<()> {
        let (s, odd) = sorted3(charts)?;
        self.g.insert((s, vertex), if odd { value.conj() } else { value });
        Ok(())
    }

    /// `g_{αβγ}(v)`; repeated charts give 1.
    pub fn g(&self, charts: [usize; 3], vertex: usize) -> Option<Complex<T>> {
        let mut s = charts;
        match sort_with_parity(&mut s) {
            None => Some(Complex::new(T::one(), T::zero())),
            Some(odd) => {
                let v = *self.g.get(&(s, vertex))?;
                Some(if odd { v.conj() } else { v })
            }
        }
    }

    pub fn a_entries(&self) -> impl Iterator<Item = ((usize, usize), [usize; 2], T)> + '_ {
        self.a.iter().map(|(&(p, q, v0, v1), &v)| ((p, q), [v0, v1], v))
    }

    pub fn f_entries(&self) -> impl Iterator<Item = (usize, [usize; 3], T)> + '_ {
        self.f.iter().map(|(&(c, s), &v)| (c, s, v))
    }

    pub fn g_entries(&self) -> impl Iterator<Item = ([usize; 3], usize, Complex<T>)> + '_ {
        self.g.iter().map(|(&(c, v), &z)| (c, v, z))
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        (self.a.len(), self.f.len(), self.g.len())
    }

    /// The dual structure `(g⁻¹, −A, −f)`.
    pub fn dual(&self) -> Self {
        Self {
            a: self.a.iter().map(|(k, v)| (*k, -*v)).collect(),
            f: self.f.iter().map(|(k, v)| (*k, -*v)).collect(),
            g: self.g.iter().map(|(k, v)| (*k, v.conj())).collect(),
        }
    }

    /// Pointwise product; both structures must define the same entries.
    pub fn product(&self, other: &Self) -> Result<Self> {
        let same = self.a.keys().eq(other.a.keys()) && self.f.keys().eq(other.f.keys()) && self.g.keys().eq(other.g.keys());
        if !same {
            return Err(Error::ContractViolation("connective structures are defined on different data".into()));
        }
        Ok(Self {
            a: self.a.iter().zip(other.a.values()).map(|((k, x), y)| (*k, *x + *y)).collect(),
            f: self.f.iter().zip(other.f.values()).map(|((k, x), y)| (*k, *x + *y)).collect(),
            g: self.g.iter().zip(other.g.values()).map(|((k, x), y)| (*k, x * y)).collect(),
        })
    }
}

/// Lists every connection-descent and curving-descent equation violated by
/// more than `tol`.
pub fn check_connective<T: Real>(cs: &ConnectiveStructure<T>, tol: f64) -> ConnectiveReport {
    let mut pairs_on_edge: BTreeMap<[usize; 2], BTreeSet<(usize, usize)>> = BTreeMap::new();
    for ((p, q), e, _) in cs.a_entries() {
        pairs_on_edge.entry(e).or_default().insert((p, q));
    }
    let mut report = ConnectiveReport {
        tolerance: tol,
        connection_checks: 0,
        curving_checks: 0,
        max_connection_residual: 0.0,
        max_curving_residual: 0.0,
        connection_violations: Vec::new(),
        curving_violations: Vec::new(),
    };
    for (edge, pairs) in &pairs_on_edge {
        let charts: BTreeSet<usize> = pairs.iter().flat_map(|&(p, q)| [p, q]).collect();
        let charts: Vec<usize> = charts.into_iter().collect();
        for (i, &al) in charts.iter().enumerate() {
            for (j, &be) in charts.iter().enumerate().skip(i + 1) {
                for &ga in &charts[j + 1..] {
                    if !(pairs.contains(&(al, be)) && pairs.contains(&(al, ga)) && pairs.contains(&(be, ga))) {
                        continue;
                    }
                    let (Some(g0), Some(g1)) = (cs.g([al, be, ga], edge[0]), cs.g([al, be, ga], edge[1])) else {
                        continue;
                    };
                    let sum = cs.a(be, ga, *edge).unwrap() - cs.a(al, ga, *edge).unwrap() + cs.a(al, be, *edge).unwrap();
                    let residual = circle_distance(circle_from_turns(sum) * g0, g1).to_f64_lossy();
                    report.connection_checks += 1;
                    report.max_connection_residual = report.max_connection_residual.max(residual);
                    if residual > tol || residual.is_nan() {
                        report.connection_violations.push(ConnectionViolation { charts: [al, be, ga], edge: *edge, residual });
                    }
                }
            }
        }
    }
    let mut charts_on_face: BTreeMap<[usize; 3], Vec<usize>> = BTreeMap::new();
    for (c, s, _) in cs.f_entries() {
        charts_on_face.entry(s).or_default().push(c);
    }
    for (face, charts) in &charts_on_face {
        let [v0, v1, v2] = *face;
        let boundary = [[v1, v2], [v2, v0], [v0, v1]];
        for (i, &al) in charts.iter().enumerate() {
            for &be in &charts[i + 1..] {
                let edges: Option<Vec<T>> = boundary.iter().map(|e| cs.a.get(&key(al, be, *e)).map(|_| cs.a(al, be, *e).unwrap())).collect();
                let Some(edges) = edges else { continue };
                let flux = edges.into_iter().fold(T::zero(), |s, x| s + x);
                let residual = (cs.f(be, *face).unwrap() - cs.f(al, *face).unwrap() - flux).to_f64_lossy().abs();
                report.curving_checks += 1;
                report.max_curving_residual = report.max_curving_residual.max(residual);
                if residual > tol || residual.is_nan() {
                    report.curving_violations.push(CurvingViolation { charts: [al, be], face: *face, residual });
                }
            }
        }
    }
    report
}

fn key(alpha: usize, beta: usize, edge: [usize; 2]) -> (usize, usize, usize, usize) {
    (alpha.min(beta), alpha.max(beta), edge[0].min(edge[1]), edge[0].max(edge[1]))
}
