//! JSON file formats for the command-line tool.
//!
//! Oriented simplices may be listed in any vertex order; an odd permutation
//! conjugates a circle value and negates a real or cyclic one. Parse and
//! shape errors carry a JSON pointer to the offending value.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::chain_complex::complex::sort_with_parity;
use crate::chain_complex::{Circle, Cochain, SimplicialComplex};
use crate::connective::{ChartMap, ChartedSurface, ChartedVolume, ConnectiveStructure, Witnesses};
use crate::gerbe_cocycle::{CentralExtensionTable, CyclicCocycle, LocalGerbe};
use crate::geometry::mesh::EmbeddedTriangulation;
use crate::geometry::wzw::SU2Map;

/// Circle values given as unit complex numbers must have modulus 1 to
/// within this tolerance.
pub const UNIT_MODULUS_TOL: f64 = 1e-9;

/// A malformed input: what went wrong and where.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputError {
    pub pointer: String,
    pub message: String,
}

impl InputError {
    pub fn at(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Self { pointer: pointer.into(), message: message.into() }
    }
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let at = if self.pointer.is_empty() { "the document root" } else { &self.pointer };
        write!(f, "{} (at {at})", self.message)
    }
}

type Parsed<T> = std::result::Result<T, InputError>;

fn message(e: &crate::Error) -> String {
    match e {
        crate::Error::MalformedInput(m) => m.clone(),
        other => other.to_string(),
    }
}

/// Deserializes `text`, reporting the JSON pointer of the first error.
pub fn parse<T: DeserializeOwned>(text: &str) -> Parsed<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let mut pointer = String::new();
        for seg in e.path().iter() {
            use serde_path_to_error::Segment;
            match seg {
                Segment::Seq { index } => pointer.push_str(&format!("/{index}")),
                Segment::Map { key } => pointer.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
                Segment::Enum { variant } => pointer.push_str(&format!("/{variant}")),
                Segment::Unknown => pointer.push_str("/?"),
            }
        }
        InputError::at(pointer, e.into_inner().to_string())
    })
}

fn complex_from(facets: &[Vec<usize>], pointer: &str) -> Parsed<Arc<SimplicialComplex>> {
    if facets.is_empty() {
        return Err(InputError::at(pointer, "at least one facet is required"));
    }
    SimplicialComplex::from_facets(facets).map(Arc::new).map_err(|e| InputError::at(pointer, message(&e)))
}

/// Index of an oriented simplex and whether its orientation is odd.
fn locate(complex: &SimplicialComplex, simplex: &[usize], pointer: String) -> Parsed<(usize, bool)> {
    let mut s = simplex.to_vec();
    let odd = sort_with_parity(&mut s).ok_or_else(|| InputError::at(&pointer, "repeated vertex"))?;
    let idx = complex
        .index_of(&s)
        .ok_or_else(|| InputError::at(&pointer, format!("{simplex:?} is not a simplex of the complex")))?;
    Ok((idx, odd))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub facets: Vec<Vec<usize>>,
}

impl ComplexFile {
    pub fn complex(&self) -> Parsed<Arc<SimplicialComplex>> {
        complex_from(&self.facets, "/facets")
    }
}

/// `g` on one oriented triangle: either `value: [re, im]` or `turns: t`
/// meaning `exp(2πi·t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleEntry {
    pub simplex: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub turns: Option<f64>,
}

impl CircleEntry {
    fn circle(&self, pointer: &str) -> Parsed<Complex<f64>> {
        match (self.value, self.turns) {
            (Some([re, im]), None) => {
                let z = Complex::new(re, im);
                if !(z.norm() - 1.0).abs().le(&UNIT_MODULUS_TOL) {
                    return Err(InputError::at(format!("{pointer}/value"), format!("|{re} + {im}i| is not 1")));
                }
                Ok(z)
            }
            (None, Some(t)) if t.is_finite() => Ok(crate::scalar::circle_from_turns(t)),
            (None, Some(_)) => Err(InputError::at(format!("{pointer}/turns"), "not a finite number")),
            _ => Err(InputError::at(pointer, "give exactly one of `value` and `turns`")),
        }
    }
}

/// Increments of the four faces (face `i` omits vertex `i`) of a
/// tetrahedron listed in increasing vertex order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariationEntry {
    pub tet: [usize; 4],
    pub increments: [f64; 4],
}

/// A gerbe cocycle on the complex generated by `facets`. Every triangle
/// needs exactly one entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GerbeFile {
    pub facets: Vec<Vec<usize>>,
    pub g: Vec<CircleEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variation: Option<Vec<VariationEntry>>,
}

impl GerbeFile {
    pub fn gerbe(&self) -> Parsed<LocalGerbe<f64>> {
        let complex = complex_from(&self.facets, "/facets")?;
        let mut values: Vec<Option<Complex<f64>>> = vec![None; complex.count(2)];
        for (i, e) in self.g.iter().enumerate() {
            let pointer = format!("/g/{i}");
            if e.simplex.len() != 3 {
                return Err(InputError::at(format!("{pointer}/simplex"), "a triangle has three vertices"));
            }
            let (idx, odd) = locate(&complex, &e.simplex, format!("{pointer}/simplex"))?;
            let z = e.circle(&pointer)?;
            if values[idx].replace(if odd { z.conj() } else { z }).is_some() {
                return Err(InputError::at(pointer, format!("triangle {:?} listed twice", e.simplex)));
            }
        }
        if let Some(i) = values.iter().position(Option::is_none) {
            return Err(InputError::at("/g", format!("no value for triangle {:?}", complex.simplices(2)[i])));
        }
        let g = Cochain::new(complex.clone(), 2, Circle::default(), values.into_iter().map(Option::unwrap).collect())
            .map_err(|e| InputError::at("/g", message(&e)))?;
        let Some(entries) = &self.variation else {
            return LocalGerbe::new(g).map_err(|e| InputError::at("/g", message(&e)));
        };
        let mut rows: Vec<Option<[f64; 4]>> = vec![None; complex.count(3)];
        for (i, e) in entries.iter().enumerate() {
            let pointer = format!("/variation/{i}");
            if e.tet.windows(2).any(|w| w[0] >= w[1]) {
                return Err(InputError::at(format!("{pointer}/tet"), "list tetrahedra in increasing vertex order"));
            }
            let idx = complex
                .index_of(&e.tet)
                .ok_or_else(|| InputError::at(format!("{pointer}/tet"), format!("{:?} is not a tetrahedron of the complex", e.tet)))?;
            if rows[idx].replace(e.increments).is_some() {
                return Err(InputError::at(pointer, format!("tetrahedron {:?} listed twice", e.tet)));
            }
        }
        let rows = rows.into_iter().map(|r| r.unwrap_or([0.0; 4])).collect();
        LocalGerbe::with_variation(g, rows).map_err(|e| InputError::at("/variation", message(&e)))
    }

    pub fn from_gerbe(gerbe: &LocalGerbe<f64>) -> Self {
        let complex = gerbe.complex();
        let g = complex
            .simplices(2)
            .iter()
            .zip(gerbe.g().values())
            .map(|(s, z)| CircleEntry { simplex: s.clone(), value: Some([z.re, z.im]), turns: None })
            .collect();
        let variation = gerbe.variation().map(|rows| {
            complex
                .simplices(3)
                .iter()
                .zip(rows)
                .filter(|(_, r)| r.iter().any(|x| *x != 0.0))
                .map(|(t, r)| VariationEntry { tet: [t[0], t[1], t[2], t[3]], increments: *r })
                .collect()
        });
        Self { facets: complex.facets(), g, variation }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegerEntry {
    pub simplex: Vec<usize>,
    pub value: i64,
}

/// A `ℤₙ`-valued `degree`-cochain; unlisted simplices are 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CyclicFile {
    pub facets: Vec<Vec<usize>>,
    pub n: u64,
    pub degree: usize,
    pub values: Vec<IntegerEntry>,
}

impl CyclicFile {
    pub fn cocycle(&self) -> Parsed<CyclicCocycle> {
        let complex = complex_from(&self.facets, "/facets")?;
        if self.n < 2 {
            return Err(InputError::at("/n", "the coefficient order must be at least 2"));
        }
        if complex.dimension().is_none_or(|d| self.degree > d) {
            return Err(InputError::at("/degree", "degree exceeds the dimension of the complex"));
        }
        let n = self.n as i64;
        let mut values = vec![0u64; complex.count(self.degree)];
        for (i, e) in self.values.iter().enumerate() {
            let pointer = format!("/values/{i}/simplex");
            if e.simplex.len() != self.degree + 1 {
                return Err(InputError::at(pointer, format!("a {}-simplex has {} vertices", self.degree, self.degree + 1)));
            }
            let (idx, odd) = locate(&complex, &e.simplex, pointer)?;
            let v = if odd { -e.value } else { e.value };
            values[idx] = v.rem_euclid(n) as u64;
        }
        CyclicCocycle::from_values(complex, self.degree, self.n, values).map_err(|e| InputError::at("/values", message(&e)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionEntry {
    pub edge: [usize; 2],
    pub value: usize,
}

/// `Q`-valued transition data on the edges of a complex together with a
/// central extension of `Q` by `ℤₙ`. Reversed edges carry the inverse.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionFile {
    pub facets: Vec<Vec<usize>>,
    pub extension: CentralExtensionTable,
    pub transition: Vec<TransitionEntry>,
}

impl ExtensionFile {
    pub fn parts(&self) -> Parsed<(CentralExtensionTable, Arc<SimplicialComplex>, Vec<usize>)> {
        let complex = complex_from(&self.facets, "/facets")?;
        let e = &self.extension;
        let ext = CentralExtensionTable::new(e.n, e.quotient.clone(), e.omega.clone())
            .map_err(|err| InputError::at("/extension", message(&err)))?;
        let mut t: Vec<Option<usize>> = vec![None; complex.count(1)];
        for (i, entry) in self.transition.iter().enumerate() {
            let pointer = format!("/transition/{i}");
            if entry.value >= ext.quotient_order() {
                return Err(InputError::at(format!("{pointer}/value"), format!("{} is not an element of the quotient", entry.value)));
            }
            let (idx, odd) = locate(&complex, &entry.edge, format!("{pointer}/edge"))?;
            let v = if odd { ext.inv_q(entry.value) } else { entry.value };
            if t[idx].replace(v).is_some() {
                return Err(InputError::at(pointer, format!("edge {:?} listed twice", entry.edge)));
            }
        }
        if let Some(i) = t.iter().position(Option::is_none) {
            return Err(InputError::at("/transition", format!("no value for edge {:?}", complex.simplices(1)[i])));
        }
        Ok((ext, complex, t.into_iter().map(Option::unwrap).collect()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionEntry {
    pub charts: [usize; 2],
    pub edge: [usize; 2],
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvingEntry {
    pub chart: usize,
    pub face: [usize; 3],
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionSample {
    pub charts: [usize; 3],
    pub vertex: usize,
    pub value: [f64; 2],
}

/// `A` and `f` in turns, `g` samples as unit complex numbers.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectiveFile {
    #[serde(default)]
    pub a: Vec<ConnectionEntry>,
    #[serde(default)]
    pub f: Vec<CurvingEntry>,
    #[serde(default)]
    pub g: Vec<TransitionSample>,
}

impl ConnectiveFile {
    pub fn structure(&self, prefix: &str) -> Parsed<ConnectiveStructure<f64>> {
        let mut cs = ConnectiveStructure::new();
        for (i, e) in self.a.iter().enumerate() {
            cs.set_a(e.charts[0], e.charts[1], e.edge, e.value).map_err(|err| InputError::at(format!("{prefix}/a/{i}"), message(&err)))?;
        }
        for (i, e) in self.f.iter().enumerate() {
            cs.set_f(e.chart, e.face, e.value).map_err(|err| InputError::at(format!("{prefix}/f/{i}"), message(&err)))?;
        }
        for (i, e) in self.g.iter().enumerate() {
            let z = Complex::new(e.value[0], e.value[1]);
            if !(z.norm() - 1.0).abs().le(&UNIT_MODULUS_TOL) {
                return Err(InputError::at(format!("{prefix}/g/{i}/value"), "not a unit complex number"));
            }
            cs.set_g(e.charts, e.vertex, z).map_err(|err| InputError::at(format!("{prefix}/g/{i}"), message(&err)))?;
        }
        Ok(cs)
    }

    pub fn from_structure(cs: &ConnectiveStructure<f64>) -> Self {
        Self {
            a: cs.a_entries().map(|((p, q), edge, value)| ConnectionEntry { charts: [p, q], edge, value }).collect(),
            f: cs.f_entries().map(|(chart, face, value)| CurvingEntry { chart, face, value }).collect(),
            g: cs.g_entries().map(|(charts, vertex, z)| TransitionSample { charts, vertex, value: [z.re, z.im] }).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartEntry {
    pub simplex: Vec<usize>,
    pub chart: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessEntry {
    pub simplex: Vec<usize>,
    pub charts: Vec<usize>,
}

fn chart_maps(chi: &[ChartEntry], admissible: &[WitnessEntry], prefix: &str) -> Parsed<(ChartMap, Witnesses)> {
    let mut c = ChartMap::new();
    for (i, e) in chi.iter().enumerate() {
        let mut s = e.simplex.clone();
        s.sort_unstable();
        if c.insert(s, e.chart).is_some() {
            return Err(InputError::at(format!("{prefix}/chi/{i}"), format!("simplex {:?} listed twice", e.simplex)));
        }
    }
    let mut w = Witnesses::new();
    for (i, e) in admissible.iter().enumerate() {
        let mut s = e.simplex.clone();
        s.sort_unstable();
        if w.insert(s, e.charts.clone()).is_some() {
            return Err(InputError::at(format!("{prefix}/admissible/{i}"), format!("simplex {:?} listed twice", e.simplex)));
        }
    }
    Ok((c, w))
}

fn chart_entries(chi: &ChartMap, admissible: &Witnesses) -> (Vec<ChartEntry>, Vec<WitnessEntry>) {
    (
        chi.iter().map(|(s, &chart)| ChartEntry { simplex: s.clone(), chart }).collect(),
        admissible.iter().map(|(s, charts)| WitnessEntry { simplex: s.clone(), charts: charts.clone() }).collect(),
    )
}

/// A closed oriented surface with a chart for every simplex and the
/// admissible charts of every simplex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceFile {
    pub faces: Vec<[usize; 3]>,
    pub chi: Vec<ChartEntry>,
    pub admissible: Vec<WitnessEntry>,
}

impl SurfaceFile {
    pub fn surface(&self, prefix: &str) -> Parsed<ChartedSurface> {
        let (chi, w) = chart_maps(&self.chi, &self.admissible, prefix)?;
        ChartedSurface::new(self.faces.clone(), chi, w).map_err(|e| InputError::at(prefix, message(&e)))
    }

    pub fn from_surface(s: &ChartedSurface) -> Self {
        let (chi, admissible) = chart_entries(s.chi(), s.admissible());
        Self { faces: s.faces().to_vec(), chi, admissible }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VolumeFile {
    pub tets: Vec<[usize; 4]>,
    pub chi: Vec<ChartEntry>,
    pub admissible: Vec<WitnessEntry>,
}

impl VolumeFile {
    pub fn volume(&self, prefix: &str) -> Parsed<ChartedVolume> {
        let (chi, w) = chart_maps(&self.chi, &self.admissible, prefix)?;
        ChartedVolume::new(self.tets.clone(), chi, w).map_err(|e| InputError::at(prefix, message(&e)))
    }

    pub fn from_volume(v: &ChartedVolume) -> Self {
        let (chi, admissible) = chart_entries(v.chi(), v.admissible());
        Self { tets: v.tets().to_vec(), chi, admissible }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HolonomyFile {
    pub connective: ConnectiveFile,
    pub surface: SurfaceFile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryFile {
    pub connective: ConnectiveFile,
    pub volume: VolumeFile,
}

/// A mesh, optionally with the values of a map into SU(2) at its vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshFile {
    #[serde(default)]
    pub vertices: Vec<Vec<f64>>,
    #[serde(default)]
    pub cells: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<[f64; 4]>>,
}

impl MeshFile {
    pub fn mesh(&self) -> Parsed<EmbeddedTriangulation> {
        if self.cells.is_empty() {
            return Err(InputError::at("/cells", "at least one cell is required"));
        }
        let dim = self.cells[0].len();
        for (i, c) in self.cells.iter().enumerate() {
            if c.len() != dim || !(3..=4).contains(&dim) {
                return Err(InputError::at(format!("/cells/{i}"), "cells must all be triangles or all tetrahedra"));
            }
            if let Some(j) = c.iter().position(|&v| v >= self.vertices.len().max(self.values.as_ref().map_or(0, Vec::len))) {
                return Err(InputError::at(format!("/cells/{i}/{j}"), "vertex index out of range"));
            }
        }
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for (i, v) in self.vertices.iter().enumerate() {
            if v.len() > 4 || v.iter().any(|x| !x.is_finite()) {
                return Err(InputError::at(format!("/vertices/{i}"), "a vertex has at most four finite coordinates"));
            }
            let mut p = [0.0; 4];
            p[..v.len()].copy_from_slice(v);
            vertices.push(p);
        }
        Ok(EmbeddedTriangulation { vertices, cells: self.cells.clone(), level: 0 })
    }

    pub fn map(&self, values: &[[f64; 4]], pointer: &str) -> Parsed<SU2Map> {
        let mut mesh = self.mesh()?;
        if mesh.vertices.len() < values.len() {
            mesh.vertices.resize(values.len(), [0.0; 4]);
        }
        SU2Map::new(mesh, values.to_vec()).map_err(|e| InputError::at(pointer, message(&e)))
    }
}

/// Sorted-key JSON object from pairs, for stable output.
pub fn object<I: IntoIterator<Item = (String, serde_json::Value)>>(pairs: I) -> serde_json::Value {
    serde_json::Value::Object(pairs.into_iter().collect::<BTreeMap<_, _>>().into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pointer_to_bad_value() {
        let err = parse::<GerbeFile>(r#"{"facets": [[0,1,2]], "g": [{"simplex": [0,1,"x"], "turns": 0.1}]}"#).unwrap_err();
        assert_eq!(err.pointer, "/g/0/simplex/2");
        let err = parse::<GerbeFile>(r#"{"facets": [[0,1,2]]}"#).unwrap_err();
        assert_eq!(err.pointer, "");
        assert!(err.message.contains("missing field `g`"));
    }

    #[test]
    fn gerbe_round_trip_and_orientation() {
        let text = r#"{"facets": [[0,1,2,3]], "g": [
            {"simplex": [0,1,2], "turns": 0.25}, {"simplex": [1,0,3], "turns": 0.25},
            {"simplex": [0,2,3], "value": [1.0, 0.0]}, {"simplex": [1,2,3], "turns": 0.0}]}"#;
        let gerbe = parse::<GerbeFile>(text).unwrap().gerbe().unwrap();
        let z = gerbe.g().evaluate(&[0, 1, 3]).unwrap();
        assert!((z - Complex::new(0.0, -1.0)).norm() < 1e-12);
        let back = GerbeFile::from_gerbe(&gerbe).gerbe().unwrap();
        assert_eq!(back, gerbe);
    }

    #[test]
    fn semantic_errors_point_at_entries() {
        let missing = parse::<GerbeFile>(r#"{"facets": [[0,1,2]], "g": []}"#).unwrap().gerbe().unwrap_err();
        assert_eq!(missing.pointer, "/g");
        let twice = r#"{"facets": [[0,1,2]], "g": [{"simplex": [0,1,2], "turns": 0}, {"simplex": [2,1,0], "turns": 0}]}"#;
        assert_eq!(parse::<GerbeFile>(twice).unwrap().gerbe().unwrap_err().pointer, "/g/1");
        let off = r#"{"facets": [[0,1,2]], "g": [{"simplex": [0,1,2], "value": [2, 0]}]}"#;
        assert_eq!(parse::<GerbeFile>(off).unwrap().gerbe().unwrap_err().pointer, "/g/0/value");
        let cyc = r#"{"facets": [[0,1,2]], "n": 3, "degree": 1, "values": [{"simplex": [0,5], "value": 1}]}"#;
        assert_eq!(parse::<CyclicFile>(cyc).unwrap().cocycle().unwrap_err().pointer, "/values/0/simplex");
    }
}
