//! JSON file formats.
//!
//! ```text
//! lattice   {"elements": [..], "leq": [[i, j], ..], "ortho": [k0, ..]?}
//! map       {"source": <lattice | path>, "target": <lattice | path>, "table": [..]}
//! matrix    {"rows": r, "cols": c, "re": [[..]], "im": [[..]]?}
//! operator  matrix fields plus {"linearity": "linear" | "antilinear"}
//! vector    {"re": [..], "im": [..]?}
//! tv        {"coefficients": <vector>, "left_basis": <matrix>, "right_basis": <matrix>}
//! space     {"states": [..], "lattice": <lattice | path>, "c_map": [..]}
//! ```
//!
//! Pairs in `leq` may name elements by index or by label. Paths inside a
//! file are resolved relative to that file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compound::{from_tensor, schmidt, CompoundOperator, Linearity, TensorVector};
use crate::galois::JoinMap;
use crate::hilbert::{c, CMatrix, CVector};
use crate::lattice::{Element, FiniteLattice, OrthoLattice};
use crate::quantale::ProperStateSpace;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid {what}: {message}")]
    Invalid { what: &'static str, message: String },
    #[error("unknown format `{0}` (expected lattice-json, map-json, matrix-json or tv-json)")]
    UnknownFormat(String),
    #[error("cannot convert {0} to {1}")]
    UnsupportedConversion(Format, Format),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

fn invalid(what: &'static str, e: impl fmt::Display) -> IoError {
    IoError::Invalid { what, message: e.to_string() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Lattice,
    Map,
    Matrix,
    Tv,
}

impl FromStr for Format {
    type Err = IoError;

    fn from_str(s: &str) -> Result<Self, IoError> {
        match s {
            "lattice-json" => Ok(Format::Lattice),
            "map-json" => Ok(Format::Map),
            "matrix-json" => Ok(Format::Matrix),
            "tv-json" => Ok(Format::Tv),
            other => Err(IoError::UnknownFormat(other.to_owned())),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Lattice => "lattice-json",
            Format::Map => "map-json",
            Format::Matrix => "matrix-json",
            Format::Tv => "tv-json",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRef {
    Index(Element),
    Label(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeJson {
    pub elements: Vec<String>,
    pub leq: Vec<(ElementRef, ElementRef)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ortho: Option<Vec<Element>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LatticeRef {
    Inline(LatticeJson),
    Path(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapJson {
    pub source: LatticeRef,
    pub target: LatticeRef,
    pub table: Vec<Element>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linearity: Option<Linearity>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorJson {
    pub re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorJson {
    pub coefficients: VectorJson,
    pub left_basis: MatrixJson,
    pub right_basis: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceJson {
    pub states: Vec<String>,
    pub lattice: LatticeRef,
    pub c_map: Vec<Element>,
}

// Lattices

/// A parsed lattice, with its orthocomplement when one was given.
#[derive(Debug, Clone)]
pub struct LoadedLattice {
    pub lattice: Arc<FiniteLattice>,
    pub ortho: Option<OrthoLattice>,
}

impl LatticeJson {
    pub fn to_lattice(&self) -> Result<LoadedLattice, IoError> {
        let find = |r: &ElementRef| match r {
            ElementRef::Index(i) => Ok(*i),
            ElementRef::Label(l) => self
                .elements
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| invalid("lattice", format!("unknown label `{l}`"))),
        };
        let pairs = self
            .leq
            .iter()
            .map(|(a, b)| Ok((find(a)?, find(b)?)))
            .collect::<Result<Vec<_>, IoError>>()?;
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = self.elements.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(invalid("lattice", format!("duplicate label `{dup}`")));
        }
        let lattice = FiniteLattice::build(&self.elements, &pairs).map_err(|e| invalid("lattice", e))?;
        let ortho = match &self.ortho {
            Some(table) => Some(OrthoLattice::new(lattice.clone(), table.clone()).map_err(|e| invalid("lattice", e))?),
            None => None,
        };
        Ok(LoadedLattice { lattice: Arc::new(lattice), ortho })
    }

    /// Full order relation, so that writing and reading back is exact.
    pub fn from_lattice(l: &FiniteLattice, ortho: Option<&[Element]>) -> Self {
        let leq = l
            .elements()
            .flat_map(|i| l.elements().map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && l.leq(i, j))
            .map(|(i, j)| (ElementRef::Index(i), ElementRef::Index(j)))
            .collect();
        Self { elements: l.labels().to_vec(), leq, ortho: ortho.map(<[_]>::to_vec) }
    }
}

impl LatticeRef {
    fn resolve(&self, base: Option<&Path>) -> Result<LatticeJson, IoError> {
        match self {
            LatticeRef::Inline(l) => Ok(l.clone()),
            LatticeRef::Path(p) => {
                let path = match base {
                    Some(dir) if p.is_relative() => dir.join(p),
                    _ => p.clone(),
                };
                parse_str(&read(&path)?)
            }
        }
    }
}

// Matrices and vectors

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let rows = |f: fn(&crate::hilbert::C64) -> f64| -> Vec<Vec<f64>> {
            (0..m.nrows()).map(|r| (0..m.ncols()).map(|k| f(&m[(r, k)])).collect()).collect()
        };
        Self { rows: m.nrows(), cols: m.ncols(), re: rows(|z| z.re), im: Some(rows(|z| z.im)), linearity: None }
    }

    pub fn from_operator(f: &CompoundOperator) -> Self {
        Self { linearity: Some(f.linearity()), ..Self::from_matrix(f.matrix()) }
    }

    pub fn to_matrix(&self) -> Result<CMatrix, IoError> {
        let check = |part: &str, data: &[Vec<f64>]| {
            if data.len() != self.rows || data.iter().any(|row| row.len() != self.cols) {
                return Err(invalid("matrix", format!("`{part}` is not {}x{}", self.rows, self.cols)));
            }
            Ok(())
        };
        check("re", &self.re)?;
        if let Some(im) = &self.im {
            check("im", im)?;
        }
        Ok(CMatrix::from_fn(self.rows, self.cols, |r, k| {
            c(self.re[r][k], self.im.as_ref().map_or(0.0, |im| im[r][k]))
        }))
    }

    /// The operator; files without a `linearity` field are linear.
    pub fn to_operator(&self) -> Result<CompoundOperator, IoError> {
        CompoundOperator::new(self.to_matrix()?, self.linearity.unwrap_or(Linearity::Linear))
            .map_err(|e| invalid("operator", e))
    }
}

impl VectorJson {
    pub fn from_vector(v: &CVector) -> Self {
        Self { re: v.iter().map(|z| z.re).collect(), im: Some(v.iter().map(|z| z.im).collect()) }
    }

    pub fn to_vector(&self) -> Result<CVector, IoError> {
        if let Some(im) = &self.im {
            if im.len() != self.re.len() {
                return Err(invalid("vector", "`re` and `im` differ in length"));
            }
        }
        Ok(CVector::from_fn(self.re.len(), |i, _| c(self.re[i], self.im.as_ref().map_or(0.0, |im| im[i]))))
    }
}

impl TensorJson {
    pub fn from_tensor_vector(tv: &TensorVector) -> Self {
        Self {
            coefficients: VectorJson::from_vector(tv.coefficients()),
            left_basis: MatrixJson::from_matrix(tv.left_basis()),
            right_basis: MatrixJson::from_matrix(tv.right_basis()),
        }
    }

    pub fn to_tensor_vector(&self) -> Result<TensorVector, IoError> {
        TensorVector::new(
            self.coefficients.to_vector()?,
            self.left_basis.to_matrix()?,
            self.right_basis.to_matrix()?,
        )
        .map_err(|e| invalid("tensor vector", e))
    }
}

// Entry points

fn read(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read { path: path.to_owned(), source })
}

pub fn parse_str<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, IoError> {
    Ok(serde_json::from_str(text)?)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("file types serialize infallibly")
}

pub fn load_lattice(path: &Path) -> Result<LoadedLattice, IoError> {
    parse_str::<LatticeJson>(&read(path)?)?.to_lattice()
}

pub fn parse_map(text: &str, base: Option<&Path>) -> Result<JoinMap, IoError> {
    let m: MapJson = parse_str(text)?;
    let source = m.source.resolve(base)?.to_lattice()?.lattice;
    let target = m.target.resolve(base)?.to_lattice()?.lattice;
    JoinMap::new(source, target, m.table).map_err(|e| invalid("map", e))
}

pub fn load_map(path: &Path) -> Result<JoinMap, IoError> {
    parse_map(&read(path)?, path.parent())
}

pub fn load_matrix(path: &Path) -> Result<CMatrix, IoError> {
    parse_str::<MatrixJson>(&read(path)?)?.to_matrix()
}

pub fn load_operator(path: &Path) -> Result<CompoundOperator, IoError> {
    parse_str::<MatrixJson>(&read(path)?)?.to_operator()
}

/// A vector file, or a matrix file with a single column.
pub fn load_vector(path: &Path) -> Result<CVector, IoError> {
    let text = read(path)?;
    if let Ok(v) = serde_json::from_str::<VectorJson>(&text) {
        return v.to_vector();
    }
    let m = parse_str::<MatrixJson>(&text)?.to_matrix()?;
    if m.ncols() != 1 {
        return Err(invalid("vector", format!("expected one column, got {}", m.ncols())));
    }
    Ok(m.column(0).into_owned())
}

pub fn load_tensor(path: &Path) -> Result<TensorVector, IoError> {
    parse_str::<TensorJson>(&read(path)?)?.to_tensor_vector()
}

pub fn parse_space(text: &str, base: Option<&Path>) -> Result<ProperStateSpace, IoError> {
    let s: SpaceJson = parse_str(text)?;
    let lattice = s.lattice.resolve(base)?.to_lattice()?.lattice;
    ProperStateSpace::new(s.states, lattice, s.c_map).map_err(|e| invalid("state space", e))
}

pub fn load_space(path: &Path) -> Result<ProperStateSpace, IoError> {
    parse_space(&read(path)?, path.parent())
}

/// Converts between file formats.
///
/// Each format converts to itself (validating and normalising: lattice
/// references in maps are inlined, matrices gain an explicit `im`). A
/// tensor vector becomes the anti-linear operator with coefficient matrix
/// `Σ c_i φ_i ψ_iᵀ`; an operator becomes its Schmidt form.
pub fn convert_str(text: &str, from: Format, to: Format, base: Option<&Path>) -> Result<String, IoError> {
    match (from, to) {
        (Format::Lattice, Format::Lattice) => {
            let json: LatticeJson = parse_str(text)?;
            let loaded = json.to_lattice()?;
            Ok(to_json(&LatticeJson::from_lattice(&loaded.lattice, loaded.ortho.as_ref().map(|o| o.ortho_table()))))
        }
        (Format::Map, Format::Map) => {
            let f = parse_map(text, base)?;
            Ok(to_json(&MapJson {
                source: LatticeRef::Inline(LatticeJson::from_lattice(f.source(), None)),
                target: LatticeRef::Inline(LatticeJson::from_lattice(f.target(), None)),
                table: f.table().to_vec(),
            }))
        }
        (Format::Matrix, Format::Matrix) => {
            let json: MatrixJson = parse_str(text)?;
            let m = json.to_matrix()?;
            Ok(to_json(&MatrixJson { linearity: json.linearity, ..MatrixJson::from_matrix(&m) }))
        }
        (Format::Tv, Format::Tv) => {
            let tv = parse_str::<TensorJson>(text)?.to_tensor_vector()?;
            Ok(to_json(&TensorJson::from_tensor_vector(&tv)))
        }
        (Format::Tv, Format::Matrix) => {
            let tv = parse_str::<TensorJson>(text)?.to_tensor_vector()?;
            Ok(to_json(&MatrixJson::from_operator(&from_tensor(&tv, Linearity::Antilinear))))
        }
        (Format::Matrix, Format::Tv) => {
            let f = parse_str::<MatrixJson>(text)?.to_operator()?;
            Ok(to_json(&TensorJson::from_tensor_vector(&schmidt(&f))))
        }
        (from, to) => Err(IoError::UnsupportedConversion(from, to)),
    }
}

pub fn convert(path: &Path, from: Format, to: Format) -> Result<String, IoError> {
    convert_str(&read(path)?, from, to, path.parent())
}
