//! JSON file formats for matrices, perturbation families and graphs.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{spanning_tree, Edge, MagneticFrame, WeightedGraph};
use crate::hermitian::{CMatrix, CVector, HermitianMatrix};
use crate::lateral::PerturbationFamily;

/// `{"n": int, "re": [[...]], "im": [[...]]}` with `im` optional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

/// Rectangular complex matrix, `re`/`im` given row by row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexMatrixJson {
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorJson {
    pub re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    #[serde(rename = "S")]
    pub s: MatrixJson,
    #[serde(rename = "Omega")]
    pub omega: MatrixJson,
    #[serde(rename = "K0")]
    pub k0: ComplexMatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<VectorJson>,
    pub lambda0: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleAlphaJson {
    pub edges: Vec<[usize; 2]>,
    pub alpha0: Vec<f64>,
    pub alpha: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: usize,
    pub potentials: Vec<f64>,
    pub edges: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle_alpha: Option<CycleAlphaJson>,
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn to_complex(
    re: &[Vec<f64>],
    im: Option<&Vec<Vec<f64>>>,
    rows: usize,
    cols: Option<usize>,
    what: &str,
) -> Result<CMatrix> {
    if re.len() != rows {
        return Err(Error::Parse(format!("{what}: expected {rows} rows in re, found {}", re.len())));
    }
    let cols = cols.unwrap_or_else(|| re.first().map_or(0, Vec::len));
    let check = |part: &[Vec<f64>], name: &str| -> Result<()> {
        if part.len() != rows {
            return Err(Error::Parse(format!("{what}: expected {rows} rows in {name}, found {}", part.len())));
        }
        match part.iter().position(|r| r.len() != cols) {
            Some(i) => Err(Error::Parse(format!(
                "{what}: row {i} of {name} has {} entries, expected {cols}",
                part[i].len()
            ))),
            None => Ok(()),
        }
    };
    check(re, "re")?;
    if let Some(im) = im {
        check(im, "im")?;
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| {
        Complex64::new(re[i][j], im.map_or(0.0, |m| m[i][j]))
    }))
}

fn split(m: &CMatrix) -> (Vec<Vec<f64>>, Option<Vec<Vec<f64>>>) {
    let re = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].re).collect()).collect();
    let im = m
        .iter()
        .any(|z| z.im != 0.0)
        .then(|| (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].im).collect()).collect());
    (re, im)
}

impl MatrixJson {
    pub fn to_hermitian(&self) -> Result<HermitianMatrix> {
        let m = to_complex(&self.re, self.im.as_ref(), self.n, Some(self.n), "matrix")?;
        HermitianMatrix::new(m)
    }

    pub fn from_hermitian(m: &HermitianMatrix) -> Self {
        let (re, im) = split(m.matrix());
        MatrixJson { n: m.dim(), re, im }
    }
}

impl ComplexMatrixJson {
    pub fn to_matrix(&self) -> Result<CMatrix> {
        to_complex(&self.re, self.im.as_ref(), self.re.len(), None, "complex matrix")
    }

    pub fn from_matrix(m: &CMatrix) -> Self {
        let (re, im) = split(m);
        ComplexMatrixJson { re, im }
    }
}

impl VectorJson {
    pub fn to_vector(&self) -> Result<CVector> {
        if let Some(im) = &self.im {
            if im.len() != self.re.len() {
                return Err(Error::Parse(format!(
                    "vector: re has {} entries, im has {}",
                    self.re.len(),
                    im.len()
                )));
            }
        }
        Ok(CVector::from_fn(self.re.len(), |i, _| {
            Complex64::new(self.re[i], self.im.as_ref().map_or(0.0, |m| m[i]))
        }))
    }

    pub fn from_vector(v: &CVector) -> Self {
        VectorJson {
            re: v.iter().map(|z| z.re).collect(),
            im: v.iter().any(|z| z.im != 0.0).then(|| v.iter().map(|z| z.im).collect()),
        }
    }
}

impl FamilyJson {
    /// Validates into a family; a missing `f` is derived from the eigenspace of `S` at `λ°`.
    pub fn to_family(&self, rel_tol: f64) -> Result<PerturbationFamily> {
        let s = self.s.to_hermitian()?;
        let omega = self.omega.to_hermitian()?;
        let k0 = self.k0.to_matrix()?;
        match &self.f {
            Some(f) => PerturbationFamily::new(s, omega, k0, f.to_vector()?, self.lambda0, rel_tol),
            None => PerturbationFamily::with_derived_eigenvector(s, omega, k0, self.lambda0, rel_tol),
        }
    }

    pub fn from_family(fam: &PerturbationFamily) -> Self {
        FamilyJson {
            s: MatrixJson::from_hermitian(fam.s()),
            omega: MatrixJson::from_hermitian(fam.omega()),
            k0: ComplexMatrixJson::from_matrix(fam.k0()),
            f: Some(VectorJson::from_vector(fam.f())),
            lambda0: fam.lambda0(),
        }
    }
}

impl GraphJson {
    pub fn to_graph(&self) -> Result<WeightedGraph> {
        WeightedGraph::new(self.vertices, self.edges.clone(), self.potentials.clone())
    }

    /// The frame from `cycle_alpha` when present, otherwise the default spanning tree.
    pub fn to_frame(&self, g: &WeightedGraph) -> Result<MagneticFrame> {
        match &self.cycle_alpha {
            Some(c) => MagneticFrame::new(
                g,
                c.edges.iter().map(|&[u, v]| (u, v)).collect(),
                c.alpha0.clone(),
                c.alpha.clone(),
            ),
            None => spanning_tree(g),
        }
    }

    pub fn from_graph(g: &WeightedGraph, frame: Option<&MagneticFrame>) -> Self {
        GraphJson {
            vertices: g.num_vertices(),
            potentials: g.potentials().to_vec(),
            edges: g.edges().to_vec(),
            cycle_alpha: frame.map(|f| CycleAlphaJson {
                edges: f.cycle_edges.iter().map(|&(u, v)| [u, v]).collect(),
                alpha0: f.alpha0.clone(),
                alpha: f.alpha.clone(),
            }),
        }
    }
}

pub fn parse_matrix(text: &str) -> Result<HermitianMatrix> {
    serde_json::from_str::<MatrixJson>(text).map_err(parse_err)?.to_hermitian()
}

pub fn parse_complex_matrix(text: &str) -> Result<CMatrix> {
    serde_json::from_str::<ComplexMatrixJson>(text).map_err(parse_err)?.to_matrix()
}

pub fn parse_family(text: &str, rel_tol: f64) -> Result<PerturbationFamily> {
    serde_json::from_str::<FamilyJson>(text).map_err(parse_err)?.to_family(rel_tol)
}

/// The graph and its frame; the frame is `None` for trees without a `cycle_alpha` block.
pub fn parse_graph(text: &str) -> Result<(WeightedGraph, Option<MagneticFrame>)> {
    let gj: GraphJson = serde_json::from_str(text).map_err(parse_err)?;
    let g = gj.to_graph()?;
    let frame = match gj.to_frame(&g) {
        Ok(f) => Some(f),
        Err(Error::BetaZero) if gj.cycle_alpha.is_none() => None,
        Err(e) => return Err(e),
    };
    Ok((g, frame))
}

pub fn matrix_to_string(m: &HermitianMatrix) -> String {
    serde_json::to_string(&MatrixJson::from_hermitian(m)).expect("matrix serializes")
}

pub fn complex_matrix_to_string(m: &CMatrix) -> String {
    serde_json::to_string(&ComplexMatrixJson::from_matrix(m)).expect("matrix serializes")
}

pub fn family_to_string(fam: &PerturbationFamily) -> String {
    serde_json::to_string_pretty(&FamilyJson::from_family(fam)).expect("family serializes")
}

pub fn graph_to_string(g: &WeightedGraph, frame: Option<&MagneticFrame>) -> String {
    serde_json::to_string_pretty(&GraphJson::from_graph(g, frame)).expect("graph serializes")
}
