//! JSON inputs: published reference values, subalgebra lists and raw
//! structure constants.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::optimal::TableEntry;
use crate::parse::{parse_expr, Scope};
use crate::rational::{parse_rational, Rational};
use crate::symbolic::{Expr, Poly, Symbol};

#[derive(Clone, Debug, Deserialize)]
pub struct Anchored<T> {
    pub anchor: String,
    #[serde(flatten)]
    pub body: T,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Labels {
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Rows {
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct MatrixBody {
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Terms {
    pub terms: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Matrices {
    pub matrices: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Maps {
    pub maps: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Solutions {
    pub functions: Vec<String>,
    pub solutions: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Composite {
    pub order: Vec<String>,
    pub solution: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Arguments {
    pub first_order: Vec<String>,
    pub second_order: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct InvariantRow {
    pub generator: String,
    pub entries: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct InvariantRows {
    pub rows: Vec<InvariantRow>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct SimilarityRow {
    pub generator: String,
    pub form: Option<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct SimilarityRows {
    pub rows: Vec<SimilarityRow>,
}

/// Published values the pipeline compares against; every section optional.
#[derive(Clone, Debug, Default, Deserialize)]
pub struct Reference {
    pub schema: u32,
    pub generators: Option<Anchored<Labels>>,
    pub commutators: Option<Anchored<Rows>>,
    pub killing: Option<Anchored<MatrixBody>>,
    pub derived_series: Option<Anchored<Terms>>,
    pub adjoint: Option<Anchored<Matrices>>,
    pub flows: Option<Anchored<Maps>>,
    pub transformed: Option<Anchored<Solutions>>,
    pub composite: Option<Anchored<Composite>>,
    pub invariants: Option<Anchored<Arguments>>,
    pub invariant_rows: Option<Anchored<InvariantRows>>,
    pub similarity: Option<Anchored<SimilarityRows>>,
}

impl Reference {
    pub fn from_json(text: &str) -> Result<Reference> {
        let r: Reference = serde_json::from_str(text)
            .map_err(|e| Error::Unsupported(format!("reference file: {e}")))?;
        if r.schema != 1 {
            return Err(Error::Unsupported(format!(
                "reference schema {} (expected 1)",
                r.schema
            )));
        }
        Ok(r)
    }
}

/// Subalgebra given by basis vectors whose entries may be linear in named
/// parameters.
#[derive(Clone, Debug, Deserialize)]
pub struct ParamEntry {
    pub label: String,
    #[serde(default)]
    pub params: Vec<String>,
    pub basis: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct OptimalInput {
    pub schema: u32,
    /// Values substituted for every parameter, one instantiation each.
    #[serde(default)]
    pub samples: Vec<String>,
    #[serde(default)]
    pub one_dimensional: Vec<ParamEntry>,
    pub subalgebras: Vec<ParamEntry>,
}

fn bad(what: &str, s: &str, e: impl std::fmt::Display) -> Error {
    Error::Unsupported(format!("{what} '{s}': {e}"))
}

impl ParamEntry {
    fn instantiate(&self, n: usize, value: &Rational) -> Result<Vec<Vec<Rational>>> {
        let scope = Scope {
            params: self.params.clone(),
            ..Scope::default()
        };
        let subs: BTreeMap<Symbol, Poly> = self
            .params
            .iter()
            .map(|p| (Symbol::parameter(p), Poly::constant(value.clone())))
            .collect();
        self.basis
            .iter()
            .map(|row| {
                if row.len() != n {
                    return Err(Error::Dimension(format!(
                        "{}: basis vector of length {}, expected {n}",
                        self.label,
                        row.len()
                    )));
                }
                row.iter()
                    .map(|s| {
                        let e = parse_expr(s, &scope).map_err(|e| bad("entry", s, e))?;
                        e.to_poly()?
                            .substitute(&subs)?
                            .as_constant()
                            .ok_or_else(|| bad("entry", s, "not constant after substitution"))
                    })
                    .collect()
            })
            .collect()
    }
}

impl OptimalInput {
    pub fn from_json(text: &str) -> Result<OptimalInput> {
        let r: OptimalInput = serde_json::from_str(text)
            .map_err(|e| Error::Unsupported(format!("subalgebra file: {e}")))?;
        if r.schema != 1 {
            return Err(Error::Unsupported(format!(
                "subalgebra file schema {} (expected 1)",
                r.schema
            )));
        }
        Ok(r)
    }

    pub fn sample_values(&self) -> Result<Vec<Rational>> {
        if self.samples.is_empty() {
            return Ok(vec![Rational::from_integer(1.into())]);
        }
        self.samples
            .iter()
            .map(|s| parse_rational(s).ok_or_else(|| bad("sample", s, "not a rational")))
            .collect()
    }

    /// Entries instantiated at one sample value; parameter-free entries are
    /// the same for every sample.
    pub fn entries_at(&self, n: usize, value: &Rational) -> Result<Vec<TableEntry>> {
        self.subalgebras
            .iter()
            .map(|e| {
                Ok(TableEntry {
                    label: e.label.clone(),
                    basis: e.instantiate(n, value)?,
                })
            })
            .collect()
    }

    pub fn representatives_at(&self, n: usize, value: &Rational) -> Result<Vec<Vec<Rational>>> {
        let mut out = Vec::new();
        for e in &self.one_dimensional {
            out.extend(e.instantiate(n, value)?);
        }
        Ok(out)
    }
}

/// `{"dim": n, "brackets": [{"i": 1, "j": 4, "coeffs": ["1", "0", ...]}]}`
/// with 1-based indices; unlisted brackets are zero and `[e_j, e_i]` is
/// filled in by antisymmetry.
#[derive(Clone, Debug, Deserialize)]
pub struct StructureInput {
    pub dim: usize,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    pub brackets: Vec<BracketInput>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct BracketInput {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<serde_json::Value>,
}

fn json_rational(v: &serde_json::Value) -> Result<Rational> {
    match v {
        serde_json::Value::String(s) => {
            parse_rational(s).ok_or_else(|| bad("coefficient", s, "not a rational"))
        }
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(|k| Rational::from_integer(k.into()))
            .ok_or_else(|| bad("coefficient", &n.to_string(), "not an integer")),
        other => Err(bad(
            "coefficient",
            &other.to_string(),
            "expected a string or integer",
        )),
    }
}

impl StructureInput {
    pub fn from_json(text: &str) -> Result<StructureInput> {
        serde_json::from_str(text)
            .map_err(|e| Error::Unsupported(format!("structure constants file: {e}")))
    }

    pub fn algebra(&self) -> Result<LieAlgebra> {
        let n = self.dim;
        let zero = Rational::from_integer(0.into());
        let mut c = vec![vec![vec![zero.clone(); n]; n]; n];
        let mut seen = vec![vec![false; n]; n];
        for b in &self.brackets {
            if b.i == 0 || b.j == 0 || b.i > n || b.j > n {
                return Err(Error::InvalidStructure(format!(
                    "bracket index ({}, {}) out of range 1..={n}",
                    b.i, b.j
                )));
            }
            if b.coeffs.len() != n {
                return Err(Error::InvalidStructure(format!(
                    "bracket ({}, {}) has {} coefficients",
                    b.i,
                    b.j,
                    b.coeffs.len()
                )));
            }
            let (i, j) = (b.i - 1, b.j - 1);
            let v: Vec<Rational> = b.coeffs.iter().map(json_rational).collect::<Result<_>>()?;
            if seen[i][j] && c[i][j] != v {
                return Err(Error::InvalidStructure(format!(
                    "bracket ({}, {}) given inconsistently",
                    b.i, b.j
                )));
            }
            seen[i][j] = true;
            seen[j][i] = true;
            c[j][i] = v.iter().map(|x| -x).collect();
            c[i][j] = v;
        }
        let labels = self
            .labels
            .clone()
            .unwrap_or_else(|| (1..=n).map(|k| format!("e{k}")).collect());
        LieAlgebra::new(labels, c)
    }
}

/// Parses `2*v3 - v1` into coordinates over `labels`.
pub fn parse_combination(text: &str, labels: &[String]) -> Result<Vec<Rational>> {
    let scope = Scope {
        params: labels.to_vec(),
        ..Scope::default()
    };
    let p = parse_expr(text, &scope)
        .map_err(|e| bad("combination", text, e))?
        .to_poly()?;
    let mut rest = p.clone();
    let mut out = Vec::with_capacity(labels.len());
    for l in labels {
        let s = Symbol::parameter(l);
        let c = p
            .diff(&s)?
            .as_constant()
            .ok_or_else(|| bad("combination", text, "not linear"))?;
        rest = &rest - &Poly::symbol(&s).scale(&c);
        out.push(c);
    }
    if !rest.is_zero() {
        return Err(bad("combination", text, "not linear"));
    }
    Ok(out)
}

/// Expression over `scope` plus the given function names.
pub fn parse_with(text: &str, scope: &Scope, functions: &[String]) -> Result<Expr> {
    let mut s = scope.clone();
    s.functions = functions.to_vec();
    parse_expr(text, &s).map_err(|e| bad("expression", text, e))
}
