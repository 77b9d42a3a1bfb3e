//! JSON/TOML interchange formats.
//!
//! Rationals are strings `"p/q"` or `"p"`. Microcube tables list the
//! coefficient of each slot monomial (1-based slot numbers); omitted
//! monomials are zero, except that the bundle entry for the empty monomial
//! is always the identity.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forms::{FormError, FormSpec};
use crate::groupoid::{CubeBody, Groupoid, GroupoidError, GroupoidKind, Microcube};
use crate::poly::{MatrixField, PolyError};
use crate::representation::{Representation, RepresentationKind};
use crate::weil::{GeneratorContext, Monomial, WeilElement, WeilMatrix};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid rational {0:?}")]
    Rational(String),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub fn parse_rational(s: &str) -> Result<BigRational, IoError> {
    BigRational::from_str(s.trim()).map_err(|_| IoError::Rational(s.to_string()))
}

pub fn rational_string(q: &BigRational) -> String {
    q.to_string()
}

/// One term of a Weil element: generator indices and a coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub monomial: Vec<u32>,
    pub coeff: String,
}

pub fn element_to_json(x: &WeilElement) -> Vec<TermJson> {
    x.terms()
        .map(|(m, c)| TermJson {
            monomial: m.indices().to_vec(),
            coeff: rational_string(c),
        })
        .collect()
}

/// Reads an element whose generator indices refer to `ctx`.
pub fn element_from_json(terms: &[TermJson], ctx: &GeneratorContext) -> Result<WeilElement, IoError> {
    if let Some(max) = terms.iter().flat_map(|t| t.monomial.iter()).max() {
        ctx.reserve(max + 1);
    }
    let mut parsed = Vec::with_capacity(terms.len());
    for t in terms {
        let mut sorted = t.monomial.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(IoError::Format(format!("monomial {:?} repeats a generator", t.monomial)));
        }
        parsed.push((Monomial::from_indices(sorted), parse_rational(&t.coeff)?));
    }
    let context = if terms.iter().any(|t| !t.monomial.is_empty()) { Some(ctx.id()) } else { None };
    Ok(WeilElement::from_terms(context, parsed))
}

pub fn rational_rows(rows: &[Vec<String>]) -> Result<(usize, Vec<BigRational>), IoError> {
    let n = rows.len();
    let mut out = Vec::with_capacity(n * n);
    for r in rows {
        if r.len() != n {
            return Err(IoError::Format(format!("matrix rows must have length {n}")));
        }
        for x in r {
            out.push(parse_rational(x)?);
        }
    }
    Ok((n, out))
}

pub fn matrix_from_rows(rows: &[Vec<String>]) -> Result<WeilMatrix, IoError> {
    let (n, entries) = rational_rows(rows)?;
    Ok(WeilMatrix::from_rational(n, &entries))
}

/// Rows of rational strings; fails if an entry still involves generators.
pub fn matrix_to_rows(m: &WeilMatrix) -> Result<Vec<Vec<String>>, IoError> {
    let k = m.size();
    (0..k)
        .map(|r| {
            (0..k)
                .map(|c| {
                    let x = m.get(r, c);
                    if x.is_constant() {
                        Ok(rational_string(&x.constant_term()))
                    } else {
                        Err(IoError::Format(format!("entry ({r}, {c}) is not rational: {x}")))
                    }
                })
                .collect()
        })
        .collect()
}

fn vector_to_strings(v: &[WeilElement]) -> Result<Vec<String>, IoError> {
    v.iter()
        .map(|x| {
            if x.is_constant() {
                Ok(rational_string(&x.constant_term()))
            } else {
                Err(IoError::Format(format!("coefficient {x} is not rational")))
            }
        })
        .collect()
}

fn vector_from_strings(v: &[String]) -> Result<Vec<WeilElement>, IoError> {
    v.iter().map(|s| Ok(WeilElement::constant(parse_rational(s)?))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BlockJson {
    Vector(Vec<String>),
    Matrix(Vec<Vec<String>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub slots: Vec<usize>,
    pub block: BlockJson,
}

/// A microcube with rational coefficients. `base` is the source point for
/// the pair groupoid and the base point for the bundle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MicrocubeJson {
    pub groupoid: GroupoidKind,
    pub base_dim: usize,
    pub fiber_dim: usize,
    pub arity: usize,
    pub base: Vec<String>,
    pub table: Vec<EntryJson>,
}

fn slots_of(mask: usize, arity: usize) -> Vec<usize> {
    (0..arity).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect()
}

impl MicrocubeJson {
    pub fn from_cube(cube: &Microcube) -> Result<Self, IoError> {
        let g = cube.groupoid();
        let n = cube.arity();
        let mut table = Vec::new();
        let base = match cube.body() {
            CubeBody::Pair(t) => {
                for (mask, v) in t.iter().enumerate().skip(1) {
                    if v.iter().all(WeilElement::is_zero) {
                        continue;
                    }
                    table.push(EntryJson {
                        slots: slots_of(mask, n),
                        block: BlockJson::Vector(vector_to_strings(v)?),
                    });
                }
                vector_to_strings(&t[0])?
            }
            CubeBody::Bundle { base, table: t } => {
                for (mask, m) in t.iter().enumerate().skip(1) {
                    if m.is_zero() {
                        continue;
                    }
                    table.push(EntryJson {
                        slots: slots_of(mask, n),
                        block: BlockJson::Matrix(matrix_to_rows(m)?),
                    });
                }
                vector_to_strings(base)?
            }
        };
        Ok(Self {
            groupoid: g.kind,
            base_dim: g.base_dim,
            fiber_dim: g.fiber_dim,
            arity: n,
            base,
            table,
        })
    }

    pub fn groupoid(&self) -> Groupoid {
        Groupoid {
            kind: self.groupoid,
            base_dim: self.base_dim,
            fiber_dim: self.fiber_dim,
        }
    }

    pub fn to_cube(&self) -> Result<Microcube, IoError> {
        let g = self.groupoid();
        let n = self.arity;
        if n > 8 {
            return Err(IoError::Format(format!("arity {n} is too large")));
        }
        if self.base.len() != g.base_dim {
            return Err(IoError::Format(format!("base point has {} coordinates, expected {}", self.base.len(), g.base_dim)));
        }
        let mut masks = BTreeMap::new();
        for e in &self.table {
            let mut mask = 0usize;
            for s in &e.slots {
                if *s == 0 || *s > n || mask & (1 << (s - 1)) != 0 {
                    return Err(IoError::Format(format!("bad slot list {:?} for arity {n}", e.slots)));
                }
                mask |= 1 << (s - 1);
            }
            if mask == 0 {
                return Err(IoError::Format("the empty monomial is given by `base`".into()));
            }
            if masks.insert(mask, &e.block).is_some() {
                return Err(IoError::Format(format!("slots {:?} listed twice", e.slots)));
            }
        }
        let base = vector_from_strings(&self.base)?;
        let size = 1usize << n;
        match g.kind {
            GroupoidKind::Pair => {
                let mut table = vec![vec![WeilElement::zero(); g.base_dim]; size];
                table[0] = base;
                for (mask, block) in masks {
                    match block {
                        BlockJson::Vector(v) if v.len() == g.base_dim => table[mask] = vector_from_strings(v)?,
                        _ => return Err(IoError::Format(format!("pair entries are vectors of length {}", g.base_dim))),
                    }
                }
                Ok(Microcube::pair(g, table)?)
            }
            GroupoidKind::Bundle => {
                let mut table = vec![WeilMatrix::zero(g.fiber_dim); size];
                table[0] = WeilMatrix::identity(g.fiber_dim);
                for (mask, block) in masks {
                    match block {
                        BlockJson::Matrix(rows) if rows.len() == g.fiber_dim => table[mask] = matrix_from_rows(rows)?,
                        _ => {
                            return Err(IoError::Format(format!(
                                "bundle entries are {0}x{0} matrices",
                                g.fiber_dim
                            )))
                        }
                    }
                }
                Ok(Microcube::bundle(g, base, table)?)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationSpec {
    pub kind: RepresentationKind,
    /// Gauge field `T(x)` as rows of polynomial strings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge: Option<Vec<Vec<String>>>,
}

impl RepresentationSpec {
    pub fn build(&self, base_dim: usize, fiber_dim: usize) -> Result<Representation, IoError> {
        match (self.kind, &self.gauge) {
            (RepresentationKind::Gauge, Some(rows)) => {
                let field = MatrixField::parse(rows, base_dim)?;
                if field.size() != fiber_dim {
                    return Err(IoError::Format(format!("gauge field must be {0}x{0}", fiber_dim)));
                }
                Ok(Representation::Gauge { field })
            }
            (_, Some(_)) => Err(IoError::Format("a gauge field is only meaningful for the gauge kind".into())),
            (kind, None) => Ok(Representation::of_kind(kind, base_dim, fiber_dim)),
        }
    }

    pub fn from_rep(rep: &Representation) -> Self {
        Self {
            kind: rep.kind(),
            gauge: match rep {
                Representation::Gauge { field } => Some(field.to_strings()),
                _ => None,
            },
        }
    }
}

/// Input of the `eval` subcommand. Which fields are needed depends on the
/// operation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<FormSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representation: Option<RepresentationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub microcube: Option<MicrocubeJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x1: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x2: Option<Vec<Vec<String>>>,
}

impl EvalInput {
    /// Parses JSON, or TOML when the text does not start with `{`.
    pub fn parse(text: &str) -> Result<Self, IoError> {
        if text.trim_start().starts_with('{') {
            Ok(serde_json::from_str(text)?)
        } else {
            toml::from_str(text).map_err(|e| IoError::Format(e.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::random_microcube;

    #[test]
    fn element_round_trip() {
        let ctx = GeneratorContext::new();
        let g = ctx.fresh_many(3);
        let x = WeilElement::from_int(2) + WeilElement::product_of(&g[..2]).scale(&BigRational::new(3.into(), 4.into()));
        let back = element_from_json(&element_to_json(&x), &ctx).unwrap();
        assert_eq!(back, x);
        let json = serde_json::to_string(&element_to_json(&x)).unwrap();
        assert!(json.contains("\"3/4\""));
    }

    #[test]
    fn cube_round_trip() {
        for g in [Groupoid::pair(2, 2), Groupoid::bundle(2, 2)] {
            let cube = random_microcube(6, 2, g, 3);
            let json = MicrocubeJson::from_cube(&cube).unwrap();
            let text = serde_json::to_string(&json).unwrap();
            let back: MicrocubeJson = serde_json::from_str(&text).unwrap();
            assert_eq!(back.to_cube().unwrap(), cube);
        }
    }

    #[test]
    fn rejects_malformed_cubes() {
        let mut json = MicrocubeJson::from_cube(&random_microcube(1, 1, Groupoid::pair(2, 1), 3)).unwrap();
        json.table.push(EntryJson {
            slots: vec![2],
            block: BlockJson::Vector(vec!["1".into(), "0".into()]),
        });
        assert!(json.to_cube().is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn eval_input_from_toml() {
        let text = r#"
x1 = [["0", "1"], ["0", "0"]]
x2 = [["0", "0"], ["1", "0"]]
"#;
        let input = EvalInput::parse(text).unwrap();
        assert_eq!(input.x1.unwrap()[0][1], "1");
    }
}
