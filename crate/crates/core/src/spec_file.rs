//! JSON source-spec files.
//!
//! ```json
//! {"model": "hypergraphical", "users": 3,
//!  "edges": [{"name": "c", "subset": [1, 2, 3], "uniform": 2},
//!            {"name": "b", "subset": [1, 2], "pmf": ["1/4", "3/4"]}]}
//! {"model": "finite_linear", "q": 2, "dim": 2,
//!  "matrices": {"1": [[1], [0]], "2": [[0], [1]]}}
//! {"model": "discrete", "alphabets": [2, 2],
//!  "pmf": [{"symbols": [0, 0], "p": "1/2"}, {"symbols": [1, 1], "p": 0.5}]}
//! ```
//!
//! User ids are 1-based, symbols are 0-based alphabet indices. Probabilities
//! are numbers or strings; `"a/b"` strings stay exact.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldOrder, FiniteMatrix};
use crate::prob::Probability;
use crate::sources::{
    DiscreteSource, Edge, EdgeDistribution, FiniteLinearSource, HypergraphicalSource, Source,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceSpecFile {
    Hypergraphical {
        users: usize,
        edges: Vec<EdgeSpec>,
    },
    FiniteLinear {
        q: u64,
        dim: usize,
        matrices: BTreeMap<String, Vec<Vec<i64>>>,
    },
    Discrete {
        alphabets: Vec<usize>,
        pmf: Vec<PmfEntry>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub name: String,
    pub subset: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pmf: Option<Vec<ProbValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniform: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PmfEntry {
    pub symbols: Vec<usize>,
    pub p: ProbValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProbValue {
    Number(f64),
    Text(String),
}

impl ProbValue {
    fn to_probability(&self) -> Result<Probability> {
        match self {
            ProbValue::Number(x) => Ok(Probability::Float(*x)),
            ProbValue::Text(s) => s.parse(),
        }
    }

    fn from_probability(p: &Probability) -> Self {
        match p {
            Probability::Float(x) => ProbValue::Number(*x),
            exact => ProbValue::Text(exact.to_string()),
        }
    }
}

fn user_index(id: usize, users: usize) -> Result<usize> {
    if id == 0 || id > users {
        return Err(Error::Model(format!("user id {id} outside 1..={users}")));
    }
    Ok(id - 1)
}

impl SourceSpecFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec files always serialize")
    }

    /// Validates the body and builds the source model.
    pub fn to_source(&self) -> Result<Source> {
        match self {
            SourceSpecFile::Hypergraphical { users, edges } => {
                let edges = edges
                    .iter()
                    .map(|e| {
                        let members = e
                            .subset
                            .iter()
                            .map(|&id| user_index(id, *users))
                            .collect::<Result<Vec<_>>>()?;
                        let dist = match (&e.pmf, e.uniform) {
                            (Some(p), None) => EdgeDistribution::Pmf(
                                p.iter().map(ProbValue::to_probability).collect::<Result<_>>()?,
                            ),
                            (None, Some(k)) => EdgeDistribution::Uniform(k),
                            _ => {
                                return Err(Error::Model(format!(
                                    "edge {} needs exactly one of \"pmf\" or \"uniform\"",
                                    e.name
                                )))
                            }
                        };
                        Ok(Edge::new(e.name.clone(), &members, dist))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(HypergraphicalSource::new(*users, edges)?.into())
            }
            SourceSpecFile::FiniteLinear { q, dim, matrices } => {
                let field = FieldOrder::new(*q)?;
                let mut by_user: BTreeMap<usize, FiniteMatrix> = BTreeMap::new();
                for (key, rows) in matrices {
                    let id: usize = key
                        .trim()
                        .parse()
                        .map_err(|_| Error::Model(format!("matrix key {key:?} is not a user id")))?;
                    let m = FiniteMatrix::from_rows(field, *dim, rows)
                        .map_err(|e| Error::Model(format!("matrix of user {id}: {e}")))?;
                    if by_user.insert(id, m).is_some() {
                        return Err(Error::Model(format!("user {id} has two matrices")));
                    }
                }
                let count = by_user.len();
                if by_user.keys().copied().ne(1..=count) {
                    return Err(Error::Model(format!(
                        "matrix keys must be the user ids 1..={count}"
                    )));
                }
                Ok(FiniteLinearSource::new(field, *dim, by_user.into_values().collect())?.into())
            }
            SourceSpecFile::Discrete { alphabets, pmf } => {
                let entries = pmf
                    .iter()
                    .map(|e| Ok((e.symbols.clone(), e.p.to_probability()?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(DiscreteSource::new(alphabets.clone(), entries)?.into())
            }
        }
    }

    pub fn from_source(s: &Source) -> Self {
        match s {
            Source::Hypergraphical(h) => SourceSpecFile::Hypergraphical {
                users: h.user_count(),
                edges: h
                    .edges()
                    .iter()
                    .map(|e| {
                        let (pmf, uniform) = match &e.distribution {
                            EdgeDistribution::Uniform(k) => (None, Some(*k)),
                            EdgeDistribution::Pmf(p) => {
                                (Some(p.iter().map(ProbValue::from_probability).collect()), None)
                            }
                        };
                        EdgeSpec {
                            name: e.name.clone(),
                            subset: e.users.iter().map(|u| u + 1).collect(),
                            pmf,
                            uniform,
                        }
                    })
                    .collect(),
            },
            Source::FiniteLinear(f) => SourceSpecFile::FiniteLinear {
                q: f.field().get(),
                dim: f.dim(),
                matrices: f
                    .matrices()
                    .iter()
                    .enumerate()
                    .map(|(i, m)| {
                        let rows = m
                            .to_rows()
                            .into_iter()
                            .map(|r| r.into_iter().map(|v| v as i64).collect())
                            .collect();
                        ((i + 1).to_string(), rows)
                    })
                    .collect(),
            },
            Source::Discrete(d) => SourceSpecFile::Discrete {
                alphabets: d.alphabet_sizes().to_vec(),
                pmf: d
                    .entries()
                    .map(|(s, p)| PmfEntry { symbols: s.to_vec(), p: ProbValue::from_probability(p) })
                    .collect(),
            },
        }
    }
}

/// Parses source-spec text straight into a validated model.
pub fn parse_source(text: &str) -> Result<Source> {
    SourceSpecFile::parse(text)?.to_source()
}

pub fn load_source(path: &Path) -> Result<Source> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_source(&text)
}
