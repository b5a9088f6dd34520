//! JSON group descriptions.

use serde::{Deserialize, Serialize};

use super::{FiniteGroup, FpMatrix, Permutation};
use crate::error::{input, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupSpec {
    Permutation {
        degree: usize,
        generators: Vec<Vec<u32>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generator_names: Option<Vec<String>>,
    },
    Matrix {
        prime: u64,
        dim: usize,
        generators: Vec<Vec<u32>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
    },
    Table {
        order: usize,
        mul: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        /// Optional metadata checked on load.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        meta: Option<TableMeta>,
    },
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct TableMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<usize>,
}

impl GroupSpec {
    pub fn from_json(text: &str) -> Result<GroupSpec> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            GroupSpec::Permutation { name, .. } | GroupSpec::Matrix { name, .. } | GroupSpec::Table { name, .. } => {
                name.as_deref()
            }
        }
    }

    /// Number of generators as written in the file.
    pub fn generator_count(&self) -> Option<usize> {
        match self {
            GroupSpec::Permutation { generators, .. } | GroupSpec::Matrix { generators, .. } => Some(generators.len()),
            GroupSpec::Table { .. } => None,
        }
    }

    pub fn build(&self, budget: usize) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Permutation { degree, generators, .. } => {
                let gens = generators.iter().map(|g| Permutation(g.clone())).collect();
                FiniteGroup::from_permutations(*degree, gens, budget)
            }
            GroupSpec::Matrix { prime, dim, generators, .. } => {
                let gens = generators
                    .iter()
                    .map(|g| FpMatrix { p: *prime as u32, d: *dim, data: g.clone() })
                    .collect();
                FiniteGroup::from_matrices(*prime, *dim, gens, budget)
            }
            GroupSpec::Table { order, mul, meta, .. } => {
                if *order > budget {
                    return Err(crate::Error::Resource(format!(
                        "table of order {order} exceeds the budget of {budget} elements"
                    )));
                }
                let g = FiniteGroup::from_table(*order, mul)?;
                if let Some(k) = meta.as_ref().and_then(|m| m.classes) {
                    let got = g.conjugacy_classes().len();
                    if got != k {
                        return input(format!("table declares {k} classes but has {got}"));
                    }
                }
                Ok(g)
            }
        }
    }

    /// A table description of an existing group.
    pub fn table_of(g: &FiniteGroup, name: Option<String>) -> GroupSpec {
        GroupSpec::Table {
            order: g.order(),
            mul: g.table().iter().map(|&x| x as usize).collect(),
            name,
            meta: Some(TableMeta { id: None, classes: Some(g.conjugacy_classes().len()) }),
        }
    }
}
