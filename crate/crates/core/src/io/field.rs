use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::At;
use crate::engine::{Alphabet, Config, LocalRule, RuleField, Symbol};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel};
use crate::twisted::{linear_coefficients, linear_rule};

/// A plain size, or `{"q": prime, "n": dimension}` for `F_q^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphabetFile {
    Size(u32),
    Vector { q: u32, n: u32 },
}

/// A dense table in canonical order over the memory as listed, or one
/// `n x n` coefficient matrix per memory element for a linear rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TableFile {
    Table(Vec<Symbol>),
    Matrices(Vec<Vec<Vec<u32>>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleFile {
    pub alphabet: AlphabetFile,
    pub memory: Vec<String>,
    pub base: TableFile,
    #[serde(default)]
    pub exceptions: BTreeMap<String, TableFile>,
    #[serde(default)]
    pub linear: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum ConfigFile {
    Finite {
        background: Symbol,
        #[serde(default)]
        exceptions: BTreeMap<String, Symbol>,
    },
    Periodic { periods: Vec<u64>, values: Vec<Symbol> },
}

fn alphabet(at: &At, file: &AlphabetFile) -> Result<Alphabet> {
    at.wrap(match *file {
        AlphabetFile::Size(s) => Alphabet::new(s),
        AlphabetFile::Vector { q, n } => Alphabet::vector(q, n),
    })
}

fn rule(at: &At, a: Alphabet, memory: &[GroupElement], file: &TableFile, linear: bool) -> Result<LocalRule> {
    let built = match file {
        TableFile::Table(table) => at.wrap(LocalRule::new(a, memory.to_vec(), table.clone()))?,
        TableFile::Matrices(ms) => {
            if ms.len() != memory.len() {
                return Err(at.fail(format!("{} matrices for a memory of {} elements", ms.len(), memory.len())));
            }
            let mut pairs: Vec<(GroupElement, Vec<Vec<u32>>)> = memory.iter().cloned().zip(ms.iter().cloned()).collect();
            pairs.sort_by(|x, y| x.0.cmp(&y.0));
            let (mem, coeffs): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
            at.wrap(linear_rule(a, mem, &coeffs))?
        }
    };
    if linear {
        at.wrap(linear_coefficients(&built).map(|_| ()))?;
    }
    Ok(built)
}

pub fn field_from_file(group: &GroupModel, file: &RuleFile, context: &str) -> Result<RuleField> {
    let at = At::root(context);
    let a = alphabet(&at.key("alphabet"), &file.alphabet)?;
    let memory = file
        .memory
        .iter()
        .enumerate()
        .map(|(i, m)| at.key("memory").index(i).element(group, m))
        .collect::<Result<Vec<_>>>()?;
    for (i, m) in memory.iter().enumerate() {
        if memory[..i].contains(m) {
            return Err(at.key("memory").index(i).fail(format!("{m} is listed twice")));
        }
    }
    let base = rule(&at.key("base"), a, &memory, &file.base, file.linear)?;
    let mut exceptions = BTreeMap::new();
    for (site, table) in &file.exceptions {
        let at = at.key("exceptions").key(site);
        let g = at.element(group, site)?;
        if exceptions.insert(g.clone(), rule(&at, a, &memory, table, file.linear)?).is_some() {
            return Err(at.fail(format!("site {g} is listed twice")));
        }
    }
    at.wrap(RuleField::asymptotic(base, exceptions))
}

fn alphabet_file(a: Alphabet) -> AlphabetFile {
    match a.vector_structure() {
        Some((q, n)) => AlphabetFile::Vector { q, n },
        None => AlphabetFile::Size(a.size()),
    }
}

/// Writes tables over the sorted memory; `linear` is set when the alphabet
/// is a vector space and every rule is linear.
pub fn field_to_file(s: &RuleField) -> Result<RuleFile> {
    let exceptions = s
        .exceptions()
        .ok_or_else(|| Error::Unsupported("fields with uniformly bounded singularity have no file format".into()))?;
    let linear = s.alphabet().vector_structure().is_some()
        && std::iter::once(s.base()).chain(exceptions.values()).all(|r| linear_coefficients(r).is_ok());
    Ok(RuleFile {
        alphabet: alphabet_file(s.alphabet()),
        memory: s.memory().iter().map(|m| m.to_string()).collect(),
        base: TableFile::Table(s.base().table().to_vec()),
        exceptions: exceptions.iter().map(|(g, r)| (g.to_string(), TableFile::Table(r.table().to_vec()))).collect(),
        linear,
    })
}

pub fn config_from_file(group: &GroupModel, a: Alphabet, file: &ConfigFile, context: &str) -> Result<Config> {
    let at = At::root(context);
    let x = match file {
        ConfigFile::Finite { background, exceptions } => {
            let mut sites = Vec::new();
            for (site, &v) in exceptions {
                sites.push((at.key("exceptions").key(site).element(group, site)?, v));
            }
            Config::finite(*background, sites)
        }
        ConfigFile::Periodic { periods, values } => at.wrap(Config::periodic(periods.clone(), values.clone()))?,
    };
    at.wrap(x.check(group, a))?;
    Ok(x)
}

pub fn config_to_file(x: &Config) -> ConfigFile {
    match x {
        Config::Finite { background, exceptions } => ConfigFile::Finite {
            background: *background,
            exceptions: exceptions.iter().map(|(g, &v)| (g.to_string(), v)).collect(),
        },
        Config::Periodic { periods, values } => ConfigFile::Periodic { periods: periods.clone(), values: values.clone() },
    }
}
