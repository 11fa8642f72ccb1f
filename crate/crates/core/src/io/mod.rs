//! JSON formats for groups, rule fields, configurations, labeled graphs,
//! ring elements and verdicts.
//!
//! Each format has a plain serde document type (`*File`) and conversions
//! that need the group to resolve element strings. Errors carry the path
//! of the offending field.

mod field;
mod graph;
mod group;
mod ring;
mod verdict;

use serde::de::DeserializeOwned;
use serde::Serialize;

pub use field::{config_from_file, config_to_file, field_from_file, field_to_file, AlphabetFile, ConfigFile, RuleFile, TableFile};
pub use graph::{graph_from_file, graph_to_file, GraphFile};
pub use group::{group_from_file, group_to_file, GroupFile};
pub use ring::{element_from_file, element_to_file, matrix_from_file, matrix_to_file, ElementFile, MatrixFile};
pub use verdict::{verdict_from_file, verdict_to_file, witness_from_file, witness_to_file, EvidenceFile, MemberFile, VerdictFile, WitnessFile};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel};

/// Parses a document, reporting the failing field path and position.
pub fn parse<T: DeserializeOwned>(text: &str, context: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| Error::Input {
        context: context.to_string(),
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    de.end().map_err(|e| Error::Input { context: context.to_string(), path: ".".into(), message: e.to_string() })?;
    Ok(value)
}

/// Serializes with two-space indentation.
pub fn to_pretty<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|source| Error::Json { context: "serializing a report".into(), source })
}

/// Location of a semantic error inside a document.
#[derive(Clone, Debug)]
pub(crate) struct At<'a> {
    context: &'a str,
    path: String,
}

impl<'a> At<'a> {
    pub(crate) fn root(context: &'a str) -> Self {
        At { context, path: String::new() }
    }

    pub(crate) fn key(&self, k: &str) -> Self {
        let path = if self.path.is_empty() { k.to_string() } else { format!("{}.{k}", self.path) };
        At { context: self.context, path }
    }

    pub(crate) fn index(&self, i: usize) -> Self {
        At { context: self.context, path: format!("{}[{i}]", self.path) }
    }

    pub(crate) fn fail(&self, message: impl std::fmt::Display) -> Error {
        let path = if self.path.is_empty() { ".".to_string() } else { self.path.clone() };
        Error::Input { context: self.context.to_string(), path, message: message.to_string() }
    }

    /// Re-locates an error raised by the library at this path.
    pub(crate) fn wrap<T>(&self, r: Result<T>) -> Result<T> {
        r.map_err(|e| match e {
            e @ Error::Input { .. } => e,
            e => self.fail(e),
        })
    }

    pub(crate) fn element(&self, group: &GroupModel, text: &str) -> Result<GroupElement> {
        self.wrap(group.parse_element(text))
    }
}
