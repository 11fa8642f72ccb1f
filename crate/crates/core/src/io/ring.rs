use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::At;
use crate::error::Result;
use crate::group::GroupModel;
use crate::twisted::{Beta, GroupRingElt, PrimeField, Ring, TwistedElement, TwistedMatrix};

/// `{"field": q, "alpha": {element: coeff}, "beta": {site: {element: coeff}}}`.
/// Inside a matrix `field` may be omitted on all but one entry.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<u32>,
    #[serde(default)]
    pub alpha: BTreeMap<String, i64>,
    #[serde(default)]
    pub beta: BTreeMap<String, BTreeMap<String, i64>>,
}

/// Rows of entries, or a single element standing for a `1 x 1` matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixFile {
    Rows(Vec<Vec<ElementFile>>),
    Single(ElementFile),
}

fn gr(at: &At, group: &GroupModel, field: &PrimeField, terms: &BTreeMap<String, i64>) -> Result<GroupRingElt> {
    let mut out = Vec::with_capacity(terms.len());
    for (g, &c) in terms {
        out.push((at.key(g).element(group, g)?, c));
    }
    Ok(GroupRingElt::from_terms(field, out))
}

fn element(at: &At, ring: &Ring, file: &ElementFile) -> Result<TwistedElement> {
    if let Some(q) = file.field {
        if q != ring.field.order() {
            return Err(at.key("field").fail(format!("field {q} differs from F_{}", ring.field.order())));
        }
    }
    let alpha = gr(&at.key("alpha"), &ring.group, &ring.field, &file.alpha)?;
    let mut sites = Vec::new();
    for (site, terms) in &file.beta {
        let at = at.key("beta").key(site);
        sites.push((at.element(&ring.group, site)?, gr(&at, &ring.group, &ring.field, terms)?));
    }
    Ok(TwistedElement::new(alpha, Beta::from_sites(sites)))
}

fn declared_field(at: &At, entries: &[&ElementFile]) -> Result<PrimeField> {
    let q = entries
        .iter()
        .find_map(|e| e.field)
        .ok_or_else(|| at.fail("no entry declares the coefficient field"))?;
    at.wrap(PrimeField::new(q))
}

pub fn element_from_file(group: &GroupModel, file: &ElementFile, context: &str) -> Result<(Ring, TwistedElement)> {
    let at = At::root(context);
    let ring = Ring::new(group.clone(), declared_field(&at, &[file])?);
    let e = element(&at, &ring, file)?;
    Ok((ring, e))
}

/// Reads a matrix; the returned ring uses the declared field.
pub fn matrix_from_file(group: &GroupModel, file: &MatrixFile, context: &str) -> Result<(Ring, TwistedMatrix)> {
    let at = At::root(context);
    let rows = match file {
        MatrixFile::Rows(rows) => rows.clone(),
        MatrixFile::Single(e) => vec![vec![e.clone()]],
    };
    let all: Vec<&ElementFile> = rows.iter().flatten().collect();
    let ring = Ring::new(group.clone(), declared_field(&at, &all)?);
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != rows.len() {
            return Err(at.index(i).fail(format!("row has {} entries, expected {}", row.len(), rows.len())));
        }
        out.push(row.iter().enumerate().map(|(j, e)| element(&at.index(i).index(j), &ring, e)).collect::<Result<Vec<_>>>()?);
    }
    let m = at.wrap(TwistedMatrix::from_rows(out))?;
    Ok((ring, m))
}

fn gr_file(a: &GroupRingElt) -> BTreeMap<String, i64> {
    a.terms().iter().map(|(g, &c)| (g.to_string(), c as i64)).collect()
}

pub fn element_to_file(ring: &Ring, e: &TwistedElement) -> ElementFile {
    ElementFile {
        field: Some(ring.field.order()),
        alpha: gr_file(&e.alpha),
        beta: e.beta.sites().iter().map(|(g, b)| (g.to_string(), gr_file(b))).collect(),
    }
}

pub fn matrix_to_file(ring: &Ring, m: &TwistedMatrix) -> MatrixFile {
    MatrixFile::Rows(m.rows().map(|row| row.iter().map(|e| element_to_file(ring, e)).collect()).collect())
}
