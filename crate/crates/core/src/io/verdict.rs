use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::field::{config_from_file, config_to_file, field_from_file, field_to_file, ConfigFile, RuleFile};
use super::At;
use crate::analysis::{Evidence, InverseCertificate, OrbitMember, Status, Verdict, Witness};
use crate::engine::Alphabet;
use crate::error::Result;
use crate::group::GroupModel;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MemberFile {
    Limit,
    Translate(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WitnessFile {
    IdentityFailure { site: String, config: ConfigFile },
    Collision { x: ConfigFile, y: ConfigFile },
    Uncorrectable { x: ConfigFile, site: String, y: ConfigFile, window: usize },
    InOrbit { member: MemberFile, inner: Box<WitnessFile> },
    LeftInverseOnly { inverse: RuleFile, failure: Box<WitnessFile> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EvidenceFile {
    Identity { sites: Vec<String>, generic: bool },
    Inverse { inverse: RuleFile, radius: usize, sites: Vec<String> },
    Orbit { members: usize },
    StableInverse { inverse: RuleFile, matches: Vec<usize> },
    Correction { radius: usize },
}

/// `{"status": ..., "witness" | "evidence" | "reason": ..., "caps": ..., "checked": ...}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictFile {
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<EvidenceFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default)]
    pub caps: BTreeMap<String, u64>,
    #[serde(default)]
    pub checked: BTreeMap<String, u64>,
}

pub fn witness_to_file(w: &Witness) -> Result<WitnessFile> {
    Ok(match w {
        Witness::IdentityFailure { site, config } => {
            WitnessFile::IdentityFailure { site: site.to_string(), config: config_to_file(config) }
        }
        Witness::Collision { x, y } => WitnessFile::Collision { x: config_to_file(x), y: config_to_file(y) },
        Witness::Uncorrectable { x, site, y, window } => WitnessFile::Uncorrectable {
            x: config_to_file(x),
            site: site.to_string(),
            y: config_to_file(y),
            window: *window,
        },
        Witness::InOrbit { member, inner } => WitnessFile::InOrbit {
            member: match member {
                OrbitMember::Limit => MemberFile::Limit,
                OrbitMember::Translate(g) => MemberFile::Translate(g.to_string()),
            },
            inner: Box::new(witness_to_file(inner)?),
        },
        Witness::LeftInverseOnly { inverse, failure } => {
            WitnessFile::LeftInverseOnly { inverse: field_to_file(inverse)?, failure: Box::new(witness_to_file(failure)?) }
        }
    })
}

fn witness_at(at: &At, group: &GroupModel, a: Alphabet, file: &WitnessFile) -> Result<Witness> {
    let config = |key: &str, c: &ConfigFile| -> Result<_> { at.key(key).wrap(config_from_file(group, a, c, "config")) };
    Ok(match file {
        WitnessFile::IdentityFailure { site, config: c } => {
            Witness::IdentityFailure { site: at.key("site").element(group, site)?, config: config("config", c)? }
        }
        WitnessFile::Collision { x, y } => Witness::Collision { x: config("x", x)?, y: config("y", y)? },
        WitnessFile::Uncorrectable { x, site, y, window } => Witness::Uncorrectable {
            x: config("x", x)?,
            site: at.key("site").element(group, site)?,
            y: config("y", y)?,
            window: *window,
        },
        WitnessFile::InOrbit { member, inner } => Witness::InOrbit {
            member: match member {
                MemberFile::Limit => OrbitMember::Limit,
                MemberFile::Translate(g) => OrbitMember::Translate(at.key("member").element(group, g)?),
            },
            inner: Box::new(witness_at(&at.key("inner"), group, a, inner)?),
        },
        WitnessFile::LeftInverseOnly { inverse, failure } => Witness::LeftInverseOnly {
            inverse: at.key("inverse").wrap(field_from_file(group, inverse, "inverse"))?,
            failure: Box::new(witness_at(&at.key("failure"), group, a, failure)?),
        },
    })
}

/// Reads a witness for a field over the alphabet `a`.
pub fn witness_from_file(group: &GroupModel, a: Alphabet, file: &WitnessFile, context: &str) -> Result<Witness> {
    witness_at(&At::root(context), group, a, file)
}

fn evidence_to_file(e: &Evidence) -> Result<EvidenceFile> {
    let names = |v: &[crate::group::GroupElement]| v.iter().map(|g| g.to_string()).collect();
    Ok(match e {
        Evidence::Identity { sites, generic } => EvidenceFile::Identity { sites: names(sites), generic: *generic },
        Evidence::Inverse(c) => {
            EvidenceFile::Inverse { inverse: field_to_file(&c.inverse)?, radius: c.radius, sites: names(&c.sites) }
        }
        Evidence::Orbit { members } => EvidenceFile::Orbit { members: *members },
        Evidence::StableInverse { inverse, matches } => {
            EvidenceFile::StableInverse { inverse: field_to_file(inverse)?, matches: matches.clone() }
        }
        Evidence::Correction { radius } => EvidenceFile::Correction { radius: *radius },
    })
}

fn evidence_from_file(at: &At, group: &GroupModel, file: &EvidenceFile) -> Result<Evidence> {
    let elements = |key: &str, v: &[String]| -> Result<Vec<_>> {
        v.iter().enumerate().map(|(i, g)| at.key(key).index(i).element(group, g)).collect()
    };
    Ok(match file {
        EvidenceFile::Identity { sites, generic } => Evidence::Identity { sites: elements("sites", sites)?, generic: *generic },
        EvidenceFile::Inverse { inverse, radius, sites } => Evidence::Inverse(Box::new(InverseCertificate {
            inverse: at.key("inverse").wrap(field_from_file(group, inverse, "inverse"))?,
            radius: *radius,
            sites: elements("sites", sites)?,
        })),
        EvidenceFile::Orbit { members } => Evidence::Orbit { members: *members },
        EvidenceFile::StableInverse { inverse, matches } => Evidence::StableInverse {
            inverse: at.key("inverse").wrap(field_from_file(group, inverse, "inverse"))?,
            matches: matches.clone(),
        },
        EvidenceFile::Correction { radius } => Evidence::Correction { radius: *radius },
    })
}

pub fn verdict_to_file(v: &Verdict) -> Result<VerdictFile> {
    let mut file = VerdictFile {
        status: v.status_name().to_string(),
        evidence: None,
        witness: None,
        reason: None,
        caps: v.caps.clone(),
        checked: v.checked.clone(),
    };
    match &v.status {
        Status::Proven(e) => file.evidence = Some(evidence_to_file(e)?),
        Status::Refuted(w) => file.witness = Some(witness_to_file(w)?),
        Status::Unknown(r) => file.reason = Some(r.clone()),
    }
    Ok(file)
}

pub fn verdict_from_file(group: &GroupModel, a: Alphabet, file: &VerdictFile, context: &str) -> Result<Verdict> {
    let at = At::root(context);
    let status = match (file.status.as_str(), &file.evidence, &file.witness) {
        ("proven", Some(e), _) => Status::Proven(evidence_from_file(&at.key("evidence"), group, e)?),
        ("refuted", _, Some(w)) => Status::Refuted(witness_at(&at.key("witness"), group, a, w)?),
        ("unknown", _, _) => Status::Unknown(file.reason.clone().unwrap_or_default()),
        ("proven", None, _) => return Err(at.key("evidence").fail("a proven verdict needs evidence")),
        ("refuted", _, None) => return Err(at.key("witness").fail("a refuted verdict needs a witness")),
        (other, _, _) => return Err(at.key("status").fail(format!("unknown status {other:?}"))),
    };
    let mut v = Verdict::new(status);
    v.caps = file.caps.clone();
    v.checked = file.checked.clone();
    Ok(v)
}
