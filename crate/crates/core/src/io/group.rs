use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::At;
use crate::error::Result;
use crate::group::{Factor, GroupModel};

/// `{"kind": "Z" | "Z^d" | "free" | "cyclic" | "product", "params": ...,
/// "generators": [...]}`.
///
/// `params` is the rank for `Z^d` and `free`, the order for `cyclic`, and
/// a list of factor descriptors for `product`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
}

fn count(at: &At, params: &Option<Value>) -> Result<u64> {
    params.as_ref().and_then(Value::as_u64).ok_or_else(|| at.key("params").fail("expected a positive integer"))
}

fn factors(at: &At, file: &GroupFile) -> Result<Vec<Factor>> {
    Ok(match file.kind.as_str() {
        "Z" => vec![Factor::Integers],
        "Z^d" => vec![Factor::Integers; count(at, &file.params)? as usize],
        "free" => {
            let rank = count(at, &file.params)?;
            vec![Factor::Free(u32::try_from(rank).map_err(|_| at.key("params").fail("rank too large"))?)]
        }
        "cyclic" => vec![Factor::Cyclic(count(at, &file.params)?)],
        "product" => {
            let list = file.params.as_ref().and_then(Value::as_array).ok_or_else(|| at.key("params").fail("expected a list of factors"))?;
            let mut out = Vec::new();
            for (i, item) in list.iter().enumerate() {
                let at = at.key("params").index(i);
                let sub: GroupFile = serde_json::from_value(item.clone()).map_err(|e| at.fail(e))?;
                if sub.generators.is_some() {
                    return Err(at.key("generators").fail("generators belong to the whole product"));
                }
                out.extend(factors(&at, &sub)?);
            }
            out
        }
        other => return Err(at.key("kind").fail(format!("unknown group kind {other:?}"))),
    })
}

pub fn group_from_file(file: &GroupFile, context: &str) -> Result<GroupModel> {
    let at = At::root(context);
    let group = at.wrap(GroupModel::new(factors(&at, file)?))?;
    match &file.generators {
        None => Ok(group),
        Some(list) => {
            let gens = list
                .iter()
                .enumerate()
                .map(|(i, g)| at.key("generators").index(i).element(&group, g))
                .collect::<Result<Vec<_>>>()?;
            at.key("generators").wrap(group.with_generators(gens))
        }
    }
}

fn factor_file(f: &Factor) -> GroupFile {
    match f {
        Factor::Integers => GroupFile { kind: "Z".into(), params: None, generators: None },
        Factor::Cyclic(n) => GroupFile { kind: "cyclic".into(), params: Some((*n).into()), generators: None },
        Factor::Free(k) => GroupFile { kind: "free".into(), params: Some((*k).into()), generators: None },
    }
}

pub fn group_to_file(group: &GroupModel) -> GroupFile {
    let fs = group.factors();
    let mut file = match fs {
        [f] => factor_file(f),
        _ if !fs.is_empty() && fs.iter().all(|f| *f == Factor::Integers) => {
            GroupFile { kind: "Z^d".into(), params: Some(fs.len().into()), generators: None }
        }
        _ => {
            let list: Vec<Value> = fs.iter().map(|f| serde_json::to_value(factor_file(f)).expect("plain data")).collect();
            GroupFile { kind: "product".into(), params: Some(Value::Array(list)), generators: None }
        }
    };
    if !group.has_default_generators() {
        file.generators = Some(group.generators().iter().map(|g| g.to_string()).collect());
    }
    file
}
