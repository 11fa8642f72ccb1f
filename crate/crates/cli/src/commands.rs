use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use nuca::analysis::{
    check_identity, check_injectivity, check_post_surjectivity, check_pre_injectivity, check_stable_injectivity,
    check_stable_invertibility, check_surjectivity_window, find_inverse, Evidence, Verdict,
};
use nuca::engine::{apply, RuleField};
use nuca::group::GroupModel;
use nuca::io::*;
use nuca::sofic::{counting_experiment, verify_claim, verify_claim_local, LiftedMap, SoficSetup, Target};
use nuca::twisted::{from_lnuca, stable_finiteness_probe, to_lnuca, PrimeField, Ring};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::failure::{consistency, input, Failure};
use crate::options::{AnalyzeArgs, Caps, Check, ClaimArg, RingArgs, SoficArgs, TargetArg};

type Out<T> = Result<T, Failure>;

fn load<T: DeserializeOwned>(path: &Path) -> Out<T> {
    let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    Ok(parse(&text, &path.display().to_string())?)
}

fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report data serializes")
}

fn verdict_value(v: &Verdict) -> Out<Value> {
    Ok(value(&verdict_to_file(v)?))
}

fn millis(start: Instant) -> Value {
    json!((start.elapsed().as_secs_f64() * 1e6).round() / 1e3)
}

/// A finished run: the deterministic part and the timings.
pub struct Report {
    pub command: &'static str,
    pub seed: u64,
    pub caps: Caps,
    pub inputs: Value,
    pub results: Value,
    pub timings: Map<String, Value>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "seed": self.seed,
            "caps": self.caps,
            "inputs": self.inputs,
            "results": self.results,
            "timings_ms": self.timings,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnalyzeInputs {
    pub group: GroupFile,
    pub rule: RuleFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<ConfigFile>,
    pub checks: Vec<Check>,
}

impl AnalyzeInputs {
    pub fn from_args(args: &AnalyzeArgs) -> Out<Self> {
        let mut checks = if args.checks.is_empty() { Check::ALL.to_vec() } else { args.checks.clone() };
        checks.sort();
        checks.dedup();
        Ok(AnalyzeInputs {
            group: load(&args.common.group)?,
            rule: load(&args.rule)?,
            config: args.config.as_deref().map(load).transpose()?,
            checks,
        })
    }

    fn resolve(&self) -> Out<(GroupModel, RuleField)> {
        let group = group_from_file(&self.group, "group")?;
        let s = field_from_file(&group, &self.rule, "rule")?;
        Ok((group, s))
    }
}

pub fn analyze(inputs: AnalyzeInputs, caps: Caps, seed: u64) -> Out<Report> {
    let (group, s) = inputs.resolve()?;
    let mut results = Map::new();
    let mut timings = Map::new();
    for &check in &inputs.checks {
        let start = Instant::now();
        let result = match check {
            Check::Injectivity => verdict_value(&check_injectivity(&group, &s, caps.window_cap, caps.n_cap)?)?,
            Check::StableInjectivity => verdict_value(&check_stable_injectivity(&group, &s, caps.rho, caps.n_cap)?)?,
            Check::StableInvertibility => {
                let v = check_stable_invertibility(&group, &s, caps.rho, caps.n_cap)?;
                if let Some(Evidence::StableInverse { inverse, .. }) = v.evidence() {
                    results.insert("inverse".into(), value(&field_to_file(inverse)?));
                }
                verdict_value(&v)?
            }
            Check::PreInjectivity => verdict_value(&check_pre_injectivity(&group, &s, caps.support_cap)?)?,
            Check::PostSurjectivity => verdict_value(&check_post_surjectivity(&group, &s, caps.e_cap, caps.site_cap)?)?,
            Check::SurjectivityWindow => {
                let window = group.ball_elements(1);
                let image = check_surjectivity_window(&group, &s, &window)?;
                json!({
                    "sites": window.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                    "count": image.count,
                    "total": image.total(),
                    "full": image.full,
                    "missing": image.first_missing(),
                })
            }
        };
        results.insert(check.name().into(), result);
        timings.insert(check.name().into(), millis(start));
    }
    if let Some(c) = &inputs.config {
        let x = config_from_file(&group, s.alphabet(), c, "config")?;
        results.insert("image".into(), value(&config_to_file(&apply(&group, &s, &x)?)));
    }
    Ok(Report { command: "analyze", seed, caps, inputs: value(&inputs), results: Value::Object(results), timings })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SoficInputs {
    pub group: GroupFile,
    pub rule: RuleFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<RuleFile>,
    pub graph: GraphFile,
    pub radius: Option<usize>,
    pub target: TargetArg,
    pub claim: ClaimArg,
}

impl SoficInputs {
    pub fn from_args(args: &SoficArgs) -> Out<Self> {
        Ok(SoficInputs {
            group: load(&args.common.group)?,
            rule: load(&args.rule)?,
            inverse: args.inverse.as_deref().map(load).transpose()?,
            graph: load(&args.graph)?,
            radius: args.radius,
            target: args.target,
            claim: args.claim,
        })
    }
}

pub fn sofic(inputs: SoficInputs, caps: Caps, seed: u64) -> Out<Report> {
    let start = Instant::now();
    let group = group_from_file(&inputs.group, "group")?;
    let s = field_from_file(&group, &inputs.rule, "rule")?;
    let graph = graph_from_file(&group, &inputs.graph, "graph")?;
    let (t, inverse_source) = match &inputs.inverse {
        Some(f) => (Some(field_from_file(&group, f, "inverse")?), "given"),
        None => match find_inverse(&group, &s, caps.n_cap)? {
            Some(cert) => (Some(cert.inverse), "found"),
            None => (None, "none"),
        },
    };
    let reach = |f: &RuleField| f.memory().iter().map(|m| group.word_length(m)).max().unwrap_or(0);
    let r = inputs.radius.unwrap_or_else(|| reach(&s).max(t.as_ref().map_or(0, reach)).max(1));
    let setup = SoficSetup::new(graph, group.clone(), r)?;
    let mut results = Map::new();
    results.insert(
        "setup".into(),
        json!({
            "vertices": setup.graph.vertex_count(),
            "r": setup.r,
            "big_r": setup.big_r,
            "v_r": setup.v_r.len(),
            "v_big": setup.v_big.len(),
            "v_2big": setup.v_2big.len(),
            "v_3big": setup.v_3big.len(),
            "centers": setup.packing.centers,
        }),
    );
    results.insert("interior_empty".into(), json!(setup.v_3big.is_empty()));
    results.insert("inverse_source".into(), json!(inverse_source));
    if setup.v_3big.is_empty() {
        let mut timings = Map::new();
        timings.insert("total".into(), millis(start));
        return Ok(Report { command: "sofic", seed, caps, inputs: value(&inputs), results: Value::Object(results), timings });
    }
    if let (Some(t), false) = (&t, inputs.claim == ClaimArg::Skip) {
        let phi = LiftedMap::phi(&setup, &s, false)?;
        let psi = LiftedMap::psi(&setup, t)?;
        let mut claims = Vec::new();
        if matches!(inputs.claim, ClaimArg::Local | ClaimArg::Both) {
            claims.push(verify_claim_local(&phi, &psi)?);
        }
        if matches!(inputs.claim, ClaimArg::Sampled | ClaimArg::Both) {
            claims.push(verify_claim(&phi, &psi, seed)?);
        }
        let inverse_proven = check_identity(&group, t, &s)?.proven();
        let inside = setup.exceptions_inside(&s) && setup.exceptions_inside(t);
        results.insert("inverse_proven".into(), json!(inverse_proven));
        results.insert("exceptions_inside".into(), json!(inside));
        if inverse_proven && inside && claims.iter().any(|c| !c.passed) {
            return Err(consistency("a proven left inverse fails the lifted composition claim"));
        }
        results.insert("claim".into(), value(&claims));
    }
    let target = match inputs.target {
        TargetArg::V2r => Target::V2R,
        TargetArg::V3r => Target::V3R,
    };
    let counting = match counting_experiment(&setup, &s, target) {
        Ok(report) => value(&report),
        Err(e @ nuca::Error::TooLarge { .. }) => json!({ "skipped": e.to_string() }),
        Err(e) => return Err(e.into()),
    };
    results.insert("counting".into(), counting);
    let mut timings = Map::new();
    timings.insert("total".into(), millis(start));
    Ok(Report { command: "sofic", seed, caps, inputs: value(&inputs), results: Value::Object(results), timings })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RingInputs {
    pub group: GroupFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<MatrixFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<MatrixFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<RuleFile>,
}

impl RingInputs {
    pub fn from_args(args: &RingArgs) -> Out<Self> {
        Ok(RingInputs {
            group: load(&args.common.group)?,
            a: args.a.as_deref().map(load).transpose()?,
            b: args.b.as_deref().map(load).transpose()?,
            rule: args.rule.as_deref().map(load).transpose()?,
        })
    }
}

pub fn ring(inputs: RingInputs, caps: Caps, seed: u64) -> Out<Report> {
    let start = Instant::now();
    let group = group_from_file(&inputs.group, "group")?;
    let mut results = Map::new();
    match (&inputs.a, &inputs.b, &inputs.rule) {
        (Some(a), Some(b), _) => {
            let (ring, a) = matrix_from_file(&group, a, "a")?;
            let (ring_b, b) = matrix_from_file(&group, b, "b")?;
            if ring != ring_b {
                return Err(input("matrices A and B use different coefficient fields"));
            }
            let report = stable_finiteness_probe(&ring, &a, &b)?;
            results.insert("probe".into(), value(&report));
            if let Some(v) = &report.backward {
                results.insert("backward".into(), verdict_value(v)?);
            }
        }
        (Some(a), None, _) => {
            let (ring, a) = matrix_from_file(&group, a, "a")?;
            results.insert("field".into(), value(&field_to_file(&to_lnuca(&ring, &a)?)?));
        }
        (None, None, Some(rule)) => {
            let s = field_from_file(&group, rule, "rule")?;
            let (q, _) = s.alphabet().vector_structure().ok_or_else(|| input("rule: alphabet is not a vector space"))?;
            let ring = Ring::new(group.clone(), PrimeField::new(q)?);
            results.insert("matrix".into(), value(&matrix_to_file(&ring, &from_lnuca(&ring, &s)?)));
        }
        _ => return Err(input("ring needs --a and --b, --a alone, or --rule")),
    }
    let mut timings = Map::new();
    timings.insert("total".into(), millis(start));
    Ok(Report { command: "ring", seed, caps, inputs: value(&inputs), results: Value::Object(results), timings })
}

/// Re-validates a report. Witnesses and inverses are checked from scratch;
/// experiments are re-run and must reproduce the recorded results.
pub fn recheck(report: &Value) -> Out<Value> {
    let field = |k: &str| report.get(k).ok_or_else(|| input(format!("report: missing {k}")));
    let command = field("command")?.as_str().ok_or_else(|| input("report: command is not a string"))?;
    let caps: Caps = serde_json::from_value(field("caps")?.clone()).map_err(|e| input(format!("report caps: {e}")))?;
    let seed = field("seed")?.as_u64().ok_or_else(|| input("report: seed is not an integer"))?;
    let inputs = field("inputs")?.clone();
    let results = field("results")?;
    let decode = |e: serde_json::Error| input(format!("report inputs: {e}"));
    let mut checks = BTreeMap::new();
    match command {
        "analyze" => {
            let inputs: AnalyzeInputs = serde_json::from_value(inputs).map_err(decode)?;
            let (group, s) = inputs.resolve()?;
            let verdicts = results.as_object().ok_or_else(|| input("report: results is not an object"))?;
            for (name, v) in verdicts {
                if v.get("status").is_none() {
                    continue;
                }
                let file: VerdictFile = serde_json::from_value(v.clone()).map_err(|e| input(format!("results.{name}: {e}")))?;
                let verdict = verdict_from_file(&group, s.alphabet(), &file, name)?;
                let valid = match (verdict.witness(), verdict.evidence()) {
                    (Some(w), _) => Some(w.recheck(&group, &s, None)?),
                    (_, Some(Evidence::Inverse(cert))) => Some(check_identity(&group, &cert.inverse, &s)?.proven()),
                    (_, Some(Evidence::StableInverse { inverse, .. })) => Some(
                        check_identity(&group, inverse, &s)?.proven() && check_identity(&group, &s, inverse)?.proven(),
                    ),
                    _ => None,
                };
                checks.insert(name.clone(), json!({ "status": file.status, "valid": valid }));
            }
        }
        "sofic" | "ring" => {
            let again = if command == "sofic" {
                sofic(serde_json::from_value(inputs).map_err(decode)?, caps, seed)?
            } else {
                ring(serde_json::from_value(inputs).map_err(decode)?, caps, seed)?
            };
            checks.insert("reproduced".into(), json!({ "valid": again.results == *results }));
        }
        other => return Err(input(format!("report: unknown command {other:?}"))),
    }
    let all_valid = checks.values().all(|c| c["valid"] != json!(false));
    let summary = json!({ "command": "recheck", "source": command, "checks": checks, "all_valid": all_valid });
    if !all_valid {
        return Err(consistency(format!("recheck failed: {summary}")));
    }
    Ok(summary)
}
