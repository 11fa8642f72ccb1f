use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::failure::{input, Failure};

#[derive(Parser, Debug)]
#[command(name = "nuca", version, about = "Batch analyses of non-uniform cellular automata")]
pub struct Cli {
    /// Re-validate every witness (or re-run the experiment) in a report.
    #[arg(long, value_name = "REPORT")]
    pub recheck: Option<PathBuf>,
    /// Worker threads for parallel searches.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decision procedures on one rule field.
    Analyze(AnalyzeArgs),
    /// Lifting and counting on a finite labeled graph.
    Sofic(SoficArgs),
    /// Matrices over the twisted group ring and their linear fields.
    Ring(RingArgs),
    /// Run the command described by a manifest file.
    Run { manifest: PathBuf },
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Group descriptor file.
    #[arg(long)]
    pub group: PathBuf,
    /// `key=value,...`, inline JSON, or a JSON file.
    #[arg(long, default_value = "")]
    pub caps: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub rule: PathBuf,
    /// A configuration to push through the global map.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Comma-separated subset of the checks; all by default.
    #[arg(long, value_delimiter = ',')]
    pub checks: Vec<Check>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Check {
    Injectivity,
    StableInjectivity,
    StableInvertibility,
    PreInjectivity,
    PostSurjectivity,
    SurjectivityWindow,
}

impl Check {
    pub const ALL: [Check; 6] = [
        Check::Injectivity,
        Check::StableInjectivity,
        Check::StableInvertibility,
        Check::PreInjectivity,
        Check::PostSurjectivity,
        Check::SurjectivityWindow,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Injectivity => "injectivity",
            Check::StableInjectivity => "stable_injectivity",
            Check::StableInvertibility => "stable_invertibility",
            Check::PreInjectivity => "pre_injectivity",
            Check::PostSurjectivity => "post_surjectivity",
            Check::SurjectivityWindow => "surjectivity_window",
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct SoficArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub rule: PathBuf,
    /// A left inverse of the rule; searched for when absent.
    #[arg(long)]
    pub inverse: Option<PathBuf>,
    #[arg(long)]
    pub graph: PathBuf,
    /// Memory radius `r`; defaults to the largest memory element length.
    #[arg(long)]
    pub radius: Option<usize>,
    #[arg(long, value_enum, default_value_t = TargetArg::V2r)]
    pub target: TargetArg,
    #[arg(long, value_enum, default_value_t = ClaimArg::Local)]
    pub claim: ClaimArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetArg {
    V2r,
    V3r,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimArg {
    /// Exact, target by target.
    Local,
    /// Exhaustive when small, seeded samples otherwise.
    Sampled,
    Both,
    Skip,
}

#[derive(Args, Debug, Clone)]
pub struct RingArgs {
    #[command(flatten)]
    pub common: Common,
    /// Matrix `A`.
    #[arg(long)]
    pub a: Option<PathBuf>,
    /// Matrix `B` with `AB = 1`; with `A`, runs the finiteness probe.
    #[arg(long)]
    pub b: Option<PathBuf>,
    /// A linear rule field to convert into a matrix.
    #[arg(long)]
    pub rule: Option<PathBuf>,
}

/// Search caps. Every cap must be positive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    pub window_cap: usize,
    pub n_cap: usize,
    pub rho: usize,
    pub support_cap: usize,
    pub site_cap: usize,
    pub e_cap: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { window_cap: 4, n_cap: 3, rho: 4, support_cap: 4, site_cap: 8, e_cap: 3 }
    }
}

impl Caps {
    pub fn parse(spec: &str) -> Result<Caps, Failure> {
        let spec = spec.trim();
        let caps = if spec.is_empty() {
            Caps::default()
        } else if spec.starts_with('{') {
            serde_json::from_str(spec).map_err(|e| input(format!("--caps: {e}")))?
        } else if Path::new(spec).is_file() {
            let text = std::fs::read_to_string(spec).map_err(|e| input(format!("{spec}: {e}")))?;
            nuca::io::parse(&text, spec)?
        } else {
            let mut map = serde_json::Map::new();
            for item in spec.split(',') {
                let (k, v) = item.split_once('=').ok_or_else(|| input(format!("--caps: expected key=value, got {item:?}")))?;
                let v: u64 = v.trim().parse().map_err(|_| input(format!("--caps: {k} needs a nonnegative integer")))?;
                map.insert(k.trim().to_string(), v.into());
            }
            serde_json::from_value(map.into()).map_err(|e| input(format!("--caps: {e}")))?
        };
        caps.validate()?;
        Ok(caps)
    }

    pub fn validate(&self) -> Result<(), Failure> {
        let all = [
            ("window_cap", self.window_cap),
            ("n_cap", self.n_cap),
            ("rho", self.rho),
            ("support_cap", self.support_cap),
            ("site_cap", self.site_cap),
            ("e_cap", self.e_cap),
        ];
        match all.iter().find(|(_, v)| *v == 0) {
            Some((k, _)) => Err(input(format!("cap {k} must be positive"))),
            None => Ok(()),
        }
    }
}

/// A complete run described in one file. Paths are relative to the file.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub command: String,
    pub group: PathBuf,
    #[serde(default)]
    pub caps: Caps,
    #[serde(default)]
    pub seed: u64,
    pub rule: Option<PathBuf>,
    pub config: Option<PathBuf>,
    #[serde(default)]
    pub checks: Vec<Check>,
    pub inverse: Option<PathBuf>,
    pub graph: Option<PathBuf>,
    pub radius: Option<usize>,
    pub target: Option<TargetArg>,
    pub claim: Option<ClaimArg>,
    pub a: Option<PathBuf>,
    pub b: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub jobs: Option<usize>,
}

impl Manifest {
    /// Resolves the manifest into a command; `out`, `format` and `jobs`
    /// from the file apply unless given on the command line.
    pub fn into_command(self, base: &Path) -> Result<(Command, BTreeMap<&'static str, String>), Failure> {
        let path = |p: PathBuf| if p.is_absolute() { p } else { base.join(p) };
        let caps = serde_json::to_string(&self.caps).expect("plain data");
        let common = Common { group: path(self.group), caps, seed: self.seed };
        let need = |p: Option<PathBuf>, what: &str| p.map(path).ok_or_else(|| input(format!("manifest: {what} is required")));
        let command = match self.command.as_str() {
            "analyze" => Command::Analyze(AnalyzeArgs {
                common,
                rule: need(self.rule, "rule")?,
                config: self.config.map(path),
                checks: self.checks,
            }),
            "sofic" => Command::Sofic(SoficArgs {
                common,
                rule: need(self.rule, "rule")?,
                inverse: self.inverse.map(path),
                graph: need(self.graph, "graph")?,
                radius: self.radius,
                target: self.target.unwrap_or(TargetArg::V2r),
                claim: self.claim.unwrap_or(ClaimArg::Local),
            }),
            "ring" => Command::Ring(RingArgs { common, a: self.a.map(path), b: self.b.map(path), rule: self.rule.map(path) }),
            other => return Err(input(format!("manifest: unknown command {other:?}"))),
        };
        let mut extra = BTreeMap::new();
        if let Some(out) = self.out {
            extra.insert("out", path(out).display().to_string());
        }
        if let Some(f) = self.format {
            extra.insert("format", if f == Format::Csv { "csv" } else { "json" }.to_string());
        }
        if let Some(j) = self.jobs {
            extra.insert("jobs", j.to_string());
        }
        Ok((command, extra))
    }
}
