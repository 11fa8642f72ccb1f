mod commands;
mod failure;
mod options;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde_json::Value;

use commands::{AnalyzeInputs, RingInputs, SoficInputs};
use failure::{input, Failure};
use options::{Caps, Cli, Command, Format, Manifest};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

struct Output {
    out: Option<String>,
    format: Format,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut jobs = cli.jobs;
    let mut output = Output { out: cli.out.map(|p| p.display().to_string()), format: cli.format };
    if let Some(path) = &cli.recheck {
        if cli.command.is_some() {
            return Err(input("--recheck takes no subcommand"));
        }
        set_jobs(jobs)?;
        let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
        let report: Value = nuca::io::parse(&text, &path.display().to_string())?;
        return emit(&commands::recheck(&report)?, &output);
    }
    let mut command = cli.command.ok_or_else(|| input("nothing to do: give a subcommand or --recheck"))?;
    if let Command::Run { manifest } = command {
        let text = std::fs::read_to_string(&manifest).map_err(|e| input(format!("{}: {e}", manifest.display())))?;
        let m: Manifest = nuca::io::parse(&text, &manifest.display().to_string())?;
        let (c, extra) = m.into_command(manifest.parent().unwrap_or(Path::new(".")))?;
        // command-line values win over the manifest
        if output.out.is_none() {
            output.out = extra.get("out").cloned();
        }
        if output.format == Format::Json && extra.get("format").map(String::as_str) == Some("csv") {
            output.format = Format::Csv;
        }
        if jobs == 1 {
            if let Some(j) = extra.get("jobs") {
                jobs = j.parse().map_err(|_| input("manifest: jobs must be a positive integer"))?;
            }
        }
        command = c;
    }
    set_jobs(jobs)?;
    let report = match command {
        Command::Analyze(args) => {
            let caps = Caps::parse(&args.common.caps)?;
            commands::analyze(AnalyzeInputs::from_args(&args)?, caps, args.common.seed)?
        }
        Command::Sofic(args) => {
            let caps = Caps::parse(&args.common.caps)?;
            commands::sofic(SoficInputs::from_args(&args)?, caps, args.common.seed)?
        }
        Command::Ring(args) => {
            let caps = Caps::parse(&args.common.caps)?;
            commands::ring(RingInputs::from_args(&args)?, caps, args.common.seed)?
        }
        Command::Run { .. } => return Err(input("manifests cannot nest")),
    };
    emit(&report.to_json(), &output)
}

fn set_jobs(jobs: usize) -> Result<(), Failure> {
    if jobs == 0 {
        return Err(input("--jobs must be positive"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global()
        .map_err(|e| input(format!("thread pool: {e}")))
}

fn emit(report: &Value, output: &Output) -> Result<(), Failure> {
    let bytes = match output.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => csv_rows(report)?,
    };
    let written = match &output.out {
        Some(path) => std::fs::write(path, &bytes).map_err(|e| format!("{path}: {e}")),
        None => std::io::stdout().write_all(&bytes).map_err(|e| e.to_string()),
    };
    written.map_err(input)
}

/// One `path,value` row per scalar leaf; the embedded inputs are left out.
fn csv_rows(report: &Value) -> Result<Vec<u8>, Failure> {
    fn walk(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
        let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(m) => m.iter().for_each(|(k, v)| walk(&join(k), v, rows)),
            Value::Array(a) => a.iter().enumerate().for_each(|(i, v)| walk(&format!("{prefix}[{i}]"), v, rows)),
            Value::String(s) => rows.push((prefix.to_string(), s.clone())),
            other => rows.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut rows = Vec::new();
    if let Value::Object(m) = report {
        for (k, v) in m.iter().filter(|(k, _)| k.as_str() != "inputs") {
            walk(k, v, &mut rows);
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| input(format!("csv: {e}"));
    w.write_record(["path", "value"]).map_err(fail)?;
    for (p, v) in rows {
        w.write_record([p, v]).map_err(fail)?;
    }
    w.into_inner().map_err(|e| input(format!("csv: {e}")))
}
