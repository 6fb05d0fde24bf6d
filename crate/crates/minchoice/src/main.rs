use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use minchoice::config::{ExperimentConfig, RuleName, Schedule};
use minchoice::enumerate::enumerate_exact;
use minchoice::experiment::{default_workers, run_trials};
use minchoice::records::{read_csv_file, write_csv, write_csv_file};
use minchoice::summary::{software, summarize};
use minchoice::table::TableJson;
use minchoice::Error;
use minchoice_core::ballsbins::coupled_run_with;
use minchoice_core::theory::RecurrenceTable;
use minchoice_core::{ModelSpec, DEFAULT_KMAX};
use serde::Serialize;

/// Min-choice preferential attachment experiments.
#[derive(Debug, Parser)]
#[command(name = "minchoice", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Grow trees and write checkpoint rows as CSV.
    Simulate(SimulateArgs),
    /// Run the tree and two-choice bins chains on shared randomness and check domination.
    Couple {
        #[arg(long, default_value_t = 100_000)]
        edges: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_KMAX)]
        kmax: usize,
    },
    /// Print the recurrence table for edge count m as JSON.
    Theory {
        #[arg(long, default_value_t = 1e6)]
        m: f64,
        #[arg(long, default_value_t = 16)]
        kmax: usize,
    },
    /// Exact max-degree and threshold laws for a tree with at most 6 edges.
    Enumerate {
        #[arg(long)]
        edges: u64,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Summarize a checkpoint CSV as JSON.
    Summarize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long, value_enum, default_value_t = RuleName::Min)]
    model: RuleName,
    #[arg(long, default_value_t = 2)]
    choices: u32,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Use d(m) = max(1, floor(A ln m)) instead of a fixed d.
    #[arg(long = "dgrow-a")]
    dgrow_a: Option<f64>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// JSON config; command-line flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    model: Option<RuleName>,
    #[arg(long)]
    choices: Option<u32>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long = "dgrow-a")]
    dgrow_a: Option<f64>,
    #[arg(long)]
    edges: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// geometric:R or list:J1,J2,...
    #[arg(long)]
    checkpoints: Option<Schedule>,
    #[arg(long)]
    kmax: Option<usize>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a JSON summary here.
    #[arg(long)]
    summary: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
}

impl SimulateArgs {
    fn resolve(self) -> Result<(ExperimentConfig, usize), Error> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                    path: path.clone(),
                    source,
                })?;
                serde_json::from_str(&text).map_err(|source| Error::Json {
                    context: path.display().to_string(),
                    source,
                })?
            }
            None => ExperimentConfig::default(),
        };
        macro_rules! apply {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field { cfg.$field = v; }
            )*};
        }
        apply!(model, choices, alpha, edges, trials, seed, checkpoints, kmax);
        if self.dgrow_a.is_some() {
            cfg.dgrow_a = self.dgrow_a;
        }
        if self.out.is_some() {
            cfg.out = self.out;
        }
        if self.summary.is_some() {
            cfg.summary = self.summary;
        }
        cfg.validate()?;
        Ok((cfg, self.workers.unwrap_or_else(default_workers)))
    }
}

#[derive(Serialize)]
struct CoupleReport {
    edges: u64,
    seed: u64,
    violations: u64,
    comparisons: u64,
    max_load: u32,
    max_degree: u32,
}

#[derive(Serialize)]
struct EnumerateReport {
    edges: u64,
    model: &'static str,
    max_degree: Vec<(u32, f64)>,
    thresholds: Vec<(Vec<u64>, f64)>,
    outcomes: Vec<minchoice::enumerate::Outcome>,
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value).map_err(|source| Error::Json {
        context: "stdout".into(),
        source,
    })?;
    println!("{text}");
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Error> {
    let io = |source| Error::Io {
        path: path.to_owned(),
        source,
    };
    let file = std::fs::File::create(path).map_err(io)?;
    let mut w = std::io::BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|source| Error::Json {
        context: path.display().to_string(),
        source,
    })?;
    writeln!(w).and_then(|_| w.flush()).map_err(io)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Simulate(args) => {
            let (cfg, workers) = args.resolve()?;
            let records = run_trials(&cfg, workers)?;
            match &cfg.out {
                Some(path) => write_csv_file(path, &records)?,
                None => write_csv(std::io::stdout().lock(), &records).map_err(|source| Error::Csv {
                    path: "<stdout>".into(),
                    source,
                })?,
            }
            if let Some(path) = &cfg.summary {
                #[derive(Serialize)]
                struct WithConfig<'a> {
                    config: &'a ExperimentConfig,
                    #[serde(flatten)]
                    summary: minchoice::summary::Summary,
                }
                let summary = summarize(&records)?;
                write_json(path, &WithConfig { config: &cfg, summary })?;
            }
        }
        Command::Couple { edges, seed, kmax } => {
            let report = coupled_run_with(edges, seed, kmax)?;
            print_json(&CoupleReport {
                edges: report.edges,
                seed,
                violations: 0,
                comparisons: report.comparisons,
                max_load: report.max_load,
                max_degree: report.max_degree,
            })?;
        }
        Command::Theory { m, kmax } => {
            let table = RecurrenceTable::build(m, kmax)?;
            print_json(&TableJson::from(&table))?;
        }
        Command::Enumerate { edges, model } => {
            let mut spec = ModelSpec {
                rule: model.model.into(),
                ..ModelSpec::min_choice(model.choices)
            }
            .with_alpha(model.alpha);
            if let Some(a) = model.dgrow_a {
                spec = spec.with_log_growth(a);
            }
            let law = enumerate_exact(edges, &spec)?;
            print_json(&EnumerateReport {
                edges,
                model: model.model.name(),
                max_degree: law.max_degree_law().into_iter().collect(),
                thresholds: law.threshold_law().into_iter().collect(),
                outcomes: law.outcomes,
            })?;
        }
        Command::Summarize { input, out } => {
            let records = read_csv_file(&input)?;
            let summary = summarize(&records)?;
            match out {
                Some(path) => write_json(&path, &summary)?,
                None => print_json(&summary)?,
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let line = serde_json::json!({
                "error": "usage",
                "message": e.to_string().trim_end(),
                "software": software(),
            });
            eprintln!("{line}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let line = serde_json::json!({
                "error": e.kind(),
                "message": e.to_string(),
                "software": software(),
            });
            eprintln!("{line}");
            ExitCode::FAILURE
        }
    }
}
