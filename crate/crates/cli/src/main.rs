use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use quncert_cli::report::RunReport;
use quncert_cli::scenario::{FamilySource, Scenario, SearchSpec, SimpleSource};
use quncert_cli::{CliError, runner, search};
use quncert_core::relations::RelationId;

/// Measurement uncertainty checks: noise/disturbance metrics, inequality
/// verification, unitary dilation audits, and randomized margin searches.
#[derive(Parser)]
#[command(name = "quncert", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks (and optional search) of a scenario file
    Check {
        /// Scenario JSON file
        #[arg(long)]
        scenario: PathBuf,
        /// Report JSON output path
        #[arg(long)]
        out: PathBuf,
        /// Evaluate search samples on a single thread
        #[arg(long)]
        serial: bool,
    },
    /// Randomized minimum-margin search for one relation
    Search {
        /// Relation id (wire token, e.g. universal, heisenberg_nd, thm8)
        #[arg(long)]
        relation: String,
        /// Hilbert-space dimension to sample in
        #[arg(long)]
        dim: usize,
        /// Number of sampled tuples
        #[arg(long)]
        samples: u64,
        /// Master seed; the sample set is a pure function of it
        #[arg(long)]
        seed: u64,
        /// Report JSON output path
        #[arg(long)]
        out: PathBuf,
        /// Family generator
        #[arg(long, value_enum, default_value_t = SourceArg::Random)]
        family_source: SourceArg,
        /// Evaluate samples on a single thread
        #[arg(long)]
        serial: bool,
    },
    /// Emit the unitary ancilla model realizing a named family
    Dilate {
        /// Scenario JSON file declaring the family
        #[arg(long)]
        scenario: PathBuf,
        /// Name of the family object to dilate
        #[arg(long)]
        family: String,
        /// Output path for the serialized measuring process
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceArg {
    Random,
    ProjectiveRandom,
}

impl From<SourceArg> for FamilySource {
    fn from(s: SourceArg) -> Self {
        match s {
            SourceArg::Random => FamilySource::Simple(SimpleSource::Random),
            SourceArg::ProjectiveRandom => FamilySource::Simple(SimpleSource::ProjectiveRandom),
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Check {
            scenario,
            out,
            serial,
        } => {
            let report = runner::run_scenario(&scenario, !serial)?.stamped();
            print_summary(&report);
            write_json(&out, &report)?;
            Ok(exit_for(&report))
        }
        Command::Search {
            relation,
            dim,
            samples,
            seed,
            out,
            family_source,
            serial,
        } => {
            let relation = parse_relation(&relation)?;
            let spec = SearchSpec {
                relation,
                dim,
                samples,
                seed,
                family_source: family_source.into(),
            };
            let record = search::search_min_margin(&spec, None, !serial)?;
            let report = RunReport::new(Vec::new(), Some(record)).stamped();
            print_summary(&report);
            write_json(&out, &report)?;
            Ok(exit_for(&report))
        }
        Command::Dilate {
            scenario,
            family,
            out,
        } => {
            let parsed = Scenario::load(&scenario)?;
            let report = runner::dilate_named_family(&parsed, &family)?;
            println!(
                "dilated '{}': system dim {}, ancilla dim {}, realization residual {}",
                report.family, report.system_dim, report.ancilla_dim, report.residual_display
            );
            write_json(&out, &report)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_relation(token: &str) -> Result<RelationId, CliError> {
    serde_json::from_value(serde_json::Value::String(token.to_string())).map_err(|_| {
        CliError::Schema {
            location: "--relation".into(),
            message: format!("unknown relation id '{token}'"),
        }
    })
}

fn write_json<T: serde::Serialize>(path: &PathBuf, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Parse(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn print_summary(report: &RunReport) {
    for (i, check) in report.checks.iter().enumerate() {
        let verdict = if !check.report.applicable {
            "NOT-APPLICABLE"
        } else if check.report.pass {
            "PASS"
        } else if check.report.relation_id.guaranteed() {
            "FAIL (defect)"
        } else {
            "FAIL (finding)"
        };
        println!(
            "[check {i}] {}({}) -> {verdict} margin={}",
            check.report.relation_id.wire_name(),
            check.args.join(", "),
            check.margin_display
        );
    }
    if let Some(s) = &report.search {
        println!(
            "[search] {} dim={} samples={} seed={} -> min_margin={} violations={}",
            s.relation.wire_name(),
            s.dim,
            s.samples,
            s.seed,
            s.min_margin_display,
            s.violation_count
        );
    }
}

fn exit_for(report: &RunReport) -> ExitCode {
    if report.guaranteed_all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
