//! `curveops`: run verification scenarios, export curve operators, extract
//! ψ-symbols and evaluate character-variety representations.
//!
//! Exit status: 0 when every check passes, 1 when any check fails, 2 for
//! usage or configuration errors.  The worker-thread count is read from
//! `CURVEOPS_THREADS`.

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use curveops::charvar::{CharVarModel, Observable};
use curveops::curves::{curve_word, parse_curve};
use curveops::fusion::{assemble_operator, OperatorContext};
use curveops::harness::{
    configure_threads, emit_outputs, level_feasible, run_scenario, write_convergence, Scenario, EXIT_USAGE,
};
use curveops::surface::TestSurface;
use curveops::symbol::{extrapolate_with, default_degree, SymbolSampler};
use serde_json::json;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "curveops", version, about = "SU(2) curve operators and their semiclassical symbols")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a scenario file and print one summary line per suite.
    Run {
        /// Scenario JSON.
        scenario: PathBuf,
        /// Seed of the randomized suites (overrides the scenario).
        #[arg(long)]
        seed: Option<u64>,
        /// Write the JSON report here (overrides the scenario).
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write the CSV report here (overrides the scenario).
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the convergence tables here (overrides the scenario).
        #[arg(long)]
        convergence: Option<PathBuf>,
        /// Print every check, not only the per-suite summary.
        #[arg(long)]
        verbose: bool,
    },
    /// Assemble the operator of a library curve at one level.
    Operator {
        /// Test surface: torus, sphere4 or genus2.
        #[arg(long)]
        surface: TestSurface,
        /// Curve identifier, e.g. `D_e1`, `tw1(D_e)`, `2*C_e`, `C_e1+D_e2`.
        #[arg(long)]
        curve: String,
        /// Level r.
        #[arg(long)]
        level: u32,
        /// Output file (standard output when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output format.
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Sample the ψ-symbol over a level sweep and extrapolate to ħ = 0.
    Symbol {
        /// Test surface.
        #[arg(long)]
        surface: TestSurface,
        /// Curve identifier.
        #[arg(long)]
        curve: String,
        /// Actions τ over the internal edges, comma-separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        tau: Vec<f64>,
        /// Levels, comma-separated.
        #[arg(long, value_delimiter = ',', required = true)]
        levels: Vec<u32>,
        /// Polynomial degree in ħ of the extrapolation.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Evaluate the representation R_χ(τ, θ) and optionally a trace function.
    Charvar {
        /// Test surface.
        #[arg(long)]
        surface: TestSurface,
        /// Actions τ, comma-separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        tau: Vec<f64>,
        /// Angles θ, comma-separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        theta: Vec<f64>,
        /// Character index.
        #[arg(long, default_value_t = 0)]
        character: usize,
        /// Also evaluate the trace function of this curve.
        #[arg(long)]
        curve: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("curveops: {e:#}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot write {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<i32> {
    configure_threads()?;
    match cli.command {
        Command::Run {
            scenario,
            seed,
            json,
            csv,
            convergence,
            verbose,
        } => {
            let mut s = Scenario::from_path(&scenario)?;
            if let Some(seed) = seed {
                s.seed = seed;
            }
            s.output.json = json.or(s.output.json);
            s.output.csv = csv.or(s.output.csv);
            let conv = convergence.or(s.output.convergence.take());
            let rep = run_scenario(&s)?;
            emit_outputs(&rep, &s.output)?;
            if let Some(p) = conv {
                write_convergence(&rep, output(Some(&p))?)?;
            }
            if verbose {
                for c in &rep.checks {
                    println!("{:?} {} {}", c.status, c.name, c.detail);
                }
            }
            for line in rep.summary() {
                println!("{line}");
            }
            Ok(rep.exit_code())
        }
        Command::Operator {
            surface,
            curve,
            level,
            out,
            format,
        } => {
            let g = surface.graph();
            let gamma = parse_curve(&g, &curve)?;
            level_feasible(&g, level)
                .with_context(|| format!("level {level} has no admissible colorings on {surface}"))?;
            let ctx = OperatorContext::new(&g, level)?;
            let op = assemble_operator(&ctx, &gamma)?;
            let mut w = output(out.as_ref())?;
            match format {
                Format::Json => op.write_json(&g, &mut w)?,
                Format::Csv => op.write_csv(&mut w)?,
            }
            w.flush()?;
            Ok(0)
        }
        Command::Symbol {
            surface,
            curve,
            tau,
            levels,
            degree,
        } => {
            let g = surface.graph();
            let gamma = parse_curve(&g, &curve)?;
            let sym = SymbolSampler::new(&g, &gamma).sweep(&levels, &tau)?;
            let degree = degree.unwrap_or_else(|| default_degree(levels.len()));
            let fit = extrapolate_with(&sym, degree)?;
            let mut w = output(None)?;
            serde_json::to_writer_pretty(&mut w, &fit.report())?;
            writeln!(w)?;
            w.flush()?;
            Ok(0)
        }
        Command::Charvar {
            surface,
            tau,
            theta,
            character,
            curve,
        } => {
            let m = CharVarModel::new(surface)?;
            if character >= m.characters.len() {
                bail!("{surface} has {} characters", m.characters.len());
            }
            let rho = m.represent(&tau, &theta, character)?;
            let mut value = json!({
                "representation": rho,
                "relation_residual": rho.relation_residual(&m.boundary)?,
            });
            if let Some(c) = curve {
                let gamma = parse_curve(&m.graph, &c)?;
                let word = curve_word(surface, &m.graph, &gamma)?;
                let f = m.evaluate(&Observable::Trace(word.clone()), &tau, &theta, character)?;
                value["curve"] = json!(c);
                value["word"] = json!(word);
                value["trace_function"] = json!(f);
            }
            let mut w = output(None)?;
            serde_json::to_writer_pretty(&mut w, &value)?;
            writeln!(w)?;
            w.flush()?;
            Ok(0)
        }
    }
}
