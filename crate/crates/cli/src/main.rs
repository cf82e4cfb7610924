//! `pwlab`: decompose polygons, evaluate chain constants, and verify the
//! modular Poincaré–Wirtinger inequality numerically.
//!
//! Exit status is 0 when every check passes, 2 when a check fails and 1 on
//! any input error.

mod artifact;
mod report;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use pwlab_core::constants::constant_c;
use pwlab_core::decomposition::{decompose, DecompositionParams};
use pwlab_core::functions::TestFunction;
use pwlab_core::geometry::Chain;
use pwlab_core::io::{self, ChainFile, IoError};
use pwlab_core::quadrature::QuadratureSpec;
use pwlab_core::verifier::{
    counterexample_sweep, empirical_best_constant, standard_suite, verify_main, verify_suite, OptimizeParams,
    SweepParams, VerificationReport,
};

use artifact::{num, sibling, write_csv, write_json, write_text, Artifact, SummaryRow};

#[derive(Parser, Debug)]
#[command(name = "pwlab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Quadrature spec (JSON); defaults to tensor Gauss of order 16.
    #[arg(long, global = true)]
    quad: Option<PathBuf>,
    /// Overrides the seed of the quadrature spec and the decomposition.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Report path; CSV and SVG companions are written next to it. Without
    /// it the report goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Progress on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Split a polygon into a chain of star-shaped pieces.
    Decompose {
        #[arg(long)]
        polygon: PathBuf,
        /// Merging stops at this many pieces.
        #[arg(long, default_value_t = 1)]
        pieces: usize,
    },
    /// Constants C and C̃ of a chain for an exponent.
    Constants {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long = "p", alias = "exponent")]
        p: PathBuf,
    },
    /// Check the inequality for one function, or the built-in suite.
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        f: Option<PathBuf>,
        /// Run the 36-fixture built-in suite instead.
        #[arg(long, conflicts_with_all = ["chain", "p", "f"])]
        suite: bool,
    },
    /// Rayleigh quotients of the scaled bump family.
    Counterexample {
        /// Ω; must contain the ball of radius 1 + alpha about the origin.
        #[arg(long)]
        chain: PathBuf,
        /// Radial exponent profile.
        #[arg(long = "p")]
        p: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        lambda_grid: Vec<f64>,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, default_value_t = 3)]
        k: u32,
    },
    /// Largest lhs/rhs over linear combinations of a function family.
    Optimize {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long = "p")]
        p: PathBuf,
        /// Family member; repeat for more.
        #[arg(long, required = true)]
        f: Vec<PathBuf>,
        /// Objective evaluations per restart.
        #[arg(long, default_value_t = OptimizeParams::default().budget)]
        budget: usize,
        #[arg(long, default_value_t = OptimizeParams::default().restarts)]
        restarts: usize,
        /// Starting coefficients, one per family member.
        #[arg(long, value_delimiter = ',')]
        start: Option<Vec<f64>>,
    },
    /// Aggregate reports into one CSV and markdown table.
    Report { reports: Vec<PathBuf> },
}

#[derive(Args, Debug)]
struct Input {
    #[arg(long)]
    chain: Option<PathBuf>,
    #[arg(long = "p")]
    p: Option<PathBuf>,
}

/// A parsed input together with its JSON form for the config hash.
struct Loaded<T> {
    value: T,
    json: Value,
}

fn load<T>(path: &Path, parse: impl Fn(&str) -> Result<T, IoError>) -> Result<Loaded<T>> {
    let ctx = || path.display().to_string();
    let text = io::read_to_string(path)?;
    let json: Value = serde_json::from_str(&text).map_err(IoError::from).with_context(ctx)?;
    let value = parse(&text).with_context(ctx)?;
    Ok(Loaded { value, json })
}

fn load_chain(path: &Path) -> Result<Loaded<Chain<f64>>> {
    load(path, io::parse_chain)
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "input".into(), |s| s.to_string_lossy().into_owned())
}

fn quadrature(cli: &Cli) -> Result<QuadratureSpec<f64>> {
    let q = match &cli.quad {
        Some(path) => load(path, io::parse_quadrature::<f64>)?.value,
        None => QuadratureSpec::default(),
    };
    Ok(match cli.seed {
        Some(s) => q.with_seed(s),
        None => q,
    })
}

fn verification_row(r: &VerificationReport<f64>, c_tilde: f64) -> SummaryRow {
    SummaryRow {
        fixture: r.fixture.clone(),
        c: Some(r.constant),
        c_tilde: Some(c_tilde),
        ratio: r.ratio(),
        slack: Some(r.slack),
        pass: r.pass,
    }
}

fn verification_csv(reports: &[VerificationReport<f64>]) -> Vec<Vec<String>> {
    reports
        .iter()
        .map(|r| {
            vec![
                r.fixture.clone(),
                num(r.lhs.value),
                num(r.rhs.value),
                num(r.constant),
                num(r.slack),
                r.pass.to_string(),
            ]
        })
        .collect()
}

const VERIFY_HEADER: [&str; 6] = ["fixture", "lhs", "rhs", "C", "slack", "pass"];

/// Writes the artifact (and its CSV) or prints it; returns the pass flag.
fn emit(cli: &Cli, a: &Artifact, csv: Option<(&[&str], Vec<Vec<String>>)>) -> Result<bool> {
    match &cli.out {
        Some(out) => {
            write_json(out, a)?;
            if let Some((header, rows)) = csv {
                write_csv(&sibling(out, "csv"), &a.stamp(), header, &rows)?;
            }
        }
        None => println!("{}", serde_json::to_string_pretty(a)?),
    }
    Ok(a.pass)
}

fn run(cli: &Cli) -> Result<bool> {
    let verbose = cli.verbose > 0;
    match &cli.command {
        Command::Decompose { polygon, pieces } => {
            let poly = load(polygon, io::parse_polygon::<f64>)?;
            let mut params = DecompositionParams::with_pieces(*pieces);
            if let Some(s) = cli.seed {
                params.seed = s;
            }
            let chain = decompose(&poly.value, &params).with_context(|| polygon.display().to_string())?;
            if verbose {
                eprintln!("{} pieces, R = {}, lambda = {:?}", chain.len(), chain.radius(), chain.lambda());
            }
            let config = json!({ "command": "decompose", "polygon": poly.json, "params": params });
            let stamped = Artifact::new("decompose", params.seed, config, Value::Null, vec![], true);
            // stamp fields sit beside the chain fields, so the file still parses as a chain
            let mut merged = serde_json::to_value(ChainFile::from_chain(&chain)?)?;
            merged["tool"] = json!(stamped.tool);
            merged["tool_version"] = json!(stamped.tool_version);
            merged["config_hash"] = json!(stamped.config_hash);
            merged["seed"] = json!(stamped.seed);
            match &cli.out {
                Some(out) => {
                    write_json(out, &merged)?;
                    write_text(&sibling(out, "svg"), &svg::render(&chain, &stamped.stamp()))?;
                }
                None => println!("{}", serde_json::to_string_pretty(&merged)?),
            }
            Ok(true)
        }
        Command::Constants { chain, p } => {
            let ch = load_chain(chain)?;
            let ex = load(p, io::parse_exponent::<f64>)?;
            let r = constant_c(&ch.value, &ex.value)?;
            let config = json!({ "command": "constants", "chain": ch.json, "p": ex.json });
            let row = SummaryRow {
                fixture: format!("{}/{}", stem(chain), stem(p)),
                c: Some(r.c),
                c_tilde: Some(r.c_tilde),
                ratio: None,
                slack: None,
                pass: true,
            };
            emit(cli, &Artifact::new("constants", cli.seed.unwrap_or(0), config, serde_json::to_value(&r)?, vec![row], true), None)
        }
        Command::Verify { input, f, suite } => {
            let q = quadrature(cli)?;
            if *suite {
                let fixtures = standard_suite::<f64>()?;
                let reports = verify_suite(&fixtures, &q)?;
                let mut rows = Vec::with_capacity(reports.len());
                for (fx, r) in fixtures.iter().zip(&reports) {
                    let c_tilde = constant_c(&fx.chain, &fx.p)?.c_tilde;
                    if verbose {
                        eprintln!("{} slack {:e} pass {}", r.fixture, r.slack, r.pass);
                    }
                    rows.push(verification_row(r, c_tilde));
                }
                let pass = reports.iter().all(|r| r.pass);
                let config = json!({ "command": "verify", "suite": "standard", "quad": q });
                let csv = verification_csv(&reports);
                let a = Artifact::new("verify", q.seed, config, serde_json::to_value(&reports)?, rows, pass);
                return emit(cli, &a, Some((&VERIFY_HEADER, csv)));
            }
            let (Some(chain), Some(p), Some(f)) = (&input.chain, &input.p, f) else {
                anyhow::bail!("verify needs --chain, --p and --f (or --suite)");
            };
            let ch = load_chain(chain)?;
            let ex = load(p, io::parse_exponent::<f64>)?;
            let fun = load(f, io::parse_function::<f64>)?;
            let (mut r, c) = verify_main(&ch.value, &ex.value, &fun.value, &q)?;
            r.fixture = format!("{}/{}/{}", stem(chain), stem(p), stem(f));
            let config = json!({
                "command": "verify", "chain": ch.json, "p": ex.json, "f": fun.json, "quad": q,
            });
            let row = verification_row(&r, c.c_tilde);
            let csv = verification_csv(std::slice::from_ref(&r));
            let result = json!({ "verification": r, "constants": c });
            let a = Artifact::new("verify", q.seed, config, result, vec![row], r.pass);
            emit(cli, &a, Some((&VERIFY_HEADER, csv)))
        }
        Command::Counterexample {
            chain,
            p,
            lambda_grid,
            alpha,
            k,
        } => {
            let q = quadrature(cli)?;
            let ch = load_chain(chain)?;
            let ex = load(p, io::parse_exponent::<f64>)?;
            let params = SweepParams {
                alpha: *alpha,
                k: *k,
                profile: ex.value,
                lambdas: lambda_grid.clone(),
            };
            let r = counterexample_sweep(&params, &ch.value, &q)?;
            let pass = r.monotone && r.kernel_bound_holds;
            if verbose {
                eprintln!("slope {} (theory {}), monotone {}", r.fitted_slope, r.theoretical_exponent, r.monotone);
            }
            let config = json!({
                "command": "counterexample", "chain": ch.json, "p": ex.json,
                "lambda_grid": lambda_grid, "alpha": alpha, "k": k, "quad": q,
            });
            let row = SummaryRow {
                fixture: format!("counterexample/{}", stem(p)),
                c: Some(r.inverse_constant.recip()),
                c_tilde: None,
                ratio: r.quotients.last().copied(),
                slack: Some(r.min_kernel_quotient - r.inverse_constant),
                pass,
            };
            let csv = r
                .lambdas
                .iter()
                .zip(&r.quotients)
                .zip(&r.kernel_quotients)
                .map(|((l, qv), kq)| vec![num(*l), num(*qv), num(*kq)])
                .collect();
            let a = Artifact::new("counterexample", q.seed, config, serde_json::to_value(&r)?, vec![row], pass);
            emit(cli, &a, Some((&["lambda", "quotient", "kernel_quotient"], csv)))
        }
        Command::Optimize {
            chain,
            p,
            f,
            budget,
            restarts,
            start,
        } => {
            let q = quadrature(cli)?;
            let ch = load_chain(chain)?;
            let ex = load(p, io::parse_exponent::<f64>)?;
            let family: Vec<Loaded<TestFunction<f64>>> =
                f.iter().map(|path| load(path, io::parse_function::<f64>)).collect::<Result<_>>()?;
            let params = OptimizeParams {
                budget: *budget,
                restarts: *restarts,
                ..OptimizeParams::default()
            };
            let funcs: Vec<TestFunction<f64>> = family.iter().map(|l| l.value.clone()).collect();
            let r = empirical_best_constant(&ch.value, &ex.value, &funcs, &params, start.as_deref(), &q)?;
            if verbose {
                eprintln!("ratio {:e} after {} evaluations", r.ratio, r.evaluations);
            }
            let c_tilde = constant_c(&ch.value, &ex.value)?.c_tilde;
            let config = json!({
                "command": "optimize", "chain": ch.json, "p": ex.json,
                "family": family.iter().map(|l| &l.json).collect::<Vec<_>>(),
                "params": params, "start": start, "quad": q,
            });
            let fixture = format!(
                "{}/{}/{}",
                stem(chain),
                stem(p),
                f.iter().map(|x| stem(x)).collect::<Vec<_>>().join("+")
            );
            let slack = r.constant - r.ratio;
            let row = SummaryRow {
                fixture: fixture.clone(),
                c: Some(r.constant),
                c_tilde: Some(c_tilde),
                ratio: Some(r.ratio),
                slack: Some(slack),
                pass: r.within_constant,
            };
            let csv = vec![vec![
                fixture,
                num(r.lhs.value),
                num(r.rhs.value),
                num(r.constant),
                num(slack),
                r.within_constant.to_string(),
            ]];
            let a = Artifact::new("optimize", q.seed, config, serde_json::to_value(&r)?, vec![row], r.within_constant);
            emit(cli, &a, Some((&VERIFY_HEADER, csv)))
        }
        Command::Report { reports } => {
            let artifacts = report::load(reports)?;
            let rows = report::rows(&artifacts);
            let pass = rows.iter().all(|r| r.pass);
            let config = json!({
                "command": "report",
                "inputs": artifacts.iter().map(|a| &a.config_hash).collect::<Vec<_>>(),
            });
            let a = Artifact::new("report", cli.seed.unwrap_or(0), config, Value::Null, rows.clone(), pass);
            let md = report::markdown(&rows, &a.stamp());
            match &cli.out {
                Some(out) => {
                    write_csv(&sibling(out, "csv"), &a.stamp(), &report::HEADER, &report::csv_rows(&rows))?;
                    write_text(&sibling(out, "md"), &md)?;
                }
                None => print!("{md}"),
            }
            Ok(pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
