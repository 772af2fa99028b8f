//! `layerforge` command-line front end: build a Layer Code bundle from a CSS
//! code, verify a bundle, dump its routing plan, and export the output code.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use layerforge::css::{ArrangementMode, CssCode, Point};
use layerforge::layers::{build, BuildConfig, LayerCode};
use layerforge::routing::audit_plan;
use layerforge::verify::{verify_bundle, VerifyOptions};

/// Environment variable capping the number of worker threads.
const THREADS_ENV: &str = "LAYERFORGE_THREADS";

#[derive(Parser, Debug)]
#[command(name = "layerforge", version, about = "Embed CSS codes into 3D, 4D and 5D Layer Codes and verify the result")]
#[command(after_help = "Set LAYERFORGE_THREADS to cap internal parallelism.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a Layer Code bundle from an input CSS code.
    Build(BuildArgs),
    /// Verify a bundle and write the verification report.
    Verify(VerifyArgs),
    /// Dump parts of a bundle for inspection.
    Report {
        #[command(subcommand)]
        what: ReportCommand,
    },
    /// Export the parity-check matrices of the output code.
    Export(ExportArgs),
}

#[derive(Args, Debug, Clone)]
struct BuildArgs {
    /// Input code: JSON with `hx`, `hz` (inline matrices or alist file names).
    #[arg(long)]
    input: PathBuf,
    /// Ambient dimension D (3, 4 or 5; higher values use the experimental any-D routing).
    #[arg(long)]
    dim: usize,
    /// Qubit placement: `row-major`, `spiral` or `file:<path>` with a JSON list of points.
    /// Defaults to the input's arrangement table when present, otherwise row-major.
    #[arg(long)]
    arrangement: Option<String>,
    /// Output bundle path.
    #[arg(long)]
    out: PathBuf,
    /// Size the transverse extents by the proven color bounds instead of the colors used.
    #[arg(long)]
    boost_colors: bool,
    /// Attach contracting layers only to checks whose route geometry has cycles.
    #[arg(long)]
    prune_contracting: bool,
}

#[derive(Args, Debug, Clone)]
struct VerifyArgs {
    /// Bundle produced by `build`.
    #[arg(long)]
    bundle: PathBuf,
    /// Report path (JSON); the text summary always goes to stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Weight budget of the exhaustive distance search; omitted skips the search.
    #[arg(long)]
    budget_distance: Option<usize>,
    /// Largest output qubit count for the exact energy-barrier search.
    #[arg(long, default_value_t = 20)]
    barrier_limit: usize,
}

#[derive(Subcommand, Debug)]
enum ReportCommand {
    /// Routing plan, colorings, color routes and the recomputed routing audit as JSON.
    Routes {
        /// Bundle produced by `build`.
        #[arg(long)]
        bundle: PathBuf,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ExportFormat {
    /// `<out>_hx.alist` and `<out>_hz.alist`.
    Alist,
    /// `<out>.json` in the input format accepted by `build`.
    Json,
}

#[derive(Args, Debug)]
struct ExportArgs {
    /// Bundle produced by `build`.
    #[arg(long)]
    bundle: PathBuf,
    #[arg(long, value_enum)]
    format: ExportFormat,
    /// Output path prefix.
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(err) = configure_threads() {
        eprintln!("error: {err:#}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize =
        value.trim().parse().with_context(|| format!("{THREADS_ENV}={value} is not a thread count"))?;
    if threads == 0 {
        bail!("{THREADS_ENV} must be at least 1");
    }
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
}

/// Runs one subcommand; `Ok(false)` means an asserted verification check failed.
fn run(command: Command) -> Result<bool> {
    match command {
        Command::Build(args) => cmd_build(&args).map(|()| true),
        Command::Verify(args) => cmd_verify(&args),
        Command::Report { what: ReportCommand::Routes { bundle, out } } => {
            cmd_report_routes(&bundle, out.as_deref()).map(|()| true)
        }
        Command::Export(args) => cmd_export(&args).map(|()| true),
    }
}

fn parse_arrangement(flag: Option<&str>, table: Option<Vec<Point>>) -> Result<ArrangementMode> {
    Ok(match flag {
        None => table.map_or(ArrangementMode::RowMajor, ArrangementMode::Table),
        Some("row-major") => ArrangementMode::RowMajor,
        Some("spiral") => ArrangementMode::Spiral,
        Some(other) => match other.strip_prefix("file:") {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading arrangement {path}"))?;
                ArrangementMode::Table(
                    serde_json::from_str(&text).with_context(|| format!("parsing arrangement {path}"))?,
                )
            }
            None => bail!("unknown arrangement {other:?}; expected row-major, spiral or file:<path>"),
        },
    })
}

fn load_bundle(path: &Path) -> Result<LayerCode> {
    let text = fs::read_to_string(path).with_context(|| format!("reading bundle {}", path.display()))?;
    LayerCode::from_json(&text).with_context(|| format!("loading bundle {}", path.display()))
}

fn cmd_build(args: &BuildArgs) -> Result<()> {
    let (code, table) = CssCode::load(&args.input).with_context(|| format!("loading {}", args.input.display()))?;
    let mut config = BuildConfig::new(args.dim, parse_arrangement(args.arrangement.as_deref(), table)?);
    config.boost_colors = args.boost_colors;
    config.prune_contracting = args.prune_contracting;
    let lc = build(&code, &config)?;
    fs::write(&args.out, lc.to_json()?).with_context(|| format!("writing {}", args.out.display()))?;
    let out = lc.output_code()?;
    let e = lc.extents;
    println!(
        "n={} k={} max_check_weight={} max_qubit_degree={} extents={}x{}^{}x{}",
        out.num_qubits(),
        out.k(),
        out.hx.max_row_weight().max(out.hz.max_row_weight()),
        degrees(&out).into_iter().max().unwrap_or(0),
        e.l_x,
        e.side,
        e.f,
        e.l_z
    );
    Ok(())
}

fn degrees(code: &CssCode) -> Vec<usize> {
    code.hx.col_weights().iter().zip(code.hz.col_weights()).map(|(a, b)| a + b).collect()
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool> {
    let lc = load_bundle(&args.bundle)?;
    let options = VerifyOptions { budget_distance: args.budget_distance, barrier_limit: args.barrier_limit };
    let report = verify_bundle(&lc, &options);
    if let Some(path) = &args.report {
        fs::write(path, report.to_json()).with_context(|| format!("writing {}", path.display()))?;
    }
    print!("{}", report.render_text());
    Ok(report.ok())
}

fn cmd_report_routes(bundle: &Path, out: Option<&Path>) -> Result<()> {
    let lc = load_bundle(bundle)?;
    let audit = audit_plan(&lc.code, &lc.arrangement, &lc.plan)?;
    let value = json!({
        "dimension": lc.dimension,
        "extents": lc.extents,
        "arrangement": lc.arrangement,
        "plan": lc.plan,
        "audit": audit,
    });
    let text = serde_json::to_string_pretty(&value)? + "\n";
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn cmd_export(args: &ExportArgs) -> Result<()> {
    let lc = load_bundle(&args.bundle)?;
    let out = lc.output_code()?;
    match args.format {
        ExportFormat::Alist => {
            for (suffix, m) in [("_hx.alist", &out.hx), ("_hz.alist", &out.hz)] {
                let path = with_suffix(&args.out, suffix);
                fs::write(&path, m.to_alist()).with_context(|| format!("writing {}", path.display()))?;
            }
        }
        ExportFormat::Json => {
            let path = with_suffix(&args.out, ".json");
            let text = serde_json::to_string_pretty(&json!({"hx": out.hx, "hz": out.hz}))? + "\n";
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(())
}
