//! `optomech`: single operating points, parameter sweeps and figure presets
//! from the command line.
//!
//! Exit codes: 0 success, 2 configuration or usage error, 3 numerical failure.

mod args;
mod report;
mod schema;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::builder::PossibleValuesParser;
use clap::{CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use optomech::checks::CHECKS;
use optomech::config::ConfigError;
use optomech::steady_state::{solve_at_effective_detuning, solve_branches};
use optomech::sweep::{
    evaluate_branch, figure_preset, hysteresis_trace, presets::with_continuity, run_sweep, with_jobs, BranchPolicy,
    SweepError, SweepRecord, SweepSpec, PRESET_IDS,
};
use serde::Serialize;
use thiserror::Error;

use args::{AxisArg, ParamArgs, FIGURE_AXES};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Numerical(_) => 3,
            _ => 2,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Pool(m) => CliError::Numerical(m),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "optomech", version, about = "Steady state, stability, cooling and entanglement of a Kerr + OPA optomechanical cavity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PointFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Policy {
    All,
    Continuity,
}

#[derive(Subcommand)]
enum Command {
    /// Analyse every steady-state branch of one parameter set.
    Point {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: PointFormat,
    },
    /// Run a figure preset or a custom one- or two-axis sweep.
    Sweep {
        /// Named figure preset.
        #[arg(long, value_parser = PossibleValuesParser::new(PRESET_IDS), conflicts_with = "axis")]
        preset: Option<String>,
        /// Axis as NAME:MIN:MAX:COUNT, NAME one of delta0-wm, delta-wm, p-mw,
        /// g-kappa, theta-pi, chi, t0-mk or an SI parameter name. At most two.
        #[arg(long, value_name = "SPEC", allow_hyphen_values = true)]
        axis: Vec<AxisArg>,
        /// Curve label written into every record.
        #[arg(long, default_value = "custom")]
        label: String,
        #[arg(long, value_enum, default_value = "all")]
        branch_policy: Policy,
        /// Follow the branches up and back down the power axis.
        #[arg(long)]
        hysteresis: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Output file; standard output when absent. A `.meta.json` sidecar
        /// is written next to it.
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
        /// Add a comment line numbering the columns.
        #[arg(long)]
        gnuplot_header: bool,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// List the figure presets.
    Presets,
    /// Run the built-in invariant checks.
    Check,
}

fn preset_help() -> String {
    let names: Vec<&str> = FIGURE_AXES.iter().map(|(n, _)| *n).collect();
    format!("Presets: {}\nAxis names: {}", PRESET_IDS.join(", "), names.join(", "))
}

fn main() -> ExitCode {
    let cmd = Cli::command()
        .after_help(preset_help())
        .mut_subcommand("sweep", |s| s.after_help(preset_help()));
    let cli = match Cli::from_arg_matches(&cmd.get_matches()) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Point { params, format } => cmd_point(&params, format),
        Command::Sweep {
            preset,
            axis,
            label,
            branch_policy,
            hysteresis,
            format,
            out,
            jobs,
            gnuplot_header,
            params,
        } => {
            let job = SweepJob { preset, axis, label, branch_policy, hysteresis, params };
            cmd_sweep(&job, format, out.as_deref(), jobs, gnuplot_header)
        }
        Command::Presets => {
            for id in PRESET_IDS {
                let p = figure_preset(id)?;
                println!("{id:8} {} ({} curve(s))", p.description, p.curves.len());
            }
            Ok(())
        }
        Command::Check => cmd_check(),
    }
}

fn point_records(params: &ParamArgs) -> Result<(optomech::SystemParams, Vec<SweepRecord>), CliError> {
    let (p, fixed) = params.resolve()?;
    let values = [p.input_power];
    Ok(match fixed {
        Some(delta) => {
            let (rp, b) = solve_at_effective_detuning(&p, delta);
            let n = solve_branches(&rp).map(|b| b.len()).unwrap_or(1);
            (rp, vec![evaluate_branch("point", 0, &values, &rp, &b, n)])
        }
        None => {
            let branches = solve_branches(&p).map_err(|e| CliError::Numerical(e.to_string()))?;
            let n = branches.len();
            let recs = branches.iter().map(|b| evaluate_branch("point", 0, &values, &p, b, n)).collect();
            (p, recs)
        }
    })
}

fn cmd_point(params: &ParamArgs, format: PointFormat) -> Result<(), CliError> {
    let (p, recs) = point_records(params)?;
    match format {
        PointFormat::Text => print!("{}", report::point_report(&p, &recs)),
        PointFormat::Json => {
            #[derive(Serialize)]
            struct PointOut<'a> {
                engine_version: &'a str,
                params: &'a optomech::SystemParams,
                branches: &'a [SweepRecord],
            }
            let out = PointOut { engine_version: optomech::VERSION, params: &p, branches: &recs };
            println!("{}", serde_json::to_string_pretty(&out).map_err(|e| CliError::Io(e.to_string()))?);
        }
    }
    if let Some(e) = recs.iter().find_map(|r| r.error.as_ref()) {
        return Err(CliError::Numerical(e.clone()));
    }
    Ok(())
}

struct SweepJob {
    preset: Option<String>,
    axis: Vec<AxisArg>,
    label: String,
    branch_policy: Policy,
    hysteresis: bool,
    params: ParamArgs,
}

#[derive(Serialize)]
struct Metadata<'a> {
    schema: &'a str,
    schema_version: u32,
    engine_version: &'a str,
    command: Vec<String>,
    preset: Option<&'a str>,
    hysteresis: bool,
    record_count: usize,
    curves: &'a [SweepSpec],
}

impl SweepJob {
    fn curves(&self) -> Result<(Vec<SweepSpec>, bool), CliError> {
        let policy = match self.branch_policy {
            Policy::All => BranchPolicy::All,
            Policy::Continuity => BranchPolicy::Continuity,
        };
        if let Some(id) = &self.preset {
            if self.params.any_override() || self.params.config.is_some() {
                return Err(CliError::Usage("parameter flags cannot be combined with --preset".into()));
            }
            let mut preset = figure_preset(id)?;
            if policy == BranchPolicy::Continuity {
                preset = with_continuity(preset);
            }
            let table = preset.protocol == optomech::sweep::Protocol::MaximizeEntanglement;
            return Ok((preset.curves, table));
        }
        if self.axis.is_empty() {
            return Err(CliError::Usage("give --preset or at least one --axis".into()));
        }
        let (base, fixed) = self.params.resolve()?;
        let axes = self.axis.iter().map(|a| a.to_axis(&base)).collect::<Result<Vec<_>, _>>()?;
        let mut spec = SweepSpec::new(self.label.clone(), base, axes);
        spec.fixed_effective_detuning = fixed;
        spec.branch_policy = policy;
        spec.validate()?;
        Ok((vec![spec], false))
    }

    fn run(&self, curves: &[SweepSpec]) -> Result<Vec<SweepRecord>, CliError> {
        if self.hysteresis {
            if curves.len() != 1 {
                return Err(CliError::Usage("--hysteresis needs a single curve".into()));
            }
            let t = hysteresis_trace(&curves[0])?;
            eprintln!("up jumps (mW): {:?}", t.up_jumps.iter().map(|w| w * 1e3).collect::<Vec<_>>());
            eprintln!("down jumps (mW): {:?}", t.down_jumps.iter().map(|w| w * 1e3).collect::<Vec<_>>());
            let tag = |mut r: SweepRecord, dir: &str| {
                r.curve = format!("{}:{dir}", r.curve);
                r
            };
            let mut out: Vec<SweepRecord> = t.up.into_iter().map(|r| tag(r, "up")).collect();
            out.extend(t.down.into_iter().map(|r| tag(r, "down")));
            return Ok(out);
        }
        match &self.preset {
            Some(id) => {
                let mut preset = figure_preset(id)?;
                preset.curves = curves.to_vec();
                Ok(preset.run()?)
            }
            None => Ok(run_sweep(&curves[0])?),
        }
    }
}

fn cmd_sweep(
    job: &SweepJob,
    format: Format,
    out: Option<&Path>,
    jobs: Option<usize>,
    gnuplot_header: bool,
) -> Result<(), CliError> {
    if jobs == Some(0) {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let (curves, _) = job.curves()?;
    let records = with_jobs(jobs, || job.run(&curves))??;
    let failed = records.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        eprintln!("warning: {failed} record(s) carry an error message");
    }
    let write = |w: &mut dyn Write| -> io::Result<()> {
        match format {
            Format::Csv => schema::write_csv(w, &records, gnuplot_header),
            Format::Json => schema::write_json_lines(w, &records),
        }
    };
    let Some(path) = out else {
        let stdout = io::stdout();
        let mut lock = stdout.lock();
        return write(&mut lock).map_err(|e| CliError::Io(e.to_string()));
    };
    let meta = Metadata {
        schema: schema::SCHEMA_NAME,
        schema_version: schema::SCHEMA_VERSION,
        engine_version: optomech::VERSION,
        command: std::env::args().collect(),
        preset: job.preset.as_deref(),
        hysteresis: job.hysteresis,
        record_count: records.len(),
        curves: &curves,
    };
    let meta_text = serde_json::to_string_pretty(&meta).map_err(|e| CliError::Io(e.to_string()))?;
    let mut meta_path = path.as_os_str().to_owned();
    meta_path.push(".meta.json");
    atomic_write(path, |w| write(w))?;
    atomic_write(Path::new(&meta_path), |w| w.write_all(meta_text.as_bytes())).inspect_err(|_| {
        let _ = fs::remove_file(path);
    })
}

/// Writes through a temporary file in the target directory, renamed into
/// place only once complete; the temporary is removed on any failure.
fn atomic_write(path: &Path, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io_err = |e: io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    {
        let mut buf = io::BufWriter::new(tmp.as_file_mut());
        f(&mut buf).map_err(io_err)?;
        buf.flush().map_err(io_err)?;
    }
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

fn cmd_check() -> Result<(), CliError> {
    let mut failed = 0;
    for c in CHECKS {
        match (c.run)() {
            Ok(msg) => println!("PASS {}: {msg}", c.name),
            Err(msg) => {
                failed += 1;
                println!("FAIL {}: {msg}", c.name);
            }
        }
    }
    println!("{} passed, {failed} failed", CHECKS.len() - failed);
    if failed > 0 {
        return Err(CliError::Numerical(format!("{failed} check(s) failed")));
    }
    Ok(())
}
