//! Command-line front end for the detproc library.

mod error;
mod params;
mod suites;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use detproc::configspace::{membership, Configuration};
use detproc::rng::par_streams;
use detproc::sampling::sample;
use detproc::sde::integrate_with;
use detproc::validate::stationary_draw;

use error::{config_error, CliError, CliResult};
use params::*;

const TOOL: &str = "detproc";

#[derive(Parser)]
#[command(name = "detproc", version, about = "Determinantal processes from noncolliding diffusions")]
struct Cli {
    /// TOML file with parameters for the subcommand; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for the result and its manifest.json. Without it the
    /// result goes to stdout and the manifest to stderr.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate correlation kernels.
    #[command(subcommand)]
    Kernel(KernelCmd),
    /// Simulate an SDE system; writes CSV.
    Simulate(SimulateParams),
    /// Draw from a random-matrix ensemble; writes CSV.
    Sample(SampleParams),
    /// Fredholm determinants.
    #[command(subcommand)]
    Fredholm(FredholmCmd),
    /// Configuration-space checks.
    #[command(subcommand)]
    Config(ConfigCmd),
    /// Run a Monte Carlo validation suite.
    Validate {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        params: ValidateParams,
    },
    /// Re-run the command recorded in a manifest.
    Replay {
        #[arg(long)]
        manifest: PathBuf,
    },
}

#[derive(Subcommand)]
enum KernelCmd {
    /// Static or extended kernel value.
    Eval(KernelEvalParams),
    /// Kernel of the process started from a finite configuration.
    Noneq(KernelNoneqParams),
}

#[derive(Subcommand)]
enum FredholmCmd {
    /// Probability of no points in [a, b].
    Gap(GapParams),
    /// Multi-time moment generating function.
    Mgf(MgfParams),
}

#[derive(Subcommand)]
enum ConfigCmd {
    /// Membership of a configuration in a configuration-space set.
    Check(ConfigCheckParams),
}

/// A fully resolved command, as recorded in a manifest.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "command", content = "config")]
enum Job {
    #[serde(rename = "kernel eval")]
    KernelEval(KernelEvalParams),
    #[serde(rename = "kernel noneq")]
    KernelNoneq(KernelNoneqParams),
    #[serde(rename = "simulate")]
    Simulate(SimulateParams),
    #[serde(rename = "sample")]
    Sample(SampleParams),
    #[serde(rename = "fredholm gap")]
    FredholmGap(GapParams),
    #[serde(rename = "fredholm mgf")]
    FredholmMgf(MgfParams),
    #[serde(rename = "config check")]
    ConfigCheck(ConfigCheckParams),
    #[serde(rename = "validate")]
    Validate(ValidateJob),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ValidateJob {
    suite: Suite,
    #[serde(flatten)]
    params: ValidateParams,
}

/// `{tool, version, command, config}`; replaying it reproduces the result.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    tool: String,
    version: String,
    command: String,
    config: serde_json::Value,
}

impl Manifest {
    fn new(job: &Job) -> CliResult<Self> {
        let mut value = serde_json::to_value(job)?;
        let command = value["command"].as_str().unwrap_or_default().to_string();
        Ok(Manifest {
            tool: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command,
            config: value["config"].take(),
        })
    }

    fn job(&self) -> CliResult<Job> {
        let value = serde_json::json!({ "command": self.command, "config": self.config });
        serde_json::from_value(value).map_err(|e| CliError::Config(format!("manifest: {e}")))
    }
}

struct Artifact {
    file_name: &'static str,
    bytes: Vec<u8>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(n) = cli.workers {
        if n == 0 {
            return config_error("--workers must be positive");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let file = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            Some(text.parse::<toml::Table>().map_err(|e| CliError::Config(format!("config file: {e}")))?)
        }
        None => None,
    };
    let file = file.as_ref();
    let job = match cli.command {
        Command::Kernel(KernelCmd::Eval(p)) => Job::KernelEval(merge(file, &p)?.resolved()),
        Command::Kernel(KernelCmd::Noneq(p)) => Job::KernelNoneq(merge(file, &p)?.resolved()),
        Command::Simulate(p) => Job::Simulate(merge(file, &p)?.resolved()),
        Command::Sample(p) => Job::Sample(merge(file, &p)?.resolved()),
        Command::Fredholm(FredholmCmd::Gap(p)) => Job::FredholmGap(merge(file, &p)?.resolved()),
        Command::Fredholm(FredholmCmd::Mgf(p)) => Job::FredholmMgf(merge(file, &p)?.resolved()),
        Command::Config(ConfigCmd::Check(p)) => Job::ConfigCheck(merge(file, &p)?.resolved()),
        Command::Validate { suite, params } => Job::Validate(ValidateJob {
            suite,
            params: merge(file, &params)?.resolved(),
        }),
        Command::Replay { manifest } => {
            if file.is_some() {
                return config_error("--config cannot be combined with replay");
            }
            read_manifest(&manifest)?.job()?
        }
    };
    let artifact = execute(&job)?;
    let manifest = Manifest::new(&job)?;
    let mut manifest_bytes = serde_json::to_vec_pretty(&manifest)?;
    manifest_bytes.push(b'\n');
    match &cli.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(artifact.file_name), &artifact.bytes)?;
            std::fs::write(dir.join("manifest.json"), &manifest_bytes)?;
        }
        None => {
            std::io::stdout().write_all(&artifact.bytes)?;
            std::io::stderr().write_all(&manifest_bytes)?;
        }
    }
    Ok(())
}

fn read_manifest(path: &Path) -> CliResult<Manifest> {
    let text = std::fs::read_to_string(path)?;
    let manifest: Manifest =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("manifest: {e}")))?;
    if manifest.tool != TOOL {
        return config_error(format!("manifest was written by '{}', not {TOOL}", manifest.tool));
    }
    Ok(manifest)
}

fn json(value: &impl Serialize) -> CliResult<Artifact> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(Artifact {
        file_name: "result.json",
        bytes,
    })
}

fn execute(job: &Job) -> CliResult<Artifact> {
    match job {
        Job::KernelEval(p) => json(&p.run()?),
        Job::KernelNoneq(p) => json(&p.run()?),
        Job::FredholmGap(p) => json(&p.run()?),
        Job::FredholmMgf(p) => json(&p.run()?),
        Job::Simulate(p) => simulate(p),
        Job::Sample(p) => draw(p),
        Job::ConfigCheck(p) => config_check(p),
        Job::Validate(v) => json(&suites::run(v.suite, &v.params)?),
    }
}

fn simulate(p: &SimulateParams) -> CliResult<Artifact> {
    let system = p.system()?;
    let (t, dt) = (p.t.unwrap_or(1.0), p.dt.unwrap_or(1e-3));
    let every = p.record_every.unwrap_or(1);
    if every == 0 {
        return config_error("record_every must be positive");
    }
    let paths = p.paths.unwrap_or(1);
    if paths == 0 {
        return config_error("paths must be positive");
    }
    let steps = (t / dt - 1e-9).ceil().max(0.0) as usize;
    let rows = par_streams(p.seed.unwrap_or(0), paths, |_, rng| {
        let start = match &p.points {
            Some(points) => points.clone(),
            None => stationary_draw(&system, rng)?,
        };
        let mut kept = Vec::new();
        let mut k = 0usize;
        integrate_with(&system, &start, t, dt, rng, |time, x| {
            if k % every == 0 || k == steps {
                kept.push((time, x.to_vec()));
            }
            k += 1;
            Ok(())
        })?;
        Ok(kept)
    })?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["path_id", "time", "particle_index", "position"])?;
    for (id, path) in rows.iter().enumerate() {
        for (time, x) in path {
            for (j, v) in x.iter().enumerate() {
                w.write_record([id.to_string(), time.to_string(), j.to_string(), v.to_string()])?;
            }
        }
    }
    Ok(Artifact {
        file_name: "paths.csv",
        bytes: w.into_inner().map_err(|e| CliError::Io(e.to_string()))?,
    })
}

fn draw(p: &SampleParams) -> CliResult<Artifact> {
    let draws = sample(&p.spec()?, p.count.unwrap_or(1), p.seed.unwrap_or(0))?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["sample_id", "particle_index", "position"])?;
    for (id, x) in draws.configurations.iter().enumerate() {
        for (j, v) in x.iter().enumerate() {
            w.write_record([id.to_string(), j.to_string(), v.to_string()])?;
        }
    }
    Ok(Artifact {
        file_name: "samples.csv",
        bytes: w.into_inner().map_err(|e| CliError::Io(e.to_string()))?,
    })
}

/// Reads `position[,multiplicity]` rows; a non-numeric first row is taken
/// as a header.
fn read_configuration(path: &str) -> CliResult<Configuration> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)?;
    let mut pairs = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record?;
        let Some(first) = record.get(0) else { continue };
        let position = match first.parse::<f64>() {
            Ok(x) => x,
            Err(_) if i == 0 => continue,
            Err(_) => return config_error(format!("{path}: row {} has position '{first}'", i + 1)),
        };
        let multiplicity = match record.get(1).filter(|s| !s.is_empty()) {
            Some(m) => m
                .parse::<u32>()
                .map_err(|_| CliError::Config(format!("{path}: row {} has multiplicity '{m}'", i + 1)))?,
            None => 1,
        };
        pairs.push((position, multiplicity));
    }
    Ok(Configuration::new(pairs)?)
}

fn config_check(p: &ConfigCheckParams) -> CliResult<Artifact> {
    let input = p
        .input
        .clone()
        .ok_or_else(|| CliError::Config("missing parameter --input".into()))?;
    let config = read_configuration(&input)?;
    let space = p.space()?;
    let l_max = p.l_max.unwrap_or(100.0);
    let verdict = membership(&config, &space, l_max)?;
    json(&serde_json::json!({
        "total": config.total(),
        "simple": config.is_simple(),
        "membership": verdict,
    }))
}
