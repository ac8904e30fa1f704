use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rwre_lab::acceptance;
use rwre_lab::config::{CheckpointRange, ExperimentConfig, ModelSpec};
use rwre_lab::harness::{self, Stages};
use rwre_lab::LabError;

/// Random walks in random environments: simulation, regeneration analysis
/// and LIL diagnostics.
#[derive(Parser)]
#[command(name = "rwre", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate replicas and write one trajectory CSV and regeneration report each.
    Simulate(RunArgs),
    /// Detect regenerations in a trajectory CSV and print the regeneration report.
    Analyze(AnalyzeArgs),
    /// Estimate v, mean_tau, c_u and the diagnostics; writes estimates.json.
    Estimate(RunArgs),
    /// Compute LIL curves and cross-replica envelopes.
    Lil(RunArgs),
    /// Run the acceptance suite. Exit code 2 if any criterion fails.
    Verify(VerifyArgs),
}

/// Flags override the corresponding fields of `--config`.
#[derive(Args)]
struct RunArgs {
    /// JSON experiment config.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in model: drifted-point-mass, drifted-random or drifted-mixture.
    #[arg(long)]
    preset: Option<String>,
    /// Environment seed used with --fixed-env.
    #[arg(long)]
    env_seed: Option<u64>,
    /// Direction ell, comma separated (e.g. 1,0).
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    ell: Option<Vector>,
    /// Direction u; repeat for several.
    #[arg(long = "u", value_parser = parse_vector, allow_hyphen_values = true)]
    u_list: Vec<Vector>,
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long)]
    replicas: Option<usize>,
    #[arg(long)]
    guard: Option<usize>,
    #[arg(long)]
    master_seed: Option<u64>,
    /// Smallest checkpoint exponent (n = 2^j).
    #[arg(long)]
    min_exp: Option<u32>,
    /// Largest checkpoint exponent.
    #[arg(long)]
    max_exp: Option<u32>,
    /// Tail diagnostic exponent in (0, 1).
    #[arg(long)]
    gamma: Option<f64>,
    /// Tail diagnostic constant.
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, short)]
    output_dir: Option<PathBuf>,
    /// Use one environment for all replicas.
    #[arg(long)]
    fixed_env: bool,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    bootstrap_resamples: Option<usize>,
    /// Do not keep blocks in memory (skips bootstrap, tail and independence diagnostics).
    #[arg(long)]
    no_retain_blocks: bool,
    /// Center Z at this velocity instead of the plug-in estimate.
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    external_velocity: Option<Vector>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Trajectory CSV (step,x1,...,xd,proj).
    file: PathBuf,
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    ell: Vector,
    #[arg(long, default_value_t = 1000)]
    guard: usize,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Only these criteria (e.g. --only 2,9).
    #[arg(long, value_delimiter = ',')]
    only: Vec<u8>,
}

/// A comma-separated vector such as `0.8,0.6`.
#[derive(Clone, Debug)]
struct Vector(Vec<f64>);

fn parse_vector(s: &str) -> Result<Vector, String> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(Vector)
}

impl RunArgs {
    fn into_config(self) -> Result<ExperimentConfig, LabError> {
        let mut cfg = match (&self.config, &self.preset) {
            (Some(path), _) => ExperimentConfig::load(path)?,
            (None, Some(name)) => {
                let model = ModelSpec::preset(name)?;
                let ell = self.ell.clone().map(|v| v.0).unwrap_or_else(|| {
                    let mut e = vec![0.0; model.dimension];
                    e[0] = 1.0;
                    e
                });
                let horizon = self.horizon.ok_or_else(|| LabError::Config("--horizon is required".into()))?;
                ExperimentConfig::new(model, ell, horizon)
            }
            (None, None) => return Err(LabError::Config("give --config FILE or --preset NAME".into())),
        };
        if self.config.is_some() {
            if let Some(name) = &self.preset {
                let env_seed = cfg.model.env_seed;
                cfg.model = ModelSpec::preset(name)?;
                cfg.model.env_seed = env_seed;
            }
        }
        if let Some(Vector(ell)) = self.ell {
            if self.u_list.is_empty() && cfg.u_list == [cfg.ell.clone()] {
                cfg.u_list = vec![ell.clone()];
            }
            cfg.ell = ell;
        }
        if !self.u_list.is_empty() {
            cfg.u_list = self.u_list.into_iter().map(|v| v.0).collect();
        }
        if let Some(s) = self.env_seed {
            cfg.model.env_seed = s;
        }
        macro_rules! set {
            ($($field:ident),*) => { $( if let Some(x) = self.$field { cfg.$field = x; } )* };
        }
        set!(horizon, replicas, guard, master_seed, gamma, c, output_dir, bootstrap_resamples);
        let CheckpointRange { min_exp, max_exp } = cfg.checkpoints;
        cfg.checkpoints = CheckpointRange { min_exp: self.min_exp.unwrap_or(min_exp), max_exp: self.max_exp.unwrap_or(max_exp) };
        cfg.fixed_env |= self.fixed_env;
        if self.workers.is_some() {
            cfg.workers = self.workers;
        }
        if self.no_retain_blocks {
            cfg.retain_blocks = false;
        }
        if self.external_velocity.is_some() {
            cfg.external_velocity = self.external_velocity.map(|v| v.0);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(args: RunArgs, stages: Stages) -> Result<ExitCode, LabError> {
    let cfg = args.into_config()?;
    let manifest = harness::run_experiment(&cfg, stages)?;
    for w in &manifest.warnings {
        eprintln!("warning: {w}");
    }
    println!(
        "{}: wrote {} files to {} in {:.2}s",
        manifest.status,
        manifest.files.len(),
        cfg.output_dir.display(),
        manifest.wall_time_seconds
    );
    Ok(ExitCode::SUCCESS)
}

fn analyze(args: AnalyzeArgs) -> Result<ExitCode, LabError> {
    let report = harness::analyze_file(&args.file, &args.ell.0, args.guard)?;
    match &args.output {
        Some(path) => {
            let f = std::fs::File::create(path).map_err(|e| LabError::Io { path: path.display().to_string(), source: e })?;
            report.write_csv(std::io::BufWriter::new(f))?;
        }
        None => report.write_csv(std::io::stdout().lock())?,
    }
    eprintln!(
        "{} regenerations, {} blocks, {} backtracks, k_n determined for n < {}",
        report.regenerations.len(),
        report.blocks.len(),
        report.regenerations.backtracks,
        report.regenerations.censored_tail_from
    );
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs) -> ExitCode {
    let outcomes = acceptance::run_selected(&args.only, |o| println!("{o}"));
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} of {} criteria passed", outcomes.len() - failed, outcomes.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors; 2 is reserved for failed acceptance.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => run(a, Stages::SIMULATE),
        Command::Estimate(a) => run(a, Stages::ESTIMATE),
        Command::Lil(a) => run(a, Stages::ALL),
        Command::Analyze(a) => analyze(a),
        Command::Verify(a) => return verify(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
