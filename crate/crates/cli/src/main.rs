use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use argpsl::baselines::{run_baseline, Baseline};
use argpsl::chain::{build_indirect, emit_pair_manifest};
use argpsl::evaluation::{evaluate, DEFAULT_RESAMPLES};
use argpsl::io::{
    load_arguments, load_dataset, read_predictions, write_arguments, write_atomic, write_jsonl, write_scores,
};
use argpsl::model::{Split, TaskMode};
use argpsl::predicates::Mechanism;
use argpsl::psl::infer;
use argpsl::ruleset::{sweep, ConfigFile};
use argpsl::synth::{generate, plant_chain_scenario, SynthConfig};
use argpsl::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "argpsl", version, about = "Soft-logic inference of support and attack relations between arguments")]
struct Cli {
    /// Worker threads for inference and bootstrap (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// More log output (-v info, -vv debug). RUST_LOG overrides.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the pairs that still need score bundles, building indirect pairs first.
    Plan(PlanArgs),
    /// Run MAP inference and write one prediction per direct pair.
    Infer(InferArgs),
    /// Select chain and prior weights by the validation objective.
    Sweep(SweepArgs),
    /// Score predictions against gold labels, optionally against a second system.
    Eval(EvalArgs),
    /// Run an unsupervised baseline.
    Baseline(BaselineArgs),
    /// Generate a synthetic dataset.
    Synth(SynthArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Ternary,
    Binary,
}

impl From<Mode> for TaskMode {
    fn from(m: Mode) -> TaskMode {
        match m {
            Mode::Ternary => TaskMode::Ternary,
            Mode::Binary => TaskMode::Binary,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum MechanismArg {
    Fact,
    Sentiment,
    Causal,
    Normative,
}

impl From<MechanismArg> for Mechanism {
    fn from(m: MechanismArg) -> Mechanism {
        match m {
            MechanismArg::Fact => Mechanism::Fact,
            MechanismArg::Sentiment => Mechanism::Sentiment,
            MechanismArg::Causal => Mechanism::Causal,
            MechanismArg::Normative => Mechanism::Normative,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichBaseline {
    Random,
    Sentiment,
    Entailment,
}

#[derive(Clone, Copy, ValueEnum)]
enum SplitArg {
    Fit,
    Val,
    Test,
    All,
}

#[derive(Args)]
struct RuleArgs {
    /// JSON configuration: rule weights, solver parameters and sweep grids.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long, value_enum)]
    chains: Option<Switch>,
    /// Force a mechanism's predicates absent; repeatable.
    #[arg(long, value_enum)]
    ablate: Vec<MechanismArg>,
}

impl RuleArgs {
    fn resolve(&self) -> Result<ConfigFile> {
        let mut file = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        if let Some(mode) = self.mode {
            file.rules.task_mode = mode.into();
        }
        if let Some(chains) = self.chains {
            file.rules.chains = chains == Switch::On;
        }
        file.rules.ablate.extend(self.ablate.iter().map(|&m| Mechanism::from(m)));
        file.rules.validate()?;
        file.solver.validate()?;
        Ok(file)
    }
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long)]
    arguments: PathBuf,
    /// Existing score bundles; pairs covered here are left out of the manifest.
    #[arg(long)]
    scores: Option<PathBuf>,
    /// Manifest of unscored pairs.
    #[arg(long)]
    out: PathBuf,
    /// Also write the arguments file with the indirect pairs added.
    #[arg(long)]
    out_arguments: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "ternary")]
    mode: Mode,
    #[arg(long, value_enum, default_value = "on")]
    chains: Switch,
}

#[derive(Args)]
struct InferArgs {
    #[arg(long)]
    arguments: PathBuf,
    #[arg(long)]
    scores: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    rules: RuleArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    arguments: PathBuf,
    #[arg(long)]
    scores: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    rules: RuleArgs,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    predictions: PathBuf,
    #[arg(long)]
    arguments: PathBuf,
    /// Predictions of a reference system for the paired bootstrap.
    #[arg(long)]
    compare: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "test")]
    split: SplitArg,
    #[arg(long, value_enum, default_value = "ternary")]
    mode: Mode,
    #[arg(long, default_value_t = DEFAULT_RESAMPLES)]
    resamples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON report; the text table always goes to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BaselineArgs {
    #[arg(long)]
    arguments: PathBuf,
    #[arg(long)]
    scores: PathBuf,
    #[arg(long, value_enum)]
    which: WhichBaseline,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "ternary")]
    mode: Mode,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    /// JSON generator configuration; defaults are used for missing fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Binary mode folds the neutral fraction into support and attack.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Strip the evidence from this fraction of tree edges and list them in masked.txt.
    #[arg(long)]
    mask_fraction: Option<f64>,
    #[arg(long)]
    out_dir: PathBuf,
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    write_atomic(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value).map_err(std::io::Error::other)?;
        writeln!(w)
    })
}

fn cmd_plan(args: &PlanArgs) -> Result<()> {
    let mut warnings = Vec::new();
    let graph = load_arguments(&args.arguments, args.mode.into(), &mut warnings)?;
    let scores = match &args.scores {
        Some(path) => argpsl::io::load_scores(path, &graph, &mut warnings)?,
        None => BTreeMap::new(),
    };
    for w in &warnings {
        log::warn!("{w}");
    }
    let graph = if args.chains == Switch::On { build_indirect(&graph).0 } else { graph };
    let manifest = emit_pair_manifest(&graph, &scores);
    log::info!("{} of {} pairs need scores", manifest.len(), graph.len());
    write_jsonl(&args.out, &manifest)?;
    if let Some(path) = &args.out_arguments {
        write_arguments(path, &graph)?;
    }
    Ok(())
}

fn cmd_infer(args: &InferArgs) -> Result<()> {
    let config = args.rules.resolve()?;
    let data = load_dataset(&args.arguments, &args.scores, config.rules.task_mode)?;
    let outcome = infer(&data.graph, &data.scores, &config.rules, &config.solver)?;
    for (i, c) in outcome.components.iter().enumerate() {
        log::debug!(
            "component {i}: {} pairs, {} potentials, energy {:.6}, {} iterations, converged {}",
            c.pairs,
            c.potentials,
            c.energy,
            c.diagnostics.iterations,
            c.diagnostics.converged
        );
    }
    log::info!(
        "{} components, total energy {:.6}, potentials {:?}",
        outcome.components.len(),
        outcome.total_energy,
        outcome.potential_counts
    );
    write_jsonl(&args.out, &outcome.direct_records())
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let config = args.rules.resolve()?;
    let data = load_dataset(&args.arguments, &args.scores, config.rules.task_mode)?;
    let configs = config.grid.expand(&config.rules)?;
    let report = sweep(&configs, &data, &config.solver)?;
    let best = report.best_config();
    log::info!("best of {}: w_chain {} w_prior {}", report.entries.len(), best.w_chain, best.w_prior);
    write_json(&args.out, &report)
}

fn cmd_eval(args: &EvalArgs) -> Result<()> {
    let mut warnings = Vec::new();
    let graph = load_arguments(&args.arguments, args.mode.into(), &mut warnings)?;
    for w in &warnings {
        log::warn!("{w}");
    }
    let predictions = read_predictions(&args.predictions)?;
    let baseline = args.compare.as_deref().map(read_predictions).transpose()?;
    let split = match args.split {
        SplitArg::Fit => Some(Split::Fit),
        SplitArg::Val => Some(Split::Val),
        SplitArg::Test => Some(Split::Test),
        SplitArg::All => None,
    };
    let report = evaluate(&predictions, baseline.as_deref(), &graph, split, args.resamples, args.seed)?;
    let name = args.predictions.file_stem().map_or("system".into(), |s| s.to_string_lossy().into_owned());
    let other = args
        .compare
        .as_ref()
        .and_then(|p| p.file_stem())
        .map_or("reference".into(), |s| s.to_string_lossy().into_owned());
    print!("{}", report.to_table(&name, &other));
    if let Some(path) = &args.out {
        write_json(path, &report)?;
    }
    Ok(())
}

fn cmd_baseline(args: &BaselineArgs) -> Result<()> {
    let data = load_dataset(&args.arguments, &args.scores, args.mode.into())?;
    let which = match args.which {
        WhichBaseline::Random => Baseline::Random,
        WhichBaseline::Sentiment => Baseline::Sentiment,
        WhichBaseline::Entailment => Baseline::Entailment,
    };
    write_jsonl(&args.out, &run_baseline(which, &data.graph, &data.scores, args.seed))
}

fn cmd_synth(args: &SynthArgs) -> Result<()> {
    let mut config = match &args.config {
        Some(path) => SynthConfig::load(path)?,
        None => SynthConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(mode) = args.mode {
        config.task_mode = mode.into();
        if config.task_mode == TaskMode::Binary && config.fractions.neutral > 0.0 {
            let f = &mut config.fractions;
            let kept = f.support + f.attack;
            if kept > 0.0 {
                f.support /= kept;
                f.attack /= kept;
            }
            f.neutral = 0.0;
        }
    }
    std::fs::create_dir_all(&args.out_dir).map_err(|e| Error::Io { path: args.out_dir.clone(), source: e })?;
    let (data, masked) = match args.mask_fraction {
        Some(fraction) => {
            let scenario = plant_chain_scenario(&config, fraction)?;
            (scenario.dataset, Some(scenario.masked))
        }
        None => (generate(&config)?, None),
    };
    write_arguments(&args.out_dir.join("arguments.jsonl"), &data.graph)?;
    write_scores(&args.out_dir.join("scores.jsonl"), data.scores.values())?;
    if let Some(masked) = masked {
        write_atomic(&args.out_dir.join("masked.txt"), |w| {
            for id in &masked {
                writeln!(w, "{id}")?;
            }
            Ok(())
        })?;
    }
    log::info!("wrote {} pairs to {}", data.graph.len(), args.out_dir.display());
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Error::Config("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Error::Config(format!("cannot start {jobs} worker threads: {e}")))?;
    }
    match &cli.command {
        Command::Plan(a) => cmd_plan(a),
        Command::Infer(a) => cmd_infer(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Baseline(a) => cmd_baseline(a),
        Command::Synth(a) => cmd_synth(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 1 })
        }
    }
}
