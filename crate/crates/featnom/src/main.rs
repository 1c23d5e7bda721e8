use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use featnom::config::{resolve, SweepKind, SweepOverrides};
use featnom::nominate::{nominate_files, NominateJob};
use featnom::simulate::{write_connectome, write_sim};
use featnom::suite::{run_suite, write_suite, SuiteOptions};
use featnom::sweep::run_and_write;
use featnom_core::gmm_nominate::{Inputs, PipelineOptions};
use featnom_core::models::{bundled_instance, BUNDLED_INSTANCES};

#[derive(Parser)]
#[command(name = "featnom", version, about = "Vertex nomination with and without features")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a simulated graph pair to disk.
    Simulate {
        #[command(subcommand)]
        model: Model,
    },
    /// Vary the graph signal; compare graph+features with features only.
    EpsSweep(SweepArgs),
    /// Vary the feature signal; compare graph+features with the graph only.
    DeltaSweep(SweepArgs),
    /// Exact losses, informations and checks on the bundled instances.
    OracleSuite {
        /// Instances to run; all when omitted.
        #[arg(long, value_delimiter = ',')]
        instances: Vec<String>,
        #[arg(long, default_value_t = 100)]
        random_schemes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out/oracle")]
        out: PathBuf,
    },
    /// Nominate vertices of a second graph from files.
    Nominate(NominateArgs),
}

#[derive(Subcommand)]
enum Model {
    /// The five-block blockmodel pair with Gaussian features.
    Sbm {
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long, default_value_t = 250)]
        order: usize,
        #[arg(long, default_value_t = 10)]
        seeds: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// The synthetic two-graph connectome with neuron types.
    Connectome {
        #[arg(long, default_value_t = 20)]
        seeds: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SweepArgs {
    /// TOML file with any of the flag names below as keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    delta: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    ks: Option<Vec<usize>>,
    #[arg(long)]
    trials: Option<usize>,
    /// Use the full trial count.
    #[arg(long)]
    paper_scale: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    components: Option<usize>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

impl SweepArgs {
    fn overrides(&self) -> SweepOverrides {
        SweepOverrides {
            eps: self.eps.clone(),
            delta: self.delta.clone(),
            ks: self.ks.clone(),
            trials: self.trials,
            paper_scale: self.paper_scale.then_some(true),
            seed: self.seed,
            order: self.order,
            seeds: self.seeds,
            dim: self.dim,
            components: self.components,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum InputsArg {
    Gf,
    G,
    F,
}

impl From<InputsArg> for Inputs {
    fn from(a: InputsArg) -> Self {
        match a {
            InputsArg::Gf => Inputs::GraphAndFeatures,
            InputsArg::G => Inputs::GraphOnly,
            InputsArg::F => Inputs::FeaturesOnly,
        }
    }
}

#[derive(Args)]
struct NominateArgs {
    /// Edge list of the first graph (`u v [weight]`).
    #[arg(long)]
    g1: PathBuf,
    #[arg(long)]
    g2: PathBuf,
    /// Feature CSV of the first graph, header `vertex,...`.
    #[arg(long)]
    features1: Option<PathBuf>,
    /// Feature CSV of the second graph; defaults to the first.
    #[arg(long)]
    features2: Option<PathBuf>,
    /// Seed pairs `a b`.
    #[arg(long)]
    seeds: PathBuf,
    /// Vertices of interest in the first graph.
    #[arg(long)]
    interest: Option<PathBuf>,
    /// Known pairs `a b` used to score the ranking.
    #[arg(long)]
    matches: Option<PathBuf>,
    /// Vertex count of both graphs.
    #[arg(long)]
    order: Option<usize>,
    /// Input choices, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "gf")]
    inputs: Vec<InputsArg>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    components: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Standardize feature columns before use.
    #[arg(long)]
    scale_features: bool,
    #[arg(long, default_value = "out/nominate")]
    out: PathBuf,
}

fn sweep(kind: SweepKind, args: &SweepArgs) -> Result<()> {
    let file = args.config.as_deref().map(SweepOverrides::from_file).transpose()?;
    let cfg = resolve(kind, file.as_ref(), &args.overrides())?;
    log::info!("{}: {} grid points x {} trials", kind.name(), cfg.grid().len(), cfg.trials);
    let rows = run_and_write(&cfg, &args.out)?;
    for r in rows {
        println!(
            "eps={} delta={} k={} diff={:.3} se={:.3}",
            r.eps, r.delta, r.k, r.mean_diff, r.se_diff
        );
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Simulate { model } => match model {
            Model::Sbm { eps, delta, order, seeds, seed, out } => write_sim(&out, eps, delta, order, seeds, seed)?,
            Model::Connectome { seeds, seed, out } => write_connectome(&out, seeds, seed)?,
        },
        Command::EpsSweep(args) => sweep(SweepKind::Eps, &args)?,
        Command::DeltaSweep(args) => sweep(SweepKind::Delta, &args)?,
        Command::OracleSuite { instances, random_schemes, seed, out } => {
            let chosen = if instances.is_empty() {
                BUNDLED_INSTANCES.to_vec()
            } else {
                instances
                    .iter()
                    .map(|n| bundled_instance(n).with_context(|| format!("unknown instance `{n}`")))
                    .collect::<Result<Vec<_>>>()?
            };
            let report = run_suite(&chosen, &SuiteOptions { random_schemes, seed })?;
            write_suite(&out, &report)?;
            print!("{}", report.verdict());
            if !report.passed() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Nominate(a) => {
            let job = NominateJob {
                g1: a.g1,
                g2: a.g2,
                features1: a.features1,
                features2: a.features2,
                seeds: a.seeds,
                interest: a.interest,
                matches: a.matches,
                order: a.order,
                inputs: a.inputs.into_iter().map(Inputs::from).collect(),
                options: PipelineOptions {
                    dim: a.dim,
                    components: a.components,
                    seed: a.seed,
                    scale_features: a.scale_features,
                    ..PipelineOptions::default()
                },
                out: a.out,
            };
            for r in nominate_files(&job)? {
                let y10 = r.curve.get(9).or(r.curve.last()).copied().unwrap_or(0);
                println!(
                    "{}: dim={} components={} y(10)={y10}",
                    r.inputs.name(),
                    r.dim.map_or("-".to_owned(), |d| d.to_string()),
                    r.components
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
