use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use stratrec::adpar::{
    adpar_brute, adpar_exact, baseline_mbb, baseline_one_dim, DEFAULT_SUBSET_CAP,
};
use stratrec::batchstrat::{BatchStrat, Objective};
use stratrec::harness::{self, io, verify, ExperimentKind, ExperimentSpec};
use stratrec::synthgen::{gen_instance, GenConfig, LatencySlope, StrategyDist};
use stratrec::workforce::{AggregationMode, ModelSet, RequirementSemantics};
use stratrec::{Error, Result};

#[derive(Parser)]
#[command(
    name = "stratrec",
    version,
    about = "Deployment strategy recommendation for crowdsourcing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dist {
    Uniform,
    Normal,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Sum,
    Max,
}

#[derive(Clone, Copy, ValueEnum)]
enum Goal {
    Throughput,
    Payoff,
}

#[derive(Clone, Copy, ValueEnum)]
enum Semantics {
    MaxOfThree,
    Strict,
}

#[derive(Clone, Copy, ValueEnum)]
enum Latency {
    Physical,
    Positive,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exact,
    Brute,
    OneDim,
    Mbb,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic catalog, batch and model set.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        strategies: usize,
        #[arg(long, default_value_t = 10)]
        batch: usize,
        #[arg(long = "k", default_value_t = 10)]
        k: usize,
        #[arg(long, value_enum, default_value = "normal")]
        dist: Dist,
        #[arg(long, value_enum, default_value = "physical")]
        latency: Latency,
        /// Directory receiving strategies.csv, requests.csv and models.csv.
        #[arg(long)]
        output: PathBuf,
    },
    /// Plan a request batch against a catalog.
    Plan {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        requests: PathBuf,
        /// Models file; without it every strategy keeps its catalog point at
        /// any availability.
        #[arg(long)]
        models: Option<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        availability: f64,
        #[arg(long, value_enum, default_value = "sum")]
        mode: Mode,
        #[arg(long, value_enum, default_value = "throughput")]
        objective: Goal,
        #[arg(long, value_enum, default_value = "max-of-three")]
        semantics: Semantics,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Recommend relaxed parameters for every request of a file.
    Adpar {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        requests: PathBuf,
        /// Overrides the cardinality stored with each request.
        #[arg(long = "k")]
        k: Option<usize>,
        #[arg(long, value_enum, default_value = "exact")]
        method: Method,
        /// Seed for the box baseline's random pick.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run an experiment sweep and write a CSV table.
    Experiment {
        #[arg(long)]
        kind: Option<String>,
        /// key = value settings; flags given here override them.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        sweep: Option<String>,
        /// Comma-separated sweep values.
        #[arg(long)]
        values: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        strategies: Option<usize>,
        #[arg(long)]
        batch: Option<usize>,
        #[arg(long = "k")]
        k: Option<usize>,
        #[arg(long)]
        availability: Option<f64>,
        #[arg(long, value_enum)]
        dist: Option<Dist>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check the planners and the relaxation against exhaustive search.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn mode(m: Mode) -> AggregationMode {
    match m {
        Mode::Sum => AggregationMode::Sum,
        Mode::Max => AggregationMode::Max,
    }
}

fn dist(d: Dist) -> StrategyDist {
    match d {
        Dist::Uniform => StrategyDist::Uniform,
        Dist::Normal => StrategyDist::Normal,
    }
}

/// Runs `body` against the output file, or stdout when none is given.
fn emit(output: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match output {
        Some(path) => {
            let mut f = io::create(path)?;
            body(&mut f)?;
            f.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen {
            seed,
            strategies,
            batch,
            k,
            dist: d,
            latency,
            output,
        } => {
            let cfg = GenConfig {
                seed,
                strategy_count: strategies,
                batch_size: batch,
                k,
                strategy_dist: dist(d),
                latency_slope: match latency {
                    Latency::Physical => LatencySlope::Physical,
                    Latency::Positive => LatencySlope::Positive,
                },
                ..GenConfig::default()
            };
            let inst = gen_instance(&cfg)?;
            emit(Some(&output.join("strategies.csv")), |w| {
                io::write_strategies(w, &inst.catalog)
            })?;
            emit(Some(&output.join("requests.csv")), |w| {
                io::write_requests(w, &inst.batch)
            })?;
            emit(Some(&output.join("models.csv")), |w| {
                io::write_models(w, &inst.models)
            })?;
        }
        Command::Plan {
            catalog,
            requests,
            models,
            availability,
            mode: m,
            objective,
            semantics,
            output,
        } => {
            let catalog = io::load_strategies(&catalog)?;
            let batch = io::load_requests(&requests)?;
            let models = match models {
                Some(p) => io::load_models(&p)?,
                None => ModelSet::constant(&catalog),
            };
            let objective = match objective {
                Goal::Throughput => Objective::Throughput,
                Goal::Payoff => Objective::Payoff,
            };
            let semantics = match semantics {
                Semantics::MaxOfThree => RequirementSemantics::MaxOfThree,
                Semantics::Strict => RequirementSemantics::FeasibilityStrict,
            };
            let outcome = BatchStrat::new(semantics, mode(m), objective).run(
                &batch,
                &catalog,
                &models,
                availability,
            )?;
            emit(output.as_deref(), |w| {
                io::write_plan(w, &batch, &outcome, objective)
            })?;
        }
        Command::Adpar {
            catalog,
            requests,
            k,
            method,
            seed,
            output,
        } => {
            let catalog = io::load_strategies(&catalog)?;
            let batch = io::load_requests(&requests)?;
            let mut rows = Vec::with_capacity(batch.len());
            for d in batch {
                let k = k.unwrap_or(d.k());
                let r = match method {
                    Method::Exact => adpar_exact(&catalog, &d, k)?,
                    Method::Brute => adpar_brute(&catalog, &d, k, DEFAULT_SUBSET_CAP)?,
                    Method::Mbb => baseline_mbb(&catalog, &d, k, seed ^ u64::from(d.id().0))?,
                    Method::OneDim => baseline_one_dim(&catalog, &d, k)?
                        .ok_or(Error::Cardinality { k, available: 0 })?,
                };
                rows.push((d, r));
            }
            emit(output.as_deref(), |w| io::write_adpar(w, &rows))?;
        }
        Command::Experiment {
            kind,
            config,
            sweep,
            values,
            seed,
            strategies,
            batch,
            k,
            availability,
            dist: d,
            mode: m,
            trials,
            output,
        } => {
            let file = match &config {
                Some(p) => {
                    let text = std::fs::read_to_string(p)
                        .map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
                    harness::parse_config(&text, &p.display().to_string())?
                }
                None => Vec::new(),
            };
            let kind_name = kind
                .clone()
                .or_else(|| {
                    file.iter()
                        .rev()
                        .find(|(k, _)| k == "kind")
                        .map(|(_, v)| v.clone())
                })
                .ok_or_else(|| {
                    Error::Config("experiment kind is required (--kind or kind = ...)".into())
                })?;
            let kind = ExperimentKind::parse(&kind_name)
                .ok_or_else(|| Error::Config(format!("unknown experiment kind {kind_name:?}")))?;
            let mut spec = ExperimentSpec::defaults(kind);
            for (key, value) in file.iter().filter(|(k, _)| k != "kind") {
                harness::apply_setting(&mut spec, key, value)?;
            }
            let flags: [(&str, Option<String>); 10] = [
                ("sweep", sweep),
                ("values", values),
                ("seed", seed.map(|v| v.to_string())),
                ("strategies", strategies.map(|v| v.to_string())),
                ("batch", batch.map(|v| v.to_string())),
                ("k", k.map(|v| v.to_string())),
                ("availability", availability.map(|v| v.to_string())),
                ("dist", d.map(|v| dist(v).name().to_string())),
                ("mode", m.map(|v| mode(v).name().to_string())),
                ("trials", trials.map(|v| v.to_string())),
            ];
            for (key, value) in flags {
                if let Some(v) = value {
                    harness::apply_setting(&mut spec, key, &v)?;
                }
            }
            if let Some(p) = output {
                spec.output = Some(p);
            }
            let table = harness::run(&spec)?;
            match &spec.output {
                Some(path) => {
                    if let Some(timing) = table.write_files(path)? {
                        eprintln!("timings written to {}", timing.display());
                    }
                }
                None => emit(None, |w| table.write_csv(w))?,
            }
        }
        Command::Verify { seed, output } => {
            let checks = verify::run_suite(seed)?;
            emit(output.as_deref(), |w| {
                for c in &checks {
                    writeln!(w, "{c}")?;
                }
                Ok(())
            })?;
            if let Some(failed) = checks.iter().find(|c| !c.passed) {
                return Err(Error::Validation {
                    what: "verification".into(),
                    reason: format!("check {} failed", failed.name),
                });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors are validation errors; clap's own code 2 means
            // infeasibility here.
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
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
