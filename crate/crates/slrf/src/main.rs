use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use slrf::config::ExperimentConfig;
use slrf::output::{self, RunFile};
use slrf::report::Report;
use slrf::runner::{self, Mode, Plan};
use slrf::{csv_io, model_io};
use slrf_core::rng::{substream, Purpose};
use slrf_core::tuning::grid_search_scores;
use slrf_core::{Dataset, SobolStream};

#[derive(Parser)]
#[command(
    name = "slrf",
    version,
    about = "Sequential learning with random forests, least-confidence sampling and Sobol probes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Overrides {
    /// Experiment configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Master seed; run r uses seed + r.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Execute every run in a config and write per-run results plus a summary.
    Run {
        #[command(flatten)]
        common: Overrides,
        /// Output directory (overrides `output_dir`).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
    },
    /// Aggregate the run results found in an output directory.
    Report {
        /// Output directory of a previous `run`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the first COUNT points of the DIM-dimensional Sobol sequence as CSV.
    SobolDump { dim: usize, count: usize },
    /// Grid-search hyperparameters on the initial split of the first run and print the scores.
    Tune {
        #[command(flatten)]
        common: Overrides,
        /// Search over initial plus candidate samples instead of the initial set alone.
        #[arg(long)]
        all: bool,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        // A closed pipe (`slrf sobol-dump 3 1000 | head`) is a normal way to stop.
        Err(e) if e.downcast_ref::<std::io::Error>().is_some_and(|e| e.kind() == std::io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Run { common, out, runs, mode } => {
            let mut cfg = load_config(&common)?;
            if let Some(out) = out {
                cfg.output_dir = out;
            }
            if let Some(runs) = runs {
                cfg.runs = runs;
            }
            if let Some(mode) = mode {
                cfg.mode = mode;
            }
            cfg.validate()?;
            cmd_run(&cfg)
        }
        Command::Report { out } => cmd_report(&out),
        Command::SobolDump { dim, count } => cmd_sobol_dump(dim, count),
        Command::Tune { common, all } => cmd_tune(&load_config(&common)?, all),
    }
}

fn load_config(o: &Overrides) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(&o.config)?;
    if let Some(seed) = o.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn load_data(cfg: &ExperimentConfig) -> Result<Dataset> {
    let data = csv_io::load_dataset(&cfg.dataset.path, &cfg.dataset.schema)?;
    cfg.check_dataset_size(data.len())?;
    Ok(data)
}

fn cmd_run(cfg: &ExperimentConfig) -> Result<()> {
    // Everything that can fail on input happens before the first file is written.
    let data = load_data(cfg)?;
    let hash = cfg.hash()?;
    let loop_config = cfg.loop_config();
    let baseline_sizes = cfg.baseline_sizes();
    let plan = Plan {
        sizes: cfg.split,
        config: &loop_config,
        mode: cfg.mode,
        baseline_sizes: &baseline_sizes,
        keep_models: cfg.save_models,
    };
    let outcomes = runner::run_seeds(&data, &plan, &cfg.seeds())?;

    let out = &cfg.output_dir;
    let runs_dir = out.join("runs");
    std::fs::create_dir_all(&runs_dir).with_context(|| format!("creating {}", runs_dir.display()))?;
    output::write_atomic(&out.join(format!("config-{hash}.toml")), cfg.to_toml()?.as_bytes())?;
    output::write_atomic(&out.join(format!("dataset-stats-{hash}.csv")), output::dataset_stats_csv(&data).as_bytes())?;

    let schema = data.schema();
    let mut files = Vec::new();
    for o in outcomes {
        let runs = o.sequential.into_iter().chain(o.baselines);
        let with_models = runs.zip(o.models.into_iter().map(Some).chain(std::iter::repeat_with(|| None)));
        for (run, model) in with_models {
            let file = RunFile::new(&hash, &schema.class_names, run);
            output::write_run(&runs_dir, &file)?;
            if let Some(model) = model {
                let dir = out.join("models");
                std::fs::create_dir_all(&dir)?;
                model_io::save(&dir.join(format!("{}.json", file.stem())), schema, &model)?;
            }
            files.push(file);
        }
    }

    let report = Report::build(&files)?;
    output::write_atomic(&out.join(format!("summary-{hash}.json")), serde_json::to_string_pretty(&report)?.as_bytes())?;
    emit(&format!("{}wrote {} runs to {}\n", report.render_comparison(), files.len(), out.display()))
}

fn cmd_report(out: &Path) -> Result<()> {
    let files = output::read_runs(out)?;
    if files.is_empty() {
        anyhow::bail!("no run results under {}", out.join("runs").display());
    }
    let report = Report::build(&files)?;
    let dir = out.join("report");
    report.write(&dir)?;
    emit(&format!("{}wrote tables to {}\n", report.render_comparison(), dir.display()))
}

fn cmd_sobol_dump(dim: usize, count: usize) -> Result<()> {
    let mut stream = SobolStream::new(dim)?;
    let stdout = std::io::stdout();
    let mut w = std::io::BufWriter::new(stdout.lock());
    let mut point = vec![0.0; dim];
    for _ in 0..count {
        stream.next_into(&mut point);
        let row: Vec<String> = point.iter().map(f64::to_string).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_tune(cfg: &ExperimentConfig, all: bool) -> Result<()> {
    let data = load_data(cfg)?;
    let Some(grid) = cfg.param_grid() else {
        anyhow::bail!("grid: tuning needs a grid, but the config sets grid = \"none\"");
    };
    let seed = runner::run_seed_value(cfg.seed, 0);
    let part = runner::split_for_seed(&data, cfg.split, seed)?;
    let mut ids = part.initial.clone();
    if all {
        ids.extend(&part.candidate);
    }
    let samples = data.select(&ids);
    let mut rng = substream(seed, Purpose::GridSearch, 0);
    let n_classes = data.schema().n_classes();
    let result = grid_search_scores(&samples, n_classes, &cfg.classifier, &grid, cfg.loop_settings.folds, &mut rng)?;
    let mut text = format!("# {} samples, {}-fold, seed {seed}\n", samples.len(), cfg.loop_settings.folds);
    for (spec, score) in &result.scores {
        text += &format!("{score:.4}  {}\n", serde_json::to_string(spec)?);
    }
    text += &format!("\n# best (mean validation accuracy {:.4})\n", result.best_score);
    text += &toml::to_string(&Best { classifier: result.best })?;
    emit(&text)
}

fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

#[derive(serde::Serialize)]
struct Best {
    classifier: slrf_core::ClassifierSpec,
}
