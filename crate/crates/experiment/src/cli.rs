//! The `subsevo` command line.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use subsevo_core::evolution::Selection;

use crate::bench::{run_timing_bench, write_bench, NoObserver};
use crate::compare::{compare_selection_strategies, convergence_csv, iterations_to, write_comparison, ConvergenceRow};
use crate::config::{load_config, DataSource, ExperimentConfig};
use crate::plot::{emit_plot, PlotKind};
use crate::runs::{dnn_evaluator, network_for, progress_line, run_evolve, run_train};
use crate::sweep::run_size_sweep;
use crate::{load_splits, write_file, ExperimentError, Result};

#[derive(Debug, Parser)]
#[command(
    name = "subsevo",
    version,
    about = "Evolve training-set subsets that predict network accuracy"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve one population of predictors.
    Evolve(Common),
    /// Evolve predictors at every size of the sweep.
    Sweep(Common),
    /// Time one training epoch at several subset sizes.
    Bench {
        #[command(flatten)]
        common: Common,
        /// Epochs timed per size.
        #[arg(long)]
        repetitions: Option<usize>,
    },
    /// Train the network on the full training set or a predictor's samples.
    Train {
        #[command(flatten)]
        common: Common,
        /// Predictor file written by `evolve`.
        #[arg(long)]
        predictor: Option<PathBuf>,
    },
    /// Draw history or timing CSVs as an SVG line chart.
    Plot {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "fitness")]
        kind: Kind,
        /// CSV files, one line per file.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Run elitist selection and Deterministic Crowding from the same seed.
    Compare {
        #[command(flatten)]
        common: Common,
        /// Fitness level for the iterations-to-threshold report.
        #[arg(long, default_value_t = 0.9)]
        threshold: f64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// TOML configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// MNIST directory; selects the MNIST dataset.
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory (for `plot`, a directory or an .svg path).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated sizes for `sweep` and `bench`.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[arg(long, value_enum)]
    pub selection: Option<SelectionArg>,
    /// No per-iteration output.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SelectionArg {
    Elitist,
    Dc,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Kind {
    Fitness,
    Timing,
}

impl Common {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => load_config(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(dir) = &self.data_dir {
            cfg.dataset.source = DataSource::Mnist;
            cfg.dataset.dir = Some(dir.clone());
        }
        if let Some(seed) = self.seed {
            cfg.set_seed(seed);
        }
        if let Some(out) = &self.out {
            cfg.out_dir = out.clone();
        }
        if let Some(sizes) = &self.sizes {
            cfg.sweep.sizes = sizes.clone();
            cfg.bench.sizes = sizes.clone();
        }
        if let Some(sel) = self.selection {
            cfg.evolution.selection = match sel {
                SelectionArg::Elitist => Selection::Elitist,
                SelectionArg::Dc => Selection::DeterministicCrowding,
            };
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code: 0 success, 2 invalid arguments or configuration,
/// 3 data loading failure, 4 runtime failure.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Evolve(common) => {
            let cfg = common.resolve()?;
            let splits = load_splits(&cfg)?;
            let quiet = common.quiet;
            let h = run_evolve(&cfg, &splits, &cfg.out_dir, &mut |r| {
                if !quiet {
                    println!("{}", progress_line(r));
                }
            })?;
            println!(
                "best fitness {:.6} ({} indices) -> {}",
                h.best.fitness,
                h.best.predictor.len(),
                cfg.out_dir.display()
            );
        }
        Command::Sweep(common) => {
            let cfg = common.resolve()?;
            let splits = load_splits(&cfg)?;
            let quiet = common.quiet;
            let report = run_size_sweep(&cfg, &splits, &cfg.out_dir, &mut |size, r| {
                if !quiet {
                    println!("size {size:>6}  {}", progress_line(r));
                }
            })?;
            for row in &report.rows {
                println!(
                    "size {:>6}  min {:.6}  max {:.6}  reference gap {:.6}",
                    row.size, row.min_fitness, row.max_fitness, row.reference_minus_max
                );
            }
        }
        Command::Bench { common, repetitions } => {
            let mut cfg = common.resolve()?;
            if let Some(r) = repetitions {
                cfg.bench.repetitions = r;
                cfg.validate()?;
            }
            let splits = load_splits(&cfg)?;
            let spec = network_for(&cfg, &splits)?;
            let report = run_timing_bench(
                &spec,
                &cfg.training,
                &splits.train,
                Some(&splits.test),
                &cfg.bench.sizes,
                cfg.bench.repetitions,
                cfg.seed,
                &mut NoObserver,
            )?;
            write_bench(&cfg.out_dir, &report)?;
            for r in &report.records {
                println!("size {:>6}  mean {:.3} ms  std {:.3} ms", r.size, r.mean_ms, r.std_ms);
            }
            let f = report.fit;
            println!(
                "fit: {:.6} ms/sample, intercept {:.3} ms, R^2 {:.4}",
                f.slope, f.intercept, f.r_squared
            );
        }
        Command::Train { common, predictor } => {
            let cfg = common.resolve()?;
            let splits = load_splits(&cfg)?;
            let r = run_train(&cfg, &splits, predictor.as_deref(), &cfg.out_dir)?;
            println!(
                "trained on {} samples, test accuracy {:.6}",
                r.train_size, r.test_accuracy
            );
        }
        Command::Plot { common, kind, inputs } => {
            let out = common.out.clone().unwrap_or_else(|| PathBuf::from("out"));
            let out = if out.extension().is_some_and(|e| e == "svg") {
                out
            } else {
                out.join("plot.svg")
            };
            let kind = match kind {
                Kind::Fitness => PlotKind::FitnessCurve,
                Kind::Timing => PlotKind::TimingLine,
            };
            emit_plot(&inputs, kind, &out)?;
            if !common.quiet {
                println!("wrote {}", out.display());
            }
        }
        Command::Compare { common, threshold } => {
            let cfg = common.resolve()?;
            if !(0.0..=1.0).contains(&threshold) {
                return Err(ExperimentError::Runtime(format!(
                    "threshold {threshold} outside [0, 1]"
                )));
            }
            let splits = load_splits(&cfg)?;
            let eval = dnn_evaluator(&cfg, &splits)?;
            let c = compare_selection_strategies(&cfg.evolution, &eval)?;
            if !common.quiet {
                for (e, d) in c.elitist.records.iter().zip(&c.dc.records) {
                    println!(
                        "iter {:>4}  elitist max {:.6}  dc max {:.6}",
                        e.iteration, e.max_fitness, d.max_fitness
                    );
                }
            }
            write_comparison(&cfg.out_dir, &c)?;
            let row = ConvergenceRow {
                seed: cfg.seed,
                elitist_iterations: iterations_to(&c.elitist, threshold),
                dc_iterations: iterations_to(&c.dc, threshold),
                elitist_final: c.elitist.final_max_fitness(),
                dc_final: c.dc.final_max_fitness(),
            };
            write_file(
                &cfg.out_dir.join("compare").join("report.csv"),
                convergence_csv(std::slice::from_ref(&row), threshold),
            )?;
            println!(
                "final max fitness: elitist {:.6}, dc {:.6}",
                row.elitist_final, row.dc_final
            );
        }
    }
    Ok(())
}
