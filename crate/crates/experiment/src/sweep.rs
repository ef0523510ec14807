//! Evolution at several predictor sizes, with a summary of the spread
//! between the worst and best predictor and the gap to full-set training.

use std::fmt::Write as _;
use std::path::Path;

use subsevo_core::evolution::{
    run_evolution_with, EvolutionConfig, EvolutionHistory, FitnessEvaluator, IterationRecord,
};
use subsevo_core::nn::{evaluate_accuracy, train_network};

use crate::config::ExperimentConfig;
use crate::plot::{render_svg, PlotKind};
use crate::runs::{dnn_evaluator, fitness_series, network_for, write_history};
use crate::{write_file, Result, Splits};

pub const SUMMARY_HEADER: &str = "size,min_fitness,max_fitness,max_minus_min,reference_minus_max";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub size: usize,
    pub min_fitness: f64,
    pub max_fitness: f64,
    pub max_minus_min: f64,
    pub reference_minus_max: f64,
}

impl SweepRow {
    /// Lowest and highest fitness over all recorded iterations (the final
    /// population when nothing was recorded).
    pub fn from_history(size: usize, h: &EvolutionHistory, reference: f64) -> Self {
        let (min_fitness, max_fitness) = if h.records.is_empty() {
            let f = h.final_population.iter().map(|i| i.fitness);
            (
                f.clone().fold(f64::INFINITY, f64::min),
                f.fold(f64::NEG_INFINITY, f64::max),
            )
        } else {
            (
                h.records.iter().map(|r| r.min_fitness).fold(f64::INFINITY, f64::min),
                h.records
                    .iter()
                    .map(|r| r.max_fitness)
                    .fold(f64::NEG_INFINITY, f64::max),
            )
        };
        Self {
            size,
            min_fitness,
            max_fitness,
            max_minus_min: max_fitness - min_fitness,
            reference_minus_max: reference - max_fitness,
        }
    }
}

pub fn summary_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(SUMMARY_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{:.6},{:.6},{:.6},{:.6}",
            r.size, r.min_fitness, r.max_fitness, r.max_minus_min, r.reference_minus_max
        );
    }
    s
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub reference: f64,
    pub rows: Vec<SweepRow>,
    pub histories: Vec<(usize, EvolutionHistory)>,
}

/// One evolution per size with any evaluator; sizes run in order.
pub fn sweep_sizes<E: FitnessEvaluator + ?Sized>(
    evolution: &EvolutionConfig,
    sizes: &[usize],
    evaluator: &E,
    on_iteration: &mut dyn FnMut(usize, &IterationRecord),
) -> Result<Vec<(usize, EvolutionHistory)>> {
    sizes
        .iter()
        .map(|&size| {
            let config = EvolutionConfig {
                predictor_size: size,
                ..evolution.clone()
            };
            let h = run_evolution_with(&config, evaluator, |r| on_iteration(size, r))?;
            Ok((size, h))
        })
        .collect()
}

/// Test accuracy of the configured network trained on the whole training set.
pub fn reference_accuracy(cfg: &ExperimentConfig, splits: &Splits) -> Result<f64> {
    let spec = network_for(cfg, splits)?;
    let model = train_network(&spec, &splits.train.view(), &cfg.training)?;
    Ok(evaluate_accuracy(&model, &splits.test.view())?)
}

/// Runs the sweep and writes `sweep/size_<N>/...`, `sweep/summary.csv` and
/// `sweep/fitness.svg` under `out`.
pub fn run_size_sweep(
    cfg: &ExperimentConfig,
    splits: &Splits,
    out: &Path,
    on_iteration: &mut dyn FnMut(usize, &IterationRecord),
) -> Result<SweepReport> {
    let eval = dnn_evaluator(cfg, splits)?;
    let reference = match cfg.sweep.reference_accuracy {
        Some(r) => r,
        None => reference_accuracy(cfg, splits)?,
    };
    let histories = sweep_sizes(&cfg.evolution, &cfg.sweep.sizes, &eval, on_iteration)?;
    let dir = out.join("sweep");
    let mut series = Vec::new();
    let mut rows = Vec::new();
    for (size, h) in &histories {
        let name = format!("size_{size}");
        write_history(&dir.join(&name), &name, h, cfg.seed)?;
        series.push(fitness_series(&name, h));
        rows.push(SweepRow::from_history(*size, h, reference));
    }
    write_file(&dir.join("summary.csv"), summary_csv(&rows))?;
    write_file(&dir.join("fitness.svg"), render_svg(&series, PlotKind::FitnessCurve))?;
    Ok(SweepReport {
        reference,
        rows,
        histories,
    })
}
