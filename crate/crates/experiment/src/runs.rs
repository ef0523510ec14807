//! Single evolution runs and plain training runs.

use std::path::Path;

use subsevo_core::evolution::export::{history_csv, parse_predictor_text, predictor_text};
use subsevo_core::evolution::{run_evolution_with, DnnEvaluator, EvolutionHistory, IterationRecord};
use subsevo_core::nn::format::to_bytes;
use subsevo_core::nn::{evaluate_accuracy, train_network, NetworkSpec};

use crate::config::{selection_name, ExperimentConfig};
use crate::plot::{render_svg, PlotKind, Series};
use crate::{write_file, ExperimentError, Result, Splits};

pub fn network_for(cfg: &ExperimentConfig, splits: &Splits) -> Result<NetworkSpec> {
    Ok(cfg
        .network
        .build(splits.train.sample_shape(), splits.train.num_classes())?)
}

pub fn dnn_evaluator<'a>(cfg: &ExperimentConfig, splits: &'a Splits) -> Result<DnnEvaluator<'a>> {
    Ok(DnnEvaluator::new(
        network_for(cfg, splits)?,
        cfg.training.clone(),
        &splits.train,
        &splits.test,
    ))
}

pub fn progress_line(r: &IterationRecord) -> String {
    format!(
        "iter {:>4}  max {:.6}  mean {:.6}  min {:.6}",
        r.iteration, r.max_fitness, r.mean_fitness, r.min_fitness
    )
}

pub fn fitness_series(name: &str, h: &EvolutionHistory) -> Series {
    Series {
        name: name.to_string(),
        points: h.records.iter().map(|r| (r.iteration as f64, r.max_fitness)).collect(),
    }
}

/// Writes `history.csv`, `best_predictor.txt` and `fitness.svg` into `dir`.
pub fn write_history(dir: &Path, name: &str, h: &EvolutionHistory, seed: u64) -> Result<()> {
    write_file(&dir.join("history.csv"), history_csv(h))?;
    write_file(&dir.join("best_predictor.txt"), predictor_text(&h.best.predictor, seed))?;
    write_file(
        &dir.join("fitness.svg"),
        render_svg(&[fitness_series(name, h)], PlotKind::FitnessCurve),
    )
}

/// One evolution run with the network evaluator; outputs go to `out`.
pub fn run_evolve(
    cfg: &ExperimentConfig,
    splits: &Splits,
    out: &Path,
    on_iteration: &mut dyn FnMut(&IterationRecord),
) -> Result<EvolutionHistory> {
    let eval = dnn_evaluator(cfg, splits)?;
    let h = run_evolution_with(&cfg.evolution, &eval, |r| on_iteration(r))?;
    write_history(out, selection_name(cfg.evolution.selection), &h, cfg.seed)?;
    Ok(h)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    pub train_size: usize,
    pub test_accuracy: f64,
}

/// Trains the configured network on the whole training set, or on the
/// samples of a predictor file, and reports test accuracy. Writes
/// `model.sevm` and `train.csv` into `out`.
pub fn run_train(cfg: &ExperimentConfig, splits: &Splits, predictor: Option<&Path>, out: &Path) -> Result<TrainReport> {
    let spec = network_for(cfg, splits)?;
    let indices = match predictor {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ExperimentError::Runtime(format!("cannot read {}: {e}", path.display())))?;
            let (p, _) = parse_predictor_text(&text, splits.train.len())?;
            p.sorted_indices()
        }
        None => (0..splits.train.len()).collect(),
    };
    let view = splits.train.subset(indices)?;
    let model = train_network(&spec, &view, &cfg.training)?;
    let test_accuracy = evaluate_accuracy(&model, &splits.test.view())?;
    write_file(&out.join("model.sevm"), to_bytes(&model))?;
    write_file(
        &out.join("train.csv"),
        format!("train_size,test_accuracy\n{},{test_accuracy:.6}\n", view.len()),
    )?;
    Ok(TrainReport {
        train_size: view.len(),
        test_accuracy,
    })
}
