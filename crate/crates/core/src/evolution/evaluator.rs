use std::collections::HashSet;
use std::error::Error;
use std::time::Instant;

use crate::data::Dataset;
use crate::evolution::SubsetPredictor;
use crate::nn::{evaluate_accuracy, train_network, NetworkSpec, TrainConfig};

pub type EvalError = Box<dyn Error + Send + Sync>;

/// Result of scoring one predictor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    /// In `[0, 1]`.
    pub fitness: f64,
    /// Cost reported by the evaluator, in milliseconds.
    pub cost_ms: f64,
}

/// Scores predictors. Implementations must be pure in `(predictor, seed)`
/// and callable from several threads at once.
pub trait FitnessEvaluator: Sync {
    /// Size of the training set the predictors index into.
    fn training_set_size(&self) -> usize;

    fn evaluate(&self, predictor: &SubsetPredictor, seed: u64) -> Result<Evaluation, EvalError>;
}

/// Trains a fresh network on the predictor's samples and returns its
/// accuracy on the full test set.
///
/// Samples are presented in sorted index order, so the fitness depends on
/// the index set and the seed only.
#[derive(Debug, Clone)]
pub struct DnnEvaluator<'a> {
    spec: NetworkSpec,
    train_config: TrainConfig,
    train: &'a Dataset,
    test: &'a Dataset,
}

impl<'a> DnnEvaluator<'a> {
    pub fn new(spec: NetworkSpec, train_config: TrainConfig, train: &'a Dataset, test: &'a Dataset) -> Self {
        Self {
            spec,
            train_config,
            train,
            test,
        }
    }
}

impl FitnessEvaluator for DnnEvaluator<'_> {
    fn training_set_size(&self) -> usize {
        self.train.len()
    }

    fn evaluate(&self, predictor: &SubsetPredictor, seed: u64) -> Result<Evaluation, EvalError> {
        let start = Instant::now();
        let view = self.train.subset(predictor.sorted_indices())?;
        let config = TrainConfig {
            rng_seed: seed,
            ..self.train_config.clone()
        };
        let model = train_network(&self.spec, &view, &config)?;
        let fitness = evaluate_accuracy(&model, &self.test.view())?;
        Ok(Evaluation {
            fitness,
            cost_ms: start.elapsed().as_secs_f64() * 1e3,
        })
    }
}

/// Fitness `|predictor ∩ target| / |predictor|` for a hidden target set.
/// No training involved; used to exercise the evolutionary loop.
#[derive(Debug, Clone)]
pub struct OverlapEvaluator {
    training_set_size: usize,
    target: HashSet<usize>,
}

impl OverlapEvaluator {
    pub fn new(training_set_size: usize, target: impl IntoIterator<Item = usize>) -> Self {
        Self {
            training_set_size,
            target: target.into_iter().collect(),
        }
    }

    /// Target of `target_size` indices drawn uniformly from the training set.
    pub fn random(training_set_size: usize, target_size: usize, seed: u64) -> Self {
        let mut rng = crate::seeded_rng(seed);
        let target = rand::seq::index::sample(&mut rng, training_set_size, target_size);
        Self::new(training_set_size, target)
    }

    pub fn target(&self) -> &HashSet<usize> {
        &self.target
    }
}

impl FitnessEvaluator for OverlapEvaluator {
    fn training_set_size(&self) -> usize {
        self.training_set_size
    }

    fn evaluate(&self, predictor: &SubsetPredictor, _seed: u64) -> Result<Evaluation, EvalError> {
        let hits = predictor.indices().iter().filter(|i| self.target.contains(i)).count();
        Ok(Evaluation {
            fitness: hits as f64 / predictor.len().max(1) as f64,
            cost_ms: 0.0,
        })
    }
}
