//! Evolution of subset fitness predictors: genotypes, operators, selection
//! schemes, fitness evaluators and the generational loop.

mod evaluator;
pub mod export;
pub mod operators;
mod predictor;
mod run;
pub mod selection;

pub use evaluator::{DnnEvaluator, EvalError, Evaluation, FitnessEvaluator, OverlapEvaluator};
pub use operators::{crossover_one_point, init_population, mutate};
pub use predictor::SubsetPredictor;
pub use run::{
    run_evolution, run_evolution_with, CrossoverPoint, EvolutionConfig, EvolutionHistory, IterationRecord, SeedMode,
    Selection,
};
pub use selection::{select_deterministic_crowding, select_elitist, Individual};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvolutionError {
    #[error("invalid evolution config: {0}")]
    InvalidConfig(String),
    #[error("invalid genotype: {0}")]
    InvalidGenotype(String),
    #[error("evaluation failed in iteration {iteration}: {message}")]
    Evaluation { iteration: usize, message: String },
}
