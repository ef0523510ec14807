use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::evolution::operators::{crossover_one_point, init_population, mutate};
use crate::evolution::selection::{select_deterministic_crowding, select_elitist, Individual};
use crate::evolution::{EvolutionError, FitnessEvaluator, SubsetPredictor};
use crate::{mix_seed, seeded_rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossoverPoint {
    /// Uniform in `1..S` for every crossover.
    Random,
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    Elitist,
    DeterministicCrowding,
}

/// How the training seed of an evaluation is derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedMode {
    /// From the run seed and the predictor's index set. Fitness is then a
    /// function of the genotype, and survivors are never re-evaluated.
    PerGenotype,
    /// From the run seed and the generation. Every individual is
    /// re-evaluated at the start of each generation.
    PerGeneration,
}

/// Settings of the generational loop. Defaults: population 128, 100
/// iterations, crossover 0.75, mutation 0.01, random one-point crossover,
/// elitist selection, predictor size 100.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionConfig {
    pub population_size: usize,
    pub iterations: usize,
    pub crossover_probability: f64,
    pub mutation_probability: f64,
    pub crossover_point: CrossoverPoint,
    pub selection: Selection,
    pub predictor_size: usize,
    pub rng_seed: u64,
    pub evaluation_seed_mode: SeedMode,
    /// Store evaluator-reported milliseconds in the history. Off by default
    /// because wall-clock values make reruns differ.
    pub record_eval_time: bool,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            population_size: 128,
            iterations: 100,
            crossover_probability: 0.75,
            mutation_probability: 0.01,
            crossover_point: CrossoverPoint::Random,
            selection: Selection::Elitist,
            predictor_size: 100,
            rng_seed: 0,
            evaluation_seed_mode: SeedMode::PerGenotype,
            record_eval_time: false,
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<(), EvolutionError> {
        let bad = |m: String| Err(EvolutionError::InvalidConfig(m));
        if self.population_size < 2 || !self.population_size.is_multiple_of(2) {
            return bad(format!(
                "population_size must be even and at least 2, got {}",
                self.population_size
            ));
        }
        if self.predictor_size == 0 {
            return bad("predictor_size must be at least 1".to_string());
        }
        for (name, p) in [
            ("crossover_probability", self.crossover_probability),
            ("mutation_probability", self.mutation_probability),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} must lie in [0, 1], got {p}"));
            }
        }
        if let CrossoverPoint::Fixed(k) = self.crossover_point {
            if k > self.predictor_size {
                return bad(format!(
                    "crossover point {k} beyond predictor size {}",
                    self.predictor_size
                ));
            }
        }
        Ok(())
    }
}

/// Population statistics at the start of one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub max_fitness: f64,
    pub mean_fitness: f64,
    pub min_fitness: f64,
    /// First individual with the maximum fitness.
    pub best: SubsetPredictor,
    /// Evaluation milliseconds spent during this iteration (0 unless
    /// `record_eval_time` is set).
    pub eval_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionHistory {
    /// One record per iteration; record `i` describes the population that
    /// iteration `i` breeds from, so record 0 is the initial population.
    pub records: Vec<IterationRecord>,
    /// Population after the last selection.
    pub final_population: Vec<Individual>,
    /// Fittest individual seen in any recorded or final population.
    pub best: Individual,
}

impl EvolutionHistory {
    pub fn max_fitness_trace(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.max_fitness).collect()
    }

    /// Maximum fitness of the final population.
    pub fn final_max_fitness(&self) -> f64 {
        max_of(&self.final_population)
    }
}

fn max_of(pop: &[Individual]) -> f64 {
    pop.iter().map(|i| i.fitness).fold(f64::NEG_INFINITY, f64::max)
}

const GENERATION_STREAM: u64 = 0x5eed_9e4e_7a71_0000;

struct Evaluator<'e, E: FitnessEvaluator + ?Sized> {
    inner: &'e E,
    mode: SeedMode,
    run_seed: u64,
}

impl<E: FitnessEvaluator + ?Sized> Evaluator<'_, E> {
    fn seed(&self, p: &SubsetPredictor, generation: usize) -> u64 {
        match self.mode {
            SeedMode::PerGenotype => mix_seed(self.run_seed, p.fingerprint()),
            SeedMode::PerGeneration => mix_seed(self.run_seed ^ GENERATION_STREAM, generation as u64),
        }
    }

    /// Scores `predictors` in parallel; results come back in input order.
    fn score(
        &self,
        predictors: Vec<SubsetPredictor>,
        generation: usize,
        spent_ms: &mut f64,
    ) -> Result<Vec<Individual>, EvolutionError> {
        let results: Vec<_> = predictors
            .par_iter()
            .map(|p| self.inner.evaluate(p, self.seed(p, generation)))
            .collect();
        predictors
            .into_iter()
            .zip(results)
            .map(|(predictor, r)| {
                let e = r.map_err(|source| EvolutionError::Evaluation {
                    iteration: generation,
                    message: source.to_string(),
                })?;
                if !(0.0..=1.0).contains(&e.fitness) {
                    return Err(EvolutionError::Evaluation {
                        iteration: generation,
                        message: format!("fitness {} outside [0, 1]", e.fitness),
                    });
                }
                *spent_ms += e.cost_ms;
                Ok(Individual {
                    predictor,
                    fitness: e.fitness,
                })
            })
            .collect()
    }
}

/// Runs the generational loop; see [`run_evolution_with`].
pub fn run_evolution<E: FitnessEvaluator + ?Sized>(
    config: &EvolutionConfig,
    evaluator: &E,
) -> Result<EvolutionHistory, EvolutionError> {
    run_evolution_with(config, evaluator, |_| {})
}

/// Evolves a population of predictors.
///
/// Each iteration records the statistics of the current population, pairs
/// it into random disjoint families, breeds two children per family
/// (crossover with `crossover_probability`, otherwise clones), mutates the
/// children, evaluates them and selects the next population. The run is
/// deterministic in `config` and the evaluator; `on_iteration` sees every
/// record as soon as it is complete.
pub fn run_evolution_with<E, F>(
    config: &EvolutionConfig,
    evaluator: &E,
    mut on_iteration: F,
) -> Result<EvolutionHistory, EvolutionError>
where
    E: FitnessEvaluator + ?Sized,
    F: FnMut(&IterationRecord),
{
    config.validate()?;
    let n = evaluator.training_set_size();
    let size = config.predictor_size;
    let mut rng = seeded_rng(config.rng_seed);
    let scorer = Evaluator {
        inner: evaluator,
        mode: config.evaluation_seed_mode,
        run_seed: config.rng_seed,
    };
    let check_all = |pop: &[SubsetPredictor]| pop.iter().try_for_each(|p| p.check(size, n));

    let initial = init_population(config.population_size, size, n, &mut rng)?;
    check_all(&initial)?;
    let mut spent = 0.0;
    let mut population = scorer.score(initial, 0, &mut spent)?;
    let mut best = population[0].clone();
    let mut records = Vec::with_capacity(config.iterations);

    for iteration in 0..config.iterations {
        if iteration > 0 {
            spent = 0.0;
            if config.evaluation_seed_mode == SeedMode::PerGeneration {
                let genotypes = population.into_iter().map(|i| i.predictor).collect();
                population = scorer.score(genotypes, iteration, &mut spent)?;
            }
        }
        let (max, mean, min, leader) = stats(&population);
        if population[leader].fitness > best.fitness {
            best = population[leader].clone();
        }
        let mut record = IterationRecord {
            iteration,
            max_fitness: max,
            mean_fitness: mean,
            min_fitness: min,
            best: population[leader].predictor.clone(),
            eval_ms: 0.0,
        };

        let mut order: Vec<usize> = (0..population.len()).collect();
        order.shuffle(&mut rng);
        let families: Vec<(usize, usize)> = order.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        let mut offspring = Vec::with_capacity(population.len());
        for &(i, j) in &families {
            let (a, b) = (&population[i].predictor, &population[j].predictor);
            let (c1, c2) = if rng.random_bool(config.crossover_probability) {
                let point = match config.crossover_point {
                    CrossoverPoint::Random if size > 1 => rng.random_range(1..size),
                    CrossoverPoint::Random => 0,
                    CrossoverPoint::Fixed(k) => k,
                };
                crossover_one_point(a, b, point, n, &mut rng)
            } else {
                (a.clone(), b.clone())
            };
            offspring.push(mutate(&c1, config.mutation_probability, n, &mut rng));
            offspring.push(mutate(&c2, config.mutation_probability, n, &mut rng));
        }
        check_all(&offspring)?;

        let children = match config.evaluation_seed_mode {
            SeedMode::PerGenotype => score_with_cache(&scorer, &population, offspring, iteration, &mut spent)?,
            SeedMode::PerGeneration => scorer.score(offspring, iteration, &mut spent)?,
        };

        population = match config.selection {
            Selection::Elitist => select_elitist(&population, &children, config.population_size),
            Selection::DeterministicCrowding => select_deterministic_crowding(&population, &families, &children),
        };
        debug_assert_eq!(population.len(), config.population_size);

        if config.record_eval_time {
            record.eval_ms = spent;
        }
        on_iteration(&record);
        records.push(record);
    }

    let (_, _, _, leader) = stats(&population);
    if population[leader].fitness > best.fitness {
        best = population[leader].clone();
    }
    Ok(EvolutionHistory {
        records,
        final_population: population,
        best,
    })
}

/// In per-genotype mode a child whose index set equals a current member's
/// has the same fitness, so it is not trained again.
fn score_with_cache<E: FitnessEvaluator + ?Sized>(
    scorer: &Evaluator<'_, E>,
    population: &[Individual],
    offspring: Vec<SubsetPredictor>,
    iteration: usize,
    spent: &mut f64,
) -> Result<Vec<Individual>, EvolutionError> {
    let mut known: HashMap<u64, Vec<(Vec<usize>, f64)>> = HashMap::new();
    for ind in population {
        known
            .entry(ind.predictor.fingerprint())
            .or_default()
            .push((ind.predictor.sorted_indices(), ind.fitness));
    }
    let lookup = |p: &SubsetPredictor| {
        let sorted = p.sorted_indices();
        known
            .get(&p.fingerprint())
            .and_then(|v| v.iter().find(|(s, _)| *s == sorted).map(|(_, f)| *f))
    };
    let cached: Vec<Option<f64>> = offspring.iter().map(lookup).collect();
    let fresh: Vec<SubsetPredictor> = offspring
        .iter()
        .zip(&cached)
        .filter(|(_, c)| c.is_none())
        .map(|(p, _)| p.clone())
        .collect();
    let mut scored = scorer.score(fresh, iteration, spent)?.into_iter();
    Ok(offspring
        .into_iter()
        .zip(cached)
        .map(|(predictor, c)| match c {
            Some(fitness) => Individual { predictor, fitness },
            None => scored.next().expect("one score per uncached child"),
        })
        .collect())
}

/// (max, mean, min, index of the first maximum).
fn stats(pop: &[Individual]) -> (f64, f64, f64, usize) {
    let mut leader = 0;
    let mut min = f64::INFINITY;
    let mut sum = 0.0;
    for (i, ind) in pop.iter().enumerate() {
        if ind.fitness > pop[leader].fitness {
            leader = i;
        }
        min = min.min(ind.fitness);
        sum += ind.fitness;
    }
    (pop[leader].fitness, sum / pop.len() as f64, min, leader)
}
