//! Elitist selection against Deterministic Crowding from the same seed.

use std::fmt::Write as _;
use std::path::Path;

use subsevo_core::evolution::export::history_csv;
use subsevo_core::evolution::{run_evolution, EvolutionConfig, EvolutionHistory, FitnessEvaluator, Selection};

use crate::plot::{render_svg, PlotKind};
use crate::runs::fitness_series;
use crate::{write_file, Result};

#[derive(Debug, Clone)]
pub struct Comparison {
    pub elitist: EvolutionHistory,
    pub dc: EvolutionHistory,
}

/// Runs both strategies with `config`'s seed, so both start from the same
/// initial population.
pub fn compare_selection_strategies<E: FitnessEvaluator + ?Sized>(
    config: &EvolutionConfig,
    evaluator: &E,
) -> Result<Comparison> {
    let with = |selection| EvolutionConfig {
        selection,
        ..config.clone()
    };
    Ok(Comparison {
        elitist: run_evolution(&with(Selection::Elitist), evaluator)?,
        dc: run_evolution(&with(Selection::DeterministicCrowding), evaluator)?,
    })
}

/// First iteration whose population reaches `threshold`; the final
/// population counts as iteration `records.len()`.
pub fn iterations_to(h: &EvolutionHistory, threshold: f64) -> Option<usize> {
    h.records
        .iter()
        .position(|r| r.max_fitness >= threshold)
        .or_else(|| (h.final_max_fitness() >= threshold).then_some(h.records.len()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub seed: u64,
    pub elitist_iterations: Option<usize>,
    pub dc_iterations: Option<usize>,
    pub elitist_final: f64,
    pub dc_final: f64,
}

/// One comparison per seed. `evaluator_for` builds the evaluator of a seed.
pub fn convergence_report<E, F>(
    config: &EvolutionConfig,
    seeds: &[u64],
    threshold: f64,
    mut evaluator_for: F,
) -> Result<Vec<ConvergenceRow>>
where
    E: FitnessEvaluator,
    F: FnMut(u64) -> E,
{
    seeds
        .iter()
        .map(|&seed| {
            let eval = evaluator_for(seed);
            let c = compare_selection_strategies(
                &EvolutionConfig {
                    rng_seed: seed,
                    ..config.clone()
                },
                &eval,
            )?;
            Ok(ConvergenceRow {
                seed,
                elitist_iterations: iterations_to(&c.elitist, threshold),
                dc_iterations: iterations_to(&c.dc, threshold),
                elitist_final: c.elitist.final_max_fitness(),
                dc_final: c.dc.final_max_fitness(),
            })
        })
        .collect()
}

/// Per-seed rows plus a `mean` row over the seeds that reached the
/// threshold. Empty cells mean "not reached".
pub fn convergence_csv(rows: &[ConvergenceRow], threshold: f64) -> String {
    let cell = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
    let mean = |f: &dyn Fn(&ConvergenceRow) -> Option<usize>| {
        let hits: Vec<f64> = rows.iter().filter_map(f).map(|x| x as f64).collect();
        if hits.is_empty() {
            String::new()
        } else {
            format!("{:.3}", hits.iter().sum::<f64>() / hits.len() as f64)
        }
    };
    let mut s = format!("seed,elitist_iterations_to_{threshold},dc_iterations_to_{threshold},elitist_final,dc_final\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{:.6},{:.6}",
            r.seed,
            cell(r.elitist_iterations),
            cell(r.dc_iterations),
            r.elitist_final,
            r.dc_final
        );
    }
    let final_mean = |f: &dyn Fn(&ConvergenceRow) -> f64| rows.iter().map(f).sum::<f64>() / rows.len().max(1) as f64;
    let _ = writeln!(
        s,
        "mean,{},{},{:.6},{:.6}",
        mean(&|r| r.elitist_iterations),
        mean(&|r| r.dc_iterations),
        final_mean(&|r| r.elitist_final),
        final_mean(&|r| r.dc_final)
    );
    s
}

/// Writes `compare/elitist.csv`, `compare/dc.csv` and the overlay
/// `compare/fitness.svg`.
pub fn write_comparison(out: &Path, c: &Comparison) -> Result<()> {
    let dir = out.join("compare");
    write_file(&dir.join("elitist.csv"), history_csv(&c.elitist))?;
    write_file(&dir.join("dc.csv"), history_csv(&c.dc))?;
    let series = [fitness_series("elitist", &c.elitist), fitness_series("dc", &c.dc)];
    write_file(&dir.join("fitness.svg"), render_svg(&series, PlotKind::FitnessCurve))
}
