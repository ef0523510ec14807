//! Text exports: the per-iteration history CSV and the best-predictor file.

use std::fmt::Write as _;

use crate::evolution::{EvolutionError, EvolutionHistory, SubsetPredictor};

pub const HISTORY_HEADER: &str = "iteration,max_fitness,mean_fitness,min_fitness,eval_ms";

/// History as CSV, fitness with 6 decimals, one row per record.
pub fn history_csv(history: &EvolutionHistory) -> String {
    let mut out = String::from(HISTORY_HEADER);
    out.push('\n');
    for r in &history.records {
        let _ = writeln!(
            out,
            "{},{:.6},{:.6},{:.6},{:.3}",
            r.iteration, r.max_fitness, r.mean_fitness, r.min_fitness, r.eval_ms
        );
    }
    out
}

/// One index per line after a `# predictor_size=<S> seed=<seed>` header.
pub fn predictor_text(predictor: &SubsetPredictor, seed: u64) -> String {
    let mut out = format!("# predictor_size={} seed={}\n", predictor.len(), seed);
    for i in predictor.indices() {
        let _ = writeln!(out, "{i}");
    }
    out
}

/// Parses [`predictor_text`] output. Returns the predictor and the seed.
/// Indices are checked against `training_set_size`.
pub fn parse_predictor_text(text: &str, training_set_size: usize) -> Result<(SubsetPredictor, u64), EvolutionError> {
    let bad = |line: usize, m: String| EvolutionError::InvalidGenotype(format!("line {line}: {m}"));
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| bad(1, "empty file".into()))?;
    let mut size = None;
    let mut seed = None;
    for field in header
        .strip_prefix('#')
        .ok_or_else(|| bad(1, "missing header comment".into()))?
        .split_whitespace()
    {
        match field.split_once('=') {
            Some(("predictor_size", v)) => size = v.parse::<usize>().ok(),
            Some(("seed", v)) => seed = v.parse::<u64>().ok(),
            _ => return Err(bad(1, format!("unexpected header field {field:?}"))),
        }
    }
    let (size, seed) = match (size, seed) {
        (Some(s), Some(d)) => (s, d),
        _ => return Err(bad(1, "header needs predictor_size and seed".into())),
    };
    let mut indices = Vec::with_capacity(size);
    for (n, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let i = line
            .parse::<usize>()
            .map_err(|_| bad(n + 1, format!("not an index: {line:?}")))?;
        indices.push(i);
    }
    let p = SubsetPredictor::new(indices, training_set_size)?;
    if p.len() != size {
        return Err(EvolutionError::InvalidGenotype(format!(
            "header says {size} indices, found {}",
            p.len()
        )));
    }
    Ok((p, seed))
}
