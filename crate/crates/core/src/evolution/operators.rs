//! Population initialization, one-point crossover with duplicate repair, and
//! single-sample mutation.

use std::collections::HashSet;

use rand::seq::index::sample;
use rand::Rng;

use crate::evolution::{EvolutionError, SubsetPredictor};

/// `population_size` predictors, each a uniform sample without replacement.
pub fn init_population<R: Rng + ?Sized>(
    population_size: usize,
    predictor_size: usize,
    training_set_size: usize,
    rng: &mut R,
) -> Result<Vec<SubsetPredictor>, EvolutionError> {
    if predictor_size > training_set_size {
        return Err(EvolutionError::InvalidConfig(format!(
            "predictor size {predictor_size} exceeds training set size {training_set_size}"
        )));
    }
    Ok((0..population_size)
        .map(|_| SubsetPredictor::from_unchecked(sample(rng, training_set_size, predictor_size).into_vec()))
        .collect())
}

/// Uniform index in `0..n` that is not in `used`, or `None` if all are used.
fn draw_unused<R: Rng + ?Sized>(used: &HashSet<usize>, n: usize, rng: &mut R) -> Option<usize> {
    if used.len() >= n {
        return None;
    }
    if used.len() * 2 <= n {
        loop {
            let i = rng.random_range(0..n);
            if !used.contains(&i) {
                return Some(i);
            }
        }
    }
    let free: Vec<usize> = (0..n).filter(|i| !used.contains(i)).collect();
    Some(free[rng.random_range(0..free.len())])
}

/// `a[..point] ++ b[point..]`, with any index that already occurs earlier in
/// the child replaced by a fresh uniformly drawn index.
fn splice<R: Rng + ?Sized>(head: &[usize], tail: &[usize], training_set_size: usize, rng: &mut R) -> SubsetPredictor {
    let mut child: Vec<usize> = head.iter().chain(tail).copied().collect();
    let mut used = HashSet::with_capacity(child.len());
    let mut collisions = Vec::new();
    for (pos, &i) in child.iter().enumerate() {
        if !used.insert(i) {
            collisions.push(pos);
        }
    }
    for pos in collisions {
        let fresh = draw_unused(&used, training_set_size, rng).expect("parents are valid, so a free index exists");
        used.insert(fresh);
        child[pos] = fresh;
    }
    SubsetPredictor::from_unchecked(child)
}

/// One-point crossover at `point` (clamped to `0..=S`). Returns
/// `(a[..point] ++ b[point..], b[..point] ++ a[point..])`, repaired.
pub fn crossover_one_point<R: Rng + ?Sized>(
    a: &SubsetPredictor,
    b: &SubsetPredictor,
    point: usize,
    training_set_size: usize,
    rng: &mut R,
) -> (SubsetPredictor, SubsetPredictor) {
    let (a, b) = (a.indices(), b.indices());
    let point = point.min(a.len());
    let first = splice(&a[..point], &b[point..], training_set_size, rng);
    let second = splice(&b[..point], &a[point..], training_set_size, rng);
    (first, second)
}

/// With probability `mutation_probability`, replaces one uniformly chosen
/// position by a uniformly drawn index that is not yet present.
pub fn mutate<R: Rng + ?Sized>(
    g: &SubsetPredictor,
    mutation_probability: f64,
    training_set_size: usize,
    rng: &mut R,
) -> SubsetPredictor {
    if g.is_empty() || !rng.random_bool(mutation_probability.clamp(0.0, 1.0)) {
        return g.clone();
    }
    let pos = rng.random_range(0..g.len());
    let used: HashSet<usize> = g.indices().iter().copied().collect();
    let mut out = g.indices().to_vec();
    if let Some(fresh) = draw_unused(&used, training_set_size, rng) {
        out[pos] = fresh;
    }
    SubsetPredictor::from_unchecked(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded_rng;

    fn p(v: &[usize], n: usize) -> SubsetPredictor {
        SubsetPredictor::new(v.to_vec(), n).unwrap()
    }

    #[test]
    fn init_full_size_is_permutation() {
        let pop = init_population(6, 20, 20, &mut seeded_rng(1)).unwrap();
        for g in &pop {
            assert_eq!(g.sorted_indices(), (0..20).collect::<Vec<_>>());
        }
        assert!(init_population(2, 21, 20, &mut seeded_rng(1)).is_err());
    }

    #[test]
    fn init_is_seeded_and_valid() {
        let a = init_population(128, 100, 60_000, &mut seeded_rng(5)).unwrap();
        let b = init_population(128, 100, 60_000, &mut seeded_rng(5)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 128);
        for g in &a {
            g.check(100, 60_000).unwrap();
        }
    }

    #[test]
    fn crossover_without_collisions() {
        let (c1, c2) = crossover_one_point(&p(&[1, 2, 3, 4], 10), &p(&[5, 6, 7, 8], 10), 2, 10, &mut seeded_rng(0));
        assert_eq!(c1.indices(), &[1, 2, 7, 8]);
        assert_eq!(c2.indices(), &[5, 6, 3, 4]);
    }

    #[test]
    fn crossover_at_zero_swaps_parents() {
        let a = p(&[1, 2, 3, 4], 10);
        let b = p(&[5, 6, 7, 8], 10);
        let (c1, c2) = crossover_one_point(&a, &b, 0, 10, &mut seeded_rng(0));
        assert_eq!(c1, b);
        assert_eq!(c2, a);
    }

    #[test]
    fn crossover_repairs_collisions() {
        let a = p(&[1, 2, 3, 4], 10);
        let b = p(&[3, 4, 5, 6], 10);
        for seed in 0..50 {
            let (c1, c2) = crossover_one_point(&a, &b, 2, 10, &mut seeded_rng(seed));
            assert_eq!(c1.indices(), &[1, 2, 5, 6]);
            assert_eq!(&c2.indices()[..2], &[3, 4]);
            c2.check(4, 10).unwrap();
            for &fresh in &c2.indices()[2..] {
                assert!(![3, 4].contains(&fresh));
            }
        }
        // identical seeds give identical repairs
        let r1 = crossover_one_point(&a, &b, 2, 10, &mut seeded_rng(9));
        let r2 = crossover_one_point(&a, &b, 2, 10, &mut seeded_rng(9));
        assert_eq!(r1, r2);
    }

    #[test]
    fn mutation_extremes() {
        let g = p(&[0, 5, 9, 11], 30);
        let mut rng = seeded_rng(2);
        for _ in 0..100 {
            assert_eq!(mutate(&g, 0.0, 30, &mut rng), g);
            let m = mutate(&g, 1.0, 30, &mut rng);
            m.check(4, 30).unwrap();
            assert_eq!(g.distance(&m), 1);
        }
    }

    #[test]
    fn mutation_rate_matches_binomial() {
        let g = p(&(0..50).collect::<Vec<_>>(), 1000);
        let mut rng = seeded_rng(123);
        let hits = (0..10_000).filter(|_| mutate(&g, 0.01, 1000, &mut rng) != g).count() as f64;
        // 3 sigma band of Binomial(10000, 0.01), computed offline
        assert!((70.150_376..=129.849_624).contains(&hits), "{hits}");
    }
}
