//! Survivor selection: elitist (best of parents plus children) and
//! Deterministic Crowding (children compete with their closest parent).

use crate::evolution::SubsetPredictor;

/// A predictor together with its evaluated fitness.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub predictor: SubsetPredictor,
    pub fitness: f64,
}

/// The `population_size` fittest of `parents ++ children`. Ties favour
/// parents over children, then the earlier position.
pub fn select_elitist(parents: &[Individual], children: &[Individual], population_size: usize) -> Vec<Individual> {
    let mut pool: Vec<(usize, usize, &Individual)> = parents
        .iter()
        .enumerate()
        .map(|(i, ind)| (0, i, ind))
        .chain(children.iter().enumerate().map(|(i, ind)| (1, i, ind)))
        .collect();
    pool.sort_by(|a, b| {
        b.2.fitness
            .total_cmp(&a.2.fitness)
            .then(a.0.cmp(&b.0))
            .then(a.1.cmp(&b.1))
    });
    pool.into_iter()
        .take(population_size)
        .map(|(_, _, ind)| ind.clone())
        .collect()
}

/// Whether the children of a family should be matched crosswise
/// (first child with second parent). Straight matching wins ties.
pub fn crowding_pairs_crossed(
    p1: &SubsetPredictor,
    p2: &SubsetPredictor,
    c1: &SubsetPredictor,
    c2: &SubsetPredictor,
) -> bool {
    let straight = p1.distance(c1) + p2.distance(c2);
    let crossed = p1.distance(c2) + p2.distance(c1);
    crossed < straight
}

/// Deterministic Crowding replacement.
///
/// `families[k] = (i, j)` names the parents that produced
/// `children[2k]` and `children[2k + 1]`. Each child is matched with a parent
/// so that the total genotype distance of the two matches is minimal, and
/// replaces that parent when its fitness is at least as high. Survivors keep
/// their parents' slots, so the population order is stable.
pub fn select_deterministic_crowding(
    parents: &[Individual],
    families: &[(usize, usize)],
    children: &[Individual],
) -> Vec<Individual> {
    assert_eq!(children.len(), 2 * families.len(), "two children per family");
    let mut next = parents.to_vec();
    for (k, &(i, j)) in families.iter().enumerate() {
        let (c1, c2) = (&children[2 * k], &children[2 * k + 1]);
        let crossed = crowding_pairs_crossed(
            &parents[i].predictor,
            &parents[j].predictor,
            &c1.predictor,
            &c2.predictor,
        );
        let matches = if crossed {
            [(i, c2), (j, c1)]
        } else {
            [(i, c1), (j, c2)]
        };
        for (slot, child) in matches {
            if child.fitness >= parents[slot].fitness {
                next[slot] = child.clone();
            }
        }
    }
    next
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ind(indices: &[usize], fitness: f64) -> Individual {
        Individual {
            predictor: SubsetPredictor::new(indices.to_vec(), 100).unwrap(),
            fitness,
        }
    }

    #[test]
    fn elitist_extremes() {
        let parents = vec![ind(&[1], 0.9), ind(&[2], 0.8)];
        let worse = vec![ind(&[3], 0.1), ind(&[4], 0.2)];
        let better = vec![ind(&[5], 0.95), ind(&[6], 0.99)];
        assert_eq!(select_elitist(&parents, &worse, 2), parents);
        let got = select_elitist(&parents, &better, 2);
        assert_eq!(got, vec![better[1].clone(), better[0].clone()]);
    }

    #[test]
    fn elitist_matches_sort_oracle() {
        let fit = [0.3, 0.7, 0.7, 0.1, 0.9, 0.7, 0.3, 0.2];
        let parents: Vec<_> = (0..4).map(|i| ind(&[i], fit[i])).collect();
        let children: Vec<_> = (4..8).map(|i| ind(&[i], fit[i])).collect();
        // Oracle: enumerate the union, sort by (-fitness, is_child, position).
        let mut union: Vec<(f64, usize, usize)> = (0..8).map(|i| (fit[i], usize::from(i >= 4), i % 4)).collect();
        union.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let want: Vec<usize> = union[..4].iter().map(|&(_, c, p)| c * 4 + p).collect();
        assert_eq!(want, vec![4, 1, 2, 5]);
        let got: Vec<usize> = select_elitist(&parents, &children, 4)
            .iter()
            .map(|i| i.predictor.indices()[0])
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn crowding_child_replaces_identical_parent() {
        let parents = vec![ind(&[1, 2, 3], 0.5), ind(&[7, 8, 9], 0.6)];
        let children = vec![ind(&[1, 2, 3], 0.7), ind(&[7, 8, 4], 0.1)];
        let next = select_deterministic_crowding(&parents, &[(0, 1)], &children);
        assert_eq!(next, vec![children[0].clone(), parents[1].clone()]);
    }

    #[test]
    fn crowding_keeps_better_parents() {
        let parents = vec![ind(&[1, 2, 3], 0.5), ind(&[7, 8, 9], 0.6)];
        let children = vec![ind(&[1, 2, 9], 0.2), ind(&[7, 8, 3], 0.3)];
        assert_eq!(select_deterministic_crowding(&parents, &[(0, 1)], &children), parents);
    }

    #[test]
    fn crowding_ties_go_to_child() {
        let parents = vec![ind(&[1, 2], 0.5), ind(&[3, 4], 0.5)];
        let children = vec![ind(&[1, 5], 0.5), ind(&[3, 6], 0.5)];
        let next = select_deterministic_crowding(&parents, &[(0, 1)], &children);
        assert_eq!(next, children);
    }

    #[test]
    fn crowding_pairing_matches_exhaustive_minimum() {
        // distances: d(p1,c1)=3, d(p2,c2)=4, d(p1,c2)=1, d(p2,c1)=2
        let p1 = SubsetPredictor::new(vec![1, 2, 3, 4], 100).unwrap();
        let p2 = SubsetPredictor::new(vec![10, 11, 12, 13], 100).unwrap();
        let c1 = SubsetPredictor::new(vec![10, 11, 1, 50], 100).unwrap();
        let c2 = SubsetPredictor::new(vec![1, 2, 3, 60], 100).unwrap();
        let parents = [&p1, &p2];
        let children = [&c1, &c2];
        // Exhaustive: the two permutations of children over parents.
        let best = [[0usize, 1], [1, 0]]
            .into_iter()
            .min_by_key(|perm| (0..2).map(|k| parents[k].distance(children[perm[k]])).sum::<usize>())
            .unwrap();
        assert_eq!(best, [1, 0]);
        assert!(crowding_pairs_crossed(&p1, &p2, &c1, &c2));

        let pop = vec![
            Individual {
                predictor: p1,
                fitness: 0.4,
            },
            Individual {
                predictor: p2,
                fitness: 0.4,
            },
        ];
        let kids = vec![
            Individual {
                predictor: c1.clone(),
                fitness: 0.9,
            },
            Individual {
                predictor: c2.clone(),
                fitness: 0.1,
            },
        ];
        let next = select_deterministic_crowding(&pop, &[(0, 1)], &kids);
        // c2 lost against p1; c1 beat p2.
        assert_eq!(next[0], pop[0]);
        assert_eq!(next[1].predictor, c1);
    }
}
