use std::collections::HashSet;

use crate::evolution::EvolutionError;

/// A fitness predictor genotype: a fixed-length list of distinct
/// training-set indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsetPredictor {
    indices: Vec<usize>,
}

impl SubsetPredictor {
    /// Validates uniqueness and range against a training set of
    /// `training_set_size` samples.
    pub fn new(indices: Vec<usize>, training_set_size: usize) -> Result<Self, EvolutionError> {
        let p = Self { indices };
        p.check(p.len(), training_set_size)?;
        Ok(p)
    }

    pub(crate) fn from_unchecked(indices: Vec<usize>) -> Self {
        Self { indices }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn into_indices(self) -> Vec<usize> {
        self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn sorted_indices(&self) -> Vec<usize> {
        let mut s = self.indices.clone();
        s.sort_unstable();
        s
    }

    /// Genotype distance: `S - |self ∩ other|`.
    pub fn distance(&self, other: &SubsetPredictor) -> usize {
        let mine: HashSet<usize> = self.indices.iter().copied().collect();
        let shared = other.indices.iter().filter(|i| mine.contains(i)).count();
        self.len() - shared
    }

    /// Checks length, range and uniqueness.
    pub fn check(&self, predictor_size: usize, training_set_size: usize) -> Result<(), EvolutionError> {
        if self.len() != predictor_size {
            return Err(EvolutionError::InvalidGenotype(format!(
                "length {} instead of {predictor_size}",
                self.len()
            )));
        }
        let mut seen = HashSet::with_capacity(self.len());
        for &i in &self.indices {
            if i >= training_set_size {
                return Err(EvolutionError::InvalidGenotype(format!(
                    "index {i} out of range for {training_set_size} samples"
                )));
            }
            if !seen.insert(i) {
                return Err(EvolutionError::InvalidGenotype(format!("duplicate index {i}")));
            }
        }
        Ok(())
    }

    /// Order-independent 64-bit fingerprint of the index set.
    pub fn fingerprint(&self) -> u64 {
        self.sorted_indices()
            .into_iter()
            .fold(0x243f_6a88_85a3_08d3, |h, i| crate::mix_seed(h, i as u64))
    }
}
