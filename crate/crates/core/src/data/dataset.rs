use std::collections::HashSet;

use crate::data::DataError;
use crate::tensor::Tensor;

/// Labeled images `(n, channels, height, width)` with pixel values in `[0, 1]`.
///
/// Immutable after construction; views borrow it.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    images: Tensor,
    labels: Vec<usize>,
    num_classes: usize,
}

impl Dataset {
    pub fn new(images: Tensor, labels: Vec<usize>, num_classes: usize) -> Result<Self, DataError> {
        let Some((n, c, h, w)) = images.dims4() else {
            return Err(DataError::Invalid(format!(
                "images must be (n, channels, height, width), got {:?}",
                images.shape()
            )));
        };
        if c == 0 || h == 0 || w == 0 {
            return Err(DataError::Invalid(format!("empty sample shape {:?}", images.shape())));
        }
        if labels.len() != n {
            return Err(DataError::Invalid(format!("{} labels for {n} images", labels.len())));
        }
        if num_classes == 0 {
            return Err(DataError::Invalid("num_classes must be positive".to_string()));
        }
        if let Some((i, &l)) = labels.iter().enumerate().find(|(_, &l)| l >= num_classes) {
            return Err(DataError::Invalid(format!(
                "label {l} of sample {i} is not below num_classes {num_classes}"
            )));
        }
        if let Some(v) = images.data().iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(DataError::Invalid(format!("pixel value {v} outside [0, 1]")));
        }
        Ok(Self {
            images,
            labels,
            num_classes,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn images(&self) -> &Tensor {
        &self.images
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// `(channels, height, width)` of one sample.
    pub fn sample_shape(&self) -> (usize, usize, usize) {
        let s = self.images.shape();
        (s[1], s[2], s[3])
    }

    pub fn sample(&self, i: usize) -> &[f64] {
        self.images.row(i)
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_classes];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// View over every sample in order.
    pub fn view(&self) -> SubsetView<'_> {
        SubsetView {
            base: self,
            indices: (0..self.len()).collect(),
        }
    }

    pub fn subset(&self, indices: Vec<usize>) -> Result<SubsetView<'_>, DataError> {
        subset(self, indices)
    }
}

/// A selection of samples from a [`Dataset`], presented in the given order.
/// Holds only indices; pixels stay in the base dataset.
#[derive(Debug, Clone)]
pub struct SubsetView<'a> {
    base: &'a Dataset,
    indices: Vec<usize>,
}

/// Creates a view of `base` restricted to `indices`, which must be in range
/// and unique.
pub fn subset(base: &Dataset, indices: Vec<usize>) -> Result<SubsetView<'_>, DataError> {
    let mut seen = HashSet::with_capacity(indices.len());
    for &i in &indices {
        if i >= base.len() {
            return Err(DataError::IndexOutOfRange {
                index: i,
                len: base.len(),
            });
        }
        if !seen.insert(i) {
            return Err(DataError::DuplicateIndex(i));
        }
    }
    Ok(SubsetView { base, indices })
}

impl<'a> SubsetView<'a> {
    pub fn base(&self) -> &'a Dataset {
        self.base
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn sample(&self, position: usize) -> &'a [f64] {
        self.base.sample(self.indices[position])
    }

    pub fn label(&self, position: usize) -> usize {
        self.base.label(self.indices[position])
    }

    /// Copies the samples at the given view positions into a batch tensor.
    pub fn batch(&self, positions: &[usize]) -> (Tensor, Vec<usize>) {
        let (c, h, w) = self.base.sample_shape();
        let mut data = Vec::with_capacity(positions.len() * c * h * w);
        let mut labels = Vec::with_capacity(positions.len());
        for &p in positions {
            data.extend_from_slice(self.sample(p));
            labels.push(self.label(p));
        }
        let batch = Tensor::new(vec![positions.len(), c, h, w], data).expect("batch shape");
        (batch, labels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Dataset {
        let images = Tensor::from_fn(&[6, 1, 1, 2], |i| i as f64 / 11.0);
        Dataset::new(images, vec![0, 1, 2, 0, 1, 2], 3).unwrap()
    }

    #[test]
    fn validation() {
        let img = Tensor::zeros(&[2, 1, 1, 1]);
        assert!(Dataset::new(img.clone(), vec![0], 2).is_err());
        assert!(Dataset::new(img.clone(), vec![0, 2], 2).is_err());
        assert!(Dataset::new(Tensor::filled(&[2, 1, 1, 1], 1.5), vec![0, 1], 2).is_err());
        assert!(Dataset::new(img, vec![0, 1], 2).is_ok());
    }

    #[test]
    fn full_view_matches_base() {
        let d = tiny();
        let v = subset(&d, (0..d.len()).collect()).unwrap();
        for i in 0..d.len() {
            assert_eq!(v.sample(i), d.sample(i));
            assert_eq!(v.label(i), d.label(i));
        }
    }

    #[test]
    fn single_and_permuted_views() {
        let d = tiny();
        let v = d.subset(vec![5]).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v.sample(0), d.sample(5));

        let v = d.subset(vec![3, 0, 4]).unwrap();
        let (batch, labels) = v.batch(&[0, 1, 2]);
        assert_eq!(labels, vec![0, 0, 1]);
        assert_eq!(batch.row(0), d.sample(3));
        assert_eq!(batch.row(2), d.sample(4));
        // the view points into the base dataset
        assert!(std::ptr::eq(v.sample(1).as_ptr(), d.sample(0).as_ptr()));
    }

    #[test]
    fn bad_indices_rejected() {
        let d = tiny();
        assert!(matches!(
            d.subset(vec![1, 6]),
            Err(DataError::IndexOutOfRange { index: 6, len: 6 })
        ));
        assert!(matches!(d.subset(vec![1, 2, 1]), Err(DataError::DuplicateIndex(1))));
    }
}
