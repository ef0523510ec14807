//! Block-template images: a small stand-in for MNIST.
//!
//! Class `c` lights one cell of a `g x g` grid (`g = ceil(sqrt(classes))`);
//! every pixel then gets uniform noise in `[-noise, noise]`, is clamped to
//! `[0, 1]` and quantized to a multiple of 1/255 so the data survives an IDX
//! round trip unchanged. Samples cycle through the classes in order.

use rand::Rng;

use crate::data::{DataError, Dataset};
use crate::seeded_rng;
use crate::tensor::Tensor;

/// Parameters of [`make_synthetic`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticParams {
    pub num_classes: usize,
    pub per_class: usize,
    pub image_side: usize,
    pub noise: f64,
    pub seed: u64,
}

fn grid_side(num_classes: usize) -> usize {
    (1..).find(|g| g * g >= num_classes).expect("finite")
}

/// Noise-free template of `class`, a single-channel `side x side` image.
pub fn class_template(num_classes: usize, image_side: usize, class: usize) -> Vec<f64> {
    let g = grid_side(num_classes);
    let cell = image_side / g;
    let (gy, gx) = (class / g, class % g);
    let mut img = vec![0.0; image_side * image_side];
    for y in gy * cell..(gy + 1) * cell {
        for x in gx * cell..(gx + 1) * cell {
            img[y * image_side + x] = 1.0;
        }
    }
    img
}

pub fn make_synthetic(
    num_classes: usize,
    per_class: usize,
    image_side: usize,
    noise: f64,
    seed: u64,
) -> Result<Dataset, DataError> {
    if num_classes < 2 {
        return Err(DataError::Invalid("need at least 2 classes".to_string()));
    }
    if per_class == 0 {
        return Err(DataError::Invalid("per_class must be at least 1".to_string()));
    }
    if image_side < grid_side(num_classes) {
        return Err(DataError::Invalid(format!(
            "image side {image_side} too small for {num_classes} distinct templates"
        )));
    }
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(DataError::Invalid(format!("noise {noise} must be non-negative")));
    }
    let templates: Vec<Vec<f64>> = (0..num_classes)
        .map(|c| class_template(num_classes, image_side, c))
        .collect();
    let n = num_classes * per_class;
    let pixels = image_side * image_side;
    let mut rng = seeded_rng(seed);
    let mut data = Vec::with_capacity(n * pixels);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let class = i % num_classes;
        labels.push(class);
        for &t in &templates[class] {
            let jitter = if noise > 0.0 {
                rng.random_range(-noise..=noise)
            } else {
                0.0
            };
            let v = (t + jitter).clamp(0.0, 1.0);
            data.push((v * 255.0).round() / 255.0);
        }
    }
    let images = Tensor::new(vec![n, 1, image_side, image_side], data).expect("volume");
    Dataset::new(images, labels, num_classes)
}

impl SyntheticParams {
    pub fn generate(&self) -> Result<Dataset, DataError> {
        make_synthetic(self.num_classes, self.per_class, self.image_side, self.noise, self.seed)
    }
}
