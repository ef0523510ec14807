//! Experiment harness for subset fitness predictors: configuration, the size
//! sweep, the selection comparison, the timing bench, SVG plots and the
//! `subsevo` command line.

pub mod bench;
pub mod cli;
pub mod compare;
pub mod config;
pub mod plot;
pub mod runs;
pub mod sweep;

use std::path::{Path, PathBuf};

use subsevo_core::data::{load_mnist, make_synthetic, DataError};
use subsevo_core::evolution::EvolutionError;
use subsevo_core::nn::NnError;
use subsevo_core::{mix_seed, Dataset, Tensor};
use thiserror::Error;

pub use config::{load_config, parse_config, ConfigError, DataSource, ExperimentConfig};

pub const DATA_DIR_ENV: &str = "SUBSEVO_DATA_DIR";

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("data loading failed: {0}")]
    Data(#[from] DataError),
    #[error(transparent)]
    Evolution(#[from] EvolutionError),
    #[error(transparent)]
    Network(#[from] NnError),
    #[error(transparent)]
    Plot(#[from] plot::PlotError),
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Runtime(String),
}

impl ExperimentError {
    /// Process exit code: 2 for configuration, 3 for data, 4 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Config(_) => 2,
            ExperimentError::Data(_) => 3,
            _ => 4,
        }
    }
}

pub type Result<T, E = ExperimentError> = std::result::Result<T, E>;

pub(crate) fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    let wrap = |source| ExperimentError::Write {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(wrap)?;
    }
    std::fs::write(path, contents).map_err(wrap)
}

/// Training and test sets.
#[derive(Debug, Clone)]
pub struct Splits {
    pub train: Dataset,
    pub test: Dataset,
}

/// Loads the configured dataset. MNIST is read from `dataset.dir`, falling
/// back to `SUBSEVO_DATA_DIR`.
pub fn load_splits(cfg: &ExperimentConfig) -> Result<Splits, DataError> {
    let d = &cfg.dataset;
    let (train, test) = match d.source {
        DataSource::Synthetic => (
            make_synthetic(d.num_classes, d.per_class, d.image_side, d.noise, d.seed)?,
            make_synthetic(
                d.num_classes,
                d.test_per_class,
                d.image_side,
                d.noise,
                mix_seed(d.seed, 1),
            )?,
        ),
        DataSource::Mnist => {
            let dir = d
                .dir
                .clone()
                .or_else(|| std::env::var_os(DATA_DIR_ENV).map(PathBuf::from))
                .ok_or_else(|| {
                    DataError::Invalid(format!("no MNIST directory: pass --data-dir or set {DATA_DIR_ENV}"))
                })?;
            let m = load_mnist(&dir)?;
            (m.train, m.test)
        }
    };
    Ok(Splits {
        train: truncate(train, d.train_limit)?,
        test: truncate(test, d.test_limit)?,
    })
}

/// The first `limit` samples of `d`.
pub fn truncate(d: Dataset, limit: Option<usize>) -> Result<Dataset, DataError> {
    let n = match limit {
        Some(n) if n < d.len() => n,
        _ => return Ok(d),
    };
    let (c, h, w) = d.sample_shape();
    let pixels = d.images().data()[..n * c * h * w].to_vec();
    let images = Tensor::new(vec![n, c, h, w], pixels).map_err(|e| DataError::Invalid(e.to_string()))?;
    Dataset::new(images, d.labels()[..n].to_vec(), d.num_classes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_splits_follow_config() {
        let mut cfg = ExperimentConfig::default();
        cfg.dataset.per_class = 3;
        cfg.dataset.test_per_class = 2;
        cfg.dataset.train_limit = Some(25);
        let s = load_splits(&cfg).unwrap();
        assert_eq!(s.train.len(), 25);
        assert_eq!(s.test.len(), 20);
        assert_ne!(s.train.images().data()[..784], s.test.images().data()[..784]);
    }

    #[test]
    fn missing_mnist_is_a_data_error() {
        let mut cfg = ExperimentConfig::default();
        cfg.dataset.source = DataSource::Mnist;
        cfg.dataset.dir = Some(PathBuf::from("/nonexistent/mnist"));
        let e = ExperimentError::from(load_splits(&cfg).unwrap_err());
        assert_eq!(e.exit_code(), 3);
    }
}
