//! Datasets, IDX (MNIST) files, the synthetic block-template dataset and
//! index-based subset views.

mod dataset;
pub mod idx;
pub mod synthetic;

use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub use dataset::{subset, Dataset, SubsetView};
pub use idx::{load_mnist, mnist_available, parse_idx, read_idx, write_idx, IdxFiles, IdxPayload, Mnist};
pub use synthetic::{make_synthetic, SyntheticParams};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("failed to read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("index {index} out of range for {len} samples")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("index {0} appears more than once")]
    DuplicateIndex(usize),
    #[error("{0}")]
    Invalid(String),
}
