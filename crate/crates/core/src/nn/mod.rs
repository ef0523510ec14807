//! Minimal convolutional network core: layer kernels, a sequential model
//! with exact backpropagation, mini-batch SGD and accuracy evaluation.

pub mod format;
pub mod model;
pub mod ops;
pub mod spec;
pub mod train;

use thiserror::Error;

pub use model::{Gradients, LayerParams, TrainedModel};
pub use spec::{Activation, LayerSpec, NetworkSpec};
pub use train::{evaluate_accuracy, sgd_step, train_epoch, train_network, Sgd, TrainConfig};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NnError {
    #[error("shape mismatch in {context}: expected {expected}, got {actual:?}")]
    ShapeMismatch {
        context: String,
        expected: String,
        actual: Vec<usize>,
    },
    #[error("layer {index} ({kind}): {detail}")]
    Layer {
        index: usize,
        kind: &'static str,
        detail: String,
    },
    #[error("target {target} in row {row} is out of range for {classes} classes")]
    TargetOutOfRange { row: usize, target: usize, classes: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid training configuration: {0}")]
    InvalidConfig(String),
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("test set is empty")]
    EmptyTestSet,
    #[error("malformed model file at byte {offset}: {message}")]
    Format { offset: usize, message: String },
}
