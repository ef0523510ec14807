use rand::seq::SliceRandom;
use rand::Rng;

use crate::data::SubsetView;
use crate::nn::model::{Gradients, LayerParams, TrainedModel};
use crate::nn::spec::NetworkSpec;
use crate::nn::NnError;
use crate::seeded_rng;

/// Mini-batch SGD settings. The defaults are the MNIST training setup:
/// learning rate 0.1, decay 1e-5, batch 128, 20 epochs, no L1/L2, no momentum.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub learning_rate_decay: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub l1_coeff: f64,
    pub l2_coeff: f64,
    pub momentum: f64,
    pub rng_seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            learning_rate_decay: 1e-5,
            batch_size: 128,
            epochs: 20,
            l1_coeff: 0.0,
            l2_coeff: 0.0,
            momentum: 0.0,
            rng_seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), NnError> {
        let bad = |what: &str| Err(NnError::InvalidConfig(what.to_string()));
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad("learning_rate must be positive");
        }
        if self.batch_size == 0 {
            return bad("batch_size must be at least 1");
        }
        for (name, v) in [
            ("learning_rate_decay", self.learning_rate_decay),
            ("l1_coeff", self.l1_coeff),
            ("l2_coeff", self.l2_coeff),
            ("momentum", self.momentum),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(NnError::InvalidConfig(format!("{name} must be non-negative")));
            }
        }
        Ok(())
    }

    /// `learning_rate / (1 + update_count * learning_rate_decay)`.
    pub fn learning_rate_at(&self, update_count: u64) -> f64 {
        self.learning_rate / (1.0 + update_count as f64 * self.learning_rate_decay)
    }
}

/// One plain SGD update: `w <- w - lr_t * (g + l2 * w + l1 * sign(w))`.
pub fn sgd_step(model: &mut TrainedModel, grads: &Gradients, config: &TrainConfig, update_count: u64) {
    let lr = config.learning_rate_at(update_count);
    for (p, g) in model.params_mut().iter_mut().zip(&grads.layers) {
        if let (Some(p), Some(g)) = (p, g) {
            update(p.weight.data_mut(), g.weight.data(), lr, config);
            update(p.bias.data_mut(), g.bias.data(), lr, config);
        }
    }
}

fn regularized(g: f64, w: f64, config: &TrainConfig) -> f64 {
    let mut g = g;
    if config.l2_coeff != 0.0 {
        g += config.l2_coeff * w;
    }
    if config.l1_coeff != 0.0 && w != 0.0 {
        g += config.l1_coeff * w.signum();
    }
    g
}

fn update(w: &mut [f64], g: &[f64], lr: f64, config: &TrainConfig) {
    for (w, &g) in w.iter_mut().zip(g) {
        *w -= lr * regularized(g, *w, config);
    }
}

/// SGD with an update counter for the decay schedule and optional momentum.
#[derive(Debug, Clone)]
pub struct Sgd {
    config: TrainConfig,
    updates: u64,
    velocity: Option<Vec<Option<LayerParams>>>,
}

impl Sgd {
    pub fn new(config: TrainConfig) -> Self {
        Self {
            config,
            updates: 0,
            velocity: None,
        }
    }

    pub fn updates(&self) -> u64 {
        self.updates
    }

    pub fn step(&mut self, model: &mut TrainedModel, grads: &Gradients) {
        if self.config.momentum == 0.0 {
            sgd_step(model, grads, &self.config, self.updates);
        } else {
            let lr = self.config.learning_rate_at(self.updates);
            let mu = self.config.momentum;
            let velocity = self.velocity.get_or_insert_with(|| {
                grads
                    .layers
                    .iter()
                    .map(|g| {
                        g.as_ref().map(|g| LayerParams {
                            weight: crate::Tensor::zeros(g.weight.shape()),
                            bias: crate::Tensor::zeros(g.bias.shape()),
                        })
                    })
                    .collect()
            });
            let layers = model.params_mut().iter_mut().zip(&grads.layers).zip(velocity);
            for ((p, g), v) in layers {
                if let (Some(p), Some(g), Some(v)) = (p, g, v) {
                    for (w, g, v) in [
                        (p.weight.data_mut(), g.weight.data(), v.weight.data_mut()),
                        (p.bias.data_mut(), g.bias.data(), v.bias.data_mut()),
                    ] {
                        for ((w, &g), v) in w.iter_mut().zip(g).zip(v.iter_mut()) {
                            *v = mu * *v + regularized(g, *w, &self.config);
                            *w -= lr * *v;
                        }
                    }
                }
            }
        }
        self.updates += 1;
    }
}

/// One shuffled pass over `data` in mini-batches (the last short batch is
/// kept). Returns the mean batch loss.
pub fn train_epoch<R: Rng + ?Sized>(
    model: &mut TrainedModel,
    data: &SubsetView<'_>,
    sgd: &mut Sgd,
    rng: &mut R,
) -> Result<f64, NnError> {
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.shuffle(rng);
    let mut total = 0.0;
    let mut batches = 0usize;
    for chunk in order.chunks(sgd.config.batch_size) {
        let (batch, targets) = data.batch(chunk);
        let (loss, grads) = model.loss_and_gradients(&batch, &targets)?;
        sgd.step(model, &grads);
        total += loss;
        batches += 1;
    }
    Ok(total / batches.max(1) as f64)
}

/// Initializes a model from `config.rng_seed` and trains it for
/// `config.epochs` epochs. The result depends only on the arguments.
pub fn train_network(spec: &NetworkSpec, data: &SubsetView<'_>, config: &TrainConfig) -> Result<TrainedModel, NnError> {
    config.validate()?;
    if data.is_empty() {
        return Err(NnError::EmptyTrainingSet);
    }
    check_compatible(spec, data)?;
    let mut rng = seeded_rng(config.rng_seed);
    let mut model = TrainedModel::init(spec, &mut rng);
    let mut sgd = Sgd::new(config.clone());
    for _ in 0..config.epochs {
        train_epoch(&mut model, data, &mut sgd, &mut rng)?;
    }
    Ok(model)
}

pub(crate) fn check_compatible(spec: &NetworkSpec, data: &SubsetView<'_>) -> Result<(), NnError> {
    if !spec.ends_with_log_softmax() {
        return Err(NnError::InvalidInput(
            "training needs a network ending in LogSoftMax".to_string(),
        ));
    }
    if data.base().sample_shape() != spec.input_shape {
        return Err(NnError::InvalidInput(format!(
            "samples are {:?} but the network expects {:?}",
            data.base().sample_shape(),
            spec.input_shape
        )));
    }
    let classes = spec.num_outputs();
    if data.base().num_classes() > classes {
        return Err(NnError::InvalidInput(format!(
            "{} classes in the data but the network has {classes} outputs",
            data.base().num_classes()
        )));
    }
    Ok(())
}

/// Index of the largest entry per row, lowest index on ties.
pub fn argmax_rows(outputs: &crate::Tensor) -> Vec<usize> {
    let k = outputs.row_len();
    outputs
        .data()
        .chunks_exact(k)
        .map(|row| {
            row.iter()
                .enumerate()
                .fold(
                    (0, f64::NEG_INFINITY),
                    |best, (i, &v)| if v > best.1 { (i, v) } else { best },
                )
                .0
        })
        .collect()
}

const EVAL_CHUNK: usize = 256;

/// Fraction of samples whose highest-scoring class equals the label.
pub fn evaluate_accuracy(model: &TrainedModel, data: &SubsetView<'_>) -> Result<f64, NnError> {
    if data.is_empty() {
        return Err(NnError::EmptyTestSet);
    }
    let positions: Vec<usize> = (0..data.len()).collect();
    let mut correct = 0usize;
    for chunk in positions.chunks(EVAL_CHUNK) {
        let (batch, labels) = data.batch(chunk);
        let predicted = argmax_rows(&model.forward(&batch)?);
        correct += predicted.iter().zip(&labels).filter(|(p, l)| p == l).count();
    }
    Ok(correct as f64 / data.len() as f64)
}
