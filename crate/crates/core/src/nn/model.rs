use rand::Rng;

use crate::nn::ops::{
    conv2d_backward, conv2d_forward, dense_backward, dense_forward, log_softmax, log_softmax_backward,
    maxpool_backward, maxpool_forward, nll_loss, nll_loss_backward, relu, relu_backward,
};
use crate::nn::spec::{Activation, LayerSpec, NetworkSpec};
use crate::nn::NnError;
use crate::tensor::Tensor;

/// Weight and bias of one parameterized layer.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerParams {
    pub weight: Tensor,
    pub bias: Tensor,
}

/// A network spec together with its weights. Parameter-free layers hold `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    spec: NetworkSpec,
    params: Vec<Option<LayerParams>>,
}

/// Per-layer gradients, mirroring [`TrainedModel::params`].
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub layers: Vec<Option<LayerParams>>,
}

enum Trace {
    Conv {
        input: Tensor,
        pre: Option<Tensor>,
    },
    Pool {
        input_shape: Vec<usize>,
        argmax: Vec<usize>,
    },
    Dense {
        input: Tensor,
        pre: Option<Tensor>,
    },
    LogSoftMax {
        output: Tensor,
    },
}

impl TrainedModel {
    /// Draws every weight and bias uniformly from `±1/sqrt(fan_in)`, layer by
    /// layer, weights before biases.
    pub fn init<R: Rng + ?Sized>(spec: &NetworkSpec, rng: &mut R) -> Self {
        let params = spec
            .layers
            .iter()
            .map(|layer| {
                let (ws, bs) = layer.parameter_shapes()?;
                let bound = 1.0 / (layer.fan_in() as f64).sqrt();
                let weight = Tensor::from_fn(&ws, |_| rng.random_range(-bound..bound));
                let bias = Tensor::from_fn(&bs, |_| rng.random_range(-bound..bound));
                Some(LayerParams { weight, bias })
            })
            .collect();
        Self {
            spec: spec.clone(),
            params,
        }
    }

    /// Assembles a model from explicit parameters, checking every shape.
    pub fn from_params(spec: NetworkSpec, params: Vec<Option<LayerParams>>) -> Result<Self, NnError> {
        spec.output_shapes()?;
        if params.len() != spec.layers.len() {
            return Err(NnError::InvalidInput(format!(
                "{} parameter slots for {} layers",
                params.len(),
                spec.layers.len()
            )));
        }
        for (i, (layer, p)) in spec.layers.iter().zip(&params).enumerate() {
            let ok = match (layer.parameter_shapes(), p) {
                (None, None) => true,
                (Some((ws, bs)), Some(p)) => p.weight.shape() == ws && p.bias.shape() == bs,
                _ => false,
            };
            if !ok {
                return Err(NnError::Layer {
                    index: i + 1,
                    kind: layer.kind(),
                    detail: "parameter shapes do not match the layer".to_string(),
                });
            }
        }
        Ok(Self { spec, params })
    }

    pub fn spec(&self) -> &NetworkSpec {
        &self.spec
    }

    pub fn params(&self) -> &[Option<LayerParams>] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [Option<LayerParams>] {
        &mut self.params
    }

    /// Log-probabilities (or raw outputs if the spec does not end in
    /// LogSoftMax) for a `(n, c, h, w)` batch, as an `(n, outputs)` tensor.
    pub fn forward(&self, batch: &Tensor) -> Result<Tensor, NnError> {
        Ok(self.run_forward(batch, false)?.0)
    }

    /// Gradient of the mean NLL loss over the batch.
    pub fn backward(&self, batch: &Tensor, targets: &[usize]) -> Result<Gradients, NnError> {
        Ok(self.loss_and_gradients(batch, targets)?.1)
    }

    pub fn loss(&self, batch: &Tensor, targets: &[usize]) -> Result<f64, NnError> {
        nll_loss(&self.forward(batch)?, targets)
    }

    pub fn loss_and_gradients(&self, batch: &Tensor, targets: &[usize]) -> Result<(f64, Gradients), NnError> {
        let (output, traces) = self.run_forward(batch, true)?;
        let loss = nll_loss(&output, targets)?;
        let mut grad = nll_loss_backward(&output, targets)?;
        let mut layers: Vec<Option<LayerParams>> = vec![None; self.params.len()];

        for (i, trace) in traces.into_iter().enumerate().rev() {
            let need_input = i > 0;
            match trace {
                Trace::LogSoftMax { output } => {
                    grad = log_softmax_backward(&grad, &output);
                }
                Trace::Pool { input_shape, argmax } => {
                    grad = maxpool_backward(&grad, &argmax, &input_shape);
                }
                Trace::Conv { input, pre } => {
                    if let Some(pre) = pre {
                        grad = relu_backward(&grad, &pre);
                    }
                    let p = self.layer_params(i);
                    let g = conv2d_backward(&input, &p.weight, (1, 1), &grad, need_input)?;
                    layers[i] = Some(LayerParams {
                        weight: g.kernels,
                        bias: g.bias,
                    });
                    match g.input {
                        Some(gi) => grad = gi,
                        None => break,
                    }
                }
                Trace::Dense { input, pre } => {
                    if let Some(pre) = pre {
                        grad = relu_backward(&grad, &pre);
                    }
                    let p = self.layer_params(i);
                    let g = dense_backward(&input, &p.weight, &grad, need_input)?;
                    layers[i] = Some(LayerParams {
                        weight: g.weight,
                        bias: g.bias,
                    });
                    match g.input {
                        Some(gi) => grad = gi,
                        None => break,
                    }
                }
            }
        }
        Ok((loss, Gradients { layers }))
    }

    fn layer_params(&self, i: usize) -> &LayerParams {
        self.params[i].as_ref().expect("parameterized layer has parameters")
    }

    fn check_batch(&self, batch: &Tensor) -> Result<(), NnError> {
        let (c, h, w) = self.spec.input_shape;
        let ok = matches!(batch.dims4(), Some((_, bc, bh, bw)) if (bc, bh, bw) == (c, h, w));
        if ok {
            Ok(())
        } else {
            let first = &self.spec.layers[0];
            Err(NnError::Layer {
                index: 1,
                kind: first.kind(),
                detail: format!(
                    "batch shape {:?} does not match input (n, {c}, {h}, {w})",
                    batch.shape()
                ),
            })
        }
    }

    fn run_forward(&self, batch: &Tensor, keep: bool) -> Result<(Tensor, Vec<Trace>), NnError> {
        self.check_batch(batch)?;
        let mut traces = Vec::with_capacity(if keep { self.spec.layers.len() } else { 0 });
        let mut x = batch.clone();
        for (i, layer) in self.spec.layers.iter().enumerate() {
            let wrap = |e: NnError| NnError::Layer {
                index: i + 1,
                kind: layer.kind(),
                detail: e.to_string(),
            };
            match *layer {
                LayerSpec::Convolution { activation, .. } => {
                    let p = self.layer_params(i);
                    let pre = conv2d_forward(&x, &p.weight, &p.bias, (1, 1)).map_err(wrap)?;
                    let (out, pre) = activate(pre, activation, keep);
                    if keep {
                        traces.push(Trace::Conv { input: x, pre });
                    }
                    x = out;
                }
                LayerSpec::MaxPool {
                    window_h,
                    window_w,
                    stride_h,
                    stride_w,
                } => {
                    let (out, argmax) =
                        maxpool_forward(&x, (window_h, window_w), (stride_h, stride_w)).map_err(wrap)?;
                    if keep {
                        traces.push(Trace::Pool {
                            input_shape: x.shape().to_vec(),
                            argmax,
                        });
                    }
                    x = out;
                }
                LayerSpec::FullyConnected { activation, .. } => {
                    let p = self.layer_params(i);
                    let pre = dense_forward(&x, &p.weight, &p.bias).map_err(wrap)?;
                    let (out, pre) = activate(pre, activation, keep);
                    if keep {
                        traces.push(Trace::Dense { input: x, pre });
                    }
                    x = out;
                }
                LayerSpec::LogSoftMax => {
                    let out = log_softmax(&x);
                    if keep {
                        traces.push(Trace::LogSoftMax { output: out.clone() });
                    }
                    x = out;
                }
            }
        }
        Ok((x, traces))
    }
}

fn activate(pre: Tensor, activation: Activation, keep: bool) -> (Tensor, Option<Tensor>) {
    match activation {
        Activation::Identity => (pre, None),
        Activation::Relu => {
            let out = relu(&pre);
            (out, keep.then_some(pre))
        }
    }
}

impl Gradients {
    /// Gradients of every parameter, flattened in layer order (weights first).
    pub fn flatten(&self) -> Vec<f64> {
        self.layers
            .iter()
            .flatten()
            .flat_map(|p| p.weight.data().iter().chain(p.bias.data()).copied())
            .collect()
    }
}
