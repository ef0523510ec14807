use std::fmt;

use crate::nn::ops::valid_extent;
use crate::nn::NnError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Activation {
    Identity,
    Relu,
}

/// One layer of a [`NetworkSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LayerSpec {
    /// Valid convolution with unit stride.
    Convolution {
        in_channels: usize,
        out_channels: usize,
        kernel_h: usize,
        kernel_w: usize,
        activation: Activation,
    },
    MaxPool {
        window_h: usize,
        window_w: usize,
        stride_h: usize,
        stride_w: usize,
    },
    /// Flattens its input before the affine map.
    FullyConnected {
        in_features: usize,
        out_features: usize,
        activation: Activation,
    },
    LogSoftMax,
}

impl LayerSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            LayerSpec::Convolution { .. } => "Convolution",
            LayerSpec::MaxPool { .. } => "MaxPool",
            LayerSpec::FullyConnected { .. } => "FullyConnected",
            LayerSpec::LogSoftMax => "LogSoftMax",
        }
    }

    /// Weights plus biases.
    pub fn parameter_count(&self) -> usize {
        match *self {
            LayerSpec::Convolution {
                in_channels,
                out_channels,
                kernel_h,
                kernel_w,
                ..
            } => in_channels * kernel_h * kernel_w * out_channels + out_channels,
            LayerSpec::FullyConnected {
                in_features,
                out_features,
                ..
            } => in_features * out_features + out_features,
            LayerSpec::MaxPool { .. } | LayerSpec::LogSoftMax => 0,
        }
    }

    /// Shapes of the (weight, bias) tensors, if the layer has parameters.
    pub fn parameter_shapes(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        match *self {
            LayerSpec::Convolution {
                in_channels,
                out_channels,
                kernel_h,
                kernel_w,
                ..
            } => Some((vec![out_channels, in_channels, kernel_h, kernel_w], vec![out_channels])),
            LayerSpec::FullyConnected {
                in_features,
                out_features,
                ..
            } => Some((vec![out_features, in_features], vec![out_features])),
            _ => None,
        }
    }

    pub fn fan_in(&self) -> usize {
        match *self {
            LayerSpec::Convolution {
                in_channels,
                kernel_h,
                kernel_w,
                ..
            } => in_channels * kernel_h * kernel_w,
            LayerSpec::FullyConnected { in_features, .. } => in_features,
            _ => 0,
        }
    }

    /// Per-sample output shape for a per-sample input shape.
    pub fn output_shape(&self, input: &[usize]) -> Result<Vec<usize>, String> {
        match *self {
            LayerSpec::Convolution {
                in_channels,
                out_channels,
                kernel_h,
                kernel_w,
                ..
            } => {
                let [c, h, w] = *input else {
                    return Err(format!("expects (channels, height, width), got {input:?}"));
                };
                if c != in_channels {
                    return Err(format!("expects {in_channels} channels, got {input:?}"));
                }
                match (valid_extent(h, kernel_h, 1), valid_extent(w, kernel_w, 1)) {
                    (Some(oh), Some(ow)) => Ok(vec![out_channels, oh, ow]),
                    _ => Err(format!("kernel {kernel_h}x{kernel_w} larger than input {input:?}")),
                }
            }
            LayerSpec::MaxPool {
                window_h,
                window_w,
                stride_h,
                stride_w,
            } => {
                let [c, h, w] = *input else {
                    return Err(format!("expects (channels, height, width), got {input:?}"));
                };
                match (valid_extent(h, window_h, stride_h), valid_extent(w, window_w, stride_w)) {
                    (Some(oh), Some(ow)) => Ok(vec![c, oh, ow]),
                    _ => Err(format!(
                        "window {window_h}x{window_w} stride {stride_h}x{stride_w} does not fit {input:?}"
                    )),
                }
            }
            LayerSpec::FullyConnected {
                in_features,
                out_features,
                ..
            } => {
                let got: usize = input.iter().product();
                if got != in_features {
                    return Err(format!("expects {in_features} features, got {input:?}"));
                }
                Ok(vec![out_features])
            }
            LayerSpec::LogSoftMax => match input {
                [k] if *k > 0 => Ok(vec![*k]),
                _ => Err(format!("expects a flat feature vector, got {input:?}")),
            },
        }
    }
}

impl fmt::Display for LayerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            LayerSpec::Convolution {
                in_channels,
                out_channels,
                kernel_h,
                kernel_w,
                activation,
            } => write!(
                f,
                "Convolution({in_channels}->{out_channels}, {kernel_h}x{kernel_w}, {activation:?})"
            ),
            LayerSpec::MaxPool {
                window_h,
                window_w,
                stride_h,
                stride_w,
            } => write!(f, "MaxPool({window_h}x{window_w}, stride {stride_h}x{stride_w})"),
            LayerSpec::FullyConnected {
                in_features,
                out_features,
                activation,
            } => write!(f, "FullyConnected({in_features}->{out_features}, {activation:?})"),
            LayerSpec::LogSoftMax => write!(f, "LogSoftMax"),
        }
    }
}

/// Layer-by-layer architecture plus the per-sample input shape `(c, h, w)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NetworkSpec {
    pub input_shape: (usize, usize, usize),
    pub layers: Vec<LayerSpec>,
}

impl NetworkSpec {
    /// Builds a spec and checks that consecutive layers fit together.
    pub fn new(input_shape: (usize, usize, usize), layers: Vec<LayerSpec>) -> Result<Self, NnError> {
        let spec = Self { input_shape, layers };
        spec.output_shapes()?;
        Ok(spec)
    }

    /// The MNIST convnet: two 5x5 ReLU convolutions (32 and 64 maps), 3x3 and
    /// 2x2 max pooling, a 200-unit hidden layer and 10 log-probabilities.
    pub fn mnist_default() -> Self {
        Self::mnist_default_with(Activation::Relu)
    }

    /// The MNIST convnet with a chosen activation on the 200-unit layer.
    pub fn mnist_default_with(hidden_activation: Activation) -> Self {
        Self::new(
            (1, 28, 28),
            vec![
                LayerSpec::Convolution {
                    in_channels: 1,
                    out_channels: 32,
                    kernel_h: 5,
                    kernel_w: 5,
                    activation: Activation::Relu,
                },
                LayerSpec::MaxPool {
                    window_h: 3,
                    window_w: 3,
                    stride_h: 3,
                    stride_w: 3,
                },
                LayerSpec::Convolution {
                    in_channels: 32,
                    out_channels: 64,
                    kernel_h: 5,
                    kernel_w: 5,
                    activation: Activation::Relu,
                },
                LayerSpec::MaxPool {
                    window_h: 2,
                    window_w: 2,
                    stride_h: 2,
                    stride_w: 2,
                },
                LayerSpec::FullyConnected {
                    in_features: 256,
                    out_features: 200,
                    activation: hidden_activation,
                },
                LayerSpec::FullyConnected {
                    in_features: 200,
                    out_features: 10,
                    activation: Activation::Identity,
                },
                LayerSpec::LogSoftMax,
            ],
        )
        .expect("default spec is consistent")
    }

    /// Softmax regression: one fully connected layer and LogSoftMax.
    pub fn linear(input_shape: (usize, usize, usize), classes: usize) -> Result<Self, NnError> {
        let (c, h, w) = input_shape;
        Self::new(
            input_shape,
            vec![
                LayerSpec::FullyConnected {
                    in_features: c * h * w,
                    out_features: classes,
                    activation: Activation::Identity,
                },
                LayerSpec::LogSoftMax,
            ],
        )
    }

    /// Fully connected ReLU network with the given hidden widths.
    pub fn mlp(input_shape: (usize, usize, usize), hidden: &[usize], classes: usize) -> Result<Self, NnError> {
        let (c, h, w) = input_shape;
        let mut layers = Vec::new();
        let mut width = c * h * w;
        for &units in hidden {
            layers.push(LayerSpec::FullyConnected {
                in_features: width,
                out_features: units,
                activation: Activation::Relu,
            });
            width = units;
        }
        layers.push(LayerSpec::FullyConnected {
            in_features: width,
            out_features: classes,
            activation: Activation::Identity,
        });
        layers.push(LayerSpec::LogSoftMax);
        Self::new(input_shape, layers)
    }

    /// Per-sample output shape of every layer, in order.
    pub fn output_shapes(&self) -> Result<Vec<Vec<usize>>, NnError> {
        let (c, h, w) = self.input_shape;
        if c == 0 || h == 0 || w == 0 {
            return Err(NnError::InvalidInput(format!(
                "input shape {:?} has an empty dimension",
                self.input_shape
            )));
        }
        if self.layers.is_empty() {
            return Err(NnError::InvalidInput("network has no layers".to_string()));
        }
        let mut shape = vec![c, h, w];
        let mut shapes = Vec::with_capacity(self.layers.len());
        for (i, layer) in self.layers.iter().enumerate() {
            shape = layer.output_shape(&shape).map_err(|detail| NnError::Layer {
                index: i + 1,
                kind: layer.kind(),
                detail,
            })?;
            shapes.push(shape.clone());
        }
        Ok(shapes)
    }

    pub fn parameter_counts(&self) -> Vec<usize> {
        self.layers.iter().map(LayerSpec::parameter_count).collect()
    }

    pub fn total_parameters(&self) -> usize {
        self.parameter_counts().iter().sum()
    }

    /// Width of the final output, i.e. the number of classes.
    pub fn num_outputs(&self) -> usize {
        self.output_shapes()
            .ok()
            .and_then(|s| s.last().map(|s| s.iter().product()))
            .unwrap_or(0)
    }

    pub fn ends_with_log_softmax(&self) -> bool {
        matches!(self.layers.last(), Some(LayerSpec::LogSoftMax))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_spec_shapes() {
        let shapes = NetworkSpec::mnist_default().output_shapes().unwrap();
        let want: Vec<Vec<usize>> = vec![
            vec![32, 24, 24],
            vec![32, 8, 8],
            vec![64, 4, 4],
            vec![64, 2, 2],
            vec![200],
            vec![10],
            vec![10],
        ];
        assert_eq!(shapes, want);
    }

    #[test]
    fn default_spec_parameter_counts_follow_formula() {
        // 1*25*32+32, 32*25*64+64, 256*200+200, 200*10+10
        assert_eq!(
            NetworkSpec::mnist_default().parameter_counts(),
            vec![832, 0, 51_264, 0, 51_400, 2_010, 0]
        );
    }

    #[test]
    fn mismatched_layers_are_named() {
        let err = NetworkSpec::new(
            (1, 4, 4),
            vec![
                LayerSpec::FullyConnected {
                    in_features: 16,
                    out_features: 3,
                    activation: Activation::Identity,
                },
                LayerSpec::FullyConnected {
                    in_features: 4,
                    out_features: 2,
                    activation: Activation::Identity,
                },
            ],
        )
        .unwrap_err();
        assert!(matches!(
            err,
            NnError::Layer {
                index: 2,
                kind: "FullyConnected",
                ..
            }
        ));
    }

    #[test]
    fn oversized_kernel_rejected() {
        let err = NetworkSpec::new(
            (1, 3, 3),
            vec![LayerSpec::Convolution {
                in_channels: 1,
                out_channels: 1,
                kernel_h: 4,
                kernel_w: 4,
                activation: Activation::Relu,
            }],
        );
        assert!(err.is_err());
    }
}
