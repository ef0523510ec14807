//! Binary weight container (`.sevm`).
//!
//! All integers are little-endian `u32`, all weights little-endian `f64`:
//!
//! ```text
//! magic        4 bytes  "SEVM"
//! version      u32      1
//! layer_count  u32
//! input_shape  3 x u32  channels, height, width
//! per layer:
//!   kind       u32      0 convolution, 1 max-pool, 2 fully connected, 3 log-softmax
//!   descriptor u32s     convolution: in, out, kernel_h, kernel_w, activation
//!                       max-pool: window_h, window_w, stride_h, stride_w
//!                       fully connected: in, out, activation
//!                       log-softmax: (none)
//!   tensors    u32      0 for parameter-free layers, 2 otherwise (weight, bias)
//!   per tensor:
//!     rank     u32
//!     dims     rank x u32
//!     values   product(dims) x f64
//! ```
//!
//! Activation codes are 0 for identity and 1 for ReLU.

use crate::nn::model::{LayerParams, TrainedModel};
use crate::nn::spec::{Activation, LayerSpec, NetworkSpec};
use crate::nn::NnError;
use crate::tensor::Tensor;

pub const MAGIC: &[u8; 4] = b"SEVM";
pub const VERSION: u32 = 1;

pub fn to_bytes(model: &TrainedModel) -> Vec<u8> {
    let spec = model.spec();
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    let put = |out: &mut Vec<u8>, v: usize| out.extend_from_slice(&(v as u32).to_le_bytes());
    put(&mut out, VERSION as usize);
    put(&mut out, spec.layers.len());
    let (c, h, w) = spec.input_shape;
    for v in [c, h, w] {
        put(&mut out, v);
    }
    for (layer, params) in spec.layers.iter().zip(model.params()) {
        let descriptor: Vec<usize> = match *layer {
            LayerSpec::Convolution {
                in_channels,
                out_channels,
                kernel_h,
                kernel_w,
                activation,
            } => vec![0, in_channels, out_channels, kernel_h, kernel_w, act_code(activation)],
            LayerSpec::MaxPool {
                window_h,
                window_w,
                stride_h,
                stride_w,
            } => vec![1, window_h, window_w, stride_h, stride_w],
            LayerSpec::FullyConnected {
                in_features,
                out_features,
                activation,
            } => vec![2, in_features, out_features, act_code(activation)],
            LayerSpec::LogSoftMax => vec![3],
        };
        for v in descriptor {
            put(&mut out, v);
        }
        match params {
            None => put(&mut out, 0),
            Some(p) => {
                put(&mut out, 2);
                for t in [&p.weight, &p.bias] {
                    put(&mut out, t.rank());
                    for &d in t.shape() {
                        put(&mut out, d);
                    }
                    for v in t.data() {
                        out.extend_from_slice(&v.to_le_bytes());
                    }
                }
            }
        }
    }
    out
}

fn act_code(a: Activation) -> usize {
    match a {
        Activation::Identity => 0,
        Activation::Relu => 1,
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn err(&self, message: impl Into<String>) -> NnError {
        NnError::Format {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn take(&mut self, n: usize) -> Result<&[u8], NnError> {
        if self.bytes.len() - self.pos < n {
            return Err(self.err(format!("truncated: needed {n} more bytes")));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<usize, NnError> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes(b.try_into().expect("4 bytes")) as usize)
    }

    fn activation(&mut self) -> Result<Activation, NnError> {
        match self.u32()? {
            0 => Ok(Activation::Identity),
            1 => Ok(Activation::Relu),
            other => Err(self.err(format!("unknown activation code {other}"))),
        }
    }

    fn tensor(&mut self) -> Result<Tensor, NnError> {
        let rank = self.u32()?;
        if rank > 8 {
            return Err(self.err(format!("implausible tensor rank {rank}")));
        }
        let shape = (0..rank).map(|_| self.u32()).collect::<Result<Vec<_>, _>>()?;
        let volume = shape
            .iter()
            .try_fold(1usize, |a, &d| a.checked_mul(d))
            .and_then(|v| v.checked_mul(8).map(|_| v))
            .ok_or_else(|| self.err("tensor size overflows"))?;
        let raw = self.take(volume * 8)?;
        let data = raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        Tensor::new(shape, data)
    }
}

pub fn from_bytes(bytes: &[u8]) -> Result<TrainedModel, NnError> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(4)? != MAGIC {
        return Err(NnError::Format {
            offset: 0,
            message: "bad magic, expected SEVM".to_string(),
        });
    }
    let version = r.u32()?;
    if version != VERSION as usize {
        return Err(r.err(format!("unsupported version {version}")));
    }
    let count = r.u32()?;
    let input_shape = (r.u32()?, r.u32()?, r.u32()?);
    let mut layers = Vec::new();
    let mut params = Vec::new();
    for _ in 0..count {
        let layer = match r.u32()? {
            0 => LayerSpec::Convolution {
                in_channels: r.u32()?,
                out_channels: r.u32()?,
                kernel_h: r.u32()?,
                kernel_w: r.u32()?,
                activation: r.activation()?,
            },
            1 => LayerSpec::MaxPool {
                window_h: r.u32()?,
                window_w: r.u32()?,
                stride_h: r.u32()?,
                stride_w: r.u32()?,
            },
            2 => LayerSpec::FullyConnected {
                in_features: r.u32()?,
                out_features: r.u32()?,
                activation: r.activation()?,
            },
            3 => LayerSpec::LogSoftMax,
            other => return Err(r.err(format!("unknown layer kind {other}"))),
        };
        let p = match r.u32()? {
            0 => None,
            2 => Some(LayerParams {
                weight: r.tensor()?,
                bias: r.tensor()?,
            }),
            other => return Err(r.err(format!("layer carries {other} tensors"))),
        };
        layers.push(layer);
        params.push(p);
    }
    if r.pos != bytes.len() {
        return Err(r.err("trailing bytes after last layer"));
    }
    TrainedModel::from_params(NetworkSpec::new(input_shape, layers)?, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded_rng;

    #[test]
    fn round_trip_default_model() {
        let m = TrainedModel::init(&NetworkSpec::mnist_default(), &mut seeded_rng(3));
        let bytes = to_bytes(&m);
        assert_eq!(&bytes[..4], b"SEVM");
        assert_eq!(from_bytes(&bytes).unwrap(), m);
    }

    #[test]
    fn truncation_reports_offset() {
        let m = TrainedModel::init(&NetworkSpec::linear((1, 2, 2), 3).unwrap(), &mut seeded_rng(1));
        let bytes = to_bytes(&m);
        let err = from_bytes(&bytes[..bytes.len() - 3]).unwrap_err();
        assert!(matches!(err, NnError::Format { .. }));
        assert!(matches!(from_bytes(b"XXXX"), Err(NnError::Format { offset: 0, .. })));
    }
}
