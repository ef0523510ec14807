//! Layer kernels: convolution, max pooling, fully connected, ReLU, LogSoftMax
//! and the negative log-likelihood loss, each with its backward pass.
//!
//! All kernels work on whole batches. Image tensors are `(n, c, h, w)`,
//! feature tensors are `(n, features)`.

use crate::nn::NnError;
use crate::tensor::{gemm, Tensor};

pub fn relu(x: &Tensor) -> Tensor {
    x.map(|v| v.max(0.0))
}

/// Gradient of ReLU given the pre-activation it was applied to.
pub fn relu_backward(grad_out: &Tensor, pre_activation: &Tensor) -> Tensor {
    let data = grad_out
        .data()
        .iter()
        .zip(pre_activation.data())
        .map(|(&g, &p)| if p > 0.0 { g } else { 0.0 })
        .collect();
    Tensor::new(grad_out.shape().to_vec(), data).expect("relu_backward: same shape")
}

/// Output side length of a valid (unpadded) window sweep.
pub fn valid_extent(input: usize, window: usize, stride: usize) -> Option<usize> {
    if window == 0 || stride == 0 || window > input {
        None
    } else {
        Some((input - window) / stride + 1)
    }
}

fn dims4(t: &Tensor, what: &str) -> Result<(usize, usize, usize, usize), NnError> {
    t.dims4().ok_or_else(|| NnError::ShapeMismatch {
        context: what.to_string(),
        expected: "rank 4 (n, c, h, w)".to_string(),
        actual: t.shape().to_vec(),
    })
}

/// Geometry shared by the convolution forward and backward passes.
#[derive(Debug, Clone, Copy)]
struct ConvGeometry {
    c_in: usize,
    h: usize,
    w: usize,
    kh: usize,
    kw: usize,
    sh: usize,
    sw: usize,
    oh: usize,
    ow: usize,
}

impl ConvGeometry {
    fn patch_len(&self) -> usize {
        self.c_in * self.kh * self.kw
    }

    fn positions(&self) -> usize {
        self.oh * self.ow
    }

    /// Unfolds one `(c_in, h, w)` sample into a `(patch_len, positions)` matrix.
    fn im2col(&self, sample: &[f64], cols: &mut [f64]) {
        let p = self.positions();
        for ci in 0..self.c_in {
            let plane = &sample[ci * self.h * self.w..(ci + 1) * self.h * self.w];
            for ky in 0..self.kh {
                for kx in 0..self.kw {
                    let row = ((ci * self.kh + ky) * self.kw + kx) * p;
                    for oy in 0..self.oh {
                        let src = (oy * self.sh + ky) * self.w + kx;
                        let dst = row + oy * self.ow;
                        if self.sw == 1 {
                            cols[dst..dst + self.ow].copy_from_slice(&plane[src..src + self.ow]);
                        } else {
                            for ox in 0..self.ow {
                                cols[dst + ox] = plane[src + ox * self.sw];
                            }
                        }
                    }
                }
            }
        }
    }

    /// Adjoint of `im2col`: scatters a column matrix back onto a sample.
    fn col2im(&self, cols: &[f64], sample: &mut [f64]) {
        let p = self.positions();
        for ci in 0..self.c_in {
            let plane = &mut sample[ci * self.h * self.w..(ci + 1) * self.h * self.w];
            for ky in 0..self.kh {
                for kx in 0..self.kw {
                    let row = ((ci * self.kh + ky) * self.kw + kx) * p;
                    for oy in 0..self.oh {
                        let src = row + oy * self.ow;
                        let dst = (oy * self.sh + ky) * self.w + kx;
                        for ox in 0..self.ow {
                            plane[dst + ox * self.sw] += cols[src + ox];
                        }
                    }
                }
            }
        }
    }
}

fn conv_geometry(
    input: &Tensor,
    kernels: &Tensor,
    stride: (usize, usize),
) -> Result<(usize, usize, ConvGeometry), NnError> {
    let (n, c_in, h, w) = dims4(input, "convolution input")?;
    let (c_out, kc, kh, kw) = dims4(kernels, "convolution kernels")?;
    if kc != c_in {
        return Err(NnError::ShapeMismatch {
            context: "convolution kernels".to_string(),
            expected: format!("{c_in} input channels"),
            actual: kernels.shape().to_vec(),
        });
    }
    let (sh, sw) = stride;
    let (oh, ow) = match (valid_extent(h, kh, sh), valid_extent(w, kw, sw)) {
        (Some(oh), Some(ow)) => (oh, ow),
        _ => {
            return Err(NnError::InvalidInput(format!(
                "kernel {kh}x{kw} with stride {sh}x{sw} does not fit input {h}x{w}"
            )))
        }
    };
    Ok((
        n,
        c_out,
        ConvGeometry {
            c_in,
            h,
            w,
            kh,
            kw,
            sh,
            sw,
            oh,
            ow,
        },
    ))
}

/// Valid (unpadded) 2-D cross-correlation, as used by convolution layers.
///
/// `input` is `(n, c_in, h, w)`, `kernels` is `(c_out, c_in, kh, kw)` and
/// `bias` holds `c_out` values. Output is `(n, c_out, oh, ow)` with
/// `oh = (h - kh) / stride_h + 1`.
pub fn conv2d_forward(
    input: &Tensor,
    kernels: &Tensor,
    bias: &Tensor,
    stride: (usize, usize),
) -> Result<Tensor, NnError> {
    let (n, c_out, g) = conv_geometry(input, kernels, stride)?;
    if bias.len() != c_out {
        return Err(NnError::ShapeMismatch {
            context: "convolution bias".to_string(),
            expected: format!("{c_out} values"),
            actual: bias.shape().to_vec(),
        });
    }
    let k = g.patch_len();
    let p = g.positions();
    let sample_in = g.c_in * g.h * g.w;
    let mut out = vec![0.0; n * c_out * p];
    let mut cols = vec![0.0; k * p];
    for (i, out_sample) in out.chunks_exact_mut(c_out * p).enumerate() {
        g.im2col(&input.data()[i * sample_in..(i + 1) * sample_in], &mut cols);
        for (co, plane) in out_sample.chunks_exact_mut(p).enumerate() {
            plane.fill(bias.data()[co]);
        }
        gemm(kernels.data(), (c_out, k), false, &cols, (k, p), false, 1.0, out_sample);
    }
    Tensor::new(vec![n, c_out, g.oh, g.ow], out)
}

/// Gradients of a convolution with respect to its input, kernels and bias.
pub struct ConvGradients {
    /// `None` when the caller did not ask for it (first layer of a network).
    pub input: Option<Tensor>,
    pub kernels: Tensor,
    pub bias: Tensor,
}

pub fn conv2d_backward(
    input: &Tensor,
    kernels: &Tensor,
    stride: (usize, usize),
    grad_out: &Tensor,
    need_input_grad: bool,
) -> Result<ConvGradients, NnError> {
    let (n, c_out, g) = conv_geometry(input, kernels, stride)?;
    let expected = [n, c_out, g.oh, g.ow];
    if grad_out.shape() != expected {
        return Err(NnError::ShapeMismatch {
            context: "convolution output gradient".to_string(),
            expected: format!("{expected:?}"),
            actual: grad_out.shape().to_vec(),
        });
    }
    let k = g.patch_len();
    let p = g.positions();
    let sample_in = g.c_in * g.h * g.w;
    let mut grad_kernels = vec![0.0; c_out * k];
    let mut grad_bias = vec![0.0; c_out];
    let mut grad_input = if need_input_grad {
        Some(vec![0.0; input.len()])
    } else {
        None
    };
    let mut cols = vec![0.0; k * p];
    let mut grad_cols = vec![0.0; k * p];
    for i in 0..n {
        let dout = &grad_out.data()[i * c_out * p..(i + 1) * c_out * p];
        g.im2col(&input.data()[i * sample_in..(i + 1) * sample_in], &mut cols);
        gemm(dout, (c_out, p), false, &cols, (k, p), true, 1.0, &mut grad_kernels);
        for (co, plane) in dout.chunks_exact(p).enumerate() {
            grad_bias[co] += plane.iter().sum::<f64>();
        }
        if let Some(gi) = grad_input.as_mut() {
            gemm(
                kernels.data(),
                (c_out, k),
                true,
                dout,
                (c_out, p),
                false,
                0.0,
                &mut grad_cols,
            );
            g.col2im(&grad_cols, &mut gi[i * sample_in..(i + 1) * sample_in]);
        }
    }
    Ok(ConvGradients {
        input: grad_input.map(|d| Tensor::new(input.shape().to_vec(), d).expect("input shape")),
        kernels: Tensor::new(kernels.shape().to_vec(), grad_kernels)?,
        bias: Tensor::new(vec![c_out], grad_bias)?,
    })
}

/// Max pooling over `window` with `stride`, no padding.
///
/// Returns the pooled tensor and, for every output element, the flat index
/// of the input element that produced it. Ties go to the first maximum in
/// row-major window order.
pub fn maxpool_forward(
    input: &Tensor,
    window: (usize, usize),
    stride: (usize, usize),
) -> Result<(Tensor, Vec<usize>), NnError> {
    let (n, c, h, w) = dims4(input, "max-pool input")?;
    let (wh, ww) = window;
    let (sh, sw) = stride;
    let (oh, ow) = match (valid_extent(h, wh, sh), valid_extent(w, ww, sw)) {
        (Some(oh), Some(ow)) => (oh, ow),
        _ => {
            return Err(NnError::InvalidInput(format!(
                "pool window {wh}x{ww} with stride {sh}x{sw} does not fit input {h}x{w}"
            )))
        }
    };
    let x = input.data();
    let mut out = Vec::with_capacity(n * c * oh * ow);
    let mut argmax = Vec::with_capacity(n * c * oh * ow);
    for plane in 0..n * c {
        let base = plane * h * w;
        for oy in 0..oh {
            for ox in 0..ow {
                let mut best = base + oy * sh * w + ox * sw;
                for ky in 0..wh {
                    let row = base + (oy * sh + ky) * w + ox * sw;
                    for idx in row..row + ww {
                        if x[idx] > x[best] {
                            best = idx;
                        }
                    }
                }
                out.push(x[best]);
                argmax.push(best);
            }
        }
    }
    Ok((Tensor::new(vec![n, c, oh, ow], out)?, argmax))
}

/// Routes each output gradient to the input position that won the max.
pub fn maxpool_backward(grad_out: &Tensor, argmax: &[usize], input_shape: &[usize]) -> Tensor {
    let mut grad = Tensor::zeros(input_shape);
    let g = grad.data_mut();
    for (&idx, &v) in argmax.iter().zip(grad_out.data()) {
        g[idx] += v;
    }
    grad
}

/// `y = x W^T + b` for `x` of shape `(n, in)`, `weight` of shape `(out, in)`.
pub fn dense_forward(input: &Tensor, weight: &Tensor, bias: &Tensor) -> Result<Tensor, NnError> {
    let (n, fin) = flat2(input);
    let (fout, win) = weight.dims2().ok_or_else(|| NnError::ShapeMismatch {
        context: "fully connected weight".to_string(),
        expected: "rank 2 (out, in)".to_string(),
        actual: weight.shape().to_vec(),
    })?;
    if win != fin || bias.len() != fout {
        return Err(NnError::ShapeMismatch {
            context: "fully connected input".to_string(),
            expected: format!("{win} features"),
            actual: input.shape().to_vec(),
        });
    }
    let mut out = Vec::with_capacity(n * fout);
    for _ in 0..n {
        out.extend_from_slice(bias.data());
    }
    gemm(
        input.data(),
        (n, fin),
        false,
        weight.data(),
        (fout, fin),
        true,
        1.0,
        &mut out,
    );
    Tensor::new(vec![n, fout], out)
}

pub struct DenseGradients {
    pub input: Option<Tensor>,
    pub weight: Tensor,
    pub bias: Tensor,
}

/// Backward pass of [`dense_forward`]. The input gradient keeps the shape
/// the input arrived in (possibly an image tensor that was flattened).
pub fn dense_backward(
    input: &Tensor,
    weight: &Tensor,
    grad_out: &Tensor,
    need_input_grad: bool,
) -> Result<DenseGradients, NnError> {
    let (n, fin) = flat2(input);
    let (fout, _) = weight.dims2().expect("dense weight is rank 2");
    if grad_out.shape() != [n, fout] {
        return Err(NnError::ShapeMismatch {
            context: "fully connected output gradient".to_string(),
            expected: format!("[{n}, {fout}]"),
            actual: grad_out.shape().to_vec(),
        });
    }
    let mut gw = vec![0.0; fout * fin];
    gemm(
        grad_out.data(),
        (n, fout),
        true,
        input.data(),
        (n, fin),
        false,
        0.0,
        &mut gw,
    );
    let mut gb = vec![0.0; fout];
    for row in grad_out.data().chunks_exact(fout) {
        for (b, &v) in gb.iter_mut().zip(row) {
            *b += v;
        }
    }
    let gi = if need_input_grad {
        let mut gi = vec![0.0; n * fin];
        gemm(
            grad_out.data(),
            (n, fout),
            false,
            weight.data(),
            (fout, fin),
            false,
            0.0,
            &mut gi,
        );
        Some(Tensor::new(input.shape().to_vec(), gi)?)
    } else {
        None
    };
    Ok(DenseGradients {
        input: gi,
        weight: Tensor::new(vec![fout, fin], gw)?,
        bias: Tensor::new(vec![fout], gb)?,
    })
}

fn flat2(t: &Tensor) -> (usize, usize) {
    match t.shape().first() {
        Some(&n) => (n, t.row_len()),
        None => (1, t.len()),
    }
}

/// Row-wise `x_i - ln(sum_j exp(x_j))`, shifted by the row maximum.
pub fn log_softmax(x: &Tensor) -> Tensor {
    let (_, k) = flat2(x);
    let mut out = x.data().to_vec();
    for row in out.chunks_exact_mut(k) {
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lse = max + row.iter().map(|&v| (v - max).exp()).sum::<f64>().ln();
        for v in row.iter_mut() {
            *v -= lse;
        }
    }
    Tensor::new(x.shape().to_vec(), out).expect("same shape")
}

/// Backward pass of [`log_softmax`] given its output.
pub fn log_softmax_backward(grad_out: &Tensor, output: &Tensor) -> Tensor {
    let (_, k) = flat2(output);
    let mut grad = grad_out.data().to_vec();
    for (g, y) in grad.chunks_exact_mut(k).zip(output.data().chunks_exact(k)) {
        let total: f64 = g.iter().sum();
        for (gi, &yi) in g.iter_mut().zip(y) {
            *gi -= yi.exp() * total;
        }
    }
    Tensor::new(grad_out.shape().to_vec(), grad).expect("same shape")
}

fn check_targets(log_probs: &Tensor, targets: &[usize]) -> Result<(usize, usize), NnError> {
    let (n, k) = log_probs.dims2().ok_or_else(|| NnError::ShapeMismatch {
        context: "loss input".to_string(),
        expected: "rank 2 (n, classes)".to_string(),
        actual: log_probs.shape().to_vec(),
    })?;
    if targets.len() != n {
        return Err(NnError::InvalidInput(format!(
            "{} targets for a batch of {n}",
            targets.len()
        )));
    }
    if n == 0 {
        return Err(NnError::InvalidInput("loss of an empty batch".to_string()));
    }
    if let Some((row, &target)) = targets.iter().enumerate().find(|(_, &t)| t >= k) {
        return Err(NnError::TargetOutOfRange {
            row,
            target,
            classes: k,
        });
    }
    Ok((n, k))
}

/// Mean negative log-likelihood of the target classes.
pub fn nll_loss(log_probs: &Tensor, targets: &[usize]) -> Result<f64, NnError> {
    let (n, _) = check_targets(log_probs, targets)?;
    let total: f64 = targets.iter().enumerate().map(|(i, &t)| -log_probs.row(i)[t]).sum();
    Ok(total / n as f64)
}

/// Gradient of [`nll_loss`] with respect to the log-probabilities.
pub fn nll_loss_backward(log_probs: &Tensor, targets: &[usize]) -> Result<Tensor, NnError> {
    let (n, k) = check_targets(log_probs, targets)?;
    let mut grad = Tensor::zeros(&[n, k]);
    let scale = -1.0 / n as f64;
    for (i, &t) in targets.iter().enumerate() {
        grad.data_mut()[i * k + t] = scale;
    }
    Ok(grad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn t(shape: &[usize], data: &[f64]) -> Tensor {
        Tensor::new(shape.to_vec(), data.to_vec()).unwrap()
    }

    fn random(shape: &[usize], rng: &mut ChaCha8Rng) -> Tensor {
        Tensor::from_fn(shape, |_| rng.random_range(-1.0..1.0))
    }

    #[test]
    fn relu_cases() {
        assert_eq!(relu(&t(&[3], &[-1.0, 0.0, 2.0])).data(), &[0.0, 0.0, 2.0]);
        assert_eq!(relu(&t(&[2], &[-3.0, -0.5])).data(), &[0.0, 0.0]);
        let pos = t(&[2, 2], &[0.1, 1.0, 2.0, 3.0]);
        assert_eq!(relu(&pos), pos);
    }

    #[test]
    fn conv_identity_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random(&[2, 1, 4, 5], &mut rng);
        let k = t(&[1, 1, 1, 1], &[1.0]);
        let b = t(&[1], &[0.0]);
        assert_eq!(conv2d_forward(&x, &k, &b, (1, 1)).unwrap(), x);
    }

    #[test]
    fn conv_window_sum() {
        let x = t(&[1, 1, 2, 2], &[1.0, 2.0, 3.0, 4.0]);
        let k = t(&[1, 1, 2, 2], &[1.0; 4]);
        let b = t(&[1], &[0.0]);
        let y = conv2d_forward(&x, &k, &b, (1, 1)).unwrap();
        assert_eq!(y.shape(), &[1, 1, 1, 1]);
        assert_eq!(y.data(), &[10.0]);
    }

    /// Direct six-fold loop over (sample, out channel, out y, out x, in channel, kernel y/x).
    fn conv_reference(x: &Tensor, k: &Tensor, b: &Tensor, (sh, sw): (usize, usize)) -> Tensor {
        let (n, ci, h, w) = x.dims4().unwrap();
        let (co, _, kh, kw) = k.dims4().unwrap();
        let oh = (h - kh) / sh + 1;
        let ow = (w - kw) / sw + 1;
        let mut out = Tensor::zeros(&[n, co, oh, ow]);
        for s in 0..n {
            for o in 0..co {
                for y in 0..oh {
                    for xx in 0..ow {
                        let mut acc = b.data()[o];
                        for c in 0..ci {
                            for ky in 0..kh {
                                for kx in 0..kw {
                                    let iv = x.data()[((s * ci + c) * h + y * sh + ky) * w + xx * sw + kx];
                                    let kv = k.data()[((o * ci + c) * kh + ky) * kw + kx];
                                    acc += iv * kv;
                                }
                            }
                        }
                        out.data_mut()[((s * co + o) * oh + y) * ow + xx] = acc;
                    }
                }
            }
        }
        out
    }

    #[test]
    fn conv_matches_loop_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x = random(&[1, 2, 5, 5], &mut rng);
        let k = random(&[3, 2, 3, 3], &mut rng);
        let b = random(&[3], &mut rng);
        for stride in [(1, 1), (2, 2), (1, 2)] {
            let got = conv2d_forward(&x, &k, &b, stride).unwrap();
            let want = conv_reference(&x, &k, &b, stride);
            assert_eq!(got.shape(), want.shape());
            for (a, b) in got.data().iter().zip(want.data()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn conv_rejects_oversized_kernel() {
        let x = Tensor::zeros(&[1, 1, 2, 2]);
        let k = Tensor::zeros(&[1, 1, 3, 3]);
        let b = Tensor::zeros(&[1]);
        assert!(matches!(
            conv2d_forward(&x, &k, &b, (1, 1)),
            Err(NnError::InvalidInput(_))
        ));
    }

    #[test]
    fn maxpool_cases() {
        let x = t(&[1, 1, 2, 2], &[1.0, 2.0, 3.0, 4.0]);
        let (y, arg) = maxpool_forward(&x, (2, 2), (2, 2)).unwrap();
        assert_eq!(y.data(), &[4.0]);
        assert_eq!(arg, vec![3]);

        let c = Tensor::filled(&[1, 2, 6, 6], 0.25);
        let (y, _) = maxpool_forward(&c, (3, 3), (3, 3)).unwrap();
        assert_eq!(y.shape(), &[1, 2, 2, 2]);
        assert!(y.data().iter().all(|&v| v == 0.25));

        assert!(maxpool_forward(&x, (3, 3), (1, 1)).is_err());
    }

    #[test]
    fn maxpool_matches_loop_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = random(&[1, 1, 4, 4], &mut rng);
        let (y, _) = maxpool_forward(&x, (2, 2), (2, 2)).unwrap();
        for oy in 0..2 {
            for ox in 0..2 {
                let mut m = f64::NEG_INFINITY;
                for ky in 0..2 {
                    for kx in 0..2 {
                        m = m.max(x.data()[(oy * 2 + ky) * 4 + ox * 2 + kx]);
                    }
                }
                assert_eq!(y.data()[oy * 2 + ox], m);
            }
        }
    }

    #[test]
    fn maxpool_backward_routes_to_argmax() {
        let x = t(&[1, 1, 2, 2], &[1.0, 5.0, 3.0, 4.0]);
        let (_, arg) = maxpool_forward(&x, (2, 2), (2, 2)).unwrap();
        let g = maxpool_backward(&t(&[1, 1, 1, 1], &[2.0]), &arg, x.shape());
        assert_eq!(g.data(), &[0.0, 2.0, 0.0, 0.0]);
    }

    #[test]
    fn dense_identity() {
        let x = t(&[1, 2], &[3.0, -1.0]);
        let w = t(&[2, 2], &[1.0, 0.0, 0.0, 1.0]);
        let b = t(&[2], &[0.0, 0.0]);
        assert_eq!(dense_forward(&x, &w, &b).unwrap().data(), &[3.0, -1.0]);
    }

    #[test]
    fn log_softmax_values() {
        let y = log_softmax(&t(&[1, 2], &[0.0, 0.0]));
        let ln2 = std::f64::consts::LN_2;
        assert!((y.data()[0] + ln2).abs() < 1e-15);
        assert!((y.data()[1] + ln2).abs() < 1e-15);

        // Reference values of x_i - ln(e + e^2 + e^3), evaluated to 20 digits
        // with mpmath at 50-digit precision.
        let y = log_softmax(&t(&[1, 3], &[1.0, 2.0, 3.0]));
        let want = [-2.407_605_964_444_38, -1.407_605_964_444_38, -0.407_605_964_444_38];
        for (a, b) in y.data().iter().zip(want) {
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
        }
    }

    #[test]
    fn log_softmax_large_inputs_stay_normalized() {
        let y = log_softmax(&t(&[2, 3], &[1000.0, 1001.0, 999.0, -1e6, 0.0, 3e5]));
        assert!(y.all_finite());
        for r in 0..2 {
            let s: f64 = y.row(r).iter().map(|v| v.exp()).sum();
            assert!((s - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn nll_cases() {
        assert_eq!(nll_loss(&t(&[1, 1], &[0.0]), &[0]).unwrap(), 0.0);
        let ln2 = std::f64::consts::LN_2;
        let lp = t(&[2, 2], &[-ln2, -ln2, -ln2, -ln2]);
        assert!((nll_loss(&lp, &[0, 1]).unwrap() - ln2).abs() < 1e-15);
        assert!(matches!(
            nll_loss(&lp, &[0, 2]),
            Err(NnError::TargetOutOfRange {
                row: 1,
                target: 2,
                classes: 2
            })
        ));
    }

    #[test]
    fn nll_matches_direct_indexing() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let lp = log_softmax(&random(&[6, 4], &mut rng));
        let targets: Vec<usize> = (0..6).map(|_| rng.random_range(0..4)).collect();
        let mut want = 0.0;
        for (i, &c) in targets.iter().enumerate() {
            want -= lp.data()[i * 4 + c];
        }
        want /= 6.0;
        assert!((nll_loss(&lp, &targets).unwrap() - want).abs() < 1e-14);
    }
}
