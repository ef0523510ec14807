use subsevo_core::nn::{Activation, LayerSpec, NetworkSpec, TrainedModel};
use subsevo_core::{seeded_rng, Tensor};

use rand::Rng;

const EPS: f64 = 1e-5;
const TOL: f64 = 1e-4;

/// |a - n| / max(|a|, |n|, 1e-7); the floor keeps near-zero gradients from
/// blowing up the ratio.
fn rel_err(a: f64, n: f64) -> f64 {
    (a - n).abs() / a.abs().max(n.abs()).max(1e-7)
}

/// Central difference of the loss in one parameter (`which`: 0 weight, 1 bias).
fn central(model: &mut TrainedModel, x: &Tensor, y: &[usize], layer: usize, which: usize, k: usize) -> f64 {
    let nudge = |m: &mut TrainedModel, delta: f64| {
        let p = m.params_mut()[layer].as_mut().unwrap();
        let t = if which == 0 { &mut p.weight } else { &mut p.bias };
        t.data_mut()[k] += delta;
    };
    nudge(model, EPS);
    let up = model.loss(x, y).unwrap();
    nudge(model, -2.0 * EPS);
    let down = model.loss(x, y).unwrap();
    nudge(model, EPS);
    (up - down) / (2.0 * EPS)
}

/// Compares every analytic parameter gradient against central differences.
fn check(spec: &NetworkSpec, batch: usize, seed: u64) -> f64 {
    let mut rng = seeded_rng(seed);
    let mut model = TrainedModel::init(spec, &mut rng);
    let (c, h, w) = spec.input_shape;
    let x = Tensor::from_fn(&[batch, c, h, w], |_| rng.random_range(0.0..1.0));
    let classes = spec.num_outputs();
    let y: Vec<usize> = (0..batch).map(|i| i % classes).collect();
    let grads = model.backward(&x, &y).unwrap();

    let mut worst: f64 = 0.0;
    for layer in 0..model.params().len() {
        let Some(g) = grads.layers[layer].clone() else { continue };
        for (which, analytic) in [(0, g.weight.data().to_vec()), (1, g.bias.data().to_vec())] {
            for (k, &a) in analytic.iter().enumerate() {
                let numeric = central(&mut model, &x, &y, layer, which, k);
                worst = worst.max(rel_err(a, numeric));
            }
        }
    }
    worst
}

#[test]
fn dense_relu_stack() {
    let spec = NetworkSpec::mlp((1, 3, 3), &[5, 4], 3).unwrap();
    let e = check(&spec, 4, 1);
    assert!(e <= TOL, "max relative error {e}");
}

#[test]
fn conv_pool_dense_stack() {
    let spec = NetworkSpec::new(
        (2, 9, 9),
        vec![
            LayerSpec::Convolution {
                in_channels: 2,
                out_channels: 3,
                kernel_h: 3,
                kernel_w: 2,
                activation: Activation::Relu,
            },
            LayerSpec::MaxPool {
                window_h: 3,
                window_w: 2,
                stride_h: 2,
                stride_w: 2,
            },
            LayerSpec::Convolution {
                in_channels: 3,
                out_channels: 2,
                kernel_h: 2,
                kernel_w: 2,
                activation: Activation::Identity,
            },
            LayerSpec::FullyConnected {
                in_features: 2 * 2 * 3,
                out_features: 4,
                activation: Activation::Relu,
            },
            LayerSpec::FullyConnected {
                in_features: 4,
                out_features: 3,
                activation: Activation::Identity,
            },
            LayerSpec::LogSoftMax,
        ],
    )
    .unwrap();
    for seed in 0..3 {
        let e = check(&spec, 3, seed);
        assert!(e <= TOL, "seed {seed}: max relative error {e}");
    }
}

#[test]
fn default_mnist_network_sampled() {
    // Full default network on a batch of two, weights sampled with a stride.
    // Seed 9 puts a ReLU input within 1e-5 of zero, so central differences
    // straddle the kink there; seed 1 does not.
    let spec = NetworkSpec::mnist_default();
    let mut rng = seeded_rng(1);
    let mut model = TrainedModel::init(&spec, &mut rng);
    let x = Tensor::from_fn(&[2, 1, 28, 28], |_| rng.random_range(0.0..1.0));
    let y = vec![3, 7];
    let grads = model.backward(&x, &y).unwrap();
    let mut worst: f64 = 0.0;
    for layer in [0usize, 2, 4, 5] {
        let g = grads.layers[layer].clone().unwrap();
        let n = g.weight.len();
        let step = (n / 40).max(1);
        for k in (0..n).step_by(step) {
            let a = g.weight.data()[k];
            worst = worst.max(rel_err(a, central(&mut model, &x, &y, layer, 0, k)));
        }
    }
    assert!(worst <= TOL, "max relative error {worst}");
}
