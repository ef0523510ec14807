use proptest::prelude::*;
use subsevo_core::evolution::{CrossoverPoint, SeedMode, Selection};
use subsevo_core::nn::Activation;
use subsevo_experiment::config::{parse_config, DataSource, ExperimentConfig, NetworkKind};

fn config() -> impl Strategy<Value = ExperimentConfig> {
    (
        (
            any::<bool>(),
            2usize..12,
            1usize..300,
            1usize..9,
            0.0f64..1.0,
            0u64..1 << 40,
        ),
        (0usize..3, prop::collection::vec(1usize..500, 0..3), any::<bool>()),
        (1e-4f64..1.0, 0usize..50, 1usize..256, 0.0f64..0.1),
        (
            1usize..100,
            0usize..200,
            0.0f64..=1.0,
            1usize..300,
            any::<bool>(),
            any::<bool>(),
            any::<bool>(),
        ),
        (
            prop::collection::btree_set(1usize..5000, 1..6),
            proptest::option::of(0.0f64..=1.0),
            1usize..200,
        ),
        0u64..i64::MAX as u64,
    )
        .prop_map(|(d, n, t, e, s, seed)| {
            let mut c = ExperimentConfig::default();
            c.dataset.source = if d.0 { DataSource::Synthetic } else { DataSource::Mnist };
            c.dataset.num_classes = d.1;
            c.dataset.per_class = d.2;
            c.dataset.test_per_class = d.3;
            c.dataset.noise = d.4;
            c.dataset.seed = d.5;
            c.network.kind = [NetworkKind::Mnist, NetworkKind::Linear, NetworkKind::Mlp][n.0];
            c.network.hidden = n.1;
            c.network.hidden_activation = if n.2 { Activation::Relu } else { Activation::Identity };
            c.training.learning_rate = t.0;
            c.training.epochs = t.1;
            c.training.batch_size = t.2;
            c.training.momentum = t.3;
            c.evolution.population_size = e.0 * 2;
            c.evolution.iterations = e.1;
            c.evolution.crossover_probability = e.2;
            c.evolution.predictor_size = e.3;
            c.evolution.crossover_point = if e.4 {
                CrossoverPoint::Random
            } else {
                CrossoverPoint::Fixed(1)
            };
            c.evolution.selection = if e.5 {
                Selection::Elitist
            } else {
                Selection::DeterministicCrowding
            };
            c.evolution.evaluation_seed_mode = if e.6 {
                SeedMode::PerGenotype
            } else {
                SeedMode::PerGeneration
            };
            let sizes: Vec<usize> = s.0.into_iter().collect();
            c.sweep.sizes = sizes.clone();
            c.sweep.reference_accuracy = s.1;
            c.bench.sizes = sizes;
            c.bench.repetitions = s.2;
            c.set_seed(seed);
            c
        })
}

proptest! {
    #[test]
    fn toml_round_trip(c in config()) {
        prop_assert!(c.validate().is_ok());
        let text = c.to_toml_string();
        prop_assert_eq!(parse_config(&text).unwrap(), c);
    }
}

#[test]
fn shipped_config_parses() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/quick.toml");
    let c = subsevo_experiment::config::load_config(std::path::Path::new(path)).unwrap();
    assert_eq!(c.sweep.sizes, [25, 50, 100, 200]);
    assert_eq!(c.out_dir, std::path::PathBuf::from("out/quick"));
}
