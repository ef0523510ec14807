//! Experiment configuration: a TOML file with the sections `[dataset]`,
//! `[network]`, `[training]`, `[evolution]`, `[sweep]`, `[bench]` and `[run]`.
//! Every key is optional; unset keys take the defaults below. See
//! `docs/config.md` for the key table.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};

use subsevo_core::evolution::{CrossoverPoint, EvolutionConfig, SeedMode, Selection};
use subsevo_core::nn::{Activation, LayerSpec, NetworkSpec, NnError, TrainConfig};
use thiserror::Error;
use toml::de::DeTable;
use toml::{Table, Value};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config syntax error: {0}")]
    Syntax(String),
    #[error("{}: {message}", describe(key, *line))]
    Key {
        key: String,
        line: Option<usize>,
        message: String,
    },
    #[error("invalid config: {0}")]
    Invalid(String),
}

fn describe(key: &str, line: Option<usize>) -> String {
    match line {
        Some(l) => format!("key `{key}` (line {l})"),
        None => format!("key `{key}`"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataSource {
    Synthetic,
    Mnist,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetConfig {
    pub source: DataSource,
    /// MNIST directory; `SUBSEVO_DATA_DIR` is used when unset.
    pub dir: Option<PathBuf>,
    pub num_classes: usize,
    pub per_class: usize,
    pub test_per_class: usize,
    pub image_side: usize,
    pub noise: f64,
    pub seed: u64,
    /// Keep only the first `n` training samples.
    pub train_limit: Option<usize>,
    /// Keep only the first `n` test samples.
    pub test_limit: Option<usize>,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        Self {
            source: DataSource::Synthetic,
            dir: None,
            num_classes: 10,
            per_class: 200,
            test_per_class: 50,
            image_side: 28,
            noise: 0.3,
            seed: 0,
            train_limit: None,
            test_limit: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetworkKind {
    /// The two-convolution MNIST network.
    Mnist,
    Linear,
    Mlp,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    pub kind: NetworkKind,
    /// Hidden widths of the `mlp` kind.
    pub hidden: Vec<usize>,
    /// Activation of the hidden fully connected layers.
    pub hidden_activation: Activation,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            kind: NetworkKind::Mnist,
            hidden: vec![200],
            hidden_activation: Activation::Relu,
        }
    }
}

impl NetworkConfig {
    pub fn build(&self, input_shape: (usize, usize, usize), classes: usize) -> Result<NetworkSpec, NnError> {
        match self.kind {
            NetworkKind::Mnist => {
                let spec = NetworkSpec::mnist_default_with(self.hidden_activation);
                if input_shape != spec.input_shape || classes > spec.num_outputs() {
                    return Err(NnError::InvalidConfig(format!(
                        "the mnist network needs 1x28x28 inputs and at most 10 classes, got {input_shape:?} and {classes}"
                    )));
                }
                Ok(spec)
            }
            NetworkKind::Linear => NetworkSpec::linear(input_shape, classes),
            NetworkKind::Mlp => {
                let (c, h, w) = input_shape;
                let mut width = c * h * w;
                let mut layers = Vec::new();
                for &units in &self.hidden {
                    layers.push(LayerSpec::FullyConnected {
                        in_features: width,
                        out_features: units,
                        activation: self.hidden_activation,
                    });
                    width = units;
                }
                layers.push(LayerSpec::FullyConnected {
                    in_features: width,
                    out_features: classes,
                    activation: Activation::Identity,
                });
                layers.push(LayerSpec::LogSoftMax);
                NetworkSpec::new(input_shape, layers)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub sizes: Vec<usize>,
    /// Accuracy of a model trained on the full training set. Computed once
    /// per sweep when unset.
    pub reference_accuracy: Option<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            sizes: vec![100, 250, 500, 1000, 2000, 4000],
            reference_accuracy: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub repetitions: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            sizes: vec![100, 200, 400, 800, 1600],
            repetitions: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub dataset: DatasetConfig,
    pub network: NetworkConfig,
    pub training: TrainConfig,
    pub evolution: EvolutionConfig,
    pub sweep: SweepConfig,
    pub bench: BenchConfig,
    /// Seed of every experiment; copied into the training and evolution
    /// configs by [`ExperimentConfig::set_seed`].
    pub seed: u64,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            dataset: DatasetConfig::default(),
            network: NetworkConfig::default(),
            training: TrainConfig::default(),
            evolution: EvolutionConfig::default(),
            sweep: SweepConfig::default(),
            bench: BenchConfig::default(),
            seed: 0,
            out_dir: PathBuf::from("out"),
        }
    }
}

const MAX_SEED: u64 = i64::MAX as u64;

impl ExperimentConfig {
    pub fn set_seed(&mut self, seed: u64) {
        self.seed = seed;
        self.training.rng_seed = seed;
        self.evolution.rng_seed = seed;
    }

    /// Cross-field checks, also run after command-line overrides.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let key = |k: &str, m: String| ConfigError::Key {
            key: k.to_string(),
            line: None,
            message: m,
        };
        self.evolution
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.training
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        for (name, sizes) in [("sweep.sizes", &self.sweep.sizes), ("bench.sizes", &self.bench.sizes)] {
            check_sizes(sizes).map_err(|m| key(name, m))?;
        }
        if self.bench.repetitions == 0 {
            return Err(key("bench.repetitions", "must be at least 1".into()));
        }
        if let Some(r) = self.sweep.reference_accuracy {
            if !(0.0..=1.0).contains(&r) {
                return Err(key("sweep.reference_accuracy", format!("{r} outside [0, 1]")));
            }
        }
        if self.seed > MAX_SEED {
            return Err(key("run.seed", format!("must not exceed {MAX_SEED}")));
        }
        Ok(())
    }

    pub fn to_toml_string(&self) -> String {
        self.to_table().to_string()
    }

    fn to_table(&self) -> Table {
        fn int(v: usize) -> Value {
            Value::Integer(v as i64)
        }
        fn ints(v: &[usize]) -> Value {
            Value::Array(v.iter().map(|&x| int(x)).collect())
        }
        let mut root = Table::new();
        let d = &self.dataset;
        let mut t = Table::new();
        t.insert(
            "source".into(),
            Value::String(
                match d.source {
                    DataSource::Synthetic => "synthetic",
                    DataSource::Mnist => "mnist",
                }
                .into(),
            ),
        );
        if let Some(dir) = &d.dir {
            t.insert("dir".into(), Value::String(dir.display().to_string()));
        }
        t.insert("num_classes".into(), int(d.num_classes));
        t.insert("per_class".into(), int(d.per_class));
        t.insert("test_per_class".into(), int(d.test_per_class));
        t.insert("image_side".into(), int(d.image_side));
        t.insert("noise".into(), Value::Float(d.noise));
        t.insert("seed".into(), Value::Integer(d.seed as i64));
        if let Some(n) = d.train_limit {
            t.insert("train_limit".into(), int(n));
        }
        if let Some(n) = d.test_limit {
            t.insert("test_limit".into(), int(n));
        }
        root.insert("dataset".into(), Value::Table(t));

        let n = &self.network;
        let mut t = Table::new();
        t.insert(
            "kind".into(),
            Value::String(
                match n.kind {
                    NetworkKind::Mnist => "mnist",
                    NetworkKind::Linear => "linear",
                    NetworkKind::Mlp => "mlp",
                }
                .into(),
            ),
        );
        t.insert("hidden".into(), ints(&n.hidden));
        t.insert(
            "hidden_activation".into(),
            Value::String(activation_name(n.hidden_activation).into()),
        );
        root.insert("network".into(), Value::Table(t));

        let tr = &self.training;
        let mut t = Table::new();
        t.insert("learning_rate".into(), Value::Float(tr.learning_rate));
        t.insert("learning_rate_decay".into(), Value::Float(tr.learning_rate_decay));
        t.insert("batch_size".into(), int(tr.batch_size));
        t.insert("epochs".into(), int(tr.epochs));
        t.insert("l1_coeff".into(), Value::Float(tr.l1_coeff));
        t.insert("l2_coeff".into(), Value::Float(tr.l2_coeff));
        t.insert("momentum".into(), Value::Float(tr.momentum));
        root.insert("training".into(), Value::Table(t));

        let e = &self.evolution;
        let mut t = Table::new();
        t.insert("population_size".into(), int(e.population_size));
        t.insert("iterations".into(), int(e.iterations));
        t.insert("crossover_probability".into(), Value::Float(e.crossover_probability));
        t.insert("mutation_probability".into(), Value::Float(e.mutation_probability));
        t.insert(
            "crossover_point".into(),
            match e.crossover_point {
                CrossoverPoint::Random => Value::String("random".into()),
                CrossoverPoint::Fixed(k) => int(k),
            },
        );
        t.insert("selection".into(), Value::String(selection_name(e.selection).into()));
        t.insert("predictor_size".into(), int(e.predictor_size));
        t.insert(
            "seed_mode".into(),
            Value::String(
                match e.evaluation_seed_mode {
                    SeedMode::PerGenotype => "per_genotype",
                    SeedMode::PerGeneration => "per_generation",
                }
                .into(),
            ),
        );
        t.insert("record_eval_time".into(), Value::Boolean(e.record_eval_time));
        root.insert("evolution".into(), Value::Table(t));

        let mut t = Table::new();
        t.insert("sizes".into(), ints(&self.sweep.sizes));
        if let Some(r) = self.sweep.reference_accuracy {
            t.insert("reference_accuracy".into(), Value::Float(r));
        }
        root.insert("sweep".into(), Value::Table(t));

        let mut t = Table::new();
        t.insert("sizes".into(), ints(&self.bench.sizes));
        t.insert("repetitions".into(), int(self.bench.repetitions));
        root.insert("bench".into(), Value::Table(t));

        let mut t = Table::new();
        t.insert("seed".into(), Value::Integer(self.seed as i64));
        t.insert("out_dir".into(), Value::String(self.out_dir.display().to_string()));
        root.insert("run".into(), Value::Table(t));
        root
    }
}

pub fn activation_name(a: Activation) -> &'static str {
    match a {
        Activation::Identity => "identity",
        Activation::Relu => "relu",
    }
}

pub fn selection_name(s: Selection) -> &'static str {
    match s {
        Selection::Elitist => "elitist",
        Selection::DeterministicCrowding => "dc",
    }
}

pub fn parse_selection(s: &str) -> Option<Selection> {
    match s {
        "elitist" => Some(Selection::Elitist),
        "dc" | "deterministic_crowding" => Some(Selection::DeterministicCrowding),
        _ => None,
    }
}

pub fn check_sizes(sizes: &[usize]) -> Result<(), String> {
    if sizes.is_empty() {
        return Err("needs at least one size".into());
    }
    if sizes.contains(&0) {
        return Err("sizes must be positive".into());
    }
    if let Some(w) = sizes.windows(2).find(|w| w[1] <= w[0]) {
        return Err(format!("sizes must be strictly increasing ({} then {})", w[0], w[1]));
    }
    Ok(())
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

/// Line numbers of every `section.key` in the document.
fn key_lines(text: &str) -> Result<HashMap<String, usize>, ConfigError> {
    let doc = DeTable::parse(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
    let line_of = |offset: usize| text[..offset.min(text.len())].matches('\n').count() + 1;
    let mut lines = HashMap::new();
    for (k, v) in doc.get_ref() {
        let name = k.get_ref().to_string();
        lines.insert(name.clone(), line_of(k.span().start));
        if let Some(inner) = v.get_ref().as_table() {
            for (ik, _) in inner {
                lines.insert(format!("{name}.{}", ik.get_ref()), line_of(ik.span().start));
            }
        }
    }
    Ok(lines)
}

struct Reader<'a> {
    lines: &'a HashMap<String, usize>,
    section: &'static str,
}

impl Reader<'_> {
    fn err(&self, key: &str, message: impl Into<String>) -> ConfigError {
        let full = format!("{}.{key}", self.section);
        ConfigError::Key {
            line: self.lines.get(&full).copied(),
            key: full,
            message: message.into(),
        }
    }

    fn uint(&self, key: &str, v: &Value) -> Result<usize, ConfigError> {
        match v {
            Value::Integer(i) if *i >= 0 => Ok(*i as usize),
            Value::Integer(i) => Err(self.err(key, format!("must be non-negative, got {i}"))),
            other => Err(self.err(key, format!("expected an integer, got {}", other.type_str()))),
        }
    }

    fn positive(&self, key: &str, v: &Value) -> Result<usize, ConfigError> {
        match self.uint(key, v)? {
            0 => Err(self.err(key, "must be at least 1")),
            n => Ok(n),
        }
    }

    fn float(&self, key: &str, v: &Value) -> Result<f64, ConfigError> {
        let x = match v {
            Value::Float(f) => *f,
            Value::Integer(i) => *i as f64,
            other => return Err(self.err(key, format!("expected a number, got {}", other.type_str()))),
        };
        if !x.is_finite() {
            return Err(self.err(key, "must be finite"));
        }
        Ok(x)
    }

    fn non_negative(&self, key: &str, v: &Value) -> Result<f64, ConfigError> {
        let x = self.float(key, v)?;
        if x < 0.0 {
            return Err(self.err(key, format!("must be non-negative, got {x}")));
        }
        Ok(x)
    }

    fn probability(&self, key: &str, v: &Value) -> Result<f64, ConfigError> {
        let x = self.float(key, v)?;
        if !(0.0..=1.0).contains(&x) {
            return Err(self.err(key, format!("must lie in [0, 1], got {x}")));
        }
        Ok(x)
    }

    fn string<'v>(&self, key: &str, v: &'v Value) -> Result<&'v str, ConfigError> {
        v.as_str()
            .ok_or_else(|| self.err(key, format!("expected a string, got {}", v.type_str())))
    }

    fn boolean(&self, key: &str, v: &Value) -> Result<bool, ConfigError> {
        v.as_bool()
            .ok_or_else(|| self.err(key, format!("expected true or false, got {}", v.type_str())))
    }

    fn seed(&self, key: &str, v: &Value) -> Result<u64, ConfigError> {
        Ok(self.uint(key, v)? as u64)
    }

    fn sizes(&self, key: &str, v: &Value) -> Result<Vec<usize>, ConfigError> {
        let arr = v
            .as_array()
            .ok_or_else(|| self.err(key, format!("expected an array, got {}", v.type_str())))?;
        let sizes = arr.iter().map(|x| self.uint(key, x)).collect::<Result<Vec<_>, _>>()?;
        Ok(sizes)
    }

    fn unknown(&self, key: &str) -> ConfigError {
        self.err(key, "unknown key")
    }
}

/// Parses and validates a config document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let lines = key_lines(text)?;
    let root: Table = text
        .parse()
        .map_err(|e: toml::de::Error| ConfigError::Syntax(e.to_string()))?;
    let mut cfg = ExperimentConfig::default();
    let mut seed = None;

    for (section, value) in &root {
        let Value::Table(table) = value else {
            return Err(ConfigError::Key {
                key: section.clone(),
                line: lines.get(section).copied(),
                message: "top-level keys are not allowed; put it in a section".into(),
            });
        };
        let section: &'static str = match section.as_str() {
            "dataset" => "dataset",
            "network" => "network",
            "training" => "training",
            "evolution" => "evolution",
            "sweep" => "sweep",
            "bench" => "bench",
            "run" => "run",
            other => {
                return Err(ConfigError::Key {
                    key: other.to_string(),
                    line: lines.get(other).copied(),
                    message: "unknown section".into(),
                })
            }
        };
        let r = Reader { lines: &lines, section };
        for (key, v) in table {
            let k = key.as_str();
            match (section, k) {
                ("dataset", "source") => {
                    cfg.dataset.source = match r.string(k, v)? {
                        "synthetic" => DataSource::Synthetic,
                        "mnist" => DataSource::Mnist,
                        s => return Err(r.err(k, format!("expected \"synthetic\" or \"mnist\", got {s:?}"))),
                    }
                }
                ("dataset", "dir") => cfg.dataset.dir = Some(PathBuf::from(r.string(k, v)?)),
                ("dataset", "num_classes") => {
                    cfg.dataset.num_classes = r.uint(k, v)?;
                    if cfg.dataset.num_classes < 2 {
                        return Err(r.err(k, "must be at least 2"));
                    }
                }
                ("dataset", "per_class") => cfg.dataset.per_class = r.positive(k, v)?,
                ("dataset", "test_per_class") => cfg.dataset.test_per_class = r.positive(k, v)?,
                ("dataset", "image_side") => cfg.dataset.image_side = r.positive(k, v)?,
                ("dataset", "noise") => cfg.dataset.noise = r.non_negative(k, v)?,
                ("dataset", "seed") => cfg.dataset.seed = r.seed(k, v)?,
                ("dataset", "train_limit") => cfg.dataset.train_limit = Some(r.positive(k, v)?),
                ("dataset", "test_limit") => cfg.dataset.test_limit = Some(r.positive(k, v)?),

                ("network", "kind") => {
                    cfg.network.kind = match r.string(k, v)? {
                        "mnist" => NetworkKind::Mnist,
                        "linear" => NetworkKind::Linear,
                        "mlp" => NetworkKind::Mlp,
                        s => return Err(r.err(k, format!("expected \"mnist\", \"linear\" or \"mlp\", got {s:?}"))),
                    }
                }
                ("network", "hidden") => {
                    cfg.network.hidden = r.sizes(k, v)?;
                    if cfg.network.hidden.contains(&0) {
                        return Err(r.err(k, "hidden widths must be positive"));
                    }
                }
                ("network", "hidden_activation") => {
                    cfg.network.hidden_activation = match r.string(k, v)? {
                        "relu" => Activation::Relu,
                        "identity" => Activation::Identity,
                        s => return Err(r.err(k, format!("expected \"relu\" or \"identity\", got {s:?}"))),
                    }
                }

                ("training", "learning_rate") => {
                    cfg.training.learning_rate = r.float(k, v)?;
                    if cfg.training.learning_rate <= 0.0 {
                        return Err(r.err(k, "must be positive"));
                    }
                }
                ("training", "learning_rate_decay") => cfg.training.learning_rate_decay = r.non_negative(k, v)?,
                ("training", "batch_size") => cfg.training.batch_size = r.positive(k, v)?,
                ("training", "epochs") => cfg.training.epochs = r.uint(k, v)?,
                ("training", "l1_coeff") => cfg.training.l1_coeff = r.non_negative(k, v)?,
                ("training", "l2_coeff") => cfg.training.l2_coeff = r.non_negative(k, v)?,
                ("training", "momentum") => {
                    cfg.training.momentum = r.non_negative(k, v)?;
                    if cfg.training.momentum >= 1.0 {
                        return Err(r.err(k, "must be below 1"));
                    }
                }

                ("evolution", "population_size") => {
                    let n = r.uint(k, v)?;
                    if n < 2 || n % 2 != 0 {
                        return Err(r.err(k, format!("must be even and at least 2, got {n}")));
                    }
                    cfg.evolution.population_size = n;
                }
                ("evolution", "iterations") => cfg.evolution.iterations = r.uint(k, v)?,
                ("evolution", "crossover_probability") => cfg.evolution.crossover_probability = r.probability(k, v)?,
                ("evolution", "mutation_probability") => cfg.evolution.mutation_probability = r.probability(k, v)?,
                ("evolution", "crossover_point") => {
                    cfg.evolution.crossover_point = match v {
                        Value::String(s) if s == "random" => CrossoverPoint::Random,
                        Value::Integer(_) => CrossoverPoint::Fixed(r.uint(k, v)?),
                        _ => return Err(r.err(k, "expected \"random\" or a non-negative integer")),
                    }
                }
                ("evolution", "selection") => {
                    let s = r.string(k, v)?;
                    cfg.evolution.selection = parse_selection(s)
                        .ok_or_else(|| r.err(k, format!("expected \"elitist\" or \"dc\", got {s:?}")))?;
                }
                ("evolution", "predictor_size") => cfg.evolution.predictor_size = r.positive(k, v)?,
                ("evolution", "seed_mode") => {
                    cfg.evolution.evaluation_seed_mode = match r.string(k, v)? {
                        "per_genotype" => SeedMode::PerGenotype,
                        "per_generation" => SeedMode::PerGeneration,
                        s => {
                            return Err(r.err(k, format!("expected \"per_genotype\" or \"per_generation\", got {s:?}")))
                        }
                    }
                }
                ("evolution", "record_eval_time") => cfg.evolution.record_eval_time = r.boolean(k, v)?,

                ("sweep", "sizes") => {
                    cfg.sweep.sizes = r.sizes(k, v)?;
                    check_sizes(&cfg.sweep.sizes).map_err(|m| r.err(k, m))?;
                }
                ("sweep", "reference_accuracy") => cfg.sweep.reference_accuracy = Some(r.probability(k, v)?),

                ("bench", "sizes") => {
                    cfg.bench.sizes = r.sizes(k, v)?;
                    check_sizes(&cfg.bench.sizes).map_err(|m| r.err(k, m))?;
                }
                ("bench", "repetitions") => cfg.bench.repetitions = r.positive(k, v)?,

                ("run", "seed") => {
                    let s = r.seed(k, v)?;
                    seed = Some(s);
                }
                ("run", "out_dir") => cfg.out_dir = PathBuf::from(r.string(k, v)?),
                _ => return Err(r.unknown(k)),
            }
        }
    }
    cfg.set_seed(seed.unwrap_or(0));
    if let CrossoverPoint::Fixed(p) = cfg.evolution.crossover_point {
        if p > cfg.evolution.predictor_size {
            return Err(ConfigError::Key {
                key: "evolution.crossover_point".into(),
                line: lines.get("evolution.crossover_point").copied(),
                message: format!("{p} exceeds predictor_size {}", cfg.evolution.predictor_size),
            });
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_toml_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        assert_eq!(cfg.evolution.population_size, 128);
        assert_eq!(cfg.evolution.iterations, 100);
        assert_eq!(cfg.evolution.crossover_probability, 0.75);
        assert_eq!(cfg.evolution.mutation_probability, 0.01);
        assert_eq!(cfg.training.learning_rate, 0.1);
        assert_eq!(cfg.training.learning_rate_decay, 1e-5);
        assert_eq!(cfg.training.batch_size, 128);
        assert_eq!(cfg.training.epochs, 20);
    }

    #[test]
    fn odd_population_names_key_and_line() {
        let err = parse_config("[run]\nseed = 1\n\n[evolution]\npopulation_size = 3\n").unwrap_err();
        match &err {
            ConfigError::Key { key, line, .. } => {
                assert_eq!(key, "evolution.population_size");
                assert_eq!(*line, Some(5));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(err.to_string().contains("line 5"));
    }

    #[test]
    fn unknown_and_mistyped_keys() {
        let e = parse_config("[training]\nepochz = 3\n").unwrap_err();
        assert!(e.to_string().contains("training.epochz"), "{e}");
        let e = parse_config("[training]\nepochs = \"three\"\n").unwrap_err();
        assert!(
            e.to_string().contains("training.epochs") && e.to_string().contains("line 2"),
            "{e}"
        );
        assert!(parse_config("[colors]\nx = 1\n").is_err());
        assert!(parse_config("seed = 1\n").is_err());
        assert!(matches!(parse_config("[run\n"), Err(ConfigError::Syntax(_))));
    }

    #[test]
    fn sizes_must_increase() {
        let e = parse_config("[bench]\nsizes = [100, 100]\n").unwrap_err();
        assert!(e.to_string().contains("bench.sizes"), "{e}");
        assert!(parse_config("[sweep]\nsizes = [25, 50]\n").is_ok());
    }

    #[test]
    fn seed_reaches_every_component() {
        let cfg = parse_config("[run]\nseed = 42\n").unwrap();
        assert_eq!(cfg.evolution.rng_seed, 42);
        assert_eq!(cfg.training.rng_seed, 42);
    }

    #[test]
    fn round_trip_of_non_default_config() {
        let text = r#"
[dataset]
source = "mnist"
dir = "/data/mnist"
train_limit = 5000
noise = 0.25

[network]
kind = "mlp"
hidden = [64, 32]
hidden_activation = "identity"

[training]
learning_rate = 0.05
momentum = 0.9
epochs = 3

[evolution]
population_size = 16
crossover_point = 7
selection = "dc"
seed_mode = "per_generation"
record_eval_time = true

[sweep]
sizes = [25, 50, 100]
reference_accuracy = 0.97

[bench]
repetitions = 5

[run]
seed = 9
out_dir = "results"
"#;
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.network.hidden, vec![64, 32]);
        assert_eq!(cfg.evolution.crossover_point, CrossoverPoint::Fixed(7));
        let again = parse_config(&cfg.to_toml_string()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn network_kinds_build() {
        let net = NetworkConfig::default();
        assert!(net.build((1, 28, 28), 10).is_ok());
        assert!(net.build((1, 8, 8), 10).is_err());
        let mlp = NetworkConfig {
            kind: NetworkKind::Mlp,
            hidden: vec![5],
            hidden_activation: Activation::Relu,
        };
        assert_eq!(mlp.build((1, 4, 4), 3).unwrap().num_outputs(), 3);
    }
}
