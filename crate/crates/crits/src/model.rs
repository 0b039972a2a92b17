//! The classifier architecture and its forward pass.
//!
//! One convolution layer (`K` kernels of shape `h x m`, stride 1, no padding,
//! no activation), global max-pooling per filter, `L` ReLU hidden layers and
//! a single sigmoid output neuron. The convolution output is deliberately
//! linear: projecting raw kernel weights back into the input is exact only if
//! nothing nonlinear sits between the convolution and the pooling layer.
//!
//! [`forward`] records everything the surrogate extraction needs: the feature
//! map, the pooled vector, each filter's winning time index (ties broken by
//! the smallest index) and the 0/1 activation pattern of every hidden layer
//! (strict `> 0`, so a unit sitting exactly on its kink counts as inactive).

use std::path::Path;

use ndarray::{Array1, Array2};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::NormStats;

pub const MODEL_FILE_VERSION: u64 = 1;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("bad config: {0}")]
    BadConfig(String),
    #[error("input shape {found:?} does not match model input ({expected:?})")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("input contains non-finite values")]
    NonFiniteInput,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("model file version {found} is not supported (expected {MODEL_FILE_VERSION})")]
    VersionMismatch { found: u64 },
    #[error("corrupt model: {0}")]
    Corrupt(String),
}

/// Architecture hyperparameters plus the initialization seed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelConfig {
    /// Kernel length h (time steps); kernels always span all m channels.
    pub kernel_len: usize,
    /// Number of convolution kernels K.
    pub kernel_count: usize,
    /// Hidden layer widths of the rectifier network, input side first.
    pub hidden_sizes: Vec<usize>,
    /// Input channels m.
    pub channels: usize,
    /// Input length T.
    pub timesteps: usize,
    /// Parameter initialization seed.
    pub seed: u64,
}

impl ModelConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.channels < 1 || self.timesteps < 2 {
            return Err(ModelError::BadConfig(format!(
                "input must be at least 1 x 2, got {} x {}",
                self.channels, self.timesteps
            )));
        }
        if self.kernel_len < 1 || self.kernel_len > self.timesteps {
            return Err(ModelError::BadConfig(format!(
                "kernel length {} outside [1, T={}]",
                self.kernel_len, self.timesteps
            )));
        }
        if self.kernel_count < 1 {
            return Err(ModelError::BadConfig("kernel count must be >= 1".into()));
        }
        if self.hidden_sizes.is_empty() {
            return Err(ModelError::BadConfig(
                "at least one hidden layer is required".into(),
            ));
        }
        if self.hidden_sizes.contains(&0) {
            return Err(ModelError::BadConfig("hidden sizes must be >= 1".into()));
        }
        Ok(())
    }

    /// Feature map rows: T - h + 1.
    pub fn conv_positions(&self) -> usize {
        self.timesteps - self.kernel_len + 1
    }
}

/// One fully-connected layer, weights stored `(out, in)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseLayer {
    pub weights: Array2<f64>,
    pub bias: Array1<f64>,
}

/// Every learnable parameter of the model. [`crate::train::Gradients`] reuses
/// this layout so gradients mirror parameters tensor by tensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSet {
    /// K kernels of shape (h, m).
    pub kernels: Vec<Array2<f64>>,
    /// Per-filter bias, length K.
    pub conv_bias: Array1<f64>,
    /// Rectifier network layers, input side first.
    pub layers: Vec<DenseLayer>,
    /// Output weights over the last hidden layer.
    pub out_weights: Array1<f64>,
    pub out_bias: f64,
}

impl ParamSet {
    pub fn zeros(config: &ModelConfig) -> Self {
        let mut layers = Vec::with_capacity(config.hidden_sizes.len());
        let mut fan_in = config.kernel_count;
        for &size in &config.hidden_sizes {
            layers.push(DenseLayer {
                weights: Array2::zeros((size, fan_in)),
                bias: Array1::zeros(size),
            });
            fan_in = size;
        }
        Self {
            kernels: vec![
                Array2::zeros((config.kernel_len, config.channels));
                config.kernel_count
            ],
            conv_bias: Array1::zeros(config.kernel_count),
            layers,
            out_weights: Array1::zeros(fan_in),
            out_bias: 0.0,
        }
    }

    pub fn param_count(&self) -> usize {
        self.kernels.iter().map(|k| k.len()).sum::<usize>()
            + self.conv_bias.len()
            + self
                .layers
                .iter()
                .map(|l| l.weights.len() + l.bias.len())
                .sum::<usize>()
            + self.out_weights.len()
            + 1
    }

    /// Flattens every tensor into one vector. The coordinate order is fixed:
    /// kernels (row-major, filter by filter), conv biases, each layer's
    /// weights (row-major) then bias, output weights, output bias.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut flat = Vec::with_capacity(self.param_count());
        for k in &self.kernels {
            flat.extend(k.iter());
        }
        flat.extend(self.conv_bias.iter());
        for layer in &self.layers {
            flat.extend(layer.weights.iter());
            flat.extend(layer.bias.iter());
        }
        flat.extend(self.out_weights.iter());
        flat.push(self.out_bias);
        flat
    }

    /// Inverse of [`ParamSet::to_flat`]. Panics if the length disagrees.
    pub fn assign_from_flat(&mut self, flat: &[f64]) {
        assert_eq!(flat.len(), self.param_count(), "flat parameter length");
        let mut it = flat.iter().copied();
        for k in &mut self.kernels {
            for v in k.iter_mut() {
                *v = it.next().unwrap();
            }
        }
        for v in self.conv_bias.iter_mut() {
            *v = it.next().unwrap();
        }
        for layer in &mut self.layers {
            for v in layer.weights.iter_mut() {
                *v = it.next().unwrap();
            }
            for v in layer.bias.iter_mut() {
                *v = it.next().unwrap();
            }
        }
        for v in self.out_weights.iter_mut() {
            *v = it.next().unwrap();
        }
        self.out_bias = it.next().unwrap();
    }

    pub fn all_finite(&self) -> bool {
        self.kernels.iter().all(|k| k.iter().all(|v| v.is_finite()))
            && self.conv_bias.iter().all(|v| v.is_finite())
            && self.layers.iter().all(|l| {
                l.weights.iter().all(|v| v.is_finite()) && l.bias.iter().all(|v| v.is_finite())
            })
            && self.out_weights.iter().all(|v| v.is_finite())
            && self.out_bias.is_finite()
    }

    fn check_chain(&self, config: &ModelConfig) -> Result<(), ModelError> {
        let corrupt = |msg: String| Err(ModelError::Corrupt(msg));
        if self.kernels.len() != config.kernel_count {
            return corrupt(format!(
                "{} kernels, config says {}",
                self.kernels.len(),
                config.kernel_count
            ));
        }
        let kshape = (config.kernel_len, config.channels);
        for (i, k) in self.kernels.iter().enumerate() {
            if k.dim() != kshape {
                return corrupt(format!("kernel {i} shape {:?} != {kshape:?}", k.dim()));
            }
        }
        if self.conv_bias.len() != config.kernel_count {
            return corrupt("conv bias length != kernel count".into());
        }
        if self.layers.len() != config.hidden_sizes.len() {
            return corrupt("hidden layer count mismatch".into());
        }
        let mut fan_in = config.kernel_count;
        for (l, (layer, &size)) in self.layers.iter().zip(&config.hidden_sizes).enumerate() {
            if layer.weights.dim() != (size, fan_in) {
                return corrupt(format!(
                    "layer {l} weights {:?} != ({size}, {fan_in})",
                    layer.weights.dim()
                ));
            }
            if layer.bias.len() != size {
                return corrupt(format!("layer {l} bias length != {size}"));
            }
            fan_in = size;
        }
        if self.out_weights.len() != fan_in {
            return corrupt(format!(
                "output weights length {} != last hidden size {fan_in}",
                self.out_weights.len()
            ));
        }
        Ok(())
    }
}

/// A trained (or initialized) classifier. Immutable in use; `forward` is a
/// pure function, so sharing a model across threads is safe.
#[derive(Debug, Clone, PartialEq)]
pub struct CritsModel {
    pub config: ModelConfig,
    pub params: ParamSet,
    /// Normalization fitted on this model's training split, if any. Inputs
    /// to `forward` are expected to be normalized already.
    pub norm: Option<NormStats>,
}

impl CritsModel {
    pub fn new(
        config: ModelConfig,
        params: ParamSet,
        norm: Option<NormStats>,
    ) -> Result<Self, ModelError> {
        config.validate()?;
        params.check_chain(&config)?;
        if !params.all_finite() {
            return Err(ModelError::Corrupt("non-finite parameter".into()));
        }
        if let Some(stats) = &norm {
            if stats.channels() != config.channels {
                return Err(ModelError::Corrupt(format!(
                    "norm stats cover {} channels, model expects {}",
                    stats.channels(),
                    config.channels
                )));
            }
        }
        Ok(Self {
            config,
            params,
            norm,
        })
    }

    pub fn input_shape(&self) -> (usize, usize) {
        (self.config.channels, self.config.timesteps)
    }
}

/// Everything the forward pass touched, recorded for exact unwrapping.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardTrace {
    /// Feature map, shape (T - h + 1, K).
    pub feature_map: Array2<f64>,
    /// Global max per filter, length K.
    pub pooled: Array1<f64>,
    /// Winning time index per filter (smallest maximizer).
    pub winners: Vec<usize>,
    /// Activation pattern per hidden layer: true iff pre-activation > 0.
    pub patterns: Vec<Vec<bool>>,
    /// Post-ReLU activations per hidden layer (kept for backpropagation).
    pub hidden: Vec<Array1<f64>>,
    pub logit: f64,
    pub probability: f64,
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    let p = if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    };
    // f64 sigmoid saturates to exactly 0/1 beyond |z| ~ 37; keep p in (0, 1).
    p.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0)
}

/// He-style scaled-uniform initialization (bound sqrt(2 / fan_in)), biases
/// zero. Deterministic for a fixed `config.seed`.
pub fn init_model(config: &ModelConfig) -> Result<CritsModel, ModelError> {
    config.validate()?;
    let mut rng = StdRng::seed_from_u64(config.seed);
    let kernel_fan_in = config.kernel_len * config.channels;
    let kernel_bound = (2.0 / kernel_fan_in as f64).sqrt();
    let kernels = (0..config.kernel_count)
        .map(|_| {
            Array2::from_shape_fn((config.kernel_len, config.channels), |_| {
                rng.random_range(-kernel_bound..kernel_bound)
            })
        })
        .collect();

    let mut layers = Vec::with_capacity(config.hidden_sizes.len());
    let mut fan_in = config.kernel_count;
    for &size in &config.hidden_sizes {
        let bound = (2.0 / fan_in as f64).sqrt();
        layers.push(DenseLayer {
            weights: Array2::from_shape_fn((size, fan_in), |_| {
                rng.random_range(-bound..bound)
            }),
            bias: Array1::zeros(size),
        });
        fan_in = size;
    }
    let out_bound = (2.0 / fan_in as f64).sqrt();
    let out_weights = Array1::from_shape_fn(fan_in, |_| rng.random_range(-out_bound..out_bound));

    let params = ParamSet {
        kernels,
        conv_bias: Array1::zeros(config.kernel_count),
        layers,
        out_weights,
        out_bias: 0.0,
    };
    CritsModel::new(config.clone(), params, None)
}

/// Runs the model on a normalized `(m, T)` instance and records the trace.
pub fn forward(model: &CritsModel, x: &Array2<f64>) -> Result<ForwardTrace, ModelError> {
    let expected = model.input_shape();
    if x.dim() != expected {
        return Err(ModelError::ShapeMismatch {
            expected,
            found: x.dim(),
        });
    }
    if !x.iter().all(|v| v.is_finite()) {
        return Err(ModelError::NonFiniteInput);
    }
    let cfg = &model.config;
    let (m, h) = (cfg.channels, cfg.kernel_len);
    let positions = cfg.conv_positions();
    let k_count = cfg.kernel_count;

    let mut feature_map = Array2::zeros((positions, k_count));
    for (k, kernel) in model.params.kernels.iter().enumerate() {
        let beta = model.params.conv_bias[k];
        for t in 0..positions {
            let mut acc = 0.0;
            for tau in 0..h {
                for c in 0..m {
                    acc += kernel[[tau, c]] * x[[c, t + tau]];
                }
            }
            feature_map[[t, k]] = acc + beta;
        }
    }

    let mut pooled = Array1::zeros(k_count);
    let mut winners = vec![0usize; k_count];
    for k in 0..k_count {
        let mut best = feature_map[[0, k]];
        let mut best_t = 0;
        for t in 1..positions {
            if feature_map[[t, k]] > best {
                best = feature_map[[t, k]];
                best_t = t;
            }
        }
        pooled[k] = best;
        winners[k] = best_t;
    }

    let mut patterns = Vec::with_capacity(model.params.layers.len());
    let mut hidden = Vec::with_capacity(model.params.layers.len());
    let mut activation = pooled.clone();
    for layer in &model.params.layers {
        let pre = layer.weights.dot(&activation) + &layer.bias;
        let pattern: Vec<bool> = pre.iter().map(|&v| v > 0.0).collect();
        let act = Array1::from_iter(
            pre.iter()
                .zip(&pattern)
                .map(|(&v, &on)| if on { v } else { 0.0 }),
        );
        patterns.push(pattern);
        hidden.push(act.clone());
        activation = act;
    }

    let logit = model.params.out_weights.dot(&activation) + model.params.out_bias;
    Ok(ForwardTrace {
        feature_map,
        pooled,
        winners,
        patterns,
        hidden,
        logit,
        probability: sigmoid(logit),
    })
}

/// Probability of class 1.
pub fn predict_proba(model: &CritsModel, x: &Array2<f64>) -> Result<f64, ModelError> {
    Ok(forward(model, x)?.probability)
}

/// Class decision: 1 iff the probability is at least 0.5.
pub fn predict_label(model: &CritsModel, x: &Array2<f64>) -> Result<u8, ModelError> {
    Ok(if predict_proba(model, x)? >= 0.5 { 1 } else { 0 })
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    version: u64,
    config: ModelConfig,
    norm: Option<NormStats>,
    params: ParamSet,
}

/// Writes a versioned text serialization. Parameter values use decimal
/// encodings that round-trip binary64 exactly, so `load_model(save_model(m))`
/// reproduces `m` bit for bit.
pub fn save_model(model: &CritsModel, path: impl AsRef<Path>) -> Result<(), ModelError> {
    if !model.params.all_finite() {
        return Err(ModelError::Corrupt(
            "refusing to save non-finite parameters".into(),
        ));
    }
    let file = ModelFile {
        version: MODEL_FILE_VERSION,
        config: model.config.clone(),
        norm: model.norm.clone(),
        params: model.params.clone(),
    };
    let mut text = serde_json::to_string_pretty(&file)
        .map_err(|e| ModelError::Corrupt(format!("serialize: {e}")))?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<CritsModel, ModelError> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| ModelError::Corrupt(format!("not a model file: {e}")))?;
    let version = value
        .get("version")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| ModelError::Corrupt("missing version field".into()))?;
    if version != MODEL_FILE_VERSION {
        return Err(ModelError::VersionMismatch { found: version });
    }
    let file: ModelFile = serde_json::from_value(value)
        .map_err(|e| ModelError::Corrupt(format!("malformed model file: {e}")))?;
    CritsModel::new(file.config, file.params, file.norm)
}


#[cfg(test)]
mod tests {
    use super::test_support::*;
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn init_is_deterministic() {
        let config = ModelConfig {
            kernel_len: 4,
            kernel_count: 6,
            hidden_sizes: vec![7, 5],
            channels: 2,
            timesteps: 20,
            seed: 99,
        };
        let a = init_model(&config).unwrap();
        let b = init_model(&config).unwrap();
        assert_eq!(a.params, b.params);
        let c = init_model(&ModelConfig { seed: 100, ..config }).unwrap();
        assert_ne!(a.params, c.params);
    }

    #[test]
    fn accepts_published_gunpoint_config() {
        let config = ModelConfig {
            kernel_len: 16,
            kernel_count: 144,
            hidden_sizes: vec![160, 120, 40, 30, 190],
            channels: 1,
            timesteps: 150,
            seed: 0,
        };
        let model = init_model(&config).unwrap();
        let x = Array2::zeros((1, 150));
        let trace = forward(&model, &x).unwrap();
        assert_eq!(trace.feature_map.dim(), (135, 144));
    }

    #[test]
    fn kernel_longer_than_input_rejected() {
        let config = ModelConfig {
            kernel_len: 11,
            kernel_count: 1,
            hidden_sizes: vec![4],
            channels: 1,
            timesteps: 10,
            seed: 0,
        };
        assert!(matches!(init_model(&config), Err(ModelError::BadConfig(_))));
    }

    #[test]
    fn zero_model_forward() {
        let config = ModelConfig {
            kernel_len: 3,
            kernel_count: 4,
            hidden_sizes: vec![5],
            channels: 2,
            timesteps: 10,
            seed: 0,
        };
        let mut params = ParamSet::zeros(&config);
        params.out_bias = -0.25;
        let model = CritsModel::new(config, params, None).unwrap();
        let x = Array2::from_elem((2, 10), 1.5);
        let trace = forward(&model, &x).unwrap();
        assert!(trace.feature_map.iter().all(|&v| v == 0.0));
        assert!(trace.pooled.iter().all(|&v| v == 0.0));
        assert_eq!(trace.logit, -0.25);
        assert_abs_diff_eq!(trace.probability, sigmoid(-0.25), epsilon = 0.0);
    }

    #[test]
    fn hand_network_trace() {
        let model = hand_model();
        let x = hand_input();
        let trace = forward(&model, &x).unwrap();
        assert_eq!(
            trace.feature_map.column(0).to_vec(),
            vec![-1.0, -2.0, 1.0]
        );
        assert_eq!(trace.pooled[0], 1.0);
        assert_eq!(trace.winners, vec![2]);
        assert_eq!(trace.patterns, vec![vec![true]]);
        assert_eq!(trace.logit, 2.5);
        assert_abs_diff_eq!(trace.probability, 1.0 / (1.0 + (-2.5f64).exp()), epsilon = 0.0);
    }

    #[test]
    fn predict_label_thresholds() {
        let config = ModelConfig {
            kernel_len: 2,
            kernel_count: 1,
            hidden_sizes: vec![1],
            channels: 1,
            timesteps: 4,
            seed: 0,
        };
        let zeros = CritsModel::new(config.clone(), ParamSet::zeros(&config), None).unwrap();
        let x = hand_input();
        // z = 0 => p = 0.5 => label 1 by the boundary convention.
        assert_eq!(predict_proba(&zeros, &x).unwrap(), 0.5);
        assert_eq!(predict_label(&zeros, &x).unwrap(), 1);

        let mut low = ParamSet::zeros(&config);
        low.out_bias = -10.0;
        let low = CritsModel::new(config, low, None).unwrap();
        let p = predict_proba(&low, &x).unwrap();
        assert_abs_diff_eq!(p, 4.5398e-5, epsilon = 1e-8);
        assert_eq!(predict_label(&low, &x).unwrap(), 0);
    }

    #[test]
    fn forward_rejects_bad_inputs() {
        let model = hand_model();
        let wrong = Array2::zeros((2, 4));
        assert!(matches!(
            forward(&model, &wrong),
            Err(ModelError::ShapeMismatch { .. })
        ));
        let mut nan = hand_input();
        nan[[0, 1]] = f64::NAN;
        assert!(matches!(
            forward(&model, &nan),
            Err(ModelError::NonFiniteInput)
        ));
    }

    #[test]
    fn pooling_invariant_random_models() {
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..25 {
            let config = random_config(&mut rng);
            let model = init_model(&config).unwrap();
            let x = random_input(&config, &mut rng);
            let trace = forward(&model, &x).unwrap();
            for k in 0..config.kernel_count {
                let column = trace.feature_map.column(k);
                let max = column.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                assert_eq!(trace.pooled[k], max);
                assert_eq!(trace.feature_map[[trace.winners[k], k]], max);
                // smallest maximizing index
                for t in 0..trace.winners[k] {
                    assert!(trace.feature_map[[t, k]] < max);
                }
            }
        }
    }

    #[test]
    fn piecewise_linearity_on_shared_trace() {
        let mut rng = StdRng::seed_from_u64(7);
        let mut checked = 0;
        for _ in 0..60 {
            let config = random_config(&mut rng);
            let model = init_model(&config).unwrap();
            let x1 = random_input(&config, &mut rng);
            let mut x2 = x1.clone();
            for v in x2.iter_mut() {
                *v += rng.random_range(-1e-4..1e-4);
            }
            let mid = (&x1 + &x2) * 0.5;
            let t1 = forward(&model, &x1).unwrap();
            let t2 = forward(&model, &x2).unwrap();
            let tm = forward(&model, &mid).unwrap();
            let same = t1.winners == t2.winners
                && t1.winners == tm.winners
                && t1.patterns == t2.patterns
                && t1.patterns == tm.patterns;
            if same {
                assert_abs_diff_eq!(
                    tm.logit,
                    0.5 * (t1.logit + t2.logit),
                    epsilon = 1e-9 * t1.logit.abs().max(1.0)
                );
                checked += 1;
            }
        }
        assert!(checked > 40, "only {checked} affine checks ran");
    }

    #[test]
    fn save_load_round_trip() {
        let mut rng = StdRng::seed_from_u64(3);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        for _ in 0..5 {
            let config = random_config(&mut rng);
            let mut model = init_model(&config).unwrap();
            model.norm = Some(NormStats {
                mean: vec![0.5; config.channels],
                std: vec![2.0; config.channels],
            });
            save_model(&model, &path).unwrap();
            let loaded = load_model(&path).unwrap();
            assert_eq!(loaded, model);
            for _ in 0..20 {
                let x = random_input(&config, &mut rng);
                assert_eq!(forward(&model, &x).unwrap(), forward(&loaded, &x).unwrap());
            }
        }
    }

    #[test]
    fn load_rejects_truncated_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        let model = hand_model();
        save_model(&model, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        std::fs::write(&path, &text[..text.len() / 2]).unwrap();
        assert!(matches!(load_model(&path), Err(ModelError::Corrupt(_))));
    }

    #[test]
    fn load_rejects_unknown_version() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        let model = hand_model();
        save_model(&model, &path).unwrap();
        let text = std::fs::read_to_string(&path)
            .unwrap()
            .replace("\"version\": 1", "\"version\": 99");
        std::fs::write(&path, text).unwrap();
        assert!(matches!(
            load_model(&path),
            Err(ModelError::VersionMismatch { found: 99 })
        ));
    }

    #[test]
    fn load_rejects_broken_dimension_chain() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        let model = hand_model();
        save_model(&model, &path).unwrap();
        // Claim two kernels in the config while the file carries one.
        let text = std::fs::read_to_string(&path)
            .unwrap()
            .replace("\"kernel_count\": 1", "\"kernel_count\": 2");
        std::fs::write(&path, text).unwrap();
        assert!(matches!(load_model(&path), Err(ModelError::Corrupt(_))));
    }

    #[test]
    fn flat_round_trip() {
        let mut rng = StdRng::seed_from_u64(11);
        let config = random_config(&mut rng);
        let model = init_model(&config).unwrap();
        let flat = model.params.to_flat();
        assert_eq!(flat.len(), model.params.param_count());
        let mut copy = ParamSet::zeros(&config);
        copy.assign_from_flat(&flat);
        assert_eq!(copy, model.params);
    }
}
