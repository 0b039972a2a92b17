//! Training: binary cross-entropy, hand-derived backpropagation, Adam,
//! numerical gradient verification and random hyperparameter search.
//!
//! Backpropagation follows the forward trace exactly: dense layers use the
//! recorded strict activation patterns, the max-pooling layer routes each
//! filter's gradient solely to its recorded winner row, and the convolution
//! gradient accumulates at the winner window. Under the model's tie and kink
//! conventions the result is the exact gradient of `bce o forward`.

use ndarray::{Array1, Array2};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::data::TimeSeriesDataset;
use crate::model::{forward, init_model, CritsModel, ModelConfig, ModelError, ParamSet};
use crate::seed;

#[derive(Debug, Error)]
pub enum TrainError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("bad parameter: {0}")]
    BadParams(String),
}

/// Gradient tensors, mirroring [`ParamSet`] shape for shape.
pub type Gradients = ParamSet;

/// Optimizer and loop hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub batch_size: usize,
    pub epochs: usize,
    /// Shuffling / batching seed.
    pub seed: u64,
    /// Stop after this many consecutive epochs without a new best test loss.
    /// 0 disables early stopping.
    pub patience: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            batch_size: 32,
            epochs: 200,
            seed: 0,
            patience: 30,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), TrainError> {
        if !self.learning_rate.is_finite() || self.learning_rate <= 0.0 {
            return Err(TrainError::BadParams("learning rate must be > 0".into()));
        }
        for (name, b) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if !(0.0..1.0).contains(&b) {
                return Err(TrainError::BadParams(format!("{name} must be in [0, 1)")));
            }
        }
        if self.batch_size < 1 || self.epochs < 1 {
            return Err(TrainError::BadParams(
                "batch size and epochs must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// Binary cross-entropy from the pre-sigmoid logit. This is the form every
/// internal caller uses; it cannot overflow or produce NaN for finite z.
pub fn bce_loss_from_logit(z: f64, y: u8) -> f64 {
    fn softplus(t: f64) -> f64 {
        t.max(0.0) + (-t.abs()).exp().ln_1p()
    }
    if y == 1 {
        softplus(-z)
    } else {
        softplus(z)
    }
}

/// Binary cross-entropy `-[y ln p + (1-y) ln(1-p)]` for p in (0, 1),
/// evaluated through the logit for stability.
pub fn bce_loss(p: f64, y: u8) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0, "bce_loss needs p in (0, 1)");
    bce_loss_from_logit((p / (1.0 - p)).ln(), y)
}

// Shared backward core: given dL/dz, produce parameter gradients and the
// input gradient. Gradient-based explainers reuse this with dz = 1.
pub(crate) fn backprop(
    model: &CritsModel,
    trace: &crate::model::ForwardTrace,
    x: &Array2<f64>,
    dz: f64,
) -> (Gradients, Array2<f64>) {
    let cfg = &model.config;
    let mut grads = ParamSet::zeros(cfg);

    grads.out_bias = dz;
    let last_hidden = trace.hidden.last().expect("at least one hidden layer");
    grads.out_weights = last_hidden * dz;

    let mut delta: Array1<f64> = &model.params.out_weights * dz;
    for l in (0..model.params.layers.len()).rev() {
        let dpre: Array1<f64> = delta
            .iter()
            .zip(&trace.patterns[l])
            .map(|(&d, &on)| if on { d } else { 0.0 })
            .collect();
        let input: &Array1<f64> = if l == 0 {
            &trace.pooled
        } else {
            &trace.hidden[l - 1]
        };
        let layer_grads = &mut grads.layers[l];
        for i in 0..dpre.len() {
            let di = dpre[i];
            if di != 0.0 {
                for j in 0..input.len() {
                    layer_grads.weights[[i, j]] = di * input[j];
                }
            }
        }
        layer_grads.bias = dpre.clone();
        delta = dpre.dot(&model.params.layers[l].weights);
    }

    // delta is now the gradient at the pooled vector; route through max-pool.
    let (m, h) = (cfg.channels, cfg.kernel_len);
    let mut input_grad = Array2::zeros((m, cfg.timesteps));
    for k in 0..cfg.kernel_count {
        let g = delta[k];
        let start = trace.winners[k];
        grads.conv_bias[k] = g;
        for tau in 0..h {
            for c in 0..m {
                grads.kernels[k][[tau, c]] = g * x[[c, start + tau]];
                input_grad[[c, start + tau]] += g * model.params.kernels[k][[tau, c]];
            }
        }
    }
    (grads, input_grad)
}

/// Exact gradient of `bce_loss(forward(x), y)` with respect to every model
/// parameter, under the max-pool tie and ReLU kink conventions.
pub fn backward(model: &CritsModel, x: &Array2<f64>, y: u8) -> Result<Gradients, TrainError> {
    let trace = forward(model, x)?;
    let dz = trace.probability - y as f64;
    Ok(backprop(model, &trace, x, dz).0)
}

/// Gradient of the logit z with respect to the input.
pub(crate) fn logit_input_gradient(
    model: &CritsModel,
    x: &Array2<f64>,
) -> Result<Array2<f64>, ModelError> {
    let trace = forward(model, x)?;
    Ok(backprop(model, &trace, x, 1.0).1)
}

fn add_assign(acc: &mut ParamSet, other: &ParamSet) {
    for (a, b) in acc.kernels.iter_mut().zip(&other.kernels) {
        *a += b;
    }
    acc.conv_bias += &other.conv_bias;
    for (a, b) in acc.layers.iter_mut().zip(&other.layers) {
        a.weights += &b.weights;
        a.bias += &b.bias;
    }
    acc.out_weights += &other.out_weights;
    acc.out_bias += other.out_bias;
}

fn scale(acc: &mut ParamSet, s: f64) {
    for k in &mut acc.kernels {
        *k *= s;
    }
    acc.conv_bias *= s;
    for l in &mut acc.layers {
        l.weights *= s;
        l.bias *= s;
    }
    acc.out_weights *= s;
    acc.out_bias *= s;
}

/// First and second moment estimates for [`adam_step`].
#[derive(Debug, Clone)]
pub struct AdamState {
    m: Vec<f64>,
    v: Vec<f64>,
}

impl AdamState {
    pub fn new(len: usize) -> Self {
        Self {
            m: vec![0.0; len],
            v: vec![0.0; len],
        }
    }
}

/// One bias-corrected Adam update, `t` counting steps from 1.
pub fn adam_step(
    params: &mut [f64],
    grads: &[f64],
    state: &mut AdamState,
    config: &TrainConfig,
    t: u64,
) {
    assert_eq!(params.len(), grads.len());
    assert_eq!(params.len(), state.m.len());
    debug_assert!(t >= 1);
    let (b1, b2) = (config.beta1, config.beta2);
    let bc1 = 1.0 - b1.powi(t as i32);
    let bc2 = 1.0 - b2.powi(t as i32);
    for i in 0..params.len() {
        let g = grads[i];
        state.m[i] = b1 * state.m[i] + (1.0 - b1) * g;
        state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g;
        let m_hat = state.m[i] / bc1;
        let v_hat = state.v[i] / bc2;
        params[i] -= config.learning_rate * m_hat / (v_hat.sqrt() + config.epsilon);
    }
}

/// Per-epoch record of train/test loss and F1.
#[derive(Debug, Clone, PartialEq)]
pub struct EpochStats {
    pub epoch: usize,
    pub train_loss: f64,
    pub test_loss: f64,
    pub train_f1: f64,
    pub test_f1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainHistory {
    pub rows: Vec<EpochStats>,
    /// Epoch (1-based) whose snapshot the returned model carries.
    pub best_epoch: usize,
}

impl TrainHistory {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epoch,train_loss,test_loss,train_f1,test_f1\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.epoch, r.train_loss, r.test_loss, r.train_f1, r.test_f1
            ));
        }
        out
    }
}

/// Mean BCE loss and F1 of a model on a dataset.
pub fn evaluate(model: &CritsModel, data: &TimeSeriesDataset) -> Result<(f64, f64), TrainError> {
    let mut loss = 0.0;
    let mut predictions = Vec::with_capacity(data.len());
    for (x, &y) in data.instances().iter().zip(data.labels()) {
        let trace = forward(model, x)?;
        loss += bce_loss_from_logit(trace.logit, y);
        predictions.push(if trace.probability >= 0.5 { 1 } else { 0 });
    }
    Ok((
        loss / data.len() as f64,
        f1_score(data.labels(), &predictions),
    ))
}

/// Mini-batch Adam over seeded shuffled epochs. Returns the parameter
/// snapshot with the best test loss plus the per-epoch history.
pub fn train_model(
    config: &ModelConfig,
    tconfig: &TrainConfig,
    train: &TimeSeriesDataset,
    test: &TimeSeriesDataset,
) -> Result<(CritsModel, TrainHistory), TrainError> {
    tconfig.validate()?;
    for (name, ds) in [("train", train), ("test", test)] {
        if ds.channels() != config.channels || ds.timesteps() != config.timesteps {
            return Err(TrainError::ShapeMismatch(format!(
                "{name} split is {} x {}, model expects {} x {}",
                ds.channels(),
                ds.timesteps(),
                config.channels,
                config.timesteps
            )));
        }
    }
    let mut model = init_model(config)?;
    let mut flat = model.params.to_flat();
    let mut state = AdamState::new(flat.len());
    let mut step = 0u64;
    let mut rng = StdRng::seed_from_u64(tconfig.seed);
    let mut indices: Vec<usize> = (0..train.len()).collect();

    let mut history = Vec::with_capacity(tconfig.epochs);
    let mut best_flat = flat.clone();
    let mut best_test_loss = f64::INFINITY;
    let mut best_epoch = 0;
    let mut stale = 0usize;

    for epoch in 1..=tconfig.epochs {
        indices.shuffle(&mut rng);
        for batch in indices.chunks(tconfig.batch_size) {
            let mut acc = ParamSet::zeros(config);
            for &i in batch {
                let g = backward(&model, train.instance(i), train.label(i))?;
                add_assign(&mut acc, &g);
            }
            scale(&mut acc, 1.0 / batch.len() as f64);
            step += 1;
            adam_step(&mut flat, &acc.to_flat(), &mut state, tconfig, step);
            model.params.assign_from_flat(&flat);
        }
        let (train_loss, train_f1) = evaluate(&model, train)?;
        let (test_loss, test_f1) = evaluate(&model, test)?;
        history.push(EpochStats {
            epoch,
            train_loss,
            test_loss,
            train_f1,
            test_f1,
        });
        if test_loss < best_test_loss {
            best_test_loss = test_loss;
            best_flat.copy_from_slice(&flat);
            best_epoch = epoch;
            stale = 0;
        } else {
            stale += 1;
            if tconfig.patience > 0 && stale >= tconfig.patience {
                break;
            }
        }
    }
    model.params.assign_from_flat(&best_flat);
    Ok((
        model,
        TrainHistory {
            rows: history,
            best_epoch,
        },
    ))
}

/// F1 of class 1. Returns 0 whenever there are no true positives (covers the
/// degenerate no-positive-predictions / no-positives cases).
pub fn f1_score(labels: &[u8], predictions: &[u8]) -> f64 {
    assert_eq!(labels.len(), predictions.len());
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut fn_ = 0usize;
    for (&y, &p) in labels.iter().zip(predictions) {
        match (y, p) {
            (1, 1) => tp += 1,
            (0, 1) => fp += 1,
            (1, 0) => fn_ += 1,
            _ => {}
        }
    }
    if tp == 0 {
        return 0.0;
    }
    let precision = tp as f64 / (tp + fp) as f64;
    let recall = tp as f64 / (tp + fn_) as f64;
    2.0 * precision * recall / (precision + recall)
}

/// Random-search grids. Samples are uniform on each grid; layer widths are
/// drawn independently per layer.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace {
    /// Kernel length, inclusive, step 1.
    pub kernel_len: (usize, usize),
    /// Kernel count (min, max, step).
    pub kernel_count: (usize, usize, usize),
    /// Hidden layer count, inclusive, step 1.
    pub layer_count: (usize, usize),
    /// Neurons per layer (min, max, step).
    pub layer_width: (usize, usize, usize),
    /// Number of configurations to sample.
    pub samples: usize,
    /// Trials per configuration (re-seeded initialization, fixed split).
    pub trials: usize,
}

impl Default for SearchSpace {
    fn default() -> Self {
        Self {
            kernel_len: (3, 16),
            kernel_count: (16, 256, 16),
            layer_count: (3, 5),
            layer_width: (20, 200, 10),
            samples: 500,
            trials: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchRow {
    pub sample_index: usize,
    pub kernel_len: usize,
    pub kernel_count: usize,
    pub hidden_sizes: Vec<usize>,
    pub trial_f1s: Vec<f64>,
    pub mean_f1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub best: ModelConfig,
    pub best_f1: f64,
    pub log: Vec<SearchRow>,
}

impl SearchResult {
    pub fn log_to_csv(&self) -> String {
        let mut out = String::from("sample_index,h,K,hidden_sizes,trial_f1s,mean_f1\n");
        for row in &self.log {
            let hidden: Vec<String> = row.hidden_sizes.iter().map(|s| s.to_string()).collect();
            let f1s: Vec<String> = row.trial_f1s.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.sample_index,
                row.kernel_len,
                row.kernel_count,
                hidden.join("|"),
                f1s.join("|"),
                row.mean_f1
            ));
        }
        out
    }
}

fn sample_grid(rng: &mut StdRng, (min, max, step): (usize, usize, usize)) -> usize {
    min + step * rng.random_range(0..=(max - min) / step)
}

/// Uniform random search over the declared grids, ranked by mean test F1
/// across `trials` re-seeded trainings per sampled configuration. Each
/// configuration's seeds derive from (master seed, sample index, trial), so
/// evaluation order cannot change the result.
pub fn random_search(
    space: &SearchSpace,
    tconfig: &TrainConfig,
    train: &TimeSeriesDataset,
    test: &TimeSeriesDataset,
    master_seed: u64,
) -> Result<SearchResult, TrainError> {
    if space.samples < 1 || space.trials < 1 {
        return Err(TrainError::BadParams(
            "search needs samples >= 1 and trials >= 1".into(),
        ));
    }
    // Kernels cannot outrun the series; restrict the grid to lengths <= T.
    let max_len = space.kernel_len.1.min(train.timesteps());
    if space.kernel_len.0 > max_len {
        return Err(TrainError::BadParams(format!(
            "kernel length grid starts at {} but the series has only {} steps",
            space.kernel_len.0,
            train.timesteps()
        )));
    }

    let mut log = Vec::with_capacity(space.samples);
    let mut best: Option<(ModelConfig, f64)> = None;
    for sample_index in 0..space.samples {
        let mut rng = seed::rng(master_seed, &[0, sample_index as u64]);
        let kernel_len = rng.random_range(space.kernel_len.0..=max_len);
        let kernel_count = sample_grid(&mut rng, space.kernel_count);
        let layers = rng.random_range(space.layer_count.0..=space.layer_count.1);
        let hidden_sizes: Vec<usize> = (0..layers)
            .map(|_| sample_grid(&mut rng, space.layer_width))
            .collect();

        let mut trial_f1s = Vec::with_capacity(space.trials);
        let mut best_trial: Option<(u64, f64)> = None;
        for trial in 0..space.trials {
            let init_seed = seed::derive(master_seed, &[1, sample_index as u64, trial as u64]);
            let config = ModelConfig {
                kernel_len,
                kernel_count,
                hidden_sizes: hidden_sizes.clone(),
                channels: train.channels(),
                timesteps: train.timesteps(),
                seed: init_seed,
            };
            let trial_tconfig = TrainConfig {
                seed: seed::derive(master_seed, &[2, sample_index as u64, trial as u64]),
                ..tconfig.clone()
            };
            let (model, _) = train_model(&config, &trial_tconfig, train, test)?;
            let (_, f1) = evaluate(&model, test)?;
            trial_f1s.push(f1);
            if best_trial.is_none_or(|(_, b)| f1 > b) {
                best_trial = Some((init_seed, f1));
            }
        }
        let mean_f1 = trial_f1s.iter().sum::<f64>() / trial_f1s.len() as f64;
        if best.as_ref().is_none_or(|(_, b)| mean_f1 > *b) {
            best = Some((
                ModelConfig {
                    kernel_len,
                    kernel_count,
                    hidden_sizes: hidden_sizes.clone(),
                    channels: train.channels(),
                    timesteps: train.timesteps(),
                    seed: best_trial.expect("at least one trial").0,
                },
                mean_f1,
            ));
        }
        log.push(SearchRow {
            sample_index,
            kernel_len,
            kernel_count,
            hidden_sizes,
            trial_f1s,
            mean_f1,
        });
    }
    let (best, best_f1) = best.expect("samples >= 1");
    Ok(SearchResult {
        best,
        best_f1,
        log,
    })
}

/// Result of [`grad_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradCheck {
    pub max_rel_error: f64,
    pub checked: usize,
    /// Coordinates whose perturbation crossed a max-pool or ReLU boundary;
    /// central differences are invalid there and the coordinate is skipped.
    pub skipped: usize,
}

/// Central-difference verification of [`backward`] over every parameter.
/// Relative error uses a `max(1, |analytic|)` denominator.
pub fn grad_check(
    model: &CritsModel,
    x: &Array2<f64>,
    y: u8,
    step: f64,
) -> Result<GradCheck, TrainError> {
    let analytic = backward(model, x, y)?;
    grad_check_against(model, x, y, step, &analytic)
}

fn grad_check_against(
    model: &CritsModel,
    x: &Array2<f64>,
    y: u8,
    step: f64,
    analytic: &Gradients,
) -> Result<GradCheck, TrainError> {
    if !step.is_finite() || step <= 0.0 {
        return Err(TrainError::BadParams("step must be > 0".into()));
    }
    let base = forward(model, x)?;
    let analytic_flat = analytic.to_flat();
    let mut scratch = model.clone();
    let mut flat = model.params.to_flat();

    let mut max_rel_error: f64 = 0.0;
    let mut checked = 0;
    let mut skipped = 0;
    for i in 0..flat.len() {
        let original = flat[i];
        flat[i] = original + step;
        scratch.params.assign_from_flat(&flat);
        let plus = forward(&scratch, x)?;
        flat[i] = original - step;
        scratch.params.assign_from_flat(&flat);
        let minus = forward(&scratch, x)?;
        flat[i] = original;

        let crossed = plus.winners != base.winners
            || minus.winners != base.winners
            || plus.patterns != base.patterns
            || minus.patterns != base.patterns;
        if crossed {
            skipped += 1;
            continue;
        }
        let numeric =
            (bce_loss_from_logit(plus.logit, y) - bce_loss_from_logit(minus.logit, y))
                / (2.0 * step);
        let rel = (analytic_flat[i] - numeric).abs() / analytic_flat[i].abs().max(1.0);
        max_rel_error = max_rel_error.max(rel);
        checked += 1;
    }
    scratch.params.assign_from_flat(&flat);
    Ok(GradCheck {
        max_rel_error,
        checked,
        skipped,
    })
}
