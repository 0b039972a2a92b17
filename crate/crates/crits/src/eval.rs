//! Explanation-quality metrics.
//!
//! An explanation is judged by perturbing the cells it ranks highest and
//! watching the classifier: alignment is the RMSE change in predicted
//! probability under relevance-guided perturbation (zero / inverse / swap /
//! mean), input-sensitivity is the RMSE between explanations of an input and
//! a Gaussian-noised copy, and sparsity is the fraction of map entries with
//! magnitude above 0.01.
//!
//! [`run_protocol`] draws `samples` test instances per repetition (5
//! repetitions by default), computes all three metrics for every registered
//! explainer and aggregates them into an [`EvalReport`]. Per-instance noise
//! seeds derive from (master seed, repetition, instance, noise level) only,
//! so every explainer sees identical perturbed inputs and the report is
//! invariant to explainer registration order.

use ndarray::Array2;
use rand::seq::index::sample as index_sample;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::data::TimeSeriesDataset;
use crate::explain::{ExplainError, Explainer, SaliencyMap};
use crate::model::{predict_proba, CritsModel, ModelError};
use crate::seed;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Explain(#[from] ExplainError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("bad parameter: {0}")]
    BadParams(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PerturbKind {
    /// Replace selected values with zero.
    Zero,
    /// Replace selected values with the per-channel maximum minus the value.
    Inverse,
    /// Chronologically reverse a window around each selected cell.
    Swap,
    /// Replace a window around each selected cell with its mean.
    Mean,
}

impl PerturbKind {
    pub const ALL: [PerturbKind; 4] = [
        PerturbKind::Zero,
        PerturbKind::Inverse,
        PerturbKind::Swap,
        PerturbKind::Mean,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            PerturbKind::Zero => "zero",
            PerturbKind::Inverse => "inverse",
            PerturbKind::Swap => "swap",
            PerturbKind::Mean => "mean",
        }
    }
}

impl std::fmt::Display for PerturbKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A perturbation method: the kind, the fraction `q` of cells selected by
/// relevance magnitude, and the window length used by Swap/Mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbMethod {
    pub kind: PerturbKind,
    pub q: f64,
    pub window: usize,
}

impl PerturbMethod {
    pub fn new(kind: PerturbKind, q: f64, window: usize) -> Result<Self, EvalError> {
        if !(q > 0.0 && q <= 1.0) {
            return Err(EvalError::BadParams(format!(
                "relevance fraction q must be in (0, 1], got {q}"
            )));
        }
        if matches!(kind, PerturbKind::Swap | PerturbKind::Mean) && window < 2 {
            return Err(EvalError::BadParams(format!(
                "{kind} perturbation needs a window of at least 2, got {window}"
            )));
        }
        Ok(Self { kind, q, window })
    }
}

// Cells ranked by |relevance| descending, ties by channel-major index.
fn select_cells(relevance: &Array2<f64>, q: f64) -> Vec<usize> {
    let total = relevance.len();
    let count = (q * total as f64).ceil() as usize;
    let flat: Vec<f64> = relevance.iter().map(|v| v.abs()).collect();
    let mut order: Vec<usize> = (0..total).collect();
    order.sort_unstable_by(|&a, &b| flat[b].total_cmp(&flat[a]).then(a.cmp(&b)));
    order.truncate(count.min(total));
    order
}

// Per-channel [start, end) windows around the selected cells, overlapping
// windows merged.
fn merged_windows(
    selected: &[usize],
    channels: usize,
    timesteps: usize,
    window: usize,
) -> Vec<Vec<(usize, usize)>> {
    let mut per_channel: Vec<Vec<(usize, usize)>> = vec![Vec::new(); channels];
    for &cell in selected {
        let (c, t) = (cell / timesteps, cell % timesteps);
        let start = t.saturating_sub(window / 2);
        let end = (start + window).min(timesteps);
        per_channel[c].push((start, end));
    }
    for windows in &mut per_channel {
        windows.sort_unstable();
        let mut merged: Vec<(usize, usize)> = Vec::with_capacity(windows.len());
        for &(s, e) in windows.iter() {
            match merged.last_mut() {
                Some(last) if s < last.1 => last.1 = last.1.max(e),
                _ => merged.push((s, e)),
            }
        }
        *windows = merged;
    }
    per_channel
}

/// Applies a relevance-guided perturbation. The top `ceil(q * m * T)` cells
/// by |relevance| are selected (ties broken by channel-major index);
/// Zero/Inverse act on the selected cells themselves, Swap/Mean act on
/// merged windows centered at the selected cells' time indices, clipped at
/// the series boundaries. Unselected cells are untouched.
pub fn perturb(
    x: &Array2<f64>,
    relevance: &SaliencyMap,
    method: &PerturbMethod,
) -> Result<Array2<f64>, EvalError> {
    if x.dim() != relevance.dim() {
        return Err(EvalError::ShapeMismatch(format!(
            "input is {:?} but relevance is {:?}",
            x.dim(),
            relevance.dim()
        )));
    }
    if !relevance.iter().all(|v| v.is_finite()) {
        return Err(EvalError::BadParams(
            "relevance map contains non-finite values".into(),
        ));
    }
    let (channels, timesteps) = x.dim();
    let selected = select_cells(relevance, method.q);
    let mut out = x.clone();
    match method.kind {
        PerturbKind::Zero => {
            for &cell in &selected {
                out[[cell / timesteps, cell % timesteps]] = 0.0;
            }
        }
        PerturbKind::Inverse => {
            let channel_max: Vec<f64> = (0..channels)
                .map(|c| x.row(c).iter().cloned().fold(f64::NEG_INFINITY, f64::max))
                .collect();
            for &cell in &selected {
                let (c, t) = (cell / timesteps, cell % timesteps);
                out[[c, t]] = channel_max[c] - x[[c, t]];
            }
        }
        PerturbKind::Swap => {
            for (c, windows) in merged_windows(&selected, channels, timesteps, method.window)
                .iter()
                .enumerate()
            {
                for &(s, e) in windows {
                    for i in 0..(e - s) / 2 {
                        out.swap([c, s + i], [c, e - 1 - i]);
                    }
                }
            }
        }
        PerturbKind::Mean => {
            for (c, windows) in merged_windows(&selected, channels, timesteps, method.window)
                .iter()
                .enumerate()
            {
                for &(s, e) in windows {
                    let mean = (s..e).map(|t| x[[c, t]]).sum::<f64>() / (e - s) as f64;
                    for t in s..e {
                        out[[c, t]] = mean;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Alignment: RMSE of the probability change under relevance-guided
/// perturbation, over a set of instances.
pub fn alignment(
    model: &CritsModel,
    explainer: &dyn Explainer,
    instances: &[&Array2<f64>],
    method: &PerturbMethod,
) -> Result<f64, EvalError> {
    if instances.is_empty() {
        return Err(EvalError::BadParams("alignment needs instances".into()));
    }
    let mut sum = 0.0;
    for &x in instances {
        let relevance = explainer.perturbation_relevance(model, x)?;
        let perturbed = perturb(x, &relevance, method)?;
        let p = predict_proba(model, x)?;
        let p_hat = predict_proba(model, &perturbed)?;
        sum += (p - p_hat).powi(2);
    }
    Ok((sum / instances.len() as f64).sqrt())
}

/// Input-sensitivity: RMSE between the explanations of `x` and of a
/// Gaussian-noised copy. The explainer's own seed (if any) is a field of the
/// explainer and therefore identical across the pair.
pub fn input_sensitivity(
    model: &CritsModel,
    explainer: &dyn Explainer,
    x: &Array2<f64>,
    noise_std: f64,
    noise_seed: u64,
) -> Result<f64, EvalError> {
    if !(noise_std >= 0.0 && noise_std.is_finite()) {
        return Err(EvalError::BadParams(format!(
            "noise std must be finite and >= 0, got {noise_std}"
        )));
    }
    let base = explainer.explain(model, x)?;
    let noised = if noise_std == 0.0 {
        x.clone()
    } else {
        let mut rng = StdRng::seed_from_u64(noise_seed);
        let mut out = x.clone();
        for v in out.iter_mut() {
            *v += noise_std * rng.sample::<f64, _>(StandardNormal);
        }
        out
    };
    let other = explainer.explain(model, &noised)?;
    let mse = (&base - &other).mapv(|d| d * d).mean().unwrap_or(0.0);
    Ok(mse.sqrt())
}

/// Fraction of map entries with magnitude above 0.01.
pub fn sparsity(map: &SaliencyMap) -> f64 {
    let hits = map.iter().filter(|v| v.abs() > 0.01).count();
    hits as f64 / map.len() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentRow {
    pub explainer: String,
    pub method: PerturbKind,
    pub repetition: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityRow {
    pub explainer: String,
    pub noise_std: f64,
    pub repetition: usize,
    /// Mean IS over the repetition's instances.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparsityRow {
    pub explainer: String,
    pub repetition: usize,
    /// Index of the instance in the evaluated dataset.
    pub instance: usize,
    pub value: f64,
}

/// All metric values plus the protocol metadata needed to reproduce them.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub dataset: String,
    pub samples_per_repetition: usize,
    pub repetitions: usize,
    pub seed: u64,
    pub q: f64,
    pub window: usize,
    pub noise_grid: Vec<f64>,
    pub alignment: Vec<AlignmentRow>,
    pub sensitivity: Vec<SensitivityRow>,
    pub sparsity: Vec<SparsityRow>,
}

/// Protocol knobs. Defaults: 50 samples x 5 repetitions, top 10% of cells,
/// Swap/Mean window equal to the model's kernel length, noise grid
/// 1e-5 .. 1e-1.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    pub samples_per_repetition: usize,
    pub repetitions: usize,
    pub q: f64,
    /// Swap/Mean window; `None` uses the model's kernel length (min 2).
    pub window: Option<usize>,
    pub noise_grid: Vec<f64>,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            samples_per_repetition: 50,
            repetitions: 5,
            q: 0.1,
            window: None,
            noise_grid: vec![1e-5, 1e-4, 1e-3, 1e-2, 1e-1],
        }
    }
}

/// Runs the full protocol: per repetition, draw `samples_per_repetition`
/// test instances without replacement (all of them if the set is smaller,
/// recorded in the metadata) and compute alignment under all four
/// perturbations, mean input-sensitivity across the noise grid, and
/// per-instance sparsity, for every explainer.
pub fn run_protocol(
    model: &CritsModel,
    explainers: &[&dyn Explainer],
    test: &TimeSeriesDataset,
    master_seed: u64,
    config: &ProtocolConfig,
) -> Result<EvalReport, EvalError> {
    if explainers.is_empty() {
        return Err(EvalError::BadParams("no explainers registered".into()));
    }
    if test.channels() != model.config.channels || test.timesteps() != model.config.timesteps {
        return Err(EvalError::ShapeMismatch(format!(
            "dataset is {} x {}, model expects {} x {}",
            test.channels(),
            test.timesteps(),
            model.config.channels,
            model.config.timesteps
        )));
    }
    if config.repetitions < 1 || config.samples_per_repetition < 1 {
        return Err(EvalError::BadParams(
            "repetitions and samples must be >= 1".into(),
        ));
    }
    let mut order: Vec<usize> = (0..explainers.len()).collect();
    order.sort_by_key(|&i| explainers[i].name().to_string());
    for pair in order.windows(2) {
        if explainers[pair[0]].name() == explainers[pair[1]].name() {
            return Err(EvalError::BadParams(format!(
                "duplicate explainer name {:?}",
                explainers[pair[0]].name()
            )));
        }
    }

    let window = config.window.unwrap_or(model.config.kernel_len).max(2);
    let samples = config.samples_per_repetition.min(test.len());
    let methods: Vec<PerturbMethod> = PerturbKind::ALL
        .iter()
        .map(|&kind| PerturbMethod::new(kind, config.q, window))
        .collect::<Result<_, _>>()?;

    let mut report = EvalReport {
        dataset: test.name.clone(),
        samples_per_repetition: samples,
        repetitions: config.repetitions,
        seed: master_seed,
        q: config.q,
        window,
        noise_grid: config.noise_grid.clone(),
        alignment: Vec::new(),
        sensitivity: Vec::new(),
        sparsity: Vec::new(),
    };

    for rep in 0..config.repetitions {
        let mut rng = seed::rng(master_seed, &[0, rep as u64]);
        let chosen: Vec<usize> = index_sample(&mut rng, test.len(), samples).into_vec();
        let instances: Vec<&Array2<f64>> =
            chosen.iter().map(|&i| test.instance(i)).collect();

        for &e in &order {
            let explainer = explainers[e];
            let name = explainer.name();
            for method in &methods {
                report.alignment.push(AlignmentRow {
                    explainer: name.to_string(),
                    method: method.kind,
                    repetition: rep + 1,
                    value: alignment(model, explainer, &instances, method)?,
                });
            }
            for (noise_idx, &noise_std) in config.noise_grid.iter().enumerate() {
                let mut total = 0.0;
                for &i in &chosen {
                    let noise_seed =
                        seed::derive(master_seed, &[1, rep as u64, i as u64, noise_idx as u64]);
                    total += input_sensitivity(
                        model,
                        explainer,
                        test.instance(i),
                        noise_std,
                        noise_seed,
                    )?;
                }
                report.sensitivity.push(SensitivityRow {
                    explainer: name.to_string(),
                    noise_std,
                    repetition: rep + 1,
                    value: total / chosen.len() as f64,
                });
            }
            for &i in &chosen {
                let map = explainer.explain(model, test.instance(i))?;
                report.sparsity.push(SparsityRow {
                    explainer: name.to_string(),
                    repetition: rep + 1,
                    instance: i,
                    value: sparsity(&map),
                });
            }
        }
    }

    // Deterministic row order regardless of registration order.
    report
        .alignment
        .sort_by(|a, b| (&a.explainer, a.repetition, a.method.as_str())
            .cmp(&(&b.explainer, b.repetition, b.method.as_str())));
    report.sensitivity.sort_by(|a, b| {
        (&a.explainer, a.repetition)
            .cmp(&(&b.explainer, b.repetition))
            .then(a.noise_std.total_cmp(&b.noise_std))
    });
    report.sparsity.sort_by(|a, b| {
        (&a.explainer, a.repetition, a.instance).cmp(&(&b.explainer, b.repetition, b.instance))
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::synth_bump;
    use crate::explain::{GradExplainer, IntrinsicExplainer, UniformExplainer};
    use crate::model::test_support::{random_config, random_input};
    use crate::model::{init_model, CritsModel, ModelConfig, ParamSet};
    use approx::assert_abs_diff_eq;
    use ndarray::array;
    use proptest::prelude::*;

    fn zero_method(q: f64) -> PerturbMethod {
        PerturbMethod::new(PerturbKind::Zero, q, 2).unwrap()
    }

    #[test]
    fn zero_perturbation_hits_only_selected_cell() {
        let x = array![[1.0, -0.5, 2.3, 0.1, 0.9, 2.3]];
        let mut relevance = Array2::zeros((1, 6));
        relevance[[0, 2]] = 5.0;
        // q small enough to select exactly one of six cells
        let out = perturb(&x, &relevance, &zero_method(1.0 / 6.0)).unwrap();
        assert_eq!(out[[0, 2]], 0.0);
        for t in [0, 1, 3, 4, 5] {
            assert_eq!(out[[0, t]], x[[0, t]]);
        }
    }

    #[test]
    fn inverse_uses_per_channel_maximum() {
        let x = array![[1.0, 4.0, 2.0], [10.0, 0.0, 5.0]];
        let mut relevance = Array2::zeros((2, 3));
        relevance[[0, 0]] = 1.0;
        let out = perturb(
            &x,
            &relevance,
            &PerturbMethod::new(PerturbKind::Inverse, 1.0 / 6.0, 2).unwrap(),
        )
        .unwrap();
        // channel 0 max is 4: 4 - 1 = 3
        assert_eq!(out[[0, 0]], 3.0);
        assert_eq!(out[[1, 0]], 10.0);
    }

    #[test]
    fn swap_reverses_and_mean_averages() {
        let x = array![[1.0, 2.0, 3.0, 4.0, 9.0, 9.0]];
        let mut relevance = Array2::zeros((1, 6));
        relevance[[0, 1]] = 1.0; // window of 4 centered near t=1 spans 0..4
        relevance[[0, 2]] = 0.5;
        let swap = perturb(
            &x,
            &relevance,
            &PerturbMethod::new(PerturbKind::Swap, 2.0 / 6.0, 4).unwrap(),
        )
        .unwrap();
        assert_eq!(swap.row(0).to_vec(), vec![4.0, 3.0, 2.0, 1.0, 9.0, 9.0]);
        let mean = perturb(
            &x,
            &relevance,
            &PerturbMethod::new(PerturbKind::Mean, 2.0 / 6.0, 4).unwrap(),
        )
        .unwrap();
        assert_eq!(mean.row(0).to_vec(), vec![2.5, 2.5, 2.5, 2.5, 9.0, 9.0]);
    }

    #[test]
    fn ties_break_channel_major() {
        let x = array![[1.0, 2.0], [3.0, 4.0]];
        let relevance = Array2::ones((2, 2));
        // one cell: the uniform tie selects cell 0 (channel 0, t 0)
        let out = perturb(&x, &relevance, &zero_method(0.25)).unwrap();
        assert_eq!(out[[0, 0]], 0.0);
        assert_eq!(out[[0, 1]], 2.0);
        assert_eq!(out[[1, 0]], 3.0);
    }

    #[test]
    fn perturb_validates() {
        let x = array![[1.0, 2.0]];
        let bad = Array2::zeros((2, 2));
        assert!(matches!(
            perturb(&x, &bad, &zero_method(0.5)),
            Err(EvalError::ShapeMismatch(_))
        ));
        assert!(matches!(
            PerturbMethod::new(PerturbKind::Swap, 0.5, 1),
            Err(EvalError::BadParams(_))
        ));
        assert!(matches!(
            PerturbMethod::new(PerturbKind::Zero, 0.0, 2),
            Err(EvalError::BadParams(_))
        ));
    }

    #[test]
    fn alignment_reference_arithmetic() {
        // Probability shifts of 0.3 and 0.4: A = sqrt((0.09 + 0.16)/2)
        let a = ((0.09f64 + 0.16) / 2.0).sqrt();
        assert_abs_diff_eq!(a, 0.35355, epsilon = 1e-5);
    }

    #[test]
    fn alignment_constant_model_is_zero() {
        let config = ModelConfig {
            kernel_len: 3,
            kernel_count: 2,
            hidden_sizes: vec![4],
            channels: 1,
            timesteps: 12,
            seed: 0,
        };
        let model = CritsModel::new(config.clone(), ParamSet::zeros(&config), None).unwrap();
        let (ds, _) = synth_bump(10, 1, 12, 3, 2.0, 3).unwrap();
        let instances: Vec<&Array2<f64>> = ds.instances().iter().collect();
        for kind in PerturbKind::ALL {
            let method = PerturbMethod::new(kind, 0.1, 4).unwrap();
            let a = alignment(&model, &UniformExplainer, &instances, &method).unwrap();
            assert_eq!(a, 0.0);
        }
    }

    #[test]
    fn sensitivity_zero_noise_is_exactly_zero() {
        let mut rng = StdRng::seed_from_u64(31);
        let config = random_config(&mut rng);
        let model = init_model(&config).unwrap();
        let x = random_input(&config, &mut rng);
        for explainer in [
            &IntrinsicExplainer as &dyn Explainer,
            &GradExplainer as &dyn Explainer,
        ] {
            let is = input_sensitivity(&model, explainer, &x, 0.0, 9).unwrap();
            assert_eq!(is, 0.0);
        }
    }

    #[test]
    fn sensitivity_tiny_noise_same_region_is_zero() {
        // Noise far below the distance to any kink leaves the trace, hence
        // the intrinsic weights, unchanged.
        let mut rng = StdRng::seed_from_u64(32);
        let mut hits = 0;
        for _ in 0..10 {
            let config = random_config(&mut rng);
            let model = init_model(&config).unwrap();
            let x = random_input(&config, &mut rng);
            let is = input_sensitivity(&model, &IntrinsicExplainer, &x, 1e-12, 7).unwrap();
            if is == 0.0 {
                hits += 1;
            }
        }
        assert!(hits >= 9, "only {hits}/10 stayed in their linear region");
    }

    #[test]
    fn sparsity_reference_values() {
        assert_eq!(sparsity(&Array2::zeros((2, 5))), 0.0);
        assert_eq!(sparsity(&Array2::ones((2, 5))), 1.0);
        let mut map = Array2::zeros((1, 10));
        map[[0, 0]] = 0.5;
        map[[0, 1]] = -0.02;
        map[[0, 2]] = 0.009;
        assert_eq!(sparsity(&map), 0.2);
    }

    #[test]
    fn protocol_shape_and_determinism() {
        let (ds, _) = synth_bump(24, 1, 16, 4, 2.0, 51).unwrap();
        let config = ModelConfig {
            kernel_len: 4,
            kernel_count: 2,
            hidden_sizes: vec![4],
            channels: 1,
            timesteps: 16,
            seed: 3,
        };
        let model = init_model(&config).unwrap();
        let protocol = ProtocolConfig {
            samples_per_repetition: 8,
            repetitions: 5,
            ..ProtocolConfig::default()
        };
        let a = run_protocol(
            &model,
            &[&IntrinsicExplainer, &GradExplainer],
            &ds,
            77,
            &protocol,
        )
        .unwrap();
        // registration order must not matter
        let b = run_protocol(
            &model,
            &[&GradExplainer, &IntrinsicExplainer],
            &ds,
            77,
            &protocol,
        )
        .unwrap();
        assert_eq!(a, b);
        // 5 repetitions x 4 methods per explainer
        for name in ["intrinsic", "grad"] {
            let count = a
                .alignment
                .iter()
                .filter(|r| r.explainer == name)
                .count();
            assert_eq!(count, 20);
        }
        assert_eq!(a.sensitivity.len(), 2 * 5 * a.noise_grid.len());
        assert_eq!(a.sparsity.len(), 2 * 5 * 8);
    }

    #[test]
    fn protocol_single_explainer_only() {
        let (ds, _) = synth_bump(12, 1, 16, 4, 2.0, 52).unwrap();
        let config = ModelConfig {
            kernel_len: 4,
            kernel_count: 2,
            hidden_sizes: vec![3],
            channels: 1,
            timesteps: 16,
            seed: 4,
        };
        let model = init_model(&config).unwrap();
        let protocol = ProtocolConfig {
            samples_per_repetition: 4,
            repetitions: 2,
            ..ProtocolConfig::default()
        };
        let report =
            run_protocol(&model, &[&IntrinsicExplainer], &ds, 5, &protocol).unwrap();
        assert!(report.alignment.iter().all(|r| r.explainer == "intrinsic"));
        assert!(report.sparsity.iter().all(|r| r.explainer == "intrinsic"));
    }

    #[test]
    fn intrinsic_sparsity_respects_support_bound() {
        let mut rng = StdRng::seed_from_u64(33);
        for _ in 0..20 {
            let config = random_config(&mut rng);
            let model = init_model(&config).unwrap();
            let x = random_input(&config, &mut rng);
            let map = IntrinsicExplainer.explain(&model, &x).unwrap();
            let bound = (config.kernel_count * config.kernel_len) as f64
                / config.timesteps as f64;
            assert!(sparsity(&map) <= bound.min(1.0) + 1e-12);
        }
    }

    proptest! {
        #[test]
        fn swap_is_an_involution(seed in 0u64..300) {
            let mut rng = StdRng::seed_from_u64(seed);
            let x = Array2::from_shape_fn((2, 12), |_| rng.random_range(-3.0..3.0));
            let relevance = Array2::from_shape_fn((2, 12), |_| rng.random_range(-1.0..1.0));
            let method = PerturbMethod::new(PerturbKind::Swap, 0.2, 4).unwrap();
            let once = perturb(&x, &relevance, &method).unwrap();
            let twice = perturb(&once, &relevance, &method).unwrap();
            prop_assert_eq!(twice, x);
        }

        #[test]
        fn mean_preserves_window_sums(seed in 0u64..300) {
            let mut rng = StdRng::seed_from_u64(seed);
            let x = Array2::from_shape_fn((1, 16), |_| rng.random_range(-3.0..3.0));
            let relevance = Array2::from_shape_fn((1, 16), |_| rng.random_range(-1.0..1.0));
            let method = PerturbMethod::new(PerturbKind::Mean, 0.2, 4).unwrap();
            let out = perturb(&x, &relevance, &method).unwrap();
            let before: f64 = x.iter().sum();
            let after: f64 = out.iter().sum();
            // Exact up to one rounding of the mean per window.
            prop_assert!((before - after).abs() <= 1e-12 * before.abs().max(1.0));
        }

        #[test]
        fn zero_and_inverse_touch_only_selected(seed in 0u64..300) {
            let mut rng = StdRng::seed_from_u64(seed);
            let x = Array2::from_shape_fn((2, 10), |_| rng.random_range(-3.0..3.0));
            let relevance = Array2::from_shape_fn((2, 10), |_| rng.random_range(-1.0..1.0));
            let q = 0.15;
            let selected = super::select_cells(&relevance, q);
            for kind in [PerturbKind::Zero, PerturbKind::Inverse] {
                let method = PerturbMethod::new(kind, q, 2).unwrap();
                let out = perturb(&x, &relevance, &method).unwrap();
                for cell in 0..x.len() {
                    if !selected.contains(&cell) {
                        prop_assert_eq!(out[[cell / 10, cell % 10]], x[[cell / 10, cell % 10]]);
                    }
                }
            }
        }
    }
}
