//! Interpretable time-series classification with exact local explanations.
//!
//! The classifier is a single 1-D convolution layer (stride 1, no padding),
//! a global max-pooling layer, a fully-connected rectifier network (ReLU-only)
//! and one sigmoid output neuron. Because every piece between the pooled
//! vector and the logit is piecewise linear, the weights the model applied to
//! a given input can be recovered exactly: the rectifier network is unwrapped
//! through its activation patterns, and the winning kernels are projected back
//! onto their input windows. The result is a per-instance linear surrogate
//! `z = sum(w ⊙ x) + b` that reproduces the pre-sigmoid logit to within
//! floating-point error.
//!
//! Modules:
//! - [`data`]: `.ts` / CSV ingestion, z-normalization, stratified splitting,
//!   synthetic ground-truth generation.
//! - [`model`]: the architecture, forward traces, save/load.
//! - [`train`]: BCE loss, hand-derived backprop, Adam, gradient verification,
//!   random hyperparameter search.
//! - [`explain`]: exact surrogate extraction plus gradient, SmoothGrad and
//!   expected-gradients baselines.
//! - [`eval`]: relevance-guided perturbations and the alignment /
//!   input-sensitivity / sparsity protocol.
//! - [`report`]: CSV emission and SVG heatmaps / boxplots.
//! - [`cli`]: the `crits` command-line pipeline.

pub mod cli;
pub mod data;
pub mod eval;
pub mod explain;
pub mod model;
pub mod report;
pub mod seed;
pub mod train;

pub use data::{GroundTruthMask, NormStats, TimeSeriesDataset};
pub use explain::{LinearSurrogate, PoolWeights, SaliencyMap};
pub use model::{CritsModel, ForwardTrace, ModelConfig};
pub use train::TrainConfig;
