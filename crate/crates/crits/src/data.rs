//! Dataset ingestion and preparation.
//!
//! Supports the `.ts` text format used by the UEA/UCR archives and a plain
//! CSV layout (one instance per row, `m * T` values flattened channel-major,
//! trailing 0/1 label). Normalization is per-channel z-normalization with
//! population statistics fitted on the training split only. All operations
//! are pure given their inputs and seed; datasets are immutable once built.

use std::collections::BTreeMap;

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("ragged series: {0}")]
    RaggedSeries(String),
    #[error("labels are not binary: {0}")]
    NonBinaryLabels(String),
    #[error("line {line}, column {column}: cannot parse {token:?} as a number")]
    NumericParse {
        line: usize,
        column: usize,
        token: String,
    },
    #[error("line {line}: row has {found} fields, expected m*T+1 = {expected}")]
    ShapeMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("channel count mismatch: stats cover {stats} channels, dataset has {dataset}")]
    ChannelMismatch { stats: usize, dataset: usize },
    #[error("class {label} has only {count} instances; stratified split needs at least 2")]
    ClassTooSmall { label: u8, count: usize },
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("bad parameter: {0}")]
    BadParams(String),
}

/// A set of equal-length multichannel series with binary labels.
///
/// Instances are `(channels, timesteps)` arrays. Construction validates the
/// shape and label invariants, so a value of this type is always well formed.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesDataset {
    pub name: String,
    instances: Vec<Array2<f64>>,
    labels: Vec<u8>,
}

impl TimeSeriesDataset {
    pub fn new(
        name: impl Into<String>,
        instances: Vec<Array2<f64>>,
        labels: Vec<u8>,
    ) -> Result<Self, DataError> {
        if instances.is_empty() {
            return Err(DataError::BadShape("dataset has no instances".into()));
        }
        if instances.len() != labels.len() {
            return Err(DataError::BadShape(format!(
                "{} instances but {} labels",
                instances.len(),
                labels.len()
            )));
        }
        let (m, t) = instances[0].dim();
        if m < 1 || t < 2 {
            return Err(DataError::BadShape(format!(
                "instances must be at least 1 channel x 2 time steps, got {m} x {t}"
            )));
        }
        for (i, inst) in instances.iter().enumerate() {
            if inst.dim() != (m, t) {
                return Err(DataError::RaggedSeries(format!(
                    "instance {} has shape {:?}, expected ({m}, {t})",
                    i,
                    inst.dim()
                )));
            }
        }
        if let Some(&bad) = labels.iter().find(|&&y| y > 1) {
            return Err(DataError::NonBinaryLabels(format!(
                "label {bad} is outside {{0, 1}}"
            )));
        }
        Ok(Self {
            name: name.into(),
            instances,
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        false // N >= 1 by construction
    }

    /// Number of channels (m).
    pub fn channels(&self) -> usize {
        self.instances[0].nrows()
    }

    /// Series length (T).
    pub fn timesteps(&self) -> usize {
        self.instances[0].ncols()
    }

    pub fn instance(&self, i: usize) -> &Array2<f64> {
        &self.instances[i]
    }

    pub fn instances(&self) -> &[Array2<f64>] {
        &self.instances
    }

    pub fn label(&self, i: usize) -> u8 {
        self.labels[i]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn class_counts(&self) -> [usize; 2] {
        let ones = self.labels.iter().filter(|&&y| y == 1).count();
        [self.labels.len() - ones, ones]
    }

    /// Dataset restricted to the given instance indices, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            name: self.name.clone(),
            instances: indices.iter().map(|&i| self.instances[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    /// Concatenates two datasets of identical shape.
    pub fn concat(&self, other: &Self) -> Result<Self, DataError> {
        let mut instances = self.instances.clone();
        instances.extend(other.instances.iter().cloned());
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        Self::new(self.name.clone(), instances, labels)
    }

    /// CSV serialization: `# m=<m> T=<T>` header, then one row per instance
    /// of channel-major values plus the trailing label. Values use the
    /// shortest decimal encoding that round-trips binary64 exactly.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# m={} T={}\n", self.channels(), self.timesteps()));
        for (inst, &y) in self.instances.iter().zip(&self.labels) {
            let mut row: Vec<String> = Vec::with_capacity(inst.len() + 1);
            for c in 0..inst.nrows() {
                for t in 0..inst.ncols() {
                    row.push(format!("{}", inst[[c, t]]));
                }
            }
            row.push(format!("{y}"));
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Per-channel normalization statistics (population standard deviation).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormStats {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl NormStats {
    pub fn channels(&self) -> usize {
        self.mean.len()
    }

    /// Identity statistics: mean 0, std 1 on every channel.
    pub fn identity(channels: usize) -> Self {
        Self {
            mean: vec![0.0; channels],
            std: vec![1.0; channels],
        }
    }
}

/// Per-instance boolean masks marking the injected discriminative region of
/// synthetic datasets. Class-0 instances are all false.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruthMask {
    pub masks: Vec<Array2<bool>>,
}

impl GroundTruthMask {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some(first) = self.masks.first() {
            out.push_str(&format!("# m={} T={}\n", first.nrows(), first.ncols()));
        }
        for mask in &self.masks {
            let row: Vec<&str> = mask.iter().map(|&b| if b { "1" } else { "0" }).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Declared CSV layout: channel count and series length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CsvLayout {
    pub channels: usize,
    pub timesteps: usize,
}

// Splits `s` on `delim`, yielding (byte offset, segment) pairs.
fn segments(s: &str, delim: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        if ch == delim {
            out.push((start, &s[start..i]));
            start = i + ch.len_utf8();
        }
    }
    out.push((start, &s[start..]));
    out
}

fn parse_value(token: &str, line: usize, offset: usize) -> Result<f64, DataError> {
    let lead = token.len() - token.trim_start().len();
    let trimmed = token.trim();
    trimmed.parse::<f64>().map_err(|_| DataError::NumericParse {
        line,
        column: offset + lead + 1,
        token: trimmed.to_string(),
    })
}

/// Parses the UEA/UCR `.ts` text format.
///
/// Header directives (`@problemName`, `@classLabel true <labels>`, optional
/// `@seriesLength`, ...) run until `@data`; each data line is one instance,
/// its dimensions separated by `:` with comma-separated values, and the final
/// `:`-field is the class label. Class labels map to {0, 1} in sorted
/// lexicographic order of the declared label set.
pub fn parse_ts(text: &str) -> Result<TimeSeriesDataset, DataError> {
    let mut name = String::from("unnamed");
    let mut declared_labels: Option<Vec<String>> = None;
    let mut series_length: Option<usize> = None;
    let mut in_data = false;

    let mut instances: Vec<Array2<f64>> = Vec::new();
    let mut labels: Vec<u8> = Vec::new();
    let mut label_map: BTreeMap<String, u8> = BTreeMap::new();
    let mut shape: Option<(usize, usize)> = None; // (m, T)

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !in_data {
            if !line.starts_with('@') {
                return Err(DataError::MalformedHeader(format!(
                    "line {lineno}: expected a directive or comment before @data"
                )));
            }
            let mut tokens = line.split_whitespace();
            let directive = tokens.next().unwrap_or("").to_ascii_lowercase();
            match directive.as_str() {
                "@problemname" => {
                    let rest: Vec<&str> = tokens.collect();
                    if !rest.is_empty() {
                        name = rest.join(" ");
                    }
                }
                "@classlabel" => {
                    let flag = tokens.next().unwrap_or("").to_ascii_lowercase();
                    if flag != "true" {
                        return Err(DataError::MalformedHeader(format!(
                            "line {lineno}: @classLabel must be 'true' followed by the label set"
                        )));
                    }
                    let set: Vec<String> = tokens.map(|t| t.to_string()).collect();
                    if set.is_empty() {
                        return Err(DataError::MalformedHeader(format!(
                            "line {lineno}: @classLabel declares no labels"
                        )));
                    }
                    if set.len() > 2 {
                        return Err(DataError::NonBinaryLabels(format!(
                            "header declares {} labels: {}",
                            set.len(),
                            set.join(", ")
                        )));
                    }
                    let mut sorted = set.clone();
                    sorted.sort();
                    sorted.dedup();
                    label_map = sorted
                        .iter()
                        .enumerate()
                        .map(|(i, l)| (l.clone(), i as u8))
                        .collect();
                    declared_labels = Some(sorted);
                }
                "@serieslength" => {
                    if let Some(tok) = tokens.next() {
                        series_length = tok.parse::<usize>().ok();
                    }
                }
                "@data" => {
                    if declared_labels.is_none() {
                        return Err(DataError::MalformedHeader(
                            "@data reached without a @classLabel directive".into(),
                        ));
                    }
                    in_data = true;
                }
                _ => {} // @univariate, @timeStamps, @missing, ... are informational
            }
            continue;
        }

        // Data line: dim_1 : dim_2 : ... : label
        let parts = segments(raw, ':');
        if parts.len() < 2 {
            return Err(DataError::MalformedHeader(format!(
                "line {lineno}: data line has no ':'-separated label field"
            )));
        }
        let (_, label_tok) = parts[parts.len() - 1];
        let dims = &parts[..parts.len() - 1];

        let m = dims.len();
        let mut values: Vec<Vec<f64>> = Vec::with_capacity(m);
        for &(dim_off, dim) in dims {
            let toks = segments(dim, ',');
            let mut channel = Vec::with_capacity(toks.len());
            for (tok_off, tok) in toks {
                channel.push(parse_value(tok, lineno, dim_off + tok_off)?);
            }
            values.push(channel);
        }

        let t = values[0].len();
        for (c, channel) in values.iter().enumerate() {
            if channel.len() != t {
                return Err(DataError::RaggedSeries(format!(
                    "line {lineno}: dimension {c} has {} values, dimension 0 has {t}",
                    channel.len()
                )));
            }
        }
        if let Some(decl) = series_length {
            if t != decl {
                return Err(DataError::RaggedSeries(format!(
                    "line {lineno}: instance length {t} differs from @seriesLength {decl}"
                )));
            }
        }
        match shape {
            None => shape = Some((m, t)),
            Some((m0, t0)) => {
                if m != m0 || t != t0 {
                    return Err(DataError::RaggedSeries(format!(
                        "line {lineno}: instance is {m} x {t}, previous instances are {m0} x {t0}"
                    )));
                }
            }
        }

        let label_str = label_tok.trim();
        let label = match label_map.get(label_str) {
            Some(&y) => y,
            None => {
                return Err(DataError::NonBinaryLabels(format!(
                    "line {lineno}: label {label_str:?} is not in the declared set {:?}",
                    declared_labels.as_deref().unwrap_or_default()
                )))
            }
        };

        let mut inst = Array2::zeros((m, t));
        for (c, channel) in values.into_iter().enumerate() {
            for (ti, v) in channel.into_iter().enumerate() {
                inst[[c, ti]] = v;
            }
        }
        instances.push(inst);
        labels.push(label);
    }

    if !in_data {
        return Err(DataError::MalformedHeader("missing @data directive".into()));
    }
    if instances.is_empty() {
        return Err(DataError::MalformedHeader(
            "no data lines after @data".into(),
        ));
    }
    TimeSeriesDataset::new(name, instances, labels)
}

/// Parses the plain CSV layout: one instance per row, `m * T` values
/// flattened channel-major, trailing 0/1 label. Lines starting with `#`
/// are ignored.
pub fn parse_csv(text: &str, layout: CsvLayout) -> Result<TimeSeriesDataset, DataError> {
    let CsvLayout {
        channels: m,
        timesteps: t,
    } = layout;
    if m < 1 || t < 2 {
        return Err(DataError::BadShape(format!(
            "layout must be at least 1 channel x 2 time steps, got {m} x {t}"
        )));
    }
    let expected = m * t + 1;
    let mut instances = Vec::new();
    let mut labels = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks = segments(raw, ',');
        if toks.len() != expected {
            return Err(DataError::ShapeMismatch {
                line: lineno,
                expected,
                found: toks.len(),
            });
        }
        let mut inst = Array2::zeros((m, t));
        for (j, &(off, tok)) in toks[..m * t].iter().enumerate() {
            inst[[j / t, j % t]] = parse_value(tok, lineno, off)?;
        }
        let (off, tok) = toks[m * t];
        let y = parse_value(tok, lineno, off)?;
        let label = if y == 0.0 {
            0u8
        } else if y == 1.0 {
            1u8
        } else {
            return Err(DataError::NonBinaryLabels(format!(
                "line {lineno}: label {} is not 0 or 1",
                tok.trim()
            )));
        };
        instances.push(inst);
        labels.push(label);
    }
    TimeSeriesDataset::new("csv", instances, labels)
}

/// Like [`parse_csv`], reading the layout from a leading `# m=<m> T=<T>` line.
pub fn parse_csv_with_header(text: &str) -> Result<TimeSeriesDataset, DataError> {
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let mut m = None;
            let mut t = None;
            for tok in rest.split_whitespace() {
                if let Some(v) = tok.strip_prefix("m=") {
                    m = v.parse::<usize>().ok();
                } else if let Some(v) = tok.strip_prefix("T=") {
                    t = v.parse::<usize>().ok();
                }
            }
            if let (Some(channels), Some(timesteps)) = (m, t) {
                return parse_csv(
                    text,
                    CsvLayout {
                        channels,
                        timesteps,
                    },
                );
            }
            continue;
        }
        break;
    }
    Err(DataError::MalformedHeader(
        "CSV has no '# m=<m> T=<T>' header line and no layout was given".into(),
    ))
}

/// Per-channel mean and population standard deviation over every instance and
/// time step of the training split. Channels with std below 1e-12 get std 1,
/// so constant channels normalize to zero instead of dividing by zero.
pub fn fit_norm(train: &TimeSeriesDataset) -> NormStats {
    let m = train.channels();
    let t = train.timesteps();
    let count = (train.len() * t) as f64;
    let mut mean = vec![0.0; m];
    for inst in train.instances() {
        for c in 0..m {
            for ti in 0..t {
                mean[c] += inst[[c, ti]];
            }
        }
    }
    for v in &mut mean {
        *v /= count;
    }
    let mut std = vec![0.0; m];
    for inst in train.instances() {
        for c in 0..m {
            for ti in 0..t {
                let d = inst[[c, ti]] - mean[c];
                std[c] += d * d;
            }
        }
    }
    for v in &mut std {
        *v = (*v / count).sqrt();
        if *v < 1e-12 {
            *v = 1.0;
        }
    }
    NormStats { mean, std }
}

/// Applies `(v - mean_c) / std_c` per channel. No clipping.
pub fn apply_norm(
    stats: &NormStats,
    dataset: &TimeSeriesDataset,
) -> Result<TimeSeriesDataset, DataError> {
    if stats.channels() != dataset.channels() {
        return Err(DataError::ChannelMismatch {
            stats: stats.channels(),
            dataset: dataset.channels(),
        });
    }
    let instances = dataset
        .instances()
        .iter()
        .map(|inst| {
            let mut out = inst.clone();
            for c in 0..out.nrows() {
                for t in 0..out.ncols() {
                    out[[c, t]] = (out[[c, t]] - stats.mean[c]) / stats.std[c];
                }
            }
            out
        })
        .collect();
    TimeSeriesDataset::new(dataset.name.clone(), instances, dataset.labels().to_vec())
}

/// Index lists behind [`stratified_split`], for callers that must map split
/// members back to per-instance side data (ground-truth masks, ids).
pub fn stratified_split_indices(
    dataset: &TimeSeriesDataset,
    test_fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>), DataError> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(DataError::BadParams(format!(
            "test fraction must be in (0, 1), got {test_fraction}"
        )));
    }
    let mut by_class: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (i, &y) in dataset.labels().iter().enumerate() {
        by_class[y as usize].push(i);
    }
    for (label, idx) in by_class.iter().enumerate() {
        if idx.len() < 2 {
            return Err(DataError::ClassTooSmall {
                label: label as u8,
                count: idx.len(),
            });
        }
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut test_idx = Vec::new();
    let mut train_idx = Vec::new();
    for idx in by_class.iter_mut() {
        idx.shuffle(&mut rng);
        let n = idx.len();
        let k = ((test_fraction * n as f64).round() as usize).clamp(1, n - 1);
        test_idx.extend_from_slice(&idx[..k]);
        train_idx.extend_from_slice(&idx[k..]);
    }
    train_idx.sort_unstable();
    test_idx.sort_unstable();
    Ok((train_idx, test_idx))
}

/// Seeded stratified split. Per-class test counts are `round(f * n_c)`
/// clamped so both splits keep at least one instance of each class;
/// proportions are preserved to within one instance.
pub fn stratified_split(
    dataset: &TimeSeriesDataset,
    test_fraction: f64,
    seed: u64,
) -> Result<(TimeSeriesDataset, TimeSeriesDataset), DataError> {
    let (train_idx, test_idx) = stratified_split_indices(dataset, test_fraction, seed)?;
    Ok((dataset.subset(&train_idx), dataset.subset(&test_idx)))
}

/// Synthetic two-class dataset with known ground truth: class 0 is unit white
/// noise, class 1 additionally carries one half-sine bump of amplitude `snr`
/// and length `bump_len` at a uniformly random position on channel 0. Labels
/// alternate 0, 1, so classes are balanced for even `n`.
pub fn synth_bump(
    n: usize,
    m: usize,
    t: usize,
    bump_len: usize,
    snr: f64,
    seed: u64,
) -> Result<(TimeSeriesDataset, GroundTruthMask), DataError> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(DataError::BadShape(format!(
            "n must be even and >= 2, got {n}"
        )));
    }
    if m < 1 || t < 4 {
        return Err(DataError::BadShape(format!(
            "need m >= 1 and T >= 4, got {m} x {t}"
        )));
    }
    if bump_len < 2 || bump_len > t / 2 {
        return Err(DataError::BadShape(format!(
            "bump_len must be in [2, T/2] = [2, {}], got {bump_len}",
            t / 2
        )));
    }
    if !snr.is_finite() {
        return Err(DataError::BadShape(format!("snr must be finite, got {snr}")));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut instances = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    let mut masks = Vec::with_capacity(n);
    for i in 0..n {
        let label = (i % 2) as u8;
        let mut inst = Array2::zeros((m, t));
        for c in 0..m {
            for ti in 0..t {
                inst[[c, ti]] = rng.sample::<f64, _>(StandardNormal);
            }
        }
        let mut mask = Array2::from_elem((m, t), false);
        if label == 1 {
            let pos = rng.random_range(0..=t - bump_len);
            for j in 0..bump_len {
                let phase = std::f64::consts::PI * (j as f64 + 0.5) / bump_len as f64;
                inst[[0, pos + j]] += snr * phase.sin();
                mask[[0, pos + j]] = true;
            }
        }
        instances.push(inst);
        labels.push(label);
        masks.push(mask);
    }
    let dataset = TimeSeriesDataset::new("synth_bump", instances, labels)?;
    Ok((dataset, GroundTruthMask { masks }))
}
