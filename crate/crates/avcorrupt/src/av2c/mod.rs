//! Entropy-weighted test-time adaptation math: per-sample Shannon entropy,
//! the low-entropy penalty weight, the EMA-based diversity mask, the
//! weighted-entropy objective with its analytic gradient, and the running
//! prediction average.

pub mod io;
pub mod toy;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Av2cError {
    #[error("row {row} sums to {sum}, not a probability distribution")]
    NotStochastic { row: usize, sum: f64 },
    #[error("probability batches need at least two classes, got {0}")]
    TooFewClasses(usize),
    #[error("non-finite logit at row {row}, column {col}")]
    NonFiniteLogits { row: usize, col: usize },
    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("loss diverged to a non-finite value at step {0}")]
    DivergedLoss(usize),
    #[error("matrix file schema error: {0}")]
    Schema(String),
    #[error("io failure: {0}")]
    Io(#[from] std::io::Error),
}

/// Minimal row-major f64 matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Mat, Av2cError> {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Av2cError::ShapeMismatch(format!(
                    "row {i} has {} columns, expected {c}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Mat { rows: r, cols: c, data })
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }
}

/// Row-stochastic batch of class-probability vectors.
#[derive(Clone, Debug)]
pub struct ProbBatch {
    probs: Mat,
}

impl ProbBatch {
    /// Validates non-negativity and row sums within 1e-6 of one.
    pub fn new(probs: Mat) -> Result<ProbBatch, Av2cError> {
        if probs.cols < 2 {
            return Err(Av2cError::TooFewClasses(probs.cols));
        }
        for i in 0..probs.rows {
            let row = probs.row(i);
            if row.iter().any(|&p| !(0.0..=1.0 + 1e-9).contains(&p)) {
                return Err(Av2cError::NotStochastic {
                    row: i,
                    sum: f64::NAN,
                });
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-6 {
                return Err(Av2cError::NotStochastic { row: i, sum });
            }
        }
        Ok(ProbBatch { probs })
    }

    /// Row-wise stable softmax of a logit matrix.
    pub fn from_logits(logits: &Mat) -> Result<ProbBatch, Av2cError> {
        check_finite(logits)?;
        if logits.cols < 2 {
            return Err(Av2cError::TooFewClasses(logits.cols));
        }
        let mut probs = logits.clone();
        for i in 0..probs.rows {
            softmax_in_place(probs.row_mut(i));
        }
        Ok(ProbBatch { probs })
    }

    pub fn rows(&self) -> usize {
        self.probs.rows
    }

    pub fn classes(&self) -> usize {
        self.probs.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.probs.row(i)
    }
}

fn check_finite(m: &Mat) -> Result<(), Av2cError> {
    for i in 0..m.rows {
        if let Some(col) = m.row(i).iter().position(|v| !v.is_finite()) {
            return Err(Av2cError::NonFiniteLogits { row: i, col });
        }
    }
    Ok(())
}

fn softmax_in_place(row: &mut [f64]) {
    let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for v in row.iter_mut() {
        *v = (*v - max).exp();
        sum += *v;
    }
    for v in row.iter_mut() {
        *v /= sum;
    }
}

/// Shannon entropy of one distribution, in nats; `0 ln 0 = 0`.
pub fn entropy_of(row: &[f64]) -> f64 {
    -row.iter()
        .map(|&p| if p > 0.0 { p * p.ln() } else { 0.0 })
        .sum::<f64>()
}

/// Per-row Shannon entropy of a batch, in nats.
pub fn shannon_entropy(batch: &ProbBatch) -> Vec<f64> {
    (0..batch.rows()).map(|i| entropy_of(batch.row(i))).collect()
}

/// Adaptation hyperparameters.
#[derive(Clone, Copy, Debug)]
pub struct Av2cConfig {
    /// Entropy cutoff H1 in nats; samples at or above it are excluded.
    pub entropy_threshold: f64,
    /// Cosine-similarity cutoff of the diversity filter.
    pub sim_threshold: f64,
    /// EMA momentum for the running prediction average.
    pub ema_momentum: f64,
}

pub const DEFAULT_ENTROPY_FRAC: f64 = 0.4;
pub const DEFAULT_SIM_THRESHOLD: f64 = 0.05;
pub const DEFAULT_EMA_MOMENTUM: f64 = 0.9;

impl Av2cConfig {
    /// Published defaults for a `classes`-way head:
    /// `H1 = 0.4 ln C`, similarity cutoff 0.05, momentum 0.9.
    pub fn for_classes(classes: usize) -> Av2cConfig {
        Av2cConfig {
            entropy_threshold: DEFAULT_ENTROPY_FRAC * (classes as f64).ln(),
            sim_threshold: DEFAULT_SIM_THRESHOLD,
            ema_momentum: DEFAULT_EMA_MOMENTUM,
        }
    }

    /// Defaults with a custom entropy fraction (`H1 = frac * ln C`).
    pub fn with_entropy_frac(classes: usize, frac: f64) -> Av2cConfig {
        Av2cConfig {
            entropy_threshold: frac * (classes as f64).ln(),
            ..Av2cConfig::for_classes(classes)
        }
    }
}

/// Running adaptation state: the prediction EMA and a step counter.
#[derive(Clone, Debug, Default)]
pub struct Av2cState {
    pub ema: Option<Vec<f64>>,
    pub step: u64,
}

/// Entropy penalty weight: `exp(H1 - h)` below the threshold, zero at and
/// above it. Continuous from the left with limit 1 at the threshold.
pub fn entropy_weight(h: f64, cfg: &Av2cConfig) -> f64 {
    if h < cfg.entropy_threshold {
        (cfg.entropy_threshold - h).exp()
    } else {
        0.0
    }
}

/// Diversity filter: keep samples whose prediction is sufficiently unlike
/// the running average. Before the first EMA update everything passes.
pub fn diversity_mask(batch: &ProbBatch, state: &Av2cState, cfg: &Av2cConfig) -> Vec<bool> {
    match &state.ema {
        None => vec![true; batch.rows()],
        Some(ema) => (0..batch.rows())
            .map(|i| cosine(batch.row(i), ema) < cfg.sim_threshold)
            .collect(),
    }
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    dot / (na * nb)
}

/// Per-sample weight: entropy penalty times the diversity indicator.
pub fn combined_weights(batch: &ProbBatch, state: &Av2cState, cfg: &Av2cConfig) -> Vec<f64> {
    let entropies = shannon_entropy(batch);
    let mask = diversity_mask(batch, state, cfg);
    entropies
        .iter()
        .zip(mask)
        .map(|(&h, keep)| if keep { entropy_weight(h, cfg) } else { 0.0 })
        .collect()
}

/// Loss evaluation: value, analytic gradient w.r.t. the logits, and the
/// weights used (returned for auditing).
#[derive(Clone, Debug)]
pub struct LossOutput {
    pub loss: f64,
    pub grad: Mat,
    pub weights: Vec<f64>,
}

/// Mean weighted entropy over the batch with its analytic logit gradient.
///
/// `loss = (1/B) sum_i w_i H_i` with `p = softmax(logits)` row-wise and the
/// weights treated as detached constants;
/// `grad[i][k] = (w_i / B) * (-p[i][k] * (ln p[i][k] + H_i))`.
pub fn weighted_entropy_loss(
    logits: &Mat,
    state: &Av2cState,
    cfg: &Av2cConfig,
) -> Result<LossOutput, Av2cError> {
    let batch = ProbBatch::from_logits(logits)?;
    let weights = combined_weights(&batch, state, cfg);
    let b = logits.rows as f64;
    let mut grad = Mat::zeros(logits.rows, logits.cols);
    let mut loss = 0.0;
    for i in 0..logits.rows {
        if weights[i] == 0.0 {
            continue; // zero weight contributes neither loss nor gradient
        }
        let p = batch.row(i);
        let h = entropy_of(p);
        loss += weights[i] * h / b;
        let scale = weights[i] / b;
        for (g, &pk) in grad.row_mut(i).iter_mut().zip(p) {
            *g = if pk > 0.0 {
                scale * (-pk * (pk.ln() + h))
            } else {
                0.0
            };
        }
    }
    Ok(LossOutput {
        loss,
        grad,
        weights,
    })
}

/// Advances the prediction EMA with the mean probability of the selected
/// samples: the first update adopts the mean directly, later updates blend
/// `m * ema + (1 - m) * mean`. With nothing selected only the step advances.
pub fn ema_update(
    state: &Av2cState,
    batch: &ProbBatch,
    selected: &[bool],
    cfg: &Av2cConfig,
) -> Av2cState {
    assert_eq!(selected.len(), batch.rows(), "mask length mismatch");
    let chosen: Vec<usize> = (0..batch.rows()).filter(|&i| selected[i]).collect();
    if chosen.is_empty() {
        return Av2cState {
            ema: state.ema.clone(),
            step: state.step + 1,
        };
    }
    let classes = batch.classes();
    let mut mean = vec![0.0f64; classes];
    for &i in &chosen {
        for (m, &p) in mean.iter_mut().zip(batch.row(i)) {
            *m += p;
        }
    }
    for m in &mut mean {
        *m /= chosen.len() as f64;
    }
    let ema = match &state.ema {
        None => mean,
        Some(old) => {
            let m = cfg.ema_momentum;
            old.iter()
                .zip(&mean)
                .map(|(&o, &new)| m * o + (1.0 - m) * new)
                .collect()
        }
    };
    Av2cState {
        ema: Some(ema),
        step: state.step + 1,
    }
}
