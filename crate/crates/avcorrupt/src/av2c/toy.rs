//! Desk-scale adaptation harness: a linear softmax head over 2-D inputs
//! stands in for the adaptable attention parameters of a full encoder, and
//! a fixed-seed covariate-shift fixture exercises the whole selection /
//! weighting / update loop end to end.

use super::{
    ema_update, weighted_entropy_loss, Av2cConfig, Av2cError, Av2cState, Mat, ProbBatch,
};
use crate::rng::RngStream;

/// Linear softmax classifier: `logits = x W^T + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearHead {
    /// Row-major `classes x dim`.
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
    pub classes: usize,
    pub dim: usize,
}

impl LinearHead {
    pub fn zeros(classes: usize, dim: usize) -> LinearHead {
        LinearHead {
            weights: vec![0.0; classes * dim],
            bias: vec![0.0; classes],
            classes,
            dim,
        }
    }

    /// Forward pass over a `B x dim` input matrix.
    pub fn logits(&self, inputs: &Mat) -> Mat {
        assert_eq!(inputs.cols, self.dim);
        let mut out = Mat::zeros(inputs.rows, self.classes);
        for i in 0..inputs.rows {
            let x = inputs.row(i);
            for c in 0..self.classes {
                let w = &self.weights[c * self.dim..(c + 1) * self.dim];
                out.row_mut(i)[c] =
                    w.iter().zip(x).map(|(wj, xj)| wj * xj).sum::<f64>() + self.bias[c];
            }
        }
        out
    }

    /// Applies one gradient-descent step given the loss gradient w.r.t. the
    /// logits: `dW = g^T x`, `db = sum_i g_i`.
    pub fn descend(&mut self, inputs: &Mat, grad_logits: &Mat, lr: f64) {
        assert_eq!(inputs.rows, grad_logits.rows);
        for i in 0..inputs.rows {
            let x = inputs.row(i);
            let g = grad_logits.row(i);
            for c in 0..self.classes {
                if g[c] == 0.0 {
                    continue;
                }
                for j in 0..self.dim {
                    self.weights[c * self.dim + j] -= lr * g[c] * x[j];
                }
                self.bias[c] -= lr * g[c];
            }
        }
    }

    pub fn accuracy(&self, inputs: &Mat, labels: &[usize]) -> f64 {
        assert_eq!(inputs.rows, labels.len());
        let logits = self.logits(inputs);
        let correct = (0..inputs.rows)
            .filter(|&i| {
                let row = logits.row(i);
                let mut best = 0;
                for (c, &z) in row.iter().enumerate().skip(1) {
                    if z > row[best] {
                        best = c;
                    }
                }
                best == labels[i]
            })
            .count();
        100.0 * correct as f64 / inputs.rows as f64
    }

    /// Supervised cross-entropy pre-training, used only to build the source
    /// model of a fixture (never inside the adaptation loop).
    pub fn fit_source(&mut self, inputs: &Mat, labels: &[usize], lr: f64, epochs: usize) {
        let b = inputs.rows as f64;
        for _ in 0..epochs {
            let logits = self.logits(inputs);
            let probs = ProbBatch::from_logits(&logits).expect("finite training logits");
            let mut grad = Mat::zeros(inputs.rows, self.classes);
            for i in 0..inputs.rows {
                for c in 0..self.classes {
                    let indicator = if labels[i] == c { 1.0 } else { 0.0 };
                    grad.row_mut(i)[c] = (probs.row(i)[c] - indicator) / b;
                }
            }
            self.descend(inputs, &grad, lr);
        }
    }
}

/// One step of the adaptation trace.
#[derive(Clone, Copy, Debug)]
pub struct TraceRow {
    pub step: usize,
    pub accuracy: f64,
    pub n_selected: usize,
    pub loss: f64,
}

/// Runs the adaptation loop: forward, weight, descend, EMA — labels are
/// used only to report held-out accuracy, never to drive the update.
pub fn toy_adapt(
    head: &mut LinearHead,
    batches: &[Mat],
    eval_inputs: &Mat,
    eval_labels: &[usize],
    cfg: &Av2cConfig,
    lr: f64,
    steps: usize,
) -> Result<Vec<TraceRow>, Av2cError> {
    assert!(!batches.is_empty(), "empty adaptation stream");
    let mut state = Av2cState::default();
    let mut trace = Vec::with_capacity(steps);
    for step in 0..steps {
        let inputs = &batches[step % batches.len()];
        let logits = head.logits(inputs);
        let out = weighted_entropy_loss(&logits, &state, cfg)?;
        if !out.loss.is_finite() {
            return Err(Av2cError::DivergedLoss(step));
        }
        head.descend(inputs, &out.grad, lr);
        let probs = ProbBatch::from_logits(&logits)?;
        let selected: Vec<bool> = out.weights.iter().map(|&w| w > 0.0).collect();
        state = ema_update(&state, &probs, &selected, cfg);
        trace.push(TraceRow {
            step,
            accuracy: head.accuracy(eval_inputs, eval_labels),
            n_selected: selected.iter().filter(|&&s| s).count(),
            loss: out.loss,
        });
    }
    Ok(trace)
}

/// Two Gaussian blobs, a source-trained head, and a rotated test stream.
///
/// The shift relocates both class means by a rotation about the origin
/// (class geometry preserved, decision boundary invalidated), which is the
/// regime where unsupervised entropy minimization can recover accuracy.
#[derive(Clone, Debug)]
pub struct ShiftFixture {
    pub head: LinearHead,
    pub batches: Vec<Mat>,
    pub eval_inputs: Mat,
    pub eval_labels: Vec<usize>,
}

pub const FIXTURE_BATCH: usize = 16;
pub const FIXTURE_SEPARATION: f64 = 2.2;
pub const FIXTURE_NOISE: f64 = 0.55;
pub const FIXTURE_SHIFT_DEG: f64 = 75.0;

impl ShiftFixture {
    /// Builds the fixture for a seed: trains the source head on clean blobs,
    /// then emits `batch_count` shifted batches plus a held-out eval set.
    pub fn generate(seed: u64, batch_count: usize, batch_size: usize) -> ShiftFixture {
        let mut rng = RngStream::from_fields([b"av2c-toy".as_slice(), &seed.to_le_bytes()]);
        let mean = |class: usize| {
            if class == 0 {
                [-FIXTURE_SEPARATION, 0.0]
            } else {
                [FIXTURE_SEPARATION, 0.0]
            }
        };

        // Source training set and head.
        let n_train = 400;
        let mut train_rows = Vec::with_capacity(n_train);
        let mut train_labels = Vec::with_capacity(n_train);
        for i in 0..n_train {
            let class = i % 2;
            let m = mean(class);
            train_rows.push(vec![
                m[0] + FIXTURE_NOISE * rng.standard_normal(),
                m[1] + FIXTURE_NOISE * rng.standard_normal(),
            ]);
            train_labels.push(class);
        }
        let train = Mat::from_rows(train_rows).expect("rectangular");
        let mut head = LinearHead::zeros(2, 2);
        head.fit_source(&train, &train_labels, 0.5, 150);

        // Covariate shift: rotate the class means.
        let theta = FIXTURE_SHIFT_DEG.to_radians();
        let (sin, cos) = theta.sin_cos();
        let shifted_mean = |class: usize| {
            let m = mean(class);
            [m[0] * cos - m[1] * sin, m[0] * sin + m[1] * cos]
        };
        let draw_shifted = |rng: &mut RngStream, class: usize| {
            let m = shifted_mean(class);
            vec![
                m[0] + FIXTURE_NOISE * rng.standard_normal(),
                m[1] + FIXTURE_NOISE * rng.standard_normal(),
            ]
        };

        let batches = (0..batch_count)
            .map(|_| {
                let rows = (0..batch_size)
                    .map(|_| {
                        let class = rng.below(2);
                        draw_shifted(&mut rng, class)
                    })
                    .collect();
                Mat::from_rows(rows).expect("rectangular")
            })
            .collect();

        let n_eval = 600;
        let mut eval_rows = Vec::with_capacity(n_eval);
        let mut eval_labels = Vec::with_capacity(n_eval);
        for i in 0..n_eval {
            let class = i % 2;
            eval_rows.push(draw_shifted(&mut rng, class));
            eval_labels.push(class);
        }
        ShiftFixture {
            head,
            batches,
            eval_inputs: Mat::from_rows(eval_rows).expect("rectangular"),
            eval_labels,
        }
    }

    /// Adaptation config for this two-class fixture. The entropy threshold
    /// follows the `0.4 ln C` default. The diversity cutoff is raised to
    /// 1.0: with two classes the cosine similarity between any probability
    /// vector and the running mean exceeds 0.7, so the published 0.05
    /// cutoff would permanently exclude every sample after the first batch;
    /// a cutoff of 1.0 keeps the filter structurally present but
    /// non-binding at C = 2 (the n_selected trace still reports it).
    pub fn recommended_config() -> Av2cConfig {
        Av2cConfig {
            sim_threshold: 1.0,
            ..Av2cConfig::for_classes(2)
        }
    }

    pub fn frozen_accuracy(&self) -> f64 {
        self.head.accuracy(&self.eval_inputs, &self.eval_labels)
    }
}
