use crate::error::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Weights of the two-layer per-row preference network plus Adam
/// optimizer state. Each observation row maps through
/// `W2 · relu(W1·row + b1) + b2` to one preference score; the policy is
/// the softmax of the scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyParams {
    /// Observation width (4n or 2n).
    pub width: usize,
    /// Hidden size.
    pub hidden: usize,
    /// Row-major `hidden x width`.
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: f64,
    pub adam_m: PolicyGrad,
    pub adam_v: PolicyGrad,
    pub adam_step: u64,
}

/// A gradient (or moment buffer) with the same shape as the weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyGrad {
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: f64,
}

impl PolicyGrad {
    pub fn zeros(width: usize, hidden: usize) -> Self {
        Self {
            w1: vec![0.0; hidden * width],
            b1: vec![0.0; hidden],
            w2: vec![0.0; hidden],
            b2: 0.0,
        }
    }

    pub fn add_assign(&mut self, other: &PolicyGrad) {
        for (a, b) in self.w1.iter_mut().zip(&other.w1) {
            *a += b;
        }
        for (a, b) in self.b1.iter_mut().zip(&other.b1) {
            *a += b;
        }
        for (a, b) in self.w2.iter_mut().zip(&other.w2) {
            *a += b;
        }
        self.b2 += other.b2;
    }

    pub fn scale(&mut self, c: f64) {
        for a in self.w1.iter_mut() {
            *a *= c;
        }
        for a in self.b1.iter_mut() {
            *a *= c;
        }
        for a in self.w2.iter_mut() {
            *a *= c;
        }
        self.b2 *= c;
    }
}

/// Cached activations from a forward pass.
#[derive(Debug, Clone)]
pub struct ForwardPass {
    /// Pre-activations `W1·row + b1` per row.
    pub pre: Vec<Vec<f64>>,
    pub scores: Vec<f64>,
    pub probs: Vec<f64>,
}

impl PolicyParams {
    /// Glorot-uniform initialization (gain 1), seeded.
    pub fn init<R: Rng>(width: usize, hidden: usize, rng: &mut R) -> Self {
        let limit1 = (6.0 / (width + hidden) as f64).sqrt();
        let limit2 = (6.0 / (hidden + 1) as f64).sqrt();
        Self {
            width,
            hidden,
            w1: (0..hidden * width).map(|_| rng.gen_range(-limit1..limit1)).collect(),
            b1: vec![0.0; hidden],
            w2: (0..hidden).map(|_| rng.gen_range(-limit2..limit2)).collect(),
            b2: 0.0,
            adam_m: PolicyGrad::zeros(width, hidden),
            adam_v: PolicyGrad::zeros(width, hidden),
            adam_step: 0,
        }
    }

    fn check_width(&self, matrix: &[Vec<u32>]) -> Result<()> {
        for row in matrix {
            if row.len() != self.width {
                return Err(Error::InvalidArgument(format!(
                    "observation width {} does not match policy width {}",
                    row.len(),
                    self.width
                )));
            }
        }
        Ok(())
    }

    /// Per-row preference scores and their softmax.
    pub fn forward(&self, matrix: &[Vec<u32>]) -> Result<ForwardPass> {
        self.check_width(matrix)?;
        let mut pre = Vec::with_capacity(matrix.len());
        let mut scores = Vec::with_capacity(matrix.len());
        for row in matrix {
            let mut z = self.b1.clone();
            for (k, zk) in z.iter_mut().enumerate() {
                let w_row = &self.w1[k * self.width..(k + 1) * self.width];
                let mut acc = 0.0;
                for (w, &x) in w_row.iter().zip(row) {
                    acc += w * x as f64;
                }
                *zk += acc;
            }
            let score = self
                .w2
                .iter()
                .zip(&z)
                .map(|(w, &zk)| w * zk.max(0.0))
                .sum::<f64>()
                + self.b2;
            pre.push(z);
            scores.push(score);
        }
        let probs = softmax(&scores);
        Ok(ForwardPass { pre, scores, probs })
    }

    /// Log-probability of `action` under the current policy.
    pub fn log_prob(&self, matrix: &[Vec<u32>], action: usize) -> Result<f64> {
        let fwd = self.forward(matrix)?;
        Ok(log_softmax_at(&fwd.scores, action))
    }

    /// Gradient of `log pi(action | obs)` via backpropagation through
    /// the softmax, linear head, relu and first layer.
    pub fn grad_log_prob(&self, matrix: &[Vec<u32>], action: usize, fwd: &ForwardPass) -> PolicyGrad {
        let mut grad = PolicyGrad::zeros(self.width, self.hidden);
        // d logp / d score_r = [r == action] - prob_r
        for (r, row) in matrix.iter().enumerate() {
            let dscore = if r == action { 1.0 } else { 0.0 } - fwd.probs[r];
            if dscore == 0.0 {
                continue;
            }
            grad.b2 += dscore;
            let z = &fwd.pre[r];
            for k in 0..self.hidden {
                let a = z[k].max(0.0);
                grad.w2[k] += dscore * a;
                if z[k] > 0.0 {
                    let dz = dscore * self.w2[k];
                    grad.b1[k] += dz;
                    let w_row = &mut grad.w1[k * self.width..(k + 1) * self.width];
                    for (g, &x) in w_row.iter_mut().zip(row) {
                        *g += dz * x as f64;
                    }
                }
            }
        }
        grad
    }

    /// One Adam ascent step on the objective whose gradient is `grad`.
    pub fn adam_step(&mut self, grad: &PolicyGrad, learning_rate: f64) {
        const BETA1: f64 = 0.9;
        const BETA2: f64 = 0.999;
        const EPS: f64 = 1e-8;
        self.adam_step += 1;
        let t = self.adam_step as i32;
        let bc1 = 1.0 - BETA1.powi(t);
        let bc2 = 1.0 - BETA2.powi(t);
        let update = |param: &mut f64, g: f64, m: &mut f64, v: &mut f64| {
            *m = BETA1 * *m + (1.0 - BETA1) * g;
            *v = BETA2 * *v + (1.0 - BETA2) * g * g;
            let mhat = *m / bc1;
            let vhat = *v / bc2;
            *param += learning_rate * mhat / (vhat.sqrt() + EPS);
        };
        for i in 0..self.w1.len() {
            update(&mut self.w1[i], grad.w1[i], &mut self.adam_m.w1[i], &mut self.adam_v.w1[i]);
        }
        for i in 0..self.b1.len() {
            update(&mut self.b1[i], grad.b1[i], &mut self.adam_m.b1[i], &mut self.adam_v.b1[i]);
        }
        for i in 0..self.w2.len() {
            update(&mut self.w2[i], grad.w2[i], &mut self.adam_m.w2[i], &mut self.adam_v.w2[i]);
        }
        update(&mut self.b2, grad.b2, &mut self.adam_m.b2, &mut self.adam_v.b2);
    }
}

fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

fn log_softmax_at(scores: &[f64], idx: usize) -> f64 {
    let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lse = scores.iter().map(|s| (s - max).exp()).sum::<f64>().ln() + max;
    scores[idx] - lse
}

/// One training-batch element for the clipped surrogate.
#[derive(Debug, Clone)]
pub struct StepSample {
    pub matrix: Vec<Vec<u32>>,
    pub action: usize,
    pub advantage: f64,
    pub old_logp: f64,
}

/// Mean clipped PPO objective `min(ρ·A, clip(ρ, 1-ε, 1+ε)·A)` over the
/// batch, with `ρ = exp(logp_new - old_logp)`.
pub fn clipped_surrogate(params: &PolicyParams, batch: &[StepSample], epsilon: f64) -> Result<f64> {
    let mut total = 0.0;
    for s in batch {
        let logp = params.log_prob(&s.matrix, s.action)?;
        let ratio = (logp - s.old_logp).exp();
        let clipped = ratio.clamp(1.0 - epsilon, 1.0 + epsilon);
        total += (ratio * s.advantage).min(clipped * s.advantage);
    }
    Ok(total / batch.len().max(1) as f64)
}

/// Analytic gradient of [`clipped_surrogate`]. Steps where the clipped
/// branch is active contribute zero gradient.
pub fn clipped_surrogate_grad(
    params: &PolicyParams,
    batch: &[StepSample],
    epsilon: f64,
) -> Result<PolicyGrad> {
    let (mut grad, _) = clipped_surrogate_grad_sums(params, batch, epsilon)?;
    grad.scale(1.0 / batch.len().max(1) as f64);
    Ok(grad)
}

/// Unnormalized surrogate gradient plus the summed KL contribution
/// `Σ (old_logp - new_logp)`, both from a single forward pass per step.
/// Callers divide by the batch length.
pub fn clipped_surrogate_grad_sums(
    params: &PolicyParams,
    batch: &[StepSample],
    epsilon: f64,
) -> Result<(PolicyGrad, f64)> {
    for s in batch {
        params.check_width(&s.matrix)?;
    }
    let prepared: Vec<PreparedSample> = batch.iter().map(PreparedSample::from_step).collect();
    Ok(grad_kl_prepared(params, &prepared, epsilon))
}

/// A training step with its observation flattened to `f64` once, so the
/// repeated full-batch update passes skip conversion and allocation.
#[derive(Debug, Clone)]
pub struct PreparedSample {
    /// Row-major `nrows x width`.
    pub rows: Vec<f64>,
    pub nrows: usize,
    pub action: usize,
    pub advantage: f64,
    pub old_logp: f64,
}

impl PreparedSample {
    pub fn from_step(s: &StepSample) -> Self {
        let nrows = s.matrix.len();
        let mut rows = Vec::with_capacity(nrows * s.matrix.first().map_or(0, |r| r.len()));
        for row in &s.matrix {
            rows.extend(row.iter().map(|&x| x as f64));
        }
        Self {
            rows,
            nrows,
            action: s.action,
            advantage: s.advantage,
            old_logp: s.old_logp,
        }
    }
}

/// The hot path of training: unnormalized surrogate gradient and KL sum
/// over prepared samples, with scratch buffers reused across the batch.
/// Works in a transposed (width-major) layout so the inner loops run
/// over the contiguous hidden dimension; exponent entries that are zero
/// (padding, unused variables) are skipped outright.
pub fn grad_kl_prepared(
    params: &PolicyParams,
    batch: &[PreparedSample],
    epsilon: f64,
) -> (PolicyGrad, f64) {
    let width = params.width;
    let hidden = params.hidden;
    // W1 transposed to width x hidden; the gradient is accumulated in
    // the same layout and transposed back at the end
    let mut w1t = vec![0.0; hidden * width];
    for k in 0..hidden {
        for j in 0..width {
            w1t[j * hidden + k] = params.w1[k * width + j];
        }
    }
    let mut gw1t = vec![0.0; hidden * width];
    let mut grad = PolicyGrad::zeros(width, hidden);
    let mut kl_sum = 0.0;
    let mut z: Vec<f64> = vec![];
    let mut dz: Vec<f64> = vec![0.0; hidden];
    let mut scores: Vec<f64> = vec![];
    let mut probs: Vec<f64> = vec![];
    for s in batch {
        let nrows = s.nrows;
        z.clear();
        z.resize(nrows * hidden, 0.0);
        scores.clear();
        for r in 0..nrows {
            let row = &s.rows[r * width..(r + 1) * width];
            let zr = &mut z[r * hidden..(r + 1) * hidden];
            zr.copy_from_slice(&params.b1);
            for (j, &x) in row.iter().enumerate() {
                if x != 0.0 {
                    let col = &w1t[j * hidden..(j + 1) * hidden];
                    for (zk, w) in zr.iter_mut().zip(col) {
                        *zk += x * w;
                    }
                }
            }
            let mut score = params.b2;
            for (w, &zk) in params.w2.iter().zip(zr.iter()) {
                if zk > 0.0 {
                    score += w * zk;
                }
            }
            scores.push(score);
        }
        let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0;
        probs.clear();
        for &sc in &scores {
            let e = (sc - max).exp();
            probs.push(e);
            sum += e;
        }
        let inv = 1.0 / sum;
        for p in probs.iter_mut() {
            *p *= inv;
        }
        let logp = scores[s.action] - max - sum.ln();
        kl_sum += s.old_logp - logp;
        let ratio = (logp - s.old_logp).exp();
        let unclipped = ratio * s.advantage;
        let clipped = ratio.clamp(1.0 - epsilon, 1.0 + epsilon) * s.advantage;
        if unclipped > clipped {
            continue; // clipped branch: constant, zero gradient
        }
        // d/dtheta (rho*A) = A*rho*grad(logp), backpropagated through
        // the softmax, the linear head, relu and the first layer
        let coeff = s.advantage * ratio;
        for r in 0..nrows {
            let dscore = coeff * ((r == s.action) as u8 as f64 - probs[r]);
            grad.b2 += dscore;
            let row = &s.rows[r * width..(r + 1) * width];
            let zr = &z[r * hidden..(r + 1) * hidden];
            for k in 0..hidden {
                if zr[k] > 0.0 {
                    grad.w2[k] += dscore * zr[k];
                    let d = dscore * params.w2[k];
                    dz[k] = d;
                    grad.b1[k] += d;
                } else {
                    dz[k] = 0.0;
                }
            }
            for (j, &x) in row.iter().enumerate() {
                if x != 0.0 {
                    let g_col = &mut gw1t[j * hidden..(j + 1) * hidden];
                    for (g, d) in g_col.iter_mut().zip(&dz) {
                        *g += x * d;
                    }
                }
            }
        }
    }
    for k in 0..hidden {
        for j in 0..width {
            grad.w1[k * width + j] = gw1t[j * hidden + k];
        }
    }
    (grad, kl_sum)
}
