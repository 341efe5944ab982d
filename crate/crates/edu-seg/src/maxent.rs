//! Four-way regularized maximum-entropy classifier.
//!
//! Scores are linear in the active indicator features, `s_b = Σ_i w_{i,b}`,
//! and probabilities come from a max-shifted softmax over the four boundary
//! labels. Training maximizes the L2-penalized conditional log-likelihood
//!
//! ```text
//! Σ_j log P(b_j | t_j)  −  Σ_{i,b} w_{i,b}² / (2 σ²)
//! ```
//!
//! with a limited-memory quasi-Newton ascent from `w = 0`. The objective is
//! concave, every accepted step is non-decreasing (backtracking line
//! search), and iteration stops when the relative objective change falls
//! below the configured tolerance.
//!
//! Model files are UTF-8 text: a version line, the fixed label order, the
//! feature count, then one name line and one tab-separated weight line per
//! feature. Weights are rendered with 17 significant digits so reloading
//! is bit-exact.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use thiserror::Error;

use crate::corpus::BoundaryLabel;
use crate::features::{FeatureSpace, FeatureVector};

const NUM_LABELS: usize = 4;
const MODEL_MAGIC: &str = "edu-seg-model v1";
const LABELS_LINE: &str = "labels B E BE I";

#[derive(Debug, Error)]
pub enum MaxEntError {
    #[error("feature id {id} out of range for space of size {size}")]
    FeatureOutOfRange { id: u32, size: usize },
    #[error("training data is empty")]
    EmptyTrainingData,
    #[error("invalid training config: {0}")]
    InvalidConfig(String),
    #[error("objective became non-finite at iteration {iteration}")]
    NonFiniteObjective { iteration: usize },
    #[error("model file line {line}: {msg}")]
    ModelFormat { line: usize, msg: String },
    #[error("unsupported model version `{found}`")]
    VersionMismatch { found: String },
    #[error("model file is truncated")]
    Truncated,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Training hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    /// Variance of the Gaussian prior; larger means weaker regularization.
    pub l2_sigma2: f64,
    pub max_iterations: usize,
    /// Relative objective change below which training stops.
    pub tolerance: f64,
}

impl Default for TrainConfig {
    fn default() -> TrainConfig {
        TrainConfig { l2_sigma2: 1.0, max_iterations: 500, tolerance: 1e-6 }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<(), MaxEntError> {
        if !(self.l2_sigma2 > 0.0) {
            return Err(MaxEntError::InvalidConfig(format!(
                "l2_sigma2 must be positive, got {}",
                self.l2_sigma2
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(MaxEntError::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }
}

/// One training example: active features plus the gold label.
#[derive(Debug, Clone)]
pub struct LabeledInstance {
    pub vector: FeatureVector,
    pub label: BoundaryLabel,
}

/// Trained classifier: a feature space and one weight per (feature, label).
#[derive(Debug, Clone)]
pub struct MaxEntModel {
    space: FeatureSpace,
    /// Row-major `m × 4`, indexed `id * 4 + label`.
    weights: Vec<f64>,
}

impl MaxEntModel {
    /// A model with all-zero weights (uniform predictions).
    pub fn zeros(space: FeatureSpace) -> MaxEntModel {
        let weights = vec![0.0; space.len() * NUM_LABELS];
        MaxEntModel { space, weights }
    }

    pub fn space(&self) -> &FeatureSpace {
        &self.space
    }

    pub fn num_features(&self) -> usize {
        self.space.len()
    }

    pub fn weight(&self, id: u32, label: BoundaryLabel) -> f64 {
        self.weights[id as usize * NUM_LABELS + label.index()]
    }

    pub fn set_weight(&mut self, id: u32, label: BoundaryLabel, value: f64) {
        self.weights[id as usize * NUM_LABELS + label.index()] = value;
    }

    fn scores(&self, vector: &FeatureVector) -> Result<[f64; 4], MaxEntError> {
        let mut scores = [0.0f64; NUM_LABELS];
        for &id in vector.ids() {
            let row = id as usize * NUM_LABELS;
            if row + NUM_LABELS > self.weights.len() {
                return Err(MaxEntError::FeatureOutOfRange { id, size: self.num_features() });
            }
            for (b, s) in scores.iter_mut().enumerate() {
                *s += self.weights[row + b];
            }
        }
        Ok(scores)
    }

    /// Probability distribution over the four labels, in
    /// [`BoundaryLabel::ALL`] order.
    pub fn predict_proba(&self, vector: &FeatureVector) -> Result<[f64; 4], MaxEntError> {
        let scores = self.scores(vector)?;
        Ok(softmax(&scores))
    }

    /// The argmax label; ties break toward the first label in the fixed
    /// order.
    pub fn decode(&self, vector: &FeatureVector) -> Result<BoundaryLabel, MaxEntError> {
        let scores = self.scores(vector)?;
        let mut best = 0;
        for (b, &s) in scores.iter().enumerate().skip(1) {
            if s > scores[best] {
                best = b;
            }
        }
        Ok(BoundaryLabel::ALL[best])
    }

    /// Writes the model in the text format described in the module docs.
    pub fn save<W: Write>(&self, mut writer: W) -> std::io::Result<()> {
        writeln!(writer, "{MODEL_MAGIC}")?;
        writeln!(writer, "{LABELS_LINE}")?;
        writeln!(writer, "features {}", self.num_features())?;
        for (id, name) in self.space.names().enumerate() {
            writeln!(writer, "{name}")?;
            let row = id * NUM_LABELS;
            let rendered: Vec<String> =
                self.weights[row..row + NUM_LABELS].iter().map(|w| format!("{w:.16e}")).collect();
            writeln!(writer, "{}", rendered.join("\t"))?;
        }
        Ok(())
    }

    /// Reads a model saved by [`MaxEntModel::save`].
    pub fn load<R: BufRead>(reader: R) -> Result<MaxEntModel, MaxEntError> {
        let mut lines = reader
            .lines()
            .enumerate()
            .map(|(no, r)| r.map(|line| (no + 1, line)));
        let mut take = || -> Result<(usize, String), MaxEntError> {
            match lines.next() {
                Some(Ok(pair)) => Ok(pair),
                Some(Err(e)) => Err(MaxEntError::Io(e)),
                None => Err(MaxEntError::Truncated),
            }
        };

        let (_, magic) = take()?;
        if magic.trim_end() != MODEL_MAGIC {
            return Err(MaxEntError::VersionMismatch { found: magic.trim_end().to_string() });
        }
        let (no, labels) = take()?;
        if labels.trim_end() != LABELS_LINE {
            return Err(MaxEntError::ModelFormat {
                line: no,
                msg: format!("expected `{LABELS_LINE}`, found `{labels}`"),
            });
        }
        let (no, features) = take()?;
        let count: usize = features
            .trim_end()
            .strip_prefix("features ")
            .and_then(|c| c.parse().ok())
            .ok_or_else(|| MaxEntError::ModelFormat {
                line: no,
                msg: format!("expected `features <m>`, found `{features}`"),
            })?;

        let mut space = FeatureSpace::new();
        let mut weights = Vec::with_capacity(count * NUM_LABELS);
        for _ in 0..count {
            let (no, name) = take()?;
            let name = name.trim_end();
            if name.is_empty() {
                return Err(MaxEntError::ModelFormat { line: no, msg: "empty feature name".into() });
            }
            if space.id(name).is_some() {
                return Err(MaxEntError::ModelFormat {
                    line: no,
                    msg: format!("duplicate feature name `{name}`"),
                });
            }
            space.intern(name);
            let (no, row) = take()?;
            let cols: Vec<&str> = row.trim_end().split('\t').collect();
            if cols.len() != NUM_LABELS {
                return Err(MaxEntError::ModelFormat {
                    line: no,
                    msg: format!("expected {NUM_LABELS} weights, found {}", cols.len()),
                });
            }
            for col in cols {
                let w: f64 = col.parse().map_err(|_| MaxEntError::ModelFormat {
                    line: no,
                    msg: format!("bad weight `{col}`"),
                })?;
                if !w.is_finite() {
                    return Err(MaxEntError::ModelFormat {
                        line: no,
                        msg: format!("non-finite weight `{col}`"),
                    });
                }
                weights.push(w);
            }
        }
        for extra in lines {
            let (no, line) = extra.map_err(MaxEntError::Io)?;
            if !line.trim().is_empty() {
                return Err(MaxEntError::ModelFormat {
                    line: no,
                    msg: "trailing content after weight table".into(),
                });
            }
        }
        space.freeze();
        Ok(MaxEntModel { space, weights })
    }
}

fn softmax(scores: &[f64; 4]) -> [f64; 4] {
    let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut out = [0.0f64; NUM_LABELS];
    let mut sum = 0.0;
    for (b, &s) in scores.iter().enumerate() {
        let e = (s - max).exp();
        out[b] = e;
        sum += e;
    }
    for p in &mut out {
        *p /= sum;
    }
    out
}

fn log_sum_exp(scores: &[f64; 4]) -> f64 {
    let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    max + scores.iter().map(|&s| (s - max).exp()).sum::<f64>().ln()
}

fn check_instances(data: &[LabeledInstance], size: usize) -> Result<(), MaxEntError> {
    for inst in data {
        for &id in inst.vector.ids() {
            if id as usize >= size {
                return Err(MaxEntError::FeatureOutOfRange { id, size });
            }
        }
    }
    Ok(())
}

/// Penalized log-likelihood only; used by the line search.
fn objective_at(weights: &[f64], data: &[LabeledInstance], l2_sigma2: f64) -> f64 {
    let mut obj = 0.0;
    for inst in data {
        let mut scores = [0.0f64; NUM_LABELS];
        for &id in inst.vector.ids() {
            let row = id as usize * NUM_LABELS;
            for (b, s) in scores.iter_mut().enumerate() {
                *s += weights[row + b];
            }
        }
        obj += scores[inst.label.index()] - log_sum_exp(&scores);
    }
    obj - weights.iter().map(|w| w * w).sum::<f64>() / (2.0 * l2_sigma2)
}

/// Penalized log-likelihood and its gradient. The gradient entry for
/// (feature, label) is `observed − expected − w/σ²`.
fn objective_and_gradient_at(
    weights: &[f64],
    data: &[LabeledInstance],
    l2_sigma2: f64,
) -> (f64, Vec<f64>) {
    let mut obj = 0.0;
    let mut grad = vec![0.0f64; weights.len()];
    for inst in data {
        let mut scores = [0.0f64; NUM_LABELS];
        for &id in inst.vector.ids() {
            let row = id as usize * NUM_LABELS;
            for (b, s) in scores.iter_mut().enumerate() {
                *s += weights[row + b];
            }
        }
        let lse = log_sum_exp(&scores);
        obj += scores[inst.label.index()] - lse;
        let mut probs = [0.0f64; NUM_LABELS];
        for (b, &s) in scores.iter().enumerate() {
            probs[b] = (s - lse).exp();
        }
        for &id in inst.vector.ids() {
            let row = id as usize * NUM_LABELS;
            grad[row + inst.label.index()] += 1.0;
            for (b, &p) in probs.iter().enumerate() {
                grad[row + b] -= p;
            }
        }
    }
    for (g, &w) in grad.iter_mut().zip(weights) {
        *g -= w / l2_sigma2;
    }
    obj -= weights.iter().map(|w| w * w).sum::<f64>() / (2.0 * l2_sigma2);
    (obj, grad)
}

/// Evaluates the penalized objective and its gradient at the model's
/// current weights.
pub fn objective_and_gradient(
    model: &MaxEntModel,
    data: &[LabeledInstance],
    config: &TrainConfig,
) -> Result<(f64, Vec<f64>), MaxEntError> {
    config.validate()?;
    if data.is_empty() {
        return Err(MaxEntError::EmptyTrainingData);
    }
    check_instances(data, model.num_features())?;
    Ok(objective_and_gradient_at(&model.weights, data, config.l2_sigma2))
}

/// Convergence record returned alongside a trained model.
#[derive(Debug, Clone)]
pub struct TrainReport {
    pub iterations: usize,
    pub objective: f64,
    pub gradient_max_norm: f64,
    /// Objective after the initial point and after each accepted step;
    /// non-decreasing by construction.
    pub objective_trace: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
}

const LBFGS_MEMORY: usize = 7;
const ARMIJO_C1: f64 = 1e-4;

/// L-BFGS two-loop recursion; returns an ascent direction for the stored
/// curvature pairs applied to the current gradient.
fn lbfgs_direction(grad: &[f64], history: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q = grad.to_vec();
    let mut alphas = Vec::with_capacity(history.len());
    for (s, y, rho) in history.iter().rev() {
        let alpha = rho * dot(s, &q);
        for (qi, yi) in q.iter_mut().zip(y) {
            *qi -= alpha * yi;
        }
        alphas.push(alpha);
    }
    if let Some((s, y, _)) = history.back() {
        let gamma = dot(s, y) / dot(y, y);
        if gamma.is_finite() && gamma > 0.0 {
            for qi in &mut q {
                *qi *= gamma;
            }
        }
    }
    for ((s, y, rho), alpha) in history.iter().zip(alphas.into_iter().rev()) {
        let beta = rho * dot(y, &q);
        for (qi, si) in q.iter_mut().zip(s) {
            *qi += (alpha - beta) * si;
        }
    }
    q
}

/// Trains a model by monotone ascent on the penalized log-likelihood,
/// starting from zero weights. Stops when the relative objective change
/// drops below `config.tolerance` or after `config.max_iterations` steps.
pub fn train(
    data: &[LabeledInstance],
    space: FeatureSpace,
    config: &TrainConfig,
) -> Result<(MaxEntModel, TrainReport), MaxEntError> {
    config.validate()?;
    if data.is_empty() {
        return Err(MaxEntError::EmptyTrainingData);
    }
    check_instances(data, space.len())?;

    let dim = space.len() * NUM_LABELS;
    let mut weights = vec![0.0f64; dim];
    let (mut obj, mut grad) = objective_and_gradient_at(&weights, data, config.l2_sigma2);
    if !obj.is_finite() {
        return Err(MaxEntError::NonFiniteObjective { iteration: 0 });
    }
    let mut trace = vec![obj];
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut iterations = 0;

    'outer: for iter in 0..config.max_iterations {
        let mut direction = lbfgs_direction(&grad, &history);
        let mut slope = dot(&grad, &direction);
        if !(slope > 0.0) {
            // Curvature information went stale; fall back to steepest ascent.
            history.clear();
            direction = grad.clone();
            slope = dot(&grad, &direction);
            if !(slope > 0.0) {
                break; // gradient is numerically zero
            }
        }

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let candidate: Vec<f64> =
                weights.iter().zip(&direction).map(|(w, d)| w + step * d).collect();
            let cand_obj = objective_at(&candidate, data, config.l2_sigma2);
            if !cand_obj.is_finite() {
                step *= 0.5;
                continue;
            }
            if cand_obj >= obj + ARMIJO_C1 * step * slope {
                accepted = Some((candidate, cand_obj));
                break;
            }
            step *= 0.5;
        }
        let Some((new_weights, new_obj)) = accepted else {
            break 'outer; // no improving step exists at machine precision
        };
        if !new_obj.is_finite() {
            return Err(MaxEntError::NonFiniteObjective { iteration: iter + 1 });
        }

        let (_, new_grad) = {
            let pair = objective_and_gradient_at(&new_weights, data, config.l2_sigma2);
            (pair.0, pair.1)
        };
        let s: Vec<f64> = new_weights.iter().zip(&weights).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = new_grad.iter().zip(&grad).map(|(a, b)| b - a).collect();
        // Curvature pairs are stored for the equivalent minimization of
        // -objective, hence the sign flip in y.
        let sy = dot(&s, &y);
        if sy > 1e-12 {
            if history.len() == LBFGS_MEMORY {
                history.pop_front();
            }
            history.push_back((s, y, 1.0 / sy));
        }

        let rel_change = (new_obj - obj).abs() / obj.abs().max(new_obj.abs()).max(1.0);
        weights = new_weights;
        grad = new_grad;
        obj = new_obj;
        trace.push(obj);
        iterations = iter + 1;
        if rel_change < config.tolerance {
            break;
        }
    }

    let report = TrainReport {
        iterations,
        objective: obj,
        gradient_max_norm: max_abs(&grad),
        objective_trace: trace,
    };
    Ok((MaxEntModel { space, weights }, report))
}
