//! Component-wise cross-entropy training on implicit feedback.
//!
//! Each score component carries its own binary cross-entropy term, so the
//! per-component error signal is simply `sigmoid(c) - y`; the analytic
//! gradients chain that through the bilinear interaction forms (and through
//! the quaternion head for QCF+). Negative examples are re-sampled every
//! epoch at `neg_ratio` per positive. L2 regularization is sparse: each
//! optimizer step penalizes exactly the embedding rows the batch touched
//! (plus the head weights, which every example touches).
//!
//! Training is single-writer and, with a fixed seed, bit-reproducible: the
//! shuffle and negative draws come from a per-epoch sub-stream of the master
//! seed, and batch gradients accumulate in a fixed order.

#![allow(clippy::needless_range_loop)]

use std::collections::BTreeMap;
use std::time::Instant;

use thiserror::Error;

use crate::data::{Split, TrainSet};
use crate::eval;
use crate::hypercomplex::{stable_sigmoid, Quaternion};
use crate::matrix::{axpy, Matrix};
use crate::model::{Model, ModelError, ModelKind, ScoreComponents};
use crate::rng;

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("empty batch")]
    EmptyBatch,
    #[error("empty training set")]
    EmptyTrainSet,
    #[error("gradient/state shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("validation failed: {0}")]
    Validation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerKind {
    Sgd,
    Adam,
}

impl std::str::FromStr for OptimizerKind {
    type Err = TrainError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sgd" => Ok(OptimizerKind::Sgd),
            "adam" => Ok(OptimizerKind::Adam),
            other => Err(TrainError::InvalidConfig(format!("unknown optimizer {other:?}"))),
        }
    }
}

impl std::fmt::Display for OptimizerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OptimizerKind::Sgd => "sgd",
            OptimizerKind::Adam => "adam",
        })
    }
}

/// Training hyperparameters.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub l2_lambda: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub neg_ratio: usize,
    pub optimizer: OptimizerKind,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.001,
            l2_lambda: 0.001,
            batch_size: 256,
            epochs: 30,
            neg_ratio: 4,
            optimizer: OptimizerKind::Adam,
            seed: 42,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), TrainError> {
        if !self.learning_rate.is_finite() || self.learning_rate <= 0.0 {
            return Err(TrainError::InvalidConfig("learning_rate must be > 0".into()));
        }
        if self.l2_lambda < 0.0 {
            return Err(TrainError::InvalidConfig("l2_lambda must be >= 0".into()));
        }
        if self.batch_size < 1 {
            return Err(TrainError::InvalidConfig("batch_size must be >= 1".into()));
        }
        if self.neg_ratio < 1 {
            return Err(TrainError::InvalidConfig("neg_ratio must be >= 1".into()));
        }
        Ok(())
    }
}

/// One training example; label is 1.0 for observed pairs, 0.0 for sampled
/// negatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example {
    pub user: u32,
    pub item: u32,
    pub label: f64,
}

/// Component-wise cross-entropy of one pair, summed over components.
/// Evaluated in the log-sum-exp-stable form, so saturated components cost
/// ~0 or ~|c| instead of producing NaN.
pub fn component_loss(comps: &ScoreComponents, label: f64) -> f64 {
    let (vals, n) = comps.to_array();
    let mut loss = 0.0;
    for &x in vals.iter().take(n) {
        loss += x.max(0.0) - x * label + (-x.abs()).exp().ln_1p();
    }
    loss
}

/// Quaternion-head gradient block (also reused as the optimizer's moment
/// storage): four matrices for the hidden layer, four for the output unit.
#[derive(Debug, Clone, PartialEq)]
pub struct HeadGradients {
    pub hidden: [Matrix; 4],
    pub output: [Matrix; 4],
}

impl HeadGradients {
    fn zeros_like(model: &Model) -> Option<Self> {
        model.head.as_ref().map(|head| Self {
            hidden: std::array::from_fn(|_| {
                Matrix::zeros(head.hidden.out_dim(), head.hidden.in_dim())
            }),
            output: std::array::from_fn(|_| {
                Matrix::zeros(head.output.out_dim(), head.output.in_dim())
            }),
        })
    }
}

/// Sparse per-part gradients of a batch: touched embedding rows plus the
/// dense head block. Row maps are ordered, so accumulation and application
/// are deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchGradients {
    dim: usize,
    pub user: Vec<BTreeMap<u32, Vec<f64>>>,
    pub item: Vec<BTreeMap<u32, Vec<f64>>>,
    pub head: Option<HeadGradients>,
}

impl BatchGradients {
    pub fn zeros_for(model: &Model) -> Self {
        let parts = model.kind().parts();
        Self {
            dim: model.dim(),
            user: vec![BTreeMap::new(); parts],
            item: vec![BTreeMap::new(); parts],
            head: HeadGradients::zeros_like(model),
        }
    }

    pub fn user_grad(&self, part: usize, row: u32) -> Option<&[f64]> {
        self.user[part].get(&row).map(Vec::as_slice)
    }

    pub fn item_grad(&self, part: usize, row: u32) -> Option<&[f64]> {
        self.item[part].get(&row).map(Vec::as_slice)
    }

    fn user_row_mut(&mut self, part: usize, row: u32) -> &mut [f64] {
        self.user[part].entry(row).or_insert_with(|| vec![0.0; self.dim])
    }

    fn item_row_mut(&mut self, part: usize, row: u32) -> &mut [f64] {
        self.item[part].entry(row).or_insert_with(|| vec![0.0; self.dim])
    }
}

fn add_quat_at(grads: &mut [Matrix; 4], r: usize, s: usize, q: Quaternion) {
    grads[0].set(r, s, grads[0].at(r, s) + q.a);
    grads[1].set(r, s, grads[1].at(r, s) + q.b);
    grads[2].set(r, s, grads[2].at(r, s) + q.c);
    grads[3].set(r, s, grads[3].at(r, s) + q.d);
}

/// Accumulate one pair's cross-entropy gradient into `grads` and return the
/// pair's loss. Regularization is added separately per batch.
fn accumulate_pair_ce(
    model: &Model,
    user: u32,
    item: u32,
    label: f64,
    grads: &mut BatchGradients,
) -> Result<f64, TrainError> {
    let table = &model.table;
    match model.kind() {
        ModelKind::Gmf => {
            let comps = table.gmf_forward(user, item)?;
            let loss = component_loss(&comps, label);
            let (vals, _) = comps.to_array();
            let e = stable_sigmoid(vals[0]) - label;
            axpy(e, table.item_row(0, item), grads.user_row_mut(0, user));
            axpy(e, table.user_row(0, user), grads.item_row_mut(0, item));
            Ok(loss)
        }
        ModelKind::Mmf => {
            let comps = table.mmf_forward(user, item)?;
            let loss = component_loss(&comps, label);
            let (vals, _) = comps.to_array();
            let e = stable_sigmoid(vals[0]) - label;
            for p in 0..4 {
                axpy(e, table.item_row(p, item), grads.user_row_mut(p, user));
                axpy(e, table.user_row(p, user), grads.item_row_mut(p, item));
            }
            Ok(loss)
        }
        ModelKind::Ccf => {
            let comps = table.ccf_forward(user, item)?;
            let loss = component_loss(&comps, label);
            let (vals, _) = comps.to_array();
            let (ea, eb) = (stable_sigmoid(vals[0]) - label, stable_sigmoid(vals[1]) - label);
            let (us, vs) = (table.user_row(0, user), table.user_row(1, user));
            let (ps, qs) = (table.item_row(0, item), table.item_row(1, item));
            {
                let g = grads.user_row_mut(0, user);
                axpy(ea, ps, g);
                axpy(eb, qs, g);
            }
            {
                let g = grads.user_row_mut(1, user);
                axpy(-ea, qs, g);
                axpy(eb, ps, g);
            }
            {
                let g = grads.item_row_mut(0, item);
                axpy(ea, us, g);
                axpy(eb, vs, g);
            }
            {
                let g = grads.item_row_mut(1, item);
                axpy(-ea, vs, g);
                axpy(eb, us, g);
            }
            Ok(loss)
        }
        ModelKind::Qcf => {
            let comps = table.qcf_forward(user, item)?;
            let loss = component_loss(&comps, label);
            let (v, _) = comps.to_array();
            let (ea, eb, ec, ed) = (
                stable_sigmoid(v[0]) - label,
                stable_sigmoid(v[1]) - label,
                stable_sigmoid(v[2]) - label,
                stable_sigmoid(v[3]) - label,
            );
            let (us, vs, xs, ys) = (
                table.user_row(0, user),
                table.user_row(1, user),
                table.user_row(2, user),
                table.user_row(3, user),
            );
            let (ps, qs, ss, ts) = (
                table.item_row(0, item),
                table.item_row(1, item),
                table.item_row(2, item),
                table.item_row(3, item),
            );
            // Chain rule through the four bilinear components of the
            // Hamilton contraction.
            {
                let g = grads.user_row_mut(0, user);
                axpy(ea, ps, g);
                axpy(eb, qs, g);
                axpy(ec, ss, g);
                axpy(ed, ts, g);
            }
            {
                let g = grads.user_row_mut(1, user);
                axpy(-ea, qs, g);
                axpy(eb, ps, g);
                axpy(-ec, ts, g);
                axpy(ed, ss, g);
            }
            {
                let g = grads.user_row_mut(2, user);
                axpy(-ea, ss, g);
                axpy(eb, ts, g);
                axpy(ec, ps, g);
                axpy(-ed, qs, g);
            }
            {
                let g = grads.user_row_mut(3, user);
                axpy(-ea, ts, g);
                axpy(-eb, ss, g);
                axpy(ec, qs, g);
                axpy(ed, ps, g);
            }
            {
                let g = grads.item_row_mut(0, item);
                axpy(ea, us, g);
                axpy(eb, vs, g);
                axpy(ec, xs, g);
                axpy(ed, ys, g);
            }
            {
                let g = grads.item_row_mut(1, item);
                axpy(-ea, vs, g);
                axpy(eb, us, g);
                axpy(ec, ys, g);
                axpy(-ed, xs, g);
            }
            {
                let g = grads.item_row_mut(2, item);
                axpy(-ea, xs, g);
                axpy(-eb, ys, g);
                axpy(ec, us, g);
                axpy(ed, vs, g);
            }
            {
                let g = grads.item_row_mut(3, item);
                axpy(-ea, ys, g);
                axpy(eb, xs, g);
                axpy(-ec, vs, g);
                axpy(ed, us, g);
            }
            Ok(loss)
        }
        ModelKind::QcfPlus => {
            let head = model.head.as_ref().expect("qcf-plus model carries a head");
            let h = table.interaction_vector(user, item)?;
            let z = head.hidden.affine(&h)?;
            let g: Vec<Quaternion> = z.iter().map(|q| q.split_sigmoid()).collect();
            let o = head.output.affine(&g)?[0];
            let loss = component_loss(&ScoreComponents::Quaternion(o), label);
            let err = o.split_sigmoid() - Quaternion::new(label, label, label, label);

            let hg = grads.head.as_mut().expect("head gradients allocated");
            let dim = h.len();
            // Output unit: o = sum_r W_out[r] (x) g[r].
            let mut upstream_g = Vec::with_capacity(dim);
            for r in 0..dim {
                add_quat_at(&mut hg.output, 0, r, err.hamilton(g[r].conj()));
                upstream_g.push(head.output.weight(0, r).conj().hamilton(err));
            }
            // Split sigmoid derivative, componentwise g*(1-g).
            let ones = Quaternion::new(1.0, 1.0, 1.0, 1.0);
            let deltas: Vec<Quaternion> = (0..dim)
                .map(|r| upstream_g[r].comp_mul(g[r].comp_mul(ones - g[r])))
                .collect();
            // Hidden layer: z[r] = sum_s W[r,s] (x) h[s].
            let mut upstream_h = vec![Quaternion::zero(); dim];
            for r in 0..dim {
                for s in 0..dim {
                    add_quat_at(&mut hg.hidden, r, s, deltas[r].hamilton(h[s].conj()));
                    upstream_h[s] =
                        upstream_h[s] + head.hidden.weight(r, s).conj().hamilton(deltas[r]);
                }
            }
            // Embeddings: h[k] = u_k (x) i_k.
            for k in 0..dim {
                let (uq, iq) = (table.user_quat(user, k), table.item_quat(item, k));
                let gu = upstream_h[k].hamilton(iq.conj());
                let gi = uq.conj().hamilton(upstream_h[k]);
                for (p, (a, b)) in
                    [(gu.a, gi.a), (gu.b, gi.b), (gu.c, gi.c), (gu.d, gi.d)].into_iter().enumerate()
                {
                    grads.user_row_mut(p, user)[k] += a;
                    grads.item_row_mut(p, item)[k] += b;
                }
            }
            Ok(loss)
        }
    }
}

/// Add the sparse-L2 term: `2*lambda*theta` once for every embedding row the
/// batch touched, and for the head weights when present.
fn add_l2(grads: &mut BatchGradients, model: &Model, lambda: f64) {
    if lambda == 0.0 {
        return;
    }
    let table = &model.table;
    for p in 0..grads.user.len() {
        let mut rows: Vec<u32> = grads.user[p].keys().copied().collect();
        for row in rows.drain(..) {
            let g = grads.user[p].get_mut(&row).unwrap();
            axpy(2.0 * lambda, table.user_row(p, row), g);
        }
        let mut rows: Vec<u32> = grads.item[p].keys().copied().collect();
        for row in rows.drain(..) {
            let g = grads.item[p].get_mut(&row).unwrap();
            axpy(2.0 * lambda, table.item_row(p, row), g);
        }
    }
    if let (Some(hg), Some(head)) = (grads.head.as_mut(), model.head.as_ref()) {
        for c in 0..4 {
            for (g, w) in hg.hidden[c].data_mut().iter_mut().zip(head.hidden.weights()[c].data()) {
                *g += 2.0 * lambda * w;
            }
            for (g, w) in hg.output[c].data_mut().iter_mut().zip(head.output.weights()[c].data()) {
                *g += 2.0 * lambda * w;
            }
        }
    }
}

/// Batch objective: summed component losses plus `l2_lambda` times the
/// squared norms of the embedding rows touched by the batch (each unique row
/// counted once) and of the head weights.
pub fn total_loss(batch: &[Example], model: &Model, cfg: &TrainConfig) -> Result<f64, TrainError> {
    if batch.is_empty() {
        return Err(TrainError::EmptyBatch);
    }
    let mut loss = 0.0;
    let mut users = std::collections::BTreeSet::new();
    let mut items = std::collections::BTreeSet::new();
    for ex in batch {
        loss += component_loss(&model.score_components(ex.user, ex.item)?, ex.label);
        users.insert(ex.user);
        items.insert(ex.item);
    }
    if cfg.l2_lambda > 0.0 {
        let mut reg = 0.0;
        for p in 0..model.kind().parts() {
            for &u in &users {
                reg += model.table.user_row(p, u).iter().map(|x| x * x).sum::<f64>();
            }
            for &i in &items {
                reg += model.table.item_row(p, i).iter().map(|x| x * x).sum::<f64>();
            }
        }
        if let Some(head) = &model.head {
            for c in 0..4 {
                reg += head.hidden.weights()[c].sq_sum();
                reg += head.output.weights()[c].sq_sum();
            }
        }
        loss += cfg.l2_lambda * reg;
    }
    Ok(loss)
}

/// Exact analytic gradient of [`total_loss`] restricted to one pair.
pub fn gradients(
    model: &Model,
    user: u32,
    item: u32,
    label: f64,
    cfg: &TrainConfig,
) -> Result<BatchGradients, TrainError> {
    let mut grads = BatchGradients::zeros_for(model);
    accumulate_pair_ce(model, user, item, label, &mut grads)?;
    add_l2(&mut grads, model, cfg.l2_lambda);
    Ok(grads)
}

/// One epoch's example stream.
#[derive(Debug, Clone, PartialEq)]
pub struct EpochSample {
    pub examples: Vec<Example>,
    /// Users whose unobserved-item set was empty; their negatives were
    /// skipped and the skip is surfaced in the run log.
    pub users_skipped: Vec<u32>,
}

/// Shuffle the training positives and pair each with `neg_ratio` uniform
/// draws from the user's unobserved items. Deterministic given the stream.
pub fn sample_training_batch(
    train: &TrainSet,
    cfg: &TrainConfig,
    rng: &mut rand_chacha::ChaCha12Rng,
) -> Result<EpochSample, TrainError> {
    if train.num_positives() == 0 {
        return Err(TrainError::EmptyTrainSet);
    }
    let mut positives = Vec::with_capacity(train.num_positives());
    for u in 0..train.num_users() as u32 {
        for &i in train.positives(u) {
            positives.push((u, i));
        }
    }
    rng::shuffle(rng, &mut positives);

    let n_items = train.num_items() as u64;
    let mut examples = Vec::with_capacity(positives.len() * (1 + cfg.neg_ratio));
    let mut skipped = std::collections::BTreeSet::new();
    for (u, i) in positives {
        examples.push(Example { user: u, item: i, label: 1.0 });
        if train.positives(u).len() as u64 >= n_items {
            skipped.insert(u);
            continue;
        }
        for _ in 0..cfg.neg_ratio {
            let j = loop {
                let cand = rng::sample_below(rng, n_items) as u32;
                if !train.contains(u, cand) {
                    break cand;
                }
            };
            examples.push(Example { user: u, item: j, label: 0.0 });
        }
    }
    Ok(EpochSample { examples, users_skipped: skipped.into_iter().collect() })
}

/// Per-parameter optimizer accumulators; empty for SGD.
#[derive(Debug, Clone)]
pub struct OptimizerState {
    kind: OptimizerKind,
    step: u64,
    user_m: Vec<Matrix>,
    user_v: Vec<Matrix>,
    item_m: Vec<Matrix>,
    item_v: Vec<Matrix>,
    head_m: Option<HeadGradients>,
    head_v: Option<HeadGradients>,
}

const ADAM_BETA1: f64 = 0.9;
const ADAM_BETA2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;

impl OptimizerState {
    pub fn new(kind: OptimizerKind, model: &Model) -> Self {
        let parts = model.kind().parts();
        let (user_m, item_m) = match kind {
            OptimizerKind::Sgd => (Vec::new(), Vec::new()),
            OptimizerKind::Adam => (
                (0..parts).map(|_| Matrix::zeros(model.table.num_users(), model.dim())).collect(),
                (0..parts).map(|_| Matrix::zeros(model.table.num_items(), model.dim())).collect(),
            ),
        };
        let (head_m, head_v) = match kind {
            OptimizerKind::Sgd => (None, None),
            OptimizerKind::Adam => {
                (HeadGradients::zeros_like(model), HeadGradients::zeros_like(model))
            }
        };
        Self {
            kind,
            step: 0,
            user_v: user_m.clone(),
            item_v: item_m.clone(),
            user_m,
            item_m,
            head_m,
            head_v,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }
}

fn adam_update(
    theta: &mut [f64],
    grad: &[f64],
    m: &mut [f64],
    v: &mut [f64],
    lr: f64,
    step: u64,
) {
    let bc1 = 1.0 - ADAM_BETA1.powi(step as i32);
    let bc2 = 1.0 - ADAM_BETA2.powi(step as i32);
    for k in 0..theta.len() {
        let g = grad[k];
        m[k] = ADAM_BETA1 * m[k] + (1.0 - ADAM_BETA1) * g;
        v[k] = ADAM_BETA2 * v[k] + (1.0 - ADAM_BETA2) * g * g;
        let m_hat = m[k] / bc1;
        let v_hat = v[k] / bc2;
        theta[k] -= lr * m_hat / (v_hat.sqrt() + ADAM_EPS);
    }
}

/// Apply one optimizer step for the given batch gradients.
///
/// SGD: `theta <- theta - lr*g`. Adam: bias-corrected moments with
/// `beta1=0.9`, `beta2=0.999`, `eps=1e-8`; moments of untouched rows are
/// left in place (lazy sparse update).
pub fn optimizer_step(
    state: &mut OptimizerState,
    model: &mut Model,
    grads: &BatchGradients,
    cfg: &TrainConfig,
) -> Result<(), TrainError> {
    let parts = model.kind().parts();
    if grads.user.len() != parts || grads.item.len() != parts {
        return Err(TrainError::ShapeMismatch(format!(
            "gradients carry {} parts, model has {parts}",
            grads.user.len()
        )));
    }
    let dim = model.dim();
    state.step += 1;
    let lr = cfg.learning_rate;

    for p in 0..parts {
        for (side, grad_rows) in [(0usize, &grads.user[p]), (1usize, &grads.item[p])] {
            for (&row, g) in grad_rows {
                if g.len() != dim {
                    return Err(TrainError::ShapeMismatch(format!(
                        "gradient row width {} vs dim {dim}",
                        g.len()
                    )));
                }
                let rows_in_table = if side == 0 {
                    model.table.num_users()
                } else {
                    model.table.num_items()
                };
                if row as usize >= rows_in_table {
                    return Err(TrainError::ShapeMismatch(format!(
                        "gradient row {row} outside table of {rows_in_table}"
                    )));
                }
                match state.kind {
                    OptimizerKind::Sgd => {
                        let theta = if side == 0 {
                            model.table.user_part_mut(p).row_mut(row as usize)
                        } else {
                            model.table.item_part_mut(p).row_mut(row as usize)
                        };
                        axpy(-lr, g, theta);
                    }
                    OptimizerKind::Adam => {
                        let (theta, m, v) = if side == 0 {
                            (
                                model.table.user_part_mut(p).row_mut(row as usize),
                                state.user_m[p].row_mut(row as usize),
                                state.user_v[p].row_mut(row as usize),
                            )
                        } else {
                            (
                                model.table.item_part_mut(p).row_mut(row as usize),
                                state.item_m[p].row_mut(row as usize),
                                state.item_v[p].row_mut(row as usize),
                            )
                        };
                        adam_update(theta, g, m, v, lr, state.step);
                    }
                }
            }
        }
    }

    if let (Some(hg), Some(head)) = (grads.head.as_ref(), model.head.as_mut()) {
        for c in 0..4 {
            match state.kind {
                OptimizerKind::Sgd => {
                    axpy(-lr, hg.hidden[c].data(), head.hidden.weights_mut()[c].data_mut());
                    axpy(-lr, hg.output[c].data(), head.output.weights_mut()[c].data_mut());
                }
                OptimizerKind::Adam => {
                    let hm = state.head_m.as_mut().expect("adam head moments");
                    let hv = state.head_v.as_mut().expect("adam head moments");
                    adam_update(
                        head.hidden.weights_mut()[c].data_mut(),
                        hg.hidden[c].data(),
                        hm.hidden[c].data_mut(),
                        hv.hidden[c].data_mut(),
                        lr,
                        state.step,
                    );
                    adam_update(
                        head.output.weights_mut()[c].data_mut(),
                        hg.output[c].data(),
                        hm.output[c].data_mut(),
                        hv.output[c].data_mut(),
                        lr,
                        state.step,
                    );
                }
            }
        }
    }
    Ok(())
}

/// One line of the run log.
#[derive(Debug, Clone, serde::Serialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub mean_loss: f64,
    pub elapsed_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub val_hr10: Option<f64>,
    pub users_skipped: usize,
}

#[derive(Debug)]
pub struct TrainOutcome {
    pub model: Model,
    pub trace: Vec<EpochRecord>,
}

/// Train a fresh model: shuffled mini-batches, negatives re-sampled per
/// epoch, one optimizer step per batch. The reported loss is the mean
/// per-example cross-entropy (comparable only within a model kind).
pub fn train(
    kind: ModelKind,
    dim: usize,
    train_set: &TrainSet,
    cfg: &TrainConfig,
    val_split: Option<&Split>,
) -> Result<TrainOutcome, TrainError> {
    cfg.validate()?;
    if train_set.num_positives() == 0 {
        return Err(TrainError::EmptyTrainSet);
    }
    let mut model = Model::init(
        kind,
        train_set.num_users(),
        train_set.num_items() as usize,
        dim,
        cfg.seed,
    )?;
    let mut state = OptimizerState::new(cfg.optimizer, &model);
    let mut trace = Vec::with_capacity(cfg.epochs);

    for epoch in 0..cfg.epochs {
        let started = Instant::now();
        let mut rng = rng::epoch_stream(cfg.seed, epoch);
        let sample = sample_training_batch(train_set, cfg, &mut rng)?;
        let mut loss_sum = 0.0;
        for batch in sample.examples.chunks(cfg.batch_size) {
            let mut grads = BatchGradients::zeros_for(&model);
            for ex in batch {
                loss_sum += accumulate_pair_ce(&model, ex.user, ex.item, ex.label, &mut grads)?;
            }
            add_l2(&mut grads, &model, cfg.l2_lambda);
            optimizer_step(&mut state, &mut model, &grads, cfg)?;
        }
        let val_hr10 = match val_split {
            Some(split) => {
                let report = eval::evaluate(&model, split, &[10])
                    .map_err(|e| TrainError::Validation(e.to_string()))?;
                Some(report.hr[0])
            }
            None => None,
        };
        trace.push(EpochRecord {
            epoch: epoch + 1,
            mean_loss: loss_sum / sample.examples.len() as f64,
            elapsed_seconds: started.elapsed().as_secs_f64(),
            val_hr10,
            users_skipped: sample.users_skipped.len(),
        });
    }
    Ok(TrainOutcome { model, trace })
}
