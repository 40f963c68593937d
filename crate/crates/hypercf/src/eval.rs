//! Leave-one-out ranking evaluation: HR@k and NDCG@k over 201-candidate
//! lists (the held-out item plus its 200 fixed negatives).
//!
//! Ranking is deterministic: candidates sort by descending score with ties
//! broken by ascending item id. With a single relevant item the ideal DCG is
//! 1, so NDCG reduces to `1/log2(rank+1)` for hits.

use std::time::Instant;

use thiserror::Error;

use crate::data::{Split, EVAL_NEGATIVES};
use crate::model::{Model, ModelError};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("k must be >= 1, got {0}")]
    InvalidK(usize),
    #[error("rank list is empty")]
    EmptyRanks,
    #[error("malformed candidate list: {0}")]
    MalformedCandidates(String),
    #[error("protocol violation: {0}")]
    Protocol(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Rank (1-based) of the held-out item among itself plus the negatives.
///
/// Implemented by score counting rather than sorting, so the full-sort
/// oracle in the tests stays an independent route.
pub fn rank_candidates(
    model: &Model,
    user: u32,
    test_item: u32,
    negatives: &[u32],
) -> Result<u32, EvalError> {
    if negatives.contains(&test_item) {
        return Err(EvalError::MalformedCandidates(format!(
            "held-out item {test_item} duplicated among the negatives"
        )));
    }
    let target_score = model.predict(user, test_item)?;
    let mut rank = 1u32;
    for &cand in negatives {
        let s = model.predict(user, cand)?;
        if s > target_score || (s == target_score && cand < test_item) {
            rank += 1;
        }
    }
    Ok(rank)
}

/// Fraction of users whose held-out item ranked within the top k.
pub fn hr_at_k(ranks: &[u32], k: usize) -> Result<f64, EvalError> {
    if k < 1 {
        return Err(EvalError::InvalidK(k));
    }
    if ranks.is_empty() {
        return Err(EvalError::EmptyRanks);
    }
    let hits = ranks.iter().filter(|&&r| (r as usize) <= k).count();
    Ok(hits as f64 / ranks.len() as f64)
}

/// Mean of `1/log2(rank+1)` over users with rank <= k, zero otherwise.
pub fn ndcg_at_k(ranks: &[u32], k: usize) -> Result<f64, EvalError> {
    if k < 1 {
        return Err(EvalError::InvalidK(k));
    }
    if ranks.is_empty() {
        return Err(EvalError::EmptyRanks);
    }
    let gain: f64 = ranks
        .iter()
        .map(|&r| if (r as usize) <= k { 1.0 / ((r as f64) + 1.0).log2() } else { 0.0 })
        .sum();
    Ok(gain / ranks.len() as f64)
}

/// Metrics at each requested k plus wall-clock timings.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub ks: Vec<usize>,
    pub hr: Vec<f64>,
    pub ndcg: Vec<f64>,
    pub users: usize,
    pub train_epoch_seconds: f64,
    pub test_seconds: f64,
}

impl EvalReport {
    /// Two-column ASCII table for terminals.
    pub fn render_table(&self, model: &str, dataset: &str) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "model={model} dataset={dataset} users={} train_epoch_s={:.3} test_s={:.3}\n",
            self.users, self.train_epoch_seconds, self.test_seconds
        ));
        out.push_str("   k        HR      NDCG\n");
        for (idx, &k) in self.ks.iter().enumerate() {
            out.push_str(&format!("{k:>4}  {:>8.4}  {:>8.4}\n", self.hr[idx], self.ndcg[idx]));
        }
        out
    }

    /// CSV rows (one per k) under the fixed header. The timing columns are
    /// written as given; deterministic reports pass 0 for both.
    pub fn csv_rows(&self, model: &str, dataset: &str) -> String {
        let mut out = String::new();
        for (idx, &k) in self.ks.iter().enumerate() {
            out.push_str(&format!(
                "{model},{dataset},{k},{:.6},{:.6},{},{:.6},{:.6}\n",
                self.hr[idx],
                self.ndcg[idx],
                self.users,
                self.train_epoch_seconds,
                self.test_seconds
            ));
        }
        out
    }
}

pub const CSV_HEADER: &str = "model,dataset,k,hr,ndcg,users,train_epoch_seconds,test_seconds";

/// Rank every user's candidate list and average the metrics.
///
/// Enforces the protocol: every candidate list must contain exactly
/// `1 + EVAL_NEGATIVES` items.
pub fn evaluate(model: &Model, split: &Split, ks: &[usize]) -> Result<EvalReport, EvalError> {
    for &k in ks {
        if k < 1 {
            return Err(EvalError::InvalidK(k));
        }
    }
    let started = Instant::now();
    let mut ranks = Vec::with_capacity(split.num_users());
    for u in 0..split.num_users() as u32 {
        let negatives = &split.eval_negatives[u as usize];
        if negatives.len() != EVAL_NEGATIVES {
            return Err(EvalError::Protocol(format!(
                "user {u} has {} evaluation negatives, protocol requires {EVAL_NEGATIVES}",
                negatives.len()
            )));
        }
        ranks.push(rank_candidates(model, u, split.test_items[u as usize], negatives)?);
    }
    let test_seconds = started.elapsed().as_secs_f64();
    let mut hr = Vec::with_capacity(ks.len());
    let mut ndcg = Vec::with_capacity(ks.len());
    for &k in ks {
        hr.push(hr_at_k(&ranks, k)?);
        ndcg.push(ndcg_at_k(&ranks, k)?);
    }
    Ok(EvalReport {
        ks: ks.to_vec(),
        hr,
        ndcg,
        users: ranks.len(),
        train_epoch_seconds: 0.0,
        test_seconds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::TrainSet;
    use crate::model::{Model, ModelKind};

    fn small_model(kind: ModelKind, users: usize, items: usize, seed: u64) -> Model {
        Model::init(kind, users, items, 4, seed).unwrap()
    }

    #[test]
    fn top_scored_item_ranks_first() {
        // Train a nothing model but overwrite one user row so the target
        // dominates: easier to zero everything and score ties instead.
        let mut model = small_model(ModelKind::Gmf, 1, 5, 3);
        for p in 0..1 {
            model.table.user_part_mut(p).data_mut().fill(0.0);
            model.table.item_part_mut(p).data_mut().fill(0.0);
        }
        // All scores equal (0.5): the tie rule puts the smallest item id
        // first.
        let rank = rank_candidates(&model, 0, 0, &[1, 2, 3, 4]).unwrap();
        assert_eq!(rank, 1);
        let rank = rank_candidates(&model, 0, 3, &[0, 1, 2, 4]).unwrap();
        assert_eq!(rank, 4);

        // Make the target genuinely strongest.
        model.table.user_part_mut(0).row_mut(0).copy_from_slice(&[1.0, 0.0, 0.0, 0.0]);
        model.table.item_part_mut(0).row_mut(2).copy_from_slice(&[5.0, 0.0, 0.0, 0.0]);
        let rank = rank_candidates(&model, 0, 2, &[0, 1, 3, 4]).unwrap();
        assert_eq!(rank, 1);
    }

    #[test]
    fn rank_matches_full_sort_oracle() {
        let model = small_model(ModelKind::Qcf, 6, 40, 9);
        for u in 0..6u32 {
            let candidates: Vec<u32> = (0..20).map(|x| x * 2 + u % 2).collect();
            let target = candidates[7];
            let negatives: Vec<u32> =
                candidates.iter().copied().filter(|&c| c != target).collect();
            let got = rank_candidates(&model, u, target, &negatives).unwrap();
            // Oracle: full sort by (score desc, item asc).
            let mut scored: Vec<(u32, f64)> =
                candidates.iter().map(|&c| (c, model.predict(u, c).unwrap())).collect();
            scored.sort_by(|a, b| {
                b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0))
            });
            let oracle = scored.iter().position(|&(c, _)| c == target).unwrap() as u32 + 1;
            assert_eq!(got, oracle);
        }
    }

    #[test]
    fn rank_is_invariant_under_monotone_score_transforms() {
        // Ranking depends only on score order; scaling all embeddings of a
        // GMF model by a positive constant is a strictly increasing
        // transform of the logit, hence of the score.
        let mut model = small_model(ModelKind::Gmf, 3, 30, 17);
        let negatives: Vec<u32> = (1..25).collect();
        let before: Vec<u32> = (0..3u32)
            .map(|u| rank_candidates(&model, u, 0, &negatives).unwrap())
            .collect();
        for v in model.table.user_part_mut(0).data_mut() {
            *v *= 3.0;
        }
        let after: Vec<u32> = (0..3u32)
            .map(|u| rank_candidates(&model, u, 0, &negatives).unwrap())
            .collect();
        assert_eq!(before, after);
    }

    #[test]
    fn duplicate_target_is_malformed() {
        let model = small_model(ModelKind::Gmf, 1, 5, 3);
        assert!(matches!(
            rank_candidates(&model, 0, 2, &[1, 2, 3]),
            Err(EvalError::MalformedCandidates(_))
        ));
    }

    #[test]
    fn hr_closed_forms() {
        assert_eq!(hr_at_k(&[1, 1, 1], 5).unwrap(), 1.0);
        let third = hr_at_k(&[1, 6, 21], 5).unwrap();
        assert!((third - 1.0 / 3.0).abs() < 1e-15);
        assert!(matches!(hr_at_k(&[1], 0), Err(EvalError::InvalidK(0))));
        assert!(matches!(hr_at_k(&[], 5), Err(EvalError::EmptyRanks)));
    }

    #[test]
    fn hr_matches_brute_force_count() {
        let mut rng = crate::rng::stream(23, 1);
        let ranks: Vec<u32> =
            (0..50).map(|_| crate::rng::sample_below(&mut rng, 201) as u32 + 1).collect();
        for k in [1, 5, 10, 20, 201] {
            let brute =
                ranks.iter().filter(|&&r| r as usize <= k).count() as f64 / ranks.len() as f64;
            assert_eq!(hr_at_k(&ranks, k).unwrap(), brute);
        }
    }

    #[test]
    fn ndcg_closed_forms() {
        assert_eq!(ndcg_at_k(&[1, 1, 1], 5).unwrap(), 1.0);
        assert!((ndcg_at_k(&[3], 5).unwrap() - 0.5).abs() < 1e-15);
        let mixed = ndcg_at_k(&[1, 3, 12], 10).unwrap();
        assert!((mixed - 0.5).abs() < 1e-15);
        assert!(matches!(ndcg_at_k(&[1], 0), Err(EvalError::InvalidK(0))));
    }

    #[test]
    fn metrics_monotone_in_k_and_bounded() {
        let mut rng = crate::rng::stream(23, 2);
        let ranks: Vec<u32> =
            (0..80).map(|_| crate::rng::sample_below(&mut rng, 201) as u32 + 1).collect();
        let mut prev_hr = 0.0;
        let mut prev_ndcg = 0.0;
        for k in 1..=201 {
            let hr = hr_at_k(&ranks, k).unwrap();
            let ndcg = ndcg_at_k(&ranks, k).unwrap();
            assert!(hr >= prev_hr && ndcg >= prev_ndcg);
            assert!(ndcg <= hr);
            assert!((0.0..=1.0).contains(&hr) && (0.0..=1.0).contains(&ndcg));
            prev_hr = hr;
            prev_ndcg = ndcg;
        }
        // The held-out item is always somewhere in the 201 candidates.
        assert_eq!(hr_at_k(&ranks, 201).unwrap(), 1.0);
    }

    fn synthetic_split(users: usize, items: u32) -> Split {
        let mut rng = crate::rng::stream(23, 3);
        let mut train = Vec::new();
        let mut tests = Vec::new();
        let mut negs = Vec::new();
        for _ in 0..users {
            let mut pos = Vec::new();
            while pos.len() < 5 {
                let cand = crate::rng::sample_below(&mut rng, items as u64) as u32;
                if !pos.contains(&cand) {
                    pos.push(cand);
                }
            }
            let test = pos.pop().unwrap();
            let mut neg = Vec::new();
            while neg.len() < EVAL_NEGATIVES {
                let cand = crate::rng::sample_below(&mut rng, items as u64) as u32;
                if cand != test && !pos.contains(&cand) && !neg.contains(&cand) {
                    neg.push(cand);
                }
            }
            train.push(pos);
            tests.push(test);
            negs.push(neg);
        }
        Split { train: TrainSet::new(items, train), test_items: tests, eval_negatives: negs }
    }

    #[test]
    fn evaluate_produces_consistent_report() {
        let split = synthetic_split(25, 260);
        let model = small_model(ModelKind::Ccf, 25, 260, 31);
        let report = evaluate(&model, &split, &[5, 10, 20]).unwrap();
        assert_eq!(report.users, 25);
        for idx in 0..3 {
            assert!(report.ndcg[idx] <= report.hr[idx]);
            assert!((0.0..=1.0).contains(&report.hr[idx]));
        }
        assert!(report.test_seconds >= 0.0);
    }

    #[test]
    fn untrained_zero_model_ranks_uniformly() {
        // Every candidate ties at 0.5, so rank reduces to item-id order;
        // with randomized item indices the held-out rank is uniform over
        // the 201 slots and HR@10 concentrates near 10/201.
        let users = 400;
        let split = synthetic_split(users, 800);
        let mut model = small_model(ModelKind::Gmf, users, 800, 3);
        model.table.user_part_mut(0).data_mut().fill(0.0);
        model.table.item_part_mut(0).data_mut().fill(0.0);
        let report = evaluate(&model, &split, &[10]).unwrap();
        let expect = 10.0 / 201.0;
        // Three Monte-Carlo standard deviations.
        let tol = 3.0 * (expect * (1.0 - expect) / users as f64).sqrt();
        assert!(
            (report.hr[0] - expect).abs() <= tol,
            "HR@10 {} not within {tol:.4} of {expect:.4}",
            report.hr[0]
        );
    }

    #[test]
    fn evaluate_rejects_short_candidate_lists() {
        let mut split = synthetic_split(5, 250);
        split.eval_negatives[2].pop();
        let model = small_model(ModelKind::Gmf, 5, 250, 3);
        assert!(matches!(
            evaluate(&model, &split, &[10]),
            Err(EvalError::Protocol(_))
        ));
    }

    #[test]
    fn saturated_oracle_model_hits_everywhere() {
        // Test items 0..10 live outside the negative range 10..240, and each
        // scores a saturated logit; every rank must be 1.
        let users = 10usize;
        let mut train = Vec::new();
        let mut tests = Vec::new();
        let mut negs = Vec::new();
        for u in 0..users {
            train.push(vec![210 + u as u32]);
            tests.push(u as u32);
            negs.push((10..10 + EVAL_NEGATIVES as u32).collect());
        }
        let split =
            Split { train: TrainSet::new(240, train), test_items: tests, eval_negatives: negs };
        let mut model = small_model(ModelKind::Gmf, users, 240, 5);
        model.table.user_part_mut(0).data_mut().fill(0.0);
        model.table.item_part_mut(0).data_mut().fill(0.0);
        for u in 0..users {
            model.table.user_part_mut(0).row_mut(u)[0] = 1.0;
            let t = split.test_items[u];
            model.table.item_part_mut(0).row_mut(t as usize)[0] = 1e4;
        }
        let report = evaluate(&model, &split, &[5, 10, 20]).unwrap();
        for idx in 0..3 {
            assert_eq!(report.hr[idx], 1.0);
            assert_eq!(report.ndcg[idx], 1.0);
        }
    }
}
