//! Independent oracles shared by the integration suites. Everything here
//! recomputes results from first principles and must stay decoupled from the
//! library's implementation paths.

use hypercf::data::Split;
use hypercf::model::Model;
use hypercf::Quaternion;

/// Basis multiplication table of the quaternion algebra: entry `[p][q]`
/// gives (target component, sign) of `basis_p * basis_q` under
/// `i^2 = j^2 = k^2 = ijk = -1`.
const BASIS: [[(usize, f64); 4]; 4] = [
    [(0, 1.0), (1, 1.0), (2, 1.0), (3, 1.0)],
    [(1, 1.0), (0, -1.0), (3, 1.0), (2, -1.0)],
    [(2, 1.0), (3, -1.0), (0, -1.0), (1, 1.0)],
    [(3, 1.0), (2, 1.0), (1, -1.0), (0, -1.0)],
];

/// Hamilton product by distributive expansion over the 16 basis products.
pub fn hamilton_expansion_oracle(p: Quaternion, q: Quaternion) -> Quaternion {
    let pc = [p.a, p.b, p.c, p.d];
    let qc = [q.a, q.b, q.c, q.d];
    let mut out = [0.0f64; 4];
    for (bp, &pv) in pc.iter().enumerate() {
        for (bq, &qv) in qc.iter().enumerate() {
            let (target, sign) = BASIS[bp][bq];
            out[target] += sign * pv * qv;
        }
    }
    Quaternion::new(out[0], out[1], out[2], out[3])
}

/// Rank of `target` among `candidates` by full sort: descending score, ties
/// broken by ascending item id.
pub fn full_sort_rank(model: &Model, user: u32, target: u32, candidates: &[u32]) -> u32 {
    let mut scored: Vec<(u32, f64)> =
        candidates.iter().map(|&c| (c, model.predict(user, c).unwrap())).collect();
    scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    scored.iter().position(|&(c, _)| c == target).unwrap() as u32 + 1
}

/// Brute-force leave-one-out metrics: per-user full-sort ranks, then direct
/// counting.
pub struct BruteMetrics {
    pub ranks: Vec<u32>,
}

impl BruteMetrics {
    pub fn compute(model: &Model, split: &Split) -> Self {
        let mut ranks = Vec::new();
        for u in 0..split.num_users() as u32 {
            let target = split.test_items[u as usize];
            let mut candidates = vec![target];
            candidates.extend_from_slice(&split.eval_negatives[u as usize]);
            ranks.push(full_sort_rank(model, u, target, &candidates));
        }
        Self { ranks }
    }

    pub fn hr(&self, k: usize) -> f64 {
        let hits = self.ranks.iter().filter(|&&r| r as usize <= k).count();
        hits as f64 / self.ranks.len() as f64
    }

    pub fn ndcg(&self, k: usize) -> f64 {
        let mut gain = 0.0;
        for &r in &self.ranks {
            if r as usize <= k {
                gain += 1.0 / ((r as f64) + 1.0).log2();
            }
        }
        gain / self.ranks.len() as f64
    }
}
