//! Collaborative filtering in complex and quaternion space.
//!
//! The crate learns user/item embeddings whose interaction is scored by
//! complex multiplication (CCF) or the Hamilton product (QCF), alongside the
//! real-space baselines GMF and MMF, trains them with component-wise
//! cross-entropy on implicit feedback, and evaluates with the leave-one-out
//! top-k protocol (HR@k and NDCG@k against 200 sampled negatives).
//!
//! Module map:
//!
//! * [`hypercomplex`] — scalar complex/quaternion algebra, split sigmoid,
//!   quaternion-aware initialization;
//! * [`model`] — embedding tables, forward scoring, prediction, the QCF+
//!   quaternion head, binary checkpoints;
//! * [`data`] — log ingestion, filtering/remapping, leave-one-out splits,
//!   evaluation negatives, the split cache format;
//! * [`training`] — losses, analytic gradients, negative sampling, SGD/Adam;
//! * [`eval`] — candidate ranking and the HR/NDCG report;
//! * [`cli`] — the `prepare`/`train`/`evaluate`/`sweep`/`bench` commands.

pub mod cli;
pub mod data;
pub mod eval;
pub mod hypercomplex;
pub mod matrix;
pub mod model;
pub mod rng;
pub mod training;

pub use hypercomplex::{Complex, Quaternion};
pub use model::{Model, ModelKind, ScoreComponents};
pub use training::TrainConfig;
