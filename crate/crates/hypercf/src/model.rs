//! Embedding tables and forward scoring.
//!
//! Five model kinds share one storage layout: per-entity embeddings held as
//! 1 (GMF), 2 (CCF) or 4 (MMF/QCF) real part-matrices of width `d`. Scoring
//! composes the user and item rows into 1, 2 or 4 pre-activation components:
//!
//! * GMF — inner product of the single parts;
//! * MMF — sum of the four independent inner products;
//! * CCF — complex multiplication with dot-product contraction;
//! * QCF — Hamilton product with dot-product contraction;
//! * QCF+ — QCF's per-dimension Hamilton products fed through one quaternion
//!   dense layer (split sigmoid) and a quaternion output unit.
//!
//! Forward passes are read-only and safe to run concurrently; tables are
//! mutated only by the trainer under a single-writer contract.

use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::hypercomplex::{normal_init, quaternion_init, stable_sigmoid, Complex, InitError, Quaternion};
use crate::matrix::{dot, Matrix};
use crate::rng;

pub const CHECKPOINT_MAGIC: &[u8; 8] = b"HYPERCF1";

/// Embedding init scale for the real-space baselines.
pub const BASELINE_INIT_STD: f64 = 0.01;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("user id {user} out of range (table has {num_users} users)")]
    UserOutOfRange { user: u32, num_users: usize },
    #[error("item id {item} out of range (table has {num_items} items)")]
    ItemOutOfRange { item: u32, num_items: usize },
    #[error("operation requires a {expected} table, got {found}")]
    KindMismatch { expected: ModelKind, found: ModelKind },
    #[error("{kind} prediction expects {expected} score component(s), got {found}")]
    ComponentMismatch { kind: ModelKind, expected: usize, found: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Init(#[from] InitError),
    #[error("unknown model kind {0:?} (expected gmf, mmf, ccf, qcf or qcf-plus)")]
    UnknownKind(String),
    #[error("bad checkpoint: {0}")]
    BadCheckpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Which interaction function the table feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Gmf,
    Mmf,
    Ccf,
    Qcf,
    QcfPlus,
}

impl ModelKind {
    /// Number of real part-matrices per entity side.
    pub fn parts(self) -> usize {
        match self {
            ModelKind::Gmf => 1,
            ModelKind::Ccf => 2,
            ModelKind::Mmf | ModelKind::Qcf | ModelKind::QcfPlus => 4,
        }
    }

    /// Number of pre-activation score components.
    pub fn components(self) -> usize {
        match self {
            ModelKind::Gmf | ModelKind::Mmf => 1,
            ModelKind::Ccf => 2,
            ModelKind::Qcf | ModelKind::QcfPlus => 4,
        }
    }

    pub fn all() -> [ModelKind; 5] {
        [ModelKind::Gmf, ModelKind::Mmf, ModelKind::Ccf, ModelKind::Qcf, ModelKind::QcfPlus]
    }

    fn code(self) -> u8 {
        match self {
            ModelKind::Gmf => 0,
            ModelKind::Mmf => 1,
            ModelKind::Ccf => 2,
            ModelKind::Qcf => 3,
            ModelKind::QcfPlus => 4,
        }
    }

    fn from_code(code: u8) -> Option<ModelKind> {
        match code {
            0 => Some(ModelKind::Gmf),
            1 => Some(ModelKind::Mmf),
            2 => Some(ModelKind::Ccf),
            3 => Some(ModelKind::Qcf),
            4 => Some(ModelKind::QcfPlus),
            _ => None,
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ModelKind::Gmf => "gmf",
            ModelKind::Mmf => "mmf",
            ModelKind::Ccf => "ccf",
            ModelKind::Qcf => "qcf",
            ModelKind::QcfPlus => "qcf-plus",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for ModelKind {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gmf" => Ok(ModelKind::Gmf),
            "mmf" => Ok(ModelKind::Mmf),
            "ccf" => Ok(ModelKind::Ccf),
            "qcf" => Ok(ModelKind::Qcf),
            "qcf-plus" | "qcf+" | "qcfplus" => Ok(ModelKind::QcfPlus),
            other => Err(ModelError::UnknownKind(other.to_string())),
        }
    }
}

/// Pre-activation interaction components of one user-item pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScoreComponents {
    Scalar(f64),
    Complex(Complex),
    Quaternion(Quaternion),
}

impl ScoreComponents {
    pub fn count(&self) -> usize {
        match self {
            ScoreComponents::Scalar(_) => 1,
            ScoreComponents::Complex(_) => 2,
            ScoreComponents::Quaternion(_) => 4,
        }
    }

    /// Components in (a, b, c, d) order; only the first `count()` are live.
    pub fn to_array(&self) -> ([f64; 4], usize) {
        match *self {
            ScoreComponents::Scalar(a) => ([a, 0.0, 0.0, 0.0], 1),
            ScoreComponents::Complex(z) => ([z.re, z.im, 0.0, 0.0], 2),
            ScoreComponents::Quaternion(q) => ([q.a, q.b, q.c, q.d], 4),
        }
    }
}

/// Per-entity hypercomplex embeddings stored as part matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    kind: ModelKind,
    dim: usize,
    user_parts: Vec<Matrix>,
    item_parts: Vec<Matrix>,
}

impl EmbeddingTable {
    /// Initialize freshly: the hypercomplex kinds (CCF/QCF) draw from the
    /// quaternion-aware sampler, keeping the leading `parts()` components
    /// per entry; the real-space baselines (GMF/MMF) use the conventional
    /// `N(0, 0.01)` embedding init. User and item tables draw from their own
    /// seed sub-streams.
    pub fn init(
        kind: ModelKind,
        num_users: usize,
        num_items: usize,
        dim: usize,
        seed: u64,
    ) -> Result<Self, ModelError> {
        let n = kind.parts();
        let mut user_rng = rng::stream(seed, rng::STREAM_USER_INIT);
        let mut item_rng = rng::stream(seed, rng::STREAM_ITEM_INIT);
        let (user_parts, item_parts) = match kind {
            ModelKind::Gmf | ModelKind::Mmf => {
                let users = (0..n)
                    .map(|_| normal_init(num_users, dim, BASELINE_INIT_STD, &mut user_rng))
                    .collect::<Result<Vec<_>, _>>()?;
                let items = (0..n)
                    .map(|_| normal_init(num_items, dim, BASELINE_INIT_STD, &mut item_rng))
                    .collect::<Result<Vec<_>, _>>()?;
                (users, items)
            }
            ModelKind::Ccf | ModelKind::Qcf | ModelKind::QcfPlus => {
                let users = quaternion_init(num_users, dim, &mut user_rng)?;
                let items = quaternion_init(num_items, dim, &mut item_rng)?;
                (
                    users.into_iter().take(n).collect::<Vec<_>>(),
                    items.into_iter().take(n).collect::<Vec<_>>(),
                )
            }
        };
        Ok(Self { kind, dim, user_parts, item_parts })
    }

    pub fn from_parts(
        kind: ModelKind,
        dim: usize,
        user_parts: Vec<Matrix>,
        item_parts: Vec<Matrix>,
    ) -> Result<Self, ModelError> {
        let n = kind.parts();
        if user_parts.len() != n || item_parts.len() != n {
            return Err(ModelError::ShapeMismatch(format!(
                "{kind} table needs {n} part matrices per side, got {}/{}",
                user_parts.len(),
                item_parts.len()
            )));
        }
        for m in user_parts.iter().chain(item_parts.iter()) {
            if m.cols() != dim {
                return Err(ModelError::ShapeMismatch(format!(
                    "part width {} does not match dim {dim}",
                    m.cols()
                )));
            }
        }
        if user_parts.iter().any(|m| m.rows() != user_parts[0].rows())
            || item_parts.iter().any(|m| m.rows() != item_parts[0].rows())
        {
            return Err(ModelError::ShapeMismatch("part row counts differ".into()));
        }
        Ok(Self { kind, dim, user_parts, item_parts })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_users(&self) -> usize {
        self.user_parts[0].rows()
    }

    pub fn num_items(&self) -> usize {
        self.item_parts[0].rows()
    }

    pub fn parts(&self) -> usize {
        self.user_parts.len()
    }

    pub fn user_part(&self, part: usize) -> &Matrix {
        &self.user_parts[part]
    }

    pub fn item_part(&self, part: usize) -> &Matrix {
        &self.item_parts[part]
    }

    pub fn user_part_mut(&mut self, part: usize) -> &mut Matrix {
        &mut self.user_parts[part]
    }

    pub fn item_part_mut(&mut self, part: usize) -> &mut Matrix {
        &mut self.item_parts[part]
    }

    pub fn user_row(&self, part: usize, u: u32) -> &[f64] {
        self.user_parts[part].row(u as usize)
    }

    pub fn item_row(&self, part: usize, i: u32) -> &[f64] {
        self.item_parts[part].row(i as usize)
    }

    fn check_ids(&self, u: u32, i: u32) -> Result<(), ModelError> {
        if (u as usize) >= self.num_users() {
            return Err(ModelError::UserOutOfRange { user: u, num_users: self.num_users() });
        }
        if (i as usize) >= self.num_items() {
            return Err(ModelError::ItemOutOfRange { item: i, num_items: self.num_items() });
        }
        Ok(())
    }

    fn check_kind(&self, expected: ModelKind) -> Result<(), ModelError> {
        if self.kind != expected {
            return Err(ModelError::KindMismatch { expected, found: self.kind });
        }
        Ok(())
    }

    /// GMF: single inner product.
    pub fn gmf_forward(&self, u: u32, i: u32) -> Result<ScoreComponents, ModelError> {
        self.check_kind(ModelKind::Gmf)?;
        self.check_ids(u, i)?;
        Ok(ScoreComponents::Scalar(dot(self.user_row(0, u), self.item_row(0, i))))
    }

    /// MMF: sum of the four independent inner products.
    pub fn mmf_forward(&self, u: u32, i: u32) -> Result<ScoreComponents, ModelError> {
        self.check_kind(ModelKind::Mmf)?;
        self.check_ids(u, i)?;
        let mut acc = 0.0;
        for p in 0..4 {
            acc += dot(self.user_row(p, u), self.item_row(p, i));
        }
        Ok(ScoreComponents::Scalar(acc))
    }

    /// CCF: complex multiplication contracted with dot products,
    /// `(U.P - V.Q) + (V.P + U.Q)i`.
    pub fn ccf_forward(&self, u: u32, i: u32) -> Result<ScoreComponents, ModelError> {
        self.check_kind(ModelKind::Ccf)?;
        self.check_ids(u, i)?;
        let (us, vs) = (self.user_row(0, u), self.user_row(1, u));
        let (ps, qs) = (self.item_row(0, i), self.item_row(1, i));
        Ok(ScoreComponents::Complex(Complex::new(
            dot(us, ps) - dot(vs, qs),
            dot(vs, ps) + dot(us, qs),
        )))
    }

    /// QCF: Hamilton product contracted with dot products.
    pub fn qcf_forward(&self, u: u32, i: u32) -> Result<ScoreComponents, ModelError> {
        self.check_kind(ModelKind::Qcf)?;
        self.check_ids(u, i)?;
        Ok(ScoreComponents::Quaternion(self.hamilton_contraction(u, i)))
    }

    fn hamilton_contraction(&self, u: u32, i: u32) -> Quaternion {
        let (us, vs, xs, ys) = (
            self.user_row(0, u),
            self.user_row(1, u),
            self.user_row(2, u),
            self.user_row(3, u),
        );
        let (ps, qs, ss, ts) = (
            self.item_row(0, i),
            self.item_row(1, i),
            self.item_row(2, i),
            self.item_row(3, i),
        );
        Quaternion::new(
            dot(us, ps) - dot(vs, qs) - dot(xs, ss) - dot(ys, ts),
            dot(us, qs) + dot(vs, ps) + dot(xs, ts) - dot(ys, ss),
            dot(us, ss) - dot(vs, ts) + dot(xs, ps) + dot(ys, qs),
            dot(us, ts) + dot(vs, ss) - dot(xs, qs) + dot(ys, ps),
        )
    }

    /// The user embedding at position `k` viewed as a quaternion
    /// (4-part tables only).
    pub fn user_quat(&self, u: u32, k: usize) -> Quaternion {
        debug_assert_eq!(self.parts(), 4);
        Quaternion::new(
            self.user_parts[0].at(u as usize, k),
            self.user_parts[1].at(u as usize, k),
            self.user_parts[2].at(u as usize, k),
            self.user_parts[3].at(u as usize, k),
        )
    }

    /// The item embedding at position `k` viewed as a quaternion.
    pub fn item_quat(&self, i: u32, k: usize) -> Quaternion {
        debug_assert_eq!(self.parts(), 4);
        Quaternion::new(
            self.item_parts[0].at(i as usize, k),
            self.item_parts[1].at(i as usize, k),
            self.item_parts[2].at(i as usize, k),
            self.item_parts[3].at(i as usize, k),
        )
    }

    /// Per-dimension Hamilton products of the user and item quaternion
    /// vectors; summing this vector componentwise gives `qcf_forward`.
    pub fn interaction_vector(&self, u: u32, i: u32) -> Result<Vec<Quaternion>, ModelError> {
        if self.parts() != 4 {
            return Err(ModelError::KindMismatch { expected: ModelKind::Qcf, found: self.kind });
        }
        self.check_ids(u, i)?;
        Ok((0..self.dim).map(|k| self.user_quat(u, k).hamilton(self.item_quat(i, k))).collect())
    }

    pub fn is_finite(&self) -> bool {
        self.user_parts.iter().chain(self.item_parts.iter()).all(|m| m.is_finite())
    }
}

/// Quaternion-weighted dense layer: `out[r] = act(sum_s W[r,s] (x) x[s])`
/// where `(x)` is the Hamilton product and `act` the split sigmoid.
#[derive(Debug, Clone, PartialEq)]
pub struct QuaternionDenseLayer {
    weights: [Matrix; 4],
}

impl QuaternionDenseLayer {
    pub fn init(out_dim: usize, in_dim: usize, rng: &mut impl rand_core::Rng) -> Result<Self, ModelError> {
        Ok(Self { weights: quaternion_init(out_dim, in_dim, rng)? })
    }

    pub fn from_weights(weights: [Matrix; 4]) -> Result<Self, ModelError> {
        let (r, c) = (weights[0].rows(), weights[0].cols());
        if weights.iter().any(|w| w.rows() != r || w.cols() != c) {
            return Err(ModelError::ShapeMismatch("layer weight matrices differ in shape".into()));
        }
        Ok(Self { weights })
    }

    pub fn out_dim(&self) -> usize {
        self.weights[0].rows()
    }

    pub fn in_dim(&self) -> usize {
        self.weights[0].cols()
    }

    pub fn weight(&self, r: usize, s: usize) -> Quaternion {
        Quaternion::new(
            self.weights[0].at(r, s),
            self.weights[1].at(r, s),
            self.weights[2].at(r, s),
            self.weights[3].at(r, s),
        )
    }

    pub fn weights(&self) -> &[Matrix; 4] {
        &self.weights
    }

    pub fn weights_mut(&mut self) -> &mut [Matrix; 4] {
        &mut self.weights
    }

    /// Hamilton-product affine map without activation.
    pub fn affine(&self, x: &[Quaternion]) -> Result<Vec<Quaternion>, ModelError> {
        if x.len() != self.in_dim() {
            return Err(ModelError::ShapeMismatch(format!(
                "layer expects input of length {}, got {}",
                self.in_dim(),
                x.len()
            )));
        }
        Ok((0..self.out_dim())
            .map(|r| {
                let mut acc = Quaternion::zero();
                for (s, &xs) in x.iter().enumerate() {
                    acc = acc + self.weight(r, s).hamilton(xs);
                }
                acc
            })
            .collect())
    }

    /// Affine map followed by the split sigmoid.
    pub fn forward(&self, x: &[Quaternion]) -> Result<Vec<Quaternion>, ModelError> {
        Ok(self.affine(x)?.into_iter().map(Quaternion::split_sigmoid).collect())
    }
}

/// The QCF+ head: one hidden quaternion layer of width `d` on the
/// per-dimension interaction vector, then a quaternion output unit whose
/// four components are the score.
#[derive(Debug, Clone, PartialEq)]
pub struct QcfPlusHead {
    pub hidden: QuaternionDenseLayer,
    pub output: QuaternionDenseLayer,
}

impl QcfPlusHead {
    pub fn init(dim: usize, seed: u64) -> Result<Self, ModelError> {
        Ok(Self {
            hidden: QuaternionDenseLayer::init(
                dim,
                dim,
                &mut rng::stream(seed, rng::STREAM_HEAD_HIDDEN),
            )?,
            output: QuaternionDenseLayer::init(
                1,
                dim,
                &mut rng::stream(seed, rng::STREAM_HEAD_OUTPUT),
            )?,
        })
    }
}

/// A scoring model: embedding table plus the optional QCF+ head.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub table: EmbeddingTable,
    pub head: Option<QcfPlusHead>,
    seed: u64,
}

impl Model {
    pub fn init(
        kind: ModelKind,
        num_users: usize,
        num_items: usize,
        dim: usize,
        seed: u64,
    ) -> Result<Self, ModelError> {
        let table = EmbeddingTable::init(kind, num_users, num_items, dim, seed)?;
        let head = match kind {
            ModelKind::QcfPlus => Some(QcfPlusHead::init(dim, seed)?),
            _ => None,
        };
        Ok(Self { table, head, seed })
    }

    pub fn kind(&self) -> ModelKind {
        self.table.kind()
    }

    pub fn dim(&self) -> usize {
        self.table.dim()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Pre-activation score components for one pair.
    pub fn score_components(&self, u: u32, i: u32) -> Result<ScoreComponents, ModelError> {
        match self.kind() {
            ModelKind::Gmf => self.table.gmf_forward(u, i),
            ModelKind::Mmf => self.table.mmf_forward(u, i),
            ModelKind::Ccf => self.table.ccf_forward(u, i),
            ModelKind::Qcf => self.table.qcf_forward(u, i),
            ModelKind::QcfPlus => {
                let head = self.head.as_ref().expect("qcf-plus model carries a head");
                let h = self.table.interaction_vector(u, i)?;
                let g = head.hidden.forward(&h)?;
                let out = head.output.affine(&g)?[0];
                Ok(ScoreComponents::Quaternion(out))
            }
        }
    }

    /// Recommendation score in (0, 1).
    pub fn predict(&self, u: u32, i: u32) -> Result<f64, ModelError> {
        predict_score(self.kind(), &self.score_components(u, i)?)
    }
}

/// Final score: mean of the component sigmoids.
pub fn predict_score(kind: ModelKind, comps: &ScoreComponents) -> Result<f64, ModelError> {
    if comps.count() != kind.components() {
        return Err(ModelError::ComponentMismatch {
            kind,
            expected: kind.components(),
            found: comps.count(),
        });
    }
    Ok(match *comps {
        ScoreComponents::Scalar(a) => stable_sigmoid(a),
        ScoreComponents::Complex(z) => (stable_sigmoid(z.im) + stable_sigmoid(z.re)) / 2.0,
        // Summed low component first: zeroed imaginary parts then fold to an
        // exact 1.5, so the reduction matches the closed form bit for bit.
        ScoreComponents::Quaternion(q) => {
            (stable_sigmoid(q.d) + stable_sigmoid(q.c) + stable_sigmoid(q.b) + stable_sigmoid(q.a))
                / 4.0
        }
    })
}

fn write_matrix(w: &mut impl Write, m: &Matrix) -> std::io::Result<()> {
    for v in m.data() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn read_matrix(r: &mut impl Read, rows: usize, cols: usize) -> Result<Matrix, ModelError> {
    let mut data = vec![0.0f64; rows * cols];
    let mut buf = [0u8; 8];
    for v in data.iter_mut() {
        r.read_exact(&mut buf)
            .map_err(|_| ModelError::BadCheckpoint("truncated matrix data".into()))?;
        *v = f64::from_le_bytes(buf);
    }
    Ok(Matrix::from_vec(rows, cols, data))
}

impl Model {
    /// Write the versioned binary checkpoint (`HYPERCF1`). Doubles are
    /// serialized little-endian and round-trip bit-exactly.
    pub fn save(&self, path: &Path) -> Result<(), ModelError> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(CHECKPOINT_MAGIC)?;
        w.write_all(&[self.kind().code()])?;
        w.write_all(&(self.dim() as u32).to_le_bytes())?;
        w.write_all(&(self.table.num_users() as u32).to_le_bytes())?;
        w.write_all(&(self.table.num_items() as u32).to_le_bytes())?;
        w.write_all(&self.seed.to_le_bytes())?;
        for p in 0..self.table.parts() {
            write_matrix(&mut w, self.table.user_part(p))?;
        }
        for p in 0..self.table.parts() {
            write_matrix(&mut w, self.table.item_part(p))?;
        }
        if let Some(head) = &self.head {
            for m in head.hidden.weights() {
                write_matrix(&mut w, m)?;
            }
            for m in head.output.weights() {
                write_matrix(&mut w, m)?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, ModelError> {
        let mut r = BufReader::new(File::open(path)?);
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)
            .map_err(|_| ModelError::BadCheckpoint("file too short for header".into()))?;
        if &magic != CHECKPOINT_MAGIC {
            return Err(ModelError::BadCheckpoint(format!(
                "bad magic {:?}, expected {:?}",
                String::from_utf8_lossy(&magic),
                String::from_utf8_lossy(CHECKPOINT_MAGIC)
            )));
        }
        let mut b1 = [0u8; 1];
        r.read_exact(&mut b1).map_err(|_| ModelError::BadCheckpoint("missing kind".into()))?;
        let kind = ModelKind::from_code(b1[0])
            .ok_or_else(|| ModelError::BadCheckpoint(format!("unknown kind code {}", b1[0])))?;
        let mut b4 = [0u8; 4];
        let mut next_u32 = |r: &mut BufReader<File>, what: &str| -> Result<u32, ModelError> {
            r.read_exact(&mut b4)
                .map_err(|_| ModelError::BadCheckpoint(format!("missing {what}")))?;
            Ok(u32::from_le_bytes(b4))
        };
        let dim = next_u32(&mut r, "dim")? as usize;
        let users = next_u32(&mut r, "user count")? as usize;
        let items = next_u32(&mut r, "item count")? as usize;
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b8).map_err(|_| ModelError::BadCheckpoint("missing seed".into()))?;
        let seed = u64::from_le_bytes(b8);
        if dim == 0 || users == 0 || items == 0 {
            return Err(ModelError::BadCheckpoint("zero dimension or entity count".into()));
        }

        let n = kind.parts();
        let mut user_parts = Vec::with_capacity(n);
        for _ in 0..n {
            user_parts.push(read_matrix(&mut r, users, dim)?);
        }
        let mut item_parts = Vec::with_capacity(n);
        for _ in 0..n {
            item_parts.push(read_matrix(&mut r, items, dim)?);
        }
        let head = if kind == ModelKind::QcfPlus {
            let hidden = [
                read_matrix(&mut r, dim, dim)?,
                read_matrix(&mut r, dim, dim)?,
                read_matrix(&mut r, dim, dim)?,
                read_matrix(&mut r, dim, dim)?,
            ];
            let output = [
                read_matrix(&mut r, 1, dim)?,
                read_matrix(&mut r, 1, dim)?,
                read_matrix(&mut r, 1, dim)?,
                read_matrix(&mut r, 1, dim)?,
            ];
            Some(QcfPlusHead {
                hidden: QuaternionDenseLayer::from_weights(hidden)?,
                output: QuaternionDenseLayer::from_weights(output)?,
            })
        } else {
            None
        };
        let mut extra = [0u8; 1];
        if r.read(&mut extra)? != 0 {
            return Err(ModelError::BadCheckpoint("trailing bytes after matrices".into()));
        }
        let table = EmbeddingTable::from_parts(kind, dim, user_parts, item_parts)?;
        if !table.is_finite() {
            return Err(ModelError::BadCheckpoint("non-finite entries".into()));
        }
        Ok(Self { table, head, seed })
    }
}
