//! Implicit-feedback dataset ingestion and the leave-one-out protocol.
//!
//! Raw interaction logs are binarized (every row counts as a positive),
//! deduplicated, filtered so each retained user has at least
//! `min_interactions` distinct items, and remapped to dense contiguous ids.
//! The split holds, per user, the training positives, one held-out test item
//! (the latest by timestamp when timestamps exist) and 200 fixed evaluation
//! negatives drawn from items the user never interacted with.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::rng;

/// Number of evaluation negatives paired with each held-out item.
pub const EVAL_NEGATIVES: usize = 200;

pub const SPLIT_MAGIC: &[u8; 14] = b"HYPERCF-SPLIT1";

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Unreadable { path: String, source: std::io::Error },
    #[error("{malformed} of {total} rows malformed (>1%), first bad row at line {first_line}: {first_reason}")]
    TooManyMalformed { malformed: usize, total: usize, first_line: usize, first_reason: String },
    #[error("no interactions to build a dataset from")]
    NoInteractions,
    #[error("dataset empty after applying the minimum-interaction filter ({min_interactions})")]
    EmptyAfterFilter { min_interactions: usize },
    #[error("user {user} has only {available} interactions, cannot hold one out")]
    TooFewForHoldout { user: String, available: usize },
    #[error("user {user} has only {eligible} non-interacted items, need {needed} evaluation negatives")]
    TooFewEligibleNegatives { user: String, eligible: usize, needed: usize },
    #[error("bad split file: {0}")]
    BadSplitFile(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Field meaning, in file column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    User,
    Item,
    Rating,
    Timestamp,
    Skip,
}

impl std::str::FromStr for Column {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "user" => Ok(Column::User),
            "item" => Ok(Column::Item),
            "rating" => Ok(Column::Rating),
            "timestamp" | "ts" => Ok(Column::Timestamp),
            "skip" | "-" => Ok(Column::Skip),
            other => Err(format!("unknown column name {other:?}")),
        }
    }
}

/// Parser configuration for raw interaction logs.
#[derive(Debug, Clone)]
pub struct FormatOptions {
    pub delimiter: u8,
    pub has_header: bool,
    pub with_timestamp: bool,
    pub columns: Vec<Column>,
}

impl Default for FormatOptions {
    /// The MovieLens export shape: `user <tab> item <tab> rating <tab> timestamp`.
    fn default() -> Self {
        Self {
            delimiter: b'\t',
            has_header: false,
            with_timestamp: true,
            columns: vec![Column::User, Column::Item, Column::Rating, Column::Timestamp],
        }
    }
}

impl FormatOptions {
    pub fn without_timestamp() -> Self {
        Self {
            with_timestamp: false,
            columns: vec![Column::User, Column::Item, Column::Rating],
            ..Self::default()
        }
    }
}

/// One raw interaction row. The rating is kept only until binarization.
#[derive(Debug, Clone, PartialEq)]
pub struct Interaction {
    pub user: String,
    pub item: String,
    pub rating: f64,
    pub timestamp: Option<i64>,
}

/// Result of parsing a raw log.
#[derive(Debug)]
pub struct LoadOutcome {
    pub interactions: Vec<Interaction>,
    pub malformed: usize,
    pub total_rows: usize,
}

fn parse_row(line: &str, opts: &FormatOptions) -> Result<Interaction, String> {
    let fields: Vec<&str> = line.split(opts.delimiter as char).collect();
    if fields.len() < opts.columns.len() {
        return Err(format!("expected {} fields, got {}", opts.columns.len(), fields.len()));
    }
    let mut user = None;
    let mut item = None;
    let mut rating = 1.0;
    let mut timestamp = None;
    for (col, &field) in opts.columns.iter().zip(fields.iter()) {
        let field = field.trim();
        match col {
            Column::User => {
                if field.is_empty() {
                    return Err("empty user id".into());
                }
                user = Some(field.to_string());
            }
            Column::Item => {
                if field.is_empty() {
                    return Err("empty item id".into());
                }
                item = Some(field.to_string());
            }
            Column::Rating => {
                rating = field.parse::<f64>().map_err(|_| format!("bad rating {field:?}"))?;
            }
            Column::Timestamp => {
                if opts.with_timestamp {
                    timestamp =
                        Some(field.parse::<i64>().map_err(|_| format!("bad timestamp {field:?}"))?);
                }
            }
            Column::Skip => {}
        }
    }
    if opts.with_timestamp && timestamp.is_none() {
        return Err("missing timestamp column".into());
    }
    Ok(Interaction {
        user: user.ok_or("missing user column")?,
        item: item.ok_or("missing item column")?,
        rating,
        timestamp,
    })
}

/// Parse a raw interaction log. Malformed rows are counted; more than 1%
/// malformed aborts with a diagnostic naming the first offender.
pub fn load_interactions(path: &Path, opts: &FormatOptions) -> Result<LoadOutcome, DataError> {
    let file = File::open(path)
        .map_err(|source| DataError::Unreadable { path: path.display().to_string(), source })?;
    let reader = BufReader::new(file);

    let mut interactions = Vec::new();
    let mut malformed = 0usize;
    let mut total = 0usize;
    let mut first_bad: Option<(usize, String)> = None;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if idx == 0 && opts.has_header {
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        total += 1;
        match parse_row(&line, opts) {
            Ok(it) => interactions.push(it),
            Err(reason) => {
                malformed += 1;
                if first_bad.is_none() {
                    first_bad = Some((idx + 1, reason));
                }
            }
        }
    }
    if total > 0 && (malformed as f64) > 0.01 * (total as f64) {
        let (first_line, first_reason) = first_bad.unwrap();
        return Err(DataError::TooManyMalformed { malformed, total, first_line, first_reason });
    }
    Ok(LoadOutcome { interactions, malformed, total_rows: total })
}

/// Filtered, densely remapped implicit-feedback dataset.
#[derive(Debug, Clone)]
pub struct Dataset {
    user_ids: Vec<String>,
    item_ids: Vec<String>,
    user_map: HashMap<String, u32>,
    item_map: HashMap<String, u32>,
    /// Per user, (item, timestamp) sorted by item id.
    interactions: Vec<Vec<(u32, Option<i64>)>>,
    has_timestamps: bool,
}

impl Dataset {
    pub fn num_users(&self) -> usize {
        self.user_ids.len()
    }

    pub fn num_items(&self) -> usize {
        self.item_ids.len()
    }

    pub fn num_actions(&self) -> usize {
        self.interactions.iter().map(Vec::len).sum()
    }

    pub fn density(&self) -> f64 {
        self.num_actions() as f64 / (self.num_users() as f64 * self.num_items() as f64)
    }

    pub fn has_timestamps(&self) -> bool {
        self.has_timestamps
    }

    pub fn user_id(&self, u: u32) -> &str {
        &self.user_ids[u as usize]
    }

    pub fn item_id(&self, i: u32) -> &str {
        &self.item_ids[i as usize]
    }

    pub fn user_index(&self, raw: &str) -> Option<u32> {
        self.user_map.get(raw).copied()
    }

    pub fn item_index(&self, raw: &str) -> Option<u32> {
        self.item_map.get(raw).copied()
    }

    pub fn user_interactions(&self, u: u32) -> &[(u32, Option<i64>)] {
        &self.interactions[u as usize]
    }

    pub fn user_has_item(&self, u: u32, i: u32) -> bool {
        self.interactions[u as usize].binary_search_by_key(&i, |&(it, _)| it).is_ok()
    }
}

/// Binarize, deduplicate, filter and remap a raw interaction list.
///
/// Duplicate (user, item) pairs collapse to the latest timestamp. Users with
/// fewer than `min_interactions` distinct items are dropped, items left with
/// no interactions disappear, and the filter reruns until stable. Dense ids
/// are assigned in first-seen order over the surviving rows.
pub fn build_dataset(
    interactions: &[Interaction],
    min_interactions: usize,
) -> Result<Dataset, DataError> {
    if interactions.is_empty() {
        return Err(DataError::NoInteractions);
    }
    let has_timestamps = interactions.iter().all(|it| it.timestamp.is_some());

    // Deduplicate keeping the latest timestamp, preserving first-seen order.
    let mut pair_index: HashMap<(&str, &str), usize> = HashMap::new();
    let mut pairs: Vec<(&str, &str, Option<i64>)> = Vec::new();
    for it in interactions {
        match pair_index.get(&(it.user.as_str(), it.item.as_str())) {
            Some(&idx) => {
                if it.timestamp > pairs[idx].2 {
                    pairs[idx].2 = it.timestamp;
                }
            }
            None => {
                pair_index.insert((it.user.as_str(), it.item.as_str()), pairs.len());
                pairs.push((it.user.as_str(), it.item.as_str(), it.timestamp));
            }
        }
    }

    // Iterate the degree filter to a fixpoint. Items vanish implicitly when
    // all their rows are gone; re-check users in case that ever matters.
    let mut alive: Vec<bool> = vec![true; pairs.len()];
    loop {
        let mut degree: HashMap<&str, usize> = HashMap::new();
        for (idx, &(user, _, _)) in pairs.iter().enumerate() {
            if alive[idx] {
                *degree.entry(user).or_insert(0) += 1;
            }
        }
        let mut changed = false;
        for (idx, &(user, _, _)) in pairs.iter().enumerate() {
            if alive[idx] && degree[user] < min_interactions {
                alive[idx] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    // Dense remap in first-seen order over surviving rows.
    let mut user_ids = Vec::new();
    let mut item_ids = Vec::new();
    let mut user_map: HashMap<String, u32> = HashMap::new();
    let mut item_map: HashMap<String, u32> = HashMap::new();
    let mut per_user: Vec<Vec<(u32, Option<i64>)>> = Vec::new();
    for (idx, &(user, item, ts)) in pairs.iter().enumerate() {
        if !alive[idx] {
            continue;
        }
        let u = *user_map.entry(user.to_string()).or_insert_with(|| {
            user_ids.push(user.to_string());
            per_user.push(Vec::new());
            (user_ids.len() - 1) as u32
        });
        let i = *item_map.entry(item.to_string()).or_insert_with(|| {
            item_ids.push(item.to_string());
            (item_ids.len() - 1) as u32
        });
        per_user[u as usize].push((i, ts));
    }
    if user_ids.is_empty() {
        return Err(DataError::EmptyAfterFilter { min_interactions });
    }
    for list in per_user.iter_mut() {
        list.sort_unstable_by_key(|&(i, _)| i);
    }
    Ok(Dataset { user_ids, item_ids, user_map, item_map, interactions: per_user, has_timestamps })
}

/// Training positives: per-user sorted item lists over dense ids.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainSet {
    num_items: u32,
    positives: Vec<Vec<u32>>,
}

impl TrainSet {
    pub fn new(num_items: u32, mut positives: Vec<Vec<u32>>) -> Self {
        for list in positives.iter_mut() {
            list.sort_unstable();
        }
        Self { num_items, positives }
    }

    pub fn num_users(&self) -> usize {
        self.positives.len()
    }

    pub fn num_items(&self) -> u32 {
        self.num_items
    }

    pub fn positives(&self, u: u32) -> &[u32] {
        &self.positives[u as usize]
    }

    pub fn num_positives(&self) -> usize {
        self.positives.iter().map(Vec::len).sum()
    }

    pub fn contains(&self, u: u32, i: u32) -> bool {
        self.positives[u as usize].binary_search(&i).is_ok()
    }
}

/// Leave-one-out split: training positives plus, per user, the held-out item
/// and its fixed 200 evaluation negatives.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub train: TrainSet,
    pub test_items: Vec<u32>,
    pub eval_negatives: Vec<Vec<u32>>,
}

impl Split {
    pub fn num_users(&self) -> usize {
        self.train.num_users()
    }

    pub fn num_items(&self) -> u32 {
        self.train.num_items()
    }
}

/// Hold out one interaction per user: the strictly latest when timestamps
/// exist (ties broken by the larger item id), otherwise a seeded uniform
/// draw. Evaluation negatives are left empty; see [`sample_eval_negatives`].
pub fn leave_one_out(dataset: &Dataset, seed: u64) -> Result<Split, DataError> {
    let mut holdout_rng = rng::stream(seed, rng::STREAM_HOLDOUT);
    let mut train_lists = Vec::with_capacity(dataset.num_users());
    let mut test_items = Vec::with_capacity(dataset.num_users());
    for u in 0..dataset.num_users() as u32 {
        let items = dataset.user_interactions(u);
        if items.len() < 2 {
            return Err(DataError::TooFewForHoldout {
                user: dataset.user_id(u).to_string(),
                available: items.len(),
            });
        }
        let held_idx = if dataset.has_timestamps() {
            // max by (timestamp, item id); the list is item-sorted, so
            // max_by_key keeps the larger item id on timestamp ties.
            (0..items.len())
                .max_by_key(|&idx| (items[idx].1, items[idx].0))
                .expect("nonempty list")
        } else {
            rng::sample_below(&mut holdout_rng, items.len() as u64) as usize
        };
        test_items.push(items[held_idx].0);
        train_lists.push(
            items
                .iter()
                .enumerate()
                .filter(|&(idx, _)| idx != held_idx)
                .map(|(_, &(i, _))| i)
                .collect(),
        );
    }
    Ok(Split {
        train: TrainSet::new(dataset.num_items() as u32, train_lists),
        test_items,
        eval_negatives: vec![Vec::new(); dataset.num_users()],
    })
}

/// Sample, per user, [`EVAL_NEGATIVES`] distinct items disjoint from all of
/// that user's interactions. Errors (naming the user) when fewer than 200
/// items are eligible.
pub fn sample_eval_negatives(
    dataset: &Dataset,
    split: &mut Split,
    seed: u64,
) -> Result<(), DataError> {
    let mut neg_rng = rng::stream(seed, rng::STREAM_EVAL_NEG);
    let n = dataset.num_items() as u64;
    for u in 0..dataset.num_users() as u32 {
        let interacted = dataset.user_interactions(u).len();
        let eligible = dataset.num_items() - interacted;
        if eligible < EVAL_NEGATIVES {
            return Err(DataError::TooFewEligibleNegatives {
                user: dataset.user_id(u).to_string(),
                eligible,
                needed: EVAL_NEGATIVES,
            });
        }
        let mut drawn = Vec::with_capacity(EVAL_NEGATIVES);
        while drawn.len() < EVAL_NEGATIVES {
            let cand = rng::sample_below(&mut neg_rng, n) as u32;
            if dataset.user_has_item(u, cand) {
                continue;
            }
            if let Err(pos) = drawn.binary_search(&cand) {
                drawn.insert(pos, cand);
            }
        }
        split.eval_negatives[u as usize] = drawn;
    }
    Ok(())
}

fn write_u32_list(w: &mut impl Write, xs: &[u32]) -> std::io::Result<()> {
    w.write_all(&(xs.len() as u32).to_le_bytes())?;
    for &x in xs {
        w.write_all(&x.to_le_bytes())?;
    }
    Ok(())
}

/// Write the deterministic binary split cache (`HYPERCF-SPLIT1`).
pub fn write_split(path: &Path, split: &Split, seed: u64) -> Result<(), DataError> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(SPLIT_MAGIC)?;
    w.write_all(&(split.num_users() as u32).to_le_bytes())?;
    w.write_all(&split.num_items().to_le_bytes())?;
    w.write_all(&seed.to_le_bytes())?;
    for u in 0..split.num_users() as u32 {
        write_u32_list(&mut w, split.train.positives(u))?;
        w.write_all(&split.test_items[u as usize].to_le_bytes())?;
        write_u32_list(&mut w, &split.eval_negatives[u as usize])?;
    }
    w.flush()?;
    Ok(())
}

struct SplitReader<R: Read> {
    inner: R,
}

impl<R: Read> SplitReader<R> {
    fn u32(&mut self, what: &str) -> Result<u32, DataError> {
        let mut b = [0u8; 4];
        self.inner
            .read_exact(&mut b)
            .map_err(|_| DataError::BadSplitFile(format!("truncated reading {what}")))?;
        Ok(u32::from_le_bytes(b))
    }

    fn u32_list(&mut self, what: &str) -> Result<Vec<u32>, DataError> {
        let len = self.u32(what)? as usize;
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            out.push(self.u32(what)?);
        }
        Ok(out)
    }
}

/// Read a split cache, validating the protocol invariants (test item outside
/// the training positives, negatives disjoint from both).
pub fn read_split(path: &Path) -> Result<(Split, u64), DataError> {
    let mut file = BufReader::new(File::open(path).map_err(|source| DataError::Unreadable {
        path: path.display().to_string(),
        source,
    })?);
    let mut magic = [0u8; 14];
    file.read_exact(&mut magic)
        .map_err(|_| DataError::BadSplitFile("file too short for header".into()))?;
    if &magic != SPLIT_MAGIC {
        return Err(DataError::BadSplitFile("bad magic header".into()));
    }
    let mut r = SplitReader { inner: file };
    let num_users = r.u32("user count")? as usize;
    let num_items = r.u32("item count")?;
    let mut b8 = [0u8; 8];
    r.inner.read_exact(&mut b8).map_err(|_| DataError::BadSplitFile("missing seed".into()))?;
    let seed = u64::from_le_bytes(b8);

    let mut train_lists = Vec::with_capacity(num_users);
    let mut test_items = Vec::with_capacity(num_users);
    let mut negatives = Vec::with_capacity(num_users);
    for u in 0..num_users {
        let train = r.u32_list("train items")?;
        let test = r.u32("test item")?;
        let negs = r.u32_list("negatives")?;
        if train.binary_search(&test).is_ok() {
            return Err(DataError::BadSplitFile(format!("user {u}: test item in train set")));
        }
        for &neg in &negs {
            if neg == test || train.binary_search(&neg).is_ok() {
                return Err(DataError::BadSplitFile(format!(
                    "user {u}: negative {neg} overlaps interactions"
                )));
            }
        }
        train_lists.push(train);
        test_items.push(test);
        negatives.push(negs);
    }
    let mut extra = [0u8; 1];
    if r.inner.read(&mut extra)? != 0 {
        return Err(DataError::BadSplitFile("trailing bytes".into()));
    }
    Ok((
        Split {
            train: TrainSet::new(num_items, train_lists),
            test_items,
            eval_negatives: negatives,
        },
        seed,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn it(user: &str, item: &str, ts: Option<i64>) -> Interaction {
        Interaction { user: user.into(), item: item.into(), rating: 1.0, timestamp: ts }
    }

    fn tmpfile(name: &str, contents: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join(format!("hypercf-data-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join(name);
        std::fs::write(&path, contents).unwrap();
        path
    }

    #[test]
    fn loads_wellformed_tsv() {
        let path = tmpfile("ok.tsv", "u1\ti1\t5\t100\nu1\ti2\t3\t200\nu2\ti1\t4\t50\n");
        let out = load_interactions(&path, &FormatOptions::default()).unwrap();
        assert_eq!(out.interactions.len(), 3);
        assert_eq!(out.malformed, 0);
        assert_eq!(
            out.interactions[0],
            Interaction { user: "u1".into(), item: "i1".into(), rating: 5.0, timestamp: Some(100) }
        );
    }

    #[test]
    fn missing_timestamp_is_malformed() {
        let path = tmpfile("missing_ts.tsv", "u1\ti1\t5\t100\nu1\ti2\t3\n");
        let out = load_interactions(&path, &FormatOptions::default());
        // 1 of 2 rows malformed: above the 1% threshold, aborts.
        match out {
            Err(DataError::TooManyMalformed { malformed, total, first_line, .. }) => {
                assert_eq!((malformed, total, first_line), (1, 2, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tolerates_under_one_percent_malformed() {
        let mut rows = String::new();
        for k in 0..300 {
            rows.push_str(&format!("u{}\ti{}\t1\t{}\n", k % 30, k, k));
        }
        rows.push_str("broken-row\n");
        let path = tmpfile("mostly_ok.tsv", &rows);
        let out = load_interactions(&path, &FormatOptions::default()).unwrap();
        assert_eq!(out.interactions.len(), 300);
        assert_eq!(out.malformed, 1);
        assert_eq!(out.total_rows, 301);
    }

    #[test]
    fn unreadable_file_errors() {
        let missing = Path::new("/nonexistent/hypercf/raw.tsv");
        assert!(matches!(
            load_interactions(missing, &FormatOptions::default()),
            Err(DataError::Unreadable { .. })
        ));
    }

    #[test]
    fn csv_with_header_and_column_order() {
        let path = tmpfile("custom.csv", "item,user,when\nA,alice,9\nB,alice,10\n");
        let opts = FormatOptions {
            delimiter: b',',
            has_header: true,
            with_timestamp: true,
            columns: vec![Column::Item, Column::User, Column::Timestamp],
        };
        let out = load_interactions(&path, &opts).unwrap();
        assert_eq!(out.interactions.len(), 2);
        assert_eq!(out.interactions[1], it("alice", "B", Some(10)));
    }

    #[test]
    fn five_interactions_is_the_retention_boundary() {
        let five: Vec<Interaction> = (0..5).map(|k| it("u", &format!("i{k}"), Some(k))).collect();
        let ds = build_dataset(&five, 5).unwrap();
        assert_eq!((ds.num_users(), ds.num_items(), ds.num_actions()), (1, 5, 5));

        let four: Vec<Interaction> = (0..4).map(|k| it("u", &format!("i{k}"), Some(k))).collect();
        assert!(matches!(build_dataset(&four, 5), Err(DataError::EmptyAfterFilter { .. })));
    }

    #[test]
    fn duplicates_collapse_to_distinct_items() {
        let mut rows = Vec::new();
        for k in 0..6 {
            rows.push(it("u", &format!("i{k}"), Some(k)));
        }
        // Duplicate pairs with fresher timestamps.
        rows.push(it("u", "i0", Some(50)));
        rows.push(it("u", "i1", Some(40)));
        let ds = build_dataset(&rows, 5).unwrap();
        assert_eq!(ds.num_actions(), 6);
        let distinct: std::collections::HashSet<u32> =
            ds.user_interactions(0).iter().map(|&(i, _)| i).collect();
        assert_eq!(distinct.len(), 6);
        // Latest timestamp won for the duplicated pair.
        let i0 = ds.item_index("i0").unwrap();
        let ts = ds.user_interactions(0).iter().find(|&&(i, _)| i == i0).unwrap().1;
        assert_eq!(ts, Some(50));
    }

    #[test]
    fn filtering_drops_light_users_and_orphan_items() {
        let mut rows = Vec::new();
        for k in 0..5 {
            rows.push(it("heavy", &format!("shared{k}"), Some(k)));
        }
        rows.push(it("light", "orphan", Some(1)));
        rows.push(it("light", "shared0", Some(2)));
        let ds = build_dataset(&rows, 5).unwrap();
        assert_eq!(ds.num_users(), 1);
        assert_eq!(ds.num_items(), 5);
        assert!(ds.item_index("orphan").is_none());
        assert!(ds.user_index("light").is_none());
    }

    #[test]
    fn filter_soundness_full_scan() {
        // Mixed heavy/light users; after filtering every retained user has
        // >= 5 distinct items and every retained item >= 1 interaction.
        let mut rows = Vec::new();
        for u in 0..30 {
            let degree = 3 + u % 7;
            for k in 0..degree {
                rows.push(it(&format!("u{u}"), &format!("i{}", (u * 5 + k * 3) % 40), Some(k as i64)));
            }
        }
        let ds = build_dataset(&rows, 5).unwrap();
        let mut item_seen = vec![0usize; ds.num_items()];
        for u in 0..ds.num_users() as u32 {
            let items = ds.user_interactions(u);
            let distinct: std::collections::HashSet<u32> =
                items.iter().map(|&(i, _)| i).collect();
            assert!(distinct.len() >= 5, "user {u} kept with degree {}", distinct.len());
            assert_eq!(distinct.len(), items.len(), "duplicates survived");
            for &(i, _) in items {
                item_seen[i as usize] += 1;
            }
        }
        assert!(item_seen.iter().all(|&n| n >= 1), "orphan item survived the filter");
    }

    #[test]
    fn remap_is_bijective_and_first_seen() {
        let mut rows = Vec::new();
        for u in ["b", "a"] {
            for k in 0..5 {
                rows.push(it(u, &format!("{u}{k}"), Some(k)));
            }
        }
        let ds = build_dataset(&rows, 5).unwrap();
        assert_eq!(ds.user_id(0), "b");
        assert_eq!(ds.user_id(1), "a");
        for u in 0..ds.num_users() as u32 {
            assert_eq!(ds.user_index(ds.user_id(u)), Some(u));
        }
        for i in 0..ds.num_items() as u32 {
            assert_eq!(ds.item_index(ds.item_id(i)), Some(i));
        }
    }

    #[test]
    fn density_matches_hand_computation() {
        let rows: Vec<Interaction> =
            (0..5).map(|k| it("u", &format!("i{k}"), Some(k))).collect();
        let ds = build_dataset(&rows, 5).unwrap();
        assert!((ds.density() - 5.0 / (1.0 * 5.0)).abs() < 1e-12);
    }

    #[test]
    fn holdout_takes_latest_timestamp() {
        let rows = vec![
            it("u", "a", Some(10)),
            it("u", "b", Some(20)),
            it("u", "c", Some(30)),
            it("u", "d", Some(5)),
            it("u", "e", Some(15)),
        ];
        let ds = build_dataset(&rows, 5).unwrap();
        let split = leave_one_out(&ds, 1).unwrap();
        assert_eq!(split.test_items[0], ds.item_index("c").unwrap());
        assert_eq!(split.train.positives(0).len(), 4);
        assert!(!split.train.contains(0, split.test_items[0]));
    }

    #[test]
    fn holdout_breaks_timestamp_ties_by_larger_item_id() {
        let rows = vec![
            it("u", "a", Some(10)),
            it("u", "b", Some(30)),
            it("u", "c", Some(30)),
            it("u", "d", Some(5)),
            it("u", "e", Some(15)),
        ];
        let ds = build_dataset(&rows, 5).unwrap();
        let split = leave_one_out(&ds, 1).unwrap();
        let (b, c) = (ds.item_index("b").unwrap(), ds.item_index("c").unwrap());
        assert_eq!(split.test_items[0], b.max(c));
    }

    #[test]
    fn holdout_without_timestamps_is_seeded() {
        let rows: Vec<Interaction> =
            (0..8).map(|k| it("u", &format!("i{k}"), None)).collect();
        let ds = build_dataset(&rows, 5).unwrap();
        let s1 = leave_one_out(&ds, 7).unwrap();
        let s2 = leave_one_out(&ds, 7).unwrap();
        assert_eq!(s1, s2);
        // Train keeps everything but the holdout.
        assert_eq!(s1.train.positives(0).len(), 7);
    }

    #[test]
    fn split_partitions_each_user() {
        let mut rows = Vec::new();
        for u in 0..4 {
            for k in 0..6 {
                rows.push(it(&format!("u{u}"), &format!("i{}", (u * 3 + k) % 10), Some(k)));
            }
        }
        let ds = build_dataset(&rows, 5).unwrap();
        let split = leave_one_out(&ds, 3).unwrap();
        for u in 0..ds.num_users() as u32 {
            let mut rebuilt: Vec<u32> = split.train.positives(u).to_vec();
            rebuilt.push(split.test_items[u as usize]);
            rebuilt.sort_unstable();
            let full: Vec<u32> = ds.user_interactions(u).iter().map(|&(i, _)| i).collect();
            assert_eq!(rebuilt, full);
        }
    }

    /// Needs `users * per_user >= items` so every item id below `items`
    /// actually occurs and the dense item count equals `items`.
    fn synthetic_dataset(users: usize, items: usize, per_user: usize) -> Dataset {
        let mut rows = Vec::new();
        for u in 0..users {
            for k in 0..per_user {
                let item = (u * per_user + k) % items;
                rows.push(it(&format!("u{u}"), &format!("i{item}"), Some((u * per_user + k) as i64)));
            }
        }
        build_dataset(&rows, 5).unwrap()
    }

    #[test]
    fn eval_negatives_are_disjoint_and_seeded() {
        let ds = synthetic_dataset(40, 230, 8);
        let mut split = leave_one_out(&ds, 5).unwrap();
        sample_eval_negatives(&ds, &mut split, 5).unwrap();
        let mut split2 = leave_one_out(&ds, 5).unwrap();
        sample_eval_negatives(&ds, &mut split2, 5).unwrap();
        assert_eq!(split, split2);
        for u in 0..ds.num_users() as u32 {
            let negs = &split.eval_negatives[u as usize];
            assert_eq!(negs.len(), EVAL_NEGATIVES);
            let distinct: std::collections::HashSet<&u32> = negs.iter().collect();
            assert_eq!(distinct.len(), EVAL_NEGATIVES);
            for &nn in negs {
                assert!(!ds.user_has_item(u, nn));
                assert_ne!(nn, split.test_items[u as usize]);
                assert!(!split.train.contains(u, nn));
            }
            // Candidate list = test item + 200 negatives = 201.
            assert_eq!(1 + negs.len(), 201);
        }
    }

    #[test]
    fn too_few_eligible_items_names_the_user() {
        let ds = synthetic_dataset(3, 20, 8);
        let mut split = leave_one_out(&ds, 5).unwrap();
        match sample_eval_negatives(&ds, &mut split, 5) {
            Err(DataError::TooFewEligibleNegatives { user, needed, .. }) => {
                assert!(user.starts_with('u'));
                assert_eq!(needed, EVAL_NEGATIVES);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn split_file_round_trips_and_is_byte_stable() {
        let ds = synthetic_dataset(40, 240, 7);
        let mut split = leave_one_out(&ds, 9).unwrap();
        sample_eval_negatives(&ds, &mut split, 9).unwrap();
        let dir = std::env::temp_dir().join(format!("hypercf-split-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p1 = dir.join("a.split");
        let p2 = dir.join("b.split");
        write_split(&p1, &split, 9).unwrap();
        write_split(&p2, &split, 9).unwrap();
        assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
        let (loaded, seed) = read_split(&p1).unwrap();
        assert_eq!(loaded, split);
        assert_eq!(seed, 9);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn split_file_rejects_corruption() {
        let dir = std::env::temp_dir().join(format!("hypercf-splitbad-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.split");
        std::fs::write(&path, b"WRONG-MAGIC!!!").unwrap();
        assert!(matches!(read_split(&path), Err(DataError::BadSplitFile(_))));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
