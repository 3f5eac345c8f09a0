//! Symmetric group characters by the Murnaghan-Nakayama rule, with an
//! optional on-disk cache.
//!
//! The cache file starts with the header `pillowchar v1` followed by one
//! record per line, `N|irrep|class|value`, with partitions written as
//! comma-separated parts. A file is discarded as a whole if it fails to
//! parse, if spot-checked values disagree with a fresh computation, or if
//! any complete column (all irreps at one class) violates the column
//! orthogonality relations, which catch any single altered value.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::partition::Partition;
use crate::error::{Error, Result};

pub const CACHE_HEADER: &str = "pillowchar v1";
pub const CACHE_FILE: &str = "characters.txt";
/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "PILLOW_CACHE_DIR";

/// How many loaded records are recomputed before the cache is trusted.
const SPOT_CHECKS: usize = 16;

/// What happened when a cache file was opened.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    /// No file backing; values live in memory only.
    InMemory,
    /// No cache file existed yet.
    Fresh,
    /// Records were loaded and spot checks passed.
    Loaded(usize),
    /// The file was unreadable or wrong and was ignored.
    Discarded(String),
}

type Key = (Partition, Partition);

/// Memoized character values.
pub struct CharacterTable {
    /// Intermediate Murnaghan-Nakayama values keyed by (shape, remaining class).
    memo: RwLock<HashMap<Key, BigInt>>,
    /// Values requested through [`character`](Self::character); persisted.
    stored: RwLock<BTreeMap<Key, BigInt>>,
    path: Option<PathBuf>,
    status: CacheStatus,
}

impl Default for CharacterTable {
    fn default() -> Self {
        CharacterTable::in_memory()
    }
}

impl CharacterTable {
    pub fn in_memory() -> Self {
        CharacterTable {
            memo: RwLock::default(),
            stored: RwLock::default(),
            path: None,
            status: CacheStatus::InMemory,
        }
    }

    /// Opens (or prepares to create) `dir/characters.txt`.
    pub fn open(dir: &Path) -> Self {
        let path = dir.join(CACHE_FILE);
        let mut table = CharacterTable::in_memory();
        table.status = match fs::read_to_string(&path) {
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => CacheStatus::Fresh,
            Err(e) => CacheStatus::Discarded(e.to_string()),
            Ok(text) => match parse_cache(&text) {
                Err(reason) => CacheStatus::Discarded(reason),
                Ok(records) => match table.spot_check(&records) {
                    Err(reason) => CacheStatus::Discarded(reason),
                    Ok(()) => {
                        let n = records.len();
                        *table.stored.write().expect("cache lock poisoned") = records;
                        CacheStatus::Loaded(n)
                    }
                },
            },
        };
        table.path = Some(path);
        table
    }

    /// Cache directory: `dir_override` if given, then `PILLOW_CACHE_DIR`,
    /// then the user cache directory.
    pub fn cache_dir(dir_override: Option<&Path>) -> Option<PathBuf> {
        if let Some(d) = dir_override {
            return Some(d.to_path_buf());
        }
        if let Some(d) = std::env::var_os(CACHE_ENV) {
            return Some(PathBuf::from(d));
        }
        let base = std::env::var_os("XDG_CACHE_HOME")
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))?;
        Some(base.join("pillowcase"))
    }

    pub fn status(&self) -> &CacheStatus {
        &self.status
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn stored_len(&self) -> usize {
        self.stored.read().expect("cache lock poisoned").len()
    }

    fn spot_check(&self, records: &BTreeMap<Key, BigInt>) -> std::result::Result<(), String> {
        let step = (records.len() / SPOT_CHECKS).max(1);
        for ((irrep, class), value) in records.iter().step_by(step) {
            let fresh = self.compute(irrep, class);
            if fresh != *value {
                return Err(format!(
                    "cached value for irrep {irrep} at class {class} is {value}, expected {fresh}"
                ));
            }
        }
        check_columns(records)
    }

    /// `chi_irrep(class)`.
    pub fn character(&self, irrep: &Partition, class: &Partition) -> Result<BigInt> {
        if irrep.size() != class.size() {
            return Err(Error::SizeMismatch {
                irrep: irrep.size(),
                class: class.size(),
            });
        }
        let key = (irrep.clone(), class.clone());
        if let Some(v) = self.stored.read().expect("cache lock poisoned").get(&key) {
            return Ok(v.clone());
        }
        let v = self.compute(irrep, class);
        self.stored
            .write()
            .expect("cache lock poisoned")
            .insert(key, v.clone());
        Ok(v)
    }

    fn compute(&self, shape: &Partition, class: &Partition) -> BigInt {
        if shape.is_empty() {
            return BigInt::one();
        }
        if class.parts().first().is_none_or(|&p| p == 1) {
            return shape.dimension();
        }
        let key = (shape.clone(), class.clone());
        if let Some(v) = self.memo.read().expect("memo lock poisoned").get(&key) {
            return v.clone();
        }
        let r = class.parts()[0];
        let rest = Partition::new(class.parts()[1..].to_vec());
        let mut total = BigInt::from(0);
        for (smaller, negative) in remove_border_strips(shape, r) {
            let v = self.compute(&smaller, &rest);
            if negative {
                total -= v;
            } else {
                total += v;
            }
        }
        self.memo
            .write()
            .expect("memo lock poisoned")
            .insert(key, total.clone());
        total
    }

    /// Writes all stored values, merged with whatever another process
    /// wrote meanwhile. No-op for in-memory tables.
    pub fn persist(&self) -> Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        let mut merged = fs::read_to_string(path)
            .ok()
            .and_then(|t| parse_cache(&t).ok())
            .unwrap_or_default();
        merged.extend(
            self.stored
                .read()
                .expect("cache lock poisoned")
                .iter()
                .map(|(k, v)| (k.clone(), v.clone())),
        );
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        {
            let mut out = std::io::BufWriter::new(fs::File::create(&tmp)?);
            writeln!(out, "{CACHE_HEADER}")?;
            for ((irrep, class), value) in &merged {
                writeln!(out, "{}|{irrep}|{class}|{value}", irrep.size())?;
            }
            out.flush()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

/// Column orthogonality on every complete column:
/// `sum_l chi_l(c)^2 = z_c` and `sum_l dim(l) chi_l(c) = N! [c = 1^N]`.
fn check_columns(records: &BTreeMap<Key, BigInt>) -> std::result::Result<(), String> {
    let mut columns: BTreeMap<&Partition, Vec<(&Partition, &BigInt)>> = BTreeMap::new();
    for ((irrep, class), value) in records {
        columns.entry(class).or_default().push((irrep, value));
    }
    let mut irreps_of: HashMap<u32, usize> = HashMap::new();
    for (class, column) in columns {
        let n = class.size();
        let total = *irreps_of
            .entry(n)
            .or_insert_with(|| Partition::all(n).len());
        if column.len() != total {
            continue;
        }
        let squares: BigInt = column.iter().map(|(_, v)| *v * *v).sum();
        let regular: BigInt = column.iter().map(|(l, v)| l.dimension() * *v).sum();
        let identity = class.parts().iter().all(|&p| p == 1);
        let want_regular = if identity {
            crate::arith::factorial(u64::from(n))
        } else {
            BigInt::zero()
        };
        if squares != class.centralizer_order() || regular != want_regular {
            return Err(format!(
                "cached column at class {class} fails orthogonality"
            ));
        }
    }
    Ok(())
}

fn parse_cache(text: &str) -> std::result::Result<BTreeMap<Key, BigInt>, String> {
    let mut lines = text.lines();
    if lines.next() != Some(CACHE_HEADER) {
        return Err("missing or unknown cache header".into());
    }
    let mut out = BTreeMap::new();
    for (i, line) in lines.enumerate() {
        let bad = || format!("malformed cache record on line {}", i + 2);
        let fields: Vec<&str> = line.split('|').collect();
        let [n, irrep, class, value] = fields[..] else {
            return Err(bad());
        };
        let n: u32 = n.parse().map_err(|_| bad())?;
        let irrep: Partition = irrep.parse().map_err(|_| bad())?;
        let class: Partition = class.parse().map_err(|_| bad())?;
        let value: BigInt = value.parse().map_err(|_| bad())?;
        if irrep.size() != n || class.size() != n {
            return Err(bad());
        }
        out.insert((irrep, class), value);
    }
    Ok(out)
}

/// All partitions obtained by removing a border strip of size `r`, with a
/// flag set when the strip has odd height (negative sign).
///
/// Works on beta-sets: subtracting `r` from a beta number that lands on a
/// free non-negative position removes a strip whose height equals the
/// number of beta numbers jumped over.
pub fn remove_border_strips(shape: &Partition, r: u32) -> Vec<(Partition, bool)> {
    let len = shape.len() as u32;
    let beta: Vec<u32> = shape
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &p)| p + len - 1 - i as u32)
        .collect();
    let mut out = Vec::new();
    for (i, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let jumped = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut next = beta.clone();
        next[i] = target;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let parts: Vec<u32> = next
            .iter()
            .enumerate()
            .map(|(j, &x)| x - (len - 1 - j as u32))
            .collect();
        out.push((Partition::new(parts), jumped % 2 == 1));
    }
    out
}
