//! Append-only result cache for clique searches.
//!
//! One record per line: `fieldspec|m|reduction|size|status|witness`, with the
//! witness as `;`-joined point strings or `-`. Only completed results
//! (optimal or formula-certified) are stored or served — a lower-bound record
//! would silently cap later runs. The cache lives in `$QFINT_CACHE_DIR` and
//! is disabled when that variable is unset.

use qfint_core::clique::{CliqueResult, CliqueStatus, Reduction};
use qfint_core::ffield::FieldSpec;
use qfint_core::geometry::parse_point;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::time::Duration;

const CACHE_FILE: &str = "qfint.cache";

#[derive(Debug, Clone)]
pub struct CacheRecord {
    pub fieldspec: String,
    pub m: u32,
    pub reduction: String,
    pub size: u64,
    pub status: String,
    pub witness: String,
}

impl CacheRecord {
    fn parse(line: &str) -> Option<CacheRecord> {
        let mut it = line.split('|');
        let rec = CacheRecord {
            fieldspec: it.next()?.to_string(),
            m: it.next()?.parse().ok()?,
            reduction: it.next()?.to_string(),
            size: it.next()?.parse().ok()?,
            status: it.next()?.to_string(),
            witness: it.next()?.to_string(),
        };
        if it.next().is_some() {
            return None;
        }
        Some(rec)
    }

    fn line(&self) -> String {
        format!(
            "{}|{}|{}|{}|{}|{}",
            self.fieldspec, self.m, self.reduction, self.size, self.status, self.witness
        )
    }

    pub fn from_result(field: &FieldSpec, r: &CliqueResult) -> CacheRecord {
        let witness = if r.witness.is_empty() {
            "-".to_string()
        } else {
            r.witness
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(";")
        };
        CacheRecord {
            fieldspec: field.to_string(),
            m: r.m,
            reduction: r.reduction.to_string(),
            size: r.size,
            status: r.status.to_string(),
            witness,
        }
    }

    /// Rebuild a result from a stored record. Elapsed time and node count
    /// are not cached; a hit reports zero for both.
    pub fn to_result(&self, field: &FieldSpec) -> Option<CliqueResult> {
        let status = match self.status.as_str() {
            "optimal" => CliqueStatus::Optimal,
            "formula_certified" => CliqueStatus::FormulaCertified,
            _ => return None,
        };
        let reduction = match self.reduction.as_str() {
            "none" => Reduction::None,
            "prescribed_pair" => Reduction::PrescribedPair,
            "construction" => Reduction::Construction,
            _ => return None,
        };
        let witness = if self.witness == "-" {
            Vec::new()
        } else {
            let mut pts = Vec::new();
            for s in self.witness.split(';') {
                pts.push(parse_point(field, s).ok()?);
            }
            pts
        };
        Some(CliqueResult {
            m: self.m,
            q: field.q(),
            size: self.size,
            witness,
            status,
            reduction,
            elapsed: Duration::ZERO,
            nodes: 0,
        })
    }
}

pub struct Cache {
    path: PathBuf,
    records: Vec<CacheRecord>,
}

impl Cache {
    /// Open the cache under `$QFINT_CACHE_DIR`, or return `None` when the
    /// variable is unset. Unreadable lines are skipped, not fatal.
    pub fn open_from_env() -> Option<Cache> {
        let dir = std::env::var_os("QFINT_CACHE_DIR")?;
        let path = PathBuf::from(dir).join(CACHE_FILE);
        let records = match fs::read_to_string(&path) {
            Ok(text) => text.lines().filter_map(CacheRecord::parse).collect(),
            Err(_) => Vec::new(),
        };
        Some(Cache { path, records })
    }

    /// A completed record for this field and dimension, if any. The answer
    /// `I(m, q)` does not depend on the reduction that produced it.
    pub fn lookup(&self, fieldspec: &str, m: u32) -> Option<&CacheRecord> {
        self.records
            .iter()
            .find(|r| r.fieldspec == fieldspec && r.m == m)
    }

    /// Append a completed result; incomplete (lower-bound) results and exact
    /// duplicates are ignored.
    pub fn store(&mut self, field: &FieldSpec, result: &CliqueResult) {
        if result.status == CliqueStatus::LowerBound {
            return;
        }
        let rec = CacheRecord::from_result(field, result);
        if self.lookup(&rec.fieldspec, rec.m).is_some() {
            return;
        }
        if let Some(dir) = self.path.parent() {
            let _ = fs::create_dir_all(dir);
        }
        if let Ok(mut f) = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
        {
            let _ = writeln!(f, "{}", rec.line());
        }
        self.records.push(rec);
    }
}
