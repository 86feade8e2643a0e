//! Range scans with an appendable, crash-safe CSV checkpoint.
//!
//! The output file *is* the checkpoint: one fully written row per prime,
//! ascending, synced to disk every [`SYNC_EVERY`] rows. Resuming points
//! the scan at the same file; whatever complete rows are there are
//! trusted (after validating they belong to this scan), a torn trailing
//! line from a crash is cut off, and computation continues after the last
//! complete row. Because every float is serialized with 17 significant
//! digits and rows are committed in prime order regardless of worker
//! count, a resumed or parallel scan is byte-identical to an
//! uninterrupted serial one.

use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{ErrorKind, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use kummer_core::ek::ek_difference_with;
use kummer_core::ratio::{kummer_ratio_with, Method};
use kummer_core::Limits;

use crate::output::format_f64;
use crate::sieve::odd_primes_between;

/// Rows per fsync. Small enough to lose at most a second or two of work,
/// large enough that the scan is not fsync-bound.
pub const SYNC_EVERY: u64 = 64;

/// Primes handed to the worker pool at a time; commits happen between
/// chunks, so this also bounds how far computation runs ahead of disk.
const CHUNK: usize = 256;

pub const CSV_HEADER: &str = "q,value,r,method,kind";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanKind {
    Kummer,
    Ek,
}

impl ScanKind {
    pub fn name(self) -> &'static str {
        match self {
            ScanKind::Kummer => "kummer",
            ScanKind::Ek => "ek",
        }
    }

    /// Split point of the summary counts: 1 separates ratios above and
    /// below their average order, 0 splits the normalized differences by
    /// sign.
    pub fn threshold(self) -> f64 {
        match self {
            ScanKind::Kummer => 1.0,
            ScanKind::Ek => 0.0,
        }
    }

    /// Name of the third CSV column under this kind, for reports.
    pub fn ordering_label(self) -> &'static str {
        match self {
            ScanKind::Kummer => "r",
            ScanKind::Ek => "normalized",
        }
    }
}

impl fmt::Display for ScanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScanKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "kummer" => Ok(ScanKind::Kummer),
            "ek" => Ok(ScanKind::Ek),
            other => Err(format!("unknown kind '{other}' (expected kummer or ek)")),
        }
    }
}

/// One CSV row. `value` is log r for ratio rows and the plain difference
/// for EK rows; `r` is the ratio itself, or the difference over ln q.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub q: u64,
    pub value: f64,
    pub r: f64,
    pub method: Method,
    pub kind: ScanKind,
}

impl ScanRow {
    pub fn to_line(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.q,
            format_f64(self.value),
            format_f64(self.r),
            self.method,
            self.kind
        )
    }

    pub fn parse(line: &str) -> Result<ScanRow, String> {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(format!("expected 5 fields, found {}", fields.len()));
        }
        let q = fields[0]
            .parse::<u64>()
            .map_err(|e| format!("bad q '{}': {e}", fields[0]))?;
        let value = fields[1]
            .parse::<f64>()
            .map_err(|e| format!("bad value '{}': {e}", fields[1]))?;
        let r = fields[2]
            .parse::<f64>()
            .map_err(|e| format!("bad r '{}': {e}", fields[2]))?;
        let method = fields[3].parse::<Method>()?;
        let kind = fields[4].parse::<ScanKind>()?;
        Ok(ScanRow {
            q,
            value,
            r,
            method,
            kind,
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ScanError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{line}: {message}", path.display())]
    Malformed {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{}: existing rows do not belong to this scan: {message}", path.display())]
    Mismatch { path: PathBuf, message: String },
    #[error(transparent)]
    Core(#[from] kummer_core::Error),
}

impl ScanError {
    fn io(path: &Path, source: std::io::Error) -> ScanError {
        ScanError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Parsed state of a checkpoint file.
#[derive(Debug)]
pub struct Checkpoint {
    pub rows: Vec<ScanRow>,
    /// Byte length of the trusted prefix (header plus complete rows).
    pub clean_len: u64,
    /// Bytes of torn trailing line beyond the prefix, from a crash
    /// mid-write; a resume cuts them off.
    pub torn_bytes: usize,
}

/// Reads whatever the checkpoint holds. A missing file is an empty
/// checkpoint; a malformed *complete* line is an error (the file is not
/// ours, or worse), while an unterminated final line is the expected
/// signature of a killed scan and is merely reported for truncation.
pub fn load_checkpoint(path: &Path) -> Result<Checkpoint, ScanError> {
    let mut text = String::new();
    match File::open(path) {
        Ok(mut f) => {
            f.read_to_string(&mut text)
                .map_err(|e| ScanError::io(path, e))?;
        }
        Err(e) if e.kind() == ErrorKind::NotFound => {}
        Err(e) => return Err(ScanError::io(path, e)),
    }
    let clean_end = text.rfind('\n').map_or(0, |i| i + 1);
    let torn_bytes = text.len() - clean_end;
    let mut rows = Vec::new();
    for (i, line) in text[..clean_end].lines().enumerate() {
        if i == 0 {
            if line != CSV_HEADER {
                return Err(ScanError::Malformed {
                    path: path.to_path_buf(),
                    line: 1,
                    message: format!("expected header '{CSV_HEADER}', found '{line}'"),
                });
            }
            continue;
        }
        let row = ScanRow::parse(line).map_err(|message| ScanError::Malformed {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        })?;
        rows.push(row);
    }
    Ok(Checkpoint {
        rows,
        clean_len: clean_end as u64,
        torn_bytes,
    })
}

/// Rows must arrive in ascending q order; reports the 1-based file line
/// of the first offender.
pub fn validate_ascending(path: &Path, rows: &[ScanRow]) -> Result<(), ScanError> {
    for (i, w) in rows.windows(2).enumerate() {
        if w[1].q <= w[0].q {
            return Err(ScanError::Malformed {
                path: path.to_path_buf(),
                // rows start on line 2, the second of the pair on line i + 3
                line: i + 3,
                message: format!("q = {} out of order after q = {}", w[1].q, w[0].q),
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub kind: ScanKind,
    pub method: Method,
    pub start: u64,
    pub end: u64,
    pub out: PathBuf,
    /// Worker threads; 0 means one per core.
    pub jobs: usize,
    pub limits: Limits,
}

fn compute_row(q: u64, cfg: &ScanConfig) -> Result<ScanRow, kummer_core::Error> {
    match cfg.kind {
        ScanKind::Kummer => {
            let res = kummer_ratio_with(q, cfg.method, &cfg.limits)?;
            Ok(ScanRow {
                q,
                value: res.log_r,
                r: res.r,
                method: cfg.method,
                kind: cfg.kind,
            })
        }
        ScanKind::Ek => {
            let res = ek_difference_with(q, &cfg.limits)?;
            Ok(ScanRow {
                q,
                value: res.diff,
                r: res.normalized,
                method: cfg.method,
                kind: cfg.kind,
            })
        }
    }
}

/// Runs (or resumes) a scan and returns the summary over *all* rows,
/// resumed ones included.
pub fn run_scan(cfg: &ScanConfig) -> Result<ScanSummary, ScanError> {
    let qs = odd_primes_between(cfg.start, cfg.end);
    let ck = load_checkpoint(&cfg.out)?;
    if ck.rows.len() > qs.len() {
        return Err(ScanError::Mismatch {
            path: cfg.out.clone(),
            message: format!(
                "{} rows, but only {} primes in [{}, {}]",
                ck.rows.len(),
                qs.len(),
                cfg.start,
                cfg.end
            ),
        });
    }
    for (row, &q) in ck.rows.iter().zip(&qs) {
        if row.q != q || row.kind != cfg.kind || row.method != cfg.method {
            return Err(ScanError::Mismatch {
                path: cfg.out.clone(),
                message: format!(
                    "found (q = {}, {}, {}), expected (q = {}, {}, {})",
                    row.q, row.method, row.kind, q, cfg.method, cfg.kind
                ),
            });
        }
    }

    let mut file = OpenOptions::new()
        .create(true)
        .read(true)
        .write(true)
        .truncate(false)
        .open(&cfg.out)
        .map_err(|e| ScanError::io(&cfg.out, e))?;
    // Cut off any torn tail, then append.
    file.set_len(ck.clean_len)
        .map_err(|e| ScanError::io(&cfg.out, e))?;
    file.seek(SeekFrom::End(0))
        .map_err(|e| ScanError::io(&cfg.out, e))?;
    if ck.clean_len == 0 {
        file.write_all(format!("{CSV_HEADER}\n").as_bytes())
            .map_err(|e| ScanError::io(&cfg.out, e))?;
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .expect("worker pool");

    let mut rows = ck.rows;
    let mut since_sync = 0u64;
    for chunk in qs[rows.len()..].chunks(CHUNK) {
        let fresh: Vec<ScanRow> = pool.install(|| {
            chunk
                .par_iter()
                .map(|&q| compute_row(q, cfg))
                .collect::<Result<_, _>>()
        })?;
        for row in fresh {
            file.write_all(row.to_line().as_bytes())
                .and_then(|_| file.write_all(b"\n"))
                .map_err(|e| ScanError::io(&cfg.out, e))?;
            rows.push(row);
            since_sync += 1;
            if since_sync == SYNC_EVERY {
                file.sync_data().map_err(|e| ScanError::io(&cfg.out, e))?;
                since_sync = 0;
            }
        }
    }
    file.sync_all().map_err(|e| ScanError::io(&cfg.out, e))?;
    Ok(summarize(cfg.kind, &rows))
}

/// Counts and extremes over the ordering column (r or normalized).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSummary {
    pub kind: ScanKind,
    pub count: u64,
    /// Rows at or above the kind's threshold; ties land here.
    pub above: u64,
    pub below: u64,
    pub min: Option<(u64, f64)>,
    pub max: Option<(u64, f64)>,
}

pub fn summarize(kind: ScanKind, rows: &[ScanRow]) -> ScanSummary {
    let threshold = kind.threshold();
    let mut above = 0u64;
    let mut min: Option<(u64, f64)> = None;
    let mut max: Option<(u64, f64)> = None;
    for row in rows {
        if row.r >= threshold {
            above += 1;
        }
        if min.is_none_or(|(_, v)| row.r < v) {
            min = Some((row.q, row.r));
        }
        if max.is_none_or(|(_, v)| row.r > v) {
            max = Some((row.q, row.r));
        }
    }
    ScanSummary {
        kind,
        count: rows.len() as u64,
        above,
        below: rows.len() as u64 - above,
        min,
        max,
    }
}

impl fmt::Display for ScanSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = self.kind.ordering_label();
        writeln!(f, "kind = {}", self.kind)?;
        writeln!(f, "rows = {}", self.count)?;
        if self.count > 0 {
            let frac = self.above as f64 / self.count as f64;
            writeln!(
                f,
                "{label} >= {}: {} ({:.4})",
                self.kind.threshold(),
                self.above,
                frac
            )?;
            writeln!(f, "{label} <  {}: {}", self.kind.threshold(), self.below)?;
        }
        if let Some((q, v)) = self.min {
            writeln!(f, "min {label} = {v:.9} at q = {q}")?;
        }
        if let Some((q, v)) = self.max {
            write!(f, "max {label} = {v:.9} at q = {q}")?;
        }
        Ok(())
    }
}
