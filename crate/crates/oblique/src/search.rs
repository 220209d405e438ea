//! Append-only JSONL log for the conjecture search, with resume and shards.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use oblique_core::conjecture::{
    certify, evaluate_sample, Candidate, Certificate, SearchConfig, SearchRecord, Stage, Summary,
    SummaryBuilder,
};

use crate::error::CliError;
use crate::formats::FORMAT_VERSION;

/// One log line. `t` is wall-clock seconds since the Unix epoch and is the
/// only field that differs between reruns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordJson {
    pub v: u32,
    pub i: u64,
    pub seed: u64,
    pub dims: Vec<usize>,
    pub rank: usize,
    pub stage: String,
    pub orthonormal: bool,
    pub basis: Vec<f64>,
    pub delta_i: f64,
    pub condition: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t: Option<f64>,
}

impl RecordJson {
    pub fn new(r: &SearchRecord, t: Option<f64>) -> Self {
        Self {
            v: FORMAT_VERSION,
            i: r.index,
            seed: r.seed,
            dims: r.dims.clone(),
            rank: r.rank,
            stage: r.stage.name().to_string(),
            orthonormal: r.orthonormal,
            basis: r.basis.clone(),
            delta_i: r.delta_i,
            condition: r.condition,
            t,
        }
    }

    pub fn to_record(&self) -> Result<SearchRecord, CliError> {
        let stage = match self.stage.as_str() {
            "start" => Stage::Start,
            "optimized" => Stage::Optimized,
            other => return Err(CliError::Input(format!("unknown record stage `{other}`"))),
        };
        Ok(SearchRecord {
            index: self.i,
            seed: self.seed,
            dims: self.dims.clone(),
            rank: self.rank,
            stage,
            orthonormal: self.orthonormal,
            basis: self.basis.clone(),
            delta_i: self.delta_i,
            condition: self.condition,
        })
    }
}

/// Shard `index` of `count` takes sample indices `≡ index (mod count)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shard {
    pub index: u64,
    pub count: u64,
}

impl Default for Shard {
    fn default() -> Self {
        Self { index: 0, count: 1 }
    }
}

impl std::str::FromStr for Shard {
    type Err = String;

    /// Parses `k/M`.
    fn from_str(s: &str) -> Result<Self, String> {
        let (k, m) = s.split_once('/').ok_or("expected k/M")?;
        let index: u64 = k.trim().parse().map_err(|_| "bad shard index")?;
        let count: u64 = m.trim().parse().map_err(|_| "bad shard count")?;
        if count == 0 || index >= count {
            return Err("shard index must be below a positive count".into());
        }
        Ok(Self { index, count })
    }
}

impl Shard {
    pub fn contains(self, i: u64) -> bool {
        i % self.count == self.index
    }
}

/// Complete samples found in a log.
#[derive(Debug, Default)]
pub struct LogContents {
    /// Records of complete samples, in file order.
    pub records: Vec<SearchRecord>,
    pub completed: BTreeSet<u64>,
    /// Byte length of the prefix holding only complete samples.
    pub valid_len: u64,
}

/// Reads a log, keeping samples whose start and optimized records are both
/// present on complete lines. Anything after the last complete sample (a
/// torn line or an orphaned start record) is excluded from `valid_len`.
pub fn scan_log(path: &Path) -> Result<LogContents, CliError> {
    let bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(LogContents::default()),
        Err(e) => return Err(CliError::Io(format!("{}: {e}", path.display()))),
    };
    let mut out = LogContents::default();
    let mut pending: Option<SearchRecord> = None;
    let mut offset = 0usize;
    while let Some(nl) = bytes[offset..].iter().position(|&b| b == b'\n') {
        let line = &bytes[offset..offset + nl];
        offset += nl + 1;
        let parsed = std::str::from_utf8(line)
            .ok()
            .and_then(|s| serde_json::from_str::<RecordJson>(s).ok())
            .map(|j| j.to_record());
        let record = match parsed {
            Some(Ok(r)) => r,
            _ => break,
        };
        match (record.stage, pending.take()) {
            (Stage::Start, _) => pending = Some(record),
            (Stage::Optimized, Some(start)) if start.index == record.index => {
                if !out.completed.insert(record.index) {
                    return Err(CliError::Input(format!(
                        "{}: sample {} appears twice",
                        path.display(),
                        record.index
                    )));
                }
                out.records.push(start);
                out.records.push(record);
                out.valid_len = offset as u64;
            }
            _ => break,
        }
    }
    Ok(out)
}

/// Errors unless every record matches what `config` would generate at its index.
fn check_compatible(
    config: &SearchConfig,
    records: &[SearchRecord],
    path: &Path,
) -> Result<(), CliError> {
    for r in records {
        let dims_ok = config
            .locate(r.index)
            .map(|(d, _)| d == r.dims.as_slice())
            .unwrap_or(false);
        if !dims_ok
            || r.seed != config.seed.mix(r.index).0
            || r.orthonormal != config.orthonormal_only
        {
            return Err(CliError::Input(format!(
                "{}: record {} was written with a different configuration",
                path.display(),
                r.index
            )));
        }
    }
    Ok(())
}

fn now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Thread count from `OBLIQUE_THREADS`, default 1.
pub fn default_threads() -> usize {
    std::env::var("OBLIQUE_THREADS")
        .ok()
        .and_then(|s| s.parse().ok())
        .filter(|&n| n > 0)
        .unwrap_or(1)
}

/// Runs every sample of `shard` not yet in the log at `path`, appending two
/// records per sample. Samples are evaluated `threads` at a time and written
/// in index order. Returns all records of complete samples in the log.
pub fn run_search(
    config: &SearchConfig,
    path: &Path,
    shard: Shard,
    threads: usize,
    mut progress: impl FnMut(u64, u64),
) -> Result<Vec<SearchRecord>, CliError> {
    config.validate()?;
    let existing = scan_log(path)?;
    check_compatible(config, &existing.records, path)?;
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| io_err(path, e))?;
    file.set_len(existing.valid_len)
        .map_err(|e| io_err(path, e))?;
    let mut writer = BufWriter::new(file);

    let todo: Vec<u64> = (0..config.total_samples())
        .filter(|&i| shard.contains(i) && !existing.completed.contains(&i))
        .collect();
    let total = todo.len() as u64;
    let mut records = existing.records;
    let threads = threads.max(1);
    let batch = threads * 8;
    let mut done = 0u64;
    for chunk in todo.chunks(batch) {
        let results = evaluate_batch(config, chunk, threads);
        let mut text = String::new();
        for pair in results {
            let pair = pair?;
            let t = now();
            for r in &pair {
                text.push_str(
                    &serde_json::to_string(&RecordJson::new(r, Some(t))).expect("serializable"),
                );
                text.push('\n');
            }
            records.extend(pair);
        }
        writer
            .write_all(text.as_bytes())
            .map_err(|e| io_err(path, e))?;
        writer.flush().map_err(|e| io_err(path, e))?;
        done += chunk.len() as u64;
        progress(done, total);
    }
    Ok(records)
}

fn evaluate_batch(
    config: &SearchConfig,
    indices: &[u64],
    threads: usize,
) -> Vec<oblique_core::Result<[SearchRecord; 2]>> {
    if threads == 1 || indices.len() == 1 {
        return indices
            .iter()
            .map(|&i| evaluate_sample(config, i))
            .collect();
    }
    let mut slots: Vec<Option<oblique_core::Result<[SearchRecord; 2]>>> =
        indices.iter().map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                scope.spawn(move || {
                    indices
                        .iter()
                        .enumerate()
                        .skip(t)
                        .step_by(threads)
                        .map(|(k, &i)| (k, evaluate_sample(config, i)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (k, r) in h.join().expect("search worker panicked") {
                slots[k] = Some(r);
            }
        }
    });
    slots
        .into_iter()
        .map(|s| s.expect("every slot filled"))
        .collect()
}

/// Records of complete samples across several logs, in file order.
pub fn read_logs(paths: &[impl AsRef<Path>]) -> Result<Vec<SearchRecord>, CliError> {
    let mut out = Vec::new();
    for p in paths {
        let p = p.as_ref();
        if !p.exists() {
            return Err(CliError::Io(format!("{}: no such file", p.display())));
        }
        out.extend(scan_log(p)?.records);
    }
    Ok(out)
}

/// Summary plus certification of every record below the threshold.
pub struct Analysis {
    pub summary: Summary,
    pub samples: usize,
    pub certified: usize,
    pub rejected: BTreeMap<String, usize>,
    /// Most negative certified record and its certificate.
    pub best: Option<(SearchRecord, Certificate)>,
}

pub fn analyze(config: &SearchConfig, records: &[SearchRecord]) -> Analysis {
    let mut builder = SummaryBuilder::new(config.threshold);
    let mut samples = BTreeSet::new();
    let mut certified = 0;
    let mut rejected = BTreeMap::new();
    let mut best: Option<(SearchRecord, Certificate)> = None;
    for r in records {
        builder.push(r);
        samples.insert(r.index);
        if !(r.delta_i < config.threshold) {
            continue;
        }
        let outcome = r.state().map_err(|e| e.to_string()).and_then(|state| {
            let basis = r
                .chart()
                .decode(&r.basis, config.condition_cap)
                .ok_or_else(|| "ill-conditioned basis".to_string())?;
            let candidate = Candidate {
                record: r.clone(),
                state,
                basis,
            };
            certify(
                &candidate,
                config.threshold,
                config.certification_tolerance,
                config.condition_cap,
            )
            .map_err(|rej| rej.reason().to_string())
        });
        match outcome {
            Ok(cert) => {
                certified += 1;
                if best.as_ref().map_or(true, |(b, _)| r.delta_i < b.delta_i) {
                    best = Some((r.clone(), cert));
                }
            }
            Err(reason) => *rejected.entry(reason).or_insert(0) += 1,
        }
    }
    Analysis {
        summary: builder.summary(),
        samples: samples.len(),
        certified,
        rejected,
        best,
    }
}

/// Creates an empty file, failing early when the location is not writable.
pub fn ensure_writable(path: &Path) -> Result<(), CliError> {
    OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map(|_: File| ())
        .map_err(|e| io_err(path, e))
}
