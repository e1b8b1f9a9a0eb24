//! Resumable, parallel screening of a curve list into JSONL.
//!
//! Input lines are read in chunks and screened on a dedicated thread pool;
//! results are written in input order, so output does not depend on the
//! number of workers. After each chunk the output and rejects files are
//! flushed and a checkpoint recording how much input has been consumed and
//! how long both files are is replaced atomically. Resuming truncates both
//! files to the checkpointed lengths and skips the consumed input.

use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::GenusTwoCurve;
use crate::screen::{self, ScreenError, ScreenReport};

const CHUNK: usize = 4096;

#[derive(Debug, Error)]
pub enum BatchError {
    #[error("cannot open input {path}: {source}")]
    Input { path: PathBuf, source: io::Error },
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("corrupt checkpoint {path}: {reason}")]
    Checkpoint { path: PathBuf, reason: String },
    #[error(transparent)]
    Screen(#[from] ScreenError),
    #[error("jobs must be at least 1")]
    NoWorkers,
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchConfig {
    pub p: u64,
    pub q_max: u64,
    pub jobs: usize,
    pub input: PathBuf,
    pub output: PathBuf,
    pub resume: bool,
    pub emit_all: bool,
    /// Recorded for reproducibility; screening itself draws no randomness.
    pub seed: u64,
}

impl BatchConfig {
    pub fn new(p: u64, input: impl Into<PathBuf>, output: impl Into<PathBuf>) -> BatchConfig {
        BatchConfig {
            p,
            q_max: screen::DEFAULT_QMAX,
            jobs: 1,
            input: input.into(),
            output: output.into(),
            resume: false,
            emit_all: false,
            seed: 0,
        }
    }

    pub fn checkpoint_path(&self) -> PathBuf {
        with_suffix(&self.output, ".ckpt")
    }

    pub fn rejects_path(&self) -> PathBuf {
        with_suffix(&self.output, ".rejects")
    }
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Checkpoint {
    /// Input lines fully processed.
    pub input_lines: u64,
    pub output_bytes: u64,
    pub rejects_bytes: u64,
}

impl Checkpoint {
    fn load(path: &Path) -> Result<Option<Checkpoint>, BatchError> {
        match fs::read_to_string(path) {
            Ok(text) => serde_json::from_str(&text)
                .map(Some)
                .map_err(|e| BatchError::Checkpoint { path: path.to_path_buf(), reason: e.to_string() }),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(source) => Err(BatchError::Io { path: path.to_path_buf(), source }),
        }
    }

    fn store(&self, path: &Path) -> Result<(), BatchError> {
        let tmp = with_suffix(path, ".tmp");
        let io_err = |source| BatchError::Io { path: path.to_path_buf(), source };
        let mut f = File::create(&tmp).map_err(io_err)?;
        f.write_all(serde_json::to_string(self).expect("plain struct").as_bytes()).map_err(io_err)?;
        f.sync_all().map_err(io_err)?;
        fs::rename(&tmp, path).map_err(io_err)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct BatchSummary {
    pub lines_read: u64,
    pub screened: u64,
    pub emitted: u64,
    pub rejected: u64,
    /// Input lines skipped because an earlier run had processed them.
    pub resumed_from: u64,
}

enum Outcome {
    Skip,
    Report(Box<ScreenReport>),
    Reject(String),
}

fn screen_line(line: &str, p: u64, q_max: u64) -> Outcome {
    let text = line.trim();
    if text.is_empty() || text.starts_with('#') {
        return Outcome::Skip;
    }
    match GenusTwoCurve::parse_list_line(text) {
        Ok(curve) => match screen::screen_curve(&curve, p, q_max) {
            Ok(r) => Outcome::Report(Box::new(r)),
            Err(e) => Outcome::Reject(e.to_string()),
        },
        Err(e) => Outcome::Reject(e.to_string()),
    }
}

struct Sink {
    path: PathBuf,
    out: BufWriter<File>,
    len: u64,
}

impl Sink {
    fn open(path: &Path, keep: Option<u64>) -> Result<Sink, BatchError> {
        let io_err = |source| BatchError::Io { path: path.to_path_buf(), source };
        let file = match keep {
            Some(len) => {
                let f = OpenOptions::new().create(true).append(true).open(path).map_err(io_err)?;
                f.set_len(len).map_err(io_err)?;
                f
            }
            None => File::create(path).map_err(io_err)?,
        };
        Ok(Sink { path: path.to_path_buf(), out: BufWriter::new(file), len: keep.unwrap_or(0) })
    }

    fn write_line(&mut self, line: &str) -> Result<(), BatchError> {
        let io_err = |source| BatchError::Io { path: self.path.clone(), source };
        self.out.write_all(line.as_bytes()).map_err(io_err)?;
        self.out.write_all(b"\n").map_err(io_err)?;
        self.len += line.len() as u64 + 1;
        Ok(())
    }

    fn sync(&mut self) -> Result<(), BatchError> {
        let io_err = |source| BatchError::Io { path: self.path.clone(), source };
        self.out.flush().map_err(io_err)?;
        self.out.get_ref().sync_data().map_err(io_err)
    }
}

/// Screens every curve of `config.input`, writing one JSON report per line
/// for each curve with a passing field (or every curve with `emit_all`).
pub fn batch_screen(config: &BatchConfig) -> Result<BatchSummary, BatchError> {
    screen::check_p(config.p)?;
    if config.jobs == 0 {
        return Err(BatchError::NoWorkers);
    }
    let input = File::open(&config.input)
        .map_err(|source| BatchError::Input { path: config.input.clone(), source })?;
    let ckpt_path = config.checkpoint_path();
    let start = if config.resume { Checkpoint::load(&ckpt_path)? } else { None };
    let mut out = Sink::open(&config.output, start.map(|c| c.output_bytes))?;
    let mut rejects = Sink::open(&config.rejects_path(), start.map(|c| c.rejects_bytes))?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(config.jobs).build()?;

    let skip = start.map_or(0, |c| c.input_lines);
    let mut summary = BatchSummary { resumed_from: skip, ..BatchSummary::default() };
    let mut lines = BufReader::new(input).lines();
    let mut line_no = 0u64;
    let read_err = |source| BatchError::Io { path: config.input.clone(), source };
    while line_no < skip {
        match lines.next() {
            Some(line) => {
                line.map_err(read_err)?;
                line_no += 1;
            }
            None => break,
        }
    }
    loop {
        let mut chunk = Vec::with_capacity(CHUNK);
        for line in lines.by_ref().take(CHUNK) {
            chunk.push(line.map_err(read_err)?);
        }
        if chunk.is_empty() {
            break;
        }
        let outcomes: Vec<Outcome> =
            pool.install(|| chunk.par_iter().map(|l| screen_line(l, config.p, config.q_max)).collect());
        for (i, outcome) in outcomes.into_iter().enumerate() {
            let n = line_no + i as u64 + 1;
            match outcome {
                Outcome::Skip => {}
                Outcome::Report(r) => {
                    summary.screened += 1;
                    if config.emit_all || r.any_passed() {
                        out.write_line(&serde_json::to_string(&r).expect("report serializes"))?;
                        summary.emitted += 1;
                    }
                }
                Outcome::Reject(reason) => {
                    rejects.write_line(&format!("{n}\t{reason}\t{}", chunk[i].trim()))?;
                    summary.rejected += 1;
                }
            }
        }
        line_no += chunk.len() as u64;
        summary.lines_read += chunk.len() as u64;
        out.sync()?;
        rejects.sync()?;
        Checkpoint { input_lines: line_no, output_bytes: out.len, rejects_bytes: rejects.len }.store(&ckpt_path)?;
    }
    out.sync()?;
    rejects.sync()?;
    Checkpoint { input_lines: line_no, output_bytes: out.len, rejects_bytes: rejects.len }.store(&ckpt_path)?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables::TABLE;

    fn write_input(dir: &Path, lines: &[String]) -> PathBuf {
        let path = dir.join("in.txt");
        fs::write(&path, lines.join("\n")).unwrap();
        path
    }

    #[test]
    fn empty_input_gives_empty_output() {
        let dir = tempfile::tempdir().unwrap();
        let input = write_input(dir.path(), &[]);
        let cfg = BatchConfig::new(3, input, dir.path().join("out.jsonl"));
        let s = batch_screen(&cfg).unwrap();
        assert_eq!(s.emitted, 0);
        assert_eq!(fs::read(&cfg.output).unwrap(), b"");
    }

    #[test]
    fn malformed_lines_go_to_rejects() {
        let dir = tempfile::tempdir().unwrap();
        let good = TABLE[0].curve().to_list_line();
        let input = write_input(dir.path(), &[good, "x;1,2,zz".into(), "# comment".into()]);
        let cfg = BatchConfig::new(3, input, dir.path().join("out.jsonl"));
        let s = batch_screen(&cfg).unwrap();
        assert_eq!((s.screened, s.emitted, s.rejected), (1, 1, 1));
        let rejects = fs::read_to_string(cfg.rejects_path()).unwrap();
        assert!(rejects.starts_with("2\t"));
    }

    #[test]
    fn resume_after_partial_run_matches_fresh_run() {
        let dir = tempfile::tempdir().unwrap();
        let lines: Vec<String> = TABLE.iter().filter(|t| t.p == 3).map(|t| t.curve().to_list_line()).collect();
        let input = write_input(dir.path(), &lines);
        let mut cfg = BatchConfig::new(3, &input, dir.path().join("full.jsonl"));
        batch_screen(&cfg).unwrap();
        let fresh = fs::read(&cfg.output).unwrap();

        // A run killed after seven lines, with a stray partial line after the
        // checkpointed length.
        cfg.output = dir.path().join("resumed.jsonl");
        let head: Vec<u8> = fresh.split_inclusive(|&b| b == b'\n').take(7).flatten().copied().collect();
        let mut torn = head.clone();
        torn.extend_from_slice(b"{\"label\":\"p3-0");
        fs::write(&cfg.output, &torn).unwrap();
        fs::write(cfg.rejects_path(), b"").unwrap();
        Checkpoint { input_lines: 7, output_bytes: head.len() as u64, rejects_bytes: 0 }
            .store(&cfg.checkpoint_path())
            .unwrap();
        cfg.resume = true;
        let s = batch_screen(&cfg).unwrap();
        assert_eq!(s.resumed_from, 7);
        assert_eq!(fs::read(&cfg.output).unwrap(), fresh);
    }
}
