//! The `g2screen` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::batch::{batch_screen, BatchConfig, BatchError};
use crate::classify::{self, CertifyOptions, DEFAULT_CLASSIFY_QMAX};
use crate::counting;
use crate::curve::GenusTwoCurve;
use crate::gsp4::{self, CandidateTables, GroupLabel};
use crate::screen;
use crate::tables::TABLE;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_SELFTEST: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "g2screen", version, about = "Screen genus-2 curves for induced mod-p Galois representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Screen a curve list (one `label;f0,..,f6;h0,..,h3` per line) into JSONL.
    Screen {
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = screen::DEFAULT_QMAX)]
        qmax: u64,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        emit_all: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        resume: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a certificate for one curve.
    Certify {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        curve: String,
        /// Prime bound for the screen.
        #[arg(long, default_value_t = screen::DEFAULT_QMAX)]
        qmax: u64,
        /// Prime bound for the image classifier.
        #[arg(long, default_value_t = DEFAULT_CLASSIFY_QMAX)]
        classify_qmax: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print `a_q` and `L_q(T)`.
    Lpoly {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        q: u64,
    },
    /// Construct the named subgroups and write their invariants as JSON.
    GroupTables {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the quadratic twist by `d`.
    Twist {
        #[arg(long)]
        curve: String,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Run the regression suite over the published tables.
    Selftest {
        /// Leave out the full enumeration of GSp4(F_5).
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
    Selftest,
}

impl From<BatchError> for Failure {
    fn from(e: BatchError) -> Self {
        match e {
            BatchError::Input { .. } | BatchError::Io { .. } | BatchError::Checkpoint { .. } => Failure::Io(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn write_json(out: &mut dyn Write, path: Option<&Path>, value: &impl Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("serializable output");
    match path {
        Some(p) => fs::write(p, text + "\n").map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => writeln!(out, "{text}").map_err(|e| Failure::Io(e.to_string())),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Io(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_IO
        }
        Err(Failure::Selftest) => EXIT_SELFTEST,
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Io(e.to_string());
    match command {
        Command::Screen { p, qmax, input, out: output, emit_all, jobs, resume, seed } => {
            let config = BatchConfig { p, q_max: qmax, jobs, input, output, resume, emit_all, seed };
            let summary = batch_screen(&config)?;
            writeln!(
                out,
                "screened {} curves, emitted {}, rejected {}",
                summary.screened, summary.emitted, summary.rejected
            )
            .map_err(io)?;
        }
        Command::Certify { p, curve, qmax, classify_qmax, seed: _, out: path } => {
            let curve = GenusTwoCurve::parse(&curve).map_err(usage)?;
            let options = CertifyOptions { screen_qmax: qmax, classify_qmax };
            let cert = classify::certify(&curve, p, options).map_err(usage)?;
            write_json(out, path.as_deref(), &cert)?;
        }
        Command::Lpoly { curve, q } => {
            let curve = GenusTwoCurve::parse(&curve).map_err(usage)?;
            let rec = counting::lpolynomial(&curve, q).map_err(usage)?;
            let [_, c1, c2, c3, c4] = rec.lpoly_coefficients();
            writeln!(out, "a_q = {}", rec.a_q()).map_err(io)?;
            writeln!(out, "#C(F_q) = {}", rec.n1).map_err(io)?;
            writeln!(out, "L_q(T) = 1 + ({c1})T + ({c2})T^2 + ({c3})T^3 + ({c4})T^4").map_err(io)?;
        }
        Command::GroupTables { p, seed, out: path } => {
            let report = group_tables(p, seed).map_err(usage)?;
            write_json(out, path.as_deref(), &report)?;
        }
        Command::Twist { curve, d } => {
            let curve = GenusTwoCurve::parse(&curve).map_err(usage)?;
            let t = curve.twist(d).map_err(usage)?;
            writeln!(out, "{t}").map_err(io)?;
        }
        Command::Selftest { quick } => {
            if !selftest(out, quick).map_err(io)? {
                return Err(Failure::Selftest);
            }
        }
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct GroupRow {
    pub label: GroupLabel,
    pub order: u64,
    pub orbits: Vec<usize>,
    pub similitude_image: Vec<u8>,
    /// Invariants of the abelianization of the intersection with `Sp4`,
    /// for groups small enough to list.
    pub sp4_abelianization: Option<Vec<u64>>,
    pub degree24_image_order: Option<u64>,
    pub trace_zero_fraction: String,
}

#[derive(Debug, Serialize)]
pub struct GroupTablesReport {
    pub p: u64,
    pub seed: u64,
    pub version: String,
    pub groups: Vec<GroupRow>,
    /// Orbit sizes on `(F_p^4 - 0)/±` by group name.
    pub orbit_table: std::collections::BTreeMap<String, Vec<usize>>,
    pub trace_zero: gsp4::TraceZeroFraction,
}

pub fn group_tables(p: u64, seed: u64) -> Result<GroupTablesReport, gsp4::GroupError> {
    let tables = CandidateTables::build(p, seed)?;
    let mut groups = Vec::new();
    let mut orbit_table = std::collections::BTreeMap::new();
    for t in &tables.tables {
        let small = t.order() <= 2304;
        let sp4_abelianization = small.then(|| t.intersect_sp4().abelian_invariants());
        let degree24_image_order = if p == 5 && t.label() != GroupLabel::Full {
            Some(t.degree24_image_order()?)
        } else {
            None
        };
        orbit_table.insert(t.label().name().to_string(), t.orbits_mod_sign().to_vec());
        groups.push(GroupRow {
            label: t.label(),
            order: t.order(),
            orbits: t.orbits_mod_sign().to_vec(),
            similitude_image: t.similitude_image(),
            sp4_abelianization,
            degree24_image_order,
            trace_zero_fraction: t.trace_zero_fraction().to_string(),
        });
    }
    Ok(GroupTablesReport {
        p,
        seed,
        version: crate::VERSION.to_string(),
        groups,
        orbit_table,
        trace_zero: gsp4::trace_zero_fraction(p)?,
    })
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Prints a pass/fail matrix and returns whether every check passed.
pub fn selftest(out: &mut dyn Write, quick: bool) -> std::io::Result<bool> {
    let mut all = true;
    let mut check = |out: &mut dyn Write, name: &str, ok: bool| -> std::io::Result<()> {
        all &= ok;
        writeln!(out, "{:<4} {name}", mark(ok))
    };
    let f3 = gsp4::trace_zero_fraction(3);
    check(out, "trace-zero fraction, p = 3", f3.is_ok_and(|f| f.fraction.to_string() == "231/640"))?;
    if !quick {
        let f5 = gsp4::trace_zero_fraction(5);
        check(out, "trace-zero fraction, p = 5", f5.is_ok_and(|f| f.fraction.to_string() == "3095/14976"))?;
    }
    let t3 = CandidateTables::cached(3);
    let orbit_ok = t3.as_ref().is_ok_and(|t| {
        [
            (GroupLabel::G2304, vec![8, 32]),
            (GroupLabel::G768, vec![8, 32]),
            (GroupLabel::G768Prime, vec![8, 32]),
            (GroupLabel::G480, vec![20, 20]),
            (GroupLabel::G480Prime, vec![40]),
        ]
        .iter()
        .all(|(l, o)| t.get(*l).is_some_and(|g| g.orbits_mod_sign() == o.as_slice()))
    });
    check(out, "orbit table, p = 3", orbit_ok)?;

    writeln!(out, "\n{:<6} {:>3} {:>6} {:>6} {:>6}", "curve", "p", "screen", "local", "image")?;
    for row in &TABLE {
        let curve = row.curve();
        let screen_ok = screen::screen_curve(&curve, row.p, screen::DEFAULT_QMAX)
            .is_ok_and(|r| r.verdict(row.delta_f).is_some_and(|v| v.passed));
        let local_ok = classify::local_checks(&curve, row.p).is_ok_and(|l| l.ordinary && l.p_distinguished);
        let image_ok = CandidateTables::cached(row.p)
            .ok()
            .and_then(|t| classify::classify_image(&curve, row.p, DEFAULT_CLASSIFY_QMAX, t).ok())
            .is_some_and(|c| c.top.contains(&row.image));
        all &= screen_ok && local_ok && image_ok;
        writeln!(
            out,
            "{:<6} {:>3} {:>6} {:>6} {:>6}",
            row.label,
            row.p,
            mark(screen_ok),
            mark(local_ok),
            mark(image_ok)
        )?;
    }
    writeln!(out, "\n{}", if all { "selftest passed" } else { "selftest FAILED" })?;
    Ok(all)
}
