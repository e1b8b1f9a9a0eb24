//! Screening a curve for a mod-p representation induced from a real
//! quadratic field.
//!
//! For each candidate discriminant `D` of the model discriminant, every
//! good prime `q <= q_max` inert in `Q(sqrt D)` must have `a_q = 0 mod p`;
//! a surviving `D` additionally needs one inert prime with `a_q != 0` over
//! the integers, which rules out the Jacobian being a base change.
//!
//! The prime `q = p` is never used as a test prime: the mod-p representation
//! is ramified there and the vanishing of the trace says nothing.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, FactorError};
use crate::counting::{self, MAX_PRIME};
use crate::curve::GenusTwoCurve;
use crate::quadfields::{self, QuadraticDiscriminant};

pub const DEFAULT_QMAX: u64 = 100;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScreenError {
    #[error("p must be 3 or 5, got {0}")]
    UnsupportedP(u64),
    #[error("q_max must lie in 3..=65536, got {0}")]
    QmaxOutOfRange(u64),
    #[error("cannot factor the model discriminant: {0}")]
    Factor(#[from] FactorError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScreenVerdict {
    #[serde(rename = "D")]
    pub d: QuadraticDiscriminant,
    pub passed: bool,
    pub failing_prime: Option<u64>,
    pub nonzero_witness: Option<u64>,
    #[serde(rename = "inert_checked")]
    pub inert_primes_checked: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveCoefficients {
    pub f: [i64; 7],
    pub h: [i64; 4],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScreenReport {
    pub label: Option<String>,
    pub p: u64,
    pub q_max: u64,
    pub verdicts: Vec<ScreenVerdict>,
    pub curve: CurveCoefficients,
    pub version: String,
    /// Wall time spent; left out of serialized reports so that output is
    /// reproducible byte for byte.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl ScreenReport {
    pub fn passing(&self) -> impl Iterator<Item = &ScreenVerdict> {
        self.verdicts.iter().filter(|v| v.passed)
    }

    pub fn any_passed(&self) -> bool {
        self.passing().next().is_some()
    }

    pub fn verdict(&self, d: u64) -> Option<&ScreenVerdict> {
        self.verdicts.iter().find(|v| v.d.get() == d)
    }
}

pub(crate) fn check_p(p: u64) -> Result<(), ScreenError> {
    match p {
        3 | 5 => Ok(()),
        _ => Err(ScreenError::UnsupportedP(p)),
    }
}

/// Exact `a_q` at every good prime `q <= q_max` other than `p`, computed
/// lazily and shared between discriminants.
struct TraceCache<'a> {
    curve: &'a GenusTwoCurve,
    primes: Vec<u64>,
    values: Vec<Option<Option<i64>>>,
}

impl<'a> TraceCache<'a> {
    fn new(curve: &'a GenusTwoCurve, p: u64, q_max: u64) -> Self {
        let primes: Vec<u64> = arith::primes_up_to(q_max)
            .into_iter()
            .filter(|&q| q != p)
            .collect();
        let values = vec![None; primes.len()];
        TraceCache { curve, primes, values }
    }

    /// `None` at bad primes.
    fn get(&mut self, i: usize) -> Option<i64> {
        let (curve, q) = (self.curve, self.primes[i]);
        *self.values[i].get_or_insert_with(|| {
            if arith::bigint_mod(curve.discriminant(), q) == 0 {
                None
            } else {
                Some(counting::a_q(curve, q).expect("good prime below 2^16"))
            }
        })
    }
}

fn screen_impl(
    curve: &GenusTwoCurve,
    p: u64,
    q_max: u64,
    fields: Option<&[QuadraticDiscriminant]>,
    early_exit: bool,
) -> Result<ScreenReport, ScreenError> {
    check_p(p)?;
    if !(3..=MAX_PRIME).contains(&q_max) {
        return Err(ScreenError::QmaxOutOfRange(q_max));
    }
    let start = Instant::now();
    let candidates = match fields {
        Some(ds) => {
            let mut ds = ds.to_vec();
            ds.sort_unstable();
            ds.dedup();
            ds
        }
        None => quadfields::candidate_discriminants(curve.discriminant(), p)?,
    };
    let mut cache = TraceCache::new(curve, p, q_max);
    let mut verdicts = Vec::with_capacity(candidates.len());
    for d in candidates {
        let mut failing_prime = None;
        let mut nonzero_witness = None;
        let mut checked = 0u32;
        for i in 0..cache.primes.len() {
            let q = cache.primes[i];
            if !d.is_inert(q) {
                continue;
            }
            let Some(a) = cache.get(i) else { continue };
            checked += 1;
            if a != 0 && nonzero_witness.is_none() {
                nonzero_witness = Some(q);
            }
            if a.rem_euclid(p as i64) != 0 && failing_prime.is_none() {
                failing_prime = Some(q);
                if early_exit {
                    break;
                }
            }
        }
        verdicts.push(ScreenVerdict {
            d,
            passed: failing_prime.is_none() && nonzero_witness.is_some(),
            failing_prime,
            nonzero_witness,
            inert_primes_checked: checked,
        });
    }
    Ok(ScreenReport {
        label: curve.label().map(str::to_string),
        p,
        q_max,
        verdicts,
        curve: CurveCoefficients { f: *curve.f(), h: *curve.h() },
        version: crate::VERSION.to_string(),
        elapsed: start.elapsed(),
    })
}

/// Screens `curve` at `p` against every candidate field, discarding a field
/// at the first inert prime whose trace is nonzero mod `p`.
pub fn screen_curve(curve: &GenusTwoCurve, p: u64, q_max: u64) -> Result<ScreenReport, ScreenError> {
    screen_impl(curve, p, q_max, None, true)
}

/// Screens against the given fields instead of those read off the model
/// discriminant.
pub fn screen_curve_for(
    curve: &GenusTwoCurve,
    p: u64,
    q_max: u64,
    fields: &[QuadraticDiscriminant],
) -> Result<ScreenReport, ScreenError> {
    screen_impl(curve, p, q_max, Some(fields), true)
}

/// Like [`screen_curve`] but visits every inert prime, so that
/// `inert_primes_checked` counts all of them even for failing fields.
pub fn screen_curve_exhaustive(
    curve: &GenusTwoCurve,
    p: u64,
    q_max: u64,
) -> Result<ScreenReport, ScreenError> {
    screen_impl(curve, p, q_max, None, false)
}
