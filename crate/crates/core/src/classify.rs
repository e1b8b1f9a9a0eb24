//! Local conditions at `p`, Frobenius statistics matched against candidate
//! images, and the certificate that collects them.
//!
//! Modulo `p` the Frobenius polynomial at `p` is
//! `T^4 + c1 T^3 + c2 T^2 + p c1 T + p^2 = T^2 (T^2 + c1 T + c2)`. The
//! reduction is ordinary exactly when two roots are `p`-adic units, which by
//! the Newton polygon means `c2` is prime to `p`; the unit roots then reduce
//! to the roots of `T^2 + c1 T + c2`, and they are distinct mod `p` exactly
//! when `c1^2 - 4 c2` is prime to `p`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arith;
use crate::counting::{self, CountingError};
use crate::curve::GenusTwoCurve;
use crate::gsp4::{CandidateTables, CharpolyKey, GroupError, GroupLabel, SubgroupTable};
use crate::screen::{self, CurveCoefficients, ScreenError, ScreenVerdict};

/// Default prime bound for image classification.
pub const DEFAULT_CLASSIFY_QMAX: u64 = 500;

/// Fewer usable primes than this leaves the classification inconclusive.
pub const MIN_PRIMES: usize = 20;

pub const CERTIFICATE_SCHEMA: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("p must be 3 or 5, got {0}")]
    UnsupportedP(u64),
    #[error("q = {0} equals p")]
    QEqualsP(u64),
    #[error(transparent)]
    Counting(#[from] CountingError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Screen(#[from] ScreenError),
}

fn check_p(p: u64) -> Result<(), ClassifyError> {
    match p {
        3 | 5 => Ok(()),
        _ => Err(ClassifyError::UnsupportedP(p)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LocalChecks {
    pub p: u64,
    pub good_at_p: bool,
    pub ordinary: bool,
    pub p_distinguished: bool,
    pub c1_mod_p: Option<u64>,
    pub c2_mod_p: Option<u64>,
}

/// Good reduction, ordinarity and distinguishedness at `p`. Bad reduction
/// is reported by clearing every flag.
pub fn local_checks(curve: &GenusTwoCurve, p: u64) -> Result<LocalChecks, ClassifyError> {
    check_p(p)?;
    if !curve.reduce_mod(p).good {
        return Ok(LocalChecks {
            p,
            good_at_p: false,
            ordinary: false,
            p_distinguished: false,
            c1_mod_p: None,
            c2_mod_p: None,
        });
    }
    let rec = counting::lpolynomial(curve, p)?;
    let pi = p as i64;
    let c1 = rec.c1.rem_euclid(pi);
    let c2 = rec.c2.rem_euclid(pi);
    let ordinary = c2 != 0;
    let p_distinguished = ordinary && (c1 * c1 - 4 * c2).rem_euclid(pi) != 0;
    Ok(LocalChecks {
        p,
        good_at_p: true,
        ordinary,
        p_distinguished,
        c1_mod_p: Some(c1 as u64),
        c2_mod_p: Some(c2 as u64),
    })
}

/// Frobenius at `q` reduced mod `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FrobeniusClass {
    pub q: u64,
    pub p: u64,
    /// `q mod p`, the similitude of Frobenius.
    pub lambda: u8,
    /// `[1, c1, c2, q c1, q^2] mod p`, leading coefficient first.
    pub coefficients: [u8; 5],
}

impl FrobeniusClass {
    /// The matching `(lambda, t, s)` key, with trace `t = -c1`.
    pub fn key(&self) -> CharpolyKey {
        let p = self.p as u8;
        CharpolyKey { lambda: self.lambda, t: (p - self.coefficients[1]) % p, s: self.coefficients[2] }
    }
}

/// `T^4 + c1 T^3 + c2 T^2 + q c1 T + q^2 mod p` with its similitude `q mod p`.
pub fn frobenius_charpoly_mod_p(
    curve: &GenusTwoCurve,
    q: u64,
    p: u64,
) -> Result<FrobeniusClass, ClassifyError> {
    check_p(p)?;
    if q == p {
        return Err(ClassifyError::QEqualsP(q));
    }
    let rec = counting::lpolynomial(curve, q)?;
    let r = |x: i128| x.rem_euclid(p as i128) as u8;
    let coefficients = rec.lpoly_coefficients().map(r);
    Ok(FrobeniusClass { q, p, lambda: (q % p) as u8, coefficients })
}

fn rational_string<S: Serializer>(r: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateScore {
    pub label: GroupLabel,
    pub order: u64,
    /// First sampled prime whose Frobenius class the candidate lacks.
    pub excluded_by: Option<u64>,
    /// Product over sampled primes of the conditional frequency of the
    /// observed class given its similitude; absent once excluded.
    #[serde(serialize_with = "rational_string")]
    pub score: Option<BigRational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassificationStatus {
    Conclusive,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub p: u64,
    pub q_max: u64,
    pub primes_used: usize,
    pub status: ClassificationStatus,
    /// Surviving candidates first, by decreasing score.
    pub ranking: Vec<CandidateScore>,
    /// Bit `i` set when `ranking[i]` is excluded.
    pub exclusion_bitmap: u64,
    /// The top label together with every candidate whose conditional
    /// frequencies coincide with it; empty when inconclusive.
    pub top: Vec<GroupLabel>,
    pub rigor: Rigor,
}

impl Classification {
    pub fn top_label(&self) -> Option<GroupLabel> {
        self.top.first().copied()
    }
}

/// Whether two groups give every key the same frequency within its
/// similitude class.
fn same_conditional_frequencies(a: &SubgroupTable, b: &SubgroupTable) -> bool {
    let (ha, hb) = (a.histogram(), b.histogram());
    let keys = ha.iter().map(|(k, _)| k).chain(hb.iter().map(|(k, _)| k));
    keys.into_iter().all(|k| {
        let lhs = ha.count(k) as u128 * hb.lambda_total(k.lambda) as u128;
        let rhs = hb.count(k) as u128 * ha.lambda_total(k.lambda) as u128;
        lhs == rhs
    })
}

/// Scores each candidate on the observed Frobenius classes.
pub fn score_candidates(
    observed: &[FrobeniusClass],
    candidates: &CandidateTables,
    q_max: u64,
) -> Classification {
    let mut ranking: Vec<(usize, CandidateScore)> = candidates
        .tables
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let h = t.histogram();
            let mut score = BigRational::one();
            let mut excluded_by = None;
            for obs in observed {
                let key = obs.key();
                let n = h.count(key);
                if n == 0 {
                    excluded_by = Some(obs.q);
                    break;
                }
                score *= BigRational::new(BigInt::from(n), BigInt::from(h.lambda_total(key.lambda)));
            }
            let score = excluded_by.is_none().then_some(score);
            (i, CandidateScore { label: t.label(), order: t.order(), excluded_by, score })
        })
        .collect();
    ranking.sort_by(|(i, a), (j, b)| match (&a.score, &b.score) {
        (Some(x), Some(y)) => y.cmp(x).then(i.cmp(j)),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => i.cmp(j),
    });
    let status = if observed.len() < MIN_PRIMES {
        ClassificationStatus::Inconclusive
    } else {
        ClassificationStatus::Conclusive
    };
    let mut top = Vec::new();
    if status == ClassificationStatus::Conclusive {
        if let Some((i, first)) = ranking.first().filter(|(_, c)| c.score.is_some()) {
            let lead = &candidates.tables[*i];
            top.push(first.label);
            for (j, other) in ranking.iter().skip(1) {
                if other.score == first.score && same_conditional_frequencies(lead, &candidates.tables[*j]) {
                    top.push(other.label);
                }
            }
        }
    }
    let exclusion_bitmap = ranking
        .iter()
        .enumerate()
        .filter(|(_, (_, c))| c.score.is_none())
        .fold(0u64, |acc, (i, _)| acc | 1 << i);
    Classification {
        p: candidates.p,
        q_max,
        primes_used: observed.len(),
        status,
        ranking: ranking.into_iter().map(|(_, c)| c).collect(),
        exclusion_bitmap,
        top,
        rigor: Rigor::Evidenced,
    }
}

/// Frobenius classes at every good prime `q <= q_max` other than `p`.
pub fn observe(curve: &GenusTwoCurve, p: u64, q_max: u64) -> Result<Vec<FrobeniusClass>, ClassifyError> {
    check_p(p)?;
    arith::primes_up_to(q_max)
        .into_par_iter()
        .filter(|&q| q != p && curve.reduce_mod(q).good)
        .map(|q| frobenius_charpoly_mod_p(curve, q, p))
        .collect()
}

/// Matches the Frobenius statistics of `curve` against the candidate images.
pub fn classify_image(
    curve: &GenusTwoCurve,
    p: u64,
    q_max: u64,
    candidates: &CandidateTables,
) -> Result<Classification, ClassifyError> {
    let observed = observe(curve, p, q_max)?;
    Ok(score_candidates(&observed, candidates, q_max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SatoTate {
    USp4,
    Unknown,
}

/// `USp4` when the image lies in the list of large induced images and an
/// inert prime has nonzero trace.
pub fn sato_tate_conclusion(verdict: &ScreenVerdict, label: Option<GroupLabel>) -> SatoTate {
    match label {
        Some(l) if l.is_vast_and_tidy() && verdict.nonzero_witness.is_some() => SatoTate::USp4,
        _ => SatoTate::Unknown,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Rigor {
    Verified,
    Evidenced,
    Assumed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub name: &'static str,
    pub holds: bool,
    pub rigor: Rigor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertifiedCurve {
    pub label: Option<String>,
    pub equation: String,
    #[serde(flatten)]
    pub coefficients: CurveCoefficients,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModularityCertificate {
    pub schema: u32,
    pub version: String,
    pub curve: CertifiedCurve,
    pub p: u64,
    #[serde(rename = "D")]
    pub d: Option<u64>,
    pub local: LocalChecks,
    pub screen: Option<ScreenVerdict>,
    pub image_label: Classification,
    pub vast_and_tidy: Hypothesis,
    pub sato_tate: SatoTate,
    pub hypotheses: Vec<Hypothesis>,
    pub status: String,
    pub reasons: Vec<String>,
}

impl ModularityCertificate {
    pub fn certified(&self) -> bool {
        self.reasons.is_empty()
    }
}

pub const STATUS_CONDITIONAL: &str = "modular conditional on evidenced items";
pub const STATUS_NOT_CERTIFIED: &str = "not certified";

/// Prime bounds used by [`certify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertifyOptions {
    pub screen_qmax: u64,
    pub classify_qmax: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { screen_qmax: screen::DEFAULT_QMAX, classify_qmax: DEFAULT_CLASSIFY_QMAX }
    }
}

/// Runs the screen, the local checks and the image classifier, and records
/// which hypotheses hold and how firmly. The field is the smallest passing
/// `D`.
pub fn certify(
    curve: &GenusTwoCurve,
    p: u64,
    options: CertifyOptions,
) -> Result<ModularityCertificate, ClassifyError> {
    let report = screen::screen_curve(curve, p, options.screen_qmax)?;
    let local = local_checks(curve, p)?;
    let tables = CandidateTables::cached(p)?;
    let image = classify_image(curve, p, options.classify_qmax, tables)?;
    let verdict = report.passing().next().cloned();
    let d = verdict.as_ref().map(|v| v.d.get());
    let label = image.top_label();
    let in_list = !image.top.is_empty() && image.top.iter().all(|l| l.is_vast_and_tidy());

    let vast_and_tidy = Hypothesis { name: "image vast and tidy", holds: in_list, rigor: Rigor::Evidenced };
    let mut hypotheses = vec![
        Hypothesis { name: "good ordinary reduction at p", holds: local.ordinary, rigor: Rigor::Verified },
        Hypothesis { name: "p-distinguished", holds: local.p_distinguished, rigor: Rigor::Verified },
        Hypothesis { name: "polarization of degree prime to p", holds: true, rigor: Rigor::Verified },
        Hypothesis {
            name: "F real quadratic and p unramified in F",
            holds: d.is_some_and(|d| d % p != 0),
            rigor: Rigor::Verified,
        },
        Hypothesis { name: "mod-p representation induced from F", holds: verdict.is_some(), rigor: Rigor::Evidenced },
        vast_and_tidy.clone(),
    ];
    if p == 5 {
        hypotheses.push(Hypothesis {
            name: "induced from a GL2(F_5)-valued representation",
            holds: label == Some(GroupLabel::G115200),
            rigor: Rigor::Evidenced,
        });
    }
    let mut reasons: Vec<String> = hypotheses
        .iter()
        .filter(|h| !h.holds)
        .map(|h| format!("{} does not hold", h.name))
        .collect();
    if image.status == ClassificationStatus::Inconclusive {
        reasons.push(format!("only {} primes available for classification", image.primes_used));
    }
    let sato_tate = match &verdict {
        Some(v) => sato_tate_conclusion(v, label),
        None => SatoTate::Unknown,
    };
    let status = if reasons.is_empty() { STATUS_CONDITIONAL } else { STATUS_NOT_CERTIFIED };
    Ok(ModularityCertificate {
        schema: CERTIFICATE_SCHEMA,
        version: crate::VERSION.to_string(),
        curve: CertifiedCurve {
            label: curve.label().map(str::to_string),
            equation: curve.to_string(),
            coefficients: CurveCoefficients { f: *curve.f(), h: *curve.h() },
        },
        p,
        d,
        local,
        screen: verdict,
        image_label: image,
        vast_and_tidy,
        sato_tate,
        hypotheses,
        status: status.to_string(),
        reasons,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables::{table_curves, FALSE_POSITIVE};
    use num_traits::Zero;

    #[test]
    fn frobenius_class_of_false_positive_at_151() {
        let c = GenusTwoCurve::parse(FALSE_POSITIVE).unwrap();
        let f = frobenius_charpoly_mod_p(&c, 151, 3).unwrap();
        assert_eq!(f.coefficients[1], 2);
        assert_eq!(f.key().t, 1);
        assert_eq!(f.lambda, 1);
        assert_eq!(f.coefficients[4], 1);
        assert_eq!(frobenius_charpoly_mod_p(&c, 3, 3), Err(ClassifyError::QEqualsP(3)));
    }

    #[test]
    fn table_rows_good_at_p_pass_local_checks() {
        for t in table_curves(None) {
            let l = local_checks(&t.curve(), t.p).unwrap();
            if l.good_at_p {
                assert!(l.ordinary && l.p_distinguished, "{}", t.label);
            } else {
                assert!(!l.ordinary && !l.p_distinguished);
            }
        }
    }

    #[test]
    fn sato_tate_rule() {
        let c = table_curves(Some(3)).next().unwrap().curve();
        let r = screen::screen_curve(&c, 3, 100).unwrap();
        let mut v = r.verdict(5).unwrap().clone();
        assert_eq!(sato_tate_conclusion(&v, Some(GroupLabel::G480)), SatoTate::USp4);
        assert_eq!(sato_tate_conclusion(&v, Some(GroupLabel::Other)), SatoTate::Unknown);
        assert_eq!(sato_tate_conclusion(&v, None), SatoTate::Unknown);
        v.nonzero_witness = None;
        assert_eq!(sato_tate_conclusion(&v, Some(GroupLabel::G480)), SatoTate::Unknown);
    }

    #[test]
    fn too_few_primes_is_inconclusive() {
        let c = table_curves(Some(3)).next().unwrap().curve();
        let tables = CandidateTables::cached(3).unwrap();
        let r = classify_image(&c, 3, 50, tables).unwrap();
        assert_eq!(r.status, ClassificationStatus::Inconclusive);
        assert!(r.top.is_empty());
    }

    #[test]
    fn score_is_zero_free_for_survivors() {
        let tables = CandidateTables::cached(3).unwrap();
        let r = score_candidates(&[], tables, 3);
        assert!(r.ranking.iter().all(|c| c.score.as_ref().is_some_and(|s| !s.is_zero())));
    }
}
