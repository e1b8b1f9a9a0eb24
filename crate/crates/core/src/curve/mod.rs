//! Integral models `y^2 + h(x) y = f(x)` of genus-2 curves over the rationals.
//!
//! The discriminant of a model is `2^-12 * disc6(4f + h^2)`, where `disc6` is
//! the discriminant of the binary sextic form obtained by homogenizing to
//! degree 6 (so a quintic `F` contributes `lead(F)^2 * disc5(F)`). This is the
//! normalization used by Magma and the LMFDB, and its reduction mod `q`
//! vanishes exactly when the model is singular mod `q`, including `q = 2`.

mod parse;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not a genus-2 model: deg(4f + h^2) = {0}, expected 5 or 6")]
    Genus(usize),
    #[error("model discriminant is zero")]
    ZeroDiscriminant,
    #[error("twisting parameter {0} is not a nonzero squarefree integer")]
    NotSquarefree(i64),
    #[error("coefficient overflow while building twist")]
    Overflow,
}

/// A genus-2 curve given by an integral model `y^2 + h(x) y = f(x)`.
///
/// Coefficient arrays are stored lowest degree first. The discriminant is
/// computed once at construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenusTwoCurve {
    f: [i64; 7],
    h: [i64; 4],
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(skip)]
    disc: BigInt,
}

/// A model reduced modulo a prime `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveModP {
    pub q: u64,
    pub f: [u64; 7],
    pub h: [u64; 4],
    pub good: bool,
}

fn big_poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn degree(c: &[BigInt]) -> Option<usize> {
    c.iter().rposition(|v| !v.is_zero())
}

/// Fraction-free (Bareiss) determinant.
fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Discriminant of a univariate polynomial of exact degree `n >= 1`.
fn poly_discriminant(c: &[BigInt]) -> BigInt {
    let n = degree(c).expect("nonzero polynomial");
    let deriv: Vec<BigInt> = (1..=n).map(|i| &c[i] * BigInt::from(i)).collect();
    let m = n - 1;
    let size = n + m;
    let mut syl = vec![vec![BigInt::zero(); size]; size];
    for row in 0..m {
        for i in 0..=n {
            syl[row][row + i] = c[n - i].clone();
        }
    }
    for row in 0..n {
        for i in 0..=m {
            syl[m + row][row + i] = deriv[m - i].clone();
        }
    }
    let res = determinant(syl);
    let d = res / &c[n];
    if (n * (n - 1) / 2) % 2 == 1 {
        -d
    } else {
        d
    }
}

/// Discriminant of the degree-6 binary form with coefficients `c`.
pub(crate) fn sextic_form_discriminant(c: &[BigInt; 7]) -> BigInt {
    match degree(c) {
        Some(6) => poly_discriminant(c),
        Some(5) => &c[5] * &c[5] * poly_discriminant(&c[..6]),
        _ => BigInt::zero(),
    }
}

fn is_squarefree(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    let mut n = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

impl GenusTwoCurve {
    /// Builds a curve from coefficient arrays, checking the genus-2 conditions.
    pub fn new(f: [i64; 7], h: [i64; 4], label: Option<String>) -> Result<Self, CurveError> {
        let big_f: Vec<BigInt> = f.iter().map(|&v| BigInt::from(v)).collect();
        let big_h: Vec<BigInt> = h.iter().map(|&v| BigInt::from(v)).collect();
        let h2 = big_poly_mul(&big_h, &big_h);
        let form: [BigInt; 7] =
            std::array::from_fn(|i| BigInt::from(4) * &big_f[i] + h2.get(i).cloned().unwrap_or_default());
        let deg = degree(&form).unwrap_or(0);
        if deg < 5 {
            return Err(CurveError::Genus(deg));
        }
        let d6 = sextic_form_discriminant(&form);
        if d6.is_zero() {
            return Err(CurveError::ZeroDiscriminant);
        }
        let (disc, rem) = d6.div_rem(&BigInt::from(4096));
        debug_assert!(rem.is_zero(), "integral models have disc6 divisible by 2^12");
        Ok(GenusTwoCurve { f, h, label, disc })
    }

    /// Parses either an equation or a curve-list line `label;f0,..,f6;h0,..,h3`.
    pub fn parse(text: &str) -> Result<Self, CurveError> {
        let text = text.trim();
        if text.contains(';') {
            return Self::parse_list_line(text);
        }
        let (f, h) = parse::parse_equation(text)?;
        Self::new(f, h, None)
    }

    /// Parses a line of the curve-list format. Missing trailing coefficients
    /// are zero and an empty label is allowed.
    pub fn parse_list_line(line: &str) -> Result<Self, CurveError> {
        let mut parts = line.trim().split(';');
        let label = parts.next().unwrap_or("").trim();
        let f_text = parts
            .next()
            .ok_or_else(|| CurveError::Parse("missing f coefficients".into()))?;
        let h_text = parts.next().unwrap_or("");
        if parts.next().is_some() {
            return Err(CurveError::Parse("too many ';'-separated fields".into()));
        }
        fn coeffs<const N: usize>(text: &str, name: &str) -> Result<[i64; N], CurveError> {
            let mut out = [0i64; N];
            let text = text.trim();
            if text.is_empty() {
                return Ok(out);
            }
            let items: Vec<&str> = text.split(',').collect();
            if items.len() > N {
                return Err(CurveError::Parse(format!("{name} has more than {N} coefficients")));
            }
            for (slot, item) in out.iter_mut().zip(items) {
                *slot = item
                    .trim()
                    .parse()
                    .map_err(|_| CurveError::Parse(format!("bad {name} coefficient {item:?}")))?;
            }
            Ok(out)
        }
        let f = coeffs::<7>(f_text, "f")?;
        let h = coeffs::<4>(h_text, "h")?;
        let label = (!label.is_empty()).then(|| label.to_string());
        Self::new(f, h, label)
    }

    pub fn f(&self) -> &[i64; 7] {
        &self.f
    }

    pub fn h(&self) -> &[i64; 4] {
        &self.h
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// The model discriminant `2^-12 disc6(4f + h^2)`; never zero.
    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    /// Coefficients of `4f + h^2`, lowest degree first.
    pub fn completed_square(&self) -> [i128; 7] {
        let mut out = [0i128; 7];
        for (i, &c) in self.f.iter().enumerate() {
            out[i] = 4 * c as i128;
        }
        for i in 0..4 {
            for j in 0..4 {
                out[i + j] += self.h[i] as i128 * self.h[j] as i128;
            }
        }
        out
    }

    /// Reduces the model coefficientwise mod `q`; `good` iff `q` does not
    /// divide the discriminant.
    pub fn reduce_mod(&self, q: u64) -> CurveModP {
        let red = |c: i64| c.rem_euclid(q as i64) as u64;
        CurveModP {
            q,
            f: self.f.map(red),
            h: self.h.map(red),
            good: arith::bigint_mod(&self.disc, q) != 0,
        }
    }

    /// A model of the quadratic twist by the squarefree integer `d`:
    /// `y^2 = d f(x)` when `h = 0`, otherwise `y^2 = d (4f + h^2)`.
    pub fn twist(&self, d: i64) -> Result<GenusTwoCurve, CurveError> {
        if !is_squarefree(d) {
            return Err(CurveError::NotSquarefree(d));
        }
        let base: [i128; 7] = if self.h.iter().all(|&c| c == 0) {
            self.f.map(|c| c as i128)
        } else {
            self.completed_square()
        };
        let mut f = [0i64; 7];
        for (slot, c) in f.iter_mut().zip(base) {
            *slot = c
                .checked_mul(d as i128)
                .and_then(|v| i64::try_from(v).ok())
                .ok_or(CurveError::Overflow)?;
        }
        let label = self.label.as_ref().map(|l| format!("{l}^({d})"));
        GenusTwoCurve::new(f, [0; 4], label)
    }

    /// The curve-list line for this curve.
    pub fn to_list_line(&self) -> String {
        let join = |c: &[i64]| c.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        format!(
            "{};{};{}",
            self.label.as_deref().unwrap_or(""),
            join(&self.f),
            join(&self.h)
        )
    }
}

fn write_poly(out: &mut fmt::Formatter<'_>, c: &[i64]) -> fmt::Result {
    let mut first = true;
    for (i, &v) in c.iter().enumerate().rev() {
        if v == 0 {
            continue;
        }
        let mag = v.unsigned_abs();
        if first {
            if v < 0 {
                write!(out, "-")?;
            }
        } else {
            write!(out, " {} ", if v < 0 { '-' } else { '+' })?;
        }
        first = false;
        match (i, mag) {
            (0, m) => write!(out, "{m}")?,
            (1, 1) => write!(out, "x")?,
            (1, m) => write!(out, "{m}*x")?,
            (e, 1) => write!(out, "x^{e}")?,
            (e, m) => write!(out, "{m}*x^{e}")?,
        }
    }
    if first {
        write!(out, "0")?;
    }
    Ok(())
}

impl fmt::Display for GenusTwoCurve {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "y^2")?;
        if self.h.iter().any(|&c| c != 0) {
            write!(out, " + (")?;
            write_poly(out, &self.h)?;
            write!(out, ")*y")?;
        }
        write!(out, " = ")?;
        write_poly(out, &self.f)
    }
}

impl FromStr for GenusTwoCurve {
    type Err = CurveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GenusTwoCurve::parse(s)
    }
}

impl CurveModP {
    /// `4f + h^2` reduced mod `q`.
    pub fn completed_square(&self) -> [u64; 7] {
        let q = self.q;
        let mut out = [0u64; 7];
        for (i, &c) in self.f.iter().enumerate() {
            out[i] = (4 * c) % q;
        }
        for i in 0..4 {
            for j in 0..4 {
                out[i + j] = (out[i + j] + self.h[i] * self.h[j]) % q;
            }
        }
        out
    }
}

/// Prime support of `|n|` by trial division; for tests and diagnostics.
pub fn prime_support(n: &BigInt) -> Vec<u64> {
    arith::factor(n)
        .map(|fs| fs.into_iter().map(|(p, _)| p).collect())
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_table_curve() {
        let c: GenusTwoCurve = "y^2 + xy = 7x^6 - 22x^5 - 7x^4 + 61x^3 - 3x^2 - 54x - 12"
            .parse()
            .unwrap();
        assert_eq!(c.f(), &[-12, -54, -3, 61, -7, -22, 7]);
        assert_eq!(c.h(), &[0, 1, 0, 0]);
    }

    #[test]
    fn degenerate_models_rejected() {
        assert_eq!(GenusTwoCurve::parse("y^2 = x^5"), Err(CurveError::ZeroDiscriminant));
        assert_eq!(GenusTwoCurve::parse("y^2 = x^4 + 1"), Err(CurveError::Genus(4)));
        assert_eq!(
            GenusTwoCurve::parse("y^2 = (x^3 + x + 1)^2"),
            Err(CurveError::ZeroDiscriminant)
        );
    }

    // Frozen from an independent sympy computation of 2^-12 disc(4f + h^2).
    #[test]
    fn discriminant_fixtures() {
        let cases = [
            ("y^2 = 2x^5 - 8x^4 + 26x^2 - 7x - 26", "8192000"),
            ("y^2 = x^6 - 10x^4 + 2x^3 + 31x^2 - 13x - 18", "-10976000"),
            ("y^2 + xy = 7x^6 - 22x^5 - 7x^4 + 61x^3 - 3x^2 - 54x - 12", "-96786192384"),
            ("y^2 = 4x^5 + 6x^4 + 4x^3 + 6x^2 + 2x + 3", "131072000000"),
            ("y^2 = x^5 + 3x^3 + x + 1", "2936064"),
        ];
        for (eq, want) in cases {
            let c = GenusTwoCurve::parse(eq).unwrap();
            assert_eq!(c.discriminant().to_string(), want, "{eq}");
        }
    }

    #[test]
    fn list_line_format() {
        let c = GenusTwoCurve::parse("fp;5,10,5,6,-2,1;").unwrap();
        assert_eq!(c.label(), Some("fp"));
        assert_eq!(c.f(), &[5, 10, 5, 6, -2, 1, 0]);
        assert_eq!(c.h(), &[0; 4]);
        assert_eq!(GenusTwoCurve::parse(&c.to_list_line()).unwrap(), c);
        assert!(GenusTwoCurve::parse("a;1,2,x;").is_err());
        assert!(GenusTwoCurve::parse("a;1,2,3,4,5,6,7,8;").is_err());
    }

    #[test]
    fn reduction_flags() {
        let c = GenusTwoCurve::parse("y^2 = 2x^5 - 8x^4 + 26x^2 - 7x - 26").unwrap();
        assert!(!c.reduce_mod(5).good);
        assert!(!c.reduce_mod(2).good);
        assert!(c.reduce_mod(3).good);
        assert_eq!(c.reduce_mod(3).f, [1, 2, 2, 0, 1, 2, 0]);
    }

    #[test]
    fn twist_rules() {
        let c = GenusTwoCurve::parse("y^2 + y = x^5 + 1").unwrap();
        assert_eq!(c.twist(4), Err(CurveError::NotSquarefree(4)));
        assert_eq!(c.twist(0), Err(CurveError::NotSquarefree(0)));
        let t = c.twist(-3).unwrap();
        assert_eq!(t.f(), &[-15, 0, 0, 0, 0, -12, 0]);
        let plain = GenusTwoCurve::parse("y^2 = x^5 + 1").unwrap();
        assert_eq!(plain.twist(1).unwrap().f(), plain.f());
    }

    #[test]
    fn display_roundtrip_fixed() {
        let c = GenusTwoCurve::parse("y^2 + (x+1)y = 64x^5 - 8x^4 + 39x^3 + x^2 + 2x + 1").unwrap();
        assert_eq!(c.to_string(), "y^2 + (x + 1)*y = 64*x^5 - 8*x^4 + 39*x^3 + x^2 + 2*x + 1");
        assert_eq!(GenusTwoCurve::parse(&c.to_string()).unwrap(), c);
    }
}
