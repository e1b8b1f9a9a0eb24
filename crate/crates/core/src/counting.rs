//! Point counts over `F_q` and `F_{q^2}` and the local L-polynomial
//! `L_q(T) = 1 + c1 T + c2 T^2 + q c1 T^3 + q^2 T^4` at primes of good
//! reduction.
//!
//! For odd `q` the model is rewritten as `Y^2 = F(x)` with `F = 4f + h^2`
//! and every `x` contributes `1 + chi(F(x))`. The two (or one) points at
//! infinity contribute `1 + chi(lead F)` when `deg F = 6` and `1` when
//! `deg F = 5`. Over `F_{q^2} = F_q[w]/(w^2 - n)` the character of
//! `a + b w` is the character of its norm `a^2 - n b^2`.
//!
//! `q = 2` is handled by direct enumeration of `y^2 + h y = f` over `F_2`
//! and `F_4`, counting the points at infinity as the solutions of
//! `y^2 + h_3 y = f_6`.
//!
//! The trace datum `a_q` is the linear L-coefficient `c1 = #C(F_q) - q - 1`;
//! the trace of Frobenius on the Tate module is `-a_q`.

use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::arith;
use crate::curve::{CurveModP, GenusTwoCurve};
use crate::field::ExtField;

/// Largest prime the counting routines accept.
pub const MAX_PRIME: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountingError {
    #[error("model has bad reduction at {0}")]
    BadReduction(u64),
    #[error("{0} is not a prime below 2^16")]
    UnsupportedPrime(u64),
    #[error("L-polynomial coefficient c2 is not integral at q = {q} (n1 = {n1}, n2 = {n2})")]
    NonIntegral { q: u64, n1: u64, n2: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FrobeniusRecord {
    pub q: u64,
    pub n1: u64,
    pub n2: u64,
    pub c1: i64,
    pub c2: i64,
}

impl FrobeniusRecord {
    /// The trace datum `a_q = c1`.
    pub fn a_q(&self) -> i64 {
        self.c1
    }

    /// Coefficients `[1, c1, c2, q c1, q^2]` of `L_q(T)`.
    pub fn lpoly_coefficients(&self) -> [i128; 5] {
        let q = self.q as i128;
        [1, self.c1 as i128, self.c2 as i128, q * self.c1 as i128, q * q]
    }

    /// `L_q(1) = #Jac(F_q)`.
    pub fn jacobian_order(&self) -> i128 {
        self.lpoly_coefficients().iter().sum()
    }

    /// Power sums `s_1..=s_n` of the Frobenius eigenvalues.
    pub fn power_sums(&self, n: usize) -> Vec<i128> {
        let q = self.q as i128;
        let c1 = self.c1 as i128;
        let e = [-c1, self.c2 as i128, -q * c1, q * q];
        let mut s: Vec<i128> = Vec::with_capacity(n + 1);
        s.push(4);
        for m in 1..=n {
            let mut acc = 0i128;
            for i in 1..=4.min(m) {
                let sign = if i % 2 == 1 { 1 } else { -1 };
                let term = if i == m { i as i128 * e[i - 1] } else { e[i - 1] * s[m - i] };
                acc += sign * term;
            }
            s.push(acc);
        }
        s.remove(0);
        s
    }

    /// `#Jac(F_{q^k})`, or `None` on 128-bit overflow.
    pub fn jacobian_order_over(&self, k: u32) -> Option<i128> {
        let big_q = (self.q as i128).checked_pow(k)?;
        big_q.checked_mul(big_q)?;
        let s = self.power_sums(2 * k as usize);
        let sk = s[k as usize - 1];
        let s2k = s[2 * k as usize - 1];
        let e1 = sk;
        let e2 = (sk.checked_mul(sk)? - s2k) / 2;
        let e3 = big_q.checked_mul(e1)?;
        let e4 = big_q * big_q;
        Some(1 - e1 + e2 - e3 + e4)
    }

    /// `#C(F_{q^k})`.
    pub fn curve_points_over(&self, k: u32) -> i128 {
        let big_q = (self.q as i128).pow(k);
        big_q + 1 - self.power_sums(k as usize)[k as usize - 1]
    }
}

/// Legendre-symbol table for one odd prime.
#[derive(Debug, Clone)]
pub struct CharTable {
    q: u64,
    chi: Vec<i8>,
    nonresidue: u64,
}

impl CharTable {
    pub fn new(q: u64) -> CharTable {
        assert!(q > 2 && arith::is_prime(q));
        let mut chi = vec![-1i8; q as usize];
        chi[0] = 0;
        for x in 1..q {
            chi[(x * x % q) as usize] = 1;
        }
        let nonresidue = (2..q).find(|&n| chi[n as usize] == -1).expect("odd prime");
        CharTable { q, chi, nonresidue }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn chi(&self, a: u64) -> i8 {
        self.chi[a as usize]
    }
}

const CACHED_BOUND: u64 = 1024;

/// Character tables for every odd prime below 1024, built on first use.
fn cached_table(q: u64) -> Option<&'static CharTable> {
    static TABLES: OnceLock<Vec<Option<CharTable>>> = OnceLock::new();
    if q >= CACHED_BOUND {
        return None;
    }
    let tables = TABLES.get_or_init(|| {
        (0..CACHED_BOUND)
            .map(|n| (n > 2 && arith::is_prime(n)).then(|| CharTable::new(n)))
            .collect()
    });
    tables[q as usize].as_ref()
}

fn with_table<T>(q: u64, f: impl FnOnce(&CharTable) -> T) -> T {
    match cached_table(q) {
        Some(t) => f(t),
        None => f(&CharTable::new(q)),
    }
}

fn check_prime(curve_q: &CurveModP) -> Result<(), CountingError> {
    let q = curve_q.q;
    if q > MAX_PRIME || !arith::is_prime(q) {
        return Err(CountingError::UnsupportedPrime(q));
    }
    if !curve_q.good {
        return Err(CountingError::BadReduction(q));
    }
    Ok(())
}

fn count_odd(form: &[u64; 7], table: &CharTable) -> u64 {
    let q = table.q;
    let mut n: i64 = 0;
    for x in 0..q {
        let mut v = 0u64;
        for &c in form.iter().rev() {
            v = (v * x + c) % q;
        }
        n += 1 + table.chi(v) as i64;
    }
    n += if form[6] == 0 { 1 } else { 1 + table.chi(form[6]) as i64 };
    n as u64
}

fn count_odd_quadratic(form: &[u64; 7], table: &CharTable) -> u64 {
    let q = table.q;
    let w2 = table.nonresidue;
    let mut n: u64 = 0;
    for a in 0..q {
        for b in 0..q {
            // Horner in F_q[w], w^2 = w2
            let (mut u, mut v) = (0u64, 0u64);
            for &c in form.iter().rev() {
                let nu = (u * a + w2 * (v * b % q) + c) % q;
                let nv = (u * b + v * a) % q;
                u = nu;
                v = nv;
            }
            let norm = (u * u + (q - w2) * (v * v % q)) % q;
            n += if u == 0 && v == 0 {
                1
            } else if table.chi(norm) == 1 {
                2
            } else {
                0
            };
        }
    }
    n + if form[6] == 0 { 1 } else { 2 }
}

/// Points of the smooth model over `field` (characteristic 2), by
/// enumeration.
fn count_char2(curve_q: &CurveModP, field: &ExtField) -> u64 {
    let f: Vec<_> = curve_q.f.iter().map(|&c| field.from_u64(c)).collect();
    let h: Vec<_> = curve_q.h.iter().map(|&c| field.from_u64(c)).collect();
    let mut n = 0u64;
    for i in 0..field.order() {
        let x = field.element(i);
        let fx = crate::field::poly::eval(field, &f, x);
        let hx = crate::field::poly::eval(field, &h, x);
        n += field.solve_quadratic(hx, fx).len() as u64;
    }
    n + field.solve_quadratic(h[3], f[6]).len() as u64
}

/// Number of points over `F_q` of the smooth model.
pub fn count_points(curve_q: &CurveModP) -> Result<u64, CountingError> {
    check_prime(curve_q)?;
    if curve_q.q == 2 {
        return Ok(count_char2(curve_q, &ExtField::prime(2)));
    }
    let form = curve_q.completed_square();
    Ok(with_table(curve_q.q, |t| count_odd(&form, t)))
}

/// Number of points over `F_{q^2}` of the smooth model.
pub fn count_points_quadratic(curve_q: &CurveModP) -> Result<u64, CountingError> {
    check_prime(curve_q)?;
    if curve_q.q == 2 {
        return Ok(count_char2(curve_q, &ExtField::new(2, 2)));
    }
    let form = curve_q.completed_square();
    Ok(with_table(curve_q.q, |t| count_odd_quadratic(&form, t)))
}

/// Assembles `L_q(T)` from point counts over `F_q` and `F_{q^2}`.
pub fn lpolynomial(curve: &GenusTwoCurve, q: u64) -> Result<FrobeniusRecord, CountingError> {
    let red = curve.reduce_mod(q);
    let n1 = count_points(&red)?;
    let n2 = count_points_quadratic(&red)?;
    let qi = q as i64;
    let c1 = n1 as i64 - qi - 1;
    let twice_c2 = c1 * c1 + n2 as i64 - qi * qi - 1;
    if twice_c2 % 2 != 0 {
        return Err(CountingError::NonIntegral { q, n1, n2 });
    }
    Ok(FrobeniusRecord { q, n1, n2, c1, c2: twice_c2 / 2 })
}

/// Exact `a_q = c1 = #C(F_q) - q - 1`, from a single count over `F_q`.
pub fn a_q(curve: &GenusTwoCurve, q: u64) -> Result<i64, CountingError> {
    let n1 = count_points(&curve.reduce_mod(q))?;
    Ok(n1 as i64 - q as i64 - 1)
}

/// `a_q mod p` in `0..p`.
pub fn aq_mod(curve: &GenusTwoCurve, q: u64, p: u64) -> Result<u64, CountingError> {
    Ok(a_q(curve, q)?.rem_euclid(p as i64) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::poly;

    // Brute force over all (x, y) in F_{q^k}^2 plus solutions at infinity.
    fn brute_force(curve: &GenusTwoCurve, q: u64, k: usize) -> u64 {
        let field = ExtField::new(q, k);
        let f: Vec<_> = curve.f().iter().map(|&c| field.from_i64(c)).collect();
        let h: Vec<_> = curve.h().iter().map(|&c| field.from_i64(c)).collect();
        let ys: Vec<_> = (0..field.order()).map(|i| field.element(i)).collect();
        let mut n = 0;
        for &x in &ys {
            let fx = poly::eval(&field, &f, x);
            let hx = poly::eval(&field, &h, x);
            n += ys
                .iter()
                .filter(|&&y| field.add(field.square(y), field.mul(hx, y)) == fx)
                .count() as u64;
        }
        n + ys
            .iter()
            .filter(|&&y| field.add(field.square(y), field.mul(h[3], y)) == f[6])
            .count() as u64
    }

    #[test]
    fn small_curve_mod_7_matches_enumeration() {
        let c = GenusTwoCurve::parse("y^2 = x^5 + 3x^3 + x + 1").unwrap();
        let red = c.reduce_mod(7);
        assert_eq!(count_points(&red).unwrap(), brute_force(&c, 7, 1));
        assert_eq!(count_points(&red).unwrap(), 3);
    }

    #[test]
    fn false_positive_curve_at_151() {
        let c = GenusTwoCurve::parse("y^2 = x^5 - 2x^4 + 6x^3 + 5x^2 + 10x + 5").unwrap();
        assert_eq!(count_points(&c.reduce_mod(151)).unwrap(), 157);
        assert_eq!(a_q(&c, 151).unwrap(), 5);
        assert_eq!(aq_mod(&c, 151, 3).unwrap(), 2);
        for q in [23, 73, 89, 97] {
            assert_eq!(aq_mod(&c, q, 3).unwrap(), 0, "q = {q}");
        }
    }

    #[test]
    fn quadratic_extension_counts_match_enumeration() {
        let curves = [
            "y^2 = x^5 + 3x^3 + x + 1",
            "y^2 + xy = 7x^6 - 22x^5 - 7x^4 + 61x^3 - 3x^2 - 54x - 12",
            "y^2 + (x+1)y = 64x^5 - 8x^4 + 39x^3 + x^2 + 2x + 1",
            "y^2 = x^6 - 10x^4 + 2x^3 + 31x^2 - 13x - 18",
        ];
        for eq in curves {
            let c = GenusTwoCurve::parse(eq).unwrap();
            for q in [3u64, 11, 13, 17, 19] {
                let red = c.reduce_mod(q);
                if !red.good {
                    continue;
                }
                assert_eq!(count_points(&red).unwrap(), brute_force(&c, q, 1), "{eq} q={q}");
                assert_eq!(
                    count_points_quadratic(&red).unwrap(),
                    brute_force(&c, q, 2),
                    "{eq} q={q}"
                );
            }
        }
    }

    #[test]
    fn characteristic_two() {
        for eq in [
            "y^2 + (x^3 + x + 1)y = x^5 + x + 1",
            "y^2 + (x^2 + x + 1)y = x^5 + x^2 + 1",
            "y^2 + (x^3 + x^2 + 1)y = x^6 + x^3 + x",
        ] {
            let c = GenusTwoCurve::parse(eq).unwrap();
            assert!(c.reduce_mod(2).good, "{eq}");
            let rec = lpolynomial(&c, 2).unwrap();
            assert_eq!(rec.n1, brute_force(&c, 2, 1), "{eq}");
            assert_eq!(rec.n2, brute_force(&c, 2, 2), "{eq}");
            assert_eq!(rec.curve_points_over(3), brute_force(&c, 2, 3) as i128, "{eq}");
        }
    }

    #[test]
    fn bad_reduction_is_an_error() {
        let c = GenusTwoCurve::parse("y^2 = 2x^5 - 8x^4 + 26x^2 - 7x - 26").unwrap();
        assert_eq!(lpolynomial(&c, 5), Err(CountingError::BadReduction(5)));
        assert_eq!(count_points(&c.reduce_mod(4)), Err(CountingError::UnsupportedPrime(4)));
    }

    #[test]
    fn extension_orders_from_power_sums() {
        let c = GenusTwoCurve::parse("y^2 = x^5 + 3x^3 + x + 1").unwrap();
        let rec = lpolynomial(&c, 7).unwrap();
        assert_eq!(rec.jacobian_order_over(1), Some(rec.jacobian_order()));
        assert_eq!(rec.curve_points_over(1), rec.n1 as i128);
        assert_eq!(rec.curve_points_over(2), rec.n2 as i128);
        assert_eq!(rec.curve_points_over(3), brute_force(&c, 7, 3) as i128);
    }
}
