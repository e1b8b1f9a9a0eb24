//! Real quadratic fields by fundamental discriminant: Kronecker symbols and
//! the candidate fields attached to a curve discriminant.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{self, FactorError};

/// A positive fundamental discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QuadraticDiscriminant(u64);

impl QuadraticDiscriminant {
    pub fn new(d: u64) -> Option<QuadraticDiscriminant> {
        is_fundamental_discriminant(d as i64).then_some(QuadraticDiscriminant(d))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// `chi_D(q)`.
    pub fn character(self, q: u64) -> i8 {
        kronecker(self.0 as i64, q as i64)
    }

    pub fn is_inert(self, q: u64) -> bool {
        self.character(q) == -1
    }
}

impl fmt::Display for QuadraticDiscriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn is_squarefree(mut n: u64) -> bool {
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return false;
            }
        }
        d += 1;
    }
    true
}

/// Discriminant of a quadratic field (either sign), excluding 1.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// The Kronecker symbol `(a | n)`, defined for all integers.
pub fn kronecker(a: i64, n: i64) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result: i8 = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let mut n = n as u64;
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
        n >>= twos;
    }
    if n == 1 {
        return result;
    }
    // Jacobi symbol (a | n) for odd n > 1
    let mut a = a.rem_euclid(n as i64) as u64;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Positive fundamental discriminants `D` with `D | n` and `p` not dividing
/// `D`, given the factorization of `|n|`.
pub fn candidates_from_factorization(factors: &[(u64, u32)], p: u64) -> Vec<QuadraticDiscriminant> {
    // prime discriminants available: p* for odd primes, and -4, 8, -8
    let mut odd: Vec<i64> = Vec::new();
    let mut two: Vec<i64> = Vec::new();
    for &(l, e) in factors {
        if l == p {
            continue;
        }
        if l == 2 {
            if e >= 2 {
                two.push(-4);
            }
            if e >= 3 {
                two.extend([8, -8]);
            }
        } else {
            let l = l as i64;
            odd.push(if l % 4 == 1 { l } else { -l });
        }
    }
    let mut out = Vec::new();
    for mask in 0u64..(1 << odd.len()) {
        let base: i128 = odd
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &d)| d as i128)
            .product();
        for t in std::iter::once(1).chain(two.iter().copied()) {
            let d = base * t as i128;
            if d > 1 && d <= u64::MAX as i128 {
                out.push(QuadraticDiscriminant(d as u64));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Positive fundamental discriminants dividing `delta` and prime to `p`,
/// ascending.
pub fn candidate_discriminants(
    delta: &BigInt,
    p: u64,
) -> Result<Vec<QuadraticDiscriminant>, FactorError> {
    Ok(candidates_from_factorization(&arith::factor(delta)?, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(v: &[QuadraticDiscriminant]) -> Vec<u64> {
        v.iter().map(|d| d.get()).collect()
    }

    #[test]
    fn seven_fields_for_table_discriminant() {
        let delta = BigInt::from(2i64.pow(8) * 5i64.pow(3) * 7i64.pow(3));
        let c = candidate_discriminants(&delta, 3).unwrap();
        assert_eq!(ds(&c), vec![5, 8, 28, 40, 56, 140, 280]);
    }

    #[test]
    fn fields_for_p5_discriminant() {
        let delta = BigInt::from(2i64.pow(7) * 9 * 7i64.pow(3));
        let c = candidate_discriminants(&delta, 5).unwrap();
        assert_eq!(ds(&c), vec![8, 12, 21, 24, 28, 56, 168]);
        assert!(candidate_discriminants(&BigInt::from(1), 3).unwrap().is_empty());
    }

    #[test]
    fn p_is_excluded() {
        let delta = BigInt::from(4i64 * 3 * 5);
        assert_eq!(ds(&candidate_discriminants(&delta, 3).unwrap()), vec![5]);
        assert_eq!(ds(&candidate_discriminants(&delta, 5).unwrap()), vec![12]);
    }

    #[test]
    fn kronecker_values() {
        assert_eq!(kronecker(5, 5), 0);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(8, 7), 1);
        assert_eq!(kronecker(8, 3), -1);
        assert_eq!(kronecker(28, 151), -1);
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(12, 2), 0);
    }

    #[test]
    fn fundamentality() {
        let pos: Vec<i64> = (1..=60).filter(|&d| is_fundamental_discriminant(d)).collect();
        assert_eq!(
            pos,
            vec![5, 8, 12, 13, 17, 21, 24, 28, 29, 33, 37, 40, 41, 44, 53, 56, 57, 60]
        );
        assert!(is_fundamental_discriminant(-4));
        assert!(is_fundamental_discriminant(-3));
        assert!(!is_fundamental_discriminant(-1));
    }
}
