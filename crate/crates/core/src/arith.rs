//! Small-integer number theory: prime sieves, modular powers, Legendre
//! symbols and factorization of integers whose prime support is expected to
//! be small.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Bound for the trial-division phase of [`factor`].
pub const TRIAL_DIVISION_BOUND: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorError {
    #[error("cannot factor zero")]
    Zero,
    #[error("unfactored cofactor {0} exceeds 2^64 after trial division")]
    CofactorTooLarge(String),
}

/// All primes `<= bound`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Legendre symbol `(a | q)` for an odd prime `q`.
pub fn legendre(a: i64, q: u64) -> i8 {
    let r = a.rem_euclid(q as i64) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (q - 1) / 2, q) == 1 {
        1
    } else {
        -1
    }
}

/// Pollard-Brent rho; returns a nontrivial factor of composite `n`.
fn rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_u64_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = rho(n);
    factor_u64_into(d, out);
    factor_u64_into(n / d, out);
}

/// Factorization of `|n|` as ascending `(prime, exponent)` pairs.
///
/// Trial division up to [`TRIAL_DIVISION_BOUND`]; a remaining cofactor up to
/// 2^64 is split with Pollard rho, anything larger is an error.
pub fn factor(n: &BigInt) -> Result<Vec<(u64, u32)>, FactorError> {
    if n.is_zero() {
        return Err(FactorError::Zero);
    }
    let mut rest = n.abs();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes_up_to(TRIAL_DIVISION_BOUND) {
        let bp = BigInt::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    if !rest.is_one() {
        let Some(r) = rest.to_u64() else {
            return Err(FactorError::CofactorTooLarge(rest.to_string()));
        };
        let mut primes = Vec::new();
        factor_u64_into(r, &mut primes);
        primes.sort_unstable();
        for p in primes {
            match out.iter_mut().find(|(q, _)| *q == p) {
                Some(entry) => entry.1 += 1,
                None => out.push((p, 1)),
            }
        }
        out.sort_unstable();
    }
    Ok(out)
}

/// `n mod m` as a `u64`, for nonnegative result.
pub fn bigint_mod(n: &BigInt, m: u64) -> u64 {
    n.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_small() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(primes_up_to(100).len(), 25);
        assert!(primes_up_to(1).is_empty());
    }

    #[test]
    fn miller_rabin_agrees_with_sieve() {
        let sieve = primes_up_to(5000);
        for n in 0..5000u64 {
            assert_eq!(is_prime(n), sieve.binary_search(&n).is_ok(), "n = {n}");
        }
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(3215031751));
    }

    #[test]
    fn factor_smooth_and_rough() {
        let n = BigInt::from(2i64.pow(8) * 125 * 343);
        assert_eq!(factor(&n).unwrap(), vec![(2, 8), (5, 3), (7, 3)]);
        let n = -BigInt::from(2u64) * BigInt::from(1000003u64) * BigInt::from(4294967311u64);
        assert_eq!(
            factor(&n).unwrap(),
            vec![(2, 1), (1000003, 1), (4294967311, 1)]
        );
        assert_eq!(factor(&BigInt::from(1)).unwrap(), vec![]);
        assert_eq!(factor(&BigInt::from(0)), Err(FactorError::Zero));
    }

    #[test]
    fn factor_rejects_huge_cofactor() {
        let big = BigInt::from(18446744073709551557u64) * BigInt::from(18446744073709551533u64);
        assert!(matches!(factor(&big), Err(FactorError::CofactorTooLarge(_))));
    }

    #[test]
    fn legendre_small() {
        assert_eq!(legendre(2, 5), -1);
        assert_eq!(legendre(4, 5), 1);
        assert_eq!(legendre(10, 5), 0);
        assert_eq!(legendre(-1, 7), -1);
    }
}
