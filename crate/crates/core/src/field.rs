//! Finite fields `F_{p^k}` for primes `p < 2^16` and `k <= 12`, plus dense
//! polynomial arithmetic over them.
//!
//! `F_{p^k}` is `F_p[t] / (m(t))` with a deterministic modulus: for `k = 2`
//! and odd `p` it is `t^2 - n` with `n` the least quadratic non-residue,
//! otherwise the lexicographically least monic irreducible of degree `k`
//! (coefficients compared from the constant term upward, read as base-`p`
//! digits).

use rand::Rng;

use crate::arith;

pub const MAX_EXT_DEGREE: usize = 12;

/// An element of some `F_{p^k}`, as coefficients in the power basis.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Fe([u32; MAX_EXT_DEGREE]);

impl Fe {
    pub fn coeffs(&self) -> &[u32; MAX_EXT_DEGREE] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtField {
    p: u64,
    k: usize,
    /// Monic modulus, lowest degree first, length `k + 1`.
    modulus: Vec<u64>,
    order: u128,
}

// ---- polynomials over F_p with u64 coefficients (used for modulus search) ----

fn fp_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let dm = m.len() - 1;
    let inv_lead = arith::pow_mod(m[dm], p - 2, p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * inv_lead % p;
        for i in 0..=dm {
            let idx = top - dm + i;
            r[idx] = (r[idx] + p - c * m[i] % p) % p;
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_rem(&out, m, p)
}

fn fp_powmod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = fp_rem(&[1], m, p);
    let mut b = fp_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_mulmod(&acc, &b, m, p);
        }
        b = fp_mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    fp_trim(&mut a);
    fp_trim(&mut b);
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin's irreducibility test for a monic `m` of degree `k` over `F_p`.
pub fn is_irreducible_fp(m: &[u64], p: u64) -> bool {
    let k = m.len() - 1;
    if k == 0 {
        return false;
    }
    let x = vec![0, 1];
    let pk = (p as u128).pow(k as u32);
    let mut t = fp_powmod(&x, pk, m, p);
    t.resize(2.max(t.len()), 0);
    t[1] = (t[1] + p - 1) % p;
    if !fp_rem(&t, m, p).is_empty() {
        return false;
    }
    let mut rest = k;
    let mut prime_divs = Vec::new();
    let mut d = 2;
    while rest > 1 {
        if rest % d == 0 {
            prime_divs.push(d);
            while rest % d == 0 {
                rest /= d;
            }
        }
        d += 1;
    }
    for r in prime_divs {
        let e = (p as u128).pow((k / r) as u32);
        let mut h = fp_powmod(&x, e, m, p);
        h.resize(2.max(h.len()), 0);
        h[1] = (h[1] + p - 1) % p;
        let h = fp_rem(&h, m, p);
        if fp_gcd(m, &h, p).len() != 1 {
            return false;
        }
    }
    true
}

fn least_nonresidue(p: u64) -> u64 {
    (2..p).find(|&n| arith::legendre(n as i64, p) == -1).expect("odd prime")
}

fn default_modulus(p: u64, k: usize) -> Vec<u64> {
    if k == 1 {
        return vec![0, 1];
    }
    if k == 2 && p != 2 {
        return vec![p - least_nonresidue(p), 0, 1];
    }
    let total = (p as u128).pow(k as u32);
    for idx in 0..total {
        let mut m = Vec::with_capacity(k + 1);
        let mut v = idx;
        for _ in 0..k {
            m.push((v % p as u128) as u64);
            v /= p as u128;
        }
        m.push(1);
        if m[0] != 0 && is_irreducible_fp(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl ExtField {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> ExtField {
        ExtField::new(p, 1)
    }

    /// `F_{p^k}` with the deterministic modulus described at module level.
    pub fn new(p: u64, k: usize) -> ExtField {
        assert!(arith::is_prime(p) && p < (1 << 16), "characteristic must be a prime < 2^16");
        assert!((1..=MAX_EXT_DEGREE).contains(&k), "extension degree out of range");
        let modulus = default_modulus(p, k);
        ExtField {
            p,
            k,
            modulus,
            order: (p as u128).pow(k as u32),
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> Fe {
        Fe::default()
    }

    pub fn one(&self) -> Fe {
        self.from_u64(1)
    }

    pub fn from_u64(&self, v: u64) -> Fe {
        let mut c = [0u32; MAX_EXT_DEGREE];
        c[0] = (v % self.p) as u32;
        Fe(c)
    }

    pub fn from_i64(&self, v: i64) -> Fe {
        self.from_u64(v.rem_euclid(self.p as i64) as u64)
    }

    /// The generator `t` of the power basis (equals `from_u64(0)` when `k = 1`
    /// is meaningless, so callers must have `k >= 2`).
    pub fn generator(&self) -> Fe {
        assert!(self.k >= 2);
        let mut c = [0u32; MAX_EXT_DEGREE];
        c[1] = 1;
        Fe(c)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Fe {
        assert!(coeffs.len() <= self.k);
        let mut c = [0u32; MAX_EXT_DEGREE];
        for (slot, &v) in c.iter_mut().zip(coeffs) {
            *slot = (v % self.p) as u32;
        }
        Fe(c)
    }

    /// Element number `idx` in `0..order`, reading base-`p` digits as
    /// coefficients.
    pub fn element(&self, mut idx: u128) -> Fe {
        let mut c = [0u32; MAX_EXT_DEGREE];
        for slot in c.iter_mut().take(self.k) {
            *slot = (idx % self.p as u128) as u32;
            idx /= self.p as u128;
        }
        Fe(c)
    }

    /// Inverse of [`ExtField::element`].
    pub fn index_of(&self, a: Fe) -> u128 {
        a.0[..self.k]
            .iter()
            .rev()
            .fold(0u128, |acc, &c| acc * self.p as u128 + c as u128)
    }

    /// Whether `a` lies in the prime subfield; returns its value if so.
    pub fn as_prime(&self, a: Fe) -> Option<u64> {
        a.0[1..].iter().all(|&c| c == 0).then_some(a.0[0] as u64)
    }

    pub fn is_zero(&self, a: Fe) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let p = self.p as u32;
        let mut c = [0u32; MAX_EXT_DEGREE];
        for i in 0..self.k {
            let s = a.0[i] + b.0[i];
            c[i] = if s >= p { s - p } else { s };
        }
        Fe(c)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        let p = self.p as u32;
        let mut c = [0u32; MAX_EXT_DEGREE];
        for i in 0..self.k {
            c[i] = if a.0[i] == 0 { 0 } else { p - a.0[i] };
        }
        Fe(c)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        let p = self.p;
        if self.k == 1 {
            let mut c = [0u32; MAX_EXT_DEGREE];
            c[0] = (a.0[0] as u64 * b.0[0] as u64 % p) as u32;
            return Fe(c);
        }
        let k = self.k;
        let mut prod = [0u64; 2 * MAX_EXT_DEGREE];
        for i in 0..k {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] += a.0[i] as u64 * b.0[j] as u64;
            }
        }
        for v in prod.iter_mut() {
            *v %= p;
        }
        for top in (k..2 * k - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for i in 0..k {
                let idx = top - k + i;
                prod[idx] = (prod[idx] + (p - c) * self.modulus[i]) % p;
            }
        }
        let mut out = [0u32; MAX_EXT_DEGREE];
        for i in 0..k {
            out[i] = prod[i] as u32;
        }
        Fe(out)
    }

    pub fn square(&self, a: Fe) -> Fe {
        self.mul(a, a)
    }

    pub fn pow(&self, a: Fe, mut e: u128) -> Fe {
        let mut acc = self.one();
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if self.is_zero(a) {
            return None;
        }
        Some(self.pow(a, self.order - 2))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Option<Fe> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.p as u128)
    }

    /// Quadratic character: 0, 1 or -1 (odd characteristic only).
    pub fn quadratic_character(&self, a: Fe) -> i8 {
        assert!(self.p != 2);
        if self.is_zero(a) {
            return 0;
        }
        if self.pow(a, (self.order - 1) / 2) == self.one() {
            1
        } else {
            -1
        }
    }

    /// A square root of `a` if one exists (Tonelli-Shanks in odd
    /// characteristic, `a^(q/2)` in characteristic 2).
    pub fn sqrt(&self, a: Fe) -> Option<Fe> {
        if self.is_zero(a) {
            return Some(a);
        }
        if self.p == 2 {
            return Some(self.pow(a, self.order / 2));
        }
        if self.quadratic_character(a) != 1 {
            return None;
        }
        let q = self.order;
        let mut s = 0;
        let mut t = q - 1;
        while t % 2 == 0 {
            t /= 2;
            s += 1;
        }
        let z = (1..q)
            .map(|i| self.element(i))
            .find(|&z| self.quadratic_character(z) == -1)
            .expect("non-residue exists");
        let mut m = s;
        let mut c = self.pow(z, t);
        let mut x = self.pow(a, (t + 1) / 2);
        let mut b = self.pow(a, t);
        let one = self.one();
        while b != one {
            let mut i = 0;
            let mut bb = b;
            while bb != one {
                bb = self.square(bb);
                i += 1;
            }
            let mut g = c;
            for _ in 0..(m - i - 1) {
                g = self.square(g);
            }
            x = self.mul(x, g);
            c = self.square(g);
            b = self.mul(b, c);
            m = i;
        }
        Some(x)
    }

    /// All `y` with `y^2 + b y = c`.
    pub fn solve_quadratic(&self, b: Fe, c: Fe) -> Vec<Fe> {
        if self.p == 2 {
            if self.is_zero(b) {
                return vec![self.sqrt(c).expect("char 2 squares are surjective")];
            }
            // y = b z with z^2 + z = c / b^2; solved by enumeration since
            // characteristic-2 fields used here have at most 2^12 elements.
            let b2 = self.square(b);
            let rhs = self.div(c, b2).expect("b nonzero");
            return (0..self.order)
                .map(|i| self.element(i))
                .filter(|&z| self.add(self.square(z), z) == rhs)
                .map(|z| self.mul(b, z))
                .collect();
        }
        // y = (-b +- sqrt(b^2 + 4c)) / 2
        let disc = self.add(self.square(b), self.mul(self.from_u64(4), c));
        let Some(r) = self.sqrt(disc) else {
            return Vec::new();
        };
        let half = self.inv(self.from_u64(2)).expect("odd characteristic");
        let y1 = self.mul(self.sub(r, b), half);
        if self.is_zero(r) {
            return vec![y1];
        }
        let y2 = self.mul(self.sub(self.neg(r), b), half);
        vec![y1, y2]
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> Fe {
        let mut c = [0u32; MAX_EXT_DEGREE];
        for slot in c.iter_mut().take(self.k) {
            *slot = rng.gen_range(0..self.p as u32);
        }
        Fe(c)
    }
}

/// Dense polynomials over an [`ExtField`], lowest degree first, with no
/// trailing zeros (the zero polynomial is empty).
pub mod poly {
    use super::{ExtField, Fe};

    pub type Poly = Vec<Fe>;

    pub fn trim(k: &ExtField, mut a: Poly) -> Poly {
        while a.last().is_some_and(|&c| k.is_zero(c)) {
            a.pop();
        }
        a
    }

    pub fn degree(a: &[Fe]) -> isize {
        a.len() as isize - 1
    }

    pub fn constant(k: &ExtField, c: Fe) -> Poly {
        trim(k, vec![c])
    }

    pub fn one(k: &ExtField) -> Poly {
        vec![k.one()]
    }

    pub fn add(k: &ExtField, a: &[Fe], b: &[Fe]) -> Poly {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or_default();
                let y = b.get(i).copied().unwrap_or_default();
                k.add(x, y)
            })
            .collect();
        trim(k, out)
    }

    pub fn neg(k: &ExtField, a: &[Fe]) -> Poly {
        a.iter().map(|&c| k.neg(c)).collect()
    }

    pub fn sub(k: &ExtField, a: &[Fe], b: &[Fe]) -> Poly {
        add(k, a, &neg(k, b))
    }

    pub fn scale(k: &ExtField, a: &[Fe], s: Fe) -> Poly {
        trim(k, a.iter().map(|&c| k.mul(c, s)).collect())
    }

    pub fn mul(k: &ExtField, a: &[Fe], b: &[Fe]) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![k.zero(); a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if k.is_zero(x) {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = k.add(out[i + j], k.mul(x, y));
            }
        }
        trim(k, out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(k: &ExtField, a: &[Fe], b: &[Fe]) -> (Poly, Poly) {
        assert!(!b.is_empty(), "polynomial division by zero");
        let mut r = trim(k, a.to_vec());
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let db = b.len() - 1;
        let inv_lead = k.inv(b[db]).expect("nonzero leading coefficient");
        let mut q = vec![k.zero(); r.len() - db];
        while r.len() > db && !r.is_empty() {
            let top = r.len() - 1;
            let c = k.mul(r[top], inv_lead);
            q[top - db] = c;
            for i in 0..=db {
                let idx = top - db + i;
                r[idx] = k.sub(r[idx], k.mul(c, b[i]));
            }
            r = trim(k, r);
        }
        (trim(k, q), r)
    }

    pub fn rem(k: &ExtField, a: &[Fe], b: &[Fe]) -> Poly {
        divrem(k, a, b).1
    }

    pub fn monic(k: &ExtField, a: &[Fe]) -> Poly {
        match a.last() {
            None => Vec::new(),
            Some(&lead) => scale(k, a, k.inv(lead).expect("nonzero")),
        }
    }

    /// Extended gcd: returns monic `d` and `s, t` with `s a + t b = d`.
    pub fn xgcd(k: &ExtField, a: &[Fe], b: &[Fe]) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (trim(k, a.to_vec()), trim(k, b.to_vec()));
        let (mut s0, mut s1) = (one(k), Vec::new());
        let (mut t0, mut t1) = (Vec::new(), one(k));
        while !r1.is_empty() {
            let (q, r) = divrem(k, &r0, &r1);
            let s2 = sub(k, &s0, &mul(k, &q, &s1));
            let t2 = sub(k, &t0, &mul(k, &q, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        match r0.last() {
            None => (Vec::new(), s0, t0),
            Some(&lead) => {
                let li = k.inv(lead).expect("nonzero");
                (scale(k, &r0, li), scale(k, &s0, li), scale(k, &t0, li))
            }
        }
    }

    pub fn eval(k: &ExtField, a: &[Fe], x: Fe) -> Fe {
        a.iter().rev().fold(k.zero(), |acc, &c| k.add(k.mul(acc, x), c))
    }

    pub fn powmod(k: &ExtField, base: &[Fe], mut e: u128, m: &[Fe]) -> Poly {
        let mut acc = rem(k, &one(k), m);
        let mut b = rem(k, base, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(k, &mul(k, &acc, &b), m);
            }
            b = rem(k, &mul(k, &b, &b), m);
            e >>= 1;
        }
        acc
    }

    /// Composition `a(b(x))`.
    pub fn compose(k: &ExtField, a: &[Fe], b: &[Fe]) -> Poly {
        a.iter()
            .rev()
            .fold(Vec::new(), |acc, &c| add(k, &mul(k, &acc, b), &constant(k, c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn quadratic_modulus_uses_least_nonresidue() {
        assert_eq!(ExtField::new(7, 2).modulus(), &[4, 0, 1]);
        assert_eq!(ExtField::new(5, 2).modulus(), &[3, 0, 1]);
        assert_eq!(ExtField::new(2, 2).modulus(), &[1, 1, 1]);
        assert_eq!(ExtField::new(2, 3).modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn field_axioms_small() {
        for (p, k) in [(2, 1), (2, 4), (3, 3), (5, 2), (7, 1), (3, 6)] {
            let f = ExtField::new(p, k);
            let mut rng = ChaCha8Rng::seed_from_u64(p * 100 + k as u64);
            for _ in 0..200 {
                let (a, b, c) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                if !f.is_zero(a) {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
                assert_eq!(f.pow(a, f.order()), a);
            }
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic_of_right_order() {
        let f = ExtField::new(3, 4);
        let count = (1..f.order())
            .filter(|&i| f.pow(f.element(i), (f.order() - 1) / 2) == f.one())
            .count();
        assert_eq!(count as u128, (f.order() - 1) / 2);
    }

    #[test]
    fn sqrt_and_quadratic_solver() {
        for (p, k) in [(3, 1), (11, 2), (13, 3), (2, 3), (2, 1)] {
            let f = ExtField::new(p, k);
            for i in 0..f.order().min(400) {
                let a = f.element(i);
                if let Some(r) = f.sqrt(a) {
                    assert_eq!(f.square(r), a);
                }
                let b = f.element((i * 7 + 1) % f.order());
                for y in f.solve_quadratic(b, a) {
                    assert_eq!(f.add(f.square(y), f.mul(b, y)), a);
                }
            }
        }
    }

    #[test]
    fn xgcd_identity() {
        let f = ExtField::new(5, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let a: Vec<Fe> = (0..5).map(|_| f.random(&mut rng)).collect();
            let b: Vec<Fe> = (0..3).map(|_| f.random(&mut rng)).collect();
            let (d, s, t) = poly::xgcd(&f, &a, &b);
            let lhs = poly::add(&f, &poly::mul(&f, &s, &a), &poly::mul(&f, &t, &b));
            assert_eq!(lhs, d);
            if !d.is_empty() {
                assert!(poly::rem(&f, &a, &d).is_empty());
                assert!(poly::rem(&f, &b, &d).is_empty());
            }
        }
    }

    #[test]
    fn irreducibility_counts() {
        // monic irreducibles of degree 3 over F_3: (27 - 3) / 3 = 8
        let count = (0..27u64)
            .filter(|&i| is_irreducible_fp(&[i % 3, (i / 3) % 3, i / 9, 1], 3))
            .count();
        assert_eq!(count, 8);
    }
}
