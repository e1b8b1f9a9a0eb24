//! Jacobian arithmetic in Mumford representation (Cantor's algorithm).
//!
//! Cantor's algorithm needs an imaginary model, one with a single point at
//! infinity which is a Weierstrass point. A reduced curve is moved to such a
//! model over the smallest extension `F_{q^k}` on which it has a rational
//! Weierstrass point `W`:
//!
//! * odd `q`: with `Y = 2y + h` the curve is `Y^2 = F(x)`. If `deg F = 5`
//!   the model is already imaginary. Otherwise `r` is a root of `F` and
//!   `x = r + 1/X`, `Y' = X^3 (2y + h(x))` gives `Y'^2 = X^6 F(r + 1/X)`,
//!   which has degree 5.
//! * `q = 2`: if `deg h <= 2` the substitution `Y' = y + s x^3` with
//!   `s^2 = f_6` clears the sextic term. Otherwise `r` is a root of `h`, and
//!   `x = r + 1/X`, `Y' = X^3 (y + s)` with `s^2 = f(r)` does the same.
//!
//! The class of `E - D_inf` on the original curve, where `E` is effective
//! of degree 2 and `D_inf` the divisor at infinity, becomes `E' - 2 inf'`
//! on the new model: `D_inf` is a fiber of `x` and so equivalent to `2W`.
//! Images of `F_q`-rational divisors are therefore `F_q`-rational classes,
//! which is what [`Jacobian::random_divisor`] samples.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::curve::CurveModP;
use crate::field::poly::{self, Poly};
use crate::field::{ExtField, Fe, MAX_EXT_DEGREE};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JacobianError {
    #[error("model has bad reduction at {0}")]
    BadReduction(u64),
    #[error("divisors belong to different curves")]
    MismatchedCurves,
    #[error("no Weierstrass point over an extension of degree dividing {0}")]
    NoWeierstrassPoint(usize),
    #[error("extension degree {0} is not supported (max 12)")]
    DegreeTooLarge(usize),
}

/// A reduced divisor class `(u, v)`: `u` monic of degree at most 2,
/// `deg v < deg u`, and `u | v^2 + h v - f`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MumfordDivisor {
    u: Poly,
    v: Poly,
    model: u64,
}

impl MumfordDivisor {
    pub fn u(&self) -> &[Fe] {
        &self.u
    }

    pub fn v(&self) -> &[Fe] {
        &self.v
    }

    pub fn is_identity(&self) -> bool {
        self.u.len() == 1
    }
}

/// How points of the original curve map to the imaginary model.
#[derive(Debug, Clone)]
enum Transform {
    /// `X = x`, `Y' = alpha y + beta(x)`.
    Identity,
    /// `X = 1 / (x - r)`, `Y' = X^3 (alpha y + beta(x))`.
    Moebius(Fe),
}

static NEXT_MODEL_ID: AtomicU64 = AtomicU64::new(1);

/// The Jacobian of a reduced curve, realized on an imaginary model over
/// `F_{q^k}`.
#[derive(Debug, Clone)]
pub struct Jacobian {
    field: ExtField,
    base: ExtField,
    curve: CurveModP,
    f: Poly,
    h: Poly,
    transform: Transform,
    alpha: Fe,
    beta: Poly,
    id: u64,
}

/// `X^n a(r + 1/X)` for `deg a <= n`.
fn moebius_lift(k: &ExtField, a: &[Fe], r: Fe, n: usize) -> Poly {
    let lin = vec![k.one(), r]; // 1 + r X
    let mut out = Vec::new();
    let mut pw = poly::one(k);
    for (i, &c) in a.iter().enumerate() {
        let mut term = poly::scale(k, &pw, c);
        term.splice(0..0, std::iter::repeat_n(k.zero(), n - i));
        out = poly::add(k, &out, &term);
        pw = poly::mul(k, &pw, &lin);
    }
    out
}

/// Some root of `g`, all of whose roots lie in `k`.
fn find_root(k: &ExtField, g: &[Fe], rng: &mut ChaCha8Rng) -> Fe {
    let mut g = poly::monic(k, g);
    loop {
        if g.len() == 2 {
            return k.neg(g[0]);
        }
        if k.characteristic() == 2 {
            return (0..k.order())
                .map(|i| k.element(i))
                .find(|&x| k.is_zero(poly::eval(k, &g, x)))
                .expect("split polynomial has a root");
        }
        let a = k.random(rng);
        let shifted = vec![a, k.one()];
        let t = poly::powmod(k, &shifted, (k.order() - 1) / 2, &g);
        let d = poly::xgcd(k, &g, &poly::sub(k, &t, &poly::one(k))).0;
        if d.len() > 1 && d.len() < g.len() {
            g = if 2 * d.len() <= g.len() + 1 { d } else { poly::divrem(k, &g, &d).0 };
            g = poly::monic(k, &g);
        }
    }
}

/// `gcd(x^(|k|) - x, g)`: the product of the distinct linear factors of `g`
/// over `k`.
fn split_part(k: &ExtField, g: &[Fe]) -> Poly {
    let x = vec![k.zero(), k.one()];
    let t = poly::powmod(k, &x, k.order(), g);
    poly::xgcd(k, g, &poly::sub(k, &t, &x)).0
}

fn lift(k: &ExtField, c: &[u64]) -> Poly {
    poly::trim(k, c.iter().map(|&v| k.from_u64(v)).collect())
}

impl Jacobian {
    /// Builds the Jacobian over the smallest extension with a rational
    /// Weierstrass point.
    pub fn new(curve_q: &CurveModP) -> Result<Jacobian, JacobianError> {
        for k in 1..=6 {
            if let Some(j) = Self::try_build(curve_q, k)? {
                return Ok(j);
            }
        }
        Err(JacobianError::NoWeierstrassPoint(6))
    }

    /// Builds the Jacobian over `F_{q^m}`, which must contain a Weierstrass
    /// point.
    pub fn over_extension(curve_q: &CurveModP, m: usize) -> Result<Jacobian, JacobianError> {
        if m == 0 || m > MAX_EXT_DEGREE {
            return Err(JacobianError::DegreeTooLarge(m));
        }
        Self::try_build(curve_q, m)?.ok_or(JacobianError::NoWeierstrassPoint(m))
    }

    fn try_build(curve_q: &CurveModP, m: usize) -> Result<Option<Jacobian>, JacobianError> {
        if !curve_q.good {
            return Err(JacobianError::BadReduction(curve_q.q));
        }
        let q = curve_q.q;
        let k = ExtField::new(q, m);
        let mut rng = ChaCha8Rng::seed_from_u64(q ^ (m as u64) << 32);
        let f = lift(&k, &curve_q.f);
        let h = lift(&k, &curve_q.h);
        let (transform, alpha, beta, new_f, new_h);
        if q != 2 {
            let form = lift(&k, &curve_q.completed_square());
            alpha = k.from_u64(2);
            beta = h.clone();
            new_h = Vec::new();
            if form.len() == 6 {
                transform = Transform::Identity;
                new_f = form;
            } else {
                let roots = split_part(&k, &form);
                if roots.len() < 2 {
                    return Ok(None);
                }
                let r = find_root(&k, &roots, &mut rng);
                transform = Transform::Moebius(r);
                new_f = moebius_lift(&k, &form, r, 6);
            }
        } else {
            alpha = k.one();
            if h.len() <= 3 {
                let s = k.sqrt(f.get(6).copied().unwrap_or_default()).expect("char 2");
                transform = Transform::Identity;
                beta = poly::trim(&k, vec![k.zero(), k.zero(), k.zero(), s]);
                let sx3h = poly::mul(&k, &beta, &h);
                new_f = poly::add(&k, &poly::add(&k, &f, &poly::mul(&k, &beta, &beta)), &sx3h);
                new_h = h.clone();
            } else {
                let roots = split_part(&k, &h);
                if roots.len() < 2 {
                    return Ok(None);
                }
                let r = find_root(&k, &roots, &mut rng);
                let s = k.sqrt(poly::eval(&k, &f, r)).expect("char 2");
                transform = Transform::Moebius(r);
                beta = poly::constant(&k, s);
                new_h = moebius_lift(&k, &h, r, 3);
                let x3 = vec![k.zero(), k.zero(), k.zero(), k.one()];
                let sx3 = poly::scale(&k, &x3, s);
                new_f = poly::add(
                    &k,
                    &poly::add(&k, &moebius_lift(&k, &f, r, 6), &poly::mul(&k, &sx3, &sx3)),
                    &poly::mul(&k, &sx3, &new_h),
                );
            }
        }
        debug_assert_eq!(new_f.len(), 6, "imaginary model has a quintic");
        Ok(Some(Jacobian {
            base: ExtField::prime(q),
            field: k,
            curve: curve_q.clone(),
            f: new_f,
            h: new_h,
            transform,
            alpha,
            beta,
            id: NEXT_MODEL_ID.fetch_add(1, Ordering::Relaxed),
        }))
    }

    pub fn field(&self) -> &ExtField {
        &self.field
    }

    /// `f` of the imaginary model `Y^2 + h Y = f`.
    pub fn model_f(&self) -> &[Fe] {
        &self.f
    }

    pub fn model_h(&self) -> &[Fe] {
        &self.h
    }

    pub fn identity(&self) -> MumfordDivisor {
        MumfordDivisor { u: poly::one(&self.field), v: Vec::new(), model: self.id }
    }

    fn check(&self, d: &MumfordDivisor) -> Result<(), JacobianError> {
        if d.model == self.id {
            Ok(())
        } else {
            Err(JacobianError::MismatchedCurves)
        }
    }

    /// Whether `(u, v)` is a valid reduced divisor on this model.
    pub fn is_valid(&self, d: &MumfordDivisor) -> bool {
        let k = &self.field;
        let u = &d.u;
        if d.model != self.id || u.is_empty() || u.len() > 3 || d.v.len() >= u.len() {
            return false;
        }
        if *u.last().unwrap() != k.one() {
            return false;
        }
        poly::rem(k, &self.membership(&d.v), u).is_empty()
    }

    /// `v^2 + h v - f`.
    fn membership(&self, v: &[Fe]) -> Poly {
        let k = &self.field;
        let vv = poly::add(k, &poly::mul(k, v, v), &poly::mul(k, &self.h, v));
        poly::sub(k, &vv, &self.f)
    }

    /// Builds a divisor from a monic `u` and any `v` with `u | v^2 + hv - f`.
    pub fn divisor(&self, u: Poly, v: Poly) -> Option<MumfordDivisor> {
        let k = &self.field;
        let u = poly::monic(k, &u);
        if u.is_empty() {
            return None;
        }
        let v = poly::rem(k, &v, &u);
        let d = MumfordDivisor { u, v, model: self.id };
        self.is_valid(&d).then_some(d)
    }

    pub fn neg(&self, d: &MumfordDivisor) -> Result<MumfordDivisor, JacobianError> {
        self.check(d)?;
        let k = &self.field;
        let v = poly::rem(k, &poly::neg(k, &poly::add(k, &d.v, &self.h)), &d.u);
        Ok(MumfordDivisor { u: d.u.clone(), v, model: self.id })
    }

    pub fn add(&self, a: &MumfordDivisor, b: &MumfordDivisor) -> Result<MumfordDivisor, JacobianError> {
        self.check(a)?;
        self.check(b)?;
        let k = &self.field;
        let (d1, e1, e2) = poly::xgcd(k, &a.u, &b.u);
        let sum_v = poly::add(k, &poly::add(k, &a.v, &b.v), &self.h);
        let (d, c1, c2) = poly::xgcd(k, &d1, &sum_v);
        let (s1, s2, s3) = (poly::mul(k, &c1, &e1), poly::mul(k, &c1, &e2), c2);
        let dd = poly::mul(k, &d, &d);
        let mut u = poly::divrem(k, &poly::mul(k, &a.u, &b.u), &dd).0;
        let t1 = poly::mul(k, &poly::mul(k, &s1, &a.u), &b.v);
        let t2 = poly::mul(k, &poly::mul(k, &s2, &b.u), &a.v);
        let t3 = poly::mul(k, &s3, &poly::add(k, &poly::mul(k, &a.v, &b.v), &self.f));
        let num = poly::add(k, &poly::add(k, &t1, &t2), &t3);
        let mut v = poly::rem(k, &poly::divrem(k, &num, &d).0, &u);
        while u.len() > 3 {
            let top = poly::sub(k, &self.f, &poly::add(k, &poly::mul(k, &v, &self.h), &poly::mul(k, &v, &v)));
            u = poly::divrem(k, &top, &u).0;
            v = poly::rem(k, &poly::neg(k, &poly::add(k, &self.h, &v)), &u);
        }
        let u = poly::monic(k, &u);
        let v = poly::rem(k, &v, &u);
        Ok(MumfordDivisor { u, v, model: self.id })
    }

    pub fn double(&self, a: &MumfordDivisor) -> Result<MumfordDivisor, JacobianError> {
        self.add(a, a)
    }

    /// `[n] d` by double-and-add.
    pub fn scalar_mul(&self, d: &MumfordDivisor, n: i128) -> Result<MumfordDivisor, JacobianError> {
        self.check(d)?;
        let base = if n < 0 { self.neg(d)? } else { d.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.identity();
        let mut pw = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add(&acc, &pw)?;
            }
            e >>= 1;
            if e > 0 {
                pw = self.double(&pw)?;
            }
        }
        Ok(acc)
    }

    /// `[P - inf']` for an affine point of the imaginary model.
    fn point_divisor(&self, x: Fe, y: Fe) -> MumfordDivisor {
        let k = &self.field;
        MumfordDivisor {
            u: vec![k.neg(x), k.one()],
            v: poly::constant(k, y),
            model: self.id,
        }
    }

    /// The image of an affine point `(x, y)` of the original curve, or
    /// `None` when it is the chosen Weierstrass point.
    fn map_affine(&self, x: Fe, y: Fe) -> Option<(Fe, Fe)> {
        let k = &self.field;
        let ay_b = k.add(k.mul(self.alpha, y), poly::eval(k, &self.beta, x));
        match self.transform {
            Transform::Identity => Some((x, ay_b)),
            Transform::Moebius(r) => {
                let xx = k.inv(k.sub(x, r))?;
                Some((xx, k.mul(k.pow(xx, 3), ay_b)))
            }
        }
    }

    /// The image of the point at infinity with `t^2 + h_3 t = f_6`.
    fn map_infinite(&self, t: Fe) -> Option<(Fe, Fe)> {
        let k = &self.field;
        match self.transform {
            Transform::Identity => None,
            Transform::Moebius(_) => {
                let b3 = self.beta.get(3).copied().unwrap_or_default();
                Some((k.zero(), k.add(k.mul(self.alpha, t), b3)))
            }
        }
    }

    fn divisor_of_point(&self, p: Option<(Fe, Fe)>) -> MumfordDivisor {
        match p {
            Some((x, y)) => self.point_divisor(x, y),
            None => self.identity(),
        }
    }

    /// The points of the original curve over the base field with `x` the
    /// `i`-th field element, or at infinity when `i = q`, mapped into the
    /// model.
    fn points_at(&self, i: u128) -> Vec<Option<(Fe, Fe)>> {
        let b = &self.base;
        if i == b.order() {
            let h3 = b.from_u64(self.curve.h[3]);
            let f6 = b.from_u64(self.curve.f[6]);
            return b.solve_quadratic(h3, f6).into_iter().map(|t| self.map_infinite(self.embed(t))).collect();
        }
        let x = b.element(i);
        let fx = poly::eval(b, &lift(b, &self.curve.f), x);
        let hx = poly::eval(b, &lift(b, &self.curve.h), x);
        b.solve_quadratic(hx, fx)
            .into_iter()
            .map(|y| self.map_affine(self.embed(x), self.embed(y)))
            .collect()
    }

    /// A random point of the original curve over the base field, as
    /// `Some((x, y))` or `None` for the chosen Weierstrass point; `None`
    /// overall if the curve has no rational points.
    fn random_point<R: Rng>(&self, rng: &mut R) -> Option<Option<(Fe, Fe)>> {
        let q = self.base.order();
        for _ in 0..4 * (q + 1) {
            let pts = self.points_at(rng.gen_range(0..=q));
            if !pts.is_empty() {
                return Some(pts[rng.gen_range(0..pts.len())]);
            }
        }
        let all: Vec<_> = (0..=q).flat_map(|i| self.points_at(i)).collect();
        (!all.is_empty()).then(|| all[rng.gen_range(0..all.len())])
    }

    fn embed(&self, a: Fe) -> Fe {
        self.field.from_u64(self.base.as_prime(a).expect("prime field element"))
    }

    /// The degree-2 divisor `(x^2 + c1 x + c0, v)` of the original curve
    /// over the base field, mapped into the model; `None` unless `u` is
    /// irreducible with a point above its roots.
    fn quadratic_divisor<R: Rng>(&self, c0: u64, c1: u64, rng: &mut R) -> Option<MumfordDivisor> {
        let b2 = ExtField::new(self.curve.q, 2);
        let u_base = [c0, c1, 1];
        // an irreducible u has a root in F_{q^2} \ F_q
        let u2 = lift(&b2, &u_base);
        let alpha = (0..b2.order())
            .map(|i| b2.element(i))
            .find(|&a| b2.as_prime(a).is_none() && b2.is_zero(poly::eval(&b2, &u2, a)))?;
        let fa = poly::eval(&b2, &lift(&b2, &self.curve.f), alpha);
        let ha = poly::eval(&b2, &lift(&b2, &self.curve.h), alpha);
        let ys = b2.solve_quadratic(ha, fa);
        if ys.is_empty() {
            return None;
        }
        let ya = ys[rng.gen_range(0..ys.len())];
        let (abar, ybar) = (b2.frobenius(alpha), b2.frobenius(ya));
        // v through (alpha, ya) and (abar, ybar)
        let slope = b2.div(b2.sub(ya, ybar), b2.sub(alpha, abar))?;
        let v0 = b2.sub(ya, b2.mul(slope, alpha));
        let v_base = [b2.as_prime(v0)?, b2.as_prime(slope)?];

        let k = &self.field;
        let u = lift(k, &u_base);
        let v = lift(k, &v_base);
        let av_b = poly::add(k, &poly::scale(k, &v, self.alpha), &self.beta);
        let (u_new, v_new) = match self.transform {
            Transform::Identity => (u, av_b),
            Transform::Moebius(r) => {
                if k.is_zero(poly::eval(k, &u, r)) {
                    return None;
                }
                (moebius_lift(k, &u, r, 2), moebius_lift(k, &av_b, r, 3))
            }
        };
        self.divisor(u_new, v_new)
    }

    /// A random `F_q`-rational divisor class, reproducible from `seed`.
    pub fn random_divisor(&self, seed: u64) -> MumfordDivisor {
        self.random_divisor_with(&mut ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn random_divisor_with<R: Rng>(&self, rng: &mut R) -> MumfordDivisor {
        let q = self.curve.q;
        let from_points = |rng: &mut R, p1| {
            let p2 = self.random_point(rng).expect("the curve has a rational point");
            self.add(&self.divisor_of_point(p1), &self.divisor_of_point(p2)).expect("same model")
        };
        for _ in 0..64 {
            if rng.gen_bool(0.5) {
                if let Some(d) = self.quadratic_divisor(rng.gen_range(0..q), rng.gen_range(0..q), rng) {
                    return d;
                }
            } else if let Some(p1) = self.random_point(rng) {
                return from_points(rng, p1);
            }
        }
        // Every rational class is a pair of rational points or a conjugate
        // pair, so with neither present the group is trivial.
        if let Some(p1) = self.random_point(rng) {
            return from_points(rng, p1);
        }
        (0..q * q)
            .find_map(|i| self.quadratic_divisor(i % q, i / q, rng))
            .unwrap_or_else(|| self.identity())
    }

    /// A random class over the working field `F_{q^k}` built from two
    /// random points of the original curve over that field.
    pub fn random_extension_divisor<R: Rng>(&self, rng: &mut R) -> MumfordDivisor {
        let k = &self.field;
        let f = lift(k, &self.curve.f);
        let h = lift(k, &self.curve.h);
        let mut point = || loop {
            let x = k.random(rng);
            let ys = k.solve_quadratic(poly::eval(k, &h, x), poly::eval(k, &f, x));
            if let Some(&y) = ys.first() {
                return self.divisor_of_point(self.map_affine(x, y));
            }
        };
        let (a, b) = (point(), point());
        self.add(&a, &b).expect("same model")
    }

    /// Every reduced divisor over the working field, for small fields only.
    pub fn enumerate(&self) -> Vec<MumfordDivisor> {
        let k = &self.field;
        let elems: Vec<Fe> = (0..k.order()).map(|i| k.element(i)).collect();
        let mut out = vec![self.identity()];
        for &a in &elems {
            for &b in &elems {
                if let Some(d) = self.divisor(vec![k.neg(a), k.one()], poly::constant(k, b)) {
                    out.push(d);
                }
            }
        }
        for &c0 in &elems {
            for &c1 in &elems {
                for &v0 in &elems {
                    for &v1 in &elems {
                        let d = MumfordDivisor {
                            u: vec![c0, c1, k.one()],
                            v: poly::trim(k, vec![v0, v1]),
                            model: self.id,
                        };
                        if self.is_valid(&d) {
                            out.push(d);
                        }
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::lpolynomial;
    use crate::curve::GenusTwoCurve;
    use std::collections::HashSet;

    #[test]
    fn group_of_small_curve_mod_7() {
        let c = GenusTwoCurve::parse("y^2 = x^5 + 3x^3 + x + 1").unwrap();
        let jac = Jacobian::new(&c.reduce_mod(7)).unwrap();
        let all = jac.enumerate();
        let order = lpolynomial(&c, 7).unwrap().jacobian_order();
        assert_eq!(all.len() as i128, order);
        let set: HashSet<_> = all.iter().cloned().collect();
        for a in all.iter().step_by(3) {
            for b in all.iter().step_by(5) {
                assert!(set.contains(&jac.add(a, b).unwrap()));
            }
        }
    }

    #[test]
    fn group_laws() {
        let c = GenusTwoCurve::parse("y^2 = x^6 - 10x^4 + 2x^3 + 31x^2 - 13x - 18").unwrap();
        let jac = Jacobian::new(&c.reduce_mod(11)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let a = jac.random_divisor_with(&mut rng);
            let b = jac.random_divisor_with(&mut rng);
            assert!(jac.is_valid(&a));
            assert_eq!(jac.add(&a, &jac.identity()).unwrap(), a);
            assert!(jac.add(&a, &jac.neg(&a).unwrap()).unwrap().is_identity());
            assert_eq!(jac.add(&a, &b).unwrap(), jac.add(&b, &a).unwrap());
            assert_eq!(jac.scalar_mul(&a, -1).unwrap(), jac.neg(&a).unwrap());
            assert!(jac.scalar_mul(&a, 0).unwrap().is_identity());
        }
    }

    #[test]
    fn curves_without_rational_points() {
        // small models over F_3 with C(F_3) empty
        let mut found = 0;
        for n in 0..3u32.pow(6) {
            let mut f = [0i64; 7];
            f[6] = 2;
            for (i, c) in f.iter_mut().take(6).enumerate() {
                *c = (n / 3u32.pow(i as u32) % 3) as i64;
            }
            let Ok(c) = GenusTwoCurve::new(f, [0; 4], None) else { continue };
            let Ok(rec) = lpolynomial(&c, 3) else { continue };
            if rec.n1 != 0 {
                continue;
            }
            found += 1;
            let jac = Jacobian::new(&c.reduce_mod(3)).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..5 {
                let d = jac.random_divisor_with(&mut rng);
                assert!(jac.is_valid(&d));
                assert!(jac.scalar_mul(&d, rec.jacobian_order()).unwrap().is_identity());
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn mismatched_models_are_rejected() {
        let c = GenusTwoCurve::parse("y^2 = x^5 + 3x^3 + x + 1").unwrap();
        let j1 = Jacobian::new(&c.reduce_mod(7)).unwrap();
        let j2 = Jacobian::new(&c.reduce_mod(7)).unwrap();
        let d = j1.random_divisor(3);
        assert_eq!(j2.add(&d, &d), Err(JacobianError::MismatchedCurves));
        assert_eq!(j1.random_divisor(3), d);
    }
}
