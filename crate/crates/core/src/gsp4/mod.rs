//! Symplectic similitude groups `GSp4(F_p)` for `p = 3, 5`.
//!
//! Vectors use the basis `(e1, e2, f1, f2)` with the alternating form
//! `<x, y> = x0 y2 + x1 y3 - x2 y0 - x3 y1`, so `<e_i, f_i> = 1` and all
//! other basis pairings vanish. An element `g` satisfies
//! `<g x, g y> = lambda(g) <x, y>`; its characteristic polynomial is
//! `T^4 - t T^3 + s T^2 - lambda t T + lambda^2` and is recorded by the key
//! `(lambda, t, s)`.
//!
//! Matrices are packed into a `u64`, entry `(i, j)` at bit `(4i + j) * w`
//! with `w = 2` for `p = 3` and `w = 3` for `p = 5`.

mod census;
mod construct;
mod lemma;
mod subgroup;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use census::{enumerate_with, full_histogram, trace_zero_fraction, Census, TraceZeroFraction};
pub use construct::{
    build_block_group, find_order480, full_group, gsp4_generators, index3_subgroups,
    sp4_generators, CandidateTables,
};
pub use lemma::{sample_lemma, LemmaReport, LemmaSample};
pub use subgroup::{CharpolyHistogram, CharpolyKey, SubgroupTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("p must be 3 or 5, got {0}")]
    UnsupportedP(u64),
    #[error("closure exceeded the cap of {0} elements")]
    CapExceeded(usize),
    #[error("generator does not preserve the symplectic form up to scalar")]
    NotSymplectic,
    #[error("unexpected group structure: {0}")]
    StructureMismatch(String),
    #[error("search budget of {0} attempts exhausted")]
    SearchExhausted(usize),
    #[error("group has no orbit of size 24")]
    NoOrbit24,
}

/// Names for the subgroups appearing in the classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GroupLabel {
    G2304,
    G768,
    #[serde(rename = "G'768")]
    G768Prime,
    G480,
    #[serde(rename = "G'480")]
    G480Prime,
    G115200,
    #[serde(rename = "FULL")]
    Full,
    #[serde(rename = "OTHER")]
    Other,
}

impl GroupLabel {
    pub fn name(self) -> &'static str {
        match self {
            GroupLabel::G2304 => "G2304",
            GroupLabel::G768 => "G768",
            GroupLabel::G768Prime => "G'768",
            GroupLabel::G480 => "G480",
            GroupLabel::G480Prime => "G'480",
            GroupLabel::G115200 => "G115200",
            GroupLabel::Full => "FULL",
            GroupLabel::Other => "OTHER",
        }
    }

    /// Images for which the representation is known to be vast and tidy.
    pub fn is_vast_and_tidy(self) -> bool {
        matches!(
            self,
            GroupLabel::G2304
                | GroupLabel::G768
                | GroupLabel::G768Prime
                | GroupLabel::G480
                | GroupLabel::G115200
        )
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub type Vec4 = [u8; 4];
pub type Mat = [u8; 16];

/// Arithmetic context for `GSp4(F_p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gsp4 {
    p: u8,
    width: u32,
}

impl Gsp4 {
    pub fn new(p: u64) -> Result<Gsp4, GroupError> {
        match p {
            3 => Ok(Gsp4 { p: 3, width: 2 }),
            5 => Ok(Gsp4 { p: 5, width: 3 }),
            _ => Err(GroupError::UnsupportedP(p)),
        }
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    /// `|GSp4(F_p)| = (p - 1) p^4 (p^2 - 1) (p^4 - 1)`.
    pub fn order(&self) -> u64 {
        let p = self.p();
        (p - 1) * p.pow(4) * (p * p - 1) * (p.pow(4) - 1)
    }

    pub fn pack(&self, m: &Mat) -> u64 {
        m.iter()
            .enumerate()
            .fold(0u64, |acc, (i, &v)| acc | (v as u64) << (i as u32 * self.width))
    }

    pub fn unpack(&self, w: u64) -> Mat {
        let mask = (1u64 << self.width) - 1;
        std::array::from_fn(|i| ((w >> (i as u32 * self.width)) & mask) as u8)
    }

    pub fn identity(&self) -> u64 {
        self.pack(&Self::identity_mat())
    }

    pub fn identity_mat() -> Mat {
        let mut m = [0u8; 16];
        for i in 0..4 {
            m[5 * i] = 1;
        }
        m
    }

    pub fn mat_mul(&self, a: &Mat, b: &Mat) -> Mat {
        let p = self.p as u32;
        let mut c = [0u8; 16];
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = 0u32;
                for k in 0..4 {
                    acc += a[4 * i + k] as u32 * b[4 * k + j] as u32;
                }
                c[4 * i + j] = (acc % p) as u8;
            }
        }
        c
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.pack(&self.mat_mul(&self.unpack(a), &self.unpack(b)))
    }

    pub fn apply(&self, m: &Mat, v: &Vec4) -> Vec4 {
        let p = self.p as u32;
        std::array::from_fn(|i| {
            ((0..4).map(|k| m[4 * i + k] as u32 * v[k] as u32).sum::<u32>() % p) as u8
        })
    }

    pub fn form(&self, x: &Vec4, y: &Vec4) -> u8 {
        let p = self.p as i32;
        let v = x[0] as i32 * y[2] as i32 + x[1] as i32 * y[3] as i32
            - x[2] as i32 * y[0] as i32
            - x[3] as i32 * y[1] as i32;
        v.rem_euclid(p) as u8
    }

    pub fn column(m: &Mat, j: usize) -> Vec4 {
        std::array::from_fn(|i| m[4 * i + j])
    }

    /// `lambda(g)` if `g` is a symplectic similitude.
    pub fn similitude(&self, m: &Mat) -> Option<u8> {
        let cols: [Vec4; 4] = std::array::from_fn(|j| Self::column(m, j));
        let lambda = self.form(&cols[0], &cols[2]);
        if lambda == 0 {
            return None;
        }
        let basis: [Vec4; 4] = std::array::from_fn(|j| {
            let mut v = [0u8; 4];
            v[j] = 1;
            v
        });
        for i in 0..4 {
            for j in 0..4 {
                let expect = (lambda as u32 * self.form(&basis[i], &basis[j]) as u32 % self.p as u32) as u8;
                if self.form(&cols[i], &cols[j]) != expect {
                    return None;
                }
            }
        }
        Some(lambda)
    }

    /// `lambda(g)` for a known group element.
    pub fn lambda(&self, w: u64) -> u8 {
        let m = self.unpack(w);
        self.form(&Self::column(&m, 0), &Self::column(&m, 2))
    }

    pub fn inv_scalar(&self, a: u8) -> u8 {
        (1..self.p).find(|&b| a as u32 * b as u32 % self.p as u32 == 1).expect("unit")
    }

    /// `g^-1 = -lambda^-1 J g^T J`.
    pub fn inverse(&self, w: u64) -> u64 {
        let m = self.unpack(w);
        let p = self.p as u32;
        let li = self.inv_scalar(self.form(&Self::column(&m, 0), &Self::column(&m, 2))) as u32;
        // J maps (x0, x1, x2, x3) to (x2, x3, -x0, -x1) in the sense
        // <x, y> = x^T J y with J = [[0, I], [-I, 0]]
        let jmat: Mat = {
            let mut j = [0u8; 16];
            j[2] = 1;
            j[4 + 3] = 1;
            j[8] = self.p - 1;
            j[12 + 1] = self.p - 1;
            j
        };
        let mut t = [0u8; 16];
        for i in 0..4 {
            for k in 0..4 {
                t[4 * i + k] = m[4 * k + i];
            }
        }
        let r = self.mat_mul(&self.mat_mul(&jmat, &t), &jmat);
        let scale = (p - li) % p;
        self.pack(&r.map(|v| (v as u32 * scale % p) as u8))
    }

    pub fn trace(&self, w: u64) -> u8 {
        let m = self.unpack(w);
        ((m[0] as u32 + m[5] as u32 + m[10] as u32 + m[15] as u32) % self.p as u32) as u8
    }

    /// `(lambda, t, s)` with `s` the second elementary symmetric function
    /// of the eigenvalues.
    pub fn charpoly_key(&self, w: u64) -> CharpolyKey {
        let m = self.unpack(w);
        charpoly_key_of(&m, self.p)
    }

    pub fn order_of(&self, w: u64) -> u32 {
        let id = self.identity();
        let mut x = w;
        let mut n = 1;
        while x != id {
            x = self.mul(x, w);
            n += 1;
        }
        n
    }

    pub fn scalar_matrix(&self, c: u8) -> u64 {
        self.pack(&Self::identity_mat().map(|v| v * c))
    }

    /// `diag(1, 1, lambda, lambda)`.
    pub fn similitude_diag(&self, lambda: u8) -> u64 {
        let mut m = Self::identity_mat();
        m[10] = lambda;
        m[15] = lambda;
        self.pack(&m)
    }

    /// `x -> x + <v, x> v`.
    pub fn transvection(&self, v: &Vec4) -> u64 {
        let mut m = [0u8; 16];
        let basis: [Vec4; 4] = std::array::from_fn(|j| {
            let mut b = [0u8; 4];
            b[j] = 1;
            b
        });
        for (j, b) in basis.iter().enumerate() {
            let c = self.form(v, b) as u32;
            for i in 0..4 {
                m[4 * i + j] = ((b[i] as u32 + c * v[i] as u32) % self.p as u32) as u8;
            }
        }
        self.pack(&m)
    }

    /// Index of a nonzero vector's class in `(F_p^4 - 0) / +-1`, in
    /// `0..(p^4 - 1) / 2`.
    pub fn point_index(&self, v: &Vec4) -> usize {
        let p = self.p as usize;
        let lead = v.iter().position(|&c| c != 0).expect("nonzero vector");
        let neg = v[lead] as usize > p / 2;
        let canon: Vec4 = if neg { v.map(|c| (self.p - c) % self.p) } else { *v };
        let code = canon.iter().fold(0usize, |acc, &c| acc * p + c as usize);
        code_to_point(self.p)[code]
    }

    pub fn point_count(&self) -> usize {
        let p = self.p as usize;
        (p.pow(4) - 1) / 2
    }

    /// Representative vectors of all points, by index.
    pub fn points(&self) -> Vec<Vec4> {
        let p = self.p as usize;
        let table = code_to_point(self.p);
        let mut out = vec![[0u8; 4]; self.point_count()];
        for (code, &idx) in table.iter().enumerate() {
            if idx == usize::MAX {
                continue;
            }
            let v: Vec4 = std::array::from_fn(|i| (code / p.pow(3 - i as u32) % p) as u8);
            out[idx] = v;
        }
        out
    }
}

pub(crate) fn charpoly_key_of(m: &Mat, p: u8) -> CharpolyKey {
    let p32 = p as u32;
    let t = (m[0] as u32 + m[5] as u32 + m[10] as u32 + m[15] as u32) % p32;
    let mut tr2 = 0u32;
    for i in 0..4 {
        for j in 0..4 {
            tr2 += m[4 * i + j] as u32 * m[4 * j + i] as u32;
        }
    }
    let tr2 = tr2 % p32;
    let inv2 = (p32 + 1) / 2;
    let s = (t * t + p32 - tr2) % p32 * inv2 % p32;
    let cols0: Vec4 = Gsp4::column(m, 0);
    let cols2: Vec4 = Gsp4::column(m, 2);
    let lambda = (cols0[0] as i32 * cols2[2] as i32 + cols0[1] as i32 * cols2[3] as i32
        - cols0[2] as i32 * cols2[0] as i32
        - cols0[3] as i32 * cols2[1] as i32)
        .rem_euclid(p as i32) as u8;
    CharpolyKey { lambda, t: t as u8, s: s as u8 }
}

/// Map from base-p vector code to point index (`usize::MAX` for the zero
/// vector and for non-canonical representatives).
fn code_to_point(p: u8) -> &'static [usize] {
    use std::sync::OnceLock;
    static T3: OnceLock<Vec<usize>> = OnceLock::new();
    static T5: OnceLock<Vec<usize>> = OnceLock::new();
    let cell = if p == 3 { &T3 } else { &T5 };
    cell.get_or_init(|| {
        let p = p as usize;
        let n = p.pow(4);
        let mut table = vec![usize::MAX; n];
        let mut next = 0;
        for (code, slot) in table.iter_mut().enumerate() {
            let digits: Vec<usize> = (0..4).map(|i| code / p.pow(3 - i) % p).collect();
            if let Some(lead) = digits.iter().position(|&c| c != 0) {
                if digits[lead] <= p / 2 {
                    *slot = next;
                    next += 1;
                }
            }
        }
        table
    })
}
