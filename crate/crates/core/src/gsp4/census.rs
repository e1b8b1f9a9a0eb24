//! Streaming enumeration of all of `GSp4(F_p)`.
//!
//! Every element is determined by the images `(e1', e2', f1', f2')` of the
//! basis, which form a symplectic basis for the form scaled by `lambda`:
//! `e1'` is any nonzero vector, `f1'` any vector with `<e1', f1'> = lambda`,
//! and `(e2', f2')` a scaled symplectic pair in the orthogonal complement of
//! `span(e1', f1')`. Nothing is stored, so `p = 5` runs in constant memory.

use std::sync::OnceLock;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use super::{charpoly_key_of, Gsp4, GroupError, Mat, Vec4};

fn all_vectors(p: u8) -> Vec<Vec4> {
    let n = (p as usize).pow(4);
    (0..n)
        .map(|code| std::array::from_fn(|i| (code / (p as usize).pow(3 - i as u32) % p as usize) as u8))
        .collect()
}

/// Calls `visit` on every element of `GSp4(F_p)`, in parallel over the image
/// of `e1`, and merges the per-task accumulators.
pub fn enumerate_with<A, I, V, M>(g: &Gsp4, init: I, visit: V, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    V: Fn(&mut A, &Mat) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    let p = g.p;
    let vectors = all_vectors(p);
    let nonzero: Vec<Vec4> = vectors[1..].to_vec();
    let basis: [Vec4; 4] = std::array::from_fn(|j| {
        let mut b = [0u8; 4];
        b[j] = 1;
        b
    });
    let scale = |v: &Vec4, c: u8| v.map(|x| (x as u32 * c as u32 % p as u32) as u8);
    let add = |a: &Vec4, b: &Vec4| -> Vec4 { std::array::from_fn(|i| (a[i] + b[i]) % p) };

    nonzero
        .par_iter()
        .map(|e1| {
            let mut acc = init();
            let (b, c) = basis
                .iter()
                .map(|b| (b, g.form(e1, b)))
                .find(|&(_, c)| c != 0)
                .expect("form is nondegenerate");
            let f0 = scale(b, g.inv_scalar(c));
            let perp: Vec<&Vec4> = vectors.iter().filter(|w| g.form(e1, w) == 0).collect();
            for lambda in 1..p {
                let base = scale(&f0, lambda);
                for w in &perp {
                    let f1 = add(&base, w);
                    let plane: Vec<&Vec4> = perp.iter().copied().filter(|x| g.form(&f1, x) == 0).collect();
                    for e2 in plane.iter().skip(1) {
                        for f2 in plane.iter().filter(|x| g.form(e2, x) == lambda) {
                            let mut m: Mat = [0; 16];
                            for i in 0..4 {
                                m[4 * i] = e1[i];
                                m[4 * i + 1] = e2[i];
                                m[4 * i + 2] = f1[i];
                                m[4 * i + 3] = f2[i];
                            }
                            visit(&mut acc, &m);
                        }
                    }
                }
            }
            acc
        })
        .reduce(&init, &merge)
}

/// Counts over the whole group keyed by similitude and characteristic
/// polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    pub p: u64,
    pub order: u64,
    /// `counts[lambda][t][s]`.
    pub counts: Vec<Vec<Vec<u64>>>,
}

impl Census {
    pub fn lambda_total(&self, lambda: u8) -> u64 {
        self.counts[lambda as usize].iter().flatten().sum()
    }

    pub fn trace_zero(&self, lambda: u8) -> u64 {
        self.counts[lambda as usize][0].iter().sum()
    }
}

fn census(g: &Gsp4) -> Census {
    let p = g.p as usize;
    let empty = || vec![vec![vec![0u64; p]; p]; p];
    let counts = enumerate_with(
        g,
        empty,
        |acc: &mut Vec<Vec<Vec<u64>>>, m: &Mat| {
            let k = charpoly_key_of(m, g.p);
            acc[k.lambda as usize][k.t as usize][k.s as usize] += 1;
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().flatten().flatten().zip(b.iter().flatten().flatten()) {
                *x += y;
            }
            a
        },
    );
    let order = counts.iter().flatten().flatten().sum();
    Census { p: g.p(), order, counts }
}

/// The census of `GSp4(F_p)`, computed once per process.
pub fn full_histogram(p: u64) -> Result<&'static Census, GroupError> {
    static C3: OnceLock<Census> = OnceLock::new();
    static C5: OnceLock<Census> = OnceLock::new();
    let g = Gsp4::new(p)?;
    let cell = if p == 3 { &C3 } else { &C5 };
    Ok(cell.get_or_init(|| census(&g)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceZeroFraction {
    pub p: u64,
    pub order: u64,
    #[serde(serialize_with = "ratio_string")]
    pub fraction: Ratio<u64>,
    /// `(lambda, fraction of trace-zero elements with that similitude)`.
    #[serde(serialize_with = "ratio_pairs")]
    pub per_similitude: Vec<(u8, Ratio<u64>)>,
}

fn ratio_string<S: serde::Serializer>(r: &Ratio<u64>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ratio_pairs<S: serde::Serializer>(v: &[(u8, Ratio<u64>)], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(v.len()))?;
    for (l, r) in v {
        map.serialize_entry(&l.to_string(), &r.to_string())?;
    }
    map.end()
}

/// Exact proportion of trace-zero elements of `GSp4(F_p)`.
pub fn trace_zero_fraction(p: u64) -> Result<TraceZeroFraction, GroupError> {
    let c = full_histogram(p)?;
    let zero: u64 = (1..p as u8).map(|l| c.trace_zero(l)).sum();
    Ok(TraceZeroFraction {
        p,
        order: c.order,
        fraction: Ratio::new(zero, c.order),
        per_similitude: (1..p as u8)
            .map(|l| (l, Ratio::new(c.trace_zero(l), c.lambda_total(l))))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn census_p3() {
        let f = trace_zero_fraction(3).unwrap();
        assert_eq!(f.order, 103_680);
        assert_eq!(f.fraction, Ratio::new(231, 640));
    }

    #[test]
    fn enumeration_yields_similitudes() {
        let g = Gsp4::new(3).unwrap();
        let bad = enumerate_with(
            &g,
            || 0u64,
            |acc, m| {
                if g.similitude(m).is_none() {
                    *acc += 1;
                }
            },
            |a, b| a + b,
        );
        assert_eq!(bad, 0);
    }
}
