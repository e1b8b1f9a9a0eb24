//! Randomized check of the classification of large subgroups of `G115200`.
//!
//! Subgroups with surjective similitude whose orbits on the 312 points of
//! `(F_5^4 - 0)/±` have sizes `{24, 288}` should have order 2304, 4608,
//! 57600 or 115200, and act on the 24-point orbit through a group of order
//! 576, 1152, 14400 or 28800 respectively. This module samples generating
//! sets, closes them, and records every sample that breaks the pattern.
//!
//! Elements of `G115200 = Delta ⋊ Z/2` are handled structurally as triples
//! `(A, B, swap)` with `A, B` in `GL2(F_5)`, indexed into a flat bitset,
//! which keeps each closure a few table lookups per element.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::construct::{embed_block, Mat2};
use super::subgroup::SubgroupTable;
use super::{GroupError, Gsp4, Vec4};

const P: u8 = 5;

/// Order and image order pairs allowed for an accepted sample.
pub const EXPECTED: [(u64, u64); 4] = [(2304, 576), (4608, 1152), (57600, 14400), (115200, 28800)];

/// `GL2(F_5)` with a full multiplication table.
struct Gl2 {
    elems: Vec<Mat2>,
    mul: Vec<u16>,
    det: Vec<u8>,
    identity: u16,
    minus_identity: u16,
}

fn mat2_mul(a: Mat2, b: Mat2) -> Mat2 {
    let m = |x: u8, y: u8, z: u8, w: u8| ((x as u16 * y as u16 + z as u16 * w as u16) % P as u16) as u8;
    [m(a[0], b[0], a[1], b[2]), m(a[0], b[1], a[1], b[3]), m(a[2], b[0], a[3], b[2]), m(a[2], b[1], a[3], b[3])]
}

fn mat2_det(a: Mat2) -> u8 {
    ((a[0] as u16 * a[3] as u16 + (P as u16 - 1) * (a[1] as u16 * a[2] as u16 % P as u16)) % P as u16) as u8
}

impl Gl2 {
    fn new() -> Gl2 {
        let mut elems = Vec::new();
        for code in 0..(P as u32).pow(4) {
            let m: Mat2 = std::array::from_fn(|i| (code / (P as u32).pow(3 - i as u32) % P as u32) as u8);
            if mat2_det(m) != 0 {
                elems.push(m);
            }
        }
        let index: HashMap<Mat2, u16> = elems.iter().enumerate().map(|(i, &m)| (m, i as u16)).collect();
        let n = elems.len();
        let mut mul = vec![0u16; n * n];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                mul[i * n + j] = index[&mat2_mul(a, b)];
            }
        }
        let det: Vec<u8> = elems.iter().map(|&m| mat2_det(m)).collect();
        Gl2 {
            identity: index[&[1, 0, 0, 1]],
            minus_identity: index[&[P - 1, 0, 0, P - 1]],
            elems,
            mul,
            det,
        }
    }

    fn n(&self) -> usize {
        self.elems.len()
    }

    fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.n() + b as usize]
    }

    fn closure(&self, gens: &[u16]) -> Vec<u16> {
        let mut seen = vec![false; self.n()];
        let mut out = vec![self.identity];
        seen[self.identity as usize] = true;
        let mut i = 0;
        while i < out.len() {
            for &s in gens {
                let y = self.mul(out[i], s);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out
    }

    /// The normalizer of the quaternion subgroup of `SL2(F_5)`, of order 96.
    fn quaternion_normalizer(&self) -> Vec<u16> {
        let i = self.index_of([0, 1, P - 1, 0]);
        let j = self.index_of([0, 2, 2, 0]);
        let q8 = self.closure(&[i, j]);
        debug_assert_eq!(q8.len(), 8);
        let mut set = vec![false; self.n()];
        for &x in &q8 {
            set[x as usize] = true;
        }
        (0..self.n() as u16)
            .filter(|&g| {
                let gi = self.inverse(g);
                q8.iter().all(|&x| set[self.mul(self.mul(g, x), gi) as usize])
            })
            .collect()
    }

    fn index_of(&self, m: Mat2) -> u16 {
        self.elems.iter().position(|&e| e == m).expect("invertible matrix") as u16
    }

    fn inverse(&self, a: u16) -> u16 {
        (0..self.n() as u16).find(|&b| self.mul(a, b) == self.identity).expect("group element")
    }
}

/// A structural element `(A, B, swap)` of `G115200`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BlockElement {
    pub a: Mat2,
    pub b: Mat2,
    pub swap: bool,
}

/// One accepted sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaSample {
    pub generators: Vec<BlockElement>,
    pub order: u64,
    pub image_order: u64,
}

impl LemmaSample {
    pub fn matches_expected(&self) -> bool {
        EXPECTED.contains(&(self.order, self.image_order))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub seed: u64,
    pub attempts: u64,
    pub accepted: u64,
    pub rejected_similitude: u64,
    pub rejected_orbits: u64,
    /// Accepted samples by `(order, image order)`.
    pub by_order: BTreeMap<String, u64>,
    pub counterexamples: Vec<LemmaSample>,
    /// Number of accepted samples recomputed with explicit `4x4` matrices.
    pub cross_checked: u64,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

struct Sampler {
    gl2: Gl2,
    g: Gsp4,
    points: Vec<Vec4>,
    bits: Vec<u64>,
    queue: Vec<u32>,
}

impl Sampler {
    fn new() -> Sampler {
        let g = Gsp4::new(P as u64).expect("p = 5 is supported");
        let gl2 = Gl2::new();
        let words = (gl2.n() * gl2.n() * 2).div_ceil(64);
        Sampler { points: g.points(), g, gl2, bits: vec![0; words], queue: Vec::new() }
    }

    fn encode(&self, a: u16, b: u16, s: bool) -> u32 {
        ((a as u32 * self.gl2.n() as u32 + b as u32) << 1) | s as u32
    }

    fn decode(&self, e: u32) -> (u16, u16, bool) {
        let s = e & 1 == 1;
        let ab = e >> 1;
        ((ab / self.gl2.n() as u32) as u16, (ab % self.gl2.n() as u32) as u16, s)
    }

    fn product(&self, x: u32, y: u32) -> u32 {
        let (a, b, s) = self.decode(x);
        let (a2, b2, s2) = self.decode(y);
        let (a2, b2) = if s { (b2, a2) } else { (a2, b2) };
        self.encode(self.gl2.mul(a, a2), self.gl2.mul(b, b2), s ^ s2)
    }

    fn apply_vec(&self, x: u32, v: &Vec4) -> Vec4 {
        let (a, b, s) = self.decode(x);
        let (a, b) = (self.gl2.elems[a as usize], self.gl2.elems[b as usize]);
        let (x, y) = ([v[0], v[2]], [v[1], v[3]]);
        let (x, y) = if s { (y, x) } else { (x, y) };
        let ap = |m: Mat2, u: [u8; 2]| {
            [
                ((m[0] as u16 * u[0] as u16 + m[1] as u16 * u[1] as u16) % P as u16) as u8,
                ((m[2] as u16 * u[0] as u16 + m[3] as u16 * u[1] as u16) % P as u16) as u8,
            ]
        };
        let (x, y) = (ap(a, x), ap(b, y));
        [x[0], y[0], x[1], y[1]]
    }

    fn orbit_sizes(&self, gens: &[u32]) -> Vec<usize> {
        let n = self.points.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &s in gens {
            for (i, v) in self.points.iter().enumerate() {
                let j = self.g.point_index(&self.apply_vec(s, v));
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
        for i in 0..n {
            *sizes.entry(find(&mut parent, i)).or_default() += 1;
        }
        let mut out: Vec<usize> = sizes.into_values().collect();
        out.sort_unstable();
        out
    }

    /// Order of `<gens>` and its image on the 24-point orbit. Closure stops
    /// once more than half of `G115200` is reached, since the only subgroup
    /// that large is the whole group.
    fn order_and_image(&mut self, gens: &[u32]) -> (u64, u64) {
        const FULL: u64 = 115_200;
        self.bits.fill(0);
        self.queue.clear();
        let id = self.encode(self.gl2.identity, self.gl2.identity, false);
        self.bits[id as usize / 64] |= 1 << (id % 64);
        self.queue.push(id);
        let mut i = 0;
        while i < self.queue.len() {
            if self.queue.len() as u64 > FULL / 2 {
                return (FULL, FULL / 4);
            }
            let x = self.queue[i];
            for &s in gens {
                let y = self.product(x, s);
                let (w, b) = (y as usize / 64, y % 64);
                if self.bits[w] >> b & 1 == 0 {
                    self.bits[w] |= 1 << b;
                    self.queue.push(y);
                }
            }
            i += 1;
        }
        let order = self.queue.len() as u64;
        let (pos, neg) = (self.gl2.identity, self.gl2.minus_identity);
        let kernel = [(pos, pos), (pos, neg), (neg, pos), (neg, neg)]
            .iter()
            .filter(|&&(a, b)| {
                let e = self.encode(a, b, false);
                self.bits[e as usize / 64] >> (e % 64) & 1 == 1
            })
            .count() as u64;
        (order, order / kernel)
    }

    fn to_block(&self, e: u32) -> BlockElement {
        let (a, b, swap) = self.decode(e);
        BlockElement { a: self.gl2.elems[a as usize], b: self.gl2.elems[b as usize], swap }
    }
}

/// Pools of `GL2(F_5)` that generating blocks are drawn from: the whole
/// group and the normalizer of `Q8`, which between them reach every order
/// in the expected list.
fn draw_generators(s: &Sampler, pools: &[Vec<u16>], rng: &mut ChaCha8Rng) -> Vec<u32> {
    let pool = &pools[rng.gen_range(0..pools.len())];
    let count = rng.gen_range(2..=3);
    // Restricting to the kernel of `(-1)^swap * chi(det A)` halves the group.
    let in_kernel = rng.gen_bool(0.5);
    let mut gens = Vec::with_capacity(count);
    while gens.len() < count {
        let a = *pool.choose(rng).expect("nonempty pool");
        let d = s.gl2.det[a as usize];
        let matching: Vec<u16> = pool.iter().copied().filter(|&b| s.gl2.det[b as usize] == d).collect();
        let b = *matching.choose(rng).expect("A itself matches");
        let swap = if in_kernel { !matches!(d, 1 | 4) } else { rng.gen_bool(0.5) };
        gens.push(s.encode(a, b, swap));
    }
    gens
}

/// Recomputes a sample with explicit matrices and the general subgroup code.
fn cross_check(s: &Sampler, sample: &LemmaSample) -> Result<bool, GroupError> {
    let gens: Vec<u64> = sample.generators.iter().map(|e| embed_block(&s.g, e.a, e.b, e.swap)).collect();
    let t = SubgroupTable::closure(&s.g, &gens, 115_200)?;
    Ok(t.order() == sample.order
        && t.orbits_mod_sign() == [24, 288]
        && t.degree24_image_order()? == sample.image_order)
}

/// Samples until `target` subgroups pass the similitude and orbit filters,
/// or `20 * target` attempts have been made.
pub fn sample_lemma(seed: u64, target: u64) -> Result<LemmaReport, GroupError> {
    let mut s = Sampler::new();
    let all: Vec<u16> = (0..s.gl2.n() as u16).collect();
    let pools = vec![all, s.gl2.quaternion_normalizer()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = LemmaReport {
        seed,
        attempts: 0,
        accepted: 0,
        rejected_similitude: 0,
        rejected_orbits: 0,
        by_order: BTreeMap::new(),
        counterexamples: Vec::new(),
        cross_checked: 0,
    };
    let mut checked_orders: Vec<u64> = Vec::new();
    while report.accepted < target && report.attempts < 20 * target.max(1) {
        report.attempts += 1;
        let gens = draw_generators(&s, &pools, &mut rng);
        let surjective = gens.iter().any(|&e| matches!(s.gl2.det[s.decode(e).0 as usize], 2 | 3));
        if !surjective {
            report.rejected_similitude += 1;
            continue;
        }
        if s.orbit_sizes(&gens) != [24, 288] {
            report.rejected_orbits += 1;
            continue;
        }
        report.accepted += 1;
        let (order, image_order) = s.order_and_image(&gens);
        let sample = LemmaSample { generators: gens.iter().map(|&e| s.to_block(e)).collect(), order, image_order };
        *report.by_order.entry(format!("{order}:{image_order}")).or_default() += 1;
        if !sample.matches_expected() {
            report.counterexamples.push(sample.clone());
        }
        if order < 115_200 && !checked_orders.contains(&order) {
            checked_orders.push(order);
            if !cross_check(&s, &sample)? {
                report.counterexamples.push(sample);
            }
            report.cross_checked += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quaternion_normalizer_has_order_96() {
        let gl2 = Gl2::new();
        assert_eq!(gl2.n(), 480);
        assert_eq!(gl2.quaternion_normalizer().len(), 96);
    }

    #[test]
    fn structural_product_matches_matrices() {
        let s = Sampler::new();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let x = s.encode(rng.gen_range(0..480), rng.gen_range(0..480), rng.gen());
            let y = s.encode(rng.gen_range(0..480), rng.gen_range(0..480), rng.gen());
            let emb = |e: u32| {
                let b = s.to_block(e);
                embed_block(&s.g, b.a, b.b, b.swap)
            };
            assert_eq!(emb(s.product(x, y)), s.g.mul(emb(x), emb(y)));
            let v = s.points[rng.gen_range(0..s.points.len())];
            assert_eq!(s.apply_vec(x, &v), s.g.apply(&s.g.unpack(emb(x)), &v));
        }
    }

    #[test]
    fn small_sample_is_clean() {
        let r = sample_lemma(1, 50).unwrap();
        assert_eq!(r.accepted, 50);
        assert!(r.holds(), "{:?}", r.counterexamples);
    }
}
