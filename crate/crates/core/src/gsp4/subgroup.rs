//! Explicit subgroups of `GSp4(F_p)` with cached orbit and
//! characteristic-polynomial data.

use std::collections::{BTreeMap, HashSet, VecDeque};

use num_rational::Ratio;
use serde::Serialize;

use super::census::Census;
use super::{charpoly_key_of, GroupError, GroupLabel, Gsp4};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CharpolyKey {
    pub lambda: u8,
    pub t: u8,
    pub s: u8,
}

/// Exact element counts keyed by `(lambda, t, s)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CharpolyHistogram {
    counts: BTreeMap<CharpolyKey, u64>,
    lambda_totals: BTreeMap<u8, u64>,
}

impl CharpolyHistogram {
    pub fn from_census(c: &Census) -> CharpolyHistogram {
        let mut h = CharpolyHistogram::default();
        for (lambda, by_t) in c.counts.iter().enumerate() {
            for (t, by_s) in by_t.iter().enumerate() {
                for (s, &n) in by_s.iter().enumerate() {
                    if n > 0 {
                        let key = CharpolyKey { lambda: lambda as u8, t: t as u8, s: s as u8 };
                        h.add(key, n);
                    }
                }
            }
        }
        h
    }

    fn add(&mut self, key: CharpolyKey, n: u64) {
        *self.counts.entry(key).or_default() += n;
        *self.lambda_totals.entry(key.lambda).or_default() += n;
    }

    pub fn count(&self, key: CharpolyKey) -> u64 {
        self.counts.get(&key).copied().unwrap_or(0)
    }

    pub fn lambda_total(&self, lambda: u8) -> u64 {
        self.lambda_totals.get(&lambda).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (CharpolyKey, u64)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    pub fn total(&self) -> u64 {
        self.lambda_totals.values().sum()
    }
}

/// Breadth-first closure of `gens`, sorted; errors once more than `cap`
/// elements are found.
pub(crate) fn closure_elements(g: &Gsp4, gens: &[u64], cap: usize) -> Result<Vec<u64>, GroupError> {
    for &s in gens {
        if g.similitude(&g.unpack(s)).is_none() {
            return Err(GroupError::NotSymplectic);
        }
    }
    let id = g.identity();
    let gen_mats: Vec<_> = gens.iter().map(|&s| g.unpack(s)).collect();
    let mut seen: HashSet<u64> = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        let xm = g.unpack(x);
        for s in &gen_mats {
            let y = g.pack(&g.mat_mul(&xm, s));
            if seen.insert(y) {
                if seen.len() > cap {
                    return Err(GroupError::CapExceeded(cap));
                }
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<u64> = seen.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

/// Orbit sizes (ascending) of the group generated by `gens` on
/// `(F_p^4 - 0) / +-1`.
pub(crate) fn orbit_sizes(g: &Gsp4, gens: &[u64]) -> Vec<usize> {
    let pts = g.points();
    let mut parent: Vec<usize> = (0..pts.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &s in gens {
        let m = g.unpack(s);
        for (i, v) in pts.iter().enumerate() {
            let j = g.point_index(&g.apply(&m, v));
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..pts.len() {
        *sizes.entry(find(&mut parent, i)).or_default() += 1;
    }
    let mut out: Vec<usize> = sizes.into_values().collect();
    out.sort_unstable();
    out
}

/// A subgroup of `GSp4(F_p)` given by generators, with its element list
/// when it is small enough to store.
#[derive(Debug, Clone)]
pub struct SubgroupTable {
    g: Gsp4,
    label: GroupLabel,
    generators: Vec<u64>,
    elements: Option<Vec<u64>>,
    order: u64,
    orbits: Vec<usize>,
    histogram: CharpolyHistogram,
}

impl SubgroupTable {
    /// The subgroup generated by `gens`, which must have at most `cap`
    /// elements.
    pub fn closure(g: &Gsp4, gens: &[u64], cap: usize) -> Result<SubgroupTable, GroupError> {
        let elements = closure_elements(g, gens, cap)?;
        Ok(Self::from_elements(g, gens.to_vec(), elements))
    }

    /// A table from a known element set; `generators` may be empty, in which
    /// case orbits are computed from all elements.
    pub(crate) fn from_elements(g: &Gsp4, generators: Vec<u64>, mut elements: Vec<u64>) -> SubgroupTable {
        elements.sort_unstable();
        let orbits = if generators.is_empty() {
            orbit_sizes(g, &elements)
        } else {
            orbit_sizes(g, &generators)
        };
        let mut histogram = CharpolyHistogram::default();
        for &x in &elements {
            histogram.add(charpoly_key_of(&g.unpack(x), g.p), 1);
        }
        SubgroupTable {
            g: *g,
            label: GroupLabel::Other,
            generators,
            order: elements.len() as u64,
            elements: Some(elements),
            orbits,
            histogram,
        }
    }

    /// A table for a group too large to list, described by generators and
    /// its census.
    pub(crate) fn from_census(g: &Gsp4, generators: Vec<u64>, census: &Census) -> SubgroupTable {
        SubgroupTable {
            g: *g,
            label: GroupLabel::Full,
            orbits: orbit_sizes(g, &generators),
            generators,
            elements: None,
            order: census.order,
            histogram: CharpolyHistogram::from_census(census),
        }
    }

    pub fn with_label(mut self, label: GroupLabel) -> Self {
        self.label = label;
        self
    }

    pub fn label(&self) -> GroupLabel {
        self.label
    }

    pub fn context(&self) -> &Gsp4 {
        &self.g
    }

    pub fn p(&self) -> u64 {
        self.g.p()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    /// Sorted element list, absent for the full group at `p = 5`.
    pub fn elements(&self) -> Option<&[u64]> {
        self.elements.as_deref()
    }

    fn require_elements(&self) -> &[u64] {
        self.elements.as_deref().expect("operation needs an explicit element list")
    }

    pub fn contains(&self, x: u64) -> bool {
        self.require_elements().binary_search(&x).is_ok()
    }

    /// Orbit sizes on `(F_p^4 - 0) / +-1`, ascending.
    pub fn orbits_mod_sign(&self) -> &[usize] {
        &self.orbits
    }

    pub fn histogram(&self) -> &CharpolyHistogram {
        &self.histogram
    }

    /// The values taken by the similitude character.
    pub fn similitude_image(&self) -> Vec<u8> {
        (1..self.g.p as u8).filter(|&l| self.histogram.lambda_total(l) > 0).collect()
    }

    pub fn similitude_surjective(&self) -> bool {
        self.similitude_image().len() == self.g.p as usize - 1
    }

    pub fn trace_zero_fraction(&self) -> Ratio<u64> {
        let zero: u64 = self.histogram.iter().filter(|(k, _)| k.t == 0).map(|(_, n)| n).sum();
        Ratio::new(zero, self.order)
    }

    /// `G ∩ Sp4(F_p)`.
    pub fn intersect_sp4(&self) -> SubgroupTable {
        let elems: Vec<u64> = self
            .require_elements()
            .iter()
            .copied()
            .filter(|&x| self.g.lambda(x) == 1)
            .collect();
        SubgroupTable::from_elements(&self.g, Vec::new(), elems)
    }

    /// Generators when known, otherwise all elements.
    fn generating_set(&self) -> &[u64] {
        if self.generators.is_empty() {
            self.require_elements()
        } else {
            &self.generators
        }
    }

    /// The commutator subgroup, as a sorted element list.
    pub fn derived_subgroup(&self) -> Vec<u64> {
        let g = &self.g;
        let gens = self.generating_set();
        let elems = self.require_elements();
        // normal closure of the commutators [x, s], x in G, s a generator
        let mut comms: HashSet<u64> = HashSet::new();
        for &x in elems {
            let xi = g.inverse(x);
            for &s in gens {
                let c = g.mul(g.mul(xi, g.inverse(s)), g.mul(x, s));
                comms.insert(c);
            }
        }
        let mut comm_list: Vec<u64> = comms.into_iter().collect();
        comm_list.sort_unstable();
        let mut k = closure_elements(g, &comm_list, elems.len()).expect("inside G");
        loop {
            let set: HashSet<u64> = k.iter().copied().collect();
            let mut extra = Vec::new();
            for &s in gens {
                let si = g.inverse(s);
                for &y in &k {
                    let c = g.mul(g.mul(si, y), s);
                    if !set.contains(&c) {
                        extra.push(c);
                    }
                }
            }
            if extra.is_empty() {
                return k;
            }
            let mut all = k.clone();
            all.extend(extra);
            k = closure_elements(g, &all, elems.len()).expect("inside G");
        }
    }

    /// Invariant factors `d1 | d2 | ...` of the abelianization.
    pub fn abelian_invariants(&self) -> Vec<u64> {
        let g = &self.g;
        let elems = self.require_elements();
        let derived = self.derived_subgroup();
        let k: HashSet<u64> = derived.iter().copied().collect();
        let mut covered: HashSet<u64> = HashSet::new();
        let mut orders: Vec<u64> = Vec::new();
        for &x in elems {
            if covered.contains(&x) {
                continue;
            }
            for &y in &derived {
                covered.insert(g.mul(x, y));
            }
            let mut n = 1u64;
            let mut pw = x;
            while !k.contains(&pw) {
                pw = g.mul(pw, x);
                n += 1;
            }
            orders.push(n);
        }
        invariant_factors(&orders)
    }

    /// Order of the image of the permutation action on an orbit of size 24.
    pub fn degree24_image_order(&self) -> Result<u64, GroupError> {
        let g = &self.g;
        let pts = g.points();
        let orbit = orbit_of_size(g, self.generating_set(), 24).ok_or(GroupError::NoOrbit24)?;
        let kernel = self
            .require_elements()
            .iter()
            .filter(|&&x| {
                let m = g.unpack(x);
                orbit.iter().all(|&i| g.point_index(&g.apply(&m, &pts[i])) == i)
            })
            .count() as u64;
        Ok(self.order / kernel)
    }
}

/// Point indices of some orbit with exactly `size` points.
fn orbit_of_size(g: &Gsp4, gens: &[u64], size: usize) -> Option<Vec<usize>> {
    let pts = g.points();
    let mats: Vec<_> = gens.iter().map(|&s| g.unpack(s)).collect();
    let mut seen = vec![false; pts.len()];
    for start in 0..pts.len() {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < orbit.len() {
            let v = pts[orbit[i]];
            for m in &mats {
                let j = g.point_index(&g.apply(m, &v));
                if !seen[j] {
                    seen[j] = true;
                    orbit.push(j);
                }
            }
            i += 1;
        }
        if orbit.len() == size {
            orbit.sort_unstable();
            return Some(orbit);
        }
    }
    None
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Invariant factors of a finite abelian group from the orders of all of
/// its elements.
pub(crate) fn invariant_factors(orders: &[u64]) -> Vec<u64> {
    let n = orders.len() as u64;
    let mut per_prime: Vec<Vec<u32>> = Vec::new();
    let mut primes = Vec::new();
    for l in prime_factors(n) {
        // r_j = #{cyclic factors with exponent >= j}
        let mut exps: Vec<u32> = Vec::new();
        let mut prev = 0u32;
        let mut j = 1;
        loop {
            let lj = l.pow(j);
            let count = orders.iter().filter(|&&o| lj % o == 0).count() as u64;
            let log = count.ilog(l);
            let r = log - prev;
            if r == 0 {
                break;
            }
            exps.push(r);
            prev = log;
            j += 1;
        }
        // exps[j-1] = r_j; the number of factors with exponent exactly j is
        // r_j - r_{j+1}
        let mut list = Vec::new();
        for (idx, &r) in exps.iter().enumerate() {
            let next = exps.get(idx + 1).copied().unwrap_or(0);
            for _ in 0..(r - next) {
                list.push(idx as u32 + 1);
            }
        }
        list.sort_unstable_by(|a, b| b.cmp(a));
        per_prime.push(list);
        primes.push(l);
    }
    let rank = per_prime.iter().map(Vec::len).max().unwrap_or(0);
    let mut out: Vec<u64> = (0..rank)
        .map(|k| {
            primes
                .iter()
                .zip(&per_prime)
                .map(|(&l, e)| e.get(k).map_or(1, |&x| l.pow(x)))
                .product()
        })
        .collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_factors_of_small_groups() {
        // Z/6
        assert_eq!(invariant_factors(&[1, 2, 3, 3, 6, 6]), vec![6]);
        // Z/2 x Z/2
        assert_eq!(invariant_factors(&[1, 2, 2, 2]), vec![2, 2]);
        // Z/2 x Z/4
        assert_eq!(invariant_factors(&[1, 2, 2, 2, 4, 4, 4, 4]), vec![2, 4]);
        assert_eq!(invariant_factors(&[1]), Vec::<u64>::new());
    }
}
