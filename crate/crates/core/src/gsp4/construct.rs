//! Construction of the named subgroups: the block group `Delta ⋊ Z/2`,
//! its two index-3 subgroups at `p = 3`, and the two classes of subgroups
//! of order 480 in `GSp4(F_3)`.

use std::collections::{BTreeMap, HashSet};
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::census::full_histogram;
use super::subgroup::{closure_elements, SubgroupTable};
use super::{GroupError, GroupLabel, Gsp4, Mat};

/// A `2x2` matrix `[a, b, c, d]` (row major) over `F_p`.
pub type Mat2 = [u8; 4];

/// `diag(A, B) * S^swap`, with `A` acting on `span(e1, f1)`, `B` on
/// `span(e2, f2)` and `S` exchanging the two planes.
pub fn embed_block(g: &Gsp4, a: Mat2, b: Mat2, swap: bool) -> u64 {
    let mut d: Mat = [0; 16];
    let (i1, i2) = (0usize, 2usize);
    d[4 * i1 + i1] = a[0];
    d[4 * i1 + i2] = a[1];
    d[4 * i2 + i1] = a[2];
    d[4 * i2 + i2] = a[3];
    let (j1, j2) = (1usize, 3usize);
    d[4 * j1 + j1] = b[0];
    d[4 * j1 + j2] = b[1];
    d[4 * j2 + j1] = b[2];
    d[4 * j2 + j2] = b[3];
    if swap {
        let mut s: Mat = [0; 16];
        s[4] = 1; // e1 -> e2
        s[1] = 1; // e2 -> e1
        s[4 * 3 + 2] = 1; // f1 -> f2
        s[4 * 2 + 3] = 1; // f2 -> f1
        d = g.mat_mul(&d, &s);
    }
    g.pack(&d)
}

/// Transvection generators of `Sp4(F_p)`.
pub fn sp4_generators(g: &Gsp4) -> Vec<u64> {
    let vs: [[u8; 4]; 6] = [
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [1, 1, 0, 0],
        [0, 1, 1, 0],
    ];
    vs.iter().map(|v| g.transvection(v)).collect()
}

/// Generators of `GSp4(F_p)`: `Sp4` plus `diag(1, 1, 2, 2)`; 2 generates
/// the units mod 3 and mod 5.
pub fn gsp4_generators(g: &Gsp4) -> Vec<u64> {
    let mut gens = sp4_generators(g);
    gens.push(g.similitude_diag(2));
    gens
}

/// `GSp4(F_p)`; elements are listed for `p = 3` only.
pub fn full_group(g: &Gsp4) -> Result<SubgroupTable, GroupError> {
    let gens = gsp4_generators(g);
    if g.p() == 3 {
        let t = SubgroupTable::closure(g, &gens, g.order() as usize)?;
        Ok(t.with_label(GroupLabel::Full))
    } else {
        Ok(SubgroupTable::from_census(g, gens, full_histogram(g.p())?))
    }
}

/// `Delta ⋊ Z/2` with `Delta = {(A, B) in GL2(F_p)^2 : det A = det B}`.
pub fn build_block_group(g: &Gsp4) -> Result<SubgroupTable, GroupError> {
    let p = g.p() as u8;
    let id: Mat2 = [1, 0, 0, 1];
    let upper: Mat2 = [1, 1, 0, 1];
    let lower: Mat2 = [1, 0, 1, 1];
    let unit: Mat2 = [1, 0, 0, 2];
    let gens = vec![
        embed_block(g, upper, id, false),
        embed_block(g, lower, id, false),
        embed_block(g, id, upper, false),
        embed_block(g, id, lower, false),
        embed_block(g, unit, unit, false),
        embed_block(g, id, id, true),
    ];
    let gl2 = (p as u64 * p as u64 - 1) * (p as u64 * p as u64 - p as u64);
    let expected = gl2 * gl2 / (p as u64 - 1) * 2;
    let t = SubgroupTable::closure(g, &gens, expected as usize)?;
    let label = if p == 3 { GroupLabel::G2304 } else { GroupLabel::G115200 };
    if t.order() != expected {
        return Err(GroupError::StructureMismatch(format!(
            "block group has order {}, expected {expected}",
            t.order()
        )));
    }
    Ok(t.with_label(label))
}

fn is_power_of_two(n: u64) -> bool {
    n.is_power_of_two()
}

/// A Sylow 2-subgroup of the listed group, as a generator list, grown
/// greedily through the sorted element list.
fn sylow2_generators(g: &Gsp4, elements: &[u64], target: u64) -> Vec<u64> {
    let mut gens: Vec<u64> = Vec::new();
    let mut current: HashSet<u64> = HashSet::from([g.identity()]);
    for &x in elements {
        if current.len() as u64 == target {
            break;
        }
        if current.contains(&x) || !is_power_of_two(g.order_of(x) as u64) {
            continue;
        }
        let mut trial = gens.clone();
        trial.push(x);
        if let Ok(els) = closure_elements(g, &trial, target as usize) {
            if is_power_of_two(els.len() as u64) {
                gens = trial;
                current = els.into_iter().collect();
            }
        }
    }
    gens
}

/// The two subgroups of index 3 in `G2304`, as `[G768, G'768]`.
///
/// Every such subgroup contains a conjugate of a fixed Sylow 2-subgroup
/// `P`, so the candidates `<P, t>` for `t` of order 3 exhaust them up to
/// conjugacy. They are told apart by the abelianization of their
/// intersection with `Sp4(F_3)`: `Z/6` for `G768`, `Z/2` for `G'768`.
pub fn index3_subgroups(g2304: &SubgroupTable) -> Result<[SubgroupTable; 2], GroupError> {
    let g = *g2304.context();
    let elements = g2304
        .elements()
        .ok_or_else(|| GroupError::StructureMismatch("G2304 must be listed".into()))?;
    let target = 768u64;
    let sylow = sylow2_generators(&g, elements, 256);
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut by_invariant: BTreeMap<Vec<u64>, SubgroupTable> = BTreeMap::new();
    for &t in elements {
        if g.order_of(t) != 3 {
            continue;
        }
        let mut gens = sylow.clone();
        gens.push(t);
        let Ok(els) = closure_elements(&g, &gens, target as usize) else {
            continue;
        };
        if els.len() as u64 != target || !seen.insert(els.clone()) {
            continue;
        }
        let h = SubgroupTable::from_elements(&g, gens, els);
        let inter = h.intersect_sp4();
        if inter.order() != 384 {
            return Err(GroupError::StructureMismatch(format!(
                "index-3 subgroup meets Sp4 in {} elements",
                inter.order()
            )));
        }
        by_invariant.entry(inter.abelian_invariants()).or_insert(h);
    }
    if by_invariant.len() != 2 {
        return Err(GroupError::StructureMismatch(format!(
            "expected two classes of index-3 subgroups, found invariants {:?}",
            by_invariant.keys().collect::<Vec<_>>()
        )));
    }
    let g768 = by_invariant.remove(&vec![6]);
    let g768p = by_invariant.remove(&vec![2]);
    match (g768, g768p) {
        (Some(a), Some(b)) => Ok([a.with_label(GroupLabel::G768), b.with_label(GroupLabel::G768Prime)]),
        _ => Err(GroupError::StructureMismatch(
            "index-3 subgroups do not have abelianizations Z/6 and Z/2".into(),
        )),
    }
}

/// Randomized search for the two classes of order-480 subgroups of
/// `GSp4(F_3)`, returned as `[G480, G'480]` and labeled by orbit signature
/// (`{20, 20}` and `{40}`).
///
/// Each such group normalizes a perfect subgroup generated by two elements
/// of order 5, so the search draws a random pair of conjugate 5-elements,
/// computes the normalizer of the group they generate, and closes the pair
/// together with random elements of that normalizer.
pub fn find_order480(full: &SubgroupTable, seed: u64) -> Result<[SubgroupTable; 2], GroupError> {
    const BUDGET: usize = 4000;
    const EXTENSIONS: usize = 24;
    let g = *full.context();
    let elements = full
        .elements()
        .filter(|_| g.p() == 3)
        .ok_or_else(|| GroupError::StructureMismatch("needs the listed GSp4(F_3)".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: [Option<SubgroupTable>; 2] = [None, None];
    for _ in 0..BUDGET {
        let z = elements[rng.gen_range(0..elements.len())];
        let o = g.order_of(z);
        if o % 5 != 0 {
            continue;
        }
        let x = (0..o / 5).fold(g.identity(), |acc, _| g.mul(acc, z));
        let c = elements[rng.gen_range(0..elements.len())];
        let y = g.mul(g.mul(c, x), g.inverse(c));
        let Ok(core) = closure_elements(&g, &[x, y], 240) else {
            continue;
        };
        if core.len() < 60 {
            continue;
        }
        let members: HashSet<u64> = core.iter().copied().collect();
        let normalizer: Vec<u64> = elements
            .iter()
            .copied()
            .filter(|&n| {
                let ni = g.inverse(n);
                members.contains(&g.mul(g.mul(n, x), ni)) && members.contains(&g.mul(g.mul(n, y), ni))
            })
            .collect();
        for _ in 0..EXTENSIONS {
            let mut gens = vec![x, y];
            for _ in 0..rng.gen_range(1..=2) {
                gens.push(normalizer[rng.gen_range(0..normalizer.len())]);
            }
            let Ok(els) = closure_elements(&g, &gens, 480) else {
                continue;
            };
            if els.len() != 480 {
                continue;
            }
            let h = SubgroupTable::from_elements(&g, gens, els);
            let slot = match h.orbits_mod_sign() {
                [20, 20] => 0,
                [40] => 1,
                _ => continue,
            };
            if found[slot].is_none() {
                let label = if slot == 0 { GroupLabel::G480 } else { GroupLabel::G480Prime };
                found[slot] = Some(h.with_label(label));
            }
            if let [Some(a), Some(b)] = &found {
                return Ok([a.clone(), b.clone()]);
            }
        }
    }
    Err(GroupError::SearchExhausted(BUDGET))
}

/// The candidate images for the classifier: the full group and the named
/// subgroups for `p`.
#[derive(Debug, Clone)]
pub struct CandidateTables {
    pub p: u64,
    pub tables: Vec<SubgroupTable>,
}

impl CandidateTables {
    pub fn build(p: u64, seed: u64) -> Result<CandidateTables, GroupError> {
        let g = Gsp4::new(p)?;
        let full = full_group(&g)?;
        let block = build_block_group(&g)?;
        let mut tables = Vec::new();
        if p == 3 {
            let [g768, g768p] = index3_subgroups(&block)?;
            let [g480, g480p] = find_order480(&full, seed)?;
            tables.extend([full, block, g768, g768p, g480, g480p]);
        } else {
            tables.extend([full, block]);
        }
        Ok(CandidateTables { p, tables })
    }

    /// Tables for seed 0, built once per process.
    pub fn cached(p: u64) -> Result<&'static CandidateTables, GroupError> {
        static T3: OnceLock<Result<CandidateTables, GroupError>> = OnceLock::new();
        static T5: OnceLock<Result<CandidateTables, GroupError>> = OnceLock::new();
        let cell = match p {
            3 => &T3,
            5 => &T5,
            _ => return Err(GroupError::UnsupportedP(p)),
        };
        cell.get_or_init(|| CandidateTables::build(p, 0)).as_ref().map_err(Clone::clone)
    }

    pub fn get(&self, label: GroupLabel) -> Option<&SubgroupTable> {
        self.tables.iter().find(|t| t.label() == label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sp4_generators_generate_sp4_f3() {
        let g = Gsp4::new(3).unwrap();
        let t = SubgroupTable::closure(&g, &sp4_generators(&g), 60_000).unwrap();
        assert_eq!(t.order(), 51_840);
    }

    #[test]
    fn block_group_p3() {
        let g = Gsp4::new(3).unwrap();
        let b = build_block_group(&g).unwrap();
        assert_eq!(b.order(), 2304);
        assert_eq!(b.orbits_mod_sign(), &[8, 32]);
        assert!(b.similitude_surjective());
    }
}
