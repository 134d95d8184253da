use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;

use super::{FiniteGroup, Subgroup};
use crate::arith;
use crate::error::{Error, Result};
use crate::limits::Limits;

fn to_bits(g: &FiniteGroup, h: &Subgroup) -> FixedBitSet {
    let mut b = FixedBitSet::with_capacity(g.order());
    for &x in h.elements() {
        b.insert(x);
    }
    b
}

fn from_bits(b: &FixedBitSet) -> Subgroup {
    Subgroup::from_sorted(b.ones().collect())
}

/// Closure of a subgroup (given as bits) together with one extra element.
fn join(g: &FiniteGroup, h: &FixedBitSet, x: usize) -> FixedBitSet {
    if h.contains(x) {
        return h.clone();
    }
    let mut out = h.clone();
    let mut frontier: Vec<usize> = h.ones().collect();
    frontier.push(x);
    out.insert(x);
    let gens: Vec<usize> = {
        let mut v: Vec<usize> = h.ones().collect();
        v.push(x);
        v
    };
    while let Some(y) = frontier.pop() {
        for &s in &gens {
            let z = g.mul(y, s);
            if !out.contains(z) {
                out.insert(z);
                frontier.push(z);
            }
        }
    }
    out
}

/// Every subgroup exactly once, ordered by size and then by element list.
pub fn enumerate_subgroups(g: &FiniteGroup) -> Result<Vec<Subgroup>> {
    let limit = Limits::global().max_subgroup_order;
    if g.order() > limit {
        return Err(Error::capacity(
            "",
            format!("subgroup enumeration of a group of order {} exceeds the bound {limit}", g.order()),
            "raise FINSYLOW_MAX_SUBGROUP_ORDER or use a smaller group",
        ));
    }
    let mut cyclic: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut cyclic_gen = Vec::new();
    for x in g.elements() {
        let c = g.generated(&[x]);
        if cyclic.insert(c.elements().to_vec()) {
            cyclic_gen.push(x);
        }
    }
    let mut all: BTreeSet<FixedBitSet> = BTreeSet::new();
    let mut frontier: Vec<FixedBitSet> = Vec::new();
    for &x in &cyclic_gen {
        let b = to_bits(g, &g.generated(&[x]));
        if all.insert(b.clone()) {
            frontier.push(b);
        }
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for h in &frontier {
            for &x in &cyclic_gen {
                let j = join(g, h, x);
                if !all.contains(&j) {
                    all.insert(j.clone());
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let mut subs: Vec<Subgroup> = all.iter().map(from_bits).collect();
    subs.sort_by(|a, b| a.canonical_key().cmp(&b.canonical_key()));
    Ok(subs)
}

/// All Sylow `p`-subgroups, canonically ordered.
///
/// One Sylow subgroup is grown from the trivial group inside successive
/// normalizers; the rest are its conjugates.
pub fn sylow_subgroups(g: &FiniteGroup, p: u64) -> Result<Vec<Subgroup>> {
    if !arith::is_prime(p) {
        return Err(Error::input("", format!("{p} is not prime"), "pass a prime"));
    }
    let target = arith::p_part(g.order() as u64, p) as usize;
    let mut current = g.trivial_subgroup();
    while current.order() < target {
        let norm = g.normalizer(&current);
        let step = norm
            .elements()
            .iter()
            .copied()
            .find(|&x| !current.contains(x) && current.contains(g.pow(x, p as usize)))
            .expect("Cauchy's theorem in the normalizer quotient");
        let mut gens = current.elements().to_vec();
        gens.push(step);
        current = g.generated(&gens);
    }
    let mut all: BTreeSet<Subgroup> = BTreeSet::new();
    for x in g.elements() {
        all.insert(g.conjugate_subgroup(x, &current));
    }
    let mut out: Vec<Subgroup> = all.into_iter().collect();
    out.sort_by(|a, b| a.canonical_key().cmp(&b.canonical_key()));
    Ok(out)
}

/// Smallest `g` with `g H1 g^-1 = H2`.
pub fn are_conjugate(g: &FiniteGroup, h1: &Subgroup, h2: &Subgroup) -> Option<usize> {
    if h1.order() != h2.order() {
        return None;
    }
    g.elements().find(|&x| g.conjugate_subgroup(x, h1) == *h2)
}

/// `[H, K]`, generated by all commutators.
pub fn commutator_subgroup(g: &FiniteGroup, h: &Subgroup, k: &Subgroup) -> Subgroup {
    let mut gens = BTreeSet::new();
    for &x in h.elements() {
        for &y in k.elements() {
            gens.insert(g.commutator(x, y));
        }
    }
    let gens: Vec<usize> = gens.into_iter().collect();
    g.generated(&gens)
}

/// `G = γ1 ⊇ γ2 ⊇ ...` until it stabilises; the last entry repeats nothing.
pub fn lower_central_series(g: &FiniteGroup) -> Vec<Subgroup> {
    let whole = g.whole();
    let mut series = vec![whole.clone()];
    loop {
        let next = commutator_subgroup(g, series.last().expect("nonempty"), &whole);
        if next == *series.last().expect("nonempty") {
            break;
        }
        let done = next.order() == 1;
        series.push(next);
        if done {
            break;
        }
    }
    series
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotencyCertificate {
    pub nilpotent: bool,
    /// Lower central series; ends in the trivial group iff nilpotent.
    pub series: Vec<Subgroup>,
}

pub fn is_nilpotent_group(g: &FiniteGroup) -> NilpotencyCertificate {
    let series = lower_central_series(g);
    NilpotencyCertificate {
        nilpotent: series.last().is_some_and(|s| s.order() == 1),
        series,
    }
}
