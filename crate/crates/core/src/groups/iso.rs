use super::FiniteGroup;
use crate::error::{Error, Result};
use crate::limits::Limits;

fn order_profile(g: &FiniteGroup) -> Vec<usize> {
    let mut v: Vec<usize> = g.elements().map(|x| g.element_order(x)).collect();
    v.sort_unstable();
    v
}

/// An isomorphism `G1 -> G2` as a table, or `None`.
///
/// Backtracks over images of a greedy generating set of `G1`, trying
/// candidates in ascending index among elements of matching order.
pub fn find_isomorphism(g1: &FiniteGroup, g2: &FiniteGroup) -> Result<Option<Vec<usize>>> {
    let limit = Limits::global().max_isomorphism_order;
    if g1.order().max(g2.order()) > limit {
        return Err(Error::capacity(
            "",
            format!("isomorphism search above order {limit}"),
            "raise FINSYLOW_MAX_ISO_ORDER or compare smaller groups",
        ));
    }
    if g1.order() != g2.order() || order_profile(g1) != order_profile(g2) {
        return Ok(None);
    }
    let gens = g1.generators();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            let k = g1.element_order(s);
            g2.elements().filter(|&y| g2.element_order(y) == k).collect()
        })
        .collect();
    let mut images = Vec::with_capacity(gens.len());
    Ok(search(g1, g2, &gens, &candidates, &mut images))
}

fn search(
    g1: &FiniteGroup,
    g2: &FiniteGroup,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    if images.len() == gens.len() {
        let table = g1.extend_from_generators(gens, images, g2.identity(), |a, b| g2.mul(*a, *b))?;
        let mut hit = vec![false; g2.order()];
        for &y in &table {
            if hit[y] {
                return None;
            }
            hit[y] = true;
        }
        return Some(table);
    }
    for &c in &candidates[images.len()] {
        images.push(c);
        // prune: the partial assignment must already extend consistently
        let sub = &gens[..images.len()];
        let consistent = g1
            .extend_partial(sub, images, g2.identity(), |a, b| g2.mul(*a, *b))
            .is_some();
        if consistent {
            if let Some(t) = search(g1, g2, gens, candidates, images) {
                return Some(t);
            }
        }
        images.pop();
    }
    None
}
