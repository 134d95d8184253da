//! Burnside's fixed-point lemma, for finite sets and for fibrations of
//! towers `X//K(𝔾) -> 𝔾` given as tower maps.

use std::sync::Arc;

use crate::abelian::FiniteAbelianGroup;
use crate::arith;
use crate::error::{Error, Result};
use crate::groups::{image_subgroup, sylow_subgroups, FiniteGroup, Subgroup};
use crate::postnikov::TowerMap;
use crate::sylow::sylow_tower;

#[derive(Clone, Debug)]
pub struct LevelData {
    pub level: usize,
    pub kernel: FiniteAbelianGroup,
    pub cokernel: FiniteAbelianGroup,
}

/// Kernel and cokernel data of `γ` on every homotopy group.
#[derive(Clone, Debug)]
pub struct ActionFibration {
    pub projection: TowerMap,
    /// `ker(φ₁)` as a subgroup of the total base.
    pub kernel1: Subgroup,
    /// `im(φ₁)`, normal in the base.
    pub image1: Subgroup,
    pub cokernel1_order: usize,
    pub levels: Vec<LevelData>,
}

impl ActionFibration {
    /// `|ker c_n|` for `n >= 1`.
    pub fn kernel_order(&self, n: usize) -> u64 {
        if n == 1 {
            return self.kernel1.order() as u64;
        }
        self.levels.iter().find(|l| l.level == n).map_or(1, |l| l.kernel.order())
    }

    /// `|coker c_n|` for `n >= 1`.
    pub fn cokernel_order(&self, n: usize) -> u64 {
        if n == 1 {
            return self.cokernel1_order as u64;
        }
        self.levels.iter().find(|l| l.level == n).map_or(1, |l| l.cokernel.order())
    }

    /// `|π_n(F)|` of the fiber, from the long exact sequence
    /// `π_(n+1) -> coker c_(n+1) -> π_n F -> ker c_n -> 0`.
    pub fn fiber_order(&self, n: usize) -> u64 {
        self.kernel_order(n) * self.cokernel_order(n + 1)
    }

    pub fn top_level(&self) -> usize {
        self.levels.last().map_or(1, |l| l.level)
    }
}

pub fn analyze_fibration(gamma: &TowerMap) -> Result<ActionFibration> {
    let v = gamma.validate()?;
    if let Some(e) = v.error() {
        return Err(e);
    }
    let gamma = v.completed.expect("valid");
    let (e, b) = (gamma.source.base(), gamma.target.base());
    let image1 = image_subgroup(&gamma.phi1);
    if !b.is_normal(&image1) {
        return Err(Error::precondition(
            "/phi1",
            "the image of π₁ is not normal, so the level-1 cokernel is undefined",
            "the projection of an action fibration is onto a normal subgroup",
        ));
    }
    let kernel1 = e.subgroup(e.elements().filter(|&x| gamma.phi1[x] == b.identity()).collect())?;
    let cokernel1_order = b.order() / image1.order();
    let levels = gamma
        .source
        .union_levels(&gamma.target)
        .into_iter()
        .map(|level| {
            let (x, y) = (gamma.source.homotopy(level), gamma.target.homotopy(level));
            let m = gamma.matrix(level);
            LevelData {
                level,
                kernel: x.type_of(&x.kernel_elements(&y, &m)),
                cokernel: x.cokernel(&y, &m).group,
            }
        })
        .collect();
    Ok(ActionFibration {
        projection: gamma,
        kernel1,
        image1,
        cokernel1_order,
        levels,
    })
}

#[derive(Clone, Debug)]
pub struct FixedPointSection {
    pub fibration: ActionFibration,
    /// `𝔓_p -> X//K(𝔾)`.
    pub sylow: TowerMap,
    /// `s: 𝔾 -> X//K(𝔾)`.
    pub section: TowerMap,
    /// `γ ∘ s`, an equivalence.
    pub composite: TowerMap,
}

/// A homotopy fixed point: a section of `γ` up to equivalence, through the
/// Sylow tower of the total space.
pub fn homotopy_fixed_point_section(gamma: &TowerMap, p: u64) -> Result<FixedPointSection> {
    if !arith::is_prime(p) {
        return Err(Error::input("/prime", format!("{p} is not prime"), "pass a prime"));
    }
    if !gamma.target.is_p_tower(p) {
        return Err(Error::precondition(
            "/base",
            format!("the base tower is not a {p}-tower"),
            "the lemma is about actions of p-groups",
        ));
    }
    let fib = analyze_fibration(gamma)?;
    let mut levels = vec![1];
    levels.extend(fib.levels.iter().map(|l| l.level));
    for n in levels {
        for (what, order) in [("kernel", fib.kernel_order(n)), ("cokernel", fib.cokernel_order(n))] {
            if order % p == 0 {
                return Err(Error::precondition(
                    format!("/levels/{n}/{what}"),
                    format!("{p} divides |{what}(c_{n})| = {order}"),
                    format!("the fiber's homotopy groups must have order prime to {p}"),
                ));
            }
        }
    }
    let total = gamma.source.clone();
    let sylow = sylow_subgroups(total.base(), p)?.into_iter().next().expect("a Sylow subgroup exists");
    let s0 = sylow_tower(&total, p, &sylow)?;
    let down = s0.then(&fib.projection)?;
    if !down.is_equivalence() {
        return Err(Error::theory(
            "/composite",
            "the Sylow tower of the total space does not map isomorphically onto the base",
        ));
    }
    let up = down.inverse()?.then(&s0)?;
    // recompute the witnesses of the section from its tables
    let maps = up.levels.iter().map(|l| (l.level, l.matrix.clone())).collect();
    let section = TowerMap::new(up.source.clone(), up.target.clone(), up.phi1.clone(), maps, Vec::new())?;
    let composite = section.then(&fib.projection)?;
    if !composite.is_equivalence() || !composite.validate()?.is_valid() {
        return Err(Error::theory("/section", "γ ∘ s is not an equivalence"));
    }
    Ok(FixedPointSection {
        fibration: fib,
        sylow: s0,
        section,
        composite,
    })
}

/// A finite set with a left action, `action[g][x] = g·x`.
#[derive(Clone, Debug)]
pub struct GSet {
    group: Arc<FiniteGroup>,
    action: Vec<Vec<usize>>,
}

fn is_permutation(row: &[usize]) -> bool {
    let mut seen = vec![false; row.len()];
    row.iter().all(|&x| x < row.len() && !std::mem::replace(&mut seen[x], true))
}

impl GSet {
    pub fn new(group: Arc<FiniteGroup>, action: Vec<Vec<usize>>) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::input(
                "/action",
                format!("{} permutations for a group of order {}", action.len(), group.order()),
                "give one permutation per group element",
            ));
        }
        let n = action.first().map_or(0, Vec::len);
        for (g, row) in action.iter().enumerate() {
            if row.len() != n || !is_permutation(row) {
                return Err(Error::input(format!("/action/{g}"), "not a permutation of the set", "list g·x for every x"));
            }
        }
        if action[group.identity()].iter().enumerate().any(|(x, &y)| x != y) {
            return Err(Error::input("/action", "the identity moves a point", "the identity must act trivially"));
        }
        for g in group.elements() {
            for h in group.elements() {
                let gh = group.mul(g, h);
                if let Some(x) = (0..n).find(|&x| action[gh][x] != action[g][action[h][x]]) {
                    return Err(Error::input(
                        format!("/action/{gh}/{x}"),
                        format!("(g h)·x != g·(h·x) for g = {g}, h = {h}"),
                        "the permutations must form a homomorphism",
                    ));
                }
            }
        }
        Ok(GSet { group, action })
    }

    /// From permutations of generators.
    pub fn from_generators(group: Arc<FiniteGroup>, size: usize, gens: &[usize], perms: &[Vec<usize>]) -> Result<Self> {
        if let Some(i) = perms.iter().position(|r| r.len() != size || !is_permutation(r)) {
            return Err(Error::input(format!("/generators/{i}"), "not a permutation of the set", "list g·x for every x"));
        }
        let id: Vec<usize> = (0..size).collect();
        let action = group
            .extend_from_generators(gens, perms, id, |a, b| b.iter().map(|&x| a[x]).collect())
            .ok_or_else(|| {
                Error::input("/generators", "the permutations do not define an action", "check the relations of the group")
            })?;
        Self::new(group, action)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.action.first().map_or(0, Vec::len)
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.size()).filter(|&x| self.action.iter().all(|row| row[x] == x)).collect()
    }

    /// Orbits, each sorted, in order of smallest element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size()];
        let mut out = Vec::new();
        for x in 0..self.size() {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = self.action.iter().map(|row| row[x]).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push(orbit);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointReport {
    pub prime: u64,
    pub size: usize,
    pub fixed: Vec<usize>,
    /// `|X| ≡ |X^G| (mod p)`.
    pub congruent: bool,
}

/// Fixed points of a `p`-group action with the orbit-counting congruence.
pub fn orbit_congruence(x: &GSet, p: u64) -> Result<FixedPointReport> {
    if !arith::is_prime(p) || !arith::is_p_power(x.group.order() as u64, p) {
        return Err(Error::precondition(
            "/group",
            format!("{} is not a {p}-group", x.group.name()),
            "the congruence needs a p-group",
        ));
    }
    let fixed = x.fixed_points();
    let congruent = (x.size() as u64) % p == (fixed.len() as u64) % p;
    Ok(FixedPointReport {
        prime: p,
        size: x.size(),
        fixed,
        congruent,
    })
}

/// Burnside: a `p`-group acting on a set of size prime to `p` has a fixed
/// point.
pub fn finite_gset_fixed_points(x: &GSet, p: u64) -> Result<FixedPointReport> {
    if x.size() as u64 % p == 0 {
        return Err(Error::precondition(
            "/set",
            format!("|X| = {} is divisible by {p}", x.size()),
            "the lemma needs a set of size prime to p",
        ));
    }
    let r = orbit_congruence(x, p)?;
    if r.fixed.is_empty() || !r.congruent {
        return Err(Error::theory("/set", "a p-group action on a set of size prime to p has no fixed point"));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmodule::GModule;
    use crate::groups::parse_builtin;
    use crate::postnikov::PostnikovTower;

    fn group(spec: &str) -> Arc<FiniteGroup> {
        Arc::new(parse_builtin(spec).unwrap())
    }

    /// `B(Z/n) -> B(Z/m)` by reduction, with `π₂` of the source optional.
    fn reduction(n: usize, m: usize, pi2: Option<u64>) -> TowerMap {
        let zn = group(&format!("cyclic:{n}"));
        let src = match pi2 {
            Some(k) => PostnikovTower::make_kag(&GModule::trivial(zn.clone(), FiniteAbelianGroup::cyclic(k)), 2).unwrap(),
            None => PostnikovTower::make_bg(zn.clone()),
        };
        let tgt = PostnikovTower::make_bg(group(&format!("cyclic:{m}")));
        TowerMap::new(Arc::new(src), Arc::new(tgt), zn.elements().map(|x| x % m).collect(), vec![], vec![]).unwrap()
    }

    #[test]
    fn analyze_examples() {
        let t = Arc::new(PostnikovTower::make_bg(group("cyclic:4")));
        let f = analyze_fibration(&TowerMap::identity(&t)).unwrap();
        assert_eq!((f.kernel_order(1), f.cokernel_order(1)), (1, 1));
        let f = analyze_fibration(&reduction(6, 2, Some(3))).unwrap();
        assert_eq!(f.kernel_order(1), 3);
        assert_eq!(f.kernel_order(2), 3);
        assert_eq!(f.cokernel_order(2), 1);
        let z2 = Arc::new(PostnikovTower::make_bg(group("cyclic:2")));
        let z4 = Arc::new(PostnikovTower::make_bg(group("cyclic:4")));
        let inc = TowerMap::new(z2, z4, vec![0, 2], vec![], vec![]).unwrap();
        assert_eq!(analyze_fibration(&inc).unwrap().cokernel_order(1), 2);
    }

    #[test]
    fn sections() {
        let s = homotopy_fixed_point_section(&reduction(6, 2, Some(3)), 2).unwrap();
        assert!(s.composite.is_equivalence());
        assert_eq!(s.sylow.source.base().order(), 2);
        let e = homotopy_fixed_point_section(&reduction(4, 2, None), 2).unwrap_err();
        assert_eq!(e.location(), "/levels/1/kernel");
    }

    #[test]
    fn gsets() {
        let z2 = group("cyclic:2");
        let x = GSet::from_generators(z2, 3, &[1], &[vec![1, 0, 2]]).unwrap();
        assert_eq!(finite_gset_fixed_points(&x, 2).unwrap().fixed, vec![2]);
        let z3 = group("cyclic:3");
        let x = GSet::from_generators(z3.clone(), 5, &[1], &[vec![1, 2, 0, 3, 4]]).unwrap();
        let r = finite_gset_fixed_points(&x, 3).unwrap();
        assert_eq!(r.fixed, vec![3, 4]);
        assert!(r.congruent);
        let triv = GSet::new(z3, vec![vec![0, 1], vec![0, 1], vec![0, 1]]).unwrap();
        assert_eq!(triv.fixed_points(), vec![0, 1]);
        assert!(GSet::from_generators(group("cyclic:2"), 3, &[1], &[vec![1, 2, 0]]).is_err());
    }
}
