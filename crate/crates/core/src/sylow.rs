//! Sylow maps of towers: construction, enumeration, factorization of maps
//! out of `p`-towers, conjugacy, and the normality obstruction.

use std::sync::Arc;

use rayon::prelude::*;

use crate::abelian::{compose_maps, FiniteAbelianGroup};
use crate::arith;
use crate::cohomology::{coprime_witness, Cochain};
use crate::error::{Error, Result};
use crate::gmodule::{primary_decompose, restrict_along, GModule};
use crate::groups::{are_conjugate, image_subgroup, sylow_subgroups, FiniteGroup, Subgroup};
use crate::linalg::Matrix;
use crate::postnikov::{LevelMap, PostnikovTower, Stage, TowerMap};

fn serre_violation(level: usize, detail: &str) -> Error {
    Error::theory(
        format!("/levels/{level}"),
        format!(
            "the prime-to-p part of k does not bound over the Sylow subgroup ({detail}); \
             Serre vanishing guarantees it does"
        ),
    )
}

/// The `p`-Sylow tower over `P` and its inclusion into `t`.
///
/// The source has base `P`, modules `(M_m)_p` restricted to `P` and
/// `k' = proj_p(res k)`. At each level the witness is `-incl_c β` where
/// `δβ = proj_c(res k)`, which exists because `|P|` is prime to `M^(p)`.
pub fn sylow_tower(t: &Arc<PostnikovTower>, p: u64, sylow: &Subgroup) -> Result<TowerMap> {
    let g = t.base();
    let p_part = arith::p_part(g.order() as u64, p) as usize;
    if !arith::is_prime(p) || sylow.order() != p_part || g.subgroup(sylow.elements().to_vec()).is_err() {
        return Err(Error::precondition(
            "/sylow",
            format!("not a Sylow {p}-subgroup of {}", g.name()),
            "pick one of sylow_subgroups(π₁, p)",
        ));
    }
    let (pg, emb) = g.subgroup_as_group(sylow);
    let pg = Arc::new(pg.with_name(format!("Syl{p}({})", g.name())));
    let mut stages = Vec::new();
    let mut levels = Vec::new();
    for s in t.stages() {
        let m = s.level;
        let d = primary_decompose(&s.module, p);
        let ap = restrict_along(&d.p_part, &pg, &emb);
        let cp = restrict_along(&d.prime_to_p, &pg, &emb);
        let mres = restrict_along(&s.module, &pg, &emb);
        let kres = s.k.pull_back(&mres, &emb)?;
        let kp = kres.push_forward(&ap, &d.proj_p);
        let z = kres.push_forward(&cp, &d.proj_c);
        let witness = if z.is_zero() {
            Cochain::zero(&mres, m)?
        } else {
            let beta = coprime_witness(&z).map_err(|e| serre_violation(m, &e.to_string()))?;
            beta.push_forward(&mres, &d.incl_c).neg()
        };
        if !ap.is_zero_module() {
            stages.push(Stage {
                level: m,
                module: ap,
                k: kp,
            });
        }
        levels.push(LevelMap {
            level: m,
            matrix: d.incl_p.clone(),
            witness: Some(witness),
        });
    }
    let name = format!("Syl{p}({})", t.name());
    let source = Arc::new(PostnikovTower::new(name, pg, stages)?);
    let map = TowerMap {
        source,
        target: t.clone(),
        phi1: emb,
        levels,
    };
    let v = map.validate()?;
    if !v.is_valid() {
        return Err(Error::theory("/sylow", "the constructed Sylow inclusion fails validation"));
    }
    Ok(map)
}

/// Whether `m` is a `p`-Sylow map: a `p`-tower source and, on every
/// homotopy group, an injection onto a Sylow `p`-subgroup.
pub fn sylow_map_defect(m: &TowerMap, p: u64) -> Option<String> {
    if !m.source.is_p_tower(p) {
        return Some(format!("the source is not a {p}-tower"));
    }
    let g = m.target.base();
    let im = image_subgroup(&m.phi1);
    if im.order() != m.source.base().order() || im.order() as u64 != arith::p_part(g.order() as u64, p) {
        return Some(format!("π₁ is not mapped onto a Sylow {p}-subgroup"));
    }
    for level in m.source.union_levels(&m.target) {
        let (a, b) = (m.source.homotopy(level), m.target.homotopy(level));
        let mat = m.matrix(level);
        if !a.is_injective(&b, &mat) || a.order() != arith::p_part(b.order(), p) {
            return Some(format!("π_{level} is not mapped onto the Sylow {p}-subgroup"));
        }
    }
    None
}

fn require_sylow(m: &TowerMap, p: u64, at: &str) -> Result<()> {
    match sylow_map_defect(m, p) {
        Some(why) => Err(Error::precondition(at, why, format!("pass {p}-Sylow maps, e.g. from enumerate_sylow_maps"))),
        None => Ok(()),
    }
}

#[derive(Clone, Debug)]
pub struct SylowMapSet {
    pub prime: u64,
    pub target: Arc<PostnikovTower>,
    pub subgroups: Vec<Subgroup>,
    pub maps: Vec<TowerMap>,
}

impl SylowMapSet {
    pub fn count(&self) -> usize {
        self.maps.len()
    }
}

/// One Sylow map per Sylow subgroup of π₁, in canonical subgroup order.
pub fn enumerate_sylow_maps(t: &Arc<PostnikovTower>, p: u64) -> Result<SylowMapSet> {
    let subgroups = sylow_subgroups(t.base(), p)?;
    let maps = subgroups
        .par_iter()
        .map(|s| sylow_tower(t, p, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(SylowMapSet {
        prime: p,
        target: t.clone(),
        subgroups,
        maps,
    })
}

/// `f = s ∘ g` with `s` a Sylow map.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub lift: TowerMap,
    pub sylow: TowerMap,
    pub composite: TowerMap,
    /// Per level, `h` with `δh = b_composite - b_f`.
    pub homotopies: Vec<(usize, Cochain)>,
}

/// Factor a map out of a `p`-tower through the smallest Sylow subgroup
/// containing the image of π₁.
pub fn factor_through_sylow(f: &TowerMap, p: u64) -> Result<Factorization> {
    if !f.source.is_p_tower(p) {
        return Err(Error::precondition(
            "/source",
            format!("the source of the map is not a {p}-tower"),
            "factorization through a Sylow map needs a p-tower source",
        ));
    }
    let v = f.validate()?;
    if let Some(e) = v.error() {
        return Err(e);
    }
    let f = v.completed.expect("valid");
    let g = f.target.base();
    let im = image_subgroup(&f.phi1);
    let sylows = sylow_subgroups(g, p)?;
    let chosen = sylows
        .iter()
        .find(|s| im.is_subset_of(s))
        .ok_or_else(|| Error::theory("/phi1", "a p-subgroup lies in no Sylow subgroup"))?;
    let s = sylow_tower(&f.target, p, chosen)?;
    let els = chosen.elements();
    let phi1: Vec<usize> = f.phi1.iter().map(|&x| els.binary_search(&x).expect("image inside P")).collect();
    let mut levels = Vec::new();
    let source = f.source.clone();
    for level in source.union_levels(&s.source) {
        let d = primary_decompose(&f.target.module(level), p);
        let ap = s.source.homotopy(level);
        let matrix = compose_maps(&ap, &d.proj_p, &f.matrix(level));
        let n = s.source.module(level).pullback(source.base().clone(), &phi1);
        let witness = f.witness(level)?.push_forward(&n, &d.proj_p);
        levels.push(LevelMap {
            level,
            matrix,
            witness: Some(witness),
        });
    }
    let lift = TowerMap {
        source,
        target: s.source.clone(),
        phi1,
        levels,
    };
    if !lift.validate()?.is_valid() {
        return Err(Error::theory("/lift", "the lift to the Sylow tower fails validation"));
    }
    let composite = lift.then(&s)?;
    if !composite.same_tables(&f) {
        return Err(Error::theory("/composite", "the composite differs from the map on homotopy groups"));
    }
    let mut homotopies = Vec::new();
    for (level, h) in composite.witness_homotopies(&f)? {
        let h = h.ok_or_else(|| serre_violation(level, "witnesses of the composite and the map differ by a class"))?;
        homotopies.push((level, h));
    }
    Ok(Factorization {
        lift,
        sylow: s,
        composite,
        homotopies,
    })
}

/// Matrix of `x -> y` where `into(y) = f(x)`, for an injective `into`.
fn lift_through(
    a: &FiniteAbelianGroup,
    b: &FiniteAbelianGroup,
    into: &Matrix<i64>,
    target: &FiniteAbelianGroup,
    f: impl Fn(&[i64]) -> Vec<i64>,
) -> Option<Matrix<i64>> {
    let images: Vec<(Vec<i64>, Vec<i64>)> = b.elements().into_iter().map(|y| (b.apply(target, into, &y), y)).collect();
    let mut out = Matrix::zeros(b.rank(), a.rank());
    for (j, e) in a.generators().into_iter().enumerate() {
        let want = f(&e);
        let (_, y) = images.iter().find(|(img, _)| *img == want)?;
        for i in 0..b.rank() {
            out[(i, j)] = y[i];
        }
    }
    Some(out)
}

/// Self-equivalence of `t` given by conjugation with `g`: `x -> g x g⁻¹` on
/// π₁ and the action of `g` on each module.
pub fn conjugation_map(t: &Arc<PostnikovTower>, g: usize) -> Result<TowerMap> {
    let base = t.base();
    let phi1 = base.elements().map(|x| base.conjugate(g, x)).collect();
    let maps = t.stages().iter().map(|s| (s.level, s.module.action(g).clone())).collect();
    TowerMap::new(t.clone(), t.clone(), phi1, maps, Vec::new())
}

#[derive(Clone, Debug)]
pub struct ConjugacyWitness {
    pub element: usize,
    pub conjugation: TowerMap,
    /// `e: source(m1) -> source(m2)` with `m2 ∘ e ≃ c_g ∘ m1`.
    pub equivalence: TowerMap,
    /// Per level, `h` with `δh = b(c_g ∘ m1) - b(m2 ∘ e)`.
    pub homotopies: Vec<(usize, Cochain)>,
}

/// Conjugate two `p`-Sylow maps into the same tower.
pub fn are_conjugate_sylow_maps(m1: &TowerMap, m2: &TowerMap, p: u64) -> Result<Option<ConjugacyWitness>> {
    require_sylow(m1, p, "/maps/0")?;
    require_sylow(m2, p, "/maps/1")?;
    if *m1.target != *m2.target {
        return Err(Error::precondition("/maps", "the maps have different targets", "compare Sylow maps into one tower"));
    }
    let t = m1.target.clone();
    let g = t.base();
    let (im1, im2) = (image_subgroup(&m1.phi1), image_subgroup(&m2.phi1));
    let Some(x) = are_conjugate(g, &im1, &im2) else {
        return Ok(None);
    };
    let cg = conjugation_map(&t, x)?;
    let mut inv2 = vec![usize::MAX; g.order()];
    for (i, &y) in m2.phi1.iter().enumerate() {
        inv2[y] = i;
    }
    let phi1: Vec<usize> = m1.phi1.iter().map(|&y| inv2[g.conjugate(x, y)]).collect();
    let (s1, s2) = (m1.source.clone(), m2.source.clone());
    let mut maps = Vec::new();
    for level in s1.union_levels(&s2) {
        let (a, b, c) = (s1.homotopy(level), s2.homotopy(level), t.homotopy(level));
        let (f1, f2) = (m1.matrix(level), m2.matrix(level));
        let act = t.module(level).action(x).clone();
        let e = lift_through(&a, &b, &f2, &c, |v| c.apply(&c, &act, &a.apply(&c, &f1, v)))
            .ok_or_else(|| Error::theory(format!("/levels/{level}"), "conjugate Sylow images differ"))?;
        maps.push((level, e));
    }
    let mut e = TowerMap::new(s1.clone(), s2.clone(), phi1, maps, Vec::new())?;
    // adjust the witness of e so the square commutes up to a coboundary:
    // the A_p part of the discrepancy is absorbed into e, the rest bounds
    let left = m1.then(&cg)?;
    let right = e.then(m2)?;
    if !left.same_tables(&right) {
        return Err(Error::theory("/square", "the conjugation square does not commute on homotopy groups"));
    }
    for lm in &mut e.levels {
        let level = lm.level;
        let diff = left.witness(level)?.sub(&right.witness(level)?);
        if diff.is_zero() {
            continue;
        }
        let d = primary_decompose(&t.module(level), p);
        let b = s2.homotopy(level);
        let onto = compose_maps(d.p_part.abelian(), &d.proj_p, &m2.matrix(level));
        let back = b
            .invert(d.p_part.abelian(), &onto)
            .ok_or_else(|| Error::theory(format!("/levels/{level}"), "Sylow map is not onto the p-part"))?;
        let r = compose_maps(&b, &back, &d.proj_p);
        let n = s2.module(level).pullback(s1.base().clone(), &e.phi1);
        let fix = diff.push_forward(&n, &r);
        let w = lm.witness.take().expect("completed");
        lm.witness = Some(w.add(&fix));
    }
    if !e.validate()?.is_valid() || !e.is_equivalence() {
        return Err(Error::theory("/equivalence", "the induced map of Sylow towers is not a valid equivalence"));
    }
    let right = e.then(m2)?;
    let mut homotopies = Vec::new();
    for (level, h) in left.witness_homotopies(&right)? {
        let h = h.ok_or_else(|| serre_violation(level, "the conjugation square does not commute up to homotopy"))?;
        homotopies.push((level, h));
    }
    Ok(Some(ConjugacyWitness {
        element: x,
        conjugation: cg,
        equivalence: e,
        homotopies,
    }))
}

#[derive(Clone, Debug)]
pub struct LevelNormality {
    pub level: usize,
    pub trivial_action: bool,
    /// `(h, a)` with `h` in the image of π₁ and `h·a != a` for `a ∈ M^(p)`.
    pub witness: Option<(usize, Vec<i64>)>,
}

#[derive(Clone, Debug)]
pub enum QuotientOutcome {
    /// A necessary condition fails.
    Obstructed,
    /// The necessary conditions hold but some `k` is nonzero.
    Undecided,
    /// `T // P` with the quotient map; `exact` records the levelwise check
    /// that the kernel of the quotient map is the image of the Sylow map.
    Constructed { tower: Arc<PostnikovTower>, map: TowerMap, exact: bool },
}

#[derive(Clone, Debug)]
pub struct NormalityReport {
    pub prime: u64,
    pub pi1_normal: bool,
    /// `(g, x)` with `x` in the image and `g x g⁻¹` outside it.
    pub pi1_witness: Option<(usize, usize)>,
    pub levels: Vec<LevelNormality>,
    pub quotient: QuotientOutcome,
}

impl NormalityReport {
    pub fn obstructed(&self) -> bool {
        !self.pi1_normal || self.levels.iter().any(|l| !l.trivial_action)
    }
}

/// The necessary conditions for a Sylow map to be normal, plus the
/// quotient tower when they hold and the target is split.
pub fn normality_obstruction(s: &TowerMap, p: u64) -> Result<NormalityReport> {
    require_sylow(s, p, "/map")?;
    let t = &s.target;
    let g = t.base();
    let im = image_subgroup(&s.phi1);
    let pi1_witness = g
        .elements()
        .flat_map(|x| im.elements().iter().map(move |&y| (x, y)))
        .find(|&(x, y)| !im.contains(g.conjugate(x, y)));
    let mut levels = Vec::new();
    for st in t.stages() {
        let d = primary_decompose(&st.module, p);
        let a = st.module.abelian();
        let witness = im.elements().iter().find_map(|&h| {
            d.prime_to_p.abelian().generators().into_iter().find_map(|c| {
                let x = d.prime_to_p.abelian().apply(a, &d.incl_c, &c);
                (st.module.act(h, &x) != x).then_some((h, x))
            })
        });
        levels.push(LevelNormality {
            level: st.level,
            trivial_action: witness.is_none(),
            witness,
        });
    }
    let mut report = NormalityReport {
        prime: p,
        pi1_normal: pi1_witness.is_none(),
        pi1_witness,
        levels,
        quotient: QuotientOutcome::Obstructed,
    };
    if report.obstructed() {
        return Ok(report);
    }
    if !t.is_split() {
        report.quotient = QuotientOutcome::Undecided;
        return Ok(report);
    }
    let (q, proj) = g.quotient(&im)?;
    let q = Arc::new(q);
    let reps = g.coset_representatives(&im);
    let mut stages = Vec::new();
    let mut maps = Vec::new();
    for st in t.stages() {
        let d = primary_decompose(&st.module, p);
        let c = d.prime_to_p.clone();
        if c.is_zero_module() {
            maps.push((st.level, Matrix::zeros(0, st.module.abelian().rank())));
            continue;
        }
        let action = reps.iter().map(|&r| c.action(r).clone()).collect();
        let module = GModule::from_table(q.clone(), c.abelian().clone(), action)?;
        let k = Cochain::zero(&module, st.level + 1)?;
        stages.push(Stage {
            level: st.level,
            module,
            k,
        });
        maps.push((st.level, d.proj_c.clone()));
    }
    let name = format!("{}//Syl{p}", t.name());
    let tower = Arc::new(PostnikovTower::new(name, q.clone(), stages)?);
    let map = TowerMap::new(t.clone(), tower.clone(), proj.clone(), maps, Vec::new())?;
    let exact = exact_at_every_level(s, &map);
    report.quotient = QuotientOutcome::Constructed { tower, map, exact };
    Ok(report)
}

/// `ker(q_m) = im(s_m)` and `q_m` onto, at π₁ and every level.
fn exact_at_every_level(s: &TowerMap, q: &TowerMap) -> bool {
    let g = s.target.base();
    let kernel: Vec<usize> = g.elements().filter(|&x| q.phi1[x] == q.target.base().identity()).collect();
    if image_subgroup(&s.phi1).elements() != kernel.as_slice() || image_subgroup(&q.phi1).order() != q.target.base().order() {
        return false;
    }
    s.target.levels().into_iter().all(|level| {
        let (a, m, c) = (s.source.homotopy(level), s.target.homotopy(level), q.target.homotopy(level));
        let (inc, pr) = (s.matrix(level), q.matrix(level));
        let ker = m.kernel_elements(&c, &pr);
        let img = a.image(&m, &inc);
        img.order == ker.len() as u64
            && m.image(&c, &pr).order == c.order()
            && a.generators().iter().all(|x| c.is_zero(&m.apply(&c, &pr, &a.apply(&m, &inc, x))))
    })
}

/// The Sylow `p`-subgroup of `g` containing `h`, smallest in canonical order.
pub fn canonical_sylow_containing(g: &FiniteGroup, p: u64, h: &Subgroup) -> Result<Option<Subgroup>> {
    Ok(sylow_subgroups(g, p)?.into_iter().find(|s| h.is_subset_of(s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::parse_builtin;

    fn group(spec: &str) -> Arc<FiniteGroup> {
        Arc::new(parse_builtin(spec).unwrap())
    }

    fn sign_twisted_x() -> Arc<PostnikovTower> {
        let g = group("cyclic:2");
        let a = GModule::from_generators(g, FiniteAbelianGroup::cyclic(3), &[1], &[Matrix::from_i64_rows(&[vec![-1]])]).unwrap();
        Arc::new(PostnikovTower::make_kag(&a, 2).unwrap())
    }

    #[test]
    fn sign_twisted_x_has_one_obstructed_sylow_map() {
        let x = sign_twisted_x();
        let set = enumerate_sylow_maps(&x, 2).unwrap();
        assert_eq!(set.count(), 1);
        let s = &set.maps[0];
        assert_eq!(s.source.base().order(), 2);
        assert!(s.source.stages().is_empty());
        let r = normality_obstruction(s, 2).unwrap();
        assert!(r.pi1_normal);
        assert!(!r.levels[0].trivial_action);
        assert_eq!(r.levels[0].witness, Some((1, vec![1])));
        assert!(matches!(r.quotient, QuotientOutcome::Obstructed));
    }

    #[test]
    fn coprime_tower_gives_point() {
        let t = Arc::new(PostnikovTower::make_kag(&GModule::trivial(group("cyclic:3"), FiniteAbelianGroup::cyclic(9)), 2).unwrap());
        let s = &enumerate_sylow_maps(&t, 2).unwrap().maps[0];
        assert!(s.source.is_point());
    }

    #[test]
    fn z6_example() {
        let t = Arc::new(PostnikovTower::make_kag(&GModule::trivial(group("cyclic:6"), FiniteAbelianGroup::cyclic(6)), 2).unwrap());
        let s = &enumerate_sylow_maps(&t, 3).unwrap().maps[0];
        assert_eq!(s.source.base().order(), 3);
        assert_eq!(s.source.homotopy(2).factors(), &[3]);
        assert!(s.source.is_split());
    }

    #[test]
    fn s3_counts_and_conjugacy() {
        let t = Arc::new(PostnikovTower::make_kag(&GModule::trivial(group("sym:3"), FiniteAbelianGroup::cyclic(6)), 2).unwrap());
        let set = enumerate_sylow_maps(&t, 2).unwrap();
        assert_eq!(set.count(), 3);
        for a in &set.maps {
            for b in &set.maps {
                let w = are_conjugate_sylow_maps(a, b, 2).unwrap().unwrap();
                assert!(w.equivalence.is_equivalence());
            }
        }
        let w = are_conjugate_sylow_maps(&set.maps[0], &set.maps[0], 2).unwrap().unwrap();
        assert_eq!(w.element, t.base().identity());
    }

    #[test]
    fn bs3_normality() {
        let t = Arc::new(PostnikovTower::make_bg(group("sym:3")));
        let s = &enumerate_sylow_maps(&t, 3).unwrap().maps[0];
        let r = normality_obstruction(s, 3).unwrap();
        assert!(!r.obstructed());
        match r.quotient {
            QuotientOutcome::Constructed { tower, exact, .. } => {
                assert_eq!(tower.base().order(), 2);
                assert!(exact);
            }
            _ => panic!("expected a quotient"),
        }
        let s2 = &enumerate_sylow_maps(&t, 2).unwrap().maps[0];
        assert!(!normality_obstruction(s2, 2).unwrap().pi1_normal);
    }

    #[test]
    fn factor_transposition() {
        let s3 = group("sym:3");
        let z2 = Arc::new(PostnikovTower::make_bg(group("cyclic:2")));
        let t = Arc::new(PostnikovTower::make_bg(s3.clone()));
        for x in s3.elements().filter(|&x| s3.element_order(x) == 2) {
            let f = TowerMap::new(z2.clone(), t.clone(), vec![s3.identity(), x], vec![], vec![]).unwrap();
            let fac = factor_through_sylow(&f, 2).unwrap();
            assert!(image_subgroup(&fac.sylow.phi1).contains(x));
        }
    }

    #[test]
    fn factor_identity_of_p_tower() {
        let g = group("cyclic:4");
        let m = GModule::from_generators(g, FiniteAbelianGroup::cyclic(4), &[1], &[Matrix::from_i64_rows(&[vec![-1]])]).unwrap();
        let t = Arc::new(PostnikovTower::make_kag(&m, 2).unwrap());
        let fac = factor_through_sylow(&TowerMap::identity(&t), 2).unwrap();
        assert!(fac.sylow.is_equivalence());
        assert!(fac.lift.is_equivalence());
    }

    #[test]
    fn nonsplit_sylow_witness() {
        // k ∈ Z^3(S3; Z/6) with a nonzero 3-part class and a 2-part that
        // must bound over the Sylow 2-subgroup
        let g = group("sym:3");
        let m = GModule::trivial(g.clone(), FiniteAbelianGroup::cyclic(6));
        let h = crate::cohomology::cohomology_group(&m, 3).unwrap();
        assert!(!h.is_zero());
        let k = h.cocycle_from_coordinates(&vec![1; h.abelian().rank()]).unwrap();
        let t = Arc::new(PostnikovTower::new("t", g, vec![Stage { level: 2, module: m, k }]).unwrap());
        for p in [2, 3] {
            for s in enumerate_sylow_maps(&t, p).unwrap().maps {
                assert!(sylow_map_defect(&s, p).is_none());
            }
        }
    }
}
