//! π₁-determined finite Postnikov towers and maps between them.
//!
//! A stage at level `m >= 2` adds `π_m = M` with a normalized cocycle
//! `k ∈ Z^(m+1)(π₁; M)`. Maps carry cochain witnesses instead of asserting
//! equality of cocycles.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::abelian::{compose_maps, FiniteAbelianGroup};
use crate::arith;
use crate::cohomology::{check_cocycle, coboundary, cohomologous_witness, Cochain};
use crate::error::{Error, Result};
use crate::gmodule::{module_map_violation, GModule};
use crate::groups::{image_subgroup, FiniteGroup};
use crate::linalg::Matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub level: usize,
    pub module: GModule,
    /// Degree `level + 1`.
    pub k: Cochain,
}

#[derive(Clone, Debug)]
pub struct PostnikovTower {
    name: String,
    base: Arc<FiniteGroup>,
    stages: Vec<Stage>,
}

/// Names are for reporting only.
impl PartialEq for PostnikovTower {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.stages == other.stages
    }
}

impl Eq for PostnikovTower {}

fn loc(i: usize, field: &str) -> String {
    format!("/stages/{i}/{field}")
}

impl PostnikovTower {
    /// Validates levels, modules and the cocycle condition. Zero modules
    /// are dropped, since they are indistinguishable from absent stages.
    pub fn new(name: impl Into<String>, base: Arc<FiniteGroup>, stages: Vec<Stage>) -> Result<Self> {
        let mut last = 1;
        let mut kept = Vec::with_capacity(stages.len());
        for (i, s) in stages.into_iter().enumerate() {
            if s.level <= last {
                return Err(Error::input(
                    loc(i, "level"),
                    format!("level {} must be at least 2 and above the previous level {last}", s.level),
                    "list stages by strictly increasing level, starting at 2",
                ));
            }
            last = s.level;
            if **s.module.group() != *base {
                return Err(Error::input(loc(i, "module"), "module is not over the base group", "use the tower's π₁"));
            }
            if s.k.degree() != s.level + 1 || s.k.abelian() != s.module.abelian() || s.k.module() != &s.module {
                return Err(Error::input(
                    loc(i, "k"),
                    format!("k must be a degree {} cochain with coefficients in the stage module", s.level + 1),
                    "a level-m stage carries a cocycle of degree m + 1",
                ));
            }
            if let Some(t) = s.k.first_unnormalized() {
                return Err(Error::input(
                    loc(i, "k"),
                    format!("k is not normalized: nonzero at {t:?}"),
                    "k must vanish whenever an argument is the identity",
                ));
            }
            check_cocycle(&s.k).map_err(|e| e.within(&loc(i, "k")))?;
            if !s.module.is_zero_module() {
                kept.push(s);
            }
        }
        Ok(PostnikovTower {
            name: name.into(),
            base,
            stages: kept,
        })
    }

    /// `BG`: no stages.
    pub fn make_bg(g: Arc<FiniteGroup>) -> Self {
        PostnikovTower {
            name: format!("B({})", g.name()),
            base: g,
            stages: Vec::new(),
        }
    }

    pub fn point() -> Self {
        Self::make_bg(Arc::new(FiniteGroup::trivial()))
    }

    /// The split tower `K(M, n) // G`.
    pub fn make_kag(module: &GModule, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::precondition(
                "/level",
                format!("level {n} is below 2"),
                "level 1 is the base group itself",
            ));
        }
        let k = Cochain::zero(module, n + 1)?;
        let name = format!("K({}, {n})//{}", module.abelian(), module.group().name());
        Self::new(
            name,
            module.group().clone(),
            vec![Stage {
                level: n,
                module: module.clone(),
                k,
            }],
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn base(&self) -> &Arc<FiniteGroup> {
        &self.base
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn stage(&self, level: usize) -> Option<&Stage> {
        self.stages.iter().find(|s| s.level == level)
    }

    pub fn levels(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.level).collect()
    }

    pub fn top_level(&self) -> usize {
        self.stages.last().map_or(1, |s| s.level)
    }

    /// Module at `level`, zero when the stage is absent.
    pub fn module(&self, level: usize) -> GModule {
        self.stage(level)
            .map_or_else(|| GModule::zero(self.base.clone()), |s| s.module.clone())
    }

    /// `k` at `level`, zero when the stage is absent.
    pub fn k(&self, level: usize) -> Result<Cochain> {
        match self.stage(level) {
            Some(s) => Ok(s.k.clone()),
            None => Cochain::zero(&self.module(level), level + 1),
        }
    }

    /// `π_n` as an abelian group for `n >= 2`.
    pub fn homotopy(&self, n: usize) -> FiniteAbelianGroup {
        self.stage(n).map_or_else(FiniteAbelianGroup::zero, |s| s.module.abelian().clone())
    }

    pub fn is_point(&self) -> bool {
        self.base.order() == 1 && self.stages.is_empty()
    }

    pub fn is_split(&self) -> bool {
        self.stages.iter().all(|s| s.k.is_zero())
    }

    /// Drop stages above level `n`.
    pub fn truncate(&self, n: usize) -> Self {
        PostnikovTower {
            name: format!("{}[{n}]", self.name),
            base: self.base.clone(),
            stages: self.stages.iter().filter(|s| s.level <= n).cloned().collect(),
        }
    }

    /// All homotopy groups have `p`-power order.
    pub fn is_p_tower(&self, p: u64) -> bool {
        arith::is_p_power(self.base.order() as u64, p) && self.stages.iter().all(|s| arith::is_p_power(s.module.order(), p))
    }

    /// Primes dividing the order of some homotopy group, ascending.
    pub fn primes(&self) -> Vec<u64> {
        let mut ps: BTreeSet<u64> = arith::prime_divisors(self.base.order() as u64).into_iter().collect();
        for s in &self.stages {
            ps.extend(arith::prime_divisors(s.module.order()));
        }
        ps.into_iter().collect()
    }

    /// Levels present in either tower, ascending.
    pub fn union_levels(&self, other: &PostnikovTower) -> Vec<usize> {
        let mut l: BTreeSet<usize> = self.levels().into_iter().collect();
        l.extend(other.levels());
        l.into_iter().collect()
    }
}

/// `T1 x T2` with the structure maps needed to compare it with its factors.
pub struct TowerProduct {
    pub tower: PostnikovTower,
    /// Projections of the base onto the two factor bases.
    pub base_proj: [Vec<usize>; 2],
    /// Per level of the product: inclusions and projections of the modules.
    pub incl: Vec<(usize, [Matrix<i64>; 2])>,
    pub proj: Vec<(usize, [Matrix<i64>; 2])>,
}

/// Product of towers: product base, levelwise direct sums of the pulled
/// back modules and the sum of the inflated `k`.
pub fn product(t1: &PostnikovTower, t2: &PostnikovTower) -> Result<TowerProduct> {
    let g = Arc::new(t1.base.product(&t2.base));
    let m = t2.base.order();
    let pr: [Vec<usize>; 2] = [g.elements().map(|x| x / m).collect(), g.elements().map(|x| x % m).collect()];
    let mut stages = Vec::new();
    let mut incls = Vec::new();
    let mut projs = Vec::new();
    for level in t1.union_levels(t2) {
        let a = t1.module(level).pullback(g.clone(), &pr[0]);
        let b = t2.module(level).pullback(g.clone(), &pr[1]);
        let (sum, incl, proj) = a.direct_sum(&b);
        let ka = t1.k(level)?.pull_back(&a, &pr[0])?;
        let kb = t2.k(level)?.pull_back(&b, &pr[1])?;
        let k = ka.push_forward(&sum, &incl[0]).add(&kb.push_forward(&sum, &incl[1]));
        stages.push(Stage { level, module: sum, k });
        incls.push((level, incl));
        projs.push((level, proj));
    }
    let name = format!("{} x {}", t1.name, t2.name);
    let tower = PostnikovTower {
        name,
        base: g,
        stages,
    };
    Ok(TowerProduct {
        tower,
        base_proj: pr,
        incl: incls,
        proj: projs,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelMap {
    pub level: usize,
    /// `π_m(source) -> π_m(target)`, columns are images of source generators.
    pub matrix: Matrix<i64>,
    /// `b` with `δb = (φ_m)_* k_source - φ₁^* k_target` over the source base.
    pub witness: Option<Cochain>,
}

#[derive(Clone, Debug)]
pub struct TowerMap {
    pub source: Arc<PostnikovTower>,
    pub target: Arc<PostnikovTower>,
    pub phi1: Vec<usize>,
    /// One entry per level of either tower, ascending.
    pub levels: Vec<LevelMap>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessStatus {
    /// The supplied witness has the required coboundary.
    Verified,
    /// No witness was supplied and one was solved for.
    Computed,
    /// The supplied witness has the wrong coboundary.
    Wrong,
    /// The two cocycles are not cohomologous.
    Unsolvable,
    /// Earlier checks at this level failed.
    Skipped,
}

#[derive(Clone, Debug)]
pub struct LevelCheck {
    pub level: usize,
    /// Shape or homomorphism problem with the matrix.
    pub matrix_error: Option<String>,
    /// A pair `(h, x)` with `φ(h x) != φ₁(h) φ(x)`.
    pub equivariance_violation: Option<(usize, Vec<i64>)>,
    pub witness: WitnessStatus,
}

impl LevelCheck {
    pub fn is_ok(&self) -> bool {
        self.matrix_error.is_none()
            && self.equivariance_violation.is_none()
            && matches!(self.witness, WitnessStatus::Verified | WitnessStatus::Computed)
    }
}

#[derive(Clone, Debug)]
pub struct MapValidation {
    pub phi1_error: Option<String>,
    pub levels: Vec<LevelCheck>,
    /// The map with every missing witness filled in, when valid.
    pub completed: Option<TowerMap>,
}

impl MapValidation {
    pub fn is_valid(&self) -> bool {
        self.phi1_error.is_none() && self.levels.iter().all(LevelCheck::is_ok)
    }

    /// First problem as a located error.
    pub fn error(&self) -> Option<Error> {
        if let Some(e) = &self.phi1_error {
            return Some(Error::input("/phi1", e.clone(), "φ₁ must be a homomorphism of the base groups"));
        }
        self.levels.iter().enumerate().find(|(_, c)| !c.is_ok()).map(|(i, c)| {
            let at = format!("/stage_maps/{i}");
            if let Some(e) = &c.matrix_error {
                Error::input(at, e.clone(), "give a homomorphism of the level-m homotopy groups")
            } else if let Some((h, x)) = &c.equivariance_violation {
                Error::input(
                    at,
                    format!("level {} map is not equivariant at h = {h}, m = {x:?}", c.level),
                    "the map must satisfy φ(h·m) = φ₁(h)·φ(m)",
                )
            } else {
                Error::input(
                    format!("{at}/witness"),
                    format!("level {} k-invariants are not compatible ({:?})", c.level, c.witness),
                    "the pushed-forward source k must be cohomologous to the pulled-back target k",
                )
            }
        })
    }
}

impl TowerMap {
    /// Assemble a map from its tables; absent level maps default to zero
    /// and witnesses are solved for. Fails unless the result is valid.
    pub fn new(
        source: Arc<PostnikovTower>,
        target: Arc<PostnikovTower>,
        phi1: Vec<usize>,
        maps: Vec<(usize, Matrix<i64>)>,
        witnesses: Vec<(usize, Cochain)>,
    ) -> Result<TowerMap> {
        let mut levels = Vec::new();
        for level in source.union_levels(&target) {
            let matrix = maps.iter().find(|(l, _)| *l == level).map_or_else(
                || Matrix::zeros(target.homotopy(level).rank(), source.homotopy(level).rank()),
                |(_, m)| m.clone(),
            );
            let witness = witnesses.iter().find(|(l, _)| *l == level).map(|(_, b)| b.clone());
            levels.push(LevelMap { level, matrix, witness });
        }
        let m = TowerMap {
            source,
            target,
            phi1,
            levels,
        };
        let v = m.validate()?;
        match v.error() {
            Some(e) => Err(e),
            None => Ok(v.completed.expect("valid maps are completed")),
        }
    }

    pub fn identity(t: &Arc<PostnikovTower>) -> TowerMap {
        let levels = t
            .stages
            .iter()
            .map(|s| LevelMap {
                level: s.level,
                matrix: Matrix::identity(s.module.abelian().rank()),
                witness: Some(Cochain::zero(&s.module, s.level).expect("fits since k does")),
            })
            .collect();
        TowerMap {
            source: t.clone(),
            target: t.clone(),
            phi1: t.base.elements().collect(),
            levels,
        }
    }

    pub fn level(&self, level: usize) -> Option<&LevelMap> {
        self.levels.iter().find(|l| l.level == level)
    }

    /// The level-`m` matrix, zero when neither tower has the level.
    pub fn matrix(&self, level: usize) -> Matrix<i64> {
        self.level(level).map_or_else(
            || Matrix::zeros(self.target.homotopy(level).rank(), self.source.homotopy(level).rank()),
            |l| l.matrix.clone(),
        )
    }

    /// Target module at `level` pulled back to the source base.
    pub fn pulled_target(&self, level: usize) -> GModule {
        self.target.module(level).pullback(self.source.base.clone(), &self.phi1)
    }

    /// `(φ_m)_* k_source - φ₁^* k_target`.
    pub fn discrepancy(&self, level: usize) -> Result<Cochain> {
        let n = self.pulled_target(level);
        let pushed = self.source.k(level)?.push_forward(&n, &self.matrix(level));
        let pulled = self.target.k(level)?.pull_back(&n, &self.phi1)?;
        Ok(pushed.sub(&pulled))
    }

    pub fn witness(&self, level: usize) -> Result<Cochain> {
        match self.level(level).and_then(|l| l.witness.clone()) {
            Some(b) => Ok(b),
            None => Cochain::zero(&self.pulled_target(level), level),
        }
    }

    /// Check every invariant, solving for missing witnesses.
    pub fn validate(&self) -> Result<MapValidation> {
        let (h, g) = (&self.source.base, &self.target.base);
        let phi1_error = h.check_homomorphism(g, &self.phi1).err().map(|e| e.to_string());
        let mut checks = Vec::new();
        let mut completed = self.clone();
        for (i, lm) in self.levels.iter().enumerate() {
            let level = lm.level;
            let src = self.source.module(level);
            let tgt = self.target.module(level);
            let mut check = LevelCheck {
                level,
                matrix_error: None,
                equivariance_violation: None,
                witness: WitnessStatus::Skipped,
            };
            if !src.abelian().is_hom_to(tgt.abelian(), &lm.matrix) {
                check.matrix_error = Some(format!(
                    "level {level} matrix is not a homomorphism {} -> {}",
                    src.abelian(),
                    tgt.abelian()
                ));
            } else if phi1_error.is_none() {
                check.equivariance_violation = module_map_violation(&src, &tgt, &self.phi1, &lm.matrix);
            }
            if phi1_error.is_none() && check.matrix_error.is_none() && check.equivariance_violation.is_none() {
                let d = self.discrepancy(level)?;
                check.witness = match &lm.witness {
                    Some(b) => {
                        let ok = b.degree() == level && b.abelian() == d.abelian() && coboundary(b)? == d;
                        if ok {
                            WitnessStatus::Verified
                        } else {
                            WitnessStatus::Wrong
                        }
                    }
                    None => {
                        let zero = Cochain::zero(d.module(), level + 1)?;
                        match cohomologous_witness(&d, &zero)? {
                            Some(b) => {
                                completed.levels[i].witness = Some(b);
                                WitnessStatus::Computed
                            }
                            None => WitnessStatus::Unsolvable,
                        }
                    }
                };
            }
            checks.push(check);
        }
        let mut v = MapValidation {
            phi1_error,
            levels: checks,
            completed: None,
        };
        if v.is_valid() {
            v.completed = Some(completed);
        }
        Ok(v)
    }

    pub fn is_valid(&self) -> Result<bool> {
        Ok(self.validate()?.is_valid())
    }

    /// `φ₁` and every `φ_m` are bijective.
    pub fn is_equivalence(&self) -> bool {
        let (h, g) = (&self.source.base, &self.target.base);
        if h.order() != g.order() || image_subgroup(&self.phi1).order() != g.order() {
            return false;
        }
        self.source.union_levels(&self.target).into_iter().all(|level| {
            let (a, b) = (self.source.homotopy(level), self.target.homotopy(level));
            a.is_bijective(&b, &self.matrix(level))
        })
    }

    /// `other ∘ self`. Witnesses paste as `(g_m)_* b_f + f₁^* b_g`.
    pub fn then(&self, other: &TowerMap) -> Result<TowerMap> {
        if *self.target != *other.source {
            return Err(Error::input("", "maps are not composable", "the first map's target must be the second's source"));
        }
        let phi1: Vec<usize> = self.phi1.iter().map(|&x| other.phi1[x]).collect();
        let source = self.source.clone();
        let target = other.target.clone();
        let mut levels = Vec::new();
        for level in source.union_levels(&target) {
            let c = target.homotopy(level);
            let matrix = compose_maps(&c, &other.matrix(level), &self.matrix(level));
            let n = target.module(level).pullback(source.base.clone(), &phi1);
            let bf = self.witness(level)?.push_forward(&n, &other.matrix(level));
            let bg = other.witness(level)?.pull_back(&n, &self.phi1)?;
            levels.push(LevelMap {
                level,
                matrix,
                witness: Some(bf.add(&bg)),
            });
        }
        Ok(TowerMap {
            source,
            target,
            phi1,
            levels,
        })
    }

    /// Inverse of an equivalence; witnesses are solved for afresh.
    pub fn inverse(&self) -> Result<TowerMap> {
        if !self.is_equivalence() {
            return Err(Error::precondition("", "map is not an equivalence", "only equivalences can be inverted"));
        }
        let mut phi1 = vec![0; self.phi1.len()];
        for (x, &y) in self.phi1.iter().enumerate() {
            phi1[y] = x;
        }
        let mut maps = Vec::new();
        for level in self.source.union_levels(&self.target) {
            let (a, b) = (self.source.homotopy(level), self.target.homotopy(level));
            let inv = a.invert(&b, &self.matrix(level)).expect("bijective");
            maps.push((level, inv));
        }
        TowerMap::new(self.target.clone(), self.source.clone(), phi1, maps, Vec::new())
    }

    /// Same tables; witnesses may differ by cocycles.
    pub fn same_tables(&self, other: &TowerMap) -> bool {
        *self.source == *other.source
            && *self.target == *other.target
            && self.phi1 == other.phi1
            && self
                .source
                .union_levels(&self.target)
                .into_iter()
                .all(|l| self.matrix(l) == other.matrix(l))
    }

    /// For maps with the same tables: per level, a cochain `h` with
    /// `δh = b_self - b_other`, i.e. a homotopy between the two witnesses.
    /// `None` at a level means the witnesses differ by a nontrivial class.
    pub fn witness_homotopies(&self, other: &TowerMap) -> Result<Vec<(usize, Option<Cochain>)>> {
        if !self.same_tables(other) {
            return Err(Error::precondition("", "maps have different tables", "compare maps with equal φ₁ and φ_m"));
        }
        let mut out = Vec::new();
        for level in self.source.union_levels(&self.target) {
            let (a, b) = (self.witness(level)?, other.witness(level)?);
            out.push((level, cohomologous_witness(&a, &b)?));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{find_isomorphism, parse_builtin};

    fn group(spec: &str) -> Arc<FiniteGroup> {
        Arc::new(parse_builtin(spec).unwrap())
    }

    fn sign_twisted_x() -> PostnikovTower {
        let g = group("cyclic:2");
        let a = GModule::from_generators(g, FiniteAbelianGroup::cyclic(3), &[1], &[Matrix::from_i64_rows(&[vec![-1]])]).unwrap();
        PostnikovTower::make_kag(&a, 2).unwrap()
    }

    #[test]
    fn constructors() {
        let bg = PostnikovTower::make_bg(group("sym:3"));
        assert!(bg.stages().is_empty());
        assert_eq!(bg.truncate(4), bg.truncate(4).truncate(4));
        let x = sign_twisted_x();
        assert_eq!(x.homotopy(2).factors(), &[3]);
        assert_eq!(x.truncate(1).stages().len(), 0);
        assert_eq!(x.truncate(2).stages(), x.stages());
        assert!(!x.is_p_tower(2));
        assert!(PostnikovTower::point().is_p_tower(5));
        assert!(PostnikovTower::make_bg(group("dihedral:4")).is_p_tower(2));
        assert!(PostnikovTower::make_kag(&GModule::zero(group("cyclic:2")), 1).is_err());
    }

    #[test]
    fn rejects_non_cocycle() {
        let g = group("cyclic:2");
        let m = GModule::trivial(g.clone(), FiniteAbelianGroup::cyclic(2));
        let k = Cochain::from_fn(&m, 3, |t| vec![i64::from(t == [1, 1, 1])]).unwrap();
        // δk(σ,σ,σ,σ) = k(σ,σ,σ) + k(σ,σ,σ) = 0 but δk(σ,σ,σ,e) picks up a lone term
        let bad = Cochain::from_fn(&m, 3, |t| vec![i64::from(t == [1, 1, 0])]).unwrap();
        assert!(PostnikovTower::new("ok", g.clone(), vec![Stage { level: 2, module: m.clone(), k }]).is_ok());
        let e = PostnikovTower::new("bad", g, vec![Stage { level: 2, module: m, k: bad }]).unwrap_err();
        assert!(e.location().starts_with("/stages/0/k"));
    }

    #[test]
    fn products() {
        let p = product(&PostnikovTower::make_bg(group("cyclic:2")), &PostnikovTower::make_bg(group("cyclic:3"))).unwrap();
        assert!(find_isomorphism(p.tower.base(), &FiniteGroup::cyclic(6)).unwrap().is_some());
        let k2 = PostnikovTower::make_kag(&GModule::trivial(group("trivial"), FiniteAbelianGroup::cyclic(2)), 2).unwrap();
        let k3 = PostnikovTower::make_kag(&GModule::trivial(group("trivial"), FiniteAbelianGroup::cyclic(3)), 2).unwrap();
        let p = product(&k2, &k3).unwrap();
        assert_eq!(p.tower.homotopy(2).factors(), &[6]);
        let t = sign_twisted_x();
        let p = product(&t, &PostnikovTower::point()).unwrap();
        assert_eq!(p.tower.homotopy(2), t.homotopy(2));
        assert_eq!(p.tower.base().order(), 2);
    }

    #[test]
    fn identity_and_composition() {
        let t = Arc::new(sign_twisted_x());
        let id = TowerMap::identity(&t);
        assert!(id.validate().unwrap().is_valid());
        assert!(id.is_equivalence());
        let twice = id.then(&id).unwrap();
        assert!(twice.validate().unwrap().is_valid());
        assert!(twice.is_equivalence());
    }

    #[test]
    fn non_equivariant_map_reported() {
        let g = group("cyclic:2");
        let triv = Arc::new(PostnikovTower::make_kag(&GModule::trivial(g.clone(), FiniteAbelianGroup::cyclic(3)), 2).unwrap());
        let x = Arc::new(sign_twisted_x());
        let v = TowerMap {
            source: triv,
            target: x,
            phi1: vec![0, 1],
            levels: vec![LevelMap {
                level: 2,
                matrix: Matrix::from_i64_rows(&[vec![1]]),
                witness: None,
            }],
        }
        .validate()
        .unwrap();
        assert!(!v.is_valid());
        assert_eq!(v.levels[0].equivariance_violation, Some((1, vec![1])));
    }

    #[test]
    fn inclusion_not_equivalence() {
        let z2 = Arc::new(PostnikovTower::make_bg(group("cyclic:2")));
        let z4 = Arc::new(PostnikovTower::make_bg(group("cyclic:4")));
        let f = TowerMap::new(z2, z4, vec![0, 2], vec![], vec![]).unwrap();
        assert!(!f.is_equivalence());
    }

    #[test]
    fn nonzero_k_witness_solved() {
        // k generating H^3(Z/2; Z/2); the identity of Z/2 lifts only with a witness
        let g = group("cyclic:2");
        let m = GModule::trivial(g.clone(), FiniteAbelianGroup::cyclic(2));
        let k = Cochain::from_fn(&m, 3, |t| vec![i64::from(t == [1, 1, 1])]).unwrap();
        let t = Arc::new(PostnikovTower::new("t", g.clone(), vec![Stage { level: 2, module: m.clone(), k }]).unwrap());
        let split = Arc::new(PostnikovTower::make_kag(&m, 2).unwrap());
        // the identity on homotopy groups cannot carry k to 0
        assert!(TowerMap::new(t.clone(), split.clone(), vec![0, 1], vec![(2, Matrix::identity(1))], vec![]).is_err());
        // the zero map on π₂ can
        let f = TowerMap::new(t.clone(), split, vec![0, 1], vec![(2, Matrix::zeros(1, 1))], vec![]).unwrap();
        assert!(!f.is_equivalence());
        let id = TowerMap::new(t.clone(), t, vec![0, 1], vec![(2, Matrix::identity(1))], vec![]).unwrap();
        assert!(id.is_equivalence());
    }
}
