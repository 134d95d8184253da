//! Finite `G`-modules: a finite abelian group with one action matrix per
//! group element.

use std::sync::Arc;

use crate::abelian::{mulmod, FiniteAbelianGroup};
use crate::arith;
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, Subgroup};
use crate::linalg::Matrix;

#[derive(Clone, PartialEq, Eq)]
pub struct GModule {
    group: Arc<FiniteGroup>,
    abelian: FiniteAbelianGroup,
    action: Vec<Matrix<i64>>,
}

impl std::fmt::Debug for GModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GModule({} over {})", self.abelian, self.group.name())
    }
}

/// Reduce each entry of an endomorphism matrix into its natural range.
fn normalize_matrix(a: &FiniteAbelianGroup, m: &mut Matrix<i64>) {
    for i in 0..a.rank() {
        let d = a.factors()[i] as i64;
        for j in 0..a.rank() {
            m[(i, j)] = m[(i, j)].rem_euclid(d);
        }
    }
}

/// `m1 * m2` as endomorphisms, entries reduced.
fn compose(a: &FiniteAbelianGroup, m1: &Matrix<i64>, m2: &Matrix<i64>) -> Matrix<i64> {
    let r = a.rank();
    let mut out = Matrix::zeros(r, r);
    for i in 0..r {
        let d = a.factors()[i] as i64;
        for j in 0..r {
            let mut acc = 0;
            for k in 0..r {
                acc = (acc + mulmod(m1[(i, k)], m2[(k, j)], d)) % d;
            }
            out[(i, j)] = acc.rem_euclid(d);
        }
    }
    out
}

impl GModule {
    /// Module with the given action on each generator; the action of every
    /// other element is derived and the result is validated.
    pub fn from_generators(
        group: Arc<FiniteGroup>,
        abelian: FiniteAbelianGroup,
        gens: &[usize],
        images: &[Matrix<i64>],
    ) -> Result<Self> {
        for (i, m) in images.iter().enumerate() {
            if !abelian.is_hom_to(&abelian, m) {
                return Err(Error::input(
                    format!("/action/{i}"),
                    format!("matrix for generator {} is not an endomorphism of {abelian}", gens[i]),
                    "entry (i, j) times the j-th factor must vanish modulo the i-th factor",
                ));
            }
        }
        if group.generated(gens).order() != group.order() {
            return Err(Error::input(
                "/action",
                "the listed generators do not generate the group",
                "give an action matrix for each element of a generating set",
            ));
        }
        let mut imgs = images.to_vec();
        for m in &mut imgs {
            normalize_matrix(&abelian, m);
        }
        let id = Matrix::identity(abelian.rank());
        let action = group
            .extend_from_generators(gens, &imgs, id, |x, y| compose(&abelian, x, y))
            .ok_or_else(|| {
                Error::input(
                    "/action",
                    "the action matrices do not satisfy the relations of the group",
                    "check that the matrices define a homomorphism into Aut(A)",
                )
            })?;
        Self::from_table(group, abelian, action)
    }

    /// Module from a full action table, validated.
    pub fn from_table(group: Arc<FiniteGroup>, abelian: FiniteAbelianGroup, mut action: Vec<Matrix<i64>>) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::input(
                "/action",
                format!("expected {} action matrices, found {}", group.order(), action.len()),
                "give one matrix per group element",
            ));
        }
        for (g, m) in action.iter_mut().enumerate() {
            if !abelian.is_hom_to(&abelian, m) {
                return Err(Error::input(
                    format!("/action/{g}"),
                    format!("matrix for element {g} is not an endomorphism of {abelian}"),
                    "entry (i, j) times the j-th factor must vanish modulo the i-th factor",
                ));
            }
            normalize_matrix(&abelian, m);
        }
        let mut id = Matrix::identity(abelian.rank());
        normalize_matrix(&abelian, &mut id);
        if action[group.identity()] != id {
            return Err(Error::input(
                format!("/action/{}", group.identity()),
                "the identity does not act as the identity",
                "the action must be unital",
            ));
        }
        for g in group.elements() {
            for h in group.elements() {
                if action[group.mul(g, h)] != compose(&abelian, &action[g], &action[h]) {
                    return Err(Error::input(
                        "/action",
                        format!("action({g}*{h}) differs from action({g}) action({h})"),
                        "the action must be a homomorphism G -> Aut(A)",
                    ));
                }
            }
        }
        Ok(GModule { group, abelian, action })
    }

    /// `A` with every element acting as the identity.
    pub fn trivial(group: Arc<FiniteGroup>, abelian: FiniteAbelianGroup) -> Self {
        let mut id = Matrix::identity(abelian.rank());
        normalize_matrix(&abelian, &mut id);
        let action = vec![id; group.order()];
        GModule { group, abelian, action }
    }

    pub fn zero(group: Arc<FiniteGroup>) -> Self {
        Self::trivial(group, FiniteAbelianGroup::zero())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn abelian(&self) -> &FiniteAbelianGroup {
        &self.abelian
    }

    pub fn order(&self) -> u64 {
        self.abelian.order()
    }

    pub fn is_zero_module(&self) -> bool {
        self.abelian.is_trivial()
    }

    pub fn action(&self, g: usize) -> &Matrix<i64> {
        &self.action[g]
    }

    /// `g . x`
    pub fn act(&self, g: usize, x: &[i64]) -> Vec<i64> {
        self.abelian.apply(&self.abelian, &self.action[g], x)
    }

    pub fn is_trivial_action(&self) -> bool {
        let id = &self.action[self.group.identity()];
        self.action.iter().all(|m| m == id)
    }

    /// Same abelian group with the action precomposed with `phi: H -> G`.
    pub fn pullback(&self, h: Arc<FiniteGroup>, phi: &[usize]) -> GModule {
        let action = phi.iter().map(|&g| self.action[g].clone()).collect();
        GModule {
            group: h,
            abelian: self.abelian.clone(),
            action,
        }
    }

    /// Submodule generated by `gens`: the abelian group generated by their
    /// orbits.
    pub fn submodule_generated(&self, gens: &[Vec<i64>]) -> crate::abelian::SubgroupData {
        let mut all = Vec::new();
        for x in gens {
            for g in self.group.elements() {
                all.push(self.act(g, x));
            }
        }
        self.abelian.subgroup(&all)
    }

    /// New module on `target` abelian group transported along mutually
    /// inverse isomorphisms `to: A -> B`, `from: B -> A`.
    /// External direct sum over the same group; returns the inclusions and
    /// projections as well.
    pub fn direct_sum(&self, other: &GModule) -> (GModule, [Matrix<i64>; 2], [Matrix<i64>; 2]) {
        assert!(Arc::ptr_eq(&self.group, &other.group) || self.group == other.group);
        let s = self.abelian.direct_sum(&other.abelian);
        let r = s.group.rank();
        let action = self
            .group
            .elements()
            .map(|g| {
                let mut out = Matrix::zeros(r, r);
                for j in 0..r {
                    let mut e = s.group.zero_element();
                    e[j] = 1;
                    let x1 = s.group.apply(&self.abelian, &s.proj[0], &e);
                    let x2 = s.group.apply(&other.abelian, &s.proj[1], &e);
                    let y = s.group.add(
                        &self.abelian.apply(&s.group, &s.incl[0], &self.act(g, &x1)),
                        &other.abelian.apply(&s.group, &s.incl[1], &other.act(g, &x2)),
                    );
                    for i in 0..r {
                        out[(i, j)] = y[i];
                    }
                }
                out
            })
            .collect();
        let m = GModule {
            group: self.group.clone(),
            abelian: s.group.clone(),
            action,
        };
        (m, s.incl, s.proj)
    }
}

/// Restriction of the action to a subgroup `H`, re-indexed as a module over
/// `H` viewed as a group in its own right (see
/// [`FiniteGroup::subgroup_as_group`]).
pub fn restrict_module(m: &GModule, h: &Subgroup) -> (Arc<FiniteGroup>, GModule) {
    let (hg, emb) = m.group.subgroup_as_group(h);
    let hg = Arc::new(hg);
    let r = m.pullback(hg.clone(), &emb);
    (hg, r)
}

/// Restriction to a subgroup already realized as a group with embedding.
pub fn restrict_along(m: &GModule, h: &Arc<FiniteGroup>, embedding: &[usize]) -> GModule {
    m.pullback(h.clone(), embedding)
}

/// `phi(h . x) = phi1(h) . phi(x)` for all `h` and `x`.
pub fn module_map_check(source: &GModule, target: &GModule, phi1: &[usize], phi: &Matrix<i64>) -> bool {
    module_map_violation(source, target, phi1, phi).is_none()
}

/// First `(h, x)` (in element order, then generator order) at which
/// equivariance fails. Checking on generators of `A` suffices.
pub fn module_map_violation(
    source: &GModule,
    target: &GModule,
    phi1: &[usize],
    phi: &Matrix<i64>,
) -> Option<(usize, Vec<i64>)> {
    if !source.abelian.is_hom_to(&target.abelian, phi) {
        return Some((source.group.identity(), source.abelian.zero_element()));
    }
    for h in source.group.elements() {
        for x in source.abelian.generators() {
            let lhs = source.abelian.apply(&target.abelian, phi, &source.act(h, &x));
            let rhs = target.act(phi1[h], &source.abelian.apply(&target.abelian, phi, &x));
            if lhs != rhs {
                return Some((h, x));
            }
        }
    }
    None
}

/// `A = A_p + A^(p)` with explicit maps.
#[derive(Clone, Debug)]
pub struct PrimaryDecomposition {
    pub prime: u64,
    pub p_part: GModule,
    pub prime_to_p: GModule,
    /// `A_p -> A`
    pub incl_p: Matrix<i64>,
    /// `A -> A_p`
    pub proj_p: Matrix<i64>,
    /// `A^(p) -> A`
    pub incl_c: Matrix<i64>,
    /// `A -> A^(p)`
    pub proj_c: Matrix<i64>,
}

/// Splitting by CRT idempotents on each cyclic factor.
pub fn primary_decompose(m: &GModule, p: u64) -> PrimaryDecomposition {
    let a = &m.abelian;
    let r = a.rank();
    let mut pf = Vec::new();
    let mut cf = Vec::new();
    let mut pidx = Vec::new();
    let mut cidx = Vec::new();
    for (i, &d) in a.factors().iter().enumerate() {
        let q = arith::p_part(d, p);
        let c = d / q;
        if q > 1 {
            pf.push(q);
            pidx.push(i);
        }
        if c > 1 {
            cf.push(c);
            cidx.push(i);
        }
    }
    let ap = FiniteAbelianGroup::new(pf.clone()).expect("divisibility is inherited");
    let ac = FiniteAbelianGroup::new(cf.clone()).expect("divisibility is inherited");
    let mut incl_p = Matrix::zeros(r, ap.rank());
    let mut proj_p = Matrix::zeros(ap.rank(), r);
    for (k, &i) in pidx.iter().enumerate() {
        let d = a.factors()[i];
        let q = pf[k];
        let c = d / q;
        // x in Z/q goes to c x in Z/d; y in Z/d goes to y c^-1 in Z/q
        incl_p[(i, k)] = c as i64;
        proj_p[(k, i)] = arith::inverse_mod(c as i64, q as i64).expect("coprime");
    }
    let mut incl_c = Matrix::zeros(r, ac.rank());
    let mut proj_c = Matrix::zeros(ac.rank(), r);
    for (k, &i) in cidx.iter().enumerate() {
        let d = a.factors()[i];
        let c = cf[k];
        let q = d / c;
        incl_c[(i, k)] = q as i64;
        proj_c[(k, i)] = arith::inverse_mod(q as i64, c as i64).expect("coprime");
    }
    let restrict = |sub: &FiniteAbelianGroup, incl: &Matrix<i64>, proj: &Matrix<i64>| {
        let action = m
            .group
            .elements()
            .map(|g| {
                let mut out = Matrix::zeros(sub.rank(), sub.rank());
                for j in 0..sub.rank() {
                    let mut e = sub.zero_element();
                    e[j] = 1;
                    let y = a.apply(sub, proj, &m.act(g, &sub.apply(a, incl, &e)));
                    for i in 0..sub.rank() {
                        out[(i, j)] = y[i];
                    }
                }
                out
            })
            .collect();
        GModule {
            group: m.group.clone(),
            abelian: sub.clone(),
            action,
        }
    };
    PrimaryDecomposition {
        prime: p,
        p_part: restrict(&ap, &incl_p, &proj_p),
        prime_to_p: restrict(&ac, &incl_c, &proj_c),
        incl_p,
        proj_p,
        incl_c,
        proj_c,
    }
}

/// Augmentation filtration `M_0 = A`, `M_{i+1} = <g a - a>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionFiltration {
    pub nilpotent: bool,
    /// Generators and order of each `M_i`; ends in the zero module iff
    /// nilpotent, otherwise with the first repeated term.
    pub chain: Vec<crate::abelian::SubgroupData>,
}

impl ActionFiltration {
    /// Number of steps taken.
    pub fn length(&self) -> usize {
        self.chain.len() - 1
    }
}

pub fn is_nilpotent_action(m: &GModule) -> ActionFiltration {
    let a = &m.abelian;
    let mut chain = vec![a.subgroup(&a.generators())];
    loop {
        let cur = chain.last().expect("nonempty");
        if cur.order == 1 {
            return ActionFiltration { nilpotent: true, chain };
        }
        let mut gens = Vec::new();
        for x in &cur.generators {
            for g in m.group.non_identity() {
                gens.push(a.sub(&m.act(g, x), x));
            }
        }
        let next = a.subgroup(&gens);
        if next.order == cur.order {
            return ActionFiltration { nilpotent: false, chain };
        }
        chain.push(next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::parse_builtin;

    fn z2_on_z3() -> GModule {
        let g = Arc::new(FiniteGroup::cyclic(2));
        GModule::from_generators(g, FiniteAbelianGroup::cyclic(3), &[1], &[Matrix::from_i64_rows(&[vec![-1]])]).unwrap()
    }

    #[test]
    fn validation() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        // multiplication by 2 on Z/4 is not an automorphism
        let bad = GModule::from_generators(g.clone(), FiniteAbelianGroup::cyclic(4), &[1], &[Matrix::from_i64_rows(&[vec![2]])]);
        assert!(bad.is_err());
        // an order-4 automorphism cannot come from Z/2
        let bad = GModule::from_generators(g, FiniteAbelianGroup::cyclic(5), &[1], &[Matrix::from_i64_rows(&[vec![2]])]);
        assert!(bad.is_err());
        let m = z2_on_z3();
        assert_eq!(m.act(1, &[1]), vec![2]);
        assert!(!m.is_trivial_action());
    }

    #[test]
    fn primary_examples() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let z6 = GModule::trivial(g.clone(), FiniteAbelianGroup::cyclic(6));
        let d = primary_decompose(&z6, 2);
        assert_eq!(d.p_part.abelian().factors(), &[2]);
        assert_eq!(d.prime_to_p.abelian().factors(), &[3]);
        let z8 = GModule::trivial(g, FiniteAbelianGroup::cyclic(8));
        let d = primary_decompose(&z8, 2);
        assert_eq!(d.p_part.order(), 8);
        assert!(d.prime_to_p.is_zero_module());
        let d = primary_decompose(&z2_on_z3(), 2);
        assert!(d.p_part.is_zero_module());
        assert_eq!(d.prime_to_p.order(), 3);
        assert!(!d.prime_to_p.is_trivial_action());
    }

    #[test]
    fn primary_maps_split() {
        let g = Arc::new(parse_builtin("cyclic:2").unwrap());
        let a = FiniteAbelianGroup::new(vec![6, 12]).unwrap();
        let m = GModule::from_generators(g, a.clone(), &[1], &[Matrix::from_i64_rows(&[vec![-1, 0], vec![0, -1]])]).unwrap();
        for p in [2, 3, 5] {
            let d = primary_decompose(&m, p);
            assert_eq!(d.p_part.order() * d.prime_to_p.order(), m.order());
            for x in a.elements() {
                let xp = a.apply(d.p_part.abelian(), &d.proj_p, &x);
                let xc = a.apply(d.prime_to_p.abelian(), &d.proj_c, &x);
                let back = a.add(
                    &d.p_part.abelian().apply(&a, &d.incl_p, &xp),
                    &d.prime_to_p.abelian().apply(&a, &d.incl_c, &xc),
                );
                assert_eq!(back, x);
            }
            assert!(module_map_check(&d.p_part, &m, &[0, 1], &d.incl_p));
            assert!(module_map_check(&m, &d.prime_to_p, &[0, 1], &d.proj_c));
        }
    }

    #[test]
    fn nilpotent_actions() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let t = GModule::trivial(g.clone(), FiniteAbelianGroup::cyclic(5));
        let f = is_nilpotent_action(&t);
        assert!(f.nilpotent);
        assert_eq!(f.length(), 1);
        let f = is_nilpotent_action(&z2_on_z3());
        assert!(!f.nilpotent);
        assert_eq!(f.chain.last().unwrap().order, 3);
        let inv4 = GModule::from_generators(g, FiniteAbelianGroup::cyclic(4), &[1], &[Matrix::from_i64_rows(&[vec![-1]])]).unwrap();
        let f = is_nilpotent_action(&inv4);
        assert!(f.nilpotent);
        let orders: Vec<u64> = f.chain.iter().map(|s| s.order).collect();
        assert_eq!(orders, vec![4, 2, 1]);
    }

    #[test]
    fn restriction_and_maps() {
        let s3 = Arc::new(parse_builtin("sym:3").unwrap());
        let sign: Vec<Matrix<i64>> = s3
            .elements()
            .map(|g| {
                let odd = s3.element_order(g) == 2;
                Matrix::from_i64_rows(&[vec![if odd { -1 } else { 1 }]])
            })
            .collect();
        let m = GModule::from_table(s3.clone(), FiniteAbelianGroup::cyclic(6), sign).unwrap();
        let h = s3.generated(&[1]);
        let (hg, r) = restrict_module(&m, &h);
        assert_eq!(hg.order(), 2);
        assert_eq!(r.act(1, &[1]), vec![5]);
        let (_, whole) = restrict_module(&m, &s3.whole());
        assert_eq!(whole.action, m.action);
        let (_, triv) = restrict_module(&z2_on_z3(), &FiniteGroup::cyclic(2).trivial_subgroup());
        assert!(triv.is_trivial_action());
        // twisting by inversion between the trivial and the sign module over Z/2
        let g = Arc::new(FiniteGroup::cyclic(2));
        let t = GModule::trivial(g, FiniteAbelianGroup::cyclic(3));
        let id = Matrix::identity(1);
        assert!(module_map_check(&t, &t, &[0, 1], &id));
        assert!(module_map_check(&t, &z2_on_z3(), &[0, 1], &Matrix::zeros(1, 1)));
        assert!(!module_map_check(&t, &z2_on_z3(), &[0, 1], &id));
    }
}
