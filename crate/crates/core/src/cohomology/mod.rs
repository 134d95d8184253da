//! Group cohomology `H^n(G; M)` from the normalized bar complex.
//!
//! Everything is computed one primary component at a time over the local
//! rings `Z/p^a` (see [`engine`]), then reassembled into invariant-factor
//! form.

mod cochain;
mod engine;

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;

pub use cochain::{coboundary, Cochain};

use crate::abelian::FiniteAbelianGroup;
use crate::arith;
use crate::error::{Error, Result};
use crate::gmodule::{restrict_along, GModule};
use crate::groups::{FiniteGroup, Subgroup};
use crate::limits::Limits;
use crate::linalg::local::{to_sparse, Echelon};
use crate::linalg::{smith_normal_form, BigMatrix, Matrix};
use crate::scalar::IntScalar;
use engine::LocalComplex;

fn check_degree(n: usize) -> Result<()> {
    let max = Limits::global().max_degree;
    if n > max {
        return Err(Error::capacity(
            "",
            format!("cohomological degree {n} exceeds the bound {max}"),
            "raise FINSYLOW_MAX_DEGREE or ask for a lower degree",
        ));
    }
    Ok(())
}

fn check_complex(module: &GModule, n: usize) -> Result<()> {
    check_degree(n)?;
    cochain::check_cells(module.group().order(), n + 1, module.abelian().rank())?;
    Ok(())
}

/// Composition lengths of `H^k(G; M)` for `k = 0..=n`, i.e. the base-`p`
/// logarithms of the orders summed over the primes dividing `|M|`.
pub fn cohomology_lengths(module: &GModule, n: usize) -> Result<Vec<u64>> {
    check_complex(module, n)?;
    let mut total = vec![0; n + 1];
    for p in arith::prime_divisors(module.order()) {
        let lens = LocalComplex::new(module, p).cohomology_lengths(n);
        for (t, l) in total.iter_mut().zip(lens) {
            *t += l;
        }
    }
    Ok(total)
}

/// Orders of `H^k(G; M)` for `k = 0..=n`.
pub fn cohomology_orders(module: &GModule, n: usize) -> Result<Vec<u64>> {
    check_complex(module, n)?;
    let mut total = vec![1u64; n + 1];
    for p in arith::prime_divisors(module.order()) {
        let lens = LocalComplex::new(module, p).cohomology_lengths(n);
        for (t, l) in total.iter_mut().zip(lens) {
            *t *= p.pow(l as u32);
        }
    }
    Ok(total)
}

/// Whether `H^n(G; M) = 0`.
pub fn vanishes(module: &GModule, n: usize) -> Result<bool> {
    Ok(cohomology_lengths(module, n)?[n] == 0)
}

/// One primary component of `H^n`.
struct LocalPart {
    complex: LocalComplex,
    /// Width of the cochain part of the augmented echelon.
    dim: usize,
    /// Rows `[b | 0]` for boundaries and `[z_i | e_i]` for chosen cocycles.
    augmented: Echelon,
    /// Exponents of the invariant factors `p^f`, ascending.
    exponents: Vec<u32>,
    /// Coordinates are `(x V)_i` for the surviving SNF indices.
    v: BigMatrix,
    kept: Vec<usize>,
    /// Basis cocycles in `A_p` coordinates.
    basis: Vec<Vec<u64>>,
}

impl LocalPart {
    fn compute(module: &GModule, p: u64, n: usize) -> Option<LocalPart> {
        let complex = LocalComplex::new(module, p);
        let len_h = complex.cohomology_lengths(n)[n];
        if len_h == 0 {
            return None;
        }
        let ring = complex.ring;
        let dim = complex.dim(n);
        let cocycles: Vec<Vec<u64>> = complex
            .row_echelon(n, None)
            .annihilator()
            .into_iter()
            .map(|x| complex.embed(&x))
            .filter(|z| z.iter().any(|&v| v != 0))
            .collect();
        let boundaries = complex.boundaries(n);
        let mut probe = boundaries.clone();
        let mut chosen = Vec::new();
        let mut gained = 0;
        for z in cocycles {
            let g = probe.insert(to_sparse(&z));
            if g > 0 {
                gained += g;
                chosen.push(z);
                if gained == len_h {
                    break;
                }
            }
        }
        assert_eq!(gained, len_h, "cocycles must generate H^n");
        let k = chosen.len();
        let mut augmented = Echelon::new(ring, dim + k);
        for (_, row) in boundaries.pivots() {
            augmented.insert(row.clone());
        }
        for (i, z) in chosen.iter().enumerate() {
            let mut row = to_sparse(z);
            row.push(((dim + i) as u32, 1));
            augmented.insert(row);
        }
        let mut relations: Vec<Vec<BigInt>> = augmented
            .pivots()
            .filter(|(c, _)| *c as usize >= dim)
            .map(|(_, row)| {
                let mut rel = vec![BigInt::from(0); k];
                for &(c, x) in row {
                    rel[c as usize - dim] = BigInt::from(x);
                }
                rel
            })
            .collect();
        for i in 0..k {
            let mut rel = vec![BigInt::from(0); k];
            rel[i] = BigInt::from(ring.modulus());
            relations.push(rel);
        }
        let s = smith_normal_form(&Matrix::from_rows(&relations));
        let mut kept = Vec::new();
        let mut exponents = Vec::new();
        let mut basis = Vec::new();
        for i in 0..k {
            let d = s.diag[i].to_i64_exact() as u64;
            if d > 1 {
                kept.push(i);
                exponents.push(arith::valuation(d, p));
                let mut z = vec![0u64; dim];
                for (j, zj) in chosen.iter().enumerate() {
                    let c = ring.reduce(s.v_inv[(i, j)].mod_floor(&BigInt::from(ring.modulus())).to_i64_exact());
                    if c == 0 {
                        continue;
                    }
                    for (t, &y) in z.iter_mut().zip(zj) {
                        *t = ring.add(*t, ring.mul(c, y));
                    }
                }
                basis.push(complex.unembed(&z));
            }
        }
        debug_assert_eq!(exponents.iter().map(|&f| u64::from(f)).sum::<u64>(), len_h);
        Some(LocalPart {
            complex,
            dim,
            augmented,
            exponents,
            v: s.v,
            kept,
            basis,
        })
    }

    /// Coordinates of an `A`-valued normalized cocycle.
    fn coordinates(&self, c: &Cochain) -> Vec<u64> {
        let ring = self.complex.ring;
        let k = self.augmented.ncols() - self.dim;
        let mut v = self.complex.to_local(c);
        v.extend(std::iter::repeat(0).take(k));
        let ok = self.augmented.reduce_prefix(&mut v, self.dim);
        assert!(ok, "cocycle outside the span of the chosen cocycles and boundaries");
        let x: Vec<BigInt> = v[self.dim..].iter().map(|&y| BigInt::from(ring.neg(y))).collect();
        self.kept
            .iter()
            .zip(&self.exponents)
            .map(|(&i, &f)| {
                let mut acc = BigInt::from(0);
                for (j, xj) in x.iter().enumerate() {
                    acc += xj * &self.v[(j, i)];
                }
                let m = BigInt::from(self.complex.ring.prime().pow(f));
                acc.mod_floor(&m).to_i64_exact() as u64
            })
            .collect()
    }
}

/// `H^n(G; M)` with basis cocycles and a coordinate map.
pub struct CohomologyGroup {
    module: GModule,
    degree: usize,
    abelian: FiniteAbelianGroup,
    basis: Vec<Cochain>,
    parts: Vec<LocalPart>,
    /// For each invariant factor, the matching factor index in every part.
    assembly: Vec<Vec<Option<usize>>>,
}

impl std::fmt::Debug for CohomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "H^{}({}; {}) = {}", self.degree, self.module.group().name(), self.module.abelian(), self.abelian)
    }
}

pub fn cohomology_group(module: &GModule, n: usize) -> Result<CohomologyGroup> {
    check_complex(module, n)?;
    let parts: Vec<LocalPart> = arith::prime_divisors(module.order())
        .into_iter()
        .filter_map(|p| LocalPart::compute(module, p, n))
        .collect();
    let height = parts.iter().map(|q| q.exponents.len()).max().unwrap_or(0);
    let mut factors = Vec::with_capacity(height);
    let mut assembly = Vec::with_capacity(height);
    for k in 0..height {
        let mut d = 1u64;
        let mut row = Vec::with_capacity(parts.len());
        for part in &parts {
            let m = part.exponents.len();
            let idx = (k + m).checked_sub(height);
            if let Some(i) = idx {
                d *= part.complex.ring.prime().pow(part.exponents[i]);
            }
            row.push(idx);
        }
        factors.push(d);
        assembly.push(row);
    }
    let abelian = FiniteAbelianGroup::new(factors).expect("assembled factors form a chain");
    let mut basis = Vec::with_capacity(height);
    for row in &assembly {
        let mut c = Cochain::zero(module, n)?;
        for (part, idx) in parts.iter().zip(row) {
            if let Some(i) = idx {
                c = c.add(&part.complex.from_coordinates(module, n, &part.basis[*i])?);
            }
        }
        basis.push(c);
    }
    Ok(CohomologyGroup {
        module: module.clone(),
        degree: n,
        abelian,
        basis,
        parts,
        assembly,
    })
}

fn require_normalized(c: &Cochain) -> Result<()> {
    if let Some(t) = c.first_unnormalized() {
        return Err(Error::precondition(
            format!("/{}", t.iter().map(ToString::to_string).collect::<Vec<_>>().join("/")),
            "cochain is not normalized",
            "values must vanish whenever an argument is the identity",
        ));
    }
    Ok(())
}

/// Error naming the first tuple where `delta c` is nonzero, if any.
pub fn check_cocycle(c: &Cochain) -> Result<()> {
    let d = coboundary(c)?;
    if let Some(t) = d.first_nonzero() {
        return Err(Error::input(
            format!("/{}", t.iter().map(ToString::to_string).collect::<Vec<_>>().join("/")),
            format!("not a cocycle: the coboundary at {t:?} is {:?}", d.get(&t)),
            "k-invariants must satisfy the cocycle condition",
        ));
    }
    Ok(())
}

impl CohomologyGroup {
    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn abelian(&self) -> &FiniteAbelianGroup {
        &self.abelian
    }

    pub fn basis(&self) -> &[Cochain] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.abelian.is_trivial()
    }

    /// Coordinates of the class of a normalized cocycle.
    pub fn coordinates(&self, c: &Cochain) -> Result<Vec<i64>> {
        if c.degree() != self.degree || c.abelian() != self.module.abelian() || c.group().order() != self.module.group().order() {
            return Err(Error::input("", "cochain does not match the cohomology group", "use the same group, module and degree"));
        }
        require_normalized(c)?;
        check_cocycle(c)?;
        let local: Vec<Vec<u64>> = self.parts.iter().map(|p| p.coordinates(c)).collect();
        let coords = self
            .assembly
            .iter()
            .zip(self.abelian.factors())
            .map(|(row, &d)| {
                // CRT: x = x_p mod p^f for every part
                let mut x: i64 = 0;
                let mut m: i64 = 1;
                for ((part, idx), loc) in self.parts.iter().zip(row).zip(&local) {
                    if let Some(i) = idx {
                        let q = part.complex.ring.prime().pow(part.exponents[*i]) as i64;
                        let target = loc[*i] as i64;
                        // solve x + m t = target mod q
                        let inv = arith::inverse_mod(m, q).expect("coprime moduli");
                        let t = ((target - x).rem_euclid(q) * inv).rem_euclid(q);
                        x += m * t;
                        m *= q;
                    }
                }
                x.rem_euclid(d as i64)
            })
            .collect();
        Ok(coords)
    }

    pub fn class_of(self: &Arc<Self>, c: &Cochain) -> Result<CohomologyClass> {
        let coordinates = self.coordinates(c)?;
        Ok(CohomologyClass {
            representative: c.clone(),
            ambient: self.clone(),
            coordinates,
        })
    }

    /// The cocycle `sum x_i basis_i`.
    pub fn cocycle_from_coordinates(&self, x: &[i64]) -> Result<Cochain> {
        let mut c = Cochain::zero(&self.module, self.degree)?;
        for (b, &k) in self.basis.iter().zip(x) {
            c = c.add(&b.scale(k));
        }
        Ok(c)
    }

    pub fn class_from_coordinates(self: &Arc<Self>, x: &[i64]) -> Result<CohomologyClass> {
        let representative = self.cocycle_from_coordinates(x)?;
        Ok(CohomologyClass {
            representative,
            ambient: self.clone(),
            coordinates: self.abelian.reduced(x.to_vec()),
        })
    }
}

/// A class in `H^n(G; M)`: a representative cocycle and its coordinates.
#[derive(Clone)]
pub struct CohomologyClass {
    pub representative: Cochain,
    pub ambient: Arc<CohomologyGroup>,
    pub coordinates: Vec<i64>,
}

impl std::fmt::Debug for CohomologyClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "class {:?} in {:?}", self.coordinates, self.ambient)
    }
}

impl CohomologyClass {
    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().all(|&x| x == 0)
    }
}

/// Restriction of a cochain to a subgroup, realized over
/// [`FiniteGroup::subgroup_as_group`].
pub fn restrict_cochain(c: &Cochain, h: &Subgroup) -> Result<Cochain> {
    let (hg, emb) = c.group().subgroup_as_group(h);
    let hg = Arc::new(hg);
    let module = restrict_along(c.module(), &hg, &emb);
    c.pull_back(&module, &emb)
}

/// Restriction on classes.
pub fn restriction(cls: &CohomologyClass, h: &Subgroup) -> Result<CohomologyClass> {
    let rep = restrict_cochain(&cls.representative, h)?;
    let ambient = Arc::new(cohomology_group(rep.module(), rep.degree())?);
    ambient.class_of(&rep)
}

/// Cochain-level transfer from `H` to `G`.
///
/// `c` is a cochain over `H` realized as in [`restrict_cochain`], with
/// coefficients the restriction of `module`. With `rho(x) = x s^-1` for the
/// smallest `s` in `Hx` and `T` the smallest left coset representatives,
/// the homogeneous cochain `F(x_0..x_n) = sum_t t f(rho(t^-1 x_0), ...)` is
/// read off at `(1, g_1, g_1 g_2, ...)`.
pub fn transfer_cochain(c: &Cochain, module: &GModule, h: &Subgroup) -> Result<Cochain> {
    let g = module.group().clone();
    if c.group().order() != h.order() || c.abelian() != module.abelian() {
        return Err(Error::input("", "cochain is not over the given subgroup", "restrict first"));
    }
    let n = c.degree();
    let els = h.elements();
    let pos = |x: usize| els.binary_search(&x).expect("element of the subgroup");
    // right coset representative of each element
    let mut right_rep = vec![usize::MAX; g.order()];
    for x in g.elements() {
        if right_rep[x] == usize::MAX {
            let coset: Vec<usize> = els.iter().map(|&y| g.mul(y, x)).collect();
            let rep = *coset.iter().min().expect("nonempty");
            for y in coset {
                right_rep[y] = rep;
            }
        }
    }
    let rho = |x: usize| g.mul(x, g.inv(right_rep[x]));
    let lefts = g.coset_representatives(h);
    let a = module.abelian().clone();
    let hg = c.group().clone();
    let mut args = vec![0usize; n];
    let mut out = Cochain::zero(module, n)?;
    let mut tuple = Vec::new();
    cochain::for_each_tuple(g.order(), n, |_, t| tuple.push(t.to_vec()));
    for t in tuple {
        let mut xs = Vec::with_capacity(n + 1);
        xs.push(g.identity());
        for &gi in &t {
            let last = *xs.last().expect("nonempty");
            xs.push(g.mul(last, gi));
        }
        let mut acc = a.zero_element();
        for &s in &lefts {
            let sinv = g.inv(s);
            let hs: Vec<usize> = xs.iter().map(|&x| pos(rho(g.mul(sinv, x)))).collect();
            // f_H(h_0..h_n) = h_0 c(h_0^-1 h_1, ...)
            for k in 0..n {
                args[k] = hg.mul(hg.inv(hs[k]), hs[k + 1]);
            }
            let inner = c.module().act(hs[0], c.get(&args));
            acc = a.add(&acc, &module.act(s, &inner));
        }
        out.set(&t, &acc);
    }
    Ok(out)
}

/// Transfer on classes, from `H` to the group of `module`.
pub fn transfer(cls: &CohomologyClass, module: &GModule, h: &Subgroup) -> Result<CohomologyClass> {
    let rep = transfer_cochain(&cls.representative, module, h)?;
    let ambient = Arc::new(cohomology_group(module, rep.degree())?);
    ambient.class_of(&rep)
}

/// A normalized cochain `b` of degree `n - 1` with `delta b = c1 - c2`, or
/// `None` when the classes differ.
pub fn cohomologous_witness(c1: &Cochain, c2: &Cochain) -> Result<Option<Cochain>> {
    let n = c1.degree();
    if n == 0 || c2.degree() != n || c1.abelian() != c2.abelian() || c1.group().order() != c2.group().order() {
        return Err(Error::precondition(
            "",
            "witnesses need two cochains of the same positive degree and coefficients",
            "compare cocycles of equal degree over the same module",
        ));
    }
    require_normalized(c1)?;
    require_normalized(c2)?;
    check_cocycle(c1)?;
    check_cocycle(c2)?;
    check_complex(c1.module(), n)?;
    let module = c1.module();
    let d = c1.sub(c2);
    let mut b = Cochain::zero(module, n - 1)?;
    if d.is_zero() {
        return Ok(Some(b));
    }
    for p in arith::prime_divisors(module.order()) {
        let complex = LocalComplex::new(module, p);
        let target = complex.to_local(&d);
        if target.iter().all(|&x| x == 0) {
            continue;
        }
        let dim = complex.dim(n);
        let src = complex.dim(n - 1);
        let mut e = Echelon::new(complex.ring, dim + src);
        for (j, mut col) in complex.columns(n - 1).into_iter().enumerate() {
            col.push(((dim + j) as u32, 1));
            e.insert(col);
        }
        let mut v = target;
        v.extend(std::iter::repeat(0).take(src));
        if !e.reduce_prefix(&mut v, dim) {
            return Ok(None);
        }
        let x: Vec<u64> = v[dim..].iter().map(|&y| complex.ring.neg(y)).collect();
        b = b.add(&complex.from_coordinates(module, n - 1, &x)?);
    }
    if coboundary(&b)? != d {
        return Err(Error::theory("cohomologous_witness", "the solved witness does not have the required coboundary"));
    }
    Ok(Some(b))
}

/// For `gcd(|G|, exp M) = 1` and a normalized cocycle `z` of degree
/// `n >= 1`: `b = (-1)^n |G|^-1 sum_g z(.., g)` satisfies `delta b = z`.
pub fn coprime_witness(z: &Cochain) -> Result<Cochain> {
    let n = z.degree();
    let g = z.group().clone();
    let e = z.abelian().exponent();
    if n == 0 || arith::gcd(g.order() as u64, e) != 1 {
        return Err(Error::precondition(
            "",
            "the averaging witness needs positive degree and coprime group and module orders",
            "use cohomologous_witness instead",
        ));
    }
    require_normalized(z)?;
    let module = z.module();
    let inv = arith::inverse_mod(g.order() as i64, e as i64).unwrap_or(0);
    let factor = if n % 2 == 0 { inv } else { -inv };
    let a = z.abelian().clone();
    let mut tail = vec![0usize; n];
    let b = Cochain::from_fn(module, n - 1, |t| {
        tail[..n - 1].copy_from_slice(t);
        let mut acc = a.zero_element();
        for x in g.elements() {
            tail[n - 1] = x;
            acc = a.add(&acc, z.get(&tail));
        }
        a.scale(factor, &acc)
    })?;
    if coboundary(&b)? != *z {
        return Err(Error::theory(
            "coprime_witness",
            "averaging did not produce a primitive; the input may not be a cocycle",
        ));
    }
    Ok(b)
}

/// The module over `H` that the class of `restrict_cochain` lives in.
pub fn restricted_module(module: &GModule, h: &Subgroup) -> (Arc<FiniteGroup>, GModule) {
    crate::gmodule::restrict_module(module, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::parse_builtin;
    use proptest::prelude::*;

    fn group(spec: &str) -> Arc<FiniteGroup> {
        Arc::new(parse_builtin(spec).unwrap())
    }

    fn trivial(spec: &str, k: u64) -> GModule {
        GModule::trivial(group(spec), FiniteAbelianGroup::cyclic(k))
    }

    fn inversion(n: usize, k: u64) -> GModule {
        let g = Arc::new(FiniteGroup::cyclic(n));
        GModule::from_generators(g, FiniteAbelianGroup::cyclic(k), &[1], &[Matrix::from_i64_rows(&[vec![-1]])]).unwrap()
    }

    fn factors(m: &GModule, n: usize) -> Vec<u64> {
        cohomology_group(m, n).unwrap().abelian().factors().to_vec()
    }

    #[test]
    fn coboundary_examples() {
        let m = inversion(2, 3);
        let a = Cochain::from_fn(&m, 0, |_| vec![1]).unwrap();
        let d = coboundary(&a).unwrap();
        assert_eq!(d.get(&[1]), &[1]);
        assert_eq!(d.get(&[0]), &[0]);
        let t = trivial("cyclic:2", 5);
        let c = Cochain::from_fn(&t, 1, |g| vec![if g[0] == 1 { 2 } else { 0 }]).unwrap();
        assert_eq!(coboundary(&c).unwrap().get(&[1, 1]), &[4]);
    }

    #[test]
    fn small_groups() {
        for n in 1..=3 {
            assert!(factors(&trivial("trivial", 6), n).is_empty());
            assert!(factors(&inversion(2, 3), n).is_empty());
        }
        assert_eq!(factors(&trivial("cyclic:2", 2), 3), vec![2]);
        assert_eq!(factors(&trivial("cyclic:2", 2), 0), vec![2]);
        assert_eq!(factors(&trivial("product:[cyclic:2,cyclic:2]", 2), 1), vec![2, 2]);
        assert_eq!(factors(&trivial("product:[cyclic:2,cyclic:2]", 2), 2), vec![2, 2, 2]);
        assert_eq!(factors(&trivial("cyclic:6", 12), 2), vec![6]);
        let s3 = trivial("sym:3", 3);
        assert_eq!(cohomology_orders(&s3, 4).unwrap(), vec![3, 1, 1, 3, 3]);
        let s3 = trivial("sym:3", 2);
        assert_eq!(cohomology_orders(&s3, 3).unwrap(), vec![2, 2, 2, 2]);
        for n in 1..=3 {
            assert_eq!(factors(&inversion(4, 4), n), vec![2]);
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let m = trivial("product:[cyclic:2,cyclic:6]", 12);
        let h = Arc::new(cohomology_group(&m, 2).unwrap());
        for x in h.abelian().elements() {
            let cls = h.class_from_coordinates(&x).unwrap();
            assert_eq!(h.coordinates(&cls.representative).unwrap(), x);
        }
    }

    #[test]
    fn restriction_examples() {
        let m = trivial("cyclic:4", 2);
        let h = Arc::new(cohomology_group(&m, 2).unwrap());
        assert_eq!(h.abelian().factors(), &[2]);
        let g = m.group().clone();
        let gen = h.class_from_coordinates(&[1]).unwrap();
        let sub = g.generated(&[2]);
        // the generator classifies Z/8 -> Z/4; over 2Z/4 it pulls back to the
        // nonsplit Z/4 -> Z/2, so the restriction survives
        assert_eq!(restriction(&gen, &sub).unwrap().coordinates, vec![1]);
        let same = restriction(&gen, &g.whole()).unwrap();
        assert_eq!(same.coordinates, vec![1]);
        assert!(restriction(&gen, &g.trivial_subgroup()).unwrap().is_zero());
        // the degree one generator is the surjection Z/4 -> Z/2, which kills 2
        let h1 = Arc::new(cohomology_group(&m, 1).unwrap());
        let gen = h1.class_from_coordinates(&[1]).unwrap();
        assert!(restriction(&gen, &sub).unwrap().is_zero());
    }

    #[test]
    fn transfer_of_restriction_is_index() {
        let cases = [("sym:3", 2u64), ("sym:3", 3), ("dihedral:4", 2), ("cyclic:4", 4)];
        for (spec, k) in cases {
            let m = trivial(spec, k);
            let g = m.group().clone();
            let subs = crate::groups::enumerate_subgroups(&g).unwrap();
            for n in 1..=2 {
                let h = Arc::new(cohomology_group(&m, n).unwrap());
                for x in h.abelian().generators() {
                    let cls = h.class_from_coordinates(&x).unwrap();
                    for s in &subs {
                        let r = restriction(&cls, s).unwrap();
                        let t = transfer(&r, &m, s).unwrap();
                        let index = (g.order() / s.order()) as i64;
                        assert_eq!(t.coordinates, h.abelian().scale(index, &x), "{spec} {n} {s:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn transfer_twisted() {
        let m = inversion(4, 4);
        let g = m.group().clone();
        let sub = g.generated(&[2]);
        for n in 1..=3 {
            let h = Arc::new(cohomology_group(&m, n).unwrap());
            let cls = h.class_from_coordinates(&[1]).unwrap();
            let t = transfer(&restriction(&cls, &sub).unwrap(), &m, &sub).unwrap();
            assert!(t.is_zero());
            let t = transfer(&restriction(&cls, &g.whole()).unwrap(), &m, &g.whole()).unwrap();
            assert_eq!(t.coordinates, vec![1]);
        }
    }

    #[test]
    fn witnesses() {
        let m = trivial("cyclic:2", 2);
        let h = Arc::new(cohomology_group(&m, 1).unwrap());
        let zero = h.cocycle_from_coordinates(&[0]).unwrap();
        let one = h.cocycle_from_coordinates(&[1]).unwrap();
        assert!(cohomologous_witness(&zero, &one).unwrap().is_none());
        assert!(cohomologous_witness(&one, &one).unwrap().unwrap().is_zero());

        let m = trivial("sym:3", 6);
        let h = Arc::new(cohomology_group(&m, 2).unwrap());
        let c = h.cocycle_from_coordinates(&vec![1; h.abelian().rank()]).unwrap();
        let b = Cochain::from_fn(&m, 1, |t| vec![if t[0] == 0 { 0 } else { (t[0] * 5 + 1) as i64 }]).unwrap();
        let shifted = c.add(&coboundary(&b).unwrap());
        let w = cohomologous_witness(&shifted, &c).unwrap().unwrap();
        assert_eq!(coboundary(&w).unwrap(), shifted.sub(&c));
        assert!(w.is_normalized());
    }

    #[test]
    fn coprime_witnesses() {
        let m = inversion(2, 3);
        let b = Cochain::from_fn(&m, 1, |t| vec![t[0] as i64]).unwrap();
        let z = coboundary(&b).unwrap();
        let w = coprime_witness(&z).unwrap();
        assert_eq!(coboundary(&w).unwrap(), z);
        let s3 = trivial("sym:3", 5);
        let b = Cochain::from_fn(&s3, 2, |t| vec![if t.contains(&0) { 0 } else { (t[0] + 2 * t[1]) as i64 }]).unwrap();
        let z = coboundary(&b).unwrap();
        let w = coprime_witness(&z).unwrap();
        assert_eq!(coboundary(&w).unwrap(), z);
        assert!(coprime_witness(&Cochain::zero(&trivial("cyclic:2", 2), 1).unwrap()).is_err());
    }

    #[test]
    fn unnormalized_input_rejected() {
        let m = trivial("cyclic:2", 2);
        let h = cohomology_group(&m, 1).unwrap();
        let c = Cochain::from_fn(&m, 1, |_| vec![1]).unwrap();
        assert!(h.coordinates(&c).is_err());
    }

    fn module_strategy() -> impl Strategy<Value = GModule> {
        prop_oneof![
            Just(inversion(2, 3)),
            Just(inversion(4, 4)),
            Just(trivial("sym:3", 4)),
            Just(trivial("product:[cyclic:2,cyclic:2]", 6)),
            Just(inversion(2, 9)),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]
        #[test]
        fn delta_squared_vanishes(m in module_strategy(), n in 0usize..3, seed in any::<u64>()) {
            let mut s = seed;
            let c = Cochain::from_fn(&m, n, |_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                vec![(s >> 33) as i64]
            }).unwrap();
            let dd = coboundary(&coboundary(&c).unwrap()).unwrap();
            prop_assert!(dd.is_zero());
        }
    }
}
