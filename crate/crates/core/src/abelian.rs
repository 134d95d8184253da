//! Finite abelian groups in invariant-factor form.
//!
//! Elements are coordinate vectors reduced modulo the factors. Homomorphisms
//! are integer matrices acting on column vectors: a map `A -> B` has one row
//! per factor of `B` and one column per factor of `A`.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::arith;
use crate::error::{Error, Result};
use crate::linalg::{smith_normal_form, BigMatrix, Matrix};
use crate::scalar::IntScalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
}

impl FiniteAbelianGroup {
    /// Factors must be at least 2 and form a divisibility chain.
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        for (i, &d) in factors.iter().enumerate() {
            if d < 2 {
                return Err(Error::input(
                    format!("/{i}"),
                    format!("invariant factor {d} is below 2"),
                    "drop trivial factors; use [] for the zero group",
                ));
            }
        }
        for w in factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::input(
                    "",
                    format!("invariant factors {} and {} do not divide", w[0], w[1]),
                    "list factors as d1 | d2 | ... ; e.g. [2, 6] not [6, 2]",
                ));
            }
        }
        Ok(FiniteAbelianGroup { factors })
    }

    pub fn zero() -> Self {
        FiniteAbelianGroup { factors: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Self {
        if n <= 1 {
            Self::zero()
        } else {
            FiniteAbelianGroup { factors: vec![n] }
        }
    }

    /// Invariant-factor form of `Z/n_1 + ... + Z/n_k` for arbitrary `n_i`.
    pub fn from_orders(orders: &[u64]) -> Self {
        let rels: Vec<Vec<i64>> = orders
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let mut r = vec![0; orders.len()];
                r[i] = n as i64;
                r
            })
            .collect();
        Quotient::new(orders.len(), &rels).group
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    /// Largest element order.
    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn zero_element(&self) -> Vec<i64> {
        vec![0; self.rank()]
    }

    pub fn reduce(&self, x: &mut [i64]) {
        for (v, &d) in x.iter_mut().zip(&self.factors) {
            *v = v.rem_euclid(d as i64);
        }
    }

    pub fn reduced(&self, mut x: Vec<i64>) -> Vec<i64> {
        self.reduce(&mut x);
        x
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        self.reduced(x.iter().zip(y).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        self.reduced(x.iter().zip(y).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self, x: &[i64]) -> Vec<i64> {
        self.reduced(x.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64, x: &[i64]) -> Vec<i64> {
        self.reduced(x.iter().map(|a| mulmod(*a, k, 0)).collect())
    }

    pub fn is_zero(&self, x: &[i64]) -> bool {
        x.iter().zip(&self.factors).all(|(v, &d)| v.rem_euclid(d as i64) == 0)
    }

    pub fn is_reduced(&self, x: &[i64]) -> bool {
        x.len() == self.rank() && x.iter().zip(&self.factors).all(|(&v, &d)| v >= 0 && (v as u64) < d)
    }

    /// Every element, in lexicographic order of coordinates.
    pub fn elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for &d in &self.factors {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..d as i64).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    /// Standard generators, one per factor.
    pub fn generators(&self) -> Vec<Vec<i64>> {
        (0..self.rank())
            .map(|i| {
                let mut e = self.zero_element();
                e[i] = 1;
                e
            })
            .collect()
    }

    pub fn element_order(&self, x: &[i64]) -> u64 {
        x.iter().zip(&self.factors).fold(1, |acc, (&v, &d)| {
            let g = arith::gcd(v.rem_euclid(d as i64) as u64, d);
            let o = d / g;
            acc / arith::gcd(acc, o) * o
        })
    }

    /// Direct sum; coordinates are reordered into invariant-factor form, so
    /// the inclusions and projections are returned alongside.
    pub fn direct_sum(&self, other: &Self) -> DirectSum {
        let mut orders = self.factors.clone();
        orders.extend_from_slice(&other.factors);
        let rels: Vec<Vec<i64>> = orders
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let mut r = vec![0; orders.len()];
                r[i] = n as i64;
                r
            })
            .collect();
        let q = Quotient::new(orders.len(), &rels);
        let (r1, r2) = (self.rank(), other.rank());
        let incl = |offset: usize, r: usize| {
            let mut m = Matrix::<i64>::zeros(q.group.rank(), r);
            for j in 0..r {
                let mut e = vec![0; r1 + r2];
                e[offset + j] = 1;
                let c = q.coords(&e);
                for i in 0..q.group.rank() {
                    m[(i, j)] = c[i];
                }
            }
            m
        };
        let proj = |offset: usize, r: usize| {
            let mut m = Matrix::<i64>::zeros(r, q.group.rank());
            for j in 0..q.group.rank() {
                let lift = q.lift(j);
                for i in 0..r {
                    m[(i, j)] = lift[offset + i];
                }
            }
            m
        };
        DirectSum {
            group: q.group.clone(),
            incl: [incl(0, r1), incl(r1, r2)],
            proj: [proj(0, r1), proj(r1, r2)],
        }
    }

    /// Whether an integer matrix defines a homomorphism `self -> target`.
    pub fn is_hom_to(&self, target: &Self, m: &Matrix<i64>) -> bool {
        if m.nrows() != target.rank() || m.ncols() != self.rank() {
            return false;
        }
        (0..self.rank()).all(|j| {
            (0..target.rank()).all(|i| mulmod(m[(i, j)], self.factors[j] as i64, target.factors[i] as i64) == 0)
        })
    }

    /// Apply `m: self -> target` to an element.
    pub fn apply(&self, target: &Self, m: &Matrix<i64>, x: &[i64]) -> Vec<i64> {
        let mut y = vec![0i64; target.rank()];
        for (i, yi) in y.iter_mut().enumerate() {
            let d = target.factors[i] as i64;
            let mut acc = 0i64;
            for (j, &xj) in x.iter().enumerate() {
                acc = (acc + mulmod(m[(i, j)], xj, d)) % d;
            }
            *yi = acc.rem_euclid(d);
        }
        y
    }

    /// Subgroup generated by `gens`, with a small generating set.
    pub fn subgroup(&self, gens: &[Vec<i64>]) -> SubgroupData {
        let r = self.rank();
        let mut rels: Vec<Vec<i64>> = gens.iter().map(|g| self.reduced(g.clone())).collect();
        for (i, &d) in self.factors.iter().enumerate() {
            let mut e = vec![0; r];
            e[i] = d as i64;
            rels.push(e);
        }
        let big: Vec<Vec<BigInt>> = rels
            .iter()
            .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let index: u64;
        let mut small_gens = Vec::new();
        if r == 0 {
            index = 1;
        } else {
            let s = smith_normal_form(&Matrix::from_rows(&big));
            index = s.diag[..r].iter().map(|d| d.to_i64_exact() as u64).product();
            // the lattice is spanned by d_i times the rows of V^-1
            for i in 0..r {
                let d = &s.diag[i];
                let g: Vec<i64> = (0..r)
                    .map(|j| {
                        let x = (d * &s.v_inv[(i, j)]).mod_floor(&BigInt::from(self.factors[j]));
                        x.to_i64_exact()
                    })
                    .collect();
                if !self.is_zero(&g) {
                    small_gens.push(g);
                }
            }
        }
        small_gens.sort();
        small_gens.dedup();
        SubgroupData {
            order: self.order() / index,
            generators: small_gens,
        }
    }

    /// Image of `m: self -> target` as a subgroup of `target`.
    pub fn image(&self, target: &Self, m: &Matrix<i64>) -> SubgroupData {
        let cols: Vec<Vec<i64>> = (0..self.rank()).map(|j| target.reduced(m.column(j))).collect();
        target.subgroup(&cols)
    }

    /// Kernel of `m: self -> target`, by enumeration.
    pub fn kernel_elements(&self, target: &Self, m: &Matrix<i64>) -> Vec<Vec<i64>> {
        self.elements()
            .into_iter()
            .filter(|x| target.is_zero(&self.apply(target, m, x)))
            .collect()
    }

    /// Isomorphism type of a subgroup given by its full element list, read
    /// off from the number of elements killed by each prime power.
    pub fn type_of(&self, elements: &[Vec<i64>]) -> FiniteAbelianGroup {
        let n = elements.len() as u64;
        let mut cyclic = Vec::new();
        for (p, _) in arith::factorize(n) {
            // c[k] = log_p #{x : p^k x = 0}
            let mut c = vec![0u32];
            let mut q: i64 = 1;
            loop {
                q *= p as i64;
                let killed = elements.iter().filter(|x| self.is_zero(&self.scale(q, x))).count() as u64;
                c.push(arith::valuation(killed, p));
                if killed == arith::p_part(n, p) {
                    break;
                }
            }
            // factors of exponent >= k number c[k] - c[k-1]
            let top = c.len() - 1;
            for k in 1..=top {
                let at_least = c[k] - c[k - 1];
                let at_least_next = if k < top { c[k + 1] - c[k] } else { 0 };
                for _ in 0..(at_least - at_least_next) {
                    cyclic.push(p.pow(k as u32));
                }
            }
        }
        FiniteAbelianGroup::from_orders(&cyclic)
    }

    /// `target / im(m)`.
    pub fn cokernel(&self, target: &Self, m: &Matrix<i64>) -> Quotient {
        let r = target.rank();
        let mut rels: Vec<Vec<i64>> = (0..self.rank()).map(|j| target.reduced(m.column(j))).collect();
        for (i, &d) in target.factors.iter().enumerate() {
            let mut e = vec![0; r];
            e[i] = d as i64;
            rels.push(e);
        }
        Quotient::new(r, &rels)
    }

    pub fn is_injective(&self, target: &Self, m: &Matrix<i64>) -> bool {
        self.image(target, m).order == self.order()
    }

    pub fn is_bijective(&self, target: &Self, m: &Matrix<i64>) -> bool {
        self.order() == target.order() && self.is_injective(target, m)
    }

    /// Inverse of a bijective `m: self -> target`, by enumeration.
    pub fn invert(&self, target: &Self, m: &Matrix<i64>) -> Option<Matrix<i64>> {
        if !self.is_bijective(target, m) {
            return None;
        }
        let mut inv = Matrix::zeros(self.rank(), target.rank());
        let els = self.elements();
        for j in 0..target.rank() {
            let mut e = target.zero_element();
            e[j] = 1;
            let x = els.iter().find(|x| self.apply(target, m, x) == e)?;
            for i in 0..self.rank() {
                inv[(i, j)] = x[i];
            }
        }
        Some(inv)
    }
}

/// Matrix of `outer . inner`, reduced into `target`, the codomain of `outer`.
pub fn compose_maps(target: &FiniteAbelianGroup, outer: &Matrix<i64>, inner: &Matrix<i64>) -> Matrix<i64> {
    let mut out = Matrix::zeros(outer.nrows(), inner.ncols());
    for i in 0..outer.nrows() {
        let d = target.factors[i] as i64;
        for j in 0..inner.ncols() {
            let mut acc = 0;
            for k in 0..outer.ncols() {
                acc = (acc + mulmod(outer[(i, k)], inner[(k, j)], d)) % d;
            }
            out[(i, j)] = acc.rem_euclid(d);
        }
    }
    out
}

/// `a * b mod m` without overflow; `m = 0` means no reduction.
pub(crate) fn mulmod(a: i64, b: i64, m: i64) -> i64 {
    let p = i128::from(a) * i128::from(b);
    if m == 0 {
        i64::try_from(p).expect("product overflows i64")
    } else {
        (p.rem_euclid(i128::from(m))) as i64
    }
}

impl std::fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        f.write_str(&parts.join(" x "))
    }
}

#[derive(Clone, Debug)]
pub struct DirectSum {
    pub group: FiniteAbelianGroup,
    pub incl: [Matrix<i64>; 2],
    pub proj: [Matrix<i64>; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupData {
    pub order: u64,
    pub generators: Vec<Vec<i64>>,
}

/// `Z^n` modulo the row span of a relation matrix, brought to invariant
/// factors. The quotient must be finite.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FiniteAbelianGroup,
    n: usize,
    /// `coords(x) = (x V)` restricted to the surviving factors.
    v: BigMatrix,
    v_inv: BigMatrix,
    kept: Vec<usize>,
}

impl Quotient {
    pub fn new(n: usize, relations: &[Vec<i64>]) -> Self {
        let rows: Vec<Vec<BigInt>> = relations
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let k = if rows.is_empty() {
            Matrix::<BigInt>::zeros(0, n)
        } else {
            Matrix::from_rows(&rows)
        };
        let s = smith_normal_form(&k);
        let mut kept = Vec::new();
        let mut factors = Vec::new();
        for i in 0..n {
            let d = s.diag.get(i).map_or(0, |d| d.to_i64_exact());
            assert!(d != 0, "quotient is infinite");
            if d > 1 {
                kept.push(i);
                factors.push(d as u64);
            }
        }
        Quotient {
            group: FiniteAbelianGroup { factors },
            n,
            v: s.v,
            v_inv: s.v_inv,
            kept,
        }
    }

    /// Coordinates of the class of `x in Z^n`.
    pub fn coords(&self, x: &[i64]) -> Vec<i64> {
        self.kept
            .iter()
            .zip(&self.group.factors)
            .map(|(&i, &d)| {
                let mut acc = BigInt::from(0);
                for (j, &xj) in x.iter().enumerate() {
                    acc += &self.v[(j, i)] * BigInt::from(xj);
                }
                acc.mod_floor(&BigInt::from(d)).to_i64_exact()
            })
            .collect()
    }

    /// A vector in `Z^n` representing the `j`-th generator of the quotient.
    pub fn lift(&self, j: usize) -> Vec<i64> {
        let i = self.kept[j];
        (0..self.n)
            .map(|c| self.v_inv[(i, c)].to_i64_exact())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_forms() {
        assert_eq!(FiniteAbelianGroup::from_orders(&[2, 3]).factors(), &[6]);
        assert_eq!(FiniteAbelianGroup::from_orders(&[4, 6]).factors(), &[2, 12]);
        assert_eq!(FiniteAbelianGroup::from_orders(&[1, 1]).factors(), &[] as &[u64]);
        assert!(FiniteAbelianGroup::new(vec![6, 2]).is_err());
        assert!(FiniteAbelianGroup::new(vec![1]).is_err());
    }

    #[test]
    fn direct_sum_maps() {
        let a = FiniteAbelianGroup::cyclic(4);
        let b = FiniteAbelianGroup::cyclic(6);
        let s = a.direct_sum(&b);
        assert_eq!(s.group.factors(), &[2, 12]);
        for x in a.elements() {
            for y in b.elements() {
                let ix = s.group.apply(&s.group, &Matrix::identity(2), &s.group.add(
                    &a.apply(&s.group, &s.incl[0], &x),
                    &b.apply(&s.group, &s.incl[1], &y),
                ));
                assert_eq!(s.group.apply(&a, &s.proj[0], &ix), x);
                assert_eq!(s.group.apply(&b, &s.proj[1], &ix), y);
            }
        }
        assert!(a.is_hom_to(&s.group, &s.incl[0]));
        assert!(s.group.is_hom_to(&b, &s.proj[1]));
    }

    #[test]
    fn subgroups() {
        let a = FiniteAbelianGroup::new(vec![2, 4]).unwrap();
        assert_eq!(a.subgroup(&[vec![0, 2]]).order, 2);
        assert_eq!(a.subgroup(&[vec![1, 1]]).order, 4);
        assert_eq!(a.subgroup(&[vec![1, 0], vec![0, 1]]).order, 8);
        assert_eq!(a.subgroup(&[]).order, 1);
        let h = a.subgroup(&[vec![1, 2], vec![1, 0]]);
        assert_eq!(h.order, 4);
        assert_eq!(a.subgroup(&h.generators).order, 4);
        assert_eq!(a.element_order(&[1, 2]), 2);
    }
}
