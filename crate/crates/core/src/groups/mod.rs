//! Finite groups as explicit multiplication tables.
//!
//! Elements are indices `0..order`. All derived data (subgroups, cosets,
//! witnesses) is reported in canonical order: sorted element sets and the
//! smallest qualifying element index.

mod builtin;
mod iso;
mod lattice;

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

pub use builtin::parse_builtin;
pub use iso::find_isomorphism;
pub use lattice::{
    are_conjugate, enumerate_subgroups, is_nilpotent_group, lower_central_series, sylow_subgroups,
    NilpotencyCertificate,
};

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

impl FiniteGroup {
    /// Build from a multiplication table, checking the group axioms.
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::input("", "multiplication table is empty", "a group has at least one element"));
        }
        let mut mul = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::input(
                    format!("/{i}"),
                    format!("row has {} entries, expected {n}", row.len()),
                    "the table must be square",
                ));
            }
            for (j, &x) in row.iter().enumerate() {
                if x >= n {
                    return Err(Error::input(
                        format!("/{i}/{j}"),
                        format!("entry {x} out of range 0..{n}"),
                        "entries are element indices",
                    ));
                }
            }
            mul.extend_from_slice(row);
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul[e * n + x] == x && mul[x * n + e] == x))
            .ok_or_else(|| Error::input("", "no two-sided identity element", "check the table"))?;
        let mut inv = vec![usize::MAX; n];
        for x in 0..n {
            let y = (0..n)
                .find(|&y| mul[x * n + y] == identity && mul[y * n + x] == identity)
                .ok_or_else(|| {
                    Error::input(format!("/{x}"), format!("element {x} has no inverse"), "check the table")
                })?;
            inv[x] = y;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mul[a * n + b];
                for c in 0..n {
                    if mul[ab * n + c] != mul[a * n + mul[b * n + c]] {
                        return Err(Error::input(
                            "",
                            format!("associativity fails for ({a}, {b}, {c})"),
                            "the table must define an associative product",
                        ));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            name: name.into(),
            order: n,
            mul,
            inv,
            identity,
            labels: None,
        })
    }

    /// Construction from a product closure known to satisfy the axioms.
    pub(crate) fn from_fn(
        name: impl Into<String>,
        order: usize,
        identity: usize,
        product: impl Fn(usize, usize) -> usize,
        labels: Option<Vec<String>>,
    ) -> Self {
        let mut mul = vec![0; order * order];
        for a in 0..order {
            for b in 0..order {
                mul[a * order + b] = product(a, b);
            }
        }
        let mut inv = vec![0; order];
        for a in 0..order {
            inv[a] = (0..order)
                .find(|&b| mul[a * order + b] == identity)
                .expect("group element without inverse");
        }
        FiniteGroup {
            name: name.into(),
            order,
            mul,
            inv,
            identity,
            labels,
        }
    }

    pub fn trivial() -> Self {
        Self::from_fn("trivial", 1, 0, |_, _| 0, None)
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        Self::from_fn(format!("cyclic:{n}"), n, 0, |a, b| (a + b) % n, None)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Elements other than the identity, ascending.
    pub fn non_identity(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.order).filter(move |&g| g != self.identity)
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => g.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.order);
        self.labels = Some(labels);
        self
    }

    /// `g x g^-1`
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `x^-1 y^-1 x y`
    pub fn commutator(&self, x: usize, y: usize) -> usize {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    pub fn pow(&self, g: usize, k: usize) -> usize {
        let mut acc = self.identity;
        for _ in 0..k {
            acc = self.mul(acc, g);
        }
        acc
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted(self.elements().collect())
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_sorted(vec![self.identity])
    }

    /// Subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> Subgroup {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        Subgroup::from_sorted((0..self.order).filter(|&x| seen[x]).collect())
    }

    /// Check that a sorted element list is a subgroup.
    pub fn subgroup(&self, mut elements: Vec<usize>) -> Result<Subgroup> {
        elements.sort_unstable();
        elements.dedup();
        if elements.iter().any(|&x| x >= self.order) {
            return Err(Error::input("", "subgroup element out of range", "use element indices of the parent group"));
        }
        let h = Subgroup::from_sorted(elements);
        if !h.contains(self.identity) {
            return Err(Error::input("", "subset does not contain the identity", "subgroups contain the identity"));
        }
        for &a in h.elements() {
            if !h.contains(self.inv(a)) {
                return Err(Error::input("", format!("not closed under inverses at {a}"), "close the subset"));
            }
            for &b in h.elements() {
                if !h.contains(self.mul(a, b)) {
                    return Err(Error::input(
                        "",
                        format!("not closed under products at ({a}, {b})"),
                        "close the subset",
                    ));
                }
            }
        }
        Ok(h)
    }

    pub fn conjugate_subgroup(&self, g: usize, h: &Subgroup) -> Subgroup {
        let mut els: Vec<usize> = h.elements().iter().map(|&x| self.conjugate(g, x)).collect();
        els.sort_unstable();
        Subgroup::from_sorted(els)
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        self.elements()
            .all(|g| h.elements().iter().all(|&x| h.contains(self.conjugate(g, x))))
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        Subgroup::from_sorted(
            self.elements()
                .filter(|&g| h.elements().iter().all(|&x| h.contains(self.conjugate(g, x))))
                .collect(),
        )
    }

    /// Left coset representatives `g H`, each the smallest element of its
    /// coset, in ascending order.
    pub fn coset_representatives(&self, h: &Subgroup) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        let mut reps = Vec::new();
        for g in self.elements() {
            if seen[g] {
                continue;
            }
            reps.push(g);
            for &x in h.elements() {
                seen[self.mul(g, x)] = true;
            }
        }
        reps
    }

    /// The subgroup as a group in its own right, with elements renumbered by
    /// their position in the sorted element list. Returns the embedding.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> (FiniteGroup, Vec<usize>) {
        let els = h.elements().to_vec();
        let pos = |x: usize| els.binary_search(&x).expect("subgroup not closed");
        let identity = pos(self.identity);
        let labels = self.labels.as_ref().map(|l| els.iter().map(|&x| l[x].clone()).collect());
        let g = FiniteGroup::from_fn(
            format!("{}<{}>", self.name, els.len()),
            els.len(),
            identity,
            |a, b| pos(self.mul(els[a], els[b])),
            labels,
        );
        (g, els)
    }

    /// Quotient by a normal subgroup, with the projection table. Cosets are
    /// numbered by ascending smallest representative.
    pub fn quotient(&self, n: &Subgroup) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_normal(n) {
            return Err(Error::precondition("", "subgroup is not normal", "quotients need a normal subgroup"));
        }
        let reps = self.coset_representatives(n);
        let mut proj = vec![0; self.order];
        for (i, &r) in reps.iter().enumerate() {
            for &x in n.elements() {
                proj[self.mul(r, x)] = i;
            }
        }
        let identity = proj[self.identity];
        let q = FiniteGroup::from_fn(
            format!("{}/{}", self.name, n.order()),
            reps.len(),
            identity,
            |a, b| proj[self.mul(reps[a], reps[b])],
            None,
        );
        Ok((q, proj))
    }

    /// Direct product; the pair `(a, b)` has index `a * |H| + b`.
    pub fn product(&self, other: &FiniteGroup) -> FiniteGroup {
        let m = other.order;
        let labels = match (&self.labels, &other.labels) {
            (None, None) => None,
            _ => Some(
                (0..self.order * m)
                    .map(|i| format!("({},{})", self.label(i / m), other.label(i % m)))
                    .collect(),
            ),
        };
        FiniteGroup::from_fn(
            format!("product:[{},{}]", self.name, other.name),
            self.order * m,
            self.identity * m + other.identity,
            |x, y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m),
            labels,
        )
    }

    /// Check that a table defines a homomorphism `self -> target`.
    pub fn check_homomorphism(&self, target: &FiniteGroup, table: &[usize]) -> Result<()> {
        if table.len() != self.order {
            return Err(Error::input(
                "",
                format!("homomorphism table has {} entries, expected {}", table.len(), self.order),
                "one image per source element",
            ));
        }
        if let Some(x) = table.iter().position(|&y| y >= target.order) {
            return Err(Error::input(format!("/{x}"), "image out of range", "images are target element indices"));
        }
        for a in self.elements() {
            for b in self.elements() {
                if table[self.mul(a, b)] != target.mul(table[a], table[b]) {
                    return Err(Error::input(
                        "",
                        format!("not a homomorphism at ({a}, {b})"),
                        "images must respect multiplication",
                    ));
                }
            }
        }
        Ok(())
    }

    /// A small generating set: greedily add the smallest element outside
    /// the span so far.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.trivial_subgroup();
        for g in self.elements() {
            if !span.contains(g) {
                gens.push(g);
                span = self.generated(&gens);
            }
        }
        gens
    }

    /// Extend generator images to a full table by walking words in the
    /// generators; `None` if the images are inconsistent or the generators
    /// do not generate the group.
    pub fn extend_from_generators<T: Clone + PartialEq>(
        &self,
        gens: &[usize],
        images: &[T],
        identity: T,
        compose: impl Fn(&T, &T) -> T,
    ) -> Option<Vec<T>> {
        self.extend_partial(gens, images, identity, compose)?
            .into_iter()
            .collect()
    }

    /// Like [`Self::extend_from_generators`] but only over the subgroup the
    /// generators span; unreached elements stay `None`.
    pub fn extend_partial<T: Clone + PartialEq>(
        &self,
        gens: &[usize],
        images: &[T],
        identity: T,
        compose: impl Fn(&T, &T) -> T,
    ) -> Option<Vec<Option<T>>> {
        let mut table: Vec<Option<T>> = vec![None; self.order];
        table[self.identity] = Some(identity);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            let tx = table[x].clone().expect("visited");
            for (g, img) in gens.iter().zip(images) {
                let y = self.mul(x, *g);
                let ty = compose(&tx, img);
                match &table[y] {
                    Some(existing) if *existing != ty => return None,
                    Some(_) => {}
                    None => {
                        table[y] = Some(ty);
                        queue.push_back(y);
                    }
                }
            }
        }
        Some(table)
    }
}

/// A subgroup, stored as its sorted element list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub(crate) fn from_sorted(elements: Vec<usize>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Subgroup { elements }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    /// Canonical ordering key: size, then element list.
    pub fn canonical_key(&self) -> (usize, &[usize]) {
        (self.elements.len(), &self.elements)
    }
}

/// Image of a homomorphism table as a subgroup of the target.
pub fn image_subgroup(table: &[usize]) -> Subgroup {
    let mut els = table.to_vec();
    els.sort_unstable();
    els.dedup();
    Subgroup::from_sorted(els)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_validation_rejects_non_groups() {
        assert!(FiniteGroup::from_table("z2", vec![vec![0, 1], vec![1, 0]]).is_ok());
        // no identity
        assert!(FiniteGroup::from_table("bad", vec![vec![1, 0], vec![0, 0]]).is_err());
        // not square
        assert!(FiniteGroup::from_table("bad", vec![vec![0, 1], vec![1]]).is_err());
        // a loop that is not associative: x*x = e, x*y = z, ... (order 5 Latin square)
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_table("loop", t).unwrap_err();
        assert!(err.to_string().contains("associativity"));
    }

    #[test]
    fn quotient_of_s3_by_a3() {
        let s3 = parse_builtin("sym:3").unwrap();
        let a3 = s3.generated(&[3]);
        assert_eq!(a3.order(), 3);
        let (q, proj) = s3.quotient(&a3).unwrap();
        assert_eq!(q.order(), 2);
        s3.check_homomorphism(&q, &proj).unwrap();
    }

    #[test]
    fn subgroup_as_group_embedding_is_homomorphism() {
        let d4 = parse_builtin("dihedral:4").unwrap();
        for h in enumerate_subgroups(&d4).unwrap() {
            let (g, emb) = d4.subgroup_as_group(&h);
            g.check_homomorphism(&d4, &emb).unwrap();
        }
    }

    #[test]
    fn coset_representatives_are_minimal() {
        let s3 = parse_builtin("sym:3").unwrap();
        let h = s3.generated(&[1]);
        let reps = s3.coset_representatives(&h);
        assert_eq!(reps.len(), 3);
        assert_eq!(reps[0], 0);
    }
}
