//! The normalized bar complex of one primary component, as sparse matrices
//! over `Z/p^a`.
//!
//! A `p`-primary module `A_p = Z/p^e_1 + ... + Z/p^e_r` is embedded in
//! `(Z/p^a)^r` by `x_i -> p^(a - e_i) x_i`. The coboundary in these
//! coordinates, precomposed with the embedding, is the integer bar
//! differential with row `(t, i)` scaled by `p^(a - e_i)`; its row and column
//! modules therefore measure `delta(C^n)` exactly.

use std::sync::Arc;

use rayon::prelude::*;

use super::cochain::Cochain;
use crate::gmodule::{primary_decompose, GModule, PrimaryDecomposition};
use crate::groups::FiniteGroup;
use crate::linalg::local::{Echelon, PrimePowerRing, SparseRow};

pub(crate) struct LocalComplex {
    pub ring: PrimePowerRing,
    pub exps: Vec<u32>,
    pub decomposition: PrimaryDecomposition,
    group: Arc<FiniteGroup>,
    /// Action matrices of `A_p`, row-major, entries reduced.
    action: Vec<Vec<i64>>,
    nonid: Vec<usize>,
    pos: Vec<usize>,
}

impl LocalComplex {
    pub fn new(module: &GModule, p: u64) -> Self {
        let decomposition = primary_decompose(module, p);
        let ap = decomposition.p_part.clone();
        let exps: Vec<u32> = ap.abelian().factors().iter().map(|&d| crate::arith::valuation(d, p)).collect();
        let a = exps.iter().copied().max().expect("p divides the module order");
        let ring = PrimePowerRing::new(p, a);
        let group = module.group().clone();
        let r = exps.len();
        let action = group
            .elements()
            .map(|g| {
                let m = ap.action(g);
                (0..r * r).map(|k| m[(k / r, k % r)]).collect()
            })
            .collect();
        let e = group.identity();
        let nonid: Vec<usize> = group.non_identity().collect();
        let mut pos = vec![usize::MAX; group.order()];
        for (i, &g) in nonid.iter().enumerate() {
            pos[g] = i;
        }
        debug_assert_eq!(pos[e], usize::MAX);
        LocalComplex {
            ring,
            exps,
            decomposition,
            group,
            action,
            nonid,
            pos,
        }
    }

    pub fn rank(&self) -> usize {
        self.exps.len()
    }

    /// Number of normalized `n`-tuples.
    pub fn tuples(&self, n: usize) -> usize {
        self.nonid.len().pow(n as u32)
    }

    pub fn dim(&self, n: usize) -> usize {
        self.tuples(n) * self.rank()
    }

    /// Composition length of the normalized cochain module `C^n(G; A_p)`.
    pub fn cochain_length(&self, n: usize) -> u64 {
        self.tuples(n) as u64 * self.exps.iter().map(|&e| u64::from(e)).sum::<u64>()
    }

    fn iota_scale(&self, i: usize) -> u64 {
        self.ring.pow_p(self.ring.exponent() - self.exps[i])
    }

    /// Rows of the embedded coboundary `C^n -> C^(n+1)`.
    pub fn rows(&self, n: usize) -> Vec<SparseRow> {
        let r = self.rank();
        let n1 = self.nonid.len();
        let count = self.tuples(n + 1);
        let per_tuple: Vec<Vec<SparseRow>> = (0..count)
            .into_par_iter()
            .map(|idx| {
                let mut digits = vec![0usize; n + 1];
                let mut x = idx;
                for k in (0..=n).rev() {
                    digits[k] = x % n1;
                    x /= n1;
                }
                (0..r).map(|i| self.row(&digits, i)).collect()
            })
            .collect();
        per_tuple.into_iter().flatten().collect()
    }

    fn row(&self, digits: &[usize], i: usize) -> SparseRow {
        let ring = &self.ring;
        let r = self.rank();
        let n = digits.len() - 1;
        let n1 = self.nonid.len();
        let scale = self.iota_scale(i);
        let index = |ds: &mut dyn Iterator<Item = usize>| ds.fold(0usize, |acc, d| acc * n1 + d);
        let mut entries: Vec<(u32, i64)> = Vec::with_capacity(r + n + 1);
        let g0 = self.nonid[digits[0]];
        let src = index(&mut digits[1..].iter().copied());
        let act = &self.action[g0];
        for j in 0..r {
            let t = act[i * r + j];
            if t != 0 {
                entries.push(((src * r + j) as u32, t));
            }
        }
        for k in 0..n {
            let prod = self.group.mul(self.nonid[digits[k]], self.nonid[digits[k + 1]]);
            let pp = self.pos[prod];
            if pp == usize::MAX {
                continue;
            }
            let mut it = digits[..k].iter().copied().chain(std::iter::once(pp)).chain(digits[k + 2..].iter().copied());
            let src = index(&mut it);
            let sign = if k % 2 == 0 { -1 } else { 1 };
            entries.push(((src * r + i) as u32, sign));
        }
        let src = index(&mut digits[..n].iter().copied());
        let sign = if n % 2 == 0 { -1 } else { 1 };
        entries.push(((src * r + i) as u32, sign));
        entries.sort_unstable_by_key(|e| e.0);
        let mut out: SparseRow = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            let v = ring.mul(ring.reduce(v), scale);
            match out.last_mut() {
                Some(last) if last.0 == c => last.1 = ring.add(last.1, v),
                _ => out.push((c, v)),
            }
        }
        out.retain(|e| e.1 != 0);
        out
    }

    /// Columns of the embedded coboundary `C^n -> C^(n+1)`: the images of
    /// the standard generators of `C^n(G; A_p)`.
    pub fn columns(&self, n: usize) -> Vec<SparseRow> {
        let rows = self.rows(n);
        let mut cols: Vec<SparseRow> = vec![Vec::new(); self.dim(n)];
        for (ri, row) in rows.iter().enumerate() {
            for &(c, v) in row {
                cols[c as usize].push((ri as u32, v));
            }
        }
        cols
    }

    /// Echelon form of `delta(C^(n-1))` inside `C^n`, spanned by columns.
    pub fn boundaries(&self, n: usize) -> Echelon {
        let mut e = Echelon::new(self.ring, self.dim(n));
        if n == 0 {
            return e;
        }
        for c in self.columns(n - 1) {
            e.insert(c);
        }
        e
    }

    /// Order in which the `(n+1)`-tuples feed the row echelon. Tuples are
    /// grouped by their first entry; first entries that leave the subgroup
    /// generated by the earlier ones come first, since those blocks carry
    /// the new rank. Within a block the order is descending.
    fn tuple_order(&self, n: usize) -> Vec<usize> {
        let n1 = self.nonid.len();
        let block = self.tuples(n);
        let mut first = Vec::new();
        let mut later = Vec::new();
        let mut span = Vec::new();
        for d in (0..n1).rev() {
            let g = self.nonid[d];
            if self.group.generated(&span).contains(g) {
                later.push(d);
            } else {
                span.push(g);
                first.push(d);
            }
        }
        first.extend(later);
        first
            .into_iter()
            .flat_map(|d| (d * block..(d + 1) * block).rev())
            .collect()
    }

    /// Row echelon form of the coboundary out of `C^n`, stopping once the
    /// length reaches `stop_at`.
    pub fn row_echelon(&self, n: usize, stop_at: Option<u64>) -> Echelon {
        let mut e = Echelon::new(self.ring, self.dim(n));
        if stop_at == Some(0) {
            return e;
        }
        let r = self.rank();
        let mut digits = vec![0usize; n + 1];
        let n1 = self.nonid.len();
        for idx in self.tuple_order(n) {
            let mut x = idx;
            for k in (0..=n).rev() {
                digits[k] = x % n1;
                x /= n1;
            }
            for i in (0..r).rev() {
                e.insert(self.row(&digits, i));
                if Some(e.length()) == stop_at {
                    return e;
                }
            }
        }
        e
    }

    /// Lengths of `H^k(G; A_p)` for `k = 0..=n`.
    ///
    /// Degree by degree: with `b` the length of the boundaries, the image of
    /// the next coboundary has length at most `len C^k - b`, with equality
    /// exactly when `H^k` vanishes, so the elimination can stop there.
    pub fn cohomology_lengths(&self, n: usize) -> Vec<u64> {
        let mut out = Vec::with_capacity(n + 1);
        let mut b = 0;
        for k in 0..=n {
            let bound = self.cochain_length(k) - b;
            let image = self.row_echelon(k, Some(bound)).length();
            out.push(bound - image);
            b = image;
        }
        out
    }

    /// `A`-valued normalized cochain to embedded `A_p` coordinates.
    pub fn to_local(&self, c: &Cochain) -> Vec<u64> {
        let n = c.degree();
        let r = self.rank();
        let a = c.abelian();
        let ap = self.decomposition.p_part.abelian();
        let mut out = vec![0u64; self.dim(n)];
        let order = self.group.order();
        let n1 = self.nonid.len();
        for idx in 0..self.tuples(n) {
            let mut x = idx;
            let mut t = vec![0usize; n];
            for k in (0..n).rev() {
                t[k] = self.nonid[x % n1];
                x /= n1;
            }
            let full = t.iter().fold(0, |acc, &g| acc * order + g);
            let v = a.apply(ap, &self.decomposition.proj_p, c.at(full));
            for i in 0..r {
                out[idx * r + i] = self.ring.mul(self.ring.reduce(v[i]), self.iota_scale(i));
            }
        }
        out
    }

    /// Normalized `A`-valued cochain from `A_p` coordinates (not embedded).
    pub fn from_coordinates(&self, module: &GModule, n: usize, coords: &[u64]) -> crate::error::Result<Cochain> {
        let r = self.rank();
        let ap = self.decomposition.p_part.abelian().clone();
        let a = module.abelian().clone();
        let n1 = self.nonid.len();
        let mut c = Cochain::zero(module, n)?;
        for idx in 0..self.tuples(n) {
            let mut x = idx;
            let mut t = vec![0usize; n];
            for k in (0..n).rev() {
                t[k] = self.nonid[x % n1];
                x /= n1;
            }
            let v: Vec<i64> = (0..r).map(|i| coords[idx * r + i] as i64).collect();
            if v.iter().all(|&y| y == 0) {
                continue;
            }
            let img = ap.apply(&a, &self.decomposition.incl_p, &ap.reduced(v));
            c.set(&t, &img);
        }
        Ok(c)
    }

    /// Embedded coordinates back to `A_p` coordinates.
    pub fn unembed(&self, v: &[u64]) -> Vec<u64> {
        let r = self.rank();
        v.iter()
            .enumerate()
            .map(|(k, &y)| {
                let i = k % r;
                let s = self.ring.exponent() - self.exps[i];
                self.ring.divide_by_p_power(y, s) % self.ring.prime().pow(self.exps[i])
            })
            .collect()
    }

    pub fn embed(&self, x: &[u64]) -> Vec<u64> {
        let r = self.rank();
        x.iter()
            .enumerate()
            .map(|(k, &y)| self.ring.mul(y % self.ring.modulus(), self.iota_scale(k % r)))
            .collect()
    }
}
