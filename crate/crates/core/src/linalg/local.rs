//! Sparse row echelon forms over the local rings `Z/p^a`.
//!
//! Cochain groups with coefficients in a `p`-primary module are modules over
//! `Z/p^a`. Every nonzero element there is a unit times `p^v`, so Gaussian
//! elimination goes through as long as pivots are chosen by valuation and
//! every pivot of valuation `v > 0` is followed by its saturation
//! `p^(a-v) * row`. The resulting form has the Howell property: a vector of
//! the row module whose first `c` entries vanish is generated by the stored
//! rows that lead at or after `c`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Arithmetic in `Z/p^a`, with `p^a < 2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimePowerRing {
    p: u64,
    exp: u32,
    q: u64,
}

impl PrimePowerRing {
    pub fn new(p: u64, exp: u32) -> Self {
        assert!(exp >= 1, "exponent must be positive");
        let q = p.checked_pow(exp).expect("modulus overflow");
        assert!(q < (1 << 32), "modulus too large for the local engine");
        PrimePowerRing { p, exp, q }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }

    pub fn add(&self, x: u64, y: u64) -> u64 {
        (x + y) % self.q
    }

    pub fn sub(&self, x: u64, y: u64) -> u64 {
        (x + self.q - y) % self.q
    }

    pub fn mul(&self, x: u64, y: u64) -> u64 {
        (x * y) % self.q
    }

    pub fn neg(&self, x: u64) -> u64 {
        (self.q - x) % self.q
    }

    pub fn pow_p(&self, k: u32) -> u64 {
        if k >= self.exp {
            0
        } else {
            self.p.pow(k)
        }
    }

    /// `p`-adic valuation, `exp` for zero.
    pub fn valuation(&self, mut x: u64) -> u32 {
        if x == 0 {
            return self.exp;
        }
        let mut v = 0;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }

    /// Split a nonzero `x` as `unit * p^v`, returning `(v, unit^-1)`.
    pub fn split(&self, x: u64) -> (u32, u64) {
        let v = self.valuation(x);
        let unit = x / self.p.pow(v);
        (v, self.inverse(unit))
    }

    pub fn inverse(&self, u: u64) -> u64 {
        let (mut r0, mut r1) = (self.q as i64, (u % self.q) as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let t = r0 / r1;
            (r0, r1) = (r1, r0 - t * r1);
            (s0, s1) = (s1, s0 - t * s1);
        }
        assert_eq!(r0, 1, "{u} is not a unit mod {}", self.q);
        s0.rem_euclid(self.q as i64) as u64
    }

    /// Solve `p^v * y = x`; `x` must be divisible by `p^v`. The answer is
    /// determined modulo `p^(a-v)`; the smallest representative is returned.
    pub fn divide_by_p_power(&self, x: u64, v: u32) -> u64 {
        if v == 0 {
            return x;
        }
        let pv = self.p.pow(v);
        debug_assert_eq!(x % pv, 0);
        x / pv
    }
}

/// Sparse vector: strictly increasing column indices with nonzero values.
pub type SparseRow = Vec<(u32, u64)>;

fn scale_row(ring: &PrimePowerRing, row: &mut SparseRow, f: u64) {
    for e in row.iter_mut() {
        e.1 = ring.mul(e.1, f);
    }
    row.retain(|e| e.1 != 0);
}

/// `a - f * b`
fn axpy(ring: &PrimePowerRing, a: &SparseRow, f: u64, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map_or(u32::MAX, |e| e.0);
        let cb = b.get(j).map_or(u32::MAX, |e| e.0);
        if ca < cb {
            out.push(a[i]);
            i += 1;
        } else if cb < ca {
            let v = ring.neg(ring.mul(f, b[j].1));
            if v != 0 {
                out.push((cb, v));
            }
            j += 1;
        } else {
            let v = ring.sub(a[i].1, ring.mul(f, b[j].1));
            if v != 0 {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Dense scratch vector with a heap of touched columns, used to reduce one
/// row at a time without reallocating.
#[derive(Clone, Debug, Default)]
struct Accumulator {
    values: Vec<u64>,
    queued: Vec<bool>,
    heap: BinaryHeap<Reverse<u32>>,
}

impl Accumulator {
    fn new(n: usize) -> Self {
        Accumulator {
            values: vec![0; n],
            queued: vec![false; n],
            heap: BinaryHeap::new(),
        }
    }

    fn load(&mut self, row: &SparseRow) {
        for &(c, x) in row {
            self.values[c as usize] = x;
            self.touch(c);
        }
    }

    fn touch(&mut self, c: u32) {
        if !self.queued[c as usize] {
            self.queued[c as usize] = true;
            self.heap.push(Reverse(c));
        }
    }

    /// Smallest column holding a nonzero value.
    fn lead(&mut self) -> Option<(u32, u64)> {
        while let Some(&Reverse(c)) = self.heap.peek() {
            let x = self.values[c as usize];
            if x != 0 {
                return Some((c, x));
            }
            self.heap.pop();
            self.queued[c as usize] = false;
        }
        None
    }

    /// `self -= f * row`
    fn sub_multiple(&mut self, ring: &PrimePowerRing, f: u64, row: &SparseRow) {
        for &(c, y) in row {
            let v = &mut self.values[c as usize];
            *v = ring.sub(*v, ring.mul(f, y));
            self.touch(c);
        }
    }

    /// Move the contents out as a sparse row, leaving the scratch zeroed.
    fn drain(&mut self) -> SparseRow {
        let mut out = Vec::with_capacity(self.heap.len());
        while let Some(Reverse(c)) = self.heap.pop() {
            self.queued[c as usize] = false;
            let x = std::mem::take(&mut self.values[c as usize]);
            if x != 0 {
                out.push((c, x));
            }
        }
        out
    }
}

/// Row module of a matrix over `Z/p^a`, kept in Howell echelon form.
#[derive(Clone, Debug)]
pub struct Echelon {
    ring: PrimePowerRing,
    ncols: usize,
    /// Indexed by leading column.
    pivots: Vec<Option<SparseRow>>,
    count: usize,
    length: u64,
    scratch: Accumulator,
}

impl Echelon {
    pub fn new(ring: PrimePowerRing, ncols: usize) -> Self {
        Echelon {
            ring,
            ncols,
            pivots: vec![None; ncols],
            count: 0,
            length: 0,
            scratch: Accumulator::new(ncols),
        }
    }

    pub fn ring(&self) -> &PrimePowerRing {
        &self.ring
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Composition length of the row module (its order is `p^length`).
    pub fn length(&self) -> u64 {
        self.length
    }

    pub fn pivot_count(&self) -> usize {
        self.count
    }

    pub fn pivots(&self) -> impl Iterator<Item = (u32, &SparseRow)> {
        self.pivots.iter().enumerate().filter_map(|(c, r)| r.as_ref().map(|r| (c as u32, r)))
    }

    /// Insert one row of the module. Returns the gain in length.
    ///
    /// Stored pivot rows are normalized so that the leading entry is a power
    /// of `p`.
    pub fn insert(&mut self, row: SparseRow) -> u64 {
        let before = self.length;
        let ring = self.ring;
        let a = ring.exp;
        let mut queue = vec![row];
        while let Some(r) = queue.pop() {
            self.scratch.load(&r);
            while let Some((c, x)) = self.scratch.lead() {
                let (w, uinv) = ring.split(x);
                match self.pivots[c as usize].as_mut() {
                    None => {
                        let mut r = self.scratch.drain();
                        scale_row(&ring, &mut r, uinv);
                        if w > 0 {
                            let mut sat = r.clone();
                            scale_row(&ring, &mut sat, ring.pow_p(a - w));
                            queue.push(sat);
                        }
                        self.pivots[c as usize] = Some(r);
                        self.count += 1;
                        self.length += u64::from(a - w);
                        break;
                    }
                    Some(piv) => {
                        let v = ring.valuation(piv[0].1);
                        if w >= v {
                            // x = unit * p^w and the pivot leads with p^v
                            let f = ring.divide_by_p_power(x, v);
                            self.scratch.sub_multiple(&ring, f, piv);
                        } else {
                            let mut r = self.scratch.drain();
                            scale_row(&ring, &mut r, uinv);
                            let old = std::mem::replace(piv, r.clone());
                            self.length += u64::from(v - w);
                            if w > 0 {
                                let mut sat = r.clone();
                                scale_row(&ring, &mut sat, ring.pow_p(a - w));
                                queue.push(sat);
                            }
                            let rest = axpy(&ring, &old, ring.pow_p(v - w), &r);
                            self.scratch.load(&rest);
                        }
                    }
                }
            }
            self.scratch.drain();
        }
        self.length - before
    }

    /// Reduce a dense vector against the pivots as far as possible. Returns
    /// the first column whose entry could not be cleared, if any.
    pub fn reduce_dense(&self, v: &mut [u64]) -> Option<usize> {
        let ring = self.ring;
        for c in 0..v.len() {
            if v[c] == 0 {
                continue;
            }
            let Some(piv) = self.pivots[c].as_ref() else {
                return Some(c);
            };
            let pv = ring.valuation(piv[0].1);
            let (w, uinv) = ring.split(v[c]);
            if w < pv {
                return Some(c);
            }
            // v[c] = unit * p^w, piv lead = p^pv
            let unit = ring.inverse(uinv);
            let f = ring.mul(unit, ring.pow_p(w - pv));
            for &(j, x) in piv {
                let j = j as usize;
                v[j] = ring.sub(v[j], ring.mul(f, x));
            }
            debug_assert_eq!(v[c], 0);
        }
        None
    }

    /// Clear the first `upto` entries of `v` using the pivots; false if some
    /// entry there cannot be cleared. Later entries change accordingly.
    pub fn reduce_prefix(&self, v: &mut [u64], upto: usize) -> bool {
        match self.reduce_dense(&mut v[..]) {
            None => true,
            Some(c) if c >= upto => true,
            Some(_) => false,
        }
    }

    /// Whether a vector lies in the row module.
    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce_dense(&mut w).is_none()
    }

    /// Generators of the submodule `{x : r . x = 0 for every row r}`.
    ///
    /// Back substitution from the last column, keeping a generating set of
    /// the solutions restricted to the columns already visited.
    pub fn annihilator(&self) -> Vec<Vec<u64>> {
        let ring = self.ring;
        let a = ring.exp;
        let n = self.ncols;
        let mut gens: Vec<Vec<u64>> = Vec::new();
        for c in (0..n).rev() {
            let Some(row) = self.pivots[c].as_ref() else {
                let mut e = vec![0; n];
                e[c] = 1;
                gens.push(e);
                continue;
            };
            let v = ring.valuation(row[0].1);
            // t(s) = sum_{j > c} row_j s_j ; need p^v x_c = -t(s)
            let ts: Vec<u64> = gens
                .iter()
                .map(|s| {
                    row[1..]
                        .iter()
                        .fold(0, |acc, &(j, x)| ring.add(acc, ring.mul(x, s[j as usize])))
                })
                .collect();
            let min = ts
                .iter()
                .enumerate()
                .filter(|(_, t)| ring.valuation(**t) < v)
                .min_by_key(|(i, t)| (ring.valuation(**t), *i))
                .map(|(i, _)| i);
            if let Some(k) = min {
                let tk = ts[k];
                let (wk, uinv_k) = ring.split(tk);
                let sk = gens[k].clone();
                for (i, s) in gens.iter_mut().enumerate() {
                    if i == k || ts[i] == 0 {
                        continue;
                    }
                    // ts[i] = f * tk with f = (ts[i] / p^wk) * unit_k^-1
                    let f = ring.mul(ts[i] / ring.p.pow(wk), uinv_k);
                    for j in c + 1..n {
                        s[j] = ring.sub(s[j], ring.mul(f, sk[j]));
                    }
                }
                let scale = ring.pow_p(v - wk);
                for j in c + 1..n {
                    gens[k][j] = ring.mul(gens[k][j], scale);
                }
            }
            for s in gens.iter_mut() {
                let t = row[1..]
                    .iter()
                    .fold(0, |acc, &(j, x)| ring.add(acc, ring.mul(x, s[j as usize])));
                let lead_inv = ring.split(row[0].1).1;
                let rhs = ring.neg(t);
                let y = ring.divide_by_p_power(rhs, v);
                s[c] = ring.mul(y, lead_inv);
            }
            if v > 0 {
                let mut e = vec![0; n];
                e[c] = ring.pow_p(a - v);
                gens.push(e);
            }
            gens.retain(|s| s.iter().any(|&x| x != 0));
        }
        gens
    }
}

/// Length of the submodule of `(Z/p^a)^n` generated by dense vectors.
pub fn span_length(ring: PrimePowerRing, n: usize, vectors: &[Vec<u64>]) -> u64 {
    let mut e = Echelon::new(ring, n);
    for v in vectors {
        e.insert(to_sparse(v));
    }
    e.length()
}

pub fn to_sparse(v: &[u64]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, &x)| (i as u32, x))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    /// Brute-force closure of a set of vectors under addition.
    fn brute_span(ring: PrimePowerRing, n: usize, gens: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
        let mut set = BTreeSet::new();
        set.insert(vec![0; n]);
        let mut frontier = vec![vec![0; n]];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y: Vec<u64> = x.iter().zip(g).map(|(a, b)| ring.add(*a, *b)).collect();
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    fn all_vectors(q: u64, n: usize) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..q).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn saturation_example() {
        // Z/4, row (2, 1): module {(0,0),(2,1),(0,2),(2,3)}
        let ring = PrimePowerRing::new(2, 2);
        let mut e = Echelon::new(ring, 2);
        e.insert(vec![(0, 2), (1, 1)]);
        assert_eq!(e.length(), 2);
        assert!(e.contains(&[0, 2]));
        assert!(!e.contains(&[0, 1]));
    }

    #[test]
    fn inverse_mod_prime_power() {
        let ring = PrimePowerRing::new(3, 3);
        for u in [1u64, 2, 4, 5, 7, 26] {
            assert_eq!(ring.mul(u, ring.inverse(u)), 1);
        }
    }

    fn ring_strategy() -> impl Strategy<Value = PrimePowerRing> {
        prop_oneof![
            Just(PrimePowerRing::new(2, 1)),
            Just(PrimePowerRing::new(2, 2)),
            Just(PrimePowerRing::new(2, 3)),
            Just(PrimePowerRing::new(3, 1)),
            Just(PrimePowerRing::new(3, 2)),
            Just(PrimePowerRing::new(5, 1)),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn length_and_membership_match_brute_force(
            ring in ring_strategy(),
            raw in proptest::collection::vec(proptest::collection::vec(0u64..1000, 3), 0..4),
        ) {
            let n = 3;
            let gens: Vec<Vec<u64>> = raw.iter()
                .map(|v| v.iter().map(|x| x % ring.modulus()).collect())
                .collect();
            let span = brute_span(ring, n, &gens);
            let mut e = Echelon::new(ring, n);
            for g in &gens { e.insert(to_sparse(g)); }
            prop_assert_eq!(ring.prime().pow(e.length() as u32) as usize, span.len());
            for v in all_vectors(ring.modulus(), n) {
                prop_assert_eq!(e.contains(&v), span.contains(&v));
            }
            // annihilator equals the brute-force orthogonal complement
            let ann = e.annihilator();
            let ann_span = brute_span(ring, n, &ann);
            let expected: BTreeSet<Vec<u64>> = all_vectors(ring.modulus(), n)
                .into_iter()
                .filter(|x| gens.iter().all(|g| {
                    g.iter().zip(x).fold(0, |acc, (a, b)| ring.add(acc, ring.mul(*a, *b))) == 0
                }))
                .collect();
            prop_assert_eq!(ann_span, expected);
        }
    }
}
