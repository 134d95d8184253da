use crate::linalg::Matrix;
use crate::scalar::IntScalar;

/// Smith normal form `U * A * V = D` with both transforms and their inverses.
///
/// `diag` has `min(rows, cols)` entries, non-negative, each dividing the next
/// among the nonzero ones; zeros come last.
#[derive(Clone)]
pub struct SmithForm<T> {
    pub diag: Vec<T>,
    pub rank: usize,
    pub u: Matrix<T>,
    pub u_inv: Matrix<T>,
    pub v: Matrix<T>,
    pub v_inv: Matrix<T>,
}

struct Calc<T> {
    a: Matrix<T>,
    u: Matrix<T>,
    u_inv: Matrix<T>,
    v: Matrix<T>,
    v_inv: Matrix<T>,
}

impl<T: IntScalar> Calc<T> {
    // row[dst] += f * row[src]
    fn row_add(&mut self, dst: usize, src: usize, f: &T) {
        self.a.add_row_multiple(dst, src, f);
        self.u.add_row_multiple(dst, src, f);
        self.u_inv.add_col_multiple(src, dst, &-f.clone());
    }

    fn row_swap(&mut self, x: usize, y: usize) {
        self.a.swap_rows(x, y);
        self.u.swap_rows(x, y);
        self.u_inv.swap_cols(x, y);
    }

    fn row_negate(&mut self, r: usize) {
        self.a.negate_row(r);
        self.u.negate_row(r);
        self.u_inv.negate_col(r);
    }

    // col[dst] += f * col[src]
    fn col_add(&mut self, dst: usize, src: usize, f: &T) {
        self.a.add_col_multiple(dst, src, f);
        self.v.add_col_multiple(dst, src, f);
        self.v_inv.add_row_multiple(src, dst, &-f.clone());
    }

    fn col_swap(&mut self, x: usize, y: usize) {
        self.a.swap_cols(x, y);
        self.v.swap_cols(x, y);
        self.v_inv.swap_rows(x, y);
    }

    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.nrows() {
            for j in t..self.a.ncols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.a[(bi, bj)].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    /// Clears row and column `t` outside the pivot. Returns false when a
    /// nonzero remainder was left behind.
    fn clear_cross(&mut self, t: usize) -> bool {
        let mut clean = true;
        let piv = self.a[(t, t)].clone();
        for i in t + 1..self.a.nrows() {
            if self.a[(i, t)].is_zero() {
                continue;
            }
            let q = self.a[(i, t)].div_floor(&piv);
            self.row_add(i, t, &-q);
            if !self.a[(i, t)].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..self.a.ncols() {
            if self.a[(t, j)].is_zero() {
                continue;
            }
            let q = self.a[(t, j)].div_floor(&piv);
            self.col_add(j, t, &-q);
            if !self.a[(t, j)].is_zero() {
                clean = false;
            }
        }
        clean
    }

    fn smallest_in_cross(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let consider = |i: usize, j: usize, best: &mut Option<(usize, usize)>| {
            let x = &self.a[(i, j)];
            if x.is_zero() {
                return;
            }
            match best {
                Some((bi, bj)) if self.a[(*bi, *bj)].abs() <= x.abs() => {}
                _ => *best = Some((i, j)),
            }
        };
        for i in t + 1..self.a.nrows() {
            consider(i, t, &mut best);
        }
        for j in t + 1..self.a.ncols() {
            consider(t, j, &mut best);
        }
        best
    }

    fn run(mut self) -> SmithForm<T> {
        let (m, n) = (self.a.nrows(), self.a.ncols());
        let mut t = 0;
        while t < m.min(n) {
            let Some((pi, pj)) = self.min_entry(t) else { break };
            self.row_swap(t, pi);
            self.col_swap(t, pj);
            loop {
                if !self.clear_cross(t) {
                    let (i, j) = self
                        .smallest_in_cross(t)
                        .expect("remainder must leave a nonzero entry");
                    self.row_swap(t, i);
                    self.col_swap(t, j);
                    continue;
                }
                let piv = self.a[(t, t)].clone();
                let bad = (t + 1..m).find(|&i| {
                    (t + 1..n).any(|j| !self.a[(i, j)].is_multiple_of(&piv))
                });
                match bad {
                    Some(i) => self.row_add(t, i, &T::one()),
                    None => break,
                }
            }
            if self.a[(t, t)].is_negative() {
                self.row_negate(t);
            }
            t += 1;
        }
        let diag: Vec<T> = (0..m.min(n)).map(|i| self.a[(i, i)].clone()).collect();
        SmithForm {
            diag,
            rank: t,
            u: self.u,
            u_inv: self.u_inv,
            v: self.v,
            v_inv: self.v_inv,
        }
    }
}

/// Smith normal form over the integers.
pub fn smith_normal_form<T: IntScalar>(a: &Matrix<T>) -> SmithForm<T> {
    let (m, n) = (a.nrows(), a.ncols());
    Calc {
        a: a.clone(),
        u: Matrix::identity(m),
        u_inv: Matrix::identity(m),
        v: Matrix::identity(n),
        v_inv: Matrix::identity(n),
    }
    .run()
}

impl<T: IntScalar> SmithForm<T> {
    /// Integer solution of `A x = b`, if one exists.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        let ub = self.u.mul_vec(b);
        let n = self.v.nrows();
        let mut y = vec![T::zero(); n];
        for (i, val) in ub.iter().enumerate() {
            if i < self.rank {
                let (q, r) = val.div_rem(&self.diag[i]);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !val.is_zero() {
                return None;
            }
        }
        Some(self.v.mul_vec(&y))
    }

    /// Basis of the integer kernel of `A`, as columns of `V` past the rank.
    pub fn kernel_basis(&self) -> Vec<Vec<T>> {
        (self.rank..self.v.ncols()).map(|j| self.v.column(j)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn check<T: IntScalar>(a: &Matrix<T>) {
        let s = smith_normal_form(a);
        let d = s.u.mul(a).mul(&s.v);
        for i in 0..d.nrows() {
            for j in 0..d.ncols() {
                let expect = if i == j { s.diag[i].clone() } else { T::zero() };
                assert_eq!(d[(i, j)], expect);
            }
        }
        assert_eq!(s.u.mul(&s.u_inv), Matrix::identity(a.nrows()));
        assert_eq!(s.v.mul(&s.v_inv), Matrix::identity(a.ncols()));
        for w in s.diag[..s.rank].windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn textbook_example() {
        let a = Matrix::<i64>::from_i64_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.diag, vec![2, 6, 12]);
        check(&a);
    }

    #[test]
    fn zero_and_empty() {
        let s = smith_normal_form(&Matrix::<i64>::zeros(2, 3));
        assert_eq!(s.rank, 0);
        assert_eq!(s.kernel_basis().len(), 3);
        let s = smith_normal_form(&Matrix::<i64>::zeros(0, 2));
        assert_eq!(s.kernel_basis().len(), 2);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = Matrix::<i64>::from_i64_rows(&[vec![2, 0], vec![0, 4]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.solve(&[4, 8]), Some(vec![2, 2]));
        assert_eq!(s.solve(&[1, 0]), None);
    }

    proptest! {
        #[test]
        fn transforms_are_consistent(rows in 1usize..5, cols in 1usize..5,
                                     seed in proptest::collection::vec(-9i64..10, 25)) {
            let data: Vec<Vec<i64>> = (0..rows)
                .map(|i| (0..cols).map(|j| seed[i * 5 + j]).collect())
                .collect();
            let a = Matrix::<i64>::from_i64_rows(&data);
            check(&a);
            // the machine-integer and arbitrary-precision paths agree
            let big = smith_normal_form(&a.convert::<BigInt>());
            let small = smith_normal_form(&a);
            let big_diag: Vec<i64> = big.diag.iter().map(|x| x.to_i64_exact()).collect();
            prop_assert_eq!(big_diag, small.diag);
        }
    }
}
