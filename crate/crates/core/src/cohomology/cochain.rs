use std::sync::Arc;

use crate::abelian::FiniteAbelianGroup;
use crate::error::{Error, Result};
use crate::gmodule::GModule;
use crate::groups::FiniteGroup;
use crate::limits::Limits;
use crate::linalg::Matrix;

/// An inhomogeneous cochain `G^n -> A`, stored densely.
///
/// The tuple `(g_1, ..., g_n)` sits at index `sum g_i |G|^(n-i)`; each entry
/// is a reduced coordinate vector of the module.
#[derive(Clone, PartialEq, Eq)]
pub struct Cochain {
    module: GModule,
    degree: usize,
    values: Vec<i64>,
}

impl std::fmt::Debug for Cochain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Cochain(degree {}, {:?})", self.degree, self.module)
    }
}

pub(crate) fn check_cells(order: usize, degree: usize, rank: usize) -> Result<usize> {
    let limit = Limits::global().max_cochain_cells;
    let mut n: usize = 1;
    for _ in 0..degree {
        n = n.checked_mul(order).filter(|&x| x <= limit).ok_or_else(|| cells_error(order, degree, limit))?;
    }
    if n.saturating_mul(rank.max(1)) > limit {
        return Err(cells_error(order, degree, limit));
    }
    Ok(n)
}

fn cells_error(order: usize, degree: usize, limit: usize) -> Error {
    Error::capacity(
        "",
        format!("a degree-{degree} cochain on a group of order {order} exceeds {limit} cells"),
        "raise FINSYLOW_MAX_COCHAIN_CELLS or lower the degree",
    )
}

/// Iterate over all `n`-tuples of `0..order` in index order.
pub(crate) fn for_each_tuple(order: usize, n: usize, mut f: impl FnMut(usize, &[usize])) {
    let mut t = vec![0usize; n];
    let total = order.pow(n as u32);
    for idx in 0..total {
        f(idx, &t);
        for k in (0..n).rev() {
            t[k] += 1;
            if t[k] < order {
                break;
            }
            t[k] = 0;
        }
    }
}

impl Cochain {
    pub fn zero(module: &GModule, degree: usize) -> Result<Self> {
        let cells = check_cells(module.group().order(), degree, module.abelian().rank())?;
        Ok(Cochain {
            module: module.clone(),
            degree,
            values: vec![0; cells * module.abelian().rank()],
        })
    }

    /// Cochain with the given value on every tuple.
    pub fn from_fn(module: &GModule, degree: usize, mut f: impl FnMut(&[usize]) -> Vec<i64>) -> Result<Self> {
        let mut c = Self::zero(module, degree)?;
        let r = module.abelian().rank();
        let a = module.abelian().clone();
        let order = module.group().order();
        let values = &mut c.values;
        for_each_tuple(order, degree, |idx, t| {
            let v = a.reduced(f(t));
            values[idx * r..(idx + 1) * r].copy_from_slice(&v);
        });
        Ok(c)
    }

    /// From a flat table of `|G|^n` entries, each a coordinate vector.
    pub fn from_table(module: &GModule, degree: usize, table: Vec<Vec<i64>>) -> Result<Self> {
        let cells = check_cells(module.group().order(), degree, module.abelian().rank())?;
        if table.len() != cells {
            return Err(Error::input(
                "",
                format!("cochain table has {} entries, expected {cells}", table.len()),
                "list one value per tuple of group elements, in lexicographic order",
            ));
        }
        let r = module.abelian().rank();
        let mut values = Vec::with_capacity(cells * r);
        for (i, v) in table.into_iter().enumerate() {
            if v.len() != r {
                return Err(Error::input(
                    format!("/{i}"),
                    format!("value has {} coordinates, the module has rank {r}", v.len()),
                    "one coordinate per invariant factor",
                ));
            }
            values.extend(module.abelian().reduced(v));
        }
        Ok(Cochain {
            module: module.clone(),
            degree,
            values,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.module.group()
    }

    pub fn abelian(&self) -> &FiniteAbelianGroup {
        self.module.abelian()
    }

    pub fn rank(&self) -> usize {
        self.module.abelian().rank()
    }

    pub fn num_tuples(&self) -> usize {
        self.group().order().pow(self.degree as u32)
    }

    pub fn index_of(&self, t: &[usize]) -> usize {
        let order = self.group().order();
        t.iter().fold(0, |acc, &g| acc * order + g)
    }

    pub fn tuple_of(&self, mut idx: usize) -> Vec<usize> {
        let order = self.group().order();
        let mut t = vec![0; self.degree];
        for k in (0..self.degree).rev() {
            t[k] = idx % order;
            idx /= order;
        }
        t
    }

    pub fn get(&self, t: &[usize]) -> &[i64] {
        self.at(self.index_of(t))
    }

    pub fn at(&self, idx: usize) -> &[i64] {
        let r = self.rank();
        &self.values[idx * r..(idx + 1) * r]
    }

    pub fn set(&mut self, t: &[usize], v: &[i64]) {
        let idx = self.index_of(t);
        let r = self.rank();
        let v = self.module.abelian().reduced(v.to_vec());
        self.values[idx * r..(idx + 1) * r].copy_from_slice(&v);
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn table(&self) -> Vec<Vec<i64>> {
        (0..self.num_tuples()).map(|i| self.at(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0)
    }

    /// Zero whenever some argument is the identity.
    pub fn is_normalized(&self) -> bool {
        self.first_unnormalized().is_none()
    }

    pub fn first_unnormalized(&self) -> Option<Vec<usize>> {
        let e = self.group().identity();
        (0..self.num_tuples())
            .find(|&i| !self.at(i).iter().all(|&x| x == 0) && self.tuple_of(i).contains(&e))
            .map(|i| self.tuple_of(i))
    }

    /// First tuple with a nonzero value.
    pub fn first_nonzero(&self) -> Option<Vec<usize>> {
        (0..self.num_tuples())
            .find(|&i| self.at(i).iter().any(|&x| x != 0))
            .map(|i| self.tuple_of(i))
    }

    fn same_shape(&self, other: &Cochain) {
        assert_eq!(self.degree, other.degree, "cochain degrees differ");
        assert_eq!(self.module.abelian(), other.module.abelian(), "coefficient groups differ");
        assert_eq!(self.group().order(), other.group().order(), "groups differ");
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        self.same_shape(other);
        self.zip(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        self.same_shape(other);
        self.zip(other, |x, y| x - y)
    }

    pub fn neg(&self) -> Cochain {
        self.zip(self, |x, _| -x)
    }

    pub fn scale(&self, k: i64) -> Cochain {
        self.zip(self, |x, _| crate::abelian::mulmod(x, k, 0))
    }

    fn zip(&self, other: &Cochain, f: impl Fn(i64, i64) -> i64) -> Cochain {
        let r = self.rank();
        let factors = self.abelian().factors();
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .enumerate()
            .map(|(i, (&x, &y))| f(x, y).rem_euclid(factors[i % r] as i64))
            .collect();
        Cochain {
            module: self.module.clone(),
            degree: self.degree,
            values,
        }
    }

    /// Same values, reinterpreted over a module with the same abelian group.
    pub fn with_module(&self, module: &GModule) -> Cochain {
        assert_eq!(module.abelian(), self.abelian());
        assert_eq!(module.group().order(), self.group().order());
        Cochain {
            module: module.clone(),
            degree: self.degree,
            values: self.values.clone(),
        }
    }

    /// Apply a coefficient homomorphism `A -> B` entrywise; `target` must be
    /// a module over the same group.
    pub fn push_forward(&self, target: &GModule, m: &Matrix<i64>) -> Cochain {
        let a = self.abelian();
        let b = target.abelian();
        let rb = b.rank();
        let mut values = Vec::with_capacity(self.num_tuples() * rb);
        for i in 0..self.num_tuples() {
            values.extend(a.apply(b, m, self.at(i)));
        }
        Cochain {
            module: target.clone(),
            degree: self.degree,
            values,
        }
    }

    /// Precompose with a homomorphism `phi: H -> G`; coefficients become
    /// `module`, which must be the pullback of this module along `phi`.
    pub fn pull_back(&self, module: &GModule, phi: &[usize]) -> Result<Cochain> {
        let mut out = Cochain::zero(module, self.degree)?;
        let r = self.rank();
        let order_h = module.group().order();
        let mut img = vec![0; self.degree];
        let values = &mut out.values;
        for_each_tuple(order_h, self.degree, |idx, t| {
            for (k, &h) in t.iter().enumerate() {
                img[k] = phi[h];
            }
            values[idx * r..(idx + 1) * r].copy_from_slice(self.get(&img));
        });
        Ok(out)
    }
}

/// The twisted bar differential.
pub fn coboundary(c: &Cochain) -> Result<Cochain> {
    let n = c.degree();
    let g = c.group().clone();
    let m = c.module().clone();
    let a = m.abelian().clone();
    let r = a.rank();
    let mut out = Cochain::zero(&m, n + 1)?;
    let mut buf = vec![0usize; n];
    let mut acc = vec![0i64; r];
    let values = &mut out.values;
    for_each_tuple(g.order(), n + 1, |idx, t| {
        // g_1 . c(g_2, ..., g_{n+1})
        let first = m.act(t[0], c.get(&t[1..]));
        acc.copy_from_slice(&first);
        for i in 0..n {
            // merge positions i and i + 1
            for k in 0..n {
                buf[k] = match k.cmp(&i) {
                    std::cmp::Ordering::Less => t[k],
                    std::cmp::Ordering::Equal => g.mul(t[i], t[i + 1]),
                    std::cmp::Ordering::Greater => t[k + 1],
                };
            }
            let v = c.get(&buf);
            let sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
            for (x, y) in acc.iter_mut().zip(v) {
                *x += sign * y;
            }
        }
        let last = c.get(&t[..n]);
        let sign = if (n + 1) % 2 == 0 { 1 } else { -1 };
        for (x, y) in acc.iter_mut().zip(last) {
            *x += sign * y;
        }
        a.reduce(&mut acc);
        values[idx * r..(idx + 1) * r].copy_from_slice(&acc);
    });
    Ok(out)
}
