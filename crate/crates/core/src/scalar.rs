//! Integer scalar abstraction shared by the exact linear algebra.
//!
//! Everything that touches Smith normal forms is written against
//! [`IntScalar`], so the same code runs on machine integers (fast, for small
//! presentations) and on [`num_bigint::BigInt`] (when entries can grow).

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exact signed integer type usable as a matrix entry.
pub trait IntScalar:
    Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn from_i64(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("scalar cannot represent value")
    }

    /// Lossy conversion back to a machine integer; panics when out of range.
    fn to_i64_exact(&self) -> i64 {
        self.to_i64().expect("scalar value exceeds i64")
    }
}

impl IntScalar for i64 {}
impl IntScalar for i128 {}
impl IntScalar for BigInt {}

/// Reduce `x` into `0..m` for a positive modulus.
pub fn rem_euclid<T: IntScalar>(x: &T, m: &T) -> T {
    let r = x.mod_floor(m);
    if r.is_negative() {
        r + m.clone()
    } else {
        r
    }
}
