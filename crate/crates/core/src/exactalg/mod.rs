//! Exact coefficient rings and finite linear algebra.
//!
//! Coefficients are arbitrary-precision integers (or rationals inside
//! [`QMatrix`]); exponents are machine integers. Nothing here ever rounds.

mod formal;
mod laurent;
mod matrix;
mod multi;
mod rational;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use formal::{FormalSum, LinearOp};
pub use laurent::LaurentScalar;
pub use matrix::QMatrix;
pub use multi::MultiLaurent;
pub use rational::{rational_reduce_to_laurent, NotPolynomial, RationalFn, ZeroDenominator};

/// A commutative ring with exact arithmetic, used as the coefficient type of
/// [`FormalSum`] and [`LinearOp`].
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negate())
    }

    fn from_int(n: i64) -> Self {
        let mut acc = Self::zero();
        let one = if n < 0 { Self::one().negate() } else { Self::one() };
        for _ in 0..n.unsigned_abs() {
            acc = acc.plus(&one);
        }
        acc
    }
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn from_int(n: i64) -> Self {
        BigInt::from(n)
    }
}

/// The quantum integer `[m]_q = (q^m - q^-m) / (q - q^-1)`.
///
/// For `m > 0` this is `q^{m-1} + q^{m-3} + ... + q^{1-m}`; `[0] = 0` and
/// `[-m] = -[m]`.
pub fn quantum_integer(m: i64) -> LaurentScalar {
    let mut out = LaurentScalar::zero();
    let k = m.unsigned_abs() as i64;
    let sign = if m < 0 { -1 } else { 1 };
    for j in 0..k {
        let e = (k - 1 - 2 * j) as i32;
        out = out.plus(&LaurentScalar::monomial(BigInt::from(sign), e));
    }
    out
}
