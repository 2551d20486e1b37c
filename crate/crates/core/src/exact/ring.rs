use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};

use std::fmt::Debug;

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"a"` or `"a/b"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        None => Ok(Rational::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(a, b))
        }
    }
}

/// Commutative ring with an exact-division partial operation.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync + Zero + One {
    fn from_int(n: i64) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    /// `self / o` when the quotient exists in the ring.
    fn div_exact(&self, o: &Self) -> Result<Self>;
}

impl Ring for Rational {
    fn from_int(n: i64) -> Self {
        rat_int(n)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn div_exact(&self, o: &Self) -> Result<Self> {
        if Zero::is_zero(o) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self / o)
        }
    }
}
