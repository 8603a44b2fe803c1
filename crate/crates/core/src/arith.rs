//! Exact integers and rationals.
//!
//! Integers are [`num_bigint::BigInt`]. [`Rational`] wraps a reduced
//! `BigInt` ratio whose denominator is always positive, so structural
//! equality is numeric equality.

use alloc::string::{String, ToString};
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use num_bigint::BigInt as Int;

/// An exact rational number in lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

/// Canonical `p/q`. Fails when `q = 0`.
pub fn rat_make(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Rational> {
    let q = q.into();
    if q.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(Rational(BigRational::new(p.into(), q)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn rat_arith(op: RatOp, a: &Rational, b: &Rational) -> Result<Rational> {
    Ok(match op {
        RatOp::Add => a + b,
        RatOp::Sub => a - b,
        RatOp::Mul => a * b,
        RatOp::Div => a.checked_div(b)?,
    })
}

/// `(floor(sqrt(n)), floor(sqrt(n))^2 == n)`.
pub fn int_isqrt(n: &BigInt) -> Result<(BigInt, bool)> {
    if n.is_negative() {
        return Err(Error::NegativeSqrt);
    }
    let root = n.sqrt();
    let exact = &root * &root == *n;
    Ok((root, exact))
}

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn checked_div(&self, other: &Rational) -> Result<Rational> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(&self.0 / &other.0))
    }

    pub fn recip(&self) -> Result<Rational> {
        Rational::one().checked_div(self)
    }

    pub fn pow(&self, exp: u32) -> Rational {
        let mut acc = Rational::one();
        for _ in 0..exp {
            acc *= self;
        }
        acc
    }

    /// The nonnegative square root when it is rational.
    pub fn sqrt_exact(&self) -> Option<Rational> {
        if self.is_negative() {
            return None;
        }
        let (p, pe) = int_isqrt(self.numer()).ok()?;
        let (q, qe) = int_isqrt(self.denom()).ok()?;
        (pe && qe).then(|| Rational(BigRational::new(p, q)))
    }

    pub fn lcm_denom(values: impl IntoIterator<Item = Rational>) -> BigInt {
        values
            .into_iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
    }

    pub fn sign(&self) -> Sign {
        self.numer().sign()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |pos: usize| Error::Parse {
            pos,
            msg: alloc::format!("malformed rational {s:?}"),
        };
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let p = BigInt::from_str(p.trim()).map_err(|_| bad(0))?;
                let q = BigInt::from_str(q.trim()).map_err(|_| bad(p.to_string().len() + 1))?;
                rat_make(p, q)
            }
            None => Ok(Rational::from_int(BigInt::from_str(s).map_err(|_| bad(0))?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> core::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> core::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Rational::from_str(&s).map_err(serde::de::Error::custom)
    }
}

macro_rules! from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for Rational {
            fn from(v: $t) -> Self {
                Rational::from_int(v)
            }
        }
    )*};
}
from_int!(i32, i64, u32, u64, usize, BigInt);

macro_rules! binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0.$m(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                Rational(self.0.$m(&rhs.0))
            }
        }
        impl $atr<&Rational> for Rational {
            fn $am(&mut self, rhs: &Rational) {
                self.0.$am(&rhs.0)
            }
        }
        impl $atr<Rational> for Rational {
            fn $am(&mut self, rhs: Rational) {
                self.0.$am(rhs.0)
            }
        }
    };
}
binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);

/// Panics on a zero divisor; use [`Rational::checked_div`] when `rhs` is untrusted.
impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        self.checked_div(rhs).expect("division by zero rational")
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl core::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}
