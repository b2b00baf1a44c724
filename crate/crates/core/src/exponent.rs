//! Rational exponents and the two extended axes built on them.
//!
//! Exponents of `t` live on the *degree* axis, where `-inf` is the bottom
//! element (`deg 0`). Valuations live on the opposite axis, `nu = -deg`, where
//! `+inf` is the top element (`nu(0)`).

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact rational exponent, always stored in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Exponent(BigRational);

impl Exponent {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        Exponent(BigRational::new(numer.into(), denom.into()))
    }

    pub fn integer(n: i64) -> Self {
        Exponent(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Exponent(BigRational::zero())
    }

    pub fn one() -> Self {
        Exponent(BigRational::one())
    }

    pub fn from_ratio(r: BigRational) -> Self {
        Exponent(r)
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Exponent(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// `self * k` for an integer `k`.
    pub fn scale(&self, k: i64) -> Self {
        Exponent(&self.0 * BigRational::from_integer(BigInt::from(k)))
    }

    pub fn halve(&self) -> Self {
        Exponent(&self.0 / BigRational::from_integer(BigInt::from(2)))
    }

    /// Integer `k` with `self = k / n`. Panics if `n * self` is not integral.
    pub fn times_denominator(&self, n: &BigInt) -> BigInt {
        let scaled = &self.0 * BigRational::from_integer(n.clone());
        assert!(scaled.is_integer(), "exponent {} not in (1/{})Z", self, n);
        scaled.to_integer()
    }
}

/// Least common multiple of the denominators of `exps`, at least 1.
pub fn common_denominator<'a>(exps: impl IntoIterator<Item = &'a Exponent>) -> BigInt {
    exps.into_iter()
        .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()))
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Exponent {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || crate::Error::Parse {
            position: 0,
            message: alloc::format!("invalid rational `{}`", s),
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(crate::Error::DivisionByZero);
                }
                Ok(Exponent::new(n, d))
            }
            None => {
                let n: BigInt = s.parse().map_err(|_| bad())?;
                Ok(Exponent(BigRational::from_integer(n)))
            }
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Exponent {
            type Output = Exponent;
            fn $m(self, rhs: Exponent) -> Exponent {
                Exponent(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Exponent> for &'a Exponent {
            type Output = Exponent;
            fn $m(self, rhs: &'a Exponent) -> Exponent {
                Exponent((&self.0).$m(&rhs.0))
            }
        }
        impl<'a> $tr<&'a Exponent> for Exponent {
            type Output = Exponent;
            fn $m(self, rhs: &'a Exponent) -> Exponent {
                Exponent(self.0.$m(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent(-self.0)
    }
}

impl Neg for &Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent(-&self.0)
    }
}

impl From<i64> for Exponent {
    fn from(n: i64) -> Self {
        Exponent::integer(n)
    }
}

/// A point of the degree axis: `-inf` or a rational. Also used for precision
/// cutoffs, where `-inf` means "exact".
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Degree {
    NegInfinity,
    Finite(Exponent),
}

impl Degree {
    pub fn finite(&self) -> Option<&Exponent> {
        match self {
            Degree::Finite(e) => Some(e),
            Degree::NegInfinity => None,
        }
    }

    pub fn is_neg_infinity(&self) -> bool {
        matches!(self, Degree::NegInfinity)
    }

    pub fn to_valuation(&self) -> Valuation {
        match self {
            Degree::NegInfinity => Valuation::Infinity,
            Degree::Finite(e) => Valuation::Finite(-e),
        }
    }

    /// Shift by a finite amount (`-inf` absorbs).
    pub fn shift(&self, by: &Exponent) -> Degree {
        match self {
            Degree::NegInfinity => Degree::NegInfinity,
            Degree::Finite(e) => Degree::Finite(e + by),
        }
    }

    /// Sum on the extended axis; `-inf` absorbs.
    pub fn add(&self, other: &Degree) -> Degree {
        match (self, other) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInfinity,
        }
    }
}

impl From<Exponent> for Degree {
    fn from(e: Exponent) -> Self {
        Degree::Finite(e)
    }
}

impl PartialEq<Exponent> for Degree {
    fn eq(&self, other: &Exponent) -> bool {
        matches!(self, Degree::Finite(e) if e == other)
    }
}

impl PartialOrd<Exponent> for Degree {
    fn partial_cmp(&self, other: &Exponent) -> Option<Ordering> {
        Some(match self {
            Degree::NegInfinity => Ordering::Less,
            Degree::Finite(e) => e.cmp(other),
        })
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(e) => fmt::Display::fmt(e, f),
        }
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A point of the valuation axis: a rational or `+inf`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(Exponent),
    Infinity,
}

impl Valuation {
    pub fn finite(&self) -> Option<&Exponent> {
        match self {
            Valuation::Finite(e) => Some(e),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    pub fn to_degree(&self) -> Degree {
        match self {
            Valuation::Infinity => Degree::NegInfinity,
            Valuation::Finite(e) => Degree::Finite(-e),
        }
    }

    /// Sum on the extended axis; `+inf` absorbs.
    pub fn add(&self, other: &Valuation) -> Valuation {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }

    pub fn sub_finite(&self, by: &Exponent) -> Valuation {
        match self {
            Valuation::Infinity => Valuation::Infinity,
            Valuation::Finite(a) => Valuation::Finite(a - by),
        }
    }
}

impl From<Exponent> for Valuation {
    fn from(e: Exponent) -> Self {
        Valuation::Finite(e)
    }
}

impl PartialEq<Exponent> for Valuation {
    fn eq(&self, other: &Exponent) -> bool {
        matches!(self, Valuation::Finite(e) if e == other)
    }
}

impl PartialOrd<Exponent> for Valuation {
    fn partial_cmp(&self, other: &Exponent) -> Option<Ordering> {
        Some(match self {
            Valuation::Infinity => Ordering::Greater,
            Valuation::Finite(e) => e.cmp(other),
        })
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Infinity => f.write_str("inf"),
            Valuation::Finite(e) => fmt::Display::fmt(e, f),
        }
    }
}

impl fmt::Debug for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Shorthand for `Exponent::new(n, d)` with machine integers.
pub fn q(n: i64, d: i64) -> Exponent {
    Exponent::new(n, d)
}
