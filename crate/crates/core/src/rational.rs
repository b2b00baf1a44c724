//! Comaximal fractions `p/q` of Puiseux polynomials.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exponent::Valuation;
use crate::field::Field;
use crate::poly::PuiseuxPoly;

/// An element `p/q` of the fraction field of Puiseux polynomials, stored with
/// `gcd(p, q) = 1` and `q` monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalPuiseux<F: Field> {
    num: PuiseuxPoly<F>,
    den: PuiseuxPoly<F>,
}

/// Unique comaximal, den-monic representative of `p/q`.
pub fn reduce_fraction<F: Field>(
    p: &PuiseuxPoly<F>,
    q: &PuiseuxPoly<F>,
) -> Result<RationalPuiseux<F>> {
    if q.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if p.is_zero() {
        return Ok(RationalPuiseux::zero());
    }
    let g = PuiseuxPoly::gcd(p, q);
    let (num, den) = if g.is_one() {
        (p.clone(), q.clone())
    } else {
        (p.div_exact(&g)?, q.div_exact(&g)?)
    };
    let lc = den.leading_coefficient().expect("nonzero").inv().expect("nonzero");
    Ok(RationalPuiseux {
        num: num.scale(&lc),
        den: den.scale(&lc),
    })
}

impl<F: Field> RationalPuiseux<F> {
    pub fn new(p: &PuiseuxPoly<F>, q: &PuiseuxPoly<F>) -> Result<Self> {
        reduce_fraction(p, q)
    }

    /// Trusts the caller that `p, q` are comaximal; only normalizes `q` to be
    /// monic. Used where a unit determinant certifies comaximality.
    pub fn from_comaximal(p: PuiseuxPoly<F>, q: PuiseuxPoly<F>) -> Self {
        let lc = q
            .leading_coefficient()
            .expect("denominator is nonzero")
            .inv()
            .expect("nonzero");
        RationalPuiseux {
            num: p.scale(&lc),
            den: q.scale(&lc),
        }
    }

    pub fn zero() -> Self {
        RationalPuiseux {
            num: PuiseuxPoly::zero(),
            den: PuiseuxPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(PuiseuxPoly::one())
    }

    pub fn from_poly(p: PuiseuxPoly<F>) -> Self {
        RationalPuiseux {
            num: p,
            den: PuiseuxPoly::one(),
        }
    }

    pub fn num(&self) -> &PuiseuxPoly<F> {
        &self.num
    }

    pub fn den(&self) -> &PuiseuxPoly<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Whether the element lies in the polynomial ring.
    pub fn as_poly(&self) -> Option<&PuiseuxPoly<F>> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn valuation(&self) -> Valuation {
        match (self.num.degree().finite(), self.den.degree().finite()) {
            (Some(dp), Some(dq)) => Valuation::Finite(dq - dp),
            _ => Valuation::Infinity,
        }
    }

    pub fn ramification(&self) -> BigInt {
        self.num.ramification().lcm(&self.den.ramification())
    }

    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_comaximal(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.invert()?)
    }

    /// The unique `f` in the polynomial ring with `nu(self - f) > 0`: the
    /// quotient of `num` by `den` in `E[u]`.
    pub fn principal_part(&self) -> PuiseuxPoly<F> {
        self.num.div_rem(&self.den).expect("nonzero denominator").0
    }

    /// `(principal part, remainder / den)`.
    pub fn split_principal(&self) -> (PuiseuxPoly<F>, Self) {
        let (q, r) = self.num.div_rem(&self.den).expect("nonzero denominator");
        // gcd(r, den) = gcd(num, den) = 1
        let frac = if r.is_zero() {
            Self::zero()
        } else {
            Self::from_comaximal(r, self.den.clone())
        };
        (q, frac)
    }
}

impl<F: Field> From<PuiseuxPoly<F>> for RationalPuiseux<F> {
    fn from(p: PuiseuxPoly<F>) -> Self {
        Self::from_poly(p)
    }
}

impl<F: Field> fmt::Display for RationalPuiseux<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl<F: Field> fmt::Debug for RationalPuiseux<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalPuiseux({})", self)
    }
}

impl<'a, F: Field> Add<&'a RationalPuiseux<F>> for &'a RationalPuiseux<F> {
    type Output = RationalPuiseux<F>;
    fn add(self, rhs: &'a RationalPuiseux<F>) -> RationalPuiseux<F> {
        if self.den == rhs.den {
            return reduce_fraction(&(&self.num + &rhs.num), &self.den).expect("nonzero");
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        reduce_fraction(&num, &(&self.den * &rhs.den)).expect("nonzero")
    }
}

impl<F: Field> Neg for &RationalPuiseux<F> {
    type Output = RationalPuiseux<F>;
    fn neg(self) -> RationalPuiseux<F> {
        RationalPuiseux {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<'a, F: Field> Sub<&'a RationalPuiseux<F>> for &'a RationalPuiseux<F> {
    type Output = RationalPuiseux<F>;
    fn sub(self, rhs: &'a RationalPuiseux<F>) -> RationalPuiseux<F> {
        self + &(-rhs)
    }
}

impl<'a, F: Field> Mul<&'a RationalPuiseux<F>> for &'a RationalPuiseux<F> {
    type Output = RationalPuiseux<F>;
    fn mul(self, rhs: &'a RationalPuiseux<F>) -> RationalPuiseux<F> {
        reduce_fraction(&(&self.num * &rhs.num), &(&self.den * &rhs.den)).expect("nonzero")
    }
}
