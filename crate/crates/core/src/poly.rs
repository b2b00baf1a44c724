//! Puiseux polynomials: finite sums `sum c_i t^{r_i}` with rational `r_i >= 0`.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exponent::{common_denominator, Degree, Exponent, Valuation};
use crate::field::Field;
use crate::terms::{self, Term};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PuiseuxPoly<F: Field> {
    terms: Vec<Term<F>>,
}

impl<F: Field> PuiseuxPoly<F> {
    /// Builds a polynomial from arbitrary terms (merged, sorted, zeros
    /// dropped). Fails if any surviving exponent is negative.
    pub fn new(terms: Vec<Term<F>>) -> Result<Self> {
        let terms = terms::normalize(terms);
        if terms.iter().any(|(e, _)| e.is_negative()) {
            return Err(Error::domain("Puiseux polynomial with a negative exponent"));
        }
        Ok(PuiseuxPoly { terms })
    }

    pub(crate) fn from_canonical(terms: Vec<Term<F>>) -> Self {
        debug_assert!(terms::is_canonical(&terms));
        debug_assert!(terms.iter().all(|(e, _)| !e.is_negative()));
        PuiseuxPoly { terms }
    }

    pub fn zero() -> Self {
        PuiseuxPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(c, Exponent::zero())
    }

    /// `c * t^e`; panics on a negative exponent.
    pub fn monomial(c: F, e: Exponent) -> Self {
        assert!(!e.is_negative(), "negative exponent in a Puiseux polynomial");
        if c.is_zero() {
            Self::zero()
        } else {
            PuiseuxPoly { terms: alloc::vec![(e, c)] }
        }
    }

    /// `t^e`.
    pub fn t_pow(e: Exponent) -> Self {
        Self::monomial(F::one(), e)
    }

    pub fn terms(&self) -> &[Term<F>] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term<F>> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_zero() && self.terms[0].1.is_one()
    }

    /// Nonzero constant, i.e. a unit of the ring.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_zero()
    }

    pub fn degree(&self) -> Degree {
        terms::degree(&self.terms)
    }

    /// `nu = -deg`, with `nu(0) = +inf`.
    pub fn valuation(&self) -> Valuation {
        self.degree().to_valuation()
    }

    pub fn leading_term(&self) -> Option<&Term<F>> {
        self.terms.first()
    }

    pub fn leading_coefficient(&self) -> Option<&F> {
        self.terms.first().map(|(_, c)| c)
    }

    /// `n(f)`: lcm of the exponent denominators.
    pub fn ramification(&self) -> BigInt {
        common_denominator(self.terms.iter().map(|(e, _)| e))
    }

    pub fn scale(&self, c: &F) -> Self {
        PuiseuxPoly::from_canonical(terms::scale(&self.terms, c, &Exponent::zero()))
    }

    pub fn mul_monomial(&self, c: &F, e: &Exponent) -> Self {
        assert!(!e.is_negative());
        PuiseuxPoly::from_canonical(terms::scale(&self.terms, c, e))
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading_coefficient() {
            None => Self::zero(),
            Some(c) => self.scale(&c.inv().expect("nonzero")),
        }
    }

    /// Euclidean division in `E[u]`, `u = t^{1/n}`: returns `(q, r)` with
    /// `self = q * d + r` and `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let (dlead_e, dlead_c) = d.leading_term().ok_or(Error::DivisionByZero)?;
        let dinv = dlead_c.inv().expect("nonzero");
        let mut quot = Vec::new();
        let mut rem = self.terms.clone();
        while let Some((e, c)) = rem.first() {
            if e < dlead_e {
                break;
            }
            let qe = e - dlead_e;
            let qc = c.mul(&dinv);
            let sub = terms::scale(&d.terms, &qc, &qe);
            rem = terms::sub(&rem, &sub);
            quot.push((qe, qc));
        }
        Ok((PuiseuxPoly::from_canonical(quot), PuiseuxPoly::from_canonical(rem)))
    }

    /// Exact quotient; fails if the division leaves a remainder.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::domain("inexact polynomial division"))
        }
    }

    /// Monic gcd, computed by the Euclidean algorithm in `E[u]`. Remainders
    /// are made monic as they appear, which keeps rational coefficients small.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut x, mut y) = (a.monic(), b.monic());
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y).expect("nonzero divisor");
            x = y;
            y = r.monic();
        }
        x
    }
}

impl<F: Field> fmt::Display for PuiseuxPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        terms::render(&self.terms, f)
    }
}

impl<F: Field> fmt::Debug for PuiseuxPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PuiseuxPoly({})", self)
    }
}

impl<'a, F: Field> Add<&'a PuiseuxPoly<F>> for &'a PuiseuxPoly<F> {
    type Output = PuiseuxPoly<F>;
    fn add(self, rhs: &'a PuiseuxPoly<F>) -> PuiseuxPoly<F> {
        PuiseuxPoly::from_canonical(terms::add(&self.terms, &rhs.terms))
    }
}

impl<'a, F: Field> Sub<&'a PuiseuxPoly<F>> for &'a PuiseuxPoly<F> {
    type Output = PuiseuxPoly<F>;
    fn sub(self, rhs: &'a PuiseuxPoly<F>) -> PuiseuxPoly<F> {
        PuiseuxPoly::from_canonical(terms::sub(&self.terms, &rhs.terms))
    }
}

impl<'a, F: Field> Mul<&'a PuiseuxPoly<F>> for &'a PuiseuxPoly<F> {
    type Output = PuiseuxPoly<F>;
    fn mul(self, rhs: &'a PuiseuxPoly<F>) -> PuiseuxPoly<F> {
        PuiseuxPoly::from_canonical(terms::mul(&self.terms, &rhs.terms))
    }
}

impl<F: Field> Neg for &PuiseuxPoly<F> {
    type Output = PuiseuxPoly<F>;
    fn neg(self) -> PuiseuxPoly<F> {
        PuiseuxPoly::from_canonical(terms::neg(&self.terms))
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl<F: Field> $tr for PuiseuxPoly<F> {
            type Output = PuiseuxPoly<F>;
            fn $m(self, rhs: PuiseuxPoly<F>) -> PuiseuxPoly<F> {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl<F: Field> Neg for PuiseuxPoly<F> {
    type Output = PuiseuxPoly<F>;
    fn neg(self) -> PuiseuxPoly<F> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::q;
    use crate::field::{Fp, Rational};
    use alloc::format;
    use alloc::vec;

    type P = PuiseuxPoly<Rational>;

    fn m(c: i64, e: Exponent) -> P {
        P::monomial(Rational::new(c, 1), e)
    }

    #[test]
    fn cancellation_and_exponent_addition() {
        let a = &m(1, q(1, 2)) + &P::one();
        assert_eq!(&a + &m(-1, q(1, 2)), P::one());
        assert_eq!(&m(1, q(1, 2)) * &m(1, q(1, 3)), m(1, q(5, 6)));
    }

    #[test]
    fn valuation_convention() {
        assert_eq!(m(1, q(1, 2)).valuation(), Valuation::Finite(q(-1, 2)));
        assert_eq!(P::zero().valuation(), Valuation::Infinity);
        assert_eq!(P::zero().degree(), Degree::NegInfinity);
    }

    #[test]
    fn rejects_negative_exponents() {
        assert!(P::new(vec![(q(-1, 2), Rational::new(1, 1))]).is_err());
    }

    #[test]
    fn euclid_after_substitution() {
        // t - 1 = (t^{1/2} - 1)(t^{1/2} + 1)
        let a = &m(1, q(1, 1)) - &P::one();
        let b = &m(1, q(1, 2)) - &P::one();
        let (qq, r) = a.div_rem(&b).unwrap();
        assert!(r.is_zero());
        assert_eq!(format!("{}", qq), "t^(1/2) + 1");
        assert_eq!(P::gcd(&a, &b), b);
    }

    #[test]
    fn gcd_over_fp() {
        type G = PuiseuxPoly<Fp<5>>;
        let x = G::t_pow(q(1, 3));
        let a = &(&x * &x) - &G::one();
        let b = &x + &G::one();
        assert_eq!(G::gcd(&a, &b), b);
        assert_eq!(G::gcd(&a, &G::t_pow(q(1, 1))), G::one());
    }

    #[test]
    fn ramification_index() {
        let a = &m(1, q(1, 2)) + &m(3, q(2, 3));
        assert_eq!(a.ramification(), BigInt::from(6));
        assert_eq!(P::zero().ramification(), BigInt::from(1));
    }
}
