use alloc::vec::Vec;
use core::cmp::max;
use core::fmt;

use crate::error::{Error, Result};
use crate::exponent::{Degree, Exponent, Valuation};
use crate::field::Field;
use crate::poly::PuiseuxPoly;
use crate::rational::RationalPuiseux;
use crate::terms::{self, Term};

/// A finite view of an element of the completed field: every term with
/// exponent strictly above `cutoff` is listed, nothing is known at or below
/// it. A cutoff of `-inf` means the listed terms are the whole element.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries<F: Field> {
    terms: Vec<Term<F>>,
    cutoff: Degree,
}

impl<F: Field> TruncatedSeries<F> {
    /// Canonicalizes `terms` and drops any at or below the cutoff.
    pub fn new(terms: Vec<Term<F>>, cutoff: Degree) -> Self {
        let terms = terms::normalize(terms);
        let terms = terms::keep_above(&terms, &cutoff);
        TruncatedSeries { terms, cutoff }
    }

    pub(crate) fn from_canonical(terms: Vec<Term<F>>, cutoff: Degree) -> Self {
        debug_assert!(terms::is_canonical(&terms));
        debug_assert!(terms.iter().all(|(e, _)| cutoff < *e));
        TruncatedSeries { terms, cutoff }
    }

    pub fn exact(terms: Vec<Term<F>>) -> Self {
        Self::new(terms, Degree::NegInfinity)
    }

    pub fn zero() -> Self {
        Self::exact(Vec::new())
    }

    pub fn from_poly(p: &PuiseuxPoly<F>) -> Self {
        TruncatedSeries {
            terms: p.terms().to_vec(),
            cutoff: Degree::NegInfinity,
        }
    }

    /// Descending long division of `x`, keeping exponents above `cutoff`.
    pub fn from_rational(x: &RationalPuiseux<F>, cutoff: &Degree) -> Result<Self> {
        Self::from_poly(x.num()).div(&Self::from_poly(x.den()), cutoff)
    }

    /// Terms of `self` strictly above the cutoff.
    pub fn terms(&self) -> &[Term<F>] {
        &self.terms
    }

    pub fn cutoff(&self) -> &Degree {
        &self.cutoff
    }

    pub fn is_exact(&self) -> bool {
        self.cutoff.is_neg_infinity()
    }

    /// Known to be zero (exactly).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.is_exact()
    }

    pub fn leading_term(&self) -> Option<&Term<F>> {
        self.terms.first()
    }

    /// Exponent of the leading known term, or the cutoff if nothing is known.
    /// An upper bound for the true degree.
    pub fn degree_bound(&self) -> Degree {
        match self.terms.first() {
            Some((e, _)) => Degree::Finite(e.clone()),
            None => self.cutoff.clone(),
        }
    }

    /// Exact valuation, if decidable at this precision.
    pub fn valuation(&self) -> Result<Valuation> {
        match (self.terms.first(), &self.cutoff) {
            (Some((e, _)), _) => Ok(Valuation::Finite(-e)),
            (None, Degree::NegInfinity) => Ok(Valuation::Infinity),
            (None, c) => Err(Error::PrecisionExhausted { needed: c.clone() }),
        }
    }

    /// `nu(self) >= bound` always holds; equality when a term is known.
    pub fn valuation_lower_bound(&self) -> Valuation {
        self.degree_bound().to_valuation()
    }

    /// Raises the cutoff, forgetting terms at or below it.
    pub fn truncate(&self, cutoff: &Degree) -> Self {
        let c = max(cutoff.clone(), self.cutoff.clone());
        TruncatedSeries {
            terms: terms::keep_above(&self.terms, &c),
            cutoff: c,
        }
    }

    /// Terms with exponent `>= 0`. Needs every such term known, i.e. a
    /// negative cutoff.
    pub fn principal_part(&self) -> Result<PuiseuxPoly<F>> {
        if !(self.cutoff < Exponent::zero()) {
            return Err(Error::PrecisionExhausted {
                needed: self.cutoff.clone(),
            });
        }
        let p = self
            .terms
            .iter()
            .take_while(|(e, _)| !e.is_negative())
            .cloned()
            .collect();
        Ok(PuiseuxPoly::from_canonical(p))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let c = max(self.cutoff.clone(), rhs.cutoff.clone());
        let sum = terms::add(&self.terms, &rhs.terms);
        TruncatedSeries {
            terms: terms::keep_above(&sum, &c),
            cutoff: c,
        }
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            terms: terms::neg(&self.terms),
            cutoff: self.cutoff.clone(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn sub_poly(&self, p: &PuiseuxPoly<F>) -> Self {
        self.sub(&Self::from_poly(p))
    }

    /// Product with the cutoff at which the unknown tails of either factor
    /// start to contaminate the result.
    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let c = max(
            self.degree_bound().add(&rhs.cutoff),
            rhs.degree_bound().add(&self.cutoff),
        );
        TruncatedSeries {
            terms: terms::mul_above(&self.terms, &rhs.terms, &c),
            cutoff: c,
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        TruncatedSeries {
            terms: terms::scale(&self.terms, c, &Exponent::zero()),
            cutoff: self.cutoff.clone(),
        }
    }

    /// Multiplication by `t^e`.
    pub fn shift(&self, e: &Exponent) -> Self {
        TruncatedSeries {
            terms: terms::scale(&self.terms, &F::one(), e),
            cutoff: self.cutoff.shift(e),
        }
    }

    /// `self / rhs` by descending long division, keeping exponents above
    /// `target` and above whatever the inputs' precision allows.
    ///
    /// A `-inf` target is only allowed when the quotient turns out to be a
    /// finite sum.
    pub fn div(&self, rhs: &Self, target: &Degree) -> Result<Self> {
        let (de, dc) = match rhs.leading_term() {
            Some(t) => t,
            None if rhs.is_exact() => return Err(Error::DivisionByZero),
            None => {
                return Err(Error::PrecisionExhausted {
                    needed: rhs.cutoff.clone(),
                })
            }
        };
        let dinv = dc.inv().expect("nonzero");
        let neg_de = -de;
        // x = X + O(t^cx), d = D + O(t^cd): x/d - X/D has exponent at most
        // max(cx - de, deg X + cd - 2 de).
        let from_num = self.cutoff.shift(&neg_de);
        let from_den = self.degree_bound().add(&rhs.cutoff).shift(&neg_de).shift(&neg_de);
        let cutoff = max(target.clone(), max(from_num, from_den));
        let rem_floor = cutoff.shift(de);

        // an exact quotient cannot go below this exponent
        let exact_floor = match (self.terms.last(), rhs.terms.last()) {
            (Some((lx, _)), Some((ld, _))) => Some(lx - ld),
            _ => None,
        };
        let mut quot = Vec::new();
        let mut rem = self.terms.clone();
        let mut dropped = false;
        while let Some((e, c)) = rem.first() {
            if rem_floor >= *e {
                dropped = true;
                break;
            }
            let qe = e - de;
            if cutoff.is_neg_infinity() && exact_floor.as_ref().is_some_and(|f| qe < *f) {
                return Err(Error::domain("infinite expansion requested without a cutoff"));
            }
            let qc = c.mul(&dinv);
            let sub = terms::scale(&rhs.terms, &qc, &qe);
            rem = terms::sub(&rem, &sub);
            let before = rem.len();
            rem = terms::keep_above(&rem, &rem_floor);
            dropped |= rem.len() != before;
            quot.push((qe, qc));
        }
        let exact_quotient = !dropped && self.is_exact() && rhs.is_exact();
        if cutoff.is_neg_infinity() && !exact_quotient {
            return Err(Error::domain("infinite expansion requested without a cutoff"));
        }
        let cutoff = if exact_quotient { Degree::NegInfinity } else { cutoff };
        Ok(TruncatedSeries::from_canonical(quot, cutoff))
    }

    /// `1/self` to the requested cutoff (geometric expansion around the
    /// leading term, computed as long division).
    pub fn invert(&self, target: &Degree) -> Result<Self> {
        Self::from_poly(&PuiseuxPoly::one()).div(self, target)
    }

    /// The exact value as a fraction (`x * t^m / t^m`), if `self` is exact.
    pub fn to_rational(&self) -> Option<RationalPuiseux<F>> {
        if !self.is_exact() {
            return None;
        }
        let low = match self.terms.last() {
            Some((e, _)) if e.is_negative() => -e,
            _ => Exponent::zero(),
        };
        let num = PuiseuxPoly::from_canonical(terms::scale(&self.terms, &F::one(), &low));
        Some(RationalPuiseux::new(&num, &PuiseuxPoly::t_pow(low)).expect("nonzero"))
    }
}

impl<F: Field> From<PuiseuxPoly<F>> for TruncatedSeries<F> {
    fn from(p: PuiseuxPoly<F>) -> Self {
        Self::from_poly(&p)
    }
}

impl<F: Field> fmt::Display for TruncatedSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.cutoff {
            Degree::NegInfinity => terms::render(&self.terms, f),
            Degree::Finite(c) => {
                if !self.terms.is_empty() {
                    terms::render(&self.terms, f)?;
                    f.write_str(" + ")?;
                }
                write!(f, "O(t^({}))", c)
            }
        }
    }
}

impl<F: Field> fmt::Debug for TruncatedSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries({})", self)
    }
}
