use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::field::Field;
use crate::poly::PuiseuxPoly;

/// `[f0; f1, f2, ...]` with `deg f_i > 0` for `i >= 1`.
///
/// A finite expression evaluates to an element of the fraction field; a
/// non-finite one is a known prefix of a longer (possibly infinite)
/// expansion. A prefix may be empty when not even `f0` could be certified.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ContinuedFraction<F: Field> {
    quotients: Vec<PuiseuxPoly<F>>,
    finite: bool,
}

impl<F: Field> ContinuedFraction<F> {
    pub fn new(quotients: Vec<PuiseuxPoly<F>>, finite: bool) -> Result<Self> {
        if finite && quotients.is_empty() {
            return Err(Error::domain("a finite continued fraction needs f0"));
        }
        for (i, f) in quotients.iter().enumerate().skip(1) {
            if !(f.degree() > Exponent::zero()) {
                return Err(Error::domain(alloc::format!(
                    "partial quotient f{} = {} must have positive degree",
                    i,
                    f
                )));
            }
        }
        Ok(ContinuedFraction { quotients, finite })
    }

    pub fn finite(quotients: Vec<PuiseuxPoly<F>>) -> Result<Self> {
        Self::new(quotients, true)
    }

    pub(crate) fn from_parts(quotients: Vec<PuiseuxPoly<F>>, finite: bool) -> Self {
        debug_assert!(Self::new(quotients.clone(), finite).is_ok());
        ContinuedFraction { quotients, finite }
    }

    pub fn f0(&self) -> Option<&PuiseuxPoly<F>> {
        self.quotients.first()
    }

    /// `f1, f2, ...`
    pub fn partials(&self) -> &[PuiseuxPoly<F>] {
        self.quotients.get(1..).unwrap_or(&[])
    }

    /// `f0, f1, ...`
    pub fn quotients(&self) -> &[PuiseuxPoly<F>] {
        &self.quotients
    }

    pub fn is_finite(&self) -> bool {
        self.finite
    }

    /// Index of the last known partial quotient (`l` for a finite
    /// expression). `None` for an empty prefix.
    pub fn last_index(&self) -> Option<usize> {
        self.quotients.len().checked_sub(1)
    }

    /// `deg f_1, deg f_2, ...` (all positive).
    pub fn degrees(&self) -> Vec<Exponent> {
        self.partials()
            .iter()
            .map(|f| f.degree().finite().expect("positive degree").clone())
            .collect()
    }

    /// `T_n = 2 (deg f_1 + ... + deg f_n)` for `n = 0..=len`.
    pub fn doubled_degree_sums(&self) -> Vec<Exponent> {
        let mut out = alloc::vec![Exponent::zero()];
        let mut acc = Exponent::zero();
        for d in self.degrees() {
            acc = acc + d.scale(2);
            out.push(acc.clone());
        }
        out
    }

    /// The finite expression `[f0; ..., fn]`.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        if n >= self.quotients.len() {
            return Err(Error::domain(alloc::format!(
                "prefix index {} beyond {} known partial quotients",
                n,
                self.quotients.len()
            )));
        }
        Ok(ContinuedFraction {
            quotients: self.quotients[..=n].to_vec(),
            finite: true,
        })
    }

    pub fn starts_with(&self, prefix: &Self) -> bool {
        self.quotients.starts_with(&prefix.quotients)
    }

    /// Same quotients, marked as a prefix.
    pub fn as_prefix(&self) -> Self {
        ContinuedFraction {
            quotients: self.quotients.clone(),
            finite: false,
        }
    }
}

impl<F: Field> fmt::Display for ContinuedFraction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        match self.quotients.split_first() {
            None => f.write_str("...")?,
            Some((f0, rest)) => {
                write!(f, "{}", f0)?;
                for (i, fi) in rest.iter().enumerate() {
                    f.write_str(if i == 0 { "; " } else { ", " })?;
                    write!(f, "{}", fi)?;
                }
                if !self.finite {
                    f.write_str(if rest.is_empty() { "; ..." } else { ", ..." })?;
                }
            }
        }
        f.write_str("]")
    }
}

impl<F: Field> fmt::Debug for ContinuedFraction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Why an expansion stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExpansionStatus {
    /// The expansion ended: the element is the value of the expression.
    Ended,
    Running,
    /// The available precision could not certify the next partial quotient.
    PrecisionExhausted,
    /// The term budget ran out first.
    BudgetExhausted,
}

impl ExpansionStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ExpansionStatus::Ended => "ended",
            ExpansionStatus::Running => "running",
            ExpansionStatus::PrecisionExhausted => "precision-exhausted",
            ExpansionStatus::BudgetExhausted => "budget-exhausted",
        }
    }
}

impl fmt::Display for ExpansionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
