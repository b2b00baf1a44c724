//! Lazy term streams with a shared, append-only memo.
//!
//! A [`SeriesStream`] is a cheap handle; clones share the memoized prefix.
//! Handles use `Rc`, so a stream is confined to the thread that built it;
//! every reader of a given handle sees the same terms in the same order.

use alloc::boxed::Box;
use alloc::rc::Rc;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::error::{Error, Result};
use crate::exponent::{Degree, Exponent};
use crate::field::Field;
use crate::poly::PuiseuxPoly;
use crate::rational::RationalPuiseux;
use crate::series::TruncatedSeries;
use crate::terms::{self, Term};

/// Default limit on the number of terms one stream will ever produce.
pub const DEFAULT_PULL_BUDGET: usize = 200_000;

/// A producer of terms with strictly decreasing exponents. `Ok(None)` means
/// the element is exactly the sum of the terms produced so far.
pub trait TermSource<F: Field> {
    fn next_term(&mut self) -> Result<Option<Term<F>>>;
}

impl<F: Field, G: FnMut() -> Result<Option<Term<F>>>> TermSource<F> for G {
    fn next_term(&mut self) -> Result<Option<Term<F>>> {
        self()
    }
}

struct Inner<F: Field> {
    source: Box<dyn TermSource<F>>,
    memo: Vec<Term<F>>,
    ended: bool,
    failure: Option<Error>,
    budget: usize,
}

impl<F: Field> Inner<F> {
    /// Makes `memo[i]` available if the stream has that many terms.
    fn pull_to(&mut self, i: usize) -> Result<()> {
        while self.memo.len() <= i && !self.ended {
            if let Some(e) = &self.failure {
                return Err(e.clone());
            }
            if self.memo.len() >= self.budget {
                return Err(Error::BudgetExhausted {
                    budget: self.budget,
                });
            }
            match self.source.next_term() {
                Ok(None) => self.ended = true,
                Ok(Some((e, c))) => {
                    if c.is_zero() {
                        self.failure = Some(Error::domain("stream produced a zero coefficient"));
                        continue;
                    }
                    if self.memo.last().is_some_and(|(le, _)| *le <= e) {
                        self.failure = Some(Error::NonDecreasing {
                            index: self.memo.len(),
                        });
                        continue;
                    }
                    self.memo.push((e, c));
                }
                Err(err) => self.failure = Some(err),
            }
        }
        Ok(())
    }
}

#[derive(Clone)]
pub struct SeriesStream<F: Field> {
    inner: Rc<RefCell<Inner<F>>>,
}

impl<F: Field> SeriesStream<F> {
    pub fn from_source(source: impl TermSource<F> + 'static) -> Self {
        SeriesStream {
            inner: Rc::new(RefCell::new(Inner {
                source: Box::new(source),
                memo: Vec::new(),
                ended: false,
                failure: None,
                budget: DEFAULT_PULL_BUDGET,
            })),
        }
    }

    /// Stream over a finite, already canonical list of terms.
    pub fn from_terms(terms: Vec<Term<F>>) -> Self {
        let terms = terms::normalize(terms);
        let mut it = terms.into_iter();
        Self::from_source(move || Ok(it.next()))
    }

    pub fn from_poly(p: &PuiseuxPoly<F>) -> Self {
        Self::from_terms(p.terms().to_vec())
    }

    /// Descending expansion of `x` by lazy long division.
    pub fn from_rational(x: &RationalPuiseux<F>) -> Self {
        Self::from_source(LongDivision {
            rem: x.num().terms().to_vec(),
            den: x.den().terms().to_vec(),
        })
    }

    /// Limits the total number of terms this stream may produce.
    pub fn with_budget(self, budget: usize) -> Self {
        self.inner.borrow_mut().budget = budget;
        self
    }

    /// The `i`-th term, `None` past the end of a finite stream.
    pub fn term(&self, i: usize) -> Result<Option<Term<F>>> {
        let mut inner = self.inner.borrow_mut();
        inner.pull_to(i)?;
        Ok(inner.memo.get(i).cloned())
    }

    /// Every term with exponent strictly above `cutoff`. If the stream ends
    /// first, the result is exact.
    pub fn truncate(&self, cutoff: &Exponent) -> Result<TruncatedSeries<F>> {
        let mut inner = self.inner.borrow_mut();
        let mut i = 0;
        loop {
            inner.pull_to(i)?;
            match inner.memo.get(i) {
                None => {
                    return Ok(TruncatedSeries::from_canonical(
                        inner.memo.clone(),
                        Degree::NegInfinity,
                    ))
                }
                Some((e, _)) if e <= cutoff => {
                    return Ok(TruncatedSeries::from_canonical(
                        inner.memo[..i].to_vec(),
                        Degree::Finite(cutoff.clone()),
                    ))
                }
                Some(_) => i += 1,
            }
        }
    }

    /// Same as [`truncate`](Self::truncate) on the extended axis; a `-inf`
    /// cutoff pulls the whole (necessarily finite) stream.
    pub fn truncate_degree(&self, cutoff: &Degree) -> Result<TruncatedSeries<F>> {
        match cutoff {
            Degree::Finite(c) => self.truncate(c),
            Degree::NegInfinity => {
                let mut inner = self.inner.borrow_mut();
                let mut i = 0;
                loop {
                    inner.pull_to(i)?;
                    if inner.memo.len() <= i {
                        return Ok(TruncatedSeries::from_canonical(
                            inner.memo.clone(),
                            Degree::NegInfinity,
                        ));
                    }
                    i += 1;
                }
            }
        }
    }

    /// Terms produced so far.
    pub fn memoized(&self) -> Vec<Term<F>> {
        self.inner.borrow().memo.clone()
    }

    /// Termwise sum of two streams.
    pub fn sum(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        let (mut i, mut j) = (0usize, 0usize);
        Self::from_source(move || loop {
            let x = a.term(i)?;
            let y = b.term(j)?;
            match (x, y) {
                (None, None) => return Ok(None),
                (Some(t), None) => {
                    i += 1;
                    return Ok(Some(t));
                }
                (None, Some(t)) => {
                    j += 1;
                    return Ok(Some(t));
                }
                (Some((ex, cx)), Some((ey, cy))) => {
                    if ex > ey {
                        i += 1;
                        return Ok(Some((ex, cx)));
                    } else if ey > ex {
                        j += 1;
                        return Ok(Some((ey, cy)));
                    }
                    i += 1;
                    j += 1;
                    let c = cx.add(&cy);
                    if !c.is_zero() {
                        return Ok(Some((ex, c)));
                    }
                }
            }
        })
    }

    pub fn add_poly(&self, p: &PuiseuxPoly<F>) -> Self {
        self.sum(&Self::from_poly(p))
    }

    /// Adds an arbitrary finite sum of terms (exponents may be negative).
    pub fn add_terms(&self, t: Vec<Term<F>>) -> Self {
        self.sum(&Self::from_terms(t))
    }
}

struct LongDivision<F: Field> {
    rem: Vec<Term<F>>,
    den: Vec<Term<F>>,
}

impl<F: Field> TermSource<F> for LongDivision<F> {
    fn next_term(&mut self) -> Result<Option<Term<F>>> {
        let Some((e, c)) = self.rem.first() else {
            return Ok(None);
        };
        let (de, dc) = self.den.first().ok_or(Error::DivisionByZero)?;
        let qe = e - de;
        let qc = c.mul(&dc.inv().expect("nonzero"));
        let sub = terms::scale(&self.den, &qc, &qe);
        self.rem = terms::sub(&self.rem, &sub);
        Ok(Some((qe, qc)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::q;
    use crate::field::Rational;
    use alloc::vec;

    type P = PuiseuxPoly<Rational>;

    fn one() -> Rational {
        Rational::new(1, 1)
    }

    #[test]
    fn truncate_finite_stream_is_exact() {
        let s = SeriesStream::from_poly(&(&P::t_pow(q(1, 1)) + &P::one()));
        let t = s.truncate(&q(-5, 1)).unwrap();
        assert!(t.is_exact());
        assert_eq!(t.terms().len(), 2);
    }

    #[test]
    fn geometric_series_oracle() {
        // 1/(t - 1) = sum_{k >= 1} t^{-k}
        let x = RationalPuiseux::new(&P::one(), &(&P::t_pow(q(1, 1)) - &P::one())).unwrap();
        let s = SeriesStream::from_rational(&x);
        let t = s.truncate(&q(-3, 1)).unwrap();
        assert_eq!(t.terms(), &[(q(-1, 1), one()), (q(-2, 1), one())]);
        assert_eq!(t.cutoff(), &Degree::Finite(q(-3, 1)));
        for k in 1..20 {
            assert_eq!(s.term(k - 1).unwrap(), Some((q(-(k as i64), 1), one())));
        }
    }

    #[test]
    fn exact_rational_stream_ends() {
        let x = RationalPuiseux::new(&(&P::t_pow(q(1, 1)) + &P::one()), &P::t_pow(q(1, 1))).unwrap();
        let s = SeriesStream::from_rational(&x);
        assert_eq!(s.term(0).unwrap(), Some((q(0, 1), one())));
        assert_eq!(s.term(1).unwrap(), Some((q(-1, 1), one())));
        assert_eq!(s.term(2).unwrap(), None);
    }

    #[test]
    fn non_decreasing_source_is_signaled() {
        let mut k = 0;
        let s = SeriesStream::<Rational>::from_source(move || {
            k += 1;
            Ok(Some((q(if k == 3 { 5 } else { -k }, 1), one())))
        });
        assert!(matches!(s.truncate(&q(-10, 1)), Err(Error::NonDecreasing { index: 2 })));
    }

    #[test]
    fn accumulating_stream_hits_budget() {
        let mut k = 0i64;
        let s = SeriesStream::<Rational>::from_source(move || {
            k += 1;
            Ok(Some((q(1, k), one())))
        })
        .with_budget(50);
        assert_eq!(s.truncate(&q(-1, 1)), Err(Error::BudgetExhausted { budget: 50 }));
    }

    #[test]
    fn clones_share_memo() {
        let x = RationalPuiseux::new(&P::one(), &(&P::t_pow(q(1, 1)) - &P::one())).unwrap();
        let s = SeriesStream::from_rational(&x);
        let s2 = s.clone();
        s.truncate(&q(-4, 1)).unwrap();
        assert_eq!(s2.memoized().len(), 4);
    }

    #[test]
    fn sum_cancels() {
        let a = SeriesStream::from_terms(vec![(q(1, 1), one()), (q(0, 1), one())]);
        let b = a.add_terms(vec![(q(1, 1), Rational::new(-1, 1)), (q(-10, 1), one())]);
        let t = b.truncate(&q(-20, 1)).unwrap();
        assert!(t.is_exact());
        assert_eq!(t.terms(), &[(q(0, 1), one()), (q(-10, 1), one())]);
    }
}
