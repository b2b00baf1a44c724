use alloc::vec::Vec;

use crate::cf::ContinuedFraction;
use crate::error::{Error, Result};
use crate::exponent::{Degree, Exponent};
use crate::field::Field;
use crate::poly::PuiseuxPoly;
use crate::rational::RationalPuiseux;
use crate::series::{SeriesStream, TruncatedSeries};
use crate::terms::Term;

/// `x_n = p_n / q_n`, built by the three-term recursion.
///
/// The pair is kept raw: `q_n` is not rescaled, so `p_n q_{n-1} - p_{n-1}
/// q_n = (-1)^(n-1)` holds exactly. [`fraction`](Self::fraction) gives the
/// den-monic form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproximantPair<F: Field> {
    pub index: usize,
    pub p: PuiseuxPoly<F>,
    pub q: PuiseuxPoly<F>,
}

impl<F: Field> ApproximantPair<F> {
    pub fn fraction(&self) -> RationalPuiseux<F> {
        RationalPuiseux::from_comaximal(self.p.clone(), self.q.clone())
    }
}

/// Incremental `p_k = f_k p_{k-1} + p_{k-2}`, `q_k = f_k q_{k-1} + q_{k-2}`.
#[derive(Clone, Debug)]
pub struct Convergents<F: Field> {
    index: Option<usize>,
    p: (PuiseuxPoly<F>, PuiseuxPoly<F>),
    q: (PuiseuxPoly<F>, PuiseuxPoly<F>),
}

impl<F: Field> Default for Convergents<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Field> Convergents<F> {
    /// Seeds `p_{-1} = 1`, `q_{-1} = 0` (and `p_{-2} = 0`, `q_{-2} = 1`).
    pub fn new() -> Self {
        Convergents {
            index: None,
            p: (PuiseuxPoly::zero(), PuiseuxPoly::one()),
            q: (PuiseuxPoly::one(), PuiseuxPoly::zero()),
        }
    }

    pub fn push(&mut self, f: &PuiseuxPoly<F>) -> ApproximantPair<F> {
        let p = &(f * &self.p.1) + &self.p.0;
        let q = &(f * &self.q.1) + &self.q.0;
        self.p.0 = core::mem::replace(&mut self.p.1, p);
        self.q.0 = core::mem::replace(&mut self.q.1, q);
        let index = self.index.map_or(0, |i| i + 1);
        self.index = Some(index);
        self.latest().expect("just pushed")
    }

    pub fn latest(&self) -> Option<ApproximantPair<F>> {
        self.index.map(|index| ApproximantPair {
            index,
            p: self.p.1.clone(),
            q: self.q.1.clone(),
        })
    }
}

/// `(p_k, q_k)` for `k = 0..=n`.
pub fn approximants<F: Field>(
    cf: &ContinuedFraction<F>,
    n: usize,
) -> Result<Vec<ApproximantPair<F>>> {
    if n >= cf.quotients().len() {
        return Err(Error::domain(alloc::format!(
            "approximant {} needs f{}, only {} partial quotients known",
            n,
            n,
            cf.quotients().len()
        )));
    }
    let mut c = Convergents::new();
    Ok(cf.quotients()[..=n].iter().map(|f| c.push(f)).collect())
}

/// The value of a finite expression.
pub fn evaluate_exact<F: Field>(cf: &ContinuedFraction<F>) -> Result<RationalPuiseux<F>> {
    if !cf.is_finite() {
        return Err(Error::domain("only a finite expression has an exact value"));
    }
    let n = cf.last_index().expect("finite expressions are nonempty");
    let last = approximants(cf, n)?.pop().expect("nonempty");
    Ok(last.fraction())
}

/// The value of a (possibly infinite) expression as a lazy stream.
///
/// `quotient(n)` gives `f_n`, or `None` once the expression has ended. Terms
/// are read off the convergents: `x_n` agrees with the value strictly above
/// `-T_n`, `T_n = 2 (deg f_1 + ... + deg f_n)`. If the degrees are summable
/// the stream stalls and reports [`Error::BudgetExhausted`] after
/// `max_quotients` partial quotients.
pub fn cf_value_stream<F: Field>(
    quotient: impl FnMut(usize) -> Option<PuiseuxPoly<F>> + 'static,
    max_quotients: usize,
) -> SeriesStream<F> {
    SeriesStream::from_source(ValueSource {
        quotient: alloc::boxed::Box::new(quotient),
        conv: Convergents::new(),
        n: 0,
        depth: Exponent::zero(),
        window: Vec::new(),
        last: None,
        ended: false,
        tail: None,
        max_quotients,
    })
}

struct ValueSource<F: Field> {
    quotient: alloc::boxed::Box<dyn FnMut(usize) -> Option<PuiseuxPoly<F>>>,
    conv: Convergents<F>,
    /// Quotients consumed so far.
    n: usize,
    /// `T_{n-1}`.
    depth: Exponent,
    /// Terms of the current convergent not yet emitted.
    window: Vec<Term<F>>,
    last: Option<Exponent>,
    ended: bool,
    tail: Option<(SeriesStream<F>, usize)>,
    max_quotients: usize,
}

impl<F: Field> ValueSource<F> {
    fn advance(&mut self) -> Result<bool> {
        if self.ended {
            return Ok(false);
        }
        if self.n >= self.max_quotients {
            return Err(Error::BudgetExhausted {
                budget: self.max_quotients,
            });
        }
        let Some(f) = (self.quotient)(self.n) else {
            if self.n == 0 {
                return Err(Error::domain("an expression needs f0"));
            }
            self.ended = true;
            return Ok(false);
        };
        if self.n > 0 {
            match f.degree().finite() {
                Some(d) if d.is_positive() => self.depth = &self.depth + &d.scale(2),
                _ => return Err(Error::domain("partial quotients need positive degree")),
            }
        }
        self.n += 1;
        let x = self.conv.push(&f).fraction();
        let cut = Degree::Finite(-&self.depth);
        let s = TruncatedSeries::from_rational(&x, &cut)?;
        self.window = s
            .terms()
            .iter()
            .filter(|(e, _)| self.last.as_ref().is_none_or(|l| e < l))
            .cloned()
            .collect();
        Ok(true)
    }
}

impl<F: Field> crate::series::TermSource<F> for ValueSource<F> {
    fn next_term(&mut self) -> Result<Option<Term<F>>> {
        loop {
            if !self.window.is_empty() {
                let t = self.window.remove(0);
                self.last = Some(t.0.clone());
                return Ok(Some(t));
            }
            if let Some((tail, i)) = &mut self.tail {
                // the expression ended: its last convergent is the value
                while let Some(t) = tail.term(*i)? {
                    *i += 1;
                    if self.last.as_ref().is_none_or(|l| t.0 < *l) {
                        self.last = Some(t.0.clone());
                        return Ok(Some(t));
                    }
                }
                return Ok(None);
            }
            if !self.advance()? {
                let x = self.conv.latest().expect("f0 read").fraction();
                self.tail = Some((SeriesStream::from_rational(&x), 0));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::q;
    use crate::field::Rational;
    use alloc::vec;

    type P = PuiseuxPoly<Rational>;

    fn t() -> P {
        P::t_pow(q(1, 1))
    }

    fn c(n: i64) -> P {
        P::constant(Rational::new(n, 1))
    }

    #[test]
    fn recursion_examples() {
        let cf = ContinuedFraction::finite(vec![t(), t()]).unwrap();
        let a = approximants(&cf, 1).unwrap();
        assert_eq!((a[0].p.clone(), a[0].q.clone()), (t(), P::one()));
        assert_eq!((a[1].p.clone(), a[1].q.clone()), (&(&t() * &t()) + &P::one(), t()));

        let h2 = P::t_pow(q(1, 2)).scale(&Rational::new(2, 1));
        let cf = ContinuedFraction::finite(vec![P::t_pow(q(1, 2)), h2.clone(), h2]).unwrap();
        let a = approximants(&cf, 2).unwrap();
        assert_eq!(a[2].q, &t().scale(&Rational::new(4, 1)) + &P::one());
        assert_eq!(a[2].q.degree(), Degree::Finite(q(1, 1)));
    }

    #[test]
    fn evaluation_examples() {
        let cf = ContinuedFraction::finite(vec![t(), t()]).unwrap();
        let want = RationalPuiseux::new(&(&(&t() * &t()) + &P::one()), &t()).unwrap();
        assert_eq!(evaluate_exact(&cf).unwrap(), want);
        let cf = ContinuedFraction::finite(vec![t(), t(), t()]).unwrap();
        let num = &(&(&t() * &t()) * &t()) + &t().scale(&Rational::new(2, 1));
        let den = &(&t() * &t()) + &P::one();
        assert_eq!(evaluate_exact(&cf).unwrap(), RationalPuiseux::new(&num, &den).unwrap());
        let cf = ContinuedFraction::finite(vec![c(7)]).unwrap();
        assert_eq!(evaluate_exact(&cf).unwrap(), RationalPuiseux::from_poly(c(7)));
        assert!(evaluate_exact(&cf.as_prefix()).is_err());
    }

    #[test]
    fn determinant_sign() {
        let f = vec![c(3), &t() + &c(1), t().scale(&Rational::new(-2, 1)), P::t_pow(q(1, 3))];
        let cf = ContinuedFraction::finite(f).unwrap();
        let a = approximants(&cf, 3).unwrap();
        for k in 1..a.len() {
            let det = &(&a[k].p * &a[k - 1].q) - &(&a[k - 1].p * &a[k].q);
            let sign = if k % 2 == 1 { 1 } else { -1 };
            assert_eq!(det, c(sign));
        }
    }

    #[test]
    fn value_stream_of_finite_expression() {
        let cf = ContinuedFraction::finite(vec![t(), &t() - &c(1)]).unwrap();
        let qs = cf.quotients().to_vec();
        let s = cf_value_stream(move |i| qs.get(i).cloned(), 100);
        let want = TruncatedSeries::from_rational(&evaluate_exact(&cf).unwrap(), &Degree::Finite(q(-12, 1)))
            .unwrap();
        assert_eq!(s.truncate(&q(-12, 1)).unwrap(), want);
    }

    #[test]
    fn value_stream_of_periodic_expression() {
        // [t^(1/2); 2 t^(1/2), 2 t^(1/2), ...] = sqrt(t + 1)
        let h = P::t_pow(q(1, 2));
        let s = cf_value_stream(move |i| Some(if i == 0 { h.clone() } else { h.scale(&Rational::new(2, 1)) }), 1000);
        let root = crate::series::sqrt_stream(&SeriesStream::from_poly(&(&t() + &P::one())));
        let cut = q(-15, 2);
        assert_eq!(s.truncate(&cut).unwrap(), root.truncate(&cut).unwrap());
        let (cf, _) = crate::cf::expand_stream(&s, 6, &q(-20, 1)).unwrap();
        assert_eq!(cf.partials().len(), 6);
    }

    #[test]
    fn summable_degrees_stall() {
        let s = cf_value_stream(|i| Some(if i == 0 { P::zero() } else { P::t_pow(q(1, 1 << i)) }), 10);
        assert!(matches!(s.truncate(&q(-5, 1)), Err(Error::BudgetExhausted { .. })));
    }
}
