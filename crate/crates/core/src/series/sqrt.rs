use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::field::Field;
use crate::series::SeriesStream;
use crate::terms::Term;

/// Upper bound on how many times the search window for the next root term is
/// doubled before giving up.
const MAX_WIDENINGS: usize = 24;

/// Lazy square root: terms `s_k` solve `(sum s_k)^2 = x` one at a time.
///
/// The branch is the canonical root of the leading coefficient.
pub fn sqrt_stream<F: Field>(x: &SeriesStream<F>) -> SeriesStream<F> {
    SeriesStream::from_source(SqrtSource {
        x: x.clone(),
        root: Vec::new(),
        square: BTreeMap::new(),
        two_lead_inv: None,
        lead_exp: Exponent::zero(),
        done: false,
    })
}

struct SqrtSource<F: Field> {
    x: SeriesStream<F>,
    root: Vec<Term<F>>,
    /// `S^2` for the root terms emitted so far.
    square: BTreeMap<Reverse<Exponent>, F>,
    two_lead_inv: Option<F>,
    /// Exponent of the leading root term.
    lead_exp: Exponent,
    done: bool,
}

impl<F: Field> SqrtSource<F> {
    fn first(&mut self) -> Result<Option<Term<F>>> {
        if F::characteristic() == 2 {
            return Err(Error::domain("square roots need characteristic != 2"));
        }
        let Some((e0, c0)) = self.x.term(0)? else {
            self.done = true;
            return Ok(None);
        };
        let r = c0.sqrt().ok_or(Error::NoSquareRoot)?;
        let two = F::one().add(&F::one());
        self.two_lead_inv = Some(two.mul(&r).inv().expect("char != 2"));
        self.lead_exp = e0.halve();
        Ok(Some((self.lead_exp.clone(), r)))
    }

    fn next(&mut self) -> Result<Option<Term<F>>> {
        let last = self.root.last().expect("first term emitted").0.clone();
        let mut width = Exponent::one();
        for _ in 0..MAX_WIDENINGS {
            // the next root term s has exponent < last, so the residual
            // x - S^2 = 2 s0 s + ... leads with exponent < last + lead_exp
            let cutoff = &(&last + &self.lead_exp) - &width;
            let xt = self.x.truncate(&cutoff)?;
            // x - S^2 is only known above the cutoff unless x is exact
            let above = if xt.is_exact() { None } else { Some(&cutoff) };
            match leading_difference(xt.terms(), &self.square, above) {
                Some((e, c)) => {
                    let se = e - &self.lead_exp;
                    debug_assert!(se < last);
                    let sc = c.mul(self.two_lead_inv.as_ref().expect("set"));
                    return Ok(Some((se, sc)));
                }
                None if xt.is_exact() => {
                    self.done = true;
                    return Ok(None);
                }
                None => {}
            }
            width = width.scale(2);
        }
        Err(Error::BudgetExhausted {
            budget: MAX_WIDENINGS,
        })
    }
}

impl<F: Field> crate::series::TermSource<F> for SqrtSource<F> {
    fn next_term(&mut self) -> Result<Option<Term<F>>> {
        if self.done {
            return Ok(None);
        }
        let t = if self.root.is_empty() {
            self.first()?
        } else {
            self.next()?
        };
        if let Some((e, c)) = &t {
            // S^2 += 2 s S + s^2
            let two_c = c.add(c);
            for (ei, ci) in &self.root {
                add_to(&mut self.square, e + ei, two_c.mul(ci));
            }
            add_to(&mut self.square, e.scale(2), c.mul(c));
            self.root.push((e.clone(), c.clone()));
        }
        Ok(t)
    }
}

fn add_to<F: Field>(map: &mut BTreeMap<Reverse<Exponent>, F>, e: Exponent, c: F) {
    let key = Reverse(e);
    let sum = match map.get(&key) {
        Some(x) => x.add(&c),
        None => c,
    };
    if sum.is_zero() {
        map.remove(&key);
    } else {
        map.insert(key, sum);
    }
}

/// The leading term of `x - square`, looking only at exponents above
/// `above` when given.
fn leading_difference<F: Field>(
    x: &[Term<F>],
    square: &BTreeMap<Reverse<Exponent>, F>,
    above: Option<&Exponent>,
) -> Option<Term<F>> {
    let mut xs = x.iter().peekable();
    let mut ss = square.iter().peekable();
    loop {
        let e = match (xs.peek(), ss.peek()) {
            (None, None) => return None,
            (Some((ex, _)), None) => ex.clone(),
            (None, Some((Reverse(es), _))) => es.clone(),
            (Some((ex, _)), Some((Reverse(es), _))) => ex.max(es).clone(),
        };
        if above.is_some_and(|a| e <= *a) {
            return None;
        }
        let mut c = F::zero();
        if xs.peek().is_some_and(|(ex, _)| *ex == e) {
            c = c.add(&xs.next().expect("peeked").1);
        }
        if ss.peek().is_some_and(|(Reverse(es), _)| *es == e) {
            c = c.sub(ss.next().expect("peeked").1);
        }
        if !c.is_zero() {
            return Some((e, c));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::q;
    use crate::field::{Fp, Rational};
    use crate::poly::PuiseuxPoly;
    use alloc::vec;

    type P = PuiseuxPoly<Rational>;

    #[test]
    fn monomial_roots_end() {
        let s = sqrt_stream(&SeriesStream::from_poly(&P::t_pow(q(1, 1))));
        assert_eq!(s.term(0).unwrap(), Some((q(1, 2), Rational::new(1, 1))));
        assert_eq!(s.term(1).unwrap(), None);
        let s3 = sqrt_stream(&SeriesStream::from_poly(&P::t_pow(q(3, 1))));
        assert_eq!(s3.truncate(&q(-10, 1)).unwrap().terms(), &[(q(3, 2), Rational::new(1, 1))]);
    }

    #[test]
    fn binomial_series_of_t_plus_one() {
        // t^{1/2} (1 + t^{-1})^{1/2} = t^{1/2} + 1/2 t^{-1/2} - 1/8 t^{-3/2} + 1/16 t^{-5/2} - ...
        let x = &P::t_pow(q(1, 1)) + &P::one();
        let s = sqrt_stream(&SeriesStream::from_poly(&x));
        let t = s.truncate(&q(-2, 1)).unwrap();
        assert_eq!(
            t.terms(),
            &[
                (q(1, 2), Rational::new(1, 1)),
                (q(-1, 2), Rational::new(1, 2)),
                (q(-3, 2), Rational::new(-1, 8)),
            ]
        );
        // binomial coefficients C(1/2, k)
        let mut c = Rational::new(1, 1);
        for k in 0..10i64 {
            let (e, got) = s.term(k as usize).unwrap().unwrap();
            assert_eq!(e, q(1 - 2 * k, 2));
            assert_eq!(got, c);
            c = c.mul(&Rational::new(1 - 2 * k, 2 * (k + 1)));
        }
    }

    #[test]
    fn non_square_leading_coefficient() {
        let x = P::constant(Rational::new(2, 1));
        let s = sqrt_stream(&SeriesStream::from_poly(&x));
        assert_eq!(s.term(0), Err(Error::NoSquareRoot));
        let y = PuiseuxPoly::<Fp<5>>::constant(Fp::new(3));
        assert_eq!(sqrt_stream(&SeriesStream::from_poly(&y)).term(0), Err(Error::NoSquareRoot));
    }

    #[test]
    fn perfect_square_terminates() {
        // (t + 2)^2 = t^2 + 4t + 4
        let x = P::new(vec![
            (q(2, 1), Rational::new(1, 1)),
            (q(1, 1), Rational::new(4, 1)),
            (q(0, 1), Rational::new(4, 1)),
        ])
        .unwrap();
        let s = sqrt_stream(&SeriesStream::from_poly(&x));
        let t = s.truncate(&q(-30, 1)).unwrap();
        assert!(t.is_exact());
        assert_eq!(t.terms(), &[(q(1, 1), Rational::new(1, 1)), (q(0, 1), Rational::new(2, 1))]);
    }

    #[test]
    fn squaring_roundtrip_fp() {
        type G = PuiseuxPoly<Fp<5>>;
        let x = &G::t_pow(q(1, 1)) + &G::one();
        let s = sqrt_stream(&SeriesStream::from_poly(&x));
        let t = s.truncate(&q(-6, 1)).unwrap();
        let sq = t.mul(&t);
        let want = crate::series::TruncatedSeries::from_poly(&x).truncate(sq.cutoff());
        assert_eq!(sq, want);
    }
}
