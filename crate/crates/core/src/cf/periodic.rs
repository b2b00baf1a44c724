use alloc::vec::Vec;
use core::fmt;

use crate::cf::{approximants, ContinuedFraction};
use crate::exponent::{Degree, Exponent, Valuation};
use crate::field::Field;
use crate::poly::PuiseuxPoly;
use crate::series::TruncatedSeries;

/// Default margin added to the verification threshold.
pub const DEFAULT_MARGIN: i64 = 10;

/// Smallest preperiod `s`, then smallest period `l <= max_period`, such
/// that the known quotients from `f_s` on repeat with period `l`, with at
/// least two full periods visible.
pub fn find_period<F: Field>(cf: &ContinuedFraction<F>, max_period: usize) -> Option<(usize, usize)> {
    let f = cf.quotients();
    let n = f.len();
    for s in 0..n {
        for l in 1..=max_period {
            if n - s < 2 * l {
                break;
            }
            if (s..n - l).all(|i| f[i] == f[i + l]) {
                return Some((s, l));
            }
        }
    }
    None
}

/// `a z^2 + b z + c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadratic<F: Field> {
    pub a: PuiseuxPoly<F>,
    pub b: PuiseuxPoly<F>,
    pub c: PuiseuxPoly<F>,
}

impl<F: Field> Quadratic<F> {
    pub fn discriminant(&self) -> PuiseuxPoly<F> {
        let four = PuiseuxPoly::constant(F::from_i64(4));
        &(&self.b * &self.b) - &(&four * &(&self.a * &self.c))
    }

    /// `a z^2 + b z + c` at the precision `z` allows.
    pub fn residual(&self, z: &TruncatedSeries<F>) -> TruncatedSeries<F> {
        let a = TruncatedSeries::from_poly(&self.a);
        let b = TruncatedSeries::from_poly(&self.b);
        let c = TruncatedSeries::from_poly(&self.c);
        a.mul(&z.mul(z)).add(&b.mul(z)).add(&c)
    }

    /// `2 deg(discriminant) + margin`.
    pub fn threshold(&self, margin: &Exponent) -> Exponent {
        match self.discriminant().degree() {
            Degree::Finite(d) => &d.scale(2) + margin,
            Degree::NegInfinity => margin.clone(),
        }
    }
}

impl<F: Field> fmt::Display for Quadratic<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*z^2 + ({})*z + ({})", self.a, self.b, self.c)
    }
}

type Matrix<F> = [[PuiseuxPoly<F>; 2]; 2];

fn mat_mul<F: Field>(x: &Matrix<F>, y: &Matrix<F>) -> Matrix<F> {
    let e = |i: usize, j: usize| &(&x[i][0] * &y[0][j]) + &(&x[i][1] * &y[1][j]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn identity<F: Field>() -> Matrix<F> {
    [
        [PuiseuxPoly::one(), PuiseuxPoly::zero()],
        [PuiseuxPoly::zero(), PuiseuxPoly::one()],
    ]
}

/// The quadratic satisfied by the value of the eventually periodic
/// expression `[f_0; ..., f_{s-1}, (f_s, ..., f_{s+l-1}) repeated]`.
///
/// With `B(f) = (f 1; 1 0)`, `P = B(f_0)...B(f_{s-1})` and
/// `M = B(f_s)...B(f_{s+l-1})`, the value is the attracting fixed point of
/// `N = P M P^-1`; `P^-1` is a product of `(0 1; 1 -f)`.
pub fn periodic_quadratic<F: Field>(quotients: &[PuiseuxPoly<F>], s: usize, l: usize) -> Quadratic<F> {
    assert!(l > 0 && s + l <= quotients.len());
    let block = |f: &PuiseuxPoly<F>| [[f.clone(), PuiseuxPoly::one()], [PuiseuxPoly::one(), PuiseuxPoly::zero()]];
    let inv_block = |f: &PuiseuxPoly<F>| [[PuiseuxPoly::zero(), PuiseuxPoly::one()], [PuiseuxPoly::one(), -f]];
    let pre = quotients[..s].iter().fold(identity(), |m, f| mat_mul(&m, &block(f)));
    let pre_inv = quotients[..s].iter().rev().fold(identity(), |m, f| mat_mul(&m, &inv_block(f)));
    let per = quotients[s..s + l].iter().fold(identity(), |m, f| mat_mul(&m, &block(f)));
    let n = mat_mul(&mat_mul(&pre, &per), &pre_inv);
    let [[alpha, beta], [gamma, delta]] = n;
    Quadratic {
        a: gamma,
        b: &delta - &alpha,
        c: -beta,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PeriodVerdict {
    /// The residual valuation exceeded the threshold at the given precision.
    Verified { residual: Valuation, threshold: Exponent },
    /// The repetition was seen but the residual could not confirm it.
    Heuristic { residual: Valuation, threshold: Exponent },
}

impl PeriodVerdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, PeriodVerdict::Verified { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Periodicity<F: Field> {
    pub preperiod: usize,
    pub period: usize,
    pub quadratic: Quadratic<F>,
    pub verdict: PeriodVerdict,
}

/// Checks the residual of `z` against the quadratic. The residual valuation
/// is a lower bound when `z` is truncated.
pub fn verify_quadratic<F: Field>(
    quadratic: &Quadratic<F>,
    z: &TruncatedSeries<F>,
    threshold: &Exponent,
) -> PeriodVerdict {
    let residual = quadratic.residual(z).valuation_lower_bound();
    let threshold = threshold.clone();
    if residual > threshold {
        PeriodVerdict::Verified { residual, threshold }
    } else {
        PeriodVerdict::Heuristic { residual, threshold }
    }
}

/// Looks for a repeating tail in the known quotients and checks the
/// resulting quadratic against `z`.
///
/// Without `z`, the value of the prefix itself is used: its last convergent
/// is correct above `-T_n`.
pub fn detect_periodicity<F: Field>(
    cf: &ContinuedFraction<F>,
    max_period: usize,
    z: Option<&TruncatedSeries<F>>,
    margin: &Exponent,
) -> Option<Periodicity<F>> {
    let (s, l) = find_period(cf, max_period)?;
    let quadratic = periodic_quadratic(cf.quotients(), s, l);
    let own;
    let z = match z {
        Some(z) => z,
        None => {
            let n = cf.last_index()?;
            let x = approximants(cf, n).ok()?.pop()?.fraction();
            let depth = cf.doubled_degree_sums().pop().unwrap_or_else(Exponent::zero);
            own = TruncatedSeries::from_rational(&x, &Degree::Finite(-depth)).ok()?;
            &own
        }
    };
    let verdict = verify_quadratic(&quadratic, z, &quadratic.threshold(margin));
    Some(Periodicity {
        preperiod: s,
        period: l,
        quadratic,
        verdict,
    })
}

/// Convenience: the quotients `f_0, ..., f_{n-1}` of a preperiod/period
/// description.
pub fn unroll<F: Field>(pre: &[PuiseuxPoly<F>], period: &[PuiseuxPoly<F>], n: usize) -> Vec<PuiseuxPoly<F>> {
    (0..n)
        .map(|i| {
            if i < pre.len() {
                pre[i].clone()
            } else {
                period[(i - pre.len()) % period.len()].clone()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::{cf_value_stream, expand_stream};
    use crate::exponent::q;
    use crate::field::Rational;
    use crate::series::{sqrt_stream, SeriesStream};

    type P = PuiseuxPoly<Rational>;

    fn t() -> P {
        P::t_pow(q(1, 1))
    }

    #[test]
    fn sqrt_is_periodic_and_verified() {
        let x = &t() + &P::one();
        let z = sqrt_stream(&SeriesStream::from_poly(&x));
        let (cf, _) = expand_stream(&z, 10, &q(-30, 1)).unwrap();
        let r = detect_periodicity(&cf, 4, Some(&z.truncate(&q(-30, 1)).unwrap()), &q(DEFAULT_MARGIN, 1))
            .unwrap();
        assert_eq!((r.preperiod, r.period), (1, 1));
        assert_eq!(r.quadratic.a, P::one());
        assert_eq!(r.quadratic.b, P::zero());
        assert_eq!(r.quadratic.c, -&x);
        assert!(r.verdict.is_verified());
    }

    #[test]
    fn two_periodic_tail() {
        let sq = &t() * &t();
        let qs = unroll(&[t()], &[t(), sq.clone()], 12);
        let cf = ContinuedFraction::new(qs.clone(), false).unwrap();
        assert_eq!(find_period(&cf, 4), Some((1, 2)));
        let stream = cf_value_stream(move |i| Some(unroll(&[t()], &[t(), sq.clone()], i + 1).pop().unwrap()), 10_000);
        let z = stream.truncate(&q(-40, 1)).unwrap();
        let r = detect_periodicity(&cf, 4, Some(&z), &q(DEFAULT_MARGIN, 1)).unwrap();
        assert!(r.verdict.is_verified(), "{:?}", r.verdict);
        // an unrelated series is not verified
        let other = sqrt_stream(&SeriesStream::from_poly(&(&t() + &P::one()))).truncate(&q(-40, 1)).unwrap();
        let v = verify_quadratic(&r.quadratic, &other, &r.quadratic.threshold(&q(DEFAULT_MARGIN, 1)));
        assert!(!v.is_verified());
    }

    #[test]
    fn increasing_degrees_have_no_period() {
        let qs: Vec<P> = (0..10).map(|i| P::t_pow(q(i, 1))).collect();
        let cf = ContinuedFraction::new(qs, false).unwrap();
        assert_eq!(find_period(&cf, 5), None);
    }

    #[test]
    fn prefix_value_used_without_series() {
        let h = P::t_pow(q(1, 2));
        let qs = unroll(core::slice::from_ref(&h), &[h.scale(&Rational::new(2, 1))], 30);
        let cf = ContinuedFraction::new(qs, false).unwrap();
        let r = detect_periodicity(&cf, 3, None, &q(DEFAULT_MARGIN, 1)).unwrap();
        assert!(r.verdict.is_verified());
    }
}
