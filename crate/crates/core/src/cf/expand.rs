use alloc::vec::Vec;

use crate::cf::{ContinuedFraction, ExpansionStatus};
use crate::error::{Error, Result};
use crate::exponent::{Degree, Exponent};
use crate::field::Field;
use crate::poly::PuiseuxPoly;
use crate::rational::RationalPuiseux;
use crate::series::{SeriesStream, TruncatedSeries};

/// Expansion of an exact element by the Euclidean algorithm. Always ends.
pub fn expand_exact<F: Field>(z: &RationalPuiseux<F>) -> ContinuedFraction<F> {
    let mut num = z.num().clone();
    let mut den = z.den().clone();
    let mut quotients = Vec::new();
    loop {
        let (f, r) = num.div_rem(&den).expect("nonzero denominator");
        quotients.push(f);
        if r.is_zero() {
            break;
        }
        num = core::mem::replace(&mut den, r);
    }
    ContinuedFraction::from_parts(quotients, true)
}

#[derive(Clone, Debug)]
enum Cursor<F: Field> {
    Exact(RationalPuiseux<F>),
    Series(TruncatedSeries<F>),
    Done,
}

/// The running state of the expansion `z_0 = z`, `f_n` = principal part of
/// `z_n`, `z_{n+1} = 1/(z_n - f_n)`.
///
/// On truncated input each step loses `2 deg f_{n+1}` of precision; when the
/// remainder `z_n - f_n` has no known term the state stops with
/// [`ExpansionStatus::PrecisionExhausted`] rather than guessing that it is 0.
#[derive(Clone, Debug)]
pub struct Expansion<F: Field> {
    quotients: Vec<PuiseuxPoly<F>>,
    cursor: Cursor<F>,
    status: ExpansionStatus,
}

impl<F: Field> Expansion<F> {
    pub fn of_rational(z: &RationalPuiseux<F>) -> Self {
        Expansion {
            quotients: Vec::new(),
            cursor: Cursor::Exact(z.clone()),
            status: ExpansionStatus::Running,
        }
    }

    /// Exact truncations are expanded exactly.
    pub fn of_series(z: &TruncatedSeries<F>) -> Self {
        match z.to_rational() {
            Some(x) => Self::of_rational(&x),
            None => Expansion {
                quotients: Vec::new(),
                cursor: Cursor::Series(z.clone()),
                status: ExpansionStatus::Running,
            },
        }
    }

    pub fn quotients(&self) -> &[PuiseuxPoly<F>] {
        &self.quotients
    }

    pub fn status(&self) -> ExpansionStatus {
        self.status
    }

    /// The current `z_n` as a truncated series, if it is still known.
    pub fn current(&self, cutoff: &Degree) -> Result<Option<TruncatedSeries<F>>> {
        Ok(match &self.cursor {
            Cursor::Exact(x) => Some(TruncatedSeries::from_rational(x, cutoff)?),
            Cursor::Series(s) => Some(s.clone()),
            Cursor::Done => None,
        })
    }

    /// Computes the next partial quotient. Returns `false` once the
    /// expansion has stopped (see [`status`](Self::status)).
    pub fn step(&mut self) -> bool {
        if self.status != ExpansionStatus::Running {
            return false;
        }
        match core::mem::replace(&mut self.cursor, Cursor::Done) {
            Cursor::Done => {
                self.status = ExpansionStatus::Ended;
                false
            }
            Cursor::Exact(x) => {
                let (f, rest) = x.split_principal();
                self.quotients.push(f);
                if rest.is_zero() {
                    self.status = ExpansionStatus::Ended;
                } else {
                    self.cursor = Cursor::Exact(rest.invert().expect("nonzero"));
                }
                true
            }
            Cursor::Series(z) => {
                let f = match z.principal_part() {
                    Ok(f) => f,
                    Err(_) => {
                        self.status = ExpansionStatus::PrecisionExhausted;
                        return false;
                    }
                };
                let rest = z.sub_poly(&f);
                self.quotients.push(f);
                if rest.is_zero() {
                    self.status = ExpansionStatus::Ended;
                } else if rest.leading_term().is_none() {
                    // z_n - f_n might be 0 or might not: undecidable here
                    self.status = ExpansionStatus::PrecisionExhausted;
                } else {
                    let next = rest
                        .invert(&Degree::NegInfinity)
                        .expect("nonzero leading term, inexact input");
                    self.cursor = Cursor::Series(next);
                }
                true
            }
        }
    }

    /// Runs until `f_{max_terms}` is known or the expansion stops.
    pub fn run(&mut self, max_terms: usize) -> ExpansionStatus {
        while self.quotients.len() <= max_terms && self.step() {}
        if self.status == ExpansionStatus::Running {
            self.status = ExpansionStatus::BudgetExhausted;
        }
        self.status
    }

    /// The prefix computed so far. Finite exactly when the expansion ended.
    pub fn expression(&self) -> ContinuedFraction<F> {
        ContinuedFraction::from_parts(
            self.quotients.clone(),
            self.status == ExpansionStatus::Ended,
        )
    }

    /// Lets a stopped-at-budget expansion continue.
    pub fn resume(&mut self) {
        if self.status == ExpansionStatus::BudgetExhausted {
            self.status = ExpansionStatus::Running;
        }
    }
}

/// Expansion of a truncated series, producing at most `f_0, ..., f_max_terms`.
pub fn expand_series<F: Field>(
    z: &TruncatedSeries<F>,
    max_terms: usize,
) -> (ContinuedFraction<F>, ExpansionStatus) {
    let mut e = Expansion::of_series(z);
    let status = e.run(max_terms);
    (e.expression(), status)
}

/// Expansion of a stream read down to `cutoff`: the partial quotients
/// `f_0, ..., f_k` with `k <= max_terms` that the truncation certifies.
///
/// Every returned quotient is a quotient of the true expansion of the full
/// stream. Errors from the stream itself (non-decreasing exponents, failing
/// sources) are returned as errors; running out of the stream's pull budget
/// is reported as [`ExpansionStatus::BudgetExhausted`].
pub fn expand_stream<F: Field>(
    z: &SeriesStream<F>,
    max_terms: usize,
    cutoff: &Exponent,
) -> Result<(ContinuedFraction<F>, ExpansionStatus)> {
    match z.truncate(cutoff) {
        Ok(t) => Ok(expand_series(&t, max_terms)),
        Err(Error::BudgetExhausted { .. }) => Ok((
            ContinuedFraction::from_parts(Vec::new(), false),
            ExpansionStatus::BudgetExhausted,
        )),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::q;
    use crate::field::{Fp, Rational};
    use crate::series::sqrt_stream;
    use alloc::format;

    type P = PuiseuxPoly<Rational>;

    fn t() -> P {
        P::t_pow(q(1, 1))
    }

    fn half() -> P {
        P::t_pow(q(1, 2))
    }

    #[test]
    fn euclid_examples() {
        let z = RationalPuiseux::new(&(&(&t() * &t()) + &P::one()), &t()).unwrap();
        assert_eq!(format!("{}", expand_exact(&z)), "[t; t]");
        let z = RationalPuiseux::from_poly(half());
        assert_eq!(format!("{}", expand_exact(&z)), "[t^(1/2)]");
        let z = RationalPuiseux::new(&(&t() + &P::one()), &half()).unwrap();
        assert_eq!(format!("{}", expand_exact(&z)), "[t^(1/2); t^(1/2)]");
    }

    #[test]
    fn zero_has_single_quotient() {
        let cf = expand_exact(&RationalPuiseux::<Rational>::zero());
        assert_eq!(cf.quotients(), &[P::zero()]);
    }

    #[test]
    fn sqrt_example() {
        let x = SeriesStream::from_poly(&(&t() + &P::one()));
        let (cf, status) = expand_stream(&sqrt_stream(&x), 5, &q(-20, 1)).unwrap();
        assert_eq!(status, ExpansionStatus::BudgetExhausted);
        assert_eq!(cf.f0(), Some(&half()));
        assert_eq!(cf.partials().len(), 5);
        assert!(cf.partials().iter().all(|f| *f == half().scale(&Rational::new(2, 1))));
    }

    #[test]
    fn exact_stream_matches_euclid() {
        let z = RationalPuiseux::new(&(&(&t() * &t()) + &P::one()), &t()).unwrap();
        let (cf, status) = expand_stream(&SeriesStream::from_rational(&z), 10, &q(-20, 1)).unwrap();
        assert_eq!(status, ExpansionStatus::Ended);
        assert_eq!(cf, expand_exact(&z));
    }

    #[test]
    fn geometric_tail_runs_out_of_precision() {
        // 1/(t - 1) = t^-1 + t^-2 + ... = [0; t - 1]
        let z = RationalPuiseux::new(&P::one(), &(&t() - &P::one())).unwrap();
        let s = SeriesStream::from_rational(&z);
        let (cf, status) = expand_stream(&s, 3, &q(-2, 1)).unwrap();
        assert_eq!(status, ExpansionStatus::PrecisionExhausted);
        assert_eq!(cf.quotients(), &[P::zero()]);
        let (cf, status) = expand_stream(&s, 3, &q(-5, 1)).unwrap();
        assert_eq!(status, ExpansionStatus::PrecisionExhausted);
        assert_eq!(cf.quotients(), &[P::zero(), &t() - &P::one()]);
    }

    #[test]
    fn non_decreasing_stream_is_an_error() {
        let mut k = 0;
        let s = SeriesStream::<Rational>::from_source(move || {
            k += 1;
            Ok(Some((q(if k == 2 { 3 } else { -k }, 1), Rational::new(1, 1))))
        });
        assert!(matches!(
            expand_stream(&s, 3, &q(-5, 1)),
            Err(Error::NonDecreasing { .. })
        ));
    }

    #[test]
    fn prefix_stability_over_cutoffs() {
        type G = PuiseuxPoly<Fp<5>>;
        let x = &G::t_pow(q(1, 1)) + &G::constant(Fp::new(3));
        let s = sqrt_stream(&SeriesStream::from_poly(&x));
        let mut prev: Option<ContinuedFraction<Fp<5>>> = None;
        for c in [-3, -6, -11, -17] {
            let (cf, _) = expand_stream(&s, 50, &q(c, 1)).unwrap();
            if let Some(p) = &prev {
                assert!(cf.starts_with(p));
            }
            prev = Some(cf);
        }
        assert!(prev.unwrap().partials().len() >= 10);
    }

    #[test]
    fn resumable_state() {
        let x = SeriesStream::from_poly(&(&t() + &P::one()));
        let z = sqrt_stream(&x).truncate(&q(-30, 1)).unwrap();
        let mut e = Expansion::of_series(&z);
        assert_eq!(e.run(2), ExpansionStatus::BudgetExhausted);
        e.resume();
        e.run(6);
        let (whole, _) = expand_series(&z, 6);
        assert_eq!(e.expression(), whole);
    }
}
