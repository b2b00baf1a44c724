use crate::cf::{approximants, expand_exact, expand_stream, ContinuedFraction, ExpansionStatus};
use crate::error::{Error, Result};
use crate::exponent::{Degree, Exponent, Valuation};
use crate::field::Field;
use crate::poly::PuiseuxPoly;
use crate::rational::RationalPuiseux;
use crate::series::{SeriesStream, TruncatedSeries};

/// Largest number of partial quotients read when scanning an expansion.
const SCAN_LIMIT: usize = 100_000;

fn deg<F: Field>(p: &PuiseuxPoly<F>) -> Exponent {
    p.degree().finite().expect("nonzero").clone()
}

/// `deg f_{n+1} + 2 deg q_n`, with the approximant `x_n`.
fn closed_form<F: Field>(
    cf: &ContinuedFraction<F>,
    n: usize,
) -> Result<(Exponent, RationalPuiseux<F>)> {
    let Some(next) = cf.quotients().get(n + 1) else {
        return Err(Error::domain(alloc::format!(
            "the expansion has no partial quotient f{}",
            n + 1
        )));
    };
    let pair = approximants(cf, n)?.pop().expect("nonempty");
    Ok((&deg(next) + &deg(&pair.q).scale(2), pair.fraction()))
}

fn agree(direct: Exponent, closed: Exponent) -> Result<Exponent> {
    if direct != closed {
        return Err(Error::Mismatch(alloc::format!(
            "direct valuation {} differs from deg f(n+1) + 2 deg q(n) = {}",
            direct,
            closed
        )));
    }
    Ok(direct)
}

/// `nu(z - p_n/q_n)` for exact `z`, computed from the fraction and checked
/// against `deg f_{n+1} + 2 deg q_n`.
pub fn error_valuation_exact<F: Field>(z: &RationalPuiseux<F>, n: usize) -> Result<Exponent> {
    let cf = expand_exact(z);
    let (closed, x) = closed_form(&cf, n)?;
    // nu(a/b - c/d) = nu(ad - bc) - nu(b) - nu(d), without reducing
    let cross = &(z.num() * x.den()) - &(x.num() * z.den());
    let direct = match cross.valuation() {
        Valuation::Finite(v) => &(&v + &deg(z.den())) + &deg(x.den()),
        Valuation::Infinity => unreachable!("z has a longer expansion than x_n"),
    };
    agree(direct, closed)
}

/// `nu(z - p_n/q_n)` for a stream read down to `cutoff`: series subtraction,
/// checked against `deg f_{n+1} + 2 deg q_n`.
pub fn error_valuation<F: Field>(
    z: &SeriesStream<F>,
    n: usize,
    cutoff: &Exponent,
) -> Result<Exponent> {
    let (cf, status) = expand_stream(z, n + 1, cutoff)?;
    if cf.quotients().len() < n + 2 {
        return Err(match status {
            ExpansionStatus::Ended => Error::domain(alloc::format!(
                "the expansion ends at f{}",
                cf.quotients().len() - 1
            )),
            ExpansionStatus::BudgetExhausted => Error::BudgetExhausted { budget: n + 1 },
            _ => Error::PrecisionExhausted {
                needed: Degree::Finite(cutoff.clone()),
            },
        });
    }
    let (closed, x) = closed_form(&cf, n)?;
    let c = Degree::Finite(cutoff.clone());
    let diff = z.truncate(cutoff)?.sub(&TruncatedSeries::from_rational(&x, &c)?);
    let direct = match diff.valuation()? {
        Valuation::Finite(v) => v,
        Valuation::Infinity => unreachable!("z has a longer expansion than x_n"),
    };
    agree(direct, closed)
}

/// The largest `m` for which the expansions of `z` and `z2` provably share
/// `f_0, ..., f_m`, from `nu(z - z2) > 2 (deg f_1 + ... + deg f_m)`.
///
/// Both streams are read down to `cutoff`; if their difference has no known
/// term, its valuation is only bounded below by `-cutoff`, which still
/// certifies agreement. `-1` means no agreement is guaranteed. The bound
/// is limited to the partial quotients of `z` that the cutoff certifies.
pub fn prefix_agreement_bound<F: Field>(
    z: &SeriesStream<F>,
    z2: &SeriesStream<F>,
    cutoff: &Exponent,
) -> Result<i64> {
    let a = z.truncate(cutoff)?;
    let diff = a.sub(&z2.truncate(cutoff)?);
    let v = diff.valuation_lower_bound();
    if !(v > Exponent::zero()) {
        return Ok(-1);
    }
    let (cf, _) = expand_stream(z, SCAN_LIMIT, cutoff)?;
    let sums = cf.doubled_degree_sums();
    let m = sums
        .iter()
        .take(cf.quotients().len())
        .take_while(|t| v > **t)
        .count();
    Ok(m as i64 - 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BestApproximation {
    /// `p/q = x_n(z)`.
    IsApproximant(usize),
    /// `nu(z - p/q) <= 2 deg q`.
    NotBetter,
}

/// If `nu(z - p/q) > 2 deg q`, finds the `n` with `p/q = x_n(z)`.
pub fn best_approximation_check<F: Field>(
    z: &SeriesStream<F>,
    p: &PuiseuxPoly<F>,
    q: &PuiseuxPoly<F>,
    cutoff: &Exponent,
) -> Result<BestApproximation> {
    let x = RationalPuiseux::new(p, q)?;
    let bound = deg(q).scale(2);
    let c = Degree::Finite(cutoff.clone());
    let diff = z.truncate(cutoff)?.sub(&TruncatedSeries::from_rational(&x, &c)?);
    match diff.leading_term() {
        Some((e, _)) if -e <= bound => return Ok(BestApproximation::NotBetter),
        Some(_) => {}
        None if diff.is_exact() => {}
        None => {
            if !(diff.valuation_lower_bound() > bound) {
                return Err(Error::PrecisionExhausted {
                    needed: Degree::Finite(-&bound),
                });
            }
        }
    }
    let (cf, status) = expand_stream(z, SCAN_LIMIT, cutoff)?;
    let den_deg = deg(x.den());
    for pair in approximants(&cf, cf.quotients().len() - 1)? {
        if deg(&pair.q) > den_deg {
            break;
        }
        if pair.fraction() == x {
            return Ok(BestApproximation::IsApproximant(pair.index));
        }
    }
    let scanned_past = cf
        .doubled_degree_sums()
        .last()
        .is_some_and(|t| *t > den_deg.scale(2));
    if scanned_past || status == ExpansionStatus::Ended {
        return Err(Error::Mismatch(alloc::format!(
            "{} satisfies the approximation bound but is not an approximant",
            x
        )));
    }
    Err(Error::PrecisionExhausted {
        needed: Degree::Finite(cutoff.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::evaluate_exact;
    use crate::exponent::q;
    use crate::field::{Fp, Rational};
    use crate::series::sqrt_stream;
    use alloc::vec;

    type P = PuiseuxPoly<Rational>;

    fn t() -> P {
        P::t_pow(q(1, 1))
    }

    fn sqrt_t1() -> SeriesStream<Rational> {
        sqrt_stream(&SeriesStream::from_poly(&(&t() + &P::one())))
    }

    #[test]
    fn error_examples() {
        assert_eq!(error_valuation(&sqrt_t1(), 2, &q(-20, 1)).unwrap(), q(5, 2));
        let z = RationalPuiseux::new(&(&(&t() * &t()) + &P::one()), &t()).unwrap();
        assert_eq!(error_valuation_exact(&z, 0).unwrap(), q(1, 1));
        assert!(error_valuation_exact(&z, 1).is_err());
        let cf = ContinuedFraction::finite(vec![
            P::constant(Rational::new(2, 1)),
            &t() + &P::one(),
            t().scale(&Rational::new(3, 1)),
            &t() - &P::constant(Rational::new(5, 1)),
            t(),
        ])
        .unwrap();
        let z = evaluate_exact(&cf).unwrap();
        assert_eq!(error_valuation_exact(&z, 3).unwrap(), q(7, 1));
        let s = SeriesStream::from_rational(&z);
        assert_eq!(error_valuation(&s, 3, &q(-30, 1)).unwrap(), q(7, 1));
    }

    #[test]
    fn error_needs_precision() {
        assert!(matches!(
            error_valuation(&sqrt_t1(), 8, &q(-4, 1)),
            Err(Error::PrecisionExhausted { .. })
        ));
    }

    #[test]
    fn agreement_examples() {
        let z = sqrt_t1();
        let z2 = z.add_terms(vec![(q(-10, 1), Rational::new(1, 1))]);
        assert_eq!(prefix_agreement_bound(&z, &z2, &q(-30, 1)).unwrap(), 9);
        let z3 = z.add_terms(vec![(q(0, 1), Rational::new(1, 1))]);
        assert_eq!(prefix_agreement_bound(&z, &z3, &q(-30, 1)).unwrap(), -1);
        // identical: everything the cutoff certifies
        let (cf, _) = expand_stream(&z, 1000, &q(-12, 1)).unwrap();
        assert_eq!(
            prefix_agreement_bound(&z, &z.clone(), &q(-12, 1)).unwrap(),
            cf.quotients().len() as i64 - 1
        );
    }

    #[test]
    fn best_approximation_examples() {
        let z = sqrt_t1();
        let (cf, _) = expand_stream(&z, 4, &q(-20, 1)).unwrap();
        let x2 = approximants(&cf, 2).unwrap().pop().unwrap();
        assert_eq!(
            best_approximation_check(&z, &x2.p, &x2.q, &q(-20, 1)).unwrap(),
            BestApproximation::IsApproximant(2)
        );
        let p = &P::t_pow(q(1, 2)) + &P::one();
        assert_eq!(
            best_approximation_check(&z, &p, &P::one(), &q(-20, 1)).unwrap(),
            BestApproximation::NotBetter
        );
        // a scaled representation of the same fraction is still x_2
        let k = Rational::new(3, 1);
        assert_eq!(
            best_approximation_check(&z, &x2.p.scale(&k), &x2.q.scale(&k), &q(-20, 1)).unwrap(),
            BestApproximation::IsApproximant(2)
        );
    }

    #[test]
    fn best_approximation_over_f5() {
        type G = PuiseuxPoly<Fp<5>>;
        let x = &G::t_pow(q(1, 1)) + &G::constant(Fp::new(2));
        let z = sqrt_stream(&SeriesStream::from_poly(&x));
        let (cf, _) = expand_stream(&z, 5, &q(-20, 1)).unwrap();
        for pair in approximants(&cf, 4).unwrap() {
            assert_eq!(
                best_approximation_check(&z, &pair.p, &pair.q, &q(-20, 1)).unwrap(),
                BestApproximation::IsApproximant(pair.index)
            );
        }
    }
}
