use alloc::rc::Rc;
use alloc::vec::Vec;
use core::fmt;

use crate::berkovich::{prefix_representation, Ball, BallKind, Promenade, PromenadeTail};
use crate::cf::{Convergents, ContinuedFraction};
use crate::error::{Error, Result};
use crate::exponent::{Degree, Exponent};
use crate::field::Field;
use crate::poly::PuiseuxPoly;
use crate::series::{SeriesStream, TruncatedSeries};
use crate::typeiv::Schedule;

/// Why the intersection of the balls is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Balls of the prefixes of an expansion whose degree sum stays below
    /// `bound`; `schedule` is the degree schedule when the quotients are
    /// the monomials `t^{D_i}`.
    CfConvergent {
        schedule: Option<Schedule>,
        bound: Exponent,
    },
    /// `B_n` closed around `r(1) + ... + r(n)` exponents, radius `-r(n+1)`.
    E69 { schedule: Schedule },
    /// Caller-supplied balls; only the nesting is checked.
    Raw,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TypeIvKind {
    IVa,
    IVb,
    Inconclusive,
}

impl TypeIvKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TypeIvKind::IVa => "IVa",
            TypeIvKind::IVb => "IVb",
            TypeIvKind::Inconclusive => "inconclusive",
        }
    }
}

type QuotientFn<F> = Rc<dyn Fn(usize) -> Option<PuiseuxPoly<F>>>;

#[derive(Clone)]
enum State<F: Field> {
    Cf {
        quotient: QuotientFn<F>,
        conv: Convergents<F>,
        degrees: Vec<Exponent>,
        sum: Exponent,
    },
    E69 {
        center: PuiseuxPoly<F>,
    },
    Raw,
}

/// `B_1 ⊇ B_2 ⊇ ...` of closed balls, produced on demand. Every new ball is
/// checked to lie in its predecessor.
#[derive(Clone)]
pub struct NestedBallSeq<F: Field> {
    certificate: Certificate,
    balls: Vec<Ball<F>>,
    state: State<F>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exclusion {
    ExcludedAt(usize),
    Inconclusive { depth: usize },
}

/// The stabilized prefix and the balls `D_n` with `B_n = B_{w - D_n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IvbWitness<F: Field> {
    /// `None` is the empty expression (every ball has radius `<= 0`).
    pub prefix: Option<ContinuedFraction<F>>,
    pub images: Vec<Ball<F>>,
}

impl<F: Field> NestedBallSeq<F> {
    /// Balls of the prefixes `[f_0; f_1, ..., f_n]`, `n >= 1`, where
    /// `quotient(i)` gives `f_i` and `bound` is an analytic bound on
    /// `deg f_1 + deg f_2 + ...`. The first `n` balls are built eagerly.
    pub fn from_convergent_cf(
        quotient: impl Fn(usize) -> Option<PuiseuxPoly<F>> + 'static,
        bound: Exponent,
        n: usize,
    ) -> Result<Self> {
        Self::cf_with(Rc::new(quotient), None, bound, n)
    }

    /// `f_0 = 0` and `f_i = t^{D_i}` with `D_i` from the schedule.
    pub fn iva(schedule: Schedule, bound: Exponent, n: usize) -> Result<Self> {
        schedule.check_positive()?;
        match schedule.sum_limit() {
            None => {
                return Err(Error::domain(alloc::format!(
                    "bad certificate: the degree sum of {} diverges",
                    schedule
                )))
            }
            Some(s) if s > bound => {
                return Err(Error::domain(alloc::format!(
                    "bad certificate: degree sum {} exceeds bound {}",
                    s,
                    bound
                )))
            }
            _ => {}
        }
        let s = schedule.clone();
        let quotient = move |i: usize| match i {
            0 => Some(PuiseuxPoly::zero()),
            _ => s.term(i).map(PuiseuxPoly::t_pow),
        };
        Self::cf_with(Rc::new(quotient), Some(schedule), bound, n)
    }

    fn cf_with(quotient: QuotientFn<F>, schedule: Option<Schedule>, bound: Exponent, n: usize) -> Result<Self> {
        let f0 = quotient(0).ok_or_else(|| Error::domain("missing f0"))?;
        let mut conv = Convergents::new();
        conv.push(&f0);
        let mut seq = NestedBallSeq {
            certificate: Certificate::CfConvergent { schedule, bound },
            balls: Vec::new(),
            state: State::Cf {
                quotient,
                conv,
                degrees: Vec::new(),
                sum: Exponent::zero(),
            },
        };
        seq.extend_to(n)?;
        Ok(seq)
    }

    /// Centers `b_n = t^{r(1)} + ... + t^{r(n)}`, closed radius `-r(n+1)`.
    pub fn e69_sequence(schedule: Schedule, n: usize) -> Result<Self> {
        schedule.check_strictly_decreasing()?;
        let mut seq = NestedBallSeq {
            certificate: Certificate::E69 { schedule },
            balls: Vec::new(),
            state: State::E69 {
                center: PuiseuxPoly::zero(),
            },
        };
        seq.extend_to(n)?;
        Ok(seq)
    }

    pub fn raw(balls: Vec<Ball<F>>) -> Result<Self> {
        let mut seq = NestedBallSeq {
            certificate: Certificate::Raw,
            balls: Vec::new(),
            state: State::Raw,
        };
        for b in balls {
            if b.kind() != BallKind::Closed {
                return Err(Error::domain("nested sequences hold closed balls"));
            }
            seq.push(b)?;
        }
        Ok(seq)
    }

    fn push(&mut self, b: Ball<F>) -> Result<()> {
        if let Some(prev) = self.balls.last() {
            if !prev.contains_ball(&b) {
                return Err(Error::Mismatch(alloc::format!(
                    "ball {} does not lie in {}",
                    b,
                    prev
                )));
            }
        }
        self.balls.push(b);
        Ok(())
    }

    fn next_ball(&mut self) -> Result<Option<Ball<F>>> {
        let n = self.balls.len() + 1;
        match &mut self.state {
            State::Cf {
                quotient,
                conv,
                degrees,
                sum,
            } => {
                let Some(f) = quotient(n) else { return Ok(None) };
                let d = match f.degree() {
                    Degree::Finite(d) if d.is_positive() => d,
                    _ => {
                        return Err(Error::domain(alloc::format!(
                            "deg f{} = {} is not positive",
                            n,
                            f.degree()
                        )))
                    }
                };
                *sum = &*sum + &d;
                if let Certificate::CfConvergent { bound, .. } = &self.certificate {
                    if *sum > *bound {
                        return Err(Error::domain(alloc::format!(
                            "bad certificate: partial degree sum {} exceeds bound {}",
                            sum,
                            bound
                        )));
                    }
                }
                degrees.push(d);
                let x = conv.push(&f).fraction();
                Ball::from_rational(&x, sum.scale(2), BallKind::Closed).map(Some)
            }
            State::E69 { center } => {
                let Certificate::E69 { schedule } = &self.certificate else { unreachable!() };
                let (Some(e), Some(next)) = (schedule.term(n), schedule.term(n + 1)) else {
                    return Ok(None);
                };
                *center = &*center + &PuiseuxPoly::t_pow(e);
                Ball::new(&TruncatedSeries::from_poly(center), -next, BallKind::Closed).map(Some)
            }
            State::Raw => Ok(None),
        }
    }

    /// Produces balls until there are `n` of them. Finite schedules may stop
    /// short, which is reported as budget exhaustion.
    pub fn extend_to(&mut self, n: usize) -> Result<()> {
        while self.balls.len() < n {
            match self.next_ball()? {
                Some(b) => self.push(b)?,
                None => return Err(Error::BudgetExhausted { budget: self.balls.len() }),
            }
        }
        Ok(())
    }

    pub fn balls(&self) -> &[Ball<F>] {
        &self.balls
    }

    /// `B_n`, `n >= 1`.
    pub fn ball(&self, n: usize) -> Option<&Ball<F>> {
        n.checked_sub(1).and_then(|k| self.balls.get(k))
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    pub fn kind(&self) -> TypeIvKind {
        match self.certificate {
            Certificate::CfConvergent { .. } => TypeIvKind::IVa,
            Certificate::E69 { .. } => TypeIvKind::IVb,
            Certificate::Raw => TypeIvKind::Inconclusive,
        }
    }

    /// Where the radius parameters are heading: `2 (D_1 + D_2 + ...)` for
    /// prefix balls when the schedule sums in closed form, `0` for the e69
    /// family.
    pub fn radius_limit(&self) -> Option<Exponent> {
        match &self.certificate {
            Certificate::CfConvergent { schedule, .. } => {
                schedule.as_ref().and_then(Schedule::sum_limit).map(|s| s.scale(2))
            }
            Certificate::E69 { .. } => Some(Exponent::zero()),
            Certificate::Raw => None,
        }
    }

    /// An upper bound for the radii: `2 * bound` for a convergent-cf
    /// certificate, else the limit itself.
    pub fn radius_bound(&self) -> Option<Exponent> {
        match &self.certificate {
            Certificate::CfConvergent { bound, .. } => Some(bound.scale(2)),
            _ => self.radius_limit(),
        }
    }

    /// `deg f_1, deg f_2, ...` of the produced prefix balls.
    pub fn degrees(&self) -> &[Exponent] {
        match &self.state {
            State::Cf { degrees, .. } => degrees,
            _ => &[],
        }
    }

    /// First `n <= depth` with `z` outside `B_n`.
    pub fn exclude_point(&mut self, z: &SeriesStream<F>, depth: usize) -> Result<Exclusion> {
        for n in 1..=depth {
            if self.balls.len() < n {
                match self.extend_to(n) {
                    Err(Error::BudgetExhausted { .. }) => break,
                    r => r?,
                }
            }
            if !self.balls[n - 1].contains_stream(z)? {
                return Ok(Exclusion::ExcludedAt(n));
            }
        }
        Ok(Exclusion::Inconclusive {
            depth: depth.min(self.balls.len()),
        })
    }

    /// The longest prefix `w` shared by the representations `B_n = B_{w -
    /// D_n}` of the first `budget` balls. The prefix must be constant over
    /// the last half of them; growing prefixes give budget exhaustion.
    pub fn ivb_witness(&mut self, budget: usize) -> Result<IvbWitness<F>> {
        match self.extend_to(budget) {
            Err(Error::BudgetExhausted { .. }) => {}
            r => r?,
        }
        let reps = self.balls[..budget.min(self.balls.len())]
            .iter()
            .map(prefix_representation)
            .collect::<Result<Vec<_>>>()?;
        let Some(last) = reps.last() else {
            return Err(Error::BudgetExhausted { budget });
        };
        let half = reps.len() / 2;
        if reps[half..].iter().any(|r| r.prefix != last.prefix) {
            return Err(Error::BudgetExhausted { budget });
        }
        let prefix = last.prefix.clone();
        Ok(IvbWitness {
            prefix,
            images: reps.into_iter().map(|r| r.image).collect(),
        })
    }

    /// The promenade towards the limit point, from the produced balls.
    pub fn promenade(&self) -> Promenade {
        match &self.certificate {
            Certificate::CfConvergent { schedule, .. } => {
                let limit = schedule.as_ref().and_then(Schedule::sum_limit).map(|s| s.scale(2));
                Promenade::from_degrees(self.degrees(), PromenadeTail::Accumulates { limit }, None)
            }
            Certificate::E69 { .. } => Promenade::pure_descent(
                Exponent::zero(),
                PromenadeTail::Accumulates {
                    limit: Some(Exponent::zero()),
                },
            ),
            Certificate::Raw => {
                let end = self.balls.last().map_or(Exponent::zero(), |b| b.radius().clone());
                Promenade::pure_descent(end, PromenadeTail::TruncatedAtBudget)
            }
        }
    }
}

impl<F: Field> fmt::Debug for NestedBallSeq<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NestedBallSeq")
            .field("certificate", &self.certificate)
            .field("balls", &self.balls)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::{evaluate_exact, expand_exact};
    use crate::exponent::q;
    use crate::field::{Fp, Rational};
    use crate::rational::RationalPuiseux;
    use alloc::format;
    use alloc::vec;

    type P = PuiseuxPoly<Rational>;

    #[test]
    fn iva_radii_approach_twice_the_sum() {
        let seq = NestedBallSeq::<Rational>::iva(Schedule::Geometric(q(1, 2)), q(1, 1), 8).unwrap();
        for (k, b) in seq.balls().iter().enumerate() {
            let n = k as i64 + 1;
            // 2 (1 - 2^-n)
            assert_eq!(*b.radius(), &q(2, 1) - &q(2, 1 << n));
        }
        assert_eq!(seq.kind(), TypeIvKind::IVa);
        let seq = NestedBallSeq::<Rational>::iva(Schedule::Geometric(q(1, 3)), q(1, 2), 6).unwrap();
        let gap = &q(1, 1) - seq.ball(6).unwrap().radius();
        assert_eq!(gap, q(1, 729));
        assert_eq!(seq.radius_limit(), Some(q(1, 1)));
        let seq = NestedBallSeq::<Rational>::iva(Schedule::Geometric(q(1, 2)), q(2, 1), 2).unwrap();
        assert_eq!((seq.radius_limit(), seq.radius_bound()), (Some(q(2, 1)), Some(q(4, 1))));
    }

    #[test]
    fn iva_rejects_divergent_input() {
        let e = NestedBallSeq::<Rational>::iva(Schedule::Constant(q(1, 2)), q(1, 1), 3).unwrap_err();
        assert!(format!("{}", e).contains("bad certificate"));
        assert!(NestedBallSeq::<Rational>::iva(Schedule::Geometric(q(1, 2)), q(1, 2), 3).is_err());
        // a bound that only fails at the third partial sum
        let f = |i: usize| Some(if i == 0 { P::zero() } else { P::t_pow(q(1, 2)) });
        let e = NestedBallSeq::<Rational>::from_convergent_cf(f, q(1, 1), 3).unwrap_err();
        assert!(format!("{}", e).contains("partial degree sum 3/2"));
    }

    #[test]
    fn prefix_balls_match_expansions() {
        let mut seq = NestedBallSeq::<Rational>::iva(Schedule::Geometric(q(1, 2)), q(1, 1), 5).unwrap();
        for n in 1..=5 {
            let cf = ContinuedFraction::finite(
                core::iter::once(P::zero())
                    .chain((1..=n).map(|i| P::t_pow(q(1, 1 << i))))
                    .collect(),
            )
            .unwrap();
            let x = evaluate_exact(&cf).unwrap();
            assert!(seq.ball(n).unwrap().contains(&TruncatedSeries::from_rational(&x, &Degree::Finite(q(-5, 1))).unwrap()).unwrap());
            // the value of the next-shorter prefix leaves at B_n
            if n > 1 {
                let y = evaluate_exact(&cf.truncated(n - 1).unwrap()).unwrap();
                let z = SeriesStream::from_rational(&y);
                assert_eq!(seq.exclude_point(&z, 10).unwrap(), Exclusion::ExcludedAt(n));
            }
        }
    }

    #[test]
    fn e69_default_schedule() {
        let seq = NestedBallSeq::<Rational>::e69_sequence(Schedule::Harmonic, 4).unwrap();
        let shown: Vec<_> = seq.balls().iter().map(|b| format!("{}", b)).collect();
        assert_eq!(
            shown,
            [
                "ballc(t, -1/2)",
                "ballc(t + t^(1/2), -1/3)",
                "ballc(t + t^(1/2) + t^(1/3), -1/4)",
                "ballc(t + t^(1/2) + t^(1/3) + t^(1/4), -1/5)",
            ]
        );
        assert_eq!(seq.kind(), TypeIvKind::IVb);
        let single = NestedBallSeq::<Rational>::e69_sequence(Schedule::Geometric(q(1, 2)), 1).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(
            NestedBallSeq::<Rational>::e69_sequence(Schedule::List(vec![q(1, 2), q(1, 2)]), 1).unwrap_err(),
            Error::NonDecreasing { index: 2 }
        );
    }

    #[test]
    fn e69_exclusions() {
        let mut seq = NestedBallSeq::<Rational>::e69_sequence(Schedule::Harmonic, 2).unwrap();
        let t = P::t_pow(q(1, 1));
        let z = SeriesStream::from_poly(&(&t + &P::t_pow(q(1, 2))));
        assert_eq!(seq.exclude_point(&z, 10).unwrap(), Exclusion::ExcludedAt(3));
        let z = SeriesStream::from_poly(&P::one());
        assert_eq!(seq.exclude_point(&z, 10).unwrap(), Exclusion::ExcludedAt(1));
        // the center b_4 survives until its missing t^(1/5) matters
        let b4 = (1..=4).fold(P::zero(), |s, i| &s + &P::t_pow(q(1, i)));
        assert_eq!(
            seq.exclude_point(&SeriesStream::from_poly(&b4), 10).unwrap(),
            Exclusion::ExcludedAt(5)
        );
    }

    #[test]
    fn finite_list_runs_out() {
        let mut seq =
            NestedBallSeq::<Rational>::e69_sequence(Schedule::List(vec![q(1, 1), q(1, 2), q(1, 3)]), 2).unwrap();
        let z = SeriesStream::from_poly(&(&P::t_pow(q(1, 1)) + &P::t_pow(q(1, 2))));
        assert_eq!(seq.exclude_point(&z, 10).unwrap(), Exclusion::Inconclusive { depth: 2 });
    }

    #[test]
    fn witnesses() {
        let mut seq = NestedBallSeq::<Rational>::e69_sequence(Schedule::Harmonic, 12).unwrap();
        let w = seq.ivb_witness(12).unwrap();
        assert_eq!(w.prefix, None);
        assert_eq!(w.images.len(), 12);
        assert!(w.images.iter().all(|d| d.radius().is_negative()));

        let mut seq = NestedBallSeq::<Rational>::iva(Schedule::Geometric(q(1, 2)), q(1, 1), 6).unwrap();
        assert_eq!(seq.ivb_witness(6).unwrap_err(), Error::BudgetExhausted { budget: 6 });

        let x = RationalPuiseux::new(&(&P::t_pow(q(2, 1)) + &P::one()), &P::t_pow(q(1, 1))).unwrap();
        let b = Ball::from_rational(&x, q(1, 1), BallKind::Closed).unwrap();
        let mut seq = NestedBallSeq::raw(vec![b]).unwrap();
        let w = seq.ivb_witness(1).unwrap();
        assert_eq!(w.prefix.unwrap().quotients(), expand_exact(&x).truncated(0).unwrap().quotients());
        assert_eq!(seq.kind(), TypeIvKind::Inconclusive);
    }

    #[test]
    fn raw_rejects_unnested() {
        let b = |c: i64, r: i64| {
            Ball::<Rational>::new(&TruncatedSeries::from_poly(&P::constant(Rational::new(c, 1))), q(r, 1), BallKind::Closed)
                .unwrap()
        };
        assert!(NestedBallSeq::raw(vec![b(0, 0), b(0, 1)]).is_ok());
        assert!(matches!(NestedBallSeq::raw(vec![b(0, 1), b(0, 0)]), Err(Error::Mismatch(_))));
    }

    #[test]
    fn promenades() {
        let seq = NestedBallSeq::<Rational>::iva(Schedule::Geometric(q(1, 2)), q(1, 1), 6).unwrap();
        let w = seq.promenade();
        let maxima: Vec<_> = w.maxima().into_iter().map(|(_, v)| v).collect();
        assert_eq!(maxima, (1..=6).map(|i| q(1, 1 << i)).collect::<Vec<_>>());
        assert_eq!(w.tail(), &PromenadeTail::Accumulates { limit: Some(q(2, 1)) });
        let e = NestedBallSeq::<Rational>::e69_sequence(Schedule::Harmonic, 3).unwrap();
        assert!(e.promenade().maxima().is_empty());
    }

    #[test]
    fn over_a_finite_field() {
        let mut seq = NestedBallSeq::<Fp<5>>::e69_sequence(Schedule::Harmonic, 5).unwrap();
        let z = SeriesStream::from_poly(&PuiseuxPoly::t_pow(q(1, 1)));
        assert_eq!(seq.exclude_point(&z, 10).unwrap(), Exclusion::ExcludedAt(2));
    }
}
