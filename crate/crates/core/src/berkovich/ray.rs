use alloc::vec::Vec;

use crate::berkovich::{BerkPoint, Generator, MobiusElt};
use crate::cf::{ContinuedFraction, ExpansionStatus};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::field::Field;
use crate::poly::PuiseuxPoly;

/// Default bound on the number of `i * t_{-f}` steps of a reduction.
pub const DEFAULT_REDUCTION_STEPS: usize = 10_000;

/// `v` with `g * eta = eta_{0,-v}`, and the witness `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction<F: Field> {
    pub v: Exponent,
    pub witness: MobiusElt<F>,
}

fn principal<F: Field>(p: &BerkPoint<F>) -> PuiseuxPoly<F> {
    PuiseuxPoly::new(
        p.center()
            .terms()
            .iter()
            .take_while(|(e, _)| !e.is_negative())
            .cloned()
            .collect(),
    )
    .expect("nonnegative exponents")
}

/// Moves `eta` onto the ray `{eta_{0,r} : r <= 0}`.
///
/// While the radius `s` is positive, the center's principal part is removed
/// and the point inverted, which lowers the radius by `2 deg f` for the next
/// partial quotient `f` of the center; when the remaining center is too
/// small to see at radius `s`, one inversion lands on the ray.
pub fn reduce_to_ray<F: Field>(eta: &BerkPoint<F>, max_steps: usize) -> Result<Reduction<F>> {
    let mut p = eta.clone();
    let mut g = MobiusElt::identity();
    let apply = |g: &mut MobiusElt<F>, p: &mut BerkPoint<F>, h: Generator<F>| -> Result<()> {
        *p = h.act(p)?;
        *g = g.then(h);
        Ok(())
    };
    for _ in 0..max_steps {
        let s = p.radius().clone();
        let f = principal(&p);
        if !f.is_zero() {
            apply(&mut g, &mut p, Generator::T(-&f))?;
        }
        if !s.is_positive() {
            return Ok(Reduction { v: -s, witness: g });
        }
        let landed = p.center().is_zero();
        apply(&mut g, &mut p, Generator::I)?;
        if landed {
            return Ok(Reduction { v: s, witness: g });
        }
    }
    Err(Error::BudgetExhausted { budget: max_steps })
}

/// `T_n = 2 (D_1 + ... + D_n)`, `n = 0..=len`.
pub fn doubled_sums(degrees: &[Exponent]) -> Vec<Exponent> {
    let mut out = alloc::vec![Exponent::zero()];
    for d in degrees {
        let next = out.last().expect("nonempty") + &d.scale(2);
        out.push(next);
    }
    out
}

/// The ray coordinate of `eta_{u,r}` from the degrees `D_i = deg f_i` of
/// the expansion of `u`: `-r` for `r <= 0`, else with `T_n <= r` maximal,
/// `D_{n+1} - |r - T_n - D_{n+1}|`, or `r - T_N` past the end of an expansion
/// that ended at `N`. `None` if more degrees are needed.
pub fn ray_value(degrees: &[Exponent], ended: bool, r: &Exponent) -> Option<Exponent> {
    if !r.is_positive() {
        return Some(-r);
    }
    let sums = doubled_sums(degrees);
    let n = sums.iter().rposition(|t| t <= r).expect("T_0 = 0 <= r");
    match degrees.get(n) {
        Some(d) => Some(d - &(&(r - &sums[n]) - d).abs()),
        None if ended => Some(r - &sums[n]),
        None => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PromenadeTail {
    /// Past the last zero the promenade climbs with slope 1 forever.
    AscendsForever,
    /// The known breakpoints ran out before the end of the promenade.
    TruncatedAtBudget,
    /// The breakpoints accumulate; `limit` is the certified endpoint if any.
    Accumulates { limit: Option<Exponent> },
}

/// The projection `w(t)` to the ray of the descending geodesic towards a
/// point: `w(t) = -t` for `t <= 0`, then slopes `+-1` between breakpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Promenade {
    breakpoints: Vec<(Exponent, Exponent)>,
    tail: PromenadeTail,
}

impl Promenade {
    /// Zeros at `T_n`, maxima `D_{n+1}` at `T_n + D_{n+1}`.
    pub fn from_degrees(degrees: &[Exponent], tail: PromenadeTail, t_max: Option<&Exponent>) -> Self {
        let mut breakpoints = alloc::vec![(Exponent::zero(), Exponent::zero())];
        let mut t = Exponent::zero();
        let mut tail = tail;
        for d in degrees {
            if t_max.is_some_and(|m| t >= *m) {
                tail = PromenadeTail::TruncatedAtBudget;
                break;
            }
            breakpoints.push((&t + d, d.clone()));
            t = &t + &d.scale(2);
            breakpoints.push((t.clone(), Exponent::zero()));
        }
        Promenade { breakpoints, tail }
    }

    /// From a computed expansion of the target point.
    pub fn from_expansion<F: Field>(
        cf: &ContinuedFraction<F>,
        status: ExpansionStatus,
        t_max: Option<&Exponent>,
    ) -> Self {
        let tail = if status == ExpansionStatus::Ended {
            PromenadeTail::AscendsForever
        } else {
            PromenadeTail::TruncatedAtBudget
        };
        Self::from_degrees(&cf.degrees(), tail, t_max)
    }

    /// Only the initial descent `w(t) = -t`, known up to `end`.
    pub fn pure_descent(end: Exponent, tail: PromenadeTail) -> Self {
        Promenade {
            breakpoints: alloc::vec![(end.clone(), -&end)],
            tail,
        }
    }

    pub fn breakpoints(&self) -> &[(Exponent, Exponent)] {
        &self.breakpoints
    }

    pub fn tail(&self) -> &PromenadeTail {
        &self.tail
    }

    /// Breakpoints that are local maxima.
    pub fn maxima(&self) -> Vec<(Exponent, Exponent)> {
        self.breakpoints
            .iter()
            .filter(|(_, v)| v.is_positive())
            .filter(|(t, _)| t.is_positive())
            .cloned()
            .collect()
    }

    /// Bounce points (zeros at `t > 0`).
    pub fn zeros(&self) -> Vec<Exponent> {
        self.breakpoints
            .iter()
            .filter(|(t, v)| v.is_zero() && t.is_positive())
            .map(|(t, _)| t.clone())
            .collect()
    }

    /// `w(t)`, where known.
    pub fn evaluate(&self, t: &Exponent) -> Option<Exponent> {
        let first = &self.breakpoints[0];
        if *t <= first.0 {
            return Some(-t);
        }
        for w in self.breakpoints.windows(2) {
            let ((t0, v0), (t1, v1)) = (&w[0], &w[1]);
            if t <= t1 {
                let up = v1 > v0;
                let dt = t - t0;
                return Some(if up { v0 + &dt } else { v0 - &dt });
            }
        }
        let (tl, vl) = self.breakpoints.last().expect("nonempty");
        match self.tail {
            PromenadeTail::AscendsForever => Some(vl + &(t - tl)),
            _ => None,
        }
    }

    /// Slopes are `+-1` and values nonnegative past the origin.
    pub fn is_well_formed(&self) -> bool {
        self.breakpoints.windows(2).all(|w| {
            let dt = &w[1].0 - &w[0].0;
            let dv = (&w[1].1 - &w[0].1).abs();
            dt.is_positive() && dt == dv
        }) && self.breakpoints.iter().all(|(_, v)| !v.is_negative())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::{expand_exact, expand_stream};
    use crate::exponent::q;
    use crate::field::Rational;
    use crate::rational::RationalPuiseux;
    use crate::series::{sqrt_stream, SeriesStream};
    use alloc::vec;

    type P = PuiseuxPoly<Rational>;

    fn t() -> P {
        P::t_pow(q(1, 1))
    }

    fn check(eta: &BerkPoint<Rational>) -> Exponent {
        let red = reduce_to_ray(eta, 100).unwrap();
        assert_eq!(red.witness.act(eta).unwrap(), BerkPoint::on_ray(-&red.v));
        red.v
    }

    #[test]
    fn half_power_example() {
        let eta = BerkPoint::from_poly(&P::t_pow(q(1, 2)), q(1, 4));
        let red = reduce_to_ray(&eta, 10).unwrap();
        assert_eq!(red.v, q(1, 4));
        assert_eq!(
            red.witness.word(),
            &[Generator::I, Generator::T(-&P::t_pow(q(1, 2)))]
        );
        check(&eta);
    }

    #[test]
    fn nonpositive_radius() {
        let eta = BerkPoint::from_poly(&(&t() + &P::one()), q(-3, 2));
        assert_eq!(check(&eta), q(3, 2));
    }

    #[test]
    fn sqrt_closed_form() {
        let z = sqrt_stream(&SeriesStream::from_poly(&(&t() + &P::one())));
        let eta = BerkPoint::from_stream(&z, q(3, 2)).unwrap();
        assert_eq!(check(&eta), q(1, 2));
        let (cf, _) = expand_stream(&z, 20, &q(-30, 1)).unwrap();
        let degs = cf.degrees();
        for k in 0..40 {
            let r = q(k - 8, 4);
            let eta = BerkPoint::from_stream(&z, r.clone()).unwrap();
            assert_eq!(Some(check(&eta)), ray_value(&degs, false, &r), "r = {}", r);
        }
    }

    #[test]
    fn ended_expansion_climbs() {
        let x = RationalPuiseux::new(&(&(&t() * &t()) + &P::one()), &t()).unwrap();
        let degs = expand_exact(&x).degrees();
        for k in 0..20 {
            let r = q(k - 4, 2);
            let eta = BerkPoint::from_rational(&x, r.clone()).unwrap();
            assert_eq!(Some(check(&eta)), ray_value(&degs, true, &r));
        }
    }

    #[test]
    fn promenade_of_finite_expansion() {
        let x = RationalPuiseux::new(&(&(&t() * &t()) + &P::one()), &t()).unwrap();
        let cf = expand_exact(&x);
        let w = Promenade::from_expansion(&cf, ExpansionStatus::Ended, None);
        assert_eq!(
            w.breakpoints(),
            &[(q(0, 1), q(0, 1)), (q(1, 1), q(1, 1)), (q(2, 1), q(0, 1))]
        );
        assert_eq!(w.tail(), &PromenadeTail::AscendsForever);
        assert_eq!(w.evaluate(&q(7, 2)), Some(q(3, 2)));
        assert_eq!(w.evaluate(&q(-2, 1)), Some(q(2, 1)));
        assert!(w.is_well_formed());
    }

    #[test]
    fn promenade_of_sqrt() {
        let z = sqrt_stream(&SeriesStream::from_poly(&(&t() + &P::one())));
        let (cf, status) = expand_stream(&z, 6, &q(-30, 1)).unwrap();
        let w = Promenade::from_expansion(&cf, status, None);
        let maxima = w.maxima();
        assert_eq!(maxima.len(), 6);
        for (k, (pos, val)) in maxima.iter().enumerate() {
            assert_eq!(*val, q(1, 2));
            assert_eq!(*pos, q(2 * k as i64 + 1, 2));
        }
        assert_eq!(w.tail(), &PromenadeTail::TruncatedAtBudget);
        assert_eq!(w.evaluate(&q(100, 1)), None);
    }

    #[test]
    fn t_max_cuts_breakpoints() {
        let degs = vec![q(1, 1); 10];
        let w = Promenade::from_degrees(&degs, PromenadeTail::AscendsForever, Some(&q(4, 1)));
        assert_eq!(w.breakpoints().last().unwrap().0, q(4, 1));
        assert_eq!(w.tail(), &PromenadeTail::TruncatedAtBudget);
    }
}
