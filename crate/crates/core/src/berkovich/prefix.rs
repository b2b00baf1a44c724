use alloc::vec::Vec;

use crate::berkovich::{Ball, BallKind, Generator, MobiusElt};
use crate::cf::{evaluate_exact, expand_exact, ContinuedFraction};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::field::Field;
use crate::poly::PuiseuxPoly;
use crate::series::TruncatedSeries;

/// The elements whose expansion starts with the finite expression `cf`:
/// the open ball of radius `T_n = 2 (deg f_1 + ... + deg f_n)` around its
/// value.
pub fn ball_of_prefix<F: Field>(cf: &ContinuedFraction<F>) -> Result<Ball<F>> {
    let cf = if cf.is_finite() {
        cf.clone()
    } else {
        let n = cf.last_index().ok_or_else(|| Error::domain("empty prefix"))?;
        cf.truncated(n)?
    };
    let x = evaluate_exact(&cf)?;
    let r = cf.doubled_degree_sums().pop().expect("nonempty");
    Ball::from_rational(&x, r, BallKind::Open)
}

/// `rho_n = (i * t_{-f_n}) * ... * (i * t_{-f_0})`, omitting `t_0`.
pub fn rho_word<F: Field>(quotients: &[PuiseuxPoly<F>]) -> MobiusElt<F> {
    let mut word = Vec::with_capacity(2 * quotients.len());
    for f in quotients.iter().rev() {
        word.push(Generator::I);
        if !f.is_zero() {
            word.push(Generator::T(-f));
        }
    }
    MobiusElt::from_word(word)
}

/// `B = B_{w - D}`: the prefix `w` of every element of the closed ball `B`
/// that the ball itself determines, and the image `D = rho_n(B)`, whose
/// radius is `<= 0`.
///
/// For radius `r <= 0` the prefix is empty and `D = B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixRepresentation<F: Field> {
    /// Empty when `r <= 0`; otherwise finite.
    pub prefix: Option<ContinuedFraction<F>>,
    pub image: Ball<F>,
    pub rho: MobiusElt<F>,
}

pub fn prefix_representation<F: Field>(ball: &Ball<F>) -> Result<PrefixRepresentation<F>> {
    if ball.kind() != BallKind::Closed {
        return Err(Error::domain("prefix representation needs a closed ball"));
    }
    let r = ball.radius().clone();
    if !r.is_positive() {
        return Ok(PrefixRepresentation {
            prefix: None,
            image: ball.clone(),
            rho: MobiusElt::identity(),
        });
    }
    let center = ball.center();
    let mut cf = expand_exact(&center.to_rational().expect("exact center"));
    if cf.doubled_degree_sums().last().expect("nonempty") < &r {
        // c + t^{-r} is another center of the same ball whose expansion
        // reaches past r
        let bumped = center.add(&TruncatedSeries::exact(alloc::vec![(-&r, F::one())]));
        cf = expand_exact(&bumped.to_rational().expect("exact"));
    }
    let sums = cf.doubled_degree_sums();
    // T_n < r <= T_{n+1}
    let n = sums.iter().rposition(|t| *t < r).expect("T_0 = 0 < r");
    debug_assert!(n + 1 < sums.len() && sums[n + 1] >= r);
    let prefix = cf.truncated(n)?;
    let rho = rho_word(prefix.quotients());
    let image = rho.act(&ball.point()?)?.ball();
    if image.radius().is_positive() {
        return Err(Error::Mismatch(alloc::format!(
            "image {} of {} has positive radius",
            image,
            ball
        )));
    }
    Ok(PrefixRepresentation {
        prefix: Some(prefix),
        image,
        rho,
    })
}

/// `T_n` of the expression, used as the ball radius.
pub fn prefix_radius<F: Field>(cf: &ContinuedFraction<F>) -> Exponent {
    cf.doubled_degree_sums().pop().expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::expand_series;
    use crate::exponent::{q, Degree};
    use crate::field::Rational;
    use crate::rational::RationalPuiseux;
    use alloc::format;
    use alloc::vec;

    type P = PuiseuxPoly<Rational>;

    fn t() -> P {
        P::t_pow(q(1, 1))
    }

    #[test]
    fn prefix_ball_examples() {
        let b = ball_of_prefix(&ContinuedFraction::finite(vec![P::zero(), t()]).unwrap()).unwrap();
        assert_eq!(format!("{}", b), "ballo(t^(-1), 2)");
        let f0 = &t() + &P::one();
        let b = ball_of_prefix(&ContinuedFraction::finite(vec![f0]).unwrap()).unwrap();
        assert_eq!(format!("{}", b), "ballo(t + 1, 0)");
        let h = P::t_pow(q(1, 2));
        let b = ball_of_prefix(&ContinuedFraction::finite(vec![h.clone(), h.scale(&Rational::new(2, 1))]).unwrap())
            .unwrap();
        assert_eq!(*b.radius(), q(1, 1));
    }

    #[test]
    fn membership_matches_prefix() {
        let cf = ContinuedFraction::finite(vec![t(), t(), &t() + &P::one()]).unwrap();
        let b = ball_of_prefix(&cf).unwrap();
        let x = evaluate_exact(&cf).unwrap();
        let base = TruncatedSeries::from_rational(&x, &Degree::Finite(q(-20, 1))).unwrap();
        for (e, inside) in [(-5, true), (-4, false), (-9, true), (-3, false)] {
            let z = base.add(&TruncatedSeries::exact(vec![(q(e, 1), Rational::new(1, 1))]));
            assert_eq!(b.contains(&z).unwrap(), inside, "perturbation t^{}", e);
            let (got, _) = expand_series(&z, 10);
            assert_eq!(got.quotients().starts_with(cf.quotients()), inside);
        }
    }

    #[test]
    fn representation_examples() {
        let inv_t = RationalPuiseux::new(&P::one(), &t()).unwrap();
        let b = Ball::from_rational(&inv_t, q(1, 1), BallKind::Closed).unwrap();
        let rep = prefix_representation(&b).unwrap();
        assert_eq!(rep.prefix.unwrap().quotients(), &[P::zero()]);
        assert!(!rep.image.radius().is_positive());

        let b = Ball::new(&TruncatedSeries::from_poly(&t()), q(-1, 1), BallKind::Closed).unwrap();
        let rep = prefix_representation(&b).unwrap();
        assert_eq!(rep.prefix, None);
        assert_eq!(rep.image, b);

        let cf = ContinuedFraction::finite(vec![t(), t()]).unwrap();
        let closed = ball_of_prefix(&cf).unwrap().closure();
        let rep = prefix_representation(&closed).unwrap();
        assert_eq!(rep.prefix.unwrap().quotients(), &[t()]);
        assert_eq!(*rep.image.radius(), q(0, 1));
    }

    #[test]
    fn representation_recovers_ball() {
        let cf = ContinuedFraction::finite(vec![P::one(), &t() + &P::one(), P::t_pow(q(1, 2))]).unwrap();
        let x = evaluate_exact(&cf).unwrap();
        for r in [q(1, 2), q(2, 1), q(3, 1), q(7, 2), q(5, 1)] {
            let b = Ball::from_rational(&x, r, BallKind::Closed).unwrap();
            let rep = prefix_representation(&b).unwrap();
            let back = rep.rho.inverse().act(&rep.image.point().unwrap()).unwrap();
            assert_eq!(back.ball(), b);
        }
    }
}
