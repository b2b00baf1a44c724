use core::cmp::min;
use core::fmt;

use crate::error::{Error, Result};
use crate::exponent::{Degree, Exponent, Valuation};
use crate::field::Field;
use crate::poly::PuiseuxPoly;
use crate::rational::RationalPuiseux;
use crate::series::{SeriesStream, TruncatedSeries};
use crate::terms;

/// Keeps the terms of an exact-enough series that matter above `floor`.
fn canonical<F: Field>(center: &TruncatedSeries<F>, floor: &Degree) -> Result<TruncatedSeries<F>> {
    if *center.cutoff() > *floor {
        return Err(Error::PrecisionExhausted {
            needed: floor.clone(),
        });
    }
    Ok(TruncatedSeries::exact(terms::keep_above(center.terms(), floor)))
}

/// The point `eta_{a,r}` of the half-plane: the closed ball
/// `{b : nu(b - a) >= r}`.
///
/// The center is stored canonically: exactly its terms with exponent
/// `> -r`. Two pairs give the same point iff their canonical forms agree,
/// so `==` is equality of points.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BerkPoint<F: Field> {
    center: TruncatedSeries<F>,
    radius: Exponent,
}

impl<F: Field> BerkPoint<F> {
    /// `center` must be known above `-radius`.
    pub fn new(center: &TruncatedSeries<F>, radius: Exponent) -> Result<Self> {
        let center = canonical(center, &Degree::Finite(-&radius))?;
        Ok(BerkPoint { center, radius })
    }

    pub fn from_poly(a: &PuiseuxPoly<F>, radius: Exponent) -> Self {
        Self::new(&TruncatedSeries::from_poly(a), radius).expect("exact center")
    }

    pub fn from_rational(a: &RationalPuiseux<F>, radius: Exponent) -> Result<Self> {
        let s = TruncatedSeries::from_rational(a, &Degree::Finite(-&radius))?;
        Self::new(&s, radius)
    }

    pub fn from_stream(a: &SeriesStream<F>, radius: Exponent) -> Result<Self> {
        Self::new(&a.truncate(&-&radius)?, radius)
    }

    /// `eta_{0,r}` on the ray.
    pub fn on_ray(radius: Exponent) -> Self {
        BerkPoint {
            center: TruncatedSeries::zero(),
            radius,
        }
    }

    /// Canonical center: an exact finite sum.
    pub fn center(&self) -> &TruncatedSeries<F> {
        &self.center
    }

    pub fn radius(&self) -> &Exponent {
        &self.radius
    }

    /// `nu(a - a')` as far as it matters: exact when below `min(r, r')`,
    /// otherwise some value `>= min(r, r')`.
    fn center_gap(&self, other: &Self) -> Valuation {
        self.center
            .sub(&other.center)
            .valuation()
            .expect("canonical centers are exact")
    }

    pub fn distance(&self, other: &Self) -> Exponent {
        let (r, r2) = (&self.radius, &other.radius);
        match self.center_gap(other) {
            Valuation::Finite(v) if v < *min(r, r2) => &(r + r2) - &v.scale(2),
            _ => (r - r2).abs(),
        }
    }

    /// `eta_{a, r''}` with `r'' = min(r, r', nu(a - a'))`.
    pub fn join(&self, other: &Self) -> Self {
        let mut r = min(&self.radius, &other.radius).clone();
        if let Valuation::Finite(v) = self.center_gap(other) {
            r = min(r, v);
        }
        Self::new(&self.center, r).expect("exact center")
    }

    /// `r <= r'` and `r <= nu(a - a')`: `self` is the larger ball.
    pub fn lies_above(&self, other: &Self) -> bool {
        self.radius <= other.radius && self.center_gap(other) >= self.radius
    }

    /// The closed ball this point stands for.
    pub fn ball(&self) -> Ball<F> {
        Ball {
            center: self.center.clone(),
            radius: self.radius.clone(),
            kind: BallKind::Closed,
        }
    }
}

impl<F: Field> fmt::Display for BerkPoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "eta({}, {})", self.center, self.radius)
    }
}

impl<F: Field> fmt::Debug for BerkPoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BallKind {
    /// `{b : nu(b - a) > r}`
    Open,
    /// `{b : nu(b - a) >= r}`
    Closed,
}

/// A ball of the completed field, with the same canonical-center convention
/// as [`BerkPoint`] (an open ball also keeps the term at exponent `-r`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ball<F: Field> {
    center: TruncatedSeries<F>,
    radius: Exponent,
    kind: BallKind,
}

impl<F: Field> Ball<F> {
    /// A cutoff at which every term that matters is known.
    fn floor(radius: &Exponent, kind: BallKind) -> Degree {
        match kind {
            BallKind::Closed => Degree::Finite(-radius),
            BallKind::Open => Degree::Finite(&-radius - &Exponent::one()),
        }
    }

    pub fn new(center: &TruncatedSeries<F>, radius: Exponent, kind: BallKind) -> Result<Self> {
        let center = match kind {
            BallKind::Closed => canonical(center, &Degree::Finite(-&radius))?,
            BallKind::Open => {
                // the term at exponent -r still matters
                if !(*center.cutoff() < -&radius) {
                    return Err(Error::PrecisionExhausted {
                        needed: Degree::Finite(-&radius),
                    });
                }
                TruncatedSeries::exact(
                    center
                        .terms()
                        .iter()
                        .filter(|(e, _)| *e >= -&radius)
                        .cloned()
                        .collect(),
                )
            }
        };
        Ok(Ball { center, radius, kind })
    }

    pub fn from_rational(a: &RationalPuiseux<F>, radius: Exponent, kind: BallKind) -> Result<Self> {
        let s = TruncatedSeries::from_rational(a, &Self::floor(&radius, kind))?;
        Self::new(&s, radius, kind)
    }

    pub fn center(&self) -> &TruncatedSeries<F> {
        &self.center
    }

    pub fn radius(&self) -> &Exponent {
        &self.radius
    }

    pub fn kind(&self) -> BallKind {
        self.kind
    }

    pub fn closure(&self) -> Self {
        Self::new(&self.center, self.radius.clone(), BallKind::Closed).expect("exact center")
    }

    /// The point of a closed ball.
    pub fn point(&self) -> Result<BerkPoint<F>> {
        match self.kind {
            BallKind::Closed => BerkPoint::new(&self.center, self.radius.clone()),
            BallKind::Open => Err(Error::domain("an open ball is not a point of the half-plane")),
        }
    }

    /// Membership of a truncated element; it must be known far enough for
    /// the answer to be decided.
    pub fn contains(&self, z: &TruncatedSeries<F>) -> Result<bool> {
        let diff = z.sub(&self.center);
        let r = &self.radius;
        let outside = |e: &Exponent| match self.kind {
            BallKind::Closed => *e > -r,
            BallKind::Open => *e >= -r,
        };
        if diff.terms().iter().any(|(e, _)| outside(e)) {
            return Ok(false);
        }
        let decided = match self.kind {
            BallKind::Closed => *diff.cutoff() <= -r,
            BallKind::Open => *diff.cutoff() < -r,
        };
        if decided {
            Ok(true)
        } else {
            Err(Error::PrecisionExhausted {
                needed: Degree::Finite(-r),
            })
        }
    }

    pub fn contains_stream(&self, z: &SeriesStream<F>) -> Result<bool> {
        self.contains(&z.truncate(&(&-&self.radius - &Exponent::one()))?)
    }

    /// `self` contains `other`.
    pub fn contains_ball(&self, other: &Ball<F>) -> bool {
        let gap = self
            .center
            .sub(&other.center)
            .valuation()
            .expect("exact centers");
        let r = &self.radius;
        match (self.kind, other.kind) {
            (BallKind::Closed, _) => *r <= other.radius && gap >= *r,
            (BallKind::Open, BallKind::Open) => *r <= other.radius && gap > *r,
            (BallKind::Open, BallKind::Closed) => *r < other.radius && gap > *r,
        }
    }
}

impl<F: Field> fmt::Display for Ball<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            BallKind::Open => "o",
            BallKind::Closed => "c",
        };
        write!(f, "ball{}({}, {})", k, self.center, self.radius)
    }
}

impl<F: Field> fmt::Debug for Ball<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::q;
    use crate::field::Rational;
    use alloc::format;

    type P = PuiseuxPoly<Rational>;

    fn eta(a: P, r: Exponent) -> BerkPoint<Rational> {
        BerkPoint::from_poly(&a, r)
    }

    fn t() -> P {
        P::t_pow(q(1, 1))
    }

    #[test]
    fn distance_examples() {
        assert_eq!(eta(P::zero(), q(0, 1)).distance(&eta(P::zero(), q(-2, 1))), q(2, 1));
        assert_eq!(eta(P::zero(), q(1, 1)).distance(&eta(t(), q(1, 1))), q(4, 1));
        let e = eta(t(), q(1, 3));
        assert_eq!(e.distance(&e), q(0, 1));
    }

    #[test]
    fn join_examples() {
        let a = eta(P::zero(), q(0, 1));
        let b = eta(P::zero(), q(-2, 1));
        assert_eq!(a.join(&b), b);
        assert_eq!(eta(P::zero(), q(1, 1)).join(&eta(t(), q(1, 1))), eta(P::zero(), q(-1, 1)));
        assert_eq!(a.join(&a), a);
    }

    #[test]
    fn order_examples() {
        let inv_t = BerkPoint::from_rational(&RationalPuiseux::new(&P::one(), &t()).unwrap(), q(0, 1)).unwrap();
        assert!(eta(P::zero(), q(-1, 1)).lies_above(&inv_t));
        let e = eta(t(), q(1, 1));
        assert!(e.lies_above(&e));
        assert!(!eta(P::zero(), q(1, 1)).lies_above(&eta(t(), q(1, 1))));
    }

    #[test]
    fn equality_is_point_equality() {
        // t^(-2) is invisible at radius 1
        let a = &t() + &P::one();
        let x = RationalPuiseux::new(&(&(&(&a * &t()) * &t()) + &P::one()), &(&t() * &t())).unwrap();
        assert_eq!(BerkPoint::from_rational(&x, q(1, 1)).unwrap(), eta(a.clone(), q(1, 1)));
        assert_ne!(BerkPoint::from_rational(&x, q(3, 1)).unwrap(), eta(a, q(3, 1)));
    }

    #[test]
    fn ball_membership() {
        let b = Ball::new(&TruncatedSeries::from_poly(&t()), q(1, 1), BallKind::Open).unwrap();
        let inside = TruncatedSeries::new(vec_terms(&[(1, 1), (-2, 1)]), Degree::Finite(q(-5, 1)));
        let boundary = TruncatedSeries::new(vec_terms(&[(1, 1), (-1, 1)]), Degree::Finite(q(-5, 1)));
        assert!(b.contains(&inside).unwrap());
        assert!(!b.contains(&boundary).unwrap());
        assert!(b.closure().contains(&boundary).unwrap());
        let vague = TruncatedSeries::new(vec_terms(&[(1, 1)]), Degree::Finite(q(-1, 1)));
        assert!(b.contains(&vague).is_err());
        assert!(b.closure().contains(&vague).unwrap());
        assert_eq!(format!("{}", b), "ballo(t, 1)");
    }

    fn vec_terms(v: &[(i64, i64)]) -> alloc::vec::Vec<crate::terms::Term<Rational>> {
        v.iter().map(|&(e, c)| (q(e, 1), Rational::new(c, 1))).collect()
    }

    #[test]
    fn insufficient_center_precision() {
        let s = TruncatedSeries::<Rational>::new(vec_terms(&[(1, 1)]), Degree::Finite(q(-1, 1)));
        assert!(BerkPoint::new(&s, q(2, 1)).is_err());
        assert!(BerkPoint::new(&s, q(1, 1)).is_ok());
    }
}
