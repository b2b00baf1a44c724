use alloc::vec::Vec;
use core::fmt;

use crate::berkovich::BerkPoint;
use crate::error::{Error, Result};
use crate::exponent::{Degree, Exponent, Valuation};
use crate::field::Field;
use crate::poly::PuiseuxPoly;
use crate::rational::RationalPuiseux;
use crate::series::TruncatedSeries;

/// Generators of the action.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Generator<F: Field> {
    /// `z -> 1/z`, matrix `(0 1; 1 0)`.
    I,
    /// `z -> z + f`, matrix `(1 f; 0 1)`.
    T(PuiseuxPoly<F>),
    /// `z -> (d1 z + f)/d2`, matrix `(d1 f; 0 d2)`.
    M {
        d1: RationalPuiseux<F>,
        d2: RationalPuiseux<F>,
        f: RationalPuiseux<F>,
    },
}

pub type Matrix<F> = [[RationalPuiseux<F>; 2]; 2];

fn mat_mul<F: Field>(x: &Matrix<F>, y: &Matrix<F>) -> Matrix<F> {
    let e = |i: usize, j: usize| &(&x[i][0] * &y[0][j]) + &(&x[i][1] * &y[1][j]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn identity<F: Field>() -> Matrix<F> {
    [
        [RationalPuiseux::one(), RationalPuiseux::zero()],
        [RationalPuiseux::zero(), RationalPuiseux::one()],
    ]
}

impl<F: Field> Generator<F> {
    pub fn m(d1: RationalPuiseux<F>, d2: RationalPuiseux<F>, f: RationalPuiseux<F>) -> Result<Self> {
        if d1.is_zero() || d2.is_zero() {
            return Err(Error::InvalidElement);
        }
        Ok(Generator::M { d1, d2, f })
    }

    pub fn matrix(&self) -> Matrix<F> {
        let (o, z) = (RationalPuiseux::one(), RationalPuiseux::zero());
        match self {
            Generator::I => [[z.clone(), o.clone()], [o, z]],
            Generator::T(f) => [[o.clone(), RationalPuiseux::from_poly(f.clone())], [z, o]],
            Generator::M { d1, d2, f } => [[d1.clone(), f.clone()], [z, d2.clone()]],
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            Generator::I => Generator::I,
            Generator::T(f) => Generator::T(-f),
            Generator::M { d1, d2, f } => Generator::M {
                d1: d2.clone(),
                d2: d1.clone(),
                f: -f,
            },
        }
    }

    pub fn act(&self, eta: &BerkPoint<F>) -> Result<BerkPoint<F>> {
        let a = eta.center();
        let r = eta.radius();
        match self {
            Generator::I => match a.valuation()? {
                Valuation::Finite(v) if v < *r => {
                    let r2 = r - &v.scale(2);
                    let inv = a.invert(&Degree::Finite(-&r2))?;
                    BerkPoint::new(&inv, r2)
                }
                _ => Ok(BerkPoint::on_ray(-r)),
            },
            Generator::T(f) => BerkPoint::new(&a.add(&TruncatedSeries::from_poly(f)), r.clone()),
            Generator::M { d1, d2, f } => {
                let scale = d1.div(d2)?;
                let r2 = r + scale.valuation().finite().expect("nonzero");
                let target = Degree::Finite(-&r2);
                let shift = TruncatedSeries::from_rational(&f.div(d2)?, &target)?;
                let moved = match a.degree_bound() {
                    Degree::NegInfinity => TruncatedSeries::zero(),
                    Degree::Finite(da) => {
                        // scale * a is needed above -r2
                        let lambda = TruncatedSeries::from_rational(&scale, &target.shift(&-&da))?;
                        lambda.mul(a)
                    }
                };
                BerkPoint::new(&moved.add(&shift), r2)
            }
        }
    }
}

impl<F: Field> fmt::Display for Generator<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::I => f.write_str("i"),
            Generator::T(p) => write!(f, "t({})", p),
            Generator::M { d1, d2, f: g } => write!(f, "m({}, {}, {})", d1, d2, g),
        }
    }
}

impl<F: Field> fmt::Debug for Generator<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A group element as a word in the generators, with its matrix.
///
/// The word is in product order: `g_1 * g_2 * ... * g_k` acts on a point by
/// applying `g_k` first.
#[derive(Clone, PartialEq, Eq)]
pub struct MobiusElt<F: Field> {
    word: Vec<Generator<F>>,
    matrix: Matrix<F>,
}

impl<F: Field> Default for MobiusElt<F> {
    fn default() -> Self {
        Self::identity()
    }
}

impl<F: Field> MobiusElt<F> {
    pub fn identity() -> Self {
        MobiusElt {
            word: Vec::new(),
            matrix: identity(),
        }
    }

    pub fn from_word(word: Vec<Generator<F>>) -> Self {
        let matrix = word.iter().fold(identity(), |m, g| mat_mul(&m, &g.matrix()));
        MobiusElt { word, matrix }
    }

    pub fn generator(g: Generator<F>) -> Self {
        Self::from_word(alloc::vec![g])
    }

    /// Factors `(a b; c d)` into generators: `m_{a,d,b}` when `c = 0`,
    /// otherwise `m_{-det/c, 1, a/c} * i * m_{c, 1, d}`.
    pub fn from_matrix(m: Matrix<F>) -> Result<Self> {
        let [[a, b], [c, d]] = m.clone();
        let det = &(&a * &d) - &(&b * &c);
        if det.is_zero() {
            return Err(Error::InvalidElement);
        }
        let word = if c.is_zero() {
            alloc::vec![Generator::m(a, d, b)?]
        } else {
            let one = RationalPuiseux::one();
            let x1 = (-&det).div(&c)?;
            let y = a.div(&c)?;
            alloc::vec![
                Generator::m(x1, one.clone(), y)?,
                Generator::I,
                Generator::m(c, one, d)?,
            ]
        };
        let g = Self::from_word(word);
        debug_assert_eq!(g.matrix, m);
        Ok(g)
    }

    pub fn word(&self) -> &[Generator<F>] {
        &self.word
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn determinant(&self) -> RationalPuiseux<F> {
        let m = &self.matrix;
        &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0])
    }

    /// `self * other`: `other` acts first.
    pub fn compose(&self, other: &Self) -> Self {
        let mut word = self.word.clone();
        word.extend(other.word.iter().cloned());
        MobiusElt {
            word,
            matrix: mat_mul(&self.matrix, &other.matrix),
        }
    }

    /// `g * self`.
    pub fn then(&self, g: Generator<F>) -> Self {
        Self::generator(g).compose(self)
    }

    pub fn inverse(&self) -> Self {
        Self::from_word(self.word.iter().rev().map(Generator::inverse).collect())
    }

    /// Applies the word, rightmost generator first.
    pub fn act(&self, eta: &BerkPoint<F>) -> Result<BerkPoint<F>> {
        let mut p = eta.clone();
        for g in self.word.iter().rev() {
            p = g.act(&p)?;
        }
        Ok(p)
    }

    /// Acts through the factorization of the matrix alone, ignoring the
    /// stored word.
    pub fn act_by_matrix(&self, eta: &BerkPoint<F>) -> Result<BerkPoint<F>> {
        Self::from_matrix(self.matrix.clone())?.act(eta)
    }
}

impl<F: Field> fmt::Display for MobiusElt<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("id");
        }
        for (k, g) in self.word.iter().enumerate() {
            if k > 0 {
                f.write_str(" * ")?;
            }
            write!(f, "{}", g)?;
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for MobiusElt<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `nu(d1/d2)` shift of a generator, used by tests and reports.
pub fn radius_shift<F: Field>(g: &Generator<F>) -> Option<Exponent> {
    match g {
        Generator::M { d1, d2, .. } => d1.div(d2).ok()?.valuation().finite().cloned(),
        _ => None,
    }
}
