use crate::error::{Error, Result};
use crate::exponent::Exponent;

/// Outcome of inspecting the degree sum `deg f_1 + deg f_2 + ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Convergence {
    /// The partial sum reached the threshold: the expansion converges.
    DivergesCertified { terms: usize, partial_sum: Exponent },
    /// The caller's analytic bound held on every inspected partial sum.
    ConvergesCertified {
        bound: Exponent,
        terms: usize,
        partial_sum: Exponent,
    },
    Inconclusive { terms: usize, partial_sum: Exponent },
}

/// Classifies a stream of positive degrees by its partial sums.
///
/// Summability of an arbitrary stream is undecidable, so convergence of the
/// sum is only reported when the caller supplies an analytic `bound`; the
/// inspected partial sums must respect it. Without a bound, the sum is
/// certified divergent once a partial sum reaches `threshold`.
pub fn classify_convergence(
    degrees: impl IntoIterator<Item = Exponent>,
    budget: usize,
    threshold: Option<&Exponent>,
    bound: Option<&Exponent>,
) -> Result<Convergence> {
    let mut sum = Exponent::zero();
    let mut terms = 0;
    for d in degrees.into_iter().take(budget) {
        if !d.is_positive() {
            return Err(Error::domain(alloc::format!(
                "degree {} of f{} is not positive",
                d,
                terms + 1
            )));
        }
        sum = sum + d;
        terms += 1;
        if let Some(b) = bound {
            if sum > *b {
                return Err(Error::domain(alloc::format!(
                    "partial sum {} after {} terms exceeds the bound {}",
                    sum,
                    terms,
                    b
                )));
            }
        } else if threshold.is_some_and(|t| sum >= *t) {
            return Ok(Convergence::DivergesCertified {
                terms,
                partial_sum: sum,
            });
        }
    }
    Ok(match bound {
        Some(b) => Convergence::ConvergesCertified {
            bound: b.clone(),
            terms,
            partial_sum: sum,
        },
        None => Convergence::Inconclusive {
            terms,
            partial_sum: sum,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::q;
    use core::iter;

    #[test]
    fn constant_degrees_diverge_after_200_terms() {
        let r = classify_convergence(iter::repeat(q(1, 2)), 1000, Some(&q(100, 1)), None).unwrap();
        assert_eq!(
            r,
            Convergence::DivergesCertified {
                terms: 200,
                partial_sum: q(100, 1)
            }
        );
    }

    #[test]
    fn geometric_degrees_with_bound() {
        let degs = (1..).map(|i: u32| Exponent::new(1, num_bigint::BigInt::from(2).pow(i)));
        let r = classify_convergence(degs, 60, None, Some(&q(1, 1))).unwrap();
        assert!(matches!(r, Convergence::ConvergesCertified { terms: 60, .. }));
        assert!(classify_convergence(iter::repeat(q(1, 2)), 10, None, Some(&q(1, 1))).is_err());
    }

    #[test]
    fn harmonic_is_inconclusive() {
        let r = classify_convergence((1..).map(|i| q(1, i)), 50, Some(&q(100, 1)), None).unwrap();
        assert!(matches!(r, Convergence::Inconclusive { terms: 50, .. }));
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(classify_convergence([q(1, 1), q(0, 1)], 5, None, None).is_err());
    }
}
