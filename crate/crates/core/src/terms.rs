//! Sparse sums of monomials `c * t^e` with arbitrary rational exponents.
//!
//! All functions keep the canonical form: exponents strictly decreasing,
//! coefficients nonzero.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};
use core::fmt;

use crate::exponent::{Degree, Exponent};
use crate::field::Field;

pub type Term<F> = (Exponent, F);

pub(crate) fn normalize<F: Field>(mut terms: Vec<Term<F>>) -> Vec<Term<F>> {
    terms.sort_by(|a, b| b.0.cmp(&a.0));
    let mut out: Vec<Term<F>> = Vec::with_capacity(terms.len());
    for (e, c) in terms {
        match out.last_mut() {
            Some((le, lc)) if *le == e => *lc = lc.add(&c),
            _ => out.push((e, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

pub(crate) fn is_canonical<F: Field>(terms: &[Term<F>]) -> bool {
    terms.windows(2).all(|w| w[0].0 > w[1].0) && terms.iter().all(|(_, c)| !c.is_zero())
}

pub(crate) fn add<F: Field>(a: &[Term<F>], b: &[Term<F>]) -> Vec<Term<F>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                let c = a[i].1.add(&b[j].1);
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub(crate) fn neg<F: Field>(a: &[Term<F>]) -> Vec<Term<F>> {
    a.iter().map(|(e, c)| (e.clone(), c.neg())).collect()
}

pub(crate) fn sub<F: Field>(a: &[Term<F>], b: &[Term<F>]) -> Vec<Term<F>> {
    add(a, &neg(b))
}

/// Product, keeping only exponents strictly above `above`.
pub(crate) fn mul_above<F: Field>(a: &[Term<F>], b: &[Term<F>], above: &Degree) -> Vec<Term<F>> {
    let mut acc: BTreeMap<Reverse<Exponent>, F> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = ea + eb;
            if *above >= e {
                // b is sorted descending, so the rest of this row is also cut
                break;
            }
            let c = ca.mul(cb);
            acc.entry(Reverse(e))
                .and_modify(|x| *x = x.add(&c))
                .or_insert(c);
        }
    }
    acc.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(Reverse(e), c)| (e, c))
        .collect()
}

pub(crate) fn mul<F: Field>(a: &[Term<F>], b: &[Term<F>]) -> Vec<Term<F>> {
    mul_above(a, b, &Degree::NegInfinity)
}

pub(crate) fn scale<F: Field>(a: &[Term<F>], c: &F, shift: &Exponent) -> Vec<Term<F>> {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|(e, x)| (e + shift, x.mul(c))).collect()
}

pub(crate) fn keep_above<F: Field>(a: &[Term<F>], above: &Degree) -> Vec<Term<F>> {
    a.iter().filter(|(e, _)| *above < *e).cloned().collect()
}

pub(crate) fn degree<F: Field>(a: &[Term<F>]) -> Degree {
    a.first().map_or(Degree::NegInfinity, |(e, _)| Degree::Finite(e.clone()))
}

/// Renders `c*t^(a/b)` terms joined by ` + ` / ` - `.
pub(crate) fn render<F: Field>(a: &[Term<F>], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if a.is_empty() {
        return f.write_str("0");
    }
    for (i, (e, c)) in a.iter().enumerate() {
        let negative = c.renders_negative();
        let mag = if negative { c.neg() } else { c.clone() };
        match (i, negative) {
            (0, true) => f.write_str("-")?,
            (0, false) => {}
            (_, true) => f.write_str(" - ")?,
            (_, false) => f.write_str(" + ")?,
        }
        if e.is_zero() {
            write!(f, "{}", mag)?;
            continue;
        }
        if !mag.is_one() {
            write!(f, "{}*", mag)?;
        }
        if *e == Exponent::one() {
            f.write_str("t")?;
        } else {
            write!(f, "t^({})", e)?;
        }
    }
    Ok(())
}

#[cfg(test)]
pub(crate) struct Rendered<'a, F>(pub &'a [Term<F>]);

#[cfg(test)]
impl<F: Field> fmt::Display for Rendered<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        render(self.0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::q;
    use crate::field::Rational;
    use alloc::format;
    use alloc::vec;

    fn r(n: i64) -> Rational {
        Rational::new(n, 1)
    }

    #[test]
    fn normalize_merges_and_drops_zeros() {
        let t = normalize(vec![(q(1, 2), r(1)), (q(1, 1), r(2)), (q(1, 2), r(-1))]);
        assert_eq!(t, vec![(q(1, 1), r(2))]);
    }

    #[test]
    fn truncated_product() {
        // (t + 1)(t - 1) = t^2 - 1, keep exponents > 0
        let a = vec![(q(1, 1), r(1)), (q(0, 1), r(1))];
        let b = vec![(q(1, 1), r(1)), (q(0, 1), r(-1))];
        assert_eq!(mul(&a, &b), vec![(q(2, 1), r(1)), (q(0, 1), r(-1))]);
        assert_eq!(mul_above(&a, &b, &Degree::Finite(q(0, 1))), vec![(q(2, 1), r(1))]);
    }

    #[test]
    fn rendering() {
        let a = vec![(q(3, 2), r(1)), (q(1, 2), r(2)), (q(0, 1), r(-5))];
        assert_eq!(format!("{}", Rendered(&a)), "t^(3/2) + 2*t^(1/2) - 5");
        let b = vec![(q(1, 1), Rational::new(-1, 2)), (q(-1, 3), r(1))];
        assert_eq!(format!("{}", Rendered(&b)), "-1/2*t + t^(-1/3)");
    }
}
