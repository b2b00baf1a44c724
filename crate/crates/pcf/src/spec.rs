//! Stream specifications: `rat:<value>`, `sqrt:<value>`, `cf:<literal>`,
//! `e69[:<schedule>]`, `iva:<schedule>:<bound>`, or a bare value.

use puiseux_cf::cf::{cf_value_stream, unroll, ContinuedFraction};
use puiseux_cf::typeiv::Schedule;
use puiseux_cf::{sqrt_stream, Error, Exponent, Field, PuiseuxPoly, RationalPuiseux, Result, SeriesStream};

use crate::parse::{parse_cf, parse_rational, parse_value, CfLiteral};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Spec<F: Field> {
    Rational(RationalPuiseux<F>),
    Sqrt(RationalPuiseux<F>),
    Cf(CfLiteral<F>),
    E69(Schedule),
    Iva { schedule: Schedule, bound: Exponent },
}

/// Shifts parse positions past a prefix such as `sqrt:`.
fn offset<T>(r: Result<T>, by: usize) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { position, message } => Error::Parse {
            position: position + by,
            message,
        },
        e => e,
    })
}

pub fn parse_spec<F: Field>(text: &str) -> Result<Spec<F>> {
    if let Some(rest) = text.strip_prefix("rat:") {
        return offset(parse_value(rest), 4).map(Spec::Rational);
    }
    if let Some(rest) = text.strip_prefix("sqrt:") {
        return offset(parse_value(rest), 5).map(Spec::Sqrt);
    }
    if let Some(rest) = text.strip_prefix("cf:") {
        return offset(parse_cf(rest), 3).map(Spec::Cf);
    }
    if text.trim_start().starts_with('[') {
        return parse_cf(text).map(Spec::Cf);
    }
    if text == "e69" {
        return Ok(Spec::E69(Schedule::Harmonic));
    }
    if let Some(rest) = text.strip_prefix("e69:") {
        return offset(rest.parse(), 4).map(Spec::E69);
    }
    if let Some(rest) = text.strip_prefix("iva:") {
        let Some(split) = rest.rfind(':') else {
            return Err(Error::Parse {
                position: text.len(),
                message: "expected iva:<schedule>:<bound>".into(),
            });
        };
        let schedule = offset(rest[..split].parse(), 4)?;
        let bound = offset(parse_rational(&rest[split + 1..]), 5 + split)?;
        return Ok(Spec::Iva { schedule, bound });
    }
    parse_value(text).map(Spec::Rational)
}

impl<F: Field> Spec<F> {
    pub fn is_type_iv(&self) -> bool {
        matches!(self, Spec::E69(_) | Spec::Iva { .. })
    }

    /// The exact value, when the spec has one.
    pub fn exact(&self) -> Option<RationalPuiseux<F>> {
        match self {
            Spec::Rational(x) => Some(x.clone()),
            Spec::Cf(lit) if lit.is_finite() => {
                puiseux_cf::cf::evaluate_exact(&ContinuedFraction::finite(lit.prefix.clone()).ok()?).ok()
            }
            _ => None,
        }
    }

    /// The value as a lazy stream. `budget` bounds the quotients read from
    /// periodic literals and the terms of `e69` sums.
    pub fn stream(&self, budget: usize) -> Result<SeriesStream<F>> {
        if let Some(x) = self.exact() {
            return Ok(SeriesStream::from_rational(&x));
        }
        match self {
            Spec::Sqrt(x) => Ok(sqrt_stream(&SeriesStream::from_rational(x))),
            Spec::Cf(lit) if !lit.period.is_empty() => {
                let (pre, per) = (lit.prefix.clone(), lit.period.clone());
                Ok(cf_value_stream(
                    move |n| unroll(&pre, &per, n + 1).pop(),
                    budget,
                ))
            }
            Spec::Cf(_) => Err(Error::Domain(
                "an open-ended prefix `...` has no value; give a finite or periodic literal".into(),
            )),
            Spec::E69(s) => {
                // the "fake limit" t^{r(1)} + t^{r(2)} + ...; its exponents
                // never pass below 0, so reads are capped by the budget
                let s = s.clone();
                let mut i = 0;
                let source = move || -> Result<Option<puiseux_cf::Term<F>>> {
                    i += 1;
                    Ok(s.term(i).map(|e| (e, F::one())))
                };
                Ok(SeriesStream::from_source(source).with_budget(budget))
            }
            Spec::Iva { schedule, .. } => {
                let s = schedule.clone();
                Ok(cf_value_stream(
                    move |n| match n {
                        0 => Some(PuiseuxPoly::zero()),
                        _ => s.term(n).map(PuiseuxPoly::t_pow),
                    },
                    budget,
                ))
            }
            Spec::Rational(_) => unreachable!("exact"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use puiseux_cf::{q, Rational};

    #[test]
    fn kinds() {
        assert!(matches!(parse_spec::<Rational>("sqrt:t+1").unwrap(), Spec::Sqrt(_)));
        assert!(matches!(parse_spec::<Rational>("rat:(t)/(t+1)").unwrap(), Spec::Rational(_)));
        assert!(matches!(parse_spec::<Rational>("t^(2) + 1").unwrap(), Spec::Rational(_)));
        assert!(matches!(parse_spec::<Rational>("cf:[t; t]").unwrap(), Spec::Cf(_)));
        assert_eq!(parse_spec::<Rational>("e69").unwrap(), Spec::E69(Schedule::Harmonic));
        assert_eq!(
            parse_spec::<Rational>("iva:geom:1/2:1").unwrap(),
            Spec::Iva {
                schedule: Schedule::Geometric(q(1, 2)),
                bound: q(1, 1)
            }
        );
    }

    #[test]
    fn positions_are_global() {
        match parse_spec::<Rational>("sqrt:t+x") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 7),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn periodic_literal_matches_sqrt() {
        let a = parse_spec::<Rational>("cf:[t^(1/2) | 2*t^(1/2)]").unwrap().stream(100).unwrap();
        let b = parse_spec::<Rational>("sqrt:t").unwrap().stream(100).unwrap();
        // sqrt(t) + ... has expansion [t^(1/2)] so compare with sqrt(t + 1)
        let c = parse_spec::<Rational>("sqrt:t+1").unwrap().stream(100).unwrap();
        let cut = q(-6, 1);
        assert_eq!(a.truncate(&cut).unwrap(), c.truncate(&cut).unwrap());
        assert_ne!(a.truncate(&cut).unwrap(), b.truncate(&cut).unwrap());
    }

    #[test]
    fn e69_stream_hits_budget() {
        let s = parse_spec::<Rational>("e69").unwrap().stream(20).unwrap();
        assert!(matches!(s.truncate(&q(-1, 1)), Err(Error::BudgetExhausted { .. })));
    }
}
