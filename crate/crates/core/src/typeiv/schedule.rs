use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::exponent::Exponent;

/// A sequence of positive rationals `r(1), r(2), ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Schedule {
    /// `r(i) = ratio^i`.
    Geometric(Exponent),
    /// `r(i) = 1/i`.
    Harmonic,
    Constant(Exponent),
    /// Finitely many values; `term` is `None` past the end.
    List(Vec<Exponent>),
}

impl Schedule {
    /// `r(i)`, `i >= 1`.
    pub fn term(&self, i: usize) -> Option<Exponent> {
        assert!(i >= 1, "schedules start at index 1");
        match self {
            Schedule::Geometric(ratio) => Some((1..i).fold(ratio.clone(), |acc, _| acc * ratio)),
            Schedule::Harmonic => Some(Exponent::new(1, i as i64)),
            Schedule::Constant(c) => Some(c.clone()),
            Schedule::List(v) => v.get(i - 1).cloned(),
        }
    }

    /// `r(1) + r(2) + ...` when the sum is finite; `None` when it diverges.
    pub fn sum_limit(&self) -> Option<Exponent> {
        match self {
            Schedule::Geometric(ratio) if ratio.is_positive() && *ratio < Exponent::one() => {
                let r = ratio.as_ratio();
                Some(Exponent::from_ratio(r / (Exponent::one() - ratio).as_ratio()))
            }
            Schedule::List(v) => Some(v.iter().fold(Exponent::zero(), |s, e| s + e)),
            _ => None,
        }
    }

    /// All values positive; for lists every entry is checked.
    pub fn check_positive(&self) -> Result<()> {
        let bad = |i: usize| Err(Error::domain(alloc::format!("schedule value r({}) is not positive", i)));
        match self {
            Schedule::Geometric(r) | Schedule::Constant(r) if !r.is_positive() => bad(1),
            Schedule::List(v) => match v.iter().position(|e| !e.is_positive()) {
                Some(k) => bad(k + 1),
                None => Ok(()),
            },
            _ => Ok(()),
        }
    }

    /// Strictly decreasing and positive.
    pub fn check_strictly_decreasing(&self) -> Result<()> {
        self.check_positive()?;
        match self {
            Schedule::Harmonic => Ok(()),
            Schedule::Geometric(r) if *r < Exponent::one() => Ok(()),
            Schedule::Geometric(_) | Schedule::Constant(_) => Err(Error::NonDecreasing { index: 2 }),
            Schedule::List(v) => match v.windows(2).position(|w| w[1] >= w[0]) {
                Some(k) => Err(Error::NonDecreasing { index: k + 2 }),
                None => Ok(()),
            },
        }
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schedule::Geometric(r) => write!(f, "geom:{}", r),
            Schedule::Harmonic => f.write_str("harm"),
            Schedule::Constant(c) => write!(f, "const:{}", c),
            Schedule::List(v) => {
                f.write_str("list:")?;
                for (k, e) in v.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}", e)?;
                }
                Ok(())
            }
        }
    }
}

/// `geom:<ratio>`, `harm`, `const:<value>`, `list:<v1>,<v2>,...`.
impl FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let value = |v: &str, at: usize| {
            v.trim().parse::<Exponent>().map_err(|_| Error::Parse {
                position: at,
                message: alloc::format!("expected a rational, found {:?}", v),
            })
        };
        if s == "harm" {
            return Ok(Schedule::Harmonic);
        }
        if let Some(rest) = s.strip_prefix("geom:") {
            return Ok(Schedule::Geometric(value(rest, 5)?));
        }
        if let Some(rest) = s.strip_prefix("const:") {
            return Ok(Schedule::Constant(value(rest, 6)?));
        }
        if let Some(rest) = s.strip_prefix("list:") {
            let mut out = Vec::new();
            let mut at = 5;
            for part in rest.split(',') {
                out.push(value(part, at)?);
                at += part.len() + 1;
            }
            return Ok(Schedule::List(out));
        }
        Err(Error::Parse {
            position: 0,
            message: alloc::format!("unknown schedule {:?} (expected geom:, harm, const: or list:)", s),
        })
    }
}
