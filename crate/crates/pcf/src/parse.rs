//! Parsers for the textual forms printed by the library.
//!
//! ```text
//! expr  := ['+'|'-'] term (('+'|'-') term)*
//! term  := coeff ['*' tpow] | tpow
//! coeff := int ['/' int]
//! tpow  := 't' ['^' ('(' rat ')' | int)]
//! value := '(' expr ')' ['/' '(' expr ')'] | expr
//! cf    := '[' value? (';' value (',' value)*)? ('|' value (',' value)*)? [', ...'] ']'
//! point := 'eta(' value ',' rat ')'
//! ball  := ('ballo' | 'ballc') '(' value ',' rat ')'
//! word  := gen ('*' gen)* | 'id'
//! gen   := 'i' | 't(' value ')' | 'm(' value ',' value ',' value ')'
//! ```
//!
//! Negative exponents are accepted in `expr`; such values are read as
//! fractions with a power of `t` below.

use num_bigint::BigInt;
use puiseux_cf::berkovich::{Ball, BallKind, BerkPoint, Generator, MobiusElt};
use puiseux_cf::{Error, Exponent, Field, PuiseuxPoly, RationalPuiseux, Result, Term};

pub struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.into(),
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = self.peek().map_or("end of input".to_string(), |f| format!("{:?}", f));
            Err(self.error(format!("expected {:?}, found {}", c, found)))
        }
    }

    pub fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.error(format!("unexpected {:?}", c))),
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let n = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if n == 0 {
            return Err(self.error("expected an integer"));
        }
        let v = self.rest()[..n].parse().expect("digits");
        self.pos += n;
        Ok(v)
    }

    fn int(&mut self) -> Result<BigInt> {
        let neg = self.eat('-');
        let v = self.digits()?;
        Ok(if neg { -v } else { v })
    }

    /// `a` or `a/b`, `a` possibly negative.
    pub fn rational(&mut self) -> Result<Exponent> {
        let n = self.int()?;
        let d = if self.eat('/') { self.digits()? } else { BigInt::from(1) };
        if d == BigInt::from(0) {
            return Err(self.error("zero denominator"));
        }
        Ok(Exponent::new(n, d))
    }

    fn tpow(&mut self) -> Result<Exponent> {
        self.expect('t')?;
        if !self.eat('^') {
            return Ok(Exponent::one());
        }
        if self.eat('(') {
            let e = self.rational()?;
            self.expect(')')?;
            Ok(e)
        } else {
            Ok(Exponent::new(self.int()?, 1))
        }
    }

    fn coefficient<F: Field>(&mut self) -> Result<F> {
        let at = self.pos;
        let n = self.digits()?;
        let d = if self.rest().starts_with('/') && !self.rest().starts_with("/(") {
            self.pos += 1;
            self.digits()?
        } else {
            BigInt::from(1)
        };
        F::from_bigint(&n).div(&F::from_bigint(&d)).ok_or(Error::Parse {
            position: at,
            message: "coefficient denominator vanishes in the field".into(),
        })
    }

    fn term<F: Field>(&mut self) -> Result<Term<F>> {
        match self.peek() {
            Some('t') => Ok((self.tpow()?, F::one())),
            Some(c) if c.is_ascii_digit() => {
                let c = self.coefficient()?;
                let e = if self.eat('*') { self.tpow()? } else { Exponent::zero() };
                Ok((e, c))
            }
            Some(c) => Err(self.error(format!("expected a term, found {:?}", c))),
            None => Err(self.error("expected a term, found end of input")),
        }
    }

    /// A sum of monomials.
    pub fn expr<F: Field>(&mut self) -> Result<Vec<Term<F>>> {
        let mut out = Vec::new();
        let mut neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            let (e, c) = self.term::<F>()?;
            out.push((e, if neg { c.neg() } else { c }));
            if self.eat('+') {
                neg = false;
            } else if self.eat('-') {
                neg = true;
            } else {
                return Ok(out);
            }
        }
    }

    pub fn value<F: Field>(&mut self) -> Result<RationalPuiseux<F>> {
        let at = self.pos;
        if !self.eat('(') {
            return laurent(self.expr()?);
        }
        let num = laurent(self.expr()?)?;
        self.expect(')')?;
        if !self.eat('/') {
            return Ok(num);
        }
        self.expect('(')?;
        let den = laurent(self.expr()?)?;
        self.expect(')')?;
        num.div(&den).map_err(|_| Error::Parse {
            position: at,
            message: "zero denominator".into(),
        })
    }

    pub fn poly<F: Field>(&mut self) -> Result<PuiseuxPoly<F>> {
        let at = self.pos;
        let v = self.value::<F>()?;
        v.as_poly().cloned().ok_or(Error::Parse {
            position: at,
            message: format!("{} is not a Puiseux polynomial", v),
        })
    }

    pub fn cf<F: Field>(&mut self) -> Result<CfLiteral<F>> {
        self.expect('[')?;
        let mut lit = CfLiteral {
            prefix: Vec::new(),
            period: Vec::new(),
            open: false,
        };
        if self.eat_str("...") {
            lit.open = true;
            self.expect(']')?;
            return Ok(lit);
        }
        lit.prefix.push(self.poly()?);
        let mut in_period = false;
        let mut sep = self.eat(';');
        loop {
            if !sep {
                if self.eat('|') {
                    in_period = true;
                } else if !self.eat(',') {
                    break;
                }
            }
            sep = false;
            if self.eat_str("...") {
                lit.open = true;
                break;
            }
            if self.peek() == Some(']') {
                break;
            }
            let f = self.poly()?;
            if in_period {
                lit.period.push(f);
            } else {
                lit.prefix.push(f);
            }
        }
        self.expect(']')?;
        Ok(lit)
    }

    pub fn point<F: Field>(&mut self) -> Result<BerkPoint<F>> {
        if !self.eat_str("eta") {
            return Err(self.error("expected eta(<center>, <radius>)"));
        }
        let (c, r) = self.center_radius::<F>()?;
        BerkPoint::from_rational(&c, r)
    }

    pub fn ball<F: Field>(&mut self) -> Result<Ball<F>> {
        let kind = if self.eat_str("ballo") {
            BallKind::Open
        } else if self.eat_str("ballc") {
            BallKind::Closed
        } else {
            return Err(self.error("expected ballo(...) or ballc(...)"));
        };
        let (c, r) = self.center_radius::<F>()?;
        Ball::from_rational(&c, r, kind)
    }

    fn center_radius<F: Field>(&mut self) -> Result<(RationalPuiseux<F>, Exponent)> {
        self.expect('(')?;
        let c = self.value()?;
        self.expect(',')?;
        let r = self.rational()?;
        self.expect(')')?;
        Ok((c, r))
    }

    fn generator<F: Field>(&mut self) -> Result<Generator<F>> {
        let at = self.pos;
        if self.eat_str("m(") {
            let d1 = self.value()?;
            self.expect(',')?;
            let d2 = self.value()?;
            self.expect(',')?;
            let f = self.value()?;
            self.expect(')')?;
            return Generator::m(d1, d2, f).map_err(|_| Error::Parse {
                position: at,
                message: "m(d1, d2, f) needs nonzero d1 and d2".into(),
            });
        }
        if self.eat_str("t(") {
            let f = self.poly()?;
            self.expect(')')?;
            return Ok(Generator::T(f));
        }
        if self.eat('i') {
            return Ok(Generator::I);
        }
        Err(self.error("expected a generator i, t(<poly>) or m(<d1>, <d2>, <f>)"))
    }

    pub fn word<F: Field>(&mut self) -> Result<MobiusElt<F>> {
        if self.eat_str("id") {
            return Ok(MobiusElt::identity());
        }
        let mut word = vec![self.generator()?];
        while self.eat('*') {
            word.push(self.generator()?);
        }
        Ok(MobiusElt::from_word(word))
    }
}

/// Reads a sum with possibly negative exponents as a fraction.
fn laurent<F: Field>(terms: Vec<Term<F>>) -> Result<RationalPuiseux<F>> {
    let low = terms
        .iter()
        .map(|(e, _)| e.clone())
        .min()
        .unwrap_or_else(Exponent::zero);
    if !low.is_negative() {
        return Ok(RationalPuiseux::from_poly(PuiseuxPoly::new(terms)?));
    }
    let shift = -low;
    let num = PuiseuxPoly::new(terms.into_iter().map(|(e, c)| (e + &shift, c)).collect())?;
    RationalPuiseux::new(&num, &PuiseuxPoly::t_pow(shift))
}

/// A continued fraction literal: a prefix, an optional repeating tail, and
/// whether it was written as open-ended with `...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfLiteral<F: Field> {
    pub prefix: Vec<PuiseuxPoly<F>>,
    pub period: Vec<PuiseuxPoly<F>>,
    pub open: bool,
}

impl<F: Field> CfLiteral<F> {
    pub fn is_finite(&self) -> bool {
        self.period.is_empty() && !self.open
    }
}

fn whole<T>(text: &str, f: impl FnOnce(&mut Cursor) -> Result<T>) -> Result<T> {
    let mut c = Cursor::new(text);
    let v = f(&mut c)?;
    c.finish()?;
    Ok(v)
}

pub fn parse_value<F: Field>(text: &str) -> Result<RationalPuiseux<F>> {
    whole(text, |c| c.value())
}

pub fn parse_poly<F: Field>(text: &str) -> Result<PuiseuxPoly<F>> {
    whole(text, |c| c.poly())
}

pub fn parse_cf<F: Field>(text: &str) -> Result<CfLiteral<F>> {
    whole(text, |c| c.cf())
}

pub fn parse_point<F: Field>(text: &str) -> Result<BerkPoint<F>> {
    whole(text, |c| c.point())
}

pub fn parse_ball<F: Field>(text: &str) -> Result<Ball<F>> {
    whole(text, |c| c.ball())
}

pub fn parse_word<F: Field>(text: &str) -> Result<MobiusElt<F>> {
    whole(text, |c| c.word())
}

pub fn parse_rational(text: &str) -> Result<Exponent> {
    whole(text, |c| c.rational())
}

#[cfg(test)]
mod tests {
    use super::*;
    use puiseux_cf::{q, Fp, Rational};

    type P = PuiseuxPoly<Rational>;

    #[test]
    fn polynomials() {
        let p: P = parse_poly("t^(3/2) + 2*t^(1/2) - 5").unwrap();
        assert_eq!(p.terms().len(), 3);
        assert_eq!(p.to_string(), "t^(3/2) + 2*t^(1/2) - 5");
        assert_eq!(parse_poly::<Rational>("-1/2*t + t^2").unwrap().to_string(), "t^(2) - 1/2*t");
        assert_eq!(parse_poly::<Rational>("0").unwrap(), P::zero());
    }

    #[test]
    fn fractions() {
        let x: RationalPuiseux<Rational> = parse_value("(t^(2)+1)/(t)").unwrap();
        assert_eq!(x.to_string(), "(t^(2) + 1)/(t)");
        let y: RationalPuiseux<Rational> = parse_value("t^(-1)").unwrap();
        assert_eq!(y, parse_value("(1)/(t)").unwrap());
        assert_eq!(
            parse_value::<Rational>("(t)/(0)").unwrap_err(),
            Error::Parse {
                position: 0,
                message: "zero denominator".into()
            }
        );
    }

    #[test]
    fn error_positions() {
        match parse_poly::<Rational>("t + 2*x") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 6),
            other => panic!("{:?}", other),
        }
        match parse_value::<Rational>("t^(1/0)") {
            Err(Error::Parse { message, .. }) => assert_eq!(message, "zero denominator"),
            other => panic!("{:?}", other),
        }
        assert!(parse_poly::<Fp<5>>("1/5*t").is_err());
    }

    #[test]
    fn prime_field_coefficients() {
        let p: PuiseuxPoly<Fp<5>> = parse_poly("1/2*t - 1").unwrap();
        assert_eq!(p.to_string(), "3*t + 4");
    }

    #[test]
    fn cf_literals() {
        let c: CfLiteral<Rational> = parse_cf("[t; t]").unwrap();
        assert!(c.is_finite());
        assert_eq!(c.prefix.len(), 2);
        let c: CfLiteral<Rational> = parse_cf("[t^(1/2); 2*t^(1/2), 2*t^(1/2), ...]").unwrap();
        assert!(c.open);
        assert_eq!(c.prefix.len(), 3);
        let c: CfLiteral<Rational> = parse_cf("[t^(1/2) | 2*t^(1/2)]").unwrap();
        assert_eq!((c.prefix.len(), c.period.len()), (1, 1));
        let c: CfLiteral<Rational> = parse_cf("[1; t | t, t^2]").unwrap();
        assert_eq!((c.prefix.len(), c.period.len()), (2, 2));
        let c: CfLiteral<Rational> = parse_cf("[...]").unwrap();
        assert!(c.prefix.is_empty() && c.open);
        assert!(parse_cf::<Rational>("[t; t").is_err());
    }

    #[test]
    fn points_balls_words() {
        let p: BerkPoint<Rational> = parse_point("eta(t + 1, -1/2)").unwrap();
        // only exponents above 1/2 matter at radius -1/2
        assert_eq!(p.to_string(), "eta(t, -1/2)");
        assert_eq!(*p.radius(), q(-1, 2));
        let b: Ball<Rational> = parse_ball("ballo(t^(-1), 2)").unwrap();
        assert_eq!(b.to_string(), "ballo(t^(-1), 2)");
        let w: MobiusElt<Rational> = parse_word("i * t(-t^(1/2)) * m(2, 1, (1)/(t))").unwrap();
        assert_eq!(w.word().len(), 3);
        assert_eq!(parse_word::<Rational>(&w.to_string()).unwrap(), w);
        assert!(parse_word::<Rational>("m(0, 1, 1)").is_err());
        assert_eq!(parse_word::<Rational>("id").unwrap(), MobiusElt::identity());
    }
}
