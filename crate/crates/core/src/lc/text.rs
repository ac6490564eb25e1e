//! Canonical text form: terms sorted by exponent, e.g.
//! `3 + 2*eps - 1/2*eps^3`, with infinite orders written `eps^-2`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::coeff::{format_float, format_rational, rational_to_f64, Coefficient, Mode, Rational};
use super::number::{LcNumber, DEFAULT_WINDOW};
use super::LcError;

fn write_term(f: &mut fmt::Formatter<'_>, exp: i64, magnitude: &Coefficient) -> fmt::Result {
    let unit = matches!(magnitude, Coefficient::Exact(q) if q == &Rational::from_integer(1.into()));
    let coeff = match magnitude {
        Coefficient::Exact(q) => format_rational(q),
        Coefficient::Float(x) => format_float(*x),
    };
    match exp {
        0 => f.write_str(&coeff),
        _ => {
            if !unit {
                write!(f, "{coeff}*")?;
            }
            if exp == 1 {
                f.write_str("eps")
            } else {
                write!(f, "eps^{exp}")
            }
        }
    }
}

impl fmt::Display for LcNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return f.write_str(match self.mode() {
                Mode::Exact => "0",
                Mode::Float => "0.0",
            });
        }
        for (i, (exp, c)) in terms.iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let magnitude = if negative { c.neg() } else { c.clone() };
            write_term(f, *exp, &magnitude)?;
        }
        Ok(())
    }
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

enum Number {
    Exact(Rational),
    Float(f64),
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn error(&self, expected: &str) -> LcError {
        let found = match self.peek() {
            None => "end of input".to_string(),
            Some(_) => self.src[self.pos..].split_whitespace().next().unwrap_or("").to_string(),
        };
        LcError::Parse { position: self.pos, expected: expected.to_string(), found }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.src[start..self.pos])
    }

    /// Unsigned number: `digits`, `digits/digits`, or a decimal with an
    /// optional exponent. Decimals are floats unless `decimals_exact`.
    fn number(&mut self, decimals_exact: bool) -> Result<Number, LcError> {
        let start = self.pos;
        let Some(int_part) = self.digits() else {
            return Err(self.error("number"));
        };
        let mut is_decimal = false;
        if self.peek() == Some('.') {
            self.pos += 1;
            if self.digits().is_none() {
                return Err(self.error("digits after decimal point"));
            }
            is_decimal = true;
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let rest = &self.src[self.pos + 1..];
            let signed = rest.starts_with(['+', '-']) && rest[1..].starts_with(|c: char| c.is_ascii_digit());
            if rest.starts_with(|c: char| c.is_ascii_digit()) || signed {
                self.pos += if signed { 2 } else { 1 };
                self.digits();
                is_decimal = true;
            }
        }
        let text = &self.src[start..self.pos];
        if is_decimal {
            let value: f64 = text.parse().map_err(|_| LcError::Parse {
                position: start,
                expected: "decimal number".into(),
                found: text.into(),
            })?;
            if !value.is_finite() {
                return Err(LcError::NonFinite);
            }
            return Ok(if decimals_exact {
                Number::Exact(Rational::from_float(value).ok_or(LcError::NonFinite)?)
            } else {
                Number::Float(value)
            });
        }
        let numer: BigInt = int_part.parse().expect("digits");
        let save = self.pos;
        self.skip_ws();
        if self.eat('/') {
            self.skip_ws();
            let denom_at = self.pos;
            let Some(denom) = self.digits() else {
                return Err(self.error("denominator"));
            };
            let denom: BigInt = denom.parse().expect("digits");
            if denom.is_zero() {
                return Err(LcError::Parse {
                    position: denom_at,
                    expected: "nonzero denominator".into(),
                    found: "0".into(),
                });
            }
            return Ok(Number::Exact(Rational::new(numer, denom)));
        }
        self.pos = save;
        Ok(Number::Exact(Rational::from_integer(numer)))
    }

    fn eps_power(&mut self) -> Result<Option<i64>, LcError> {
        if !self.src[self.pos..].starts_with("eps") {
            return Ok(None);
        }
        self.pos += 3;
        let save = self.pos;
        self.skip_ws();
        if !self.eat('^') {
            self.pos = save;
            return Ok(Some(1));
        }
        self.skip_ws();
        let paren = self.eat('(');
        self.skip_ws();
        let negative = self.eat('-');
        let at = self.pos;
        let Some(d) = self.digits() else {
            return Err(self.error("integer exponent"));
        };
        let k: i64 = d.parse().map_err(|_| LcError::Parse {
            position: at,
            expected: "exponent in range".into(),
            found: d.into(),
        })?;
        if paren {
            self.skip_ws();
            if !self.eat(')') {
                return Err(self.error("')'"));
            }
        }
        Ok(Some(if negative { -k } else { k }))
    }
}

fn parse_terms(src: &str) -> Result<Vec<(i64, Number)>, LcError> {
    let mut cur = Cursor { src, pos: 0 };
    let mut out = Vec::new();
    cur.skip_ws();
    let mut negative = cur.eat('-');
    loop {
        cur.skip_ws();
        let (coeff, exp) = if let Some(k) = cur.eps_power()? {
            (Number::Exact(Rational::from_integer(1.into())), k)
        } else {
            let c = cur.number(false)?;
            cur.skip_ws();
            if cur.eat('*') {
                cur.skip_ws();
                match cur.eps_power()? {
                    Some(k) => (c, k),
                    None => return Err(cur.error("eps")),
                }
            } else {
                (c, 0)
            }
        };
        let coeff = match (coeff, negative) {
            (Number::Exact(q), true) => Number::Exact(-q),
            (Number::Float(x), true) => Number::Float(-x),
            (c, false) => c,
        };
        out.push((exp, coeff));
        cur.skip_ws();
        if cur.peek().is_none() {
            return Ok(out);
        }
        negative = if cur.eat('+') {
            false
        } else if cur.eat('-') {
            true
        } else {
            return Err(cur.error("'+', '-' or end of input"));
        };
    }
}

impl LcNumber {
    /// Parse the canonical text form (any term order, repeated exponents
    /// are summed). A decimal coefficient anywhere selects float mode.
    pub fn parse(src: &str, window: u32) -> Result<LcNumber, LcError> {
        let terms = parse_terms(src)?;
        let mode = if terms.iter().any(|(_, c)| matches!(c, Number::Float(_))) {
            Mode::Float
        } else {
            Mode::Exact
        };
        let coeffs = terms.into_iter().map(|(k, c)| {
            let c = match (c, mode) {
                (Number::Exact(q), Mode::Exact) => Coefficient::Exact(q),
                (Number::Exact(q), Mode::Float) => Coefficient::Float(rational_to_f64(&q)),
                (Number::Float(x), _) => Coefficient::Float(x),
            };
            (k, c)
        });
        LcNumber::from_terms_in(mode, window, coeffs)
    }
}

impl FromStr for LcNumber {
    type Err = LcError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LcNumber::parse(s, DEFAULT_WINDOW)
    }
}

/// Parse a signed rational: `3`, `-1/2`, or a decimal such as `0.25`
/// (taken as the exact binary value of the nearest double).
pub fn parse_rational(src: &str) -> Result<Rational, LcError> {
    let mut cur = Cursor { src, pos: 0 };
    cur.skip_ws();
    let negative = cur.eat('-');
    cur.skip_ws();
    let Number::Exact(q) = cur.number(true)? else {
        unreachable!("decimals parsed exactly");
    };
    cur.skip_ws();
    if cur.peek().is_some() {
        return Err(cur.error("end of input"));
    }
    Ok(if negative && q.is_positive() { -q } else { q })
}
