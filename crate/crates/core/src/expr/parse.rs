//! Recursive-descent parser.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := "-" factor | base ("^" intlit)?
//! base   := numlit | "x" | ident "(" expr ")" | "(" expr ")"
//! numlit := int | int "/" int
//! intlit := "-"? int
//! ```

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Builtin, Expr, ParseError};
use crate::lc::Rational;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Bad(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: usize,
    text: String,
}

fn tokenize(src: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            out.push(Token { tok, pos, text: c.to_string() });
            continue;
        }
        let mut end = pos;
        if c.is_ascii_digit() {
            while let Some(&(i, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                end = i + d.len_utf8();
                chars.next();
            }
            let text = &src[pos..end];
            out.push(Token { tok: Tok::Int(text.parse().expect("digits")), pos, text: text.into() });
        } else if c.is_alphabetic() || c == '_' {
            while let Some(&(i, d)) = chars.peek() {
                if !(d.is_alphanumeric() || d == '_') {
                    break;
                }
                end = i + d.len_utf8();
                chars.next();
            }
            let text = &src[pos..end];
            out.push(Token { tok: Tok::Ident(text.into()), pos, text: text.into() });
        } else {
            chars.next();
            out.push(Token { tok: Tok::Bad(c), pos, text: c.to_string() });
        }
    }
    out.push(Token { tok: Tok::End, pos: src.len(), text: "end of input".into() });
    out
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.at + offset).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn fail(&self, expected: &str) -> ParseError {
        let t = &self.tokens[self.at];
        ParseError { position: t.pos, expected: expected.into(), found: t.text.clone() }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.fail(expected))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::add(lhs, self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::mul(lhs, self.factor()?);
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::div(lhs, self.factor()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::neg(self.factor()?));
        }
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let Tok::Int(n) = self.peek().clone() else {
            return Err(self.fail("integer literal exponent"));
        };
        let n: i64 = i64::try_from(n).map_err(|_| self.fail("exponent that fits in 64 bits"))?;
        self.bump();
        Ok(Expr::powi(base, if negative { -n } else { n }))
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                if *self.peek() == Tok::Slash {
                    if let Tok::Int(d) = self.peek_at(1).clone() {
                        if d.is_zero() {
                            self.bump();
                            return Err(self.fail("nonzero denominator"));
                        }
                        self.bump();
                        self.bump();
                        return Ok(Expr::Const(Rational::new(n, d)));
                    }
                }
                Ok(Expr::Const(Rational::from_integer(n)))
            }
            Tok::Ident(name) if name == "x" => {
                self.bump();
                Ok(Expr::Var)
            }
            Tok::Ident(name) => {
                let Some(f) = Builtin::from_name(&name) else {
                    return Err(self.fail("variable x or one of exp, ln, sin, cos, sqrt"));
                };
                self.bump();
                self.expect(Tok::LParen, "'(' after function name")?;
                let arg = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Expr::call(f, arg))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(self.fail("number, x, function call or '('")),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { tokens: tokenize(src), at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.fail("operator or end of input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lc::ratio;

    #[test]
    fn grammar_examples() {
        assert_eq!(
            parse("x^2 + 3*x").unwrap(),
            Expr::add(Expr::powi(Expr::Var, 2), Expr::mul(Expr::int(3), Expr::Var))
        );
        assert_eq!(parse("sin(x)/x").unwrap(), Expr::div(Expr::call(Builtin::Sin, Expr::Var), Expr::Var));
        let err = parse("x ^ y").unwrap_err();
        assert_eq!(err.position, 4);
        assert_eq!(err.found, "y");
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(parse("-x^2").unwrap(), Expr::neg(Expr::powi(Expr::Var, 2)));
        assert_eq!(parse("1 - x - 2").unwrap(), Expr::sub(Expr::sub(Expr::int(1), Expr::Var), Expr::int(2)));
        assert_eq!(parse("x/2/x").unwrap(), Expr::div(Expr::div(Expr::Var, Expr::int(2)), Expr::Var));
        assert_eq!(parse("x^-2").unwrap(), Expr::powi(Expr::Var, -2));
        assert_eq!(parse("x*-x").unwrap(), Expr::mul(Expr::Var, Expr::neg(Expr::Var)));
    }

    #[test]
    fn rational_literals() {
        assert_eq!(parse("1/2*x").unwrap(), Expr::mul(Expr::Const(ratio(1, 2)), Expr::Var));
        assert_eq!(parse("1 / x").unwrap(), Expr::div(Expr::int(1), Expr::Var));
        assert_eq!(parse("6/4").unwrap(), Expr::Const(ratio(3, 2)));
        assert_eq!(parse("1/0").unwrap_err().position, 2);
    }

    #[test]
    fn errors() {
        let err = parse("x^^2").unwrap_err();
        assert_eq!((err.position, err.found.as_str()), (2, "^"));
        assert_eq!(parse("tan(x)").unwrap_err().found, "tan");
        assert_eq!(parse("y + 1").unwrap_err().position, 0);
        assert_eq!(parse("(x + 1").unwrap_err().found, "end of input");
        assert_eq!(parse("x x").unwrap_err().position, 2);
        assert_eq!(parse("x^2^3").unwrap_err().position, 3);
        assert_eq!(parse("2.5*x").unwrap_err().found, ".");
        assert_eq!(parse("").unwrap_err().position, 0);
    }
}
