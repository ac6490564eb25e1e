//! Single-variable arithmetic expressions: parsing, printing, and
//! evaluation over rationals, doubles and LC numbers.

mod builtin;
mod eval;
mod parse;
mod print;

pub use builtin::Builtin;
pub use eval::{eval_f64, eval_lc, eval_rational};
pub use parse::parse;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::lc::{LcError, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Const(Rational),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    PowInt(Box<Expr>, i64),
    Call(Builtin, Box<Expr>),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("at byte {position}: expected {expected}, found {found}")]
pub struct ParseError {
    pub position: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ExprError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0}() needs float mode")]
    TranscendentalInExactMode(Builtin),
    #[error("{builtin}() undefined here: {detail}")]
    Domain { builtin: Builtin, detail: String },
    #[error(transparent)]
    Lc(LcError),
}

impl From<LcError> for ExprError {
    fn from(e: LcError) -> Self {
        match e {
            LcError::DivisionByZero => ExprError::DivisionByZero,
            other => ExprError::Lc(other),
        }
    }
}

// tree constructors, not operators
#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn constant(q: Rational) -> Expr {
        Expr::Const(q)
    }

    pub fn int(n: i64) -> Expr {
        Expr::Const(crate::lc::int(n))
    }

    pub fn neg(e: Expr) -> Expr {
        Expr::Neg(Box::new(e))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn powi(a: Expr, n: i64) -> Expr {
        Expr::PowInt(Box::new(a), n)
    }

    pub fn call(f: Builtin, a: Expr) -> Expr {
        Expr::Call(f, Box::new(a))
    }

    /// True when no builtin occurs anywhere in the tree.
    pub fn is_rational_function(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var => true,
            Expr::Neg(a) | Expr::PowInt(a, _) => a.is_rational_function(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_rational_function() && b.is_rational_function()
            }
            Expr::Call(..) => false,
        }
    }

    /// True for polynomials: no builtins, no division by anything but a
    /// constant, no negative powers.
    pub fn is_polynomial(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var => true,
            Expr::Neg(a) => a.is_polynomial(),
            Expr::PowInt(a, n) => *n >= 0 && a.is_polynomial(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.is_polynomial() && b.is_polynomial(),
            Expr::Div(a, b) => a.is_polynomial() && matches!(**b, Expr::Const(_)),
            Expr::Call(..) => false,
        }
    }

    /// JSON s-expression: constants and the variable as strings, operators
    /// as `[op, args...]`.
    pub fn to_sexpr(&self) -> serde_json::Value {
        use serde_json::{json, Value};
        match self {
            Expr::Const(q) => Value::String(crate::lc::format_rational(q)),
            Expr::Var => Value::String("x".into()),
            Expr::Neg(a) => json!(["neg", a.to_sexpr()]),
            Expr::Add(a, b) => json!(["+", a.to_sexpr(), b.to_sexpr()]),
            Expr::Sub(a, b) => json!(["-", a.to_sexpr(), b.to_sexpr()]),
            Expr::Mul(a, b) => json!(["*", a.to_sexpr(), b.to_sexpr()]),
            Expr::Div(a, b) => json!(["/", a.to_sexpr(), b.to_sexpr()]),
            Expr::PowInt(a, n) => json!(["^", a.to_sexpr(), n]),
            Expr::Call(f, a) => json!([f.name(), a.to_sexpr()]),
        }
    }
}

impl Serialize for Expr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
