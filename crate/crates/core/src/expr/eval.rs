use num_traits::{One, Zero};

use super::{Builtin, Expr, ExprError};
use crate::lc::{rational_to_f64, Coefficient, LcNumber, Mode, Rational};

/// Exact value at a rational point. Builtins are rejected.
pub fn eval_rational(e: &Expr, x: &Rational) -> Result<Rational, ExprError> {
    Ok(match e {
        Expr::Const(q) => q.clone(),
        Expr::Var => x.clone(),
        Expr::Neg(a) => -eval_rational(a, x)?,
        Expr::Add(a, b) => eval_rational(a, x)? + eval_rational(b, x)?,
        Expr::Sub(a, b) => eval_rational(a, x)? - eval_rational(b, x)?,
        Expr::Mul(a, b) => eval_rational(a, x)? * eval_rational(b, x)?,
        Expr::Div(a, b) => {
            let num = eval_rational(a, x)?;
            let den = eval_rational(b, x)?;
            if den.is_zero() {
                return Err(ExprError::DivisionByZero);
            }
            num / den
        }
        Expr::PowInt(a, n) => {
            let base = eval_rational(a, x)?;
            if *n < 0 && base.is_zero() {
                return Err(ExprError::DivisionByZero);
            }
            pow_rational(&base, *n)
        }
        Expr::Call(f, _) => return Err(ExprError::TranscendentalInExactMode(*f)),
    })
}

fn pow_rational(base: &Rational, n: i64) -> Rational {
    let magnitude = u32::try_from(n.unsigned_abs()).expect("exponent too large");
    let p = num_traits::pow(base.clone(), magnitude as usize);
    if n < 0 {
        Rational::one() / p
    } else {
        p
    }
}

/// Ordinary double-precision value.
pub fn eval_f64(e: &Expr, x: f64) -> Result<f64, ExprError> {
    Ok(match e {
        Expr::Const(q) => rational_to_f64(q),
        Expr::Var => x,
        Expr::Neg(a) => -eval_f64(a, x)?,
        Expr::Add(a, b) => eval_f64(a, x)? + eval_f64(b, x)?,
        Expr::Sub(a, b) => eval_f64(a, x)? - eval_f64(b, x)?,
        Expr::Mul(a, b) => eval_f64(a, x)? * eval_f64(b, x)?,
        Expr::Div(a, b) => {
            let num = eval_f64(a, x)?;
            let den = eval_f64(b, x)?;
            if den == 0.0 {
                return Err(ExprError::DivisionByZero);
            }
            num / den
        }
        Expr::PowInt(a, n) => {
            let base = eval_f64(a, x)?;
            if *n < 0 && base == 0.0 {
                return Err(ExprError::DivisionByZero);
            }
            base.powi(i32::try_from(*n).expect("exponent too large"))
        }
        Expr::Call(f, a) => f.eval_f64(eval_f64(a, x)?)?,
    })
}

/// Value at an LC argument, with the same rules as for ordinary numbers.
///
/// Constants are embedded in the argument's mode and window. In float mode
/// a builtin `f` at `a + u` (a appreciable, u infinitesimal) expands as
/// `Σ f⁽ʲ⁾(a)/j! · uʲ`; exact mode rejects builtins. Dividing by a nonzero
/// infinitesimal is legal and produces an infinite value.
pub fn eval_lc(e: &Expr, x: &LcNumber) -> Result<LcNumber, ExprError> {
    let window = x.window();
    let mode = x.mode();
    let constant = |q: &Rational| -> Result<LcNumber, ExprError> {
        let c = Coefficient::Exact(q.clone()).convert(mode)?;
        Ok(LcNumber::from_coefficient(c).with_window(window)?)
    };
    Ok(match e {
        Expr::Const(q) => constant(q)?,
        Expr::Var => x.clone(),
        Expr::Neg(a) => eval_lc(a, x)?.neg_value(),
        Expr::Add(a, b) => eval_lc(a, x)?.try_add(&eval_lc(b, x)?)?,
        Expr::Sub(a, b) => eval_lc(a, x)?.try_sub(&eval_lc(b, x)?)?,
        Expr::Mul(a, b) => eval_lc(a, x)?.try_mul(&eval_lc(b, x)?)?,
        Expr::Div(a, b) => eval_lc(a, x)?.try_div(&eval_lc(b, x)?)?,
        Expr::PowInt(a, n) => eval_lc(a, x)?.try_powi(*n)?,
        Expr::Call(f, a) => {
            if mode == Mode::Exact {
                return Err(ExprError::TranscendentalInExactMode(*f));
            }
            expand_builtin(*f, &eval_lc(a, x)?)?
        }
    })
}

fn expand_builtin(f: Builtin, arg: &LcNumber) -> Result<LcNumber, ExprError> {
    if arg.ord().finite().is_some_and(|k| k < 0) {
        return Err(ExprError::Domain { builtin: f, detail: format!("argument {arg} is infinite") });
    }
    let window = arg.window();
    let a = arg.coeff(0).to_f64();
    let u = arg.filter_terms(|k| k > 0);
    // a result of positive order still needs its full window of terms
    let n = 2 * window as usize;
    let coeffs = f.taylor_coefficients(a, n)?;
    let mut acc = LcNumber::zero(Mode::Float).with_window(window)?;
    for c in coeffs.iter().rev() {
        acc = acc.try_mul(&u)?.try_add(&LcNumber::from_f64(*c).with_window(window)?)?;
    }
    Ok(acc)
}
