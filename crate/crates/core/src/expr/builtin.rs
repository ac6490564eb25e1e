use std::fmt;

use serde::Serialize;

use super::{Expr, ExprError};

/// The fixed set of transcendental functions. Derivatives and Taylor
/// coefficients both come from this one table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Builtin {
    Exp,
    Ln,
    Sin,
    Cos,
    Sqrt,
}

impl Builtin {
    pub const ALL: [Builtin; 5] = [Builtin::Exp, Builtin::Ln, Builtin::Sin, Builtin::Cos, Builtin::Sqrt];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Exp => "exp",
            Builtin::Ln => "ln",
            Builtin::Sin => "sin",
            Builtin::Cos => "cos",
            Builtin::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Builtin> {
        Builtin::ALL.into_iter().find(|b| b.name() == name)
    }

    fn domain_error(self, detail: impl Into<String>) -> ExprError {
        ExprError::Domain { builtin: self, detail: detail.into() }
    }

    /// Check the argument for the LC evaluation rule, which expands around
    /// the appreciable part `a` and needs `a > 0` for ln and sqrt.
    pub(crate) fn check_expansion_point(self, a: f64) -> Result<(), ExprError> {
        match self {
            Builtin::Ln | Builtin::Sqrt if a <= 0.0 => {
                Err(self.domain_error(format!("appreciable part {a:?} is not positive")))
            }
            _ => Ok(()),
        }
    }

    pub fn eval_f64(self, a: f64) -> Result<f64, ExprError> {
        let v = match self {
            Builtin::Exp => a.exp(),
            Builtin::Sin => a.sin(),
            Builtin::Cos => a.cos(),
            Builtin::Ln if a <= 0.0 => return Err(self.domain_error(format!("argument {a:?} is not positive"))),
            Builtin::Ln => a.ln(),
            Builtin::Sqrt if a < 0.0 => return Err(self.domain_error(format!("argument {a:?} is negative"))),
            Builtin::Sqrt => a.sqrt(),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(self.domain_error(format!("result at {a:?} is not finite")))
        }
    }

    /// `f′(arg)` as an expression.
    pub fn derivative(self, arg: Expr) -> Expr {
        match self {
            Builtin::Exp => Expr::call(Builtin::Exp, arg),
            Builtin::Sin => Expr::call(Builtin::Cos, arg),
            Builtin::Cos => Expr::neg(Expr::call(Builtin::Sin, arg)),
            Builtin::Ln => Expr::div(Expr::int(1), arg),
            Builtin::Sqrt => Expr::div(Expr::int(1), Expr::mul(Expr::int(2), Expr::call(Builtin::Sqrt, arg))),
        }
    }

    /// `f⁽ʲ⁾(a)/j!` for `j < n`.
    pub fn taylor_coefficients(self, a: f64, n: usize) -> Result<Vec<f64>, ExprError> {
        self.check_expansion_point(a)?;
        let mut out = Vec::with_capacity(n);
        match self {
            Builtin::Exp => {
                let mut c = a.exp();
                for j in 0..n {
                    if j > 0 {
                        c /= j as f64;
                    }
                    out.push(c);
                }
            }
            Builtin::Sin | Builtin::Cos => {
                let (s, c) = a.sin_cos();
                // derivative cycle starting at sin: sin, cos, -sin, -cos
                let cycle = [s, c, -s, -c];
                let offset = if self == Builtin::Sin { 0 } else { 1 };
                let mut factorial = 1.0;
                for j in 0..n {
                    if j > 0 {
                        factorial *= j as f64;
                    }
                    out.push(cycle[(j + offset) % 4] / factorial);
                }
            }
            Builtin::Ln => {
                out.push(a.ln());
                for j in 1..n {
                    let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
                    out.push(sign / (j as f64 * a.powi(j as i32)));
                }
            }
            Builtin::Sqrt => {
                let mut c = a.sqrt();
                for j in 0..n {
                    if j > 0 {
                        let j = j as f64;
                        c *= (1.5 - j) / (j * a);
                    }
                    out.push(c);
                }
            }
        }
        out.truncate(n);
        Ok(out)
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(j: usize) -> f64 {
        (1..=j).map(|k| k as f64).product()
    }

    #[test]
    fn exp_coefficients_are_inverse_factorials() {
        let c = Builtin::Exp.taylor_coefficients(0.0, 8).unwrap();
        for (j, cj) in c.iter().enumerate() {
            assert!((cj - 1.0 / factorial(j)).abs() < 1e-15);
        }
    }

    #[test]
    fn low_order_coefficients_match_central_differences() {
        // c_1 = f'(a) and 2·c_2 = f''(a), against central differences of f
        let h = 1e-5;
        for f in Builtin::ALL {
            let a = 1.3;
            let c = f.taylor_coefficients(a, 3).unwrap();
            let fd = (f.eval_f64(a + h).unwrap() - f.eval_f64(a - h).unwrap()) / (2.0 * h);
            assert!((c[1] - fd).abs() < 1e-8, "{f}: {} vs {fd}", c[1]);
            let fd2 = (f.eval_f64(a + h).unwrap() - 2.0 * f.eval_f64(a).unwrap() + f.eval_f64(a - h).unwrap()) / (h * h);
            assert!((2.0 * c[2] - fd2).abs() < 1e-4, "{f}: {} vs {fd2}", 2.0 * c[2]);
        }
    }

    #[test]
    fn sqrt_series() {
        // sqrt(1+u) = 1 + u/2 - u²/8 + u³/16 - ...
        let c = Builtin::Sqrt.taylor_coefficients(1.0, 4).unwrap();
        assert_eq!(c, vec![1.0, 0.5, -0.125, 0.0625]);
        assert!(Builtin::Sqrt.taylor_coefficients(0.0, 4).is_err());
        assert!(Builtin::Ln.taylor_coefficients(-1.0, 4).is_err());
    }

    #[test]
    fn names_round_trip() {
        for f in Builtin::ALL {
            assert_eq!(Builtin::from_name(f.name()), Some(f));
        }
        assert_eq!(Builtin::from_name("tan"), None);
    }
}
