use std::fmt;

use num_traits::Signed;

use super::Expr;
use crate::lc::format_rational;

// binding strength, loosest first
const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const UNARY: u8 = 3;
const POWER: u8 = 4;
const ATOM: u8 = 5;

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => SUM,
        Expr::Mul(..) | Expr::Div(..) => PRODUCT,
        Expr::Neg(_) => UNARY,
        Expr::PowInt(..) => POWER,
        Expr::Const(_) | Expr::Var | Expr::Call(..) => ATOM,
    }
}

fn render(e: &Expr, min: u8) -> String {
    let body = render_bare(e);
    if level(e) < min {
        format!("({body})")
    } else {
        body
    }
}

fn render_bare(e: &Expr) -> String {
    match e {
        // only nonnegative integers print bare; everything else is
        // parenthesized so that it reads back as a single atom
        Expr::Const(q) if q.is_integer() && !q.is_negative() => format_rational(q),
        Expr::Const(q) => format!("({})", format_rational(q)),
        Expr::Var => "x".into(),
        Expr::Neg(a) => format!("-{}", render(a, UNARY)),
        Expr::Add(a, b) => format!("{} + {}", render(a, SUM), render(b, PRODUCT)),
        Expr::Sub(a, b) => format!("{} - {}", render(a, SUM), render(b, PRODUCT)),
        Expr::Mul(a, b) => format!("{}*{}", render(a, PRODUCT), render(b, UNARY)),
        Expr::Div(a, b) => {
            let mut rhs = render(b, UNARY);
            // "2/3" would read back as one rational literal
            if rhs.starts_with(|c: char| c.is_ascii_digit()) {
                rhs = format!("({rhs})");
            }
            format!("{}/{}", render(a, PRODUCT), rhs)
        }
        Expr::PowInt(a, n) => format!("{}^{}", render(a, ATOM), n),
        Expr::Call(f, a) => format!("{}({})", f.name(), render(a, SUM)),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, SUM))
    }
}
