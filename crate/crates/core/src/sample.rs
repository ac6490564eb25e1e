//! Seeded random values for property checks and model sample sets.

use std::ops::RangeInclusive;

use rand::Rng;

use crate::expr::{Builtin, Expr};
use crate::lc::{int, ratio, Coefficient, LcNumber, Mode, Rational};

/// `p/q` with `p` in `numer` and `q` in `1..=denom_max`.
pub fn rational<R: Rng>(rng: &mut R, numer: RangeInclusive<i64>, denom_max: i64) -> Rational {
    ratio(rng.random_range(numer), rng.random_range(1..=denom_max))
}

/// Exact LC number with up to `max_terms` integer coefficients in
/// `[-coeff_bound, coeff_bound]` at exponents drawn from `exps`. May be zero.
pub fn lc<R: Rng>(rng: &mut R, coeff_bound: i64, exps: RangeInclusive<i64>, max_terms: usize, window: u32) -> LcNumber {
    let n = rng.random_range(0..=max_terms);
    let terms: Vec<(i64, Coefficient)> = (0..n)
        .map(|_| (rng.random_range(exps.clone()), Coefficient::Exact(int(rng.random_range(-coeff_bound..=coeff_bound)))))
        .collect();
    LcNumber::from_terms_in(Mode::Exact, window, terms).expect("exact terms")
}

/// Like [`lc`] but never zero.
pub fn nonzero_lc<R: Rng>(rng: &mut R, coeff_bound: i64, exps: RangeInclusive<i64>, max_terms: usize, window: u32) -> LcNumber {
    loop {
        let x = lc(rng, coeff_bound, exps.clone(), max_terms.max(1), window);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Positive exact LC number whose leading coefficient lies in
/// `[1/100, 100]`, followed by up to two higher-order terms of either sign.
pub fn positive_lc<R: Rng>(rng: &mut R, lead_exps: RangeInclusive<i64>) -> LcNumber {
    let lead = rng.random_range(lead_exps);
    let mut terms = vec![(lead, Coefficient::Exact(ratio(rng.random_range(1..=100), rng.random_range(1..=100))))];
    for _ in 0..rng.random_range(0..=2) {
        terms.push((lead + rng.random_range(1..=4), Coefficient::Exact(rational(rng, -50..=50, 9))));
    }
    LcNumber::from_terms(Mode::Exact, terms).expect("exact terms")
}

/// `Σ cₖ·x^k` for `k ≤ max_degree`, integer coefficients in
/// `[-coeff_bound, coeff_bound]`, zero terms omitted.
pub fn polynomial<R: Rng>(rng: &mut R, max_degree: u32, coeff_bound: i64) -> Expr {
    let degree = rng.random_range(0..=max_degree);
    let coeffs: Vec<i64> = (0..=degree).map(|_| rng.random_range(-coeff_bound..=coeff_bound)).collect();
    polynomial_from(&coeffs.iter().map(|&c| int(c)).collect::<Vec<_>>())
}

/// Polynomial from coefficients, constant term first.
pub fn polynomial_from(coeffs: &[Rational]) -> Expr {
    let mut acc: Option<Expr> = None;
    for (k, c) in coeffs.iter().enumerate().rev() {
        if *c == int(0) {
            continue;
        }
        let negative = *c < int(0);
        let magnitude = if negative { -c.clone() } else { c.clone() };
        let power = match k {
            0 => None,
            1 => Some(Expr::Var),
            _ => Some(Expr::powi(Expr::Var, k as i64)),
        };
        let term = match power {
            None => Expr::Const(magnitude),
            Some(p) if magnitude == int(1) => p,
            Some(p) => Expr::mul(Expr::Const(magnitude), p),
        };
        acc = Some(match (acc, negative) {
            (None, false) => term,
            (None, true) => Expr::neg(term),
            (Some(a), false) => Expr::add(a, term),
            (Some(a), true) => Expr::sub(a, term),
        });
    }
    acc.unwrap_or(Expr::int(0))
}

/// Random syntax tree of depth at most `depth` with nonnegative constants,
/// the shapes a parser can produce.
pub fn expr<R: Rng>(rng: &mut R, depth: u32, builtins: bool) -> Expr {
    if depth == 0 || rng.random_bool(0.25) {
        return match rng.random_range(0..3) {
            0 => Expr::Var,
            1 => Expr::Const(int(rng.random_range(0..=20))),
            _ => Expr::Const(ratio(rng.random_range(0..=20), rng.random_range(1..=9))),
        };
    }
    let sub = |rng: &mut R| expr(rng, depth - 1, builtins);
    match rng.random_range(0..if builtins { 8 } else { 7 }) {
        0 => Expr::neg(sub(rng)),
        1 => Expr::add(sub(rng), sub(rng)),
        2 => Expr::sub(sub(rng), sub(rng)),
        3 => Expr::mul(sub(rng), sub(rng)),
        4 => Expr::div(sub(rng), sub(rng)),
        5 | 6 => Expr::powi(sub(rng), rng.random_range(-4..=6)),
        _ => Expr::call(Builtin::ALL[rng.random_range(0..Builtin::ALL.len())], sub(rng)),
    }
}
