//! Derivatives and tangent lines by genuine infinitesimal arithmetic.
//!
//! The increment is always the canonical ε. The raw quotient
//! `(f(x0+ε) − f(x0))/ε` is an LC number that keeps its infinitesimal tail;
//! the derivative is its appreciable coefficient, and the trace records the
//! tail the law of homogeneity removed.

use serde::Serialize;
use thiserror::Error;

use crate::expr::{eval_lc, Expr, ExprError};
use crate::lc::{Coefficient, LcError, LcNumber, Mode};
use crate::tlh::{gen_equal, tlh, tlh_relative, tlh_trace, TlhTrace};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum DiffError {
    #[error("evaluating at {at}: {source}")]
    Eval { at: &'static str, source: ExprError },
    #[error("vertical tangent: raw quotient {raw} is infinite")]
    VerticalTangent { raw: LcNumber },
    #[error("order {order} is not representable with window {window}")]
    PrecisionWindowExceeded { order: u32, window: u32 },
    #[error("derivative order must be at least 1")]
    InvalidOrder,
    #[error(transparent)]
    Lc(#[from] LcError),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivReport {
    pub expr: Expr,
    pub point: Coefficient,
    pub mode: Mode,
    /// The inassignable quotient dy/dx.
    pub raw_quotient: LcNumber,
    /// The assignable slope: the exponent-0 coefficient of the raw quotient.
    pub derivative: Coefficient,
    /// `raw_quotient` relative to scale 1: the appreciable part kept, the
    /// infinitesimal tail discarded.
    pub trace: TlhTrace,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TangentLine {
    pub slope: Coefficient,
    pub intercept: Coefficient,
    pub touch_point: (Coefficient, Coefficient),
}

fn point(x0: &Coefficient, window: u32) -> Result<LcNumber, LcError> {
    LcNumber::from_coefficient(x0.clone()).with_window(window)
}

fn shifted_point(x0: &Coefficient, window: u32) -> Result<LcNumber, LcError> {
    point(x0, window)?.try_add(&LcNumber::eps_in(1, x0.mode())?.with_window(window)?)
}

fn eval_at(e: &Expr, x: &LcNumber, at: &'static str) -> Result<LcNumber, DiffError> {
    eval_lc(e, x).map_err(|source| DiffError::Eval { at, source })
}

/// `(f(a) − f(b)) / (a − b)` for the two infinitely close points.
fn quotient(fa: &LcNumber, fb: &LcNumber, step: &LcNumber) -> Result<LcNumber, DiffError> {
    Ok(fa.try_sub(fb)?.try_div(step)?)
}

fn check_finite(raw: &LcNumber) -> Result<(), DiffError> {
    if raw.ord().finite().is_some_and(|k| k < 0) {
        return Err(DiffError::VerticalTangent { raw: raw.clone() });
    }
    Ok(())
}

/// B-track derivative of `e` at `x0`. The mode follows `x0`'s coefficient.
pub fn differentiate(e: &Expr, x0: &Coefficient, window: u32) -> Result<DerivReport, DiffError> {
    let mode = x0.mode();
    let near = shifted_point(x0, window)?;
    let f_near = eval_at(e, &near, "x0+eps")?;
    let f_at = eval_at(e, &point(x0, window)?, "x0")?;
    // dividing by ε is an exact shift
    let raw = f_near.try_sub(&f_at)?.shift(-1);
    check_finite(&raw)?;
    if raw.horizon().is_some_and(|h| h <= 0) {
        return Err(DiffError::PrecisionWindowExceeded { order: 1, window });
    }
    let one = LcNumber::one(mode).with_window(window)?;
    let trace = tlh_trace(&raw, Some(&one)).expect("scale 1 is nonzero");
    Ok(DerivReport {
        expr: e.clone(),
        point: x0.clone(),
        mode,
        derivative: raw.coeff(0),
        raw_quotient: raw,
        trace,
    })
}

/// k-th derivative as `k! · coeff(f(x0+ε), k)`.
pub fn higher_derivative(e: &Expr, x0: &Coefficient, k: u32, window: u32) -> Result<Coefficient, DiffError> {
    if k == 0 {
        return Err(DiffError::InvalidOrder);
    }
    if k >= window {
        return Err(DiffError::PrecisionWindowExceeded { order: k, window });
    }
    let value = eval_at(e, &shifted_point(x0, window)?, "x0+eps")?;
    let exp = i64::from(k);
    if value.horizon().is_some_and(|h| h <= exp) {
        return Err(DiffError::PrecisionWindowExceeded { order: k, window });
    }
    let factorial = (1..=i64::from(k)).fold(Coefficient::one(x0.mode()), |acc, j| {
        let j = Coefficient::Exact(crate::lc::int(j)).convert(x0.mode()).expect("finite");
        acc.try_mul(&j).expect("same mode")
    });
    Ok(value.coeff(exp).try_mul(&factorial)?)
}

/// Tangent through `(x0, f(x0))` and `(x0+ε, f(x0+ε))`.
pub fn tangent_line(e: &Expr, x0: &Coefficient, window: u32) -> Result<TangentLine, DiffError> {
    let report = differentiate(e, x0, window)?;
    let f_at = eval_at(e, &point(x0, window)?, "x0")?;
    let y0 = f_at.coeff(0);
    let slope = report.derivative;
    let intercept = y0.try_sub(&slope.try_mul(x0)?)?;
    Ok(TangentLine { slope, intercept, touch_point: (x0.clone(), y0) })
}

/// Compute the slope once from `x0` towards `x0+ε` and once from `x0+ε`
/// back towards `x0`; true when both quotients are finite, generalized
/// equal, and normalize to the same value.
pub fn point_symmetry_check(e: &Expr, x0: &Coefficient, window: u32) -> Result<bool, DiffError> {
    let mode = x0.mode();
    let eps = LcNumber::eps_in(1, mode)?.with_window(window)?;
    let a = point(x0, window)?;
    let b = shifted_point(x0, window)?;
    let back = b.try_sub(&eps)?;
    let forward = quotient(&eval_at(e, &b, "x0+eps")?, &eval_at(e, &a, "x0")?, &eps)?;
    let backward = quotient(&eval_at(e, &back, "x0")?, &eval_at(e, &b, "x0+eps")?, &eps.neg_value())?;
    let finite = |q: &LcNumber| q.ord().finite().is_none_or(|k| k >= 0);
    if !finite(&forward) || !finite(&backward) {
        return Ok(false);
    }
    let one = LcNumber::one(mode).with_window(window)?;
    let same_assignable = tlh_relative(&forward, &one).expect("nonzero") == tlh_relative(&backward, &one).expect("nonzero");
    Ok(gen_equal(&forward, &backward)? && tlh(&forward) == tlh(&backward) && same_assignable)
}
