//! The transcendental law of homogeneity: normalize a value by discarding
//! terms incomparably smaller than the ones kept, compare values for
//! equality up to such terms, and record exactly what was thrown away.

use serde::Serialize;
use thiserror::Error;

use crate::lc::{Coefficient, LcError, LcNumber, Valuation};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TlhError {
    #[error("scale must be nonzero")]
    ZeroScale,
    #[error(transparent)]
    Lc(#[from] LcError),
}

/// Why the discarded terms were discarded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Justification {
    /// Everything below the leading term.
    LeadingOrder,
    /// Everything of higher order than a reference scale of the given order.
    RelativeToScale(i64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscardedTerm {
    pub exp: i64,
    pub coeff: Coefficient,
}

/// Audit record of one application of the law. `kept` plus the discarded
/// terms reconstructs `input` exactly, and every discarded exponent lies
/// above every kept one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TlhTrace {
    pub input: LcNumber,
    pub kept: LcNumber,
    pub discarded: Vec<DiscardedTerm>,
    pub justification: Justification,
}

impl TlhTrace {
    /// Sum of the discarded terms as a value.
    pub fn discarded_value(&self) -> LcNumber {
        LcNumber::from_terms_in(
            self.input.mode(),
            self.input.window(),
            self.discarded.iter().map(|t| (t.exp, t.coeff.clone())),
        )
        .expect("discarded terms share the input's mode")
    }

    /// `kept + Σ discarded`.
    pub fn reconstruct(&self) -> LcNumber {
        self.kept.try_add(&self.discarded_value()).expect("same mode")
    }

    pub fn has_discarded(&self) -> bool {
        !self.discarded.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("trace serializes")
    }
}

/// Keep only the leading term: `ε + ε² → ε`, `6 + ε → 6`, `0 → 0`.
pub fn tlh(a: &LcNumber) -> LcNumber {
    match a.ord() {
        Valuation::Finite(k) => a.filter_terms(|e| e == k),
        Valuation::Infinity => a.clone(),
    }
}

/// Drop every term of higher order than `scale`, keep the rest.
pub fn tlh_relative(a: &LcNumber, scale: &LcNumber) -> Result<LcNumber, TlhError> {
    let cut = scale_order(scale)?;
    Ok(a.filter_terms(|e| e <= cut))
}

fn scale_order(scale: &LcNumber) -> Result<i64, TlhError> {
    scale.ord().finite().ok_or(TlhError::ZeroScale)
}

/// Apply the law (leading-order without a scale, relative with one) and
/// record what it removed.
pub fn tlh_trace(a: &LcNumber, scale: Option<&LcNumber>) -> Result<TlhTrace, TlhError> {
    let (kept, justification) = match scale {
        None => (tlh(a), Justification::LeadingOrder),
        Some(s) => {
            let cut = scale_order(s)?;
            (a.filter_terms(|e| e <= cut), Justification::RelativeToScale(cut))
        }
    };
    let top = match kept.ord() {
        Valuation::Infinity => None,
        Valuation::Finite(_) => kept.terms().last().map(|(k, _)| *k),
    };
    let discarded = a
        .terms()
        .into_iter()
        .filter(|(k, _)| match (justification, top) {
            (Justification::RelativeToScale(cut), _) => *k > cut,
            (Justification::LeadingOrder, Some(t)) => *k > t,
            (Justification::LeadingOrder, None) => false,
        })
        .map(|(exp, coeff)| DiscardedTerm { exp, coeff })
        .collect();
    Ok(TlhTrace { input: a.clone(), kept, discarded, justification })
}

/// Equality up to incomparably small differences: `a = b`, or `a − b` is
/// nonzero and of strictly higher order than both `a` and `b`.
pub fn gen_equal(a: &LcNumber, b: &LcNumber) -> Result<bool, LcError> {
    let diff = a.try_sub(b)?;
    if diff.is_zero() {
        return Ok(true);
    }
    Ok(diff.ord() > a.ord() && diff.ord() > b.ord())
}
