use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::coeff::{Coefficient, Mode, Rational, Scalar};
use super::LcError;

/// Relative precision used when none is given.
pub const DEFAULT_WINDOW: u32 = 16;

/// Float comparisons whose leading difference is below this fraction of the
/// operands are refused.
const FLOAT_TIE_RELATIVE: f64 = 1.0 / (1u64 << 40) as f64;

/// Order of magnitude of a value: the lowest exponent carrying a nonzero
/// coefficient. Zero sits above every finite order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(k) => Some(k),
            Valuation::Infinity => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Grade {
    Zero,
    Infinitesimal,
    Appreciable,
    Infinite,
}

#[derive(Clone, Debug)]
enum Terms {
    Exact(BTreeMap<i64, Rational>),
    Float(BTreeMap<i64, f64>),
}

/// A truncated Laurent series `Σ a_k ε^k` in one positive infinitesimal ε.
///
/// Positive exponents are infinitesimal orders (ε = dx, ε² = dx², …),
/// negative exponents are infinite orders. Only exponents in
/// `[ord, ord + window)` are stored, so the order of magnitude survives
/// multiplication and inversion unchanged.
///
/// When truncation has thrown away nonzero terms the value records a
/// precision horizon: the first exponent whose coefficient is no longer
/// known. Every stored coefficient below the horizon is exact for the value
/// the arithmetic describes.
#[derive(Clone, Debug)]
pub struct LcNumber {
    terms: Terms,
    window: u32,
    horizon: Option<i64>,
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn normalize<T: Scalar>(
    mut map: BTreeMap<i64, T>,
    window: u32,
    mut horizon: Option<i64>,
) -> (BTreeMap<i64, T>, Option<i64>) {
    map.retain(|_, c| !c.is_zero());
    if let Some(h) = horizon {
        map.split_off(&h);
    }
    if let Some((&ord, _)) = map.first_key_value() {
        let cut = ord + i64::from(window);
        if !map.split_off(&cut).is_empty() {
            horizon = min_opt(horizon, Some(cut));
        }
    }
    (map, horizon)
}

fn add_maps<T: Scalar>(a: &BTreeMap<i64, T>, b: &BTreeMap<i64, T>) -> BTreeMap<i64, T> {
    let mut out = a.clone();
    for (k, v) in b {
        let slot = out.entry(*k).or_insert_with(T::zero);
        *slot = slot.clone() + v.clone();
    }
    out
}

fn mul_maps<T: Scalar>(
    a: &BTreeMap<i64, T>,
    b: &BTreeMap<i64, T>,
    limit: Option<i64>,
) -> BTreeMap<i64, T> {
    let mut out = BTreeMap::new();
    for (i, x) in a {
        for (j, y) in b {
            let k = i + j;
            if limit.is_some_and(|l| k >= l) {
                break;
            }
            let slot = out.entry(k).or_insert_with(T::zero);
            *slot = slot.clone() + x.clone() * y.clone();
        }
    }
    out
}

/// Size bound used for horizon bookkeeping: the order of a nonzero value, the
/// horizon of a zero known only up to some order, `None` for an exact zero.
fn magnitude<T>(map: &BTreeMap<i64, T>, horizon: Option<i64>) -> Option<i64> {
    map.first_key_value().map(|(k, _)| *k).or(horizon)
}

fn mul_series<T: Scalar>(
    a: &BTreeMap<i64, T>,
    ha: Option<i64>,
    b: &BTreeMap<i64, T>,
    hb: Option<i64>,
    window: u32,
) -> (BTreeMap<i64, T>, Option<i64>) {
    let (Some(ma), Some(mb)) = (magnitude(a, ha), magnitude(b, hb)) else {
        return (BTreeMap::new(), None);
    };
    let horizon = min_opt(ha.map(|h| h + mb), hb.map(|h| h + ma));
    // full product below the horizon so that normalize sees exactly which
    // nonzero terms the window removes
    normalize(mul_maps(a, b, horizon), window, horizon)
}

fn inv_series<T: Scalar>(
    a: &BTreeMap<i64, T>,
    ha: Option<i64>,
    window: u32,
) -> (BTreeMap<i64, T>, Option<i64>) {
    let (&m, lead) = a.first_key_value().expect("inverse of zero");
    let lead_inv = T::one() / lead.clone();
    // a = lead · ε^m · (1 + u), ord(u) ≥ 1
    let mut u: BTreeMap<i64, T> = a
        .iter()
        .skip(1)
        .map(|(k, c)| (k - m, c.clone() * lead_inv.clone()))
        .collect();
    let u_horizon = ha.map(|h| h - m);
    let limit = if u.is_empty() {
        u_horizon
    } else {
        min_opt(u_horizon, Some(i64::from(window)))
    };
    for c in u.values_mut() {
        *c = -c.clone();
    }
    let mut sum: BTreeMap<i64, T> = BTreeMap::from([(0, T::one())]);
    let mut power = sum.clone();
    for j in 1..i64::from(window) {
        if limit.is_some_and(|l| j >= l) || u.is_empty() {
            break;
        }
        power = mul_maps(&power, &u, limit);
        if power.is_empty() {
            break;
        }
        sum = add_maps(&sum, &power);
    }
    let shifted = sum
        .into_iter()
        .map(|(k, c)| (k - m, c * lead_inv.clone()))
        .collect();
    normalize(shifted, window, limit.map(|l| l - m))
}

impl Terms {
    fn mode(&self) -> Mode {
        match self {
            Terms::Exact(_) => Mode::Exact,
            Terms::Float(_) => Mode::Float,
        }
    }

    fn empty(mode: Mode) -> Terms {
        match mode {
            Mode::Exact => Terms::Exact(BTreeMap::new()),
            Mode::Float => Terms::Float(BTreeMap::new()),
        }
    }

    fn first_exponent(&self) -> Option<i64> {
        match self {
            Terms::Exact(m) => m.first_key_value().map(|(k, _)| *k),
            Terms::Float(m) => m.first_key_value().map(|(k, _)| *k),
        }
    }

    fn len(&self) -> usize {
        match self {
            Terms::Exact(m) => m.len(),
            Terms::Float(m) => m.len(),
        }
    }
}

impl PartialEq for Terms {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Terms::Exact(a), Terms::Exact(b)) => a == b,
            (Terms::Float(a), Terms::Float(b)) => a == b,
            _ => false,
        }
    }
}

impl LcNumber {
    fn build(terms: Terms, window: u32, horizon: Option<i64>) -> LcNumber {
        match terms {
            Terms::Exact(m) => {
                let (m, horizon) = normalize(m, window, horizon);
                LcNumber { terms: Terms::Exact(m), window, horizon }
            }
            Terms::Float(m) => {
                let (m, horizon) = normalize(m, window, horizon);
                LcNumber { terms: Terms::Float(m), window, horizon }
            }
        }
    }

    pub fn zero(mode: Mode) -> LcNumber {
        LcNumber { terms: Terms::empty(mode), window: DEFAULT_WINDOW, horizon: None }
    }

    pub fn one(mode: Mode) -> LcNumber {
        LcNumber::from_coefficient(Coefficient::one(mode))
    }

    /// Embed an ordinary rational as an appreciable (or zero) value.
    pub fn from_rational(q: Rational) -> LcNumber {
        LcNumber::build(Terms::Exact(BTreeMap::from([(0, q)])), DEFAULT_WINDOW, None)
    }

    pub fn from_f64(x: f64) -> LcNumber {
        LcNumber::build(Terms::Float(BTreeMap::from([(0, x)])), DEFAULT_WINDOW, None)
    }

    pub fn from_coefficient(c: Coefficient) -> LcNumber {
        LcNumber::monomial(c, 0)
    }

    /// `c · ε^exp`.
    pub fn monomial(c: Coefficient, exp: i64) -> LcNumber {
        let terms = match c {
            Coefficient::Exact(q) => Terms::Exact(BTreeMap::from([(exp, q)])),
            Coefficient::Float(x) => Terms::Float(BTreeMap::from([(exp, x)])),
        };
        LcNumber::build(terms, DEFAULT_WINDOW, None)
    }

    /// The infinitesimal ε^k for k ≥ 1 (ε = dx, ε² = dx², …), exact mode.
    pub fn eps(k: i64) -> Result<LcNumber, LcError> {
        LcNumber::eps_in(k, Mode::Exact)
    }

    pub fn eps_in(k: i64, mode: Mode) -> Result<LcNumber, LcError> {
        if k < 1 {
            return Err(LcError::InvalidExponent(k));
        }
        Ok(LcNumber::monomial(Coefficient::one(mode), k))
    }

    /// Sum of the given terms; repeated exponents are combined.
    pub fn from_terms<I>(mode: Mode, terms: I) -> Result<LcNumber, LcError>
    where
        I: IntoIterator<Item = (i64, Coefficient)>,
    {
        LcNumber::from_terms_in(mode, DEFAULT_WINDOW, terms)
    }

    pub fn from_terms_in<I>(mode: Mode, window: u32, terms: I) -> Result<LcNumber, LcError>
    where
        I: IntoIterator<Item = (i64, Coefficient)>,
    {
        if window == 0 {
            return Err(LcError::InvalidWindow(window));
        }
        let mut acc = Terms::empty(mode);
        for (k, c) in terms {
            match (&mut acc, c) {
                (Terms::Exact(m), Coefficient::Exact(q)) => {
                    let slot = m.entry(k).or_insert_with(Rational::zero);
                    *slot += q;
                }
                (Terms::Float(m), Coefficient::Float(x)) => *m.entry(k).or_insert(0.0) += x,
                _ => return Err(LcError::ModeMismatch),
            }
        }
        Ok(LcNumber::build(acc, window, None))
    }

    /// Same value under a different relative window. Narrowing may truncate.
    pub fn with_window(&self, window: u32) -> Result<LcNumber, LcError> {
        if window == 0 {
            return Err(LcError::InvalidWindow(window));
        }
        Ok(LcNumber::build(self.terms.clone(), window, self.horizon))
    }

    pub fn window(&self) -> u32 {
        self.window
    }

    pub fn mode(&self) -> Mode {
        self.terms.mode()
    }

    /// True when truncation has discarded nonzero terms somewhere in this
    /// value's history.
    pub fn is_lossy(&self) -> bool {
        self.horizon.is_some()
    }

    /// First exponent whose coefficient is unknown because of truncation.
    pub fn horizon(&self) -> Option<i64> {
        self.horizon
    }

    pub fn is_zero(&self) -> bool {
        self.terms.len() == 0
    }

    pub fn ord(&self) -> Valuation {
        self.terms.first_exponent().map_or(Valuation::Infinity, Valuation::Finite)
    }

    pub fn classify(&self) -> Grade {
        match self.ord() {
            Valuation::Infinity => Grade::Zero,
            Valuation::Finite(k) if k > 0 => Grade::Infinitesimal,
            Valuation::Finite(0) => Grade::Appreciable,
            Valuation::Finite(_) => Grade::Infinite,
        }
    }

    /// Coefficient at `exp`, zero when absent.
    pub fn coeff(&self, exp: i64) -> Coefficient {
        match &self.terms {
            Terms::Exact(m) => Coefficient::Exact(m.get(&exp).cloned().unwrap_or_else(Rational::zero)),
            Terms::Float(m) => Coefficient::Float(m.get(&exp).copied().unwrap_or(0.0)),
        }
    }

    pub fn leading(&self) -> Option<(i64, Coefficient)> {
        let k = self.terms.first_exponent()?;
        Some((k, self.coeff(k)))
    }

    /// Stored terms in increasing exponent order.
    pub fn terms(&self) -> Vec<(i64, Coefficient)> {
        match &self.terms {
            Terms::Exact(m) => m.iter().map(|(k, c)| (*k, Coefficient::Exact(c.clone()))).collect(),
            Terms::Float(m) => m.iter().map(|(k, c)| (*k, Coefficient::Float(*c))).collect(),
        }
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Strictly positive: nonzero with a positive leading coefficient.
    pub fn is_positive(&self) -> bool {
        self.leading().is_some_and(|(_, c)| !c.is_negative())
    }

    /// Keep only the terms whose exponent satisfies `keep`.
    pub fn filter_terms(&self, keep: impl Fn(i64) -> bool) -> LcNumber {
        let terms = match &self.terms {
            Terms::Exact(m) => Terms::Exact(m.iter().filter(|(k, _)| keep(**k)).map(|(k, c)| (*k, c.clone())).collect()),
            Terms::Float(m) => Terms::Float(m.iter().filter(|(k, _)| keep(**k)).map(|(k, c)| (*k, *c)).collect()),
        };
        LcNumber { terms, window: self.window, horizon: self.horizon }
    }

    /// Multiply by ε^k. Exact for every k.
    pub fn shift(&self, k: i64) -> LcNumber {
        let terms = match &self.terms {
            Terms::Exact(m) => Terms::Exact(m.iter().map(|(e, c)| (e + k, c.clone())).collect()),
            Terms::Float(m) => Terms::Float(m.iter().map(|(e, c)| (e + k, *c)).collect()),
        };
        LcNumber { terms, window: self.window, horizon: self.horizon.map(|h| h + k) }
    }

    /// Convert coefficients to another mode.
    pub fn to_mode(&self, mode: Mode) -> Result<LcNumber, LcError> {
        if mode == self.mode() {
            return Ok(self.clone());
        }
        let mut out = LcNumber::zero(mode).with_window(self.window)?;
        for (k, c) in self.terms() {
            out = out.try_add(&LcNumber::monomial(c.convert(mode)?, k).with_window(self.window)?)?;
        }
        out.horizon = min_opt(out.horizon, self.horizon);
        Ok(out)
    }

    pub fn try_add(&self, other: &LcNumber) -> Result<LcNumber, LcError> {
        let window = self.window.min(other.window);
        let horizon = min_opt(self.horizon, other.horizon);
        let terms = match (&self.terms, &other.terms) {
            (Terms::Exact(a), Terms::Exact(b)) => Terms::Exact(add_maps(a, b)),
            (Terms::Float(a), Terms::Float(b)) => Terms::Float(add_maps(a, b)),
            _ => return Err(LcError::ModeMismatch),
        };
        Ok(LcNumber::build(terms, window, horizon))
    }

    pub fn try_sub(&self, other: &LcNumber) -> Result<LcNumber, LcError> {
        self.try_add(&other.neg_value())
    }

    pub fn neg_value(&self) -> LcNumber {
        let terms = match &self.terms {
            Terms::Exact(m) => Terms::Exact(m.iter().map(|(k, c)| (*k, -c)).collect()),
            Terms::Float(m) => Terms::Float(m.iter().map(|(k, c)| (*k, -c)).collect()),
        };
        LcNumber { terms, window: self.window, horizon: self.horizon }
    }

    /// Cauchy product, truncated to the result's window.
    pub fn try_mul(&self, other: &LcNumber) -> Result<LcNumber, LcError> {
        let window = self.window.min(other.window);
        let (terms, horizon) = match (&self.terms, &other.terms) {
            (Terms::Exact(a), Terms::Exact(b)) => {
                let (m, h) = mul_series(a, self.horizon, b, other.horizon, window);
                (Terms::Exact(m), h)
            }
            (Terms::Float(a), Terms::Float(b)) => {
                let (m, h) = mul_series(a, self.horizon, b, other.horizon, window);
                (Terms::Float(m), h)
            }
            _ => return Err(LcError::ModeMismatch),
        };
        Ok(LcNumber { terms, window, horizon })
    }

    /// Multiplicative inverse: for `a = c·ε^m·(1+u)` returns
    /// `c⁻¹·ε^{−m}·Σ_{j<W} (−u)^j`.
    pub fn try_inv(&self) -> Result<LcNumber, LcError> {
        if self.is_zero() {
            return Err(LcError::DivisionByZero);
        }
        let (terms, horizon) = match &self.terms {
            Terms::Exact(m) => {
                let (m, h) = inv_series(m, self.horizon, self.window);
                (Terms::Exact(m), h)
            }
            Terms::Float(m) => {
                let (m, h) = inv_series(m, self.horizon, self.window);
                (Terms::Float(m), h)
            }
        };
        Ok(LcNumber { terms, window: self.window, horizon })
    }

    pub fn try_div(&self, other: &LcNumber) -> Result<LcNumber, LcError> {
        if self.mode() != other.mode() {
            return Err(LcError::ModeMismatch);
        }
        self.try_mul(&other.try_inv()?)
    }

    /// Integer power by repeated squaring; negative powers go through the
    /// inverse.
    pub fn try_powi(&self, n: i64) -> Result<LcNumber, LcError> {
        let base = if n < 0 { self.try_inv()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = LcNumber::one(self.mode()).with_window(self.window)?;
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.try_mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Multiply every coefficient by `c`.
    pub fn try_scale(&self, c: &Coefficient) -> Result<LcNumber, LcError> {
        self.try_mul(&LcNumber::from_coefficient(c.clone()).with_window(self.window)?)
    }

    /// Total order: the sign of `self − other` is the sign of its leading
    /// coefficient. In float mode a leading difference within 2⁻⁴⁰ of the
    /// operands is refused as indeterminate.
    pub fn try_cmp(&self, other: &LcNumber) -> Result<Ordering, LcError> {
        let diff = self.try_sub(other)?;
        let Some((k, lead)) = diff.leading() else {
            return Ok(Ordering::Equal);
        };
        if let Coefficient::Float(d) = lead {
            let scale = self.coeff(k).to_f64().abs().max(other.coeff(k).to_f64().abs());
            if d.abs() <= FLOAT_TIE_RELATIVE * scale {
                return Err(LcError::IndeterminateComparison);
            }
        }
        Ok(if lead.is_negative() { Ordering::Less } else { Ordering::Greater })
    }

    /// Absolute value under the order.
    pub fn abs(&self) -> LcNumber {
        if self.leading().is_some_and(|(_, c)| c.is_negative()) {
            self.neg_value()
        } else {
            self.clone()
        }
    }
}

impl PartialEq for LcNumber {
    /// Term-map equality; window and precision horizon are not compared.
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl PartialOrd for LcNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

impl From<Rational> for LcNumber {
    fn from(q: Rational) -> Self {
        LcNumber::from_rational(q)
    }
}

impl Serialize for LcNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&LcNumber> for &LcNumber {
            type Output = LcNumber;
            /// Panics on mode mismatch (and on division by zero for `/`).
            fn $method(self, rhs: &LcNumber) -> LcNumber {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<LcNumber> for LcNumber {
            type Output = LcNumber;
            fn $method(self, rhs: LcNumber) -> LcNumber {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl Neg for &LcNumber {
    type Output = LcNumber;
    fn neg(self) -> LcNumber {
        self.neg_value()
    }
}

impl Neg for LcNumber {
    type Output = LcNumber;
    fn neg(self) -> LcNumber {
        self.neg_value()
    }
}
