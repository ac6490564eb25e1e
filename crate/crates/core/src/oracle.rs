//! Archimedean oracles used to check the infinitesimal derivative: a
//! symbolic rule-based derivative and the finite-difference limit with a
//! sampled epsilon–delta certificate.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::diff::{differentiate, DerivReport};
use crate::expr::{eval_f64, eval_rational, Expr, ExprError};
use crate::lc::{int, rational_to_f64, ratio, Coefficient, Mode, Rational};

/// Default length of the step schedule `h_n = 2⁻ⁿ`.
pub const DEFAULT_STEPS: u32 = 30;

/// Tolerance for float-mode agreement between the tracks.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// Successive Richardson estimates must agree this closely (relative, with
/// a unit floor) for the limit to count as converged.
const CONVERGENCE_RELATIVE: f64 = 1e-6;

/// Certificates are attempted for these tolerances, as powers of ten.
const CERTIFICATE_EXPONENTS: [u32; 3] = [3, 6, 9];

/// A certificate must hold on this many consecutive halvings below delta.
pub const CERTIFICATE_OCTAVES: u32 = 4;

pub const CERTIFICATE_KIND: &str = "certificate by evaluation";

#[derive(Clone, Debug, Error, PartialEq)]
pub enum LimitError {
    #[error("evaluating at {at}: {source}")]
    Eval { at: String, source: ExprError },
    #[error("difference quotients did not converge within {steps} halvings")]
    NoConvergence { steps: u32, schedule: Vec<SchedulePoint> },
    #[error("step schedule needs at least 3 points")]
    ScheduleTooShort,
}

// ---------------------------------------------------------------------------
// symbolic derivative

fn is_const(e: &Expr, v: i64) -> bool {
    matches!(e, Expr::Const(q) if *q == int(v))
}

fn s_add(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(p), Expr::Const(q)) => Expr::Const(p + q),
        (a, b) if is_const(&a, 0) => b,
        (a, b) if is_const(&b, 0) => a,
        (a, b) => Expr::add(a, b),
    }
}

fn s_sub(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(p), Expr::Const(q)) => Expr::Const(p - q),
        (a, b) if is_const(&b, 0) => a,
        (a, b) if is_const(&a, 0) => s_neg(b),
        (a, b) => Expr::sub(a, b),
    }
}

fn s_neg(a: Expr) -> Expr {
    match a {
        Expr::Const(q) => Expr::Const(-q),
        Expr::Neg(inner) => *inner,
        a => Expr::neg(a),
    }
}

fn s_mul(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(p), Expr::Const(q)) => Expr::Const(p * q),
        (a, _) if is_const(&a, 0) => Expr::int(0),
        (_, b) if is_const(&b, 0) => Expr::int(0),
        (a, b) if is_const(&a, 1) => b,
        (a, b) if is_const(&b, 1) => a,
        (a, b) => Expr::mul(a, b),
    }
}

fn s_powi(a: Expr, n: i64) -> Expr {
    match n {
        0 => Expr::int(1),
        1 => a,
        _ => Expr::powi(a, n),
    }
}

/// Derivative by the sum, product, quotient, power and chain rules with the
/// shared builtin table. Only trivial constant folding is applied.
pub fn symbolic_derivative(e: &Expr) -> Expr {
    match e {
        Expr::Const(_) => Expr::int(0),
        Expr::Var => Expr::int(1),
        Expr::Neg(a) => s_neg(symbolic_derivative(a)),
        Expr::Add(a, b) => s_add(symbolic_derivative(a), symbolic_derivative(b)),
        Expr::Sub(a, b) => s_sub(symbolic_derivative(a), symbolic_derivative(b)),
        Expr::Mul(a, b) => s_add(
            s_mul(symbolic_derivative(a), (**b).clone()),
            s_mul((**a).clone(), symbolic_derivative(b)),
        ),
        Expr::Div(a, b) => Expr::div(
            s_sub(
                s_mul(symbolic_derivative(a), (**b).clone()),
                s_mul((**a).clone(), symbolic_derivative(b)),
            ),
            Expr::powi((**b).clone(), 2),
        ),
        Expr::PowInt(_, 0) => Expr::int(0),
        Expr::PowInt(a, n) => s_mul(
            s_mul(Expr::int(*n), s_powi((**a).clone(), n - 1)),
            symbolic_derivative(a),
        ),
        Expr::Call(f, a) => s_mul(f.derivative((**a).clone()), symbolic_derivative(a)),
    }
}

/// Evaluate an expression at a point in the point's mode.
pub fn eval_at(e: &Expr, x: &Coefficient) -> Result<Coefficient, ExprError> {
    match x {
        Coefficient::Exact(q) => eval_rational(e, q).map(Coefficient::Exact),
        Coefficient::Float(v) => eval_f64(e, *v).map(Coefficient::Float),
    }
}

// ---------------------------------------------------------------------------
// finite-difference limit

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchedulePoint {
    pub n: u32,
    pub h: Coefficient,
    pub quotient: Coefficient,
}

/// One-level Richardson value `2·Q(h/2) − Q(h)` chosen where successive
/// values stop getting closer.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RichardsonEstimate {
    pub n: u32,
    pub value: Coefficient,
    pub successive_difference: Coefficient,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpsDelta {
    pub epsilon: Coefficient,
    pub delta: Coefficient,
}

/// The A-track paraphrase: ordinary-number quotients along a shrinking
/// schedule, the extrapolated limit, and sampled epsilon–delta evidence.
/// By construction it carries no record of discarded infinitesimal terms.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitCertificate {
    pub target: Coefficient,
    pub schedule: Vec<SchedulePoint>,
    pub richardson: RichardsonEstimate,
    pub eps_delta_pairs: Vec<EpsDelta>,
    pub kind: &'static str,
}

/// Exact values or doubles; the two share every step of the limit procedure.
trait Num: Clone + Sized {
    /// Whether arithmetic is free of rounding.
    const EXACT: bool;
    fn from_coefficient(c: &Coefficient) -> Self;
    fn into_coefficient(self) -> Coefficient;
    fn step(n: u32) -> Self;
    fn tolerance(exponent: u32) -> Self;
    fn eval(e: &Expr, x: &Self) -> Result<Self, ExprError>;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn twice(&self) -> Self;
    fn half(&self) -> Self;
    fn abs(&self) -> Self;
    fn lt(&self, o: &Self) -> bool;
    fn as_f64(&self) -> f64;
    /// Random value in `[lo, hi)`.
    fn sample(lo: &Self, hi: &Self, rng: &mut ChaCha8Rng) -> Self;
}

impl Num for Rational {
    const EXACT: bool = true;
    fn from_coefficient(c: &Coefficient) -> Self {
        c.as_rational().expect("exact point").clone()
    }
    fn into_coefficient(self) -> Coefficient {
        Coefficient::Exact(self)
    }
    fn step(n: u32) -> Self {
        Rational::one() / Rational::from_integer(num_traits::pow(BigInt::from(2), n as usize))
    }
    fn tolerance(exponent: u32) -> Self {
        Rational::one() / Rational::from_integer(num_traits::pow(BigInt::from(10), exponent as usize))
    }
    fn eval(e: &Expr, x: &Self) -> Result<Self, ExprError> {
        eval_rational(e, x)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn twice(&self) -> Self {
        self * int(2)
    }
    fn half(&self) -> Self {
        self * ratio(1, 2)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn lt(&self, o: &Self) -> bool {
        self < o
    }
    fn as_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn sample(lo: &Self, hi: &Self, rng: &mut ChaCha8Rng) -> Self {
        let u = ratio(rng.random_range(0..1_000_000), 1_000_000);
        lo + (hi - lo) * u
    }
}

impl Num for f64 {
    const EXACT: bool = false;
    fn from_coefficient(c: &Coefficient) -> Self {
        c.to_f64()
    }
    fn into_coefficient(self) -> Coefficient {
        Coefficient::Float(self)
    }
    fn step(n: u32) -> Self {
        0.5f64.powi(n as i32)
    }
    fn tolerance(exponent: u32) -> Self {
        10f64.powi(-(exponent as i32))
    }
    fn eval(e: &Expr, x: &Self) -> Result<Self, ExprError> {
        eval_f64(e, *x)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn twice(&self) -> Self {
        2.0 * self
    }
    fn half(&self) -> Self {
        0.5 * self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn lt(&self, o: &Self) -> bool {
        self < o
    }
    fn as_f64(&self) -> f64 {
        *self
    }
    fn sample(lo: &Self, hi: &Self, rng: &mut ChaCha8Rng) -> Self {
        lo + (hi - lo) * rng.random::<f64>()
    }
}

fn difference_quotient<T: Num>(e: &Expr, x0: &T, f0: &T, h: &T) -> Result<T, LimitError> {
    let x = x0.add(h);
    let fx = T::eval(e, &x).map_err(|source| LimitError::Eval {
        at: format!("x0+{}", h.clone().into_coefficient()),
        source,
    })?;
    Ok(fx.sub(f0).div(h))
}

fn limit_generic<T: Num>(e: &Expr, x0: &T, steps: u32) -> Result<LimitCertificate, LimitError> {
    if steps < 3 {
        return Err(LimitError::ScheduleTooShort);
    }
    let f0 = T::eval(e, x0).map_err(|source| LimitError::Eval { at: "x0".into(), source })?;
    let mut hs = Vec::with_capacity(steps as usize);
    let mut qs = Vec::with_capacity(steps as usize);
    for n in 1..=steps {
        let h = T::step(n);
        qs.push(difference_quotient(e, x0, &f0, &h)?);
        hs.push(h);
    }
    let schedule: Vec<SchedulePoint> = (1..=steps)
        .zip(hs.iter().zip(&qs))
        .map(|(n, (h, q))| SchedulePoint { n, h: h.clone().into_coefficient(), quotient: q.clone().into_coefficient() })
        .collect();

    // r[i] pairs schedule entries i and i+1 (steps h and h/2)
    let r: Vec<T> = qs.windows(2).map(|w| w[1].twice().sub(&w[0])).collect();
    let mut best = 1;
    let mut best_diff = r[1].sub(&r[0]).abs();
    for i in 2..r.len() {
        let d = r[i].sub(&r[i - 1]).abs();
        if !d.lt(&best_diff) {
            break;
        }
        best = i;
        best_diff = d;
    }
    let target = r[best].clone();
    let scale = target.as_f64().abs().max(1.0);
    if best_diff.as_f64() > CONVERGENCE_RELATIVE * scale {
        return Err(LimitError::NoConvergence { steps, schedule });
    }

    // past the chosen point float quotients are dominated by rounding, and
    // dyadic steps can even round to spuriously exact values
    let trusted = if T::EXACT { qs.len() } else { best + 2 };

    let mut eps_delta_pairs = Vec::new();
    for exponent in CERTIFICATE_EXPONENTS {
        let epsilon = T::tolerance(exponent);
        let margin = epsilon.half();
        let octaves = CERTIFICATE_OCTAVES as usize;
        let found = (0..trusted.saturating_sub(octaves)).find(|&start| {
            qs[start..=start + octaves].iter().all(|q| q.sub(&target).abs().lt(&margin))
        });
        if let Some(start) = found {
            eps_delta_pairs.push(EpsDelta {
                epsilon: epsilon.into_coefficient(),
                delta: hs[start].clone().into_coefficient(),
            });
        }
    }

    Ok(LimitCertificate {
        target: target.clone().into_coefficient(),
        schedule,
        richardson: RichardsonEstimate {
            n: best as u32 + 2,
            value: target.into_coefficient(),
            successive_difference: best_diff.into_coefficient(),
        },
        eps_delta_pairs,
        kind: CERTIFICATE_KIND,
    })
}

/// Forward-difference quotients on `h_n = 2⁻ⁿ`, `n = 1..=steps`, in the
/// point's mode, with a one-level Richardson estimate.
pub fn limit_derivative(e: &Expr, x0: &Coefficient, steps: u32) -> Result<LimitCertificate, LimitError> {
    match x0 {
        Coefficient::Exact(q) => limit_generic::<Rational>(e, q, steps),
        Coefficient::Float(v) => limit_generic::<f64>(e, v, steps),
    }
}

fn verify_generic<T: Num>(
    e: &Expr,
    x0: &T,
    cert: &LimitCertificate,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<bool, LimitError> {
    let f0 = T::eval(e, x0).map_err(|source| LimitError::Eval { at: "x0".into(), source })?;
    let target = T::from_coefficient(&cert.target);
    for pair in &cert.eps_delta_pairs {
        let epsilon = T::from_coefficient(&pair.epsilon);
        let delta = T::from_coefficient(&pair.delta);
        let mut floor = delta.clone();
        for _ in 0..CERTIFICATE_OCTAVES {
            floor = floor.half();
        }
        for _ in 0..samples {
            let h = T::sample(&floor, &delta, rng);
            let q = difference_quotient(e, x0, &f0, &h)?;
            if !q.sub(&target).abs().lt(&epsilon) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Re-check every stored epsilon–delta pair at `samples` random steps
/// drawn from `[delta·2⁻⁴, delta)`. Below that band double-precision
/// cancellation, not the limit, dominates the quotient.
pub fn verify_certificate(
    e: &Expr,
    x0: &Coefficient,
    cert: &LimitCertificate,
    samples: usize,
    seed: u64,
) -> Result<bool, LimitError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match x0 {
        Coefficient::Exact(q) => verify_generic::<Rational>(e, q, cert, samples, &mut rng),
        Coefficient::Float(v) => verify_generic::<f64>(e, v, cert, samples, &mut rng),
    }
}

// ---------------------------------------------------------------------------
// track comparison

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Verdict {
    ExactMatch,
    WithinTolerance(f64),
    Mismatch,
}

/// One track's outcome; failures are kept per track as messages.
pub type TrackResult<T> = Result<T, String>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrackComparison {
    pub mode: Mode,
    pub b_result: TrackResult<DerivReport>,
    pub a_symbolic: TrackResult<Coefficient>,
    pub a_limit: Option<TrackResult<LimitCertificate>>,
    /// `None` when a track the verdict depends on failed.
    pub verdict: Option<Verdict>,
}

impl TrackComparison {
    pub fn first_error(&self) -> Option<&str> {
        if let Err(e) = &self.b_result {
            return Some(e);
        }
        if let Err(e) = &self.a_symbolic {
            return Some(e);
        }
        match &self.a_limit {
            Some(Err(e)) => Some(e),
            _ => None,
        }
    }
}

/// `|a − b| ≤ tol · max(|a|, |b|, 1)`.
pub fn relatively_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Run both tracks at `x0`. Exact mode demands identical rationals from the
/// B-track and the symbolic oracle; float mode demands agreement within
/// [`FLOAT_TOLERANCE`] with both the symbolic and the limit oracle.
pub fn compare_tracks(e: &Expr, x0: &Coefficient, window: u32) -> TrackComparison {
    let mode = x0.mode();
    let b_result = differentiate(e, x0, window).map_err(|err| err.to_string());
    let a_symbolic = eval_at(&symbolic_derivative(e), x0).map_err(|err| err.to_string());
    let a_limit = Some(limit_derivative(e, x0, DEFAULT_STEPS).map_err(|err| err.to_string()));

    let verdict = match (mode, &b_result, &a_symbolic, &a_limit) {
        (Mode::Exact, Ok(b), Ok(sym), _) => {
            Some(if b.derivative == *sym { Verdict::ExactMatch } else { Verdict::Mismatch })
        }
        (Mode::Float, Ok(b), Ok(sym), Some(Ok(lim))) => {
            let d = b.derivative.to_f64();
            let ok = relatively_close(d, sym.to_f64(), FLOAT_TOLERANCE)
                && relatively_close(d, lim.target.to_f64(), FLOAT_TOLERANCE);
            Some(if ok { Verdict::WithinTolerance(FLOAT_TOLERANCE) } else { Verdict::Mismatch })
        }
        _ => None,
    };
    TrackComparison { mode, b_result, a_symbolic, a_limit, verdict }
}

impl Verdict {
    pub fn is_agreement(self) -> bool {
        !matches!(self, Verdict::Mismatch)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::lc::DEFAULT_WINDOW;

    fn d(src: &str) -> String {
        symbolic_derivative(&parse(src).unwrap()).to_string()
    }

    #[test]
    fn rule_table() {
        assert_eq!(d("x^3"), "3*x^2");
        assert_eq!(d("sin(x)"), "cos(x)");
        assert_eq!(d("cos(x)"), "-sin(x)");
        assert_eq!(d("exp(x)"), "exp(x)");
        assert_eq!(d("ln(x)"), "1/x");
        // quotient rule shape (f′g − fg′)/g²
        assert_eq!(d("(x + 1)/(x^2)"), "(x^2 - (x + 1)*(2*x))/(x^2)^2");
        assert_eq!(d("5"), "0");
    }

    #[test]
    fn chain_rule() {
        let e = parse("sin(x^2)").unwrap();
        let de = symbolic_derivative(&e);
        assert_eq!(de.to_string(), "cos(x^2)*(2*x)");
    }

    #[test]
    fn exact_quotients_of_a_square() {
        let e = parse("x^2").unwrap();
        let cert = limit_derivative(&e, &Coefficient::Exact(int(3)), DEFAULT_STEPS).unwrap();
        assert_eq!(cert.target, Coefficient::Exact(int(6)));
        for p in &cert.schedule {
            let h = p.h.as_rational().unwrap();
            assert_eq!(p.quotient, Coefficient::Exact(int(6) + h));
        }
        let hs: Vec<f64> = cert.schedule.iter().map(|p| p.h.to_f64()).collect();
        assert!(hs.windows(2).all(|w| w[1] < w[0]));
        assert_eq!(cert.eps_delta_pairs.len(), 2);
        assert!(verify_certificate(&e, &Coefficient::Exact(int(3)), &cert, 10, 7).unwrap());
    }

    #[test]
    fn sine_limit_at_zero() {
        let e = parse("sin(x)").unwrap();
        let cert = limit_derivative(&e, &Coefficient::Float(0.0), DEFAULT_STEPS).unwrap();
        assert!((cert.target.to_f64() - 1.0).abs() < 1e-9, "{}", cert.target);
        assert!(!cert.eps_delta_pairs.is_empty());
        assert!(verify_certificate(&e, &Coefficient::Float(0.0), &cert, 10, 1).unwrap());
    }

    #[test]
    fn pole_is_an_evaluation_error() {
        let e = parse("1/x").unwrap();
        let err = limit_derivative(&e, &Coefficient::Exact(int(0)), DEFAULT_STEPS).unwrap_err();
        assert!(matches!(err, LimitError::Eval { .. }));
    }

    #[test]
    fn oscillation_does_not_converge() {
        let e = parse("sin(1/(x - 1))").unwrap();
        let err = limit_derivative(&e, &Coefficient::Float(1.0), DEFAULT_STEPS);
        assert!(err.is_err());
        let e = parse("x*sin(1/x)").unwrap();
        assert!(matches!(
            limit_derivative(&e, &Coefficient::Float(1e-300), DEFAULT_STEPS),
            Err(LimitError::NoConvergence { .. })
        ));
    }

    #[test]
    fn comparisons() {
        let c = compare_tracks(&parse("x^3 - 2*x").unwrap(), &Coefficient::Exact(int(5)), DEFAULT_WINDOW);
        assert_eq!(c.verdict, Some(Verdict::ExactMatch));
        assert_eq!(c.b_result.as_ref().unwrap().derivative, Coefficient::Exact(int(73)));
        let c = compare_tracks(&parse("exp(x)").unwrap(), &Coefficient::Float(1.0), DEFAULT_WINDOW);
        assert_eq!(c.verdict, Some(Verdict::WithinTolerance(FLOAT_TOLERANCE)));
        let c = compare_tracks(&parse("x^2").unwrap(), &Coefficient::Exact(int(0)), DEFAULT_WINDOW);
        assert_eq!(c.verdict, Some(Verdict::ExactMatch));
        assert_eq!(c.a_symbolic, Ok(Coefficient::Exact(int(0))));
        let c = compare_tracks(&parse("sin(x)").unwrap(), &Coefficient::Exact(int(0)), DEFAULT_WINDOW);
        assert_eq!(c.verdict, None);
        assert!(c.first_error().unwrap().contains("float mode"));
    }
}
