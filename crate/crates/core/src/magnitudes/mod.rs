//! Ordered additive magnitudes and the axioms E1–E5, checked over sample
//! sets of pluggable models, plus exact comparability for LC numbers.
//!
//! * E1: for all x, y there is a finite n with n·x > y
//! * E2: x < y implies x + z = y for some z
//! * E3: x < y implies x + z < y + z
//! * E4: every x is n·y for some y, for every n
//! * E5: x : y :: z : v for some v

mod horn;
mod models;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::lc::{LcError, LcNumber};

pub use horn::{horn_angle_demo, AcuteComparison, Cmp, EmbeddingCollapse, HornAngle, HornDemo, HornModel};
pub use models::{LcPositiveModel, RationalModel};

/// Default bound on the multiplier in witness searches.
pub const DEFAULT_BOUND: u64 = 100_000;

/// Reports keep at most this many witnesses and counterexamples each.
pub const MAX_EVIDENCE: usize = 8;

/// E4 is checked for divisors `1..=min(bound, MAX_DIVISOR)`.
pub const MAX_DIVISOR: u64 = 8;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum MagnitudeError {
    #[error("{0} is not a positive magnitude")]
    NonPositive(String),
    #[error("unknown model {0:?}; expected rationals, lc-positive or horn")]
    UnknownModel(String),
    #[error(transparent)]
    Lc(#[from] LcError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Axiom {
    E1,
    E2,
    E3,
    E4,
    E5,
}

impl Axiom {
    pub const ALL: [Axiom; 5] = [Axiom::E1, Axiom::E2, Axiom::E3, Axiom::E4, Axiom::E5];
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Holds,
    Fails,
    /// Nothing refuted, but some instance stayed open within the bound.
    Unknown(u64),
}

/// Answer of a model capability that may not be provided.
#[derive(Clone, Debug, PartialEq)]
pub enum Solve<T> {
    Unsupported,
    Found(T),
    NoSolution,
}

/// Outcome of the search for n with n·x > y.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Witness {
    /// The smallest such n.
    Witness(u64),
    NoneUpTo(u64),
    /// No n exists at all, by the model's exact decision.
    Never,
}

impl Witness {
    pub fn found(self) -> Option<u64> {
        match self {
            Witness::Witness(n) => Some(n),
            _ => None,
        }
    }
}

/// An ordered additive structure with a finite sample set to check against.
pub trait MagnitudeModel {
    type Elem: Clone;

    fn name(&self) -> &'static str;

    fn samples(&self) -> &[Self::Elem];

    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;

    fn less(&self, x: &Self::Elem, y: &Self::Elem) -> bool;

    fn describe(&self, x: &Self::Elem) -> String;

    fn equal(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        !self.less(x, y) && !self.less(y, x)
    }

    /// `n·x`; the default adds by doubling.
    fn multiple(&self, x: &Self::Elem, n: u64) -> Self::Elem {
        assert!(n >= 1, "multiples start at 1");
        let mut result: Option<Self::Elem> = None;
        let mut power = x.clone();
        let mut k = n;
        loop {
            if k & 1 == 1 {
                result = Some(match result {
                    None => power.clone(),
                    Some(r) => self.add(&r, &power),
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            power = self.add(&power, &power);
        }
        result.expect("n >= 1")
    }

    /// A z with `x + z = y`.
    fn difference(&self, _x: &Self::Elem, _y: &Self::Elem) -> Solve<Self::Elem> {
        Solve::Unsupported
    }

    /// A y with `x = n·y`.
    fn nth_part(&self, _x: &Self::Elem, _n: u64) -> Solve<Self::Elem> {
        Solve::Unsupported
    }

    /// A v with `x : y :: z : v`.
    fn fourth_proportional(&self, _x: &Self::Elem, _y: &Self::Elem, _z: &Self::Elem) -> Solve<Self::Elem> {
        Solve::Unsupported
    }

    /// Exact answer to "is there any n with n·x > y", when the model knows.
    fn exact_archimedean(&self, _x: &Self::Elem, _y: &Self::Elem) -> Option<bool> {
        None
    }
}

/// Smallest `n ≤ bound` with `n·x > y`. Multiples of a positive element
/// grow monotonically, so this bisects on `n`.
pub fn archimedean_witness<M: MagnitudeModel>(model: &M, x: &M::Elem, y: &M::Elem, bound: u64) -> Witness {
    if model.exact_archimedean(x, y) == Some(false) {
        return Witness::Never;
    }
    let exceeds = |n: u64| model.less(y, &model.multiple(x, n));
    if bound == 0 || !exceeds(bound) {
        return Witness::NoneUpTo(bound);
    }
    let (mut lo, mut hi) = (0, bound);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if exceeds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Witness::Witness(hi)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub elements: Vec<String>,
    pub certificate: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub model: &'static str,
    pub verdict: Verdict,
    pub bound: u64,
    /// Number of instances examined.
    pub checked: usize,
    pub witnesses: Vec<Evidence>,
    pub witness_count: usize,
    pub counterexamples: Vec<Evidence>,
    pub counterexample_count: usize,
    pub note: String,
}

impl AxiomReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

struct Tally {
    checked: usize,
    witnesses: Vec<Evidence>,
    witness_count: usize,
    counterexamples: Vec<Evidence>,
    counterexample_count: usize,
    open: usize,
}

impl Tally {
    fn new() -> Self {
        Tally { checked: 0, witnesses: Vec::new(), witness_count: 0, counterexamples: Vec::new(), counterexample_count: 0, open: 0 }
    }

    fn witness(&mut self, elements: Vec<String>, certificate: String) {
        self.checked += 1;
        self.witness_count += 1;
        if self.witnesses.len() < MAX_EVIDENCE {
            self.witnesses.push(Evidence { elements, certificate });
        }
    }

    fn counterexample(&mut self, elements: Vec<String>, certificate: String) {
        self.checked += 1;
        self.counterexample_count += 1;
        if self.counterexamples.len() < MAX_EVIDENCE {
            self.counterexamples.push(Evidence { elements, certificate });
        }
    }

    fn open(&mut self) {
        self.checked += 1;
        self.open += 1;
    }

    fn finish(self, axiom: Axiom, model: &'static str, bound: u64, note: String) -> AxiomReport {
        let verdict = if self.counterexample_count > 0 {
            Verdict::Fails
        } else if self.open > 0 {
            Verdict::Unknown(bound)
        } else {
            Verdict::Holds
        };
        let note = match (verdict, note.is_empty()) {
            (Verdict::Holds, true) => format!("holds on all {} sampled instances", self.checked),
            (Verdict::Unknown(_), true) => format!("{} of {} instances undecided", self.open, self.checked),
            _ => note,
        };
        AxiomReport {
            axiom,
            model,
            verdict,
            bound,
            checked: self.checked,
            witnesses: self.witnesses,
            witness_count: self.witness_count,
            counterexamples: self.counterexamples,
            counterexample_count: self.counterexample_count,
            note,
        }
    }
}

/// Check one axiom on every sample pair or triple of `model`.
pub fn check_axiom<M: MagnitudeModel>(model: &M, axiom: Axiom, bound: u64) -> AxiomReport {
    let s = model.samples();
    let d = |x: &M::Elem| model.describe(x);
    let mut tally = Tally::new();
    let mut note = String::new();
    match axiom {
        Axiom::E1 => {
            for x in s {
                for y in s {
                    let elements = vec![d(x), d(y)];
                    match archimedean_witness(model, x, y, bound) {
                        Witness::Witness(n) => tally.witness(elements, format!("n={n}")),
                        Witness::Never => tally.counterexample(elements, "no finite n exists".into()),
                        Witness::NoneUpTo(_) if model.exact_archimedean(x, y) == Some(true) => tally.open(),
                        Witness::NoneUpTo(n) => tally.counterexample(elements, format!("no n up to {n}")),
                    }
                }
            }
        }
        Axiom::E2 => {
            for x in s {
                for y in s.iter().filter(|y| model.less(x, y)) {
                    let elements = vec![d(x), d(y)];
                    match model.difference(x, y) {
                        Solve::Found(z) if model.equal(&model.add(x, &z), y) => tally.witness(elements, format!("z={}", d(&z))),
                        Solve::Found(z) => tally.counterexample(elements, format!("x+z != y for z={}", d(&z))),
                        Solve::NoSolution => tally.counterexample(elements, "no z with x+z=y".into()),
                        Solve::Unsupported => match s.iter().find(|z| model.equal(&model.add(x, z), y)) {
                            Some(z) => tally.witness(elements, format!("z={}", d(z))),
                            None => tally.open(),
                        },
                    }
                }
            }
        }
        Axiom::E3 => {
            for x in s {
                for y in s.iter().filter(|y| model.less(x, y)) {
                    for z in s {
                        let elements = vec![d(x), d(y), d(z)];
                        if model.less(&model.add(x, z), &model.add(y, z)) {
                            tally.witness(elements, "x+z < y+z".into());
                        } else {
                            tally.counterexample(elements, "x+z >= y+z".into());
                        }
                    }
                }
            }
        }
        Axiom::E4 => {
            for x in s {
                for n in 1..=bound.min(MAX_DIVISOR) {
                    let elements = vec![d(x)];
                    match model.nth_part(x, n) {
                        Solve::Found(y) if model.equal(&model.multiple(&y, n), x) => {
                            tally.witness(elements, format!("n={n}, y={}", d(&y)))
                        }
                        Solve::Found(y) => tally.counterexample(elements, format!("n={n}: {n}*y != x for y={}", d(&y))),
                        Solve::NoSolution => tally.counterexample(elements, format!("n={n}: no y with x={n}*y")),
                        Solve::Unsupported => match s.iter().find(|y| model.equal(&model.multiple(y, n), x)) {
                            Some(y) => tally.witness(elements, format!("n={n}, y={}", d(y))),
                            None => tally.open(),
                        },
                    }
                }
            }
        }
        Axiom::E5 => {
            let mut unsupported = false;
            'triples: for x in s {
                for y in s {
                    for z in s {
                        let elements = vec![d(x), d(y), d(z)];
                        match model.fourth_proportional(x, y, z) {
                            Solve::Found(v) => tally.witness(elements, format!("v={}", d(&v))),
                            Solve::NoSolution => tally.counterexample(elements, "no fourth proportional".into()),
                            Solve::Unsupported => {
                                unsupported = true;
                                tally.open();
                                break 'triples;
                            }
                        }
                    }
                }
            }
            if unsupported {
                note = "model supplies no fourth proportional; not decidable by bounded search".into();
            }
        }
    }
    if note.is_empty() && tally.counterexample_count > 0 && axiom == Axiom::E1 && bound > 0 {
        note = format!("{} of {} pairs have no witness", tally.counterexample_count, tally.checked);
    }
    tally.finish(axiom, model.name(), bound, note)
}

/// Reports for E1 through E5 in order.
pub fn check_all<M: MagnitudeModel>(model: &M, bound: u64) -> Vec<AxiomReport> {
    Axiom::ALL.iter().map(|&a| check_axiom(model, a, bound)).collect()
}

/// Run all axioms on a model chosen by CLI name.
pub fn check_named(name: &str, seed: u64, bound: u64) -> Result<Vec<AxiomReport>, MagnitudeError> {
    match name {
        "rationals" => Ok(check_all(&RationalModel::seeded(seed), bound)),
        "lc-positive" => Ok(check_all(&LcPositiveModel::seeded(seed), bound)),
        "horn" => Ok(check_all(&HornModel::seeded(seed), bound)),
        other => Err(MagnitudeError::UnknownModel(other.into())),
    }
}

fn require_positive(x: &LcNumber) -> Result<(), MagnitudeError> {
    if x.is_positive() {
        Ok(())
    } else {
        Err(MagnitudeError::NonPositive(x.to_string()))
    }
}

/// Some finite multiple of each exceeds the other; for LC numbers exactly
/// when both have the same order.
pub fn comparable(x: &LcNumber, y: &LcNumber) -> Result<bool, MagnitudeError> {
    require_positive(x)?;
    require_positive(y)?;
    Ok(x.ord() == y.ord())
}

/// `x < y` and no finite multiple of `x` reaches `y`: `x` has strictly
/// higher order.
pub fn incomparably_smaller(x: &LcNumber, y: &LcNumber) -> Result<bool, MagnitudeError> {
    require_positive(x)?;
    require_positive(y)?;
    Ok(x.ord() > y.ord())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lc::int;

    fn lc(s: &str) -> LcNumber {
        s.parse().unwrap()
    }

    #[test]
    fn exact_comparability() {
        assert!(comparable(&lc("3"), &lc("5")).unwrap());
        assert!(!comparable(&lc("eps"), &lc("1")).unwrap());
        assert!(comparable(&lc("eps"), &lc("7*eps")).unwrap());
        assert!(incomparably_smaller(&lc("eps"), &lc("1")).unwrap());
        assert!(!incomparably_smaller(&lc("1"), &lc("2")).unwrap());
        assert!(incomparably_smaller(&lc("eps^2"), &lc("eps")).unwrap());
        assert!(matches!(comparable(&lc("-eps"), &lc("1")), Err(MagnitudeError::NonPositive(_))));
        assert!(incomparably_smaller(&lc("0"), &lc("1")).is_err());
    }

    #[test]
    fn witnesses() {
        let q = RationalModel::seeded(0);
        assert_eq!(archimedean_witness(&q, &int(3), &int(10), DEFAULT_BOUND), Witness::Witness(4));
        assert_eq!(archimedean_witness(&q, &int(3), &int(5), DEFAULT_BOUND), Witness::Witness(2));
        assert_eq!(archimedean_witness(&q, &int(3), &int(1), DEFAULT_BOUND), Witness::Witness(1));
        assert_eq!(archimedean_witness(&q, &int(1), &int(7), 5), Witness::NoneUpTo(5));
        let m = LcPositiveModel::seeded(0);
        assert_eq!(archimedean_witness(&m, &lc("eps"), &lc("1"), DEFAULT_BOUND), Witness::Never);
        assert_eq!(archimedean_witness(&m, &lc("eps"), &lc("7*eps"), DEFAULT_BOUND), Witness::Witness(8));
    }

    #[test]
    fn doubling_matches_repeated_addition() {
        let h = HornModel::seeded(0);
        let x = HornAngle::new(int(1), int(-2)).unwrap();
        let mut acc = x.clone();
        for n in 2..20 {
            acc = h.add(&acc, &x);
            assert_eq!(h.multiple(&x, n), acc);
        }
    }

    #[test]
    fn rationals_are_archimedean() {
        let reports = check_all(&RationalModel::seeded(42), DEFAULT_BOUND);
        for r in &reports {
            assert_eq!(r.verdict, Verdict::Holds, "{:?}", r.axiom);
            assert!(r.witness_count > 0);
        }
    }

    #[test]
    fn small_bound_leaves_rationals_undecided() {
        let r = check_axiom(&RationalModel::seeded(42), Axiom::E1, 2);
        assert_eq!(r.verdict, Verdict::Unknown(2));
        assert!(r.counterexamples.is_empty());
    }

    #[test]
    fn lc_positive_is_not() {
        let m = LcPositiveModel::seeded(42);
        let r = check_axiom(&m, Axiom::E1, DEFAULT_BOUND);
        assert_eq!(r.verdict, Verdict::Fails);
        assert_eq!(r.counterexamples[0].elements, ["eps", "1"]);
        assert_eq!(r.counterexamples[0].certificate, "no finite n exists");
        for a in [Axiom::E2, Axiom::E3, Axiom::E4, Axiom::E5] {
            assert_eq!(check_axiom(&m, a, DEFAULT_BOUND).verdict, Verdict::Holds, "{a}");
        }
    }

    #[test]
    fn horn_model_verdicts() {
        let h = HornModel::seeded(42);
        let r = check_axiom(&h, Axiom::E1, DEFAULT_BOUND);
        assert_eq!(r.verdict, Verdict::Fails);
        assert_eq!(r.counterexamples[0].elements, ["(0,1)", "(1,0)"]);
        assert_eq!(r.counterexamples[0].certificate, "no n up to 100000");
        assert_eq!(check_axiom(&h, Axiom::E2, DEFAULT_BOUND).verdict, Verdict::Holds);
        assert_eq!(check_axiom(&h, Axiom::E3, DEFAULT_BOUND).verdict, Verdict::Holds);
        assert_eq!(check_axiom(&h, Axiom::E5, DEFAULT_BOUND).verdict, Verdict::Unknown(DEFAULT_BOUND));
    }

    #[test]
    fn fails_always_has_a_counterexample() {
        for name in ["rationals", "lc-positive", "horn"] {
            for r in check_named(name, 7, 1000).unwrap() {
                if r.verdict == Verdict::Fails {
                    assert!(!r.counterexamples.is_empty());
                }
                assert!(r.witnesses.len() <= MAX_EVIDENCE);
            }
        }
        assert!(matches!(check_named("reals", 0, 10), Err(MagnitudeError::UnknownModel(_))));
    }

    #[test]
    fn report_json_shape() {
        let r = check_axiom(&HornModel::seeded(42), Axiom::E5, 10);
        let v = r.to_json();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(&keys[..5], ["axiom", "model", "verdict", "bound", "checked"]);
        assert_eq!(v["verdict"], serde_json::json!({"Unknown": 10}));
        assert_eq!(v["axiom"], "E5");
    }
}
