use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{MagnitudeModel, Solve};
use crate::lc::{format_rational, int, ratio, Coefficient, LcNumber, Mode, Rational};

const RATIONAL_SAMPLES: usize = 12;
const LC_SAMPLES: usize = 10;

/// Positive rationals under `+` and `<`.
#[derive(Clone, Debug)]
pub struct RationalModel {
    samples: Vec<Rational>,
}

impl RationalModel {
    pub fn new(samples: Vec<Rational>) -> Self {
        assert!(samples.iter().all(|q| q.is_positive()), "samples must be positive");
        RationalModel { samples }
    }

    pub fn seeded(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut samples = vec![int(1), ratio(1, 2), int(3)];
        while samples.len() < RATIONAL_SAMPLES {
            samples.push(ratio(rng.random_range(1..=40), rng.random_range(1..=40)));
        }
        RationalModel::new(samples)
    }
}

impl MagnitudeModel for RationalModel {
    type Elem = Rational;

    fn name(&self) -> &'static str {
        "rationals"
    }

    fn samples(&self) -> &[Rational] {
        &self.samples
    }

    fn add(&self, x: &Rational, y: &Rational) -> Rational {
        x + y
    }

    fn less(&self, x: &Rational, y: &Rational) -> bool {
        x < y
    }

    fn describe(&self, x: &Rational) -> String {
        format_rational(x)
    }

    fn multiple(&self, x: &Rational, n: u64) -> Rational {
        x * Rational::from_integer(n.into())
    }

    fn difference(&self, x: &Rational, y: &Rational) -> Solve<Rational> {
        if x < y {
            Solve::Found(y - x)
        } else {
            Solve::NoSolution
        }
    }

    fn nth_part(&self, x: &Rational, n: u64) -> Solve<Rational> {
        Solve::Found(x / Rational::from_integer(n.into()))
    }

    fn fourth_proportional(&self, x: &Rational, y: &Rational, z: &Rational) -> Solve<Rational> {
        Solve::Found(z * y / x)
    }

    fn exact_archimedean(&self, _x: &Rational, _y: &Rational) -> Option<bool> {
        Some(true)
    }
}

/// Positive exact LC numbers. Infinitesimals make it non-Archimedean.
#[derive(Clone, Debug)]
pub struct LcPositiveModel {
    samples: Vec<LcNumber>,
}

fn random_lc(rng: &mut ChaCha8Rng) -> LcNumber {
    let lead = rng.random_range(-1..=2);
    let mut terms = vec![(lead, Coefficient::Exact(ratio(rng.random_range(1..=9), rng.random_range(1..=4))))];
    if rng.random_bool(0.5) {
        let exp = lead + rng.random_range(1..=2);
        terms.push((exp, Coefficient::Exact(int(rng.random_range(-5..=5)))));
    }
    LcNumber::from_terms(Mode::Exact, terms).expect("exact terms")
}

impl LcPositiveModel {
    pub fn new(samples: Vec<LcNumber>) -> Self {
        assert!(samples.iter().all(|x| x.is_positive() && x.mode() == Mode::Exact), "samples must be positive and exact");
        LcPositiveModel { samples }
    }

    pub fn seeded(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fixed = ["eps", "1", "2 + eps", "eps^-1"];
        let mut samples: Vec<LcNumber> = fixed.iter().map(|s| s.parse().expect("literal")).collect();
        while samples.len() < LC_SAMPLES {
            let x = random_lc(&mut rng);
            if !samples.contains(&x) {
                samples.push(x);
            }
        }
        LcPositiveModel::new(samples)
    }
}

impl MagnitudeModel for LcPositiveModel {
    type Elem = LcNumber;

    fn name(&self) -> &'static str {
        "lc-positive"
    }

    fn samples(&self) -> &[LcNumber] {
        &self.samples
    }

    fn add(&self, x: &LcNumber, y: &LcNumber) -> LcNumber {
        x + y
    }

    fn less(&self, x: &LcNumber, y: &LcNumber) -> bool {
        x < y
    }

    fn describe(&self, x: &LcNumber) -> String {
        x.to_string()
    }

    fn multiple(&self, x: &LcNumber, n: u64) -> LcNumber {
        x.try_scale(&Coefficient::Exact(Rational::from_integer(n.into()))).expect("exact")
    }

    fn difference(&self, x: &LcNumber, y: &LcNumber) -> Solve<LcNumber> {
        if x < y {
            Solve::Found(y - x)
        } else {
            Solve::NoSolution
        }
    }

    fn nth_part(&self, x: &LcNumber, n: u64) -> Solve<LcNumber> {
        let inv = Rational::one() / Rational::from_integer(n.into());
        Solve::Found(x.try_scale(&Coefficient::Exact(inv)).expect("exact"))
    }

    fn fourth_proportional(&self, x: &LcNumber, y: &LcNumber, z: &LcNumber) -> Solve<LcNumber> {
        match z.try_mul(y).and_then(|zy| zy.try_div(x)) {
            Ok(v) if !v.is_zero() => Solve::Found(v),
            _ => Solve::NoSolution,
        }
    }

    /// Some multiple of `x` exceeds `y` exactly when `x` is of no
    /// higher order than `y`.
    fn exact_archimedean(&self, x: &LcNumber, y: &LcNumber) -> Option<bool> {
        Some(x.ord() <= y.ord())
    }
}
