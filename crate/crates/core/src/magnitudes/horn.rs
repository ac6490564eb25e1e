use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use super::{check_axiom, AxiomReport, Axiom, MagnitudeError, MagnitudeModel, Solve, DEFAULT_BOUND};
use crate::lc::{format_rational, int, ratio, Coefficient, LcNumber, Mode, Rational};
use crate::tlh::{gen_equal, tlh};

const HORN_SAMPLES: usize = 10;
const DEMO_SEED: u64 = 42;
const DEMO_ACUTE_SAMPLES: usize = 100;

/// An angle with a rectilinear part and a curvature part, ordered
/// lexicographically. `(0, c)` with `c > 0` lies below every `(r, 0)` with
/// `r > 0`, as the angle between a circle and its tangent does.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HornAngle {
    rect: Rational,
    curv: Rational,
}

impl HornAngle {
    pub fn new(rect: Rational, curv: Rational) -> Result<Self, MagnitudeError> {
        if rect.is_negative() {
            return Err(MagnitudeError::NonPositive(format!("({},{})", format_rational(&rect), format_rational(&curv))));
        }
        Ok(HornAngle { rect, curv })
    }

    pub fn horn(curv: Rational) -> Self {
        HornAngle::new(Rational::zero(), curv).expect("zero rectilinear part")
    }

    pub fn acute(rect: Rational) -> Result<Self, MagnitudeError> {
        HornAngle::new(rect, Rational::zero())
    }

    pub fn rect(&self) -> &Rational {
        &self.rect
    }

    pub fn curv(&self) -> &Rational {
        &self.curv
    }

    pub fn is_positive(&self) -> bool {
        self.rect.is_positive() || (self.rect.is_zero() && self.curv.is_positive())
    }

    pub fn plus(&self, other: &HornAngle) -> HornAngle {
        HornAngle { rect: &self.rect + &other.rect, curv: &self.curv + &other.curv }
    }

    /// `rect + curv·ε`; order and addition carry over.
    pub fn embed(&self) -> LcNumber {
        LcNumber::from_terms(Mode::Exact, [(0, Coefficient::Exact(self.rect.clone())), (1, Coefficient::Exact(self.curv.clone()))])
            .expect("exact terms")
    }
}

impl fmt::Display for HornAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", format_rational(&self.rect), format_rational(&self.curv))
    }
}

impl Serialize for HornAngle {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Positive horn angles. There is no fourth proportional, so E5 is open.
#[derive(Clone, Debug)]
pub struct HornModel {
    samples: Vec<HornAngle>,
}

impl HornModel {
    pub fn new(samples: Vec<HornAngle>) -> Self {
        assert!(samples.iter().all(HornAngle::is_positive), "samples must be positive");
        HornModel { samples }
    }

    pub fn seeded(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut samples = vec![
            HornAngle::horn(int(1)),
            HornAngle::acute(int(1)).expect("positive"),
            HornAngle::new(ratio(1, 2), int(3)).expect("positive"),
        ];
        while samples.len() < HORN_SAMPLES {
            let rect = if rng.random_bool(0.3) { Rational::zero() } else { ratio(rng.random_range(1..=12), rng.random_range(1..=6)) };
            let curv = if rect.is_zero() { int(rng.random_range(1..=9)) } else { int(rng.random_range(-9..=9)) };
            let x = HornAngle::new(rect, curv).expect("nonnegative");
            if !samples.contains(&x) {
                samples.push(x);
            }
        }
        HornModel::new(samples)
    }
}

impl MagnitudeModel for HornModel {
    type Elem = HornAngle;

    fn name(&self) -> &'static str {
        "horn"
    }

    fn samples(&self) -> &[HornAngle] {
        &self.samples
    }

    fn add(&self, x: &HornAngle, y: &HornAngle) -> HornAngle {
        x.plus(y)
    }

    fn less(&self, x: &HornAngle, y: &HornAngle) -> bool {
        x < y
    }

    fn describe(&self, x: &HornAngle) -> String {
        x.to_string()
    }

    fn multiple(&self, x: &HornAngle, n: u64) -> HornAngle {
        let k = Rational::from_integer(n.into());
        HornAngle { rect: &x.rect * &k, curv: &x.curv * &k }
    }

    fn difference(&self, x: &HornAngle, y: &HornAngle) -> Solve<HornAngle> {
        if x < y {
            Solve::Found(HornAngle { rect: &y.rect - &x.rect, curv: &y.curv - &x.curv })
        } else {
            Solve::NoSolution
        }
    }

    fn nth_part(&self, x: &HornAngle, n: u64) -> Solve<HornAngle> {
        let k = Rational::from_integer(n.into());
        Solve::Found(HornAngle { rect: &x.rect / &k, curv: &x.curv / &k })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Cmp {
    LT,
    EQ,
    GT,
}

impl From<Ordering> for Cmp {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Cmp::LT,
            Ordering::Equal => Cmp::EQ,
            Ordering::Greater => Cmp::GT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AcuteComparison {
    pub acute: HornAngle,
    pub order: Cmp,
}

/// `y < y + x` in the angle model, set beside the same pair in the LC
/// embedding, where the sum collapses onto `y` under generalized equality.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmbeddingCollapse {
    pub y: HornAngle,
    pub x: HornAngle,
    pub sum: HornAngle,
    pub strictly_less: bool,
    pub y_embedded: LcNumber,
    pub sum_embedded: LcNumber,
    pub embedded_less: bool,
    pub gen_equal: bool,
    pub same_leading_term: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HornDemo {
    pub horn: HornAngle,
    pub below_every_acute: bool,
    pub acute_comparisons: Vec<AcuteComparison>,
    pub horn_vs_horn: Cmp,
    pub e1: AxiomReport,
    pub collapse: EmbeddingCollapse,
}

/// The horn angle `(0,1)` against sampled acute angles, E1 on the horn
/// model, and `y < y+x` next to its collapse in the LC embedding.
pub fn horn_angle_demo() -> HornDemo {
    let horn = HornAngle::horn(int(1));
    let mut rng = ChaCha8Rng::seed_from_u64(DEMO_SEED);
    let mut acutes = vec![ratio(1, 1_000_000)];
    while acutes.len() < DEMO_ACUTE_SAMPLES {
        acutes.push(ratio(rng.random_range(1..=1000), rng.random_range(1..=1_000_000)));
    }
    let acute_comparisons: Vec<AcuteComparison> = acutes
        .into_iter()
        .map(|r| {
            let acute = HornAngle::acute(r).expect("positive");
            let order = horn.cmp(&acute).into();
            AcuteComparison { acute, order }
        })
        .collect();
    let below_every_acute = acute_comparisons.iter().all(|c| c.order == Cmp::LT);

    let y = HornAngle::acute(int(1)).expect("positive");
    let x = horn.clone();
    let sum = y.plus(&x);
    let (ye, se) = (y.embed(), sum.embed());
    let collapse = EmbeddingCollapse {
        strictly_less: y < sum,
        embedded_less: ye < se,
        gen_equal: gen_equal(&ye, &se).expect("exact"),
        same_leading_term: tlh(&ye) == tlh(&se),
        y_embedded: ye,
        sum_embedded: se,
        y,
        x,
        sum,
    };

    HornDemo {
        horn_vs_horn: horn.cmp(&HornAngle::horn(int(1))).into(),
        e1: check_axiom(&HornModel::seeded(DEMO_SEED), Axiom::E1, DEFAULT_BOUND),
        horn,
        below_every_acute,
        acute_comparisons,
        collapse,
    }
}
