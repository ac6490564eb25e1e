//! One PASS/FAIL line per acceptance criterion. Sizes and tolerances are
//! fixed here; the process exits nonzero if any criterion fails.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use fictio_core::diff::{differentiate, point_symmetry_check};
use fictio_core::expr::{eval_lc, eval_rational, parse};
use fictio_core::lc::{int, Coefficient, LcNumber, Mode, Rational, DEFAULT_WINDOW};
use fictio_core::magnitudes::{
    archimedean_witness, check_axiom, comparable, Axiom, HornAngle, HornModel, LcPositiveModel, MagnitudeModel, Verdict,
    Witness, DEFAULT_BOUND,
};
use fictio_core::oracle::{compare_tracks, limit_derivative, verify_certificate, Verdict as TrackVerdict, DEFAULT_STEPS};
use fictio_core::sample;
use fictio_core::tlh::{gen_equal, tlh, tlh_trace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;
const FLOAT_RELATIVE: f64 = 1e-9;
const CERTIFICATE_SAMPLES: usize = 10;
/// Ring identities are checked with a window wide enough that products of
/// three inputs lose nothing.
const RING_WINDOW: u32 = 32;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, elapsed: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, || format!("{what} took {elapsed:?}, limit {limit:?}"))
}

fn tlh_identity() -> Outcome {
    let a: LcNumber = "eps + eps^2".parse().unwrap();
    let trace = tlh_trace(&a, None).unwrap();
    ensure(tlh(&a) == LcNumber::eps(1).unwrap(), || format!("tlh gave {}", tlh(&a)))?;
    let discarded: Vec<(i64, Coefficient)> = trace.discarded.iter().map(|t| (t.exp, t.coeff.clone())).collect();
    ensure(discarded == [(2, Coefficient::Exact(int(1)))], || format!("discarded {discarded:?}"))?;

    let c = compare_tracks(&parse("x^2 + x^3").unwrap(), &Coefficient::Exact(int(0)), DEFAULT_WINDOW);
    ensure(c.verdict == Some(TrackVerdict::ExactMatch), || format!("verdict {:?}", c.verdict))?;
    let b = c.b_result.as_ref().unwrap();
    ensure(b.derivative.is_zero(), || format!("derivative {}", b.derivative))?;
    ensure(!b.trace.discarded.is_empty() && b.trace.discarded.iter().all(|t| !t.coeff.is_zero()), || {
        "no nonzero discarded tail".into()
    })?;
    Ok(format!("tlh(eps + eps^2) = eps; x^2 + x^3 at 0 discards {}", b.trace.discarded_value()))
}

fn archimedean_violation() -> Outcome {
    let start = Instant::now();
    let model = LcPositiveModel::seeded(42);
    let w = archimedean_witness(&model, &LcNumber::eps(1).unwrap(), &LcNumber::one(Mode::Exact), DEFAULT_BOUND);
    ensure(w == Witness::Never, || format!("witness {w:?}"))?;
    let r = check_axiom(&model, Axiom::E1, DEFAULT_BOUND);
    ensure(r.verdict == Verdict::Fails, || format!("E1 {:?}", r.verdict))?;
    ensure(r.counterexamples[0].elements == ["eps", "1"], || format!("{:?}", r.counterexamples[0]))?;
    let elapsed = start.elapsed();
    within(Duration::from_secs(1), elapsed, "E1 on lc-positive")?;
    Ok(format!("(eps, 1) proven negative; E1 Fails with {} counterexamples in {elapsed:.2?}", r.counterexample_count))
}

fn horn_counter_model() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let horn = HornAngle::horn(int(1));
    for _ in 0..100 {
        let r = sample::rational(&mut rng, 1..=1000, 1_000_000);
        let acute = HornAngle::acute(r.clone()).unwrap();
        ensure(horn < acute, || format!("(0,1) not below ({r},0)"))?;
    }
    let r = check_axiom(&HornModel::seeded(42), Axiom::E1, DEFAULT_BOUND);
    ensure(r.verdict == Verdict::Fails, || format!("E1 {:?}", r.verdict))?;
    ensure(r.counterexamples[0].elements == ["(0,1)", "(1,0)"], || format!("{:?}", r.counterexamples[0]))?;
    Ok("(0,1) < (r,0) for 100 sampled r; E1 Fails on horn".into())
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut matches = 0;
    for _ in 0..1000 {
        let e = sample::polynomial(&mut rng, 8, 100);
        let x0 = Coefficient::Exact(sample::rational(&mut rng, -50..=50, 30));
        let c = compare_tracks(&e, &x0, DEFAULT_WINDOW);
        ensure(c.verdict == Some(TrackVerdict::ExactMatch), || format!("{e} at {x0}: {:?}", c.verdict))?;
        matches += 1;
    }
    let elapsed = start.elapsed();
    within(Duration::from_secs(20), elapsed, "oracle comparison")?;
    Ok(format!("{matches}/1000 ExactMatch in {elapsed:.2?}"))
}

/// Positive LC numbers with the exact decision withheld, so that witness
/// search has to find or miss every multiple on its own.
struct SearchOnly;

impl MagnitudeModel for SearchOnly {
    type Elem = LcNumber;

    fn name(&self) -> &'static str {
        "lc-search"
    }

    fn samples(&self) -> &[LcNumber] {
        &[]
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
        x.try_scale(&Coefficient::Exact(Rational::from_integer(n.into()))).unwrap()
    }
}

fn comparability_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let (mut yes, mut no) = (0, 0);
    for _ in 0..1000 {
        let x = sample::positive_lc(&mut rng, -2..=2);
        let y = sample::positive_lc(&mut rng, -2..=2);
        let decided = comparable(&x, &y).unwrap();
        let there = archimedean_witness(&SearchOnly, &x, &y, DEFAULT_BOUND).found();
        let back = archimedean_witness(&SearchOnly, &y, &x, DEFAULT_BOUND).found();
        let searched = there.is_some() && back.is_some();
        ensure(decided == searched, || format!("{x} vs {y}: exact {decided}, search {there:?}/{back:?}"))?;
        if decided {
            yes += 1;
        } else {
            no += 1;
        }
    }
    Ok(format!("1000/1000 agree ({yes} comparable, {no} not) up to N={DEFAULT_BOUND}"))
}

fn transfer() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    for _ in 0..10_000 {
        let [a, b, c] = [(); 3].map(|_| sample::lc(&mut rng, 100, -3..=3, 4, RING_WINDOW));
        let laws = [
            (&(&a + &b) + &c) == (&a + &(&b + &c)),
            (&a + &b) == (&b + &a),
            (&(&a * &b) * &c) == (&a * &(&b * &c)),
            (&a * &b) == (&b * &a),
            (&a * &(&b + &c)) == (&(&a * &b) + &(&a * &c)),
        ];
        ensure(laws.iter().all(|&ok| ok), || format!("ring law fails on {a}; {b}; {c}: {laws:?}"))?;
    }
    for _ in 0..1000 {
        let e = sample::polynomial(&mut rng, 8, 100);
        let q = sample::rational(&mut rng, -50..=50, 30);
        let lifted = eval_lc(&e, &LcNumber::from_rational(q.clone())).unwrap();
        let direct = LcNumber::from_rational(eval_rational(&e, &q).unwrap());
        ensure(lifted == direct, || format!("{e} at {q}: {lifted} vs {direct}"))?;
    }
    Ok("10000 ring triples exact; 1000 polynomial transfers exact".into())
}

fn float_convergence() -> Outcome {
    let cases: [(&str, [f64; 5]); 4] = [
        ("sin(x)", [0.0, 0.5, 1.0, 2.0, -1.3]),
        ("cos(x)", [0.3, 1.0, 2.0, -0.7, 3.0]),
        ("exp(x)", [-2.0, -0.5, 0.0, 1.0, 2.5]),
        ("ln(x)", [0.5, 1.0, 2.0, 3.7, 10.0]),
    ];
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for (src, points) in cases {
        let e = parse(src).unwrap();
        for (i, x0) in points.into_iter().enumerate() {
            let x0c = Coefficient::Float(x0);
            let b = differentiate(&e, &x0c, DEFAULT_WINDOW).map_err(|err| format!("{src} at {x0}: {err}"))?.derivative.to_f64();
            let cert = limit_derivative(&e, &x0c, DEFAULT_STEPS).map_err(|err| format!("{src} at {x0}: {err}"))?;
            let a = cert.richardson.value.to_f64();
            let rel = (b - a).abs() / b.abs();
            worst = worst.max(rel);
            ensure(rel < FLOAT_RELATIVE, || format!("{src} at {x0}: B {b} vs Richardson {a}, relative {rel:e}"))?;
            ensure(!cert.eps_delta_pairs.is_empty(), || format!("{src} at {x0}: no certificate"))?;
            pairs += cert.eps_delta_pairs.len();
            let ok = verify_certificate(&e, &x0c, &cert, CERTIFICATE_SAMPLES, SEED + i as u64).unwrap();
            ensure(ok, || format!("{src} at {x0}: certificate fails re-verification"))?;
        }
    }
    Ok(format!("20 points, worst relative gap {worst:.1e}; {pairs} certificates re-verified"))
}

fn tangent_symmetry() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    for _ in 0..100 {
        let e = sample::polynomial(&mut rng, 8, 100);
        let x0 = Coefficient::Exact(sample::rational(&mut rng, -50..=50, 30));
        ensure(point_symmetry_check(&e, &x0, DEFAULT_WINDOW).unwrap(), || format!("{e} at {x0}"))?;
    }
    Ok("100/100 polynomials denote from both points".into())
}

/// Nonzero LC number of exactly the given order.
fn of_order(rng: &mut ChaCha8Rng, k: i64) -> LcNumber {
    let lead = sample::rational(rng, 1..=20, 9);
    let lead = if rng.random_bool(0.5) { -lead } else { lead };
    let tail = sample::lc(rng, 20, k + 1..=k + 4, 3, DEFAULT_WINDOW);
    &LcNumber::monomial(Coefficient::Exact(lead), k) + &tail
}

fn gen_equal_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    let one = LcNumber::one(Mode::Exact);
    let mut transitive_chains = 0;
    for i in 0..10_000 {
        let a = sample::lc(&mut rng, 20, -3..=3, 4, DEFAULT_WINDOW);
        let b = sample::lc(&mut rng, 20, -3..=3, 4, DEFAULT_WINDOW);
        let ab = gen_equal(&a, &b).unwrap();
        ensure(gen_equal(&a, &a).unwrap(), || format!("not reflexive at {a}"))?;
        ensure(ab == gen_equal(&b, &a).unwrap(), || format!("not symmetric at {a}, {b}"))?;
        ensure(!ab || tlh(&a) == tlh(&b), || format!("{a} ~ {b} but leading terms differ"))?;
        ensure(tlh(&tlh(&a)) == tlh(&a), || format!("tlh not idempotent at {a}"))?;
        ensure(tlh_trace(&a, None).unwrap().reconstruct() == a, || format!("trace of {a} does not reconstruct"))?;
        ensure(tlh_trace(&a, Some(&one)).unwrap().reconstruct() == a, || format!("relative trace of {a}"))?;

        // same-order triples; every other one shares a leading term so that
        // both premises of transitivity actually occur
        let k = rng.random_range(-2..=2);
        let x = of_order(&mut rng, k);
        let (y, z) = if i % 2 == 0 {
            let lead = LcNumber::monomial(x.coeff(k), k);
            let y = &lead + &sample::lc(&mut rng, 20, k + 1..=k + 4, 3, DEFAULT_WINDOW);
            let z = &lead + &sample::lc(&mut rng, 20, k + 1..=k + 4, 3, DEFAULT_WINDOW);
            (y, z)
        } else {
            (of_order(&mut rng, k), of_order(&mut rng, k))
        };
        if gen_equal(&x, &y).unwrap() && gen_equal(&y, &z).unwrap() {
            transitive_chains += 1;
            ensure(gen_equal(&x, &z).unwrap(), || format!("not transitive: {x}, {y}, {z}"))?;
        }

        let c = of_order(&mut rng, 0);
        ensure(ab == gen_equal(&(&c * &a), &(&c * &b)).unwrap(), || format!("scaling by {c} changes {a} ~ {b}"))?;

        let big = of_order(&mut rng, k).abs();
        let gap = rng.random_range(1..=3);
        let small = of_order(&mut rng, k + gap).abs();
        let sum = &big + &small;
        ensure(big < sum && gen_equal(&big, &sum).unwrap(), || format!("y < y+x with collapse fails: {big}, {small}"))?;
    }
    ensure(transitive_chains > 1000, || format!("only {transitive_chains} transitive chains exercised"))?;
    Ok(format!("10000 cases; {transitive_chains} transitive chains"))
}

const GOLDEN: [(&str, &[&str]); 6] = [
    ("deriv.json", &["--json", "deriv", "x^2", "--at", "3"]),
    ("tangent.json", &["--json", "tangent", "x^3", "--at", "2"]),
    ("tlh.json", &["--json", "tlh", "eps + eps^2"]),
    ("axioms.json", &["--json", "--seed", "42", "axioms", "lc-positive"]),
    ("compare.json", &["--json", "--seed", "42", "compare", "x^2 + x^3", "--at", "0"]),
    ("eval.json", &["--json", "eval", "x^2 + 1/x", "--at", "2 + eps", "--emit-ast"]),
];

fn golden_files() -> Outcome {
    for (file, args) in GOLDEN {
        let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", file].iter().collect();
        let expected = std::fs::read(&path).map_err(|e| format!("{file}: {e}"))?;
        for _ in 0..2 {
            let out = Command::new(env!("CARGO_BIN_EXE_fictio")).args(args).env_remove("FICTIO_WINDOW").output().unwrap();
            ensure(out.status.success(), || format!("{file}: exit {:?}", out.status.code()))?;
            ensure(out.stdout == expected, || format!("{file}: output differs from golden"))?;
        }
    }
    Ok("6/6 invocations byte-identical, twice each".into())
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("tlh identity and nonzero discarded tail", tlh_identity),
        ("Archimedean violation on lc-positive", archimedean_violation),
        ("horn-angle counter-model", horn_counter_model),
        ("B-track vs symbolic oracle on polynomials", oracle_equivalence),
        ("exact vs searched comparability", comparability_agreement),
        ("transfer: ring laws and evaluation", transfer),
        ("float-mode convergence and certificates", float_convergence),
        ("symmetry of the two tangent points", tangent_symmetry),
        ("gen_equal and tlh laws", gen_equal_suite),
        ("CLI golden files", golden_files),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{:.2?}]", i + 1, t.elapsed()),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{:.2?}]", i + 1, t.elapsed());
            }
        }
    }
    let total = start.elapsed();
    println!("{} of {} criteria passed in {total:.2?}", criteria.len() - failed, criteria.len());
    if failed == 0 && total < Duration::from_secs(60) {
        ExitCode::SUCCESS
    } else {
        if total >= Duration::from_secs(60) {
            println!("FAIL total runtime {total:.2?} exceeds 60s");
        }
        ExitCode::FAILURE
    }
}
