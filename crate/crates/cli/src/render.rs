use std::fmt::Write;

use fictio_core::diff::{DerivReport, TangentLine};
use fictio_core::expr::Expr;
use fictio_core::lc::{format_float, Coefficient, LcNumber};
use fictio_core::magnitudes::{AxiomReport, Verdict as AxiomVerdict};
use fictio_core::oracle::{TrackComparison, Verdict};
use fictio_core::tlh::TlhTrace;
use serde_json::{json, Value};

/// A report in both renderings.
#[derive(Debug)]
pub struct Output {
    text: String,
    json: Value,
}

impl Output {
    /// Write to stdout; a closed pipe is not an error worth reporting.
    pub fn print(&self, json: bool) {
        use std::io::Write as _;
        let mut out = std::io::stdout().lock();
        let _ = if json {
            writeln!(out, "{}", serde_json::to_string_pretty(&self.json).expect("json"))
        } else {
            write!(out, "{}", self.text)
        };
    }
}

fn discarded_text(trace: &TlhTrace) -> String {
    if trace.has_discarded() {
        trace.discarded_value().to_string()
    } else {
        "none".into()
    }
}

fn lossy_note(x: &LcNumber) -> String {
    match x.horizon() {
        Some(h) => format!("  (terms from eps^{h} on lost to the window)"),
        None => String::new(),
    }
}

pub fn deriv(r: &DerivReport) -> Output {
    let mut text = String::new();
    writeln!(text, "f(x)        = {}", r.expr).unwrap();
    writeln!(text, "x0          = {}  ({})", r.point, r.mode).unwrap();
    writeln!(text, "raw dy/dx   = {}{}", r.raw_quotient, lossy_note(&r.raw_quotient)).unwrap();
    writeln!(text, "derivative  = {}", r.derivative).unwrap();
    writeln!(text, "discarded   = {}", discarded_text(&r.trace)).unwrap();
    Output { text, json: serde_json::to_value(r).expect("json") }
}

pub fn higher(e: &Expr, x0: &Coefficient, order: u32, d: &Coefficient) -> Output {
    let text = format!("f(x)        = {e}\nx0          = {x0}\norder       = {order}\nderivative  = {d}\n");
    let json = json!({ "expr": e, "point": x0, "mode": x0.mode(), "order": order, "derivative": d });
    Output { text, json }
}

pub fn tangent(e: &Expr, t: &TangentLine) -> Output {
    let (x0, y0) = &t.touch_point;
    let intercept = if t.intercept.is_negative() { format!("- {}", t.intercept.neg()) } else { format!("+ {}", t.intercept) };
    let text = format!("f(x)        = {e}\ntouches at  = ({x0}, {y0})\ny           = {}*x {intercept}\n", t.slope);
    let json = json!({
        "expr": e,
        "point": x0,
        "slope": t.slope,
        "intercept": t.intercept,
        "touch_point": [x0, y0],
    });
    Output { text, json }
}

pub fn tlh(trace: &TlhTrace) -> Output {
    let mut text = String::new();
    writeln!(text, "input       = {}{}", trace.input, lossy_note(&trace.input)).unwrap();
    writeln!(text, "kept        = {}", trace.kept).unwrap();
    writeln!(text, "discarded   = {}", discarded_text(trace)).unwrap();
    writeln!(text, "rule        = {:?}", trace.justification).unwrap();
    Output { text, json: trace.to_json() }
}

fn verdict_text(v: AxiomVerdict) -> String {
    match v {
        AxiomVerdict::Holds => "Holds".into(),
        AxiomVerdict::Fails => "Fails".into(),
        AxiomVerdict::Unknown(b) => format!("Unknown (bound {b})"),
    }
}

pub fn axioms(model: &str, seed: u64, bound: u64, reports: &[AxiomReport]) -> Output {
    let mut text = format!("model {model}, seed {seed}, bound {bound}\n");
    for r in reports {
        writeln!(text, "{}  {:<18} {}", r.axiom, verdict_text(r.verdict), r.note).unwrap();
        if let Some(c) = r.counterexamples.first() {
            writeln!(text, "    counterexample ({}): {}", c.elements.join(", "), c.certificate).unwrap();
        } else if let Some(w) = r.witnesses.first() {
            writeln!(text, "    e.g. ({}): {}", w.elements.join(", "), w.certificate).unwrap();
        }
    }
    let json = json!({ "model": model, "seed": seed, "bound": bound, "reports": reports });
    Output { text, json }
}

fn track_verdict(v: Option<Verdict>) -> String {
    match v {
        Some(Verdict::ExactMatch) => "ExactMatch".into(),
        Some(Verdict::WithinTolerance(t)) => format!("WithinTolerance({t:e})"),
        Some(Verdict::Mismatch) => "Mismatch".into(),
        None => "none".into(),
    }
}

pub fn compare(e: &Expr, x0: &Coefficient, de: &Expr, c: &TrackComparison, reverified: Option<bool>) -> Output {
    let mut text = String::new();
    writeln!(text, "f(x) = {e} at x0 = {x0} ({})", c.mode).unwrap();
    let b_json = match &c.b_result {
        Ok(r) => {
            writeln!(text, "B-track  raw dy/dx = {}", r.raw_quotient).unwrap();
            writeln!(text, "         derivative = {}", r.derivative).unwrap();
            writeln!(text, "         discarded  = {}", discarded_text(&r.trace)).unwrap();
            json!({ "raw_quotient": r.raw_quotient, "derivative": r.derivative, "discarded": r.trace.discarded })
        }
        Err(msg) => {
            writeln!(text, "B-track  error: {msg}").unwrap();
            json!({ "error": msg })
        }
    };
    let sym_json = match &c.a_symbolic {
        Ok(v) => {
            writeln!(text, "A-track  f'(x) = {de}, value {v}").unwrap();
            json!({ "expr": de, "value": v })
        }
        Err(msg) => {
            writeln!(text, "A-track  symbolic error: {msg}").unwrap();
            json!({ "expr": de, "error": msg })
        }
    };
    let limit_json = match &c.a_limit {
        Some(Ok(cert)) => {
            writeln!(text, "         limit ~ {} (Richardson at n={})", format_float(cert.target.to_f64()), cert.richardson.n).unwrap();
            let pairs: Vec<String> = cert.eps_delta_pairs.iter().map(|p| format!("eps={} delta={}", p.epsilon, p.delta)).collect();
            writeln!(text, "         {}: {}", cert.kind, if pairs.is_empty() { "no pairs".into() } else { pairs.join(", ") }).unwrap();
            if let Some(ok) = reverified {
                writeln!(text, "         re-verified at sampled h: {ok}").unwrap();
            }
            json!({
                "target": cert.target,
                "steps": cert.schedule.len(),
                "richardson": cert.richardson,
                "eps_delta_pairs": cert.eps_delta_pairs,
                "kind": cert.kind,
                "reverified": reverified,
            })
        }
        Some(Err(msg)) => {
            writeln!(text, "         limit error: {msg}").unwrap();
            json!({ "error": msg })
        }
        None => Value::Null,
    };
    writeln!(text, "verdict  {}", track_verdict(c.verdict)).unwrap();
    let json = json!({
        "expr": e,
        "point": x0,
        "mode": c.mode,
        "verdict": c.verdict,
        "b_track": b_json,
        "a_track": { "symbolic": sym_json, "limit": limit_json },
    });
    Output { text, json }
}

pub fn eval(e: &Expr, x: &LcNumber, value: &LcNumber, emit_ast: bool) -> Output {
    let mut text = format!("f(x)   = {e}\nx      = {x}\nf(x)   = {}{}\ngrade  = {:?}\n", value, lossy_note(value), value.classify());
    let mut json = json!({
        "expr": e,
        "at": x,
        "mode": value.mode(),
        "value": value,
        "grade": value.classify(),
        "horizon": value.horizon(),
    });
    if emit_ast {
        writeln!(text, "ast    = {}", e.to_sexpr()).unwrap();
        json["ast"] = e.to_sexpr();
    }
    Output { text, json }
}
