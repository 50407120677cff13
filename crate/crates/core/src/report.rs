//! JSON renderings of reports and certificates.
//!
//! Every number appears as `{"exact": "num/den", "approx": <f64>}`; only the
//! exact string is authoritative. Objects are key-sorted, so output is
//! byte-stable for identical inputs.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::atom::Atom;
use crate::audit::{audit_implications, Violation};
use crate::constructions::{Ly6SetCertificate, LiYorkePairFamily, IrregularVectorCertificate, Obstruction, WanderingCertificate};
use crate::gallery::EntryReport;
use crate::lp::OrbitTrace;
use crate::oracle::SeqFact;
use crate::scalar::{ratio_string, Scalar};
use crate::spec_file::{SpecError, SystemSpec, SystemSpecFile, SCHEMA};
use crate::system::AtomicSystem;
use crate::verdict::{replay, CriterionId, Report, Status, Verdict, Witness};
use crate::weight::ExtendedWeight;

pub fn num<S: Scalar>(v: &S) -> Value {
    json!({ "exact": ratio_string(v), "approx": v.to_f64() })
}

/// `approx` is `null` for `+∞`.
pub fn weight<S: Scalar>(v: &ExtendedWeight<S>) -> Value {
    match v {
        ExtendedWeight::Finite(x) => num(x),
        ExtendedWeight::Infinite => json!({ "exact": "inf", "approx": null }),
    }
}

fn opt_num<S: Scalar>(v: &Option<S>) -> Value {
    v.as_ref().map_or(Value::Null, num)
}

fn atoms(set: &[Atom]) -> Value {
    Value::from(set.iter().map(|a| a.to_string()).collect::<Vec<_>>())
}

fn nums<S: Scalar>(v: &[S]) -> Value {
    Value::from(v.iter().map(num).collect::<Vec<_>>())
}

fn lim<S: Scalar>(l: &crate::sequence::Lim<S>) -> Value {
    match l {
        crate::sequence::Lim::Exact(v) => json!({ "exact_value": num(v) }),
        crate::sequence::Lim::AtLeast(v) => json!({ "at_least": num(v) }),
        crate::sequence::Lim::Infinite => json!("infinite"),
    }
}

fn fact<S: Scalar>(f: &SeqFact<S>) -> Value {
    json!({ "liminf": lim(&f.liminf), "limsup": lim(&f.limsup), "rule": f.rule, "envelopes": f.envelopes.len() })
}

pub fn witness<S: Scalar>(w: &Witness<S>) -> Value {
    match w {
        Witness::Orbit {
            set,
            direction,
            fact: f,
            claim,
        } => json!({ "type": "orbit", "set": atoms(set), "direction": direction, "fact": fact(f), "claim": claim }),
        Witness::Vector {
            support,
            fact: f,
            claim,
            bound,
        } => json!({ "type": "vector", "support": atoms(support), "fact": fact(f), "claim": claim, "bound": opt_num(bound) }),
        Witness::All(vs) => json!({ "type": "all", "components": vs.iter().map(verdict).collect::<Vec<_>>() }),
        Witness::Implied { edge, premise } => json!({ "type": "implied", "edge": edge, "premise": verdict(premise) }),
        Witness::Universal {
            rule,
            direction,
            claim,
            bound,
            samples,
        } => json!({
            "type": "universal", "rule": rule, "direction": direction, "claim": claim, "bound": opt_num(bound),
            "samples": samples.iter().map(|s| atoms(s)).collect::<Vec<_>>(),
        }),
        Witness::RatioWindow { rule, samples, caps } => json!({
            "type": "ratio_window", "rule": rule,
            "samples": samples.iter().map(|s| atoms(s)).collect::<Vec<_>>(),
            "caps": caps.iter().map(opt_num).collect::<Vec<_>>(),
        }),
        Witness::Ratio { set, sup, rule } => json!({
            "type": "ratio", "set": set.as_deref().map(atoms), "sup": sup.as_ref().map_or(json!("unbounded"), num), "rule": rule,
        }),
        Witness::Family(claim) => match claim {
            crate::oracle::Thm2Claim::Holds {
                family,
                peak_time,
                peak_scale,
                peak_ratio,
                rule,
            } => json!({
                "type": "family", "holds": true, "family": family, "peak_time": [peak_time.0, peak_time.1],
                "peak_scale": num(peak_scale), "peak_ratio": num(peak_ratio), "rule": rule,
            }),
            crate::oracle::Thm2Claim::Fails {
                sup,
                admissible,
                samples,
                rule,
            } => json!({
                "type": "family", "holds": false, "sup": num(sup), "admissible": admissible,
                "samples": samples.iter().map(|s| atoms(s)).collect::<Vec<_>>(), "rule": rule,
            }),
        },
        Witness::Exhaustive { rule, checked } => json!({ "type": "exhaustive", "rule": rule, "checked": checked }),
        Witness::Seen { set, best, at, reason } => json!({
            "type": "seen", "set": set.as_deref().map(atoms), "best": best.as_ref().map(weight), "at": at, "reason": reason,
        }),
    }
}

pub fn verdict<S: Scalar>(v: &Verdict<S>) -> Value {
    json!({ "criterion": v.criterion.as_str(), "status": v.status, "horizon": v.horizon, "witness": witness(&v.witness) })
}

fn violations(v: &[Violation]) -> Value {
    Value::from(
        v.iter()
            .map(|x| json!({ "edge": x.edge(), "premise": x.premise.as_str(), "conclusion": x.conclusion.as_str() }))
            .collect::<Vec<_>>(),
    )
}

/// Outcome of `analyze`: verdicts, replay results and the implication audit.
pub struct Analysis<S> {
    pub report: Report<S>,
    pub replay_failures: Vec<(CriterionId, String)>,
    pub violations: Vec<Violation>,
}

pub fn analyze<S: Scalar>(sys: &AtomicSystem<S>, report: Report<S>) -> Analysis<S> {
    let replay_failures = report
        .values()
        .filter_map(|v| replay(sys, v).err().map(|e| (v.criterion, e)))
        .collect();
    let statuses: BTreeMap<CriterionId, Status> = report.iter().map(|(k, v)| (*k, v.status)).collect();
    let violations = audit_implications(&statuses, &sys.flags);
    Analysis {
        report,
        replay_failures,
        violations,
    }
}

pub fn analysis_json<S: Scalar>(spec: &SystemSpec<S>, horizon: u64, a: &Analysis<S>) -> Value {
    let file = SystemSpecFile::from_system(&spec.system, spec.cor1_set.as_deref());
    json!({
        "schema": SCHEMA,
        "type": "report",
        "system": file,
        "horizon": horizon,
        "verdicts": a.report.iter().map(|(k, v)| (k.as_str().to_string(), verdict(v))).collect::<serde_json::Map<_, _>>(),
        "replay_failures": a.replay_failures.iter().map(|(c, e)| json!({ "criterion": c.as_str(), "error": e })).collect::<Vec<_>>(),
        "audit": { "violations": violations(&a.violations) },
    })
}

pub fn entry_json(e: &EntryReport) -> Value {
    json!({
        "name": e.name,
        "horizon": e.horizon,
        "passed": e.passed(),
        "verdicts": e.verdicts.iter().map(|(k, v)| (k.as_str().to_string(), verdict(v))).collect::<serde_json::Map<_, _>>(),
        "mismatches": e.mismatches.iter().map(|m| json!({
            "criterion": m.criterion.as_str(), "expected": m.expected, "got": m.got,
        })).collect::<Vec<_>>(),
        "replay_failures": e.replay_failures.iter().map(|(c, err)| json!({ "criterion": c.as_str(), "error": err })).collect::<Vec<_>>(),
        "audit": { "violations": violations(&e.violations) },
        "facts": e.facts.iter().map(|f| json!({ "claim": f.claim, "passed": f.passed, "detail": f.detail })).collect::<Vec<_>>(),
    })
}

pub fn gallery_json(entries: &[EntryReport]) -> Value {
    json!({
        "schema": SCHEMA,
        "type": "gallery",
        "passed": entries.iter().all(|e| e.passed()),
        "entries": entries.iter().map(entry_json).collect::<Vec<_>>(),
    })
}

#[derive(Deserialize)]
struct StoredVerdict {
    status: Status,
}

#[derive(Deserialize)]
#[serde(bound = "S: Scalar")]
struct StoredReport<S> {
    schema: String,
    system: SystemSpecFile<S>,
    verdicts: BTreeMap<String, StoredVerdict>,
}

/// Reads the system and statuses back from a stored report, for auditing
/// reports edited after the fact.
pub fn read_report<S: Scalar>(text: &str) -> Result<(SystemSpec<S>, BTreeMap<CriterionId, Status>), SpecError> {
    let err = |e: serde_json::Error| SpecError {
        line: Some(e.line()),
        column: Some(e.column()),
        message: e.to_string(),
    };
    let stored: StoredReport<S> = serde_json::from_str(text).map_err(err)?;
    if stored.schema != SCHEMA {
        return Err(SpecError {
            line: None,
            column: None,
            message: format!("unsupported schema \"{}\"", stored.schema),
        });
    }
    let spec = stored.system.to_system(text)?;
    let mut statuses = BTreeMap::new();
    for (k, v) in stored.verdicts {
        let c: CriterionId = k.parse().map_err(|m| SpecError {
            line: None,
            column: None,
            message: m,
        })?;
        statuses.insert(c, v.status);
    }
    Ok((spec, statuses))
}

/// Whether a JSON document is a stored report rather than a system spec.
pub fn is_report(text: &str) -> bool {
    serde_json::from_str::<Value>(text)
        .ok()
        .and_then(|v| v.get("type").and_then(|t| t.as_str()).map(|t| t == "report"))
        .unwrap_or(false)
}

// ---------------------------------------------------------------------------
// certificates

fn certificate(kind: &str, system: &str, body: Value) -> Value {
    json!({ "schema": SCHEMA, "type": "certificate", "certificate": kind, "system": system, "body": body })
}

pub fn wandering_json<S: Scalar>(sys: &AtomicSystem<S>, c: &WanderingCertificate<S>) -> Value {
    certificate(
        &format!("{}-wandering", c.direction),
        &sys.name,
        json!({
            "source": atoms(&c.source),
            "wandering": atoms(&c.wandering),
            "ks": c.ks,
            "epsilon": num(&c.epsilon),
            "epsilons": nums(&c.epsilons),
            "delta": opt_num(&c.delta),
            "search": c.search.as_str(),
            "source_mass": num(&c.source_mass),
            "wandering_mass": num(&c.wandering_mass),
        }),
    )
}

pub fn ly6_set_json<S: Scalar>(sys: &AtomicSystem<S>, c: &Ly6SetCertificate<S>) -> Value {
    certificate(
        "ly6-set",
        &sys.name,
        json!({
            "route": c.route.as_str(),
            "source": atoms(&c.source),
            "set": atoms(&c.set),
            "ns": c.ns,
            "ms": c.ms,
            "valleys": nums(&c.valleys),
            "peaks": nums(&c.peaks),
            "search": c.search.as_str(),
            "source_mass": num(&c.source_mass),
        }),
    )
}

fn trace(t: &OrbitTrace<impl Scalar>) -> Value {
    Value::from(t.values.iter().map(weight).collect::<Vec<_>>())
}

pub fn irregular_json<S: Scalar>(
    sys: &AtomicSystem<S>,
    c: &IrregularVectorCertificate<S>,
    pairs: Option<&LiYorkePairFamily<S>>,
) -> Value {
    let vector: Vec<Value> = c
        .vector
        .support()
        .iter()
        .map(|(a, v)| json!({ "atom": a.to_string(), "value": num(v) }))
        .collect();
    let pairs = pairs.map(|fam| {
        fam.pairs
            .iter()
            .map(|p| {
                json!({
                    "a": num(&p.a), "b": num(&p.b), "factor": num(&p.factor),
                    "proximal_times": p.proximal_times, "distal_times": p.distal_times,
                })
            })
            .collect::<Vec<_>>()
    });
    certificate(
        "irregular",
        &sys.name,
        json!({
            "p": c.vector.p().to_string(),
            "vector": vector,
            "terms": c.terms.iter().map(|(i, coeff)| json!({ "member": i, "coefficient": num(coeff) })).collect::<Vec<_>>(),
            "up_times": c.up_times,
            "down_times": c.down_times,
            "interleavings": c.interleavings(),
            "tol_down": num(&c.tol_down),
            "bound_up": num(&c.bound_up),
            "horizon": c.horizon,
            "trace": trace(&c.trace),
            "heuristic": c.heuristic,
            "pairs": pairs,
        }),
    )
}

pub fn obstruction_json<S: Scalar>(sys: &AtomicSystem<S>, o: &Obstruction<S>) -> Value {
    certificate(
        "generic-ly-obstruction",
        &sys.name,
        json!({ "total": num(&o.total), "exact_total": o.exact_total, "radius": o.radius }),
    )
}

pub fn verdict_certificate<S: Scalar>(name: &str, v: &Verdict<S>) -> Value {
    certificate("verdict", name, verdict(v))
}

/// Pretty JSON with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::scalar::Rational;

    #[test]
    fn numbers_are_exact_strings() {
        assert_eq!(num(&Rational::from_ratio(1, 2)), json!({ "exact": "1/2", "approx": 0.5 }));
        assert_eq!(weight::<Rational>(&ExtendedWeight::Infinite)["exact"], "inf");
    }

    #[test]
    fn report_round_trips_statuses() {
        let sys = gallery::notfinite::<Rational>();
        let spec = SystemSpec {
            system: sys.clone(),
            cor1_set: None,
        };
        let report = gallery::full_report(&sys, 16, None).unwrap();
        let a = analyze(&sys, report);
        assert!(a.violations.is_empty() && a.replay_failures.is_empty());
        let text = to_text(&analysis_json(&spec, 16, &a));
        assert!(is_report(&text));
        let (back, statuses) = read_report::<Rational>(&text).unwrap();
        assert_eq!(back.system, sys);
        assert_eq!(statuses.len(), a.report.len());
        assert_eq!(text, to_text(&analysis_json(&spec, 16, &analyze(&sys, gallery::full_report(&sys, 16, None).unwrap()))));
    }
}
