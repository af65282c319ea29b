//! Report documents: JSON assembly, text rendering, and the timing-strip
//! normalization used for regression comparison. Verdicts are deterministic
//! for a fixed seed; clocks are not, so timing fields live under dedicated
//! keys that `strip_timing` removes.

use serde_json::{json, Map, Value as Json};

use crate::analysis::{FactVerdict, StructuralFact};
use crate::check::{VerificationReport, Verdict, Witness};
use crate::map::EqualityReport;
use crate::oracle::OracleReport;
use crate::probe::Strategy;

pub fn strategy_str(s: Strategy) -> &'static str {
    match s {
        Strategy::Exhaustive => "exhaustive",
        Strategy::ProbeComplete => "probe_complete",
    }
}

pub fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
    }
}

pub fn fact_verdict_str(v: FactVerdict) -> &'static str {
    match v {
        FactVerdict::Holds => "holds",
        FactVerdict::Fails => "fails",
        FactVerdict::Declared => "declared",
        FactVerdict::Incomplete => "incomplete",
    }
}

pub fn witness_json(w: &Witness) -> Json {
    json!({
        "inputs": w.inputs.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
        "lhs": w.lhs.to_json(),
        "rhs": w.rhs.to_json(),
        "residual": w.residual.to_json(),
    })
}

pub fn check_report_json(r: &VerificationReport) -> Json {
    json!({
        "check": r.check,
        "strategy": strategy_str(r.strategy),
        "verdict": verdict_str(r.verdict),
        "witnesses": r.witnesses.iter().map(witness_json).collect::<Vec<_>>(),
        "failures": r.failures,
        "inputs_tested": r.inputs_tested,
        "elapsed_ms": r.elapsed_ms,
    })
}

pub fn equality_report_json(r: &EqualityReport) -> Json {
    json!({
        "equal": r.equal,
        "strategy": strategy_str(r.strategy),
        "inputs_tested": r.inputs_tested,
        "witness": r.witness.as_ref().map(|(x, a, b)| json!({
            "input": x.value.to_json(),
            "lhs": a.value.to_json(),
            "rhs": b.value.to_json(),
        })),
    })
}

pub fn structural_fact_json(f: &StructuralFact) -> Json {
    json!({
        "subject": f.subject,
        "predicate": f.predicate,
        "verdict": fact_verdict_str(f.verdict),
        "witness": f.witness.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
        "provenance": f.provenance,
    })
}

pub fn oracle_report_json(r: &OracleReport) -> Json {
    json!({
        "oracle": r.name,
        "hypotheses": r.hypotheses.iter().map(structural_fact_json).collect::<Vec<_>>(),
        "quantifier_sizes": r.quantifier_sizes,
        "branch_tallies": r.branch_tallies,
        "counterexamples": r.counterexamples.iter().map(|c| json!({
            "context": c.context,
            "values": c.values.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "lemmas": r.lemma_rows.iter().map(|row| json!({
            "lemma": row.label,
            "asserted": row.asserted,
            "verdict": if row.skip_reason.is_some() {
                "skipped"
            } else if row.passed {
                "pass"
            } else {
                "fail"
            },
            "strategy": strategy_str(row.strategy),
            "tested": row.tested,
            "hypothesis_skipped": row.hypothesis_skipped,
            "nonzero": row.nonzero,
            "witnesses": row.witnesses.iter().map(|(inputs, residual)| json!({
                "inputs": inputs.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
                "residual": residual.to_json(),
            })).collect::<Vec<_>>(),
            "skip_reason": row.skip_reason,
        })).collect::<Vec<_>>(),
        "passed": r.passed,
        "elapsed_ms": r.elapsed_ms,
    })
}

#[derive(Clone, Debug)]
pub struct TaskReport {
    pub index: usize,
    pub kind: String,
    pub name: String,
    pub passed: bool,
    pub expectation: Option<String>,
    pub expectation_matched: Option<bool>,
    pub detail: Json,
}

impl TaskReport {
    pub fn to_json(&self) -> Json {
        json!({
            "index": self.index,
            "kind": self.kind,
            "name": self.name,
            "passed": self.passed,
            "expectation": self.expectation,
            "expectation_matched": self.expectation_matched,
            "detail": self.detail,
        })
    }
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub scenario: String,
    pub seed: u64,
    pub tasks: Vec<TaskReport>,
    pub skipped_tasks: usize,
    pub total_ms: f64,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.tasks.iter().all(|t| t.passed)
    }

    pub fn to_json(&self) -> Json {
        json!({
            "scenario": self.scenario,
            "seed": self.seed,
            "verdict": if self.passed() { "pass" } else { "fail" },
            "tasks": self.tasks.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
            "skipped_tasks": self.skipped_tasks,
            "timing": { "total_ms": self.total_ms },
        })
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "scenario {} (seed {}): {}\n",
            self.scenario,
            self.seed,
            if self.passed() { "PASS" } else { "FAIL" }
        ));
        for t in &self.tasks {
            out.push_str(&format!(
                "  [{}] {} {}: {}{}\n",
                t.index,
                t.kind,
                t.name,
                if t.passed { "pass" } else { "FAIL" },
                match (&t.expectation, t.expectation_matched) {
                    (Some(e), Some(m)) => format!(
                        " (expected {}, {})",
                        e,
                        if m { "matched" } else { "MISMATCH" }
                    ),
                    _ => String::new(),
                }
            ));
            render_detail_text(&mut out, &t.detail);
        }
        if self.skipped_tasks > 0 {
            out.push_str(&format!(
                "  ({} task(s) of other kinds skipped by this verb)\n",
                self.skipped_tasks
            ));
        }
        out
    }
}

fn render_detail_text(out: &mut String, detail: &Json) {
    if let Some(obj) = detail.as_object() {
        if let Some(w) = obj.get("witnesses").and_then(|w| w.as_array()) {
            for wit in w.iter().take(2) {
                out.push_str(&format!("      witness: {}\n", compact(wit)));
            }
        }
        if let Some(c) = obj.get("counterexamples").and_then(|c| c.as_array()) {
            for cex in c.iter().take(3) {
                out.push_str(&format!("      counterexample: {}\n", compact(cex)));
            }
        }
        for key in ["branch_tallies", "counts"] {
            if let Some(t) = obj.get(key) {
                if !t.is_null() {
                    out.push_str(&format!("      {}: {}\n", key, compact(t)));
                }
            }
        }
    }
}

fn compact(v: &Json) -> String {
    serde_json::to_string(v).unwrap_or_default()
}

/// Remove every timing field (`elapsed_ms`, `total_ms`, `timing`) so two
/// reports from identical runs compare byte-for-byte.
pub fn strip_timing(v: &Json) -> Json {
    match v {
        Json::Object(map) => {
            let mut out = Map::new();
            for (k, val) in map {
                if k == "elapsed_ms" || k == "total_ms" || k == "timing" {
                    continue;
                }
                out.insert(k.clone(), strip_timing(val));
            }
            Json::Object(out)
        }
        Json::Array(items) => Json::Array(items.iter().map(strip_timing).collect()),
        other => other.clone(),
    }
}

/// Parse a report document back into JSON (round-trip surface).
pub fn parse_report(text: &str) -> crate::error::Result<Json> {
    serde_json::from_str(text)
        .map_err(|e| crate::error::Error::ParseError(format!("report: {}", e)))
}
