//! Task execution: runs a parsed scenario's tasks (filtered by CLI verb)
//! and assembles the run report. Task errors are recorded in the report and
//! classified so the CLI can map hypothesis/validation failures to their
//! own exit status.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::analysis;
use crate::carrier::{Carrier, Element};
use crate::check::{
    check_additive, check_bimodule_hom, check_derivation, check_df_derivation,
    check_endomorphism, check_jordan_df_derivation, check_module_hom,
};
use crate::enumerate::{
    enumerate_additive_maps, enumerate_df_derivations, enumerate_jordan_df_derivations,
    Constraint, EnumerationSpec,
};
use crate::error::{Error, Result};
use crate::jordan::BracketContext;
use crate::map::{maps_equal, AdditiveMap};
use crate::oracle::{
    self, lemma_suite, MapFamily, OracleOptions,
};
use crate::probe::{probe_elements, random_element, ProbeSpec};
use crate::report::{
    check_report_json, equality_report_json, oracle_report_json, strategy_str,
    structural_fact_json, RunReport, TaskReport,
};
use crate::scenario::{
    CheckLaw, EnumClass, EvalExpect, FamilySpec, OracleTask, Region, Scenario, Task,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verb {
    Verify,
    Oracle,
    Enumerate,
    All,
}

impl Verb {
    fn runs(&self, task: &Task) -> bool {
        match self {
            Verb::All => true,
            Verb::Verify => task.verb() == "verify",
            Verb::Oracle => task.verb() == "oracle",
            Verb::Enumerate => task.verb() == "enumerate",
        }
    }
}

/// Exit classification of an error recorded in a task report.
fn error_class(e: &Error) -> &'static str {
    match e {
        Error::HypothesisFailed { .. }
        | Error::HypothesisUnmet { .. }
        | Error::DeclaredFactRefuted { .. }
        | Error::ValidationError(_)
        | Error::NotInvariant { .. }
        | Error::ClosureFailure(_) => "hypothesis",
        Error::ParseError(_) | Error::ResolveError(_) => "parse",
        _ => "task",
    }
}

pub fn run_scenario(scenario: &Scenario, verb: Verb) -> RunReport {
    let started = Instant::now();
    let mut tasks = Vec::new();
    let mut skipped = 0usize;
    for (index, task) in scenario.tasks.iter().enumerate() {
        if !verb.runs(task) {
            skipped += 1;
            continue;
        }
        let report = match exec_task(scenario, task, index) {
            Ok(tr) => tr,
            Err(e) => TaskReport {
                index,
                kind: task.kind().to_string(),
                name: task.name().to_string(),
                passed: false,
                expectation: None,
                expectation_matched: None,
                detail: json!({
                    "error": e.to_string(),
                    "error_class": error_class(&e),
                }),
            },
        };
        tasks.push(report);
    }
    RunReport {
        scenario: scenario.name.clone(),
        seed: scenario.probe.seed,
        tasks,
        skipped_tasks: skipped,
        total_ms: started.elapsed().as_secs_f64() * 1e3,
    }
}

/// Exit code for a finished run: 0 all pass, 3 when any task died on a
/// hypothesis/validation failure, 1 otherwise.
pub fn exit_code(report: &RunReport) -> i32 {
    if report.passed() {
        return 0;
    }
    let hypothesis = report.tasks.iter().any(|t| {
        t.detail
            .get("error_class")
            .and_then(|v| v.as_str())
            .map_or(false, |c| c == "hypothesis")
    });
    if hypothesis {
        3
    } else {
        1
    }
}

fn exec_task(scenario: &Scenario, task: &Task, index: usize) -> Result<TaskReport> {
    let probe = &scenario.probe;
    match task {
        Task::Check {
            name,
            law,
            m,
            delta,
            f,
            expect,
            witness_pairs,
        } => {
            let main = m
                .as_ref()
                .ok_or_else(|| Error::ResolveError(format!("check `{}` has no map", name)))?;
            let report = match law {
                CheckLaw::Additive => check_additive(main, probe)?,
                CheckLaw::Derivation => check_derivation(main, probe)?,
                CheckLaw::ModuleHom => check_module_hom(main, probe, witness_pairs)?,
                CheckLaw::BimoduleHom => check_bimodule_hom(main, probe)?,
                CheckLaw::Endomorphism => check_endomorphism(main, probe, witness_pairs)?,
                CheckLaw::DfDerivation => {
                    let delta = require(delta, "delta", name)?;
                    let f = require(f, "f", name)?;
                    check_df_derivation(main, delta, f, probe, witness_pairs)?
                }
                CheckLaw::JordanDfDerivation => {
                    let delta = require(delta, "delta", name)?;
                    let f = require(f, "f", name)?;
                    check_jordan_df_derivation(main, delta, f, probe)?
                }
            };
            let verdict_pass = report.passed();
            let (passed, matched) = judge(*expect, verdict_pass);
            Ok(TaskReport {
                index,
                kind: "check".into(),
                name: name.clone(),
                passed,
                expectation: expect.map(|e| if e { "pass".into() } else { "fail".into() }),
                expectation_matched: matched,
                detail: check_report_json(&report),
            })
        }

        Task::MapsEqual {
            name,
            a,
            b,
            expect_equal,
        } => {
            let report = maps_equal(a, b, probe)?;
            let (passed, matched) = judge(*expect_equal, report.equal);
            Ok(TaskReport {
                index,
                kind: "maps_equal".into(),
                name: name.clone(),
                passed,
                expectation: expect_equal.map(|e| if e { "equal".into() } else { "unequal".into() }),
                expectation_matched: matched,
                detail: equality_report_json(&report),
            })
        }

        Task::Inclusion {
            name,
            map,
            region,
            expect_contained,
            witness_probes,
        } => {
            let contains = region_membership(region)?;
            let (generated, strategy) = probe_elements(map.source(), probe)?;
            let mut tested = 0u64;
            let mut witness: Option<(Element, Element)> = None;
            for x in witness_probes.iter().chain(generated.iter()) {
                tested += 1;
                let y = map.apply(x)?;
                if !contains(&y)? {
                    witness = Some((x.clone(), y));
                    break;
                }
            }
            let contained = witness.is_none();
            let passed = contained == *expect_contained;
            Ok(TaskReport {
                index,
                kind: "inclusion".into(),
                name: name.clone(),
                passed,
                expectation: Some(if *expect_contained {
                    "contained".into()
                } else {
                    "not_contained".into()
                }),
                expectation_matched: Some(passed),
                detail: json!({
                    "contained": contained,
                    "strategy": strategy_str(strategy),
                    "inputs_tested": tested,
                    "witness": witness.map(|(x, y)| json!({
                        "input": x.value.to_json(),
                        "image": y.value.to_json(),
                    })),
                }),
            })
        }

        Task::Evaluate {
            name,
            map,
            input,
            expect,
        } => {
            let output = map.apply(input)?;
            let (passed, expectation) = match expect {
                EvalExpect::Value(v) => (&output == v, Some(format!("= {}", v.value))),
                EvalExpect::Nonzero => (!output.is_zero(), Some("nonzero".into())),
                EvalExpect::None => (true, None),
            };
            Ok(TaskReport {
                index,
                kind: "evaluate".into(),
                name: name.clone(),
                passed,
                expectation,
                expectation_matched: Some(passed),
                detail: json!({
                    "input": input.value.to_json(),
                    "output": output.value.to_json(),
                }),
            })
        }

        Task::Structure {
            name,
            predicate,
            carrier,
            submodule,
            ideal,
            expect,
        } => exec_structure(scenario, index, name, predicate, carrier, submodule, ideal, expect),

        Task::Enumerate {
            name,
            class,
            source,
            target,
            delta,
            f,
            delta_family,
            expect_count,
            expect_count_each,
            cross_check_raw,
        } => exec_enumerate(
            scenario,
            index,
            name,
            class,
            source,
            target,
            delta,
            f,
            delta_family,
            *expect_count,
            *expect_count_each,
            *cross_check_raw,
        ),

        Task::Oracle { name, oracle } => exec_oracle(scenario, index, name, oracle),

        Task::LemmaSuite {
            name,
            contexts,
            lemmas,
        } => {
            let mut ctxs = Vec::new();
            for (label, d, delta, f) in contexts {
                ctxs.push((label.clone(), BracketContext::new(d, delta, f, probe)?));
            }
            let report = lemma_suite(&ctxs, lemmas, probe)?;
            Ok(TaskReport {
                index,
                kind: "lemma_suite".into(),
                name: name.clone(),
                passed: report.passed,
                expectation: None,
                expectation_matched: None,
                detail: oracle_report_json(&report),
            })
        }

        Task::JordanSweep {
            name,
            s,
            m,
            trials,
            seed,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let sweep_probe = ProbeSpec {
                seed: *seed,
                ..probe.clone()
            };
            let mut all_pass = true;
            let mut sampled = Vec::new();
            for _ in 0..*trials {
                let b0m = random_element(m, &sweep_probe, &mut rng)?;
                let b0s = Element::new(s, b0m.value.clone())?;
                if sampled.len() < 3 {
                    sampled.push(b0m.value.to_json());
                }
                let d = AdditiveMap::right_mult(s, m, &b0m)?;
                let delta = AdditiveMap::inner_derivation(&b0s)?;
                let f = AdditiveMap::negation_into(s, m)?;
                let report = check_jordan_df_derivation(&d, &delta, &f, probe)?;
                if !report.passed() {
                    all_pass = false;
                    break;
                }
            }
            Ok(TaskReport {
                index,
                kind: "jordan_witness_sweep".into(),
                name: name.clone(),
                passed: all_pass,
                expectation: Some("pass".into()),
                expectation_matched: Some(all_pass),
                detail: json!({
                    "trials": trials,
                    "first_b0_samples": sampled,
                }),
            })
        }
    }
}

fn require<'a>(m: &'a Option<AdditiveMap>, what: &str, task: &str) -> Result<&'a AdditiveMap> {
    m.as_ref()
        .ok_or_else(|| Error::ResolveError(format!("check `{}` needs `{}`", task, what)))
}

fn judge(expect: Option<bool>, actual: bool) -> (bool, Option<bool>) {
    match expect {
        None => (actual, None),
        Some(e) => (e == actual, Some(e == actual)),
    }
}

fn region_membership(
    region: &Region,
) -> Result<Box<dyn Fn(&Element) -> Result<bool> + '_>> {
    match region {
        Region::Submodule(sub) => Ok(Box::new(move |e: &Element| sub.contains(&e.value))),
        Region::Colon { submodule, module } => {
            let ideal = analysis::colon_ideal(submodule, module)?;
            Ok(Box::new(move |e: &Element| ideal.contains(&e.value)))
        }
        Region::Annihilator(module) => {
            let ideal = analysis::right_annihilator(module)?;
            Ok(Box::new(move |e: &Element| ideal.contains(&e.value)))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn exec_structure(
    _scenario: &Scenario,
    index: usize,
    name: &str,
    predicate: &str,
    carrier: &Carrier,
    submodule: &Option<crate::subset::Submodule>,
    ideal: &Option<crate::subset::Ideal>,
    expect: &Option<String>,
) -> Result<TaskReport> {
    use crate::analysis::SUBSTRUCTURE_CAP;
    let fact = match predicate {
        "two_torsion_free" => analysis::is_two_torsion_free(carrier)?,
        "prime_ring" => analysis::is_prime_ring(carrier)?,
        "prime_module" => analysis::is_prime_module(carrier)?,
        "prime_algebra" => analysis::is_prime_algebra(carrier, SUBSTRUCTURE_CAP)?,
        "jointly_prime" => analysis::is_jointly_prime(carrier, SUBSTRUCTURE_CAP)?,
        "prime_submodule" => {
            let sub = submodule
                .as_ref()
                .ok_or_else(|| Error::ResolveError(format!("`{}` needs a submodule", name)))?;
            analysis::is_prime_submodule(sub, carrier)?
        }
        "prime_ideal" => {
            let p = ideal
                .as_ref()
                .ok_or_else(|| Error::ResolveError(format!("`{}` needs an ideal", name)))?;
            analysis::is_prime_ideal(p)?
        }
        other => {
            return Err(Error::ParseError(format!(
                "unknown structure predicate `{}`",
                other
            )))
        }
    };
    let verdict = crate::report::fact_verdict_str(fact.verdict).to_string();
    let (passed, matched) = match expect {
        None => (fact.holds(), None),
        Some(e) => (e == &verdict, Some(e == &verdict)),
    };
    Ok(TaskReport {
        index,
        kind: "structure".into(),
        name: name.to_string(),
        passed,
        expectation: expect.clone(),
        expectation_matched: matched,
        detail: structural_fact_json(&fact),
    })
}

fn build_family(spec: &FamilySpec, budget: u64) -> Result<MapFamily> {
    Ok(match spec {
        FamilySpec::InnerDerivations(s) => oracle::inner_derivations(s)?,
        FamilySpec::AllDerivations(s) => oracle::all_derivations(s, budget)?,
        FamilySpec::Identity(m) => oracle::identity_family(m),
        FamilySpec::CentralScalings { s, m } => oracle::central_scalings(s, m)?,
        FamilySpec::LeftMultUnits(m) => oracle::left_mult_family(m, true)?,
        FamilySpec::LeftMultAll(m) => oracle::left_mult_family(m, false)?,
        FamilySpec::Explicit(maps) => MapFamily {
            label: "explicit".into(),
            maps: maps.clone(),
        },
    })
}

#[allow(clippy::too_many_arguments)]
fn exec_enumerate(
    scenario: &Scenario,
    index: usize,
    name: &str,
    class: &EnumClass,
    source: &Carrier,
    target: &Carrier,
    delta: &Option<AdditiveMap>,
    f: &Option<AdditiveMap>,
    delta_family: &Option<FamilySpec>,
    expect_count: Option<u64>,
    expect_count_each: Option<u64>,
    cross_check_raw: bool,
) -> Result<TaskReport> {
    let budget = scenario.budget;
    let partitions = scenario.partitions;
    let mut counts: Vec<u64> = Vec::new();
    let mut examined = 0u64;
    let mut cross_checked = false;
    let mut cross_ok = true;

    let deltas: Vec<AdditiveMap> = match (delta, delta_family) {
        (Some(d), None) => vec![d.clone()],
        (None, Some(fam)) => build_family(fam, budget)?.maps,
        (None, None) => Vec::new(),
        (Some(_), Some(_)) => {
            return Err(Error::ParseError(
                "give either `delta` or `delta_family`, not both".into(),
            ))
        }
    };

    match class {
        EnumClass::Additive | EnumClass::Derivations | EnumClass::ModuleHoms => {
            let mut spec = EnumerationSpec::new(source, target);
            spec.budget = budget;
            spec.partitions = partitions;
            match class {
                EnumClass::Derivations => spec.constraints.push(Constraint::Derivation),
                EnumClass::ModuleHoms => spec.constraints.push(Constraint::ModuleHom),
                _ => {}
            }
            let (maps, summary) = enumerate_additive_maps(&spec)?;
            counts.push(maps.len() as u64);
            examined += summary.examined;
        }
        EnumClass::DfDerivations | EnumClass::JordanDfDerivations => {
            let fmap = f
                .as_ref()
                .ok_or_else(|| Error::ResolveError(format!("enumerate `{}` needs `f`", name)))?;
            if deltas.is_empty() {
                return Err(Error::ResolveError(format!(
                    "enumerate `{}` needs `delta` or `delta_family`",
                    name
                )));
            }
            for d in &deltas {
                let (maps, summary) = match class {
                    EnumClass::DfDerivations => {
                        enumerate_df_derivations(d, fmap, source, target, budget, partitions)?
                    }
                    _ => enumerate_jordan_df_derivations(
                        d, fmap, source, target, budget, partitions,
                    )?,
                };
                counts.push(maps.len() as u64);
                examined += summary.examined;
                if cross_check_raw && matches!(class, EnumClass::DfDerivations) {
                    cross_checked = true;
                    let mut spec = EnumerationSpec::new(source, target).with(
                        Constraint::DfDerivation {
                            delta: d.clone(),
                            f: fmap.clone(),
                        },
                    );
                    spec.budget = budget;
                    spec.partitions = partitions;
                    let (raw, _) = enumerate_additive_maps(&spec)?;
                    let mut a: Vec<_> = maps
                        .iter()
                        .map(|m| m.tabulate())
                        .collect::<Result<Vec<_>>>()?;
                    let mut b: Vec<_> = raw
                        .iter()
                        .map(|m| m.tabulate())
                        .collect::<Result<Vec<_>>>()?;
                    a.sort();
                    b.sort();
                    if a != b {
                        cross_ok = false;
                    }
                }
            }
        }
    }

    let mut passed = cross_ok;
    if let Some(n) = expect_count {
        passed &= counts.iter().sum::<u64>() == n;
    }
    if let Some(n) = expect_count_each {
        passed &= counts.iter().all(|&c| c == n);
    }
    Ok(TaskReport {
        index,
        kind: "enumerate".into(),
        name: name.to_string(),
        passed,
        expectation: expect_count
            .map(|n| format!("count {}", n))
            .or(expect_count_each.map(|n| format!("count {} each", n))),
        expectation_matched: Some(passed),
        detail: json!({
            "counts": counts,
            "examined": examined,
            "cross_checked_raw": cross_checked,
            "cross_check_ok": cross_ok,
        }),
    })
}

fn exec_oracle(
    scenario: &Scenario,
    index: usize,
    name: &str,
    task: &OracleTask,
) -> Result<TaskReport> {
    let budget = scenario.budget;
    let opts = OracleOptions {
        partitions: scenario.partitions,
        budget,
        sample: task.samples,
    };
    let family = |spec: &Option<FamilySpec>, what: &str| -> Result<MapFamily> {
        spec.as_ref()
            .map(|s| build_family(s, budget))
            .transpose()?
            .ok_or_else(|| Error::ResolveError(format!("oracle `{}` needs `{}`", name, what)))
    };
    let carrier = |c: &Option<Carrier>, what: &str| -> Result<Carrier> {
        c.clone()
            .ok_or_else(|| Error::ResolveError(format!("oracle `{}` needs `{}`", name, what)))
    };

    let report = match task.which.as_str() {
        "posner_composition" => {
            let m = carrier(&task.m, "m")?;
            let deltas = family(&task.deltas, "deltas")?;
            let fs = match &task.fs {
                Some(f) => build_family(f, budget)?,
                None => oracle::identity_family(&m),
            };
            oracle::posner_composition_oracle(&m, &deltas, &fs, &opts)?
        }
        "posner_ring" => {
            let r = carrier(&task.r, "r")?;
            let deltas = family(&task.deltas, "deltas")?;
            oracle::posner_ring_oracle(&r, &deltas, &opts)?
        }
        "creedon" => {
            let m = carrier(&task.m, "m")?;
            let l = task
                .l
                .clone()
                .ok_or_else(|| Error::ResolveError(format!("oracle `{}` needs `l`", name)))?;
            let deltas = family(&task.deltas, "deltas")?;
            let fs = family(&task.fs, "fs")?;
            oracle::creedon_oracle(&m, &l, &deltas, &fs, &opts)?
        }
        "corprime" => {
            let r = carrier(&task.r, "r")?;
            let p = task
                .p
                .clone()
                .ok_or_else(|| Error::ResolveError(format!("oracle `{}` needs `p`", name)))?;
            let deltas = family(&task.deltas, "deltas")?;
            let fs = family(&task.fs, "fs")?;
            oracle::corprime_oracle(&r, &p, &deltas, &fs, &opts)?
        }
        "jordan_implies_derivation" => {
            let s = carrier(&task.s, "s")?;
            let m = carrier(&task.m, "m")?;
            let deltas = family(&task.deltas, "deltas")?;
            let fs = family(&task.fs, "fs")?;
            oracle::jordan_implies_derivation_oracle(&s, &m, &deltas, &fs, &opts)?
        }
        "endo_composition" => {
            let m = carrier(&task.m, "m")?;
            let deltas = family(&task.deltas, "deltas")?;
            let fs = match &task.fs {
                Some(f) => build_family(f, budget)?,
                None => oracle::identity_family(&m),
            };
            let gammas = family(&task.gammas, "gammas")?;
            oracle::endo_composition_oracle(&m, &deltas, &fs, &gammas, &opts)?
        }
        "endo_zero_composition" => {
            let m = carrier(&task.m, "m")?;
            let deltas = family(&task.deltas, "deltas")?;
            let fs = match &task.fs {
                Some(f) => build_family(f, budget)?,
                None => oracle::identity_family(&m),
            };
            let gammas = family(&task.gammas, "gammas")?;
            oracle::endo_zero_composition_oracle(&m, &deltas, &fs, &gammas, &opts)?
        }
        "idealprima" => {
            let m = carrier(&task.m, "m")?;
            let l = task
                .l
                .clone()
                .ok_or_else(|| Error::ResolveError(format!("oracle `{}` needs `l`", name)))?;
            oracle::idealprima_check(&l, &m)?
        }
        other => {
            return Err(Error::ParseError(format!("unknown oracle `{}`", other)))
        }
    };

    Ok(TaskReport {
        index,
        kind: "oracle".into(),
        name: name.to_string(),
        passed: report.passed,
        expectation: Some("zero counterexamples".into()),
        expectation_matched: Some(report.passed),
        detail: oracle_report_json(&report),
    })
}
