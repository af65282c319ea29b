//! Scenario parsing guarantees and the report round-trip: every report
//! re-parses, and every recorded witness re-evaluates to its recorded
//! residual through the library.

use std::path::{Path, PathBuf};

use dfderive::error::Error;
use dfderive::exec::{run_scenario, Verb};
use dfderive::report::{parse_report, strip_timing};
use dfderive::scenario::{parse_file, parse_str, resolve_map_ref, Overrides};

fn scenario_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
}

#[test]
fn example_2_1_declares_the_documented_shape() {
    let s = parse_file(&scenario_path("example_2_1.json"), &Overrides::default()).unwrap();
    assert_eq!(s.carriers.len(), 2);
    assert_eq!(s.maps.len(), 6);
    assert_eq!(s.tasks.len(), 3);
}

#[test]
fn dangling_map_reference_is_a_resolve_error() {
    let text = r#"{
        "name": "bad",
        "carriers": [{ "id": "R", "kind": "ring", "construction": { "polynomial": "rationals" } }],
        "tasks": [{ "check": { "law": "derivation", "m": "delta3" } }]
    }"#;
    let err = parse_str(text, &Overrides::default());
    match err {
        Err(Error::ResolveError(msg)) => assert!(msg.contains("delta3")),
        other => panic!("expected a resolve error, got {:?}", other.map(|_| ())),
    }
}

#[test]
fn witnesses_re_evaluate_to_their_recorded_residuals() {
    let scenario = parse_file(&scenario_path("example_2_1.json"), &Overrides::default()).unwrap();
    let report = run_scenario(&scenario, Verb::Verify);
    let doc = report.to_json();
    let text = serde_json::to_string(&doc).unwrap();
    let parsed = parse_report(&text).unwrap();

    // composite task: rebuild the maps and re-evaluate every witness
    let d = resolve_map_ref(&scenario, &serde_json::json!({"compose": ["d1", "d2"]})).unwrap();
    let delta =
        resolve_map_ref(&scenario, &serde_json::json!({"compose": ["delta1", "delta2"]})).unwrap();
    let f = resolve_map_ref(&scenario, &serde_json::json!({"compose": ["f1", "f2"]})).unwrap();
    let m_carrier = scenario.carrier("M").unwrap();
    let r_carrier = scenario.carrier("R").unwrap();

    let tasks = parsed["tasks"].as_array().unwrap();
    let composite = tasks
        .iter()
        .find(|t| t["name"] == "composition_is_not_a_df_derivation")
        .unwrap();
    let witnesses = composite["detail"]["witnesses"].as_array().unwrap();
    assert!(!witnesses.is_empty());
    for w in witnesses {
        let inputs = w["inputs"].as_array().unwrap();
        let x = m_carrier.element_from_json(&inputs[0]).unwrap();
        let a = r_carrier.element_from_json(&inputs[1]).unwrap();
        let lhs = d.apply(&m_carrier.act_right(&x, &a).unwrap()).unwrap();
        let dx_a = m_carrier.act_right(&d.apply(&x).unwrap(), &a).unwrap();
        let fx_da = m_carrier
            .act_right(&f.apply(&x).unwrap(), &delta.apply(&a).unwrap())
            .unwrap();
        let rhs = m_carrier.add(&dx_a, &fx_da).unwrap();
        let residual = m_carrier.sub(&lhs, &rhs).unwrap();
        assert_eq!(lhs.value.to_json(), w["lhs"]);
        assert_eq!(rhs.value.to_json(), w["rhs"]);
        assert_eq!(residual.value.to_json(), w["residual"]);
        assert!(!residual.is_zero());
    }
}

#[test]
fn reports_are_deterministic_for_a_fixed_seed() {
    let scenario = parse_file(&scenario_path("example_2_3.json"), &Overrides::default()).unwrap();
    let a = strip_timing(&run_scenario(&scenario, Verb::Verify).to_json());
    let b = strip_timing(&run_scenario(&scenario, Verb::Verify).to_json());
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}

#[test]
fn every_shipped_scenario_parses() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().map_or(false, |e| e == "json") {
            // the deliberately-refuted declaration is the one expected error
            let result = parse_file(&path, &Overrides::default());
            if path.file_name().unwrap() == "negative_declared_z4.json" {
                assert!(matches!(result, Err(Error::DeclaredFactRefuted { .. })));
            } else {
                result.unwrap_or_else(|e| panic!("{} failed to parse: {}", path.display(), e));
            }
            count += 1;
        }
    }
    assert!(count >= 12, "expected the full scenario set, found {}", count);
}
