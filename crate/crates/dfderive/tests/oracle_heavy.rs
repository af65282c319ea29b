//! Full-size oracle runs on the M2(Z3) instance.

use dfderive::carrier::Carrier;
use dfderive::oracle::{
    central_scalings, inner_derivations, identity_family, jordan_implies_derivation_oracle,
    posner_composition_oracle, OracleOptions,
};
use dfderive::scalar::ScalarDomain;

#[test]
fn posner_composition_exhaustive_on_m2z3() {
    let r = Carrier::matrix_algebra("M2Z3", 2, ScalarDomain::Modular(3)).unwrap();
    let m = Carrier::module_over_self("M", &r).unwrap();
    let deltas = inner_derivations(&r).unwrap();
    let fs = identity_family(&m);
    let report = posner_composition_oracle(&m, &deltas, &fs, &OracleOptions::default()).unwrap();
    assert!(report.passed, "{:?}", &report.counterexamples[..report.counterexamples.len().min(3)]);
    assert_eq!(report.quantifier_sizes["triples_per_side"], 27 * 81);
    assert_eq!(report.quantifier_sizes["pairs"], (27u64 * 81).pow(2));
    eprintln!("tallies: {:?}", report.branch_tallies);
    eprintln!("elapsed: {} ms", report.elapsed_ms);
}

#[test]
fn posner_sampled_with_unit_left_mult_f_family() {
    let r = Carrier::matrix_algebra("M2Z3", 2, ScalarDomain::Modular(3)).unwrap();
    let m = Carrier::module_over_self("M", &r).unwrap();
    let deltas = inner_derivations(&r).unwrap();
    let fs = dfderive::oracle::left_mult_family(&m, true).unwrap();
    assert_eq!(fs.maps.len(), 48);
    let opts = OracleOptions {
        sample: Some((100_000, 2718)),
        ..OracleOptions::default()
    };
    let report = posner_composition_oracle(&m, &deltas, &fs, &opts).unwrap();
    assert!(report.passed, "{:?}", &report.counterexamples[..report.counterexamples.len().min(3)]);
    eprintln!("sampled tallies: {:?}", report.branch_tallies);
    eprintln!("elapsed: {} ms", report.elapsed_ms);
}

#[test]
fn jordan_oracle_over_inner_deltas_and_central_scalings() {
    let s = Carrier::matrix_algebra("M2Z3", 2, ScalarDomain::Modular(3)).unwrap();
    let m = Carrier::bimodule_over_self("M", &s).unwrap();
    let deltas = inner_derivations(&s).unwrap();
    let fs = central_scalings(&s, &m).unwrap();
    assert_eq!(fs.maps.len(), 3);
    let report = jordan_implies_derivation_oracle(&s, &m, &deltas, &fs, &OracleOptions::default()).unwrap();
    assert!(report.passed, "{:?}", &report.counterexamples[..report.counterexamples.len().min(3)]);
    assert_eq!(report.branch_tallies["pairs_checked"], 81);
    assert_eq!(report.branch_tallies["jordan_maps_total"], 81 * 81);
    assert_eq!(report.branch_tallies["df_maps_total"], 81 * 81);
    eprintln!("elapsed: {} ms", report.elapsed_ms);
}
