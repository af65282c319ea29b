//! Carrier-law property tests: ring axioms exhaustively on finite carriers
//! and proptest-sampled on symbolic ones, canonicalization idempotence,
//! quotient projection laws, and the cross-route structure identities.

use proptest::prelude::*;

use dfderive::analysis;
use dfderive::carrier::{Carrier, Element};
use dfderive::check::{check_df_derivation, check_jordan_df_derivation};
use dfderive::map::AdditiveMap;
use dfderive::probe::ProbeSpec;
use dfderive::scalar::{Scalar, ScalarDomain};
use dfderive::subset::{Ideal, Sidedness, Submodule};
use dfderive::value::Value;

fn qx() -> Carrier {
    Carrier::polynomial_ring("Qx", ScalarDomain::Rationals).unwrap()
}

fn poly_strategy() -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(-9i32..=9, 0..6)
}

fn to_poly(c: &Carrier, coeffs: &[i32]) -> Element {
    c.element_from_json(&serde_json::json!(coeffs)).unwrap()
}

proptest! {
    #[test]
    fn polynomial_ring_axioms(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        let r = qx();
        let (a, b, c) = (to_poly(&r, &a), to_poly(&r, &b), to_poly(&r, &c));
        // associativity and commutativity of both operations
        let ab_c = r.mul(&r.mul(&a, &b).unwrap(), &c).unwrap();
        let a_bc = r.mul(&a, &r.mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(&ab_c, &a_bc);
        // distributivity
        let lhs = r.mul(&a, &r.add(&b, &c).unwrap()).unwrap();
        let rhs = r.add(&r.mul(&a, &b).unwrap(), &r.mul(&a, &c).unwrap()).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        // unit law
        prop_assert_eq!(&r.mul(&a, &r.one().unwrap()).unwrap(), &a);
        // additive inverse
        prop_assert!(r.add(&a, &r.neg(&a).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn rule_maps_determined_by_monomial_basis_within_degree(
        coeffs in prop::collection::vec(-5i32..=5, 1..9)
    ) {
        // built-in rules are coefficientwise-linear: a map agreeing with
        // another on the monomial basis through the degree bound agrees on
        // every polynomial within that bound
        let r = qx();
        let d1 = AdditiveMap::formal_derivative(&r).unwrap();
        let d2 = AdditiveMap::scaled_derivative(&r, 1).unwrap();
        let p = to_poly(&r, &coeffs);
        prop_assert_eq!(d1.apply(&p).unwrap(), d2.apply(&p).unwrap());
    }

    #[test]
    fn df_law_holds_for_example_2_3_triple_on_random_inputs(
        a in poly_strategy(), b in poly_strategy(), c in poly_strategy()
    ) {
        let r = qx();
        let m = Carrier::product_module("M", vec![r.clone(), r.clone()], r.clone()).unwrap();
        let d = AdditiveMap::d_example(&m, "d2_ex23", 1).unwrap();
        let delta = AdditiveMap::scaled_derivative(&r, 1).unwrap();
        let f = AdditiveMap::project_scaled(&m, 1, 1).unwrap();
        let x = Element::new(&m, Value::Tuple(vec![
            to_poly(&r, &a).value, to_poly(&r, &b).value,
        ])).unwrap();
        let cc = to_poly(&r, &c);
        let lhs = d.apply(&m.act_right(&x, &cc).unwrap()).unwrap();
        let rhs = m.add(
            &m.act_right(&d.apply(&x).unwrap(), &cc).unwrap(),
            &m.act_right(&f.apply(&x).unwrap(), &delta.apply(&cc).unwrap()).unwrap(),
        ).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn finite_carrier_axioms_exhaustive() {
    // full ring-axiom sweep on Z6, T2(Z3), and a quotient
    for carrier in [
        Carrier::modular_ring("Z6", 6).unwrap(),
        Carrier::triangular_algebra("T2Z3", 2, ScalarDomain::Modular(3)).unwrap(),
    ] {
        let elems: Vec<Element> = carrier
            .elements()
            .unwrap()
            .iter()
            .map(|v| Element::new(&carrier, v.clone()).unwrap())
            .collect();
        let one = carrier.one().unwrap();
        for a in &elems {
            assert_eq!(&carrier.mul(a, &one).unwrap(), a);
            assert_eq!(&carrier.mul(&one, a).unwrap(), a);
            assert!(carrier.add(a, &carrier.neg(a).unwrap()).unwrap().is_zero());
            for b in &elems {
                for c in &elems {
                    let ab_c = carrier.mul(&carrier.mul(a, b).unwrap(), c).unwrap();
                    let a_bc = carrier.mul(a, &carrier.mul(b, c).unwrap()).unwrap();
                    assert_eq!(ab_c, a_bc);
                    let lhs = carrier.mul(a, &carrier.add(b, c).unwrap()).unwrap();
                    let rhs = carrier
                        .add(&carrier.mul(a, b).unwrap(), &carrier.mul(a, c).unwrap())
                        .unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}

#[test]
fn module_axioms_exhaustive_on_z6() {
    let z6 = Carrier::modular_ring("Z6", 6).unwrap();
    let m = Carrier::module_over_self("M", &z6).unwrap();
    let melems: Vec<Element> = m
        .elements()
        .unwrap()
        .iter()
        .map(|v| Element::new(&m, v.clone()).unwrap())
        .collect();
    let relems: Vec<Element> = z6
        .elements()
        .unwrap()
        .iter()
        .map(|v| Element::new(&z6, v.clone()).unwrap())
        .collect();
    let one = z6.one().unwrap();
    for x in &melems {
        assert_eq!(&m.act_right(x, &one).unwrap(), x, "modules are unital");
        for r in &relems {
            for s in &relems {
                let xr_s = m.act_right(&m.act_right(x, r).unwrap(), s).unwrap();
                let x_rs = m.act_right(x, &z6.mul(r, s).unwrap()).unwrap();
                assert_eq!(xr_s, x_rs);
            }
        }
    }
}

#[test]
fn quotient_projection_laws_exhaustive() {
    // Z6 / {0,2,4}: projection is additive, multiplicative, and kills the
    // ideal; coset count is 6/3
    let z6 = Carrier::modular_ring("Z6", 6).unwrap();
    let ideal = Ideal::from_elements(
        &z6,
        vec![
            Value::Scalar(Scalar::Mod(0)),
            Value::Scalar(Scalar::Mod(2)),
            Value::Scalar(Scalar::Mod(4)),
        ],
        Sidedness::TwoSided,
    )
    .unwrap();
    let q = Carrier::quotient_ring("Q", &z6, ideal.clone()).unwrap();
    assert_eq!(q.cardinality().finite(), Some(2));
    for a in z6.elements().unwrap() {
        for b in z6.elements().unwrap() {
            let sum = z6.add_value(a, b);
            assert_eq!(q.reduce(sum), q.add_value(&q.reduce(a.clone()), &q.reduce(b.clone())));
            let prod = z6.mul_value(a, b).unwrap();
            assert_eq!(
                q.reduce(prod),
                q.mul_value(&q.reduce(a.clone()), &q.reduce(b.clone())).unwrap()
            );
        }
    }
    for v in ideal.finite_elements().unwrap() {
        assert_eq!(q.reduce(v.clone()), q.zero_value());
    }
    // quotient by the zero ideal is a copy of the parent
    let q0 = Carrier::quotient_ring("Q0", &z6, Ideal::zero(&z6)).unwrap();
    assert_eq!(q0.cardinality().finite(), Some(6));
    for v in z6.elements().unwrap() {
        assert_eq!(q0.reduce(v.clone()), v.clone());
    }
    // module quotient: Z6 / {0,3} has three cosets
    let m = Carrier::module_over_self("M", &z6).unwrap();
    let sub = Submodule::from_elements(
        &m,
        vec![Value::Scalar(Scalar::Mod(0)), Value::Scalar(Scalar::Mod(3))],
    )
    .unwrap();
    let qm = Carrier::quotient_module("QM", &m, sub, &z6).unwrap();
    assert_eq!(qm.cardinality().finite(), Some(3));
}

#[test]
fn colon_equals_annihilator_of_quotient_on_finite_instances() {
    let z6 = Carrier::modular_ring("Z6", 6).unwrap();
    let m = Carrier::module_over_self("M", &z6).unwrap();
    for members in [
        vec![0u64, 3],
        vec![0, 2, 4],
        vec![0, 1, 2, 3, 4, 5],
    ] {
        let sub = Submodule::from_elements(
            &m,
            members.iter().map(|&x| Value::Scalar(Scalar::Mod(x))).collect(),
        )
        .unwrap();
        let direct = analysis::colon_ideal(&sub, &m).unwrap();
        let via_quotient = analysis::colon_via_quotient(&sub, &m).unwrap();
        assert!(direct.same_members(&via_quotient));
    }
}

#[test]
fn prime_submodule_implies_prime_colon_ideal() {
    // the triangular instance plus the zero submodule of a prime module
    let t2 = Carrier::triangular_algebra("T2Z3", 2, ScalarDomain::Modular(3)).unwrap();
    let m = Carrier::module_over_self("M", &t2).unwrap();
    let e11 = m.element_from_json(&serde_json::json!([[1, 0], [0, 0]])).unwrap();
    let e12 = m.element_from_json(&serde_json::json!([[0, 1], [0, 0]])).unwrap();
    let top = Submodule::from_generators(&m, &[e11, e12]).unwrap();
    assert!(analysis::is_prime_submodule(&top, &m).unwrap().holds());
    let colon = analysis::colon_ideal(&top, &m).unwrap();
    assert!(analysis::is_prime_ideal(&colon).unwrap().holds());

    let s = Carrier::matrix_algebra("M2Z3", 2, ScalarDomain::Modular(3)).unwrap();
    let ms = Carrier::module_over_self("MS", &s).unwrap();
    let zero = Submodule::zero(&ms);
    assert!(analysis::is_prime_submodule(&zero, &ms).unwrap().holds());
    let colon = analysis::colon_ideal(&zero, &ms).unwrap();
    assert!(analysis::is_prime_ideal(&colon).unwrap().holds());
}

#[test]
fn prime_faithful_module_gives_prime_quotient_ring() {
    // M finite, prime, faithful => R / Ann is a prime ring
    let s = Carrier::matrix_algebra("M2Z3", 2, ScalarDomain::Modular(3)).unwrap();
    let m = Carrier::module_over_self("M", &s).unwrap();
    assert!(analysis::is_prime_module(&m).unwrap().holds());
    let ann = analysis::right_annihilator(&m).unwrap();
    assert!(ann.is_zero_only().unwrap());
    let quotient = Carrier::quotient_ring("RA", &s, ann).unwrap();
    assert!(analysis::is_prime_ring(&quotient).unwrap().holds());
}

#[test]
fn df_derivations_also_pass_the_jordan_check() {
    // metamorphic: substituting a = x in the df law gives the Jordan law
    let s = Carrier::matrix_algebra("M2Z3", 2, ScalarDomain::Modular(3)).unwrap();
    let mb = Carrier::bimodule_over_self("Mb", &s).unwrap();
    let probe = ProbeSpec::default();
    for b0_json in [
        serde_json::json!([[0, 1], [0, 0]]),
        serde_json::json!([[1, 2], [0, 2]]),
        serde_json::json!([[2, 0], [1, 1]]),
    ] {
        let b0m = mb.element_from_json(&b0_json).unwrap();
        let b0s = s.element_from_json(&b0_json).unwrap();
        let d = AdditiveMap::right_mult(&s, &mb, &b0m).unwrap();
        let delta = AdditiveMap::inner_derivation(&b0s).unwrap();
        let f = AdditiveMap::negation_into(&s, &mb).unwrap();
        let df = check_df_derivation(&d, &delta, &f, &probe, &[]).unwrap();
        assert!(df.passed(), "the right-mult triple is a full df-derivation");
        let jordan = check_jordan_df_derivation(&d, &delta, &f, &probe).unwrap();
        assert!(jordan.passed(), "df implies the Jordan law");
    }
}

#[test]
fn t_set_is_zero_off_center_on_jointly_prime_instances() {
    let s = Carrier::matrix_algebra("M2Z3", 2, ScalarDomain::Modular(3)).unwrap();
    let mb = Carrier::bimodule_over_self("Mb", &s).unwrap();
    let center: Vec<Value> = analysis::center(&s).unwrap();
    for v in s.elements().unwrap() {
        let x = Element::new(&s, v.clone()).unwrap();
        let t = analysis::t_set(&x, &mb).unwrap();
        let size = t.finite_elements().unwrap().len();
        if center.contains(v) {
            assert_eq!(size, 81, "central x has T(x) = M");
        } else {
            assert_eq!(size, 1, "non-central x has T(x) = 0");
        }
    }
}

#[test]
fn p_set_examples() {
    let s = Carrier::matrix_algebra("M2Z3", 2, ScalarDomain::Modular(3)).unwrap();
    let mb = Carrier::bimodule_over_self("Mb", &s).unwrap();
    // a validated df-derivation has P = S
    let b0m = mb.element_from_json(&serde_json::json!([[0, 1], [0, 0]])).unwrap();
    let b0s = s.element_from_json(&serde_json::json!([[0, 1], [0, 0]])).unwrap();
    let d = AdditiveMap::right_mult(&s, &mb, &b0m).unwrap();
    let delta = AdditiveMap::inner_derivation(&b0s).unwrap();
    assert_eq!(analysis::p_set(&d, &delta, &AdditiveMap::negation_into(&s, &mb).unwrap()).unwrap().len(), 81);
    // D = 0, delta = 0: the law reads 0 = 0 for any module-hom f
    let zero_d = AdditiveMap::zero_map(&s, &mb);
    let zero_delta = AdditiveMap::zero_map(&s, &s);
    let f = AdditiveMap::identity_into(&s, &mb).unwrap();
    assert_eq!(analysis::p_set(&zero_d, &zero_delta, &f).unwrap().len(), 81);
    // nilpotent squares land in P for Jordan-validated maps (df here)
    let nil = s.element_from_json(&serde_json::json!([[0, 1], [0, 0]])).unwrap();
    let sq = s.mul(&nil, &nil).unwrap();
    assert!(sq.is_zero());
    let p = analysis::p_set(&d, &delta, &AdditiveMap::negation_into(&s, &mb).unwrap()).unwrap();
    assert!(p.contains(&nil.value));
}

#[test]
fn every_named_constructor_is_additive() {
    use dfderive::check::check_additive;
    let probe = ProbeSpec {
        random_samples: 40,
        ..ProbeSpec::default()
    };
    let r = qx();
    let m = Carrier::product_module("M", vec![r.clone(), r.clone()], r.clone()).unwrap();
    let s = Carrier::matrix_algebra("S", 2, ScalarDomain::Rationals).unwrap();
    let mb = Carrier::bimodule_over_self("Mb", &s).unwrap();
    let b0m = mb.element_from_json(&serde_json::json!([[0, 1], [1, 0]])).unwrap();
    let b0s = s.element_from_json(&serde_json::json!([[0, 1], [1, 0]])).unwrap();
    let x_elem = r.element_from_json(&serde_json::json!([0, 1])).unwrap();

    let maps = vec![
        AdditiveMap::identity(&m),
        AdditiveMap::pair_identity(&m).unwrap(),
        AdditiveMap::zero_map(&m, &m),
        AdditiveMap::negation(&m),
        AdditiveMap::formal_derivative(&r).unwrap(),
        AdditiveMap::formal_derivative(&m).unwrap(),
        AdditiveMap::scaled_derivative(&r, 3).unwrap(),
        AdditiveMap::inner_derivation(&b0s).unwrap(),
        AdditiveMap::pair_scaling(&m, 2, 3).unwrap(),
        AdditiveMap::project_first(&m).unwrap(),
        AdditiveMap::project_scaled(&m, 2, 3).unwrap(),
        AdditiveMap::gamma_mix(&m).unwrap(),
        AdditiveMap::gamma_mix_projected(&m).unwrap(),
        AdditiveMap::left_mult(&m, &x_elem).unwrap(),
        AdditiveMap::right_mult(&s, &mb, &b0m).unwrap(),
        AdditiveMap::central_scale(&s, &mb, ScalarDomain::Rationals.from_i64(5)).unwrap(),
        AdditiveMap::d_example(&m, "d1_ex21", 1).unwrap(),
        AdditiveMap::d_example(&m, "d2_ex21", 2).unwrap(),
        AdditiveMap::d_example(&m, "d1_ex23", 1).unwrap(),
        AdditiveMap::d_example(&m, "d2_ex23", 2).unwrap(),
    ];
    for map in &maps {
        let report = check_additive(map, &probe).unwrap();
        assert!(report.passed(), "{} is not additive", map.name());
    }
}

#[test]
fn composition_is_associative_up_to_probe_equality() {
    use dfderive::map::maps_equal;
    let r = qx();
    let a = AdditiveMap::formal_derivative(&r).unwrap();
    let b = AdditiveMap::scaled_derivative(&r, 2).unwrap();
    let c = AdditiveMap::identity(&r);
    let left = AdditiveMap::compose(&AdditiveMap::compose(&a, &b).unwrap(), &c).unwrap();
    let right = AdditiveMap::compose(&a, &AdditiveMap::compose(&b, &c).unwrap()).unwrap();
    let probe = ProbeSpec::default();
    assert!(maps_equal(&left, &right, &probe).unwrap().equal);
}

#[test]
fn p_set_lemma_implications_on_the_finite_instance() {
    // on a jointly-prime 2-torsion-free instance over a prime algebra:
    // every s with s^2 = 0 lies in P, and every v commuting with some
    // u in P outside the center lies in P
    let s = Carrier::matrix_algebra("M2Z3", 2, ScalarDomain::Modular(3)).unwrap();
    let mb = Carrier::bimodule_over_self("Mb", &s).unwrap();
    let b0m = mb.element_from_json(&serde_json::json!([[0, 1], [0, 0]])).unwrap();
    let b0s = s.element_from_json(&serde_json::json!([[0, 1], [0, 0]])).unwrap();
    let d = AdditiveMap::right_mult(&s, &mb, &b0m).unwrap();
    let delta = AdditiveMap::inner_derivation(&b0s).unwrap();
    let f = AdditiveMap::negation_into(&s, &mb).unwrap();
    let p = analysis::p_set(&d, &delta, &f).unwrap();
    let center = analysis::center(&s).unwrap();
    let elems = s.elements().unwrap();
    for u in elems {
        let ue = Element::new(&s, u.clone()).unwrap();
        if s.mul(&ue, &ue).unwrap().is_zero() {
            assert!(p.contains(u), "square-zero element outside P");
        }
        if p.contains(u) && !center.contains(u) {
            for v in elems {
                let ve = Element::new(&s, v.clone()).unwrap();
                if s.mul(&ve, &ue).unwrap() == s.mul(&ue, &ve).unwrap() {
                    assert!(p.contains(v), "commuting partner escapes P");
                }
            }
        }
    }
}
