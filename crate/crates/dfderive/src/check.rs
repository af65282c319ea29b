//! Witness-bearing law checkers: additivity, Leibniz, module/bimodule
//! homomorphism, (δ,f)-derivation, and Jordan (δ,f)-derivation.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::carrier::{Carrier, CarrierKind, Element};
use crate::error::{Error, Result};
use crate::map::AdditiveMap;
use crate::probe::{probe_elements, probe_pairs, ProbeSpec, Strategy};
use crate::value::Value;

/// Failing checks keep at most this many witnesses (scan order), while the
/// total failure count keeps counting.
pub const WITNESS_CAP: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One failing (or designated) input with both evaluated sides.
/// `residual = lhs - rhs`; it is nonzero exactly when the witness certifies
/// a failure.
#[derive(Clone, Debug)]
pub struct Witness {
    pub inputs: Vec<Value>,
    pub lhs: Value,
    pub rhs: Value,
    pub residual: Value,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub check: String,
    pub strategy: Strategy,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub failures: u64,
    pub inputs_tested: u64,
    pub elapsed_ms: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

struct Scan {
    check: String,
    strategy: Strategy,
    witnesses: Vec<Witness>,
    failures: u64,
    tested: u64,
    started: Instant,
}

impl Scan {
    fn new(check: &str, strategy: Strategy) -> Scan {
        Scan {
            check: check.to_string(),
            strategy,
            witnesses: Vec::new(),
            failures: 0,
            tested: 0,
            started: Instant::now(),
        }
    }

    fn record(&mut self, target: &Carrier, inputs: Vec<Value>, lhs: Element, rhs: Element) -> Result<()> {
        self.tested += 1;
        if lhs != rhs {
            self.failures += 1;
            if self.witnesses.len() < WITNESS_CAP {
                let residual = target.sub(&lhs, &rhs)?;
                self.witnesses.push(Witness {
                    inputs,
                    lhs: lhs.value,
                    rhs: rhs.value,
                    residual: residual.value,
                });
            }
        }
        Ok(())
    }

    fn finish(self) -> VerificationReport {
        VerificationReport {
            check: self.check,
            strategy: self.strategy,
            verdict: if self.failures == 0 {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            witnesses: self.witnesses,
            failures: self.failures,
            inputs_tested: self.tested,
            elapsed_ms: self.started.elapsed().as_secs_f64() * 1e3,
        }
    }
}

/// Right composition inside a map's source: ring multiplication when the
/// source is the ring itself, module action otherwise.
fn compose_right(source: &Carrier, x: &Element, a: &Element) -> Result<Element> {
    match source.kind() {
        CarrierKind::Ring | CarrierKind::Algebra => source.mul(x, a),
        _ => source.act_right(x, a),
    }
}

fn compose_left(source: &Carrier, a: &Element, x: &Element) -> Result<Element> {
    match source.kind() {
        CarrierKind::Ring | CarrierKind::Algebra => source.mul(a, x),
        CarrierKind::Bimodule => source.act_left(a, x),
        CarrierKind::RightModule => Err(Error::CarrierMismatch(
            "left composition on a right module".into(),
        )),
    }
}

/// The ring a map's source is quantified over: the acting ring for modules,
/// the carrier itself for rings and algebras.
fn acting_ring(source: &Carrier) -> Carrier {
    source.over().cloned().unwrap_or_else(|| source.clone())
}

/// Additivity: `m(a + b) = m(a) + m(b)` over all pairs (finite sources) or
/// probe pairs (symbolic sources).
pub fn check_additive(m: &AdditiveMap, probe: &ProbeSpec) -> Result<VerificationReport> {
    let src = m.source();
    let tgt = m.target();
    let (pairs, strategy) = probe_pairs(src, src, probe)?;
    let mut scan = Scan::new(&format!("additive({})", m.name()), strategy);
    for (a, b) in &pairs {
        let sum = src.add(a, b)?;
        let lhs = m.apply(&sum)?;
        let rhs = tgt.add(&m.apply(a)?, &m.apply(b)?)?;
        scan.record(tgt, vec![a.value.clone(), b.value.clone()], lhs, rhs)?;
    }
    Ok(scan.finish())
}

/// Leibniz rule `δ(ab) = δ(a)b + aδ(b)`. Additivity is re-checked first and
/// a non-additive map fails with the additivity witness.
pub fn check_derivation(delta: &AdditiveMap, probe: &ProbeSpec) -> Result<VerificationReport> {
    if !delta.source().same_structure(delta.target()) {
        return Err(Error::CarrierMismatch("a derivation maps a ring to itself".into()));
    }
    let additive = check_additive(delta, probe)?;
    if !additive.passed() {
        return Ok(VerificationReport {
            check: format!("derivation({})", delta.name()),
            ..additive
        });
    }
    let r = delta.source();
    let (pairs, strategy) = probe_pairs(r, r, probe)?;
    let mut scan = Scan::new(&format!("derivation({})", delta.name()), strategy);
    for (a, b) in &pairs {
        let ab = r.mul(a, b)?;
        let lhs = delta.apply(&ab)?;
        let da_b = r.mul(&delta.apply(a)?, b)?;
        let a_db = r.mul(a, &delta.apply(b)?)?;
        let rhs = r.add(&da_b, &a_db)?;
        scan.record(r, vec![a.value.clone(), b.value.clone()], lhs, rhs)?;
    }
    Ok(scan.finish())
}

/// Module-homomorphism law `f(m r) = f(m) r`.
pub fn check_module_hom(
    f: &AdditiveMap,
    probe: &ProbeSpec,
    leading: &[(Element, Element)],
) -> Result<VerificationReport> {
    let additive = check_additive(f, probe)?;
    if !additive.passed() {
        return Ok(VerificationReport {
            check: format!("module_hom({})", f.name()),
            ..additive
        });
    }
    let src = f.source();
    let tgt = f.target();
    let ring = acting_ring(src);
    let (pairs, strategy) = probe_pairs(src, &ring, probe)?;
    let mut scan = Scan::new(&format!("module_hom({})", f.name()), strategy);
    for (m, r) in leading.iter().chain(pairs.iter()) {
        let mr = compose_right(src, m, r)?;
        let lhs = f.apply(&mr)?;
        let rhs = compose_right(tgt, &f.apply(m)?, r)?;
        scan.record(tgt, vec![m.value.clone(), r.value.clone()], lhs, rhs)?;
    }
    Ok(scan.finish())
}

/// Bimodule-homomorphism law: `f(m r) = f(m) r` and `f(r m) = r f(m)`.
pub fn check_bimodule_hom(f: &AdditiveMap, probe: &ProbeSpec) -> Result<VerificationReport> {
    let additive = check_additive(f, probe)?;
    if !additive.passed() {
        return Ok(VerificationReport {
            check: format!("bimodule_hom({})", f.name()),
            ..additive
        });
    }
    let src = f.source();
    let tgt = f.target();
    let ring = acting_ring(src);
    let (pairs, strategy) = probe_pairs(src, &ring, probe)?;
    let mut scan = Scan::new(&format!("bimodule_hom({})", f.name()), strategy);
    for (m, r) in &pairs {
        let mr = compose_right(src, m, r)?;
        let lhs = f.apply(&mr)?;
        let rhs = compose_right(tgt, &f.apply(m)?, r)?;
        scan.record(tgt, vec![m.value.clone(), r.value.clone()], lhs, rhs)?;
        let rm = compose_left(src, r, m)?;
        let lhs = f.apply(&rm)?;
        let rhs = compose_left(tgt, r, &f.apply(m)?)?;
        scan.record(tgt, vec![r.value.clone(), m.value.clone()], lhs, rhs)?;
    }
    Ok(scan.finish())
}

/// Endomorphism = module homomorphism with source equal to target.
pub fn check_endomorphism(
    m: &AdditiveMap,
    probe: &ProbeSpec,
    leading: &[(Element, Element)],
) -> Result<VerificationReport> {
    if !m.source().same_structure(m.target()) {
        return Err(Error::CarrierMismatch("an endomorphism maps a module to itself".into()));
    }
    let mut report = check_module_hom(m, probe, leading)?;
    report.check = format!("endomorphism({})", m.name());
    Ok(report)
}

fn prereq(name: &str, report: &VerificationReport) -> Option<String> {
    if report.passed() {
        None
    } else {
        Some(format!("{}: {}", name, report.check))
    }
}

/// A failing prerequisite may only abort a check whose own law scan passes:
/// a witnessed failure of the law is meaningful regardless of the
/// prerequisites, while a vacuous pass over malformed inputs is not.
/// The composite maps of the composition theorems land exactly here --
/// δ1δ2 is usually not a derivation, yet the composite law must still be
/// evaluated and its witness reported.
fn guard_vacuous_pass(
    report: VerificationReport,
    prereq_failure: Option<String>,
) -> Result<VerificationReport> {
    match (report.passed(), prereq_failure) {
        (true, Some(which)) => Err(Error::PrereqFailed { which }),
        _ => Ok(report),
    }
}

/// The (δ,f)-derivation law `d(xa) = d(x)a + f(x)δ(a)`.
/// Prerequisites (d additive, δ a derivation, f a module homomorphism) are
/// always re-validated, never trusted from role claims.
pub fn check_df_derivation(
    d: &AdditiveMap,
    delta: &AdditiveMap,
    f: &AdditiveMap,
    probe: &ProbeSpec,
    leading: &[(Element, Element)],
) -> Result<VerificationReport> {
    let prereq_failure = prereq("d additive", &check_additive(d, probe)?)
        .or(prereq("delta derivation", &check_derivation(delta, probe)?))
        .or(prereq("f module_hom", &check_module_hom(f, probe, &[])?));
    let src = d.source();
    let tgt = d.target();
    let ring = acting_ring(src);
    if !delta.source().same_structure(&ring) {
        return Err(Error::CarrierMismatch("delta does not act on the module's ring".into()));
    }
    let (pairs, strategy) = probe_pairs(src, &ring, probe)?;
    let mut scan = Scan::new(
        &format!("df_derivation({}; {}, {})", d.name(), delta.name(), f.name()),
        strategy,
    );
    for (x, a) in leading.iter().chain(pairs.iter()) {
        let xa = compose_right(src, x, a)?;
        let lhs = d.apply(&xa)?;
        let dx_a = compose_right(tgt, &d.apply(x)?, a)?;
        let fx_da = compose_right(tgt, &f.apply(x)?, &delta.apply(a)?)?;
        let rhs = tgt.add(&dx_a, &fx_da)?;
        scan.record(tgt, vec![x.value.clone(), a.value.clone()], lhs, rhs)?;
    }
    guard_vacuous_pass(scan.finish(), prereq_failure)
}

/// The Jordan (δ,f)-derivation law `D(x²) = D(x)x + f(x)δ(x)`, a
/// single-variable law over the algebra.
pub fn check_jordan_df_derivation(
    d: &AdditiveMap,
    delta: &AdditiveMap,
    f: &AdditiveMap,
    probe: &ProbeSpec,
) -> Result<VerificationReport> {
    let prereq_failure = prereq("D additive", &check_additive(d, probe)?)
        .or(prereq("delta derivation", &check_derivation(delta, probe)?))
        .or(prereq("f bimodule_hom", &check_bimodule_hom(f, probe)?));
    let src = d.source();
    let tgt = d.target();
    let (elems, strategy) = probe_elements(src, probe)?;
    let mut scan = Scan::new(
        &format!(
            "jordan_df_derivation({}; {}, {})",
            d.name(),
            delta.name(),
            f.name()
        ),
        strategy,
    );
    for x in &elems {
        let x2 = src.mul(x, x)?;
        let lhs = d.apply(&x2)?;
        let dx_x = compose_right(tgt, &d.apply(x)?, x)?;
        let fx_dx = compose_right(tgt, &f.apply(x)?, &delta.apply(x)?)?;
        let rhs = tgt.add(&dx_x, &fx_dx)?;
        scan.record(tgt, vec![x.value.clone()], lhs, rhs)?;
    }
    guard_vacuous_pass(scan.finish(), prereq_failure)
}
