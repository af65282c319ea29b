//! Deterministic probe sets: the finite stand-in for "for all x" quantifiers
//! over symbolic carriers.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::carrier::{Carrier, Construction, Element};
use crate::error::{Error, Result};
use crate::scalar::ScalarDomain;
use crate::value::Value;

/// How a verdict was reached: full exhaustion of a finite carrier, or the
/// deterministic probe set of a symbolic one. A probe-complete verdict is
/// labeled as such; it is not a proof.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Exhaustive,
    ProbeComplete,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeSpec {
    pub max_degree: usize,
    pub coefficient_set: Vec<i64>,
    pub random_samples: usize,
    pub seed: u64,
}

impl Default for ProbeSpec {
    fn default() -> Self {
        ProbeSpec {
            max_degree: 8,
            coefficient_set: vec![-2, -1, 0, 1, 2],
            random_samples: 200,
            seed: 0,
        }
    }
}

impl ProbeSpec {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Basis probes: monomials through `max_degree` per polynomial component,
/// matrix units for symbolic matrix carriers.
pub fn basis_elements(carrier: &Carrier, spec: &ProbeSpec) -> Result<Vec<Element>> {
    let values = basis_values(carrier, spec)?;
    values
        .into_iter()
        .map(|v| Element::new(carrier, v))
        .collect()
}

fn basis_values(carrier: &Carrier, spec: &ProbeSpec) -> Result<Vec<Value>> {
    match carrier.construction() {
        Construction::Polynomial(base) => Ok((0..=spec.max_degree)
            .map(|d| {
                let mut cs = vec![base.zero(); d + 1];
                cs[d] = base.one();
                Value::Poly(cs)
            })
            .collect()),
        Construction::Matrix { size, base } => {
            let mut out = Vec::new();
            for i in 0..*size {
                for j in 0..*size {
                    let mut entries = vec![base.zero(); size * size];
                    entries[i * size + j] = base.one();
                    out.push(Value::Matrix {
                        size: *size,
                        entries,
                    });
                }
            }
            Ok(out)
        }
        Construction::Triangular { size, base } => {
            let mut out = Vec::new();
            for i in 0..*size {
                for j in i..*size {
                    let mut entries = vec![base.zero(); size * size];
                    entries[i * size + j] = base.one();
                    out.push(Value::Matrix {
                        size: *size,
                        entries,
                    });
                }
            }
            Ok(out)
        }
        Construction::Product(cs) => {
            let mut out = Vec::new();
            for (i, c) in cs.iter().enumerate() {
                for b in basis_values(c, spec)? {
                    let comps: Vec<Value> = cs
                        .iter()
                        .enumerate()
                        .map(|(j, cj)| if i == j { b.clone() } else { cj.zero_value() })
                        .collect();
                    out.push(Value::Tuple(comps));
                }
            }
            Ok(out)
        }
        _ => Err(Error::UnsupportedCarrier(format!(
            "no probe basis for `{}`",
            carrier.id()
        ))),
    }
}

fn random_scalar(base: &ScalarDomain, spec: &ProbeSpec, rng: &mut ChaCha8Rng) -> crate::scalar::Scalar {
    let k = spec.coefficient_set[rng.gen_range(0..spec.coefficient_set.len())];
    base.from_i64(k)
}

fn random_value(carrier: &Carrier, spec: &ProbeSpec, rng: &mut ChaCha8Rng) -> Result<Value> {
    match carrier.construction() {
        Construction::Polynomial(base) => {
            let deg = rng.gen_range(0..=spec.max_degree);
            let cs: Vec<_> = (0..=deg).map(|_| random_scalar(base, spec, rng)).collect();
            Ok(Value::Poly(crate::carrier::poly_canon(cs)))
        }
        Construction::Matrix { size, base } => Ok(Value::Matrix {
            size: *size,
            entries: (0..size * size)
                .map(|_| random_scalar(base, spec, rng))
                .collect(),
        }),
        Construction::Triangular { size, base } => {
            let mut entries = vec![base.zero(); size * size];
            for i in 0..*size {
                for j in i..*size {
                    entries[i * size + j] = random_scalar(base, spec, rng);
                }
            }
            Ok(Value::Matrix {
                size: *size,
                entries,
            })
        }
        Construction::Product(cs) => {
            let mut comps = Vec::with_capacity(cs.len());
            for c in cs {
                comps.push(random_value(c, spec, rng)?);
            }
            Ok(Value::Tuple(comps))
        }
        _ => Err(Error::UnsupportedCarrier(format!(
            "no random probes for `{}`",
            carrier.id()
        ))),
    }
}

/// The probe set for a single quantifier: all elements of a finite carrier,
/// otherwise the basis followed by seeded random samples.
pub fn probe_elements(carrier: &Carrier, spec: &ProbeSpec) -> Result<(Vec<Element>, Strategy)> {
    if carrier.is_finite() {
        let elems = carrier
            .elements()?
            .iter()
            .map(|v| Element {
                carrier: carrier.clone(),
                value: v.clone(),
            })
            .collect();
        return Ok((elems, Strategy::Exhaustive));
    }
    let mut out = basis_elements(carrier, spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..spec.random_samples {
        let v = random_value(carrier, spec, &mut rng)?;
        out.push(Element::new(carrier, v)?);
    }
    Ok((out, Strategy::ProbeComplete))
}

/// The probe set for a pair quantifier: the full square on finite carriers,
/// otherwise basis x basis followed by seeded random pairs.
pub fn probe_pairs(
    a: &Carrier,
    b: &Carrier,
    spec: &ProbeSpec,
) -> Result<(Vec<(Element, Element)>, Strategy)> {
    if a.is_finite() && b.is_finite() {
        let xs = a.elements()?;
        let ys = b.elements()?;
        let mut out = Vec::with_capacity(xs.len() * ys.len());
        for x in xs {
            for y in ys {
                out.push((
                    Element {
                        carrier: a.clone(),
                        value: x.clone(),
                    },
                    Element {
                        carrier: b.clone(),
                        value: y.clone(),
                    },
                ));
            }
        }
        return Ok((out, Strategy::Exhaustive));
    }
    let xs = basis_elements(a, spec)?;
    let ys = basis_elements(b, spec)?;
    let mut out = Vec::new();
    for x in &xs {
        for y in &ys {
            out.push((x.clone(), y.clone()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.wrapping_add(1));
    for _ in 0..spec.random_samples {
        let x = Element::new(a, random_value(a, spec, &mut rng)?)?;
        let y = Element::new(b, random_value(b, spec, &mut rng)?)?;
        out.push((x, y));
    }
    Ok((out, Strategy::ProbeComplete))
}

/// Probe triples for three-variable identities.
pub fn probe_triples(
    c: &Carrier,
    spec: &ProbeSpec,
) -> Result<(Vec<(Element, Element, Element)>, Strategy)> {
    if c.is_finite() {
        let xs = c.elements()?;
        let mut out = Vec::new();
        for x in xs {
            for y in xs {
                for z in xs {
                    let mk = |v: &Value| Element {
                        carrier: c.clone(),
                        value: v.clone(),
                    };
                    out.push((mk(x), mk(y), mk(z)));
                }
            }
        }
        return Ok((out, Strategy::Exhaustive));
    }
    let basis = basis_elements(c, spec)?;
    let mut out = Vec::new();
    for x in &basis {
        for y in &basis {
            for z in &basis {
                out.push((x.clone(), y.clone(), z.clone()));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.wrapping_add(2));
    for _ in 0..spec.random_samples {
        let x = Element::new(c, random_value(c, spec, &mut rng)?)?;
        let y = Element::new(c, random_value(c, spec, &mut rng)?)?;
        let z = Element::new(c, random_value(c, spec, &mut rng)?)?;
        out.push((x, y, z));
    }
    Ok((out, Strategy::ProbeComplete))
}

/// Probe quadruples for four-variable identities: basis tuples first, then
/// seeded random tuples. Finite carriers are handled by the exhaustive
/// scans, not here.
pub fn probe_quads(c: &Carrier, spec: &ProbeSpec) -> Result<(Vec<Vec<Element>>, Strategy)> {
    let basis = basis_elements(c, spec)?;
    let mut out = Vec::new();
    for x in &basis {
        for y in &basis {
            for z in &basis {
                for w in &basis {
                    out.push(vec![x.clone(), y.clone(), z.clone(), w.clone()]);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.wrapping_add(3));
    for _ in 0..spec.random_samples {
        let mut t = Vec::with_capacity(4);
        for _ in 0..4 {
            t.push(Element::new(c, random_value(c, spec, &mut rng)?)?);
        }
        out.push(t);
    }
    Ok((out, Strategy::ProbeComplete))
}

/// A seeded random element, used by witness sweeps.
pub fn random_element(carrier: &Carrier, spec: &ProbeSpec, rng: &mut ChaCha8Rng) -> Result<Element> {
    Element::new(carrier, random_value(carrier, spec, rng)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probe_generation_is_deterministic() {
        let qx = Carrier::polynomial_ring("Qx", ScalarDomain::Rationals).unwrap();
        let spec = ProbeSpec::default().with_seed(7);
        let (a, s1) = probe_elements(&qx, &spec).unwrap();
        let (b, s2) = probe_elements(&qx, &spec).unwrap();
        assert_eq!(s1, Strategy::ProbeComplete);
        assert_eq!(s1, s2);
        assert_eq!(a, b);
        assert_eq!(a.len(), 9 + 200);
    }

    #[test]
    fn monomial_basis_comes_first() {
        let qx = Carrier::polynomial_ring("Qx", ScalarDomain::Rationals).unwrap();
        let spec = ProbeSpec::default();
        let basis = basis_elements(&qx, &spec).unwrap();
        assert_eq!(basis.len(), 9);
        let d = ScalarDomain::Rationals;
        assert_eq!(basis[0].value, Value::Poly(vec![d.one()]));
        assert_eq!(basis[1].value, Value::Poly(vec![d.zero(), d.one()]));
    }

    #[test]
    fn finite_probe_is_exhaustive() {
        let z6 = Carrier::modular_ring("Z6", 6).unwrap();
        let (elems, s) = probe_elements(&z6, &ProbeSpec::default()).unwrap();
        assert_eq!(s, Strategy::Exhaustive);
        assert_eq!(elems.len(), 6);
    }
}
