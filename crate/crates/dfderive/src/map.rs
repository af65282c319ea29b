//! Additive maps between carriers, with named constructors for every map
//! used in the worked examples, lazy combinators, and probe-based equality.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::carrier::{Carrier, Construction, Element};
use crate::error::{Error, Result};
use crate::probe::{probe_elements, ProbeSpec, Strategy};
use crate::scalar::{Scalar, ScalarDomain};
use crate::value::Value;

/// What a map claims to be. A claim is not a fact until a checker says so.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoleClaim {
    Derivation,
    ModuleHom,
    BimoduleHom,
    DfDerivation,
    JordanDfDerivation,
    Endomorphism,
    Unclassified,
}

#[derive(Clone, Debug)]
pub enum Rule {
    Identity,
    Zero,
    Negation,
    FormalDerivative,
    ScaledDerivative(Scalar),
    /// `A -> B0*A - A*B0`.
    Inner(Value),
    /// `[a; b] -> [(p/q) a; (1/q) b]`.
    PairScaling { p: i64, q: i64 },
    /// `[a; b] -> [a; 0]`.
    ProjectFirst,
    /// `[a; b] -> [(p/q) a; 0]`.
    ProjectScaled { p: i64, q: i64 },
    /// `[a; b] -> [2a + 3b; a]`.
    GammaMix,
    /// `[a; b] -> [2a + 3b; 0]`.
    GammaMixProjected,
    /// `m -> c*m` (componentwise on products).
    LeftMult(Value),
    /// `x -> x*b0` in the target construction.
    RightMult(Value),
    /// `x -> x*c` entrywise for a central scalar `c`.
    CentralScale(Scalar),
    D1Ex21,
    D2Ex21 { p: i64 },
    D1Ex23,
    D2Ex23 { p: i64 },
    Table(Arc<Vec<u32>>),
    Compose(AdditiveMap, AdditiveMap),
    Sum(AdditiveMap, AdditiveMap),
    Negate(AdditiveMap),
}

pub struct MapData {
    pub name: String,
    pub source: Carrier,
    pub target: Carrier,
    pub rule: Rule,
    pub role_claim: RoleClaim,
    table: OnceLock<Arc<Vec<u32>>>,
}

/// Cheap handle to an immutable additive map.
#[derive(Clone)]
pub struct AdditiveMap(Arc<MapData>);

impl fmt::Debug for AdditiveMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AdditiveMap({})", self.0.name)
    }
}

fn is_poly_or_poly_product(c: &Carrier) -> bool {
    match c.construction() {
        Construction::Polynomial(_) => true,
        Construction::Product(cs) => cs
            .iter()
            .all(|c| matches!(c.construction(), Construction::Polynomial(_))),
        _ => false,
    }
}

fn pair_of_polys(c: &Carrier) -> Result<()> {
    match c.construction() {
        Construction::Product(cs)
            if cs.len() == 2
                && cs
                    .iter()
                    .all(|c| matches!(c.construction(), Construction::Polynomial(_))) =>
        {
            Ok(())
        }
        _ => Err(Error::UnsupportedCarrier(format!(
            "`{}` is not a pair of polynomial carriers",
            c.id()
        ))),
    }
}

impl AdditiveMap {
    fn build(
        name: impl Into<String>,
        source: &Carrier,
        target: &Carrier,
        rule: Rule,
        role_claim: RoleClaim,
    ) -> AdditiveMap {
        AdditiveMap(Arc::new(MapData {
            name: name.into(),
            source: source.clone(),
            target: target.clone(),
            rule,
            role_claim,
            table: OnceLock::new(),
        }))
    }

    // ------------------------------------------------------------- constructors

    pub fn identity(c: &Carrier) -> AdditiveMap {
        Self::build("identity", c, c, Rule::Identity, RoleClaim::ModuleHom)
    }

    /// `pair_identity` is the identity on a pair module; kept as a named
    /// constructor because scenario files refer to it by this name.
    pub fn pair_identity(c: &Carrier) -> Result<AdditiveMap> {
        pair_of_polys(c)?;
        Ok(Self::build("pair_identity", c, c, Rule::Identity, RoleClaim::ModuleHom))
    }

    pub fn zero_map(source: &Carrier, target: &Carrier) -> AdditiveMap {
        Self::build("zero", source, target, Rule::Zero, RoleClaim::ModuleHom)
    }

    pub fn negation(c: &Carrier) -> AdditiveMap {
        Self::build("negation", c, c, Rule::Negation, RoleClaim::BimoduleHom)
    }

    /// `x -> x` from an algebra into a bimodule with the same construction.
    pub fn identity_into(source: &Carrier, target: &Carrier) -> Result<AdditiveMap> {
        if !source.same_structure(target) {
            return Err(Error::CarrierMismatch(
                "identity_into needs source and target with one construction".into(),
            ));
        }
        Ok(Self::build("identity", source, target, Rule::Identity, RoleClaim::BimoduleHom))
    }

    /// `x -> -x` from an algebra into a bimodule with the same construction.
    pub fn negation_into(source: &Carrier, target: &Carrier) -> Result<AdditiveMap> {
        if !source.same_structure(target) {
            return Err(Error::CarrierMismatch(
                "negation_into needs source and target with one construction".into(),
            ));
        }
        Ok(Self::build("negation", source, target, Rule::Negation, RoleClaim::BimoduleHom))
    }

    /// Coefficient-rule formal derivative, componentwise on products of
    /// polynomial carriers.
    pub fn formal_derivative(c: &Carrier) -> Result<AdditiveMap> {
        if !is_poly_or_poly_product(c) {
            return Err(Error::UnsupportedCarrier(format!(
                "formal derivative needs a polynomial construction, got `{}`",
                c.id()
            )));
        }
        let claim = match c.construction() {
            Construction::Polynomial(_) => RoleClaim::Derivation,
            _ => RoleClaim::DfDerivation,
        };
        Ok(Self::build("formal_derivative", c, c, Rule::FormalDerivative, claim))
    }

    /// `a -> q * a'`.
    pub fn scaled_derivative(c: &Carrier, q: i64) -> Result<AdditiveMap> {
        if !is_poly_or_poly_product(c) {
            return Err(Error::UnsupportedCarrier(format!(
                "scaled derivative needs a polynomial construction, got `{}`",
                c.id()
            )));
        }
        let base = poly_base(c);
        Ok(Self::build(
            format!("scaled_derivative(q={})", q),
            c,
            c,
            Rule::ScaledDerivative(base.from_i64(q)),
            RoleClaim::Derivation,
        ))
    }

    /// The commutator map `A -> [B0, A] = B0*A - A*B0`.
    pub fn inner_derivation(b0: &Element) -> Result<AdditiveMap> {
        let c = &b0.carrier;
        match c.kind() {
            crate::carrier::CarrierKind::Ring | crate::carrier::CarrierKind::Algebra => {}
            _ => {
                return Err(Error::CarrierMismatch(
                    "inner derivation needs a ring or algebra element".into(),
                ))
            }
        }
        Ok(Self::build(
            format!("inner_derivation({})", b0.value),
            c,
            c,
            Rule::Inner(b0.value.clone()),
            RoleClaim::Derivation,
        ))
    }

    /// `[a; b] -> [(p/q) a; (1/q) b]`; requires `q != 0`.
    pub fn pair_scaling(c: &Carrier, p: i64, q: i64) -> Result<AdditiveMap> {
        pair_of_polys(c)?;
        if q == 0 {
            return Err(Error::NonIntegralScaling("pair_scaling requires q != 0".into()));
        }
        Ok(Self::build(
            format!("pair_scaling(p={},q={})", p, q),
            c,
            c,
            Rule::PairScaling { p, q },
            RoleClaim::ModuleHom,
        ))
    }

    pub fn project_first(c: &Carrier) -> Result<AdditiveMap> {
        pair_of_polys(c)?;
        Ok(Self::build("project_first", c, c, Rule::ProjectFirst, RoleClaim::ModuleHom))
    }

    pub fn project_scaled(c: &Carrier, p: i64, q: i64) -> Result<AdditiveMap> {
        pair_of_polys(c)?;
        if q == 0 {
            return Err(Error::NonIntegralScaling("project_scaled requires q != 0".into()));
        }
        Ok(Self::build(
            format!("project_scaled(p={},q={})", p, q),
            c,
            c,
            Rule::ProjectScaled { p, q },
            RoleClaim::ModuleHom,
        ))
    }

    pub fn gamma_mix(c: &Carrier) -> Result<AdditiveMap> {
        pair_of_polys(c)?;
        Ok(Self::build("gamma_mix", c, c, Rule::GammaMix, RoleClaim::Endomorphism))
    }

    pub fn gamma_mix_projected(c: &Carrier) -> Result<AdditiveMap> {
        pair_of_polys(c)?;
        Ok(Self::build(
            "gamma_mix_projected",
            c,
            c,
            Rule::GammaMixProjected,
            RoleClaim::Endomorphism,
        ))
    }

    /// Left multiplication `m -> c*m` by a ring element, componentwise on
    /// product modules.
    pub fn left_mult(module: &Carrier, c: &Element) -> Result<AdditiveMap> {
        let ring = module
            .over()
            .ok_or_else(|| Error::CarrierMismatch(format!("`{}` is not a module", module.id())))?;
        if !c.carrier.same_structure(ring) {
            return Err(Error::CarrierMismatch("left_mult scalar outside the acting ring".into()));
        }
        Ok(Self::build(
            format!("left_mult({})", c.value),
            module,
            module,
            Rule::LeftMult(c.value.clone()),
            RoleClaim::ModuleHom,
        ))
    }

    /// `x -> x * b0` into the bimodule containing `b0`.
    pub fn right_mult(source: &Carrier, target: &Carrier, b0: &Element) -> Result<AdditiveMap> {
        if !b0.carrier.same_structure(target) {
            return Err(Error::CarrierMismatch("right_mult element outside the target".into()));
        }
        if !source.same_structure(target) {
            return Err(Error::CarrierMismatch(
                "right_mult needs source and target with one construction".into(),
            ));
        }
        Ok(Self::build(
            format!("right_mult({})", b0.value),
            source,
            target,
            Rule::RightMult(b0.value.clone()),
            RoleClaim::JordanDfDerivation,
        ))
    }

    /// `x -> x*c` for a scalar `c` of the algebra's coefficient domain.
    pub fn central_scale(source: &Carrier, target: &Carrier, c: Scalar) -> Result<AdditiveMap> {
        if !source.same_structure(target) {
            return Err(Error::CarrierMismatch(
                "central_scale needs source and target with one construction".into(),
            ));
        }
        Ok(Self::build(
            format!("central_scale({})", c),
            source,
            target,
            Rule::CentralScale(c),
            RoleClaim::BimoduleHom,
        ))
    }

    /// The named `d` maps of the pair-module examples.
    pub fn d_example(c: &Carrier, which: &str, p: i64) -> Result<AdditiveMap> {
        pair_of_polys(c)?;
        let (rule, name) = match which {
            "d1_ex21" => (Rule::D1Ex21, "d1_ex21".to_string()),
            "d2_ex21" => (Rule::D2Ex21 { p }, format!("d2_ex21(p={})", p)),
            "d1_ex23" => (Rule::D1Ex23, "d1_ex23".to_string()),
            "d2_ex23" => (Rule::D2Ex23 { p }, format!("d2_ex23(p={})", p)),
            other => return Err(Error::ResolveError(format!("unknown d map `{}`", other))),
        };
        Ok(Self::build(name, c, c, rule, RoleClaim::DfDerivation))
    }

    /// A table-backed map given as (input, output) pairs covering the whole
    /// finite source exactly once.
    pub fn from_pairs(
        name: &str,
        source: &Carrier,
        target: &Carrier,
        pairs: &[(Value, Value)],
    ) -> Result<AdditiveMap> {
        let n = source.elements()?.len();
        let mut table = vec![u32::MAX; n];
        for (inp, out) in pairs {
            let i = source.index_of(inp)?;
            let o = target.index_of(out)?;
            if table[i as usize] != u32::MAX {
                return Err(Error::MalformedDescriptor(format!(
                    "table map assigns {} twice",
                    inp
                )));
            }
            table[i as usize] = o;
        }
        if table.iter().any(|&t| t == u32::MAX) {
            return Err(Error::MalformedDescriptor(
                "table map does not cover the whole source".into(),
            ));
        }
        Ok(Self::build(name, source, target, Rule::Table(Arc::new(table)), RoleClaim::Unclassified))
    }

    pub fn from_table(
        name: &str,
        source: &Carrier,
        target: &Carrier,
        table: Arc<Vec<u32>>,
    ) -> AdditiveMap {
        Self::build(name, source, target, Rule::Table(table), RoleClaim::Unclassified)
    }

    pub fn compose(outer: &AdditiveMap, inner: &AdditiveMap) -> Result<AdditiveMap> {
        if !inner.target().same_structure(outer.source()) {
            return Err(Error::CarrierMismatch(format!(
                "compose: inner target `{}` is not outer source `{}`",
                inner.target().id(),
                outer.source().id()
            )));
        }
        Ok(Self::build(
            format!("{}∘{}", outer.0.name, inner.0.name),
            inner.source(),
            outer.target(),
            Rule::Compose(outer.clone(), inner.clone()),
            RoleClaim::Unclassified,
        ))
    }

    pub fn sum(a: &AdditiveMap, b: &AdditiveMap) -> Result<AdditiveMap> {
        if !a.source().same_structure(b.source()) || !a.target().same_structure(b.target()) {
            return Err(Error::CarrierMismatch("sum: source/target mismatch".into()));
        }
        Ok(Self::build(
            format!("{}+{}", a.0.name, b.0.name),
            a.source(),
            a.target(),
            Rule::Sum(a.clone(), b.clone()),
            RoleClaim::Unclassified,
        ))
    }

    pub fn negate(a: &AdditiveMap) -> AdditiveMap {
        Self::build(
            format!("-{}", a.0.name),
            a.source(),
            a.target(),
            Rule::Negate(a.clone()),
            RoleClaim::Unclassified,
        )
    }

    pub fn with_name(&self, name: &str) -> AdditiveMap {
        Self::build(
            name,
            self.source(),
            self.target(),
            self.0.rule.clone(),
            self.0.role_claim,
        )
    }

    pub fn with_role(&self, role: RoleClaim) -> AdditiveMap {
        let m = Self::build(
            &self.0.name,
            self.source(),
            self.target(),
            self.0.rule.clone(),
            role,
        );
        m
    }

    // ----------------------------------------------------------------- access

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn source(&self) -> &Carrier {
        &self.0.source
    }

    pub fn target(&self) -> &Carrier {
        &self.0.target
    }

    pub fn role_claim(&self) -> RoleClaim {
        self.0.role_claim
    }

    pub fn rule(&self) -> &Rule {
        &self.0.rule
    }

    // ------------------------------------------------------------- evaluation

    pub fn apply(&self, x: &Element) -> Result<Element> {
        if !x.carrier.same_structure(self.source()) {
            return Err(Error::CarrierMismatch(format!(
                "map `{}` applied outside its source",
                self.0.name
            )));
        }
        let value = self.apply_value(&x.value)?;
        Element::new(self.target(), value)
    }

    pub fn apply_value(&self, v: &Value) -> Result<Value> {
        let src = self.source();
        let tgt = self.target();
        match &self.0.rule {
            Rule::Identity => Ok(v.clone()),
            Rule::Zero => Ok(tgt.zero_value()),
            Rule::Negation => Ok(tgt.neg_value(v)),
            Rule::FormalDerivative => derive_value(src, v, None),
            Rule::ScaledDerivative(q) => derive_value(src, v, Some(q)),
            Rule::Inner(b0) => {
                let left = src.mul_value(b0, v)?;
                let right = src.mul_value(v, b0)?;
                Ok(src.add_value(&left, &src.neg_value(&right)))
            }
            Rule::PairScaling { p, q } => match v {
                Value::Tuple(vs) => {
                    let comps = product_components(src)?;
                    let a = scale_ratio(&comps[0], &vs[0], *p, *q)?;
                    let b = scale_ratio(&comps[1], &vs[1], 1, *q)?;
                    Ok(Value::Tuple(vec![a, b]))
                }
                _ => unreachable!(),
            },
            Rule::ProjectFirst => match v {
                Value::Tuple(vs) => {
                    let comps = product_components(src)?;
                    Ok(Value::Tuple(vec![vs[0].clone(), comps[1].zero_value()]))
                }
                _ => unreachable!(),
            },
            Rule::ProjectScaled { p, q } => match v {
                Value::Tuple(vs) => {
                    let comps = product_components(src)?;
                    let a = scale_ratio(&comps[0], &vs[0], *p, *q)?;
                    Ok(Value::Tuple(vec![a, comps[1].zero_value()]))
                }
                _ => unreachable!(),
            },
            Rule::GammaMix => match v {
                Value::Tuple(vs) => {
                    let comps = product_components(src)?;
                    let two_a = comps[0].scale_value(&vs[0], 2);
                    let three_b = comps[1].scale_value(&vs[1], 3);
                    let top = comps[0].add_value(&two_a, &three_b);
                    Ok(Value::Tuple(vec![top, vs[0].clone()]))
                }
                _ => unreachable!(),
            },
            Rule::GammaMixProjected => match v {
                Value::Tuple(vs) => {
                    let comps = product_components(src)?;
                    let two_a = comps[0].scale_value(&vs[0], 2);
                    let three_b = comps[1].scale_value(&vs[1], 3);
                    let top = comps[0].add_value(&two_a, &three_b);
                    Ok(Value::Tuple(vec![top, comps[1].zero_value()]))
                }
                _ => unreachable!(),
            },
            Rule::LeftMult(c) => left_mult_value(src, c, v),
            Rule::RightMult(b0) => tgt.mul_value(v, b0),
            Rule::CentralScale(c) => {
                let e = Element {
                    carrier: tgt.clone(),
                    value: v.clone(),
                };
                Ok(tgt.scale_scalar(&e, c)?.value)
            }
            Rule::D1Ex21 => derive_value(src, v, None),
            Rule::D2Ex21 { p } => match v {
                Value::Tuple(vs) => {
                    let comps = product_components(src)?;
                    let da = derive_value(&comps[0], &vs[0], None)?;
                    let pda = comps[0].scale_value(&da, *p);
                    let top = comps[0].add_value(&pda, &vs[0]);
                    Ok(Value::Tuple(vec![top, vs[1].clone()]))
                }
                _ => unreachable!(),
            },
            Rule::D1Ex23 => match v {
                Value::Tuple(vs) => {
                    let comps = product_components(src)?;
                    let da = derive_value(&comps[0], &vs[0], None)?;
                    Ok(Value::Tuple(vec![da, comps[1].zero_value()]))
                }
                _ => unreachable!(),
            },
            Rule::D2Ex23 { p } => match v {
                Value::Tuple(vs) => {
                    let comps = product_components(src)?;
                    let da = derive_value(&comps[0], &vs[0], None)?;
                    let pda = comps[0].scale_value(&da, *p);
                    let top = comps[0].add_value(&pda, &vs[0]);
                    Ok(Value::Tuple(vec![top, comps[1].zero_value()]))
                }
                _ => unreachable!(),
            },
            Rule::Table(t) => {
                let i = src.index_of(v)?;
                tgt.value_at(t[i as usize])
            }
            Rule::Compose(outer, inner) => {
                let mid = inner.apply_value(v)?;
                outer.apply_value(&mid)
            }
            Rule::Sum(a, b) => {
                let x = a.apply_value(v)?;
                let y = b.apply_value(v)?;
                Ok(tgt.add_value(&x, &y))
            }
            Rule::Negate(a) => {
                let x = a.apply_value(v)?;
                Ok(tgt.neg_value(&x))
            }
        }
    }

    /// Dense index table over a finite source, cached.
    pub fn tabulate(&self) -> Result<Arc<Vec<u32>>> {
        if let Some(t) = self.0.table.get() {
            return Ok(t.clone());
        }
        let table = match &self.0.rule {
            Rule::Table(t) => t.clone(),
            _ => {
                let src = self.source().elements()?;
                let mut t = Vec::with_capacity(src.len());
                for v in src {
                    let out = self.apply_value(v)?;
                    t.push(self.target().index_of(&out)?);
                }
                Arc::new(t)
            }
        };
        let _ = self.0.table.set(table);
        Ok(self.0.table.get().unwrap().clone())
    }

    pub fn is_zero_map(&self, probe: &ProbeSpec) -> Result<bool> {
        let (elems, _) = probe_elements(self.source(), probe)?;
        for e in &elems {
            if !self.apply(e)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn poly_base(c: &Carrier) -> ScalarDomain {
    match c.construction() {
        Construction::Polynomial(b) => *b,
        Construction::Product(cs) => poly_base(&cs[0]),
        _ => ScalarDomain::Integers,
    }
}

fn product_components(c: &Carrier) -> Result<&[Carrier]> {
    match c.construction() {
        Construction::Product(cs) => Ok(cs),
        _ => Err(Error::UnsupportedCarrier(format!(
            "`{}` is not a product carrier",
            c.id()
        ))),
    }
}

/// Formal derivative of a polynomial payload; componentwise on tuples.
/// `scale` post-multiplies every coefficient (the `q a'` rule).
fn derive_value(c: &Carrier, v: &Value, scale: Option<&Scalar>) -> Result<Value> {
    match (c.construction(), v) {
        (Construction::Polynomial(base), Value::Poly(cs)) => {
            let mut out = Vec::new();
            for (i, coeff) in cs.iter().enumerate().skip(1) {
                let mut d = base.scale_i64(coeff, i as i64);
                if let Some(q) = scale {
                    d = base.mul(&d, q);
                }
                out.push(d);
            }
            Ok(Value::Poly(crate::carrier::poly_canon(out)))
        }
        (Construction::Product(comps), Value::Tuple(vs)) => {
            let mut out = Vec::with_capacity(vs.len());
            for (comp, v) in comps.iter().zip(vs) {
                out.push(derive_value(comp, v, scale)?);
            }
            Ok(Value::Tuple(out))
        }
        _ => Err(Error::UnsupportedCarrier(format!(
            "formal derivative on `{}`",
            c.id()
        ))),
    }
}

fn left_mult_value(module: &Carrier, c: &Value, v: &Value) -> Result<Value> {
    match (module.construction(), v) {
        (Construction::Product(comps), Value::Tuple(vs)) => {
            let mut out = Vec::with_capacity(vs.len());
            for (comp, x) in comps.iter().zip(vs) {
                out.push(comp.mul_value(c, x)?);
            }
            Ok(Value::Tuple(out))
        }
        (Construction::QuotientModule { parent, .. }, _) => {
            Ok(module.reduce(left_mult_value(parent, c, v)?))
        }
        (Construction::Span { parent, .. }, _) => left_mult_value(parent, c, v),
        _ => module.mul_value(c, v),
    }
}

/// Exact scalar multiplication by `p/q` on a polynomial component. Over the
/// rationals this always succeeds; over the integers every scaled
/// coefficient must stay integral.
fn scale_ratio(c: &Carrier, v: &Value, p: i64, q: i64) -> Result<Value> {
    let base = match c.construction() {
        Construction::Polynomial(b) => b,
        _ => {
            return Err(Error::UnsupportedCarrier(
                "ratio scaling on a non-polynomial component".into(),
            ))
        }
    };
    match (base, v) {
        (ScalarDomain::Rationals, Value::Poly(cs)) => {
            let ratio = Scalar::Rat(BigRational::new(BigInt::from(p), BigInt::from(q)));
            Ok(Value::Poly(crate::carrier::poly_canon(
                cs.iter().map(|x| base.mul(x, &ratio)).collect(),
            )))
        }
        (ScalarDomain::Integers, Value::Poly(cs)) => {
            let mut out = Vec::with_capacity(cs.len());
            for x in cs {
                let scaled = base.scale_i64(x, p);
                out.push(base.div(&scaled, &base.from_i64(q))?);
            }
            Ok(Value::Poly(crate::carrier::poly_canon(out)))
        }
        _ => Err(Error::UnsupportedCarrier("ratio scaling".into())),
    }
}

/// Equality verdict with the first disagreeing input, exact on finite
/// sources and probe-complete on symbolic ones.
#[derive(Debug)]
pub struct EqualityReport {
    pub equal: bool,
    pub strategy: Strategy,
    pub inputs_tested: u64,
    pub witness: Option<(Element, Element, Element)>,
}

pub fn maps_equal(a: &AdditiveMap, b: &AdditiveMap, probe: &ProbeSpec) -> Result<EqualityReport> {
    if !a.source().same_structure(b.source()) || !a.target().same_structure(b.target()) {
        return Err(Error::CarrierMismatch("maps_equal: source/target mismatch".into()));
    }
    let (elems, strategy) = probe_elements(a.source(), probe)?;
    let mut tested = 0;
    for e in &elems {
        tested += 1;
        let va = a.apply(e)?;
        let vb = b.apply(e)?;
        if va != vb {
            return Ok(EqualityReport {
                equal: false,
                strategy,
                inputs_tested: tested,
                witness: Some((e.clone(), va, vb)),
            });
        }
    }
    Ok(EqualityReport {
        equal: true,
        strategy,
        inputs_tested: tested,
        witness: None,
    })
}
