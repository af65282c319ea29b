//! Carriers: rings, algebras, right modules, and bimodules, with exact
//! element arithmetic and (for finite carriers) deterministic enumeration.
//!
//! A carrier is immutable after construction and cheap to clone (it is an
//! `Arc` handle), so elements and carriers can be shared freely across
//! parallel workers.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, ScalarDomain};
use crate::subset::{Ideal, Submodule};
use crate::tables::FiniteTables;
use crate::value::Value;

/// Largest finite carrier for which full operation tables are materialized.
pub const TABLE_ELEMENT_CAP: u64 = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CarrierKind {
    Ring,
    Algebra,
    RightModule,
    Bimodule,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactKind {
    Prime,
    TwoTorsionFree,
    JointlyPrime,
    Faithful,
}

impl fmt::Display for FactKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FactKind::Prime => "prime",
            FactKind::TwoTorsionFree => "two_torsion_free",
            FactKind::JointlyPrime => "jointly_prime",
            FactKind::Faithful => "faithful",
        };
        write!(f, "{}", s)
    }
}

/// A structural fact attached to a carrier at declaration time.
/// On finite carriers these are re-derived during construction; on infinite
/// carriers they are trusted metadata and every predicate reports them as
/// `declared`, never as computed verdicts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeclaredFact {
    pub fact: FactKind,
    pub provenance: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cardinality {
    Finite(u64),
    Infinite,
}

impl Cardinality {
    pub fn finite(&self) -> Option<u64> {
        match self {
            Cardinality::Finite(n) => Some(*n),
            Cardinality::Infinite => None,
        }
    }
}

/// How the carrier's elements are built.
#[derive(Clone, Debug)]
pub enum Construction {
    Modular(u64),
    Polynomial(ScalarDomain),
    Matrix { size: usize, base: ScalarDomain },
    /// Upper-triangular square matrices (entries below the diagonal are zero).
    Triangular { size: usize, base: ScalarDomain },
    Product(Vec<Carrier>),
    QuotientRing { parent: Carrier, ideal: Arc<Ideal> },
    QuotientModule { parent: Carrier, submodule: Arc<Submodule> },
    /// A submodule of `parent` materialized as a carrier of its own.
    Span { parent: Carrier, elements: Arc<Vec<Value>> },
}

pub(crate) struct QuotientInfo {
    /// Canonical representative of each parent element's coset.
    pub rep_of: HashMap<Value, Value>,
    /// Representatives in parent enumeration order.
    pub reps: Vec<Value>,
}

pub struct CarrierData {
    pub id: String,
    pub kind: CarrierKind,
    pub construction: Construction,
    /// Acting ring/algebra for module and bimodule carriers.
    pub over: Option<Carrier>,
    /// Scalar domain of the `Algebra` kind's scalar action.
    pub scalar_action: Option<ScalarDomain>,
    pub declared_facts: Vec<DeclaredFact>,
    pub cardinality: Cardinality,
    pub(crate) quotient: Option<QuotientInfo>,
    pub(crate) tables: OnceLock<Arc<FiniteTables>>,
    pub(crate) right_action: OnceLock<Arc<Vec<u32>>>,
    pub(crate) left_action: OnceLock<Arc<Vec<u32>>>,
}

/// Cheap handle to an immutable carrier.
#[derive(Clone)]
pub struct Carrier(pub(crate) Arc<CarrierData>);

impl fmt::Debug for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Carrier({})", self.0.id)
    }
}

/// An exact element of a carrier.
#[derive(Clone, Debug)]
pub struct Element {
    pub carrier: Carrier,
    pub value: Value,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.carrier.same_structure(&other.carrier) && self.value == other.value
    }
}
impl Eq for Element {}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Element {
    pub fn new(carrier: &Carrier, value: Value) -> Result<Element> {
        carrier.check_member(&value)?;
        Ok(Element {
            carrier: carrier.clone(),
            value,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.value == self.carrier.zero_value()
    }
}

impl Carrier {
    // ---------------------------------------------------------------- build

    fn build(data: CarrierData) -> Carrier {
        Carrier(Arc::new(data))
    }

    fn base_data(id: &str, kind: CarrierKind, construction: Construction) -> CarrierData {
        let cardinality = construction_cardinality(&construction);
        CarrierData {
            id: id.to_string(),
            kind,
            construction,
            over: None,
            scalar_action: None,
            declared_facts: Vec::new(),
            cardinality,
            quotient: None,
            tables: OnceLock::new(),
            right_action: OnceLock::new(),
            left_action: OnceLock::new(),
        }
    }

    /// The ring of residues mod `n`.
    pub fn modular_ring(id: &str, n: u64) -> Result<Carrier> {
        if n == 0 {
            return Err(Error::MalformedDescriptor("modulus must be positive".into()));
        }
        Ok(Self::build(Self::base_data(id, CarrierKind::Ring, Construction::Modular(n))))
    }

    /// The univariate polynomial ring over `base`.
    pub fn polynomial_ring(id: &str, base: ScalarDomain) -> Result<Carrier> {
        Ok(Self::build(Self::base_data(
            id,
            CarrierKind::Ring,
            Construction::Polynomial(base),
        )))
    }

    /// The full matrix algebra of `size`×`size` matrices over `base`.
    pub fn matrix_algebra(id: &str, size: usize, base: ScalarDomain) -> Result<Carrier> {
        if size == 0 {
            return Err(Error::MalformedDescriptor("matrix size must be positive".into()));
        }
        let mut data = Self::base_data(id, CarrierKind::Algebra, Construction::Matrix { size, base });
        data.scalar_action = Some(base);
        Ok(Self::build(data))
    }

    /// The algebra of upper-triangular `size`×`size` matrices over `base`.
    pub fn triangular_algebra(id: &str, size: usize, base: ScalarDomain) -> Result<Carrier> {
        if size == 0 {
            return Err(Error::MalformedDescriptor("matrix size must be positive".into()));
        }
        let mut data =
            Self::base_data(id, CarrierKind::Algebra, Construction::Triangular { size, base });
        data.scalar_action = Some(base);
        Ok(Self::build(data))
    }

    /// A product of carriers as a right module over `over`. Every component
    /// must itself be acted on by `over` (componentwise action).
    pub fn product_module(id: &str, components: Vec<Carrier>, over: Carrier) -> Result<Carrier> {
        if components.is_empty() {
            return Err(Error::MalformedDescriptor("empty product".into()));
        }
        for c in &components {
            if !c.same_structure(&over) {
                return Err(Error::MalformedDescriptor(format!(
                    "product component `{}` is not the acting ring `{}`",
                    c.0.id, over.0.id
                )));
            }
        }
        let mut data = Self::base_data(id, CarrierKind::RightModule, Construction::Product(components));
        data.over = Some(over);
        Ok(Self::build(data))
    }

    /// A ring or algebra viewed as a right module over itself.
    pub fn module_over_self(id: &str, ring: &Carrier) -> Result<Carrier> {
        match ring.0.kind {
            CarrierKind::Ring | CarrierKind::Algebra => {}
            _ => {
                return Err(Error::MalformedDescriptor(
                    "module_over_self needs a ring or algebra".into(),
                ))
            }
        }
        let mut data = Self::base_data(id, CarrierKind::RightModule, ring.0.construction.clone());
        data.over = Some(ring.clone());
        Ok(Self::build(data))
    }

    /// An algebra viewed as a bimodule over itself.
    pub fn bimodule_over_self(id: &str, algebra: &Carrier) -> Result<Carrier> {
        match algebra.0.kind {
            CarrierKind::Ring | CarrierKind::Algebra => {}
            _ => {
                return Err(Error::MalformedDescriptor(
                    "bimodule_over_self needs a ring or algebra".into(),
                ))
            }
        }
        let mut data = Self::base_data(id, CarrierKind::Bimodule, algebra.0.construction.clone());
        data.over = Some(algebra.clone());
        Ok(Self::build(data))
    }

    /// Quotient of a ring by a two-sided ideal (finite carriers only).
    pub fn quotient_ring(id: &str, parent: &Carrier, ideal: Ideal) -> Result<Carrier> {
        if !ideal.parent().same_structure(parent) {
            return Err(Error::MalformedDescriptor("ideal belongs to a different ring".into()));
        }
        if !ideal.is_two_sided() {
            return Err(Error::NotTwoSided(format!("ideal in `{}`", parent.0.id)));
        }
        let members = ideal.finite_elements()?.to_vec();
        ideal.validate_closure()?;
        let info = quotient_info(parent, &members)?;
        let n = info.reps.len() as u64;
        let mut data = Self::base_data(
            id,
            CarrierKind::Ring,
            Construction::QuotientRing {
                parent: parent.clone(),
                ideal: Arc::new(ideal),
            },
        );
        data.cardinality = Cardinality::Finite(n);
        data.quotient = Some(info);
        Ok(Self::build(data))
    }

    /// Quotient of a module by a submodule, as a module over `over`.
    /// `over` may be the original ring or a quotient of it; in the latter
    /// case well-definedness of the action is validated exhaustively.
    pub fn quotient_module(
        id: &str,
        parent: &Carrier,
        submodule: Submodule,
        over: &Carrier,
    ) -> Result<Carrier> {
        if !submodule.parent().same_structure(parent) {
            return Err(Error::MalformedDescriptor(
                "submodule belongs to a different module".into(),
            ));
        }
        let members = submodule.finite_elements()?.to_vec();
        submodule.validate_closure()?;
        let info = quotient_info(parent, &members)?;
        let n = info.reps.len() as u64;
        let mut data = Self::base_data(
            id,
            CarrierKind::RightModule,
            Construction::QuotientModule {
                parent: parent.clone(),
                submodule: Arc::new(submodule),
            },
        );
        data.cardinality = Cardinality::Finite(n);
        data.quotient = Some(info);
        data.over = Some(over.clone());
        let carrier = Self::build(data);
        carrier.validate_quotient_action()?;
        Ok(carrier)
    }

    /// A submodule materialized as a module carrier of its own.
    pub fn span_module(id: &str, submodule: &Submodule) -> Result<Carrier> {
        let parent = submodule.parent().clone();
        let over = parent
            .0
            .over
            .clone()
            .ok_or_else(|| Error::MalformedDescriptor("span parent has no acting ring".into()))?;
        let mut elements = submodule.finite_elements()?.to_vec();
        let order = parent.elements()?;
        let pos: HashMap<&Value, usize> = order.iter().enumerate().map(|(i, v)| (v, i)).collect();
        elements.sort_by_key(|v| pos[v]);
        let n = elements.len() as u64;
        let mut data = Self::base_data(
            id,
            CarrierKind::RightModule,
            Construction::Span {
                parent,
                elements: Arc::new(elements),
            },
        );
        data.cardinality = Cardinality::Finite(n);
        data.over = Some(over);
        Ok(Self::build(data))
    }

    /// Attach declared structural facts. Facts on finite carriers are
    /// re-derived immediately; a refuted fact aborts construction.
    pub fn with_declared_facts(&self, facts: Vec<DeclaredFact>) -> Result<Carrier> {
        let mut data = Self::base_data(&self.0.id, self.0.kind, self.0.construction.clone());
        data.over = self.0.over.clone();
        data.scalar_action = self.0.scalar_action;
        data.cardinality = self.0.cardinality;
        data.quotient = match &self.0.construction {
            Construction::QuotientRing { parent, ideal } => {
                Some(quotient_info(parent, ideal.finite_elements()?)?)
            }
            Construction::QuotientModule { parent, submodule } => {
                Some(quotient_info(parent, submodule.finite_elements()?)?)
            }
            _ => None,
        };
        data.declared_facts = facts;
        let carrier = Self::build(data);
        crate::analysis::validate_declared_facts(&carrier)?;
        Ok(carrier)
    }

    fn validate_quotient_action(&self) -> Result<()> {
        let over = self.0.over.as_ref().unwrap();
        if let Construction::QuotientRing { ideal, .. } = &over.0.construction {
            let (parent, sub) = match &self.0.construction {
                Construction::QuotientModule { parent, submodule } => (parent, submodule),
                _ => return Ok(()),
            };
            for m in parent.elements()? {
                for a in ideal.finite_elements()? {
                    let ma = parent.act_right_value(m, a)?;
                    if !sub.contains(&ma)? {
                        return Err(Error::ValidationError(format!(
                            "module action by quotient ring ill-defined: {} * {} escapes the submodule",
                            m, a
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    // ------------------------------------------------------------ accessors

    pub fn id(&self) -> &str {
        &self.0.id
    }

    pub fn kind(&self) -> CarrierKind {
        self.0.kind
    }

    pub fn construction(&self) -> &Construction {
        &self.0.construction
    }

    pub fn over(&self) -> Option<&Carrier> {
        self.0.over.as_ref()
    }

    pub fn scalar_action(&self) -> Option<ScalarDomain> {
        self.0.scalar_action
    }

    pub fn declared_facts(&self) -> &[DeclaredFact] {
        &self.0.declared_facts
    }

    pub fn cardinality(&self) -> Cardinality {
        self.0.cardinality
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.0.cardinality, Cardinality::Finite(_))
    }

    pub fn declared(&self, fact: FactKind) -> Option<&DeclaredFact> {
        self.0.declared_facts.iter().find(|f| f.fact == fact)
    }

    /// Structural equality: same construction tree, ignoring ids and kinds.
    /// Two carriers with equal structure share an element language.
    pub fn same_structure(&self, other: &Carrier) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        constructions_equal(&self.0.construction, &other.0.construction)
    }

    // ------------------------------------------------------------ elements

    pub fn zero_value(&self) -> Value {
        match &self.0.construction {
            Construction::Modular(_) => Value::Scalar(Scalar::Mod(0)),
            Construction::Polynomial(_) => Value::Poly(Vec::new()),
            Construction::Matrix { size, base } | Construction::Triangular { size, base } => {
                Value::Matrix {
                    size: *size,
                    entries: vec![base.zero(); size * size],
                }
            }
            Construction::Product(cs) => Value::Tuple(cs.iter().map(|c| c.zero_value()).collect()),
            Construction::QuotientRing { parent, .. }
            | Construction::QuotientModule { parent, .. } => {
                self.reduce(parent.zero_value())
            }
            Construction::Span { parent, .. } => parent.zero_value(),
        }
    }

    pub fn zero(&self) -> Element {
        Element {
            carrier: self.clone(),
            value: self.zero_value(),
        }
    }

    pub fn one_value(&self) -> Result<Value> {
        match &self.0.construction {
            Construction::Modular(n) => Ok(Value::Scalar(Scalar::Mod(if *n == 1 { 0 } else { 1 }))),
            Construction::Polynomial(base) => Ok(Value::Poly(vec![base.one()])),
            Construction::Matrix { size, base } | Construction::Triangular { size, base } => {
                let mut entries = vec![base.zero(); size * size];
                for i in 0..*size {
                    entries[i * size + i] = base.one();
                }
                Ok(Value::Matrix { size: *size, entries })
            }
            Construction::Product(cs) => {
                let mut vs = Vec::with_capacity(cs.len());
                for c in cs {
                    vs.push(c.one_value()?);
                }
                Ok(Value::Tuple(vs))
            }
            Construction::QuotientRing { parent, .. }
            | Construction::QuotientModule { parent, .. } => Ok(self.reduce(parent.one_value()?)),
            Construction::Span { parent, elements } => {
                let one = parent.one_value()?;
                if elements.contains(&one) {
                    Ok(one)
                } else {
                    Err(Error::NonUnitalModule(self.0.id.clone()))
                }
            }
        }
    }

    pub fn one(&self) -> Result<Element> {
        Ok(Element {
            carrier: self.clone(),
            value: self.one_value()?,
        })
    }

    pub fn element(&self, value: Value) -> Result<Element> {
        Element::new(self, value)
    }

    /// Membership plus canonical-form validation.
    pub fn check_member(&self, v: &Value) -> Result<()> {
        let fail = |msg: &str| Error::MalformedDescriptor(format!("{} in `{}`", msg, self.0.id));
        match (&self.0.construction, v) {
            (Construction::Modular(n), Value::Scalar(Scalar::Mod(x))) => {
                if x < n {
                    Ok(())
                } else {
                    Err(fail("residue out of range"))
                }
            }
            (Construction::Polynomial(base), Value::Poly(cs)) => {
                if let Some(last) = cs.last() {
                    if last.is_zero() {
                        return Err(fail("trailing zero coefficient"));
                    }
                }
                for c in cs {
                    if !base.is_canonical(c) {
                        return Err(fail("non-canonical coefficient"));
                    }
                }
                Ok(())
            }
            (Construction::Matrix { size, base }, Value::Matrix { size: s, entries }) => {
                if s != size || entries.len() != size * size {
                    return Err(fail("matrix shape mismatch"));
                }
                for e in entries {
                    if !base.is_canonical(e) {
                        return Err(fail("non-canonical entry"));
                    }
                }
                Ok(())
            }
            (Construction::Triangular { size, base }, Value::Matrix { size: s, entries }) => {
                if s != size || entries.len() != size * size {
                    return Err(fail("matrix shape mismatch"));
                }
                for i in 0..*size {
                    for j in 0..i {
                        if !entries[i * size + j].is_zero() {
                            return Err(fail("nonzero entry below the diagonal"));
                        }
                    }
                }
                for e in entries {
                    if !base.is_canonical(e) {
                        return Err(fail("non-canonical entry"));
                    }
                }
                Ok(())
            }
            (Construction::Product(cs), Value::Tuple(vs)) => {
                if cs.len() != vs.len() {
                    return Err(fail("tuple arity mismatch"));
                }
                for (c, v) in cs.iter().zip(vs) {
                    c.check_member(v)?;
                }
                Ok(())
            }
            (Construction::QuotientRing { parent, .. }, v)
            | (Construction::QuotientModule { parent, .. }, v) => {
                parent.check_member(v)?;
                let rep = self.reduce(v.clone());
                if &rep == v {
                    Ok(())
                } else {
                    Err(fail("non-canonical coset representative"))
                }
            }
            (Construction::Span { elements, .. }, v) => {
                if elements.contains(v) {
                    Ok(())
                } else {
                    Err(fail("value outside the span"))
                }
            }
            _ => Err(fail("payload shape does not match construction")),
        }
    }

    /// Canonical coset representative (identity on non-quotient carriers).
    pub fn reduce(&self, v: Value) -> Value {
        match &self.0.quotient {
            Some(info) => info.rep_of.get(&v).cloned().unwrap_or(v),
            None => v,
        }
    }

    // ----------------------------------------------------------- arithmetic

    fn expect_same(&self, other: &Carrier, what: &str) -> Result<()> {
        if self.same_structure(other) {
            Ok(())
        } else {
            Err(Error::CarrierMismatch(format!(
                "{}: `{}` vs `{}`",
                what, self.0.id, other.0.id
            )))
        }
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element> {
        self.expect_same(&a.carrier, "add lhs")?;
        self.expect_same(&b.carrier, "add rhs")?;
        Ok(Element {
            carrier: self.clone(),
            value: self.add_value(&a.value, &b.value),
        })
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Result<Element> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    pub fn neg(&self, a: &Element) -> Result<Element> {
        self.expect_same(&a.carrier, "neg")?;
        Ok(Element {
            carrier: self.clone(),
            value: self.neg_value(&a.value),
        })
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element> {
        self.expect_same(&a.carrier, "mul lhs")?;
        self.expect_same(&b.carrier, "mul rhs")?;
        Ok(Element {
            carrier: self.clone(),
            value: self.mul_value(&a.value, &b.value)?,
        })
    }

    /// Right module action `m * r`.
    pub fn act_right(&self, m: &Element, r: &Element) -> Result<Element> {
        self.expect_same(&m.carrier, "module element")?;
        let over = self
            .0
            .over
            .as_ref()
            .ok_or_else(|| Error::CarrierMismatch(format!("`{}` is not a module", self.0.id)))?;
        over.expect_same(&r.carrier, "acting ring element")?;
        Ok(Element {
            carrier: self.clone(),
            value: self.act_right_value(&m.value, &r.value)?,
        })
    }

    /// Left bimodule action `s * m`.
    pub fn act_left(&self, s: &Element, m: &Element) -> Result<Element> {
        self.expect_same(&m.carrier, "module element")?;
        let over = self
            .0
            .over
            .as_ref()
            .ok_or_else(|| Error::CarrierMismatch(format!("`{}` is not a module", self.0.id)))?;
        over.expect_same(&s.carrier, "acting ring element")?;
        if self.0.kind != CarrierKind::Bimodule {
            return Err(Error::CarrierMismatch(format!(
                "`{}` is not a bimodule; no left action",
                self.0.id
            )));
        }
        Ok(Element {
            carrier: self.clone(),
            value: self.act_left_value(&s.value, &m.value)?,
        })
    }

    /// Integer scaling `k * m` (the ambient abelian-group structure).
    pub fn scale_i64(&self, a: &Element, k: i64) -> Result<Element> {
        self.expect_same(&a.carrier, "scale")?;
        Ok(Element {
            carrier: self.clone(),
            value: self.scale_value(&a.value, k),
        })
    }

    pub fn add_value(&self, a: &Value, b: &Value) -> Value {
        match &self.0.construction {
            Construction::Modular(n) => {
                let d = ScalarDomain::Modular(*n);
                match (a, b) {
                    (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(d.add(x, y)),
                    _ => unreachable!("checked members"),
                }
            }
            Construction::Polynomial(base) => match (a, b) {
                (Value::Poly(x), Value::Poly(y)) => Value::Poly(poly_add(base, x, y)),
                _ => unreachable!(),
            },
            Construction::Matrix { base, .. } | Construction::Triangular { base, .. } => {
                match (a, b) {
                    (
                        Value::Matrix { size, entries: xa },
                        Value::Matrix { entries: xb, .. },
                    ) => Value::Matrix {
                        size: *size,
                        entries: xa.iter().zip(xb).map(|(p, q)| base.add(p, q)).collect(),
                    },
                    _ => unreachable!(),
                }
            }
            Construction::Product(cs) => match (a, b) {
                (Value::Tuple(xs), Value::Tuple(ys)) => Value::Tuple(
                    cs.iter()
                        .zip(xs.iter().zip(ys))
                        .map(|(c, (x, y))| c.add_value(x, y))
                        .collect(),
                ),
                _ => unreachable!(),
            },
            Construction::QuotientRing { parent, .. }
            | Construction::QuotientModule { parent, .. } => self.reduce(parent.add_value(a, b)),
            Construction::Span { parent, .. } => parent.add_value(a, b),
        }
    }

    pub fn neg_value(&self, a: &Value) -> Value {
        match &self.0.construction {
            Construction::Modular(n) => match a {
                Value::Scalar(x) => Value::Scalar(ScalarDomain::Modular(*n).neg(x)),
                _ => unreachable!(),
            },
            Construction::Polynomial(base) => match a {
                Value::Poly(x) => Value::Poly(x.iter().map(|c| base.neg(c)).collect()),
                _ => unreachable!(),
            },
            Construction::Matrix { base, .. } | Construction::Triangular { base, .. } => match a {
                Value::Matrix { size, entries } => Value::Matrix {
                    size: *size,
                    entries: entries.iter().map(|c| base.neg(c)).collect(),
                },
                _ => unreachable!(),
            },
            Construction::Product(cs) => match a {
                Value::Tuple(xs) => Value::Tuple(
                    cs.iter()
                        .zip(xs)
                        .map(|(c, x)| c.neg_value(x))
                        .collect(),
                ),
                _ => unreachable!(),
            },
            Construction::QuotientRing { parent, .. }
            | Construction::QuotientModule { parent, .. } => self.reduce(parent.neg_value(a)),
            Construction::Span { parent, .. } => parent.neg_value(a),
        }
    }

    pub fn mul_value(&self, a: &Value, b: &Value) -> Result<Value> {
        match &self.0.construction {
            Construction::Modular(n) => match (a, b) {
                (Value::Scalar(x), Value::Scalar(y)) => {
                    Ok(Value::Scalar(ScalarDomain::Modular(*n).mul(x, y)))
                }
                _ => unreachable!(),
            },
            Construction::Polynomial(base) => match (a, b) {
                (Value::Poly(x), Value::Poly(y)) => Ok(Value::Poly(poly_mul(base, x, y))),
                _ => unreachable!(),
            },
            Construction::Matrix { size, base } | Construction::Triangular { size, base } => {
                match (a, b) {
                    (Value::Matrix { entries: xa, .. }, Value::Matrix { entries: xb, .. }) => {
                        Ok(Value::Matrix {
                            size: *size,
                            entries: matrix_mul(base, *size, xa, xb),
                        })
                    }
                    _ => unreachable!(),
                }
            }
            Construction::Product(cs) => match (a, b) {
                (Value::Tuple(xs), Value::Tuple(ys)) => {
                    let mut out = Vec::with_capacity(cs.len());
                    for (c, (x, y)) in cs.iter().zip(xs.iter().zip(ys)) {
                        out.push(c.mul_value(x, y)?);
                    }
                    Ok(Value::Tuple(out))
                }
                _ => unreachable!(),
            },
            Construction::QuotientRing { parent, .. }
            | Construction::QuotientModule { parent, .. } => {
                Ok(self.reduce(parent.mul_value(a, b)?))
            }
            Construction::Span { parent, .. } => parent.mul_value(a, b),
        }
    }

    pub(crate) fn act_right_value(&self, m: &Value, r: &Value) -> Result<Value> {
        match &self.0.construction {
            Construction::Product(cs) => match m {
                Value::Tuple(xs) => {
                    let mut out = Vec::with_capacity(cs.len());
                    for (c, x) in cs.iter().zip(xs) {
                        out.push(c.mul_value(x, r)?);
                    }
                    Ok(Value::Tuple(out))
                }
                _ => unreachable!(),
            },
            Construction::QuotientModule { parent, .. } => {
                Ok(self.reduce(parent.act_right_value(m, r)?))
            }
            Construction::Span { parent, .. } => {
                let v = parent.act_right_value(m, r)?;
                if let Construction::Span { elements, .. } = &self.0.construction {
                    if !elements.contains(&v) {
                        return Err(Error::ClosureFailure(format!(
                            "span `{}` not closed under the action",
                            self.0.id
                        )));
                    }
                }
                Ok(v)
            }
            // A ring-shaped module over (a quotient of) itself: act by internal
            // multiplication of the underlying construction.
            _ => self.mul_value(m, r),
        }
    }

    pub(crate) fn act_left_value(&self, s: &Value, m: &Value) -> Result<Value> {
        match &self.0.construction {
            Construction::QuotientModule { parent, .. } => {
                Ok(self.reduce(parent.act_left_value(s, m)?))
            }
            Construction::Span { parent, .. } => parent.act_left_value(s, m),
            Construction::Product(_) => Err(Error::CarrierMismatch(
                "product modules carry no left action".into(),
            )),
            _ => self.mul_value(s, m),
        }
    }

    pub fn scale_value(&self, a: &Value, k: i64) -> Value {
        match &self.0.construction {
            Construction::Modular(n) => match a {
                Value::Scalar(x) => Value::Scalar(ScalarDomain::Modular(*n).scale_i64(x, k)),
                _ => unreachable!(),
            },
            Construction::Polynomial(base) => match a {
                Value::Poly(x) => Value::Poly(poly_canon(
                    x.iter().map(|c| base.scale_i64(c, k)).collect(),
                )),
                _ => unreachable!(),
            },
            Construction::Matrix { base, .. } | Construction::Triangular { base, .. } => match a {
                Value::Matrix { size, entries } => Value::Matrix {
                    size: *size,
                    entries: entries.iter().map(|c| base.scale_i64(c, k)).collect(),
                },
                _ => unreachable!(),
            },
            Construction::Product(cs) => match a {
                Value::Tuple(xs) => Value::Tuple(
                    cs.iter()
                        .zip(xs)
                        .map(|(c, x)| c.scale_value(x, k))
                        .collect(),
                ),
                _ => unreachable!(),
            },
            Construction::QuotientRing { parent, .. }
            | Construction::QuotientModule { parent, .. } => self.reduce(parent.scale_value(a, k)),
            Construction::Span { parent, .. } => parent.scale_value(a, k),
        }
    }

    /// Entrywise/coefficientwise scalar action for algebra carriers.
    pub fn scale_scalar(&self, a: &Element, s: &Scalar) -> Result<Element> {
        self.expect_same(&a.carrier, "scale")?;
        let value = self.scale_scalar_value(&a.value, s)?;
        Ok(Element {
            carrier: self.clone(),
            value,
        })
    }

    fn scale_scalar_value(&self, a: &Value, s: &Scalar) -> Result<Value> {
        match &self.0.construction {
            Construction::Matrix { size, base } | Construction::Triangular { size, base } => {
                match a {
                    Value::Matrix { entries, .. } => Ok(Value::Matrix {
                        size: *size,
                        entries: entries.iter().map(|c| base.mul(c, s)).collect(),
                    }),
                    _ => unreachable!(),
                }
            }
            Construction::Polynomial(base) => match a {
                Value::Poly(cs) => Ok(Value::Poly(poly_canon(
                    cs.iter().map(|c| base.mul(c, s)).collect(),
                ))),
                _ => unreachable!(),
            },
            _ => Err(Error::UnsupportedCarrier(format!(
                "scalar action on `{}`",
                self.0.id
            ))),
        }
    }

    // ---------------------------------------------------------- enumeration

    /// All elements of a finite carrier, in deterministic lexicographic
    /// order on the canonical payload. The zero element always comes first.
    pub fn elements(&self) -> Result<&[Value]> {
        self.tables()?;
        Ok(&self.0.tables.get().unwrap().elems)
    }

    pub(crate) fn tables(&self) -> Result<Arc<FiniteTables>> {
        if let Some(t) = self.0.tables.get() {
            return Ok(t.clone());
        }
        let n = match self.0.cardinality {
            Cardinality::Finite(n) => n,
            Cardinality::Infinite => return Err(Error::InfiniteCarrier(self.0.id.clone())),
        };
        if n > TABLE_ELEMENT_CAP {
            return Err(Error::MalformedDescriptor(format!(
                "carrier `{}` has {} elements; exhaustive tables are capped at {}",
                self.0.id, n, TABLE_ELEMENT_CAP
            )));
        }
        let elems = enumerate_values(self)?;
        let t = Arc::new(FiniteTables::build(self, elems)?);
        let _ = self.0.tables.set(t.clone());
        Ok(self.0.tables.get().unwrap().clone())
    }

    pub fn index_of(&self, v: &Value) -> Result<u32> {
        let t = self.tables()?;
        t.index
            .get(v)
            .copied()
            .ok_or_else(|| Error::MalformedDescriptor(format!("value {} not in `{}`", v, self.0.id)))
    }

    pub fn value_at(&self, idx: u32) -> Result<Value> {
        let t = self.tables()?;
        Ok(t.elems[idx as usize].clone())
    }

    /// Right-action table `m * r` indexed `m_idx * |R| + r_idx`.
    pub(crate) fn right_action_table(&self) -> Result<Arc<Vec<u32>>> {
        if let Some(t) = self.0.right_action.get() {
            return Ok(t.clone());
        }
        let over = self
            .0
            .over
            .as_ref()
            .ok_or_else(|| Error::CarrierMismatch(format!("`{}` is not a module", self.0.id)))?;
        let mt = self.tables()?;
        let rt = over.tables()?;
        let mut table = vec![0u32; mt.elems.len() * rt.elems.len()];
        for (i, m) in mt.elems.iter().enumerate() {
            for (j, r) in rt.elems.iter().enumerate() {
                let v = self.act_right_value(m, r)?;
                table[i * rt.elems.len() + j] = mt.index[&v];
            }
        }
        let _ = self.0.right_action.set(Arc::new(table));
        Ok(self.0.right_action.get().unwrap().clone())
    }

    pub(crate) fn left_action_table(&self) -> Result<Arc<Vec<u32>>> {
        if let Some(t) = self.0.left_action.get() {
            return Ok(t.clone());
        }
        let over = self
            .0
            .over
            .as_ref()
            .ok_or_else(|| Error::CarrierMismatch(format!("`{}` is not a module", self.0.id)))?;
        let mt = self.tables()?;
        let rt = over.tables()?;
        let mut table = vec![0u32; mt.elems.len() * rt.elems.len()];
        for (j, s) in rt.elems.iter().enumerate() {
            for (i, m) in mt.elems.iter().enumerate() {
                let v = self.act_left_value(s, m)?;
                table[j * mt.elems.len() + i] = mt.index[&v];
            }
        }
        let _ = self.0.left_action.set(Arc::new(table));
        Ok(self.0.left_action.get().unwrap().clone())
    }

    // --------------------------------------------------------------- parse

    /// Parse a JSON value expression in this carrier's element language.
    pub fn value_from_json(&self, v: &serde_json::Value) -> Result<Value> {
        let parsed = self.value_from_json_inner(v)?;
        self.check_member(&parsed)?;
        Ok(parsed)
    }

    fn value_from_json_inner(&self, v: &serde_json::Value) -> Result<Value> {
        let bad = |msg: &str| Error::ParseError(format!("{} for `{}`: {}", msg, self.0.id, v));
        match &self.0.construction {
            Construction::Modular(n) => {
                let s = Scalar::from_json(&ScalarDomain::Modular(*n), v)?;
                Ok(Value::Scalar(s))
            }
            Construction::Polynomial(base) => {
                let arr = v.as_array().ok_or_else(|| bad("expected coefficient array"))?;
                let mut cs = Vec::with_capacity(arr.len());
                for c in arr {
                    cs.push(Scalar::from_json(base, c)?);
                }
                Ok(Value::Poly(poly_canon(cs)))
            }
            Construction::Matrix { size, base } | Construction::Triangular { size, base } => {
                let rows = v.as_array().ok_or_else(|| bad("expected row array"))?;
                if rows.len() != *size {
                    return Err(bad("row count mismatch"));
                }
                let mut entries = Vec::with_capacity(size * size);
                for row in rows {
                    let row = row.as_array().ok_or_else(|| bad("expected row array"))?;
                    if row.len() != *size {
                        return Err(bad("column count mismatch"));
                    }
                    for e in row {
                        entries.push(Scalar::from_json(base, e)?);
                    }
                }
                Ok(Value::Matrix { size: *size, entries })
            }
            Construction::Product(cs) => {
                let arr = v.as_array().ok_or_else(|| bad("expected component array"))?;
                if arr.len() != cs.len() {
                    return Err(bad("component count mismatch"));
                }
                let mut vs = Vec::with_capacity(cs.len());
                for (c, x) in cs.iter().zip(arr) {
                    vs.push(c.value_from_json_inner(x)?);
                }
                Ok(Value::Tuple(vs))
            }
            Construction::QuotientRing { parent, .. }
            | Construction::QuotientModule { parent, .. } => {
                Ok(self.reduce(parent.value_from_json_inner(v)?))
            }
            Construction::Span { parent, .. } => parent.value_from_json_inner(v),
        }
    }

    pub fn element_from_json(&self, v: &serde_json::Value) -> Result<Element> {
        Element::new(self, self.value_from_json(v)?)
    }
}

fn constructions_equal(a: &Construction, b: &Construction) -> bool {
    match (a, b) {
        (Construction::Modular(x), Construction::Modular(y)) => x == y,
        (Construction::Polynomial(x), Construction::Polynomial(y)) => x == y,
        (
            Construction::Matrix { size: sa, base: ba },
            Construction::Matrix { size: sb, base: bb },
        ) => sa == sb && ba == bb,
        (
            Construction::Triangular { size: sa, base: ba },
            Construction::Triangular { size: sb, base: bb },
        ) => sa == sb && ba == bb,
        (Construction::Product(xs), Construction::Product(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| x.same_structure(y))
        }
        (
            Construction::QuotientRing { parent: pa, ideal: ia },
            Construction::QuotientRing { parent: pb, ideal: ib },
        ) => pa.same_structure(pb) && ia.same_members(ib),
        (
            Construction::QuotientModule { parent: pa, submodule: sa },
            Construction::QuotientModule { parent: pb, submodule: sb },
        ) => pa.same_structure(pb) && sa.same_members(sb),
        (
            Construction::Span { parent: pa, elements: ea },
            Construction::Span { parent: pb, elements: eb },
        ) => pa.same_structure(pb) && ea == eb,
        _ => false,
    }
}

fn construction_cardinality(c: &Construction) -> Cardinality {
    match c {
        Construction::Modular(n) => Cardinality::Finite(*n),
        Construction::Polynomial(_) => Cardinality::Infinite,
        Construction::Matrix { size, base } => match base {
            ScalarDomain::Modular(n) => finite_pow(*n, (size * size) as u32),
            _ => Cardinality::Infinite,
        },
        Construction::Triangular { size, base } => match base {
            ScalarDomain::Modular(n) => finite_pow(*n, (size * (size + 1) / 2) as u32),
            _ => Cardinality::Infinite,
        },
        Construction::Product(cs) => {
            let mut total: u64 = 1;
            for c in cs {
                match c.cardinality() {
                    Cardinality::Finite(n) => match total.checked_mul(n) {
                        Some(t) => total = t,
                        None => return Cardinality::Infinite,
                    },
                    Cardinality::Infinite => return Cardinality::Infinite,
                }
            }
            Cardinality::Finite(total)
        }
        // Overwritten with the exact coset count by the quotient builders.
        Construction::QuotientRing { .. } | Construction::QuotientModule { .. } => {
            Cardinality::Infinite
        }
        Construction::Span { elements, .. } => Cardinality::Finite(elements.len() as u64),
    }
}

fn finite_pow(n: u64, e: u32) -> Cardinality {
    match n.checked_pow(e) {
        Some(v) => Cardinality::Finite(v),
        None => Cardinality::Infinite,
    }
}

fn quotient_info(parent: &Carrier, subgroup: &[Value]) -> Result<QuotientInfo> {
    let elems = parent.elements()?;
    let total = elems.len();
    if subgroup.is_empty() {
        return Err(Error::ClosureFailure("empty subgroup".into()));
    }
    let mut rep_of: HashMap<Value, Value> = HashMap::with_capacity(total);
    let mut reps = Vec::new();
    for e in elems {
        if rep_of.contains_key(e) {
            continue;
        }
        // First unvisited element in enumeration order is the least of its coset.
        reps.push(e.clone());
        let elem = Element {
            carrier: parent.clone(),
            value: e.clone(),
        };
        for s in subgroup {
            let member = parent.add(
                &elem,
                &Element {
                    carrier: parent.clone(),
                    value: s.clone(),
                },
            )?;
            if let Some(prev) = rep_of.insert(member.value, e.clone()) {
                if &prev != e {
                    return Err(Error::ClosureFailure(
                        "subgroup is not closed under addition".into(),
                    ));
                }
            }
        }
    }
    if reps.len() * subgroup.len() != total {
        return Err(Error::ClosureFailure(format!(
            "cosets do not partition the parent: {} reps * {} members != {}",
            reps.len(),
            subgroup.len(),
            total
        )));
    }
    Ok(QuotientInfo { rep_of, reps })
}

fn enumerate_values(carrier: &Carrier) -> Result<Vec<Value>> {
    match &carrier.0.construction {
        Construction::Modular(n) => Ok((0..*n).map(|x| Value::Scalar(Scalar::Mod(x))).collect()),
        Construction::Matrix { size, base } => {
            let n = modulus_of(base, carrier)?;
            Ok(enumerate_grids(*size, *size * *size, n, None))
        }
        Construction::Triangular { size, base } => {
            let n = modulus_of(base, carrier)?;
            let free: Vec<usize> = (0..*size)
                .flat_map(|i| (i..*size).map(move |j| i * *size + j))
                .collect();
            Ok(enumerate_grids(*size, *size * *size, n, Some(&free)))
        }
        Construction::Product(cs) => {
            let mut parts: Vec<&[Value]> = Vec::new();
            for c in cs {
                parts.push(c.elements()?);
            }
            let mut out = Vec::new();
            let mut idx = vec![0usize; parts.len()];
            loop {
                out.push(Value::Tuple(
                    parts.iter().zip(&idx).map(|(p, i)| p[*i].clone()).collect(),
                ));
                // Increment with the FIRST component most significant.
                let mut pos = parts.len();
                loop {
                    if pos == 0 {
                        return Ok(out);
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < parts[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                }
            }
        }
        Construction::QuotientRing { .. } | Construction::QuotientModule { .. } => Ok(carrier
            .0
            .quotient
            .as_ref()
            .expect("quotient info present")
            .reps
            .clone()),
        Construction::Span { elements, .. } => Ok(elements.as_ref().clone()),
        Construction::Polynomial(_) => Err(Error::InfiniteCarrier(carrier.0.id.clone())),
    }
}

fn modulus_of(base: &ScalarDomain, carrier: &Carrier) -> Result<u64> {
    match base {
        ScalarDomain::Modular(n) => Ok(*n),
        _ => Err(Error::InfiniteCarrier(carrier.0.id.clone())),
    }
}

/// Row-major grids in lexicographic order; `free` restricts which positions
/// vary (others stay zero).
fn enumerate_grids(size: usize, len: usize, n: u64, free: Option<&[usize]>) -> Vec<Value> {
    let positions: Vec<usize> = match free {
        Some(f) => f.to_vec(),
        None => (0..len).collect(),
    };
    let mut out = Vec::new();
    let mut digits = vec![0u64; positions.len()];
    loop {
        let mut entries = vec![Scalar::Mod(0); len];
        for (d, p) in digits.iter().zip(&positions) {
            entries[*p] = Scalar::Mod(*d);
        }
        out.push(Value::Matrix { size, entries });
        let mut pos = positions.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < n {
                break;
            }
            digits[pos] = 0;
        }
    }
}

// ------------------------------------------------------------ poly helpers

pub(crate) fn poly_canon(mut cs: Vec<Scalar>) -> Vec<Scalar> {
    while cs.last().map_or(false, |c| c.is_zero()) {
        cs.pop();
    }
    cs
}

pub(crate) fn poly_add(base: &ScalarDomain, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(|| base.zero());
        let y = b.get(i).cloned().unwrap_or_else(|| base.zero());
        out.push(base.add(&x, &y));
    }
    poly_canon(out)
}

pub(crate) fn poly_mul(base: &ScalarDomain, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![base.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let prod = base.mul(x, y);
            out[i + j] = base.add(&out[i + j], &prod);
        }
    }
    poly_canon(out)
}

fn matrix_mul(base: &ScalarDomain, size: usize, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![base.zero(); size * size];
    for i in 0..size {
        for k in 0..size {
            let aik = &a[i * size + k];
            if aik.is_zero() {
                continue;
            }
            for j in 0..size {
                let prod = base.mul(aik, &b[k * size + j]);
                out[i * size + j] = base.add(&out[i * size + j], &prod);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z6() -> Carrier {
        Carrier::modular_ring("Z6", 6).unwrap()
    }

    #[test]
    fn modular_carrier_has_expected_cardinality() {
        assert_eq!(z6().cardinality(), Cardinality::Finite(6));
        let m2z3 = Carrier::matrix_algebra("M2Z3", 2, ScalarDomain::Modular(3)).unwrap();
        assert_eq!(m2z3.cardinality(), Cardinality::Finite(81));
    }

    #[test]
    fn enumeration_is_deterministic_and_zero_first() {
        let r = Carrier::modular_ring("Z3", 3).unwrap();
        let elems = r.elements().unwrap();
        assert_eq!(
            elems,
            &[
                Value::Scalar(Scalar::Mod(0)),
                Value::Scalar(Scalar::Mod(1)),
                Value::Scalar(Scalar::Mod(2))
            ]
        );

        let m2z3 = Carrier::matrix_algebra("M2Z3", 2, ScalarDomain::Modular(3)).unwrap();
        let elems = m2z3.elements().unwrap();
        assert_eq!(elems.len(), 81);
        assert_eq!(elems[0], m2z3.zero_value());

        let p = Carrier::modular_ring("Z2", 2).unwrap();
        let prod = Carrier::product_module("Z2xZ2", vec![p.clone(), p.clone()], p).unwrap();
        assert_eq!(prod.elements().unwrap().len(), 4);
    }

    #[test]
    fn polynomial_schoolbook_product() {
        // (x^2 + 1)(x - 1) = x^3 - x^2 + x - 1
        let zx = Carrier::polynomial_ring("Zx", ScalarDomain::Integers).unwrap();
        let d = ScalarDomain::Integers;
        let a = zx
            .element(Value::Poly(vec![d.from_i64(1), d.from_i64(0), d.from_i64(1)]))
            .unwrap();
        let b = zx
            .element(Value::Poly(vec![d.from_i64(-1), d.from_i64(1)]))
            .unwrap();
        let p = zx.mul(&a, &b).unwrap();
        assert_eq!(
            p.value,
            Value::Poly(vec![
                d.from_i64(-1),
                d.from_i64(1),
                d.from_i64(-1),
                d.from_i64(1)
            ])
        );
    }

    #[test]
    fn identity_law_in_matrix_algebra() {
        let m2q = Carrier::matrix_algebra("M2Q", 2, ScalarDomain::Rationals).unwrap();
        let a = m2q
            .element_from_json(&serde_json::json!([[1, 2], [3, [4, 5]]]))
            .unwrap();
        let one = m2q.one().unwrap();
        assert_eq!(m2q.mul(&a, &one).unwrap(), a);
    }

    #[test]
    fn componentwise_module_action() {
        // [x; x^2] * x = [x^2; x^3] in Z[x] x Z[x] over Z[x]
        let zx = Carrier::polynomial_ring("Zx", ScalarDomain::Integers).unwrap();
        let m = Carrier::product_module("M", vec![zx.clone(), zx.clone()], zx.clone()).unwrap();
        let mx = m
            .element_from_json(&serde_json::json!([[0, 1], [0, 0, 1]]))
            .unwrap();
        let x = zx.element_from_json(&serde_json::json!([0, 1])).unwrap();
        let out = m.act_right(&mx, &x).unwrap();
        assert_eq!(
            out,
            m.element_from_json(&serde_json::json!([[0, 0, 1], [0, 0, 0, 1]]))
                .unwrap()
        );
    }

    #[test]
    fn canonicalization_is_idempotent() {
        let qx = Carrier::polynomial_ring("Qx", ScalarDomain::Rationals).unwrap();
        let v = qx
            .value_from_json(&serde_json::json!([[1, 2], 0, 3, 0, 0]))
            .unwrap();
        assert_eq!(v, Value::Poly(poly_canon(match v.clone() {
            Value::Poly(cs) => cs,
            _ => unreachable!(),
        })));
    }

    #[test]
    fn triangular_carrier_rejects_lower_entries() {
        let t2 = Carrier::triangular_algebra("T2Z3", 2, ScalarDomain::Modular(3)).unwrap();
        assert_eq!(t2.cardinality(), Cardinality::Finite(27));
        assert!(t2
            .element_from_json(&serde_json::json!([[1, 0], [1, 1]]))
            .is_err());
        let ok = t2.element_from_json(&serde_json::json!([[1, 2], [0, 1]]));
        assert!(ok.is_ok());
    }
}
