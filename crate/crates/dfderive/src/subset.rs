//! Submodules and ideals: explicit element sets on finite carriers,
//! predicate form on symbolic carriers.

use std::collections::BTreeSet;

use crate::carrier::{Carrier, DeclaredFact, Element};
use crate::error::{Error, Result};
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sidedness {
    Left,
    Right,
    TwoSided,
}

/// Component-vanishing predicates for symbolic carriers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Predicate {
    /// The zero subset.
    ZeroOnly,
    /// Tuple values whose listed components are zero.
    ComponentsZero(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubsetForm {
    Elements(Vec<Value>),
    Predicate(Predicate),
}

#[derive(Clone, Debug)]
pub struct Submodule {
    parent: Carrier,
    form: SubsetForm,
    pub declared_facts: Vec<DeclaredFact>,
}

#[derive(Clone, Debug)]
pub struct Ideal {
    parent: Carrier,
    form: SubsetForm,
    sidedness: Sidedness,
}

fn sorted(set: BTreeSet<Value>) -> Vec<Value> {
    set.into_iter().collect()
}

/// Additive closure of `seed` together with closure under `absorb`, which
/// maps a member and a ring element to a new member.
fn close_under(
    parent: &Carrier,
    ring: &Carrier,
    seed: Vec<Value>,
    absorb: impl Fn(&Value, &Value) -> Result<Vec<Value>>,
) -> Result<Vec<Value>> {
    let ring_elems = ring.elements()?.to_vec();
    let mut set: BTreeSet<Value> = BTreeSet::new();
    set.insert(parent.zero_value());
    let mut work: Vec<Value> = seed;
    while let Some(v) = work.pop() {
        if set.contains(&v) {
            continue;
        }
        set.insert(v.clone());
        let snapshot: Vec<Value> = set.iter().cloned().collect();
        for s in &snapshot {
            let sum = parent.add_value(&v, s);
            if !set.contains(&sum) {
                work.push(sum);
            }
        }
        for r in &ring_elems {
            for out in absorb(&v, r)? {
                if !set.contains(&out) {
                    work.push(out);
                }
            }
        }
    }
    Ok(sorted(set))
}

impl Submodule {
    pub fn zero(parent: &Carrier) -> Submodule {
        Submodule {
            parent: parent.clone(),
            form: SubsetForm::Elements(vec![parent.zero_value()]),
            declared_facts: Vec::new(),
        }
    }

    /// Closure of the generators under addition and the right action
    /// (and the left action too, on bimodules). Finite carriers only.
    pub fn from_generators(parent: &Carrier, generators: &[Element]) -> Result<Submodule> {
        let ring = parent
            .over()
            .cloned()
            .ok_or_else(|| Error::MalformedDescriptor(format!("`{}` is not a module", parent.id())))?;
        for g in generators {
            if !g.carrier.same_structure(parent) {
                return Err(Error::CarrierMismatch("generator outside the module".into()));
            }
        }
        let bimodule = matches!(parent.kind(), crate::carrier::CarrierKind::Bimodule);
        let seed = generators.iter().map(|g| g.value.clone()).collect();
        let p = parent.clone();
        let elements = close_under(parent, &ring, seed, move |v, r| {
            let mut out = vec![p.act_right_value(v, r)?];
            if bimodule {
                out.push(p.act_left_value(r, v)?);
            }
            Ok(out)
        })?;
        Ok(Submodule {
            parent: parent.clone(),
            form: SubsetForm::Elements(elements),
            declared_facts: Vec::new(),
        })
    }

    pub fn from_elements(parent: &Carrier, elements: Vec<Value>) -> Result<Submodule> {
        let mut set = BTreeSet::new();
        for v in elements {
            parent.check_member(&v)?;
            set.insert(v);
        }
        set.insert(parent.zero_value());
        let sub = Submodule {
            parent: parent.clone(),
            form: SubsetForm::Elements(sorted(set)),
            declared_facts: Vec::new(),
        };
        sub.validate_closure()?;
        Ok(sub)
    }

    pub fn predicate(parent: &Carrier, predicate: Predicate) -> Submodule {
        Submodule {
            parent: parent.clone(),
            form: SubsetForm::Predicate(predicate),
            declared_facts: Vec::new(),
        }
    }

    pub fn with_declared_facts(mut self, facts: Vec<DeclaredFact>) -> Submodule {
        self.declared_facts = facts;
        self
    }

    pub fn parent(&self) -> &Carrier {
        &self.parent
    }

    pub fn form(&self) -> &SubsetForm {
        &self.form
    }

    pub fn contains(&self, v: &Value) -> Result<bool> {
        contains(&self.parent, &self.form, v)
    }

    pub fn finite_elements(&self) -> Result<&[Value]> {
        match &self.form {
            SubsetForm::Elements(e) => Ok(e),
            SubsetForm::Predicate(_) => Err(Error::InfiniteCarrier(format!(
                "predicate-form submodule of `{}`",
                self.parent.id()
            ))),
        }
    }

    pub fn same_members(&self, other: &Submodule) -> bool {
        self.form == other.form
    }

    pub fn is_zero_only(&self) -> Result<bool> {
        match &self.form {
            SubsetForm::Elements(e) => Ok(e.len() == 1),
            SubsetForm::Predicate(p) => Ok(*p == Predicate::ZeroOnly),
        }
    }

    /// Whether the subset is the whole module (finite form only).
    pub fn is_whole(&self) -> Result<bool> {
        match &self.form {
            SubsetForm::Elements(e) => {
                Ok(e.len() as u64 == self.parent.cardinality().finite().unwrap_or(u64::MAX))
            }
            SubsetForm::Predicate(_) => Ok(false),
        }
    }

    /// Exhaustive closure validation on finite carriers.
    pub fn validate_closure(&self) -> Result<()> {
        let elems = match &self.form {
            SubsetForm::Elements(e) => e,
            SubsetForm::Predicate(_) => return Ok(()),
        };
        let ring = self
            .parent
            .over()
            .cloned()
            .ok_or_else(|| Error::MalformedDescriptor(format!("`{}` is not a module", self.parent.id())))?;
        let member = |v: &Value| elems.binary_search(v).is_ok();
        for a in elems {
            for b in elems {
                let s = self.parent.add_value(a, b);
                if !member(&s) {
                    return Err(Error::ClosureFailure(format!(
                        "{} + {} leaves the submodule",
                        a, b
                    )));
                }
            }
            for r in ring.elements()? {
                let p = self.parent.act_right_value(a, r)?;
                if !member(&p) {
                    return Err(Error::ClosureFailure(format!(
                        "{} * {} leaves the submodule",
                        a, r
                    )));
                }
                if matches!(self.parent.kind(), crate::carrier::CarrierKind::Bimodule) {
                    let p = self.parent.act_left_value(r, a)?;
                    if !member(&p) {
                        return Err(Error::ClosureFailure(format!(
                            "{} * {} leaves the bisubmodule",
                            r, a
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Project a parent element into the subset (predicate form): used to
    /// turn probe elements into subset members for spot validation.
    pub fn project(&self, v: &Value) -> Result<Value> {
        match &self.form {
            SubsetForm::Elements(_) => Err(Error::UnsupportedCarrier(
                "projection is only defined for predicate-form subsets".into(),
            )),
            SubsetForm::Predicate(Predicate::ZeroOnly) => Ok(self.parent.zero_value()),
            SubsetForm::Predicate(Predicate::ComponentsZero(idxs)) => match v {
                Value::Tuple(vs) => {
                    let comps = match self.parent.construction() {
                        crate::carrier::Construction::Product(cs) => cs,
                        _ => {
                            return Err(Error::UnsupportedCarrier(
                                "component predicate on a non-product carrier".into(),
                            ))
                        }
                    };
                    let mut out = vs.clone();
                    for i in idxs {
                        out[*i] = comps[*i].zero_value();
                    }
                    Ok(Value::Tuple(out))
                }
                _ => Err(Error::UnsupportedCarrier("component predicate".into())),
            },
        }
    }

    /// Spot validation of closure on a probe set (predicate form).
    pub fn spot_validate(&self, probe: &[Element]) -> Result<()> {
        if matches!(self.form, SubsetForm::Elements(_)) {
            return self.validate_closure();
        }
        let ring = self
            .parent
            .over()
            .cloned()
            .ok_or_else(|| Error::MalformedDescriptor("not a module".into()))?;
        let members: Vec<Value> = probe
            .iter()
            .map(|e| self.project(&e.value))
            .collect::<Result<_>>()?;
        let one = ring.one_value()?;
        for a in &members {
            for b in &members {
                let s = self.parent.add_value(a, b);
                if !self.contains(&s)? {
                    return Err(Error::ClosureFailure("probe add escapes".into()));
                }
            }
            let p = self.parent.act_right_value(a, &one)?;
            if !self.contains(&p)? {
                return Err(Error::ClosureFailure("probe action escapes".into()));
            }
        }
        Ok(())
    }
}

impl Ideal {
    pub fn zero(parent: &Carrier) -> Ideal {
        Ideal {
            parent: parent.clone(),
            form: SubsetForm::Elements(vec![parent.zero_value()]),
            sidedness: Sidedness::TwoSided,
        }
    }

    pub fn whole(parent: &Carrier) -> Result<Ideal> {
        Ok(Ideal {
            parent: parent.clone(),
            form: SubsetForm::Elements(parent.elements()?.to_vec()),
            sidedness: Sidedness::TwoSided,
        })
    }

    pub fn from_generators(
        parent: &Carrier,
        generators: &[Element],
        sidedness: Sidedness,
    ) -> Result<Ideal> {
        for g in generators {
            if !g.carrier.same_structure(parent) {
                return Err(Error::CarrierMismatch("generator outside the ring".into()));
            }
        }
        let seed = generators.iter().map(|g| g.value.clone()).collect();
        let p = parent.clone();
        let elements = close_under(parent, parent, seed, move |v, r| {
            let mut out = Vec::new();
            if matches!(sidedness, Sidedness::Right | Sidedness::TwoSided) {
                out.push(p.mul_value(v, r)?);
            }
            if matches!(sidedness, Sidedness::Left | Sidedness::TwoSided) {
                out.push(p.mul_value(r, v)?);
            }
            Ok(out)
        })?;
        Ok(Ideal {
            parent: parent.clone(),
            form: SubsetForm::Elements(elements),
            sidedness,
        })
    }

    pub fn from_elements(parent: &Carrier, elements: Vec<Value>, sidedness: Sidedness) -> Result<Ideal> {
        let mut set = BTreeSet::new();
        for v in elements {
            parent.check_member(&v)?;
            set.insert(v);
        }
        set.insert(parent.zero_value());
        let ideal = Ideal {
            parent: parent.clone(),
            form: SubsetForm::Elements(sorted(set)),
            sidedness,
        };
        ideal.validate_closure()?;
        Ok(ideal)
    }

    pub fn predicate(parent: &Carrier, predicate: Predicate) -> Ideal {
        Ideal {
            parent: parent.clone(),
            form: SubsetForm::Predicate(predicate),
            sidedness: Sidedness::TwoSided,
        }
    }

    pub fn parent(&self) -> &Carrier {
        &self.parent
    }

    pub fn form(&self) -> &SubsetForm {
        &self.form
    }

    pub fn sidedness(&self) -> Sidedness {
        self.sidedness
    }

    pub fn is_two_sided(&self) -> bool {
        self.sidedness == Sidedness::TwoSided
    }

    pub fn contains(&self, v: &Value) -> Result<bool> {
        contains(&self.parent, &self.form, v)
    }

    pub fn finite_elements(&self) -> Result<&[Value]> {
        match &self.form {
            SubsetForm::Elements(e) => Ok(e),
            SubsetForm::Predicate(_) => Err(Error::InfiniteCarrier(format!(
                "predicate-form ideal of `{}`",
                self.parent.id()
            ))),
        }
    }

    pub fn same_members(&self, other: &Ideal) -> bool {
        self.form == other.form
    }

    pub fn is_zero_only(&self) -> Result<bool> {
        match &self.form {
            SubsetForm::Elements(e) => Ok(e.len() == 1),
            SubsetForm::Predicate(p) => Ok(*p == Predicate::ZeroOnly),
        }
    }

    pub fn is_whole(&self) -> Result<bool> {
        match &self.form {
            SubsetForm::Elements(e) => {
                Ok(e.len() as u64 == self.parent.cardinality().finite().unwrap_or(u64::MAX))
            }
            SubsetForm::Predicate(_) => Ok(false),
        }
    }

    pub fn validate_closure(&self) -> Result<()> {
        let elems = match &self.form {
            SubsetForm::Elements(e) => e,
            SubsetForm::Predicate(_) => return Ok(()),
        };
        let member = |v: &Value| elems.binary_search(v).is_ok();
        for a in elems {
            for b in elems {
                let s = self.parent.add_value(a, b);
                if !member(&s) {
                    return Err(Error::ClosureFailure(format!("{} + {} leaves the ideal", a, b)));
                }
            }
            for r in self.parent.elements()? {
                if matches!(self.sidedness, Sidedness::Right | Sidedness::TwoSided) {
                    let p = self.parent.mul_value(a, r)?;
                    if !member(&p) {
                        return Err(Error::ClosureFailure(format!(
                            "{} * {} leaves the ideal",
                            a, r
                        )));
                    }
                }
                if matches!(self.sidedness, Sidedness::Left | Sidedness::TwoSided) {
                    let p = self.parent.mul_value(r, a)?;
                    if !member(&p) {
                        return Err(Error::ClosureFailure(format!(
                            "{} * {} leaves the ideal",
                            r, a
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn contains(parent: &Carrier, form: &SubsetForm, v: &Value) -> Result<bool> {
    match form {
        SubsetForm::Elements(e) => Ok(e.binary_search(v).is_ok()),
        SubsetForm::Predicate(Predicate::ZeroOnly) => Ok(v == &parent.zero_value()),
        SubsetForm::Predicate(Predicate::ComponentsZero(idxs)) => match v {
            Value::Tuple(vs) => {
                let comps = match parent.construction() {
                    crate::carrier::Construction::Product(cs) => cs,
                    _ => {
                        return Err(Error::UnsupportedCarrier(
                            "component predicate on non-product carrier".into(),
                        ))
                    }
                };
                for i in idxs {
                    if vs[*i] != comps[*i].zero_value() {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Err(Error::UnsupportedCarrier("component predicate".into())),
        },
    }
}
