//! Scenario files: the JSON vocabulary for declaring carriers, submodules,
//! ideals, maps, and an ordered task list, plus resolution into live
//! objects. Parsing fails with a located diagnostic; dangling references
//! are resolve errors; refuted declared facts are validation errors.

use std::path::Path;

use serde_json::Value as Json;

use crate::carrier::{Carrier, CarrierKind, DeclaredFact, Element};
use crate::error::{Error, Result};
use crate::jordan::LemmaId;
use crate::map::AdditiveMap;
use crate::probe::ProbeSpec;
use crate::scalar::ScalarDomain;
use crate::subset::{Ideal, Predicate, Sidedness, Submodule};

#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub probe_degree: Option<usize>,
    pub budget: Option<u64>,
    pub partitions: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckLaw {
    Additive,
    Derivation,
    ModuleHom,
    BimoduleHom,
    Endomorphism,
    DfDerivation,
    JordanDfDerivation,
}

impl CheckLaw {
    fn parse(s: &str) -> Result<CheckLaw> {
        Ok(match s {
            "additive" => CheckLaw::Additive,
            "derivation" => CheckLaw::Derivation,
            "module_hom" => CheckLaw::ModuleHom,
            "bimodule_hom" => CheckLaw::BimoduleHom,
            "endomorphism" => CheckLaw::Endomorphism,
            "df_derivation" => CheckLaw::DfDerivation,
            "jordan_df_derivation" => CheckLaw::JordanDfDerivation,
            other => return Err(Error::ParseError(format!("unknown check law `{}`", other))),
        })
    }
}

#[derive(Clone, Debug)]
pub enum Region {
    Submodule(Submodule),
    /// `(K : M)` computed at run time.
    Colon { submodule: Submodule, module: Carrier },
    Annihilator(Carrier),
}

#[derive(Clone, Debug)]
pub enum EvalExpect {
    Value(Element),
    Nonzero,
    None,
}

#[derive(Clone, Debug)]
pub enum FamilySpec {
    InnerDerivations(Carrier),
    AllDerivations(Carrier),
    Identity(Carrier),
    CentralScalings { s: Carrier, m: Carrier },
    LeftMultUnits(Carrier),
    LeftMultAll(Carrier),
    Explicit(Vec<AdditiveMap>),
}

#[derive(Clone, Debug)]
pub struct OracleTask {
    pub which: String,
    pub m: Option<Carrier>,
    pub r: Option<Carrier>,
    pub s: Option<Carrier>,
    pub l: Option<Submodule>,
    pub p: Option<Ideal>,
    pub deltas: Option<FamilySpec>,
    pub fs: Option<FamilySpec>,
    pub gammas: Option<FamilySpec>,
    pub samples: Option<(u64, u64)>,
}

#[derive(Clone, Debug)]
pub enum EnumClass {
    Additive,
    Derivations,
    ModuleHoms,
    DfDerivations,
    JordanDfDerivations,
}

#[derive(Clone, Debug)]
pub enum Task {
    Check {
        name: String,
        law: CheckLaw,
        m: Option<AdditiveMap>,
        delta: Option<AdditiveMap>,
        f: Option<AdditiveMap>,
        expect: Option<bool>,
        witness_pairs: Vec<(Element, Element)>,
    },
    MapsEqual {
        name: String,
        a: AdditiveMap,
        b: AdditiveMap,
        expect_equal: Option<bool>,
    },
    Inclusion {
        name: String,
        map: AdditiveMap,
        region: Region,
        expect_contained: bool,
        witness_probes: Vec<Element>,
    },
    Evaluate {
        name: String,
        map: AdditiveMap,
        input: Element,
        expect: EvalExpect,
    },
    Structure {
        name: String,
        predicate: String,
        carrier: Carrier,
        submodule: Option<Submodule>,
        ideal: Option<Ideal>,
        expect: Option<String>,
    },
    Enumerate {
        name: String,
        class: EnumClass,
        source: Carrier,
        target: Carrier,
        delta: Option<AdditiveMap>,
        f: Option<AdditiveMap>,
        delta_family: Option<FamilySpec>,
        expect_count: Option<u64>,
        expect_count_each: Option<u64>,
        cross_check_raw: bool,
    },
    Oracle {
        name: String,
        oracle: OracleTask,
    },
    LemmaSuite {
        name: String,
        contexts: Vec<(String, AdditiveMap, AdditiveMap, AdditiveMap)>,
        lemmas: Vec<LemmaId>,
    },
    JordanSweep {
        name: String,
        s: Carrier,
        m: Carrier,
        trials: u64,
        seed: u64,
    },
}

impl Task {
    pub fn kind(&self) -> &'static str {
        match self {
            Task::Check { .. } => "check",
            Task::MapsEqual { .. } => "maps_equal",
            Task::Inclusion { .. } => "inclusion",
            Task::Evaluate { .. } => "evaluate",
            Task::Structure { .. } => "structure",
            Task::Enumerate { .. } => "enumerate",
            Task::Oracle { .. } => "oracle",
            Task::LemmaSuite { .. } => "lemma_suite",
            Task::JordanSweep { .. } => "jordan_witness_sweep",
        }
    }

    /// Which CLI verb executes this task.
    pub fn verb(&self) -> &'static str {
        match self {
            Task::Oracle { .. } | Task::LemmaSuite { .. } => "oracle",
            Task::Enumerate { .. } => "enumerate",
            _ => "verify",
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Task::Check { name, .. }
            | Task::MapsEqual { name, .. }
            | Task::Inclusion { name, .. }
            | Task::Evaluate { name, .. }
            | Task::Structure { name, .. }
            | Task::Enumerate { name, .. }
            | Task::Oracle { name, .. }
            | Task::LemmaSuite { name, .. }
            | Task::JordanSweep { name, .. } => name,
        }
    }
}

pub struct Scenario {
    pub name: String,
    pub probe: ProbeSpec,
    pub budget: u64,
    pub partitions: usize,
    pub carriers: Vec<(String, Carrier)>,
    pub submodules: Vec<(String, Submodule)>,
    pub ideals: Vec<(String, Ideal)>,
    pub maps: Vec<(String, AdditiveMap)>,
    pub tasks: Vec<Task>,
}

impl Scenario {
    pub fn carrier(&self, id: &str) -> Result<&Carrier> {
        self.carriers
            .iter()
            .find(|(i, _)| i == id)
            .map(|(_, c)| c)
            .ok_or_else(|| Error::ResolveError(format!("carrier `{}`", id)))
    }

    pub fn submodule(&self, id: &str) -> Result<&Submodule> {
        self.submodules
            .iter()
            .find(|(i, _)| i == id)
            .map(|(_, s)| s)
            .ok_or_else(|| Error::ResolveError(format!("submodule `{}`", id)))
    }

    pub fn ideal(&self, id: &str) -> Result<&Ideal> {
        self.ideals
            .iter()
            .find(|(i, _)| i == id)
            .map(|(_, s)| s)
            .ok_or_else(|| Error::ResolveError(format!("ideal `{}`", id)))
    }

    pub fn map(&self, id: &str) -> Result<&AdditiveMap> {
        self.maps
            .iter()
            .find(|(i, _)| i == id)
            .map(|(_, m)| m)
            .ok_or_else(|| Error::ResolveError(format!("map `{}`", id)))
    }
}

pub fn parse_file(path: &Path, overrides: &Overrides) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)?;
    parse_str(&text, overrides)
}

pub fn parse_str(text: &str, overrides: &Overrides) -> Result<Scenario> {
    let doc: Json =
        serde_json::from_str(text).map_err(|e| Error::ParseError(format!("scenario: {}", e)))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| Error::ParseError("scenario must be a JSON object".into()))?;

    let name = obj
        .get("name")
        .and_then(|v| v.as_str())
        .ok_or_else(|| Error::ParseError("scenario needs a string `name`".into()))?
        .to_string();

    let mut probe = match obj.get("probe") {
        Some(p) => serde_json::from_value::<ProbeSpec>(p.clone())
            .map_err(|e| Error::ParseError(format!("probe: {}", e)))?,
        None => ProbeSpec::default(),
    };
    if let Some(seed) = overrides.seed {
        probe.seed = seed;
    }
    if let Some(deg) = overrides.probe_degree {
        probe.max_degree = deg;
    }
    let budget = overrides
        .budget
        .or_else(|| obj.get("budget").and_then(|v| v.as_u64()))
        .unwrap_or(crate::enumerate::DEFAULT_BUDGET);
    let partitions = overrides.partitions.unwrap_or(1);

    let mut scenario = Scenario {
        name,
        probe,
        budget,
        partitions,
        carriers: Vec::new(),
        submodules: Vec::new(),
        ideals: Vec::new(),
        maps: Vec::new(),
        tasks: Vec::new(),
    };

    // Carriers, submodules, and ideals may reference each other (quotients
    // and spans), so resolve to a fixpoint.
    let carrier_decls: Vec<&Json> = list(obj, "carriers")?;
    let submodule_decls: Vec<&Json> = list(obj, "submodules")?;
    let ideal_decls: Vec<&Json> = list(obj, "ideals")?;
    let mut pending_c: Vec<&Json> = carrier_decls;
    let mut pending_s: Vec<&Json> = submodule_decls;
    let mut pending_i: Vec<&Json> = ideal_decls;
    loop {
        let before = pending_c.len() + pending_s.len() + pending_i.len();
        let (resolved, still) = try_batch(pending_c, |d| parse_carrier(&scenario, d))?;
        scenario.carriers.extend(resolved);
        pending_c = still;
        let (resolved, still) = try_batch(pending_s, |d| parse_submodule(&scenario, d))?;
        scenario.submodules.extend(resolved);
        pending_s = still;
        let (resolved, still) = try_batch(pending_i, |d| parse_ideal(&scenario, d))?;
        scenario.ideals.extend(resolved);
        pending_i = still;
        let after = pending_c.len() + pending_s.len() + pending_i.len();
        if after == 0 {
            break;
        }
        if after == before {
            // nothing resolved this round: re-run one to surface its error
            if let Some(d) = pending_c.first() {
                parse_carrier(&scenario, d)?;
            }
            if let Some(d) = pending_s.first() {
                parse_submodule(&scenario, d)?;
            }
            if let Some(d) = pending_i.first() {
                parse_ideal(&scenario, d)?;
            }
            unreachable!("a pending declaration must fail when nothing resolves");
        }
    }

    for decl in list(obj, "maps")? {
        let (id, map) = parse_map_decl(&scenario, decl)?;
        scenario.maps.push((id, map));
    }

    for (i, decl) in list(obj, "tasks")?.into_iter().enumerate() {
        let task = parse_task(&scenario, decl, i)?;
        scenario.tasks.push(task);
    }

    Ok(scenario)
}

fn list<'a>(obj: &'a serde_json::Map<String, Json>, key: &str) -> Result<Vec<&'a Json>> {
    match obj.get(key) {
        None => Ok(Vec::new()),
        Some(Json::Array(items)) => Ok(items.iter().collect()),
        Some(_) => Err(Error::ParseError(format!("`{}` must be an array", key))),
    }
}

/// Try to parse each declaration; keep the ones whose references are not
/// resolvable yet for the next round.
#[allow(clippy::type_complexity)]
fn try_batch<'a, T>(
    pending: Vec<&'a Json>,
    mut parse: impl FnMut(&Json) -> Result<(String, T)>,
) -> Result<(Vec<(String, T)>, Vec<&'a Json>)> {
    let mut resolved = Vec::new();
    let mut still = Vec::new();
    for d in pending {
        match parse(d) {
            Ok((id, v)) => resolved.push((id, v)),
            Err(Error::ResolveError(_)) => still.push(d),
            Err(e) => return Err(e),
        }
    }
    Ok((resolved, still))
}

fn field<'a>(decl: &'a Json, key: &str) -> Result<&'a Json> {
    decl.get(key)
        .ok_or_else(|| Error::ParseError(format!("missing field `{}` in {}", key, decl)))
}

fn str_field(decl: &Json, key: &str) -> Result<String> {
    Ok(field(decl, key)?
        .as_str()
        .ok_or_else(|| Error::ParseError(format!("field `{}` must be a string", key)))?
        .to_string())
}

fn parse_scalar_domain(v: &Json) -> Result<ScalarDomain> {
    serde_json::from_value(v.clone())
        .map_err(|e| Error::ParseError(format!("scalar domain: {}", e)))
}

fn parse_declared_facts(decl: &Json) -> Result<Vec<DeclaredFact>> {
    match decl.get("declared_facts") {
        None => Ok(Vec::new()),
        Some(v) => serde_json::from_value(v.clone())
            .map_err(|e| Error::ParseError(format!("declared_facts: {}", e))),
    }
}

fn parse_carrier(scenario: &Scenario, decl: &Json) -> Result<(String, Carrier)> {
    let id = str_field(decl, "id")?;
    let kind = match str_field(decl, "kind")?.as_str() {
        "ring" => CarrierKind::Ring,
        "algebra" => CarrierKind::Algebra,
        "right_module" => CarrierKind::RightModule,
        "bimodule" => CarrierKind::Bimodule,
        other => return Err(Error::ParseError(format!("unknown carrier kind `{}`", other))),
    };
    let cons = field(decl, "construction")?;
    let cons_obj = cons
        .as_object()
        .ok_or_else(|| Error::ParseError("construction must be an object".into()))?;
    let (ckey, cval) = cons_obj
        .iter()
        .next()
        .ok_or_else(|| Error::ParseError("empty construction".into()))?;

    let over = match decl.get("over") {
        Some(Json::String(rid)) => Some(scenario.carrier(rid)?.clone()),
        None => None,
        _ => return Err(Error::ParseError("`over` must be a carrier id".into())),
    };

    let carrier = match ckey.as_str() {
        "modular" => {
            let n = cval
                .as_u64()
                .ok_or_else(|| Error::ParseError("modular construction takes a modulus".into()))?;
            build_ring_like(&id, kind, Carrier::modular_ring(&id, n)?, over)?
        }
        "polynomial" => build_ring_like(
            &id,
            kind,
            Carrier::polynomial_ring(&id, parse_scalar_domain(cval)?)?,
            over,
        )?,
        "matrix" | "triangular" => {
            let size = field(cval, "size")?
                .as_u64()
                .ok_or_else(|| Error::ParseError("matrix size must be an integer".into()))?
                as usize;
            let base = parse_scalar_domain(field(cval, "base")?)?;
            let base_carrier = if ckey == "matrix" {
                Carrier::matrix_algebra(&id, size, base)?
            } else {
                Carrier::triangular_algebra(&id, size, base)?
            };
            build_ring_like(&id, kind, base_carrier, over)?
        }
        "product" => {
            let comps = cval
                .as_array()
                .ok_or_else(|| Error::ParseError("product takes carrier ids".into()))?;
            let mut carriers = Vec::new();
            for c in comps {
                let cid = c
                    .as_str()
                    .ok_or_else(|| Error::ParseError("product component must be an id".into()))?;
                carriers.push(scenario.carrier(cid)?.clone());
            }
            let over = over.ok_or_else(|| {
                Error::MalformedDescriptor(format!("product module `{}` needs `over`", id))
            })?;
            Carrier::product_module(&id, carriers, over)?
        }
        "quotient_ring" => {
            let ring = scenario.carrier(&str_field(cval, "ring")?)?;
            let ideal = scenario.ideal(&str_field(cval, "ideal")?)?;
            Carrier::quotient_ring(&id, ring, ideal.clone())?
        }
        "quotient_module" => {
            let module = scenario.carrier(&str_field(cval, "module")?)?;
            let sub = scenario.submodule(&str_field(cval, "submodule")?)?;
            let over = match over {
                Some(o) => o,
                None => module
                    .over()
                    .cloned()
                    .ok_or_else(|| Error::MalformedDescriptor("quotient of a non-module".into()))?,
            };
            Carrier::quotient_module(&id, module, sub.clone(), &over)?
        }
        "span" => {
            let sub = scenario.submodule(&str_field(cval, "submodule")?)?;
            Carrier::span_module(&id, sub)?
        }
        other => {
            return Err(Error::ParseError(format!(
                "unknown construction `{}`",
                other
            )))
        }
    };

    let facts = parse_declared_facts(decl)?;
    let carrier = if facts.is_empty() {
        carrier
    } else {
        carrier.with_declared_facts(facts)?
    };
    Ok((id, carrier))
}

/// Ring-shaped constructions serve as rings/algebras directly and as
/// modules or bimodules over a declared ring.
fn build_ring_like(
    id: &str,
    kind: CarrierKind,
    base: Carrier,
    over: Option<Carrier>,
) -> Result<Carrier> {
    match kind {
        CarrierKind::Ring | CarrierKind::Algebra => Ok(base),
        CarrierKind::RightModule => {
            let over = over.ok_or_else(|| {
                Error::MalformedDescriptor(format!("module `{}` needs `over`", id))
            })?;
            Carrier::module_over_self(id, &over)
        }
        CarrierKind::Bimodule => {
            let over = over.ok_or_else(|| {
                Error::MalformedDescriptor(format!("bimodule `{}` needs `over`", id))
            })?;
            Carrier::bimodule_over_self(id, &over)
        }
    }
}

fn parse_members(parent: &Carrier, decl: &Json) -> Result<Option<Vec<Element>>> {
    match decl.get("generators") {
        None => Ok(None),
        Some(Json::Array(items)) => {
            let mut out = Vec::new();
            for item in items {
                out.push(parent.element_from_json(item)?);
            }
            Ok(Some(out))
        }
        Some(_) => Err(Error::ParseError("generators must be an array".into())),
    }
}

fn parse_predicate(decl: &Json) -> Result<Option<Predicate>> {
    match decl.get("predicate") {
        None => Ok(None),
        Some(p) => {
            if p.as_str() == Some("zero_only") {
                return Ok(Some(Predicate::ZeroOnly));
            }
            if let Some(obj) = p.as_object() {
                if let Some(idxs) = obj.get("components_zero") {
                    let idxs: Vec<usize> = serde_json::from_value(idxs.clone())
                        .map_err(|e| Error::ParseError(format!("components_zero: {}", e)))?;
                    return Ok(Some(Predicate::ComponentsZero(idxs)));
                }
            }
            Err(Error::ParseError(format!("unknown predicate {}", p)))
        }
    }
}

fn parse_submodule(scenario: &Scenario, decl: &Json) -> Result<(String, Submodule)> {
    let id = str_field(decl, "id")?;
    let parent = scenario.carrier(&str_field(decl, "parent")?)?;
    let facts = parse_declared_facts(decl)?;
    let sub = if let Some(gens) = parse_members(parent, decl)? {
        Submodule::from_generators(parent, &gens)?
    } else if let Some(pred) = parse_predicate(decl)? {
        Submodule::predicate(parent, pred)
    } else {
        return Err(Error::ParseError(format!(
            "submodule `{}` needs generators or a predicate",
            id
        )));
    };
    Ok((id, sub.with_declared_facts(facts)))
}

fn parse_ideal(scenario: &Scenario, decl: &Json) -> Result<(String, Ideal)> {
    let id = str_field(decl, "id")?;
    let parent = scenario.carrier(&str_field(decl, "parent")?)?;
    let sidedness = match decl.get("sidedness").and_then(|v| v.as_str()) {
        None | Some("two_sided") => Sidedness::TwoSided,
        Some("left") => Sidedness::Left,
        Some("right") => Sidedness::Right,
        Some(other) => {
            return Err(Error::ParseError(format!("unknown sidedness `{}`", other)))
        }
    };
    let ideal = if let Some(gens) = parse_members(parent, decl)? {
        Ideal::from_generators(parent, &gens, sidedness)?
    } else if let Some(pred) = parse_predicate(decl)? {
        Ideal::predicate(parent, pred)
    } else {
        return Err(Error::ParseError(format!(
            "ideal `{}` needs generators or a predicate",
            id
        )));
    };
    Ok((id, ideal))
}

fn parse_map_decl(scenario: &Scenario, decl: &Json) -> Result<(String, AdditiveMap)> {
    let id = str_field(decl, "id")?;
    let source = scenario.carrier(&str_field(decl, "source")?)?;
    let target = scenario.carrier(&str_field(decl, "target")?)?;
    let rule = field(decl, "rule")?;
    let map = build_rule_map(scenario, source, target, rule)?.with_name(&id);
    Ok((id, map))
}

fn int_param(args: &Json, key: &str, default: i64) -> Result<i64> {
    match args.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_i64()
            .ok_or_else(|| Error::ParseError(format!("parameter `{}` must be an integer", key))),
    }
}

fn build_rule_map(
    scenario: &Scenario,
    source: &Carrier,
    target: &Carrier,
    rule: &Json,
) -> Result<AdditiveMap> {
    let obj = rule
        .as_object()
        .ok_or_else(|| Error::ParseError("map rule must be an object".into()))?;
    let (key, args) = obj
        .iter()
        .next()
        .ok_or_else(|| Error::ParseError("empty map rule".into()))?;
    let same = source.same_structure(target);
    let map = match key.as_str() {
        "identity" => {
            if same && !std::ptr::eq(source, target) {
                AdditiveMap::identity_into(source, target)?
            } else {
                AdditiveMap::identity(source)
            }
        }
        "pair_identity" => AdditiveMap::pair_identity(source)?,
        "zero" => AdditiveMap::zero_map(source, target),
        "negation" => AdditiveMap::negation_into(source, target)?,
        "formal_derivative" => AdditiveMap::formal_derivative(source)?,
        "scaled_derivative" => {
            AdditiveMap::scaled_derivative(source, int_param(args, "q", 1)?)?
        }
        "inner_derivation" => {
            let b0 = source.element_from_json(field(args, "b0")?)?;
            AdditiveMap::inner_derivation(&b0)?
        }
        "pair_scaling" => {
            AdditiveMap::pair_scaling(source, int_param(args, "p", 1)?, int_param(args, "q", 1)?)?
        }
        "project_first" => AdditiveMap::project_first(source)?,
        "project_scaled" => {
            AdditiveMap::project_scaled(source, int_param(args, "p", 1)?, int_param(args, "q", 1)?)?
        }
        "gamma_mix" => AdditiveMap::gamma_mix(source)?,
        "gamma_mix_projected" => AdditiveMap::gamma_mix_projected(source)?,
        "left_mult" => {
            let ring = source
                .over()
                .ok_or_else(|| Error::CarrierMismatch("left_mult on a non-module".into()))?;
            let c = ring.element_from_json(field(args, "c")?)?;
            AdditiveMap::left_mult(source, &c)?
        }
        "right_mult" => {
            let b0 = target.element_from_json(field(args, "b0")?)?;
            AdditiveMap::right_mult(source, target, &b0)?
        }
        "central_scale" => {
            let domain = source.scalar_action().ok_or_else(|| {
                Error::UnsupportedCarrier("central_scale needs an algebra source".into())
            })?;
            let c = crate::scalar::Scalar::from_json(&domain, field(args, "c")?)?;
            AdditiveMap::central_scale(source, target, c)?
        }
        "d_example" => {
            let which = str_field(args, "which")?;
            AdditiveMap::d_example(source, &which, int_param(args, "p", 1)?)?
        }
        "table" => {
            let rows = args
                .as_array()
                .ok_or_else(|| Error::ParseError("table rule takes [input, output] pairs".into()))?;
            let mut pairs = Vec::new();
            for row in rows {
                let pair = row
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| Error::ParseError("table entries are [input, output]".into()))?;
                pairs.push((
                    source.value_from_json(&pair[0])?,
                    target.value_from_json(&pair[1])?,
                ));
            }
            AdditiveMap::from_pairs("table", source, target, &pairs)?
        }
        "compose" | "sum" => {
            let parts = args
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::ParseError(format!("{} takes two map refs", key)))?;
            let a = resolve_map_ref(scenario, &parts[0])?;
            let b = resolve_map_ref(scenario, &parts[1])?;
            if key == "compose" {
                AdditiveMap::compose(&a, &b)?
            } else {
                AdditiveMap::sum(&a, &b)?
            }
        }
        "negate" => AdditiveMap::negate(&resolve_map_ref(scenario, args)?),
        other => return Err(Error::ParseError(format!("unknown map rule `{}`", other))),
    };
    Ok(map)
}

/// A map reference: a declared id, or an inline combinator expression
/// (`compose` / `sum` / `negate`) over references.
pub fn resolve_map_ref(scenario: &Scenario, v: &Json) -> Result<AdditiveMap> {
    if let Some(id) = v.as_str() {
        return Ok(scenario.map(id)?.clone());
    }
    let obj = v
        .as_object()
        .ok_or_else(|| Error::ParseError(format!("bad map reference {}", v)))?;
    let (key, args) = obj
        .iter()
        .next()
        .ok_or_else(|| Error::ParseError("empty map reference".into()))?;
    match key.as_str() {
        "compose" | "sum" => {
            let parts = args
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::ParseError(format!("{} takes two map refs", key)))?;
            let a = resolve_map_ref(scenario, &parts[0])?;
            let b = resolve_map_ref(scenario, &parts[1])?;
            if key == "compose" {
                AdditiveMap::compose(&a, &b)
            } else {
                AdditiveMap::sum(&a, &b)
            }
        }
        "negate" => Ok(AdditiveMap::negate(&resolve_map_ref(scenario, args)?)),
        other => Err(Error::ParseError(format!("unknown map reference `{}`", other))),
    }
}

fn parse_family(scenario: &Scenario, v: &Json) -> Result<FamilySpec> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::ParseError("family must be an object".into()))?;
    let family = obj
        .get("family")
        .and_then(|f| f.as_str())
        .ok_or_else(|| Error::ParseError("family needs a `family` name".into()))?;
    let of = |key: &str| -> Result<Carrier> {
        Ok(scenario.carrier(&str_field(v, key)?)?.clone())
    };
    Ok(match family {
        "inner_derivations" => FamilySpec::InnerDerivations(of("of")?),
        "all_derivations" => FamilySpec::AllDerivations(of("of")?),
        "identity" => FamilySpec::Identity(of("of")?),
        "central_scalings" => FamilySpec::CentralScalings {
            s: of("s")?,
            m: of("m")?,
        },
        "left_mult_units" => FamilySpec::LeftMultUnits(of("of")?),
        "left_mult" => FamilySpec::LeftMultAll(of("of")?),
        "explicit" => {
            let refs = field(v, "maps")?
                .as_array()
                .ok_or_else(|| Error::ParseError("explicit family takes map refs".into()))?;
            let mut maps = Vec::new();
            for r in refs {
                maps.push(resolve_map_ref(scenario, r)?);
            }
            FamilySpec::Explicit(maps)
        }
        other => return Err(Error::ParseError(format!("unknown family `{}`", other))),
    })
}

fn parse_task(scenario: &Scenario, decl: &Json, index: usize) -> Result<Task> {
    let obj = decl
        .as_object()
        .ok_or_else(|| Error::ParseError("task must be an object".into()))?;
    let (kind, body) = obj
        .iter()
        .find(|(k, _)| *k != "name")
        .ok_or_else(|| Error::ParseError("empty task".into()))?;
    let name = obj
        .get("name")
        .and_then(|n| n.as_str())
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("task{}", index));

    match kind.as_str() {
        "check" => {
            let law = CheckLaw::parse(&str_field(body, "law")?)?;
            let mref = |key: &str| -> Result<Option<AdditiveMap>> {
                match body.get(key) {
                    None => Ok(None),
                    Some(v) => Ok(Some(resolve_map_ref(scenario, v)?)),
                }
            };
            let m = mref("m")?.or(mref("map")?);
            let d = mref("d")?;
            let delta = mref("delta")?;
            let f = mref("f")?;
            let target_map = match law {
                CheckLaw::DfDerivation | CheckLaw::JordanDfDerivation => d.clone(),
                _ => m.clone().or(d.clone()).or(f.clone()).or(delta.clone()),
            };
            let main = target_map.ok_or_else(|| {
                Error::ParseError(format!("check task `{}` names no map", name))
            })?;
            let expect = match body.get("expect").and_then(|v| v.as_str()) {
                None => None,
                Some("pass") => Some(true),
                Some("fail") => Some(false),
                Some(other) => {
                    return Err(Error::ParseError(format!("unknown expectation `{}`", other)))
                }
            };
            // witness probes are (module element, ring element) pairs fed
            // to the law before the generated probe sequence
            let mut witness_pairs = Vec::new();
            if let Some(Json::Array(items)) = body.get("witness_probes") {
                let src = main.source().clone();
                let ring = src.over().cloned().unwrap_or_else(|| src.clone());
                for item in items {
                    let pair = item
                        .as_array()
                        .filter(|p| p.len() == 2)
                        .ok_or_else(|| Error::ParseError("witness probes are pairs".into()))?;
                    witness_pairs.push((
                        src.element_from_json(&pair[0])?,
                        ring.element_from_json(&pair[1])?,
                    ));
                }
            }
            Ok(Task::Check {
                name,
                law,
                m: m.or(d),
                delta,
                f,
                expect,
                witness_pairs,
            })
        }
        "maps_equal" => {
            let a = resolve_map_ref(scenario, field(body, "a")?)?;
            let b = resolve_map_ref(scenario, field(body, "b")?)?;
            let expect_equal = match body.get("expect").and_then(|v| v.as_str()) {
                None => None,
                Some("equal") => Some(true),
                Some("unequal") => Some(false),
                Some(other) => {
                    return Err(Error::ParseError(format!("unknown expectation `{}`", other)))
                }
            };
            Ok(Task::MapsEqual {
                name,
                a,
                b,
                expect_equal,
            })
        }
        "inclusion" => {
            let map = resolve_map_ref(scenario, field(body, "map")?)?;
            let region_v = field(body, "region")?;
            let region = if let Some(id) = region_v.get("submodule").and_then(|v| v.as_str()) {
                Region::Submodule(scenario.submodule(id)?.clone())
            } else if let Some(colon) = region_v.get("colon") {
                Region::Colon {
                    submodule: scenario.submodule(&str_field(colon, "submodule")?)?.clone(),
                    module: scenario.carrier(&str_field(colon, "module")?)?.clone(),
                }
            } else if let Some(id) = region_v.get("annihilator").and_then(|v| v.as_str()) {
                Region::Annihilator(scenario.carrier(id)?.clone())
            } else {
                return Err(Error::ParseError(format!("unknown region {}", region_v)));
            };
            let expect_contained = match str_field(body, "expect")?.as_str() {
                "contained" => true,
                "not_contained" => false,
                other => {
                    return Err(Error::ParseError(format!("unknown expectation `{}`", other)))
                }
            };
            let mut witness_probes = Vec::new();
            if let Some(Json::Array(items)) = body.get("witness_probes") {
                for item in items {
                    witness_probes.push(map.source().element_from_json(item)?);
                }
            }
            Ok(Task::Inclusion {
                name,
                map,
                region,
                expect_contained,
                witness_probes,
            })
        }
        "evaluate" => {
            let map = resolve_map_ref(scenario, field(body, "map")?)?;
            let input = map.source().element_from_json(field(body, "input")?)?;
            let expect = if body.get("expect_nonzero").and_then(|v| v.as_bool()) == Some(true) {
                EvalExpect::Nonzero
            } else if let Some(v) = body.get("expect") {
                EvalExpect::Value(map.target().element_from_json(v)?)
            } else {
                EvalExpect::None
            };
            Ok(Task::Evaluate {
                name,
                map,
                input,
                expect,
            })
        }
        "structure" => {
            let predicate = str_field(body, "predicate")?;
            let carrier = scenario.carrier(&str_field(body, "carrier")?)?.clone();
            let submodule = match body.get("submodule").and_then(|v| v.as_str()) {
                Some(id) => Some(scenario.submodule(id)?.clone()),
                None => None,
            };
            let ideal = match body.get("ideal").and_then(|v| v.as_str()) {
                Some(id) => Some(scenario.ideal(id)?.clone()),
                None => None,
            };
            let expect = body
                .get("expect")
                .and_then(|v| v.as_str())
                .map(|s| s.to_string());
            Ok(Task::Structure {
                name,
                predicate,
                carrier,
                submodule,
                ideal,
                expect,
            })
        }
        "enumerate" => {
            let class = match str_field(body, "class")?.as_str() {
                "additive" => EnumClass::Additive,
                "derivations" => EnumClass::Derivations,
                "module_homs" => EnumClass::ModuleHoms,
                "df_derivations" => EnumClass::DfDerivations,
                "jordan_df_derivations" => EnumClass::JordanDfDerivations,
                other => {
                    return Err(Error::ParseError(format!("unknown enumeration class `{}`", other)))
                }
            };
            let source = scenario.carrier(&str_field(body, "source")?)?.clone();
            let target = match body.get("target").and_then(|v| v.as_str()) {
                Some(id) => scenario.carrier(id)?.clone(),
                None => source.clone(),
            };
            let delta = match body.get("delta") {
                Some(v) => Some(resolve_map_ref(scenario, v)?),
                None => None,
            };
            let f = match body.get("f") {
                Some(v) => Some(resolve_map_ref(scenario, v)?),
                None => None,
            };
            let delta_family = match body.get("delta_family") {
                Some(v) => Some(parse_family(scenario, v)?),
                None => None,
            };
            Ok(Task::Enumerate {
                name,
                class,
                source,
                target,
                delta,
                f,
                delta_family,
                expect_count: body.get("expect_count").and_then(|v| v.as_u64()),
                expect_count_each: body.get("expect_count_each").and_then(|v| v.as_u64()),
                cross_check_raw: body
                    .get("cross_check_raw")
                    .and_then(|v| v.as_bool())
                    .unwrap_or(false),
            })
        }
        "oracle" => {
            let which = str_field(body, "which")?;
            let carrier_opt = |key: &str| -> Result<Option<Carrier>> {
                match body.get(key).and_then(|v| v.as_str()) {
                    Some(id) => Ok(Some(scenario.carrier(id)?.clone())),
                    None => Ok(None),
                }
            };
            let family_opt = |key: &str| -> Result<Option<FamilySpec>> {
                match body.get(key) {
                    Some(v) => Ok(Some(parse_family(scenario, v)?)),
                    None => Ok(None),
                }
            };
            let samples = match body.get("samples") {
                Some(v) => Some((
                    field(v, "count")?
                        .as_u64()
                        .ok_or_else(|| Error::ParseError("sample count".into()))?,
                    field(v, "seed")?
                        .as_u64()
                        .ok_or_else(|| Error::ParseError("sample seed".into()))?,
                )),
                None => None,
            };
            Ok(Task::Oracle {
                name,
                oracle: OracleTask {
                    which,
                    m: carrier_opt("m")?,
                    r: carrier_opt("r")?,
                    s: carrier_opt("s")?,
                    l: match body.get("l").and_then(|v| v.as_str()) {
                        Some(id) => Some(scenario.submodule(id)?.clone()),
                        None => None,
                    },
                    p: match body.get("p").and_then(|v| v.as_str()) {
                        Some(id) => Some(scenario.ideal(id)?.clone()),
                        None => None,
                    },
                    deltas: family_opt("deltas")?,
                    fs: family_opt("fs")?,
                    gammas: family_opt("gammas")?,
                    samples,
                },
            })
        }
        "lemma_suite" => {
            let mut contexts = Vec::new();
            for (i, ctx) in field(body, "contexts")?
                .as_array()
                .ok_or_else(|| Error::ParseError("contexts must be an array".into()))?
                .iter()
                .enumerate()
            {
                let label = ctx
                    .get("label")
                    .and_then(|v| v.as_str())
                    .map(|s| s.to_string())
                    .unwrap_or_else(|| format!("ctx{}", i));
                let d = resolve_map_ref(scenario, field(ctx, "d")?)?;
                let delta = resolve_map_ref(scenario, field(ctx, "delta")?)?;
                let f = resolve_map_ref(scenario, field(ctx, "f")?)?;
                contexts.push((label, d, delta, f));
            }
            let lemmas = match body.get("lemmas") {
                None => LemmaId::all().to_vec(),
                Some(Json::Array(items)) => {
                    let mut out = Vec::new();
                    for item in items {
                        let s = item
                            .as_str()
                            .ok_or_else(|| Error::ParseError("lemma ids are strings".into()))?;
                        out.push(LemmaId::parse(s)?);
                    }
                    out
                }
                Some(_) => return Err(Error::ParseError("lemmas must be an array".into())),
            };
            Ok(Task::LemmaSuite {
                name,
                contexts,
                lemmas,
            })
        }
        "jordan_witness_sweep" => Ok(Task::JordanSweep {
            name,
            s: scenario.carrier(&str_field(body, "s")?)?.clone(),
            m: scenario.carrier(&str_field(body, "m")?)?.clone(),
            trials: body.get("trials").and_then(|v| v.as_u64()).unwrap_or(20),
            seed: body.get("seed").and_then(|v| v.as_u64()).unwrap_or(0),
        }),
        other => Err(Error::ParseError(format!("unknown task kind `{}`", other))),
    }
}
