//! Combinatorial model of a simple normal crossing divisor `E = sum E_i` with
//! holonomy data.
//!
//! A [`Configuration`] records the components with their holonomy values
//! `m_i` on meridians, and for every nonempty `I` with `E_I` nonempty the open
//! stratum `E°_I` (its class, Euler characteristic and the components whose
//! meridians generate the holonomy image of its punctured neighborhood).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::ring::RingElement;

/// Symbolic component identifier. Numeric identifiers sort numerically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComponentId(String);

impl ComponentId {
    pub fn new(s: impl Into<String>) -> Self {
        ComponentId(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Ord for ComponentId {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.0.parse::<u64>(), other.0.parse::<u64>()) {
            (Ok(a), Ok(b)) => a.cmp(&b).then_with(|| self.0.cmp(&other.0)),
            (Ok(_), Err(_)) => Ordering::Less,
            (Err(_), Ok(_)) => Ordering::Greater,
            (Err(_), Err(_)) => self.0.cmp(&other.0),
        }
    }
}

impl PartialOrd for ComponentId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ComponentId {
    fn from(s: &str) -> Self {
        ComponentId::new(s)
    }
}

impl From<u32> for ComponentId {
    fn from(n: u32) -> Self {
        ComponentId::new(n.to_string())
    }
}

pub type ComponentSet = BTreeSet<ComponentId>;

/// Builds a component set from anything convertible to ids.
pub fn set<T: Into<ComponentId>>(ids: impl IntoIterator<Item = T>) -> ComponentSet {
    ids.into_iter().map(Into::into).collect()
}

pub fn render_set(s: &ComponentSet) -> String {
    let inner: Vec<&str> = s.iter().map(ComponentId::as_str).collect();
    format!("{{{}}}", inner.join(","))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub id: ComponentId,
    pub multiplicity: i64,
    /// Exceptional divisor of a blow-up. Such components may carry holonomy
    /// zero, in which case their strata rely on the replacement term.
    pub exceptional: bool,
}

impl Component {
    pub fn new(id: impl Into<ComponentId>, multiplicity: i64) -> Self {
        Component { id: id.into(), multiplicity, exceptional: false }
    }
}

/// Open stratum `E°_I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub components: ComponentSet,
    /// Class in `K_0(Var)` with trivial action; absent when not a polynomial in `L`.
    pub class: Option<RingElement>,
    pub euler: i64,
    /// Components whose meridians generate the holonomy image; contains `components`.
    pub adjacency: ComponentSet,
    /// `E°_I` is a product of an affine space and a torus (up to scissors).
    pub torus_cell: bool,
    /// Overrides the automatic cover computation.
    pub cover_class: Option<RingElement>,
}

impl Stratum {
    /// A torus-cell stratum whose adjacency is its own component set.
    pub fn torus(components: ComponentSet, class: RingElement) -> Self {
        let euler = eval_euler(&class);
        Stratum {
            adjacency: components.clone(),
            components,
            class: Some(class),
            euler,
            torus_cell: true,
            cover_class: None,
        }
    }

    pub fn with_adjacency(mut self, adjacency: ComponentSet) -> Self {
        self.adjacency = adjacency;
        self
    }

    /// True when the stratum is known to be empty or to contribute nothing.
    pub fn is_null(&self) -> bool {
        match (&self.cover_class, &self.class) {
            (Some(c), _) => c.is_zero(),
            (None, Some(c)) => c.is_zero(),
            (None, None) => false,
        }
    }
}

pub(crate) fn eval_euler(class: &RingElement) -> i64 {
    i64::try_from(class.eval_l_at_one()).expect("Euler characteristic overflows i64")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    ambient_dim: u32,
    components: BTreeMap<ComponentId, Component>,
    strata: BTreeMap<ComponentSet, Stratum>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiagnosticKind {
    FiniteType,
    EulerMismatch,
    UnknownComponent,
    DuplicateEntry,
    EmptyStratum,
    AdjacencyMissingComponents,
    DimensionBound,
    NontrivialClassAction,
    MissingClass,
    ClosureViolation,
    CoverRecipeMismatch,
    InvalidAmbientDimension,
    InvalidCenter,
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DiagnosticKind::FiniteType => "finite-type violation",
            DiagnosticKind::EulerMismatch => "Euler/class mismatch",
            DiagnosticKind::UnknownComponent => "unknown component",
            DiagnosticKind::DuplicateEntry => "duplicate entry",
            DiagnosticKind::EmptyStratum => "empty stratum",
            DiagnosticKind::AdjacencyMissingComponents => "adjacency does not contain stratum",
            DiagnosticKind::DimensionBound => "dimension bound violated",
            DiagnosticKind::NontrivialClassAction => "stratum class carries an action",
            DiagnosticKind::MissingClass => "torus cell without class",
            DiagnosticKind::ClosureViolation => "closure violation",
            DiagnosticKind::CoverRecipeMismatch => "cover recipe mismatch",
            DiagnosticKind::InvalidAmbientDimension => "invalid ambient dimension",
            DiagnosticKind::InvalidCenter => "invalid center",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    /// Offending stratum or component, rendered.
    pub subject: String,
    pub detail: String,
}

impl Diagnostic {
    pub fn new(kind: DiagnosticKind, subject: impl Into<String>, detail: impl Into<String>) -> Self {
        Diagnostic { kind, subject: subject.into(), detail: detail.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.kind, self.subject, self.detail)
    }
}

impl Configuration {
    /// Assembles a configuration. Only duplicates are rejected here; call
    /// [`validate`] for the remaining invariants.
    pub fn new(
        ambient_dim: u32,
        components: impl IntoIterator<Item = Component>,
        strata: impl IntoIterator<Item = Stratum>,
    ) -> Result<Self> {
        let mut dups = Vec::new();
        let mut cmap = BTreeMap::new();
        for c in components {
            let id = c.id.clone();
            if cmap.insert(id.clone(), c).is_some() {
                dups.push(Diagnostic::new(DiagnosticKind::DuplicateEntry, id.to_string(), "component listed twice"));
            }
        }
        let mut smap = BTreeMap::new();
        for s in strata {
            let key = s.components.clone();
            if smap.insert(key.clone(), s).is_some() {
                dups.push(Diagnostic::new(DiagnosticKind::DuplicateEntry, render_set(&key), "stratum listed twice"));
            }
        }
        if !dups.is_empty() {
            return Err(Error::InvalidConfiguration(dups));
        }
        Ok(Configuration { ambient_dim, components: cmap, strata: smap })
    }

    /// Like [`Configuration::new`] but also requires [`validate`] to be clean.
    pub fn checked(
        ambient_dim: u32,
        components: impl IntoIterator<Item = Component>,
        strata: impl IntoIterator<Item = Stratum>,
    ) -> Result<Self> {
        let c = Configuration::new(ambient_dim, components, strata)?;
        c.ensure_valid()?;
        Ok(c)
    }

    pub(crate) fn from_maps(
        ambient_dim: u32,
        components: BTreeMap<ComponentId, Component>,
        strata: BTreeMap<ComponentSet, Stratum>,
    ) -> Self {
        Configuration { ambient_dim, components, strata }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let d = validate(self);
        if d.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfiguration(d))
        }
    }

    pub fn ambient_dim(&self) -> u32 {
        self.ambient_dim
    }

    pub fn components(&self) -> impl Iterator<Item = &Component> {
        self.components.values()
    }

    pub fn component(&self, id: &ComponentId) -> Option<&Component> {
        self.components.get(id)
    }

    pub fn component_ids(&self) -> ComponentSet {
        self.components.keys().cloned().collect()
    }

    pub fn multiplicity(&self, id: &ComponentId) -> Option<i64> {
        self.components.get(id).map(|c| c.multiplicity)
    }

    pub fn strata(&self) -> impl Iterator<Item = &Stratum> {
        self.strata.values()
    }

    pub fn stratum(&self, components: &ComponentSet) -> Option<&Stratum> {
        self.strata.get(components)
    }

    pub(crate) fn strata_map(&self) -> &BTreeMap<ComponentSet, Stratum> {
        &self.strata
    }

    pub(crate) fn components_map(&self) -> &BTreeMap<ComponentId, Component> {
        &self.components
    }

    /// Multiplies every holonomy value by `c`.
    /// Resolves a selection spec: `all`, `exceptional`, or comma-separated ids.
    pub fn select(&self, spec: &str) -> Result<ComponentSet> {
        let set: ComponentSet = match spec.trim() {
            "all" => self.component_ids(),
            "exceptional" => self.components().filter(|x| x.exceptional).map(|x| x.id.clone()).collect(),
            list => list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(ComponentId::new).collect(),
        };
        if set.is_empty() {
            return Err(Error::EmptySelection);
        }
        if let Some(id) = set.iter().find(|id| self.component(id).is_none()) {
            return Err(Error::UnknownComponent(id.clone()));
        }
        Ok(set)
    }

    pub fn scale_multiplicities(&self, c: i64) -> Configuration {
        let mut out = self.clone();
        for comp in out.components.values_mut() {
            comp.multiplicity *= c;
        }
        out
    }

    fn lookup(&self) -> impl Fn(&ComponentId) -> Option<i64> + '_ {
        move |id| self.multiplicity(id)
    }
}

/// `gcd(|m_i|)` over a set of components; the gcd of the empty set is 0.
pub(crate) fn gcd_over(
    ids: &ComponentSet,
    mult: impl Fn(&ComponentId) -> Option<i64>,
) -> Result<u64> {
    let mut g = 0u64;
    for id in ids {
        let m = mult(id).ok_or_else(|| Error::UnknownComponent(id.clone()))?;
        g = g.gcd(&m.unsigned_abs());
    }
    Ok(g)
}

/// Cover of a stratum from its data: the explicit class, or `[mu_N] * class`
/// with `N` the holonomy index of the adjacency.
pub(crate) fn recipe_cover(
    stratum: &ComponentSet,
    class: Option<&RingElement>,
    torus_cell: bool,
    explicit: Option<&RingElement>,
    adjacency: &ComponentSet,
    mult: impl Fn(&ComponentId) -> Option<i64>,
) -> Result<RingElement> {
    if let Some(x) = explicit {
        return Ok(x.clone());
    }
    let unrep = |reason: &str| Error::Unrepresentable { stratum: stratum.clone(), reason: reason.to_string() };
    if !torus_cell {
        return Err(unrep("stratum is not a torus cell and no cover class was supplied"));
    }
    let class = class.ok_or_else(|| unrep("stratum has no class"))?;
    let n = gcd_over(adjacency, mult)?;
    if n == 0 {
        if class.is_zero() {
            return Ok(RingElement::zero());
        }
        return Err(unrep("holonomy image is trivial"));
    }
    Ok(&RingElement::mu(n) * class)
}

fn check_ids(config: &Configuration, ids: &ComponentSet) -> Result<()> {
    if ids.is_empty() {
        return Err(Error::EmptySelection);
    }
    for id in ids {
        if config.component(id).is_none() {
            return Err(Error::UnknownComponent(id.clone()));
        }
    }
    Ok(())
}

/// `m_I = gcd(|m_i| : i in I)`.
pub fn gcd_multiplicity(config: &Configuration, subset: &ComponentSet) -> Result<u64> {
    check_ids(config, subset)?;
    gcd_over(subset, config.lookup())
}

/// Number of connected components `N_I` of the cover of `E°_I`: the index of
/// the holonomy image, generated by the meridians of the adjacency.
pub fn cover_component_count(config: &Configuration, subset: &ComponentSet) -> Result<u64> {
    let s = config.stratum(subset).ok_or_else(|| Error::MissingStratum(subset.clone()))?;
    gcd_over(&s.adjacency, config.lookup())
}

/// Equivariant class of the unramified cover of `E°_I`.
pub fn cover_class(config: &Configuration, subset: &ComponentSet) -> Result<RingElement> {
    let s = config.stratum(subset).ok_or_else(|| Error::MissingStratum(subset.clone()))?;
    stratum_cover(config, s)
}

pub(crate) fn stratum_cover(config: &Configuration, s: &Stratum) -> Result<RingElement> {
    recipe_cover(
        &s.components,
        s.class.as_ref(),
        s.torus_cell,
        s.cover_class.as_ref(),
        &s.adjacency,
        config.lookup(),
    )
}

/// Checks every configuration invariant; an empty result means valid.
pub fn validate(config: &Configuration) -> Vec<Diagnostic> {
    use DiagnosticKind as K;
    let mut out = Vec::new();
    if config.ambient_dim == 0 {
        out.push(Diagnostic::new(K::InvalidAmbientDimension, "ambient_dim", "must be positive"));
    }
    for c in config.components.values() {
        if c.multiplicity == 0 && !c.exceptional {
            out.push(Diagnostic::new(K::FiniteType, c.id.to_string(), "multiplicity is zero"));
        }
    }
    for (key, s) in &config.strata {
        let name = render_set(key);
        if key.is_empty() {
            out.push(Diagnostic::new(K::EmptyStratum, name, "stratum has no components"));
            continue;
        }
        let mut ids_ok = true;
        for id in key.iter().chain(s.adjacency.iter()) {
            if config.component(id).is_none() {
                out.push(Diagnostic::new(K::UnknownComponent, name.clone(), format!("references {id}")));
                ids_ok = false;
            }
        }
        if key.len() as u64 > config.ambient_dim as u64 {
            out.push(Diagnostic::new(
                K::DimensionBound,
                name.clone(),
                format!("{} components exceed ambient dimension {}", key.len(), config.ambient_dim),
            ));
        }
        if !key.is_subset(&s.adjacency) {
            out.push(Diagnostic::new(K::AdjacencyMissingComponents, name.clone(), "adjacency must contain I"));
        }
        match &s.class {
            Some(class) => {
                if !class.has_trivial_action() {
                    out.push(Diagnostic::new(K::NontrivialClassAction, name.clone(), class.to_string()));
                }
                if class.eval_l_at_one() != BigInt::from(s.euler) {
                    out.push(Diagnostic::new(
                        K::EulerMismatch,
                        name.clone(),
                        format!("euler {} but class {} evaluates to {}", s.euler, class, class.eval_l_at_one()),
                    ));
                }
                let room = config.ambient_dim as i64 - key.len() as i64;
                if let Some(d) = class.l_degree() {
                    if d as i64 > room {
                        out.push(Diagnostic::new(
                            K::DimensionBound,
                            name.clone(),
                            format!("class degree {d} exceeds stratum dimension {room}"),
                        ));
                    }
                }
            }
            None => {
                if s.torus_cell {
                    out.push(Diagnostic::new(K::MissingClass, name.clone(), "torus cells need a class"));
                }
            }
        }
        for drop in key {
            let mut sub = key.clone();
            sub.remove(drop);
            if !sub.is_empty() && !config.strata.contains_key(&sub) {
                out.push(Diagnostic::new(
                    K::ClosureViolation,
                    name.clone(),
                    format!("missing stratum {} below it", render_set(&sub)),
                ));
            }
        }
        if ids_ok && s.torus_cell && s.cover_class.is_none() && s.euler != 0 {
            let n = gcd_over(&s.adjacency, config.lookup()).unwrap_or(0);
            let m = gcd_over(key, config.lookup()).unwrap_or(0);
            if n != m {
                out.push(Diagnostic::new(
                    K::CoverRecipeMismatch,
                    name.clone(),
                    format!(
                        "nonzero Euler characteristic forces {m} cover components, adjacency gives {n}"
                    ),
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_a(m1: i64, m2: i64) -> Configuration {
        let both = set([1u32, 2]);
        Configuration::checked(
            2,
            [Component::new(1u32, m1), Component::new(2u32, m2)],
            [
                Stratum::torus(set([1u32]), RingElement::torus(1)).with_adjacency(both.clone()),
                Stratum::torus(set([2u32]), RingElement::torus(1)).with_adjacency(both.clone()),
                Stratum::torus(both.clone(), RingElement::one()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn example_a_is_valid() {
        assert!(validate(&example_a(2, 3)).is_empty());
        assert!(validate(&example_a(-4, 6)).is_empty());
    }

    #[test]
    fn zero_multiplicity_is_finite_type_violation() {
        let c = Configuration::new(
            1,
            [Component::new(1u32, 0)],
            [Stratum::torus(set([1u32]), RingElement::one())],
        )
        .unwrap();
        let d = validate(&c);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].kind, DiagnosticKind::FiniteType);
        assert!(d[0].to_string().contains("finite-type violation"));
    }

    #[test]
    fn euler_mismatch() {
        let mut s = Stratum::torus(set([1u32]), RingElement::lefschetz());
        s.euler = 3;
        let c = Configuration::new(1, [Component::new(1u32, 2)], [s]).unwrap();
        let d = validate(&c);
        assert!(d.iter().any(|x| x.kind == DiagnosticKind::EulerMismatch));
        assert!(d.iter().any(|x| x.to_string().contains("Euler/class mismatch")));
    }

    #[test]
    fn closure_and_bounds() {
        let c = Configuration::new(
            1,
            [Component::new(1u32, 1), Component::new(2u32, 1)],
            [Stratum::torus(set([1u32, 2]), RingElement::lefschetz())],
        )
        .unwrap();
        let kinds: BTreeSet<_> = validate(&c).into_iter().map(|d| d.kind).collect();
        assert!(kinds.contains(&DiagnosticKind::ClosureViolation));
        assert!(kinds.contains(&DiagnosticKind::DimensionBound));
    }

    #[test]
    fn duplicates_rejected() {
        let r = Configuration::new(1, [Component::new(1u32, 1), Component::new(1u32, 2)], []);
        assert!(matches!(r, Err(Error::InvalidConfiguration(_))));
    }

    #[test]
    fn recipe_mismatch_on_simply_connected_stratum() {
        // C with adjacency {1,2}: gcd 1 but m_1 = 2 while euler = 1.
        let c = Configuration::new(
            2,
            [Component::new(1u32, 2), Component::new(2u32, 3)],
            [
                Stratum::torus(set([1u32]), RingElement::lefschetz()).with_adjacency(set([1u32, 2])),
                Stratum::torus(set([2u32]), RingElement::torus(1)),
            ],
        )
        .unwrap();
        let d = validate(&c);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].kind, DiagnosticKind::CoverRecipeMismatch);
    }

    #[test]
    fn gcd_examples() {
        let c = example_a(2, 3);
        assert_eq!(gcd_multiplicity(&c, &set([1u32, 2])).unwrap(), 1);
        let c = example_a(4, 6);
        assert_eq!(gcd_multiplicity(&c, &set([1u32, 2])).unwrap(), 2);
        let single = Configuration::checked(
            1,
            [Component::new(1u32, 6)],
            [Stratum::torus(set([1u32]), RingElement::one())],
        )
        .unwrap();
        assert_eq!(gcd_multiplicity(&single, &set([1u32])).unwrap(), 6);
        assert!(matches!(
            gcd_multiplicity(&single, &set([7u32])),
            Err(Error::UnknownComponent(_))
        ));
    }

    #[test]
    fn cover_counts_and_classes() {
        let c = example_a(4, 6);
        assert_eq!(cover_component_count(&c, &set([1u32, 2])).unwrap(), 2);
        assert_eq!(cover_class(&c, &set([1u32])).unwrap(), &RingElement::mu(2) * &RingElement::torus(1));
        assert!(matches!(cover_component_count(&c, &set([3u32])), Err(Error::MissingStratum(_))));

        let isolated = Configuration::checked(
            3,
            [Component::new(1u32, -6)],
            [Stratum::torus(set([1u32]), RingElement::lefschetz())],
        )
        .unwrap();
        assert_eq!(cover_component_count(&isolated, &set([1u32])).unwrap(), 6);
        assert_eq!(
            cover_class(&isolated, &set([1u32])).unwrap(),
            &RingElement::mu(6) * &RingElement::lefschetz()
        );
    }

    #[test]
    fn explicit_and_unrepresentable_covers() {
        let x: RingElement = "[mu_3]*L - 2".parse().unwrap();
        let mut s = Stratum::torus(set([1u32]), RingElement::lefschetz());
        s.torus_cell = false;
        let c = Configuration::checked(2, [Component::new(1u32, 3)], [s.clone()]).unwrap();
        assert!(matches!(cover_class(&c, &set([1u32])), Err(Error::Unrepresentable { .. })));
        s.cover_class = Some(x.clone());
        let c = Configuration::checked(2, [Component::new(1u32, 3)], [s]).unwrap();
        assert_eq!(cover_class(&c, &set([1u32])).unwrap(), x);
    }

    #[test]
    fn numeric_ids_sort_numerically() {
        let s = set(["10", "2", "a", "1"]);
        assert_eq!(render_set(&s), "{1,2,10,a}");
    }
}
