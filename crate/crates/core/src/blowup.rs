//! Blow-ups of a configuration along a smooth center `Z` with normal
//! crossings, and the invariance check comparing motives before and after.
//!
//! Over a point of `Z°_K = Z ∩ E°_{I∪K}` the exceptional divisor has fibre
//! `P^r` (`r + 1 = codim Z`), cut by the `k = |I|` coordinate hyperplanes of
//! the proper transforms of `E_i`, `i in I`. The part of the fibre lying on
//! exactly the transforms indexed by `G ⊆ I` has class
//!
//! ```text
//! L^{r-k+1} (L-1)^{k-|G|-1}   if G != I
//! [P^{r-k}]                   if G == I
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::config::{
    eval_euler, gcd_over, recipe_cover, render_set, stratum_cover, validate, Component, ComponentId,
    ComponentSet, Configuration, Diagnostic, DiagnosticKind, Stratum,
};
use crate::error::{Error, Result};
use crate::motive::{breakdown_unchecked, expansion_unchecked, MotiveExpansion, StratumTerm};
use crate::ring::{projective_class, RingElement};

/// Data of `Z°_K` for a subset `K` of the transversal components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterStratum {
    pub transversal: ComponentSet,
    pub class: Option<RingElement>,
    pub euler: i64,
    pub adjacency: ComponentSet,
    pub torus_cell: bool,
    pub cover_class: Option<RingElement>,
}

impl CenterStratum {
    pub fn torus(transversal: ComponentSet, class: RingElement, adjacency: ComponentSet) -> Self {
        CenterStratum {
            transversal,
            euler: eval_euler(&class),
            class: Some(class),
            adjacency,
            torus_cell: true,
            cover_class: None,
        }
    }

    fn from_stratum(k: ComponentSet, s: &Stratum) -> Self {
        CenterStratum {
            transversal: k,
            class: s.class.clone(),
            euler: s.euler,
            adjacency: s.adjacency.clone(),
            torus_cell: s.torus_cell,
            cover_class: s.cover_class.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupCenter {
    /// Components containing `Z`.
    pub containing: ComponentSet,
    /// Components meeting `Z` transversally.
    pub transversal: ComponentSet,
    pub codim: u32,
    /// `Z = E_I`; center data is then read from the configuration.
    pub is_full_intersection: bool,
    /// Required unless `is_full_intersection`.
    pub center_strata: Vec<CenterStratum>,
    /// Name for the exceptional component; generated when absent.
    pub exceptional_id: Option<ComponentId>,
    /// Replaces `sum_{i in I} m_i`. Only meant for negative testing.
    pub exceptional_multiplicity: Option<i64>,
}

impl BlowupCenter {
    /// `Z = E_I` with the given transversal components.
    pub fn full(containing: ComponentSet, transversal: ComponentSet) -> Self {
        BlowupCenter {
            codim: containing.len() as u32,
            containing,
            transversal,
            is_full_intersection: true,
            center_strata: Vec::new(),
            exceptional_id: None,
            exceptional_multiplicity: None,
        }
    }

    /// `Z ⊊ E_I` of codimension `codim` with explicit stratum data.
    pub fn strict(
        containing: ComponentSet,
        transversal: ComponentSet,
        codim: u32,
        center_strata: Vec<CenterStratum>,
    ) -> Self {
        BlowupCenter {
            containing,
            transversal,
            codim,
            is_full_intersection: false,
            center_strata,
            exceptional_id: None,
            exceptional_multiplicity: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blowup {
    pub config: Configuration,
    pub exceptional: ComponentId,
}

fn fresh_id(config: &Configuration, requested: Option<&ComponentId>) -> ComponentId {
    if let Some(id) = requested {
        return id.clone();
    }
    let star = ComponentId::new("*");
    if config.component(&star).is_none() {
        return star;
    }
    (2u32..)
        .map(|i| ComponentId::new(format!("*{i}")))
        .find(|id| config.component(id).is_none())
        .unwrap()
}

fn union(a: &ComponentSet, b: &ComponentSet) -> ComponentSet {
    a.union(b).cloned().collect()
}

/// Center strata data, read from the configuration for full intersections.
fn center_data(config: &Configuration, center: &BlowupCenter) -> Vec<CenterStratum> {
    if center.is_full_intersection {
        config
            .strata()
            .filter(|s| center.containing.is_subset(&s.components))
            .map(|s| {
                let k = s.components.difference(&center.containing).cloned().collect();
                CenterStratum::from_stratum(k, s)
            })
            .collect()
    } else {
        center.center_strata.clone()
    }
}

/// Diagnostics for a center relative to a configuration; empty when admissible.
pub fn validate_center(config: &Configuration, center: &BlowupCenter) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut bad = |subject: &str, detail: String| {
        out.push(Diagnostic::new(DiagnosticKind::InvalidCenter, subject, detail));
    };
    let i_set = &center.containing;
    let k = i_set.len() as u32;
    let n = config.ambient_dim();
    if i_set.is_empty() {
        bad("containing", "center must lie on at least one component".into());
    }
    for id in i_set.iter().chain(center.transversal.iter()) {
        if config.component(id).is_none() {
            bad("center", format!("unknown component {id}"));
        }
    }
    if !i_set.is_disjoint(&center.transversal) {
        bad("center", "containing and transversal components overlap".into());
    }
    if let Some(id) = &center.exceptional_id {
        if config.component(id).is_some() {
            bad("exceptional_id", format!("{id} is already a component"));
        }
    }
    if center.codim < 2 || center.codim > n {
        bad("codim", format!("codimension {} outside [2, {n}]", center.codim));
    }
    if center.codim < k {
        bad("codim", format!("codimension {} below |I| = {k}", center.codim));
    }
    if !i_set.is_empty() && config.stratum(i_set).is_none() {
        bad("containing", format!("no stratum {}", render_set(i_set)));
    }
    if center.is_full_intersection {
        if center.codim != k {
            bad("codim", format!("full intersection needs codimension |I| = {k}"));
        }
        if !center.center_strata.is_empty() {
            bad("center_strata", "full intersections take center data from the configuration".into());
        }
        for s in config.strata().filter(|s| i_set.is_subset(&s.components)) {
            if !s.components.difference(i_set).all(|c| center.transversal.contains(c)) {
                bad(
                    &render_set(&s.components),
                    "stratum inside the center involves a non-transversal component".into(),
                );
            }
        }
        return out;
    }
    if center.codim <= k {
        bad("codim", format!("strict center needs codimension above |I| = {k}"));
    }
    let keys: BTreeSet<&ComponentSet> = center.center_strata.iter().map(|c| &c.transversal).collect();
    if keys.len() != center.center_strata.len() {
        bad("center_strata", "duplicate center stratum".into());
    }
    if !keys.contains(&ComponentSet::new()) {
        bad("center_strata", "missing the stratum with K = {}".into());
    }
    let mult = |id: &ComponentId| config.multiplicity(id);
    for cs in &center.center_strata {
        let name = format!("center {}", render_set(&cs.transversal));
        if !cs.transversal.is_subset(&center.transversal) {
            bad(&name, "K is not contained in the transversal components".into());
            continue;
        }
        for drop in &cs.transversal {
            let mut sub = cs.transversal.clone();
            sub.remove(drop);
            if !keys.contains(&sub) {
                bad(&name, format!("missing center stratum {}", render_set(&sub)));
            }
        }
        let full = union(i_set, &cs.transversal);
        let ambient = config.stratum(&full);
        if ambient.is_none() {
            bad(&name, format!("no ambient stratum {}", render_set(&full)));
        }
        if let Some(id) = cs.adjacency.iter().find(|id| config.component(id).is_none()) {
            bad(&name, format!("adjacency references unknown component {id}"));
            continue;
        }
        if !full.is_subset(&cs.adjacency) {
            bad(&name, "adjacency must contain I and K".into());
        }
        match &cs.class {
            Some(c) => {
                if !c.has_trivial_action() {
                    bad(&name, format!("class {c} carries an action"));
                }
                if c.eval_l_at_one() != cs.euler.into() {
                    bad(&name, format!("Euler/class mismatch: euler {} for class {c}", cs.euler));
                }
                let room = n as i64 - center.codim as i64 - cs.transversal.len() as i64;
                if c.l_degree().is_some_and(|d| d as i64 > room) {
                    bad(&name, format!("class degree exceeds stratum dimension {room}"));
                }
            }
            None if cs.torus_cell => bad(&name, "torus cells need a class".into()),
            None => {}
        }
        let computed = cs.torus_cell && cs.cover_class.is_none();
        let n_center = gcd_over(&cs.adjacency, mult).unwrap_or(0);
        if computed && cs.euler != 0 {
            let m = gcd_over(&full, mult).unwrap_or(0);
            if n_center != m {
                bad(&name, format!("cover recipe mismatch: {n_center} components, m = {m}"));
            }
        }
    }
    out
}

fn subsets(items: &[ComponentId]) -> impl Iterator<Item = ComponentSet> + '_ {
    (0u32..(1 << items.len())).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|(j, _)| mask & (1 << j) != 0)
            .map(|(_, id)| id.clone())
            .collect()
    })
}

/// Class of the part of the exceptional fibre lying exactly on the proper
/// transforms indexed by `g` (`g_len = |G|`).
fn fibre_class(r: u32, k: u32, g_len: u32) -> RingElement {
    if g_len < k {
        &RingElement::lefschetz().pow(r + 1 - k) * &RingElement::torus(k - g_len - 1)
    } else {
        projective_class(r - k)
    }
}

fn decrement(
    config: &Configuration,
    ambient: &Stratum,
    cs: &CenterStratum,
) -> Result<Stratum> {
    let mult = |id: &ComponentId| config.multiplicity(id);
    let amb_cover = stratum_cover(config, ambient)?;
    let center_cover = recipe_cover(
        &ambient.components,
        cs.class.as_ref(),
        cs.torus_cell,
        cs.cover_class.as_ref(),
        &cs.adjacency,
        mult,
    )?;
    let class = match (&ambient.class, &cs.class) {
        (Some(a), Some(c)) => Some(a - c),
        _ => None,
    };
    let euler = ambient.euler - cs.euler;
    let torus_cell = ambient.torus_cell && class.is_some();
    let n_ambient = gcd_over(&ambient.adjacency, mult)?;
    let recipe_ok = torus_cell
        && n_ambient == gcd_over(&cs.adjacency, mult)?
        && (euler == 0 || n_ambient == gcd_over(&ambient.components, mult)?);
    let needs_explicit = ambient.cover_class.is_some() || cs.cover_class.is_some() || !recipe_ok;
    Ok(Stratum {
        components: ambient.components.clone(),
        class,
        euler,
        adjacency: ambient.adjacency.clone(),
        torus_cell,
        cover_class: needs_explicit.then(|| amb_cover - center_cover),
    })
}

/// Configuration of the blow-up along `center`.
pub fn blowup(config: &Configuration, center: &BlowupCenter) -> Result<Blowup> {
    config.ensure_valid()?;
    let diags = validate_center(config, center);
    if !diags.is_empty() {
        return Err(Error::InvalidCenter(diags));
    }
    let i_set = &center.containing;
    let k = i_set.len() as u32;
    let r = center.codim - 1;
    let star = fresh_id(config, center.exceptional_id.as_ref());
    let m_star = center
        .exceptional_multiplicity
        .unwrap_or_else(|| i_set.iter().map(|id| config.multiplicity(id).unwrap()).sum());

    let mut components = config.components_map().clone();
    components.insert(
        star.clone(),
        Component { id: star.clone(), multiplicity: m_star, exceptional: true },
    );

    let data = center_data(config, center);
    let by_k: BTreeMap<&ComponentSet, &CenterStratum> = data.iter().map(|c| (&c.transversal, c)).collect();

    let mut strata = BTreeMap::new();
    for (h, s) in config.strata_map() {
        if !i_set.is_subset(h) {
            strata.insert(h.clone(), s.clone());
            continue;
        }
        if center.is_full_intersection {
            continue;
        }
        let kk: ComponentSet = h.difference(i_set).cloned().collect();
        let replaced = match by_k.get(&kk) {
            Some(cs) => decrement(config, s, cs)?,
            None => s.clone(),
        };
        strata.insert(h.clone(), replaced);
    }

    let i_vec: Vec<ComponentId> = i_set.iter().cloned().collect();
    let star_set: ComponentSet = [star.clone()].into();
    for cs in &data {
        for g in subsets(&i_vec) {
            let g_len = g.len() as u32;
            if g_len == k && center.is_full_intersection {
                continue;
            }
            let fibre = fibre_class(r, k, g_len);
            let fibre_euler = eval_euler(&fibre);
            let components = union(&union(&g, &cs.transversal), &star_set);
            strata.insert(
                components.clone(),
                Stratum {
                    components,
                    class: cs.class.as_ref().map(|c| c * &fibre),
                    euler: cs.euler * fibre_euler,
                    adjacency: union(&cs.adjacency, &star_set),
                    torus_cell: cs.torus_cell,
                    cover_class: cs.cover_class.as_ref().map(|x| x * &fibre),
                },
            );
        }
    }

    let out = Configuration::from_maps(config.ambient_dim(), components, strata);
    if center.exceptional_multiplicity.is_none() {
        let d = validate(&out);
        if !d.is_empty() {
            return Err(Error::InvalidCenter(d));
        }
    }
    Ok(Blowup { config: out, exceptional: star })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug)]
pub struct InvarianceReport {
    pub verdict: Verdict,
    pub exceptional: ComponentId,
    pub selection: ComponentSet,
    /// `A'`: the selection on the blown-up side.
    pub selection_after: ComponentSet,
    pub before: MotiveExpansion,
    pub after: MotiveExpansion,
    /// Known part of `before - after`.
    pub difference: RingElement,
    pub terms_before: Vec<StratumTerm>,
    pub terms_after: Vec<StratumTerm>,
    pub blown_up: Configuration,
}

impl fmt::Display for InvarianceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.verdict)?;
        writeln!(f, "exceptional component: {}", self.exceptional)?;
        writeln!(f, "A  = {}", render_set(&self.selection))?;
        writeln!(f, "A' = {}", render_set(&self.selection_after))?;
        writeln!(f, "before: {}", self.before.known)?;
        writeln!(f, "after:  {}", self.after.known)?;
        if !self.before.residual.is_empty() || !self.after.residual.is_empty() {
            writeln!(
                f,
                "residual strata: {} before, {} after",
                self.before.residual.len(),
                self.after.residual.len()
            )?;
        }
        if self.verdict == Verdict::Fail {
            writeln!(f, "difference: {}", self.difference)?;
            writeln!(f, "terms before:")?;
            for t in &self.terms_before {
                writeln!(f, "  {t}")?;
            }
            writeln!(f, "terms after:")?;
            for t in &self.terms_after {
                writeln!(f, "  {t}")?;
            }
        }
        Ok(())
    }
}

fn representable_terms(config: &Configuration, a: &ComponentSet) -> Vec<StratumTerm> {
    let mut out = Vec::new();
    for s in config.strata().filter(|s| !s.components.is_disjoint(a)) {
        let one = |t: &Stratum| t.components == s.components;
        if let Ok(mut v) = breakdown_unchecked(config, one) {
            out.append(&mut v);
        }
    }
    out
}

/// Compares `S^A` before the blow-up with `S^{A'}` after it, where `A'`
/// gains the exceptional component exactly when `A` meets `I`.
pub fn check_invariance(
    config: &Configuration,
    center: &BlowupCenter,
    a: &ComponentSet,
) -> Result<InvarianceReport> {
    config.ensure_valid()?;
    if a.is_empty() {
        return Err(Error::EmptySelection);
    }
    if let Some(id) = a.iter().find(|id| config.component(id).is_none()) {
        return Err(Error::UnknownComponent(id.clone()));
    }
    let before = expansion_unchecked(config, a)?;
    let Blowup { config: after_cfg, exceptional } = blowup(config, center)?;
    let mut a_after = a.clone();
    if !a.is_disjoint(&center.containing) {
        a_after.insert(exceptional.clone());
    }
    let after = expansion_unchecked(&after_cfg, &a_after)?;
    let difference = &before.known - &after.known;
    let verdict = if difference.is_zero() && before.residual_signature() == after.residual_signature() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(InvarianceReport {
        verdict,
        terms_before: representable_terms(config, a),
        terms_after: representable_terms(&after_cfg, &a_after),
        exceptional,
        selection: a.clone(),
        selection_after: a_after,
        before,
        after,
        difference,
        blown_up: after_cfg,
    })
}
