//! Plane-curve frontend: embedded-resolution dual graphs, the motivic Milnor
//! fiber `S_{f,x} = S^A` with `A` the exceptional components, and A'Campo's
//! zeta function.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;

use crate::config::{render_set, Component, ComponentId, ComponentSet, Configuration, Stratum};
use crate::error::{Error, Result};
use crate::motive::{motive, motive_expansion, MotiveExpansion};
use crate::realization::{zeta_closed_form, CyclotomicRational};
use crate::ring::RingElement;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: ComponentId,
    pub multiplicity: i64,
    pub genus: u32,
    pub exceptional: bool,
}

/// A strict-transform branch meeting `vertex`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub vertex: ComponentId,
    pub multiplicity: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResolutionGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(ComponentId, ComponentId)>,
    pub arrows: Vec<Arrow>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MilnorSelection {
    /// All exceptional vertices.
    Exceptional,
    Ids(ComponentSet),
}

impl ResolutionGraph {
    pub fn vertex(&self, id: &ComponentId) -> Option<&Vertex> {
        self.vertices.iter().find(|v| &v.id == id)
    }

    /// Component id of the `i`-th arrow (0-based).
    pub fn arrow_id(i: usize) -> ComponentId {
        ComponentId::new(format!("arrow{}", i + 1))
    }

    /// Multiplicities of the neighbors of `id`, over edges and arrows.
    pub fn neighbor_multiplicities(&self, id: &ComponentId) -> Vec<i64> {
        let mult = |x: &ComponentId| self.vertex(x).map(|v| v.multiplicity).unwrap_or(0);
        let mut out = Vec::new();
        for (a, b) in &self.edges {
            if a == id {
                out.push(mult(b));
            } else if b == id {
                out.push(mult(a));
            }
        }
        out.extend(self.arrows.iter().filter(|a| &a.vertex == id).map(|a| a.multiplicity));
        out
    }

    pub fn valence(&self, id: &ComponentId) -> usize {
        self.neighbor_multiplicities(id).len()
    }

    /// `chi(E°_v) = 2 - 2g - valence`.
    pub fn vertex_euler(&self, id: &ComponentId) -> Option<i64> {
        self.vertex(id).map(|v| 2 - 2 * v.genus as i64 - self.valence(id) as i64)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |s: String| Err(Error::InvalidGraph(s));
        if self.vertices.is_empty() {
            return bad("graph has no vertices".into());
        }
        let mut ids = BTreeSet::new();
        for v in &self.vertices {
            if !ids.insert(v.id.clone()) {
                return bad(format!("duplicate vertex {}", v.id));
            }
            if v.multiplicity < 1 {
                return bad(format!("vertex {} has multiplicity {}", v.id, v.multiplicity));
            }
        }
        for i in 0..self.arrows.len() {
            let a = Self::arrow_id(i);
            if ids.contains(&a) {
                return bad(format!("vertex id {a} is reserved for arrows"));
            }
        }
        let mut seen = BTreeSet::new();
        for (a, b) in &self.edges {
            for x in [a, b] {
                if !ids.contains(x) {
                    return bad(format!("edge references unknown vertex {x}"));
                }
            }
            if a == b {
                return bad(format!("self-loop at {a}"));
            }
            let key = if a < b { (a, b) } else { (b, a) };
            if !seen.insert(key) {
                return bad(format!("duplicate edge {a}-{b}"));
            }
        }
        for a in &self.arrows {
            if !ids.contains(&a.vertex) {
                return bad(format!("arrow on unknown vertex {}", a.vertex));
            }
            if a.multiplicity < 1 {
                return bad(format!("arrow on {} has multiplicity {}", a.vertex, a.multiplicity));
            }
        }
        let mut reached = BTreeSet::from([self.vertices[0].id.clone()]);
        let mut stack = vec![self.vertices[0].id.clone()];
        while let Some(x) = stack.pop() {
            for (a, b) in &self.edges {
                let next = if a == &x {
                    b
                } else if b == &x {
                    a
                } else {
                    continue;
                };
                if reached.insert(next.clone()) {
                    stack.push(next.clone());
                }
            }
        }
        if reached.len() != ids.len() {
            return bad("graph is not connected".into());
        }
        for v in self.vertices.iter().filter(|v| v.exceptional) {
            let sum: i64 = self.neighbor_multiplicities(&v.id).iter().sum();
            if sum % v.multiplicity != 0 {
                return bad(format!(
                    "exceptional vertex {}: neighbor multiplicities sum to {sum}, not divisible by {}",
                    v.id, v.multiplicity
                ));
            }
        }
        Ok(())
    }

    pub fn resolve(&self, sel: &MilnorSelection) -> Result<ComponentSet> {
        let a: ComponentSet = match sel {
            MilnorSelection::Exceptional => {
                self.vertices.iter().filter(|v| v.exceptional).map(|v| v.id.clone()).collect()
            }
            MilnorSelection::Ids(ids) => ids.clone(),
        };
        if a.is_empty() {
            return Err(Error::EmptySelection);
        }
        Ok(a)
    }
}

/// Components and genus of the cyclic cover of `P^1` minus `v` points with
/// holonomy `m` around the punctures and monodromy values `around` on the
/// small loops. Returns `(components, genus of each component)`.
pub fn cyclic_cover_genus(m: u64, around: &[u64]) -> Result<(u64, u64)> {
    let n = around.iter().fold(m, |g, x| g.gcd(x));
    let v = around.len() as i64;
    let compact_euler: i64 = m as i64 * (2 - v) + around.iter().map(|x| x.gcd(&m) as i64).sum::<i64>();
    let per = compact_euler.checked_div(n as i64).filter(|_| compact_euler % (2 * n as i64) == 0);
    match per {
        Some(chi) if chi <= 2 => Ok((n, (1 - chi / 2) as u64)),
        _ => Err(Error::InvalidGraph(format!(
            "holonomy {m} with local values {around:?} defines no cyclic cover"
        ))),
    }
}

/// Configuration of the divisor `(f ∘ p)^{-1}(0)` near the exceptional locus.
///
/// Arrows become components `arrow1, arrow2, ...`; their open strata are
/// punctured disks without a class. A vertex with valence at least three
/// gets an explicit cover class when the connected components of its cover
/// are rational, and is left unrepresentable otherwise.
pub fn graph_to_config(g: &ResolutionGraph) -> Result<Configuration> {
    g.validate()?;
    let mult: BTreeMap<&ComponentId, i64> = g.vertices.iter().map(|v| (&v.id, v.multiplicity)).collect();
    let mut components: Vec<Component> = g
        .vertices
        .iter()
        .map(|v| Component { id: v.id.clone(), multiplicity: v.multiplicity, exceptional: v.exceptional })
        .collect();
    let mut strata = Vec::new();
    let mut nbrs: BTreeMap<&ComponentId, ComponentSet> = BTreeMap::new();
    for (a, b) in &g.edges {
        nbrs.entry(a).or_default().insert(b.clone());
        nbrs.entry(b).or_default().insert(a.clone());
        let pair: ComponentSet = [a.clone(), b.clone()].into();
        strata.push(Stratum::torus(pair, RingElement::one()));
    }
    for (i, arrow) in g.arrows.iter().enumerate() {
        let id = ResolutionGraph::arrow_id(i);
        components.push(Component::new(id.clone(), arrow.multiplicity));
        nbrs.entry(&arrow.vertex).or_default().insert(id.clone());
        let pair: ComponentSet = [arrow.vertex.clone(), id.clone()].into();
        strata.push(Stratum::torus(pair.clone(), RingElement::one()));
        strata.push(Stratum {
            components: [id.clone()].into(),
            class: None,
            euler: 0,
            adjacency: pair,
            torus_cell: false,
            cover_class: None,
        });
    }
    for v in &g.vertices {
        let valence = g.valence(&v.id);
        let mut adjacency = nbrs.get(&v.id).cloned().unwrap_or_default();
        adjacency.insert(v.id.clone());
        let euler = 2 - 2 * v.genus as i64 - valence as i64;
        let single: ComponentSet = [v.id.clone()].into();
        let stratum = if v.genus > 0 {
            Stratum { components: single, class: None, euler, adjacency, torus_cell: false, cover_class: None }
        } else {
            let class = RingElement::l_poly([(1u32, 1i64), (0, 1 - valence as i64)]);
            if valence <= 2 {
                Stratum::torus(single, class).with_adjacency(adjacency)
            } else {
                let m = mult[&v.id] as u64;
                let around: Vec<u64> = g.neighbor_multiplicities(&v.id).iter().map(|x| *x as u64).collect();
                let (n, genus) = cyclic_cover_genus(m, &around)?;
                let cover_class = (genus == 0).then(|| {
                    let mut c = &RingElement::mu(n) * &RingElement::l_poly([(1u32, 1i64), (0, 1)]);
                    for x in &around {
                        c -= &RingElement::mu(x.gcd(&m));
                    }
                    c
                });
                Stratum { components: single, class: Some(class), euler, adjacency, torus_cell: false, cover_class }
            }
        };
        strata.push(stratum);
    }
    let config = Configuration::new(2, components, strata)?;
    config.ensure_valid()?;
    Ok(config)
}

fn setup(g: &ResolutionGraph, sel: &MilnorSelection) -> Result<(Configuration, ComponentSet)> {
    let config = graph_to_config(g)?;
    let a = g.resolve(sel)?;
    Ok((config, a))
}

/// `S^A` of the resolution; fails when a selected stratum has a cover of
/// positive genus.
pub fn motivic_milnor_fiber(g: &ResolutionGraph, sel: &MilnorSelection) -> Result<RingElement> {
    let (config, a) = setup(g, sel)?;
    motive(&config, &a)
}

/// Like [`motivic_milnor_fiber`] but keeps unrepresentable strata as data.
pub fn milnor_fiber_expansion(g: &ResolutionGraph, sel: &MilnorSelection) -> Result<MotiveExpansion> {
    let (config, a) = setup(g, sel)?;
    motive_expansion(&config, &a)
}

/// Euler characteristic of the Milnor fiber.
pub fn milnor_euler(g: &ResolutionGraph, sel: &MilnorSelection) -> Result<BigInt> {
    Ok(milnor_fiber_expansion(g, sel)?.euler())
}

/// A'Campo's formula `prod_{i in A} (1 - t^{m_i})^{-chi(E°_i)}`.
pub fn acampo_zeta(g: &ResolutionGraph, sel: &MilnorSelection) -> Result<CyclotomicRational> {
    let (config, a) = setup(g, sel)?;
    zeta_closed_form(&config, &a)
}

/// Human-readable list of selected strata that only admit realization output.
pub fn unrepresentable_strata(x: &MotiveExpansion) -> Vec<String> {
    x.residual.iter().map(|r| render_set(&r.stratum)).collect()
}
