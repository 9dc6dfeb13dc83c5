//! JSON file formats for configurations, blow-up centers and resolution
//! graphs. Component ids may be written as strings or integers.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::blowup::{BlowupCenter, CenterStratum};
use crate::config::{Component, ComponentId, ComponentSet, Configuration, Stratum};
use crate::error::{Error, Result};
use crate::milnor::{Arrow, ResolutionGraph, Vertex};
use crate::ring::RingElement;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Id {
    Num(u64),
    Str(String),
}

impl From<Id> for ComponentId {
    fn from(id: Id) -> Self {
        match id {
            Id::Num(n) => ComponentId::new(n.to_string()),
            Id::Str(s) => ComponentId::new(s),
        }
    }
}

impl From<&ComponentId> for Id {
    fn from(id: &ComponentId) -> Self {
        match id.as_str().parse::<u64>() {
            Ok(n) if n.to_string() == id.as_str() => Id::Num(n),
            _ => Id::Str(id.as_str().to_string()),
        }
    }
}

fn ids_in(v: Vec<Id>) -> ComponentSet {
    v.into_iter().map(ComponentId::from).collect()
}

fn ids_out(s: &ComponentSet) -> Vec<Id> {
    s.iter().map(Id::from).collect()
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentFile {
    id: Id,
    multiplicity: i64,
    #[serde(default, skip_serializing_if = "is_false")]
    exceptional: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StratumFile {
    components: Vec<Id>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    class: Option<Vec<(u32, i64)>>,
    euler: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    adjacency: Option<Vec<Id>>,
    torus_cell: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cover_class: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    ambient_dim: u32,
    components: Vec<ComponentFile>,
    strata: Vec<StratumFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CenterStratumFile {
    #[serde(default)]
    components: Vec<Id>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    class: Option<Vec<(u32, i64)>>,
    euler: i64,
    adjacency: Vec<Id>,
    torus_cell: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cover_class: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CenterFile {
    containing: Vec<Id>,
    #[serde(default)]
    transversal: Vec<Id>,
    codim: u32,
    is_full_intersection: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    center_strata: Vec<CenterStratumFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exceptional_id: Option<Id>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exceptional_multiplicity: Option<i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexFile {
    id: Id,
    multiplicity: i64,
    #[serde(default)]
    genus: u32,
    #[serde(default)]
    exceptional: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrowFile {
    vertex: Id,
    multiplicity: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    vertices: Vec<VertexFile>,
    #[serde(default)]
    edges: Vec<(Id, Id)>,
    #[serde(default)]
    arrows: Vec<ArrowFile>,
}

fn fmt_err(context: &str, e: impl std::fmt::Display) -> Error {
    Error::Format { context: context.to_string(), message: e.to_string() }
}

fn class_in(c: Option<Vec<(u32, i64)>>) -> Option<RingElement> {
    c.map(RingElement::l_poly)
}

fn class_out(c: &Option<RingElement>, context: &str) -> Result<Option<Vec<(u32, i64)>>> {
    let Some(c) = c else { return Ok(None) };
    let mut out = Vec::new();
    for (m, coeff) in c.terms() {
        if m.order != 1 {
            return Err(fmt_err(context, format!("class {c} carries an action")));
        }
        let v = coeff.to_i64().ok_or_else(|| fmt_err(context, "class coefficient exceeds 64 bits"))?;
        out.push((m.lpow, v));
    }
    out.sort_unstable_by_key(|t| t.0);
    Ok(Some(out))
}

fn ring_in(s: Option<String>, context: &str) -> Result<Option<RingElement>> {
    s.map(|s| s.parse::<RingElement>().map_err(|e| fmt_err(context, e))).transpose()
}

fn parse_config_file(text: &str) -> Result<Configuration> {
    let f: ConfigFile = serde_json::from_str(text).map_err(|e| fmt_err("configuration", e))?;
    let components = f.components.into_iter().map(|c| Component {
        id: c.id.into(),
        multiplicity: c.multiplicity,
        exceptional: c.exceptional,
    });
    let mut strata = Vec::new();
    for s in f.strata {
        let components = ids_in(s.components);
        let context = format!("stratum {}", crate::config::render_set(&components));
        strata.push(Stratum {
            adjacency: s.adjacency.map(ids_in).unwrap_or_else(|| components.clone()),
            components,
            class: class_in(s.class),
            euler: s.euler,
            torus_cell: s.torus_cell,
            cover_class: ring_in(s.cover_class, &context)?,
        });
    }
    Configuration::new(f.ambient_dim, components, strata)
}

/// Parses and validates a configuration.
pub fn config_from_json(text: &str) -> Result<Configuration> {
    let c = parse_config_file(text)?;
    c.ensure_valid()?;
    Ok(c)
}

/// Parses a configuration without running validation (duplicates are still rejected).
pub fn config_from_json_unchecked(text: &str) -> Result<Configuration> {
    parse_config_file(text)
}

pub fn config_to_json(c: &Configuration) -> Result<String> {
    let mut strata = Vec::new();
    for s in c.strata() {
        let context = format!("stratum {}", crate::config::render_set(&s.components));
        strata.push(StratumFile {
            components: ids_out(&s.components),
            class: class_out(&s.class, &context)?,
            euler: s.euler,
            adjacency: Some(ids_out(&s.adjacency)),
            torus_cell: s.torus_cell,
            cover_class: s.cover_class.as_ref().map(|x| x.to_string()),
        });
    }
    let f = ConfigFile {
        ambient_dim: c.ambient_dim(),
        components: c
            .components()
            .map(|x| ComponentFile { id: (&x.id).into(), multiplicity: x.multiplicity, exceptional: x.exceptional })
            .collect(),
        strata,
    };
    serde_json::to_string_pretty(&f).map_err(|e| fmt_err("configuration", e))
}

pub fn center_from_json(text: &str) -> Result<BlowupCenter> {
    let f: CenterFile = serde_json::from_str(text).map_err(|e| fmt_err("center", e))?;
    let mut center_strata = Vec::new();
    for s in f.center_strata {
        let k = ids_in(s.components);
        let context = format!("center stratum {}", crate::config::render_set(&k));
        center_strata.push(CenterStratum {
            transversal: k,
            class: class_in(s.class),
            euler: s.euler,
            adjacency: ids_in(s.adjacency),
            torus_cell: s.torus_cell,
            cover_class: ring_in(s.cover_class, &context)?,
        });
    }
    Ok(BlowupCenter {
        containing: ids_in(f.containing),
        transversal: ids_in(f.transversal),
        codim: f.codim,
        is_full_intersection: f.is_full_intersection,
        center_strata,
        exceptional_id: f.exceptional_id.map(Into::into),
        exceptional_multiplicity: f.exceptional_multiplicity,
    })
}

pub fn center_to_json(c: &BlowupCenter) -> Result<String> {
    let mut center_strata = Vec::new();
    for s in &c.center_strata {
        center_strata.push(CenterStratumFile {
            components: ids_out(&s.transversal),
            class: class_out(&s.class, "center stratum")?,
            euler: s.euler,
            adjacency: ids_out(&s.adjacency),
            torus_cell: s.torus_cell,
            cover_class: s.cover_class.as_ref().map(|x| x.to_string()),
        });
    }
    let f = CenterFile {
        containing: ids_out(&c.containing),
        transversal: ids_out(&c.transversal),
        codim: c.codim,
        is_full_intersection: c.is_full_intersection,
        center_strata,
        exceptional_id: c.exceptional_id.as_ref().map(Into::into),
        exceptional_multiplicity: c.exceptional_multiplicity,
    };
    serde_json::to_string_pretty(&f).map_err(|e| fmt_err("center", e))
}

pub fn graph_from_json(text: &str) -> Result<ResolutionGraph> {
    let f: GraphFile = serde_json::from_str(text).map_err(|e| fmt_err("resolution graph", e))?;
    let g = ResolutionGraph {
        vertices: f
            .vertices
            .into_iter()
            .map(|v| Vertex { id: v.id.into(), multiplicity: v.multiplicity, genus: v.genus, exceptional: v.exceptional })
            .collect(),
        edges: f.edges.into_iter().map(|(a, b)| (a.into(), b.into())).collect(),
        arrows: f
            .arrows
            .into_iter()
            .map(|a| Arrow { vertex: a.vertex.into(), multiplicity: a.multiplicity })
            .collect(),
    };
    g.validate()?;
    Ok(g)
}

pub fn graph_to_json(g: &ResolutionGraph) -> Result<String> {
    let f = GraphFile {
        vertices: g
            .vertices
            .iter()
            .map(|v| VertexFile { id: (&v.id).into(), multiplicity: v.multiplicity, genus: v.genus, exceptional: v.exceptional })
            .collect(),
        edges: g.edges.iter().map(|(a, b)| (a.into(), b.into())).collect(),
        arrows: g.arrows.iter().map(|a| ArrowFile { vertex: (&a.vertex).into(), multiplicity: a.multiplicity }).collect(),
    };
    serde_json::to_string_pretty(&f).map_err(|e| fmt_err("resolution graph", e))
}

/// True when the JSON text looks like a resolution graph rather than a configuration.
pub fn is_graph_json(text: &str) -> bool {
    serde_json::from_str::<serde_json::Value>(text)
        .map(|v| v.get("vertices").is_some())
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE_A: &str = r#"{
        "ambient_dim": 2,
        "components": [{"id": 1, "multiplicity": 2}, {"id": "2", "multiplicity": 3}],
        "strata": [
            {"components": [1], "class": [[1, 1], [0, -1]], "euler": 0, "adjacency": [1, 2], "torus_cell": true},
            {"components": [2], "class": [[1, 1], [0, -1]], "euler": 0, "adjacency": [1, 2], "torus_cell": true},
            {"components": [1, 2], "class": [[0, 1]], "euler": 1, "adjacency": [1, 2], "torus_cell": true}
        ]
    }"#;

    #[test]
    fn config_round_trip() {
        let c = config_from_json(EXAMPLE_A).unwrap();
        let text = config_to_json(&c).unwrap();
        assert_eq!(config_from_json(&text).unwrap(), c);
    }

    #[test]
    fn parse_errors_name_fields() {
        let e = config_from_json(&EXAMPLE_A.replace("\"euler\": 1,", "")).unwrap_err();
        assert!(e.to_string().contains("euler"), "{e}");
        let e = config_from_json(&EXAMPLE_A.replace("torus_cell\": true}\n        ]", "torus_cell\": true, \"colour\": 1}\n        ]")).unwrap_err();
        assert!(e.to_string().contains("colour"), "{e}");
    }

    #[test]
    fn invalid_config_rejected() {
        let text = EXAMPLE_A.replace("\"multiplicity\": 2", "\"multiplicity\": 0");
        assert!(matches!(config_from_json(&text), Err(Error::InvalidConfiguration(_))));
        assert!(config_from_json_unchecked(&text).is_ok());
    }

    #[test]
    fn center_round_trip() {
        let text = r#"{"containing": [1, 2], "codim": 3, "is_full_intersection": false,
            "center_strata": [{"components": [], "class": [[0, 1]], "euler": 1, "adjacency": [1, 2], "torus_cell": true}]}"#;
        let c = center_from_json(text).unwrap();
        assert_eq!(center_from_json(&center_to_json(&c).unwrap()).unwrap(), c);
    }

    #[test]
    fn graph_detection() {
        assert!(is_graph_json(r#"{"vertices": []}"#));
        assert!(!is_graph_json(EXAMPLE_A));
    }
}
