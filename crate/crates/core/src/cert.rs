//! JSON form of [`LargeFlameCertificate`].
//!
//! Vertices are written by id. `vertex_map` sends every id to its dense
//! index, so isolated vertices survive the trip. Two keys beyond the core
//! schema, `host_edges` and `start_edges`, make the certificate checkable on
//! its own.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::digraph::{Digraph, Edge, EdgeSet, RootedDigraph, Vertex, VertexSet};
use crate::error::{FlameError, Result};
use crate::extend::{LargeFlameCertificate, Mode};
use crate::menger::Path;

fn names(d: &Digraph, p: &[Vertex]) -> Value {
    Value::from(p.iter().map(|&v| d.name(v).to_string()).collect::<Vec<_>>())
}

fn edges(d: &Digraph, es: &EdgeSet) -> Value {
    Value::from(es.iter().map(|&(t, h)| names(d, &[t, h])).collect::<Vec<_>>())
}

pub fn to_json(cert: &LargeFlameCertificate) -> Value {
    let d = cert.host.graph();
    let vertex_map: Map<String, Value> =
        d.vertices().iter().map(|&v| (d.name(v).to_string(), json!(v))).collect();
    let flame_witnesses: Map<String, Value> = cert
        .flame_witnesses
        .iter()
        .map(|(&v, w)| {
            let paths: Vec<Value> = w.system.paths.iter().map(|p| names(d, p)).collect();
            (d.name(v).to_string(), Value::from(paths))
        })
        .collect();
    let largeness_witnesses: Map<String, Value> = cert
        .largeness_witnesses
        .iter()
        .map(|(&v, w)| {
            let paths: Vec<Value> = w.pair.system.paths.iter().map(|p| names(d, p)).collect();
            let sep: Vec<Vertex> = w.pair.separation.vertices.iter().copied().collect();
            (d.name(v).to_string(), json!({ "paths": paths, "separation": names(d, &sep) }))
        })
        .collect();
    json!({
        "root": d.name(cert.host.root()),
        "vertex_map": vertex_map,
        "f_star_edges": edges(d, cert.flame.edge_set()),
        "host_edges": edges(d, cert.host.edge_set()),
        "start_edges": edges(d, cert.start.edge_set()),
        "flame_witnesses": flame_witnesses,
        "largeness_witnesses": largeness_witnesses,
        "mode": cert.mode.as_str(),
        "vertex_order": names(d, &cert.vertex_order),
        "seed": cert.seed,
    })
}

/// The graphs and witnesses read back from a certificate.
#[derive(Clone, Debug)]
pub struct ParsedCertificate {
    pub host: RootedDigraph,
    pub start: RootedDigraph,
    pub flame: RootedDigraph,
    pub flame_witnesses: BTreeMap<Vertex, Vec<Path>>,
    pub largeness_witnesses: BTreeMap<Vertex, (Vec<Path>, VertexSet)>,
    pub mode: Mode,
    pub seed: Option<u64>,
}

fn bad(msg: impl Into<String>) -> FlameError {
    FlameError::domain(format!("malformed certificate: {}", msg.into()))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing `{key}`")))
}

struct Reader {
    index: BTreeMap<String, Vertex>,
}

impl Reader {
    fn vertex(&self, v: &Value) -> Result<Vertex> {
        let s = v.as_str().ok_or_else(|| bad("vertex ids must be strings"))?;
        self.index.get(s).copied().ok_or_else(|| bad(format!("unknown vertex `{s}`")))
    }

    fn list(&self, v: &Value) -> Result<Vec<Vertex>> {
        v.as_array().ok_or_else(|| bad("expected an array"))?.iter().map(|x| self.vertex(x)).collect()
    }

    fn edges(&self, v: &Value) -> Result<EdgeSet> {
        let mut out = EdgeSet::new();
        for e in v.as_array().ok_or_else(|| bad("edges must be an array"))? {
            let pair = self.list(e)?;
            if pair.len() != 2 {
                return Err(bad("edges are pairs"));
            }
            out.insert((pair[0], pair[1]) as Edge);
        }
        Ok(out)
    }

    fn paths(&self, v: &Value) -> Result<Vec<Path>> {
        v.as_array().ok_or_else(|| bad("paths must be an array"))?.iter().map(|p| self.list(p)).collect()
    }
}

pub fn from_json(v: &Value) -> Result<ParsedCertificate> {
    let map = field(v, "vertex_map")?.as_object().ok_or_else(|| bad("`vertex_map` must be an object"))?;
    let mut index = BTreeMap::new();
    let mut slots: BTreeMap<Vertex, String> = BTreeMap::new();
    for (name, i) in map {
        let i = i.as_u64().ok_or_else(|| bad("vertex indices must be integers"))? as Vertex;
        if slots.insert(i, name.clone()).is_some() {
            return Err(bad("duplicate vertex index"));
        }
        index.insert(name.clone(), i);
    }
    let universe = slots.keys().next_back().map_or(0, |m| m + 1);
    let all_names: Vec<String> = (0..universe)
        .map(|i| slots.get(&i).cloned().unwrap_or_else(|| format!("__unused_{i}")))
        .collect();
    let reader = Reader { index };
    let root = reader.vertex(field(v, "root")?)?;
    let vertices: VertexSet = slots.keys().copied().collect();
    let graph = |key: &str| -> Result<RootedDigraph> {
        let es = reader.edges(field(v, key)?)?;
        RootedDigraph::new(Digraph::new(all_names.clone(), vertices.clone(), es)?, root)
    };
    let host = graph("host_edges")?;
    let start = graph("start_edges")?;
    let flame = graph("f_star_edges")?;
    let mut flame_witnesses = BTreeMap::new();
    for (k, paths) in field(v, "flame_witnesses")?.as_object().ok_or_else(|| bad("`flame_witnesses` must be an object"))? {
        flame_witnesses.insert(reader.vertex(&Value::from(k.as_str()))?, reader.paths(paths)?);
    }
    let mut largeness_witnesses = BTreeMap::new();
    for (k, w) in field(v, "largeness_witnesses")?
        .as_object()
        .ok_or_else(|| bad("`largeness_witnesses` must be an object"))?
    {
        let paths = reader.paths(field(w, "paths")?)?;
        let sep = reader.list(field(w, "separation")?)?.into_iter().collect();
        largeness_witnesses.insert(reader.vertex(&Value::from(k.as_str()))?, (paths, sep));
    }
    let mode = match field(v, "mode")?.as_str() {
        Some("faithful") => Mode::Faithful,
        Some("finite-direct") => Mode::FiniteDirect,
        _ => return Err(bad("unknown mode")),
    };
    let seed = match field(v, "seed")? {
        Value::Null => None,
        s => Some(s.as_u64().ok_or_else(|| bad("`seed` must be an integer or null"))?),
    };
    Ok(ParsedCertificate { host, start, flame, flame_witnesses, largeness_witnesses, mode, seed })
}

/// Whether `text` looks like a JSON document rather than an edge list.
pub fn looks_like_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}
