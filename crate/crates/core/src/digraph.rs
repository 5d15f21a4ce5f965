//! Finite simple digraphs and rooted digraphs.
//!
//! Vertices are dense indices into a name table (the *universe*). Subgraphs
//! produced by deletion or restriction keep the universe of their parent, so
//! a vertex index means the same thing in `D`, `D - X` and `D ↾_v I`; this is
//! what lets `L ⊆ D` comparisons be done index-wise.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Deref;

use crate::error::{FlameError, Result};

pub type Vertex = usize;
/// `(tail, head)`.
pub type Edge = (Vertex, Vertex);
pub type EdgeSet = BTreeSet<Edge>;
pub type VertexSet = BTreeSet<Vertex>;

#[derive(Clone, Debug)]
pub struct Digraph {
    names: Vec<String>,
    index: HashMap<String, Vertex>,
    vertices: VertexSet,
    // (tail, head)
    out: EdgeSet,
    // (head, tail)
    inc: EdgeSet,
}

impl Digraph {
    /// Builds a digraph over the universe `names`. Fails on loops, on
    /// endpoints outside `vertices`, on vertices outside the universe and on
    /// duplicate names.
    pub fn new(names: Vec<String>, vertices: VertexSet, edges: EdgeSet) -> Result<Self> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(FlameError::domain(format!("duplicate vertex name {n}")));
            }
        }
        if let Some(&v) = vertices.iter().find(|&&v| v >= names.len()) {
            return Err(FlameError::domain(format!("vertex index {v} outside universe")));
        }
        for &(t, h) in &edges {
            if t == h {
                return Err(FlameError::domain(format!("loop at {}", names[t])));
            }
            if !vertices.contains(&t) || !vertices.contains(&h) {
                return Err(FlameError::domain(format!(
                    "edge {t}->{h} has an endpoint that is not a vertex"
                )));
            }
        }
        let inc = edges.iter().map(|&(t, h)| (h, t)).collect();
        Ok(Digraph {
            names,
            index,
            vertices,
            out: edges,
            inc,
        })
    }

    pub fn universe_len(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: Vertex) -> &str {
        &self.names[v]
    }

    pub fn vertex(&self, name: &str) -> Option<Vertex> {
        self.index.get(name).copied().filter(|v| self.vertices.contains(v))
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn edge_set(&self) -> &EdgeSet {
        &self.out
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.out.iter().copied()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.out.len()
    }

    pub fn has_vertex(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.out.contains(&e)
    }

    pub fn out_neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.out.range((v, 0)..=(v, usize::MAX)).map(|&(_, h)| h)
    }

    pub fn in_neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.inc.range((v, 0)..=(v, usize::MAX)).map(|&(_, t)| t)
    }

    /// `in_D(v)` as a set of `(tail, v)` edges.
    pub fn in_edges(&self, v: Vertex) -> EdgeSet {
        self.in_neighbors(v).map(|t| (t, v)).collect()
    }

    pub fn out_edges(&self, v: Vertex) -> EdgeSet {
        self.out_neighbors(v).map(|h| (v, h)).collect()
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.in_neighbors(v).count()
    }

    pub fn max_in_degree(&self) -> usize {
        self.vertices.iter().map(|&v| self.in_degree(v)).max().unwrap_or(0)
    }

    /// Same vertex set, edge set replaced. Edges must join existing vertices.
    pub fn with_edges(&self, edges: EdgeSet) -> Result<Self> {
        Digraph::new(self.names.clone(), self.vertices.clone(), edges)
    }

    pub(crate) fn plus_edge(&self, e: Edge) -> Self {
        debug_assert!(self.has_vertex(e.0) && self.has_vertex(e.1) && e.0 != e.1);
        let mut g = self.clone();
        g.out.insert(e);
        g.inc.insert((e.1, e.0));
        g
    }

    pub(crate) fn minus_edges<'a>(&self, edges: impl IntoIterator<Item = &'a Edge>) -> Self {
        let mut g = self.clone();
        for &(t, h) in edges {
            g.out.remove(&(t, h));
            g.inc.remove(&(h, t));
        }
        g
    }

    pub(crate) fn minus_edge(&self, e: Edge) -> Self {
        self.minus_edges(std::iter::once(&e))
    }

    pub(crate) fn minus_vertices<'a>(&self, vs: impl IntoIterator<Item = &'a Vertex>) -> Self {
        let mut g = self.clone();
        for &v in vs {
            if g.vertices.remove(&v) {
                let outs: Vec<Vertex> = g.out_neighbors(v).collect();
                let ins: Vec<Vertex> = g.in_neighbors(v).collect();
                for h in outs {
                    g.out.remove(&(v, h));
                    g.inc.remove(&(h, v));
                }
                for t in ins {
                    g.out.remove(&(t, v));
                    g.inc.remove(&(v, t));
                }
            }
        }
        g
    }

    /// `D - X` for a vertex set. Every member must be a vertex of `D`.
    pub fn delete_vertices(&self, xs: &VertexSet) -> Result<Self> {
        if let Some(&v) = xs.iter().find(|v| !self.has_vertex(**v)) {
            return Err(FlameError::domain(format!("vertex {v} is not in the digraph")));
        }
        Ok(self.minus_vertices(xs))
    }

    /// `D - X` for an edge set. Every member must be an edge of `D`.
    pub fn delete_edges(&self, es: &EdgeSet) -> Result<Self> {
        if let Some(&(t, h)) = es.iter().find(|e| !self.has_edge(**e)) {
            return Err(FlameError::domain(format!(
                "edge {}->{} is not in the digraph",
                self.label(t),
                self.label(h)
            )));
        }
        Ok(self.minus_edges(es))
    }

    /// Whether `self` is a subgraph of `other` over the same universe.
    pub fn is_subgraph_of(&self, other: &Digraph) -> bool {
        self.names == other.names
            && self.vertices.is_subset(&other.vertices)
            && self.out.is_subset(&other.out)
    }

    pub fn is_spanning_subgraph_of(&self, other: &Digraph) -> bool {
        self.is_subgraph_of(other) && self.vertices == other.vertices
    }

    /// Appends a fresh vertex to the universe and the vertex set.
    pub(crate) fn push_vertex(&mut self, name: String) -> Vertex {
        let v = self.names.len();
        self.index.insert(name.clone(), v);
        self.names.push(name);
        self.vertices.insert(v);
        v
    }

    pub(crate) fn label(&self, v: Vertex) -> &str {
        self.names.get(v).map(String::as_str).unwrap_or("?")
    }

    pub fn edge_label(&self, e: Edge) -> String {
        format!("{}->{}", self.label(e.0), self.label(e.1))
    }

    /// Named view used for semantic comparison.
    fn named(&self) -> (BTreeSet<&str>, BTreeSet<(&str, &str)>) {
        let vs = self.vertices.iter().map(|&v| self.name(v)).collect();
        let es = self.out.iter().map(|&(t, h)| (self.name(t), self.name(h))).collect();
        (vs, es)
    }
}

/// Graphs are equal when they have the same named vertices and edges; the
/// index assignment is irrelevant.
impl PartialEq for Digraph {
    fn eq(&self, other: &Self) -> bool {
        self.named() == other.named()
    }
}

impl Eq for Digraph {}

/// A finite simple digraph with a root that has no ingoing edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedDigraph {
    graph: Digraph,
    root: Vertex,
}

impl Deref for RootedDigraph {
    type Target = Digraph;

    fn deref(&self) -> &Digraph {
        &self.graph
    }
}

impl RootedDigraph {
    pub fn new(graph: Digraph, root: Vertex) -> Result<Self> {
        if !graph.has_vertex(root) {
            return Err(FlameError::domain("root is not a vertex"));
        }
        if let Some(t) = graph.in_neighbors(root).next() {
            return Err(FlameError::domain(format!(
                "root has an ingoing edge {}",
                graph.edge_label((t, root))
            )));
        }
        Ok(RootedDigraph { graph, root })
    }

    /// Convenience constructor from named edges. Vertex indices follow first
    /// appearance, root first.
    pub fn from_edges(root: &str, edges: &[(&str, &str)]) -> Result<Self> {
        Self::from_parts(root, &[], edges)
    }

    /// Like [`from_edges`](Self::from_edges) with extra (possibly isolated)
    /// vertices declared up front.
    pub fn from_parts(root: &str, vertices: &[&str], edges: &[(&str, &str)]) -> Result<Self> {
        let mut names: Vec<String> = vec![root.to_string()];
        let mut index: HashMap<String, Vertex> = HashMap::from([(root.to_string(), 0)]);
        let mut intern = |n: &str, names: &mut Vec<String>| -> Vertex {
            *index.entry(n.to_string()).or_insert_with(|| {
                names.push(n.to_string());
                names.len() - 1
            })
        };
        for v in vertices {
            intern(v, &mut names);
        }
        let mut es = EdgeSet::new();
        for (t, h) in edges {
            let e = (intern(t, &mut names), intern(h, &mut names));
            if !es.insert(e) {
                return Err(FlameError::domain(format!("parallel edge {t}->{h}")));
            }
        }
        let vs = (0..names.len()).collect();
        RootedDigraph::new(Digraph::new(names, vs, es)?, 0)
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    /// Non-root vertices in index order.
    pub fn non_root_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.vertices().iter().copied().filter(move |&v| v != self.root)
    }

    pub(crate) fn from_graph_unchecked(graph: Digraph, root: Vertex) -> Self {
        debug_assert!(graph.in_neighbors(root).next().is_none());
        RootedDigraph { graph, root }
    }

    /// Same root and vertex set with a new edge set.
    pub fn with_edges(&self, edges: EdgeSet) -> Result<Self> {
        RootedDigraph::new(self.graph.with_edges(edges)?, self.root)
    }

    pub(crate) fn map_graph(&self, f: impl FnOnce(&Digraph) -> Digraph) -> Self {
        RootedDigraph::from_graph_unchecked(f(&self.graph), self.root)
    }

    pub(crate) fn plus_edge(&self, e: Edge) -> Self {
        self.map_graph(|g| g.plus_edge(e))
    }

    pub(crate) fn minus_edge(&self, e: Edge) -> Self {
        self.map_graph(|g| g.minus_edge(e))
    }

    /// `D - rv` when `rv` is an edge, otherwise `D` itself.
    pub fn without_root_edge(&self, v: Vertex) -> Self {
        self.minus_edge((self.root, v))
    }

    /// `D ↾_v I`: deletes the ingoing edges of `v` that are not in `I`.
    pub fn restrict_at(&self, v: Vertex, keep: &EdgeSet) -> Result<Self> {
        if v == self.root {
            return Err(FlameError::domain("cannot restrict at the root"));
        }
        if !self.has_vertex(v) {
            return Err(FlameError::domain(format!("vertex {v} is not in the digraph")));
        }
        if let Some(&e) = keep.iter().find(|&&e| e.1 != v || !self.has_edge(e)) {
            return Err(FlameError::domain(format!(
                "{} is not an ingoing edge of {}",
                self.edge_label(e),
                self.name(v)
            )));
        }
        let drop: Vec<Edge> = self.in_edges(v).difference(keep).copied().collect();
        Ok(self.map_graph(|g| g.minus_edges(&drop)))
    }

    /// Deletes a vertex set. Deleting the root is rejected.
    pub fn delete_vertices(&self, xs: &VertexSet) -> Result<Self> {
        if xs.contains(&self.root) {
            return Err(FlameError::domain("deleting the root is not allowed"));
        }
        Ok(RootedDigraph::from_graph_unchecked(
            self.graph.delete_vertices(xs)?,
            self.root,
        ))
    }

    pub fn delete_edges(&self, es: &EdgeSet) -> Result<Self> {
        Ok(RootedDigraph::from_graph_unchecked(
            self.graph.delete_edges(es)?,
            self.root,
        ))
    }
}

/// One violated invariant of a rooted digraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    RootHasInEdge { tail: String, head: String },
    Loop { vertex: String },
    ParallelEdge { tail: String, head: String },
    UndeclaredEndpoint { tail: String, head: String },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::RootHasInEdge { tail, head } => write!(f, "root-has-in-edge {tail}->{head}"),
            Diagnostic::Loop { vertex } => write!(f, "loop at {vertex}"),
            Diagnostic::ParallelEdge { tail, head } => write!(f, "parallel-edge {tail}->{head}"),
            Diagnostic::UndeclaredEndpoint { tail, head } => {
                write!(f, "undeclared-endpoint {tail}->{head}")
            }
        }
    }
}

/// An unvalidated rooted digraph, as read from input.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeList {
    pub root: String,
    /// Declared vertices in first-appearance order.
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl EdgeList {
    /// One diagnostic per invariant violation, in edge order. Empty iff the
    /// list describes a valid rooted digraph.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let declared: BTreeSet<&str> = self.vertices.iter().map(String::as_str).collect();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (t, h) in &self.edges {
            let (t, h) = (t.clone(), h.clone());
            if !declared.contains(t.as_str()) || !declared.contains(h.as_str()) {
                out.push(Diagnostic::UndeclaredEndpoint { tail: t.clone(), head: h.clone() });
            }
            if t == h {
                out.push(Diagnostic::Loop { vertex: t.clone() });
            }
            if h == self.root {
                out.push(Diagnostic::RootHasInEdge { tail: t.clone(), head: h.clone() });
            }
            if !seen.insert((t.clone(), h.clone())) {
                out.push(Diagnostic::ParallelEdge { tail: t, head: h });
            }
        }
        out
    }

    pub fn into_digraph(&self) -> Result<RootedDigraph> {
        let diags = self.validate();
        if !diags.is_empty() {
            let msg: Vec<String> = diags.iter().map(ToString::to_string).collect();
            return Err(FlameError::domain(msg.join("; ")));
        }
        let verts: Vec<&str> = self.vertices.iter().map(String::as_str).collect();
        let edges: Vec<(&str, &str)> =
            self.edges.iter().map(|(t, h)| (t.as_str(), h.as_str())).collect();
        RootedDigraph::from_parts(&self.root, &verts, &edges)
    }
}

impl From<&RootedDigraph> for EdgeList {
    fn from(d: &RootedDigraph) -> Self {
        let mut vertices = vec![d.name(d.root()).to_string()];
        vertices.extend(d.non_root_vertices().map(|v| d.name(v).to_string()));
        EdgeList {
            root: d.name(d.root()).to_string(),
            vertices,
            edges: d
                .edges()
                .map(|(t, h)| (d.name(t).to_string(), d.name(h).to_string()))
                .collect(),
        }
    }
}
