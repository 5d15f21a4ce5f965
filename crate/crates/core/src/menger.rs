//! Path-systems, separations and Erdős-Menger pairs.
//!
//! All maximum systems and minimum separations come from [`VertexFlow`]; the
//! brute-force counterparts live in [`crate::oracle`].

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, EdgeSet, RootedDigraph, Vertex, VertexSet};
use crate::error::{FlameError, Result};
use crate::flow::{Terminals, VertexFlow};

/// Disjointness regime of a path-system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PathKind {
    /// `(x, y)`: pairwise internally disjoint.
    #[serde(rename = "xy")]
    Pair,
    /// `(X, Y)`: pairwise disjoint, internally disjoint from `X ∪ Y`.
    #[serde(rename = "XY")]
    Sets,
    /// `(x, Y)`: disjoint but for `x`, internally disjoint from `Y`.
    #[serde(rename = "xY")]
    SourceToSet,
    /// `(X, y)`: disjoint but for `y`, internally disjoint from `X`.
    #[serde(rename = "Xy")]
    SetToSink,
}

/// The two sides a path-system runs between.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ends {
    Pair(Vertex, Vertex),
    Sets(VertexSet, VertexSet),
    SourceToSet(Vertex, VertexSet),
    SetToSink(VertexSet, Vertex),
}

impl Ends {
    pub fn kind(&self) -> PathKind {
        match self {
            Ends::Pair(..) => PathKind::Pair,
            Ends::Sets(..) => PathKind::Sets,
            Ends::SourceToSet(..) => PathKind::SourceToSet,
            Ends::SetToSink(..) => PathKind::SetToSink,
        }
    }

    pub fn sources(&self) -> VertexSet {
        match self {
            Ends::Pair(x, _) | Ends::SourceToSet(x, _) => [*x].into(),
            Ends::Sets(xs, _) | Ends::SetToSink(xs, _) => xs.clone(),
        }
    }

    pub fn targets(&self) -> VertexSet {
        match self {
            Ends::Pair(_, y) | Ends::SetToSink(_, y) => [*y].into(),
            Ends::Sets(_, ys) | Ends::SourceToSet(_, ys) => ys.clone(),
        }
    }

    /// Vertices that may be shared between paths of a system.
    fn shared(&self) -> VertexSet {
        match self {
            Ends::Pair(x, y) => [*x, *y].into(),
            Ends::Sets(..) => VertexSet::new(),
            Ends::SourceToSet(x, _) => [*x].into(),
            Ends::SetToSink(_, y) => [*y].into(),
        }
    }

    /// Vertices a path must not visit internally.
    fn forbidden_inside(&self) -> VertexSet {
        let mut s = self.sources();
        s.extend(self.targets());
        s
    }

    /// Checks the sides against `g`. Pair ends must be distinct and
    /// non-adjacent; set ends must be disjoint.
    pub fn check(&self, g: &Digraph) -> Result<()> {
        let all: Vec<Vertex> = self.sources().into_iter().chain(self.targets()).collect();
        if let Some(v) = all.iter().find(|&&v| !g.has_vertex(v)) {
            return Err(FlameError::domain(format!("vertex {v} is not in the digraph")));
        }
        if !self.sources().is_disjoint(&self.targets()) {
            return Err(FlameError::domain("source and target sides overlap"));
        }
        if let Ends::Pair(x, y) = self {
            if g.has_edge((*x, *y)) {
                return Err(FlameError::domain(format!(
                    "{} is an edge; pair separations are taken in D - xy",
                    g.edge_label((*x, *y))
                )));
            }
        }
        Ok(())
    }

    fn terminals(&self) -> Terminals {
        match self {
            Ends::Pair(x, y) => Terminals::Pair(*x, *y),
            Ends::Sets(xs, ys) => Terminals::Sets(xs.clone(), ys.clone()),
            Ends::SourceToSet(..) | Ends::SetToSink(..) => {
                unreachable!("flow networks are built for pair and set ends only")
            }
        }
    }
}

pub type Path = Vec<Vertex>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSystem {
    pub kind: PathKind,
    pub paths: Vec<Path>,
}

impl PathSystem {
    pub fn new(kind: PathKind, mut paths: Vec<Path>) -> Self {
        paths.sort();
        PathSystem { kind, paths }
    }

    pub fn empty(kind: PathKind) -> Self {
        PathSystem { kind, paths: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// `V⁻`
    pub fn initial_vertices(&self) -> VertexSet {
        self.paths.iter().filter_map(|p| p.first().copied()).collect()
    }

    /// `V⁺`
    pub fn terminal_vertices(&self) -> VertexSet {
        self.paths.iter().filter_map(|p| p.last().copied()).collect()
    }

    /// `E⁻`
    pub fn initial_edges(&self) -> EdgeSet {
        self.paths.iter().filter(|p| p.len() >= 2).map(|p| (p[0], p[1])).collect()
    }

    /// `E⁺`
    pub fn terminal_edges(&self) -> EdgeSet {
        self.paths
            .iter()
            .filter(|p| p.len() >= 2)
            .map(|p| (p[p.len() - 2], p[p.len() - 1]))
            .collect()
    }

    pub fn edges(&self) -> EdgeSet {
        self.paths.iter().flat_map(|p| p.windows(2).map(|w| (w[0], w[1]))).collect()
    }

    pub fn vertices(&self) -> VertexSet {
        self.paths.iter().flatten().copied().collect()
    }

    /// Whether every path lies in `g`.
    pub fn lies_in(&self, g: &Digraph) -> bool {
        self.paths
            .iter()
            .all(|p| p.iter().all(|&v| g.has_vertex(v)) && p.windows(2).all(|w| g.has_edge((w[0], w[1]))))
    }

    /// Full structural check against `g` and `ends`; returns the first
    /// violation found.
    pub fn verify(&self, g: &Digraph, ends: &Ends) -> std::result::Result<(), String> {
        if self.kind != ends.kind() {
            return Err(format!("kind {:?} does not match ends {:?}", self.kind, ends.kind()));
        }
        let sources = ends.sources();
        let targets = ends.targets();
        let forbidden = ends.forbidden_inside();
        for p in &self.paths {
            let (Some(&first), Some(&last)) = (p.first(), p.last()) else {
                return Err("empty path".into());
            };
            if !self.lies_in_path(g, p) {
                return Err(format!("{p:?} is not a path of the digraph"));
            }
            if !sources.contains(&first) || !targets.contains(&last) {
                return Err(format!("{p:?} has wrong endpoints"));
            }
            if p.len() == 1 && ends.kind() != PathKind::Sets {
                return Err(format!("{p:?}: single-vertex paths only occur in (X,Y)-systems"));
            }
            if p.len() > 2 {
                if let Some(v) = p[1..p.len() - 1].iter().find(|v| forbidden.contains(v)) {
                    return Err(format!("{p:?} meets the end set at {v} internally"));
                }
            }
        }
        let shared = ends.shared();
        let mut seen = BTreeSet::new();
        for p in &self.paths {
            for v in p.iter().filter(|v| !shared.contains(v)) {
                if !seen.insert(*v) {
                    return Err(format!("vertex {v} used by two paths"));
                }
            }
        }
        if ends.kind() == PathKind::Pair {
            let uniq: BTreeSet<&Path> = self.paths.iter().collect();
            if uniq.len() != self.paths.len() {
                return Err("repeated path".into());
            }
        }
        Ok(())
    }

    fn lies_in_path(&self, g: &Digraph, p: &[Vertex]) -> bool {
        let distinct: BTreeSet<&Vertex> = p.iter().collect();
        distinct.len() == p.len()
            && p.iter().all(|&v| g.has_vertex(v))
            && p.windows(2).all(|w| g.has_edge((w[0], w[1])))
    }

    /// Initial segment of every path up to its first vertex in `stop`.
    /// Paths that never meet `stop` are dropped.
    pub fn truncate_at_first(&self, stop: &VertexSet, kind: PathKind) -> PathSystem {
        let paths = self
            .paths
            .iter()
            .filter_map(|p| p.iter().position(|v| stop.contains(v)).map(|i| p[..=i].to_vec()))
            .collect();
        PathSystem::new(kind, paths)
    }

    /// Terminal segment of every path from its last vertex in `stop`.
    pub fn tails_from_last(&self, stop: &VertexSet, kind: PathKind) -> PathSystem {
        let paths = self
            .paths
            .iter()
            .filter_map(|p| p.iter().rposition(|v| stop.contains(v)).map(|i| p[i..].to_vec()))
            .collect();
        PathSystem::new(kind, paths)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    pub kind: PathKind,
    pub vertices: VertexSet,
}

impl Separation {
    pub fn new(kind: PathKind, vertices: VertexSet) -> Self {
        Separation { kind, vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthogonalPair {
    pub system: PathSystem,
    pub separation: Separation,
}

impl OrthogonalPair {
    pub fn is_orthogonal(&self) -> bool {
        is_orthogonal(&self.system, &self.separation.vertices)
    }
}

/// `𝒫 ⊥ S`: every path meets `S` exactly once and `S ⊆ V(𝒫)`.
pub fn is_orthogonal(system: &PathSystem, sep: &VertexSet) -> bool {
    system
        .paths
        .iter()
        .all(|p| p.iter().filter(|v| sep.contains(v)).count() == 1)
        && sep.is_subset(&system.vertices())
}

/// Whether some vertex of `targets` is reachable from `sources` through
/// vertices outside `blocked`. In-edges of `sources` and out-edges of
/// `targets` are never used, and the search does not continue past a target.
pub(crate) fn reaches_avoiding(
    g: &Digraph,
    sources: &VertexSet,
    targets: &VertexSet,
    blocked: &VertexSet,
) -> bool {
    let mut seen: VertexSet = sources.iter().filter(|v| !blocked.contains(v)).copied().collect();
    if seen.iter().any(|v| targets.contains(v)) {
        return true;
    }
    let mut queue: VecDeque<Vertex> = seen.iter().copied().collect();
    while let Some(u) = queue.pop_front() {
        for w in g.out_neighbors(u) {
            if blocked.contains(&w) || sources.contains(&w) || seen.contains(&w) {
                continue;
            }
            if targets.contains(&w) {
                return true;
            }
            seen.insert(w);
            queue.push_back(w);
        }
    }
    false
}

/// Whether `sep` meets every path running between `ends` in `g`.
pub fn separates(g: &Digraph, ends: &Ends, sep: &VertexSet) -> bool {
    if let Ends::Pair(x, y) = ends {
        if sep.contains(x) || sep.contains(y) || g.has_edge((*x, *y)) {
            return false;
        }
    }
    !reaches_avoiding(g, &ends.sources(), &ends.targets(), sep)
}

/// Every `(r, s)`-path meets `sep` (with `s ∈ sep` counting as met).
pub fn separates_from_root(d: &RootedDigraph, s: Vertex, sep: &VertexSet) -> bool {
    if sep.contains(&s) {
        return true;
    }
    if sep.contains(&d.root()) || s == d.root() {
        return false;
    }
    !reaches_avoiding(d, &[d.root()].into(), &[s].into(), sep)
}

fn flow_for(g: &Digraph, ends: &Ends) -> VertexFlow {
    let mut f = VertexFlow::new(g, &ends.terminals());
    f.run();
    f
}

fn flow_ends_check(g: &Digraph, ends: &Ends) -> Result<()> {
    ends.check(g)?;
    if matches!(ends, Ends::SourceToSet(..) | Ends::SetToSink(..)) {
        return Err(FlameError::domain("expected pair or set ends"));
    }
    Ok(())
}

/// Maximum internally disjoint `(r, v)`-path-system of `D`, including the
/// trivial path `rv` when that edge exists.
pub fn max_disjoint_paths(d: &RootedDigraph, v: Vertex) -> Result<PathSystem> {
    let r = d.root();
    if v == r {
        return Err(FlameError::domain("target must differ from the root"));
    }
    if !d.has_vertex(v) {
        return Err(FlameError::domain(format!("vertex {v} is not in the digraph")));
    }
    let g = d.without_root_edge(v);
    let mut paths = flow_for(&g, &Ends::Pair(r, v)).paths();
    if d.has_edge((r, v)) {
        paths.push(vec![r, v]);
    }
    Ok(PathSystem::new(PathKind::Pair, paths))
}

/// `κ_D(r, v)`.
pub fn kappa(d: &RootedDigraph, v: Vertex) -> Result<usize> {
    Ok(max_disjoint_paths(d, v)?.len())
}

/// Orthogonal pair between `ends`: a maximum system and the minimum
/// separation closest to the source side.
pub fn erdos_menger(g: &Digraph, ends: &Ends) -> Result<OrthogonalPair> {
    flow_ends_check(g, ends)?;
    let f = flow_for(g, ends);
    let pair = OrthogonalPair {
        system: PathSystem::new(ends.kind(), f.paths()),
        separation: Separation::new(ends.kind(), f.source_side_cut()),
    };
    if !pair.is_orthogonal() {
        return Err(FlameError::internal("max-flow pair is not orthogonal"));
    }
    Ok(pair)
}

/// Maximum `(X, Y)`-system with the closest-to-`X` minimum separation. The
/// sides may overlap; a shared vertex is joined by its single-vertex path.
pub(crate) fn sets_pair_overlapping(g: &Digraph, xs: &VertexSet, ys: &VertexSet) -> OrthogonalPair {
    let f = flow_for(g, &Ends::Sets(xs.clone(), ys.clone()));
    OrthogonalPair {
        system: PathSystem::new(PathKind::Sets, f.paths()),
        separation: Separation::new(PathKind::Sets, f.source_side_cut()),
    }
}

/// An element of `𝔓_D(v) × 𝔖_D(v)`, computed in `D - rv`.
pub fn erdos_menger_pair(d: &RootedDigraph, v: Vertex) -> Result<OrthogonalPair> {
    if v == d.root() {
        return Err(FlameError::domain("target must differ from the root"));
    }
    erdos_menger(&d.without_root_edge(v), &Ends::Pair(d.root(), v))
}

/// Orthogonal `(X, Y)` pair. Overlapping sides are rejected.
pub fn erdos_menger_pair_sets(g: &Digraph, xs: &VertexSet, ys: &VertexSet) -> Result<OrthogonalPair> {
    erdos_menger(g, &Ends::Sets(xs.clone(), ys.clone()))
}

/// `S ⊴ T`: `S` separates the source side from `T`.
pub fn leq_separation(g: &Digraph, ends: &Ends, s: &VertexSet, t: &VertexSet) -> bool {
    let blocked_ok = match ends {
        Ends::Pair(x, _) | Ends::SourceToSet(x, _) => !s.contains(x),
        _ => true,
    };
    blocked_ok && !reaches_avoiding(g, &ends.sources(), t, s)
}

/// The ⊴-smallest Erdős-Menger separation (closest to the sources).
pub fn min_separation(g: &Digraph, ends: &Ends) -> Result<Separation> {
    let pair = erdos_menger(g, ends)?;
    Ok(pair.separation)
}

/// The ⊴-largest Erdős-Menger separation (closest to the targets).
pub fn max_separation(g: &Digraph, ends: &Ends) -> Result<Separation> {
    flow_ends_check(g, ends)?;
    let f = flow_for(g, ends);
    let system = PathSystem::new(ends.kind(), f.paths());
    let sep = f.sink_side_cut();
    if !is_orthogonal(&system, &sep) {
        return Err(FlameError::internal("sink-side cut is not orthogonal"));
    }
    let lo = f.source_side_cut();
    if !leq_separation(g, ends, &lo, &sep) {
        return Err(FlameError::internal("source-side cut is not ⊴ sink-side cut"));
    }
    Ok(Separation::new(ends.kind(), sep))
}

/// Outcome of one augmenting-walk step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Augmentation {
    Grown {
        system: PathSystem,
        new_source: Vertex,
        new_sink: Vertex,
        /// `|E(𝒫) △ E(𝒫')|`
        symmetric_difference: usize,
    },
    Blocked(Separation),
}

/// Augmenting-walk step on an `(X, Y)`-path-system.
pub fn augment(g: &Digraph, xs: &VertexSet, ys: &VertexSet, system: &PathSystem) -> Result<Augmentation> {
    let ends = Ends::Sets(xs.clone(), ys.clone());
    flow_ends_check(g, &ends)?;
    system
        .verify(g, &ends)
        .map_err(|e| FlameError::domain(format!("not an (X,Y)-path-system: {e}")))?;
    let mut f = VertexFlow::new(g, &ends.terminals());
    for p in &system.paths {
        if !f.preload_path(p) {
            return Err(FlameError::internal(format!("could not route {p:?}")));
        }
    }
    if !f.augment_once() {
        let sep = f.source_side_cut();
        if !is_orthogonal(system, &sep) {
            return Err(FlameError::internal("blocking cut is not orthogonal"));
        }
        return Ok(Augmentation::Blocked(Separation::new(PathKind::Sets, sep)));
    }
    let grown = PathSystem::new(PathKind::Sets, f.paths());
    let before_src = system.initial_vertices();
    let before_dst = system.terminal_vertices();
    let after_src = grown.initial_vertices();
    let after_dst = grown.terminal_vertices();
    let new_src: Vec<Vertex> = after_src.difference(&before_src).copied().collect();
    let new_dst: Vec<Vertex> = after_dst.difference(&before_dst).copied().collect();
    if new_src.len() != 1
        || new_dst.len() != 1
        || !before_src.is_subset(&after_src)
        || !before_dst.is_subset(&after_dst)
    {
        return Err(FlameError::internal("augmentation did not grow both ends by one"));
    }
    let sd = system.edges().symmetric_difference(&grown.edges()).count();
    Ok(Augmentation::Grown {
        system: grown,
        new_source: new_src[0],
        new_sink: new_dst[0],
        symmetric_difference: sd,
    })
}
