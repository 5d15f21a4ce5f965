//! Merging path-systems (Pym linkage) and the covering constructions built
//! on it.
//!
//! [`pym_merge`] solves a small min-cost flow with lower bounds inside the
//! union digraph `E(𝒫) ∪ E(𝒬)`: every source of `𝒫` and every sink of `𝒬`
//! must carry a unit, each used edge costs one. The optimum is a system of
//! minimum total edge count among those meeting both coverage demands, and
//! it is conservative by construction.

use std::collections::{BTreeMap, VecDeque};

use crate::digraph::{Digraph, Edge, EdgeSet, RootedDigraph, Vertex, VertexSet};
use crate::error::{FlameError, Result};
use crate::flame::{is_in_g, is_v_large};
use crate::menger::{
    erdos_menger, is_orthogonal, separates, Ends, Path, PathKind, PathSystem, Separation,
};

#[derive(Clone, Debug)]
struct CostArc {
    to: usize,
    cap: i64,
    cost: i64,
    rev: usize,
}

/// Successive shortest paths with Bellman-Ford; stops once the cheapest
/// augmenting path no longer lowers the total cost.
struct MinCost {
    arcs: Vec<Vec<CostArc>>,
}

impl MinCost {
    fn new(n: usize) -> Self {
        MinCost { arcs: vec![Vec::new(); n] }
    }

    fn add(&mut self, from: usize, to: usize, cap: i64, cost: i64) {
        let rf = self.arcs[to].len();
        let rt = self.arcs[from].len();
        self.arcs[from].push(CostArc { to, cap, cost, rev: rf });
        self.arcs[to].push(CostArc { to: from, cap: 0, cost: -cost, rev: rt });
    }

    fn run(&mut self, s: usize, t: usize) {
        let n = self.arcs.len();
        loop {
            let mut dist = vec![i64::MAX; n];
            let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
            let mut in_queue = vec![false; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                in_queue[u] = false;
                for (i, a) in self.arcs[u].iter().enumerate() {
                    if a.cap > 0 && dist[u] + a.cost < dist[a.to] {
                        dist[a.to] = dist[u] + a.cost;
                        prev[a.to] = Some((u, i));
                        if !in_queue[a.to] {
                            in_queue[a.to] = true;
                            queue.push_back(a.to);
                        }
                    }
                }
            }
            if dist[t] == i64::MAX || dist[t] >= 0 {
                return;
            }
            let mut cur = t;
            while let Some((u, i)) = prev[cur] {
                self.arcs[u][i].cap -= 1;
                let (to, rev) = (self.arcs[u][i].to, self.arcs[u][i].rev);
                self.arcs[to][rev].cap += 1;
                cur = u;
            }
        }
    }
}

fn check_sets_system(g: &Digraph, ends: &Ends, p: &PathSystem, name: &str) -> Result<()> {
    p.verify(g, ends)
        .map_err(|e| FlameError::domain(format!("{name} is not a valid path-system: {e}")))
}

/// `ℛ` with `V⁻(ℛ) ⊇ V⁻(𝒫)` and `V⁺(ℛ) ⊇ V⁺(𝒬)`, all edges drawn from
/// `E(𝒫) ∪ E(𝒬)`.
pub fn pym_merge(g: &Digraph, xs: &VertexSet, ys: &VertexSet, p: &PathSystem, q: &PathSystem) -> Result<PathSystem> {
    let ends = Ends::Sets(xs.clone(), ys.clone());
    ends.check(g)?;
    check_sets_system(g, &ends, p, "P")?;
    check_sets_system(g, &ends, q, "Q")?;
    if p == q {
        return Ok(p.clone());
    }
    let union: EdgeSet = p.edges().union(&q.edges()).copied().collect();
    let mut verts: VertexSet = p.vertices();
    verts.extend(q.vertices());
    let order: Vec<Vertex> = verts.iter().copied().collect();
    let index: BTreeMap<Vertex, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = verts.len();
    let (s, t) = (2 * n, 2 * n + 1);
    // every demand arc is worth more than any possible edge total
    let bonus = (union.len() as i64 + 1) * 2;
    let mut net = MinCost::new(2 * n + 2);
    let src_demand = p.initial_vertices();
    let snk_demand = q.terminal_vertices();
    let mut demand_arcs = Vec::new();
    for (&v, &i) in &index {
        if xs.contains(&v) {
            let cost = if src_demand.contains(&v) { -bonus } else { 0 };
            demand_arcs.push((s, net.arcs[s].len(), src_demand.contains(&v)));
            net.add(s, 2 * i, 1, cost);
        }
        net.add(2 * i, 2 * i + 1, 1, 0);
    }
    let mut edge_arcs: Vec<(usize, usize, Edge)> = Vec::new();
    for &(a, b) in &union {
        let (ia, ib) = (index[&a], index[&b]);
        edge_arcs.push((2 * ia + 1, net.arcs[2 * ia + 1].len(), (a, b)));
        net.add(2 * ia + 1, 2 * ib, 1, 1);
    }
    for (&v, &i) in &index {
        if ys.contains(&v) {
            let cost = if snk_demand.contains(&v) { -bonus } else { 0 };
            demand_arcs.push((2 * i + 1, net.arcs[2 * i + 1].len(), snk_demand.contains(&v)));
            net.add(2 * i + 1, t, 1, cost);
        }
    }
    net.run(s, t);
    for &(from, i, required) in &demand_arcs {
        if required && net.arcs[from][i].cap != 0 {
            return Err(FlameError::internal("merge flow left a coverage demand unmet"));
        }
    }
    let mut succ: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    for &(from, i, (a, b)) in &edge_arcs {
        if net.arcs[from][i].cap == 0 {
            succ.insert(a, b);
        }
    }
    let mut starts: Vec<Vertex> = Vec::new();
    for &(from, i, _) in demand_arcs.iter().filter(|d| d.0 == s) {
        if net.arcs[from][i].cap == 0 {
            let head = net.arcs[from][i].to / 2;
            starts.push(order[head]);
        }
    }
    let mut paths: Vec<Path> = Vec::new();
    for x in starts {
        let mut path = vec![x];
        let mut cur = x;
        while let Some(&nx) = succ.get(&cur) {
            path.push(nx);
            cur = nx;
            if path.len() > n {
                return Err(FlameError::internal("merge flow contains a cycle"));
            }
        }
        paths.push(path);
    }
    let r = PathSystem::new(PathKind::Sets, paths);
    check_sets_system(g, &ends, &r, "merged system").map_err(|e| FlameError::internal(e.to_string()))?;
    if !r.initial_vertices().is_superset(&src_demand)
        || !r.terminal_vertices().is_superset(&snk_demand)
        || !r.edges().is_subset(&union)
    {
        return Err(FlameError::internal("merged system fails its postconditions"));
    }
    Ok(r)
}

/// Reserved name of the vertex subdividing `tail -> head`.
pub(crate) fn subdivision_name(g: &Digraph, e: Edge) -> String {
    format!("__sub_{}_{}", g.name(e.0), g.name(e.1))
}

/// `ℛ` with `V⁻(ℛ) ⊇ V⁻(𝒫)` and `E⁺(ℛ) ⊇ E⁺(𝒬)` for `(X, y)`-systems.
pub fn pym_merge_to_vertex(
    g: &Digraph,
    xs: &VertexSet,
    y: Vertex,
    p: &PathSystem,
    q: &PathSystem,
) -> Result<PathSystem> {
    let ends = Ends::SetToSink(xs.clone(), y);
    ends.check(g)?;
    check_sets_system(g, &ends, p, "P")?;
    check_sets_system(g, &ends, q, "Q")?;
    if p == q {
        return Ok(p.clone());
    }
    let mut h = g.clone();
    let mut sub: BTreeMap<Edge, Vertex> = BTreeMap::new();
    let mut back: BTreeMap<Vertex, Edge> = BTreeMap::new();
    let mut edges = g.edge_set().clone();
    for e in g.in_edges(y) {
        let s = h.push_vertex(subdivision_name(g, e));
        sub.insert(e, s);
        back.insert(s, e);
        edges.remove(&e);
        edges.insert((e.0, s));
    }
    let mut vs = h.vertices().clone();
    vs.remove(&y);
    edges.retain(|&(a, b)| a != y && b != y);
    let h = Digraph::new(h.names().to_vec(), vs, edges)?;
    let lift = |sys: &PathSystem| -> PathSystem {
        let paths = sys
            .paths
            .iter()
            .map(|path| {
                let mut path = path.clone();
                let last = path.pop().expect("paths are non-empty");
                let prev = *path.last().expect("(X,y)-paths have an edge");
                path.push(sub[&(prev, last)]);
                path
            })
            .collect();
        PathSystem::new(PathKind::Sets, paths)
    };
    let ys: VertexSet = back.keys().copied().collect();
    let merged = pym_merge(&h, xs, &ys, &lift(p), &lift(q))?;
    let paths = merged
        .paths
        .into_iter()
        .map(|mut path| {
            let s = path.pop().expect("paths are non-empty");
            path.push(back[&s].1);
            path
        })
        .collect();
    let r = PathSystem::new(PathKind::SetToSink, paths);
    check_sets_system(g, &ends, &r, "merged system").map_err(|e| FlameError::internal(e.to_string()))?;
    if !r.initial_vertices().is_superset(&p.initial_vertices())
        || !r.terminal_edges().is_superset(&q.terminal_edges())
    {
        return Err(FlameError::internal("merged system fails its postconditions"));
    }
    Ok(r)
}

/// `ℛ ∈ 𝔓_D(v)` with `ℛ ⊥ S` and `I ⊆ E⁺(ℛ)`.
pub fn covering_menger_system(d: &RootedDigraph, v: Vertex, i: &EdgeSet, s: &VertexSet) -> Result<PathSystem> {
    let r = d.root();
    if v == r {
        return Err(FlameError::domain("target must differ from the root"));
    }
    let dm = d.without_root_edge(v);
    let witness = is_in_g(&dm, v, i)?
        .ok_or_else(|| FlameError::domain("I is not in G of D - rv at v"))?
        .system;
    let ends = Ends::Pair(r, v);
    let pair = erdos_menger(&dm, &ends)?;
    if !separates(&dm, &ends, s) || s.len() != pair.system.len() {
        return Err(FlameError::domain("S is not an Erdős-Menger separation of D - rv"));
    }
    let p = pair.system;
    let to_v = |sys: &PathSystem| sys.tails_from_last(s, PathKind::SetToSink);
    let p_tails = to_v(&p);
    let q_tails = to_v(&witness);
    let merged = pym_merge_to_vertex(&dm, s, v, &p_tails, &q_tails)?;
    let by_start: BTreeMap<Vertex, &Path> = merged.paths.iter().map(|path| (path[0], path)).collect();
    let mut paths = Vec::new();
    for path in &p.paths {
        let k = path
            .iter()
            .position(|x| s.contains(x))
            .ok_or_else(|| FlameError::internal("maximum system path misses S"))?;
        let tail = by_start
            .get(&path[k])
            .ok_or_else(|| FlameError::internal("merged system does not start at every vertex of S"))?;
        let mut full = path[..k].to_vec();
        full.extend_from_slice(tail);
        paths.push(full);
    }
    let out = PathSystem::new(PathKind::Pair, paths);
    out.verify(&dm, &ends).map_err(|e| FlameError::internal(format!("covering system: {e}")))?;
    if !is_orthogonal(&out, s) || !out.terminal_edges().is_superset(i) {
        return Err(FlameError::internal("covering system fails its postconditions"));
    }
    Ok(out)
}

/// Covering system inside a `v`-large `L`; the trivial path `rv` is added
/// when `rv ∈ I`.
pub fn covering_in_large(l: &RootedDigraph, d: &RootedDigraph, v: Vertex, i: &EdgeSet) -> Result<PathSystem> {
    let witness = is_v_large(l, d, v)?.ok_or_else(|| {
        FlameError::domain(format!("L is not {}-large with respect to D", d.name(v)))
    })?;
    let r = d.root();
    if !in_g_checked(l, v, i)? {
        return Err(FlameError::domain("I is not in G of L at v"));
    }
    let mut core = i.clone();
    let trivial = core.remove(&(r, v));
    let sep: Separation = witness.pair.separation;
    let mut sys = covering_menger_system(l, v, &core, &sep.vertices)?;
    if trivial {
        sys.paths.push(vec![r, v]);
        sys = PathSystem::new(PathKind::Pair, sys.paths);
    }
    if !sys.lies_in(l) || !sys.terminal_edges().is_superset(i) {
        return Err(FlameError::internal("covering system in L fails its postconditions"));
    }
    Ok(sys)
}

fn in_g_checked(l: &RootedDigraph, v: Vertex, i: &EdgeSet) -> Result<bool> {
    Ok(is_in_g(l, v, i)?.is_some())
}
