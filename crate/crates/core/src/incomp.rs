//! Joinability, incompressibility and the constructions built on them.
//!
//! Every entry point first deletes the in-edges of `X` and the out-edges of
//! `Y`; no `(X, Y)`-path uses them. The sides may overlap, in which case a
//! shared vertex is joined by its single-vertex path.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, Edge, EdgeSet, RootedDigraph, Vertex, VertexSet};
use crate::error::{FlameError, Result};
use crate::flame::{check_cap, interval, is_in_g};
use crate::menger::{
    augment, is_orthogonal, separates_from_root, sets_pair_overlapping, Augmentation, Ends, Path,
    PathKind, PathSystem, Separation,
};

/// Vertex-count limit for the exhaustive fallback of [`hit_all_families`].
pub const EXHAUSTIVE_LIMIT: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinWitness {
    pub system: PathSystem,
}

fn check_members(g: &Digraph, sets: &[&VertexSet]) -> Result<()> {
    for s in sets {
        if let Some(v) = s.iter().find(|v| !g.has_vertex(**v)) {
            return Err(FlameError::domain(format!("vertex {v} is not in the digraph")));
        }
    }
    Ok(())
}

/// `D` without the in-edges of `X` and the out-edges of `Y`.
pub fn preprocess(g: &Digraph, xs: &VertexSet, ys: &VertexSet) -> Digraph {
    let drop: Vec<Edge> = g
        .edges()
        .filter(|(t, h)| xs.contains(h) || ys.contains(t))
        .collect();
    g.minus_edges(&drop)
}

fn join_system(g: &Digraph, xs: &VertexSet, ys: &VertexSet) -> Option<PathSystem> {
    if xs.iter().any(|x| !g.has_vertex(*x)) {
        return None;
    }
    let h = preprocess(g, xs, ys);
    let pair = sets_pair_overlapping(&h, xs, ys);
    (pair.system.len() == xs.len()).then_some(pair.system)
}

pub(crate) fn joinable(g: &Digraph, xs: &VertexSet, ys: &VertexSet) -> bool {
    join_system(g, xs, ys).is_some()
}

/// A system with `V⁻ = X` iff `X` is joinable to `Y`.
pub fn is_joinable(g: &Digraph, xs: &VertexSet, ys: &VertexSet) -> Result<Option<JoinWitness>> {
    check_members(g, &[xs, ys])?;
    Ok(join_system(g, xs, ys).map(|system| JoinWitness { system }))
}

pub(crate) fn incompressible(g: &Digraph, xs: &VertexSet, ys: &VertexSet) -> bool {
    if !joinable(g, xs, ys) {
        return false;
    }
    ys.iter().all(|&y| {
        if xs.contains(&y) {
            return true;
        }
        let mut rest = ys.clone();
        rest.remove(&y);
        !joinable(&g.minus_vertices(&[y]), xs, &rest)
    })
}

/// Joinable, and no covering system misses a vertex of `Y`. A covering
/// system missing `y` avoids `y` altogether, so each `y` costs one flow in
/// `D - y`.
pub fn is_incompressible(g: &Digraph, xs: &VertexSet, ys: &VertexSet) -> Result<bool> {
    check_members(g, &[xs, ys])?;
    Ok(incompressible(g, xs, ys))
}

/// The ⊴-smallest Erdős-Menger `(X, Y)`-separation, returned once `X - x`
/// has been checked to be incompressible to it.
pub fn incompressible_separation(g: &Digraph, xs: &VertexSet, ys: &VertexSet, x: Vertex) -> Result<Separation> {
    check_members(g, &[xs, ys])?;
    if !xs.contains(&x) {
        return Err(FlameError::domain("x must belong to X"));
    }
    let mut rest = xs.clone();
    rest.remove(&x);
    if !joinable(g, &rest, ys) {
        return Err(FlameError::domain("X - x is not joinable to Y"));
    }
    if joinable(g, xs, ys) {
        return Err(FlameError::domain("X is joinable to Y"));
    }
    let h = preprocess(g, xs, ys);
    let s = sets_pair_overlapping(&h, xs, ys).separation.vertices;
    if !incompressible(g, &rest, &s) {
        return Err(FlameError::internal("X - x is not incompressible to the smallest separation"));
    }
    Ok(Separation::new(PathKind::Sets, s))
}

/// Concatenates each path of `front` (ending in `S`) with the segment of
/// `back` that starts at its last vertex.
fn splice(front: &PathSystem, back: &PathSystem, s: &VertexSet) -> Result<PathSystem> {
    let tails: BTreeMap<Vertex, Path> = back
        .paths
        .iter()
        .filter_map(|p| p.iter().position(|v| s.contains(v)).map(|i| (p[i], p[i..].to_vec())))
        .collect();
    let mut out = Vec::new();
    for p in &front.paths {
        let end = *p.last().expect("paths are non-empty");
        let tail = tails
            .get(&end)
            .ok_or_else(|| FlameError::internal("no continuation from the separation"))?;
        let mut full = p.clone();
        full.extend_from_slice(&tail[1..]);
        out.push(full);
    }
    Ok(PathSystem::new(PathKind::Sets, out))
}

/// `Y'' ⊆ Y` with `X` joinable to `Y''` and `|Y'' \ Y'| ≤ |X \ X'|`, by
/// repeated augmenting-walk steps from a witness of `X'` joined to `Y'`.
pub fn extend_joinable(
    g: &Digraph,
    xs: &VertexSet,
    xp: &VertexSet,
    ys: &VertexSet,
    yp: &VertexSet,
) -> Result<VertexSet> {
    check_members(g, &[xs, ys])?;
    if !xp.is_subset(xs) || !yp.is_subset(ys) {
        return Err(FlameError::domain("X' and Y' must be subsets of X and Y"));
    }
    if !xs.is_disjoint(ys) {
        return Err(FlameError::domain("X and Y must be disjoint"));
    }
    if !joinable(g, xs, ys) {
        return Err(FlameError::domain("X is not joinable to Y"));
    }
    let h = preprocess(g, xs, ys);
    let mut p = join_system(&h, xp, yp).ok_or_else(|| FlameError::domain("X' is not joinable to Y'"))?;
    let result = loop {
        if p.initial_vertices() == *xs {
            break p.terminal_vertices();
        }
        match augment(&h, xs, ys, &p)? {
            Augmentation::Grown { system, .. } => p = system,
            Augmentation::Blocked(sep) => {
                let to_s = join_system(&h, xs, &sep.vertices)
                    .ok_or_else(|| FlameError::internal("X is not joinable to a separation of a joinable pair"))?;
                break splice(&to_s, &p, &sep.vertices)?.terminal_vertices();
            }
        }
    };
    if !joinable(g, xs, &result) || result.difference(yp).count() > xs.difference(xp).count() {
        return Err(FlameError::internal("extended target fails its postconditions"));
    }
    Ok(result)
}

/// On finite digraphs every `O` between `X'` and `X` is joinable iff `X`
/// is, so this is joinability of `X` once `X' ⊆ X` is checked.
pub fn finitely_extendable(g: &Digraph, xs: &VertexSet, xp: &VertexSet, ys: &VertexSet) -> Result<bool> {
    check_members(g, &[xs, ys])?;
    if !xp.is_subset(xs) {
        return Err(FlameError::domain("X' must be a subset of X"));
    }
    Ok(joinable(g, xs, ys))
}

/// The current `(D, X, Y)` after some deletions.
#[derive(Clone)]
struct Shrinking {
    g: Digraph,
    xs: VertexSet,
    ys: VertexSet,
}

impl Shrinking {
    fn delete(&mut self, w: &VertexSet) {
        self.g = self.g.minus_vertices(w);
        self.xs = self.xs.difference(w).copied().collect();
        self.ys = self.ys.difference(w).copied().collect();
    }
}

/// `W ⊇ U` with `|W \ U| ≤ |U|` and `W \ U ⊆ X \ X'` such that `X' \ W`
/// stays `(X \ W, Y \ W)`-finitely extendable in `D - W`. Vertices of `U`
/// are handled one at a time in index order.
pub fn delete_preserving(
    g: &Digraph,
    xs: &VertexSet,
    xp: &VertexSet,
    ys: &VertexSet,
    u: &VertexSet,
) -> Result<VertexSet> {
    check_members(g, &[xs, ys, u])?;
    if !xp.is_subset(xs) {
        return Err(FlameError::domain("X' must be a subset of X"));
    }
    if !u.is_disjoint(xp) {
        return Err(FlameError::domain("U must avoid X'"));
    }
    if !joinable(g, xs, ys) {
        return Err(FlameError::domain("X' is not (X,Y)-finitely extendable"));
    }
    let y_minus: VertexSet = ys.difference(u).copied().collect();
    if !joinable(&g.minus_vertices(u), xp, &y_minus) {
        return Err(FlameError::domain("X' is not joinable to Y \\ U in D - U"));
    }
    let mut state = Shrinking { g: preprocess(g, xs, ys), xs: xs.clone(), ys: ys.clone() };
    let mut w = VertexSet::new();
    for &v in u {
        if !state.g.has_vertex(v) {
            continue;
        }
        let mut step: VertexSet = [v].into();
        if !state.xs.contains(&v) {
            let mut after = state.clone();
            after.delete(&step);
            if !joinable(&after.g, &after.xs, &after.ys) {
                let mut grown: VertexSet = xp.intersection(&after.xs).copied().collect();
                let spare: Vec<Vertex> = after.xs.difference(&grown).copied().collect();
                let mut failing = None;
                for x in spare {
                    grown.insert(x);
                    if !joinable(&after.g, &grown, &after.ys) {
                        failing = Some(x);
                        break;
                    }
                }
                let x = failing.ok_or_else(|| {
                    FlameError::internal("no failing vertex although X - v is not joinable")
                })?;
                step.insert(x);
            }
        }
        state.delete(&step);
        w.extend(step);
    }
    let extra: VertexSet = w.difference(u).copied().collect();
    let allowed: VertexSet = xs.difference(xp).copied().collect();
    if extra.len() > u.len() || !extra.is_subset(&allowed) || !joinable(&state.g, &state.xs, &state.ys) {
        return Err(FlameError::internal("deletion set fails its postconditions"));
    }
    Ok(w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HitMethod {
    Greedy,
    Exhaustive,
    /// `O = X`, valid whenever `X` is joinable and no family is empty.
    Whole,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum HitOutcome<T> {
    Found { set: T, method: HitMethod },
    NoneExists,
}

fn hits_all(o: &VertexSet, families: &[VertexSet]) -> bool {
    families.iter().all(|f| !f.is_disjoint(o))
}

/// Recursion of the intersecting-family argument: route every vertex of
/// `X'` first, then one vertex per family not yet met, deleting the path
/// and the preserving set after each step.
fn greedy_hit(g: &Digraph, xs: &VertexSet, xp: &VertexSet, ys: &VertexSet, families: &[VertexSet]) -> Result<Option<VertexSet>> {
    let mut state = Shrinking { g: preprocess(g, xs, ys), xs: xs.clone(), ys: ys.clone() };
    let mut chosen = VertexSet::new();
    let mut queue: Vec<Option<usize>> = xp.iter().map(|_| None).collect();
    queue.extend((0..families.len()).map(Some));
    let mut xp_iter = xp.iter();
    for item in queue {
        let x = match item {
            None => *xp_iter.next().expect("one slot per vertex of X'"),
            Some(i) => {
                if !families[i].is_disjoint(&chosen) {
                    continue;
                }
                match families[i].intersection(&state.xs).find(|x| !chosen.contains(x)) {
                    Some(&x) => x,
                    None => return Ok(None),
                }
            }
        };
        let cur_xp: VertexSet = xp.intersection(&state.xs).filter(|&&y| y != x).copied().collect();
        let mut with_x = cur_xp.clone();
        with_x.insert(x);
        let Some(sys) = join_system(&state.g, &with_x, &state.ys) else {
            return Ok(None);
        };
        let path = sys
            .paths
            .iter()
            .find(|p| p[0] == x)
            .ok_or_else(|| FlameError::internal("joining system lacks a path from x"))?;
        let u: VertexSet = path.iter().copied().collect();
        let rest: VertexSet = state.xs.iter().filter(|&&y| y != x || !cur_xp.contains(&y)).copied().collect();
        let w = delete_preserving(&state.g, &rest, &cur_xp, &state.ys, &u)?;
        chosen.insert(x);
        state.delete(&w);
    }
    Ok(Some(chosen))
}

/// `O` with `X' ⊆ O ⊆ X`, `O` joinable to `Y` and meeting every family.
pub fn hit_all_families(
    g: &Digraph,
    xs: &VertexSet,
    xp: &VertexSet,
    ys: &VertexSet,
    families: &[VertexSet],
) -> Result<HitOutcome<VertexSet>> {
    check_members(g, &[xs, ys])?;
    let allowed: VertexSet = xs.difference(xp).copied().collect();
    if !xp.is_subset(xs) || families.iter().any(|f| !f.is_subset(&allowed)) {
        return Err(FlameError::domain("families must be subsets of X \\ X' with X' ⊆ X"));
    }
    if !xs.is_disjoint(ys) {
        return Err(FlameError::domain("X and Y must be disjoint"));
    }
    if !joinable(g, xs, ys) {
        return Err(FlameError::domain("X' is not (X,Y)-finitely extendable"));
    }
    if families.iter().any(VertexSet::is_empty) {
        return Ok(HitOutcome::NoneExists);
    }
    if let Some(o) = greedy_hit(g, xs, xp, ys, families)? {
        let o: VertexSet = o.union(xp).copied().collect();
        if !joinable(g, &o, ys) || !hits_all(&o, families) {
            return Err(FlameError::internal("greedy hitting set fails its postconditions"));
        }
        return Ok(HitOutcome::Found { set: o, method: HitMethod::Greedy });
    }
    if g.num_vertices() > EXHAUSTIVE_LIMIT {
        return Ok(HitOutcome::Found { set: xs.clone(), method: HitMethod::Whole });
    }
    let free: Vec<Vertex> = allowed.into_iter().collect();
    let mut cands: Vec<VertexSet> = (0u64..1 << free.len())
        .map(|m| free.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &v)| v).collect())
        .collect();
    cands.sort_by(|a: &VertexSet, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    for extra in cands {
        let o: VertexSet = xp.union(&extra).copied().collect();
        if hits_all(&o, families) && joinable(g, &o, ys) {
            return Ok(HitOutcome::Found { set: o, method: HitMethod::Exhaustive });
        }
    }
    Err(FlameError::internal("X itself should have been found by the exhaustive search"))
}

/// `D` with the in-edges of `w` and the out-edges of `r` subdivided, `r`
/// and `w` deleted, and every edge reversed.
#[derive(Clone, Debug)]
pub struct AuxiliaryGraph {
    pub digraph: Digraph,
    pub xs: VertexSet,
    pub ys: VertexSet,
    pub x_of: BTreeMap<Edge, Vertex>,
    pub y_of: BTreeMap<Edge, Vertex>,
    pub edge_of: BTreeMap<Vertex, Edge>,
    root: Vertex,
    w: Vertex,
}

impl AuxiliaryGraph {
    /// `X_I`
    pub fn x_set(&self, i: &EdgeSet) -> VertexSet {
        i.iter().filter_map(|e| self.x_of.get(e)).copied().collect()
    }

    /// In-edges of `w` named by a set of `x`-vertices.
    pub fn edges_of(&self, xs: &VertexSet) -> EdgeSet {
        xs.iter().filter_map(|x| self.edge_of.get(x)).copied().collect()
    }

    /// Maps an `(X, Y)`-path of `A` back to the `(r, w)`-path it encodes.
    pub fn to_original(&self, p: &Path) -> Path {
        let mut out = vec![self.root];
        out.extend(p[1..p.len() - 1].iter().rev());
        out.push(self.w);
        out
    }

    /// Maps an `(r, w)`-path of `D` to its image in `A`.
    pub fn from_original(&self, p: &Path) -> Path {
        let n = p.len();
        let mut out = vec![self.x_of[&(p[n - 2], p[n - 1])]];
        out.extend(p[1..n - 1].iter().rev());
        out.push(self.y_of[&(p[0], p[1])]);
        out
    }

    pub fn system_to_original(&self, s: &PathSystem) -> PathSystem {
        PathSystem::new(PathKind::Pair, s.paths.iter().map(|p| self.to_original(p)).collect())
    }
}

pub fn build_auxiliary(d: &RootedDigraph, w: Vertex) -> Result<AuxiliaryGraph> {
    let r = d.root();
    if w == r || !d.has_vertex(w) {
        return Err(FlameError::domain("w must be a non-root vertex"));
    }
    if d.has_edge((r, w)) {
        return Err(FlameError::domain(format!(
            "{} is present; excise it before building the auxiliary digraph",
            d.edge_label((r, w))
        )));
    }
    let mut names = d.names().to_vec();
    let mut vs: VertexSet = d.vertices().iter().copied().filter(|&v| v != r && v != w).collect();
    let mut es = EdgeSet::new();
    let mut x_of = BTreeMap::new();
    let mut y_of = BTreeMap::new();
    let mut edge_of = BTreeMap::new();
    let fresh = |names: &mut Vec<String>, label: String| {
        names.push(label);
        names.len() - 1
    };
    for e in d.in_edges(w) {
        let x = fresh(&mut names, format!("__x_{}_{}", d.name(e.0), d.name(e.1)));
        vs.insert(x);
        x_of.insert(e, x);
        edge_of.insert(x, e);
        es.insert((x, e.0));
    }
    for e in d.out_edges(r) {
        let y = fresh(&mut names, format!("__y_{}_{}", d.name(e.0), d.name(e.1)));
        vs.insert(y);
        y_of.insert(e, y);
        edge_of.insert(y, e);
        es.insert((e.1, y));
    }
    for (a, b) in d.edges() {
        if a != r && b != w && a != w {
            es.insert((b, a));
        }
    }
    Ok(AuxiliaryGraph {
        digraph: Digraph::new(names, vs, es)?,
        xs: x_of.values().copied().collect(),
        ys: y_of.values().copied().collect(),
        x_of,
        y_of,
        edge_of,
        root: r,
        w,
    })
}

/// `I₀* ⊇ I` in `𝒢_D(w)` meeting every family. When `rw` is present it is
/// set aside, the rest is solved in `D - rw`, and `rw` is put back if it was
/// in `I` or if some family contains it.
pub fn extend_hitting_g(
    d: &RootedDigraph,
    w: Vertex,
    i: &EdgeSet,
    families: &[EdgeSet],
    cap: usize,
) -> Result<HitOutcome<EdgeSet>> {
    let r = d.root();
    let in_w = d.in_edges(w);
    if families.iter().any(|f| !f.is_subset(&in_w) || !f.is_disjoint(i)) {
        return Err(FlameError::domain("families must be subsets of in(w) \\ I"));
    }
    if is_in_g(d, w, i)?.is_none() {
        return Err(FlameError::domain("I is not in G at w"));
    }
    check_cap(d, cap)?;
    for j in interval(i, &in_w) {
        if is_in_g(d, w, &j)?.is_none() {
            return Err(FlameError::domain("some superset of I is not in G at w"));
        }
    }
    let rw = (r, w);
    let use_rw = d.has_edge(rw) && (i.contains(&rw) || families.iter().any(|f| f.contains(&rw)));
    let dm = d.without_root_edge(w);
    let mut core = i.clone();
    core.remove(&rw);
    let fams: Vec<EdgeSet> = families
        .iter()
        .filter(|f| !(use_rw && f.contains(&rw)))
        .cloned()
        .collect();
    let aux = build_auxiliary(&dm, w)?;
    let xfams: Vec<VertexSet> = fams.iter().map(|f| aux.x_set(f)).collect();
    let outcome = hit_all_families(&aux.digraph, &aux.xs, &aux.x_set(&core), &aux.ys, &xfams)?;
    Ok(match outcome {
        HitOutcome::Found { set, method } => {
            let mut edges = aux.edges_of(&set);
            if use_rw {
                edges.insert(rw);
            }
            if !edges.is_superset(i)
                || is_in_g(d, w, &edges)?.is_none()
                || families.iter().any(|f| f.is_disjoint(&edges))
            {
                return Err(FlameError::internal("extended edge set fails its postconditions"));
            }
            HitOutcome::Found { set: edges, method }
        }
        HitOutcome::NoneExists => HitOutcome::NoneExists,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BubbleBranch {
    /// `S = S''`
    Separator,
    /// `S = S'' + w`
    WithTarget,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BubbleResult {
    pub separation: VertexSet,
    pub system: PathSystem,
    pub branch: BubbleBranch,
}

fn bubble_checks(d: &RootedDigraph, w: Vertex, i: &EdgeSet, (u, v): Edge) -> Result<()> {
    let fail = |clause: &str| Err(FlameError::domain(format!("bubble precondition failed: {clause}")));
    if w == d.root() || !d.has_vertex(w) {
        return fail("w is a non-root vertex");
    }
    if !d.has_edge((u, v)) || u == d.root() || v == w {
        return fail("uv is an edge with u != r and v != w");
    }
    if is_in_g(d, w, i)?.is_none() {
        return fail("I in G_D(w)");
    }
    for &f in d.in_edges(w).difference(i) {
        let mut j = i.clone();
        j.insert(f);
        if is_in_g(d, w, &j)?.is_none() {
            return fail("I + f in G_D(w) for every f in in_D(w) \\ I");
        }
    }
    if is_in_g(&d.minus_edge((u, v)), w, i)?.is_some() {
        return fail("I not in G_{D-uv}(w)");
    }
    Ok(())
}

fn tails_separated(d: &RootedDigraph, (u, v): Edge, s: &VertexSet) -> bool {
    d.in_neighbors(v).filter(|&t| t != u).all(|t| separates_from_root(d, t, s))
}

fn bubble_post(d: &RootedDigraph, uv: Edge, res: &BubbleResult) -> Result<()> {
    let r = d.root();
    let s = &res.separation;
    let ok = !s.contains(&r)
        && s.contains(&uv.1)
        && res.system.verify(d, &Ends::SourceToSet(r, s.clone())).is_ok()
        && res.system.terminal_vertices() == *s
        && tails_separated(d, uv, s)
        && res.system.paths.iter().any(|p| p.len() >= 2 && (p[p.len() - 2], p[p.len() - 1]) == uv);
    if !ok {
        return Err(FlameError::internal("bubble output fails its postconditions"));
    }
    Ok(())
}

/// The separation `S ∋ v` and `(r, S)`-system with `V⁺ = S` around an edge
/// `uv` that every witness of `I ∈ 𝒢_D(w)` needs.
pub fn bubble(d: &RootedDigraph, w: Vertex, i: &EdgeSet, uv: Edge) -> Result<BubbleResult> {
    bubble_checks(d, w, i, uv)?;
    let r = d.root();
    let rw = (r, w);
    if d.has_edge(rw) {
        let dm = d.minus_edge(rw);
        let mut core = i.clone();
        core.remove(&rw);
        let mut res = bubble_core(&dm, w, &core, uv)?;
        if !tails_separated(d, uv, &res.separation) {
            res.separation.insert(w);
            res.system.paths.push(vec![r, w]);
            res.system = PathSystem::new(PathKind::SourceToSet, res.system.paths);
        }
        bubble_post(d, uv, &res)?;
        return Ok(res);
    }
    let res = bubble_core(d, w, i, uv)?;
    bubble_post(d, uv, &res)?;
    Ok(res)
}

fn bubble_core(d: &RootedDigraph, w: Vertex, i: &EdgeSet, (u, v): Edge) -> Result<BubbleResult> {
    let witness = is_in_g(d, w, i)?
        .ok_or_else(|| FlameError::internal("I left G after excising rw"))?
        .system;
    let p_i0 = witness
        .paths
        .iter()
        .find(|p| p.windows(2).any(|e| (e[0], e[1]) == (u, v)))
        .ok_or_else(|| FlameError::internal("no witness path uses uv"))?;
    let n = p_i0.len();
    let i0 = (p_i0[n - 2], p_i0[n - 1]);
    let aux = build_auxiliary(d, w)?;
    let a_minus = aux.digraph.minus_edge((v, u));
    let x_i = aux.x_set(i);
    let mut x_rest = x_i.clone();
    x_rest.remove(&aux.x_of[&i0]);
    let h = preprocess(&a_minus, &x_i, &aux.ys);
    let s1 = sets_pair_overlapping(&h, &x_i, &aux.ys).separation.vertices;
    if cfg!(debug_assertions) && !incompressible(&a_minus, &x_rest, &s1) {
        return Err(FlameError::internal("X_I - x_i0 is not incompressible to S'"));
    }
    let swapped: VertexSet = s1
        .iter()
        .map(|&s| match aux.edge_of.get(&s) {
            Some(&(t, h)) if aux.xs.contains(&s) => {
                debug_assert_eq!(h, w);
                t
            }
            Some(&(_, h)) => h,
            None => s,
        })
        .collect();
    let mut s2 = swapped;
    s2.insert(v);
    if tails_separated(d, (u, v), &s2) {
        let system = witness.truncate_at_first(&s2, PathKind::SourceToSet);
        return Ok(BubbleResult { separation: s2, system, branch: BubbleBranch::Separator });
    }
    let f = *d
        .in_edges(w)
        .difference(i)
        .next()
        .ok_or_else(|| FlameError::internal("second branch needs an edge outside I"))?;
    let mut j = i.clone();
    j.insert(f);
    let rsys = is_in_g(d, w, &j)?
        .ok_or_else(|| FlameError::internal("I + f left G"))?
        .system;
    let mut s = s2;
    s.insert(w);
    let system = rsys.truncate_at_first(&s, PathKind::SourceToSet);
    Ok(BubbleResult { separation: s, system, branch: BubbleBranch::WithTarget })
}

/// `S ⊥ 𝒫` for the `(r, S)` kind: convenience re-export for callers
/// verifying bubble output by hand.
pub fn bubble_is_covering(res: &BubbleResult) -> bool {
    res.system.terminal_vertices() == res.separation && is_orthogonal(&res.system, &res.separation)
}
