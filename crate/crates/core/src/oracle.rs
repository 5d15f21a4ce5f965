//! Brute-force oracles. Everything here works by enumerating paths and
//! subsets directly from the definitions and shares no code with the flow
//! engine, so agreement between the two is meaningful.

use std::collections::BTreeSet;

use crate::digraph::{Digraph, EdgeSet, RootedDigraph, Vertex, VertexSet};
use crate::error::{FlameError, Result};
use crate::menger::{Ends, Path, PathSystem};

/// Hard cap on the number of vertices the oracles accept.
pub const ORACLE_CAP: usize = 8;

fn check_cap(g: &Digraph) -> Result<()> {
    if g.num_vertices() > ORACLE_CAP {
        return Err(FlameError::cap("vertex count", g.num_vertices(), ORACLE_CAP));
    }
    Ok(())
}

fn subsets<T: Ord + Copy>(items: &[T]) -> impl Iterator<Item = BTreeSet<T>> + '_ {
    (0u64..1 << items.len()).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &t)| t)
            .collect()
    })
}

/// Every path between `ends` (no disjointness requirement between paths).
/// Unlike the flow side, pair ends may be adjacent: the edge `xy` yields the
/// trivial path.
pub fn all_paths(g: &Digraph, ends: &Ends) -> Result<Vec<Path>> {
    check_cap(g)?;
    let sources = ends.sources();
    let targets = ends.targets();
    let no_inside: VertexSet = match ends {
        Ends::Pair(..) => VertexSet::new(),
        Ends::Sets(..) => sources.union(&targets).copied().collect(),
        Ends::SourceToSet(..) => targets.clone(),
        Ends::SetToSink(..) => sources.clone(),
    };
    let mut out = Vec::new();
    for &s in sources.iter().filter(|&&s| g.has_vertex(s)) {
        let mut stack = vec![s];
        dfs_paths(g, &targets, &no_inside, ends, &mut stack, &mut out);
    }
    out.sort();
    Ok(out)
}

fn dfs_paths(
    g: &Digraph,
    targets: &VertexSet,
    no_inside: &VertexSet,
    ends: &Ends,
    stack: &mut Vec<Vertex>,
    out: &mut Vec<Path>,
) {
    let last = *stack.last().unwrap();
    if targets.contains(&last) {
        if stack.len() > 1 || matches!(ends, Ends::Sets(..)) {
            out.push(stack.clone());
        }
        return;
    }
    for w in g.out_neighbors(last).collect::<Vec<_>>() {
        if stack.contains(&w) {
            continue;
        }
        if no_inside.contains(&w) && !targets.contains(&w) {
            continue;
        }
        stack.push(w);
        dfs_paths(g, targets, no_inside, ends, stack, out);
        stack.pop();
    }
}

fn compatible(p: &Path, q: &Path, shared: &VertexSet) -> bool {
    p != q
        && p
            .iter()
            .filter(|v| !shared.contains(v))
            .all(|v| !q.contains(v))
}

fn shared_of(ends: &Ends) -> VertexSet {
    match ends {
        Ends::Pair(x, y) => [*x, *y].into(),
        Ends::Sets(..) => VertexSet::new(),
        Ends::SourceToSet(x, _) => [*x].into(),
        Ends::SetToSink(_, y) => [*y].into(),
    }
}

/// Every path-system between `ends`, including the empty one, ordered by
/// size and then lexicographically.
pub fn all_systems(g: &Digraph, ends: &Ends) -> Result<Vec<PathSystem>> {
    let paths = all_paths(g, ends)?;
    let shared = shared_of(ends);
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    grow(&paths, &shared, 0, &mut chosen, &mut |sel| {
        out.push(PathSystem::new(ends.kind(), sel.iter().map(|&i| paths[i].clone()).collect()));
    });
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.paths.cmp(&b.paths)));
    Ok(out)
}

fn grow(
    paths: &[Path],
    shared: &VertexSet,
    from: usize,
    chosen: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    emit(chosen);
    for i in from..paths.len() {
        if chosen.iter().all(|&j| compatible(&paths[i], &paths[j], shared)) {
            chosen.push(i);
            grow(paths, shared, i + 1, chosen, emit);
            chosen.pop();
        }
    }
}

/// Every internally disjoint `(r, v)`-path-system of `D`, the trivial path
/// `rv` included.
pub fn brute_all_path_systems(d: &RootedDigraph, v: Vertex) -> Result<Vec<PathSystem>> {
    if v == d.root() {
        return Err(FlameError::domain("target must differ from the root"));
    }
    all_systems(d, &Ends::Pair(d.root(), v))
}

/// Counts the same systems as [`brute_all_path_systems`] by a different
/// traversal: one decision per in-edge of `v` (skip it, or end a new path
/// with it), extending paths backwards from `v`.
pub fn count_path_systems_by_terminal_edge(d: &RootedDigraph, v: Vertex) -> Result<usize> {
    check_cap(d)?;
    let r = d.root();
    let ins: Vec<Vertex> = d.in_neighbors(v).collect();
    fn backward(
        d: &RootedDigraph,
        r: Vertex,
        used: &mut VertexSet,
        cur: Vertex,
        k: &mut dyn FnMut(&mut VertexSet),
    ) {
        if cur == r {
            k(used);
            return;
        }
        for p in d.in_neighbors(cur).collect::<Vec<_>>() {
            if p == r {
                backward(d, r, used, r, k);
            } else if !used.contains(&p) {
                used.insert(p);
                backward(d, r, used, p, k);
                used.remove(&p);
            }
        }
    }
    fn step(d: &RootedDigraph, r: Vertex, ins: &[Vertex], i: usize, used: &mut VertexSet) -> usize {
        if i == ins.len() {
            return 1;
        }
        let mut total = step(d, r, ins, i + 1, used);
        let u = ins[i];
        if u == r {
            total += step(d, r, ins, i + 1, used);
        } else if !used.contains(&u) {
            used.insert(u);
            let mut acc = 0;
            backward(d, r, used, u, &mut |used| acc += step(d, r, ins, i + 1, used));
            total += acc;
            used.remove(&u);
        }
        total
    }
    let mut used: VertexSet = [v].into();
    Ok(step(d, r, &ins, 0, &mut used))
}

/// `𝒢_D(v)` as a sorted list.
pub fn brute_g(d: &RootedDigraph, v: Vertex) -> Result<Vec<EdgeSet>> {
    let set: BTreeSet<EdgeSet> = brute_all_path_systems(d, v)?
        .iter()
        .map(PathSystem::terminal_edges)
        .collect();
    Ok(set.into_iter().collect())
}

pub fn brute_in_g(d: &RootedDigraph, v: Vertex, i: &EdgeSet) -> Result<bool> {
    Ok(brute_g(d, v)?.contains(i))
}

pub fn brute_kappa(d: &RootedDigraph, v: Vertex) -> Result<usize> {
    Ok(brute_all_path_systems(d, v)?.iter().map(PathSystem::len).max().unwrap_or(0))
}

pub fn brute_max_system_size(g: &Digraph, ends: &Ends) -> Result<usize> {
    Ok(all_systems(g, ends)?.iter().map(PathSystem::len).max().unwrap_or(0))
}

/// Whether `s` meets every path between `ends`, by path enumeration. Pair
/// separations may not contain the ends.
pub fn brute_separates(g: &Digraph, ends: &Ends, s: &VertexSet) -> Result<bool> {
    if let Ends::Pair(x, y) = ends {
        if s.contains(x) || s.contains(y) {
            return Ok(false);
        }
    }
    Ok(all_paths(g, ends)?.iter().all(|p| p.iter().any(|v| s.contains(v))))
}

fn candidate_vertices(g: &Digraph, ends: &Ends) -> Vec<Vertex> {
    let excluded: VertexSet = match ends {
        Ends::Pair(x, y) => [*x, *y].into(),
        _ => VertexSet::new(),
    };
    g.vertices().iter().copied().filter(|v| !excluded.contains(v)).collect()
}

/// Every separating set between `ends`.
pub fn brute_all_separating_sets(g: &Digraph, ends: &Ends) -> Result<Vec<VertexSet>> {
    let paths = all_paths(g, ends)?;
    let cand = candidate_vertices(g, ends);
    Ok(subsets(&cand)
        .filter(|s| paths.iter().all(|p| p.iter().any(|v| s.contains(v))))
        .collect())
}

pub fn brute_min_separation_size(g: &Digraph, ends: &Ends) -> Result<Option<usize>> {
    Ok(brute_all_separating_sets(g, ends)?.iter().map(BTreeSet::len).min())
}

fn orthogonal(p: &PathSystem, s: &VertexSet) -> bool {
    p.paths.iter().all(|q| q.iter().filter(|v| s.contains(v)).count() == 1)
        && s.iter().all(|v| p.paths.iter().any(|q| q.contains(v)))
}

/// Every Erdős-Menger separation: separating sets orthogonal to some
/// path-system, found by pairing the enumerations literally.
pub fn brute_separations(g: &Digraph, ends: &Ends) -> Result<Vec<VertexSet>> {
    let systems = all_systems(g, ends)?;
    let seps = brute_all_separating_sets(g, ends)?;
    let mut out: Vec<VertexSet> = seps
        .into_iter()
        .filter(|s| systems.iter().any(|p| p.len() == s.len() && orthogonal(p, s)))
        .collect();
    out.sort();
    Ok(out)
}

/// `S ⊴ T` by enumerating every path from the source side to `T`.
pub fn brute_leq(g: &Digraph, ends: &Ends, s: &VertexSet, t: &VertexSet) -> Result<bool> {
    let to_t = match ends {
        Ends::Pair(x, _) | Ends::SourceToSet(x, _) => {
            if s.contains(x) {
                return Ok(false);
            }
            Ends::SourceToSet(*x, t.clone())
        }
        Ends::Sets(xs, _) | Ends::SetToSink(xs, _) => Ends::Sets(xs.clone(), t.clone()),
    };
    let paths = all_paths(g, &to_t)?;
    Ok(paths.iter().all(|p| p.iter().any(|v| s.contains(v))))
}

/// All `(X, Y)`-path-systems with `V⁻ = X`.
pub fn brute_join_systems(g: &Digraph, xs: &VertexSet, ys: &VertexSet) -> Result<Vec<PathSystem>> {
    Ok(all_systems(g, &Ends::Sets(xs.clone(), ys.clone()))?
        .into_iter()
        .filter(|p| p.initial_vertices() == *xs)
        .collect())
}

pub fn brute_joinable(g: &Digraph, xs: &VertexSet, ys: &VertexSet) -> Result<bool> {
    Ok(!brute_join_systems(g, xs, ys)?.is_empty())
}

/// Joinable, and every covering system also covers `Y`.
pub fn brute_incompressible(g: &Digraph, xs: &VertexSet, ys: &VertexSet) -> Result<bool> {
    let js = brute_join_systems(g, xs, ys)?;
    Ok(!js.is_empty() && js.iter().all(|p| p.terminal_vertices() == *ys))
}

/// Every `O` with `Xp ⊆ O ⊆ X` is joinable to `Y`.
pub fn brute_finitely_extendable(
    g: &Digraph,
    xs: &VertexSet,
    xp: &VertexSet,
    ys: &VertexSet,
) -> Result<bool> {
    let systems = all_systems(g, &Ends::Sets(xs.clone(), ys.clone()))?;
    let covered: BTreeSet<VertexSet> = systems.iter().map(PathSystem::initial_vertices).collect();
    let rest: Vec<Vertex> = xs.difference(xp).copied().collect();
    let all = subsets(&rest).all(|extra| {
        let o: VertexSet = xp.union(&extra).copied().collect();
        covered.contains(&o)
    });
    Ok(all)
}

/// Search for `𝒫 ⊆ L` and an `(r, v)`-separation `S` of `D - rv` with
/// `𝒫 ⊥ S`, plus the `rv` condition.
pub fn brute_is_v_large(l: &RootedDigraph, d: &RootedDigraph, v: Vertex) -> Result<bool> {
    let r = d.root();
    if d.has_edge((r, v)) && !l.has_edge((r, v)) {
        return Ok(false);
    }
    let ends = Ends::Pair(r, v);
    let systems = all_systems(&l.without_root_edge(v), &ends)?;
    let seps = brute_all_separating_sets(&d.without_root_edge(v), &ends)?;
    Ok(seps.iter().any(|s| systems.iter().any(|p| orthogonal(p, s))))
}

pub fn brute_is_large(l: &RootedDigraph, d: &RootedDigraph) -> Result<bool> {
    for v in d.non_root_vertices().collect::<Vec<_>>() {
        if !brute_is_v_large(l, d, v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn brute_is_flame(f: &RootedDigraph) -> Result<bool> {
    for v in f.non_root_vertices().collect::<Vec<_>>() {
        if !brute_in_g(f, v, &f.in_edges(v))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First `(v, I)` with `in_G(v) ⊆ I ⊆ in_D(v)` and `I ∉ 𝒢_D(v)`.
pub fn brute_quasi_flame_violation(
    d: &RootedDigraph,
    g: &RootedDigraph,
) -> Result<Option<(Vertex, EdgeSet)>> {
    for v in d.non_root_vertices().collect::<Vec<_>>() {
        let fam: BTreeSet<EdgeSet> = brute_g(d, v)?.into_iter().collect();
        let base = g.in_edges(v);
        let free: Vec<_> = d.in_edges(v).difference(&base).copied().collect();
        for extra in subsets(&free) {
            let i: EdgeSet = base.union(&extra).copied().collect();
            if !fam.contains(&i) {
                return Ok(Some((v, i)));
            }
        }
    }
    Ok(None)
}

/// For every `uv ∈ E(D) \ E(G)`: some `I ∈ 𝒢_G(v)` with
/// `I + uv ∉ 𝒢_{G+uv}(v)`.
pub fn brute_superlarge(g: &RootedDigraph, d: &RootedDigraph) -> Result<bool> {
    for e in d.edge_set().difference(g.edge_set()) {
        let v = e.1;
        let gg = g.plus_edge(*e);
        let with: BTreeSet<EdgeSet> = brute_g(&gg, v)?.into_iter().collect();
        let ok = brute_g(g, v)?.into_iter().any(|mut i| {
            i.insert(*e);
            !with.contains(&i)
        });
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}
