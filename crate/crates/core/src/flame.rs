//! `𝒢`-membership, flames, quasi-flames and largeness.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::digraph::{Edge, EdgeSet, RootedDigraph, Vertex};
use crate::error::{FlameError, Result};
use crate::menger::{erdos_menger, max_disjoint_paths, min_separation, Ends, OrthogonalPair, PathSystem};

/// Default bound on in-degrees for the interval-lattice checks.
pub const DEFAULT_CAP: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GWitness {
    pub vertex: Vertex,
    pub edges: EdgeSet,
    pub system: PathSystem,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargenessWitness {
    pub vertex: Vertex,
    pub pair: OrthogonalPair,
    pub rv_preserved: bool,
}

/// `I ∈ 𝒢_D(v)`, decided as `κ(D ↾_v I) = |I|`. The witness is the
/// maximum system of the restriction, whose terminal edges are exactly `I`.
pub fn is_in_g(d: &RootedDigraph, v: Vertex, i: &EdgeSet) -> Result<Option<GWitness>> {
    let restricted = d.restrict_at(v, i)?;
    let system = max_disjoint_paths(&restricted, v)?;
    if system.len() != i.len() {
        return Ok(None);
    }
    if system.terminal_edges() != *i {
        return Err(FlameError::internal("maximum system of the restriction misses an edge of I"));
    }
    Ok(Some(GWitness { vertex: v, edges: i.clone(), system }))
}

pub fn in_g(d: &RootedDigraph, v: Vertex, i: &EdgeSet) -> Result<bool> {
    Ok(is_in_g(d, v, i)?.is_some())
}

/// First vertex `v` with `in_F(v) ∉ 𝒢_F(v)`.
pub fn flame_violation(f: &RootedDigraph) -> Result<Option<Vertex>> {
    for v in f.non_root_vertices() {
        if !in_g(f, v, &f.in_edges(v))? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Witnesses for every non-root vertex iff `F` is a flame.
pub fn is_flame(f: &RootedDigraph) -> Result<Option<BTreeMap<Vertex, GWitness>>> {
    let mut out = BTreeMap::new();
    for v in f.non_root_vertices() {
        match is_in_g(f, v, &f.in_edges(v))? {
            Some(w) => {
                out.insert(v, w);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

pub(crate) fn check_spanning(l: &RootedDigraph, d: &RootedDigraph) -> Result<()> {
    if l.root() != d.root() || !l.is_spanning_subgraph_of(d) {
        return Err(FlameError::domain("L must be a spanning subgraph of D with the same root"));
    }
    Ok(())
}

/// `L` is `v`-large with respect to `D`. The witness pairs a maximum system
/// of `L - rv` with the closest-to-root minimum separation of `D - rv`.
pub fn is_v_large(l: &RootedDigraph, d: &RootedDigraph, v: Vertex) -> Result<Option<LargenessWitness>> {
    check_spanning(l, d)?;
    if v == d.root() {
        return Err(FlameError::domain("target must differ from the root"));
    }
    let r = d.root();
    let rv_preserved = !d.has_edge((r, v)) || l.has_edge((r, v));
    if !rv_preserved {
        return Ok(None);
    }
    let ends = Ends::Pair(r, v);
    let in_l = erdos_menger(&l.without_root_edge(v), &ends)?;
    let sep = min_separation(&d.without_root_edge(v), &ends)?;
    if in_l.system.len() != sep.len() {
        return Ok(None);
    }
    let pair = OrthogonalPair { system: in_l.system, separation: sep };
    if !pair.is_orthogonal() {
        return Err(FlameError::internal("maximum system of L is not orthogonal to a minimum separation of D"));
    }
    Ok(Some(LargenessWitness { vertex: v, pair, rv_preserved }))
}

fn large_over(
    l: &RootedDigraph,
    d: &RootedDigraph,
    vs: impl Iterator<Item = Vertex>,
) -> Result<Option<BTreeMap<Vertex, LargenessWitness>>> {
    let mut out = BTreeMap::new();
    for v in vs {
        match is_v_large(l, d, v)? {
            Some(w) => {
                out.insert(v, w);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Largeness checked only on `M = {v : in_L(v) ⊊ in_D(v)}`.
pub fn is_large(l: &RootedDigraph, d: &RootedDigraph) -> Result<Option<BTreeMap<Vertex, LargenessWitness>>> {
    check_spanning(l, d)?;
    let m: Vec<Vertex> = d
        .non_root_vertices()
        .filter(|&v| l.in_degree(v) < d.in_degree(v))
        .collect();
    large_over(l, d, m.into_iter())
}

/// Largeness checked at every non-root vertex.
pub fn is_large_all(l: &RootedDigraph, d: &RootedDigraph) -> Result<Option<BTreeMap<Vertex, LargenessWitness>>> {
    check_spanning(l, d)?;
    large_over(l, d, d.non_root_vertices())
}

pub(crate) fn check_cap(d: &RootedDigraph, cap: usize) -> Result<()> {
    let deg = d.max_in_degree();
    if deg > cap {
        return Err(FlameError::cap("maximum in-degree", deg, cap));
    }
    Ok(())
}

/// All `I` with `lo ⊆ I ⊆ hi`, in increasing bitmask order over `hi \ lo`.
pub(crate) fn interval(lo: &EdgeSet, hi: &EdgeSet) -> impl Iterator<Item = EdgeSet> {
    let lo = lo.clone();
    let free: Vec<Edge> = hi.difference(&lo).copied().collect();
    (0u64..1 << free.len()).map(move |mask| {
        let mut i = lo.clone();
        i.extend(free.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e));
        i
    })
}

/// First `I ∈ [in_G(v), in_D(v)]` missing from `𝒢_D(v)`.
pub(crate) fn quasi_flame_violation_at(
    d: &RootedDigraph,
    g: &RootedDigraph,
    v: Vertex,
) -> Result<Option<EdgeSet>> {
    for i in interval(&g.in_edges(v), &d.in_edges(v)) {
        if !in_g(d, v, &i)? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// First counterexample `(v, I)` to `D` being a `G`-quasi-flame.
pub fn quasi_flame_violation(
    d: &RootedDigraph,
    g: &RootedDigraph,
    cap: usize,
) -> Result<Option<(Vertex, EdgeSet)>> {
    check_spanning(g, d)?;
    check_cap(d, cap)?;
    for v in d.non_root_vertices() {
        if let Some(i) = quasi_flame_violation_at(d, g, v)? {
            return Ok(Some((v, i)));
        }
    }
    Ok(None)
}

pub fn is_quasi_flame(d: &RootedDigraph, g: &RootedDigraph, cap: usize) -> Result<bool> {
    Ok(quasi_flame_violation(d, g, cap)?.is_none())
}

/// For every `uv ∈ E(D) \ E(G)`, the first `I ∈ 𝒢_G(v)` (over subsets of
/// `in_G(v)`) with `I + uv ∉ 𝒢_{G+uv}(v)`. `None` if some edge has none.
pub fn superlarge_condition(
    g: &RootedDigraph,
    d: &RootedDigraph,
    cap: usize,
) -> Result<Option<BTreeMap<Edge, EdgeSet>>> {
    check_spanning(g, d)?;
    check_cap(d, cap)?;
    let mut out = BTreeMap::new();
    for &e in d.edge_set().difference(g.edge_set()) {
        let v = e.1;
        let plus = g.plus_edge(e);
        let mut found = None;
        for i in interval(&EdgeSet::new(), &g.in_edges(v)) {
            if !in_g(g, v, &i)? {
                continue;
            }
            let mut j = i.clone();
            j.insert(e);
            if !in_g(&plus, v, &j)? {
                found = Some(i);
                break;
            }
        }
        match found {
            Some(i) => {
                out.insert(e, i);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Greedy maximal flame in `D` containing the flame `F`, with the same
/// candidate order as [`maximal_quasi_flame`]. Only `in(v) ∈ 𝒢(v)` at the
/// head is tested, so no cap applies.
pub fn maximal_flame(d: &RootedDigraph, f: &RootedDigraph) -> Result<RootedDigraph> {
    check_spanning(f, d)?;
    if let Some(v) = flame_violation(f)? {
        return Err(FlameError::domain(format!("F is not a flame at {}", f.name(v))));
    }
    let mut z = f.clone();
    let mut rest: Vec<Edge> = d.edge_set().difference(f.edge_set()).copied().collect();
    rest.sort_by_key(|&(t, h)| (h, t));
    loop {
        let before = rest.len();
        let mut keep = Vec::new();
        for e in rest {
            let cand = z.plus_edge(e);
            if in_g(&cand, e.1, &cand.in_edges(e.1))? {
                z = cand;
            } else {
                keep.push(e);
            }
        }
        rest = keep;
        if rest.len() == before {
            break;
        }
    }
    Ok(z)
}

/// Greedy maximal `F`-quasi-flame inside `D`: candidate edges in
/// `(head, tail)` order, repeated passes until nothing more fits. Adding an
/// edge only changes `𝒢` at its head, so each candidate is tested there.
pub fn maximal_quasi_flame(d: &RootedDigraph, f: &RootedDigraph, cap: usize) -> Result<RootedDigraph> {
    check_spanning(f, d)?;
    check_cap(d, cap)?;
    if let Some(v) = flame_violation(f)? {
        return Err(FlameError::domain(format!("F is not a flame at {}", f.name(v))));
    }
    let mut z = f.clone();
    let mut rest: Vec<Edge> = d.edge_set().difference(f.edge_set()).copied().collect();
    rest.sort_by_key(|&(t, h)| (h, t));
    loop {
        let mut grew = false;
        let mut keep = Vec::new();
        for e in rest {
            let cand = z.plus_edge(e);
            if quasi_flame_violation_at(&cand, f, e.1)?.is_none() {
                z = cand;
                grew = true;
            } else {
                keep.push(e);
            }
        }
        rest = keep;
        if !grew {
            break;
        }
    }
    if cfg!(debug_assertions) && quasi_flame_violation(&z, f, cap)?.is_some() {
        return Err(FlameError::internal("greedy quasi-flame lost the property"));
    }
    Ok(z)
}
