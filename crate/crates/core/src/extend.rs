//! Extending a flame to a large flame.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::digraph::{Edge, EdgeSet, RootedDigraph, Vertex, VertexSet};
use crate::error::{FlameError, Result};
use crate::flame::{
    check_cap, check_spanning, flame_violation, in_g, interval, is_flame, is_large_all, maximal_flame, maximal_quasi_flame,
    quasi_flame_violation, GWitness, LargenessWitness,
};
use crate::menger::{kappa, separates_from_root, PathSystem};
use crate::pym::covering_in_large;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Faithful,
    #[default]
    FiniteDirect,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Faithful => "faithful",
            Mode::FiniteDirect => "finite-direct",
        }
    }
}

/// `⋁𝒮`: the vertices of `∪𝒮` that every member separates from `r`.
pub fn separation_supremum(d: &RootedDigraph, x: Vertex, collection: &[VertexSet]) -> Result<VertexSet> {
    let r = d.root();
    if collection.is_empty() {
        return Err(FlameError::domain("collection must be non-empty"));
    }
    for s in collection {
        if s.contains(&r) || s.iter().any(|v| !d.has_vertex(*v)) {
            return Err(FlameError::domain("separations must be vertex sets avoiding the root"));
        }
        if !separates_from_root(d, x, s) {
            return Err(FlameError::domain("every member must separate x from r"));
        }
    }
    let union: VertexSet = collection.iter().flatten().copied().collect();
    let sup: VertexSet = union
        .into_iter()
        .filter(|&s| collection.iter().all(|c| separates_from_root(d, s, c)))
        .collect();
    if !separates_from_root(d, x, &sup) {
        return Err(FlameError::internal("supremum does not separate x from r"));
    }
    Ok(sup)
}

/// A relevant set at `w` and the edges into `v` that rescue it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relevant {
    pub vertex: Vertex,
    pub edges: EdgeSet,
    pub rescuers: EdgeSet,
}

/// Every relevant set with its `N_I`, for `D₀ = L ↾_v in_G(v)`. `G` must
/// already contain `out_L(r)`.
pub fn relevant_sets(l: &RootedDigraph, g: &RootedDigraph, v: Vertex) -> Result<Vec<Relevant>> {
    let d0 = l.restrict_at(v, &g.in_edges(v))?;
    let spare: EdgeSet = l.in_edges(v).difference(&g.in_edges(v)).copied().collect();
    let mut out = Vec::new();
    for w in l.non_root_vertices().filter(|&w| w != v) {
        for i in interval(&g.in_edges(w), &l.in_edges(w)) {
            if in_g(&d0, w, &i)? {
                continue;
            }
            let mut rescuers = EdgeSet::new();
            for &e in &spare {
                if in_g(&d0.plus_edge(e), w, &i)? {
                    rescuers.insert(e);
                }
            }
            if rescuers.is_empty() {
                return Err(FlameError::internal(format!(
                    "relevant set at {} has no rescuing edge",
                    l.name(w)
                )));
            }
            out.push(Relevant { vertex: w, edges: i, rescuers });
        }
    }
    Ok(out)
}

/// `I* ⊇ in_G(v)` with `I* ∈ 𝒢_L(v)` and `L ↾_v I*` a `G`-quasi-flame:
/// `in_G(v)` plus an inclusion-minimal set of edges meeting every `N_I`.
pub fn key_i_star(l: &RootedDigraph, g: &RootedDigraph, v: Vertex, cap: usize) -> Result<EdgeSet> {
    check_spanning(g, l)?;
    if v == l.root() || !l.has_vertex(v) {
        return Err(FlameError::domain("v must be a non-root vertex"));
    }
    check_cap(l, cap)?;
    if let Some((w, _)) = quasi_flame_violation(l, g, cap)? {
        return Err(FlameError::domain(format!("L is not a G-quasi-flame at {}", l.name(w))));
    }
    let mut g_edges = g.edge_set().clone();
    g_edges.extend(l.out_edges(l.root()));
    let g = g.with_edges(g_edges)?;
    let relevant = relevant_sets(l, &g, v)?;
    let mut chosen: EdgeSet = l.in_edges(v).difference(&g.in_edges(v)).copied().collect();
    for e in chosen.clone() {
        chosen.remove(&e);
        if relevant.iter().any(|r| r.rescuers.is_disjoint(&chosen)) {
            chosen.insert(e);
        }
    }
    let mut i_star = g.in_edges(v);
    i_star.extend(chosen);
    if !in_g(l, v, &i_star)? {
        return Err(FlameError::internal("I* is not in G of L at v"));
    }
    if quasi_flame_violation(&l.restrict_at(v, &i_star)?, &g, cap)?.is_some() {
        return Err(FlameError::internal("restriction to I* is not a G-quasi-flame"));
    }
    Ok(i_star)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub vertex: Vertex,
    pub target: EdgeSet,
    pub system: PathSystem,
}

#[derive(Clone, Debug)]
pub struct LargeFlameCertificate {
    pub host: RootedDigraph,
    pub start: RootedDigraph,
    pub flame: RootedDigraph,
    pub flame_witnesses: BTreeMap<Vertex, GWitness>,
    pub largeness_witnesses: BTreeMap<Vertex, LargenessWitness>,
    pub steps: Vec<Step>,
    pub mode: Mode,
    pub vertex_order: Vec<Vertex>,
    pub seed: Option<u64>,
}

impl LargeFlameCertificate {
    /// Recomputes every predicate the certificate claims.
    pub fn verify(&self) -> Result<()> {
        let fail = |what: &str| Err(FlameError::internal(format!("certificate check failed: {what}")));
        if !self.start.edge_set().is_subset(self.flame.edge_set()) {
            return fail("F is not contained in F*");
        }
        check_spanning(&self.flame, &self.host)?;
        if is_flame(&self.flame)?.is_none() {
            return fail("F* is not a flame");
        }
        if is_large_all(&self.flame, &self.host)?.is_none() {
            return fail("F* is not large");
        }
        for (v, w) in &self.flame_witnesses {
            if w.system.terminal_edges() != self.flame.in_edges(*v) || !w.system.lies_in(&self.flame) {
                return fail("flame witness does not cover the in-edges");
            }
        }
        Ok(())
    }

    /// `κ_D(r,v) = κ_{F*}(r,v) = |in_{F*}(v)|` at every non-root vertex.
    pub fn lovasz_identity(&self) -> Result<bool> {
        for v in self.host.non_root_vertices() {
            let k = kappa(&self.host, v)?;
            if kappa(&self.flame, v)? != k || self.flame.in_degree(v) != k {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn check_order(d: &RootedDigraph, order: &[Vertex]) -> Result<()> {
    let want: VertexSet = d.non_root_vertices().collect();
    let got: VertexSet = order.iter().copied().collect();
    if got != want || order.len() != want.len() {
        return Err(FlameError::domain("vertex order must be a permutation of the non-root vertices"));
    }
    Ok(())
}

fn with_suggestion(e: FlameError) -> FlameError {
    match e {
        FlameError::CapExceeded { what, actual, cap } => FlameError::CapExceeded {
            what: format!("{what} (faithful mode; try finite-direct)"),
            actual,
            cap,
        },
        other => other,
    }
}

/// Runs the recursion `G_n = G_{n-1} ∪ E(𝒫_n)`, `L_n = L_{n-1} ↾_{v_n}
/// in_{G_n}(v_n)`. `faithful` starts from a maximal `F`-quasi-flame and
/// targets the key-lemma set; `finite-direct` starts from `D` and targets
/// `in_{G_{n-1}}(v_n)`.
pub fn extend_flame(
    d: &RootedDigraph,
    f: &RootedDigraph,
    mode: Mode,
    order: Option<&[Vertex]>,
    cap: usize,
) -> Result<LargeFlameCertificate> {
    check_spanning(f, d)?;
    if let Some(v) = flame_violation(f)? {
        return Err(FlameError::domain(format!("F is not a flame at {}", f.name(v))));
    }
    let order: Vec<Vertex> = match order {
        Some(o) => {
            check_order(d, o)?;
            o.to_vec()
        }
        None => d.non_root_vertices().collect(),
    };
    let r = d.root();
    let mut g_edges = f.edge_set().clone();
    g_edges.extend(d.out_edges(r));
    let mut g = f.with_edges(g_edges)?;
    let mut l = match mode {
        Mode::Faithful => maximal_quasi_flame(d, &g, cap).map_err(with_suggestion)?,
        Mode::FiniteDirect => maximal_flame(d, &g)?,
    };
    let mut steps = Vec::new();
    for &v in &order {
        let target = match mode {
            Mode::Faithful => key_i_star(&l, &g, v, cap).map_err(with_suggestion)?,
            Mode::FiniteDirect => g.in_edges(v),
        };
        let system = covering_in_large(&l, d, v, &target)?;
        let mut es = g.edge_set().clone();
        es.extend(system.edges());
        g = g.with_edges(es)?;
        let next = l.restrict_at(v, &g.in_edges(v))?;
        if cfg!(debug_assertions) {
            step_checks(d, &g, &l, &next, v, &system)?;
        }
        l = next;
        steps.push(Step { vertex: v, target, system });
    }
    if g.edge_set() != l.edge_set() {
        return Err(FlameError::internal("the G and L chains do not meet"));
    }
    let flame_witnesses =
        is_flame(&g)?.ok_or_else(|| FlameError::internal("F* is not a flame"))?;
    let largeness_witnesses =
        is_large_all(&g, d)?.ok_or_else(|| FlameError::internal("F* is not large"))?;
    let cert = LargeFlameCertificate {
        host: d.clone(),
        start: f.clone(),
        flame: g,
        flame_witnesses,
        largeness_witnesses,
        steps,
        mode,
        vertex_order: order,
        seed: None,
    };
    cert.verify()?;
    Ok(cert)
}

fn step_checks(
    d: &RootedDigraph,
    g: &RootedDigraph,
    l: &RootedDigraph,
    next: &RootedDigraph,
    v: Vertex,
    system: &PathSystem,
) -> Result<()> {
    let r = d.root();
    let strip = |mut s: EdgeSet| {
        s.remove(&(r, v));
        s
    };
    let ok = g.edge_set().is_subset(next.edge_set())
        && next.edge_set().is_subset(l.edge_set())
        && strip(g.in_edges(v)) == strip(system.terminal_edges())
        && strip(next.in_edges(v)) == strip(system.terminal_edges())
        && is_large_all(next, d)?.is_some();
    if !ok {
        return Err(FlameError::internal(format!("recursion invariant broken at {}", d.name(v))));
    }
    Ok(())
}

/// Large flame from the edgeless flame, with the connectivity identities
/// checked at every vertex.
pub fn lovasz(d: &RootedDigraph) -> Result<LargeFlameCertificate> {
    let empty = d.with_edges(EdgeSet::new())?;
    let cert = extend_flame(d, &empty, Mode::FiniteDirect, None, usize::MAX)?;
    if !cert.lovasz_identity()? {
        return Err(FlameError::internal("connectivity identities fail on F*"));
    }
    Ok(cert)
}

/// A flame grown edge by edge: edges are visited in a seeded shuffle and
/// kept with probability `keep` whenever the head's in-set stays in `𝒢`.
/// Adding an edge never lowers connectivity elsewhere, so only the head is
/// rechecked.
pub fn random_flame(d: &RootedDigraph, seed: u64, keep: f64) -> Result<RootedDigraph> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut edges: Vec<Edge> = d.edges().collect();
    for i in (1..edges.len()).rev() {
        edges.swap(i, rng.random_range(0..=i));
    }
    let mut f = d.with_edges(EdgeSet::new())?;
    for e in edges {
        if rng.random::<f64>() >= keep {
            continue;
        }
        let cand = f.plus_edge(e);
        if in_g(&cand, e.1, &cand.in_edges(e.1))? {
            f = cand;
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(es: &[(&str, &str)]) -> RootedDigraph {
        RootedDigraph::from_edges("r", es).unwrap()
    }

    fn vs(d: &RootedDigraph, names: &[&str]) -> VertexSet {
        names.iter().map(|n| d.vertex(n).unwrap()).collect()
    }

    #[test]
    fn supremum_examples() {
        let d = g(&[("r", "a"), ("r", "b"), ("a", "x"), ("b", "x")]);
        let x = d.vertex("x").unwrap();
        let ab = vs(&d, &["a", "b"]);
        assert_eq!(separation_supremum(&d, x, &[ab.clone(), ab.clone()]).unwrap(), ab);
        assert!(separation_supremum(&d, x, &[vs(&d, &["a"])]).is_err());
        assert!(separation_supremum(&d, x, &[]).is_err());
    }

    #[test]
    fn supremum_drops_unseparated() {
        // r -> a -> x, r -> b -> c -> x, with {a,b} and {a,c} separating x
        let d = g(&[("r", "a"), ("r", "b"), ("a", "x"), ("b", "c"), ("c", "x")]);
        let x = d.vertex("x").unwrap();
        let sup = separation_supremum(&d, x, &[vs(&d, &["a", "b"]), vs(&d, &["a", "c"])]).unwrap();
        assert_eq!(sup, vs(&d, &["a", "c"]));
    }

    #[test]
    fn key_trivial_when_no_relevant_sets() {
        let d = g(&[("r", "a"), ("r", "b"), ("a", "v"), ("b", "v")]);
        let v = d.vertex("v").unwrap();
        let i = key_i_star(&d, &d, v, 12).unwrap();
        assert_eq!(i, d.in_edges(v));
    }

    #[test]
    fn key_needs_one_rescuer() {
        // in_G(v) is empty, so {vw} at w is relevant with N_I = {av}
        let d = g(&[("r", "a"), ("a", "v"), ("v", "w")]);
        let (a, v, w) = (1, 2, 3);
        let gg = d.with_edges([(0, a), (v, w)].into()).unwrap();
        let i = key_i_star(&d, &gg, v, 12).unwrap();
        assert_eq!(i, [(a, v)].into());
    }

    #[test]
    fn extend_two_routes() {
        let d = g(&[("r", "a"), ("r", "b"), ("a", "v"), ("b", "v")]);
        let f = d.with_edges(d.out_edges(0)).unwrap();
        for mode in [Mode::Faithful, Mode::FiniteDirect] {
            let cert = extend_flame(&d, &f, mode, None, 12).unwrap();
            assert_eq!(cert.flame.edge_set(), d.edge_set());
            assert_eq!(cert.flame.in_degree(3), 2);
        }
    }

    #[test]
    fn lovasz_on_star() {
        let d = g(&[("r", "a"), ("r", "b"), ("r", "c")]);
        let cert = lovasz(&d).unwrap();
        assert_eq!(cert.flame.edge_set(), d.edge_set());
        assert!(cert.lovasz_identity().unwrap());
    }

    #[test]
    fn random_flame_is_flame() {
        let d = g(&[("r", "a"), ("r", "b"), ("a", "b"), ("b", "a"), ("a", "c"), ("b", "c")]);
        for seed in 0..20 {
            let f = random_flame(&d, seed, 0.7).unwrap();
            assert!(is_flame(&f).unwrap().is_some());
        }
    }
}
