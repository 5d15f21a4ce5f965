//! Seeded cross-validation of the flow-based operations against the
//! brute-force oracles.

use std::collections::BTreeSet;

use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, EdgeSet, RootedDigraph, Vertex, VertexSet};
use crate::error::{FlameError, Result};
use crate::flame::{in_g, is_flame, is_large, is_large_all, quasi_flame_violation};
use crate::gen::{gen, InstanceSpec};
use crate::incomp::{is_incompressible, is_joinable};
use crate::menger::{
    erdos_menger, is_orthogonal, kappa, leq_separation, max_separation, min_separation, separates, Ends,
    OrthogonalPair,
};
use crate::oracle::{
    all_systems, brute_g, brute_incompressible, brute_is_flame, brute_is_large, brute_joinable, brute_kappa,
    brute_leq, brute_max_system_size, brute_min_separation_size, brute_quasi_flame_violation,
    brute_separations, ORACLE_CAP,
};
use crate::pym::pym_merge;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Menger,
    Kappa,
    G,
    Lattice,
    Pym,
    Incompressible,
    Flame,
    Large,
    QuasiFlame,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Menger,
        Suite::Kappa,
        Suite::G,
        Suite::Lattice,
        Suite::Pym,
        Suite::Incompressible,
        Suite::Flame,
        Suite::Large,
        Suite::QuasiFlame,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Menger => "menger",
            Suite::Kappa => "kappa",
            Suite::G => "g",
            Suite::Lattice => "lattice",
            Suite::Pym => "pym",
            Suite::Incompressible => "incompressible",
            Suite::Flame => "flame",
            Suite::Large => "large",
            Suite::QuasiFlame => "quasi-flame",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub cases: usize,
    pub checks: usize,
    pub mismatches: usize,
    pub first_mismatch: Option<String>,
}

impl Report {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.mismatches += 1;
            if self.first_mismatch.is_none() {
                self.first_mismatch = Some(what());
            }
        }
    }
}

const PROBS: [f64; 3] = [0.2, 0.35, 0.5];

/// The `i`-th instance of a suite run: `n` in `2..=max_n`, `p` cycling
/// through 0.2, 0.35, 0.5, and a per-case seed drawn from the run seed.
pub fn case_instance(rng: &mut SplitMix64, i: usize, max_n: usize) -> Result<(RootedDigraph, u64)> {
    let seed = rng.next_u64();
    let n = 2 + (seed % (max_n as u64 - 1)) as usize;
    let d = gen(&InstanceSpec::Random { n, p: PROBS[i % PROBS.len()], seed })?.digraph;
    Ok((d, seed))
}

/// Two disjoint non-empty sides of at most `k` vertices each, drawn from
/// the non-root vertices when there are at least two of them.
pub fn random_sides(d: &Digraph, rng: &mut SplitMix64, k: usize) -> Option<(VertexSet, VertexSet)> {
    let mut vs: Vec<Vertex> = d.vertices().iter().copied().collect();
    if vs.len() < 2 {
        return None;
    }
    for i in (1..vs.len()).rev() {
        vs.swap(i, rng.random_range(0..=i));
    }
    let a = rng.random_range(1..=k.min(vs.len() - 1));
    let b = rng.random_range(1..=k.min(vs.len() - a));
    Some((vs[..a].iter().copied().collect(), vs[a..a + b].iter().copied().collect()))
}

fn random_subgraph(d: &RootedDigraph, rng: &mut SplitMix64, keep: f64) -> Result<RootedDigraph> {
    let es: EdgeSet = d.edges().filter(|_| rng.random::<f64>() < keep).collect();
    d.with_edges(es)
}

fn pair_is_sound(g: &Digraph, ends: &Ends, pair: &OrthogonalPair) -> bool {
    pair.system.verify(g, ends).is_ok()
        && separates(g, ends, &pair.separation.vertices)
        && is_orthogonal(&pair.system, &pair.separation.vertices)
        && pair.system.len() == pair.separation.len()
}

fn menger_case(d: &RootedDigraph, rng: &mut SplitMix64, rep: &mut Report) -> Result<()> {
    let r = d.root();
    for v in d.non_root_vertices() {
        let g = d.without_root_edge(v);
        let ends = Ends::Pair(r, v);
        let pair = erdos_menger(&g, &ends)?;
        let brute_sep = brute_min_separation_size(&g, &ends)?;
        let brute_max = brute_max_system_size(&g, &ends)?;
        rep.check(pair_is_sound(&g, &ends, &pair), || format!("pair at {v} is not orthogonal"));
        rep.check(brute_sep == Some(pair.system.len()) && brute_max == pair.system.len(), || {
            format!("pair at {v}: flow {} vs brute sep {brute_sep:?} / paths {brute_max}", pair.system.len())
        });
    }
    if let Some((xs, ys)) = random_sides(d, rng, 3) {
        let ends = Ends::Sets(xs, ys);
        let pair = erdos_menger(d, &ends)?;
        let brute_sep = brute_min_separation_size(d, &ends)?;
        rep.check(pair_is_sound(d, &ends, &pair), || format!("sets pair {ends:?} is not orthogonal"));
        rep.check(brute_sep == Some(pair.system.len()), || {
            format!("sets {ends:?}: flow {} vs brute {brute_sep:?}", pair.system.len())
        });
    }
    Ok(())
}

fn kappa_case(d: &RootedDigraph, rep: &mut Report) -> Result<()> {
    for v in d.non_root_vertices() {
        let (a, b) = (kappa(d, v)?, brute_kappa(d, v)?);
        rep.check(a == b, || format!("kappa at {v}: {a} vs {b}"));
    }
    Ok(())
}

fn g_case(d: &RootedDigraph, rep: &mut Report) -> Result<()> {
    for v in d.non_root_vertices() {
        let fam: BTreeSet<EdgeSet> = brute_g(d, v)?.into_iter().collect();
        let ins: Vec<_> = d.in_edges(v).into_iter().collect();
        for mask in 0u64..1 << ins.len() {
            let i: EdgeSet = ins.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect();
            let fast = in_g(d, v, &i)?;
            rep.check(fast == fam.contains(&i), || format!("G at {v} for {i:?}: flow says {fast}"));
        }
    }
    Ok(())
}

fn lattice_case(d: &RootedDigraph, rep: &mut Report) -> Result<()> {
    let r = d.root();
    for v in d.non_root_vertices() {
        let g = d.without_root_edge(v);
        let ends = Ends::Pair(r, v);
        let lo = min_separation(&g, &ends)?.vertices;
        let hi = max_separation(&g, &ends)?.vertices;
        let seps = brute_separations(&g, &ends)?;
        rep.check(seps.contains(&lo) && seps.contains(&hi), || format!("extremes at {v} are not Erdős-Menger"));
        for s in &seps {
            let ok = brute_leq(&g, &ends, &lo, s)? && brute_leq(&g, &ends, s, &hi)?;
            rep.check(ok, || format!("at {v}: {s:?} lies outside [min, max]"));
            rep.check(leq_separation(&g, &ends, &lo, s) && leq_separation(&g, &ends, s, &hi), || {
                format!("at {v}: flow-side order disagrees for {s:?}")
            });
        }
        let leq = |a: &VertexSet, b: &VertexSet| brute_leq(&g, &ends, a, b);
        for a in &seps {
            for b in &seps {
                let mut lower = Vec::new();
                let mut upper = Vec::new();
                for c in &seps {
                    if leq(c, a)? && leq(c, b)? {
                        lower.push(c);
                    }
                    if leq(a, c)? && leq(b, c)? {
                        upper.push(c);
                    }
                }
                let mut meet = false;
                for m in &lower {
                    let mut top = true;
                    for c in &lower {
                        top &= leq(c, m)?;
                    }
                    meet |= top;
                }
                let mut join = false;
                for j in &upper {
                    let mut bottom = true;
                    for c in &upper {
                        bottom &= leq(j, c)?;
                    }
                    join |= bottom;
                }
                rep.check(meet && join, || format!("at {v}: no meet or join for {a:?}, {b:?}"));
            }
        }
    }
    Ok(())
}

fn pym_case(d: &RootedDigraph, rng: &mut SplitMix64, rep: &mut Report) -> Result<()> {
    let Some((xs, ys)) = random_sides(d, rng, 3) else {
        return Ok(());
    };
    let ends = Ends::Sets(xs.clone(), ys.clone());
    let systems = all_systems(d, &ends)?;
    for p in &systems {
        for q in &systems {
            let m = pym_merge(d, &xs, &ys, p, q)?;
            let pool: EdgeSet = p.edges().union(&q.edges()).copied().collect();
            let ok = m.verify(d, &ends).is_ok()
                && m.initial_vertices().is_superset(&p.initial_vertices())
                && m.terminal_vertices().is_superset(&q.terminal_vertices())
                && m.edges().is_subset(&pool);
            rep.check(ok, || format!("merge of {:?} and {:?} fails", p.paths, q.paths));
        }
    }
    Ok(())
}

fn incompressible_check(g: &Digraph, xs: &VertexSet, ys: &VertexSet, rep: &mut Report) -> Result<()> {
    let j = is_joinable(g, xs, ys)?.is_some();
    let i = is_incompressible(g, xs, ys)?;
    let (bj, bi) = (brute_joinable(g, xs, ys)?, brute_incompressible(g, xs, ys)?);
    rep.check(j == bj && i == bi, || {
        format!("X={xs:?} Y={ys:?}: joinable {j}/{bj}, incompressible {i}/{bi}")
    });
    Ok(())
}

fn incompressible_case(d: &RootedDigraph, rng: &mut SplitMix64, rep: &mut Report) -> Result<()> {
    if let Some((xs, ys)) = random_sides(d, rng, 4) {
        incompressible_check(d, &xs, &ys, rep)?;
    }
    Ok(())
}

/// The four figure panels at sizes 2 and 3 with their expected
/// `(joinable, incompressible)` classifications.
pub fn figure2_cases() -> Vec<(InstanceSpec, bool, bool)> {
    let mut out = Vec::new();
    for n in [2, 3] {
        out.push((InstanceSpec::Figure2a { n }, false, false));
        out.push((InstanceSpec::Figure2b { n }, true, false));
        out.push((InstanceSpec::Figure2c { n }, true, false));
        out.push((InstanceSpec::Figure2d { n }, true, true));
    }
    out
}

fn figure2_check(rep: &mut Report) -> Result<()> {
    for (spec, joinable, incompressible) in figure2_cases() {
        let inst = gen(&spec)?;
        let (xs, ys) = inst.sides.expect("figure panels carry sides");
        let g = inst.digraph.graph();
        incompressible_check(g, &xs, &ys, rep)?;
        let got = (is_joinable(g, &xs, &ys)?.is_some(), is_incompressible(g, &xs, &ys)?);
        rep.check(got == (joinable, incompressible), || format!("{spec:?}: got {got:?}"));
    }
    Ok(())
}

fn flame_case(d: &RootedDigraph, rng: &mut SplitMix64, rep: &mut Report) -> Result<()> {
    let f = random_subgraph(d, rng, 0.6)?;
    let (a, b) = (is_flame(&f)?.is_some(), brute_is_flame(&f)?);
    rep.check(a == b, || format!("flame: {a} vs {b}"));
    Ok(())
}

fn large_case(d: &RootedDigraph, rng: &mut SplitMix64, rep: &mut Report) -> Result<()> {
    let l = random_subgraph(d, rng, 0.75)?;
    let all = is_large_all(&l, d)?.is_some();
    let m_only = is_large(&l, d)?.is_some();
    let brute = brute_is_large(&l, d)?;
    rep.check(all == brute && m_only == brute, || format!("large: all {all}, M-only {m_only}, brute {brute}"));
    Ok(())
}

fn quasi_case(d: &RootedDigraph, rng: &mut SplitMix64, rep: &mut Report) -> Result<()> {
    let g = random_subgraph(d, rng, 0.5)?;
    let a = quasi_flame_violation(d, &g, usize::MAX)?;
    let b = brute_quasi_flame_violation(d, &g)?;
    rep.check(a.is_some() == b.is_some(), || format!("quasi-flame: {a:?} vs {b:?}"));
    Ok(())
}

/// Runs `cases` seeded instances of one suite. `max_n` is clamped to the
/// oracle cap.
pub fn run_suite(suite: Suite, cases: usize, max_n: usize, seed: u64) -> Result<Report> {
    if max_n < 2 {
        return Err(FlameError::domain("max-n must be at least 2"));
    }
    if max_n > ORACLE_CAP {
        return Err(FlameError::cap("max-n", max_n, ORACLE_CAP));
    }
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut rep = Report { suite: suite.name().to_string(), ..Report::default() };
    for i in 0..cases {
        let (d, case_seed) = case_instance(&mut rng, i, max_n)?;
        let mut local = SplitMix64::seed_from_u64(case_seed ^ 0x9e37_79b9_7f4a_7c15);
        match suite {
            Suite::Menger => menger_case(&d, &mut local, &mut rep)?,
            Suite::Kappa => kappa_case(&d, &mut rep)?,
            Suite::G => g_case(&d, &mut rep)?,
            Suite::Lattice => lattice_case(&d, &mut rep)?,
            Suite::Pym => pym_case(&d, &mut local, &mut rep)?,
            Suite::Incompressible => incompressible_case(&d, &mut local, &mut rep)?,
            Suite::Flame => flame_case(&d, &mut local, &mut rep)?,
            Suite::Large => large_case(&d, &mut local, &mut rep)?,
            Suite::QuasiFlame => quasi_case(&d, &mut local, &mut rep)?,
        }
        rep.cases += 1;
    }
    if suite == Suite::Incompressible {
        figure2_check(&mut rep)?;
    }
    Ok(rep)
}
