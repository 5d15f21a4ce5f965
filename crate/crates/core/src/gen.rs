//! Deterministic instance generators.
//!
//! `random` draws every ordered pair `(i, j)`, `i != j`, in row-major order
//! from a SplitMix64 stream seeded with `seed` (state initialised to the seed
//! itself). Each pair consumes one 64-bit output `z` and becomes an edge iff
//! `(z >> 11) as f64 / 2^53 < p`. Pairs entering the root are drawn like the
//! rest and then dropped, so the stream position never depends on the root.
//! Vertices are `v0 .. v{n-1}` with root `v0`.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, EdgeSet, RootedDigraph, VertexSet};
use crate::error::{FlameError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InstanceSpec {
    Random { n: usize, p: f64, seed: u64 },
    Fig1 { n0: usize, n1: usize, n2: usize },
    Figure2a { n: usize },
    Figure2b { n: usize },
    Figure2c { n: usize },
    Figure2d { n: usize },
    Chain { n: usize },
    Star { n: usize },
}

/// A generated digraph, plus the source and sink sides for the `figure2`
/// kinds.
#[derive(Clone, Debug)]
pub struct Instance {
    pub digraph: RootedDigraph,
    pub sides: Option<(VertexSet, VertexSet)>,
}

/// Uniform draw in `[0, 1)` with 53 bits of precision.
pub fn unit_f64(rng: &mut SplitMix64) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

struct Builder {
    names: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn new() -> Self {
        Builder { names: Vec::new(), edges: Vec::new() }
    }

    fn add(&mut self, name: String) -> usize {
        self.names.push(name);
        self.names.len() - 1
    }

    fn finish(self) -> Result<RootedDigraph> {
        let vs = (0..self.names.len()).collect();
        let es: EdgeSet = self.edges.into_iter().collect();
        RootedDigraph::new(Digraph::new(self.names, vs, es)?, 0)
    }
}

fn random(n: usize, p: f64, seed: u64) -> Result<RootedDigraph> {
    if n == 0 {
        return Err(FlameError::domain("random instance needs n >= 1"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(FlameError::domain(format!("edge probability {p} outside [0, 1]")));
    }
    let mut b = Builder::new();
    for i in 0..n {
        b.add(format!("v{i}"));
    }
    let mut rng = SplitMix64::seed_from_u64(seed);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if unit_f64(&mut rng) < p && j != 0 {
                b.edges.push((i, j));
            }
        }
    }
    b.finish()
}

fn fig1(n0: usize, n1: usize, n2: usize) -> Result<RootedDigraph> {
    let mut b = Builder::new();
    let r = b.add("r".into());
    let layer = |b: &mut Builder, k: usize, n: usize| -> Vec<usize> {
        (0..n).map(|i| b.add(format!("v{k}_{i}"))).collect()
    };
    let v0 = layer(&mut b, 0, n0);
    let v1 = layer(&mut b, 1, n1);
    let v2 = layer(&mut b, 2, n2);
    b.edges.extend(v0.iter().map(|&v| (r, v)));
    for (src, dst) in [(&v0, &v1), (&v1, &v2)] {
        for &s in src {
            b.edges.extend(dst.iter().map(|&t| (s, t)));
        }
    }
    b.finish()
}

/// Bipartite panel: sources `v*`, sinks `w*`, and an isolated root `r`.
fn panel(
    sources: std::ops::RangeInclusive<usize>,
    sinks: std::ops::RangeInclusive<usize>,
    edge: impl Fn(usize, usize) -> bool,
) -> Result<Instance> {
    let mut b = Builder::new();
    b.add("r".into());
    let xs: Vec<(usize, usize)> = sources.map(|i| (i, b.add(format!("v{i}")))).collect();
    let ys: Vec<(usize, usize)> = sinks.map(|j| (j, b.add(format!("w{j}")))).collect();
    for &(i, x) in &xs {
        for &(j, y) in &ys {
            if edge(i, j) {
                b.edges.push((x, y));
            }
        }
    }
    Ok(Instance {
        digraph: b.finish()?,
        sides: Some((xs.iter().map(|p| p.1).collect(), ys.iter().map(|p| p.1).collect())),
    })
}

pub fn gen(spec: &InstanceSpec) -> Result<Instance> {
    let plain = |d: Result<RootedDigraph>| d.map(|digraph| Instance { digraph, sides: None });
    let need = |n: usize| {
        if n == 0 {
            Err(FlameError::domain("size parameter must be at least 1"))
        } else {
            Ok(())
        }
    };
    match *spec {
        InstanceSpec::Random { n, p, seed } => plain(random(n, p, seed)),
        InstanceSpec::Fig1 { n0, n1, n2 } => plain(fig1(n0, n1, n2)),
        // v0..vn into w1..wn; v0 reaches every sink
        InstanceSpec::Figure2a { n } => {
            need(n)?;
            panel(0..=n, 1..=n, |i, j| i == 0 || i == j)
        }
        // v1..vn into w0..wn; every source also reaches w0
        InstanceSpec::Figure2b { n } => {
            need(n)?;
            panel(1..=n, 0..=n, |i, j| j == 0 || i == j)
        }
        // v0..v{n-1} into w0..wn, vi -> wj for j >= i
        InstanceSpec::Figure2c { n } => {
            need(n)?;
            panel(0..=n - 1, 0..=n, |i, j| j >= i)
        }
        // perfect matching on n pairs
        InstanceSpec::Figure2d { n } => {
            need(n)?;
            panel(0..=n - 1, 0..=n - 1, |i, j| i == j)
        }
        InstanceSpec::Chain { n } => {
            let mut b = Builder::new();
            b.add("r".into());
            for i in 1..=n {
                b.add(format!("v{i}"));
                b.edges.push((i - 1, i));
            }
            plain(b.finish())
        }
        InstanceSpec::Star { n } => {
            let mut b = Builder::new();
            b.add("r".into());
            for i in 1..=n {
                b.add(format!("v{i}"));
                b.edges.push((0, i));
            }
            plain(b.finish())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::to_edge_list_text;

    #[test]
    fn fig1_edge_count() {
        let d = gen(&InstanceSpec::Fig1 { n0: 2, n1: 3, n2: 2 }).unwrap().digraph;
        assert_eq!(d.num_edges(), 2 + 6 + 6);
        assert_eq!(d.num_vertices(), 8);
    }

    #[test]
    fn random_is_reproducible() {
        let spec = InstanceSpec::Random { n: 8, p: 0.35, seed: 7 };
        let a = to_edge_list_text(&gen(&spec).unwrap().digraph);
        let b = to_edge_list_text(&gen(&spec).unwrap().digraph);
        assert_eq!(a, b);
        let d = gen(&spec).unwrap().digraph;
        assert_eq!(d.in_degree(0), 0);
    }

    #[test]
    fn splitmix_reference_stream() {
        // published first outputs of SplitMix64 seeded with 1234567
        let mut rng = SplitMix64::seed_from_u64(1234567);
        assert_eq!(rng.next_u64(), 6457827717110365317);
        assert_eq!(rng.next_u64(), 3203168211198807973);
    }

    #[test]
    fn panels_have_expected_sides() {
        let a = gen(&InstanceSpec::Figure2a { n: 3 }).unwrap();
        let (xs, ys) = a.sides.unwrap();
        assert_eq!((xs.len(), ys.len()), (4, 3));
        let d = gen(&InstanceSpec::Figure2d { n: 4 }).unwrap();
        assert_eq!(d.digraph.num_edges(), 4);
    }

    #[test]
    fn spec_json_round_trip() {
        let spec: InstanceSpec = serde_json::from_str(r#"{"kind":"fig1","n0":2,"n1":3,"n2":2}"#).unwrap();
        assert_eq!(spec, InstanceSpec::Fig1 { n0: 2, n1: 3, n2: 2 });
    }
}
