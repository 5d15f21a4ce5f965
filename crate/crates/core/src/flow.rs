//! Vertex-splitting unit-capacity max-flow.
//!
//! Every vertex `v` becomes `in(v) -> out(v)`; original edges become
//! `out(u) -> in(w)` with unbounded capacity, so every minimum cut consists
//! of split arcs and reads off as a vertex separation. Augmentation uses BFS
//! (shortest augmenting paths) over arcs in insertion order, and arcs are
//! inserted in increasing vertex order, so results are reproducible.

use std::collections::VecDeque;

use crate::digraph::{Digraph, Vertex, VertexSet};

const INF: i32 = i32::MAX / 4;

#[derive(Clone, Debug)]
struct Arc {
    to: usize,
    cap: i32,
    flow: i32,
    rev: usize,
}

/// Which disjointness regime the network models.
#[derive(Clone, Debug)]
pub(crate) enum Terminals {
    /// Internally disjoint `(x, y)`-paths. The caller must remove `xy`.
    Pair(Vertex, Vertex),
    /// Pairwise disjoint `(X, Y)`-paths. A vertex in `X ∩ Y` is joined by the
    /// single-vertex path.
    Sets(VertexSet, VertexSet),
}

#[derive(Clone, Debug)]
pub(crate) struct VertexFlow {
    arcs: Vec<Vec<Arc>>,
    source: usize,
    sink: usize,
    value: usize,
}

fn node_in(v: Vertex) -> usize {
    2 * v
}

fn node_out(v: Vertex) -> usize {
    2 * v + 1
}

impl VertexFlow {
    /// Builds the split network. In-edges of the source side and out-edges of
    /// the sink side are ignored: they lie on no path of the modelled kind.
    pub(crate) fn new(g: &Digraph, terminals: &Terminals) -> Self {
        let n = g.universe_len();
        let source = 2 * n;
        let sink = 2 * n + 1;
        let mut net = VertexFlow {
            arcs: vec![Vec::new(); 2 * n + 2],
            source,
            sink,
            value: 0,
        };
        let (srcs, snks, unbounded): (VertexSet, VertexSet, VertexSet) = match terminals {
            Terminals::Pair(x, y) => {
                debug_assert!(!g.has_edge((*x, *y)), "pair network needs xy removed");
                ([*x].into(), [*y].into(), [*x, *y].into())
            }
            Terminals::Sets(xs, ys) => (xs.clone(), ys.clone(), VertexSet::new()),
        };
        for &x in &srcs {
            if g.has_vertex(x) {
                net.add_arc(source, node_in(x), INF);
            }
        }
        for &v in g.vertices() {
            let cap = if unbounded.contains(&v) { INF } else { 1 };
            net.add_arc(node_in(v), node_out(v), cap);
        }
        for (t, h) in g.edges() {
            if srcs.contains(&h) || snks.contains(&t) {
                continue;
            }
            net.add_arc(node_out(t), node_in(h), INF);
        }
        for &y in &snks {
            if g.has_vertex(y) {
                net.add_arc(node_out(y), sink, INF);
            }
        }
        net
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: i32) {
        let rf = self.arcs[to].len();
        let rt = self.arcs[from].len();
        self.arcs[from].push(Arc { to, cap, flow: 0, rev: rf });
        self.arcs[to].push(Arc { to: from, cap: 0, flow: 0, rev: rt });
    }

    fn residual(a: &Arc) -> i32 {
        a.cap - a.flow
    }

    fn push(&mut self, u: usize, i: usize, amount: i32) {
        let (to, rev) = (self.arcs[u][i].to, self.arcs[u][i].rev);
        self.arcs[u][i].flow += amount;
        self.arcs[to][rev].flow -= amount;
    }

    fn find_arc(&self, from: usize, to: usize) -> Option<usize> {
        self.arcs[from]
            .iter()
            .position(|a| a.to == to && a.cap > 0)
    }

    /// Routes one unit along an existing path (vertex sequence from a
    /// source-side vertex to a sink-side vertex). Returns false if the path
    /// does not fit the residual network; the network is left untouched then.
    pub(crate) fn preload_path(&mut self, path: &[Vertex]) -> bool {
        let mut hops = Vec::with_capacity(2 * path.len() + 2);
        let mut nodes = vec![self.source];
        for &v in path {
            nodes.push(node_in(v));
            nodes.push(node_out(v));
        }
        nodes.push(self.sink);
        for w in nodes.windows(2) {
            match self.find_arc(w[0], w[1]) {
                Some(i) if Self::residual(&self.arcs[w[0]][i]) > 0 => hops.push((w[0], i)),
                _ => return false,
            }
        }
        for (u, i) in hops {
            self.push(u, i, 1);
        }
        self.value += 1;
        true
    }

    /// One BFS augmentation. Returns false when no augmenting path exists.
    pub(crate) fn augment_once(&mut self) -> bool {
        let n = self.arcs.len();
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[self.source] = true;
        let mut queue = VecDeque::from([self.source]);
        while let Some(u) = queue.pop_front() {
            if u == self.sink {
                break;
            }
            for (i, a) in self.arcs[u].iter().enumerate() {
                if !seen[a.to] && Self::residual(a) > 0 {
                    seen[a.to] = true;
                    prev[a.to] = Some((u, i));
                    queue.push_back(a.to);
                }
            }
        }
        if !seen[self.sink] {
            return false;
        }
        let mut cur = self.sink;
        while let Some((u, i)) = prev[cur] {
            self.push(u, i, 1);
            cur = u;
        }
        self.value += 1;
        true
    }

    pub(crate) fn run(&mut self) -> usize {
        while self.augment_once() {}
        self.value
    }

    /// Decomposes the current flow into vertex sequences, one per unit, in
    /// order of the source arcs. Flow cycles are ignored.
    pub(crate) fn paths(&self) -> Vec<Vec<Vertex>> {
        let mut used: Vec<Vec<i32>> = self
            .arcs
            .iter()
            .map(|arcs| arcs.iter().map(|a| a.flow.max(0)).collect())
            .collect();
        let mut out = Vec::new();
        loop {
            let mut path = Vec::new();
            let mut u = self.source;
            let mut ok = false;
            loop {
                let Some(i) = (0..self.arcs[u].len())
                    .find(|&i| self.arcs[u][i].cap > 0 && used[u][i] > 0)
                else {
                    break;
                };
                used[u][i] -= 1;
                let to = self.arcs[u][i].to;
                if to == self.sink {
                    ok = true;
                    break;
                }
                if to % 2 == 0 {
                    path.push(to / 2);
                }
                u = to;
            }
            if !ok {
                break;
            }
            out.push(path);
        }
        out
    }

    fn reach(&self, from: usize, forward: bool) -> Vec<bool> {
        let n = self.arcs.len();
        let mut seen = vec![false; n];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for a in &self.arcs[u] {
                // backward search walks residual arcs in reverse: x -> u is
                // usable iff the twin arc u -> x (stored at a.rev) has residual
                // capacity in direction x -> u.
                let ok = if forward {
                    Self::residual(a) > 0
                } else {
                    Self::residual(&self.arcs[a.to][a.rev]) > 0
                };
                if ok && !seen[a.to] {
                    seen[a.to] = true;
                    queue.push_back(a.to);
                }
            }
        }
        seen
    }

    /// The cut closest to the source: vertices whose in-node is reachable in
    /// the residual network and whose out-node is not.
    pub(crate) fn source_side_cut(&self) -> VertexSet {
        let r = self.reach(self.source, true);
        (0..self.arcs.len() / 2 - 1)
            .filter(|&v| r[node_in(v)] && !r[node_out(v)])
            .collect()
    }

    /// The cut closest to the sink: vertices whose out-node reaches the sink
    /// in the residual network and whose in-node does not.
    pub(crate) fn sink_side_cut(&self) -> VertexSet {
        let t = self.reach(self.sink, false);
        (0..self.arcs.len() / 2 - 1)
            .filter(|&v| t[node_out(v)] && !t[node_in(v)])
            .collect()
    }
}
