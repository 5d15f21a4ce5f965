use flamekit::compare::figure2_cases;
use flamekit::digraph::Diagnostic;
use flamekit::extend::{extend_flame, key_i_star, lovasz, random_flame, relevant_sets, separation_supremum, Mode};
use flamekit::flame::{
    in_g, is_flame, is_in_g, is_large, is_large_all, is_quasi_flame, is_v_large, maximal_quasi_flame,
    quasi_flame_violation, superlarge_condition, DEFAULT_CAP,
};
use flamekit::format::parse_edge_list;
use flamekit::gen::{gen, InstanceSpec};
use flamekit::incomp::{
    build_auxiliary, bubble, extend_hitting_g, extend_joinable, finitely_extendable, hit_all_families,
    incompressible_separation, is_incompressible, is_joinable, HitMethod, HitOutcome,
};
use flamekit::menger::{
    augment, erdos_menger, erdos_menger_pair, erdos_menger_pair_sets, is_orthogonal, kappa, leq_separation,
    max_disjoint_paths, max_separation, min_separation, separates, Augmentation, Ends, PathKind, PathSystem,
};
use flamekit::oracle::{
    all_systems,    brute_all_path_systems, brute_g, brute_leq, brute_max_system_size, brute_min_separation_size, brute_separations,
    count_path_systems_by_terminal_edge,
};
use flamekit::pym::{covering_in_large, covering_menger_system, pym_merge, pym_merge_to_vertex};
use flamekit::{EdgeSet, FlameError, RootedDigraph, Vertex, VertexSet};

fn graph(edges: &[(&str, &str)]) -> RootedDigraph {
    RootedDigraph::from_edges("r", edges).unwrap()
}

fn v(d: &RootedDigraph, name: &str) -> Vertex {
    d.vertex(name).unwrap_or_else(|| panic!("no vertex {name}"))
}

fn vs(d: &RootedDigraph, names: &[&str]) -> VertexSet {
    names.iter().map(|n| v(d, n)).collect()
}

fn es(d: &RootedDigraph, edges: &[(&str, &str)]) -> EdgeSet {
    edges.iter().map(|&(t, h)| (v(d, t), v(d, h))).collect()
}

fn path(d: &RootedDigraph, names: &[&str]) -> Vec<Vertex> {
    names.iter().map(|n| v(d, n)).collect()
}

fn random(n: usize, p: f64, seed: u64) -> RootedDigraph {
    gen(&InstanceSpec::Random { n, p, seed }).unwrap().digraph
}

fn fig1() -> RootedDigraph {
    gen(&InstanceSpec::Fig1 { n0: 2, n1: 3, n2: 2 }).unwrap().digraph
}

// digraph-core

#[test]
fn validate_diagnostics() {
    let ok = parse_edge_list("root r\nr a\n").unwrap();
    assert!(ok.validate().is_empty());
    let back = parse_edge_list("root r\nr a\na r\n").unwrap();
    assert_eq!(back.validate(), vec![Diagnostic::RootHasInEdge { tail: "a".into(), head: "r".into() }]);
    let mut lp = parse_edge_list("root r\na\n").unwrap();
    lp.edges.push(("a".into(), "a".into()));
    assert_eq!(lp.validate(), vec![Diagnostic::Loop { vertex: "a".into() }]);
}

#[test]
fn restrict_at_examples() {
    let d = graph(&[("r", "a"), ("a", "v"), ("r", "v")]);
    let x = v(&d, "v");
    let out = d.restrict_at(x, &es(&d, &[("a", "v")])).unwrap();
    assert_eq!(out.edge_set(), &es(&d, &[("r", "a"), ("a", "v")]));
    assert_eq!(d.restrict_at(x, &d.in_edges(x)).unwrap(), d);

    let f = fig1();
    let w = v(&f, "v2_0");
    assert_eq!(f.in_degree(w), 3);
    let keep: EdgeSet = f.in_edges(w).into_iter().take(2).collect();
    assert_eq!(f.restrict_at(w, &keep).unwrap().num_edges(), f.num_edges() - 1);
}

#[test]
fn delete_examples() {
    let d = graph(&[("r", "a"), ("a", "b")]);
    let out = d.delete_vertices(&vs(&d, &["a"])).unwrap();
    assert_eq!(out.vertices(), &vs(&d, &["r", "b"]));
    assert_eq!(out.num_edges(), 0);
    assert_eq!(d.delete_vertices(&VertexSet::new()).unwrap(), d);
    assert!(matches!(d.delete_vertices(&vs(&d, &["r"])), Err(FlameError::Domain(_))));

    let f = fig1();
    let x = v(&f, "v1_0");
    let out = f.delete_vertices(&[x].into()).unwrap();
    assert_eq!(out.num_edges(), f.num_edges() - 2 - f.out_edges(x).len());
}

// menger-flow

#[test]
fn max_disjoint_paths_examples() {
    let d = graph(&[("r", "a"), ("a", "b")]);
    let p = max_disjoint_paths(&d, v(&d, "b")).unwrap();
    assert_eq!(p.paths, vec![path(&d, &["r", "a", "b"])]);

    let d = graph(&[("r", "a"), ("r", "b"), ("a", "v"), ("b", "v")]);
    assert_eq!(max_disjoint_paths(&d, v(&d, "v")).unwrap().len(), 2);
    assert_eq!(kappa(&d, v(&d, "v")).unwrap(), 2);

    let d = random(8, 0.35, 7);
    for x in d.non_root_vertices().collect::<Vec<_>>() {
        let fast = max_disjoint_paths(&d, x).unwrap().len();
        assert_eq!(fast, brute_max_system_size(&d, &Ends::Pair(d.root(), x)).unwrap());
    }
}

#[test]
fn erdos_menger_pair_examples() {
    let d = graph(&[("r", "a"), ("a", "v")]);
    let pair = erdos_menger_pair(&d, v(&d, "v")).unwrap();
    assert_eq!(pair.system.paths, vec![path(&d, &["r", "a", "v"])]);
    assert_eq!(pair.separation.vertices, vs(&d, &["a"]));

    let d = graph(&[("r", "v"), ("r", "a"), ("a", "v")]);
    let pair = erdos_menger_pair(&d, v(&d, "v")).unwrap();
    assert_eq!(pair.system.paths, vec![path(&d, &["r", "a", "v"])]);
    assert_eq!(pair.separation.vertices, vs(&d, &["a"]));

    let d = random(8, 0.35, 11);
    for x in d.non_root_vertices().collect::<Vec<_>>() {
        let pair = erdos_menger_pair(&d, x).unwrap();
        assert!(pair.is_orthogonal());
        let minus = d.without_root_edge(x);
        let brute = brute_min_separation_size(&minus, &Ends::Pair(d.root(), x)).unwrap();
        assert_eq!(Some(pair.separation.len()), brute);
    }
}

#[test]
fn erdos_menger_sets_examples() {
    let d = RootedDigraph::from_edges("a", &[("a", "b")]).unwrap();
    let pair = erdos_menger_pair_sets(&d, &vs(&d, &["a"]), &vs(&d, &["b"])).unwrap();
    assert_eq!(pair.system.paths, vec![path(&d, &["a", "b"])]);
    assert!(pair.is_orthogonal());

    let a = vs(&d, &["a"]);
    assert!(matches!(erdos_menger_pair_sets(&d, &a, &a), Err(FlameError::Domain(_))));

    let inst = gen(&InstanceSpec::Figure2d { n: 4 }).unwrap();
    let (xs, ys) = inst.sides.unwrap();
    let pair = erdos_menger_pair_sets(&inst.digraph, &xs, &ys).unwrap();
    assert_eq!(pair.system.len(), 4);
    assert!(pair.separation.vertices == xs || pair.separation.vertices == ys);
    assert!(separates(&inst.digraph, &Ends::Sets(xs, ys), &pair.separation.vertices));

    let inst = gen(&InstanceSpec::Figure2d { n: 3 }).unwrap();
    let (xs, ys) = inst.sides.unwrap();
    let pair = erdos_menger_pair_sets(&inst.digraph, &xs, &ys).unwrap();
    let ends = Ends::Sets(xs, ys);
    assert!(brute_separations(&inst.digraph, &ends).unwrap().contains(&pair.separation.vertices));
}

#[test]
fn leq_and_lattice_examples() {
    let d = RootedDigraph::from_edges("x", &[("x", "a"), ("a", "b"), ("b", "y")]).unwrap();
    let ends = Ends::Pair(v(&d, "x"), v(&d, "y"));
    let (a, b) = (vs(&d, &["a"]), vs(&d, &["b"]));
    assert!(leq_separation(&d, &ends, &a, &a));
    assert!(leq_separation(&d, &ends, &a, &b));
    assert!(!leq_separation(&d, &ends, &b, &a));
    assert_eq!(min_separation(&d, &ends).unwrap().vertices, a);
    assert_eq!(max_separation(&d, &ends).unwrap().vertices, b);
    assert_eq!(brute_separations(&d, &ends).unwrap(), vec![a, b]);

    let d = RootedDigraph::from_edges("x", &[("x", "a1"), ("a1", "b1"), ("b1", "y"), ("x", "a2"), ("a2", "b2"), ("b2", "y")])
        .unwrap();
    let ends = Ends::Pair(v(&d, "x"), v(&d, "y"));
    assert_eq!(min_separation(&d, &ends).unwrap().vertices, vs(&d, &["a1", "a2"]));
    assert_eq!(max_separation(&d, &ends).unwrap().vertices, vs(&d, &["b1", "b2"]));
    assert_eq!(brute_separations(&d, &ends).unwrap().len(), 4);

    let d = random(7, 0.35, 3);
    let (r, last) = (d.root(), d.non_root_vertices().last().unwrap());
    let d = d.delete_edges(&d.edge_set().intersection(&[(r, last)].into()).copied().collect()).unwrap();
    let ends = Ends::Pair(r, last);
    let seps = brute_separations(&d, &ends).unwrap();
    for s in &seps {
        for t in &seps {
            assert_eq!(leq_separation(&d, &ends, s, t), brute_leq(&d, &ends, s, t).unwrap());
        }
    }

    let d = random(7, 0.35, 5);
    let (r, last) = (d.root(), d.non_root_vertices().last().unwrap());
    let d = d.delete_edges(&d.edge_set().intersection(&[(r, last)].into()).copied().collect()).unwrap();
    let ends = Ends::Pair(r, last);
    let lo = min_separation(&d, &ends).unwrap().vertices;
    let hi = max_separation(&d, &ends).unwrap().vertices;
    for t in brute_separations(&d, &ends).unwrap() {
        assert!(brute_leq(&d, &ends, &lo, &t).unwrap());
        assert!(brute_leq(&d, &ends, &t, &hi).unwrap());
    }
}

#[test]
fn augment_examples() {
    let d = RootedDigraph::from_edges("x", &[("x", "y")]).unwrap();
    let (xs, ys) = (vs(&d, &["x"]), vs(&d, &["y"]));
    match augment(&d, &xs, &ys, &PathSystem::empty(PathKind::Sets)).unwrap() {
        Augmentation::Grown { system, .. } => assert_eq!(system.paths, vec![path(&d, &["x", "y"])]),
        other => panic!("expected growth, got {other:?}"),
    }
    let full = PathSystem::new(PathKind::Sets, vec![path(&d, &["x", "y"])]);
    match augment(&d, &xs, &ys, &full).unwrap() {
        Augmentation::Blocked(s) => assert!(is_orthogonal(&full, &s.vertices)),
        other => panic!("expected a separation, got {other:?}"),
    }

    let inst = gen(&InstanceSpec::Figure2b { n: 3 }).unwrap();
    let d = inst.digraph;
    let (xs, ys) = inst.sides.unwrap();
    let start = PathSystem::new(PathKind::Sets, vec![path(&d, &["v2", "w2"]), path(&d, &["v3", "w3"])]);
    match augment(&d, &xs, &ys, &start).unwrap() {
        Augmentation::Grown { system, new_source, new_sink, .. } => {
            assert_eq!(new_source, v(&d, "v1"));
            assert!(new_sink == v(&d, "w0") || new_sink == v(&d, "w1"));
            assert!(system.verify(&d, &Ends::Sets(xs, ys)).is_ok());
            assert_eq!(system.len(), 3);
        }
        other => panic!("expected growth, got {other:?}"),
    }
}

#[test]
fn kappa_examples() {
    let d = graph(&[("r", "a"), ("a", "b"), ("b", "c")]);
    assert_eq!(kappa(&d, v(&d, "c")).unwrap(), 1);
    let d = graph(&[("r", "v")]);
    assert_eq!(kappa(&d, v(&d, "v")).unwrap(), 1);
    let f = fig1();
    assert_eq!(kappa(&f, v(&f, "v2_1")).unwrap(), 2);
}

// pym-linkage

#[test]
fn pym_merge_examples() {
    let d = RootedDigraph::from_parts("x1", &["x2", "y1", "y2"], &[("x1", "y1"), ("x2", "y2"), ("x1", "y2")]).unwrap();
    let (xs, ys) = (vs(&d, &["x1", "x2"]), vs(&d, &["y1", "y2"]));
    let sys = |ps: &[&[&str]]| PathSystem::new(PathKind::Sets, ps.iter().map(|p| path(&d, p)).collect());
    let p = sys(&[&["x1", "y1"], &["x2", "y2"]]);
    assert_eq!(pym_merge(&d, &xs, &ys, &p, &p).unwrap(), p);

    let out = pym_merge(&d, &xs, &ys, &sys(&[&["x1", "y2"]]), &sys(&[&["x2", "y2"]])).unwrap();
    assert!(out.initial_vertices().contains(&v(&d, "x1")));
    assert!(out.terminal_vertices().contains(&v(&d, "y2")));

    let (p, q) = (sys(&[&["x1", "y1"], &["x2", "y2"]]), sys(&[&["x1", "y2"]]));
    let out = pym_merge(&d, &xs, &ys, &p, &q).unwrap();
    assert!(out.initial_vertices().is_superset(&vs(&d, &["x1", "x2"])));
    assert!(out.terminal_vertices().contains(&v(&d, "y2")));
    let union: EdgeSet = p.edges().union(&q.edges()).copied().collect();
    assert!(out.edges().is_subset(&union));

    let d = random(8, 0.35, 13);
    let (xs, ys) = (vs(&d, &["v1", "v2", "v3"]), vs(&d, &["v5", "v6", "v7"]));
    let ends = Ends::Sets(xs.clone(), ys.clone());
    let a = erdos_menger(&d, &ends).unwrap().system;
    let b = PathSystem::new(PathKind::Sets, a.paths.iter().take(1).cloned().collect());
    let out = pym_merge(&d, &xs, &ys, &b, &a).unwrap();
    assert!(out.verify(&d, &ends).is_ok());
    assert!(out.initial_vertices().is_superset(&b.initial_vertices()));
    assert!(out.terminal_vertices().is_superset(&a.terminal_vertices()));
}

#[test]
fn pym_merge_to_vertex_examples() {
    let d = RootedDigraph::from_edges("x", &[("x", "a"), ("a", "y"), ("x", "b"), ("b", "y")]).unwrap();
    let (xs, y) = (vs(&d, &["x"]), v(&d, "y"));
    let p = PathSystem::new(PathKind::SetToSink, vec![path(&d, &["x", "a", "y"])]);
    let q = PathSystem::new(PathKind::SetToSink, vec![path(&d, &["x", "b", "y"])]);
    assert_eq!(pym_merge_to_vertex(&d, &xs, y, &p, &p).unwrap(), p);
    assert_eq!(pym_merge_to_vertex(&d, &xs, y, &p, &q).unwrap(), q);

    let d = random(8, 0.4, 17);
    let y = d.non_root_vertices().max_by_key(|&u| d.in_degree(u)).unwrap();
    let xs: VertexSet = d.vertices().iter().copied().filter(|&u| u != y).collect();
    let ends = Ends::SetToSink(xs.clone(), y);
    let m = all_systems(&d, &ends).unwrap().into_iter().max_by_key(|s| s.len()).unwrap();
    assert!(m.len() >= 2);
    let first = PathSystem::new(m.kind, m.paths.iter().take(1).cloned().collect());
    let out = pym_merge_to_vertex(&d, &xs, y, &first, &m).unwrap();
    assert!(out.verify(&d, &ends).is_ok());
    assert!(out.initial_vertices().is_superset(&first.initial_vertices()));
    assert!(out.terminal_edges().is_superset(&m.terminal_edges()));
}

#[test]
fn covering_examples() {
    let d = graph(&[("r", "a"), ("a", "v"), ("r", "b"), ("b", "v")]);
    let x = v(&d, "v");
    let s = vs(&d, &["a", "b"]);
    let out = covering_menger_system(&d, x, &es(&d, &[("a", "v")]), &s).unwrap();
    assert_eq!(out.terminal_edges(), es(&d, &[("a", "v"), ("b", "v")]));
    assert!(is_orthogonal(&out, &s));
    let out = covering_menger_system(&d, x, &EdgeSet::new(), &s).unwrap();
    assert_eq!(out.len(), 2);
    assert!(is_orthogonal(&out, &s));

    let d = graph(&[("r", "v"), ("r", "a"), ("a", "v")]);
    let x = v(&d, "v");
    let out = covering_in_large(&d, &d, x, &es(&d, &[("r", "v")])).unwrap();
    assert!(out.paths.contains(&path(&d, &["r", "v"])));

    let d = random(8, 0.45, 19);
    for x in d.non_root_vertices().collect::<Vec<_>>() {
        let minus = d.without_root_edge(x);
        let pair = erdos_menger_pair(&d, x).unwrap();
        let w = max_disjoint_paths(&minus, x).unwrap().terminal_edges();
        let out = covering_menger_system(&minus, x, &w, &pair.separation.vertices).unwrap();
        assert!(out.terminal_edges().is_superset(&w));
        assert!(is_orthogonal(&out, &pair.separation.vertices));
        assert!(out.verify(&minus, &Ends::Pair(d.root(), x)).is_ok());
    }

    let d = random(8, 0.45, 19);
    let cert = lovasz(&d).unwrap();
    for x in d.non_root_vertices().collect::<Vec<_>>() {
        let i = cert.flame.in_edges(x);
        let out = covering_in_large(&cert.flame, &d, x, &i).unwrap();
        assert_eq!(out.terminal_edges(), i);
        assert!(out.lies_in(&cert.flame));
    }
}

// flame-algebra

#[test]
fn is_in_g_examples() {
    let d = graph(&[("r", "v"), ("r", "a"), ("a", "v")]);
    let w = is_in_g(&d, v(&d, "v"), &es(&d, &[("r", "v"), ("a", "v")])).unwrap().unwrap();
    assert_eq!(w.system.len(), 2);

    let d = graph(&[("r", "a"), ("a", "v"), ("a", "b"), ("b", "v")]);
    assert!(is_in_g(&d, v(&d, "v"), &es(&d, &[("a", "v"), ("b", "v")])).unwrap().is_none());

    let d = random(8, 0.35, 23);
    for x in d.non_root_vertices().collect::<Vec<_>>() {
        let all = brute_g(&d, x).unwrap();
        let ins: Vec<_> = d.in_edges(x).into_iter().collect();
        for mask in 0u32..1 << ins.len() {
            let i: EdgeSet = ins.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, e)| *e).collect();
            assert_eq!(in_g(&d, x, &i).unwrap(), all.contains(&i));
        }
    }
}

#[test]
fn is_flame_examples() {
    let d = graph(&[("r", "a"), ("r", "b"), ("r", "c")]);
    assert!(is_flame(&d).unwrap().is_some());
    let d = graph(&[("r", "a"), ("a", "b"), ("r", "b"), ("a", "c"), ("b", "c")]);
    assert!(is_flame(&d).unwrap().is_some());
    let d = graph(&[("r", "a"), ("a", "b"), ("b", "c"), ("a", "c")]);
    assert!(is_flame(&d).unwrap().is_none());
}

#[test]
fn largeness_examples() {
    let d = graph(&[("r", "a"), ("r", "b"), ("a", "v"), ("b", "v")]);
    let x = v(&d, "v");
    assert!(is_v_large(&d, &d, x).unwrap().is_some());
    assert!(is_large(&d, &d).unwrap().unwrap().is_empty());
    let l = d.delete_edges(&es(&d, &[("b", "v")])).unwrap();
    assert!(is_v_large(&l, &d, x).unwrap().is_none());

    let f = fig1();
    let target = v(&f, "v1_0");
    let l = f.delete_edges(&es(&f, &[("v0_0", "v1_0")])).unwrap();
    let preserved = kappa(&l, target).unwrap() == kappa(&f, target).unwrap();
    assert!(!preserved);
    assert_eq!(is_large(&l, &f).unwrap().is_some(), preserved);
    assert_eq!(is_large_all(&l, &f).unwrap().is_some(), preserved);

    let d = random(8, 0.4, 29);
    let l = d.delete_edges(&d.edges().step_by(4).collect()).unwrap();
    assert_eq!(is_large(&l, &d).unwrap().is_some(), is_large_all(&l, &d).unwrap().is_some());
}

#[test]
fn quasi_flame_examples() {
    let d = graph(&[("r", "a"), ("a", "b"), ("r", "b"), ("a", "c"), ("b", "c")]);
    assert_eq!(is_quasi_flame(&d, &d, DEFAULT_CAP).unwrap(), is_flame(&d).unwrap().is_some());

    let empty = d.with_edges(EdgeSet::new()).unwrap();
    let every_subset = d.non_root_vertices().all(|x| {
        let ins: Vec<_> = d.in_edges(x).into_iter().collect();
        (0u32..1 << ins.len()).all(|mask| {
            let i: EdgeSet = ins.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, e)| *e).collect();
            in_g(&d, x, &i).unwrap()
        })
    });
    assert_eq!(is_quasi_flame(&d, &empty, DEFAULT_CAP).unwrap(), every_subset);

    let d = graph(&[("r", "a"), ("a", "b"), ("b", "v"), ("a", "v"), ("r", "v")]);
    let g = d.delete_edges(&d.in_edges(v(&d, "v"))).unwrap();
    let bad = quasi_flame_violation(&d, &g, DEFAULT_CAP).unwrap().unwrap();
    assert_eq!(bad.0, v(&d, "v"));
    assert!(!in_g(&d, bad.0, &bad.1).unwrap());
    assert!(!in_g(&d, bad.0, &es(&d, &[("a", "v"), ("b", "v")])).unwrap());

    let tight = graph(&[("r", "a"), ("a", "v"), ("a", "b")]);
    assert!(matches!(is_quasi_flame(&tight, &tight, 0), Err(FlameError::CapExceeded { .. })));
}

#[test]
fn superlarge_examples() {
    let d = graph(&[("r", "a"), ("a", "v"), ("r", "v")]);
    assert!(superlarge_condition(&d, &d, DEFAULT_CAP).unwrap().unwrap().is_empty());
    let g = d.delete_edges(&es(&d, &[("a", "v")])).unwrap();
    assert!(superlarge_condition(&g, &d, DEFAULT_CAP).unwrap().is_none());
}

#[test]
fn maximal_quasi_flame_examples() {
    let d = graph(&[("r", "a"), ("r", "b"), ("a", "v"), ("b", "v")]);
    let f = d.with_edges(d.out_edges(d.root())).unwrap();
    assert_eq!(maximal_quasi_flame(&d, &f, DEFAULT_CAP).unwrap(), d);

    let d = graph(&[("r", "a"), ("a", "b"), ("b", "v"), ("a", "v")]);
    let f = d.delete_edges(&es(&d, &[("b", "v")])).unwrap();
    assert!(is_flame(&f).unwrap().is_some());
    assert_eq!(maximal_quasi_flame(&d, &f, DEFAULT_CAP).unwrap(), f);

    let d = random(7, 0.45, 31);
    let f = d.with_edges(d.out_edges(d.root())).unwrap();
    let z = maximal_quasi_flame(&d, &f, DEFAULT_CAP).unwrap();
    assert!(is_quasi_flame(&z, &f, DEFAULT_CAP).unwrap());
    for e in d.edge_set().difference(z.edge_set()) {
        let mut more = z.edge_set().clone();
        more.insert(*e);
        assert!(!is_quasi_flame(&z.with_edges(more).unwrap(), &f, DEFAULT_CAP).unwrap());
    }
}

// incompressibility

#[test]
fn joinability_examples() {
    let inst = gen(&InstanceSpec::Figure2d { n: 4 }).unwrap();
    let (xs, ys) = inst.sides.unwrap();
    assert!(is_joinable(&inst.digraph, &xs, &ys).unwrap().is_some());
    assert!(is_incompressible(&inst.digraph, &xs, &ys).unwrap());

    let inst = gen(&InstanceSpec::Figure2a { n: 4 }).unwrap();
    let (xs, ys) = inst.sides.unwrap();
    assert!(is_joinable(&inst.digraph, &xs, &ys).unwrap().is_none());

    for (spec, joinable, incompressible) in figure2_cases() {
        let inst = gen(&spec).unwrap();
        let (xs, ys) = inst.sides.unwrap();
        assert_eq!(is_joinable(&inst.digraph, &xs, &ys).unwrap().is_some(), joinable, "{spec:?}");
        assert_eq!(is_incompressible(&inst.digraph, &xs, &ys).unwrap(), incompressible, "{spec:?}");
    }
}

#[test]
fn incompressible_separation_examples() {
    let inst = gen(&InstanceSpec::Figure2a { n: 3 }).unwrap();
    let d = inst.digraph;
    let (xs, ys) = inst.sides.unwrap();
    let x0 = v(&d, "v0");
    let s = incompressible_separation(&d, &xs, &ys, x0).unwrap();
    let rest: VertexSet = xs.iter().copied().filter(|&x| x != x0).collect();
    assert!(is_incompressible(&d, &rest, &s.vertices).unwrap());

    let d = RootedDigraph::from_parts("x1", &["x2", "y"], &[("x1", "y"), ("x2", "y")]).unwrap();
    let s = incompressible_separation(&d, &vs(&d, &["x1", "x2"]), &vs(&d, &["y"]), v(&d, "x2")).unwrap();
    assert_eq!(s.vertices, vs(&d, &["y"]));
    assert!(incompressible_separation(&d, &vs(&d, &["x1"]), &vs(&d, &["y"]), v(&d, "x1")).is_err());
}

#[test]
fn extension_lemma_examples() {
    let inst = gen(&InstanceSpec::Figure2b { n: 3 }).unwrap();
    let d = inst.digraph;
    let (xs, ys) = inst.sides.unwrap();
    let xp = vs(&d, &["v2", "v3"]);
    let yp = vs(&d, &["w2", "w3"]);
    assert_eq!(extend_joinable(&d, &xp, &xp, &ys, &yp).unwrap(), yp);
    let out = extend_joinable(&d, &xs, &xp, &ys, &yp).unwrap();
    assert!(is_joinable(&d, &xs, &out).unwrap().is_some());
    assert!(out.difference(&yp).count() <= 1);

    assert!(finitely_extendable(&d, &xs, &xp, &ys).unwrap());
    let inst = gen(&InstanceSpec::Figure2a { n: 3 }).unwrap();
    let d = inst.digraph;
    let (xs, ys) = inst.sides.unwrap();
    let xp: VertexSet = xs.difference(&vs(&d, &["v0", "v1"])).copied().collect();
    assert!(!finitely_extendable(&d, &xs, &xp, &ys).unwrap());
}

#[test]
fn delete_preserving_examples() {
    let d = RootedDigraph::from_parts("a0", &["a1", "b0", "b1"], &[("a0", "b0"), ("a1", "b1")]).unwrap();
    let (xs, ys) = (vs(&d, &["a0", "a1"]), vs(&d, &["b0", "b1"]));
    let u = vs(&d, &["a1"]);
    assert_eq!(flamekit::incomp::delete_preserving(&d, &xs, &vs(&d, &["a0"]), &ys, &u).unwrap(), u);

    let d = RootedDigraph::from_parts("a0", &["m", "b0", "b1"], &[("a0", "m"), ("m", "b0"), ("a0", "b1")]).unwrap();
    let (xs, ys) = (vs(&d, &["a0"]), vs(&d, &["b0", "b1"]));
    let u = vs(&d, &["m"]);
    assert_eq!(flamekit::incomp::delete_preserving(&d, &xs, &xs, &ys, &u).unwrap(), u);
}

#[test]
fn hit_all_families_examples() {
    let inst = gen(&InstanceSpec::Figure2d { n: 3 }).unwrap();
    let d = inst.digraph;
    let (xs, ys) = inst.sides.unwrap();
    let xp = vs(&d, &["v0"]);
    match hit_all_families(&d, &xs, &xp, &ys, &[]).unwrap() {
        HitOutcome::Found { set, .. } => assert_eq!(set, xp),
        other => panic!("{other:?}"),
    }
    let family: VertexSet = xs.difference(&xp).copied().collect();
    match hit_all_families(&d, &xs, &xp, &ys, &[family.clone()]).unwrap() {
        HitOutcome::Found { set, .. } => {
            assert_eq!(set.len(), xp.len() + 1);
            assert!(set.is_superset(&xp) && !set.is_disjoint(&family));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn hit_all_families_greedy_failure() {
    // routing v1 first uses up v5, so the greedy pass cannot meet {v5}
    let d = flamekit::format::parse_digraph(
        "root v0\nv0 v1\nv0 v3\nv1 v3\nv1 v4\nv1 v5\nv1 v6\nv2 v3\nv2 v4\nv2 v6\n\
         v3 v4\nv3 v5\nv4 v1\nv4 v6\nv5 v3\nv6 v1\nv6 v2\nv6 v5\n",
    )
    .unwrap();
    let xs = vs(&d, &["v1", "v5"]);
    let ys = vs(&d, &["v0", "v2", "v3", "v4"]);
    let families = [vs(&d, &["v1"]), vs(&d, &["v1"]), vs(&d, &["v5"])];
    let out = hit_all_families(&d, &xs, &VertexSet::new(), &ys, &families).unwrap();
    assert_eq!(out, HitOutcome::Found { set: xs, method: HitMethod::Exhaustive });
}

#[test]
fn auxiliary_examples() {
    let d = graph(&[("r", "a"), ("a", "w")]);
    let aux = build_auxiliary(&d, v(&d, "w")).unwrap();
    assert_eq!((aux.xs.len(), aux.ys.len()), (1, 1));
    assert!(flamekit::incomp::is_joinable(&aux.digraph, &aux.xs, &aux.ys).unwrap().is_some());

    let d = graph(&[("r", "a"), ("r", "b"), ("a", "w"), ("b", "w")]);
    let w = v(&d, "w");
    let aux = build_auxiliary(&d, w).unwrap();
    let both = aux.x_set(&d.in_edges(w));
    assert!(is_joinable(&aux.digraph, &both, &aux.ys).unwrap().is_some());

    let d = graph(&[("r", "w"), ("r", "a"), ("a", "w")]);
    assert!(build_auxiliary(&d, v(&d, "w")).is_err());

    let d = random(7, 0.45, 37);
    for w in d.non_root_vertices().collect::<Vec<_>>() {
        if d.has_edge((d.root(), w)) {
            continue;
        }
        let aux = build_auxiliary(&d, w).unwrap();
        let ins: Vec<_> = d.in_edges(w).into_iter().collect();
        for mask in 0u32..1 << ins.len() {
            let i: EdgeSet = ins.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, e)| *e).collect();
            let joined = is_joinable(&aux.digraph, &aux.x_set(&i), &aux.ys).unwrap().is_some();
            assert_eq!(joined, in_g(&d, w, &i).unwrap());
        }
    }
}

#[test]
fn extend_hitting_g_examples() {
    let d = graph(&[("r", "a"), ("r", "b"), ("a", "w"), ("b", "w")]);
    let w = v(&d, "w");
    let i = es(&d, &[("a", "w")]);
    match extend_hitting_g(&d, w, &i, &[], DEFAULT_CAP).unwrap() {
        HitOutcome::Found { set, .. } => assert_eq!(set, i),
        other => panic!("{other:?}"),
    }
    let rest: EdgeSet = d.in_edges(w).difference(&i).copied().collect();
    match extend_hitting_g(&d, w, &i, &[rest], DEFAULT_CAP).unwrap() {
        HitOutcome::Found { set, .. } => {
            assert_eq!(set, d.in_edges(w));
            assert!(in_g(&d, w, &set).unwrap());
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn bubble_forced_example() {
    let d = graph(&[("r", "u"), ("u", "v"), ("v", "w")]);
    let res = bubble(&d, v(&d, "w"), &es(&d, &[("v", "w")]), (v(&d, "u"), v(&d, "v"))).unwrap();
    assert_eq!(res.separation, vs(&d, &["v"]));
    assert_eq!(res.system.paths, vec![path(&d, &["r", "u", "v"])]);
    assert!(flamekit::incomp::bubble_is_covering(&res));

    let err = bubble(&d, v(&d, "w"), &EdgeSet::new(), (v(&d, "u"), v(&d, "v"))).unwrap_err();
    assert!(err.to_string().contains("precondition"));
}

// flame-extend

#[test]
fn separation_supremum_examples() {
    let d = graph(&[("r", "a"), ("a", "x"), ("r", "b"), ("b", "x")]);
    let x = v(&d, "x");
    let s = vs(&d, &["a", "b"]);
    assert_eq!(separation_supremum(&d, x, &[s.clone(), s.clone()]).unwrap(), s);

    // {a,c} does not separate b from r, {a,b} does not separate c from r
    let d = graph(&[("r", "a"), ("a", "x"), ("r", "b"), ("b", "c"), ("c", "x"), ("r", "c"), ("r", "e"), ("e", "b")]);
    let x = v(&d, "x");
    let out = separation_supremum(&d, x, &[vs(&d, &["a", "b", "c"]), vs(&d, &["a", "c"])]).unwrap();
    assert_eq!(out, vs(&d, &["a", "c"]));
    assert!(separation_supremum(&d, x, &[vs(&d, &["a"])]).is_err());
}

#[test]
fn key_i_star_examples() {
    let d = graph(&[("r", "a"), ("r", "b"), ("a", "v"), ("b", "v")]);
    let x = v(&d, "v");
    let g = d.clone();
    assert_eq!(key_i_star(&d, &g, x, DEFAULT_CAP).unwrap(), d.in_edges(x));

    // {v→w, a→w} at w is rescued only by b→v
    let l = graph(&[("r", "a"), ("r", "b"), ("a", "v"), ("b", "v"), ("v", "w"), ("a", "w")]);
    let g = l.with_edges(l.out_edges(l.root())).unwrap();
    let x = v(&l, "v");
    assert!(is_quasi_flame(&l, &g, DEFAULT_CAP).unwrap());
    let relevant = relevant_sets(&l, &g, x).unwrap();
    assert!(relevant.iter().any(|rel| rel.rescuers == es(&l, &[("b", "v")])));
    let star = key_i_star(&l, &g, x, DEFAULT_CAP).unwrap();
    assert_eq!(star, es(&l, &[("b", "v")]));
    assert!(in_g(&l, x, &star).unwrap());
    assert!(is_quasi_flame(&l.restrict_at(x, &star).unwrap(), &g, DEFAULT_CAP).unwrap());
}

#[test]
fn extend_examples() {
    let d = graph(&[("r", "a"), ("r", "b"), ("a", "v"), ("b", "v")]);
    let f = d.with_edges(d.out_edges(d.root())).unwrap();
    for mode in [Mode::Faithful, Mode::FiniteDirect] {
        let cert = extend_flame(&d, &f, mode, None, DEFAULT_CAP).unwrap();
        assert_eq!(cert.flame, d);
        assert_eq!(cert.flame.in_degree(v(&d, "v")), 2);
        cert.verify().unwrap();
    }

    let d = fig1();
    let f = d.with_edges(d.out_edges(d.root())).unwrap();
    let cert = extend_flame(&d, &f, Mode::FiniteDirect, None, DEFAULT_CAP).unwrap();
    cert.verify().unwrap();
    for u in d.non_root_vertices() {
        assert_eq!(cert.flame.in_degree(u), kappa(&d, u).unwrap());
    }

    let bad = graph(&[("r", "a"), ("a", "b"), ("b", "c"), ("a", "c")]);
    let err = extend_flame(&bad, &bad, Mode::FiniteDirect, None, DEFAULT_CAP).unwrap_err();
    assert!(matches!(err, FlameError::Domain(ref m) if m.contains('c')));
}

#[test]
fn lovasz_examples() {
    for d in [gen(&InstanceSpec::Star { n: 3 }).unwrap().digraph, fig1()] {
        let cert = lovasz(&d).unwrap();
        assert!(cert.lovasz_identity().unwrap());
        for u in d.non_root_vertices() {
            let k = kappa(&d, u).unwrap();
            assert_eq!(kappa(&cert.flame, u).unwrap(), k);
            assert_eq!(cert.flame.in_degree(u), k);
        }
    }
    let star = gen(&InstanceSpec::Star { n: 3 }).unwrap().digraph;
    assert_eq!(lovasz(&star).unwrap().flame, star);
}

// oracle-testkit

#[test]
fn oracle_examples() {
    let d = graph(&[("r", "a"), ("a", "v")]);
    let all = brute_all_path_systems(&d, v(&d, "v")).unwrap();
    assert_eq!(all.len(), 2);
    assert!(all[0].is_empty());
    assert_eq!(all[1].paths, vec![path(&d, &["r", "a", "v"])]);

    let d = graph(&[("r", "a"), ("r", "b"), ("a", "v"), ("b", "v")]);
    assert_eq!(brute_all_path_systems(&d, v(&d, "v")).unwrap().len(), 4);

    let d = random(8, 0.35, 23);
    for x in d.non_root_vertices().collect::<Vec<_>>() {
        assert_eq!(
            brute_all_path_systems(&d, x).unwrap().len(),
            count_path_systems_by_terminal_edge(&d, x).unwrap()
        );
    }

    let d = graph(&[("r", "v")]);
    assert_eq!(brute_g(&d, v(&d, "v")).unwrap(), vec![EdgeSet::new(), es(&d, &[("r", "v")])]);
    let d = graph(&[("r", "a"), ("a", "v"), ("a", "b"), ("b", "v")]);
    assert!(!brute_g(&d, v(&d, "v")).unwrap().contains(&es(&d, &[("a", "v"), ("b", "v")])));

    let big = gen(&InstanceSpec::Chain { n: 9 }).unwrap().digraph;
    assert!(matches!(brute_all_path_systems(&big, v(&big, "v9")), Err(FlameError::CapExceeded { .. })));
}

#[test]
fn generator_examples() {
    assert_eq!(fig1().num_edges(), 14);
    let inst = gen(&InstanceSpec::Figure2d { n: 4 }).unwrap();
    assert_eq!(inst.digraph.num_edges(), 4);
    let (xs, ys) = inst.sides.unwrap();
    assert!(is_incompressible(&inst.digraph, &xs, &ys).unwrap());
    let text = |s| flamekit::format::to_edge_list_text(&gen(&s).unwrap().digraph);
    let spec = InstanceSpec::Random { n: 8, p: 0.35, seed: 7 };
    assert_eq!(text(spec.clone()), text(spec));
}

#[test]
fn finite_direct_survives_dropped_targets() {
    for seed in [32u64, 110] {
        let n = 4 + (seed % 7) as usize;
        let p = [0.2, 0.35, 0.5][(seed % 3) as usize];
        let d = gen(&InstanceSpec::Random { n, p, seed }).unwrap().digraph;
        let f = random_flame(&d, seed, 0.5).unwrap();
        let cert = extend_flame(&d, &f, Mode::FiniteDirect, None, 12).unwrap();
        cert.verify().unwrap();
        assert!(is_flame(&cert.flame).unwrap().is_some(), "seed {seed}");
        assert!(is_large_all(&cert.flame, &d).unwrap().is_some(), "seed {seed}");
    }
}
