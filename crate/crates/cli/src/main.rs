use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use flamekit::cert::{self, looks_like_json};
use flamekit::compare::{run_suite, Suite};
use flamekit::extend::{extend_flame, lovasz, random_flame, LargeFlameCertificate, Mode};
use flamekit::flame::{flame_violation, is_v_large, quasi_flame_violation, DEFAULT_CAP};
use flamekit::format::{parse_digraph, parse_edge_list, to_dot, to_edge_list_text};
use flamekit::gen::{gen, InstanceSpec};
use flamekit::incomp::{bubble, is_incompressible, is_joinable};
use flamekit::menger::{erdos_menger, kappa, max_separation, min_separation, Ends, PathSystem};
use flamekit::{Edge, EdgeSet, FlameError, RootedDigraph, Vertex, VertexSet};

#[derive(Parser)]
#[command(name = "flamekit", version, about = "Vertex-flames and Erdős-Menger tools for rooted digraphs")]
struct Cli {
    /// Emit DOT instead of JSON where the result is a digraph.
    #[arg(long, global = true)]
    dot: bool,
    /// Largest in-degree accepted by the interval-lattice checks.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap_in_degree: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Edge-list file, or `-` for stdin.
    #[arg(default_value = "-")]
    input: String,
}

#[derive(Args)]
struct EndsArgs {
    /// Target vertex; paths run from `--source` (default: the root).
    #[arg(long, conflicts_with_all = ["sources", "sinks"])]
    target: Option<String>,
    #[arg(long, requires = "target")]
    source: Option<String>,
    /// Comma-separated source side of an (X,Y) problem.
    #[arg(long, requires = "sinks")]
    sources: Option<String>,
    /// Comma-separated sink side of an (X,Y) problem.
    #[arg(long, requires = "sources")]
    sinks: Option<String>,
}

#[derive(Args)]
struct SidesArgs {
    #[arg(long)]
    sources: String,
    #[arg(long)]
    sinks: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Faithful,
    FiniteDirect,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Random,
    Fig1,
    Figure2a,
    Figure2b,
    Figure2c,
    Figure2d,
    Chain,
    Star,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check an edge list.
    Validate(Input),
    /// Local connectivity κ(r, v).
    Kappa {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        target: Option<String>,
    },
    /// Maximum path-system with an orthogonal separation.
    Menger {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        ends: EndsArgs,
    },
    /// Smallest Erdős-Menger separation.
    SeparationMin {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        ends: EndsArgs,
    },
    /// Largest Erdős-Menger separation.
    SeparationMax {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        ends: EndsArgs,
    },
    /// Whether a digraph (or a certificate's F*) is a flame.
    FlameCheck(Input),
    /// Whether L is large in D: a certificate, or an edge list with `--host`.
    LargeCheck {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        host: Option<String>,
    },
    /// Whether the input is a G-quasi-flame for the spanning subgraph `--subgraph`.
    QuasiFlameCheck {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        subgraph: String,
    },
    /// Extend a flame to a large flame and emit a certificate.
    Extend {
        #[command(flatten)]
        input: Input,
        /// Edge list of the starting flame (default: no edges).
        #[arg(long, conflicts_with = "random_flame")]
        flame: Option<String>,
        /// Start from a seeded random flame instead.
        #[arg(long)]
        random_flame: bool,
        #[arg(long, value_enum, default_value = "finite-direct")]
        mode: ModeArg,
        /// Comma-separated processing order of the non-root vertices.
        #[arg(long)]
        order: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Large flame from the edgeless flame, with the connectivity identities.
    Lovasz(Input),
    /// Whether `--sources` can be linked onto `--sinks` by disjoint paths.
    Joinable {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        sides: SidesArgs,
    },
    /// Whether `--sources` is incompressible to `--sinks`.
    Incompressible {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        sides: SidesArgs,
    },
    /// Separation and path-system around an edge every witness needs.
    Bubble {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        w: String,
        /// Comma-separated `tail:head` edges into w.
        #[arg(long)]
        edges: String,
        /// The edge as `tail:head`.
        #[arg(long)]
        uv: String,
    },
    /// Generate an instance as an edge list.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 0.35)]
        p: f64,
        #[arg(long, default_value_t = 2)]
        n0: usize,
        #[arg(long, default_value_t = 3)]
        n1: usize,
        #[arg(long, default_value_t = 2)]
        n2: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Cross-check flow results against brute force on seeded instances.
    OracleCompare {
        /// Suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 7)]
        max_n: usize,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

enum Output {
    Json(Value),
    Text(String),
}

type Res<T> = Result<T, FlameError>;

fn read_source(path: &str) -> Res<String> {
    let mut s = String::new();
    let r = if path == "-" {
        io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| s = t)
    };
    r.map_err(|e| FlameError::domain(format!("cannot read {path}: {e}")))?;
    Ok(s)
}

fn read_graph(path: &str) -> Res<RootedDigraph> {
    parse_digraph(&read_source(path)?)
}

fn default_seed(seed: Option<u64>) -> Res<u64> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var("FLAMEKIT_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| FlameError::domain("FLAMEKIT_SEED must be an unsigned integer")),
        Err(_) => Ok(0),
    }
}

fn vertex(d: &RootedDigraph, name: &str) -> Res<Vertex> {
    d.vertex(name).ok_or_else(|| FlameError::domain(format!("unknown vertex {name}")))
}

fn vertex_list(d: &RootedDigraph, list: &str) -> Res<Vec<Vertex>> {
    list.split(',').filter(|s| !s.is_empty()).map(|s| vertex(d, s.trim())).collect()
}

fn vertex_set(d: &RootedDigraph, list: &str) -> Res<VertexSet> {
    Ok(vertex_list(d, list)?.into_iter().collect())
}

fn edge(d: &RootedDigraph, s: &str) -> Res<Edge> {
    let (t, h) = s
        .split_once(':')
        .ok_or_else(|| FlameError::domain(format!("expected tail:head, got {s}")))?;
    Ok((vertex(d, t.trim())?, vertex(d, h.trim())?))
}

fn names(d: &RootedDigraph, vs: impl IntoIterator<Item = Vertex>) -> Value {
    Value::from(vs.into_iter().map(|v| d.name(v).to_string()).collect::<Vec<_>>())
}

fn paths(d: &RootedDigraph, s: &PathSystem) -> Value {
    Value::from(s.paths.iter().map(|p| names(d, p.iter().copied())).collect::<Vec<_>>())
}

fn edges(d: &RootedDigraph, es: &EdgeSet) -> Value {
    Value::from(es.iter().map(|&(t, h)| names(d, [t, h])).collect::<Vec<_>>())
}

/// Pair ends are taken in `D - xy`, so an `(r, v)` problem ignores `rv`.
fn ends_of(d: &RootedDigraph, a: &EndsArgs) -> Res<(RootedDigraph, Ends)> {
    match (&a.target, &a.sources, &a.sinks) {
        (Some(t), None, None) => {
            let y = vertex(d, t)?;
            let x = match &a.source {
                Some(s) => vertex(d, s)?,
                None => d.root(),
            };
            if x == y {
                return Err(FlameError::domain("source and target must differ"));
            }
            let g = if d.has_edge((x, y)) { d.delete_edges(&[(x, y)].into())? } else { d.clone() };
            Ok((g, Ends::Pair(x, y)))
        }
        (None, Some(xs), Some(ys)) => Ok((d.clone(), Ends::Sets(vertex_set(d, xs)?, vertex_set(d, ys)?))),
        _ => Err(FlameError::domain("give --target, or both --sources and --sinks")),
    }
}

fn certificate_out(cert: &LargeFlameCertificate, dot: bool) -> Output {
    if dot {
        Output::Text(to_dot(&cert.flame))
    } else {
        Output::Json(cert::to_json(cert))
    }
}

fn graph_out(d: &RootedDigraph, dot: bool) -> Output {
    if dot {
        Output::Text(to_dot(d))
    } else {
        Output::Text(to_edge_list_text(d))
    }
}

fn no_dot(dot: bool) -> Res<()> {
    if dot {
        return Err(FlameError::domain("--dot is only available for validate, extend, lovasz and gen"));
    }
    Ok(())
}

fn run(cli: Cli) -> Res<Output> {
    let cap = cli.cap_in_degree;
    let dot = cli.dot;
    match cli.command {
        Command::Validate(i) => {
            let list = parse_edge_list(&read_source(&i.input)?)?;
            let diags = list.validate();
            if !diags.is_empty() {
                let msg: Vec<String> = diags.iter().map(ToString::to_string).collect();
                return Err(FlameError::domain(msg.join("; ")));
            }
            let d = list.into_digraph()?;
            if dot {
                return Ok(Output::Text(to_dot(&d)));
            }
            Ok(Output::Json(json!({
                "valid": true,
                "root": d.name(d.root()),
                "vertices": d.num_vertices(),
                "edges": d.num_edges(),
            })))
        }
        Command::Kappa { input, target } => {
            no_dot(dot)?;
            let d = read_graph(&input.input)?;
            match target {
                Some(t) => Ok(Output::Json(json!({ "kappa": kappa(&d, vertex(&d, &t)?)? }))),
                None => {
                    let mut m = serde_json::Map::new();
                    for v in d.non_root_vertices() {
                        m.insert(d.name(v).to_string(), json!(kappa(&d, v)?));
                    }
                    Ok(Output::Json(json!({ "kappa": m })))
                }
            }
        }
        Command::Menger { input, ends } => {
            no_dot(dot)?;
            let d = read_graph(&input.input)?;
            let (g, e) = ends_of(&d, &ends)?;
            let pair = erdos_menger(&g, &e)?;
            Ok(Output::Json(json!({
                "size": pair.system.len(),
                "paths": paths(&d, &pair.system),
                "separation": names(&d, pair.separation.vertices.iter().copied()),
            })))
        }
        Command::SeparationMin { input, ends } => {
            no_dot(dot)?;
            let d = read_graph(&input.input)?;
            let (g, e) = ends_of(&d, &ends)?;
            let s = min_separation(&g, &e)?;
            Ok(Output::Json(json!({ "separation": names(&d, s.vertices) })))
        }
        Command::SeparationMax { input, ends } => {
            no_dot(dot)?;
            let d = read_graph(&input.input)?;
            let (g, e) = ends_of(&d, &ends)?;
            let s = max_separation(&g, &e)?;
            Ok(Output::Json(json!({ "separation": names(&d, s.vertices) })))
        }
        Command::FlameCheck(i) => {
            no_dot(dot)?;
            let text = read_source(&i.input)?;
            let f = if looks_like_json(&text) {
                let v: Value = serde_json::from_str(&text).map_err(|e| FlameError::domain(format!("bad JSON: {e}")))?;
                cert::from_json(&v)?.flame
            } else {
                parse_digraph(&text)?
            };
            let bad = flame_violation(&f)?;
            Ok(Output::Json(json!({
                "flame": bad.is_none(),
                "violation": bad.map(|v| f.name(v).to_string()),
            })))
        }
        Command::LargeCheck { input, host } => {
            no_dot(dot)?;
            let text = read_source(&input.input)?;
            let (l, d) = if looks_like_json(&text) {
                let v: Value = serde_json::from_str(&text).map_err(|e| FlameError::domain(format!("bad JSON: {e}")))?;
                let c = cert::from_json(&v)?;
                let d = match host {
                    Some(h) => read_graph(&h)?,
                    None => c.host,
                };
                (c.flame, d)
            } else {
                let h = host.ok_or_else(|| FlameError::domain("edge-list input needs --host"))?;
                let d = read_graph(&h)?;
                let l = parse_digraph(&text)?;
                (aligned(&l, &d)?, d)
            };
            let mut failing = None;
            for v in d.non_root_vertices() {
                if is_v_large(&l, &d, v)?.is_none() {
                    failing = Some(d.name(v).to_string());
                    break;
                }
            }
            Ok(Output::Json(json!({ "large": failing.is_none(), "failing_vertex": failing })))
        }
        Command::QuasiFlameCheck { input, subgraph } => {
            no_dot(dot)?;
            let d = read_graph(&input.input)?;
            let g = aligned(&read_graph(&subgraph)?, &d)?;
            let bad = quasi_flame_violation(&d, &g, cap)?;
            Ok(Output::Json(json!({
                "quasi_flame": bad.is_none(),
                "violation": bad.map(|(v, i)| json!({ "vertex": d.name(v), "edges": edges(&d, &i) })),
            })))
        }
        Command::Extend { input, flame: fpath, random_flame: rf, mode, order, seed } => {
            let d = read_graph(&input.input)?;
            let (f, seed) = if rf {
                let s = default_seed(seed)?;
                (random_flame(&d, s, 0.5)?, Some(s))
            } else {
                let f = match fpath {
                    Some(p) => aligned(&read_graph(&p)?, &d)?,
                    None => d.with_edges(EdgeSet::new())?,
                };
                (f, seed)
            };
            let order = order.map(|o| vertex_list(&d, &o)).transpose()?;
            let mode = match mode {
                ModeArg::Faithful => Mode::Faithful,
                ModeArg::FiniteDirect => Mode::FiniteDirect,
            };
            let mut cert = extend_flame(&d, &f, mode, order.as_deref(), cap)?;
            cert.seed = seed;
            cert.verify()?;
            Ok(certificate_out(&cert, dot))
        }
        Command::Lovasz(i) => {
            let d = read_graph(&i.input)?;
            let cert = lovasz(&d)?;
            cert.verify()?;
            Ok(certificate_out(&cert, dot))
        }
        Command::Joinable { input, sides } => {
            no_dot(dot)?;
            let d = read_graph(&input.input)?;
            let (xs, ys) = (vertex_set(&d, &sides.sources)?, vertex_set(&d, &sides.sinks)?);
            let w = is_joinable(&d, &xs, &ys)?;
            Ok(Output::Json(json!({
                "joinable": w.is_some(),
                "paths": w.map(|w| paths(&d, &w.system)),
            })))
        }
        Command::Incompressible { input, sides } => {
            no_dot(dot)?;
            let d = read_graph(&input.input)?;
            let (xs, ys) = (vertex_set(&d, &sides.sources)?, vertex_set(&d, &sides.sinks)?);
            Ok(Output::Json(json!({ "incompressible": is_incompressible(&d, &xs, &ys)? })))
        }
        Command::Bubble { input, w, edges: es, uv } => {
            no_dot(dot)?;
            let d = read_graph(&input.input)?;
            let w = vertex(&d, &w)?;
            let i: EdgeSet = es.split(',').filter(|s| !s.is_empty()).map(|s| edge(&d, s)).collect::<Res<_>>()?;
            let uv = edge(&d, &uv)?;
            let res = bubble(&d, w, &i, uv)?;
            Ok(Output::Json(json!({
                "separation": names(&d, res.separation.iter().copied()),
                "paths": paths(&d, &res.system),
                "branch": serde_json::to_value(res.branch).expect("plain enum"),
            })))
        }
        Command::Gen { kind, n, p, n0, n1, n2, seed } => {
            let spec = match kind {
                Kind::Random => InstanceSpec::Random { n, p, seed: default_seed(seed)? },
                Kind::Fig1 => InstanceSpec::Fig1 { n0, n1, n2 },
                Kind::Figure2a => InstanceSpec::Figure2a { n },
                Kind::Figure2b => InstanceSpec::Figure2b { n },
                Kind::Figure2c => InstanceSpec::Figure2c { n },
                Kind::Figure2d => InstanceSpec::Figure2d { n },
                Kind::Chain => InstanceSpec::Chain { n },
                Kind::Star => InstanceSpec::Star { n },
            };
            let inst = gen(&spec)?;
            let d = &inst.digraph;
            match (graph_out(d, dot), inst.sides) {
                (Output::Text(body), Some((xs, ys))) if !dot => {
                    let list = |s: &VertexSet| s.iter().map(|&v| d.name(v)).collect::<Vec<_>>().join(" ");
                    Ok(Output::Text(format!("# sources {}\n# sinks {}\n{body}", list(&xs), list(&ys))))
                }
                (out, _) => Ok(out),
            }
        }
        Command::OracleCompare { suite, max_n, cases, seed } => {
            no_dot(dot)?;
            let seed = default_seed(seed)?;
            let suites: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![Suite::parse(&suite).ok_or_else(|| FlameError::domain(format!("unknown suite {suite}")))?]
            };
            let mut reports = Vec::new();
            let mut total = 0;
            for s in suites {
                let r = run_suite(s, cases, max_n, seed)?;
                total += r.mismatches;
                reports.push(serde_json::to_value(r).expect("report serializes"));
            }
            Ok(Output::Json(json!({ "mismatches": total, "seed": seed, "suites": reports })))
        }
    }
}

/// Re-indexes `l` into the vertex universe of `d`, matching by name.
fn aligned(l: &RootedDigraph, d: &RootedDigraph) -> Res<RootedDigraph> {
    if l.name(l.root()) != d.name(d.root()) {
        return Err(FlameError::domain("subgraph and host have different roots"));
    }
    let mut es = EdgeSet::new();
    for (t, h) in l.edges() {
        let e = (vertex(d, l.name(t))?, vertex(d, l.name(h))?);
        if !d.has_edge(e) {
            return Err(FlameError::domain(format!("{} is not an edge of the host", l.edge_label((t, h)))));
        }
        es.insert(e);
    }
    for v in l.vertices() {
        vertex(d, l.name(*v))?;
    }
    d.with_edges(es)
}

fn diagnostic(e: &FlameError) -> (u8, Value) {
    match e {
        FlameError::Parse { line, message } => (1, json!({ "error": "parse", "line": line, "message": message })),
        FlameError::Domain(m) => (2, json!({ "error": "domain", "message": m })),
        FlameError::CapExceeded { what, actual, cap } => {
            (3, json!({ "error": "cap", "what": what, "actual": actual, "cap": cap }))
        }
        FlameError::Internal(m) => (70, json!({ "error": "internal", "message": m })),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = match run(cli) {
        Ok(o) => o,
        Err(e) => {
            let (code, v) = diagnostic(&e);
            eprintln!("{v}");
            return ExitCode::from(code);
        }
    };
    let text = match out {
        Output::Json(v) => format!("{v}\n"),
        Output::Text(t) => t,
    };
    let mut stdout = io::stdout().lock();
    if stdout.write_all(text.as_bytes()).is_err() {
        return ExitCode::from(74);
    }
    ExitCode::SUCCESS
}
