use std::io::Read;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use stw_core::generators::{
    self, flatten_edge, gen_abh, gen_flattened_grid, gen_grid, gen_hk, gen_hk_bad_order, iterated_subdivision,
    random_bounded_degree, random_cograph, random_gnp, random_sparse, subdivide_simple, subdivision_pipeline,
};
use stw_core::io::{self, Instance};
use stw_core::matrix::{
    adjacency_matrix, approx_stw, greedy_diagonal_sequence, is_part_wide, sequence_from_divisions, verify_matrix_sequence,
    ApproxOutcome, GreedyOutcome, SymBitMatrix, SymDivision,
};
use stw_core::mis::{self, default_threshold, is_independent, mis_branch, mis_exact, mis_tw_dp, MisResult};
use stw_core::overlap::{
    clean_biclique_at_least, crosses, ktt_upper_check, max_rainbow_over, overlap_graph, BicliqueBudget, BicliqueOutcome,
    KttCheck,
};
use stw_core::separator::{
    balanced_separator, certified_t, left_right_separator, min_degree_decomposition, separates_left_right,
    tree_decomposition, verify_separation, TChoice,
};
use stw_core::stretch::{
    exact_stw, exact_stw_fixed_order, order_from_component_sequence, verify_sequence, StretchError, DEFAULT_ALL_ORDERS_LIMIT, DEFAULT_FIXED_ORDER_LIMIT,
};
use stw_core::{OrderedGraph, PartitionSequence};

use crate::report::{render_json, render_text, Outcome};
use crate::{Cli, Command, Division, Emit, Format, Gen, Mis, Model, Overlap, Separator, Stw};

/// Runs the command on every input and returns the exit code and the full output.
pub fn run(cli: &Cli) -> (u8, String) {
    let g = &cli.global;
    let inputs: Vec<Option<&PathBuf>> =
        if g.input.is_empty() { vec![None] } else { g.input.iter().map(Some).collect() };
    if inputs.len() > 1 && writes_files(&cli.command) {
        eprintln!("error: certificate paths cannot be combined with several inputs");
        return (2, String::new());
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(g.jobs.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return (2, String::new());
        }
    };
    let results: Vec<(Option<&PathBuf>, Result<Outcome>)> =
        pool.install(|| inputs.par_iter().map(|&inp| (inp, job(cli, inp.map(PathBuf::as_path)))).collect());
    let mut code = 0u8;
    let mut blocks = Vec::new();
    for (inp, res) in results {
        let name = inp.map_or_else(String::new, |p| p.display().to_string());
        let (c, report, raw) = match res {
            Ok(o) => (o.code, o.report, o.raw),
            Err(e) => {
                let msg = format!("{e:#}");
                if name.is_empty() {
                    eprintln!("error: {msg}");
                } else {
                    eprintln!("error: {name}: {msg}");
                }
                let raw = (g.format == Format::Text && inputs.len() == 1).then(String::new);
                (2, json!({ "error": msg }), raw)
            }
        };
        code = code.max(c);
        blocks.push((name, report, raw));
    }
    let out = match (g.format, blocks.len()) {
        (Format::Json, 1) => render_json(&blocks[0].1),
        (Format::Json, _) => render_json(&Value::Array(
            blocks.into_iter().map(|(name, report, _)| json!({ "input": name, "report": report })).collect(),
        )),
        (Format::Text, 1) => {
            let (_, report, raw) = blocks.pop().expect("one block");
            raw.unwrap_or_else(|| render_text(&report))
        }
        (Format::Text, _) => blocks
            .into_iter()
            .map(|(name, report, raw)| format!("== {name} ==\n{}", raw.unwrap_or_else(|| render_text(&report))))
            .collect(),
    };
    (code, out)
}

fn writes_files(c: &Command) -> bool {
    match c {
        Command::Stw(Stw::Exact { certificate, reordered }) => certificate.is_some() || reordered.is_some(),
        Command::Stw(Stw::FixedOrder { certificate, .. })
        | Command::Overlap(Overlap::CleanBiclique { certificate, .. })
        | Command::Division(Division::DiagonalSeq { certificate, .. })
        | Command::Division(Division::ToSequence { certificate, .. })
        | Command::Separator(Separator::Balanced { certificate, .. })
        | Command::Separator(Separator::LeftRight { certificate, .. })
        | Command::Separator(Separator::Treedecomp { certificate, .. })
        | Command::Mis(Mis::Exact { certificate })
        | Command::Mis(Mis::Branch { certificate, .. })
        | Command::Mis(Mis::Dp { certificate, .. }) => certificate.is_some(),
        Command::Stw(Stw::Approx { certificate, chain, witness, .. }) => {
            certificate.is_some() || chain.is_some() || witness.is_some()
        }
        _ => false,
    }
}

fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load(path: &Path) -> Result<Instance> {
    io::parse_instance(&read_text(path)?).with_context(|| format!("{}", path.display()))
}

fn write_file(path: &Option<PathBuf>, content: &str) -> Result<()> {
    if let Some(p) = path {
        std::fs::write(p, content).with_context(|| format!("cannot write {}", p.display()))?;
    }
    Ok(())
}

fn input_instance(input: Option<&Path>) -> Result<Instance> {
    load(input.ok_or_else(|| anyhow!("--input is required"))?)
}

fn graph_of(inst: Instance) -> Result<OrderedGraph> {
    match inst {
        Instance::Graph(g) => Ok(g),
        Instance::Matrix(m) => {
            if (0..m.n()).any(|i| m.get(i, i)) {
                bail!("matrix has a non-zero diagonal and is not an adjacency matrix");
            }
            let mut edges = Vec::new();
            for i in 0..m.n() {
                edges.extend((i + 1..m.n()).filter(|&j| m.get(i, j)).map(|j| (i, j)));
            }
            Ok(OrderedGraph::new(m.n(), &edges)?)
        }
        other => bail!("expected a graph, found a {} file", other.kind()),
    }
}

fn matrix_of(inst: Instance) -> Result<SymBitMatrix> {
    match inst {
        Instance::Matrix(m) => Ok(m),
        Instance::Graph(g) => Ok(adjacency_matrix(&g)),
        other => bail!("expected a matrix or graph, found a {} file", other.kind()),
    }
}

fn input_graph(input: Option<&Path>) -> Result<OrderedGraph> {
    graph_of(input_instance(input)?)
}

fn budget(cli: &Cli) -> BicliqueBudget {
    let mut b = BicliqueBudget::default();
    if let Some(e) = cli.global.budget {
        b.edges = e;
    }
    b
}

fn json_u128(x: u128) -> Value {
    u64::try_from(x).map_or_else(|_| json!(x.to_string()), |v| json!(v))
}

fn job(cli: &Cli, input: Option<&Path>) -> Result<Outcome> {
    match &cli.command {
        Command::Gen(g) => gen(cli, g, input),
        Command::Stw(s) => stw(cli, s, input),
        Command::Overlap(o) => overlap(cli, o, input),
        Command::Division(d) => division(d, input),
        Command::Separator(s) => separator(cli, s, input),
        Command::Mis(m) => mis_cmd(cli, m, input),
    }
}

fn emitted(command: &str, g: &OrderedGraph, emit: Emit, witness: Option<&PartitionSequence>, extra: Value) -> Result<Outcome> {
    let file = match emit {
        Emit::Graph => io::write_graph(g),
        Emit::Matrix => io::write_matrix(&adjacency_matrix(g)),
        Emit::Witness => io::write_sequence(witness.ok_or_else(|| anyhow!("{command} has no witness sequence"))?),
    };
    let mut report = json!({ "command": command, "n": g.n(), "m": g.m(), "file": file.clone() });
    if let (Value::Object(r), Value::Object(x)) = (&mut report, extra) {
        r.extend(x);
    }
    Ok(Outcome { code: 0, report, raw: Some(file) })
}

fn seed(cli: &Cli) -> Result<u64> {
    cli.global.seed.ok_or_else(|| anyhow!("--seed is required for random generation"))
}

fn gen(cli: &Cli, g: &Gen, input: Option<&Path>) -> Result<Outcome> {
    let vbudget = generators::DEFAULT_VERTEX_BUDGET;
    match g {
        Gen::Hk { k, emit } => {
            let w = gen_hk(*k)?;
            let extra = json!({ "claimed_stretch": w.claimed_stretch, "provenance": w.provenance });
            emitted("gen hk", &w.graph, *emit, w.witness.as_ref(), extra)
        }
        Gen::HkBad { k, emit } => emitted("gen hk-bad", &gen_hk_bad_order(*k)?, *emit, None, json!({})),
        Gen::A3 { b, h, emit } => {
            let w = gen_abh(*b, *h, generators::DEFAULT_EDGE_BUDGET)?;
            let extra = json!({ "claimed_stretch": w.claimed_stretch, "provenance": w.provenance });
            emitted("gen a3", &w.graph, *emit, w.witness.as_ref(), extra)
        }
        Gen::Grid { k, emit } => emitted("gen grid", &gen_grid(*k)?, *emit, None, json!({})),
        Gen::FlattenGrid { k, emit } => emitted("gen flatten-grid", &gen_flattened_grid(*k, vbudget)?, *emit, None, json!({})),
        Gen::Random { n, model, d, m, p, emit } => {
            let s = seed(cli)?;
            let extra = json!({ "seed": s });
            match model {
                Model::Bounded => emitted("gen random", &random_bounded_degree(*n, *d, s)?, *emit, None, extra),
                Model::Sparse => {
                    let m = m.ok_or_else(|| anyhow!("the sparse model needs --m"))?;
                    emitted("gen random", &random_sparse(*n, *d, m, s)?, *emit, None, extra)
                }
                Model::Gnp => {
                    let p = p.ok_or_else(|| anyhow!("the gnp model needs --p"))?;
                    emitted("gen random", &random_gnp(*n, p, s)?, *emit, None, extra)
                }
                Model::Cograph => {
                    // Emitted in an order where the twin merges have stretch 0.
                    let (graph, seq) = random_cograph(*n, s)?;
                    let order = order_from_component_sequence(&graph, &seq, 1)?;
                    emitted("gen random", &graph.relabel(&order)?, *emit, Some(&seq.relabeled(&order)?), extra)
                }
            }
        }
        Gen::Subdivide { edge, pipeline, emit } => {
            let base = input_graph(input)?;
            if let Some(e) = edge {
                let sub = subdivide_simple(&base, (e[0], e[1]))?;
                let extra = json!({ "w": sub.w, "overlap_preserving": sub.overlap_preserving });
                return emitted("gen subdivide", &sub.graph, *emit, None, extra);
            }
            let out =
                if *pipeline { subdivision_pipeline(&base, vbudget)? } else { iterated_subdivision(&base, base.edges(), vbudget)? };
            emitted("gen subdivide", &out, *emit, None, json!({}))
        }
        Gen::Flatten { edge, emit } => {
            let base = input_graph(input)?;
            let (out, pos) = flatten_edge(&base, (edge[0], edge[1]))?;
            emitted("gen flatten", &out, *emit, None, json!({ "positions": pos }))
        }
    }
}

fn stw(cli: &Cli, s: &Stw, input: Option<&Path>) -> Result<Outcome> {
    match s {
        Stw::Exact { certificate, reordered } => {
            let g = input_graph(input)?;
            let r = exact_stw(&g, cli.global.limit_n.unwrap_or(DEFAULT_ALL_ORDERS_LIMIT))?;
            write_file(certificate, &io::write_sequence(&r.witness))?;
            let order_line = format!(
                "order {}\n",
                r.order.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
            );
            write_file(reordered, &(io::write_graph(&g) + &order_line))?;
            Ok(Outcome::ok(json!({ "command": "stw exact", "n": g.n(), "value": r.value, "order": r.order, "witness": r.witness.merges })))
        }
        Stw::FixedOrder { certificate, cap } => {
            let g = input_graph(input)?;
            let limit = cli.global.limit_n.unwrap_or(DEFAULT_FIXED_ORDER_LIMIT);
            match exact_stw_fixed_order(&g, *cap, limit) {
                Ok(r) => {
                    write_file(certificate, &io::write_sequence(&r.witness))?;
                    Ok(Outcome::ok(json!({ "command": "stw fixed-order", "n": g.n(), "value": r.value, "witness": r.witness.merges })))
                }
                Err(StretchError::CapExceeded { cap }) => Ok(Outcome::check(
                    false,
                    json!({ "command": "stw fixed-order", "n": g.n(), "refused": true, "cap": cap }),
                )),
                Err(e) => Err(e.into()),
            }
        }
        Stw::Approx { k, certificate, chain, witness } => {
            let m = matrix_of(input_instance(input)?)?;
            match approx_stw(&m, *k)? {
                ApproxOutcome::Success { k, q, sequence, divisions, verified_stretch, bound } => {
                    write_file(certificate, &io::write_sequence(&sequence))?;
                    write_file(chain, &io::write_divisions(&divisions))?;
                    Ok(Outcome::ok(json!({
                        "command": "stw approx", "n": m.n(), "outcome": "success", "k": k, "q": q,
                        "verified_stretch": verified_stretch, "bound": json_u128(bound),
                        "divisions": divisions.chain.len(), "sequence": sequence.merges,
                    })))
                }
                ApproxOutcome::Refusal { k, q, witness: w, wide_k, witness_checked } => {
                    write_file(witness, &io::write_divisions(&stw_core::matrix::DivisionSequence { chain: vec![w.clone()] }))?;
                    Ok(Outcome::check(
                        false,
                        json!({
                            "command": "stw approx", "n": m.n(), "outcome": "refusal", "k": k, "q": q,
                            "witness": w.bounds(), "wide_k": wide_k, "witness_checked": witness_checked,
                        }),
                    ))
                }
            }
        }
        Stw::Verify { sequence, max } => {
            let inst = input_instance(input)?;
            let seq = match load(sequence)? {
                Instance::Sequence(s) => s,
                other => bail!("expected a sequence file, found a {} file", other.kind()),
            };
            let report = match inst {
                Instance::Matrix(m) => verify_matrix_sequence(&m, &seq)?,
                other => verify_sequence(&graph_of(other)?, &seq)?,
            };
            let pass = max.is_none_or(|t| report.max_stretch <= t);
            Ok(Outcome::check(
                pass,
                json!({
                    "command": "stw verify", "n": seq.n, "max_stretch": report.max_stretch,
                    "worst_step": report.worst_step, "worst_part": report.worst_part,
                    "per_step_stretch": report.per_step_stretch, "within_max": pass,
                }),
            ))
        }
    }
}

fn overlap(cli: &Cli, o: &Overlap, input: Option<&Path>) -> Result<Outcome> {
    let g = input_graph(input)?;
    match o {
        Overlap::Build => {
            let ov = overlap_graph(&g);
            Ok(Outcome::ok(json!({
                "command": "overlap build", "m": ov.m, "crossings": ov.crossing_count(),
                "pairs": ov.edges, "isolated": ov.isolated(),
            })))
        }
        Overlap::Rainbow { v } => {
            let vs: Vec<usize> = match v {
                Some(v) if *v >= g.n() => bail!("vertex {v} out of range"),
                Some(v) => vec![*v],
                None => (0..g.n()).collect(),
            };
            let e = g.edges();
            let mut all_independent = true;
            let list: Vec<Value> = vs
                .iter()
                .map(|&v| {
                    let r = max_rainbow_over(&g, v);
                    let independent =
                        r.edges.iter().all(|&a| r.edges.iter().all(|&b| a == b || !crosses(e[a], e[b])));
                    all_independent &= independent;
                    json!({ "vertex": v, "edges": r.edges, "size": r.edges.len(), "length": r.length, "independent": independent })
                })
                .collect();
            Ok(Outcome::check(all_independent, json!({ "command": "overlap rainbow", "rainbows": list })))
        }
        Overlap::CleanBiclique { s, certificate } => {
            let r = clean_biclique_at_least(&g, *s, budget(cli));
            let base = json!({ "command": "overlap clean-biclique", "s": s, "exact": r.exact, "within_edge_budget": r.within_edge_budget, "nodes": r.nodes });
            let (found, extra) = match &r.outcome {
                BicliqueOutcome::Found(b) => {
                    write_file(certificate, &io::write_biclique(b))?;
                    (true, json!({ "outcome": "found", "x": b.x, "y": b.y }))
                }
                BicliqueOutcome::Absent => (false, json!({ "outcome": "absent" })),
                BicliqueOutcome::Unresolved { .. } => (false, json!({ "outcome": "unresolved" })),
            };
            Ok(Outcome::check(found, merge(base, extra)))
        }
        Overlap::KttCheck { s } => {
            let (ok, extra) = match ktt_upper_check(&g, *s, budget(cli)) {
                KttCheck::Certified { s, no_ktt } => (true, json!({ "outcome": "certified", "s": s, "no_ktt": no_ktt })),
                KttCheck::Refuted(b) => (false, json!({ "outcome": "refuted", "x": b.x, "y": b.y })),
                KttCheck::Unresolved { nodes } => (false, json!({ "outcome": "unresolved", "nodes": nodes })),
            };
            Ok(Outcome::check(ok, merge(json!({ "command": "overlap ktt-check" }), extra)))
        }
        Overlap::Verify { biclique, s } => {
            let b = match load(biclique)? {
                Instance::Biclique(b) => b,
                other => bail!("expected a biclique file, found a {} file", other.kind()),
            };
            let in_range = b.x.iter().chain(&b.y).all(|&i| i < g.m());
            let valid = in_range && b.is_valid(&g);
            let big_enough = s.is_none_or(|s| b.x.len() >= s && b.y.len() >= s);
            Ok(Outcome::check(
                valid && big_enough,
                json!({ "command": "overlap verify", "valid": valid, "x": b.x.len(), "y": b.y.len(), "large_enough": big_enough }),
            ))
        }
    }
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(x), Value::Object(y)) = (&mut a, b) {
        x.extend(y);
    }
    a
}

fn load_divisions(path: &Path) -> Result<stw_core::matrix::DivisionSequence> {
    match load(path)? {
        Instance::Divisions(d) => Ok(d),
        other => bail!("expected a divisions file, found a {} file", other.kind()),
    }
}

fn division(d: &Division, input: Option<&Path>) -> Result<Outcome> {
    let m = matrix_of(input_instance(input)?)?;
    match d {
        Division::Wide { k, divisions, bounds } => {
            let list: Vec<SymDivision> = match (divisions, bounds) {
                (Some(p), _) => load_divisions(p)?.chain,
                (None, Some(b)) => vec![SymDivision::new(b.clone())?],
                (None, None) => bail!("give --divisions or --bounds"),
            };
            let mut all = true;
            let mut rows = Vec::new();
            for div in &list {
                if div.n() != m.n() {
                    bail!("division covers {} rows, matrix has {}", div.n(), m.n());
                }
                let wide: Vec<bool> = (0..div.len()).map(|i| is_part_wide(&m, div, i, *k)).collect();
                all &= wide.iter().all(|&w| w);
                rows.push(json!({ "bounds": div.bounds(), "wide": wide }));
            }
            Ok(Outcome::check(all, json!({ "command": "division wide", "k": k, "all_wide": all, "divisions": rows })))
        }
        Division::DiagonalSeq { q, k, certificate, witness } => {
            let q = q.or(k.map(|k| 2 * (9 * k + 1))).ok_or_else(|| anyhow!("give --q or --k"))?;
            match greedy_diagonal_sequence(&m, q) {
                GreedyOutcome::Chain(chain) => {
                    write_file(certificate, &io::write_divisions(&chain))?;
                    Ok(Outcome::ok(json!({ "command": "division diagonal-seq", "q": q, "outcome": "chain", "length": chain.chain.len() })))
                }
                GreedyOutcome::Stuck { reached, witness: w } => {
                    write_file(witness, &io::write_divisions(&stw_core::matrix::DivisionSequence { chain: vec![w.clone()] }))?;
                    Ok(Outcome::check(
                        false,
                        json!({ "command": "division diagonal-seq", "q": q, "outcome": "stuck", "reached": reached.bounds(), "witness": w.bounds() }),
                    ))
                }
            }
        }
        Division::ToSequence { q, divisions, certificate } => {
            let chain = load_divisions(divisions)?;
            let seq = sequence_from_divisions(&m, &chain, *q)?;
            let report = verify_matrix_sequence(&m, &seq)?;
            write_file(certificate, &io::write_sequence(&seq))?;
            Ok(Outcome::ok(json!({
                "command": "division to-sequence", "q": q, "verified_stretch": report.max_stretch, "sequence": seq.merges,
            })))
        }
        Division::Verify { q, divisions } => {
            let chain = load_divisions(divisions)?;
            let complete = chain.validate(m.n()).is_ok();
            let diagonal: Vec<bool> =
                chain.chain.iter().map(|div| div.n() == m.n() && stw_core::matrix::is_diagonal(&m, div, *q)).collect();
            let ok = complete && diagonal.iter().all(|&x| x);
            Ok(Outcome::check(
                ok,
                json!({ "command": "division verify", "q": q, "complete_chain": complete, "diagonal": diagonal, "valid": ok }),
            ))
        }
    }
}

fn choose_t(cli: &Cli, g: &OrderedGraph, t: Option<usize>) -> (usize, Value) {
    match t {
        Some(t) => (t, json!("given")),
        None => {
            let TChoice { t, s } = certified_t(g, budget(cli));
            (t, s.map_or(json!("edge count"), |s| json!(format!("no clean K_{{{s},{s}}}"))))
        }
    }
}

fn parse_factor(f: &str) -> Result<(usize, usize)> {
    let (a, b) = f.split_once('/').ok_or_else(|| anyhow!("factor must look like 1/12"))?;
    let (a, b): (usize, usize) = (a.trim().parse()?, b.trim().parse()?);
    if b == 0 || a > b {
        bail!("factor must lie in [0, 1]");
    }
    Ok((a, b))
}

fn separator(cli: &Cli, s: &Separator, input: Option<&Path>) -> Result<Outcome> {
    let g = input_graph(input)?;
    match s {
        Separator::Balanced { t, certificate } => {
            let (t, source) = choose_t(cli, &g, *t);
            let r = balanced_separator(&g, t)?;
            let check = verify_separation(&g, &r.separation, 1, 12);
            write_file(certificate, &io::write_separation(&r.separation))?;
            Ok(Outcome::check(
                check.ok,
                json!({
                    "command": "separator balanced", "n": g.n(), "t": t, "t_source": source,
                    "case": format!("{:?}", r.case).to_lowercase(), "separator_size": check.separator_size,
                    "min_side": check.min_side, "max_side": check.max_side, "balance": check.balance,
                    "valid": check.ok, "separator": r.separation.separator, "stats": r.stats,
                }),
            ))
        }
        Separator::LeftRight { v, t, certificate } => {
            let (t, source) = choose_t(cli, &g, *t);
            let r = left_right_separator(&g, t, *v)?;
            let cert = io::LeftRightCertificate { n: g.n(), x: r.x, separator: r.separator.clone() };
            write_file(certificate, &io::write_leftright(&cert))?;
            let valid = separates_left_right(&g, r.x, &r.separator);
            Ok(Outcome::check(
                valid,
                json!({
                    "command": "separator left-right", "n": g.n(), "t": t, "t_source": source, "v": v, "x": r.x,
                    "size": r.separator.len(), "bound": r.bound, "within_bound": r.within_bound,
                    "rainbow_length": r.rainbow_length, "x_in_rainbow": r.x_in_rainbow, "valid": valid,
                    "separator": r.separator, "stats": r.stats,
                }),
            ))
        }
        Separator::Treedecomp { t, certificate } => {
            let (t, source) = choose_t(cli, &g, *t);
            let td = tree_decomposition(&g, t)?;
            write_file(certificate, &io::write_treedecomp(g.n(), &td))?;
            Ok(Outcome::ok(json!({
                "command": "separator treedecomp", "n": g.n(), "t": t, "t_source": source,
                "width": td.width(), "bags": td.bags.len(),
            })))
        }
        Separator::Verify { separation, leftright, treedecomp, factor } => {
            if let Some(p) = separation {
                let sep = match load(p)? {
                    Instance::Separation(s) => s,
                    other => bail!("expected a separation file, found a {} file", other.kind()),
                };
                let (num, den) = parse_factor(factor)?;
                let c = verify_separation(&g, &sep, num, den);
                return Ok(Outcome::check(c.ok, merge(json!({ "command": "separator verify", "kind": "separation" }), serde_json::to_value(&c)?)));
            }
            if let Some(p) = leftright {
                let c = match load(p)? {
                    Instance::LeftRight(c) => c,
                    other => bail!("expected a leftright file, found a {} file", other.kind()),
                };
                let valid = c.n == g.n() && separates_left_right(&g, c.x, &c.separator);
                return Ok(Outcome::check(
                    valid,
                    json!({ "command": "separator verify", "kind": "leftright", "x": c.x, "size": c.separator.len(), "valid": valid }),
                ));
            }
            if let Some(p) = treedecomp {
                let td = match load(p)? {
                    Instance::TreeDecomposition(td) => td,
                    other => bail!("expected a treedecomp file, found a {} file", other.kind()),
                };
                let res = td.validate(&g);
                let mut report = json!({ "command": "separator verify", "kind": "treedecomp", "valid": res.is_ok(), "width": td.width() });
                if let Err(e) = &res {
                    report = merge(report, json!({ "reason": e.to_string() }));
                }
                return Ok(Outcome::check(res.is_ok(), report));
            }
            bail!("give --separation, --leftright or --treedecomp")
        }
    }
}

fn mis_report(command: &str, r: &MisResult) -> Value {
    json!({
        "command": command, "size": r.size, "set": r.set, "node_count": r.node_count,
        "leaf_widths": r.leaf_widths, "max_take_depth": r.max_take_depth,
    })
}

fn mis_cmd(cli: &Cli, m: &Mis, input: Option<&Path>) -> Result<Outcome> {
    let g = input_graph(input)?;
    let (r, certificate, name) = match m {
        Mis::Exact { certificate } => {
            let limit = cli.global.limit_n.unwrap_or(mis::EXACT_LIMIT);
            if g.n() > limit {
                bail!("graph has {} vertices, above the limit of {limit}", g.n());
            }
            (mis_exact(&g)?, certificate, "mis exact")
        }
        Mis::Branch { threshold, certificate } => {
            let th = threshold.unwrap_or_else(|| default_threshold(g.n()));
            (mis_branch(&g, th)?, certificate, "mis branch")
        }
        Mis::Dp { td, certificate } => {
            let td = match td {
                Some(p) => match load(p)? {
                    Instance::TreeDecomposition(td) => td,
                    other => bail!("expected a treedecomp file, found a {} file", other.kind()),
                },
                None => min_degree_decomposition(&g),
            };
            (mis_tw_dp(&g, &td)?, certificate, "mis dp")
        }
        Mis::Verify { set, size } => {
            let s = match load(set)? {
                Instance::Independent(s) => s,
                other => bail!("expected an independent file, found a {} file", other.kind()),
            };
            let independent = s.n == g.n() && is_independent(&g, &s.set);
            let big = size.is_none_or(|k| s.set.len() >= k);
            return Ok(Outcome::check(
                independent && big,
                json!({ "command": "mis verify", "size": s.set.len(), "independent": independent, "large_enough": big }),
            ));
        }
    };
    write_file(certificate, &io::write_independent(g.n(), &r.set))?;
    Ok(Outcome::ok(mis_report(name, &r)))
}
