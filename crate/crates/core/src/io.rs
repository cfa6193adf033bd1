//! Line-based text formats for instances and certificates.
//!
//! Every file starts with a header naming its kind. Blank lines and text after `#`
//! are ignored. The matrix header may be omitted.
//!
//! ```text
//! graph <n> <m>          then m lines `u v` or `u v label`, optional `order p0 p1 ...`
//! matrix <n>             then n rows of 0/1 characters
//! sequence <n>           then n-1 lines `a b` merging two block representatives
//! divisions <n>          then one line of block boundaries per division, `0 ... n`;
//!                        a chain lists them finest first
//! separation <n>         then lines `a ...`, `b ...`, `c ...` (c is the separator)
//! leftright <n> <x>      then a line `u ...`
//! treedecomp <n> <k>     then k lines `bag ...` and k-1 lines `edge i j`
//! independent <n> <k>    then the k vertices, on one or more lines
//! biclique               then lines `x ...` and `y ...` of edge ids
//! ```

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{GraphError, OrderedGraph, PartitionSequence};
use crate::matrix::{DivisionSequence, MatrixError, SymBitMatrix, SymDivision};
use crate::overlap::CleanBiclique;
use crate::separator::{Separation, TreeDecomposition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftRightCertificate {
    pub n: usize,
    pub x: usize,
    pub separator: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependentSet {
    pub n: usize,
    pub set: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Instance {
    Graph(OrderedGraph),
    Matrix(SymBitMatrix),
    Sequence(PartitionSequence),
    Divisions(DivisionSequence),
    Separation(Separation),
    LeftRight(LeftRightCertificate),
    TreeDecomposition(TreeDecomposition),
    Independent(IndependentSet),
    Biclique(CleanBiclique),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Graph(_) => "graph",
            Instance::Matrix(_) => "matrix",
            Instance::Sequence(_) => "sequence",
            Instance::Divisions(_) => "divisions",
            Instance::Separation(_) => "separation",
            Instance::LeftRight(_) => "leftright",
            Instance::TreeDecomposition(_) => "treedecomp",
            Instance::Independent(_) => "independent",
            Instance::Biclique(_) => "biclique",
        }
    }
}

/// Non-empty lines with comments removed, paired with 1-based line numbers.
fn content_lines(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, toks)| !toks.is_empty())
        .collect()
}

fn num(line: usize, tok: &str) -> Result<usize, ParseError> {
    tok.parse().or_else(|_| err(line, format!("expected a non-negative integer, found `{tok}`")))
}

fn nums(line: usize, toks: &[&str]) -> Result<Vec<usize>, ParseError> {
    toks.iter().map(|t| num(line, t)).collect()
}

fn header_args(line: usize, toks: &[&str], want: usize) -> Result<Vec<usize>, ParseError> {
    if toks.len() != want + 1 {
        return err(line, format!("`{}` header takes {want} number(s)", toks[0]));
    }
    nums(line, &toks[1..])
}

fn graph_err(line: usize, e: GraphError) -> ParseError {
    ParseError { line, message: e.to_string() }
}

/// Parses any supported file, dispatching on its header.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let lines = content_lines(text);
    let Some((first, toks)) = lines.first() else {
        return err(0, "empty input");
    };
    let body = &lines[1..];
    match toks[0] {
        "graph" => parse_graph_lines(*first, toks, body).map(Instance::Graph),
        "matrix" => {
            let n = header_args(*first, toks, 1)?[0];
            parse_matrix_rows(body, Some((*first, n))).map(Instance::Matrix)
        }
        "sequence" => parse_sequence_lines(*first, toks, body).map(Instance::Sequence),
        "divisions" => parse_divisions_lines(*first, toks, body).map(Instance::Divisions),
        "separation" => parse_separation_lines(*first, toks, body).map(Instance::Separation),
        "leftright" => parse_leftright_lines(*first, toks, body).map(Instance::LeftRight),
        "treedecomp" => parse_treedecomp_lines(*first, toks, body).map(Instance::TreeDecomposition),
        "independent" => parse_independent_lines(*first, toks, body).map(Instance::Independent),
        "biclique" => parse_biclique_lines(body).map(Instance::Biclique),
        t if t.chars().all(|c| c == '0' || c == '1') => parse_matrix_rows(&lines, None).map(Instance::Matrix),
        t => err(*first, format!("unknown header `{t}`")),
    }
}

fn expect<T>(kind: &str, inst: Instance, pick: impl FnOnce(Instance) -> Option<T>) -> Result<T, ParseError> {
    let found = inst.kind();
    pick(inst).ok_or_else(|| ParseError { line: 1, message: format!("expected a {kind} file, found {found}") })
}

pub fn parse_graph(text: &str) -> Result<OrderedGraph, ParseError> {
    expect("graph", parse_instance(text)?, |i| match i {
        Instance::Graph(g) => Some(g),
        _ => None,
    })
}

pub fn parse_matrix(text: &str) -> Result<SymBitMatrix, ParseError> {
    expect("matrix", parse_instance(text)?, |i| match i {
        Instance::Matrix(m) => Some(m),
        _ => None,
    })
}

pub fn parse_sequence(text: &str) -> Result<PartitionSequence, ParseError> {
    expect("sequence", parse_instance(text)?, |i| match i {
        Instance::Sequence(s) => Some(s),
        _ => None,
    })
}

pub fn parse_divisions(text: &str) -> Result<DivisionSequence, ParseError> {
    expect("divisions", parse_instance(text)?, |i| match i {
        Instance::Divisions(d) => Some(d),
        _ => None,
    })
}

fn parse_graph_lines(hl: usize, toks: &[&str], body: &[(usize, Vec<&str>)]) -> Result<OrderedGraph, ParseError> {
    let hv = header_args(hl, toks, 2)?;
    let (n, m) = (hv[0], hv[1]);
    let mut edges = Vec::with_capacity(m);
    let mut order: Option<Vec<usize>> = None;
    let mut labelled: Option<bool> = None;
    let mut seen = HashSet::new();
    for (line, t) in body {
        if t[0] == "order" {
            if order.is_some() {
                return err(*line, "repeated `order` line");
            }
            order = Some(nums(*line, &t[1..])?);
            continue;
        }
        if t.len() != 2 && t.len() != 3 {
            return err(*line, "an edge line is `u v` or `u v label`");
        }
        let has_label = t.len() == 3;
        if labelled.is_some_and(|l| l != has_label) {
            return err(*line, "either every edge has a label or none does");
        }
        labelled = Some(has_label);
        let (u, v) = (num(*line, t[0])?, num(*line, t[1])?);
        let label = if has_label {
            u32::try_from(num(*line, t[2])?).or_else(|_| err(*line, "label does not fit in 32 bits"))?
        } else {
            0
        };
        for x in [u, v] {
            if x >= n {
                return Err(graph_err(*line, GraphError::VertexOutOfRange { vertex: x, n }));
            }
        }
        if u == v {
            return Err(graph_err(*line, GraphError::SelfLoop(u)));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return err(*line, format!("duplicate edge {u} {v}"));
        }
        edges.push((u, v, label));
    }
    if edges.len() != m {
        return err(hl, format!("header announces {m} edges, found {}", edges.len()));
    }
    let g = if labelled == Some(true) {
        OrderedGraph::with_labels(n, &edges)
    } else {
        OrderedGraph::new(n, &edges.iter().map(|e| (e.0, e.1)).collect::<Vec<_>>())
    }
    .map_err(|e| graph_err(hl, e))?;
    match order {
        None => Ok(g),
        Some(o) => {
            let line = body.iter().find(|(_, t)| t[0] == "order").map_or(hl, |x| x.0);
            g.relabel(&o).map_err(|e| graph_err(line, e))
        }
    }
}

fn parse_matrix_rows(lines: &[(usize, Vec<&str>)], header: Option<(usize, usize)>) -> Result<SymBitMatrix, ParseError> {
    let mut rows = Vec::new();
    for (line, t) in lines {
        let joined: String = t.concat();
        let row: Vec<bool> = joined
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => err(*line, format!("unexpected character `{c}` in matrix row")),
            })
            .collect::<Result<_, _>>()?;
        rows.push((*line, row));
    }
    if let Some((hl, n)) = header {
        if rows.len() != n {
            return err(hl, format!("header announces {n} rows, found {}", rows.len()));
        }
    }
    let n = rows.len();
    if let Some((line, r)) = rows.iter().find(|(_, r)| r.len() != n) {
        return err(*line, format!("row has {} entries, expected {n}", r.len()));
    }
    let plain: Vec<Vec<bool>> = rows.iter().map(|r| r.1.clone()).collect();
    SymBitMatrix::from_rows(&plain).map_err(|e| {
        let line = match e {
            MatrixError::NotSymmetric(i, _) => rows[i].0,
            _ => rows.first().map_or(0, |r| r.0),
        };
        ParseError { line, message: e.to_string() }
    })
}

fn parse_sequence_lines(hl: usize, toks: &[&str], body: &[(usize, Vec<&str>)]) -> Result<PartitionSequence, ParseError> {
    let n = header_args(hl, toks, 1)?[0];
    let mut merges = Vec::with_capacity(body.len());
    for (line, t) in body {
        if t.len() != 2 {
            return err(*line, "a merge line is `a b`");
        }
        merges.push((num(*line, t[0])?, num(*line, t[1])?));
    }
    PartitionSequence::new(n, merges).map_err(|e| match &e {
        GraphError::InvalidMerge { step, .. } => graph_err(body[*step].0, e),
        _ => graph_err(hl, e),
    })
}

fn parse_divisions_lines(hl: usize, toks: &[&str], body: &[(usize, Vec<&str>)]) -> Result<DivisionSequence, ParseError> {
    let n = header_args(hl, toks, 1)?[0];
    let mut chain = Vec::with_capacity(body.len());
    for (line, t) in body {
        let bounds = nums(*line, t)?;
        if bounds.last() != Some(&n) {
            return err(*line, format!("boundaries must end at {n}"));
        }
        chain.push(SymDivision::new(bounds).map_err(|e| ParseError { line: *line, message: e.to_string() })?);
    }
    if chain.is_empty() {
        return err(hl, "no divisions");
    }
    Ok(DivisionSequence { chain })
}

fn tagged_lists(body: &[(usize, Vec<&str>)], tags: &[&str]) -> Result<Vec<Vec<usize>>, ParseError> {
    let mut out = vec![None; tags.len()];
    for (line, t) in body {
        let Some(i) = tags.iter().position(|&x| x == t[0]) else {
            return err(*line, format!("expected one of {tags:?}, found `{}`", t[0]));
        };
        if out[i].is_some() {
            return err(*line, format!("repeated `{}` line", tags[i]));
        }
        out[i] = Some(nums(*line, &t[1..])?);
    }
    Ok(out.into_iter().map(Option::unwrap_or_default).collect())
}

fn parse_separation_lines(hl: usize, toks: &[&str], body: &[(usize, Vec<&str>)]) -> Result<Separation, ParseError> {
    let n = header_args(hl, toks, 1)?[0];
    let mut lists = tagged_lists(body, &["a", "b", "c"])?;
    for l in lists.iter_mut() {
        l.sort_unstable();
    }
    let [a_only, b_only, separator]: [Vec<usize>; 3] = lists.try_into().expect("three tags");
    Ok(Separation { n, a_only, b_only, separator })
}

fn parse_leftright_lines(hl: usize, toks: &[&str], body: &[(usize, Vec<&str>)]) -> Result<LeftRightCertificate, ParseError> {
    let hv = header_args(hl, toks, 2)?;
    let mut separator = tagged_lists(body, &["u"])?.remove(0);
    separator.sort_unstable();
    Ok(LeftRightCertificate { n: hv[0], x: hv[1], separator })
}

fn parse_treedecomp_lines(hl: usize, toks: &[&str], body: &[(usize, Vec<&str>)]) -> Result<TreeDecomposition, ParseError> {
    let hv = header_args(hl, toks, 2)?;
    let k = hv[1];
    let mut bags = Vec::with_capacity(k);
    let mut edges = Vec::new();
    for (line, t) in body {
        match t[0] {
            "bag" => {
                let mut b = nums(*line, &t[1..])?;
                b.sort_unstable();
                bags.push(b);
            }
            "edge" if t.len() == 3 => edges.push((num(*line, t[1])?, num(*line, t[2])?)),
            _ => return err(*line, "expected `bag ...` or `edge i j`"),
        }
    }
    if bags.len() != k {
        return err(hl, format!("header announces {k} bags, found {}", bags.len()));
    }
    Ok(TreeDecomposition { bags, edges })
}

fn parse_independent_lines(hl: usize, toks: &[&str], body: &[(usize, Vec<&str>)]) -> Result<IndependentSet, ParseError> {
    let hv = header_args(hl, toks, 2)?;
    let mut set = Vec::new();
    for (line, t) in body {
        set.extend(nums(*line, t)?);
    }
    if set.len() != hv[1] {
        return err(hl, format!("header announces {} vertices, found {}", hv[1], set.len()));
    }
    set.sort_unstable();
    Ok(IndependentSet { n: hv[0], set })
}

fn parse_biclique_lines(body: &[(usize, Vec<&str>)]) -> Result<CleanBiclique, ParseError> {
    let mut lists = tagged_lists(body, &["x", "y"])?;
    let y = lists.pop().unwrap_or_default();
    let x = lists.pop().unwrap_or_default();
    Ok(CleanBiclique { x, y })
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn tagged(tag: &str, v: &[usize]) -> String {
    if v.is_empty() {
        format!("{tag}\n")
    } else {
        format!("{tag} {}\n", join(v))
    }
}

pub fn write_graph(g: &OrderedGraph) -> String {
    let mut s = format!("graph {} {}\n", g.n(), g.m());
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        match g.labels() {
            Some(l) => writeln!(s, "{u} {v} {}", l[i]),
            None => writeln!(s, "{u} {v}"),
        }
        .expect("writing to a string");
    }
    s
}

pub fn write_matrix(m: &SymBitMatrix) -> String {
    let mut s = format!("matrix {}\n", m.n());
    for i in 0..m.n() {
        s.extend((0..m.n()).map(|j| if m.get(i, j) { '1' } else { '0' }));
        s.push('\n');
    }
    s
}

pub fn write_sequence(seq: &PartitionSequence) -> String {
    let mut s = format!("sequence {}\n", seq.n);
    for &(a, b) in &seq.merges {
        writeln!(s, "{a} {b}").expect("writing to a string");
    }
    s
}

pub fn write_divisions(d: &DivisionSequence) -> String {
    let n = d.chain.first().map_or(0, SymDivision::n);
    let mut s = format!("divisions {n}\n");
    for div in &d.chain {
        s.push_str(&join(div.bounds()));
        s.push('\n');
    }
    s
}

pub fn write_separation(sep: &Separation) -> String {
    format!("separation {}\n{}{}{}", sep.n, tagged("a", &sep.a_only), tagged("b", &sep.b_only), tagged("c", &sep.separator))
}

pub fn write_leftright(c: &LeftRightCertificate) -> String {
    format!("leftright {} {}\n{}", c.n, c.x, tagged("u", &c.separator))
}

pub fn write_treedecomp(n: usize, td: &TreeDecomposition) -> String {
    let mut s = format!("treedecomp {n} {}\n", td.bags.len());
    for b in &td.bags {
        s.push_str(&tagged("bag", b));
    }
    for &(a, b) in &td.edges {
        writeln!(s, "edge {a} {b}").expect("writing to a string");
    }
    s
}

pub fn write_independent(n: usize, set: &[usize]) -> String {
    format!("independent {n} {}\n{}\n", set.len(), join(set))
}

pub fn write_biclique(b: &CleanBiclique) -> String {
    format!("biclique\n{}{}", tagged("x", &b.x), tagged("y", &b.y))
}
