//! Instance generators: the families with known sequences, grids and their
//! flattenings, subdivisions, and seeded random graphs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{GraphError, OrderedGraph, PartitionSequence};
use crate::overlap::{crosses, overlap_graph};

/// Default cap on generated vertices.
pub const DEFAULT_VERTEX_BUDGET: usize = 1 << 20;
/// Default cap on generated edges.
pub const DEFAULT_EDGE_BUDGET: usize = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error("instance would have {got} {what}, above the budget of {budget}")]
    OverBudget { what: &'static str, got: u128, budget: usize },
    #[error("{0}-{1} is not an edge")]
    NotAnEdge(usize, usize),
    #[error("edge order is not a permutation of the edge set")]
    NotEdgePermutation,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessedInstance {
    #[serde(skip)]
    pub graph: OrderedGraph,
    pub witness: Option<PartitionSequence>,
    pub claimed_stretch: Option<usize>,
    pub provenance: String,
}

/// Index of `a_i`, `b_i`, `c_i` (1-based `i`) in the natural order of `H_k`.
fn hk_abc(i: usize) -> (usize, usize, usize) {
    (3 * i - 2, 3 * i - 1, 3 * i)
}

/// `H_k`: a source `s` and sink `t` joined by `k` paths `s a_i b_i c_i t`, ordered
/// `s, a_1, b_1, c_1, ..., a_k, b_k, c_k, t`, with a sequence of stretch at most 6.
pub fn gen_hk(k: usize) -> Result<WitnessedInstance, GenError> {
    if k == 0 {
        return Err(GenError::BadParameter("k must be at least 1".into()));
    }
    let n = 3 * k + 2;
    let (s, t) = (0, n - 1);
    let mut edges = Vec::with_capacity(4 * k);
    for i in 1..=k {
        let (a, b, c) = hk_abc(i);
        edges.extend([(s, a), (a, b), (b, c), (c, t)]);
    }
    let graph = OrderedGraph::new(n, &edges)?;
    let (a1, b1, c1) = hk_abc(1);
    let mut merges = Vec::with_capacity(n - 1);
    for i in 2..=k {
        let (a, b, c) = hk_abc(i);
        merges.extend([(a1, a), (b1, b), (c1, c)]);
    }
    merges.extend([(b1, c1), (a1, b1), (s, a1), (s, t)]);
    Ok(WitnessedInstance {
        graph,
        witness: Some(PartitionSequence::new(n, merges)?),
        claimed_stretch: Some(6),
        provenance: format!("hk k={k}"),
    })
}

/// `H_k` in the order `s, a_1..a_k, b_k..b_1, c_1..c_k, t`.
pub fn gen_hk_bad_order(k: usize) -> Result<OrderedGraph, GenError> {
    if k == 0 {
        return Err(GenError::BadParameter("k must be at least 1".into()));
    }
    let n = 3 * k + 2;
    let (s, t) = (0, n - 1);
    let a = |i: usize| i;
    let b = |i: usize| 2 * k - i + 1;
    let c = |i: usize| 2 * k + i;
    let mut edges = Vec::with_capacity(4 * k);
    for i in 1..=k {
        edges.extend([(s, a(i)), (a(i), b(i)), (b(i), c(i)), (c(i), t)]);
    }
    Ok(OrderedGraph::new(n, &edges)?)
}

/// `A(b, h)`: the leaves `0..b^h` of a complete `b`-ary tree. Two leaves are adjacent
/// when at some level below the root their ancestors sit exactly `b` apart.
/// For `b = 3` a level-by-level merge sequence of stretch at most 9 is attached.
pub fn gen_abh(b: usize, h: usize, edge_budget: usize) -> Result<WitnessedInstance, GenError> {
    if b < 2 || h == 0 {
        return Err(GenError::BadParameter("need b >= 2 and h >= 1".into()));
    }
    let n128 = (b as u128).checked_pow(h as u32).unwrap_or(u128::MAX);
    if n128 > DEFAULT_VERTEX_BUDGET as u128 {
        return Err(GenError::OverBudget { what: "vertices", got: n128, budget: DEFAULT_VERTEX_BUDGET });
    }
    let n = n128 as usize;
    let mut m: u128 = 0;
    for l in 0..h {
        let nodes = (n / b.pow(l as u32)) as u128;
        let size = b.pow(l as u32) as u128;
        m += nodes.saturating_sub(b as u128) * size * size;
    }
    if m > edge_budget as u128 {
        return Err(GenError::OverBudget { what: "edges", got: m, budget: edge_budget });
    }
    let mut edges = Vec::with_capacity(m as usize);
    for l in 0..h {
        let size = b.pow(l as u32);
        let nodes = n / size;
        for i in 0..nodes.saturating_sub(b) {
            let j = i + b;
            for x in 0..size {
                for y in 0..size {
                    edges.push((i * size + x, j * size + y));
                }
            }
        }
    }
    let graph = OrderedGraph::new(n, &edges)?;
    let (witness, claimed) = if b == 3 {
        let mut merges = Vec::with_capacity(n - 1);
        for l in 0..h {
            let size = 3usize.pow(l as u32);
            for start in (0..n).step_by(3 * size) {
                merges.push((start, start + size));
                merges.push((start, start + 2 * size));
            }
        }
        (Some(PartitionSequence::new(n, merges)?), Some(9))
    } else {
        (None, None)
    };
    Ok(WitnessedInstance { graph, witness, claimed_stretch: claimed, provenance: format!("abh b={b} h={h}") })
}

pub const HORIZONTAL: u32 = 0;
pub const VERTICAL: u32 = 1;

/// The `k x k` grid in row-major order; edges are labelled horizontal or vertical.
pub fn gen_grid(k: usize) -> Result<OrderedGraph, GenError> {
    if k == 0 {
        return Err(GenError::BadParameter("k must be at least 1".into()));
    }
    let id = |r: usize, c: usize| r * k + c;
    let mut edges = Vec::new();
    for r in 0..k {
        for c in 0..k {
            if c + 1 < k {
                edges.push((id(r, c), id(r, c + 1), HORIZONTAL));
            }
            if r + 1 < k {
                edges.push((id(r, c), id(r + 1, c), VERTICAL));
            }
        }
    }
    Ok(OrderedGraph::with_labels(k * k, &edges)?)
}

/// Labels of `g`, or each edge's own index when `g` carries none.
fn stem_labels(g: &OrderedGraph) -> Vec<u32> {
    match g.labels() {
        Some(l) => l.to_vec(),
        None => (0..g.m() as u32).collect(),
    }
}

/// Replaces the edge `uv` (`u < v`, with `h` vertices strictly between them) by a
/// path `u w_1 ... w_{h+1} v`, where `w_j` is placed just before the `j`-th vertex
/// after `u` and `w_{h+1}` just before `v`. New edges inherit the label of `uv`.
/// Returns the new graph and the new position of every old vertex.
pub fn flatten_edge(g: &OrderedGraph, e: (usize, usize)) -> Result<(OrderedGraph, Vec<usize>), GenError> {
    let (u, v) = (e.0.min(e.1), e.0.max(e.1));
    let id = g.edge_id(u, v).ok_or(GenError::NotAnEdge(u, v))?;
    let h = v - u - 1;
    let pos: Vec<usize> = (0..g.n())
        .map(|x| {
            if x <= u {
                x
            } else if x < v {
                u + 2 * (x - u)
            } else {
                x + h + 1
            }
        })
        .collect();
    let labels = stem_labels(g);
    let stem = labels[id];
    let mut edges: Vec<(usize, usize, u32)> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != id)
        .map(|(i, &(a, b))| (pos[a], pos[b], labels[i]))
        .collect();
    let w = |j: usize| u + 2 * j - 1;
    edges.push((u, w(1), stem));
    for j in 1..=h {
        edges.push((w(j), w(j + 1), stem));
    }
    edges.push((w(h + 1), pos[v], stem));
    Ok((OrderedGraph::with_labels(g.n() + h + 1, &edges)?, pos))
}

/// Flattens every edge of `g` once, in the given order (edges named by their
/// original endpoints). Edges created along the way are not flattened again.
/// When `g` has no labels, each new edge is labelled with the index of its stem.
pub fn iterated_subdivision(
    g: &OrderedGraph,
    order: &[(usize, usize)],
    vertex_budget: usize,
) -> Result<OrderedGraph, GenError> {
    let mut ids: Vec<usize> = Vec::with_capacity(order.len());
    for &(a, b) in order {
        ids.push(g.edge_id(a, b).ok_or(GenError::NotEdgePermutation)?);
    }
    let mut sorted = ids.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != g.m() || ids.len() != g.m() {
        return Err(GenError::NotEdgePermutation);
    }
    let labels = stem_labels(g);
    let mut cur = OrderedGraph::with_labels(
        g.n(),
        &g.edges().iter().zip(&labels).map(|(&(a, b), &l)| (a, b, l)).collect::<Vec<_>>(),
    )?;
    let mut where_is: Vec<usize> = (0..g.n()).collect();
    for &(a, b) in order {
        let (next, pos) = flatten_edge(&cur, (where_is[a], where_is[b]))?;
        if next.n() > vertex_budget {
            return Err(GenError::OverBudget { what: "vertices", got: next.n() as u128, budget: vertex_budget });
        }
        for p in where_is.iter_mut() {
            *p = pos[*p];
        }
        cur = next;
    }
    Ok(cur)
}

/// The `k x k` grid with its horizontal edges flattened first, then its vertical
/// edges from left to right.
pub fn gen_flattened_grid(k: usize, vertex_budget: usize) -> Result<OrderedGraph, GenError> {
    let grid = gen_grid(k)?;
    let labels = grid.labels().unwrap_or_default().to_vec();
    let mut horizontal = Vec::new();
    let mut vertical = Vec::new();
    for (i, &e) in grid.edges().iter().enumerate() {
        if labels[i] == HORIZONTAL {
            horizontal.push(e);
        } else {
            vertical.push(e);
        }
    }
    horizontal.sort_unstable();
    vertical.sort_unstable();
    horizontal.extend(vertical);
    iterated_subdivision(&grid, &horizontal, vertex_budget)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdivision {
    pub graph: OrderedGraph,
    /// Position of the new vertex.
    pub w: usize,
    /// True when the new overlap graph is the old one plus an isolated vertex.
    pub overlap_preserving: bool,
}

/// Crossing sets of the two halves `(u, w)` and `(w, v)` when the new vertex takes
/// position `gap` (old vertices at `gap` and beyond shift right by one).
fn halves_crossings(g: &OrderedGraph, id: usize, gap: usize) -> (Vec<usize>, Vec<usize>) {
    let shift = |x: usize| if x >= gap { x + 1 } else { x };
    let (u, v) = g.edges()[id];
    let first = (shift(u).min(gap), shift(u).max(gap));
    let second = (shift(v).min(gap), shift(v).max(gap));
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (i, &(x, y)) in g.edges().iter().enumerate() {
        if i == id {
            continue;
        }
        let f = (shift(x), shift(y));
        if crosses(first, f) {
            a.push(i);
        }
        if crosses(second, f) {
            b.push(i);
        }
    }
    (a, b)
}

/// Subdivides `uv` once. The new vertex goes right after `L(uv)` when that leaves the
/// overlap graph unchanged up to a new isolated vertex; otherwise the first position
/// (just before `R(uv)`, then left to right) that does so is used. If no position
/// preserves the overlap graph, the vertex goes right after `L(uv)` and the result
/// is flagged.
pub fn subdivide_simple(g: &OrderedGraph, e: (usize, usize)) -> Result<Subdivision, GenError> {
    let (u, v) = (e.0.min(e.1), e.0.max(e.1));
    let id = g.edge_id(u, v).ok_or(GenError::NotAnEdge(u, v))?;
    let original: Vec<usize> = {
        let ov = overlap_graph(g);
        ov.neighbors(id).to_vec()
    };
    let preserving = |gap: usize| {
        let (a, b) = halves_crossings(g, id, gap);
        (a.is_empty() && b == original) || (b.is_empty() && a == original)
    };
    let mut gaps = vec![u + 1, v];
    gaps.extend((0..=g.n()).filter(|&p| p != u + 1 && p != v));
    let found = gaps.iter().copied().find(|&p| preserving(p));
    let gap = found.unwrap_or(u + 1);
    let shift = |x: usize| if x >= gap { x + 1 } else { x };
    let labels = stem_labels(g);
    let mut edges: Vec<(usize, usize, u32)> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != id)
        .map(|(i, &(a, b))| (shift(a), shift(b), labels[i]))
        .collect();
    edges.push((shift(u), gap, labels[id]));
    edges.push((gap, shift(v), labels[id]));
    Ok(Subdivision {
        graph: OrderedGraph::with_labels(g.n() + 1, &edges)?,
        w: gap,
        overlap_preserving: found.is_some(),
    })
}

/// Flattens every edge of `g` (in sorted order) and then subdivides each stem until it
/// carries at least `n 2^m` new vertices, `n` and `m` taken from `g`.
pub fn subdivision_pipeline(g: &OrderedGraph, vertex_budget: usize) -> Result<OrderedGraph, GenError> {
    let target = (g.n() as u128) << g.m().min(100);
    let total = target * g.m() as u128 + (g.n() as u128);
    if total > vertex_budget as u128 {
        return Err(GenError::OverBudget { what: "vertices", got: total, budget: vertex_budget });
    }
    let plain = OrderedGraph::new(g.n(), g.edges())?;
    let mut cur = iterated_subdivision(&plain, g.edges(), vertex_budget)?;
    for stem in 0..g.m() as u32 {
        loop {
            let labels = cur.labels().expect("pipeline graphs are labelled");
            let mine: Vec<usize> = (0..cur.m()).filter(|&i| labels[i] == stem).collect();
            if (mine.len() as u128 - 1) >= target {
                break;
            }
            let shortest = *mine
                .iter()
                .min_by_key(|&&i| (cur.edges()[i].1 - cur.edges()[i].0, i))
                .expect("a stem keeps at least one edge");
            cur = subdivide_simple(&cur, cur.edges()[shortest])?.graph;
        }
    }
    Ok(cur)
}

/// A random graph of maximum degree `d` in the identity order: all pairs are visited
/// in a seeded random order and kept while both ends have room.
pub fn random_bounded_degree(n: usize, d: usize, seed: u64) -> Result<OrderedGraph, GenError> {
    if d == 0 {
        return Err(GenError::BadParameter("d must be at least 1".into()));
    }
    if n > 20_000 {
        return Err(GenError::OverBudget { what: "vertices", got: n as u128, budget: 20_000 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(&mut rng);
    let mut deg = vec![0; n];
    let mut edges = Vec::new();
    for (u, v) in pairs {
        if deg[u] < d && deg[v] < d {
            deg[u] += 1;
            deg[v] += 1;
            edges.push((u, v));
        }
    }
    Ok(OrderedGraph::new(n, &edges)?)
}

/// A random graph with at most `m` edges and maximum degree `d`: pairs are visited in
/// seeded random order and kept while both ends have room.
pub fn random_sparse(n: usize, d: usize, m: usize, seed: u64) -> Result<OrderedGraph, GenError> {
    let g = random_bounded_degree(n, d, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut edges = g.edges().to_vec();
    edges.shuffle(&mut rng);
    edges.truncate(m);
    Ok(OrderedGraph::new(n, &edges)?)
}

/// Erdos-Renyi graph with edge probability `p`.
pub fn random_gnp(n: usize, p: f64, seed: u64) -> Result<OrderedGraph, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p.clamp(0.0, 1.0)) {
                edges.push((u, v));
            }
        }
    }
    Ok(OrderedGraph::new(n, &edges)?)
}

/// A random cograph on `n` vertices in a random vertex order, with a sequence that
/// only ever merges modules, so its red graphs stay edgeless.
pub fn random_cograph(n: usize, seed: u64) -> Result<(OrderedGraph, PartitionSequence), GenError> {
    if n == 0 {
        return Err(GenError::BadParameter("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(&mut rng);
    let mut edges = Vec::new();
    let mut merges = Vec::new();
    fn build(
        verts: &[usize],
        join: bool,
        rng: &mut ChaCha8Rng,
        edges: &mut Vec<(usize, usize)>,
        merges: &mut Vec<(usize, usize)>,
    ) -> usize {
        if verts.len() == 1 {
            return verts[0];
        }
        let parts = rng.gen_range(2..=verts.len().min(4));
        let mut cuts: Vec<usize> = (1..verts.len()).collect();
        cuts.shuffle(rng);
        let mut cuts: Vec<usize> = cuts.into_iter().take(parts - 1).collect();
        cuts.sort_unstable();
        let mut pieces = Vec::new();
        let mut start = 0;
        for c in cuts.into_iter().chain(std::iter::once(verts.len())) {
            pieces.push(&verts[start..c]);
            start = c;
        }
        if join {
            for i in 0..pieces.len() {
                for j in i + 1..pieces.len() {
                    for &a in pieces[i] {
                        for &b in pieces[j] {
                            edges.push((a, b));
                        }
                    }
                }
            }
        }
        let reps: Vec<usize> = pieces.iter().map(|p| build(p, !join, rng, edges, merges)).collect();
        let mut acc = reps[0];
        for &r in &reps[1..] {
            merges.push((acc, r));
            acc = acc.min(r);
        }
        acc
    }
    let join = rng.gen_bool(0.5);
    build(&labels, join, &mut rng, &mut edges, &mut merges);
    Ok((OrderedGraph::new(n, &edges)?, PartitionSequence::new(n, merges)?))
}
