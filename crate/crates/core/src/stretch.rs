//! Stretch of partitions and partition sequences, and exact stretch-width search.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{red_graph, GraphError, OrderedGraph, PartitionSequence, VertexPartition};

/// Largest graph for which the fixed-order lattice search runs by default.
pub const DEFAULT_FIXED_ORDER_LIMIT: usize = 10;
/// Largest graph for which all orders are searched by default.
pub const DEFAULT_ALL_ORDERS_LIMIT: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StretchError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph has {n} vertices, above the limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("every sequence has stretch above the cap {cap}")]
    CapExceeded { cap: usize },
    #[error("sequence is for {seq} vertices but the graph has {graph}")]
    SizeMismatch { seq: usize, graph: usize },
    #[error("red component of size {size} at step {step} exceeds {limit}")]
    ComponentTooLarge { step: usize, size: usize, limit: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionStretch {
    pub max: usize,
    /// Stretch of each block, indexed like `VertexPartition::blocks`.
    pub per_part: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StretchReport {
    pub per_step_stretch: Vec<usize>,
    pub max_stretch: usize,
    pub worst_step: usize,
    /// Representative of the block reaching the maximum at `worst_step`.
    pub worst_part: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactStw {
    pub value: usize,
    /// `order[i]` is the vertex placed at position `i`.
    pub order: Vec<usize>,
    /// Optimal sequence, in the labels of the graph relabeled by `order`.
    pub witness: PartitionSequence,
}

/// Counts, for each block, the other blocks whose span meets the span of its closed
/// red neighbourhood. `spans[b]` is `(min, max)` of block `b`.
pub(crate) fn stretch_from_spans(spans: &[(usize, usize)], red: &[Vec<usize>]) -> Vec<usize> {
    let p = spans.len();
    let mut mins: Vec<usize> = spans.iter().map(|s| s.0).collect();
    let mut maxs: Vec<usize> = spans.iter().map(|s| s.1).collect();
    mins.sort_unstable();
    maxs.sort_unstable();
    (0..p)
        .map(|b| {
            let (mut lo, mut hi) = spans[b];
            for &c in &red[b] {
                lo = lo.min(spans[c].0);
                hi = hi.max(spans[c].1);
            }
            let starts_after = p - mins.partition_point(|&x| x <= hi);
            let ends_before = maxs.partition_point(|&x| x < lo);
            p - starts_after - ends_before - 1
        })
        .collect()
}

pub fn partition_stretch(g: &OrderedGraph, p: &VertexPartition) -> PartitionStretch {
    let red = red_graph(g, p);
    let spans: Vec<(usize, usize)> = p.blocks().iter().map(|b| (b[0], b[b.len() - 1])).collect();
    let adj: Vec<Vec<usize>> = (0..p.len()).map(|b| red.neighbors(b).to_vec()).collect();
    let per_part = stretch_from_spans(&spans, &adj);
    PartitionStretch { max: per_part.iter().copied().max().unwrap_or(0), per_part }
}

/// Replays a sequence and reports the stretch of every partition in it.
pub fn verify_sequence(g: &OrderedGraph, seq: &PartitionSequence) -> Result<StretchReport, StretchError> {
    verify_with(g.n(), seq, |p| partition_stretch(g, p))
}

pub(crate) fn verify_with<F: FnMut(&VertexPartition) -> PartitionStretch>(
    n: usize,
    seq: &PartitionSequence,
    mut eval: F,
) -> Result<StretchReport, StretchError> {
    if seq.n != n {
        return Err(StretchError::SizeMismatch { seq: seq.n, graph: n });
    }
    let mut per_step = Vec::with_capacity(n);
    let (mut best, mut worst_step, mut worst_part) = (0, 0, 0);
    seq.replay(|step, p| {
        let s = eval(p);
        if s.max > best || step == 0 {
            best = s.max;
            worst_step = step;
            let b = s.per_part.iter().position(|&x| x == s.max).unwrap_or(0);
            worst_part = if p.is_empty() { 0 } else { p.representative(b) };
        }
        per_step.push(s.max);
    })?;
    Ok(StretchReport { per_step_stretch: per_step, max_stretch: best, worst_step, worst_part })
}

/// Restricted growth string of a set partition packed four bits per vertex.
fn encode(rgs: &[u8]) -> u64 {
    rgs.iter().enumerate().fold(0u64, |acc, (i, &x)| acc | (u64::from(x) << (4 * i)))
}

fn decode(code: u64, n: usize, out: &mut Vec<u8>) {
    out.clear();
    out.extend((0..n).map(|i| ((code >> (4 * i)) & 0xf) as u8));
}

pub(crate) fn partition_of_rgs(rgs: &[u8]) -> VertexPartition {
    let labels: Vec<usize> = rgs.iter().map(|&x| x as usize).collect();
    VertexPartition::from_labels(&labels)
}

/// Bottleneck best-first search over the partition lattice of `0..n`, from the finest
/// to the coarsest partition. `cost` receives a restricted growth string. Partitions
/// costing more than `cap` are never entered. Returns the optimal bottleneck and the
/// merges (as block representatives) of an optimal chain.
pub(crate) fn bottleneck_search<F: FnMut(&[u8]) -> usize>(
    n: usize,
    cap: usize,
    mut cost: F,
) -> Option<(usize, Vec<(usize, usize)>)> {
    assert!(n <= 16, "lattice search packs vertices into four bits");
    if n <= 1 {
        return Some((0, Vec::new()));
    }
    let start_rgs: Vec<u8> = (0..n as u8).collect();
    let start = encode(&start_rgs);
    let target = 0u64;
    let c0 = cost(&start_rgs);
    if c0 > cap {
        return None;
    }
    let mut memo: HashMap<u64, usize> = HashMap::new();
    let mut dist: HashMap<u64, usize> = HashMap::new();
    let mut parent: HashMap<u64, (u64, (usize, usize))> = HashMap::new();
    let mut heap = BinaryHeap::new();
    dist.insert(start, c0);
    heap.push(Reverse((c0, start)));
    let mut rgs = Vec::with_capacity(n);
    let mut next = Vec::with_capacity(n);
    while let Some(Reverse((d, code))) = heap.pop() {
        if dist.get(&code).is_some_and(|&x| x < d) {
            continue;
        }
        if code == target {
            let mut merges = Vec::new();
            let mut cur = code;
            while let Some(&(prev, m)) = parent.get(&cur) {
                merges.push(m);
                cur = prev;
            }
            merges.reverse();
            return Some((d, merges));
        }
        decode(code, n, &mut rgs);
        let blocks = *rgs.iter().max().unwrap() as usize + 1;
        let mut first = vec![usize::MAX; blocks];
        for (v, &b) in rgs.iter().enumerate() {
            if first[b as usize] == usize::MAX {
                first[b as usize] = v;
            }
        }
        for i in 0..blocks {
            for j in i + 1..blocks {
                next.clear();
                next.extend(rgs.iter().map(|&b| {
                    let b = b as usize;
                    (if b == j {
                        i
                    } else if b > j {
                        b - 1
                    } else {
                        b
                    }) as u8
                }));
                let ncode = encode(&next);
                let c = match memo.get(&ncode) {
                    Some(&c) => c,
                    None => {
                        let c = cost(&next);
                        memo.insert(ncode, c);
                        c
                    }
                };
                if c > cap {
                    continue;
                }
                let nd = d.max(c);
                if dist.get(&ncode).is_none_or(|&x| nd < x) {
                    dist.insert(ncode, nd);
                    parent.insert(ncode, (code, (first[i], first[j])));
                    heap.push(Reverse((nd, ncode)));
                }
            }
        }
    }
    None
}

/// Stretch of a partition given by block bitmasks, for graphs on at most 32 vertices.
pub(crate) fn mask_stretch(adj: &[u32], blocks: &[u32]) -> usize {
    let p = blocks.len();
    let spans: Vec<(usize, usize)> = blocks
        .iter()
        .map(|&b| (b.trailing_zeros() as usize, 31 - b.leading_zeros() as usize))
        .collect();
    let mut red = vec![Vec::new(); p];
    for i in 0..p {
        for j in i + 1..p {
            if !mask_homogeneous(adj, blocks[i], blocks[j]) {
                red[i].push(j);
                red[j].push(i);
            }
        }
    }
    stretch_from_spans(&spans, &red).into_iter().max().unwrap_or(0)
}

fn mask_homogeneous(adj: &[u32], x: u32, y: u32) -> bool {
    let (mut full, mut empty) = (false, false);
    let mut rest = x;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let a = adj[v] & y;
        if a == y {
            full = true;
        } else if a == 0 {
            empty = true;
        } else {
            return false;
        }
    }
    !(full && empty)
}

fn adjacency_masks(g: &OrderedGraph) -> Vec<u32> {
    (0..g.n()).map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u))).collect()
}

/// Exact stretch-width of `g` in its own vertex order.
pub fn exact_stw_fixed_order(
    g: &OrderedGraph,
    cap: Option<usize>,
    limit: usize,
) -> Result<ExactStw, StretchError> {
    let n = g.n();
    if n > limit.min(16) {
        return Err(StretchError::TooLarge { n, limit: limit.min(16) });
    }
    let cap = cap.unwrap_or(usize::MAX);
    let adj = adjacency_masks(g);
    let mut blocks = Vec::with_capacity(n);
    let found = bottleneck_search(n, cap, |rgs| {
        blocks.clear();
        for (v, &b) in rgs.iter().enumerate() {
            let b = b as usize;
            if b == blocks.len() {
                blocks.push(0u32);
            }
            blocks[b] |= 1 << v;
        }
        mask_stretch(&adj, &blocks)
    });
    match found {
        Some((value, merges)) => Ok(ExactStw {
            value,
            order: (0..n).collect(),
            witness: PartitionSequence::new(n, merges)?,
        }),
        None => Err(StretchError::CapExceeded { cap }),
    }
}

/// Rearranges `perm` into the next permutation in lexicographic order.
pub(crate) fn next_permutation(perm: &mut [usize]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Exact stretch-width over all vertex orders. An order and its reversal give the
/// same value, so only orders with `order[0] < order[n-1]` are searched.
pub fn exact_stw(g: &OrderedGraph, limit: usize) -> Result<ExactStw, StretchError> {
    let n = g.n();
    if n > limit {
        return Err(StretchError::TooLarge { n, limit });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<ExactStw> = None;
    loop {
        if n < 2 || perm[0] < perm[n - 1] {
            let cap = best.as_ref().map(|b| b.value - 1);
            let h = g.relabel(&perm)?;
            match exact_stw_fixed_order(&h, cap, n) {
                Ok(found) => {
                    best = Some(ExactStw { order: perm.clone(), ..found });
                    if best.as_ref().unwrap().value == 0 {
                        break;
                    }
                }
                Err(StretchError::CapExceeded { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(best.expect("the identity order always yields a sequence"))
}

/// Turns a sequence whose red components stay within `t` parts into a vertex order
/// under which the same sequence has stretch at most `t - 1`.
///
/// The sequence is replayed backwards. Components of the red graph are kept in a
/// total order; when a part splits, its component is replaced in place by the new
/// components it falls into, sorted by smallest vertex.
pub fn order_from_component_sequence(
    g: &OrderedGraph,
    seq: &PartitionSequence,
    t: usize,
) -> Result<Vec<usize>, StretchError> {
    if seq.n != g.n() {
        return Err(StretchError::SizeMismatch { seq: seq.n, graph: g.n() });
    }
    let parts = seq.partitions()?;
    for (step, p) in parts.iter().enumerate() {
        let red = red_graph(g, p);
        if let Some(size) = red.components().iter().map(Vec::len).max() {
            if size > t {
                return Err(StretchError::ComponentTooLarge { step, size, limit: t });
            }
        }
    }
    if g.n() == 0 {
        return Ok(Vec::new());
    }
    // Each component is a list of parts; each part a sorted vertex list.
    let mut order: Vec<Vec<Vec<usize>>> = vec![vec![(0..g.n()).collect()]];
    for step in (0..seq.merges.len()).rev() {
        let fine = &parts[step];
        let (a, b) = seq.merges[step];
        let pa = fine.block(fine.block_of(a)).to_vec();
        let pb = fine.block(fine.block_of(b)).to_vec();
        let z = a.min(b);
        let ci = order
            .iter()
            .position(|comp| comp.iter().any(|part| part[0] == z))
            .expect("merged part belongs to some component");
        let mut members: Vec<Vec<usize>> =
            order[ci].iter().filter(|part| part[0] != z).cloned().collect();
        members.push(pa);
        members.push(pb);
        let k = members.len();
        let mut adj = vec![Vec::new(); k];
        for i in 0..k {
            for j in i + 1..k {
                if !g.is_homogeneous(&members[i], &members[j]) {
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        }
        let mut seen = vec![false; k];
        let mut pieces: Vec<Vec<Vec<usize>>> = Vec::new();
        for s in 0..k {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s];
            let mut comp = Vec::new();
            while let Some(x) = stack.pop() {
                comp.push(members[x].clone());
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            comp.sort_by_key(|part| part[0]);
            pieces.push(comp);
        }
        pieces.sort_by_key(|comp| comp.iter().map(|part| part[0]).min());
        order.splice(ci..=ci, pieces);
    }
    Ok(order.into_iter().map(|comp| comp[0][0]).collect())
}
