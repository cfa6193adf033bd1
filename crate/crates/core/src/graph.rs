//! Ordered graphs, vertex partitions, red graphs and partition sequences.
//!
//! Vertices are `0..n` and the vertex order is the index order.

use std::collections::{BTreeMap, HashMap};

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

/// Graphs up to this many vertices also keep adjacency bitsets.
pub const BITSET_LIMIT: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("{0} edge labels given for {1} edges")]
    LabelCount(usize, usize),
    #[error("not a permutation of 0..{0}")]
    NotPermutation(usize),
    #[error("vertex {0} listed twice")]
    RepeatedVertex(usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid merge at step {step}: {reason}")]
    InvalidMerge { step: usize, reason: String },
    #[error("sequence has {got} merges, expected {expected}")]
    SequenceLength { got: usize, expected: usize },
}

#[derive(Clone, Debug)]
pub struct OrderedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    labels: Option<Vec<u32>>,
    adj: Vec<Vec<usize>>,
    bits: Option<Vec<FixedBitSet>>,
}

impl PartialEq for OrderedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges && self.labels == other.labels
    }
}

impl Eq for OrderedGraph {}

/// Builds an ordered graph on `0..n`. Edge endpoints may come in either order.
pub fn build_ordered_graph(n: usize, edges: &[(usize, usize)]) -> Result<OrderedGraph, GraphError> {
    OrderedGraph::build(n, edges, None)
}

impl OrderedGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        Self::build(n, edges, None)
    }

    /// Builds a graph whose edges carry a `u32` label (grid direction, stem id).
    pub fn with_labels(n: usize, edges: &[(usize, usize, u32)]) -> Result<Self, GraphError> {
        let plain: Vec<(usize, usize)> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
        // An edgeless graph has nothing to label.
        let labels = (!edges.is_empty()).then(|| edges.iter().map(|e| e.2).collect());
        Self::build(n, &plain, labels)
    }

    fn build(n: usize, edges: &[(usize, usize)], labels: Option<Vec<u32>>) -> Result<Self, GraphError> {
        if let Some(l) = &labels {
            if l.len() != edges.len() {
                return Err(GraphError::LabelCount(l.len(), edges.len()));
            }
        }
        let mut tagged: Vec<((usize, usize), u32)> = Vec::with_capacity(edges.len());
        for (i, &(a, b)) in edges.iter().enumerate() {
            for x in [a, b] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let lab = labels.as_ref().map_or(0, |l| l[i]);
            tagged.push(((a.min(b), a.max(b)), lab));
        }
        tagged.sort();
        for w in tagged.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(GraphError::DuplicateEdge(w[0].0 .0, w[0].0 .1));
            }
        }
        let edges: Vec<(usize, usize)> = tagged.iter().map(|t| t.0).collect();
        let labels = labels.map(|_| tagged.iter().map(|t| t.1).collect());
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        let bits = (n <= BITSET_LIMIT).then(|| {
            adj.iter()
                .map(|list| {
                    let mut b = FixedBitSet::with_capacity(n);
                    for &v in list {
                        b.insert(v);
                    }
                    b
                })
                .collect()
        });
        Ok(OrderedGraph { n, edges, labels, adj, bits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically. Edge ids index this list.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> Option<&[u32]> {
        self.labels.as_deref()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        match &self.bits {
            Some(b) => b[u].contains(v),
            None => self.adj[u].binary_search(&v).is_ok(),
        }
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    /// Adjacency row as a bitset, when the graph is small enough to keep them.
    pub fn adjacency_bits(&self, v: usize) -> Option<&FixedBitSet> {
        self.bits.as_ref().map(|b| &b[v])
    }

    /// True when every pair in `x` times `y` is an edge, or none is.
    pub fn is_homogeneous(&self, x: &[usize], y: &[usize]) -> bool {
        let mut seen_edge = false;
        let mut seen_non_edge = false;
        for &u in x {
            for &v in y {
                if self.has_edge(u, v) {
                    seen_edge = true;
                } else {
                    seen_non_edge = true;
                }
                if seen_edge && seen_non_edge {
                    return false;
                }
            }
        }
        true
    }

    /// The same graph with vertex `order[i]` moved to position `i`.
    pub fn relabel(&self, order: &[usize]) -> Result<OrderedGraph, GraphError> {
        let pos = inverse_permutation(order, self.n)?;
        let edges: Vec<(usize, usize, u32)> = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| (pos[u], pos[v], self.labels.as_ref().map_or(0, |l| l[i])))
            .collect();
        if self.labels.is_some() {
            OrderedGraph::with_labels(self.n, &edges)
        } else {
            let plain: Vec<(usize, usize)> = edges.iter().map(|e| (e.0, e.1)).collect();
            OrderedGraph::new(self.n, &plain)
        }
    }

    /// Connected components, each sorted, listed by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            comp[s] = id;
            let mut members = Vec::new();
            while let Some(u) = stack.pop() {
                members.push(u);
                for &w in &self.adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }
}

/// Checks that `order` is a permutation of `0..n` and returns its inverse.
pub fn inverse_permutation(order: &[usize], n: usize) -> Result<Vec<usize>, GraphError> {
    if order.len() != n {
        return Err(GraphError::NotPermutation(n));
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return Err(GraphError::NotPermutation(n));
        }
        pos[v] = i;
    }
    Ok(pos)
}

/// The subgraph induced by `vertices`, keeping their relative order.
/// Returns the subgraph and the map from new index to old index.
pub fn induced_ordered_subgraph(
    g: &OrderedGraph,
    vertices: &[usize],
) -> Result<(OrderedGraph, Vec<usize>), GraphError> {
    let mut keep: Vec<usize> = vertices.to_vec();
    keep.sort_unstable();
    for w in keep.windows(2) {
        if w[0] == w[1] {
            return Err(GraphError::RepeatedVertex(w[0]));
        }
    }
    if let Some(&v) = keep.last() {
        if v >= g.n {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: g.n });
        }
    }
    let mut new_index = vec![usize::MAX; g.n];
    for (i, &v) in keep.iter().enumerate() {
        new_index[v] = i;
    }
    let mut edges = Vec::new();
    for (i, &(u, v)) in g.edges.iter().enumerate() {
        if new_index[u] != usize::MAX && new_index[v] != usize::MAX {
            let lab = g.labels.as_ref().map_or(0, |l| l[i]);
            edges.push((new_index[u], new_index[v], lab));
        }
    }
    let sub = if g.labels.is_some() {
        OrderedGraph::with_labels(keep.len(), &edges)?
    } else {
        let plain: Vec<(usize, usize)> = edges.iter().map(|e| (e.0, e.1)).collect();
        OrderedGraph::new(keep.len(), &plain)?
    };
    Ok((sub, keep))
}

/// A partition of `0..n`. Blocks are sorted internally and listed by smallest element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexPartition {
    blocks: Vec<Vec<usize>>,
    #[serde(skip)]
    part_of: Vec<usize>,
}

impl VertexPartition {
    pub fn finest(n: usize) -> Self {
        VertexPartition { blocks: (0..n).map(|v| vec![v]).collect(), part_of: (0..n).collect() }
    }

    pub fn from_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        let mut blocks: Vec<Vec<usize>> = blocks;
        let mut part_of = vec![usize::MAX; n];
        for b in blocks.iter_mut() {
            if b.is_empty() {
                return Err(GraphError::InvalidPartition("empty block".into()));
            }
            b.sort_unstable();
        }
        blocks.sort_by_key(|b| b[0]);
        for (i, b) in blocks.iter().enumerate() {
            for &v in b {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
                if part_of[v] != usize::MAX {
                    return Err(GraphError::RepeatedVertex(v));
                }
                part_of[v] = i;
            }
        }
        if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
            return Err(GraphError::InvalidPartition(format!("vertex {v} is not covered")));
        }
        Ok(VertexPartition { blocks, part_of })
    }

    /// Partition from a label per vertex; equal labels share a block.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map: HashMap<usize, usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut part_of = vec![0; labels.len()];
        for (v, &l) in labels.iter().enumerate() {
            let id = *map.entry(l).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[id].push(v);
            part_of[v] = id;
        }
        VertexPartition { blocks, part_of }
    }

    pub fn n(&self) -> usize {
        self.part_of.len()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.part_of[v]
    }

    /// Representative of a block: its smallest vertex.
    pub fn representative(&self, i: usize) -> usize {
        self.blocks[i][0]
    }

    /// True if every block of `self` lies inside a block of `finer`'s coarsening, i.e.
    /// `self` is coarser than or equal to `finer`.
    pub fn coarsens(&self, finer: &VertexPartition) -> bool {
        finer.blocks.iter().all(|b| b.iter().all(|&v| self.part_of[v] == self.part_of[b[0]]))
    }
}

/// Red edges of a partition, between block indices `(a, b)` with `a < b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RedGraph {
    pub parts: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(skip)]
    adj: Vec<Vec<usize>>,
}

impl RedGraph {
    pub fn neighbors(&self, a: usize) -> &[usize] {
        &self.adj[a]
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Connected components as lists of block indices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.parts];
        let mut out = Vec::new();
        for s in 0..self.parts {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s];
            let mut comp = Vec::new();
            while let Some(a) = stack.pop() {
                comp.push(a);
                for &b in &self.adj[a] {
                    if !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Pairs of blocks that are neither fully joined nor fully disjoint.
pub fn red_graph(g: &OrderedGraph, p: &VertexPartition) -> RedGraph {
    let mut counts: HashMap<(usize, usize), usize> = HashMap::new();
    for &(u, v) in &g.edges {
        let (a, b) = (p.part_of[u], p.part_of[v]);
        if a != b {
            *counts.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
    }
    let mut edges: Vec<(usize, usize)> = counts
        .into_iter()
        .filter(|&((a, b), c)| c < p.blocks[a].len() * p.blocks[b].len())
        .map(|(k, _)| k)
        .collect();
    edges.sort_unstable();
    let mut adj = vec![Vec::new(); p.len()];
    for &(a, b) in &edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in adj.iter_mut() {
        list.sort_unstable();
    }
    RedGraph { parts: p.len(), edges, adj }
}

/// A chain of partitions from the finest to the coarsest, stored as the `n - 1`
/// merges of block representatives.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionSequence {
    pub n: usize,
    pub merges: Vec<(usize, usize)>,
}

impl PartitionSequence {
    pub fn new(n: usize, merges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let seq = PartitionSequence { n, merges };
        seq.replay(|_, _| {})?;
        Ok(seq)
    }

    /// Walks the chain, calling `f(step, partition)` for every partition from the
    /// finest (step 0) to the coarsest (step n - 1).
    pub fn replay<F: FnMut(usize, &VertexPartition)>(&self, mut f: F) -> Result<(), GraphError> {
        let expected = self.n.saturating_sub(1);
        if self.merges.len() != expected {
            return Err(GraphError::SequenceLength { got: self.merges.len(), expected });
        }
        let mut blocks: BTreeMap<usize, Vec<usize>> = (0..self.n).map(|v| (v, vec![v])).collect();
        f(0, &VertexPartition::finest(self.n));
        for (step, &(a, b)) in self.merges.iter().enumerate() {
            if a == b {
                return Err(GraphError::InvalidMerge { step, reason: format!("{a} merged with itself") });
            }
            for r in [a, b] {
                if !blocks.contains_key(&r) {
                    return Err(GraphError::InvalidMerge {
                        step,
                        reason: format!("{r} is not the representative of a live block"),
                    });
                }
            }
            let (keep, gone) = (a.min(b), a.max(b));
            let moved = blocks.remove(&gone).unwrap_or_default();
            let target = blocks.get_mut(&keep).expect("checked above");
            target.extend(moved);
            target.sort_unstable();
            let p = partition_from_map(self.n, &blocks);
            f(step + 1, &p);
        }
        Ok(())
    }

    /// All partitions of the chain, finest first.
    pub fn partitions(&self) -> Result<Vec<VertexPartition>, GraphError> {
        let mut out = Vec::with_capacity(self.n);
        self.replay(|_, p| out.push(p.clone()))?;
        Ok(out)
    }

    /// The same chain after moving vertex `order[i]` to position `i`.
    pub fn relabeled(&self, order: &[usize]) -> Result<PartitionSequence, GraphError> {
        let pos = inverse_permutation(order, self.n)?;
        let mut block_min: BTreeMap<usize, usize> = (0..self.n).map(|v| (v, pos[v])).collect();
        let mut merges = Vec::with_capacity(self.merges.len());
        for (step, &(a, b)) in self.merges.iter().enumerate() {
            let (ma, mb) = match (block_min.get(&a), block_min.get(&b)) {
                (Some(&x), Some(&y)) if a != b => (x, y),
                _ => return Err(GraphError::InvalidMerge { step, reason: "not two live blocks".into() }),
            };
            merges.push((ma, mb));
            let (keep, gone) = (a.min(b), a.max(b));
            block_min.remove(&gone);
            block_min.insert(keep, ma.min(mb));
        }
        PartitionSequence::new(self.n, merges)
    }

    /// Recovers the merges of a chain given as explicit partitions.
    pub fn from_partitions(chain: &[VertexPartition]) -> Result<PartitionSequence, GraphError> {
        let n = chain.first().map_or(0, VertexPartition::n);
        let mut merges = Vec::new();
        for (step, w) in chain.windows(2).enumerate() {
            let (fine, coarse) = (&w[0], &w[1]);
            if coarse.len() + 1 != fine.len() || !coarse.coarsens(fine) {
                return Err(GraphError::InvalidMerge { step, reason: "not a single merge".into() });
            }
            let mut pair = None;
            for cb in coarse.blocks() {
                let reps: Vec<usize> = {
                    let mut r: Vec<usize> = cb.iter().map(|&v| fine.representative(fine.block_of(v))).collect();
                    r.dedup();
                    r.sort_unstable();
                    r.dedup();
                    r
                };
                if reps.len() == 2 {
                    pair = Some((reps[0], reps[1]));
                }
            }
            merges.push(pair.ok_or(GraphError::InvalidMerge { step, reason: "no merged pair".into() })?);
        }
        PartitionSequence::new(n, merges)
    }
}

fn partition_from_map(n: usize, blocks: &BTreeMap<usize, Vec<usize>>) -> VertexPartition {
    let mut part_of = vec![0; n];
    let list: Vec<Vec<usize>> = blocks.values().cloned().collect();
    for (i, b) in list.iter().enumerate() {
        for &v in b {
            part_of[v] = i;
        }
    }
    VertexPartition { blocks: list, part_of }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_rejects_bad_input() {
        assert_eq!(build_ordered_graph(3, &[(0, 3)]), Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 }));
        assert_eq!(build_ordered_graph(3, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(build_ordered_graph(3, &[(0, 1), (1, 0)]), Err(GraphError::DuplicateEdge(0, 1)));
    }

    #[test]
    fn induced_subgraph_keeps_order() {
        let g = build_ordered_graph(5, &[(0, 2), (2, 4), (1, 3)]).unwrap();
        let (h, map) = induced_ordered_subgraph(&g, &[4, 2, 0]).unwrap();
        assert_eq!(map, vec![0, 2, 4]);
        assert_eq!(h.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn singletons_are_never_red() {
        let g = build_ordered_graph(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(red_graph(&g, &VertexPartition::finest(4)).edges.is_empty());
    }

    #[test]
    fn relabeled_sequence_tracks_minimum() {
        let seq = PartitionSequence::new(3, vec![(0, 2), (0, 1)]).unwrap();
        let r = seq.relabeled(&[2, 1, 0]).unwrap();
        assert_eq!(r.merges, vec![(2, 0), (0, 1)]);
    }
}
