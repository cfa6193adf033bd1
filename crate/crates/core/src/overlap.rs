//! Overlap graphs of ordered graphs, rainbows and clean bicliques.
//!
//! Edges are identified by their index in `OrderedGraph::edges`. Two edges cross
//! when their endpoints interleave strictly: `L(e) < L(f) < R(e) < R(f)`.

use serde::Serialize;

use fixedbitset::FixedBitSet;

use crate::graph::OrderedGraph;

pub const DEFAULT_EDGE_BUDGET: usize = 64;
pub const DEFAULT_NODE_LIMIT: u64 = 20_000_000;

/// True when the two edges cross. Endpoints are given as `(left, right)`.
pub fn crosses(e: (usize, usize), f: (usize, usize)) -> bool {
    (e.0 < f.0 && f.0 < e.1 && e.1 < f.1) || (f.0 < e.0 && e.0 < f.1 && f.1 < e.1)
}

/// `f` lies inside `e`: `L(e) <= L(f)` and `R(f) <= R(e)`.
pub fn nested_in(f: (usize, usize), e: (usize, usize)) -> bool {
    e.0 <= f.0 && f.1 <= e.1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OverlapGraph {
    /// Number of vertices, one per edge of the ordered graph.
    pub m: usize,
    /// Crossing pairs `(e, f)` with `e < f`, sorted.
    pub edges: Vec<(usize, usize)>,
    #[serde(skip)]
    adj: Vec<Vec<usize>>,
}

impl OverlapGraph {
    pub fn neighbors(&self, e: usize) -> &[usize] {
        &self.adj[e]
    }

    pub fn crossing_count(&self) -> usize {
        self.edges.len()
    }

    pub fn isolated(&self) -> Vec<usize> {
        (0..self.m).filter(|&e| self.adj[e].is_empty()).collect()
    }
}

/// Builds the overlap graph by sweeping edges in order of left endpoint.
pub fn overlap_graph(g: &OrderedGraph) -> OverlapGraph {
    let edges = g.edges();
    let m = edges.len();
    let mut pairs = Vec::new();
    // Edges are sorted by left endpoint; for e only later-starting edges can be the
    // right partner of a crossing.
    for (i, &e) in edges.iter().enumerate() {
        let start = edges.partition_point(|f| f.0 <= e.0);
        let end = edges.partition_point(|f| f.0 < e.1);
        for (j, &f) in edges.iter().enumerate().take(end).skip(start) {
            if f.1 > e.1 {
                pairs.push((i.min(j), i.max(j)));
            }
        }
    }
    pairs.sort_unstable();
    let mut adj = vec![Vec::new(); m];
    for &(a, b) in &pairs {
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in adj.iter_mut() {
        list.sort_unstable();
    }
    OverlapGraph { m, edges: pairs, adj }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rainbow {
    pub vertex: usize,
    /// Edge ids, outermost first.
    pub edges: Vec<usize>,
    /// Length `R - L` of the outermost edge, 0 for an empty rainbow.
    pub length: usize,
}

/// Longest chain of nested intervals among `cands` (`(left, right, id)`), outermost
/// first. Among longest chains the one with the lexicographically smallest id
/// sequence is returned.
pub(crate) fn longest_nested_chain(cands: &[(usize, usize, usize)]) -> Vec<usize> {
    let k = cands.len();
    if k == 0 {
        return Vec::new();
    }
    let mut rights: Vec<usize> = cands.iter().map(|c| c.1).collect();
    rights.sort_unstable();
    rights.dedup();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| cands[b].0.cmp(&cands[a].0).then(cands[a].1.cmp(&cands[b].1)));
    // Fenwick tree of prefix maxima over right endpoints.
    let mut tree = vec![0usize; rights.len() + 1];
    let mut best = vec![0usize; k];
    for &c in &order {
        let r = rights.partition_point(|&x| x <= cands[c].1);
        let mut i = r;
        let mut inner = 0;
        while i > 0 {
            inner = inner.max(tree[i]);
            i &= i - 1;
        }
        best[c] = inner + 1;
        let mut i = r;
        while i <= rights.len() {
            tree[i] = tree[i].max(best[c]);
            i += i & i.wrapping_neg();
        }
    }
    let total = *best.iter().max().unwrap();
    let mut chain: Vec<usize> = Vec::with_capacity(total);
    for need in (1..=total).rev() {
        let outer = chain.last().map(|&c| (cands[c].0, cands[c].1));
        let pick = (0..k)
            .filter(|&c| best[c] == need)
            .filter(|&c| match outer {
                None => true,
                Some(o) => chain.last() != Some(&c) && nested_in((cands[c].0, cands[c].1), o),
            })
            .min_by_key(|&c| cands[c].2)
            .expect("a chain of the recorded length exists");
        chain.push(pick);
    }
    chain.into_iter().map(|c| cands[c].2).collect()
}

/// A maximum rainbow over `v`: nested edges whose interiors contain `v`.
pub fn max_rainbow_over(g: &OrderedGraph, v: usize) -> Rainbow {
    let cands: Vec<(usize, usize, usize)> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| e.0 < v && v < e.1)
        .map(|(i, e)| (e.0, e.1, i))
        .collect();
    let chain = longest_nested_chain(&cands);
    let length = chain.first().map_or(0, |&e| g.edges()[e].1 - g.edges()[e].0);
    Rainbow { vertex: v, edges: chain, length }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CleanBiclique {
    /// Edge ids, all starting before every edge of `y`.
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

impl CleanBiclique {
    pub fn is_valid(&self, g: &OrderedGraph) -> bool {
        let e = g.edges();
        let max_x = self.x.iter().map(|&i| e[i].0).max();
        let min_y = self.y.iter().map(|&i| e[i].0).min();
        let separated = match (max_x, min_y) {
            (Some(a), Some(b)) => a < b,
            _ => true,
        };
        separated && self.x.iter().all(|&a| self.y.iter().all(|&b| crosses(e[a], e[b])))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BicliqueOutcome {
    Found(CleanBiclique),
    /// The search finished without finding one.
    Absent,
    /// The node limit was hit before the search finished.
    Unresolved { nodes: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BicliqueBudget {
    /// Graphs with at most this many edges are searched without a node limit.
    pub edges: usize,
    /// Node limit for larger graphs.
    pub nodes: u64,
}

impl Default for BicliqueBudget {
    fn default() -> Self {
        BicliqueBudget { edges: DEFAULT_EDGE_BUDGET, nodes: DEFAULT_NODE_LIMIT }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BicliqueSearch {
    pub s: usize,
    pub outcome: BicliqueOutcome,
    /// True when the answer is definitive (found, or absent after a finished search).
    pub exact: bool,
    pub within_edge_budget: bool,
    pub nodes: u64,
}

struct Search<'a> {
    nbrs: &'a [FixedBitSet],
    s: usize,
    nodes: u64,
    limit: Option<u64>,
}

impl Search<'_> {
    /// Chooses `s` rows among `cand[start..]` whose neighbourhoods share `s` columns.
    fn run(&mut self, cand: &[usize], start: usize, chosen: &mut Vec<usize>, common: &FixedBitSet) -> Option<Option<FixedBitSet>> {
        if chosen.len() == self.s {
            return Some(Some(common.clone()));
        }
        for idx in start..cand.len() {
            if cand.len() - idx < self.s - chosen.len() {
                break;
            }
            self.nodes += 1;
            if self.limit.is_some_and(|l| self.nodes > l) {
                return None;
            }
            let mut next = common.clone();
            next.intersect_with(&self.nbrs[cand[idx]]);
            if next.count_ones(..) < self.s {
                continue;
            }
            chosen.push(cand[idx]);
            match self.run(cand, idx + 1, chosen, &next)? {
                Some(found) => return Some(Some(found)),
                None => {
                    chosen.pop();
                }
            }
        }
        Some(None)
    }
}

/// Looks for a clean `K_{s,s}` in the overlap graph: sides `X`, `Y` with every edge of
/// `X` starting strictly before every edge of `Y`, and all pairs crossing.
pub fn clean_biclique_at_least(g: &OrderedGraph, s: usize, budget: BicliqueBudget) -> BicliqueSearch {
    let within = g.m() <= budget.edges;
    let done = |outcome: BicliqueOutcome, nodes: u64| {
        let exact = !matches!(outcome, BicliqueOutcome::Unresolved { .. });
        BicliqueSearch { s, outcome, exact, within_edge_budget: within, nodes }
    };
    if s == 0 {
        return done(BicliqueOutcome::Found(CleanBiclique { x: vec![], y: vec![] }), 0);
    }
    let ov = overlap_graph(g);
    let e = g.edges();
    let useful: Vec<usize> = (0..g.m()).filter(|&i| ov.neighbors(i).len() >= s).collect();
    let mut lefts: Vec<usize> = useful.iter().map(|&i| e[i].0).collect();
    lefts.sort_unstable();
    lefts.dedup();
    let limit = (!within).then_some(budget.nodes);
    let mut nodes = 0u64;
    for &split in &lefts {
        let mut xs: Vec<usize> = useful.iter().copied().filter(|&i| e[i].0 <= split).collect();
        let mut ys: Vec<usize> = useful.iter().copied().filter(|&i| e[i].0 > split).collect();
        // Peel rows and columns that cannot reach degree s.
        loop {
            let y_set: Vec<bool> = {
                let mut v = vec![false; g.m()];
                ys.iter().for_each(|&i| v[i] = true);
                v
            };
            let x_set: Vec<bool> = {
                let mut v = vec![false; g.m()];
                xs.iter().for_each(|&i| v[i] = true);
                v
            };
            let nx: Vec<usize> =
                xs.iter().copied().filter(|&i| ov.neighbors(i).iter().filter(|&&j| y_set[j]).count() >= s).collect();
            let ny: Vec<usize> =
                ys.iter().copied().filter(|&i| ov.neighbors(i).iter().filter(|&&j| x_set[j]).count() >= s).collect();
            let stable = nx.len() == xs.len() && ny.len() == ys.len();
            xs = nx;
            ys = ny;
            if stable {
                break;
            }
        }
        if xs.len() < s || ys.len() < s {
            continue;
        }
        // Branch on the smaller side.
        let (rows, cols, swapped) = if xs.len() <= ys.len() { (&xs, &ys, false) } else { (&ys, &xs, true) };
        let col_index: Vec<usize> = {
            let mut v = vec![usize::MAX; g.m()];
            cols.iter().enumerate().for_each(|(k, &i)| v[i] = k);
            v
        };
        let nbrs: Vec<FixedBitSet> = (0..g.m())
            .map(|i| {
                let mut b = FixedBitSet::with_capacity(cols.len());
                if rows.contains(&i) {
                    for &j in ov.neighbors(i) {
                        if col_index[j] != usize::MAX {
                            b.insert(col_index[j]);
                        }
                    }
                }
                b
            })
            .collect();
        let mut all = FixedBitSet::with_capacity(cols.len());
        all.insert_range(..);
        let mut search = Search { nbrs: &nbrs, s, nodes, limit };
        let mut chosen = Vec::new();
        let res = search.run(rows, 0, &mut chosen, &all);
        nodes = search.nodes;
        match res {
            None => return done(BicliqueOutcome::Unresolved { nodes }, nodes),
            Some(Some(common)) => {
                let picked_cols: Vec<usize> = common.ones().take(s).map(|k| cols[k]).collect();
                let (mut x, mut y) = if swapped { (picked_cols, chosen) } else { (chosen, picked_cols) };
                x.sort_unstable();
                y.sort_unstable();
                return done(BicliqueOutcome::Found(CleanBiclique { x, y }), nodes);
            }
            Some(None) => {}
        }
    }
    done(BicliqueOutcome::Absent, nodes)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum KttCheck {
    /// No clean `K_{s,s}`, hence the overlap graph has no `K_{t,t}` with `t = 2s`.
    Certified { s: usize, no_ktt: usize },
    Refuted(CleanBiclique),
    Unresolved { nodes: u64 },
}

/// Certifies that the overlap graph has no `K_{2s,2s}` by ruling out a clean `K_{s,s}`.
pub fn ktt_upper_check(g: &OrderedGraph, s: usize, budget: BicliqueBudget) -> KttCheck {
    match clean_biclique_at_least(g, s, budget).outcome {
        BicliqueOutcome::Found(b) => KttCheck::Refuted(b),
        BicliqueOutcome::Absent => KttCheck::Certified { s, no_ktt: 2 * s },
        BicliqueOutcome::Unresolved { nodes } => KttCheck::Unresolved { nodes },
    }
}
