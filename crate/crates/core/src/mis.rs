//! Maximum independent set: an exhaustive oracle, degree-threshold branching and a
//! dynamic program over tree decompositions.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{induced_ordered_subgraph, GraphError, OrderedGraph};
use crate::separator::{min_degree_decomposition, tree_decomposition, SeparatorError, TreeDecomposition};

pub const EXACT_LIMIT: usize = 24;
/// Largest bag the dynamic program accepts.
pub const MAX_BAG: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MisError {
    #[error("graph has {n} vertices, exhaustive search is limited to {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("bag of size {size} exceeds the limit of {limit}")]
    BagTooLarge { size: usize, limit: usize },
    #[error(transparent)]
    Decomposition(#[from] SeparatorError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MisResult {
    pub size: usize,
    pub set: Vec<usize>,
    /// Nodes of the branching tree; each branching vertex contributes its two children.
    pub node_count: u64,
    pub leaf_widths: Vec<usize>,
    /// Most "take" branches on one root-to-leaf path.
    pub max_take_depth: usize,
}

pub fn is_independent(g: &OrderedGraph, set: &[usize]) -> bool {
    let mut inside = vec![false; g.n()];
    for &v in set {
        if v >= g.n() || inside[v] {
            return false;
        }
        inside[v] = true;
    }
    g.edges().iter().all(|&(a, b)| !(inside[a] && inside[b]))
}

struct Exact {
    adj: Vec<u32>,
    best: u32,
    nodes: u64,
}

impl Exact {
    fn run(&mut self, alive: u32, taken: u32) {
        self.nodes += 1;
        if (taken | alive).count_ones() <= self.best.count_ones() {
            return;
        }
        if alive == 0 {
            self.best = taken;
            return;
        }
        let mut free = 0u32;
        let mut pick = None;
        let mut bits = alive;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let d = (self.adj[v] & alive).count_ones();
            if d <= 1 {
                free = 1 << v;
                break;
            }
            if pick.is_none_or(|(_, pd)| d > pd) {
                pick = Some((v, d));
            }
        }
        if free != 0 {
            let v = free.trailing_zeros() as usize;
            self.run(alive & !(free | self.adj[v]), taken | free);
            return;
        }
        let (v, _) = pick.expect("alive is non-empty");
        self.run(alive & !(1 << v) & !self.adj[v], taken | (1 << v));
        self.run(alive & !(1 << v), taken);
    }
}

/// Optimal independent set by exhaustive branching, for at most 24 vertices.
pub fn mis_exact(g: &OrderedGraph) -> Result<MisResult, MisError> {
    let n = g.n();
    if n > EXACT_LIMIT {
        return Err(MisError::TooLarge { n, limit: EXACT_LIMIT });
    }
    let adj = (0..n).map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u)).collect();
    let mut ex = Exact { adj, best: 0, nodes: 0 };
    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    ex.run(all, 0);
    let set: Vec<usize> = (0..n).filter(|&v| ex.best >> v & 1 == 1).collect();
    Ok(MisResult { size: set.len(), set, node_count: ex.nodes, leaf_widths: vec![], max_take_depth: 0 })
}

/// Independent subsets of `bag` as masks over bag positions.
fn independent_subsets(g: &OrderedGraph, bag: &[usize]) -> Vec<u64> {
    let k = bag.len();
    let local: Vec<u64> = bag
        .iter()
        .map(|&v| (0..k).filter(|&j| g.has_edge(v, bag[j])).fold(0u64, |m, j| m | 1 << j))
        .collect();
    let mut out = vec![0u64];
    for (i, &conflicts) in local.iter().enumerate() {
        let extra: Vec<u64> = out.iter().filter(|&&s| s & conflicts == 0).map(|&s| s | 1 << i).collect();
        out.extend(extra);
    }
    out
}

fn mask_to_vertices(bag: &[usize], mask: u64) -> impl Iterator<Item = usize> + '_ {
    (0..bag.len()).filter(move |&i| mask >> i & 1 == 1).map(move |i| bag[i])
}

/// Optimal independent set by dynamic programming over the bags of `td`.
pub fn mis_tw_dp(g: &OrderedGraph, td: &TreeDecomposition) -> Result<MisResult, MisError> {
    td.validate(g)?;
    let k = td.bags.len();
    if k == 0 {
        return Ok(MisResult { size: 0, set: vec![], node_count: 0, leaf_widths: vec![0], max_take_depth: 0 });
    }
    if let Some(b) = td.bags.iter().find(|b| b.len() > MAX_BAG) {
        return Err(MisError::BagTooLarge { size: b.len(), limit: MAX_BAG });
    }
    let bags: Vec<Vec<usize>> = td
        .bags
        .iter()
        .map(|b| {
            let mut b = b.clone();
            b.sort_unstable();
            b.dedup();
            b
        })
        .collect();
    let mut adj = vec![Vec::new(); k];
    for &(a, b) in &td.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut parent = vec![usize::MAX; k];
    let mut order = vec![0];
    let mut seen = vec![false; k];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        i += 1;
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                parent[y] = x;
                order.push(y);
            }
        }
    }
    // Per node: independent subsets of its bag and their best subtree totals.
    let mut tables: Vec<Vec<(u64, usize)>> = vec![Vec::new(); k];
    // Per non-root node: best (value - overlap, own subset) keyed by the subset shared
    // with the parent bag, given as a vertex list.
    let mut up: Vec<HashMap<Vec<usize>, (usize, u64)>> = vec![HashMap::new(); k];
    for &x in order.iter().rev() {
        let bag = &bags[x];
        let children: Vec<usize> = adj[x].iter().copied().filter(|&y| parent[y] == x).collect();
        let table: Vec<(u64, usize)> = independent_subsets(g, bag)
            .into_iter()
            .filter_map(|s| {
                let mut total = s.count_ones() as usize;
                for &c in &children {
                    let key: Vec<usize> = mask_to_vertices(bag, s).filter(|v| bags[c].binary_search(v).is_ok()).collect();
                    total += up[c].get(&key)?.0;
                }
                Some((s, total))
            })
            .collect();
        if parent[x] != usize::MAX {
            let pbag = &bags[parent[x]];
            let mut map: HashMap<Vec<usize>, (usize, u64)> = HashMap::new();
            for &(s, val) in &table {
                let key: Vec<usize> = mask_to_vertices(bag, s).filter(|v| pbag.binary_search(v).is_ok()).collect();
                let score = val - key.len();
                let e = map.entry(key).or_insert((score, s));
                if score > e.0 {
                    *e = (score, s);
                }
            }
            up[x] = map;
        }
        tables[x] = table;
    }
    let &(root_mask, size) = tables[0].iter().max_by_key(|&&(s, v)| (v, std::cmp::Reverse(s))).expect("empty set is independent");
    let mut chosen = vec![u64::MAX; k];
    chosen[0] = root_mask;
    let mut set = Vec::new();
    for &x in &order {
        if x != 0 {
            let p = parent[x];
            let key: Vec<usize> = mask_to_vertices(&bags[p], chosen[p]).filter(|v| bags[x].binary_search(v).is_ok()).collect();
            chosen[x] = up[x][&key].1;
        }
        set.extend(mask_to_vertices(&bags[x], chosen[x]));
    }
    set.sort_unstable();
    set.dedup();
    debug_assert_eq!(set.len(), size);
    Ok(MisResult { size, set, node_count: 0, leaf_widths: vec![td.width()], max_take_depth: 0 })
}

/// How leaves of the branching are decomposed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LeafDecomposition {
    MinDegree,
    /// Recursive balanced separators with the given `t`.
    Separator { t: usize },
}

/// `ceil(n^(1/5))`, at least 1.
pub fn default_threshold(n: usize) -> usize {
    (1..).find(|&r: &usize| r.pow(5) >= n).unwrap_or(1).max(1)
}

fn greedy_lower_bound(g: &OrderedGraph) -> Vec<usize> {
    let n = g.n();
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut set = Vec::new();
    while let Some(v) = (0..n).filter(|&v| alive[v]).min_by_key(|&v| (deg[v], v)) {
        set.push(v);
        let mut gone = vec![v];
        gone.extend(g.neighbors(v).iter().copied().filter(|&u| alive[u]));
        for &u in &gone {
            alive[u] = false;
        }
        for &u in &gone {
            for &w in g.neighbors(u) {
                if alive[w] {
                    deg[w] -= 1;
                }
            }
        }
    }
    set.sort_unstable();
    set
}

struct Brancher<'a> {
    g: &'a OrderedGraph,
    threshold: usize,
    leaf: LeafDecomposition,
    best: Vec<usize>,
    nodes: u64,
    max_take: usize,
    leaf_widths: Vec<usize>,
}

impl Brancher<'_> {
    fn run(&mut self, alive: &mut Vec<bool>, chosen: &mut Vec<usize>, takes: usize) -> Result<(), MisError> {
        let live = alive.iter().filter(|&&a| a).count();
        if chosen.len() + live <= self.best.len() {
            return Ok(());
        }
        let g = self.g;
        let pick = (0..g.n())
            .filter(|&v| alive[v])
            .map(|v| (v, g.neighbors(v).iter().filter(|&&u| alive[u]).count()))
            .filter(|&(_, d)| d >= self.threshold)
            .max_by_key(|&(v, d)| (d, std::cmp::Reverse(v)));
        let Some((v, _)) = pick else {
            let verts: Vec<usize> = (0..g.n()).filter(|&v| alive[v]).collect();
            let (sub, map) = induced_ordered_subgraph(g, &verts)?;
            let td = match self.leaf {
                LeafDecomposition::MinDegree => min_degree_decomposition(&sub),
                LeafDecomposition::Separator { t } => tree_decomposition(&sub, t)?,
            };
            let r = mis_tw_dp(&sub, &td)?;
            self.leaf_widths.push(td.width());
            if chosen.len() + r.size > self.best.len() {
                let mut set = chosen.clone();
                set.extend(r.set.iter().map(|&i| map[i]));
                set.sort_unstable();
                self.best = set;
            }
            return Ok(());
        };
        self.nodes += 2;
        let closed: Vec<usize> =
            std::iter::once(v).chain(g.neighbors(v).iter().copied()).filter(|&u| alive[u]).collect();
        for &u in &closed {
            alive[u] = false;
        }
        chosen.push(v);
        self.max_take = self.max_take.max(takes + 1);
        assert!((takes + 1) * self.threshold <= g.n(), "take branches exceed n / threshold");
        self.run(alive, chosen, takes + 1)?;
        chosen.pop();
        for &u in &closed {
            alive[u] = true;
        }
        alive[v] = false;
        self.run(alive, chosen, takes)?;
        alive[v] = true;
        Ok(())
    }
}

/// Branches on vertices of degree at least `threshold` (take it, or delete it) and
/// solves the remaining low-degree graphs by dynamic programming.
pub fn mis_branch(g: &OrderedGraph, threshold: usize) -> Result<MisResult, MisError> {
    mis_branch_with(g, threshold, LeafDecomposition::MinDegree)
}

pub fn mis_branch_with(g: &OrderedGraph, threshold: usize, leaf: LeafDecomposition) -> Result<MisResult, MisError> {
    let mut b = Brancher {
        g,
        threshold: threshold.max(1),
        leaf,
        best: greedy_lower_bound(g),
        nodes: 0,
        max_take: 0,
        leaf_widths: Vec::new(),
    };
    let mut alive = vec![true; g.n()];
    b.run(&mut alive, &mut Vec::new(), 0)?;
    Ok(MisResult {
        size: b.best.len(),
        set: b.best,
        node_count: b.nodes,
        leaf_widths: b.leaf_widths,
        max_take_depth: b.max_take,
    })
}
