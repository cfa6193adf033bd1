//! Separators of ordered graphs built from rainbows, balanced separations and tree
//! decompositions.
//!
//! `t` is a bound such that the overlap graph has no `K_{t,t}`; a clean-biclique
//! certificate for `s` gives `t = 2s`. Separators are always valid; `t` only drives
//! their size.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{induced_ordered_subgraph, GraphError, OrderedGraph};
use crate::overlap::{ktt_upper_check, longest_nested_chain, BicliqueBudget, KttCheck};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TChoice {
    pub t: usize,
    /// Smallest `s` for which no clean `K_{s,s}` was certified, when the search finished.
    pub s: Option<usize>,
}

/// `t = 2s` for the smallest `s` without a clean `K_{s,s}`. When the search runs out
/// of budget, falls back to `t = m/2 + 1`, for which `K_{t,t}` cannot fit.
pub fn certified_t(g: &OrderedGraph, budget: BicliqueBudget) -> TChoice {
    let fallback = TChoice { t: g.m() / 2 + 1, s: None };
    for s in 1..=g.m() / 2 + 1 {
        match ktt_upper_check(g, s, budget) {
            KttCheck::Certified { no_ktt, .. } => return TChoice { t: no_ktt.min(fallback.t), s: Some(s) },
            KttCheck::Refuted(_) => {}
            KttCheck::Unresolved { .. } => return fallback,
        }
    }
    fallback
}

/// Components up to this size become leaves of the decomposition.
pub const LEAF_SIZE: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeparatorError {
    #[error("t must be at least 1")]
    ZeroT,
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("invalid separation: {0}")]
    InvalidSeparation(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SepStats {
    pub calls: usize,
    pub max_depth: usize,
    /// Recursive calls whose rainbow was longer than half of the caller's.
    pub halving_violations: usize,
    /// Outputs that failed the separation check and had crossing edges cut.
    pub repairs: usize,
}

/// `6t^2 + 3t`.
pub fn size_factor(t: usize) -> usize {
    6 * t * t + 3 * t
}

/// `ceil(log2(l + 1)) + 1`.
pub fn log_factor(l: usize) -> usize {
    let x = l + 1;
    let ceil_log = (usize::BITS - (x - 1).leading_zeros()) as usize;
    ceil_log + 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeftRightSeparator {
    pub v: usize,
    pub x: usize,
    pub separator: Vec<usize>,
    /// Length of the outermost edge of the maximum rainbow over `v`.
    pub rainbow_length: usize,
    /// `(6t^2 + 3t)(ceil(log2(l+1)) + 1)`.
    pub bound: usize,
    pub within_bound: bool,
    /// `x` is `v` or lies strictly inside the outermost rainbow edge.
    pub x_in_rainbow: bool,
    pub stats: SepStats,
}

struct Engine<'a> {
    g: &'a OrderedGraph,
    t: usize,
    stats: SepStats,
}

type Edge = (usize, usize);

fn outside(x: usize, e: Edge) -> bool {
    x < e.0 || x > e.1
}

fn inside(x: usize, e: Edge) -> bool {
    e.0 < x && x < e.1
}

/// The edge goes from the exterior of `outer` to the interior of `inner`.
fn links(f: Edge, outer: Edge, inner: Edge) -> bool {
    (outside(f.0, outer) && inside(f.1, inner)) || (outside(f.1, outer) && inside(f.0, inner))
}

impl Engine<'_> {
    fn live_edges_over(&self, alive: &[bool], v: usize) -> Vec<(usize, usize, usize)> {
        self.g
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.0 < v && v < e.1 && alive[e.0] && alive[e.1])
            .map(|(i, e)| (e.0, e.1, i))
            .collect()
    }

    fn chain_length(&self, alive: &[bool], v: usize) -> usize {
        let chain = longest_nested_chain(&self.live_edges_over(alive, v));
        chain.first().map_or(0, |&i| self.g.edges()[i].1 - self.g.edges()[i].0)
    }

    /// Left endpoints of the live edges that surround `e3`, or that go from outside
    /// one of `e1, et, e2t` to inside the next of `et, e2t, e3`. With
    /// `skip_enclosing`, edges strictly enclosing `e1` are left alone.
    fn cut(&self, alive: &[bool], e: [Edge; 4], skip_enclosing: bool) -> BTreeSet<usize> {
        let [e1, et, e2t, e3t] = e;
        let mut out = BTreeSet::new();
        for &f in self.g.edges() {
            if !(alive[f.0] && alive[f.1]) {
                continue;
            }
            let enclosing = skip_enclosing && f.0 < e1.0 && f.1 > e1.1;
            let around = f.0 <= e3t.0 && f.1 >= e3t.1 && !enclosing;
            if around || links(f, e1, et) || links(f, et, e2t) || links(f, e2t, e3t) {
                out.insert(f.0);
            }
        }
        out
    }

    /// Returns `x` and a set `U` containing `x` such that every live edge from the
    /// left of `x` to the right of `x` has an endpoint in `U`.
    fn left_right(&mut self, alive: &[bool], v: usize, depth: usize) -> (usize, BTreeSet<usize>) {
        self.stats.calls += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let over = self.live_edges_over(alive, v);
        let chain = longest_nested_chain(&over);
        let t = self.t;
        if chain.len() <= 3 * t {
            let mut u: BTreeSet<usize> = over.iter().map(|c| c.0).collect();
            u.insert(v);
            return (v, u);
        }
        let e = |j: usize| self.g.edges()[chain[j - 1]];
        let (e1, et, e2t, e3t) = (e(1), e(t), e(2 * t), e(3 * t));
        let removed = self.cut(alive, [e1, et, e2t, e3t], false);
        let mut next = alive.to_vec();
        for &x in &removed {
            next[x] = false;
        }
        let xr = (et.0 + 1..=e2t.0).find(|&w| next[w]);
        let yr = (e2t.1..et.1).find(|&w| next[w]);
        let (xr, yr) = match (xr, yr) {
            (None, _) => {
                let (x, extra) = left_shortcut(et);
                let mut u = removed;
                u.extend(extra);
                return (x, u);
            }
            (_, None) => {
                let (x, extra) = right_shortcut(et);
                let mut u = removed;
                u.extend(extra);
                return (x, u);
            }
            (Some(x), Some(y)) => (x, y),
        };
        let lx = self.chain_length(&next, xr);
        let ly = self.chain_length(&next, yr);
        let (w, lw) = if lx <= ly { (xr, lx) } else { (yr, ly) };
        if lw > (e1.1 - e1.0) / 2 {
            self.stats.halving_violations += 1;
        }
        let (x, mut u) = self.left_right(&next, w, depth + 1);
        u.extend(removed);
        (x, u)
    }
}

/// Cut point used when nothing survives in `]L(e_t), L(e_2t)]`. Edges leaving
/// `L(e_t)` itself are not covered by the removed sets, so that vertex is cut too.
fn left_shortcut(et: Edge) -> (usize, [usize; 2]) {
    (et.0 + 1, [et.0, et.0 + 1])
}

/// Mirror of `left_shortcut` for `[R(e_2t), R(e_t)[`.
fn right_shortcut(et: Edge) -> (usize, [usize; 2]) {
    (et.1 - 1, [et.1, et.1 - 1])
}

/// True when `x` is in `u` and no edge joins the left of `x` to its right while
/// avoiding `u`.
pub fn separates_left_right(g: &OrderedGraph, x: usize, u: &[usize]) -> bool {
    let mut inu = vec![false; g.n()];
    for &w in u {
        inu[w] = true;
    }
    inu.get(x).copied().unwrap_or(false)
        && g.edges().iter().all(|&(a, b)| !(a < x && x < b) || inu[a] || inu[b])
}

/// Cuts every live edge crossing `x` that avoids `u`. Returns whether anything changed.
fn repair(g: &OrderedGraph, x: usize, u: &mut BTreeSet<usize>) -> bool {
    let before = u.len();
    u.insert(x);
    for &(a, b) in g.edges() {
        if a < x && x < b && !u.contains(&a) && !u.contains(&b) {
            u.insert(a);
        }
    }
    u.len() != before
}

/// A vertex `x` and a set `U` separating the vertices left of `x` from those right
/// of it, with `x` taken from the interior of a maximum rainbow over `v`.
pub fn left_right_separator(g: &OrderedGraph, t: usize, v: usize) -> Result<LeftRightSeparator, SeparatorError> {
    if t == 0 {
        return Err(SeparatorError::ZeroT);
    }
    if v >= g.n() {
        return Err(SeparatorError::VertexOutOfRange(v));
    }
    let mut eng = Engine { g, t, stats: SepStats::default() };
    let alive = vec![true; g.n()];
    let over = eng.live_edges_over(&alive, v);
    let chain = longest_nested_chain(&over);
    let outer = chain.first().map(|&i| g.edges()[i]);
    let rainbow_length = outer.map_or(0, |e| e.1 - e.0);
    let (x, mut u) = eng.left_right(&alive, v, 0);
    if repair(g, x, &mut u) {
        eng.stats.repairs += 1;
    }
    let bound = size_factor(t) * log_factor(rainbow_length);
    let x_in_rainbow = x == v || outer.is_some_and(|e| inside(x, e));
    Ok(LeftRightSeparator {
        v,
        x,
        within_bound: u.len() <= bound,
        separator: u.into_iter().collect(),
        rainbow_length,
        bound,
        x_in_rainbow,
        stats: eng.stats,
    })
}

/// `A = a_only + separator`, `B = b_only + separator`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub n: usize,
    pub a_only: Vec<usize>,
    pub b_only: Vec<usize>,
    pub separator: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparationCheck {
    pub ok: bool,
    pub covers: bool,
    pub no_crossing_edge: bool,
    pub balanced: bool,
    pub min_side: usize,
    pub max_side: usize,
    pub separator_size: usize,
    pub balance: f64,
}

/// Checks a separation: the three parts partition the vertices, no edge joins
/// `a_only` to `b_only`, and each side has at most `(1 - num/den) n` vertices.
pub fn verify_separation(g: &OrderedGraph, sep: &Separation, num: usize, den: usize) -> SeparationCheck {
    let n = g.n();
    let mut side = vec![0u8; n];
    let mut covers = sep.n == n;
    for (list, tag) in [(&sep.a_only, 1u8), (&sep.b_only, 2), (&sep.separator, 3)] {
        for &v in list {
            if v >= n || side[v] != 0 {
                covers = false;
            } else {
                side[v] = tag;
            }
        }
    }
    covers &= side.iter().all(|&s| s != 0);
    let no_crossing_edge = g
        .edges()
        .iter()
        .all(|&(a, b)| !(side[a] == 1 && side[b] == 2 || side[a] == 2 && side[b] == 1));
    let (x, y) = (sep.a_only.len(), sep.b_only.len());
    let (min_side, max_side) = (x.min(y), x.max(y));
    let balanced = den > 0 && max_side * den <= (den - num.min(den)) * n;
    SeparationCheck {
        ok: covers && no_crossing_edge && balanced,
        covers,
        no_crossing_edge,
        balanced,
        min_side,
        max_side,
        separator_size: sep.separator.len(),
        balance: if n == 0 { 0.0 } else { min_side as f64 / n as f64 },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SeparatorCase {
    /// Fewer than 12 vertices: everything is in the separator.
    Small,
    /// A long rainbow of mid-length edges was found.
    Rainbow,
    /// No such rainbow; the cut is placed near the thirds of the order.
    Thirds,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalancedSeparator {
    pub separation: Separation,
    pub case: SeparatorCase,
    pub t: usize,
    /// The two cut vertices bounding the middle interval.
    pub cut_points: Option<(usize, usize)>,
    pub stats: SepStats,
}

fn mid_length(n: usize, len: usize) -> bool {
    12 * len >= n && 12 * len <= 11 * n
}

/// Splits the vertices outside `c` into two sides: the open interval `(lo, hi)` against
/// the rest, or a size-balanced packing of the components of `G - C`, whichever has
/// the larger smaller side.
fn best_separation(g: &OrderedGraph, c: &BTreeSet<usize>, lo: usize, hi: usize) -> Separation {
    let n = g.n();
    let separator: Vec<usize> = c.iter().copied().collect();
    let free: Vec<usize> = (0..n).filter(|v| !c.contains(v)).collect();
    let geometric = Separation {
        n,
        a_only: free.iter().copied().filter(|&v| lo < v && v < hi).collect(),
        b_only: free.iter().copied().filter(|&v| !(lo < v && v < hi)).collect(),
        separator: separator.clone(),
    };
    let (rest, map) = induced_ordered_subgraph(g, &free).expect("free vertices are distinct");
    let mut comps: Vec<Vec<usize>> =
        rest.components().into_iter().map(|k| k.into_iter().map(|i| map[i]).collect()).collect();
    comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for k in comps {
        if a.len() <= b.len() {
            a.extend(k);
        } else {
            b.extend(k);
        }
    }
    a.sort_unstable();
    b.sort_unstable();
    let packed = Separation { n, a_only: a, b_only: b, separator };
    let geo_ok = verify_separation(g, &geometric, 0, 1).no_crossing_edge;
    let score = |s: &Separation| s.a_only.len().min(s.b_only.len());
    let best = if geo_ok && score(&geometric) >= score(&packed) { geometric } else { packed };
    trim(g, best)
}

/// Moves separator vertices with no neighbour on one side to that side, smaller side first,
/// as long as both sides stay within `11n/12`.
fn trim(g: &OrderedGraph, mut s: Separation) -> Separation {
    let n = s.n;
    let mut side = vec![0u8; n];
    for &v in &s.a_only {
        side[v] = 1;
    }
    for &v in &s.b_only {
        side[v] = 2;
    }
    let (mut na, mut nb) = (s.a_only.len(), s.b_only.len());
    for &v in &s.separator {
        let touches = |k: u8| g.neighbors(v).iter().any(|&w| side[w] == k);
        let (ta, tb) = (touches(1), touches(2));
        let fits = |k: usize| 12 * (k + 1) <= 11 * n;
        let to = match (ta, tb) {
            (false, false) if na <= nb && fits(na) => 1,
            (false, false) if fits(nb) => 2,
            (false, false) if fits(na) => 1,
            (true, false) if fits(na) => 1,
            (false, true) if fits(nb) => 2,
            _ => 0,
        };
        side[v] = to;
        match to {
            1 => na += 1,
            2 => nb += 1,
            _ => {}
        }
    }
    let pick = |k: u8| (0..n).filter(|&v| side[v] == k).collect::<Vec<_>>();
    s.a_only = pick(1);
    s.b_only = pick(2);
    s.separator = pick(0);
    s
}

/// A separation of `g` with both sides of size at most `11n/12`, for graphs whose
/// overlap graph has no `K_{t,t}`.
pub fn balanced_separator(g: &OrderedGraph, t: usize) -> Result<BalancedSeparator, SeparatorError> {
    if t == 0 {
        return Err(SeparatorError::ZeroT);
    }
    let n = g.n();
    if n < 12 {
        return Ok(BalancedSeparator {
            separation: Separation { n, a_only: vec![], b_only: vec![], separator: (0..n).collect() },
            case: SeparatorCase::Small,
            t,
            cut_points: None,
            stats: SepStats::default(),
        });
    }
    let mut eng = Engine { g, t, stats: SepStats::default() };
    let all = vec![true; n];
    let found = (0..n).find_map(|v| {
        let cands: Vec<(usize, usize, usize)> =
            eng.live_edges_over(&all, v).into_iter().filter(|c| mid_length(n, c.1 - c.0)).collect();
        let chain = longest_nested_chain(&cands);
        (chain.len() >= 3 * t).then_some(chain)
    });
    let (c, lo, hi, case) = match found {
        Some(chain) => {
            let f = |j: usize| g.edges()[chain[j - 1]];
            let (f1, ft, f2t, f3t) = (f(1), f(t), f(2 * t), f(3 * t));
            let removed = eng.cut(&all, [f1, ft, f2t, f3t], true);
            let mut next = all.clone();
            for &x in &removed {
                next[x] = false;
            }
            let mut c = removed;
            let ux = match (ft.0 + 1..=f2t.0).find(|&w| next[w]) {
                None => {
                    let (x, extra) = left_shortcut(ft);
                    c.extend(extra);
                    x
                }
                Some(x) => {
                    let view: Vec<bool> = (0..n).map(|w| next[w] && w <= f1.1).collect();
                    let (ux, u) = eng.left_right(&view, x, 0);
                    c.extend(u);
                    ux
                }
            };
            let uy = match (f2t.1..ft.1).find(|&w| next[w]) {
                None => {
                    let (y, extra) = right_shortcut(ft);
                    c.extend(extra);
                    y
                }
                Some(y) => {
                    let view: Vec<bool> = (0..n).map(|w| next[w] && w >= f1.0).collect();
                    let (uy, u) = eng.left_right(&view, y, 0);
                    c.extend(u);
                    uy
                }
            };
            (c, ux, uy, SeparatorCase::Rainbow)
        }
        None => {
            let x = n / 3 - 1;
            let y = 2 * n / 3 - 1;
            let hx_hi = 11 * n / 12 - 1;
            let hy_lo = n.div_ceil(12) - 1;
            let mut c = BTreeSet::new();
            for &(a, b) in g.edges() {
                let long = 12 * (b - a) >= n;
                if long && ((a < x && x < b && b <= hx_hi) || (a < y && y < b && a >= hy_lo)) {
                    c.insert(a);
                }
            }
            let h: Vec<bool> = (0..n).map(|w| !c.contains(&w)).collect();
            let hx: Vec<bool> = (0..n).map(|w| h[w] && w <= hx_hi).collect();
            let hy: Vec<bool> = (0..n).map(|w| h[w] && w >= hy_lo).collect();
            let (wx, ux) = eng.left_right(&hx, x, 0);
            let (wy, uy) = eng.left_right(&hy, y, 0);
            c.extend(ux);
            c.extend(uy);
            (c, wx, wy, SeparatorCase::Thirds)
        }
    };
    let separation = best_separation(g, &c, lo, hi);
    Ok(BalancedSeparator { separation, case, t, cut_points: Some((lo, hi)), stats: eng.stats })
}

/// Tree decomposition as bags joined by undirected tree edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn validate(&self, g: &OrderedGraph) -> Result<(), SeparatorError> {
        let bad = |s: String| Err(SeparatorError::InvalidDecomposition(s));
        let k = self.bags.len();
        if k == 0 {
            return if g.n() == 0 { Ok(()) } else { bad("no bags".into()) };
        }
        if self.edges.len() + 1 != k {
            return bad(format!("{} tree edges for {} bags", self.edges.len(), k));
        }
        let mut adj = vec![Vec::new(); k];
        for &(a, b) in &self.edges {
            if a >= k || b >= k || a == b {
                return bad(format!("bad tree edge {a}-{b}"));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; k];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("bags do not form a tree".into());
        }
        let mut holders: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= g.n() {
                    return bad(format!("vertex {v} out of range"));
                }
                holders[v].push(i);
            }
        }
        let mut in_bag: Vec<BTreeSet<usize>> = Vec::with_capacity(k);
        for bag in &self.bags {
            in_bag.push(bag.iter().copied().collect());
        }
        for (v, hs) in holders.iter().enumerate() {
            if hs.is_empty() {
                return bad(format!("vertex {v} is in no bag"));
            }
            let links = self.edges.iter().filter(|&&(a, b)| in_bag[a].contains(&v) && in_bag[b].contains(&v)).count();
            if links + 1 != hs.len() {
                return bad(format!("bags holding vertex {v} are not connected"));
            }
        }
        for &(a, b) in g.edges() {
            if !holders[a].iter().any(|&i| in_bag[i].contains(&b)) {
                return bad(format!("edge {a}-{b} is in no bag"));
            }
        }
        Ok(())
    }
}

/// Elimination by repeatedly removing a vertex of minimum degree in the fill graph.
/// Returns bags and tree edges over local indices `0..adj.len()`.
fn eliminate(mut adj: Vec<BTreeSet<usize>>) -> (Vec<Vec<usize>>, Vec<(usize, usize)>) {
    let k = adj.len();
    let mut gone = vec![false; k];
    let mut rank = vec![usize::MAX; k];
    let mut nbrs_at: Vec<Vec<usize>> = vec![Vec::new(); k];
    for step in 0..k {
        let v = (0..k).filter(|&v| !gone[v]).min_by_key(|&v| (adj[v].len(), v)).expect("vertices remain");
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for (i, &a) in nb.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nb[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        gone[v] = true;
        rank[v] = step;
        nbrs_at[v] = nb;
    }
    let mut bags = vec![Vec::new(); k];
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for v in 0..k {
        let mut bag = nbrs_at[v].clone();
        bag.push(v);
        bag.sort_unstable();
        bags[v] = bag;
        match nbrs_at[v].iter().min_by_key(|&&u| rank[u]) {
            Some(&p) => edges.push((v, p)),
            None => roots.push(v),
        }
    }
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    (bags, edges)
}

/// Tree decomposition from a minimum-degree elimination order.
pub fn min_degree_decomposition(g: &OrderedGraph) -> TreeDecomposition {
    let adj: Vec<BTreeSet<usize>> = (0..g.n()).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    if g.n() == 0 {
        return TreeDecomposition { bags: vec![], edges: vec![] };
    }
    let (bags, edges) = eliminate(adj);
    TreeDecomposition { bags, edges }
}

struct Builder<'a> {
    g: &'a OrderedGraph,
    t: usize,
    bags: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Builder<'_> {
    fn add_bag(&mut self, mut bag: Vec<usize>, parent: Option<usize>) -> usize {
        bag.sort_unstable();
        bag.dedup();
        self.bags.push(bag);
        let id = self.bags.len() - 1;
        if let Some(p) = parent {
            self.edges.push((id, p));
        }
        id
    }

    fn boundary(&self, part: &[usize], within: &BTreeSet<usize>) -> Vec<usize> {
        let mut out = BTreeSet::new();
        for &v in part {
            for &u in self.g.neighbors(v) {
                if within.contains(&u) {
                    out.insert(u);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Elimination decomposition of `G[w + iface]` with `iface` made a clique, hung
    /// below `parent` at a bag holding all of `iface`.
    fn leaf(&mut self, w: &[usize], iface: &[usize], parent: usize) {
        let verts: Vec<usize> = w.iter().chain(iface).copied().collect::<BTreeSet<_>>().into_iter().collect();
        let local = |x: usize| verts.binary_search(&x).expect("vertex is local");
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); verts.len()];
        for (i, &v) in verts.iter().enumerate() {
            for &u in self.g.neighbors(v) {
                if let Ok(j) = verts.binary_search(&u) {
                    adj[i].insert(j);
                }
            }
        }
        for (i, &a) in iface.iter().enumerate() {
            for &b in &iface[i + 1..] {
                adj[local(a)].insert(local(b));
                adj[local(b)].insert(local(a));
            }
        }
        let (bags, edges) = eliminate(adj);
        let offset = self.bags.len();
        for bag in &bags {
            self.bags.push(bag.iter().map(|&i| verts[i]).collect());
        }
        for (a, b) in edges {
            self.edges.push((a + offset, b + offset));
        }
        let anchor = (offset..self.bags.len())
            .find(|&i| iface.iter().all(|x| self.bags[i].binary_search(x).is_ok()))
            .expect("a clique lies in some bag");
        self.edges.push((anchor, parent));
    }

    fn build(&mut self, w: Vec<usize>, iface: Vec<usize>, parent: usize) -> Result<(), SeparatorError> {
        let (sub, map) = induced_ordered_subgraph(self.g, &w)?;
        let comps = sub.components();
        if comps.len() > 1 {
            for k in comps {
                let part: Vec<usize> = k.into_iter().map(|i| map[i]).collect();
                let iface_set: BTreeSet<usize> = iface.iter().copied().collect();
                let sub_iface = self.boundary(&part, &iface_set);
                self.build(part, sub_iface, parent)?;
            }
            return Ok(());
        }
        if w.len() <= LEAF_SIZE {
            self.leaf(&w, &iface, parent);
            return Ok(());
        }
        let sep = balanced_separator(&sub, self.t)?;
        let c: Vec<usize> = sep.separation.separator.iter().map(|&i| map[i]).collect();
        if c.is_empty() || c.len() == w.len() {
            self.leaf(&w, &iface, parent);
            return Ok(());
        }
        let mut bag = c.clone();
        bag.extend(&iface);
        let node = self.add_bag(bag.clone(), Some(parent));
        let bag_set: BTreeSet<usize> = bag.into_iter().collect();
        let c_set: BTreeSet<usize> = c.into_iter().collect();
        let rest: Vec<usize> = w.iter().copied().filter(|v| !c_set.contains(v)).collect();
        let (rg, rmap) = induced_ordered_subgraph(self.g, &rest)?;
        for k in rg.components() {
            let part: Vec<usize> = k.into_iter().map(|i| rmap[i]).collect();
            let sub_iface = self.boundary(&part, &bag_set);
            self.build(part, sub_iface, node)?;
        }
        Ok(())
    }
}

/// Tree decomposition by recursive balanced separators. Small components are
/// finished with a minimum-degree elimination.
pub fn tree_decomposition(g: &OrderedGraph, t: usize) -> Result<TreeDecomposition, SeparatorError> {
    if t == 0 {
        return Err(SeparatorError::ZeroT);
    }
    let mut b = Builder { g, t, bags: Vec::new(), edges: Vec::new() };
    if g.n() == 0 {
        return Ok(TreeDecomposition { bags: vec![], edges: vec![] });
    }
    let root = b.add_bag(Vec::new(), None);
    b.build((0..g.n()).collect(), Vec::new(), root)?;
    let td = TreeDecomposition { bags: b.bags, edges: b.edges };
    td.validate(g)?;
    Ok(td)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_factor_values() {
        assert_eq!(log_factor(0), 1);
        assert_eq!(log_factor(1), 2);
        assert_eq!(log_factor(3), 3);
        assert_eq!(log_factor(4), 4);
    }

    #[test]
    fn path_decomposes_thinly() {
        let edges: Vec<(usize, usize)> = (0..9).map(|i| (i, i + 1)).collect();
        let g = OrderedGraph::new(10, &edges).unwrap();
        assert!(tree_decomposition(&g, 2).unwrap().width() <= 2);
    }

    #[test]
    fn edgeless_has_width_zero() {
        let g = OrderedGraph::new(20, &[]).unwrap();
        assert_eq!(tree_decomposition(&g, 1).unwrap().width(), 0);
    }
}
