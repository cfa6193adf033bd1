//! Brute-force reference implementations used across the integration tests.
//! They work straight from the definitions and share no code with the library.
#![allow(dead_code)]

use std::collections::HashSet;

use proptest::prelude::*;
use stw_core::matrix::{SymBitMatrix, SymDivision};
use stw_core::OrderedGraph;

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

/// Every labelled graph on `n` vertices, indexed by the bitmask over `pairs(n)`.
pub fn all_graphs(n: usize) -> Vec<OrderedGraph> {
    let p = pairs(n);
    (0..1u32 << p.len())
        .map(|mask| {
            let edges: Vec<(usize, usize)> =
                p.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            OrderedGraph::new(n, &edges).unwrap()
        })
        .collect()
}

pub fn mask_of(g: &OrderedGraph) -> u32 {
    pairs(g.n()).iter().enumerate().filter(|(_, &(u, v))| g.has_edge(u, v)).fold(0, |m, (i, _)| m | 1 << i)
}

/// Set partitions of `0..n`, blocks sorted and listed by smallest element.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(v: usize, n: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if v == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(v);
            go(v + 1, n, cur, out);
            cur[b].pop();
        }
        cur.push(vec![v]);
        go(v + 1, n, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

/// Pairs of block indices joined by both an edge and a non-edge.
pub fn red_pairs(g: &OrderedGraph, blocks: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            let mut edges = 0;
            for &x in &blocks[i] {
                for &y in &blocks[j] {
                    if g.has_edge(x, y) {
                        edges += 1;
                    }
                }
            }
            if edges > 0 && edges < blocks[i].len() * blocks[j].len() {
                out.push((i, j));
            }
        }
    }
    out
}

/// Stretch of every block: other blocks whose hull meets the hull of the block and
/// its red neighbours.
pub fn stretches(g: &OrderedGraph, blocks: &[Vec<usize>]) -> Vec<usize> {
    let red = red_pairs(g, blocks);
    let hull = |b: &[usize]| (*b.iter().min().unwrap(), *b.iter().max().unwrap());
    (0..blocks.len())
        .map(|x| {
            let mut members: Vec<usize> = blocks[x].clone();
            for &(i, j) in &red {
                if i == x {
                    members.extend(&blocks[j]);
                }
                if j == x {
                    members.extend(&blocks[i]);
                }
            }
            let (lo, hi) = hull(&members);
            (0..blocks.len())
                .filter(|&y| y != x)
                .filter(|&y| {
                    let (a, b) = hull(&blocks[y]);
                    a <= hi && b >= lo
                })
                .count()
        })
        .collect()
}

pub fn max_stretch(g: &OrderedGraph, blocks: &[Vec<usize>]) -> usize {
    stretches(g, blocks).into_iter().max().unwrap_or(0)
}

/// Minimum over every chain of single merges of the largest stretch met on the way.
pub fn chain_minimax(g: &OrderedGraph) -> usize {
    fn go(g: &OrderedGraph, blocks: Vec<Vec<usize>>) -> usize {
        let here = max_stretch(g, &blocks);
        if blocks.len() <= 1 {
            return here;
        }
        let mut sub = usize::MAX;
        for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                let mut next: Vec<Vec<usize>> = Vec::with_capacity(blocks.len() - 1);
                for (k, b) in blocks.iter().enumerate() {
                    if k != j {
                        next.push(b.clone());
                    }
                }
                next[i].extend(&blocks[j]);
                next[i].sort_unstable();
                sub = sub.min(go(g, next));
            }
        }
        here.max(sub)
    }
    go(g, (0..g.n()).map(|v| vec![v]).collect())
}

pub fn mis_brute(g: &OrderedGraph) -> usize {
    let n = g.n();
    let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).iter().fold(0, |m, &u| m | 1 << u)).collect();
    (0u32..1 << n)
        .filter(|&s| (0..n).all(|v| s >> v & 1 == 0 || adj[v] & s == 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

pub fn crossing(e: (usize, usize), f: (usize, usize)) -> bool {
    (e.0 < f.0 && f.0 < e.1 && e.1 < f.1) || (f.0 < e.0 && e.0 < f.1 && f.1 < e.1)
}

/// Largest `s` with disjoint edge sets `X`, `Y` of size `s`, every left end in `X`
/// before every left end in `Y`, and all pairs crossing. Exponential; tiny graphs only.
pub fn max_clean_biclique(g: &OrderedGraph) -> usize {
    let e = g.edges();
    let m = e.len();
    let mut best = 0;
    for xs in 1u32..1 << m {
        let x: Vec<usize> = (0..m).filter(|&i| xs >> i & 1 == 1).collect();
        let s = x.len();
        if s <= best {
            continue;
        }
        let max_left = x.iter().map(|&i| e[i].0).max().unwrap();
        let ys: Vec<usize> =
            (0..m).filter(|&j| e[j].0 > max_left && x.iter().all(|&i| crossing(e[i], e[j]))).collect();
        if ys.len() >= s {
            best = s;
        }
    }
    best
}

/// Longest sequence of edges, each strictly inside the previous one, all having `v`
/// strictly inside.
pub fn max_rainbow(g: &OrderedGraph, v: usize) -> usize {
    let over: Vec<(usize, usize)> = g.edges().iter().copied().filter(|&(a, b)| a < v && v < b).collect();
    let mut sorted = over.clone();
    sorted.sort_by_key(|&(a, b)| (b - a, a));
    let mut best = vec![1usize; sorted.len()];
    for i in 0..sorted.len() {
        for j in 0..i {
            let (inner, outer) = (sorted[j], sorted[i]);
            if outer.0 <= inner.0 && inner.1 <= outer.1 && inner != outer {
                best[i] = best[i].max(best[j] + 1);
            }
        }
    }
    best.into_iter().max().unwrap_or(0)
}

/// Ordered graphs on `1..=max_n` vertices, each pair kept with probability `1/2`.
pub fn arb_graph(max_n: usize) -> impl Strategy<Value = OrderedGraph> {
    (1..=max_n).prop_flat_map(|n| {
        let p = pairs(n);
        proptest::collection::vec(any::<bool>(), p.len()).prop_map(move |keep| {
            let e: Vec<(usize, usize)> = p.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e).collect();
            OrderedGraph::new(n, &e).unwrap()
        })
    })
}

/// Ordered graphs on `n` vertices with at most `max_m` edges.
pub fn arb_sparse_graph(n: usize, max_m: usize) -> impl Strategy<Value = OrderedGraph> {
    let p = pairs(n);
    let hi = max_m.min(p.len());
    proptest::sample::subsequence(p, 0..=hi).prop_map(move |e| OrderedGraph::new(n, &e).unwrap())
}

/// Definition of wideness by enumeration of every window of `k` consecutive blocks
/// containing `i`; a window that deletes every column leaves no row vector.
pub fn wide(m: &SymBitMatrix, d: &SymDivision, i: usize, k: usize) -> bool {
    let p = d.len() as i64;
    let rows = m.to_rows();
    let b = d.bounds();
    ((i as i64 - k as i64 + 1)..=i as i64).all(|start| {
        let lo = start.max(0) as usize;
        let hi = (start + k as i64 - 1).min(p - 1) as usize;
        let cols: Vec<usize> = (0..m.n()).filter(|&c| c < b[lo] || c >= b[hi + 1]).collect();
        let distinct: HashSet<Vec<bool>> = if cols.is_empty() {
            HashSet::new()
        } else {
            (b[i]..b[i + 1]).map(|r| cols.iter().map(|&c| rows[r][c]).collect()).collect()
        };
        distinct.len() >= k
    })
}
