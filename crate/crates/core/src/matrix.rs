//! Symmetric 0/1 matrices, symmetric divisions, wide parts and the greedy
//! diagonal-division approximation of stretch-width.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{GraphError, OrderedGraph, PartitionSequence, VertexPartition};
use crate::stretch::{bottleneck_search, partition_of_rgs, stretch_from_spans, verify_with, PartitionStretch, StretchError, StretchReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("invalid division: {0}")]
    InvalidDivision(String),
    #[error("division chain is broken at step {0}")]
    InvalidChain(usize),
    #[error("division at step {step} is not {q}-diagonal: block {block} is {q}-wide")]
    NotDiagonal { step: usize, block: usize, q: usize },
    #[error("class partition at step {0} does not coarsen the previous one")]
    NotRefinement(usize),
    #[error("k must be at least 1")]
    ZeroK,
    #[error("verified stretch {stretch} exceeds the bound {bound}")]
    BoundViolated { stretch: usize, bound: u128 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Stretch(#[from] StretchError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymBitMatrix {
    n: usize,
    rows: Vec<FixedBitSet>,
}

impl SymBitMatrix {
    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self, MatrixError> {
        let n = rows.len();
        let mut bits = Vec::with_capacity(n);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(MatrixError::NotSquare { row: i, len: r.len(), n });
            }
            let mut b = FixedBitSet::with_capacity(n);
            for (j, &x) in r.iter().enumerate() {
                b.set(j, x);
            }
            bits.push(b);
        }
        for i in 0..n {
            for j in i + 1..n {
                if bits[i].contains(j) != bits[j].contains(i) {
                    return Err(MatrixError::NotSymmetric(i, j));
                }
            }
        }
        Ok(SymBitMatrix { n, rows: bits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    pub fn row(&self, i: usize) -> &FixedBitSet {
        &self.rows[i]
    }

    pub fn to_rows(&self) -> Vec<Vec<bool>> {
        self.rows.iter().map(|r| (0..self.n).map(|j| r.contains(j)).collect()).collect()
    }
}

/// Adjacency matrix of an ordered graph, rows and columns in vertex order.
pub fn adjacency_matrix(g: &OrderedGraph) -> SymBitMatrix {
    let n = g.n();
    let rows = (0..n)
        .map(|v| {
            let mut b = FixedBitSet::with_capacity(n);
            for &u in g.neighbors(v) {
                b.insert(u);
            }
            b
        })
        .collect();
    SymBitMatrix { n, rows }
}

/// A division of `0..n` into consecutive blocks, used for rows and columns alike.
/// `bounds` runs `0 = b_0 < b_1 < ... < b_p = n`; block `i` is `b_i..b_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymDivision {
    bounds: Vec<usize>,
}

impl SymDivision {
    pub fn new(bounds: Vec<usize>) -> Result<Self, MatrixError> {
        if bounds.len() < 2 || bounds[0] != 0 {
            return Err(MatrixError::InvalidDivision("bounds must start at 0 and contain n".into()));
        }
        if bounds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(MatrixError::InvalidDivision("bounds must be strictly increasing".into()));
        }
        Ok(SymDivision { bounds })
    }

    pub fn finest(n: usize) -> Self {
        SymDivision { bounds: (0..=n).collect() }
    }

    pub fn coarsest(n: usize) -> Self {
        SymDivision { bounds: vec![0, n] }
    }

    pub fn n(&self) -> usize {
        *self.bounds.last().unwrap()
    }

    pub fn bounds(&self) -> &[usize] {
        &self.bounds
    }

    pub fn len(&self) -> usize {
        self.bounds.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn block(&self, i: usize) -> std::ops::Range<usize> {
        self.bounds[i]..self.bounds[i + 1]
    }

    /// Merges block `i` with block `i + 1`.
    pub fn merge(&self, i: usize) -> SymDivision {
        let mut bounds = self.bounds.clone();
        bounds.remove(i + 1);
        SymDivision { bounds }
    }

    /// Blocks `(0,1), (2,3), ...`; with an odd count the last three blocks form one.
    pub fn pairwise_merged(&self) -> SymDivision {
        let p = self.len();
        if p <= 1 {
            return self.clone();
        }
        let mut bounds: Vec<usize> = (0..p).step_by(2).map(|i| self.bounds[i]).collect();
        if p % 2 == 1 {
            bounds.pop();
        }
        bounds.push(self.n());
        SymDivision { bounds }
    }

    pub fn as_partition(&self) -> VertexPartition {
        let mut labels = vec![0; self.n()];
        for i in 0..self.len() {
            for v in self.block(i) {
                labels[v] = i;
            }
        }
        VertexPartition::from_labels(&labels)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisionSequence {
    /// Finest first, coarsest last; each step merges two consecutive blocks.
    pub chain: Vec<SymDivision>,
}

impl DivisionSequence {
    pub fn validate(&self, n: usize) -> Result<(), MatrixError> {
        let first = self.chain.first().ok_or(MatrixError::InvalidChain(0))?;
        if *first != SymDivision::finest(n) {
            return Err(MatrixError::InvalidChain(0));
        }
        for (s, w) in self.chain.windows(2).enumerate() {
            let (a, b) = (&w[0].bounds, &w[1].bounds);
            let ok = b.len() + 1 == a.len() && {
                let mut it = a.iter().filter(|x| !b.contains(x));
                it.next().is_some() && it.next().is_none()
            };
            if !ok {
                return Err(MatrixError::InvalidChain(s + 1));
            }
        }
        if n > 0 && self.chain.last().map(SymDivision::len) != Some(1) {
            return Err(MatrixError::InvalidChain(self.chain.len() - 1));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GreedyOutcome {
    Chain(DivisionSequence),
    /// The greedy merge got stuck at `reached`; `witness` is its pairwise merge.
    Stuck { reached: SymDivision, witness: SymDivision },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ApproxOutcome {
    Success {
        k: usize,
        q: usize,
        sequence: PartitionSequence,
        divisions: DivisionSequence,
        verified_stretch: usize,
        bound: u128,
    },
    /// No sequence was built; `witness` is a division every block of which is
    /// `wide_k`-wide, which certifies stretch-width above `k`.
    Refusal { k: usize, q: usize, witness: SymDivision, wide_k: usize, witness_checked: bool },
}

/// Kept columns: everything outside blocks `lo..=hi`.
fn columns_outside(d: &SymDivision, lo: usize, hi: usize) -> FixedBitSet {
    let n = d.n();
    let mut keep = FixedBitSet::with_capacity(n);
    keep.insert_range(..);
    keep.remove_range(d.bounds[lo]..d.bounds[hi + 1]);
    keep
}

/// Distinct rows among `rows` once restricted to `keep`. Zero when nothing is kept.
fn distinct_rows(m: &SymBitMatrix, rows: std::ops::Range<usize>, keep: &FixedBitSet) -> usize {
    if keep.is_clear() {
        return 0;
    }
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    for i in rows {
        let mut r = m.rows[i].clone();
        r.intersect_with(keep);
        seen.insert(r);
    }
    seen.len()
}

/// Distinct rows of block `i` after deleting column blocks `i-k+1 ..= i+k-1`.
pub fn distinct_rows_outside_band(m: &SymBitMatrix, d: &SymDivision, i: usize, k: usize) -> usize {
    let p = d.len();
    let lo = i.saturating_sub(k.saturating_sub(1));
    let hi = (i + k.saturating_sub(1)).min(p - 1);
    distinct_rows(m, d.block(i), &columns_outside(d, lo, hi))
}

/// The distinct clipped windows of `k` consecutive blocks containing block `i`,
/// out of `p` blocks, as inclusive block ranges.
pub(crate) fn windows(i: usize, k: usize, p: usize) -> Vec<(usize, usize)> {
    let (i, k, p) = (i as i64, k as i64, p as i64);
    let lo = i - k + 1;
    let clip = |j: i64| (j.max(0) as usize, (j + k - 1).min(p - 1) as usize);
    let mut out: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in lo.max(0)..=i {
        out.insert(clip(j));
    }
    for j in lo..=i.min(p - k).min(-1) {
        out.insert(clip(j));
    }
    let whole = lo.max(p - k + 1);
    if whole <= i && whole < 0 {
        out.insert(clip(whole));
    }
    out.into_iter().collect()
}

/// Block `i` is `k`-wide when deleting any `k` consecutive column blocks around it
/// still leaves at least `k` distinct rows.
pub fn is_part_wide(m: &SymBitMatrix, d: &SymDivision, i: usize, k: usize) -> bool {
    windows(i, k, d.len())
        .into_iter()
        .all(|(lo, hi)| distinct_rows(m, d.block(i), &columns_outside(d, lo, hi)) >= k)
}

pub fn is_diagonal(m: &SymBitMatrix, d: &SymDivision, q: usize) -> bool {
    (0..d.len()).all(|i| !is_part_wide(m, d, i, q))
}

/// Starting from the finest division, repeatedly merges the leftmost pair of
/// consecutive blocks that keeps the division `q`-diagonal.
pub fn greedy_diagonal_sequence(m: &SymBitMatrix, q: usize) -> GreedyOutcome {
    let n = m.n();
    let mut d = SymDivision::finest(n);
    let mut chain = vec![d.clone()];
    while d.len() > 1 {
        // Only the merged block can turn wide: every other block keeps its rows and
        // loses at least as many columns to each window.
        let step = (0..d.len() - 1).find_map(|i| {
            let cand = d.merge(i);
            (!is_part_wide(m, &cand, i, q)).then_some(cand)
        });
        match step {
            Some(next) => {
                d = next;
                chain.push(d.clone());
            }
            None => {
                let witness = d.pairwise_merged();
                return GreedyOutcome::Stuck { reached: d, witness };
            }
        }
    }
    GreedyOutcome::Chain(DivisionSequence { chain })
}

/// Lexicographic order on bit vectors read from column 0.
fn lex_cmp(a: &FixedBitSet, b: &FixedBitSet) -> Ordering {
    match a.symmetric_difference(b).min() {
        None => Ordering::Equal,
        Some(x) if a.contains(x) => Ordering::Greater,
        Some(_) => Ordering::Less,
    }
}

/// Classes of equal rows inside each block, ignoring the band of `q` blocks around
/// it. Classes are listed by block, then by the lexicographic rank of their row.
fn band_classes(m: &SymBitMatrix, d: &SymDivision, q: usize) -> Vec<Vec<usize>> {
    let p = d.len();
    let mut out = Vec::new();
    for i in 0..p {
        let lo = i.saturating_sub(q - 1);
        let hi = (i + q - 1).min(p - 1);
        let keep = columns_outside(d, lo, hi);
        let mut rows: Vec<(FixedBitSet, usize)> = d
            .block(i)
            .map(|r| {
                let mut b = m.rows[r].clone();
                b.intersect_with(&keep);
                (b, r)
            })
            .collect();
        rows.sort_by(|x, y| lex_cmp(&x.0, &y.0).then(x.1.cmp(&y.1)));
        let mut start = 0;
        for j in 1..=rows.len() {
            if j == rows.len() || lex_cmp(&rows[j].0, &rows[start].0) != Ordering::Equal {
                let mut class: Vec<usize> = rows[start..j].iter().map(|x| x.1).collect();
                class.sort_unstable();
                out.push(class);
                start = j;
            }
        }
    }
    out
}

/// Builds a partition sequence from a chain of `q`-diagonal divisions. Each division
/// contributes the partition into classes of equal rows outside its band; the merges
/// between consecutive class partitions follow block index, then row rank.
pub fn sequence_from_divisions(
    m: &SymBitMatrix,
    chain: &DivisionSequence,
    q: usize,
) -> Result<PartitionSequence, MatrixError> {
    let n = m.n();
    chain.validate(n)?;
    if q == 0 {
        return Err(MatrixError::ZeroK);
    }
    for (step, d) in chain.chain.iter().enumerate() {
        if let Some(block) = (0..d.len()).find(|&i| is_part_wide(m, d, i, q)) {
            return Err(MatrixError::NotDiagonal { step, block, q });
        }
    }
    let classes: Vec<Vec<Vec<usize>>> = chain.chain.iter().map(|d| band_classes(m, d, q)).collect();
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    for s in 1..classes.len() {
        let (fine, coarse) = (&classes[s - 1], &classes[s]);
        let mut fine_of = vec![0; n];
        for (c, class) in fine.iter().enumerate() {
            for &v in class {
                fine_of[v] = c;
            }
        }
        let mut coarse_of = vec![0; n];
        for (c, class) in coarse.iter().enumerate() {
            for &v in class {
                coarse_of[v] = c;
            }
        }
        for class in fine {
            if class.iter().any(|&v| coarse_of[v] != coarse_of[class[0]]) {
                return Err(MatrixError::NotRefinement(s));
            }
        }
        for class in coarse {
            let mut parts: Vec<usize> = class.iter().map(|&v| fine_of[v]).collect();
            parts.sort_unstable();
            parts.dedup();
            let mut acc = fine[parts[0]][0];
            for &c in &parts[1..] {
                let rep = fine[c][0];
                merges.push((acc, rep));
                acc = acc.min(rep);
            }
        }
    }
    Ok(PartitionSequence::new(n, merges)?)
}

/// Stretch of a symmetric partition of a matrix. For each row part, the column parts
/// that are its own symmetric part or meet it in a non-constant zone span an
/// interval; the value counts the other column parts meeting that interval.
pub fn matrix_partition_stretch(m: &SymBitMatrix, p: &VertexPartition) -> PartitionStretch {
    let mut ones: HashMap<(usize, usize), usize> = HashMap::new();
    for i in 0..m.n {
        let a = p.block_of(i);
        for j in m.rows[i].ones() {
            *ones.entry((a, p.block_of(j))).or_insert(0) += 1;
        }
    }
    let k = p.len();
    let mut red = vec![Vec::new(); k];
    for (&(a, b), &c) in &ones {
        if a != b && c < p.block(a).len() * p.block(b).len() {
            red[a].push(b);
        }
    }
    let spans: Vec<(usize, usize)> = p.blocks().iter().map(|b| (b[0], b[b.len() - 1])).collect();
    let per_part = stretch_from_spans(&spans, &red);
    PartitionStretch { max: per_part.iter().copied().max().unwrap_or(0), per_part }
}

pub fn verify_matrix_sequence(m: &SymBitMatrix, seq: &PartitionSequence) -> Result<StretchReport, MatrixError> {
    Ok(verify_with(m.n(), seq, |p| matrix_partition_stretch(m, p))?)
}

/// Exact matrix stretch-width in the given order, by the same lattice search as the
/// graph version.
pub fn exact_matrix_stw(m: &SymBitMatrix, limit: usize) -> Result<(usize, PartitionSequence), MatrixError> {
    let n = m.n();
    if n > limit.min(16) {
        return Err(StretchError::TooLarge { n, limit: limit.min(16) }.into());
    }
    let (value, merges) = bottleneck_search(n, usize::MAX, |rgs| matrix_partition_stretch(m, &partition_of_rgs(rgs)).max)
        .expect("uncapped search always reaches the coarsest partition");
    Ok((value, PartitionSequence::new(n, merges)?))
}

/// `32 (9k + 1)^3`, the stretch guaranteed by a successful approximation.
pub fn approx_bound(k: usize) -> u128 {
    let base = 9 * k as u128 + 1;
    32 * base * base * base
}

/// Either a sequence of stretch at most `32 (9k+1)^3`, or a division certifying that
/// the stretch-width exceeds `k`.
pub fn approx_stw(m: &SymBitMatrix, k: usize) -> Result<ApproxOutcome, MatrixError> {
    if k == 0 {
        return Err(MatrixError::ZeroK);
    }
    let q = 2 * (9 * k + 1);
    match greedy_diagonal_sequence(m, q) {
        GreedyOutcome::Chain(divisions) => {
            let sequence = sequence_from_divisions(m, &divisions, q)?;
            let report = verify_matrix_sequence(m, &sequence)?;
            let bound = approx_bound(k);
            if report.max_stretch as u128 > bound {
                return Err(MatrixError::BoundViolated { stretch: report.max_stretch, bound });
            }
            Ok(ApproxOutcome::Success { k, q, sequence, divisions, verified_stretch: report.max_stretch, bound })
        }
        GreedyOutcome::Stuck { witness, .. } => {
            let wide_k = 9 * k;
            let witness_checked = (0..witness.len()).all(|i| is_part_wide(m, &witness, i, wide_k));
            Ok(ApproxOutcome::Refusal { k, q, witness, wide_k, witness_checked })
        }
    }
}
