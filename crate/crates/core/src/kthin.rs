//! `Q(n, k)`: the least number of k-thin sets partitioning `Z_2^n`.
//!
//! A set is k-thin iff it is independent in the conflict graph joining words
//! at distance `1..=k-1` (the `(k-1)`-th power of the hypercube), so `Q(n, k)`
//! is that graph's chromatic number. It is computed exactly by DSATUR
//! branch and bound, seeded with a greedy DSATUR upper bound and lower
//! bounds from cliques and from `|V| / α`.

use serde::Serialize;

use crate::bitstream::Word;
use crate::error::{Error, Result};
use crate::FiniteCode;

/// Limits for the exact search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Largest `n` accepted for `k = 2`.
    pub max_n_k2: usize,
    /// Largest `n` accepted for `k >= 3`.
    pub max_n: usize,
    /// Search nodes before giving up and reporting an interval.
    pub node_limit: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_n_k2: 10,
            max_n: 5,
            node_limit: 5_000_000,
        }
    }
}

impl Budget {
    fn max_n_for(&self, k: usize) -> usize {
        if k == 2 {
            self.max_n_k2
        } else {
            self.max_n
        }
    }
}

/// Words at distance `1..=k-1` are in conflict: they cannot share a part.
#[derive(Debug, Clone)]
pub struct ConflictGraph {
    pub n: usize,
    pub k: usize,
    adjacency: Vec<Vec<usize>>,
    matrix: Vec<bool>,
}

impl ConflictGraph {
    /// Vertices are the words of `Z_2^n` by lexicographic rank.
    pub fn new(n: usize, k: usize) -> Self {
        let size = 1usize << n;
        let mut adjacency = vec![Vec::new(); size];
        let mut matrix = vec![false; size * size];
        for u in 0..size {
            for v in u + 1..size {
                let d = (u ^ v).count_ones() as usize;
                if d < k {
                    adjacency[u].push(v);
                    adjacency[v].push(u);
                    matrix[u * size + v] = true;
                    matrix[v * size + u] = true;
                }
            }
        }
        ConflictGraph {
            n,
            k,
            adjacency,
            matrix,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.matrix[u * self.vertex_count() + v]
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    pub fn word(&self, v: usize) -> Word {
        Word::from_rank(v as u64, self.n)
    }

    /// A proper coloring: no edge joins two vertices of the same color.
    pub fn is_proper(&self, colors: &[usize]) -> bool {
        colors.len() == self.vertex_count()
            && (0..colors.len()).all(|u| self.adjacency[u].iter().all(|&v| colors[u] != colors[v]))
    }
}

/// Lower bound from the words of weight at most `r = ⌊(k-1)/2⌋`: any two
/// are within distance `2r <= k - 1`, so each part holds at most one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    pub radius: usize,
    /// `|S| = Σ_{j<=r} C(n, j)`.
    pub ball: u64,
    /// `C(n, r)`, the weaker binomial form.
    pub binomial: u64,
}

pub fn binomial(n: usize, r: usize) -> u64 {
    if r > n {
        return 0;
    }
    (0..r as u64).fold(1u64, |acc, i| acc * (n as u64 - i) / (i + 1))
}

pub fn q_lower_bound(n: usize, k: usize) -> Result<LowerBound> {
    check_range(n, k)?;
    let radius = (k - 1) / 2;
    Ok(LowerBound {
        radius,
        ball: (0..=radius).map(|j| binomial(n, j)).sum(),
        binomial: binomial(n, radius),
    })
}

/// The set `S` of words of weight at most `⌊(k-1)/2⌋`.
pub fn lower_bound_set(n: usize, k: usize) -> Result<Vec<Word>> {
    check_range(n, k)?;
    let radius = (k - 1) / 2;
    Ok(Word::all(n).filter(|x| x.weight() <= radius).collect())
}

fn check_range(n: usize, k: usize) -> Result<()> {
    if k < 2 || k > n {
        return Err(Error::InvalidArgument(format!(
            "need 2 <= k <= n, got n = {n}, k = {k}"
        )));
    }
    Ok(())
}

/// A partition of `Z_2^n` into parts claimed to be k-thin.
#[derive(Debug, Clone, Serialize)]
pub struct PartitionCertificate {
    pub n: usize,
    pub k: usize,
    pub parts: Vec<FiniteCode>,
}

impl PartitionCertificate {
    pub fn check(&self) -> PartitionCheck {
        verify_partition(&self.parts, self.n, self.k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionCheck {
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl PartitionCheck {
    fn fail(msg: String) -> Self {
        PartitionCheck {
            valid: false,
            witness: Some(msg),
        }
    }
}

/// Parts are pairwise disjoint, cover `Z_2^n` and are each k-thin.
pub fn verify_partition(parts: &[FiniteCode], n: usize, k: usize) -> PartitionCheck {
    if n >= 32 {
        return PartitionCheck::fail(format!("Z_2^{n} is too large to check"));
    }
    let mut owner: Vec<Option<usize>> = vec![None; 1 << n];
    for (p, part) in parts.iter().enumerate() {
        if part.n() != n {
            return PartitionCheck::fail(format!("part {p} has length {}, expected {n}", part.n()));
        }
        for x in part.members() {
            let slot = &mut owner[x.rank() as usize];
            if let Some(q) = *slot {
                return PartitionCheck::fail(format!("{x} lies in parts {q} and {p}"));
            }
            *slot = Some(p);
        }
        if part.len() >= 2 {
            let (d, i, j) = part.closest_pair().expect("two members");
            if !d.at_least(k as u64) {
                return PartitionCheck::fail(format!(
                    "part {p} is not {k}-thin: {} and {} at distance {d}",
                    part.members()[i],
                    part.members()[j]
                ));
            }
        }
    }
    if let Some(r) = owner.iter().position(Option::is_none) {
        return PartitionCheck::fail(format!("{} is in no part", Word::from_rank(r as u64, n)));
    }
    PartitionCheck {
        valid: true,
        witness: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum QValue {
    Exact {
        value: usize,
    },
    /// The search budget ran out between these bounds.
    Interval {
        lo: usize,
        hi: usize,
    },
}

impl QValue {
    pub fn exact(self) -> Option<usize> {
        match self {
            QValue::Exact { value } => Some(value),
            QValue::Interval { .. } => None,
        }
    }

    pub fn upper(self) -> usize {
        match self {
            QValue::Exact { value } => value,
            QValue::Interval { hi, .. } => hi,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct QResult {
    pub n: usize,
    pub k: usize,
    pub lower_bound: LowerBound,
    pub clique_bound: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub independence_ratio_bound: Option<usize>,
    pub value: QValue,
    pub search_nodes: u64,
    /// A verified partition with `value.upper()` parts.
    pub witness: PartitionCertificate,
}

/// Exact `Q(n, k)` with a verified witness partition. If the node limit
/// runs out first, the value is an interval.
pub fn q_exact(n: usize, k: usize, budget: &Budget) -> Result<QResult> {
    check_range(n, k)?;
    let max_n = budget.max_n_for(k);
    if n > max_n {
        return Err(Error::BudgetExceeded { n, k, max_n });
    }
    solve(n, k, Some(budget.node_limit))
}

/// Largest `n` for which [`q_bounds`] builds the conflict graph.
pub const BOUNDS_MAX_N: usize = 10;

/// Bounds on `Q(n, k)` without the exact search: the lower bounds and a
/// verified greedy partition. Still exact when the two meet.
pub fn q_bounds(n: usize, k: usize) -> Result<QResult> {
    check_range(n, k)?;
    if n > BOUNDS_MAX_N {
        return Err(Error::BudgetExceeded {
            n,
            k,
            max_n: BOUNDS_MAX_N,
        });
    }
    solve(n, k, None)
}

fn solve(n: usize, k: usize, node_limit: Option<u64>) -> Result<QResult> {
    let lower_bound = q_lower_bound(n, k)?;
    let graph = ConflictGraph::new(n, k);
    let size = graph.vertex_count();

    let clique_bound = if size <= 64 {
        max_clique(&masks(&graph, false))
    } else {
        greedy_clique(&graph)
    };
    let mut lo = clique_bound.max(lower_bound.ball as usize);
    let mut colors = dsatur_greedy(&graph);
    let mut hi = color_count(&colors);

    let mut independence_ratio_bound = None;
    if lo < hi && size <= 64 {
        let alpha = max_clique(&masks(&graph, true));
        let ratio = size.div_ceil(alpha);
        independence_ratio_bound = Some(ratio);
        lo = lo.max(ratio);
    }

    let mut search_nodes = 0;
    if let (true, Some(node_limit)) = (lo < hi, node_limit) {
        let mut search = Search::new(&graph, hi, colors.clone(), lo, node_limit);
        search.run();
        search_nodes = search.nodes;
        colors = search.best_colors;
        hi = search.best;
        if !search.aborted {
            lo = hi;
        }
    }

    let value = if lo == hi {
        QValue::Exact { value: hi }
    } else {
        QValue::Interval { lo, hi }
    };
    let witness = certificate(&graph, &colors)?;
    let check = witness.check();
    if !check.valid {
        return Err(Error::Certificate(check.witness.unwrap_or_default()));
    }
    Ok(QResult {
        n,
        k,
        lower_bound,
        clique_bound,
        independence_ratio_bound,
        value,
        search_nodes,
        witness,
    })
}

/// One cell of the Q-table.
#[derive(Debug, Clone, Serialize)]
pub struct QRow {
    pub n: usize,
    pub k: usize,
    pub lower_bound_ball: u64,
    pub lower_bound_binomial: u64,
    pub value: QValue,
    /// The cell lies beyond the exact-search budget; `value` comes from
    /// [`q_bounds`].
    pub budget_exceeded: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<PartitionCertificate>,
}

/// All cells `2 <= k <= min(n, k_max)`, `2 <= n <= n_max`, in row-major
/// order. Cells past the budget fall back to bounds.
pub fn q_table(
    n_max: usize,
    k_max: usize,
    budget: &Budget,
    with_witness: bool,
) -> Result<Vec<QRow>> {
    let mut rows = Vec::new();
    for n in 2..=n_max {
        for k in 2..=k_max.min(n) {
            let (result, budget_exceeded) = match q_exact(n, k, budget) {
                Ok(r) => (r, false),
                Err(Error::BudgetExceeded { .. }) => (q_bounds(n, k)?, true),
                Err(e) => return Err(e),
            };
            rows.push(QRow {
                n,
                k,
                lower_bound_ball: result.lower_bound.ball,
                lower_bound_binomial: result.lower_bound.binomial,
                value: result.value,
                budget_exceeded,
                witness: with_witness.then_some(result.witness),
            });
        }
    }
    Ok(rows)
}

fn color_count(colors: &[usize]) -> usize {
    colors.iter().max().map_or(0, |&c| c + 1)
}

/// Parts ordered by their lexicographically least word.
fn certificate(graph: &ConflictGraph, colors: &[usize]) -> Result<PartitionCertificate> {
    let mut relabel: Vec<Option<usize>> = vec![None; color_count(colors)];
    let mut buckets: Vec<Vec<Word>> = Vec::new();
    for (v, &c) in colors.iter().enumerate() {
        let idx = *relabel[c].get_or_insert_with(|| {
            buckets.push(Vec::new());
            buckets.len() - 1
        });
        buckets[idx].push(graph.word(v));
    }
    let parts = buckets
        .into_iter()
        .map(|b| FiniteCode::new(graph.n, b))
        .collect::<Result<Vec<_>>>()?;
    Ok(PartitionCertificate {
        n: graph.n,
        k: graph.k,
        parts,
    })
}

/// Adjacency bitmasks of the graph (or of its complement) for graphs with
/// at most 64 vertices.
fn masks(graph: &ConflictGraph, complement: bool) -> Vec<u64> {
    let size = graph.vertex_count();
    (0..size)
        .map(|u| {
            (0..size)
                .filter(|&v| v != u && graph.adjacent(u, v) != complement)
                .fold(0u64, |m, v| m | 1 << v)
        })
        .collect()
}

/// Maximum clique size by Bron–Kerbosch with pivoting.
fn max_clique(adj: &[u64]) -> usize {
    fn expand(adj: &[u64], size: usize, candidates: u64, excluded: u64, best: &mut usize) {
        if candidates == 0 {
            if excluded == 0 {
                *best = (*best).max(size);
            }
            return;
        }
        if size + candidates.count_ones() as usize <= *best {
            return;
        }
        let pool = candidates | excluded;
        let pivot = (0..adj.len())
            .filter(|&u| pool >> u & 1 == 1)
            .max_by_key(|&u| (adj[u] & candidates).count_ones())
            .expect("nonempty pool");
        let mut todo = candidates & !adj[pivot];
        let (mut candidates, mut excluded) = (candidates, excluded);
        while todo != 0 {
            let v = todo.trailing_zeros() as usize;
            todo &= todo - 1;
            expand(adj, size + 1, candidates & adj[v], excluded & adj[v], best);
            candidates &= !(1 << v);
            excluded |= 1 << v;
        }
    }
    let all = if adj.len() == 64 {
        u64::MAX
    } else {
        (1u64 << adj.len()) - 1
    };
    let mut best = 0;
    expand(adj, 0, all, 0, &mut best);
    best
}

fn greedy_clique(graph: &ConflictGraph) -> usize {
    let mut clique: Vec<usize> = Vec::new();
    for v in 0..graph.vertex_count() {
        if clique.iter().all(|&u| graph.adjacent(u, v)) {
            clique.push(v);
        }
    }
    clique.len()
}

/// DSATUR vertex choice: most distinct neighbor colors, then most
/// uncolored neighbors, then lowest index.
fn pick_vertex(
    graph: &ConflictGraph,
    colors: &[Option<usize>],
    saturation: &[u64],
) -> Option<usize> {
    (0..graph.vertex_count())
        .filter(|&v| colors[v].is_none())
        .max_by_key(|&v| {
            let free = graph
                .neighbors(v)
                .iter()
                .filter(|&&u| colors[u].is_none())
                .count();
            (saturation[v].count_ones(), free, std::cmp::Reverse(v))
        })
}

fn dsatur_greedy(graph: &ConflictGraph) -> Vec<usize> {
    let size = graph.vertex_count();
    let mut colors: Vec<Option<usize>> = vec![None; size];
    let mut used: Vec<Vec<bool>> = vec![Vec::new(); size];
    let mut saturation = vec![0u64; size];
    while let Some(v) = pick_vertex(graph, &colors, &saturation) {
        let c = (0..)
            .find(|&c| !used[v].get(c).copied().unwrap_or(false))
            .expect("some color");
        colors[v] = Some(c);
        for &u in graph.neighbors(v) {
            if used[u].len() <= c {
                used[u].resize(c + 1, false);
            }
            if !used[u][c] {
                used[u][c] = true;
                if c < 64 {
                    saturation[u] |= 1 << c;
                }
            }
        }
    }
    colors
        .into_iter()
        .map(|c| c.expect("all colored"))
        .collect()
}

/// Exact DSATUR branch and bound. Colors are tracked in 64-bit masks, which
/// is enough since it only searches below the greedy bound when that bound
/// is at most 64.
struct Search<'a> {
    graph: &'a ConflictGraph,
    best: usize,
    best_colors: Vec<usize>,
    lower: usize,
    colors: Vec<Option<usize>>,
    /// `counts[v][c]`: colored neighbors of `v` with color `c`.
    counts: Vec<[u16; 64]>,
    nodes: u64,
    node_limit: u64,
    aborted: bool,
}

impl<'a> Search<'a> {
    fn new(
        graph: &'a ConflictGraph,
        best: usize,
        best_colors: Vec<usize>,
        lower: usize,
        node_limit: u64,
    ) -> Self {
        let size = graph.vertex_count();
        Search {
            graph,
            best,
            best_colors,
            lower,
            colors: vec![None; size],
            counts: vec![[0; 64]; size],
            nodes: 0,
            node_limit,
            aborted: best > 64,
        }
    }

    fn saturation(&self, v: usize) -> u64 {
        self.counts[v]
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .fold(0u64, |m, (c, _)| m | 1 << c)
    }

    fn run(&mut self) {
        if self.aborted {
            return;
        }
        self.descend(0);
    }

    fn assign(&mut self, v: usize, c: Option<usize>) {
        let old = std::mem::replace(&mut self.colors[v], c);
        for i in 0..self.graph.neighbors(v).len() {
            let u = self.graph.neighbors(v)[i];
            if let Some(o) = old {
                self.counts[u][o] -= 1;
            }
            if let Some(n) = c {
                self.counts[u][n] += 1;
            }
        }
    }

    fn descend(&mut self, used: usize) {
        if self.aborted || self.best <= self.lower {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.node_limit {
            self.aborted = true;
            return;
        }
        let sat: Vec<u64> = (0..self.graph.vertex_count())
            .map(|v| self.saturation(v))
            .collect();
        let Some(v) = pick_vertex(self.graph, &self.colors, &sat) else {
            if used < self.best {
                self.best = used;
                self.best_colors = self.colors.iter().map(|c| c.expect("colored")).collect();
            }
            return;
        };
        // Existing colors first, then one fresh color if it can still beat
        // the incumbent.
        let limit = (used + 1).min(self.best - 1);
        for c in 0..limit {
            if sat[v] >> c & 1 == 1 {
                continue;
            }
            self.assign(v, Some(c));
            self.descend(used.max(c + 1));
            self.assign(v, None);
            if self.aborted || self.best <= self.lower {
                return;
            }
        }
    }
}
