//! Building the two covering DAGs of a decomposition hierarchy.
//!
//! Every block of every hierarchy level gets a small *hop set*: a directed
//! path through the block's vertices in hierarchy order plus shortcut
//! edges arranged so that any ordered pair inside the block is connected
//! by at most two hops.  All hop edges of a level-`i` block carry the same
//! weight `ceil(2 d_i)`, which by the diameter guarantee dominates every
//! true distance inside the block.
//!
//! The first DAG `D1` consists of the residual acyclic graph (the input
//! minus all cut edges, original weights), connector edges that re-route a
//! residual edge `u -> v` through block representatives at every level at
//! or above the level where `u` and `v` separate, and the hop sets of all
//! blocks.  The second DAG `D2` is simply every hop set reversed.  Both
//! are acyclic by construction — `D1` is ordered by the hierarchy's vertex
//! order and `D2` by its reverse — and a pair `(s, t)` with `t` reachable
//! from `s` in the input is reachable in `D1` exactly when `s` precedes
//! `t`, and in `D2` exactly when `s` follows `t`.
//!
//! Distances are preserved up to the rounding the hierarchy's diameters
//! introduce: every constructed edge weighs at least the true distance
//! between its endpoints, and ordered pairs sharing a level-`i` block are
//! connected within `2 ceil(2 d_i)`.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::Error;
use crate::graph::{CoverMethod, Dag, DagCover, Edge, WeightedDigraph};
use crate::hierarchy::{build_hierarchy, Hierarchy, VertexOrder};
use crate::par;
use crate::rational::Rational;
use crate::rng::{derive_seed, substream};

/// Shortcut pairs `(i, j)`, `i < j`, over a path of `k` positions such
/// that together with the path edges `(t, t+1)` every ordered position
/// pair is connected by at most two hops.  Built by midpoint recursion:
/// the middle position of a range receives an edge from everything before
/// it and to everything after it within the range, and the two halves
/// recurse.  At most `k * ceil(log2 k)` pairs; empty for `k <= 2`.
pub fn path_two_hop_shortcuts(k: usize) -> Vec<(usize, usize)> {
    if k <= 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut ranges = vec![(0usize, k - 1)];
    while let Some((a, b)) = ranges.pop() {
        if b - a <= 1 {
            continue;
        }
        let m = (a + b) / 2;
        for x in a..m {
            out.push((x, m));
        }
        for y in (m + 1)..=b {
            out.push((m, y));
        }
        ranges.push((a, m));
        ranges.push((m, b));
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// The hop set of one block: a path through the block's vertices in
/// hierarchy order plus the two-hop shortcuts, every edge weighing
/// `ceil(2 d)`.  Singleton blocks have no hop edges.
pub fn scc_hop_edges(block: &[usize], order: &VertexOrder, d: Rational) -> Vec<Edge> {
    let k = block.len();
    if k <= 1 {
        return Vec::new();
    }
    let mut sorted: Vec<usize> = block.to_vec();
    sorted.sort_unstable_by_key(|&v| order.pos[v]);
    let w = d.mul_int(2).ceil();
    let mut pairs: Vec<(usize, usize)> = (0..k - 1).map(|t| (t, t + 1)).collect();
    pairs.extend(path_two_hop_shortcuts(k));
    pairs.sort_unstable();
    pairs.dedup();
    pairs
        .into_iter()
        .map(|(a, b)| Edge::new(sorted[a], sorted[b], w))
        .collect()
}

/// Keeps the minimum weight per ordered vertex pair.  Dense array for
/// small `n`, ordered map beyond that.
enum PairMin {
    Dense { n: usize, w: Vec<u64> },
    Sparse(BTreeMap<(usize, usize), u64>),
}

const DENSE_PAIR_LIMIT: usize = 1024;

impl PairMin {
    fn new(n: usize) -> Self {
        if n <= DENSE_PAIR_LIMIT {
            PairMin::Dense { n, w: vec![u64::MAX; n * n] }
        } else {
            PairMin::Sparse(BTreeMap::new())
        }
    }

    fn insert(&mut self, u: usize, v: usize, weight: u64) {
        match self {
            PairMin::Dense { n, w } => {
                let cell = &mut w[u * *n + v];
                if weight < *cell {
                    *cell = weight;
                }
            }
            PairMin::Sparse(map) => {
                map.entry((u, v))
                    .and_modify(|cur| *cur = (*cur).min(weight))
                    .or_insert(weight);
            }
        }
    }

    fn into_edges(self) -> Vec<Edge> {
        match self {
            PairMin::Dense { n, w } => {
                let mut out = Vec::new();
                for (idx, weight) in w.into_iter().enumerate() {
                    if weight != u64::MAX {
                        out.push(Edge::new(idx / n, idx % n, weight));
                    }
                }
                out
            }
            PairMin::Sparse(map) => map
                .into_iter()
                .map(|((u, v), weight)| Edge::new(u, v, weight))
                .collect(),
        }
    }
}

/// Builds the covering DAG pair `(D1, D2)` for `g` from its hierarchy.
///
/// `D1` = residual edges with original weights, plus connectors
/// `(r, r', w + ceil(2 d_i) + ceil(2 d_j))` for every residual edge
/// `(u, v, w)` taking `r` over both order-extreme representatives of the
/// block of `u` at each level `i` and `r'` over those of the block of `v`
/// at each level `j`, with `i` and `j` ranging from the separation level
/// of `(u, v)` up to the top, plus every block's hop set.  `D2` = every
/// block's hop set reversed.  Parallel edges collapse to minimum weight.
///
/// Both DAGs are returned with their validated topological orders (the
/// hierarchy order for `D1`, its reverse for `D2`); a constructed edge
/// that violated the order would surface as an internal-invariant error.
pub fn build_dag_pair(g: &WeightedDigraph, h: &Hierarchy) -> Result<(Dag, Dag), Error> {
    let n = g.n();
    let order = &h.order;
    let round2d: Vec<u64> = h.levels.iter().map(|lv| lv.d.mul_int(2).ceil()).collect();

    let mut hop_edges: Vec<Edge> = Vec::new();
    for lv in &h.levels {
        for block in &lv.blocks {
            hop_edges.extend(scc_hop_edges(block, order, lv.d));
        }
    }

    let mut alive = vec![true; g.edges().len()];
    for lv in &h.levels {
        for &e in &lv.cut_edges {
            alive[e] = false;
        }
    }

    let mut acc = PairMin::new(n);
    for (e, ed) in g.edges().iter().enumerate() {
        if !alive[e] {
            continue;
        }
        acc.insert(ed.u, ed.v, ed.w);
        let sep = h.reps.edge_level[e];
        for i in sep..=h.z {
            let bu = h.scc_of[i][ed.u];
            let heads = [h.reps.r1[i][bu], h.reps.r2[i][bu]];
            for j in sep..=h.z {
                let bv = h.scc_of[j][ed.v];
                let tails = [h.reps.r1[j][bv], h.reps.r2[j][bv]];
                let w = ed
                    .w
                    .checked_add(round2d[i])
                    .and_then(|x| x.checked_add(round2d[j]))
                    .expect("connector weight overflows u64");
                for a in heads {
                    for b in tails {
                        acc.insert(a, b, w);
                    }
                }
            }
        }
    }
    for e in &hop_edges {
        acc.insert(e.u, e.v, e.w);
    }

    let d1 = Dag::with_order(
        WeightedDigraph::from_edges_uncapped(n, acc.into_edges())?,
        order.perm.clone(),
    )?;

    let mut rev_acc = PairMin::new(n);
    for e in &hop_edges {
        rev_acc.insert(e.v, e.u, e.w);
    }
    let rev_perm: Vec<usize> = order.perm.iter().rev().copied().collect();
    let d2 = Dag::with_order(
        WeightedDigraph::from_edges_uncapped(n, rev_acc.into_edges())?,
        rev_perm,
    )?;

    Ok((d1, d2))
}

/// The default repetition count for [`build_ldd_cover`]:
/// `10 * ceil(log2 n)`, clamped to at least one.
pub fn default_repetitions(n: usize) -> usize {
    let lg = (n.max(1) as u64).next_power_of_two().trailing_zeros() as usize;
    (10 * lg).max(1)
}

/// Builds a full distance cover: `repetitions` independent hierarchies,
/// each contributing its DAG pair, assembled with the additional-edge
/// ledger.  Repetition `r` uses the substream derived from (`seed`, `r`),
/// so the result is deterministic in (`g`, `repetitions`, `seed`) no
/// matter how many threads run the repetitions.
pub fn build_ldd_cover(
    g: &WeightedDigraph,
    repetitions: usize,
    seed: u64,
) -> Result<DagCover, Error> {
    if repetitions == 0 {
        return Err(Error::InvalidParam("repetitions must be at least 1".into()));
    }
    let pairs = par::map_range(repetitions, |r| {
        let h = build_hierarchy(g, derive_seed(seed, r as u64));
        build_dag_pair(g, &h)
    });
    let mut dags = Vec::with_capacity(2 * repetitions);
    for pair in pairs {
        let (d1, d2) = pair?;
        dags.push(d1);
        dags.push(d2);
    }
    Ok(DagCover::assemble(g, dags, seed, CoverMethod::Ldd))
}

/// Draws one DAG of a fresh cover pair, each side with probability 1/2.
/// The hierarchy uses the substream tagged 0 and the coin the substream
/// tagged 1, so the pair construction and the side choice are independent.
/// For an ordered pair `(s, t)` with `t` reachable from `s`, exactly one
/// side covers it, so the returned DAG covers it with probability exactly
/// one half over the coin.
pub fn sample_embedding_dag(g: &WeightedDigraph, seed: u64) -> Result<Dag, Error> {
    let h = build_hierarchy(g, derive_seed(seed, 0));
    let (d1, d2) = build_dag_pair(g, &h)?;
    let first = substream(seed, 1).gen_bool(0.5);
    Ok(if first { d1 } else { d2 })
}
