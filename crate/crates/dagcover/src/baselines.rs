//! Reference cover constructions that bracket the main builder.
//!
//! Three independent ways to cover a digraph with DAGs, each trading a
//! different resource:
//!
//! * [`reachability_two_cover`] — two DAGs, at most `m + 2n` additional
//!   edges, reachability only.  Each strongly connected component gets a
//!   forward path through its vertices (ascending id), inter-component
//!   edges are re-routed through component endpoints, and a second DAG
//!   holds every path reversed.
//! * [`random_order_exact_cover`] — exact distances with high
//!   probability, paid for with factorially many DAGs: every DAG is the
//!   forward-edge restriction of the input plus a hopset under a fresh
//!   uniform vertex order.  The DAG count is checked against a hard
//!   budget up front and refused rather than truncated.
//! * [`shortest_path_dag_cover`] — `n` DAGs, zero additional edges,
//!   distortion exactly 1: the shortest-path tree from every root.
//!
//! The hopset the random-order cover consumes is built by
//! [`landmark_exact_hopset`]: sampled landmarks, all pairwise exact
//! distances between them, audited against a hop-bounded distance oracle
//! and re-sampled when the audit fails.

use rand::seq::SliceRandom;

use crate::error::Error;
use crate::graph::{CoverMethod, Dag, DagCover, Edge, WeightedDigraph};
use crate::oracle;
use crate::par;
use crate::rng::{derive_seed, substream};

/// Exact-distance shortcut edges with the hop bound they were built for.
/// Every edge weight equals the true distance of its endpoints, so adding
/// the set to the graph never shortens any distance; it only reduces the
/// number of hops an exact path needs.
#[derive(Clone, Debug)]
pub struct Hopset {
    pub edges: Vec<Edge>,
    pub hop_bound: u64,
}

/// Covers reachability with exactly two DAGs.
///
/// The first DAG walks every strongly connected component along its
/// vertices in ascending id and, for every input edge between different
/// components, jumps from the largest id of the tail component to the
/// smallest id of the head component.  The second DAG holds the reversed
/// component paths and nothing else.  Forward pairs inside a component
/// are covered by the first DAG, backward pairs by the second, and
/// cross-component pairs follow the condensation through the jump edges;
/// the union of the two transitive closures is exactly the input's.  All
/// constructed edges weigh 1 — the cover answers reachability, not
/// distance — and at most `m + 2n` vertex pairs are new.
pub fn reachability_two_cover(g: &WeightedDigraph) -> DagCover {
    let n = g.n();
    let sccs = g.scc();
    let mut scc_pos = vec![0usize; n];
    for (ci, comp) in sccs.iter().enumerate() {
        for &v in comp {
            scc_pos[v] = ci;
        }
    }
    let mut fwd: Vec<Edge> = Vec::new();
    let mut bwd: Vec<Edge> = Vec::new();
    for comp in &sccs {
        for w in comp.windows(2) {
            fwd.push(Edge::new(w[0], w[1], 1));
            bwd.push(Edge::new(w[1], w[0], 1));
        }
    }
    for e in g.edges() {
        let (a, b) = (scc_pos[e.u], scc_pos[e.v]);
        if a != b {
            let tail = *sccs[a].last().expect("components are nonempty");
            let head = sccs[b][0];
            fwd.push(Edge::new(tail, head, 1));
        }
    }
    // Components are emitted in condensation order, so sorting vertices by
    // (component, id) gives the first DAG a topological order and
    // (component, reversed id) the second.
    let mut order1: Vec<usize> = (0..n).collect();
    order1.sort_unstable_by_key(|&v| (scc_pos[v], v));
    let mut order2: Vec<usize> = (0..n).collect();
    order2.sort_unstable_by_key(|&v| (scc_pos[v], std::cmp::Reverse(v)));
    let d1 = Dag::with_order(
        WeightedDigraph::from_edges(n, fwd).expect("constructed edges are valid"),
        order1,
    )
    .expect("component order is topological for the forward DAG");
    let d2 = Dag::with_order(
        WeightedDigraph::from_edges(n, bwd).expect("constructed edges are valid"),
        order2,
    )
    .expect("reversed component order is topological for the backward DAG");
    DagCover::assemble(g, vec![d1, d2], 0, CoverMethod::Reach2)
}

/// All ordered finite-distance pairs among `marks`, weighted exactly.
fn landmark_pairs(g: &WeightedDigraph, marks: &[usize], hop_bound: u64) -> Hopset {
    let mut edges = Vec::new();
    for &x in marks {
        let dist = g.dijkstra(x);
        for &y in marks {
            if x != y {
                if let Some(w) = dist[y] {
                    edges.push(Edge::new(x, y, w));
                }
            }
        }
    }
    Hopset { edges, hop_bound }
}

/// Checks the hopset contract: for every source, distances computed with
/// at most `2d + 1` hops over the input plus the hopset must equal the
/// unrestricted distances.  Hopset edges carry exact weights, so the
/// union can never undershoot; equality therefore means every reachable
/// pair has an exact path within the hop budget.
fn hopset_audit(g: &WeightedDigraph, h: &Hopset, d: u64) -> bool {
    let mut union_edges: Vec<Edge> = g.edges().to_vec();
    union_edges.extend_from_slice(&h.edges);
    let hops = (2 * d + 1) as usize;
    for s in 0..g.n() {
        let exact = g.dijkstra(s);
        let bounded = oracle::hop_bounded_distances(g.n(), &union_edges, s, hops);
        if bounded != exact {
            return false;
        }
    }
    true
}

/// Builds an exact-distance hopset with hop bound `2d + 1`.
///
/// Samples `min(n, ceil(6 n ln n / d))` landmarks uniformly without
/// replacement and connects every ordered landmark pair at its exact
/// distance.  The result is audited against the hop-bounded oracle; on
/// failure a fresh landmark sample is drawn (up to four substreams), and
/// as a final deterministic fallback every vertex becomes a landmark,
/// which passes the audit trivially.  When `d >= n - 1` every shortest
/// path already fits the hop budget and the empty set is returned.
///
/// Panics if `d` is zero.
pub fn landmark_exact_hopset(g: &WeightedDigraph, d: u64, seed: u64) -> Hopset {
    assert!(d >= 1, "hop parameter must be positive");
    let n = g.n();
    if n == 0 || d >= (n as u64).saturating_sub(1) {
        return Hopset { edges: Vec::new(), hop_bound: d };
    }
    let want = (6.0 * n as f64 * (n as f64).ln() / d as f64).ceil() as usize;
    let count = want.clamp(1, n);
    for attempt in 0..4u64 {
        let mut rng = substream(seed, attempt);
        let mut marks = rand::seq::index::sample(&mut rng, n, count).into_vec();
        marks.sort_unstable();
        let h = landmark_pairs(g, &marks, d);
        if hopset_audit(g, &h, d) {
            return h;
        }
    }
    let all: Vec<usize> = (0..n).collect();
    landmark_pairs(g, &all, d)
}

/// Hard ceiling on the DAG count [`random_order_exact_cover`] will build.
pub const ORDER_COVER_DAG_BUDGET: u64 = 100_000;

/// Covers exact distances with `(2d+2)! * 10 * ceil(log2 n)` DAGs, each
/// the forward-edge restriction of the input plus a hop-bound-`2d+1`
/// hopset under an independent uniform vertex order.
///
/// A shortest path that needs at most `2d + 1` union edges survives into
/// some DAG as soon as one sampled order happens to sort its vertices
/// consistently, which the DAG count makes overwhelmingly likely for
/// every pair at once.  The count is checked against
/// [`ORDER_COVER_DAG_BUDGET`] before any work happens; a too-large `d`
/// is refused, never silently truncated.
pub fn random_order_exact_cover(
    g: &WeightedDigraph,
    d: u64,
    seed: u64,
) -> Result<DagCover, Error> {
    if d == 0 {
        return Err(Error::InvalidParam("hop parameter must be positive".into()));
    }
    let n = g.n();
    let lg = (n.max(2) as u64).next_power_of_two().trailing_zeros() as u128;
    let mut k: u128 = 10 * lg;
    for f in 2..=(2 * d + 2) as u128 {
        k = k.saturating_mul(f);
    }
    if k > ORDER_COVER_DAG_BUDGET as u128 {
        return Err(Error::BudgetExceeded {
            required: k,
            budget: ORDER_COVER_DAG_BUDGET as u128,
        });
    }
    let hopset = landmark_exact_hopset(g, d, derive_seed(seed, 0));
    let mut union_edges: Vec<Edge> = g.edges().to_vec();
    union_edges.extend_from_slice(&hopset.edges);
    let union_graph = WeightedDigraph::from_edges_uncapped(n, union_edges)?;
    let dags = par::map_range(k as usize, |r| {
        let mut rng = substream(seed, 1 + r as u64);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let mut pos = vec![0usize; n];
        for (i, &v) in perm.iter().enumerate() {
            pos[v] = i;
        }
        let forward = union_graph
            .edges()
            .iter()
            .copied()
            .filter(|e| pos[e.u] < pos[e.v]);
        let graph = WeightedDigraph::from_edges_uncapped(n, forward)
            .expect("forward restriction of a valid graph is valid");
        Dag::with_order(graph, perm).expect("edges were filtered to respect the order")
    });
    Ok(DagCover::assemble(g, dags, seed, CoverMethod::Orders))
}

/// The trivial exact cover: one shortest-path tree per root.
///
/// Tree `v` contains, for every vertex the root reaches, the parent edge
/// chosen by Dijkstra with smallest-id tie-breaking, at its original
/// weight.  Every DAG is a subgraph of the input (zero additional edges)
/// and tree `s` preserves every distance from `s` exactly, so the cover's
/// distortion is exactly 1.
pub fn shortest_path_dag_cover(g: &WeightedDigraph) -> DagCover {
    let n = g.n();
    let dags = par::map_range(n, |root| {
        let (dist, parent) = g.dijkstra_tree(root);
        let mut edges = Vec::new();
        for v in 0..n {
            if let Some(p) = parent[v] {
                let w = dist[v].expect("child is reached") - dist[p].expect("parent is reached");
                edges.push(Edge::new(p, v, w));
            }
        }
        // Reached vertices by (distance, id); unreached ones are isolated
        // in the tree, appended in id order.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_unstable_by_key(|&v| match dist[v] {
            Some(dv) => (0u8, dv, v),
            None => (1u8, 0, v),
        });
        Dag::with_order(
            WeightedDigraph::from_edges(n, edges).expect("tree edges are valid input edges"),
            order,
        )
        .expect("distance order is topological for a shortest-path tree")
    });
    DagCover::assemble(g, dags, 0, CoverMethod::SpDags)
}
