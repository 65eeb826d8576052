//! Weighted directed graphs and exact polynomial-time oracles.
//!
//! Graphs are immutable after construction: all algorithms here are pure
//! queries, so values can be shared freely across threads. Vertex ids are
//! `0..n-1`; weights are positive integers; parallel input edges collapse to
//! the minimum weight; self-loops are rejected. Unreachable is represented as
//! `None`, never as a saturating sentinel.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fs;
use std::path::Path as FsPath;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Hard cap on a single edge weight; keeps every distance sum in this crate
/// far away from `u64` overflow at any plausible instance size.
pub const MAX_EDGE_WEIGHT: u64 = 1 << 40;

/// A weighted directed edge `u -> v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: u64,
}

impl Edge {
    pub fn new(u: usize, v: usize, w: u64) -> Self {
        Edge { u, v, w }
    }
}

/// An immutable weighted digraph with sorted, deduplicated edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedDigraph {
    n: usize,
    edges: Vec<Edge>,
    adj_out: Vec<Vec<(usize, u64)>>,
    adj_in: Vec<Vec<(usize, u64)>>,
    max_weight: u64,
}

impl WeightedDigraph {
    /// Builds a graph from an edge list, collapsing parallel edges to the
    /// minimum weight. Rejects out-of-range ids, self-loops, zero weights,
    /// and weights above [`MAX_EDGE_WEIGHT`].
    pub fn from_edges(n: usize, raw: impl IntoIterator<Item = Edge>) -> Result<Self, Error> {
        Self::build(n, raw, true)
    }

    /// Like [`WeightedDigraph::from_edges`] but without the input weight
    /// cap.  Cover construction adds rounded block diameters on top of
    /// input weights, so derived edges may legitimately exceed the cap
    /// that input files must respect.
    pub(crate) fn from_edges_uncapped(
        n: usize,
        raw: impl IntoIterator<Item = Edge>,
    ) -> Result<Self, Error> {
        Self::build(n, raw, false)
    }

    fn build(
        n: usize,
        raw: impl IntoIterator<Item = Edge>,
        capped: bool,
    ) -> Result<Self, Error> {
        let mut edges: Vec<Edge> = Vec::new();
        for e in raw {
            if e.u >= n {
                return Err(Error::VertexOutOfRange { vertex: e.u, n });
            }
            if e.v >= n {
                return Err(Error::VertexOutOfRange { vertex: e.v, n });
            }
            if e.u == e.v {
                return Err(Error::SelfLoop { vertex: e.u });
            }
            if e.w == 0 {
                return Err(Error::ZeroWeight { tail: e.u, head: e.v });
            }
            if capped && e.w > MAX_EDGE_WEIGHT {
                return Err(Error::InvalidParam(format!(
                    "edge weight {} exceeds the cap {MAX_EDGE_WEIGHT}",
                    e.w
                )));
            }
            edges.push(e);
        }
        edges.sort_unstable();
        edges.dedup_by(|next, kept| kept.u == next.u && kept.v == next.v);
        let max_weight = edges.iter().map(|e| e.w).max().unwrap_or(1);
        let mut adj_out = vec![Vec::new(); n];
        let mut adj_in = vec![Vec::new(); n];
        for e in &edges {
            adj_out[e.u].push((e.v, e.w));
            adj_in[e.v].push((e.u, e.w));
        }
        for row in adj_in.iter_mut() {
            row.sort_unstable();
        }
        Ok(WeightedDigraph { n, edges, adj_out, adj_in, max_weight })
    }

    /// An edgeless graph on `n` vertices.
    pub fn edgeless(n: usize) -> Self {
        Self::from_edges(n, []).expect("edgeless graph is always valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges sorted by `(u, v)`, one entry per vertex pair.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Maximum edge weight (`1` for an edgeless graph).
    pub fn max_weight(&self) -> u64 {
        self.max_weight
    }

    /// Out-neighbors of `u` as `(head, weight)`, sorted by head.
    pub fn out(&self, u: usize) -> &[(usize, u64)] {
        &self.adj_out[u]
    }

    /// In-neighbors of `v` as `(tail, weight)`, sorted by tail.
    pub fn inc(&self, v: usize) -> &[(usize, u64)] {
        &self.adj_in[v]
    }

    /// Whether the pair `(u, v)` is an edge.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_weight(u, v).is_some()
    }

    /// Weight of the edge `(u, v)`, if present.
    pub fn edge_weight(&self, u: usize, v: usize) -> Option<u64> {
        let row = &self.adj_out[u];
        row.binary_search_by_key(&v, |&(h, _)| h).ok().map(|i| row[i].1)
    }

    /// The graph with every edge reversed.
    pub fn reverse(&self) -> Self {
        let rev = self.edges.iter().map(|e| Edge::new(e.v, e.u, e.w));
        Self::from_edges(self.n, rev).expect("reversal preserves validity")
    }

    /// Single-source shortest distances (Dijkstra); `None` when unreachable.
    pub fn dijkstra(&self, src: usize) -> Vec<Option<u64>> {
        self.dijkstra_masked(src, None)
    }

    /// Dijkstra restricted to vertices where `allowed` is true (when given).
    /// Distances are measured in the induced subgraph, without relabeling.
    pub fn dijkstra_masked(&self, src: usize, allowed: Option<&[bool]>) -> Vec<Option<u64>> {
        let mut dist: Vec<Option<u64>> = vec![None; self.n];
        if let Some(mask) = allowed {
            if !mask[src] {
                return dist;
            }
        }
        let mut heap: BinaryHeap<Reverse<(u64, usize)>> = BinaryHeap::new();
        dist[src] = Some(0);
        heap.push(Reverse((0, src)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if dist[u] != Some(d) {
                continue;
            }
            for &(v, w) in &self.adj_out[u] {
                if let Some(mask) = allowed {
                    if !mask[v] {
                        continue;
                    }
                }
                let nd = d.checked_add(w).expect("distance overflow");
                if dist[v].map_or(true, |old| nd < old) {
                    dist[v] = Some(nd);
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        dist
    }

    /// Dijkstra with parent pointers (smallest-id parent on distance ties).
    /// Returns `(dist, parent)`; `parent[src]` and unreachable entries are `None`.
    pub fn dijkstra_tree(&self, src: usize) -> (Vec<Option<u64>>, Vec<Option<usize>>) {
        let mut dist: Vec<Option<u64>> = vec![None; self.n];
        let mut parent: Vec<Option<usize>> = vec![None; self.n];
        let mut heap: BinaryHeap<Reverse<(u64, usize)>> = BinaryHeap::new();
        dist[src] = Some(0);
        heap.push(Reverse((0, src)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if dist[u] != Some(d) {
                continue;
            }
            for &(v, w) in &self.adj_out[u] {
                let nd = d.checked_add(w).expect("distance overflow");
                match dist[v] {
                    Some(old) if nd > old => {}
                    Some(old) if nd == old => {
                        // Equal-distance tie: keep the smallest-id parent.
                        if parent[v].map_or(true, |p| u < p) {
                            parent[v] = Some(u);
                        }
                    }
                    _ => {
                        dist[v] = Some(nd);
                        parent[v] = Some(u);
                        heap.push(Reverse((nd, v)));
                    }
                }
            }
        }
        (dist, parent)
    }

    /// All-pairs shortest distances.
    pub fn all_pairs(&self) -> DistanceMatrix {
        let rows = crate::par::map_range(self.n, |s| self.dijkstra(s));
        DistanceMatrix::from_rows(rows)
    }

    /// Strongly connected components, emitted in a topological order of the
    /// condensation with ties broken by smallest contained vertex id.
    /// Each block is sorted ascending. Deterministic given the graph.
    pub fn scc(&self) -> Vec<Vec<usize>> {
        self.scc_masked(None)
    }

    /// SCCs of the subgraph induced by `allowed` (when given), in the same
    /// canonical order as [`Self::scc`]. Excluded vertices form no blocks.
    pub fn scc_masked(&self, allowed: Option<&[bool]>) -> Vec<Vec<usize>> {
        let keep = |v: usize| allowed.map_or(true, |m| m[v]);
        // Iterative Tarjan: explicit stack of (vertex, next-neighbor-index).
        let n = self.n;
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut next_index = 0usize;
        let mut call: Vec<(usize, usize)> = Vec::new();
        for root in 0..n {
            if !keep(root) || index[root] != usize::MAX {
                continue;
            }
            call.push((root, 0));
            index[root] = next_index;
            low[root] = next_index;
            next_index += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut ni)) = call.last_mut() {
                if *ni < self.adj_out[v].len() {
                    let (w, _) = self.adj_out[v][*ni];
                    *ni += 1;
                    if !keep(w) {
                        continue;
                    }
                    if index[w] == usize::MAX {
                        index[w] = next_index;
                        low[w] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack underflow");
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comps.push(comp);
                    }
                }
            }
        }
        canonical_condensation_order(self, allowed, comps)
    }

    /// Topological order with the smallest available vertex id emitted first.
    pub fn topological_order(&self) -> Result<Vec<usize>, Error> {
        let mut indeg = vec![0usize; self.n];
        for e in &self.edges {
            indeg[e.v] += 1;
        }
        let mut ready: BinaryHeap<Reverse<usize>> = (0..self.n)
            .filter(|&v| indeg[v] == 0)
            .map(Reverse)
            .collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(Reverse(v)) = ready.pop() {
            order.push(v);
            for &(w, _) in &self.adj_out[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.push(Reverse(w));
                }
            }
        }
        if order.len() == self.n {
            Ok(order)
        } else {
            Err(Error::CycleDetected(self.witness_cycle(&indeg)))
        }
    }

    /// Extracts one directed cycle among vertices with positive residual
    /// in-degree after a failed Kahn pass.
    fn witness_cycle(&self, indeg: &[usize]) -> Vec<usize> {
        let remaining: Vec<bool> = indeg.iter().map(|&d| d > 0).collect();
        let start = (0..self.n).find(|&v| remaining[v]).expect("cycle exists");
        let mut seen_at = vec![usize::MAX; self.n];
        let mut walk = Vec::new();
        let mut v = start;
        loop {
            if seen_at[v] != usize::MAX {
                return walk[seen_at[v]..].to_vec();
            }
            seen_at[v] = walk.len();
            walk.push(v);
            // Every remaining vertex has an in-edge from a remaining vertex.
            v = self.adj_in[v]
                .iter()
                .map(|&(u, _)| u)
                .find(|&u| remaining[u])
                .expect("remaining vertex without remaining predecessor");
        }
    }

    /// Ordered reachable pairs `(s, t)`, `s != t`.
    pub fn transitive_closure(&self) -> ReachMatrix {
        let rows = crate::par::map_range(self.n, |s| {
            let mut row = vec![false; self.n];
            let mut stack = vec![s];
            let mut seen = vec![false; self.n];
            seen[s] = true;
            while let Some(u) = stack.pop() {
                for &(v, _) in &self.adj_out[u] {
                    if !seen[v] {
                        seen[v] = true;
                        row[v] = true;
                        stack.push(v);
                    }
                }
            }
            row[s] = false;
            row
        });
        ReachMatrix::from_rows(&rows)
    }

    /// Maximum over ordered pairs in `set` of the distance measured in this
    /// graph; `None` when some pair is unreachable. Panics on an empty set.
    pub fn weak_diameter(&self, set: &[usize]) -> Option<u64> {
        assert!(!set.is_empty(), "weak diameter of an empty set");
        let mut worst = 0u64;
        for &u in set {
            let dist = self.dijkstra(u);
            for &v in set {
                match dist[v] {
                    Some(d) => worst = worst.max(d),
                    None => return None,
                }
            }
        }
        Some(worst)
    }

    /// Serializes to the plain text format: a `n m` header line followed by
    /// one `u v w` line per edge, sorted by `(u, v)`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{} {}\n", self.n, self.edges.len()));
        for e in &self.edges {
            out.push_str(&format!("{} {} {}\n", e.u, e.v, e.w));
        }
        out
    }

    /// Parses the text format. `#`-prefixed lines are comments and may appear
    /// anywhere; duplicate pairs resolve to the minimum weight.
    pub fn from_text(text: &str) -> Result<Self, Error> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (lineno, raw_line) in text.lines().enumerate() {
            let line = raw_line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| -> Result<u64, Error> {
                s.parse::<u64>().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    message: format!("expected a nonnegative integer, got {s:?}"),
                })
            };
            match header {
                None => {
                    if fields.len() != 2 {
                        return Err(Error::Parse {
                            line: lineno + 1,
                            message: "expected header `n m`".into(),
                        });
                    }
                    header = Some((parse(fields[0])? as usize, parse(fields[1])? as usize));
                }
                Some(_) => {
                    if fields.len() != 3 {
                        return Err(Error::Parse {
                            line: lineno + 1,
                            message: "expected edge line `u v w`".into(),
                        });
                    }
                    edges.push(Edge::new(
                        parse(fields[0])? as usize,
                        parse(fields[1])? as usize,
                        parse(fields[2])?,
                    ));
                }
            }
        }
        let (n, m) = header.ok_or(Error::Parse { line: 0, message: "missing header".into() })?;
        if edges.len() != m {
            return Err(Error::Parse {
                line: 0,
                message: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Self::from_edges(n, edges)
    }

    /// Reads the text format from a file.
    pub fn load(path: impl AsRef<FsPath>) -> Result<Self, Error> {
        Self::from_text(&fs::read_to_string(path)?)
    }

    /// Writes the text format to a file.
    pub fn save(&self, path: impl AsRef<FsPath>) -> Result<(), Error> {
        fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// Reorders Tarjan's components into a topological order of the condensation,
/// breaking ties by the smallest vertex id contained in the block.
fn canonical_condensation_order(
    g: &WeightedDigraph,
    allowed: Option<&[bool]>,
    comps: Vec<Vec<usize>>,
) -> Vec<Vec<usize>> {
    let keep = |v: usize| allowed.map_or(true, |m| m[v]);
    let mut comp_of = vec![usize::MAX; g.n];
    for (ci, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = ci;
        }
    }
    let k = comps.len();
    let mut indeg = vec![0usize; k];
    let mut succs: Vec<Vec<usize>> = vec![Vec::new(); k];
    for e in &g.edges {
        if !keep(e.u) || !keep(e.v) {
            continue;
        }
        let (cu, cv) = (comp_of[e.u], comp_of[e.v]);
        if cu != cv {
            succs[cu].push(cv);
        }
    }
    for row in succs.iter_mut() {
        row.sort_unstable();
        row.dedup();
    }
    for row in &succs {
        for &cv in row {
            indeg[cv] += 1;
        }
    }
    // Blocks are sorted ascending, so comps[c][0] is the smallest member.
    let mut ready: BinaryHeap<Reverse<(usize, usize)>> = (0..k)
        .filter(|&c| indeg[c] == 0)
        .map(|c| Reverse((comps[c][0], c)))
        .collect();
    let mut order = Vec::with_capacity(k);
    while let Some(Reverse((_, c))) = ready.pop() {
        order.push(c);
        for &cv in &succs[c] {
            indeg[cv] -= 1;
            if indeg[cv] == 0 {
                ready.push(Reverse((comps[cv][0], cv)));
            }
        }
    }
    debug_assert_eq!(order.len(), k, "condensation must be acyclic");
    order.into_iter().map(|c| comps[c].clone()).collect()
}

/// A digraph together with a topological-order witness of acyclicity.
#[derive(Clone, Debug)]
pub struct Dag {
    graph: WeightedDigraph,
    topo: Vec<usize>,
}

impl Dag {
    /// Wraps a graph, computing the witness; fails on a cyclic input.
    pub fn new(graph: WeightedDigraph) -> Result<Self, Error> {
        let topo = graph.topological_order()?;
        Ok(Dag { graph, topo })
    }

    /// Wraps a graph with a caller-supplied topological order, validating it.
    pub fn with_order(graph: WeightedDigraph, topo: Vec<usize>) -> Result<Self, Error> {
        let n = graph.n();
        if topo.len() != n {
            return Err(Error::InvalidParam("topological order has wrong length".into()));
        }
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in topo.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return Err(Error::InvalidParam("topological order is not a permutation".into()));
            }
            pos[v] = i;
        }
        for e in graph.edges() {
            if pos[e.u] >= pos[e.v] {
                return Err(Error::InternalInvariantViolation(format!(
                    "edge ({}, {}) violates the supplied order",
                    e.u, e.v
                )));
            }
        }
        Ok(Dag { graph, topo })
    }

    pub fn graph(&self) -> &WeightedDigraph {
        &self.graph
    }

    pub fn topo(&self) -> &[usize] {
        &self.topo
    }

    /// Single-source shortest distances in the DAG.
    pub fn distances_from(&self, src: usize) -> Vec<Option<u64>> {
        // One pass in topological order, O(n + m).
        let n = self.graph.n();
        let mut dist: Vec<Option<u64>> = vec![None; n];
        dist[src] = Some(0);
        for &u in &self.topo {
            let Some(d) = dist[u] else { continue };
            for &(v, w) in self.graph.out(u) {
                let nd = d.checked_add(w).expect("distance overflow");
                if dist[v].map_or(true, |old| nd < old) {
                    dist[v] = Some(nd);
                }
            }
        }
        dist
    }
}

/// How a cover was produced; selects the builder and labels the file format.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverMethod {
    Ldd,
    Reach2,
    Orders,
    SpDags,
}

impl CoverMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            CoverMethod::Ldd => "ldd",
            CoverMethod::Reach2 => "reach2",
            CoverMethod::Orders => "orders",
            CoverMethod::SpDags => "sp-dags",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ldd" => Some(CoverMethod::Ldd),
            "reach2" => Some(CoverMethod::Reach2),
            "orders" => Some(CoverMethod::Orders),
            "sp-dags" => Some(CoverMethod::SpDags),
            _ => None,
        }
    }
}

/// A collection of DAGs covering a base graph, with the ledger of edges that
/// do not occur in the base graph (deduplicated as vertex pairs).
#[derive(Clone, Debug)]
pub struct DagCover {
    pub n: usize,
    pub dags: Vec<Dag>,
    pub additional_edges: Vec<Edge>,
    pub seed: u64,
    pub method: CoverMethod,
}

/// Collects `(union of DAG edges) \ E(base)` as vertex pairs, keeping the
/// minimum weight seen for each pair, sorted by `(u, v)`.
pub fn additional_edges(base: &WeightedDigraph, dags: &[Dag]) -> Vec<Edge> {
    let mut extra: std::collections::BTreeMap<(usize, usize), u64> = std::collections::BTreeMap::new();
    for dag in dags {
        for e in dag.graph().edges() {
            if base.edge_weight(e.u, e.v).is_none() {
                extra
                    .entry((e.u, e.v))
                    .and_modify(|w| *w = (*w).min(e.w))
                    .or_insert(e.w);
            }
        }
    }
    extra.into_iter().map(|((u, v), w)| Edge::new(u, v, w)).collect()
}

impl DagCover {
    /// Assembles a cover, computing the additional-edge ledger against `base`.
    pub fn assemble(
        base: &WeightedDigraph,
        dags: Vec<Dag>,
        seed: u64,
        method: CoverMethod,
    ) -> Self {
        let additional = additional_edges(base, &dags);
        DagCover { n: base.n(), dags, additional_edges: additional, seed, method }
    }

    /// The serializable form (plain edge lists, no acyclicity witness).
    pub fn to_file(&self) -> CoverFile {
        CoverFile {
            n: self.n,
            dags: self
                .dags
                .iter()
                .map(|d| CoverFileDag {
                    edges: d.graph().edges().iter().map(|e| (e.u, e.v, e.w)).collect(),
                })
                .collect(),
            additional_edges: self.additional_edges.iter().map(|e| (e.u, e.v, e.w)).collect(),
            seed: self.seed,
            method: self.method.as_str().to_string(),
        }
    }
}

/// One DAG entry of a cover file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverFileDag {
    pub edges: Vec<(usize, usize, u64)>,
}

/// The on-disk cover: edge lists only, so invalid covers (e.g. with a cyclic
/// "DAG") can be loaded and then *reported* invalid by verification.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverFile {
    pub n: usize,
    pub dags: Vec<CoverFileDag>,
    pub additional_edges: Vec<(usize, usize, u64)>,
    pub seed: u64,
    pub method: String,
}

impl CoverFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cover serialization")
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text)
            .map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })
    }

    pub fn load(path: impl AsRef<FsPath>) -> Result<Self, Error> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<FsPath>) -> Result<(), Error> {
        fs::write(path, self.to_json())?;
        Ok(())
    }
}

/// Dense all-pairs distance table; `None` entries are unreachable pairs.
#[derive(Clone, Debug)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<Option<u64>>,
}

impl DistanceMatrix {
    pub fn from_rows(rows: Vec<Vec<Option<u64>>>) -> Self {
        let n = rows.len();
        let mut dist = Vec::with_capacity(n * n);
        for row in &rows {
            assert_eq!(row.len(), n, "distance matrix must be square");
            dist.extend_from_slice(row);
        }
        DistanceMatrix { n, dist }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> Option<u64> {
        self.dist[u * self.n + v]
    }
}

/// Bit-packed reachability matrix over ordered vertex pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachMatrix {
    n: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl ReachMatrix {
    pub fn empty(n: usize) -> Self {
        let words_per_row = n.div_ceil(64);
        ReachMatrix { n, words_per_row, bits: vec![0; n * words_per_row.max(1)] }
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Self {
        let mut m = Self::empty(rows.len());
        for (s, row) in rows.iter().enumerate() {
            for (t, &reach) in row.iter().enumerate() {
                if reach {
                    m.set(s, t);
                }
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn set(&mut self, s: usize, t: usize) {
        self.bits[s * self.words_per_row + t / 64] |= 1u64 << (t % 64);
    }

    pub fn get(&self, s: usize, t: usize) -> bool {
        self.bits[s * self.words_per_row + t / 64] >> (t % 64) & 1 == 1
    }

    /// OR-in another matrix of the same dimension.
    pub fn union_with(&mut self, other: &ReachMatrix) {
        assert_eq!(self.n, other.n);
        for (w, &o) in self.bits.iter_mut().zip(&other.bits) {
            *w |= o;
        }
    }

    /// All set pairs in row-major order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for s in 0..self.n {
            for t in 0..self.n {
                if self.get(s, t) {
                    out.push((s, t));
                }
            }
        }
        out
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }
}
