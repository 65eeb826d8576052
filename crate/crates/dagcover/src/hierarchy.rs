//! Laminar decomposition hierarchy built by repeated diameter halving.
//!
//! Level `i` of the hierarchy looks at the residual graph `G_i` — the input
//! with every edge cut at levels `0..i` removed — and records three things:
//! the target diameter `d_i = nW / 2^(i+1)` (an exact rational, never
//! rounded), the strongly connected components of `G_i` *before* this
//! level's cut, and the set of edges the decomposition routine removes at
//! this level.  Because `d_i` halves each level and the cutter guarantees
//! residual components of weak diameter at most `d_i`, after
//! `z = ceil(log2(nW))` rounds every surviving component is a single vertex
//! and the residual graph is acyclic.
//!
//! The component partitions form a refinement chain: each level-`i+1` block
//! is contained in exactly one level-`i` block.  We store the blocks of
//! every level in a canonical order — children of a lower-ranked parent
//! first, and siblings by topological position of their condensation inside
//! the parent (ties broken by smallest contained vertex id).  With that
//! ordering the *index* of a block doubles as its rank, every block is a
//! contiguous interval of the final vertex permutation, and the
//! permutation itself is simultaneously a topological order of every
//! residual graph `G_i` restricted to inter-block edges.
//!
//! Two hard invariants are asserted on every build:
//!
//! * every multi-vertex block at level `i >= 1` has weak diameter at most
//!   `2 d_i` measured in the *original* graph, and
//! * every inter-block residual edge goes from a lower-ranked block to a
//!   higher-ranked one.
//!
//! One corner needs care: when `nW` is a power of two the final cutting
//! round runs at `d_(z-1) = 1` and may legally leave a unit-weight cycle
//! intact (its weak diameter is 1).  In that case the leftover intra-block
//! edges are folded into the last cut set so that level `z` is always a
//! partition into singletons and the residual graph is always acyclic.

use crate::graph::WeightedDigraph;
use crate::ldd::{directed_ldd, LddParams};
use crate::rational::Rational;
use crate::rng::derive_seed;

/// One level of the hierarchy: target diameter, the edges cut at this
/// level (as indices into the *input* graph's edge list, ascending), and
/// the strongly connected components of the residual graph as it looked
/// before the cut, in rank order.
#[derive(Clone, Debug)]
pub struct Level {
    /// Target weak diameter `nW / 2^(i+1)` for this level, kept exact.
    pub d: Rational,
    /// Indices into the original edge list of the edges removed here.
    pub cut_edges: Vec<usize>,
    /// Blocks of the level partition, ordered by rank.  Block `b` at this
    /// level has rank `b`; vertices inside a block are listed ascending.
    pub blocks: Vec<Vec<usize>>,
}

/// The total vertex order induced by the finest level of the hierarchy.
#[derive(Clone, Debug)]
pub struct VertexOrder {
    /// `perm[k]` is the vertex at position `k`.
    pub perm: Vec<usize>,
    /// `pos[v]` is the position of vertex `v`; inverse of `perm`.
    pub pos: Vec<usize>,
}

impl VertexOrder {
    /// True when `u` precedes `v` in the order.
    pub fn precedes(&self, u: usize, v: usize) -> bool {
        self.pos[u] < self.pos[v]
    }
}

/// Distinguished vertices per block, used when translating residual edges
/// into cross-block connector edges.
#[derive(Clone, Debug)]
pub struct Representatives {
    /// `r1[i][b]`: the order-minimal vertex of block `b` at level `i`.
    pub r1: Vec<Vec<usize>>,
    /// `r2[i][b]`: the order-maximal vertex of block `b` at level `i`.
    pub r2: Vec<Vec<usize>>,
    /// For every input edge, the smallest level at which its endpoints lie
    /// in different blocks.  Well defined because the top level is all
    /// singletons and self-loops are rejected at construction.
    pub edge_level: Vec<usize>,
}

/// The full decomposition of one input graph.
#[derive(Clone, Debug)]
pub struct Hierarchy {
    /// Number of halving rounds; levels run `0..=z`.
    pub z: usize,
    /// Per-level data, index `i` in `0..=z`.  `levels[z].cut_edges` is
    /// always empty and `levels[z].blocks` are all singletons.
    pub levels: Vec<Level>,
    /// `scc_of[i][v]`: index (= rank) of the block containing `v` at
    /// level `i`.
    pub scc_of: Vec<Vec<usize>>,
    /// The vertex order realised by level `z`.
    pub order: VertexOrder,
    /// Block representatives and edge separation levels.
    pub reps: Representatives,
}

impl Hierarchy {
    /// The vertices of the block containing `v` at `level`.
    pub fn block(&self, level: usize, v: usize) -> &[usize] {
        &self.levels[level].blocks[self.scc_of[level][v]]
    }

    /// Smallest level at which the endpoints of input edge `e` separate.
    pub fn edge_level(&self, e: usize) -> usize {
        self.reps.edge_level[e]
    }

    /// The residual acyclic graph left after all cuts: the input minus
    /// every edge listed in any level's cut set, with original weights.
    pub fn residual(&self, g: &WeightedDigraph) -> WeightedDigraph {
        let mut alive = vec![true; g.edges().len()];
        for level in &self.levels {
            for &e in &level.cut_edges {
                alive[e] = false;
            }
        }
        let kept = g
            .edges()
            .iter()
            .enumerate()
            .filter(|&(e, _)| alive[e])
            .map(|(_, &ed)| ed);
        WeightedDigraph::from_edges(g.n(), kept).expect("residual edges come from a valid graph")
    }

    /// Machine-readable dump of the level structure for debugging: the
    /// round count, per-level diameters (as numerator/denominator), cut
    /// sets and blocks, and the final permutation.
    pub fn debug_json(&self) -> String {
        let levels: Vec<serde_json::Value> = self
            .levels
            .iter()
            .map(|lv| {
                serde_json::json!({
                    "d_num": lv.d.num(),
                    "d_den": lv.d.den(),
                    "cut_edges": lv.cut_edges,
                    "sccs": lv.blocks,
                })
            })
            .collect();
        serde_json::json!({
            "z": self.z,
            "levels": levels,
            "perm": self.order.perm,
        })
        .to_string()
    }
}

/// `ceil(log2(x))` for `x >= 1`.
fn ceil_log2(x: u64) -> usize {
    debug_assert!(x >= 1);
    x.next_power_of_two().trailing_zeros() as usize
}

/// Materialise the subgraph of `g` consisting of the edges whose `alive`
/// flag is set.  Returns the subgraph together with the map from its edge
/// indices back to indices in `g`; because both edge lists are sorted the
/// same way, the map is simply the ascending list of alive indices.
fn alive_subgraph(g: &WeightedDigraph, alive: &[bool]) -> (WeightedDigraph, Vec<usize>) {
    let mut ids = Vec::new();
    let mut edges = Vec::new();
    for (e, &ed) in g.edges().iter().enumerate() {
        if alive[e] {
            ids.push(e);
            edges.push(ed);
        }
    }
    let sub = WeightedDigraph::from_edges(g.n(), edges)
        .expect("subgraph of a valid graph is valid");
    (sub, ids)
}

/// Split each block of `parent` into the strongly connected components of
/// `g` induced on the block, appending children in canonical condensation
/// order.  The result refines `parent` and its block order extends the
/// parent's rank order.
fn refine_blocks(g: &WeightedDigraph, parent: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut mask = vec![false; g.n()];
    for block in parent {
        if block.len() == 1 {
            out.push(block.clone());
            continue;
        }
        for &v in block {
            mask[v] = true;
        }
        out.extend(g.scc_masked(Some(&mask)));
        for &v in block {
            mask[v] = false;
        }
    }
    out
}

/// Map blocks to per-vertex block indices.
fn index_blocks(n: usize, blocks: &[Vec<usize>]) -> Vec<usize> {
    let mut of = vec![usize::MAX; n];
    for (b, block) in blocks.iter().enumerate() {
        for &v in block {
            of[v] = b;
        }
    }
    debug_assert!(of.iter().all(|&b| b != usize::MAX));
    of
}

/// Build the full hierarchy for `g`.  Level `i` cuts with target diameter
/// `nW / 2^(i+1)` using an independent random substream derived from
/// (`seed`, `i`); the construction is deterministic in (`g`, `seed`) and
/// single-threaded.
///
/// Panics if an internal invariant fails; the invariants hold for every
/// valid input, so a panic here is a bug in the decomposition, not bad
/// input.
pub fn build_hierarchy(g: &WeightedDigraph, seed: u64) -> Hierarchy {
    let n = g.n();
    let m = g.edges().len();
    let nw = (n as u64) * g.max_weight().max(1);
    let z = ceil_log2(nw);

    let mut alive = vec![true; m];
    let (mut cur, mut cur_ids) = alive_subgraph(g, &alive);
    // Level-0 blocks: the components of the input itself, in canonical
    // condensation order, which is a valid rank order for level 0.
    let mut blocks = cur.scc();
    let mut levels: Vec<Level> = Vec::with_capacity(z + 1);

    for i in 0..z {
        let d = Rational::new(nw, 1u64 << (i + 1));
        let params = LddParams::new(d, derive_seed(seed, i as u64));
        let res = directed_ldd(&cur, &params).expect("default cut parameters are valid");
        let mut cut_global: Vec<usize> = res.cut_edges.iter().map(|&k| cur_ids[k]).collect();
        cut_global.sort_unstable();
        for &e in &cut_global {
            alive[e] = false;
        }
        let (next, next_ids) = alive_subgraph(g, &alive);
        let next_blocks = refine_blocks(&next, &blocks);
        // Hard guarantee for the next level: every multi-vertex component
        // of the cut graph has weak diameter at most d measured in the
        // original graph (the cutter enforces it in the residual graph,
        // and original distances are no larger).
        for block in &next_blocks {
            if block.len() >= 2 {
                let wd = g
                    .weak_diameter(block)
                    .expect("block is strongly connected in a subgraph of g");
                assert!(
                    d >= wd,
                    "level {} block has weak diameter {} exceeding target {}",
                    i + 1,
                    wd,
                    d
                );
            }
        }
        levels.push(Level {
            d,
            cut_edges: cut_global,
            blocks,
        });
        blocks = next_blocks;
        cur = next;
        cur_ids = next_ids;
    }

    // When nW is a power of two the last round runs at d = 1 and may leave
    // unit-weight cycles whole.  Fold their edges into the last cut set so
    // the top level is always singletons.
    if blocks.iter().any(|b| b.len() >= 2) {
        assert!(z >= 1, "a single vertex cannot form a multi-vertex block");
        let block_of = index_blocks(n, &blocks);
        let mut extra: Vec<usize> = cur
            .edges()
            .iter()
            .enumerate()
            .filter(|&(_, ed)| block_of[ed.u] == block_of[ed.v])
            .map(|(k, _)| cur_ids[k])
            .collect();
        for &e in &extra {
            alive[e] = false;
        }
        let last = levels.last_mut().expect("z >= 1 so at least one level exists");
        last.cut_edges.append(&mut extra);
        last.cut_edges.sort_unstable();
        let parent = last.blocks.clone();
        // Re-refine the previous partition against the thinned graph;
        // removing every intra-component edge leaves nothing cyclic.
        let (thinned, _) = alive_subgraph(g, &alive);
        blocks = refine_blocks(&thinned, &parent);
        assert!(
            blocks.iter().all(|b| b.len() == 1),
            "residual components must be singletons after folding"
        );
    }

    let d_top = Rational::new(nw, 1u64 << (z + 1));
    levels.push(Level {
        d: d_top,
        cut_edges: Vec::new(),
        blocks,
    });

    // The top-level blocks, in rank order, spell out the vertex order.
    let perm: Vec<usize> = levels[z].blocks.iter().map(|b| b[0]).collect();
    assert_eq!(perm.len(), n, "top level must have one block per vertex");
    let mut pos = vec![0usize; n];
    for (k, &v) in perm.iter().enumerate() {
        pos[v] = k;
    }
    let order = VertexOrder { perm, pos };

    let scc_of: Vec<Vec<usize>> = levels
        .iter()
        .map(|lv| index_blocks(n, &lv.blocks))
        .collect();

    // Every block must be a contiguous run of the final order (refinement
    // plus rank-ordered storage guarantees it), and every residual edge
    // crossing two blocks must respect block rank.
    let mut r1 = Vec::with_capacity(z + 1);
    let mut r2 = Vec::with_capacity(z + 1);
    for (i, lv) in levels.iter().enumerate() {
        let mut lo = Vec::with_capacity(lv.blocks.len());
        let mut hi = Vec::with_capacity(lv.blocks.len());
        let mut prev_end: Option<usize> = None;
        for block in &lv.blocks {
            let min_pos = block.iter().map(|&v| order.pos[v]).min().expect("blocks are nonempty");
            let max_pos = block.iter().map(|&v| order.pos[v]).max().expect("blocks are nonempty");
            assert_eq!(
                max_pos - min_pos + 1,
                block.len(),
                "level {} block is not contiguous in the final order",
                i
            );
            if let Some(end) = prev_end {
                assert_eq!(min_pos, end + 1, "level {} blocks out of rank order", i);
            }
            prev_end = Some(max_pos);
            lo.push(order.perm[min_pos]);
            hi.push(order.perm[max_pos]);
        }
        r1.push(lo);
        r2.push(hi);
    }

    let mut edge_level = Vec::with_capacity(m);
    for ed in g.edges() {
        let lvl = (0..=z)
            .find(|&i| scc_of[i][ed.u] != scc_of[i][ed.v])
            .expect("top level separates every pair");
        edge_level.push(lvl);
    }

    // Rank soundness: at every level, each surviving inter-block edge goes
    // from a lower rank to a higher rank.
    {
        let mut alive_now = vec![true; m];
        for (i, lv) in levels.iter().enumerate() {
            for (e, ed) in g.edges().iter().enumerate() {
                if alive_now[e] {
                    let (bu, bv) = (scc_of[i][ed.u], scc_of[i][ed.v]);
                    if bu != bv {
                        assert!(
                            bu < bv,
                            "level {} edge {}->{} violates block rank order",
                            i,
                            ed.u,
                            ed.v
                        );
                    }
                }
            }
            for &e in &lv.cut_edges {
                alive_now[e] = false;
            }
        }
    }

    Hierarchy {
        z,
        levels,
        scc_of,
        order,
        reps: Representatives { r1, r2, edge_level },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gen_directed_cycle, random_digraph, random_strongly_connected};
    use crate::graph::Edge;

    fn cycle4() -> WeightedDigraph {
        gen_directed_cycle(4).unwrap().graph
    }

    #[test]
    fn single_vertex_is_trivial() {
        let g = WeightedDigraph::edgeless(1);
        let h = build_hierarchy(&g, 0);
        assert_eq!(h.z, 0);
        assert_eq!(h.levels.len(), 1);
        assert_eq!(h.order.perm, vec![0]);
        assert_eq!(h.levels[0].blocks, vec![vec![0]]);
        assert!(h.levels[0].cut_edges.is_empty());
    }

    #[test]
    fn four_cycle_structure_is_seed_independent() {
        // n = 4, W = 1 gives z = 2 with diameters 2, 1, 1/2.  The level-0
        // cut carves the singleton ball around vertex 0 (radius cap 0), so
        // exactly the edge (0,1) — edge index 0 — is cut, the residual is
        // the path 1->2->3->0, and no later level cuts anything.  No
        // randomness is consumed on the way, hence identical output for
        // every seed.
        for seed in [0u64, 7, 123_456] {
            let h = build_hierarchy(&cycle4(), seed);
            assert_eq!(h.z, 2);
            assert_eq!(h.levels[0].d, Rational::new(2, 1));
            assert_eq!(h.levels[1].d, Rational::new(1, 1));
            assert_eq!(h.levels[2].d, Rational::new(1, 2));
            assert_eq!(h.levels[0].cut_edges, vec![0]);
            assert!(h.levels[1].cut_edges.is_empty());
            assert!(h.levels[2].cut_edges.is_empty());
            assert!(h.levels[2].blocks.iter().all(|b| b.len() == 1));
            assert_eq!(h.order.perm, vec![1, 2, 3, 0]);
            assert_eq!(h.reps.edge_level, vec![1, 1, 1, 1]);
            // Level-0 block {0,1,2,3}: order-extremes are 1 and 0.
            assert_eq!(h.reps.r1[0], vec![1]);
            assert_eq!(h.reps.r2[0], vec![0]);
        }
    }

    #[test]
    fn two_cycle_folds_leftover_unit_cycle() {
        // nW = 2 is a power of two: the only cutting round runs at d = 1
        // and leaves the unit 2-cycle intact (weak diameter 1), so both
        // edges must be folded into the last cut set.
        let g = gen_directed_cycle(2).unwrap().graph;
        let h = build_hierarchy(&g, 0);
        assert_eq!(h.z, 1);
        assert_eq!(h.levels[0].cut_edges, vec![0, 1]);
        assert!(h.levels[1].blocks.iter().all(|b| b.len() == 1));
        assert_eq!(h.order.perm, vec![0, 1]);
        assert!(h.residual(&g).edges().is_empty());
    }

    #[test]
    fn acyclic_input_cuts_nothing_and_orders_topologically() {
        // Forward edges only: already acyclic, so every level's residual
        // components are singletons and nothing is ever cut.  The final
        // order must then be the canonical topological order.
        let mut edges = Vec::new();
        for u in 0..10usize {
            for v in (u + 1)..10 {
                if (u * 31 + v * 17) % 3 == 0 {
                    edges.push(Edge::new(u, v, ((u + v) % 5 + 1) as u64));
                }
            }
        }
        let g = WeightedDigraph::from_edges(10, edges).unwrap();
        let h = build_hierarchy(&g, 9);
        for lv in &h.levels {
            assert!(lv.cut_edges.is_empty());
        }
        assert_eq!(h.order.perm, g.topological_order().unwrap());
        for ed in g.edges() {
            assert!(h.order.precedes(ed.u, ed.v));
        }
    }

    #[test]
    fn residual_is_acyclic_and_partitions_refine() {
        for seed in 0..6u64 {
            let g = random_digraph(40, 120, 8, 0x5eed_0000 + seed);
            let h = build_hierarchy(&g, seed);
            assert!(h.residual(&g).topological_order().is_ok());
            assert_eq!(h.levels.len(), h.z + 1);
            assert!(h.levels[h.z].blocks.iter().all(|b| b.len() == 1));
            for i in 0..h.z {
                // Every child block sits inside a single parent block.
                for child in &h.levels[i + 1].blocks {
                    let parent = h.scc_of[i][child[0]];
                    assert!(child.iter().all(|&v| h.scc_of[i][v] == parent));
                }
                // Parent order is preserved by the child order.
                let child_parent: Vec<usize> = h.levels[i + 1]
                    .blocks
                    .iter()
                    .map(|b| h.scc_of[i][b[0]])
                    .collect();
                let mut sorted = child_parent.clone();
                sorted.sort_unstable();
                assert_eq!(child_parent, sorted);
            }
        }
    }

    #[test]
    fn order_separates_exactly_the_reachable_direction_on_sc_input() {
        // On strongly connected inputs every ordered pair is reachable, so
        // this checks the order is a permutation and blocks stay intervals
        // (the contiguity asserts inside the build do the heavy lifting).
        let g = random_strongly_connected(24, 60, 6, 0xcafe);
        let h = build_hierarchy(&g, 3);
        let mut seen = vec![false; 24];
        for &v in &h.order.perm {
            assert!(!seen[v]);
            seen[v] = true;
        }
        assert!(seen.into_iter().all(|b| b));
        assert_eq!(h.scc_of[0][0], 0);
        assert_eq!(h.levels[0].blocks.len(), 1);
    }

    #[test]
    fn cut_edges_lie_on_levels_where_endpoints_share_a_block() {
        // An edge cut at level i connects two vertices of one strongly
        // connected component of G_i, so its endpoints must share their
        // level-i block.
        for seed in 0..4u64 {
            let g = random_strongly_connected(30, 90, 4, 0xd00d + seed);
            let h = build_hierarchy(&g, seed);
            for (i, lv) in h.levels.iter().enumerate() {
                for &e in &lv.cut_edges {
                    let ed = g.edges()[e];
                    assert_eq!(
                        h.scc_of[i][ed.u], h.scc_of[i][ed.v],
                        "cut edge must be intra-block at its level"
                    );
                }
            }
        }
    }

    #[test]
    fn debug_dump_has_the_advertised_shape() {
        let h = build_hierarchy(&cycle4(), 0);
        let v: serde_json::Value = serde_json::from_str(&h.debug_json()).unwrap();
        assert_eq!(v["z"], 2);
        assert_eq!(v["levels"].as_array().unwrap().len(), 3);
        assert_eq!(v["levels"][0]["d_num"], 2);
        assert_eq!(v["levels"][0]["d_den"], 1);
        assert_eq!(v["perm"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn weak_diameter_bound_holds_at_every_level() {
        // Re-check the build-time assertion from the outside with the
        // brute-force weak-diameter oracle.
        let g = random_strongly_connected(32, 100, 8, 0xfeed);
        let h = build_hierarchy(&g, 11);
        for i in 1..=h.z {
            // Blocks at level i are residual components of the level-(i-1)
            // cut, so the guarantee is twice the level-i target.
            let bound = h.levels[i].d.mul_int(2);
            for block in &h.levels[i].blocks {
                if block.len() >= 2 {
                    let wd = g.weak_diameter(block).unwrap();
                    assert!(bound >= wd, "level {i} weak diameter {wd} > {bound}");
                }
            }
        }
    }
}
