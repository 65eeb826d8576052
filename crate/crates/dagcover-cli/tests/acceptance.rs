//! The eleven acceptance gates of the workspace, one test per criterion:
//! corpus-scale soundness of the random decomposition and its level
//! hierarchy, the end-to-end cover guarantees with recorded empirical
//! constants, hop-edge and embedding properties, the baseline covers'
//! exactness, generator audits, and byte determinism of the command-line
//! surface.
//!
//! Each test finishes by printing a single `criterion NN ...: PASS` line
//! with its measured quantities; the assertions ahead of that line are
//! the gate. The empirical constants below were calibrated on the exact
//! corpora these tests pin (seeds included) and recorded with roughly a
//! third of headroom; they are deliberately conservative so a genuine
//! regression trips them while float noise cannot.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use dagcover::baselines::{
    random_order_exact_cover, reachability_two_cover, shortest_path_dag_cover,
};
use dagcover::cover::{build_dag_pair, default_repetitions, build_ldd_cover, sample_embedding_dag, scc_hop_edges};
use dagcover::gen::{
    crossing_pair_descent, gen_base_graph, gen_clique_replacement, gen_conflict_control,
    gen_directed_cycle, gen_log_diameter, gen_product_graph, random_digraph,
    random_strongly_connected,
};
use dagcover::graph::WeightedDigraph;
use dagcover::hierarchy::{build_hierarchy, Hierarchy};
use dagcover::ldd::{monte_carlo_ldd, LddParams};
use dagcover::par;
use dagcover::rational::Rational;
use dagcover::rng::derive_seed;
use dagcover::verify::{
    predecessor_conflict_check, verify_distance_cover, verify_path_family,
    verify_reachability_cover, Distortion,
};

/// Recorded cut-rate constant: per-edge cut frequency stays below
/// C·ln²(n)·w/d plus three standard errors. Calibrated worst need on the
/// pinned corpus: 0.4832.
const LDD_CUT_RATE_C: f64 = 0.6;

/// Recorded additional-edge constant: ledger size stays below
/// C·(m+n)·⌈lg n⌉³. Calibrated worst need: 0.0887.
const COVER_EXTRA_C: f64 = 0.12;

/// Recorded distortion constant: measured stretch stays below
/// C·lg³(n)·lg lg(n). Calibrated worst need: 0.0833.
const COVER_DISTORTION_C: f64 = 0.12;

fn ceil_lg(n: usize) -> u32 {
    assert!(n >= 1);
    if n == 1 { 0 } else { usize::BITS - (n - 1).leading_zeros() }
}

/// The shared random-digraph corpus: 20 graphs, n = 64, m ≈ 4n, W ≤ 8.
fn digraph_corpus() -> Vec<WeightedDigraph> {
    (0..20u64).map(|gi| random_digraph(64, 256, 8, derive_seed(0xACCE97, gi))).collect()
}

#[test]
fn acceptance_01_decomposition_soundness_and_cut_rate() {
    let started = Instant::now();
    let ln2 = (64f64).ln().powi(2);
    let mut worst_needed = 0f64;
    let mut runs = 0usize;
    for (gi, g) in digraph_corpus().iter().enumerate() {
        let w = g.max_weight();
        let n = g.n();
        // Original strongly connected components, for the cut-locality check.
        let mut comp_of = vec![usize::MAX; n];
        for (ci, comp) in g.scc().iter().enumerate() {
            for &v in comp {
                comp_of[v] = ci;
            }
        }
        for (di, d) in [(0u64, w * 64 / 8), (1, w * 64 / 32)] {
            let params = LddParams::new(
                Rational::from_int(d),
                derive_seed(0xD00D, gi as u64 * 2 + di),
            );
            // 200 seeded runs; every run re-verifies the diameter
            // postcondition internally and panics on violation, which
            // makes the hard part of this criterion 100% by survival.
            let result = monte_carlo_ldd(g, &params, 200).expect("valid parameters");
            runs += 200;

            // Independent re-check of the first run with the plain oracle.
            for comp in &result.components {
                if comp.len() >= 2 {
                    let wd = g.weak_diameter(comp).expect("residual SCC is connected enough");
                    assert!(wd <= d, "graph {gi}, d {d}: residual weak diameter {wd}");
                }
            }
            for &ei in &result.cut_edges {
                let e = g.edges()[ei];
                assert_eq!(comp_of[e.u], comp_of[e.v], "cut edge outside an SCC");
            }

            // Per-edge cut frequency against the recorded constant.
            let alpha = result.measured_alpha_hat.expect("Monte-Carlo fills the table");
            for (ei, e) in g.edges().iter().enumerate() {
                let se = (alpha[ei] * (1.0 - alpha[ei]) / 200.0).sqrt();
                let bound = LDD_CUT_RATE_C * ln2 * e.w as f64 / d as f64 + 3.0 * se;
                assert!(
                    alpha[ei] <= bound,
                    "graph {gi}, d {d}, edge {ei} (w {}): frequency {:.4} over bound {bound:.4}",
                    e.w, alpha[ei]
                );
                let needed = (alpha[ei] - 3.0 * se) * d as f64 / (ln2 * e.w as f64);
                worst_needed = worst_needed.max(needed);
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed <= Duration::from_secs(60), "took {elapsed:?}, budget 60s");
    println!(
        "criterion 01 (decomposition soundness, cut rate): PASS — {runs} runs, \
         recorded C {LDD_CUT_RATE_C} (worst needed {worst_needed:.4}), {elapsed:.2?}"
    );
}

/// Shared checks of one hierarchy build over its host graph.
fn check_hierarchy(g: &WeightedDigraph, h: &Hierarchy) {
    let n = g.n();

    // The vertex order is a permutation and `pos` is its inverse.
    assert_eq!(h.order.perm.len(), n);
    for (i, &v) in h.order.perm.iter().enumerate() {
        assert_eq!(h.order.pos[v], i);
    }
    for u in 0..n {
        for v in 0..n {
            if u != v {
                assert!(h.order.precedes(u, v) ^ h.order.precedes(v, u));
            }
        }
    }

    let mut block_of_prev: Option<Vec<usize>> = None;
    for (li, level) in h.levels.iter().enumerate() {
        // Blocks partition the vertex set...
        let mut block_of = vec![usize::MAX; n];
        for (bi, block) in level.blocks.iter().enumerate() {
            assert!(!block.is_empty());
            for &v in block {
                assert_eq!(block_of[v], usize::MAX, "vertex in two blocks");
                block_of[v] = bi;
            }
        }
        assert!(block_of.iter().all(|&b| b != usize::MAX));

        // ... refine the previous level ...
        if let Some(prev) = &block_of_prev {
            for block in &level.blocks {
                assert!(block.iter().all(|&v| prev[v] == prev[block[0]]));
            }
        }

        // ... are stored in the order's block order, occupying contiguous
        // position intervals ...
        let intervals: Vec<(usize, usize)> = level
            .blocks
            .iter()
            .map(|block| {
                let positions: Vec<usize> = block.iter().map(|&v| h.order.pos[v]).collect();
                let lo = *positions.iter().min().expect("nonempty block");
                let hi = *positions.iter().max().expect("nonempty block");
                assert_eq!(hi - lo + 1, block.len(), "level {li}: block not contiguous");
                (lo, hi)
            })
            .collect();
        let sorted = {
            let mut s = intervals.clone();
            s.sort_unstable();
            s
        };
        assert_eq!(intervals, sorted, "level {li}: blocks out of rank order");
        intervals.windows(2).for_each(|w| assert!(w[0].1 < w[1].0));

        // ... and obey the weak-diameter bound 2·d_i in the host graph.
        let bound = level.d.mul_int(2);
        for block in &level.blocks {
            if block.len() >= 2 {
                let wd = g.weak_diameter(block).expect("block weak diameter");
                assert!(
                    bound >= Rational::from_int(wd),
                    "level {li}: block of {} has weak diameter {wd} over {bound}",
                    block.len()
                );
            }
        }
        block_of_prev = Some(block_of);
    }

    // Final level: singletons spelling out the order.
    let top = h.levels.last().expect("at least one level");
    assert!(top.blocks.iter().all(|b| b.len() == 1));
    let spelled: Vec<usize> = top.blocks.iter().map(|b| b[0]).collect();
    assert_eq!(spelled, h.order.perm);

    // The residual graph is acyclic and ascends along the order.
    let residual = h.residual(g);
    assert!(residual.topological_order().is_ok());
    for e in residual.edges() {
        assert!(h.order.precedes(e.u, e.v));
    }
}

#[test]
fn acceptance_02_hierarchy_invariants() {
    let started = Instant::now();
    let mut builds = 0usize;
    for (gi, g) in digraph_corpus().iter().enumerate() {
        for s in 0..3u64 {
            let h = build_hierarchy(g, derive_seed(0xB11D, gi as u64 * 3 + s));
            check_hierarchy(g, &h);
            builds += 1;
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed <= Duration::from_secs(30), "took {elapsed:?}, budget 30s");
    println!(
        "criterion 02 (hierarchy refinement, order consistency, diameter bounds): PASS — \
         {builds} builds over 20 graphs, {elapsed:.2?}"
    );
}

/// The strongly connected cover corpus of criterion 3.
fn cover_corpus() -> Vec<WeightedDigraph> {
    let sizes = [16usize, 24, 32, 48, 64, 96, 128];
    (0..20u64)
        .map(|i| {
            let n = sizes[i as usize % sizes.len()];
            random_strongly_connected(n, 2 * n, 16, derive_seed(0xC0FE, i))
        })
        .collect()
}

#[test]
fn acceptance_03_main_cover_guarantees() {
    let started = Instant::now();
    let mut reseeds = 0usize;
    let mut worst_extra = 0f64;
    let mut worst_distortion = 0f64;
    for (i, g) in cover_corpus().iter().enumerate() {
        let n = g.n();
        let lg = ceil_lg(n) as f64;
        let reps = default_repetitions(n);
        assert_eq!(reps, 10 * ceil_lg(n) as usize);

        let mut seed = derive_seed(0x5EED, i as u64);
        let mut report;
        let mut file;
        loop {
            let cover = build_ldd_cover(g, reps, seed).expect("parameters are valid");
            file = cover.to_file();
            report = verify_distance_cover(g, &file, None);
            // Coverage is randomized; a missed pair is tolerated once
            // across the whole suite, rebuilt under a fresh seed.
            if report.uncovered_pairs.is_empty() {
                break;
            }
            reseeds += report.uncovered_pairs.len();
            assert!(reseeds <= 1, "more than one uncovered instance-pair across the suite");
            println!(
                "  instance {i} (n {n}): {} uncovered pair(s), re-seeding",
                report.uncovered_pairs.len()
            );
            seed = derive_seed(seed, 0xFA11);
        }
        // Acyclicity, edge lower bounds, coverage, ledger: the report's
        // hard checks all passed.
        assert!(report.ok, "instance {i}: {}", report.to_json());
        assert!(report.dag_acyclic.iter().all(|&a| a));
        assert!(report.lower_bound_ok);
        assert_eq!(report.dag_acyclic.len(), 2 * reps);

        let extra_bound = COVER_EXTRA_C * (g.m() + n) as f64 * lg.powi(3);
        let extra = file.additional_edges.len() as f64;
        assert!(
            extra <= extra_bound,
            "instance {i}: {extra} additional edges over bound {extra_bound:.1}"
        );
        worst_extra = worst_extra.max(extra / ((g.m() + n) as f64 * lg.powi(3)));

        let distortion = match report.max_distortion.expect("distance mode measures") {
            Distortion::Finite(r) => r.to_f64(),
            Distortion::Infinity => unreachable!("coverage was established"),
        };
        let distortion_bound = COVER_DISTORTION_C * lg.powi(3) * lg.log2();
        assert!(
            distortion <= distortion_bound,
            "instance {i}: distortion {distortion:.3} over bound {distortion_bound:.3}"
        );
        worst_distortion = worst_distortion.max(distortion / (lg.powi(3) * lg.log2()));
    }
    let elapsed = started.elapsed();
    assert!(elapsed <= Duration::from_secs(180), "took {elapsed:?}, budget 3min");
    println!(
        "criterion 03 (randomized cover: acyclic, lower-bounded, covering, sized, bounded \
         distortion): PASS — 20 instances, {reseeds} re-seeds, recorded C_m {COVER_EXTRA_C} \
         (worst needed {worst_extra:.4}), recorded C_distortion {COVER_DISTORTION_C} \
         (worst needed {worst_distortion:.4}), {elapsed:.2?}"
    );
}

#[test]
fn acceptance_04_hop_edges_are_two_hop_and_lower_bounded() {
    let started = Instant::now();
    let mut blocks_checked = 0usize;
    for (gi, g) in digraph_corpus().iter().enumerate() {
        let apsp = g.all_pairs();
        let h = build_hierarchy(g, derive_seed(0x40BB, gi as u64));
        for level in &h.levels {
            let hop_weight = level.d.mul_int(2).ceil();
            for block in &level.blocks {
                if block.len() < 2 {
                    continue;
                }
                let edges = scc_hop_edges(block, &h.order, level.d);
                let present: BTreeSet<(usize, usize)> =
                    edges.iter().map(|e| (e.u, e.v)).collect();
                for e in &edges {
                    // Uniform weight, dominating the true distance.
                    assert_eq!(e.w, hop_weight);
                    let true_dist = apsp.get(e.u, e.v).expect("block pairs are connected");
                    assert!(e.w >= true_dist, "hop edge under the true distance");
                }
                // Every order-respecting pair in the block has a path of
                // at most two hop edges, hence weight ≤ 2·⌈2d⌉.
                let mut ordered: Vec<usize> = block.clone();
                ordered.sort_unstable_by_key(|&v| h.order.pos[v]);
                for (ai, &u) in ordered.iter().enumerate() {
                    for &v in &ordered[ai + 1..] {
                        let ok = present.contains(&(u, v))
                            || ordered.iter().any(|&m| {
                                present.contains(&(u, m)) && present.contains(&(m, v))
                            });
                        assert!(ok, "graph {gi}: pair ({u}, {v}) needs more than two hops");
                    }
                }
                blocks_checked += 1;
            }
        }
    }
    let elapsed = started.elapsed();
    println!(
        "criterion 04 (per-block hop edges: two-hop reach at weight 2⌈2d⌉, distance-dominating): \
         PASS — {blocks_checked} blocks over 20 graphs, {elapsed:.2?}"
    );
}

#[test]
fn acceptance_05_embedding_samples_split_pairs_fairly() {
    let started = Instant::now();
    let g = random_strongly_connected(32, 64, 8, 0xF1B);
    let n = g.n();
    let tc = g.transitive_closure();
    let pairs: Vec<(usize, usize)> = tc.pairs().into_iter().take(20).collect();
    assert_eq!(pairs.len(), 20);
    let sources: Vec<usize> = {
        let mut s: Vec<usize> = pairs.iter().map(|&(s, _)| s).collect();
        s.sort_unstable();
        s.dedup();
        s
    };

    const SAMPLES: usize = 10_000;
    let per_sample: Vec<Vec<bool>> = par::map_range(SAMPLES, |k| {
        let dag = sample_embedding_dag(&g, derive_seed(7, k as u64)).expect("sampling succeeds");
        let mut reach_from = std::collections::BTreeMap::new();
        for &s in &sources {
            reach_from.insert(s, dag.distances_from(s));
        }
        pairs.iter().map(|&(s, t)| reach_from[&s][t].is_some()).collect()
    });
    let mut reached = vec![0u64; pairs.len()];
    for sample in &per_sample {
        for (c, &hit) in reached.iter_mut().zip(sample) {
            *c += hit as u64;
        }
    }
    // Each pair lands in the sampled DAG exactly when the fair coin picks
    // the side of the order the pair respects: Binomial(10000, 1/2).
    let three_sigma = 3.0 * (0.25f64 / SAMPLES as f64).sqrt();
    for (&(s, t), &hits) in pairs.iter().zip(&reached) {
        let freq = hits as f64 / SAMPLES as f64;
        assert!(
            (freq - 0.5).abs() <= three_sigma,
            "pair ({s}, {t}): frequency {freq:.4} strays from 1/2 by over {three_sigma:.4}"
        );
    }

    // Exact characterization on 50 full scans: the forward DAG of the
    // pair reaches s -> t iff the pair is reachable at all and s precedes
    // t in the hierarchy's vertex order.
    for k in 0..50u64 {
        let h = build_hierarchy(&g, derive_seed(0x5CA11, k));
        let (d1, _) = build_dag_pair(&g, &h).expect("pair construction succeeds");
        for s in 0..n {
            let dist = d1.distances_from(s);
            for t in 0..n {
                if s == t {
                    continue;
                }
                assert_eq!(
                    dist[t].is_some(),
                    tc.get(s, t) && h.order.precedes(s, t),
                    "scan {k}: pair ({s}, {t})"
                );
            }
        }
    }
    let elapsed = started.elapsed();
    println!(
        "criterion 05 (sampled embedding: fair pair frequency, order-exact forward reach): \
         PASS — {SAMPLES} samples over 20 pairs, 50 full scans, {elapsed:.2?}"
    );
}

#[test]
fn acceptance_06_reachability_two_cover_is_exact_and_small() {
    let started = Instant::now();
    for i in 0..50u64 {
        let n = 8 + (i as usize * 7) % 57; // 8..=64
        let m = 3 * n;
        let g = random_digraph(n, m, 5, derive_seed(0x2EAC4, i));
        let cover = reachability_two_cover(&g);
        let file = cover.to_file();
        assert!(
            file.additional_edges.len() <= g.m() + 2 * n,
            "instance {i}: {} additional edges over m + 2n = {}",
            file.additional_edges.len(),
            g.m() + 2 * n
        );
        let report = verify_reachability_cover(&g, &file);
        assert!(report.ok, "instance {i}: {}", report.to_json());
    }
    let elapsed = started.elapsed();
    assert!(elapsed <= Duration::from_secs(10), "took {elapsed:?}, budget 10s");
    println!(
        "criterion 06 (two-DAG reachability cover: exact closure, ≤ m + 2n additional): \
         PASS — 50 digraphs, {elapsed:.2?}"
    );
}

#[test]
fn acceptance_07_random_order_cover_is_distance_exact() {
    let started = Instant::now();
    let mut reseeds = 0usize;
    for i in 0..10u64 {
        let n = 6 + (i as usize % 6) * 2; // 6..=16
        let g = random_strongly_connected(n, n, 4, derive_seed(0x0BDE5, i));
        let mut seed = derive_seed(0x0BDE5, 100 + i);
        loop {
            let cover = random_order_exact_cover(&g, 2, seed).expect("within budget");
            let report = verify_distance_cover(&g, &cover.to_file(), None);
            let exact = report.ok
                && report.max_distortion == Some(Distortion::Finite(Rational::from_int(1)));
            if exact {
                break;
            }
            // The order sample is probabilistic; one miss across the
            // suite is tolerated and re-seeded.
            reseeds += 1;
            assert!(reseeds <= 1, "more than one inexact order cover across the suite");
            println!("  instance {i} (n {n}): inexact under seed {seed}, re-seeding");
            seed = derive_seed(seed, 0xFA11);
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed <= Duration::from_secs(60), "took {elapsed:?}, budget 60s");
    println!(
        "criterion 07 (exhaustive-order cover at d = 2: exact distances): PASS — \
         10 instances, {reseeds} re-seeds, {elapsed:.2?}"
    );
}

#[test]
fn acceptance_08_shortest_path_trees_are_a_perfect_cover() {
    let started = Instant::now();
    let fixtures: Vec<WeightedDigraph> = vec![
        gen_directed_cycle(4).expect("valid").graph,
        gen_log_diameter(16).expect("valid").graph,
        gen_base_graph(3, 9, 2, 2).expect("valid").graph,
        WeightedDigraph::edgeless(3),
        random_digraph(20, 60, 5, 0xF1C7),
        random_digraph(64, 256, 8, 0xABAD1),
        random_strongly_connected(32, 64, 16, 0x5AFE),
    ];
    for (i, g) in fixtures.iter().enumerate() {
        let file = shortest_path_dag_cover(g).to_file();
        assert!(file.additional_edges.is_empty(), "fixture {i} added edges");
        let report = verify_distance_cover(g, &file, None);
        assert!(report.ok, "fixture {i}: {}", report.to_json());
        assert_eq!(
            report.max_distortion,
            Some(Distortion::Finite(Rational::from_int(1))),
            "fixture {i} is not distortion-free"
        );
        assert_eq!(report.additional_edge_count, 0);
    }
    let elapsed = started.elapsed();
    println!(
        "criterion 08 (per-source tree cover: distortion exactly 1, zero additional edges): \
         PASS — {} fixtures, {elapsed:.2?}",
        fixtures.len()
    );
}

#[test]
fn acceptance_09_generator_families_audit_clean() {
    let started = Instant::now();

    // Grid instances across the desk-scale parameter range.
    let grids = [(2, 8, 1, 1), (3, 9, 2, 2), (4, 16, 2, 3), (5, 24, 3, 4), (6, 32, 4, 4)];
    for &(l, h, s, r) in &grids {
        let inst = gen_base_graph(l, h, s, r).expect("parameters fit the grid");
        let report = verify_path_family(&inst);
        assert!(report.ok, "grid {l}/{h}/{s}/{r}: {}", report.to_json());
    }

    // Products of the two smallest grids.
    let base_small = gen_base_graph(2, 5, 2, 2).expect("valid");
    let base_mid = gen_base_graph(3, 9, 2, 2).expect("valid");
    for base in [&base_small, &base_mid] {
        let prod = gen_product_graph(base).expect("valid base");
        let report = verify_path_family(&prod);
        assert!(report.ok, "product: {}", report.to_json());
    }

    // Clique replacements: both clique sizes, ten seeds each.
    let prod = gen_product_graph(&base_mid).expect("valid base");
    for c in [2usize, 3] {
        for seed in 0..10u64 {
            let inst = gen_clique_replacement(&prod, c, seed).expect("valid host");
            let report = verify_path_family(&inst);
            assert!(report.ok, "clique c {c} seed {seed}: {}", report.to_json());
        }
    }

    // Monte-Carlo over the random attachment: the canonical crossing
    // descends with probability (c-1)/2c = 1/4 at c = 2.
    const SEEDS: usize = 1000;
    let mut descents = 0u64;
    for seed in 0..SEEDS as u64 {
        let inst = gen_clique_replacement(&prod, 2, derive_seed(0xC1055, seed)).expect("valid");
        match crossing_pair_descent(&inst) {
            Some(true) => descents += 1,
            Some(false) => {}
            None => panic!("the fixed crossing pair disappeared at seed {seed}"),
        }
    }
    let freq = descents as f64 / SEEDS as f64;
    let three_sigma = 3.0 * (0.25 * 0.75 / SEEDS as f64).sqrt();
    assert!(
        (freq - 0.25).abs() <= three_sigma,
        "descent frequency {freq:.4} strays from 1/4 by over {three_sigma:.4}"
    );

    let elapsed = started.elapsed();
    println!(
        "criterion 09 (generator audits: layering, disjointness, unique shortest paths; \
         crossing descent {freq:.4} ≈ 1/4): PASS — {elapsed:.2?}"
    );
}

#[test]
fn acceptance_10_log_diameter_family_and_conflict_audit() {
    let started = Instant::now();
    for n in [8usize, 16, 32, 64] {
        let inst = gen_log_diameter(n).expect("power of two");
        let g = &inst.graph;
        let mut diameter = 0;
        for s in 0..n {
            for d in g.dijkstra(s) {
                diameter = diameter.max(d.expect("the family is strongly connected"));
            }
        }
        let bound = 2 * ceil_lg(n) as u64 + 2;
        assert!(diameter <= bound, "n {n}: diameter {diameter} over {bound}");
    }
    for n in [8usize, 16] {
        let inst = gen_log_diameter(n).expect("power of two");
        assert!(
            predecessor_conflict_check(&inst, 1_000_000).expect("enumeration fits the cap"),
            "predecessor paths fail to conflict at n {n}"
        );
    }
    assert!(
        !predecessor_conflict_check(&gen_conflict_control(), 1_000_000)
            .expect("enumeration fits the cap"),
        "the forward tournament must not conflict"
    );
    let elapsed = started.elapsed();
    println!(
        "criterion 10 (shortcut cycle family: logarithmic diameter, predecessor conflicts): \
         PASS — {elapsed:.2?}"
    );
}

fn bin_run(dir: &Path, threads: usize, args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_dagcover"))
        .current_dir(dir)
        .arg("--threads")
        .arg(threads.to_string())
        .args(args)
        .output()
        .expect("binary launches");
    // A usage or runtime error would derail the tour; a verification
    // verdict (exit 0 or 1) is itself part of the compared output.
    assert_ne!(
        out.status.code(),
        Some(2),
        "command {args:?} errored:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

/// Runs the whole command tour in `dir`, returning every stdout and every
/// produced file, keyed for comparison.
fn command_tour(dir: &Path, threads: usize) -> Vec<(String, Vec<u8>)> {
    let commands: Vec<Vec<&str>> = vec![
        vec!["gen", "--family", "cycle", "--n", "12", "-o", "cyc"],
        vec!["gen", "--family", "diam", "--n", "16", "-o", "diam"],
        vec!["gen", "--family", "base", "--layers", "3", "--height", "9", "--sigma", "2",
             "--slopes", "2", "-o", "grid"],
        vec!["gen", "--family", "base", "--n", "40", "--p", "8", "-o", "sized"],
        vec!["gen", "--family", "product", "--base", "grid", "-o", "prod"],
        vec!["gen", "--family", "clique", "--base", "prod", "--c", "2", "--seed", "3", "-o", "cliq"],
        vec!["build", "--method", "ldd", "--reps", "40", "--seed", "9", "-i", "diam.graph.txt",
             "-o", "ldd.json"],
        vec!["build", "--method", "reach2", "-i", "diam.graph.txt", "-o", "reach2.json"],
        vec!["build", "--method", "orders", "-d", "1", "--seed", "2", "-i", "cyc.graph.txt",
             "-o", "orders.json"],
        vec!["build", "--method", "sp-dags", "-i", "diam.graph.txt", "-o", "trees.json"],
        vec!["verify", "--mode", "distance", "-g", "diam.graph.txt", "-c", "ldd.json"],
        vec!["stats", "-g", "diam.graph.txt", "-c", "trees.json"],
        vec!["embed", "-g", "cyc.graph.txt", "--samples", "200", "--seed", "5"],
        vec!["ldd", "-g", "diam.graph.txt", "-d", "5", "--seed", "1"],
    ];
    let mut observed = Vec::new();
    for args in &commands {
        let out = bin_run(dir, threads, args);
        observed.push((format!("stdout+exit of {args:?}"), {
            let mut bytes = out.stdout;
            bytes.extend(format!("\n[exit {:?}]", out.status.code()).into_bytes());
            bytes
        }));
    }
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .expect("tour directory")
        .map(|e| e.expect("entry").path())
        .collect();
    files.sort();
    for path in files {
        let name = path.file_name().expect("file name").to_string_lossy().into_owned();
        observed.push((name, std::fs::read(&path).expect("tour output")));
    }
    observed
}

#[test]
fn acceptance_11_commands_are_byte_deterministic() {
    let started = Instant::now();
    let rerun_a = tempfile::tempdir().expect("tempdir");
    let rerun_b = tempfile::tempdir().expect("tempdir");
    let wide = tempfile::tempdir().expect("tempdir");

    let a = command_tour(rerun_a.path(), 1);
    let b = command_tour(rerun_b.path(), 1);
    let c = command_tour(wide.path(), 4);

    assert_eq!(a.len(), b.len());
    assert_eq!(a.len(), c.len());
    let mut outputs = 0;
    for ((name_a, bytes_a), ((name_b, bytes_b), (name_c, bytes_c))) in
        a.iter().zip(b.iter().zip(c.iter()))
    {
        assert_eq!(name_a, name_b);
        assert_eq!(name_a, name_c);
        assert_eq!(bytes_a, bytes_b, "{name_a} differs between identical runs");
        assert_eq!(bytes_a, bytes_c, "{name_a} differs between 1 and 4 threads");
        outputs += 1;
    }
    let elapsed = started.elapsed();
    println!(
        "criterion 11 (byte-identical commands across reruns and thread counts): PASS — \
         {outputs} outputs compared, {elapsed:.2?}"
    );
}
