//! Instance generators: random digraphs for test corpora and the structured
//! hard-instance families (directed cycles, low-diameter shortcut graphs,
//! grid path families, their layered products, and clique replacements).
//!
//! Structured instances carry their path family and layout metadata so the
//! verifier can audit them without re-deriving the construction.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path as FsPath;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::{Edge, WeightedDigraph};
use crate::rng::substream;

/// A family of directed paths in a host graph, stored as vertex sequences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathFamily {
    pub paths: Vec<Vec<usize>>,
}

/// How clique-expanded edges attach to the host structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiEntry {
    pub host_u: usize,
    pub host_v: usize,
    /// Expanded-graph tail of the unique inter-clique edge for (host_u, host_v).
    pub exit: usize,
    /// Expanded-graph head of that edge.
    pub entry: usize,
}

/// Clique-expansion bookkeeping: clique size, membership, and the random
/// edge-attachment map (one entry per host edge).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueMap {
    pub c: usize,
    pub clique_of: Vec<usize>,
    pub phi: Vec<PhiEntry>,
}

/// Family tag, generation parameters, and layout maps for an instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub family: String,
    pub params: BTreeMap<String, u64>,
    pub seed: Option<u64>,
    /// Layer (or column) index per vertex, for layered families.
    pub layer_of: Option<Vec<usize>>,
    /// Predecessor pairs `(v, pred(v))` for cycle-backbone families.
    pub pred: Option<Vec<(usize, usize)>>,
    pub clique: Option<CliqueMap>,
}

impl InstanceMeta {
    fn new(family: &str) -> Self {
        InstanceMeta {
            family: family.to_string(),
            params: BTreeMap::new(),
            seed: None,
            layer_of: None,
            pred: None,
            clique: None,
        }
    }

    fn with(mut self, key: &str, value: u64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }
}

/// A generated graph together with its optional path family and metadata.
#[derive(Clone, Debug)]
pub struct Instance {
    pub graph: WeightedDigraph,
    pub paths: Option<PathFamily>,
    pub meta: InstanceMeta,
}

impl Instance {
    /// Writes `PREFIX.graph.txt`, `PREFIX.meta.json`, and (when a path
    /// family is present) `PREFIX.paths.json`.
    pub fn save(&self, prefix: &str) -> Result<(), Error> {
        self.graph.save(format!("{prefix}.graph.txt"))?;
        let meta = serde_json::to_string_pretty(&self.meta).expect("meta serialization");
        fs::write(format!("{prefix}.meta.json"), meta)?;
        if let Some(paths) = &self.paths {
            let text = serde_json::to_string_pretty(paths).expect("paths serialization");
            fs::write(format!("{prefix}.paths.json"), text)?;
        }
        Ok(())
    }

    /// Loads a bundle written by [`Instance::save`].
    pub fn load(prefix: &str) -> Result<Self, Error> {
        let graph = WeightedDigraph::load(format!("{prefix}.graph.txt"))?;
        let meta_text = fs::read_to_string(format!("{prefix}.meta.json"))?;
        let meta: InstanceMeta = serde_json::from_str(&meta_text)
            .map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
        let paths_path = format!("{prefix}.paths.json");
        let paths = if FsPath::new(&paths_path).exists() {
            let text = fs::read_to_string(&paths_path)?;
            Some(
                serde_json::from_str(&text)
                    .map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?,
            )
        } else {
            None
        };
        Ok(Instance { graph, paths, meta })
    }

    /// Parameter lookup with a descriptive error for missing keys.
    pub fn param(&self, key: &str) -> Result<u64, Error> {
        self.meta.params.get(key).copied().ok_or_else(|| {
            Error::InvalidParam(format!(
                "instance of family {:?} lacks parameter {key:?}",
                self.meta.family
            ))
        })
    }
}

/// A random digraph: up to `m_target` edges sampled uniformly over ordered
/// pairs (no self-loops), weights uniform in `1..=max_w`. Parallel draws of
/// the same pair collapse to the minimum, so `m` can fall short of `m_target`.
pub fn random_digraph(n: usize, m_target: usize, max_w: u64, seed: u64) -> WeightedDigraph {
    assert!(n >= 2, "random digraph needs at least two vertices");
    let mut rng = substream(seed, 0);
    let mut edges = Vec::with_capacity(m_target);
    for _ in 0..m_target {
        let u = rng.gen_range(0..n);
        let mut v = rng.gen_range(0..n - 1);
        if v >= u {
            v += 1;
        }
        let w = rng.gen_range(1..=max_w.max(1));
        edges.push(Edge::new(u, v, w));
    }
    WeightedDigraph::from_edges(n, edges).expect("sampled edges are valid")
}

/// A strongly connected random digraph: a random permutation cycle through
/// all vertices plus `extra` uniformly random edges, weights in `1..=max_w`.
pub fn random_strongly_connected(n: usize, extra: usize, max_w: u64, seed: u64) -> WeightedDigraph {
    assert!(n >= 2, "strong connectivity needs at least two vertices");
    let mut rng = substream(seed, 1);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut edges = Vec::with_capacity(n + extra);
    for i in 0..n {
        let u = perm[i];
        let v = perm[(i + 1) % n];
        edges.push(Edge::new(u, v, rng.gen_range(1..=max_w.max(1))));
    }
    for _ in 0..extra {
        let u = rng.gen_range(0..n);
        let mut v = rng.gen_range(0..n - 1);
        if v >= u {
            v += 1;
        }
        edges.push(Edge::new(u, v, rng.gen_range(1..=max_w.max(1))));
    }
    WeightedDigraph::from_edges(n, edges).expect("sampled edges are valid")
}

/// Predecessor pairs `(v, (v + n - 1) mod n)` for an `n`-cycle backbone.
fn cycle_pred(n: usize) -> Vec<(usize, usize)> {
    (0..n).map(|v| (v, (v + n - 1) % n)).collect()
}

/// The unit-weight directed cycle `0 -> 1 -> ... -> n-1 -> 0`.
pub fn gen_directed_cycle(n: usize) -> Result<Instance, Error> {
    if n < 2 {
        return Err(Error::InvalidParam(format!("cycle needs n >= 2, got {n}")));
    }
    let edges = (0..n).map(|i| Edge::new(i, (i + 1) % n, 1));
    let graph = WeightedDigraph::from_edges(n, edges)?;
    let mut meta = InstanceMeta::new("cycle").with("n", n as u64);
    meta.pred = Some(cycle_pred(n));
    Ok(Instance { graph, paths: None, meta })
}

/// The directed `n`-cycle augmented with recursive halving shortcuts on each
/// of its two halves, dropping the diameter to `O(log n)` while keeping the
/// cycle's predecessor structure. Requires `n` a power of two, `n >= 8`.
///
/// Vertices `0..n/2` form the first half-path and `n/2..n` (wrapping to `0`)
/// the second; each recursion node over a half's edge range `[a, b)` adds the
/// unit shortcut from the subpath's first to its last vertex.
pub fn gen_log_diameter(n: usize) -> Result<Instance, Error> {
    if n < 8 || !n.is_power_of_two() {
        return Err(Error::InvalidParam(format!(
            "low-diameter family needs a power of two n >= 8, got {n}"
        )));
    }
    let mut edges: Vec<Edge> = (0..n).map(|i| Edge::new(i, (i + 1) % n, 1)).collect();
    let half = n / 2;
    for start in [0, half] {
        // Shortcut every recursion range [a, b); single-edge leaves duplicate
        // cycle edges and are deduplicated away.
        let mut ranges = vec![(0usize, half)];
        while let Some((a, b)) = ranges.pop() {
            edges.push(Edge::new((start + a) % n, (start + b) % n, 1));
            if b - a >= 2 {
                let mid = (a + b) / 2;
                ranges.push((a, mid));
                ranges.push((mid, b));
            }
        }
    }
    let graph = WeightedDigraph::from_edges(n, edges)?;
    let mut meta = InstanceMeta::new("diam").with("n", n as u64);
    meta.pred = Some(cycle_pred(n));
    Ok(Instance { graph, paths: None, meta })
}

/// Grid-of-columns path family: `layers` columns of height `h`, with one
/// path per (source row, slope) pair. The path for source row `y0` and slope
/// `x` visits row `y0 + (i-1)x` of column `i`, every edge weighted `x²`.
/// Columns are 1-indexed in the construction and serialized column-major:
/// vertex `(i, y) -> (i-1)h + (y-1)`.
pub fn gen_base_graph(layers: usize, h: usize, sigma: usize, r: usize) -> Result<Instance, Error> {
    if layers < 2 || sigma < 1 || r < 1 || h < 1 {
        return Err(Error::InvalidParam(format!(
            "grid family needs layers >= 2, h >= 1, sigma >= 1, r >= 1; got ({layers}, {h}, {sigma}, {r})"
        )));
    }
    let deepest = sigma + (layers - 1) * r;
    if deepest > h {
        return Err(Error::GeometryOverflow(format!(
            "steepest path reaches row {deepest} of {h}: sigma + (layers-1)*r must be <= h"
        )));
    }
    let n = layers * h;
    let id = |col: usize, row: usize| (col - 1) * h + (row - 1);
    let mut paths = Vec::with_capacity(sigma * r);
    let mut edges = Vec::new();
    for y0 in 1..=sigma {
        for x in 1..=r {
            let nodes: Vec<usize> =
                (1..=layers).map(|i| id(i, y0 + (i - 1) * x)).collect();
            let w = (x * x) as u64;
            for step in nodes.windows(2) {
                edges.push(Edge::new(step[0], step[1], w));
            }
            paths.push(nodes);
        }
    }
    let graph = WeightedDigraph::from_edges(n, edges)?;
    let mut meta = InstanceMeta::new("base")
        .with("layers", layers as u64)
        .with("h", h as u64)
        .with("sigma", sigma as u64)
        .with("r", r as u64)
        .with("n", n as u64)
        .with("paths", (sigma * r) as u64);
    meta.layer_of = Some((0..n).map(|v| v / h).collect());
    Ok(Instance { graph, paths: Some(PathFamily { paths }), meta })
}

/// Ceiling with a small downward guard against floating-point drift.
fn ceil_guarded(v: f64) -> usize {
    (v - 1e-9).ceil().max(1.0) as usize
}

/// Floor with a small upward guard against floating-point drift.
fn floor_guarded(v: f64) -> usize {
    (v + 1e-9).floor().max(0.0) as usize
}

/// Sizes a grid instance from a target vertex count `n` and path-count scale
/// `p`, then clamps the slope count so every path fits the grid. The realized
/// primitive parameters — not `(n, p)` — are authoritative and are reported
/// in the instance metadata alongside the requested values.
pub fn gen_base_graph_sized(n: usize, p: usize) -> Result<Instance, Error> {
    if n < 4 || p < 1 {
        return Err(Error::InvalidParam(format!(
            "sized grid family needs n >= 4 and p >= 1, got ({n}, {p})"
        )));
    }
    let nf = n as f64;
    let pf = p as f64;
    let layers = ceil_guarded(nf.cbrt().powi(2) / (2.0 * pf.cbrt())).max(2);
    let h = (n / layers).max(1);
    let sigma = floor_guarded(nf.cbrt() / 2.0).max(1);
    let r_raw = floor_guarded(2.0 * pf.cbrt().powi(2) / nf.cbrt()).max(1);
    let r_fit = if h > sigma { (h - sigma) / (layers - 1) } else { 0 };
    let r = r_raw.min(r_fit);
    if r < 1 {
        return Err(Error::GeometryOverflow(format!(
            "no slope fits: layers={layers}, h={h}, sigma={sigma} leave no room"
        )));
    }
    let mut inst = gen_base_graph(layers, h, sigma, r)?;
    inst.meta.params.insert("requested_n".to_string(), n as u64);
    inst.meta.params.insert("requested_p".to_string(), p as u64);
    Ok(inst)
}

/// Layered square product of a grid instance: layer `2j` holds all pairs of
/// column-`j+1` vertices, layer `2j+1` pairs (column `j+2`) x (column `j+1`),
/// `0 <= j`, for `2*layers - 1` product layers in total. Each ordered pair of
/// base paths induces the interleaved product path that alternates first- and
/// second-coordinate moves; edge weights are inherited per coordinate.
pub fn gen_product_graph(base: &Instance) -> Result<Instance, Error> {
    if base.meta.family != "base" {
        return Err(Error::InvalidParam(format!(
            "product construction expects a base grid instance, got family {:?}",
            base.meta.family
        )));
    }
    let paths = base
        .paths
        .as_ref()
        .ok_or_else(|| Error::InvalidParam("base instance lacks its path family".into()))?;
    let layers = base.param("layers")? as usize;
    let h = base.param("h")? as usize;
    let prod_layers = 2 * layers - 1;
    let n = prod_layers * h * h;
    // A base vertex id is (column-1)*h + (row-1); only the row matters inside
    // a layer because the layer index pins the column.
    let row = |v: usize| v % h;
    let pid = |layer: usize, a: usize, b: usize| layer * h * h + row(a) * h + row(b);
    let mut weights: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut prod_paths = Vec::with_capacity(paths.paths.len() * paths.paths.len());
    for pu in &paths.paths {
        for pv in &paths.paths {
            let mut nodes = Vec::with_capacity(prod_layers);
            for j in 0..layers {
                nodes.push(pid(2 * j, pu[j], pv[j]));
                if j + 1 < layers {
                    nodes.push(pid(2 * j + 1, pu[j + 1], pv[j]));
                }
            }
            for j in 0..layers - 1 {
                let wu = base
                    .graph
                    .edge_weight(pu[j], pu[j + 1])
                    .expect("base path edge exists");
                let wv = base
                    .graph
                    .edge_weight(pv[j], pv[j + 1])
                    .expect("base path edge exists");
                for (t, w) in [(2 * j, wu), (2 * j + 1, wv)] {
                    let key = (nodes[t], nodes[t + 1]);
                    match weights.get(&key) {
                        None => {
                            weights.insert(key, w);
                        }
                        Some(&old) => assert_eq!(
                            old, w,
                            "product edge {key:?} derived with two weights"
                        ),
                    }
                }
            }
            prod_paths.push(nodes);
        }
    }
    let edges = weights.iter().map(|(&(u, v), &w)| Edge::new(u, v, w));
    let graph = WeightedDigraph::from_edges(n, edges)?;
    let mut meta = InstanceMeta::new("product")
        .with("layers", layers as u64)
        .with("h", h as u64)
        .with("prod_layers", prod_layers as u64)
        .with("base_paths", paths.paths.len() as u64)
        .with("n", n as u64)
        .with("paths", prod_paths.len() as u64);
    meta.layer_of = Some((0..n).map(|v| v / (h * h)).collect());
    Ok(Instance { graph, paths: Some(PathFamily { paths: prod_paths }), meta })
}

/// Replaces every host vertex by a bidirectional `c`-clique of unit edges and
/// re-attaches each host edge to uniformly random endpoints in its two
/// cliques, scaling its weight by `10 * layers`. Image paths thread the
/// attachment vertices, visiting each intermediate clique at one or two
/// consecutive vertices. Accepts a product instance or a grid instance.
pub fn gen_clique_replacement(host: &Instance, c: usize, seed: u64) -> Result<Instance, Error> {
    if c < 2 {
        return Err(Error::InvalidParam(format!("clique size must be >= 2, got {c}")));
    }
    if host.meta.family != "product" && host.meta.family != "base" {
        return Err(Error::InvalidParam(format!(
            "clique replacement expects a product or base instance, got family {:?}",
            host.meta.family
        )));
    }
    let host_paths = host
        .paths
        .as_ref()
        .ok_or_else(|| Error::InvalidParam("host instance lacks its path family".into()))?;
    let layers = host.param("layers")?;
    let factor = 10 * layers;
    let hn = host.graph.n();
    let n = hn * c;
    let mut edges = Vec::new();
    for v in 0..hn {
        for a in 0..c {
            for b in 0..c {
                if a != b {
                    edges.push(Edge::new(v * c + a, v * c + b, 1));
                }
            }
        }
    }
    let mut rng = substream(seed, 0);
    let mut phi = Vec::with_capacity(host.graph.m());
    let mut phi_of: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    for e in host.graph.edges() {
        let exit = e.u * c + rng.gen_range(0..c);
        let entry = e.v * c + rng.gen_range(0..c);
        edges.push(Edge::new(exit, entry, factor * e.w));
        phi.push(PhiEntry { host_u: e.u, host_v: e.v, exit, entry });
        phi_of.insert((e.u, e.v), (exit, entry));
    }
    let mut image_paths = Vec::with_capacity(host_paths.paths.len());
    for hp in &host_paths.paths {
        let hops: Vec<(usize, usize)> =
            hp.windows(2).map(|s| phi_of[&(s[0], s[1])]).collect();
        let mut seq = vec![hops[0].0];
        for (i, &(_, entry)) in hops.iter().enumerate() {
            seq.push(entry);
            if let Some(&(next_exit, _)) = hops.get(i + 1) {
                if next_exit != entry {
                    seq.push(next_exit);
                }
            }
        }
        image_paths.push(seq);
    }
    let graph = WeightedDigraph::from_edges(n, edges)?;
    let mut meta = InstanceMeta::new("clique")
        .with("c", c as u64)
        .with("layers", layers)
        .with("weight_factor", factor)
        .with("host_n", hn as u64)
        .with("n", n as u64)
        .with("paths", image_paths.len() as u64);
    meta.seed = Some(seed);
    meta.layer_of = host
        .meta
        .layer_of
        .as_ref()
        .map(|host_layers| (0..n).map(|v| host_layers[v / c]).collect());
    meta.clique = Some(CliqueMap { c, clique_of: (0..n).map(|v| v / c).collect(), phi });
    Ok(Instance { graph, paths: Some(PathFamily { paths: image_paths }), meta })
}

/// The canonical crossing event of a clique-expanded instance: take the first
/// ordered pair of distinct image paths, and then the earliest visit along
/// the first path, such that both paths visit that host vertex's clique and
/// the visit is intermediate for the first path; report whether the first
/// path *descends* there, i.e. enters the clique at a strictly larger local
/// index than it exits. The selection depends only on the host paths, never
/// on the random attachment, so it is stable across seeds; with
/// independently attached edges the descent probability is `(c-1)/(2c)` —
/// exactly 1/4 for `c = 2`. Returns `None` when the family does not apply or
/// no such crossing exists.
pub fn crossing_pair_descent(inst: &Instance) -> Option<bool> {
    let clique = inst.meta.clique.as_ref()?;
    let paths = &inst.paths.as_ref()?.paths;
    let c = clique.c;
    // Collapse an image path to its host-clique visit list.
    let visits = |p: &[usize]| {
        let mut out: Vec<(usize, usize, usize)> = Vec::new(); // (host, first, last)
        for &v in p {
            let hostv = clique.clique_of[v];
            match out.last_mut() {
                Some(last) if last.0 == hostv => last.2 = v,
                _ => out.push((hostv, v, v)),
            }
        }
        out
    };
    for i in 0..paths.len() {
        let vi = visits(&paths[i]);
        for j in 0..paths.len() {
            if i == j {
                continue;
            }
            let vj = visits(&paths[j]);
            let mut shared: Vec<usize> = Vec::new();
            for (k, &(host, _, _)) in vi.iter().enumerate() {
                if k > 0 && k + 1 < vi.len() && vj.iter().any(|&(h, _, _)| h == host) {
                    shared.push(k);
                }
            }
            if let Some(&k) = shared.first() {
                let (_, first, last) = vi[k];
                return Some(first % c > last % c);
            }
        }
    }
    None
}

/// Control fixture for the predecessor-conflict audit: the transitive
/// tournament on four vertices (edge `u -> v` whenever `u > v`) with
/// `pred(v) = v - 1`. Every `u -> pred(u)` path is the single direct edge,
/// so no pair of paths ever forms a cycle.
pub fn gen_conflict_control() -> Instance {
    let mut edges = Vec::new();
    for u in 0..4usize {
        for v in 0..u {
            edges.push(Edge::new(u, v, 1));
        }
    }
    let graph = WeightedDigraph::from_edges(4, edges).expect("tournament is valid");
    let mut meta = InstanceMeta::new("control").with("n", 4);
    meta.pred = Some(vec![(1, 0), (2, 1), (3, 2)]);
    Instance { graph, paths: None, meta }
}
