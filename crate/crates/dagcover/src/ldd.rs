//! Directed low-diameter decomposition by recursive ball carving.
//!
//! Given a diameter target `d`, [`directed_ldd`] removes a random edge set
//! `E'` so that every strongly connected component of `G \ E'` has weak
//! diameter at most `d` *measured in `G`*. That bound is a hard postcondition
//! checked on every call; the randomness only controls how often each edge is
//! cut, targeting `Pr[e in E'] = O(log²n) * w(e) / d`.
//!
//! Carving always stays inside a strongly connected component of the input:
//! edges between different SCCs are never cut.

use rand::Rng;

use crate::error::Error;
use crate::graph::{Edge, WeightedDigraph};
use crate::rational::Rational;
use crate::rng::{derive_seed, substream};

/// Default radius-scale constant for the geometric carving radius.
pub const DEFAULT_C0: f64 = 2.0;

/// Parameters of one decomposition run.
#[derive(Clone, Copy, Debug)]
pub struct LddParams {
    /// Nonnegative diameter target; rational so callers can pass `nW/2^i`.
    pub d: Rational,
    /// Radius-scale constant; the carve-radius success probability is
    /// `min(1, c0 * ln(n) / d)` per weight unit.
    pub c0: f64,
    pub seed: u64,
}

impl LddParams {
    pub fn new(d: Rational, seed: u64) -> Self {
        LddParams { d, c0: DEFAULT_C0, seed }
    }
}

/// Outcome of a decomposition (or of the Monte-Carlo harness around it).
#[derive(Clone, Debug)]
pub struct LddResult {
    /// Indices into `g.edges()` of the removed edges, ascending.
    pub cut_edges: Vec<usize>,
    /// SCC partition of `G \ E'`, in canonical condensation order.
    pub components: Vec<Vec<usize>>,
    /// Per-edge empirical cut frequency; filled only by [`monte_carlo_ldd`].
    pub measured_alpha_hat: Option<Vec<f64>>,
}

/// Removes a random edge set so every SCC of the residual graph has weak
/// diameter ≤ `d` in `g`. Deterministic given the seed; the postcondition is
/// re-verified on every call and a violation panics.
pub fn directed_ldd(g: &WeightedDigraph, params: &LddParams) -> Result<LddResult, Error> {
    if !params.c0.is_finite() || params.c0 <= 0.0 {
        return Err(Error::InvalidParam(format!(
            "radius-scale constant must be positive and finite, got {}",
            params.c0
        )));
    }
    let n = g.n();
    let mut cut = vec![false; g.m()];
    if params.d < 1u64 {
        // Integer weights make any 2-vertex SCC have weak diameter ≥ 1, so
        // the only valid outcome is to break every cycle: cut all edges
        // inside nontrivial SCCs.
        let mut scc_of = vec![usize::MAX; n];
        for (ci, comp) in g.scc().iter().enumerate() {
            if comp.len() >= 2 {
                for &v in comp {
                    scc_of[v] = ci;
                }
            }
        }
        for (ei, e) in g.edges().iter().enumerate() {
            if scc_of[e.u] != usize::MAX && scc_of[e.u] == scc_of[e.v] {
                cut[ei] = true;
            }
        }
        return Ok(assemble(g, &params.d, cut));
    }

    let radius_cap = params.d.div_int(4).floor();
    let success_p = (params.c0 * (n.max(2) as f64).ln() / params.d.to_f64()).min(1.0);
    let mut rng = substream(params.seed, 0);
    let grev = g.reverse();

    // Work stack of pieces; each piece is strongly connected in its own
    // induced subgraph. Edges are only ever cut between vertices of one
    // piece, hence always inside one SCC of g.
    let mut pieces: Vec<Vec<usize>> = Vec::new();
    for comp in g.scc() {
        if comp.len() >= 2 {
            pieces.push(comp);
        }
    }
    while let Some(piece) = pieces.pop() {
        if piece.len() <= 1 {
            continue;
        }
        let host_diam = g
            .weak_diameter(&piece)
            .expect("piece lies inside an SCC of g, so host distances are finite");
        if Rational::from_int(host_diam) <= params.d {
            continue;
        }
        let mut mask = vec![false; n];
        for &v in &piece {
            mask[v] = true;
        }
        // First light vertex in increasing id order; a ball is light when it
        // holds at most 3/4 of the piece. Out-balls are tried before
        // in-balls. Some light vertex must exist: were every ball heavy, any
        // two 3/4-balls would intersect and the piece's diameter would be at
        // most d/2, which the host-diameter check above already excluded.
        let mut carve: Option<(usize, bool, Vec<Option<u64>>)> = None;
        for &v in &piece {
            let dout = g.dijkstra_masked(v, Some(&mask));
            if 4 * ball_size(&piece, &dout, radius_cap) <= 3 * piece.len() {
                carve = Some((v, true, dout));
                break;
            }
            let din = grev.dijkstra_masked(v, Some(&mask));
            if 4 * ball_size(&piece, &din, radius_cap) <= 3 * piece.len() {
                carve = Some((v, false, din));
                break;
            }
        }
        let (center, out_side, dist) = carve.unwrap_or_else(|| {
            panic!(
                "no light vertex in a piece of {} vertices with host diameter {host_diam}",
                piece.len()
            )
        });
        let _ = center;
        // Geometric radius in weight units, capped at floor(d/4): count
        // Bernoulli failures before the first success.
        let mut radius = 0u64;
        while radius < radius_cap && !rng.gen_bool(success_p) {
            radius += 1;
        }
        let in_ball: Vec<bool> = (0..n)
            .map(|v| mask[v] && dist[v].map_or(false, |dv| dv <= radius))
            .collect();
        for (ei, e) in g.edges().iter().enumerate() {
            if !mask[e.u] || !mask[e.v] {
                continue;
            }
            let crosses = if out_side {
                in_ball[e.u] && !in_ball[e.v]
            } else {
                !in_ball[e.u] && in_ball[e.v]
            };
            if crosses {
                cut[ei] = true;
            }
        }
        // Both sides may have lost strong connectivity; re-split them into
        // SCCs of their induced subgraphs before recursing.
        let rest: Vec<bool> = (0..n).map(|v| mask[v] && !in_ball[v]).collect();
        for comp in g.scc_masked(Some(&in_ball)) {
            pieces.push(comp);
        }
        for comp in g.scc_masked(Some(&rest)) {
            pieces.push(comp);
        }
    }
    Ok(assemble(g, &params.d, cut))
}

/// Number of piece vertices within distance `radius` of the ball center.
fn ball_size(piece: &[usize], dist: &[Option<u64>], radius: u64) -> usize {
    piece
        .iter()
        .filter(|&&v| dist[v].map_or(false, |dv| dv <= radius))
        .count()
}

/// Builds the result from the cut flags and re-verifies the hard diameter
/// postcondition on the residual SCCs.
fn assemble(g: &WeightedDigraph, d: &Rational, cut: Vec<bool>) -> LddResult {
    let residual_edges: Vec<Edge> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(ei, _)| !cut[ei])
        .map(|(_, &e)| e)
        .collect();
    let residual =
        WeightedDigraph::from_edges(g.n(), residual_edges).expect("residual edges stay valid");
    let components = residual.scc();
    for comp in &components {
        if comp.len() >= 2 {
            let wd = g
                .weak_diameter(comp)
                .expect("residual SCC lies inside an SCC of g");
            assert!(
                Rational::from_int(wd) <= *d,
                "residual SCC of {} vertices has weak diameter {wd} > target {d}",
                comp.len()
            );
        }
    }
    let cut_edges = cut
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c)
        .map(|(ei, _)| ei)
        .collect();
    LddResult { cut_edges, components, measured_alpha_hat: None }
}

/// Runs the decomposition under `reps` derived seeds (in parallel when the
/// `parallel` feature is on), returning the first run's cut with the
/// per-edge empirical cut-frequency table attached.
pub fn monte_carlo_ldd(
    g: &WeightedDigraph,
    params: &LddParams,
    reps: usize,
) -> Result<LddResult, Error> {
    if reps == 0 {
        return Err(Error::InvalidParam("Monte-Carlo harness needs reps >= 1".into()));
    }
    // Validate once so the per-rep unwraps below cannot fire.
    if !params.c0.is_finite() || params.c0 <= 0.0 {
        return Err(Error::InvalidParam(format!(
            "radius-scale constant must be positive and finite, got {}",
            params.c0
        )));
    }
    let runs: Vec<LddResult> = crate::par::map_range(reps, |r| {
        let rep_params =
            LddParams { d: params.d, c0: params.c0, seed: derive_seed(params.seed, r as u64) };
        directed_ldd(g, &rep_params).expect("parameters were validated")
    });
    let mut freq = vec![0f64; g.m()];
    for run in &runs {
        for &ei in &run.cut_edges {
            freq[ei] += 1.0;
        }
    }
    for f in freq.iter_mut() {
        *f /= reps as f64;
    }
    let mut first = runs.into_iter().next().expect("reps >= 1");
    first.measured_alpha_hat = Some(freq);
    Ok(first)
}
