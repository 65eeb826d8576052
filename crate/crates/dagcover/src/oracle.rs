//! Brute-force reference implementations used to cross-check the fast paths.
//!
//! Everything here works directly on edge lists with simple textbook loops,
//! deliberately sharing no code with the optimized algorithms in the rest of
//! the crate. Tests freeze values computed by these oracles; audits use them
//! as the second, independent route to the same answer.

use crate::error::Error;
use crate::graph::Edge;

/// Single-source shortest distances by edge-list relaxation (`n - 1` rounds).
pub fn bellman_ford(n: usize, edges: &[Edge], src: usize) -> Vec<Option<u64>> {
    let mut dist: Vec<Option<u64>> = vec![None; n];
    dist[src] = Some(0);
    for _ in 1..n.max(2) {
        let mut changed = false;
        for e in edges {
            if let Some(du) = dist[e.u] {
                let nd = du.checked_add(e.w).expect("distance overflow");
                if dist[e.v].map_or(true, |dv| nd < dv) {
                    dist[e.v] = Some(nd);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    dist
}

/// Vertices reachable from `src` (including `src`), by depth-first search
/// over an adjacency structure built locally from the edge list.
pub fn reachable_from(n: usize, edges: &[Edge], src: usize) -> Vec<bool> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in edges {
        adj[e.u].push(e.v);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![src];
    seen[src] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}

/// Shortest distances from `src` using at most `hops` edges: a dynamic
/// program over hop counts, exact for nonnegative weights.
pub fn hop_bounded_distances(n: usize, edges: &[Edge], src: usize, hops: usize) -> Vec<Option<u64>> {
    let mut dist: Vec<Option<u64>> = vec![None; n];
    dist[src] = Some(0);
    for _ in 0..hops {
        let prev = dist.clone();
        let mut changed = false;
        for e in edges {
            if let Some(du) = prev[e.u] {
                let nd = du.checked_add(e.w).expect("distance overflow");
                if dist[e.v].map_or(true, |dv| nd < dv) {
                    dist[e.v] = Some(nd);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    dist
}

/// Whether the pair list contains a directed cycle (iterative three-color DFS).
pub fn has_directed_cycle(n: usize, pairs: &[(usize, usize)]) -> bool {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in pairs {
        if u == v {
            return true;
        }
        adj[u].push(v);
    }
    // 0 = white, 1 = on the current DFS path, 2 = finished.
    let mut color = vec![0u8; n];
    for root in 0..n {
        if color[root] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        color[root] = 1;
        while let Some(&mut (u, ref mut ni)) = stack.last_mut() {
            if *ni < adj[u].len() {
                let v = adj[u][*ni];
                *ni += 1;
                match color[v] {
                    0 => {
                        color[v] = 1;
                        stack.push((v, 0));
                    }
                    1 => return true,
                    _ => {}
                }
            } else {
                color[u] = 2;
                stack.pop();
            }
        }
    }
    false
}

/// All simple directed paths from `s` to `t` (`s != t`), as vertex sequences
/// in lexicographic order. Fails once more than `cap` paths are collected;
/// returns no paths when `s == t`.
pub fn simple_paths(
    n: usize,
    pairs: &[(usize, usize)],
    s: usize,
    t: usize,
    cap: usize,
) -> Result<Vec<Vec<usize>>, Error> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in pairs {
        adj[u].push(v);
    }
    for row in adj.iter_mut() {
        row.sort_unstable();
        row.dedup();
    }
    let mut paths = Vec::new();
    if s == t {
        return Ok(paths);
    }
    let mut on_path = vec![false; n];
    let mut path = vec![s];
    let mut cursor = vec![0usize];
    on_path[s] = true;
    while let Some(&u) = path.last() {
        let ni = cursor.last_mut().expect("cursor parallels path");
        if *ni < adj[u].len() {
            let v = adj[u][*ni];
            *ni += 1;
            if on_path[v] {
                continue;
            }
            if v == t {
                // Record without extending: nothing simple continues past t.
                if paths.len() == cap {
                    return Err(Error::EnumerationCapExceeded { cap });
                }
                let mut done = path.clone();
                done.push(t);
                paths.push(done);
                continue;
            }
            on_path[v] = true;
            path.push(v);
            cursor.push(0);
        } else {
            on_path[u] = false;
            path.pop();
            cursor.pop();
        }
    }
    Ok(paths)
}

/// Minimum path weight from `s` to `t` over simple paths, with the number of
/// simple paths attaining it. Duplicate pairs take the minimum edge weight.
/// Returns `None` when `t` is unreachable from `s`.
pub fn min_weight_simple_paths(
    n: usize,
    edges: &[Edge],
    s: usize,
    t: usize,
    cap: usize,
) -> Result<Option<(u64, usize)>, Error> {
    let mut weight: std::collections::HashMap<(usize, usize), u64> = std::collections::HashMap::new();
    for e in edges {
        weight
            .entry((e.u, e.v))
            .and_modify(|w| *w = (*w).min(e.w))
            .or_insert(e.w);
    }
    let pairs: Vec<(usize, usize)> = weight.keys().copied().collect();
    let paths = simple_paths(n, &pairs, s, t, cap)?;
    let mut best: Option<(u64, usize)> = None;
    for p in &paths {
        let w: u64 = p.windows(2).map(|st| weight[&(st[0], st[1])]).sum();
        best = Some(match best {
            None => (w, 1),
            Some((bw, _)) if w < bw => (w, 1),
            Some((bw, c)) if w == bw => (bw, c + 1),
            Some(keep) => keep,
        });
    }
    Ok(best)
}
