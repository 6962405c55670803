//! Brute-force connectivity, the reference every scheme is checked against.

use std::collections::VecDeque;

use cfl_core::dsu::DisjointSets;
use cfl_core::{Color, ColoredGraph, FaultSet, Vertex};

use crate::error::CflResult;

fn checked_faults(g: &ColoredGraph, u: Vertex, v: Vertex, faults: &[Color]) -> CflResult<FaultSet> {
    let fs = FaultSet::from_colors(faults.iter().copied());
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    g.check_faults(&fs)?;
    for x in [u, v] {
        if !g.vertex_alive(x, &fs) {
            return Err(cfl_core::Error::RemovedVertex(x).into());
        }
    }
    Ok(fs)
}

/// Union-find over the edges surviving `faults`.
pub fn brute_force_connected(g: &ColoredGraph, u: Vertex, v: Vertex, faults: &[Color]) -> CflResult<bool> {
    let fs = checked_faults(g, u, v, faults)?;
    let mut dsu = DisjointSets::new(g.n());
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if g.edge_alive(e, &fs) {
            dsu.union(a, b);
        }
    }
    Ok(dsu.find(u) == dsu.find(v))
}

/// `cid(v, G − F)` for every vertex, `None` where `v` itself is removed.
pub fn brute_force_cids(g: &ColoredGraph, faults: &[Color]) -> CflResult<Vec<Option<Vertex>>> {
    let fs = FaultSet::from_colors(faults.iter().copied());
    g.check_faults(&fs)?;
    let mut dsu = DisjointSets::new(g.n());
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if g.edge_alive(e, &fs) {
            dsu.union(a, b);
        }
    }
    let mut min = vec![usize::MAX; g.n()];
    for v in 0..g.n() {
        let r = dsu.find(v);
        min[r] = min[r].min(v);
    }
    Ok((0..g.n())
        .map(|v| g.vertex_alive(v, &fs).then(|| min[dsu.find(v)]))
        .collect())
}

/// Breadth-first reachability, kept independent of the union-find oracle.
pub fn bfs_connected(g: &ColoredGraph, u: Vertex, v: Vertex, faults: &[Color]) -> CflResult<bool> {
    let fs = checked_faults(g, u, v, faults)?;
    let mut seen = vec![false; g.n()];
    seen[u] = true;
    let mut queue = VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        if x == v {
            return Ok(true);
        }
        for &(y, e) in g.neighbors(x) {
            if !seen[y] && g.edge_alive(e, &fs) {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    Ok(false)
}
