//! Deterministic instance generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cfl_core::{ColorMode, ColoredGraph, Vertex};

use crate::error::{CflError, CflResult};

/// An uncolored multigraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    pub n: usize,
    pub edges: Vec<(Vertex, Vertex)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Coloring {
    /// Independent uniform colors.
    Uniform,
    /// Every element its own color; the palette is the element count.
    Unique,
    /// Consecutive runs of elements share a color.
    Blocks,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

impl Topology {
    pub fn uniform(&self) -> ColoredGraph {
        ColoredGraph::edge_colored(self.n, 1, self.edges.iter().map(|&(u, v)| (u, v, 0)))
            .expect("topology endpoints are in range")
    }

    pub fn colored(&self, mode: ColorMode, palette: usize, coloring: Coloring, seed: u64) -> CflResult<ColoredGraph> {
        let count = match mode {
            ColorMode::Edge => self.edges.len(),
            ColorMode::Vertex => self.n,
        };
        let palette = match coloring {
            Coloring::Unique => count.max(1),
            _ if palette == 0 => return Err(CflError::Infeasible("empty palette".into())),
            _ => palette,
        };
        let mut r = rng(seed);
        let colors: Vec<usize> = (0..count)
            .map(|i| match coloring {
                Coloring::Uniform => r.gen_range(0..palette),
                Coloring::Unique => i,
                Coloring::Blocks => i * palette / count,
            })
            .collect();
        let g = match mode {
            ColorMode::Edge => ColoredGraph::edge_colored(
                self.n,
                palette,
                self.edges.iter().zip(&colors).map(|(&(u, v), &c)| (u, v, c)),
            ),
            ColorMode::Vertex => ColoredGraph::vertex_colored(palette, colors, self.edges.iter().copied()),
        };
        Ok(g?)
    }
}

pub fn gen_path(n: usize) -> Topology {
    Topology {
        n,
        edges: (1..n).map(|v| (v - 1, v)).collect(),
    }
}

/// Hub `0` joined to the cycle `1..n`.
pub fn gen_wheel(n: usize) -> CflResult<Topology> {
    if n < 4 {
        return Err(CflError::Infeasible(format!("a wheel needs 4 vertices, got {n}")));
    }
    let rim = n - 1;
    let mut edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
    edges.extend((0..rim).map(|i| (1 + i, 1 + (i + 1) % rim)));
    Ok(Topology { n, edges })
}

/// `a × b` grid, vertex `(i, j)` at `i * b + j`.
pub fn gen_grid(a: usize, b: usize) -> Topology {
    let mut edges = Vec::new();
    for i in 0..a {
        for j in 0..b {
            let v = i * b + j;
            if j + 1 < b {
                edges.push((v, v + 1));
            }
            if i + 1 < a {
                edges.push((v, v + b));
            }
        }
    }
    Topology { n: a * b, edges }
}

/// Random recursive tree: vertex `v` attaches to a uniform earlier vertex.
pub fn gen_tree(n: usize, seed: u64) -> Topology {
    let mut r = rng(seed);
    Topology {
        n,
        edges: (1..n).map(|v| (r.gen_range(0..v), v)).collect(),
    }
}

/// Uniform simple graph with exactly `m` edges.
pub fn gen_random(n: usize, m: usize, seed: u64) -> CflResult<Topology> {
    let pairs = n * n.saturating_sub(1) / 2;
    if m > pairs {
        return Err(CflError::Infeasible(format!("{m} edges exceed the {pairs} pairs on {n} vertices")));
    }
    let mut r = rng(seed);
    let mut all: Vec<(Vertex, Vertex)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    all.shuffle(&mut r);
    all.truncate(m);
    all.sort_unstable();
    Ok(Topology { n, edges: all })
}

/// Random spanning tree plus distinct extra edges, `m ≥ n − 1` in total.
pub fn gen_random_connected(n: usize, m: usize, seed: u64) -> CflResult<Topology> {
    let pairs = n * n.saturating_sub(1) / 2;
    if m > pairs || m + 1 < n {
        return Err(CflError::Infeasible(format!("no connected simple graph with n={n}, m={m}")));
    }
    let tree = gen_tree(n, seed);
    let mut have: std::collections::HashSet<(Vertex, Vertex)> = tree.edges.iter().copied().collect();
    let mut r = rng(seed ^ 0x9e37_79b9);
    let mut rest: Vec<(Vertex, Vertex)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|p| !have.contains(p))
        .collect();
    rest.shuffle(&mut r);
    let mut edges = tree.edges;
    for p in rest.into_iter().take(m - edges.len()) {
        have.insert(p);
        edges.push(p);
    }
    Ok(Topology { n, edges })
}
