//! Bit strings hidden in colorings and read back with connectivity queries.
//!
//! `encode_balls` colors the layers of disjoint proper balls so that one
//! fault per bit cuts a center off from its far vertex. `encode_spider`
//! colors the bundles of an `f`-thick spider with distinct `f`-subsets.

use cfl_core::reductions::{binomial, colex_unrank};
use cfl_core::single_fault::{ball_packing_witness, check_packing};
use cfl_core::graph::bfs_distances;
use cfl_core::{Color, ColoredGraph, Vertex};

use crate::error::{CflError, CflResult};
use crate::generate::Topology;

/// The query decoding one bit: the bit is set iff `u` and `v` are
/// disconnected in `G − faults`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct BitQuery {
    pub u: Vertex,
    pub v: Vertex,
    pub faults: Vec<Color>,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct EncodedInstance {
    pub graph: ColoredGraph,
    pub queries: Vec<BitQuery>,
}

impl EncodedInstance {
    pub fn capacity(&self) -> usize {
        self.queries.len()
    }

    /// Reads every bit back through `connected`.
    pub fn decode<F>(&self, mut connected: F) -> CflResult<Vec<bool>>
    where
        F: FnMut(Vertex, Vertex, &[Color]) -> CflResult<bool>,
    {
        self.queries
            .iter()
            .map(|q| connected(q.u, q.v, &q.faults).map(|c| !c))
            .collect()
    }
}

pub fn parse_bits(s: &str) -> CflResult<Vec<bool>> {
    s.chars()
        .map(|ch| match ch {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(CflError::Input(format!("not a bit: {ch:?}"))),
        })
        .collect()
}

pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Colors the topology so that bit `k·r + l` lives in the edges between
/// layers `l` and `l + 1` of the `k`-th ball. Without `witness`, an optimal
/// packing is searched exhaustively.
pub fn encode_balls(
    topology: &Topology,
    x: &[bool],
    witness: Option<(usize, Vec<Vertex>)>,
) -> CflResult<EncodedInstance> {
    let plain = topology.uniform();
    let (r, centers) = match witness {
        Some(w) => w,
        None => ball_packing_witness(&plain)?,
    };
    check_packing(&plain, r, &centers)?;
    if x.len() != r * r {
        return Err(CflError::Capacity { expected: r * r, found: x.len() });
    }
    let never = r;
    let mut colors = vec![never; topology.edges.len()];
    let mut queries = Vec::with_capacity(r * r);
    for (k, &center) in centers.iter().enumerate() {
        let dist = bfs_distances(&plain, center);
        let far = (0..topology.n)
            .find(|&u| dist[u] == Some(r))
            .ok_or_else(|| CflError::Input(format!("ball around {center} is not proper")))?;
        for (e, &(a, b)) in topology.edges.iter().enumerate() {
            let (Some(da), Some(db)) = (dist[a], dist[b]) else { continue };
            let l = da.min(db);
            if da.abs_diff(db) == 1 && l < r && x[k * r + l] {
                colors[e] = l;
            }
        }
        queries.extend((0..r).map(|l| BitQuery {
            u: center,
            v: far,
            faults: vec![l],
        }));
    }
    let graph = ColoredGraph::edge_colored(
        topology.n,
        r + 1,
        topology.edges.iter().zip(&colors).map(|(&(u, v), &c)| (u, v, c)),
    )?;
    Ok(EncodedInstance { graph, queries })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpiderStyle {
    /// `f` parallel edges per bundle.
    Thick,
    /// Every edge replaced by a two-edge path of its color.
    Subdivided,
    /// Subdivided, with the midpoints carrying the edge colors.
    Vertex,
}

/// Bundle `l` of arm `k` encodes bit `k·M + l`, `M = C(q, f)`, using the
/// `l`-th `f`-subset of `0..q` in colex order.
pub fn encode_spider(f: usize, q: usize, arms: usize, x: &[bool], style: SpiderStyle) -> CflResult<EncodedInstance> {
    if f == 0 || f > q {
        return Err(CflError::Infeasible(format!("need 1 ≤ f ≤ q, got f={f}, q={q}")));
    }
    let m = binomial(q, f);
    if x.len() != arms * m {
        return Err(CflError::Capacity { expected: arms * m, found: x.len() });
    }
    let never = q;
    let vertex = |k: usize, l: usize| if l == 0 { 0 } else { 1 + k * m + (l - 1) };
    let base_n = 1 + arms * m;
    let mut edges = Vec::new();
    let mut queries = Vec::new();
    for k in 0..arms {
        for l in 0..m {
            let subset = colex_unrank(l, f);
            for &c in &subset {
                let color = if x[k * m + l] { c } else { never };
                edges.push((vertex(k, l), vertex(k, l + 1), color));
            }
            queries.push(BitQuery {
                u: 0,
                v: vertex(k, m),
                faults: subset,
            });
        }
    }
    let graph = match style {
        SpiderStyle::Thick => ColoredGraph::edge_colored(base_n, q + 1, edges)?,
        SpiderStyle::Subdivided => {
            let sub = edges
                .iter()
                .enumerate()
                .flat_map(|(i, &(a, b, c))| [(a, base_n + i, c), (base_n + i, b, c)]);
            ColoredGraph::edge_colored(base_n + edges.len(), q + 1, sub)?
        }
        SpiderStyle::Vertex => {
            let mut colors = vec![never; base_n];
            colors.extend(edges.iter().map(|&(_, _, c)| c));
            let sub = edges
                .iter()
                .enumerate()
                .flat_map(|(i, &(a, b, _))| [(a, base_n + i), (base_n + i, b)]);
            ColoredGraph::vertex_colored(q + 1, colors, sub)?
        }
    };
    Ok(EncodedInstance { graph, queries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::gen_path;
    use crate::oracle::brute_force_connected;

    fn oracle_decode(inst: &EncodedInstance) -> Vec<bool> {
        inst.decode(|u, v, f| brute_force_connected(&inst.graph, u, v, f)).unwrap()
    }

    #[test]
    fn path_balls() {
        let x = parse_bits("1010").unwrap();
        let inst = encode_balls(&gen_path(9), &x, Some((2, vec![1, 7]))).unwrap();
        assert_eq!(oracle_decode(&inst), x);
        let zero = vec![false; 4];
        let inst = encode_balls(&gen_path(9), &zero, None).unwrap();
        assert!(inst.graph.edge_colors().iter().all(|&c| c == 2));
        assert_eq!(oracle_decode(&inst), zero);
    }

    #[test]
    fn bad_witness() {
        let x = vec![false; 4];
        assert!(encode_balls(&gen_path(9), &x, Some((2, vec![1, 4]))).is_err());
        assert!(encode_balls(&gen_path(9), &x[..3], None).is_err());
    }

    #[test]
    fn spider_capacity_and_roundtrip() {
        let x = parse_bits("1001").unwrap();
        for style in [SpiderStyle::Thick, SpiderStyle::Subdivided, SpiderStyle::Vertex] {
            let inst = encode_spider(1, 2, 2, &x, style).unwrap();
            assert_eq!(inst.capacity(), 4);
            assert_eq!(oracle_decode(&inst), x);
        }
        let x: Vec<bool> = (0..18).map(|i| i % 3 == 0).collect();
        let inst = encode_spider(2, 4, 3, &x, SpiderStyle::Thick).unwrap();
        assert_eq!(oracle_decode(&inst), x);
        assert!(encode_spider(2, 4, 3, &x[..17], SpiderStyle::Thick).is_err());
    }

    #[test]
    fn other_bundles_survive() {
        let x = vec![true; 6];
        let inst = encode_spider(2, 4, 1, &x, SpiderStyle::Thick).unwrap();
        for l in 0..6 {
            let f = colex_unrank(l, 2);
            for other in (0..6).filter(|&o| o != l) {
                let survivors = inst
                    .graph
                    .edges()
                    .iter()
                    .zip(inst.graph.edge_colors())
                    .filter(|(&(a, b), &c)| (a, b) == (other, other + 1) && !f.contains(&c))
                    .count();
                assert!(survivors >= 1);
            }
        }
    }
}
