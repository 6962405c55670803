//! Randomized connectivity labels under arbitrary edge faults, built from
//! XOR linear sketches decoded by Borůvka in sketch space.
//!
//! Every edge gets a name (endpoints, id, keyed checksum) and, per
//! repetition, a sampling depth: it is sampled at levels `0..=depth`, so
//! level `i` holds each edge with probability `2^-i`. A vertex cell is the
//! XOR of the names of its sampled incident edges; XOR-ing cells over a set
//! cancels internal edges and leaves the cut. Faulty edges are XOR-ed out
//! before decoding. A decoded name is accepted only if its checksum, its
//! sampling depth and its position across the current cut all agree, so
//! merges are always backed by real surviving edges.

use alloc::vec::Vec;

use crate::bits::{bits_for, BitWriter, Encode};
use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, EdgeId, Vertex};
use crate::hash::hash_words;

pub const DEFAULT_REPETITIONS: usize = 24;
pub const DEFAULT_CHECKSUM_BITS: u32 = 32;

const SAMPLE_TAG: u64 = 1;
const CHECK_TAG: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SketchParams {
    pub seed: u64,
    pub repetitions: usize,
    pub checksum_bits: u32,
}

impl SketchParams {
    pub fn new(seed: u64) -> Self {
        SketchParams {
            seed,
            repetitions: DEFAULT_REPETITIONS,
            checksum_bits: DEFAULT_CHECKSUM_BITS,
        }
    }
}

/// Field widths of a packed edge name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SketchWidths {
    pub id: u32,
    pub edge: u32,
    pub check: u32,
    pub level: u32,
    pub levels: usize,
    pub repetitions: usize,
}

impl SketchWidths {
    pub fn new(n: usize, m: usize, params: &SketchParams) -> Self {
        let levels = if m == 0 { 1 } else { (usize::BITS - m.leading_zeros()) as usize };
        SketchWidths {
            id: bits_for(n),
            edge: bits_for(m),
            check: params.checksum_bits,
            level: bits_for(levels),
            levels,
            repetitions: params.repetitions,
        }
    }

    pub fn cell(&self) -> u32 {
        2 * self.id + self.edge + self.check
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EdgeName {
    pub u: Vertex,
    pub v: Vertex,
    pub id: EdgeId,
}

impl EdgeName {
    fn checksum(&self, params: &SketchParams) -> u64 {
        let h = hash_words(params.seed, &[CHECK_TAG, self.u as u64, self.v as u64, self.id as u64]);
        h & mask(params.checksum_bits)
    }

    pub fn pack(&self, w: &SketchWidths, params: &SketchParams) -> u128 {
        let mut x = self.u as u128;
        x = (x << w.id) | self.v as u128;
        x = (x << w.edge) | self.id as u128;
        (x << w.check) | self.checksum(params) as u128
    }

    /// Unpacks a cell, returning the name only if its checksum verifies.
    pub fn unpack(cell: u128, w: &SketchWidths, params: &SketchParams) -> Option<Self> {
        let check = (cell & mask(w.check) as u128) as u64;
        let rest = cell >> w.check;
        let id = (rest & mask(w.edge) as u128) as usize;
        let rest = rest >> w.edge;
        let v = (rest & mask(w.id) as u128) as usize;
        let u = (rest >> w.id) as usize;
        let name = EdgeName { u, v, id };
        (u < v && name.checksum(params) == check).then_some(name)
    }
}

fn mask(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Deepest level at which edge `id` is sampled in repetition `rep`.
pub fn sample_depth(params: &SketchParams, levels: usize, rep: usize, id: EdgeId) -> usize {
    let h = hash_words(params.seed, &[SAMPLE_TAG, rep as u64, id as u64]);
    (h.trailing_zeros() as usize).min(levels - 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VertexSketchLabel {
    pub vertex: Vertex,
    pub seed: u64,
    /// `repetitions × levels` cells, repetition-major.
    pub cells: Vec<u128>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EdgeSketchLabel {
    pub name: EdgeName,
    pub seed: u64,
    /// Sampling depth per repetition: the membership bits of level `i` are
    /// `i <= depth`.
    pub depths: Vec<usize>,
}

impl Encode for VertexSketchLabel {
    type Widths = SketchWidths;

    fn encode(&self, out: &mut BitWriter, w: &SketchWidths) {
        out.write(self.vertex as u64, w.id);
        out.write(self.seed, 64);
        for &c in &self.cells {
            out.write_u128(c, w.cell());
        }
    }
}

impl Encode for EdgeSketchLabel {
    type Widths = SketchWidths;

    fn encode(&self, out: &mut BitWriter, w: &SketchWidths) {
        out.write(self.name.u as u64, w.id);
        out.write(self.name.v as u64, w.id);
        out.write(self.name.id as u64, w.edge);
        out.write(self.seed, 64);
        for &d in &self.depths {
            out.write(d as u64, w.level);
        }
    }
}

/// Labels for all vertices and edges, plus the shared decoding context.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EdgeFaultSketch {
    pub params: SketchParams,
    pub widths: SketchWidths,
    pub vertices: Vec<VertexSketchLabel>,
    pub edges: Vec<EdgeSketchLabel>,
}

/// Sketches `g` as a plain multigraph; colors are ignored and self-loops
/// contribute nothing.
pub fn build_edge_fault_labels(g: &ColoredGraph, params: SketchParams) -> EdgeFaultSketch {
    let (n, m) = (g.n(), g.m());
    let w = SketchWidths::new(n, m, &params);
    let cells_per = params.repetitions * w.levels;
    let mut vertices: Vec<VertexSketchLabel> = (0..n)
        .map(|v| VertexSketchLabel {
            vertex: v,
            seed: params.seed,
            cells: alloc::vec![0; cells_per],
        })
        .collect();
    let mut edges = Vec::with_capacity(m);
    for (id, &(a, b)) in g.edges().iter().enumerate() {
        let name = EdgeName { u: a.min(b), v: a.max(b), id };
        let depths: Vec<usize> = (0..params.repetitions)
            .map(|r| sample_depth(&params, w.levels, r, id))
            .collect();
        if a != b {
            let packed = name.pack(&w, &params);
            for (r, &d) in depths.iter().enumerate() {
                for l in 0..=d {
                    vertices[a].cells[r * w.levels + l] ^= packed;
                    vertices[b].cells[r * w.levels + l] ^= packed;
                }
            }
        }
        edges.push(EdgeSketchLabel { name, seed: params.seed, depths });
    }
    EdgeFaultSketch {
        params,
        widths: w,
        vertices,
        edges,
    }
}

impl EdgeFaultSketch {
    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    fn check_seed(&self, seed: u64) -> Result<()> {
        if seed == self.params.seed {
            Ok(())
        } else {
            Err(Error::SeedMismatch { expected: self.params.seed, found: seed })
        }
    }

    /// XOR of the cells of every vertex in `set`.
    pub fn fold(&self, set: &[Vertex]) -> Vec<u128> {
        let mut acc = alloc::vec![0u128; self.params.repetitions * self.widths.levels];
        for &v in set {
            for (a, c) in acc.iter_mut().zip(&self.vertices[v].cells) {
                *a ^= c;
            }
        }
        acc
    }

    /// Verified edge names found in one folded sketch.
    pub fn decode_cells(&self, cells: &[u128]) -> Vec<EdgeName> {
        let mut out: Vec<EdgeName> = cells
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .filter_map(|(i, &c)| {
                let name = EdgeName::unpack(c, &self.widths, &self.params)?;
                let (r, l) = (i / self.widths.levels, i % self.widths.levels);
                let ok = name.v < self.n()
                    && name.id < self.edges.len()
                    && sample_depth(&self.params, self.widths.levels, r, name.id) >= l;
                ok.then_some(name)
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Whether `u` and `v` stay connected once the given edges fail.
    pub fn query(
        &self,
        lu: &VertexSketchLabel,
        lv: &VertexSketchLabel,
        faulty: &[&EdgeSketchLabel],
    ) -> Result<bool> {
        Ok(self.components(faulty, &[lu, lv])?.same(lu.vertex, lv.vertex))
    }

    /// Borůvka in sketch space; returns the merged supercomponents.
    pub fn components(
        &self,
        faulty: &[&EdgeSketchLabel],
        endpoints: &[&VertexSketchLabel],
    ) -> Result<DisjointSets> {
        for l in endpoints {
            self.check_seed(l.seed)?;
            if l.vertex >= self.n() {
                return Err(Error::VertexOutOfRange { vertex: l.vertex, n: self.n() });
            }
        }
        for e in faulty {
            self.check_seed(e.seed)?;
        }
        let n = self.n();
        let levels = self.widths.levels;
        let mut cells: Vec<Vec<u128>> = self.vertices.iter().map(|l| l.cells.clone()).collect();
        let mut removed: Vec<EdgeId> = faulty.iter().map(|e| e.name.id).collect();
        removed.sort_unstable();
        removed.dedup();
        for &id in &removed {
            let e = &self.edges[id];
            if e.name.u == e.name.v {
                continue;
            }
            let packed = e.name.pack(&self.widths, &self.params);
            for (r, &d) in e.depths.iter().enumerate() {
                for l in 0..=d {
                    cells[e.name.u][r * levels + l] ^= packed;
                    cells[e.name.v][r * levels + l] ^= packed;
                }
            }
        }

        let mut dsu = DisjointSets::new(n);
        let rounds = crate::bits::ceil_log2(n.max(1)) as usize + 1;
        for _ in 0..rounds {
            let mut found = Vec::new();
            let roots: Vec<Vertex> = (0..n).filter(|&x| dsu.find(x) == x).collect();
            for root in roots {
                let pick = self
                    .decode_cells(&cells[root])
                    .into_iter()
                    .filter(|e| removed.binary_search(&e.id).is_err())
                    .find(|e| {
                        let (a, b) = (dsu.find(e.u), dsu.find(e.v));
                        (a == root) != (b == root)
                    });
                if let Some(e) = pick {
                    found.push(e);
                }
            }
            let mut merged = false;
            for e in found {
                let (a, b) = (dsu.find(e.u), dsu.find(e.v));
                if a != b {
                    dsu.union(a, b);
                    let keep = dsu.find(a);
                    let gone = if keep == a { b } else { a };
                    let moved = core::mem::take(&mut cells[gone]);
                    for (x, y) in cells[keep].iter_mut().zip(moved) {
                        *x ^= y;
                    }
                    merged = true;
                }
            }
            if !merged {
                break;
            }
        }
        Ok(dsu)
    }

    pub fn vertex_bits(&self) -> usize {
        self.vertices.first().map_or(0, |l| l.bit_len(&self.widths))
    }

    pub fn edge_bits(&self) -> usize {
        self.edges.first().map_or(0, |l| l.bit_len(&self.widths))
    }
}

/// Free-function form of [`EdgeFaultSketch::query`].
pub fn query_edge_fault(
    ctx: &EdgeFaultSketch,
    lu: &VertexSketchLabel,
    lv: &VertexSketchLabel,
    faulty: &[&EdgeSketchLabel],
) -> Result<bool> {
    ctx.query(lu, lv, faulty)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn plain(n: usize, edges: &[(usize, usize)]) -> ColoredGraph {
        ColoredGraph::edge_colored(n, 1, edges.iter().map(|&(u, v)| (u, v, 0))).unwrap()
    }

    #[test]
    fn single_edge_cells_match() {
        let s = build_edge_fault_labels(&plain(2, &[(0, 1)]), SketchParams::new(3));
        assert_eq!(s.vertices[0].cells[0], s.vertices[1].cells[0]);
        assert_ne!(s.vertices[0].cells[0], 0);
        assert_eq!(s.decode_cells(&s.vertices[0].cells), vec![EdgeName { u: 0, v: 1, id: 0 }]);
    }

    #[test]
    fn all_vertices_fold_to_zero() {
        let g = plain(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 3), (1, 3)]);
        let s = build_edge_fault_labels(&g, SketchParams::new(9));
        assert!(s.fold(&[0, 1, 2, 3, 4]).iter().all(|&c| c == 0));
    }

    #[test]
    fn path_middle_fault() {
        let g = plain(3, &[(0, 1), (1, 2)]);
        let s = build_edge_fault_labels(&g, SketchParams::new(1));
        let (l0, l2) = (&s.vertices[0], &s.vertices[2]);
        assert!(s.query(l0, l2, &[]).unwrap());
        assert!(!s.query(l0, l2, &[&s.edges[1]]).unwrap());
    }

    #[test]
    fn seed_mismatch() {
        let g = plain(2, &[(0, 1)]);
        let a = build_edge_fault_labels(&g, SketchParams::new(1));
        let b = build_edge_fault_labels(&g, SketchParams::new(2));
        assert_eq!(
            a.query(&a.vertices[0], &b.vertices[1], &[]),
            Err(Error::SeedMismatch { expected: 1, found: 2 })
        );
    }

    #[test]
    fn pack_roundtrip() {
        let p = SketchParams::new(4);
        let w = SketchWidths::new(100, 1000, &p);
        let name = EdgeName { u: 17, v: 99, id: 999 };
        assert_eq!(EdgeName::unpack(name.pack(&w, &p), &w, &p), Some(name));
        assert_eq!(EdgeName::unpack(name.pack(&w, &p) ^ 1, &w, &p), None);
    }
}
