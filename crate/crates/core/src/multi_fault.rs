//! Labels for several simultaneous color faults.
//!
//! [`build_certificate`] sparsifies the graph to a union of forests, one per
//! fault class (the set of colors whose failure kills an edge), which
//! preserves connectivity under every fault set. [`label_large_f`] stores
//! edge-fault sketches of the sparsified graph; [`label_recursive`] splits
//! colors by prevalence and recurses into `G − h` for every prevalent `h`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::bits::{bits_for, BitWriter, Encode, Widths};
use crate::error::{Error, Result};
use crate::graph::{Color, ColorMode, ColoredGraph, EdgeId, FaultSet, Vertex};
use crate::hash::derive_seed;
use crate::single_fault::{build_ruling_set, label_single_fault, SingleFaultLabels};
use crate::sketch::{build_edge_fault_labels, EdgeFaultSketch, EdgeSketchLabel, SketchParams};

/// Union of spanning forests, one per fault class.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ColorForestCertificate {
    /// `(fault class, forest edges)`, classes in increasing order.
    pub forests: Vec<(Vec<Color>, Vec<EdgeId>)>,
    /// All kept edge ids, sorted.
    pub edges: Vec<EdgeId>,
}

pub fn build_certificate(g: &ColoredGraph) -> ColorForestCertificate {
    let mut classes: BTreeMap<Vec<Color>, Vec<EdgeId>> = BTreeMap::new();
    for e in 0..g.m() {
        let key: Vec<Color> = g.edge_fault_colors(e).into_iter().flatten().collect();
        classes.entry(key).or_default().push(e);
    }
    let mut forests = Vec::with_capacity(classes.len());
    let mut edges = Vec::new();
    for (class, members) in classes {
        let mut dsu = crate::dsu::DisjointSets::new(g.n());
        let kept: Vec<EdgeId> = members
            .into_iter()
            .filter(|&e| {
                let (u, v) = g.edge(e);
                dsu.union(u, v)
            })
            .collect();
        edges.extend_from_slice(&kept);
        forests.push((class, kept));
    }
    edges.sort_unstable();
    ColorForestCertificate { forests, edges }
}

impl ColorForestCertificate {
    pub fn graph(&self, g: &ColoredGraph) -> ColoredGraph {
        g.restrict_to_edges(&self.edges)
    }
}

/// Per color, the edges of `h` that it kills.
fn killed_edges(h: &ColoredGraph) -> Vec<Vec<EdgeId>> {
    let mut out = alloc::vec![Vec::new(); h.palette()];
    for e in 0..h.m() {
        for c in h.edge_fault_colors(e).into_iter().flatten() {
            out[c].push(e);
        }
    }
    out
}

fn check_endpoints(g: &ColoredGraph, u: Vertex, v: Vertex, faults: &FaultSet) -> Result<()> {
    g.check_faults(faults)?;
    for x in [u, v] {
        g.check_vertex(x)?;
        if !g.vertex_alive(x, faults) {
            return Err(Error::RemovedVertex(x));
        }
    }
    Ok(())
}

/// Edge-fault sketches of the certificate; a color label carries the
/// sketch labels of every certificate edge that the color kills.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LargeFLabels {
    pub sparse: ColoredGraph,
    pub sketch: EdgeFaultSketch,
    pub color_edges: Vec<Vec<EdgeId>>,
}

pub fn label_large_f(g: &ColoredGraph, params: SketchParams) -> LargeFLabels {
    let sparse = build_certificate(g).graph(g);
    let sketch = build_edge_fault_labels(&sparse, params);
    let color_edges = killed_edges(&sparse);
    LargeFLabels {
        sparse,
        sketch,
        color_edges,
    }
}

impl LargeFLabels {
    pub fn color_label(&self, c: Color) -> Vec<&EdgeSketchLabel> {
        self.color_edges[c].iter().map(|&e| &self.sketch.edges[e]).collect()
    }

    pub fn connected(&self, u: Vertex, v: Vertex, faults: &FaultSet) -> Result<bool> {
        check_endpoints(&self.sparse, u, v, faults)?;
        let faulty: Vec<&EdgeSketchLabel> = faults.iter().flat_map(|c| self.color_label(c)).collect();
        self.sketch
            .query(&self.sketch.vertices[u], &self.sketch.vertices[v], &faulty)
    }

    fn own_color_bits(&self) -> usize {
        match self.sparse.mode() {
            ColorMode::Edge => 0,
            ColorMode::Vertex => bits_for(self.sparse.palette()) as usize,
        }
    }

    pub fn vertex_bits(&self) -> usize {
        self.sketch.vertex_bits() + self.own_color_bits()
    }

    pub fn color_bits(&self, c: Color) -> usize {
        let count = bits_for(self.sparse.m() + 1) as usize;
        count + self.color_edges[c].len() * self.sketch.edge_bits()
    }

    pub fn max_label_bits(&self) -> usize {
        (0..self.sparse.palette())
            .map(|c| self.color_bits(c))
            .chain(core::iter::once(self.vertex_bits()))
            .max()
            .unwrap_or(0)
    }
}

/// One node of the recursive scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum RecursiveNode {
    Single(SingleFaultLabels),
    Split(SplitNode),
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SplitNode {
    pub f: usize,
    pub delta: usize,
    /// Prevalent colors, increasing; `children[i]` handles `G − high[i]`.
    pub high: Vec<Color>,
    pub children: Vec<RecursiveNode>,
    pub sparse: ColoredGraph,
    pub sketch: EdgeFaultSketch,
    /// Killed certificate edges, kept for non-prevalent colors only.
    pub color_edges: Vec<Vec<EdgeId>>,
}

/// Audit record of one split node.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ManifestEntry {
    /// Prevalent colors removed on the way down from the root.
    pub path: Vec<Color>,
    pub f: usize,
    pub m: usize,
    pub delta: usize,
    pub high: Vec<Color>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RecursiveLabels {
    pub graph_mode: ColorMode,
    pub own_colors: Vec<Color>,
    pub palette: usize,
    pub f: usize,
    pub seed: u64,
    pub root: RecursiveNode,
}

/// Estimated max label bits of the scheme at `f` on `g`, used to balance Δ.
fn estimate_bits(g: &ColoredGraph, f: usize, sketch_edge_bits: usize) -> usize {
    let w = Widths::new(g.n(), g.palette());
    let b1 = (2 * build_ruling_set(g).k + 1) * (w.id + w.color) as usize;
    let m = g.m().max(1);
    (2..=f).fold(b1, |b, _| {
        2 * libm::sqrt((b * m * sketch_edge_bits) as f64) as usize
    })
}

fn build_node(g: &ColoredGraph, f: usize, params: SketchParams) -> RecursiveNode {
    if f <= 1 {
        return RecursiveNode::Single(label_single_fault(g));
    }
    let sparse = build_certificate(g).graph(g);
    let sketch = build_edge_fault_labels(&sparse, params);
    let m = sparse.m();
    let w = sketch.edge_bits().max(1);
    let b = estimate_bits(&sparse, f - 1, w);
    let delta = (libm::sqrt((m * b) as f64 / w as f64) as usize).clamp(1, m.max(1));
    let prevalence = sparse.prevalence();
    let high: Vec<Color> = (0..sparse.palette())
        .filter(|&c| prevalence[c] > 0 && prevalence[c] >= delta)
        .collect();
    let children = high
        .iter()
        .enumerate()
        .map(|(i, &h)| {
            let child = SketchParams { seed: derive_seed(params.seed, i as u64), ..params };
            build_node(&sparse.without_colors(&FaultSet::single(h)), f - 1, child)
        })
        .collect();
    let mut color_edges = killed_edges(&sparse);
    for &h in &high {
        color_edges[h].clear();
    }
    RecursiveNode::Split(SplitNode {
        f,
        delta,
        high,
        children,
        sparse,
        sketch,
        color_edges,
    })
}

pub fn label_recursive(g: &ColoredGraph, f: usize, params: SketchParams) -> RecursiveLabels {
    RecursiveLabels {
        graph_mode: g.mode(),
        own_colors: g.vertex_colors().to_vec(),
        palette: g.palette(),
        f: f.max(1),
        seed: params.seed,
        root: build_node(g, f.max(1), params),
    }
}

impl RecursiveNode {
    fn connected(&self, u: Vertex, v: Vertex, faults: &FaultSet) -> Result<bool> {
        match self {
            RecursiveNode::Single(l) => match faults.colors() {
                [c] => l.connected(u, v, *c),
                _ => Err(Error::LabelMismatch("single-fault leaf needs exactly one color")),
            },
            RecursiveNode::Split(node) => {
                if faults.len() > node.f {
                    return Err(Error::LabelMismatch("more faults than the scheme supports"));
                }
                let hit = faults
                    .iter()
                    .find_map(|c| node.high.binary_search(&c).ok().map(|i| (i, c)));
                if let Some((i, h)) = hit {
                    let mut rest = faults.without(h);
                    if rest.is_empty() {
                        // `h` has no edges left below, so this is plain connectivity.
                        rest = FaultSet::single(h);
                    }
                    return node.children[i].connected(u, v, &rest);
                }
                let faulty: Vec<&EdgeSketchLabel> = faults
                    .iter()
                    .flat_map(|c| node.color_edges[c].iter().map(|&e| &node.sketch.edges[e]))
                    .collect();
                node.sketch
                    .query(&node.sketch.vertices[u], &node.sketch.vertices[v], &faulty)
            }
        }
    }

    fn vertex_bits(&self, v: Vertex) -> usize {
        match self {
            RecursiveNode::Single(l) => l.vertices[v].bit_len(&l.widths),
            RecursiveNode::Split(node) => {
                node.sketch.vertex_bits() + node.children.iter().map(|c| c.vertex_bits(v)).sum::<usize>()
            }
        }
    }

    fn color_bits(&self, c: Color) -> usize {
        match self {
            RecursiveNode::Single(l) => l.colors[c].bit_len(&l.widths),
            RecursiveNode::Split(node) => {
                let own = if node.high.binary_search(&c).is_ok() {
                    1 + bits_for(node.high.len()) as usize
                } else {
                    1 + bits_for(node.sparse.m() + 1) as usize
                        + node.color_edges[c].len() * node.sketch.edge_bits()
                };
                own + node.children.iter().map(|ch| ch.color_bits(c)).sum::<usize>()
            }
        }
    }

    fn manifest(&self, path: &mut Vec<Color>, out: &mut Vec<ManifestEntry>) {
        if let RecursiveNode::Split(node) = self {
            out.push(ManifestEntry {
                path: path.clone(),
                f: node.f,
                m: node.sparse.m(),
                delta: node.delta,
                high: node.high.clone(),
            });
            for (&h, child) in node.high.iter().zip(&node.children) {
                path.push(h);
                child.manifest(path, out);
                path.pop();
            }
        }
    }
}

impl RecursiveLabels {
    pub fn n(&self) -> usize {
        match &self.root {
            RecursiveNode::Single(l) => l.n,
            RecursiveNode::Split(node) => node.sparse.n(),
        }
    }

    /// Whether `u` and `v` are connected in `G − F`, for `|F| ≤ f`.
    pub fn connected(&self, u: Vertex, v: Vertex, faults: &FaultSet) -> Result<bool> {
        let n = self.n();
        for x in [u, v] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
            if self.graph_mode == ColorMode::Vertex && faults.contains(self.own_colors[x]) {
                return Err(Error::RemovedVertex(x));
            }
        }
        if let Some(&c) = faults.colors().last() {
            if c >= self.palette {
                return Err(Error::InvalidFaultSet { color: c, palette: self.palette });
            }
        }
        self.root.connected(u, v, faults)
    }

    fn own_color_bits(&self) -> usize {
        match self.graph_mode {
            ColorMode::Edge => 0,
            ColorMode::Vertex => bits_for(self.palette) as usize,
        }
    }

    pub fn vertex_bits(&self, v: Vertex) -> usize {
        let own = match self.root {
            // Single-fault labels already carry the own color.
            RecursiveNode::Single(_) => 0,
            RecursiveNode::Split(_) => self.own_color_bits(),
        };
        own + self.root.vertex_bits(v)
    }

    pub fn color_bits(&self, c: Color) -> usize {
        self.root.color_bits(c)
    }

    pub fn max_label_bits(&self) -> usize {
        (0..self.n())
            .map(|v| self.vertex_bits(v))
            .chain((0..self.palette).map(|c| self.color_bits(c)))
            .max()
            .unwrap_or(0)
    }

    pub fn manifest(&self) -> Vec<ManifestEntry> {
        let mut out = Vec::new();
        self.root.manifest(&mut Vec::new(), &mut out);
        out
    }
}

/// Free-function form of [`RecursiveLabels::connected`].
pub fn query_recursive(l: &RecursiveLabels, u: Vertex, v: Vertex, faults: &FaultSet) -> Result<bool> {
    l.connected(u, v, faults)
}

/// Canonical encoding of one color label of the large-f scheme.
pub fn encode_large_f_color(l: &LargeFLabels, c: Color, out: &mut BitWriter) {
    out.write(l.color_edges[c].len() as u64, bits_for(l.sparse.m() + 1));
    for e in l.color_label(c) {
        e.encode(out, &l.sketch.widths);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    const RED: Color = 0;
    const BLUE: Color = 1;

    fn triangle() -> ColoredGraph {
        ColoredGraph::edge_colored(3, 2, [(0, 1, RED), (1, 2, RED), (0, 2, BLUE)]).unwrap()
    }

    #[test]
    fn triangle_certificate() {
        let cert = build_certificate(&triangle());
        assert_eq!(cert.forests, vec![(vec![RED], vec![0, 1]), (vec![BLUE], vec![2])]);
        assert_eq!(cert.edges, vec![0, 1, 2]);
    }

    #[test]
    fn parallel_edges_collapse() {
        let g = ColoredGraph::edge_colored(2, 1, [(0, 1, 0), (0, 1, 0), (0, 1, 0)]).unwrap();
        assert_eq!(build_certificate(&g).edges, vec![0]);
    }

    #[test]
    fn large_f_triangle() {
        let l = label_large_f(&triangle(), SketchParams::new(5));
        assert!(l.connected(0, 1, &FaultSet::empty()).unwrap());
        assert!(!l.connected(0, 1, &FaultSet::single(RED)).unwrap());
        assert!(l.connected(0, 2, &FaultSet::single(RED)).unwrap());
    }

    #[test]
    fn f1_is_single_fault() {
        let g = triangle();
        let l = label_recursive(&g, 1, SketchParams::new(1));
        assert_eq!(l.root, RecursiveNode::Single(label_single_fault(&g)));
        assert!(l.manifest().is_empty());
    }

    #[test]
    fn chord_example() {
        let g = ColoredGraph::edge_colored(4, 3, [(0, 1, 0), (1, 2, 1), (2, 3, 0), (0, 3, 2)])
            .unwrap();
        let l = label_recursive(&g, 2, SketchParams::new(2));
        assert!(!l.connected(0, 3, &FaultSet::from_colors([0, 2])).unwrap());
        assert!(l.connected(1, 2, &FaultSet::from_colors([0, 2])).unwrap());
        assert!(l.connected(0, 3, &FaultSet::from_colors([1])).unwrap());
        assert!(l.connected(0, 3, &FaultSet::empty()).unwrap());
    }

    #[test]
    fn one_edge_colors_are_never_prevalent() {
        let g = ColoredGraph::edge_colored(64, 63, (1..64).map(|v| (v - 1, v, v - 1))).unwrap();
        let l = label_recursive(&g, 2, SketchParams::new(3));
        let RecursiveNode::Split(node) = &l.root else { panic!("expected a split node") };
        assert!(node.delta > 1);
        assert!(node.high.is_empty());
    }

    #[test]
    fn children_match_prevalent_colors() {
        let edges = (0..12).map(|i| (i % 6, (i * 5 + 1) % 6, i % 3));
        let g = ColoredGraph::edge_colored(6, 3, edges).unwrap();
        let l = label_recursive(&g, 3, SketchParams::new(4));
        fn walk(n: &RecursiveNode) {
            if let RecursiveNode::Split(s) = n {
                assert_eq!(s.children.len(), s.high.len());
                s.children.iter().for_each(walk);
            }
        }
        walk(&l.root);
        for e in l.manifest() {
            assert!(e.delta >= 1 && e.delta <= e.m.max(1));
        }
    }

    #[test]
    fn vertex_mode_removed_endpoint() {
        let g = ColoredGraph::vertex_colored(2, vec![0, 1, 0], [(0, 1), (1, 2)]).unwrap();
        let l = label_recursive(&g, 2, SketchParams::new(1));
        assert_eq!(
            l.connected(1, 2, &FaultSet::single(1)),
            Err(Error::RemovedVertex(1))
        );
        assert!(!l.connected(0, 2, &FaultSet::single(1)).unwrap());
    }
}
