//! All-pairs connectivity labels from any single-source scheme.
//!
//! A grid of augmented copies of the graph is built, each with a fresh
//! source joined to every vertex independently with probability `2^-j`.
//! Two vertices are reported connected when they agree, in every copy, on
//! whether they reach that copy's source.

use alloc::vec::Vec;

use crate::bits::ceil_log2;
use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::graph::{Color, ColorMode, ColoredGraph, FaultSet, Vertex};
use crate::hash::hash_words;

/// A labeling scheme answering "is `u` connected to the source in `G − F`".
pub trait SingleSourceScheme {
    type VertexLabel: Clone;
    type ColorLabel: Clone;

    /// Labels for every vertex and every color of `g`, with respect to
    /// `source`. Colors from `fault_palette` on never fail and need
    /// no label.
    fn build(
        &self,
        g: &ColoredGraph,
        source: Vertex,
        fault_palette: usize,
    ) -> Result<(Vec<Self::VertexLabel>, Vec<Self::ColorLabel>)>;

    fn query(&self, lu: &Self::VertexLabel, faults: &[&Self::ColorLabel]) -> Result<bool>;

    fn vertex_bits(&self, l: &Self::VertexLabel) -> usize;

    fn color_bits(&self, l: &Self::ColorLabel) -> usize;

    /// Declared probability of a wrong answer per query.
    fn error_rate(&self) -> f64;
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Rank of a sorted set among all sets of the same size, in colex order.
pub fn colex_rank(set: &[usize]) -> usize {
    set.iter().enumerate().map(|(i, &c)| binomial(c, i + 1)).sum()
}

/// The `rank`-th `size`-subset in colex order, sorted.
pub fn colex_unrank(mut rank: usize, size: usize) -> Vec<usize> {
    let mut out = alloc::vec![0; size];
    for i in (1..=size).rev() {
        let mut c = i - 1;
        while binomial(c + 1, i) <= rank {
            c += 1;
        }
        rank -= binomial(c, i);
        out[i - 1] = c;
    }
    out
}

/// Position of a fault set among all sets of size at most `f` over `palette`
/// colors: by size, then colex.
pub fn fault_set_index(set: &[usize], palette: usize) -> usize {
    (0..set.len()).map(|s| binomial(palette, s)).sum::<usize>() + colex_rank(set)
}

/// Exact single-source labels: one answer bit per fault set of size ≤ `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactSingleSource {
    pub f: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExactVertexLabel {
    pub palette: usize,
    pub f: usize,
    pub answers: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExactColorLabel {
    pub color: Color,
    pub palette: usize,
}

impl SingleSourceScheme for ExactSingleSource {
    type VertexLabel = ExactVertexLabel;
    type ColorLabel = ExactColorLabel;

    fn build(
        &self,
        g: &ColoredGraph,
        source: Vertex,
        fault_palette: usize,
    ) -> Result<(Vec<ExactVertexLabel>, Vec<ExactColorLabel>)> {
        g.check_vertex(source)?;
        let n = g.n();
        let mut answers = alloc::vec![Vec::new(); n];
        for size in 0..=self.f.min(fault_palette) {
            for rank in 0..binomial(fault_palette, size) {
                let faults = FaultSet::from_colors(colex_unrank(rank, size));
                g.check_faults(&faults)?;
                let mut dsu = DisjointSets::new(n);
                for (e, &(a, b)) in g.edges().iter().enumerate() {
                    if g.edge_alive(e, &faults) {
                        dsu.union(a, b);
                    }
                }
                let alive = g.vertex_alive(source, &faults);
                let root = dsu.find(source);
                for (v, a) in answers.iter_mut().enumerate() {
                    a.push(alive && g.vertex_alive(v, &faults) && dsu.find(v) == root);
                }
            }
        }
        let vertices = answers
            .into_iter()
            .map(|answers| ExactVertexLabel {
                palette: fault_palette,
                f: self.f,
                answers,
            })
            .collect();
        let colors = (0..fault_palette)
            .map(|color| ExactColorLabel {
                color,
                palette: fault_palette,
            })
            .collect();
        Ok((vertices, colors))
    }

    fn query(&self, lu: &ExactVertexLabel, faults: &[&ExactColorLabel]) -> Result<bool> {
        let mut set: Vec<usize> = faults.iter().map(|l| l.color).collect();
        set.sort_unstable();
        set.dedup();
        if set.len() > lu.f {
            return Err(Error::LabelMismatch("more faults than the scheme tolerates"));
        }
        if let Some(&c) = set.iter().find(|&&c| c >= lu.palette) {
            return Err(Error::InvalidFaultSet { color: c, palette: lu.palette });
        }
        Ok(lu.answers[fault_set_index(&set, lu.palette)])
    }

    fn vertex_bits(&self, l: &ExactVertexLabel) -> usize {
        l.answers.len()
    }

    fn color_bits(&self, l: &ExactColorLabel) -> usize {
        crate::bits::bits_for(l.palette) as usize
    }

    fn error_rate(&self) -> f64 {
        0.0
    }
}

/// Grid dimensions and seed of the augmented instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AugmentedInstance {
    pub rows: usize,
    pub cols: usize,
    pub seed: u64,
}

impl AugmentedInstance {
    /// `⌈α ln n / ln(10/9)⌉` rows (at least one) and `⌈log₂ n⌉ + 2` columns.
    pub fn new(n: usize, alpha: f64, seed: u64) -> Self {
        let rows = libm::ceil(alpha * libm::log(n as f64) / libm::log(10.0 / 9.0));
        AugmentedInstance {
            rows: (rows as usize).max(1),
            cols: ceil_log2(n) as usize + 2,
            seed,
        }
    }

    /// Whether the source of cell `(i, j)` (1-based) is joined to `v`.
    pub fn joined(&self, i: usize, j: usize, v: Vertex) -> bool {
        let h = hash_words(self.seed, &[i as u64, j as u64, v as u64]);
        j < 64 && h < 1u64 << (64 - j)
    }

    /// `G_ij`: `g` plus source `n` joined by edges of the never-failing color
    /// `palette`.
    pub fn cell(&self, g: &ColoredGraph, i: usize, j: usize) -> Result<ColoredGraph> {
        let n = g.n();
        let never = g.palette();
        let extra = (0..n).filter(|&v| self.joined(i, j, v));
        match g.mode() {
            ColorMode::Edge => {
                let edges = g
                    .edges()
                    .iter()
                    .zip(g.edge_colors())
                    .map(|(&(u, v), &c)| (u, v, c))
                    .chain(extra.map(|v| (n, v, never)));
                ColoredGraph::edge_colored(n + 1, never + 1, edges)
            }
            ColorMode::Vertex => {
                let mut colors = g.vertex_colors().to_vec();
                colors.push(never);
                let edges = g.edges().iter().copied().chain(extra.map(|v| (n, v)));
                ColoredGraph::vertex_colored(never + 1, colors, edges)
            }
        }
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.rows).flat_map(move |i| (1..=self.cols).map(move |j| (i, j)))
    }
}

#[derive(Debug, Clone)]
pub struct AllPairsLabels<S: SingleSourceScheme> {
    pub grid: AugmentedInstance,
    /// Per vertex, the inner labels of every cell in row-major order.
    pub vertices: Vec<Vec<S::VertexLabel>>,
    pub colors: Vec<Vec<S::ColorLabel>>,
}

pub fn build_all_pairs<S: SingleSourceScheme>(
    g: &ColoredGraph,
    inner: &S,
    alpha: f64,
    seed: u64,
) -> Result<AllPairsLabels<S>> {
    let grid = AugmentedInstance::new(g.n(), alpha, seed);
    let mut vertices = alloc::vec![Vec::new(); g.n()];
    let mut colors = alloc::vec![Vec::new(); g.palette()];
    for (i, j) in grid.cells() {
        let cell = grid.cell(g, i, j)?;
        let (vl, cl) = inner.build(&cell, g.n(), g.palette())?;
        for (acc, l) in vertices.iter_mut().zip(vl) {
            acc.push(l);
        }
        for (acc, l) in colors.iter_mut().zip(cl) {
            acc.push(l);
        }
    }
    Ok(AllPairsLabels { grid, vertices, colors })
}

/// Connected iff `u` and `w` agree on reaching the source in every cell.
pub fn query_all_pairs<S: SingleSourceScheme>(
    inner: &S,
    lu: &[S::VertexLabel],
    lw: &[S::VertexLabel],
    faults: &[&[S::ColorLabel]],
) -> Result<bool> {
    if lu.len() != lw.len() || faults.iter().any(|f| f.len() != lu.len()) {
        return Err(Error::LengthMismatch {
            expected: lu.len(),
            found: lw.len(),
        });
    }
    for cell in 0..lu.len() {
        let fs: Vec<&S::ColorLabel> = faults.iter().map(|f| &f[cell]).collect();
        if inner.query(&lu[cell], &fs)? != inner.query(&lw[cell], &fs)? {
            return Ok(false);
        }
    }
    Ok(true)
}

impl<S: SingleSourceScheme> AllPairsLabels<S> {
    pub fn connected(&self, inner: &S, u: Vertex, w: Vertex, faults: &[Color]) -> Result<bool> {
        let n = self.vertices.len();
        for &x in &[u, w] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
        }
        let mut fl = Vec::with_capacity(faults.len());
        for &c in faults {
            let l = self.colors.get(c).ok_or(Error::InvalidFaultSet {
                color: c,
                palette: self.colors.len(),
            })?;
            fl.push(l.as_slice());
        }
        query_all_pairs(inner, &self.vertices[u], &self.vertices[w], &fl)
    }

    pub fn vertex_bits(&self, inner: &S, v: Vertex) -> usize {
        self.vertices[v].iter().map(|l| inner.vertex_bits(l)).sum()
    }

    pub fn color_bits(&self, inner: &S, c: Color) -> usize {
        self.colors[c].iter().map(|l| inner.color_bits(l)).sum()
    }
}

/// The column `j` with `2^(j-2) < size ≤ 2^(j-1)`.
pub fn matching_column(size: usize) -> usize {
    ceil_log2_exact(size) + 1
}

fn ceil_log2_exact(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

/// Whether row `i` of column `j` separates `u` from `w` under `faults`,
/// evaluated on the augmented graph directly.
pub fn cell_separates(
    g: &ColoredGraph,
    grid: &AugmentedInstance,
    i: usize,
    j: usize,
    u: Vertex,
    w: Vertex,
    faults: &FaultSet,
) -> Result<bool> {
    let cell = grid.cell(g, i, j)?;
    let view = cell.remove_colors(faults)?;
    let comps = view.components();
    let reach = |x: Vertex| comps.cid(x).is_some() && comps.same(x, g.n());
    Ok(reach(u) != reach(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn two_triangles() -> ColoredGraph {
        ColoredGraph::edge_colored(
            6,
            3,
            [(0, 1, 0), (1, 2, 0), (2, 0, 0), (3, 4, 1), (4, 5, 1), (5, 3, 1), (2, 3, 2)],
        )
        .unwrap()
    }

    #[test]
    fn colex_roundtrip() {
        for size in 0..4 {
            for rank in 0..binomial(6, size) {
                let s = colex_unrank(rank, size);
                assert_eq!(colex_rank(&s), rank);
                assert!(s.windows(2).all(|w| w[0] < w[1]));
            }
        }
        assert_eq!(colex_unrank(0, 2), vec![0, 1]);
        assert_eq!(colex_unrank(1, 2), vec![0, 2]);
        assert_eq!(colex_unrank(2, 2), vec![1, 2]);
        assert_eq!(binomial(4, 2), 6);
    }

    #[test]
    fn grid_dimensions() {
        let g = AugmentedInstance::new(2, 1.0, 0);
        assert_eq!(g.rows, 7);
        assert_eq!(g.cols, 3);
        let g = AugmentedInstance::new(32, 2.0, 0);
        assert_eq!((g.rows, g.cols), (66, 7));
    }

    #[test]
    fn exact_inner_matches_brute_force() {
        let g = two_triangles();
        let inner = ExactSingleSource { f: 2 };
        let (vl, cl) = inner.build(&g, 0, 3).unwrap();
        assert!(inner.query(&vl[5], &[]).unwrap());
        assert!(!inner.query(&vl[5], &[&cl[2]]).unwrap());
        assert!(inner.query(&vl[1], &[&cl[2], &cl[1]]).unwrap());
        assert!(!inner.query(&vl[1], &[&cl[0], &cl[1]]).unwrap());
        assert!(inner.query(&vl[0], &[&cl[0], &cl[1], &cl[0]]).unwrap());
    }

    #[test]
    fn all_pairs_agrees_with_brute_force() {
        let g = two_triangles();
        let inner = ExactSingleSource { f: 2 };
        let labels = build_all_pairs(&g, &inner, 2.0, 11).unwrap();
        for a in 0..3 {
            for b in a..3 {
                let faults: Vec<usize> = if a == b { vec![a] } else { vec![a, b] };
                let fs = FaultSet::from_colors(faults.iter().copied());
                let comps = g.remove_colors(&fs).unwrap().components();
                for u in 0..6 {
                    for w in 0..6 {
                        let got = labels.connected(&inner, u, w, &faults).unwrap();
                        if comps.same(u, w) {
                            assert!(got);
                        } else {
                            assert!(!got, "{u} {w} {faults:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn reproducible_and_sized() {
        let g = two_triangles();
        let inner = ExactSingleSource { f: 1 };
        let a = build_all_pairs(&g, &inner, 1.0, 5).unwrap();
        let b = build_all_pairs(&g, &inner, 1.0, 5).unwrap();
        assert_eq!(a.vertices, b.vertices);
        let cells = a.grid.rows * a.grid.cols;
        assert_eq!(a.vertex_bits(&inner, 0), cells * 4);
    }

    #[test]
    fn matching_columns() {
        assert_eq!(matching_column(1), 1);
        assert_eq!(matching_column(2), 2);
        assert_eq!(matching_column(3), 3);
        assert_eq!(matching_column(4), 3);
        assert_eq!(matching_column(5), 4);
    }

    #[test]
    fn vertex_mode_cells() {
        let g = ColoredGraph::vertex_colored(2, vec![0, 1, 0], [(0, 1), (1, 2)]).unwrap();
        let grid = AugmentedInstance::new(3, 1.0, 3);
        let cell = grid.cell(&g, 1, 1).unwrap();
        assert_eq!(cell.n(), 4);
        assert_eq!(cell.vertex_color(3), Some(2));
        let inner = ExactSingleSource { f: 1 };
        let labels = build_all_pairs(&g, &inner, 1.0, 3).unwrap();
        assert!(!labels.connected(&inner, 0, 2, &[1]).unwrap());
        assert!(labels.connected(&inner, 0, 2, &[]).unwrap());
    }
}
