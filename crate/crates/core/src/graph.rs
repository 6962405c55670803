//! Colored multigraphs, fault sets and the connectivity primitives every
//! scheme is built on.
//!
//! Vertex ids are `0..n`, edge ids `0..m` in insertion order, color ids
//! `0..palette`. All scans run in increasing id order and BFS explores
//! neighbors by `(neighbor id, edge id)`, so every derived structure is a
//! deterministic function of the graph.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};

pub type Vertex = usize;
pub type EdgeId = usize;
pub type Color = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ColorMode {
    Edge,
    Vertex,
}

/// Minimum vertex id of a connected component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComponentId(pub Vertex);

/// A set of faulty colors, kept sorted and free of duplicates.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FaultSet(Vec<Color>);

impl FaultSet {
    pub fn empty() -> Self {
        FaultSet(Vec::new())
    }

    pub fn single(c: Color) -> Self {
        FaultSet(alloc::vec![c])
    }

    pub fn from_colors<I: IntoIterator<Item = Color>>(colors: I) -> Self {
        let mut v: Vec<Color> = colors.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        FaultSet(v)
    }

    pub fn contains(&self, c: Color) -> bool {
        self.0.binary_search(&c).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn colors(&self) -> &[Color] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = Color> + '_ {
        self.0.iter().copied()
    }

    pub fn without(&self, c: Color) -> FaultSet {
        FaultSet(self.0.iter().copied().filter(|&x| x != c).collect())
    }

    pub fn with(&self, c: Color) -> FaultSet {
        FaultSet::from_colors(self.0.iter().copied().chain(core::iter::once(c)))
    }

    pub fn is_subset(&self, other: &FaultSet) -> bool {
        self.iter().all(|c| other.contains(c))
    }
}

/// Colored multigraph. Parallel edges and self-loops are allowed; self-loops
/// never affect connectivity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    n: usize,
    palette: usize,
    mode: ColorMode,
    edges: Vec<(Vertex, Vertex)>,
    edge_colors: Vec<Color>,
    vertex_colors: Vec<Color>,
    adj: Vec<Vec<(Vertex, EdgeId)>>,
}

impl ColoredGraph {
    /// Builds an edge-colored graph from `(u, v, color)` triples.
    pub fn edge_colored<I>(n: usize, palette: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex, Color)>,
    {
        let mut list = Vec::new();
        let mut colors = Vec::new();
        for (u, v, c) in edges {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            check_color(c, palette)?;
            list.push((u, v));
            colors.push(c);
        }
        Ok(Self::assemble(n, palette, ColorMode::Edge, list, colors, Vec::new()))
    }

    /// Builds a vertex-colored graph; `vertex_colors[v]` is the color of `v`.
    pub fn vertex_colored<I>(palette: usize, vertex_colors: Vec<Color>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let n = vertex_colors.len();
        for &c in &vertex_colors {
            check_color(c, palette)?;
        }
        let mut list = Vec::new();
        for (u, v) in edges {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            list.push((u, v));
        }
        Ok(Self::assemble(n, palette, ColorMode::Vertex, list, Vec::new(), vertex_colors))
    }

    fn assemble(
        n: usize,
        palette: usize,
        mode: ColorMode,
        edges: Vec<(Vertex, Vertex)>,
        edge_colors: Vec<Color>,
        vertex_colors: Vec<Color>,
    ) -> Self {
        let mut adj = alloc::vec![Vec::new(); n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, e));
            if u != v {
                adj[v].push((u, e));
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        ColoredGraph {
            n,
            palette,
            mode,
            edges,
            edge_colors,
            vertex_colors,
            adj,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn palette(&self) -> usize {
        self.palette
    }

    pub fn mode(&self) -> ColorMode {
        self.mode
    }

    pub fn edge(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// Color of edge `e` (edge mode only).
    pub fn edge_color(&self, e: EdgeId) -> Option<Color> {
        self.edge_colors.get(e).copied()
    }

    /// Color of vertex `v` (vertex mode only).
    pub fn vertex_color(&self, v: Vertex) -> Option<Color> {
        self.vertex_colors.get(v).copied()
    }

    pub fn edge_colors(&self) -> &[Color] {
        &self.edge_colors
    }

    pub fn vertex_colors(&self) -> &[Color] {
        &self.vertex_colors
    }

    /// Neighbors of `v` as `(neighbor, edge id)`, sorted.
    pub fn neighbors(&self, v: Vertex) -> &[(Vertex, EdgeId)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    /// Colors whose failure deletes edge `e`: its own color in edge mode,
    /// the colors of its endpoints in vertex mode.
    pub fn edge_fault_colors(&self, e: EdgeId) -> [Option<Color>; 2] {
        match self.mode {
            ColorMode::Edge => [Some(self.edge_colors[e]), None],
            ColorMode::Vertex => {
                let (u, v) = self.edges[e];
                let (a, b) = (self.vertex_colors[u], self.vertex_colors[v]);
                if a == b {
                    [Some(a), None]
                } else {
                    [Some(a.min(b)), Some(a.max(b))]
                }
            }
        }
    }

    pub fn edge_killed_by(&self, e: EdgeId, c: Color) -> bool {
        self.edge_fault_colors(e).contains(&Some(c))
    }

    pub fn edge_alive(&self, e: EdgeId, faults: &FaultSet) -> bool {
        self.edge_fault_colors(e)
            .iter()
            .flatten()
            .all(|&c| !faults.contains(c))
    }

    pub fn vertex_alive(&self, v: Vertex, faults: &FaultSet) -> bool {
        match self.mode {
            ColorMode::Edge => true,
            ColorMode::Vertex => !faults.contains(self.vertex_colors[v]),
        }
    }

    /// Colors met along a walk: every traversed edge's fault colors plus, in
    /// vertex mode, the starting vertex's color.
    pub fn walk_colors(&self, start: Vertex, edges: &[EdgeId]) -> Vec<Color> {
        let mut out: Vec<Color> = edges
            .iter()
            .flat_map(|&e| self.edge_fault_colors(e))
            .flatten()
            .collect();
        if let Some(c) = self.vertex_color(start) {
            out.push(c);
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        check_vertex(v, self.n)
    }

    pub fn check_faults(&self, faults: &FaultSet) -> Result<()> {
        faults.iter().try_for_each(|c| check_color(c, self.palette))
    }

    /// The subgraph `g − F` as a borrowed view.
    pub fn remove_colors(&self, faults: &FaultSet) -> Result<GraphView<'_>> {
        self.check_faults(faults)?;
        Ok(GraphView {
            g: self,
            faults: faults.clone(),
        })
    }

    /// The whole graph as a view with no faults.
    pub fn view(&self) -> GraphView<'_> {
        GraphView {
            g: self,
            faults: FaultSet::empty(),
        }
    }

    /// `cid(v, g − F)`.
    pub fn cid(&self, v: Vertex, faults: &FaultSet) -> Result<ComponentId> {
        self.check_vertex(v)?;
        let view = self.remove_colors(faults)?;
        if !view.vertex_alive(v) {
            return Err(Error::RemovedVertex(v));
        }
        Ok(view.components().cid(v).expect("alive vertex has a component"))
    }

    /// Materializes `g − F` as a graph over the same vertex ids and palette.
    /// Surviving edges keep their relative order; in vertex mode, deleted
    /// vertices stay as isolated vertices.
    pub fn without_colors(&self, faults: &FaultSet) -> ColoredGraph {
        let keep: Vec<EdgeId> = (0..self.m()).filter(|&e| self.edge_alive(e, faults)).collect();
        self.restrict_to_edges(&keep)
    }

    /// The spanning subgraph on the given edge ids (in the given order).
    pub fn restrict_to_edges(&self, keep: &[EdgeId]) -> ColoredGraph {
        let edges = keep.iter().map(|&e| self.edges[e]).collect();
        let edge_colors = match self.mode {
            ColorMode::Edge => keep.iter().map(|&e| self.edge_colors[e]).collect(),
            ColorMode::Vertex => Vec::new(),
        };
        Self::assemble(
            self.n,
            self.palette,
            self.mode,
            edges,
            edge_colors,
            self.vertex_colors.clone(),
        )
    }

    /// Subdivides every edge, switching between edge and vertex coloring.
    ///
    /// Edge → vertex: edge `e = {u,v}` becomes `u — x_e — v` with `x_e`
    /// colored like `e`; the original vertices take the fresh color `C`,
    /// which no fault set over `0..C` contains. Vertex → edge: each half
    /// edge takes the color of its original endpoint. The subdivision vertex
    /// of edge `e` is `n + e`; half edges are `2e` (toward `u`) and `2e + 1`.
    pub fn reduce_between_modes(&self) -> ColoredGraph {
        let n = self.n;
        let half_edges = self
            .edges
            .iter()
            .enumerate()
            .flat_map(|(e, &(u, v))| [(u, n + e), (n + e, v)]);
        match self.mode {
            ColorMode::Edge => {
                let mut colors = alloc::vec![self.palette; n];
                colors.extend_from_slice(&self.edge_colors);
                let half: Vec<_> = half_edges.collect();
                Self::assemble(
                    n + self.m(),
                    self.palette + 1,
                    ColorMode::Vertex,
                    half,
                    Vec::new(),
                    colors,
                )
            }
            ColorMode::Vertex => {
                let mut list = Vec::with_capacity(2 * self.m());
                let mut colors = Vec::with_capacity(2 * self.m());
                for (e, &(u, v)) in self.edges.iter().enumerate() {
                    list.push((u, n + e));
                    colors.push(self.vertex_colors[u]);
                    list.push((n + e, v));
                    colors.push(self.vertex_colors[v]);
                }
                Self::assemble(n + self.m(), self.palette, ColorMode::Edge, list, colors, Vec::new())
            }
        }
    }

    /// Edges whose fault colors include `c` (the color class `E_c`).
    pub fn color_class(&self, c: Color) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.m()).filter(move |&e| self.edge_killed_by(e, c))
    }

    /// Prevalence of each color: `|E_c|` in edge mode, the volume (sum of
    /// degrees of `c`-colored vertices) in vertex mode.
    pub fn prevalence(&self) -> Vec<usize> {
        let mut counts = alloc::vec![0; self.palette];
        match self.mode {
            ColorMode::Edge => {
                for &c in &self.edge_colors {
                    counts[c] += 1;
                }
            }
            ColorMode::Vertex => {
                for &(u, v) in &self.edges {
                    counts[self.vertex_colors[u]] += 1;
                    counts[self.vertex_colors[v]] += 1;
                }
            }
        }
        counts
    }
}

fn check_vertex(v: Vertex, n: usize) -> Result<()> {
    if v < n {
        Ok(())
    } else {
        Err(Error::VertexOutOfRange { vertex: v, n })
    }
}

fn check_color(c: Color, palette: usize) -> Result<()> {
    if c < palette {
        Ok(())
    } else {
        Err(Error::InvalidFaultSet { color: c, palette })
    }
}

/// `g − F`: edges and (in vertex mode) vertices with a faulty color are
/// absent. Vertex ids are preserved.
#[derive(Debug, Clone)]
pub struct GraphView<'a> {
    g: &'a ColoredGraph,
    faults: FaultSet,
}

impl<'a> GraphView<'a> {
    pub fn graph(&self) -> &'a ColoredGraph {
        self.g
    }

    pub fn faults(&self) -> &FaultSet {
        &self.faults
    }

    pub fn vertex_alive(&self, v: Vertex) -> bool {
        self.g.vertex_alive(v, &self.faults)
    }

    pub fn edge_alive(&self, e: EdgeId) -> bool {
        self.g.edge_alive(e, &self.faults)
    }

    /// Surviving edge ids in increasing order.
    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.g.m()).filter(move |&e| self.edge_alive(e))
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = (Vertex, EdgeId)> + '_ {
        self.g.neighbors(v).iter().copied().filter(move |&(_, e)| self.edge_alive(e))
    }

    /// Component ids of all vertices; `None` for deleted vertices.
    pub fn components(&self) -> Components {
        let mut dsu = DisjointSets::new(self.g.n());
        for e in self.edges() {
            let (u, v) = self.g.edge(e);
            dsu.union(u, v);
        }
        let mins = dsu.min_labels();
        Components {
            cid: (0..self.g.n())
                .map(|v| self.vertex_alive(v).then_some(mins[v]))
                .collect(),
        }
    }

    /// Maximal spanning forest: edges scanned in increasing id through
    /// union-find, self-loops skipped.
    pub fn spanning_forest(&self) -> Vec<EdgeId> {
        let mut dsu = DisjointSets::new(self.g.n());
        self.edges()
            .filter(|&e| {
                let (u, v) = self.g.edge(e);
                dsu.union(u, v)
            })
            .collect()
    }

    /// BFS tree of `root`'s component.
    pub fn bfs_tree(&self, root: Vertex) -> BfsTree {
        let n = self.g.n();
        let mut parent = alloc::vec![None; n];
        let mut depth = alloc::vec![None; n];
        let mut order = Vec::new();
        if self.vertex_alive(root) {
            let mut queue = VecDeque::new();
            depth[root] = Some(0);
            queue.push_back(root);
            while let Some(x) = queue.pop_front() {
                order.push(x);
                let dx = depth[x].unwrap();
                for (y, e) in self.neighbors(x) {
                    if depth[y].is_none() {
                        depth[y] = Some(dx + 1);
                        parent[y] = Some((x, e));
                        queue.push_back(y);
                    }
                }
            }
        }
        BfsTree {
            root,
            parent,
            depth,
            order,
        }
    }
}

/// Per-vertex component ids of some subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub cid: Vec<Option<Vertex>>,
}

impl Components {
    pub fn cid(&self, v: Vertex) -> Option<ComponentId> {
        self.cid[v].map(ComponentId)
    }

    pub fn same(&self, u: Vertex, v: Vertex) -> bool {
        matches!((self.cid[u], self.cid[v]), (Some(a), Some(b)) if a == b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfsTree {
    pub root: Vertex,
    /// `(parent, edge to parent)`; `None` for the root and unreached vertices.
    pub parent: Vec<Option<(Vertex, EdgeId)>>,
    pub depth: Vec<Option<usize>>,
    /// Vertices in the order they were dequeued.
    pub order: Vec<Vertex>,
}

impl BfsTree {
    /// Edges on the tree path from `v` up to the root.
    pub fn path_to_root(&self, mut v: Vertex) -> Vec<EdgeId> {
        let mut out = Vec::new();
        while let Some((p, e)) = self.parent[v] {
            out.push(e);
            v = p;
        }
        out
    }
}

/// BFS distances from `src` over the full topology (`None` = unreachable).
pub fn bfs_distances(g: &ColoredGraph, src: Vertex) -> Vec<Option<usize>> {
    g.view().bfs_tree(src).depth
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    const RED: Color = 0;
    const BLUE: Color = 1;

    fn triangle() -> ColoredGraph {
        ColoredGraph::edge_colored(3, 2, [(0, 1, RED), (0, 2, BLUE), (1, 2, RED)]).unwrap()
    }

    fn path_aba() -> ColoredGraph {
        ColoredGraph::edge_colored(4, 2, [(0, 1, 0), (1, 2, 1), (2, 3, 0)]).unwrap()
    }

    #[test]
    fn remove_red_from_triangle() {
        let g = triangle();
        let view = g.remove_colors(&FaultSet::single(RED)).unwrap();
        assert_eq!(view.edges().collect::<Vec<_>>(), vec![1]);
        assert_eq!(g.edge(1), (0, 2));
    }

    #[test]
    fn empty_fault_set_is_identity() {
        let g = triangle();
        let view = g.remove_colors(&FaultSet::empty()).unwrap();
        assert_eq!(view.edges().count(), g.m());
        assert_eq!(g.without_colors(&FaultSet::empty()), g);
    }

    #[test]
    fn invalid_fault_color() {
        let g = triangle();
        assert_eq!(
            g.remove_colors(&FaultSet::single(2)).unwrap_err(),
            Error::InvalidFaultSet { color: 2, palette: 2 }
        );
    }

    #[test]
    fn cid_examples() {
        let g = triangle();
        assert_eq!(g.cid(2, &FaultSet::single(RED)).unwrap(), ComponentId(0));
        assert_eq!(g.cid(1, &FaultSet::single(RED)).unwrap(), ComponentId(1));
        let p = path_aba();
        assert_eq!(p.cid(2, &FaultSet::single(1)).unwrap(), ComponentId(2));
        assert_eq!(
            p.cid(9, &FaultSet::empty()).unwrap_err(),
            Error::VertexOutOfRange { vertex: 9, n: 4 }
        );
    }

    #[test]
    fn removed_vertex_is_an_error() {
        let g = ColoredGraph::vertex_colored(2, vec![0, 1, 0], [(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.cid(1, &FaultSet::single(1)).unwrap_err(), Error::RemovedVertex(1));
        assert_eq!(g.cid(2, &FaultSet::single(1)).unwrap(), ComponentId(2));
    }

    #[test]
    fn spanning_forest_examples() {
        assert_eq!(triangle().view().spanning_forest(), vec![0, 1]);
        let empty = ColoredGraph::edge_colored(3, 1, []).unwrap();
        assert!(empty.view().spanning_forest().is_empty());
        let tree = ColoredGraph::edge_colored(4, 1, [(0, 1, 0), (1, 2, 0), (1, 3, 0)]).unwrap();
        assert_eq!(tree.view().spanning_forest(), vec![0, 1, 2]);
    }

    #[test]
    fn bfs_examples() {
        let p = path_aba();
        let t = p.view().bfs_tree(0);
        assert_eq!(t.depth, vec![Some(0), Some(1), Some(2), Some(3)]);
        let star =
            ColoredGraph::edge_colored(5, 1, (1..5).map(|v| (0, v, 0))).unwrap();
        let t = star.view().bfs_tree(0);
        assert!(t.depth[1..].iter().all(|&d| d == Some(1)));
    }

    #[test]
    fn self_loops_do_not_connect() {
        let g = ColoredGraph::edge_colored(2, 1, [(0, 0, 0), (1, 1, 0)]).unwrap();
        let c = g.view().components();
        assert!(!c.same(0, 1));
        assert!(g.view().spanning_forest().is_empty());
    }

    #[test]
    fn reduction_counts() {
        let t = triangle().reduce_between_modes();
        assert_eq!((t.n(), t.m()), (6, 6));
        assert_eq!(t.mode(), ColorMode::Vertex);

        let single = ColoredGraph::edge_colored(2, 1, [(0, 1, 0)]).unwrap();
        let r = single.reduce_between_modes();
        assert_eq!(r.palette(), 2);
        assert_eq!(r.vertex_colors(), &[1, 1, 0]);

        let back = r.reduce_between_modes();
        assert_eq!(back.mode(), ColorMode::Edge);
        assert_eq!((back.n(), back.m()), (5, 4));
    }

    #[test]
    fn vertex_mode_fault_colors() {
        let g = ColoredGraph::vertex_colored(3, vec![2, 0, 2], [(0, 1), (0, 2)]).unwrap();
        assert_eq!(g.edge_fault_colors(0), [Some(0), Some(2)]);
        assert_eq!(g.edge_fault_colors(1), [Some(2), None]);
        assert_eq!(g.prevalence(), vec![1, 0, 3]);
        assert_eq!(g.walk_colors(1, &[]), vec![0]);
    }
}
