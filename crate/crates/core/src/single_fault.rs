//! Deterministic connectivity labels for a single color fault.
//!
//! A ruling set `A0 ∪ A` is grown greedily (each new vertex lies at distance
//! exactly `i` from the previously chosen ones); every vertex keeps the
//! component ids it would get for the colors on its shortest path to the set,
//! and every color keeps the component ids of the chosen vertices. Labels
//! have `O(k log n)` bits where `k` is the halting iteration, and `⌊k/4⌋` is
//! a lower bound on the ball packing number of the topology.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::bits::{BitWriter, Encode, Widths};
use crate::error::{Error, Result};
use crate::graph::{Color, ColorMode, ColoredGraph, ComponentId, EdgeId, FaultSet, Vertex};

/// Output of the greedy ruling-set loop.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RulingSet {
    /// Minimum-id vertex of every connected component.
    pub roots: Vec<Vertex>,
    /// `a_1, …, a_{k−1}` in the order they were chosen.
    pub chosen: Vec<Vertex>,
    /// Halting iteration.
    pub k: usize,
}

impl RulingSet {
    /// `A0 ∪ A`, sorted.
    pub fn all(&self) -> Vec<Vertex> {
        let mut v: Vec<Vertex> = self.roots.iter().chain(&self.chosen).copied().collect();
        v.sort_unstable();
        v
    }
}

/// Relaxes `dist` with a BFS from `src`, visiting only improved vertices.
fn relax_from(g: &ColoredGraph, dist: &mut [usize], src: Vertex) {
    let mut queue = VecDeque::new();
    dist[src] = 0;
    queue.push_back(src);
    while let Some(x) = queue.pop_front() {
        for &(y, _) in g.neighbors(x) {
            if dist[x] + 1 < dist[y] {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
}

pub fn build_ruling_set(g: &ColoredGraph) -> RulingSet {
    let n = g.n();
    let comps = g.view().components();
    let roots: Vec<Vertex> = (0..n).filter(|&v| comps.cid[v] == Some(v)).collect();
    let mut dist = alloc::vec![usize::MAX; n];
    for &r in &roots {
        relax_from(g, &mut dist, r);
    }
    let mut chosen = Vec::new();
    let mut i = 1;
    while let Some(a) = (0..n).find(|&v| dist[v] == i) {
        chosen.push(a);
        relax_from(g, &mut dist, a);
        i += 1;
    }
    RulingSet { roots, chosen, k: i }
}

/// The halting iteration `k` of the ruling-set loop; `⌊k/4⌋ ≤ bp(G)`.
pub fn ball_packing_greedy(g: &ColoredGraph) -> usize {
    build_ruling_set(g).k
}

/// Shortest paths from every vertex to the ruling set, chosen so that they
/// form a forest: `P(u)` is a suffix of `P(v)` whenever `u` lies on `P(v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchorForest {
    pub dist: Vec<usize>,
    /// `a(v)`: the minimum-id closest ruling-set vertex.
    pub anchor: Vec<Vertex>,
    /// Next hop of `P(v)` toward `a(v)`.
    pub parent: Vec<Option<(Vertex, EdgeId)>>,
}

impl AnchorForest {
    pub fn new(g: &ColoredGraph, sources: &[Vertex]) -> Self {
        let n = g.n();
        let mut dist = alloc::vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for &s in sources {
            dist[s] = 0;
            queue.push_back(s);
        }
        let mut order = Vec::with_capacity(n);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &(y, _) in g.neighbors(x) {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        order.sort_unstable_by_key(|&v| (dist[v], v));

        let mut anchor: Vec<Vertex> = (0..n).collect();
        let mut parent = alloc::vec![None; n];
        for &v in &order {
            if dist[v] == 0 {
                continue;
            }
            let best = g
                .neighbors(v)
                .iter()
                .filter(|&&(p, _)| dist[p] + 1 == dist[v])
                .map(|&(p, e)| (anchor[p], p, e))
                .min()
                .expect("BFS layer has a predecessor");
            anchor[v] = best.0;
            parent[v] = Some((best.1, best.2));
        }
        AnchorForest {
            dist,
            anchor,
            parent,
        }
    }

    /// Edge ids of `P(v)`, from `v` toward `a(v)`.
    pub fn path_edges(&self, mut v: Vertex) -> Vec<EdgeId> {
        let mut out = Vec::new();
        while let Some((p, e)) = self.parent[v] {
            out.push(e);
            v = p;
        }
        out
    }

    /// Colors whose failure breaks `P(v)` (including, in vertex mode, the
    /// colors of both endpoints), sorted.
    pub fn path_colors(&self, g: &ColoredGraph, v: Vertex) -> Vec<Color> {
        g.walk_colors(v, &self.path_edges(v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SingleFaultVertexLabel {
    /// Own color, present in vertex mode only.
    pub own_color: Option<Color>,
    pub anchor: Vertex,
    /// `d → cid(v, G − d)` for every color `d` on `P(v)`, sorted by `d`.
    pub entries: Vec<(Color, Vertex)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SingleFaultColorLabel {
    pub color: Color,
    /// `a → cid(a, G − c)` for every chosen vertex `a`, sorted by `a`.
    pub entries: Vec<(Vertex, Vertex)>,
}

impl Encode for SingleFaultVertexLabel {
    type Widths = Widths;

    fn encode(&self, out: &mut BitWriter, w: &Widths) {
        if let Some(c) = self.own_color {
            out.write(c as u64, w.color);
        }
        out.write(self.anchor as u64, w.id);
        out.write(self.entries.len() as u64, w.count);
        for &(c, cid) in &self.entries {
            out.write(c as u64, w.color);
            out.write(cid as u64, w.id);
        }
    }
}

impl Encode for SingleFaultColorLabel {
    type Widths = Widths;

    fn encode(&self, out: &mut BitWriter, w: &Widths) {
        out.write(self.color as u64, w.color);
        out.write(self.entries.len() as u64, w.count);
        for &(a, cid) in &self.entries {
            out.write(a as u64, w.id);
            out.write(cid as u64, w.id);
        }
    }
}

/// `cid(v, G − c)` from the labels of `v` and `c`; `None` when `v` itself
/// is deleted by `c` (vertex mode).
pub fn query_single_fault(
    lv: &SingleFaultVertexLabel,
    lc: &SingleFaultColorLabel,
) -> Option<ComponentId> {
    if lv.own_color == Some(lc.color) {
        return None;
    }
    if let Ok(i) = lv.entries.binary_search_by_key(&lc.color, |&(c, _)| c) {
        return Some(ComponentId(lv.entries[i].1));
    }
    match lc.entries.binary_search_by_key(&lv.anchor, |&(a, _)| a) {
        Ok(i) => Some(ComponentId(lc.entries[i].1)),
        // The anchor is the minimum of its component.
        Err(_) => Some(ComponentId(lv.anchor)),
    }
}

/// Labels for every vertex and every palette color.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SingleFaultLabels {
    pub n: usize,
    pub palette: usize,
    pub mode: ColorMode,
    pub widths: Widths,
    pub ruling: RulingSet,
    pub vertices: Vec<SingleFaultVertexLabel>,
    pub colors: Vec<SingleFaultColorLabel>,
}

/// Colors that delete at least one element of `g`.
pub(crate) fn present_colors(g: &ColoredGraph) -> Vec<bool> {
    let mut present = alloc::vec![false; g.palette()];
    match g.mode() {
        ColorMode::Edge => g.edge_colors().iter().for_each(|&c| present[c] = true),
        ColorMode::Vertex => g.vertex_colors().iter().for_each(|&c| present[c] = true),
    }
    present
}

pub fn label_single_fault(g: &ColoredGraph) -> SingleFaultLabels {
    let n = g.n();
    let ruling = build_ruling_set(g);
    let sources = ruling.all();
    let forest = AnchorForest::new(g, &sources);

    let path_colors: Vec<Vec<Color>> = (0..n).map(|v| forest.path_colors(g, v)).collect();
    let mut needing: Vec<Vec<Vertex>> = alloc::vec![Vec::new(); g.palette()];
    for (v, cols) in path_colors.iter().enumerate() {
        for &c in cols {
            needing[c].push(v);
        }
    }

    let own = |v: Vertex| match g.mode() {
        ColorMode::Edge => None,
        ColorMode::Vertex => g.vertex_color(v),
    };
    let mut vertices: Vec<SingleFaultVertexLabel> = (0..n)
        .map(|v| SingleFaultVertexLabel {
            own_color: own(v),
            anchor: forest.anchor[v],
            entries: Vec::with_capacity(path_colors[v].len()),
        })
        .collect();

    let mut chosen = ruling.chosen.clone();
    chosen.sort_unstable();
    let base = g.view().components();
    let present = present_colors(g);
    let mut colors = Vec::with_capacity(g.palette());
    for c in 0..g.palette() {
        let comps = if present[c] {
            g.without_colors(&FaultSet::single(c)).view().components()
        } else {
            base.clone()
        };
        // Colors are visited in increasing order, so entries stay sorted.
        for &v in &needing[c] {
            if own(v) != Some(c) {
                let cid = comps.cid[v].expect("vertex survives its path colors");
                vertices[v].entries.push((c, cid));
            }
        }
        let entries = chosen
            .iter()
            .map(|&a| (a, comps.cid[a].unwrap_or(a)))
            .collect();
        colors.push(SingleFaultColorLabel { color: c, entries });
    }

    for (v, label) in vertices.iter().enumerate() {
        debug_assert!(label.entries.len() < ruling.k.max(1) + 1);
        debug_assert!(path_colors[v]
            .iter()
            .all(|&c| own(v) == Some(c) || label.entries.binary_search_by_key(&c, |e| e.0).is_ok()));
    }

    SingleFaultLabels {
        n,
        palette: g.palette(),
        mode: g.mode(),
        widths: Widths::new(n, g.palette()),
        ruling,
        vertices,
        colors,
    }
}

impl SingleFaultLabels {
    pub fn vertex(&self, v: Vertex) -> Result<&SingleFaultVertexLabel> {
        self.vertices
            .get(v)
            .ok_or(Error::VertexOutOfRange { vertex: v, n: self.n })
    }

    pub fn color(&self, c: Color) -> Result<&SingleFaultColorLabel> {
        self.colors.get(c).ok_or(Error::InvalidFaultSet {
            color: c,
            palette: self.palette,
        })
    }

    pub fn cid(&self, v: Vertex, c: Color) -> Result<ComponentId> {
        query_single_fault(self.vertex(v)?, self.color(c)?).ok_or(Error::RemovedVertex(v))
    }

    /// Whether `u` and `v` are connected once color `c` fails.
    pub fn connected(&self, u: Vertex, v: Vertex, c: Color) -> Result<bool> {
        Ok(self.cid(u, c)? == self.cid(v, c)?)
    }

    pub fn vertex_bits(&self) -> Vec<usize> {
        self.vertices.iter().map(|l| l.bit_len(&self.widths)).collect()
    }

    pub fn color_bits(&self) -> Vec<usize> {
        self.colors.iter().map(|l| l.bit_len(&self.widths)).collect()
    }

    pub fn max_label_bits(&self) -> usize {
        self.vertex_bits()
            .into_iter()
            .chain(self.color_bits())
            .max()
            .unwrap_or(0)
    }
}

/// Largest number of vertices accepted by [`ball_packing_exact`].
pub const BALL_PACKING_LIMIT: usize = 32;

/// Exact ball packing number: the largest `r` admitting `r` vertex-disjoint
/// proper `r`-balls. Exponential search, limited to 32 vertices.
pub fn ball_packing_exact(g: &ColoredGraph) -> Result<usize> {
    ball_packing_witness(g).map(|(r, _)| r)
}

/// Like [`ball_packing_exact`], also returning the centers of a packing.
pub fn ball_packing_witness(g: &ColoredGraph) -> Result<(usize, Vec<Vertex>)> {
    let n = g.n();
    if n > BALL_PACKING_LIMIT {
        return Err(Error::SizeLimit {
            n,
            limit: BALL_PACKING_LIMIT,
        });
    }
    let dist: Vec<Vec<Option<usize>>> = (0..n).map(|v| crate::graph::bfs_distances(g, v)).collect();
    let ecc: Vec<usize> = dist
        .iter()
        .map(|row| row.iter().flatten().copied().max().unwrap_or(0))
        .collect();
    let max_r = ecc.iter().copied().max().unwrap_or(0);
    for r in (1..=max_r).rev() {
        // A ball is proper iff some vertex sits at distance exactly r.
        let centers: Vec<(Vertex, u64)> = (0..n)
            .filter(|&v| ecc[v] >= r)
            .map(|v| {
                let mask = dist[v]
                    .iter()
                    .enumerate()
                    .filter(|(_, d)| matches!(d, Some(d) if *d <= r))
                    .fold(0u64, |m, (u, _)| m | 1 << u);
                (v, mask)
            })
            .collect();
        let mut picked = Vec::new();
        if pick_disjoint(&centers, 0, r, 0, &mut picked) {
            return Ok((r, picked));
        }
    }
    Ok((0, Vec::new()))
}

fn pick_disjoint(
    balls: &[(Vertex, u64)],
    from: usize,
    need: usize,
    used: u64,
    picked: &mut Vec<Vertex>,
) -> bool {
    if need == 0 {
        return true;
    }
    if balls.len() - from < need {
        return false;
    }
    for i in from..balls.len() {
        if balls.len() - i < need {
            break;
        }
        let (v, mask) = balls[i];
        if mask & used == 0 {
            picked.push(v);
            if pick_disjoint(balls, i + 1, need - 1, used | mask, picked) {
                return true;
            }
            picked.pop();
        }
    }
    false
}

/// Checks that the given centers carry `r` disjoint proper `r`-balls.
pub fn check_packing(g: &ColoredGraph, r: usize, centers: &[Vertex]) -> Result<()> {
    use alloc::format;
    if centers.len() != r {
        return Err(Error::InvalidWitness(format!("need {r} centers, got {}", centers.len())));
    }
    let mut owner = alloc::vec![None; g.n()];
    for &v in centers {
        g.check_vertex(v)?;
        let dist = crate::graph::bfs_distances(g, v);
        if !dist.contains(&Some(r)) {
            return Err(Error::InvalidWitness(format!("ball around {v} is not proper")));
        }
        for (u, d) in dist.iter().enumerate() {
            if matches!(d, Some(d) if *d <= r) {
                if let Some(other) = owner[u] {
                    return Err(Error::InvalidWitness(format!(
                        "balls around {other} and {v} share vertex {u}"
                    )));
                }
                owner[u] = Some(v);
            }
        }
    }
    Ok(())
}
