//! Deterministic labels for two color faults, short on graphs of small
//! diameter.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use crate::bits::{BitWriter, Encode, Widths};
use crate::error::{Error, Result};
use crate::graph::{Color, ColorMode, ColoredGraph, ComponentId, Components, EdgeId, FaultSet, Vertex};

/// Greedy hitting set together with the chosen order.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HittingSet {
    /// Chosen vertices, sorted.
    pub vertices: Vec<Vertex>,
}

impl HittingSet {
    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Minimum-id member of `set` that is in the hitting set.
    pub fn representative(&self, set: &[Vertex]) -> Option<Vertex> {
        set.iter().copied().filter(|&v| self.contains(v)).min()
    }
}

/// Repeatedly takes the vertex hitting the most remaining sets (lowest id
/// on ties).
pub fn greedy_hitting_set(sets: &[Vec<Vertex>], n: usize) -> Result<HittingSet> {
    if let Some(i) = sets.iter().position(|s| s.is_empty()) {
        return Err(Error::EmptySet(i));
    }
    let mut containing: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
    let mut count = alloc::vec![0usize; n];
    for (i, s) in sets.iter().enumerate() {
        let mut s = s.clone();
        s.sort_unstable();
        s.dedup();
        for v in s {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            containing[v].push(i);
            count[v] += 1;
        }
    }
    let mut hit = alloc::vec![false; sets.len()];
    let mut remaining = sets.len();
    let mut chosen = Vec::new();
    while remaining > 0 {
        let best = (0..n).max_by_key(|&v| (count[v], core::cmp::Reverse(v))).expect("n > 0");
        chosen.push(best);
        for &i in &containing[best] {
            if !hit[i] {
                hit[i] = true;
                remaining -= 1;
                for v in sets[i].iter().copied().collect::<BTreeSet<_>>() {
                    count[v] -= 1;
                }
            }
        }
    }
    chosen.sort_unstable();
    Ok(HittingSet { vertices: chosen })
}

/// BFS from `origin` in `G − color`, stopped once `cap` vertices are reached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedBfsTree {
    pub origin: Vertex,
    pub color: Color,
    /// Vertices in BFS order.
    pub vertices: Vec<Vertex>,
    /// Tree edges, one per non-origin vertex.
    pub edges: Vec<EdgeId>,
}

impl TruncatedBfsTree {
    pub fn new(g: &ColoredGraph, origin: Vertex, color: Color, cap: usize) -> Self {
        let fault = FaultSet::single(color);
        let mut seen = BTreeSet::new();
        let mut vertices = alloc::vec![origin];
        let mut edges = Vec::new();
        seen.insert(origin);
        let mut queue = VecDeque::from([origin]);
        'outer: while let Some(x) = queue.pop_front() {
            for &(y, e) in g.neighbors(x) {
                if vertices.len() >= cap {
                    break 'outer;
                }
                if g.edge_alive(e, &fault) && seen.insert(y) {
                    vertices.push(y);
                    edges.push(e);
                    queue.push_back(y);
                }
            }
        }
        TruncatedBfsTree {
            origin,
            color,
            vertices,
            edges,
        }
    }

    /// Colors appearing in the tree, sorted.
    pub fn colors(&self, g: &ColoredGraph) -> Vec<Color> {
        let mut out: Vec<Color> = match g.mode() {
            ColorMode::Edge => self.edges.iter().filter_map(|&e| g.edge_color(e)).collect(),
            ColorMode::Vertex => self.vertices.iter().filter_map(|&v| g.vertex_color(v)).collect(),
        };
        out.sort_unstable();
        out.dedup();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Representative {
    pub vertex: Vertex,
    /// `d → cid(u, G − {c, d})` for `d` on the tree path from the root to `u`.
    pub entries: Vec<(Color, Vertex)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PathColorEntry {
    pub color: Color,
    /// `cid(v, G − c)`.
    pub cid: Vertex,
    /// `d → cid(v, G − {c, d})` for `d` in the truncated tree.
    pub entries: Vec<(Color, Vertex)>,
    /// Present iff the truncated tree reached the cap.
    pub rep: Option<Representative>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TwoFaultVertexLabel {
    pub own_color: Option<Color>,
    pub root: Vertex,
    /// One entry per color on the root path, sorted by color.
    pub path: Vec<PathColorEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TwoFaultColorLabel {
    pub color: Color,
    /// `(u, d) → cid(u, G − {c, d})` for `u` in the hitting set and `d` on
    /// its root path, sorted.
    pub entries: Vec<((Vertex, Color), Vertex)>,
}

fn lookup<K: Ord + Copy, V: Copy>(map: &[(K, V)], key: K) -> Option<V> {
    map.binary_search_by_key(&key, |&(k, _)| k).ok().map(|i| map[i].1)
}

fn write_map(out: &mut BitWriter, map: &[(Color, Vertex)], w: &Widths) {
    out.write(map.len() as u64, w.count);
    for &(c, x) in map {
        out.write(c as u64, w.color);
        out.write(x as u64, w.id);
    }
}

impl Encode for TwoFaultVertexLabel {
    type Widths = Widths;

    fn encode(&self, out: &mut BitWriter, w: &Widths) {
        if let Some(c) = self.own_color {
            out.write(c as u64, w.color);
        }
        out.write(self.root as u64, w.id);
        out.write(self.path.len() as u64, w.count);
        for e in &self.path {
            out.write(e.color as u64, w.color);
            out.write(e.cid as u64, w.id);
            write_map(out, &e.entries, w);
            out.write_bool(e.rep.is_some());
            if let Some(r) = &e.rep {
                out.write(r.vertex as u64, w.id);
                write_map(out, &r.entries, w);
            }
        }
    }
}

impl Encode for TwoFaultColorLabel {
    type Widths = Widths;

    fn encode(&self, out: &mut BitWriter, w: &Widths) {
        out.write(self.color as u64, w.color);
        out.write(self.entries.len() as u64, w.id + w.color + 1);
        for &((u, d), x) in &self.entries {
            out.write(u as u64, w.id);
            out.write(d as u64, w.color);
            out.write(x as u64, w.id);
        }
    }
}

/// `cid(v, G − {c, d})` from the labels of `v`, `c` and `d`; `None` when
/// `v` itself is deleted.
pub fn query_two_fault_cid(
    lv: &TwoFaultVertexLabel,
    lc: &TwoFaultColorLabel,
    ld: &TwoFaultColorLabel,
) -> Option<ComponentId> {
    if lv.own_color == Some(lc.color) || lv.own_color == Some(ld.color) {
        return None;
    }
    let find = |c: Color| lv.path.binary_search_by_key(&c, |e| e.color).ok().map(|i| &lv.path[i]);
    let (entry, lc, ld) = match (find(lc.color), find(ld.color)) {
        (Some(e), _) => (e, lc, ld),
        (None, Some(e)) => (e, ld, lc),
        (None, None) => return Some(ComponentId(lv.root)),
    };
    let (c, d) = (lc.color, ld.color);
    if c == d {
        return Some(ComponentId(entry.cid));
    }
    if let Some(x) = lookup(&entry.entries, d) {
        return Some(ComponentId(x));
    }
    let Some(rep) = &entry.rep else {
        return Some(ComponentId(entry.cid));
    };
    if lookup(&rep.entries, c).is_some() {
        let x = lookup(&ld.entries, (rep.vertex, c)).expect("color label covers the hitting set");
        return Some(ComponentId(x));
    }
    if let Some(x) = lookup(&rep.entries, d) {
        return Some(ComponentId(x));
    }
    Some(ComponentId(lv.root))
}

/// Whether `u` and `v` are connected in `G − {c, d}`, from five labels.
pub fn query_two_fault(
    lu: &TwoFaultVertexLabel,
    lv: &TwoFaultVertexLabel,
    lc: &TwoFaultColorLabel,
    ld: &TwoFaultColorLabel,
) -> Option<bool> {
    Some(query_two_fault_cid(lu, lc, ld)? == query_two_fault_cid(lv, lc, ld)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TwoFaultLabels {
    pub n: usize,
    pub palette: usize,
    pub mode: ColorMode,
    pub widths: Widths,
    /// Largest BFS depth over all components.
    pub depth: usize,
    /// Truncation cap `⌈√n⌉`.
    pub cap: usize,
    pub hitting: HittingSet,
    pub vertices: Vec<TwoFaultVertexLabel>,
    pub colors: Vec<TwoFaultColorLabel>,
}

/// `⌈√n⌉`.
pub fn ceil_sqrt(n: usize) -> usize {
    let mut r = libm::sqrt(n as f64) as usize;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

struct PairComponents<'a> {
    g: &'a ColoredGraph,
    cache: BTreeMap<(Color, Color), Components>,
}

impl<'a> PairComponents<'a> {
    fn cid(&mut self, v: Vertex, c: Color, d: Color) -> Option<Vertex> {
        let key = (c.min(d), c.max(d));
        let g = self.g;
        self.cache
            .entry(key)
            .or_insert_with(|| g.without_colors(&FaultSet::from_colors([c, d])).view().components())
            .cid[v]
    }
}

pub fn label_two_fault(g: &ColoredGraph) -> TwoFaultLabels {
    let n = g.n();
    let cap = ceil_sqrt(n).max(1);
    let view = g.view();
    let comps = view.components();

    let mut parent: Vec<Option<(Vertex, EdgeId)>> = alloc::vec![None; n];
    let mut depth = 0;
    for r in (0..n).filter(|&v| comps.cid[v] == Some(v)) {
        let t = view.bfs_tree(r);
        for v in t.order {
            parent[v] = t.parent[v];
            depth = depth.max(t.depth[v].unwrap_or(0));
        }
    }
    let path_edges = |mut v: Vertex| {
        let mut out = Vec::new();
        while let Some((p, e)) = parent[v] {
            out.push(e);
            v = p;
        }
        out
    };
    let own = |v: Vertex| match g.mode() {
        ColorMode::Edge => None,
        ColorMode::Vertex => g.vertex_color(v),
    };
    let path_colors: Vec<Vec<Color>> = (0..n).map(|v| g.walk_colors(v, &path_edges(v))).collect();

    let mut trees: Vec<Vec<TruncatedBfsTree>> = alloc::vec![Vec::new(); n];
    let mut full = Vec::new();
    for v in 0..n {
        for &c in &path_colors[v] {
            if own(v) == Some(c) {
                continue;
            }
            let t = TruncatedBfsTree::new(g, v, c, cap);
            if t.vertices.len() >= cap {
                full.push(t.vertices.clone());
            }
            trees[v].push(t);
        }
    }
    let hitting = greedy_hitting_set(&full, n).expect("trees are nonempty");

    let mut pairs = PairComponents { g, cache: BTreeMap::new() };
    let mut vertices = Vec::with_capacity(n);
    for v in 0..n {
        let mut path = Vec::new();
        for t in &trees[v] {
            let c = t.color;
            let entries = t
                .colors(g)
                .into_iter()
                .filter(|&d| own(v) != Some(d))
                .map(|d| (d, pairs.cid(v, c, d).expect("v survives")))
                .collect();
            let rep = (t.vertices.len() >= cap).then(|| {
                let u = hitting.representative(&t.vertices).expect("full trees are hit");
                let entries = path_colors[u]
                    .iter()
                    .filter(|&&d| own(u) != Some(d))
                    .map(|&d| (d, pairs.cid(u, c, d).expect("u survives")))
                    .collect();
                Representative { vertex: u, entries }
            });
            path.push(PathColorEntry {
                color: c,
                cid: pairs.cid(v, c, c).expect("v survives"),
                entries,
                rep,
            });
        }
        vertices.push(TwoFaultVertexLabel {
            own_color: own(v),
            root: comps.cid[v].expect("full graph"),
            path,
        });
    }

    let colors = (0..g.palette())
        .map(|c| {
            let mut entries = Vec::new();
            for &u in &hitting.vertices {
                for &d in &path_colors[u] {
                    if let Some(x) = pairs.cid(u, c, d) {
                        entries.push(((u, d), x));
                    }
                }
            }
            TwoFaultColorLabel { color: c, entries }
        })
        .collect();

    TwoFaultLabels {
        n,
        palette: g.palette(),
        mode: g.mode(),
        widths: Widths::new(n, g.palette()),
        depth,
        cap,
        hitting,
        vertices,
        colors,
    }
}

impl TwoFaultLabels {
    fn check(&self, v: Vertex, faults: &[Color]) -> Result<()> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        for &c in faults {
            if c >= self.palette {
                return Err(Error::InvalidFaultSet { color: c, palette: self.palette });
            }
        }
        Ok(())
    }

    pub fn cid(&self, v: Vertex, c: Color, d: Color) -> Result<ComponentId> {
        self.check(v, &[c, d])?;
        query_two_fault_cid(&self.vertices[v], &self.colors[c], &self.colors[d])
            .ok_or(Error::RemovedVertex(v))
    }

    pub fn connected(&self, u: Vertex, v: Vertex, c: Color, d: Color) -> Result<bool> {
        Ok(self.cid(u, c, d)? == self.cid(v, c, d)?)
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

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn hitting_set_example() {
        let sets = vec![vec![1, 2], vec![2, 3], vec![3, 4]];
        assert_eq!(greedy_hitting_set(&sets, 5).unwrap().vertices, vec![2, 3]);
        assert_eq!(greedy_hitting_set(&[vec![5]], 6).unwrap().vertices, vec![5]);
        assert_eq!(greedy_hitting_set(&[], 3).unwrap().vertices, Vec::<Vertex>::new());
        assert_eq!(greedy_hitting_set(&[vec![1], vec![]], 3), Err(Error::EmptySet(1)));
    }

    #[test]
    fn distinct_color_tree_needs_no_hitting_set() {
        // Star on 10 vertices: every T_{v,c} is a single vertex.
        let g = ColoredGraph::edge_colored(10, 9, (1..10).map(|v| (0, v, v - 1))).unwrap();
        let l = label_two_fault(&g);
        assert!(l.hitting.vertices.is_empty());
    }

    #[test]
    fn path_aba() {
        let g = ColoredGraph::edge_colored(4, 2, [(0, 1, 0), (1, 2, 1), (2, 3, 0)]).unwrap();
        let l = label_two_fault(&g);
        let l2 = &l.vertices[2];
        assert_eq!(l2.path.iter().map(|e| (e.color, e.cid)).collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert!(!l.connected(0, 3, 0, 1).unwrap());
        assert!(l.connected(1, 1, 0, 1).unwrap());
        assert!(l.connected(2, 3, 1, 1).unwrap());
        assert!(!l.connected(1, 2, 1, 1).unwrap());
    }

    #[test]
    fn truncation_cap() {
        let g = ColoredGraph::edge_colored(9, 2, (1..9).map(|v| (v - 1, v, v % 2))).unwrap();
        let t = TruncatedBfsTree::new(&g, 4, 0, 3);
        assert_eq!(t.vertices.len(), 2);
        let t = TruncatedBfsTree::new(&g, 0, 0, 3);
        assert_eq!(t.vertices, vec![0, 1]);
        assert_eq!(ceil_sqrt(9), 3);
        assert_eq!(ceil_sqrt(10), 4);
        assert_eq!(ceil_sqrt(1), 1);
    }
}
