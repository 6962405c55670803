//! Routing that avoids one forbidden color, simulated hop by hop on a
//! network with numbered ports.
//!
//! The spanning tree `T` contains every anchor path of the single-fault
//! scheme. Once color `c` fails, `T` splits into fragments that the recovery
//! tree `T_c` joins with extra edges. A message first climbs to the root of
//! its fragment, learns the next recovery edge toward a chosen ruling-set
//! vertex `a*`, walks there on `T` and crosses; near the target it switches
//! to tree routing on `T_c`, whose tables exist exactly where needed.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::bits::{bits_for, BitWriter, Encode};
use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::graph::{Color, ColorMode, ColoredGraph, EdgeId, Vertex};
use crate::single_fault::{label_single_fault, AnchorForest, SingleFaultLabels};

/// Ports `0..deg` of every vertex, assigned in edge-id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PortedNetwork {
    ports: Vec<Vec<(EdgeId, Vertex)>>,
}

impl PortedNetwork {
    pub fn new(g: &ColoredGraph) -> Self {
        let mut ports = alloc::vec![Vec::new(); g.n()];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            ports[u].push((e, v));
            if u != v {
                ports[v].push((e, u));
            }
        }
        PortedNetwork { ports }
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.ports[v].len()
    }

    pub fn port_of(&self, v: Vertex, e: EdgeId) -> usize {
        self.ports[v]
            .binary_search_by_key(&e, |&(id, _)| id)
            .expect("edge incident to vertex")
    }

    /// `(neighbor, edge)` behind a port.
    pub fn deliver(&self, v: Vertex, port: usize) -> (Vertex, EdgeId) {
        let (e, w) = self.ports[v][port];
        (w, e)
    }

    pub fn max_degree(&self) -> usize {
        self.ports.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// A rooted spanning forest with DFS entry indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    pub parent: Vec<Option<(Vertex, EdgeId)>>,
    pub children: Vec<Vec<(Vertex, EdgeId)>>,
    pub depth: Vec<usize>,
    /// DFS entry index; children visited in increasing id order.
    pub pre: Vec<usize>,
    /// Largest entry index in the subtree.
    pub last: Vec<usize>,
}

impl RootedTree {
    /// Roots every tree of the forest `edges` at its minimum vertex.
    pub fn new(g: &ColoredGraph, edges: &[EdgeId]) -> Self {
        let n = g.n();
        let mut adj = alloc::vec![Vec::new(); n];
        for &e in edges {
            let (u, v) = g.edge(e);
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        let mut parent = alloc::vec![None; n];
        let mut children = alloc::vec![Vec::new(); n];
        let mut depth = alloc::vec![0; n];
        let mut seen = alloc::vec![false; n];
        for r in 0..n {
            if seen[r] {
                continue;
            }
            seen[r] = true;
            let mut queue = VecDeque::from([r]);
            while let Some(x) = queue.pop_front() {
                for &(y, e) in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        parent[y] = Some((x, e));
                        depth[y] = depth[x] + 1;
                        children[x].push((y, e));
                        queue.push_back(y);
                    }
                }
            }
        }
        for c in &mut children {
            c.sort_unstable();
        }
        let mut pre = alloc::vec![0; n];
        let mut last = alloc::vec![0; n];
        let mut clock = 0;
        for r in (0..n).filter(|&v| parent[v].is_none()) {
            let mut stack = alloc::vec![(r, 0usize)];
            while let Some(&mut (v, ref mut i)) = stack.last_mut() {
                if *i == 0 {
                    pre[v] = clock;
                    clock += 1;
                }
                if let Some(&(w, _)) = children[v].get(*i) {
                    *i += 1;
                    stack.push((w, 0));
                } else {
                    last[v] = clock - 1;
                    stack.pop();
                }
            }
        }
        RootedTree {
            parent,
            children,
            depth,
            pre,
            last,
        }
    }

    /// Directed edges `(x, y, e)` of the tree path from `u` to `v`; `None`
    /// if they lie in different trees.
    pub fn path(&self, u: Vertex, v: Vertex) -> Option<Vec<(Vertex, Vertex, EdgeId)>> {
        let (mut a, mut b) = (u, v);
        let mut up = Vec::new();
        let mut down = Vec::new();
        while a != b {
            if self.depth[a] >= self.depth[b] {
                let (p, e) = self.parent[a]?;
                up.push((a, p, e));
                a = p;
            } else {
                let (p, e) = self.parent[b]?;
                down.push((p, b, e));
                b = p;
            }
        }
        up.extend(down.into_iter().rev());
        Some(up)
    }
}

/// Tree-routing table of one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TreeTable {
    pub parent_port: Option<usize>,
    /// DFS entry indices covered by the subtree.
    pub interval: (usize, usize),
    /// `(first entry index, port)` per child, increasing.
    pub children: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeStep {
    Arrived,
    Port(usize),
}

impl TreeTable {
    /// Next port toward the vertex whose tree label is `dest`.
    pub fn step(&self, dest: usize) -> Result<TreeStep> {
        let (lo, hi) = self.interval;
        if dest == lo {
            return Ok(TreeStep::Arrived);
        }
        if dest < lo || dest > hi {
            return self
                .parent_port
                .map(TreeStep::Port)
                .ok_or(Error::LabelMismatch("destination outside the tree"));
        }
        let i = self.children.partition_point(|&(start, _)| start <= dest);
        Ok(TreeStep::Port(self.children[i - 1].1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeRouting {
    pub tables: Vec<TreeTable>,
    /// Destination label of every vertex: its DFS entry index.
    pub labels: Vec<usize>,
}

pub fn build_tree_routing(tree: &RootedTree, net: &PortedNetwork) -> TreeRouting {
    let n = tree.pre.len();
    let tables = (0..n)
        .map(|v| TreeTable {
            parent_port: tree.parent[v].map(|(_, e)| net.port_of(v, e)),
            interval: (tree.pre[v], tree.last[v]),
            children: tree.children[v]
                .iter()
                .map(|&(w, e)| (tree.pre[w], net.port_of(v, e)))
                .collect::<alloc::collections::BTreeSet<_>>()
                .into_iter()
                .collect(),
        })
        .collect();
    TreeRouting {
        tables,
        labels: tree.pre.clone(),
    }
}

/// Data about the first recovery edge `(x, y)` on a recovery-tree path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FirstRecEdge {
    /// Port of the edge at `x`.
    pub port: usize,
    /// Tree label of `x` in `T`.
    pub x_label: usize,
    /// Whether `y` lies in the fragment of the path's destination.
    pub y_in_target: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RoutingTable {
    pub tree: TreeTable,
    /// Color of the edge to the parent in `T`.
    pub parent_color: Option<Color>,
    /// `FirstRecEdge(v, a, parent_color)` for every ruling-set vertex `a`.
    pub blocks: Vec<Option<FirstRecEdge>>,
    /// Recovery-tree tables for the colors on the anchor path, by color.
    pub recovery: Vec<(Color, TreeTable)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ColorRoute {
    pub color: Color,
    /// Index into the ruling set of a vertex in the nearest fragment of
    /// `T − c` holding one; `None` if the recovery component has none.
    pub a_index: Option<usize>,
    /// `FirstRecEdge(a, v, c)`.
    pub block: Option<FirstRecEdge>,
    /// Tree label in `T_c`.
    pub recovery_label: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RoutingVertexLabel {
    pub tree_label: usize,
    /// Index of the anchor `a(v)` in the ruling set.
    pub anchor_index: usize,
    pub colors: Vec<ColorRoute>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RoutingColorLabel {
    pub color: Color,
    /// `FirstRecEdge(r, a, c)` for every ruling-set vertex `a`.
    pub blocks: Vec<Option<FirstRecEdge>>,
}

/// How the second phase reaches the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Finish {
    /// The target shares the fragment of `a*`: route on `T`.
    Tree,
    /// Walk to the first recovery edge from `a*`, cross, then route on `T_c`.
    Cross(FirstRecEdge, usize),
    /// No fragment holds a ruling-set vertex: route on `T_c` from the start.
    Recovery(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Up {
    True,
    False,
    /// Second phase.
    Bottom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Header {
    pub color: Color,
    pub a_index: Option<usize>,
    pub root_block: Option<FirstRecEdge>,
    pub target_label: usize,
    pub finish: Finish,
    pub up: Up,
    /// Next recovery edge in the first phase; in the second phase, set once
    /// the edge out of the fragment of `a*` has been crossed.
    pub next: Option<FirstRecEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Hop {
    pub from: Vertex,
    pub port: usize,
    pub to: Vertex,
    pub edge: EdgeId,
    pub color: Color,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RouteWidths {
    pub id: u32,
    pub color: u32,
    pub port: u32,
    pub a: u32,
}

/// Recovery structure of one color present on `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Recovery {
    /// Fragment root of every vertex.
    fragment: Vec<Vertex>,
    is_recovery: Vec<bool>,
    tree: RootedTree,
    routing: TreeRouting,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoutingScheme {
    pub net: PortedNetwork,
    /// The ruling set, sorted.
    pub ruling: Vec<Vertex>,
    pub tree: RootedTree,
    pub tables: Vec<RoutingTable>,
    pub vertex_labels: Vec<RoutingVertexLabel>,
    pub color_labels: Vec<RoutingColorLabel>,
    pub widths: RouteWidths,
    pub k: usize,
    connectivity: SingleFaultLabels,
    edge_colors: Vec<Color>,
    recovery: Vec<Option<Recovery>>,
}

fn first_rec_edge(
    rec: &Recovery,
    t: &RootedTree,
    net: &PortedNetwork,
    from: Vertex,
    to: Vertex,
) -> Option<FirstRecEdge> {
    let path = rec.tree.path(from, to)?;
    let &(x, y, e) = path.iter().find(|&&(_, _, e)| rec.is_recovery[e])?;
    Some(FirstRecEdge {
        port: net.port_of(x, e),
        x_label: t.pre[x],
        y_in_target: rec.fragment[y] == rec.fragment[to],
    })
}

fn build_recovery(g: &ColoredGraph, t: &RootedTree, t_edges: &[EdgeId], net: &PortedNetwork, c: Color) -> Recovery {
    let n = g.n();
    let mut dsu = DisjointSets::new(n);
    let mut kept = Vec::new();
    for &e in t_edges {
        if g.edge_color(e) != Some(c) {
            let (u, v) = g.edge(e);
            dsu.union(u, v);
            kept.push(e);
        }
    }
    let mut fragment = alloc::vec![0; n];
    for (v, f) in fragment.iter_mut().enumerate() {
        let mut x = v;
        while let Some((p, e)) = t.parent[x] {
            if g.edge_color(e) == Some(c) {
                break;
            }
            x = p;
        }
        *f = x;
    }
    let mut is_recovery = alloc::vec![false; g.m()];
    for e in 0..g.m() {
        let (u, v) = g.edge(e);
        if g.edge_color(e) != Some(c) && dsu.union(u, v) {
            is_recovery[e] = true;
            kept.push(e);
        }
    }
    let tree = RootedTree::new(g, &kept);
    let routing = build_tree_routing(&tree, net);
    Recovery {
        fragment,
        is_recovery,
        tree,
        routing,
    }
}

/// Ruling-set index of a vertex in the nearest fragment (by recovery-edge
/// hops, then fragment root id) that contains one.
fn nearest_a_fragment(rec: &Recovery, g: &ColoredGraph, ruling: &[Vertex], v: Vertex) -> Option<usize> {
    let n = g.n();
    let mut best_in = alloc::vec![None; n];
    for (i, &a) in ruling.iter().enumerate() {
        let f = rec.fragment[a];
        if best_in[f].is_none() {
            best_in[f] = Some(i);
        }
    }
    let mut frag_adj: Vec<Vec<Vertex>> = alloc::vec![Vec::new(); n];
    for (e, _) in rec.is_recovery.iter().enumerate().filter(|(_, &r)| r) {
        let (x, y) = g.edge(e);
        frag_adj[rec.fragment[x]].push(rec.fragment[y]);
        frag_adj[rec.fragment[y]].push(rec.fragment[x]);
    }
    let mut seen = alloc::vec![false; n];
    let mut level = alloc::vec![rec.fragment[v]];
    seen[rec.fragment[v]] = true;
    while !level.is_empty() {
        if let Some(f) = level.iter().copied().filter(|&f| best_in[f].is_some()).min() {
            return best_in[f];
        }
        let mut next = Vec::new();
        for &f in &level {
            for &h in &frag_adj[f] {
                if !seen[h] {
                    seen[h] = true;
                    next.push(h);
                }
            }
        }
        level = next;
    }
    None
}

pub fn build_routing_scheme(g: &ColoredGraph) -> Result<RoutingScheme> {
    if g.mode() != ColorMode::Edge {
        return Err(Error::UnsupportedMode("routing needs an edge-colored graph"));
    }
    let n = g.n();
    let net = PortedNetwork::new(g);
    let connectivity = label_single_fault(g);
    let ruling = connectivity.ruling.all();
    let forest = AnchorForest::new(g, &ruling);

    let mut dsu = DisjointSets::new(n);
    let mut t_edges: Vec<EdgeId> = forest.parent.iter().flatten().map(|&(_, e)| e).collect();
    for &e in &t_edges {
        let (u, v) = g.edge(e);
        dsu.union(u, v);
    }
    for e in 0..g.m() {
        let (u, v) = g.edge(e);
        if dsu.union(u, v) {
            t_edges.push(e);
        }
    }
    t_edges.sort_unstable();
    let tree = RootedTree::new(g, &t_edges);
    let t_routing = build_tree_routing(&tree, &net);

    let mut on_tree = alloc::vec![false; g.palette()];
    for &e in &t_edges {
        on_tree[g.edge_color(e).expect("edge mode")] = true;
    }
    let recovery: Vec<Option<Recovery>> = (0..g.palette())
        .map(|c| on_tree[c].then(|| build_recovery(g, &tree, &t_edges, &net, c)))
        .collect();

    let a_index = |a: Vertex| ruling.binary_search(&a).expect("ruling-set vertex");
    let path_colors: Vec<Vec<Color>> = (0..n).map(|v| forest.path_colors(g, v)).collect();

    let tables = (0..n)
        .map(|v| {
            let parent_color = tree.parent[v].and_then(|(_, e)| g.edge_color(e));
            let blocks = match parent_color.and_then(|c| recovery[c].as_ref()) {
                Some(rec) => ruling
                    .iter()
                    .map(|&a| first_rec_edge(rec, &tree, &net, v, a))
                    .collect(),
                None => alloc::vec![None; ruling.len()],
            };
            let recovery_tables = path_colors[v]
                .iter()
                .map(|&c| {
                    let rec = recovery[c].as_ref().expect("anchor paths lie on T");
                    (c, rec.routing.tables[v].clone())
                })
                .collect();
            RoutingTable {
                tree: t_routing.tables[v].clone(),
                parent_color,
                blocks,
                recovery: recovery_tables,
            }
        })
        .collect();

    let vertex_labels = (0..n)
        .map(|v| RoutingVertexLabel {
            tree_label: tree.pre[v],
            anchor_index: a_index(forest.anchor[v]),
            colors: path_colors[v]
                .iter()
                .map(|&c| {
                    let rec = recovery[c].as_ref().expect("anchor paths lie on T");
                    let a = nearest_a_fragment(rec, g, &ruling, v);
                    ColorRoute {
                        color: c,
                        a_index: a,
                        block: a.and_then(|i| first_rec_edge(rec, &tree, &net, ruling[i], v)),
                        recovery_label: rec.routing.labels[v],
                    }
                })
                .collect(),
        })
        .collect();

    let color_labels = (0..g.palette())
        .map(|c| RoutingColorLabel {
            color: c,
            blocks: match &recovery[c] {
                Some(rec) => ruling
                    .iter()
                    .map(|&a| {
                        let root = (0..n).find(|&r| tree.parent[r].is_none() && tree.path(r, a).is_some());
                        root.and_then(|r| first_rec_edge(rec, &tree, &net, r, a))
                    })
                    .collect(),
                None => alloc::vec![None; ruling.len()],
            },
        })
        .collect();

    let widths = RouteWidths {
        id: bits_for(n),
        color: bits_for(g.palette()),
        port: bits_for(net.max_degree()),
        a: bits_for(ruling.len() + 1),
    };
    Ok(RoutingScheme {
        net,
        k: connectivity.ruling.k,
        ruling,
        tree,
        tables,
        vertex_labels,
        color_labels,
        widths,
        connectivity,
        edge_colors: g.edge_colors().to_vec(),
        recovery,
    })
}

impl RoutingScheme {
    pub fn n(&self) -> usize {
        self.tables.len()
    }

    /// Builds the initial header at `s` from the labels of `t` and `c`.
    pub fn header(&self, t: Vertex, c: Color) -> Header {
        let lt = &self.vertex_labels[t];
        let lc = &self.color_labels[c];
        let entry = lt.colors.iter().find(|e| e.color == c);
        let (a_index, finish) = match entry {
            None => (Some(lt.anchor_index), Finish::Tree),
            Some(e) => match (e.a_index, e.block) {
                (None, _) => (None, Finish::Recovery(e.recovery_label)),
                (Some(a), None) => (Some(a), Finish::Tree),
                (Some(a), Some(b)) => (Some(a), Finish::Cross(b, e.recovery_label)),
            },
        };
        Header {
            color: c,
            a_index,
            root_block: a_index.and_then(|a| lc.blocks[a]),
            target_label: lt.tree_label,
            finish,
            up: if a_index.is_some() { Up::True } else { Up::Bottom },
            next: None,
        }
    }

    fn tree_port(table: &TreeTable, dest: usize) -> Result<usize> {
        match table.step(dest)? {
            TreeStep::Port(p) => Ok(p),
            TreeStep::Arrived => Err(Error::LabelMismatch("already at the tree destination")),
        }
    }

    /// Next port at `v`, computed from the local table and the header only.
    pub fn step(&self, v: Vertex, h: &mut Header) -> Result<usize> {
        let table = &self.tables[v];
        let c = h.color;
        loop {
            match h.up {
                Up::True => {
                    let is_root = table.tree.parent_port.is_none();
                    if !is_root && table.parent_color != Some(c) {
                        return Ok(table.tree.parent_port.expect("not the root"));
                    }
                    let a = h.a_index.expect("first phase has a target fragment");
                    let block = if is_root { h.root_block } else { table.blocks[a] };
                    match block {
                        None => {
                            h.up = Up::Bottom;
                            h.next = None;
                        }
                        Some(b) => {
                            h.next = Some(b);
                            h.up = Up::False;
                        }
                    }
                }
                Up::False => {
                    let b = h.next.expect("set together with UP = false");
                    if table.tree.interval.0 != b.x_label {
                        return Self::tree_port(&table.tree, b.x_label);
                    }
                    h.up = if b.y_in_target { Up::Bottom } else { Up::True };
                    h.next = None;
                    return Ok(b.port);
                }
                Up::Bottom => {
                    let recovery_dest = match h.finish {
                        Finish::Tree => return Self::tree_port(&table.tree, h.target_label),
                        Finish::Recovery(dest) => dest,
                        Finish::Cross(b, dest) => {
                            if h.next.is_none() {
                                if table.tree.interval.0 != b.x_label {
                                    return Self::tree_port(&table.tree, b.x_label);
                                }
                                h.next = Some(b);
                                return Ok(b.port);
                            }
                            dest
                        }
                    };
                    let rec = table
                        .recovery
                        .iter()
                        .find(|(col, _)| *col == c)
                        .ok_or(Error::LabelMismatch("missing recovery-tree table"))?;
                    return Self::tree_port(&rec.1, recovery_dest);
                }
            }
        }
    }

    /// Checks that, in the first phase outside the fragment of `a*` with
    /// `UP = false`, `NEXT` names the next recovery edge toward `a*`.
    fn check_invariant(&self, v: Vertex, h: &Header) -> Result<()> {
        let (Some(rec), Some(a)) = (self.recovery[h.color].as_ref(), h.a_index) else {
            return Ok(());
        };
        let a = self.ruling[a];
        if h.up != Up::False || rec.fragment[v] == rec.fragment[a] {
            return Ok(());
        }
        let expected = first_rec_edge(rec, &self.tree, &self.net, v, a);
        let got = h.next;
        let same = match (expected, got) {
            (Some(x), Some(y)) => x.port == y.port && x.x_label == y.x_label,
            _ => false,
        };
        if same {
            Ok(())
        } else {
            Err(Error::InvalidWitness(alloc::format!("invariant (I) fails at vertex {v}")))
        }
    }

    /// Simulates routing from `s` to `t` avoiding color `c`.
    pub fn route(&self, s: Vertex, t: Vertex, c: Color) -> Result<Vec<Hop>> {
        if !self.connectivity.connected(s, t, c)? {
            return Err(Error::Unreachable { from: s, target: t, color: c });
        }
        let n = self.n();
        let mut h = self.header(t, c);
        let mut v = s;
        let mut hops = Vec::new();
        while self.tables[v].tree.interval.0 != h.target_label {
            if hops.len() >= n * n {
                return Err(Error::HopBudget(n * n));
            }
            self.check_invariant(v, &h)?;
            let port = self.step(v, &mut h)?;
            let (w, e) = self.net.deliver(v, port);
            hops.push(Hop {
                from: v,
                port,
                to: w,
                edge: e,
                color: self.edge_colors[e],
            });
            v = w;
        }
        Ok(hops)
    }

    pub fn header_bits(&self, h: &Header) -> (usize, usize) {
        let w = &self.widths;
        let mut permanent = BitWriter::new();
        permanent.write(h.color as u64, w.color);
        permanent.write_opt(h.a_index, (1 << w.a) - 1, w.a);
        write_block(&mut permanent, h.root_block.as_ref(), w);
        permanent.write(h.target_label as u64, w.id);
        match h.finish {
            Finish::Tree => permanent.write(0, 2),
            Finish::Cross(b, dest) => {
                permanent.write(1, 2);
                write_block(&mut permanent, Some(&b), w);
                permanent.write(dest as u64, w.id);
            }
            Finish::Recovery(dest) => {
                permanent.write(2, 2);
                permanent.write(dest as u64, w.id);
            }
        }
        let mut mutable = BitWriter::new();
        mutable.write(0, 2);
        write_block(&mut mutable, h.next.as_ref(), w);
        (permanent.len(), mutable.len())
    }

    /// Child-interval entries of a table, reported apart from its size.
    pub fn child_interval_bits(&self, v: Vertex) -> usize {
        let w = &self.widths;
        let per = (w.id + w.port) as usize;
        let t = &self.tables[v];
        per * (t.tree.children.len() + t.recovery.iter().map(|(_, r)| r.children.len()).sum::<usize>())
    }
}

fn write_block(out: &mut BitWriter, b: Option<&FirstRecEdge>, w: &RouteWidths) {
    out.write_bool(b.is_some());
    if let Some(b) = b {
        out.write(b.port as u64, w.port);
        out.write(b.x_label as u64, w.id);
        out.write_bool(b.y_in_target);
    }
}

/// Tree table without the child-interval structure.
fn write_tree_table(out: &mut BitWriter, t: &TreeTable, w: &RouteWidths) {
    out.write_bool(t.parent_port.is_some());
    if let Some(p) = t.parent_port {
        out.write(p as u64, w.port);
    }
    out.write(t.interval.0 as u64, w.id);
    out.write(t.interval.1 as u64, w.id);
}

impl Encode for RoutingTable {
    type Widths = RouteWidths;

    fn encode(&self, out: &mut BitWriter, w: &RouteWidths) {
        write_tree_table(out, &self.tree, w);
        out.write_bool(self.parent_color.is_some());
        if let Some(c) = self.parent_color {
            out.write(c as u64, w.color);
        }
        for b in &self.blocks {
            write_block(out, b.as_ref(), w);
        }
        out.write(self.recovery.len() as u64, w.id + 1);
        for (c, t) in &self.recovery {
            out.write(*c as u64, w.color);
            write_tree_table(out, t, w);
        }
    }
}

impl Encode for RoutingVertexLabel {
    type Widths = RouteWidths;

    fn encode(&self, out: &mut BitWriter, w: &RouteWidths) {
        out.write(self.tree_label as u64, w.id);
        out.write(self.anchor_index as u64, w.a);
        out.write(self.colors.len() as u64, w.id + 1);
        for e in &self.colors {
            out.write(e.color as u64, w.color);
            out.write_opt(e.a_index, (1 << w.a) - 1, w.a);
            write_block(out, e.block.as_ref(), w);
            out.write(e.recovery_label as u64, w.id);
        }
    }
}

impl Encode for RoutingColorLabel {
    type Widths = RouteWidths;

    fn encode(&self, out: &mut BitWriter, w: &RouteWidths) {
        out.write(self.color as u64, w.color);
        for b in &self.blocks {
            write_block(out, b.as_ref(), w);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use crate::graph::FaultSet;

    fn cycle4() -> ColoredGraph {
        ColoredGraph::edge_colored(4, 4, [(0, 1, 0), (1, 2, 1), (2, 3, 2), (3, 0, 3)]).unwrap()
    }

    #[test]
    fn tree_routing_on_path() {
        let g = ColoredGraph::edge_colored(3, 1, [(0, 1, 0), (1, 2, 0)]).unwrap();
        let net = PortedNetwork::new(&g);
        let tree = RootedTree::new(&g, &[0, 1]);
        let r = build_tree_routing(&tree, &net);
        assert_eq!(r.tables[1].step(r.labels[2]).unwrap(), TreeStep::Port(net.port_of(1, 1)));
        assert_eq!(r.tables[1].step(r.labels[1]).unwrap(), TreeStep::Arrived);
        assert_eq!(r.tables[2].step(r.labels[0]).unwrap(), TreeStep::Port(0));
    }

    #[test]
    fn tree_paths() {
        let g = ColoredGraph::edge_colored(5, 1, [(0, 1, 0), (0, 2, 0), (1, 3, 0), (2, 4, 0)]).unwrap();
        let tree = RootedTree::new(&g, &[0, 1, 2, 3]);
        assert_eq!(tree.path(3, 4).unwrap(), vec![(3, 1, 2), (1, 0, 0), (0, 2, 1), (2, 4, 3)]);
        assert!(tree.path(2, 2).unwrap().is_empty());
    }

    #[test]
    fn cycle_avoiding_one_edge() {
        let g = cycle4();
        let s = build_routing_scheme(&g).unwrap();
        for c in 0..4 {
            for a in 0..4 {
                for b in 0..4 {
                    if a == b {
                        continue;
                    }
                    let hops = s.route(a, b, c).unwrap();
                    assert!(hops.iter().all(|h| h.color != c));
                    assert_eq!(hops.last().unwrap().to, b);
                }
            }
        }
        let hops = s.route(0, 3, 1).unwrap();
        assert!(hops.iter().all(|h| h.color != 1));
    }

    #[test]
    fn absent_color_routes_on_tree() {
        let g = ColoredGraph::edge_colored(3, 2, [(0, 1, 0), (1, 2, 0)]).unwrap();
        let s = build_routing_scheme(&g).unwrap();
        assert!(s.color_labels[1].blocks.iter().all(Option::is_none));
        let hops = s.route(0, 2, 1).unwrap();
        assert_eq!(hops.iter().map(|h| h.to).collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn unreachable_and_vertex_mode() {
        let g = ColoredGraph::edge_colored(3, 2, [(0, 1, 0), (1, 2, 1)]).unwrap();
        let s = build_routing_scheme(&g).unwrap();
        assert_eq!(s.route(0, 2, 1), Err(Error::Unreachable { from: 0, target: 2, color: 1 }));
        let v = ColoredGraph::vertex_colored(1, vec![0, 0], [(0, 1)]).unwrap();
        assert!(matches!(build_routing_scheme(&v), Err(Error::UnsupportedMode(_))));
    }

    #[test]
    fn random_graphs_route_all_pairs() {
        use crate::hash::hash_words;
        for trial in 0..40u64 {
            let n = 4 + (trial % 9) as usize;
            let palette = 2 + (trial % 4) as usize;
            let mut edges = Vec::new();
            for v in 1..n {
                let u = (hash_words(trial, &[v as u64]) % v as u64) as usize;
                edges.push((u, v, (hash_words(trial, &[v as u64, 1]) % palette as u64) as usize));
            }
            for i in 0..n {
                let h = hash_words(trial, &[99, i as u64]);
                let (u, v) = ((h % n as u64) as usize, ((h >> 20) % n as u64) as usize);
                if u != v {
                    edges.push((u, v, ((h >> 40) % palette as u64) as usize));
                }
            }
            let g = ColoredGraph::edge_colored(n, palette, edges).unwrap();
            let s = build_routing_scheme(&g).unwrap();
            for c in 0..palette {
                for a in 0..n {
                    for b in 0..n {
                        if a == b || !g.remove_colors(&FaultSet::single(c)).unwrap().components().same(a, b) {
                            continue;
                        }
                        let hops = s.route(a, b, c).unwrap();
                        assert!(hops.iter().all(|h| h.color != c), "trial {trial}");
                        assert_eq!(hops.last().unwrap().to, b);
                    }
                }
            }
        }
    }

    #[test]
    fn table_block_counts() {
        let g = cycle4();
        let s = build_routing_scheme(&g).unwrap();
        for (v, t) in s.tables.iter().enumerate() {
            assert_eq!(t.blocks.len(), s.ruling.len());
            assert!(s.vertex_labels[v].colors.len() <= s.k);
        }
    }
}
