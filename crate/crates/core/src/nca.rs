//! Nearest colored ancestor queries on a rooted forest, and the centralized
//! single-fault connectivity oracle built on top of them.

use alloc::vec::Vec;

use crate::bits::{bits_for, BitReader, BitWriter, Encode};
use crate::error::{Error, Result};
use crate::graph::{Color, ColorMode, ColoredGraph, ComponentId, FaultSet, Vertex};
use crate::single_fault::present_colors;

/// One pre- or post-visit timestamp of a colored vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Stamp {
    pub time: usize,
    pub vertex: Vertex,
    pub is_post: bool,
    /// Nearest strictly-above ancestor with the same color.
    pub up: Option<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NcaStructure {
    pub parent: Vec<Option<Vertex>>,
    pub root: Vec<Vertex>,
    pub colors: Vec<Option<Color>>,
    pub payload: Vec<Vertex>,
    pub pre: Vec<usize>,
    pub post: Vec<usize>,
    /// Per color, the timestamps of its vertices in increasing order.
    pub arrays: Vec<Vec<Stamp>>,
}

fn not_a_forest() -> Error {
    Error::InvalidWitness("parent array is not a forest".into())
}

/// Builds the structure; children are visited in increasing id order.
pub fn build_nca(
    parent: &[Option<Vertex>],
    colors: &[Option<Color>],
    palette: usize,
    payload: &[Vertex],
) -> Result<NcaStructure> {
    let n = parent.len();
    if colors.len() != n || payload.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: if colors.len() != n { colors.len() } else { payload.len() },
        });
    }
    let mut children = alloc::vec![Vec::new(); n];
    for (v, p) in parent.iter().enumerate() {
        if let Some(p) = *p {
            if p >= n || p == v {
                return Err(not_a_forest());
            }
            children[p].push(v);
        }
    }
    for c in colors.iter().flatten() {
        if *c >= palette {
            return Err(Error::InvalidFaultSet { color: *c, palette });
        }
    }

    let mut pre = alloc::vec![usize::MAX; n];
    let mut post = alloc::vec![usize::MAX; n];
    let mut root = alloc::vec![usize::MAX; n];
    let mut up = alloc::vec![None; n];
    let mut arrays: Vec<Vec<Stamp>> = alloc::vec![Vec::new(); palette];
    let mut open: Vec<Vec<Vertex>> = alloc::vec![Vec::new(); palette];
    let mut clock = 0;
    for r in (0..n).filter(|&v| parent[v].is_none()) {
        // (vertex, index of next child to visit)
        let mut stack = alloc::vec![(r, 0usize)];
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next == 0 {
                pre[v] = clock;
                root[v] = r;
                if let Some(c) = colors[v] {
                    up[v] = open[c].last().copied();
                    open[c].push(v);
                    arrays[c].push(Stamp { time: clock, vertex: v, is_post: false, up: up[v] });
                }
                clock += 1;
            }
            if let Some(&child) = children[v].get(*next) {
                *next += 1;
                stack.push((child, 0));
            } else {
                post[v] = clock;
                if let Some(c) = colors[v] {
                    open[c].pop();
                    arrays[c].push(Stamp { time: clock, vertex: v, is_post: true, up: up[v] });
                }
                clock += 1;
                stack.pop();
            }
        }
    }
    if clock != 2 * n {
        return Err(not_a_forest());
    }
    Ok(NcaStructure {
        parent: parent.to_vec(),
        root,
        colors: colors.to_vec(),
        payload: payload.to_vec(),
        pre,
        post,
        arrays,
    })
}

impl NcaStructure {
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Nearest `c`-colored ancestor of `v`, `v` included.
    pub fn query(&self, v: Vertex, c: Color) -> Option<Vertex> {
        let arr = self.arrays.get(c)?;
        let t = self.pre[v];
        let i = arr.partition_point(|s| s.time <= t);
        let s = arr.get(i.checked_sub(1)?)?;
        if s.is_post {
            s.up
        } else {
            Some(s.vertex)
        }
    }
}

/// Free-function form of [`NcaStructure::query`].
pub fn nca_query(s: &NcaStructure, v: Vertex, c: Color) -> Option<Vertex> {
    s.query(v, c)
}

/// Centralized oracle answering `cid(v, G − c)` in `O(log n)` time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneFaultOracle {
    pub mode: ColorMode,
    pub palette: usize,
    /// Own colors, kept in vertex mode to detect deleted endpoints.
    pub vertex_colors: Option<Vec<Color>>,
    pub nca: NcaStructure,
}

const ORACLE_VERSION: u64 = 1;

impl OneFaultOracle {
    pub fn build(g: &ColoredGraph) -> Self {
        let n = g.n();
        let forest: Vec<_> = g.view().spanning_forest();
        let mut adj = alloc::vec![Vec::new(); n];
        for &e in &forest {
            let (u, v) = g.edge(e);
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        let mut parent = alloc::vec![None; n];
        let mut tag = alloc::vec![None; n];
        let mut seen = alloc::vec![false; n];
        for r in 0..n {
            if seen[r] {
                continue;
            }
            seen[r] = true;
            let mut stack = alloc::vec![r];
            while let Some(x) = stack.pop() {
                for &(y, e) in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        parent[y] = Some(x);
                        tag[y] = match g.mode() {
                            ColorMode::Edge => g.edge_color(e),
                            ColorMode::Vertex => g.vertex_color(x),
                        };
                        stack.push(y);
                    }
                }
            }
        }

        let mut payload: Vec<Vertex> = (0..n).collect();
        let mut by_color = alloc::vec![Vec::new(); g.palette()];
        for (v, t) in tag.iter().enumerate() {
            if let Some(c) = *t {
                by_color[c].push(v);
            }
        }
        let present = present_colors(g);
        for (c, members) in by_color.iter().enumerate() {
            if members.is_empty() || !present[c] {
                continue;
            }
            let comps = g.without_colors(&FaultSet::single(c)).view().components();
            for &v in members {
                // In vertex mode a tagged vertex may itself carry the tag.
                payload[v] = comps.cid[v].unwrap_or(v);
            }
        }
        let vertex_colors = match g.mode() {
            ColorMode::Edge => None,
            ColorMode::Vertex => Some(g.vertex_colors().to_vec()),
        };
        let nca = build_nca(&parent, &tag, g.palette(), &payload).expect("spanning forest");
        OneFaultOracle {
            mode: g.mode(),
            palette: g.palette(),
            vertex_colors,
            nca,
        }
    }

    pub fn n(&self) -> usize {
        self.nca.len()
    }

    pub fn cid(&self, v: Vertex, c: Color) -> Result<ComponentId> {
        if v >= self.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n() });
        }
        if c >= self.palette {
            return Err(Error::InvalidFaultSet { color: c, palette: self.palette });
        }
        if let Some(vc) = &self.vertex_colors {
            if vc[v] == c {
                return Err(Error::RemovedVertex(v));
            }
        }
        Ok(ComponentId(match self.nca.query(v, c) {
            Some(w) => self.nca.payload[w],
            None => self.nca.root[v],
        }))
    }

    pub fn connected(&self, u: Vertex, v: Vertex, c: Color) -> Result<bool> {
        Ok(self.cid(u, c)? == self.cid(v, c)?)
    }

    /// Canonical file encoding: versioned header; per vertex its parent
    /// (itself for roots) and own color (vertex mode) or tag (edge mode);
    /// then per non-root its payload, which lies in `[root, v]`: `0` = root,
    /// `10` = itself, `11` + offset inside the open range.
    pub fn encode(&self) -> BitWriter {
        let n = self.n();
        let (w_id, w_c) = (bits_for(n), bits_for(self.palette));
        let mut out = BitWriter::new();
        out.write(ORACLE_VERSION, 4);
        out.write_bool(self.mode == ColorMode::Vertex);
        out.write_gamma(n as u64);
        out.write_gamma(self.palette as u64);
        let s = &self.nca;
        for v in 0..n {
            out.write(s.parent[v].unwrap_or(v) as u64, w_id);
            match &self.vertex_colors {
                Some(vc) => out.write(vc[v] as u64, w_c),
                None if s.parent[v].is_some() => out.write(s.colors[v].unwrap_or(0) as u64, w_c),
                None => {}
            }
        }
        for v in (0..n).filter(|&v| s.parent[v].is_some()) {
            let (p, root) = (s.payload[v], s.root[v]);
            if p == root {
                out.write_bool(false);
            } else if p == v {
                out.write(0b10, 2);
            } else {
                out.write(0b11, 2);
                out.write((p - root - 1) as u64, range_width(v - root - 1));
            }
        }
        out
    }

    pub fn size_bits(&self) -> usize {
        self.encode().len()
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let mut r = BitReader::new(bytes);
        if r.read(4)? != ORACLE_VERSION {
            return Err(Error::Decode("unsupported oracle version"));
        }
        let mode = if r.read_bool()? { ColorMode::Vertex } else { ColorMode::Edge };
        let n = r.read_gamma()? as usize;
        let palette = r.read_gamma()? as usize;
        if n > 1 << 28 || palette > 1 << 28 {
            return Err(Error::Decode("header sizes out of range"));
        }
        let (w_id, w_c) = (bits_for(n), bits_for(palette));
        let mut parent = alloc::vec![None; n];
        let mut color = alloc::vec![0; n];
        for v in 0..n {
            let p = r.read_usize(w_id)?;
            if p >= n {
                return Err(Error::Decode("parent out of range"));
            }
            if p != v {
                parent[v] = Some(p);
            }
            if mode == ColorMode::Vertex || p != v {
                color[v] = r.read_usize(w_c)?;
                if color[v] >= palette {
                    return Err(Error::Decode("color out of range"));
                }
            }
        }
        let tag: Vec<Option<Color>> = match mode {
            ColorMode::Edge => (0..n).map(|v| parent[v].map(|_| color[v])).collect(),
            ColorMode::Vertex => parent.iter().map(|p| p.map(|p| color[p])).collect(),
        };
        let mut nca = build_nca(&parent, &tag, palette, &(0..n).collect::<Vec<_>>())
            .map_err(|_| Error::Decode("parent array is not a forest"))?;
        for v in (0..n).filter(|&v| parent[v].is_some()) {
            let root = nca.root[v];
            nca.payload[v] = if !r.read_bool()? {
                root
            } else if !r.read_bool()? {
                v
            } else {
                let w = range_width(v - root - 1);
                let p = root + 1 + r.read_usize(w)?;
                if p >= v {
                    return Err(Error::Decode("payload out of range"));
                }
                p
            };
        }
        Ok(OneFaultOracle {
            mode,
            palette,
            vertex_colors: (mode == ColorMode::Vertex).then_some(color),
            nca,
        })
    }
}

/// Bits for an index into `count` values; zero when there is one choice.
fn range_width(count: usize) -> u32 {
    if count <= 1 {
        0
    } else {
        bits_for(count)
    }
}

/// Connectivity of `u` and `v` once color `c` fails.
pub fn oracle_query(o: &OneFaultOracle, u: Vertex, v: Vertex, c: Color) -> Result<bool> {
    o.connected(u, v, c)
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NcaVertexLabel {
    pub pre: usize,
    /// Nearest ancestor of every highly prevalent color, by high index.
    pub high: Vec<Option<Vertex>>,
}

/// A colored vertex as seen by a low-prevalence color label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NcaEntry {
    pub vertex: Vertex,
    pub pre: usize,
    pub post: usize,
    /// Position of the nearest same-colored strict ancestor in the list.
    pub up: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum NcaColorLabel {
    High { index: usize },
    Low { entries: Vec<NcaEntry> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NcaWidths {
    pub id: u32,
    pub time: u32,
    pub opt_id: u32,
    pub high: u32,
    /// Width of list positions and counts in low color labels.
    pub slot: u32,
}

impl Encode for NcaVertexLabel {
    type Widths = NcaWidths;

    fn encode(&self, out: &mut BitWriter, w: &NcaWidths) {
        out.write(self.pre as u64, w.time);
        for a in &self.high {
            out.write_opt(*a, (1usize << w.opt_id) - 1, w.opt_id);
        }
    }
}

impl Encode for NcaColorLabel {
    type Widths = NcaWidths;

    fn encode(&self, out: &mut BitWriter, w: &NcaWidths) {
        match self {
            NcaColorLabel::High { index } => {
                out.write_bool(true);
                out.write(*index as u64, w.high);
            }
            NcaColorLabel::Low { entries } => {
                out.write_bool(false);
                out.write(entries.len() as u64, w.slot);
                for e in entries {
                    out.write(e.vertex as u64, w.id);
                    out.write(e.pre as u64, w.time);
                    out.write(e.post as u64, w.time);
                    out.write_opt(e.up, entries.len(), w.slot);
                }
            }
        }
    }
}

/// Nearest colored ancestor from a vertex label and a color label alone.
pub fn query_nca_labels(lv: &NcaVertexLabel, lc: &NcaColorLabel) -> Option<Vertex> {
    match lc {
        NcaColorLabel::High { index } => lv.high[*index],
        NcaColorLabel::Low { entries } => {
            let i = entries.partition_point(|e| e.pre <= lv.pre);
            let open = i.checked_sub(1).map(|i| (entries[i].pre, i));
            let closed = entries
                .iter()
                .enumerate()
                .filter(|(_, e)| e.post <= lv.pre)
                .map(|(i, e)| (e.post, i))
                .max();
            match (open, closed) {
                (Some((a, i)), Some((b, _))) if a > b => Some(entries[i].vertex),
                (Some((_, i)), None) => Some(entries[i].vertex),
                (_, Some((_, j))) => entries[j].up.map(|k| entries[k].vertex),
                (None, None) => None,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NcaLabels {
    /// Colors with at least this many vertices are highly prevalent.
    pub threshold: usize,
    pub high: Vec<Color>,
    pub widths: NcaWidths,
    pub vertices: Vec<NcaVertexLabel>,
    pub colors: Vec<NcaColorLabel>,
}

fn nca_widths(n: usize, high: usize, threshold: usize) -> NcaWidths {
    NcaWidths {
        id: bits_for(n),
        time: bits_for(2 * n),
        opt_id: bits_for(n + 1),
        high: bits_for(high),
        slot: bits_for(threshold),
    }
}

/// Largest label produced at a given threshold, computed from class sizes.
fn max_bits_at(n: usize, sizes: &[usize], threshold: usize) -> usize {
    let high = sizes.iter().filter(|&&s| s >= threshold).count();
    let w = nca_widths(n, high, threshold);
    let vertex = w.time as usize + high * w.opt_id as usize;
    let color = sizes
        .iter()
        .map(|&s| {
            if s >= threshold {
                1 + w.high as usize
            } else {
                1 + w.slot as usize + s * (w.id + 2 * w.time + w.slot) as usize
            }
        })
        .max()
        .unwrap_or(0);
    vertex.max(color)
}

/// Labels split at the threshold that minimizes the largest label.
pub fn label_nca(
    parent: &[Option<Vertex>],
    colors: &[Option<Color>],
    palette: usize,
) -> Result<NcaLabels> {
    let n = parent.len();
    let mut sizes = alloc::vec![0usize; palette];
    for c in colors.iter().flatten() {
        if let Some(s) = sizes.get_mut(*c) {
            *s += 1;
        }
    }
    let threshold = (1..=n + 1)
        .min_by_key(|&t| (max_bits_at(n, &sizes, t), t))
        .unwrap_or(1);
    label_nca_with_threshold(parent, colors, palette, threshold)
}

pub fn label_nca_with_threshold(
    parent: &[Option<Vertex>],
    colors: &[Option<Color>],
    palette: usize,
    threshold: usize,
) -> Result<NcaLabels> {
    let n = parent.len();
    let s = build_nca(parent, colors, palette, &(0..n).collect::<Vec<_>>())?;
    let high: Vec<Color> = (0..palette)
        .filter(|&c| s.arrays[c].len() / 2 >= threshold)
        .collect();
    let widths = nca_widths(n, high.len(), threshold.max(1));
    let vertices = (0..n)
        .map(|v| NcaVertexLabel {
            pre: s.pre[v],
            high: high.iter().map(|&h| s.query(v, h)).collect(),
        })
        .collect();
    let mut hi = 0;
    let colors = (0..palette)
        .map(|c| {
            if high.get(hi) == Some(&c) {
                hi += 1;
                return NcaColorLabel::High { index: hi - 1 };
            }
            let mut members: Vec<Vertex> = s.arrays[c]
                .iter()
                .filter(|st| !st.is_post)
                .map(|st| st.vertex)
                .collect();
            members.sort_unstable_by_key(|&v| s.pre[v]);
            let pos = |v: Vertex| members.iter().position(|&x| x == v);
            let entries = members
                .iter()
                .map(|&v| NcaEntry {
                    vertex: v,
                    pre: s.pre[v],
                    post: s.post[v],
                    up: s.arrays[c]
                        .iter()
                        .find(|st| st.vertex == v)
                        .and_then(|st| st.up)
                        .and_then(pos),
                })
                .collect();
            NcaColorLabel::Low { entries }
        })
        .collect();
    Ok(NcaLabels {
        threshold,
        high,
        widths,
        vertices,
        colors,
    })
}

impl NcaLabels {
    pub fn query(&self, v: Vertex, c: Color) -> Option<Vertex> {
        query_nca_labels(self.vertices.get(v)?, self.colors.get(c)?)
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

    const RED: Color = 0;
    const BLUE: Color = 1;

    fn chain() -> NcaStructure {
        let parent = [None, Some(0), Some(1), Some(2)];
        let colors = [Some(RED), Some(BLUE), Some(RED), Some(BLUE)];
        build_nca(&parent, &colors, 3, &[0, 1, 2, 3]).unwrap()
    }

    #[test]
    fn chain_examples() {
        let s = chain();
        assert_eq!(s.arrays[RED].len(), 4);
        assert_eq!(s.arrays[BLUE].len(), 4);
        assert_eq!(s.pre[0], 0);
        assert_eq!(s.query(3, RED), Some(2));
        assert_eq!(s.query(2, RED), Some(2));
        assert_eq!(s.query(1, 2), None);
        assert_eq!(s.query(1, 7), None);
        assert_eq!(s.query(0, BLUE), None);
    }

    #[test]
    fn post_hit_climbs() {
        // 0 red with children 1 (red) and 2; query from 2 sees post(1).
        let parent = [None, Some(0), Some(0)];
        let colors = [Some(RED), Some(RED), None];
        let s = build_nca(&parent, &colors, 1, &[0, 1, 2]).unwrap();
        assert_eq!(s.query(2, RED), Some(0));
    }

    #[test]
    fn rejects_cycles() {
        assert!(build_nca(&[Some(1), Some(0)], &[None, None], 1, &[0, 1]).is_err());
    }

    #[test]
    fn oracle_on_path_aba() {
        let g = ColoredGraph::edge_colored(4, 2, [(0, 1, 0), (1, 2, 1), (2, 3, 0)]).unwrap();
        let o = OneFaultOracle::build(&g);
        assert!(!o.connected(0, 3, 1).unwrap());
        assert!(o.connected(2, 3, 1).unwrap());
        assert!(o.connected(1, 1, 0).unwrap());
        let bytes = o.encode().into_bytes();
        assert_eq!(OneFaultOracle::decode(&bytes).unwrap(), o);
    }

    #[test]
    fn oracle_vertex_mode() {
        let g = ColoredGraph::vertex_colored(3, vec![0, 1, 2, 0], [(0, 1), (1, 2), (2, 3), (0, 3)])
            .unwrap();
        let o = OneFaultOracle::build(&g);
        assert!(o.connected(1, 2, 0).unwrap());
        assert!(o.connected(0, 2, 1).unwrap());
        assert_eq!(o.cid(3, 0).unwrap_err(), Error::RemovedVertex(3));
        let bytes = o.encode().into_bytes();
        assert_eq!(OneFaultOracle::decode(&bytes).unwrap(), o);
    }

    #[test]
    fn star_makes_leaf_color_prevalent() {
        let parent: Vec<_> = (0..10).map(|v| (v > 0).then_some(0)).collect();
        let colors: Vec<_> = (0..10).map(|v| (v > 0).then_some(0)).collect();
        let l = label_nca_with_threshold(&parent, &colors, 1, 4).unwrap();
        assert_eq!(l.colors[0], NcaColorLabel::High { index: 0 });
        assert_eq!(l.vertices[5].high, vec![Some(5)]);
    }

    #[test]
    fn distinct_colors_have_two_stamps() {
        let parent = [None, Some(0), Some(1)];
        let colors = [Some(0), Some(1), Some(2)];
        let l = label_nca_with_threshold(&parent, &colors, 3, 2).unwrap();
        for c in &l.colors {
            assert!(matches!(c, NcaColorLabel::Low { entries } if entries.len() == 1));
        }
        assert_eq!(l.query(2, 0), Some(0));
        assert_eq!(l.query(0, 2), None);
    }

    #[test]
    fn decode_rejects_garbage() {
        assert!(OneFaultOracle::decode(&[]).is_err());
        assert!(OneFaultOracle::decode(&[0xff, 0xff]).is_err());
    }
}
