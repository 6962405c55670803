//! Canonical text format for colored graphs.
//!
//! ```text
//! ccg 1 edge <n> <m> <C>      ccg 1 vertex <n> <m> <C>
//! u v c    (m lines)          c        (n lines, vertex colors)
//!                             u v      (m lines)
//! ```
//!
//! `#` starts a comment; blank lines are ignored. Ids are 0-based decimal.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::{Error, Result};
use crate::graph::{ColorMode, ColoredGraph};

const MAGIC: &str = "ccg";
const VERSION: &str = "1";

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn field(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("{what} `{tok}` is not a non-negative integer")))
}

pub fn parse_graph(text: &str) -> Result<ColoredGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let mut tok = header.split_whitespace();
    if tok.next() != Some(MAGIC) {
        return Err(parse_err(hline, "header must start with `ccg`"));
    }
    if tok.next() != Some(VERSION) {
        return Err(parse_err(hline, "unsupported format version"));
    }
    let mode = match tok.next() {
        Some("edge") => ColorMode::Edge,
        Some("vertex") => ColorMode::Vertex,
        _ => return Err(parse_err(hline, "mode must be `edge` or `vertex`")),
    };
    let n = field(tok.next(), hline, "n")?;
    let m = field(tok.next(), hline, "m")?;
    let palette = field(tok.next(), hline, "C")?;
    if tok.next().is_some() {
        return Err(parse_err(hline, "trailing tokens in header"));
    }

    let mut vertex_colors = Vec::new();
    if mode == ColorMode::Vertex {
        for i in 0..n {
            let (ln, l) = lines
                .next()
                .ok_or_else(|| parse_err(hline, format!("expected {n} vertex color lines, found {i}")))?;
            let mut t = l.split_whitespace();
            let c = field(t.next(), ln, "color")?;
            if c >= palette {
                return Err(parse_err(ln, format!("color {c} out of range (C = {palette})")));
            }
            if t.next().is_some() {
                return Err(parse_err(ln, "expected a single color"));
            }
            vertex_colors.push(c);
        }
    }

    let mut edges = Vec::with_capacity(m);
    for i in 0..m {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| parse_err(hline, format!("expected {m} edge lines, found {i}")))?;
        let mut t = l.split_whitespace();
        let u = field(t.next(), ln, "u")?;
        let v = field(t.next(), ln, "v")?;
        if u >= n || v >= n {
            return Err(parse_err(ln, format!("endpoint out of range (n = {n})")));
        }
        let c = match mode {
            ColorMode::Edge => {
                let c = field(t.next(), ln, "color")?;
                if c >= palette {
                    return Err(parse_err(ln, format!("color {c} out of range (C = {palette})")));
                }
                c
            }
            ColorMode::Vertex => 0,
        };
        if t.next().is_some() {
            return Err(parse_err(ln, "trailing tokens"));
        }
        edges.push((u, v, c));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(ln, "unexpected extra line"));
    }

    match mode {
        ColorMode::Edge => ColoredGraph::edge_colored(n, palette, edges),
        ColorMode::Vertex => {
            ColoredGraph::vertex_colored(palette, vertex_colors, edges.into_iter().map(|(u, v, _)| (u, v)))
        }
    }
}

pub fn serialize_graph(g: &ColoredGraph) -> String {
    let mode = match g.mode() {
        ColorMode::Edge => "edge",
        ColorMode::Vertex => "vertex",
    };
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC} {VERSION} {mode} {} {} {}", g.n(), g.m(), g.palette());
    match g.mode() {
        ColorMode::Edge => {
            for (e, &(u, v)) in g.edges().iter().enumerate() {
                let _ = writeln!(out, "{u} {v} {}", g.edge_colors()[e]);
            }
        }
        ColorMode::Vertex => {
            for c in g.vertex_colors() {
                out.push_str(&c.to_string());
                out.push('\n');
            }
            for &(u, v) in g.edges() {
                let _ = writeln!(out, "{u} {v}");
            }
        }
    }
    out
}

#[cfg(feature = "serde")]
impl serde::Serialize for ColoredGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.serialize_str(&serialize_graph(self))
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for ColoredGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let text = <alloc::string::String as serde::Deserialize>::deserialize(d)?;
        parse_graph(&text).map_err(serde::de::Error::custom)
    }
}
