use proptest::prelude::*;

use cfl_core::bits::{BitReader, BitWriter};
use cfl_core::multi_fault::label_recursive;
use cfl_core::nca::OneFaultOracle;
use cfl_core::routing::build_routing_scheme;
use cfl_core::single_fault::label_single_fault;
use cfl_core::sketch::{build_edge_fault_labels, SketchParams};
use cfl_core::two_fault::label_two_fault;
use cfl_core::{ColorMode, ColoredGraph, FaultSet};

fn graph(mode: ColorMode) -> impl Strategy<Value = ColoredGraph> {
    (1usize..12, 1usize..5).prop_flat_map(move |(n, palette)| {
        let edges = prop::collection::vec((0..n, 0..n, 0..palette), 0..3 * n);
        let colors = prop::collection::vec(0..palette, n);
        (edges, colors).prop_map(move |(edges, colors)| match mode {
            ColorMode::Edge => ColoredGraph::edge_colored(n, palette, edges).unwrap(),
            ColorMode::Vertex => {
                ColoredGraph::vertex_colored(palette, colors, edges.into_iter().map(|(u, v, _)| (u, v))).unwrap()
            }
        })
    })
}

fn any_graph() -> impl Strategy<Value = ColoredGraph> {
    prop_oneof![graph(ColorMode::Edge), graph(ColorMode::Vertex)]
}

/// Connected graph: a path through all vertices plus chords.
fn connected_graph() -> impl Strategy<Value = ColoredGraph> {
    (2usize..10, 2usize..5).prop_flat_map(|(n, palette)| {
        let path = prop::collection::vec(0..palette, n - 1);
        let chords = prop::collection::vec((0..n, 0..n, 0..palette), 0..2 * n);
        (path, chords).prop_map(move |(path, chords)| {
            let edges = path.into_iter().enumerate().map(|(i, c)| (i, i + 1, c)).chain(chords);
            ColoredGraph::edge_colored(n, palette, edges).unwrap()
        })
    })
}

fn truth(g: &ColoredGraph, u: usize, v: usize, faults: &FaultSet) -> Option<bool> {
    Some(g.cid(u, faults).ok()? == g.cid(v, faults).ok()?)
}

proptest! {
    #[test]
    fn gamma_codes_roundtrip(values in prop::collection::vec(0u64..1 << 40, 0..20)) {
        let mut w = BitWriter::new();
        for &v in &values {
            w.write_gamma(v);
        }
        let bytes = w.into_bytes();
        let mut r = BitReader::new(&bytes);
        for &v in &values {
            prop_assert_eq!(r.read_gamma().unwrap(), v);
        }
    }

    #[test]
    fn single_fault_is_exact(g in any_graph()) {
        let l = label_single_fault(&g);
        for c in 0..g.palette() {
            let fs = FaultSet::single(c);
            for u in 0..g.n() {
                for v in 0..g.n() {
                    prop_assert_eq!(l.connected(u, v, c).ok(), truth(&g, u, v, &fs));
                }
            }
        }
    }

    #[test]
    fn oracle_survives_encoding(g in any_graph()) {
        let o = OneFaultOracle::build(&g);
        let back = OneFaultOracle::decode(&o.encode().into_bytes()).unwrap();
        prop_assert_eq!(&back, &o);
        for c in 0..g.palette() {
            let fs = FaultSet::single(c);
            for u in 0..g.n() {
                prop_assert_eq!(back.connected(u, 0, c).ok(), truth(&g, u, 0, &fs));
            }
        }
    }

    #[test]
    fn two_faults_are_exact(g in any_graph()) {
        let l = label_two_fault(&g);
        for c in 0..g.palette() {
            for d in 0..g.palette() {
                let fs = FaultSet::from_colors([c, d]);
                for u in 0..g.n() {
                    for v in 0..g.n() {
                        prop_assert_eq!(l.connected(u, v, c, d).ok(), truth(&g, u, v, &fs));
                    }
                }
            }
        }
    }

    #[test]
    fn recursive_labels_agree(g in any_graph(), seed in any::<u64>()) {
        let l = label_recursive(&g, 2, SketchParams::new(seed));
        for c in 0..g.palette() {
            for d in c + 1..g.palette() {
                let fs = FaultSet::from_colors([c, d]);
                for u in 0..g.n() {
                    prop_assert_eq!(l.connected(u, 0, &fs).ok(), truth(&g, u, 0, &fs));
                }
            }
        }
    }

    #[test]
    fn sketch_connected_answers_are_true(g in graph(ColorMode::Edge), seed in any::<u64>(), mask in any::<u64>()) {
        let s = build_edge_fault_labels(&g, SketchParams::new(seed));
        let faulty_ids: Vec<usize> = (0..g.m()).filter(|e| mask >> (e % 64) & 1 == 1).collect();
        let faulty: Vec<_> = faulty_ids.iter().map(|&e| &s.edges[e]).collect();
        let kept: Vec<usize> = (0..g.m()).filter(|e| !faulty_ids.contains(e)).collect();
        let h = g.restrict_to_edges(&kept);
        for u in 0..g.n() {
            if s.query(&s.vertices[u], &s.vertices[0], &faulty).unwrap() {
                prop_assert!(h.view().components().same(u, 0));
            }
        }
    }

    #[test]
    fn routes_avoid_the_failed_color(g in connected_graph()) {
        let s = build_routing_scheme(&g).unwrap();
        for c in 0..g.palette() {
            let fs = FaultSet::single(c);
            for a in 0..g.n() {
                for b in 0..g.n() {
                    if a == b || truth(&g, a, b, &fs) != Some(true) {
                        continue;
                    }
                    let hops = s.route(a, b, c).unwrap();
                    prop_assert!(hops.iter().all(|h| h.color != c));
                    prop_assert_eq!(hops.last().unwrap().to, b);
                }
            }
        }
    }
}
