//! Scheme-versus-oracle sweeps shared by the CLI and the acceptance suite.

use rand::seq::index::sample;
use rand::Rng;

use cfl_core::multi_fault::{build_certificate, LargeFLabels, RecursiveLabels};
use cfl_core::nca::OneFaultOracle;
use cfl_core::single_fault::SingleFaultLabels;
use cfl_core::two_fault::TwoFaultLabels;
use cfl_core::{Color, ColoredGraph, FaultSet, Vertex};

use crate::error::CflResult;
use crate::oracle::brute_force_cids;

/// Agreement count of a sweep, with the first few disagreements.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct Agreement {
    pub total: usize,
    pub agree: usize,
    pub mismatches: Vec<String>,
}

impl Agreement {
    pub fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.agree += 1;
        } else if self.mismatches.len() < 5 {
            self.mismatches.push(what());
        }
    }

    pub fn merge(&mut self, other: Agreement) {
        self.total += other.total;
        self.agree += other.agree;
        for m in other.mismatches {
            if self.mismatches.len() < 5 {
                self.mismatches.push(m);
            }
        }
    }

    pub fn rate(&self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            self.agree as f64 / self.total as f64
        }
    }

    pub fn exact(&self) -> bool {
        self.agree == self.total
    }
}

/// Brute-force answer from precomputed component ids; `None` when an
/// endpoint is removed.
pub fn expected(cids: &[Option<Vertex>], u: Vertex, v: Vertex) -> Option<bool> {
    Some(cids[u]? == cids[v]?)
}

/// A scheme answer agrees when it matches, or errs exactly where an
/// endpoint is removed.
pub fn agrees<E>(want: Option<bool>, got: Result<bool, E>) -> bool {
    match (want, got) {
        (Some(a), Ok(b)) => a == b,
        (None, Err(_)) => true,
        _ => false,
    }
}

fn sweep_one_fault<F>(g: &ColoredGraph, mut connected: F) -> CflResult<Agreement>
where
    F: FnMut(Vertex, Vertex, Color) -> cfl_core::Result<bool>,
{
    let mut out = Agreement::default();
    for c in 0..g.palette() {
        let cids = brute_force_cids(g, &[c])?;
        for u in 0..g.n() {
            for v in 0..g.n() {
                let want = expected(&cids, u, v);
                out.record(agrees(want, connected(u, v, c)), || format!("({u},{v},{{{c}}})"));
            }
        }
    }
    Ok(out)
}

/// Every `(u, v, c)` query.
pub fn sweep_single(g: &ColoredGraph, l: &SingleFaultLabels) -> CflResult<Agreement> {
    sweep_one_fault(g, |u, v, c| l.connected(u, v, c))
}

pub fn sweep_oracle(g: &ColoredGraph, o: &OneFaultOracle) -> CflResult<Agreement> {
    sweep_one_fault(g, |u, v, c| o.connected(u, v, c))
}

/// Every `(u, v, {c, d})` query, `c ≤ d`.
pub fn sweep_two(g: &ColoredGraph, l: &TwoFaultLabels) -> CflResult<Agreement> {
    let mut out = Agreement::default();
    for c in 0..g.palette() {
        for d in c..g.palette() {
            let cids = brute_force_cids(g, &[c, d])?;
            for u in 0..g.n() {
                for v in 0..g.n() {
                    let want = expected(&cids, u, v);
                    out.record(agrees(want, l.connected(u, v, c, d)), || format!("({u},{v},{{{c},{d}}})"));
                }
            }
        }
    }
    Ok(out)
}

/// All fault sets of size at most `f`, in size-then-colex order.
pub fn fault_sets(palette: usize, f: usize) -> Vec<Vec<Color>> {
    (0..=f.min(palette))
        .flat_map(|s| {
            (0..cfl_core::reductions::binomial(palette, s)).map(move |r| cfl_core::reductions::colex_unrank(r, s))
        })
        .collect()
}

/// Certificate versus graph on every pair and every fault set `|F| ≤ f`.
pub fn sweep_certificate(g: &ColoredGraph, f: usize) -> CflResult<Agreement> {
    let h = build_certificate(g).graph(g);
    let mut out = Agreement::default();
    for fs in fault_sets(g.palette(), f) {
        let a = brute_force_cids(g, &fs)?;
        let b = brute_force_cids(&h, &fs)?;
        for u in 0..g.n() {
            for v in 0..g.n() {
                out.record(expected(&a, u, v) == expected(&b, u, v), || format!("({u},{v},{fs:?})"));
            }
        }
    }
    Ok(out)
}

/// `count` queries with uniform endpoints and `1..=f` distinct colors.
pub fn sample_queries<R: Rng>(g: &ColoredGraph, f: usize, count: usize, rng: &mut R) -> Vec<(Vertex, Vertex, Vec<Color>)> {
    (0..count)
        .map(|_| {
            let size = rng.gen_range(1..=f.min(g.palette()).max(1));
            let mut fs = sample(rng, g.palette(), size.min(g.palette())).into_vec();
            fs.sort_unstable();
            (rng.gen_range(0..g.n()), rng.gen_range(0..g.n()), fs)
        })
        .collect()
}

pub fn sweep_sampled<F>(g: &ColoredGraph, queries: &[(Vertex, Vertex, Vec<Color>)], mut connected: F) -> CflResult<Agreement>
where
    F: FnMut(Vertex, Vertex, &FaultSet) -> cfl_core::Result<bool>,
{
    let mut out = Agreement::default();
    for (u, v, fs) in queries {
        let cids = brute_force_cids(g, fs)?;
        let got = connected(*u, *v, &FaultSet::from_colors(fs.iter().copied()));
        out.record(agrees(expected(&cids, *u, *v), got), || format!("({u},{v},{fs:?})"));
    }
    Ok(out)
}

pub fn sweep_recursive(g: &ColoredGraph, l: &RecursiveLabels, queries: &[(Vertex, Vertex, Vec<Color>)]) -> CflResult<Agreement> {
    sweep_sampled(g, queries, |u, v, fs| l.connected(u, v, fs))
}

pub fn sweep_large(g: &ColoredGraph, l: &LargeFLabels, queries: &[(Vertex, Vertex, Vec<Color>)]) -> CflResult<Agreement> {
    sweep_sampled(g, queries, |u, v, fs| l.connected(u, v, fs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use cfl_core::multi_fault::label_recursive;
    use cfl_core::single_fault::label_single_fault;
    use cfl_core::sketch::SketchParams;
    use cfl_core::two_fault::label_two_fault;

    fn square() -> ColoredGraph {
        ColoredGraph::edge_colored(4, 3, [(0, 1, 0), (1, 2, 1), (2, 3, 2), (3, 0, 0), (0, 2, 1)]).unwrap()
    }

    #[test]
    fn sweeps_on_small_graph() {
        let g = square();
        assert!(sweep_single(&g, &label_single_fault(&g)).unwrap().exact());
        assert!(sweep_two(&g, &label_two_fault(&g)).unwrap().exact());
        assert!(sweep_oracle(&g, &OneFaultOracle::build(&g)).unwrap().exact());
        assert!(sweep_certificate(&g, 2).unwrap().exact());
        let mut r = crate::generate::rng(1);
        let q = sample_queries(&g, 2, 50, &mut r);
        let l = label_recursive(&g, 2, SketchParams::new(3));
        assert!(sweep_recursive(&g, &l, &q).unwrap().exact());
    }

    #[test]
    fn fault_set_listing() {
        assert_eq!(fault_sets(3, 2).len(), 7);
        assert_eq!(fault_sets(1, 3), vec![vec![], vec![0]]);
    }

    #[test]
    fn removed_endpoints_count_as_agreement() {
        assert!(agrees::<()>(None, Err(())));
        assert!(!agrees::<()>(None, Ok(true)));
        assert!(!agrees::<()>(Some(true), Err(())));
    }
}
