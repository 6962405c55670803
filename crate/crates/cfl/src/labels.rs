//! Label sets of every scheme behind one file format (JSON).

use serde::{Deserialize, Serialize};

use cfl_core::multi_fault::{label_large_f, label_recursive, LargeFLabels, RecursiveLabels};
use cfl_core::nca::OneFaultOracle;
use cfl_core::single_fault::{label_single_fault, SingleFaultLabels};
use cfl_core::sketch::SketchParams;
use cfl_core::two_fault::{label_two_fault, TwoFaultLabels};
use cfl_core::{Color, ColoredGraph, FaultSet, Vertex};

use crate::error::{CflError, CflResult};
use crate::measure::SizeReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Single,
    TwoDiam,
    Multi,
    Large,
    Nca,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "scheme", content = "labels", rename_all = "kebab-case")]
pub enum LabelFile {
    Single(SingleFaultLabels),
    TwoDiam(TwoFaultLabels),
    Multi(RecursiveLabels),
    Large(LargeFLabels),
    /// The encoded oracle bytes.
    Nca(Vec<u8>),
}

impl LabelFile {
    pub fn build(scheme: Scheme, g: &ColoredGraph, f: usize, seed: u64) -> CflResult<Self> {
        Ok(match scheme {
            Scheme::Single => LabelFile::Single(label_single_fault(g)),
            Scheme::TwoDiam => LabelFile::TwoDiam(label_two_fault(g)),
            Scheme::Multi => LabelFile::Multi(label_recursive(g, f, SketchParams::new(seed))),
            Scheme::Large => LabelFile::Large(label_large_f(g, SketchParams::new(seed))),
            Scheme::Nca => LabelFile::Nca(OneFaultOracle::build(g).encode().into_bytes()),
        })
    }

    pub fn scheme(&self) -> Scheme {
        match self {
            LabelFile::Single(_) => Scheme::Single,
            LabelFile::TwoDiam(_) => Scheme::TwoDiam,
            LabelFile::Multi(_) => Scheme::Multi,
            LabelFile::Large(_) => Scheme::Large,
            LabelFile::Nca(_) => Scheme::Nca,
        }
    }

    /// Answers a query from the stored labels; the fault count must suit
    /// the scheme.
    pub fn connected(&self, u: Vertex, v: Vertex, faults: &[Color]) -> CflResult<bool> {
        let one = || match faults {
            [c] => Ok(*c),
            _ => Err(CflError::Input(format!("this scheme takes exactly one fault, got {}", faults.len()))),
        };
        Ok(match self {
            LabelFile::Single(l) => l.connected(u, v, one()?)?,
            LabelFile::Nca(bytes) => OneFaultOracle::decode(bytes)?.connected(u, v, one()?)?,
            LabelFile::TwoDiam(l) => match faults {
                [c] => l.connected(u, v, *c, *c)?,
                [c, d] => l.connected(u, v, *c, *d)?,
                _ => return Err(CflError::Input("this scheme takes one or two faults".into())),
            },
            LabelFile::Multi(l) => l.connected(u, v, &FaultSet::from_colors(faults.iter().copied()))?,
            LabelFile::Large(l) => l.connected(u, v, &FaultSet::from_colors(faults.iter().copied()))?,
        })
    }

    pub fn size_reports(&self) -> CflResult<Vec<SizeReport>> {
        Ok(match self {
            LabelFile::Single(l) => vec![
                SizeReport::from_sizes("vertex", &l.vertex_bits()),
                SizeReport::from_sizes("color", &l.color_bits()),
            ],
            LabelFile::TwoDiam(l) => vec![
                SizeReport::from_sizes("vertex", &l.vertex_bits()),
                SizeReport::from_sizes("color", &l.color_bits()),
            ],
            LabelFile::Multi(l) => vec![
                SizeReport::from_sizes("vertex", &(0..l.n()).map(|v| l.vertex_bits(v)).collect::<Vec<_>>()),
                SizeReport::from_sizes("color", &(0..l.palette).map(|c| l.color_bits(c)).collect::<Vec<_>>()),
            ],
            LabelFile::Large(l) => vec![
                SizeReport::from_sizes("vertex", &vec![l.vertex_bits(); l.sparse.n()]),
                SizeReport::from_sizes("color", &(0..l.sparse.palette()).map(|c| l.color_bits(c)).collect::<Vec<_>>()),
            ],
            LabelFile::Nca(bytes) => {
                let oracle = OneFaultOracle::decode(bytes)?;
                vec![SizeReport::from_sizes("oracle", &[oracle.size_bits()])]
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_answers_alike() {
        let g = ColoredGraph::edge_colored(4, 3, [(0, 1, 0), (1, 2, 1), (2, 3, 2), (3, 0, 0)]).unwrap();
        for scheme in [Scheme::Single, Scheme::TwoDiam, Scheme::Multi, Scheme::Large, Scheme::Nca] {
            let file = LabelFile::build(scheme, &g, 2, 7).unwrap();
            let text = serde_json::to_string(&file).unwrap();
            let back: LabelFile = serde_json::from_str(&text).unwrap();
            assert_eq!(back.scheme(), scheme);
            let faults: &[usize] = match scheme {
                Scheme::Single | Scheme::Nca => &[1],
                _ => &[0, 1],
            };
            assert_eq!(back.connected(0, 2, faults).unwrap(), file.connected(0, 2, faults).unwrap());
            assert!(!back.size_reports().unwrap().is_empty());
        }
    }
}
