#![no_std]
#![forbid(unsafe_code)]
//! Connectivity labeling schemes, oracles and a routing scheme for graphs
//! whose edges (or vertices) are colored, where a fault deletes an entire
//! color class at once.

extern crate alloc;

pub mod bits;
pub mod dsu;
pub mod error;
pub mod format;
pub mod graph;
pub mod hash;
pub mod multi_fault;
pub mod nca;
pub mod reductions;
pub mod routing;
pub mod single_fault;
pub mod sketch;
pub mod two_fault;

pub use error::{Error, Result};
pub use graph::{Color, ColorMode, ColoredGraph, ComponentId, EdgeId, FaultSet, Vertex};
