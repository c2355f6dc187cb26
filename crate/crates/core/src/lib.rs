//! Exact construction and analysis of lattice Voronoi regions.

pub mod bw16;
pub mod exact;
pub mod faces;
pub mod group;
pub mod lattice;
pub mod moments;
pub mod montecarlo;
pub mod relvec;
pub(crate) mod serde_util;
pub mod verify;
