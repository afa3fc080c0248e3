//! Determinants, rational tangle closures and quasi-alternating certificates
//! for link diagrams in planar diagram notation.

pub mod cli;
pub mod determinant;
pub mod families;
pub mod diagram;
pub mod slopes;
pub mod qa;
pub mod tangle;

pub use determinant::{determinant, determinant_oracle};
pub use diagram::{parse_pd, LinkDiagram, Smoothing};
pub use slopes::{ContinuedFraction, FramedTangleInvariants, Slope};
pub use tangle::Tangle;
