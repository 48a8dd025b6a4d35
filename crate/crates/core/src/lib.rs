//! Structural analysis of chemical reaction networks.
//!
//! Given a network of mass-action reactions and a designated input/output
//! species pair, this crate decides whether the output concentration responds
//! monotonically (pointwise in time) to an increase of the input's initial
//! concentration, using only the sign structure of the network. Verdicts can
//! be cross-checked empirically with ODE simulation sweeps.

pub mod graphs;
pub mod model;
pub mod parser;
pub mod report;
pub mod sim;

pub mod cli;

pub use model::{Network, Reaction, SignStructure, Species};
pub use parser::NetworkDocument;
