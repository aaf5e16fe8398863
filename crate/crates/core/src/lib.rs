//! Secret key agreement at zero discussion rate.
//!
//! The secrecy capacity of a multiterminal source when the public discussion
//! rate vanishes equals the Gács–Körner common information `J_GK(Z_V)` for
//! hypergraphical and finite linear sources. This crate computes it with
//! closed forms and an exhaustive oracle, evaluates partition-based upper
//! bounds and simulates the zero-discussion key agreement scheme.

pub mod bounds;
pub mod cli;
pub mod crosscheck;
pub mod error;
pub mod gf;
pub mod mcf;
pub mod partition;
pub mod prob;
pub mod random;
pub mod report;
pub mod sim;
pub mod sources;
pub mod spec_file;

pub use error::{Error, Result};
pub use gf::{FieldOrder, FiniteMatrix};
pub use mcf::{jgk, CommonFunctionWitness, Jgk};
pub use report::Report;
pub use sources::{DiscreteSource, FiniteLinearSource, HypergraphicalSource, Limits, Source};
pub use spec_file::SourceSpecFile;
