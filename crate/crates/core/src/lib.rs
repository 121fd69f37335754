//! Reconstruction of perfect and extended perfect binary one-error-correcting
//! codes from their minimum distance graphs.
//!
//! The pipeline for an extended code is [`distance::recover_all_distances`]
//! followed by [`reconstruct::reconstruct_extended`]; 1-perfect codes go
//! through [`reconstruct::reconstruct_perfect`], which extends the graph
//! first. [`equivalence`] decides whether two codes are equivalent and
//! [`automorphism`] moves automorphisms between a code and its graph.

pub mod automorphism;
pub mod cli;
pub mod codefile;
pub mod distance;
pub mod equivalence;
pub mod error;
pub mod generators;
pub mod graph;
pub mod reconstruct;
pub mod steiner;
pub mod word;

pub use error::{Error, Result};
pub use graph::{build_mdg, MdGraph};
pub use word::{Code, CodeMap, Word};
