//! Butterfly networks, zero forcing and exact adjacency ranks.
//!
//! The crate builds the butterfly network `BF(r)` in two labelings (layer
//! coordinates and the recursive numbering), constructs an explicit zero
//! forcing set of size `((3r+7)2^r + 2(-1)^r) / 9`, simulates forcing, and
//! certifies that the adjacency matrix has rank exactly `n` minus that size
//! by two independent routes: exact elimination and explicit `±1` row
//! dependences.

pub mod butterfly;
pub mod certificates;
pub mod error;
pub mod forcing;
pub mod graph;
pub mod jacobsthal;
pub mod linalg;
pub mod power;
pub mod search;
pub mod verify;

pub use butterfly::{f_of, g_of, generate, Butterfly, ButterflyLabeling, LayerVertex, Ordering};
pub use certificates::{build_book, BookMemo, Certificate, CertificateBook};
pub use error::{Error, Result};
pub use forcing::{closure, construct_s, is_zero_forcing, propagation_time, size_formula, ForcingTrace};
pub use graph::{Graph, GraphBuilder, VertexSet};
pub use jacobsthal::{jacobsthal, JacobsthalTable};
pub use linalg::{theorem_formulas, ExactMatrix, FieldTag};
pub use search::Budget;
pub use verify::{verify_pipeline, VerifyOptions, VerifyReport};
