//! Semantic-value network analysis.
//!
//! Weighted directed co-occurrence networks, classical centralities, pairwise
//! affinity functions, the intrinsic/extrinsic/semantic value of each actor,
//! and the Pipe algorithm for semantic affinity between two actors.
//!
//! Every numeric routine is generic over [`Scalar`] (`f32` or `f64`). The
//! aliases at the crate root fix the scalar to `f64`, which is what the CLI
//! uses.

pub mod affinity;
pub mod centrality;
pub mod corpus;
pub mod error;
pub mod graph;
pub mod io;
pub mod pipe;
pub mod scalar;
pub mod semantics;

pub use error::{Error, Result};
pub use graph::NodeId;
pub use scalar::Scalar;

pub type Graph = graph::Graph<f64>;
pub type AffinityMatrix = affinity::AffinityMatrix<f64>;
pub type CentralityScores = centrality::CentralityScores<f64>;
pub type SemanticScores = semantics::SemanticScores<f64>;
pub type CapacityState = pipe::CapacityState<f64>;
pub type PipeResult = pipe::PipeResult<f64>;
pub type SemanticAffinityMatrix = pipe::SemanticAffinityMatrix<f64>;

pub type GraphF32 = graph::Graph<f32>;
pub type AffinityMatrixF32 = affinity::AffinityMatrix<f32>;
