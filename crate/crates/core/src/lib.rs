//! Indirect-influence analysis for weighted directed graphs.
//!
//! The central object is the PWP transform `T(D, λ) = (e^{λD} − I)/(e^λ − 1)`,
//! which converts a matrix of direct influences `D` into a matrix of indirect
//! influences `T`. On top of it the crate provides vertex scores (dependence,
//! influence, importance), rankings with explicit tie handling, closed-form
//! evaluations for path and cycle graphs, a spectral fast path for
//! ℝ-diagonalizable matrices, and sweep engines that locate the points where
//! a ranking changes as the method parameter λ or the input data vary.
//!
//! Orientation convention used everywhere: `D[i][j]` is the weight of the
//! direct influence of vertex `j` on vertex `i`.

pub mod analytic;
pub mod error;
pub mod graph;
pub mod matrix;
pub mod pwp;
pub mod rankings;
pub mod spectral;
pub mod sweep;

mod evd;

pub use error::Error;
pub use graph::WeightedDigraph;
pub use matrix::Matrix;
pub use pwp::{InfluenceMatrix, PwpParams};
pub use rankings::{Ranking, ScoreKind, ScoreSource, ScoreVector};
