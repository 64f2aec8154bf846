//! Unstructured search on the complete graph by four walk dynamics.
//!
//! Each walk module offers three routes to the same success probability:
//!
//! - full-space evolution of the state vector (`evolve_full`),
//! - evolution restricted to the low-dimensional invariant subspace (`evolve_subspace`),
//! - the closed-form expression (`success_closed_form`).
//!
//! The walks are:
//!
//! - [`rw_discrete`]: absorbing Markov chain with transition matrix `P`.
//! - [`rw_continuous`]: absorbing heat equation `dp/dt = L p / ‖L‖`.
//! - [`qw_discrete`]: coined walk on arcs with Grover coin, flip-flop shift and phase oracle.
//! - [`qw_continuous`]: Schrödinger evolution under `H = -γL - |a⟩⟨a|`.
//!
//! [`analytics`] compares walks against each other and assembles the summary table.
//! Vertex labels are 1-based at every public boundary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod error;
pub mod linalg;
pub mod model;
pub mod qw_continuous;
pub mod qw_discrete;
pub mod rw_continuous;
pub mod rw_discrete;

pub use error::{Result, WalkError};
pub use model::{
    ArcState, CompleteGraph, EvolutionRecord, ProbabilityState, Sample, VertexAmplitudeState,
    VertexReadout,
};
