//! Random Belyi-type surfaces built combinatorially from random oriented
//! cubic graphs.
//!
//! The crate is organised bottom-up:
//!
//! * [`rotation_graph`] samples cubic multigraphs with a rotation system
//!   from the configuration model.
//! * [`cycle_census`] enumerates short simple cycles, their pairwise
//!   intersection profile and whether they disconnect the graph.
//! * [`turn_matrix`] turns a cycle into an L/R word, multiplies it out
//!   exactly and converts the trace into a geodesic length.
//! * [`stern_moments`] computes exact moments of the matrix entries over
//!   all words of a given length (Stern rows, power sums, covariances).
//! * [`spectrum_bounds`] evaluates the systole series and the growth
//!   bounds for the length of a typical geodesic.
//! * [`experiments`] is the seeded Monte Carlo harness producing
//!   [`report::ExperimentReport`]s.

pub mod cycle_census;
pub mod error;
pub mod exhaustive;
pub mod experiments;
pub mod report;
pub mod rotation_graph;
pub mod seed;
pub mod spectrum_bounds;
pub mod stats;
pub mod stern_moments;
pub mod turn_matrix;

pub use cycle_census::{
    alpha_cap, enumerate_cycles, intersection_profile, is_disconnecting, CapPolicy, Cycle,
    IntersectionProfile,
};
pub use error::{Error, Result};
pub use rotation_graph::{degree_check, sample_graph, GraphData, RotationGraph};
pub use seed::Seed;
pub use turn_matrix::{
    classify_geodesic, cycle_to_word, geodesic_length, word_to_matrix, GeodesicClass, Turn,
    TurnMatrix, TurnWord,
};

/// Version tag stamped into every report.
pub const CODE_VERSION: &str = concat!("belyi-core ", env!("CARGO_PKG_VERSION"));
