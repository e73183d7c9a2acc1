//! Simulator and analysis toolkit for the k-call PUSH&PULL rumor spreading
//! process on arbitrary undirected graphs, together with a small-set
//! vertex-expansion certifier and a seeded experiment harness.
//!
//! The crate is organized around a handful of small modules:
//!
//! - [`graph`]: immutable adjacency-list graphs, instance generators, and
//!   edge-list file I/O.
//! - [`nodeset`]: fixed-universe bitsets used for informed sets, boundaries,
//!   and expansion witnesses.
//! - [`expansion`]: exact and sampled certification of the small-set
//!   vertex-expansion property, plus structural regime checks.
//! - [`protocol`]: the synchronous round engine for k-PUSH, k-PULL, and
//!   k-PUSH&PULL with full per-round tracing.
//! - [`boundary`]: degree-bucket decompositions of the informed-set boundary
//!   and the diagnostics built on them.
//! - [`stats`]: binomial tail bounds, Kolmogorov-Smirnov and chi-square
//!   helpers used by the experiment harness.
//! - [`experiments`]: batch trial execution, scaling-law fits, and the
//!   distributional symmetry test.
//!
//! All randomized operations take explicit seeds and derive per-(round, node)
//! substreams from them, so every result is reproducible bit-for-bit at any
//! level of parallelism.

pub mod boundary;
pub mod expansion;
pub mod experiments;
pub mod graph;
pub mod nodeset;
pub mod protocol;
pub mod rational;
pub mod seeds;
pub mod stats;

pub use graph::{Diameter, Graph};
pub use nodeset::NodeSet;
pub use rational::Frac;
