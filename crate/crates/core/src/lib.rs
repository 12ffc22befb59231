//! Pairwise-comparison elicitation with real-time transitivity control.
//!
//! The crate covers the whole path from an expert's pairwise judgments to
//! aggregated importance weights:
//!
//! - [`scale`], [`judgment`], [`matrix`]: comparison scales, exact judgment
//!   values and the reciprocal judgment matrix with its fill order.
//! - [`weights`]: column-normalization and eigenvector weights, CI/RI/CR.
//! - [`transitivity`]: triad classification, admissible relations, revision
//!   candidates and the full-matrix audit.
//! - [`baselines`]: win counts and Thurstone intensities.
//! - [`aggregation`]: multi-expert means with t confidence intervals.
//! - [`simulation`]: simulated experts and the accuracy, sensitivity and
//!   control-effect experiments.
//! - [`session`], [`store`], [`service`], [`http`]: the elicitation state
//!   machine, study persistence and the JSON HTTP API.
//! - [`commands`]: the operations behind the `pairwise` command line.

pub mod aggregation;
pub mod baselines;
pub mod commands;
pub mod error;
pub mod http;
pub mod judgment;
pub mod matrix;
pub mod scale;
pub mod service;
pub mod session;
pub mod simulation;
pub mod stats;
pub mod store;
pub mod transitivity;
pub mod weights;

pub use error::{Error, Result};
pub use judgment::{JudgmentValue, Ratio, Relation};
pub use matrix::{pair_sequence, JudgmentMatrix};
pub use scale::ComparisonScale;
pub use weights::{WeightReport, WeightVector};
