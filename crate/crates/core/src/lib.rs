//! Graphon estimation and multiple change-point detection for dynamic networks.
//!
//! A dynamic network is a sequence of `T` symmetric binary adjacency matrices on a
//! fixed node set. This crate estimates the link-probability matrix behind a window of
//! snapshots with modified neighborhood smoothing ([`estim::mnbs_estimate`]) and scans
//! the sequence for change-points by comparing estimates on adjacent windows
//! ([`cpd::detect`]).
//!
//! The crate is `no_std` (it needs `alloc`). The default `parallel` feature enables
//! `std` and spreads the scan, the sampler and the Monte Carlo harness over a rayon pool;
//! every reduction keeps a fixed order, so results are bitwise identical with any number
//! of threads.
//!
//! Time indices are 1-based and inclusive throughout (`t = 1..=T`). Node indices are
//! 0-based.
//!
//! ```
//! use graphon_cpd_core::cpd::{detect, DetectorParams};
//! use graphon_cpd_core::genmodels::{scenario_sequence, ScenarioSpec};
//!
//! let spec = ScenarioSpec::new("DSBM-IV".parse().unwrap(), 60, 36, 7);
//! let (seq, truth) = scenario_sequence(&spec).unwrap();
//! let report = detect(&seq, &DetectorParams::recommended(seq.len())).unwrap();
//! assert_eq!(truth.changepoints, vec![18]);
//! assert!(report.changepoints.len() <= report.local_max.len());
//! ```

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod cpd;
pub mod error;
pub mod estim;
pub mod eval;
pub mod genmodels;
pub mod matrix;
mod par;
pub mod rng;

pub use error::{Error, Result};
pub use matrix::{AdjacencySequence, AdjacencySnapshot, DenseSymMatrix, LinkProbMatrix};
