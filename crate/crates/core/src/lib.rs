//! Circuit-level surface code predecoding lab.
//!
//! The crate bundles everything needed to study a streaming cryogenic
//! predecoder for the rotated surface code:
//!
//! * [`lattice`]: geometry and CNOT schedules of the syndrome-extraction circuit.
//! * [`circuit`]: a Z-error Pauli-frame simulator with SI1000 circuit noise,
//!   single-fault enumeration and a fast fault sampler.
//! * [`graph`]: the Z-error decoding graph with classified edges and corrections.
//! * [`predecoder`]: the nine-stage Pinball pipeline.
//! * [`clique`]: the Clique baseline predecoder.
//! * [`matching`]: minimum-weight perfect matching second-level decoder.
//! * [`harness`]: Monte Carlo experiments, reports, bandwidth and energy models.
//! * [`config`]: flat key-value experiment configuration.

pub mod circuit;
pub mod clique;
pub mod config;
pub mod error;
pub mod graph;
pub mod harness;
pub mod lattice;
pub mod matching;
pub mod predecoder;

pub use circuit::{DetectorBlock, FaultSampler, NoiseModel};
pub use error::{Error, Result};
pub use graph::{build_graph, DecodingGraph, EdgeClass};
pub use lattice::{build_lattice, Lattice};
pub use predecoder::{build_pipeline, Pipeline, PredecodeOutcome, Predecoder};
