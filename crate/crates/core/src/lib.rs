pub mod bench;
pub mod cli;
pub mod error;
pub mod iir;
pub mod lilliefors;
pub mod metrics;
pub mod nlm;
pub mod noise;
pub mod pipeline;
pub mod reference;
pub mod signal;
pub mod vmd;
pub mod wavelet;
pub mod wfdb;

pub use error::{Error, Result};
pub use signal::{recombine, segment, Component, ComponentLabel, Decomposition, DecompositionKind, SegmentSet, Signal};
