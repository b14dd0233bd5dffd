//! Coded turbo-structure overlapped time domain multiplexing (OvTDM).
//!
//! The crate covers the whole link: overlap waveforms, tapped-convolution
//! encoding with log-MAP trellis detection, an extended BCH(64,57) squared
//! product code with list-based soft decoding, the two iterative receivers,
//! a Gray QAM baseline, and a Monte Carlo BER harness.

pub mod bch;
pub mod codec;
pub mod error;
pub mod gf2;
pub mod link;
pub mod qam;
pub mod sim;
pub mod tpc;
pub mod waveform;

pub use error::{Error, Result};
