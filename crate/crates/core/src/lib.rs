//! Altes chirplets: synthesis, closed-form wavelet properties, the hyperbolic chirplet
//! transform and the experiments built on them.

// Range checks are written as `!(lo < x && x < hi)` on purpose so NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chirplet;
pub mod cli;
pub mod detect;
pub mod error;
pub mod fft;
pub mod io;
pub mod plot;
pub mod properties;
pub mod sweep;
pub mod synth;
pub mod transform;
pub mod verify;

pub use chirplet::{AnalyticSignal, ChirpletParams, ClassicAltesParams, Spectrum};
pub use error::{AltesError, Result};
