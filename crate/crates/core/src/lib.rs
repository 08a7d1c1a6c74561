//! MSE-based transfer charts for iterative decoding.
//!
//! The crate is organised around the binary-input AWGN channel
//! `Y = √γ·X + N`:
//!
//! * [`awgn`] evaluates `φ(γ)` (the MMSE of a ±1 bit), `I₂(γ)`, their inverse
//!   and tail integrals, and estimates transfer-chart measures from LLR
//!   ensembles.
//! * [`decoders`] produces transfer points for component decoders, either in
//!   closed form (repetition, variable nodes, uncoded inner channels, check
//!   nodes under the MSE measure) or by Monte-Carlo simulation (check nodes,
//!   convolutional codes through BCJR).
//! * [`charts`] assembles curves, integrates areas under MMSE-vs-SNR plots,
//!   compares inner and outer curves and predicts decoding thresholds.

// `!(x > 0.0)` style checks are meant to reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod awgn;
pub mod charts;
pub mod decoders;
pub mod error;
pub mod quadrature;
pub mod rng;
pub mod verify;

pub use error::{Error, Result};
