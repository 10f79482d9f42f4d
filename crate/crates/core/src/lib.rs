//! Dynamical total coherence of quantum channels.
//!
//! Channels are given by Kraus operators and analysed through their Choi
//! matrices. The crate evaluates the closed-form Hilbert-Schmidt measure for
//! qubit channels, the diamond-norm distance to the unital set by a
//! primal-dual interior-point SDP solver, numeric trace-norm and
//! relative-entropy measures, and simulates the discrimination game that
//! gives the diamond measure its operational meaning.
//!
//! Module layout:
//! - [`numerics`]: complex matrices, eigendecomposition, partial traces, norms.
//! - [`channels`]: Kraus channels, Choi matrices, validation, standard families.
//! - [`static_coherence`]: state coherence measures and majorization.
//! - [`measures`]: dynamical coherence measures and their witnesses.
//! - [`sdp`]: generic SDP solver and the diamond-norm programs.
//! - [`discrimination`]: optimal strategies and the Monte-Carlo simulator.
//! - [`cli`]: the `dyncoh` command-line interface.

pub mod channels;
pub mod cli;
pub mod discrimination;
pub mod error;
pub mod measures;
pub mod numerics;
pub mod optimize;
pub mod sdp;
pub mod static_coherence;
pub mod tolerance;
