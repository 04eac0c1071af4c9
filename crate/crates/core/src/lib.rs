//! Deterministic simulation of the BB84 and B92 quantum key distribution
//! protocols.
//!
//! The crate is layered bottom-up:
//!
//! * [`quantum`]: kets, operators, projective and POVM measurement.
//! * [`alphabet`]: bit ↔ polarization encodings.
//! * [`channel`] and [`transcript`]: the quantum and public channels.
//! * [`eve`]: eavesdropper models and their bookkeeping.
//! * [`protocol`]: raw-key extraction, sifting, error estimation, sessions.
//! * [`distill`]: reconciliation and privacy amplification.
//! * [`otp`]: the one-time pad that consumes the distilled key.
//!
//! Every random choice is drawn from an explicit [`Rng`], so a session is a
//! pure function of its configuration and seed.

pub mod alphabet;
pub mod bits;
pub mod channel;
pub mod distill;
pub mod error;
pub mod eve;
pub mod fixtures;
pub mod otp;
pub mod protocol;
pub mod quantum;
pub mod report;
pub mod rng;
pub mod transcript;

pub use bits::Bitstring;
pub use error::{ProtocolError, QuantumError};
pub use rng::Rng;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/qubits.md")]
    mod qubits {}
    #[doc = include_str!("../../../book/src/b92-receiver.md")]
    mod b92_receiver {}
    #[doc = include_str!("../../../book/src/channel-and-eve.md")]
    mod channel_and_eve {}
    #[doc = include_str!("../../../book/src/sessions.md")]
    mod sessions {}
    #[doc = include_str!("../../../book/src/distillation.md")]
    mod distillation {}
    #[doc = include_str!("../../../book/src/one-time-pad.md")]
    mod one_time_pad {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
