//! The BB84 and B92 protocol engine.
//!
//! A session runs Stage 1 (quantum transmission), then the public Stage 2
//! phases: sifting, error estimation, reconciliation and privacy
//! amplification. The noise-free protocol is the same engine with a clean
//! channel.

pub mod config;
pub mod estimate;
pub mod session;
pub mod sift;
pub mod stage1;

pub use config::{Protocol, SessionConfig};
pub use estimate::{estimate_error, Estimate};
pub use session::{run_session, run_session_detailed, run_session_timed, AbortReason, RunReport, SessionOutcome};
pub use sift::{sift_b92, sift_bb84, RawKeys};
pub use stage1::{run_stage1_b92, run_stage1_bb84, Reading, SlotRecord, Stage1Record};
