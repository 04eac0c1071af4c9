//! Turning two noisy raw keys into one short secret key.
//!
//! [`reconcile`] removes the disagreements by public parity comparisons;
//! every compared parity costs one discarded bit, so the parities themselves
//! leak nothing about the bits that remain. [`privacy_amplify`] then
//! compresses the reconciled key into parities of random subsets, shedding
//! the `k` bits the eavesdropper may know plus a margin of `s` bits.

mod amplify;
mod reconcile;

pub use amplify::{
    apply_subsets, leaked_bits_bound, privacy_amplify, AmplificationPlan, Amplified, DEFAULT_LEAK_FACTOR,
};
pub use reconcile::{block_length, reconcile, BlockPolicy, DistillAccounting, ReconcileParams, Reconciled};
