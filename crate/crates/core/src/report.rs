//! Machine-readable session reports.
//!
//! A [`ReportDocument`] is one flat JSON object: the schema version, the
//! configuration, the [`RunReport`] fields and the transcript digest, always
//! in that order. Equal configurations give byte-identical documents as long
//! as timings are left out.

use std::fmt::Write as _;

use serde::Serialize;

use crate::distill::BlockPolicy;
use crate::eve::EveStrategy;
use crate::protocol::{RunReport, SessionConfig, SessionOutcome};

/// Bumped whenever a field is added, removed, renamed or reordered.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub theta: f64,
    pub flip_p: f64,
    pub loss_p: f64,
    pub multi_p: f64,
    /// Opaque: intercepted fraction. Translucent: `|⟨ψ₊|ψ₋⟩|` of the probe states.
    pub eve_param: f64,
    pub sample_fraction: f64,
    pub r_max: f64,
    pub leak_factor: f64,
    pub block_policy: String,
    pub n_clean: usize,
    pub max_passes: usize,
    pub subset_budget: usize,
}

impl ConfigEcho {
    pub fn of(cfg: &SessionConfig) -> Self {
        let eve_param = match cfg.eve {
            EveStrategy::Opaque { fraction } => fraction,
            EveStrategy::TranslucentUnitary(u) => u.probe_plus.inner(&u.probe_minus).norm(),
            EveStrategy::TranslucentEntangling(e) => e.probe_plus.inner(&e.probe_minus).norm(),
            EveStrategy::NoEve | EveStrategy::PhotonNumberSplit => 0.0,
        };
        let block_policy = match cfg.reconcile.block_policy {
            BlockPolicy::Cascade {
                constant,
                floor_rate,
                min_len,
            } => format!("cascade({constant}/max(R,{floor_rate}), min {min_len})"),
            BlockPolicy::Fixed(l) => format!("fixed({l})"),
        };
        Self {
            theta: cfg.theta,
            flip_p: cfg.noise.flip_p,
            loss_p: cfg.noise.loss_p,
            multi_p: cfg.noise.multi_p,
            eve_param,
            sample_fraction: cfg.sample_fraction,
            r_max: cfg.r_max,
            leak_factor: cfg.leak_factor,
            block_policy,
            n_clean: cfg.reconcile.n_clean,
            max_passes: cfg.reconcile.max_passes,
            subset_budget: cfg.reconcile.subset_budget,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    #[serde(flatten)]
    pub config: ConfigEcho,
    #[serde(flatten)]
    pub run: RunReport,
    pub transcript_messages: usize,
    /// SHA-256 of the serialized transcript, lowercase hex.
    pub transcript_digest: String,
}

impl ReportDocument {
    pub fn new(cfg: &SessionConfig, outcome: &SessionOutcome) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            config: ConfigEcho::of(cfg),
            run: outcome.report.clone(),
            transcript_messages: outcome.transcript.len(),
            transcript_digest: outcome.transcript.digest_hex(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields are serializable")
    }

    /// A short human-readable digest of the run.
    pub fn summary(&self) -> String {
        let r = &self.run;
        let opt = |x: Option<f64>| x.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"));
        let mut s = String::new();
        let _ = writeln!(
            s,
            "protocol        {} (seed {}, {} pulses)",
            r.protocol, r.seed, r.n_pulses
        );
        let _ = writeln!(s, "eve             {}", r.eve);
        let _ = writeln!(s, "received        {}", r.received_count);
        let _ = writeln!(s, "sifted          {}", r.sifted_count);
        let _ = writeln!(
            s,
            "error rate      {} (estimated from {} bits)",
            opt(r.error_rate),
            r.disclosed_count
        );
        if r.aborted {
            let _ = writeln!(s, "aborted         {}", r.abort_detail.as_deref().unwrap_or("yes"));
        } else {
            let _ = writeln!(s, "reconciled      {}", r.reconciled_length.unwrap_or(0));
            let _ = writeln!(s, "leak bound k    {}", r.leaked_bits.unwrap_or(0));
            let _ = writeln!(
                s,
                "final key       {} bits, keys equal: {}",
                r.final_key_length,
                r.keys_equal == Some(true)
            );
        }
        if r.eve != "none" {
            let _ = writeln!(
                s,
                "eve guesses     {} (accuracy {})",
                r.eve_guessed_bits,
                opt(r.eve_guess_accuracy)
            );
        }
        let _ = writeln!(s, "transcript      {}", self.transcript_digest);
        s
    }
}
