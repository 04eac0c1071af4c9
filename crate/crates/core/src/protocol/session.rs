//! A full session, from the first pulse to the final key.

use std::time::Instant;

use serde::Serialize;

use crate::bits::Bitstring;
use crate::distill::{leaked_bits_bound, privacy_amplify, reconcile, DistillAccounting};
use crate::error::ProtocolError;
use crate::eve::{eve_guess, Eve, EveGuess, EveMode, EveRecord, EveStrategy};
use crate::protocol::config::{Protocol, SessionConfig};
use crate::protocol::estimate::{estimate_error, sample_size};
use crate::protocol::sift::{sift_b92, sift_bb84, RawKeys};
use crate::protocol::stage1::{run_stage1_b92, run_stage1_bb84, Stage1Record};
use crate::rng::Rng;
use crate::transcript::PublicTranscript;

/// Added to the session seed to seed Eve's deferred measurements, so that
/// they do not disturb the session stream.
pub const EVE_SEED_OFFSET: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AbortReason {
    EmptySiftedKey,
    RestartRequired,
    ReconciliationFailed,
    KeyExhausted,
}

impl AbortReason {
    fn of(e: &ProtocolError) -> Option<Self> {
        match e {
            ProtocolError::EmptySiftedKey => Some(AbortReason::EmptySiftedKey),
            ProtocolError::RestartRequired { .. } => Some(AbortReason::RestartRequired),
            ProtocolError::ReconciliationFailed { .. } => Some(AbortReason::ReconciliationFailed),
            ProtocolError::KeyExhausted { .. } => Some(AbortReason::KeyExhausted),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Timings {
    pub stage1_ms: f64,
    pub stage2_ms: f64,
}

/// Statistics of one session. Field order is the serialized order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub protocol: Protocol,
    pub n_pulses: usize,
    pub seed: u64,
    pub received_count: usize,
    pub sifted_count: usize,
    pub disclosed_count: usize,
    /// Error rate estimated from the disclosed sample.
    pub error_rate: Option<f64>,
    /// Error rate over the entire raw key. The parties never learn this.
    pub sifted_error_rate: Option<f64>,
    pub aborted: bool,
    pub abort_reason: Option<AbortReason>,
    pub abort_detail: Option<String>,
    pub reconciled_length: Option<usize>,
    pub parity_comparisons: usize,
    pub bits_discarded: usize,
    pub errors_deleted: usize,
    pub leaked_bits: Option<usize>,
    pub sec_param: usize,
    pub final_key_length: usize,
    pub final_key_alice: Option<Bitstring>,
    pub final_key_bob: Option<Bitstring>,
    pub keys_equal: Option<bool>,
    pub eve: &'static str,
    pub eve_recorded_slots: usize,
    pub eve_guessed_bits: usize,
    /// Fraction of Eve's guesses matching Alice's raw key.
    pub eve_guess_accuracy: Option<f64>,
    /// `Σ 1 - h(confidence)` over Eve's guesses.
    pub eve_known_bits: f64,
    /// Eve's expected information on the final key, in bits: the known bits
    /// scaled to the reconciled length, minus `k`, plus `2^-s / ln 2`.
    pub eve_final_key_info_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

/// Everything a session produced, including the private data a report
/// leaves out.
#[derive(Debug, Clone)]
pub struct SessionOutcome {
    pub report: RunReport,
    pub transcript: PublicTranscript,
    pub stage1: Stage1Record,
    pub raw: Option<RawKeys>,
    pub eve_record: Option<EveRecord>,
    pub eve_guess: EveGuess,
    pub accounting: DistillAccounting,
}

impl RunReport {
    fn empty(cfg: &SessionConfig) -> Self {
        Self {
            protocol: cfg.protocol,
            n_pulses: cfg.n_pulses,
            seed: cfg.seed,
            received_count: 0,
            sifted_count: 0,
            disclosed_count: 0,
            error_rate: None,
            sifted_error_rate: None,
            aborted: false,
            abort_reason: None,
            abort_detail: None,
            reconciled_length: None,
            parity_comparisons: 0,
            bits_discarded: 0,
            errors_deleted: 0,
            leaked_bits: None,
            sec_param: cfg.s,
            final_key_length: 0,
            final_key_alice: None,
            final_key_bob: None,
            keys_equal: None,
            eve: cfg.eve.name(),
            eve_recorded_slots: 0,
            eve_guessed_bits: 0,
            eve_guess_accuracy: None,
            eve_known_bits: 0.0,
            eve_final_key_info_estimate: None,
            timings: None,
        }
    }

    fn abort(&mut self, e: &ProtocolError) -> Result<(), ProtocolError> {
        let reason = AbortReason::of(e).ok_or_else(|| e.clone())?;
        self.aborted = true;
        self.abort_reason = Some(reason);
        self.abort_detail = Some(e.to_string());
        if let ProtocolError::RestartRequired { rate, .. } = e {
            self.error_rate = Some(*rate);
        }
        Ok(())
    }
}

/// Runs a session and returns its report. Aborts are part of the report;
/// errors are returned only for invalid configurations.
pub fn run_session(cfg: &SessionConfig) -> Result<RunReport, ProtocolError> {
    Ok(run_session_detailed(cfg)?.report)
}

/// [`run_session`] with wall-clock timings filled in.
pub fn run_session_timed(cfg: &SessionConfig) -> Result<SessionOutcome, ProtocolError> {
    run(cfg, true)
}

pub fn run_session_detailed(cfg: &SessionConfig) -> Result<SessionOutcome, ProtocolError> {
    run(cfg, false)
}

fn eve_mode(cfg: &SessionConfig) -> EveMode {
    match cfg.protocol {
        Protocol::Bb84 => EveMode::Bb84,
        Protocol::B92 => EveMode::B92 { theta: cfg.theta },
    }
}

fn run(cfg: &SessionConfig, timed: bool) -> Result<SessionOutcome, ProtocolError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut rng = Rng::new(cfg.seed);
    let mut t = PublicTranscript::new();
    let mut report = RunReport::empty(cfg);
    let mut eve = match cfg.eve {
        EveStrategy::NoEve => None,
        s => Some(Eve::new(s, eve_mode(cfg), cfg.seed.wrapping_add(EVE_SEED_OFFSET))?),
    };

    let stage1 = match cfg.protocol {
        Protocol::Bb84 => run_stage1_bb84(cfg.n_pulses, &cfg.noise, eve.as_mut(), &mut rng)?,
        Protocol::B92 => run_stage1_b92(cfg.n_pulses, cfg.theta, &cfg.noise, eve.as_mut(), &mut rng)?,
    };
    report.received_count = stage1.received_count();
    let stage1_done = Instant::now();

    let mut outcome = SessionOutcome {
        report: RunReport::empty(cfg),
        transcript: PublicTranscript::new(),
        stage1,
        raw: None,
        eve_record: eve.map(Eve::into_record),
        eve_guess: EveGuess::default(),
        accounting: DistillAccounting::default(),
    };

    let result = stage2(cfg, &mut outcome, &mut report, &mut rng, &mut t);
    if let Err(e) = result {
        report.abort(&e)?;
    }

    if let Some(rec) = &outcome.eve_record {
        let guess = eve_guess(rec, &t);
        report.eve_recorded_slots = rec.entries.len();
        report.eve_guessed_bits = guess.guesses.len();
        report.eve_known_bits = guess.known_bits();
        if let Some(raw) = &outcome.raw {
            report.eve_guess_accuracy = guess.accuracy(&raw.alice);
            if let (Some(n), Some(k)) = (report.reconciled_length, report.leaked_bits) {
                if !report.aborted {
                    let known = report.eve_known_bits * n as f64 / raw.len() as f64;
                    let margin = 2f64.powi(-(cfg.s as i32)) / std::f64::consts::LN_2;
                    let est = ((known - k as f64).max(0.0) + margin).min(report.final_key_length as f64);
                    report.eve_final_key_info_estimate = Some(est);
                }
            }
        }
        outcome.eve_guess = guess;
    } else if !report.aborted {
        report.eve_final_key_info_estimate = Some(2f64.powi(-(cfg.s as i32)) / std::f64::consts::LN_2);
    }

    if timed {
        let end = Instant::now();
        report.timings = Some(Timings {
            stage1_ms: (stage1_done - start).as_secs_f64() * 1e3,
            stage2_ms: (end - stage1_done).as_secs_f64() * 1e3,
        });
    }
    outcome.report = report;
    outcome.transcript = t;
    Ok(outcome)
}

fn stage2(
    cfg: &SessionConfig,
    out: &mut SessionOutcome,
    report: &mut RunReport,
    rng: &mut Rng,
    t: &mut PublicTranscript,
) -> Result<(), ProtocolError> {
    let raw = match cfg.protocol {
        Protocol::Bb84 => sift_bb84(&out.stage1, t)?,
        Protocol::B92 => sift_b92(&out.stage1, t)?,
    };
    report.sifted_count = raw.len();
    report.sifted_error_rate = Some(raw.error_rate());
    report.disclosed_count = sample_size(raw.len(), cfg.sample_fraction);
    let raw = out.raw.insert(raw);

    let est = estimate_error(&raw.alice, &raw.bob, cfg.sample_fraction, cfg.r_max, rng, t)?;
    report.error_rate = Some(est.rate);

    let rec = reconcile(&est.alice, &est.bob, est.rate, &cfg.reconcile, rng, t)?;
    let mut acc = rec.accounting;
    report.parity_comparisons = acc.bits_discarded;
    report.bits_discarded = acc.bits_discarded;
    report.errors_deleted = acc.errors_deleted;
    let n = rec.alice.len();
    report.reconciled_length = Some(n);

    let k = leaked_bits_bound(est.rate, n, cfg.leak_factor);
    report.leaked_bits = Some(k);
    acc.k = k;
    out.accounting = acc;

    let amplified = privacy_amplify(&rec.alice, k, cfg.s, rng, t)?;
    let bob_final = amplified.plan.apply(&rec.bob)?;
    report.final_key_length = amplified.key.len();
    report.keys_equal = Some(amplified.key == bob_final);
    report.final_key_alice = Some(amplified.key);
    report.final_key_bob = Some(bob_final);
    out.accounting.amplification = Some(amplified.plan);
    Ok(())
}
