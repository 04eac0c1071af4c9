//! Eavesdropper models.
//!
//! An [`Eve`] sits on the quantum channel as a [`Tap`] and keeps an
//! [`EveRecord`] of what she did per slot. Her measurement of stored photons
//! and probes is deferred until the public transcript has revealed which
//! slots survived sifting (and, for BB84, in which basis); [`eve_guess`]
//! performs that step from the record and the transcript alone.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::alphabet::{b92_alphabet, Bb84Basis};
use crate::bits::Bitstring;
use crate::channel::{Pulse, PulseState, Tap};
use crate::error::QuantumError;
use crate::quantum::ket::{r, Complex};
use crate::quantum::{measure_projective, tensor, Basis, Ket2, Ket4, Matrix2};
use crate::rng::Rng;
use crate::transcript::{decode_bits, decode_indices, Party, PublicTranscript, Tag};

/// Tolerance for inner-product preservation of a probe interaction.
pub const INTERACTION_TOL: f64 = 1e-8;
/// Tolerance for the output norms of a probe interaction.
pub const OUTPUT_NORM_TOL: f64 = 1e-10;
/// Tolerance when matching an incoming state to a code state.
pub const CODE_STATE_TOL: f64 = 1e-10;

/// Eve's probe before any interaction.
pub fn initial_probe() -> Ket2 {
    Ket2::zero()
}

/// Product interaction `|θ±⟩|ψ⟩ ↦ |θ′±⟩|ψ±⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitaryProbe {
    pub theta: f64,
    pub carrier_plus: Ket2,
    pub carrier_minus: Ket2,
    pub probe_plus: Ket2,
    pub probe_minus: Ket2,
}

/// Entangling interaction
/// `|θ₊⟩|ψ⟩ ↦ a|θ′₊⟩|ψ₊⟩ + b|θ′₋⟩|ψ₊⟩`,
/// `|θ₋⟩|ψ⟩ ↦ b|θ′₊⟩|ψ₋⟩ + a|θ′₋⟩|ψ₋⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglingProbe {
    pub theta: f64,
    pub a: Complex,
    pub b: Complex,
    pub carrier_plus: Ket2,
    pub carrier_minus: Ket2,
    pub probe_plus: Ket2,
    pub probe_minus: Ket2,
}

/// Probe states at `±chi` from vertical, with overlap `cos 2chi`.
fn probe_pair(overlap: f64) -> (Ket2, Ket2) {
    let chi = 0.5 * overlap.clamp(-1.0, 1.0).acos();
    (Ket2::polarized(chi), Ket2::polarized(-chi))
}

impl UnitaryProbe {
    /// One-parameter family from the identity (`strength = 0`) to full
    /// interception (`strength = 1`, both carrier outputs vertical).
    ///
    /// The carrier outputs sit at `±θ(1 - strength)`; the probe overlap is
    /// chosen as `cos 2θ / cos 2θ′` so that inner products are preserved.
    pub fn with_strength(theta: f64, strength: f64) -> Result<Self, QuantumError> {
        crate::quantum::povm::check_theta(theta)?;
        let s = strength.clamp(0.0, 1.0);
        let theta_out = theta * (1.0 - s);
        let (probe_plus, probe_minus) = probe_pair((2.0 * theta).cos() / (2.0 * theta_out).cos());
        Ok(Self {
            theta,
            carrier_plus: Ket2::polarized(theta_out),
            carrier_minus: Ket2::polarized(-theta_out),
            probe_plus,
            probe_minus,
        })
    }

    pub fn identity(theta: f64) -> Self {
        Self {
            theta,
            carrier_plus: Ket2::polarized(theta),
            carrier_minus: Ket2::polarized(-theta),
            probe_plus: initial_probe(),
            probe_minus: initial_probe(),
        }
    }
}

impl EntanglingProbe {
    /// One-parameter family with orthogonal carrier outputs `|↗⟩`, `|↖⟩` and
    /// real `a = cos β`, `b = sin β`.
    ///
    /// The probe overlap falls linearly from 1 (`strength = 0`, the identity
    /// map) to `cos 2θ` (`strength = 1`); `sin 2β` then follows from
    /// preserving `⟨θ₊|θ₋⟩`.
    pub fn with_strength(theta: f64, strength: f64) -> Result<Self, QuantumError> {
        crate::quantum::povm::check_theta(theta)?;
        let s = strength.clamp(0.0, 1.0);
        let c = (2.0 * theta).cos();
        let overlap = 1.0 - s * (1.0 - c);
        let beta = 0.5 * (c / overlap).clamp(-1.0, 1.0).asin();
        let (probe_plus, probe_minus) = probe_pair(overlap);
        Ok(Self {
            theta,
            a: r(beta.cos()),
            b: r(beta.sin()),
            carrier_plus: Ket2::polarized(std::f64::consts::FRAC_PI_4),
            carrier_minus: Ket2::polarized(-std::f64::consts::FRAC_PI_4),
            probe_plus,
            probe_minus,
        })
    }

    /// Unnormalized output amplitudes for code bit `bit` (1 = `θ₊`).
    pub fn output(&self, bit: u8) -> [Complex; 4] {
        let (wp, wm, probe) = if bit == 1 {
            (self.a, self.b, self.probe_plus)
        } else {
            (self.b, self.a, self.probe_minus)
        };
        let p = tensor(&self.carrier_plus, &probe).amplitudes();
        let m = tensor(&self.carrier_minus, &probe).amplitudes();
        std::array::from_fn(|i| wp * p[i] + wm * m[i])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EveStrategy {
    NoEve,
    /// Intercept-measure-resend on a fraction `fraction` of pulses.
    Opaque {
        fraction: f64,
    },
    TranslucentUnitary(UnitaryProbe),
    TranslucentEntangling(EntanglingProbe),
    /// Keep one photon of every multi-photon pulse.
    PhotonNumberSplit,
}

impl EveStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            EveStrategy::NoEve => "none",
            EveStrategy::Opaque { .. } => "opaque",
            EveStrategy::TranslucentUnitary(_) => "translucent",
            EveStrategy::TranslucentEntangling(_) => "entangle",
            EveStrategy::PhotonNumberSplit => "pns",
        }
    }

    pub fn is_translucent(&self) -> bool {
        matches!(
            self,
            EveStrategy::TranslucentUnitary(_) | EveStrategy::TranslucentEntangling(_)
        )
    }
}

fn raw_inner(u: &[Complex; 4], v: &[Complex; 4]) -> Complex {
    u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum()
}

fn not_unitary(msg: String) -> QuantumError {
    QuantumError::InteractionNotUnitary(msg)
}

/// Checks that a translucent interaction can be realized by a unitary:
/// `⟨in₊|in₋⟩ = ⟨out₊|out₋⟩` and both outputs have unit norm.
pub fn validate_interaction(s: &EveStrategy) -> Result<(), QuantumError> {
    let (theta, out_plus, out_minus) = match s {
        EveStrategy::TranslucentUnitary(u) => (
            u.theta,
            tensor(&u.carrier_plus, &u.probe_plus).amplitudes(),
            tensor(&u.carrier_minus, &u.probe_minus).amplitudes(),
        ),
        EveStrategy::TranslucentEntangling(e) => {
            let weight = e.a.norm_sqr() + e.b.norm_sqr();
            if (weight - 1.0).abs() > OUTPUT_NORM_TOL {
                return Err(not_unitary(format!("|a|^2 + |b|^2 = {weight}, expected 1")));
            }
            (e.theta, e.output(1), e.output(0))
        }
        _ => return Ok(()),
    };
    let psi = initial_probe();
    let in_plus = tensor(&Ket2::polarized(theta), &psi);
    let in_minus = tensor(&Ket2::polarized(-theta), &psi);
    let before = in_plus.inner(&in_minus);
    for (name, out) in [("plus", &out_plus), ("minus", &out_minus)] {
        let n = raw_inner(out, out).re.sqrt();
        if (n - 1.0).abs() > OUTPUT_NORM_TOL {
            return Err(not_unitary(format!("output {name} has norm {n}")));
        }
    }
    let after = raw_inner(&out_plus, &out_minus);
    if (after - before).norm() > INTERACTION_TOL {
        return Err(not_unitary(format!("<in+|in-> = {before} but <out+|out-> = {after}")));
    }
    Ok(())
}

/// What Eve knows about the protocol being attacked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum EveMode {
    Bb84,
    B92 { theta: f64 },
}

/// Eve's measurement direction for opaque B92 attacks: the basis containing
/// `|θ₊⟩` or the one containing `|θ₋⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum B92Direction {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EveEntry {
    /// BB84 intercept-resend: basis and the bit read in it.
    MeasuredBb84 { basis: Bb84Basis, bit: u8 },
    /// B92 intercept-resend: `on_axis` is true when the photon was found in
    /// the code state spanning the chosen direction.
    MeasuredB92 { direction: B92Direction, on_axis: bool },
    /// Probe left in a product state.
    Probe(Ket2),
    /// Probe entangled with the forwarded carrier, awaiting the receiver.
    Entangled { joint: Ket4, residual: Option<Ket2> },
    /// A photon split off a multi-photon pulse.
    Photon(Ket2),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EveRecord {
    pub mode: EveMode,
    pub strategy: EveStrategy,
    /// Seed for Eve's deferred measurements in [`eve_guess`].
    pub guess_seed: u64,
    pub entries: BTreeMap<usize, EveEntry>,
}

impl EveRecord {
    pub fn new(mode: EveMode, strategy: EveStrategy, guess_seed: u64) -> Self {
        Self {
            mode,
            strategy,
            guess_seed,
            entries: BTreeMap::new(),
        }
    }

    fn insert(&mut self, slot: usize, e: EveEntry) {
        let prev = self.entries.insert(slot, e);
        debug_assert!(prev.is_none(), "two record entries for slot {slot}");
    }
}

/// An eavesdropper on the channel.
#[derive(Debug, Clone)]
pub struct Eve {
    record: EveRecord,
}

impl Eve {
    pub fn new(strategy: EveStrategy, mode: EveMode, guess_seed: u64) -> Result<Self, QuantumError> {
        if strategy.is_translucent() {
            validate_interaction(&strategy)?;
        }
        if let EveMode::B92 { theta } = mode {
            b92_alphabet(theta)?;
        }
        Ok(Self {
            record: EveRecord::new(mode, strategy, guess_seed),
        })
    }

    pub fn record(&self) -> &EveRecord {
        &self.record
    }

    pub fn into_record(self) -> EveRecord {
        self.record
    }

    /// Stores the probe state left once the receiver has measured the carrier
    /// of an entangled pulse.
    pub fn settle(&mut self, slot: usize, residual: Ket2) {
        if let Some(EveEntry::Entangled { residual: r, .. }) = self.record.entries.get_mut(&slot) {
            *r = Some(residual);
        }
    }
}

fn single_state(p: &Pulse) -> Result<Ket2, QuantumError> {
    match p.state {
        PulseState::Single(s) => Ok(s),
        PulseState::Joint(_) => Err(QuantumError::StateNotInAlphabet),
    }
}

/// Intercept-resend with probability `fraction`.
pub fn tap_opaque(
    p: Pulse,
    fraction: f64,
    mode: EveMode,
    rng: &mut Rng,
) -> Result<(Pulse, Option<EveEntry>), QuantumError> {
    if !rng.bernoulli(fraction) {
        return Ok((p, None));
    }
    let s = single_state(&p)?;
    match mode {
        EveMode::Bb84 => {
            let basis = Bb84Basis::from_bit(rng.bit());
            let alphabet = basis.alphabet();
            let (bit, _) = measure_projective(&s, &alphabet.basis()?, rng);
            let fwd = Pulse::single(p.slot, p.photons, alphabet.encode(bit));
            Ok((fwd, Some(EveEntry::MeasuredBb84 { basis, bit })))
        }
        EveMode::B92 { theta } => {
            let (direction, axis) = if rng.coin() {
                (B92Direction::Minus, Ket2::polarized(-theta))
            } else {
                (B92Direction::Plus, Ket2::polarized(theta))
            };
            let basis = Basis::with_one(axis);
            let (b, collapsed) = measure_projective(&s, &basis, rng);
            let fwd = Pulse::single(p.slot, p.photons, collapsed);
            Ok((
                fwd,
                Some(EveEntry::MeasuredB92 {
                    direction,
                    on_axis: b == 1,
                }),
            ))
        }
    }
}

/// Lets the carrier interact with Eve's probe and forwards it.
pub fn tap_translucent(p: Pulse, s: &EveStrategy) -> Result<(Pulse, EveEntry), QuantumError> {
    let incoming = single_state(&p)?;
    let theta = match s {
        EveStrategy::TranslucentUnitary(u) => u.theta,
        EveStrategy::TranslucentEntangling(e) => e.theta,
        _ => return Err(QuantumError::StateNotInAlphabet),
    };
    let alphabet = b92_alphabet(theta)?;
    let bit = alphabet
        .code_bit(&incoming, CODE_STATE_TOL)
        .ok_or(QuantumError::StateNotInAlphabet)?;
    match s {
        EveStrategy::TranslucentUnitary(u) => {
            let (carrier, probe) = if bit == 1 {
                (u.carrier_plus, u.probe_plus)
            } else {
                (u.carrier_minus, u.probe_minus)
            };
            Ok((Pulse::single(p.slot, p.photons, carrier), EveEntry::Probe(probe)))
        }
        EveStrategy::TranslucentEntangling(e) => {
            let joint = Ket4::new(e.output(bit))?;
            let fwd = Pulse {
                slot: p.slot,
                photons: 1,
                state: PulseState::Joint(joint),
            };
            Ok((fwd, EveEntry::Entangled { joint, residual: None }))
        }
        _ => unreachable!(),
    }
}

/// Splits one photon off a multi-photon pulse.
pub fn tap_pns(p: Pulse) -> (Pulse, Option<EveEntry>) {
    match p.state {
        PulseState::Single(s) if p.photons >= 2 => {
            let fwd = Pulse {
                photons: p.photons - 1,
                ..p
            };
            (fwd, Some(EveEntry::Photon(s)))
        }
        _ => (p, None),
    }
}

impl Tap for Eve {
    fn intercept(&mut self, pulse: Pulse, rng: &mut Rng) -> Result<Pulse, QuantumError> {
        let slot = pulse.slot;
        let (fwd, entry) = match self.record.strategy {
            EveStrategy::NoEve => (pulse, None),
            EveStrategy::Opaque { fraction } => tap_opaque(pulse, fraction, self.record.mode, rng)?,
            ref s @ (EveStrategy::TranslucentUnitary(_) | EveStrategy::TranslucentEntangling(_)) => {
                let (f, e) = tap_translucent(pulse, s)?;
                (f, Some(e))
            }
            EveStrategy::PhotonNumberSplit => tap_pns(pulse),
        };
        if let Some(e) = entry {
            self.record.insert(slot, e);
        }
        Ok(fwd)
    }
}

/// One sifted slot as revealed by the public transcript.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SiftedSlot {
    pub slot: usize,
    /// The agreed BB84 basis; `None` for B92.
    pub basis: Option<Bb84Basis>,
}

/// Reconstructs the sifted slots (in raw-key order) from the sifting
/// messages of a transcript.
pub fn sifted_slots(t: &PublicTranscript) -> Vec<SiftedSlot> {
    if let Some(m) = t.last_with(Party::Bob, Tag::ConclusiveSlots) {
        return decode_indices(&m.payload)
            .into_iter()
            .map(|slot| SiftedSlot { slot, basis: None })
            .collect();
    }
    let (Some(ann), Some(verdicts)) = (
        t.last_with(Party::Bob, Tag::BasisAnnouncement),
        t.last_with(Party::Alice, Tag::BasisVerdicts),
    ) else {
        return Vec::new();
    };
    let bases = decode_bits(&ann.payload);
    let verdicts = decode_bits(&verdicts.payload);
    let lost: Vec<usize> = t
        .last_with(Party::Bob, Tag::NonReceptions)
        .map(|m| decode_indices(&m.payload))
        .unwrap_or_default();
    let n = bases.len() + lost.len();
    let mut lost_iter = lost.iter().peekable();
    let mut received = Vec::with_capacity(bases.len());
    for slot in 0..n {
        if lost_iter.peek() == Some(&&slot) {
            lost_iter.next();
        } else {
            received.push(slot);
        }
    }
    received
        .into_iter()
        .enumerate()
        .filter(|&(i, _)| verdicts.get(i) == 1)
        .map(|(i, slot)| SiftedSlot {
            slot,
            basis: Some(Bb84Basis::from_bit(bases.get(i))),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Guess {
    pub slot: usize,
    /// Index of the slot in the raw (sifted) key.
    pub sifted_index: usize,
    pub bit: u8,
    /// Probability that `bit` is Alice's bit, from Eve's point of view.
    pub confidence: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct EveGuess {
    pub guesses: Vec<Guess>,
}

fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

impl EveGuess {
    pub fn is_empty(&self) -> bool {
        self.guesses.is_empty()
    }

    /// Fraction of guesses equal to Alice's raw-key bit.
    pub fn accuracy(&self, raw_alice: &Bitstring) -> Option<f64> {
        if self.guesses.is_empty() {
            return None;
        }
        let hits = self
            .guesses
            .iter()
            .filter(|g| raw_alice.get(g.sifted_index) == g.bit)
            .count();
        Some(hits as f64 / self.guesses.len() as f64)
    }

    /// Eve's own estimate of how many raw-key bits she knows, in bits of
    /// information: `Σ 1 - h(confidence)`.
    pub fn known_bits(&self) -> f64 {
        self.guesses.iter().map(|g| 1.0 - binary_entropy(g.confidence)).sum()
    }
}

/// Minimum-error two-state discrimination: the basis whose `1` state is the
/// positive eigenvector of `|plus⟩⟨plus| - |minus⟩⟨minus|`, and its success
/// probability `(1 + sqrt(1 - |⟨plus|minus⟩|²)) / 2` for equal priors.
pub fn helstrom_basis(plus: &Ket2, minus: &Ket2) -> (Basis, f64) {
    let delta = Matrix2::projector(plus) - Matrix2::projector(minus);
    let eig = delta.hermitian_eigen();
    let basis = Basis::new(eig.vectors[0], eig.vectors[1]).expect("eigenvectors are orthonormal");
    let success = 0.5 * (1.0 + (1.0 - plus.overlap(minus)).max(0.0).sqrt());
    (basis, success)
}

/// Eve's guesses on the sifted slots she holds a record for.
pub fn eve_guess(record: &EveRecord, transcript: &PublicTranscript) -> EveGuess {
    let mut rng = Rng::new(record.guess_seed);
    let mut guesses = Vec::new();
    let theta = match record.mode {
        EveMode::B92 { theta } => theta,
        EveMode::Bb84 => 0.0,
    };
    let probe_hypotheses = match record.strategy {
        EveStrategy::TranslucentUnitary(u) => Some((u.probe_plus, u.probe_minus)),
        EveStrategy::TranslucentEntangling(e) => Some((e.probe_plus, e.probe_minus)),
        _ => None,
    };
    for (sifted_index, s) in sifted_slots(transcript).into_iter().enumerate() {
        let Some(entry) = record.entries.get(&s.slot) else {
            continue;
        };
        let guess = match *entry {
            EveEntry::MeasuredBb84 { basis, bit } => {
                let conf = if Some(basis) == s.basis { 1.0 } else { 0.5 };
                Some((bit, conf))
            }
            EveEntry::MeasuredB92 { direction, on_axis } => {
                let c2 = (2.0 * theta).cos().powi(2);
                let bit = match (direction, on_axis) {
                    (B92Direction::Plus, true) | (B92Direction::Minus, false) => 1,
                    _ => 0,
                };
                let conf = if on_axis { 1.0 / (1.0 + c2) } else { 1.0 };
                Some((bit, conf))
            }
            EveEntry::Photon(state) => match s.basis {
                Some(basis) => {
                    let b = basis.alphabet().basis().expect("BB84 alphabets are projective");
                    Some((measure_projective(&state, &b, &mut rng).0, 1.0))
                }
                None => {
                    let (b, conf) = helstrom_basis(&Ket2::polarized(theta), &Ket2::polarized(-theta));
                    Some((measure_projective(&state, &b, &mut rng).0, conf))
                }
            },
            EveEntry::Probe(probe)
            | EveEntry::Entangled {
                residual: Some(probe), ..
            } => probe_hypotheses.map(|(plus, minus)| {
                let (b, conf) = helstrom_basis(&plus, &minus);
                (measure_projective(&probe, &b, &mut rng).0, conf)
            }),
            EveEntry::Entangled { residual: None, .. } => None,
        };
        if let Some((bit, confidence)) = guess {
            guesses.push(Guess {
                slot: s.slot,
                sifted_index,
                bit,
                confidence,
            });
        }
    }
    EveGuess { guesses }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::vh_alphabet;
    use std::f64::consts::FRAC_PI_8;

    #[test]
    fn identity_interactions_validate() {
        validate_interaction(&EveStrategy::TranslucentUnitary(UnitaryProbe::identity(FRAC_PI_8))).unwrap();
        for s in [0.0, 0.3, 1.0] {
            validate_interaction(&EveStrategy::TranslucentUnitary(
                UnitaryProbe::with_strength(FRAC_PI_8, s).unwrap(),
            ))
            .unwrap();
            validate_interaction(&EveStrategy::TranslucentEntangling(
                EntanglingProbe::with_strength(FRAC_PI_8, s).unwrap(),
            ))
            .unwrap();
        }
    }

    #[test]
    fn orthogonal_probes_without_carrier_change_fail() {
        let e = EntanglingProbe {
            theta: FRAC_PI_8,
            a: r(1.0),
            b: r(0.0),
            carrier_plus: Ket2::polarized(FRAC_PI_8),
            carrier_minus: Ket2::polarized(-FRAC_PI_8),
            probe_plus: Ket2::zero(),
            probe_minus: Ket2::one(),
        };
        let err = validate_interaction(&EveStrategy::TranslucentEntangling(e)).unwrap_err();
        assert!(matches!(err, QuantumError::InteractionNotUnitary(_)));
        let e = EntanglingProbe {
            a: r(0.8),
            b: r(0.8),
            ..e
        };
        assert!(validate_interaction(&EveStrategy::TranslucentEntangling(e)).is_err());
    }

    #[test]
    fn strength_zero_is_identity_map() {
        let e = EntanglingProbe::with_strength(FRAC_PI_8, 0.0).unwrap();
        let (carrier, _) = Ket4::new(e.output(1)).unwrap().factor(1e-12).unwrap();
        assert!(carrier.same_ray(&Ket2::polarized(FRAC_PI_8), 1e-12));
        let u = UnitaryProbe::with_strength(FRAC_PI_8, 0.0).unwrap();
        assert!(u.carrier_minus.same_ray(&Ket2::polarized(-FRAC_PI_8), 1e-12));
        assert!(u.probe_plus.same_ray(&u.probe_minus, 1e-12));
    }

    #[test]
    fn translucent_identity_forwards_unchanged() {
        let s = EveStrategy::TranslucentUnitary(UnitaryProbe::identity(FRAC_PI_8));
        for angle in [FRAC_PI_8, -FRAC_PI_8] {
            let p = Pulse::single(3, 1, Ket2::polarized(angle));
            let (fwd, _) = tap_translucent(p, &s).unwrap();
            assert_eq!(fwd, p);
        }
        let off = Pulse::single(0, 1, Ket2::zero());
        assert_eq!(tap_translucent(off, &s).unwrap_err(), QuantumError::StateNotInAlphabet);
    }

    #[test]
    fn pns_splits_only_multi_photon_pulses() {
        let one = Pulse::single(0, 1, Ket2::zero());
        assert_eq!(tap_pns(one), (one, None));
        let two = Pulse::single(1, 2, Ket2::one());
        let (fwd, e) = tap_pns(two);
        assert_eq!(fwd.photons, 1);
        assert_eq!(e, Some(EveEntry::Photon(Ket2::one())));
    }

    #[test]
    fn opaque_zero_fraction_is_identity() {
        let mut rng = Rng::new(1);
        for slot in 0..1000 {
            let p = Pulse::single(slot, 1, vh_alphabet().encode((slot % 2) as u8));
            let (fwd, e) = tap_opaque(p, 0.0, EveMode::Bb84, &mut rng).unwrap();
            assert_eq!(fwd, p);
            assert!(e.is_none());
        }
    }

    #[test]
    fn helstrom_success_closed_form() {
        let theta = FRAC_PI_8;
        let (basis, p) = helstrom_basis(&Ket2::polarized(theta), &Ket2::polarized(-theta));
        assert!((p - 0.5 * (1.0 + (2.0 * theta).sin())).abs() < 1e-12);
        let direct =
            0.5 * (basis.probability(&Ket2::polarized(theta), 1) + basis.probability(&Ket2::polarized(-theta), 0));
        assert!((direct - p).abs() < 1e-12);
    }

    #[test]
    fn empty_transcript_gives_no_guesses() {
        let rec = EveRecord::new(EveMode::Bb84, EveStrategy::NoEve, 0);
        assert!(eve_guess(&rec, &PublicTranscript::new()).is_empty());
    }
}
