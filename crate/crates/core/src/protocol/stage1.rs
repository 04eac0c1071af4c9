//! Stage 1: quantum transmission over the one-way channel.

use serde::Serialize;

use crate::alphabet::{b92_alphabet, Bb84Basis};
use crate::channel::{emit_pulse, transmit, NoiseModel, PulseState, Tap, Transmission};
use crate::error::QuantumError;
use crate::eve::Eve;
use crate::quantum::{measure_carrier, measure_povm, measure_povm_carrier, measure_projective, PovmOutcome};
use crate::rng::Rng;

/// Bob's reading of one delivered pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Reading {
    Bb84 { basis: Bb84Basis, bit: u8 },
    B92(PovmOutcome),
}

impl Reading {
    /// The bit Bob holds, if any.
    pub fn bit(&self) -> Option<u8> {
        match *self {
            Reading::Bb84 { bit, .. } => Some(bit),
            Reading::B92(o) => o.bit(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SlotRecord {
    pub alice_bit: u8,
    /// Alice's alphabet (BB84 only).
    pub alice_basis: Option<Bb84Basis>,
    /// `None` when nothing was received.
    pub bob: Option<Reading>,
}

impl SlotRecord {
    pub fn received(&self) -> bool {
        self.bob.is_some()
    }
}

/// Both parties' private Stage 1 data, one entry per slot.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Stage1Record {
    pub slots: Vec<SlotRecord>,
}

impl Stage1Record {
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn received_count(&self) -> usize {
        self.slots.iter().filter(|s| s.received()).count()
    }
}

fn send(
    slot: usize,
    state: crate::quantum::Ket2,
    noise: &NoiseModel,
    eve: &mut Option<&mut Eve>,
    rng: &mut Rng,
) -> Result<Transmission, QuantumError> {
    let pulse = emit_pulse(slot, state, noise, rng);
    let tap = eve.as_deref_mut().map(|e| e as &mut dyn Tap);
    transmit(pulse, noise, tap, rng)
}

/// Per slot: Alice flips a coin for the bit and one for the alphabet, sends,
/// and Bob picks his alphabet by coin for every delivered pulse.
pub fn run_stage1_bb84(
    n_pulses: usize,
    noise: &NoiseModel,
    mut eve: Option<&mut Eve>,
    rng: &mut Rng,
) -> Result<Stage1Record, QuantumError> {
    let mut slots = Vec::with_capacity(n_pulses);
    for slot in 0..n_pulses {
        let alice_bit = rng.bit();
        let alice_basis = Bb84Basis::from_bit(rng.bit());
        let state = alice_basis.alphabet().encode(alice_bit);
        let bob = match send(slot, state, noise, &mut eve, rng)? {
            Transmission::Lost => None,
            Transmission::Delivered(p) => {
                let basis = Bb84Basis::from_bit(rng.bit());
                let b = basis.alphabet().basis()?;
                let bit = match p.state {
                    PulseState::Single(s) => measure_projective(&s, &b, rng).0,
                    PulseState::Joint(j) => {
                        let (bit, residual) = measure_carrier(&j, &b, rng)?;
                        if let Some(e) = eve.as_deref_mut() {
                            e.settle(slot, residual);
                        }
                        bit
                    }
                };
                Some(Reading::Bb84 { basis, bit })
            }
        };
        slots.push(SlotRecord {
            alice_bit,
            alice_basis: Some(alice_basis),
            bob,
        });
    }
    Ok(Stage1Record { slots })
}

/// Per slot: Alice flips a coin for the bit and sends the matching B92 state;
/// Bob applies the POVM receiver to every delivered pulse.
pub fn run_stage1_b92(
    n_pulses: usize,
    theta: f64,
    noise: &NoiseModel,
    mut eve: Option<&mut Eve>,
    rng: &mut Rng,
) -> Result<Stage1Record, QuantumError> {
    let alphabet = b92_alphabet(theta)?;
    let povm = alphabet.povm()?;
    let mut slots = Vec::with_capacity(n_pulses);
    for slot in 0..n_pulses {
        let alice_bit = rng.bit();
        let bob = match send(slot, alphabet.encode(alice_bit), noise, &mut eve, rng)? {
            Transmission::Lost => None,
            Transmission::Delivered(p) => {
                let outcome = match p.state {
                    PulseState::Single(s) => measure_povm(&s, &povm, rng),
                    PulseState::Joint(j) => {
                        let (o, residual) = measure_povm_carrier(&j, &povm, rng)?;
                        if let Some(e) = eve.as_deref_mut() {
                            e.settle(slot, residual);
                        }
                        o
                    }
                };
                Some(Reading::B92(outcome))
            }
        };
        slots.push(SlotRecord {
            alice_bit,
            alice_basis: None,
            bob,
        });
    }
    Ok(Stage1Record { slots })
}
