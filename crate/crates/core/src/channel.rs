//! The one-way quantum channel.
//!
//! A pulse passes through three effects in a fixed order: the eavesdropper's
//! tap, then a 90° polarization rotation with probability `flip_p` (one draw
//! per pulse, applied to every photon), then loss with probability `loss_p`.
//! Each of the two Bernoulli draws consumes one random word even when its
//! probability is zero, so changing a probability never shifts the stream.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{ProtocolError, QuantumError};
use crate::quantum::{Ket2, Ket4, Matrix2};
use crate::rng::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseModel {
    pub flip_p: f64,
    pub loss_p: f64,
    pub multi_p: f64,
}

impl NoiseModel {
    pub const NONE: NoiseModel = NoiseModel {
        flip_p: 0.0,
        loss_p: 0.0,
        multi_p: 0.0,
    };

    pub fn new(flip_p: f64, loss_p: f64, multi_p: f64) -> Result<Self, ProtocolError> {
        let m = NoiseModel {
            flip_p,
            loss_p,
            multi_p,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), ProtocolError> {
        for (name, p) in [("flip", self.flip_p), ("loss", self.loss_p), ("multi", self.multi_p)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(ProtocolError::InvalidConfig(format!(
                    "{name} probability {p} is outside [0, 1]"
                )));
            }
        }
        Ok(())
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self::NONE
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseState {
    /// Every photon of the pulse carries this polarization.
    Single(Ket2),
    /// One photon entangled with an eavesdropper's probe.
    Joint(Ket4),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse {
    pub slot: usize,
    pub photons: u32,
    pub state: PulseState,
}

impl Pulse {
    pub fn single(slot: usize, photons: u32, state: Ket2) -> Self {
        Self {
            slot,
            photons,
            state: PulseState::Single(state),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Transmission {
    Delivered(Pulse),
    Lost,
}

/// Something sitting on the quantum channel between sender and receiver.
pub trait Tap {
    fn intercept(&mut self, pulse: Pulse, rng: &mut Rng) -> Result<Pulse, QuantumError>;
}

/// Prepares the pulse for `slot`: two photons with probability `multi_p`.
pub fn emit_pulse(slot: usize, state: Ket2, noise: &NoiseModel, rng: &mut Rng) -> Pulse {
    let photons = if rng.bernoulli(noise.multi_p) { 2 } else { 1 };
    Pulse::single(slot, photons, state)
}

fn rotate(state: PulseState) -> PulseState {
    let quarter = Matrix2::rotation(FRAC_PI_2);
    match state {
        PulseState::Single(s) => {
            let [a, b] = quarter.apply(&s);
            PulseState::Single(Ket2::new(a, b).expect("rotation preserves norm"))
        }
        PulseState::Joint(j) => {
            let amps = quarter.kron(&Matrix2::identity()).apply(&j);
            PulseState::Joint(Ket4::new(amps).expect("rotation preserves norm"))
        }
    }
}

/// Sends a pulse across the channel: tap, then flip, then loss.
pub fn transmit(
    pulse: Pulse,
    noise: &NoiseModel,
    tap: Option<&mut dyn Tap>,
    rng: &mut Rng,
) -> Result<Transmission, QuantumError> {
    let mut pulse = match tap {
        Some(t) => t.intercept(pulse, rng)?,
        None => pulse,
    };
    if rng.bernoulli(noise.flip_p) {
        pulse.state = rotate(pulse.state);
    }
    if rng.bernoulli(noise.loss_p) {
        return Ok(Transmission::Lost);
    }
    Ok(Transmission::Delivered(pulse))
}
