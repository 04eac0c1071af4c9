//! Projective and carrier-subsystem measurements.
//!
//! Outcomes are selected by inverting one `uniform()` draw against the
//! cumulative outcome probabilities, in outcome order (bit 0 first).

use super::ket::{Complex, Ket2, Ket4, ZERO_NORM_SQR};
use super::matrix::OP_TOL;
use crate::error::QuantumError;
use crate::rng::Rng;

/// An orthonormal pair of kets; `states[b]` is the state read as bit `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Basis {
    states: [Ket2; 2],
}

impl Basis {
    pub fn new(zero: Ket2, one: Ket2) -> Result<Self, QuantumError> {
        let deviation = zero.inner(&one).norm();
        if deviation > OP_TOL {
            return Err(QuantumError::BadBasis { deviation });
        }
        Ok(Self { states: [zero, one] })
    }

    /// The basis `{s⊥, s}` with `s` read as `one`.
    pub fn with_one(one: Ket2) -> Self {
        Self {
            states: [one.orthogonal(), one],
        }
    }

    /// The basis `{s, s⊥}` with `s` read as `zero`.
    pub fn with_zero(zero: Ket2) -> Self {
        Self {
            states: [zero, zero.orthogonal()],
        }
    }

    pub fn state(&self, bit: u8) -> Ket2 {
        self.states[bit as usize & 1]
    }

    /// Born probability of reading `bit` from `s`.
    pub fn probability(&self, s: &Ket2, bit: u8) -> f64 {
        self.state(bit).overlap(s)
    }
}

/// Draws an outcome index from a probability list by cumulative inversion.
/// Probabilities below `1e-12` are treated as exactly zero so that
/// impossible outcomes are never emitted.
pub(crate) fn sample_index(probs: &[f64], rng: &mut Rng) -> usize {
    let cleaned: Vec<f64> = probs.iter().map(|&p| if p < 1e-12 { 0.0 } else { p }).collect();
    let total: f64 = cleaned.iter().sum();
    let u = rng.uniform() * total;
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (i, p) in cleaned.iter().enumerate() {
        if *p > 0.0 {
            last_nonzero = i;
            acc += p;
            if u < acc {
                return i;
            }
        }
    }
    last_nonzero
}

/// Measures `s` in `basis`, returning the bit and the collapsed state.
pub fn measure_projective(s: &Ket2, basis: &Basis, rng: &mut Rng) -> (u8, Ket2) {
    let p = [basis.probability(s, 0), basis.probability(s, 1)];
    let b = sample_index(&p, rng) as u8;
    (b, basis.state(b))
}

/// `(⟨e|⊗I)|joint⟩`, the unnormalized probe left after projecting the carrier on `e`.
pub(crate) fn project_carrier(joint: &Ket4, e: &Ket2) -> [Complex; 2] {
    let c = joint.amplitudes();
    let [e0, e1] = e.amplitudes();
    [e0.conj() * c[0] + e1.conj() * c[2], e0.conj() * c[1] + e1.conj() * c[3]]
}

fn norm_sqr2(v: &[Complex; 2]) -> f64 {
    v[0].norm_sqr() + v[1].norm_sqr()
}

/// Measures the carrier half of a carrier ⊗ probe state in `basis`.
/// Returns the bit and the normalized probe state left behind.
pub fn measure_carrier(joint: &Ket4, basis: &Basis, rng: &mut Rng) -> Result<(u8, Ket2), QuantumError> {
    let parts = [
        project_carrier(joint, &basis.state(0)),
        project_carrier(joint, &basis.state(1)),
    ];
    let p = [norm_sqr2(&parts[0]), norm_sqr2(&parts[1])];
    let b = sample_index(&p, rng);
    if p[b] < ZERO_NORM_SQR {
        return Err(QuantumError::DegenerateProjection);
    }
    let probe = Ket2::new(parts[b][0], parts[b][1])?;
    Ok((b as u8, probe))
}
