//! The three-outcome receiver for the two-state alphabet `{|θ₊⟩, |θ₋⟩}`.
//!
//! ```text
//! A₊ = (1 - |θ₋⟩⟨θ₋|) / (1 + ⟨θ₊|θ₋⟩)
//! A₋ = (1 - |θ₊⟩⟨θ₊|) / (1 + ⟨θ₊|θ₋⟩)
//! A? = 1 - A₊ - A₋
//! ```
//!
//! `A₊` never fires on `|θ₋⟩` and `A₋` never fires on `|θ₊⟩`, so every
//! conclusive outcome identifies the sent state with certainty.

use std::f64::consts::FRAC_PI_4;

use serde::Serialize;

use super::ket::{r, Ket2, Ket4, ZERO_NORM_SQR};
use super::matrix::{Matrix2, OP_TOL};
use super::measure::{project_carrier, sample_index};
use crate::error::QuantumError;
use crate::rng::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PovmOutcome {
    Zero,
    One,
    Inconclusive,
}

impl PovmOutcome {
    /// Sampling order used for cumulative inversion.
    pub const ORDER: [PovmOutcome; 3] = [PovmOutcome::Zero, PovmOutcome::One, PovmOutcome::Inconclusive];

    pub fn bit(self) -> Option<u8> {
        match self {
            PovmOutcome::Zero => Some(0),
            PovmOutcome::One => Some(1),
            PovmOutcome::Inconclusive => None,
        }
    }
}

pub fn check_theta(theta: f64) -> Result<(), QuantumError> {
    if theta > 0.0 && theta < FRAC_PI_4 {
        Ok(())
    } else {
        Err(QuantumError::ThetaOutOfRange { theta })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PovmSet {
    pub a_plus: Matrix2,
    pub a_minus: Matrix2,
    pub a_q: Matrix2,
    pub theta: f64,
}

/// Builds the unambiguous-discrimination receiver for angle `theta`.
pub fn build_povm(theta: f64) -> Result<PovmSet, QuantumError> {
    check_theta(theta)?;
    let plus = Ket2::polarized(theta);
    let minus = Ket2::polarized(-theta);
    let denom = r(1.0) + plus.inner(&minus);
    let id = Matrix2::identity();
    let a_plus = (id - Matrix2::projector(&minus)).scale(denom.inv());
    let a_minus = (id - Matrix2::projector(&plus)).scale(denom.inv());
    let a_q = id - a_plus - a_minus;
    Ok(PovmSet {
        a_plus,
        a_minus,
        a_q,
        theta,
    })
}

impl PovmSet {
    /// Elements in sampling order (Zero, One, Inconclusive).
    pub fn elements(&self) -> [&Matrix2; 3] {
        [&self.a_minus, &self.a_plus, &self.a_q]
    }

    /// Max entry of `|A₊ + A₋ + A? - I|`.
    pub fn completeness_deviation(&self) -> f64 {
        (self.a_plus + self.a_minus + self.a_q - Matrix2::identity()).max_abs()
    }

    /// Checks completeness, Hermiticity and positivity within `OP_TOL`.
    pub fn validate(&self) -> Result<(), QuantumError> {
        let dev = self.completeness_deviation();
        if dev > OP_TOL {
            return Err(QuantumError::Incomplete { deviation: dev });
        }
        for e in self.elements() {
            e.check_hermitian()?;
            if !e.is_positive(OP_TOL) {
                return Err(QuantumError::NotPositive {
                    min: e.det().re.min(e.trace().re),
                });
            }
        }
        Ok(())
    }

    /// `⟨s|A_i|s⟩` for each outcome, in sampling order.
    pub fn probabilities(&self, s: &Ket2) -> [f64; 3] {
        self.elements().map(|e| e.sandwich(s, s).re.max(0.0))
    }

    /// `⟨Ψ|(A_i ⊗ I)|Ψ⟩` for each outcome on the carrier of `joint`.
    pub fn carrier_probabilities(&self, joint: &Ket4) -> [f64; 3] {
        let id = Matrix2::identity();
        self.elements().map(|e| e.kron(&id).expectation_raw(joint).re.max(0.0))
    }
}

/// Samples a receiver outcome for `s`.
pub fn measure_povm(s: &Ket2, p: &PovmSet, rng: &mut Rng) -> PovmOutcome {
    PovmOutcome::ORDER[sample_index(&p.probabilities(s), rng)]
}

/// Rank-one factor `w |e⟩⟨e|` of a POVM element.
fn rank_one(element: &Matrix2) -> Result<(f64, Ket2), QuantumError> {
    let eig = element.hermitian_eigen();
    if eig.values[0].abs() > OP_TOL {
        return Err(QuantumError::NotRankOne);
    }
    Ok((eig.values[1], eig.vectors[1]))
}

/// Applies the receiver to the carrier of a carrier ⊗ probe state.
///
/// Every element of the two-state receiver is rank one, `A_i = w_i |e_i⟩⟨e_i|`,
/// so the probe left behind by outcome `i` is the pure state
/// `(⟨e_i| ⊗ I)|Ψ⟩`, normalized.
pub fn measure_povm_carrier(joint: &Ket4, p: &PovmSet, rng: &mut Rng) -> Result<(PovmOutcome, Ket2), QuantumError> {
    let probs = p.carrier_probabilities(joint);
    let i = sample_index(&probs, rng);
    let (_, e) = rank_one(p.elements()[i])?;
    let probe = project_carrier(joint, &e);
    if probe[0].norm_sqr() + probe[1].norm_sqr() < ZERO_NORM_SQR {
        return Err(QuantumError::DegenerateProjection);
    }
    Ok((PovmOutcome::ORDER[i], Ket2::new(probe[0], probe[1])?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::ket::tensor;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_8};

    #[test]
    fn rejects_out_of_range_theta() {
        for t in [0.0, -0.1, FRAC_PI_4, 1.0, f64::NAN] {
            assert!(matches!(build_povm(t), Err(QuantumError::ThetaOutOfRange { .. })));
        }
    }

    #[test]
    fn pi_over_eight_values() {
        let p = build_povm(FRAC_PI_8).unwrap();
        let plus = Ket2::polarized(FRAC_PI_8);
        assert!(p.a_minus.sandwich(&plus, &plus).norm() < 1e-12);
        let got = p.a_plus.sandwich(&plus, &plus).re;
        assert!((got - (1.0 - FRAC_1_SQRT_2)).abs() < 1e-12);
        assert!(p.completeness_deviation() < 1e-10);
        p.validate().unwrap();
    }

    #[test]
    fn elements_are_rank_one() {
        for t in [0.05, 0.3, FRAC_PI_8, 0.7] {
            let p = build_povm(t).unwrap();
            for e in p.elements() {
                assert!(e.det().norm() < 1e-12, "theta {t}");
            }
        }
    }

    #[test]
    fn minus_never_reads_one() {
        let p = build_povm(FRAC_PI_8).unwrap();
        let minus = Ket2::polarized(-FRAC_PI_8);
        let mut rng = Rng::new(11);
        for _ in 0..100_000 {
            assert_ne!(measure_povm(&minus, &p, &mut rng), PovmOutcome::One);
        }
    }

    #[test]
    fn carrier_measurement_of_product_keeps_probe() {
        let p = build_povm(FRAC_PI_8).unwrap();
        let psi = Ket2::polarized(1.0);
        let joint = tensor(&Ket2::polarized(FRAC_PI_8), &psi);
        let single = p.probabilities(&Ket2::polarized(FRAC_PI_8));
        let paired = p.carrier_probabilities(&joint);
        for (a, b) in single.iter().zip(paired.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
        let mut rng = Rng::new(12);
        for _ in 0..1000 {
            let (o, probe) = measure_povm_carrier(&joint, &p, &mut rng).unwrap();
            assert_ne!(o, PovmOutcome::Zero);
            assert!(probe.same_ray(&psi, 1e-10));
        }
    }
}
