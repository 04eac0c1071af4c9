//! Quantum alphabets: which polarization carries which classical bit.

use std::f64::consts::FRAC_PI_4;
use std::fmt;

use serde::Serialize;

use crate::error::QuantumError;
use crate::quantum::povm::check_theta;
use crate::quantum::{build_povm, measure_projective, Basis, Ket2, PovmSet};
use crate::rng::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum AlphabetKind {
    /// ⊞: `1 ↦ |↕⟩`, `0 ↦ |↔⟩`.
    VH,
    /// ⊠: `1 ↦ |↗⟩`, `0 ↦ |↖⟩`.
    Oblique,
    /// `1 ↦ |θ₊⟩`, `0 ↦ |θ₋⟩`, states at ±θ from vertical.
    B92 { theta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumAlphabet {
    kind: AlphabetKind,
    states: [Ket2; 2],
}

pub fn vh_alphabet() -> QuantumAlphabet {
    QuantumAlphabet {
        kind: AlphabetKind::VH,
        states: [Ket2::one(), Ket2::zero()],
    }
}

pub fn oblique_alphabet() -> QuantumAlphabet {
    QuantumAlphabet {
        kind: AlphabetKind::Oblique,
        states: [Ket2::polarized(-FRAC_PI_4), Ket2::polarized(FRAC_PI_4)],
    }
}

pub fn b92_alphabet(theta: f64) -> Result<QuantumAlphabet, QuantumError> {
    check_theta(theta)?;
    Ok(QuantumAlphabet {
        kind: AlphabetKind::B92 { theta },
        states: [Ket2::polarized(-theta), Ket2::polarized(theta)],
    })
}

impl QuantumAlphabet {
    pub fn kind(&self) -> AlphabetKind {
        self.kind
    }

    pub fn encode(&self, bit: u8) -> Ket2 {
        self.states[bit as usize & 1]
    }

    pub fn is_projective(&self) -> bool {
        !matches!(self.kind, AlphabetKind::B92 { .. })
    }

    /// The measurement basis of a projective alphabet.
    pub fn basis(&self) -> Result<Basis, QuantumError> {
        if !self.is_projective() {
            return Err(QuantumError::NotProjectiveAlphabet(self.to_string()));
        }
        Basis::new(self.states[0], self.states[1])
    }

    /// The receiver matching a B92 alphabet.
    pub fn povm(&self) -> Result<PovmSet, QuantumError> {
        match self.kind {
            AlphabetKind::B92 { theta } => build_povm(theta),
            _ => build_povm(f64::NAN),
        }
    }

    /// The code bit of `s`, if `s` is one of the two code states (up to phase).
    pub fn code_bit(&self, s: &Ket2, tol: f64) -> Option<u8> {
        (0..2u8).find(|&b| self.encode(b).same_ray(s, tol))
    }
}

impl fmt::Display for QuantumAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            AlphabetKind::VH => f.write_str("VH"),
            AlphabetKind::Oblique => f.write_str("Oblique"),
            AlphabetKind::B92 { theta } => write!(f, "B92({theta})"),
        }
    }
}

/// The two BB84 alphabets; announced publicly as one bit, `1` for oblique.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Bb84Basis {
    VH,
    Oblique,
}

impl Bb84Basis {
    pub fn from_bit(bit: u8) -> Self {
        if bit & 1 == 1 {
            Bb84Basis::Oblique
        } else {
            Bb84Basis::VH
        }
    }

    pub fn bit(self) -> u8 {
        (self == Bb84Basis::Oblique) as u8
    }

    pub fn alphabet(self) -> QuantumAlphabet {
        match self {
            Bb84Basis::VH => vh_alphabet(),
            Bb84Basis::Oblique => oblique_alphabet(),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Bb84Basis::VH => '+',
            Bb84Basis::Oblique => 'x',
        }
    }
}

/// Measures `s` in the alphabet's basis and returns the bit it reads as.
pub fn decode_by_basis(alphabet: &QuantumAlphabet, s: &Ket2, rng: &mut Rng) -> Result<u8, QuantumError> {
    let basis = alphabet.basis()?;
    Ok(measure_projective(s, &basis, rng).0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_8};

    fn close(a: &Ket2, re0: f64, re1: f64) -> bool {
        (a.a0().re - re0).abs() < 1e-12 && (a.a1().re - re1).abs() < 1e-12 && a.a0().im == 0.0 && a.a1().im == 0.0
    }

    #[test]
    fn code_states() {
        assert!(close(&vh_alphabet().encode(1), 1.0, 0.0));
        assert!(close(&vh_alphabet().encode(0), 0.0, 1.0));
        assert!(close(&oblique_alphabet().encode(1), FRAC_1_SQRT_2, FRAC_1_SQRT_2));
        assert!(close(&oblique_alphabet().encode(0), FRAC_1_SQRT_2, -FRAC_1_SQRT_2));
        let b = b92_alphabet(FRAC_PI_8).unwrap();
        assert!(close(&b.encode(1), FRAC_PI_8.cos(), FRAC_PI_8.sin()));
        assert!(close(&b.encode(0), FRAC_PI_8.cos(), -FRAC_PI_8.sin()));
    }

    #[test]
    fn overlaps() {
        for a in [vh_alphabet(), oblique_alphabet()] {
            assert!(a.encode(0).inner(&a.encode(1)).norm() < 1e-15);
        }
        for theta in [0.1, FRAC_PI_8, 0.7] {
            let a = b92_alphabet(theta).unwrap();
            let ov = a.encode(0).inner(&a.encode(1));
            assert!((ov.re - (2.0 * theta).cos()).abs() < 1e-12 && ov.im == 0.0);
        }
    }

    #[test]
    fn b92_range_checked() {
        assert!(matches!(b92_alphabet(0.0), Err(QuantumError::ThetaOutOfRange { .. })));
        assert!(b92_alphabet(FRAC_PI_4).is_err());
    }

    #[test]
    fn decoding() {
        let mut rng = Rng::new(5);
        let vh = vh_alphabet();
        let ob = oblique_alphabet();
        for _ in 0..1000 {
            assert_eq!(decode_by_basis(&vh, &vh.encode(1), &mut rng).unwrap(), 1);
            assert_eq!(decode_by_basis(&ob, &ob.encode(0), &mut rng).unwrap(), 0);
        }
        let n = 100_000;
        let ones: usize = (0..n)
            .map(|_| decode_by_basis(&vh, &ob.encode(1), &mut rng).unwrap() as usize)
            .sum();
        assert!((ones as f64 / n as f64 - 0.5).abs() < 0.01);
        let b = b92_alphabet(FRAC_PI_8).unwrap();
        assert!(matches!(
            decode_by_basis(&b, &b.encode(1), &mut rng),
            Err(QuantumError::NotProjectiveAlphabet(_))
        ));
    }
}
