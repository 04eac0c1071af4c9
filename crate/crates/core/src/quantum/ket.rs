use std::fmt;

use num_complex::Complex64;

use crate::error::QuantumError;

pub type Complex = Complex64;

/// Tolerance on the norm of a constructed ket.
pub const NORM_TOL: f64 = 1e-12;
/// Squared norms below this are treated as the zero vector.
pub const ZERO_NORM_SQR: f64 = 1e-24;

#[cfg(test)]
pub(crate) fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub(crate) fn r(re: f64) -> Complex {
    Complex::new(re, 0.0)
}

/// A unit vector in the two-dimensional state space of one qubit.
///
/// Polarization at angle φ from vertical is `(cos φ, sin φ)`: vertical is
/// `(1, 0)`, horizontal `(0, 1)`.
#[derive(Clone, Copy, PartialEq)]
pub struct Ket2 {
    amps: [Complex; 2],
}

impl Ket2 {
    /// Normalizes `(a0, a1)` to a unit ket.
    pub fn new(a0: Complex, a1: Complex) -> Result<Self, QuantumError> {
        let n2 = a0.norm_sqr() + a1.norm_sqr();
        if !n2.is_finite() || n2 < ZERO_NORM_SQR {
            return Err(QuantumError::ZeroVector);
        }
        let n = n2.sqrt();
        Ok(Self { amps: [a0 / n, a1 / n] })
    }

    pub fn real(a0: f64, a1: f64) -> Result<Self, QuantumError> {
        Self::new(r(a0), r(a1))
    }

    /// Linear polarization at `angle` radians from vertical.
    pub fn polarized(angle: f64) -> Self {
        Self {
            amps: [r(angle.cos()), r(angle.sin())],
        }
    }

    pub fn zero() -> Self {
        Self::polarized(0.0)
    }

    pub fn one() -> Self {
        Self { amps: [r(0.0), r(1.0)] }
    }

    pub fn a0(&self) -> Complex {
        self.amps[0]
    }

    pub fn a1(&self) -> Complex {
        self.amps[1]
    }

    pub fn amplitudes(&self) -> [Complex; 2] {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        (self.amps[0].norm_sqr() + self.amps[1].norm_sqr()).sqrt()
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Ket2) -> Complex {
        self.amps[0].conj() * other.amps[0] + self.amps[1].conj() * other.amps[1]
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &Ket2) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// The unit ket orthogonal to this one, `(-conj a1, conj a0)`.
    pub fn orthogonal(&self) -> Ket2 {
        Ket2 {
            amps: [-self.amps[1].conj(), self.amps[0].conj()],
        }
    }

    /// Equal up to a global phase, within `tol` on the overlap.
    pub fn same_ray(&self, other: &Ket2, tol: f64) -> bool {
        (1.0 - self.overlap(other)).abs() <= tol
    }

    pub(crate) fn from_raw(amps: [Complex; 2]) -> Self {
        Self { amps }
    }
}

impl fmt::Debug for Ket2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ket2({}, {})", self.amps[0], self.amps[1])
    }
}

/// A unit vector over carrier ⊗ probe; index `2 * carrier_bit + probe_bit`.
#[derive(Clone, Copy, PartialEq)]
pub struct Ket4 {
    amps: [Complex; 4],
}

impl Ket4 {
    pub fn new(amps: [Complex; 4]) -> Result<Self, QuantumError> {
        let n2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !n2.is_finite() || n2 < ZERO_NORM_SQR {
            return Err(QuantumError::ZeroVector);
        }
        let n = n2.sqrt();
        Ok(Self {
            amps: amps.map(|a| a / n),
        })
    }

    pub fn amplitudes(&self) -> [Complex; 4] {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &Ket4) -> Complex {
        self.amps.iter().zip(other.amps.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    /// Factors the state as carrier ⊗ probe when it is a product state
    /// (within `tol` on the 2×2 amplitude determinant).
    pub fn factor(&self, tol: f64) -> Option<(Ket2, Ket2)> {
        let [c00, c01, c10, c11] = self.amps;
        if (c00 * c11 - c01 * c10).norm() > tol {
            return None;
        }
        // Pick the carrier row with the larger weight to read the probe off.
        let row0 = c00.norm_sqr() + c01.norm_sqr();
        let row1 = c10.norm_sqr() + c11.norm_sqr();
        let probe = if row0 >= row1 {
            Ket2::new(c00, c01).ok()?
        } else {
            Ket2::new(c10, c11).ok()?
        };
        let carrier = Ket2::new(
            probe.a0().conj() * c00 + probe.a1().conj() * c01,
            probe.a0().conj() * c10 + probe.a1().conj() * c11,
        )
        .ok()?;
        Some((carrier, probe))
    }

    pub(crate) fn from_raw(amps: [Complex; 4]) -> Self {
        Self { amps }
    }
}

impl fmt::Debug for Ket4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.amps;
        write!(f, "Ket4({a}, {b}, {c}, {d})")
    }
}

/// Builds a qubit from two amplitudes, normalizing them.
pub fn make_qubit(a0: Complex, a1: Complex) -> Result<Ket2, QuantumError> {
    Ket2::new(a0, a1)
}

/// Carrier ⊗ probe, `c[2i + j] = carrier_i * probe_j`.
pub fn tensor(carrier: &Ket2, probe: &Ket2) -> Ket4 {
    let [x0, x1] = carrier.amps;
    let [y0, y1] = probe.amps;
    Ket4::from_raw([x0 * y0, x0 * y1, x1 * y0, x1 * y1])
}

/// A ket of either supported dimension, for callers that only know the
/// dimension at run time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateVector {
    Qubit(Ket2),
    Pair(Ket4),
}

impl StateVector {
    pub fn dim(&self) -> usize {
        match self {
            StateVector::Qubit(_) => 2,
            StateVector::Pair(_) => 4,
        }
    }
}

/// `⟨u|v⟩` for kets of matching dimension.
pub fn inner(u: &StateVector, v: &StateVector) -> Result<Complex, QuantumError> {
    match (u, v) {
        (StateVector::Qubit(a), StateVector::Qubit(b)) => Ok(a.inner(b)),
        (StateVector::Pair(a), StateVector::Pair(b)) => Ok(a.inner(b)),
        _ => Err(QuantumError::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_8};

    fn close(a: Complex, b: Complex) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn make_qubit_normalizes() {
        let k = make_qubit(r(1.0), r(0.0)).unwrap();
        assert!(close(k.a0(), r(1.0)) && close(k.a1(), r(0.0)));
        let k = make_qubit(r(2.0), r(0.0)).unwrap();
        assert!(close(k.a0(), r(1.0)) && close(k.a1(), r(0.0)));
        let k = make_qubit(r(1.0), r(1.0)).unwrap();
        assert!(close(k.a0(), r(FRAC_1_SQRT_2)) && close(k.a1(), r(FRAC_1_SQRT_2)));
        let k = make_qubit(c(3.0, 4.0), c(0.0, -12.0)).unwrap();
        assert!((k.norm() - 1.0).abs() < NORM_TOL);
    }

    #[test]
    fn zero_vector_rejected() {
        assert_eq!(make_qubit(r(0.0), r(0.0)), Err(QuantumError::ZeroVector));
        assert_eq!(make_qubit(r(1e-13), r(0.0)), Err(QuantumError::ZeroVector));
        assert_eq!(Ket4::new([r(0.0); 4]).unwrap_err(), QuantumError::ZeroVector);
        assert!(make_qubit(r(f64::NAN), r(1.0)).is_err());
    }

    #[test]
    fn inner_products() {
        assert!(close(Ket2::zero().inner(&Ket2::one()), r(0.0)));
        let plus = Ket2::polarized(FRAC_PI_8);
        let minus = Ket2::polarized(-FRAC_PI_8);
        // (cos θ, sin θ)·(cos θ, -sin θ) = cos²θ - sin²θ = cos 2θ = 1/√2 at θ = π/8.
        assert!(close(plus.inner(&minus), r(FRAC_1_SQRT_2)));
        let e = inner(&StateVector::Qubit(plus), &StateVector::Pair(tensor(&plus, &minus)));
        assert_eq!(e, Err(QuantumError::DimensionMismatch { left: 2, right: 4 }));
    }

    #[test]
    fn tensor_basis_and_norm() {
        let t = tensor(&Ket2::zero(), &Ket2::zero());
        assert_eq!(t.amplitudes(), [r(1.0), r(0.0), r(0.0), r(0.0)]);
        let t = tensor(&Ket2::zero(), &Ket2::one());
        assert_eq!(t.amplitudes(), [r(0.0), r(1.0), r(0.0), r(0.0)]);
        let a = make_qubit(c(0.3, 0.1), c(-0.2, 0.9)).unwrap();
        let b = make_qubit(c(1.0, -1.0), c(0.5, 0.0)).unwrap();
        assert!((tensor(&a, &b).norm() - 1.0).abs() < NORM_TOL);
    }

    #[test]
    fn factor_recovers_product() {
        let a = make_qubit(c(0.3, 0.1), c(-0.2, 0.9)).unwrap();
        let b = make_qubit(c(1.0, -1.0), c(0.5, 0.0)).unwrap();
        let (x, y) = tensor(&a, &b).factor(1e-10).unwrap();
        assert!(x.same_ray(&a, 1e-10) && y.same_ray(&b, 1e-10));
        let bell = Ket4::new([r(1.0), r(0.0), r(0.0), r(1.0)]).unwrap();
        assert!(bell.factor(1e-10).is_none());
    }

    #[test]
    fn orthogonal_complement() {
        let a = make_qubit(c(0.3, 0.1), c(-0.2, 0.9)).unwrap();
        assert!(a.inner(&a.orthogonal()).norm() < 1e-15);
        assert!((a.orthogonal().norm() - 1.0).abs() < NORM_TOL);
    }
}
