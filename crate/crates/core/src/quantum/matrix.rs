use std::ops::{Add, Mul, Sub};

use super::ket::{r, Complex, Ket2, Ket4};
use crate::error::QuantumError;

/// Tolerance for unitarity, Hermiticity and positivity checks.
pub const OP_TOL: f64 = 1e-10;

/// Square complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix<const N: usize> {
    pub entries: [[Complex; N]; N],
}

pub type Matrix2 = Matrix<2>;
pub type Matrix4 = Matrix<4>;

impl<const N: usize> Matrix<N> {
    pub fn from_rows(entries: [[Complex; N]; N]) -> Self {
        Self { entries }
    }

    pub fn zeros() -> Self {
        Self {
            entries: [[r(0.0); N]; N],
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.entries[i][i] = r(1.0);
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.entries[i][j] = self.entries[j][i].conj();
            }
        }
        m
    }

    pub fn scale(&self, k: Complex) -> Self {
        let mut m = *self;
        m.entries.iter_mut().flatten().for_each(|x| *x *= k);
        m
    }

    pub fn trace(&self) -> Complex {
        (0..N).map(|i| self.entries[i][i]).sum()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Max entry of `|U†U - I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        (self.adjoint() * *self - Self::identity()).max_abs()
    }

    /// Max entry of `|A - A†|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        (*self - self.adjoint()).max_abs()
    }

    pub fn check_unitary(&self) -> Result<(), QuantumError> {
        let deviation = self.unitarity_deviation();
        if deviation <= OP_TOL {
            Ok(())
        } else {
            Err(QuantumError::NotUnitary { deviation })
        }
    }

    pub fn check_hermitian(&self) -> Result<(), QuantumError> {
        let deviation = self.hermiticity_deviation();
        if deviation <= OP_TOL {
            Ok(())
        } else {
            Err(QuantumError::NotHermitian { deviation })
        }
    }

    /// `A B - B A`.
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    fn apply_raw(&self, v: &[Complex; N]) -> [Complex; N] {
        let mut out = [r(0.0); N];
        for (i, row) in self.entries.iter().enumerate() {
            out[i] = row.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
        }
        out
    }
}

impl<const N: usize> Add for Matrix<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut m = self;
        for i in 0..N {
            for j in 0..N {
                m.entries[i][j] += rhs.entries[i][j];
            }
        }
        m
    }
}

impl<const N: usize> Sub for Matrix<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut m = self;
        for i in 0..N {
            for j in 0..N {
                m.entries[i][j] -= rhs.entries[i][j];
            }
        }
        m
    }
}

impl<const N: usize> Mul for Matrix<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.entries[i][j] = (0..N).map(|k| self.entries[i][k] * rhs.entries[k][j]).sum();
            }
        }
        m
    }
}

/// Eigen-decomposition of a 2×2 Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone, Copy)]
pub struct Eigen2 {
    pub values: [f64; 2],
    pub vectors: [Ket2; 2],
}

impl Matrix2 {
    /// Real rotation by `angle`: `[[cos, -sin], [sin, cos]]`.
    pub fn rotation(angle: f64) -> Self {
        let (s, co) = angle.sin_cos();
        Self::from_rows([[r(co), r(-s)], [r(s), r(co)]])
    }

    pub fn diag(a: f64, b: f64) -> Self {
        Self::from_rows([[r(a), r(0.0)], [r(0.0), r(b)]])
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &Ket2, v: &Ket2) -> Self {
        let a = u.amplitudes();
        let b = v.amplitudes();
        Self::from_rows([
            [a[0] * b[0].conj(), a[0] * b[1].conj()],
            [a[1] * b[0].conj(), a[1] * b[1].conj()],
        ])
    }

    pub fn projector(u: &Ket2) -> Self {
        Self::outer(u, u)
    }

    pub fn det(&self) -> Complex {
        let m = &self.entries;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// Positive semidefinite test for a Hermitian 2×2 via trace and determinant.
    pub fn is_positive(&self, tol: f64) -> bool {
        self.trace().re >= -tol && self.det().re >= -tol
    }

    /// `self ⊗ other`, carrier index major.
    pub fn kron(&self, other: &Matrix2) -> Matrix4 {
        let mut m = Matrix4::zeros();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        m.entries[2 * i + k][2 * j + l] = self.entries[i][j] * other.entries[k][l];
                    }
                }
            }
        }
        m
    }

    /// Matrix-vector product without a unitarity check.
    pub fn apply(&self, s: &Ket2) -> [Complex; 2] {
        self.apply_raw(&s.amplitudes())
    }

    /// `⟨u|self|v⟩`.
    pub fn sandwich(&self, u: &Ket2, v: &Ket2) -> Complex {
        let mv = self.apply(v);
        let a = u.amplitudes();
        a[0].conj() * mv[0] + a[1].conj() * mv[1]
    }

    /// Evolves `s` by this matrix, which must be unitary within `OP_TOL`.
    pub fn apply_unitary(&self, s: &Ket2) -> Result<Ket2, QuantumError> {
        self.check_unitary()?;
        Ok(Ket2::from_raw(self.apply(s)))
    }

    /// Closed-form eigensystem of a Hermitian 2×2 (only the Hermitian part
    /// of `self` is read).
    pub fn hermitian_eigen(&self) -> Eigen2 {
        let a = self.entries[0][0].re;
        let d = self.entries[1][1].re;
        let b = self.entries[0][1];
        let mean = 0.5 * (a + d);
        let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        let values = [mean - half_gap, mean + half_gap];
        if b.norm() < 1e-300 {
            let (lo, hi) = if a <= d {
                (Ket2::zero(), Ket2::one())
            } else {
                (Ket2::one(), Ket2::zero())
            };
            return Eigen2 {
                values,
                vectors: [lo, hi],
            };
        }
        // (A - λ)v = 0 with v = (b, λ - a).
        let vec_for = |lambda: f64| Ket2::new(b, r(lambda - a)).expect("nonzero b");
        let hi = vec_for(values[1]);
        let lo = hi.orthogonal();
        Eigen2 {
            values,
            vectors: [lo, hi],
        }
    }
}

impl Matrix4 {
    pub fn apply(&self, s: &Ket4) -> [Complex; 4] {
        self.apply_raw(&s.amplitudes())
    }

    pub fn apply_unitary(&self, s: &Ket4) -> Result<Ket4, QuantumError> {
        self.check_unitary()?;
        Ok(Ket4::from_raw(self.apply(s)))
    }

    pub fn expectation_raw(&self, s: &Ket4) -> Complex {
        let mv = self.apply(s);
        s.amplitudes().iter().zip(mv.iter()).map(|(a, b)| a.conj() * b).sum()
    }
}
