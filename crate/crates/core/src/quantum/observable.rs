use super::ket::Ket2;
use super::matrix::Matrix2;
use crate::error::QuantumError;

/// `⟨s|obs|s⟩` for a Hermitian observable.
pub fn expectation(obs: &Matrix2, s: &Ket2) -> Result<f64, QuantumError> {
    obs.check_hermitian()?;
    Ok(obs.sandwich(s, s).re)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyCheck {
    /// `⟨(ΔA)²⟩⟨(ΔB)²⟩`
    pub lhs: f64,
    /// `¼ |⟨[A, B]⟩|²`
    pub rhs: f64,
    pub holds: bool,
}

fn variance(obs: &Matrix2, s: &Ket2) -> f64 {
    let mean = obs.sandwich(s, s).re;
    let shifted = *obs - Matrix2::identity().scale(mean.into());
    (shifted * shifted).sandwich(s, s).re
}

/// Evaluates both sides of the uncertainty inequality for `A`, `B` at `s`.
pub fn uncertainty_check(a: &Matrix2, b: &Matrix2, s: &Ket2) -> Result<UncertaintyCheck, QuantumError> {
    a.check_hermitian()?;
    b.check_hermitian()?;
    let lhs = variance(a, s) * variance(b, s);
    let rhs = 0.25 * a.commutator(b).sandwich(s, s).norm_sqr();
    Ok(UncertaintyCheck {
        lhs,
        rhs,
        holds: lhs >= rhs - 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::ket::{c, r};

    fn flip() -> Matrix2 {
        Matrix2::from_rows([[r(0.0), r(1.0)], [r(1.0), r(0.0)]])
    }

    #[test]
    fn expectation_values() {
        let z = Matrix2::diag(1.0, -1.0);
        assert_eq!(expectation(&z, &Ket2::zero()).unwrap(), 1.0);
        let d = Ket2::real(1.0, 1.0).unwrap();
        assert!(expectation(&z, &d).unwrap().abs() < 1e-15);
        let bad = Matrix2::from_rows([[r(0.0), r(1.0)], [r(0.0), r(0.0)]]);
        assert!(matches!(expectation(&bad, &d), Err(QuantumError::NotHermitian { .. })));
    }

    #[test]
    fn same_observable_has_zero_rhs() {
        let h = Matrix2::from_rows([[r(1.0), c(0.5, 0.2)], [c(0.5, -0.2), r(-2.0)]]);
        let u = uncertainty_check(&h, &h, &Ket2::polarized(0.7)).unwrap();
        assert!(u.rhs.abs() < 1e-15);
        assert!(u.holds);
    }

    #[test]
    fn flip_and_phase_on_vertical() {
        // ⟨(ΔA)²⟩ = 1, ⟨(ΔB)²⟩ = 0, [A, B] = [[0,-2],[2,0]] has zero mean on |0⟩.
        let u = uncertainty_check(&flip(), &Matrix2::diag(1.0, -1.0), &Ket2::zero()).unwrap();
        assert!((variance(&flip(), &Ket2::zero()) - 1.0).abs() < 1e-15);
        assert_eq!(u.lhs, 0.0);
        assert_eq!(u.rhs, 0.0);
        assert!(u.holds);
    }

    #[test]
    fn non_hermitian_rejected() {
        let bad = Matrix2::from_rows([[r(0.0), r(2.0)], [r(0.0), r(0.0)]]);
        assert!(uncertainty_check(&bad, &flip(), &Ket2::zero()).is_err());
    }
}
