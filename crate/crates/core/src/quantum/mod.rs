//! Exact state-vector arithmetic for one qubit and for a qubit paired with a
//! probe qubit.

pub mod ket;
pub mod matrix;
pub mod measure;
pub mod observable;
pub mod povm;

pub use ket::{inner, make_qubit, tensor, Complex, Ket2, Ket4, StateVector};
pub use matrix::{Matrix, Matrix2, Matrix4};
pub use measure::{measure_carrier, measure_projective, Basis};
pub use observable::{expectation, uncertainty_check, UncertaintyCheck};
pub use povm::{build_povm, measure_povm, measure_povm_carrier, PovmOutcome, PovmSet};
