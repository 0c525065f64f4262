//! Exact operator algebra on the lattice of quantum numbers. Every operator
//! acts on basis states Ψ_{n₀n₁n₂n₃} with coefficients in ℚ[ω]; images that
//! would need a negative quantum number are zero.

mod algebra;
mod ladder;
mod operator;
mod vector;
mod window;

pub use algebra::{
    alpha, check_identity, check_m1_minus, globally_interior, identity_interior, interior_states, preserves_energy,
    Conventions, Identity, IdentityForm, LatticeAlgebra, M1Variant, PMinusConvention, Residual,
};
pub use ladder::{ladder_action, xi1_closed_form, xi_action, xi_steps, ClosedFormReading, LadderImage, LadderKind};
pub use operator::{LatticeOperator, TripleConvention};
pub use vector::LatticeVector;
pub use window::{independence_smoke_test, rank, window_rows, IndependenceReport};

use thiserror::Error;

use crate::model::QuantumState;
use crate::numcore::Rational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("ladder {0} is not defined on that slot")]
    KindSlotMismatch(LadderKind),
    #[error("Ξ index {0} out of range 1..=3")]
    XiIndex(usize),
    #[error("M1- is only defined for k = (2,1,1)")]
    RequiresK211,
    #[error("A0 = {a0} makes a denominator of M1- vanish at {state}")]
    SingularDenominator { state: QuantumState, a0: Rational },
}
