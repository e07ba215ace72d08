//! Hermitian bilinear concomitants of complex electromagnetic bivectors.
//!
//! A complex bivector `F^{αβ}` is stored as its pair of complex 3-vectors
//! `(E, B)`. From it the crate builds every tensor bilinear in `F̄` and `F`
//! that is invariant under `F ↦ e^{iφ}F`, reduces them to an irreducible set,
//! and checks the construction: exactly in Gaussian-rational arithmetic, or in
//! `f64` for signals and Lorentz transformations.
//!
//! Conventions: signature `(+,−,−,−)`, `ε^{0123} = −1`, `F^{i0} = E_i`,
//! `F^{32} = B_1`, `F^{13} = B_2`, `F^{21} = B_3`.

pub mod bivector;
pub mod concomitants;
pub mod error;
pub mod scalar;
pub mod signal;
pub mod tensor;
pub mod verify;

pub use bivector::{
    lorentz_transform, random_bivector, random_real_bivector, Bivector, LorentzTransform, SelfDualParts, Sixtor,
};
pub use concomitants::{compute, eb_oracle, real_reference, Concomitant, ConcomitantSet, Convention, InvariantScalars};
pub use error::{BivectorError, ConcomitantError, SignalError, TensorError, VerifyError};
pub use scalar::{Backend, Complex64, GaussianRational, Rational, Scalar};
pub use tensor::{SmallTensor, Variance};
pub use verify::{run_suite, PropertyReport, SuiteConfig};
