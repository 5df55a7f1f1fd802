//! Covariant estimation of an unknown phase and of an unknown SU(2) action.
//!
//! - [`su2`]: group elements, Haar sampling, characters, irrep matrices,
//!   the gate-fidelity distance and tensor-power multiplicities.
//! - [`phase`]: covariant phase estimation, its error functional and optimal
//!   inputs.
//! - [`su2_estimation`]: block-amplitude designs for `n` uses of an SU(2)
//!   action, with and without an external reference.
//! - [`integrals`]: quadrature of the character integrals both problems rest on.
//! - [`sim`]: Monte Carlo replay of the protocols.
//! - [`tridiag`]: symmetric tridiagonal eigen-solver.

pub mod error;
pub mod integrals;
pub mod phase;
pub mod sim;
pub mod su2;
pub mod su2_estimation;
pub mod tridiag;

pub use error::{Error, Result};
pub use phase::{PhaseDesign, PhaseInputState, SeedMatrix};
pub use sim::{SimConfig, SimResult};
pub use su2::{GroupElement, IrrepLabel, MultiplicitySpectrum};
pub use su2_estimation::{FeasibilityReport, ReferenceMode, Su2BlockAmplitudes, Su2Design};
