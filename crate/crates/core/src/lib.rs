//! Uhlmann–Jozsa fidelity for explicit density matrices.
//!
//! The crate evaluates `F(ρ, σ)` four ways (trace norm of `√ρ·√σ`, the
//! classic sandwich `√ρ·σ·√ρ`, the principal root of the open product `ρσ`,
//! and the eigenvalues of `ρσ`), checks that they agree, and times the
//! classic route against the eigenvalue route.
//!
//! * [`matcore`]: dense complex kernels and decompositions.
//! * [`states`]: validated density matrices and seeded random states.
//! * [`fidelity`]: the fidelity routes, sandwich spectra, overlap split.
//! * [`verify`]: block-structure checks, oracles, the property suite.
//! * [`bench`]: timing harness and speedup report.
//! * [`cli`]: matrix files, reports and the `uhlfid` command line.

pub mod bench;
pub mod cli;
pub mod error;
pub mod fidelity;
pub mod matcore;
pub mod states;
pub mod verify;

pub use faer::c64;

pub use crate::error::{Error, Result};
pub use crate::fidelity::{fidelity, FidelityMethod, FidelityResult};
pub use crate::matcore::{ComplexMatrix, DEFAULT_TOL};
pub use crate::states::{DensityMatrix, StateSeed};
