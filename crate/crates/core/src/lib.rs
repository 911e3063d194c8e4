//! Gaussian states of bosonic modes, described by their covariance matrices.
//!
//! The crate covers symplectic spectra and the Williamson form, entropies,
//! partial transposition and negativities, two-mode standard forms,
//! Gaussian entanglement measures (entanglement of formation, contangle,
//! tangle), fully symmetric and bisymmetric multimode states, and
//! three-mode entanglement sharing.
//!
//! Conventions: xpxp ordering, ħ = 2, vacuum covariance matrix = identity,
//! natural logarithms.

pub mod error;
pub mod symplectic;
pub mod state;
pub mod sample;
pub mod separability;
pub mod optim;
pub mod measures;
pub mod symmetric;
pub mod tripartite;

pub use error::{Error, Result};
pub use state::{CovMatrix, GaussianState};
pub use symplectic::{SymplecticForm, SymplecticMap, SymplecticSpectrum};
