//! Numerical toolkit for maximal representations into `Sp(2n, R)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`sp`] – symplectic membership, Cartan and Jordan projections, root and
//!   weight functionals, and the symmetric-space distance.
//! * [`wedge`] – the exterior power `Λⁿ R²ⁿ`: minors, Plücker vectors, the
//!   pairing `ω′`, the Hodge star and annihilators.
//! * [`positivity`] – Lagrangians, transversality, chart coordinates and
//!   certification of positive tuples.
//! * [`flags`] – partial flags in wedge space, Iwasawa cocycles and Gromov
//!   products.
//! * [`hyperbolic`] – Poincaré disk geometry, shadows and orbit enumeration.
//! * [`representations`] – Fuchsian presets, the diagonal and interleaved
//!   embeddings, and limit-map sampling.
//! * [`entropy`] – functional spectra, critical-exponent estimators and the
//!   orbit-counting experiments.
//!
//! Data-parallel maps run on rayon when the `parallel` feature is enabled
//! (the default); [`exec::ExecMode`] selects the path explicitly.

pub mod entropy;
pub mod error;
pub mod exec;
pub mod flags;
pub mod hyperbolic;
pub mod linalg;
pub mod positivity;
pub mod random;
pub mod representations;
pub mod sp;
pub mod wedge;

pub use error::{Error, Result};
