//! Spectral analysis of non-Hermitian complex symmetric 2x2 Hamiltonians
//! near exceptional points (EPs).
//!
//! The crate covers the full pipeline from exact bi-orthogonal
//! eigen-decomposition over Jordan-chain machinery at the EP itself to the
//! geometric objects living on top of it: Puiseux expansions, geometric
//! phases and monodromy around an EP, the projective (CP^2) resolution of
//! the normalization divergence, phase rigidity as an EP distance measure,
//! and the PT-symmetric specialization with its C operator and Krein/CPT
//! inner products.
//!
//! The crate is `no_std` (with `alloc`); all operations are pure functions
//! of value inputs and safe to share between threads. IO, file formats and
//! the command line front end live in the companion `epkit` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod complex2;
pub mod error;
pub mod jordan;
pub mod model;
pub mod phase;
pub mod projective;
pub mod ptsym;
pub mod puiseux;
pub mod rigidity;

pub use complex2::{Mat2, Vec2, C64};
pub use error::{
    JordanError, ModelError, PathError, PhaseError, ProjectiveError, PtError, PuiseuxError,
    RigidityError,
};

/// Default tolerance on |Z^2 + 1| below which a configuration is treated as
/// an exceptional point and routed to the Jordan-chain machinery.
pub const DEFAULT_EP_TOL: f64 = 1e-9;
