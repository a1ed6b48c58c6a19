//! Error types, one enum per subsystem.

use core::fmt;

use crate::complex2::C64;

/// Errors from Hamiltonian construction, eigen-decomposition and branch
/// tracking.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModelError {
    /// `omega = 0`: the reduced parameter Z is undefined.
    DegenerateCoupling,
    /// `|Z^2 + 1|` below the EP tolerance; the configuration must be routed
    /// to the Jordan-chain machinery instead of the diagonal chart.
    ExceptionalInput { z: C64 },
    /// `chi^T chi = 0` within tolerance: normalization is impossible in the
    /// diagonal chart.
    IsotropicLine,
    /// A caller-provided scale factor was zero.
    ZeroScale,
    /// A path point triggered `ExceptionalInput` during branch tracking.
    EpCollision { index: usize },
    /// Neither branch assignment keeps the discrete eigenvector jump below
    /// the configured bound.
    StepTooLarge { index: usize },
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::DegenerateCoupling => write!(f, "coupling omega is zero; Z is undefined"),
            ModelError::ExceptionalInput { z } => write!(
                f,
                "Z = {z} is at an exceptional point (|Z^2+1| under tolerance)"
            ),
            ModelError::IsotropicLine => {
                write!(f, "chi^T chi = 0: line is isotropic, no diagonal-chart normalization")
            }
            ModelError::ZeroScale => write!(f, "scale factor must be nonzero"),
            ModelError::EpCollision { index } => {
                write!(f, "path point {index} collides with an exceptional point")
            }
            ModelError::StepTooLarge { index } => write!(
                f,
                "eigenvector jump at path step {index} exceeds the continuity bound"
            ),
        }
    }
}

impl core::error::Error for ModelError {}

/// Errors from EP detection and Jordan-chain construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum JordanError {
    DegenerateCoupling,
    /// The Hamiltonian is not at an EP within the given tolerance.
    NotAtEP { z: C64 },
    ZeroScale,
}

impl fmt::Display for JordanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JordanError::DegenerateCoupling => write!(f, "coupling omega is zero"),
            JordanError::NotAtEP { z } => write!(f, "Z = {z} is not at an exceptional point"),
            JordanError::ZeroScale => write!(f, "chain scale factors must be nonzero"),
        }
    }
}

impl core::error::Error for JordanError {}

/// Errors from Puiseux expansion utilities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PuiseuxError {
    ZeroScale,
    /// A grid point fell inside the EP tolerance ball.
    EpCollision { index: usize },
    /// Zero-variance abscissa: the log-log fit is degenerate.
    DegenerateFit,
    /// Fewer than two usable grid points.
    TooFewPoints,
}

impl fmt::Display for PuiseuxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PuiseuxError::ZeroScale => write!(f, "scale factors must be nonzero"),
            PuiseuxError::EpCollision { index } => {
                write!(f, "grid point {index} is inside the EP tolerance ball")
            }
            PuiseuxError::DegenerateFit => {
                write!(f, "degenerate fit: abscissa has zero variance")
            }
            PuiseuxError::TooFewPoints => write!(f, "need at least two grid points"),
        }
    }
}

impl core::error::Error for PuiseuxError {}

/// Errors from loop-path construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PathError {
    /// Consecutive samples differ in angle by |dalpha| >= pi; the winding
    /// would be ambiguous.
    AngularAliasing { index: usize },
    /// A sample sits exactly on the loop center.
    ZeroRadius { index: usize },
    TooFewSamples,
}

impl fmt::Display for PathError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathError::AngularAliasing { index } => {
                write!(f, "angular step at sample {index} is >= pi (aliasing)")
            }
            PathError::ZeroRadius { index } => write!(f, "sample {index} has eps = 0"),
            PathError::TooFewSamples => write!(f, "need at least two path samples"),
        }
    }
}

impl core::error::Error for PathError {}

/// Errors from geometric-phase and transport computations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PhaseError {
    /// `1 + w^2 = 0` within tolerance: the connection form is singular.
    IsotropicPoint,
    /// A path point collided with an EP.
    EpCollision { index: usize },
    /// Sample doubling did not reach the requested tolerance.
    NoConvergence { samples: usize },
    /// The loop is not closed but the operation requires a cycle.
    OpenPath,
    /// Bi-orthogonal denominator under tolerance along the trajectory.
    VanishingOverlap { index: usize },
    /// The frame matrix Phi(0) is numerically singular.
    SingularFrame,
    /// Local integration error exceeded the step tolerance.
    StepRejected { step: usize },
    /// Phase extraction hit a vanishing first component.
    ZeroComponent { step: usize },
    /// Branch tracking failed along the loop.
    Tracking(ModelError),
}

impl fmt::Display for PhaseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhaseError::IsotropicPoint => write!(f, "1 + w^2 = 0: connection form singular"),
            PhaseError::EpCollision { index } => {
                write!(f, "loop sample {index} collides with an exceptional point")
            }
            PhaseError::NoConvergence { samples } => write!(
                f,
                "quadrature did not converge after refinement to {samples} samples"
            ),
            PhaseError::OpenPath => write!(f, "operation requires a closed loop"),
            PhaseError::VanishingOverlap { index } => {
                write!(f, "bi-orthogonal overlap vanishes at sample {index}")
            }
            PhaseError::SingularFrame => write!(f, "initial section frame is singular"),
            PhaseError::StepRejected { step } => {
                write!(f, "local error overflow at integration step {step}")
            }
            PhaseError::ZeroComponent { step } => {
                write!(f, "vanishing first component at step {step}; phase undefined")
            }
            PhaseError::Tracking(e) => write!(f, "branch tracking failed: {e}"),
        }
    }
}

impl core::error::Error for PhaseError {}

impl From<ModelError> for PhaseError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::EpCollision { index } => PhaseError::EpCollision { index },
            other => PhaseError::Tracking(other),
        }
    }
}

/// Errors from projective-space operations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProjectiveError {
    ZeroVector,
    ZeroScale,
    /// Segment distance rho must be positive.
    NonPositiveDistance,
}

impl fmt::Display for ProjectiveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectiveError::ZeroVector => write!(f, "cannot embed the zero vector"),
            ProjectiveError::ZeroScale => write!(f, "scale factor must be nonzero"),
            ProjectiveError::NonPositiveDistance => write!(f, "rho must be positive"),
        }
    }
}

impl core::error::Error for ProjectiveError {}

/// Errors from phase-rigidity computations and landscape scans.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RigidityError {
    /// `Phi^T Phi != 1` beyond tolerance.
    NotNormalized,
    /// A grid point fell inside the EP tolerance ball.
    EpCollision { index: usize },
    /// Axis bindings are inconsistent (duplicate field, empty axis, ...).
    InvalidBinding,
}

impl fmt::Display for RigidityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RigidityError::NotNormalized => {
                write!(f, "vector is not bilinearly normalized (Phi^T Phi != 1)")
            }
            RigidityError::EpCollision { index } => {
                write!(f, "grid point {index} is inside the EP tolerance ball")
            }
            RigidityError::InvalidBinding => write!(f, "invalid axis binding"),
        }
    }
}

impl core::error::Error for RigidityError {}

/// Errors from the PT-symmetric specialization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PtError {
    /// s = 0: the model degenerates.
    ZeroCoupling,
    /// The C operator is singular at the EP (cos(alpha) = 0).
    EpSingularC,
    /// The requested construction assumes the exact PT phase.
    BrokenPhase,
}

impl fmt::Display for PtError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PtError::ZeroCoupling => write!(f, "coupling s must be nonzero"),
            PtError::EpSingularC => {
                write!(f, "C operator is singular at the exceptional point")
            }
            PtError::BrokenPhase => {
                write!(f, "operation requires the exact PT-symmetric phase")
            }
        }
    }
}

impl core::error::Error for PtError {}
