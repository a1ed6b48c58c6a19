//! The complex symmetric 2x2 Hamiltonian, its reduced parameters, exact
//! bi-orthogonal eigen-decomposition and branch-continuous evaluation along
//! parameter paths.
//!
//! The decomposition is organized around the reduced parameters
//! `E0 = (eps1 + eps2)/2` and `Z = (eps1 - eps2)/(2 omega)`:
//!
//! ```text
//! E_pm  = E0 pm omega sqrt(Z^2 + 1)
//! chi_pm = (1, -Z pm sqrt(Z^2 + 1))^T
//! ```
//!
//! Line representatives `chi_pm` and scale factors `c_pm`, `d_pm` are kept
//! separate: right sections are `Phi_pm = c_pm chi_pm`, left sections are
//! `Xi_pm = conj(d_pm) conj(chi_pm)`, and the bi-orthogonality
//! `chi_+^T chi_- = 0` holds identically in `Z`.

use alloc::vec::Vec;


use crate::complex2::{Mat2, Vec2, C64};
use crate::error::ModelError;

/// Sheet tag for `sqrt(Z^2 + 1)`: `Plus` is the principal branch, `Minus`
/// its negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchSign {
    Plus,
    Minus,
}

impl BranchSign {
    pub fn signum(self) -> f64 {
        match self {
            BranchSign::Plus => 1.0,
            BranchSign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            BranchSign::Plus => BranchSign::Minus,
            BranchSign::Minus => BranchSign::Plus,
        }
    }
}

/// The complex symmetric 2x2 Hamiltonian `[[eps1, omega], [omega, eps2]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hamiltonian2 {
    pub eps1: C64,
    pub eps2: C64,
    pub omega: C64,
}

/// Constructs the Hamiltonian from its matrix entries.
pub fn build_hamiltonian(eps1: C64, eps2: C64, omega: C64) -> Hamiltonian2 {
    Hamiltonian2 { eps1, eps2, omega }
}

impl Hamiltonian2 {
    pub fn new(eps1: C64, eps2: C64, omega: C64) -> Self {
        Hamiltonian2 { eps1, eps2, omega }
    }

    /// Builds the Hamiltonian from the reduced parameters:
    /// `eps1 = E0 + omega Z`, `eps2 = E0 - omega Z`.
    pub fn from_reduced(e0: C64, omega: C64, z: C64) -> Self {
        Hamiltonian2 {
            eps1: e0 + omega * z,
            eps2: e0 - omega * z,
            omega,
        }
    }

    pub fn matrix(&self) -> Mat2 {
        Mat2::new(self.eps1, self.omega, self.omega, self.eps2)
    }

    /// Mean level energy `E0 = (eps1 + eps2)/2`.
    pub fn e0(&self) -> C64 {
        (self.eps1 + self.eps2) * C64::new(0.5, 0.0)
    }

    /// Reduced detuning `Z = (eps1 - eps2)/(2 omega)`.
    pub fn z(&self) -> Result<C64, ModelError> {
        if self.is_diagonal() {
            return Err(ModelError::DegenerateCoupling);
        }
        Ok((self.eps1 - self.eps2) / (self.omega * C64::new(2.0, 0.0)))
    }

    pub fn is_diagonal(&self) -> bool {
        self.omega.norm_sqr() == 0.0
    }
}

/// Bi-orthogonal right/left eigen-data of a diagonalizable Hamiltonian.
///
/// `chi_plus`/`chi_minus` are line representatives; the scale factors that
/// turn them into sections are attached separately by the normalization
/// operations (the fiber/section split).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralPair {
    pub e_plus: C64,
    pub e_minus: C64,
    pub chi_plus: Vec2,
    pub chi_minus: Vec2,
    pub branch: BranchSign,
    /// The signed square root `s` actually used, `E_pm = E0 pm omega s`.
    /// `None` for the diagonal (`omega = 0`) case.
    pub sqrt_disc: Option<C64>,
    pub scales: Option<BasisScales>,
}

/// Right and left scale factors of the sections `Phi_pm = c_pm chi_pm`,
/// `Xi_pm = conj(d_pm) conj(chi_pm)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BasisScales {
    pub c_plus: C64,
    pub c_minus: C64,
    pub d_plus: C64,
    pub d_minus: C64,
}

impl SpectralPair {
    /// Affine representative of the "+" line (second component; the first is 1).
    pub fn w_plus(&self) -> C64 {
        self.chi_plus.0[1] / self.chi_plus.0[0]
    }

    pub fn w_minus(&self) -> C64 {
        self.chi_minus.0[1] / self.chi_minus.0[0]
    }

    /// Bilinear self-product `chi^T chi` of the selected branch.
    pub fn chi_dot(&self, branch: BranchSign) -> C64 {
        match branch {
            BranchSign::Plus => self.chi_plus.dot_t(&self.chi_plus),
            BranchSign::Minus => self.chi_minus.dot_t(&self.chi_minus),
        }
    }

    /// Right section `Phi_pm = c_pm chi_pm`; requires scales.
    pub fn phi(&self, branch: BranchSign) -> Option<Vec2> {
        let s = self.scales?;
        Some(match branch {
            BranchSign::Plus => self.chi_plus.scale(s.c_plus),
            BranchSign::Minus => self.chi_minus.scale(s.c_minus),
        })
    }

    /// Left section `Xi_pm = conj(d_pm) conj(chi_pm)`; requires scales.
    pub fn xi(&self, branch: BranchSign) -> Option<Vec2> {
        let s = self.scales?;
        Some(match branch {
            BranchSign::Plus => self.chi_plus.conj().scale(s.d_plus.conj()),
            BranchSign::Minus => self.chi_minus.conj().scale(s.d_minus.conj()),
        })
    }
}

/// Exact eigen-decomposition with the selected sheet of `sqrt(Z^2 + 1)`.
///
/// The affine representatives are evaluated in the cancellation-free form:
/// since `(s - Z)(s + Z) = 1` with `s = sqrt(Z^2 + 1)`, whichever of
/// `-Z pm s` loses digits is recovered as a reciprocal. This keeps
/// `chi_+^T chi_- = 0` at machine precision even for large `|Z|`.
///
/// A diagonal Hamiltonian (`omega = 0`) decomposes into the coordinate
/// basis; `Z` is undefined there rather than infinite.
pub fn eigen_decompose(
    h: &Hamiltonian2,
    branch: BranchSign,
    ep_tol: f64,
) -> Result<SpectralPair, ModelError> {
    if h.is_diagonal() {
        return Ok(SpectralPair {
            e_plus: h.eps1,
            e_minus: h.eps2,
            chi_plus: Vec2::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
            chi_minus: Vec2::new(C64::new(0.0, 0.0), C64::new(1.0, 0.0)),
            branch,
            sqrt_disc: None,
            scales: None,
        });
    }
    let z = h.z()?;
    let disc = z * z + C64::new(1.0, 0.0);
    if disc.norm() < ep_tol {
        return Err(ModelError::ExceptionalInput { z });
    }
    let s = disc.sqrt() * C64::new(branch.signum(), 0.0);
    let (w_plus, w_minus) = stable_affine_pair(z, s);
    Ok(SpectralPair {
        e_plus: h.e0() + h.omega * s,
        e_minus: h.e0() - h.omega * s,
        chi_plus: Vec2::new(C64::new(1.0, 0.0), w_plus),
        chi_minus: Vec2::new(C64::new(1.0, 0.0), w_minus),
        branch,
        sqrt_disc: Some(s),
        scales: None,
    })
}

/// `w_pm = -Z pm s` with the cancellation-prone one computed via
/// `(s - Z)(s + Z) = 1`.
fn stable_affine_pair(z: C64, s: C64) -> (C64, C64) {
    let sum = s + z; // w_minus = -(s + z)
    let diff = s - z; // w_plus = s - z
    if sum.norm() >= diff.norm() {
        // s - z may cancel; use 1/(s + z).
        (C64::new(1.0, 0.0) / sum, -sum)
    } else {
        (diff, -(C64::new(1.0, 0.0) / diff))
    }
}

/// Scale-factor gauge for [`normalize_diagonal_chart`].
///
/// The normalization `d_pm c_pm chi_pm^T chi_pm = 1` fixes only two of the
/// four scale parameters; the instantaneous picture closes the gap with
/// `d_pm = c_pm`, and `RightScales` leaves the residual freedom to the
/// caller.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormalizationGauge {
    /// `d_pm = c_pm`, so `c_pm^2 = 1/(chi^T chi)` with the principal root.
    Instantaneous,
    /// Caller-provided right scales; `d_pm = 1/(c_pm chi^T chi)` follows.
    RightScales { c_plus: C64, c_minus: C64 },
}

/// Attaches scale factors realizing `<Xi_pm|Phi_pm> = 1` in the diagonal
/// chart.
pub fn normalize_diagonal_chart(
    pair: &SpectralPair,
    gauge: NormalizationGauge,
    isotropy_tol: f64,
) -> Result<SpectralPair, ModelError> {
    let dot_plus = pair.chi_plus.dot_t(&pair.chi_plus);
    let dot_minus = pair.chi_minus.dot_t(&pair.chi_minus);
    if dot_plus.norm() < isotropy_tol || dot_minus.norm() < isotropy_tol {
        return Err(ModelError::IsotropicLine);
    }
    let one = C64::new(1.0, 0.0);
    let scales = match gauge {
        NormalizationGauge::Instantaneous => {
            let c_plus = (one / dot_plus).sqrt();
            let c_minus = (one / dot_minus).sqrt();
            BasisScales {
                c_plus,
                c_minus,
                d_plus: c_plus,
                d_minus: c_minus,
            }
        }
        NormalizationGauge::RightScales { c_plus, c_minus } => {
            if c_plus.norm() == 0.0 || c_minus.norm() == 0.0 {
                return Err(ModelError::ZeroScale);
            }
            BasisScales {
                c_plus,
                c_minus,
                d_plus: one / (c_plus * dot_plus),
                d_minus: one / (c_minus * dot_minus),
            }
        }
    };
    let mut out = *pair;
    out.scales = Some(scales);
    Ok(out)
}

/// Options for [`track_branch`].
#[derive(Clone, Copy, Debug)]
pub struct TrackOptions {
    pub ep_tol: f64,
    /// Largest accepted per-step jump of an affine representative.
    pub max_jump: f64,
}

impl Default for TrackOptions {
    fn default() -> Self {
        TrackOptions {
            ep_tol: crate::DEFAULT_EP_TOL,
            max_jump: 0.5,
        }
    }
}

/// Branch-continuous eigen-decomposition along a parameter path.
///
/// The branch at each point is chosen to minimize the jump of the affine
/// representatives against the previous point, which makes the eigenvalue
/// curves continuous samples of one Riemann-sheet traversal. Around a full
/// EP circle this ends on the opposite sheet: `E_+(end) = E_-(start)`.
pub fn track_branch(
    path: &[Hamiltonian2],
    opts: &TrackOptions,
) -> Result<Vec<SpectralPair>, ModelError> {
    let mut out = Vec::with_capacity(path.len());
    let mut branch = BranchSign::Plus;
    for (k, h) in path.iter().enumerate() {
        if h.is_diagonal() {
            return Err(ModelError::DegenerateCoupling);
        }
        let pair = eigen_decompose(h, branch, opts.ep_tol).map_err(|e| match e {
            ModelError::ExceptionalInput { .. } => ModelError::EpCollision { index: k },
            other => other,
        })?;
        if k == 0 {
            out.push(pair);
            continue;
        }
        let prev: &SpectralPair = &out[k - 1];
        let keep = step_distance(prev, &pair);
        let flipped = eigen_decompose(h, branch.flipped(), opts.ep_tol)
            .map_err(|e| match e {
                ModelError::ExceptionalInput { .. } => ModelError::EpCollision { index: k },
                other => other,
            })?;
        let flip = step_distance(prev, &flipped);
        let (chosen, dist) = if flip < keep {
            branch = branch.flipped();
            (flipped, flip)
        } else {
            (pair, keep)
        };
        if dist > opts.max_jump {
            return Err(ModelError::StepTooLarge { index: k });
        }
        out.push(chosen);
    }
    Ok(out)
}

/// Largest componentwise affine jump between two spectral pairs.
fn step_distance(a: &SpectralPair, b: &SpectralPair) -> f64 {
    let dp = (b.w_plus() - a.w_plus()).norm();
    let dm = (b.w_minus() - a.w_minus()).norm();
    dp.max(dm)
}
