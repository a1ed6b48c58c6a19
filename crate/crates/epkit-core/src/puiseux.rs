//! Leading-order Puiseux expansions near an EP, scale-factor fitting
//! between the root chart and the diagonal chart, and a numerical check of
//! the convergence order.
//!
//! With `Z = Z_c + eps` the eigenvalues and line vectors branch in
//! `eps^{1/2}`:
//!
//! ```text
//! E_pm   = E0 pm eps^{1/2} dE,           dE = omega sqrt(2 Z_c)
//! Phi_pm = Phi_0 + eps^{1/2} (b0 Phi_0 + b1 Phi_1)
//! b1 = pm dE,   b0 = pm Z_c dE / (2 omega)
//! ```
//!
//! and the conjugated left vectors expand with the same coefficients.

use alloc::vec::Vec;

// Float is shadowed by the std inherent methods in test builds.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;

use crate::complex2::{Vec2, C64};
use crate::error::PuiseuxError;
use crate::jordan::RootChain;
use crate::model::{eigen_decompose, BranchSign, Hamiltonian2};

/// Above this |eps| the leading-order expansions are used outside their
/// design range; callers should treat results as qualitative only.
pub const ASYMPTOTIC_VALIDITY_BOUND: f64 = 1e-2;

/// Leading Puiseux data at an EP. The stored `b0`, `b1` belong to the "+"
/// branch; the "-" branch negates both.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PuiseuxExpansion {
    pub z_c: C64,
    pub omega: C64,
    /// `dE = omega sqrt(2 Z_c)` (principal root).
    pub delta_e: C64,
    pub b0: C64,
    pub b1: C64,
}

impl PuiseuxExpansion {
    pub fn b0(&self, branch: BranchSign) -> C64 {
        self.b0 * C64::new(branch.signum(), 0.0)
    }

    pub fn b1(&self, branch: BranchSign) -> C64 {
        self.b1 * C64::new(branch.signum(), 0.0)
    }

    /// Predicted eigenvalue `E0 pm sqrt_eps dE`. The square-root branch of
    /// `eps` is owned by the caller (unwrapped along a loop when `eps`
    /// comes from one).
    pub fn eigenvalue(&self, e0: C64, branch: BranchSign, sqrt_eps: C64) -> C64 {
        e0 + sqrt_eps * self.delta_e * C64::new(branch.signum(), 0.0)
    }

    /// Predicted right section `Phi_0 + sqrt_eps (b0 Phi_0 + b1 Phi_1)`.
    pub fn right_section(&self, chain: &RootChain, branch: BranchSign, sqrt_eps: C64) -> Vec2 {
        let b0 = self.b0(branch);
        let b1 = self.b1(branch);
        chain.phi0 + (chain.phi0.scale(b0) + chain.phi1.scale(b1)).scale(sqrt_eps)
    }

    /// Predicted conjugated left section
    /// `Xi_0* + sqrt_eps (b0 Xi_0* + b1 Xi_1*)`.
    pub fn left_section_conj(&self, chain: &RootChain, branch: BranchSign, sqrt_eps: C64) -> Vec2 {
        let b0 = self.b0(branch);
        let b1 = self.b1(branch);
        chain.xi0.conj() + (chain.xi0.conj().scale(b0) + chain.xi1.conj().scale(b1)).scale(sqrt_eps)
    }

    /// Affine representative of the predicted line,
    /// `w_pm = -Z_c pm sqrt_eps sqrt(2 Z_c)`.
    pub fn affine_line(&self, branch: BranchSign, sqrt_eps: C64) -> C64 {
        let root = (self.z_c * C64::new(2.0, 0.0)).sqrt();
        -self.z_c + sqrt_eps * root * C64::new(branch.signum(), 0.0)
    }
}

/// Leading eigenvalue expansion `E_pm = E0 pm eps^{1/2} omega sqrt(2 Z_c)`.
pub fn expand_eigenvalues(chain: &RootChain, omega: C64) -> PuiseuxExpansion {
    let delta_e = omega * (chain.z_c * C64::new(2.0, 0.0)).sqrt();
    PuiseuxExpansion {
        z_c: chain.z_c,
        omega,
        delta_e,
        b0: chain.z_c * delta_e / (omega * C64::new(2.0, 0.0)),
        b1: delta_e,
    }
}

/// Eigenvector expansion in the chain basis; same data as
/// [`expand_eigenvalues`], exposed under the vector-facing name together
/// with the section predictors on [`PuiseuxExpansion`].
pub fn expand_eigenvectors(chain: &RootChain, omega: C64) -> PuiseuxExpansion {
    expand_eigenvalues(chain, omega)
}

/// Which chart owns the primary scale factors in [`fit_scale_factors`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScaleFit {
    /// Root scales given; diagonal-chart scales derived:
    /// `c_pm = sigma q c0`, `d_pm = sigma* q Z_c d0`.
    RootPrimary { c0: C64, d0: C64 },
    /// Diagonal-chart scales given; root scales derived per branch.
    DiagonalPrimary {
        c_plus: C64,
        c_minus: C64,
        d_plus: C64,
        d_minus: C64,
    },
}

/// Scale factors in both charts after fitting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FittedScales {
    pub c_plus: C64,
    pub c_minus: C64,
    pub d_plus: C64,
    pub d_minus: C64,
    pub c0_plus: C64,
    pub c0_minus: C64,
    pub d0_plus: C64,
    pub d0_minus: C64,
}

/// Fits the fiber sections between the root chart and the diagonal chart.
pub fn fit_scale_factors(chain: &RootChain, fit: ScaleFit) -> Result<FittedScales, PuiseuxError> {
    let sq = chain.sigma * chain.q;
    let sqz = chain.sigma.conj() * chain.q * chain.z_c;
    match fit {
        ScaleFit::RootPrimary { c0, d0 } => {
            if c0.norm() == 0.0 || d0.norm() == 0.0 {
                return Err(PuiseuxError::ZeroScale);
            }
            let c = sq * c0;
            let d = sqz * d0;
            Ok(FittedScales {
                c_plus: c,
                c_minus: c,
                d_plus: d,
                d_minus: d,
                c0_plus: c0,
                c0_minus: c0,
                d0_plus: d0,
                d0_minus: d0,
            })
        }
        ScaleFit::DiagonalPrimary {
            c_plus,
            c_minus,
            d_plus,
            d_minus,
        } => {
            if [c_plus, c_minus, d_plus, d_minus]
                .iter()
                .any(|s| s.norm() == 0.0)
            {
                return Err(PuiseuxError::ZeroScale);
            }
            Ok(FittedScales {
                c_plus,
                c_minus,
                d_plus,
                d_minus,
                c0_plus: c_plus / sq,
                c0_minus: c_minus / sq,
                d0_plus: d_plus / sqz,
                d0_minus: d_minus / sqz,
            })
        }
    }
}

/// The rigid instantaneous root-normalized scales: imposing `c_pm = d_pm`
/// and `d0 c0 = 1` forces `c0 = kappa in {+1, -1}` and
/// `c_pm = d_pm = kappa sigma q`, independent of `eps`.
pub fn rigid_instantaneous_scales(chain: &RootChain, kappa_negative: bool) -> FittedScales {
    let kappa = if kappa_negative {
        C64::new(-1.0, 0.0)
    } else {
        C64::new(1.0, 0.0)
    };
    // With |sigma|^2 = 1/2 and sigma*/sigma = -i mu, sigma* q Z_c = sigma q.
    fit_scale_factors(
        chain,
        ScaleFit::RootPrimary {
            c0: kappa,
            d0: kappa,
        },
    )
    .expect("kappa is nonzero")
}

/// Leading behavior of the bi-orthogonal inner product,
/// `<Xi_pm|Phi_pm> = 2 b1 d0 c0 eps^{1/2} + o(eps^{1/2})` (equivalently
/// `(2 b1 / (omega Z_c)) d_pm c_pm eps^{1/2}`).
pub fn inner_product_asymptote(
    expansion: &PuiseuxExpansion,
    branch: BranchSign,
    d0c0: C64,
    sqrt_eps: C64,
) -> C64 {
    expansion.b1(branch) * d0c0 * sqrt_eps * C64::new(2.0, 0.0)
}

/// Log-log remainder slopes of the eigenvalue and line predictions over an
/// `eps` grid.
#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    /// Fitted slope of `log ||E_exact - E_pred||` vs `log |eps|`
    /// (about 3/2 for this model).
    pub eigenvalue_slope: f64,
    /// Fitted slope for the affine line representatives (about 1).
    pub line_slope: f64,
    /// Per-point data: `(|eps|, eigenvalue remainder, line remainder)`.
    pub points: Vec<(f64, f64, f64)>,
}

/// Compares exact eigen-data of `H(Z_c + eps)` against the Puiseux
/// predictions over a real `eps` grid and fits remainder slopes.
pub fn verify_convergence_order(
    chain: &RootChain,
    e0: C64,
    omega: C64,
    eps_grid: &[f64],
    ep_tol: f64,
) -> Result<ConvergenceReport, PuiseuxError> {
    if eps_grid.len() < 2 {
        return Err(PuiseuxError::TooFewPoints);
    }
    let expansion = expand_eigenvalues(chain, omega);
    let mut points = Vec::with_capacity(eps_grid.len());
    for (k, &eps) in eps_grid.iter().enumerate() {
        let eps_c = C64::new(eps, 0.0);
        let h = Hamiltonian2::from_reduced(e0, omega, chain.z_c + eps_c);
        let exact = eigen_decompose(&h, BranchSign::Plus, ep_tol)
            .map_err(|_| PuiseuxError::EpCollision { index: k })?;
        let sqrt_eps = eps_c.sqrt();
        let pred_plus = expansion.eigenvalue(e0, BranchSign::Plus, sqrt_eps);
        let pred_minus = expansion.eigenvalue(e0, BranchSign::Minus, sqrt_eps);
        let ev_rem = set_distance(
            (exact.e_plus, exact.e_minus),
            (pred_plus, pred_minus),
        );
        let line_rem = set_distance(
            (exact.w_plus(), exact.w_minus()),
            (
                expansion.affine_line(BranchSign::Plus, sqrt_eps),
                expansion.affine_line(BranchSign::Minus, sqrt_eps),
            ),
        );
        points.push((eps.abs(), ev_rem, line_rem));
    }
    let eigenvalue_slope = loglog_slope(points.iter().map(|p| (p.0, p.1)))?;
    let line_slope = loglog_slope(points.iter().map(|p| (p.0, p.2)))?;
    Ok(ConvergenceReport {
        eigenvalue_slope,
        line_slope,
        points,
    })
}

/// Optimal pairing distance between two unordered pairs.
fn set_distance(a: (C64, C64), b: (C64, C64)) -> f64 {
    let direct = (a.0 - b.0).norm().max((a.1 - b.1).norm());
    let swapped = (a.0 - b.1).norm().max((a.1 - b.0).norm());
    direct.min(swapped)
}

/// Least-squares slope of `ln y` against `ln x`.
fn loglog_slope(data: impl Iterator<Item = (f64, f64)>) -> Result<f64, PuiseuxError> {
    let pts: Vec<(f64, f64)> = data
        .filter(|&(x, y)| x > 0.0 && y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(PuiseuxError::TooFewPoints);
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx < 1e-24 {
        return Err(PuiseuxError::DegenerateFit);
    }
    Ok(sxy / sxx)
}

/// Log-spaced grid from `start` down/up to `stop` with `n` points.
pub fn log_grid(start: f64, stop: f64, n: usize) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return alloc::vec![start];
    }
    let la = start.ln();
    let lb = stop.ln();
    (0..n)
        .map(|k| (la + (lb - la) * k as f64 / (n - 1) as f64).exp())
        .collect()
}
