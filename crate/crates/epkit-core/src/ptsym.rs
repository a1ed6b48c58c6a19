//! PT-symmetric 2x2 specialization: construction and symmetry
//! classification, the dynamical C operator, Krein and CPT inner products,
//! the EP locus, and the projective conic in the PT setting.
//!
//! `H = [[r e^{i theta}, s], [s, r e^{-i theta}]]` commutes with the
//! antilinear operator PT (P the swap matrix, T complex conjugation).
//! With `sin(alpha) = (r/s) sin(theta)` the model reduces to `Z = i sin
//! alpha`, so EPs sit exactly at `alpha_c = pm pi/2 + 2 N pi` and the exact
//! PT phase is the segment `Z in (-i, i)` of the imaginary axis.

// Float is shadowed by the std inherent methods in test builds.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;

use crate::complex2::{Mat2, Vec2, C64};
use crate::error::PtError;
use crate::model::{BranchSign, Hamiltonian2};
use crate::projective::{ProjectivePoint, DEFAULT_CHART_ETA};

/// Symmetry class of a PT model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PtClass {
    /// Real spectrum, PT-invariant eigenvectors (`s^2 > r^2 sin^2 theta`).
    Exact,
    /// Complex-conjugate eigenvalue pair (spontaneously broken symmetry).
    Broken,
    /// On the EP locus within tolerance.
    ExceptionalPoint,
}

/// The PT-symmetric matrix model in its `(r, s, theta)` parametrization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PTModel {
    pub r_param: f64,
    pub s_param: f64,
    pub theta: f64,
    /// `alpha` with `sin(alpha) = (r/s) sin(theta)`; real in the exact
    /// phase, continued by the principal complex arcsine when broken.
    pub alpha: C64,
    pub class: PtClass,
}

/// EP classification threshold on `|cos(alpha)|`. Kept tight: the C
/// operator stays legitimately constructible (with a divergence warning)
/// arbitrarily close to the EP.
pub const DEFAULT_PT_EP_TOL: f64 = 1e-12;

/// Builds and classifies the PT model. `s` must be nonzero; `ep_tol`
/// bounds `|cos(alpha)|` below which the model counts as on the EP locus.
pub fn build_pt(r: f64, s: f64, theta: f64, ep_tol: f64) -> Result<PTModel, PtError> {
    if s == 0.0 {
        return Err(PtError::ZeroCoupling);
    }
    let sin_alpha = r / s * theta.sin();
    // cos^2(alpha), the discriminant of the square root in E_pm over s^2.
    let disc = 1.0 - sin_alpha * sin_alpha;
    let class = if disc.abs() <= ep_tol * ep_tol {
        PtClass::ExceptionalPoint
    } else if disc > 0.0 {
        PtClass::Exact
    } else {
        PtClass::Broken
    };
    let alpha = C64::new(sin_alpha, 0.0).asin();
    Ok(PTModel {
        r_param: r,
        s_param: s,
        theta,
        alpha,
        class,
    })
}

impl PTModel {
    pub fn sin_alpha(&self) -> f64 {
        self.r_param / self.s_param * self.theta.sin()
    }

    /// Reduced detuning `Z = i sin(alpha)`, purely imaginary for all
    /// parameters.
    pub fn z(&self) -> C64 {
        C64::new(0.0, self.sin_alpha())
    }

    /// `E0 = r cos(theta)`.
    pub fn e0(&self) -> C64 {
        C64::new(self.r_param * self.theta.cos(), 0.0)
    }

    /// The model as a generic complex symmetric Hamiltonian.
    pub fn hamiltonian(&self) -> Hamiltonian2 {
        let e1 = C64::new(
            self.r_param * self.theta.cos(),
            self.r_param * self.theta.sin(),
        );
        Hamiltonian2::new(e1, e1.conj(), C64::new(self.s_param, 0.0))
    }
}

/// Spectrum and eigenvector data of a PT model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PtSpectrum {
    pub e_plus: C64,
    pub e_minus: C64,
    /// Line representatives `chi_pm = (1, -Z pm sqrt(Z^2+1))`; at an EP both
    /// coalesce onto the isotropic `(1, -Z_c)`.
    pub chi_plus: Vec2,
    pub chi_minus: Vec2,
    /// PT-normalized sections `c_pm chi_pm` with Krein norms `pm 1`; present
    /// only in the strict exact phase.
    pub scales: Option<(C64, C64)>,
}

impl PtSpectrum {
    pub fn eigenvector(&self, branch: BranchSign) -> Option<Vec2> {
        let (c_plus, c_minus) = self.scales?;
        Some(match branch {
            BranchSign::Plus => self.chi_plus.scale(c_plus),
            BranchSign::Minus => self.chi_minus.scale(c_minus),
        })
    }
}

/// Eigenvalues `E_pm = r cos(theta) pm sqrt(s^2 - r^2 sin^2(theta))` and
/// eigenvectors. Real spectrum in the exact phase, complex-conjugate pair
/// in the broken phase; at an EP both collapse to `E0` on the isotropic
/// line (no normalized sections there).
pub fn pt_spectrum(m: &PTModel) -> PtSpectrum {
    let e0 = m.e0();
    let sin_alpha = m.sin_alpha();
    let disc = C64::new(m.s_param * m.s_param * (1.0 - sin_alpha * sin_alpha), 0.0);
    let root = disc.sqrt();
    let z = m.z();
    let one = C64::new(1.0, 0.0);
    // omega = s may be negative; the branch sign that belongs to E_plus is
    // then flipped so that H chi_plus = E_plus chi_plus always holds.
    let sgn = C64::new(if m.s_param > 0.0 { 1.0 } else { -1.0 }, 0.0);
    let (chi_plus, chi_minus, scales) = match m.class {
        PtClass::ExceptionalPoint => {
            let chi0 = Vec2::new(one, -z_critical(sin_alpha));
            (chi0, chi0, None)
        }
        _ => {
            let s_disc = (z * z + one).sqrt() * sgn;
            let chi_plus = Vec2::new(one, -z + s_disc);
            let chi_minus = Vec2::new(one, -z - s_disc);
            // The stated normalization (Krein norms +1 and -1) belongs to
            // the s > 0 parametrization.
            let scales = if m.class == PtClass::Exact && m.s_param > 0.0 {
                let alpha = m.alpha.re;
                let denom = (2.0 * alpha.cos()).sqrt();
                Some((
                    C64::from_polar(1.0 / denom, alpha / 2.0),
                    C64::from_polar(1.0 / denom, -alpha / 2.0) * C64::new(0.0, 1.0),
                ))
            } else {
                None
            };
            (chi_plus, chi_minus, scales)
        }
    };
    PtSpectrum {
        e_plus: e0 + root,
        e_minus: e0 - root,
        chi_plus,
        chi_minus,
        scales,
    }
}

fn z_critical(sin_alpha: f64) -> C64 {
    C64::new(0.0, sin_alpha.signum())
}

/// The dynamical operator `C = (1/cos alpha) [[i sin alpha, 1], [1, -i sin
/// alpha]]`, with `C^2 = I`, `[C, H] = 0` and `H = E0 I + s cos(alpha) C`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct COperator {
    pub matrix: Mat2,
    /// Divergence diagnostic `1/|cos alpha|`; the Krein-to-Hilbert mapping
    /// breaks down as this grows.
    pub condition: f64,
}

/// Builds the C operator; requires the strict exact phase.
pub fn build_c_operator(m: &PTModel) -> Result<COperator, PtError> {
    match m.class {
        PtClass::ExceptionalPoint => return Err(PtError::EpSingularC),
        PtClass::Broken => return Err(PtError::BrokenPhase),
        PtClass::Exact => {}
    }
    let alpha = m.alpha.re;
    let (sin_a, cos_a) = alpha.sin_cos();
    let inv = 1.0 / cos_a;
    let matrix = Mat2::new(
        C64::new(0.0, sin_a * inv),
        C64::new(inv, 0.0),
        C64::new(inv, 0.0),
        C64::new(0.0, -sin_a * inv),
    );
    Ok(COperator {
        matrix,
        condition: inv.abs(),
    })
}

/// An antilinear operator as a matrix plus conjugation flag, so products
/// compose correctly: `(A B)(v) = A(B(v))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AntilinearOp {
    pub matrix: Mat2,
    pub conjugates: bool,
}

impl AntilinearOp {
    /// The linear operator `M`.
    pub fn linear(matrix: Mat2) -> Self {
        AntilinearOp {
            matrix,
            conjugates: false,
        }
    }

    /// The antilinear operator `v -> M conj(v)`.
    pub fn antilinear(matrix: Mat2) -> Self {
        AntilinearOp {
            matrix,
            conjugates: true,
        }
    }

    /// Time inversion `T` (plain complex conjugation).
    pub fn time_inversion() -> Self {
        Self::antilinear(Mat2::identity())
    }

    /// Parity `P` (swap matrix).
    pub fn parity() -> Self {
        Self::linear(Mat2::swap())
    }

    /// The composite `PT`.
    pub fn pt() -> Self {
        Self::parity().compose(&Self::time_inversion())
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        if self.conjugates {
            self.matrix * v.conj()
        } else {
            self.matrix * *v
        }
    }

    /// Composition `self after other`.
    pub fn compose(&self, other: &AntilinearOp) -> AntilinearOp {
        let m_other = if self.conjugates {
            other.matrix.conj()
        } else {
            other.matrix
        };
        AntilinearOp {
            matrix: self.matrix * m_other,
            conjugates: self.conjugates ^ other.conjugates,
        }
    }

    /// Largest deviation of `A(H v) - H(A v)` over a basis; zero when the
    /// operator commutes with `H` in the antilinear sense.
    pub fn commutator_residual(&self, h: &Mat2) -> f64 {
        let mut worst: f64 = 0.0;
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let zero = C64::new(0.0, 0.0);
        // Complex basis: antilinear maps are not determined by two real
        // directions alone.
        for v in [
            Vec2::new(one, zero),
            Vec2::new(zero, one),
            Vec2::new(one, i),
            Vec2::new(i, one),
        ] {
            let lhs = self.apply(&(*h * v));
            let rhs = *h * self.apply(&v);
            worst = worst.max((lhs - rhs).max_abs());
        }
        worst
    }
}

/// Indefinite Krein-type PT inner product `(u, v) = (PT u) . v` (bilinear
/// pairing on the right).
pub fn krein_product(u: &Vec2, v: &Vec2) -> C64 {
    AntilinearOp::pt().apply(u).dot_t(v)
}

/// Positive definite CPT inner product `((u, v)) = (CPT u) . v`; requires
/// the exact phase (the C operator exists).
pub fn cpt_product(m: &PTModel, u: &Vec2, v: &Vec2) -> Result<C64, PtError> {
    let c = build_c_operator(m)?;
    let cpt = AntilinearOp::linear(c.matrix).compose(&AntilinearOp::pt());
    Ok(cpt.apply(u).dot_t(v))
}

/// CP^2 embedding of a PT eigenvector with the generalized conic residual.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PtEmbedding {
    pub point: ProjectivePoint,
    /// Krein signature `kappa = (E_pm, E_pm) = pm 1` of the branch.
    pub kappa: f64,
    /// `PT chi . chi - kappa (T c^{-1}) c^{-1}`, zero on PT-normalized
    /// states; the line part `PT chi . chi` alone is the isotropy measure.
    pub conic_residual: C64,
    /// `PT chi . chi` of the line representative.
    pub line_isotropy: C64,
}

/// Embeds the `branch` eigenvector as `e_pm = (chi_pm, c_pm^{-1})` in CP^2.
///
/// In the exact phase the stored residual uses the exact PT-normalized
/// scales and vanishes; at an EP the scale diverges, `u2 = 0`, and the line
/// itself becomes isotropic under the PT pairing. The Krein signature of
/// the "-" branch is -1, which is carried by `kappa` so that both branches
/// sit on the (signed) conic.
pub fn pt_embed(m: &PTModel, branch: BranchSign) -> PtEmbedding {
    let spectrum = pt_spectrum(m);
    let kappa = match branch {
        BranchSign::Plus => 1.0,
        BranchSign::Minus => -1.0,
    };
    let chi = match branch {
        BranchSign::Plus => spectrum.chi_plus,
        BranchSign::Minus => spectrum.chi_minus,
    };
    let pt = AntilinearOp::pt();
    let line_isotropy = pt.apply(&chi).dot_t(&chi);
    let c_inv = match spectrum.scales {
        Some((c_plus, c_minus)) => {
            let c = match branch {
                BranchSign::Plus => c_plus,
                BranchSign::Minus => c_minus,
            };
            C64::new(1.0, 0.0) / c
        }
        // EP/broken: the diagonal-chart scale is gone; u2 = 0 is the
        // regular projective limit.
        None => C64::new(0.0, 0.0),
    };
    let conic_residual =
        line_isotropy - C64::new(kappa, 0.0) * c_inv.conj() * c_inv;
    let point = ProjectivePoint::from_homogeneous([chi.0[0], chi.0[1], c_inv], DEFAULT_CHART_ETA)
        .expect("chi has a unit first component");
    PtEmbedding {
        point,
        kappa,
        conic_residual,
        line_isotropy,
    }
}
