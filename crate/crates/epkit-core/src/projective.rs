//! CP^2 embedding of Hilbert-space sections, affine charts, the
//! normalization conic, and the instantaneous-picture EP asymptotics.
//!
//! A section `Phi = c (1, w)` embeds as the homogeneous point
//! `(u0, u1, u2) = (1, w, 1/c)`. The normalization `Phi^T Phi = 1` becomes
//! the conic `u0^2 + u1^2 - u2^2 = 0`, which stays regular at EPs: the
//! divergence `|c| -> infinity` is just the hyperplane `u2 = 0`, covered by
//! the `U0`/`U1` charts instead of the diagonal chart `U2`.

use alloc::vec::Vec;

// Float is shadowed by the std inherent methods in test builds.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;

use crate::complex2::{Vec2, C64};
use crate::error::ProjectiveError;

/// Affine chart tags of CP^2: `U_k` is where `u_k != 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    U0,
    U1,
    U2,
}

/// Point of CP^2 in homogeneous coordinates, tagged with the chart selected
/// for it and the conic residual of the stored representative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectivePoint {
    pub u: [C64; 3],
    pub chart: Chart,
    pub conic_residual: C64,
}

/// Default chart-selection threshold.
pub const DEFAULT_CHART_ETA: f64 = 1e-6;

impl ProjectivePoint {
    /// Builds a point from raw homogeneous coordinates.
    pub fn from_homogeneous(u: [C64; 3], eta: f64) -> Result<Self, ProjectiveError> {
        if u[0].norm() == 0.0 && u[1].norm() == 0.0 && u[2].norm() == 0.0 {
            return Err(ProjectiveError::ZeroVector);
        }
        let mut p = ProjectivePoint {
            u,
            chart: Chart::U2,
            conic_residual: C64::new(0.0, 0.0),
        };
        p.chart = select_chart(&p, eta);
        p.conic_residual = conic_residual(&p);
        Ok(p)
    }

    /// Representative rescaled to unit max modulus (conditioning only; the
    /// point is unchanged).
    pub fn normalized_representative(&self) -> [C64; 3] {
        let m = self.u[0].norm().max(self.u[1].norm()).max(self.u[2].norm());
        [self.u[0] / m, self.u[1] / m, self.u[2] / m]
    }

    /// Scale-invariant conic membership: residual of the max-modulus
    /// representative under `tol`.
    pub fn on_conic(&self, tol: f64) -> bool {
        let v = self.normalized_representative();
        (v[0] * v[0] + v[1] * v[1] - v[2] * v[2]).norm() < tol
    }
}

/// Embeds the section `phi = c chi` (with `chi` the line representative
/// `phi/c`) as the CP^2 point `(chi_0, chi_1, 1/c)`.
///
/// For the standard first-component-1 representative this is `(1, w, 1/c)`;
/// a vanishing first component lands in the `U1` chart instead. EP
/// configurations (`|c| -> infinity`) map to finite points with `u2 = 0`.
pub fn embed(phi: &Vec2, c: C64, eta: f64) -> Result<ProjectivePoint, ProjectiveError> {
    if phi.norm_sqr() == 0.0 {
        return Err(ProjectiveError::ZeroVector);
    }
    if c.norm() == 0.0 {
        return Err(ProjectiveError::ZeroScale);
    }
    let one = C64::new(1.0, 0.0);
    ProjectivePoint::from_homogeneous([phi.0[0] / c, phi.0[1] / c, one / c], eta)
}

/// Chart-selection policy: `U2` when `|u2|/max(|u0|, |u1|) >= eta`, else the
/// larger of `u0`, `u1` wins.
pub fn select_chart(p: &ProjectivePoint, eta: f64) -> Chart {
    let n0 = p.u[0].norm();
    let n1 = p.u[1].norm();
    let n2 = p.u[2].norm();
    let line_mag = n0.max(n1);
    if line_mag == 0.0 || n2 / line_mag >= eta {
        Chart::U2
    } else if n0 >= n1 {
        Chart::U0
    } else {
        Chart::U1
    }
}

/// Conic residual `u0^2 + u1^2 - u2^2` of the stored representative.
pub fn conic_residual(p: &ProjectivePoint) -> C64 {
    p.u[0] * p.u[0] + p.u[1] * p.u[1] - p.u[2] * p.u[2]
}

/// Instantaneous-picture scale asymptotics near an EP:
/// `c_pm^2 ~ mp 2^{-3/2} Z_c^{-3/2} eps^{-1/2}` and the predicted
/// squared vector norm `||Phi_pm||^2 ~ |2 eps|^{-1/2}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InstantaneousAsymptotics {
    pub c_plus_sq: C64,
    pub c_minus_sq: C64,
    /// `c_+^2 / c_-^2`; tends to `-1` (the relative `pm i` phase shift).
    pub ratio: C64,
    /// `|2 eps|^{-1/2}`, the common norm divergence of both sections.
    pub norm_sq: f64,
}

/// Evaluates the EP scale asymptotics at offset `eps` from `z_c`.
pub fn instantaneous_asymptotics(eps: C64, z_c: C64) -> InstantaneousAsymptotics {
    let scale = (z_c * C64::new(2.0, 0.0)).powf(-1.5) * eps.powf(-0.5);
    let c_plus_sq = -scale;
    let c_minus_sq = scale;
    InstantaneousAsymptotics {
        c_plus_sq,
        c_minus_sq,
        ratio: c_plus_sq / c_minus_sq,
        norm_sq: 1.0 / (2.0 * eps.norm()).sqrt(),
    }
}

/// Straight-line segment passing an EP at minimal distance `rho`:
/// `eps(s) = e^{i alpha0} (rho + i s)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectorySegment {
    pub rho: f64,
    pub alpha0: f64,
    pub s_min: f64,
    pub s_max: f64,
}

impl TrajectorySegment {
    pub fn new(rho: f64, alpha0: f64, s_min: f64, s_max: f64) -> Result<Self, ProjectiveError> {
        if !(rho > 0.0) {
            return Err(ProjectiveError::NonPositiveDistance);
        }
        Ok(TrajectorySegment {
            rho,
            alpha0,
            s_min,
            s_max,
        })
    }

    pub fn eps(&self, s: f64) -> C64 {
        C64::from_polar(1.0, self.alpha0) * C64::new(self.rho, s)
    }
}

/// One sample of the phase-jump profile along a segment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JumpSample {
    pub s: f64,
    /// `theta(s) = arctan(s/rho)/4`, in `(-pi/8, pi/8)`.
    pub theta: f64,
    pub abs_eps: f64,
    /// The `eps^{-1/4}` phase factor `exp(-i alpha0/4 - i theta)`.
    pub phase_factor: C64,
}

/// Samples the eigenvector phase `theta(s)` along a segment. As
/// `rho -> 0` the profile approaches a step of height `pi/4`.
pub fn phase_jump_profile(seg: &TrajectorySegment, n_samples: usize) -> Vec<JumpSample> {
    let n = n_samples.max(2);
    (0..n)
        .map(|k| {
            let s = seg.s_min + (seg.s_max - seg.s_min) * k as f64 / (n - 1) as f64;
            jump_sample(seg, s)
        })
        .collect()
}

fn jump_sample(seg: &TrajectorySegment, s: f64) -> JumpSample {
    // Quadrant-aware arctangent; rho > 0 confines theta to (-pi/8, pi/8).
    let theta = 0.25 * s.atan2(seg.rho);
    JumpSample {
        s,
        theta,
        abs_eps: (seg.rho * seg.rho + s * s).sqrt(),
        phase_factor: C64::from_polar(1.0, -seg.alpha0 / 4.0 - theta),
    }
}
