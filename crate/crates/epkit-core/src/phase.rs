//! Geometric and dynamical phases along loops around an EP, the analytic
//! W(alpha) transport matrices and their parabolic group laws, numerical
//! frame transport, and a Schroedinger-evolution cross-check.
//!
//! The connection 1-form on the eigen-lines is
//! `dgamma = i w dw / (1 + w^2) = (i/2) d ln(1 + w^2)` in the affine
//! coordinate `w` of the line. Summed over the two sheets the potential is
//! `ln[(1+w_+^2)(1+w_-^2)] = ln[4 (Z^2+1)]`, so a closed cycle around one
//! EP picks up exactly `-pi/2` per turn with no imaginary part; the
//! reported geometric phase is this two-sheet average, which is also the
//! common per-branch value at leading order near the EP.

use alloc::vec::Vec;

// Float is shadowed by the std inherent methods in test builds.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;

use crate::complex2::{Mat2, Vec2, C64};
use crate::error::{PathError, PhaseError};
use crate::model::{track_branch, Hamiltonian2, SpectralPair, TrackOptions};

/// Tolerance below which `1 + w^2` is treated as isotropic.
pub const ISOTROPY_TOL: f64 = 1e-12;

const TWO_PI: f64 = 2.0 * core::f64::consts::PI;

/// One sample of a loop path: `eps = radius * exp(i alpha)` relative to the
/// loop center, with `alpha` monotonically unwrapped (no 2 pi folding).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathSample {
    pub t: f64,
    pub alpha: f64,
    pub radius: f64,
}

/// Parametrized path `eps(t) = r(t) e^{i alpha(t)}` around a center in the
/// Z-plane. The unwrapped angle stored here is the single source of truth
/// for the `eps^{1/2}` and `eps^{1/4}` branches used across modules.
#[derive(Clone, Debug)]
pub struct LoopPath {
    pub center: C64,
    samples: Vec<PathSample>,
    closed: bool,
}

impl LoopPath {
    /// Circle of constant radius, `alpha` from 0 to `2 pi turns`, `n`
    /// segments (`n + 1` samples).
    pub fn circle(center: C64, radius: f64, turns: f64, n: usize) -> Self {
        Self::from_radius_fn(center, turns, n, |_| radius)
    }

    /// Loop with angle-dependent radius `r(alpha)`.
    pub fn from_radius_fn(
        center: C64,
        turns: f64,
        n: usize,
        radius: impl Fn(f64) -> f64,
    ) -> Self {
        let n = n.max(1);
        let total = TWO_PI * turns;
        let samples: Vec<PathSample> = (0..=n)
            .map(|k| {
                let alpha = total * k as f64 / n as f64;
                PathSample {
                    t: alpha,
                    alpha,
                    radius: radius(alpha),
                }
            })
            .collect();
        let mut path = LoopPath {
            center,
            samples,
            closed: false,
        };
        path.closed = path.endpoints_close();
        path
    }

    /// Builds a path from raw `(t, eps)` samples, unwrapping the angles.
    /// Consecutive angular steps must stay below pi.
    pub fn from_samples(center: C64, samples: &[(f64, C64)]) -> Result<Self, PathError> {
        if samples.len() < 2 {
            return Err(PathError::TooFewSamples);
        }
        let mut out = Vec::with_capacity(samples.len());
        let mut prev_alpha = 0.0;
        for (k, &(t, eps)) in samples.iter().enumerate() {
            let radius = eps.norm();
            if radius == 0.0 {
                return Err(PathError::ZeroRadius { index: k });
            }
            let raw = eps.arg();
            let alpha = if k == 0 {
                raw
            } else {
                // Choose the representative nearest the previous angle.
                let mut a = raw + TWO_PI * ((prev_alpha - raw) / TWO_PI).round();
                if a - prev_alpha > core::f64::consts::PI {
                    a -= TWO_PI;
                } else if prev_alpha - a > core::f64::consts::PI {
                    a += TWO_PI;
                }
                if (a - prev_alpha).abs() >= core::f64::consts::PI {
                    return Err(PathError::AngularAliasing { index: k });
                }
                a
            };
            prev_alpha = alpha;
            out.push(PathSample { t, alpha, radius });
        }
        let mut path = LoopPath {
            center,
            samples: out,
            closed: false,
        };
        path.closed = path.endpoints_close();
        Ok(path)
    }

    fn endpoints_close(&self) -> bool {
        let first = &self.samples[0];
        let last = &self.samples[self.samples.len() - 1];
        let dr = (last.radius - first.radius).abs();
        let da = last.alpha - first.alpha;
        let whole = (da / TWO_PI).round() * TWO_PI;
        dr <= 1e-9 * first.radius.max(1.0) && (da - whole).abs() <= 1e-9
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn sample(&self, k: usize) -> &PathSample {
        &self.samples[k]
    }

    /// Number of full turns spanned by the path.
    pub fn turns(&self) -> f64 {
        (self.samples[self.samples.len() - 1].alpha - self.samples[0].alpha) / TWO_PI
    }

    pub fn eps(&self, k: usize) -> C64 {
        let s = &self.samples[k];
        C64::from_polar(s.radius, s.alpha)
    }

    /// `eps^{1/2}` on the unwrapped sheet.
    pub fn eps_sqrt(&self, k: usize) -> C64 {
        let s = &self.samples[k];
        C64::from_polar(s.radius.sqrt(), 0.5 * s.alpha)
    }

    /// `eps^{-1/4}` on the unwrapped sheet.
    pub fn eps_quarter_root_inv(&self, k: usize) -> C64 {
        let s = &self.samples[k];
        C64::from_polar(s.radius.powf(-0.25), -0.25 * s.alpha)
    }

    /// Midpoint-refined path with doubled segment count.
    pub fn refined(&self) -> LoopPath {
        let mut samples = Vec::with_capacity(2 * self.samples.len() - 1);
        for k in 0..self.samples.len() - 1 {
            let a = &self.samples[k];
            let b = &self.samples[k + 1];
            samples.push(*a);
            samples.push(PathSample {
                t: 0.5 * (a.t + b.t),
                alpha: 0.5 * (a.alpha + b.alpha),
                radius: 0.5 * (a.radius + b.radius),
            });
        }
        samples.push(self.samples[self.samples.len() - 1]);
        LoopPath {
            center: self.center,
            samples,
            closed: self.closed,
        }
    }

    /// `d eps / d alpha` at node `k`: `(r' + i r) e^{i alpha}` with `r'`
    /// from centered differences (periodic across the seam when closed;
    /// node `n-1` duplicates node 0 there).
    fn deps_dalpha(&self, k: usize) -> C64 {
        let n = self.samples.len();
        let total = if self.closed {
            TWO_PI * self.turns().round()
        } else {
            0.0
        };
        let (pa, pr) = if k > 0 {
            (self.samples[k - 1].alpha, self.samples[k - 1].radius)
        } else if self.closed && n >= 2 {
            (self.samples[n - 2].alpha - total, self.samples[n - 2].radius)
        } else {
            (self.samples[k].alpha, self.samples[k].radius)
        };
        let (na, nr) = if k + 1 < n {
            (self.samples[k + 1].alpha, self.samples[k + 1].radius)
        } else if self.closed && n >= 2 {
            (self.samples[1].alpha + total, self.samples[1].radius)
        } else {
            (self.samples[k].alpha, self.samples[k].radius)
        };
        let da = na - pa;
        let drda = if da.abs() > 0.0 { (nr - pr) / da } else { 0.0 };
        let s = &self.samples[k];
        (C64::new(drda, 0.0) + C64::new(0.0, s.radius)) * C64::from_polar(1.0, s.alpha)
    }
}

/// Phase split of a cycle: `total = gamma + dynamical`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseResult {
    pub gamma: C64,
    pub dynamical: C64,
    pub total: C64,
}

/// Connection 1-form increment `dgamma = i w dw / (1 + w^2)`.
///
/// Independent of the fiber coordinates by construction; fails on isotropic
/// points `1 + w^2 = 0`.
pub fn connection_form(w_affine: C64, dw: C64) -> Result<C64, PhaseError> {
    let denom = C64::new(1.0, 0.0) + w_affine * w_affine;
    if denom.norm() < ISOTROPY_TOL {
        return Err(PhaseError::IsotropicPoint);
    }
    Ok(C64::new(0.0, 1.0) * w_affine * dw / denom)
}

/// Options for [`integrate_loop_phase`].
#[derive(Clone, Copy, Debug)]
pub struct LoopQuadOptions {
    /// Acceptance threshold on `|gamma_N - gamma_2N|`.
    pub tol: f64,
    /// Hard cap on the refined sample count.
    pub max_samples: usize,
    pub track: TrackOptions,
}

impl Default for LoopQuadOptions {
    fn default() -> Self {
        LoopQuadOptions {
            tol: 1e-6,
            max_samples: 1 << 21,
            track: TrackOptions::default(),
        }
    }
}

/// Converged run of [`integrate_loop_phase`].
#[derive(Clone, Debug)]
pub struct LoopPhaseRun {
    pub result: PhaseResult,
    pub samples_used: usize,
    /// Cumulative geometric phase along the final refinement,
    /// `(alpha, gamma(alpha))`.
    pub trace: Vec<(f64, C64)>,
}

/// Integrates the geometric and dynamical phase around a closed loop.
///
/// `h_of_eps` maps the loop coordinate to the Hamiltonian; the loop
/// coordinate is the reduced-detuning offset, `Z(h_of_eps(eps)) =
/// center + eps`. The connection form is integrated by composite
/// trapezoid over the branch-tracked eigenvector pair (averaged over the
/// two sheets), with sample doubling until `|gamma_N - gamma_2N| < tol`.
/// The dynamical phase uses the path parameter as time.
pub fn integrate_loop_phase(
    path: &LoopPath,
    h_of_eps: impl Fn(C64) -> Hamiltonian2,
    opts: &LoopQuadOptions,
) -> Result<LoopPhaseRun, PhaseError> {
    if !path.is_closed() {
        return Err(PhaseError::OpenPath);
    }
    let mut current = path.clone();
    let mut prev: Option<(C64, C64)> = None;
    loop {
        let (gamma, dynamical, trace) = loop_pass(&current, &h_of_eps, opts)?;
        if let Some((g_prev, _)) = prev {
            if (gamma - g_prev).norm() < opts.tol {
                return Ok(LoopPhaseRun {
                    result: PhaseResult {
                        gamma,
                        dynamical,
                        total: gamma + dynamical,
                    },
                    samples_used: current.len(),
                    trace,
                });
            }
        }
        if 2 * current.len() > opts.max_samples {
            return Err(PhaseError::NoConvergence {
                samples: current.len(),
            });
        }
        prev = Some((gamma, dynamical));
        current = current.refined();
    }
}

/// Single trapezoid pass over one refinement level.
fn loop_pass(
    path: &LoopPath,
    h_of_eps: &impl Fn(C64) -> Hamiltonian2,
    opts: &LoopQuadOptions,
) -> Result<(C64, C64, Vec<(f64, C64)>), PhaseError> {
    let n = path.len();
    let hs: Vec<Hamiltonian2> = (0..n).map(|k| h_of_eps(path.eps(k))).collect();
    let pairs = track_branch(&hs, &opts.track)?;
    // Branch-summed connection integrand per node, as a function of alpha.
    let mut g = Vec::with_capacity(n);
    let mut e_mean = Vec::with_capacity(n);
    for k in 0..n {
        let pair = &pairs[k];
        let s = pair.sqrt_disc.ok_or(PhaseError::EpCollision { index: k })?;
        let z = path.center + path.eps(k);
        let deps = path.deps_dalpha(k);
        let dw_plus = (-C64::new(1.0, 0.0) + z / s) * deps;
        let dw_minus = (-C64::new(1.0, 0.0) - z / s) * deps;
        let sum = connection_form(pair.w_plus(), dw_plus)?
            + connection_form(pair.w_minus(), dw_minus)?;
        g.push(sum * C64::new(0.5, 0.0));
        e_mean.push((pair.e_plus + pair.e_minus) * C64::new(0.5, 0.0));
    }
    // Composite trapezoid in alpha, accumulating the trace.
    let mut gamma = C64::new(0.0, 0.0);
    let mut trace = Vec::with_capacity(n);
    trace.push((path.sample(0).alpha, gamma));
    for k in 0..n - 1 {
        let da = path.sample(k + 1).alpha - path.sample(k).alpha;
        gamma += (g[k] + g[k + 1]) * C64::new(0.5 * da, 0.0);
        trace.push((path.sample(k + 1).alpha, gamma));
    }
    // Dynamical phase with t = alpha, averaged over the two sheets.
    let mut dynamical = C64::new(0.0, 0.0);
    for k in 0..n - 1 {
        let da = path.sample(k + 1).alpha - path.sample(k).alpha;
        dynamical -= (e_mean[k] + e_mean[k + 1]) * C64::new(0.5 * da, 0.0);
    }
    Ok((gamma, dynamical, trace))
}

/// Dynamical phase `-int <Xi|H|Phi> / <Xi|Phi> dt` over sampled trajectory
/// data, by the composite trapezoid rule.
pub fn dynamical_phase(
    ts: &[f64],
    hs: &[Hamiltonian2],
    phis: &[Vec2],
    xis: &[Vec2],
    overlap_tol: f64,
) -> Result<C64, PhaseError> {
    let n = ts.len().min(hs.len()).min(phis.len()).min(xis.len());
    let mut integrand = Vec::with_capacity(n);
    for k in 0..n {
        let overlap = xis[k].dot_h(&phis[k]);
        if overlap.norm() < overlap_tol {
            return Err(PhaseError::VanishingOverlap { index: k });
        }
        integrand.push(xis[k].dot_h(&(hs[k].matrix() * phis[k])) / overlap);
    }
    let mut phase = C64::new(0.0, 0.0);
    for k in 0..n - 1 {
        let dt = ts[k + 1] - ts[k];
        phase -= (integrand[k] + integrand[k + 1]) * C64::new(0.5 * dt, 0.0);
    }
    Ok(phase)
}

/// Monodromy/transport matrix for a cycle angle `alpha`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonodromyMatrix {
    pub alpha: f64,
    pub w: Mat2,
}

/// Analytic transport matrix
/// `W(alpha) = [[e^{-i alpha/4}, 0], [2 i Z_c sin(alpha/4), e^{i alpha/4}]]`.
pub fn transport_matrix(alpha: f64, z_c: C64) -> MonodromyMatrix {
    let quarter = alpha / 4.0;
    let phase = C64::from_polar(1.0, -quarter);
    let lower = C64::new(0.0, 2.0) * z_c * C64::new(quarter.sin(), 0.0);
    MonodromyMatrix {
        alpha,
        w: Mat2::new(phase, C64::new(0.0, 0.0), lower, phase.conj()),
    }
}

/// Violation maxima of the parabolic group laws over a set of angles.
#[derive(Clone, Copy, Debug, Default)]
pub struct GroupLawReport {
    /// `max ||W(a)W(b) - W(a+b)||`.
    pub additivity: f64,
    /// `max ||W(a)W(b) - W(b)W(a)||`.
    pub commutativity: f64,
    /// `max |det W - 1|`.
    pub determinant: f64,
    /// `max ||W(a) Phi_0 - e^{-i a/4} Phi_0||` on the EP line.
    pub eigenline: f64,
    /// Largest affine deviation of `pi(W Phi_0)` from `pi(Phi_0)`.
    pub line_invariance: f64,
}

impl GroupLawReport {
    pub fn max(&self) -> f64 {
        self.additivity
            .max(self.commutativity)
            .max(self.determinant)
            .max(self.eigenline)
            .max(self.line_invariance)
    }
}

/// Checks `W(a)W(b) = W(b)W(a) = W(a+b)`, `det W = 1` and the invariance of
/// the EP line on all pairs from `alphas`.
pub fn verify_group_laws(alphas: &[f64], z_c: C64) -> GroupLawReport {
    let mut report = GroupLawReport::default();
    let phi0 = Vec2::new(C64::new(1.0, 0.0), -z_c);
    for &a in alphas {
        let wa = transport_matrix(a, z_c).w;
        report.determinant = report
            .determinant
            .max((wa.det() - C64::new(1.0, 0.0)).norm());
        let transported = wa * phi0;
        let expect = phi0.scale(C64::from_polar(1.0, -a / 4.0));
        report.eigenline = report.eigenline.max((transported - expect).max_abs());
        let affine_dev = (transported.0[1] / transported.0[0] - phi0.0[1] / phi0.0[0]).norm();
        report.line_invariance = report.line_invariance.max(affine_dev);
        for &b in alphas {
            let wb = transport_matrix(b, z_c).w;
            let wab = transport_matrix(a + b, z_c).w;
            report.additivity = report.additivity.max((wa * wb - wab).max_abs());
            report.commutativity = report.commutativity.max((wa * wb - wb * wa).max_abs());
        }
    }
    report
}

/// Numerical frame transport `Phi(alpha) Phi(0)^{-1}` along a loop.
///
/// The frame columns are the branch-tracked Puiseux sections
/// `eps^{-1/4} (1, w_pm)`: affine eigenvector representatives carrying the
/// leading instantaneous-normalization scale, whose quarter-root branch is
/// owned by the path's unwrapped angle. For small loop radii the result
/// matches [`transport_matrix`] at leading order.
pub fn numeric_transport(
    path: &LoopPath,
    h_of_eps: impl Fn(C64) -> Hamiltonian2,
    track: &TrackOptions,
) -> Result<MonodromyMatrix, PhaseError> {
    let n = path.len();
    let hs: Vec<Hamiltonian2> = (0..n).map(|k| h_of_eps(path.eps(k))).collect();
    let pairs = track_branch(&hs, track)?;
    let frame_at = |pair: &SpectralPair, scale: C64| {
        Mat2::from_columns(pair.chi_plus.scale(scale), pair.chi_minus.scale(scale))
    };
    let start = frame_at(&pairs[0], path.eps_quarter_root_inv(0));
    if start.det().norm() < 1e-12 * start.frobenius_norm() * start.frobenius_norm() {
        return Err(PhaseError::SingularFrame);
    }
    let start_inv = start.inverse().ok_or(PhaseError::SingularFrame)?;
    let end = frame_at(&pairs[n - 1], path.eps_quarter_root_inv(n - 1));
    Ok(MonodromyMatrix {
        alpha: path.sample(n - 1).alpha - path.sample(0).alpha,
        w: end * start_inv,
    })
}

/// Options for [`evolve_schrodinger`].
#[derive(Clone, Copy, Debug)]
pub struct EvolveOptions {
    /// RK4 substeps per grid interval.
    pub substeps: usize,
    /// Relative local-error bound (step-doubling estimate); exceeding it
    /// rejects the step.
    pub local_tol: f64,
    pub overlap_tol: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            substeps: 16,
            local_tol: 1e-8,
            overlap_tol: 1e-12,
        }
    }
}

/// Trajectories and extracted phases of a bi-orthogonal evolution.
#[derive(Clone, Debug)]
pub struct SchrodingerRun {
    pub t: Vec<f64>,
    pub phi: Vec<Vec2>,
    pub xi: Vec<Vec2>,
    pub phase: PhaseResult,
    /// Largest drift of `<Xi(t)|Phi(t)>` from its initial value.
    pub biorthogonality_drift: f64,
    /// `max ||dH/dt|| / gap^2`; the adiabatic phase-extraction error scales
    /// with this (and hence with 1/T for a fixed loop).
    pub adiabatic_error_estimate: f64,
    /// Largest step-doubling error estimate actually seen.
    pub max_local_error: f64,
}

/// Integrates `i dPhi/dt = H(t) Phi` and `i dXi/dt = H^dagger(t) Xi` with
/// classic RK4 (fixed substeps, step-doubling error control), then splits
/// the accumulated phase into dynamical and geometric parts.
///
/// The total phase is read off the first component of `Phi`, unwrapped
/// along the trajectory, so the caller should keep that component away
/// from zero (true for the eigenvector initializations used here).
pub fn evolve_schrodinger(
    h_of_t: impl Fn(f64) -> Hamiltonian2,
    phi0: Vec2,
    xi0: Vec2,
    t_grid: &[f64],
    opts: &EvolveOptions,
) -> Result<SchrodingerRun, PhaseError> {
    if t_grid.len() < 2 {
        return Err(PhaseError::StepRejected { step: 0 });
    }
    let substeps = opts.substeps.max(1);
    let mut phi = phi0;
    let mut xi = xi0;
    let mut phis = Vec::with_capacity(t_grid.len());
    let mut xis = Vec::with_capacity(t_grid.len());
    phis.push(phi);
    xis.push(xi);
    let mut total = C64::new(0.0, 0.0);
    let mut max_local_error: f64 = 0.0;
    let mut step_index = 0usize;
    for win in t_grid.windows(2) {
        let (t0, t1) = (win[0], win[1]);
        let h = (t1 - t0) / substeps as f64;
        for j in 0..substeps {
            let t = t0 + j as f64 * h;
            let z0_before = phi.0[0];
            // One full step vs two half steps; keep the finer result.
            let full_phi = rk4_step(&h_of_t, t, h, phi, false);
            let half_phi = {
                let mid = rk4_step(&h_of_t, t, 0.5 * h, phi, false);
                rk4_step(&h_of_t, t + 0.5 * h, 0.5 * h, mid, false)
            };
            let err = (full_phi - half_phi).max_abs() / 15.0;
            let scale = 1.0 + phi.max_abs();
            max_local_error = max_local_error.max(err / scale);
            if err > opts.local_tol * scale {
                return Err(PhaseError::StepRejected { step: step_index });
            }
            phi = half_phi;
            let full_xi = rk4_step(&h_of_t, t, h, xi, true);
            let half_xi = {
                let mid = rk4_step(&h_of_t, t, 0.5 * h, xi, true);
                rk4_step(&h_of_t, t + 0.5 * h, 0.5 * h, mid, true)
            };
            let err_xi = (full_xi - half_xi).max_abs() / 15.0;
            let scale_xi = 1.0 + xi.max_abs();
            max_local_error = max_local_error.max(err_xi / scale_xi);
            if err_xi > opts.local_tol * scale_xi {
                return Err(PhaseError::StepRejected { step: step_index });
            }
            xi = half_xi;
            // Unwrap the accumulated phase of the leading component.
            if phi.0[0].norm_sqr() < 1e-28 * phi.norm_sqr()
                || z0_before.norm_sqr() < 1e-28 * phi.norm_sqr()
            {
                return Err(PhaseError::ZeroComponent { step: step_index });
            }
            total += (phi.0[0] / z0_before).ln();
            step_index += 1;
        }
        phis.push(phi);
        xis.push(xi);
    }
    // phi_n(T) = -i ln[z0(T)/z0(0)] along the continuous branch.
    let total_phase = C64::new(0.0, -1.0) * total;
    let hs: Vec<Hamiltonian2> = t_grid.iter().map(|&t| h_of_t(t)).collect();
    let dynamical = dynamical_phase(t_grid, &hs, &phis, &xis, opts.overlap_tol)?;
    let overlap0 = xis[0].dot_h(&phis[0]);
    let mut drift: f64 = 0.0;
    for (x, p) in xis.iter().zip(phis.iter()) {
        drift = drift.max((x.dot_h(p) - overlap0).norm());
    }
    let mut adiabatic: f64 = 0.0;
    for k in 0..t_grid.len() - 1 {
        let dt = t_grid[k + 1] - t_grid[k];
        if dt <= 0.0 {
            continue;
        }
        let rate = (hs[k + 1].matrix() - hs[k].matrix()).frobenius_norm() / dt;
        let gap = gap_of(&hs[k]);
        if gap > 0.0 {
            adiabatic = adiabatic.max(rate / (gap * gap));
        }
    }
    Ok(SchrodingerRun {
        t: t_grid.iter().copied().collect(),
        phi: phis,
        xi: xis,
        phase: PhaseResult {
            gamma: total_phase - dynamical,
            dynamical,
            total: total_phase,
        },
        biorthogonality_drift: drift,
        adiabatic_error_estimate: adiabatic,
        max_local_error,
    })
}

fn gap_of(h: &Hamiltonian2) -> f64 {
    if h.is_diagonal() {
        return (h.eps1 - h.eps2).norm();
    }
    match h.z() {
        Ok(z) => {
            let disc = (z * z + C64::new(1.0, 0.0)).sqrt();
            (h.omega * disc).norm() * 2.0
        }
        Err(_) => 0.0,
    }
}

/// One RK4 step of `dy/dt = -i M(t) y` with `M = H` (right) or `M = H^dagger`
/// (left, `adjoint = true`).
fn rk4_step(
    h_of_t: &impl Fn(f64) -> Hamiltonian2,
    t: f64,
    h: f64,
    y: Vec2,
    adjoint: bool,
) -> Vec2 {
    let rhs = |t: f64, y: Vec2| -> Vec2 {
        let m = if adjoint {
            h_of_t(t).matrix().adjoint()
        } else {
            h_of_t(t).matrix()
        };
        (m * y).scale(C64::new(0.0, -1.0))
    };
    let k1 = rhs(t, y);
    let k2 = rhs(t + 0.5 * h, y + k1.scale(C64::new(0.5 * h, 0.0)));
    let k3 = rhs(t + 0.5 * h, y + k2.scale(C64::new(0.5 * h, 0.0)));
    let k4 = rhs(t + h, y + k3.scale(C64::new(h, 0.0)));
    y + (k1 + k2.scale(C64::new(2.0, 0.0)) + k3.scale(C64::new(2.0, 0.0)) + k4)
        .scale(C64::new(h / 6.0, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_hamiltonian, BranchSign};
    use core::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn ep_family(omega: C64, center: C64) -> impl Fn(C64) -> Hamiltonian2 {
        move |eps| Hamiltonian2::from_reduced(c(0.0, 0.0), omega, center + eps)
    }

    #[test]
    fn connection_form_real_inputs() {
        // Hermitian sub-case: real w, dw contribute nothing to Re gamma.
        let d = connection_form(c(0.7, 0.0), c(0.01, 0.0)).unwrap();
        assert!(d.re.abs() < 1e-18);
        // A closed real cycle accumulates zero: ln(1+w^2) is single valued.
        let ws = [0.2, 0.9, 1.5, 0.9, 0.2];
        let mut acc = c(0.0, 0.0);
        for k in 0..ws.len() - 1 {
            let w = c(0.5 * (ws[k] + ws[k + 1]), 0.0);
            acc += connection_form(w, c(ws[k + 1] - ws[k], 0.0)).unwrap();
        }
        assert!(acc.norm() < 0.03);
    }

    #[test]
    fn connection_form_isotropic_rejection() {
        assert_eq!(
            connection_form(c(0.0, 1.0), c(0.1, 0.0)),
            Err(PhaseError::IsotropicPoint)
        );
        assert_eq!(
            connection_form(c(0.0, -1.0), c(0.1, 0.0)),
            Err(PhaseError::IsotropicPoint)
        );
    }

    #[test]
    fn connection_form_leading_circle_behavior() {
        // On eps = r e^{i alpha} the branch-averaged form is -dalpha/4 + O(r).
        let zc = c(0.0, 1.0);
        let r = 1e-3;
        let path = LoopPath::circle(zc, r, 1.0, 64);
        let h = ep_family(c(0.5, 0.0), zc);
        let hs: alloc::vec::Vec<Hamiltonian2> = (0..path.len()).map(|k| h(path.eps(k))).collect();
        let pairs = track_branch(&hs, &TrackOptions::default()).unwrap();
        for k in 0..path.len() {
            let s = pairs[k].sqrt_disc.unwrap();
            let z = zc + path.eps(k);
            let deps = path.deps_dalpha(k);
            let g = (connection_form(pairs[k].w_plus(), (-c(1.0, 0.0) + z / s) * deps).unwrap()
                + connection_form(pairs[k].w_minus(), (-c(1.0, 0.0) - z / s) * deps).unwrap())
                * c(0.5, 0.0);
            assert!((g + c(0.25, 0.0)).norm() < 1e-3, "dev {}", (g + c(0.25, 0.0)).norm());
        }
    }

    #[test]
    fn one_cycle_gives_minus_half_pi() {
        let zc = c(0.0, 1.0);
        let path = LoopPath::circle(zc, 1e-2, 1.0, 64);
        let run = integrate_loop_phase(&path, ep_family(c(0.5, 0.0), zc), &LoopQuadOptions::default())
            .unwrap();
        let gamma = run.result.gamma;
        assert!((gamma.re + PI / 2.0).abs() < 1e-9, "Re gamma {}", gamma.re);
        assert!(gamma.im.abs() < 1e-12, "Im gamma {}", gamma.im);
        // E0 = 0 here, so the dynamical phase vanishes and total = gamma.
        assert!(run.result.dynamical.norm() < 1e-12);
        assert!((run.result.total - gamma).norm() < 1e-15);
    }

    #[test]
    fn four_cycles_give_minus_two_pi() {
        let zc = c(0.0, 1.0);
        let path = LoopPath::circle(zc, 1e-2, 4.0, 256);
        let run = integrate_loop_phase(&path, ep_family(c(0.5, 0.0), zc), &LoopQuadOptions::default())
            .unwrap();
        assert!((run.result.gamma.re + 2.0 * PI).abs() < 1e-9);
        assert!(run.result.gamma.im.abs() < 1e-12);
    }

    #[test]
    fn oscillating_radius_cancels_on_closure() {
        let zc = c(0.0, 1.0);
        let path = LoopPath::from_radius_fn(zc, 1.0, 128, |a| 1e-2 * (1.0 + 0.3 * a.sin()));
        let opts = LoopQuadOptions {
            tol: 1e-8,
            ..LoopQuadOptions::default()
        };
        let run = integrate_loop_phase(&path, ep_family(c(0.5, 0.0), zc), &opts).unwrap();
        assert!(
            (run.result.gamma.re + PI / 2.0).abs() < 1e-6,
            "Re gamma {}",
            run.result.gamma.re
        );
        assert!(run.result.gamma.im.abs() < 1e-6);
    }

    #[test]
    fn open_path_is_rejected() {
        let zc = c(0.0, 1.0);
        let path = LoopPath::circle(zc, 1e-2, 0.5, 32);
        assert!(matches!(
            integrate_loop_phase(&path, ep_family(c(0.5, 0.0), zc), &LoopQuadOptions::default()),
            Err(PhaseError::OpenPath)
        ));
    }

    #[test]
    fn ep_collision_is_reported() {
        let zc = c(0.0, 1.0);
        // Loop through the EP itself.
        let path = LoopPath::circle(zc, 1e-12, 1.0, 16);
        assert!(matches!(
            integrate_loop_phase(&path, ep_family(c(0.5, 0.0), zc), &LoopQuadOptions::default()),
            Err(PhaseError::EpCollision { .. })
        ));
    }

    #[test]
    fn stationary_dynamical_phase() {
        let h = build_hamiltonian(c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0));
        let ts = [0.0, 0.5, 1.0, 1.5, 2.0];
        let hs = [h; 5];
        let phi = Vec2::new(c(1.0, 0.0), c(0.0, 0.0));
        let phis = [phi; 5];
        let xis = [phi; 5];
        let phase = dynamical_phase(&ts, &hs, &phis, &xis, 1e-12).unwrap();
        assert!((phase - c(-2.0, 0.0)).norm() < 1e-14); // -E T with E = 1, T = 2
    }

    #[test]
    fn stationary_complex_dynamical_phase() {
        let e = c(0.7, -0.3);
        let h = build_hamiltonian(e, c(2.0, 0.1), c(0.0, 0.0));
        let ts = [0.0, 1.0, 2.0, 3.0];
        let hs = [h; 4];
        let phi = Vec2::new(c(1.0, 0.0), c(0.0, 0.0));
        let phis = [phi; 4];
        let xis = [phi; 4];
        let phase = dynamical_phase(&ts, &hs, &phis, &xis, 1e-12).unwrap();
        assert!((phase + e * c(3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn loop_dynamical_consistency() {
        // dynamical_phase on the tracked loop data reproduces
        // total - gamma from integrate_loop_phase.
        let zc = c(0.0, 1.0);
        let e0 = c(0.3, -0.1);
        let omega = c(0.5, 0.0);
        let family = move |eps: C64| Hamiltonian2::from_reduced(e0, omega, zc + eps);
        let path = LoopPath::circle(zc, 1e-2, 1.0, 512);
        let opts = LoopQuadOptions::default();
        let run = integrate_loop_phase(&path, family, &opts).unwrap();
        // Rebuild the branch-averaged dynamical phase through the public op.
        let hs: alloc::vec::Vec<Hamiltonian2> =
            (0..path.len()).map(|k| family(path.eps(k))).collect();
        let pairs = track_branch(&hs, &TrackOptions::default()).unwrap();
        let ts: alloc::vec::Vec<f64> = (0..path.len()).map(|k| path.sample(k).alpha).collect();
        let mut dyn_avg = c(0.0, 0.0);
        for branch in [BranchSign::Plus, BranchSign::Minus] {
            let phis: alloc::vec::Vec<Vec2> = pairs
                .iter()
                .map(|p| match branch {
                    BranchSign::Plus => p.chi_plus,
                    BranchSign::Minus => p.chi_minus,
                })
                .collect();
            // Left lines conjugate to the right ones, normalized overlap.
            let xis: alloc::vec::Vec<Vec2> = pairs
                .iter()
                .map(|p| {
                    let chi = match branch {
                        BranchSign::Plus => p.chi_plus,
                        BranchSign::Minus => p.chi_minus,
                    };
                    let dot = chi.dot_t(&chi);
                    chi.conj().scale((c(1.0, 0.0) / dot).conj())
                })
                .collect();
            dyn_avg += dynamical_phase(&ts, &hs, &phis, &xis, 1e-12).unwrap();
        }
        dyn_avg = dyn_avg * c(0.5, 0.0);
        let expect = run.result.total - run.result.gamma;
        assert!(
            (dyn_avg - expect).norm() < 1e-6,
            "dev {}",
            (dyn_avg - expect).norm()
        );
    }

    #[test]
    fn transport_matrix_values() {
        let zc = c(0.0, 1.0);
        let w0 = transport_matrix(0.0, zc).w;
        assert!((w0 - Mat2::identity()).max_abs() < 1e-15);
        let w1 = transport_matrix(2.0 * PI, zc).w;
        let expect = Mat2::new(c(0.0, -1.0), c(0.0, 0.0), c(-2.0, 0.0), c(0.0, 1.0));
        assert!((w1 - expect).max_abs() < 1e-13);
        let w2 = transport_matrix(4.0 * PI, zc).w;
        assert!((w2 + Mat2::identity()).max_abs() < 1e-13);
        let w4 = transport_matrix(8.0 * PI, zc).w;
        assert!((w4 - Mat2::identity()).max_abs() < 1e-13);
    }

    #[test]
    fn monodromy_cycle_structure() {
        let zc = c(0.0, 1.0);
        let w1 = transport_matrix(2.0 * PI, zc).w;
        let w2 = transport_matrix(4.0 * PI, zc).w;
        let w3 = transport_matrix(6.0 * PI, zc).w;
        assert!((w1 * w1 - w2).max_abs() < 1e-13);
        assert!((w3 + w1).max_abs() < 1e-13);
        // Lines return after two cycles: W2 = -I acts trivially on rays.
        let v = Vec2::new(c(1.0, 0.0), c(0.3, -0.8));
        let tv = w2 * v;
        assert!((tv.0[1] / tv.0[0] - v.0[1] / v.0[0]).norm() < 1e-14);
    }

    #[test]
    fn group_laws_hold() {
        let zc = c(0.0, 1.0);
        let alphas = [0.0, 0.37, 1.0, 2.2, PI, 4.9, 2.0 * PI, 9.1, 8.0 * PI];
        let report = verify_group_laws(&alphas, zc);
        assert!(report.max() < 1e-12, "violation {}", report.max());
    }

    #[test]
    fn numeric_transport_matches_analytic() {
        let zc = c(0.0, 1.0);
        let path = LoopPath::circle(zc, 1e-6, 1.0, 512);
        let m = numeric_transport(&path, ep_family(c(0.5, 0.0), zc), &TrackOptions::default())
            .unwrap();
        let analytic = transport_matrix(2.0 * PI, zc).w;
        let dev = (m.w - analytic).max_abs();
        assert!(dev < 1e-2, "deviation {}", dev);
    }

    #[test]
    fn numeric_transport_identity_cases() {
        let zc = c(0.0, 1.0);
        // Degenerate zero-turn path: identity exactly.
        let path = LoopPath::circle(zc, 1e-4, 0.0, 1);
        let m = numeric_transport(&path, ep_family(c(0.5, 0.0), zc), &TrackOptions::default())
            .unwrap();
        assert!((m.w - Mat2::identity()).max_abs() < 1e-12);
        // Eight pi returns to the identity within the leading-order error.
        let path = LoopPath::circle(zc, 1e-6, 4.0, 2048);
        let m = numeric_transport(&path, ep_family(c(0.5, 0.0), zc), &TrackOptions::default())
            .unwrap();
        assert!((m.w - Mat2::identity()).max_abs() < 1e-2);
    }

    #[test]
    fn stationary_hermitian_evolution() {
        let h = build_hamiltonian(c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0));
        let grid: alloc::vec::Vec<f64> = (0..=100).map(|k| k as f64 / 100.0).collect();
        let phi0 = Vec2::new(c(1.0, 0.0), c(0.0, 0.0));
        let run = evolve_schrodinger(move |_| h, phi0, phi0, &grid, &EvolveOptions::default())
            .unwrap();
        let last = run.phi.last().unwrap();
        let expect = phi0.scale(C64::from_polar(1.0, -1.0));
        assert!((*last - expect).max_abs() < 1e-10);
        assert!(run.biorthogonality_drift < 1e-10);
        assert!((run.phase.total - c(-1.0, 0.0)).norm() < 1e-10);
        assert!(run.phase.gamma.norm() < 1e-9);
    }

    #[test]
    fn stationary_eigenvector_phases() {
        use crate::model::{eigen_decompose, normalize_diagonal_chart, NormalizationGauge};
        let h = build_hamiltonian(c(2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        let pair = eigen_decompose(&h, BranchSign::Plus, 1e-9).unwrap();
        let pair = normalize_diagonal_chart(&pair, NormalizationGauge::Instantaneous, 1e-12)
            .unwrap();
        let phi0 = pair.phi(BranchSign::Plus).unwrap();
        let xi0 = pair.xi(BranchSign::Plus).unwrap();
        let t_final = 0.8;
        let grid: alloc::vec::Vec<f64> = (0..=80).map(|k| t_final * k as f64 / 80.0).collect();
        let run = evolve_schrodinger(move |_| h, phi0, xi0, &grid, &EvolveOptions::default())
            .unwrap();
        let expect = -pair.e_plus * c(t_final, 0.0);
        assert!((run.phase.total - expect).norm() < 1e-9);
        assert!(run.phase.gamma.norm() < 1e-8, "gamma {}", run.phase.gamma.norm());
    }

    #[test]
    fn rejects_too_coarse_steps() {
        // A fast oscillation with one substep per wide interval overflows
        // the local error budget.
        let h_of_t = |t: f64| {
            build_hamiltonian(
                c((40.0 * t).cos() * 15.0, 0.0),
                c(-(40.0 * t).cos() * 15.0, 0.0),
                c(10.0, 0.0),
            )
        };
        let grid = [0.0, 1.0, 2.0];
        let opts = EvolveOptions {
            substeps: 1,
            local_tol: 1e-12,
            ..EvolveOptions::default()
        };
        let phi0 = Vec2::new(c(1.0, 0.0), c(0.0, 0.0));
        assert!(matches!(
            evolve_schrodinger(h_of_t, phi0, phi0, &grid, &opts),
            Err(PhaseError::StepRejected { .. })
        ));
    }

    #[test]
    fn hermitian_slow_loop_matches_connection_gamma() {
        // Closed loop of real symmetric Hamiltonians far from any EP:
        // the connection gamma is zero on closure and the ODE-extracted
        // gamma approaches it at the adiabatic rate ~ 1/T.
        let t_final = 60.0;
        let h_of_t = move |t: f64| {
            let theta = 2.0 * PI * t / t_final;
            build_hamiltonian(
                c(theta.cos(), 0.0),
                c(-theta.cos(), 0.0),
                c(2.0 + 0.5 * theta.sin(), 0.0),
            )
        };
        use crate::model::{eigen_decompose, normalize_diagonal_chart, NormalizationGauge};
        let h0 = h_of_t(0.0);
        let pair = eigen_decompose(&h0, BranchSign::Plus, 1e-9).unwrap();
        let pair = normalize_diagonal_chart(&pair, NormalizationGauge::Instantaneous, 1e-12)
            .unwrap();
        let phi0 = pair.phi(BranchSign::Plus).unwrap();
        let xi0 = pair.xi(BranchSign::Plus).unwrap();
        let grid: alloc::vec::Vec<f64> =
            (0..=3000).map(|k| t_final * k as f64 / 3000.0).collect();
        let run = evolve_schrodinger(h_of_t, phi0, xi0, &grid, &EvolveOptions::default())
            .unwrap();
        // Real-loop Berry phase is zero; allow the reported adiabatic bound.
        let bound = 5.0 * run.adiabatic_error_estimate;
        assert!(
            run.phase.gamma.norm() < bound,
            "gamma {} vs bound {}",
            run.phase.gamma.norm(),
            bound
        );
        assert!(run.biorthogonality_drift < 1e-7);
    }

    #[test]
    fn gauge_independent_section_extraction() {
        // The fiber-level formula
        //   gamma = sum_k [ i Log(<Xi_k|Phi_{k+1}>/<Xi_k|Phi_k>) - i Log(z0_{k+1}/z0_k) ]
        // applied to randomly rescaled sections reproduces the connection
        // integral: the 1-form does not see the fiber coordinates.
        let zc = c(0.0, 1.0);
        let omega = c(0.5, 0.0);
        let family = ep_family(omega, zc);
        let turns = 4.0;
        let n = 8192;
        let path = LoopPath::circle(zc, 0.3, turns, n);
        let hs: alloc::vec::Vec<Hamiltonian2> =
            (0..path.len()).map(|k| family(path.eps(k))).collect();
        let pairs = track_branch(&hs, &TrackOptions::default()).unwrap();
        for (ga, gb, gc) in [(0.4, -0.2, 1.3), (-0.8, 0.5, -2.1)] {
            let mut acc = c(0.0, 0.0);
            let gauge = |alpha: f64| {
                C64::from_polar(
                    (ga * alpha.sin() + gb * (2.0 * alpha).cos()).exp(),
                    gc * alpha.sin(),
                )
            };
            let section = |k: usize| {
                let chi = pairs[k].chi_plus;
                chi.scale(gauge(path.sample(k).alpha))
            };
            let left = |k: usize| pairs[k].chi_plus.conj();
            for k in 0..path.len() - 1 {
                let (phi_k, phi_k1) = (section(k), section(k + 1));
                let (xi_k, xi_k1) = (left(k), left(k + 1));
                // Symmetrized overlap ratio: O(h^2) per step.
                let fwd = (xi_k.dot_h(&phi_k1) / xi_k.dot_h(&phi_k)).ln();
                let bwd = (xi_k1.dot_h(&phi_k1) / xi_k1.dot_h(&phi_k)).ln();
                acc += c(0.0, 0.5) * (fwd + bwd) - c(0.0, 1.0) * (phi_k1.0[0] / phi_k.0[0]).ln();
            }
            assert!(
                (acc - c(-2.0 * PI, 0.0)).norm() < 1e-3,
                "gauge run deviates: {}",
                (acc - c(-2.0 * PI, 0.0)).norm()
            );
        }
    }

    #[test]
    fn path_unwrapping_and_closure() {
        let zc = c(0.0, 1.0);
        let n = 64;
        let samples: alloc::vec::Vec<(f64, C64)> = (0..=n)
            .map(|k| {
                let alpha = 2.0 * PI * k as f64 / n as f64;
                (alpha, C64::from_polar(1e-2, alpha))
            })
            .collect();
        let path = LoopPath::from_samples(zc, &samples).unwrap();
        assert!(path.is_closed());
        assert!((path.turns() - 1.0).abs() < 1e-12);
        // Unwrapped angle is monotone with no 2 pi folds.
        for k in 1..path.len() {
            let da = path.sample(k).alpha - path.sample(k - 1).alpha;
            assert!(da > 0.0 && da < PI);
        }
        // sqrt branch follows the unwrapped sheet: half-angle at the end.
        let end = path.eps_sqrt(path.len() - 1);
        assert!((end - C64::from_polar(0.1, PI)).norm() < 1e-12);
    }

    #[test]
    fn aliasing_is_rejected() {
        let zc = c(0.0, 1.0);
        let samples = [
            (0.0, C64::from_polar(1e-2, 0.0)),
            (1.0, C64::from_polar(1e-2, PI)),
        ];
        assert!(matches!(
            LoopPath::from_samples(zc, &samples),
            Err(PathError::AngularAliasing { .. })
        ));
    }
}
