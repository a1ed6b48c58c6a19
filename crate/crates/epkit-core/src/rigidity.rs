//! Phase rigidity `r = Phi^T Phi / <Phi|Phi>` as a distance measure to EPs,
//! its norm decomposition and bounds, the EP asymptote `r ~ |2 eps|^{1/2}`,
//! and landscape scans over 2-D parameter grids.

use alloc::vec::Vec;

// Float is shadowed by the std inherent methods in test builds.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;

use crate::complex2::{Vec2, C64};
use crate::error::RigidityError;
use crate::model::{
    eigen_decompose, normalize_diagonal_chart, BranchSign, Hamiltonian2, NormalizationGauge,
};

/// Phase rigidity of a bilinearly normalized vector, with the real/imaginary
/// norm decomposition that bounds it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RigidityReport {
    /// `r = 1/||Phi||^2`, in `[0, 1]`.
    pub r: f64,
    /// `Phi_r^T Phi_r` (equals `cosh^2 beta`).
    pub re_dot: f64,
    /// `Phi_i^T Phi_i` (equals `sinh^2 beta`).
    pub im_dot: f64,
    /// Cross term `Phi_r^T Phi_i`; zero for normalized states.
    pub cross_dot: f64,
    /// Hyperbolic diagnostic `beta = asinh sqrt(Phi_i^T Phi_i)`.
    pub beta: f64,
}

/// Phase rigidity of `phi` in the instantaneous picture.
///
/// Requires `Phi^T Phi = 1` within `norm_tol`; splitting
/// `Phi = Phi_r + i Phi_i` then gives `Phi_r^T Phi_r - Phi_i^T Phi_i = 1`,
/// `Phi_r^T Phi_i = 0` and `||Phi||^2 = 2 Phi_i^T Phi_i + 1 >= 1`, so the
/// returned `r` lies in `[0, 1]`.
pub fn phase_rigidity(phi: &Vec2, norm_tol: f64) -> Result<RigidityReport, RigidityError> {
    let bilinear = phi.dot_t(phi);
    if (bilinear - C64::new(1.0, 0.0)).norm() > norm_tol {
        return Err(RigidityError::NotNormalized);
    }
    let re = Vec2::new(
        C64::new(phi.0[0].re, 0.0),
        C64::new(phi.0[1].re, 0.0),
    );
    let im = Vec2::new(
        C64::new(phi.0[0].im, 0.0),
        C64::new(phi.0[1].im, 0.0),
    );
    let re_dot = re.dot_t(&re).re;
    let im_dot = im.dot_t(&im).re;
    let cross_dot = re.dot_t(&im).re;
    Ok(RigidityReport {
        r: 1.0 / phi.norm_sqr(),
        re_dot,
        im_dot,
        cross_dot,
        beta: im_dot.sqrt().asinh(),
    })
}

/// Per-point deviation data of the EP asymptote check.
#[derive(Clone, Debug)]
pub struct AsymptoteReport {
    /// `(|eps|, r, |r / |2 eps|^{1/2} - 1|)` per grid point.
    pub points: Vec<(f64, f64, f64)>,
    pub max_deviation: f64,
}

/// Checks `r ~ |2 eps|^{1/2}` on a real `eps` grid approaching `z_c`.
pub fn rigidity_asymptote_check(
    z_c: C64,
    omega: C64,
    eps_grid: &[f64],
    ep_tol: f64,
) -> Result<AsymptoteReport, RigidityError> {
    let mut points = Vec::with_capacity(eps_grid.len());
    let mut max_deviation: f64 = 0.0;
    for (k, &eps) in eps_grid.iter().enumerate() {
        let h = Hamiltonian2::from_reduced(C64::new(0.0, 0.0), omega, z_c + C64::new(eps, 0.0));
        let pair = eigen_decompose(&h, BranchSign::Plus, ep_tol)
            .map_err(|_| RigidityError::EpCollision { index: k })?;
        let pair = normalize_diagonal_chart(&pair, NormalizationGauge::Instantaneous, ep_tol)
            .map_err(|_| RigidityError::EpCollision { index: k })?;
        let phi = pair.phi(BranchSign::Plus).expect("scales set");
        let report = phase_rigidity(&phi, 1e-8)?;
        let asym = (2.0 * eps.abs()).sqrt();
        let dev = (report.r / asym - 1.0).abs();
        max_deviation = max_deviation.max(dev);
        points.push((eps.abs(), report.r, dev));
    }
    Ok(AsymptoteReport {
        points,
        max_deviation,
    })
}

/// Hamiltonian field driven by a scan axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HField {
    Eps1Re,
    Eps1Im,
    Eps2Re,
    Eps2Im,
    OmegaRe,
    OmegaIm,
}

impl HField {
    fn apply(self, h: &mut Hamiltonian2, value: f64) {
        match self {
            HField::Eps1Re => h.eps1.re = value,
            HField::Eps1Im => h.eps1.im = value,
            HField::Eps2Re => h.eps2.re = value,
            HField::Eps2Im => h.eps2.im = value,
            HField::OmegaRe => h.omega.re = value,
            HField::OmegaIm => h.omega.im = value,
        }
    }
}

/// One scan axis: `n` evenly spaced values of `field` from `start` to `stop`.
#[derive(Clone, Copy, Debug)]
pub struct Axis {
    pub field: HField,
    pub start: f64,
    pub stop: f64,
    pub n: usize,
}

impl Axis {
    pub fn value(&self, k: usize) -> f64 {
        if self.n <= 1 {
            self.start
        } else {
            self.start + (self.stop - self.start) * k as f64 / (self.n - 1) as f64
        }
    }
}

/// Scan specification: a base Hamiltonian plus two axis bindings.
#[derive(Clone, Copy, Debug)]
pub struct ScanSpec {
    pub base: Hamiltonian2,
    pub x: Axis,
    pub y: Axis,
    pub ep_tol: f64,
}

/// Per-cell record of the rigidity landscape.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RigidityCell {
    pub e_plus: C64,
    pub e_minus: C64,
    /// Rigidity of the "+" branch (the reported default).
    pub r_plus: f64,
    pub r_minus: f64,
    /// EP-tolerance cells carry `r = 0` by convention instead of NaN.
    pub ep_flag: bool,
}

/// The scanned landscape; cells are stored row-major with `x` varying
/// fastest (`index = iy * nx + ix`).
#[derive(Clone, Debug)]
pub struct RigidityGrid {
    pub x_values: Vec<f64>,
    pub y_values: Vec<f64>,
    pub cells: Vec<RigidityCell>,
}

impl RigidityGrid {
    pub fn cell(&self, ix: usize, iy: usize) -> &RigidityCell {
        &self.cells[iy * self.x_values.len() + ix]
    }
}

fn validate(spec: &ScanSpec) -> Result<(), RigidityError> {
    if spec.x.field == spec.y.field {
        return Err(RigidityError::InvalidBinding);
    }
    if spec.x.n == 0 || spec.y.n == 0 {
        return Err(RigidityError::InvalidBinding);
    }
    for a in [&spec.x, &spec.y] {
        if !a.start.is_finite() || !a.stop.is_finite() {
            return Err(RigidityError::InvalidBinding);
        }
    }
    Ok(())
}

/// Computes a single landscape cell; pure, so scans parallelize over cells
/// with an index-ordered gather.
pub fn scan_cell(spec: &ScanSpec, ix: usize, iy: usize) -> RigidityCell {
    let mut h = spec.base;
    spec.x.field.apply(&mut h, spec.x.value(ix));
    spec.y.field.apply(&mut h, spec.y.value(iy));
    let pair = match eigen_decompose(&h, BranchSign::Plus, spec.ep_tol) {
        Ok(p) => p,
        Err(_) => {
            // EP cell: coalesced eigenvalues, r = 0 by convention.
            let e0 = h.e0();
            return RigidityCell {
                e_plus: e0,
                e_minus: e0,
                r_plus: 0.0,
                r_minus: 0.0,
                ep_flag: true,
            };
        }
    };
    match normalize_diagonal_chart(&pair, NormalizationGauge::Instantaneous, spec.ep_tol) {
        Ok(n) => {
            let r_plus = phase_rigidity(&n.phi(BranchSign::Plus).unwrap(), 1e-8)
                .map(|rep| rep.r)
                .unwrap_or(0.0);
            let r_minus = phase_rigidity(&n.phi(BranchSign::Minus).unwrap(), 1e-8)
                .map(|rep| rep.r)
                .unwrap_or(0.0);
            RigidityCell {
                e_plus: pair.e_plus,
                e_minus: pair.e_minus,
                r_plus,
                r_minus,
                ep_flag: false,
            }
        }
        Err(_) => RigidityCell {
            e_plus: pair.e_plus,
            e_minus: pair.e_minus,
            r_plus: 0.0,
            r_minus: 0.0,
            ep_flag: true,
        },
    }
}

/// Scans the rigidity landscape over the grid, sequentially and
/// deterministically. The output is a pure function of the spec, so any
/// cell-parallel driver gathering by index produces identical grids.
pub fn scan_landscape(spec: &ScanSpec) -> Result<RigidityGrid, RigidityError> {
    validate(spec)?;
    let x_values: Vec<f64> = (0..spec.x.n).map(|k| spec.x.value(k)).collect();
    let y_values: Vec<f64> = (0..spec.y.n).map(|k| spec.y.value(k)).collect();
    let mut cells = Vec::with_capacity(spec.x.n * spec.y.n);
    for iy in 0..spec.y.n {
        for ix in 0..spec.x.n {
            cells.push(scan_cell(spec, ix, iy));
        }
    }
    Ok(RigidityGrid {
        x_values,
        y_values,
        cells,
    })
}
