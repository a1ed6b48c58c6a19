//! EP detection, Jordan-chain root vectors and the similarity frame of the
//! 2x2 Jordan block.
//!
//! At `Z = Z_c = pm i` the two eigen-lines coalesce onto the isotropic line
//! `chi_0 = (1, -Z_c)^T` and the algebraic eigenspace is spanned by a chain
//! `(H - E0) Phi_0 = 0`, `(H - E0) Phi_1 = Phi_0` (and the adjoint chain for
//! the left vectors). The whole chain scales with a single factor `c_0`
//! (resp. `d_0*`), which is the structural difference from the line-plus-
//! scale picture of the diagonalizable case.

// Float is shadowed by the std inherent methods in test builds.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;

use crate::complex2::{Mat2, Vec2, C64};
use crate::error::JordanError;
use crate::model::Hamiltonian2;

/// EP root vectors plus the scalar data of their explicit realization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootChain {
    /// Critical detuning, `+i` or `-i`.
    pub z_c: C64,
    /// Sign `mu` with `Z_c = mu i`.
    pub mu: i8,
    /// `sigma = exp(i mu pi/4)/sqrt(2)`.
    pub sigma: C64,
    /// `q = sqrt(2 omega)`, principal branch.
    pub q: C64,
    pub c0: C64,
    pub d0: C64,
    pub phi0: Vec2,
    pub phi1: Vec2,
    pub xi0: Vec2,
    pub xi1: Vec2,
}

/// Residual magnitudes of the chain relations for a given Hamiltonian.
#[derive(Clone, Copy, Debug, Default)]
pub struct ChainResiduals {
    /// `max(|(H-E0) phi0|, |(H-E0) phi1 - phi0|)`.
    pub right: f64,
    /// Same for the adjoint chain on `xi0`, `xi1`.
    pub left: f64,
    /// Largest deviation in the bi-orthogonality table
    /// `<xi_k|phi_l> = d0 c0 (1 - delta_kl)`.
    pub biorthogonality: f64,
    /// `|phi0^T phi0|` (isotropy of the geometric eigenvector).
    pub isotropy: f64,
}

impl ChainResiduals {
    pub fn max(&self) -> f64 {
        self.right
            .max(self.left)
            .max(self.biorthogonality)
            .max(self.isotropy)
    }
}

impl RootChain {
    /// Evaluates all chain invariants against `h`.
    pub fn residuals(&self, h: &Hamiltonian2) -> ChainResiduals {
        let m = h.matrix() - Mat2::identity().scale(h.e0());
        let madj = m.adjoint();
        let right = (m * self.phi0)
            .max_abs()
            .max((m * self.phi1 - self.phi0).max_abs());
        let left = (madj * self.xi0)
            .max_abs()
            .max((madj * self.xi1 - self.xi0).max_abs());
        let dc = self.d0 * self.c0;
        let biorthogonality = self
            .xi0
            .dot_h(&self.phi0)
            .norm()
            .max(self.xi1.dot_h(&self.phi1).norm())
            .max((self.xi0.dot_h(&self.phi1) - dc).norm())
            .max((self.xi1.dot_h(&self.phi0) - dc).norm());
        let isotropy = self.phi0.dot_t(&self.phi0).norm();
        ChainResiduals {
            right,
            left,
            biorthogonality,
            isotropy,
        }
    }
}

/// Similarity frame `M = P R J2(0) R^{-1} P^{-1}` of the shifted Hamiltonian
/// at the EP, together with the root matrices of the bare Jordan block.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JordanFrame {
    pub mu: i8,
    pub q: C64,
    pub p_matrix: Mat2,
    pub r_matrix: Mat2,
    pub s2: Mat2,
    pub j2: Mat2,
    /// Toeplitz root matrix `Theta = [Theta_0, Theta_1]` of `J2(0)`.
    pub theta_matrix: Mat2,
    /// Hankel root matrix `Psi = [Psi_0, Psi_1]` of `J2(0)^T`.
    pub psi_matrix: Mat2,
}

impl JordanFrame {
    /// `||M - P R J2 R^{-1} P^{-1}||_max` against the given Hamiltonian.
    pub fn reconstruction_residual(&self, h: &Hamiltonian2) -> f64 {
        let m = h.matrix() - Mat2::identity().scale(h.e0());
        let rinv = self.r_matrix.inverse().expect("R is diagonal nonzero");
        let pinv = self.p_matrix.inverse().expect("P is unitary-like");
        let rebuilt = self.p_matrix * self.r_matrix * self.j2 * rinv * pinv;
        (m - rebuilt).max_abs()
    }

    /// `||P^2 - S2||_max`.
    pub fn p_squared_residual(&self) -> f64 {
        (self.p_matrix * self.p_matrix - self.s2).max_abs()
    }

    /// Deviations from `Psi^dagger Theta = S2` and `(Psi S2)^dagger Theta = I`.
    pub fn biorthonormalization_residual(&self) -> f64 {
        let a = (self.psi_matrix.adjoint() * self.theta_matrix - self.s2).max_abs();
        let b = ((self.psi_matrix * self.s2).adjoint() * self.theta_matrix - Mat2::identity())
            .max_abs();
        a.max(b)
    }
}

/// Tests whether `h` sits at an EP: returns `(Z_c, mu)` when `|Z - mu i| < tol`.
pub fn detect_ep(h: &Hamiltonian2, tol: f64) -> Result<Option<(C64, i8)>, JordanError> {
    if h.is_diagonal() {
        return Err(JordanError::DegenerateCoupling);
    }
    let z = h.z().map_err(|_| JordanError::DegenerateCoupling)?;
    for mu in [1i8, -1i8] {
        let z_c = C64::new(0.0, mu as f64);
        if (z - z_c).norm() < tol {
            return Ok(Some((z_c, mu)));
        }
    }
    Ok(None)
}

/// Builds the root-vector chain at an EP with chain scales `c0`, `d0`.
///
/// The representative is the explicit realization
///
/// ```text
/// Phi_0 = sigma q c0 (1, -Z_c)    Phi_1 = sigma q^{-1} c0 (-Z_c, 1)
/// Xi_0  = sigma q* d0* (-Z_c, 1)  Xi_1  = sigma q*^{-1} d0* (1, -Z_c)
/// ```
///
/// with the additive `Phi_0`-ambiguity of `Phi_1` fixed to zero.
pub fn build_root_chain(
    h: &Hamiltonian2,
    c0: C64,
    d0: C64,
    tol: f64,
) -> Result<RootChain, JordanError> {
    let Some((z_c, mu)) = detect_ep(h, tol)? else {
        return Err(JordanError::NotAtEP {
            z: h.z().unwrap_or(C64::new(0.0, 0.0)),
        });
    };
    if c0.norm() == 0.0 || d0.norm() == 0.0 {
        return Err(JordanError::ZeroScale);
    }
    let sigma = sigma_of(mu);
    let q = (h.omega * C64::new(2.0, 0.0)).sqrt();
    let one = C64::new(1.0, 0.0);
    let line0 = Vec2::new(one, -z_c);
    let line1 = Vec2::new(-z_c, one);
    Ok(RootChain {
        z_c,
        mu,
        sigma,
        q,
        c0,
        d0,
        phi0: line0.scale(sigma * q * c0),
        phi1: line1.scale(sigma * c0 / q),
        xi0: line1.scale(sigma * q.conj() * d0.conj()),
        xi1: line0.scale(sigma * d0.conj() / q.conj()),
    })
}

/// Builds the Appendix-style similarity frame at an EP, using the
/// bi-orthonormalized realization of the bare-block root matrices
/// (`c1 = d1 = 0`, `d0 c0 = 1` with `c0 = d0 = 1`).
pub fn build_jordan_frame(h: &Hamiltonian2, tol: f64) -> Result<JordanFrame, JordanError> {
    let Some((_, mu)) = detect_ep(h, tol)? else {
        return Err(JordanError::NotAtEP {
            z: h.z().unwrap_or(C64::new(0.0, 0.0)),
        });
    };
    let sigma = sigma_of(mu);
    let q = (h.omega * C64::new(2.0, 0.0)).sqrt();
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let minus_i_mu = C64::new(0.0, -(mu as f64));
    let p_matrix = Mat2::new(one, minus_i_mu, minus_i_mu, one).scale(sigma);
    let r_matrix = Mat2::new(q, zero, zero, one / q);
    Ok(JordanFrame {
        mu,
        q,
        p_matrix,
        r_matrix,
        s2: Mat2::swap(),
        j2: Mat2::jordan_block(),
        theta_matrix: Mat2::identity(),
        psi_matrix: Mat2::swap(),
    })
}

fn sigma_of(mu: i8) -> C64 {
    C64::from_polar(
        1.0 / 2.0f64.sqrt(),
        mu as f64 * core::f64::consts::FRAC_PI_4,
    )
}
