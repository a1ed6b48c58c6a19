//! Randomized cross-checks of the eigen-decomposition against an
//! independent characteristic-polynomial solver, plus the algebraic
//! identities that hold for every diagonalizable input.

use epkit_core::complex2::{Vec2, C64};
use epkit_core::model::{
    build_hamiltonian, eigen_decompose, normalize_diagonal_chart, BranchSign, Hamiltonian2,
    NormalizationGauge,
};
use epkit_core::DEFAULT_EP_TOL;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Independent oracle: eigenvalues of [[e1, w], [w, e2]] as roots of the
/// characteristic polynomial x^2 - tr x + det, solved in the
/// cancellation-stable form (q = -(b + sgn sqrt(b^2-4c))/2, roots q, c/q).
fn charpoly_eigenvalues(h: &Hamiltonian2) -> (C64, C64) {
    let b = -(h.eps1 + h.eps2);
    let c = h.eps1 * h.eps2 - h.omega * h.omega;
    let disc = (b * b - c * C64::new(4.0, 0.0)).sqrt();
    // Pick the sign that avoids cancellation in b + sgn*disc.
    let plus = b + disc;
    let minus = b - disc;
    let q = if plus.norm() >= minus.norm() {
        -(plus) * C64::new(0.5, 0.0)
    } else {
        -(minus) * C64::new(0.5, 0.0)
    };
    if q.norm() == 0.0 {
        return (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    }
    (q, c / q)
}

fn set_match_distance(a: (C64, C64), b: (C64, C64)) -> f64 {
    let direct = (a.0 - b.0).norm().max((a.1 - b.1).norm());
    let swapped = (a.0 - b.1).norm().max((a.1 - b.0).norm());
    direct.min(swapped)
}

fn random_c64(rng: &mut impl Rng, scale: f64) -> C64 {
    C64::new(
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
    )
}

#[test]
fn eigenvalues_match_charpoly_oracle_on_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x45504b49);
    let mut checked = 0usize;
    while checked < 10_000 {
        let h = build_hamiltonian(
            random_c64(&mut rng, 2.0),
            random_c64(&mut rng, 2.0),
            random_c64(&mut rng, 2.0),
        );
        let pair = match eigen_decompose(&h, BranchSign::Plus, DEFAULT_EP_TOL) {
            Ok(p) => p,
            Err(_) => continue, // EP-ball or omega = 0 draws are skipped
        };
        let oracle = charpoly_eigenvalues(&h);
        let scale = h.matrix().frobenius_norm().max(1e-30);
        let dist = set_match_distance((pair.e_plus, pair.e_minus), oracle);
        assert!(
            dist / scale < 1e-10,
            "eigenvalue mismatch {dist:e} at scale {scale:e} for {h:?}"
        );
        checked += 1;
    }
}

#[test]
fn trace_and_determinant_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(7_031_024);
    let mut checked = 0usize;
    while checked < 10_000 {
        let h = build_hamiltonian(
            random_c64(&mut rng, 3.0),
            random_c64(&mut rng, 3.0),
            random_c64(&mut rng, 3.0),
        );
        let pair = match eigen_decompose(&h, BranchSign::Plus, DEFAULT_EP_TOL) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let tr = h.eps1 + h.eps2;
        let det = h.eps1 * h.eps2 - h.omega * h.omega;
        let tr_res = (pair.e_plus + pair.e_minus - tr).norm() / tr.norm().max(1.0);
        let det_res = (pair.e_plus * pair.e_minus - det).norm() / det.norm().max(1.0);
        assert!(tr_res < 1e-12, "trace residual {tr_res:e}");
        assert!(det_res < 1e-12, "det residual {det_res:e}");
        checked += 1;
    }
}

#[test]
fn biorthogonality_up_to_large_detuning() {
    // chi_+^T chi_- stays at machine zero out to |Z| = 1e3 thanks to the
    // reciprocal form of the affine representatives.
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..2_000 {
        let magnitude = 10f64.powf(rng.gen_range(-1.0..3.0));
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        let z = C64::from_polar(magnitude, phase);
        let h = Hamiltonian2::from_reduced(random_c64(&mut rng, 1.0), C64::new(1.0, 0.0), z);
        let pair = match eigen_decompose(&h, BranchSign::Plus, DEFAULT_EP_TOL) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let cross = pair.chi_plus.dot_t(&pair.chi_minus).norm();
        assert!(cross < 1e-14, "cross product {cross:e} at |Z| = {magnitude:e}");
    }
}

#[test]
fn hermitian_subcase_is_real() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..2_000 {
        let h = build_hamiltonian(
            C64::new(rng.gen_range(-2.0..2.0), 0.0),
            C64::new(rng.gen_range(-2.0..2.0), 0.0),
            C64::new(rng.gen_range(0.05..2.0), 0.0),
        );
        let pair = eigen_decompose(&h, BranchSign::Plus, DEFAULT_EP_TOL).unwrap();
        assert!(pair.e_plus.im.abs() < 1e-14);
        assert!(pair.e_minus.im.abs() < 1e-14);
        let pair =
            normalize_diagonal_chart(&pair, NormalizationGauge::Instantaneous, 1e-12).unwrap();
        for b in [BranchSign::Plus, BranchSign::Minus] {
            let phi: Vec2 = pair.phi(b).unwrap();
            // Real up to a global phase: with the principal-root gauge the
            // instantaneous sections come out real outright.
            assert!(phi.0[0].im.abs() < 1e-13 && phi.0[1].im.abs() < 1e-13);
        }
    }
}

#[test]
fn eigenvector_residuals_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut checked = 0usize;
    while checked < 5_000 {
        let h = build_hamiltonian(
            random_c64(&mut rng, 2.0),
            random_c64(&mut rng, 2.0),
            random_c64(&mut rng, 2.0),
        );
        let pair = match eigen_decompose(&h, BranchSign::Plus, DEFAULT_EP_TOL) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let m = h.matrix();
        let scale = m.frobenius_norm().max(1.0);
        for (e, chi) in [(pair.e_plus, pair.chi_plus), (pair.e_minus, pair.chi_minus)] {
            let residual = (m * chi - chi.scale(e)).max_abs() / (scale * chi.max_abs());
            assert!(residual < 1e-12, "residual {residual:e} for {h:?}");
        }
        checked += 1;
    }
}
