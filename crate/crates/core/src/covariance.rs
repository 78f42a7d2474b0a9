//! Steady-state covariance matrix of the fluctuations and the observables
//! read off it.
//!
//! Quadratures are normalised so the vacuum has variance 1/2.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::LinearizedSystem;
use crate::numerics::linsolve::{mat_vec, solve_dense};
use crate::numerics::{det2, Mat4, NumericsError};
use crate::steady_state::SteadyStateBranch;
use crate::units::{occupation_temperature, SystemParams};

/// Tolerance below zero before an occupancy counts as negative.
pub const OCCUPANCY_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CovarianceError {
    #[error("Lyapunov system is singular (marginal stability)")]
    SingularSystem,
    #[error("negative occupancy {0}")]
    NegativeOccupancy(f64),
    #[error("partially transposed covariance has no real symplectic eigenvalue")]
    ComplexBranch,
    #[error(transparent)]
    Numerics(NumericsError),
}

impl From<NumericsError> for CovarianceError {
    fn from(e: NumericsError) -> Self {
        match e {
            NumericsError::SingularMatrix => CovarianceError::SingularSystem,
            other => CovarianceError::Numerics(other),
        }
    }
}

/// Symmetric covariance of `(dq, dp, dx, dy)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovarianceMatrix {
    pub v: Mat4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Occupancy {
    pub n_eff: f64,
    /// Kelvin; 0 when `ground_state` is set.
    pub t_eff: f64,
    /// `n_eff <= 0`, where the temperature is undefined.
    pub ground_state: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    pub covariance: CovarianceMatrix,
    pub n_eff: f64,
    pub t_eff: f64,
    pub ground_state: bool,
    pub e_n: f64,
    /// `<da^dagger da>`.
    pub photon_fluct: f64,
    /// `photon_fluct / I`.
    pub linearization_ratio: f64,
    /// Relative Lyapunov residual.
    pub residual: f64,
    /// Smaller symplectic eigenvalue of V.
    pub min_symplectic: f64,
}

/// `Diag[0, gamma_m (2 nbar + 1), kappa, kappa]`.
pub fn diffusion_matrix(params: &SystemParams) -> Mat4 {
    let nbar = params.derive().nbar;
    Mat4::diag([
        0.0,
        params.mech_damping * (2.0 * nbar + 1.0),
        params.cavity_decay,
        params.cavity_decay,
    ])
}

/// Solves `M V + V M^T = -D` through the 16x16 vectorised system.
///
/// Both matrices are rescaled by their largest entry first so the linear
/// system is O(1); V is unchanged by the common scaling. One step of
/// iterative refinement follows the direct solve.
pub fn solve_lyapunov(m: &Mat4, d: &Mat4) -> Result<CovarianceMatrix, CovarianceError> {
    let s = m.max_abs();
    if s == 0.0 {
        return Err(CovarianceError::SingularSystem);
    }
    let ms = m.scale(1.0 / s);
    let ds = d.scale(1.0 / s);
    // vec is row-major: index 4 i + j holds V[i][j]
    let mut a = vec![vec![0.0; 16]; 16];
    for i in 0..4 {
        for j in 0..4 {
            let row = 4 * i + j;
            for k in 0..4 {
                a[row][4 * k + j] += ms[(i, k)];
                a[row][4 * i + k] += ms[(j, k)];
            }
        }
    }
    let b: Vec<f64> = (0..16).map(|r| -ds[(r / 4, r % 4)]).collect();
    let mut x = solve_dense(&a, &b)?;
    let ax = mat_vec(&a, &x);
    let r: Vec<f64> = b.iter().zip(&ax).map(|(p, q)| p - q).collect();
    if let Ok(dx) = solve_dense(&a, &r) {
        x.iter_mut().zip(dx).for_each(|(xi, e)| *xi += e);
    }
    let v = Mat4(std::array::from_fn(|i| std::array::from_fn(|j| x[4 * i + j])));
    Ok(CovarianceMatrix { v: v.symmetrized() })
}

/// `||M V + V M^T + D||_F / ||D||_F`.
pub fn lyapunov_residual(m: &Mat4, d: &Mat4, v: &CovarianceMatrix) -> f64 {
    let r = *m * v.v + v.v * m.transpose() + *d;
    let dn = d.frobenius_norm();
    if dn == 0.0 {
        r.frobenius_norm()
    } else {
        r.frobenius_norm() / dn
    }
}

/// Symplectic eigenvalues `(nu_-, nu_+)` of a two-mode covariance matrix with
/// the given invariant `sigma` (`det A + det B +/- 2 det C`).
fn symplectic_pair(sigma: f64, det_v: f64) -> Option<(f64, f64)> {
    let disc = sigma * sigma - 4.0 * det_v;
    let tol = 1e-12 * sigma * sigma;
    if disc < -tol {
        return None;
    }
    let root = disc.max(0.0).sqrt();
    let plus_sq = 0.5 * (sigma + root);
    if plus_sq <= 0.0 {
        return None;
    }
    // nu_-^2 nu_+^2 = det V avoids the cancellation in sigma - root
    let minus_sq = det_v / plus_sq;
    if minus_sq < 0.0 {
        return None;
    }
    Some((minus_sq.sqrt(), plus_sq.sqrt()))
}

/// Symplectic eigenvalues of V itself; both are >= 1/2 for a physical state.
pub fn symplectic_eigenvalues(cov: &CovarianceMatrix) -> Option<(f64, f64)> {
    let (a, b, c) = cov.v.blocks();
    symplectic_pair(det2(&a) + det2(&b) + 2.0 * det2(&c), cov.v.det())
}

/// Smallest symplectic eigenvalue of the partial transpose.
pub fn partial_transpose_min_symplectic(cov: &CovarianceMatrix) -> Result<f64, CovarianceError> {
    let (a, b, c) = cov.v.blocks();
    let sigma = det2(&a) + det2(&b) - 2.0 * det2(&c);
    symplectic_pair(sigma, cov.v.det())
        .map(|(lo, _)| lo)
        .ok_or(CovarianceError::ComplexBranch)
}

/// `E_N = max(0, -ln(2 eta_-))`.
pub fn log_negativity(cov: &CovarianceMatrix) -> Result<f64, CovarianceError> {
    let eta = partial_transpose_min_symplectic(cov)?;
    Ok((-(2.0 * eta).ln()).max(0.0))
}

/// `n_eff = (V11 + V22 - 1) / 2` and the matching temperature.
pub fn mechanical_occupancy(cov: &CovarianceMatrix, params: &SystemParams) -> Result<Occupancy, CovarianceError> {
    let n = 0.5 * (cov.v[(0, 0)] + cov.v[(1, 1)] - 1.0);
    if n < -OCCUPANCY_FLOOR {
        return Err(CovarianceError::NegativeOccupancy(n));
    }
    let n_eff = n.max(0.0);
    Ok(match occupation_temperature(n_eff, params.mech_freq) {
        Some(t) => Occupancy { n_eff, t_eff: t, ground_state: false },
        None => Occupancy { n_eff, t_eff: 0.0, ground_state: true },
    })
}

/// `<da^dagger da> = (V33 + V44 - 1) / 2`.
pub fn photon_fluctuation(cov: &CovarianceMatrix) -> f64 {
    0.5 * (cov.v[(2, 2)] + cov.v[(3, 3)] - 1.0)
}

/// Fluctuation photon number over the mean photon number; infinite for an
/// empty cavity with nonzero fluctuations.
pub fn linearization_ratio(cov: &CovarianceMatrix, branch: &SteadyStateBranch) -> f64 {
    let f = photon_fluctuation(cov).max(0.0);
    if f == 0.0 {
        0.0
    } else {
        f / branch.intensity
    }
}

/// Full covariance analysis of one stable operating point.
pub fn observables(
    branch: &SteadyStateBranch,
    sys: &LinearizedSystem,
    params: &SystemParams,
) -> Result<Observables, CovarianceError> {
    let d = diffusion_matrix(params);
    let covariance = solve_lyapunov(&sys.drift, &d)?;
    let occ = mechanical_occupancy(&covariance, params)?;
    let e_n = log_negativity(&covariance)?;
    let min_symplectic = symplectic_eigenvalues(&covariance).map(|p| p.0).unwrap_or(f64::NAN);
    Ok(Observables {
        covariance,
        n_eff: occ.n_eff,
        t_eff: occ.t_eff,
        ground_state: occ.ground_state,
        e_n,
        photon_fluct: photon_fluctuation(&covariance),
        linearization_ratio: linearization_ratio(&covariance, branch),
        residual: lyapunov_residual(&sys.drift, &d, &covariance),
        min_symplectic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commuting_case() {
        let k = 3.0;
        let m = Mat4::identity().scale(-k);
        let d = Mat4::diag([1.0, 2.0, 3.0, 4.0]);
        let v = solve_lyapunov(&m, &d).unwrap();
        let want = d.scale(1.0 / (2.0 * k));
        for i in 0..4 {
            for j in 0..4 {
                assert!((v.v[(i, j)] - want[(i, j)]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn marginal_system_is_singular() {
        let m = Mat4([
            [0.0, 1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, -1.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
        ]);
        let d = Mat4::diag([0.0, 1.0, 1.0, 1.0]);
        assert_eq!(solve_lyapunov(&m, &d), Err(CovarianceError::SingularSystem));
    }

    #[test]
    fn diffusion_entries() {
        let p = SystemParams::reference();
        let d = diffusion_matrix(&p);
        let nbar = p.derive().nbar;
        assert_eq!(d[(1, 1)], p.mech_damping * (2.0 * nbar + 1.0));
        assert!((d[(1, 1)] / p.mech_damping - 1666.8).abs() < 1.0);
        assert_eq!(d[(2, 2)], p.cavity_decay);
        let cold = SystemParams { bath_temperature: 0.0, ..p };
        assert_eq!(diffusion_matrix(&cold), Mat4::diag([0.0, p.mech_damping, p.cavity_decay, p.cavity_decay]));
    }

    #[test]
    fn vacuum_state() {
        let v = CovarianceMatrix { v: Mat4::identity().scale(0.5) };
        assert_eq!(log_negativity(&v).unwrap(), 0.0);
        assert!((partial_transpose_min_symplectic(&v).unwrap() - 0.5).abs() < 1e-15);
        let occ = mechanical_occupancy(&v, &SystemParams::reference()).unwrap();
        assert_eq!(occ.n_eff, 0.0);
        assert!(occ.ground_state);
        assert_eq!(occ.t_eff, 0.0);
    }

    fn two_mode_squeezed(r: f64) -> CovarianceMatrix {
        let c = 0.5 * (2.0 * r).cosh();
        let s = 0.5 * (2.0 * r).sinh();
        CovarianceMatrix {
            v: Mat4([
                [c, 0.0, s, 0.0],
                [0.0, c, 0.0, -s],
                [s, 0.0, c, 0.0],
                [0.0, -s, 0.0, c],
            ]),
        }
    }

    #[test]
    fn two_mode_squeezed_state() {
        for r in [0.01, 0.1, 0.5, 1.0, 2.0] {
            let v = two_mode_squeezed(r);
            let e = log_negativity(&v).unwrap();
            assert!((e - 2.0 * r).abs() < 1e-9, "{r}: {e}");
            // pure state: both eigenvalues 1/2, resolved to sqrt(eps) through the
            // vanishing discriminant
            let (lo, hi) = symplectic_eigenvalues(&v).unwrap();
            assert!((lo - 0.5).abs() < 1e-6 * v.v.max_abs() && (hi - 0.5).abs() < 1e-6 * v.v.max_abs());
        }
    }

    #[test]
    fn partial_transpose_convention_independent() {
        // flipping the momentum of either mode gives the same invariant
        let v = two_mode_squeezed(0.3).v;
        let flip = |k: usize| {
            let p = Mat4::diag(std::array::from_fn(|i| if i == k { -1.0 } else { 1.0 }));
            p * v * p
        };
        let sig = |m: &Mat4| {
            let (a, b, c) = m.blocks();
            det2(&a) + det2(&b) + 2.0 * det2(&c)
        };
        let direct = {
            let (a, b, c) = v.blocks();
            det2(&a) + det2(&b) - 2.0 * det2(&c)
        };
        assert!((sig(&flip(1)) - direct).abs() < 1e-12);
        assert!((sig(&flip(3)) - direct).abs() < 1e-12);
    }

    #[test]
    fn thermal_fixed_point() {
        let p = SystemParams::reference();
        let nbar = p.derive().nbar;
        let v = CovarianceMatrix { v: Mat4::diag([nbar + 0.5, nbar + 0.5, 0.5, 0.5]) };
        let occ = mechanical_occupancy(&v, &p).unwrap();
        assert!((occ.n_eff - nbar).abs() < 1e-9);
        assert!((occ.t_eff - p.bath_temperature).abs() < 1e-9);
        let bad = CovarianceMatrix { v: Mat4::diag([0.1, 0.1, 0.5, 0.5]) };
        assert!(matches!(mechanical_occupancy(&bad, &p), Err(CovarianceError::NegativeOccupancy(_))));
    }

    #[test]
    fn linearization_ratio_definition() {
        let p = SystemParams::reference();
        let b = crate::steady_state::branch_from_intensity(&p, 1e9);
        let vac = CovarianceMatrix { v: Mat4::identity().scale(0.5) };
        assert_eq!(linearization_ratio(&vac, &b), 0.0);
        let nc = 3.0;
        let th = CovarianceMatrix { v: Mat4::diag([0.5, 0.5, nc + 0.5, nc + 0.5]) };
        assert!((linearization_ratio(&th, &b) - nc / 1e9).abs() < 1e-24);
    }
}
