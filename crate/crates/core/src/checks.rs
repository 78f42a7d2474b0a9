//! Invariant self-checks that can run outside the test harness.
//!
//! Each check draws from a fixed seed, so a run is reproducible, and returns
//! a one-line summary on success or the first violation found.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::{cooling_limit, n_eff_approx_at};
use crate::covariance::{diffusion_matrix, lyapunov_residual, observables, solve_lyapunov};
use crate::dynamics::{assess_stability, linearize, rh_clear_of_margin};
use crate::numerics::{cubic_real_roots, eig4, Mat4};
use crate::steady_state::{consistency_residual, multistability_bounds, solve_at_effective_detuning, solve_branches};
use crate::sweep::{figure_preset, run_sweep};
use crate::units::SystemParams;

pub struct Check {
    pub name: &'static str,
    pub run: fn() -> Result<String, String>,
}

pub const CHECKS: [Check; 8] = [
    Check { name: "cubic roots satisfy the polynomial", run: cubic_roots },
    Check { name: "eigenvalue trace and determinant", run: eigen_trace_det },
    Check { name: "steady-state self-consistency", run: steady_state },
    Check { name: "turning points bound the middle branch", run: turning_points },
    Check { name: "Routh-Hurwitz against eigenvalues", run: routh_hurwitz },
    Check { name: "Lyapunov residual and physicality", run: lyapunov },
    Check { name: "cooling limit identity", run: cooling },
    Check { name: "sweep determinism", run: determinism },
];

fn random_params(rng: &mut ChaCha8Rng) -> SystemParams {
    let p = SystemParams::reference()
        .with_kappa_wm(rng.gen_range(0.1..1.0))
        .with_kerr(rng.gen_range(0.0..0.1))
        .with_power_mw(rng.gen_range(0.1..20.0))
        .with_bare_detuning_wm(rng.gen_range(-3.0..3.0));
    let p = p.with_gain_kappa(rng.gen_range(0.0..1.5));
    SystemParams { opa_phase: rng.gen_range(0.0..2.0 * PI), ..p }
}

fn cubic_roots() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let c: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-10.0..10.0));
        let roots = cubic_real_roots(c[0], c[1], c[2], c[3]).map_err(|e| e.to_string())?;
        for x in roots {
            let scale = c[0].abs() * x.abs().powi(3) + c[1].abs() * x * x + c[2].abs() * x.abs() + c[3].abs();
            let r = (((c[0] * x + c[1]) * x + c[2]) * x + c[3]).abs() / scale;
            worst = worst.max(r);
        }
    }
    if worst < 1e-12 {
        Ok(format!("max relative residual {worst:.1e}"))
    } else {
        Err(format!("relative residual {worst:.1e}"))
    }
}

fn eigen_trace_det() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let m = Mat4(std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-1.0..1.0))));
        let ev = eig4(&m).map_err(|e| e.to_string())?;
        let sum: f64 = ev.iter().map(|z| z.re).sum();
        let prod = ev.iter().fold(num_complex::Complex64::new(1.0, 0.0), |a, z| a * z);
        worst = worst.max((sum - m.trace()).abs() / m.max_abs());
        worst = worst.max((prod.re - m.det()).abs() / m.max_abs().powi(4));
    }
    if worst < 1e-9 {
        Ok(format!("max deviation {worst:.1e}"))
    } else {
        Err(format!("deviation {worst:.1e}"))
    }
}

fn steady_state() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut branches = 0;
    for _ in 0..1000 {
        let p = random_params(&mut rng);
        for b in solve_branches(&p).map_err(|e| e.to_string())? {
            worst = worst.max(consistency_residual(&p, &b));
            branches += 1;
        }
    }
    if worst < 1e-9 {
        Ok(format!("{branches} branches, max residual {worst:.1e}"))
    } else {
        Err(format!("residual {worst:.1e}"))
    }
}

fn turning_points() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut seen = 0;
    for _ in 0..1000 {
        let p = random_params(&mut rng).with_power_mw(rng.gen_range(1.0..160.0));
        let branches = solve_branches(&p).map_err(|e| e.to_string())?;
        if branches.len() != 3 {
            continue;
        }
        seen += 1;
        let Some((lo, hi)) = multistability_bounds(&p) else {
            return Err(format!("three roots without turning points at {p:?}"));
        };
        let mid = branches[1].intensity;
        if !(branches[0].intensity <= lo && mid >= lo && mid <= hi && branches[2].intensity >= hi) {
            return Err(format!("roots {:?} outside ({lo}, {hi})", branches.iter().map(|b| b.intensity).collect::<Vec<_>>()));
        }
    }
    Ok(format!("{seen} three-root draws"))
}

fn routh_hurwitz() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut compared = 0;
    for _ in 0..1000 {
        let p = random_params(&mut rng);
        for b in solve_branches(&p).map_err(|e| e.to_string())? {
            let sys = linearize(&b, &p);
            let r = assess_stability(&sys, &p).map_err(|e| e.to_string())?;
            if rh_clear_of_margin((r.s1, r.s2, r.s3), p.mech_freq, 1e-6) {
                compared += 1;
                if r.rh_disagreement {
                    return Err(format!("verdicts differ at {p:?}"));
                }
            }
        }
    }
    Ok(format!("{compared} branches compared"))
}

fn lyapunov() -> Result<String, String> {
    let base = SystemParams::reference().with_kappa_wm(0.3).with_gain_kappa(0.6).with_kerr(0.05).with_power_mw(5.0);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut worst_res, mut worst_sym, mut n) = (0.0f64, f64::INFINITY, 0);
    for _ in 0..500 {
        let p = SystemParams { opa_phase: rng.gen_range(0.5..1.5) * PI, ..base };
        let (rp, b) = solve_at_effective_detuning(&p, rng.gen_range(0.0..2.0) * p.mech_freq);
        let sys = linearize(&b, &rp);
        if !assess_stability(&sys, &rp).map_err(|e| e.to_string())?.stable {
            continue;
        }
        let obs = observables(&b, &sys, &rp).map_err(|e| e.to_string())?;
        let d = diffusion_matrix(&rp);
        let v = solve_lyapunov(&sys.drift, &d).map_err(|e| e.to_string())?;
        worst_res = worst_res.max(lyapunov_residual(&sys.drift, &d, &v));
        worst_sym = worst_sym.min(obs.min_symplectic);
        n += 1;
    }
    if worst_res <= 1e-8 && worst_sym >= 0.5 - 1e-9 {
        Ok(format!("{n} stable points, max residual {worst_res:.1e}, min symplectic {worst_sym:.6}"))
    } else {
        Err(format!("residual {worst_res:.1e}, min symplectic {worst_sym}"))
    }
}

fn cooling() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let wm = 2.0 * PI * rng.gen_range(1e5..1e8);
        let p = SystemParams {
            mech_freq: wm,
            cavity_decay: rng.gen_range(0.05..2.0) * wm,
            ..SystemParams::reference()
        };
        let p = SystemParams {
            opa_gain: rng.gen_range(0.0..1.0) * p.cavity_decay,
            opa_phase: rng.gen_range(0.5..1.5) * PI,
            ..p
        };
        let lim = cooling_limit(&p);
        let n = n_eff_approx_at(lim.delta_opt + p.opa_detuning_shift(), wm, lim.kappa_plus).map_err(|e| e.to_string())?;
        if lim.n_min > 0.0 {
            worst = worst.max((n - lim.n_min).abs() / lim.n_min);
        }
    }
    if worst <= 1e-12 {
        Ok(format!("max relative deviation {worst:.1e}"))
    } else {
        Err(format!("relative deviation {worst:.1e}"))
    }
}

fn determinism() -> Result<String, String> {
    let preset = figure_preset("fig7").map_err(|e| e.to_string())?;
    let a = run_sweep(&preset.curves[0]).map_err(|e| e.to_string())?;
    let b = run_sweep(&preset.curves[0]).map_err(|e| e.to_string())?;
    // NaN fields compare unequal, so compare the bit patterns through Debug
    if format!("{a:?}") == format!("{b:?}") {
        Ok(format!("{} records identical", a.len()))
    } else {
        Err("repeated sweep differs".into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        for c in CHECKS {
            if let Err(e) = (c.run)() {
                panic!("{}: {e}", c.name);
            }
        }
    }
}
