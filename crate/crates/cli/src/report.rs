//! Human-readable report for a single operating point.

use std::fmt::Write;

use optomech::analytic::cooling_limit;
use optomech::steady_state::multistability_bounds;
use optomech::sweep::SweepRecord;
use optomech::SystemParams;

fn opt(v: Option<f64>, digits: usize) -> String {
    v.map_or("-".into(), |x| format!("{x:.digits$e}"))
}

pub fn point_report(p: &SystemParams, records: &[SweepRecord]) -> String {
    let wm = p.mech_freq;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "omega_m = {:.6e} rad/s, kappa = {:.4} omega_m, gamma_m = {:.4e} rad/s, T0 = {:.4} mK",
        wm,
        p.cavity_decay / wm,
        p.mech_damping,
        p.bath_temperature * 1e3
    );
    let _ = writeln!(
        s,
        "P = {:.6} mW, Delta0 = {:.6} omega_m, G = {:.4} kappa, theta = {:.6} pi, chi = {:.6} 1/s",
        p.input_power * 1e3,
        p.bare_detuning / wm,
        p.opa_gain / p.cavity_decay,
        p.opa_phase / std::f64::consts::PI,
        p.kerr_coeff
    );
    let d = p.derive();
    let _ = writeln!(s, "g0 = {:.6e} rad/s, epsilon = {:.6e} rad/s, nbar = {:.6}, beta = {:.6e}", d.g0, d.epsilon, d.nbar, d.beta);
    match multistability_bounds(p) {
        Some((lo, hi)) => {
            let _ = writeln!(s, "turning-point intensities: {lo:.6e} .. {hi:.6e}");
        }
        None => {
            let _ = writeln!(s, "turning-point intensities: none (single valued)");
        }
    }
    let lim = cooling_limit(p);
    let _ = writeln!(
        s,
        "cooling limit: Delta_opt = {:.6} omega_m, n_min = {:.6e}, kappa_+ = {:.6} omega_m",
        lim.delta_opt / wm,
        lim.n_min,
        lim.kappa_plus / wm
    );
    let _ = writeln!(s, "{} branch(es)", records.len());
    for r in records {
        let _ = writeln!(s);
        let _ = writeln!(
            s,
            "branch {} ({}): I = {:.6e}, Delta = {:.6} omega_m, g1 = {:.6} omega_m",
            r.branch_index,
            r.segment.as_str(),
            r.intensity,
            r.delta_eff_wm,
            r.g1_wm
        );
        let verdict = if r.stable { "stable" } else { "unstable" };
        let _ = writeln!(
            s,
            "  {verdict}: max Re(lambda) = {:.6e}, s1 = {:.6e}, s2 = {:.6e}, s3 = {:.6e}{}",
            r.max_real_part,
            r.s1,
            r.s2,
            r.s3,
            if r.rh_disagreement { " (Routh-Hurwitz disagrees)" } else { "" }
        );
        let _ = writeln!(s, "  eta1 = {}, eta2 = {:.6}", opt(r.eta1, 6), r.eta2);
        if r.has_observables() {
            let t = match (r.t_eff, r.ground_state) {
                (_, Some(true)) => "ground state".to_string(),
                (Some(t), _) => format!("{:.6e} mK", t * 1e3),
                _ => "-".into(),
            };
            let _ = writeln!(s, "  n_eff = {}, T_eff = {t}, E_N = {}", opt(r.n_eff, 6), opt(r.e_n, 6));
            let _ = writeln!(
                s,
                "  photon fluctuations = {}, ratio to mean = {}{}",
                opt(r.photon_fluct, 4),
                opt(r.linearization_ratio, 4),
                if r.linearization_suspect { " (linearization suspect)" } else { "" }
            );
            let _ = writeln!(
                s,
                "  Lyapunov residual = {}, min symplectic eigenvalue = {}",
                opt(r.lyapunov_residual, 2),
                opt(r.min_symplectic, 9)
            );
        }
        let _ = writeln!(
            s,
            "  analytic n_eff = {} ({})",
            opt(r.n_eff_analytic, 6),
            if r.analytic_valid { "inside validity regime" } else { "outside validity regime" }
        );
        if let Some(e) = &r.error {
            let _ = writeln!(s, "  error: {e}");
        }
    }
    s
}
