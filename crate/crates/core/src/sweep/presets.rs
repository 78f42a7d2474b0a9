//! Named parameter sets for each figure and the table.
//!
//! Every preset starts from [`SystemParams::reference`] (1 mm cavity, 810 nm,
//! 5 ng mirror at 10 MHz, 400 mK bath). Figures 2, 3 and 11 use
//! `kappa = 0.9 omega_m`, the others `kappa = 0.3 omega_m`. Where a figure
//! shows several curves whose exact values are not given, representative
//! values are used.

use super::{run_sweep, table, Axis, BranchPolicy, SweepError, SweepParam, SweepRecord, SweepSpec, DEFAULT_COUNT};
use crate::units::SystemParams;

pub const PRESET_IDS: [&str; 14] = [
    "fig2a", "fig2b", "fig2c", "fig3", "fig4", "fig5a", "fig5b", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11",
    "table1",
];

/// Points per axis for two-dimensional presets.
pub const COUNT_2D: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    /// Plain grid evaluation of every curve.
    Grid,
    /// Each curve is an effective-detuning scan; report the point of maximal
    /// `E_N` after refinement.
    MaximizeEntanglement,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub id: &'static str,
    pub description: &'static str,
    pub curves: Vec<SweepSpec>,
    pub protocol: Protocol,
}

impl FigurePreset {
    /// Runs every curve; records come out curve by curve.
    pub fn run(&self) -> Result<Vec<SweepRecord>, SweepError> {
        let mut out = Vec::new();
        for spec in &self.curves {
            match self.protocol {
                Protocol::Grid => out.extend(run_sweep(spec)?),
                Protocol::MaximizeEntanglement => {
                    if let Some(r) = table::maximize_entanglement(spec)? {
                        out.push(r);
                    }
                }
            }
        }
        Ok(out)
    }
}

fn wide_cavity() -> SystemParams {
    SystemParams::reference()
}

fn narrow_cavity() -> SystemParams {
    SystemParams::reference().with_kappa_wm(0.3)
}

fn wm() -> f64 {
    SystemParams::reference().mech_freq
}

fn detuning_axis(param: SweepParam, lo_wm: f64, hi_wm: f64, count: usize) -> Axis {
    Axis::new(param, lo_wm * wm(), hi_wm * wm(), count)
}

fn power_axis(lo_mw: f64, hi_mw: f64, count: usize) -> Axis {
    Axis::new(SweepParam::InputPower, lo_mw * 1e-3, hi_mw * 1e-3, count)
}

/// Phase with `kappa + 2G cos(theta) = 0`, in (pi/2, pi).
pub fn zero_kappa_plus_phase(params: &SystemParams) -> f64 {
    (-params.cavity_decay / (2.0 * params.opa_gain)).clamp(-1.0, 1.0).acos()
}

fn grid(id: &'static str, description: &'static str, curves: Vec<SweepSpec>) -> FigurePreset {
    FigurePreset { id, description, curves, protocol: Protocol::Grid }
}

pub fn figure_preset(id: &str) -> Result<FigurePreset, SweepError> {
    let bare_axis = || vec![detuning_axis(SweepParam::BareDetuning, -8.0, 4.0, DEFAULT_COUNT)];
    let eff_axis = |lo, hi| vec![detuning_axis(SweepParam::EffectiveDetuning, lo, hi, DEFAULT_COUNT)];
    let preset = match id {
        "fig2a" => {
            let base = wide_cavity().with_gain_kappa(0.6).with_phase_pi(0.5);
            let curves = [0.01, 0.04, 0.1]
                .into_iter()
                .map(|chi| SweepSpec::new(format!("chi={chi}"), base.with_kerr(chi), bare_axis()))
                .collect();
            grid("fig2a", "intensity vs bare detuning for several Kerr strengths (G=0.6 kappa, theta=pi/2)", curves)
        }
        "fig2b" => {
            let base = wide_cavity().with_kerr(0.1).with_phase_pi(0.5);
            let curves = [0.0, 0.3, 0.6]
                .into_iter()
                .map(|g| SweepSpec::new(format!("G={g}kappa"), base.with_gain_kappa(g), bare_axis()))
                .collect();
            grid("fig2b", "intensity vs bare detuning for several OPA gains (chi=0.1, theta=pi/2)", curves)
        }
        "fig2c" => {
            let base = wide_cavity().with_kerr(0.04).with_gain_kappa(1.1);
            let curves = [0.25, 0.5, 0.75]
                .into_iter()
                .map(|t| SweepSpec::new(format!("theta={t}pi"), base.with_phase_pi(t), bare_axis()))
                .collect();
            grid("fig2c", "intensity vs bare detuning for several OPA phases (G=1.1 kappa, chi=0.04)", curves)
        }
        "fig3" | "fig11" => {
            let base = wide_cavity()
                .with_bare_detuning_wm(-2.5)
                .with_gain_kappa(1.0)
                .with_kerr(0.05)
                .with_phase_pi(0.57);
            let spec = SweepSpec::new("theta=0.57pi", base, vec![power_axis(1.0, 160.0, DEFAULT_COUNT)]);
            if id == "fig3" {
                grid("fig3", "intensity vs input power at Delta0=-2.5 omega_m, all branches", vec![spec])
            } else {
                grid("fig11", "entanglement and eta1 on the three branches of the tristable response", vec![spec])
            }
        }
        "fig4" => {
            let base = narrow_cavity().with_kerr(0.05).with_power_mw(5.0);
            let mut curves = vec![SweepSpec::new("bare", narrow_cavity().with_power_mw(5.0), eff_axis(0.0, 2.0))];
            for (g, t) in [(0.6, 0.81), (0.8, 0.71)] {
                let p = base.with_gain_kappa(g);
                curves.push(SweepSpec::new(format!("G={g}kappa,theta={t}pi"), p.with_phase_pi(t), eff_axis(0.0, 2.0)));
                let star = SystemParams { opa_phase: zero_kappa_plus_phase(&p), ..p };
                curves.push(SweepSpec::new(format!("G={g}kappa,kappa_plus=0"), star, eff_axis(0.0, 2.0)));
            }
            grid("fig4", "effective temperature vs effective detuning for several OPA gains", curves)
        }
        "fig5a" | "fig5b" => {
            let t0 = if id == "fig5a" { 400.0 } else { 25.0 };
            let base = narrow_cavity().with_gain_kappa(0.8).with_phase_pi(0.75).with_power_mw(5.0).with_bath_mk(t0);
            let curves = [0.0, 0.01, 0.03, 0.05]
                .into_iter()
                .map(|chi| SweepSpec::new(format!("chi={chi}"), base.with_kerr(chi), eff_axis(0.0, 2.0)))
                .collect();
            let desc = if id == "fig5a" {
                "effective temperature vs effective detuning for several Kerr strengths, 400 mK bath"
            } else {
                "effective temperature vs effective detuning for several Kerr strengths, 25 mK bath"
            };
            grid(if id == "fig5a" { "fig5a" } else { "fig5b" }, desc, curves)
        }
        "fig6" => {
            let base = narrow_cavity().with_gain_kappa(0.8).with_phase_pi(0.75).with_kerr(0.03).with_power_mw(5.0);
            let axes = vec![
                detuning_axis(SweepParam::EffectiveDetuning, 0.005, 1.0, COUNT_2D),
                power_axis(0.05, 10.0, COUNT_2D),
            ];
            grid("fig6", "eta1 over effective detuning and input power (chi=0.03)", vec![SweepSpec::new("chi=0.03", base, axes)])
        }
        "fig7" => {
            let base = narrow_cavity().with_gain_kappa(1.3).with_phase_pi(0.67).with_kerr(0.05);
            let spec = SweepSpec::new("Delta=0.5wm", base, vec![power_axis(0.1, 12.0, DEFAULT_COUNT)])
                .at_effective_detuning(0.5 * wm());
            grid("fig7", "effective temperature and entanglement vs input power at Delta=0.5 omega_m", vec![spec])
        }
        "fig8" => {
            let base = narrow_cavity().with_gain_kappa(1.3).with_kerr(0.05).with_power_mw(3.0);
            let curves = [0.6, 0.67, 0.75, 0.85]
                .into_iter()
                .map(|t| SweepSpec::new(format!("theta={t}pi"), base.with_phase_pi(t), eff_axis(-0.5, 2.0)))
                .collect();
            grid("fig8", "entanglement vs effective detuning for several OPA phases", curves)
        }
        "fig9" => {
            let base = narrow_cavity().with_phase_pi(0.67).with_kerr(0.05);
            let curves = [0.6, 1.0]
                .into_iter()
                .map(|g| {
                    let axes = vec![
                        detuning_axis(SweepParam::EffectiveDetuning, -0.5, 2.0, COUNT_2D),
                        power_axis(0.05, 10.0, COUNT_2D),
                    ];
                    SweepSpec::new(format!("G={g}kappa"), base.with_gain_kappa(g), axes)
                })
                .collect();
            grid("fig9", "entanglement over effective detuning and input power for two OPA gains", curves)
        }
        "fig10" => {
            let base = narrow_cavity().with_phase_pi(0.67).with_gain_kappa(1.0).with_power_mw(6.0);
            let curves = [0.0, 0.03, 0.05]
                .into_iter()
                .map(|chi| SweepSpec::new(format!("chi={chi}"), base.with_kerr(chi), eff_axis(-0.5, 2.0)))
                .collect();
            grid("fig10", "entanglement vs effective detuning for several Kerr strengths", curves)
        }
        "table1" => {
            let base = narrow_cavity().with_phase_pi(0.67).with_kerr(0.05);
            let mut curves = Vec::new();
            for p_mw in [2.5, 5.0] {
                for g in [0.6, 1.0] {
                    let p = base.with_gain_kappa(g).with_power_mw(p_mw);
                    curves.push(SweepSpec::new(format!("G={g}kappa,P={p_mw}mW"), p, eff_axis(-0.5, 2.0)));
                }
            }
            FigurePreset {
                id: "table1",
                description: "maximal entanglement over the effective detuning for four (G, P) pairs",
                curves,
                protocol: Protocol::MaximizeEntanglement,
            }
        }
        other => return Err(SweepError::UnknownPreset(other.to_string())),
    };
    Ok(preset)
}

/// Same as [`figure_preset`] with every curve switched to branch continuity.
pub fn with_continuity(mut preset: FigurePreset) -> FigurePreset {
    for c in preset.curves.iter_mut() {
        c.branch_policy = BranchPolicy::Continuity;
    }
    preset
}
