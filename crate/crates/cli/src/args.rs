//! Parameter flags in figure units and the axis syntax, converted to SI at
//! the boundary.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::str::FromStr;

use clap::Args;
use optomech::config;
use optomech::sweep::{Axis, SweepParam};
use optomech::SystemParams;

use crate::CliError;

#[derive(Args, Debug, Clone, Default)]
pub struct ParamArgs {
    /// TOML parameter file in SI units; the reference device when absent.
    #[arg(long, env = "OPTOMECH_CONFIG", value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Cavity decay rate in units of omega_m.
    #[arg(long, value_name = "X")]
    pub kappa_wm: Option<f64>,
    /// Mechanical damping rate, rad/s.
    #[arg(long, value_name = "RATE")]
    pub gamma_m: Option<f64>,
    /// Bare detuning in units of omega_m.
    #[arg(long, value_name = "X", allow_hyphen_values = true)]
    pub delta0_wm: Option<f64>,
    /// Hold the effective detuning at this value (units of omega_m).
    #[arg(long, value_name = "X", allow_hyphen_values = true)]
    pub delta_wm: Option<f64>,
    /// OPA gain in units of kappa.
    #[arg(long, value_name = "X")]
    pub g_kappa: Option<f64>,
    /// OPA phase in units of pi.
    #[arg(long, value_name = "X", allow_hyphen_values = true)]
    pub theta_pi: Option<f64>,
    /// Input power, mW.
    #[arg(long, value_name = "MW")]
    pub p_mw: Option<f64>,
    /// Kerr coefficient, 1/s.
    #[arg(long, value_name = "CHI")]
    pub chi: Option<f64>,
    /// Bath temperature, mK.
    #[arg(long, value_name = "MK")]
    pub t0_mk: Option<f64>,
}

impl ParamArgs {
    /// Whether any flag besides the config path was given.
    pub fn any_override(&self) -> bool {
        [
            self.kappa_wm,
            self.gamma_m,
            self.delta0_wm,
            self.delta_wm,
            self.g_kappa,
            self.theta_pi,
            self.p_mw,
            self.chi,
            self.t0_mk,
        ]
        .iter()
        .any(Option::is_some)
    }

    /// Resolved parameters and the fixed effective detuning (rad/s), if any.
    pub fn resolve(&self) -> Result<(SystemParams, Option<f64>), CliError> {
        let mut p = match &self.config {
            Some(path) => config::load(path)?,
            None => SystemParams::reference(),
        };
        // kappa first: the gain is given relative to it
        if let Some(x) = self.kappa_wm {
            p = p.with_kappa_wm(x);
        }
        if let Some(x) = self.gamma_m {
            p.mech_damping = x;
        }
        if let Some(x) = self.delta0_wm {
            p = p.with_bare_detuning_wm(x);
        }
        if let Some(x) = self.g_kappa {
            p = p.with_gain_kappa(x);
        }
        if let Some(x) = self.theta_pi {
            p = p.with_phase_pi(x);
        }
        if let Some(x) = self.p_mw {
            p = p.with_power_mw(x);
        }
        if let Some(x) = self.chi {
            p = p.with_kerr(x);
        }
        if let Some(x) = self.t0_mk {
            p = p.with_bath_mk(x);
        }
        let p = p.validated().map_err(|e| CliError::Config(e.to_string()))?;
        let fixed = match self.delta_wm {
            Some(x) if !x.is_finite() => return Err(CliError::Config(format!("--delta-wm must be finite (got {x})"))),
            Some(x) => Some(x * p.mech_freq),
            None => None,
        };
        Ok((p, fixed))
    }
}

/// `NAME:MIN:MAX:COUNT` as typed on the command line.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisArg {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl FromStr for AxisArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [name, min, max, count] = parts[..] else {
            return Err(format!("axis '{s}' is not NAME:MIN:MAX:COUNT"));
        };
        let num = |v: &str| v.trim().parse::<f64>().map_err(|_| format!("axis '{s}': '{v}' is not a number"));
        Ok(AxisArg {
            name: name.trim().to_string(),
            min: num(min)?,
            max: num(max)?,
            count: count
                .trim()
                .parse()
                .map_err(|_| format!("axis '{s}': '{count}' is not a point count"))?,
        })
    }
}

/// Figure-unit axis names with their parameter and scale factor. The SI
/// parameter names are accepted as well, unscaled.
pub const FIGURE_AXES: [(&str, SweepParam); 7] = [
    ("delta0-wm", SweepParam::BareDetuning),
    ("delta-wm", SweepParam::EffectiveDetuning),
    ("p-mw", SweepParam::InputPower),
    ("g-kappa", SweepParam::OpaGain),
    ("theta-pi", SweepParam::OpaPhase),
    ("chi", SweepParam::KerrCoeff),
    ("t0-mk", SweepParam::BathTemperature),
];

impl AxisArg {
    pub fn to_axis(&self, base: &SystemParams) -> Result<Axis, CliError> {
        let (param, scale) = match FIGURE_AXES.iter().find(|(n, _)| *n == self.name) {
            Some(&(n, param)) => {
                let scale = match n {
                    "delta0-wm" | "delta-wm" => base.mech_freq,
                    "p-mw" | "t0-mk" => 1e-3,
                    "g-kappa" => base.cavity_decay,
                    "theta-pi" => PI,
                    _ => 1.0,
                };
                (param, scale)
            }
            None => {
                let param = SweepParam::from_str(&self.name).map_err(|e| CliError::Usage(e.to_string()))?;
                (param, 1.0)
            }
        };
        Ok(Axis::new(param, self.min * scale, self.max * scale, self.count))
    }
}
