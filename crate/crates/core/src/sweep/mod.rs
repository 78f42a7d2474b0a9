//! Parameter sweeps: grids over one or two parameters, every steady-state
//! branch at every grid point, stability and observables per branch.
//!
//! Grid points are evaluated in parallel; the output order is fixed (first
//! axis outermost, then branch index) and does not depend on scheduling.

pub mod hysteresis;
pub mod presets;
pub mod table;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytic::{n_eff_approx, regime_valid};
use crate::covariance::observables;
use crate::dynamics::{assess_stability, linearize};
use crate::steady_state::{solve_at_effective_detuning, solve_branches, Segment, SteadyStateBranch};
use crate::units::SystemParams;

pub use hysteresis::{hysteresis_trace, HysteresisTrace};
pub use presets::{figure_preset, FigurePreset, Protocol, PRESET_IDS};

/// Default number of points per axis.
pub const DEFAULT_COUNT: usize = 400;
/// Points whose fluctuation-to-mean photon ratio exceeds this are flagged.
pub const LINEARIZATION_SUSPECT: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("invalid sweep: {0}")]
    InvalidSpec(String),
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error("cannot build worker pool: {0}")]
    Pool(String),
}

/// Parameters a sweep axis can vary. Values are in the internal units of
/// [`SystemParams`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    BareDetuning,
    /// Sweeping the effective detuning solves each point at fixed `Delta`.
    EffectiveDetuning,
    InputPower,
    OpaGain,
    OpaPhase,
    KerrCoeff,
    BathTemperature,
}

impl SweepParam {
    pub const ALL: [SweepParam; 7] = [
        SweepParam::BareDetuning,
        SweepParam::EffectiveDetuning,
        SweepParam::InputPower,
        SweepParam::OpaGain,
        SweepParam::OpaPhase,
        SweepParam::KerrCoeff,
        SweepParam::BathTemperature,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::BareDetuning => "bare_detuning",
            SweepParam::EffectiveDetuning => "effective_detuning",
            SweepParam::InputPower => "input_power",
            SweepParam::OpaGain => "opa_gain",
            SweepParam::OpaPhase => "opa_phase",
            SweepParam::KerrCoeff => "kerr_coeff",
            SweepParam::BathTemperature => "bath_temperature",
        }
    }

    fn apply(&self, p: &mut SystemParams, v: f64) {
        match self {
            SweepParam::BareDetuning => p.bare_detuning = v,
            // resolved per point
            SweepParam::EffectiveDetuning => {}
            SweepParam::InputPower => p.input_power = v,
            SweepParam::OpaGain => p.opa_gain = v,
            SweepParam::OpaPhase => p.opa_phase = crate::units::reduce_phase(v),
            SweepParam::KerrCoeff => p.kerr_coeff = v,
            SweepParam::BathTemperature => p.bath_temperature = v,
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = SweepError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SweepParam::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| SweepError::InvalidSpec(format!("unknown sweep parameter '{s}'")))
    }
}

/// Linearly spaced axis, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub param: SweepParam,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(param: SweepParam, min: f64, max: f64, count: usize) -> Self {
        Self { param, min, max, count }
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        if n == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (n - 1) as f64;
        (0..n)
            .map(|k| if k == n - 1 { self.max } else { self.min + step * k as f64 })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchPolicy {
    /// One record per physical branch.
    All,
    /// One record per grid point, following the branch nearest in intensity
    /// to the previous selection (single-axis sweeps only).
    Continuity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    /// Curve label copied into every record.
    #[serde(default)]
    pub label: String,
    pub base: SystemParams,
    pub axes: Vec<Axis>,
    /// Hold the effective detuning at this value (rad/s) instead of the bare one.
    #[serde(default)]
    pub fixed_effective_detuning: Option<f64>,
    pub branch_policy: BranchPolicy,
}

impl SweepSpec {
    pub fn new(label: impl Into<String>, base: SystemParams, axes: Vec<Axis>) -> Self {
        Self {
            label: label.into(),
            base,
            axes,
            fixed_effective_detuning: None,
            branch_policy: BranchPolicy::All,
        }
    }

    pub fn at_effective_detuning(mut self, delta: f64) -> Self {
        self.fixed_effective_detuning = Some(delta);
        self
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        let bad = |m: String| Err(SweepError::InvalidSpec(m));
        if self.axes.is_empty() || self.axes.len() > 2 {
            return bad(format!("need 1 or 2 axes, got {}", self.axes.len()));
        }
        for a in &self.axes {
            if a.count < 2 {
                return bad(format!("axis {} needs at least 2 points, got {}", a.param, a.count));
            }
            if !(a.min.is_finite() && a.max.is_finite()) {
                return bad(format!("axis {} has non-finite bounds", a.param));
            }
        }
        if self.axes.len() == 2 && self.axes[0].param == self.axes[1].param {
            return bad(format!("axis {} given twice", self.axes[0].param));
        }
        let has = |p: SweepParam| self.axes.iter().any(|a| a.param == p);
        let pinned = self.fixed_effective_detuning.is_some() as usize
            + has(SweepParam::BareDetuning) as usize
            + has(SweepParam::EffectiveDetuning) as usize;
        if pinned > 1 {
            return bad("at most one of a bare-detuning axis, an effective-detuning axis or a fixed effective detuning".into());
        }
        if let Some(d) = self.fixed_effective_detuning {
            if !d.is_finite() {
                return bad("fixed effective detuning is not finite".into());
            }
        }
        if self.branch_policy == BranchPolicy::Continuity && self.axes.len() != 1 {
            return bad("branch continuity needs exactly one axis".into());
        }
        self.base.validated().map_err(|e| SweepError::InvalidSpec(e.to_string()))?;
        // every grid corner must still be a valid parameter set
        for a in &self.axes {
            for v in [a.min, a.max] {
                let mut p = self.base;
                a.param.apply(&mut p, v);
                p.validated()
                    .map_err(|e| SweepError::InvalidSpec(format!("axis {} at {v}: {e}", a.param)))?;
            }
        }
        Ok(())
    }

    fn grid(&self) -> Vec<Vec<f64>> {
        let first = self.axes[0].values();
        match self.axes.get(1) {
            None => first.into_iter().map(|v| vec![v]).collect(),
            Some(second) => {
                let second = second.values();
                first
                    .iter()
                    .flat_map(|&u| second.iter().map(move |&w| vec![u, w]))
                    .collect()
            }
        }
    }

    fn effective_detuning_at(&self, values: &[f64]) -> Option<f64> {
        self.fixed_effective_detuning.or_else(|| {
            self.axes
                .iter()
                .zip(values)
                .find(|(a, _)| a.param == SweepParam::EffectiveDetuning)
                .map(|(_, &v)| v)
        })
    }
}

/// One branch at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub curve: String,
    pub point_index: usize,
    pub axis0: f64,
    pub axis1: Option<f64>,
    pub branch_index: usize,
    pub n_branches: usize,
    pub segment: Segment,
    /// Bare detuning, rad/s.
    pub delta0: f64,
    /// Effective detuning, rad/s.
    pub delta_eff: f64,
    pub delta_eff_wm: f64,
    /// W.
    pub input_power: f64,
    pub opa_gain: f64,
    pub opa_phase: f64,
    pub kerr_coeff: f64,
    pub bath_temperature: f64,
    pub intensity: f64,
    pub g1: f64,
    pub g1_wm: f64,
    pub eta1: Option<f64>,
    pub eta2: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub max_real_part: f64,
    pub stable: bool,
    pub rh_disagreement: bool,
    pub n_eff: Option<f64>,
    pub t_eff: Option<f64>,
    pub ground_state: Option<bool>,
    pub e_n: Option<f64>,
    pub photon_fluct: Option<f64>,
    pub linearization_ratio: Option<f64>,
    pub linearization_suspect: bool,
    pub lyapunov_residual: Option<f64>,
    pub min_symplectic: Option<f64>,
    pub n_eff_analytic: Option<f64>,
    pub analytic_valid: bool,
    pub error: Option<String>,
}

impl SweepRecord {
    fn failed(curve: &str, point_index: usize, values: &[f64], params: &SystemParams, msg: String) -> Self {
        Self {
            curve: curve.to_string(),
            point_index,
            axis0: values[0],
            axis1: values.get(1).copied(),
            branch_index: 0,
            n_branches: 0,
            segment: Segment::Single,
            delta0: params.bare_detuning,
            delta_eff: f64::NAN,
            delta_eff_wm: f64::NAN,
            input_power: params.input_power,
            opa_gain: params.opa_gain,
            opa_phase: params.opa_phase,
            kerr_coeff: params.kerr_coeff,
            bath_temperature: params.bath_temperature,
            intensity: f64::NAN,
            g1: f64::NAN,
            g1_wm: f64::NAN,
            eta1: None,
            eta2: f64::NAN,
            s1: f64::NAN,
            s2: f64::NAN,
            s3: f64::NAN,
            max_real_part: f64::NAN,
            stable: false,
            rh_disagreement: false,
            n_eff: None,
            t_eff: None,
            ground_state: None,
            e_n: None,
            photon_fluct: None,
            linearization_ratio: None,
            linearization_suspect: false,
            lyapunov_residual: None,
            min_symplectic: None,
            n_eff_analytic: None,
            analytic_valid: false,
            error: Some(msg),
        }
    }

    /// Covariance-derived fields present (stable point, solve succeeded).
    pub fn has_observables(&self) -> bool {
        self.e_n.is_some()
    }
}

/// Analyses one branch of one parameter set.
pub fn evaluate_branch(
    curve: &str,
    point_index: usize,
    values: &[f64],
    params: &SystemParams,
    branch: &SteadyStateBranch,
    n_branches: usize,
) -> SweepRecord {
    let wm = params.mech_freq;
    let sys = linearize(branch, params);
    let mut rec = SweepRecord::failed(curve, point_index, values, params, String::new());
    rec.error = None;
    rec.branch_index = branch.branch_index;
    rec.n_branches = n_branches;
    rec.segment = branch.segment;
    rec.delta0 = params.bare_detuning;
    rec.delta_eff = branch.delta_eff;
    rec.delta_eff_wm = branch.delta_eff / wm;
    rec.intensity = branch.intensity;
    rec.g1 = sys.g1;
    rec.g1_wm = sys.g1 / wm;
    let report = match assess_stability(&sys, params) {
        Ok(r) => r,
        Err(e) => {
            rec.error = Some(e.to_string());
            return rec;
        }
    };
    rec.eta1 = report.eta1;
    rec.eta2 = report.eta2;
    rec.s1 = report.s1;
    rec.s2 = report.s2;
    rec.s3 = report.s3;
    rec.max_real_part = report.max_real_part;
    rec.stable = report.stable;
    rec.rh_disagreement = report.rh_disagreement;
    rec.n_eff_analytic = n_eff_approx(&sys, params).ok();
    rec.analytic_valid = regime_valid(&sys, params, report.eta1);
    if !report.stable {
        return rec;
    }
    match observables(branch, &sys, params) {
        Ok(obs) => {
            rec.n_eff = Some(obs.n_eff);
            rec.t_eff = Some(obs.t_eff);
            rec.ground_state = Some(obs.ground_state);
            rec.e_n = Some(obs.e_n);
            rec.photon_fluct = Some(obs.photon_fluct);
            rec.linearization_ratio = Some(obs.linearization_ratio);
            rec.linearization_suspect = obs.linearization_ratio > LINEARIZATION_SUSPECT;
            rec.lyapunov_residual = Some(obs.residual);
            rec.min_symplectic = Some(obs.min_symplectic);
        }
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec
}

/// Every branch at one grid point, ascending in intensity.
pub fn evaluate_point(spec: &SweepSpec, point_index: usize, values: &[f64]) -> Vec<SweepRecord> {
    let mut params = spec.base;
    for (a, &v) in spec.axes.iter().zip(values) {
        a.param.apply(&mut params, v);
    }
    let curve = spec.label.as_str();
    if let Some(delta) = spec.effective_detuning_at(values) {
        let (resolved, branch) = solve_at_effective_detuning(&params, delta);
        let n = solve_branches(&resolved).map(|b| b.len()).unwrap_or(1);
        return vec![evaluate_branch(curve, point_index, values, &resolved, &branch, n)];
    }
    match solve_branches(&params) {
        Ok(branches) => {
            let n = branches.len();
            branches
                .iter()
                .map(|b| evaluate_branch(curve, point_index, values, &params, b, n))
                .collect()
        }
        Err(e) => vec![SweepRecord::failed(curve, point_index, values, &params, e.to_string())],
    }
}

/// Runs a sweep on the current rayon pool.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>, SweepError> {
    spec.validate()?;
    let grid = spec.grid();
    let per_point: Vec<Vec<SweepRecord>> = grid
        .par_iter()
        .enumerate()
        .map(|(k, values)| evaluate_point(spec, k, values))
        .collect();
    Ok(match spec.branch_policy {
        BranchPolicy::All => per_point.into_iter().flatten().collect(),
        BranchPolicy::Continuity => follow_nearest(per_point, false).0,
    })
}

/// Runs `f` on a pool with at most `jobs` workers (`None`: rayon's default).
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, SweepError> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| SweepError::Pool(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// Picks one record per point, starting from the lowest (or highest) branch
/// and then following the same segment where it still exists, else the
/// nearest intensity. Returns the path and the indices of points where the
/// followed segment disappeared.
pub(crate) fn follow_nearest(per_point: Vec<Vec<SweepRecord>>, from_top: bool) -> (Vec<SweepRecord>, Vec<usize>) {
    let mut path: Vec<SweepRecord> = Vec::with_capacity(per_point.len());
    let mut jumps = Vec::new();
    for (k, mut recs) in per_point.into_iter().enumerate() {
        let pick = match path.last() {
            None => {
                if from_top {
                    recs.len() - 1
                } else {
                    0
                }
            }
            Some(prev) => {
                let dist = |r: &SweepRecord| (r.intensity - prev.intensity).abs();
                let same: Option<usize> = recs
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| r.segment == prev.segment)
                    .min_by(|a, b| dist(a.1).total_cmp(&dist(b.1)))
                    .map(|(i, _)| i);
                match same {
                    Some(i) => i,
                    None => {
                        jumps.push(k);
                        recs.iter()
                            .enumerate()
                            .min_by(|a, b| dist(a.1).total_cmp(&dist(b.1)))
                            .map(|(i, _)| i)
                            .unwrap()
                    }
                }
            }
        };
        path.push(recs.swap_remove(pick));
    }
    (path, jumps)
}
