//! Branch following under a slow ramp of the drive power, up and back down.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{evaluate_point, follow_nearest, SweepError, SweepParam, SweepRecord, SweepSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HysteresisTrace {
    /// Increasing power, starting on the lowest branch.
    pub up: Vec<SweepRecord>,
    /// Decreasing power, starting on the highest branch.
    pub down: Vec<SweepRecord>,
    /// Powers (W) at which the up path left a vanished segment.
    pub up_jumps: Vec<f64>,
    /// Powers (W) at which the down path left a vanished segment.
    pub down_jumps: Vec<f64>,
}

/// Follows the intensity branches along a single input-power axis.
pub fn hysteresis_trace(spec: &SweepSpec) -> Result<HysteresisTrace, SweepError> {
    spec.validate()?;
    if spec.axes.len() != 1 || spec.axes[0].param != SweepParam::InputPower {
        return Err(SweepError::InvalidSpec("hysteresis needs a single input_power axis".into()));
    }
    if spec.fixed_effective_detuning.is_some() {
        return Err(SweepError::InvalidSpec("hysteresis needs a fixed bare detuning".into()));
    }
    let mut values = spec.axes[0].values();
    values.sort_by(f64::total_cmp);
    let per_point: Vec<Vec<SweepRecord>> = values
        .par_iter()
        .enumerate()
        .map(|(k, &v)| evaluate_point(spec, k, &[v]))
        .collect();
    let mut reversed = per_point.clone();
    reversed.reverse();
    let (up, up_idx) = follow_nearest(per_point, false);
    let (down, down_idx) = follow_nearest(reversed, true);
    let up_jumps = up_idx.iter().map(|&k| up[k].input_power).collect();
    let down_jumps = down_idx.iter().map(|&k| down[k].input_power).collect();
    Ok(HysteresisTrace { up, down, up_jumps, down_jumps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steady_state::multistability_bounds;
    use crate::sweep::Axis;
    use crate::units::SystemParams;

    fn fig3() -> SystemParams {
        SystemParams::reference()
            .with_bare_detuning_wm(-2.5)
            .with_gain_kappa(1.0)
            .with_kerr(0.05)
            .with_phase_pi(0.57)
    }

    #[test]
    fn monostable_paths_coincide() {
        // with beta < 0 a blue-detuned drive cannot fold the response
        let p = SystemParams::reference().with_kappa_wm(0.3).with_bare_detuning_wm(-1.0);
        assert!(multistability_bounds(&p).is_none());
        let spec = SweepSpec::new("", p, vec![Axis::new(SweepParam::InputPower, 1e-3, 10e-3, 40)]);
        let t = hysteresis_trace(&spec).unwrap();
        let mut down = t.down.clone();
        down.reverse();
        let ui: Vec<f64> = t.up.iter().map(|r| r.intensity).collect();
        let di: Vec<f64> = down.iter().map(|r| r.intensity).collect();
        assert_eq!(ui, di);
        assert!(t.up_jumps.is_empty() && t.down_jumps.is_empty());
    }

    #[test]
    fn tristable_loop() {
        let p = fig3();
        let spec = SweepSpec::new("", p, vec![Axis::new(SweepParam::InputPower, 1e-3, 160e-3, 800)]);
        let t = hysteresis_trace(&spec).unwrap();
        assert_eq!(t.up_jumps.len(), 1);
        assert_eq!(t.down_jumps.len(), 1);
        assert!(t.up_jumps[0] > t.down_jumps[0], "{:?} {:?}", t.up_jumps, t.down_jumps);
        // the jumps bracket the three-root window
        let (lo, hi) = multistability_bounds(&p).unwrap();
        let three: Vec<f64> = t.up.iter().filter(|r| r.n_branches == 3).map(|r| r.input_power).collect();
        assert!(!three.is_empty());
        assert!(three.iter().all(|&w| w >= t.down_jumps[0] - 1e-3 && w <= t.up_jumps[0] + 1e-3));
        assert!(lo < hi);
        // intensity never decreases along the up path
        for w in t.up.windows(2) {
            assert!(w[1].intensity >= w[0].intensity);
        }
    }
}
