//! Maximal entanglement over the effective detuning: a coarse scan followed by
//! golden-section refinement around the best grid point.

use super::{evaluate_point, run_sweep, SweepError, SweepParam, SweepRecord, SweepSpec};

const GOLDEN_ITERS: usize = 80;

fn e_n_or_floor(r: &SweepRecord) -> f64 {
    // unstable or failed points rank below every stable one
    r.e_n.unwrap_or(-1.0)
}

/// Best stable record of a single effective-detuning axis, refined. `None` if
/// no point of the scan is stable.
pub fn maximize_entanglement(spec: &SweepSpec) -> Result<Option<SweepRecord>, SweepError> {
    if spec.axes.len() != 1 || spec.axes[0].param != SweepParam::EffectiveDetuning {
        return Err(SweepError::InvalidSpec("maximization needs a single effective_detuning axis".into()));
    }
    let coarse = run_sweep(spec)?;
    let Some((k, best)) = coarse
        .iter()
        .enumerate()
        .filter(|(_, r)| r.has_observables())
        .max_by(|a, b| e_n_or_floor(a.1).total_cmp(&e_n_or_floor(b.1)))
    else {
        return Ok(None);
    };
    let values = spec.axes[0].values();
    let lo = values[k.saturating_sub(1)];
    let hi = values[(k + 1).min(values.len() - 1)];
    let eval = |d: f64| evaluate_point(spec, k, &[d]).remove(0);

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut rc = eval(c);
    let mut rd = eval(d);
    let mut top = best.clone();
    for _ in 0..GOLDEN_ITERS {
        if e_n_or_floor(&rc) >= e_n_or_floor(&rd) {
            b = d;
            d = c;
            rd = rc;
            c = b - inv_phi * (b - a);
            rc = eval(c);
        } else {
            a = c;
            c = d;
            rc = rd;
            d = a + inv_phi * (b - a);
            rd = eval(d);
        }
        for r in [&rc, &rd] {
            if r.has_observables() && e_n_or_floor(r) > e_n_or_floor(&top) {
                top = r.clone();
            }
        }
        if (b - a).abs() <= 1e-12 * spec.base.mech_freq {
            break;
        }
    }
    Ok(Some(top))
}
