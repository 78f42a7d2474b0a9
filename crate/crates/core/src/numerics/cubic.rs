//! Real roots of `c3 x^3 + c2 x^2 + c1 x + c0`.
//!
//! One real root comes from the closed form (trigonometric branch when all
//! three roots are real, Cardano otherwise), is Newton-polished and deflated.
//! The remaining quadratic is solved with the cancellation-free formula. This
//! keeps full relative accuracy when the leading coefficient is tiny compared
//! with the others, which is what happens near the Kerr/radiation-pressure
//! compensation point.

use std::f64::consts::PI;

use super::NumericsError;

/// Roots closer than `COALESCE_REL * (1 + |r|)` are reported once.
pub const COALESCE_REL: f64 = 1e-6;

/// Evaluates the cubic and its derivative by Horner's rule.
pub fn eval_cubic(c: [f64; 4], x: f64) -> (f64, f64) {
    let [c3, c2, c1, c0] = c;
    let p = ((c3 * x + c2) * x + c1) * x + c0;
    let dp = (3.0 * c3 * x + 2.0 * c2) * x + c1;
    (p, dp)
}

/// All real roots in ascending order, with near-coincident roots merged.
pub fn cubic_real_roots(c3: f64, c2: f64, c1: f64, c0: f64) -> Result<Vec<f64>, NumericsError> {
    for v in [c3, c2, c1, c0] {
        if !v.is_finite() {
            return Err(NumericsError::NonFinite);
        }
    }
    if c3 == 0.0 && c2 == 0.0 && c1 == 0.0 {
        return Err(NumericsError::AllCoefficientsZero);
    }
    let coeffs = [c3, c2, c1, c0];
    let mut roots = if c3 == 0.0 {
        quadratic_real_roots(c2, c1, c0)
    } else {
        let r = polish(coeffs, one_real_root(c3, c2, c1, c0));
        let (q2, q1, q0) = deflate(coeffs, r);
        let mut rs = vec![r];
        rs.extend(quadratic_real_roots(q2, q1, q0));
        rs
    };
    for r in roots.iter_mut() {
        *r = polish(coeffs, *r);
    }
    roots.sort_by(|a, b| a.total_cmp(b));
    Ok(coalesce(roots))
}

fn coalesce(sorted: Vec<f64>) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(sorted.len());
    for r in sorted {
        match out.last_mut() {
            Some(prev) if (r - *prev).abs() <= COALESCE_REL * (1.0 + prev.abs().max(r.abs())) => {
                *prev = 0.5 * (*prev + r);
            }
            _ => out.push(r),
        }
    }
    out
}

/// Real roots of `a x^2 + b x + c`, degrading to the linear case.
fn quadratic_real_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        return if b == 0.0 { vec![] } else { vec![-c / b] };
    }
    if c == 0.0 {
        return vec![0.0, -b / a];
    }
    let disc = b * b - 4.0 * a * c;
    // a discriminant lost in rounding is a double root
    let slack = 8.0 * f64::EPSILON * (b * b).max((4.0 * a * c).abs());
    if disc < -slack {
        return vec![];
    }
    if disc <= slack {
        return vec![-b / (2.0 * a)];
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        // b == 0 and disc > 0
        let r = (-c / a).sqrt();
        return vec![-r, r];
    }
    vec![q / a, c / q]
}

/// One real root from the closed form: the largest in magnitude when all three
/// are real, the only one otherwise.
fn one_real_root(c3: f64, c2: f64, c1: f64, c0: f64) -> f64 {
    let a = c2 / c3;
    let b = c1 / c3;
    let c = c0 / c3;
    // depressed cubic t^3 + p t + q with x = t - a/3
    let shift = a / 3.0;
    let p = b - a * shift;
    let q = (2.0 * a * a / 27.0 - b / 3.0) * a + c;
    let half_q = 0.5 * q;
    let third_p = p / 3.0;
    let d = half_q * half_q + third_p * third_p * third_p;
    if d < 0.0 {
        let m = 2.0 * (-third_p).sqrt();
        let cos_arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let phi = cos_arg.acos() / 3.0;
        (0..3)
            .map(|k| m * (phi - 2.0 * PI * k as f64 / 3.0).cos() - shift)
            .max_by(|x, y| x.abs().total_cmp(&y.abs()))
            .unwrap()
    } else {
        let s = d.sqrt();
        // pick the sign that avoids cancellation
        let u = (-half_q - half_q.signum() * s).cbrt();
        let t = if u == 0.0 { 0.0 } else { u - third_p / u };
        t - shift
    }
}

/// Divides out the root `r`, returning the quadratic quotient.
fn deflate(c: [f64; 4], r: f64) -> (f64, f64, f64) {
    let [c3, c2, c1, c0] = c;
    if r == 0.0 {
        return (c3, c2, c1);
    }
    // forward division is stable for roots small against the other two,
    // backward division for roots that dominate them
    let other_sq = (c0 / (c3 * r)).abs();
    if r * r >= other_sq {
        let q0 = -c0 / r;
        let q1 = (q0 - c1) / r;
        (c3, q1, q0)
    } else {
        let q1 = c2 + c3 * r;
        let q0 = c1 + q1 * r;
        (c3, q1, q0)
    }
}

/// Newton iterations kept only while they reduce |p|.
fn polish(c: [f64; 4], mut x: f64) -> f64 {
    let (mut px, _) = eval_cubic(c, x);
    for _ in 0..8 {
        if px == 0.0 {
            break;
        }
        let (_, dp) = eval_cubic(c, x);
        if dp == 0.0 || !dp.is_finite() {
            break;
        }
        let next = x - px / dp;
        let (pn, _) = eval_cubic(c, next);
        if !(pn.abs() < px.abs()) {
            break;
        }
        x = next;
        px = pn;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * (1.0 + y.abs()))
    }

    fn residual_ok(c: [f64; 4], r: f64) -> bool {
        let scale = c.iter().fold(0.0f64, |m, x| m.max(x.abs())) * 1f64.max(r.abs()).powi(3);
        eval_cubic(c, r).0.abs() <= 1e-10 * scale
    }

    /// Bisection on a sign change; independent of the closed form.
    fn bisect(c: [f64; 4], mut lo: f64, mut hi: f64) -> f64 {
        let mut flo = eval_cubic(c, lo).0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let fm = eval_cubic(c, mid).0;
            if fm == 0.0 {
                return mid;
            }
            if (fm < 0.0) == (flo < 0.0) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn factored_cubic() {
        let r = cubic_real_roots(1.0, -6.0, 11.0, -6.0).unwrap();
        assert!(close(&r, &[1.0, 2.0, 3.0], 1e-14), "{r:?}");
    }

    #[test]
    fn quadratic_and_linear_degeneration() {
        let r = cubic_real_roots(0.0, 1.0, -3.0, 2.0).unwrap();
        assert!(close(&r, &[1.0, 2.0], 1e-15), "{r:?}");
        let r = cubic_real_roots(0.0, 0.0, 2.0, -3.0).unwrap();
        assert_eq!(r, vec![1.5]);
        assert_eq!(cubic_real_roots(0.0, 1.0, 0.0, 1.0).unwrap(), Vec::<f64>::new());
    }

    #[test]
    fn single_real_root_matches_bisection() {
        let c = [1.0, 0.0, 1.0, -1.0];
        let r = cubic_real_roots(c[0], c[1], c[2], c[3]).unwrap();
        let oracle = bisect(c, 0.0, 1.0);
        assert_eq!(r.len(), 1);
        assert!((r[0] - oracle).abs() < 1e-14);
        assert!((r[0] - 0.6823).abs() < 1e-4);
    }

    #[test]
    fn all_zero_is_an_error() {
        assert_eq!(cubic_real_roots(0.0, 0.0, 0.0, 1.0), Err(NumericsError::AllCoefficientsZero));
        assert_eq!(cubic_real_roots(f64::NAN, 0.0, 0.0, 1.0), Err(NumericsError::NonFinite));
    }

    #[test]
    fn double_root_is_merged() {
        // (x - 1)^2 (x - 3)
        let r = cubic_real_roots(1.0, -5.0, 7.0, -3.0).unwrap();
        assert!(close(&r, &[1.0, 3.0], 1e-7), "{r:?}");
        // triple root
        let r = cubic_real_roots(1.0, -3.0, 3.0, -1.0).unwrap();
        assert!(close(&r, &[1.0], 1e-5), "{r:?}");
    }

    #[test]
    fn zero_constant_term() {
        let r = cubic_real_roots(1.0, -3.0, 2.0, 0.0).unwrap();
        assert!(close(&r, &[0.0, 1.0, 2.0], 1e-15), "{r:?}");
    }

    #[test]
    fn badly_scaled_intensity_cubic() {
        // tiny leading coefficient, roots at 1e9 scale plus one huge negative root
        let roots = [-4.0e20, 2.0e8, 7.0e8];
        let lead = 1e-20;
        let c = [
            lead,
            -lead * (roots[0] + roots[1] + roots[2]),
            lead * (roots[0] * roots[1] + roots[0] * roots[2] + roots[1] * roots[2]),
            -lead * roots[0] * roots[1] * roots[2],
        ];
        let r = cubic_real_roots(c[0], c[1], c[2], c[3]).unwrap();
        assert_eq!(r.len(), 3, "{r:?}");
        for (got, want) in r.iter().zip(roots) {
            assert!(((got - want) / want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    /// Every root bracketed by a dense sign scan is found, and nothing else.
    #[test]
    fn agrees_with_sign_scan_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        const SCAN: usize = 1_000_000;
        for _ in 0..1000 {
            let c: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let roots = cubic_real_roots(c[0], c[1], c[2], c[3]).unwrap();
            for &r in &roots {
                assert!(residual_ok(c, r), "{c:?} {r}");
            }
            // Cauchy bound on the root magnitudes
            let bound = 1.0 + c[1].abs().max(c[2].abs()).max(c[3].abs()) / c[0].abs();
            let bound = bound.min(1e6);
            let step = 2.0 * bound / SCAN as f64;
            let mut prev = eval_cubic(c, -bound).0;
            let mut bracketed = Vec::new();
            for i in 1..=SCAN {
                let x = -bound + step * i as f64;
                let f = eval_cubic(c, x).0;
                if f == 0.0 || (f < 0.0) != (prev < 0.0) {
                    bracketed.push(bisect(c, x - step, x));
                }
                prev = f;
            }
            for b in &bracketed {
                assert!(
                    roots.iter().any(|r| (r - b).abs() <= 1e-8 * (1.0 + b.abs())),
                    "missing bracketed root {b} in {roots:?} for {c:?}"
                );
            }
        }
    }
}
