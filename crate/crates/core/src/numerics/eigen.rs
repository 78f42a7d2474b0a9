//! Eigenvalues of a real 4x4 matrix: balancing, reduction to upper Hessenberg
//! form by stabilised elementary similarity transforms, then the Francis
//! double-shift QR iteration.

use num_complex::Complex64;

use super::{Mat4, NumericsError};

const N: usize = 4;
const MAX_ITS: usize = 30;

/// All four eigenvalues; complex ones come in conjugate pairs.
pub fn eig4(m: &Mat4) -> Result<[Complex64; 4], NumericsError> {
    if !m.is_finite() {
        return Err(NumericsError::NonFinite);
    }
    let mut a = m.0;
    balance(&mut a);
    hessenberg(&mut a);
    hqr(a)
}

fn balance(a: &mut [[f64; N]; N]) {
    const RADIX: f64 = 2.0;
    const SQRDX: f64 = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..N {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..N {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= SQRDX;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= SQRDX;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 0..N {
                        a[i][j] *= g;
                    }
                    for row in a.iter_mut() {
                        row[i] *= f;
                    }
                }
            }
        }
    }
}

fn hessenberg(a: &mut [[f64; N]; N]) {
    for m in 1..N - 1 {
        let mut x = 0.0f64;
        let mut pivot = m;
        for j in m..N {
            if a[j][m - 1].abs() > x.abs() {
                x = a[j][m - 1];
                pivot = j;
            }
        }
        if pivot != m {
            a.swap(pivot, m);
            for row in a.iter_mut() {
                row.swap(pivot, m);
            }
        }
        if x != 0.0 {
            for i in (m + 1)..N {
                let mut y = a[i][m - 1];
                if y != 0.0 {
                    y /= x;
                    a[i][m - 1] = y;
                    for j in m..N {
                        a[i][j] -= y * a[m][j];
                    }
                    for row in a.iter_mut() {
                        row[m] += y * row[i];
                    }
                }
            }
        }
    }
    // the multipliers left below the subdiagonal are not part of H
    for i in 2..N {
        for j in 0..i - 1 {
            a[i][j] = 0.0;
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis QR on an upper Hessenberg matrix. Indices are 1-based internally.
#[allow(clippy::many_single_char_names)]
fn hqr(h: [[f64; N]; N]) -> Result<[Complex64; 4], NumericsError> {
    let mut a = [[0.0f64; N + 1]; N + 1];
    for i in 0..N {
        for j in 0..N {
            a[i + 1][j + 1] = h[i][j];
        }
    }
    let mut wr = [0.0f64; N + 1];
    let mut wi = [0.0f64; N + 1];

    let mut anorm = 0.0;
    for i in 1..=N {
        for j in (i - 1).max(1)..=N {
            anorm += a[i][j].abs();
        }
    }

    let mut nn = N;
    let mut t = 0.0;
    let mut its = 0;
    let (mut p, mut q, mut r): (f64, f64, f64);
    let (mut x, mut y, mut z, mut w);
    while nn >= 1 {
        // look for a single small subdiagonal element
        let mut l = nn;
        while l >= 2 {
            let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
            if s == 0.0 {
                s = anorm;
            }
            if a[l][l - 1].abs() + s == s {
                a[l][l - 1] = 0.0;
                break;
            }
            l -= 1;
        }
        x = a[nn][nn];
        if l == nn {
            // one root found
            wr[nn] = x + t;
            wi[nn] = 0.0;
            nn -= 1;
            its = 0;
            continue;
        }
        y = a[nn - 1][nn - 1];
        w = a[nn][nn - 1] * a[nn - 1][nn];
        if l == nn - 1 {
            // two roots found
            p = 0.5 * (y - x);
            q = p * p + w;
            z = q.abs().sqrt();
            x += t;
            if q >= 0.0 {
                z = p + sign(z, p);
                wr[nn - 1] = x + z;
                wr[nn] = x + z;
                if z != 0.0 {
                    wr[nn] = x - w / z;
                }
                wi[nn - 1] = 0.0;
                wi[nn] = 0.0;
            } else {
                wr[nn - 1] = x + p;
                wr[nn] = x + p;
                wi[nn - 1] = -z;
                wi[nn] = z;
            }
            nn = nn.saturating_sub(2);
            its = 0;
            continue;
        }
        if its == MAX_ITS {
            return Err(NumericsError::NoConvergence);
        }
        if its == 10 || its == 20 {
            // exceptional shift
            t += x;
            for i in 1..=nn {
                a[i][i] -= x;
            }
            let s = a[nn][nn - 1].abs() + a[nn - 1][nn - 2].abs();
            x = 0.75 * s;
            y = x;
            w = -0.4375 * s * s;
        }
        its += 1;
        // look for two consecutive small subdiagonal elements
        let mut m = nn - 2;
        loop {
            z = a[m][m];
            r = x - z;
            let s0 = y - z;
            p = (r * s0 - w) / a[m + 1][m] + a[m][m + 1];
            q = a[m + 1][m + 1] - z - r - s0;
            r = a[m + 2][m + 1];
            let s = p.abs() + q.abs() + r.abs();
            p /= s;
            q /= s;
            r /= s;
            if m == l {
                break;
            }
            let u = a[m][m - 1].abs() * (q.abs() + r.abs());
            let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
            if u + v == v {
                break;
            }
            m -= 1;
        }
        for i in (m + 2)..=nn {
            a[i][i - 2] = 0.0;
            if i != m + 2 {
                a[i][i - 3] = 0.0;
            }
        }
        // double QR step on rows l..nn and columns m..nn
        let mut k = m;
        while k < nn {
            if k != m {
                p = a[k][k - 1];
                q = a[k + 1][k - 1];
                r = 0.0;
                if k != nn - 1 {
                    r = a[k + 2][k - 1];
                }
                x = p.abs() + q.abs() + r.abs();
                if x != 0.0 {
                    p /= x;
                    q /= x;
                    r /= x;
                }
            }
            let s = sign((p * p + q * q + r * r).sqrt(), p);
            if s != 0.0 {
                if k == m {
                    if l != m {
                        a[k][k - 1] = -a[k][k - 1];
                    }
                } else {
                    a[k][k - 1] = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                z = r / s;
                q /= p;
                r /= p;
                for j in k..=nn {
                    p = a[k][j] + q * a[k + 1][j];
                    if k != nn - 1 {
                        p += r * a[k + 2][j];
                        a[k + 2][j] -= p * z;
                    }
                    a[k + 1][j] -= p * y;
                    a[k][j] -= p * x;
                }
                let mmin = nn.min(k + 3);
                for i in l..=mmin {
                    p = x * a[i][k] + y * a[i][k + 1];
                    if k != nn - 1 {
                        p += z * a[i][k + 2];
                        a[i][k + 2] -= p * r;
                    }
                    a[i][k + 1] -= p * q;
                    a[i][k] -= p;
                }
            }
            k += 1;
        }
    }
    Ok(std::array::from_fn(|i| Complex64::new(wr[i + 1], wi[i + 1])))
}

/// `det(M - lambda I)` evaluated in complex arithmetic by Gaussian elimination.
pub fn char_det(m: &Mat4, lambda: Complex64) -> Complex64 {
    let mut a: [[Complex64; N]; N] =
        std::array::from_fn(|i| std::array::from_fn(|j| Complex64::new(m.0[i][j], 0.0)));
    for (i, row) in a.iter_mut().enumerate() {
        row[i] -= lambda;
    }
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..N {
        let piv = (col..N)
            .max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))
            .unwrap();
        if a[piv][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for i in (col + 1)..N {
            let f = a[i][col] / a[col][col];
            for j in col..N {
                let v = a[col][j];
                a[i][j] -= f * v;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sorted(mut e: Vec<Complex64>) -> Vec<Complex64> {
        e.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        e
    }

    fn assert_residual(m: &Mat4, ev: &[Complex64; 4]) {
        let norm = m.frobenius_norm();
        for &l in ev {
            let scale = (norm.max(l.norm())).powi(4);
            let d = char_det(m, l).norm();
            assert!(d <= 1e-8 * scale, "residual {d:e} for {l} (scale {scale:e})");
        }
    }

    #[test]
    fn diagonal() {
        let m = Mat4::diag([-1.0, -2.0, -3.0, -4.0]);
        let ev = sorted(eig4(&m).unwrap().to_vec());
        for (e, want) in ev.iter().zip([-4.0, -3.0, -2.0, -1.0]) {
            assert!((e.re - want).abs() < 1e-14 && e.im == 0.0);
        }
    }

    #[test]
    fn rotation_blocks() {
        let m = Mat4([
            [0.0, 1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 2.0],
            [0.0, 0.0, -2.0, 0.0],
        ]);
        let ev = eig4(&m).unwrap();
        let mut im: Vec<f64> = ev.iter().map(|e| e.im).collect();
        im.sort_by(f64::total_cmp);
        for (got, want) in im.iter().zip([-2.0, -1.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        assert!(ev.iter().all(|e| e.re.abs() < 1e-14));
    }

    #[test]
    fn already_triangular_and_zero() {
        let ev = eig4(&Mat4::ZERO).unwrap();
        assert!(ev.iter().all(|e| e.norm() == 0.0));
        let m = Mat4([
            [1.0, 5.0, -2.0, 3.0],
            [0.0, 2.0, 7.0, 1.0],
            [0.0, 0.0, 3.0, 4.0],
            [0.0, 0.0, 0.0, 4.0],
        ]);
        let ev = sorted(eig4(&m).unwrap().to_vec());
        for (e, want) in ev.iter().zip([1.0, 2.0, 3.0, 4.0]) {
            assert!((e.re - want).abs() < 1e-12 && e.im.abs() < 1e-12, "{e}");
        }
    }

    #[test]
    fn non_finite_input() {
        let mut m = Mat4::identity();
        m[(1, 2)] = f64::INFINITY;
        assert_eq!(eig4(&m), Err(NumericsError::NonFinite));
    }

    #[test]
    fn random_matrices_satisfy_trace_det_and_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for trial in 0..2000 {
            // mix well-scaled and badly scaled rows
            let spread: f64 = if trial % 2 == 0 { 1.0 } else { 1e4 };
            let m = Mat4(std::array::from_fn(|i| {
                std::array::from_fn(|_| rng.gen_range(-1.0..1.0) * spread.powi(i as i32 % 2))
            }));
            let ev = eig4(&m).unwrap();
            assert_residual(&m, &ev);
            let sum: Complex64 = ev.iter().sum();
            let prod: Complex64 = ev.iter().product();
            let scale = m.frobenius_norm();
            assert!((sum.re - m.trace()).abs() <= 1e-9 * scale.max(m.trace().abs()));
            assert!(sum.im.abs() <= 1e-9 * scale);
            let det = m.det();
            assert!((prod.re - det).abs() <= 1e-8 * scale.powi(4).max(det.abs()), "{prod} vs {det}");
            // conjugate pairs
            for e in ev.iter().filter(|e| e.im != 0.0) {
                assert!(ev.iter().any(|f| (f.re - e.re).abs() < 1e-12 * scale && (f.im + e.im).abs() < 1e-12 * scale));
            }
        }
    }

    /// Cross-check against nalgebra's Schur-based eigenvalues.
    #[test]
    fn agrees_with_nalgebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let rows: [[f64; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-3.0..3.0)));
            let ours = sorted(eig4(&Mat4(rows)).unwrap().to_vec());
            let na = nalgebra::Matrix4::from_fn(|i, j| rows[i][j]);
            let theirs = sorted(na.complex_eigenvalues().iter().copied().collect());
            for (a, b) in ours.iter().zip(&theirs) {
                assert!((a - b).norm() < 1e-8, "{ours:?} vs {theirs:?}");
            }
        }
    }
}
