use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Dense real 4x4 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Mat4(pub [[f64; 4]; 4]);

impl Mat4 {
    pub const ZERO: Mat4 = Mat4([[0.0; 4]; 4]);

    pub fn identity() -> Self {
        Self::diag([1.0; 4])
    }

    pub fn diag(d: [f64; 4]) -> Self {
        let mut m = Self::ZERO;
        for i in 0..4 {
            m.0[i][i] = d[i];
        }
        m
    }

    pub fn from_rows(rows: [[f64; 4]; 4]) -> Self {
        Mat4(rows)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::ZERO;
        for i in 0..4 {
            for j in 0..4 {
                t.0[i][j] = self.0[j][i];
            }
        }
        t
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|x| *x *= s);
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    /// Top-left, bottom-right and top-right 2x2 blocks.
    pub fn blocks(&self) -> ([[f64; 2]; 2], [[f64; 2]; 2], [[f64; 2]; 2]) {
        let m = &self.0;
        (
            [[m[0][0], m[0][1]], [m[1][0], m[1][1]]],
            [[m[2][2], m[2][3]], [m[3][2], m[3][3]]],
            [[m[0][2], m[0][3]], [m[1][2], m[1][3]]],
        )
    }

    /// Determinant by Laplace expansion over 2x2 minors of the first two rows.
    pub fn det(&self) -> f64 {
        let m = &self.0;
        let s0 = m[0][0] * m[1][1] - m[1][0] * m[0][1];
        let s1 = m[0][0] * m[1][2] - m[1][0] * m[0][2];
        let s2 = m[0][0] * m[1][3] - m[1][0] * m[0][3];
        let s3 = m[0][1] * m[1][2] - m[1][1] * m[0][2];
        let s4 = m[0][1] * m[1][3] - m[1][1] * m[0][3];
        let s5 = m[0][2] * m[1][3] - m[1][2] * m[0][3];

        let c5 = m[2][2] * m[3][3] - m[3][2] * m[2][3];
        let c4 = m[2][1] * m[3][3] - m[3][1] * m[2][3];
        let c3 = m[2][1] * m[3][2] - m[3][1] * m[2][2];
        let c2 = m[2][0] * m[3][3] - m[3][0] * m[2][3];
        let c1 = m[2][0] * m[3][2] - m[3][0] * m[2][2];
        let c0 = m[2][0] * m[3][1] - m[3][0] * m[2][1];

        s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                worst = worst.max((self.0[i][j] - self.0[j][i]).abs());
            }
        }
        worst
    }

    pub fn symmetrized(&self) -> Self {
        let t = self.transpose();
        let mut s = Self::ZERO;
        for i in 0..4 {
            for j in 0..4 {
                s.0[i][j] = 0.5 * (self.0[i][j] + t.0[i][j]);
            }
        }
        s
    }
}

pub fn det2(m: &[[f64; 2]; 2]) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

impl Index<(usize, usize)> for Mat4 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Mat4 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl Mul for Mat4 {
    type Output = Mat4;
    fn mul(self, rhs: Mat4) -> Mat4 {
        let mut p = Mat4::ZERO;
        for i in 0..4 {
            for j in 0..4 {
                p.0[i][j] = (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        p
    }
}

impl Add for Mat4 {
    type Output = Mat4;
    fn add(self, rhs: Mat4) -> Mat4 {
        let mut s = self;
        for i in 0..4 {
            for j in 0..4 {
                s.0[i][j] += rhs.0[i][j];
            }
        }
        s
    }
}

impl Sub for Mat4 {
    type Output = Mat4;
    fn sub(self, rhs: Mat4) -> Mat4 {
        self + (-rhs)
    }
}

impl Neg for Mat4 {
    type Output = Mat4;
    fn neg(self) -> Mat4 {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_of_simple_matrices() {
        assert_eq!(Mat4::identity().det(), 1.0);
        assert_eq!(Mat4::diag([1.0, 2.0, 3.0, 4.0]).det(), 24.0);
        // swapping two rows flips the sign
        let mut p = Mat4::identity();
        p.0.swap(0, 3);
        assert_eq!(p.det(), -1.0);
        let m = Mat4([
            [2.0, -1.0, 0.0, 3.0],
            [1.0, 4.0, -2.0, 0.5],
            [0.0, 1.0, 1.0, -1.0],
            [5.0, 0.0, 2.0, 1.0],
        ]);
        // multiplicativity against the transpose
        let lhs = (m * m.transpose()).det();
        assert!((lhs - m.det().powi(2)).abs() < 1e-10 * lhs.abs());
    }

    #[test]
    fn blocks_and_symmetry() {
        let mut m = Mat4::ZERO;
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = (4 * i + j) as f64;
            }
        }
        let (a, b, c) = m.blocks();
        assert_eq!(a, [[0.0, 1.0], [4.0, 5.0]]);
        assert_eq!(b, [[10.0, 11.0], [14.0, 15.0]]);
        assert_eq!(c, [[2.0, 3.0], [6.0, 7.0]]);
        assert_eq!(m.symmetrized().max_asymmetry(), 0.0);
        assert_eq!(m.max_asymmetry(), 9.0);
        assert_eq!(m.trace(), 30.0);
    }
}
