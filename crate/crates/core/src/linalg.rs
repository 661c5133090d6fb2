//! Fixed-size complex linear algebra: a 2×2 matrix type and a pivoted
//! Gauss-Jordan inverse for the small systems the noise solver builds.

use core::ops::{Index, IndexMut, Mul};

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::C64;

/// Dense 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn diagonal(a: C64, d: C64) -> Self {
        Mat2::new(a, C64::zero(), C64::zero(), d)
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn apply(&self, v: &[C64; 2]) -> [C64; 2] {
        [
            self.0[0][0] * v[0] + self.0[0][1] * v[1],
            self.0[1][0] * v[0] + self.0[1][1] * v[1],
        ]
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.is_finite())
    }

    /// Solves `self · x = rhs`; `None` when the determinant vanishes.
    pub fn solve(&self, rhs: &[C64; 2]) -> Option<[C64; 2]> {
        let det = self.det();
        if det.is_zero() || !det.is_finite() {
            return None;
        }
        let m = &self.0;
        Some([
            (m[1][1] * rhs[0] - m[0][1] * rhs[1]) / det,
            (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / det,
        ])
    }
}

impl Index<(usize, usize)> for Mat2 {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.0[r][c]
    }
}

impl IndexMut<(usize, usize)> for Mat2 {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.0[r][c]
    }
}

impl Mul<[C64; 2]> for Mat2 {
    type Output = [C64; 2];
    fn mul(self, v: [C64; 2]) -> [C64; 2] {
        self.apply(&v)
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Inverse of an `N×N` matrix by Gauss-Jordan elimination with partial
/// pivoting. `None` if a pivot is exactly zero.
pub fn invert<const N: usize>(a: &[[C64; N]; N]) -> Option<[[C64; N]; N]> {
    let mut m = *a;
    let mut inv = [[C64::zero(); N]; N];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = C64::new(1.0, 0.0);
    }
    for col in 0..N {
        let pivot = (col..N)
            .max_by(|&i, &j| m[i][col].norm_sqr().total_cmp(&m[j][col].norm_sqr()))
            .unwrap_or(col);
        if m[pivot][col].is_zero() {
            return None;
        }
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = m[col][col].inv();
        for k in 0..N {
            m[col][k] *= scale;
            inv[col][k] *= scale;
        }
        for row in 0..N {
            if row == col {
                continue;
            }
            let factor = m[row][col];
            if factor.is_zero() {
                continue;
            }
            for k in 0..N {
                let mk = m[col][k];
                let ik = inv[col][k];
                m[row][k] -= factor * mk;
                inv[row][k] -= factor * ik;
            }
        }
    }
    Some(inv)
}

/// Induced 1-norm (maximum absolute column sum).
pub fn norm_1<const N: usize>(a: &[[C64; N]; N]) -> f64 {
    (0..N)
        .map(|c| (0..N).map(|r| a[r][c].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn inverse_of_known_matrix() {
        let a = [
            [c(2.0, 1.0), c(0.0, 1.0), c(1.0, 0.0)],
            [c(0.0, 0.0), c(3.0, -1.0), c(0.5, 0.5)],
            [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 2.0)],
        ];
        let inv = invert(&a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = C64::zero();
                for k in 0..3 {
                    s += a[i][k] * inv[k][j];
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((s - c(expect, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let a = [[c(1.0, 0.0), c(2.0, 0.0)], [c(2.0, 0.0), c(4.0, 0.0)]];
        // exact elimination leaves a zero pivot
        assert!(invert(&a).is_none());
        assert!(Mat2(a).solve(&[c(1.0, 0.0), c(0.0, 0.0)]).is_none());
    }

    #[test]
    fn mat2_solve_round_trip() {
        let m = Mat2::new(c(1.0, 2.0), c(-0.5, 0.0), c(0.3, 0.7), c(2.0, -1.0));
        let x = [c(0.25, -3.0), c(1.5, 0.5)];
        let y = m * x;
        let back = m.solve(&y).unwrap();
        for k in 0..2 {
            assert_relative_eq!(back[k].re, x[k].re, epsilon = 1e-14);
            assert_relative_eq!(back[k].im, x[k].im, epsilon = 1e-14);
        }
    }
}
