//! Small dense linear algebra: complex 3x3 determinants and null directions, real solves.

use crate::error::{CoreError, Result};
use num_complex::Complex64;

pub type CMat3 = [[Complex64; 3]; 3];

/// Determinant by cofactor expansion along the first row.
pub fn det3(m: &CMat3) -> Complex64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Bilinear cross product: `a . (a x b) = b . (a x b) = 0` without conjugation.
pub fn cross(a: &[Complex64; 3], b: &[Complex64; 3]) -> [Complex64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn norm3(v: &[Complex64; 3]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Unit vector approximately annihilated by a 3x3 matrix.
#[derive(Debug, Clone, Copy)]
pub struct NullDirection {
    pub v: [Complex64; 3],
    /// `|M v|` with rows of `M` scaled to unit norm.
    pub residual: f64,
}

/// Null direction from the row pair whose cross product is largest.
pub fn null_direction(m: &CMat3) -> NullDirection {
    let rows: Vec<[Complex64; 3]> = m
        .iter()
        .map(|r| {
            let n = norm3(r);
            if n > 0.0 {
                [r[0] / n, r[1] / n, r[2] / n]
            } else {
                *r
            }
        })
        .collect();
    let mut best = [Complex64::new(0.0, 0.0); 3];
    let mut best_n = -1.0;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let c = cross(&rows[i], &rows[j]);
        let n = norm3(&c);
        if n > best_n {
            best_n = n;
            best = c;
        }
    }
    if best_n > 0.0 {
        for z in best.iter_mut() {
            *z /= best_n;
        }
    }
    let residual = rows
        .iter()
        .map(|r| (r[0] * best[0] + r[1] * best[1] + r[2] * best[2]).norm_sqr())
        .sum::<f64>()
        .sqrt();
    NullDirection { v: best, residual }
}

/// Solve `A x = b` by Gaussian elimination with partial pivoting.
pub fn solve_dense(a: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let n = b.len();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(CoreError::Invalid("solve_dense: shape mismatch".into()));
    }
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut x = b.to_vec();
    let scale = m.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs()));
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs())).unwrap();
        if m[p][k].abs() <= 1e-14 * scale {
            return Err(CoreError::Singular(format!("pivot {k} vanishes")));
        }
        m.swap(k, p);
        x.swap(k, p);
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            if f != 0.0 {
                for j in k..n {
                    m[i][j] -= f * m[k][j];
                }
                x[i] -= f * x[k];
            }
        }
    }
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| m[k][j] * x[j]).sum();
        x[k] = (x[k] - s) / m[k][k];
    }
    Ok(x)
}

/// Inverse of a small dense matrix.
pub fn invert(a: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        cols.push(solve_dense(a, &e)?);
    }
    Ok((0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect())
}

/// One-norm condition number.
pub fn condition_1(a: &[Vec<f64>]) -> Result<f64> {
    let norm1 = |m: &[Vec<f64>]| {
        (0..m.len()).map(|j| m.iter().map(|r| r[j].abs()).sum::<f64>()).fold(0.0, f64::max)
    };
    Ok(norm1(a) * norm1(&invert(a)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn eye() -> CMat3 {
        let o = c(0.0, 0.0);
        let l = c(1.0, 0.0);
        [[l, o, o], [o, l, o], [o, o, l]]
    }

    #[test]
    fn identity() {
        assert_eq!(det3(&eye()), c(1.0, 0.0));
        let nd = null_direction(&eye());
        assert!((nd.residual - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rank_two() {
        let r1 = [c(1.0, 2.0), c(-0.5, 0.3), c(2.0, -1.0)];
        let r2 = [c(0.2, 0.0), c(1.5, 1.0), c(-0.7, 0.4)];
        let r3 = [r1[0] + r2[0], r1[1] + r2[1], r1[2] + r2[2]];
        let m = [r1, r2, r3];
        assert!(det3(&m).norm() < 1e-14);
        let nd = null_direction(&m);
        assert!(nd.residual < 1e-12);
        assert!((norm3(&nd.v) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn solve_small() {
        let a = vec![vec![2.0, 1.0, 0.0], vec![1.0, 3.0, 1.0], vec![0.0, 1.0, 4.0]];
        let x = solve_dense(&a, &[3.0, 5.0, 5.0]).unwrap();
        for v in x {
            assert!((v - 1.0).abs() < 1e-14);
        }
        assert!(solve_dense(&[vec![1.0, 2.0], vec![2.0, 4.0]], &[1.0, 2.0]).is_err());
    }

    fn arb_mat() -> impl Strategy<Value = CMat3> {
        prop::array::uniform3(prop::array::uniform3((-2.0f64..2.0, -2.0f64..2.0)))
            .prop_map(|m| m.map(|r| r.map(|(a, b)| c(a, b))))
    }

    proptest! {
        #[test]
        fn det_antisymmetric_under_row_swap(m in arb_mat()) {
            let mut s = m;
            s.swap(0, 2);
            prop_assert!((det3(&m) + det3(&s)).norm() < 1e-12);
        }

        #[test]
        fn det_linear_in_row(m in arb_mat(), r in prop::array::uniform3((-2.0f64..2.0, -2.0f64..2.0)), k in -3.0f64..3.0) {
            let r = r.map(|(a, b)| c(a, b));
            let mut sum = m;
            let mut other = m;
            for j in 0..3 {
                sum[1][j] = m[1][j] * k + r[j];
                other[1][j] = r[j];
            }
            let lhs = det3(&sum);
            let rhs = det3(&m) * k + det3(&other);
            prop_assert!((lhs - rhs).norm() < 1e-11);
        }
    }
}
