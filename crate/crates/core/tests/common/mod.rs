//! Helpers shared across the integration test binaries.

#![allow(dead_code)]

use nalgebra::DMatrix;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn center(xs: &mut [f64]) {
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    for x in xs.iter_mut() {
        *x -= m;
    }
}

fn to_unit_sample_variance(xs: &mut [f64]) {
    let ss = dot(xs, xs) / (xs.len() - 1) as f64;
    let s = ss.sqrt();
    for x in xs.iter_mut() {
        *x /= s;
    }
}

/// Standardize to mean 0, sample standard deviation 1.
pub fn zscore(xs: &[f64]) -> Vec<f64> {
    let mut out = xs.to_vec();
    center(&mut out);
    to_unit_sample_variance(&mut out);
    out
}

/// `count` columns of length `n` that are exactly centered, mutually
/// orthogonal, and of unit sample variance (up to machine precision).
///
/// Starts from sine/cosine harmonics over a full period, then cleans
/// the floating-point residue with explicit centering and Gram-Schmidt
/// so downstream sums treat them as numerically exact.
pub fn orthonormal_columns(count: usize, n: usize) -> Vec<Vec<f64>> {
    assert!(n > 2 * count + 1, "need n > 2*count+1 rows for {count} harmonics");
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(count);
    for c in 0..count {
        let harmonic = (c / 2 + 1) as f64;
        let mut col: Vec<f64> = (0..n)
            .map(|i| {
                let theta = 2.0 * std::f64::consts::PI * harmonic * i as f64 / n as f64;
                if c % 2 == 0 {
                    theta.cos()
                } else {
                    theta.sin()
                }
            })
            .collect();
        center(&mut col);
        for prev in &cols {
            let proj = dot(prev, &col) / dot(prev, prev);
            for (x, p) in col.iter_mut().zip(prev) {
                *x -= proj * p;
            }
        }
        center(&mut col);
        to_unit_sample_variance(&mut col);
        cols.push(col);
    }
    cols
}

/// An (x, y) pair of length `n` whose sample Pearson correlation is
/// `r` up to machine precision: y = r*x + sqrt(1-r^2)*z with x, z
/// orthonormal.
pub fn pair_with_r(r: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(r.abs() < 1.0);
    let cols = orthonormal_columns(2, n);
    let s = (1.0 - r * r).sqrt();
    let y: Vec<f64> = cols[0]
        .iter()
        .zip(&cols[1])
        .map(|(a, b)| r * a + s * b)
        .collect();
    (cols[0].clone(), y)
}

/// Brute-force standardized regression coefficients: z-score all
/// variables, form the normal equations X'X b = X'y, and solve by
/// Gauss-Jordan elimination with partial pivoting. Independent of the
/// QR path under test.
pub fn normal_equations_beta(dependent: &[f64], predictors: &[Vec<f64>]) -> Vec<f64> {
    let y = zscore(dependent);
    let xs: Vec<Vec<f64>> = predictors.iter().map(|c| zscore(c)).collect();
    let p = xs.len();
    let mut a = vec![vec![0.0f64; p + 1]; p];
    for i in 0..p {
        for j in 0..p {
            a[i][j] = dot(&xs[i], &xs[j]);
        }
        a[i][p] = dot(&xs[i], &y);
    }
    for col in 0..p {
        let pivot = (col..p)
            .max_by(|&r1, &r2| a[r1][col].abs().total_cmp(&a[r2][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        let d = a[col][col];
        assert!(d.abs() > 1e-12, "oracle: singular normal equations");
        for j in col..=p {
            a[col][j] /= d;
        }
        for row in 0..p {
            if row != col {
                let f = a[row][col];
                for j in col..=p {
                    a[row][j] -= f * a[col][j];
                }
            }
        }
    }
    (0..p).map(|i| a[i][p]).collect()
}

/// Largest absolute entry difference between two loading matrices
/// after the best column permutation and per-column sign assignment.
/// Columns are matched greedily by absolute inner product, which is
/// exact for the clean simple-structure fixtures used in tests.
pub fn aligned_max_deviation(estimate: &DMatrix<f64>, truth: &DMatrix<f64>) -> f64 {
    assert_eq!(estimate.shape(), truth.shape());
    let m = truth.ncols();
    let mut used = vec![false; m];
    let mut worst = 0.0f64;
    for j in 0..m {
        let mut best = usize::MAX;
        let mut best_dot = 0.0f64;
        for k in 0..m {
            if used[k] {
                continue;
            }
            let d = estimate.column(k).dot(&truth.column(j));
            if best == usize::MAX || d.abs() > best_dot.abs() {
                best = k;
                best_dot = d;
            }
        }
        used[best] = true;
        let sign = if best_dot < 0.0 { -1.0 } else { 1.0 };
        for i in 0..truth.nrows() {
            let diff = (sign * estimate[(i, best)] - truth[(i, j)]).abs();
            worst = worst.max(diff);
        }
    }
    worst
}
