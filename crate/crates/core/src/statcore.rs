//! Foundational numerics shared by the whole pipeline: descriptive
//! moments, Pearson correlation, a deterministic symmetric
//! eigendecomposition, Cronbach's alpha, and two-tailed t / F tail
//! probabilities.
//!
//! Conventions used throughout the crate and fixed here:
//!
//! * variances and standard deviations are the *sample* versions
//!   (denominator n - 1);
//! * correlation entries are clamped into [-1, 1] after computation;
//! * eigenpairs are returned in descending eigenvalue order with each
//!   eigenvector's largest-magnitude entry made positive, so identical
//!   inputs always produce bit-identical outputs.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::special::inc_beta;

/// Arithmetic mean. Empty input returns NaN.
pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample variance (denominator n - 1). Requires at least two values.
pub fn sample_var(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return f64::NAN;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64
}

/// Sample standard deviation (denominator n - 1).
pub fn sample_sd(xs: &[f64]) -> f64 {
    sample_var(xs).sqrt()
}

/// Pearson product-moment correlation of two equally long columns.
///
/// Two-pass computation: means first, then centered cross-products.
/// The result is clamped into [-1, 1] to absorb last-bit excursions.
/// Fails when fewer than 3 rows are available or either column has zero
/// variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument(format!(
            "correlation inputs differ in length ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(Error::NotEnoughRows {
            needed: 3,
            got: x.len(),
        });
    }
    let mx = mean(x);
    let my = mean(y);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::InvalidArgument(
            "correlation undefined for a zero-variance column".into(),
        ));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Pearson correlation matrix over named columns.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    pub names: Vec<String>,
    pub values: DMatrix<f64>,
    /// Number of rows the correlations were computed from.
    pub n: usize,
}

impl CorrelationMatrix {
    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn r(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }

    /// Index of a named column.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Correlation matrix of the given named columns.
///
/// All columns must have the same length (>= 3 rows), and every column
/// must have positive variance; a flat column is reported by name. The
/// result is exactly symmetric with a unit diagonal.
pub fn correlation_matrix(cols: &[(&str, &[f64])]) -> Result<CorrelationMatrix> {
    if cols.is_empty() {
        return Err(Error::EmptyColumnSet);
    }
    let n = cols[0].1.len();
    if n < 3 {
        return Err(Error::NotEnoughRows { needed: 3, got: n });
    }
    for (name, data) in cols {
        if data.len() != n {
            return Err(Error::InvalidArgument(format!(
                "column '{name}' has {} rows, expected {n}",
                data.len()
            )));
        }
        if sample_var(data) == 0.0 {
            return Err(Error::ZeroVariance((*name).to_string()));
        }
    }
    let p = cols.len();
    let mut values = DMatrix::identity(p, p);
    for i in 0..p {
        for j in (i + 1)..p {
            let r = pearson(cols[i].1, cols[j].1)?;
            values[(i, j)] = r;
            values[(j, i)] = r;
        }
    }
    Ok(CorrelationMatrix {
        names: cols.iter().map(|(n, _)| (*n).to_string()).collect(),
        values,
        n,
    })
}

/// Eigendecomposition of a symmetric matrix with a fixed presentation:
/// eigenvalues descending, each eigenvector's largest-magnitude entry
/// positive, `vectors` column j paired with `eigenvalues[j]`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

/// Decompose a symmetric matrix into eigenpairs.
///
/// The input must be square and symmetric (absolute asymmetry below
/// 1e-10 relative to the largest entry); it is symmetrized before the
/// solve so that roundoff in the caller cannot leak through. Ordering
/// and signs are normalized as documented on [`EigenDecomposition`].
pub fn sym_eigen(a: &DMatrix<f64>) -> Result<EigenDecomposition> {
    if a.nrows() != a.ncols() {
        return Err(Error::InvalidArgument(format!(
            "matrix is {}x{}, expected square",
            a.nrows(),
            a.ncols()
        )));
    }
    let p = a.nrows();
    if p == 0 {
        return Err(Error::EmptyColumnSet);
    }
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let mut max_asym = 0.0f64;
    for i in 0..p {
        for j in (i + 1)..p {
            max_asym = max_asym.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    if max_asym > 1e-10 * scale {
        return Err(Error::NotSymmetric {
            max_asymmetry: max_asym,
        });
    }
    let sym = (a + a.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, 10_000).ok_or(Error::EigenFailure)?;

    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .partial_cmp(&eig.eigenvalues[i])
            .expect("eigenvalues are finite")
    });

    let mut eigenvalues = Vec::with_capacity(p);
    let mut vectors = DMatrix::zeros(p, p);
    for (dst, &src) in order.iter().enumerate() {
        eigenvalues.push(eig.eigenvalues[src]);
        let col = eig.eigenvectors.column(src);
        // Sign convention: first entry of largest magnitude becomes positive.
        let mut pivot = 0;
        for (i, v) in col.iter().enumerate() {
            if v.abs() > col[pivot].abs() {
                pivot = i;
            }
        }
        let flip = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..p {
            vectors[(i, dst)] = flip * col[i];
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        vectors,
    })
}

/// Cronbach's alpha for a set of item columns, with the two conventional
/// reliability gates.
#[derive(Debug, Clone)]
pub struct AlphaReport {
    pub alpha: f64,
    pub item_count: usize,
    /// alpha >= 0.6 (lenient gate).
    pub passes_0_6: bool,
    /// alpha >= 0.7 (conventional gate). Implies `passes_0_6`.
    pub passes_0_7: bool,
}

/// Cronbach's alpha in its raw covariance form,
/// alpha = k/(k-1) * (1 - sum of item variances / variance of the total
/// score), where the total score is the per-row sum of the items.
///
/// Requires at least two items and two rows, and a total score with
/// positive variance.
pub fn cronbach_alpha(cols: &[(&str, &[f64])]) -> Result<AlphaReport> {
    let k = cols.len();
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "alpha needs at least 2 items, got {k}"
        )));
    }
    let n = cols[0].1.len();
    if n < 2 {
        return Err(Error::NotEnoughRows { needed: 2, got: n });
    }
    for (name, data) in cols {
        if data.len() != n {
            return Err(Error::InvalidArgument(format!(
                "column '{name}' has {} rows, expected {n}",
                data.len()
            )));
        }
    }
    let item_var_sum: f64 = cols.iter().map(|(_, data)| sample_var(data)).sum();
    let totals: Vec<f64> = (0..n)
        .map(|i| cols.iter().map(|(_, data)| data[i]).sum())
        .collect();
    let total_var = sample_var(&totals);
    if total_var == 0.0 {
        return Err(Error::ZeroVariance("total score".into()));
    }
    let alpha = k as f64 / (k as f64 - 1.0) * (1.0 - item_var_sum / total_var);
    Ok(AlphaReport {
        alpha,
        item_count: k,
        passes_0_6: alpha >= 0.6,
        passes_0_7: alpha >= 0.7,
    })
}

/// Two-tailed p-value of Student's t with `df` degrees of freedom,
/// p = I_{df/(df+t^2)}(df/2, 1/2).
pub fn p_value_t(t: f64, df: usize) -> Result<f64> {
    if df == 0 {
        return Err(Error::InvalidArgument(
            "t distribution needs df >= 1".into(),
        ));
    }
    if !t.is_finite() {
        if t.is_nan() {
            return Err(Error::InvalidArgument("t statistic is NaN".into()));
        }
        return Ok(0.0);
    }
    let df = df as f64;
    Ok(inc_beta(df / 2.0, 0.5, df / (df + t * t)))
}

/// Upper-tail p-value of the F distribution with (df1, df2) degrees of
/// freedom, p = I_{df2/(df2+df1*f)}(df2/2, df1/2). Shares the incomplete
/// beta machinery with [`p_value_t`].
pub fn p_value_f(f: f64, df1: usize, df2: usize) -> Result<f64> {
    if df1 == 0 || df2 == 0 {
        return Err(Error::InvalidArgument(
            "F distribution needs df1, df2 >= 1".into(),
        ));
    }
    if f.is_nan() || f < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "F statistic must be nonnegative, got {f}"
        )));
    }
    if f.is_infinite() {
        return Ok(0.0);
    }
    let d1 = df1 as f64;
    let d2 = df2 as f64;
    Ok(inc_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f)))
}

/// Two-tailed p-value of a Pearson correlation under the null of zero
/// correlation: t = r * sqrt((n-2)/(1-r^2)) with n-2 degrees of freedom.
pub fn p_value_r(r: f64, n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::NotEnoughRows { needed: 3, got: n });
    }
    if r.abs() >= 1.0 {
        return Ok(0.0);
    }
    let t = r * ((n - 2) as f64 / (1.0 - r * r)).sqrt();
    p_value_t(t, n - 2)
}
