//! Exploratory factor analysis: eigenvalue-based retention, iterated
//! principal-axis factoring, varimax rotation, and the item-pruning loop.
//!
//! The pruning loop reruns the whole analysis on a shrinking item set:
//! each pass factors the current items, rotates, and then drops in one
//! batch every item whose largest absolute loading stays below the
//! cutoff (weak) and every item loading at or above the cutoff on two or
//! more factors (cross-loading). The loop stops at the first pass with
//! no drops and keeps a full per-pass audit trail.

use nalgebra::DMatrix;

use crate::dataset::Table;
use crate::error::{Error, Result};
use crate::statcore::{self, CorrelationMatrix};

/// Principal-axis iteration stops when the largest communality change
/// falls below this tolerance.
pub const PAF_TOLERANCE: f64 = 1e-4;
/// Hard cap on principal-axis iterations.
pub const PAF_MAX_ITER: usize = 100;
/// Varimax sweeps stop when the criterion improves by less than this.
pub const VARIMAX_TOLERANCE: f64 = 1e-6;
/// Hard cap on varimax sweeps.
pub const VARIMAX_MAX_SWEEPS: usize = 50;

/// Items-by-factors loading matrix.
#[derive(Debug, Clone)]
pub struct LoadingMatrix {
    pub items: Vec<String>,
    /// Row i = item i, column j = factor j.
    pub values: DMatrix<f64>,
}

impl LoadingMatrix {
    pub fn n_items(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_factors(&self) -> usize {
        self.values.ncols()
    }

    /// Row sums of squared loadings.
    pub fn communalities(&self) -> Vec<f64> {
        (0..self.values.nrows())
            .map(|i| self.values.row(i).iter().map(|v| v * v).sum())
            .collect()
    }

    /// Column sums of squared loadings.
    pub fn explained_variance(&self) -> Vec<f64> {
        (0..self.values.ncols())
            .map(|j| self.values.column(j).iter().map(|v| v * v).sum())
            .collect()
    }
}

/// Number of eigenvalues at or above the threshold (inclusive rule).
pub fn retained_at_or_above(eigenvalues: &[f64], threshold: f64) -> usize {
    eigenvalues.iter().filter(|&&v| v >= threshold).count()
}

/// Factor-count retention on the *unreduced* correlation matrix:
/// count of eigenvalues >= threshold. With the conventional threshold of
/// 1.0 every valid correlation matrix retains at least one factor.
pub fn kaiser_retention_count(corr: &CorrelationMatrix, threshold: f64) -> Result<usize> {
    let eig = statcore::sym_eigen(&corr.values)?;
    Ok(retained_at_or_above(&eig.eigenvalues, threshold))
}

/// Unrotated principal-axis solution.
#[derive(Debug, Clone)]
pub struct PafSolution {
    pub loadings: LoadingMatrix,
    pub communalities: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// Items whose communality exceeded 1 at some point and was clamped.
    pub heywood_items: Vec<String>,
}

/// Initial communality estimates: squared multiple correlations
/// 1 - 1/diag(R^-1), falling back to each item's largest absolute
/// off-diagonal correlation when R cannot be inverted.
fn initial_communalities(corr: &CorrelationMatrix) -> Vec<f64> {
    let p = corr.dim();
    if let Some(inv) = corr.values.clone().try_inverse() {
        let mut ok = true;
        let mut smc = Vec::with_capacity(p);
        for i in 0..p {
            let d = inv[(i, i)];
            if !d.is_finite() || d <= 0.0 {
                ok = false;
                break;
            }
            smc.push((1.0 - 1.0 / d).clamp(0.0, 1.0 - 1e-6));
        }
        if ok {
            return smc;
        }
    }
    (0..p)
        .map(|i| {
            (0..p)
                .filter(|&j| j != i)
                .map(|j| corr.r(i, j).abs())
                .fold(0.0f64, f64::max)
        })
        .collect()
}

/// Iterated principal-axis factoring with `m` factors.
///
/// The correlation diagonal is replaced by the current communality
/// estimates, the reduced matrix is eigendecomposed, and loadings are
/// rebuilt from the top `m` eigenpairs (negative eigenvalues clamp to
/// zero) until the communalities move by less than [`PAF_TOLERANCE`].
/// Communalities above 1 are clamped to 1 - 1e-6 and the item flagged.
pub fn principal_axis_factor(corr: &CorrelationMatrix, m: usize) -> Result<PafSolution> {
    let p = corr.dim();
    if m == 0 || m >= p {
        return Err(Error::InvalidArgument(format!(
            "factor count must satisfy 1 <= m < {p}, got {m}"
        )));
    }
    let mut h = initial_communalities(corr);
    let mut heywood = vec![false; p];
    let mut loadings = DMatrix::zeros(p, m);
    let mut converged = false;
    let mut iterations = 0;

    while iterations < PAF_MAX_ITER {
        iterations += 1;
        let mut reduced = corr.values.clone();
        for i in 0..p {
            reduced[(i, i)] = h[i];
        }
        let eig = statcore::sym_eigen(&reduced)?;
        for j in 0..m {
            let lambda = eig.eigenvalues[j].max(0.0).sqrt();
            for i in 0..p {
                loadings[(i, j)] = lambda * eig.vectors[(i, j)];
            }
        }
        let mut delta = 0.0f64;
        for i in 0..p {
            let mut hi: f64 = loadings.row(i).iter().map(|v| v * v).sum();
            if hi > 1.0 {
                hi = 1.0 - 1e-6;
                heywood[i] = true;
                // Rescale the row so the reported loadings stay consistent
                // with the clamped communality.
                let raw: f64 = loadings.row(i).iter().map(|v| v * v).sum();
                let scale = (hi / raw).sqrt();
                for j in 0..m {
                    loadings[(i, j)] *= scale;
                }
            }
            delta = delta.max((hi - h[i]).abs());
            h[i] = hi;
        }
        if delta < PAF_TOLERANCE {
            converged = true;
            break;
        }
    }

    let heywood_items = corr
        .names
        .iter()
        .zip(&heywood)
        .filter(|(_, &flag)| flag)
        .map(|(name, _)| name.clone())
        .collect();
    Ok(PafSolution {
        loadings: LoadingMatrix {
            items: corr.names.clone(),
            values: loadings,
        },
        communalities: h,
        converged,
        iterations,
        heywood_items,
    })
}

/// Rows scaled to unit length (Kaiser normalization); rows with
/// negligible communality are left at zero.
fn kaiser_normalized(values: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = values.clone();
    for i in 0..out.nrows() {
        let h: f64 = out.row(i).iter().map(|v| v * v).sum::<f64>().sqrt();
        if h > 1e-12 {
            for j in 0..out.ncols() {
                out[(i, j)] /= h;
            }
        } else {
            for j in 0..out.ncols() {
                out[(i, j)] = 0.0;
            }
        }
    }
    out
}

/// The varimax objective: sum over factors of the variance of squared
/// loadings, computed on the Kaiser-normalized matrix.
pub fn varimax_criterion(values: &DMatrix<f64>) -> f64 {
    let x = kaiser_normalized(values);
    let n = x.nrows() as f64;
    if n == 0.0 {
        return 0.0;
    }
    (0..x.ncols())
        .map(|j| {
            let (mut s2, mut s4) = (0.0, 0.0);
            for v in x.column(j).iter() {
                let q = v * v;
                s2 += q;
                s4 += q * q;
            }
            s4 / n - (s2 / n) * (s2 / n)
        })
        .sum()
}

/// Rotated loadings together with the orthogonal rotation that produced
/// them: `rotated.values = unrotated * rotation`.
#[derive(Debug, Clone)]
pub struct RotatedLoadings {
    pub loadings: LoadingMatrix,
    pub rotation: DMatrix<f64>,
}

/// Varimax rotation with Kaiser row normalization.
///
/// Sweeps planar rotations over every factor pair until the criterion
/// improves by less than [`VARIMAX_TOLERANCE`] or the sweep cap is hit;
/// the rotations are found on the normalized matrix, then applied to the
/// raw one. Afterwards each factor's sign is fixed so its
/// largest-magnitude loading is positive, and factors are reordered by
/// descending explained variance. Row communalities are untouched by
/// construction (the rotation is orthogonal).
pub fn varimax_rotate(unrotated: &LoadingMatrix) -> RotatedLoadings {
    let n = unrotated.n_items();
    let m = unrotated.n_factors();
    let mut rotation = DMatrix::identity(m, m);

    if m >= 2 && n > 0 {
        let mut x = kaiser_normalized(&unrotated.values);
        let nf = n as f64;
        let mut previous = varimax_criterion(&x);
        for _ in 0..VARIMAX_MAX_SWEEPS {
            for p in 0..m - 1 {
                for q in p + 1..m {
                    let (mut a, mut b, mut c, mut d) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
                    for i in 0..n {
                        let u = x[(i, p)] * x[(i, p)] - x[(i, q)] * x[(i, q)];
                        let v = 2.0 * x[(i, p)] * x[(i, q)];
                        a += u;
                        b += v;
                        c += u * u - v * v;
                        d += 2.0 * u * v;
                    }
                    let num = d - 2.0 * a * b / nf;
                    let den = c - (a * a - b * b) / nf;
                    if num.abs() < 1e-15 && den.abs() < 1e-15 {
                        continue;
                    }
                    let phi = 0.25 * num.atan2(den);
                    if phi.abs() < 1e-12 {
                        continue;
                    }
                    let (s, co) = phi.sin_cos();
                    for i in 0..n {
                        let xp = x[(i, p)];
                        let xq = x[(i, q)];
                        x[(i, p)] = co * xp + s * xq;
                        x[(i, q)] = -s * xp + co * xq;
                    }
                    for i in 0..m {
                        let tp = rotation[(i, p)];
                        let tq = rotation[(i, q)];
                        rotation[(i, p)] = co * tp + s * tq;
                        rotation[(i, q)] = -s * tp + co * tq;
                    }
                }
            }
            let current = varimax_criterion(&x);
            assert!(
                current >= previous - 1e-9,
                "varimax criterion decreased: {previous} -> {current}"
            );
            if current - previous < VARIMAX_TOLERANCE {
                break;
            }
            previous = current;
        }
    }

    let mut values = &unrotated.values * &rotation;

    // Sign convention: each factor's largest-magnitude loading positive.
    for j in 0..m {
        let mut pivot = 0;
        for i in 0..n {
            if values[(i, j)].abs() > values[(pivot, j)].abs() {
                pivot = i;
            }
        }
        if n > 0 && values[(pivot, j)] < 0.0 {
            for i in 0..n {
                values[(i, j)] = -values[(i, j)];
            }
            for i in 0..m {
                rotation[(i, j)] = -rotation[(i, j)];
            }
        }
    }

    // Order factors by descending explained variance.
    let ev: Vec<f64> = (0..m)
        .map(|j| values.column(j).iter().map(|v| v * v).sum())
        .collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| ev[j].partial_cmp(&ev[i]).unwrap().then(i.cmp(&j)));
    let mut ordered_values = DMatrix::zeros(n, m);
    let mut ordered_rotation = DMatrix::zeros(m, m);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            ordered_values[(i, dst)] = values[(i, src)];
        }
        for i in 0..m {
            ordered_rotation[(i, dst)] = rotation[(i, src)];
        }
    }

    RotatedLoadings {
        loadings: LoadingMatrix {
            items: unrotated.items.clone(),
            values: ordered_values,
        },
        rotation: ordered_rotation,
    }
}

/// Knobs for the pruning loop.
#[derive(Debug, Clone)]
pub struct PruneRules {
    /// Items need at least one loading at or above this to survive, and
    /// are cross-loading when two or more loadings reach it.
    pub loading_cutoff: f64,
    /// Eigenvalue threshold for factor retention (inclusive).
    pub eigen_threshold: f64,
    /// Safety cap on outer passes.
    pub max_outer_iterations: usize,
}

impl Default for PruneRules {
    fn default() -> Self {
        PruneRules {
            loading_cutoff: 0.4,
            eigen_threshold: 1.0,
            max_outer_iterations: 100,
        }
    }
}

/// One pass of the pruning loop, for the audit trail.
#[derive(Debug, Clone)]
pub struct PruneIteration {
    /// Items analyzed in this pass.
    pub items: Vec<String>,
    /// Factors retained for this pass.
    pub retained_factors: usize,
    /// Eigenvalues of the unreduced correlation matrix for this pass.
    pub unreduced_eigenvalues: Vec<f64>,
    pub dropped_low: Vec<String>,
    pub dropped_cross: Vec<String>,
}

/// Final state of the pruning loop.
#[derive(Debug, Clone)]
pub struct FactorSolution {
    /// Rotated loadings over the surviving items.
    pub loadings: LoadingMatrix,
    pub communalities: Vec<f64>,
    pub rotation: DMatrix<f64>,
    pub retained_factor_count: usize,
    /// Unreduced eigenvalues of the final pass.
    pub unreduced_eigenvalues: Vec<f64>,
    /// One entry per pass, in order.
    pub iterations: Vec<PruneIteration>,
    pub heywood_items: Vec<String>,
    /// Inner-loop iterations of the final pass's extraction.
    pub paf_iterations: usize,
    pub paf_converged: bool,
}

impl FactorSolution {
    pub fn iteration_count(&self) -> usize {
        self.iterations.len()
    }

    pub fn kept_items(&self) -> &[String] {
        &self.loadings.items
    }
}

/// Run the full analyze-and-prune loop over `items` of `table`.
///
/// Each pass recomputes the correlation matrix, re-evaluates the factor
/// count on its unreduced eigenvalues, factors, rotates, and drops weak
/// and cross-loading items in one batch. Returns once a pass drops
/// nothing. Fails if fewer than three items remain (the trail rides
/// along in the error) or if retention degenerates to every item.
pub fn prune_iterate(table: &Table, items: &[String], rules: &PruneRules) -> Result<FactorSolution> {
    if items.is_empty() {
        return Err(Error::EmptyColumnSet);
    }
    for item in items {
        if table.index_of(item).is_none() {
            return Err(Error::UnknownItem(item.clone()));
        }
    }

    let mut current: Vec<String> = items.to_vec();
    let mut trail: Vec<PruneIteration> = Vec::new();

    for _pass in 0..rules.max_outer_iterations {
        if current.len() < 3 {
            return Err(Error::TooFewItemsAfterPruning {
                needed: 3,
                got: current.len(),
                trail,
            });
        }
        let corr = statcore::correlation_matrix(&table.view(&current)?)?;
        let eig = statcore::sym_eigen(&corr.values)?;
        let m = retained_at_or_above(&eig.eigenvalues, rules.eigen_threshold);
        if m == 0 || m >= current.len() {
            return Err(Error::DegenerateRetention {
                retained: m,
                total: current.len(),
            });
        }
        let paf = principal_axis_factor(&corr, m)?;
        let rotated = varimax_rotate(&paf.loadings);

        let mut dropped_low = Vec::new();
        let mut dropped_cross = Vec::new();
        for (i, item) in rotated.loadings.items.iter().enumerate() {
            let row = rotated.loadings.values.row(i);
            let strong = row.iter().filter(|v| v.abs() >= rules.loading_cutoff).count();
            if strong == 0 {
                dropped_low.push(item.clone());
            } else if strong >= 2 {
                dropped_cross.push(item.clone());
            }
        }

        trail.push(PruneIteration {
            items: current.clone(),
            retained_factors: m,
            unreduced_eigenvalues: eig.eigenvalues.clone(),
            dropped_low: dropped_low.clone(),
            dropped_cross: dropped_cross.clone(),
        });

        if dropped_low.is_empty() && dropped_cross.is_empty() {
            let communalities = rotated.loadings.communalities();
            return Ok(FactorSolution {
                loadings: rotated.loadings,
                communalities,
                rotation: rotated.rotation,
                retained_factor_count: m,
                unreduced_eigenvalues: eig.eigenvalues,
                iterations: trail,
                heywood_items: paf.heywood_items,
                paf_iterations: paf.iterations,
                paf_converged: paf.converged,
            });
        }
        current.retain(|item| !dropped_low.contains(item) && !dropped_cross.contains(item));
    }

    Err(Error::InvalidArgument(format!(
        "pruning did not reach a fixed point within {} passes",
        rules.max_outer_iterations
    )))
}
