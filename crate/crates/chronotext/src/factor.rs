//! Shared dense linear-algebra helpers for the factor analyses.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Eigenvalues at or below this are treated as null axes.
pub(crate) const NULL_EIGENVALUE: f64 = 1e-12;

/// A singular value decomposition with axes sorted by decreasing
/// singular value.
pub(crate) struct SortedSvd {
    /// Singular values, descending.
    pub singular: Vec<f64>,
    /// Left singular vectors, one column per axis (`rows × k`).
    pub u: DMatrix<f64>,
    /// Right singular vectors, one column per axis (`cols × k`).
    pub v: DMatrix<f64>,
}

/// Full SVD of `matrix` with deterministic axis order (decreasing
/// singular value, ties broken by original position).
///
/// The decomposition goes through a symmetric eigensolve of the smaller
/// Gram matrix rather than nalgebra's bidiagonalizing `SVD`, which can
/// return badly inaccurate factors for some small inputs (reconstruction
/// errors on the order of the matrix norm). Squaring the spectrum costs
/// precision only for singular values near `sqrt(machine epsilon)` times
/// the largest; every consumer here discards axes at `NULL_EIGENVALUE`,
/// far above where that loss matters.
pub(crate) fn sorted_svd(matrix: &DMatrix<f64>) -> Result<SortedSvd> {
    let (rows, cols) = matrix.shape();
    let k = rows.min(cols);
    // Eigendecompose AᵀA when the matrix is tall, AAᵀ when it is wide;
    // either way the smaller Gram matrix carries exactly `k` eigenvalues
    // and its eigenvectors are the singular vectors of the smaller side.
    let tall = rows >= cols;
    let gram = if tall {
        matrix.transpose() * matrix
    } else {
        matrix * matrix.transpose()
    };
    let eigen = nalgebra::SymmetricEigen::try_new(gram, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("eigendecomposition did not converge".into()))?;
    let mut order: Vec<usize> = (0..eigen.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| {
        eigen.eigenvalues[b]
            .total_cmp(&eigen.eigenvalues[a])
            .then(a.cmp(&b))
    });

    let mut singular = Vec::with_capacity(k);
    let mut u = DMatrix::zeros(rows, k);
    let mut v = DMatrix::zeros(cols, k);
    for (new_k, &old_k) in order.iter().take(k).enumerate() {
        // Roundoff can push null eigenvalues of the Gram matrix slightly
        // negative; they correspond to null singular values.
        let sigma = eigen.eigenvalues[old_k].max(0.0).sqrt();
        singular.push(sigma);
        let eigenvector = eigen.eigenvectors.column(old_k);
        if tall {
            v.column_mut(new_k).copy_from(&eigenvector);
        } else {
            u.column_mut(new_k).copy_from(&eigenvector);
        }
        // Recover the other side as A v / σ (or Aᵀ u / σ). Null axes keep
        // zero columns: σ = 0 multiplies them away in any reconstruction,
        // and the analyses never read coordinates of discarded axes.
        if sigma * sigma > NULL_EIGENVALUE {
            if tall {
                let image = matrix * v.column(new_k);
                for i in 0..rows {
                    u[(i, new_k)] = image[i] / sigma;
                }
            } else {
                let image = matrix.transpose() * u.column(new_k);
                for j in 0..cols {
                    v[(j, new_k)] = image[j] / sigma;
                }
            }
        }
    }
    Ok(SortedSvd { singular, u, v })
}

/// Flips axis signs so that, per axis, the `coords` row of largest
/// absolute value is positive (first such row on ties). The same flips
/// are applied to every matrix in `linked`.
pub(crate) fn orient_axes(coords: &mut DMatrix<f64>, linked: &mut [&mut DMatrix<f64>]) {
    for k in 0..coords.ncols() {
        let mut best_row = 0;
        let mut best_abs = f64::NEG_INFINITY;
        for j in 0..coords.nrows() {
            let a = coords[(j, k)].abs();
            if a > best_abs {
                best_abs = a;
                best_row = j;
            }
        }
        if coords[(best_row, k)] < 0.0 {
            for j in 0..coords.nrows() {
                coords[(j, k)] = -coords[(j, k)];
            }
            for matrix in linked.iter_mut() {
                for i in 0..matrix.nrows() {
                    matrix[(i, k)] = -matrix[(i, k)];
                }
            }
        }
    }
}

/// Weighted mean with arbitrary nonnegative weights.
pub(crate) fn weighted_mean(values: &[f64], weights: &[f64]) -> f64 {
    let total: f64 = weights.iter().sum();
    values.iter().zip(weights).map(|(v, w)| v * w).sum::<f64>() / total
}

/// Weighted (population) variance.
pub(crate) fn weighted_variance(values: &[f64], weights: &[f64]) -> f64 {
    let mean = weighted_mean(values, weights);
    let total: f64 = weights.iter().sum();
    values
        .iter()
        .zip(weights)
        .map(|(v, w)| w * (v - mean) * (v - mean))
        .sum::<f64>()
        / total
}

/// Weighted Pearson correlation; 0 when either side is constant.
pub(crate) fn weighted_pearson(a: &[f64], b: &[f64], weights: &[f64]) -> f64 {
    let mean_a = weighted_mean(a, weights);
    let mean_b = weighted_mean(b, weights);
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for ((&x, &y), &w) in a.iter().zip(b).zip(weights) {
        cov += w * (x - mean_a) * (y - mean_b);
        var_a += w * (x - mean_a) * (x - mean_a);
        var_b += w * (y - mean_b) * (y - mean_b);
    }
    if var_a <= 0.0 || var_b <= 0.0 {
        0.0
    } else {
        cov / (var_a * var_b).sqrt()
    }
}
