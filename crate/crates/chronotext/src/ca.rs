//! Correspondence analysis of a lexical table under the chi-square
//! metric.
//!
//! Writing `n` for the grand total, `p_ij = n_ij / n`, `r_i` for row
//! masses and `c_j` for column masses, the analysis is the singular
//! value decomposition of the standardized residuals
//! `s_ij = (p_ij − r_i c_j) / sqrt(r_i c_j)`. Squared singular values
//! are the eigenvalues (axis inertias); their sum is the total inertia
//! `χ²/n`. Row principal coordinates are `F = D_r^{-1/2} U Σ` and
//! column principal coordinates `G = D_c^{-1/2} V Σ`, so weighted mean
//! coordinates are zero on every axis and `Σ_i r_i F_ik² = λ_k`.
//!
//! Axis signs are deterministic: each axis is oriented so that its
//! largest-|coordinate| column point is positive.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::factor::{orient_axes, sorted_svd, NULL_EIGENVALUE};
use crate::lextable::LexicalTable;

/// Results of a correspondence analysis.
#[derive(Debug, Clone)]
pub struct CaResult {
    /// Eigenvalues of the retained axes, in decreasing order.
    pub eigenvalues: Vec<f64>,
    /// Sum of the eigenvalues over *all* axes (`χ²/n`), not just the
    /// retained ones.
    pub total_inertia: f64,
    /// Row identifiers, in table order.
    pub row_ids: Vec<String>,
    /// Column words, in table order.
    pub col_words: Vec<String>,
    /// Row masses `r_i` (sum to 1).
    pub row_weights: Vec<f64>,
    /// Column masses `c_j` (sum to 1).
    pub col_weights: Vec<f64>,
    /// Row principal coordinates (`rows × axes`).
    pub row_coords: DMatrix<f64>,
    /// Column principal coordinates (`cols × axes`).
    pub col_coords: DMatrix<f64>,
    /// Row contributions to each axis's inertia (each column sums to 1).
    pub row_contrib: DMatrix<f64>,
    /// Column contributions to each axis's inertia.
    pub col_contrib: DMatrix<f64>,
    /// Squared cosines of rows on each axis (quality of representation).
    pub row_cos2: DMatrix<f64>,
    /// Squared cosines of columns on each axis.
    pub col_cos2: DMatrix<f64>,
    /// Non-fatal notes (e.g. the axis count was clamped to the rank).
    pub warnings: Vec<String>,
}

impl CaResult {
    /// Number of retained axes.
    pub fn n_axes(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Percentage of total inertia carried by one retained axis.
    pub fn percent_inertia(&self, axis: usize) -> f64 {
        if self.total_inertia <= 0.0 {
            0.0
        } else {
            100.0 * self.eigenvalues[axis] / self.total_inertia
        }
    }
}

/// The chi-square statistic of independence for a contingency table.
pub fn chi_square_statistic(table: &LexicalTable) -> Result<f64> {
    table.require_positive_margins()?;
    let n = table.grand_total as f64;
    let mut chi2 = 0.0;
    for i in 0..table.n_rows() {
        for j in 0..table.n_cols() {
            let expected = table.row_margins[i] as f64 * table.col_margins[j] as f64 / n;
            let diff = table.get(i, j) as f64 - expected;
            chi2 += diff * diff / expected;
        }
    }
    Ok(chi2)
}

/// Runs a correspondence analysis, retaining at most `n_axes` axes.
///
/// Eigenvalues at or below `1e-12` count as null and are never
/// retained; when `n_axes` exceeds the table's rank it is clamped and
/// a warning is recorded. The table needs at least two rows, two
/// columns, and positive margins everywhere — build it through
/// [`crate::lextable::build_lexical_table`] and those properties hold
/// by construction.
pub fn correspondence_analysis(table: &LexicalTable, n_axes: usize) -> Result<CaResult> {
    if n_axes == 0 {
        return Err(Error::InvalidParameter(
            "the number of axes must be at least 1".into(),
        ));
    }
    if table.n_rows() < 2 || table.n_cols() < 2 {
        return Err(Error::InvalidParameter(format!(
            "correspondence analysis needs at least 2 rows and 2 columns, got {}x{}",
            table.n_rows(),
            table.n_cols()
        )));
    }
    table.require_positive_margins()?;

    let n = table.grand_total as f64;
    let row_weights: Vec<f64> = table.row_margins.iter().map(|&m| m as f64 / n).collect();
    let col_weights: Vec<f64> = table.col_margins.iter().map(|&m| m as f64 / n).collect();

    let residuals = standardized_residuals(table, &row_weights, &col_weights);
    let svd = sorted_svd(&residuals)?;
    let total_inertia: f64 = svd.singular.iter().map(|s| s * s).sum();
    let rank = svd
        .singular
        .iter()
        .take_while(|&&s| s * s > NULL_EIGENVALUE)
        .count();

    let mut warnings = Vec::new();
    let retained = n_axes.min(rank);
    if retained < n_axes {
        warnings.push(format!(
            "requested {n_axes} axes but the table supports {rank}; keeping {retained}"
        ));
    }

    let eigenvalues: Vec<f64> = svd.singular[..retained].iter().map(|s| s * s).collect();
    let mut row_coords = DMatrix::zeros(table.n_rows(), retained);
    let mut col_coords = DMatrix::zeros(table.n_cols(), retained);
    for k in 0..retained {
        let sigma = svd.singular[k];
        for i in 0..table.n_rows() {
            row_coords[(i, k)] = svd.u[(i, k)] * sigma / row_weights[i].sqrt();
        }
        for j in 0..table.n_cols() {
            col_coords[(j, k)] = svd.v[(j, k)] * sigma / col_weights[j].sqrt();
        }
    }
    orient_axes(&mut col_coords, &mut [&mut row_coords]);

    let row_contrib = contributions(&row_coords, &row_weights, &eigenvalues);
    let col_contrib = contributions(&col_coords, &col_weights, &eigenvalues);
    let row_cos2 = squared_cosines(
        &row_coords,
        &row_distances(table, &row_weights, &col_weights),
    );
    let col_cos2 = squared_cosines(
        &col_coords,
        &col_distances(table, &row_weights, &col_weights),
    );

    Ok(CaResult {
        eigenvalues,
        total_inertia,
        row_ids: table.row_ids.clone(),
        col_words: table.col_words.clone(),
        row_weights,
        col_weights,
        row_coords,
        col_coords,
        row_contrib,
        col_contrib,
        row_cos2,
        col_cos2,
        warnings,
    })
}

/// The standardized-residual matrix `s_ij = (p_ij − r_i c_j)/sqrt(r_i c_j)`.
pub(crate) fn standardized_residuals(
    table: &LexicalTable,
    row_weights: &[f64],
    col_weights: &[f64],
) -> DMatrix<f64> {
    let n = table.grand_total as f64;
    let mut s = DMatrix::zeros(table.n_rows(), table.n_cols());
    for i in 0..table.n_rows() {
        for j in 0..table.n_cols() {
            let p = table.get(i, j) as f64 / n;
            let expected = row_weights[i] * col_weights[j];
            s[(i, j)] = (p - expected) / expected.sqrt();
        }
    }
    s
}

fn contributions(coords: &DMatrix<f64>, weights: &[f64], eigenvalues: &[f64]) -> DMatrix<f64> {
    let mut contrib = DMatrix::zeros(coords.nrows(), coords.ncols());
    for k in 0..coords.ncols() {
        for i in 0..coords.nrows() {
            contrib[(i, k)] = weights[i] * coords[(i, k)] * coords[(i, k)] / eigenvalues[k];
        }
    }
    contrib
}

/// Squared chi-square distance of each row profile to the centroid.
fn row_distances(table: &LexicalTable, row_weights: &[f64], col_weights: &[f64]) -> Vec<f64> {
    let n = table.grand_total as f64;
    (0..table.n_rows())
        .map(|i| {
            (0..table.n_cols())
                .map(|j| {
                    let profile = table.get(i, j) as f64 / n / row_weights[i];
                    let diff = profile - col_weights[j];
                    diff * diff / col_weights[j]
                })
                .sum()
        })
        .collect()
}

/// Squared chi-square distance of each column profile to the centroid.
fn col_distances(table: &LexicalTable, row_weights: &[f64], col_weights: &[f64]) -> Vec<f64> {
    let n = table.grand_total as f64;
    (0..table.n_cols())
        .map(|j| {
            (0..table.n_rows())
                .map(|i| {
                    let profile = table.get(i, j) as f64 / n / col_weights[j];
                    let diff = profile - row_weights[i];
                    diff * diff / row_weights[i]
                })
                .sum()
        })
        .collect()
}

fn squared_cosines(coords: &DMatrix<f64>, squared_distances: &[f64]) -> DMatrix<f64> {
    let mut cos2 = DMatrix::zeros(coords.nrows(), coords.ncols());
    for i in 0..coords.nrows() {
        let d2 = squared_distances[i];
        for k in 0..coords.ncols() {
            cos2[(i, k)] = if d2 > 0.0 {
                coords[(i, k)] * coords[(i, k)] / d2
            } else {
                0.0
            };
        }
    }
    cos2
}

// ---------- meta-keys and meta-documents ----------

/// Which side of the table to extract meta sets from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointSet {
    /// Documents (meta-documents).
    Rows,
    /// Words (meta-keys).
    Columns,
}

/// Rule deciding which contributions are "high" enough for a meta set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetaThreshold {
    /// Contribution strictly above `multiplier / n_points`, i.e. a
    /// multiple of the average contribution. The default is 1.0.
    AverageMultiple(f64),
    /// Contribution strictly above an absolute value.
    Absolute(f64),
}

impl Default for MetaThreshold {
    fn default() -> Self {
        MetaThreshold::AverageMultiple(1.0)
    }
}

/// One high-contribution point of a meta set.
#[derive(Debug, Clone, PartialEq)]
pub struct MetaMember {
    /// Row id or column word.
    pub label: String,
    /// Contribution to the axis inertia.
    pub contribution: f64,
    /// Principal coordinate on the axis.
    pub coordinate: f64,
}

/// The high-contribution points on one side of one axis.
#[derive(Debug, Clone, PartialEq)]
pub struct MetaSet {
    /// Retained-axis index (0-based).
    pub axis: usize,
    /// Whether this is the positive-coordinate set.
    pub positive: bool,
    /// Members sorted by decreasing contribution (ties by label).
    pub members: Vec<MetaMember>,
}

/// Extracts the positive- and negative-side meta sets of one axis:
/// the points whose contribution strictly exceeds the threshold,
/// split by coordinate sign.
///
/// Under the default rule (contribution above the average) a table
/// where all points contribute equally yields two empty sets.
pub fn extract_meta(
    result: &CaResult,
    axis: usize,
    side: PointSet,
    threshold: MetaThreshold,
) -> Result<(MetaSet, MetaSet)> {
    if axis >= result.n_axes() {
        return Err(Error::InvalidParameter(format!(
            "axis {axis} out of range: {} axes retained",
            result.n_axes()
        )));
    }
    let (labels, coords, contrib) = match side {
        PointSet::Rows => (&result.row_ids, &result.row_coords, &result.row_contrib),
        PointSet::Columns => (&result.col_words, &result.col_coords, &result.col_contrib),
    };
    let cutoff = match threshold {
        MetaThreshold::AverageMultiple(multiplier) => {
            if multiplier < 0.0 {
                return Err(Error::InvalidParameter(
                    "meta threshold multiplier must be nonnegative".into(),
                ));
            }
            multiplier / labels.len() as f64
        }
        MetaThreshold::Absolute(value) => {
            if value < 0.0 {
                return Err(Error::InvalidParameter(
                    "meta threshold must be nonnegative".into(),
                ));
            }
            value
        }
    };

    let mut positive = Vec::new();
    let mut negative = Vec::new();
    for (i, label) in labels.iter().enumerate() {
        let coordinate = coords[(i, axis)];
        let contribution = contrib[(i, axis)];
        // The slack keeps points whose contribution equals the cutoff in
        // exact arithmetic (e.g. perfectly balanced tables) from drifting
        // across it by a rounding error.
        if contribution > cutoff + 1e-12 && coordinate != 0.0 {
            let member = MetaMember {
                label: label.clone(),
                contribution,
                coordinate,
            };
            if coordinate > 0.0 {
                positive.push(member);
            } else {
                negative.push(member);
            }
        }
    }
    let by_contribution = |a: &MetaMember, b: &MetaMember| {
        b.contribution
            .total_cmp(&a.contribution)
            .then_with(|| a.label.cmp(&b.label))
    };
    positive.sort_by(by_contribution);
    negative.sort_by(by_contribution);
    Ok((
        MetaSet {
            axis,
            positive: true,
            members: positive,
        },
        MetaSet {
            axis,
            positive: false,
            members: negative,
        },
    ))
}
