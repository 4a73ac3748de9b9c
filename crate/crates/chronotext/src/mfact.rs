//! Joint factor analysis of word frequencies and chronology.
//!
//! The lexical table's word columns and a numeric year column enter a
//! single weighted principal component analysis as two column groups.
//! Rows keep the lexical table's masses `r_i`. The word group is
//! standardized exactly as correspondence analysis standardizes it
//! (`x_ij = p_ij/(r_i c_j) − 1` under column metric `c_j`), so analyzed
//! alone and unweighted it reproduces the table's CA. The year column
//! is standardized to weighted mean 0 and variance 1 under metric 1.
//! Each group's column metric is then divided by the group's first
//! eigenvalue when analyzed alone, which caps every group's top-axis
//! contribution at 1: the first joint eigenvalue always lies in
//! `[1, G]` for `G` groups and reaches `G` only when the groups' first
//! axes are perfectly correlated.
//!
//! Every row also gets one *partial* position per group — its
//! projection using only that group's columns, dilated by `G` so the
//! plain average of a row's partial points is its global point. The
//! gap between a document's vocabulary viewpoint and its chronology
//! viewpoint is what downstream pioneer detection measures.
//!
//! Axis signs follow the same convention as CA: per axis, the column
//! point of largest absolute coordinate is made positive.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ca::standardized_residuals;
use crate::error::{Error, Result};
use crate::factor::{
    orient_axes, sorted_svd, weighted_mean, weighted_pearson, weighted_variance, NULL_EIGENVALUE,
};
use crate::lextable::LexicalTable;

/// What a column group contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    /// The word-count columns of the lexical table.
    Frequency,
    /// A single numeric per-row variable (the publication year).
    Quantitative,
}

/// One column group fed into [`mfact_with_groups`].
#[derive(Debug, Clone)]
pub enum GroupInput {
    /// The table's word columns in chi-square standardization.
    /// Analyzed alone with `balance: false` this group reproduces the
    /// table's correspondence analysis exactly.
    Frequencies {
        /// Display label for the group.
        label: String,
        /// Divide the group's column metric by its separate first
        /// eigenvalue so its top axis carries inertia 1.
        balance: bool,
    },
    /// One numeric column, standardized to weighted mean 0 and
    /// weighted variance 1 under the row weights.
    Numeric {
        /// Display label for the group (also its column label).
        label: String,
        /// One value per table row.
        values: Vec<f64>,
        /// See [`GroupInput::Frequencies::balance`]; a standardized
        /// single column has separate first eigenvalue exactly 1, so
        /// this has no numeric effect.
        balance: bool,
    },
}

/// A column group as analyzed.
#[derive(Debug, Clone)]
pub struct MfactGroup {
    /// Display label.
    pub label: String,
    /// What the group contains.
    pub kind: GroupKind,
    /// Labels of the columns the group contributed, in table order.
    pub columns: Vec<String>,
    /// First eigenvalue of the group analyzed alone.
    pub separate_first_eigenvalue: f64,
    /// Multiplier applied to the group's column metric (`1/λ₁` when
    /// balanced, 1 otherwise).
    pub weight: f64,
}

/// Results of the joint analysis.
#[derive(Debug, Clone)]
pub struct MfactResult {
    /// Eigenvalues of the retained axes, in decreasing order.
    pub eigenvalues: Vec<f64>,
    /// Sum of the eigenvalues over all axes, retained or not.
    pub total_inertia: f64,
    /// Row identifiers, in table order.
    pub row_ids: Vec<String>,
    /// Row masses `r_i` from the lexical table (sum to 1).
    pub row_weights: Vec<f64>,
    /// Global row coordinates (`rows × axes`).
    pub row_coords: DMatrix<f64>,
    /// Column labels across all groups, in group order.
    pub col_labels: Vec<String>,
    /// Column coordinates (`total columns × axes`). For the word
    /// columns of a lone unbalanced frequency group these are CA's
    /// column coordinates; for a balanced standardized numeric column
    /// the axis-1 value equals the weighted correlation between the
    /// column and the axis.
    pub col_coords: DMatrix<f64>,
    /// Partial row coordinates, one `rows × axes` matrix per group in
    /// [`MfactResult::groups`] order. Partial points are dilated by
    /// the number of groups, so each row's global point is the plain
    /// average of its partial points.
    pub partial_row_coords: Vec<DMatrix<f64>>,
    /// Share of each axis's inertia carried by each group
    /// (`groups × axes`; each column sums to 1).
    pub group_contrib: DMatrix<f64>,
    /// The groups as analyzed, in input order.
    pub groups: Vec<MfactGroup>,
    /// Weighted correlation between the numeric column's raw values
    /// and the axis-1 global row coordinates; present when the
    /// analysis has a numeric group.
    pub axis_year_correlation: Option<f64>,
    /// Non-fatal notes (e.g. the axis count was clamped to the rank).
    pub warnings: Vec<String>,
}

impl MfactResult {
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

    /// Index of the first frequency group (the vocabulary viewpoint).
    pub fn frequency_group(&self) -> Option<usize> {
        self.groups
            .iter()
            .position(|g| g.kind == GroupKind::Frequency)
    }

    /// Index of the numeric group (the chronology viewpoint).
    pub fn numeric_group(&self) -> Option<usize> {
        self.groups
            .iter()
            .position(|g| g.kind == GroupKind::Quantitative)
    }
}

/// Standard two-group analysis: the table's words plus a year column.
///
/// `years` holds one value per table row (documents excluded from the
/// table must be excluded here too). Errors: constant year column,
/// length mismatch, or a table unfit for correspondence analysis.
pub fn mfact(table: &LexicalTable, years: &[f64], n_axes: usize) -> Result<MfactResult> {
    mfact_with_groups(
        table,
        &[
            GroupInput::Frequencies {
                label: "words".into(),
                balance: true,
            },
            GroupInput::Numeric {
                label: "year".into(),
                values: years.to_vec(),
                balance: true,
            },
        ],
        n_axes,
    )
}

/// One column group prepared for the joint decomposition.
struct Block {
    label: String,
    kind: GroupKind,
    col_labels: Vec<String>,
    /// Standardized values (`rows × group columns`).
    x: DMatrix<f64>,
    /// Per-column base metric, before the balancing weight.
    metric: Vec<f64>,
    separate_lambda1: f64,
    weight: f64,
}

/// Joint weighted analysis of explicitly chosen column groups.
///
/// At most one numeric group is supported, and a frequency group may
/// appear more than once (two copies of the word group are the
/// textbook degenerate case whose first eigenvalue reaches the group
/// count exactly).
pub fn mfact_with_groups(
    table: &LexicalTable,
    groups: &[GroupInput],
    n_axes: usize,
) -> Result<MfactResult> {
    if n_axes == 0 {
        return Err(Error::InvalidParameter(
            "the number of axes must be at least 1".into(),
        ));
    }
    if groups.is_empty() {
        return Err(Error::InvalidParameter(
            "at least one column group is required".into(),
        ));
    }
    let numeric_count = groups
        .iter()
        .filter(|g| matches!(g, GroupInput::Numeric { .. }))
        .count();
    if numeric_count > 1 {
        return Err(Error::InvalidParameter(
            "at most one numeric group is supported".into(),
        ));
    }
    if table.n_rows() < 2 || table.n_cols() < 2 {
        return Err(Error::InvalidParameter(format!(
            "the joint analysis needs at least 2 rows and 2 columns, got {}x{}",
            table.n_rows(),
            table.n_cols()
        )));
    }
    table.require_positive_margins()?;

    let rows = table.n_rows();
    let n = table.grand_total as f64;
    let row_weights: Vec<f64> = table.row_margins.iter().map(|&m| m as f64 / n).collect();
    let col_weights: Vec<f64> = table.col_margins.iter().map(|&m| m as f64 / n).collect();

    // The frequency group's separate first eigenvalue is the table's
    // first CA eigenvalue; computed once even if the group repeats.
    let mut frequency_lambda1: Option<f64> = None;
    let mut raw_numeric: Option<Vec<f64>> = None;
    let mut blocks = Vec::with_capacity(groups.len());
    for group in groups {
        match group {
            GroupInput::Frequencies { label, balance } => {
                let lambda1 = match frequency_lambda1 {
                    Some(l) => l,
                    None => {
                        let svd =
                            sorted_svd(&standardized_residuals(table, &row_weights, &col_weights))?;
                        let l = svd.singular.first().map(|s| s * s).unwrap_or(0.0);
                        frequency_lambda1 = Some(l);
                        l
                    }
                };
                if *balance && lambda1 <= NULL_EIGENVALUE {
                    return Err(Error::Numerical(
                        "the word columns show no deviation from independence, \
                         so the frequency group cannot be balanced"
                            .into(),
                    ));
                }
                let mut x = DMatrix::from_element(rows, table.n_cols(), -1.0);
                for (i, j, count) in table.iter() {
                    x[(i, j)] = count as f64 / n / (row_weights[i] * col_weights[j]) - 1.0;
                }
                blocks.push(Block {
                    label: label.clone(),
                    kind: GroupKind::Frequency,
                    col_labels: table.col_words.clone(),
                    x,
                    metric: col_weights.clone(),
                    separate_lambda1: lambda1,
                    weight: if *balance { 1.0 / lambda1 } else { 1.0 },
                });
            }
            GroupInput::Numeric {
                label,
                values,
                balance: _,
            } => {
                if values.len() != rows {
                    return Err(Error::InvalidParameter(format!(
                        "the numeric column has {} values but the table has {} rows",
                        values.len(),
                        rows
                    )));
                }
                let standardized = standardize(values, &row_weights)?;
                raw_numeric = Some(values.clone());
                blocks.push(Block {
                    label: label.clone(),
                    kind: GroupKind::Quantitative,
                    col_labels: vec![label.clone()],
                    x: DMatrix::from_vec(rows, 1, standardized),
                    metric: vec![1.0],
                    // A standardized single column has weighted variance
                    // 1 under unit metric, hence separate first
                    // eigenvalue exactly 1: balancing divides by 1.
                    separate_lambda1: 1.0,
                    weight: 1.0,
                });
            }
        }
    }

    // S = D_r^{1/2} X D_m^{1/2} over the juxtaposed columns.
    let total_cols: usize = blocks.iter().map(|b| b.x.ncols()).sum();
    let sqrt_r: Vec<f64> = row_weights.iter().map(|w| w.sqrt()).collect();
    let mut s = DMatrix::zeros(rows, total_cols);
    let mut offset = 0;
    for block in &blocks {
        for j in 0..block.x.ncols() {
            let sqrt_m = (block.metric[j] * block.weight).sqrt();
            for i in 0..rows {
                s[(i, offset + j)] = sqrt_r[i] * block.x[(i, j)] * sqrt_m;
            }
        }
        offset += block.x.ncols();
    }

    let svd = sorted_svd(&s)?;
    let total_inertia: f64 = svd.singular.iter().map(|v| v * v).sum();
    let rank = svd
        .singular
        .iter()
        .take_while(|&&v| v * v > NULL_EIGENVALUE)
        .count();
    if rank == 0 {
        return Err(Error::Numerical(
            "the juxtaposed table has no non-null axes".into(),
        ));
    }
    let mut warnings = Vec::new();
    let axes = if n_axes > rank {
        warnings.push(format!(
            "requested {n_axes} axes but the analysis supports {rank}; keeping {rank}"
        ));
        rank
    } else {
        n_axes
    };
    let eigenvalues: Vec<f64> = svd.singular[..axes].iter().map(|v| v * v).collect();

    // Partial coordinates: each group's projection dilated by the
    // group count, so the global point is their plain average.
    let group_count = blocks.len() as f64;
    let mut partial_row_coords = Vec::with_capacity(blocks.len());
    let mut offset = 0;
    for block in &blocks {
        let ncols = block.x.ncols();
        let mut xw = block.x.clone();
        for j in 0..ncols {
            let sqrt_m = (block.metric[j] * block.weight).sqrt();
            for i in 0..rows {
                xw[(i, j)] *= sqrt_m;
            }
        }
        let v_block = svd.v.view((offset, 0), (ncols, axes));
        partial_row_coords.push(&xw * v_block * group_count);
        offset += ncols;
    }
    let mut row_coords = DMatrix::zeros(rows, axes);
    for partial in &partial_row_coords {
        row_coords += partial;
    }
    row_coords /= group_count;

    // Column coordinates and per-group inertia shares. A column's
    // contribution to axis k is v_jk², so group shares per axis sum
    // to 1 by orthonormality.
    let mut col_coords = DMatrix::zeros(total_cols, axes);
    let mut group_contrib = DMatrix::zeros(blocks.len(), axes);
    let mut col_labels = Vec::with_capacity(total_cols);
    let mut offset = 0;
    for (g, block) in blocks.iter().enumerate() {
        col_labels.extend(block.col_labels.iter().cloned());
        for j in 0..block.x.ncols() {
            let sqrt_m = (block.metric[j] * block.weight).sqrt();
            for k in 0..axes {
                let v = svd.v[(offset + j, k)];
                col_coords[(offset + j, k)] = svd.singular[k] * v / sqrt_m;
                group_contrib[(g, k)] += v * v;
            }
        }
        offset += block.x.ncols();
    }

    {
        let mut linked: Vec<&mut DMatrix<f64>> = vec![&mut row_coords];
        for partial in &mut partial_row_coords {
            linked.push(partial);
        }
        orient_axes(&mut col_coords, &mut linked);
    }

    let axis_year_correlation = raw_numeric.as_ref().map(|values| {
        let axis1: Vec<f64> = (0..rows).map(|i| row_coords[(i, 0)]).collect();
        weighted_pearson(values, &axis1, &row_weights).clamp(-1.0, 1.0)
    });

    let groups_out = blocks
        .into_iter()
        .map(|b| MfactGroup {
            label: b.label,
            kind: b.kind,
            columns: b.col_labels,
            separate_first_eigenvalue: b.separate_lambda1,
            weight: b.weight,
        })
        .collect();

    Ok(MfactResult {
        eigenvalues,
        total_inertia,
        row_ids: table.row_ids.clone(),
        row_weights,
        row_coords,
        col_labels,
        col_coords,
        partial_row_coords,
        group_contrib,
        groups: groups_out,
        axis_year_correlation,
        warnings,
    })
}

/// Standardizes `values` to weighted mean 0 and weighted variance 1.
fn standardize(values: &[f64], weights: &[f64]) -> Result<Vec<f64>> {
    // Constancy must be checked exactly: the weighted variance of a
    // constant column computes to a tiny positive value (rounding in
    // the mean), which would otherwise standardize pure noise.
    if values.windows(2).all(|pair| pair[0] == pair[1]) {
        return Err(Error::ConstantYear);
    }
    let mean = weighted_mean(values, weights);
    let variance = weighted_variance(values, weights);
    if variance <= 0.0 {
        return Err(Error::ConstantYear);
    }
    let sd = variance.sqrt();
    Ok(values.iter().map(|v| (v - mean) / sd).collect())
}

// ---------- illustrative projections ----------

/// Which coordinates a projection reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Viewpoint {
    /// Global row coordinates.
    Global,
    /// Partial row coordinates of one group, by index into
    /// [`MfactResult::groups`].
    Partial(usize),
}

/// One category placed at its members' weighted centroid.
#[derive(Debug, Clone)]
pub struct ProjectedCategory {
    /// Category label.
    pub label: String,
    /// Centroid coordinates, one per retained axis.
    pub coords: Vec<f64>,
    /// Number of member rows.
    pub members: usize,
    /// Total row weight of the members.
    pub weight: f64,
}

/// An illustrative categorical variable projected onto the axes.
#[derive(Debug, Clone)]
pub struct CategoryProjection {
    /// Name of the variable (e.g. "year", "journal", "period").
    pub variable: String,
    /// Coordinates the centroids were computed from.
    pub viewpoint: Viewpoint,
    /// Categories sorted by label.
    pub categories: Vec<ProjectedCategory>,
}

/// Places each category of an illustrative variable at the
/// row-weighted centroid of its member rows.
///
/// `labels` holds one category label per table row. Categories are
/// whatever labels occur, sorted; every category therefore has at
/// least one member.
pub fn project_categories(
    result: &MfactResult,
    variable: &str,
    labels: &[String],
    viewpoint: Viewpoint,
) -> Result<CategoryProjection> {
    if labels.len() != result.row_ids.len() {
        return Err(Error::InvalidParameter(format!(
            "{} category labels for {} rows",
            labels.len(),
            result.row_ids.len()
        )));
    }
    let coords = match viewpoint {
        Viewpoint::Global => &result.row_coords,
        Viewpoint::Partial(g) => result.partial_row_coords.get(g).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "group index {g} is out of range for {} groups",
                result.groups.len()
            ))
        })?,
    };
    let axes = coords.ncols();
    let mut accumulator: BTreeMap<&str, (Vec<f64>, f64, usize)> = BTreeMap::new();
    for (i, label) in labels.iter().enumerate() {
        let entry = accumulator
            .entry(label.as_str())
            .or_insert_with(|| (vec![0.0; axes], 0.0, 0));
        let w = result.row_weights[i];
        for k in 0..axes {
            entry.0[k] += w * coords[(i, k)];
        }
        entry.1 += w;
        entry.2 += 1;
    }
    let categories = accumulator
        .into_iter()
        .map(|(label, (mut sums, weight, members))| {
            for v in &mut sums {
                *v /= weight;
            }
            ProjectedCategory {
                label: label.to_string(),
                coords: sums,
                members,
                weight,
            }
        })
        .collect();
    Ok(CategoryProjection {
        variable: variable.to_string(),
        viewpoint,
        categories,
    })
}

// ---------- year trajectory ----------

/// One year's centroid along the vocabulary viewpoint.
#[derive(Debug, Clone)]
pub struct TrajectoryPoint {
    /// Calendar year.
    pub year: i32,
    /// Vocabulary-viewpoint centroid, one value per axis.
    pub coords: Vec<f64>,
    /// Number of member rows.
    pub members: usize,
    /// Total row weight of the members.
    pub weight: f64,
}

/// Axis-1 jump between two consecutive observed years.
#[derive(Debug, Clone)]
pub struct TrajectoryGap {
    /// Earlier year.
    pub from_year: i32,
    /// Later year (the next one observed, not necessarily adjacent).
    pub to_year: i32,
    /// Signed axis-1 coordinate difference, later minus earlier.
    pub delta: f64,
}

/// Per-year centroids under the vocabulary viewpoint, in year order.
#[derive(Debug, Clone)]
pub struct YearTrajectory {
    /// One point per year observed in the data.
    pub points: Vec<TrajectoryPoint>,
    /// Axis-1 differences between consecutive observed years
    /// (`points.len() − 1` entries).
    pub gaps: Vec<TrajectoryGap>,
}

/// Traces the vocabulary's march through time: each observed year's
/// rows are averaged (row-weighted) under the vocabulary viewpoint.
/// Years absent from `years` simply do not appear.
pub fn year_trajectory(result: &MfactResult, years: &[i32]) -> Result<YearTrajectory> {
    if years.len() != result.row_ids.len() {
        return Err(Error::InvalidParameter(format!(
            "{} years for {} rows",
            years.len(),
            result.row_ids.len()
        )));
    }
    let group = result.frequency_group().ok_or_else(|| {
        Error::InvalidParameter(
            "the analysis has no frequency group to take the vocabulary viewpoint from".into(),
        )
    })?;
    let coords = &result.partial_row_coords[group];
    let axes = coords.ncols();
    let mut accumulator: BTreeMap<i32, (Vec<f64>, f64, usize)> = BTreeMap::new();
    for (i, &year) in years.iter().enumerate() {
        let entry = accumulator
            .entry(year)
            .or_insert_with(|| (vec![0.0; axes], 0.0, 0));
        let w = result.row_weights[i];
        for k in 0..axes {
            entry.0[k] += w * coords[(i, k)];
        }
        entry.1 += w;
        entry.2 += 1;
    }
    let points: Vec<TrajectoryPoint> = accumulator
        .into_iter()
        .map(|(year, (mut sums, weight, members))| {
            for v in &mut sums {
                *v /= weight;
            }
            TrajectoryPoint {
                year,
                coords: sums,
                members,
                weight,
            }
        })
        .collect();
    let gaps = points
        .windows(2)
        .map(|pair| TrajectoryGap {
            from_year: pair[0].year,
            to_year: pair[1].year,
            delta: pair[1].coords[0] - pair[0].coords[0],
        })
        .collect();
    Ok(YearTrajectory { points, gaps })
}

// ---------- permutation test ----------

/// Outcome of the first-eigenvalue permutation test.
#[derive(Debug, Clone)]
pub struct PermutationTestResult {
    /// First eigenvalue of the real analysis.
    pub observed_lambda1: f64,
    /// Number of permutations drawn.
    pub replications: usize,
    /// First eigenvalue under each permutation, in replication order.
    pub null_values: Vec<f64>,
    /// `(1 + #{null ≥ observed}) / (replications + 1)`; never 0, so a
    /// maximally significant result reads `1/(B+1)`.
    pub p_value: f64,
    /// Seed the permutations were derived from.
    pub seed: u64,
}

/// Tests whether chronology and vocabulary are linked: the year column
/// is randomly permuted over rows `replications` times and the first
/// joint eigenvalue recomputed each time, giving an empirical null
/// distribution for `λ₁`.
///
/// Each replication derives its permutation from `(seed, replication
/// index)`, so results do not depend on how replications are scheduled
/// across threads. At least 99 replications are required.
pub fn permutation_test(
    table: &LexicalTable,
    years: &[f64],
    replications: usize,
    seed: u64,
) -> Result<PermutationTestResult> {
    if replications < 99 {
        return Err(Error::InvalidParameter(format!(
            "at least 99 replications are required, got {replications}"
        )));
    }
    let observed = mfact(table, years, 1)?;
    let observed_lambda1 = observed.eigenvalues[0];

    let fixture = NullFixture::new(table)?;
    let null_values = (0..replications)
        .into_par_iter()
        .map(|replication| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(replication as u64 + 1);
            let mut order: Vec<usize> = (0..years.len()).collect();
            order.shuffle(&mut rng);
            let permuted: Vec<f64> = order.iter().map(|&i| years[i]).collect();
            fixture.lambda1(&permuted)
        })
        .collect::<Result<Vec<f64>>>()?;

    let exceed = null_values
        .iter()
        .filter(|&&v| v >= observed_lambda1)
        .count();
    let p_value = (1 + exceed) as f64 / (replications + 1) as f64;
    Ok(PermutationTestResult {
        observed_lambda1,
        replications,
        null_values,
        p_value,
        seed,
    })
}

/// Fixed part of the permutation null. Permuting years never touches
/// the balanced word block, so its row-side Gram matrix `S_w S_wᵀ` is
/// eigendecomposed once; each replication then only applies a rank-one
/// update for its own standardized year column.
struct NullFixture {
    row_weights: Vec<f64>,
    sqrt_r: Vec<f64>,
    /// Eigenvalues of the fixed word-block Gram matrix.
    base_eigenvalues: Vec<f64>,
    /// Matching orthonormal eigenvectors, one per column.
    base_vectors: DMatrix<f64>,
}

impl NullFixture {
    fn new(table: &LexicalTable) -> Result<Self> {
        let n = table.grand_total as f64;
        let row_weights: Vec<f64> = table.row_margins.iter().map(|&m| m as f64 / n).collect();
        let col_weights: Vec<f64> = table.col_margins.iter().map(|&m| m as f64 / n).collect();
        let residuals = standardized_residuals(table, &row_weights, &col_weights);
        let svd = sorted_svd(&residuals)?;
        let lambda1 = svd.singular.first().map(|s| s * s).unwrap_or(0.0);
        if lambda1 <= NULL_EIGENVALUE {
            return Err(Error::Numerical(
                "the word columns show no deviation from independence, \
                 so the frequency group cannot be balanced"
                    .into(),
            ));
        }
        // The balanced word block is the standardized residual matrix
        // scaled by 1/sqrt(λ₁): its entries are sqrt(r_i) x_ij
        // sqrt(c_j/λ₁) = s_ij/sqrt(λ₁).
        let s_w = residuals / lambda1.sqrt();
        let gram = &s_w * s_w.transpose();
        let eigen = nalgebra::SymmetricEigen::try_new(gram, f64::EPSILON, 0)
            .ok_or_else(|| Error::Numerical("eigendecomposition did not converge".into()))?;
        let sqrt_r = row_weights.iter().map(|w| w.sqrt()).collect();
        Ok(NullFixture {
            row_weights,
            sqrt_r,
            base_eigenvalues: eigen.eigenvalues.iter().copied().collect(),
            base_vectors: eigen.eigenvectors,
        })
    }

    /// First joint eigenvalue of the two-group analysis with the given
    /// year values.
    fn lambda1(&self, years: &[f64]) -> Result<f64> {
        let standardized = standardize(years, &self.row_weights)?;
        let rows = standardized.len();
        let s_year: Vec<f64> = (0..rows)
            .map(|i| self.sqrt_r[i] * standardized[i])
            .collect();
        // In the eigenbasis of the word Gram matrix the joint row-side
        // Gram matrix is diag(base) + z zᵀ.
        let z: Vec<f64> = (0..rows)
            .map(|c| {
                (0..rows)
                    .map(|i| self.base_vectors[(i, c)] * s_year[i])
                    .sum()
            })
            .collect();
        Ok(top_eigenvalue_after_rank_one_update(
            &self.base_eigenvalues,
            &z,
        ))
    }
}

/// Largest eigenvalue of `diag(base) + z zᵀ`.
///
/// Over components with nonzero `z`, the updated eigenvalues are the
/// roots of the secular function `f(t) = 1 + Σᵢ zᵢ²/(baseᵢ − t)`,
/// which increases from −∞ to 1 on `(max base, ∞)`; the largest root
/// lies within `‖z‖²` above that maximum. Components with zero `z`
/// keep their eigenvalue, so the answer is the larger of the secular
/// root and the plain maximum.
fn top_eigenvalue_after_rank_one_update(base: &[f64], z: &[f64]) -> f64 {
    let overall_max = base.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let active: Vec<(f64, f64)> = base
        .iter()
        .zip(z)
        .filter(|&(_, &zi)| zi != 0.0)
        .map(|(&l, &zi)| (l, zi * zi))
        .collect();
    if active.is_empty() {
        return overall_max;
    }
    let active_max = active
        .iter()
        .map(|&(l, _)| l)
        .fold(f64::NEG_INFINITY, f64::max);
    let norm2: f64 = active.iter().map(|&(_, w)| w).sum();
    let secular = |t: f64| -> f64 { 1.0 + active.iter().map(|&(l, w)| w / (l - t)).sum::<f64>() };
    let mut lo = active_max;
    let mut hi = active_max + norm2;
    // f(lo⁺) → −∞ and f(hi) ≥ 0, so plain bisection is robust; it runs
    // to f64 resolution and stops when the midpoint can no longer move.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if secular(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi)).max(overall_max)
}
