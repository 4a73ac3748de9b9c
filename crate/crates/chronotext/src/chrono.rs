//! Time-oriented lexical statistics: exact tail tests for word counts,
//! period characterization, trajectory-based period segmentation, and
//! detection of documents whose vocabulary runs ahead of their date.
//!
//! All tests are exact draw-without-replacement tail probabilities,
//! evaluated in log space so corpus-scale counts stay finite. Nothing
//! here uses a normal approximation.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::factor::weighted_variance;
use crate::lextable::{AggregatedTable, LexicalTable, Partition};
use crate::mfact::{MfactResult, YearTrajectory};

// ---------- exact count-tail probabilities ----------

/// Table of `ln k!` values shared across many tail queries.
///
/// Entries are accumulated with Kahan compensation so the running sum
/// keeps full double precision even for very large tables.
#[derive(Debug, Clone)]
struct LogFactorial {
    values: Vec<f64>,
}

impl LogFactorial {
    /// Builds the table for `0..=max`.
    fn new(max: u64) -> Self {
        let mut values = Vec::with_capacity(max as usize + 1);
        values.push(0.0);
        let mut sum = 0.0_f64;
        let mut compensation = 0.0_f64;
        for k in 1..=max {
            let term = (k as f64).ln() - compensation;
            let next = sum + term;
            compensation = (next - sum) - term;
            sum = next;
            values.push(sum);
        }
        LogFactorial { values }
    }

    /// `ln C(n, k)`; requires `k <= n <= max`.
    fn ln_choose(&self, n: u64, k: u64) -> f64 {
        debug_assert!(k <= n);
        self.values[n as usize] - self.values[k as usize] - self.values[(n - k) as usize]
    }
}

/// Which tail of the count distribution a query asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailDirection {
    /// Probability of a count at least as large as the observed one.
    Over,
    /// Probability of a count at most as large as the observed one.
    Under,
}

impl std::fmt::Display for TailDirection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TailDirection::Over => "over",
            TailDirection::Under => "under",
        })
    }
}

/// One draw-without-replacement tail query: a part of `part_total`
/// tokens, sampled from a corpus of `grand_total` tokens containing
/// `word_total` occurrences of one word, held `observed` of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HypergeomQuery {
    /// Token occurrences in the whole corpus.
    pub grand_total: u64,
    /// Token occurrences in the part under study.
    pub part_total: u64,
    /// Occurrences of the word in the whole corpus.
    pub word_total: u64,
    /// Occurrences of the word inside the part.
    pub observed: u64,
    /// Tail to accumulate.
    pub direction: TailDirection,
}

impl HypergeomQuery {
    /// Range of counts the margins permit: `max(0, word + part − grand)`
    /// through `min(word, part)`.
    fn support(&self) -> (u64, u64) {
        let lo = (self.word_total + self.part_total).saturating_sub(self.grand_total);
        let hi = self.word_total.min(self.part_total);
        (lo, hi)
    }

    fn validate(&self) -> Result<()> {
        if self.word_total > self.grand_total {
            return Err(Error::InvalidQuery(format!(
                "word total {} exceeds grand total {}",
                self.word_total, self.grand_total
            )));
        }
        if self.part_total > self.grand_total {
            return Err(Error::InvalidQuery(format!(
                "part total {} exceeds grand total {}",
                self.part_total, self.grand_total
            )));
        }
        let (lo, hi) = self.support();
        if self.observed > hi || self.observed < lo {
            return Err(Error::InvalidQuery(format!(
                "observed count {} outside the feasible range {}..={} for word total {}, \
                 part total {}, grand total {}",
                self.observed, lo, hi, self.word_total, self.part_total, self.grand_total
            )));
        }
        Ok(())
    }
}

/// `ln h(x)` for the count distribution behind `query`.
fn ln_mass(query: &HypergeomQuery, lf: &LogFactorial, x: u64) -> f64 {
    lf.ln_choose(query.word_total, x)
        + lf.ln_choose(query.grand_total - query.word_total, query.part_total - x)
        - lf.ln_choose(query.grand_total, query.part_total)
}

/// Tail sum for a validated query, using a shared log-factorial table.
fn tail_probability(query: &HypergeomQuery, lf: &LogFactorial) -> f64 {
    let (lo, hi) = query.support();
    let (from, to) = match query.direction {
        TailDirection::Over => (query.observed.max(lo), hi),
        TailDirection::Under => (lo, query.observed.min(hi)),
    };
    // The whole support is a certainty; skip the arithmetic so the
    // result is exactly 1.
    if from == lo && to == hi {
        return 1.0;
    }
    let mut max_term = f64::NEG_INFINITY;
    let mut terms = Vec::with_capacity((to - from + 1) as usize);
    for x in from..=to {
        let term = ln_mass(query, lf, x);
        if term > max_term {
            max_term = term;
        }
        terms.push(term);
    }
    // log-sum-exp with Kahan compensation on the rescaled terms.
    let mut sum = 0.0_f64;
    let mut compensation = 0.0_f64;
    for term in terms {
        let value = (term - max_term).exp() - compensation;
        let next = sum + value;
        compensation = (next - sum) - value;
        sum = next;
    }
    (max_term + sum.ln()).exp().min(1.0)
}

/// Exact tail probability of a count query.
///
/// The result is always in `(0, 1]`: the observed count itself belongs
/// to the accumulated tail. Sums run in log space, so queries remain
/// well-behaved for corpus-scale totals; accuracy is limited only by
/// accumulated rounding (relative error around 1e-13 for totals in the
/// hundreds, degrading gently for very large corpora).
///
/// Errors when the counts are jointly infeasible (word or part larger
/// than the corpus, or an observed count outside the range the margins
/// permit).
pub fn hypergeometric_p(query: &HypergeomQuery) -> Result<f64> {
    query.validate()?;
    let lf = LogFactorial::new(query.grand_total);
    Ok(tail_probability(query, &lf))
}

// ---------- multiple-testing adjustment ----------

/// Optional correction applied across one test family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Adjustment {
    /// Keep raw p-values.
    #[default]
    None,
    /// Benjamini–Hochberg step-up adjustment (false-discovery rate).
    BenjaminiHochberg,
}

/// Benjamini–Hochberg adjusted p-values, in input order.
///
/// Each value is `min over j ≥ rank of p_(j) · m / j`, clamped to 1,
/// where `p_(j)` is the j-th smallest input. Adjusted values are
/// monotone in the raw ones, so thresholding them at `alpha` is the
/// usual step-up procedure.
pub fn benjamini_hochberg(p_values: &[f64]) -> Vec<f64> {
    let m = p_values.len();
    if m == 0 {
        return Vec::new();
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p_values[a].total_cmp(&p_values[b]));
    let mut adjusted = vec![0.0; m];
    let mut running = 1.0_f64;
    for rank in (0..m).rev() {
        let index = order[rank];
        let value = (p_values[index] * m as f64 / (rank + 1) as f64)
            .min(running)
            .min(1.0);
        running = value;
        adjusted[index] = value;
    }
    adjusted
}

fn apply_adjustment(p_values: &mut [f64], adjustment: Adjustment) {
    if adjustment == Adjustment::BenjaminiHochberg {
        let adjusted = benjamini_hochberg(p_values);
        p_values.copy_from_slice(&adjusted);
    }
}

// ---------- characteristic words ----------

/// A word flagged as significantly over- or under-used in one part.
#[derive(Debug, Clone)]
pub struct CharacteristicWordRecord {
    /// The word tested.
    pub word: String,
    /// Label of the part (aggregated row) it characterizes.
    pub part: String,
    /// Occurrences of the word inside the part.
    pub observed: u64,
    /// Count expected under proportional spread:
    /// `word_total · part_total / grand_total`.
    pub expected: f64,
    /// Tail probability (adjusted when an adjustment was requested).
    pub p_value: f64,
    /// Over- or under-representation; `Over` exactly when the part's
    /// rate strictly exceeds the corpus rate.
    pub direction: TailDirection,
}

/// Words significantly over- or under-represented in each part.
///
/// Every (word, part) pair is tested: the direction is `Over` when
/// `observed / part_total > word_total / grand_total` (compared with
/// integer cross-products, so the boundary is exact) and `Under`
/// otherwise. Records with `p ≤ alpha` are returned, grouped by part
/// in row order and sorted by ascending p-value (ties: word order)
/// within the part.
pub fn characteristic_words(
    agg: &AggregatedTable,
    alpha: f64,
) -> Result<Vec<CharacteristicWordRecord>> {
    characteristic_words_with(agg, alpha, Adjustment::None)
}

/// [`characteristic_words`] with an optional multiple-testing
/// adjustment applied across all (word, part) pairs before filtering.
pub fn characteristic_words_with(
    agg: &AggregatedTable,
    alpha: f64,
    adjustment: Adjustment,
) -> Result<Vec<CharacteristicWordRecord>> {
    let table = &agg.table;
    let lf = LogFactorial::new(table.grand_total);
    let mut keyed: Vec<(usize, usize, CharacteristicWordRecord)> = Vec::new();
    for part in 0..table.n_rows() {
        let part_total = table.row_margins[part];
        for word in 0..table.n_cols() {
            let word_total = table.col_margins[word];
            let observed = table.get(part, word);
            let direction = if (observed as u128) * (table.grand_total as u128)
                > (word_total as u128) * (part_total as u128)
            {
                TailDirection::Over
            } else {
                TailDirection::Under
            };
            let query = HypergeomQuery {
                grand_total: table.grand_total,
                part_total,
                word_total,
                observed,
                direction,
            };
            query.validate()?;
            let p_value = tail_probability(&query, &lf);
            keyed.push((
                part,
                word,
                CharacteristicWordRecord {
                    word: table.col_words[word].clone(),
                    part: table.row_ids[part].clone(),
                    observed,
                    expected: word_total as f64 * part_total as f64 / table.grand_total as f64,
                    p_value,
                    direction,
                },
            ));
        }
    }
    let mut p_values: Vec<f64> = keyed.iter().map(|(_, _, r)| r.p_value).collect();
    apply_adjustment(&mut p_values, adjustment);
    for ((_, _, record), p) in keyed.iter_mut().zip(&p_values) {
        record.p_value = *p;
    }
    keyed.retain(|(_, _, record)| record.p_value <= alpha);
    keyed.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then_with(|| a.2.p_value.total_cmp(&b.2.p_value))
            .then_with(|| a.1.cmp(&b.1))
    });
    Ok(keyed.into_iter().map(|(_, _, record)| record).collect())
}

// ---------- characteristic increments ----------

/// What forms the baseline when a period is tested for growth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IncrementBaseline {
    /// The corpus truncated at the period's end — the period under
    /// study counts toward its own baseline (part versus truncated
    /// whole, always feasible).
    #[default]
    InclusiveCurrent,
    /// Only strictly earlier periods form the population. A word drawn
    /// more often than the past supplies is infeasible under that
    /// null; such certain novelties are reported with the smallest
    /// positive p-value instead of a tail sum.
    PastOnly,
}

/// A word whose usage grows significantly in one period.
#[derive(Debug, Clone)]
pub struct IncrementRecord {
    /// The word tested.
    pub word: String,
    /// Label of the period where the increase shows.
    pub period: String,
    /// Occurrences of the word inside the period.
    pub observed: u64,
    /// Token occurrences in the period.
    pub period_total: u64,
    /// Occurrences of the word in the truncated baseline corpus.
    pub baseline_word_count: u64,
    /// Token occurrences in the truncated baseline corpus.
    pub baseline_total: u64,
    /// Count expected if the period drew proportionally from the
    /// baseline.
    pub expected: f64,
    /// Over-representation tail probability (adjusted when an
    /// adjustment was requested).
    pub p_value: f64,
}

/// Words whose usage significantly increases in some period.
///
/// For each period `t` in chronological order, the period's counts are
/// tested for over-representation against the corpus truncated at the
/// end of `t` (periods `1..=t`). Records with `p ≤ alpha` are
/// returned, grouped by period in order and sorted by ascending
/// p-value within the period.
///
/// Errors when the aggregation is not chronologically ordered.
pub fn characteristic_increments(
    agg: &AggregatedTable,
    alpha: f64,
) -> Result<Vec<IncrementRecord>> {
    characteristic_increments_with(agg, alpha, IncrementBaseline::default(), Adjustment::None)
}

/// [`characteristic_increments`] with a configurable baseline and an
/// optional multiple-testing adjustment across all tested pairs.
///
/// Under [`IncrementBaseline::PastOnly`] the first period has no
/// baseline and is skipped; a word observed more often than the past
/// corpus can supply is certain novelty and gets the smallest positive
/// p-value.
pub fn characteristic_increments_with(
    agg: &AggregatedTable,
    alpha: f64,
    baseline: IncrementBaseline,
    adjustment: Adjustment,
) -> Result<Vec<IncrementRecord>> {
    if !agg.ordered {
        return Err(Error::InvalidParameter(format!(
            "increment tests need a chronologically ordered partition; `{}` is unordered",
            agg.partition_name
        )));
    }
    let table = &agg.table;
    let periods = table.n_rows();
    let words = table.n_cols();
    let lf = LogFactorial::new(table.grand_total);

    // Running totals over periods 1..=t, updated as t advances.
    let mut cumulative_total = 0_u64;
    let mut cumulative_word = vec![0_u64; words];
    let mut keyed: Vec<(usize, usize, IncrementRecord)> = Vec::new();
    for t in 0..periods {
        let period_total = table.row_margins[t];
        let previous_total = cumulative_total;
        cumulative_total += period_total;
        for word in 0..words {
            let observed = table.get(t, word);
            let previous_word = cumulative_word[word];
            cumulative_word[word] += observed;
            let (baseline_word_count, baseline_total) = match baseline {
                IncrementBaseline::InclusiveCurrent => (cumulative_word[word], cumulative_total),
                IncrementBaseline::PastOnly => (previous_word, previous_total),
            };
            if baseline == IncrementBaseline::PastOnly && t == 0 {
                continue;
            }
            let expected = if baseline_total > 0 {
                baseline_word_count as f64 * period_total as f64 / baseline_total as f64
            } else {
                0.0
            };
            let query = HypergeomQuery {
                grand_total: baseline_total,
                part_total: period_total,
                word_total: baseline_word_count,
                observed,
                direction: TailDirection::Over,
            };
            let p_value = if query.validate().is_ok() {
                tail_probability(&query, &lf)
            } else if observed == 0 {
                // Nothing drawn: certainly not an increase.
                1.0
            } else {
                // The past cannot supply the observed count at all;
                // report the strongest possible evidence while keeping
                // the p-value positive.
                f64::MIN_POSITIVE
            };
            keyed.push((
                t,
                word,
                IncrementRecord {
                    word: table.col_words[word].clone(),
                    period: table.row_ids[t].clone(),
                    observed,
                    period_total,
                    baseline_word_count,
                    baseline_total,
                    expected,
                    p_value,
                },
            ));
        }
    }
    let mut p_values: Vec<f64> = keyed.iter().map(|(_, _, r)| r.p_value).collect();
    apply_adjustment(&mut p_values, adjustment);
    for ((_, _, record), p) in keyed.iter_mut().zip(&p_values) {
        record.p_value = *p;
    }
    keyed.retain(|(_, _, record)| record.p_value <= alpha);
    keyed.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then_with(|| a.2.p_value.total_cmp(&b.2.p_value))
            .then_with(|| a.1.cmp(&b.1))
    });
    Ok(keyed.into_iter().map(|(_, _, record)| record).collect())
}

// ---------- chronological characteristic words ----------

/// A word assigned to the consecutive-period span it best
/// characterizes.
#[derive(Debug, Clone)]
pub struct ChronoAssignment {
    /// The word assigned.
    pub word: String,
    /// Label of the first period of the span.
    pub start: String,
    /// Label of the last period of the span.
    pub end: String,
    /// Row index of the first period.
    pub start_index: usize,
    /// Row index of the last period.
    pub end_index: usize,
    /// Span length in periods.
    pub level: usize,
    /// Occurrences of the word inside the span.
    pub observed: u64,
    /// Count expected under proportional spread over the span.
    pub expected: f64,
    /// The span's over-representation tail probability — the minimum
    /// over every candidate span (adjusted when an adjustment was
    /// requested).
    pub p_value: f64,
}

/// Assigns each word to the contiguous run of periods it characterizes
/// best.
///
/// Every span of `1..=P−1` consecutive periods is tested for
/// over-representation of the word against the whole corpus (the full
/// span is excluded: it cannot be over-represented against itself, its
/// tail probability is 1 by construction). A word is assigned to its
/// minimum-p span when that minimum is below `alpha`; ties prefer the
/// shorter span, then the earlier start. Assignments are sorted by
/// span position (start, then end), then ascending p-value, then word
/// order.
///
/// Errors when the aggregation is unordered or has fewer than two
/// periods.
pub fn chronological_characteristic_words(
    agg: &AggregatedTable,
    alpha: f64,
) -> Result<Vec<ChronoAssignment>> {
    chronological_characteristic_words_with(agg, alpha, Adjustment::None)
}

/// [`chronological_characteristic_words`] with an optional
/// multiple-testing adjustment across the per-word minimum p-values.
pub fn chronological_characteristic_words_with(
    agg: &AggregatedTable,
    alpha: f64,
    adjustment: Adjustment,
) -> Result<Vec<ChronoAssignment>> {
    if !agg.ordered {
        return Err(Error::InvalidParameter(format!(
            "chronological assignment needs an ordered partition; `{}` is unordered",
            agg.partition_name
        )));
    }
    let table = &agg.table;
    let periods = table.n_rows();
    if periods < 2 {
        return Err(Error::InvalidParameter(format!(
            "chronological assignment needs at least two periods, got {periods}"
        )));
    }
    let words = table.n_cols();
    let lf = LogFactorial::new(table.grand_total);

    // Prefix sums over periods: margins, and each word's counts.
    let mut margin_prefix = vec![0_u64; periods + 1];
    for t in 0..periods {
        margin_prefix[t + 1] = margin_prefix[t] + table.row_margins[t];
    }
    let mut count_prefix = DMatrix::<u64>::zeros(periods + 1, words);
    for (t, word, count) in table.iter() {
        count_prefix[(t + 1, word)] = count;
    }
    for t in 0..periods {
        for word in 0..words {
            count_prefix[(t + 1, word)] += count_prefix[(t, word)];
        }
    }

    // Best span per word, in parallel across the word × span grid.
    let mut assignments: Vec<ChronoAssignment> = (0..words)
        .into_par_iter()
        .filter_map(|word| {
            let word_total = table.col_margins[word];
            let mut best: Option<(f64, usize, usize)> = None;
            for level in 1..periods {
                for start in 0..=(periods - level) {
                    let end = start + level - 1;
                    let observed = count_prefix[(end + 1, word)] - count_prefix[(start, word)];
                    let part_total = margin_prefix[end + 1] - margin_prefix[start];
                    let query = HypergeomQuery {
                        grand_total: table.grand_total,
                        part_total,
                        word_total,
                        observed,
                        direction: TailDirection::Over,
                    };
                    let p = tail_probability(&query, &lf);
                    let candidate = (p, level, start);
                    // Strictly better p wins; ties prefer the shorter
                    // span, then the earlier start. The loop order
                    // (level outer, start inner, ascending) makes the
                    // strict `<` implement exactly that.
                    if best.map_or(true, |(bp, _, _)| p < bp) {
                        best = Some(candidate);
                    }
                }
            }
            let (p_value, level, start) = best?;
            let end = start + level - 1;
            let observed = count_prefix[(end + 1, word)] - count_prefix[(start, word)];
            let part_total = margin_prefix[end + 1] - margin_prefix[start];
            Some(ChronoAssignment {
                word: table.col_words[word].clone(),
                start: table.row_ids[start].clone(),
                end: table.row_ids[end].clone(),
                start_index: start,
                end_index: end,
                level,
                observed,
                expected: word_total as f64 * part_total as f64 / table.grand_total as f64,
                p_value,
            })
        })
        .collect();

    let mut p_values: Vec<f64> = assignments.iter().map(|a| a.p_value).collect();
    apply_adjustment(&mut p_values, adjustment);
    for (assignment, p) in assignments.iter_mut().zip(&p_values) {
        assignment.p_value = *p;
    }
    assignments.retain(|a| a.p_value < alpha);
    assignments.sort_by(|a, b| {
        a.start_index
            .cmp(&b.start_index)
            .then_with(|| a.end_index.cmp(&b.end_index))
            .then_with(|| a.p_value.total_cmp(&b.p_value))
            .then_with(|| a.word.cmp(&b.word))
    });
    Ok(assignments)
}

// ---------- period segmentation ----------

/// Inclusive year ranges produced by cutting the trajectory at its
/// `k − 1` widest axis-1 jumps.
///
/// Two gaps of exactly equal width are resolved toward the earlier
/// years. Errors when `k < 2` or `k` exceeds the number of observed
/// years.
pub fn segment_year_ranges(trajectory: &YearTrajectory, k: usize) -> Result<Vec<(i32, i32)>> {
    let n = trajectory.points.len();
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "segmentation needs at least two periods, got {k}"
        )));
    }
    if k > n {
        return Err(Error::InvalidParameter(format!(
            "{k} periods requested but only {n} years observed"
        )));
    }
    let mut order: Vec<usize> = (0..trajectory.gaps.len()).collect();
    order.sort_by(|&a, &b| {
        trajectory.gaps[b]
            .delta
            .abs()
            .total_cmp(&trajectory.gaps[a].delta.abs())
            .then_with(|| a.cmp(&b))
    });
    let mut cuts: Vec<usize> = order[..k - 1].to_vec();
    cuts.sort_unstable();
    let mut ranges = Vec::with_capacity(k);
    let mut start = trajectory.points[0].year;
    for &cut in &cuts {
        ranges.push((start, trajectory.points[cut].year));
        start = trajectory.points[cut + 1].year;
    }
    ranges.push((start, trajectory.points[n - 1].year));
    Ok(ranges)
}

/// Cuts the year trajectory into `k` periods and materializes the
/// result as an ordered document partition of `table`.
///
/// `years` holds one publication year per table row — the same values
/// the trajectory was built from. The partition's groups are labelled
/// `start-end` and carry their member row ids, ready for aggregation.
pub fn segment_periods(
    trajectory: &YearTrajectory,
    table: &LexicalTable,
    years: &[i32],
    k: usize,
) -> Result<Partition> {
    let ranges = segment_year_ranges(trajectory, k)?;
    Partition::by_year_ranges(table, years, &ranges)
}

// ---------- pioneer detection ----------

/// How the gap cutoff for pioneer flagging is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PioneerThreshold {
    /// Flag a document when its gap exceeds `factor` times the
    /// row-weighted standard deviation of the gaps in its own year
    /// cohort. Cohort-relative, so years with naturally wider spreads
    /// need a larger lead.
    CohortStdDev(f64),
    /// Flag a document when its gap exceeds a fixed value.
    Absolute(f64),
}

/// Configuration for pioneer detection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PioneerRule {
    /// Gap cutoff rule.
    pub threshold: PioneerThreshold,
    /// How many of the latest observed years form the companion
    /// "recent highlights" window.
    pub recent_years: usize,
}

impl Default for PioneerRule {
    fn default() -> Self {
        PioneerRule {
            threshold: PioneerThreshold::CohortStdDev(1.0),
            recent_years: 2,
        }
    }
}

/// One document's lead of vocabulary over chronology on axis 1.
#[derive(Debug, Clone)]
pub struct PioneerScore {
    /// Document id.
    pub id: String,
    /// Publication year.
    pub year: i32,
    /// Axis-1 partial coordinate from the vocabulary viewpoint, after
    /// orienting the axis to correlate positively with the year.
    pub vocabulary_coord: f64,
    /// Axis-1 partial coordinate from the chronology viewpoint, same
    /// orientation.
    pub chronology_coord: f64,
    /// `vocabulary_coord − chronology_coord`; positive means the
    /// document's vocabulary runs ahead of its date.
    pub gap: f64,
    /// Resolved cutoff this document was compared against.
    pub threshold: f64,
    /// Whether `gap > threshold`.
    pub pioneer: bool,
}

/// A recent document with a high vocabulary-viewpoint coordinate.
#[derive(Debug, Clone)]
pub struct RecentHighlight {
    /// Document id.
    pub id: String,
    /// Publication year.
    pub year: i32,
    /// Axis-1 vocabulary-viewpoint coordinate (oriented as above).
    pub vocabulary_coord: f64,
}

/// Pioneer scores plus the companion list for the newest years.
#[derive(Debug, Clone)]
pub struct PioneerReport {
    /// One score per document, sorted by descending gap (ties: id
    /// order).
    pub scores: Vec<PioneerScore>,
    /// Documents from the newest years, sorted by descending
    /// vocabulary coordinate. The gap criterion cannot single these
    /// out — vocabulary they lead with has no later years to come
    /// from — so high vocabulary coordinates stand in for it.
    pub recent: Vec<RecentHighlight>,
    /// Whether axis 1 had to be sign-flipped to correlate positively
    /// with the year.
    pub axis_flipped: bool,
}

/// Scores every document's vocabulary lead and flags pioneers.
///
/// Axis 1 is oriented so its correlation with the year is positive;
/// the gap is then the vocabulary-viewpoint partial coordinate minus
/// the chronology-viewpoint one. Row-weighted gaps sum to zero across
/// the corpus on every axis (partial points average to the global
/// point, which is weighted-centered), so a positive gap is always a
/// lead over the corpus-wide balance.
///
/// Errors when the analysis lacks a frequency group, a numeric group,
/// or a `years` entry per row.
pub fn pioneer_scores(
    result: &MfactResult,
    years: &[i32],
    rule: &PioneerRule,
) -> Result<PioneerReport> {
    if years.len() != result.row_ids.len() {
        return Err(Error::InvalidParameter(format!(
            "{} years for {} rows",
            years.len(),
            result.row_ids.len()
        )));
    }
    let vocabulary = result.frequency_group().ok_or_else(|| {
        Error::InvalidParameter("pioneer detection needs a word-frequency group".into())
    })?;
    let chronology = result.numeric_group().ok_or_else(|| {
        Error::InvalidParameter("pioneer detection needs a numeric chronology group".into())
    })?;
    let correlation = result.axis_year_correlation.ok_or_else(|| {
        Error::InvalidParameter("pioneer detection needs the axis-year correlation".into())
    })?;
    let factor = match rule.threshold {
        PioneerThreshold::CohortStdDev(f) if !(f.is_finite() && f >= 0.0) => {
            return Err(Error::InvalidParameter(format!(
                "cohort standard-deviation factor must be finite and non-negative, got {f}"
            )));
        }
        PioneerThreshold::CohortStdDev(f) => Some(f),
        PioneerThreshold::Absolute(_) => None,
    };

    let sign = if correlation < 0.0 { -1.0 } else { 1.0 };
    let vocab_coords = &result.partial_row_coords[vocabulary];
    let chrono_coords = &result.partial_row_coords[chronology];
    let n = result.row_ids.len();
    let gaps: Vec<f64> = (0..n)
        .map(|i| sign * (vocab_coords[(i, 0)] - chrono_coords[(i, 0)]))
        .collect();

    // Resolve per-document cutoffs.
    let thresholds: Vec<f64> = match rule.threshold {
        PioneerThreshold::Absolute(value) => vec![value; n],
        PioneerThreshold::CohortStdDev(_) => {
            let factor = factor.unwrap();
            let mut cohorts: std::collections::BTreeMap<i32, Vec<usize>> =
                std::collections::BTreeMap::new();
            for (i, &year) in years.iter().enumerate() {
                cohorts.entry(year).or_default().push(i);
            }
            let mut cutoff = vec![0.0; n];
            for members in cohorts.values() {
                let values: Vec<f64> = members.iter().map(|&i| gaps[i]).collect();
                let weights: Vec<f64> = members.iter().map(|&i| result.row_weights[i]).collect();
                let sd = weighted_variance(&values, &weights).max(0.0).sqrt();
                for &i in members {
                    cutoff[i] = factor * sd;
                }
            }
            cutoff
        }
    };

    let mut scores: Vec<PioneerScore> = (0..n)
        .map(|i| PioneerScore {
            id: result.row_ids[i].clone(),
            year: years[i],
            vocabulary_coord: sign * vocab_coords[(i, 0)],
            chronology_coord: sign * chrono_coords[(i, 0)],
            gap: gaps[i],
            threshold: thresholds[i],
            pioneer: gaps[i] > thresholds[i],
        })
        .collect();
    scores.sort_by(|a, b| b.gap.total_cmp(&a.gap).then_with(|| a.id.cmp(&b.id)));

    let mut distinct_years: Vec<i32> = years.to_vec();
    distinct_years.sort_unstable();
    distinct_years.dedup();
    let window_start = distinct_years
        .len()
        .saturating_sub(rule.recent_years.min(distinct_years.len()));
    let recent_set: std::collections::BTreeSet<i32> =
        distinct_years[window_start..].iter().copied().collect();
    let mut recent: Vec<RecentHighlight> = (0..n)
        .filter(|&i| recent_set.contains(&years[i]))
        .map(|i| RecentHighlight {
            id: result.row_ids[i].clone(),
            year: years[i],
            vocabulary_coord: sign * vocab_coords[(i, 0)],
        })
        .collect();
    recent.sort_by(|a, b| {
        b.vocabulary_coord
            .total_cmp(&a.vocabulary_coord)
            .then_with(|| a.id.cmp(&b.id))
    });

    Ok(PioneerReport {
        scores,
        recent,
        axis_flipped: sign < 0.0,
    })
}
