//! Deterministic serialization of corpora and analysis results.
//!
//! Every CSV writer emits a header row, RFC 4180 quoting, `\n` record
//! terminators, and Rust's shortest round-trip float formatting — a
//! given value always serializes to the same bytes, so rerunning an
//! analysis reproduces its output files exactly.

use std::io::{Read, Write};

use crate::ca::CaResult;
use crate::chrono::{CharacteristicWordRecord, ChronoAssignment, IncrementRecord, PioneerReport};
use crate::corpus::{Corpus, Vocabulary};
use crate::error::{Error, Result};
use crate::lextable::{ExcludedRow, LexicalTable};
use crate::mfact::{
    CategoryProjection, GroupKind, MfactResult, PermutationTestResult, Viewpoint, YearTrajectory,
};

/// Shortest decimal representation that parses back to the same bits.
fn fmt(value: f64) -> String {
    format!("{value}")
}

fn axis_headers(prefix: &str, axes: usize) -> Vec<String> {
    (1..=axes).map(|k| format!("{prefix}_{k}")).collect()
}

// ---------- corpus & table ----------

/// Re-emits the corpus as JSON Lines (one document per line, keys
/// `id`, `title`, `abstract`, `journal`, `year`), loadable again by the
/// corpus reader.
pub fn corpus_to_json_lines<W: Write>(mut writer: W, corpus: &Corpus) -> Result<()> {
    for document in &corpus.documents {
        let line = serde_json::to_vec(document).map_err(|e| Error::Parse {
            line: 0,
            message: format!("could not serialize document `{}`: {e}", document.id),
        })?;
        writer.write_all(&line)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

/// Vocabulary entries: `word, doc_count, total_count`.
pub fn write_vocabulary_csv<W: Write>(writer: W, vocab: &Vocabulary) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["word", "doc_count", "total_count"])?;
    for entry in &vocab.entries {
        csv.write_record([
            entry.word.as_str(),
            &entry.doc_count.to_string(),
            &entry.total_count.to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

/// Sparse table counts: `row, word, count`, ascending by row then
/// column.
pub fn write_table_csv<W: Write>(writer: W, table: &LexicalTable) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["row", "word", "count"])?;
    for (row, col, count) in table.iter() {
        csv.write_record([
            table.row_ids[row].as_str(),
            table.col_words[col].as_str(),
            &count.to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

/// Rows dropped while building a table: `id, reason`.
pub fn write_excluded_csv<W: Write>(writer: W, rows: &[ExcludedRow]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["id", "reason"])?;
    for row in rows {
        csv.write_record([row.id.as_str(), row.reason.as_str()])?;
    }
    csv.flush()?;
    Ok(())
}

// ---------- factor analyses ----------

/// Eigenvalues with inertia shares: `axis, eigenvalue, percent,
/// cumulative_percent`. Axes are numbered from 1.
pub fn write_eigenvalues_csv<W: Write>(
    writer: W,
    eigenvalues: &[f64],
    total_inertia: f64,
) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["axis", "eigenvalue", "percent", "cumulative_percent"])?;
    let mut cumulative = 0.0;
    for (k, &value) in eigenvalues.iter().enumerate() {
        let percent = if total_inertia > 0.0 {
            100.0 * value / total_inertia
        } else {
            0.0
        };
        cumulative += percent;
        csv.write_record([
            &(k + 1).to_string(),
            &fmt(value),
            &fmt(percent),
            &fmt(cumulative),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

fn write_point_table<W: Write>(
    writer: W,
    id_header: &str,
    ids: &[String],
    weights: &[f64],
    coords: &nalgebra::DMatrix<f64>,
    contrib: &nalgebra::DMatrix<f64>,
    cos2: &nalgebra::DMatrix<f64>,
) -> Result<()> {
    let axes = coords.ncols();
    let mut csv = csv::Writer::from_writer(writer);
    let mut header = vec![id_header.to_string(), "weight".into()];
    header.extend(axis_headers("coord", axes));
    header.extend(axis_headers("contrib", axes));
    header.extend(axis_headers("cos2", axes));
    csv.write_record(&header)?;
    for i in 0..ids.len() {
        let mut record = vec![ids[i].clone(), fmt(weights[i])];
        for k in 0..axes {
            record.push(fmt(coords[(i, k)]));
        }
        for k in 0..axes {
            record.push(fmt(contrib[(i, k)]));
        }
        for k in 0..axes {
            record.push(fmt(cos2[(i, k)]));
        }
        csv.write_record(&record)?;
    }
    csv.flush()?;
    Ok(())
}

/// Row points of a correspondence analysis: id, weight, then
/// per-axis coordinates, contributions, and squared cosines.
pub fn write_ca_rows_csv<W: Write>(writer: W, result: &CaResult) -> Result<()> {
    write_point_table(
        writer,
        "id",
        &result.row_ids,
        &result.row_weights,
        &result.row_coords,
        &result.row_contrib,
        &result.row_cos2,
    )
}

/// Column points of a correspondence analysis, same layout as
/// [`write_ca_rows_csv`].
pub fn write_ca_cols_csv<W: Write>(writer: W, result: &CaResult) -> Result<()> {
    write_point_table(
        writer,
        "word",
        &result.col_words,
        &result.col_weights,
        &result.col_coords,
        &result.col_contrib,
        &result.col_cos2,
    )
}

/// High-contribution point sets: `axis, side, label, contribution,
/// coordinate`, in the given set order.
pub fn write_meta_csv<W: Write>(writer: W, sets: &[crate::ca::MetaSet]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["axis", "side", "label", "contribution", "coordinate"])?;
    for set in sets {
        let side = if set.positive { "positive" } else { "negative" };
        for member in &set.members {
            csv.write_record([
                &(set.axis + 1).to_string(),
                side,
                member.label.as_str(),
                &fmt(member.contribution),
                &fmt(member.coordinate),
            ])?;
        }
    }
    csv.flush()?;
    Ok(())
}

/// Global and per-group partial row coordinates of a joint analysis:
/// `id, weight, coord_1..q`, then `{group}_coord_1..q` per group.
pub fn write_mfact_rows_csv<W: Write>(writer: W, result: &MfactResult) -> Result<()> {
    let axes = result.n_axes();
    let mut csv = csv::Writer::from_writer(writer);
    let mut header = vec!["id".to_string(), "weight".into()];
    header.extend(axis_headers("coord", axes));
    for group in &result.groups {
        header.extend(axis_headers(&format!("{}_coord", group.label), axes));
    }
    csv.write_record(&header)?;
    for i in 0..result.row_ids.len() {
        let mut record = vec![result.row_ids[i].clone(), fmt(result.row_weights[i])];
        for k in 0..axes {
            record.push(fmt(result.row_coords[(i, k)]));
        }
        for partial in &result.partial_row_coords {
            for k in 0..axes {
                record.push(fmt(partial[(i, k)]));
            }
        }
        csv.write_record(&record)?;
    }
    csv.flush()?;
    Ok(())
}

/// Column coordinates of a joint analysis: `label, group,
/// coord_1..q`.
pub fn write_mfact_cols_csv<W: Write>(writer: W, result: &MfactResult) -> Result<()> {
    let axes = result.n_axes();
    let mut csv = csv::Writer::from_writer(writer);
    let mut header = vec!["label".to_string(), "group".into()];
    header.extend(axis_headers("coord", axes));
    csv.write_record(&header)?;
    let mut column = 0;
    for group in &result.groups {
        for _ in &group.columns {
            let mut record = vec![result.col_labels[column].clone(), group.label.clone()];
            for k in 0..axes {
                record.push(fmt(result.col_coords[(column, k)]));
            }
            csv.write_record(&record)?;
            column += 1;
        }
    }
    csv.flush()?;
    Ok(())
}

/// Group-level summary of a joint analysis: `group, kind, columns,
/// separate_lambda1, metric_weight, contrib_1..q`.
pub fn write_mfact_groups_csv<W: Write>(writer: W, result: &MfactResult) -> Result<()> {
    let axes = result.n_axes();
    let mut csv = csv::Writer::from_writer(writer);
    let mut header = vec![
        "group".to_string(),
        "kind".into(),
        "columns".into(),
        "separate_lambda1".into(),
        "metric_weight".into(),
    ];
    header.extend(axis_headers("contrib", axes));
    csv.write_record(&header)?;
    for (g, group) in result.groups.iter().enumerate() {
        let kind = match group.kind {
            GroupKind::Frequency => "frequency",
            GroupKind::Quantitative => "numeric",
        };
        let mut record = vec![
            group.label.clone(),
            kind.to_string(),
            group.columns.len().to_string(),
            fmt(group.separate_first_eigenvalue),
            fmt(group.weight),
        ];
        for k in 0..axes {
            record.push(fmt(result.group_contrib[(g, k)]));
        }
        csv.write_record(&record)?;
    }
    csv.flush()?;
    Ok(())
}

/// Generic two-column `key, value` table (run statistics and the
/// like).
pub fn write_key_values_csv<W: Write>(writer: W, entries: &[(String, String)]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["key", "value"])?;
    for (key, value) in entries {
        csv.write_record([key.as_str(), value.as_str()])?;
    }
    csv.flush()?;
    Ok(())
}

/// Documents per year: `year, documents`, ascending by year.
pub fn write_year_counts_csv<W: Write>(writer: W, per_year: &[(i32, usize)]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["year", "documents"])?;
    for &(year, count) in per_year {
        csv.write_record([year.to_string(), count.to_string()])?;
    }
    csv.flush()?;
    Ok(())
}

/// Documents per journal: `journal, documents`, in the given
/// (descending-count) order.
pub fn write_journal_counts_csv<W: Write>(
    writer: W,
    per_journal: &[(String, usize)],
) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["journal", "documents"])?;
    for (journal, count) in per_journal {
        csv.write_record([journal.as_str(), &count.to_string()])?;
    }
    csv.flush()?;
    Ok(())
}

/// Illustrative category centroids: `variable, viewpoint, label,
/// members, weight, coord_1..q`.
pub fn write_categories_csv<W: Write>(writer: W, projection: &CategoryProjection) -> Result<()> {
    let axes = projection.categories.first().map_or(0, |c| c.coords.len());
    let mut csv = csv::Writer::from_writer(writer);
    let mut header = vec![
        "variable".to_string(),
        "viewpoint".into(),
        "label".into(),
        "members".into(),
        "weight".into(),
    ];
    header.extend(axis_headers("coord", axes));
    csv.write_record(&header)?;
    let viewpoint = match projection.viewpoint {
        Viewpoint::Global => "global".to_string(),
        Viewpoint::Partial(index) => format!("partial:{index}"),
    };
    for category in &projection.categories {
        let mut record = vec![
            projection.variable.clone(),
            viewpoint.clone(),
            category.label.clone(),
            category.members.to_string(),
            fmt(category.weight),
        ];
        for &value in &category.coords {
            record.push(fmt(value));
        }
        csv.write_record(&record)?;
    }
    csv.flush()?;
    Ok(())
}

/// Year trajectory points: `year, members, weight, coord_1..q`.
pub fn write_trajectory_csv<W: Write>(writer: W, trajectory: &YearTrajectory) -> Result<()> {
    let axes = trajectory.points.first().map_or(0, |p| p.coords.len());
    let mut csv = csv::Writer::from_writer(writer);
    let mut header = vec!["year".to_string(), "members".into(), "weight".into()];
    header.extend(axis_headers("coord", axes));
    csv.write_record(&header)?;
    for point in &trajectory.points {
        let mut record = vec![
            point.year.to_string(),
            point.members.to_string(),
            fmt(point.weight),
        ];
        for &value in &point.coords {
            record.push(fmt(value));
        }
        csv.write_record(&record)?;
    }
    csv.flush()?;
    Ok(())
}

/// Axis-1 jumps between consecutive trajectory points: `from_year,
/// to_year, delta`.
pub fn write_trajectory_gaps_csv<W: Write>(writer: W, trajectory: &YearTrajectory) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["from_year", "to_year", "delta"])?;
    for gap in &trajectory.gaps {
        csv.write_record([
            &gap.from_year.to_string(),
            &gap.to_year.to_string(),
            &fmt(gap.delta),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

// ---------- permutation test ----------

/// One-row summary: `observed_lambda1, replications, p_value, seed`.
pub fn write_permutation_summary_csv<W: Write>(
    writer: W,
    result: &PermutationTestResult,
) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["observed_lambda1", "replications", "p_value", "seed"])?;
    csv.write_record([
        &fmt(result.observed_lambda1),
        &result.replications.to_string(),
        &fmt(result.p_value),
        &result.seed.to_string(),
    ])?;
    csv.flush()?;
    Ok(())
}

/// The permutation null distribution: `replication, lambda1`, in
/// replication order (1-based).
pub fn write_null_distribution_csv<W: Write>(
    writer: W,
    result: &PermutationTestResult,
) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["replication", "lambda1"])?;
    for (i, &value) in result.null_values.iter().enumerate() {
        csv.write_record([&(i + 1).to_string(), &fmt(value)])?;
    }
    csv.flush()?;
    Ok(())
}

// ---------- periods ----------

/// Period ranges with document counts: `period, start_year, end_year,
/// documents`. Labels match the partition convention `start-end`.
pub fn write_periods_csv<W: Write>(writer: W, ranges: &[(i32, i32)], years: &[i32]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["period", "start_year", "end_year", "documents"])?;
    for &(start, end) in ranges {
        let documents = years.iter().filter(|&&y| start <= y && y <= end).count();
        csv.write_record([
            &format!("{start}-{end}"),
            &start.to_string(),
            &end.to_string(),
            &documents.to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

/// Reads the `(start_year, end_year)` ranges back from a CSV written
/// by [`write_periods_csv`].
pub fn read_period_ranges_csv<R: Read>(reader: R) -> Result<Vec<(i32, i32)>> {
    let mut csv = csv::Reader::from_reader(reader);
    let headers = csv.headers()?.clone();
    let start_idx = headers.iter().position(|h| h == "start_year");
    let end_idx = headers.iter().position(|h| h == "end_year");
    let (start_idx, end_idx) = match (start_idx, end_idx) {
        (Some(s), Some(e)) => (s, e),
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: "period file needs `start_year` and `end_year` columns".into(),
            })
        }
    };
    let mut ranges = Vec::new();
    for (index, record) in csv.records().enumerate() {
        let record = record?;
        let line = index + 2; // header is line 1
        let parse = |field: usize| -> Result<i32> {
            record
                .get(field)
                .ok_or_else(|| Error::Parse {
                    line,
                    message: format!("missing column {field}"),
                })?
                .trim()
                .parse()
                .map_err(|e| Error::Parse {
                    line,
                    message: format!("bad year: {e}"),
                })
        };
        ranges.push((parse(start_idx)?, parse(end_idx)?));
    }
    if ranges.is_empty() {
        return Err(Error::Parse {
            line: 1,
            message: "period file holds no ranges".into(),
        });
    }
    Ok(ranges)
}

// ---------- characterization ----------

/// Characteristic words: `part, word, observed, expected, p_value,
/// direction`.
pub fn write_characteristic_words_csv<W: Write>(
    writer: W,
    records: &[CharacteristicWordRecord],
) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record([
        "part",
        "word",
        "observed",
        "expected",
        "p_value",
        "direction",
    ])?;
    for record in records {
        csv.write_record([
            record.part.as_str(),
            record.word.as_str(),
            &record.observed.to_string(),
            &fmt(record.expected),
            &fmt(record.p_value),
            &record.direction.to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

/// Usage increments: `period, word, observed, period_total,
/// baseline_word_count, baseline_total, expected, p_value`.
pub fn write_increments_csv<W: Write>(writer: W, records: &[IncrementRecord]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record([
        "period",
        "word",
        "observed",
        "period_total",
        "baseline_word_count",
        "baseline_total",
        "expected",
        "p_value",
    ])?;
    for record in records {
        csv.write_record([
            record.period.as_str(),
            record.word.as_str(),
            &record.observed.to_string(),
            &record.period_total.to_string(),
            &record.baseline_word_count.to_string(),
            &record.baseline_total.to_string(),
            &fmt(record.expected),
            &fmt(record.p_value),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

/// Span assignments: `start, end, level, word, observed, expected,
/// p_value`.
pub fn write_chrono_assignments_csv<W: Write>(
    writer: W,
    assignments: &[ChronoAssignment],
) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record([
        "start", "end", "level", "word", "observed", "expected", "p_value",
    ])?;
    for assignment in assignments {
        csv.write_record([
            assignment.start.as_str(),
            assignment.end.as_str(),
            &assignment.level.to_string(),
            assignment.word.as_str(),
            &assignment.observed.to_string(),
            &fmt(assignment.expected),
            &fmt(assignment.p_value),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

// ---------- pioneers ----------

/// Pioneer scores: `id, year, vocabulary_coord, chronology_coord,
/// gap, threshold, pioneer`, sorted as in the report (descending gap).
pub fn write_pioneers_csv<W: Write>(writer: W, report: &PioneerReport) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record([
        "id",
        "year",
        "vocabulary_coord",
        "chronology_coord",
        "gap",
        "threshold",
        "pioneer",
    ])?;
    for score in &report.scores {
        csv.write_record([
            score.id.as_str(),
            &score.year.to_string(),
            &fmt(score.vocabulary_coord),
            &fmt(score.chronology_coord),
            &fmt(score.gap),
            &fmt(score.threshold),
            if score.pioneer { "true" } else { "false" },
        ])?;
    }
    csv.flush()?;
    Ok(())
}

/// Recent documents with advanced vocabulary: `id, year,
/// vocabulary_coord`, sorted as in the report (descending coordinate).
pub fn write_recent_csv<W: Write>(writer: W, report: &PioneerReport) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["id", "year", "vocabulary_coord"])?;
    for entry in &report.recent {
        csv.write_record([
            entry.id.as_str(),
            &entry.year.to_string(),
            &fmt(entry.vocabulary_coord),
        ])?;
    }
    csv.flush()?;
    Ok(())
}
