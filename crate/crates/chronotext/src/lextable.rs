//! Lexical tables: sparse documents×words count matrices with margins,
//! and their aggregation into groups×words tables (by year, period,
//! journal, or any partition of the documents).
//!
//! Documents whose row would be all zeros (no vocabulary word left)
//! are excluded from the table and recorded, so every analyzed row has
//! a positive margin.

use std::collections::{BTreeMap, HashMap};

use nalgebra::DMatrix;

use crate::corpus::{Corpus, Vocabulary};
use crate::error::{Error, Result};

// ---------- lexical table ----------

/// A sparse contingency table of counts with fixed row/column orders
/// and precomputed margins.
#[derive(Debug, Clone)]
pub struct LexicalTable {
    /// Short description of where the rows come from (provenance).
    pub id: String,
    /// Row identifiers (document ids, or group labels after
    /// aggregation), in table order.
    pub row_ids: Vec<String>,
    /// Column words in table order (sorted vocabulary order).
    pub col_words: Vec<String>,
    /// Nonzero cells keyed by `(row, col)`; iteration is sorted.
    counts: BTreeMap<(usize, usize), u64>,
    /// Row sums.
    pub row_margins: Vec<u64>,
    /// Column sums.
    pub col_margins: Vec<u64>,
    /// Sum of all cells.
    pub grand_total: u64,
    /// Rows dropped at build time, with the reason.
    pub excluded_rows: Vec<ExcludedRow>,
}

/// A document left out of the lexical table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExcludedRow {
    /// The document id.
    pub id: String,
    /// Why it was dropped.
    pub reason: String,
}

impl LexicalTable {
    /// Builds a table from parts, computing margins. Intended for
    /// synthetic tables in analyses and tests; `build_lexical_table`
    /// is the normal constructor.
    pub fn from_counts(
        id: impl Into<String>,
        row_ids: Vec<String>,
        col_words: Vec<String>,
        cells: impl IntoIterator<Item = (usize, usize, u64)>,
    ) -> Result<Self> {
        if row_ids.is_empty() || col_words.is_empty() {
            return Err(Error::EmptyTable(
                "a table needs at least one row and one column".into(),
            ));
        }
        let mut counts = BTreeMap::new();
        let mut row_margins = vec![0u64; row_ids.len()];
        let mut col_margins = vec![0u64; col_words.len()];
        let mut grand_total = 0u64;
        for (row, col, value) in cells {
            if row >= row_ids.len() || col >= col_words.len() {
                return Err(Error::InvalidParameter(format!(
                    "cell ({row}, {col}) outside a {}x{} table",
                    row_ids.len(),
                    col_words.len()
                )));
            }
            if value == 0 {
                continue;
            }
            *counts.entry((row, col)).or_insert(0) += value;
            row_margins[row] += value;
            col_margins[col] += value;
            grand_total += value;
        }
        Ok(LexicalTable {
            id: id.into(),
            row_ids,
            col_words,
            counts,
            row_margins,
            col_margins,
            grand_total,
            excluded_rows: Vec::new(),
        })
    }

    /// Builds a table from a dense row-major count grid.
    pub fn from_dense(
        id: impl Into<String>,
        row_ids: Vec<String>,
        col_words: Vec<String>,
        grid: &[Vec<u64>],
    ) -> Result<Self> {
        let cols = col_words.len();
        let cells = grid.iter().enumerate().flat_map(|(i, row)| {
            assert_eq!(row.len(), cols, "dense grid row {i} has wrong width");
            row.iter()
                .enumerate()
                .map(move |(j, &v)| (i, j, v))
                .collect::<Vec<_>>()
        });
        LexicalTable::from_counts(id, row_ids, col_words, cells)
    }

    /// Number of rows.
    pub fn n_rows(&self) -> usize {
        self.row_ids.len()
    }

    /// Number of columns.
    pub fn n_cols(&self) -> usize {
        self.col_words.len()
    }

    /// The count in a cell (0 when the cell is not stored).
    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.counts.get(&(row, col)).copied().unwrap_or(0)
    }

    /// Sorted iteration over nonzero cells as `(row, col, count)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.counts.iter().map(|(&(r, c), &v)| (r, c, v))
    }

    /// Sorted iteration over one row's nonzero cells as `(col, count)`.
    pub fn row(&self, row: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts
            .range((row, 0)..(row + 1, 0))
            .map(|(&(_, c), &v)| (c, v))
    }

    /// Dense float copy, for the factor analyses.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut dense = DMatrix::zeros(self.n_rows(), self.n_cols());
        for (r, c, v) in self.iter() {
            dense[(r, c)] = v as f64;
        }
        dense
    }

    /// Errors unless every row and column margin is positive.
    pub fn require_positive_margins(&self) -> Result<()> {
        if self.grand_total == 0 {
            return Err(Error::ZeroMargin("grand total is zero".into()));
        }
        if let Some(i) = self.row_margins.iter().position(|&m| m == 0) {
            return Err(Error::ZeroMargin(format!("row `{}`", self.row_ids[i])));
        }
        if let Some(j) = self.col_margins.iter().position(|&m| m == 0) {
            return Err(Error::ZeroMargin(format!("column `{}`", self.col_words[j])));
        }
        Ok(())
    }
}

/// Crosses a tokenized corpus with its vocabulary into a lexical table.
///
/// Documents containing no vocabulary word are excluded (so every kept
/// row has a positive margin) and recorded in `excluded_rows`. Errors
/// if the corpus is untokenized or if no document survives.
pub fn build_lexical_table(corpus: &Corpus, vocab: &Vocabulary) -> Result<LexicalTable> {
    if !corpus.is_tokenized() {
        return Err(Error::InvalidParameter(
            "corpus must be tokenized before building a lexical table".into(),
        ));
    }
    if vocab.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    let col_words: Vec<String> = vocab.words().map(str::to_string).collect();
    let word_index: HashMap<&str, usize> = col_words
        .iter()
        .enumerate()
        .map(|(j, w)| (w.as_str(), j))
        .collect();

    let mut row_ids = Vec::new();
    let mut cells: Vec<(usize, usize, u64)> = Vec::new();
    let mut excluded_rows = Vec::new();
    for (doc, tokens) in corpus.documents.iter().zip(&corpus.tokens) {
        let mut row_counts: BTreeMap<usize, u64> = BTreeMap::new();
        for token in tokens {
            if let Some(&j) = word_index.get(token.as_str()) {
                *row_counts.entry(j).or_insert(0) += 1;
            }
        }
        if row_counts.is_empty() {
            excluded_rows.push(ExcludedRow {
                id: doc.id.clone(),
                reason: "no vocabulary word in document".into(),
            });
            continue;
        }
        let row = row_ids.len();
        row_ids.push(doc.id.clone());
        cells.extend(row_counts.into_iter().map(|(j, v)| (row, j, v)));
    }
    if row_ids.is_empty() {
        return Err(Error::EmptyTable(
            "every document was excluded (no vocabulary word present)".into(),
        ));
    }
    let mut table = LexicalTable::from_counts("documents", row_ids, col_words, cells)?;
    table.excluded_rows = excluded_rows;
    Ok(table)
}

/// The publication year of every table row, via the corpus.
pub fn table_years(table: &LexicalTable, corpus: &Corpus) -> Result<Vec<i32>> {
    let by_id: HashMap<&str, i32> = corpus
        .documents
        .iter()
        .map(|d| (d.id.as_str(), d.year))
        .collect();
    table
        .row_ids
        .iter()
        .map(|id| {
            by_id
                .get(id.as_str())
                .copied()
                .ok_or_else(|| Error::MissingYear(id.clone()))
        })
        .collect()
}

/// The journal of every table row, via the corpus.
pub fn table_journals(table: &LexicalTable, corpus: &Corpus) -> Result<Vec<String>> {
    let by_id: HashMap<&str, &str> = corpus
        .documents
        .iter()
        .map(|d| (d.id.as_str(), d.journal.as_str()))
        .collect();
    table
        .row_ids
        .iter()
        .map(|id| {
            by_id
                .get(id.as_str())
                .map(|j| j.to_string())
                .ok_or_else(|| Error::MissingYear(id.clone()))
        })
        .collect()
}

// ---------- partitions ----------

/// One group of a [`Partition`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionGroup {
    /// Group label (becomes the aggregated row id).
    pub label: String,
    /// Row ids belonging to the group.
    pub members: Vec<String>,
    /// Sortable key for ordered partitions (e.g. a start year).
    pub key: Option<i64>,
}

/// A named partition of table rows into disjoint, covering groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    /// Partition name (e.g. `year`, `period`, `journal`).
    pub name: String,
    /// Groups in presentation order.
    pub groups: Vec<PartitionGroup>,
    /// Whether group order is chronologic (carries meaning).
    pub ordered: bool,
}

impl Partition {
    /// Groups table rows by publication year (ascending).
    pub fn by_year(table: &LexicalTable, years: &[i32]) -> Result<Self> {
        if years.len() != table.n_rows() {
            return Err(Error::InvalidParameter(format!(
                "{} years supplied for {} table rows",
                years.len(),
                table.n_rows()
            )));
        }
        let mut by_year: BTreeMap<i32, Vec<String>> = BTreeMap::new();
        for (id, &year) in table.row_ids.iter().zip(years) {
            by_year.entry(year).or_default().push(id.clone());
        }
        Ok(Partition {
            name: "year".into(),
            groups: by_year
                .into_iter()
                .map(|(year, members)| PartitionGroup {
                    label: year.to_string(),
                    members,
                    key: Some(year as i64),
                })
                .collect(),
            ordered: true,
        })
    }

    /// Groups table rows by contiguous year ranges. `ranges` holds
    /// inclusive `(start, end)` bounds in ascending order; every row's
    /// year must fall in exactly one range.
    pub fn by_year_ranges(
        table: &LexicalTable,
        years: &[i32],
        ranges: &[(i32, i32)],
    ) -> Result<Self> {
        if years.len() != table.n_rows() {
            return Err(Error::InvalidParameter(format!(
                "{} years supplied for {} table rows",
                years.len(),
                table.n_rows()
            )));
        }
        let mut groups: Vec<PartitionGroup> = ranges
            .iter()
            .map(|&(start, end)| PartitionGroup {
                label: format!("{start}-{end}"),
                members: Vec::new(),
                key: Some(start as i64),
            })
            .collect();
        for (id, &year) in table.row_ids.iter().zip(years) {
            let slot = ranges.iter().position(|&(s, e)| s <= year && year <= e);
            match slot {
                Some(g) => groups[g].members.push(id.clone()),
                None => {
                    return Err(Error::Partition {
                        name: "period".into(),
                        message: format!("row `{id}` (year {year}) falls in no period range"),
                    })
                }
            }
        }
        Ok(Partition {
            name: "period".into(),
            groups,
            ordered: true,
        })
    }

    /// Groups table rows by a label per row (e.g. journals); groups are
    /// sorted lexicographically and unordered.
    pub fn by_label(table: &LexicalTable, name: &str, labels: &[String]) -> Result<Self> {
        if labels.len() != table.n_rows() {
            return Err(Error::InvalidParameter(format!(
                "{} labels supplied for {} table rows",
                labels.len(),
                table.n_rows()
            )));
        }
        let mut by_label: BTreeMap<&String, Vec<String>> = BTreeMap::new();
        for (id, label) in table.row_ids.iter().zip(labels) {
            by_label.entry(label).or_default().push(id.clone());
        }
        Ok(Partition {
            name: name.into(),
            groups: by_label
                .into_iter()
                .map(|(label, members)| PartitionGroup {
                    label: label.clone(),
                    members,
                    key: None,
                })
                .collect(),
            ordered: false,
        })
    }
}

// ---------- aggregation ----------

/// A lexical table whose rows are partition groups instead of single
/// documents.
#[derive(Debug, Clone)]
pub struct AggregatedTable {
    /// The groups×words table. Row ids are the group labels.
    pub table: LexicalTable,
    /// Id of the table the aggregation came from.
    pub source: String,
    /// Name of the partition that produced it.
    pub partition_name: String,
    /// Whether row order is chronologic.
    pub ordered: bool,
    /// Group sort keys, parallel to the rows.
    pub group_keys: Vec<Option<i64>>,
}

/// Sums table rows group by group. Column order, column margins, and
/// the grand total are preserved; every group label becomes exactly one
/// row, in partition order.
///
/// Errors if a group names an unknown row id, if a row is assigned to
/// two groups, or if some table row is covered by no group.
pub fn aggregate(table: &LexicalTable, partition: &Partition) -> Result<AggregatedTable> {
    let row_index: HashMap<&str, usize> = table
        .row_ids
        .iter()
        .enumerate()
        .map(|(i, id)| (id.as_str(), i))
        .collect();
    let mut assignment: Vec<Option<usize>> = vec![None; table.n_rows()];
    for (g, group) in partition.groups.iter().enumerate() {
        for member in &group.members {
            let &row = row_index
                .get(member.as_str())
                .ok_or_else(|| Error::Partition {
                    name: partition.name.clone(),
                    message: format!("group `{}` names unknown row id `{member}`", group.label),
                })?;
            if let Some(previous) = assignment[row] {
                return Err(Error::Partition {
                    name: partition.name.clone(),
                    message: format!(
                        "row `{member}` assigned to both `{}` and `{}`",
                        partition.groups[previous].label, group.label
                    ),
                });
            }
            assignment[row] = Some(g);
        }
    }
    if let Some(row) = assignment.iter().position(Option::is_none) {
        return Err(Error::Partition {
            name: partition.name.clone(),
            message: format!("row `{}` is covered by no group", table.row_ids[row]),
        });
    }

    let labels: Vec<String> = partition.groups.iter().map(|g| g.label.clone()).collect();
    let cells = table
        .iter()
        .map(|(r, c, v)| (assignment[r].expect("all rows assigned"), c, v));
    let aggregated = LexicalTable::from_counts(
        format!("{} by {}", table.id, partition.name),
        labels,
        table.col_words.clone(),
        cells,
    )?;
    Ok(AggregatedTable {
        table: aggregated,
        source: table.id.clone(),
        partition_name: partition.name.clone(),
        ordered: partition.ordered,
        group_keys: partition.groups.iter().map(|g| g.key).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{tokenize, Corpus, Document, TokenizationRules};
    use std::collections::HashSet;

    fn tiny_corpus(bodies: &[(&str, &str, i32)]) -> Corpus {
        let docs: Vec<Document> = bodies
            .iter()
            .map(|(id, body, year)| Document {
                id: id.to_string(),
                title: format!("title {id}"),
                body: body.to_string(),
                journal: "j".into(),
                year: *year,
            })
            .collect();
        let rules = TokenizationRules {
            stopwords: ["and"].iter().map(|s| s.to_string()).collect(),
            min_doc_count: 1,
            min_total_count: 1,
            ..TokenizationRules::default()
        };
        tokenize(Corpus::new(docs, (1900, 2100)).unwrap(), &rules)
    }

    fn vocab_of(corpus: &Corpus) -> crate::corpus::Vocabulary {
        crate::corpus::build_vocabulary(
            corpus,
            &TokenizationRules {
                min_doc_count: 1,
                min_total_count: 1,
                stopwords: HashSet::new(),
                ..TokenizationRules::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn two_document_example_counts_and_margins() {
        let corpus = tiny_corpus(&[
            ("d1", "SLE and lupus; SLE.", 1994),
            ("d2", "lupus only", 1995),
        ]);
        let vocab = vocab_of(&corpus);
        let table = build_lexical_table(&corpus, &vocab).unwrap();
        // Columns are sorted: lupus, only, sle.
        assert_eq!(table.col_words, ["lupus", "only", "sle"]);
        assert_eq!(table.get(0, 0), 1); // d1 lupus
        assert_eq!(table.get(0, 2), 2); // d1 sle
        assert_eq!(table.get(1, 0), 1); // d2 lupus
        assert_eq!(table.get(1, 1), 1); // d2 only
        assert_eq!(table.row_margins, [3, 2]);
        assert_eq!(table.col_margins, [2, 1, 2]);
        assert_eq!(table.grand_total, 5);
    }

    #[test]
    fn margins_are_consistent_with_cells() {
        let corpus = tiny_corpus(&[
            ("a", "alpha beta gamma alpha", 2000),
            ("b", "beta beta delta", 2001),
            ("c", "gamma delta delta alpha", 2002),
        ]);
        let table = build_lexical_table(&corpus, &vocab_of(&corpus)).unwrap();
        let mut row_sums = vec![0u64; table.n_rows()];
        let mut col_sums = vec![0u64; table.n_cols()];
        let mut total = 0;
        for (r, c, v) in table.iter() {
            row_sums[r] += v;
            col_sums[c] += v;
            total += v;
        }
        assert_eq!(row_sums, table.row_margins);
        assert_eq!(col_sums, table.col_margins);
        assert_eq!(total, table.grand_total);
    }

    #[test]
    fn documents_without_vocabulary_words_are_excluded() {
        let corpus = tiny_corpus(&[
            ("keep1", "alpha beta alpha", 2000),
            ("drop", "zz-unique", 2001),
            ("keep2", "beta beta", 2002),
        ]);
        // Vocabulary built with thresholds that drop the hapax.
        let rules = TokenizationRules {
            min_doc_count: 2,
            min_total_count: 2,
            stopwords: HashSet::new(),
            ..TokenizationRules::default()
        };
        let vocab = crate::corpus::build_vocabulary(&corpus, &rules).unwrap();
        let table = build_lexical_table(&corpus, &vocab).unwrap();
        assert_eq!(table.row_ids, ["keep1", "keep2"]);
        assert_eq!(table.excluded_rows.len(), 1);
        assert_eq!(table.excluded_rows[0].id, "drop");
        assert!(table.row_margins.iter().all(|&m| m > 0));
    }

    #[test]
    fn empty_results_are_errors() {
        let corpus = tiny_corpus(&[("a", "alpha", 2000)]);
        let vocab = vocab_of(&corpus);
        let untokenized = Corpus::new(corpus.documents.clone(), (1900, 2100)).unwrap();
        assert!(build_lexical_table(&untokenized, &vocab).is_err());
        assert!(LexicalTable::from_counts("t", vec![], vec!["w".into()], []).is_err());
    }

    #[test]
    fn get_returns_zero_for_absent_cells_and_iteration_is_sorted() {
        let table = LexicalTable::from_counts(
            "t",
            vec!["r0".into(), "r1".into()],
            vec!["c0".into(), "c1".into(), "c2".into()],
            [(1, 2, 5), (0, 0, 1), (1, 0, 2)],
        )
        .unwrap();
        assert_eq!(table.get(0, 1), 0);
        let cells: Vec<_> = table.iter().collect();
        assert_eq!(cells, [(0, 0, 1), (1, 0, 2), (1, 2, 5)]);
        let row1: Vec<_> = table.row(1).collect();
        assert_eq!(row1, [(0, 2), (2, 5)]);
    }

    #[test]
    fn dense_copy_matches_sparse_access() {
        let table = LexicalTable::from_counts(
            "t",
            vec!["r0".into(), "r1".into()],
            vec!["c0".into(), "c1".into()],
            [(0, 0, 3), (1, 1, 4)],
        )
        .unwrap();
        let dense = table.to_dense();
        for r in 0..2 {
            for c in 0..2 {
                assert_eq!(dense[(r, c)], table.get(r, c) as f64);
            }
        }
    }

    #[test]
    fn aggregate_identity_partition_reproduces_the_table() {
        let corpus = tiny_corpus(&[("a", "alpha beta", 2000), ("b", "beta gamma gamma", 2001)]);
        let table = build_lexical_table(&corpus, &vocab_of(&corpus)).unwrap();
        let identity = Partition {
            name: "identity".into(),
            groups: table
                .row_ids
                .iter()
                .map(|id| PartitionGroup {
                    label: id.clone(),
                    members: vec![id.clone()],
                    key: None,
                })
                .collect(),
            ordered: false,
        };
        let agg = aggregate(&table, &identity).unwrap();
        assert_eq!(agg.table.row_ids, table.row_ids);
        assert_eq!(agg.table.col_margins, table.col_margins);
        for (r, c, v) in table.iter() {
            assert_eq!(agg.table.get(r, c), v);
        }
    }

    #[test]
    fn aggregate_by_year_matches_recount_and_preserves_margins() {
        let bodies: Vec<(String, String, i32)> = (0..20)
            .map(|i| {
                let year = 2000 + (i % 4);
                let body = format!("w{} w{} w{} shared shared", i % 5, (i * 3) % 5, (i * 7) % 5);
                (format!("doc{i:02}"), body, year)
            })
            .collect();
        let borrowed: Vec<(&str, &str, i32)> = bodies
            .iter()
            .map(|(id, body, year)| (id.as_str(), body.as_str(), *year))
            .collect();
        let corpus = tiny_corpus(&borrowed);
        let table = build_lexical_table(&corpus, &vocab_of(&corpus)).unwrap();
        let years = table_years(&table, &corpus).unwrap();
        let partition = Partition::by_year(&table, &years).unwrap();
        let agg = aggregate(&table, &partition).unwrap();

        assert_eq!(
            agg.table.row_ids,
            ["2000", "2001", "2002", "2003"],
            "year groups are sorted ascending"
        );
        assert_eq!(agg.table.col_margins, table.col_margins);
        assert_eq!(agg.table.grand_total, table.grand_total);

        // Brute-force recount: sum document rows year by year.
        for (g, group) in partition.groups.iter().enumerate() {
            for c in 0..table.n_cols() {
                let direct: u64 = group
                    .members
                    .iter()
                    .map(|id| {
                        let r = table.row_ids.iter().position(|x| x == id).unwrap();
                        table.get(r, c)
                    })
                    .sum();
                assert_eq!(agg.table.get(g, c), direct);
            }
        }
    }

    #[test]
    fn aggregate_composes_year_then_period() {
        let corpus = tiny_corpus(&[
            ("a", "alpha beta", 2000),
            ("b", "beta gamma", 2001),
            ("c", "gamma gamma alpha", 2002),
            ("d", "alpha alpha", 2003),
        ]);
        let table = build_lexical_table(&corpus, &vocab_of(&corpus)).unwrap();
        let years = table_years(&table, &corpus).unwrap();
        let direct = aggregate(
            &table,
            &Partition::by_year_ranges(&table, &years, &[(2000, 2001), (2002, 2003)]).unwrap(),
        )
        .unwrap();
        // Composing: aggregate by year first, then group year rows.
        let by_year = aggregate(&table, &Partition::by_year(&table, &years).unwrap()).unwrap();
        let year_rows = &by_year.table.row_ids;
        let second = Partition {
            name: "period".into(),
            groups: vec![
                PartitionGroup {
                    label: "2000-2001".into(),
                    members: year_rows[0..2].to_vec(),
                    key: Some(2000),
                },
                PartitionGroup {
                    label: "2002-2003".into(),
                    members: year_rows[2..4].to_vec(),
                    key: Some(2002),
                },
            ],
            ordered: true,
        };
        let composed = aggregate(&by_year.table, &second).unwrap();
        assert_eq!(composed.table.row_ids, direct.table.row_ids);
        for r in 0..direct.table.n_rows() {
            for c in 0..direct.table.n_cols() {
                assert_eq!(composed.table.get(r, c), direct.table.get(r, c));
            }
        }
    }

    #[test]
    fn aggregate_rejects_unknown_duplicate_and_uncovered_rows() {
        let corpus = tiny_corpus(&[("a", "alpha beta", 2000), ("b", "beta", 2001)]);
        let table = build_lexical_table(&corpus, &vocab_of(&corpus)).unwrap();

        let unknown = Partition {
            name: "p".into(),
            groups: vec![PartitionGroup {
                label: "g".into(),
                members: vec!["a".into(), "ghost".into(), "b".into()],
                key: None,
            }],
            ordered: false,
        };
        match aggregate(&table, &unknown).unwrap_err() {
            Error::Partition { message, .. } => assert!(message.contains("ghost")),
            other => panic!("expected Partition, got {other:?}"),
        }

        let duplicate = Partition {
            name: "p".into(),
            groups: vec![
                PartitionGroup {
                    label: "g1".into(),
                    members: vec!["a".into(), "b".into()],
                    key: None,
                },
                PartitionGroup {
                    label: "g2".into(),
                    members: vec!["b".into()],
                    key: None,
                },
            ],
            ordered: false,
        };
        assert!(matches!(
            aggregate(&table, &duplicate),
            Err(Error::Partition { .. })
        ));

        let uncovered = Partition {
            name: "p".into(),
            groups: vec![PartitionGroup {
                label: "g1".into(),
                members: vec!["a".into()],
                key: None,
            }],
            ordered: false,
        };
        match aggregate(&table, &uncovered).unwrap_err() {
            Error::Partition { message, .. } => assert!(message.contains('b')),
            other => panic!("expected Partition, got {other:?}"),
        }
    }

    #[test]
    fn year_range_partition_rejects_uncovered_years() {
        let corpus = tiny_corpus(&[("a", "alpha", 2000), ("b", "alpha beta", 2005)]);
        let table = build_lexical_table(&corpus, &vocab_of(&corpus)).unwrap();
        let years = table_years(&table, &corpus).unwrap();
        let err = Partition::by_year_ranges(&table, &years, &[(2000, 2003)]).unwrap_err();
        assert!(matches!(err, Error::Partition { .. }));
    }

    #[test]
    fn table_years_errors_on_unknown_row() {
        let corpus = tiny_corpus(&[("a", "alpha beta", 2000)]);
        let table =
            LexicalTable::from_counts("t", vec!["mystery".into()], vec!["w".into()], [(0, 0, 1)])
                .unwrap();
        assert!(matches!(
            table_years(&table, &corpus),
            Err(Error::MissingYear(id)) if id == "mystery"
        ));
    }
}
