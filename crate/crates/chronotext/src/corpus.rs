//! Corpus ingestion: loading dated documents, tokenizing them, and
//! building a frequency-filtered vocabulary.
//!
//! A corpus is an ordered collection of documents, each carrying an id,
//! a title, a body of text, a journal (or any source label), and a
//! publication year. Tokenization extracts maximal runs of Unicode
//! letters and digits, keeping hyphens that sit between two such
//! characters (`b-cell` stays one token), optionally lowercases, and
//! removes stopwords. The vocabulary keeps the words frequent enough to
//! carry statistical signal; everything else is dropped before the
//! lexical table is built.

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

// ---------- documents ----------

/// One dated document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    /// Unique identifier.
    pub id: String,
    /// Title (kept for reports; not analyzed).
    pub title: String,
    /// The analyzed text. Serialized as `abstract` in JSON-lines files;
    /// `body` is accepted as an alias on input.
    #[serde(rename = "abstract", alias = "body")]
    pub body: String,
    /// Source label (journal, venue, collection...).
    pub journal: String,
    /// Publication year.
    pub year: i32,
}

/// A corpus: ordered documents plus, once [`tokenize`] has run, one
/// token sequence per document.
#[derive(Debug, Clone)]
pub struct Corpus {
    /// Documents in input order.
    pub documents: Vec<Document>,
    /// Per-document token sequences, parallel to `documents`. Empty
    /// until [`tokenize`] has been applied.
    pub tokens: Vec<Vec<String>>,
    /// Total token occurrences across all documents after stopword
    /// removal (vocabulary frequency filtering does not change it).
    pub token_total: usize,
}

impl Corpus {
    /// Builds an untokenized corpus after validating the documents.
    pub fn new(documents: Vec<Document>, year_range: (i32, i32)) -> Result<Self> {
        let mut seen = HashSet::new();
        for doc in &documents {
            if !seen.insert(doc.id.clone()) {
                return Err(Error::DuplicateId(doc.id.clone()));
            }
            if doc.year < year_range.0 || doc.year > year_range.1 {
                return Err(Error::YearOutOfRange {
                    id: doc.id.clone(),
                    year: doc.year,
                    min: year_range.0,
                    max: year_range.1,
                });
            }
            if doc.body.trim().is_empty() {
                return Err(Error::EmptyBody(doc.id.clone()));
            }
        }
        Ok(Corpus {
            documents,
            tokens: Vec::new(),
            token_total: 0,
        })
    }

    /// Whether [`tokenize`] has been applied.
    pub fn is_tokenized(&self) -> bool {
        self.tokens.len() == self.documents.len() && !self.documents.is_empty()
    }

    /// Number of documents.
    pub fn len(&self) -> usize {
        self.documents.len()
    }

    /// Whether the corpus holds no documents.
    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// The year of every document, in document order.
    pub fn years(&self) -> Vec<i32> {
        self.documents.iter().map(|d| d.year).collect()
    }
}

// ---------- loading ----------

/// On-disk corpus formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    /// Delimiter-separated values with a header row naming the columns
    /// `id`, `title`, `abstract` (or `body`), `journal`, `year`.
    Delimited {
        /// Field separator, e.g. `b','` or `b'\t'`.
        delimiter: u8,
    },
    /// One JSON object per line with keys `id`, `title`, `abstract`
    /// (or `body`), `journal`, `year`.
    JsonLines,
}

/// Options controlling [`load_corpus`].
#[derive(Debug, Clone)]
pub struct LoadOptions {
    /// File format.
    pub format: CorpusFormat,
    /// Inclusive range of acceptable publication years.
    pub year_range: (i32, i32),
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            format: CorpusFormat::JsonLines,
            year_range: (1900, 2100),
        }
    }
}

/// Loads a corpus from a file, preserving document order.
///
/// Fails on unreadable paths, malformed records (reported with their
/// 1-based line number), duplicate ids, out-of-range years, and empty
/// bodies.
pub fn load_corpus(path: &Path, options: &LoadOptions) -> Result<Corpus> {
    let file = File::open(path)?;
    load_corpus_from_reader(file, options)
}

/// Same as [`load_corpus`] but from any reader (useful for tests and
/// in-memory corpora).
pub fn load_corpus_from_reader(reader: impl Read, options: &LoadOptions) -> Result<Corpus> {
    let documents = match options.format {
        CorpusFormat::JsonLines => read_json_lines(reader)?,
        CorpusFormat::Delimited { delimiter } => read_delimited(reader, delimiter)?,
    };
    Corpus::new(documents, options.year_range)
}

fn read_json_lines(reader: impl Read) -> Result<Vec<Document>> {
    let mut documents = Vec::new();
    for (index, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let doc: Document = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: index + 1,
            message: e.to_string(),
        })?;
        documents.push(doc);
    }
    Ok(documents)
}

fn read_delimited(reader: impl Read, delimiter: u8) -> Result<Vec<Document>> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .from_reader(reader);
    let headers = csv_reader.headers()?.clone();
    let find = |names: &[&str]| -> Option<usize> {
        headers
            .iter()
            .position(|h| names.contains(&h.trim().to_ascii_lowercase().as_str()))
    };
    let missing = |name: &str| Error::Parse {
        line: 1,
        message: format!("missing required column `{name}` in header"),
    };
    let id_col = find(&["id"]).ok_or_else(|| missing("id"))?;
    let title_col = find(&["title"]).ok_or_else(|| missing("title"))?;
    let body_col = find(&["abstract", "body"]).ok_or_else(|| missing("abstract"))?;
    let journal_col = find(&["journal"]).ok_or_else(|| missing("journal"))?;
    let year_col = find(&["year"]).ok_or_else(|| missing("year"))?;

    let mut documents = Vec::new();
    for (index, record) in csv_reader.records().enumerate() {
        // Header occupies line 1; data records start at line 2.
        let line = index + 2;
        let record = record.map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        let field = |col: usize, name: &str| -> Result<String> {
            record
                .get(col)
                .map(str::to_string)
                .ok_or_else(|| Error::Parse {
                    line,
                    message: format!("missing field `{name}`"),
                })
        };
        let year_text = field(year_col, "year")?;
        let year: i32 = year_text.trim().parse().map_err(|_| Error::Parse {
            line,
            message: format!("invalid year `{year_text}`"),
        })?;
        documents.push(Document {
            id: field(id_col, "id")?,
            title: field(title_col, "title")?,
            body: field(body_col, "abstract")?,
            journal: field(journal_col, "journal")?,
            year,
        });
    }
    Ok(documents)
}

// ---------- tokenization ----------

/// How to split text into tokens and which words to keep.
#[derive(Debug, Clone)]
pub struct TokenizationRules {
    /// Lowercase every token (and stopword) before further processing.
    pub lowercase: bool,
    /// Words removed outright during tokenization.
    pub stopwords: HashSet<String>,
    /// Drop tokens made only of digits.
    pub drop_numeric: bool,
    /// A word must appear in at least this many documents...
    pub min_doc_count: u32,
    /// ...and at least this many times overall to enter the vocabulary
    /// (see `threshold_mode` for the exact combination rule).
    pub min_total_count: u64,
    /// How the two frequency thresholds combine.
    pub threshold_mode: ThresholdMode,
}

/// Combination rule for the vocabulary frequency thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdMode {
    /// Keep a word only if it meets **both** thresholds (default).
    Both,
    /// Keep a word if it meets **either** threshold.
    Either,
}

impl Default for TokenizationRules {
    fn default() -> Self {
        TokenizationRules {
            lowercase: true,
            stopwords: default_stopwords(),
            drop_numeric: false,
            min_doc_count: 5,
            min_total_count: 10,
            threshold_mode: ThresholdMode::Both,
        }
    }
}

/// The built-in English stopword list (prepositions, conjunctions,
/// personal pronouns, demonstratives).
pub fn default_stopwords() -> HashSet<String> {
    parse_stopword_lines(include_str!("stopwords_en.txt").lines())
}

/// Loads a stopword file: one word per line, `#` starts a comment,
/// blank lines ignored.
pub fn load_stopwords(path: &Path) -> Result<HashSet<String>> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_stopword_lines(text.lines()))
}

fn parse_stopword_lines<'a>(lines: impl Iterator<Item = &'a str>) -> HashSet<String> {
    lines
        .map(|line| line.split('#').next().unwrap_or("").trim())
        .filter(|word| !word.is_empty())
        .map(str::to_string)
        .collect()
}

/// Splits raw text into tokens: maximal runs of Unicode letters and
/// digits, plus `-` when it sits between two such characters.
pub fn tokenize_text(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut chars = text.chars().peekable();
    while let Some(ch) = chars.next() {
        if ch.is_alphanumeric() {
            current.push(ch);
        } else if ch == '-'
            && !current.is_empty()
            && chars.peek().is_some_and(|next| next.is_alphanumeric())
        {
            current.push('-');
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// Tokenizes every document of the corpus under `rules`, filling
/// `corpus.tokens` and recomputing `corpus.token_total` as the
/// post-stopword occurrence count.
///
/// Tokenization is deterministic: the same corpus and rules always
/// produce the same sequences. Documents whose text reduces to nothing
/// keep an empty token list (they are excluded later, when the lexical
/// table drops all-zero rows).
pub fn tokenize(mut corpus: Corpus, rules: &TokenizationRules) -> Corpus {
    let stopwords: HashSet<String> = if rules.lowercase {
        rules.stopwords.iter().map(|w| w.to_lowercase()).collect()
    } else {
        rules.stopwords.clone()
    };
    let mut token_total = 0usize;
    let tokens: Vec<Vec<String>> = corpus
        .documents
        .iter()
        .map(|doc| {
            let doc_tokens: Vec<String> = tokenize_text(&doc.body)
                .into_iter()
                .map(|t| if rules.lowercase { t.to_lowercase() } else { t })
                .filter(|t| !stopwords.contains(t))
                .filter(|t| !(rules.drop_numeric && t.chars().all(char::is_numeric)))
                .collect();
            token_total += doc_tokens.len();
            doc_tokens
        })
        .collect();
    corpus.tokens = tokens;
    corpus.token_total = token_total;
    corpus
}

// ---------- vocabulary ----------

/// One vocabulary word with its corpus frequencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VocabEntry {
    /// The word itself.
    pub word: String,
    /// Number of documents containing the word at least once.
    pub doc_count: u32,
    /// Total occurrences across the corpus.
    pub total_count: u64,
}

/// The retained vocabulary, sorted lexicographically by word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    /// Entries sorted by `word`.
    pub entries: Vec<VocabEntry>,
}

impl Vocabulary {
    /// Number of retained words.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Whether no word was retained.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Looks a word up by binary search.
    pub fn get(&self, word: &str) -> Option<&VocabEntry> {
        self.entries
            .binary_search_by(|e| e.word.as_str().cmp(word))
            .ok()
            .map(|i| &self.entries[i])
    }

    /// Index of a word among the sorted entries.
    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.entries
            .binary_search_by(|e| e.word.as_str().cmp(word))
            .ok()
    }

    /// The retained words in sorted order.
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.word.as_str())
    }
}

/// Counts word frequencies over a tokenized corpus and keeps the words
/// passing the frequency thresholds in `rules`.
///
/// Errors if the corpus has not been tokenized or if no word survives.
pub fn build_vocabulary(corpus: &Corpus, rules: &TokenizationRules) -> Result<Vocabulary> {
    if !corpus.is_tokenized() {
        return Err(Error::InvalidParameter(
            "corpus must be tokenized before building a vocabulary".into(),
        ));
    }
    let mut counts: BTreeMap<&str, (u32, u64)> = BTreeMap::new();
    for doc_tokens in &corpus.tokens {
        let mut seen_in_doc: HashSet<&str> = HashSet::new();
        for token in doc_tokens {
            let entry = counts.entry(token.as_str()).or_insert((0, 0));
            entry.1 += 1;
            if seen_in_doc.insert(token.as_str()) {
                entry.0 += 1;
            }
        }
    }
    let entries: Vec<VocabEntry> = counts
        .into_iter()
        .filter(|&(_, (doc_count, total_count))| {
            let doc_ok = doc_count >= rules.min_doc_count;
            let total_ok = total_count >= rules.min_total_count;
            match rules.threshold_mode {
                ThresholdMode::Both => doc_ok && total_ok,
                ThresholdMode::Either => doc_ok || total_ok,
            }
        })
        .map(|(word, (doc_count, total_count))| VocabEntry {
            word: word.to_string(),
            doc_count,
            total_count,
        })
        .collect();
    if entries.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    Ok(Vocabulary { entries })
}

/// Distinct word count of a tokenized corpus before frequency
/// filtering (stopwords already removed).
pub fn distinct_word_count(corpus: &Corpus) -> usize {
    let mut words: HashSet<&str> = HashSet::new();
    for doc_tokens in &corpus.tokens {
        for token in doc_tokens {
            words.insert(token.as_str());
        }
    }
    words.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(id: &str, body: &str, journal: &str, year: i32) -> Document {
        Document {
            id: id.into(),
            title: format!("title {id}"),
            body: body.into(),
            journal: journal.into(),
            year,
        }
    }

    fn rules_with(stopwords: &[&str]) -> TokenizationRules {
        TokenizationRules {
            stopwords: stopwords.iter().map(|s| s.to_string()).collect(),
            min_doc_count: 1,
            min_total_count: 1,
            ..TokenizationRules::default()
        }
    }

    #[test]
    fn tokenize_text_splits_on_punctuation_and_keeps_inner_hyphens() {
        assert_eq!(
            tokenize_text("SLE and lupus; SLE."),
            ["SLE", "and", "lupus", "SLE"]
        );
        assert_eq!(tokenize_text("B-Cell dsDNA"), ["B-Cell", "dsDNA"]);
        assert_eq!(tokenize_text("a--b"), ["a", "b"]);
        assert_eq!(tokenize_text("-x y- z-1"), ["x", "y", "z-1"]);
        assert_eq!(tokenize_text(""), Vec::<String>::new());
        assert_eq!(tokenize_text("(anti-dsDNA)"), ["anti-dsDNA"]);
    }

    #[test]
    fn tokenize_lowercases_and_removes_stopwords() {
        let corpus = Corpus::new(
            vec![doc("d1", "SLE and lupus; SLE.", "j", 2000)],
            (1900, 2100),
        )
        .unwrap();
        let corpus = tokenize(corpus, &rules_with(&["and"]));
        assert_eq!(corpus.tokens[0], ["sle", "lupus", "sle"]);
        assert_eq!(corpus.token_total, 3);
    }

    #[test]
    fn tokenize_respects_case_sensitive_mode() {
        let corpus = Corpus::new(vec![doc("d1", "The THE the", "j", 2000)], (1900, 2100)).unwrap();
        let mut rules = rules_with(&["the"]);
        rules.lowercase = false;
        let corpus = tokenize(corpus, &rules);
        assert_eq!(corpus.tokens[0], ["The", "THE"]);
    }

    #[test]
    fn tokenize_can_drop_numeric_tokens() {
        let corpus = Corpus::new(
            vec![doc("d1", "12 patients in 2004, il-6 high", "j", 2000)],
            (1900, 2100),
        )
        .unwrap();
        let mut rules = rules_with(&["in"]);
        rules.drop_numeric = true;
        let corpus = tokenize(corpus, &rules);
        assert_eq!(corpus.tokens[0], ["patients", "il-6", "high"]);
    }

    #[test]
    fn tokenize_keeps_numbers_by_default() {
        let corpus = Corpus::new(vec![doc("d1", "12 patients", "j", 2000)], (1900, 2100)).unwrap();
        let corpus = tokenize(corpus, &rules_with(&[]));
        assert_eq!(corpus.tokens[0], ["12", "patients"]);
    }

    #[test]
    fn load_json_lines_preserves_order() {
        let data = concat!(
            r#"{"id":"A1","title":"t1","abstract":"first body","journal":"J1","year":1994}"#,
            "\n",
            r#"{"id":"A2","title":"t2","abstract":"second body","journal":"J2","year":1995}"#,
            "\n",
            r#"{"id":"A3","title":"t3","abstract":"third body","journal":"J1","year":1996}"#,
            "\n",
        );
        let corpus = load_corpus_from_reader(data.as_bytes(), &LoadOptions::default()).unwrap();
        let ids: Vec<&str> = corpus.documents.iter().map(|d| d.id.as_str()).collect();
        assert_eq!(ids, ["A1", "A2", "A3"]);
        assert_eq!(corpus.documents[1].year, 1995);
    }

    #[test]
    fn load_json_lines_accepts_body_alias() {
        let data = r#"{"id":"A1","title":"t","body":"text here","journal":"J","year":2001}"#;
        let corpus = load_corpus_from_reader(data.as_bytes(), &LoadOptions::default()).unwrap();
        assert_eq!(corpus.documents[0].body, "text here");
    }

    #[test]
    fn load_rejects_duplicate_id_naming_it() {
        let data = concat!(
            r#"{"id":"A1","title":"t","abstract":"x y","journal":"J","year":1994}"#,
            "\n",
            r#"{"id":"A1","title":"t","abstract":"z w","journal":"J","year":1995}"#,
        );
        let err = load_corpus_from_reader(data.as_bytes(), &LoadOptions::default()).unwrap_err();
        match err {
            Error::DuplicateId(id) => assert_eq!(id, "A1"),
            other => panic!("expected DuplicateId, got {other:?}"),
        }
    }

    #[test]
    fn load_rejects_year_out_of_range() {
        let data = r#"{"id":"A1","title":"t","abstract":"x","journal":"J","year":1850}"#;
        let err = load_corpus_from_reader(data.as_bytes(), &LoadOptions::default()).unwrap_err();
        assert!(matches!(err, Error::YearOutOfRange { year: 1850, .. }));
    }

    #[test]
    fn load_rejects_empty_body() {
        let data = r#"{"id":"A9","title":"t","abstract":"   ","journal":"J","year":1994}"#;
        let err = load_corpus_from_reader(data.as_bytes(), &LoadOptions::default()).unwrap_err();
        match err {
            Error::EmptyBody(id) => assert_eq!(id, "A9"),
            other => panic!("expected EmptyBody, got {other:?}"),
        }
    }

    #[test]
    fn load_reports_malformed_json_with_line_number() {
        let data = concat!(
            r#"{"id":"A1","title":"t","abstract":"x","journal":"J","year":1994}"#,
            "\n",
            "not json at all\n",
        );
        let err = load_corpus_from_reader(data.as_bytes(), &LoadOptions::default()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected Parse, got {other:?}"),
        }
    }

    #[test]
    fn load_delimited_maps_header_columns() {
        let data = "id\ttitle\tabstract\tjournal\tyear\nA1\tt1\tsome text\tJ1\t1994\nA2\tt2\tmore text\tJ2\t1995\n";
        let options = LoadOptions {
            format: CorpusFormat::Delimited { delimiter: b'\t' },
            ..LoadOptions::default()
        };
        let corpus = load_corpus_from_reader(data.as_bytes(), &options).unwrap();
        assert_eq!(corpus.documents.len(), 2);
        assert_eq!(corpus.documents[0].body, "some text");
        assert_eq!(corpus.documents[1].year, 1995);
    }

    #[test]
    fn load_delimited_reports_missing_column() {
        let data = "id,title,journal,year\nA1,t,J,1994\n";
        let options = LoadOptions {
            format: CorpusFormat::Delimited { delimiter: b',' },
            ..LoadOptions::default()
        };
        let err = load_corpus_from_reader(data.as_bytes(), &options).unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 1);
                assert!(message.contains("abstract"), "message: {message}");
            }
            other => panic!("expected Parse, got {other:?}"),
        }
    }

    #[test]
    fn load_delimited_reports_bad_year_with_line() {
        let data = "id,title,abstract,journal,year\nA1,t,x,J,199X\n";
        let options = LoadOptions {
            format: CorpusFormat::Delimited { delimiter: b',' },
            ..LoadOptions::default()
        };
        let err = load_corpus_from_reader(data.as_bytes(), &options).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected Parse, got {other:?}"),
        }
    }

    #[test]
    fn vocabulary_requires_both_thresholds_by_default() {
        // One word appears 12 times across 3 documents: passes the total
        // threshold (12 >= 10) but not the document threshold (3 < 5).
        // Another appears once in each of 6 documents plus 3 extra
        // occurrences (9 total): passes the document threshold (6 >= 5)
        // but not the total threshold (9 < 10).
        let mut docs = Vec::new();
        for i in 0..3 {
            docs.push(doc(&format!("x{i}"), "alpha alpha alpha alpha", "j", 2000));
        }
        for i in 0..6 {
            let body = if i < 3 {
                "beta beta filler"
            } else {
                "beta filler"
            };
            docs.push(doc(&format!("y{i}"), body, "j", 2000));
        }
        let corpus = tokenize(Corpus::new(docs, (1900, 2100)).unwrap(), &rules_with(&[]));
        let rules = TokenizationRules {
            min_doc_count: 5,
            min_total_count: 10,
            stopwords: HashSet::new(),
            ..TokenizationRules::default()
        };
        let err = build_vocabulary(&corpus, &rules);
        // alpha: (3 docs, 12 total) out; beta: (6 docs, 9 total) out;
        // filler: (6 docs, 6 total) out. Nothing survives.
        assert!(matches!(err, Err(Error::EmptyVocabulary)));

        let either = TokenizationRules {
            threshold_mode: ThresholdMode::Either,
            ..rules
        };
        let vocab = build_vocabulary(&corpus, &either).unwrap();
        let words: Vec<&str> = vocab.words().collect();
        assert_eq!(words, ["alpha", "beta", "filler"]);
    }

    #[test]
    fn vocabulary_counts_match_brute_force_recount() {
        // 50 synthetic documents; one planted word occurs twice in each
        // of 10 documents, so its entry must be (10 docs, 20 total).
        let mut docs = Vec::new();
        for i in 0..50 {
            let body = if i % 5 == 0 {
                format!("planted planted common{} word{}", i % 7, i % 11)
            } else {
                format!("common{} word{} extra{}", i % 7, i % 11, i % 3)
            };
            docs.push(doc(&format!("d{i}"), &body, "j", 2000));
        }
        let corpus = tokenize(Corpus::new(docs, (1900, 2100)).unwrap(), &rules_with(&[]));
        let vocab = build_vocabulary(
            &corpus,
            &TokenizationRules {
                min_doc_count: 1,
                min_total_count: 1,
                stopwords: HashSet::new(),
                ..TokenizationRules::default()
            },
        )
        .unwrap();
        let planted = vocab.get("planted").expect("planted word retained");
        assert_eq!((planted.doc_count, planted.total_count), (10, 20));

        // Brute-force recount straight from the token sequences.
        for entry in &vocab.entries {
            let mut doc_count = 0u32;
            let mut total = 0u64;
            for tokens in &corpus.tokens {
                let occurrences = tokens.iter().filter(|t| *t == &entry.word).count() as u64;
                total += occurrences;
                if occurrences > 0 {
                    doc_count += 1;
                }
            }
            assert_eq!((entry.doc_count, entry.total_count), (doc_count, total));
        }
    }

    #[test]
    fn vocabulary_is_sorted_and_indexable() {
        let corpus = tokenize(
            Corpus::new(
                vec![doc("d", "zeta alpha mid alpha", "j", 2000)],
                (1900, 2100),
            )
            .unwrap(),
            &rules_with(&[]),
        );
        let vocab = build_vocabulary(
            &corpus,
            &TokenizationRules {
                min_doc_count: 1,
                min_total_count: 1,
                stopwords: HashSet::new(),
                ..TokenizationRules::default()
            },
        )
        .unwrap();
        let words: Vec<&str> = vocab.words().collect();
        assert_eq!(words, ["alpha", "mid", "zeta"]);
        assert_eq!(vocab.index_of("mid"), Some(1));
        assert_eq!(vocab.get("absent"), None);
    }

    #[test]
    fn build_vocabulary_requires_tokenized_corpus() {
        let corpus = Corpus::new(vec![doc("d", "text", "j", 2000)], (1900, 2100)).unwrap();
        assert!(build_vocabulary(&corpus, &TokenizationRules::default()).is_err());
    }

    #[test]
    fn stopword_parsing_skips_comments_and_blanks() {
        let set = parse_stopword_lines("word1\n# comment\n\n word2 # trailing\n".lines());
        assert_eq!(set.len(), 2);
        assert!(set.contains("word1") && set.contains("word2"));
    }

    #[test]
    fn default_stopwords_cover_the_announced_classes() {
        let set = default_stopwords();
        for word in ["of", "and", "they", "those", "with", "whether"] {
            assert!(set.contains(word), "missing `{word}`");
        }
        // Content words must never be stopworded by default.
        assert!(!set.contains("lupus"));
    }
}
