//! Deterministic synthetic corpora with a planted vocabulary drift.
//!
//! The generator produces a corpus whose word usage shifts smoothly
//! across years, plus one planted "early adopter" document that speaks
//! the vocabulary of the final year while being dated near the start.
//! Tests and the bundled demonstration data both come from here, so
//! generation is fully determined by the seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Corpus, Document};

/// Number of years covered by [`drift_corpus`].
pub const DRIFT_YEARS: usize = 10;
/// First year of the generated range.
pub const DRIFT_START_YEAR: i32 = 2001;
/// Documents generated per year.
pub const DRIFT_DOCS_PER_YEAR: usize = 30;
/// Number of drifting vocabulary words.
const DRIFT_WORDS: usize = 40;
/// Number of year-independent filler words.
const FILLER_WORDS: usize = 10;
/// Tokens per generated document body.
const TOKENS_PER_DOC: usize = 40;
/// Width (in year indices) of each drifting word's usage bump.
const KERNEL_SD: f64 = 1.5;
/// Share of the total sampling weight given to filler words, relative
/// to the summed drift-word weight.
const FILLER_SHARE: f64 = 0.35;

/// A generated corpus together with the planted document's identifier.
#[derive(Debug, Clone)]
pub struct DriftCorpus {
    /// The untokenized corpus (300 documents over 10 years).
    pub corpus: Corpus,
    /// Identifier of the planted early-adopter document: dated in the
    /// second year but sampled from the final year's vocabulary.
    pub pioneer_id: String,
}

/// Sampling weight of drift word `k` at year index `t`.
///
/// Each drift word prefers a point on the timeline, spread evenly from
/// the first year index to the last; usage falls off as a Gaussian
/// bump around that point.
fn drift_weight(word: usize, year_index: f64) -> f64 {
    let preferred = (DRIFT_YEARS - 1) as f64 * word as f64 / (DRIFT_WORDS - 1) as f64;
    let d = year_index - preferred;
    (-d * d / (2.0 * KERNEL_SD * KERNEL_SD)).exp()
}

/// Cumulative sampling weights over the whole vocabulary (drift words
/// first, then fillers) for a document written at `year_index`.
fn cumulative_weights(year_index: f64) -> Vec<f64> {
    let mut weights = Vec::with_capacity(DRIFT_WORDS + FILLER_WORDS);
    let mut drift_total = 0.0;
    for k in 0..DRIFT_WORDS {
        let w = drift_weight(k, year_index);
        drift_total += w;
        weights.push(w);
    }
    let filler = FILLER_SHARE * drift_total / FILLER_WORDS as f64;
    for _ in 0..FILLER_WORDS {
        weights.push(filler);
    }
    let mut cumulative = 0.0;
    for w in &mut weights {
        cumulative += *w;
        *w = cumulative;
    }
    weights
}

fn word_label(index: usize) -> String {
    if index < DRIFT_WORDS {
        format!("drift{index:02}")
    } else {
        format!("filler{}", index - DRIFT_WORDS)
    }
}

/// Generates the planted drift corpus.
///
/// 300 documents, 30 per year over 2001–2010, each 40 tokens drawn
/// from a year-dependent distribution over 40 drifting words and 10
/// fillers. The document at position 31 (`doc031`) is the planted
/// early adopter: dated 2002 but sampled from the 2010 distribution.
/// Output is fully determined by `seed`.
pub fn drift_corpus(seed: u64) -> DriftCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let journals = [
        "annals of synthesis",
        "journal of drift",
        "synthetic letters",
    ];
    let n_docs = DRIFT_YEARS * DRIFT_DOCS_PER_YEAR;
    // The early-adopter document: first document of the second year.
    let pioneer_index = DRIFT_DOCS_PER_YEAR;
    let mut documents = Vec::with_capacity(n_docs);
    for doc_index in 0..n_docs {
        let year_index = doc_index / DRIFT_DOCS_PER_YEAR;
        let sampled_year_index = if doc_index == pioneer_index {
            (DRIFT_YEARS - 1) as f64
        } else {
            year_index as f64
        };
        let cumulative = cumulative_weights(sampled_year_index);
        let total = *cumulative.last().expect("vocabulary is never empty");
        let mut tokens = Vec::with_capacity(TOKENS_PER_DOC);
        for _ in 0..TOKENS_PER_DOC {
            let draw = rng.gen_range(0.0..total);
            let word = cumulative.partition_point(|&c| c <= draw);
            tokens.push(word_label(word));
        }
        let id = format!("doc{:03}", doc_index + 1);
        documents.push(Document {
            id,
            title: format!("synthetic abstract {}", doc_index + 1),
            body: format!("{}.", tokens.join(" ")),
            journal: journals[doc_index % journals.len()].to_string(),
            year: DRIFT_START_YEAR + year_index as i32,
        });
    }
    let pioneer_id = documents[pioneer_index].id.clone();
    let corpus = Corpus::new(
        documents,
        (DRIFT_START_YEAR, DRIFT_START_YEAR + DRIFT_YEARS as i32),
    )
    .expect("generated documents are valid by construction");
    DriftCorpus { corpus, pioneer_id }
}

/// Generates a corpus with no year–vocabulary link at all: every
/// document draws its tokens uniformly from the same 50-word lexicon,
/// regardless of its year. Used to calibrate significance tests, since
/// any detected chronological structure in such a corpus is a false
/// positive. Output is fully determined by `seed`.
pub fn null_corpus(seed: u64, years: usize, docs_per_year: usize, tokens_per_doc: usize) -> Corpus {
    assert!(years >= 2 && docs_per_year >= 1 && tokens_per_doc >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let journals = [
        "annals of synthesis",
        "journal of drift",
        "synthetic letters",
    ];
    let n_docs = years * docs_per_year;
    let lexicon = DRIFT_WORDS + FILLER_WORDS;
    let mut documents = Vec::with_capacity(n_docs);
    for doc_index in 0..n_docs {
        let year_index = doc_index / docs_per_year;
        let mut tokens = Vec::with_capacity(tokens_per_doc);
        for _ in 0..tokens_per_doc {
            tokens.push(word_label(rng.gen_range(0..lexicon)));
        }
        documents.push(Document {
            id: format!("doc{:03}", doc_index + 1),
            title: format!("synthetic abstract {}", doc_index + 1),
            body: format!("{}.", tokens.join(" ")),
            journal: journals[doc_index % journals.len()].to_string(),
            year: DRIFT_START_YEAR + year_index as i32,
        });
    }
    Corpus::new(
        documents,
        (DRIFT_START_YEAR, DRIFT_START_YEAR + years as i32),
    )
    .expect("generated documents are valid by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_vocabulary, tokenize, TokenizationRules};
    use crate::lextable::build_lexical_table;

    #[test]
    fn generation_is_deterministic_for_a_seed() {
        let a = drift_corpus(42);
        let b = drift_corpus(42);
        assert_eq!(a.pioneer_id, b.pioneer_id);
        assert_eq!(a.corpus.documents, b.corpus.documents);
        let c = drift_corpus(43);
        assert_ne!(a.corpus.documents, c.corpus.documents);
    }

    #[test]
    fn corpus_shape_and_pioneer_placement() {
        let drift = drift_corpus(42);
        assert_eq!(drift.corpus.len(), 300);
        assert_eq!(drift.pioneer_id, "doc031");
        let pioneer = &drift.corpus.documents[30];
        assert_eq!(pioneer.id, drift.pioneer_id);
        assert_eq!(pioneer.year, 2002);
        let years = drift.corpus.years();
        assert_eq!(years.iter().filter(|&&y| y == 2001).count(), 30);
        assert_eq!(years.iter().filter(|&&y| y == 2010).count(), 30);
        assert_eq!(*years.iter().max().unwrap(), 2010);
    }

    #[test]
    fn vocabulary_survives_default_thresholds() {
        let drift = drift_corpus(42);
        let rules = TokenizationRules::default();
        let corpus = tokenize(drift.corpus, &rules);
        let vocab = build_vocabulary(&corpus, &rules).unwrap();
        // All 50 generated words are frequent enough to survive.
        assert_eq!(vocab.entries.len(), 50);
        let table = build_lexical_table(&corpus, &vocab).unwrap();
        assert_eq!(table.n_rows(), 300);
        assert!(table.excluded_rows.is_empty());
    }

    #[test]
    fn null_corpus_is_deterministic_and_shaped() {
        let a = null_corpus(5, 6, 10, 30);
        let b = null_corpus(5, 6, 10, 30);
        assert_eq!(a.documents, b.documents);
        assert_eq!(a.len(), 60);
        assert_eq!(a.years().iter().filter(|&&y| y == 2001).count(), 10);
        assert_eq!(*a.years().iter().max().unwrap(), 2006);
    }

    #[test]
    fn early_years_prefer_early_drift_words() {
        let drift = drift_corpus(42);
        let rules = TokenizationRules::default();
        let corpus = tokenize(drift.corpus, &rules);
        let count = |doc_range: std::ops::Range<usize>, word: &str| -> usize {
            corpus.tokens[doc_range]
                .iter()
                .flatten()
                .filter(|t| t.as_str() == word)
                .count()
        };
        // drift00 peaks in the first year, drift39 in the last.
        assert!(count(0..30, "drift00") > count(270..300, "drift00"));
        assert!(count(270..300, "drift39") > count(0..30, "drift39"));
    }
}
