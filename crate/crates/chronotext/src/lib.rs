#![forbid(unsafe_code)]
#![doc = r#"
Chronological text mining.

This crate analyses how the vocabulary of a dated document collection
evolves over time. The pipeline is:

1. [`corpus`] — load dated documents, tokenize them, and build a
   frequency-filtered vocabulary.
2. [`lextable`] — cross documents and words into a sparse lexical table
   with margins, and aggregate it by document groups (years, periods,
   journals).
3. [`ca`] — correspondence analysis of a lexical table under the
   chi-square metric, with contributions, squared cosines, and
   meta-key/meta-document extraction.
4. [`mfact`] — multiple factor analysis of the word-frequency group
   juxtaposed with a standardized publication-year column, partial
   (per-viewpoint) document coordinates, category projections, year
   trajectories, and a permutation test of the first eigenvalue.
5. [`chrono`] — exact hypergeometric characterization tests
   (characteristic words, characteristic increments, chronological
   characteristic words), period segmentation, and pioneer-document
   detection.
6. [`report`] / [`export`] — corpus summaries, deterministic SVG factor
   maps, and CSV exports of every result table.

All analyses are deterministic: random-number use is seeded, iteration
orders are fixed, and exports are byte-stable across runs.
"#]

pub mod ca;
pub mod chrono;
pub mod corpus;
pub mod error;
pub mod export;
mod factor;
pub mod lextable;
pub mod mfact;
pub mod report;
pub mod synthetic;

pub use error::{Error, Result};
