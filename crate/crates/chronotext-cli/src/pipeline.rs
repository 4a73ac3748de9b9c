//! Pipeline stages: each one recomputes what it needs from the corpus,
//! writes its result files into the output directory, and records a
//! manifest with input hashes so downstream stages can verify
//! freshness.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write as _};
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use chronotext::ca::{self, MetaSet, MetaThreshold, PointSet};
use chronotext::chrono::{self, PioneerRule};
use chronotext::corpus::{
    build_vocabulary, load_corpus, load_stopwords, tokenize, Corpus, LoadOptions,
    TokenizationRules, Vocabulary,
};
use chronotext::export;
use chronotext::lextable::{aggregate, build_lexical_table, table_years, LexicalTable, Partition};
use chronotext::mfact::{self, MfactResult, Viewpoint};
use chronotext::report;

use crate::config::ProjectConfig;

/// One pipeline stage, named after its subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Ingest,
    Ca,
    Mfact,
    Permtest,
    Periods,
    Characterize,
    Pioneers,
    Report,
}

impl Stage {
    /// Every stage, in dependency order; `all` runs them in this order.
    pub const ALL: [Stage; 8] = [
        Stage::Ingest,
        Stage::Ca,
        Stage::Mfact,
        Stage::Permtest,
        Stage::Periods,
        Stage::Characterize,
        Stage::Pioneers,
        Stage::Report,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Ca => "ca",
            Stage::Mfact => "mfact",
            Stage::Permtest => "permtest",
            Stage::Periods => "periods",
            Stage::Characterize => "characterize",
            Stage::Pioneers => "pioneers",
            Stage::Report => "report",
        }
    }
}

/// What went wrong, mapped to the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    /// Unreadable or malformed input, or a missing upstream artifact.
    Data,
    /// Degenerate or invalid input to an analysis.
    Analysis,
}

/// A stage error carrying the name of the stage that failed.
#[derive(Debug)]
pub struct StageFailure {
    pub stage: &'static str,
    pub kind: FailureKind,
    pub message: String,
}

impl StageFailure {
    fn data(stage: Stage, message: String) -> Self {
        StageFailure {
            stage: stage.name(),
            kind: FailureKind::Data,
            message,
        }
    }

    fn from_error(stage: Stage, error: chronotext::Error) -> Self {
        StageFailure {
            stage: stage.name(),
            kind: classify(&error),
            message: error.to_string(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.kind {
            FailureKind::Data => 3,
            FailureKind::Analysis => 4,
        }
    }
}

impl fmt::Display for StageFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage `{}` failed: {}", self.stage, self.message)
    }
}

impl std::error::Error for StageFailure {}

fn classify(error: &chronotext::Error) -> FailureKind {
    use chronotext::Error;
    match error {
        Error::Io(_)
        | Error::Csv(_)
        | Error::Parse { .. }
        | Error::DuplicateId(_)
        | Error::YearOutOfRange { .. }
        | Error::EmptyBody(_)
        | Error::EmptyVocabulary
        | Error::EmptyTable(_)
        | Error::ZeroMargin(_)
        | Error::MissingYear(_) => FailureKind::Data,
        Error::Partition { .. }
        | Error::ConstantYear
        | Error::InvalidParameter(_)
        | Error::InvalidQuery(_)
        | Error::Numerical(_)
        | Error::EmptyPlot(_) => FailureKind::Analysis,
    }
}

/// Runs one stage end to end.
pub fn run(stage: Stage, config: &ProjectConfig) -> Result<(), StageFailure> {
    fs::create_dir_all(&config.out).map_err(|e| {
        StageFailure::data(
            stage,
            format!(
                "cannot create output directory `{}`: {e}",
                config.out.display()
            ),
        )
    })?;
    let ingested = ingest_in_memory(config).map_err(|e| StageFailure::from_error(stage, e))?;
    let lift = |e| StageFailure::from_error(stage, e);
    match stage {
        Stage::Ingest => stage_ingest(config, &ingested).map_err(lift)?,
        Stage::Ca => stage_ca(config, &ingested).map_err(lift)?,
        Stage::Mfact => stage_mfact(config, &ingested).map_err(lift)?,
        Stage::Permtest => stage_permtest(config, &ingested).map_err(lift)?,
        Stage::Periods => stage_periods(config, &ingested).map_err(lift)?,
        Stage::Characterize => stage_characterize(config, &ingested)?,
        Stage::Pioneers => stage_pioneers(config, &ingested).map_err(lift)?,
        Stage::Report => stage_report(config, &ingested).map_err(lift)?,
    }
    println!(
        "{}: wrote result files to `{}`",
        stage.name(),
        config.out.display()
    );
    Ok(())
}

/// Runs every stage in dependency order.
pub fn run_all(config: &ProjectConfig) -> Result<(), StageFailure> {
    for stage in Stage::ALL {
        run(stage, config)?;
    }
    Ok(())
}

/// Everything the stages derive from the corpus file. Recomputed per
/// run: at the intended corpus scale this is cheap, and it keeps every
/// stage a pure function of the corpus plus the settings.
struct Ingested {
    corpus: Corpus,
    vocabulary: Vocabulary,
    table: LexicalTable,
    years: Vec<i32>,
}

fn ingest_in_memory(config: &ProjectConfig) -> chronotext::Result<Ingested> {
    let options = LoadOptions {
        format: config.format,
        ..LoadOptions::default()
    };
    let raw = load_corpus(config.corpus_path(), &options)?;
    let mut rules = TokenizationRules::default();
    rules.min_doc_count = config.min_doc_count;
    rules.min_total_count = config.min_total_count;
    rules.threshold_mode = config.threshold_mode;
    if let Some(path) = &config.stopwords {
        rules.stopwords = load_stopwords(path)?;
    }
    let corpus = tokenize(raw, &rules);
    let vocabulary = build_vocabulary(&corpus, &rules)?;
    let table = build_lexical_table(&corpus, &vocabulary)?;
    let years = table_years(&table, &corpus)?;
    Ok(Ingested {
        corpus,
        vocabulary,
        table,
        years,
    })
}

fn years_f64(ingested: &Ingested) -> Vec<f64> {
    ingested.years.iter().map(|&y| f64::from(y)).collect()
}

fn compute_mfact(config: &ProjectConfig, ingested: &Ingested) -> chronotext::Result<MfactResult> {
    mfact::mfact(&ingested.table, &years_f64(ingested), config.axes)
}

// ---------- artifact and manifest plumbing ----------

/// Writes one result file through a buffered writer.
fn artifact<F>(out: &Path, name: &str, write: F) -> chronotext::Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> chronotext::Result<()>,
{
    let file = File::create(out.join(name))?;
    let mut writer = BufWriter::new(file);
    write(&mut writer)?;
    writer.flush()?;
    Ok(())
}

fn sha256_hex(path: &Path) -> std::io::Result<String> {
    let bytes = fs::read(path)?;
    let digest = Sha256::digest(&bytes);
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

/// Stage manifest: input hashes plus the effective settings, with no
/// timestamps, so reruns are byte-identical and downstream stages can
/// verify freshness.
#[derive(Serialize)]
struct Manifest<'a> {
    stage: &'a str,
    tool_version: &'a str,
    inputs: &'a BTreeMap<String, String>,
    parameters: BTreeMap<String, String>,
}

fn write_manifest(
    config: &ProjectConfig,
    stage: &str,
    extra_inputs: &[(&str, String)],
) -> chronotext::Result<()> {
    let mut inputs = BTreeMap::new();
    inputs.insert("corpus".to_string(), sha256_hex(config.corpus_path())?);
    let stopwords = match &config.stopwords {
        Some(path) => sha256_hex(path)?,
        None => "builtin".to_string(),
    };
    inputs.insert("stopwords".to_string(), stopwords);
    for (name, hash) in extra_inputs {
        inputs.insert((*name).to_string(), hash.clone());
    }
    let manifest = Manifest {
        stage,
        tool_version: env!("CARGO_PKG_VERSION"),
        inputs: &inputs,
        parameters: config.parameter_map(),
    };
    let mut text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| chronotext::Error::InvalidParameter(format!("manifest encoding: {e}")))?;
    text.push('\n');
    fs::write(config.out.join(format!("{stage}.manifest.json")), text)?;
    Ok(())
}

fn fmt_f64(value: f64) -> String {
    format!("{value}")
}

// ---------- stages ----------

fn stage_ingest(config: &ProjectConfig, ing: &Ingested) -> chronotext::Result<()> {
    let out = &config.out;
    artifact(out, "vocabulary.csv", |w| {
        export::write_vocabulary_csv(w, &ing.vocabulary)
    })?;
    artifact(out, "table.csv", |w| export::write_table_csv(w, &ing.table))?;
    artifact(out, "excluded.csv", |w| {
        export::write_excluded_csv(w, &ing.table.excluded_rows)
    })?;
    write_manifest(config, "ingest", &[])
}

fn stage_ca(config: &ProjectConfig, ing: &Ingested) -> chronotext::Result<()> {
    let out = &config.out;
    let result = ca::correspondence_analysis(&ing.table, config.axes)?;
    artifact(out, "ca_eigenvalues.csv", |w| {
        export::write_eigenvalues_csv(w, &result.eigenvalues, result.total_inertia)
    })?;
    artifact(out, "ca_documents.csv", |w| {
        export::write_ca_rows_csv(w, &result)
    })?;
    artifact(out, "ca_words.csv", |w| {
        export::write_ca_cols_csv(w, &result)
    })?;

    let mut metakeys: Vec<MetaSet> = Vec::new();
    let mut metadocs: Vec<MetaSet> = Vec::new();
    for axis in 0..result.eigenvalues.len() {
        let (pos, neg) = ca::extract_meta(
            &result,
            axis,
            PointSet::Columns,
            MetaThreshold::AverageMultiple(1.0),
        )?;
        metakeys.push(pos);
        metakeys.push(neg);
        let (pos, neg) = ca::extract_meta(
            &result,
            axis,
            PointSet::Rows,
            MetaThreshold::AverageMultiple(1.0),
        )?;
        metadocs.push(pos);
        metadocs.push(neg);
    }
    artifact(out, "ca_metakeys.csv", |w| {
        export::write_meta_csv(w, &metakeys)
    })?;
    artifact(out, "ca_metadocs.csv", |w| {
        export::write_meta_csv(w, &metadocs)
    })?;
    write_manifest(config, "ca", &[])
}

fn stage_mfact(config: &ProjectConfig, ing: &Ingested) -> chronotext::Result<()> {
    let out = &config.out;
    let result = compute_mfact(config, ing)?;
    artifact(out, "mfact_eigenvalues.csv", |w| {
        export::write_eigenvalues_csv(w, &result.eigenvalues, result.total_inertia)
    })?;
    artifact(out, "mfact_documents.csv", |w| {
        export::write_mfact_rows_csv(w, &result)
    })?;
    artifact(out, "mfact_words.csv", |w| {
        export::write_mfact_cols_csv(w, &result)
    })?;
    artifact(out, "mfact_groups.csv", |w| {
        export::write_mfact_groups_csv(w, &result)
    })?;

    let mut stats: Vec<(String, String)> = vec![
        ("axes_retained".into(), result.eigenvalues.len().to_string()),
        ("total_inertia".into(), fmt_f64(result.total_inertia)),
    ];
    if let Some(&lambda1) = result.eigenvalues.first() {
        stats.push(("lambda_1".into(), fmt_f64(lambda1)));
    }
    if let Some(corr) = result.axis_year_correlation {
        stats.push(("axis1_year_correlation".into(), fmt_f64(corr)));
    }
    stats.push(("warnings".into(), result.warnings.join(" | ")));
    artifact(out, "mfact_stats.csv", |w| {
        export::write_key_values_csv(w, &stats)
    })?;

    let labels: Vec<String> = ing.years.iter().map(|y| y.to_string()).collect();
    let categories = mfact::project_categories(&result, "year", &labels, Viewpoint::Global)?;
    artifact(out, "year_categories.csv", |w| {
        export::write_categories_csv(w, &categories)
    })?;

    let trajectory = mfact::year_trajectory(&result, &ing.years)?;
    artifact(out, "trajectory.csv", |w| {
        export::write_trajectory_csv(w, &trajectory)
    })?;
    artifact(out, "trajectory_gaps.csv", |w| {
        export::write_trajectory_gaps_csv(w, &trajectory)
    })?;
    write_manifest(config, "mfact", &[])
}

fn stage_permtest(config: &ProjectConfig, ing: &Ingested) -> chronotext::Result<()> {
    let out = &config.out;
    let result = mfact::permutation_test(
        &ing.table,
        &years_f64(ing),
        config.replications,
        config.seed,
    )?;
    artifact(out, "permutation_summary.csv", |w| {
        export::write_permutation_summary_csv(w, &result)
    })?;
    artifact(out, "null_distribution.csv", |w| {
        export::write_null_distribution_csv(w, &result)
    })?;
    write_manifest(config, "permtest", &[])
}

fn stage_periods(config: &ProjectConfig, ing: &Ingested) -> chronotext::Result<()> {
    let out = &config.out;
    let result = compute_mfact(config, ing)?;
    let trajectory = mfact::year_trajectory(&result, &ing.years)?;
    let ranges = chrono::segment_year_ranges(&trajectory, config.periods)?;
    artifact(out, "periods.csv", |w| {
        export::write_periods_csv(w, &ranges, &ing.years)
    })?;
    write_manifest(config, "periods", &[])
}

fn stage_characterize(config: &ProjectConfig, ing: &Ingested) -> Result<(), StageFailure> {
    let stage = Stage::Characterize;
    let out = &config.out;

    let periods_path = out.join("periods.csv");
    if !periods_path.is_file() {
        return Err(StageFailure::data(
            stage,
            format!(
                "missing artifact `{}`: run the `periods` stage first",
                periods_path.display()
            ),
        ));
    }
    let corpus_hash = sha256_hex(config.corpus_path())
        .map_err(|e| StageFailure::data(stage, format!("cannot hash corpus file: {e}")))?;
    let manifest_path = out.join("periods.manifest.json");
    let recorded_hash = fs::read_to_string(&manifest_path)
        .ok()
        .and_then(|text| serde_json::from_str::<serde_json::Value>(&text).ok())
        .and_then(|json| {
            json.get("inputs")?
                .get("corpus")?
                .as_str()
                .map(str::to_string)
        });
    match recorded_hash {
        Some(hash) if hash == corpus_hash => {}
        Some(_) => {
            return Err(StageFailure::data(
                stage,
                "stale artifact `periods.csv`: the corpus changed since the `periods` stage ran; \
                 run `periods` again"
                    .into(),
            ));
        }
        None => {
            return Err(StageFailure::data(
                stage,
                format!(
                    "missing or unreadable manifest `{}`: run the `periods` stage first",
                    manifest_path.display()
                ),
            ));
        }
    }

    let periods_hash = sha256_hex(&periods_path)
        .map_err(|e| StageFailure::data(stage, format!("cannot hash periods file: {e}")))?;
    (|| -> chronotext::Result<()> {
        let ranges = export::read_period_ranges_csv(File::open(&periods_path)?)?;
        let partition = Partition::by_year_ranges(&ing.table, &ing.years, &ranges)?;
        let agg = aggregate(&ing.table, &partition)?;

        let words = chrono::characteristic_words(&agg, config.alpha)?;
        let increments = chrono::characteristic_increments(&agg, config.alpha)?;
        let assignments = chrono::chronological_characteristic_words(&agg, config.alpha)?;

        artifact(out, "characteristic_words.csv", |w| {
            export::write_characteristic_words_csv(w, &words)
        })?;
        artifact(out, "increments.csv", |w| {
            export::write_increments_csv(w, &increments)
        })?;
        artifact(out, "chronological_words.csv", |w| {
            export::write_chrono_assignments_csv(w, &assignments)
        })?;
        write_manifest(config, "characterize", &[("periods.csv", periods_hash)])
    })()
    .map_err(|e| StageFailure::from_error(stage, e))
}

fn stage_pioneers(config: &ProjectConfig, ing: &Ingested) -> chronotext::Result<()> {
    let out = &config.out;
    let result = compute_mfact(config, ing)?;
    let report = chrono::pioneer_scores(&result, &ing.years, &PioneerRule::default())?;
    artifact(out, "pioneers.csv", |w| {
        export::write_pioneers_csv(w, &report)
    })?;
    artifact(out, "recent_documents.csv", |w| {
        export::write_recent_csv(w, &report)
    })?;
    write_manifest(config, "pioneers", &[])
}

fn stage_report(config: &ProjectConfig, ing: &Ingested) -> chronotext::Result<()> {
    let out = &config.out;
    let summary = report::summarize(&ing.corpus, &ing.vocabulary)?;

    let entries: Vec<(String, String)> = vec![
        ("documents".into(), summary.documents.to_string()),
        ("token_total".into(), summary.token_total.to_string()),
        (
            "vocabulary_before".into(),
            summary.vocabulary_before.to_string(),
        ),
        (
            "vocabulary_after".into(),
            summary.vocabulary_after.to_string(),
        ),
    ];
    artifact(out, "summary.csv", |w| {
        export::write_key_values_csv(w, &entries)
    })?;
    artifact(out, "documents_per_year.csv", |w| {
        export::write_year_counts_csv(w, &summary.per_year)
    })?;
    artifact(out, "documents_per_journal.csv", |w| {
        export::write_journal_counts_csv(w, &summary.per_journal)
    })?;

    let ca_result = ca::correspondence_analysis(&ing.table, config.axes)?;
    report::render_svg(&report::ca_word_map(&ca_result), out.join("ca_words.svg"))?;
    report::render_svg(
        &report::ca_document_map(&ca_result),
        out.join("ca_documents.svg"),
    )?;

    let m = compute_mfact(config, ing)?;
    report::render_svg(&report::mfact_word_map(&m), out.join("mfact_words.svg"))?;
    let trajectory = mfact::year_trajectory(&m, &ing.years)?;
    report::render_svg(
        &report::trajectory_plot(&trajectory, &m),
        out.join("trajectory.svg"),
    )?;
    let pioneers = chrono::pioneer_scores(&m, &ing.years, &PioneerRule::default())?;
    report::render_svg(&report::pioneer_plot(&pioneers), out.join("pioneers.svg"))?;

    report::render_svg(&report::year_bar_chart(&summary), out.join("years.svg"))?;
    report::render_svg(
        &report::journal_bar_chart(&summary),
        out.join("journals.svg"),
    )?;
    write_manifest(config, "report", &[])
}
