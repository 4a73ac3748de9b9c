//! Project configuration: defaults, `key = value` config files, and
//! command-line overrides, merged in that order of precedence.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use chronotext::corpus::{CorpusFormat, ThresholdMode};

/// A configuration problem: unreadable file, unknown key, malformed
/// value, or a violated invariant. Reported before any stage runs.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Effective settings for a pipeline run.
#[derive(Debug, Clone)]
pub struct ProjectConfig {
    /// Corpus file. Has no default; every stage needs one.
    pub corpus: Option<PathBuf>,
    /// Corpus file format.
    pub format: CorpusFormat,
    /// Optional stopword list (one word per line); `None` uses the
    /// built-in English list.
    pub stopwords: Option<PathBuf>,
    /// Minimum number of distinct documents a word must appear in.
    pub min_doc_count: u32,
    /// Minimum total occurrences a word must have.
    pub min_total_count: u64,
    /// Whether a word must pass both thresholds or either one.
    pub threshold_mode: ThresholdMode,
    /// Number of factorial axes to retain.
    pub axes: usize,
    /// Number of periods for segmentation.
    pub periods: usize,
    /// Permutation-test replications.
    pub replications: usize,
    /// Random seed for the permutation test.
    pub seed: u64,
    /// Significance level for characterization tests.
    pub alpha: f64,
    /// Output directory for result files.
    pub out: PathBuf,
}

impl Default for ProjectConfig {
    fn default() -> Self {
        ProjectConfig {
            corpus: None,
            format: CorpusFormat::JsonLines,
            stopwords: None,
            min_doc_count: 5,
            min_total_count: 10,
            threshold_mode: ThresholdMode::Both,
            axes: 2,
            periods: 3,
            replications: 999,
            seed: 42,
            alpha: 0.05,
            out: PathBuf::from("out"),
        }
    }
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub corpus: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub axes: Option<usize>,
    pub periods: Option<usize>,
    pub replications: Option<usize>,
    pub seed: Option<u64>,
    pub alpha: Option<f64>,
    pub out: Option<PathBuf>,
}

/// Builds the effective configuration: defaults, then the config file
/// (if given), then command-line overrides; validates the result.
pub fn load(
    config_path: Option<&Path>,
    overrides: &Overrides,
) -> Result<ProjectConfig, ConfigError> {
    let mut config = ProjectConfig::default();
    if let Some(path) = config_path {
        let text = fs::read_to_string(path).map_err(|e| {
            ConfigError(format!("cannot read config file `{}`: {e}", path.display()))
        })?;
        parse_into(&mut config, &text)?;
    }
    apply_overrides(&mut config, overrides);
    validate(&config)?;
    Ok(config)
}

/// Parses `key = value` lines into `config`. Blank lines and lines
/// starting with `#` are ignored.
fn parse_into(config: &mut ProjectConfig, text: &str) -> Result<(), ConfigError> {
    for (index, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let number = index + 1;
        let (key, value) = line.split_once('=').ok_or_else(|| {
            ConfigError(format!(
                "config line {number}: expected `key = value`, got `{line}`"
            ))
        })?;
        apply_key(config, key.trim(), value.trim(), number)?;
    }
    Ok(())
}

fn apply_key(
    config: &mut ProjectConfig,
    key: &str,
    value: &str,
    line: usize,
) -> Result<(), ConfigError> {
    fn parse<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        value.parse().map_err(|e| {
            ConfigError(format!(
                "config line {line}: invalid value `{value}` for `{key}`: {e}"
            ))
        })
    }

    match key {
        "corpus" => config.corpus = Some(PathBuf::from(value)),
        "format" => config.format = parse_format(value, line)?,
        "stopwords" => config.stopwords = Some(PathBuf::from(value)),
        "min_doc_count" => config.min_doc_count = parse(key, value, line)?,
        "min_total_count" => config.min_total_count = parse(key, value, line)?,
        "threshold_mode" => config.threshold_mode = match value {
            "both" => ThresholdMode::Both,
            "either" => ThresholdMode::Either,
            other => return Err(ConfigError(format!(
                "config line {line}: `threshold_mode` must be `both` or `either`, got `{other}`"
            ))),
        },
        "axes" => config.axes = parse(key, value, line)?,
        "periods" => config.periods = parse(key, value, line)?,
        "replications" => config.replications = parse(key, value, line)?,
        "seed" => config.seed = parse(key, value, line)?,
        "alpha" => config.alpha = parse(key, value, line)?,
        "out" => config.out = PathBuf::from(value),
        other => {
            return Err(ConfigError(format!(
                "config line {line}: unknown key `{other}`"
            )));
        }
    }
    Ok(())
}

fn parse_format(value: &str, line: usize) -> Result<CorpusFormat, ConfigError> {
    match value {
        "jsonl" => Ok(CorpusFormat::JsonLines),
        "csv" => Ok(CorpusFormat::Delimited { delimiter: b',' }),
        "tsv" => Ok(CorpusFormat::Delimited { delimiter: b'\t' }),
        other => Err(ConfigError(format!(
            "config line {line}: `format` must be `jsonl`, `csv`, or `tsv`, got `{other}`"
        ))),
    }
}

fn apply_overrides(config: &mut ProjectConfig, overrides: &Overrides) {
    if let Some(path) = &overrides.corpus {
        config.corpus = Some(path.clone());
    }
    if let Some(path) = &overrides.stopwords {
        config.stopwords = Some(path.clone());
    }
    if let Some(axes) = overrides.axes {
        config.axes = axes;
    }
    if let Some(periods) = overrides.periods {
        config.periods = periods;
    }
    if let Some(replications) = overrides.replications {
        config.replications = replications;
    }
    if let Some(seed) = overrides.seed {
        config.seed = seed;
    }
    if let Some(alpha) = overrides.alpha {
        config.alpha = alpha;
    }
    if let Some(out) = &overrides.out {
        config.out = out.clone();
    }
}

fn validate(config: &ProjectConfig) -> Result<(), ConfigError> {
    let corpus = config.corpus.as_ref().ok_or_else(|| {
        ConfigError("no corpus configured; pass --corpus or set `corpus` in a config file".into())
    })?;
    if !corpus.is_file() {
        return Err(ConfigError(format!(
            "corpus file `{}` does not exist",
            corpus.display()
        )));
    }
    if let Some(stopwords) = &config.stopwords {
        if !stopwords.is_file() {
            return Err(ConfigError(format!(
                "stopword file `{}` does not exist",
                stopwords.display()
            )));
        }
    }
    if config.axes < 1 {
        return Err(ConfigError("`axes` must be at least 1".into()));
    }
    if config.periods < 2 {
        return Err(ConfigError(format!(
            "`periods` must be at least 2, got {}",
            config.periods
        )));
    }
    if config.replications < 99 {
        return Err(ConfigError(format!(
            "`replications` must be at least 99, got {}",
            config.replications
        )));
    }
    if !(config.alpha.is_finite() && 0.0 < config.alpha && config.alpha < 1.0) {
        return Err(ConfigError(format!(
            "`alpha` must lie strictly between 0 and 1, got {}",
            config.alpha
        )));
    }
    Ok(())
}

impl ProjectConfig {
    /// The corpus path; callers run after validation, so it is set.
    pub fn corpus_path(&self) -> &Path {
        self.corpus
            .as_deref()
            .expect("validated config has a corpus")
    }

    /// Short label for the configured corpus format.
    pub fn format_label(&self) -> &'static str {
        match self.format {
            CorpusFormat::JsonLines => "jsonl",
            CorpusFormat::Delimited { delimiter: b',' } => "csv",
            CorpusFormat::Delimited { delimiter: b'\t' } => "tsv",
            CorpusFormat::Delimited { .. } => "delimited",
        }
    }

    /// All scalar settings as sorted key/value pairs, for manifests.
    pub fn parameter_map(&self) -> std::collections::BTreeMap<String, String> {
        let mode = match self.threshold_mode {
            ThresholdMode::Both => "both",
            ThresholdMode::Either => "either",
        };
        [
            ("format", self.format_label().to_string()),
            ("min_doc_count", self.min_doc_count.to_string()),
            ("min_total_count", self.min_total_count.to_string()),
            ("threshold_mode", mode.to_string()),
            ("axes", self.axes.to_string()),
            ("periods", self.periods.to_string()),
            ("replications", self.replications.to_string()),
            ("seed", self.seed.to_string()),
            ("alpha", self.alpha.to_string()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }
}
