//! Flat `key = value` configuration files.
//!
//! Lines are trimmed; blank lines and lines starting with `#` are skipped,
//! and ` #` starts a trailing comment. Keys may appear once. Grid files use
//! the same syntax with comma-separated value lists.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use lyricmood_core::bayes::{SmoothingDenominator, Variant};
use lyricmood_core::eval::{GridSearchSpec, Objective};
use lyricmood_core::{ModelKind, PipelineConfig, Scheme, TokenizerConfig, VocabBuildParams};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { key: String, line: usize },
    #[error("line {line}: key `{key}` given twice")]
    DuplicateKey { key: String, line: usize },
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("invalid value `{value}` for `{key}`: {message}")]
    InvalidValue {
        key: String,
        value: String,
        message: String,
    },
    #[error("{0}")]
    Conflict(String),
}

type Result<T> = std::result::Result<T, ConfigError>;

struct Entries {
    values: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn parse(text: &str, allowed: &[&str]) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = match raw.find(" #").or_else(|| raw.find("\t#")) {
                Some(p) => &raw[..p],
                None => raw,
            }
            .trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let (k, v) = body.split_once('=').ok_or(ConfigError::Syntax { line })?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() {
                return Err(ConfigError::Syntax { line });
            }
            if !allowed.contains(&k) {
                return Err(ConfigError::UnknownKey { key: k.into(), line });
            }
            if values.insert(k.to_string(), (line, v.to_string())).is_some() {
                return Err(ConfigError::DuplicateKey { key: k.into(), line });
            }
        }
        Ok(Entries { values })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|(_, v)| v.as_str())
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key).map(|v| parse_value(key, v)).transpose()
    }

    fn require<T: FromStr>(&self, key: &'static str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)?.ok_or(ConfigError::MissingKey(key))
    }

    fn list<T>(&self, key: &str, parse: impl Fn(&str, &str) -> Result<T>) -> Result<Option<Vec<T>>> {
        let Some(raw) = self.raw(key) else {
            return Ok(None);
        };
        let items = raw
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| parse(key, s))
            .collect::<Result<Vec<T>>>()?;
        if items.is_empty() {
            return Err(invalid(key, raw, "empty list"));
        }
        Ok(Some(items))
    }
}

fn invalid(key: &str, value: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue {
        key: key.into(),
        value: value.into(),
        message: message.into(),
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| invalid(key, value, e.to_string()))
}

/// `none` or a positive integer.
fn parse_max_features(key: &str, value: &str) -> Result<Option<usize>> {
    if value.eq_ignore_ascii_case("none") {
        Ok(None)
    } else {
        parse_value(key, value).map(Some)
    }
}

fn parse_ngram(key: &str, value: &str) -> Result<(u8, u8)> {
    let (lo, hi) = value
        .split_once('-')
        .ok_or_else(|| invalid(key, value, "expected `lo-hi`, e.g. 1-2"))?;
    let lo = parse_value(key, lo.trim())?;
    let hi = parse_value(key, hi.trim())?;
    TokenizerConfig::new(lo, hi, true, true).map_err(|e| invalid(key, value, e.to_string()))?;
    Ok((lo, hi))
}

fn parse_smoothing(key: &str, value: &str) -> Result<SmoothingDenominator> {
    match value {
        "two_outcome" => Ok(SmoothingDenominator::TwoOutcome),
        "vocab_size" => Ok(SmoothingDenominator::VocabSize),
        _ => Err(invalid(key, value, "expected two_outcome or vocab_size")),
    }
}

fn check_alpha(alpha: f64) -> Result<f64> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(alpha)
    } else {
        Err(invalid("alpha", &alpha.to_string(), "must be positive"))
    }
}

fn check_threshold(t: Option<f64>) -> Result<()> {
    match t {
        Some(t) if !(t > 0.0 && t <= 1.0) => Err(invalid("english_threshold", &t.to_string(), "must be in (0, 1]")),
        _ => Ok(()),
    }
}

const RUN_KEYS: &[&str] = &[
    "ngram_lo",
    "ngram_hi",
    "remove_stopwords",
    "stem",
    "min_df",
    "max_features",
    "model",
    "variant",
    "scheme",
    "alpha",
    "l2_normalize",
    "smoothing_denominator",
    "english_threshold",
    "train_count",
    "validation_count",
    "balance_validation",
    "folds",
    "objective",
    "seed",
];

/// Settings for `train` and `cv`.
///
/// Required: `ngram_lo`, `ngram_hi`, `remove_stopwords`, `stem`, `min_df`,
/// `alpha`, and either `model` or both `variant` and `scheme`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub pipeline: PipelineConfig,
    /// Songs at or below this English fraction are dropped before use.
    pub english_threshold: Option<f64>,
    pub train_count: Option<usize>,
    pub validation_count: Option<usize>,
    pub balance_validation: bool,
    pub folds: usize,
    pub objective: Objective,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let e = Entries::parse(text, RUN_KEYS)?;
        let tokenizer = {
            let lo: u8 = e.require("ngram_lo")?;
            let hi: u8 = e.require("ngram_hi")?;
            let remove: bool = e.require("remove_stopwords")?;
            let stem: bool = e.require("stem")?;
            TokenizerConfig::new(lo, hi, remove, stem)
                .map_err(|err| invalid("ngram_hi", &hi.to_string(), err.to_string()))?
        };
        let min_df: usize = e.require("min_df")?;
        if min_df == 0 {
            return Err(invalid("min_df", "0", "must be at least 1"));
        }
        let max_features = match e.raw("max_features") {
            Some(v) => parse_max_features("max_features", v)?,
            None => None,
        };
        if max_features == Some(0) {
            return Err(invalid("max_features", "0", "must be positive or none"));
        }
        let kind = match (e.raw("model"), e.raw("variant"), e.raw("scheme")) {
            (Some(m), None, None) => parse_value::<ModelKind>("model", m)?,
            (None, Some(v), Some(s)) => {
                let variant: Variant = parse_value("variant", v)?;
                let scheme: Scheme = parse_value("scheme", s)?;
                ModelKind::from_parts(variant, scheme).map_err(|e| ConfigError::Conflict(e.to_string()))?
            }
            (Some(_), _, _) => {
                return Err(ConfigError::Conflict(
                    "give either `model` or `variant` and `scheme`, not both".into(),
                ))
            }
            (None, None, _) => return Err(ConfigError::MissingKey("model")),
            (None, Some(_), None) => return Err(ConfigError::MissingKey("scheme")),
        };
        let alpha = check_alpha(e.require("alpha")?)?;
        let smoothing = match e.raw("smoothing_denominator") {
            Some(v) => parse_smoothing("smoothing_denominator", v)?,
            None => SmoothingDenominator::default(),
        };
        let english_threshold: Option<f64> = e.get("english_threshold")?;
        check_threshold(english_threshold)?;
        let folds = e.get("folds")?.unwrap_or(10);
        if folds < 2 {
            return Err(invalid("folds", &folds.to_string(), "must be at least 2"));
        }
        Ok(RunConfig {
            pipeline: PipelineConfig {
                tokenizer,
                vocab: VocabBuildParams { max_features, min_df },
                kind,
                alpha,
                l2_normalize: e.get("l2_normalize")?.unwrap_or(true),
                smoothing,
            },
            english_threshold,
            train_count: e.get("train_count")?,
            validation_count: e.get("validation_count")?,
            balance_validation: e.get("balance_validation")?.unwrap_or(false),
            folds,
            objective: e.get("objective")?.unwrap_or_default(),
            seed: e.get("seed")?,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read(path)?)
    }

    pub fn from_pipeline(pipeline: PipelineConfig) -> Self {
        RunConfig {
            pipeline,
            english_threshold: None,
            train_count: None,
            validation_count: None,
            balance_validation: false,
            folds: 10,
            objective: Objective::default(),
            seed: None,
        }
    }

    /// Text that [`RunConfig::parse`] reads back to an equal value.
    pub fn to_text(&self) -> String {
        let p = &self.pipeline;
        let (lo, hi) = p.tokenizer.ngram_range();
        let mut out = String::new();
        let _ = writeln!(out, "model = {}", p.kind);
        let _ = writeln!(out, "ngram_lo = {lo}");
        let _ = writeln!(out, "ngram_hi = {hi}");
        let _ = writeln!(out, "remove_stopwords = {}", p.tokenizer.remove_stopwords);
        let _ = writeln!(out, "stem = {}", p.tokenizer.stem);
        let _ = writeln!(out, "min_df = {}", p.vocab.min_df);
        match p.vocab.max_features {
            Some(m) => writeln!(out, "max_features = {m}"),
            None => writeln!(out, "max_features = none"),
        }
        .ok();
        let _ = writeln!(out, "alpha = {}", p.alpha);
        let _ = writeln!(out, "l2_normalize = {}", p.l2_normalize);
        let _ = writeln!(out, "smoothing_denominator = {}", p.smoothing.as_str());
        if let Some(t) = self.english_threshold {
            let _ = writeln!(out, "english_threshold = {t}");
        }
        if let Some(n) = self.train_count {
            let _ = writeln!(out, "train_count = {n}");
        }
        if let Some(n) = self.validation_count {
            let _ = writeln!(out, "validation_count = {n}");
        }
        let _ = writeln!(out, "balance_validation = {}", self.balance_validation);
        let _ = writeln!(out, "folds = {}", self.folds);
        let _ = writeln!(out, "objective = {}", self.objective);
        if let Some(s) = self.seed {
            let _ = writeln!(out, "seed = {s}");
        }
        out
    }
}

const GRID_KEYS: &[&str] = &[
    "model",
    "ngram_range",
    "remove_stopwords",
    "stem",
    "max_features",
    "min_df",
    "alpha",
    "l2_normalize",
    "smoothing_denominator",
    "folds",
    "objective",
    "seed",
    "english_threshold",
];

/// A grid file: every key is optional and falls back to
/// [`GridSearchSpec::default`]. List keys take comma-separated values.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFile {
    pub spec: GridSearchSpec,
    pub english_threshold: Option<f64>,
    /// Whether `seed` was set in the file.
    pub seed_given: bool,
}

impl GridFile {
    pub fn parse(text: &str) -> Result<Self> {
        let e = Entries::parse(text, GRID_KEYS)?;
        let mut spec = GridSearchSpec::default();
        if let Some(v) = e.list("model", parse_value::<ModelKind>)? {
            spec.models = v;
        }
        if let Some(v) = e.list("ngram_range", parse_ngram)? {
            spec.ngram_ranges = v;
        }
        if let Some(v) = e.list("remove_stopwords", parse_value)? {
            spec.remove_stopwords = v;
        }
        if let Some(v) = e.list("stem", parse_value)? {
            spec.stem = v;
        }
        if let Some(v) = e.list("max_features", parse_max_features)? {
            if v.contains(&Some(0)) {
                return Err(invalid("max_features", "0", "must be positive or none"));
            }
            spec.max_features = v;
        }
        if let Some(v) = e.list("min_df", parse_value::<usize>)? {
            if v.contains(&0) {
                return Err(invalid("min_df", "0", "must be at least 1"));
            }
            spec.min_df = v;
        }
        if let Some(v) = e.list("alpha", |k, v| parse_value::<f64>(k, v).and_then(check_alpha))? {
            spec.alpha = v;
        }
        if let Some(v) = e.get("l2_normalize")? {
            spec.l2_normalize = v;
        }
        if let Some(v) = e.raw("smoothing_denominator") {
            spec.smoothing = parse_smoothing("smoothing_denominator", v)?;
        }
        if let Some(v) = e.get::<usize>("folds")? {
            if v < 2 {
                return Err(invalid("folds", &v.to_string(), "must be at least 2"));
            }
            spec.folds = v;
        }
        if let Some(v) = e.get("objective")? {
            spec.objective = v;
        }
        let seed: Option<u64> = e.get("seed")?;
        if let Some(s) = seed {
            spec.seed = s;
        }
        let english_threshold = e.get("english_threshold")?;
        check_threshold(english_threshold)?;
        Ok(GridFile {
            spec,
            english_threshold,
            seed_given: seed.is_some(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read(path)?)
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.display().to_string(),
        source,
    })
}
