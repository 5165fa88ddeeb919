//! End-to-end classifier: tokenizer settings, frozen vocabulary and fitted
//! naive Bayes parameters, plus the on-disk model format.
//!
//! # File format (version 1)
//!
//! A JSON document with four keys:
//!
//! ```text
//! {
//!   "format": "lyricmood-model",
//!   "format_version": 1,
//!   "payload_sha256": "<hex SHA-256 of the payload text>",
//!   "payload": { ... }
//! }
//! ```
//!
//! The checksum covers the exact bytes of the `payload` value as written.
//! Reals are written in scientific notation with 17 significant digits so
//! that every `f64` reads back bit-identical; non-finite values are written
//! as the strings `"inf"`, `"-inf"` or `"nan"`.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::bayes::{fit_bernoulli, fit_multinomial, NaiveBayes, Posterior, SmoothingDenominator, Variant};
use crate::corpus::{Corpus, MoodLabel};
use crate::error::{Error, Result};
use crate::features::{
    binarize, build_vocabulary, count_vector, idf_weights, tfidf_with_idf, FeatureVector, Fingerprint, Scheme,
    VocabBuildParams, Vocabulary,
};
use crate::text::{default_stopwords, tokenize, StopWords, TokenStream, TokenizerConfig};

pub const FORMAT_NAME: &str = "lyricmood-model";
pub const FORMAT_VERSION: u64 = 1;

/// The three model/feature pairings compared during model selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    BernoulliBinary,
    MultinomialTf,
    MultinomialTfIdf,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [
        ModelKind::BernoulliBinary,
        ModelKind::MultinomialTf,
        ModelKind::MultinomialTfIdf,
    ];

    pub fn variant(self) -> Variant {
        match self {
            ModelKind::BernoulliBinary => Variant::Bernoulli,
            _ => Variant::Multinomial,
        }
    }

    pub fn scheme(self) -> Scheme {
        match self {
            ModelKind::BernoulliBinary => Scheme::Binary,
            ModelKind::MultinomialTf => Scheme::Tf,
            ModelKind::MultinomialTfIdf => Scheme::TfIdf,
        }
    }

    pub fn from_parts(variant: Variant, scheme: Scheme) -> Result<Self> {
        match (variant, scheme) {
            (Variant::Bernoulli, Scheme::Binary) => Ok(ModelKind::BernoulliBinary),
            (Variant::Multinomial, Scheme::Tf) => Ok(ModelKind::MultinomialTf),
            (Variant::Multinomial, Scheme::TfIdf) => Ok(ModelKind::MultinomialTfIdf),
            _ => Err(Error::InvalidArgument(format!(
                "{variant} naive Bayes cannot be trained on {scheme} features"
            ))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::BernoulliBinary => "bernoulli-binary",
            ModelKind::MultinomialTf => "multinomial-tf",
            ModelKind::MultinomialTfIdf => "multinomial-tfidf",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                format!("unknown model `{s}` (expected bernoulli-binary, multinomial-tf or multinomial-tfidf)")
            })
    }
}

/// Everything needed to turn a labeled corpus into a [`MoodModel`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub tokenizer: TokenizerConfig,
    pub vocab: VocabBuildParams,
    pub kind: ModelKind,
    pub alpha: f64,
    /// Scale tf-idf vectors to unit length. Ignored by the other schemes.
    pub l2_normalize: bool,
    /// Bernoulli only.
    pub smoothing: SmoothingDenominator,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            tokenizer: TokenizerConfig::default(),
            vocab: VocabBuildParams::default(),
            kind: ModelKind::MultinomialTfIdf,
            alpha: 1.0,
            l2_normalize: true,
            smoothing: SmoothingDenominator::TwoOutcome,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MoodModel {
    config: PipelineConfig,
    stopwords: StopWords,
    vocab: Vocabulary,
    idf: Option<Vec<f64>>,
    classifier: NaiveBayes,
    fingerprint: OnceLock<Fingerprint>,
}

impl PartialEq for MoodModel {
    fn eq(&self, other: &Self) -> bool {
        self.config == other.config
            && self.stopwords.checksum() == other.stopwords.checksum()
            && self.vocab == other.vocab
            && self.classifier == other.classifier
    }
}

/// Tokenizes, builds a vocabulary and fits the configured model on a fully
/// labeled corpus.
pub fn train(corpus: &Corpus, cfg: &PipelineConfig, stopwords: &StopWords) -> Result<MoodModel> {
    if corpus.is_empty() {
        return Err(Error::Training("empty corpus".into()));
    }
    let labels = corpus.labels()?;
    let docs: Vec<TokenStream> = corpus
        .songs()
        .iter()
        .map(|s| tokenize(&s.lyrics, &cfg.tokenizer, stopwords))
        .collect();
    train_tokenized(&docs, &labels, cfg, stopwords)
}

/// As [`train`], from documents already tokenized with `cfg.tokenizer`.
pub fn train_tokenized(
    docs: &[TokenStream],
    labels: &[MoodLabel],
    cfg: &PipelineConfig,
    stopwords: &StopWords,
) -> Result<MoodModel> {
    let vocab = build_vocabulary(docs, &cfg.vocab, &cfg.tokenizer)?;
    let idf = (cfg.kind.scheme() == Scheme::TfIdf).then(|| idf_weights(&vocab));
    let x: Vec<FeatureVector> = docs
        .iter()
        .map(|d| vectorize(d, &vocab, cfg.kind.scheme(), idf.as_deref(), cfg.l2_normalize))
        .collect();
    let n = vocab.len();
    let classifier = match cfg.kind.variant() {
        Variant::Bernoulli => fit_bernoulli(&x, labels, n, cfg.alpha, cfg.smoothing)?,
        Variant::Multinomial => fit_multinomial(&x, labels, n, cfg.alpha)?,
    };
    Ok(MoodModel {
        config: *cfg,
        stopwords: stopwords.clone(),
        vocab,
        idf,
        classifier,
        fingerprint: OnceLock::new(),
    })
}

fn vectorize(
    doc: &TokenStream,
    vocab: &Vocabulary,
    scheme: Scheme,
    idf: Option<&[f64]>,
    l2_normalize: bool,
) -> FeatureVector {
    let counts = count_vector(doc, vocab);
    match (scheme, idf) {
        (Scheme::Binary, _) => binarize(&counts),
        (Scheme::TfIdf, Some(idf)) => tfidf_with_idf(&counts, vocab.fingerprint(), idf, l2_normalize)
            .expect("count vector built against its own vocabulary"),
        _ => counts,
    }
}

impl MoodModel {
    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn classifier(&self) -> &NaiveBayes {
        &self.classifier
    }

    pub fn stopwords(&self) -> &StopWords {
        &self.stopwords
    }

    pub fn tokenize(&self, lyrics: &str) -> TokenStream {
        tokenize(lyrics, &self.config.tokenizer, &self.stopwords)
    }

    pub fn vectorize_tokens(&self, doc: &TokenStream) -> FeatureVector {
        vectorize(
            doc,
            &self.vocab,
            self.config.kind.scheme(),
            self.idf.as_deref(),
            self.config.l2_normalize,
        )
    }

    pub fn vectorize(&self, lyrics: &str) -> FeatureVector {
        self.vectorize_tokens(&self.tokenize(lyrics))
    }

    pub fn predict_proba_tokens(&self, doc: &TokenStream) -> Posterior {
        self.classifier
            .predict_proba(&self.vectorize_tokens(doc))
            .expect("vector built against own vocabulary")
    }

    pub fn predict_proba(&self, lyrics: &str) -> Posterior {
        self.predict_proba_tokens(&self.tokenize(lyrics))
    }

    pub fn predict(&self, lyrics: &str) -> MoodLabel {
        self.predict_proba(lyrics).label()
    }

    /// SHA-256 of the serialized payload; equals `payload_sha256` in the file.
    pub fn fingerprint(&self) -> Fingerprint {
        *self
            .fingerprint
            .get_or_init(|| Fingerprint::of(self.payload_text().as_bytes()))
    }

    fn payload_text(&self) -> String {
        let payload = Payload::from_model(self);
        serde_json::to_string_pretty(&payload).expect("payload serializes")
    }

    pub fn to_file_text(&self) -> String {
        let payload = self.payload_text();
        let sha = Fingerprint::of(payload.as_bytes());
        let _ = self.fingerprint.set(sha);
        format!(
            "{{\n\"format\": \"{FORMAT_NAME}\",\n\"format_version\": {FORMAT_VERSION},\n\"payload_sha256\": \"{sha}\",\n\"payload\": {payload}\n}}\n"
        )
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_file_text()).map_err(|e| Error::io(path, e))
    }

    /// Loads a model trained with the embedded stop list.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::load_with_stopwords(path, default_stopwords())
    }

    pub fn load_with_stopwords(path: impl AsRef<Path>, stopwords: &StopWords) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_file_text(&text, stopwords)
    }

    pub fn from_file_text(text: &str, stopwords: &StopWords) -> Result<Self> {
        let env: Envelope = serde_json::from_str(text)
            .map_err(|e| Error::ModelFormat(format!("truncated or malformed model file: {e}")))?;
        if env.format != FORMAT_NAME {
            return Err(Error::ModelFormat(format!("not a model file (format `{}`)", env.format)));
        }
        if env.format_version != FORMAT_VERSION {
            return Err(Error::ModelVersion {
                found: env.format_version,
                supported: FORMAT_VERSION,
            });
        }
        let computed = Fingerprint::of(env.payload.get().as_bytes());
        if computed.to_hex() != env.payload_sha256 {
            return Err(Error::ModelChecksum {
                stored: env.payload_sha256,
                computed: computed.to_hex(),
            });
        }
        let payload: Payload = serde_json::from_str(env.payload.get())
            .map_err(|e| Error::ModelFormat(format!("payload: {e}")))?;
        let model = payload.into_model(stopwords)?;
        let _ = model.fingerprint.set(computed);
        Ok(model)
    }
}

#[derive(Deserialize)]
struct Envelope<'a> {
    format: String,
    format_version: u64,
    payload_sha256: String,
    #[serde(borrow)]
    payload: &'a RawValue,
}

/// `f64` written with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Real(f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let x = self.0;
        if x.is_finite() {
            let raw = RawValue::from_string(format!("{x:.16e}")).map_err(serde::ser::Error::custom)?;
            raw.serialize(s)
        } else if x.is_nan() {
            s.serialize_str("nan")
        } else if x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Box<RawValue> = Deserialize::deserialize(d)?;
        let text = raw.get().trim();
        let value = match text {
            "\"inf\"" => f64::INFINITY,
            "\"-inf\"" => f64::NEG_INFINITY,
            "\"nan\"" => f64::NAN,
            t => t
                .parse::<f64>()
                .map_err(|_| D::Error::custom(format!("invalid real `{t}`")))?,
        };
        Ok(Real(value))
    }
}

fn reals(v: &[f64]) -> Vec<Real> {
    v.iter().copied().map(Real).collect()
}

fn unreal(v: Vec<Real>) -> Vec<f64> {
    v.into_iter().map(|r| r.0).collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TokenizerSection {
    ngram_lo: u8,
    ngram_hi: u8,
    remove_stopwords: bool,
    stem: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VocabularySection {
    max_features: Option<usize>,
    min_df: usize,
    n_docs: usize,
    terms: Vec<String>,
    doc_freq: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Payload {
    variant: Variant,
    scheme: Scheme,
    alpha: Real,
    smoothing_denominator: SmoothingDenominator,
    l2_normalize: bool,
    tokenizer: TokenizerSection,
    stopwords_sha256: String,
    vocabulary: VocabularySection,
    classes: [MoodLabel; 2],
    log_prior: [Real; 2],
    log_param: [Vec<Real>; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    log_complement: Option<[Vec<Real>; 2]>,
}

impl Payload {
    fn from_model(m: &MoodModel) -> Self {
        let c = &m.classifier;
        let (lo, hi) = m.config.tokenizer.ngram_range();
        Payload {
            variant: c.variant(),
            scheme: c.scheme(),
            alpha: Real(c.alpha()),
            smoothing_denominator: m.config.smoothing,
            l2_normalize: m.config.l2_normalize,
            tokenizer: TokenizerSection {
                ngram_lo: lo,
                ngram_hi: hi,
                remove_stopwords: m.config.tokenizer.remove_stopwords,
                stem: m.config.tokenizer.stem,
            },
            stopwords_sha256: m.stopwords.checksum().to_string(),
            vocabulary: VocabularySection {
                max_features: m.config.vocab.max_features,
                min_df: m.config.vocab.min_df,
                n_docs: m.vocab.n_docs(),
                terms: m.vocab.terms().to_vec(),
                doc_freq: m.vocab.doc_freq().to_vec(),
            },
            classes: MoodLabel::ALL,
            log_prior: [Real(c.log_prior()[0]), Real(c.log_prior()[1])],
            log_param: [reals(&c.log_prob()[0]), reals(&c.log_prob()[1])],
            log_complement: c
                .log_neg_prob()
                .map(|neg| [reals(&neg[0]), reals(&neg[1])]),
        }
    }

    fn into_model(self, stopwords: &StopWords) -> Result<MoodModel> {
        let bad = |e: Error| Error::ModelFormat(e.to_string());
        if self.classes != MoodLabel::ALL {
            return Err(Error::ModelFormat("class order must be [happy, sad]".into()));
        }
        if self.stopwords_sha256 != stopwords.checksum() {
            return Err(Error::ModelFormat(format!(
                "model was trained with stop list {}, but the available list is {}",
                self.stopwords_sha256,
                stopwords.checksum()
            )));
        }
        let t = &self.tokenizer;
        let tokenizer = TokenizerConfig::new(t.ngram_lo, t.ngram_hi, t.remove_stopwords, t.stem).map_err(bad)?;
        let params = VocabBuildParams {
            max_features: self.vocabulary.max_features,
            min_df: self.vocabulary.min_df,
        };
        let vocab = Vocabulary::from_parts(
            self.vocabulary.terms,
            self.vocabulary.doc_freq,
            self.vocabulary.n_docs,
            tokenizer,
            params,
        )
        .map_err(bad)?;
        let kind = ModelKind::from_parts(self.variant, self.scheme).map_err(bad)?;
        let [p0, p1] = self.log_param;
        if p0.len() != vocab.len() {
            return Err(Error::ModelFormat(format!(
                "{} parameters per class for a vocabulary of {}",
                p0.len(),
                vocab.len()
            )));
        }
        let classifier = NaiveBayes::from_parts(
            self.variant,
            self.scheme,
            self.alpha.0,
            self.smoothing_denominator,
            vocab.fingerprint(),
            [self.log_prior[0].0, self.log_prior[1].0],
            [unreal(p0), unreal(p1)],
            self.log_complement.map(|[a, b]| [unreal(a), unreal(b)]),
        )
        .map_err(bad)?;
        let config = PipelineConfig {
            tokenizer,
            vocab: params,
            kind,
            alpha: self.alpha.0,
            l2_normalize: self.l2_normalize,
            smoothing: self.smoothing_denominator,
        };
        let idf = (kind.scheme() == Scheme::TfIdf).then(|| idf_weights(&vocab));
        Ok(MoodModel {
            config,
            stopwords: stopwords.clone(),
            vocab,
            idf,
            classifier,
            fingerprint: OnceLock::new(),
        })
    }
}
