//! Multi-variate Bernoulli and multinomial naive Bayes with additive
//! smoothing. All probability arithmetic happens in natural-log space.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::MoodLabel;
use crate::error::{Error, Result};
use crate::features::{FeatureVector, Fingerprint, Scheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Bernoulli,
    Multinomial,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Bernoulli => "bernoulli",
            Variant::Multinomial => "multinomial",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "bernoulli" => Ok(Variant::Bernoulli),
            "multinomial" => Ok(Variant::Multinomial),
            other => Err(format!("unknown variant `{other}` (expected bernoulli or multinomial)")),
        }
    }
}

/// Denominator of the Bernoulli estimate `(df_ij + a) / (df_j + a * d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmoothingDenominator {
    /// `d = 2`: one pseudo-count per outcome (present, absent).
    #[default]
    TwoOutcome,
    /// `d = n`, the vocabulary size. Can reach `P = 1` for a
    /// one-term vocabulary, in which case absent-term evidence is `-inf`.
    VocabSize,
}

impl SmoothingDenominator {
    pub fn as_str(self) -> &'static str {
        match self {
            SmoothingDenominator::TwoOutcome => "two_outcome",
            SmoothingDenominator::VocabSize => "vocab_size",
        }
    }
}

impl FromStr for SmoothingDenominator {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "two_outcome" => Ok(SmoothingDenominator::TwoOutcome),
            "vocab_size" => Ok(SmoothingDenominator::VocabSize),
            other => Err(format!(
                "unknown smoothing denominator `{other}` (expected two_outcome or vocab_size)"
            )),
        }
    }
}

/// Fitted class-conditional parameters, indexed `[class][feature]` with
/// classes in [`MoodLabel::ALL`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct NaiveBayes {
    variant: Variant,
    scheme: Scheme,
    alpha: f64,
    smoothing: SmoothingDenominator,
    n_features: usize,
    vocab: Fingerprint,
    log_prior: [f64; 2],
    /// `ln P(x_i | class)`.
    log_prob: [Vec<f64>; 2],
    /// `ln (1 - P(x_i | class))`, Bernoulli only.
    log_neg_prob: Option<[Vec<f64>; 2]>,
    /// `sum_i ln(1 - P(x_i | class))`, the score of an empty Bernoulli document
    /// minus the prior.
    absent_total: [f64; 2],
}

/// Per-class log scores and normalized probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Posterior {
    pub log_scores: [f64; 2],
    pub probs: [f64; 2],
}

impl Posterior {
    /// Normalizes log scores with log-sum-exp. If every score is `-inf` the
    /// classes are reported as equally likely.
    pub fn from_log_scores(log_scores: [f64; 2]) -> Self {
        let m = log_scores[0].max(log_scores[1]);
        if !m.is_finite() {
            return Posterior {
                log_scores,
                probs: [0.5, 0.5],
            };
        }
        let e = [(log_scores[0] - m).exp(), (log_scores[1] - m).exp()];
        let z = e[0] + e[1];
        Posterior {
            log_scores,
            probs: [e[0] / z, e[1] / z],
        }
    }

    pub fn prob(&self, label: MoodLabel) -> f64 {
        self.probs[label.index()]
    }

    pub fn p_happy(&self) -> f64 {
        self.probs[0]
    }

    pub fn label(&self) -> MoodLabel {
        argmax(self.log_scores)
    }
}

/// Highest-scoring class; an exact tie goes to `Happy`.
pub fn argmax(scores: [f64; 2]) -> MoodLabel {
    if scores[0] >= scores[1] {
        MoodLabel::Happy
    } else {
        MoodLabel::Sad
    }
}

struct Stats {
    class_docs: [usize; 2],
    vocab: Fingerprint,
}

fn check_training_set(
    x: &[FeatureVector],
    y: &[MoodLabel],
    n_features: usize,
    alpha: f64,
    schemes: &[Scheme],
) -> Result<Stats> {
    if x.is_empty() {
        return Err(Error::Training("no training documents".into()));
    }
    if x.len() != y.len() {
        return Err(Error::Training(format!("{} vectors but {} labels", x.len(), y.len())));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Training(format!("alpha must be positive, got {alpha}")));
    }
    if n_features == 0 {
        return Err(Error::Training("empty feature space".into()));
    }
    let vocab = x[0].vocab_fingerprint();
    for fv in x {
        if fv.vocab_fingerprint() != vocab {
            return Err(Error::FingerprintMismatch {
                expected: vocab,
                found: fv.vocab_fingerprint(),
            });
        }
        if !schemes.contains(&fv.scheme()) {
            return Err(Error::SchemeMismatch(format!(
                "{} vector in a training set that needs {:?}",
                fv.scheme(),
                schemes
            )));
        }
        if let Some(&(i, _)) = fv.entries().last() {
            if i >= n_features {
                return Err(Error::Training(format!("feature index {i} >= {n_features}")));
            }
        }
    }
    let mut class_docs = [0usize; 2];
    for l in y {
        class_docs[l.index()] += 1;
    }
    for l in MoodLabel::ALL {
        if class_docs[l.index()] == 0 {
            return Err(Error::Training(format!("no {l} documents in training set")));
        }
    }
    Ok(Stats { class_docs, vocab })
}

fn log_priors(class_docs: [usize; 2]) -> [f64; 2] {
    let n = (class_docs[0] + class_docs[1]) as f64;
    [
        (class_docs[0] as f64 / n).ln(),
        (class_docs[1] as f64 / n).ln(),
    ]
}

/// Bernoulli estimate `P(x_i | j) = (df_ij + alpha) / (df_j + d * alpha)`.
pub fn fit_bernoulli(
    x: &[FeatureVector],
    y: &[MoodLabel],
    n_features: usize,
    alpha: f64,
    smoothing: SmoothingDenominator,
) -> Result<NaiveBayes> {
    let stats = check_training_set(x, y, n_features, alpha, &[Scheme::Binary])?;
    let mut df = [vec![0usize; n_features], vec![0usize; n_features]];
    for (fv, l) in x.iter().zip(y) {
        for &(i, _) in fv.entries() {
            df[l.index()][i] += 1;
        }
    }
    let outcomes = match smoothing {
        SmoothingDenominator::TwoOutcome => 2.0,
        SmoothingDenominator::VocabSize => n_features as f64,
    };
    let mut log_prob = [Vec::new(), Vec::new()];
    let mut log_neg_prob = [Vec::new(), Vec::new()];
    for c in 0..2 {
        let denom = stats.class_docs[c] as f64 + outcomes * alpha;
        log_prob[c] = df[c].iter().map(|&d| ((d as f64 + alpha) / denom).ln()).collect();
        log_neg_prob[c] = df[c]
            .iter()
            .map(|&d| ((denom - d as f64 - alpha) / denom).ln())
            .collect();
    }
    Ok(NaiveBayes::assemble(
        Variant::Bernoulli,
        Scheme::Binary,
        alpha,
        smoothing,
        stats.vocab,
        log_priors(stats.class_docs),
        log_prob,
        Some(log_neg_prob),
    ))
}

/// Multinomial estimate `P(x_i | j) = (sum_d w_di + alpha) / (sum_d N_d + alpha * n)`,
/// summing (possibly fractional) weights as given.
pub fn fit_multinomial(
    x: &[FeatureVector],
    y: &[MoodLabel],
    n_features: usize,
    alpha: f64,
) -> Result<NaiveBayes> {
    let stats = check_training_set(x, y, n_features, alpha, &[Scheme::Tf, Scheme::TfIdf])?;
    let scheme = x[0].scheme();
    if let Some(fv) = x.iter().find(|fv| fv.scheme() != scheme) {
        return Err(Error::SchemeMismatch(format!(
            "mixed {} and {} vectors in training set",
            scheme,
            fv.scheme()
        )));
    }
    let mut mass = [vec![0.0f64; n_features], vec![0.0f64; n_features]];
    for (fv, l) in x.iter().zip(y) {
        for &(i, w) in fv.entries() {
            mass[l.index()][i] += w;
        }
    }
    let mut log_prob = [Vec::new(), Vec::new()];
    for c in 0..2 {
        let total: f64 = mass[c].iter().sum();
        let denom = total + alpha * n_features as f64;
        log_prob[c] = mass[c].iter().map(|&m| ((m + alpha) / denom).ln()).collect();
    }
    Ok(NaiveBayes::assemble(
        Variant::Multinomial,
        scheme,
        alpha,
        SmoothingDenominator::default(),
        stats.vocab,
        log_priors(stats.class_docs),
        log_prob,
        None,
    ))
}

impl NaiveBayes {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        variant: Variant,
        scheme: Scheme,
        alpha: f64,
        smoothing: SmoothingDenominator,
        vocab: Fingerprint,
        log_prior: [f64; 2],
        log_prob: [Vec<f64>; 2],
        log_neg_prob: Option<[Vec<f64>; 2]>,
    ) -> Self {
        let absent_total = match &log_neg_prob {
            Some(neg) => [neg[0].iter().sum(), neg[1].iter().sum()],
            None => [0.0, 0.0],
        };
        NaiveBayes {
            variant,
            scheme,
            alpha,
            smoothing,
            n_features: log_prob[0].len(),
            vocab,
            log_prior,
            log_prob,
            log_neg_prob,
            absent_total,
        }
    }

    /// Rebuilds a model from stored parameters, checking shapes.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        variant: Variant,
        scheme: Scheme,
        alpha: f64,
        smoothing: SmoothingDenominator,
        vocab: Fingerprint,
        log_prior: [f64; 2],
        log_prob: [Vec<f64>; 2],
        log_neg_prob: Option<[Vec<f64>; 2]>,
    ) -> Result<Self> {
        let n = log_prob[0].len();
        if log_prob[1].len() != n {
            return Err(Error::InvalidArgument("parameter rows differ in length".into()));
        }
        match (variant, &log_neg_prob, scheme) {
            (Variant::Bernoulli, Some(neg), Scheme::Binary) => {
                if neg[0].len() != n || neg[1].len() != n {
                    return Err(Error::InvalidArgument("complement rows differ in length".into()));
                }
            }
            (Variant::Multinomial, None, Scheme::Tf | Scheme::TfIdf) => {}
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "inconsistent parameters for a {variant} model on {scheme} features"
                )))
            }
        }
        Ok(Self::assemble(
            variant,
            scheme,
            alpha,
            smoothing,
            vocab,
            log_prior,
            log_prob,
            log_neg_prob,
        ))
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn smoothing(&self) -> SmoothingDenominator {
        self.smoothing
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn vocab_fingerprint(&self) -> Fingerprint {
        self.vocab
    }

    pub fn classes(&self) -> [MoodLabel; 2] {
        MoodLabel::ALL
    }

    pub fn log_prior(&self) -> [f64; 2] {
        self.log_prior
    }

    pub fn log_prob(&self) -> &[Vec<f64>; 2] {
        &self.log_prob
    }

    pub fn log_neg_prob(&self) -> Option<&[Vec<f64>; 2]> {
        self.log_neg_prob.as_ref()
    }

    /// Joint log score `ln P(x | j) + ln P(j)` per class.
    pub fn log_posterior(&self, x: &FeatureVector) -> Result<[f64; 2]> {
        if x.vocab_fingerprint() != self.vocab {
            return Err(Error::FingerprintMismatch {
                expected: self.vocab,
                found: x.vocab_fingerprint(),
            });
        }
        if x.scheme() != self.scheme {
            return Err(Error::SchemeMismatch(format!(
                "model trained on {} features, got {}",
                self.scheme,
                x.scheme()
            )));
        }
        if let Some(&(i, _)) = x.entries().last() {
            if i >= self.n_features {
                return Err(Error::InvalidArgument(format!("feature index {i} >= {}", self.n_features)));
            }
        }
        let mut scores = self.log_prior;
        match &self.log_neg_prob {
            Some(neg) => {
                // absent terms contribute ln(1-p); present terms swap it for ln p
                for c in 0..2 {
                    let present: f64 = x
                        .entries()
                        .iter()
                        .map(|&(i, _)| self.log_prob[c][i] - neg[c][i])
                        .sum();
                    scores[c] += self.absent_total[c] + present;
                }
            }
            None => {
                for (score, row) in scores.iter_mut().zip(&self.log_prob) {
                    *score += x.entries().iter().map(|&(i, w)| w * row[i]).sum::<f64>();
                }
            }
        }
        Ok(scores)
    }

    pub fn predict(&self, x: &FeatureVector) -> Result<MoodLabel> {
        Ok(argmax(self.log_posterior(x)?))
    }

    pub fn predict_proba(&self, x: &FeatureVector) -> Result<Posterior> {
        Ok(Posterior::from_log_scores(self.log_posterior(x)?))
    }
}
