//! Stratified k-fold cross-validation. Every fold refits the whole pipeline,
//! vocabulary included, on its training part only.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, MoodLabel};
use crate::error::{Error, Result};
use crate::eval::metrics::{confusion, ConfusionMatrix};
use crate::eval::roc::{roc_curve, RocCurve};
use crate::features::Vocabulary;
use crate::model::{train_tokenized, PipelineConfig};
use crate::rng::SeededRng;
use crate::text::{tokenize, StopWords, TokenStream};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    /// Ascending.
    pub train: Vec<usize>,
    /// Ascending.
    pub test: Vec<usize>,
}

/// Stratified fold assignment.
///
/// Happy indices then sad indices are each shuffled with one PRNG stream
/// seeded by `seed`. The shuffled happy indices are dealt round-robin to
/// folds 0, 1, ..., and the sad indices continue dealing from the fold after
/// the last happy one, so fold sizes differ by at most one.
pub fn kfold_indices(y: &[MoodLabel], k: usize, seed: u64) -> Result<Vec<Fold>> {
    if k < 2 {
        return Err(Error::Folds(format!("need at least 2 folds, got {k}")));
    }
    let mut by_class: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (i, l) in y.iter().enumerate() {
        by_class[l.index()].push(i);
    }
    for l in MoodLabel::ALL {
        let have = by_class[l.index()].len();
        if have < k {
            return Err(Error::Folds(format!(
                "{k} folds need at least {k} {l} samples, found {have}"
            )));
        }
    }
    let mut rng = SeededRng::new(seed);
    let mut fold_of = vec![0usize; y.len()];
    let mut next = 0usize;
    for members in &mut by_class {
        rng.shuffle(members);
        for &i in members.iter() {
            fold_of[i] = next % k;
            next += 1;
        }
    }
    Ok((0..k)
        .map(|f| {
            let (test, train): (Vec<usize>, Vec<usize>) = (0..y.len()).partition(|&i| fold_of[i] == f);
            Fold { train, test }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    #[default]
    F1,
    RocAuc,
}

impl Objective {
    pub fn as_str(self) -> &'static str {
        match self {
            Objective::F1 => "f1",
            Objective::RocAuc => "roc_auc",
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Objective {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "f1" => Ok(Objective::F1),
            "roc_auc" | "roc-auc" | "auc" => Ok(Objective::RocAuc),
            other => Err(format!("unknown objective `{other}` (expected f1 or roc_auc)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldOutcome {
    pub confusion: ConfusionMatrix,
    pub roc: RocCurve,
}

impl FoldOutcome {
    pub fn score(&self, objective: Objective) -> f64 {
        match objective {
            Objective::F1 => self.confusion.f1(),
            Objective::RocAuc => self.roc.auc,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvResult {
    pub objective: Objective,
    pub folds: Vec<FoldOutcome>,
}

impl CvResult {
    pub fn fold_scores(&self) -> Vec<f64> {
        self.folds.iter().map(|f| f.score(self.objective)).collect()
    }

    pub fn mean(&self) -> f64 {
        mean(self.folds.iter().map(|f| f.score(self.objective)))
    }

    pub fn mean_f1(&self) -> f64 {
        mean(self.folds.iter().map(|f| f.confusion.f1()))
    }

    pub fn mean_auc(&self) -> f64 {
        mean(self.folds.iter().map(|f| f.roc.auc))
    }

    pub fn curves(&self) -> Vec<RocCurve> {
        self.folds.iter().map(|f| f.roc.clone()).collect()
    }
}

fn mean(xs: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = xs.len();
    if n == 0 {
        return 0.0;
    }
    xs.sum::<f64>() / n as f64
}

pub fn cross_validate(
    corpus: &Corpus,
    cfg: &PipelineConfig,
    stopwords: &StopWords,
    k: usize,
    seed: u64,
    objective: Objective,
) -> Result<CvResult> {
    cross_validate_observed(corpus, cfg, stopwords, k, seed, objective, |_, _, _| {})
}

/// As [`cross_validate`], calling `observe(fold index, fold, fitted vocabulary)`
/// after each fold's pipeline is fit.
pub fn cross_validate_observed(
    corpus: &Corpus,
    cfg: &PipelineConfig,
    stopwords: &StopWords,
    k: usize,
    seed: u64,
    objective: Objective,
    observe: impl FnMut(usize, &Fold, &Vocabulary),
) -> Result<CvResult> {
    let labels = corpus.labels()?;
    let folds = kfold_indices(&labels, k, seed)?;
    let docs: Vec<TokenStream> = corpus
        .songs()
        .iter()
        .map(|s| tokenize(&s.lyrics, &cfg.tokenizer, stopwords))
        .collect();
    cross_validate_folds(&docs, &labels, &folds, cfg, stopwords, objective, observe)
}

/// Cross-validation over pre-tokenized documents and precomputed folds.
/// Tokenization is per-document and stateless, so sharing it across folds
/// leaks nothing; the vocabulary is rebuilt from each fold's training part.
pub fn cross_validate_folds(
    docs: &[TokenStream],
    labels: &[MoodLabel],
    folds: &[Fold],
    cfg: &PipelineConfig,
    stopwords: &StopWords,
    objective: Objective,
    mut observe: impl FnMut(usize, &Fold, &Vocabulary),
) -> Result<CvResult> {
    let mut outcomes = Vec::with_capacity(folds.len());
    for (f, fold) in folds.iter().enumerate() {
        let train_docs: Vec<TokenStream> = fold.train.iter().map(|&i| docs[i].clone()).collect();
        let train_labels: Vec<MoodLabel> = fold.train.iter().map(|&i| labels[i]).collect();
        let model = train_tokenized(&train_docs, &train_labels, cfg, stopwords)?;
        observe(f, fold, model.vocabulary());

        let test_labels: Vec<MoodLabel> = fold.test.iter().map(|&i| labels[i]).collect();
        let posteriors: Vec<_> = fold
            .test
            .iter()
            .map(|&i| model.predict_proba_tokens(&docs[i]))
            .collect();
        let predicted: Vec<MoodLabel> = posteriors.iter().map(|p| p.label()).collect();
        let scores: Vec<f64> = posteriors.iter().map(|p| p.p_happy()).collect();
        outcomes.push(FoldOutcome {
            confusion: confusion(&test_labels, &predicted)?,
            roc: roc_curve(&test_labels, &scores)?,
        });
    }
    Ok(CvResult {
        objective,
        folds: outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use MoodLabel::{Happy as H, Sad as S};

    #[test]
    fn five_folds_of_ten() {
        let y = [H, S, H, S, H, S, H, S, H, S];
        let folds = kfold_indices(&y, 5, 3).unwrap();
        assert_eq!(folds.len(), 5);
        for f in &folds {
            let happy = f.test.iter().filter(|&&i| y[i] == H).count();
            assert_eq!((f.test.len(), happy), (2, 1));
            assert_eq!(f.train.len(), 8);
        }
        let mut all: Vec<usize> = folds.iter().flat_map(|f| f.test.clone()).collect();
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
        assert_eq!(kfold_indices(&y, 5, 3).unwrap(), folds);
    }

    #[test]
    fn fold_errors() {
        assert!(kfold_indices(&[H, S, H, S], 1, 0).is_err());
        assert!(kfold_indices(&[H, S, S, S], 2, 0).is_err());
        assert_eq!(kfold_indices(&[H, S, H, S], 2, 0).unwrap().len(), 2);
    }
}
