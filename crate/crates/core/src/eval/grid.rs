//! Exhaustive grid search over preprocessing and model settings, each
//! combination scored by stratified cross-validation.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::bayes::SmoothingDenominator;
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::eval::cv::{cross_validate_folds, kfold_indices, CvResult, Objective};
use crate::features::VocabBuildParams;
use crate::model::{ModelKind, PipelineConfig};
use crate::text::{tokenize, StopWords, TokenStream, TokenizerConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct GridSearchSpec {
    pub models: Vec<ModelKind>,
    pub ngram_ranges: Vec<(u8, u8)>,
    pub remove_stopwords: Vec<bool>,
    pub stem: Vec<bool>,
    pub max_features: Vec<Option<usize>>,
    pub min_df: Vec<usize>,
    pub alpha: Vec<f64>,
    pub l2_normalize: bool,
    pub smoothing: SmoothingDenominator,
    pub folds: usize,
    pub seed: u64,
    pub objective: Objective,
}

impl Default for GridSearchSpec {
    fn default() -> Self {
        GridSearchSpec {
            models: ModelKind::ALL.to_vec(),
            ngram_ranges: vec![(1, 1)],
            remove_stopwords: vec![true, false],
            stem: vec![true],
            max_features: vec![None],
            min_df: vec![1],
            alpha: vec![0.1, 1.0, 10.0],
            l2_normalize: true,
            smoothing: SmoothingDenominator::TwoOutcome,
            folds: 10,
            seed: 42,
            objective: Objective::F1,
        }
    }
}

impl GridSearchSpec {
    pub fn combination_count(&self) -> usize {
        self.models.len()
            * self.ngram_ranges.len()
            * self.remove_stopwords.len()
            * self.stem.len()
            * self.max_features.len()
            * self.min_df.len()
            * self.alpha.len()
    }

    /// Every combination, enumerated with `models` outermost and `alpha`
    /// innermost (in field order).
    pub fn combinations(&self) -> Result<Vec<PipelineConfig>> {
        let axes = [
            ("models", self.models.len()),
            ("ngram_ranges", self.ngram_ranges.len()),
            ("remove_stopwords", self.remove_stopwords.len()),
            ("stem", self.stem.len()),
            ("max_features", self.max_features.len()),
            ("min_df", self.min_df.len()),
            ("alpha", self.alpha.len()),
        ];
        if let Some((name, _)) = axes.iter().find(|(_, n)| *n == 0) {
            return Err(Error::InvalidArgument(format!("grid axis `{name}` is empty")));
        }
        let mut out = Vec::with_capacity(self.combination_count());
        for &kind in &self.models {
            for &(lo, hi) in &self.ngram_ranges {
                for &remove_stopwords in &self.remove_stopwords {
                    for &stem in &self.stem {
                        let tokenizer = TokenizerConfig::new(lo, hi, remove_stopwords, stem)?;
                        for &max_features in &self.max_features {
                            for &min_df in &self.min_df {
                                for &alpha in &self.alpha {
                                    out.push(PipelineConfig {
                                        tokenizer,
                                        vocab: VocabBuildParams { max_features, min_df },
                                        kind,
                                        alpha,
                                        l2_normalize: self.l2_normalize,
                                        smoothing: self.smoothing,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    /// Position in enumeration order.
    pub index: usize,
    pub config: PipelineConfig,
    pub cv: CvResult,
    pub mean: f64,
    /// 1 is best.
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSearchResult {
    pub objective: Objective,
    /// Enumeration order.
    pub rows: Vec<GridRow>,
}

impl GridSearchResult {
    /// Ranks rows by mean objective, descending; equal means keep
    /// enumeration order.
    pub fn from_rows(objective: Objective, configs: Vec<PipelineConfig>, cvs: Vec<CvResult>) -> Self {
        let mut rows: Vec<GridRow> = configs
            .into_iter()
            .zip(cvs)
            .enumerate()
            .map(|(index, (config, cv))| GridRow {
                index,
                config,
                mean: cv.mean(),
                cv,
                rank: 0,
            })
            .collect();
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.sort_by(|&a, &b| rows[b].mean.total_cmp(&rows[a].mean).then(a.cmp(&b)));
        for (r, &i) in order.iter().enumerate() {
            rows[i].rank = r + 1;
        }
        GridSearchResult { objective, rows }
    }

    pub fn ranked(&self) -> Vec<&GridRow> {
        let mut v: Vec<&GridRow> = self.rows.iter().collect();
        v.sort_by_key(|r| r.rank);
        v
    }

    pub fn best(&self) -> &GridRow {
        self.rows
            .iter()
            .find(|r| r.rank == 1)
            .expect("grid result has at least one row")
    }

    /// Per-fold rows in enumeration order, then one summary row per
    /// combination in rank order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "row_type,combo,rank,model,ngram_lo,ngram_hi,remove_stopwords,stem,max_features,min_df,alpha,fold,f1,roc_auc,score\n",
        );
        let prefix = |r: &GridRow| {
            let c = &r.config;
            let (lo, hi) = c.tokenizer.ngram_range();
            format!(
                "{},{},{},{lo},{hi},{},{},{},{},{}",
                r.index,
                r.rank,
                c.kind,
                c.tokenizer.remove_stopwords,
                c.tokenizer.stem,
                c.vocab.max_features.map(|m| m.to_string()).unwrap_or_else(|| "none".into()),
                c.vocab.min_df,
                c.alpha
            )
        };
        for r in &self.rows {
            for (f, fold) in r.cv.folds.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "fold,{},{f},{},{},{}",
                    prefix(r),
                    fold.confusion.f1(),
                    fold.roc.auc,
                    fold.score(self.objective)
                );
            }
        }
        for r in self.ranked() {
            let _ = writeln!(
                out,
                "summary,{},,{},{},{}",
                prefix(r),
                r.cv.mean_f1(),
                r.cv.mean_auc(),
                r.mean
            );
        }
        out
    }
}

/// Runs the grid. `jobs` caps worker threads; `None` uses rayon's default
/// pool. Results do not depend on the number of workers.
pub fn grid_search(
    corpus: &Corpus,
    spec: &GridSearchSpec,
    stopwords: &StopWords,
    jobs: Option<usize>,
) -> Result<GridSearchResult> {
    let configs = spec.combinations()?;
    let labels = corpus.labels()?;
    let folds = kfold_indices(&labels, spec.folds, spec.seed)?;

    let run = || -> Result<Vec<CvResult>> {
        let mut tokenizers: Vec<TokenizerConfig> = configs.iter().map(|c| c.tokenizer).collect();
        tokenizers.sort_by_key(|t| (t.ngram_range(), t.remove_stopwords, t.stem));
        tokenizers.dedup();
        let tokenized: HashMap<TokenizerConfig, Vec<TokenStream>> = tokenizers
            .par_iter()
            .map(|t| {
                let docs = corpus
                    .songs()
                    .iter()
                    .map(|s| tokenize(&s.lyrics, t, stopwords))
                    .collect();
                (*t, docs)
            })
            .collect();
        configs
            .par_iter()
            .map(|cfg| {
                cross_validate_folds(
                    &tokenized[&cfg.tokenizer],
                    &labels,
                    &folds,
                    cfg,
                    stopwords,
                    spec.objective,
                    |_, _, _| {},
                )
            })
            .collect()
    };

    let cvs = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    Ok(GridSearchResult::from_rows(spec.objective, configs, cvs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_order_and_count() {
        let spec = GridSearchSpec {
            models: vec![ModelKind::BernoulliBinary, ModelKind::MultinomialTfIdf],
            alpha: vec![0.5, 2.0],
            remove_stopwords: vec![true],
            ..GridSearchSpec::default()
        };
        let combos = spec.combinations().unwrap();
        assert_eq!(combos.len(), spec.combination_count());
        assert_eq!(combos.len(), 4);
        assert_eq!(combos[0].kind, ModelKind::BernoulliBinary);
        assert_eq!((combos[0].alpha, combos[1].alpha), (0.5, 2.0));
        assert_eq!(combos[2].kind, ModelKind::MultinomialTfIdf);
    }

    #[test]
    fn empty_axis_rejected() {
        let spec = GridSearchSpec {
            alpha: vec![],
            ..GridSearchSpec::default()
        };
        assert!(spec.combinations().is_err());
    }
}
