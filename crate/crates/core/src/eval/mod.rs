//! Classification metrics, ROC analysis, cross-validation, grid search and
//! held-out evaluation.

pub mod cv;
pub mod grid;
pub mod metrics;
pub mod roc;

use serde::Serialize;

pub use cv::{cross_validate, cross_validate_observed, kfold_indices, CvResult, Fold, FoldOutcome, Objective};
pub use grid::{grid_search, GridRow, GridSearchResult, GridSearchSpec};
pub use metrics::{confusion, ConfusionMatrix};
pub use roc::{auc_pairwise, mean_roc, roc_csv, roc_curve, RocCurve, RocPoint};

use crate::corpus::{Corpus, MoodLabel};
use crate::error::Result;
use crate::model::MoodModel;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub samples: u64,
    pub confusion: ConfusionMatrix,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// `None` when the evaluated corpus holds a single class.
    pub roc_auc: Option<f64>,
    #[serde(skip)]
    pub roc: Option<RocCurve>,
}

/// Scores a labeled corpus with a trained model's frozen vocabulary.
pub fn evaluate_holdout(model: &MoodModel, corpus: &Corpus) -> Result<EvalReport> {
    let truth = corpus.labels()?;
    let posteriors: Vec<_> = corpus
        .songs()
        .iter()
        .map(|s| model.predict_proba(&s.lyrics))
        .collect();
    let predicted: Vec<MoodLabel> = posteriors.iter().map(|p| p.label()).collect();
    let scores: Vec<f64> = posteriors.iter().map(|p| p.p_happy()).collect();
    let cm = confusion(&truth, &predicted)?;
    let both = truth.contains(&MoodLabel::Happy) && truth.contains(&MoodLabel::Sad);
    let roc = if both {
        Some(roc_curve(&truth, &scores)?)
    } else {
        None
    };
    Ok(EvalReport {
        samples: cm.total(),
        confusion: cm,
        accuracy: cm.accuracy(),
        precision: cm.precision(),
        recall: cm.recall(),
        f1: cm.f1(),
        roc_auc: roc.as_ref().map(|r| r.auc),
        roc,
    })
}
