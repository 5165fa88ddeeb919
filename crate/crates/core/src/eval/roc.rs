//! ROC curves from posterior `P(happy | x)` scores.

use serde::Serialize;

use crate::corpus::MoodLabel;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
    /// Songs scoring at or above this value are called happy. The origin
    /// uses `+inf`.
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
    pub auc: f64,
}

fn class_counts(y_true: &[MoodLabel], scores: &[f64]) -> Result<(usize, usize)> {
    if y_true.len() != scores.len() {
        return Err(Error::InvalidArgument(format!(
            "{} labels but {} scores",
            y_true.len(),
            scores.len()
        )));
    }
    if let Some(s) = scores.iter().find(|s| !s.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite score {s}")));
    }
    let pos = y_true.iter().filter(|l| l.is_positive()).count();
    let neg = y_true.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::InvalidArgument(
            "ROC analysis needs both happy and sad samples".into(),
        ));
    }
    Ok((pos, neg))
}

/// Sweeps thresholds over the distinct scores, highest first; tied scores
/// form a single step. The area is integrated with the trapezoid rule.
pub fn roc_curve(y_true: &[MoodLabel], scores: &[f64]) -> Result<RocCurve> {
    let (pos, neg) = class_counts(y_true, scores)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut points = vec![RocPoint {
        fpr: 0.0,
        tpr: 0.0,
        threshold: f64::INFINITY,
    }];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < order.len() {
        let threshold = scores[order[i]];
        while i < order.len() && scores[order[i]] == threshold {
            if y_true[order[i]].is_positive() {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(RocPoint {
            fpr: fp as f64 / neg as f64,
            tpr: tp as f64 / pos as f64,
            threshold,
        });
    }
    let auc = trapezoid(&points);
    debug_assert!(
        (auc - auc_pairwise(y_true, scores)?).abs() < 1e-9,
        "trapezoid and concordance AUC disagree"
    );
    Ok(RocCurve { points, auc })
}

fn trapezoid(points: &[RocPoint]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1].fpr - w[0].fpr) * (w[0].tpr + w[1].tpr) / 2.0)
        .sum()
}

/// Share of (happy, sad) pairs where the happy song scores higher, ties
/// counting one half.
pub fn auc_pairwise(y_true: &[MoodLabel], scores: &[f64]) -> Result<f64> {
    let (pos, neg) = class_counts(y_true, scores)?;
    let (mut concordant, mut tied) = (0u64, 0u64);
    for (i, li) in y_true.iter().enumerate() {
        if !li.is_positive() {
            continue;
        }
        for (j, lj) in y_true.iter().enumerate() {
            if lj.is_positive() {
                continue;
            }
            if scores[i] > scores[j] {
                concordant += 1;
            } else if scores[i] == scores[j] {
                tied += 1;
            }
        }
    }
    Ok((concordant as f64 + 0.5 * tied as f64) / (pos as f64 * neg as f64))
}

impl RocCurve {
    /// TPR at `fpr`, interpolating linearly between curve points. On a
    /// vertical segment the highest TPR reached at that FPR is used.
    pub fn tpr_at(&self, fpr: f64) -> f64 {
        let pts = &self.points;
        let last_le = pts.partition_point(|p| p.fpr <= fpr);
        if last_le == 0 {
            return 0.0;
        }
        let left = pts[last_le - 1];
        if left.fpr == fpr || last_le == pts.len() {
            return left.tpr;
        }
        let right = pts[last_le];
        left.tpr + (right.tpr - left.tpr) * (fpr - left.fpr) / (right.fpr - left.fpr)
    }
}

/// Vertical average of several curves at `samples` evenly spaced FPR values
/// from 0 to 1. Returns `(fpr, mean tpr)` pairs.
pub fn mean_roc(curves: &[RocCurve], samples: usize) -> Vec<(f64, f64)> {
    if curves.is_empty() || samples < 2 {
        return Vec::new();
    }
    (0..samples)
        .map(|k| {
            let fpr = k as f64 / (samples - 1) as f64;
            let tpr = curves.iter().map(|c| c.tpr_at(fpr)).sum::<f64>() / curves.len() as f64;
            (fpr, tpr)
        })
        .collect()
}

/// `fpr,tpr,threshold` rows with a header line.
pub fn roc_csv(curve: &RocCurve) -> String {
    let mut out = String::from("fpr,tpr,threshold\n");
    for p in &curve.points {
        out.push_str(&format!("{},{},{}\n", p.fpr, p.tpr, p.threshold));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use MoodLabel::{Happy as H, Sad as S};

    #[test]
    fn separating_scores() {
        let c = roc_curve(&[H, H, S, S], &[0.9, 0.8, 0.2, 0.1]).unwrap();
        assert_eq!(c.auc, 1.0);
    }

    #[test]
    fn identical_scores() {
        let c = roc_curve(&[H, S, H, S, S], &[0.5; 5]).unwrap();
        assert_eq!(c.auc, 0.5);
        assert_eq!(c.points.len(), 2);
    }

    #[test]
    fn hand_traced_example() {
        let y = [H, S, H, S];
        let s = [0.9, 0.8, 0.7, 0.1];
        assert_eq!(roc_curve(&y, &s).unwrap().auc, 0.75);
        assert_eq!(auc_pairwise(&y, &s).unwrap(), 0.75);
    }

    #[test]
    fn curve_shape() {
        let c = roc_curve(&[H, S, H, S, H], &[0.3, 0.3, 0.9, 0.1, 0.5]).unwrap();
        let first = c.points.first().unwrap();
        let last = c.points.last().unwrap();
        assert_eq!((first.fpr, first.tpr), (0.0, 0.0));
        assert_eq!((last.fpr, last.tpr), (1.0, 1.0));
        for w in c.points.windows(2) {
            assert!(w[1].fpr >= w[0].fpr && w[1].tpr >= w[0].tpr);
        }
    }

    #[test]
    fn single_class_rejected() {
        assert!(roc_curve(&[H, H], &[0.1, 0.2]).is_err());
        assert!(roc_curve(&[H, S], &[0.1, f64::NAN]).is_err());
    }

    #[test]
    fn vertical_average() {
        let perfect = roc_curve(&[H, S], &[0.9, 0.1]).unwrap();
        let tied = roc_curve(&[H, S], &[0.5, 0.5]).unwrap();
        let mean = mean_roc(&[perfect, tied], 101);
        assert_eq!(mean.len(), 101);
        assert_eq!(mean[0], (0.0, 0.5));
        assert!((mean[50].1 - 0.75).abs() < 1e-12);
        assert_eq!(mean[100], (1.0, 1.0));
    }

    #[test]
    fn csv_header() {
        let c = roc_curve(&[H, S], &[0.9, 0.1]).unwrap();
        let csv = roc_csv(&c);
        assert!(csv.starts_with("fpr,tpr,threshold\n0,0,inf\n"));
        assert_eq!(csv.lines().count(), 4);
    }
}
