//! Prediction records shared by `predict` and the HTTP service.

use lyricmood_core::MoodModel;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictResponse {
    pub label: &'static str,
    pub p_happy: f64,
    pub p_sad: f64,
    pub model_fingerprint: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
}

pub fn predict(model: &MoodModel, lyrics: &str, id: Option<String>) -> PredictResponse {
    let p = model.predict_proba(lyrics);
    PredictResponse {
        label: p.label().as_str(),
        p_happy: p.p_happy(),
        p_sad: p.probs[1],
        model_fingerprint: model.fingerprint().to_hex(),
        id,
    }
}

/// Splits input on lines consisting only of `---`. Documents that are
/// empty after trimming are skipped.
pub fn split_documents(input: &str) -> Vec<String> {
    let mut docs = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    for line in input.lines() {
        if line.trim_end() == "---" {
            docs.push(current.join("\n"));
            current.clear();
        } else {
            current.push(line);
        }
    }
    docs.push(current.join("\n"));
    docs.into_iter().filter(|d| !d.trim().is_empty()).collect()
}
