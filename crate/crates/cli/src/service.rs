//! HTTP prediction service: `POST /predict`, `GET /healthz`, `GET /model/info`.
//!
//! The model is loaded once and shared read-only across requests.

use std::path::Path;
use std::sync::Arc;

use anyhow::Context;
use axum::body::Bytes;
use axum::extract::rejection::BytesRejection;
use axum::extract::{DefaultBodyLimit, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use lyricmood_core::MoodModel;
use serde_json::{json, Value};

use crate::predict::predict;

pub const DEFAULT_MAX_BODY_BYTES: usize = 1 << 20;

#[derive(Debug, Clone)]
pub struct ServeOptions {
    pub bind: String,
    pub port: u16,
    pub max_body_bytes: usize,
}

struct AppState {
    model: MoodModel,
    fingerprint: String,
    info: Value,
}

pub fn model_info(model: &MoodModel) -> Value {
    let cfg = model.config();
    let (lo, hi) = cfg.tokenizer.ngram_range();
    json!({
        "variant": cfg.kind.variant().as_str(),
        "scheme": cfg.kind.scheme().as_str(),
        "model": cfg.kind.as_str(),
        "alpha": cfg.alpha,
        "smoothing_denominator": cfg.smoothing.as_str(),
        "l2_normalize": cfg.l2_normalize,
        "vocabulary_size": model.vocabulary().len(),
        "min_df": cfg.vocab.min_df,
        "max_features": cfg.vocab.max_features,
        "tokenizer": {
            "ngram_lo": lo,
            "ngram_hi": hi,
            "remove_stopwords": cfg.tokenizer.remove_stopwords,
            "stem": cfg.tokenizer.stem,
        },
        "fingerprint": model.fingerprint().to_hex(),
    })
}

pub fn router(model: MoodModel, max_body_bytes: usize) -> Router {
    let state = Arc::new(AppState {
        fingerprint: model.fingerprint().to_hex(),
        info: model_info(&model),
        model,
    });
    Router::new()
        .route("/healthz", get(healthz))
        .route("/model/info", get(info))
        .route("/predict", post(predict_handler))
        .layer(DefaultBodyLimit::max(max_body_bytes))
        .with_state(state)
}

fn error(status: StatusCode, field: Option<&str>, message: impl Into<String>) -> Response {
    (status, Json(json!({ "error": message.into(), "field": field }))).into_response()
}

async fn healthz(State(s): State<Arc<AppState>>) -> Json<Value> {
    Json(json!({ "status": "ok", "model_fingerprint": s.fingerprint }))
}

async fn info(State(s): State<Arc<AppState>>) -> Json<Value> {
    Json(s.info.clone())
}

async fn predict_handler(State(s): State<Arc<AppState>>, body: Result<Bytes, BytesRejection>) -> Response {
    let body = match body {
        Ok(b) => b,
        Err(rej) => return error(rej.status(), None, rej.body_text()),
    };
    let value: Value = match serde_json::from_slice(&body) {
        Ok(v) => v,
        Err(e) => return error(StatusCode::BAD_REQUEST, None, format!("malformed JSON: {e}")),
    };
    let Some(obj) = value.as_object() else {
        return error(StatusCode::BAD_REQUEST, None, "request body must be a JSON object");
    };
    let lyrics = match obj.get("lyrics") {
        Some(Value::String(s)) if !s.trim().is_empty() => s,
        Some(Value::String(_)) => return error(StatusCode::BAD_REQUEST, Some("lyrics"), "lyrics are empty"),
        Some(_) => return error(StatusCode::BAD_REQUEST, Some("lyrics"), "lyrics must be a string"),
        None => return error(StatusCode::BAD_REQUEST, Some("lyrics"), "missing field `lyrics`"),
    };
    let id = match obj.get("id") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return error(StatusCode::BAD_REQUEST, Some("id"), "id must be a string"),
    };
    Json(predict(&s.model, lyrics, id)).into_response()
}

async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let term = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending::<()>().await,
        }
    };
    #[cfg(not(unix))]
    let term = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {}
        _ = term => {}
    }
}

/// Loads the model, then binds and serves until SIGINT or SIGTERM. In-flight
/// requests complete before returning.
pub fn serve(model_path: &Path, opts: &ServeOptions, quiet: bool) -> anyhow::Result<()> {
    let model = MoodModel::load(model_path)?;
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .context("starting async runtime")?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind((opts.bind.as_str(), opts.port))
            .await
            .with_context(|| format!("binding {}:{}", opts.bind, opts.port))?;
        let addr = listener.local_addr()?;
        if !quiet {
            eprintln!("listening on {addr}");
        }
        axum::serve(listener, router(model, opts.max_body_bytes))
            .with_graceful_shutdown(shutdown_signal())
            .await
            .context("serving")?;
        Ok(())
    })
}
