//! Naive Bayes mood classification for song lyrics.
//!
//! The pipeline runs corpus loading and filtering, tokenization (stop-word
//! removal, Porter stemming, n-grams), vocabulary building and feature
//! weighting, then Bernoulli or multinomial naive Bayes. The [`eval`] module
//! adds metrics, ROC analysis, cross-validation and grid search.

pub mod bayes;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod model;
pub mod porter;
pub mod rng;
pub mod synth;
pub mod text;

pub use bayes::{fit_bernoulli, fit_multinomial, NaiveBayes, Posterior, SmoothingDenominator, Variant};
pub use corpus::{
    default_dictionary, filter_english, load_corpus, parse_corpus, split, Corpus, Dictionary, MoodLabel, Song,
    SplitSpec,
};
pub use error::{Error, Result};
pub use eval::{evaluate_holdout, EvalReport, Objective};
pub use features::{build_vocabulary, FeatureVector, Fingerprint, Scheme, VocabBuildParams, Vocabulary};
pub use model::{train, ModelKind, MoodModel, PipelineConfig};
pub use porter::porter_stem;
pub use rng::SeededRng;
pub use synth::synth_corpus;
pub use text::{default_stopwords, tokenize, StopWords, TokenStream, TokenizerConfig};
