//! Shared inputs for the criterion benchmarks.

use lyricmood_core::{default_stopwords, synth_corpus, tokenize, Corpus, PipelineConfig, TokenStream};

/// A seeded synthetic corpus of `n` songs at separation 0.7.
pub fn corpus(n: usize) -> Corpus {
    synth_corpus(n, 42, 0.7).expect("valid synthetic corpus parameters")
}

pub fn tokenized(corpus: &Corpus, cfg: &PipelineConfig) -> Vec<TokenStream> {
    corpus
        .songs()
        .iter()
        .map(|s| tokenize(&s.lyrics, &cfg.tokenizer, default_stopwords()))
        .collect()
}
