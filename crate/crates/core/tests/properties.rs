use std::collections::HashSet;

use lyricmood_core::corpus::{split_indices, Corpus, Dictionary, MoodLabel, Song, SplitSpec};
use lyricmood_core::eval::kfold_indices;
use lyricmood_core::features::{binarize, count_vector, idf_weights, tfidf_vector};
use lyricmood_core::text::ngrams;
use lyricmood_core::{
    build_vocabulary, default_stopwords, filter_english, tokenize, train, ModelKind, MoodModel, PipelineConfig,
    StopWords, TokenStream, TokenizerConfig, VocabBuildParams,
};
use proptest::prelude::*;

fn word() -> impl Strategy<Value = String> {
    "[a-f]{1,3}"
}

fn docs() -> impl Strategy<Value = Vec<Vec<String>>> {
    prop::collection::vec(prop::collection::vec(word(), 1..12), 1..10)
}

fn streams(raw: &[Vec<String>]) -> Vec<TokenStream> {
    raw.iter().map(|d| d.iter().cloned().collect()).collect()
}

fn labeled_corpus() -> impl Strategy<Value = Corpus> {
    prop::collection::vec((prop::collection::vec(word(), 1..10), any::<bool>()), 4..30).prop_map(|rows| {
        let songs = rows
            .into_iter()
            .enumerate()
            .map(|(i, (words, happy))| {
                let label = if happy { MoodLabel::Happy } else { MoodLabel::Sad };
                Song::new("a", format!("t{i}"), None, words.join(" "), Some(label))
            })
            .collect();
        Corpus::new("prop", songs).unwrap()
    })
}

proptest! {
    #[test]
    fn idf_decreases_with_document_frequency(raw in docs()) {
        let vocab = build_vocabulary(&streams(&raw), &VocabBuildParams::default(), &TokenizerConfig::plain()).unwrap();
        let idf = idf_weights(&vocab);
        for i in 0..vocab.len() {
            for j in 0..vocab.len() {
                if vocab.doc_freq()[i] < vocab.doc_freq()[j] {
                    prop_assert!(idf[i] > idf[j]);
                }
            }
            if vocab.doc_freq()[i] == vocab.n_docs() {
                prop_assert_eq!(idf[i], 1.0);
            }
            prop_assert!(idf[i] >= 1.0);
        }
    }

    #[test]
    fn tfidf_rows_have_unit_norm(raw in docs()) {
        let ds = streams(&raw);
        let vocab = build_vocabulary(&ds, &VocabBuildParams::default(), &TokenizerConfig::plain()).unwrap();
        for d in &ds {
            let v = tfidf_vector(&count_vector(d, &vocab), &vocab, true).unwrap();
            prop_assert!((v.l2_norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn vocabulary_ignores_document_order(raw in docs(), max in prop::option::of(1usize..8), min_df in 1usize..3) {
        let params = VocabBuildParams { max_features: max, min_df };
        let cfg = TokenizerConfig::plain();
        let a = build_vocabulary(&streams(&raw), &params, &cfg);
        let mut rev = raw.clone();
        rev.reverse();
        let b = build_vocabulary(&streams(&rev), &params, &cfg);
        match (a, b) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.terms(), b.terms());
                prop_assert_eq!(a.doc_freq(), b.doc_freq());
                prop_assert_eq!(a.fingerprint(), b.fingerprint());
                if let Some(m) = max {
                    prop_assert!(a.len() <= m);
                }
                prop_assert!(a.doc_freq().iter().all(|&df| df >= min_df));
            }
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "order changed build outcome"),
        }
    }

    #[test]
    fn ngram_count_identity(words in prop::collection::vec(word(), 0..15), lo in 1usize..4, span in 0usize..3) {
        let hi = (lo + span).min(3);
        let expected: usize = (lo..=hi).map(|n| words.len().saturating_sub(n - 1)).sum();
        let grams = ngrams(&words, lo, hi);
        prop_assert_eq!(grams.len(), expected);
        for g in &grams {
            let n = g.split(' ').count();
            prop_assert!((lo..=hi).contains(&n));
        }
    }

    #[test]
    fn binarize_is_idempotent(raw in docs()) {
        let ds = streams(&raw);
        let vocab = build_vocabulary(&ds, &VocabBuildParams::default(), &TokenizerConfig::plain()).unwrap();
        for d in &ds {
            let once = binarize(&count_vector(d, &vocab));
            prop_assert_eq!(binarize(&once), once.clone());
            prop_assert!(once.entries().iter().all(|&(_, w)| w == 1.0));
        }
    }

    #[test]
    fn tokenizer_output_is_normalized(text in "[A-Za-z' ,.!?\n]{0,80}") {
        let stop = default_stopwords();
        let cfg = TokenizerConfig::new(1, 1, true, false).unwrap();
        for t in tokenize(&text, &cfg, stop).iter() {
            prop_assert!(!stop.contains(t));
            prop_assert!(!t.starts_with('\'') && !t.ends_with('\''));
            prop_assert_eq!(&t.to_lowercase(), t);
            prop_assert!(!t.is_empty());
        }
    }

    #[test]
    fn english_filter_is_idempotent(corpus in labeled_corpus(), threshold in 0.0f64..1.0) {
        let dict: Dictionary = ["a", "b", "ab", "ba", "cab", "fed"].into_iter().collect();
        let once = filter_english(&corpus, &dict, threshold).unwrap();
        let twice = filter_english(&once, &dict, threshold).unwrap();
        prop_assert_eq!(once.songs(), twice.songs());
    }

    #[test]
    fn split_is_disjoint(corpus in labeled_corpus(), seed in any::<u64>(), t in 1usize..20, v in 1usize..10) {
        let spec = SplitSpec { train_count: t, validation_count: v, seed, balance_validation: false };
        if let Ok(s) = split_indices(&corpus, &spec) {
            prop_assert_eq!(s.train.len(), t);
            prop_assert_eq!(s.validation.len(), v);
            let train: HashSet<_> = s.train.iter().collect();
            prop_assert!(s.validation.iter().all(|i| !train.contains(i)));
            prop_assert!(s.train.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(s.validation.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(&split_indices(&corpus, &spec).unwrap(), &s);
        } else {
            prop_assert!(t + v > corpus.len());
        }
    }

    #[test]
    fn folds_partition_and_stratify(corpus in labeled_corpus(), seed in any::<u64>(), k in 2usize..5) {
        let y = corpus.labels().unwrap();
        let Ok(folds) = kfold_indices(&y, k, seed) else { return Ok(()); };
        let mut seen = vec![0usize; y.len()];
        for f in &folds {
            for &i in &f.test {
                seen[i] += 1;
            }
            prop_assert_eq!(f.train.len() + f.test.len(), y.len());
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
        for l in MoodLabel::ALL {
            let counts: Vec<usize> = folds.iter().map(|f| f.test.iter().filter(|&&i| y[i] == l).count()).collect();
            let (lo, hi) = (counts.iter().min().unwrap(), counts.iter().max().unwrap());
            prop_assert!(hi - lo <= 1);
        }
    }

    #[test]
    fn posteriors_sum_to_one_and_survive_round_trip(
        corpus in labeled_corpus(),
        queries in prop::collection::vec(prop::collection::vec(word(), 0..10), 1..6),
        kind in prop::sample::select(ModelKind::ALL.to_vec()),
        alpha in 0.05f64..5.0,
    ) {
        let y = corpus.labels().unwrap();
        prop_assume!(y.contains(&MoodLabel::Happy) && y.contains(&MoodLabel::Sad));
        let cfg = PipelineConfig { kind, alpha, tokenizer: TokenizerConfig::plain(), ..PipelineConfig::default() };
        let stop = StopWords::empty();
        let model = train(&corpus, &cfg, &stop).unwrap();
        let loaded = MoodModel::from_file_text(&model.to_file_text(), &stop).unwrap();
        for q in &queries {
            let text = q.join(" ");
            let p = model.predict_proba(&text);
            prop_assert!((p.probs[0] + p.probs[1] - 1.0).abs() < 1e-12);
            prop_assert_eq!(loaded.predict_proba(&text), p);
        }
    }
}
