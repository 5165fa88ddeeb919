//! Vocabularies and sparse bag-of-words vectors with binary, raw-count and
//! tf-idf weighting.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::text::{TokenStream, TokenizerConfig};

/// SHA-256 identity of a vocabulary (or model payload).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fingerprint(pub [u8; 32]);

impl Fingerprint {
    pub fn of(bytes: &[u8]) -> Self {
        Fingerprint(Sha256::digest(bytes).into())
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    /// First 16 hex digits, for logs.
    pub fn short(&self) -> String {
        hex::encode(&self.0[..8])
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fingerprint({})", self.short())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VocabBuildParams {
    /// Keep only the `k` terms with the highest total count.
    pub max_features: Option<usize>,
    /// Minimum number of documents a term must occur in.
    pub min_df: usize,
}

impl Default for VocabBuildParams {
    fn default() -> Self {
        VocabBuildParams {
            max_features: None,
            min_df: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
    doc_freq: Vec<usize>,
    n_docs: usize,
    tokenizer: TokenizerConfig,
    params: VocabBuildParams,
    fingerprint: Fingerprint,
}

impl Vocabulary {
    /// Rebuilds a vocabulary from stored parts (used by model loading).
    pub fn from_parts(
        terms: Vec<String>,
        doc_freq: Vec<usize>,
        n_docs: usize,
        tokenizer: TokenizerConfig,
        params: VocabBuildParams,
    ) -> Result<Self> {
        if terms.len() != doc_freq.len() {
            return Err(Error::InvalidArgument(format!(
                "{} terms but {} document frequencies",
                terms.len(),
                doc_freq.len()
            )));
        }
        if let Some(df) = doc_freq.iter().find(|&&df| df == 0 || df > n_docs) {
            return Err(Error::InvalidArgument(format!(
                "document frequency {df} outside [1, {n_docs}]"
            )));
        }
        let index: HashMap<String, usize> = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        if index.len() != terms.len() {
            return Err(Error::InvalidArgument("duplicate vocabulary terms".into()));
        }
        let fingerprint = vocab_fingerprint(&terms, &doc_freq, n_docs, &tokenizer, &params);
        Ok(Vocabulary {
            terms,
            index,
            doc_freq,
            n_docs,
            tokenizer,
            params,
            fingerprint,
        })
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn contains(&self, term: &str) -> bool {
        self.index.contains_key(term)
    }

    pub fn doc_freq(&self) -> &[usize] {
        &self.doc_freq
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn tokenizer(&self) -> &TokenizerConfig {
        &self.tokenizer
    }

    pub fn params(&self) -> &VocabBuildParams {
        &self.params
    }

    pub fn fingerprint(&self) -> Fingerprint {
        self.fingerprint
    }
}

fn vocab_fingerprint(
    terms: &[String],
    doc_freq: &[usize],
    n_docs: usize,
    tokenizer: &TokenizerConfig,
    params: &VocabBuildParams,
) -> Fingerprint {
    let mut h = Sha256::new();
    let (lo, hi) = tokenizer.ngram_range();
    h.update(
        format!(
            "vocab-v1|{lo}|{hi}|{}|{}|{:?}|{}|{n_docs}\n",
            tokenizer.remove_stopwords, tokenizer.stem, params.max_features, params.min_df
        )
        .as_bytes(),
    );
    for (t, df) in terms.iter().zip(doc_freq) {
        h.update(t.as_bytes());
        h.update(format!("\t{df}\n").as_bytes());
    }
    Fingerprint(h.finalize().into())
}

/// Builds a vocabulary from tokenized training documents.
///
/// Terms with document frequency below `min_df` are dropped first; the
/// `max_features` cap then keeps the most frequent terms by total count
/// (ties to the lexicographically smaller term). Terms are stored in
/// lexicographic order.
pub fn build_vocabulary(
    docs: &[TokenStream],
    params: &VocabBuildParams,
    tokenizer: &TokenizerConfig,
) -> Result<Vocabulary> {
    if docs.is_empty() {
        return Err(Error::InvalidArgument("no documents to build a vocabulary from".into()));
    }
    if params.min_df == 0 {
        return Err(Error::InvalidArgument("min_df must be at least 1".into()));
    }
    if params.max_features == Some(0) {
        return Err(Error::InvalidArgument("max_features must be positive".into()));
    }
    // term -> (document frequency, total count)
    let mut stats: HashMap<&str, (usize, usize)> = HashMap::new();
    for doc in docs {
        let mut seen: HashSet<&str> = HashSet::new();
        for t in doc.iter() {
            let e = stats.entry(t).or_insert((0, 0));
            e.1 += 1;
            if seen.insert(t) {
                e.0 += 1;
            }
        }
    }
    let mut kept: Vec<(&str, usize, usize)> = stats
        .into_iter()
        .filter(|(_, (df, _))| *df >= params.min_df)
        .map(|(t, (df, total))| (t, df, total))
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyVocabulary {
            min_df: params.min_df,
        });
    }
    if let Some(k) = params.max_features {
        kept.sort_by(|a, b| b.2.cmp(&a.2).then_with(|| a.0.cmp(b.0)));
        kept.truncate(k);
    }
    kept.sort_by(|a, b| a.0.cmp(b.0));
    let terms = kept.iter().map(|(t, _, _)| t.to_string()).collect();
    let doc_freq = kept.iter().map(|(_, df, _)| *df).collect();
    Vocabulary::from_parts(terms, doc_freq, docs.len(), *tokenizer, *params)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Binary,
    /// Raw occurrence counts.
    Tf,
    TfIdf,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Binary => "binary",
            Scheme::Tf => "tf",
            Scheme::TfIdf => "tfidf",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "binary" => Ok(Scheme::Binary),
            "tf" => Ok(Scheme::Tf),
            "tfidf" | "tf-idf" => Ok(Scheme::TfIdf),
            other => Err(format!("unknown scheme `{other}` (expected binary, tf or tfidf)")),
        }
    }
}

/// Sparse document vector: strictly increasing indices, no zero weights.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    entries: Vec<(usize, f64)>,
    scheme: Scheme,
    vocab: Fingerprint,
}

impl FeatureVector {
    /// Validates ordering, sign and (for binary vectors) unit weights; zero
    /// weights are dropped.
    pub fn new(entries: Vec<(usize, f64)>, scheme: Scheme, vocab: Fingerprint) -> Result<Self> {
        for w in entries.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidArgument("feature indices must be strictly increasing".into()));
            }
        }
        for &(i, x) in &entries {
            if !x.is_finite() || x < 0.0 {
                return Err(Error::InvalidArgument(format!("feature {i} has weight {x}")));
            }
            if scheme == Scheme::Binary && x != 0.0 && x != 1.0 {
                return Err(Error::InvalidArgument(format!("binary feature {i} has weight {x}")));
            }
        }
        let entries = entries.into_iter().filter(|&(_, x)| x != 0.0).collect();
        Ok(FeatureVector {
            entries,
            scheme,
            vocab,
        })
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn vocab_fingerprint(&self) -> Fingerprint {
        self.vocab
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn l2_norm(&self) -> f64 {
        self.entries.iter().map(|(_, x)| x * x).sum::<f64>().sqrt()
    }
}

/// Raw counts of in-vocabulary tokens; out-of-vocabulary tokens are ignored.
pub fn count_vector(doc: &TokenStream, vocab: &Vocabulary) -> FeatureVector {
    let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
    for t in doc.iter() {
        if let Some(i) = vocab.get(t) {
            *counts.entry(i).or_insert(0.0) += 1.0;
        }
    }
    FeatureVector {
        entries: counts.into_iter().collect(),
        scheme: Scheme::Tf,
        vocab: vocab.fingerprint(),
    }
}

pub fn binarize(fv: &FeatureVector) -> FeatureVector {
    FeatureVector {
        entries: fv.entries.iter().map(|&(i, _)| (i, 1.0)).collect(),
        scheme: Scheme::Binary,
        vocab: fv.vocab,
    }
}

/// `ln((1 + n_docs) / (1 + df)) + 1` per term.
pub fn idf_weights(vocab: &Vocabulary) -> Vec<f64> {
    let n = vocab.n_docs as f64;
    vocab
        .doc_freq
        .iter()
        .map(|&df| ((1.0 + n) / (1.0 + df as f64)).ln() + 1.0)
        .collect()
}

/// Count times idf, optionally scaled to unit Euclidean norm.
pub fn tfidf_vector(fv: &FeatureVector, vocab: &Vocabulary, l2_normalize: bool) -> Result<FeatureVector> {
    let idf = idf_weights(vocab);
    tfidf_with_idf(fv, vocab.fingerprint(), &idf, l2_normalize)
}

/// As [`tfidf_vector`] with a precomputed idf table.
pub fn tfidf_with_idf(
    fv: &FeatureVector,
    vocab: Fingerprint,
    idf: &[f64],
    l2_normalize: bool,
) -> Result<FeatureVector> {
    if fv.vocab != vocab {
        return Err(Error::FingerprintMismatch {
            expected: vocab,
            found: fv.vocab,
        });
    }
    if fv.scheme != Scheme::Tf {
        return Err(Error::SchemeMismatch(format!(
            "tf-idf needs a count vector, got {}",
            fv.scheme
        )));
    }
    let mut entries: Vec<(usize, f64)> = fv.entries.iter().map(|&(i, c)| (i, c * idf[i])).collect();
    if l2_normalize {
        let norm = entries.iter().map(|(_, x)| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            for e in &mut entries {
                e.1 /= norm;
            }
        }
    }
    Ok(FeatureVector {
        entries,
        scheme: Scheme::TfIdf,
        vocab,
    })
}
