//! Labeled lyric corpora: CSV loading, English-majority filtering,
//! seeded train/validation splitting and summary statistics.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SeededRng;
use crate::text::{tokenize, StopWords, TokenizerConfig};

pub const CSV_HEADER: [&str; 5] = ["artist", "title", "year", "lyrics", "mood"];

pub(crate) const ENGLISH_10K: &str = include_str!("../data/english_10k.txt");

/// Mood classes. `Happy` is the positive class everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoodLabel {
    Happy,
    Sad,
}

impl MoodLabel {
    /// Class order used by every per-class array in the crate.
    pub const ALL: [MoodLabel; 2] = [MoodLabel::Happy, MoodLabel::Sad];

    pub fn index(self) -> usize {
        match self {
            MoodLabel::Happy => 0,
            MoodLabel::Sad => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MoodLabel::Happy => "happy",
            MoodLabel::Sad => "sad",
        }
    }

    pub fn is_positive(self) -> bool {
        self == MoodLabel::Happy
    }
}

impl fmt::Display for MoodLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MoodLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "happy" => Ok(MoodLabel::Happy),
            "sad" => Ok(MoodLabel::Sad),
            other => Err(format!("unknown mood `{other}` (expected happy or sad)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Song {
    pub artist: String,
    pub title: String,
    pub year: Option<i32>,
    pub lyrics: String,
    pub label: Option<MoodLabel>,
}

impl Song {
    pub fn new(
        artist: impl Into<String>,
        title: impl Into<String>,
        year: Option<i32>,
        lyrics: impl Into<String>,
        label: Option<MoodLabel>,
    ) -> Self {
        Song {
            artist: artist.into(),
            title: title.into(),
            year,
            lyrics: lyrics.into(),
            label,
        }
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if self.lyrics.trim().is_empty() {
            return Err("lyrics are empty".into());
        }
        if let Some(y) = self.year {
            if !(1000..=3000).contains(&y) {
                return Err(format!("year {y} outside [1000, 3000]"));
            }
        }
        Ok(())
    }
}

/// Ordered songs plus provenance. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    name: String,
    source_path: Option<String>,
    songs: Vec<Song>,
    duplicate_pairs: usize,
}

impl Corpus {
    /// Builds a corpus, rejecting songs with empty lyrics or implausible years.
    pub fn new(name: impl Into<String>, songs: Vec<Song>) -> Result<Self> {
        for (i, s) in songs.iter().enumerate() {
            s.validate()
                .map_err(|m| Error::InvalidSong(format!("song {i} ({} - {}): {m}", s.artist, s.title)))?;
        }
        let duplicate_pairs = count_duplicates(&songs);
        Ok(Corpus {
            name: name.into(),
            source_path: None,
            songs,
            duplicate_pairs,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source_path(&self) -> Option<&str> {
        self.source_path.as_deref()
    }

    pub fn songs(&self) -> &[Song] {
        &self.songs
    }

    pub fn len(&self) -> usize {
        self.songs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.songs.is_empty()
    }

    /// Songs whose (artist, title) pair already appeared earlier in the corpus.
    pub fn duplicate_pairs(&self) -> usize {
        self.duplicate_pairs
    }

    /// Every song's label, or `Error::Unlabeled` if any is missing.
    pub fn labels(&self) -> Result<Vec<MoodLabel>> {
        let labels: Vec<_> = self.songs.iter().filter_map(|s| s.label).collect();
        if labels.len() != self.songs.len() {
            return Err(Error::Unlabeled {
                count: self.songs.len() - labels.len(),
            });
        }
        Ok(labels)
    }

    /// Sub-corpus of the given indices, in the given order.
    pub fn subset(&self, name: impl Into<String>, indices: &[usize]) -> Corpus {
        let songs: Vec<Song> = indices.iter().map(|&i| self.songs[i].clone()).collect();
        let duplicate_pairs = count_duplicates(&songs);
        Corpus {
            name: name.into(),
            source_path: self.source_path.clone(),
            songs,
            duplicate_pairs,
        }
    }

    pub fn to_csv_writer<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new()
            .quote_style(csv::QuoteStyle::Necessary)
            .from_writer(w);
        let csv_err = |e: csv::Error| Error::InvalidArgument(format!("csv write: {e}"));
        out.write_record(CSV_HEADER).map_err(csv_err)?;
        for s in &self.songs {
            let year = s.year.map(|y| y.to_string()).unwrap_or_default();
            let mood = s.label.map(MoodLabel::as_str).unwrap_or("");
            out.write_record([s.artist.as_str(), &s.title, &year, &s.lyrics, mood])
                .map_err(csv_err)?;
        }
        out.flush()
            .map_err(|e| Error::InvalidArgument(format!("csv write: {e}")))?;
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.to_csv_writer(std::io::BufWriter::new(file))
    }
}

fn count_duplicates(songs: &[Song]) -> usize {
    let mut seen = HashSet::new();
    songs
        .iter()
        .filter(|s| !seen.insert((s.artist.as_str(), s.title.as_str())))
        .count()
}

/// Loads a corpus CSV with header `artist,title,year,lyrics,mood`.
///
/// Row numbers in errors count data rows from 1.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Corpus> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "corpus".into());
    let mut corpus = parse_corpus(&bytes, name)?;
    corpus.source_path = Some(path.display().to_string());
    Ok(corpus)
}

pub fn parse_corpus(bytes: &[u8], name: impl Into<String>) -> Result<Corpus> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(bytes);
    let header = reader.headers().map_err(|e| Error::CorpusHeader {
        found: e.to_string(),
    })?;
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Error::CorpusHeader {
            found: header.iter().collect::<Vec<_>>().join(","),
        });
    }

    let mut songs = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::CorpusRow {
            row,
            message: e.to_string(),
        })?;
        let year = match record[2].trim() {
            "" => None,
            y => Some(y.parse::<i32>().map_err(|_| Error::CorpusRow {
                row,
                message: format!("year `{y}` is not an integer"),
            })?),
        };
        let label = match record[4].trim() {
            "" => None,
            m => Some(
                m.parse::<MoodLabel>()
                    .map_err(|message| Error::CorpusRow { row, message })?,
            ),
        };
        let song = Song::new(&record[0], &record[1], year, &record[3], label);
        song.validate()
            .map_err(|message| Error::CorpusRow { row, message })?;
        songs.push(song);
    }
    let duplicate_pairs = count_duplicates(&songs);
    Ok(Corpus {
        name: name.into(),
        source_path: None,
        songs,
        duplicate_pairs,
    })
}

/// Word list used by [`filter_english`].
#[derive(Debug, Clone)]
pub struct Dictionary(HashSet<String>);

impl Dictionary {
    pub fn from_list(text: &str) -> Self {
        Dictionary(
            text.lines()
                .map(str::trim)
                .filter(|w| !w.is_empty())
                .map(str::to_lowercase)
                .collect(),
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::from_list(&text))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<S: Into<String>> FromIterator<S> for Dictionary {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Dictionary(iter.into_iter().map(Into::into).collect())
    }
}

/// The embedded list of the 10,000 most frequent English words.
pub fn default_dictionary() -> &'static Dictionary {
    static DICT: OnceLock<Dictionary> = OnceLock::new();
    DICT.get_or_init(|| Dictionary::from_list(ENGLISH_10K))
}

/// Whitespace-separated, lowercased tokens with surrounding punctuation
/// stripped. Tokens without any letter are discarded.
fn dictionary_tokens(lyrics: &str) -> impl Iterator<Item = String> + '_ {
    lyrics
        .split_whitespace()
        .map(|t| {
            t.to_lowercase()
                .replace('\u{2019}', "'")
                .trim_matches(|c: char| !c.is_alphanumeric())
                .to_string()
        })
        .filter(|t| t.chars().any(char::is_alphabetic))
}

/// Share of a song's tokens found in `dictionary`; `None` for songs with no tokens.
pub fn english_fraction(lyrics: &str, dictionary: &Dictionary) -> Option<f64> {
    let (mut hits, mut total) = (0usize, 0usize);
    for t in dictionary_tokens(lyrics) {
        total += 1;
        if dictionary.contains(&t) {
            hits += 1;
        }
    }
    (total > 0).then(|| hits as f64 / total as f64)
}

/// Keeps songs whose in-dictionary token share strictly exceeds `threshold`.
pub fn filter_english(corpus: &Corpus, dictionary: &Dictionary, threshold: f64) -> Result<Corpus> {
    if dictionary.is_empty() {
        return Err(Error::InvalidArgument("dictionary is empty".into()));
    }
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "threshold {threshold} outside (0, 1]"
        )));
    }
    let songs: Vec<Song> = corpus
        .songs
        .iter()
        .filter(|s| english_fraction(&s.lyrics, dictionary).is_some_and(|f| f > threshold))
        .cloned()
        .collect();
    let duplicate_pairs = count_duplicates(&songs);
    Ok(Corpus {
        name: corpus.name.clone(),
        source_path: corpus.source_path.clone(),
        songs,
        duplicate_pairs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_count: usize,
    pub validation_count: usize,
    pub seed: u64,
    pub balance_validation: bool,
}

/// Index form of a split; both lists ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
}

/// Seeded partition of song indices.
///
/// All indices are shuffled once with the crate PRNG. The validation set is
/// taken first from the shuffled order (the first `validation_count / 2` of
/// each class when balanced, otherwise the first `validation_count` songs),
/// then the training set is the next `train_count` unused songs in shuffled
/// order.
pub fn split_indices(corpus: &Corpus, spec: &SplitSpec) -> Result<SplitIndices> {
    let labels = corpus.labels()?;
    let n = labels.len();
    if spec.train_count == 0 || spec.validation_count == 0 {
        return Err(Error::InfeasibleSplit("counts must be positive".into()));
    }
    if spec.train_count + spec.validation_count > n {
        return Err(Error::InfeasibleSplit(format!(
            "{} + {} songs requested from a corpus of {n}",
            spec.train_count, spec.validation_count
        )));
    }
    if spec.balance_validation {
        if !spec.validation_count.is_multiple_of(2) {
            return Err(Error::InfeasibleSplit(format!(
                "balanced validation needs an even size, got {}",
                spec.validation_count
            )));
        }
        let half = spec.validation_count / 2;
        for label in MoodLabel::ALL {
            let have = labels.iter().filter(|&&l| l == label).count();
            if have < half {
                return Err(Error::InfeasibleSplit(format!(
                    "balanced validation needs {half} {label} songs, corpus has {have}"
                )));
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    SeededRng::new(spec.seed).shuffle(&mut order);

    let mut in_validation = vec![false; n];
    let mut validation = Vec::with_capacity(spec.validation_count);
    if spec.balance_validation {
        let half = spec.validation_count / 2;
        let mut taken = [0usize; 2];
        for &i in &order {
            let c = labels[i].index();
            if taken[c] < half {
                taken[c] += 1;
                in_validation[i] = true;
                validation.push(i);
            }
        }
    } else {
        for &i in order.iter().take(spec.validation_count) {
            in_validation[i] = true;
            validation.push(i);
        }
    }
    let mut train: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&i| !in_validation[i])
        .take(spec.train_count)
        .collect();
    train.sort_unstable();
    validation.sort_unstable();
    Ok(SplitIndices { train, validation })
}

/// Splits into (train, validation); both keep file order.
pub fn split(corpus: &Corpus, spec: &SplitSpec) -> Result<(Corpus, Corpus)> {
    let idx = split_indices(corpus, spec)?;
    Ok((
        corpus.subset(format!("{}-train", corpus.name), &idx.train),
        corpus.subset(format!("{}-validation", corpus.name), &idx.validation),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct LabelDistribution {
    pub happy: usize,
    pub sad: usize,
    pub unlabeled: usize,
}

impl LabelDistribution {
    pub fn labeled(&self) -> usize {
        self.happy + self.sad
    }

    pub fn count(&self, label: MoodLabel) -> usize {
        match label {
            MoodLabel::Happy => self.happy,
            MoodLabel::Sad => self.sad,
        }
    }

    /// Share among labeled songs; `None` when nothing is labeled.
    pub fn fraction(&self, label: MoodLabel) -> Option<f64> {
        let total = self.labeled();
        (total > 0).then(|| self.count(label) as f64 / total as f64)
    }
}

pub fn label_distribution(corpus: &Corpus) -> LabelDistribution {
    let mut d = LabelDistribution::default();
    for s in &corpus.songs {
        match s.label {
            Some(MoodLabel::Happy) => d.happy += 1,
            Some(MoodLabel::Sad) => d.sad += 1,
            None => d.unlabeled += 1,
        }
    }
    d
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecadeBucket {
    /// `None` is the bucket for songs without a year.
    pub decade: Option<i32>,
    pub songs: usize,
    pub happy: usize,
    pub sad: usize,
    pub sad_fraction: Option<f64>,
}

/// Per-decade label counts, decades ascending, the yearless bucket last.
pub fn decade_distribution(corpus: &Corpus) -> Vec<DecadeBucket> {
    let mut buckets: BTreeMap<(bool, i32), DecadeBucket> = BTreeMap::new();
    for s in &corpus.songs {
        let decade = s.year.map(|y| y - y.rem_euclid(10));
        let key = (decade.is_none(), decade.unwrap_or(0));
        let b = buckets.entry(key).or_insert(DecadeBucket {
            decade,
            songs: 0,
            happy: 0,
            sad: 0,
            sad_fraction: None,
        });
        b.songs += 1;
        match s.label {
            Some(MoodLabel::Happy) => b.happy += 1,
            Some(MoodLabel::Sad) => b.sad += 1,
            None => {}
        }
    }
    buckets
        .into_values()
        .map(|mut b| {
            let labeled = b.happy + b.sad;
            b.sad_fraction = (labeled > 0).then(|| b.sad as f64 / labeled as f64);
            b
        })
        .collect()
}

/// The `k` most frequent terms across songs carrying `label`, count
/// descending then term ascending.
pub fn top_terms(
    corpus: &Corpus,
    label: MoodLabel,
    k: usize,
    cfg: &TokenizerConfig,
    stopwords: &StopWords,
) -> Result<Vec<(String, usize)>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let mut counts: HashMap<String, usize> = HashMap::new();
    let mut seen = false;
    for s in corpus.songs.iter().filter(|s| s.label == Some(label)) {
        seen = true;
        for t in tokenize(&s.lyrics, cfg, stopwords).tokens {
            *counts.entry(t).or_insert(0) += 1;
        }
    }
    if !seen {
        return Err(Error::MissingLabel(label.as_str()));
    }
    let mut ranked: Vec<(String, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(k);
    Ok(ranked)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn song(lyrics: &str, label: Option<MoodLabel>) -> Song {
        Song::new("a", "t", None, lyrics, label)
    }

    fn labeled(n_happy: usize, n_sad: usize) -> Corpus {
        let mut songs = Vec::new();
        for i in 0..n_happy {
            songs.push(Song::new("h", format!("h{i}"), None, "sun", Some(MoodLabel::Happy)));
        }
        for i in 0..n_sad {
            songs.push(Song::new("s", format!("s{i}"), None, "rain", Some(MoodLabel::Sad)));
        }
        Corpus::new("t", songs).unwrap()
    }

    const HEADER: &str = "artist,title,year,lyrics,mood\n";

    #[test]
    fn parses_three_rows() {
        let text = format!(
            "{HEADER}A,One,1991,\"la la\nla\",HAPPY\nB,Two,,words here,sad\nC,Three,2003,more,\n"
        );
        let c = parse_corpus(text.as_bytes(), "x").unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.songs()[0].label, Some(MoodLabel::Happy));
        assert_eq!(c.songs()[0].lyrics, "la la\nla");
        assert_eq!(c.songs()[1].year, None);
        assert_eq!(c.songs()[2].label, None);
    }

    #[test]
    fn unknown_mood_names_row() {
        let text = format!("{HEADER}A,One,,x,happy\nB,Two,,y,melancholy\n");
        match parse_corpus(text.as_bytes(), "x") {
            Err(Error::CorpusRow { row, message }) => {
                assert_eq!(row, 2);
                assert!(message.contains("melancholy"));
            }
            other => panic!("expected row error, got {other:?}"),
        }
    }

    #[test]
    fn bad_header_and_empty_lyrics() {
        assert!(matches!(
            parse_corpus(b"artist,title,lyrics,mood\n", "x"),
            Err(Error::CorpusHeader { .. })
        ));
        let text = format!("{HEADER}A,One,,  ,happy\n");
        assert!(matches!(
            parse_corpus(text.as_bytes(), "x"),
            Err(Error::CorpusRow { row: 1, .. })
        ));
        let text = format!("{HEADER}A,One,99999,x,happy\n");
        assert!(parse_corpus(text.as_bytes(), "x").is_err());
    }

    #[test]
    fn duplicates_are_kept_and_counted() {
        let text = format!("{HEADER}A,One,,x,happy\nA,One,,y,sad\nB,One,,z,\n");
        let c = parse_corpus(text.as_bytes(), "x").unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.duplicate_pairs(), 1);
    }

    #[test]
    fn csv_round_trip() {
        let c = Corpus::new(
            "rt",
            vec![
                Song::new("A, the band", "Q \"uoted\"", Some(1999), "line one\n\nline, two", Some(MoodLabel::Sad)),
                song("x", None),
            ],
        )
        .unwrap();
        let mut buf = Vec::new();
        c.to_csv_writer(&mut buf).unwrap();
        let back = parse_corpus(&buf, "rt").unwrap();
        assert_eq!(back.songs(), c.songs());
    }

    #[test]
    fn english_filter_counts() {
        let dict: Dictionary = ["love"].into_iter().collect();
        let c = Corpus::new(
            "f",
            vec![song("love love amour", None), song("amour amour love", None), song("123 ...", None)],
        )
        .unwrap();
        let kept = filter_english(&c, &dict, 0.5).unwrap();
        assert_eq!(kept.len(), 1);
        assert_eq!(kept.songs()[0].lyrics, "love love amour");
        assert_eq!(filter_english(&kept, &dict, 0.5).unwrap(), kept);
    }

    #[test]
    fn english_filter_all_in_dictionary() {
        let dict = default_dictionary();
        let c = Corpus::new("f", vec![song("I love you, and you know it!", None)]).unwrap();
        for t in [0.1, 0.5, 0.9, 0.999] {
            assert_eq!(filter_english(&c, dict, t).unwrap().len(), 1);
        }
        assert!(filter_english(&c, dict, 0.0).is_err());
    }

    #[test]
    fn balanced_split_of_ten() {
        let c = labeled(5, 5);
        let spec = SplitSpec {
            train_count: 8,
            validation_count: 2,
            seed: 7,
            balance_validation: true,
        };
        let idx = split_indices(&c, &spec).unwrap();
        assert_eq!(idx.train.len(), 8);
        assert_eq!(idx.validation.len(), 2);
        assert!(idx.train.iter().all(|i| !idx.validation.contains(i)));
        let (_, val) = split(&c, &spec).unwrap();
        let d = label_distribution(&val);
        assert_eq!((d.happy, d.sad), (1, 1));
        assert_eq!(split_indices(&c, &spec).unwrap(), idx);
    }

    #[test]
    fn infeasible_splits() {
        let c = labeled(2, 8);
        let spec = |t, v| SplitSpec {
            train_count: t,
            validation_count: v,
            seed: 1,
            balance_validation: true,
        };
        assert!(split_indices(&c, &spec(8, 4)).is_err());
        assert!(split_indices(&c, &spec(4, 6)).is_err());
        assert!(split_indices(&c, &spec(6, 4)).is_ok());
        assert!(split_indices(&c, &spec(6, 3)).is_err());
        let unlabeled = Corpus::new("u", vec![song("x", None), song("y", Some(MoodLabel::Sad))]).unwrap();
        assert!(matches!(
            split_indices(&unlabeled, &spec(1, 1)),
            Err(Error::Unlabeled { count: 1 })
        ));
    }

    #[test]
    fn label_fractions() {
        let d = label_distribution(&labeled(446, 554));
        assert_eq!(d.fraction(MoodLabel::Happy), Some(0.446));
        assert_eq!(d.fraction(MoodLabel::Sad), Some(0.554));
        let one = label_distribution(&labeled(1, 0));
        assert_eq!(one.fraction(MoodLabel::Happy), Some(1.0));
        assert_eq!(one.fraction(MoodLabel::Sad), Some(0.0));
        let empty = label_distribution(&Corpus::new("e", vec![]).unwrap());
        assert_eq!(empty.labeled(), 0);
        assert_eq!(empty.fraction(MoodLabel::Happy), None);
    }

    #[test]
    fn decades() {
        let mk = |y: Option<i32>, l| Song::new("a", "t", y, "x", l);
        let c = Corpus::new(
            "d",
            vec![
                mk(Some(1991), Some(MoodLabel::Happy)),
                mk(Some(1995), Some(MoodLabel::Sad)),
                mk(Some(2003), Some(MoodLabel::Sad)),
                mk(None, None),
            ],
        )
        .unwrap();
        let d = decade_distribution(&c);
        assert_eq!(d.len(), 3);
        assert_eq!((d[0].decade, d[0].songs), (Some(1990), 2));
        assert_eq!(d[0].sad_fraction, Some(0.5));
        assert_eq!((d[1].decade, d[1].songs), (Some(2000), 1));
        assert_eq!((d[2].decade, d[2].sad_fraction), (None, None));

        let c = Corpus::new(
            "d",
            vec![
                mk(Some(1980), Some(MoodLabel::Happy)),
                mk(Some(1981), Some(MoodLabel::Sad)),
                mk(Some(1982), Some(MoodLabel::Sad)),
                mk(Some(1989), Some(MoodLabel::Sad)),
            ],
        )
        .unwrap();
        assert_eq!(decade_distribution(&c)[0].sad_fraction, Some(0.75));
    }

    #[test]
    fn top_terms_ranking() {
        let c = Corpus::new(
            "t",
            vec![
                song("love love sun", Some(MoodLabel::Happy)),
                song("rain", Some(MoodLabel::Sad)),
            ],
        )
        .unwrap();
        let cfg = TokenizerConfig::plain();
        let sw = StopWords::empty();
        let top = top_terms(&c, MoodLabel::Happy, 5, &cfg, &sw).unwrap();
        assert_eq!(top, [("love".to_string(), 2), ("sun".to_string(), 1)]);
        assert_eq!(top_terms(&c, MoodLabel::Happy, 1, &cfg, &sw).unwrap().len(), 1);
        let tie = Corpus::new("t", vec![song("b a", Some(MoodLabel::Sad))]).unwrap();
        let top = top_terms(&tie, MoodLabel::Sad, 2, &cfg, &sw).unwrap();
        assert_eq!(top[0].0, "a");
        assert!(matches!(
            top_terms(&tie, MoodLabel::Happy, 2, &cfg, &sw),
            Err(Error::MissingLabel("happy"))
        ));
    }
}
