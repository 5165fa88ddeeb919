//! Seeded synthetic lyrics corpus with a tunable class separation.
//!
//! Words come from the embedded English word list: lowercase ASCII words of
//! at least four letters that are not stop words and are their own Porter
//! stem. They are dealt in frequency order to three pools of
//! [`POOL_SIZE`] words each: happy-only, sad-only and shared. The shared
//! distribution covers the stop words (in list order) followed by the
//! shared content words.
//!
//! Each pool has Zipf weights `1 / rank`. A song of class `c` draws every
//! token from the mixture `s * own_c + (1 - s) * shared`, with `s` the
//! separation. At `s = 1` the classes have disjoint supports; at `s = 0`
//! both classes share one distribution.
//!
//! Per song, in PRNG order: label (happy with probability
//! [`HAPPY_PROBABILITY`]), token count uniform in `40..=120`, the tokens,
//! line lengths uniform in `5..=9`, then the year (missing with
//! probability 0.1, otherwise uniform in `1960..=2010`).

use std::sync::OnceLock;

use crate::corpus::{Corpus, MoodLabel, Song, ENGLISH_10K};
use crate::error::{Error, Result};
use crate::porter::porter_stem;
use crate::rng::SeededRng;
use crate::text::{default_stopwords, STOPWORDS_EN};

pub const POOL_SIZE: usize = 350;
pub const HAPPY_PROBABILITY: f64 = 0.446;
const MIN_TOKENS: u64 = 40;
const MAX_TOKENS: u64 = 120;

struct Pools {
    happy: Vec<&'static str>,
    sad: Vec<&'static str>,
    shared: Vec<&'static str>,
}

fn pools() -> &'static Pools {
    static POOLS: OnceLock<Pools> = OnceLock::new();
    POOLS.get_or_init(|| {
        let stop = default_stopwords();
        let content: Vec<&'static str> = ENGLISH_10K
            .lines()
            .map(str::trim)
            .filter(|w| w.len() >= 4 && w.bytes().all(|b| b.is_ascii_lowercase()))
            .filter(|w| !stop.contains(w) && porter_stem(w) == *w)
            .take(3 * POOL_SIZE)
            .collect();
        assert_eq!(content.len(), 3 * POOL_SIZE, "word list too small");
        let deal = |k: usize| content.iter().skip(k).step_by(3).copied().collect::<Vec<_>>();
        let mut shared: Vec<&'static str> = STOPWORDS_EN.lines().map(str::trim).filter(|w| !w.is_empty()).collect();
        shared.extend(deal(2));
        Pools {
            happy: deal(0),
            sad: deal(1),
            shared,
        }
    })
}

fn zipf(n: usize) -> Vec<f64> {
    let w: Vec<f64> = (1..=n).map(|r| 1.0 / r as f64).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

struct Mixture {
    words: Vec<&'static str>,
    cumulative: Vec<f64>,
}

impl Mixture {
    fn new(own: &[&'static str], shared: &[&'static str], separation: f64) -> Self {
        let weights = zipf(own.len())
            .into_iter()
            .map(|p| separation * p)
            .chain(zipf(shared.len()).into_iter().map(|p| (1.0 - separation) * p));
        let mut acc = 0.0;
        let cumulative = weights
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        Mixture {
            words: own.iter().chain(shared).copied().collect(),
            cumulative,
        }
    }

    fn draw(&self, rng: &mut SeededRng) -> &'static str {
        self.words[rng.pick_cumulative(&self.cumulative)]
    }
}

fn capitalize(word: &str) -> String {
    let mut c = word.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// `n` labeled songs. `separation` must lie in `[0, 1]`.
pub fn synth_corpus(n: usize, seed: u64, separation: f64) -> Result<Corpus> {
    if n == 0 {
        return Err(Error::InvalidArgument("synthetic corpus needs at least one song".into()));
    }
    if !(0.0..=1.0).contains(&separation) {
        return Err(Error::InvalidArgument(format!(
            "separation must be in [0, 1], got {separation}"
        )));
    }
    let p = pools();
    let happy = Mixture::new(&p.happy, &p.shared, separation);
    let sad = Mixture::new(&p.sad, &p.shared, separation);
    let mut rng = SeededRng::new(seed);
    let mut songs = Vec::with_capacity(n);
    for i in 0..n {
        let label = if rng.unit_f64() < HAPPY_PROBABILITY {
            MoodLabel::Happy
        } else {
            MoodLabel::Sad
        };
        let mix = match label {
            MoodLabel::Happy => &happy,
            MoodLabel::Sad => &sad,
        };
        let len = (MIN_TOKENS + rng.below(MAX_TOKENS - MIN_TOKENS + 1)) as usize;
        let tokens: Vec<&str> = (0..len).map(|_| mix.draw(&mut rng)).collect();
        let mut lines = Vec::new();
        let mut rest = &tokens[..];
        while !rest.is_empty() {
            let take = ((5 + rng.below(5)) as usize).min(rest.len());
            let (line, tail) = rest.split_at(take);
            let mut words = line.iter();
            let first = capitalize(words.next().expect("non-empty line"));
            lines.push(std::iter::once(first).chain(words.map(|w| w.to_string())).collect::<Vec<_>>().join(" "));
            rest = tail;
        }
        let year = if rng.unit_f64() < 0.1 {
            None
        } else {
            Some(1960 + rng.below(51) as i32)
        };
        songs.push(Song::new(
            format!("Synth Artist {}", i % 37),
            format!("Song {}", i + 1),
            year,
            lines.join("\n"),
            Some(label),
        ));
    }
    Corpus::new(format!("synth-n{n}-seed{seed}-sep{separation}"), songs)
}
