use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use lyricmood_core::corpus::{decade_distribution, label_distribution, top_terms};
use lyricmood_core::eval::{cross_validate, grid_search, roc_csv, GridSearchResult};
use lyricmood_core::{
    default_dictionary, default_stopwords, evaluate_holdout, filter_english, load_corpus, split, synth_corpus, train,
    Corpus, EvalReport, MoodLabel, MoodModel, SplitSpec, TokenizerConfig,
};
use serde_json::json;

use crate::args::{Cli, Command, GlobalArgs};
use crate::config::{GridFile, RunConfig};
use crate::error::UsageError;
use crate::output::{real, render, Format};
use crate::predict::{predict, split_documents};
use crate::service::{serve, ServeOptions};

pub const DEFAULT_SEED: u64 = 42;

pub fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Stats {
            corpus,
            top_terms,
            label,
            stem,
            english_threshold,
        } => stats(g, &mut out, &corpus, top_terms, label, stem, english_threshold),
        Command::Train {
            corpus,
            config,
            out: model_out,
            force,
        } => cmd_train(g, &mut out, &corpus, &config, &model_out, force),
        Command::Eval { corpus, model, roc_out } => cmd_eval(g, &mut out, &corpus, &model, roc_out.as_deref()),
        Command::Cv {
            corpus,
            config,
            folds,
            out: csv_out,
        } => cmd_cv(g, &mut out, &corpus, &config, folds, csv_out.as_deref()),
        Command::Gridsearch {
            corpus,
            grid,
            out: csv_out,
            best_out,
            jobs,
        } => cmd_gridsearch(g, &mut out, &corpus, &grid, &csv_out, best_out, jobs),
        Command::Predict { model, input, json } => cmd_predict(g, &mut out, &model, input.as_deref(), json),
        Command::Synth {
            out: path,
            n,
            separation,
        } => cmd_synth(g, &path, n, separation),
        Command::Split {
            corpus,
            train_count,
            validation_count,
            balanced,
            train_out,
            validation_out,
        } => cmd_split(
            g,
            &corpus,
            SplitSpec {
                train_count,
                validation_count,
                seed: g.seed.unwrap_or(DEFAULT_SEED),
                balance_validation: balanced,
            },
            &train_out,
            &validation_out,
        ),
        Command::Serve {
            model,
            bind,
            port,
            max_body_bytes,
        } => serve(
            &model,
            &ServeOptions {
                bind,
                port,
                max_body_bytes,
            },
            g.quiet,
        ),
    }
}

fn status(g: &GlobalArgs, msg: impl AsRef<str>) {
    if !g.quiet {
        eprintln!("{}", msg.as_ref());
    }
}

fn load(path: &Path, english_threshold: Option<f64>) -> Result<Corpus> {
    let corpus = load_corpus(path)?;
    match english_threshold {
        Some(t) => Ok(filter_english(&corpus, default_dictionary(), t)?),
        None => Ok(corpus),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn fraction(x: Option<f64>, format: Format) -> String {
    x.map(|v| real(format, v)).unwrap_or_default()
}

fn stats(
    g: &GlobalArgs,
    out: &mut impl Write,
    path: &Path,
    k: usize,
    label: Option<MoodLabel>,
    stem: bool,
    english_threshold: Option<f64>,
) -> Result<()> {
    if k == 0 {
        return Err(UsageError("--top-terms must be positive".into()).into());
    }
    let corpus = load(path, english_threshold)?;
    let labels = label_distribution(&corpus);
    let decades = decade_distribution(&corpus);
    let cfg = TokenizerConfig::new(1, 1, true, stem)?;
    let classes: Vec<MoodLabel> = match label {
        Some(l) => vec![l],
        None => MoodLabel::ALL.into_iter().filter(|&l| labels.count(l) > 0).collect(),
    };
    let mut terms = Vec::new();
    for &l in &classes {
        terms.push((l, top_terms(&corpus, l, k, &cfg, default_stopwords())?));
    }
    let decade_name = |d: Option<i32>| d.map(|d| format!("{d}s")).unwrap_or_else(|| "unknown".into());

    let f = g.format;
    if f == Format::Json {
        let top: serde_json::Map<String, serde_json::Value> = terms
            .iter()
            .map(|(l, t)| {
                let rows: Vec<_> = t.iter().map(|(term, c)| json!({"term": term, "count": c})).collect();
                (l.as_str().to_string(), json!(rows))
            })
            .collect();
        let decades: Vec<_> = decades
            .iter()
            .map(|b| {
                json!({"decade": decade_name(b.decade), "songs": b.songs, "happy": b.happy, "sad": b.sad, "sad_fraction": b.sad_fraction})
            })
            .collect();
        let doc = json!({
            "songs": corpus.len(),
            "duplicate_pairs": corpus.duplicate_pairs(),
            "labels": labels,
            "decades": decades,
            "top_terms": top,
        });
        writeln!(out, "{doc}")?;
        return Ok(());
    }

    let mut label_rows: Vec<Vec<String>> = MoodLabel::ALL
        .iter()
        .map(|&l| vec![l.to_string(), labels.count(l).to_string(), fraction(labels.fraction(l), f)])
        .collect();
    if labels.unlabeled > 0 {
        label_rows.push(vec!["unlabeled".into(), labels.unlabeled.to_string(), String::new()]);
    }
    let decade_rows: Vec<Vec<String>> = decades
        .iter()
        .map(|b| {
            vec![
                decade_name(b.decade),
                b.songs.to_string(),
                b.happy.to_string(),
                b.sad.to_string(),
                fraction(b.sad_fraction, f),
            ]
        })
        .collect();

    if f == Format::Csv {
        let mut rows: Vec<Vec<String>> = Vec::new();
        for r in &label_rows {
            rows.push(vec!["labels".into(), r[0].clone(), r[1].clone(), String::new(), String::new(), r[2].clone()]);
        }
        for r in &decade_rows {
            rows.push(vec!["decade".into(), r[0].clone(), r[1].clone(), r[2].clone(), r[3].clone(), r[4].clone()]);
        }
        for (l, t) in &terms {
            for (term, c) in t {
                rows.push(vec![format!("top_{l}"), term.clone(), c.to_string(), String::new(), String::new(), String::new()]);
            }
        }
        write!(out, "{}", render(f, &["section", "key", "count", "happy", "sad", "fraction"], &rows))?;
        return Ok(());
    }

    writeln!(out, "Songs: {} ({} duplicate pairs)\n", corpus.len(), corpus.duplicate_pairs())?;
    writeln!(out, "Label distribution")?;
    write!(out, "{}", render(f, &["label", "songs", "fraction"], &label_rows))?;
    writeln!(out, "\nDecades")?;
    write!(out, "{}", render(f, &["decade", "songs", "happy", "sad", "sad_fraction"], &decade_rows))?;
    for (l, t) in &terms {
        writeln!(out, "\nTop terms ({l})")?;
        let rows: Vec<Vec<String>> = t
            .iter()
            .enumerate()
            .map(|(i, (term, c))| vec![(i + 1).to_string(), term.clone(), c.to_string()])
            .collect();
        write!(out, "{}", render(f, &["rank", "term", "count"], &rows))?;
    }
    Ok(())
}

fn print_report(out: &mut impl Write, format: Format, report: &EvalReport) -> Result<()> {
    if format == Format::Json {
        writeln!(out, "{}", serde_json::to_string(report)?)?;
        return Ok(());
    }
    let cm = &report.confusion;
    let rows = vec![
        vec!["samples".into(), report.samples.to_string()],
        vec!["tp".into(), cm.tp.to_string()],
        vec!["fp".into(), cm.fp.to_string()],
        vec!["fn".into(), cm.fn_.to_string()],
        vec!["tn".into(), cm.tn.to_string()],
        vec!["accuracy".into(), real(format, report.accuracy)],
        vec!["precision".into(), real(format, report.precision)],
        vec!["recall".into(), real(format, report.recall)],
        vec!["f1".into(), real(format, report.f1)],
        vec!["roc_auc".into(), fraction(report.roc_auc, format)],
    ];
    write!(out, "{}", render(format, &["metric", "value"], &rows))?;
    Ok(())
}

fn cmd_train(g: &GlobalArgs, out: &mut impl Write, corpus: &Path, config: &Path, model_out: &Path, force: bool) -> Result<()> {
    let cfg = RunConfig::load(config)?;
    if model_out.exists() && !force {
        return Err(UsageError(format!("{} exists; pass --force to overwrite", model_out.display())).into());
    }
    let corpus = load(corpus, cfg.english_threshold)?;
    status(g, format!("training {} on {} songs", cfg.pipeline.kind, corpus.len()));
    let model = train(&corpus, &cfg.pipeline, default_stopwords())?;
    model.save(model_out)?;
    status(
        g,
        format!(
            "wrote {} ({} terms, fingerprint {})",
            model_out.display(),
            model.vocabulary().len(),
            model.fingerprint().short()
        ),
    );
    print_report(out, g.format, &evaluate_holdout(&model, &corpus)?)
}

fn cmd_eval(g: &GlobalArgs, out: &mut impl Write, corpus: &Path, model: &Path, roc_out: Option<&Path>) -> Result<()> {
    let model = MoodModel::load(model)?;
    let corpus = load_corpus(corpus)?;
    let report = evaluate_holdout(&model, &corpus)?;
    if let Some(path) = roc_out {
        let Some(roc) = &report.roc else {
            bail!("ROC curve needs both happy and sad songs in the corpus");
        };
        write_file(path, &roc_csv(roc))?;
    }
    print_report(out, g.format, &report)
}

fn cmd_cv(
    g: &GlobalArgs,
    out: &mut impl Write,
    corpus: &Path,
    config: &Path,
    folds: Option<usize>,
    csv_out: Option<&Path>,
) -> Result<()> {
    let cfg = RunConfig::load(config)?;
    let k = folds.unwrap_or(cfg.folds);
    let seed = g.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED);
    let corpus = load(corpus, cfg.english_threshold)?;
    status(g, format!("{k}-fold cross-validation on {} songs", corpus.len()));
    let cv = cross_validate(&corpus, &cfg.pipeline, default_stopwords(), k, seed, cfg.objective)?;
    let result = GridSearchResult::from_rows(cfg.objective, vec![cfg.pipeline], vec![cv]);
    let csv = result.to_csv();
    if let Some(path) = csv_out {
        write_file(path, &csv)?;
    }
    let row = &result.rows[0];
    match g.format {
        Format::Csv => write!(out, "{csv}")?,
        Format::Json => {
            let folds: Vec<_> = row
                .cv
                .folds
                .iter()
                .map(|f| json!({"f1": f.confusion.f1(), "roc_auc": f.roc.auc, "confusion": f.confusion}))
                .collect();
            let doc = json!({
                "objective": cfg.objective.as_str(),
                "folds": folds,
                "mean_f1": row.cv.mean_f1(),
                "mean_roc_auc": row.cv.mean_auc(),
                "mean": row.mean,
            });
            writeln!(out, "{doc}")?;
        }
        Format::Table => {
            let f = g.format;
            let mut rows: Vec<Vec<String>> = row
                .cv
                .folds
                .iter()
                .enumerate()
                .map(|(i, o)| vec![i.to_string(), real(f, o.confusion.f1()), real(f, o.roc.auc)])
                .collect();
            rows.push(vec!["mean".into(), real(f, row.cv.mean_f1()), real(f, row.cv.mean_auc())]);
            write!(out, "{}", render(f, &["fold", "f1", "roc_auc"], &rows))?;
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_gridsearch(
    g: &GlobalArgs,
    out: &mut impl Write,
    corpus: &Path,
    grid: &Path,
    csv_out: &Path,
    best_out: Option<PathBuf>,
    jobs: Option<usize>,
) -> Result<()> {
    let mut grid = GridFile::load(grid)?;
    if let Some(s) = g.seed {
        grid.spec.seed = s;
    } else if !grid.seed_given {
        grid.spec.seed = DEFAULT_SEED;
    }
    if jobs == Some(0) {
        return Err(UsageError("--jobs must be positive".into()).into());
    }
    let corpus = load(corpus, grid.english_threshold)?;
    status(
        g,
        format!(
            "grid search: {} combinations x {} folds on {} songs",
            grid.spec.combination_count(),
            grid.spec.folds,
            corpus.len()
        ),
    );
    let result = grid_search(&corpus, &grid.spec, default_stopwords(), jobs)?;
    let csv = result.to_csv();
    write_file(csv_out, &csv)?;

    let best = result.best();
    let best_cfg = RunConfig {
        english_threshold: grid.english_threshold,
        folds: grid.spec.folds,
        objective: grid.spec.objective,
        seed: Some(grid.spec.seed),
        ..RunConfig::from_pipeline(best.config)
    };
    let best_path = best_out.unwrap_or_else(|| csv_out.with_extension("best.conf"));
    write_file(&best_path, &best_cfg.to_text())?;
    status(g, format!("wrote {} and {}", csv_out.display(), best_path.display()));

    let f = g.format;
    match f {
        Format::Csv => write!(out, "{csv}")?,
        Format::Json => {
            let rows: Vec<_> = result
                .ranked()
                .iter()
                .map(|r| {
                    let (lo, hi) = r.config.tokenizer.ngram_range();
                    json!({
                        "rank": r.rank,
                        "combo": r.index,
                        "model": r.config.kind.as_str(),
                        "ngram_lo": lo,
                        "ngram_hi": hi,
                        "remove_stopwords": r.config.tokenizer.remove_stopwords,
                        "stem": r.config.tokenizer.stem,
                        "max_features": r.config.vocab.max_features,
                        "min_df": r.config.vocab.min_df,
                        "alpha": r.config.alpha,
                        "mean_f1": r.cv.mean_f1(),
                        "mean_roc_auc": r.cv.mean_auc(),
                        "mean": r.mean,
                    })
                })
                .collect();
            writeln!(out, "{}", json!({"objective": result.objective.as_str(), "rows": rows}))?;
        }
        Format::Table => {
            let rows: Vec<Vec<String>> = result
                .ranked()
                .iter()
                .map(|r| {
                    let c = &r.config;
                    let (lo, hi) = c.tokenizer.ngram_range();
                    vec![
                        r.rank.to_string(),
                        c.kind.to_string(),
                        format!("{lo}-{hi}"),
                        c.tokenizer.remove_stopwords.to_string(),
                        c.tokenizer.stem.to_string(),
                        c.vocab.max_features.map(|m| m.to_string()).unwrap_or_else(|| "none".into()),
                        c.vocab.min_df.to_string(),
                        c.alpha.to_string(),
                        real(f, r.cv.mean_f1()),
                        real(f, r.cv.mean_auc()),
                    ]
                })
                .collect();
            write!(
                out,
                "{}",
                render(
                    f,
                    &["rank", "model", "ngram", "stopwords", "stem", "max_features", "min_df", "alpha", "mean_f1", "mean_auc"],
                    &rows
                )
            )?;
        }
    }
    Ok(())
}

fn cmd_predict(g: &GlobalArgs, out: &mut impl Write, model: &Path, input: Option<&Path>, json: bool) -> Result<()> {
    let model = MoodModel::load(model)?;
    let text = match input {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
            s
        }
    };
    let docs = split_documents(&text);
    let format = if json { Format::Json } else { g.format };
    if format == Format::Csv && !docs.is_empty() {
        writeln!(out, "label,p_happy,p_sad")?;
    }
    for doc in &docs {
        let r = predict(&model, doc, None);
        match format {
            Format::Json => writeln!(out, "{}", serde_json::to_string(&r)?)?,
            Format::Csv => writeln!(out, "{},{},{}", r.label, r.p_happy, r.p_sad)?,
            Format::Table => writeln!(out, "{}\t{}\t{}", r.label, r.p_happy, r.p_sad)?,
        }
    }
    Ok(())
}

fn cmd_synth(g: &GlobalArgs, path: &Path, n: usize, separation: f64) -> Result<()> {
    let seed = g.seed.unwrap_or(DEFAULT_SEED);
    let corpus = synth_corpus(n, seed, separation)?;
    corpus.save_csv(path)?;
    let d = label_distribution(&corpus);
    status(
        g,
        format!("wrote {} songs ({} happy, {} sad) to {}", corpus.len(), d.happy, d.sad, path.display()),
    );
    Ok(())
}

fn cmd_split(g: &GlobalArgs, corpus: &Path, spec: SplitSpec, train_out: &Path, validation_out: &Path) -> Result<()> {
    let corpus = load_corpus(corpus)?;
    let (train_set, valid) = split(&corpus, &spec)?;
    train_set.save_csv(train_out)?;
    valid.save_csv(validation_out)?;
    status(
        g,
        format!("wrote {} training and {} validation songs", train_set.len(), valid.len()),
    );
    Ok(())
}
