mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::thread;

use common::{canonical, http, p, run, run_ok, Server};

const CONFIG: &str = "model = multinomial-tfidf\nngram_lo = 1\nngram_hi = 1\nremove_stopwords = true\nstem = true\nmin_df = 1\nalpha = 1\n";

const TOY: &str = "artist,title,year,lyrics,mood
A,Sunny,1975,\"sunshine smile dance\nsunshine party\",happy
B,Joy,1982,\"dance party smile bright\",happy
C,Glow,,\"bright sunshine joy joy\",happy
D,Tears,1991,\"tears rain lonely\ncold night\",sad
E,Gone,2003,\"lonely cold goodbye tears\",sad
F,Grey,,\"rain goodbye night grey\",sad
";

struct Fixture {
    dir: tempfile::TempDir,
}

impl Fixture {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("toy.csv"), TOY).unwrap();
        fs::write(dir.path().join("run.conf"), CONFIG).unwrap();
        Fixture { dir }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn model(&self) -> PathBuf {
        let m = self.path("toy.json");
        if !m.exists() {
            run_ok(&["-q", "train", p(&self.path("toy.csv")), "--config", p(&self.path("run.conf")), "--out", p(&m)]);
        }
        m
    }
}

fn code(args: &[&str]) -> i32 {
    run(args, "").status.code().unwrap()
}

#[test]
fn stats_reports_labels_decades_and_terms() {
    let fx = Fixture::new();
    let csv = run_ok(&["--format", "csv", "stats", p(&fx.path("toy.csv")), "--top-terms", "2"]);
    assert!(csv.starts_with("section,key,count,happy,sad,fraction\n"));
    assert!(csv.contains("labels,happy,3,,,0.5\n"));
    assert!(csv.contains("decade,unknown,2,1,1,0.5\n"));
    assert_eq!(csv.lines().filter(|l| l.starts_with("top_happy,")).count(), 2);
    let json: serde_json::Value =
        serde_json::from_str(&run_ok(&["--format", "json", "stats", p(&fx.path("toy.csv")), "--label", "sad"])).unwrap();
    assert_eq!(json["labels"]["sad"], 3);
    assert!(json["top_terms"].get("happy").is_none());
    assert!(run_ok(&["stats", p(&fx.path("toy.csv"))]).contains("unknown"));
}

#[test]
fn train_then_eval_agree() {
    let fx = Fixture::new();
    let (model, toy, conf) = (fx.path("m.json"), fx.path("toy.csv"), fx.path("run.conf"));
    let args = ["--format", "json", "train", p(&toy), "--config", p(&conf), "--out", p(&model)];
    let trained: serde_json::Value = serde_json::from_str(&run_ok(&args)).unwrap();
    assert_eq!(trained["precision"], 1.0);
    let roc = fx.path("roc.csv");
    let evaluated = run_ok(&[
        "--format", "json", "eval", p(&fx.path("toy.csv")), "--model", p(&model), "--roc-out", p(&roc),
    ]);
    assert_eq!(canonical(&evaluated), trained.to_string());
    assert!(fs::read_to_string(&roc).unwrap().starts_with("fpr,tpr,threshold\n"));

    let again = run(&args, "");
    assert_eq!(again.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&again.stderr).contains("--force"));
    let mut forced = args.to_vec();
    forced.push("--force");
    run_ok(&forced);
}

#[test]
fn config_errors_exit_with_usage_code() {
    let fx = Fixture::new();
    let conf = fx.path("bad.conf");
    fs::write(&conf, CONFIG.replace("alpha = 1\n", "")).unwrap();
    let out = run(&["train", p(&fx.path("toy.csv")), "--config", p(&conf), "--out", p(&fx.path("x.json"))], "");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`alpha`"));
    fs::write(&conf, format!("{CONFIG}colour = blue\n")).unwrap();
    let out = run(&["cv", p(&fx.path("toy.csv")), "--config", p(&conf)], "");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`colour`"));
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["synth", "--out", p(&fx.path("s.csv")), "--separation", "2"]), 1);
}

#[test]
fn data_errors_exit_with_data_code() {
    let fx = Fixture::new();
    let unlabeled = fx.path("unlabeled.csv");
    fs::write(&unlabeled, "artist,title,year,lyrics,mood\nA,B,,some words,\n").unwrap();
    let out = run(&["eval", p(&unlabeled), "--model", p(&fx.model())], "");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unlabeled"));
    assert_eq!(code(&["eval", p(&fx.path("toy.csv")), "--model", p(&fx.path("missing.json"))]), 2);
    let garbled = fx.path("garbled.json");
    fs::write(&garbled, "{\"format\":").unwrap();
    assert_eq!(code(&["predict", "--model", p(&garbled)]), 2);
}

#[test]
fn predict_formats() {
    let fx = Fixture::new();
    let model = fx.model();
    let empty = run(&["predict", "--model", p(&model)], "");
    assert!(empty.status.success());
    assert!(empty.stdout.is_empty());

    let input = "sunshine smile dance\nsunshine party\n---\ntears rain lonely\n\ncold night\n";
    let out = run(&["predict", "--model", p(&model)], input);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    let first: Vec<&str> = lines[0].split('\t').collect();
    assert_eq!(first[0], "happy");
    assert!(first[1].parse::<f64>().unwrap() > 0.5);
    assert!(lines[1].starts_with("sad\t"));

    let out = run(&["predict", "--model", p(&model), "--json"], input);
    for line in String::from_utf8(out.stdout).unwrap().lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let sum = v["p_happy"].as_f64().unwrap() + v["p_sad"].as_f64().unwrap();
        assert!((sum - 1.0).abs() < 1e-9);
        assert_eq!(v["model_fingerprint"].as_str().unwrap().len(), 64);
    }
}

fn grid_run(fx: &Fixture, corpus: &Path, grid: &str, tag: &str) -> (String, PathBuf) {
    let g = fx.path(&format!("{tag}.grid"));
    fs::write(&g, grid).unwrap();
    let out = fx.path(&format!("{tag}.csv"));
    run_ok(&["-q", "gridsearch", p(corpus), "--grid", p(&g), "--out", p(&out), "--jobs", "2"]);
    (fs::read_to_string(&out).unwrap(), fx.path(&format!("{tag}.best.conf")))
}

#[test]
fn gridsearch_outputs() {
    let fx = Fixture::new();
    let corpus = fx.path("synth.csv");
    run_ok(&["-q", "--seed", "5", "synth", "--n", "120", "--separation", "0.3", "--out", p(&corpus)]);
    let one = "model = multinomial-tf\nalpha = 1\nremove_stopwords = true\nfolds = 3\n";
    let (csv, best) = grid_run(&fx, &corpus, one, "one");
    assert_eq!(csv.lines().filter(|l| l.starts_with("summary,")).count(), 1);
    assert_eq!(csv.lines().filter(|l| l.starts_with("fold,")).count(), 3);
    run_ok(&["-q", "train", p(&corpus), "--config", p(&best), "--out", p(&fx.path("best.json"))]);

    let three = "model = multinomial-tf\nalpha = 0.1, 1, 10\nremove_stopwords = true\nfolds = 4\n";
    let (a, _) = grid_run(&fx, &corpus, three, "a");
    let (b, _) = grid_run(&fx, &corpus, three, "b");
    assert_eq!(a, b);
    let ranks: Vec<&str> = a.lines().filter(|l| l.starts_with("summary,")).map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(ranks, ["1", "2", "3"]);
}

#[test]
fn synth_writes_requested_rows() {
    let fx = Fixture::new();
    let out = fx.path("s.csv");
    run_ok(&["-q", "--seed", "42", "synth", "--n", "1000", "--out", p(&out)]);
    let stats: serde_json::Value = serde_json::from_str(&run_ok(&["--format", "json", "stats", p(&out)])).unwrap();
    assert_eq!(stats["songs"], 1000);
    assert!(stats["labels"]["happy"].as_u64().unwrap() > 0 && stats["labels"]["sad"].as_u64().unwrap() > 0);
}

#[test]
fn cv_and_split() {
    let fx = Fixture::new();
    let corpus = fx.path("synth.csv");
    run_ok(&["-q", "synth", "--n", "200", "--separation", "1", "--out", p(&corpus)]);
    let cv: serde_json::Value =
        serde_json::from_str(&run_ok(&["--format", "json", "cv", p(&corpus), "--config", p(&fx.path("run.conf")), "--folds", "5"])).unwrap();
    assert_eq!(cv["mean_f1"], 1.0);
    assert_eq!(cv["folds"].as_array().unwrap().len(), 5);
    run_ok(&[
        "-q", "split", p(&corpus), "--train-count", "150", "--validation-count", "40", "--balanced",
        "--train-out", p(&fx.path("tr.csv")), "--validation-out", p(&fx.path("va.csv")),
    ]);
    let va: serde_json::Value = serde_json::from_str(&run_ok(&["--format", "json", "stats", p(&fx.path("va.csv"))])).unwrap();
    assert_eq!((va["labels"]["happy"].as_u64(), va["labels"]["sad"].as_u64()), (Some(20), Some(20)));
}

#[test]
fn service_endpoints() {
    let fx = Fixture::new();
    let model = fx.model();
    let server = Server::start(&model, &["--max-body-bytes", "2048"]);

    let (status, body) = server.request("GET", "/healthz", b"");
    assert_eq!(status, 200);
    let health: serde_json::Value = serde_json::from_str(&body).unwrap();
    let fingerprint = health["model_fingerprint"].as_str().unwrap().to_string();

    let (status, body) = server.request("GET", "/model/info", b"");
    assert_eq!(status, 200);
    let info: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!((info["variant"].as_str(), info["scheme"].as_str()), (Some("multinomial"), Some("tfidf")));
    assert_eq!(info["fingerprint"].as_str(), Some(fingerprint.as_str()));
    let stored: serde_json::Value = serde_json::from_str(&fs::read_to_string(&model).unwrap()).unwrap();
    assert_eq!(info["vocabulary_size"].as_u64().unwrap() as usize, stored["payload"]["vocabulary"]["terms"].as_array().unwrap().len());

    let (status, body) = server.request("POST", "/predict", br#"{"lyrics":"sunshine smile dance","id":"q1"}"#);
    assert_eq!(status, 200);
    let v: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["label"], "happy");
    assert_eq!(v["id"], "q1");
    assert!(v["p_happy"].as_f64().unwrap() > 0.5);

    for bad in [&br#"{"lyrics":"  "}"#[..], br#"{"lyrics":5}"#, br#"{}"#, b"not json", br#"["lyrics"]"#] {
        let (status, body) = server.request("POST", "/predict", bad);
        assert_eq!(status, 400, "{}", String::from_utf8_lossy(bad));
        assert!(body.contains("error"));
    }
    let (_, body) = server.request("POST", "/predict", br#"{"lyrics":""}"#);
    assert!(body.contains("\"field\":\"lyrics\""));
    let big = format!("{{\"lyrics\":\"{}\"}}", "la ".repeat(2000));
    assert_eq!(server.request("POST", "/predict", big.as_bytes()).0, 413);

    let addr = server.addr.clone();
    let handles: Vec<_> = (0..8)
        .map(|i| {
            let addr = addr.clone();
            thread::spawn(move || {
                let body = format!("{{\"lyrics\":\"tears rain {}\"}}", if i % 2 == 0 { "lonely" } else { "party" });
                http(&addr, "POST", "/predict", body.as_bytes())
            })
        })
        .collect();
    let results: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    for (i, r) in results.iter().enumerate() {
        assert_eq!(r, &results[i % 2]);
    }
    assert!(server.terminate());

    let restarted = Server::start(&model, &[]);
    let (_, body) = restarted.request("GET", "/healthz", b"");
    assert!(body.contains(&fingerprint));
    assert!(restarted.terminate());
}

#[test]
fn serve_refuses_bad_model() {
    let fx = Fixture::new();
    let out = run(&["serve", "--model", p(&fx.path("nope.json")), "--port", "0"], "");
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).contains("listening"));
}
