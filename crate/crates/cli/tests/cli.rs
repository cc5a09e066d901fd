use std::fs;
use std::path::{Path, PathBuf};

use tempfile::TempDir;
use toxspan::corpus::{parse_dataset, write_dataset};
use toxspan::eval::evaluate_corpus;
use toxspan::lexicon::LexiconTagger;
use toxspan::synthetic::{generate, SyntheticConfig};
use toxspan::{Lexicon, SpanTagger};
use toxspan_cli::{run, EXIT_DATA, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE};

const SAMPLE_POSTS: &str = "spans,text\n\
\"[0, 1, 2, 3, 4, 5, 34, 35, 36, 37, 38, 39]\",Stupid hatcheries have completely fucked everything\n\
\"[28, 29, 30, 31, 32, 33, 34]\",Victimitis: You are such an asshole.\n\
[],So is his mother. They are silver spoon parasites.\n\
\"[12, 13, 14, 15, 16]\",You're just silly.\n";

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Out {
    let mut stdout = Vec::new();
    let mut stderr = Vec::new();
    let mut argv = vec!["toxspan"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut stdout, &mut stderr);
    Out {
        code,
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

fn synthetic_files(dir: &Path, censor_rate: f64) -> (PathBuf, PathBuf) {
    let corpus = generate(&SyntheticConfig {
        posts: 400,
        seed: 21,
        censor_rate,
        ..Default::default()
    });
    let (train, test) = corpus.posts.split_at(320);
    let train_path = dir.join("train.csv");
    let test_path = dir.join("test.csv");
    write_dataset(train, fs::File::create(&train_path).unwrap()).unwrap();
    write_dataset(test, fs::File::create(&test_path).unwrap()).unwrap();
    (train_path, test_path)
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let out = cli(&["frobnicate"]);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("Usage"));
    assert_eq!(cli(&["train", "--bogus"]).code, EXIT_USAGE);
    assert_eq!(cli(&["--help"]).code, EXIT_OK);
}

#[test]
fn missing_input_names_path() {
    let dir = TempDir::new().unwrap();
    let missing = p(dir.path(), "nope.csv");
    let out = cli(&["evaluate", "--pred", &missing, "--gold", &missing]);
    assert_eq!(out.code, EXIT_DATA);
    assert!(out.stderr.contains("nope.csv"), "{}", out.stderr);
}

#[test]
fn malformed_dataset_is_data_error() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "spans,text\n\"[60]\",\"short\"\n").unwrap();
    let out = cli(&[
        "train",
        "--data",
        &bad.display().to_string(),
        "--out",
        &p(dir.path(), "m.crf"),
    ]);
    assert_eq!(out.code, EXIT_DATA);
    assert!(
        out.stderr.contains("offset 60 exceeds text length 5"),
        "{}",
        out.stderr
    );
}

#[test]
fn lexicon_build_merges_lists_and_mined_words() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("a.txt"), "# list\nIdiot\nfucked\n").unwrap();
    fs::write(dir.path().join("sample.csv"), SAMPLE_POSTS).unwrap();
    let out = cli(&[
        "lexicon-build",
        "--out",
        &p(dir.path(), "lex.txt"),
        "--from",
        &p(dir.path(), "a.txt"),
        "--mine",
        &p(dir.path(), "sample.csv"),
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let lex = fs::read_to_string(dir.path().join("lex.txt")).unwrap();
    assert_eq!(lex, "asshole\nfucked\nidiot\nsilly\nstupid\n");
    assert_eq!(
        cli(&["lexicon-build", "--out", &p(dir.path(), "x.txt")]).code,
        EXIT_USAGE
    );
}

#[test]
fn lexicon_pipeline_matches_library() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("sample.csv"), SAMPLE_POSTS).unwrap();
    fs::write(dir.path().join("lex.txt"), "stupid\nasshole\n").unwrap();
    let out = cli(&[
        "predict",
        "--method",
        "lexicon",
        "--lexicon",
        &p(dir.path(), "lex.txt"),
        "--data",
        &p(dir.path(), "sample.csv"),
        "--out",
        &p(dir.path(), "preds.csv"),
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let out = cli(&[
        "evaluate",
        "--pred",
        &p(dir.path(), "preds.csv"),
        "--gold",
        &p(dir.path(), "sample.csv"),
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);

    let posts = parse_dataset(SAMPLE_POSTS.as_bytes()).unwrap();
    let mut lex = Lexicon::new();
    lex.extend("t", ["stupid", "asshole"]);
    let report = evaluate_corpus(&LexiconTagger::new(&lex).tag_posts(&posts), &posts).unwrap();
    let mut expected = Vec::new();
    report.write_tsv(&mut expected).unwrap();
    assert_eq!(out.stdout, String::from_utf8(expected).unwrap());
    // post 0 gets 6 of 12 gold offsets: P = 1, R = 0.5, F1 = 2/3
    assert!(out.stdout.contains("0\t1.0000\t0.5000\t0.6667\n"));
    assert!(out.stdout.ends_with("mean_f1=0.6667\n"), "{}", out.stdout);
}

#[test]
fn train_predict_evaluate_crf() {
    let dir = TempDir::new().unwrap();
    let (train, test) = synthetic_files(dir.path(), 0.3);
    let model = p(dir.path(), "model.crf");
    let out = cli(&[
        "train",
        "--data",
        &train.display().to_string(),
        "--out",
        &model,
        "--seed",
        "7",
        "--max-epochs",
        "5",
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let header = fs::read_to_string(&model).unwrap();
    assert!(header.starts_with("toxspan-crf\tversion=1\tlambda=0.0001\t"));

    let preds = p(dir.path(), "preds.csv");
    let out = cli(&[
        "predict",
        "--method",
        "crf",
        "--model",
        &model,
        "--data",
        &test.display().to_string(),
        "--out",
        &preds,
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let out = cli(&[
        "evaluate",
        "--pred",
        &preds,
        "--gold",
        &test.display().to_string(),
        "--out",
        &p(dir.path(), "r.tsv"),
    ]);
    assert_eq!(out.code, EXIT_OK);
    let summary = out.stdout.lines().last().unwrap();
    let f1: f64 = summary.strip_prefix("mean_f1=").unwrap().parse().unwrap();
    assert_eq!(summary.len(), "mean_f1=".len() + 6);
    assert!(f1 > 0.8, "{summary}");
    assert_eq!(
        fs::read_to_string(dir.path().join("r.tsv")).unwrap(),
        out.stdout
    );
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = TempDir::new().unwrap();
    let (train, _) = synthetic_files(dir.path(), 0.0);
    let cfg = dir.path().join("train.cfg");
    fs::write(
        &cfg,
        "# settings\nl2_lambda = 0.5\nmax_epochs = 1\ngap_fill = off\n",
    )
    .unwrap();
    let model = p(dir.path(), "m.crf");
    let out = cli(&[
        "train",
        "--data",
        &train.display().to_string(),
        "--out",
        &model,
        "--config",
        &cfg.display().to_string(),
        "--l2-lambda",
        "0.25",
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let header = fs::read_to_string(&model).unwrap();
    let header = header.lines().next().unwrap();
    assert!(header.contains("lambda=0.25\t"), "{header}");
    assert!(header.contains("gap_fill=0"), "{header}");
    assert!(header.contains("epochs_run=1\t"), "{header}");

    fs::write(&cfg, "validation_fraction = 1.5\n").unwrap();
    let out = cli(&[
        "train",
        "--data",
        &train.display().to_string(),
        "--out",
        &model,
        "--config",
        &cfg.display().to_string(),
    ]);
    assert_eq!(out.code, EXIT_USAGE);
    fs::write(&cfg, "colour = blue\n").unwrap();
    let out = cli(&[
        "train",
        "--data",
        &train.display().to_string(),
        "--out",
        &model,
        "--config",
        &cfg.display().to_string(),
    ]);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("colour"));
}

#[test]
fn crf_model_with_lexicon_features_needs_lexicon() {
    let dir = TempDir::new().unwrap();
    let (train, test) = synthetic_files(dir.path(), 0.0);
    let lex = p(dir.path(), "lex.txt");
    assert_eq!(
        cli(&[
            "lexicon-build",
            "--out",
            &lex,
            "--mine",
            &train.display().to_string()
        ])
        .code,
        EXIT_OK
    );
    let model = p(dir.path(), "m.crf");
    let out = cli(&[
        "train",
        "--data",
        &train.display().to_string(),
        "--out",
        &model,
        "--lexicon",
        &lex,
        "--max-epochs",
        "2",
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let args = [
        "predict",
        "--method",
        "crf",
        "--model",
        &model,
        "--data",
        &test.display().to_string(),
        "--out",
        &p(dir.path(), "o.csv"),
    ];
    assert_eq!(cli(&args).code, EXIT_USAGE);
    let mut with_lex = args.to_vec();
    with_lex.extend(["--lexicon", lex.as_str()]);
    assert_eq!(cli(&with_lex).code, EXIT_OK);
}

#[test]
fn divergent_training_is_numerical_failure() {
    let dir = TempDir::new().unwrap();
    let (train, _) = synthetic_files(dir.path(), 0.0);
    let out = cli(&[
        "train",
        "--data",
        &train.display().to_string(),
        "--out",
        &p(dir.path(), "m.crf"),
        "--learning-rate",
        "1e308",
    ]);
    assert_eq!(out.code, EXIT_NUMERICAL, "{}", out.stderr);
}

#[test]
fn ensemble_votes() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("a.csv"), "spans,text_id\n\"[1, 2, 3]\",0\n").unwrap();
    fs::write(dir.path().join("b.csv"), "spans,text_id\n\"[2, 3, 4]\",0\n").unwrap();
    fs::write(dir.path().join("c.csv"), "spans,text_id\n\"[3, 5]\",0\n").unwrap();
    let out = cli(&[
        "ensemble",
        "--pred",
        &p(dir.path(), "a.csv"),
        "--pred",
        &p(dir.path(), "b.csv"),
        "--pred",
        &p(dir.path(), "c.csv"),
        "--out",
        &p(dir.path(), "v.csv"),
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_eq!(
        fs::read_to_string(dir.path().join("v.csv")).unwrap(),
        "spans,text_id\n\"[2, 3]\",0\n"
    );
    assert_eq!(
        cli(&["ensemble", "--out", &p(dir.path(), "v.csv")]).code,
        EXIT_USAGE
    );
}
