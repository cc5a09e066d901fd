//! Command-line front end: `lexicon-build`, `train`, `predict`, `evaluate`
//! and `ensemble`.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

mod config;

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use toxspan::corpus::{parse_dataset, read_predictions, write_predictions};
use toxspan::crf::{train, TrainConfig};
use toxspan::eval::{ensemble_records, evaluate_corpus};
use toxspan::lexicon::{mine_training_lexicon, LexiconTagger};
use toxspan::{CrfModel, CrfTagger, Lexicon, Post, PredictionRecord, SpanTagger, Tokenizer};

pub use config::{parse_switch, ConfigFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Numerical(m) => m,
        }
    }

    /// Wraps a library error with the file it came from.
    fn at(path: &Path, e: toxspan::Error) -> Self {
        let msg = format!("{}: {e}", path.display());
        match e {
            toxspan::Error::Numerical(_) => CliError::Numerical(msg),
            toxspan::Error::Config(_) => CliError::Usage(msg),
            _ => CliError::Data(msg),
        }
    }
}

impl From<toxspan::Error> for CliError {
    fn from(e: toxspan::Error) -> Self {
        match e {
            toxspan::Error::Numerical(_) => CliError::Numerical(e.to_string()),
            toxspan::Error::Config(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "toxspan",
    version,
    about = "Character-offset toxic span detection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a lexicon from word lists and/or gold-annotated training data.
    LexiconBuild(LexiconBuildArgs),
    /// Train a CRF tagger.
    Train(TrainArgs),
    /// Tag a dataset with the lexicon or CRF method.
    Predict(PredictArgs),
    /// Score predictions against gold annotations.
    Evaluate(EvaluateArgs),
    /// Majority-vote several prediction files.
    Ensemble(EnsembleArgs),
}

#[derive(Args, Debug)]
struct LexiconBuildArgs {
    /// Output word list (sorted, one word per line).
    #[arg(long)]
    out: PathBuf,
    /// Word list file; repeatable.
    #[arg(long = "from")]
    from: Vec<PathBuf>,
    /// Training dataset to mine toxic words from; repeatable.
    #[arg(long)]
    mine: Vec<PathBuf>,
    /// Intra-word characters used when tokenizing mined data.
    #[arg(long)]
    intra_word: Option<String>,
}

#[derive(Args, Debug)]
struct TrainArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Lexicon enabling the lexicon-membership feature.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    max_epochs: Option<usize>,
    #[arg(long)]
    l2_lambda: Option<f64>,
    #[arg(long)]
    validation_fraction: Option<f64>,
    #[arg(long)]
    early_stop_patience: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Default span reconstruction stored in the model (on/off).
    #[arg(long, value_parser = parse_switch)]
    gap_fill: Option<bool>,
    #[arg(long)]
    intra_word: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    Lexicon,
    Crf,
}

#[derive(Args, Debug)]
struct PredictArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum)]
    method: Method,
    /// Trained model (crf method).
    #[arg(long)]
    model: Option<PathBuf>,
    /// Word list (required for lexicon method; feature input for crf).
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Also match asterisk-censored tokens (lexicon method).
    #[arg(long)]
    censored: bool,
    /// Fill gaps between adjacent toxic tokens (on/off).
    #[arg(long, value_parser = parse_switch)]
    gap_fill: Option<bool>,
    /// Intra-word characters (lexicon method; the crf model stores its own).
    #[arg(long)]
    intra_word: Option<String>,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    #[arg(long)]
    pred: PathBuf,
    #[arg(long)]
    gold: PathBuf,
    /// Also write the report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EnsembleArgs {
    /// Prediction file; repeatable.
    #[arg(long = "pred", required = true)]
    pred: Vec<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

/// Runs the CLI with `argv` (including the program name) and returns the
/// process exit status.
pub fn run<I, S, W, E>(argv: I, stdout: &mut W, stderr: &mut E) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = write!(stderr, "{}", e.render());
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    let result = match cli.command {
        Command::LexiconBuild(a) => lexicon_build(a, stderr),
        Command::Train(a) => train_cmd(a, stderr),
        Command::Predict(a) => predict_cmd(a),
        Command::Evaluate(a) => evaluate_cmd(a, stdout),
        Command::Ensemble(a) => ensemble_cmd(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit_code()
        }
    }
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Data(format!("cannot open {}: {e}", path.display())))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Data(format!("cannot create {}: {e}", path.display())))
}

fn load_posts(path: &Path) -> CliResult<Vec<Post>> {
    parse_dataset(open(path)?).map_err(|e| CliError::at(path, e))
}

fn load_lexicon(path: &Path) -> CliResult<Lexicon> {
    let mut lex = Lexicon::new();
    lex.add_source(&path.display().to_string(), open(path)?)?;
    Ok(lex)
}

fn tokenizer_from(spec: Option<&str>) -> CliResult<Tokenizer> {
    spec.map_or_else(
        || Ok(Tokenizer::default()),
        |s| Ok(Tokenizer::from_spec(s)?),
    )
}

fn lexicon_build<E: Write>(a: LexiconBuildArgs, stderr: &mut E) -> CliResult<()> {
    if a.from.is_empty() && a.mine.is_empty() {
        return Err(CliError::Usage(
            "lexicon-build needs at least one --from or --mine".into(),
        ));
    }
    let tokenizer = tokenizer_from(a.intra_word.as_deref())?;
    let mut lex = Lexicon::new();
    for path in &a.from {
        lex.add_source(&path.display().to_string(), open(path)?)?;
    }
    for path in &a.mine {
        let posts = load_posts(path)?;
        lex.extend(
            &format!("mined:{}", path.display()),
            mine_training_lexicon(&posts, &tokenizer),
        );
    }
    for note in lex.sources() {
        let _ = writeln!(
            stderr,
            "{}: {} words read, {} new",
            note.name, note.words_read, note.words_added
        );
    }
    let mut out = create(&a.out)?;
    lex.write_to(&mut out)?;
    let _ = writeln!(stderr, "wrote {} entries to {}", lex.len(), a.out.display());
    Ok(())
}

const TRAIN_KEYS: &[&str] = &[
    "learning_rate",
    "batch_size",
    "max_epochs",
    "l2_lambda",
    "validation_fraction",
    "early_stop_patience",
    "seed",
    "gap_fill",
    "intra_word",
];

fn train_config(a: &TrainArgs) -> CliResult<TrainConfig> {
    let file = match &a.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    file.check_keys(TRAIN_KEYS)?;
    let d = TrainConfig::default();
    let intra = a
        .intra_word
        .clone()
        .or_else(|| file.get_str("intra_word").map(String::from));
    let cfg = TrainConfig {
        learning_rate: a
            .learning_rate
            .or(file.get("learning_rate")?)
            .unwrap_or(d.learning_rate),
        batch_size: a
            .batch_size
            .or(file.get("batch_size")?)
            .unwrap_or(d.batch_size),
        max_epochs: a
            .max_epochs
            .or(file.get("max_epochs")?)
            .unwrap_or(d.max_epochs),
        l2_lambda: a
            .l2_lambda
            .or(file.get("l2_lambda")?)
            .unwrap_or(d.l2_lambda),
        validation_fraction: a
            .validation_fraction
            .or(file.get("validation_fraction")?)
            .unwrap_or(d.validation_fraction),
        early_stop_patience: a
            .early_stop_patience
            .or(file.get("early_stop_patience")?)
            .unwrap_or(d.early_stop_patience),
        seed: a.seed.or(file.get("seed")?).unwrap_or(d.seed),
        gap_fill: a
            .gap_fill
            .or(file.get_bool("gap_fill")?)
            .unwrap_or(d.gap_fill),
        templates: d.templates,
        tokenizer: tokenizer_from(intra.as_deref())?,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn train_cmd<E: Write>(a: TrainArgs, stderr: &mut E) -> CliResult<()> {
    let cfg = train_config(&a)?;
    let posts = load_posts(&a.data)?;
    let lexicon = a.lexicon.as_deref().map(load_lexicon).transpose()?;
    let model = train(&posts, &cfg, lexicon.as_ref()).map_err(|e| CliError::at(&a.data, e))?;
    let mut out = create(&a.out)?;
    model.save(&mut out)?;
    let best = model
        .meta
        .best_validation_loss
        .map_or_else(|| "n/a".to_string(), |v| format!("{v:.6}"));
    let _ = writeln!(
        stderr,
        "trained {} features for {} epochs (best epoch {}, validation loss {best}); wrote {}",
        model.feature_count(),
        model.meta.epochs_run,
        model.meta.best_epoch,
        a.out.display()
    );
    Ok(())
}

const PREDICT_KEYS: &[&str] = &["gap_fill", "intra_word", "censored"];

fn predict_cmd(a: PredictArgs) -> CliResult<()> {
    let file = match &a.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    file.check_keys(PREDICT_KEYS)?;
    let gap_fill = a.gap_fill.or(file.get_bool("gap_fill")?);
    let censored = a.censored || file.get_bool("censored")?.unwrap_or(false);
    let intra = a
        .intra_word
        .clone()
        .or_else(|| file.get_str("intra_word").map(String::from));

    let posts = load_posts(&a.data)?;
    let records: Vec<PredictionRecord> = match a.method {
        Method::Lexicon => {
            let path = a
                .lexicon
                .as_deref()
                .ok_or_else(|| CliError::Usage("--method lexicon requires --lexicon".into()))?;
            let lex = load_lexicon(path)?;
            LexiconTagger::new(&lex)
                .with_tokenizer(tokenizer_from(intra.as_deref())?)
                .with_censored_matching(censored)
                .tag_posts(&posts)
        }
        Method::Crf => {
            let path = a
                .model
                .as_deref()
                .ok_or_else(|| CliError::Usage("--method crf requires --model".into()))?;
            let model = CrfModel::load(open(path)?).map_err(|e| CliError::at(path, e))?;
            if intra.is_some() {
                log::warn!(
                    "--intra-word is ignored for the crf method; the model stores its tokenizer"
                );
            }
            let lexicon = a.lexicon.as_deref().map(load_lexicon).transpose()?;
            if model.templates.lexicon && lexicon.is_none() {
                return Err(CliError::Usage(
                    "model was trained with lexicon features; pass --lexicon".into(),
                ));
            }
            let lexicon = lexicon.filter(|_| model.templates.lexicon);
            let mut tagger = CrfTagger::new(&model, lexicon.as_ref());
            if let Some(g) = gap_fill {
                tagger = tagger.with_gap_fill(g);
            }
            tagger.tag_posts(&posts)
        }
    };
    let mut out = create(&a.out)?;
    write_predictions(&records, &mut out)?;
    Ok(())
}

fn evaluate_cmd<W: Write>(a: EvaluateArgs, stdout: &mut W) -> CliResult<()> {
    let preds = read_predictions(open(&a.pred)?).map_err(|e| CliError::at(&a.pred, e))?;
    let gold = load_posts(&a.gold)?;
    let report = evaluate_corpus(&preds, &gold)?;
    report.write_tsv(&mut *stdout)?;
    if let Some(path) = &a.out {
        report.write_tsv(create(path)?)?;
    }
    Ok(())
}

fn ensemble_cmd(a: EnsembleArgs) -> CliResult<()> {
    let mut files = Vec::with_capacity(a.pred.len());
    for path in &a.pred {
        files.push(read_predictions(open(path)?).map_err(|e| CliError::at(path, e))?);
    }
    let voted = ensemble_records(&files)?;
    let mut out = create(&a.out)?;
    write_predictions(&voted, &mut out)?;
    Ok(())
}
