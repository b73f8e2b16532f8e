use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use consent_audit::corpus::{fetch_all, Corpus, CorpusConfig, StoreOutcome};
use consent_audit::interface::{
    suggest_evidence, validate_against_document, validate_assessment, AssessmentStore, CueLexicon,
    InterfaceAssessment, INTERFACE_CUES_FILE,
};
use consent_audit::pipeline::{
    run_pipeline, AnalysisOptions, PipelineOptions, PipelineOutput, EXTRACTION_FILE,
};
use consent_audit::readability::LensearVariant;
use consent_audit::report::{emit_figure_data, render_table, FigureKind, TableFormat, TableKind};
use consent_audit::specificity::{read_review, write_review, ExportOptions};
use consent_audit::textprep::{Document, ExtractionConfig, SyllableCounter};

/// Exit status when some documents failed but the run completed.
const EXIT_PARTIAL: u8 = 1;
/// Exit status for configuration, lexicon and other fatal errors.
const EXIT_FATAL: u8 = 2;

#[derive(Parser)]
#[command(
    name = "consent-audit",
    version,
    about = "Audit terms-of-service documents for consent quality"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Download the configured documents into the snapshot corpus.
    Fetch {
        #[arg(long)]
        config: PathBuf,
        /// Fetch only this platform.
        #[arg(long)]
        platform: Option<String>,
    },
    /// Run every analysis over the latest snapshot of each platform.
    Analyze(AnalyzeArgs),
    /// Export findings for human review or apply a completed review.
    #[command(subcommand)]
    Review(ReviewCommand),
    /// Work with manual interface-design assessments.
    #[command(subcommand)]
    Assess(AssessCommand),
    /// Render tables and figure data from a results file.
    #[command(subcommand)]
    Report(ReportCommand),
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    lexicons: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    workers: Option<usize>,
    /// Assessment directory (default: <corpus>/assessments).
    #[arg(long)]
    assessments: Option<PathBuf>,
    /// Apply the classical Linsear Write adjustment to the Lensear score.
    #[arg(long)]
    classical_lensear: bool,
    /// Count only canonical vague terms, not their listed variants.
    #[arg(long)]
    no_vague_variants: bool,
}

#[derive(Subcommand)]
enum ReviewCommand {
    Export {
        #[arg(long)]
        results: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also export data-type and entity findings.
        #[arg(long)]
        include_dt_en: bool,
    },
    Apply {
        #[arg(long)]
        results: PathBuf,
        #[arg(long)]
        review: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum AssessCommand {
    /// Check an assessment file; with --corpus also check excerpts verbatim.
    Validate {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Validate and store an assessment under <corpus>/assessments.
    Store {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        /// Replace an existing assessment for the same platform.
        #[arg(long)]
        overwrite: bool,
    },
    /// List candidate evidence sentences for an assessor. Never scores.
    Suggest {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        platform: String,
        /// Directory holding interface_cues.json (shipped cues otherwise).
        #[arg(long)]
        lexicons: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ReportCommand {
    Table {
        #[arg(long, value_enum)]
        kind: TableKindArg,
        #[arg(long, value_enum)]
        format: FormatArg,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "results.json")]
        results: PathBuf,
    },
    Figure {
        #[arg(long, value_enum)]
        kind: FigureKindArg,
        /// Data file; CSV when the name ends in .csv, JSON otherwise.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, default_value = "results.json")]
        results: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableKindArg {
    Readability,
    Clarity,
    Specificity,
    Interface,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Md,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FigureKindArg {
    WordsVsSentences,
    ReadingTime,
    ClarityBubble,
}

impl From<TableKindArg> for TableKind {
    fn from(k: TableKindArg) -> Self {
        match k {
            TableKindArg::Readability => TableKind::Readability,
            TableKindArg::Clarity => TableKind::Clarity,
            TableKindArg::Specificity => TableKind::Specificity,
            TableKindArg::Interface => TableKind::Interface,
        }
    }
}

impl From<FormatArg> for TableFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => TableFormat::Csv,
            FormatArg::Md => TableFormat::Markdown,
            FormatArg::Json => TableFormat::Json,
        }
    }
}

impl From<FigureKindArg> for FigureKind {
    fn from(k: FigureKindArg) -> Self {
        match k {
            FigureKindArg::WordsVsSentences => FigureKind::WordsVsSentences,
            FigureKindArg::ReadingTime => FigureKind::ReadingTime,
            FigureKindArg::ClarityBubble => FigureKind::ClarityBubble,
        }
    }
}

/// Whether every document succeeded.
enum Outcome {
    Clean,
    Partial,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::Partial) => ExitCode::from(EXIT_PARTIAL),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_FATAL)
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Fetch { config, platform } => fetch(&config, platform.as_deref()),
        Command::Analyze(args) => analyze(args),
        Command::Review(cmd) => review(cmd),
        Command::Assess(cmd) => assess(cmd),
        Command::Report(cmd) => report(cmd),
    }
}

fn fetch(config_path: &Path, only: Option<&str>) -> Result<Outcome> {
    let config = CorpusConfig::load(config_path)?;
    if let Some(p) = only {
        if !config.platforms.iter().any(|s| s.platform == p) {
            bail!("platform {p} is not in {}", config_path.display());
        }
    }
    let mut corpus = Corpus::open(&config.corpus_dir)?;
    let reports = fetch_all(&config, &mut corpus, only);
    corpus.save()?;
    let mut failed = 0;
    for r in &reports {
        match &r.result {
            Ok(StoreOutcome::Stored) => println!("{}: stored new snapshot", r.platform),
            Ok(StoreOutcome::AlreadyStored) => println!("{}: unchanged", r.platform),
            Err(e) => {
                failed += 1;
                eprintln!("{}: {e}", r.platform);
            }
        }
    }
    Ok(if failed > 0 {
        Outcome::Partial
    } else {
        Outcome::Clean
    })
}

fn analyze(args: AnalyzeArgs) -> Result<Outcome> {
    let options = PipelineOptions {
        analysis: AnalysisOptions {
            lensear: if args.classical_lensear {
                LensearVariant::Classical
            } else {
                LensearVariant::AsPublished
            },
            match_vague_variants: !args.no_vague_variants,
        },
        workers: args.workers,
        assessments_dir: args.assessments,
    };
    let output = run_pipeline(&args.corpus, &args.lexicons, &options)?;
    output.save(&args.out)?;
    for f in &output.failures {
        eprintln!("{}: {}", f.platform, f.error);
    }
    println!(
        "analysed {} document(s), {} failure(s) -> {}",
        output.results.len(),
        output.failures.len(),
        args.out.display()
    );
    Ok(if output.failures.is_empty() {
        Outcome::Clean
    } else {
        Outcome::Partial
    })
}

fn review(cmd: ReviewCommand) -> Result<Outcome> {
    match cmd {
        ReviewCommand::Export {
            results,
            out,
            include_dt_en,
        } => {
            let output = PipelineOutput::load(&results)?;
            let records = output.review_records(ExportOptions {
                include_data_types_and_entities: include_dt_en,
            })?;
            write_review(&out, &records)?;
            println!("exported {} record(s) -> {}", records.len(), out.display());
        }
        ReviewCommand::Apply {
            results,
            review,
            out,
        } => {
            let output = PipelineOutput::load(&results)?;
            let (_, records) = read_review(&review)?;
            let revised = output.apply_review(&records)?;
            revised.save(&out)?;
            println!("applied {} record(s) -> {}", records.len(), out.display());
        }
    }
    Ok(Outcome::Clean)
}

/// Rebuilds the analysed document for `platform` from its latest snapshot.
fn load_document(corpus_dir: &Path, platform: &str) -> Result<Document> {
    let corpus = Corpus::open_existing(corpus_dir)?;
    let entry = corpus
        .manifest()
        .latest()
        .into_iter()
        .find(|e| e.platform == platform)
        .with_context(|| format!("no snapshot for {platform} in {}", corpus_dir.display()))?;
    let payload = corpus.read_verified(entry)?;
    let extraction_path = corpus_dir.join(EXTRACTION_FILE);
    let extraction = if extraction_path.exists() {
        ExtractionConfig::load(&extraction_path)?
    } else {
        ExtractionConfig::default()
    };
    Ok(Document::from_payload(
        platform,
        &payload,
        entry.media_kind,
        extraction.rules_for(platform),
        &SyllableCounter::new(),
    )?)
}

fn assess(cmd: AssessCommand) -> Result<Outcome> {
    match cmd {
        AssessCommand::Validate { file, corpus } => {
            let a = InterfaceAssessment::from_json_file(&file)?;
            let checked = match &corpus {
                Some(dir) => validate_against_document(&a, &load_document(dir, &a.platform)?),
                None => validate_assessment(&a),
            };
            match checked {
                Ok(()) => {
                    println!("{}: ok", a.platform);
                    Ok(Outcome::Clean)
                }
                Err(consent_audit::Error::InvalidAssessment {
                    platform,
                    violations,
                }) => {
                    for v in violations {
                        eprintln!("{platform}: {v}");
                    }
                    Ok(Outcome::Partial)
                }
                Err(e) => Err(e.into()),
            }
        }
        AssessCommand::Store {
            file,
            corpus,
            overwrite,
        } => {
            let a = InterfaceAssessment::from_json_file(&file)?;
            validate_against_document(&a, &load_document(&corpus, &a.platform)?)?;
            let store = AssessmentStore::new(corpus.join(consent_audit::pipeline::ASSESSMENTS_DIR));
            let path = store.save(&a, overwrite)?;
            println!("{}: stored -> {}", a.platform, path.display());
            Ok(Outcome::Clean)
        }
        AssessCommand::Suggest {
            corpus,
            platform,
            lexicons,
        } => {
            let cues = match lexicons {
                Some(dir) => CueLexicon::load(&dir.join(INTERFACE_CUES_FILE))?,
                None => CueLexicon::shipped_default(),
            };
            let doc = load_document(&corpus, &platform)?;
            let suggestions = suggest_evidence(&doc, &cues);
            println!("{}", serde_json::to_string_pretty(&suggestions)?);
            Ok(Outcome::Clean)
        }
    }
}

fn report(cmd: ReportCommand) -> Result<Outcome> {
    match cmd {
        ReportCommand::Table {
            kind,
            format,
            out,
            results,
        } => {
            let output = PipelineOutput::load(&results)?;
            let rendered = render_table(&output.results, kind.into(), format.into())?;
            write_file(&out, &rendered)?;
        }
        ReportCommand::Figure {
            kind,
            out,
            svg,
            results,
        } => {
            let output = PipelineOutput::load(&results)?;
            let data = emit_figure_data(&output.results, kind.into())?;
            let is_csv = out
                .extension()
                .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
            let body = if is_csv {
                data.to_csv()?
            } else {
                data.to_json()
            };
            write_file(&out, &body)?;
            if let Some(svg_path) = svg {
                write_file(&svg_path, &data.to_svg())?;
            }
        }
    }
    Ok(Outcome::Clean)
}
