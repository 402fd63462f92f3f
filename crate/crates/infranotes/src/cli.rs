//! The `infranotes` command line.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use infranotes_core::eval::{ablation, match_boundaries, stroke_boundaries, BoundaryScore, LabeledSession};
use infranotes_core::index::search;
use infranotes_core::recognize::{PrimitiveTable, StrokeCountTable};
use infranotes_core::segment::segment;
use infranotes_core::synthgen::{add_noise, NoiseModel, SessionBuilder, WritingStyle};
use infranotes_core::truth::CandidateList;

use crate::error::{Error, Result};
use crate::ingest::{parse_candidates, parse_stream, parse_truth, write_stream, write_truth};
use crate::notesdir::{load_index, process_session, read_file, render_page, write_notes_dir, STREAM_FILE, TRUTH_FILE};
use crate::render::SvgStyle;
use crate::store::{parse_settings, Settings};

#[derive(Debug, Parser)]
#[command(name = "infranotes", version, about = "Lecture notes from board-writing trajectories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic stream and its ground truth.
    Synth(SynthArgs),
    /// Turn a stream into notes, page images and a search index.
    Process(ProcessArgs),
    /// Recognition accuracy per pipeline stage over a labeled corpus.
    Eval(EvalArgs),
    /// Render one page of a notes directory as SVG.
    Render(RenderArgs),
    /// Look up a word in a notes directory.
    Search(SearchArgs),
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// Text to write; `\n` starts a line and `\f` a new board column.
    #[arg(long)]
    text: String,
    #[arg(long, default_value_t = 10.0)]
    spacing: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    tilt: f64,
    #[arg(long = "sigma-xy", default_value_t = 0.35)]
    sigma_xy: f64,
    #[arg(long = "sigma-z", default_value_t = 0.14)]
    sigma_z: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short = 'o', long = "out")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ProcessArgs {
    #[arg(required_unless_present = "print_config")]
    stream: Option<PathBuf>,
    #[arg(short = 'o', long = "out", required_unless_present = "print_config")]
    out: Option<PathBuf>,
    /// `key = value` threshold overrides.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the effective settings and exit.
    #[arg(long = "print-config")]
    print_config: bool,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// A session directory, or a directory of session directories, each
    /// holding stream.v1 and truth.v1 and optionally candidates/<glyph>.v1.
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RenderArgs {
    notes: PathBuf,
    #[arg(long)]
    page: u32,
    /// Session time to show the page at; defaults to the page's final state.
    #[arg(long = "as-of", allow_negative_numbers = true)]
    as_of: Option<f64>,
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SearchArgs {
    notes: PathBuf,
    word: String,
}

/// Expands the two escapes accepted by `--text`.
pub fn unescape_text(text: &str) -> String {
    text.replace("\\n", "\n").replace("\\f", "\x0c")
}

fn load_settings(path: Option<&Path>) -> Result<Settings> {
    match path {
        Some(p) => parse_settings(&read_file(p)?).map_err(|e| e.in_file(p)),
        None => Ok(Settings::default()),
    }
}

fn synth(args: &SynthArgs, out: &mut dyn Write) -> Result<()> {
    let style = WritingStyle { spacing: args.spacing, tilt_deg: args.tilt, ..WritingStyle::default() };
    let mut b = SessionBuilder::new(style)?;
    b.text(&unescape_text(&args.text))?;
    let (series, truth) = b.finish();
    let series = add_noise(&series, &NoiseModel { sigma_xy: args.sigma_xy, sigma_z: args.sigma_z, seed: args.seed });
    fs::create_dir_all(&args.out).map_err(|e| Error::from(e).in_file(&args.out))?;
    let stream = args.out.join(STREAM_FILE);
    fs::write(&stream, write_stream(&series)).map_err(|e| Error::from(e).in_file(&stream))?;
    let truth_path = args.out.join(TRUTH_FILE);
    fs::write(&truth_path, write_truth(&truth)).map_err(|e| Error::from(e).in_file(&truth_path))?;
    writeln!(out, "{} samples, {} glyphs", series.len(), truth.glyphs.len())?;
    Ok(())
}

fn process_cmd(args: &ProcessArgs, out: &mut dyn Write) -> Result<()> {
    let settings = load_settings(args.config.as_deref())?;
    if args.print_config {
        write!(out, "{}", settings.to_text())?;
        return Ok(());
    }
    let (Some(stream), Some(dir)) = (&args.stream, &args.out) else { unreachable!("enforced by the parser") };
    let source = stream.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let series = parse_stream(&read_file(stream)?, &source).map_err(|e| e.in_file(stream))?;
    let result = process_session(&series, &settings)?;
    write_notes_dir(dir, &series, &result, &SvgStyle::default())?;
    let notes = &result.processed.notes;
    writeln!(
        out,
        "{} pages, {} lines, {} masks, {} orphan erases",
        notes.pages.len(),
        notes.lines().count(),
        notes.masks().count(),
        notes.orphan_erases.len()
    )?;
    for (line, text) in &result.texts {
        writeln!(out, "line {line}: {text}")?;
    }
    Ok(())
}

fn load_session(dir: &Path) -> Result<LabeledSession> {
    let stream_path = dir.join(STREAM_FILE);
    let truth_path = dir.join(TRUTH_FILE);
    if !truth_path.is_file() {
        return Err(Error::syntax(0, "missing truth.v1").in_file(dir));
    }
    let source = dir.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let series = parse_stream(&read_file(&stream_path)?, &source).map_err(|e| e.in_file(&stream_path))?;
    let truth = parse_truth(&read_file(&truth_path)?).map_err(|e| e.in_file(&truth_path))?;
    let cand_dir = dir.join("candidates");
    let candidates = if cand_dir.is_dir() {
        let mut lists = Vec::new();
        for g in &truth.glyphs {
            let p = cand_dir.join(format!("{}.v1", g.id));
            let list = if p.is_file() { parse_candidates(&read_file(&p)?).map_err(|e| e.in_file(&p))? } else { CandidateList::default() };
            if lists.len() <= g.id as usize {
                lists.resize(g.id as usize + 1, CandidateList::default());
            }
            lists[g.id as usize] = list;
        }
        Some(lists)
    } else {
        None
    };
    Ok(LabeledSession { series, truth, candidates })
}

fn load_corpus(dir: &Path) -> Result<Vec<LabeledSession>> {
    if dir.join(STREAM_FILE).is_file() {
        return Ok(vec![load_session(dir)?]);
    }
    let mut subdirs: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::from(e).in_file(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    subdirs.sort();
    if subdirs.is_empty() {
        return Err(Error::syntax(0, "no sessions found").in_file(dir));
    }
    subdirs.iter().map(|d| load_session(d)).collect()
}

/// The ablation table printed by `eval`.
pub fn eval_report(corpus: &[LabeledSession], settings: &Settings) -> Result<String> {
    let rows = ablation(corpus, &settings.pipeline, &PrimitiveTable::standard(), &StrokeCountTable::standard())?;
    let mut boundaries = BoundaryScore::default();
    for s in corpus {
        let strokes = segment(&s.series, &settings.pipeline.segment);
        boundaries.add(match_boundaries(&stroke_boundaries(&strokes), &s.truth.boundaries(), 2));
    }
    let mut out = String::new();
    let _ = writeln!(out, "{:<16}{:>8}{:>10}{:>10}", "stage", "glyphs", "PT", "OSN");
    for r in &rows {
        let osn = r.osn_accuracy().map_or("-".to_string(), |a| format!("{:.1}%", a * 100.0));
        let _ = writeln!(out, "{:<16}{:>8}{:>9.1}%{:>10}", r.stage.name(), r.glyphs, r.pt_accuracy() * 100.0, osn);
    }
    let _ = writeln!(
        out,
        "boundaries within 2 samples: precision {:.4} recall {:.4}",
        boundaries.precision(),
        boundaries.recall()
    );
    Ok(out)
}

fn eval_cmd(args: &EvalArgs, out: &mut dyn Write) -> Result<()> {
    let settings = load_settings(args.config.as_deref())?;
    let corpus = load_corpus(&args.corpus)?;
    write!(out, "{}", eval_report(&corpus, &settings)?)?;
    Ok(())
}

fn render_cmd(args: &RenderArgs, out: &mut dyn Write) -> Result<()> {
    let svg = render_page(&args.notes, args.page, args.as_of, &SvgStyle::default())?;
    match &args.out {
        Some(p) => fs::write(p, svg).map_err(|e| Error::from(e).in_file(p))?,
        None => out.write_all(svg.as_bytes())?,
    }
    Ok(())
}

fn search_cmd(args: &SearchArgs, out: &mut dyn Write) -> Result<()> {
    let index = load_index(&args.notes)?;
    for hit in search(&index, &args.word) {
        writeln!(out, "page {} line {} t {}", hit.page_id, hit.line_id, hit.start_t)?;
    }
    Ok(())
}

/// Runs one invocation and returns the exit status: 0 on success, 1 for
/// data errors, 2 for usage errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return 2;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    let result = match &cli.command {
        Command::Synth(a) => synth(a, out),
        Command::Process(a) => process_cmd(a, out),
        Command::Eval(a) => eval_cmd(a, out),
        Command::Render(a) => render_cmd(a, out),
        Command::Search(a) => search_cmd(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
