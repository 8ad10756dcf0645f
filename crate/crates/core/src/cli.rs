//! The `fca` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{run_bench, run_engine, BenchPlan, EngineKind, RunSettings};
use crate::bits::WordWidth;
use crate::context::{Concept, FormalContext};
use crate::engine::{Enumerator, IncludeBottom};
use crate::error::{FcaError, Result};
use crate::horizontal::{HorizontalEngineConfig, DEFAULT_QUEUE_BUDGET};
use crate::io::{self, Format};
use crate::oracle::{brute_force_concepts, diff_concept_sets, random_context, RandomContextSpec};
use crate::vertical::VerticalEngineConfig;

/// Largest generated dimension `verify` accepts.
pub const VERIFY_MAX_DIM: usize = 16;

const DENSITIES: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

#[derive(Debug, Parser)]
#[command(name = "fca", version, about = "Enumerate the formal concepts of a binary context")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List every concept of a context.
    Enumerate(EnumerateArgs),
    /// Compare the engines with brute force.
    Verify(VerifyArgs),
    /// Time the engines and report storage.
    Bench(BenchArgs),
    /// Write the transposed context.
    Transpose(TransposeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineSelection {
    Horizontal,
    Vertical,
    Both,
}

impl EngineSelection {
    fn kinds(self) -> Vec<EngineKind> {
        match self {
            EngineSelection::Horizontal => vec![EngineKind::Horizontal],
            EngineSelection::Vertical => vec![EngineKind::Vertical],
            EngineSelection::Both => vec![EngineKind::Horizontal, EngineKind::Vertical],
        }
    }
}

#[derive(Debug, Args)]
struct InputArgs {
    #[arg(long, short)]
    input: PathBuf,
    /// Input format; guessed from the extension when omitted.
    #[arg(long)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "vertical")]
    engine: EngineArg,
    #[arg(long, default_value = "64")]
    width: WordWidth,
    /// Skip attributes whose column misses the current extent (horizontal engine).
    #[arg(long)]
    empty_skip: bool,
    #[arg(long, default_value = "auto")]
    include_bottom: IncludeBottom,
    /// Concept list destination; `-` for stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Write the spawn tree as JSON.
    #[arg(long)]
    tree: Option<PathBuf>,
    /// Include extent members in the JSON tree.
    #[arg(long, requires = "tree")]
    tree_extents: bool,
    /// Local queue budget of the horizontal engine.
    #[arg(long, default_value_t = DEFAULT_QUEUE_BUDGET)]
    budget_bytes: u64,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Verify this context instead of a generated batch.
    #[arg(long, short)]
    input: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Objects and attributes of each generated context.
    #[arg(long, default_value_t = 12)]
    max_dim: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value = "both")]
    engine: EngineSelection,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Dataset files; each is named by its file stem.
    #[arg(long, short, required = true)]
    input: Vec<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
    /// Also bench the transpose of every input.
    #[arg(long)]
    transposed: bool,
    #[arg(long, value_enum, default_value = "both")]
    engine: EngineSelection,
    #[arg(long, default_values = ["32", "64"])]
    width: Vec<WordWidth>,
    #[arg(long)]
    empty_skip: bool,
    #[arg(long, default_value = "auto")]
    include_bottom: IncludeBottom,
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    #[arg(long, default_value_t = DEFAULT_QUEUE_BUDGET)]
    budget_bytes: u64,
    /// Write the JSON lines report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Print JSON lines instead of the table.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct TransposeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, short)]
    output: PathBuf,
    /// Output format; defaults to the output extension, then the input format.
    #[arg(long)]
    output_format: Option<Format>,
}

/// A concept present in one result but not the other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub engine: String,
    /// True when the engine lacks the concept, false when it has an extra one.
    pub missing: bool,
    pub concept: Concept,
}

impl Mismatch {
    pub fn describe(&self, ctx: &FormalContext) -> String {
        let names = |set: &crate::context::IndexSet, names: &[String]| {
            set.iter().map(|i| io::quote_name(&names[i])).collect::<Vec<_>>().join(" ")
        };
        format!(
            "{} {} concept {{{}}} ; {{{}}}",
            self.engine,
            if self.missing { "is missing" } else { "has extra" },
            names(&self.concept.extent, ctx.object_names()),
            names(&self.concept.intent, ctx.attribute_names()),
        )
    }
}

/// Runs each engine on `ctx` and returns the first difference from brute force.
pub fn verify_context(ctx: &FormalContext, engines: &[&dyn Enumerator]) -> Result<Option<Mismatch>> {
    let expected = brute_force_concepts(ctx)?;
    for engine in engines {
        let got = engine.enumerate(ctx)?;
        let diff = diff_concept_sets(&expected, &got.concepts);
        if let Some(c) = diff.only_left.into_iter().next() {
            return Ok(Some(Mismatch { engine: engine.name(), missing: true, concept: c }));
        }
        if let Some(c) = diff.only_right.into_iter().next() {
            return Ok(Some(Mismatch { engine: engine.name(), missing: false, concept: c }));
        }
    }
    Ok(None)
}

/// The generated contexts `verify` checks: `trials` square contexts of side
/// `dim`, densities cycling through 0.1..0.9, seeds `seed + i`.
pub fn verify_batch(trials: usize, dim: usize, seed: u64) -> impl Iterator<Item = RandomContextSpec> {
    (0..trials).map(move |i| RandomContextSpec {
        objects: dim,
        attributes: dim,
        density: DENSITIES[i % DENSITIES.len()],
        seed: seed.wrapping_add(i as u64),
    })
}

/// Every engine variant `verify` runs for a selection.
pub fn default_engines(horizontal: bool, vertical: bool) -> Vec<Box<dyn Enumerator>> {
    let mut v: Vec<Box<dyn Enumerator>> = Vec::new();
    if horizontal {
        v.push(Box::new(HorizontalEngineConfig::plain()));
        v.push(Box::new(HorizontalEngineConfig::skipping()));
    }
    if vertical {
        v.push(Box::new(VerticalEngineConfig::with_width(WordWidth::W32)));
        v.push(Box::new(VerticalEngineConfig::with_width(WordWidth::W64)));
    }
    v
}

fn source_name(path: &Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

fn write_target(path: &Path, text: &str, stdout: &mut dyn Write) -> Result<()> {
    if path == Path::new("-") {
        stdout.write_all(text.as_bytes())?;
    } else {
        std::fs::write(path, text)?;
    }
    Ok(())
}

fn enumerate(args: &EnumerateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8> {
    let ctx = io::read_context(&args.input.input, args.input.format)?;
    let engine = match args.engine {
        EngineArg::Horizontal => EngineKind::Horizontal,
        EngineArg::Vertical => EngineKind::Vertical,
    };
    let settings = RunSettings {
        empty_skip: args.empty_skip,
        include_bottom: args.include_bottom,
        budget_bytes: args.budget_bytes,
    };
    let run = run_engine(&ctx, engine, args.width, &settings)?;
    let to_stdout = args.output.as_deref() == Some(Path::new("-"));
    if let Some(path) = &args.output {
        write_target(path, &io::write_concepts_text(&run.concepts, &ctx), out)?;
    }
    if let Some(path) = &args.tree {
        let source = source_name(&args.input.input);
        write_target(path, &io::write_concept_tree_json(&run.tree, &ctx, &source, args.tree_extents), out)?;
    }
    let s = &run.stats;
    let line = format!(
        "{} concepts, {:.6} s, extent storage {} bytes, peak queue {} bytes\n",
        s.concept_count,
        s.elapsed.as_secs_f64(),
        s.extent_storage_bytes,
        s.peak_queue_bytes
    );
    if to_stdout {
        err.write_all(line.as_bytes())?;
    } else {
        out.write_all(line.as_bytes())?;
    }
    Ok(0)
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<u8> {
    let boxed = default_engines(args.engine != EngineSelection::Vertical, args.engine != EngineSelection::Horizontal);
    let engines: Vec<&dyn Enumerator> = boxed.iter().map(|b| b.as_ref()).collect();
    let report = |label: &str, ctx: &FormalContext, m: &Mismatch, out: &mut dyn Write| -> Result<u8> {
        writeln!(out, "FAIL {label}: {}", m.describe(ctx))?;
        Ok(1)
    };
    if let Some(path) = &args.input {
        let ctx = io::read_context(path, args.format)?;
        if let Some(m) = verify_context(&ctx, &engines)? {
            return report(&source_name(path), &ctx, &m, out);
        }
        writeln!(out, "ok: {} agrees with brute force ({} engines)", source_name(path), engines.len())?;
        return Ok(0);
    }
    if args.max_dim == 0 || args.max_dim > VERIFY_MAX_DIM {
        return Err(FcaError::InvalidArgument(format!("--max-dim must be in 1..={VERIFY_MAX_DIM}")));
    }
    for spec in verify_batch(args.trials, args.max_dim, args.seed) {
        let ctx = random_context(&spec);
        if let Some(m) = verify_context(&ctx, &engines)? {
            let label = format!("seed {} density {}", spec.seed, spec.density);
            return report(&label, &ctx, &m, out);
        }
    }
    writeln!(
        out,
        "ok: {} random {}x{} contexts agree with brute force ({} engines)",
        args.trials,
        args.max_dim,
        args.max_dim,
        engines.len()
    )?;
    Ok(0)
}

fn bench(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8> {
    let mut owned = Vec::new();
    for path in &args.input {
        let name = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
        let ctx = io::read_context(path, args.format)?;
        if args.transposed {
            owned.push((format!("{name}^T"), ctx.transpose()));
        }
        owned.push((name, ctx));
    }
    // keep each dataset next to its transpose, original first
    if args.transposed {
        for pair in owned.chunks_mut(2) {
            pair.swap(0, 1);
        }
    }
    let plan = BenchPlan {
        datasets: owned.iter().map(|(n, c)| (n.clone(), c)).collect(),
        engines: args.engine.kinds(),
        widths: args.width.clone(),
        repeats: args.repeats,
        settings: RunSettings {
            empty_skip: args.empty_skip,
            include_bottom: args.include_bottom,
            budget_bytes: args.budget_bytes,
        },
    };
    let report = run_bench(&plan)?;
    if args.json {
        out.write_all(report.json_lines().as_bytes())?;
    } else {
        out.write_all(report.table().as_bytes())?;
    }
    if let Some(path) = &args.report {
        std::fs::write(path, report.json_lines())?;
    }
    let bad = report.count_mismatches();
    if bad.is_empty() {
        Ok(0)
    } else {
        writeln!(err, "concept counts differ between engines on: {}", bad.join(", "))?;
        Ok(1)
    }
}

fn transpose(args: &TransposeArgs) -> Result<u8> {
    let in_format = args
        .input
        .format
        .or_else(|| Format::from_path(&args.input.input))
        .ok_or_else(|| FcaError::InvalidArgument("cannot tell the input format".into()))?;
    let ctx = io::read_context(&args.input.input, Some(in_format))?;
    let out_format = args.output_format.or_else(|| Format::from_path(&args.output)).unwrap_or(in_format);
    std::fs::write(&args.output, io::write(&ctx.transpose(), out_format))?;
    Ok(0)
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit status: 0 on success, 1 on a failed check, 2 on errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Enumerate(a) => enumerate(a, out, err),
        Command::Verify(a) => verify(a, out),
        Command::Bench(a) => bench(a, out, err),
        Command::Transpose(a) => transpose(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

pub fn main() -> ExitCode {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code)
}
