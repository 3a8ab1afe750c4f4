//! The `padfa` command-line tool.

mod bench;
mod verify;

pub use bench::{bench, BenchReport, BenchRow};
pub use verify::{
    dictionary_probes, dictionary_searchers, run_verify, text_probes, text_searchers, Mismatch, Searcher,
    VerifyReport,
};

use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::automaton::{build_suffix_dawg, build_trie, minimize, Adfa, Dictionary};
use crate::automaton::split_lines;
use crate::decompose::{classify_edges, count_paths};
use crate::error::Error;
use crate::gen::{self, Shape};
use crate::index::{load_any, AnyIndex, BuildOptions, Padfa};
use crate::packed::CharMode;
use crate::succinct::Backend;
use crate::Mode;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "padfa", version, about = "Packed acyclic automata for dictionary and substring lookup")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build an index from a dictionary (one string per line) or a text.
    Build(BuildArgs),
    /// Answer membership or substring queries against an index.
    Query(QueryArgs),
    /// Build every variant and check them against a hash-set or naive oracle.
    Verify(VerifyArgs),
    /// Time and size every variant on a dictionary.
    Bench(BenchArgs),
    /// Print per-component space of an index.
    Stats(StatsArgs),
    /// Write a synthetic dictionary or text.
    Gen(GenArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    /// Trie of the dictionary.
    Trie,
    /// Minimal automaton of the dictionary.
    Min,
    /// Suffix automaton of the whole input as one text.
    Dawg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Edgelist,
    Biased,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CharModeArg {
    Bitpacked,
    Byte,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "min")]
    pub variant: Variant,
    /// Write a packed index instead of the plain automaton.
    #[arg(long)]
    pub pack: bool,
    #[arg(long, value_enum, default_value = "edgelist")]
    pub backend: BackendArg,
    #[arg(long, value_enum, default_value = "bitpacked")]
    pub char_mode: CharModeArg,
}

#[derive(Args, Debug)]
pub struct QueryArgs {
    #[arg(long)]
    pub index: PathBuf,
    #[arg(long, conflicts_with = "patterns", required_unless_present = "patterns")]
    pub pattern: Option<String>,
    /// File of patterns, one per line.
    #[arg(long)]
    pub patterns: Option<PathBuf>,
    /// Substring queries; needs an index built with `--variant dawg`.
    #[arg(long)]
    pub substring: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Random non-member probes on top of all members.
    #[arg(long, default_value_t = 1000)]
    pub probes: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Treat the input as one text and check substring queries.
    #[arg(long)]
    pub text: bool,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub repeat: usize,
    /// Also write the report as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[arg(long)]
    pub index: PathBuf,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub out: PathBuf,
    /// Corpus shape: url, city or prot. Overrides --sigma and the lengths.
    #[arg(long)]
    pub shape: Option<Shape>,
    #[arg(long, default_value_t = 1000)]
    pub k: usize,
    #[arg(long, default_value_t = 26)]
    pub sigma: usize,
    #[arg(long, default_value_t = 1)]
    pub min_len: usize,
    #[arg(long, default_value_t = 16)]
    pub max_len: usize,
    /// Write one random text of this length instead of a dictionary.
    #[arg(long)]
    pub text: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// A failed command: message and exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn io(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_IO,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::ModeMismatch { .. } => EXIT_USAGE,
            _ => EXIT_IO,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::io(e.to_string())
    }
}

type CmdResult = std::result::Result<u8, Failure>;

fn read(path: &PathBuf) -> std::result::Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

/// Parses a dictionary file, naming 1-based lines in errors.
pub fn parse_dictionary(data: &[u8]) -> std::result::Result<Dictionary, Failure> {
    Dictionary::from_lines(data).map_err(|e| match e {
        Error::DuplicateString { first, second } => {
            Failure::io(format!("duplicate string on lines {} and {}", first + 1, second + 1))
        }
        Error::FillerByte { index } => Failure::io(format!("line {} contains a NUL byte", index + 1)),
        e => e.into(),
    })
}

/// Builds the unpacked automaton of a variant from raw input.
pub fn build_variant(variant: Variant, data: &[u8]) -> std::result::Result<Adfa, Failure> {
    Ok(match variant {
        Variant::Trie => build_trie(&parse_dictionary(data)?)?,
        Variant::Min => minimize(&build_trie(&parse_dictionary(data)?)?)?,
        Variant::Dawg => build_suffix_dawg(data).map_err(|e| match e {
            Error::FillerByte { index } => Failure::io(format!("text contains a NUL byte at offset {index}")),
            e => e.into(),
        })?,
    })
}

fn cmd_build(a: &BuildArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let data = read(&a.input)?;
    let adfa = build_variant(a.variant, &data)?;
    if a.variant != Variant::Dawg && adfa.edge_count() == 0 {
        writeln!(err, "warning: empty dictionary")?;
    }
    let pc = count_paths(&adfa)?;
    let heavy = classify_edges(&adfa, &pc).heavy_count();
    let bytes = if a.pack {
        let opts = BuildOptions {
            backend: match a.backend {
                BackendArg::Edgelist => Backend::EdgeList,
                BackendArg::Biased => Backend::Biased,
            },
            char_mode: match a.char_mode {
                CharModeArg::Bitpacked => CharMode::Bitpacked,
                CharModeArg::Byte => CharMode::Byte,
            },
        };
        Padfa::build(&adfa, opts)?.to_bytes()
    } else {
        adfa.to_bytes()
    };
    std::fs::write(&a.out, bytes).map_err(|e| Failure::io(format!("{}: {e}", a.out.display())))?;
    writeln!(
        out,
        "n={} k={} sigma={} H={} L={}",
        adfa.vertex_count(),
        adfa.language_size()?,
        adfa.alphabet().sigma(),
        heavy,
        adfa.edge_count() - heavy
    )?;
    Ok(EXIT_OK)
}

fn cmd_query(a: &QueryArgs, out: &mut dyn Write) -> CmdResult {
    let index = load_any(&read(&a.index)?)?;
    let wanted = if a.substring { Mode::Reach } else { Mode::Membership };
    if index.mode() != wanted {
        return Err(Error::ModeMismatch {
            expected: wanted,
            found: index.mode(),
        }
        .into());
    }
    let patterns = match (&a.pattern, &a.patterns) {
        (Some(p), _) => vec![p.as_bytes().to_vec()],
        (None, Some(f)) => split_lines(&read(f)?),
        (None, None) => unreachable!("clap requires one of them"),
    };
    let mut out = BufWriter::new(out);
    for p in &patterns {
        writeln!(out, "{}", u8::from(index.query(p)))?;
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> CmdResult {
    let data = read(&a.input)?;
    let report = if a.text {
        let searchers = text_searchers(&data).map_err(Failure::from)?;
        let probes = text_probes(&data, a.probes, a.seed);
        run_verify(&searchers, &probes, |p| verify::naive_substring(&data, p))
    } else {
        let d = parse_dictionary(&data)?;
        let searchers = dictionary_searchers(&d)?;
        let probes = dictionary_probes(&d, a.probes, a.seed);
        let oracle: std::collections::HashSet<&[u8]> = d.iter().collect();
        run_verify(&searchers, &probes, |p| oracle.contains(p))
    };
    writeln!(out, "{report}")?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

/// Bench parallelism from `PADFA_THREADS`, default 1.
pub fn bench_threads() -> usize {
    std::env::var("PADFA_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
        .unwrap_or(1)
}

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> CmdResult {
    let d = parse_dictionary(&read(&a.input)?)?;
    let report = bench(&d, a.repeat.max(1), bench_threads())?;
    write!(out, "{}", report.table())?;
    if let Some(path) = &a.csv {
        std::fs::write(path, report.csv()).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    }
    Ok(if report.mismatches() == 0 { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn cmd_stats(a: &StatsArgs, out: &mut dyn Write) -> CmdResult {
    match load_any(&read(&a.index)?)? {
        AnyIndex::Packed(p) => {
            writeln!(out, "packed {} index ({:?}, {:?})", p.mode(), p.backend(), p.char_mode())?;
            writeln!(out, "{}", p.space_report())?;
        }
        AnyIndex::Plain(g) => {
            writeln!(out, "plain {} automaton", g.mode())?;
            writeln!(out, "n              {}", g.vertex_count())?;
            writeln!(out, "edges          {}", g.edge_count())?;
            writeln!(out, "k              {}", g.language_size()?)?;
            writeln!(out, "sigma          {}", g.alphabet().sigma())?;
            writeln!(out, "total bits     {}", g.size_bits())?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_gen(a: &GenArgs) -> CmdResult {
    let mut rng = gen::rng(a.seed);
    if a.sigma == 0 || a.sigma > gen::MAX_SIGMA {
        return Err(Failure {
            code: EXIT_USAGE,
            message: format!("--sigma must be in 1..={}", gen::MAX_SIGMA),
        });
    }
    let bytes = if let Some(len) = a.text {
        gen::random_text(&mut rng, a.sigma, len)
    } else {
        let d = match a.shape {
            Some(shape) => gen::shaped(&mut rng, shape, a.k),
            None => gen::random_dictionary(&mut rng, a.sigma, a.k, a.min_len..=a.max_len.max(a.min_len)),
        };
        let mut b = Vec::with_capacity(d.total_len() + d.len());
        for s in d.iter() {
            b.extend_from_slice(s);
            b.push(b'\n');
        }
        b
    };
    std::fs::write(&a.out, bytes).map_err(|e| Failure::io(format!("{}: {e}", a.out.display())))?;
    Ok(EXIT_OK)
}

/// Runs a parsed command, writing normal output to `out` and warnings to
/// `err`. Returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let result = match &cli.command {
        Command::Build(a) => cmd_build(a, out, err),
        Command::Query(a) => cmd_query(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Bench(a) => cmd_bench(a, out),
        Command::Stats(a) => cmd_stats(a, out),
        Command::Gen(a) => cmd_gen(a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = run(&cli, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code)
}
