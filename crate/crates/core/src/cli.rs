//! The `rlbwt` command line: `build`, `invert` and `selftest`.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bwt_builder::OnlineBwt;
use crate::io_format::{read_binary, read_text, write_binary, write_text, RlbwtDocument};
use crate::rle_string::RleConfig;
use crate::selftest;

#[derive(Debug, Parser)]
#[command(name = "rlbwt", version, about = "Online run-length BWT construction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stream bytes in and write the run-length BWT of their reverse.
    Build(BuildArgs),
    /// Recover the original byte stream from a run-length BWT.
    Invert(InvertArgs),
    /// Check every structure against brute-force references.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Binary,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Input file; stdin when omitted.
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Buffer the whole input and feed it backwards, giving the BWT of the
    /// input itself. Holds the entire input in memory.
    #[arg(long)]
    pub reverse: bool,
    /// Write a JSON statistics line to this path, or to stderr for `-`.
    #[arg(long, value_name = "PATH|-")]
    pub stats: Option<String>,
    /// Read buffer size in bytes.
    #[arg(long, default_value_t = 1 << 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub block_bytes: u64,
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Random cases per suite.
    #[arg(long, default_value_t = 200)]
    pub n: u64,
    /// Longest random input.
    #[arg(long, default_value_t = 512)]
    pub max_len: u64,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
}

/// Statistics of one `build` run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BuildReport {
    /// Input bytes.
    pub n: u64,
    /// Runs, the sentinel's included.
    pub r: u64,
    pub seconds: f64,
    pub footprint_bytes: u64,
    pub bytes_per_sec: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
    #[error("invalid document: {0}")]
    Format(#[from] crate::io_format::FormatError),
    #[error("invalid document: {0}")]
    Document(#[from] crate::Error),
    #[error("{0} selftest suite(s) failed")]
    Selftest(usize),
}

fn io_err(context: impl Into<String>) -> impl FnOnce(io::Error) -> CliError {
    let context = context.into();
    move |source| CliError::Io { context, source }
}

fn open_input(path: Option<&Path>) -> Result<Box<dyn Read>, CliError> {
    Ok(match path {
        Some(p) => Box::new(File::open(p).map_err(io_err(format!("opening {}", p.display())))?),
        None => Box::new(io::stdin().lock()),
    })
}

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// so a failure never leaves a partial file behind. Stdout when `None`.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(io_err("writing stdout"))
        }
        Some(p) => {
            let ctx = format!("writing {}", p.display());
            let dir = match p.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err(ctx.clone()))?;
            {
                let mut w = BufWriter::new(tmp.as_file_mut());
                w.write_all(bytes)
                    .and_then(|_| w.flush())
                    .map_err(io_err(ctx.clone()))?;
            }
            tmp.persist(p).map_err(|e| io_err(ctx)(e.error))?;
            Ok(())
        }
    }
}

fn serialize(doc: &RlbwtDocument, format: Format) -> Vec<u8> {
    match format {
        Format::Text => write_text(doc).into_bytes(),
        Format::Binary => write_binary(doc),
    }
}

/// Builds the run-length BWT of everything `input` yields.
pub fn build_from_reader(
    input: &mut dyn Read,
    reverse: bool,
    block_bytes: usize,
) -> Result<(OnlineBwt, u64), CliError> {
    let mut bwt = OnlineBwt::new();
    let mut n = 0u64;
    if reverse {
        let mut all = Vec::new();
        input
            .read_to_end(&mut all)
            .map_err(io_err("reading input"))?;
        all.reverse();
        bwt.extend_all(&all);
        n = all.len() as u64;
    } else {
        let mut buf = vec![0u8; block_bytes.max(1)];
        loop {
            let k = match input.read(&mut buf) {
                Ok(0) => break,
                Ok(k) => k,
                Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
                Err(e) => return Err(io_err("reading input")(e)),
            };
            bwt.extend_all(&buf[..k]);
            n += k as u64;
        }
    }
    Ok((bwt, n))
}

pub fn run_build(args: &BuildArgs) -> Result<BuildReport, CliError> {
    let start = Instant::now();
    let mut input = open_input(args.input.as_deref())?;
    let block = usize::try_from(args.block_bytes).unwrap_or(usize::MAX);
    let (bwt, n) = build_from_reader(&mut input, args.reverse, block)?;
    let doc = RlbwtDocument::new(bwt.runs())?;
    write_output(args.output.as_deref(), &serialize(&doc, args.format))?;
    let seconds = start.elapsed().as_secs_f64();
    let report = BuildReport {
        n,
        r: bwt.num_runs(),
        seconds,
        footprint_bytes: bwt.footprint_bytes() as u64,
        bytes_per_sec: if seconds > 0.0 {
            n as f64 / seconds
        } else {
            0.0
        },
    };
    if let Some(target) = &args.stats {
        let line = serde_json::to_string(&report).expect("report serializes") + "\n";
        if target == "-" {
            io::stderr()
                .write_all(line.as_bytes())
                .map_err(io_err("writing stats"))?;
        } else {
            write_output(Some(Path::new(target)), line.as_bytes())?;
        }
    }
    Ok(report)
}

/// Parses a document in the given format.
pub fn parse_document(bytes: &[u8], format: Format) -> Result<RlbwtDocument, CliError> {
    Ok(match format {
        Format::Text => {
            let text = std::str::from_utf8(bytes).map_err(|_| {
                crate::io_format::FormatError::BadHeader("input is not UTF-8 text".into())
            })?;
            read_text(text)?
        }
        Format::Binary => read_binary(bytes)?,
    })
}

pub fn run_invert(args: &InvertArgs) -> Result<u64, CliError> {
    let mut raw = Vec::new();
    open_input(args.input.as_deref())?
        .read_to_end(&mut raw)
        .map_err(io_err("reading input"))?;
    let doc = parse_document(&raw, args.format)?;
    let bwt = OnlineBwt::from_runs(doc.runs(), RleConfig::default())?;
    let bytes = bwt.invert();
    write_output(args.output.as_deref(), &bytes)?;
    Ok(bytes.len() as u64)
}

pub fn run_selftest(args: &SelftestArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let reports = selftest::run(args.n, args.max_len, args.seed);
    let mut failed = 0;
    for r in &reports {
        let line = match &r.failure {
            None => format!("PASS  {:<22} {} cases", r.name, r.cases),
            Some(m) => {
                failed += 1;
                format!("FAIL  {:<22} {m}", r.name)
            }
        };
        writeln!(out, "{line}").map_err(io_err("writing report"))?;
    }
    writeln!(
        out,
        "{} of {} suites passed (seed {})",
        reports.len() - failed,
        reports.len(),
        args.seed
    )
    .map_err(io_err("writing report"))?;
    if failed > 0 {
        return Err(CliError::Selftest(failed));
    }
    Ok(())
}

/// Parses `args` and runs the chosen command.
pub fn main_with_args<I, T>(args: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).unwrap_or_else(|e| e.exit());
    match cli.command {
        Command::Build(a) => run_build(&a).map(|_| ()),
        Command::Invert(a) => run_invert(&a).map(|_| ()),
        Command::Selftest(a) => run_selftest(&a, &mut io::stdout().lock()),
    }
}
