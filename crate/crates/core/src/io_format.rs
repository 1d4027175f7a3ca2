//! Text and binary serializations of a run-length BWT.
//!
//! Text:
//!
//! ```text
//! #RLBWT v1 n=<n> r=<r>
//! <code>\t<exponent>
//! ...
//! ```
//!
//! one line per run, LF line ends, no blank line at the end. Codes are
//! decimal symbol codes: 0 is the sentinel and 1..=256 are bytes plus one.
//!
//! Binary: the magic `RLB1`, a version byte `0x01`, then unsigned LEB128
//! varints `n`, `r` and `r` pairs `code exponent`.
//!
//! Both readers check the same invariants: exponents sum to `n`, there are
//! `r` runs, no exponent is zero, adjacent runs differ and exactly one run is
//! a sentinel with exponent 1.

use std::fmt::Write as _;

use crate::symbol::{Run, Symbol};

const MAGIC: &[u8; 4] = b"RLB1";
const VERSION: u8 = 0x01;
const HEADER_PREFIX: &str = "#RLBWT v1 ";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("malformed header: {0}")]
    BadHeader(String),
    #[error("line {line}: not a number: {text:?}")]
    BadNumber { line: usize, text: String },
    #[error("line {line}: expected `<code>\\t<exponent>`")]
    BadLine { line: usize },
    #[error("exponents sum to {actual} but header says n={declared}")]
    LengthMismatch { declared: u64, actual: u64 },
    #[error("found {actual} runs but header says r={declared}")]
    RunCountMismatch { declared: u64, actual: u64 },
    #[error("run {run}: zero exponent")]
    ZeroExponent { run: u64 },
    #[error("run {run}: same code {code} as the previous run")]
    AdjacentEqual { run: u64, code: u16 },
    #[error("run {run}: symbol code {code} out of range")]
    CodeOutOfRange { run: u64, code: u64 },
    #[error("expected exactly one sentinel run of exponent 1, found {count} sentinel symbols")]
    Sentinel { count: u64 },
    #[error("bad magic bytes")]
    BadMagic,
    #[error("unsupported version {0:#04x}")]
    BadVersion(u8),
    #[error("input ends inside a field")]
    Truncated,
    #[error("varint at byte {offset} overflows 64 bits")]
    VarintOverflow { offset: usize },
    #[error("{0} unexpected bytes after the last run")]
    TrailingBytes(usize),
}

/// A validated run-length BWT.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RlbwtDocument {
    runs: Vec<Run>,
    n: u64,
}

impl RlbwtDocument {
    /// Validates `runs` and wraps them.
    pub fn new(runs: Vec<Run>) -> Result<Self, FormatError> {
        let n = runs.iter().map(|r| r.exponent).sum();
        validate(&runs, n, runs.len() as u64)?;
        Ok(RlbwtDocument { runs, n })
    }

    /// Total length, sentinel included.
    pub fn n_total(&self) -> u64 {
        self.n
    }

    pub fn r(&self) -> u64 {
        self.runs.len() as u64
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn into_runs(self) -> Vec<Run> {
        self.runs
    }
}

fn validate(runs: &[Run], n: u64, r: u64) -> Result<(), FormatError> {
    let mut sum = 0u64;
    let mut sentinels = 0u64;
    let mut sentinel_ok = true;
    for (k, run) in runs.iter().enumerate() {
        let k = k as u64 + 1;
        if run.exponent == 0 {
            return Err(FormatError::ZeroExponent { run: k });
        }
        if k > 1 && runs[k as usize - 2].head == run.head {
            return Err(FormatError::AdjacentEqual {
                run: k,
                code: run.head.code(),
            });
        }
        if run.head.is_sentinel() {
            sentinels = sentinels.saturating_add(run.exponent);
            sentinel_ok &= run.exponent == 1;
        }
        sum = sum.saturating_add(run.exponent);
    }
    if runs.len() as u64 != r {
        return Err(FormatError::RunCountMismatch {
            declared: r,
            actual: runs.len() as u64,
        });
    }
    if sum != n {
        return Err(FormatError::LengthMismatch {
            declared: n,
            actual: sum,
        });
    }
    if sentinels != 1 || !sentinel_ok {
        return Err(FormatError::Sentinel { count: sentinels });
    }
    Ok(())
}

fn symbol(code: u64, run: u64) -> Result<Symbol, FormatError> {
    u16::try_from(code)
        .ok()
        .and_then(Symbol::from_code)
        .ok_or(FormatError::CodeOutOfRange { run, code })
}

pub fn write_text(doc: &RlbwtDocument) -> String {
    let mut out = String::with_capacity(24 + doc.runs.len() * 8);
    write!(out, "{HEADER_PREFIX}n={} r={}", doc.n, doc.runs.len()).unwrap();
    for run in &doc.runs {
        write!(out, "\n{}\t{}", run.head.code(), run.exponent).unwrap();
    }
    out.push('\n');
    out
}

fn parse_u64(s: &str, line: usize) -> Result<u64, FormatError> {
    let bad = || FormatError::BadNumber {
        line,
        text: s.to_string(),
    };
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    s.parse().map_err(|_| bad())
}

fn parse_header(line: &str) -> Result<(u64, u64), FormatError> {
    let bad = || FormatError::BadHeader(line.to_string());
    let rest = line.strip_prefix(HEADER_PREFIX).ok_or_else(bad)?;
    let (n, r) = rest.split_once(' ').ok_or_else(bad)?;
    let n = n.strip_prefix("n=").ok_or_else(bad)?;
    let r = r.strip_prefix("r=").ok_or_else(bad)?;
    Ok((parse_u64(n, 1)?, parse_u64(r, 1)?))
}

pub fn read_text(text: &str) -> Result<RlbwtDocument, FormatError> {
    let body = text
        .strip_suffix('\n')
        .ok_or_else(|| FormatError::BadHeader("missing final line feed".into()))?;
    let mut lines = body.split('\n');
    let (n, r) = parse_header(lines.next().unwrap_or(""))?;
    let mut runs = Vec::new();
    for (k, line) in lines.enumerate() {
        let lineno = k + 2;
        let (code, exp) = line
            .split_once('\t')
            .ok_or(FormatError::BadLine { line: lineno })?;
        let code = parse_u64(code, lineno)?;
        let exponent = parse_u64(exp, lineno)?;
        runs.push(Run::new(symbol(code, k as u64 + 1)?, exponent));
    }
    validate(&runs, n, r)?;
    Ok(RlbwtDocument { runs, n })
}

fn put_varint(out: &mut Vec<u8>, mut v: u64) {
    while v >= 0x80 {
        out.push(v as u8 | 0x80);
        v >>= 7;
    }
    out.push(v as u8);
}

fn get_varint(bytes: &[u8], pos: &mut usize) -> Result<u64, FormatError> {
    let start = *pos;
    let mut v = 0u64;
    let mut shift = 0;
    loop {
        let b = *bytes.get(*pos).ok_or(FormatError::Truncated)?;
        *pos += 1;
        let low = (b & 0x7f) as u64;
        if shift == 63 && low > 1 || shift > 63 {
            return Err(FormatError::VarintOverflow { offset: start });
        }
        v |= low << shift;
        if b & 0x80 == 0 {
            return Ok(v);
        }
        shift += 7;
    }
}

pub fn write_binary(doc: &RlbwtDocument) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + doc.runs.len() * 3);
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    put_varint(&mut out, doc.n);
    put_varint(&mut out, doc.runs.len() as u64);
    for run in &doc.runs {
        put_varint(&mut out, run.head.code() as u64);
        put_varint(&mut out, run.exponent);
    }
    out
}

pub fn read_binary(bytes: &[u8]) -> Result<RlbwtDocument, FormatError> {
    if bytes.len() < MAGIC.len() || &bytes[..4] != MAGIC {
        return Err(if MAGIC.starts_with(bytes) {
            FormatError::Truncated
        } else {
            FormatError::BadMagic
        });
    }
    let version = *bytes.get(4).ok_or(FormatError::Truncated)?;
    if version != VERSION {
        return Err(FormatError::BadVersion(version));
    }
    let mut pos = 5;
    let n = get_varint(bytes, &mut pos)?;
    let r = get_varint(bytes, &mut pos)?;
    // each run takes at least two bytes
    let mut runs = Vec::with_capacity(r.min((bytes.len() / 2) as u64) as usize);
    for k in 1..=r {
        let code = get_varint(bytes, &mut pos)?;
        let exponent = get_varint(bytes, &mut pos)?;
        runs.push(Run::new(symbol(code, k)?, exponent));
    }
    if pos != bytes.len() {
        return Err(FormatError::TrailingBytes(bytes.len() - pos));
    }
    validate(&runs, n, r)?;
    Ok(RlbwtDocument { runs, n })
}
