//! Command-line front end: delimited text in, projected rows out.
//!
//! All numerics live in [`crate::simplex`], [`crate::matrix`] and
//! [`crate::verify`]; this module only parses, dispatches and formats.
//!
//! Exit codes: 0 success, 1 parse or I/O error, 2 validation error,
//! 3 verification failure.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use thiserror::Error;

use crate::error::Error;
use crate::matrix::{regularize_matrix, MatrixTable, RegularizationReport};
use crate::simplex::TargetSum;
use crate::verify::kkt_check;

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

/// Relative KKT tolerance used by `--verify`, scaled by `max(1, ||row||_inf)`.
pub const VERIFY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// A single line holding one vector.
    Vector,
    /// Any number of lines of equal length.
    #[default]
    Matrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    /// `None` reads standard input.
    pub input: Option<PathBuf>,
    /// `None` writes standard output.
    pub output: Option<PathBuf>,
    pub mode: Mode,
    pub delimiter: char,
    pub target_sum: f64,
    pub verify: bool,
    pub report: bool,
    pub precision: usize,
}

impl Default for CliConfig {
    fn default() -> Self {
        Self {
            input: None,
            output: None,
            mode: Mode::default(),
            delimiter: ',',
            target_sum: 1.0,
            verify: false,
            report: false,
            precision: 9,
        }
    }
}

impl CliConfig {
    pub fn validate(&self) -> Result<TargetSum, CliError> {
        if !(1..=17).contains(&self.precision) {
            return Err(CliError::Config(format!(
                "precision must be in 1..=17, got {}",
                self.precision
            )));
        }
        if self.delimiter == '\n' || self.delimiter == '\r' {
            return Err(CliError::Config("delimiter cannot be a line break".into()));
        }
        TargetSum::new(self.target_sum).map_err(|e| CliError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("value at line {line}, column {column} is not finite")]
    NonFinite { line: usize, column: usize },

    #[error("line {line} has {found} fields, expected {expected}")]
    Ragged {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("input contains no data")]
    Empty,

    #[error("vector mode expects a single line, found {0}")]
    NotAVector(usize),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Projection(#[from] Error),

    #[error("KKT verification failed for {} row(s)", .0.len())]
    Verification(Vec<usize>),

    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Io(_) => EXIT_PARSE,
            CliError::NonFinite { .. }
            | CliError::Ragged { .. }
            | CliError::Empty
            | CliError::NotAVector(_)
            | CliError::Config(_)
            | CliError::Projection(_) => EXIT_VALIDATION,
            CliError::Verification(_) => EXIT_VERIFICATION,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Split delimited text into rows of numbers without checking rectangularity.
///
/// Accepts `\n` and `\r\n` line endings, ignores whitespace around fields and
/// trailing blank lines. Lines and columns in errors are 1-based; the column
/// counts characters from the start of the line.
pub fn parse_rows(text: &str, delimiter: char) -> Result<Vec<Vec<f64>>, CliError> {
    let mut lines: Vec<&str> = text
        .split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .collect();
    while lines.last().is_some_and(|l| l.trim().is_empty()) {
        lines.pop();
    }

    let mut rows = Vec::with_capacity(lines.len());
    for (li, line) in lines.iter().enumerate() {
        let mut row = Vec::new();
        let mut offset = 0usize;
        for field in line.split(delimiter) {
            let lead = field.len() - field.trim_start().len();
            let column = line[..offset + lead].chars().count() + 1;
            let token = field.trim();
            let value = parse_number(token).map_err(|message| CliError::Parse {
                line: li + 1,
                column,
                message,
            })?;
            if !value.is_finite() {
                return Err(CliError::NonFinite {
                    line: li + 1,
                    column,
                });
            }
            row.push(value);
            offset += field.len() + delimiter.len_utf8();
        }
        rows.push(row);
    }
    Ok(rows)
}

// Decimal with optional sign, fraction and exponent. Words such as `inf` or
// `nan` that `str::parse` would accept are rejected here.
fn parse_number(token: &str) -> Result<f64, String> {
    if token.is_empty() {
        return Err("empty field".into());
    }
    let bytes = token.as_bytes();
    let mut i = 0;
    if matches!(bytes[i], b'+' | b'-') {
        i += 1;
    }
    let int_start = i;
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    let mut digits = i - int_start;
    if i < bytes.len() && bytes[i] == b'.' {
        i += 1;
        let frac_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        digits += i - frac_start;
    }
    if digits > 0 && i < bytes.len() && matches!(bytes[i], b'e' | b'E') {
        i += 1;
        if i < bytes.len() && matches!(bytes[i], b'+' | b'-') {
            i += 1;
        }
        let exp_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i == exp_start {
            return Err(format!("malformed exponent in {token:?}"));
        }
    }
    if digits == 0 || i != bytes.len() {
        return Err(format!("not a decimal number: {token:?}"));
    }
    token
        .parse::<f64>()
        .map_err(|e| format!("not a decimal number: {token:?} ({e})"))
}

/// Parse a rectangular table.
pub fn parse_table(text: &str, delimiter: char) -> Result<MatrixTable, CliError> {
    let rows = parse_rows(text, delimiter)?;
    let expected = rows.first().ok_or(CliError::Empty)?.len();
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != expected) {
        return Err(CliError::Ragged {
            line: i + 1,
            expected,
            found: row.len(),
        });
    }
    Ok(MatrixTable::from_rows(&rows)?)
}

/// Fixed-point with `precision` decimals; at 17 the shortest representation
/// that parses back to the same `f64`.
pub fn format_value(value: f64, precision: usize) -> String {
    // Adding +0.0 turns -0.0 into 0.0.
    let value = value + 0.0;
    if precision >= 17 {
        format!("{value}")
    } else {
        format!("{value:.precision$}")
    }
}

pub fn format_table(m: &MatrixTable, delimiter: char, precision: usize) -> String {
    let mut out = String::new();
    for row in m.iter_rows() {
        for (j, &v) in row.iter().enumerate() {
            if j > 0 {
                out.push(delimiter);
            }
            out.push_str(&format_value(v, precision));
        }
        out.push('\n');
    }
    out
}

fn format_report(report: &RegularizationReport) -> String {
    let mut out = String::new();
    for r in &report.records {
        let _ = write!(
            out,
            "row {}: m*={} lambda*={:e} distance={:e}",
            r.row + 1,
            r.support_size,
            r.shift,
            r.squared_distance
        );
        if r.zero_row {
            out.push_str(" (zero row)");
        }
        out.push('\n');
    }
    let _ = writeln!(
        out,
        "rows={} max_distance={:e} total_distance={:e}",
        report.records.len(),
        report.max_distance,
        report.total_distance
    );
    out
}

/// Runs the tool against the process's standard streams and files.
pub fn run(config: &CliConfig) -> i32 {
    let stdin = io::stdin();
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(config, stdin.lock(), stdout.lock(), stderr.lock())
}

/// [`run`] with injectable streams. `stdin`/`stdout` are used only when the
/// config names no input/output path.
pub fn run_with<R: Read, W: Write, E: Write>(
    config: &CliConfig,
    stdin: R,
    mut stdout: W,
    mut stderr: E,
) -> i32 {
    match execute(config, stdin, &mut stdout, &mut stderr) {
        Ok(()) => EXIT_SUCCESS,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute<R: Read, W: Write, E: Write>(
    config: &CliConfig,
    mut stdin: R,
    stdout: &mut W,
    stderr: &mut E,
) -> Result<(), CliError> {
    let target_sum = config.validate()?;

    let text = match &config.input {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => {
            let mut s = String::new();
            stdin.read_to_string(&mut s)?;
            s
        }
    };

    let table = match config.mode {
        Mode::Vector => {
            let rows = parse_rows(&text, config.delimiter)?;
            match rows.len() {
                0 => return Err(CliError::Empty),
                1 => MatrixTable::from_rows(&rows)?,
                n => return Err(CliError::NotAVector(n)),
            }
        }
        Mode::Matrix => parse_table(&text, config.delimiter)?,
    };

    let (projected, report) = regularize_matrix(&table, target_sum)?;

    if config.report {
        stderr.write_all(format_report(&report).as_bytes())?;
    }

    if config.verify {
        let mut failed = Vec::new();
        for (i, (a, x)) in table.iter_rows().zip(projected.iter_rows()).enumerate() {
            let scale = a.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            let kkt = kkt_check(a, x, target_sum, VERIFY_TOL * scale)?;
            if !kkt.passed() {
                writeln!(
                    stderr,
                    "row {}: KKT check failed (sum={}, nonneg={}, shift={}, inactive={}, max violation {:e})",
                    i + 1,
                    kkt.feasible_sum,
                    kkt.feasible_nonneg,
                    kkt.equal_shift_ok,
                    kkt.inactive_ok,
                    kkt.max_violation
                )?;
                failed.push(i + 1);
            }
        }
        if !failed.is_empty() {
            return Err(CliError::Verification(failed));
        }
        writeln!(
            stderr,
            "verify: KKT conditions hold for all {} row(s)",
            table.rows()
        )?;
    }

    let body = format_table(&projected, config.delimiter, config.precision);
    match &config.output {
        Some(path) => {
            fs::write(path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?
        }
        None => {
            stdout.write_all(body.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}
