//! Report assembly and the process exit-code contract.
//!
//! Every successful run prints an optional human-readable section
//! followed by a single `RESULT:` line of space-separated key=value
//! pairs; keys are stable and values never contain spaces. Exit codes:
//! 0 for a definitive verdict, 2 when the answer is indeterminate or
//! undecided, 3 for graph text parse errors, 4 for graph invariant
//! violations, 5 when a computation refuses its input, 6 for io
//! trouble, 64 for usage errors.

use std::fmt::Display;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// Full report followed by the RESULT line.
    Text,
    /// The RESULT line alone.
    Kv,
}

pub struct Report {
    preamble: Option<String>,
    lines: Vec<String>,
    result: Vec<(String, String)>,
    definitive: bool,
}

impl Report {
    pub fn new() -> Report {
        Report { preamble: None, lines: Vec::new(), result: Vec::new(), definitive: true }
    }

    /// Raw block printed before the report in both formats; used for
    /// `--emit-graph`.
    pub fn preamble(&mut self, block: String) {
        self.preamble = Some(block);
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    /// Appends a RESULT pair. Spaces are squeezed out of the value so
    /// the line stays splittable on whitespace.
    pub fn kv(&mut self, key: &str, value: impl Display) {
        let v = value.to_string().replace(' ', "");
        self.result.push((key.to_string(), v));
    }

    /// Marks the verdict as non-definitive (exit code 2).
    pub fn indeterminate(&mut self) {
        self.definitive = false;
    }

    pub fn is_definitive(&self) -> bool {
        self.definitive
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        if let Some(block) = &self.preamble {
            out.push_str(block);
        }
        if format == Format::Text {
            for l in &self.lines {
                out.push_str(l);
                out.push('\n');
            }
        }
        out.push_str("RESULT:");
        for (k, v) in &self.result {
            out.push(' ');
            out.push_str(k);
            out.push('=');
            out.push_str(v);
        }
        out.push('\n');
        out
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Bad argument combinations caught after clap.
    Usage(String),
    /// Malformed graph text.
    Parse { line: usize, msg: String },
    /// Graph text parsed but violates a structural invariant.
    Invariant(String),
    /// A module refused the computation.
    Module(String),
    /// File or stream trouble.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Parse { .. } => 3,
            CliError::Invariant(_) => 4,
            CliError::Module(_) => 5,
            CliError::Io(_) => 6,
        }
    }
}

impl Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {}", m),
            CliError::Parse { line, msg } => write!(f, "parse error at line {}: {}", line, msg),
            CliError::Invariant(m) => write!(f, "invariant violation: {}", m),
            CliError::Module(m) => write!(f, "error: {}", m),
            CliError::Io(m) => write!(f, "io error: {}", m),
        }
    }
}

/// Wraps any displayable module error.
pub fn module(e: impl Display) -> CliError {
    CliError::Module(e.to_string())
}
