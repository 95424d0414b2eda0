//! Error classification, provenance metadata and file writing.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use rankcomp::complementarity::ComplementarityError;
use rankcomp::kemeny::KemenyError;
use rankcomp::prediction::PredictionError;
use rankcomp::structure::StructureError;
use rankcomp::ScoreSetError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input.
    Input(String),
    /// Well-formed input that violates a requirement.
    Validation(String),
    /// A numerical routine could not produce a result.
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Validation(m) | CliError::Numerical(m) => f.write_str(m),
        }
    }
}

impl From<ScoreSetError> for CliError {
    fn from(e: ScoreSetError) -> Self {
        if e.is_parse_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

impl From<ComplementarityError> for CliError {
    fn from(e: ComplementarityError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<StructureError> for CliError {
    fn from(e: StructureError) -> Self {
        match e {
            StructureError::TooFewRows(_) => CliError::Validation(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<PredictionError> for CliError {
    fn from(e: PredictionError) -> Self {
        match e {
            PredictionError::NonFinite => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<KemenyError> for CliError {
    fn from(e: KemenyError) -> Self {
        CliError::Validation(e.to_string())
    }
}

pub fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

/// Provenance stamped into every output file.
#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub config_hash: String,
}

impl Meta {
    /// Hashes the subcommand name, its options and the raw input bytes.
    pub fn new<T: Serialize>(command: &str, options: &T, seed: u64, inputs: &[&[u8]]) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(command.as_bytes());
        hasher.update([0]);
        hasher.update(serde_json::to_vec(options).expect("options serialize"));
        hasher.update(seed.to_le_bytes());
        for bytes in inputs {
            hasher.update((bytes.len() as u64).to_le_bytes());
            hasher.update(bytes);
        }
        Meta {
            tool: "rankcomp",
            version: VERSION,
            seed,
            config_hash: hex::encode(hasher.finalize()),
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} version={} seed={} config={}",
            self.tool, self.version, self.seed, self.config_hash
        )
    }
}

pub struct OutDir {
    dir: PathBuf,
    pub meta: Meta,
    written: Vec<PathBuf>,
}

impl OutDir {
    pub fn create(dir: &Path, meta: Meta) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
        Ok(Self {
            dir: dir.to_owned(),
            meta,
            written: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, body: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, body).map_err(|e| io_error(&path, e))?;
        self.written.push(path);
        Ok(())
    }

    /// CSV with a leading `#` metadata line.
    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        let fail = |e: csv::Error| CliError::Numerical(format!("{name}: {e}"));
        w.write_record(header).map_err(fail)?;
        for row in rows {
            w.write_record(row).map_err(fail)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Numerical(e.to_string()))?;
        let body = format!("# {}\n{}", self.meta.line(), String::from_utf8_lossy(&bytes));
        self.write(name, &body)
    }

    /// JSON object `{"meta": ..., <payload fields>}`.
    pub fn json<T: Serialize>(&mut self, name: &str, payload: &T) -> Result<(), CliError> {
        #[derive(Serialize)]
        struct Doc<'a, T> {
            meta: &'a Meta,
            #[serde(flatten)]
            payload: &'a T,
        }
        let doc = Doc {
            meta: &self.meta,
            payload,
        };
        let mut body = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Numerical(e.to_string()))?;
        body.push('\n');
        self.write(name, &body)
    }

    pub fn svg(&mut self, name: &str, render: impl FnOnce(&str) -> String) -> Result<(), CliError> {
        let body = render(&self.meta.line());
        self.write(name, &body)
    }

    /// Arbitrary text after a `#` metadata line.
    pub fn hashed_text(&mut self, name: &str, body: &str) -> Result<(), CliError> {
        let body = format!("# {}\n{body}", self.meta.line());
        self.write(name, &body)
    }

    pub fn report(&self) {
        for p in &self.written {
            println!("wrote {}", p.display());
        }
    }
}

/// Locale-independent shortest round-trip formatting.
pub fn num(v: f64) -> String {
    v.to_string()
}
