use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::CliError;

pub const ENERGY_UNITS: &str = "# units: energies in xi, times in 1/xi, phases in rad";

/// Fixed 15-significant-digit scientific notation, independent of locale.
pub fn num(x: f64) -> String {
    format!("{x:.14e}")
}

/// `x` rounded to the digits printed by [`num`], for JSON output.
pub fn round15(x: f64) -> f64 {
    num(x).parse().unwrap_or(x)
}

/// CSV text with a `#` units line, a header and one line per row. Missing
/// values are written as empty fields.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(columns: &[&str]) -> Self {
        let mut text = String::new();
        text.push_str(ENERGY_UNITS);
        text.push('\n');
        text.push_str(&columns.join(","));
        text.push('\n');
        Self { text }
    }

    pub fn row(&mut self, fields: &[Field]) {
        let cells: Vec<String> = fields.iter().map(Field::render).collect();
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

pub enum Field {
    Real(f64),
    Int(usize),
    Empty,
}

impl Field {
    fn render(&self) -> String {
        match self {
            Field::Real(x) => num(*x),
            Field::Int(n) => n.to_string(),
            Field::Empty => String::new(),
        }
    }
}

impl From<f64> for Field {
    fn from(x: f64) -> Self {
        Field::Real(x)
    }
}

impl From<Option<f64>> for Field {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Field::Empty, Field::Real)
    }
}

pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

/// Writes `contents` to `path` through a temporary file in the same directory
/// and a rename, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(contents.as_bytes()).map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
        Some(path) => write_atomic(path, contents),
    }
}

pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.flush().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// `report.json` -> `report_bic2.csv`.
pub fn profile_path(report: &Path, index: usize) -> PathBuf {
    let stem = report.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "bic".into());
    report.with_file_name(format!("{stem}_bic{index}.csv"))
}
