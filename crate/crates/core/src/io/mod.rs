//! Context readers and writers, and result writers.
//!
//! Inputs: Burmeister `.cxt`, FIMI transaction lists (`.dat`), 0/1 CSV.
//! Outputs: `.cxt`, FIMI, CSV, a plain concept list and a JSON spawn tree.

mod csv;
mod cxt;
mod fimi;
mod json;
mod text;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

pub use self::csv::{parse_csv, write_csv};
pub use self::cxt::{parse_cxt, write_cxt};
pub use self::fimi::{parse_fimi, write_fimi};
pub use self::json::{write_concept_tree_json, ConceptTreeDocument, ContextInfo, NodeRecord};
pub use self::text::{quote_name, write_concepts_text};

use crate::context::FormalContext;
use crate::error::{FcaError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Cxt,
    Fimi,
    Csv,
}

impl Format {
    /// Guesses the format from a file extension.
    pub fn from_path(path: &Path) -> Option<Format> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "cxt" => Some(Format::Cxt),
            "dat" | "fimi" | "txt" => Some(Format::Fimi),
            "csv" => Some(Format::Csv),
            _ => None,
        }
    }
}

impl FromStr for Format {
    type Err = FcaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cxt" => Ok(Format::Cxt),
            "fimi" | "dat" => Ok(Format::Fimi),
            "csv" => Ok(Format::Csv),
            other => Err(FcaError::InvalidArgument(format!("unknown format {other:?}"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Cxt => "cxt",
            Format::Fimi => "fimi",
            Format::Csv => "csv",
        })
    }
}

pub fn parse(text: &str, format: Format) -> Result<FormalContext> {
    match format {
        Format::Cxt => parse_cxt(text),
        Format::Fimi => parse_fimi(text, None),
        Format::Csv => parse_csv(text),
    }
}

pub fn write(ctx: &FormalContext, format: Format) -> String {
    match format {
        Format::Cxt => write_cxt(ctx),
        Format::Fimi => write_fimi(ctx),
        Format::Csv => write_csv(ctx),
    }
}

/// Reads a context file; `format` falls back to the file extension.
pub fn read_context(path: &Path, format: Option<Format>) -> Result<FormalContext> {
    let format = format
        .or_else(|| Format::from_path(path))
        .ok_or_else(|| FcaError::InvalidArgument(format!("cannot tell the format of {}", path.display())))?;
    let text = std::fs::read_to_string(path)?;
    parse(&text, format)
}
