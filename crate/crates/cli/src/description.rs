//! The `abmod/1` module description: a JSON document holding the a-matrix
//! as series strings.

use abmod_core::{AbError, AbModule, Series, SeriesMatrix};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "abmod/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDescription {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    pub rank: usize,
    pub truncation: usize,
    /// Whether the entries are exact polynomials (`true`) or only known
    /// modulo `b^truncation`.
    #[serde(default = "default_exact")]
    pub exact: bool,
    pub a_matrix: Vec<Vec<String>>,
}

fn default_exact() -> bool {
    true
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> AbError {
    AbError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Line and column (1-based) of byte offset `pos` in `text`.
fn position(text: &str, pos: usize) -> (usize, usize) {
    let before = &text[..pos];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(pos, |nl| pos - nl - 1) + 1;
    (line, column)
}

impl ModuleDescription {
    pub fn from_module(m: &AbModule, name: Option<String>, provenance: Option<String>) -> Self {
        let a = m.a_matrix();
        ModuleDescription {
            schema: SCHEMA.to_string(),
            name,
            provenance,
            rank: m.rank(),
            truncation: m.trunc(),
            exact: m.is_exact(),
            a_matrix: (0..m.rank())
                .map(|i| a.row(i).iter().map(Series::to_string).collect())
                .collect(),
        }
    }

    /// Parse and validate; errors carry the line and column in `text`.
    pub fn parse(text: &str) -> Result<Self, AbError> {
        let desc: ModuleDescription = serde_json::from_str(text)
            .map_err(|e| parse_error(e.line(), e.column(), e.to_string()))?;
        let key = |k: &str| {
            text.find(&format!("\"{k}\""))
                .map_or((1, 1), |p| position(text, p))
        };
        if desc.schema != SCHEMA {
            let (l, c) = key("schema");
            return Err(parse_error(
                l,
                c,
                format!("unsupported schema {:?}, expected {SCHEMA:?}", desc.schema),
            ));
        }
        if desc.truncation == 0 {
            let (l, c) = key("truncation");
            return Err(parse_error(l, c, "truncation must be positive"));
        }
        if desc.a_matrix.len() != desc.rank || desc.a_matrix.iter().any(|r| r.len() != desc.rank) {
            let (l, c) = key("a_matrix");
            return Err(parse_error(
                l,
                c,
                format!("a_matrix must be {0} x {0}", desc.rank),
            ));
        }
        desc.entries()
            .map_err(|(i, j, err)| locate_entry_error(text, &desc.a_matrix[i][j], err))?;
        Ok(desc)
    }

    fn entries(&self) -> Result<Vec<Vec<Series>>, (usize, usize, AbError)> {
        self.a_matrix
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, t)| Series::parse(t, self.truncation).map_err(|e| (i, j, e)))
                    .collect()
            })
            .collect()
    }

    pub fn to_module(&self) -> Result<AbModule, AbError> {
        let rows = self.entries().map_err(|(_, _, e)| e)?;
        let a = if self.rank == 0 {
            SeriesMatrix::zero(0, 0, self.truncation)
        } else {
            SeriesMatrix::from_rows(rows)
        };
        if self.exact {
            AbModule::new(a)
        } else {
            AbModule::truncated(a)
        }
    }

    /// Canonical text: pretty JSON with a trailing newline.
    pub fn print(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("description serializes");
        s.push('\n');
        s
    }

    /// Hex SHA-256 of the canonical text.
    pub fn digest(&self) -> String {
        hex_sha256(self.print().as_bytes())
    }
}

pub fn hex_sha256(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Map an error inside a series string to the position of that string in
/// the file.
fn locate_entry_error(text: &str, entry: &str, err: AbError) -> AbError {
    let AbError::Parse {
        column, message, ..
    } = err
    else {
        return err;
    };
    let start = text.find("\"a_matrix\"").unwrap_or(0);
    let quoted = serde_json::to_string(entry).expect("string serializes");
    match text[start..].find(&quoted) {
        // Inner columns are exact when the entry needs no escaping.
        Some(off) => {
            let (line, col) = position(text, start + off + 1);
            parse_error(line, col + column - 1, message)
        }
        None => {
            let (line, col) = position(text, start);
            parse_error(line, col, message)
        }
    }
}
