//! Result tables and deterministic CSV emission.

use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::Path;

use crate::constants::CONSTANTS_SET;
use crate::error::{CasimirError, Result};

/// A named, typed column set with rows of pre-formatted records and a
/// metadata preamble. Numbers are rendered once, with a fixed format, at
/// insertion time, so emission is trivially byte-stable.
#[derive(Debug, Clone)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub metadata: Vec<(String, String)>,
    /// True if any row carries a convergence failure flag.
    pub any_failed: bool,
}

/// Fixed rendering for every numeric cell (17 significant digits round-trips
/// f64 exactly).
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

impl ResultTable {
    pub fn new(columns: Vec<&str>) -> Self {
        ResultTable {
            columns: columns.into_iter().map(String::from).collect(),
            rows: Vec::new(),
            metadata: Vec::new(),
            any_failed: false,
        }
    }

    pub fn push_row(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.columns.len(), "row/column mismatch");
        self.rows.push(cells);
    }

    /// Standard metadata block: config hash, tool version, constants set,
    /// then the resolved config echo.
    pub fn standard_metadata(&mut self, source_texts: &[String], echo: Vec<(String, String)>) {
        let mut hasher = Sha256::new();
        for t in source_texts {
            hasher.update(t.as_bytes());
            hasher.update([0u8]);
        }
        let hash = hasher.finalize();
        let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
        self.metadata.push(("config_sha256".into(), hex));
        self.metadata
            .push(("tool_version".into(), env!("CARGO_PKG_VERSION").into()));
        self.metadata.push(("constants".into(), CONSTANTS_SET.into()));
        for (k, v) in echo {
            self.metadata.push((format!("config.{k}"), v));
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Writes the table as CSV: `#`-prefixed metadata preamble, unit-suffixed
/// header, then rows. Byte-identical across runs with identical config and
/// tool version.
pub fn emit_table(table: &ResultTable, path: &Path) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|source| CasimirError::Io {
        path: path.display().to_string(),
        source,
    })?;
    f.write_all(table.to_csv().as_bytes())
        .map_err(|source| CasimirError::Io {
            path: path.display().to_string(),
            source,
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_table_has_header_and_metadata_only() {
        let mut t = ResultTable::new(vec!["a_nm", "value_J"]);
        t.metadata.push(("k".into(), "v".into()));
        let csv = t.to_csv();
        assert_eq!(csv, "# k = v\na_nm,value_J\n");
    }

    #[test]
    fn csv_is_deterministic() {
        let build = || {
            let mut t = ResultTable::new(vec!["x_m"]);
            t.standard_metadata(&["cfg".into()], vec![("tol".into(), "1e-8".into())]);
            t.push_row(vec![fmt_num(0.1 + 0.2)]);
            t.to_csv()
        };
        assert_eq!(build(), build());
    }

    #[test]
    fn fmt_round_trips() {
        for v in [0.0, -4.333752574825845e-10, 1.0 / 3.0, f64::MIN_POSITIVE] {
            assert_eq!(fmt_num(v).parse::<f64>().unwrap(), v);
        }
    }
}
