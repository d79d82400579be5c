//! Plain-text columnar data files.
//!
//! Layout:
//!
//! ```text
//! # <title>
//! # key = value
//! # columns: x F
//! 0.0000000000000000e0  3.1415926535897931e0
//! ```
//!
//! Numbers are written with 17 significant digits so every value round-trips
//! exactly through [`DataTable::parse`].

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Result, SkyrmeError};

#[derive(Debug, Clone, PartialEq)]
pub struct DataTable {
    pub title: String,
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

impl DataTable {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        DataTable {
            title: title.into(),
            meta: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push_meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn push_numeric_row(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|&v| fmt_f64(v)).collect());
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn require_meta(&self, key: &str) -> Result<&str> {
        self.meta(key).ok_or_else(|| {
            SkyrmeError::Validation(format!("{}: missing header `{key}`", self.title))
        })
    }

    pub fn meta_f64(&self, key: &str) -> Result<f64> {
        let raw = self.require_meta(key)?;
        raw.parse().map_err(|_| {
            SkyrmeError::Validation(format!(
                "{}: header `{key}` is not a number: {raw}",
                self.title
            ))
        })
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| SkyrmeError::Validation(format!("{}: no column `{name}`", self.title)))
    }

    pub fn column_f64(&self, name: &str) -> Result<Vec<f64>> {
        let idx = self.column_index(name)?;
        self.rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row[idx].parse::<f64>().map_err(|_| SkyrmeError::Parse {
                    line: i + 1,
                    message: format!("column `{name}`: not a number: {}", row[idx]),
                })
            })
            .collect()
    }

    pub fn column_str(&self, name: &str) -> Result<Vec<&str>> {
        let idx = self.column_index(name)?;
        Ok(self.rows.iter().map(|r| r[idx].as_str()).collect())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.title);
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k} = {v}");
        }
        let _ = writeln!(out, "# columns: {}", self.columns.join(" "));
        for row in &self.rows {
            out.push_str(&row.join("  "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<DataTable> {
        let mut title = None;
        let mut meta = Vec::new();
        let mut columns: Option<Vec<String>> = None;
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(comment) = trimmed.strip_prefix('#') {
                let comment = comment.trim();
                if title.is_none() {
                    title = Some(comment.to_string());
                } else if let Some(cols) = comment.strip_prefix("columns:") {
                    columns = Some(cols.split_whitespace().map(str::to_string).collect());
                } else if let Some((k, v)) = comment.split_once('=') {
                    meta.push((k.trim().to_string(), v.trim().to_string()));
                } else {
                    return Err(SkyrmeError::Parse {
                        line: line_no,
                        message: format!("unrecognised header line `{trimmed}`"),
                    });
                }
                continue;
            }
            let cols = columns.as_ref().ok_or_else(|| SkyrmeError::Parse {
                line: line_no,
                message: "data before `# columns:` header".into(),
            })?;
            let fields: Vec<String> = trimmed.split_whitespace().map(str::to_string).collect();
            if fields.len() != cols.len() {
                return Err(SkyrmeError::Parse {
                    line: line_no,
                    message: format!("expected {} fields, found {}", cols.len(), fields.len()),
                });
            }
            rows.push(fields);
        }
        Ok(DataTable {
            title: title.ok_or_else(|| SkyrmeError::Parse {
                line: 1,
                message: "empty file".into(),
            })?,
            meta,
            columns: columns.ok_or_else(|| SkyrmeError::Parse {
                line: 1,
                message: "missing `# columns:` header".into(),
            })?,
            rows,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.render())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<DataTable> {
        DataTable::parse(&fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = DataTable::parse("# t\n# columns: a b\n1 2\n3\n").unwrap_err();
        match err {
            SkyrmeError::Parse { line, .. } => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(DataTable::parse("").is_err());
        assert!(DataTable::parse("# t\n1 2\n").is_err());
    }

    proptest! {
        #[test]
        fn numeric_tables_round_trip(values in prop::collection::vec(any::<f64>().prop_filter("finite", |v| v.is_finite()), 1..40)) {
            let mut t = DataTable::new("probe", &["i", "v"]).with_meta("n", values.len());
            for (i, v) in values.iter().enumerate() {
                t.push_numeric_row(&[i as f64, *v]);
            }
            let back = DataTable::parse(&t.render()).unwrap();
            prop_assert_eq!(&back, &t);
            let parsed = back.column_f64("v").unwrap();
            for (a, b) in parsed.iter().zip(&values) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }
}
