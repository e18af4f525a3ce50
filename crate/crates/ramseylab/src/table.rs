use std::fmt::Write as _;
use std::path::Path;

use crate::error::{LabError, LabResult};

/// Rectangular table of finite numbers plus named summary values.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub summary: Vec<(String, f64)>,
    /// Comment lines written above the header.
    pub provenance: Vec<String>,
}

impl ResultTable {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: Vec::new(),
            provenance: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        self.rows.push(row);
    }

    pub fn note(&mut self, name: &str, value: f64) {
        self.summary.push((name.to_string(), value));
    }

    pub fn summary_value(&self, name: &str) -> Option<f64> {
        self.summary
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Rejects ragged rows and non-finite entries.
    pub fn validate(&self) -> LabResult<()> {
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.columns.len() {
                return Err(LabError::Numerical(format!(
                    "row {i} has {} values for {} columns",
                    row.len(),
                    self.columns.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| !v.is_finite()) {
                return Err(LabError::Numerical(format!(
                    "row {i} holds non-finite value {v}"
                )));
            }
        }
        if let Some((name, v)) = self.summary.iter().find(|(_, v)| !v.is_finite()) {
            return Err(LabError::Numerical(format!(
                "summary {name} is non-finite ({v})"
            )));
        }
        Ok(())
    }
}

/// 17 significant digits, so every value round-trips exactly.
fn fmt_value(v: f64) -> String {
    // fold -0 into 0 so sign-of-zero noise cannot change the bytes
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Renders the table: `#` comment lines, then the header row, then data.
pub fn render_csv(table: &ResultTable) -> String {
    let mut out = String::new();
    for line in &table.provenance {
        let _ = writeln!(out, "# {line}");
    }
    for (name, v) in &table.summary {
        let _ = writeln!(out, "# summary {name} = {}", fmt_value(*v));
    }
    let header: Vec<String> = table.columns.iter().map(|c| quote(c)).collect();
    let _ = writeln!(out, "{}", header.join(","));
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|v| fmt_value(*v)).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

/// Writes the CSV to `path`.
pub fn emit_csv(table: &ResultTable, path: &Path) -> LabResult<()> {
    table.validate()?;
    std::fs::write(path, render_csv(table))
        .map_err(|e| LabError::Io(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_and_precision() {
        let mut t = ResultTable::new(&["x", "p"]);
        t.provenance.push("ramseylab test".into());
        t.note("visibility", 0.5);
        t.push(vec![0.1, -0.0]);
        let csv = render_csv(&t);
        assert_eq!(
            csv,
            "# ramseylab test\n# summary visibility = 5.0000000000000000e-1\nx,p\n1.0000000000000001e-1,0.0000000000000000e0\n"
        );
        let back: f64 = "1.0000000000000001e-1".parse().unwrap();
        assert_eq!(back, 0.1);
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = ResultTable::new(&["a", "b,c"]);
        assert_eq!(render_csv(&t), "a,\"b,c\"\n");
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.csv");
        emit_csv(&t, &p).unwrap();
        assert_eq!(std::fs::read_to_string(p).unwrap(), "a,\"b,c\"\n");
    }

    #[test]
    fn validation() {
        let mut t = ResultTable::new(&["a"]);
        t.push(vec![f64::NAN]);
        assert!(matches!(t.validate(), Err(LabError::Numerical(_))));
        let mut t = ResultTable::new(&["a"]);
        t.push(vec![1.0, 2.0]);
        assert!(t.validate().is_err());
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let t = ResultTable::new(&["a"]);
        let dir = tempfile::tempdir().unwrap();
        let e = emit_csv(&t, &dir.path().join("missing").join("x.csv")).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }
}
