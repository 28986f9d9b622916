//! Result tables and deterministic serialization.
//!
//! CSV uses 17 significant digits so every f64 survives a round trip
//! bit-exactly; line endings are LF and the decimal separator is ".".

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

impl Column {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Self {
        Column {
            name: name.into(),
            values,
        }
    }
}

/// Named numeric series of equal length plus a metadata echo of the run.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub name: String,
    pub columns: Vec<Column>,
    pub metadata: serde_json::Value,
    /// (x column, y column) pairs emitted as plot-data files.
    pub figures: Vec<(String, String)>,
}

impl ResultTable {
    pub fn new(
        name: impl Into<String>,
        columns: Vec<Column>,
        metadata: serde_json::Value,
    ) -> Result<Self> {
        if let Some(first) = columns.first() {
            for c in &columns {
                if c.values.len() != first.values.len() {
                    return Err(Error::invalid(format!(
                        "column `{}` has length {} but `{}` has {}",
                        c.name,
                        c.values.len(),
                        first.name,
                        first.values.len()
                    )));
                }
            }
        }
        Ok(ResultTable {
            name: name.into(),
            columns,
            metadata,
            figures: Vec::new(),
        })
    }

    pub fn with_figures(mut self, figures: &[(&str, &str)]) -> Self {
        self.figures = figures
            .iter()
            .map(|(x, y)| (x.to_string(), y.to_string()))
            .collect();
        self
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name == name)
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.values.len())
    }
}

fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

/// Renders a table as CSV: header row, one row per sample, LF endings.
pub fn csv_string(table: &ResultTable) -> String {
    let mut out = String::new();
    let header: Vec<&str> = table.columns.iter().map(|c| c.name.as_str()).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in 0..table.rows() {
        let line: Vec<String> = table
            .columns
            .iter()
            .map(|c| format_value(c.values[row]))
            .collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

fn plot_data_string(x: &Column, y: &Column) -> String {
    let mut out = String::new();
    for (a, b) in x.values.iter().zip(&y.values) {
        out.push_str(&format_value(*a));
        out.push(' ');
        out.push_str(&format_value(*b));
        out.push('\n');
    }
    out
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|source| Error::Io {
        context: format!("writing {}", path.display()),
        source,
    })
}

/// Writes `<name>.csv`, `<name>.meta.json`, and one `<name>_<y>_vs_<x>.dat`
/// per declared figure into `dir`; returns the created paths.
pub fn write_results(table: &ResultTable, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        context: format!("creating output directory {}", dir.display()),
        source,
    })?;
    let mut written = Vec::new();

    let csv_path = dir.join(format!("{}.csv", table.name));
    write_file(&csv_path, &csv_string(table))?;
    written.push(csv_path);

    let meta_path = dir.join(format!("{}.meta.json", table.name));
    let meta = serde_json::to_string_pretty(&table.metadata)
        .map_err(|e| Error::invalid(format!("metadata not serializable: {e}")))?;
    write_file(&meta_path, &format!("{meta}\n"))?;
    written.push(meta_path);

    for (xname, yname) in &table.figures {
        let (x, y) = match (table.column(xname), table.column(yname)) {
            (Some(x), Some(y)) => (x, y),
            _ => {
                return Err(Error::invalid(format!(
                    "figure ({xname}, {yname}) references a missing column"
                )))
            }
        };
        let path = dir.join(format!("{}_{}_vs_{}.dat", table.name, yname, xname));
        write_file(&path, &plot_data_string(x, y))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_ragged_columns() {
        let cols = vec![
            Column::new("a", vec![1.0, 2.0]),
            Column::new("b", vec![1.0]),
        ];
        assert!(ResultTable::new("t", cols, serde_json::json!({})).is_err());
    }

    #[test]
    fn empty_columns_give_header_only_csv() {
        let cols = vec![Column::new("a", vec![]), Column::new("b", vec![])];
        let t = ResultTable::new("t", cols, serde_json::json!({})).unwrap();
        assert_eq!(csv_string(&t), "a,b\n");
    }

    #[test]
    fn csv_round_trips_f64_exactly() {
        let values = vec![
            1.0 / 3.0,
            -2.5e-301,
            std::f64::consts::PI,
            6.02e23,
            -0.0,
            1e-17,
        ];
        let t = ResultTable::new(
            "t",
            vec![Column::new("x", values.clone())],
            serde_json::json!({}),
        )
        .unwrap();
        let csv = csv_string(&t);
        for (line, want) in csv.lines().skip(1).zip(&values) {
            let got: f64 = line.parse().unwrap();
            assert_eq!(got.to_bits(), want.to_bits(), "line {line}");
        }
    }
}
