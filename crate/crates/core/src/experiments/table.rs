//! Result tables and their CSV / JSON encodings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::FitResult;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub label: String,
    /// Empty for dimensionless quantities.
    pub unit: String,
}

impl Column {
    pub fn new(label: &str, unit: &str) -> Self {
        Self {
            label: label.to_string(),
            unit: unit.to_string(),
        }
    }

    pub fn header(&self) -> String {
        if self.unit.is_empty() {
            self.label.clone()
        } else {
            format!("{} ({})", self.label, self.unit)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedFit {
    /// Column the fit was made to.
    pub column: String,
    pub fit: FitResult,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentTable {
    pub name: String,
    pub columns: Vec<Column>,
    /// Optional text label per row, written as a leading `label` column.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub row_labels: Vec<String>,
    #[serde(serialize_with = "ser_rows", deserialize_with = "de_rows")]
    pub rows: Vec<Vec<f64>>,
    pub metadata: BTreeMap<String, String>,
    #[serde(default)]
    pub fits: Vec<NamedFit>,
}

impl ExperimentTable {
    pub fn new(name: &str, columns: Vec<Column>) -> Self {
        Self {
            name: name.to_string(),
            columns,
            row_labels: Vec::new(),
            rows: Vec::new(),
            metadata: BTreeMap::new(),
            fits: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::InvalidSpec(format!(
                "row of {} values for {} columns in table '{}'",
                row.len(),
                self.columns.len(),
                self.name
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn push_labeled_row(&mut self, label: String, row: Vec<f64>) -> Result<()> {
        self.push_row(row)?;
        self.row_labels.push(label);
        Ok(())
    }

    pub fn column_index(&self, label: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.label == label)
    }

    /// All values of the named column.
    pub fn column(&self, label: &str) -> Option<Vec<f64>> {
        let i = self.column_index(label)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn fit(&self, column: &str) -> Option<&FitResult> {
        self.fits.iter().find(|f| f.column == column).map(|f| &f.fit)
    }

    pub fn set_meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.insert(key.to_string(), value.to_string());
    }

    /// CSV with a header row; numbers in 17-significant-digit scientific
    /// notation, NaN as an empty cell, infinities as `inf` / `-inf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let mut header: Vec<String> = Vec::new();
        if !self.row_labels.is_empty() {
            header.push("label".to_string());
        }
        header.extend(self.columns.iter().map(|c| csv_field(&c.header())));
        out.push_str(&header.join(","));
        out.push('\n');
        for (i, row) in self.rows.iter().enumerate() {
            let mut cells: Vec<String> = Vec::with_capacity(row.len() + 1);
            if let Some(label) = self.row_labels.get(i) {
                cells.push(csv_field(label));
            }
            cells.extend(row.iter().map(|&v| format_cell(v)));
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Csv => Ok(self.to_csv()),
            OutputFormat::Json => self.to_json(),
        }
    }

    pub fn write(&self, path: &Path, format: OutputFormat) -> Result<()> {
        let text = self.render(format)?;
        let mut f = std::fs::File::create(path)?;
        f.write_all(text.as_bytes())?;
        Ok(())
    }
}

pub fn format_cell(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        let mut s = String::new();
        let _ = write!(s, "{v:.16e}");
        s
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

// JSON has no NaN or infinity; non-finite cells become null
fn ser_rows<S: serde::Serializer>(rows: &[Vec<f64>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let conv: Vec<Vec<Option<f64>>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| v.is_finite().then_some(v)).collect())
        .collect();
    conv.serialize(s)
}

fn de_rows<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<f64>>, D::Error> {
    let raw: Vec<Vec<Option<f64>>> = Deserialize::deserialize(d)?;
    Ok(raw
        .into_iter()
        .map(|r| r.into_iter().map(|v| v.unwrap_or(f64::NAN)).collect())
        .collect())
}
