//! Report tables and their CSV / JSON encodings.

use std::io::Write;

use serde_json::{Map, Value};

use super::ReportError;

/// Significant digits of every emitted real.
pub const SIGNIFICANT_DIGITS: usize = 9;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(u64),
    Text(String),
    /// Not available, e.g. a standard error from a single repetition.
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Real)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v)
        .parse()
        .expect("formatted float parses")
}

/// Plain decimal rendering with nine significant digits and no exponent.
pub fn format_real(v: f64) -> String {
    let r = round_sig(v);
    if r == 0.0 {
        return "0".to_owned();
    }
    let exponent = r.abs().log10().floor() as i32;
    let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exponent).max(0) as usize;
    format!("{r:.decimals$}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportTable {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub metadata: Map<String, Value>,
}

impl ReportTable {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            metadata: Map::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    /// Real value of `column` in `row`, if present.
    pub fn real(&self, row: usize, column: &str) -> Option<f64> {
        match self.rows.get(row)?.get(self.column_index(column)?)? {
            Cell::Real(v) => Some(*v),
            _ => None,
        }
    }

    pub fn check_finite(&self) -> Result<(), ReportError> {
        for (r, row) in self.rows.iter().enumerate() {
            for (c, cell) in row.iter().enumerate() {
                if let Cell::Real(v) = cell {
                    if !v.is_finite() {
                        return Err(ReportError::Usage(format!(
                            "non-finite value in row {r}, column {}",
                            self.columns[c]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), ReportError> {
        self.check_finite()?;
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(&self.columns)?;
        for row in &self.rows {
            writer.write_record(row.iter().map(|cell| match cell {
                Cell::Real(v) => format_real(*v),
                Cell::Int(v) => v.to_string(),
                Cell::Text(s) => s.clone(),
                Cell::Missing => "NA".to_owned(),
            }))?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<Value, ReportError> {
        self.check_finite()?;
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let object: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(name, cell)| ((*name).to_owned(), cell_json(cell)))
                    .collect();
                Value::Object(object)
            })
            .collect();
        let mut root = Map::new();
        root.insert("metadata".into(), Value::Object(self.metadata.clone()));
        root.insert("rows".into(), Value::Array(rows));
        Ok(Value::Object(root))
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<(), ReportError> {
        let value = self.to_json()?;
        serde_json::to_writer_pretty(&mut out, &value)?;
        writeln!(out)?;
        Ok(())
    }
}

fn cell_json(cell: &Cell) -> Value {
    match cell {
        Cell::Real(v) => Value::from(round_sig(*v)),
        Cell::Int(v) => Value::from(*v),
        Cell::Text(s) => Value::from(s.as_str()),
        Cell::Missing => Value::Null,
    }
}

/// Metadata real, rounded like table cells.
pub(crate) fn meta_real(v: f64) -> Value {
    Value::from(round_sig(v))
}
