//! Rectangular numeric tables and their two serializations: plain CSV and
//! an annotated report.

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    /// A column that has no value in this row (for example the partition
    /// function at zero temperature).
    Empty,
}

#[derive(Debug)]
pub struct ResultTable {
    name: &'static str,
    columns: Vec<&'static str>,
    /// One line per column (or general note) explaining how the numbers
    /// were produced; emitted only by the report format.
    notes: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

/// Shortest text that parses back to exactly the same f64. Negative zero
/// is folded into zero so that arithmetic noise in a sign never shows up
/// in a diff.
fn float_text(v: f64) -> String {
    format!("{:?}", v + 0.0)
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => float_text(*v),
            Cell::Empty => String::new(),
        }
    }
}

impl ResultTable {
    pub fn new(name: &'static str, columns: Vec<&'static str>, notes: Vec<String>) -> Self {
        ResultTable {
            name,
            columns,
            notes,
            rows: Vec::new(),
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn push_row(&mut self, row: Vec<Cell>) -> Result<(), CliError> {
        if row.len() != self.columns.len() {
            return Err(CliError::Consistency(format!(
                "table {}: row with {} cells in a {}-column table",
                self.name,
                row.len(),
                self.columns.len()
            )));
        }
        for (cell, column) in row.iter().zip(&self.columns) {
            if let Cell::Float(v) = cell {
                if !v.is_finite() {
                    return Err(CliError::Numerical(format!(
                        "table {}: non-finite value in column {column}",
                        self.name
                    )));
                }
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::text).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_report(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# table: {}\n", self.name));
        for note in &self.notes {
            out.push_str(&format!("# {note}\n"));
        }

        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        let rendered: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|row| row.iter().map(Cell::text).collect())
            .collect();
        for row in &rendered {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }

        let mut line = String::new();
        for (k, column) in self.columns.iter().enumerate() {
            if k > 0 {
                line.push_str("  ");
            }
            line.push_str(&format!("{column:>width$}", width = widths[k]));
        }
        out.push_str(line.trim_end());
        out.push('\n');
        for row in &rendered {
            let mut line = String::new();
            for (k, cell) in row.iter().enumerate() {
                if k > 0 {
                    line.push_str("  ");
                }
                line.push_str(&format!("{cell:>width$}", width = widths[k]));
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}
