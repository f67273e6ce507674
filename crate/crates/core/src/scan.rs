//! Scan-result container and its CSV serialization.
//!
//! CSV format: a leading `#`-prefixed comment block recording the run
//! parameters, one header row naming the columns, then one row per grid
//! point. Numbers are printed in scientific notation with 17 significant
//! digits so that parsing an emitted file recovers every value bit-exactly;
//! missing values (none-markers) are empty fields. Output is deterministic:
//! identical inputs yield byte-identical files regardless of thread count.

use crate::analytic::Method;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Rectangular scan output: named axes (the grid) and named value columns,
/// each of length equal to the product of the axis lengths, iterated with the
/// last axis fastest.
#[derive(Debug, Clone)]
pub struct ScanResult<T> {
    pub axes: Vec<(String, Vec<T>)>,
    pub columns: Vec<(String, Vec<Option<T>>)>,
    /// Parameter snapshot written into the CSV comment block.
    pub meta: Vec<(String, String)>,
    pub method: Method,
    /// Wall-clock stamp for provenance; deliberately excluded from the CSV
    /// so that output stays reproducible.
    pub timestamp: Option<String>,
}

impl<T: Scalar> ScanResult<T> {
    pub fn points(&self) -> usize {
        self.axes.iter().map(|(_, g)| g.len()).product()
    }

    /// Check the length invariant of every value column.
    pub fn validate(&self) -> Result<()> {
        let n = self.points();
        for (name, col) in &self.columns {
            if col.len() != n {
                return Err(Error::DimensionMismatch(col.len(), n));
            }
            let _ = name;
        }
        Ok(())
    }

    /// Axis values of the flattened point `idx` (last axis fastest).
    fn axis_values(&self, idx: usize) -> Vec<T> {
        let mut out = Vec::with_capacity(self.axes.len());
        let mut rem = idx;
        let mut strides: Vec<usize> = vec![1; self.axes.len()];
        for k in (0..self.axes.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.axes[k + 1].1.len();
        }
        for (k, (_, grid)) in self.axes.iter().enumerate() {
            let i = rem / strides[k];
            rem %= strides[k];
            out.push(grid[i]);
        }
        out
    }

    /// Serialize to CSV. With `display_columns` set, every value column is
    /// followed by a 6-significant-digit companion for human consumption.
    pub fn to_csv(&self, display_columns: bool) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        out.push_str(&format!(
            "# method = {}\n",
            match self.method {
                Method::Analytic => "analytic",
                Method::Numeric => "numeric",
            }
        ));
        // header
        let mut header: Vec<String> = self.axes.iter().map(|(n, _)| n.clone()).collect();
        for (name, _) in &self.columns {
            header.push(name.clone());
            if display_columns {
                header.push(format!("{name}_display"));
            }
        }
        out.push_str(&header.join(","));
        out.push('\n');
        // rows
        for idx in 0..self.points() {
            let mut fields: Vec<String> = self
                .axis_values(idx)
                .into_iter()
                .map(|v| format_full(v))
                .collect();
            for (_, col) in &self.columns {
                match col[idx] {
                    Some(v) => {
                        fields.push(format_full(v));
                        if display_columns {
                            fields.push(format!("{:.5e}", v.as_f64()));
                        }
                    }
                    None => {
                        fields.push(String::new());
                        if display_columns {
                            fields.push(String::new());
                        }
                    }
                }
            }
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

/// Full-precision scientific formatting (17 significant digits round-trips
/// f64 exactly).
pub fn format_full<T: Scalar>(v: T) -> String {
    format!("{:.16e}", v.as_f64())
}

/// Parse a CSV emitted by [`ScanResult::to_csv`]: returns the header names
/// and the rows (empty fields become `None`).
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<Option<f64>>>)> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidParams("empty CSV".into()))?
        .split(',')
        .map(str::to_owned)
        .collect::<Vec<_>>();
    let mut rows = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|f| {
                if f.is_empty() {
                    Ok(None)
                } else {
                    f.parse::<f64>()
                        .map(Some)
                        .map_err(|e| Error::InvalidParams(format!("bad CSV field {f:?}: {e}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != header.len() {
            return Err(Error::InvalidParams(format!(
                "CSV row has {} fields, header has {}",
                row.len(),
                header.len()
            )));
        }
        rows.push(row);
    }
    Ok((header, rows))
}
