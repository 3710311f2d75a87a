use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Tsv,
    Pretty,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn write_to(&self, format: Format, w: &mut dyn Write) -> Result<()> {
        match format {
            Format::Csv | Format::Tsv => {
                let delimiter = if format == Format::Csv { b',' } else { b'\t' };
                let mut out = csv::WriterBuilder::new().delimiter(delimiter).from_writer(w);
                out.write_record(&self.headers)?;
                for row in &self.rows {
                    out.write_record(row)?;
                }
                out.flush().map_err(|e| CliError::io("writing table", e))?;
            }
            Format::Pretty => {
                let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
                for row in &self.rows {
                    for (w, cell) in widths.iter_mut().zip(row) {
                        *w = (*w).max(cell.chars().count());
                    }
                }
                let line = |cells: &[String]| {
                    cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c:>w$}"))
                        .collect::<Vec<_>>()
                        .join("  ")
                };
                let io = |e| CliError::io("writing table", e);
                writeln!(w, "{}", line(&self.headers)).map_err(io)?;
                for row in &self.rows {
                    writeln!(w, "{}", line(row)).map_err(io)?;
                }
            }
        }
        Ok(())
    }

    /// Writes to `path`, or stdout when absent.
    pub fn emit(&self, format: Format, path: Option<&Path>) -> Result<()> {
        match path {
            Some(p) => {
                let file = File::create(p).map_err(|e| CliError::io(format!("creating {}", p.display()), e))?;
                let mut w = BufWriter::new(file);
                self.write_to(format, &mut w)?;
                w.flush()
                    .map_err(|e| CliError::io(format!("writing {}", p.display()), e))
            }
            None => {
                let stdout = io::stdout();
                let mut lock = stdout.lock();
                self.write_to(format, &mut lock)
            }
        }
    }
}

/// Shortest round-trip representation; NaN for undefined values.
pub fn num(v: f64) -> String {
    format!("{v}")
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}
