//! On-disk formats: JSON matrix files, time-series CSV with a JSON sidecar,
//! and sweep-table CSV.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::linalg::{FieldKind, HermitianMatrix, C64};
use crate::spectral::{SweepRow, SweepTable, TimeSeriesEpochs};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("invalid CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Data(#[from] Error),
}

pub type FormatResult<T> = std::result::Result<T, FormatError>;

/// JSON matrix file: `{"p": 2, "kind": "real", "data": [[re, im], ...]}` with
/// `data` row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub p: usize,
    pub kind: FieldKind,
    pub data: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_matrix(h: &HermitianMatrix) -> Self {
        Self { p: h.dim(), kind: h.kind(), data: h.entries().iter().map(|z| [z.re, z.im]).collect() }
    }

    pub fn to_matrix(&self) -> Result<HermitianMatrix, Error> {
        let data = self.data.iter().map(|&[re, im]| C64::new(re, im)).collect();
        HermitianMatrix::new(self.p, data, self.kind)
    }

    pub fn read<R: Read>(reader: R) -> FormatResult<Self> {
        Ok(serde_json::from_reader(reader)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

/// Parses a matrix file straight into a validated matrix.
pub fn read_matrix<R: Read>(reader: R) -> FormatResult<HermitianMatrix> {
    Ok(MatrixFile::read(reader)?.to_matrix()?)
}

/// Sidecar written next to a simulated time-series CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeriesMetadata {
    pub epochs: usize,
    pub samples_per_epoch: usize,
    pub channels: usize,
    pub fs: f64,
    pub seed: Option<u64>,
    pub burn_in: Option<usize>,
    pub source: String,
}

/// Writes one row per sample (epochs concatenated) under a `ch0,ch1,...`
/// header.
pub fn write_time_series<W: Write>(ts: &TimeSeriesEpochs, writer: W) -> FormatResult<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record((0..ts.p).map(|c| format!("ch{c}")))?;
    for row in ts.rows() {
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads samples as rows of channel values. A first row that does not parse
/// as numbers is taken as a header.
pub fn read_time_series_rows<R: Read>(reader: R) -> FormatResult<Vec<Vec<f64>>> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(reader);
    let mut rows = Vec::new();
    for (n, record) in r.records().enumerate() {
        let record = record?;
        let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(values) => {
                if let Some(first) = rows.first().map(Vec::len) {
                    if values.len() != first {
                        return Err(FormatError::Parse {
                            line: n + 1,
                            message: format!("expected {first} columns, found {}", values.len()),
                        });
                    }
                }
                rows.push(values);
            }
            Err(e) if n > 0 => {
                return Err(FormatError::Parse { line: n + 1, message: e.to_string() });
            }
            Err(_) => {}
        }
    }
    if rows.is_empty() {
        return Err(FormatError::Parse { line: 1, message: "no data rows".into() });
    }
    Ok(rows)
}

const WARNING_PREFIX: &str = "# warning: ";

/// `freq_hz,<columns>` then one row per bin; bin warnings follow as
/// `# warning: ...` comment lines.
pub fn write_sweep_csv<W: Write>(table: &SweepTable, mut writer: W) -> FormatResult<()> {
    {
        let mut w = csv::Writer::from_writer(&mut writer);
        let header = std::iter::once("freq_hz".to_string()).chain(table.columns.iter().cloned());
        w.write_record(header)?;
        for row in &table.rows {
            let fields = std::iter::once(row.freq_hz).chain(row.values.iter().copied()).map(|v| v.to_string());
            w.write_record(fields)?;
        }
        w.flush()?;
    }
    for warning in &table.warnings {
        writeln!(writer, "{WARNING_PREFIX}{}", warning.replace('\n', " "))?;
    }
    Ok(())
}

pub fn sweep_csv_string(table: &SweepTable) -> String {
    let mut buf = Vec::new();
    write_sweep_csv(table, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("CSV output is UTF-8")
}

pub fn parse_sweep_csv(text: &str) -> FormatResult<SweepTable> {
    let warnings = text.lines().filter_map(|l| l.strip_prefix(WARNING_PREFIX)).map(str::to_string).collect();
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header = r.headers()?.clone();
    if header.get(0) != Some("freq_hz") {
        return Err(FormatError::Parse { line: 1, message: "first column must be freq_hz".into() });
    }
    let columns: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut rows = Vec::new();
    for (n, record) in r.records().enumerate() {
        let record = record?;
        let values: Vec<f64> = record
            .iter()
            .map(str::parse::<f64>)
            .collect::<Result<_, _>>()
            .map_err(|e| FormatError::Parse { line: n + 2, message: e.to_string() })?;
        rows.push(SweepRow { freq_hz: values[0], values: values[1..].to_vec() });
    }
    Ok(SweepTable { columns, rows, warnings })
}
