use std::path::Path;

use boundcast::TimeSeries;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("file not found: {0}")]
    FileNotFound(String),
    #[error("cannot read {path}: {message}")]
    Unreadable { path: String, message: String },
    #[error("line {line}: {message}")]
    ParseError { line: u64, message: String },
    #[error("column '{0}' not found")]
    MissingColumn(String),
    #[error("no observations in file")]
    EmptySeries,
}

/// Reads one column of a delimited file as a time series, in file order.
///
/// `column` is a header name or a 0-based index; `None` picks the last column.
/// The first row is a header when its selected cell is not numeric (or when
/// the column is selected by name).
pub fn ingest_csv(path: &Path, column: Option<&str>) -> Result<TimeSeries, IngestError> {
    if !path.exists() {
        return Err(IngestError::FileNotFound(path.display().to_string()));
    }
    let text = std::fs::read_to_string(path).map_err(|e| IngestError::Unreadable {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    // The reader silently skips blank lines; inside a series they are missing values.
    let lines: Vec<&str> = text.lines().collect();
    let last_content = lines.iter().rposition(|l| !l.trim().is_empty());
    if let Some(i) = lines[..last_content.unwrap_or(0)]
        .iter()
        .position(|l| l.trim().is_empty())
    {
        return Err(IngestError::ParseError {
            line: i as u64 + 1,
            message: "empty line".into(),
        });
    }
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let by_index = column.and_then(|c| c.trim().parse::<usize>().ok());
    let mut index: Option<usize> = by_index;
    let mut values = Vec::new();
    let mut first = true;

    for rec in rdr.records() {
        let rec = rec.map_err(|e| IngestError::ParseError {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line());

        if first {
            first = false;
            let header = match (column, by_index) {
                (Some(name), None) => {
                    let pos = rec
                        .iter()
                        .position(|h| h == name.trim())
                        .ok_or_else(|| IngestError::MissingColumn(name.to_string()))?;
                    index = Some(pos);
                    true
                }
                _ => {
                    let i = index.unwrap_or(rec.len().saturating_sub(1));
                    index = Some(i);
                    rec.get(i).is_some_and(|c| c.parse::<f64>().is_err())
                }
            };
            if header {
                continue;
            }
        }

        let i = index.unwrap_or(0);
        let cell = rec.get(i).ok_or_else(|| IngestError::ParseError {
            line,
            message: format!("missing column {i}"),
        })?;
        if cell.is_empty() {
            return Err(IngestError::ParseError {
                line,
                message: "empty cell".into(),
            });
        }
        let v: f64 = cell.parse().map_err(|_| IngestError::ParseError {
            line,
            message: format!("'{cell}' is not a number"),
        })?;
        if !v.is_finite() {
            return Err(IngestError::ParseError {
                line,
                message: format!("non-finite value '{cell}'"),
            });
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(IngestError::EmptySeries);
    }
    TimeSeries::new(values).map_err(|e| IngestError::ParseError {
        line: 0,
        message: e.to_string(),
    })
}
