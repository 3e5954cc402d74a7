use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::scan::ScanRecord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableFormat {
    Csv,
    Json,
}

impl FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "json" => Ok(TableFormat::Json),
            other => Err(Error::UnknownLabel {
                kind: "format",
                label: other.to_owned(),
            }),
        }
    }
}

/// Shortest decimal form of `v` rounded to 12 significant digits.
pub fn format_sig12(v: f64) -> String {
    let rounded: f64 = format!("{v:.11e}").parse().expect("round trip");
    format!("{rounded}")
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Writes a plain numeric table.
pub fn write_csv_rows<W: Write>(out: W, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        if row.len() != header.len() {
            return Err(Error::Dimension(format!(
                "row has {} values for {} columns",
                row.len(),
                header.len()
            )));
        }
        w.write_record(row.iter().map(|&v| format_sig12(v))).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// CSV with header `param,<ids…>` or a JSON array of records.
pub fn emit_table<W: Write>(records: &[ScanRecord], format: TableFormat, mut out: W) -> Result<()> {
    match format {
        TableFormat::Json => {
            serde_json::to_writer_pretty(&mut out, records).map_err(|e| Error::Io(e.to_string()))?;
            writeln!(out)?;
            Ok(())
        }
        TableFormat::Csv => {
            let ids: Vec<&str> = records
                .first()
                .map(|r| r.quantities.keys().map(String::as_str).collect())
                .unwrap_or_default();
            let mut header = vec!["param"];
            header.extend(&ids);
            for r in records {
                if r.quantities.len() != ids.len() || !r.quantities.keys().zip(&ids).all(|(a, b)| a == b) {
                    return Err(Error::InvalidInput(
                        "records do not share the same quantity columns".into(),
                    ));
                }
            }
            let rows = records.iter().map(|r| {
                let mut row = vec![r.param];
                row.extend(r.quantities.values());
                row
            });
            write_csv_rows(out, &header, rows)
        }
    }
}
