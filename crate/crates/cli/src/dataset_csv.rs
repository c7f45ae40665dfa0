//! Dataset CSV: a header of feature names followed by `out`, one sample per
//! line. Boolean datasets write features as `0`/`1` and labels as
//! `TRUE`/`FALSE`; signed datasets write `1`/`-1` in both places.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use antilearn_core::{BinaryDataset, Encoding};

use crate::error::{Error, Result};

pub const LABEL_COLUMN: &str = "out";

fn cell(value: f64) -> &'static str {
    if value == 1.0 {
        "1"
    } else if value == 0.0 {
        "0"
    } else {
        "-1"
    }
}

fn label_cell(encoding: Encoding, label: u8) -> &'static str {
    match (encoding, label) {
        (Encoding::Boolean, 1) => "TRUE",
        (Encoding::Boolean, _) => "FALSE",
        (Encoding::Signed, 1) => "1",
        (Encoding::Signed, _) => "-1",
    }
}

/// Renders one data row without a trailing newline.
pub fn format_row(ds: &BinaryDataset, i: usize) -> String {
    let mut out: Vec<&str> = ds.row(i).iter().map(|&v| cell(v)).collect();
    out.push(label_cell(ds.encoding(), ds.label(i)));
    out.join(",")
}

pub fn write_dataset<W: Write>(ds: &BinaryDataset, mut w: W) -> io::Result<()> {
    let mut header: Vec<&str> = ds.feature_names().iter().map(String::as_str).collect();
    header.push(LABEL_COLUMN);
    writeln!(w, "{}", header.join(","))?;
    for i in 0..ds.len() {
        writeln!(w, "{}", format_row(ds, i))?;
    }
    w.flush()
}

pub fn write_dataset_csv(ds: &BinaryDataset, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_dataset(ds, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

/// Reads a dataset file; the dataset is named after the file stem.
pub fn read_dataset_csv(path: &Path) -> Result<BinaryDataset> {
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    parse_dataset(&name, text.as_bytes())
        .map_err(|(line, message)| Error::parse(path, line, message))
}

/// Parses dataset CSV text. Errors carry the 1-based line number.
pub fn parse_dataset(
    name: &str,
    input: &[u8],
) -> std::result::Result<BinaryDataset, (u64, String)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut records = reader.records();
    let header = match records.next() {
        Some(Ok(h)) => h,
        Some(Err(e)) => return Err((1, e.to_string())),
        None => return Err((1, "empty file".into())),
    };
    let names: Vec<String> = header.iter().map(|s| s.trim().to_string()).collect();
    match names.last() {
        Some(last) if last == LABEL_COLUMN && names.len() >= 2 => {}
        _ => {
            return Err((
                1,
                format!("header must list feature names followed by `{LABEL_COLUMN}`"),
            ))
        }
    }
    let width = names.len() - 1;

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut encoding: Option<Encoding> = None;
    for record in records {
        let record = record.map_err(|e| (e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != width + 1 {
            return Err((
                line,
                format!("expected {} fields, found {}", width + 1, record.len()),
            ));
        }
        let (label, enc) = match record[width].trim() {
            "TRUE" => (1, Encoding::Boolean),
            "FALSE" => (0, Encoding::Boolean),
            "1" | "+1" => (1, Encoding::Signed),
            "-1" => (0, Encoding::Signed),
            other => return Err((line, format!("label `{other}` is not TRUE/FALSE or +1/-1"))),
        };
        match encoding {
            None => encoding = Some(enc),
            Some(e) if e != enc => return Err((line, "label encoding changes mid-file".into())),
            _ => {}
        }
        let mut row = Vec::with_capacity(width);
        for (j, field) in record.iter().take(width).enumerate() {
            let v = match field.trim() {
                "0" => 0.0,
                "1" | "+1" => 1.0,
                "-1" => -1.0,
                other => {
                    return Err((
                        line,
                        format!("column `{}`: `{other}` is not a binary value", names[j]),
                    ))
                }
            };
            if !enc.admits(v) {
                return Err((
                    line,
                    format!("column `{}`: {v} does not fit the label encoding", names[j]),
                ));
            }
            row.push(v);
        }
        rows.push(row);
        labels.push(label);
    }
    let feature_names = names[..width].to_vec();
    BinaryDataset::new(
        name,
        feature_names,
        encoding.unwrap_or(Encoding::Boolean),
        rows,
        labels,
    )
    .map_err(|e| (1, e.to_string()))
}
