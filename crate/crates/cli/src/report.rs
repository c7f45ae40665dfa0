//! Report CSV and its renderings.
//!
//! The summary form has one line per grid cell:
//!
//! ```text
//! dataset,algorithm,folds,inverted,mean_train_acc,mean_val_acc
//! pyramid-xor,nb,256,false,0.3647,0.0000
//! ```
//!
//! A cell that failed keeps its line with both accuracy fields empty. The
//! long form lists one line per fold instead.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use antilearn_core::harness::GridReport;
use antilearn_core::learners::AlgorithmTag;

use crate::error::{Error, Result};

pub const SUMMARY_HEADER: [&str; 6] = [
    "dataset",
    "algorithm",
    "folds",
    "inverted",
    "mean_train_acc",
    "mean_val_acc",
];

pub const LONG_HEADER: [&str; 7] = [
    "dataset",
    "algorithm",
    "folds",
    "inverted",
    "fold",
    "train_acc",
    "val_acc",
];

/// One summary line. Accuracies are `None` for a failed cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub dataset: String,
    pub algorithm: AlgorithmTag,
    pub folds: usize,
    pub inverted: bool,
    pub mean_train_acc: Option<f64>,
    pub mean_val_acc: Option<f64>,
}

pub fn acc(v: f64) -> String {
    format!("{v:.4}")
}

pub fn rows_from_report(report: &GridReport) -> Vec<ReportRow> {
    report
        .cells
        .iter()
        .map(|c| {
            let ok = c.result.as_ref().ok();
            ReportRow {
                dataset: c.dataset.clone(),
                algorithm: c.algorithm,
                folds: c.folds,
                inverted: report.options.invert,
                mean_train_acc: ok.map(|r| r.mean_train_acc),
                mean_val_acc: ok.map(|r| r.mean_val_acc),
            }
        })
        .collect()
}

pub fn write_rows<W: Write>(rows: &[ReportRow], w: W) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SUMMARY_HEADER)?;
    for r in rows {
        out.write_record([
            r.dataset.clone(),
            r.algorithm.to_string(),
            r.folds.to_string(),
            r.inverted.to_string(),
            r.mean_train_acc.map(acc).unwrap_or_default(),
            r.mean_val_acc.map(acc).unwrap_or_default(),
        ])?;
    }
    out.flush()
}

pub fn write_summary<W: Write>(report: &GridReport, w: W) -> io::Result<()> {
    write_rows(&rows_from_report(report), w)
}

/// Per-fold lines; failed cells contribute nothing.
pub fn write_long<W: Write>(report: &GridReport, w: W) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(LONG_HEADER)?;
    for cell in report.results() {
        for (f, (t, v)) in cell.train_acc.iter().zip(&cell.val_acc).enumerate() {
            out.write_record([
                cell.dataset.clone(),
                cell.spec.tag().to_string(),
                cell.k.to_string(),
                cell.inverted.to_string(),
                f.to_string(),
                acc(*t),
                acc(*v),
            ])?;
        }
    }
    out.flush()
}

pub fn write_to_path(path: &Path, body: impl FnOnce(&mut Vec<u8>) -> io::Result<()>) -> Result<()> {
    let mut buf = Vec::new();
    body(&mut buf).map_err(|e| Error::io(path, e))?;
    std::fs::write(path, buf).map_err(|e| Error::io(path, e))
}

/// Parses a summary report. Errors carry the 1-based line number.
pub fn parse_rows(input: &[u8]) -> std::result::Result<Vec<ReportRow>, (u64, String)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut records = reader.records();
    match records.next() {
        Some(Ok(h)) if h.iter().eq(SUMMARY_HEADER) => {}
        Some(Ok(_)) => return Err((1, format!("expected header `{}`", SUMMARY_HEADER.join(",")))),
        Some(Err(e)) => return Err((1, e.to_string())),
        None => return Err((1, "empty report".into())),
    }
    let mut rows = Vec::new();
    for record in records {
        let record = record.map_err(|e| (e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != SUMMARY_HEADER.len() {
            return Err((
                line,
                format!(
                    "expected {} fields, found {}",
                    SUMMARY_HEADER.len(),
                    record.len()
                ),
            ));
        }
        let bad = |what: &str, v: &str| (line, format!("bad {what} `{v}`"));
        let algorithm =
            AlgorithmTag::parse(&record[1]).ok_or_else(|| bad("algorithm", &record[1]))?;
        let folds = record[2]
            .parse()
            .map_err(|_| bad("fold count", &record[2]))?;
        let inverted = record[3]
            .parse()
            .map_err(|_| bad("inverted flag", &record[3]))?;
        let accuracy = |s: &str, what: &str| -> std::result::Result<Option<f64>, (u64, String)> {
            if s.is_empty() {
                return Ok(None);
            }
            match s.parse::<f64>() {
                Ok(v) if (0.0..=1.0).contains(&v) => Ok(Some(v)),
                _ => Err(bad(what, s)),
            }
        };
        rows.push(ReportRow {
            dataset: record[0].to_string(),
            algorithm,
            folds,
            inverted,
            mean_train_acc: accuracy(&record[4], "training accuracy")?,
            mean_val_acc: accuracy(&record[5], "validation accuracy")?,
        });
    }
    Ok(rows)
}

pub fn read_rows(path: &Path) -> Result<Vec<ReportRow>> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_rows(&bytes).map_err(|(line, msg)| Error::parse(path, line, msg))
}

/// Fold-count by dataset table of validation accuracy for one classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyTable {
    pub algorithm: AlgorithmTag,
    pub datasets: Vec<String>,
    pub folds: Vec<usize>,
    /// `cells[fold_row][dataset_col]`; empty text when the grid had no such cell.
    pub cells: Vec<Vec<String>>,
}

/// One table per classifier present, in canonical classifier order.
/// Datasets keep their first-appearance order; fold counts ascend.
pub fn tables(rows: &[ReportRow]) -> Vec<AccuracyTable> {
    let mut out = Vec::new();
    for tag in AlgorithmTag::ALL {
        let mine: Vec<&ReportRow> = rows.iter().filter(|r| r.algorithm == tag).collect();
        if mine.is_empty() {
            continue;
        }
        let mut datasets: Vec<String> = Vec::new();
        for r in &mine {
            if !datasets.contains(&r.dataset) {
                datasets.push(r.dataset.clone());
            }
        }
        let folds: Vec<usize> = mine
            .iter()
            .map(|r| r.folds)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let cells = folds
            .iter()
            .map(|&k| {
                datasets
                    .iter()
                    .map(
                        |d| match mine.iter().find(|r| r.folds == k && &r.dataset == d) {
                            Some(r) => r.mean_val_acc.map_or_else(|| "error".into(), acc),
                            None => String::new(),
                        },
                    )
                    .collect()
            })
            .collect();
        out.push(AccuracyTable {
            algorithm: tag,
            datasets,
            folds,
            cells,
        });
    }
    out
}

/// Pipe-aligned markdown, one section per classifier.
pub fn render_markdown(rows: &[ReportRow]) -> String {
    let mut out = String::new();
    for (t, table) in tables(rows).iter().enumerate() {
        if t > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "### {} validation accuracy\n", table.algorithm);
        let mut grid: Vec<Vec<String>> = Vec::with_capacity(table.folds.len() + 1);
        let mut head = vec!["folds".to_string()];
        head.extend(table.datasets.iter().cloned());
        grid.push(head);
        for (k, cells) in table.folds.iter().zip(&table.cells) {
            let mut line = vec![k.to_string()];
            line.extend(
                cells
                    .iter()
                    .map(|c| if c.is_empty() { "-".into() } else { c.clone() }),
            );
            grid.push(line);
        }
        let widths: Vec<usize> = (0..grid[0].len())
            .map(|c| grid.iter().map(|r| r[c].len()).max().unwrap_or(0).max(3))
            .collect();
        let fmt_line = |cells: &[String]| {
            let body: Vec<String> = cells
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(c, (s, &w))| {
                    if c == 0 {
                        format!("{s:<w$}")
                    } else {
                        format!("{s:>w$}")
                    }
                })
                .collect();
            format!("| {} |", body.join(" | "))
        };
        let _ = writeln!(out, "{}", fmt_line(&grid[0]));
        let rule: Vec<String> = widths
            .iter()
            .enumerate()
            .map(|(c, &w)| {
                if c == 0 {
                    "-".repeat(w)
                } else {
                    format!("{}:", "-".repeat(w - 1))
                }
            })
            .collect();
        let _ = writeln!(out, "| {} |", rule.join(" | "));
        for line in &grid[1..] {
            let _ = writeln!(out, "{}", fmt_line(line));
        }
    }
    out
}
