use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use antilearn_core::harness::GridReport;
use antilearn_core::learners::AlgorithmTag;

use crate::error::{Error, Result};

/// Validation accuracy against fold count for one classifier, one curve per
/// dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureSeries {
    pub classifier: AlgorithmTag,
    /// `(dataset, [(folds, mean_val_acc)])`, fold counts strictly increasing.
    pub curves: Vec<(String, Vec<(usize, f64)>)>,
}

impl FigureSeries {
    /// Builds one series per classifier present in the report. Failed cells
    /// leave a gap in their curve.
    pub fn from_report(report: &GridReport) -> Vec<FigureSeries> {
        let mut out: Vec<FigureSeries> = Vec::new();
        for tag in AlgorithmTag::ALL {
            let mut curves: Vec<(String, Vec<(usize, f64)>)> = Vec::new();
            for cell in report.results().filter(|c| c.spec.tag() == tag) {
                let point = (cell.k, cell.mean_val_acc);
                match curves.iter_mut().find(|(d, _)| *d == cell.dataset) {
                    Some((_, pts)) => pts.push(point),
                    None => curves.push((cell.dataset.clone(), vec![point])),
                }
            }
            if curves.is_empty() {
                continue;
            }
            for (_, pts) in &mut curves {
                pts.sort_by_key(|p| p.0);
                pts.dedup_by_key(|p| p.0);
            }
            out.push(FigureSeries {
                classifier: tag,
                curves,
            });
        }
        out
    }

    pub fn file_name(&self) -> String {
        format!("{}.tsv", self.classifier)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("folds\tdataset\tval_acc\n");
        for (dataset, pts) in &self.curves {
            for (k, v) in pts {
                let _ = writeln!(out, "{k}\t{dataset}\t{v:.4}");
            }
        }
        out
    }
}

/// Writes `<dir>/<classifier>.tsv` for every series, creating `dir` if needed.
pub fn write_series(dir: &Path, series: &[FigureSeries]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    for s in series {
        let path = dir.join(s.file_name());
        std::fs::write(&path, s.to_tsv()).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
