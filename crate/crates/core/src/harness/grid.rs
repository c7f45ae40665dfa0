use alloc::string::String;
use alloc::vec::Vec;

use super::cv::{evaluate_cv, CvCellResult};
use super::folds::make_folds;
use super::seed::{derive_seed, SeedPart};
use crate::data::BinaryDataset;
use crate::error::{Error, Result};
use crate::learners::{AlgorithmTag, ClassifierSpec};

/// Fold counts swept by default: 4-fold up to leave-one-out on 256 samples.
pub const DEFAULT_FOLDS: [usize; 7] = [4, 8, 16, 32, 64, 128, 256];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridOptions {
    pub invert: bool,
    pub stratified: bool,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            invert: false,
            stratified: true,
        }
    }
}

/// Coordinates of one grid cell, as indices into the grid's inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CellKey {
    pub dataset: usize,
    pub spec: usize,
    pub folds: usize,
}

/// Result of one cell: the cross-validation record or the error that stopped it.
#[derive(Debug, Clone, PartialEq)]
pub struct CellOutcome {
    pub dataset: String,
    pub algorithm: AlgorithmTag,
    pub folds: usize,
    pub result: Result<CvCellResult>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridReport {
    pub seed: u64,
    pub options: GridOptions,
    /// Cells in canonical order: dataset, then classifier, then fold count.
    pub cells: Vec<CellOutcome>,
    /// Unix seconds; left unset by the pure core.
    pub created_at: Option<u64>,
}

impl GridReport {
    pub fn results(&self) -> impl Iterator<Item = &CvCellResult> {
        self.cells.iter().filter_map(|c| c.result.as_ref().ok())
    }

    pub fn failures(&self) -> impl Iterator<Item = &CellOutcome> {
        self.cells.iter().filter(|c| c.result.is_err())
    }

    /// Equality of everything except the creation timestamp.
    pub fn same_results(&self, other: &GridReport) -> bool {
        self.seed == other.seed && self.options == other.options && self.cells == other.cells
    }

    pub fn find(
        &self,
        dataset: &str,
        algorithm: AlgorithmTag,
        folds: usize,
    ) -> Option<&CvCellResult> {
        self.results()
            .find(|c| c.dataset == dataset && c.spec.tag() == algorithm && c.k == folds)
    }
}

/// A validated experiment grid. Cells can be evaluated one at a time in any
/// order (or concurrently); [`Grid::assemble`] restores canonical order.
#[derive(Debug, Clone, Copy)]
pub struct Grid<'a> {
    datasets: &'a [BinaryDataset],
    specs: &'a [ClassifierSpec],
    fold_counts: &'a [usize],
    seed: u64,
    options: GridOptions,
}

impl<'a> Grid<'a> {
    pub fn new(
        datasets: &'a [BinaryDataset],
        specs: &'a [ClassifierSpec],
        fold_counts: &'a [usize],
        seed: u64,
        options: GridOptions,
    ) -> Result<Self> {
        for ds in datasets {
            for &k in fold_counts {
                if k < 2 || k > ds.len() {
                    return Err(Error::FoldRange { k, m: ds.len() });
                }
            }
        }
        for spec in specs {
            spec.validate()?;
        }
        Ok(Self {
            datasets,
            specs,
            fold_counts,
            seed,
            options,
        })
    }

    pub fn cells(&self) -> Vec<CellKey> {
        let mut keys =
            Vec::with_capacity(self.datasets.len() * self.specs.len() * self.fold_counts.len());
        for dataset in 0..self.datasets.len() {
            for spec in 0..self.specs.len() {
                for folds in 0..self.fold_counts.len() {
                    keys.push(CellKey {
                        dataset,
                        spec,
                        folds,
                    });
                }
            }
        }
        keys
    }

    /// Fold-plan seed for a dataset and fold count, shared by every
    /// classifier so they are compared on identical partitions.
    pub fn plan_seed(&self, dataset: &str, k: usize) -> u64 {
        derive_seed(&[
            SeedPart::Int(self.seed),
            SeedPart::Str(dataset),
            SeedPart::Str("folds"),
            SeedPart::Int(k as u64),
        ])
    }

    pub fn run_cell(&self, key: CellKey) -> CellOutcome {
        let ds = &self.datasets[key.dataset];
        let spec = &self.specs[key.spec];
        let k = self.fold_counts[key.folds];
        let result = make_folds(
            ds.len(),
            k,
            ds.labels(),
            self.plan_seed(ds.name(), k),
            self.options.stratified,
        )
        .and_then(|plan| evaluate_cv(spec, ds, &plan, self.options.invert));
        CellOutcome {
            dataset: ds.name().into(),
            algorithm: spec.tag(),
            folds: k,
            result,
        }
    }

    /// Builds the report from outcomes listed in [`Grid::cells`] order.
    pub fn assemble(&self, cells: Vec<CellOutcome>) -> GridReport {
        GridReport {
            seed: self.seed,
            options: self.options,
            cells,
            created_at: None,
        }
    }

    /// Evaluates every cell serially.
    pub fn run(&self) -> GridReport {
        self.run_with(|_, _| {})
    }

    /// Serial run that reports each finished cell to `progress`.
    pub fn run_with(&self, mut progress: impl FnMut(usize, &CellOutcome)) -> GridReport {
        let cells = self
            .cells()
            .into_iter()
            .enumerate()
            .map(|(i, key)| {
                let out = self.run_cell(key);
                progress(i, &out);
                out
            })
            .collect();
        self.assemble(cells)
    }
}

/// Runs every (dataset, classifier, fold count) cell. Precondition failures
/// (a fold count outside `2..=m`, bad hyperparameters) are returned as
/// errors; failures inside a cell are recorded in that cell.
pub fn run_grid(
    datasets: &[BinaryDataset],
    specs: &[ClassifierSpec],
    fold_counts: &[usize],
    seed: u64,
    options: GridOptions,
) -> Result<GridReport> {
    Ok(Grid::new(datasets, specs, fold_counts, seed, options)?.run())
}

/// Cells whose validation accuracy is below `threshold` while their
/// training accuracy is above it.
pub fn detect_antilearning(report: &GridReport, threshold: f64) -> Vec<&CvCellResult> {
    report
        .results()
        .filter(|c| c.mean_val_acc < threshold && c.mean_train_acc > threshold)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::xor::{pyramid_xor_dataset, random_xor_dataset};
    use alloc::vec;

    #[test]
    fn single_cell_grid() {
        let ds = [pyramid_xor_dataset()];
        let report = run_grid(
            &ds,
            &[ClassifierSpec::naive_bayes()],
            &[8],
            1,
            GridOptions::default(),
        )
        .unwrap();
        assert_eq!(report.cells.len(), 1);
        assert_eq!(report.cells[0].folds, 8);
    }

    #[test]
    fn fold_count_above_sample_count_is_rejected_up_front() {
        let ds = [pyramid_xor_dataset()];
        assert_eq!(
            run_grid(
                &ds,
                &[ClassifierSpec::naive_bayes()],
                &[4, 512],
                1,
                GridOptions::default()
            )
            .unwrap_err(),
            Error::FoldRange { k: 512, m: 256 }
        );
    }

    #[test]
    fn canonical_order_and_determinism() {
        let ds = [pyramid_xor_dataset(), random_xor_dataset()];
        let specs = [
            ClassifierSpec::naive_bayes(),
            ClassifierSpec::naive_bayes().with_seed(3),
        ];
        let a = run_grid(&ds, &specs, &[4, 16], 5, GridOptions::default()).unwrap();
        let b = run_grid(&ds, &specs, &[4, 16], 5, GridOptions::default()).unwrap();
        assert!(a.same_results(&b));
        let order: Vec<(&str, usize)> = a
            .cells
            .iter()
            .map(|c| (c.dataset.as_str(), c.folds))
            .collect();
        assert_eq!(
            order,
            vec![
                ("pyramid-xor", 4),
                ("pyramid-xor", 16),
                ("pyramid-xor", 4),
                ("pyramid-xor", 16),
                ("random-xor", 4),
                ("random-xor", 16),
                ("random-xor", 4),
                ("random-xor", 16),
            ]
        );
    }

    #[test]
    fn cells_do_not_depend_on_evaluation_order() {
        let ds = [pyramid_xor_dataset(), random_xor_dataset()];
        let specs = [ClassifierSpec::naive_bayes()];
        let grid = Grid::new(&ds, &specs, &[4, 8], 2, GridOptions::default()).unwrap();
        let forward = grid.run();
        let mut keys = grid.cells();
        keys.reverse();
        let mut backward: Vec<CellOutcome> = keys.into_iter().map(|k| grid.run_cell(k)).collect();
        backward.reverse();
        assert_eq!(grid.assemble(backward).cells, forward.cells);
    }

    #[test]
    fn detection_boundaries() {
        let empty = GridReport {
            seed: 0,
            options: GridOptions::default(),
            cells: vec![],
            created_at: None,
        };
        assert!(detect_antilearning(&empty, 0.5).is_empty());

        let ds = [random_xor_dataset(), pyramid_xor_dataset()];
        let report = run_grid(
            &ds,
            &[ClassifierSpec::naive_bayes()],
            &[256],
            0,
            GridOptions::default(),
        )
        .unwrap();
        let flagged = detect_antilearning(&report, 0.5);
        // Both cells validate at 0.0, but the pyramid models only reach
        // 93/255 on their own training rows, so that cell is not flagged.
        assert_eq!(flagged.len(), 1);
        assert_eq!(flagged[0].dataset, "random-xor");
        let pyramid = report
            .find("pyramid-xor", AlgorithmTag::NaiveBayes, 256)
            .unwrap();
        assert_eq!(pyramid.mean_val_acc, 0.0);
        assert_eq!(pyramid.mean_train_acc, 93.0 / 255.0);

        let mut at_half = report.clone();
        if let Ok(cell) = at_half.cells[0].result.as_mut() {
            cell.mean_val_acc = 0.5;
        }
        assert!(detect_antilearning(&at_half, 0.5).is_empty());
    }
}
