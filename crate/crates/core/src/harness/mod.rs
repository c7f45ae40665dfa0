//! Fold planning, cross-validated evaluation and the experiment grid.

mod cv;
mod folds;
mod grid;
pub mod seed;

pub use cv::{evaluate_cv, fold_seed, CvCellResult};
pub use folds::{make_folds, FoldPlan};
pub use grid::{
    detect_antilearning, run_grid, CellKey, CellOutcome, Grid, GridOptions, GridReport,
    DEFAULT_FOLDS,
};
