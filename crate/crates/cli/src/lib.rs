//! File formats, configuration and the parallel grid runner behind the
//! `antilearn` command.

pub mod config;
pub mod dataset_csv;
mod error;
pub mod parallel;
pub mod pgm;
pub mod report;
pub mod series;

pub use config::{DatasetSource, RunConfig};
pub use dataset_csv::{read_dataset_csv, write_dataset_csv};
pub use error::{Error, Result};
pub use parallel::run_parallel;
pub use pgm::render_matrix_pgm;
pub use series::FigureSeries;
