//! Grid run configuration.
//!
//! Settings come from three layers, later ones winning: built-in defaults,
//! an optional `key = value` file, then command-line flags. Both the file
//! and the flags go through [`RunConfig::set`], so they accept the same keys
//! and values. Blank lines and lines starting with `#` are ignored.

use std::path::{Path, PathBuf};

use antilearn_core::data::hadamard::{hadamard_dataset, DEFAULT_ORDER_CAP};
use antilearn_core::data::xor::{pyramid_xor_dataset, random_xor_dataset};
use antilearn_core::harness::{GridOptions, DEFAULT_FOLDS};
use antilearn_core::learners::{
    Algorithm, AlgorithmTag, ClassifierSpec, Kernel, MlpParams, NaiveBayesParams, SvmParams,
};
use antilearn_core::BinaryDataset;

use crate::dataset_csv::read_dataset_csv;
use crate::error::{Error, Result};

pub const DEFAULT_HADAMARD_ORDER: usize = 256;

pub const KEYS: &[&str] = &[
    "seed",
    "datasets",
    "classifiers",
    "folds",
    "invert",
    "stratify",
    "threads",
    "out",
    "series_out",
    "long_out",
    "order",
    "nb_alpha",
    "svm_c",
    "svm_kernel",
    "svm_gamma",
    "svm_degree",
    "svm_tol",
    "svm_max_passes",
    "mlp_hidden",
    "mlp_learning_rate",
    "mlp_momentum",
    "mlp_epochs",
    "mlp_scale_inputs",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DatasetSource {
    PyramidXor,
    RandomXor,
    /// Sylvester Hadamard dataset; `None` uses the configured order.
    Hadamard(Option<usize>),
    Csv(PathBuf),
}

impl DatasetSource {
    /// `pyramid-xor`, `random-xor`, `hadamard`, `hadamard-<order>`, or a
    /// path ending in `.csv`.
    pub fn parse(token: &str) -> std::result::Result<Self, String> {
        match token {
            "pyramid-xor" => return Ok(DatasetSource::PyramidXor),
            "random-xor" => return Ok(DatasetSource::RandomXor),
            "hadamard" => return Ok(DatasetSource::Hadamard(None)),
            _ => {}
        }
        if let Some(order) = token.strip_prefix("hadamard-") {
            let n = order
                .parse()
                .map_err(|_| format!("bad hadamard order in `{token}`"))?;
            return Ok(DatasetSource::Hadamard(Some(check_order(n)?)));
        }
        if token.ends_with(".csv") {
            return Ok(DatasetSource::Csv(PathBuf::from(token)));
        }
        Err(format!(
            "unknown dataset `{token}` (expected pyramid-xor, random-xor, hadamard[-N] or a .csv path)"
        ))
    }

    pub fn load(&self, default_order: usize) -> Result<BinaryDataset> {
        Ok(match self {
            DatasetSource::PyramidXor => pyramid_xor_dataset(),
            DatasetSource::RandomXor => random_xor_dataset(),
            DatasetSource::Hadamard(order) => {
                let n = order.unwrap_or(default_order);
                hadamard_dataset(n.trailing_zeros())?
            }
            DatasetSource::Csv(path) => read_dataset_csv(path)?,
        })
    }
}

/// Accepts powers of two from 2 up to the generator's size cap.
pub fn check_order(n: usize) -> std::result::Result<usize, String> {
    if n < 2 || !n.is_power_of_two() {
        return Err(format!(
            "hadamard order must be a power of two >= 2, got {n}"
        ));
    }
    if n > DEFAULT_ORDER_CAP {
        return Err(format!(
            "hadamard order {n} exceeds the limit of {DEFAULT_ORDER_CAP}"
        ));
    }
    Ok(n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub datasets: Vec<DatasetSource>,
    pub classifiers: Vec<AlgorithmTag>,
    pub folds: Vec<usize>,
    pub invert: bool,
    pub stratify: bool,
    /// `None` means one thread per available core.
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub series_out: Option<PathBuf>,
    pub long_out: Option<PathBuf>,
    pub hadamard_order: usize,
    pub nb: NaiveBayesParams,
    pub svm: SvmParams,
    pub mlp: MlpParams,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            datasets: vec![
                DatasetSource::PyramidXor,
                DatasetSource::RandomXor,
                DatasetSource::Hadamard(None),
            ],
            classifiers: AlgorithmTag::ALL.to_vec(),
            folds: DEFAULT_FOLDS.to_vec(),
            invert: false,
            stratify: true,
            threads: None,
            out: None,
            series_out: None,
            long_out: None,
            hadamard_order: DEFAULT_HADAMARD_ORDER,
            nb: NaiveBayesParams::default(),
            svm: SvmParams::default(),
            mlp: MlpParams::default(),
        }
    }
}

fn list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> std::result::Result<T, String> {
    value
        .trim()
        .parse()
        .map_err(|_| format!("`{key}`: cannot parse `{value}`"))
}

fn flag(key: &str, value: &str) -> std::result::Result<bool, String> {
    match value.trim() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        other => Err(format!("`{key}`: expected true or false, got `{other}`")),
    }
}

impl RunConfig {
    /// Applies one setting. Unknown keys and unparsable values are errors.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        match key {
            "seed" => self.seed = num(key, value)?,
            "datasets" => {
                self.datasets = list(value)
                    .map(DatasetSource::parse)
                    .collect::<std::result::Result<_, _>>()?;
                if self.datasets.is_empty() {
                    return Err("`datasets` is empty".into());
                }
            }
            "classifiers" => {
                self.classifiers = Vec::new();
                for t in list(value) {
                    let tag = AlgorithmTag::parse(t).ok_or_else(|| {
                        format!("unknown classifier `{t}` (expected nb, svm or mlp)")
                    })?;
                    if !self.classifiers.contains(&tag) {
                        self.classifiers.push(tag);
                    }
                }
                if self.classifiers.is_empty() {
                    return Err("`classifiers` is empty".into());
                }
            }
            "folds" => {
                let mut folds: Vec<usize> = list(value)
                    .map(|v| num(key, v))
                    .collect::<std::result::Result<_, _>>()?;
                folds.sort_unstable();
                folds.dedup();
                if folds.is_empty() {
                    return Err("`folds` is empty".into());
                }
                if folds[0] < 2 {
                    return Err(format!("fold count {} is below 2", folds[0]));
                }
                self.folds = folds;
            }
            "invert" => self.invert = flag(key, value)?,
            "stratify" => self.stratify = flag(key, value)?,
            "threads" => {
                let n: usize = num(key, value)?;
                if n == 0 {
                    return Err("`threads` must be at least 1".into());
                }
                self.threads = Some(n);
            }
            "out" => self.out = Some(PathBuf::from(value.trim())),
            "series_out" => self.series_out = Some(PathBuf::from(value.trim())),
            "long_out" => self.long_out = Some(PathBuf::from(value.trim())),
            "order" => self.hadamard_order = check_order(num(key, value)?)?,
            "nb_alpha" => self.nb.alpha = num(key, value)?,
            "svm_c" => self.svm.c = num(key, value)?,
            "svm_kernel" => {
                self.svm.kernel = match value.trim() {
                    "rbf" => Kernel::Rbf {
                        gamma: self.gamma_or_default(),
                    },
                    "linear" => Kernel::Linear,
                    "poly" => Kernel::Polynomial {
                        degree: match self.svm.kernel {
                            Kernel::Polynomial { degree } => degree,
                            _ => 3,
                        },
                    },
                    other => {
                        return Err(format!(
                            "unknown kernel `{other}` (expected rbf, linear or poly)"
                        ))
                    }
                }
            }
            "svm_gamma" => {
                let gamma = num(key, value)?;
                match &mut self.svm.kernel {
                    Kernel::Rbf { gamma: g } => *g = gamma,
                    _ => return Err("`svm_gamma` needs the rbf kernel".into()),
                }
            }
            "svm_degree" => {
                let degree = num(key, value)?;
                match &mut self.svm.kernel {
                    Kernel::Polynomial { degree: d } => *d = degree,
                    _ => return Err("`svm_degree` needs the poly kernel".into()),
                }
            }
            "svm_tol" => self.svm.tol = num(key, value)?,
            "svm_max_passes" => self.svm.max_passes = num(key, value)?,
            "mlp_hidden" => self.mlp.hidden = num(key, value)?,
            "mlp_learning_rate" => self.mlp.learning_rate = num(key, value)?,
            "mlp_momentum" => self.mlp.momentum = num(key, value)?,
            "mlp_epochs" => self.mlp.epochs = num(key, value)?,
            "mlp_scale_inputs" => self.mlp.scale_inputs = flag(key, value)?,
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    fn gamma_or_default(&self) -> f64 {
        match self.svm.kernel {
            Kernel::Rbf { gamma } => gamma,
            _ => 1.0,
        }
    }

    /// Applies a `key = value` file. Errors name the offending line.
    pub fn apply_text(&mut self, text: &str, origin: &Path) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Usage(format!(
                    "{}:{}: expected `key = value`",
                    origin.display(),
                    n + 1
                )));
            };
            self.set(key.trim(), value.trim())
                .map_err(|m| Error::Usage(format!("{}:{}: {m}", origin.display(), n + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.apply_text(&text, path)
    }

    pub fn specs(&self) -> Vec<ClassifierSpec> {
        self.classifiers
            .iter()
            .map(|tag| {
                ClassifierSpec::from(match tag {
                    AlgorithmTag::NaiveBayes => Algorithm::NaiveBayes(self.nb),
                    AlgorithmTag::Svm => Algorithm::Svm(self.svm),
                    AlgorithmTag::Mlp => Algorithm::Mlp(self.mlp),
                })
            })
            .collect()
    }

    pub fn options(&self) -> GridOptions {
        GridOptions {
            invert: self.invert,
            stratified: self.stratify,
        }
    }

    pub fn threads(&self) -> usize {
        self.threads
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }

    /// Loads the datasets and checks every precondition that can be checked
    /// before training: fold counts against the smallest dataset and
    /// hyperparameter ranges. Violations are usage errors.
    pub fn prepare(&self) -> Result<(Vec<BinaryDataset>, Vec<ClassifierSpec>)> {
        let datasets = self
            .datasets
            .iter()
            .map(|d| d.load(self.hadamard_order))
            .collect::<Result<Vec<_>>>()?;
        let smallest = datasets.iter().map(BinaryDataset::len).min().unwrap_or(0);
        if let Some(&k) = self.folds.iter().find(|&&k| k > smallest) {
            let name = datasets
                .iter()
                .find(|d| d.len() == smallest)
                .map_or("", |d| d.name());
            return Err(Error::Usage(format!(
                "fold count {k} exceeds the {smallest} samples of dataset `{name}`"
            )));
        }
        let specs = self.specs();
        for spec in &specs {
            spec.validate().map_err(|e| Error::Usage(e.to_string()))?;
        }
        Ok((datasets, specs))
    }
}
