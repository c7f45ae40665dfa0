use alloc::string::String;
use alloc::vec::Vec;

use super::folds::FoldPlan;
use super::seed::{derive_seed, SeedPart};
use crate::data::{BinaryDataset, Subset};
use crate::error::{Error, Result};
use crate::learners::ClassifierSpec;

/// Train/validation accuracies of one (dataset, classifier, k) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CvCellResult {
    pub dataset: String,
    pub spec: ClassifierSpec,
    pub k: usize,
    /// Accuracy of each fold's model on its own training samples.
    pub train_acc: Vec<f64>,
    /// Accuracy of each fold's model on the held-out fold.
    pub val_acc: Vec<f64>,
    /// Training-correct over training-evaluated, pooled across folds.
    pub mean_train_acc: f64,
    /// Validation-correct over `m`.
    pub mean_val_acc: f64,
    pub val_correct: usize,
    pub samples: usize,
    pub inverted: bool,
}

/// Per-fold training seed: a stable hash of the plan seed, the spec seed and
/// the cell coordinates.
pub fn fold_seed(plan: &FoldPlan, spec: &ClassifierSpec, dataset: &str, fold: usize) -> u64 {
    derive_seed(&[
        SeedPart::Int(plan.seed()),
        SeedPart::Int(spec.seed),
        SeedPart::Str(dataset),
        SeedPart::Str(spec.tag().as_str()),
        SeedPart::Int(plan.k() as u64),
        SeedPart::Int(fold as u64),
    ])
}

/// Cross-validates `spec` on `ds` over the folds of `plan`.
///
/// With `invert`, validation predictions are flipped before scoring;
/// training accuracy is always reported uninverted.
pub fn evaluate_cv(
    spec: &ClassifierSpec,
    ds: &BinaryDataset,
    plan: &FoldPlan,
    invert: bool,
) -> Result<CvCellResult> {
    if plan.len() != ds.len() {
        return Err(Error::PlanMismatch {
            plan: plan.len(),
            samples: ds.len(),
        });
    }
    spec.validate()?;

    let k = plan.k();
    let mut train_acc = Vec::with_capacity(k);
    let mut val_acc = Vec::with_capacity(k);
    let (mut train_correct, mut train_total, mut val_correct) = (0usize, 0usize, 0usize);

    for f in 0..k {
        let train = Subset::new(ds, plan.training(f));
        let held = Subset::new(ds, plan.fold(f));
        let seed = fold_seed(plan, spec, ds.name(), f);
        let model = spec.train_seeded(&train, seed).map_err(|e| e.in_fold(f))?;

        let tc = model.correct(&train).map_err(|e| e.in_fold(f))?;
        let mut vc = 0;
        for (row, y) in held.iter() {
            let p = model.predict(row).map_err(|e| e.in_fold(f))?;
            let class = if invert { 1 - p.class } else { p.class };
            if class == y {
                vc += 1;
            }
        }
        train_acc.push(tc as f64 / train.len() as f64);
        val_acc.push(vc as f64 / held.len() as f64);
        train_correct += tc;
        train_total += train.len();
        val_correct += vc;
    }

    Ok(CvCellResult {
        dataset: ds.name().into(),
        spec: *spec,
        k,
        train_acc,
        val_acc,
        mean_train_acc: train_correct as f64 / train_total as f64,
        mean_val_acc: val_correct as f64 / ds.len() as f64,
        val_correct,
        samples: ds.len(),
        inverted: invert,
    })
}
