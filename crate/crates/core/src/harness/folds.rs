use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A seeded partition of `0..m` into `k` folds.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FoldPlan {
    k: usize,
    assignment: Vec<usize>,
    seed: u64,
    stratified: bool,
}

impl FoldPlan {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn is_stratified(&self) -> bool {
        self.stratified
    }

    /// Fold index of every sample.
    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Number of samples the plan covers.
    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Sample indices in fold `f`, ascending.
    pub fn fold(&self, f: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.assignment[i] == f)
            .collect()
    }

    /// Sample indices outside fold `f`, ascending.
    pub fn training(&self, f: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.assignment[i] != f)
            .collect()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in &self.assignment {
            sizes[f] += 1;
        }
        sizes
    }
}

/// Splits `m` samples into `k` folds.
///
/// Indices are shuffled with a seeded RNG and dealt round-robin. When
/// `stratified`, each class is shuffled separately and the classes are dealt
/// one after the other with a continuing counter, so both the fold sizes and
/// the per-fold class counts differ by at most one. At `k == m` every fold
/// holds exactly one sample either way.
pub fn make_folds(
    m: usize,
    k: usize,
    labels: &[u8],
    seed: u64,
    stratified: bool,
) -> Result<FoldPlan> {
    if k < 2 || k > m {
        return Err(Error::FoldRange { k, m });
    }
    if stratified && labels.len() != m {
        return Err(Error::PlanMismatch {
            plan: m,
            samples: labels.len(),
        });
    }
    if stratified && labels.iter().any(|&l| l > 1) {
        return Err(Error::InvalidDataset("labels must be 0 or 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order: Vec<usize> = if stratified {
        let mut out = Vec::with_capacity(m);
        for class in [0u8, 1] {
            let mut members: Vec<usize> = (0..m).filter(|&i| labels[i] == class).collect();
            members.shuffle(&mut rng);
            out.extend(members);
        }
        out
    } else {
        let mut all: Vec<usize> = (0..m).collect();
        all.shuffle(&mut rng);
        all
    };
    let mut assignment = vec![0; m];
    for (pos, &i) in order.iter().enumerate() {
        assignment[i] = pos % k;
    }
    Ok(FoldPlan {
        k,
        assignment,
        seed,
        stratified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loocv_has_singleton_folds() {
        let labels: Vec<u8> = (0..256).map(|i| (i % 2) as u8).collect();
        for stratified in [false, true] {
            let plan = make_folds(256, 256, &labels, 9, stratified).unwrap();
            assert!(plan.fold_sizes().iter().all(|&s| s == 1));
        }
    }

    #[test]
    fn stratified_eight_into_four() {
        let labels = [0, 0, 0, 0, 1, 1, 1, 1];
        let plan = make_folds(8, 4, &labels, 3, true).unwrap();
        for f in 0..4 {
            let fold = plan.fold(f);
            assert_eq!(fold.len(), 2);
            let ones = fold.iter().filter(|&&i| labels[i] == 1).count();
            assert_eq!(ones, 1, "fold {f}: {fold:?}");
        }
    }

    #[test]
    fn deterministic() {
        let labels = [0, 1, 0, 1, 1, 0, 0, 1, 1, 0];
        assert_eq!(
            make_folds(10, 3, &labels, 77, true).unwrap(),
            make_folds(10, 3, &labels, 77, true).unwrap()
        );
        assert_ne!(
            make_folds(10, 3, &labels, 77, false).unwrap().assignment(),
            make_folds(10, 3, &labels, 78, false).unwrap().assignment()
        );
    }

    #[test]
    fn range_errors() {
        let labels = [0, 1, 0];
        assert_eq!(
            make_folds(3, 4, &labels, 0, false),
            Err(Error::FoldRange { k: 4, m: 3 })
        );
        assert_eq!(
            make_folds(3, 1, &labels, 0, false),
            Err(Error::FoldRange { k: 1, m: 3 })
        );
        assert!(make_folds(3, 2, &labels[..2], 0, true).is_err());
    }

    #[test]
    fn training_and_fold_are_complementary() {
        let labels = [0u8; 11];
        let plan = make_folds(11, 4, &labels, 1, false).unwrap();
        for f in 0..4 {
            let mut all = plan.fold(f);
            all.extend(plan.training(f));
            all.sort_unstable();
            assert_eq!(all, (0..11).collect::<Vec<_>>());
        }
    }
}
