//! Soft-margin SVM trained with Platt's sequential minimal optimization.
//!
//! The solver keeps the full kernel matrix and an error cache `E_i = f(x_i) - y_i`
//! for every training point. The outer loop alternates between sweeps over
//! all examples and sweeps over the non-bound ones. Second-multiplier
//! selection uses the max `|E1 - E2|` heuristic and falls back to scanning
//! non-bound, then all multipliers from a seeded random starting point.
//!
//! After convergence the bias is recomputed from all multipliers rather than
//! kept from the last step.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::check_width;
use crate::data::Subset;
use crate::error::{Error, Result};
use crate::math::{exp, powi};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    Linear,
    /// `(x·z + 1)^degree`
    Polynomial {
        degree: u32,
    },
    /// `exp(-gamma ‖x - z‖²)`
    Rbf {
        gamma: f64,
    },
}

impl Kernel {
    pub fn eval(&self, x: &[f64], z: &[f64]) -> f64 {
        match *self {
            Kernel::Linear => dot(x, z),
            Kernel::Polynomial { degree } => powi(dot(x, z) + 1.0, degree),
            Kernel::Rbf { gamma } => {
                let d2: f64 = x.iter().zip(z).map(|(a, b)| (a - b) * (a - b)).sum();
                exp(-gamma * d2)
            }
        }
    }
}

fn dot(x: &[f64], z: &[f64]) -> f64 {
    x.iter().zip(z).map(|(a, b)| a * b).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmParams {
    pub kernel: Kernel,
    /// Box constraint.
    pub c: f64,
    /// KKT tolerance.
    pub tol: f64,
    /// Minimum relative change of a multiplier for a step to count as progress.
    pub eps: f64,
    /// Outer-loop sweeps allowed before giving up.
    pub max_passes: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self {
            kernel: Kernel::Rbf { gamma: 1.0 },
            c: 1.0,
            tol: 1e-3,
            eps: 1e-10,
            max_passes: 10_000,
        }
    }
}

impl SvmParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(format!("svm {what}")));
        if !(self.c > 0.0 && self.c.is_finite()) {
            return bad(&format!("C must be finite and > 0, got {}", self.c));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad(&format!("tol must be finite and > 0, got {}", self.tol));
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return bad(&format!("eps must be finite and > 0, got {}", self.eps));
        }
        if self.max_passes == 0 {
            return bad("max_passes must be >= 1");
        }
        match self.kernel {
            Kernel::Rbf { gamma } if !(gamma > 0.0 && gamma.is_finite()) => {
                bad(&format!("gamma must be finite and > 0, got {gamma}"))
            }
            Kernel::Polynomial { degree: 0 } => bad("polynomial degree must be >= 1"),
            _ => Ok(()),
        }
    }
}

/// A trained SVM: only samples with a positive multiplier are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    kernel: Kernel,
    c: f64,
    width: usize,
    support: Vec<Vec<f64>>,
    alphas: Vec<f64>,
    /// `alpha_i * y_i` with `y_i ∈ {-1, +1}`.
    coefficients: Vec<f64>,
    bias: f64,
    passes: usize,
}

impl SvmModel {
    /// A model with the given support set; mostly useful for tests.
    pub fn from_parts(
        kernel: Kernel,
        c: f64,
        width: usize,
        support: Vec<Vec<f64>>,
        coefficients: Vec<f64>,
        bias: f64,
    ) -> Self {
        let alphas = coefficients.iter().map(|v| v.abs()).collect();
        Self {
            kernel,
            c,
            width,
            support,
            alphas,
            coefficients,
            bias,
            passes: 0,
        }
    }

    pub fn kernel(&self) -> Kernel {
        self.kernel
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn support_vectors(&self) -> &[Vec<f64>] {
        &self.support
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Outer-loop sweeps SMO needed.
    pub fn passes(&self) -> usize {
        self.passes
    }

    /// `Σ alpha_i y_i`, zero at any feasible point.
    pub fn dual_sum(&self) -> f64 {
        self.coefficients.iter().sum()
    }

    pub fn decision(&self, x: &[f64]) -> Result<f64> {
        check_width(self.width, x)?;
        Ok(self
            .support
            .iter()
            .zip(&self.coefficients)
            .map(|(s, &w)| w * self.kernel.eval(s, x))
            .sum::<f64>()
            + self.bias)
    }

    /// Class 1 iff the decision value is strictly positive.
    pub fn predict_with_decision(&self, x: &[f64]) -> Result<(u8, f64)> {
        let f = self.decision(x)?;
        Ok((u8::from(f > 0.0), f))
    }
}

struct Smo<'p> {
    params: &'p SvmParams,
    n: usize,
    gram: Vec<f64>,
    y: Vec<f64>,
    alpha: Vec<f64>,
    error: Vec<f64>,
    bias: f64,
    rng: ChaCha8Rng,
}

impl Smo<'_> {
    fn k(&self, i: usize, j: usize) -> f64 {
        self.gram[i * self.n + j]
    }

    fn non_bound(&self, i: usize) -> bool {
        self.alpha[i] > 0.0 && self.alpha[i] < self.params.c
    }

    fn take_step(&mut self, i1: usize, i2: usize) -> bool {
        if i1 == i2 {
            return false;
        }
        let c = self.params.c;
        let (alph1, alph2) = (self.alpha[i1], self.alpha[i2]);
        let (y1, y2) = (self.y[i1], self.y[i2]);
        let (e1, e2) = (self.error[i1], self.error[i2]);
        let s = y1 * y2;

        let (lo, hi) = if y1 != y2 {
            ((alph2 - alph1).max(0.0), (c + alph2 - alph1).min(c))
        } else {
            ((alph1 + alph2 - c).max(0.0), (alph1 + alph2).min(c))
        };
        if lo >= hi {
            return false;
        }

        let (k11, k12, k22) = (self.k(i1, i1), self.k(i1, i2), self.k(i2, i2));
        let eta = k11 + k22 - 2.0 * k12;
        let mut a2 = if eta > 0.0 {
            (alph2 + y2 * (e1 - e2) / eta).clamp(lo, hi)
        } else {
            // Degenerate curvature: pick the better endpoint of the segment.
            let f1 = y1 * (e1 - self.bias) - alph1 * k11 - s * alph2 * k12;
            let f2 = y2 * (e2 - self.bias) - s * alph1 * k12 - alph2 * k22;
            let objective = |a: f64| {
                let a1 = alph1 + s * (alph2 - a);
                a1 * f1 + a * f2 + 0.5 * a1 * a1 * k11 + 0.5 * a * a * k22 + s * a * a1 * k12
            };
            let (lobj, hobj) = (objective(lo), objective(hi));
            if lobj < hobj - self.params.eps {
                lo
            } else if lobj > hobj + self.params.eps {
                hi
            } else {
                alph2
            }
        };
        if a2 < 1e-8 {
            a2 = 0.0;
        } else if a2 > c - 1e-8 {
            a2 = c;
        }
        let eps = self.params.eps;
        if (a2 - alph2).abs() < eps * (a2 + alph2 + eps) {
            return false;
        }
        let mut a1 = alph1 + s * (alph2 - a2);
        // Push rounding overshoot of a1 back into a2 so Σ alpha_i y_i stays put.
        if a1 < 1e-8 {
            a2 += s * a1;
            a1 = 0.0;
        } else if a1 > c - 1e-8 {
            a2 += s * (a1 - c);
            a1 = c;
        }
        if a2.abs() <= c * 1e-12 {
            a2 = 0.0;
        } else if (c - a2).abs() <= c * 1e-12 {
            a2 = c;
        }

        let (d1, d2) = (y1 * (a1 - alph1), y2 * (a2 - alph2));
        let b1 = self.bias - e1 - d1 * k11 - d2 * k12;
        let b2 = self.bias - e2 - d1 * k12 - d2 * k22;
        let new_bias = if a1 > 0.0 && a1 < c {
            b1
        } else if a2 > 0.0 && a2 < c {
            b2
        } else {
            0.5 * (b1 + b2)
        };
        let db = new_bias - self.bias;

        for i in 0..self.n {
            self.error[i] += d1 * self.gram[i * self.n + i1] + d2 * self.gram[i * self.n + i2] + db;
        }
        self.alpha[i1] = a1;
        self.alpha[i2] = a2;
        self.bias = new_bias;
        true
    }

    fn examine(&mut self, i2: usize) -> bool {
        let (y2, alph2, e2) = (self.y[i2], self.alpha[i2], self.error[i2]);
        let r2 = e2 * y2;
        let tol = self.params.tol;
        if !((r2 < -tol && alph2 < self.params.c) || (r2 > tol && alph2 > 0.0)) {
            return false;
        }

        let non_bound: Vec<usize> = (0..self.n).filter(|&i| self.non_bound(i)).collect();
        if non_bound.len() > 1 {
            let best = non_bound
                .iter()
                .copied()
                .max_by(|&a, &b| {
                    (self.error[a] - e2)
                        .abs()
                        .total_cmp(&(self.error[b] - e2).abs())
                })
                .expect("non-empty");
            if self.take_step(best, i2) {
                return true;
            }
        }
        if !non_bound.is_empty() {
            let start = self.rng.random_range(0..non_bound.len());
            for k in 0..non_bound.len() {
                let i1 = non_bound[(start + k) % non_bound.len()];
                if self.take_step(i1, i2) {
                    return true;
                }
            }
        }
        let start = self.rng.random_range(0..self.n);
        for k in 0..self.n {
            if self.take_step((start + k) % self.n, i2) {
                return true;
            }
        }
        false
    }

    /// Bias from the converged multipliers: the mean of `y_i - g_i` over
    /// free multipliers, or the midpoint of the KKT-feasible interval when
    /// every multiplier is at a bound (where the incremental estimate is
    /// arbitrary within that interval). The estimate is then clamped into
    /// the range where every KKT condition still holds within `tol`.
    fn settle_bias(&mut self) {
        // A little inside the band so rounding in a fresh decision sum
        // cannot push a boundary point over.
        let tol = self.params.tol * (1.0 - 1e-6);
        let (mut free_sum, mut free_n) = (0.0, 0usize);
        let (mut lower, mut upper) = (f64::NEG_INFINITY, f64::INFINITY);
        let (mut lower_tol, mut upper_tol) = (f64::NEG_INFINITY, f64::INFINITY);
        for i in 0..self.n {
            // error = g + b - y, so y - g = b - error
            let r = self.bias - self.error[i];
            let y = self.y[i];
            if self.non_bound(i) {
                free_sum += r;
                free_n += 1;
                lower_tol = lower_tol.max(r - tol);
                upper_tol = upper_tol.min(r + tol);
            } else if (y > 0.0) == (self.alpha[i] <= 0.0) {
                lower = lower.max(r);
                lower_tol = lower_tol.max(r - tol);
            } else {
                upper = upper.min(r);
                upper_tol = upper_tol.min(r + tol);
            }
        }
        let mut bias = if free_n > 0 {
            free_sum / free_n as f64
        } else if lower.is_finite() && upper.is_finite() {
            0.5 * (lower + upper)
        } else {
            self.bias
        };
        if lower_tol <= upper_tol {
            bias = bias.clamp(lower_tol, upper_tol);
        }
        let db = bias - self.bias;
        for e in &mut self.error {
            *e += db;
        }
        self.bias = bias;
    }

    fn run(&mut self) -> Result<usize> {
        let mut examine_all = true;
        let mut passes = 0;
        loop {
            let mut changed = 0usize;
            for i in 0..self.n {
                if (examine_all || self.non_bound(i)) && self.examine(i) {
                    changed += 1;
                }
            }
            passes += 1;
            if examine_all {
                if changed == 0 {
                    return Ok(passes);
                }
                examine_all = false;
            } else if changed == 0 {
                examine_all = true;
            }
            if passes >= self.params.max_passes {
                return Err(Error::NonConvergence { passes });
            }
        }
    }
}

/// Trains on `train` (class 1 → +1, class 0 → -1). Both classes must be present.
pub fn svm_train(train: &Subset<'_>, params: &SvmParams, seed: u64) -> Result<SvmModel> {
    params.validate()?;
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    match train.class_counts() {
        [0, _] => return Err(Error::SingleClass(1)),
        [_, 0] => return Err(Error::SingleClass(0)),
        _ => {}
    }

    let n = train.len();
    let mut gram = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = params.kernel.eval(train.row(i), train.row(j));
            gram[i * n + j] = v;
            gram[j * n + i] = v;
        }
    }
    let y: Vec<f64> = (0..n)
        .map(|i| if train.label(i) == 1 { 1.0 } else { -1.0 })
        .collect();
    let error = y.iter().map(|v| -v).collect();
    let mut smo = Smo {
        params,
        n,
        gram,
        y,
        alpha: vec![0.0; n],
        error,
        bias: 0.0,
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    let passes = smo.run()?;
    smo.settle_bias();

    let mut support = Vec::new();
    let mut alphas = Vec::new();
    let mut coefficients = Vec::new();
    for i in 0..n {
        if smo.alpha[i] > 0.0 {
            support.push(train.row(i).to_vec());
            alphas.push(smo.alpha[i]);
            coefficients.push(smo.alpha[i] * smo.y[i]);
        }
    }
    Ok(SvmModel {
        kernel: params.kernel,
        c: params.c,
        width: train.width(),
        support,
        alphas,
        coefficients,
        bias: smo.bias,
        passes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{BinaryDataset, Encoding};
    use alloc::string::ToString;

    fn dataset(rows: &[[f64; 2]], labels: &[u8]) -> BinaryDataset {
        BinaryDataset::new(
            "t",
            vec!["a".to_string(), "b".to_string()],
            Encoding::Boolean,
            rows.iter().map(|r| r.to_vec()).collect(),
            labels.to_vec(),
        )
        .unwrap()
    }

    fn xor4() -> BinaryDataset {
        dataset(
            &[[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]],
            &[0, 1, 1, 0],
        )
    }

    #[test]
    fn separable_pair_with_linear_kernel() {
        let ds = dataset(&[[0.0, 0.0], [1.0, 1.0]], &[0, 1]);
        let params = SvmParams {
            kernel: Kernel::Linear,
            ..SvmParams::default()
        };
        let model = svm_train(&ds.all(), &params, 0).unwrap();
        assert_eq!(model.predict_with_decision(&[0.0, 0.0]).unwrap().0, 0);
        assert_eq!(model.predict_with_decision(&[1.0, 1.0]).unwrap().0, 1);
        assert!(model.dual_sum().abs() < 1e-8);
    }

    #[test]
    fn rbf_fits_four_point_xor() {
        let ds = xor4();
        let model = svm_train(&ds.all(), &SvmParams::default(), 3).unwrap();
        for (row, y) in ds.all().iter() {
            let (class, f) = model.predict_with_decision(row).unwrap();
            assert_eq!(class, y, "decision {f}");
            assert_eq!(f > 0.0, y == 1);
        }
        assert!(model.dual_sum().abs() < 1e-8);
        assert!(model.alphas().iter().all(|&a| a > 0.0 && a <= 1.0));
    }

    #[test]
    fn empty_support_set_follows_bias_sign() {
        let model = SvmModel::from_parts(Kernel::Rbf { gamma: 1.0 }, 1.0, 2, vec![], vec![], -0.5);
        for x in [[0.0, 0.0], [1.0, 1.0], [5.0, -3.0]] {
            assert_eq!(model.predict_with_decision(&x).unwrap(), (0, -0.5));
        }
    }

    #[test]
    fn zero_decision_is_class_zero() {
        let model = SvmModel::from_parts(Kernel::Linear, 1.0, 2, vec![], vec![], 0.0);
        assert_eq!(model.predict_with_decision(&[1.0, 1.0]).unwrap().0, 0);
    }

    #[test]
    fn single_class_is_rejected() {
        let ds = dataset(&[[0.0, 0.0], [1.0, 1.0]], &[1, 1]);
        assert_eq!(
            svm_train(&ds.all(), &SvmParams::default(), 0),
            Err(Error::SingleClass(1))
        );
    }

    #[test]
    fn pass_budget_is_enforced() {
        let params = SvmParams {
            max_passes: 1,
            ..SvmParams::default()
        };
        assert_eq!(
            svm_train(&xor4().all(), &params, 0),
            Err(Error::NonConvergence { passes: 1 })
        );
    }

    #[test]
    fn rejects_bad_hyperparameters() {
        for p in [
            SvmParams {
                c: 0.0,
                ..SvmParams::default()
            },
            SvmParams {
                kernel: Kernel::Rbf { gamma: -1.0 },
                ..SvmParams::default()
            },
            SvmParams {
                kernel: Kernel::Polynomial { degree: 0 },
                ..SvmParams::default()
            },
            SvmParams {
                tol: 0.0,
                ..SvmParams::default()
            },
        ] {
            assert!(matches!(
                svm_train(&xor4().all(), &p, 0),
                Err(Error::InvalidParameter(_))
            ));
        }
    }

    #[test]
    fn width_mismatch() {
        let model = svm_train(&xor4().all(), &SvmParams::default(), 0).unwrap();
        assert_eq!(
            model.decision(&[1.0]),
            Err(Error::WidthMismatch {
                expected: 2,
                found: 1
            })
        );
    }

    #[test]
    fn kernels() {
        let (x, z) = ([1.0, 2.0], [3.0, -1.0]);
        assert_eq!(Kernel::Linear.eval(&x, &z), 1.0);
        assert_eq!(Kernel::Polynomial { degree: 3 }.eval(&x, &z), 8.0);
        assert_eq!(Kernel::Rbf { gamma: 0.5 }.eval(&x, &x), 1.0);
        assert!((Kernel::Rbf { gamma: 0.5 }.eval(&x, &z) - libm::exp(-6.5)).abs() < 1e-15);
    }
}
