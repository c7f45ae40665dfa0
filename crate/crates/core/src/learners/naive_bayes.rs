//! Naive Bayes over binary features.
//!
//! The default is the Bernoulli event model with Laplace smoothing. A
//! Gaussian model (per-class mean and floored variance) is available for
//! comparison; on ±1 / 0-1 data it mostly agrees with the Bernoulli one.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::check_width;
use crate::data::{Encoding, Subset};
use crate::error::{Error, Result};
use crate::math::{exp, ln};

/// Variance floor of the Gaussian event model.
pub const VARIANCE_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NbVariant {
    #[default]
    Bernoulli,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaiveBayesParams {
    pub variant: NbVariant,
    /// Additive smoothing for priors and Bernoulli parameters; must be > 0.
    pub alpha: f64,
}

impl Default for NaiveBayesParams {
    fn default() -> Self {
        Self {
            variant: NbVariant::Bernoulli,
            alpha: 1.0,
        }
    }
}

impl NaiveBayesParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "naive Bayes alpha must be finite and > 0, got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Likelihood {
    /// `p_high[c][j] = P(x_j = high | class c)`.
    Bernoulli { p_high: [Vec<f64>; 2] },
    Gaussian {
        mean: [Vec<f64>; 2],
        var: [Vec<f64>; 2],
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct NaiveBayesModel {
    alpha: f64,
    encoding: Encoding,
    priors: [f64; 2],
    likelihood: Likelihood,
}

impl NaiveBayesModel {
    pub fn priors(&self) -> [f64; 2] {
        self.priors
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn variant(&self) -> NbVariant {
        match self.likelihood {
            Likelihood::Bernoulli { .. } => NbVariant::Bernoulli,
            Likelihood::Gaussian { .. } => NbVariant::Gaussian,
        }
    }

    pub fn width(&self) -> usize {
        match &self.likelihood {
            Likelihood::Bernoulli { p_high } => p_high[0].len(),
            Likelihood::Gaussian { mean, .. } => mean[0].len(),
        }
    }

    /// The value of a feature that counts as "high" (1 for both encodings).
    pub fn high_value(&self) -> f64 {
        self.encoding.high()
    }

    /// `P(x_feature = high | class)` under the Bernoulli model.
    pub fn p_high(&self, class: u8, feature: usize) -> Option<f64> {
        match &self.likelihood {
            Likelihood::Bernoulli { p_high } => Some(p_high[usize::from(class)][feature]),
            Likelihood::Gaussian { .. } => None,
        }
    }

    /// Unnormalized log posteriors `ln P(c) + Σ ln P(x_j | c)` for both classes.
    pub fn log_joint(&self, x: &[f64]) -> Result<[f64; 2]> {
        check_width(self.width(), x)?;
        let mut out = [ln(self.priors[0]), ln(self.priors[1])];
        for (c, acc) in out.iter_mut().enumerate() {
            match &self.likelihood {
                Likelihood::Bernoulli { p_high } => {
                    for (&v, &p) in x.iter().zip(&p_high[c]) {
                        *acc += if v == self.encoding.high() {
                            ln(p)
                        } else {
                            ln(1.0 - p)
                        };
                    }
                }
                Likelihood::Gaussian { mean, var } => {
                    for ((&v, &mu), &s2) in x.iter().zip(&mean[c]).zip(&var[c]) {
                        let d = v - mu;
                        *acc += -0.5 * ln(2.0 * core::f64::consts::PI * s2) - d * d / (2.0 * s2);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Predicted class and normalized posteriors `[P(0 | x), P(1 | x)]`.
    /// An exact tie goes to class 0.
    pub fn predict_with_posteriors(&self, x: &[f64]) -> Result<(u8, [f64; 2])> {
        let lj = self.log_joint(x)?;
        let top = lj[0].max(lj[1]);
        let w = [exp(lj[0] - top), exp(lj[1] - top)];
        let z = w[0] + w[1];
        let class = u8::from(lj[1] > lj[0]);
        Ok((class, [w[0] / z, w[1] / z]))
    }
}

pub fn nb_train(train: &Subset<'_>, params: &NaiveBayesParams) -> Result<NaiveBayesModel> {
    params.validate()?;
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    let d = train.width();
    let m = train.len() as f64;
    let alpha = params.alpha;
    let encoding = train.encoding();
    let counts = train.class_counts();
    let class_n = [counts[0] as f64, counts[1] as f64];
    let priors = [
        (class_n[0] + alpha) / (m + 2.0 * alpha),
        (class_n[1] + alpha) / (m + 2.0 * alpha),
    ];

    let likelihood = match params.variant {
        NbVariant::Bernoulli => {
            let mut high = [vec![0usize; d], vec![0usize; d]];
            for (row, y) in train.iter() {
                for (cnt, &v) in high[usize::from(y)].iter_mut().zip(row) {
                    if v == encoding.high() {
                        *cnt += 1;
                    }
                }
            }
            let p_high = [0, 1].map(|c| {
                high[c]
                    .iter()
                    .map(|&n| (n as f64 + alpha) / (class_n[c] + 2.0 * alpha))
                    .collect()
            });
            Likelihood::Bernoulli { p_high }
        }
        NbVariant::Gaussian => {
            let mut sum = [vec![0.0; d], vec![0.0; d]];
            let mut sq = [vec![0.0; d], vec![0.0; d]];
            for (row, y) in train.iter() {
                let c = usize::from(y);
                for j in 0..d {
                    sum[c][j] += row[j];
                    sq[c][j] += row[j] * row[j];
                }
            }
            let mut mean = [vec![0.0; d], vec![0.0; d]];
            let mut var = [vec![1.0; d], vec![1.0; d]];
            for c in 0..2 {
                // An absent class falls back to the pooled statistics.
                let (s, q, n) = if counts[c] == 0 {
                    let s: Vec<f64> = (0..d).map(|j| sum[0][j] + sum[1][j]).collect();
                    let q: Vec<f64> = (0..d).map(|j| sq[0][j] + sq[1][j]).collect();
                    (s, q, m)
                } else {
                    (sum[c].clone(), sq[c].clone(), class_n[c])
                };
                for j in 0..d {
                    let mu = s[j] / n;
                    mean[c][j] = mu;
                    var[c][j] = (q[j] / n - mu * mu).max(0.0) + VARIANCE_FLOOR;
                }
            }
            Likelihood::Gaussian { mean, var }
        }
    };

    Ok(NaiveBayesModel {
        alpha,
        encoding,
        priors,
        likelihood,
    })
}
