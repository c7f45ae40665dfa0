//! The three classifier families behind one train/predict contract.

pub mod mlp;
pub mod naive_bayes;
pub mod svm;

use core::fmt;

use crate::data::Subset;
use crate::error::{Error, Result};

pub use mlp::{mlp_train, MlpModel, MlpParams};
pub use naive_bayes::{nb_train, NaiveBayesModel, NaiveBayesParams, NbVariant};
pub use svm::{svm_train, Kernel, SvmModel, SvmParams};

pub(crate) fn check_width(expected: usize, x: &[f64]) -> Result<()> {
    if x.len() == expected {
        Ok(())
    } else {
        Err(Error::WidthMismatch {
            expected,
            found: x.len(),
        })
    }
}

/// Short algorithm tag used in reports and on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgorithmTag {
    NaiveBayes,
    Svm,
    Mlp,
}

impl AlgorithmTag {
    pub const ALL: [AlgorithmTag; 3] = [
        AlgorithmTag::NaiveBayes,
        AlgorithmTag::Svm,
        AlgorithmTag::Mlp,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AlgorithmTag::NaiveBayes => "nb",
            AlgorithmTag::Svm => "svm",
            AlgorithmTag::Mlp => "mlp",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.as_str() == s)
    }
}

impl fmt::Display for AlgorithmTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algorithm {
    NaiveBayes(NaiveBayesParams),
    Svm(SvmParams),
    Mlp(MlpParams),
}

/// An algorithm with its hyperparameters and RNG seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifierSpec {
    pub algorithm: Algorithm,
    pub seed: u64,
}

impl ClassifierSpec {
    pub fn naive_bayes() -> Self {
        Algorithm::NaiveBayes(NaiveBayesParams::default()).into()
    }

    pub fn svm() -> Self {
        Algorithm::Svm(SvmParams::default()).into()
    }

    pub fn mlp() -> Self {
        Algorithm::Mlp(MlpParams::default()).into()
    }

    /// Default hyperparameters for `tag`.
    pub fn default_for(tag: AlgorithmTag) -> Self {
        match tag {
            AlgorithmTag::NaiveBayes => Self::naive_bayes(),
            AlgorithmTag::Svm => Self::svm(),
            AlgorithmTag::Mlp => Self::mlp(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn tag(&self) -> AlgorithmTag {
        match self.algorithm {
            Algorithm::NaiveBayes(_) => AlgorithmTag::NaiveBayes,
            Algorithm::Svm(_) => AlgorithmTag::Svm,
            Algorithm::Mlp(_) => AlgorithmTag::Mlp,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.algorithm {
            Algorithm::NaiveBayes(p) => p.validate(),
            Algorithm::Svm(p) => p.validate(),
            Algorithm::Mlp(p) => p.validate(),
        }
    }

    /// Trains with this spec's own seed.
    pub fn train(&self, data: &Subset<'_>) -> Result<TrainedModel> {
        self.train_seeded(data, self.seed)
    }

    /// Trains with an explicit seed (used by the harness for per-fold seeds).
    pub fn train_seeded(&self, data: &Subset<'_>, seed: u64) -> Result<TrainedModel> {
        Ok(match &self.algorithm {
            Algorithm::NaiveBayes(p) => TrainedModel::NaiveBayes(nb_train(data, p)?),
            Algorithm::Svm(p) => TrainedModel::Svm(svm_train(data, p, seed)?),
            Algorithm::Mlp(p) => TrainedModel::Mlp(mlp_train(data, p, seed)?),
        })
    }
}

impl From<Algorithm> for ClassifierSpec {
    fn from(algorithm: Algorithm) -> Self {
        Self { algorithm, seed: 0 }
    }
}

/// A predicted class with the score it came from: the class-1 posterior
/// for naive Bayes, the decision value for the SVM, the output activation
/// for the MLP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub class: u8,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrainedModel {
    NaiveBayes(NaiveBayesModel),
    Svm(SvmModel),
    Mlp(MlpModel),
}

impl TrainedModel {
    pub fn predict(&self, x: &[f64]) -> Result<Prediction> {
        let (class, score) = match self {
            TrainedModel::NaiveBayes(m) => {
                let (c, post) = m.predict_with_posteriors(x)?;
                (c, post[1])
            }
            TrainedModel::Svm(m) => m.predict_with_decision(x)?,
            TrainedModel::Mlp(m) => m.predict_with_output(x)?,
        };
        Ok(Prediction { class, score })
    }

    /// Fraction of `data` classified correctly.
    pub fn accuracy(&self, data: &Subset<'_>) -> Result<f64> {
        Ok(self.correct(data)? as f64 / data.len() as f64)
    }

    pub fn correct(&self, data: &Subset<'_>) -> Result<usize> {
        let mut n = 0;
        for (row, y) in data.iter() {
            if self.predict(row)?.class == y {
                n += 1;
            }
        }
        Ok(n)
    }
}
