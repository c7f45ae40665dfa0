use alloc::boxed::Box;
use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("hadamard order 2^{exponent} exceeds the size cap of {cap}")]
    SizeLimit { exponent: u32, cap: usize },

    #[error("a hadamard dataset needs order >= 2; order 1 has no feature columns")]
    NoFeatureColumns,

    #[error("variable `{0}` is not bound in the assignment")]
    UnboundVariable(char),

    #[error("xor expression parse error at byte {position}: {message}")]
    ExprParse { position: usize, message: String },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("training set is empty")]
    EmptyTrainingSet,

    #[error("training set contains only class {0}; both classes are required")]
    SingleClass(u8),

    #[error("feature width mismatch: model expects {expected}, got {found}")]
    WidthMismatch { expected: usize, found: usize },

    #[error("invalid hyperparameter: {0}")]
    InvalidParameter(String),

    #[error("SMO did not converge after {passes} passes")]
    NonConvergence { passes: usize },

    #[error("training diverged (non-finite loss) in epoch {epoch}")]
    Divergence { epoch: usize },

    #[error("fold count {k} out of range for {m} samples (need 2 <= k <= m)")]
    FoldRange { k: usize, m: usize },

    #[error("fold plan covers {plan} samples but the dataset has {samples}")]
    PlanMismatch { plan: usize, samples: usize },

    #[error("fold {fold}: {source}")]
    Fold {
        fold: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn in_fold(self, fold: usize) -> Self {
        Error::Fold {
            fold,
            source: Box::new(self),
        }
    }
}
