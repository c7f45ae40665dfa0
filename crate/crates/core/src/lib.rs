//! Anti-learnable datasets and the machinery to demonstrate anti-learning.
//!
//! The crate builds three synthetic binary datasets on which locality-driven
//! learners score reproducibly *below* chance on held-out data: a Sylvester
//! Hadamard matrix, a pyramid-aggregated 8-bit XOR and a randomly aggregated
//! XOR. It ships three from-scratch classifiers (Bernoulli/Gaussian naive
//! Bayes, an SMO-trained SVM and a backprop MLP) and a cross-validation
//! harness that sweeps the fold count from coarse k-fold up to leave-one-out.
//!
//! Everything here is pure computation over `alloc`; file formats, parallel
//! scheduling and the command line live in the `antilearn` crate.
//!
//! ```
//! use antilearn_core::data::xor::pyramid_xor_dataset;
//! use antilearn_core::harness::{evaluate_cv, make_folds};
//! use antilearn_core::learners::ClassifierSpec;
//!
//! let ds = pyramid_xor_dataset();
//! let plan = make_folds(ds.len(), ds.len(), ds.labels(), 7, true).unwrap();
//! let cell = evaluate_cv(&ClassifierSpec::naive_bayes(), &ds, &plan, false).unwrap();
//! assert_eq!(cell.mean_val_acc, 0.0);
//! ```

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod data;
mod error;
pub mod harness;
pub mod learners;
pub(crate) mod math;

pub use data::{BinaryDataset, Encoding, Subset};
pub use error::{Error, Result};
