//! Diverse ensembles of linear max-margin classifiers.
//!
//! Components `(w_c, b_c)` are trained jointly under a squared hinge (or
//! hinge) loss and the exclusivity regularizer `½‖Wᵀ‖₁,₂²`, which penalizes
//! components that put weight on the same features. The ensemble predicts
//! with the averaged weights.
//!
//! - [`dataset`]: sparse text I/O, label mapping and reproducible splits
//! - [`diversity`]: exclusivity measures and the regularizer
//! - [`solver`]: the augmented Lagrangian trainer and its block updates
//! - [`model`]: prediction, losses and the model file format
//! - [`oracle`]: slow independent reference solvers used for verification

pub mod dataset;
pub mod diversity;
mod error;
pub mod linalg;
pub mod model;
pub mod oracle;
mod rows;
pub mod solver;

pub use dataset::{DataSet, SplitSpec};
pub use diversity::DiversityReport;
pub use error::{Result, XrmError};
pub use model::{EnsembleModel, ModelFile};
pub use solver::{train, SolverConfig, SolverState, TrainReport};
