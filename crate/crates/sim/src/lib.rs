//! Monte Carlo checks for complete records analysis, multiple imputation and
//! subsample multiple imputation under known missingness mechanisms.
//!
//! ```
//! use mdag_sim::{run_study, Method, StudyConfig};
//!
//! let mut config = StudyConfig::new("fig1b").unwrap();
//! config.reps = 4;
//! config.n = 200;
//! config.m = 3;
//! config.methods = vec![Method::Cra, Method::subsample(["Y"])];
//! let result = run_study(&config).unwrap();
//! assert_eq!(result.methods.len(), 2);
//! assert_eq!(result.methods[0].failures, 0);
//! ```

use thiserror::Error;

pub mod data;
pub mod dgp;
pub mod impute;
pub mod method;
pub mod ols;
pub mod pool;
pub mod study;

pub use data::{quantile, Column, Dataset};
pub use dgp::{builtin, generate, DgpSpec, SIMULABLE, TRUE_BETA};
pub use impute::{impute_fcs, ImputationModel};
pub use method::{run_method, AnalysisModel, Method};
pub use ols::{fit_ols, Estimate};
pub use pool::{pool_rubin, Pooled};
pub use study::{default_methods, run_study, MethodResult, StudyConfig, StudyResult};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("no simulation mechanism for scenario `{0}` (available: {list})", list = SIMULABLE.join(", "))]
    UnknownScenario(String),
    #[error("unknown method `{0}` (expected cra, full_mi, full_data or sub(V,...))")]
    UnknownMethod(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid mechanism: {0}")]
    InvalidSpec(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{rows} usable rows, at least {needed} needed")]
    InsufficientRows { rows: usize, needed: usize },
    #[error("design matrix is rank deficient")]
    RankDeficient,
    #[error("`{0}` has no observed values")]
    NoObservedValues(String),
    #[error("no rows with {0} all observed")]
    EmptySubsample(String),
    #[error("{method}: {failures} of {reps} replications failed (first error: {first})")]
    TooManyFailures { method: String, failures: usize, reps: usize, first: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/simulation.md")]
struct Guide;
