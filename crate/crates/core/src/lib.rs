//! Missingness DAGs and the validity checks for complete-records analysis,
//! multiple imputation, and multiple imputation within a subsample.
//!
//! ```
//! use mdag::{analyze, dsl, VerdictStatus};
//!
//! let g = dsl::parse(r#"
//!     dag "example" {
//!       node X { status: incomplete, role: exposure }
//!       node Y { status: incomplete, role: outcome }
//!       X -> Y
//!       X -> R[Y]
//!       target: Y ~ X
//!     }
//! "#).unwrap();
//!
//! let report = analyze(&g);
//! assert_eq!(report.cra.status, VerdictStatus::Unbiased);
//! assert_eq!(report.full_mi.status, VerdictStatus::PossiblyBiased);
//! assert!(report.has_unbiased_strategy());
//! ```

pub mod catalog;
pub mod dsep;
pub mod dsl;
pub mod graph;
pub mod validity;

pub use dsl::{parse, serialize, ParseError};
pub use graph::{AnalysisSpec, BuildError, Endpoint, MDag, NodeId, NodeKind, Role, Status, VariableDecl};
pub use validity::{analyze, analyze_with, StrategyReport, SubsampleSpec, Verdict, VerdictStatus};

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/m-dags.md")]
    struct MDags;
    #[doc = include_str!("../../../book/src/dsl.md")]
    struct Dsl;
    #[doc = include_str!("../../../book/src/d-separation.md")]
    struct DSeparation;
    #[doc = include_str!("../../../book/src/validity.md")]
    struct Validity;
    #[doc = include_str!("../../../book/src/subsamples.md")]
    struct Subsamples;
}
