//! Exact-arithmetic workbench for partial randomness.
//!
//! The library models the finite, checkable core of randomness-by-measure
//! versus randomness-by-complexity:
//!
//! * [`premeasure`]: pre-measures on finite sets of binary strings
//!   (weight sums, counting measures, mixtures, the star transform),
//!   evaluated exactly in dyadic arithmetic.
//! * [`rules`]: finite complexity functions and decidable rules over them,
//!   with the strength preorder, norms, and shifted unions.
//! * [`modes`]: description modes (the machine-table view of complexity)
//!   and the hat transform into complexity-function rules.
//! * [`duality`]: the two square-root operators converting a pre-measure
//!   into a rule and a rule into a pre-measure, plus the brute-force
//!   verifiers for their round-trip sandwich and dual-pair bounds.
//! * [`levin_schnorr`]: the constructive conversions between test families
//!   and complexity witnesses, universal-test merging, and deficiency
//!   profiles of finite sequences.
//!
//! Every value is an exact dyadic rational; there is no floating point
//! anywhere in the crate. All types are immutable and all operations pure,
//! so everything is safe to use from any number of threads.

pub mod dyadic;
pub mod duality;
pub mod error;
pub mod fixtures;
pub mod levin_schnorr;
pub mod modes;
#[cfg(feature = "oracles")]
pub mod oracles;
pub mod parse;
pub mod premeasure;
pub mod report;
pub mod rules;
pub mod strings;
pub mod suite;
pub mod witness;

pub use dyadic::Dyadic;
pub use error::Error;
pub use levin_schnorr::{DeficiencyProfile, TestFamily};
pub use modes::{Mode, ModeRuleSpec};
pub use premeasure::{HSpec, PreMeasureSpec, TreeFamily};
pub use report::{CheckReport, ReportLine};
pub use rules::{FiniteComplexity, RuleSpec};
pub use strings::{BinaryString, StringSet};
