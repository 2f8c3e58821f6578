use thiserror::Error;

use crate::strings::BinaryString;

/// Errors shared across the workbench.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An h-table was consulted for a string it does not define.
    #[error("h is not defined on \"{0}\"")]
    MissingH(BinaryString),

    /// `universe(n)` was asked for more than the configured cap allows.
    #[error("universe of depth {requested} exceeds the cap of {cap}")]
    UniverseCap { requested: u32, cap: u32 },

    /// A square-root evaluation needed exponents beyond `[-cap, cap]`.
    ///
    /// `at_cap = true` means membership still held at `e = cap` (the true
    /// infimum may lie beyond the cap); `at_cap = false` means membership
    /// failed everywhere down to `e = -cap`. Either way the value is
    /// surfaced instead of silently truncated.
    #[error("e_max search hit the exponent cap {cap} on {block} (at_cap: {at_cap})")]
    ExponentCap {
        cap: u32,
        block: String,
        at_cap: bool,
    },

    /// Set-partition enumeration was asked for a set beyond the hard limit.
    #[error("partition enumeration over {size} elements exceeds the limit of {max}")]
    PartitionLimit { size: usize, max: usize },

    /// A witness-mode search was inconclusive: no witness exists with
    /// descriptions below the bound, but required lengths exceed it.
    #[error("mode search bound {bound} is too small (a witness would need descriptions up to {needed})")]
    SearchBound { bound: usize, needed: i64 },

    /// A tree in a tree family is missing one of its members' prefixes.
    #[error("tree {index} is not prefix-closed")]
    TreeNotClosed { index: usize },

    /// A witness generator was handed an empty sequence.
    #[error("input sequence is empty")]
    EmptyInput,

    /// A line-oriented input file did not match its format.
    #[error("{file} line {line}: {msg}")]
    FileFormat {
        file: String,
        line: usize,
        msg: String,
    },

    /// An expression failed to parse; `offset` is a byte position in the input.
    #[error("parse error at offset {offset}: {msg}")]
    Expr { offset: usize, msg: String },
}
