//! Witness generators for concrete bit sequences.
//!
//! Both strategies emit pairs only at power-of-two prefix lengths and pad
//! the code length with `2*ceil(log2 n) + 3` bits, so the total kp budget
//! is at most `sum over k of 2^(-2k-3) = 1/6 < 1`, so the emitted witness is
//! always a strict member of the prefix-weight rule with `h = length`.
//!
//! * `runlength` emits a pair for a constant prefix (a run of one bit).
//! * `blockcode(b)` emits `ceil(n * H) + 2*ceil(log2 n) + 3` where `H` is
//!   the empirical per-symbol entropy of the prefix's length-`b` blocks,
//!   rounded up to a multiple of 1/64. The rounding is computed exactly in
//!   integer arithmetic: `64 H_block >= k*b` iff
//!   `N^(64N) >= 2^(k*b*N) * prod over blocks of c^(64c)`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::Error;
use crate::rules::FiniteComplexity;
use crate::strings::BinaryString;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessStrategy {
    RunLength,
    BlockCode { block: usize },
}

impl fmt::Display for WitnessStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessStrategy::RunLength => write!(f, "runlength"),
            WitnessStrategy::BlockCode { block } => write!(f, "blockcode:{block}"),
        }
    }
}

/// `ceil(log2 n)` for `n >= 1`.
fn ceil_log2(n: usize) -> u32 {
    (n as u64).next_power_of_two().trailing_zeros()
}

/// The padding that keeps the total weight strictly below 1.
fn padding(n: usize) -> i64 {
    2 * ceil_log2(n) as i64 + 3
}

pub fn generate_witness(
    x: &BinaryString,
    strategy: &WitnessStrategy,
) -> Result<FiniteComplexity, Error> {
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut out = FiniteComplexity::new();
    let mut n = 1usize;
    while n <= x.len() {
        let prefix = x.prefix(n);
        match strategy {
            WitnessStrategy::RunLength => {
                let constant = prefix.bits().iter().all(|&b| b == prefix.bits()[0]);
                if constant {
                    out.insert(prefix, padding(n));
                }
            }
            WitnessStrategy::BlockCode { block } => {
                let m = entropy_ceil_64ths(&prefix, *block);
                // ceil(n * m / 64) in integers.
                let coded = (n as i64 * m + 63) / 64;
                out.insert(prefix, coded + padding(n));
            }
        }
        n *= 2;
    }
    Ok(out)
}

/// `ceil(64 * H)` where `H` is the empirical per-symbol entropy of the
/// length-`block` blocks of `x` (entropy of the block distribution divided
/// by the block length). Sequences shorter than one block carry no data and
/// read as zero. Exact: the comparison `64 H <= k` is decided on integers.
pub fn entropy_ceil_64ths(x: &BinaryString, block: usize) -> i64 {
    assert!(block >= 1, "block length must be positive");
    let n_blocks = x.len() / block;
    if n_blocks == 0 {
        return 0;
    }
    let mut counts: HashMap<&[bool], u64> = HashMap::new();
    for i in 0..n_blocks {
        *counts.entry(&x.bits()[i * block..(i + 1) * block]).or_insert(0) += 1;
    }
    let n = BigUint::from(n_blocks as u64);
    // lhs = N^(64N); rhs(k) = 2^(k*b*N) * prod c^(64c).
    let lhs = n.pow(64 * n_blocks as u32);
    let mut prod = BigUint::one();
    for &c in counts.values() {
        prod *= BigUint::from(c).pow(64 * c as u32);
    }
    // Smallest k in 0..=64 with 64*H <= k; monotone, so binary search.
    let holds = |k: u32| -> bool { lhs <= (&prod << (k as u64 * block as u64 * n_blocks as u64)) };
    let (mut lo, mut hi) = (0u32, 64u32);
    debug_assert!(holds(64), "per-symbol entropy cannot exceed 1");
    while lo < hi {
        let mid = (lo + hi) / 2;
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo as i64
}
