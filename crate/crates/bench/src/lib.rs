//! Shared inputs for the criterion benches.

use partrand_core::premeasure::{HSpec, PreMeasureSpec};
use partrand_core::rules::{FiniteComplexity, RuleSpec};
use partrand_core::strings::{universe, BinaryString, StringSet};

/// A mid-size working set: all strings of length 3..=4.
pub fn deep_set() -> StringSet {
    universe(4)
        .expect("cap")
        .iter()
        .filter(|s| s.len() >= 3)
        .cloned()
        .collect()
}

/// The first `n` strings of `universe(3)` in canonical order.
pub fn prefix_set(n: usize) -> StringSet {
    universe(3).expect("cap").iter().take(n).cloned().collect()
}

/// A witness shaped like the generators' output: one pair per power of two.
pub fn geometric_witness(len: usize) -> FiniteComplexity {
    let x = BinaryString::repeated(false, len);
    let mut out = FiniteComplexity::new();
    let mut n = 1usize;
    while n <= len {
        let pad = 2 * (n as u64).next_power_of_two().trailing_zeros() as i64 + 3;
        out.insert(x.prefix(n), pad);
        n *= 2;
    }
    out
}

pub fn weight_measure() -> PreMeasureSpec {
    PreMeasureSpec::Dwt(HSpec::Length)
}

pub fn starred_measure() -> PreMeasureSpec {
    PreMeasureSpec::Dwt(HSpec::scaled(1, 2)).star()
}

pub fn weight_rule() -> RuleSpec {
    RuleSpec::Kp(HSpec::Length)
}

pub fn antichain_rule() -> RuleSpec {
    RuleSpec::Ka(HSpec::Length)
}
