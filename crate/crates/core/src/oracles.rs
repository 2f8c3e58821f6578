//! Brute-force reference implementations (the `oracles` feature).
//!
//! These deliberately naive routines exist to cross-check the production
//! algorithms and must stay independent of them: membership by the literal
//! all-subsets quantifier, and the square-root pre-measure by enumerating
//! every cover family instead of set partitions.

use crate::duality::{e_max, EMax};
use crate::dyadic::Dyadic;
use crate::error::Error;
use crate::premeasure::PreMeasureSpec;
use crate::rules::{FiniteComplexity, RuleSpec};
use crate::strings::{BinaryString, StringSet};

/// Literal membership in `m^sqrt`: every subset `s` of `r` satisfies
/// `m(ring(s)) <= 2^-||s||`. Exponential in `|r|`.
pub fn naive_sqrt_rule_member(m: &PreMeasureSpec, r: &FiniteComplexity) -> Result<bool, Error> {
    let pairs: Vec<(BinaryString, i64)> = r.iter().cloned().collect();
    assert!(pairs.len() <= 20, "naive subset oracle limited to 20 pairs");
    for mask in 0u32..(1u32 << pairs.len()) {
        let s = FiniteComplexity::from_pairs(
            pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, p)| p.clone()),
        );
        let Some(v) = s.norm() else { continue };
        if m.eval(&s.ring())?.cmp_pow2(-v) == std::cmp::Ordering::Greater {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Literal `R^sqrt(F)`: minimum cost over every family of distinct
/// nonempty subsets of `F` whose union is `F`, each block at its best
/// uniform exponent. Doubly exponential in `|F|`.
pub fn naive_sqrt_premeasure_eval(
    rule: &RuleSpec,
    f: &StringSet,
    cap: u32,
) -> Result<Dyadic, Error> {
    if f.is_empty() {
        return Ok(Dyadic::zero());
    }
    let elements: Vec<&BinaryString> = f.iter().collect();
    let n = elements.len();
    assert!(n <= 4, "naive cover oracle limited to 4 elements");

    // Pre-compute each nonempty block's exponent.
    let mut block_cost: Vec<Option<Dyadic>> = vec![None; 1 << n];
    for mask in 1usize..(1 << n) {
        let block: StringSet = elements
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, s)| (*s).clone())
            .collect();
        block_cost[mask] = match e_max(rule, &block, cap)? {
            EMax::Bounded(e) => Some(Dyadic::pow2(-e)),
            EMax::AtCap => {
                return Err(Error::ExponentCap {
                    cap,
                    block: block.to_string(),
                    at_cap: true,
                })
            }
            EMax::NoneWithinCap => None,
        };
    }

    let full = (1usize << n) - 1;
    let mut best: Option<Dyadic> = None;
    // Every family of distinct nonempty blocks: one bit per block.
    for family in 1u64..(1u64 << full) {
        let mut union = 0usize;
        let mut cost = Dyadic::zero();
        let mut feasible = true;
        for mask in 1usize..=full {
            if family & (1 << (mask - 1)) == 0 {
                continue;
            }
            match &block_cost[mask] {
                Some(c) => {
                    union |= mask;
                    cost = &cost + c;
                }
                None => {
                    feasible = false;
                    break;
                }
            }
        }
        if feasible && union == full {
            best = Some(match best {
                None => cost,
                Some(b) => b.min(cost),
            });
        }
    }
    best.ok_or_else(|| Error::ExponentCap {
        cap,
        block: f.to_string(),
        at_cap: false,
    })
}
