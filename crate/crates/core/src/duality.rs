//! The two square-root operators and their round-trip verifiers.
//!
//! A pre-measure `m` induces a rule and a rule `R` induces a pre-measure:
//!
//! ```text
//! m^sqrt      = { r : m(ring(s)) <= 2^-||s|| for every s inside r }
//! R^sqrt(F)   = inf { 2^-||r_1|| + ... + 2^-||r_l|| :
//!                     r_i in R, F covered by ring(r_1) ... ring(r_l) }
//! ```
//!
//! Membership in `m^sqrt` is decided by level sets: for each realized norm
//! level `v` of `r`, the pairs at level >= v form the worst subset of that
//! norm, so checking `m` of their ring against `2^-v` is equivalent to the
//! all-subsets quantifier (monotonicity of `m` does the rest).
//!
//! `R^sqrt` is computed over set partitions of `F` with uniform witnesses:
//! any cover element `r` can be replaced by `uniform(ring(r) ∩ F, ||r||)`,
//! which is weaker than `r` (hence still in `R`) and has the same norm, and
//! shrinking a block never raises its cost, so partitions of `F` into
//! uniform blocks exhaust the infimum. The exponent search is capped; a
//! block still viable at the cap is surfaced as an error, never truncated
//! silently.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use itertools::Itertools;

use crate::dyadic::Dyadic;
use crate::error::Error;
use crate::premeasure::{check_premeasure_axioms, PreMeasureSpec};
use crate::report::CheckReport;
use crate::rules::{
    check_rule_axioms_exhaustive, uniform, FiniteComplexity, RuleCheckConfig, RuleSpec,
    SampleSpace,
};
use crate::strings::{BinaryString, StringSet};

/// Hard limit on set-partition enumeration (Bell-number growth).
pub const MAX_PARTITION_SET: usize = 8;

/// Default exponent cap for square-root evaluations.
pub const DEFAULT_CAP: u32 = 32;

/// Enumerates the set partitions of `{0, ..., n-1}` as restricted-growth
/// strings in canonical order (deterministic witness reporting relies on
/// this order). Results are computed once per `n` and shared.
pub fn partitions(n: usize) -> Result<&'static [Vec<usize>], Error> {
    static CACHE: std::sync::OnceLock<Vec<Vec<Vec<usize>>>> = std::sync::OnceLock::new();
    if n > MAX_PARTITION_SET {
        return Err(Error::PartitionLimit {
            size: n,
            max: MAX_PARTITION_SET,
        });
    }
    let all = CACHE.get_or_init(|| (0..=MAX_PARTITION_SET).map(enumerate_rgs).collect());
    Ok(&all[n])
}

fn enumerate_rgs(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut rgs = vec![0usize; n];
    loop {
        out.push(rgs.clone());
        // Advance: rightmost position that may grow by one.
        let mut i = n;
        loop {
            if i <= 1 {
                return out;
            }
            i -= 1;
            let max_prefix = rgs[..i].iter().copied().max().unwrap();
            if rgs[i] <= max_prefix {
                rgs[i] += 1;
                for slot in rgs.iter_mut().skip(i + 1) {
                    *slot = 0;
                }
                break;
            }
        }
    }
}

/// Groups positions by their restricted-growth label.
pub fn blocks_of(rgs: &[usize]) -> Vec<Vec<usize>> {
    let count = rgs.iter().copied().max().map_or(0, |m| m + 1);
    let mut blocks = vec![Vec::new(); count];
    for (pos, &label) in rgs.iter().enumerate() {
        blocks[label].push(pos);
    }
    blocks
}

/// Outcome of the bounded search for the largest viable uniform exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EMax {
    /// The largest `e` in `[-cap, cap)` with `uniform(G, e)` in the rule.
    Bounded(i64),
    /// Membership still holds at `e = cap`; the true supremum may be larger.
    AtCap,
    /// Membership fails everywhere down to `e = -cap`.
    NoneWithinCap,
}

/// Largest `e` with `|e| <= cap` such that `uniform(g, e)` belongs to the
/// rule, scanning downward from the cap. Downward closure of rules makes
/// membership monotone in `e`, but the literal scan needs no such premise.
pub fn e_max(rule: &RuleSpec, g: &StringSet, cap: u32) -> Result<EMax, Error> {
    let cap = cap as i64;
    for e in (-cap..=cap).rev() {
        if rule.member(&uniform(g, e))? {
            return Ok(if e == cap {
                EMax::AtCap
            } else {
                EMax::Bounded(e)
            });
        }
    }
    Ok(EMax::NoneWithinCap)
}

/// Evaluates `R^sqrt` with a memo of block exponents that survives across
/// calls. Sweeps that evaluate many overlapping sets against one rule reuse
/// one evaluator; one-shot callers go through [`sqrt_premeasure_eval`].
pub struct SqrtEvaluator<'a> {
    rule: &'a RuleSpec,
    cap: u32,
    memo: HashMap<StringSet, EMax>,
}

impl<'a> SqrtEvaluator<'a> {
    pub fn new(rule: &'a RuleSpec, cap: u32) -> Self {
        SqrtEvaluator {
            rule,
            cap,
            memo: HashMap::new(),
        }
    }

    /// Memoized `e_max`; a block still viable at the cap is an error here
    /// because its cost would silently underestimate the infimum.
    pub fn block_e(&mut self, block: &StringSet) -> Result<EMax, Error> {
        if let Some(e) = self.memo.get(block) {
            return Ok(*e);
        }
        let e = e_max(self.rule, block, self.cap)?;
        if e == EMax::AtCap {
            return Err(Error::ExponentCap {
                cap: self.cap,
                block: block.to_string(),
                at_cap: true,
            });
        }
        self.memo.insert(block.clone(), e);
        Ok(e)
    }

    /// `R^sqrt(F)`: minimum over set partitions of `F` of the summed block
    /// costs `2^-e_max(block)`. Empty input is 0. Errors on sets beyond the
    /// partition limit and on capped blocks.
    pub fn eval(&mut self, f: &StringSet) -> Result<Dyadic, Error> {
        if f.is_empty() {
            return Ok(Dyadic::zero());
        }
        let elements: Vec<&BinaryString> = f.iter().collect();
        let n = elements.len();
        if n > MAX_PARTITION_SET {
            return Err(Error::PartitionLimit {
                size: n,
                max: MAX_PARTITION_SET,
            });
        }
        // Resolve every nonempty sub-block once; the partition scan is then
        // pure index arithmetic.
        let mut block_table: Vec<Option<EMax>> = vec![None; 1 << n];
        for mask in 1usize..(1 << n) {
            let set: StringSet = elements
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, s)| (*s).clone())
                .collect();
            block_table[mask] = Some(self.block_e(&set)?);
        }
        let mut best: Option<Dyadic> = None;
        for rgs in partitions(n)? {
            let block_count = rgs.iter().copied().max().unwrap() + 1;
            let mut masks = vec![0usize; block_count];
            for (pos, &label) in rgs.iter().enumerate() {
                masks[label] |= 1 << pos;
            }
            let mut cost = Dyadic::zero();
            let mut feasible = true;
            for mask in masks {
                match block_table[mask].unwrap() {
                    EMax::Bounded(e) => cost = &cost + &Dyadic::pow2(-e),
                    EMax::NoneWithinCap => {
                        feasible = false;
                        break;
                    }
                    EMax::AtCap => unreachable!("surfaced as an error above"),
                }
            }
            if feasible {
                best = Some(match best {
                    None => cost,
                    Some(b) => b.min(cost),
                });
            }
        }
        best.ok_or_else(|| Error::ExponentCap {
            cap: self.cap,
            block: f.to_string(),
            at_cap: false,
        })
    }

    /// Membership of `r` in `(R^sqrt)^sqrt` via the level-set criterion.
    pub fn double_sqrt_member(&mut self, r: &FiniteComplexity) -> Result<bool, Error> {
        sqrt_rule_member_by(&mut |f| self.eval(f), r)
    }
}

/// One-shot `R^sqrt(F)`.
pub fn sqrt_premeasure_eval(rule: &RuleSpec, f: &StringSet, cap: u32) -> Result<Dyadic, Error> {
    SqrtEvaluator::new(rule, cap).eval(f)
}

/// Membership of `r` in `m^sqrt` via the level-set criterion.
pub fn sqrt_rule_member(m: &PreMeasureSpec, r: &FiniteComplexity) -> Result<bool, Error> {
    sqrt_rule_member_by(&mut |f| m.eval(f), r)
}

/// The level-set criterion against an arbitrary measure evaluation: for
/// every realized norm level `v`, the ring of the pairs at level `>= v`
/// must have measure at most `2^-v`. Rings of level sets only depend on
/// the minimal graph.
fn sqrt_rule_member_by(
    eval: &mut dyn FnMut(&StringSet) -> Result<Dyadic, Error>,
    r: &FiniteComplexity,
) -> Result<bool, Error> {
    let graph = r.graph();
    let mut by_level: BTreeMap<i64, Vec<BinaryString>> = BTreeMap::new();
    for (s, d) in graph.iter() {
        by_level
            .entry(s.len() as i64 - d)
            .or_default()
            .push(s.clone());
    }
    let mut ring = StringSet::new();
    for (&v, strings) in by_level.iter().rev() {
        for s in strings {
            ring.insert(s.clone());
        }
        if eval(&ring)?.cmp_pow2(-v) == std::cmp::Ordering::Greater {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Round-trip check that the square roots of well-formed objects satisfy
/// the pre-measure and rule axioms respectively: `R^sqrt` passes the
/// pre-measure battery over `u`, and `m^sqrt` passes the rule battery over
/// the sample space.
pub fn check_prop7(
    m: &PreMeasureSpec,
    rule: &RuleSpec,
    u: &StringSet,
    k_max: usize,
    space: &SampleSpace,
    cap: u32,
    cfg: &RuleCheckConfig,
) -> Result<Vec<CheckReport>, Error> {
    let mut evaluator = SqrtEvaluator::new(rule, cap);
    let premeasure_side = check_premeasure_axioms(
        &format!("prop7-premeasure rsqrt({rule})"),
        &mut |f| evaluator.eval(f),
        u,
        k_max,
    )?;
    let msqrt = RuleSpec::measure_sqrt(m.clone());
    let rule_side = check_rule_axioms_exhaustive(
        &format!("prop7-rule msqrt({m})"),
        &|r| msqrt.member(r),
        space,
        cfg,
    )?;
    Ok(vec![premeasure_side, rule_side])
}

/// Monotonicity of the square root in the measure: if `m <= 2^j * k` on all
/// tested sets, then every sampled member of `k^sqrt` lands in `m^sqrt`
/// after a `+j` shift. Both halves are checked and reported.
pub fn check_prop8(
    m: &PreMeasureSpec,
    k: &PreMeasureSpec,
    j: u32,
    sets: &[StringSet],
    samples: &[FiniteComplexity],
) -> Result<CheckReport, Error> {
    let mut report = CheckReport::new(format!("prop8 m={m} k={k} j={j}"));
    for f in sets {
        let vm = m.eval(f)?;
        let bound = k.eval(f)?.scale_pow2(j as i64);
        if vm > bound {
            report.fail(vec![
                ("part".into(), "premise".into()),
                ("f".into(), f.to_string()),
                ("m".into(), vm.to_string()),
                ("bound".into(), bound.to_string()),
            ]);
        } else {
            report.ok(1);
        }
    }
    for r in samples {
        if !sqrt_rule_member(k, r)? {
            report.ok(1);
            continue;
        }
        if sqrt_rule_member(m, &r.shift(j as i64))? {
            report.ok(1);
        } else {
            report.fail(vec![
                ("part".into(), "conclusion".into()),
                ("r".into(), r.to_string()),
            ]);
        }
    }
    Ok(report)
}

/// The sandwich `m <= m^sqrt^sqrt <= 2m` over all subsets of `u` with at
/// most `k_max` elements.
pub fn check_msqrtsqrt(
    m: &PreMeasureSpec,
    u: &StringSet,
    k_max: usize,
    cap: u32,
) -> Result<CheckReport, Error> {
    let mut report = CheckReport::new(format!("msqrtsqrt m={m}"));
    let rule = RuleSpec::measure_sqrt(m.clone());
    for f in u.subsets_up_to(k_max) {
        let lo = m.eval(&f)?;
        let mid = sqrt_premeasure_eval(&rule, &f, cap)?;
        let hi = lo.scale_pow2(1);
        if lo <= mid && mid <= hi {
            report.ok(1);
        } else {
            report.fail(vec![
                ("f".into(), f.to_string()),
                ("m".into(), lo.to_string()),
                ("msqrtsqrt".into(), mid.to_string()),
            ]);
        }
    }
    Ok(report)
}

/// `R` is contained in `R^sqrt^sqrt`, and every sampled member of
/// `R^sqrt^sqrt` is dominated by a rule element after a small downward
/// shift. The search uses shifted unions of uniform blocks over the ring;
/// the report carries the largest shift that was needed.
pub fn check_rsqrtsqrt(
    rule: &RuleSpec,
    samples: &[FiniteComplexity],
    cap: u32,
    c_search: i64,
) -> Result<CheckReport, Error> {
    let mut report = CheckReport::new(format!("rsqrtsqrt rule={rule}"));
    let mut evaluator = SqrtEvaluator::new(rule, cap);
    let mut max_c: i64 = 0;

    for r in samples {
        let in_rule = rule.member(r)?;
        let in_double = evaluator.double_sqrt_member(r)?;
        if in_rule && !in_double {
            report.fail(vec![
                ("part".into(), "inclusion".into()),
                ("r".into(), r.to_string()),
            ]);
            continue;
        }
        report.ok(1);

        if !in_double || r.is_empty() {
            continue;
        }
        // Witness search: cover ring(r) by uniform blocks at their best
        // exponents, combine with the shifted union in every block order,
        // and take the cheapest shift c with r ≺ t^{-c}.
        let ring: Vec<BinaryString> = r.ring().iter().cloned().collect();
        let mut least: Option<i64> = None;
        for rgs in partitions(ring.len())? {
            let blocks = blocks_of(rgs);
            let mut uniforms = Vec::with_capacity(blocks.len());
            let mut viable = true;
            for block in &blocks {
                let set: StringSet = block.iter().map(|&i| ring[i].clone()).collect();
                match evaluator.block_e(&set)? {
                    EMax::Bounded(e) => uniforms.push(uniform(&set, e)),
                    _ => {
                        viable = false;
                        break;
                    }
                }
            }
            if !viable {
                continue;
            }
            for order in (0..uniforms.len()).permutations(uniforms.len()) {
                let arranged: Vec<FiniteComplexity> =
                    order.iter().map(|&i| uniforms[i].clone()).collect();
                let t = crate::rules::union_shift(&arranged);
                let mut needed: i64 = 0;
                let mut covered = true;
                for (sigma, d) in r.graph().iter() {
                    match t.k_of(sigma) {
                        Some(kt) => needed = needed.max(kt - d),
                        None => {
                            covered = false;
                            break;
                        }
                    }
                }
                if covered {
                    least = Some(least.map_or(needed.max(0), |l: i64| l.min(needed.max(0))));
                }
            }
        }
        match least {
            Some(c) if c <= c_search => {
                max_c = max_c.max(c);
                report.ok(1);
            }
            _ => {
                report.fail(vec![
                    ("part".into(), "witness".into()),
                    ("r".into(), r.to_string()),
                    (
                        "least_c".into(),
                        least.map_or("none".into(), |c| c.to_string()),
                    ),
                ]);
            }
        }
    }
    report.note("max_c", max_c);
    Ok(report)
}

/// An exact non-negative ratio of dyadics, compared by cross-multiplication.
#[derive(Debug, Clone)]
pub struct Ratio {
    pub num: Dyadic,
    pub den: Dyadic,
}

impl Ratio {
    pub fn new(num: Dyadic, den: Dyadic) -> Self {
        assert!(!den.is_zero(), "ratio denominator must be nonzero");
        Ratio { num, den }
    }

    pub fn le_nat(&self, c: u64) -> bool {
        self.num <= self.den.clone() * Dyadic::from_nat(c)
    }

    /// Exact dyadic value when the denominator's odd part divides the
    /// numerator's.
    pub fn as_dyadic(&self) -> Option<Dyadic> {
        if self.num.is_zero() {
            return Some(Dyadic::zero());
        }
        let (a, b) = (self.num.mantissa(), self.den.mantissa());
        if (a % b) == num_traits::Zero::zero() {
            Some(Dyadic::new(a / b, self.num.exponent() - self.den.exponent()))
        } else {
            None
        }
    }

    /// The least `k` with `self <= 2^k`.
    pub fn pow2_upper(&self) -> i64 {
        assert!(!self.num.is_zero(), "pow2 bound of a zero ratio");
        let guess = self.num.ceil_log2().unwrap() - self.den.exponent()
            - (self.den.mantissa().bits() as i64 - 1);
        for k in (guess - 2)..=(guess + 2) {
            if self.num <= self.den.scale_pow2(k) {
                return k;
            }
        }
        unreachable!("pow2 bound must be within two of the bit-length estimate")
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.num.clone() * other.den.clone() == other.num.clone() * self.den.clone()
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some((self.num.clone() * other.den.clone()).cmp(&(other.num.clone() * self.den.clone())))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_dyadic() {
            Some(d) => write!(f, "{d}"),
            None => write!(f, "{}/{}<=2^{}", self.num, self.den, self.pow2_upper()),
        }
    }
}

/// Outcome of a dual-pair sweep: the extreme ratios in both directions and
/// any set where exactly one side vanished (direct duality violations).
#[derive(Debug, Clone)]
pub struct DualRatioReport {
    pub measure_over_sqrt: Option<Ratio>,
    pub sqrt_over_measure: Option<Ratio>,
    pub zero_mismatches: Vec<(StringSet, Dyadic, Dyadic)>,
    pub sets_checked: u64,
}

impl DualRatioReport {
    /// Flattens into a pass/fail report; `bound` is the acceptance ceiling
    /// for both ratios when given.
    pub fn to_check_report(&self, id: &str, bound: Option<u64>) -> CheckReport {
        let mut report = CheckReport::new(id);
        report.ok(self.sets_checked);
        for (f, mv, rv) in &self.zero_mismatches {
            report.fail(vec![
                ("kind".into(), "zero-mismatch".into()),
                ("f".into(), f.to_string()),
                ("m".into(), mv.to_string()),
                ("rsqrt".into(), rv.to_string()),
            ]);
        }
        for (name, ratio) in [
            ("m_over_rsqrt", &self.measure_over_sqrt),
            ("rsqrt_over_m", &self.sqrt_over_measure),
        ] {
            match ratio {
                Some(r) => {
                    report.note(name, r);
                    if let Some(b) = bound {
                        if !r.le_nat(b) {
                            report.fail(vec![
                                ("kind".into(), "ratio-bound".into()),
                                ("ratio".into(), name.into()),
                                ("value".into(), r.to_string()),
                                ("bound".into(), b.to_string()),
                            ]);
                        }
                    }
                }
                None => report.note(name, "none"),
            }
        }
        report
    }
}

/// Sweeps all nonempty subsets of `u` up to `k_max`, comparing the measure
/// against the square root of the rule.
pub fn dual_ratio(
    m: &PreMeasureSpec,
    rule: &RuleSpec,
    u: &StringSet,
    k_max: usize,
    cap: u32,
) -> Result<DualRatioReport, Error> {
    let mut out = DualRatioReport {
        measure_over_sqrt: None,
        sqrt_over_measure: None,
        zero_mismatches: Vec::new(),
        sets_checked: 0,
    };
    let mut evaluator = SqrtEvaluator::new(rule, cap);
    for f in u.subsets_up_to(k_max) {
        if f.is_empty() {
            continue;
        }
        out.sets_checked += 1;
        let mv = m.eval(&f)?;
        let rv = evaluator.eval(&f)?;
        match (mv.is_zero(), rv.is_zero()) {
            (true, true) => continue,
            (true, false) | (false, true) => {
                out.zero_mismatches.push((f, mv, rv));
                continue;
            }
            (false, false) => {}
        }
        let forward = Ratio::new(mv.clone(), rv.clone());
        if out
            .measure_over_sqrt
            .as_ref()
            .is_none_or(|best| forward > *best)
        {
            out.measure_over_sqrt = Some(forward);
        }
        let backward = Ratio::new(rv, mv);
        if out
            .sqrt_over_measure
            .as_ref()
            .is_none_or(|best| backward > *best)
        {
            out.sqrt_over_measure = Some(backward);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::premeasure::HSpec;
    use crate::strings::universe;

    fn bs(s: &str) -> BinaryString {
        s.parse().unwrap()
    }

    fn set(items: &[&str]) -> StringSet {
        items.iter().map(|s| bs(s)).collect()
    }

    fn fc(pairs: &[(&str, i64)]) -> FiniteComplexity {
        FiniteComplexity::from_pairs(pairs.iter().map(|(s, d)| (bs(s), *d)))
    }

    fn dy(m: u64, e: i64) -> Dyadic {
        Dyadic::new(m.into(), e)
    }

    #[test]
    fn partition_counts_are_bell_numbers() {
        let bell = [1usize, 1, 2, 5, 15, 52, 203, 877, 4140];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(partitions(n).unwrap().len(), b, "B({n})");
        }
        assert!(partitions(MAX_PARTITION_SET + 1).is_err());
    }

    #[test]
    fn partition_order_is_canonical() {
        let ps = partitions(3).unwrap();
        assert_eq!(ps[0], vec![0, 0, 0]);
        assert_eq!(ps.last().unwrap(), &vec![0, 1, 2]);
    }

    #[test]
    fn sqrt_rule_member_examples() {
        let m = PreMeasureSpec::Dwt(HSpec::Length);
        assert!(sqrt_rule_member(&m, &fc(&[("0", 0)])).unwrap());
        assert!(!sqrt_rule_member(&m, &fc(&[("0", -1)])).unwrap());
        assert!(sqrt_rule_member(&m, &FiniteComplexity::new()).unwrap());
    }

    #[test]
    fn level_sets_match_full_subset_quantifier() {
        // Independent oracle: the literal all-subsets definition.
        let naive = |m: &PreMeasureSpec, r: &FiniteComplexity| -> bool {
            let pairs: Vec<(BinaryString, i64)> = r.iter().cloned().collect();
            for mask in 0u32..(1 << pairs.len()) {
                let s = FiniteComplexity::from_pairs(
                    pairs
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, p)| p.clone()),
                );
                if s.is_empty() {
                    continue;
                }
                let v = s.norm().unwrap();
                if m.eval(&s.ring()).unwrap().cmp_pow2(-v) == std::cmp::Ordering::Greater {
                    return false;
                }
            }
            true
        };
        let m = PreMeasureSpec::Dwt(HSpec::Length);
        let space = SampleSpace::new(&universe(1).unwrap(), -2, 2, 3);
        space
            .for_each_sample(|r| {
                assert_eq!(
                    sqrt_rule_member(&m, r).unwrap(),
                    naive(&m, r),
                    "disagrees on {r}"
                );
                Ok(())
            })
            .unwrap();
    }

    #[test]
    fn e_max_examples() {
        let kp = RuleSpec::Kp(HSpec::Length);
        assert_eq!(e_max(&kp, &set(&["00"]), 8).unwrap(), EMax::Bounded(1));
        assert_eq!(e_max(&kp, &set(&["0"]), 8).unwrap(), EMax::Bounded(0));
        assert_eq!(e_max(&kp, &set(&["00", "01"]), 8).unwrap(), EMax::Bounded(0));
        // The empty block is a member at any exponent.
        assert_eq!(e_max(&kp, &set(&[]), 8).unwrap(), EMax::AtCap);
    }

    #[test]
    fn sqrt_premeasure_examples() {
        let kp = RuleSpec::Kp(HSpec::Length);
        assert_eq!(
            sqrt_premeasure_eval(&kp, &set(&["0"]), 8).unwrap(),
            Dyadic::one()
        );
        assert_eq!(
            sqrt_premeasure_eval(&kp, &set(&["00", "01"]), 8).unwrap(),
            Dyadic::one()
        );
        assert_eq!(
            sqrt_premeasure_eval(&kp, &set(&[]), 8).unwrap(),
            Dyadic::zero()
        );
    }

    #[test]
    fn sqrt_premeasure_is_monotone() {
        let ka = RuleSpec::Ka(HSpec::Length);
        let subs = universe(2).unwrap().subsets_up_to(3);
        for f1 in &subs {
            for f2 in &subs {
                if f1.is_subset(f2) {
                    assert!(
                        sqrt_premeasure_eval(&ka, f1, 8).unwrap()
                            <= sqrt_premeasure_eval(&ka, f2, 8).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn msqrtsqrt_spot_value_and_sandwich() {
        let m = PreMeasureSpec::Dwt(HSpec::Length);
        let rule = RuleSpec::measure_sqrt(m.clone());
        assert_eq!(
            sqrt_premeasure_eval(&rule, &set(&["0"]), 8).unwrap(),
            dy(1, -1)
        );
        for m in [
            m,
            PreMeasureSpec::Pwt(HSpec::scaled(1, 2)),
            PreMeasureSpec::Dwt(HSpec::Length).star(),
        ] {
            let report = check_msqrtsqrt(&m, &universe(2).unwrap(), 3, 8).unwrap();
            assert!(report.pass(), "{report}");
        }
    }

    #[test]
    fn prop7_square_roots_satisfy_both_axiom_sets() {
        let m = PreMeasureSpec::Dwt(HSpec::Length);
        let kp = RuleSpec::Kp(HSpec::Length);
        let u = universe(1).unwrap();
        let space = SampleSpace::new(&u, -1, 2, 2);
        let cfg = RuleCheckConfig {
            union_pair_budget: 50_000,
            lemma1_budget: 2_000,
            seed: 5,
        };
        for report in check_prop7(&m, &kp, &u, 2, &space, 8, &cfg).unwrap() {
            assert!(report.pass(), "{report}");
        }
    }

    #[test]
    fn prop8_identity_and_sum_cases() {
        let m = PreMeasureSpec::Dwt(HSpec::Length);
        let sets = universe(1).unwrap().subsets_up_to(2);
        let space = SampleSpace::new(&universe(1).unwrap(), -1, 2, 2);
        let samples = space.collect_samples();
        let identity = check_prop8(&m, &m, 0, &sets, &samples).unwrap();
        assert!(identity.pass(), "{identity}");

        let doubled = PreMeasureSpec::Sum(Box::new(m.clone()), Box::new(m.clone()));
        let sum_case = check_prop8(&doubled, &m, 1, &sets, &samples).unwrap();
        assert!(sum_case.pass(), "{sum_case}");

        // Scaled h dominates plain length weights from length 2 onward, so
        // with j = 0 both the premise and the conclusion fail.
        let scaled = PreMeasureSpec::Dwt(HSpec::scaled(1, 2));
        let wide_sets = universe(2).unwrap().subsets_up_to(2);
        let wide_space = SampleSpace::new(&universe(2).unwrap(), -1, 2, 2);
        let fail_case =
            check_prop8(&scaled, &m, 0, &wide_sets, &wide_space.collect_samples()).unwrap();
        assert!(!fail_case.pass());
    }

    #[test]
    fn rsqrtsqrt_inclusion_and_witness_constant() {
        let kp = RuleSpec::Kp(HSpec::Length);
        let space = SampleSpace::new(&universe(1).unwrap(), -1, 2, 2);
        let samples = space.collect_samples();
        let report = check_rsqrtsqrt(&kp, &samples, 8, 4).unwrap();
        assert!(report.pass(), "{report}");
        // A shift of 3 always suffices here; the measured value is 2.
        let max_c: i64 = report
            .info()
            .iter()
            .find(|(k, _)| k == "max_c")
            .unwrap()
            .1
            .parse()
            .unwrap();
        assert!(max_c <= 3, "witness constant crept up to {max_c}");
    }

    #[test]
    fn dual_ratio_for_the_weight_pair() {
        let m = PreMeasureSpec::Dwt(HSpec::Length);
        let kp = RuleSpec::Kp(HSpec::Length);
        let out = dual_ratio(&m, &kp, &universe(2).unwrap(), 3, 8).unwrap();
        assert!(out.zero_mismatches.is_empty());
        // The strict inequality in kp makes R^sqrt exactly 2*dwt on
        // singletons, so the backward ratio peaks at 2.
        let back = out.sqrt_over_measure.unwrap();
        assert_eq!(back.as_dyadic().unwrap(), dy(1, 1));
        let fwd = out.measure_over_sqrt.unwrap();
        assert!(fwd.le_nat(1));
    }

    #[test]
    fn dual_ratio_flags_mismatched_pairs() {
        // dwt against the counting rule: the ratio grows with the universe,
        // which is exactly the non-duality evidence the report surfaces.
        let m = PreMeasureSpec::Dwt(HSpec::Length);
        let ks = RuleSpec::Ks(HSpec::Length);
        let small = dual_ratio(&m, &ks, &universe(2).unwrap(), 3, 8).unwrap();
        let large = dual_ratio(&m, &ks, &universe(3).unwrap(), 4, 8).unwrap();
        let (s, l) = (
            small.measure_over_sqrt.unwrap(),
            large.measure_over_sqrt.unwrap(),
        );
        assert!(l > s, "ratio should grow: {s} -> {l}");
    }

    #[test]
    fn ratio_arithmetic() {
        let r = Ratio::new(dy(3, 0), dy(1, 1)); // 3/2: dyadic
        assert!(r.le_nat(2));
        assert!(!r.le_nat(1));
        assert_eq!(r.as_dyadic(), Some(dy(3, -1)));
        assert_eq!(r.pow2_upper(), 1);
        let exact = Ratio::new(dy(3, 0), dy(3, -2));
        assert_eq!(exact.as_dyadic().unwrap(), dy(1, 2));
        let third = Ratio::new(dy(1, 0), dy(3, 0)); // 1/3: not dyadic
        assert_eq!(third.as_dyadic(), None);
        assert_eq!(third.pow2_upper(), -1);
        assert!(third.le_nat(1));
        assert_eq!(third.to_string(), "1*2^0/3*2^0<=2^-1");
    }
}
