//! Pre-measures as evaluable specifications.
//!
//! A pre-measure assigns every finite string set an exact dyadic value and
//! satisfies three axioms: it vanishes on the empty set, it is monotone
//! under inclusion, and it is finitely subadditive. The four built-in
//! families, all parameterized by a length-like function `h`:
//!
//! ```text
//! dwt_h(F) = sum over sigma in F of 2^-h(sigma)           (weight sum)
//! pwt_h(F) = max of dwt_h over prefix-free subsets of F   (antichain weight)
//! dct_h(F) = max over n of |{sigma : h(sigma) < n}| / 2^n (counting)
//! pct_h(F) = max of dct_h over prefix-free subsets of F   (antichain count)
//! ```
//!
//! On a prefix-free set the p-variants coincide with their d-counterparts.
//! Specifications are closed under pointwise sum and min, finite tree
//! mixtures, the star transform (cheapest prefix cover), and the
//! square-root of a rule (see [`crate::duality`]).

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::dyadic::Dyadic;
use crate::error::Error;
use crate::report::CheckReport;
use crate::rules::RuleSpec;
use crate::strings::{BinaryString, StringSet};

/// A total, recursive length-like function `h` on binary strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HSpec {
    /// `h(sigma) = |sigma|`.
    Length,
    /// `h(sigma) = ceil(num * |sigma| / den)`.
    Scaled { num: u32, den: u32 },
    /// An explicit table; must be total on every string it is asked about.
    Table {
        name: String,
        map: BTreeMap<BinaryString, u32>,
    },
}

impl HSpec {
    pub fn scaled(num: u32, den: u32) -> Self {
        assert!(den > 0, "scaled h needs a positive denominator");
        HSpec::Scaled { num, den }
    }

    pub fn value(&self, s: &BinaryString) -> Result<u32, Error> {
        match self {
            HSpec::Length => Ok(s.len() as u32),
            HSpec::Scaled { num, den } => {
                let n = *num as u64 * s.len() as u64;
                Ok(n.div_ceil(*den as u64) as u32)
            }
            HSpec::Table { map, .. } => {
                map.get(s).copied().ok_or_else(|| Error::MissingH(s.clone()))
            }
        }
    }
}

impl fmt::Display for HSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HSpec::Length => write!(f, "len"),
            HSpec::Scaled { num, den } => write!(f, "scaled:{num}/{den}"),
            HSpec::Table { name, .. } => write!(f, "table:{name}"),
        }
    }
}

/// An ordered finite list of prefix-closed trees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeFamily {
    name: String,
    trees: Vec<StringSet>,
}

impl TreeFamily {
    /// Validates that every tree is prefix-closed (a nonempty prefix-closed
    /// set necessarily contains the empty string).
    pub fn new(name: impl Into<String>, trees: Vec<StringSet>) -> Result<Self, Error> {
        for (index, t) in trees.iter().enumerate() {
            if !is_prefix_closed(t) {
                return Err(Error::TreeNotClosed { index });
            }
        }
        Ok(TreeFamily {
            name: name.into(),
            trees,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &StringSet> {
        self.trees.iter()
    }

    /// Parses the block format: lines of strings under `[tree <i>]` headers.
    /// Missing indices are empty trees.
    pub fn parse(name: &str, text: &str) -> Result<Self, Error> {
        let blocks = parse_indexed_blocks(name, text, "tree")?;
        let max = blocks.keys().max().copied();
        let mut trees = Vec::new();
        if let Some(max) = max {
            for i in 0..=max {
                trees.push(blocks.get(&i).cloned().unwrap_or_default());
            }
        }
        TreeFamily::new(name, trees)
    }
}

/// Parses `[<keyword> <i>]` block files shared by tree and test families.
pub(crate) fn parse_indexed_blocks(
    name: &str,
    text: &str,
    keyword: &str,
) -> Result<BTreeMap<usize, StringSet>, Error> {
    let mut blocks: BTreeMap<usize, StringSet> = BTreeMap::new();
    let mut current: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::FileFormat {
            file: name.to_string(),
            line: idx + 1,
            msg,
        };
        if let Some(inner) = line.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| err("unterminated block header".into()))?;
            let rest = inner
                .strip_prefix(keyword)
                .ok_or_else(|| err(format!("expected \"[{keyword} <i>]\" header")))?;
            let i: usize = rest
                .trim()
                .parse()
                .map_err(|_| err(format!("bad index in \"[{}]\"", inner)))?;
            blocks.entry(i).or_default();
            current = Some(i);
            continue;
        }
        let i = current.ok_or_else(|| err(format!("string before any [{keyword} <i>] header")))?;
        let s: BinaryString = line.parse().map_err(err)?;
        blocks.get_mut(&i).unwrap().insert(s);
    }
    Ok(blocks)
}

/// True iff every prefix of every member is itself a member.
pub fn is_prefix_closed(t: &StringSet) -> bool {
    t.iter().all(|s| s.prefixes().all(|p| t.contains(&p)))
}

/// A closed description of a pre-measure, evaluable on any finite set.
#[derive(Debug, Clone, PartialEq)]
pub enum PreMeasureSpec {
    Dwt(HSpec),
    Pwt(HSpec),
    Dct(HSpec),
    Pct(HSpec),
    Sum(Box<PreMeasureSpec>, Box<PreMeasureSpec>),
    Min(Box<PreMeasureSpec>, Box<PreMeasureSpec>),
    /// Truncated mixture `sum over i of 2^-i * [F meets tree i]`.
    TreeMixture(TreeFamily),
    /// Cheapest value of the inner measure over prefix covers of `F`.
    Star(Box<PreMeasureSpec>),
    /// The square-root pre-measure of a rule (cheapest rule-element cover).
    RuleSqrt { rule: Box<RuleSpec>, cap: u32 },
}

impl PreMeasureSpec {
    pub fn star(self) -> Self {
        PreMeasureSpec::Star(Box::new(self))
    }

    pub fn rule_sqrt(rule: RuleSpec, cap: u32) -> Self {
        PreMeasureSpec::RuleSqrt {
            rule: Box::new(rule),
            cap,
        }
    }

    /// Rewrites the exponent cap on every square-root node in the tree.
    pub fn set_sqrt_caps(&mut self, new_cap: u32) {
        match self {
            PreMeasureSpec::Dwt(_)
            | PreMeasureSpec::Pwt(_)
            | PreMeasureSpec::Dct(_)
            | PreMeasureSpec::Pct(_)
            | PreMeasureSpec::TreeMixture(_) => {}
            PreMeasureSpec::Sum(a, b) | PreMeasureSpec::Min(a, b) => {
                a.set_sqrt_caps(new_cap);
                b.set_sqrt_caps(new_cap);
            }
            PreMeasureSpec::Star(m) => m.set_sqrt_caps(new_cap),
            PreMeasureSpec::RuleSqrt { rule, cap } => {
                *cap = new_cap;
                rule.set_sqrt_caps(new_cap);
            }
        }
    }

    /// Exact evaluation. The only failure modes are a partial h-table and
    /// resource caps inside square-root evaluation.
    pub fn eval(&self, f: &StringSet) -> Result<Dyadic, Error> {
        match self {
            PreMeasureSpec::Dwt(h) => {
                let mut total = Dyadic::zero();
                for s in f.iter() {
                    total = &total + &Dyadic::pow2(-(h.value(s)? as i64));
                }
                Ok(total)
            }
            PreMeasureSpec::Pwt(h) => {
                max_antichain_weight(f, |s| Ok(Dyadic::pow2(-(h.value(s)? as i64))))
            }
            PreMeasureSpec::Dct(h) => {
                let values = h_values(h, f)?;
                Ok(count_measure(&values))
            }
            PreMeasureSpec::Pct(h) => {
                let values = h_values(h, f)?;
                let Some(&max_h) = values.values().max() else {
                    return Ok(Dyadic::zero());
                };
                let mut best = Dyadic::zero();
                for n in 0..=(max_h as i64 + 1) {
                    let level: StringSet = f
                        .iter()
                        .filter(|s| (values[*s] as i64) < n)
                        .cloned()
                        .collect();
                    let count = max_antichain_weight(&level, |_| Ok(Dyadic::one()))?;
                    best = best.max(count.scale_pow2(-n));
                }
                Ok(best)
            }
            PreMeasureSpec::Sum(a, b) => Ok(&a.eval(f)? + &b.eval(f)?),
            PreMeasureSpec::Min(a, b) => Ok(a.eval(f)?.min(b.eval(f)?)),
            PreMeasureSpec::TreeMixture(family) => {
                let mut total = Dyadic::zero();
                for (i, tree) in family.iter().enumerate() {
                    if f.iter().any(|s| tree.contains(s)) {
                        total = &total + &Dyadic::pow2(-(i as i64));
                    }
                }
                Ok(total)
            }
            PreMeasureSpec::Star(inner) => star_eval(inner, f),
            PreMeasureSpec::RuleSqrt { rule, cap } => {
                crate::duality::sqrt_premeasure_eval(rule, f, *cap)
            }
        }
    }
}

impl fmt::Display for PreMeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PreMeasureSpec::Dwt(h) => write!(f, "dwt({h})"),
            PreMeasureSpec::Pwt(h) => write!(f, "pwt({h})"),
            PreMeasureSpec::Dct(h) => write!(f, "dct({h})"),
            PreMeasureSpec::Pct(h) => write!(f, "pct({h})"),
            PreMeasureSpec::Sum(a, b) => write!(f, "sum({a},{b})"),
            PreMeasureSpec::Min(a, b) => write!(f, "min({a},{b})"),
            PreMeasureSpec::TreeMixture(t) => write!(f, "mixture:{}", t.name()),
            PreMeasureSpec::Star(m) => write!(f, "star({m})"),
            PreMeasureSpec::RuleSqrt { rule, .. } => write!(f, "rsqrt({rule})"),
        }
    }
}

fn h_values<'a>(
    h: &HSpec,
    f: &'a StringSet,
) -> Result<BTreeMap<&'a BinaryString, u32>, Error> {
    f.iter().map(|s| Ok((s, h.value(s)?))).collect()
}

/// `max over n of count(h < n) * 2^-n`. Past `n = 1 + max h` the count is
/// frozen at `|F|` while `2^-n` keeps shrinking, so the scan is exhaustive.
fn count_measure(values: &BTreeMap<&BinaryString, u32>) -> Dyadic {
    let Some(&max_h) = values.values().max() else {
        return Dyadic::zero();
    };
    let mut best = Dyadic::zero();
    for n in 0..=(max_h as i64 + 1) {
        let count = values.values().filter(|&&v| (v as i64) < n).count();
        best = best.max(Dyadic::from_nat(count as u64).scale_pow2(-n));
    }
    best
}

/// Maximum total weight of a prefix-free subset, by dynamic programming on
/// the prefix trie: at every node either take the node's own weight or the
/// best of its two subtrees. Weights must be non-negative (they are powers
/// of two here), which is what makes the greedy subtree sum valid.
pub(crate) fn max_antichain_weight(
    f: &StringSet,
    weight: impl Fn(&BinaryString) -> Result<Dyadic, Error>,
) -> Result<Dyadic, Error> {
    fn best(
        node: &BinaryString,
        f: &StringSet,
        weight: &impl Fn(&BinaryString) -> Result<Dyadic, Error>,
    ) -> Result<Dyadic, Error> {
        let own = if f.contains(node) {
            weight(node)?
        } else {
            Dyadic::zero()
        };
        let has_descendant = f
            .iter()
            .any(|s| node.is_prefix_of(s) && s.len() > node.len());
        if !has_descendant {
            return Ok(own);
        }
        let below = &best(&node.append(false), f, weight)? + &best(&node.append(true), f, weight)?;
        Ok(own.max(below))
    }
    if f.is_empty() {
        return Ok(Dyadic::zero());
    }
    best(&BinaryString::empty(), f, &weight)
}

/// Star transform: minimum of the inner measure over images of prefix-choice
/// functions. Each element of `F` picks one of its prefixes (itself allowed);
/// extraneous cover strings never help because the measure is monotone, so
/// choice images exhaust the infimum.
///
/// Images live inside the prefix closure of `F`, so they are enumerated as
/// bitmasks over it, with per-element dedup of partial images.
fn star_eval(inner: &PreMeasureSpec, f: &StringSet) -> Result<Dyadic, Error> {
    let closure: Vec<BinaryString> = f.prefix_closure().iter().cloned().collect();
    assert!(closure.len() <= 64, "star transform limited to small closures");
    let index_of = |s: &BinaryString| closure.iter().position(|c| c == s).unwrap();
    // For each element, the closure indices of its prefixes.
    let choices: Vec<Vec<usize>> = f
        .iter()
        .map(|s| s.prefixes().map(|p| index_of(&p)).collect())
        .collect();

    let mut images: HashSet<u64> = HashSet::new();
    let mut seen: HashSet<(usize, u64)> = HashSet::new();
    let mut stack: Vec<(usize, u64)> = vec![(0, 0)];
    while let Some((idx, image)) = stack.pop() {
        if !seen.insert((idx, image)) {
            continue;
        }
        if idx == choices.len() {
            images.insert(image);
            continue;
        }
        for &p in &choices[idx] {
            stack.push((idx + 1, image | (1u64 << p)));
        }
    }

    let mut best: Option<Dyadic> = None;
    for image in images {
        let set: StringSet = closure
            .iter()
            .enumerate()
            .filter(|(i, _)| image & (1 << i) != 0)
            .map(|(_, s)| s.clone())
            .collect();
        let v = inner.eval(&set)?;
        best = Some(match best {
            None => v,
            Some(b) => b.min(v),
        });
    }
    Ok(best.unwrap_or_else(Dyadic::zero))
}

/// Exhaustively verifies the three pre-measure axioms over all subsets of
/// `u` with at most `k_max` elements. Violations are report content, not
/// errors; only evaluation itself can fail.
pub fn check_premeasure_axioms(
    id: &str,
    eval: &mut dyn FnMut(&StringSet) -> Result<Dyadic, Error>,
    u: &StringSet,
    k_max: usize,
) -> Result<CheckReport, Error> {
    let mut report = CheckReport::new(id);
    let elements: Vec<&BinaryString> = u.iter().collect();
    assert!(elements.len() <= 32, "axiom sweep limited to 32 elements");
    let set_of = |mask: u32| -> StringSet {
        elements
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, s)| (*s).clone())
            .collect()
    };

    // All subsets with at most k_max elements, as bitmasks; unions repeat
    // massively across pairs, so every evaluated mask is cached.
    let mut masks: Vec<u32> = Vec::new();
    let mut stack: Vec<(u32, usize, usize)> = vec![(0, 0, 0)];
    while let Some((mask, start, size)) = stack.pop() {
        masks.push(mask);
        if size == k_max {
            continue;
        }
        for i in start..elements.len() {
            stack.push((mask | (1 << i), i + 1, size + 1));
        }
    }
    masks.sort_unstable();
    let mut cache: HashMap<u32, Dyadic> = HashMap::new();
    for &mask in &masks {
        cache.insert(mask, eval(&set_of(mask))?);
    }

    let zero = &cache[&0];
    if zero.is_zero() {
        report.ok(1);
    } else {
        report.fail(vec![
            ("axiom".into(), "empty-zero".into()),
            ("value".into(), zero.to_string()),
        ]);
    }

    for &m1 in &masks {
        let v1 = cache[&m1].clone();
        for &m2 in &masks {
            // Monotonicity on nested pairs.
            if m1 & m2 == m1 {
                let v2 = &cache[&m2];
                if &v1 > v2 {
                    report.fail(vec![
                        ("axiom".into(), "monotone".into()),
                        ("f1".into(), set_of(m1).to_string()),
                        ("f2".into(), set_of(m2).to_string()),
                        ("m1".into(), v1.to_string()),
                        ("m2".into(), v2.to_string()),
                    ]);
                    continue;
                }
            }
            // Subadditivity on every pair.
            let union = m1 | m2;
            let vu = match cache.get(&union) {
                Some(v) => v.clone(),
                None => {
                    let v = eval(&set_of(union))?;
                    cache.insert(union, v.clone());
                    v
                }
            };
            let bound = &v1 + &cache[&m2];
            if vu > bound {
                report.fail(vec![
                    ("axiom".into(), "subadditive".into()),
                    ("f1".into(), set_of(m1).to_string()),
                    ("f2".into(), set_of(m2).to_string()),
                    ("m_union".into(), vu.to_string()),
                    ("m_sum".into(), bound.to_string()),
                ]);
            } else {
                report.ok(1);
            }
        }
    }

    Ok(report)
}
