//! Description modes: the machine-table view of complexity.
//!
//! A mode is a finite set of (description, output) pairs; its complexity is
//! `K^M(sigma) = min { |tau| : (tau, sigma) in M }`. Two mode rules are
//! instantiated: `prefix_free` (the description set is prefix-free and no
//! description names two outputs) and `plain` (functional only). Both
//! contain the empty mode, are closed under subsets, and are closed under
//! the bit-prefixed combination of two modes.
//!
//! The hat transform `r -> {(sigma, |tau|) : (tau, sigma) in r}` carries a
//! mode rule to a complexity-function rule; membership in the transformed
//! rule is decided here by an exhaustive bounded search for a witnessing
//! mode.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::Error;
use crate::rules::FiniteComplexity;
use crate::strings::{BinaryString, StringSet};

/// A finite set of (description, output) pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Mode {
    pairs: BTreeSet<(BinaryString, BinaryString)>,
}

impl Mode {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (BinaryString, BinaryString)>) -> Self {
        Mode {
            pairs: pairs.into_iter().collect(),
        }
    }

    pub fn insert(&mut self, desc: BinaryString, output: BinaryString) {
        self.pairs.insert((desc, output));
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(BinaryString, BinaryString)> {
        self.pairs.iter()
    }

    pub fn descriptions(&self) -> StringSet {
        self.pairs.iter().map(|(t, _)| t.clone()).collect()
    }

    pub fn outputs(&self) -> StringSet {
        self.pairs.iter().map(|(_, s)| s.clone()).collect()
    }

    pub fn max_desc_len(&self) -> usize {
        self.pairs.iter().map(|(t, _)| t.len()).max().unwrap_or(0)
    }

    /// Parses lines `<desc> <output>` with `@` for the empty string.
    pub fn parse(name: &str, text: &str) -> Result<Self, Error> {
        let mut out = Mode::new();
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
            let mut tokens = line.split_whitespace();
            let (t, s) = match (tokens.next(), tokens.next(), tokens.next()) {
                (Some(t), Some(s), None) => (t, s),
                _ => return Err(err("expected \"<desc> <output>\"".into())),
            };
            out.insert(t.parse().map_err(&err)?, s.parse().map_err(&err)?);
        }
        Ok(out)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (t, s)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}->{s}")?;
        }
        write!(f, "}}")
    }
}

/// The two instantiated mode rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeRuleSpec {
    /// Prefix-free description set, one output per description.
    PrefixFree,
    /// One output per description.
    Plain,
}

impl ModeRuleSpec {
    pub fn member(&self, m: &Mode) -> bool {
        let functional = {
            let mut seen: BTreeSet<&BinaryString> = BTreeSet::new();
            m.iter().all(|(t, _)| seen.insert(t))
        };
        match self {
            ModeRuleSpec::Plain => functional,
            ModeRuleSpec::PrefixFree => functional && m.descriptions().is_prefix_free(),
        }
    }
}

impl fmt::Display for ModeRuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeRuleSpec::PrefixFree => write!(f, "prefix_free"),
            ModeRuleSpec::Plain => write!(f, "plain"),
        }
    }
}

/// `K^M(sigma)`: the shortest description length, `None` meaning infinity.
pub fn mode_k(m: &Mode, sigma: &BinaryString) -> Option<usize> {
    m.iter()
        .filter(|(_, s)| s == sigma)
        .map(|(t, _)| t.len())
        .min()
}

/// The bit-prefixed combination `{(0 tau, sigma) : r} ∪ {(1 tau, sigma) : s}`.
pub fn mode_combine(r: &Mode, s: &Mode) -> Mode {
    let mut out = Mode::new();
    for (t, sigma) in r.iter() {
        out.insert(t.prepend(false), sigma.clone());
    }
    for (t, sigma) in s.iter() {
        out.insert(t.prepend(true), sigma.clone());
    }
    out
}

/// The hat transform into a finite complexity.
pub fn hat(r: &Mode) -> FiniteComplexity {
    FiniteComplexity::from_pairs(r.iter().map(|(t, s)| (s.clone(), t.len() as i64)))
}

/// Membership of `s` in the hat transform of a mode rule: does some mode
/// with descriptions of length at most `max_desc_len` satisfy the rule and
/// dominate `s` through the hat transform?
///
/// The search assigns one description per needed output, shortest candidates
/// first, with backtracking; below the bound it is exhaustive, so `Ok(false)`
/// is definitive. When no witness exists below the bound but some required
/// length exceeds it, the inconclusive case is reported as an error instead.
pub fn hat_rule_member(
    rule: ModeRuleSpec,
    s: &FiniteComplexity,
    max_desc_len: usize,
) -> Result<bool, Error> {
    if s.is_empty() {
        return Ok(true);
    }
    // One description per distinct output, at the tightest requested length.
    let graph = s.graph();
    let mut needs: Vec<(BinaryString, i64)> = graph.iter().cloned().collect();
    if needs.iter().any(|(_, d)| *d < 0) {
        // No description has negative length.
        return Ok(false);
    }
    let truncated = needs.iter().any(|(_, d)| *d > max_desc_len as i64);
    // Most constrained outputs first.
    needs.sort_by_key(|(_, d)| *d);

    fn candidates(limit: usize) -> Vec<BinaryString> {
        let mut out = vec![BinaryString::empty()];
        let mut layer = vec![BinaryString::empty()];
        for _ in 0..limit {
            let mut next = Vec::new();
            for s in &layer {
                for bit in [false, true] {
                    let t = s.append(bit);
                    out.push(t.clone());
                    next.push(t);
                }
            }
            layer = next;
        }
        out
    }

    fn compatible(rule: ModeRuleSpec, chosen: &[BinaryString], t: &BinaryString) -> bool {
        match rule {
            ModeRuleSpec::Plain => chosen.iter().all(|c| c != t),
            ModeRuleSpec::PrefixFree => chosen
                .iter()
                .all(|c| !c.is_prefix_of(t) && !t.is_prefix_of(c)),
        }
    }

    fn search(
        rule: ModeRuleSpec,
        needs: &[(BinaryString, i64)],
        max_desc_len: usize,
        chosen: &mut Vec<BinaryString>,
    ) -> bool {
        let Some((_, d)) = needs.get(chosen.len()) else {
            return true;
        };
        let limit = (*d).min(max_desc_len as i64) as usize;
        for t in candidates(limit) {
            if compatible(rule, chosen, &t) {
                chosen.push(t);
                if search(rule, needs, max_desc_len, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    let mut chosen = Vec::new();
    if search(rule, &needs, max_desc_len, &mut chosen) {
        return Ok(true);
    }
    if truncated {
        return Err(Error::SearchBound {
            bound: max_desc_len,
            needed: needs.iter().map(|(_, d)| *d).max().unwrap(),
        });
    }
    Ok(false)
}
