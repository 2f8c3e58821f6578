//! Finite binary strings and finite string sets.
//!
//! Strings are words over `{0,1}`; the empty string is a first-class value
//! and serializes as `@` in every line-oriented format (blank lines are
//! fragile). Sets are canonically ordered by length then lexicographically,
//! so iteration order, and therefore every report, is deterministic.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Maximum depth `universe` will enumerate.
pub const UNIVERSE_CAP: u32 = 12;

/// A finite word over `{0,1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BinaryString {
    bits: Vec<bool>,
}

impl BinaryString {
    pub fn empty() -> Self {
        BinaryString { bits: Vec::new() }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BinaryString { bits }
    }

    /// `n` copies of `bit`.
    pub fn repeated(bit: bool, n: usize) -> Self {
        BinaryString {
            bits: vec![bit; n],
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// The length-`n` initial segment. Panics if `n > len`.
    pub fn prefix(&self, n: usize) -> BinaryString {
        BinaryString {
            bits: self.bits[..n].to_vec(),
        }
    }

    /// All initial segments, from the empty string up to the string itself.
    pub fn prefixes(&self) -> impl Iterator<Item = BinaryString> + '_ {
        (0..=self.len()).map(|n| self.prefix(n))
    }

    /// True iff `self` is an initial segment of `other` (equality allowed).
    pub fn is_prefix_of(&self, other: &BinaryString) -> bool {
        self.len() <= other.len() && self.bits == other.bits[..self.len()]
    }

    /// `bit` followed by `self`.
    pub fn prepend(&self, bit: bool) -> BinaryString {
        let mut bits = Vec::with_capacity(self.len() + 1);
        bits.push(bit);
        bits.extend_from_slice(&self.bits);
        BinaryString { bits }
    }

    /// `self` followed by `bit`.
    pub fn append(&self, bit: bool) -> BinaryString {
        let mut bits = self.bits.clone();
        bits.push(bit);
        BinaryString { bits }
    }
}

impl PartialOrd for BinaryString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BinaryString {
    /// Canonical order: by length, then lexicographic.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

impl fmt::Display for BinaryString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "@");
        }
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl FromStr for BinaryString {
    type Err = String;

    /// Accepts `@` for the empty string, otherwise a word over `{0,1}`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "@" {
            return Ok(BinaryString::empty());
        }
        if s.is_empty() {
            return Err("empty token (use \"@\" for the empty string)".into());
        }
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(format!("invalid character {c:?} in binary string")),
            }
        }
        Ok(BinaryString { bits })
    }
}

/// Free-function form of the prefix test: true iff `t` is a prefix of `s`.
pub fn is_prefix(t: &BinaryString, s: &BinaryString) -> bool {
    t.is_prefix_of(s)
}

/// A finite, duplicate-free set of binary strings in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct StringSet {
    members: BTreeSet<BinaryString>,
}

impl StringSet {
    pub fn new() -> Self {
        StringSet {
            members: BTreeSet::new(),
        }
    }

    pub fn singleton(s: BinaryString) -> Self {
        let mut members = BTreeSet::new();
        members.insert(s);
        StringSet { members }
    }

    pub fn insert(&mut self, s: BinaryString) {
        self.members.insert(s);
    }

    pub fn contains(&self, s: &BinaryString) -> bool {
        self.members.contains(s)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &BinaryString> {
        self.members.iter()
    }

    pub fn union(&self, other: &StringSet) -> StringSet {
        StringSet {
            members: self.members.union(&other.members).cloned().collect(),
        }
    }

    pub fn is_subset(&self, other: &StringSet) -> bool {
        self.members.is_subset(&other.members)
    }

    /// True iff no member is a proper or improper prefix of another member.
    pub fn is_prefix_free(&self) -> bool {
        // Distinct members only; canonical order puts prefixes first, but a
        // prefix of a later string need not be adjacent, so check all pairs.
        for a in &self.members {
            for b in &self.members {
                if a != b && a.is_prefix_of(b) {
                    return false;
                }
            }
        }
        true
    }

    /// All prefixes of all members (always prefix-closed).
    pub fn prefix_closure(&self) -> StringSet {
        let mut out = StringSet::new();
        for s in &self.members {
            for p in s.prefixes() {
                out.insert(p);
            }
        }
        out
    }

    /// All subsets with at most `k` elements, in canonical enumeration order.
    pub fn subsets_up_to(&self, k: usize) -> Vec<StringSet> {
        let items: Vec<&BinaryString> = self.members.iter().collect();
        let mut out = Vec::new();
        let mut current: Vec<usize> = Vec::new();
        fn rec(
            items: &[&BinaryString],
            k: usize,
            start: usize,
            current: &mut Vec<usize>,
            out: &mut Vec<StringSet>,
        ) {
            out.push(current.iter().map(|&i| items[i].clone()).collect());
            if current.len() == k {
                return;
            }
            for i in start..items.len() {
                current.push(i);
                rec(items, k, i + 1, current, out);
                current.pop();
            }
        }
        rec(&items, k, 0, &mut current, &mut out);
        out
    }
}

impl FromIterator<BinaryString> for StringSet {
    fn from_iter<T: IntoIterator<Item = BinaryString>>(iter: T) -> Self {
        StringSet {
            members: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for StringSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

/// All strings of length at most `max_len`; cardinality `2^(max_len+1) - 1`.
pub fn universe(max_len: u32) -> Result<StringSet, Error> {
    if max_len > UNIVERSE_CAP {
        return Err(Error::UniverseCap {
            requested: max_len,
            cap: UNIVERSE_CAP,
        });
    }
    let mut out = StringSet::new();
    let mut layer = vec![BinaryString::empty()];
    out.insert(BinaryString::empty());
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * 2);
        for s in &layer {
            for bit in [false, true] {
                let t = s.append(bit);
                out.insert(t.clone());
                next.push(t);
            }
        }
        layer = next;
    }
    Ok(out)
}

/// The covering preorder: every member of `a` extends some member of `b`.
pub fn covers(a: &StringSet, b: &StringSet) -> bool {
    a.iter()
        .all(|sigma| b.iter().any(|tau| tau.is_prefix_of(sigma)))
}

/// True iff some member of `a` is a prefix of `x`.
pub fn in_open(x: &BinaryString, a: &StringSet) -> bool {
    a.iter().any(|sigma| sigma.is_prefix_of(x))
}

/// Parses the string-set file format: one string per line, `@` for the empty
/// string, `#` starting a comment line; blank lines are skipped.
pub fn parse_string_lines(name: &str, text: &str) -> Result<Vec<BinaryString>, Error> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let s = line.parse::<BinaryString>().map_err(|msg| Error::FileFormat {
            file: name.to_string(),
            line: idx + 1,
            msg,
        })?;
        out.push(s);
    }
    Ok(out)
}

/// Parses a whole file into a set (duplicates collapse).
pub fn parse_string_set(name: &str, text: &str) -> Result<StringSet, Error> {
    Ok(parse_string_lines(name, text)?.into_iter().collect())
}
