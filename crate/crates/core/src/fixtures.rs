//! Shared fixtures for the verifiers and the property suite.

use std::collections::BTreeMap;

use crate::dyadic::Dyadic;
use crate::premeasure::{HSpec, TreeFamily};
use crate::rules::FiniteComplexity;
use crate::strings::{universe, BinaryString, StringSet};

/// `m(F) = |F|^2 * 2^-3`: monotone and empty-zero but not subadditive
/// (two singletons give 4/8 against 1/8 + 1/8).
pub fn broken_premeasure(f: &StringSet) -> Dyadic {
    Dyadic::from_nat((f.len() * f.len()) as u64).scale_pow2(-3)
}

/// "At most two pairs": not a rule; the shifted union of two two-pair
/// members already escapes.
pub fn broken_rule(r: &FiniteComplexity) -> bool {
    r.len() <= 2
}

/// A total h-table on `universe(3)`: length almost everywhere, with a few
/// deliberate bumps so the table disagrees with both built-in shapes.
pub fn h_table_fixture() -> HSpec {
    let mut map: BTreeMap<BinaryString, u32> = BTreeMap::new();
    for s in universe(3).expect("cap").iter() {
        map.insert(s.clone(), s.len() as u32);
    }
    let bump = |map: &mut BTreeMap<BinaryString, u32>, key: &str, v: u32| {
        map.insert(key.parse().unwrap(), v);
    };
    bump(&mut map, "@", 2);
    bump(&mut map, "01", 0);
    bump(&mut map, "110", 5);
    bump(&mut map, "000", 1);
    HSpec::Table {
        name: "fixture".into(),
        map,
    }
}

/// Three trees: the full depth-3 tree, one spine, one empty.
pub fn tree_family_fixture() -> TreeFamily {
    let full = universe(3).expect("cap");
    let spine: StringSet = ["@", "0", "00", "000"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    TreeFamily::new("fixture", vec![full, spine, StringSet::new()])
        .expect("fixture trees are prefix-closed")
}
