//! Exact non-negative dyadic rationals `a * 2^e`.
//!
//! Every measure value in the workbench is a finite sum of powers of two, so
//! dyadics with an arbitrary-precision mantissa are closed under everything
//! we do: addition, multiplication, scaling by powers of two, min/max and
//! comparison. Keeping the arithmetic exact makes every `<= 2^-i` check
//! bit-reliable; no tolerance appears anywhere downstream.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// A non-negative dyadic rational in canonical form.
///
/// Canonical means the mantissa is odd or zero, and zero carries exponent 0.
/// Canonicalization happens on construction, so two equal values always
/// compare structurally equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigUint,
    exponent: i64,
}

impl Dyadic {
    /// Builds `mantissa * 2^exponent`, normalizing to canonical form.
    pub fn new(mantissa: BigUint, exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Dyadic {
                mantissa,
                exponent: 0,
            };
        }
        let shift = mantissa.trailing_zeros().unwrap_or(0);
        Dyadic {
            mantissa: mantissa >> shift,
            exponent: exponent + shift as i64,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigUint::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mantissa: BigUint::one(),
            exponent: 0,
        }
    }

    /// `2^e` for any integer `e` (negative exponents welcome).
    pub fn pow2(e: i64) -> Self {
        Dyadic {
            mantissa: BigUint::one(),
            exponent: e,
        }
    }

    pub fn from_nat(n: u64) -> Self {
        Dyadic::new(BigUint::from(n), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn mantissa(&self) -> &BigUint {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    /// Multiplies by `2^i` without touching the mantissa.
    pub fn scale_pow2(&self, i: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            mantissa: self.mantissa.clone(),
            exponent: self.exponent + i,
        }
    }

    /// Compares against `2^e` without allocating.
    ///
    /// A canonical nonzero value `a * 2^x` with `a` odd satisfies
    /// `2^(x+bits(a)-1) <= a * 2^x < 2^(x+bits(a))`, with equality on the left
    /// exactly when `a = 1`.
    pub fn cmp_pow2(&self, e: i64) -> Ordering {
        if self.is_zero() {
            return Ordering::Less;
        }
        let floor_log2 = self.exponent + (self.mantissa.bits() as i64 - 1);
        match floor_log2.cmp(&e) {
            Ordering::Less => Ordering::Less,
            Ordering::Greater => Ordering::Greater,
            Ordering::Equal => {
                if self.mantissa.is_one() {
                    Ordering::Equal
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    /// The least `k` with `self <= 2^k`, or `None` for zero.
    pub fn ceil_log2(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let floor_log2 = self.exponent + (self.mantissa.bits() as i64 - 1);
        if self.mantissa.is_one() {
            Some(floor_log2)
        } else {
            Some(floor_log2 + 1)
        }
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        // Align to the smaller exponent; shifts stay modest because exponents
        // in this workbench are within a few hundred of each other.
        let e = self.exponent.min(rhs.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &rhs.mantissa << (rhs.exponent - e) as u64;
        Dyadic::new(a + b, e)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;

    fn mul(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mantissa: &self.mantissa * &rhs.mantissa,
            exponent: self.exponent + rhs.exponent,
        }
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;

    fn mul(self, rhs: Dyadic) -> Dyadic {
        &self * &rhs
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        // Cheap magnitude pre-check before shifting anything.
        let la = self.exponent + self.mantissa.bits() as i64;
        let lb = other.exponent + other.mantissa.bits() as i64;
        if la != lb {
            return la.cmp(&lb);
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &other.mantissa << (other.exponent - e) as u64;
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

pub fn sum<'a>(values: impl IntoIterator<Item = &'a Dyadic>) -> Dyadic {
    values.into_iter().fold(Dyadic::zero(), |acc, v| &acc + v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dy(m: u64, e: i64) -> Dyadic {
        Dyadic::new(BigUint::from(m), e)
    }

    #[test]
    fn canonical_form() {
        let d = dy(12, -5); // 12*2^-5 = 3*2^-3
        assert_eq!(d.mantissa(), &BigUint::from(3u32));
        assert_eq!(d.exponent(), -3);
        let z = dy(0, 17);
        assert!(z.is_zero());
        assert_eq!(z.exponent(), 0);
    }

    #[test]
    fn add_and_compare() {
        let half = Dyadic::pow2(-1);
        let quarter = Dyadic::pow2(-2);
        assert_eq!(&half + &quarter, dy(3, -2));
        assert!(quarter < half);
        assert_eq!(&quarter + &quarter, half);
        assert_eq!(&Dyadic::zero() + &half, half);
    }

    #[test]
    fn cmp_pow2_matches_explicit() {
        for m in [0u64, 1, 3, 5, 8, 12, 255] {
            for e in -6i64..=6 {
                for p in -8i64..=8 {
                    let d = dy(m, e);
                    assert_eq!(d.cmp_pow2(p), d.cmp(&Dyadic::pow2(p)), "{d} vs 2^{p}");
                }
            }
        }
    }

    #[test]
    fn ceil_log2_bounds() {
        assert_eq!(dy(1, -3).ceil_log2(), Some(-3));
        assert_eq!(dy(3, -2).ceil_log2(), Some(0)); // 3/4 <= 2^0
        assert_eq!(dy(5, 0).ceil_log2(), Some(3)); // 5 <= 8
        assert_eq!(Dyadic::zero().ceil_log2(), None);
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(dy(6, -4).to_string(), "3*2^-3");
        assert_eq!(Dyadic::zero().to_string(), "0*2^0");
    }

    proptest! {
        #[test]
        fn add_matches_u128_reference(a in 0u64..1 << 20, ea in -20i64..20, b in 0u64..1 << 20, eb in -20i64..20) {
            // Reference: value * 2^40 fits in u128 for these ranges.
            let to_ref = |m: u64, e: i64| (m as u128) << (e + 40) as u32;
            let d = &dy(a, ea) + &dy(b, eb);
            let r = to_ref(a, ea) + to_ref(b, eb);
            // Convert d back: mantissa << (exp+40)
            let got: u128 = {
                let m: u128 = d.mantissa().try_into().unwrap();
                m << (d.exponent() + 40) as u32
            };
            prop_assert_eq!(got, r);
        }

        #[test]
        fn ordering_matches_reference(a in 0u64..1 << 20, ea in -20i64..20, b in 0u64..1 << 20, eb in -20i64..20) {
            let to_ref = |m: u64, e: i64| (m as u128) << (e + 40) as u32;
            prop_assert_eq!(dy(a, ea).cmp(&dy(b, eb)), to_ref(a, ea).cmp(&to_ref(b, eb)));
        }

        #[test]
        fn addition_is_associative(a in 0u64..1000, b in 0u64..1000, c in 0u64..1000, e in -10i64..10) {
            let (x, y, z) = (dy(a, e), dy(b, -e), dy(c, 0));
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        }
    }
}
