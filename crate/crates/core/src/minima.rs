//! The minimal Colless value c(n) over all shapes on n leaves, by two
//! independent exact routes, plus the combinatorics around which root
//! partitions can occur in Colless-minimal shapes.
//!
//! Route one is the recursion c(1) = c(2) = 0, c(2n) = 2 c(n),
//! c(2n+1) = c(n+1) + c(n) + 1 (OEIS A296062). Route two evaluates the sum
//! of scaled distances to the nearest integer,
//!
//! ```text
//! c(n) = sum over i of s(2^(i-k+1) * n) / 2^(i-k+1),   0 <= i <= k-2,
//! ```
//!
//! where k = ceil(log2 n) and s(x) is the distance from x to the nearest
//! integer; the summands are restrictions of the blancmange (Takagi) curve.
//! Both routes are kept so each can check the other; the second also has an
//! all-integer rewrite used as the fast path.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use thiserror::Error;

use crate::builders::{gfb_root_partition, maximally_balanced};
use crate::indices::sackin;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MinimaError {
    #[error("(n_a, n_b) = ({n_a}, {n_b}) does not partition n = {n}")]
    NotAPartition { n: u64, n_a: u64, n_b: u64 },
    #[error("partition sides must satisfy n_a >= n_b >= 1 (got ({n_a}, {n_b}))")]
    UnorderedPartition { n_a: u64, n_b: u64 },
    #[error("n = {0} is outside the identity's domain (need odd n with n - 1 > 2^(k-1))")]
    OutsideDomain(u64),
}

/// k(n) = ceil(log2 n); k(1) = 0. Computed with bit operations only.
pub fn ceil_log2(n: u64) -> u32 {
    assert!(n >= 1, "ceil_log2 needs n >= 1");
    if n == 1 {
        0
    } else {
        u64::BITS - (n - 1).leading_zeros()
    }
}

/// An exact dyadic rational num / 2^exp. Normalized so that exp == 0 or num
/// is odd; all arithmetic is integer-only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicRational {
    num: i128,
    exp: u32,
}

impl DyadicRational {
    pub fn new(num: i128, exp: u32) -> DyadicRational {
        let mut d = DyadicRational { num, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        while self.exp > 0 && self.num % 2 == 0 {
            self.num /= 2;
            self.exp -= 1;
        }
    }

    pub fn zero() -> DyadicRational {
        DyadicRational { num: 0, exp: 0 }
    }

    pub fn from_integer(n: i128) -> DyadicRational {
        DyadicRational { num: n, exp: 0 }
    }

    pub fn numerator(&self) -> i128 {
        self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }

    pub fn abs(self) -> DyadicRational {
        DyadicRational { num: self.num.abs(), exp: self.exp }
    }

    /// Multiplies by 2^k exactly.
    pub fn scale_pow2(self, k: u32) -> DyadicRational {
        if self.exp >= k {
            DyadicRational { num: self.num, exp: self.exp - k }
        } else {
            DyadicRational::new(self.num << (k - self.exp), 0)
        }
    }

    /// s(x): the distance from x to the nearest integer. Always in [0, 1/2].
    pub fn nearest_int_distance(self) -> DyadicRational {
        let den: i128 = 1 << self.exp;
        let r = self.num.rem_euclid(den);
        DyadicRational::new(r.min(den - r), self.exp)
    }
}

impl Add for DyadicRational {
    type Output = DyadicRational;
    fn add(self, rhs: DyadicRational) -> DyadicRational {
        let exp = self.exp.max(rhs.exp);
        let a = self.num << (exp - self.exp);
        let b = rhs.num << (exp - rhs.exp);
        DyadicRational::new(a + b, exp)
    }
}

impl Sub for DyadicRational {
    type Output = DyadicRational;
    fn sub(self, rhs: DyadicRational) -> DyadicRational {
        self + (-rhs)
    }
}

impl Neg for DyadicRational {
    type Output = DyadicRational;
    fn neg(self) -> DyadicRational {
        DyadicRational { num: -self.num, exp: self.exp }
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let exp = self.exp.max(other.exp);
        (self.num << (exp - self.exp)).cmp(&(other.num << (exp - other.exp)))
    }
}

/// Memo table for c(n) and values derived from it. Confine a table to one
/// thread per computation; independent tables always agree because every
/// entry is a pure function of n.
#[derive(Debug, Default)]
pub struct MinimaTable {
    // c[n] for n >= 1; index 0 unused.
    c: Vec<u64>,
    qb: BTreeMap<u64, Vec<(u64, u64)>>,
    sackin_min: BTreeMap<u64, u64>,
}

impl MinimaTable {
    pub fn new() -> MinimaTable {
        MinimaTable::default()
    }

    fn ensure(&mut self, n: u64) {
        let n = n as usize;
        if self.c.is_empty() {
            self.c = vec![0, 0, 0]; // c[1] = c[2] = 0
        }
        while self.c.len() <= n {
            let m = self.c.len() as u64;
            let value = if m % 2 == 0 {
                2 * self.c[(m / 2) as usize]
            } else {
                self.c[((m + 1) / 2) as usize] + self.c[(m / 2) as usize] + 1
            };
            self.c.push(value);
        }
    }

    /// c(n) via the memoized recursion.
    pub fn min_colless(&mut self, n: u64) -> u64 {
        assert!(n >= 1, "shapes have at least one leaf");
        self.ensure(n);
        self.c[n as usize]
    }

    /// All partitions (n_a, n_b) of n with n_a >= n_b >= 1 whose sides can
    /// carry a Colless-minimal shape: c(n_a) + c(n_b) + (n_a - n_b) = c(n).
    pub fn qb_set(&mut self, n: u64) -> Vec<(u64, u64)> {
        assert!(n >= 2, "partitions need at least two leaves");
        if let Some(cached) = self.qb.get(&n) {
            return cached.clone();
        }
        self.ensure(n);
        let cn = self.c[n as usize];
        let mut pairs = Vec::new();
        for n_b in 1..=n / 2 {
            let n_a = n - n_b;
            if self.c[n_a as usize] + self.c[n_b as usize] + (n_a - n_b) == cn {
                pairs.push((n_a, n_b));
            }
        }
        self.qb.insert(n, pairs.clone());
        pairs
    }

    /// The minimal Sackin index over all shapes on n leaves, attained by the
    /// maximally balanced tree.
    pub fn min_sackin(&mut self, n: u64) -> u64 {
        assert!(n >= 1, "shapes have at least one leaf");
        if let Some(&s) = self.sackin_min.get(&n) {
            return s;
        }
        let s = sackin(&maximally_balanced(n));
        self.sackin_min.insert(n, s);
        s
    }
}

/// c(n) by the doubling recursion (fresh memo per call; use [`MinimaTable`]
/// for bulk queries).
pub fn min_colless_recursive(n: u64) -> u64 {
    MinimaTable::new().min_colless(n)
}

/// c(n) by the integer rewrite of the scaled-distance sum:
/// sum over m in 1..k of min(n mod 2^m, 2^m - n mod 2^m).
pub fn min_colless_explicit(n: u64) -> u64 {
    assert!(n >= 1, "shapes have at least one leaf");
    let k = ceil_log2(n);
    let mut sum = 0;
    for m in 1..k {
        let p = 1u64 << m;
        let r = n % p;
        sum += r.min(p - r);
    }
    sum
}

/// c(n) by evaluating the scaled-distance sum literally in exact dyadic
/// arithmetic: sum of s(n / 2^(k-1-i)) * 2^(k-1-i) over 0 <= i <= k-2.
/// Slower than [`min_colless_explicit`]; kept as an independent check that
/// the integer rewrite is faithful.
pub fn min_colless_dyadic(n: u64) -> u64 {
    assert!(n >= 1, "shapes have at least one leaf");
    let k = ceil_log2(n);
    let mut total = DyadicRational::zero();
    for i in 0..k.saturating_sub(1) {
        let shift = k - 1 - i;
        let x = DyadicRational::new(n as i128, shift);
        total = total + x.nearest_int_distance().scale_pow2(shift);
    }
    assert!(total.is_integer(), "each scaled summand is an integer");
    u64::try_from(total.numerator()).expect("c(n) is nonnegative and small")
}

/// Upper bound g(n) = 2^(k-1) with c(n) < g(n) for n >= 2. Returns `None`
/// for n = 1, where k = 0 makes g a non-integer (1/2).
pub fn max_min_bound(n: u64) -> Option<u64> {
    assert!(n >= 1, "shapes have at least one leaf");
    let k = ceil_log2(n);
    if k == 0 {
        None
    } else {
        Some(1u64 << (k - 1))
    }
}

/// Verifies three exact identities of c at scale k >= 2:
/// c(2^k + 1) = k, c(2^k - 1) = k - 1, and the reflection
/// c(2^(k-1) + j) = c(2^k - j) for 1 <= j <= 2^(k-1) - 1.
pub fn cn_properties_check(k: u32) -> bool {
    assert!((2..=62).contains(&k), "k must be in 2..=62");
    let p = 1u64 << k;
    if min_colless_explicit(p + 1) != u64::from(k) {
        return false;
    }
    if min_colless_explicit(p - 1) != u64::from(k) - 1 {
        return false;
    }
    let half = p / 2;
    (1..half).all(|j| min_colless_explicit(half + j) == min_colless_explicit(p - j))
}

/// Verifies the midpoint identity f_i(n+1) + f_i(n-1) = 2 f_i(n) for all
/// 0 <= i <= k-3, where f_i(m) = s(2^(i-k+1) m) / 2^(i-k+1) and k is taken
/// from n. Requires odd n strictly inside (2^(k-1), 2^k) with
/// n - 1 > 2^(k-1); other inputs error.
pub fn fi_identity_check(n: u64) -> Result<bool, MinimaError> {
    let k = ceil_log2(n);
    let lower = match k {
        0 => return Err(MinimaError::OutsideDomain(n)),
        _ => 1u64 << (k - 1),
    };
    if n % 2 == 0 || n == lower || n - 1 <= lower {
        return Err(MinimaError::OutsideDomain(n));
    }
    let f = |m: u64, i: u32| {
        let shift = k - 1 - i;
        DyadicRational::new(m as i128, shift)
            .nearest_int_distance()
            .scale_pow2(shift)
    };
    // The domain checks force n >= 2^(k-1) + 3 and odd n < 2^k, so k >= 3
    // here and the index range 0..=k-3 is well formed.
    for i in 0..=(k - 3) {
        let lhs = f(n + 1, i) + f(n - 1, i);
        let rhs = f(n, i).scale_pow2(1);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Set of root partitions compatible with Colless minimality (fresh table).
pub fn qb_set(n: u64) -> Vec<(u64, u64)> {
    MinimaTable::new().qb_set(n)
}

/// Necessary conditions for (n_a, n_b) to be the root partition of a
/// Colless-minimal shape on n leaves: n_b must lie between the GFB
/// partition's smaller side and floor(n/2), and the sides must not be two
/// distinct odd numbers. Returns whether both hold; the converse is not
/// claimed.
pub fn partition_necessary_ok(n: u64, n_a: u64, n_b: u64) -> Result<bool, MinimaError> {
    if n_a < n_b || n_b == 0 {
        return Err(MinimaError::UnorderedPartition { n_a, n_b });
    }
    if n_a + n_b != n {
        return Err(MinimaError::NotAPartition { n, n_a, n_b });
    }
    let (_, gfb_b) = gfb_root_partition(n);
    let within_bounds = gfb_b <= n_b && n_b <= n / 2;
    let odd_odd = n_a != n_b && n_a % 2 == 1 && n_b % 2 == 1;
    Ok(within_bounds && !odd_odd)
}

/// Minimal Sackin index over shapes on n leaves (fresh computation).
pub fn min_sackin_value(n: u64) -> u64 {
    MinimaTable::new().min_sackin(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(4), 2);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(1024), 10);
        assert_eq!(ceil_log2(1025), 11);
    }

    #[test]
    fn dyadic_basics() {
        let x = DyadicRational::new(6, 2); // 3/2
        assert_eq!(x.numerator(), 3);
        assert_eq!(x.exponent(), 1);
        assert_eq!(x.nearest_int_distance(), DyadicRational::new(1, 1));
        assert_eq!(DyadicRational::from_integer(7).nearest_int_distance(), DyadicRational::zero());
        let y = DyadicRational::new(-5, 3); // -5/8 is 3/8 away from -1
        assert_eq!(y.nearest_int_distance(), DyadicRational::new(3, 3));
        assert_eq!(DyadicRational::new(1, 1).scale_pow2(3), DyadicRational::from_integer(4));
        assert!(DyadicRational::new(3, 2) < DyadicRational::from_integer(1));
        assert_eq!(
            DyadicRational::new(1, 2) + DyadicRational::new(1, 2),
            DyadicRational::new(1, 1)
        );
        assert_eq!(
            DyadicRational::new(1, 1) - DyadicRational::new(3, 2),
            DyadicRational::new(-1, 2)
        );
    }

    #[test]
    fn min_colless_small_table() {
        let expected = [0, 0, 1, 0, 2, 2, 2, 0, 3, 4, 5, 4, 5, 4, 3, 0];
        let mut table = MinimaTable::new();
        for (i, &e) in expected.iter().enumerate() {
            let n = i as u64 + 1;
            assert_eq!(table.min_colless(n), e, "n = {n}");
            assert_eq!(min_colless_explicit(n), e, "n = {n}");
            assert_eq!(min_colless_dyadic(n), e, "n = {n}");
        }
    }

    #[test]
    fn min_colless_named_points() {
        assert_eq!(min_colless_explicit(6), 2);
        assert_eq!(min_colless_explicit(12), 4);
        assert_eq!(min_colless_explicit(23), 10);
        assert_eq!(min_colless_explicit(24), 8);
        assert_eq!(min_colless_recursive(1 << 16), 0);
    }

    #[test]
    fn integer_rewrite_matches_dyadic_evaluation() {
        // The rewrite min(n mod 2^m, 2^m - n mod 2^m) must reproduce the
        // literal scaled-distance sum; checked here on a dense range and in
        // the verification battery up to 10^4.
        for n in 1..=2048 {
            assert_eq!(min_colless_explicit(n), min_colless_dyadic(n), "n = {n}");
        }
    }

    #[test]
    fn bound_is_strict_and_halves_power() {
        assert_eq!(max_min_bound(1), None);
        assert_eq!(max_min_bound(2), Some(1));
        assert_eq!(max_min_bound(5), Some(4));
        assert_eq!(max_min_bound(1024), Some(512));
        for n in 3..=4096 {
            assert!(min_colless_explicit(n) < max_min_bound(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn cn_properties_hold_up_to_k_twelve() {
        for k in 2..=12 {
            assert!(cn_properties_check(k), "k = {k}");
        }
    }

    #[test]
    fn fi_identity_domain_and_values() {
        assert_eq!(fi_identity_check(9), Err(MinimaError::OutsideDomain(9)));
        assert_eq!(fi_identity_check(8), Err(MinimaError::OutsideDomain(8)));
        assert_eq!(fi_identity_check(3), Err(MinimaError::OutsideDomain(3)));
        assert_eq!(fi_identity_check(11), Ok(true));
        assert_eq!(fi_identity_check(13), Ok(true));
        assert_eq!(fi_identity_check(23), Ok(true));
    }

    #[test]
    fn qb_set_examples() {
        assert_eq!(qb_set(12), vec![(8, 4), (6, 6)]);
        let qb24 = qb_set(24);
        assert!(qb24.contains(&(16, 8)));
        assert!(!qb24.contains(&(14, 10)));
        assert_eq!(qb_set(2), vec![(1, 1)]);
    }

    #[test]
    fn partition_filter_examples() {
        assert_eq!(partition_necessary_ok(12, 6, 6), Ok(true));
        assert_eq!(partition_necessary_ok(12, 7, 5), Ok(false)); // two distinct odds
        assert_eq!(partition_necessary_ok(12, 11, 1), Ok(false)); // below gfb side
        assert_eq!(
            partition_necessary_ok(12, 7, 4),
            Err(MinimaError::NotAPartition { n: 12, n_a: 7, n_b: 4 })
        );
        assert_eq!(
            partition_necessary_ok(12, 5, 7),
            Err(MinimaError::UnorderedPartition { n_a: 5, n_b: 7 })
        );
    }

    #[test]
    fn min_sackin_examples() {
        assert_eq!(min_sackin_value(1), 0);
        assert_eq!(min_sackin_value(2), 2);
        assert_eq!(min_sackin_value(7), 20);
        assert_eq!(min_sackin_value(12), 44);
    }

    #[test]
    fn tables_agree_across_threads() {
        // Independent tables on separate threads must reproduce the
        // sequential values exactly.
        let sequential: Vec<u64> = {
            let mut t = MinimaTable::new();
            (1..=2000).map(|n| t.min_colless(n)).collect()
        };
        let handles: Vec<_> = (0..4)
            .map(|_| {
                std::thread::spawn(|| {
                    let mut t = MinimaTable::new();
                    (1..=2000).map(|n| t.min_colless(n)).collect::<Vec<u64>>()
                })
            })
            .collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), sequential);
        }
    }
}
