//! Exhaustive enumeration of shapes and exact counting of the
//! Colless-minimal and Sackin-minimal ones.
//!
//! Enumeration is the ground truth the counting recursions are checked
//! against; it is exponential (the number of shapes on n leaves is the
//! Wedderburn-Etherington number, OEIS A001190), so it sits behind a size
//! guard.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use thiserror::Error;

use crate::indices::{colless, sackin};
use crate::minima::{ceil_log2, min_colless_explicit, MinimaTable};
use crate::shape::{canonical_cmp, TreeShape};

/// Default ceiling for enumeration-backed operations: n = 24 is about 8.4
/// million shapes, which is already minutes of work and hundreds of MB.
pub const DEFAULT_ENUM_GUARD: u64 = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CensusError {
    #[error("n = {n} exceeds the enumeration guard ({guard}); the shape count grows as ~2.48^n")]
    SizeLimit { n: u64, guard: u64 },
}

/// Iterator over all shapes on n leaves, each exactly once, in canonical
/// form, guarded at [`DEFAULT_ENUM_GUARD`].
pub fn enumerate_shapes(n: u64) -> Result<ShapeEnumeration, CensusError> {
    enumerate_shapes_guarded(n, DEFAULT_ENUM_GUARD)
}

/// [`enumerate_shapes`] with a caller-chosen guard.
pub fn enumerate_shapes_guarded(n: u64, guard: u64) -> Result<ShapeEnumeration, CensusError> {
    assert!(n >= 1, "shapes have at least one leaf");
    if n > guard {
        return Err(CensusError::SizeLimit { n, guard });
    }
    Ok(ShapeEnumeration::new(n))
}

/// Lazily pairs catalog entries over root partitions (n_a >= n_b), with the
/// unordered-pair dedup i <= j when n_a = n_b. Each level of the catalog is
/// sorted by canonical encoding, so emitted pairs are canonical as built.
pub struct ShapeEnumeration {
    n: u64,
    // catalog[m] holds every canonical shape on m leaves, 1 <= m < n,
    // built on demand during iteration.
    catalog: Vec<Vec<TreeShape>>,
    leaf_pending: bool,
    n_a: u64,
    i: usize,
    j: usize,
}

impl ShapeEnumeration {
    fn new(n: u64) -> ShapeEnumeration {
        ShapeEnumeration {
            n,
            catalog: vec![Vec::new(), vec![TreeShape::leaf()]],
            leaf_pending: n == 1,
            n_a: n.div_ceil(2),
            i: 0,
            j: 0,
        }
    }

    // Constructing the iterator (or abandoning it early) stays cheap: each
    // level is materialized the first time a root partition needs it.
    fn ensure_level(&mut self, m: usize) {
        while self.catalog.len() <= m {
            let level = build_level(self.catalog.len() as u64, &self.catalog);
            self.catalog.push(level);
        }
    }
}

fn build_level(m: u64, catalog: &[Vec<TreeShape>]) -> Vec<TreeShape> {
    let mut level = Vec::new();
    // Strictly unequal splits here; the equal split (even m) gets the
    // triangle loop below so unordered pairs are not double-counted.
    for n_a in (m / 2 + 1)..m {
        let n_b = m - n_a;
        for a in &catalog[n_a as usize] {
            for b in &catalog[n_b as usize] {
                // n_a > n_b here, so the larger-first order is canonical.
                level.push(TreeShape::internal(a.clone(), b.clone()));
            }
        }
    }
    if m % 2 == 0 {
        let half = &catalog[(m / 2) as usize];
        for i in 0..half.len() {
            for j in i..half.len() {
                // The level is sorted by encoding, so index order i <= j is
                // exactly the canonical order for equal-sized children.
                level.push(TreeShape::internal(half[i].clone(), half[j].clone()));
            }
        }
    }
    level.sort_unstable_by(canonical_cmp);
    level
}

impl Iterator for ShapeEnumeration {
    type Item = TreeShape;

    fn next(&mut self) -> Option<TreeShape> {
        if self.n == 1 {
            if self.leaf_pending {
                self.leaf_pending = false;
                return Some(TreeShape::leaf());
            }
            return None;
        }
        loop {
            if self.n_a >= self.n {
                return None;
            }
            let n_b = self.n - self.n_a;
            let equal_split = self.n_a == n_b;
            // n_a >= n_b, so this covers both sides.
            self.ensure_level(self.n_a as usize);
            let side_a = &self.catalog[self.n_a as usize];
            let side_b = &self.catalog[n_b as usize];
            if self.i < side_a.len() && self.j < side_b.len() {
                // side_a is the larger (or equal, with i <= j into a sorted
                // level) side, so this order is canonical.
                let shape = TreeShape::internal(side_a[self.i].clone(), side_b[self.j].clone());
                self.j += 1;
                if self.j >= side_b.len() {
                    self.i += 1;
                    self.j = if equal_split { self.i } else { 0 };
                }
                return Some(shape);
            }
            self.n_a += 1;
            self.i = 0;
            self.j = 0;
        }
    }
}

/// Whether this shape attains the minimal Colless index for its leaf count.
pub fn is_colless_minimal(shape: &TreeShape) -> bool {
    colless(shape) == min_colless_explicit(shape.leaf_count())
}

/// Whether this shape attains the minimal Sackin index for its leaf count,
/// decided structurally: a shape on n > 2 leaves is Sackin-minimal exactly
/// when both root subtrees are and the root balance value is at most
/// min(n - 2^(k-1), 2^k - n).
pub fn is_sackin_minimal(shape: &TreeShape) -> bool {
    let n = shape.leaf_count();
    if n <= 2 {
        return true;
    }
    let Some((l, r)) = shape.children() else {
        return true;
    };
    let k = ceil_log2(n);
    let slack = (n - (1u64 << (k - 1))).min((1u64 << k) - n);
    l.leaf_count().abs_diff(r.leaf_count()) <= slack
        && is_sackin_minimal(l)
        && is_sackin_minimal(r)
}

/// Number of shapes on n leaves (Wedderburn-Etherington numbers), by the
/// standard recurrence; independent of the enumerator.
pub fn wedderburn_etherington(n: u64) -> BigUint {
    assert!(n >= 1, "shapes have at least one leaf");
    let n = n as usize;
    let mut a: Vec<BigUint> = vec![BigUint::zero(); n + 1];
    a[1] = BigUint::one();
    for m in 2..=n {
        let mut total = BigUint::zero();
        for i in 1..=(m - 1) / 2 {
            total += &a[i] * &a[m - i];
        }
        if m % 2 == 0 {
            total += choose_two_with_repetition(&a[m / 2]);
        }
        a[m] = total;
    }
    a[n].clone()
}

// Unordered pairs with repetition from x choices: x(x+1)/2.
fn choose_two_with_repetition(x: &BigUint) -> BigUint {
    x * (x + 1u32) / 2u32
}

/// Memo tables for the three counting recursions. Like [`MinimaTable`],
/// confine one table to one thread; independent tables agree.
#[derive(Debug, Default)]
pub struct CountTable {
    minima: MinimaTable,
    colless: Vec<BigUint>,
    sackin: Vec<BigUint>,
    bound_b: Vec<BigUint>,
}

impl CountTable {
    pub fn new() -> CountTable {
        CountTable::default()
    }

    /// Number of Colless-minimal shapes on n leaves: products over the
    /// compatible partitions with n_a > n_b, plus unordered pairs with
    /// repetition over the half split when n is even.
    pub fn colless_minimal_count(&mut self, n: u64) -> BigUint {
        assert!(n >= 1, "shapes have at least one leaf");
        if self.colless.is_empty() {
            self.colless = vec![BigUint::zero(), BigUint::one()];
        }
        while self.colless.len() <= n as usize {
            let m = self.colless.len() as u64;
            let mut total = BigUint::zero();
            for (n_a, n_b) in self.minima.qb_set(m) {
                if n_a > n_b {
                    total += &self.colless[n_a as usize] * &self.colless[n_b as usize];
                }
            }
            if m % 2 == 0 {
                // (m/2, m/2) is always a compatible partition.
                total += choose_two_with_repetition(&self.colless[(m / 2) as usize]);
            }
            self.colless.push(total);
        }
        self.colless[n as usize].clone()
    }

    /// Number of Sackin-minimal shapes on n leaves: products over partitions
    /// whose balance value stays within min(n - 2^(k-1), 2^k - n), plus the
    /// even-split term.
    pub fn sackin_minimal_count(&mut self, n: u64) -> BigUint {
        assert!(n >= 1, "shapes have at least one leaf");
        if self.sackin.is_empty() {
            self.sackin = vec![BigUint::zero(), BigUint::one(), BigUint::one()];
        }
        while self.sackin.len() <= n as usize {
            let m = self.sackin.len() as u64;
            self.sackin.push(sackin_style_sum(&self.sackin, m, false));
        }
        self.sackin[n as usize].clone()
    }

    /// The partition-filtered variant: the Sackin recursion with summands
    /// dropped when n_a and n_b are two distinct odd numbers. Upper-bounds
    /// the Colless-minimal count and lower-bounds nothing; it sits between
    /// the two counts.
    pub fn bound_b_count(&mut self, n: u64) -> BigUint {
        assert!(n >= 1, "shapes have at least one leaf");
        if self.bound_b.is_empty() {
            self.bound_b = vec![BigUint::zero(), BigUint::one(), BigUint::one()];
        }
        while self.bound_b.len() <= n as usize {
            let m = self.bound_b.len() as u64;
            self.bound_b.push(sackin_style_sum(&self.bound_b, m, true));
        }
        self.bound_b[n as usize].clone()
    }

    /// Secondary route to the Sackin-minimal count for n >= 3: sum of
    /// products over partitions with ceil(log2 n_a) = ceil(log2 n_b) = k-1
    /// and n_a != n_b, plus the even-split term, plus (only when
    /// n <= 3*2^(k-2), where it corresponds to an admissible partition with
    /// a fully balanced smaller side) the count on n - 2^(k-2) leaves.
    /// Subterms come from the primary memo, so any disagreement between the
    /// two forms surfaces at the first n where they differ.
    pub fn sackin_minimal_count_alt(&mut self, n: u64) -> BigUint {
        assert!(n >= 3, "the split form needs n >= 3");
        let k = ceil_log2(n);
        self.sackin_minimal_count(n); // fill the memo up to n
        let mut total = BigUint::zero();
        for n_a in n.div_ceil(2)..n {
            let n_b = n - n_a;
            if n_a != n_b && ceil_log2(n_a) == k - 1 && ceil_log2(n_b) == k - 1 {
                total += &self.sackin[n_a as usize] * &self.sackin[n_b as usize];
            }
        }
        if n % 2 == 0 {
            total += choose_two_with_repetition(&self.sackin[(n / 2) as usize]);
        }
        if 4 * n <= 3u64 << k {
            total += &self.sackin[(n - (1u64 << (k - 2))) as usize];
        }
        total
    }
}

fn sackin_style_sum(memo: &[BigUint], m: u64, skip_distinct_odd: bool) -> BigUint {
    let k = ceil_log2(m);
    let slack = (m - (1u64 << (k - 1))).min((1u64 << k) - m);
    let mut total = BigUint::zero();
    for n_a in (m / 2 + 1)..m {
        let n_b = m - n_a;
        if n_a - n_b > slack {
            continue;
        }
        if skip_distinct_odd && n_a % 2 == 1 && n_b % 2 == 1 {
            continue;
        }
        total += &memo[n_a as usize] * &memo[n_b as usize];
    }
    if m % 2 == 0 {
        total += choose_two_with_repetition(&memo[(m / 2) as usize]);
    }
    total
}

/// Count of Colless-minimal shapes on n leaves (fresh table).
pub fn count_colless_minimal(n: u64) -> BigUint {
    CountTable::new().colless_minimal_count(n)
}

/// Count of Sackin-minimal shapes on n leaves (fresh table).
pub fn count_sackin_minimal(n: u64) -> BigUint {
    CountTable::new().sackin_minimal_count(n)
}

/// Count under the partition-filtered recursion (fresh table).
pub fn count_bound_b(n: u64) -> BigUint {
    CountTable::new().bound_b_count(n)
}

/// Aggregate statistics of one exhaustive pass over all shapes on n leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusResult {
    pub leaves: u64,
    pub total_shapes: BigUint,
    pub colless_min_value: u64,
    pub colless_min_count: BigUint,
    pub sackin_min_value: u64,
    pub sackin_min_count: BigUint,
    /// Canonical shapes attaining the Colless minimum, when requested.
    pub colless_representatives: Option<Vec<TreeShape>>,
    /// Canonical shapes attaining the Sackin minimum, when requested.
    pub sackin_representatives: Option<Vec<TreeShape>>,
}

/// Enumerates every shape on n leaves and aggregates minima and counts by
/// direct value comparison. Along the way every shape's predicate
/// classification ([`is_colless_minimal`], [`is_sackin_minimal`]) is checked
/// against the value-based one, and each Colless-minimal shape is asserted
/// to be Sackin-minimal.
pub fn census(n: u64, keep_representatives: bool) -> Result<CensusResult, CensusError> {
    census_guarded(n, DEFAULT_ENUM_GUARD, keep_representatives)
}

/// [`census`] with a caller-chosen guard.
pub fn census_guarded(
    n: u64,
    guard: u64,
    keep_representatives: bool,
) -> Result<CensusResult, CensusError> {
    let mut min_c = u64::MAX;
    let mut min_s = u64::MAX;
    let mut total: u64 = 0;
    for shape in enumerate_shapes_guarded(n, guard)? {
        min_c = min_c.min(colless(&shape));
        min_s = min_s.min(sackin(&shape));
        total += 1;
    }
    let mut count_c: u64 = 0;
    let mut count_s: u64 = 0;
    let mut reps_c = keep_representatives.then(Vec::new);
    let mut reps_s = keep_representatives.then(Vec::new);
    for shape in enumerate_shapes_guarded(n, guard)? {
        let at_min_c = colless(&shape) == min_c;
        let at_min_s = sackin(&shape) == min_s;
        assert_eq!(
            is_colless_minimal(&shape),
            at_min_c,
            "Colless predicate disagrees with enumeration on {shape:?}"
        );
        assert_eq!(
            is_sackin_minimal(&shape),
            at_min_s,
            "Sackin predicate disagrees with enumeration on {shape:?}"
        );
        assert!(
            !at_min_c || at_min_s,
            "Colless-minimal shape {shape:?} is not Sackin-minimal"
        );
        if at_min_c {
            count_c += 1;
            if let Some(reps) = reps_c.as_mut() {
                reps.push(shape.clone());
            }
        }
        if at_min_s {
            count_s += 1;
            if let Some(reps) = reps_s.as_mut() {
                reps.push(shape);
            }
        }
    }
    Ok(CensusResult {
        leaves: n,
        total_shapes: BigUint::from(total),
        colless_min_value: min_c,
        colless_min_count: BigUint::from(count_c),
        sackin_min_value: min_s,
        sackin_min_count: BigUint::from(count_s),
        colless_representatives: reps_c,
        sackin_representatives: reps_s,
    })
}

/// Root partitions observed among the Colless-minimal shapes on n leaves,
/// from enumeration. The ground truth that `qb_set` is checked against.
pub fn colless_minimal_partitions(n: u64, guard: u64) -> Result<BTreeSet<(u64, u64)>, CensusError> {
    assert!(n >= 2, "partitions need at least two leaves");
    let mut partitions = BTreeSet::new();
    let target = min_colless_explicit(n);
    for shape in enumerate_shapes_guarded(n, guard)? {
        if colless(&shape) == target {
            let (l, r) = shape.children().expect("n >= 2 shapes are internal");
            let (a, b) = (l.leaf_count(), r.leaf_count());
            partitions.insert((a.max(b), a.min(b)));
        }
    }
    Ok(partitions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{caterpillar, fully_balanced, gfb, maximally_balanced};
    use crate::shape::TreeShape;

    #[test]
    fn enumeration_counts_match_reference() {
        // First Wedderburn-Etherington numbers, frozen from the recurrence's
        // published values.
        let expected: [u64; 12] = [1, 1, 1, 2, 3, 6, 11, 23, 46, 98, 207, 451];
        for (i, &e) in expected.iter().enumerate() {
            let n = i as u64 + 1;
            let shapes: Vec<_> = enumerate_shapes(n).unwrap().collect();
            assert_eq!(shapes.len() as u64, e, "n = {n}");
            assert_eq!(wedderburn_etherington(n), BigUint::from(e), "n = {n}");
            // Exactly once, in canonical form.
            let keys: BTreeSet<_> = shapes.iter().map(TreeShape::canonical_key).collect();
            assert_eq!(keys.len(), shapes.len(), "n = {n}");
            for s in &shapes {
                assert_eq!(s, &s.canonicalize(), "n = {n}");
                assert_eq!(s.leaf_count(), n);
            }
        }
    }

    #[test]
    fn guard_is_enforced() {
        assert_eq!(
            enumerate_shapes(25).err(),
            Some(CensusError::SizeLimit { n: 25, guard: 24 })
        );
        assert!(enumerate_shapes_guarded(25, 25).is_ok());
        assert_eq!(
            census_guarded(10, 9, false).err(),
            Some(CensusError::SizeLimit { n: 10, guard: 9 })
        );
    }

    #[test]
    fn predicates_on_named_shapes() {
        assert!(is_colless_minimal(&fully_balanced(3)));
        assert!(is_colless_minimal(&maximally_balanced(7)));
        assert!(!is_colless_minimal(&caterpillar(7)));
        assert!(is_sackin_minimal(&maximally_balanced(23)));
        assert!(!is_sackin_minimal(&caterpillar(5)));
        for n in 1..=64 {
            assert!(is_colless_minimal(&gfb(n)), "n = {n}");
        }
    }

    #[test]
    fn small_census_values() {
        let c5 = census(5, true).unwrap();
        assert_eq!(c5.total_shapes, BigUint::from(3u32));
        assert_eq!(c5.colless_min_value, 2);
        assert_eq!(c5.sackin_min_value, 12);
        let reps = c5.colless_representatives.unwrap();
        assert_eq!(reps.len(), 1);
        assert!(reps[0].is_isomorphic_to(&maximally_balanced(5)));

        let c1 = census(1, false).unwrap();
        assert_eq!(c1.total_shapes, BigUint::one());
        assert_eq!(c1.colless_min_value, 0);
        assert_eq!(c1.sackin_min_value, 0);
    }

    #[test]
    fn counting_recursions_small_values() {
        let mut t = CountTable::new();
        assert_eq!(t.colless_minimal_count(6), BigUint::from(2u32));
        assert_eq!(t.colless_minimal_count(12), BigUint::from(4u32));
        assert_eq!(t.colless_minimal_count(23), BigUint::from(13u32));
        assert_eq!(t.sackin_minimal_count(6), BigUint::from(2u32));
        assert_eq!(t.sackin_minimal_count(12), BigUint::from(5u32));
        assert_eq!(t.bound_b_count(12), BigUint::from(4u32));
        assert_eq!(t.bound_b_count(23), BigUint::from(25u32));
    }

    #[test]
    fn counts_match_enumeration_up_to_twelve() {
        let mut t = CountTable::new();
        for n in 1..=12 {
            let c = census(n, false).unwrap();
            assert_eq!(t.colless_minimal_count(n), c.colless_min_count, "n = {n}");
            assert_eq!(t.sackin_minimal_count(n), c.sackin_min_count, "n = {n}");
            assert_eq!(wedderburn_etherington(n), c.total_shapes, "n = {n}");
        }
    }

    #[test]
    fn alt_sackin_count_agrees_on_prefix() {
        let mut t = CountTable::new();
        for n in 3..=64 {
            assert_eq!(
                t.sackin_minimal_count_alt(n),
                t.sackin_minimal_count(n),
                "n = {n}"
            );
        }
    }

    #[test]
    fn observed_partitions_match_qb() {
        for n in 2..=14 {
            let observed = colless_minimal_partitions(n, DEFAULT_ENUM_GUARD).unwrap();
            let predicted: BTreeSet<_> = crate::minima::qb_set(n).into_iter().collect();
            assert_eq!(observed, predicted, "n = {n}");
        }
    }

    #[test]
    fn caterpillar_is_unique_colless_maximum() {
        for n in 2..=10 {
            let bound = crate::indices::max_colless(n);
            let mut attained = Vec::new();
            for shape in enumerate_shapes(n).unwrap() {
                let c = colless(&shape);
                assert!(c <= bound, "n = {n}");
                if c == bound {
                    attained.push(shape);
                }
            }
            assert_eq!(attained.len(), 1, "n = {n}");
            assert!(attained[0].is_isomorphic_to(&caterpillar(n)), "n = {n}");
        }
    }
}
