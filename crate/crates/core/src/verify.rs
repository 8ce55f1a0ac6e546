//! Self-verification battery: every structural fact the crate's algorithms
//! rely on, checked at runtime against independent routes (closed forms vs
//! recursions vs exhaustive enumeration vs constructions).
//!
//! The CLI `verify` subcommand prints one line per check; tests call
//! [`run_all`] directly.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::One;

use crate::builders::{caterpillar, fully_balanced, gfb, gfb_root_partition, maximally_balanced};
use crate::census::{
    census_guarded, colless_minimal_partitions, enumerate_shapes_guarded, wedderburn_etherington,
    CensusError, CountTable,
};
use crate::indices::{colless, max_colless, sackin};
use crate::minima::{
    ceil_log2, cn_properties_check, fi_identity_check, max_min_bound, min_colless_dyadic,
    min_colless_explicit, partition_necessary_ok, DyadicRational, MinimaTable,
};
use crate::shape::TreeShape;

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// What was covered on success; what differed on failure.
    pub detail: String,
}

impl Check {
    fn pass(name: &'static str, detail: String) -> Check {
        Check { name, passed: true, detail }
    }

    fn fail(name: &'static str, detail: String) -> Check {
        Check { name, passed: false, detail }
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

// Counts of Colless-minimal shapes for n = 1..=32, frozen reference values.
const COLLESS_MINIMAL_COUNTS: [u32; 32] = [
    1, 1, 1, 1, 1, 2, 1, 1, 1, 3, 3, 4, 3, 3, 1, 1, 1, 4, 6, 10, 16, 21, 13, 11, 13, 21, 16, 10,
    6, 4, 1, 1,
];

// Counts under the partition-filtered recursion for n = 1..=32.
const BOUND_B_COUNTS: [u32; 32] = [
    1, 1, 1, 1, 1, 2, 1, 1, 1, 3, 3, 4, 3, 3, 1, 1, 1, 4, 6, 10, 16, 21, 25, 20, 25, 21, 16, 10,
    6, 4, 1, 1,
];

// Shape counts for n = 1..=18 (OEIS A001190), frozen from the literature.
const SHAPE_COUNTS: [u64; 18] = [
    1, 1, 1, 2, 3, 6, 11, 23, 46, 98, 207, 451, 983, 2179, 4850, 10905, 24631, 56011,
];

/// Runs the whole battery. `enum_max` caps enumeration-backed checks (must
/// not exceed `guard`), `formula_max` caps formula sweeps; some heavier
/// sweeps clamp themselves further, as noted per check.
pub fn run_all(enum_max: u64, formula_max: u64, guard: u64) -> Result<VerifyReport, CensusError> {
    let mut report = VerifyReport::default();
    let checks: &mut Vec<Check> = &mut report.checks;

    checks.push(formula_agreement(formula_max));
    checks.push(dyadic_agreement(formula_max.min(10_000)));
    checks.push(upper_bound(formula_max));
    checks.push(endpoint_and_reflection_identities());
    checks.push(midpoint_identity(formula_max.min(4096)));
    checks.push(closed_form_segments(formula_max.min(1 << 14)));
    checks.push(distance_subadditivity());
    checks.push(maximally_balanced_minimal(formula_max.min(4096)));
    checks.push(gfb_minimal(formula_max.min(4096)));
    checks.push(gfb_partition_and_subtrees(formula_max.min(512)));
    checks.push(gfb_shared_subtree(formula_max.min(512)));
    checks.push(count_sequences());
    checks.push(sackin_evaluators_agree());
    checks.push(counts_below_counts(formula_max.min(256)));
    checks.push(zero_colless_uniqueness(enum_max, guard)?);
    checks.push(enumeration_cross_checks(enum_max, guard)?);
    checks.push(observed_partitions(enum_max.min(18), guard)?);
    checks.push(decomposition_identity(enum_max.min(12), guard)?);
    checks.push(caterpillar_maximum(enum_max.min(12), guard)?);
    checks.push(newick_roundtrip(enum_max.min(10), guard)?);

    Ok(report)
}

fn formula_agreement(max_n: u64) -> Check {
    let name = "min-colless-recursive-vs-explicit";
    let mut table = MinimaTable::new();
    for n in 1..=max_n {
        let (a, b) = (table.min_colless(n), min_colless_explicit(n));
        if a != b {
            return Check::fail(name, format!("n = {n}: recursion {a}, explicit {b}"));
        }
    }
    Check::pass(name, format!("n <= {max_n}"))
}

fn dyadic_agreement(max_n: u64) -> Check {
    let name = "integer-rewrite-vs-dyadic-sum";
    for n in 1..=max_n {
        let (a, b) = (min_colless_explicit(n), min_colless_dyadic(n));
        if a != b {
            return Check::fail(name, format!("n = {n}: integer {a}, dyadic {b}"));
        }
    }
    Check::pass(name, format!("n <= {max_n}"))
}

fn upper_bound(max_n: u64) -> Check {
    let name = "min-colless-below-half-power";
    for n in 2..=max_n {
        let bound = max_min_bound(n).expect("n >= 2 has an integer bound");
        let c = min_colless_explicit(n);
        if c >= bound {
            return Check::fail(name, format!("n = {n}: c = {c} not below {bound}"));
        }
    }
    Check::pass(name, format!("2 <= n <= {max_n}"))
}

fn endpoint_and_reflection_identities() -> Check {
    let name = "min-colless-endpoints-and-reflection";
    for k in 2..=12 {
        if !cn_properties_check(k) {
            return Check::fail(name, format!("k = {k}"));
        }
    }
    Check::pass(name, "k <= 12".to_string())
}

fn midpoint_identity(max_n: u64) -> Check {
    let name = "scaled-distance-midpoint-identity";
    let mut covered = 0;
    for n in (3..=max_n).step_by(2) {
        match fi_identity_check(n) {
            Ok(true) => covered += 1,
            Ok(false) => return Check::fail(name, format!("n = {n}")),
            Err(_) => {} // outside the identity's domain
        }
    }
    Check::pass(name, format!("{covered} odd n <= {max_n}"))
}

fn closed_form_segments(max_n: u64) -> Check {
    // On (2^(k-1), 3*2^(k-2)] the coarsest summand equals n - 2^(k-1); on
    // (3*2^(k-2), 2^k] it equals 2^k - n.
    let name = "scaled-distance-closed-forms";
    for n in 2..=max_n {
        let k = ceil_log2(n);
        let x = DyadicRational::new(n as i128, k - 1);
        let f = x.nearest_int_distance().scale_pow2(k - 1);
        let expected = if 4 * n <= 3u64 << k {
            n - (1u64 << (k - 1))
        } else {
            (1u64 << k) - n
        };
        if f != DyadicRational::from_integer(expected as i128) {
            return Check::fail(name, format!("n = {n}: got {f:?}, expected {expected}"));
        }
    }
    Check::pass(name, format!("n <= {max_n}"))
}

fn distance_subadditivity() -> Check {
    // s(a + b) <= s(a) + s(b), with equality to s(a) when b is an integer;
    // deterministic grid in place of the randomized property test.
    let name = "distance-subadditive";
    for p in -64i128..=64 {
        for q in -64i128..=64 {
            for (ea, eb) in [(0u32, 0u32), (3, 2), (5, 5), (6, 1)] {
                let a = DyadicRational::new(p, ea);
                let b = DyadicRational::new(q, eb);
                let lhs = (a + b).nearest_int_distance();
                let rhs = a.nearest_int_distance() + b.nearest_int_distance();
                if lhs > rhs {
                    return Check::fail(name, format!("a = {a:?}, b = {b:?}"));
                }
                let int_b = DyadicRational::from_integer(q);
                if (a + int_b).nearest_int_distance() != a.nearest_int_distance() {
                    return Check::fail(name, format!("integer shift at a = {a:?}, b = {q}"));
                }
            }
        }
    }
    Check::pass(name, "grid of dyadic pairs".to_string())
}

fn maximally_balanced_minimal(max_n: u64) -> Check {
    let name = "maximally-balanced-achieves-minimum";
    let mut table = MinimaTable::new();
    for n in 1..=max_n {
        let c = colless(&maximally_balanced(n));
        let expected = table.min_colless(n);
        if c != expected {
            return Check::fail(name, format!("n = {n}: colless {c}, minimum {expected}"));
        }
    }
    Check::pass(name, format!("n <= {max_n}"))
}

fn gfb_minimal(max_n: u64) -> Check {
    let name = "greedy-bottom-achieves-minimum";
    let mut table = MinimaTable::new();
    for n in 1..=max_n {
        let c = colless(&gfb(n));
        let expected = table.min_colless(n);
        if c != expected {
            return Check::fail(name, format!("n = {n}: colless {c}, minimum {expected}"));
        }
    }
    Check::pass(name, format!("n <= {max_n}"))
}

fn gfb_partition_and_subtrees(max_n: u64) -> Check {
    // The closed-form root partition, the fully balanced side it promises,
    // and both subtrees being the GFB trees of their sizes.
    let name = "greedy-bottom-decomposition";
    for n in 2..=max_n {
        let t = gfb(n);
        let (l, r) = t.children().expect("n >= 2");
        let (n_a, n_b) = gfb_root_partition(n);
        if (l.leaf_count(), r.leaf_count()) != (n_a, n_b) {
            return Check::fail(
                name,
                format!(
                    "n = {n}: partition ({}, {}) vs closed form ({n_a}, {n_b})",
                    l.leaf_count(),
                    r.leaf_count()
                ),
            );
        }
        let k = ceil_log2(n);
        let four_n = 4 * n;
        let three_pow = 3u64 << k;
        let balanced_ok = if four_n < three_pow {
            r.is_isomorphic_to(&fully_balanced(k - 2))
        } else if four_n == three_pow {
            l.is_isomorphic_to(&fully_balanced(k - 1)) && r.is_isomorphic_to(&fully_balanced(k - 2))
        } else {
            l.is_isomorphic_to(&fully_balanced(k - 1))
        };
        if !balanced_ok {
            return Check::fail(name, format!("n = {n}: promised side not fully balanced"));
        }
        if !l.is_isomorphic_to(&gfb(n_a)) || !r.is_isomorphic_to(&gfb(n_b)) {
            return Check::fail(name, format!("n = {n}: subtrees are not gfb({n_a}), gfb({n_b})"));
        }
    }
    Check::pass(name, format!("n <= {max_n}"))
}

fn gfb_shared_subtree(max_n: u64) -> Check {
    // For n != 3*2^(k-2), the trees on n-1, n, n+1 leaves share a fully
    // balanced root subtree: height k-2 below 3*2^(k-2), height k-1 above.
    let name = "greedy-bottom-shared-subtree";
    for n in 2..=max_n {
        let k = ceil_log2(n);
        let four_n = 4 * n;
        let three_pow = 3u64 << k;
        if four_n == three_pow {
            continue;
        }
        let height = if four_n < three_pow { k - 2 } else { k - 1 };
        let shared = fully_balanced(height);
        for m in [n - 1, n, n + 1] {
            let t = gfb(m);
            let present = match t.children() {
                // The 1-leaf tree is itself the fully balanced tree of
                // height 0.
                None => height == 0,
                Some((l, r)) => {
                    l.is_isomorphic_to(&shared) || r.is_isomorphic_to(&shared)
                }
            };
            if !present {
                return Check::fail(
                    name,
                    format!("n = {n}: gfb({m}) lacks the balanced subtree of height {height}"),
                );
            }
        }
    }
    Check::pass(name, format!("n <= {max_n}"))
}

fn count_sequences() -> Check {
    let name = "count-sequences-first-32";
    let mut t = CountTable::new();
    for (i, &expected) in COLLESS_MINIMAL_COUNTS.iter().enumerate() {
        let n = i as u64 + 1;
        let got = t.colless_minimal_count(n);
        if got != BigUint::from(expected) {
            return Check::fail(name, format!("colless-minimal count at n = {n}: {got}"));
        }
    }
    for (i, &expected) in BOUND_B_COUNTS.iter().enumerate() {
        let n = i as u64 + 1;
        let got = t.bound_b_count(n);
        if got != BigUint::from(expected) {
            return Check::fail(name, format!("filtered count at n = {n}: {got}"));
        }
    }
    Check::pass(name, "n <= 32".to_string())
}

fn sackin_evaluators_agree() -> Check {
    let name = "sackin-count-evaluators-agree";
    let mut t = CountTable::new();
    for n in 3..=128 {
        let primary = t.sackin_minimal_count(n);
        let alt = t.sackin_minimal_count_alt(n);
        if primary != alt {
            return Check::fail(name, format!("n = {n}: primary {primary}, split form {alt}"));
        }
    }
    Check::pass(name, "3 <= n <= 128".to_string())
}

fn counts_below_counts(max_n: u64) -> Check {
    // colless-minimal <= filtered <= sackin-minimal, as counts.
    let name = "count-orderings";
    let mut t = CountTable::new();
    for n in 1..=max_n {
        let c = t.colless_minimal_count(n);
        let b = t.bound_b_count(n);
        let s = t.sackin_minimal_count(n);
        if !(c <= b && b <= s) {
            return Check::fail(name, format!("n = {n}: {c} / {b} / {s}"));
        }
    }
    Check::pass(name, format!("n <= {max_n}"))
}

fn zero_colless_uniqueness(enum_max: u64, guard: u64) -> Result<Check, CensusError> {
    // Exactly one zero-Colless shape exists on 2^k leaves: the fully
    // balanced tree. Enumeration for small k, the counting recursion above.
    let name = "zero-colless-uniqueness";
    let mut k = 1;
    while (1u64 << k) <= enum_max {
        let n = 1u64 << k;
        let mut zero_shapes = Vec::new();
        for shape in enumerate_shapes_guarded(n, guard)? {
            if colless(&shape) == 0 {
                zero_shapes.push(shape);
            }
        }
        if zero_shapes.len() != 1 || !zero_shapes[0].is_isomorphic_to(&fully_balanced(k)) {
            return Ok(Check::fail(name, format!("k = {k}: {} shapes", zero_shapes.len())));
        }
        k += 1;
    }
    let mut t = CountTable::new();
    for k in 1..=10u32 {
        if min_colless_explicit(1 << k) != 0 {
            return Ok(Check::fail(name, format!("k = {k}: minimum is not zero")));
        }
        if t.colless_minimal_count(1 << k) != BigUint::one() {
            return Ok(Check::fail(name, format!("k = {k}: count is not one")));
        }
    }
    Ok(Check::pass(name, format!("enumerated 2^k <= {enum_max}, counted k <= 10")))
}

fn enumeration_cross_checks(enum_max: u64, guard: u64) -> Result<Check, CensusError> {
    // One exhaustive pass per n: the enumerated minimum matches the formula,
    // counts match the recursions, totals match the independent recurrence,
    // minimal Sackin matches the maximally balanced tree, and the census's
    // internal predicate/containment assertions all run.
    let name = "enumeration-cross-checks";
    let mut counts = CountTable::new();
    let mut minima = MinimaTable::new();
    for n in 1..=enum_max {
        let c = census_guarded(n, guard, false)?;
        let expected_min = min_colless_explicit(n);
        if c.colless_min_value != expected_min {
            return Ok(Check::fail(
                name,
                format!("n = {n}: enumerated minimum {} vs formula {expected_min}", c.colless_min_value),
            ));
        }
        if c.colless_min_count != counts.colless_minimal_count(n) {
            return Ok(Check::fail(name, format!("n = {n}: colless-minimal count")));
        }
        if c.sackin_min_count != counts.sackin_minimal_count(n) {
            return Ok(Check::fail(name, format!("n = {n}: sackin-minimal count")));
        }
        if c.sackin_min_value != minima.min_sackin(n) {
            return Ok(Check::fail(name, format!("n = {n}: sackin minimum")));
        }
        if c.total_shapes != wedderburn_etherington(n) {
            return Ok(Check::fail(name, format!("n = {n}: total shape count")));
        }
        if n as usize <= SHAPE_COUNTS.len()
            && c.total_shapes != BigUint::from(SHAPE_COUNTS[n as usize - 1])
        {
            return Ok(Check::fail(name, format!("n = {n}: frozen shape count")));
        }
    }
    Ok(Check::pass(name, format!("n <= {enum_max}")))
}

fn observed_partitions(enum_max: u64, guard: u64) -> Result<Check, CensusError> {
    // Root partitions of Colless-minimal shapes match the c-value
    // characterization exactly, contain no distinct-odd pair, and every one
    // passes the necessary-condition filter.
    let name = "optimal-partitions-match-enumeration";
    let mut minima = MinimaTable::new();
    for n in 2..=enum_max {
        let observed = colless_minimal_partitions(n, guard)?;
        let predicted: BTreeSet<(u64, u64)> = minima.qb_set(n).into_iter().collect();
        if observed != predicted {
            return Ok(Check::fail(
                name,
                format!("n = {n}: enumeration {observed:?} vs characterization {predicted:?}"),
            ));
        }
        for &(n_a, n_b) in &observed {
            if n_a != n_b && n_a % 2 == 1 && n_b % 2 == 1 {
                return Ok(Check::fail(name, format!("n = {n}: distinct odd pair ({n_a}, {n_b})")));
            }
            if partition_necessary_ok(n, n_a, n_b) != Ok(true) {
                return Ok(Check::fail(
                    name,
                    format!("n = {n}: ({n_a}, {n_b}) fails the necessary condition"),
                ));
            }
        }
    }
    Ok(Check::pass(name, format!("n <= {enum_max}")))
}

fn decomposition_identity(enum_max: u64, guard: u64) -> Result<Check, CensusError> {
    // colless(T) = colless(T_a) + colless(T_b) + (n_a - n_b) and
    // sackin(T) = sackin(T_a) + sackin(T_b) + n on every enumerated shape.
    let name = "index-decomposition-identities";
    for n in 2..=enum_max {
        for shape in enumerate_shapes_guarded(n, guard)? {
            let (l, r) = shape.children().expect("n >= 2");
            let diff = l.leaf_count().abs_diff(r.leaf_count());
            if colless(&shape) != colless(l) + colless(r) + diff {
                return Ok(Check::fail(name, format!("colless at {shape:?}")));
            }
            if sackin(&shape) != sackin(l) + sackin(r) + n {
                return Ok(Check::fail(name, format!("sackin at {shape:?}")));
            }
        }
    }
    Ok(Check::pass(name, format!("n <= {enum_max}")))
}

fn caterpillar_maximum(enum_max: u64, guard: u64) -> Result<Check, CensusError> {
    let name = "caterpillar-maximizes-colless";
    for n in 2..=enum_max {
        let bound = max_colless(n);
        let mut attained = 0u64;
        for shape in enumerate_shapes_guarded(n, guard)? {
            let c = colless(&shape);
            if c > bound {
                return Ok(Check::fail(name, format!("n = {n}: {c} exceeds {bound}")));
            }
            if c == bound {
                attained += 1;
                if !shape.is_isomorphic_to(&caterpillar(n)) {
                    return Ok(Check::fail(name, format!("n = {n}: non-caterpillar maximum")));
                }
            }
        }
        if attained != 1 {
            return Ok(Check::fail(name, format!("n = {n}: {attained} maxima")));
        }
    }
    Ok(Check::pass(name, format!("n <= {enum_max}")))
}

fn newick_roundtrip(enum_max: u64, guard: u64) -> Result<Check, CensusError> {
    let name = "newick-roundtrip";
    for n in 1..=enum_max {
        for shape in enumerate_shapes_guarded(n, guard)? {
            let parsed = match TreeShape::parse_newick(&shape.to_newick()) {
                Ok(p) => p,
                Err(e) => return Ok(Check::fail(name, format!("{shape:?}: {e}"))),
            };
            if parsed.canonical_key() != shape.canonical_key() {
                return Ok(Check::fail(name, format!("{shape:?} round-trips differently")));
            }
        }
    }
    Ok(Check::pass(name, format!("n <= {enum_max}")))
}
