//! Constructions of named shape families: caterpillar, fully balanced,
//! maximally balanced, and the greedy-from-the-bottom (GFB) tree.
//!
//! All builders return shapes already in canonical form.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::minima::ceil_log2;
use crate::shape::{internal_canonical, TreeShape};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("shapes have at least one leaf (got n = {0})")]
    ZeroLeaves(u64),
    #[error("fully balanced trees need a power-of-two leaf count (got n = {0})")]
    NotPowerOfTwo(u64),
}

/// The shape families this crate can construct directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuilderKind {
    Caterpillar,
    FullyBalanced,
    MaximallyBalanced,
    GreedyFromBottom,
}

impl BuilderKind {
    /// Builds the family member on n leaves. `FullyBalanced` requires n to
    /// be a power of two.
    pub fn build(self, n: u64) -> Result<TreeShape, BuildError> {
        if n == 0 {
            return Err(BuildError::ZeroLeaves(n));
        }
        match self {
            BuilderKind::Caterpillar => Ok(caterpillar(n)),
            BuilderKind::FullyBalanced => {
                if n.is_power_of_two() {
                    Ok(fully_balanced(n.trailing_zeros()))
                } else {
                    Err(BuildError::NotPowerOfTwo(n))
                }
            }
            BuilderKind::MaximallyBalanced => Ok(maximally_balanced(n)),
            BuilderKind::GreedyFromBottom => Ok(gfb(n)),
        }
    }
}

/// The caterpillar on n leaves: every internal node has a leaf child.
/// Uniquely maximizes the Colless index.
pub fn caterpillar(n: u64) -> TreeShape {
    assert!(n >= 1, "shapes have at least one leaf");
    let mut t = TreeShape::leaf();
    for _ in 1..n {
        t = TreeShape::internal(t, TreeShape::leaf());
    }
    t
}

/// The fully balanced tree of height k: all 2^k leaves at depth k. Subtrees
/// share storage, so this is O(k) allocations.
pub fn fully_balanced(k: u32) -> TreeShape {
    assert!(k <= 62, "leaf count 2^{k} would overflow u64");
    let mut t = TreeShape::leaf();
    for _ in 0..k {
        t = TreeShape::internal(t.clone(), t);
    }
    t
}

/// The maximally balanced tree on n leaves: split ceil(n/2) / floor(n/2) at
/// the root and recurse. Every internal node has balance value at most one.
pub fn maximally_balanced(n: u64) -> TreeShape {
    assert!(n >= 1, "shapes have at least one leaf");
    fn build(n: u64, memo: &mut HashMap<u64, TreeShape>) -> TreeShape {
        if n == 1 {
            return TreeShape::leaf();
        }
        if let Some(t) = memo.get(&n) {
            return t.clone();
        }
        // Larger half first keeps the result canonical; equal halves are
        // the same memoized shape, so either order is canonical then.
        let a = build(n.div_ceil(2), memo);
        let b = build(n / 2, memo);
        let t = TreeShape::internal(a, b);
        memo.insert(n, t.clone());
        t
    }
    // Only O(log n) distinct sizes arise, so the memo keeps this small even
    // though recursion would otherwise touch O(n) nodes.
    build(n, &mut HashMap::new())
}

/// Greedy-from-the-bottom: start from n single-leaf trees and repeatedly
/// merge a smallest tree with a smallest tree among the rest. The canonical
/// result is independent of how ties are broken (the tie-break tests drive
/// random orders against this one), so this entry point just takes the
/// first member of the smallest bucket; scanning the bucket for a canonical
/// representative would cost a tree comparison per merge for nothing.
pub fn gfb(n: u64) -> TreeShape {
    gfb_with_tie_break(n, |_| 0)
}

/// GFB with an explicit tie-break: `pick` selects which member of the
/// current smallest-size bucket to take. Exposed so tests can drive the
/// merge order with random choices and confirm the canonical result never
/// changes.
pub fn gfb_with_tie_break(n: u64, mut pick: impl FnMut(&[TreeShape]) -> usize) -> TreeShape {
    assert!(n >= 1, "shapes have at least one leaf");
    let n_usize = usize::try_from(n).expect("gfb pool fits in memory");
    let mut pool: BTreeMap<u64, Vec<TreeShape>> = BTreeMap::new();
    pool.insert(1, vec![TreeShape::leaf(); n_usize]);
    let mut remaining = n;
    let take_min = |pool: &mut BTreeMap<u64, Vec<TreeShape>>,
                        pick: &mut dyn FnMut(&[TreeShape]) -> usize| {
        let (&size, bucket) = pool.iter_mut().next().expect("pool not empty");
        let idx = pick(bucket);
        let t = bucket.swap_remove(idx);
        if bucket.is_empty() {
            pool.remove(&size);
        }
        t
    };
    while remaining > 1 {
        let u = take_min(&mut pool, &mut pick);
        let v = take_min(&mut pool, &mut pick);
        let merged = internal_canonical(u, v);
        pool.entry(merged.leaf_count()).or_default().push(merged);
        remaining -= 1;
    }
    let (_, mut bucket) = pool.pop_first().expect("one tree remains");
    bucket.pop().expect("one tree remains")
}

/// Root partition (n_a, n_b) of the GFB tree on n leaves, n >= 2, in closed
/// form. With k = ceil(log2 n):
///
/// * n in (2^(k-1), 3*2^(k-2)): (n - 2^(k-2), 2^(k-2)), smaller side fully
///   balanced of height k-2;
/// * n = 3*2^(k-2): (2^(k-1), 2^(k-2)), both sides fully balanced;
/// * n in (3*2^(k-2), 2^k]: (2^(k-1), n - 2^(k-1)), larger side fully
///   balanced of height k-1.
pub fn gfb_root_partition(n: u64) -> (u64, u64) {
    assert!(n >= 2, "the root partition needs at least two leaves");
    let k = ceil_log2(n);
    // Compare 4n against 3*2^k to sidestep the fractional 3*2^(k-2) at k=1.
    let four_n = 4 * n;
    let three_pow = 3u64 << k;
    if four_n < three_pow {
        let q = 1u64 << (k - 2);
        (n - q, q)
    } else if four_n == three_pow {
        (1u64 << (k - 1), 1u64 << (k - 2))
    } else {
        let h = 1u64 << (k - 1);
        (h, n - h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indices::{colless, height, report};

    #[test]
    fn caterpillar_small() {
        assert_eq!(caterpillar(1), TreeShape::leaf());
        assert_eq!(caterpillar(2).to_newick(), "(,);");
        let t = caterpillar(5);
        assert_eq!(t.leaf_count(), 5);
        assert_eq!(report(&t).root_partition, (4, 1));
        assert_eq!(t, t.canonicalize());
    }

    #[test]
    fn fully_balanced_levels() {
        assert_eq!(fully_balanced(0), TreeShape::leaf());
        assert_eq!(fully_balanced(1).to_newick(), "(,);");
        assert_eq!(fully_balanced(2).to_newick(), "((,),(,));");
        let t = fully_balanced(10);
        assert_eq!(t.leaf_count(), 1024);
        assert_eq!(height(&t), 10);
        assert_eq!(colless(&t), 0);
    }

    #[test]
    fn maximally_balanced_matches_examples() {
        assert_eq!(maximally_balanced(1), TreeShape::leaf());
        assert_eq!(maximally_balanced(6).to_newick(), "(((,),),((,),));");
        let t = maximally_balanced(7);
        assert_eq!(report(&t).root_partition, (4, 3));
        assert_eq!(colless(&t), 2);
        assert_eq!(t, t.canonicalize());
    }

    #[test]
    fn maximally_balanced_every_node_near_balanced() {
        for n in 1..=256 {
            let t = maximally_balanced(n);
            let mut stack = vec![&t];
            while let Some(s) = stack.pop() {
                if let Some((l, r)) = s.children() {
                    assert!(l.leaf_count().abs_diff(r.leaf_count()) <= 1, "n = {n}");
                    stack.push(r);
                    stack.push(l);
                }
            }
        }
    }

    #[test]
    fn maximally_balanced_power_of_two_is_fully_balanced() {
        for k in 0..=10 {
            assert!(maximally_balanced(1 << k).is_isomorphic_to(&fully_balanced(k)));
        }
    }

    #[test]
    fn gfb_examples() {
        let t = gfb(6);
        assert_eq!(report(&t).root_partition, (4, 2));
        assert_eq!(colless(&t), 2);
        assert_eq!(t, t.canonicalize());
        assert_eq!(gfb(1), TreeShape::leaf());
        assert_eq!(gfb(2).to_newick(), "(,);");
    }

    #[test]
    fn gfb_eleven_decomposes_as_seven_four() {
        // Cross-check of the closed-form partition against the construction.
        let t = gfb(11);
        assert_eq!(report(&t).root_partition, (7, 4));
        assert_eq!(gfb_root_partition(11), (7, 4));
        let (_, b) = t.children().unwrap();
        assert!(b.is_isomorphic_to(&fully_balanced(2)));
    }

    #[test]
    fn gfb_root_partition_cases() {
        assert_eq!(gfb_root_partition(2), (1, 1));
        assert_eq!(gfb_root_partition(3), (2, 1));
        assert_eq!(gfb_root_partition(4), (2, 2));
        assert_eq!(gfb_root_partition(6), (4, 2));
        assert_eq!(gfb_root_partition(12), (8, 4));
        assert_eq!(gfb_root_partition(23), (15, 8));
        assert_eq!(gfb_root_partition(1024), (512, 512));
    }

    #[test]
    fn builder_kind_dispatch() {
        assert_eq!(BuilderKind::Caterpillar.build(0), Err(BuildError::ZeroLeaves(0)));
        assert_eq!(BuilderKind::FullyBalanced.build(12), Err(BuildError::NotPowerOfTwo(12)));
        let t = BuilderKind::FullyBalanced.build(8).unwrap();
        assert!(t.is_isomorphic_to(&fully_balanced(3)));
        assert_eq!(BuilderKind::GreedyFromBottom.build(6).unwrap(), gfb(6));
    }

    #[test]
    fn gfb_tie_break_rotation_invariance() {
        // A fixed non-default tie-break must give the same canonical shape.
        for n in 1..=40 {
            let alt = gfb_with_tie_break(n, |bucket| bucket.len() - 1);
            assert_eq!(alt, gfb(n), "n = {n}");
        }
    }
}
