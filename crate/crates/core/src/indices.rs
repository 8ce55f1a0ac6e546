//! Balance statistics of a shape: Colless and Sackin indices, height,
//! cherries, and the root partition.
//!
//! For an internal node v with child subtrees holding k1 and k2 leaves, the
//! node's *balance value* is |k1 - k2|. The Colless index is the sum of
//! balance values over all internal nodes; the Sackin index is the sum of
//! leaf depths, or equivalently the sum over internal nodes of their subtree
//! leaf counts.

use serde::Serialize;

use crate::shape::{fold, TreeShape};

/// All per-shape statistics from one traversal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BalanceReport {
    /// Leaf count n.
    #[serde(rename = "n")]
    pub leaves: u64,
    pub colless: u64,
    pub sackin: u64,
    pub height: u64,
    /// Internal nodes whose children are both leaves.
    pub cherries: u64,
    /// Leaf counts of the root's child subtrees, larger first; (0, 0) for a
    /// single leaf.
    pub root_partition: (u64, u64),
}

impl BalanceReport {
    pub fn of(shape: &TreeShape) -> BalanceReport {
        report(shape)
    }
}

/// Colless index: sum of |k1 - k2| over internal nodes, read from the cached
/// per-node leaf counts.
pub fn colless(shape: &TreeShape) -> u64 {
    let mut sum = 0;
    let mut stack = vec![shape];
    while let Some(s) = stack.pop() {
        if let Some((l, r)) = s.children() {
            sum += l.leaf_count().abs_diff(r.leaf_count());
            stack.push(r);
            stack.push(l);
        }
    }
    sum
}

/// Sackin index: sum over internal nodes of their subtree leaf counts
/// (equivalently, the total depth of all leaves).
pub fn sackin(shape: &TreeShape) -> u64 {
    let mut sum = 0;
    let mut stack = vec![shape];
    while let Some(s) = stack.pop() {
        if let Some((l, r)) = s.children() {
            sum += s.leaf_count();
            stack.push(r);
            stack.push(l);
        }
    }
    sum
}

/// Number of edges on a longest root-to-leaf path.
pub fn height(shape: &TreeShape) -> u64 {
    fold(shape, &mut |_, built: Option<(u64, u64)>| match built {
        None => 0,
        Some((l, r)) => 1 + l.max(r),
    })
}

/// Number of internal nodes with two leaf children.
pub fn cherries(shape: &TreeShape) -> u64 {
    let mut count = 0;
    let mut stack = vec![shape];
    while let Some(s) = stack.pop() {
        if let Some((l, r)) = s.children() {
            if l.is_leaf() && r.is_leaf() {
                count += 1;
            }
            stack.push(r);
            stack.push(l);
        }
    }
    count
}

struct Stats {
    leaves: u64,
    colless: u64,
    sackin: u64,
    height: u64,
    cherries: u64,
}

/// Computes every statistic in a single post-order traversal. Leaf counts are
/// re-derived from scratch here rather than read from the per-node cache, so
/// the report doubles as a cache cross-check in tests.
pub fn report(shape: &TreeShape) -> BalanceReport {
    let stats = fold(shape, &mut |_, built: Option<(Stats, Stats)>| match built {
        None => Stats { leaves: 1, colless: 0, sackin: 0, height: 0, cherries: 0 },
        Some((l, r)) => {
            let leaves = l.leaves + r.leaves;
            Stats {
                leaves,
                colless: l.colless + r.colless + l.leaves.abs_diff(r.leaves),
                sackin: l.sackin + r.sackin + leaves,
                height: 1 + l.height.max(r.height),
                cherries: l.cherries + r.cherries + u64::from(l.leaves == 1 && r.leaves == 1),
            }
        }
    });
    let root_partition = match shape.children() {
        None => (0, 0),
        Some((l, r)) => {
            let (a, b) = (l.leaf_count(), r.leaf_count());
            (a.max(b), a.min(b))
        }
    };
    BalanceReport {
        leaves: stats.leaves,
        colless: stats.colless,
        sackin: stats.sackin,
        height: stats.height,
        cherries: stats.cherries,
        root_partition,
    }
}

/// The largest Colless index over all shapes on n leaves, (n-1)(n-2)/2,
/// attained exactly by the caterpillar.
pub fn max_colless(n: u64) -> u64 {
    assert!(n >= 1, "shapes have at least one leaf");
    if n == 1 {
        return 0;
    }
    (n - 1) * (n - 2) / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{caterpillar, fully_balanced, maximally_balanced};

    #[test]
    fn single_leaf_report() {
        let r = report(&TreeShape::leaf());
        assert_eq!(
            r,
            BalanceReport {
                leaves: 1,
                colless: 0,
                sackin: 0,
                height: 0,
                cherries: 0,
                root_partition: (0, 0),
            }
        );
    }

    #[test]
    fn caterpillar_seven() {
        let t = caterpillar(7);
        let r = report(&t);
        assert_eq!(r.colless, 15);
        assert_eq!(r.sackin, 27);
        assert_eq!(r.height, 6);
        assert_eq!(r.cherries, 1);
        assert_eq!(r.root_partition, (6, 1));
        assert_eq!(colless(&t), 15);
        assert_eq!(max_colless(7), 15);
    }

    #[test]
    fn maximally_balanced_seven() {
        let t = maximally_balanced(7);
        assert_eq!(colless(&t), 2);
        assert_eq!(sackin(&t), 20);
        assert_eq!(height(&t), 3);
    }

    #[test]
    fn fully_balanced_three_levels() {
        let t = fully_balanced(3);
        let r = report(&t);
        assert_eq!(r.leaves, 8);
        assert_eq!(r.colless, 0);
        assert_eq!(r.height, 3);
        assert_eq!(r.cherries, 4);
        assert_eq!(r.root_partition, (4, 4));
    }

    #[test]
    fn triplet_has_colless_one() {
        let t = TreeShape::parse_newick("((,),);").unwrap();
        assert_eq!(colless(&t), 1);
        assert_eq!(sackin(&t), 5);
        assert_eq!(cherries(&t), 1);
    }

    #[test]
    fn caterpillar_height_is_n_minus_one() {
        assert_eq!(report(&caterpillar(12)).height, 11);
    }

    #[test]
    fn report_agrees_with_dedicated_walks() {
        for t in [
            caterpillar(9),
            maximally_balanced(13),
            fully_balanced(4),
            TreeShape::parse_newick("(((,),(,(,))),(,));").unwrap(),
        ] {
            let r = report(&t);
            assert_eq!(r.colless, colless(&t));
            assert_eq!(r.sackin, sackin(&t));
            assert_eq!(r.height, height(&t));
            assert_eq!(r.cherries, cherries(&t));
            assert_eq!(r.leaves, t.leaf_count(), "cached leaf count matches recount");
        }
    }

    #[test]
    fn max_colless_small_values() {
        assert_eq!(max_colless(1), 0);
        assert_eq!(max_colless(2), 0);
        assert_eq!(max_colless(3), 1);
        assert_eq!(max_colless(12), 55);
    }
}
