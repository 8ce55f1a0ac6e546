//! Balance indices on rooted binary tree shapes.
//!
//! A *shape* is a rooted tree in which every internal node has exactly two
//! children and leaves are unlabeled; two shapes are the same exactly when
//! they are isomorphic as rooted trees. This crate computes the classical
//! balance indices of a shape, the minimal Colless index attainable on a
//! given number of leaves, the shapes that attain it, and exact counts of
//! those shapes:
//!
//! - [`shape`]: the [`TreeShape`] type, Newick parsing and printing,
//!   canonical forms and isomorphism keys. All traversals are iterative, so
//!   caterpillar-deep trees are safe.
//! - [`indices`]: Colless, Sackin, cherry count, height, and the aggregate
//!   [`BalanceReport`].
//! - [`minima`]: the minimal Colless value `c(n)` by three independent
//!   routes (recursion, integer closed form, exact dyadic arithmetic), the
//!   set of root partitions optimal shapes can have, and the minimal Sackin
//!   value.
//! - [`builders`]: caterpillar, fully balanced, maximally balanced, and
//!   greedy-from-the-bottom constructions.
//! - [`census`]: exhaustive enumeration of all shapes on n leaves (guarded;
//!   the count grows as ~2.48^n) and exact counting of minimal shapes by
//!   recursion, in arbitrary precision.
//! - [`verify`]: a battery of cross-checks wiring the routes against each
//!   other, runnable from the CLI.
//!
//! ```
//! use treebalance::{BalanceReport, TreeShape};
//!
//! let shape = TreeShape::parse_newick("((a,b),(c,(d,e)));").unwrap();
//! let report = BalanceReport::of(&shape);
//! assert_eq!(report.leaves, 5);
//! assert_eq!(report.colless, 2);
//! assert_eq!(treebalance::min_colless(5), 2);
//! ```

pub mod builders;
pub mod census;
pub mod indices;
pub mod minima;
pub mod shape;
pub mod verify;

pub use builders::{
    caterpillar, fully_balanced, gfb, gfb_root_partition, maximally_balanced, BuildError,
    BuilderKind,
};
pub use census::{
    census, census_guarded, count_bound_b, count_colless_minimal, count_sackin_minimal,
    enumerate_shapes, enumerate_shapes_guarded, is_colless_minimal, is_sackin_minimal,
    wedderburn_etherington, CensusError, CensusResult, CountTable, ShapeEnumeration,
    DEFAULT_ENUM_GUARD,
};
pub use indices::{cherries, colless, height, max_colless, sackin, BalanceReport};
pub use minima::{
    max_min_bound, min_colless_explicit, min_colless_recursive, min_sackin_value, qb_set,
    DyadicRational, MinimaError, MinimaTable,
};
pub use shape::{CanonicalKey, NewickError, TreeShape};
pub use verify::{Check, VerifyReport};

/// The minimal Colless index over all shapes with `n` leaves, by the integer
/// closed form. See [`minima`] for the other evaluation routes.
pub fn min_colless(n: u64) -> u64 {
    minima::min_colless_explicit(n)
}
