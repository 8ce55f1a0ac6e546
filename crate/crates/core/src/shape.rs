//! Rooted binary tree shapes: construction, canonical form, and Newick I/O.
//!
//! A *shape* is a rooted tree in which every internal node has exactly two
//! children and neither leaves nor edges carry any data. Shapes are immutable
//! values; cloning is cheap and identical subtrees may share storage, so
//! constructions like the fully balanced tree cost O(height) memory.
//!
//! Two shapes are *isomorphic* when one can be turned into the other by
//! swapping children at internal nodes. [`TreeShape::canonicalize`] picks a
//! unique representative of each isomorphism class and
//! [`TreeShape::canonical_key`] exposes a total order key so that
//! `key(a) == key(b)` exactly when `a` and `b` are isomorphic.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

/// An unlabeled rooted binary tree shape.
#[derive(Clone)]
pub struct TreeShape(Arc<Node>);

enum Node {
    Leaf,
    Internal {
        left: TreeShape,
        right: TreeShape,
        // Cached so that leaf_count() is O(1) at every node.
        leaves: u64,
    },
}

fn leaf_node() -> &'static Arc<Node> {
    // All leaves are indistinguishable, so a single shared node serves them all.
    static LEAF: OnceLock<Arc<Node>> = OnceLock::new();
    LEAF.get_or_init(|| Arc::new(Node::Leaf))
}

impl TreeShape {
    /// The one-leaf shape.
    pub fn leaf() -> TreeShape {
        TreeShape(leaf_node().clone())
    }

    /// Joins two shapes under a new root. Children keep the given order;
    /// use [`internal_canonical`] when a canonical result is wanted.
    pub fn internal(left: TreeShape, right: TreeShape) -> TreeShape {
        let leaves = left.leaf_count() + right.leaf_count();
        TreeShape(Arc::new(Node::Internal { left, right, leaves }))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(*self.0, Node::Leaf)
    }

    /// Number of leaves, from the per-node cache.
    pub fn leaf_count(&self) -> u64 {
        match *self.0 {
            Node::Leaf => 1,
            Node::Internal { leaves, .. } => leaves,
        }
    }

    /// The two children of the root, or `None` for a leaf.
    pub fn children(&self) -> Option<(&TreeShape, &TreeShape)> {
        match &*self.0 {
            Node::Leaf => None,
            Node::Internal { left, right, .. } => Some((left, right)),
        }
    }

    /// The canonical representative of this shape's isomorphism class:
    /// at every internal node the child with more leaves comes first, and
    /// equal-sized children are ordered by their encodings. Idempotent.
    pub fn canonicalize(&self) -> TreeShape {
        fold(self, &mut |node, built: Option<(TreeShape, TreeShape)>| match built {
            None => TreeShape::leaf(),
            Some((l, r)) => {
                debug_assert_eq!(node.leaf_count(), l.leaf_count() + r.leaf_count());
                internal_canonical(l, r)
            }
        })
    }

    /// Total order key: `a.canonical_key() == b.canonical_key()` iff the two
    /// shapes are isomorphic. The key is the preorder bit encoding (internal
    /// node 1, leaf 0) of the canonical form.
    pub fn canonical_key(&self) -> CanonicalKey {
        CanonicalKey(encode(&self.canonicalize()).into_boxed_slice())
    }

    /// Isomorphism test via canonical comparison.
    pub fn is_isomorphic_to(&self, other: &TreeShape) -> bool {
        if self.leaf_count() != other.leaf_count() {
            return false;
        }
        canonical_cmp(&self.canonicalize(), &other.canonicalize()) == Ordering::Equal
    }

    /// Emits the shape as unlabeled Newick in stored child order, e.g.
    /// `"((,),);"` for the left-heavy three-leaf shape and `";"` for a
    /// single leaf. `parse_newick(to_newick(t)) == t`; emit
    /// `t.canonicalize()` for a canonical string.
    pub fn to_newick(&self) -> String {
        let mut out = String::with_capacity(2 * self.leaf_count() as usize + 1);
        enum Item<'a> {
            Shape(&'a TreeShape),
            Ch(char),
        }
        let mut stack = vec![Item::Shape(self)];
        while let Some(item) = stack.pop() {
            match item {
                Item::Ch(c) => out.push(c),
                Item::Shape(s) => match s.children() {
                    None => {} // leaves are empty labels
                    Some((l, r)) => {
                        stack.push(Item::Ch(')'));
                        stack.push(Item::Shape(r));
                        stack.push(Item::Ch(','));
                        stack.push(Item::Shape(l));
                        stack.push(Item::Ch('('));
                    }
                },
            }
        }
        out.push(';');
        out
    }

    /// Parses a Newick string into a shape.
    ///
    /// Labels (`[A-Za-z0-9_.-]+`) and branch lengths (`:` followed by a
    /// decimal) are accepted and discarded; whitespace between tokens is
    /// ignored. As an extension beyond the strict grammar, a label/length
    /// after a closing parenthesis is also accepted and discarded. Child
    /// order in the input is preserved (no canonicalization on input).
    pub fn parse_newick(text: &str) -> Result<TreeShape, NewickError> {
        Parser::new(text).parse()
    }
}

/// Joins two shapes that are already canonical into a canonical parent.
pub(crate) fn internal_canonical(a: TreeShape, b: TreeShape) -> TreeShape {
    let swap = match b.leaf_count().cmp(&a.leaf_count()) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => canonical_cmp(&b, &a) == Ordering::Less,
    };
    if swap {
        TreeShape::internal(b, a)
    } else {
        TreeShape::internal(a, b)
    }
}

/// Compares the preorder encodings of two shapes that are already in
/// canonical form, without materializing the encodings. Shared subtrees
/// compare in O(1).
pub(crate) fn canonical_cmp(a: &TreeShape, b: &TreeShape) -> Ordering {
    let mut stack: Vec<(&TreeShape, &TreeShape)> = vec![(a, b)];
    while let Some((x, y)) = stack.pop() {
        if Arc::ptr_eq(&x.0, &y.0) {
            continue; // identical storage means identical encoding segments
        }
        match (&*x.0, &*y.0) {
            (Node::Leaf, Node::Leaf) => {}
            (Node::Leaf, Node::Internal { .. }) => return Ordering::Less,
            (Node::Internal { .. }, Node::Leaf) => return Ordering::Greater,
            (
                Node::Internal { left: xl, right: xr, .. },
                Node::Internal { left: yl, right: yr, .. },
            ) => {
                stack.push((xr, yr));
                stack.push((xl, yl));
            }
        }
    }
    Ordering::Equal
}

fn encode(canon: &TreeShape) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(2 * canon.leaf_count() as usize - 1);
    let mut stack = vec![canon];
    while let Some(s) = stack.pop() {
        match s.children() {
            None => bytes.push(0),
            Some((l, r)) => {
                bytes.push(1);
                stack.push(r);
                stack.push(l);
            }
        }
    }
    bytes
}

/// Post-order fold over the logical tree with an explicit stack, so deep
/// shapes (a caterpillar has height n-1) cannot overflow the call stack.
/// `step` receives the node and, for internal nodes, the results of its
/// two children in order.
pub(crate) fn fold<R>(
    root: &TreeShape,
    step: &mut impl FnMut(&TreeShape, Option<(R, R)>) -> R,
) -> R {
    enum Phase<'a> {
        Enter(&'a TreeShape),
        Exit(&'a TreeShape),
    }
    let mut stack = vec![Phase::Enter(root)];
    let mut results: Vec<R> = Vec::new();
    while let Some(phase) = stack.pop() {
        match phase {
            Phase::Enter(s) => match s.children() {
                None => results.push(step(s, None)),
                Some((l, r)) => {
                    stack.push(Phase::Exit(s));
                    stack.push(Phase::Enter(r));
                    stack.push(Phase::Enter(l));
                }
            },
            Phase::Exit(s) => {
                let r = results.pop().expect("right child result");
                let l = results.pop().expect("left child result");
                results.push(step(s, Some((l, r))));
            }
        }
    }
    results.pop().expect("root result")
}

impl PartialEq for TreeShape {
    /// Structural equality in the stored child order (not isomorphism;
    /// compare canonical forms or keys for that).
    fn eq(&self, other: &Self) -> bool {
        let mut stack: Vec<(&TreeShape, &TreeShape)> = vec![(self, other)];
        while let Some((x, y)) = stack.pop() {
            if Arc::ptr_eq(&x.0, &y.0) {
                continue;
            }
            match (&*x.0, &*y.0) {
                (Node::Leaf, Node::Leaf) => {}
                (
                    Node::Internal { left: xl, right: xr, leaves: xn },
                    Node::Internal { left: yl, right: yr, leaves: yn },
                ) => {
                    if xn != yn {
                        return false;
                    }
                    stack.push((xr, yr));
                    stack.push((xl, yl));
                }
                _ => return false,
            }
        }
        true
    }
}

impl Eq for TreeShape {}

impl Drop for TreeShape {
    /// Tears down solely-owned spines iteratively; the derived drop would
    /// recurse once per level and overflow on deep caterpillars.
    fn drop(&mut self) {
        if self.is_leaf() {
            return;
        }
        let mut pending: Vec<Arc<Node>> = Vec::new();
        detach_children(&mut self.0, &mut pending);
        while let Some(mut arc) = pending.pop() {
            detach_children(&mut arc, &mut pending);
            // `arc` drops here with leaf children, so the drop is shallow.
        }
    }
}

fn detach_children(arc: &mut Arc<Node>, pending: &mut Vec<Arc<Node>>) {
    if let Some(Node::Internal { left, right, .. }) = Arc::get_mut(arc) {
        if !left.is_leaf() {
            pending.push(std::mem::replace(&mut left.0, leaf_node().clone()));
        }
        if !right.is_leaf() {
            pending.push(std::mem::replace(&mut right.0, leaf_node().clone()));
        }
    }
}

impl fmt::Debug for TreeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Parenthesized structure in stored order, without canonicalizing.
        enum Item<'a> {
            Shape(&'a TreeShape),
            Ch(char),
        }
        let mut stack = vec![Item::Shape(self)];
        while let Some(item) = stack.pop() {
            match item {
                Item::Ch(c) => write!(f, "{c}")?,
                Item::Shape(s) => match s.children() {
                    None => write!(f, "*")?,
                    Some((l, r)) => {
                        stack.push(Item::Ch(')'));
                        stack.push(Item::Shape(r));
                        stack.push(Item::Ch(','));
                        stack.push(Item::Shape(l));
                        stack.push(Item::Ch('('));
                    }
                },
            }
        }
        Ok(())
    }
}

/// Materialized canonical encoding; orders and hashes like the shape's
/// isomorphism class.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Box<[u8]>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey(")?;
        for b in self.0.iter() {
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

/// Newick syntax error, with the byte offset where it was detected.
#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum NewickError {
    #[error("empty input at byte {0}")]
    Empty(usize),
    #[error("unbalanced parenthesis at byte {0}")]
    Unbalanced(usize),
    #[error("node with {found} children at byte {at}; exactly 2 required")]
    NotBinary { at: usize, found: usize },
    #[error("missing ';' terminator at byte {0}")]
    MissingTerminator(usize),
    #[error("malformed branch length at byte {0}")]
    BadLength(usize),
    #[error("unexpected character {ch:?} at byte {at}")]
    Unexpected { at: usize, ch: char },
    #[error("trailing input after ';' at byte {0}")]
    Trailing(usize),
}

impl NewickError {
    /// Byte offset at which the error was detected.
    pub fn offset(&self) -> usize {
        match *self {
            NewickError::Empty(at)
            | NewickError::Unbalanced(at)
            | NewickError::MissingTerminator(at)
            | NewickError::BadLength(at)
            | NewickError::Trailing(at)
            | NewickError::NotBinary { at, .. }
            | NewickError::Unexpected { at, .. } => at,
        }
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

// An internal node under construction: children seen so far plus the byte
// offset of its '(' for error reporting.
struct Frame {
    children: Vec<TreeShape>,
    open_at: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { bytes: text.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn unexpected(&self) -> NewickError {
        match self.peek() {
            Some(b) => NewickError::Unexpected { at: self.pos, ch: b as char },
            None => NewickError::MissingTerminator(self.pos),
        }
    }

    fn is_label_byte(b: u8) -> bool {
        b.is_ascii_alphanumeric() || b == b'_' || b == b'.' || b == b'-'
    }

    /// Consumes `Label? Length?`; both parts are discarded.
    fn skip_label_and_length(&mut self) -> Result<(), NewickError> {
        self.skip_ws();
        while self.peek().is_some_and(Self::is_label_byte) {
            self.pos += 1;
        }
        self.skip_ws();
        if self.peek() == Some(b':') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            let mut digits = 0;
            while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                self.pos += 1;
                digits += 1;
            }
            if self.peek() == Some(b'.') {
                self.pos += 1;
                while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                    self.pos += 1;
                    digits += 1;
                }
            }
            if digits == 0 {
                return Err(NewickError::BadLength(start));
            }
            if matches!(self.peek(), Some(b'e') | Some(b'E')) {
                self.pos += 1;
                if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                    self.pos += 1;
                }
                let mut exp_digits = 0;
                while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                    self.pos += 1;
                    exp_digits += 1;
                }
                if exp_digits == 0 {
                    return Err(NewickError::BadLength(self.pos));
                }
            }
        }
        Ok(())
    }

    fn parse(mut self) -> Result<TreeShape, NewickError> {
        self.skip_ws();
        if self.peek().is_none() {
            return Err(NewickError::Empty(self.pos));
        }
        let mut stack: Vec<Frame> = Vec::new();
        // The subtree most recently completed, waiting for ',' / ')' / ';'.
        let mut done: Option<TreeShape> = None;
        loop {
            if done.is_none() {
                // At the start of a subtree.
                self.skip_ws();
                if self.peek() == Some(b'(') {
                    stack.push(Frame { children: Vec::new(), open_at: self.pos });
                    self.pos += 1;
                    continue;
                }
                // A leaf: possibly-empty label, optional length.
                self.skip_label_and_length()?;
                done = Some(TreeShape::leaf());
            }
            self.skip_ws();
            match self.peek() {
                Some(b',') => {
                    let frame = match stack.last_mut() {
                        Some(f) => f,
                        // A comma outside any parentheses.
                        None => return Err(self.unexpected()),
                    };
                    frame.children.push(done.take().expect("completed subtree"));
                    if frame.children.len() == 2 {
                        return Err(NewickError::NotBinary { at: self.pos, found: 3 });
                    }
                    self.pos += 1;
                }
                Some(b')') => {
                    let mut frame = match stack.pop() {
                        Some(f) => f,
                        None => return Err(NewickError::Unbalanced(self.pos)),
                    };
                    frame.children.push(done.take().expect("completed subtree"));
                    if frame.children.len() != 2 {
                        return Err(NewickError::NotBinary {
                            at: self.pos,
                            found: frame.children.len(),
                        });
                    }
                    self.pos += 1;
                    // Extension: tolerate a label/length on an internal node.
                    self.skip_label_and_length()?;
                    let right = frame.children.pop().expect("two children");
                    let left = frame.children.pop().expect("two children");
                    done = Some(TreeShape::internal(left, right));
                }
                Some(b';') => {
                    if !stack.is_empty() {
                        return Err(NewickError::Unbalanced(self.pos));
                    }
                    self.pos += 1;
                    self.skip_ws();
                    if self.peek().is_some() {
                        return Err(NewickError::Trailing(self.pos));
                    }
                    return Ok(done.take().expect("completed subtree"));
                }
                Some(_) => return Err(self.unexpected()),
                None => {
                    // Point at the innermost unclosed '(' when there is one.
                    return match stack.last() {
                        None => Err(NewickError::MissingTerminator(self.pos)),
                        Some(frame) => Err(NewickError::Unbalanced(frame.open_at)),
                    };
                }
            }
        }
    }
}
