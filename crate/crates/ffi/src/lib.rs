//! C ABI over the treebalance library.
//!
//! Shapes cross the boundary as opaque `TbShape` handles owned by the
//! caller and released with [`tb_shape_free`]. Every function returns a
//! [`TbStatus`]; results are written through out-pointers only when the
//! status is `TB_STATUS_OK`. Strings returned by the library are released
//! with [`tb_string_free`].

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use treebalance::builders::BuilderKind;
use treebalance::census::{count_colless_minimal, count_sackin_minimal};
use treebalance::indices::{max_colless, report};
use treebalance::minima::{min_colless_explicit, min_sackin_value, MinimaTable};
use treebalance::shape::TreeShape;

/// Largest leaf count the construction entry points accept.
pub const TB_SIZE_CAP: u64 = 1 << 20;
/// Largest leaf count the exact counting entry points accept.
pub const TB_COUNT_CAP: u64 = 4096;

/// A rooted binary tree shape. Opaque; create via parse or build, release
/// via `tb_shape_free`.
pub struct TbShape {
    inner: TreeShape,
}

/// Result of every API call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TbStatus {
    /// Success; out-parameters are filled in.
    Ok = 0,
    /// A required pointer argument was null.
    NullArg = 1,
    /// The input string is not valid UTF-8.
    Utf8 = 2,
    /// The input string is not valid Newick; see the offset out-parameter.
    Parse = 3,
    /// An argument is outside the function's domain.
    Invalid = 4,
    /// The request exceeds a resource cap.
    Limit = 5,
    /// An internal error; a bug in the library.
    Internal = 6,
}

/// The shape families `tb_shape_build` can construct.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TbBuilderKind {
    /// Every internal node has a leaf child; unique Colless maximizer.
    Caterpillar = 0,
    /// All leaves at equal depth; n must be a power of two.
    FullyBalanced = 1,
    /// Every internal node splits as evenly as possible.
    MaximallyBalanced = 2,
    /// Greedy-from-the-bottom construction; attains the minimal Colless
    /// index.
    GreedyFromBottom = 3,
}

/// Balance statistics of one shape.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TbReport {
    /// Leaf count.
    pub n: u64,
    pub colless: u64,
    pub sackin: u64,
    pub height: u64,
    /// Internal nodes whose children are both leaves.
    pub cherries: u64,
    /// Leaf count of the larger root subtree (0 for a single leaf).
    pub root_larger: u64,
    /// Leaf count of the smaller root subtree (0 for a single leaf).
    pub root_smaller: u64,
}

fn guarded(f: impl FnOnce() -> TbStatus) -> TbStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(TbStatus::Internal)
}

/// Parses a Newick string (labels and branch lengths are accepted and
/// ignored) into a new shape handle.
///
/// On `TB_STATUS_PARSE` or `TB_STATUS_UTF8`, if `err_offset` is non-null it
/// receives the byte offset where the problem starts.
///
/// # Safety
/// `text` must point to a NUL-terminated string; `out` must be valid for a
/// write.
#[no_mangle]
pub unsafe extern "C" fn tb_shape_parse_newick(
    text: *const c_char,
    out: *mut *mut TbShape,
    err_offset: *mut usize,
) -> TbStatus {
    if text.is_null() || out.is_null() {
        return TbStatus::NullArg;
    }
    guarded(|| {
        let bytes = unsafe { CStr::from_ptr(text) }.to_bytes();
        let text = match std::str::from_utf8(bytes) {
            Ok(t) => t,
            Err(e) => {
                if !err_offset.is_null() {
                    unsafe { *err_offset = e.valid_up_to() };
                }
                return TbStatus::Utf8;
            }
        };
        match TreeShape::parse_newick(text) {
            Ok(shape) => {
                unsafe { *out = Box::into_raw(Box::new(TbShape { inner: shape })) };
                TbStatus::Ok
            }
            Err(e) => {
                if !err_offset.is_null() {
                    unsafe { *err_offset = e.offset() };
                }
                TbStatus::Parse
            }
        }
    })
}

/// Builds a named shape on n leaves.
///
/// Returns `TB_STATUS_INVALID` for n = 0 (or a non-power-of-two n with
/// `TB_BUILDER_KIND_FULLY_BALANCED`) and `TB_STATUS_LIMIT` beyond
/// `TB_SIZE_CAP` leaves.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn tb_shape_build(
    kind: TbBuilderKind,
    n: u64,
    out: *mut *mut TbShape,
) -> TbStatus {
    if out.is_null() {
        return TbStatus::NullArg;
    }
    if n > TB_SIZE_CAP {
        return TbStatus::Limit;
    }
    let kind = match kind {
        TbBuilderKind::Caterpillar => BuilderKind::Caterpillar,
        TbBuilderKind::FullyBalanced => BuilderKind::FullyBalanced,
        TbBuilderKind::MaximallyBalanced => BuilderKind::MaximallyBalanced,
        TbBuilderKind::GreedyFromBottom => BuilderKind::GreedyFromBottom,
    };
    guarded(|| match kind.build(n) {
        Ok(shape) => {
            unsafe { *out = Box::into_raw(Box::new(TbShape { inner: shape })) };
            TbStatus::Ok
        }
        Err(_) => TbStatus::Invalid,
    })
}

/// Releases a shape handle. Null is a no-op.
///
/// # Safety
/// `shape` must be a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tb_shape_free(shape: *mut TbShape) {
    if !shape.is_null() {
        drop(unsafe { Box::from_raw(shape) });
    }
}

/// Writes the shape as a NUL-terminated Newick string; release it with
/// `tb_string_free`.
///
/// # Safety
/// `shape` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn tb_shape_to_newick(
    shape: *const TbShape,
    out: *mut *mut c_char,
) -> TbStatus {
    if shape.is_null() || out.is_null() {
        return TbStatus::NullArg;
    }
    guarded(|| {
        let newick = unsafe { &(*shape).inner }.to_newick();
        let s = CString::new(newick).expect("newick has no interior NUL");
        unsafe { *out = s.into_raw() };
        TbStatus::Ok
    })
}

/// Releases a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must come from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Fills in the balance statistics of a shape.
///
/// # Safety
/// `shape` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn tb_shape_report(shape: *const TbShape, out: *mut TbReport) -> TbStatus {
    if shape.is_null() || out.is_null() {
        return TbStatus::NullArg;
    }
    guarded(|| {
        let r = report(unsafe { &(*shape).inner });
        unsafe {
            *out = TbReport {
                n: r.leaves,
                colless: r.colless,
                sackin: r.sackin,
                height: r.height,
                cherries: r.cherries,
                root_larger: r.root_partition.0,
                root_smaller: r.root_partition.1,
            };
        }
        TbStatus::Ok
    })
}

/// Writes the shape's leaf count.
///
/// # Safety
/// `shape` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn tb_shape_leaf_count(shape: *const TbShape, out: *mut u64) -> TbStatus {
    if shape.is_null() || out.is_null() {
        return TbStatus::NullArg;
    }
    unsafe { *out = (*shape).inner.leaf_count() };
    TbStatus::Ok
}

/// Writes whether two shapes are isomorphic as rooted trees.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn tb_shape_is_isomorphic(
    a: *const TbShape,
    b: *const TbShape,
    out: *mut bool,
) -> TbStatus {
    if a.is_null() || b.is_null() || out.is_null() {
        return TbStatus::NullArg;
    }
    guarded(|| {
        unsafe { *out = (*a).inner.is_isomorphic_to(&(*b).inner) };
        TbStatus::Ok
    })
}

/// Writes the minimal Colless index over all shapes on n leaves, by the
/// integer closed form. `TB_STATUS_INVALID` for n = 0; `TB_STATUS_LIMIT`
/// for n above 2^62.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn tb_min_colless(n: u64, out: *mut u64) -> TbStatus {
    if out.is_null() {
        return TbStatus::NullArg;
    }
    if n == 0 {
        return TbStatus::Invalid;
    }
    if n > 1 << 62 {
        return TbStatus::Limit;
    }
    guarded(|| {
        unsafe { *out = min_colless_explicit(n) };
        TbStatus::Ok
    })
}

/// Same value as `tb_min_colless`, evaluated by the bottom-up recursion
/// (tabulates every size up to n, so it is capped at `TB_SIZE_CAP`).
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn tb_min_colless_recursive(n: u64, out: *mut u64) -> TbStatus {
    if out.is_null() {
        return TbStatus::NullArg;
    }
    if n == 0 {
        return TbStatus::Invalid;
    }
    if n > TB_SIZE_CAP {
        return TbStatus::Limit;
    }
    guarded(|| {
        unsafe { *out = MinimaTable::new().min_colless(n) };
        TbStatus::Ok
    })
}

/// Writes the maximal Colless index on n leaves, (n-1)(n-2)/2.
/// `TB_STATUS_INVALID` for n = 0; `TB_STATUS_LIMIT` once the product
/// overflows 64 bits (n above 2^32).
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn tb_max_colless(n: u64, out: *mut u64) -> TbStatus {
    if out.is_null() {
        return TbStatus::NullArg;
    }
    if n == 0 {
        return TbStatus::Invalid;
    }
    if n > 1 << 32 {
        return TbStatus::Limit;
    }
    guarded(|| {
        unsafe { *out = max_colless(n) };
        TbStatus::Ok
    })
}

/// Writes the minimal Sackin index over all shapes on n leaves.
/// `TB_STATUS_INVALID` for n = 0; `TB_STATUS_LIMIT` above `TB_SIZE_CAP`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn tb_min_sackin(n: u64, out: *mut u64) -> TbStatus {
    if out.is_null() {
        return TbStatus::NullArg;
    }
    if n == 0 {
        return TbStatus::Invalid;
    }
    if n > TB_SIZE_CAP {
        return TbStatus::Limit;
    }
    guarded(|| {
        unsafe { *out = min_sackin_value(n) };
        TbStatus::Ok
    })
}

unsafe fn count_to_string(
    n: u64,
    out: *mut *mut c_char,
    count: impl FnOnce(u64) -> String,
) -> TbStatus {
    if out.is_null() {
        return TbStatus::NullArg;
    }
    if n == 0 {
        return TbStatus::Invalid;
    }
    if n > TB_COUNT_CAP {
        return TbStatus::Limit;
    }
    guarded(|| {
        let digits = CString::new(count(n)).expect("decimal digits have no NUL");
        unsafe { *out = digits.into_raw() };
        TbStatus::Ok
    })
}

/// Writes the exact number of shapes on n leaves attaining the minimal
/// Colless index, as a NUL-terminated decimal string (release with
/// `tb_string_free`). `TB_STATUS_INVALID` for n = 0; `TB_STATUS_LIMIT`
/// above `TB_COUNT_CAP`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn tb_count_colless_minimal(n: u64, out: *mut *mut c_char) -> TbStatus {
    unsafe { count_to_string(n, out, |n| count_colless_minimal(n).to_string()) }
}

/// Writes the exact number of shapes on n leaves attaining the minimal
/// Sackin index, as a NUL-terminated decimal string (release with
/// `tb_string_free`). `TB_STATUS_INVALID` for n = 0; `TB_STATUS_LIMIT`
/// above `TB_COUNT_CAP`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn tb_count_sackin_minimal(n: u64, out: *mut *mut c_char) -> TbStatus {
    unsafe { count_to_string(n, out, |n| count_sackin_minimal(n).to_string()) }
}
