//! C bindings for padfa indexes.
//!
//! Every function returns a [`PadfaStatus`] and writes results through out
//! pointers. Handles are opaque and owned by the caller, who releases them
//! with [`padfa_free`]. After a failed call, [`padfa_last_error`] gives a
//! message for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use padfa::automaton::{build_suffix_dawg, build_trie, minimize, Dictionary};
use padfa::{Backend, BuildOptions, CharMode, Error, FormatError, Mode, Padfa};

/// Result code of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PadfaStatus {
    Ok = 0,
    NullPointer = 1,
    /// Duplicate strings, NUL bytes or an unsupported alphabet.
    InvalidInput = 2,
    BadMagic = 3,
    UnsupportedVersion = 4,
    Truncated = 5,
    ChecksumMismatch = 6,
    Corrupt = 7,
    /// Membership query on a substring index or the reverse.
    ModeMismatch = 8,
    /// A panic was caught at the boundary.
    Internal = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PadfaVariant {
    /// Trie of the dictionary.
    Trie = 0,
    /// Minimal automaton of the dictionary.
    Min = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PadfaBackend {
    EdgeList = 0,
    Biased = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PadfaCharMode {
    Bitpacked = 0,
    Byte = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PadfaMode {
    Membership = 0,
    Reach = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PadfaBuildOptions {
    pub variant: PadfaVariant,
    pub backend: PadfaBackend,
    pub char_mode: PadfaCharMode,
}

/// Opaque index handle.
pub struct PadfaIndex {
    inner: Padfa,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> PadfaStatus {
    match e {
        Error::Format(f) => match f {
            FormatError::BadMagic => PadfaStatus::BadMagic,
            FormatError::UnsupportedVersion(_) => PadfaStatus::UnsupportedVersion,
            FormatError::Truncated => PadfaStatus::Truncated,
            FormatError::ChecksumMismatch { .. } => PadfaStatus::ChecksumMismatch,
            FormatError::Corrupt(_) => PadfaStatus::Corrupt,
        },
        Error::ModeMismatch { .. } => PadfaStatus::ModeMismatch,
        _ => PadfaStatus::InvalidInput,
    }
}

/// Runs `f`, recording errors and catching panics.
fn guard(f: impl FnOnce() -> Result<(), PadfaStatus>) -> PadfaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PadfaStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal error".into());
            PadfaStatus::Internal
        }
    }
}

fn fail(e: Error) -> PadfaStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

fn null(what: &str) -> PadfaStatus {
    set_error(format!("{what} is null"));
    PadfaStatus::NullPointer
}

/// # Safety
/// `data` must point to `len` readable bytes, or be null with `len == 0`.
unsafe fn bytes<'a>(data: *const u8, len: usize) -> Result<&'a [u8], PadfaStatus> {
    if len == 0 {
        Ok(&[])
    } else if data.is_null() {
        Err(null("data"))
    } else {
        Ok(std::slice::from_raw_parts(data, len))
    }
}

fn options(opts: Option<&PadfaBuildOptions>) -> (PadfaVariant, BuildOptions) {
    let o = opts.copied().unwrap_or_else(|| padfa_build_options_default());
    let build = BuildOptions {
        backend: match o.backend {
            PadfaBackend::EdgeList => Backend::EdgeList,
            PadfaBackend::Biased => Backend::Biased,
        },
        char_mode: match o.char_mode {
            PadfaCharMode::Bitpacked => CharMode::Bitpacked,
            PadfaCharMode::Byte => CharMode::Byte,
        },
    };
    (o.variant, build)
}

fn emit(out: *mut *mut PadfaIndex, inner: Padfa) {
    let handle = Box::into_raw(Box::new(PadfaIndex { inner }));
    // SAFETY: callers check `out` for null before building
    unsafe { *out = handle };
}

#[no_mangle]
pub extern "C" fn padfa_build_options_default() -> PadfaBuildOptions {
    PadfaBuildOptions {
        variant: PadfaVariant::Min,
        backend: PadfaBackend::EdgeList,
        char_mode: PadfaCharMode::Bitpacked,
    }
}

/// Builds a membership index from newline-separated strings. `opts` may be
/// null for the defaults.
///
/// # Safety
/// `lines` must point to `len` readable bytes; `opts` must be null or valid;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn padfa_build_dictionary(
    lines: *const u8,
    len: usize,
    opts: *const PadfaBuildOptions,
    out: *mut *mut PadfaIndex,
) -> PadfaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let data = bytes(lines, len)?;
        let (variant, build) = options(opts.as_ref());
        let d = Dictionary::from_lines(data).map_err(fail)?;
        let trie = build_trie(&d).map_err(fail)?;
        let a = match variant {
            PadfaVariant::Trie => trie,
            PadfaVariant::Min => minimize(&trie).map_err(fail)?,
        };
        emit(out, Padfa::build(&a, build).map_err(fail)?);
        Ok(())
    })
}

/// Builds a substring index over `text`. The variant field of `opts` is
/// ignored.
///
/// # Safety
/// As for [`padfa_build_dictionary`].
#[no_mangle]
pub unsafe extern "C" fn padfa_build_text(
    text: *const u8,
    len: usize,
    opts: *const PadfaBuildOptions,
    out: *mut *mut PadfaIndex,
) -> PadfaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let data = bytes(text, len)?;
        let (_, build) = options(opts.as_ref());
        let a = build_suffix_dawg(data).map_err(fail)?;
        emit(out, Padfa::build(&a, build).map_err(fail)?);
        Ok(())
    })
}

/// Loads an index from its serialized bytes.
///
/// # Safety
/// `data` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn padfa_load(data: *const u8, len: usize, out: *mut *mut PadfaIndex) -> PadfaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let data = bytes(data, len)?;
        emit(out, Padfa::from_bytes(data).map_err(fail)?);
        Ok(())
    })
}

/// Serializes an index. Release the buffer with [`padfa_bytes_free`].
///
/// # Safety
/// `index` must be a live handle; `out` and `out_len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn padfa_save(index: *const PadfaIndex, out: *mut *mut u8, out_len: *mut usize) -> PadfaStatus {
    guard(|| {
        let index = index.as_ref().ok_or_else(|| null("index"))?;
        if out.is_null() || out_len.is_null() {
            return Err(null("out"));
        }
        let bytes = index.inner.to_bytes().into_boxed_slice();
        *out_len = bytes.len();
        *out = Box::into_raw(bytes) as *mut u8;
        Ok(())
    })
}

/// # Safety
/// `data` and `len` must come from one [`padfa_save`] call, freed once.
#[no_mangle]
pub unsafe extern "C" fn padfa_bytes_free(data: *mut u8, len: usize) {
    if !data.is_null() {
        drop(Box::from_raw(ptr::slice_from_raw_parts_mut(data, len)));
    }
}

/// # Safety
/// `index` must be a live handle, `pattern` must point to `len` readable
/// bytes and `out` must be writable.
unsafe fn query(
    index: *const PadfaIndex,
    pattern: *const u8,
    len: usize,
    out: *mut bool,
    mode: Mode,
) -> PadfaStatus {
    guard(|| {
        let index = index.as_ref().ok_or_else(|| null("index"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let p = bytes(pattern, len)?;
        *out = match mode {
            Mode::Membership => index.inner.contains(p),
            Mode::Reach => index.inner.reach(p),
        }
        .map_err(fail)?;
        Ok(())
    })
}

/// Is `pattern` one of the indexed strings?
///
/// # Safety
/// See [`padfa_reach`].
#[no_mangle]
pub unsafe extern "C" fn padfa_contains(
    index: *const PadfaIndex,
    pattern: *const u8,
    len: usize,
    out: *mut bool,
) -> PadfaStatus {
    query(index, pattern, len, out, Mode::Membership)
}

/// Is `pattern` a substring of the indexed text?
///
/// # Safety
/// `index` must be a live handle, `pattern` must point to `len` readable
/// bytes (or be null with `len == 0`) and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn padfa_reach(
    index: *const PadfaIndex,
    pattern: *const u8,
    len: usize,
    out: *mut bool,
) -> PadfaStatus {
    query(index, pattern, len, out, Mode::Reach)
}

/// # Safety
/// `index` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn padfa_mode(index: *const PadfaIndex) -> PadfaMode {
    match index.as_ref().map(|i| i.inner.mode()) {
        Some(Mode::Reach) => PadfaMode::Reach,
        _ => PadfaMode::Membership,
    }
}

/// Vertex count, or 0 for a null handle.
///
/// # Safety
/// `index` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn padfa_vertex_count(index: *const PadfaIndex) -> u64 {
    index.as_ref().map_or(0, |i| i.inner.vertex_count() as u64)
}

/// Number of accepted strings, or 0 for a null handle.
///
/// # Safety
/// `index` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn padfa_string_count(index: *const PadfaIndex) -> u64 {
    index.as_ref().map_or(0, |i| i.inner.string_count())
}

/// Measured index size in bits, or 0 for a null handle.
///
/// # Safety
/// `index` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn padfa_size_bits(index: *const PadfaIndex) -> u64 {
    index.as_ref().map_or(0, |i| i.inner.space_report().total_bits)
}

/// # Safety
/// `index` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn padfa_free(index: *mut PadfaIndex) {
    if !index.is_null() {
        drop(Box::from_raw(index));
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn padfa_status_message(status: PadfaStatus) -> *const c_char {
    let s: &'static std::ffi::CStr = match status {
        PadfaStatus::Ok => c"ok",
        PadfaStatus::NullPointer => c"null pointer argument",
        PadfaStatus::InvalidInput => c"invalid input",
        PadfaStatus::BadMagic => c"not an index file",
        PadfaStatus::UnsupportedVersion => c"unsupported format version",
        PadfaStatus::Truncated => c"truncated index",
        PadfaStatus::ChecksumMismatch => c"checksum mismatch",
        PadfaStatus::Corrupt => c"corrupt index",
        PadfaStatus::ModeMismatch => c"wrong query kind for this index",
        PadfaStatus::Internal => c"internal error",
    };
    s.as_ptr()
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn padfa_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
