//! C interface to `fca-core`.
//!
//! Contexts and results are opaque handles created and released through this
//! API. Every fallible call returns an [`FcaStatus`]; on failure the message
//! is available from [`fca_last_error_message`] on the same thread until the
//! next failing call. Strings returned through `char **` are owned by the
//! caller and must be released with [`fca_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use fca_core::bench::{run_engine, EngineKind, RunSettings};
use fca_core::horizontal::DEFAULT_QUEUE_BUDGET;
use fca_core::io::{self, Format};
use fca_core::{Enumeration, FcaError, FormalContext, IncludeBottom, WordWidth};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FcaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Io = 4,
    IndexOutOfRange = 5,
    BudgetExhausted = 6,
    Allocation = 7,
    InvalidUtf8 = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FcaEngine {
    Horizontal = 0,
    Vertical = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FcaFormat {
    /// Guess from the file extension; only valid for `fca_context_load`.
    Auto = 0,
    Cxt = 1,
    Fimi = 2,
    Csv = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FcaBottom {
    Auto = 0,
    Always = 1,
    Never = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FcaOptions {
    pub engine: FcaEngine,
    /// 32 or 64.
    pub width: u32,
    /// Horizontal engine only.
    pub empty_skip: bool,
    pub include_bottom: FcaBottom,
    /// Horizontal engine local queue budget; 0 selects the default.
    pub budget_bytes: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FcaStats {
    pub concept_count: usize,
    pub engine_concepts: usize,
    pub elapsed_seconds: f64,
    pub extent_storage_bytes: u64,
    pub peak_queue_bytes: u64,
    pub total_queue_bytes: u64,
    pub canonicity_failures: u64,
    pub max_depth: usize,
}

/// A formal context.
pub struct FcaContext {
    inner: FormalContext,
}

/// The concepts of a context with the run that produced them.
pub struct FcaConcepts {
    context: FormalContext,
    run: Enumeration,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let text = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn status_of(e: &FcaError) -> FcaStatus {
    match e {
        FcaError::Parse { .. } => FcaStatus::Parse,
        FcaError::Io(_) => FcaStatus::Io,
        FcaError::IndexOutOfRange { .. } => FcaStatus::IndexOutOfRange,
        FcaError::BudgetExhausted { .. } => FcaStatus::BudgetExhausted,
        FcaError::Allocation { .. } => FcaStatus::Allocation,
        _ => FcaStatus::InvalidArgument,
    }
}

struct Failure(FcaStatus, String);

impl From<FcaError> for Failure {
    fn from(e: FcaError) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(FcaStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> FcaStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => FcaStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            FcaStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(text: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if text.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|_| Failure(FcaStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

fn to_format(format: FcaFormat) -> Option<Format> {
    match format {
        FcaFormat::Auto => None,
        FcaFormat::Cxt => Some(Format::Cxt),
        FcaFormat::Fimi => Some(Format::Fimi),
        FcaFormat::Csv => Some(Format::Csv),
    }
}

unsafe fn give_string(text: String, out: *mut *mut c_char) -> Result<(), Failure> {
    let c = CString::new(text).map_err(|_| Failure(FcaStatus::InvalidArgument, "output contains a nul byte".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn give_context(ctx: FormalContext, out: *mut *mut FcaContext) {
    *out = Box::into_raw(Box::new(FcaContext { inner: ctx }));
}

/// Message of the latest failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fca_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Vertical engine, 64-bit words, bottom concept added when missing.
#[no_mangle]
pub extern "C" fn fca_options_default() -> FcaOptions {
    FcaOptions {
        engine: FcaEngine::Vertical,
        width: 64,
        empty_skip: false,
        include_bottom: FcaBottom::Auto,
        budget_bytes: DEFAULT_QUEUE_BUDGET,
    }
}

/// Builds an `objects` x `attributes` context from row-major cells; any
/// nonzero byte is an incidence. `cells` may be null when the matrix is empty.
///
/// # Safety
/// `cells` must point to `objects * attributes` readable bytes and `out` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn fca_context_from_matrix(
    cells: *const u8,
    objects: usize,
    attributes: usize,
    out: *mut *mut FcaContext,
) -> FcaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let total = objects
            .checked_mul(attributes)
            .ok_or_else(|| Failure(FcaStatus::InvalidArgument, "matrix too large".into()))?;
        if cells.is_null() && total > 0 {
            return Err(null("cells"));
        }
        let data: &[u8] = if total == 0 { &[] } else { std::slice::from_raw_parts(cells, total) };
        give_context(FormalContext::from_fn(objects, attributes, |g, a| data[g * attributes + a] != 0), out);
        Ok(())
    })
}

/// Parses context text in the given format.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fca_context_parse(text: *const c_char, format: FcaFormat, out: *mut *mut FcaContext) -> FcaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(text, "text")?;
        let format =
            to_format(format).ok_or_else(|| Failure(FcaStatus::InvalidArgument, "parsing needs an explicit format".into()))?;
        give_context(io::parse(text, format)?, out);
        Ok(())
    })
}

/// Reads a context file. `FCA_FORMAT_AUTO` guesses from the extension.
///
/// # Safety
/// `path` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fca_context_load(path: *const c_char, format: FcaFormat, out: *mut *mut FcaContext) -> FcaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let path = read_str(path, "path")?;
        give_context(io::read_context(Path::new(path), to_format(format))?, out);
        Ok(())
    })
}

/// Serializes a context.
///
/// # Safety
/// `ctx` must come from this library and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn fca_context_write(ctx: *const FcaContext, format: FcaFormat, out: *mut *mut c_char) -> FcaStatus {
    guard(|| {
        let ctx = ctx.as_ref().ok_or_else(|| null("ctx"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let format = to_format(format).ok_or_else(|| Failure(FcaStatus::InvalidArgument, "writing needs an explicit format".into()))?;
        give_string(io::write(&ctx.inner, format), out)
    })
}

/// # Safety
/// `ctx` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn fca_context_object_count(ctx: *const FcaContext) -> usize {
    ctx.as_ref().map_or(0, |c| c.inner.object_count())
}

/// # Safety
/// `ctx` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn fca_context_attribute_count(ctx: *const FcaContext) -> usize {
    ctx.as_ref().map_or(0, |c| c.inner.attribute_count())
}

/// Creates a new context with objects and attributes swapped.
///
/// # Safety
/// `ctx` must come from this library and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn fca_context_transpose(ctx: *const FcaContext, out: *mut *mut FcaContext) -> FcaStatus {
    guard(|| {
        let ctx = ctx.as_ref().ok_or_else(|| null("ctx"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        give_context(ctx.inner.transpose(), out);
        Ok(())
    })
}

/// # Safety
/// `ctx` must come from this library and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn fca_context_free(ctx: *mut FcaContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Lists every concept of `ctx`. `options` may be null for the defaults.
///
/// # Safety
/// `ctx` must come from this library, `options` be null or valid, and `out`
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn fca_enumerate(ctx: *const FcaContext, options: *const FcaOptions, out: *mut *mut FcaConcepts) -> FcaStatus {
    guard(|| {
        let ctx = ctx.as_ref().ok_or_else(|| null("ctx"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let opts = options.as_ref().copied().unwrap_or_else(|| fca_options_default());
        let width = WordWidth::from_bits(opts.width)?;
        let engine = match opts.engine {
            FcaEngine::Horizontal => EngineKind::Horizontal,
            FcaEngine::Vertical => EngineKind::Vertical,
        };
        let settings = RunSettings {
            empty_skip: opts.empty_skip,
            include_bottom: match opts.include_bottom {
                FcaBottom::Auto => IncludeBottom::Auto,
                FcaBottom::Always => IncludeBottom::Always,
                FcaBottom::Never => IncludeBottom::Never,
            },
            budget_bytes: if opts.budget_bytes == 0 { DEFAULT_QUEUE_BUDGET } else { opts.budget_bytes },
        };
        let run = run_engine(&ctx.inner, engine, width, &settings)?;
        *out = Box::into_raw(Box::new(FcaConcepts { context: ctx.inner.clone(), run }));
        Ok(())
    })
}

/// # Safety
/// `concepts` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn fca_concepts_count(concepts: *const FcaConcepts) -> usize {
    concepts.as_ref().map_or(0, |c| c.run.concepts.len())
}

unsafe fn member_view(
    concepts: *const FcaConcepts,
    index: usize,
    members: *mut *const u32,
    len: *mut usize,
    pick: impl Fn(&fca_core::Concept) -> &[u32],
) -> FcaStatus {
    guard(|| {
        let c = concepts.as_ref().ok_or_else(|| null("concepts"))?;
        if members.is_null() || len.is_null() {
            return Err(null("members or len"));
        }
        let concept = c.run.concepts.as_slice().get(index).ok_or_else(|| {
            Failure(FcaStatus::IndexOutOfRange, format!("concept {index} out of range 0..{}", c.run.concepts.len()))
        })?;
        let slice = pick(concept);
        *members = slice.as_ptr();
        *len = slice.len();
        Ok(())
    })
}

/// Object indices of concept `index`, ascending. The array stays valid until
/// `concepts` is freed.
///
/// # Safety
/// `concepts` must come from this library; `members` and `len` be writable.
#[no_mangle]
pub unsafe extern "C" fn fca_concepts_extent(
    concepts: *const FcaConcepts,
    index: usize,
    members: *mut *const u32,
    len: *mut usize,
) -> FcaStatus {
    member_view(concepts, index, members, len, |c| c.extent.as_slice())
}

/// Attribute indices of concept `index`, ascending.
///
/// # Safety
/// As for [`fca_concepts_extent`].
#[no_mangle]
pub unsafe extern "C" fn fca_concepts_intent(
    concepts: *const FcaConcepts,
    index: usize,
    members: *mut *const u32,
    len: *mut usize,
) -> FcaStatus {
    member_view(concepts, index, members, len, |c| c.intent.as_slice())
}

/// # Safety
/// `concepts` must come from this library and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn fca_concepts_stats(concepts: *const FcaConcepts, out: *mut FcaStats) -> FcaStatus {
    guard(|| {
        let c = concepts.as_ref().ok_or_else(|| null("concepts"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let s = &c.run.stats;
        *out = FcaStats {
            concept_count: s.concept_count,
            engine_concepts: s.engine_concepts,
            elapsed_seconds: s.elapsed.as_secs_f64(),
            extent_storage_bytes: s.extent_storage_bytes,
            peak_queue_bytes: s.peak_queue_bytes,
            total_queue_bytes: s.total_queue_bytes,
            canonicity_failures: s.canonicity_failures,
            max_depth: s.max_depth,
        };
        Ok(())
    })
}

/// One concept per line as `objects ; attributes`, by name.
///
/// # Safety
/// `concepts` must come from this library and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn fca_concepts_to_text(concepts: *const FcaConcepts, out: *mut *mut c_char) -> FcaStatus {
    guard(|| {
        let c = concepts.as_ref().ok_or_else(|| null("concepts"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        give_string(io::write_concepts_text(&c.run.concepts, &c.context), out)
    })
}

/// The spawn tree as a JSON document.
///
/// # Safety
/// `concepts` must come from this library, `source` be null or a
/// nul-terminated string, and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn fca_concepts_to_json(
    concepts: *const FcaConcepts,
    source: *const c_char,
    with_extents: bool,
    out: *mut *mut c_char,
) -> FcaStatus {
    guard(|| {
        let c = concepts.as_ref().ok_or_else(|| null("concepts"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let source = if source.is_null() { "" } else { read_str(source, "source")? };
        give_string(io::write_concept_tree_json(&c.run.tree, &c.context, source, with_extents), out)
    })
}

/// # Safety
/// `concepts` must come from this library and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn fca_concepts_free(concepts: *mut FcaConcepts) {
    if !concepts.is_null() {
        drop(Box::from_raw(concepts));
    }
}

/// # Safety
/// `text` must be a string returned by this library or null.
#[no_mangle]
pub unsafe extern "C" fn fca_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}
