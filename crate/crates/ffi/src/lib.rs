//! C interface to the Siegel-case computations.
//!
//! Every function returns an [`AtlasStatus`]; results come back through out
//! pointers. Strings returned to the caller are owned by the caller and must
//! be released with [`atlas_string_free`]. After a non-`OK` status,
//! [`atlas_last_error`] describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use atlas_core::admissible::ParahoricLabel;
use atlas_core::ekor::stratum_report;
use atlas_core::export::{adm_entries, gortz_yu_json, hoeve_json, stratum_json, to_json, ComparisonJson, StratumJson};
use atlas_core::siegel::SiegelContext;
use atlas_core::{AtlasError, NodeSubset};

/// Opaque handle to a GSp(2g) context.
pub struct AtlasSiegel {
    ctx: SiegelContext,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AtlasStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    Internal = 3,
    Panic = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &AtlasError) -> AtlasStatus {
    match e {
        AtlasError::InvalidGenus(_) | AtlasError::InvalidLevel(_) => AtlasStatus::InvalidArgument,
        _ => AtlasStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (AtlasStatus, String)>) -> AtlasStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AtlasStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside atlas".into());
            AtlasStatus::Panic
        }
    }
}

fn core_err(e: AtlasError) -> (AtlasStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (AtlasStatus, String) {
    (AtlasStatus::NullPointer, format!("{what} is null"))
}

unsafe fn handle<'a>(h: *const AtlasSiegel) -> Result<&'a AtlasSiegel, (AtlasStatus, String)> {
    h.as_ref().ok_or_else(|| null("handle"))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), (AtlasStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn c_string(s: String) -> Result<*mut c_char, (AtlasStatus, String)> {
    CString::new(s).map(CString::into_raw).map_err(|e| (AtlasStatus::Internal, e.to_string()))
}

fn level(h: &AtlasSiegel, mask: u64) -> Result<ParahoricLabel, (AtlasStatus, String)> {
    ParahoricLabel::new(h.ctx.group(), NodeSubset::from_bits(mask)).map_err(core_err)
}

fn strata(h: &AtlasSiegel, mask: u64) -> Result<Vec<StratumJson>, (AtlasStatus, String)> {
    let k = level(h, mask)?;
    let recs = stratum_report(h.ctx.group(), h.ctx.adm(), k).map_err(core_err)?;
    Ok(recs.iter().map(|r| stratum_json(h.ctx.group(), r)).collect())
}

/// Builds the context for genus `g ≥ 1`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn atlas_siegel_new(g: u32, out: *mut *mut AtlasSiegel) -> AtlasStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let ctx = SiegelContext::new(g as usize).map_err(core_err)?;
        out.write(Box::into_raw(Box::new(AtlasSiegel { ctx })));
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a handle from [`atlas_siegel_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn atlas_siegel_free(h: *mut AtlasSiegel) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn atlas_siegel_genus(h: *const AtlasSiegel, out: *mut u32) -> AtlasStatus {
    guard(|| put(out, handle(h)?.ctx.g() as u32))
}

/// Bitmask of the hyperspecial level `{s_1, …, s_g}`.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn atlas_hyperspecial_mask(h: *const AtlasSiegel, out: *mut u64) -> AtlasStatus {
    guard(|| put(out, handle(h)?.ctx.hyperspecial().nodes().bits()))
}

/// # Safety
/// `h` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn atlas_adm_size(h: *const AtlasSiegel, out: *mut usize) -> AtlasStatus {
    guard(|| put(out, handle(h)?.ctx.adm().len()))
}

/// `Adm(μ)` as a JSON array.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn atlas_adm_json(h: *const AtlasSiegel, out: *mut *mut c_char) -> AtlasStatus {
    guard(|| {
        let h = handle(h)?;
        let json = to_json(&adm_entries(h.ctx.group(), h.ctx.adm())).map_err(core_err)?;
        put(out, c_string(json)?)
    })
}

/// Stratum records at the level whose nodes are the set bits of `level_mask`.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn atlas_classify_json(
    h: *const AtlasSiegel,
    level_mask: u64,
    out: *mut *mut c_char,
) -> AtlasStatus {
    guard(|| {
        let recs = strata(handle(h)?, level_mask)?;
        put(out, c_string(to_json(&recs).map_err(core_err)?)?)
    })
}

/// Number of basic strata at the level `level_mask`.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn atlas_count_basic(h: *const AtlasSiegel, level_mask: u64, out: *mut usize) -> AtlasStatus {
    guard(|| {
        let recs = strata(handle(h)?, level_mask)?;
        put(out, recs.iter().filter(|r| r.basic).count())
    })
}

/// Both comparison tables as JSON; `mismatches` receives the number of EO
/// rows where the generic data differ from the closed forms.
///
/// # Safety
/// `h` must be a live handle; `out` and `mismatches` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn atlas_compare_json(
    h: *const AtlasSiegel,
    out: *mut *mut c_char,
    mismatches: *mut usize,
) -> AtlasStatus {
    guard(|| {
        let h = handle(h)?;
        if out.is_null() || mismatches.is_null() {
            return Err(null("output pointer"));
        }
        let gortz_yu = gortz_yu_json(&h.ctx.compare_gortz_yu().map_err(core_err)?);
        let hoeve = hoeve_json(&h.ctx.compare_hoeve().map_err(core_err)?);
        let bad = hoeve.iter().filter(|r| !r.agrees).count();
        let json = to_json(&ComparisonJson { g: h.ctx.g(), gortz_yu, hoeve }).map_err(core_err)?;
        put(out, c_string(json)?)?;
        put(mismatches, bad)
    })
}

/// Message for the last failure on this thread, or null. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn atlas_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn atlas_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
