use std::ffi::{c_char, CStr};
use std::ptr;

use atlas_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { atlas_string_free(s) };
    out
}

fn last_error() -> String {
    let p = atlas_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn new(g: u32) -> *mut AtlasSiegel {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { atlas_siegel_new(g, &mut h) }, AtlasStatus::Ok);
    h
}

#[test]
fn adm_counts() {
    let h = new(2);
    let mut n = 0usize;
    assert_eq!(unsafe { atlas_adm_size(h, &mut n) }, AtlasStatus::Ok);
    assert_eq!(n, 13);
    let mut g = 0u32;
    assert_eq!(unsafe { atlas_siegel_genus(h, &mut g) }, AtlasStatus::Ok);
    assert_eq!(g, 2);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { atlas_adm_json(h, &mut s) }, AtlasStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 13);
    unsafe { atlas_siegel_free(h) };
}

#[test]
fn classify_and_count() {
    let h = new(2);
    let mut hyp = 0u64;
    assert_eq!(unsafe { atlas_hyperspecial_mask(h, &mut hyp) }, AtlasStatus::Ok);
    assert_eq!(hyp, 0b110);
    let mut b = 0usize;
    assert_eq!(unsafe { atlas_count_basic(h, 0, &mut b) }, AtlasStatus::Ok);
    assert_eq!(b, 5);
    assert_eq!(unsafe { atlas_count_basic(h, hyp, &mut b) }, AtlasStatus::Ok);
    assert_eq!(b, 2);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { atlas_classify_json(h, hyp, &mut s) }, AtlasStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 4);
    unsafe { atlas_siegel_free(h) };
}

#[test]
fn compare() {
    let h = new(2);
    let mut s = ptr::null_mut();
    let mut bad = usize::MAX;
    assert_eq!(unsafe { atlas_compare_json(h, &mut s, &mut bad) }, AtlasStatus::Ok);
    assert_eq!(bad, 0);
    let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v["gortz_yu"].as_array().unwrap().len(), 5);
    assert_eq!(v["hoeve"].as_array().unwrap().len(), 2);
    unsafe { atlas_siegel_free(h) };
}

#[test]
fn errors() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { atlas_siegel_new(0, &mut h) }, AtlasStatus::InvalidArgument);
    assert!(h.is_null());
    assert!(last_error().contains('0'));
    assert_eq!(unsafe { atlas_siegel_new(1, ptr::null_mut()) }, AtlasStatus::NullPointer);

    let mut n = 0usize;
    assert_eq!(unsafe { atlas_adm_size(ptr::null(), &mut n) }, AtlasStatus::NullPointer);
    assert!(last_error().contains("handle"));

    let h = new(2);
    assert_eq!(unsafe { atlas_adm_size(h, ptr::null_mut()) }, AtlasStatus::NullPointer);
    assert_eq!(unsafe { atlas_count_basic(h, 0b111, &mut n) }, AtlasStatus::InvalidArgument);
    assert_eq!(unsafe { atlas_count_basic(h, 1 << 9, &mut n) }, AtlasStatus::InvalidArgument);
    assert_eq!(unsafe { atlas_adm_size(h, &mut n) }, AtlasStatus::Ok);
    assert!(atlas_last_error().is_null());
    unsafe {
        atlas_siegel_free(h);
        atlas_siegel_free(ptr::null_mut());
        atlas_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/atlas.h")).unwrap();
    for name in [
        "atlas_siegel_new",
        "atlas_siegel_free",
        "atlas_siegel_genus",
        "atlas_hyperspecial_mask",
        "atlas_adm_size",
        "atlas_adm_json",
        "atlas_classify_json",
        "atlas_count_basic",
        "atlas_compare_json",
        "atlas_last_error",
        "atlas_string_free",
        "typedef struct AtlasSiegel AtlasSiegel",
        "ATLAS_STATUS_OK = 0",
        "ATLAS_STATUS_NULL_POINTER",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/atlas.h");
    let Ok(status) = std::process::Command::new("cc").args(["-fsyntax-only", "-x", "c", header]).status() else {
        return;
    };
    assert!(status.success());
}
