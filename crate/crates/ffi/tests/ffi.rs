use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use cantor_forge_ffi::*;

#[test]
fn pointset_round_trip() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(cf_pointset_crossbar(3, 1, 2, 2, &mut p), CfStatus::Ok);
        let (mut n, mut d) = (0, 0);
        assert_eq!(cf_pointset_shape(p, &mut n, &mut d), CfStatus::Ok);
        assert_eq!((n, d), (56, 2));

        let mut small = vec![0.0; 3];
        assert_eq!(
            cf_pointset_coords(p, small.as_mut_ptr(), small.len()),
            CfStatus::BufferTooSmall
        );
        let mut buf = vec![0.0; n * d];
        assert_eq!(cf_pointset_coords(p, buf.as_mut_ptr(), buf.len()), CfStatus::Ok);
        assert_eq!(&buf[..2], &[0.0, 0.0]);

        let mut js = ptr::null_mut();
        assert_eq!(cf_pointset_to_json(p, &mut js), CfStatus::Ok);
        let mut q = ptr::null_mut();
        assert_eq!(cf_pointset_from_json(js, &mut q), CfStatus::Ok);
        let mut js2 = ptr::null_mut();
        cf_pointset_to_json(q, &mut js2);
        assert_eq!(CStr::from_ptr(js), CStr::from_ptr(js2));
        cf_string_free(js);
        cf_string_free(js2);
        cf_pointset_free(q);
        cf_pointset_free(p);
    }
}

#[test]
fn errors_and_nulls() {
    unsafe {
        assert_eq!(cf_pointset_grid(3, 2, ptr::null_mut()), CfStatus::NullPointer);
        let mut p = ptr::null_mut();
        assert_eq!(cf_pointset_crossbar(4, 1, 2, 1, &mut p), CfStatus::InvalidArgument);
        assert!(p.is_null());
        assert!(!cf_last_error().is_null());
        let junk = CString::new("{not json").unwrap();
        assert_eq!(cf_pointset_from_json(junk.as_ptr(), &mut p), CfStatus::InvalidArgument);
        let mut g = ptr::null_mut();
        let mut grid = ptr::null_mut();
        assert_eq!(cf_pointset_grid(3, 2, &mut grid), CfStatus::Ok);
        assert_eq!(cf_spanner_greedy(grid, 1, 0, &mut g), CfStatus::InvalidArgument);
        cf_pointset_free(grid);
        cf_pointset_free(ptr::null_mut());
        cf_string_free(ptr::null_mut());
    }
}

#[test]
fn spanner_verification() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(cf_spanner_carpet(2, &mut g), CfStatus::Ok);
        let mut s = 0.0;
        assert_eq!(cf_spanner_verify(g, 24142, 10000, &mut s), CfStatus::Ok);
        assert!(s > 1.0 && s < 2.4142);
        assert_eq!(cf_spanner_verify(g, 3, 2, &mut s), CfStatus::VerificationFailed);
        let (mut v, mut e) = (0, 0);
        cf_spanner_shape(g, &mut v, &mut e);
        assert!(v > 0 && e >= v - 1);
        cf_spanner_free(g);
    }
}

#[test]
fn tsp_handles() {
    unsafe {
        let xc = CString::new(r#"{"m":3,"sets":[[0,1],[2],[1,2]]}"#).unwrap();
        let mut t = ptr::null_mut();
        assert_eq!(cf_tsp_reduce(xc.as_ptr(), 3, 1, &mut t), CfStatus::Ok);
        assert_eq!(cf_tsp_check(t), CfStatus::Ok);
        let (mut n, mut comps, mut alpha) = (0, 0, 0.0);
        cf_tsp_summary(t, &mut n, &mut comps, &mut alpha);
        assert_eq!(comps, 6);
        let mut len = 0.0;
        assert_eq!(
            cf_tsp_witness_length(t, [0usize, 1].as_ptr(), 2, &mut len),
            CfStatus::Ok
        );
        assert!((len - alpha).abs() < 1e-6);
        assert_eq!(
            cf_tsp_witness_length(t, [0usize, 2].as_ptr(), 2, &mut len),
            CfStatus::InvalidArgument
        );
        cf_tsp_free(t);
    }
}

#[test]
fn csp_equivalence() {
    unsafe {
        let mut agreed = 0;
        assert_eq!(cf_csp_equivalence(3, 12, 2, 2, 1_000_000, &mut agreed), CfStatus::Ok);
        assert_eq!(agreed, 12);
    }
}

#[test]
fn header_lists_the_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/cantor_forge.h")).unwrap();
    for name in [
        "cf_pointset_crossbar",
        "cf_spanner_verify",
        "cf_tsp_reduce",
        "cf_last_error",
        "typedef struct CfPointSet CfPointSet",
        "CF_STATUS_VERIFICATION_FAILED = 3",
    ] {
        assert!(h.contains(name), "{name}");
    }
}

/// Compiles tests/c/smoke.c against the header and the static library.
#[test]
fn c_smoke_program() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|p| p.parent()).unwrap().to_path_buf();
    let lib = profile_dir.join("libcantor_forge_ffi.a");
    if !lib.exists() {
        let st = Command::new(env!("CARGO"))
            .args(["build", "-p", "cantor-forge-ffi", "--lib"])
            .status()
            .unwrap();
        assert!(st.success());
    }
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let st = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("a C compiler on PATH");
    assert!(st.success(), "C compile failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "smoke exited with {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
