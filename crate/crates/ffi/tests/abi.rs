use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use curvchern_ffi::*;

fn fixture(name: &str) -> CString {
    let path = format!(
        "{}/../core/fixtures/{name}.json",
        env!("CARGO_MANIFEST_DIR")
    );
    CString::new(std::fs::read_to_string(path).unwrap()).unwrap()
}

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { curvchern_string_free(s) };
    text
}

fn last_error() -> String {
    let p = curvchern_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn load(name: &str) -> *mut CurvchernInput {
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { curvchern_input_from_json(fixture(name).as_ptr(), &mut h) },
        CurvchernStatus::Ok
    );
    h
}

#[test]
fn chern_document_through_the_abi() {
    let h = load("triangular");
    assert_eq!(unsafe { curvchern_input_rank(h) }, 2);
    let mut out = ptr::null_mut();
    let status = unsafe { curvchern_chern_json(h, CurvchernMethod::Direct, true, &mut out) };
    assert_eq!(status, CurvchernStatus::Ok);
    let doc: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(doc["method"], "direct");
    assert!(!doc["report"].is_null());

    let mut checked = 0usize;
    assert_eq!(
        unsafe { curvchern_compare(h, &mut checked) },
        CurvchernStatus::Ok
    );
    assert!(checked > 0);
    unsafe { curvchern_input_free(h) };
}

#[test]
fn status_codes() {
    let h = load("mf");
    let mut out = ptr::null_mut();
    let status = unsafe { curvchern_chern_json(h, CurvchernMethod::Finite, true, &mut out) };
    assert_eq!(status, CurvchernStatus::PreconditionFailed);
    assert!(out.is_null());
    assert!(last_error().contains("Z grading"));
    assert_eq!(
        unsafe { curvchern_input_set_caps(h, 3, 1) },
        CurvchernStatus::Ok
    );
    assert_eq!(
        unsafe { curvchern_compare(h, ptr::null_mut()) },
        CurvchernStatus::PreconditionFailed
    );
    unsafe { curvchern_input_free(h) };

    let mut h = ptr::null_mut();
    let bad = CString::new("{\"grading\": \"Z\"}").unwrap();
    assert_eq!(
        unsafe { curvchern_input_from_json(bad.as_ptr(), &mut h) },
        CurvchernStatus::ParseError
    );
    assert!(h.is_null());
    assert_eq!(
        unsafe { curvchern_input_from_json(ptr::null(), &mut h) },
        CurvchernStatus::NullArgument
    );
    assert_eq!(
        unsafe { curvchern_chern_json(ptr::null(), CurvchernMethod::Direct, true, &mut out) },
        CurvchernStatus::NullArgument
    );
    let invalid = [0xffu8, 0];
    assert_eq!(
        unsafe { curvchern_input_from_json(invalid.as_ptr().cast(), &mut h) },
        CurvchernStatus::InvalidUtf8
    );
    // success clears the error
    let mut v = ptr::null_mut();
    assert_eq!(
        unsafe { curvchern_validate_json(fixture("mf").as_ptr(), &mut v) },
        CurvchernStatus::Ok
    );
    assert!(take(v).starts_with("valid"));
    assert!(curvchern_last_error().is_null());
}

#[test]
fn validation_reports_witnesses() {
    let path = format!(
        "{}/../core/fixtures/mutants/leibniz.json",
        env!("CARGO_MANIFEST_DIR")
    );
    let text = CString::new(std::fs::read_to_string(path).unwrap()).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { curvchern_validate_json(text.as_ptr(), &mut out) },
        CurvchernStatus::CheckFailed
    );
    assert!(take(out).contains("Leibniz rule fails at (p, p)"));
}

fn target_dir() -> PathBuf {
    // tests run from <target>/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_static_library() {
    let lib = target_dir().join("libcurvchern_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let out = tempfile_path("curvchern_smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(dir.join("include"))
        .arg(dir.join("tests/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("a C compiler");
    assert!(status.success());
    let run = Command::new(&out)
        .arg(dir.join("../core/fixtures/triangular.json"))
        .output()
        .unwrap();
    assert_eq!(
        run.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok 0.1.0"));
    let _ = std::fs::remove_file(out);
}

fn tempfile_path(stem: &str) -> PathBuf {
    std::env::temp_dir().join(format!("{stem}_{}", std::process::id()))
}
