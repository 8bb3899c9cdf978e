use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use tworay_ffi::*;

const E1: &str = r#"{"p":[6,3],"q":[2,2],"S":[[2,4,6,8],[2]],"T":[[4,6],[]]}"#;

fn load(json: &str) -> (TworayStatus, *mut TworaySystem) {
    let c = CString::new(json).unwrap();
    let mut sys = ptr::null_mut();
    let status = unsafe { tworay_system_from_json(c.as_ptr(), &mut sys) };
    (status, sys)
}

/// Takes ownership of a library string.
fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { tworay_string_free(s) };
    out
}

fn last_error() -> Option<String> {
    let p = tworay_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

fn json_of(f: impl FnOnce(*mut *mut c_char) -> TworayStatus) -> (TworayStatus, serde_json::Value) {
    let mut out = ptr::null_mut();
    let status = f(&mut out);
    (status, serde_json::from_str(&take(out)).unwrap())
}

#[test]
fn e1_round_trip() {
    let (status, sys) = load(E1);
    assert_eq!(status, TworayStatus::Ok);
    assert_eq!(last_error(), None);

    let (mut v, mut a, mut r) = (0, 0, 0);
    assert_eq!(unsafe { tworay_quiver_counts(sys, &mut v, &mut a, &mut r) }, TworayStatus::Ok);
    assert_eq!((v, a, r), (20, 22, 9));

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { tworay_system_to_json(sys, &mut out) }, TworayStatus::Ok);
    assert_eq!(take(out), E1);

    let (status, adm) = json_of(|o| unsafe { tworay_admissible_json(sys, o) });
    assert_eq!(status, TworayStatus::Ok);
    assert_eq!(adm, serde_json::json!(["z:1:8", "z:2:2"]));

    let (status, c) = json_of(|o| unsafe { tworay_census_json(sys, o) });
    assert_eq!(status, TworayStatus::Ok);
    assert_eq!(c["preprojective_type"], serde_json::json!([9, 4]));
    assert_eq!(c["coray_tube_families"], 3);

    let (status, s) = json_of(|o| unsafe { tworay_structure_json(sys, o) });
    assert_eq!(status, TworayStatus::Ok);
    assert_eq!(s["structure"]["I"].as_array().unwrap().len(), 16);

    let (status, q) = json_of(|o| unsafe { tworay_quiver_json(sys, o) });
    assert_eq!(status, TworayStatus::Ok);
    assert!(q.is_object());

    unsafe { tworay_system_free(sys) };
}

#[test]
fn extend_by_admissible_and_inadmissible() {
    let (_, sys) = load(E1);
    let mut next = ptr::null_mut();
    let idx = CString::new("z:2:2").unwrap();
    assert_eq!(unsafe { tworay_extend(sys, idx.as_ptr(), &mut next) }, TworayStatus::Ok);
    let mut out = ptr::null_mut();
    unsafe { tworay_system_to_json(next, &mut out) };
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["T"], serde_json::json!([[4, 6], [2]]));

    let mut none = ptr::null_mut();
    let bad = CString::new("x:1:3").unwrap();
    assert_eq!(unsafe { tworay_extend(sys, bad.as_ptr(), &mut none) }, TworayStatus::Inadmissible);
    assert!(none.is_null());
    assert!(last_error().unwrap().contains("not admissible"));

    let junk = CString::new("q:1:1").unwrap();
    assert_eq!(unsafe { tworay_extend(sys, junk.as_ptr(), &mut none) }, TworayStatus::Parse);

    unsafe {
        tworay_system_free(next);
        tworay_system_free(sys);
    }
}

#[test]
fn error_statuses() {
    let (status, sys) = load(r#"{"p":[4],"q":[1],"S":[[2,3]],"T":[[]]}"#);
    assert_eq!(status, TworayStatus::Invalid);
    assert!(sys.is_null());
    assert!(last_error().unwrap().contains("DS6"));

    assert_eq!(load("{").0, TworayStatus::Parse);

    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { tworay_system_from_json(ptr::null(), &mut sys) }, TworayStatus::NullPointer);
    let bytes = b"\xff\0";
    assert_eq!(unsafe { tworay_system_from_json(bytes.as_ptr().cast(), &mut sys) }, TworayStatus::InvalidUtf8);

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { tworay_system_to_json(ptr::null(), &mut out) }, TworayStatus::NullPointer);

    let bad = CString::new(r#"{"p":[4],"q":[1],"S":[[2,3]],"T":[[]]}"#).unwrap();
    let (status, report) = json_of(|o| unsafe { tworay_validate_json(bad.as_ptr(), o) });
    assert_eq!(status, TworayStatus::Invalid);
    assert_eq!(report["ok"], false);

    unsafe {
        tworay_system_free(ptr::null_mut());
        tworay_string_free(ptr::null_mut());
    }
}

#[test]
fn fundamental_census_and_verify_budget() {
    let (_, sys) = load(r#"{"p":[2,1],"q":[1,1],"S":[[],[]],"T":[[],[]]}"#);
    let (status, c) = json_of(|o| unsafe { tworay_census_json(sys, o) });
    assert_eq!(status, TworayStatus::Ok);
    assert_eq!(c["status"], "precondition_unmet");

    let (status, r) = json_of(|o| unsafe { tworay_verify_json(sys, 1000, o) });
    assert_eq!(status, TworayStatus::Ok);
    assert_eq!(r["mismatches"], serde_json::json!([]));

    let (status, r) = json_of(|o| unsafe { tworay_verify_json(sys, 1, o) });
    assert_eq!(status, TworayStatus::VerificationFailed);
    assert_eq!(r["skipped"], true);
    unsafe { tworay_system_free(sys) };
}

#[test]
fn version_matches_manifest() {
    let v = unsafe { CStr::from_ptr(tworay_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(manifest_dir().join("include/tworay.h")).unwrap();
    for name in [
        "tworay_version",
        "tworay_last_error",
        "tworay_string_free",
        "tworay_system_from_json",
        "tworay_system_free",
        "tworay_system_to_json",
        "tworay_validate_json",
        "tworay_quiver_counts",
        "tworay_quiver_json",
        "tworay_structure_json",
        "tworay_admissible_json",
        "tworay_extend",
        "tworay_census_json",
        "tworay_verify_json",
        "typedef struct TworaySystem TworaySystem",
        "TWORAY_STATUS_INADMISSIBLE = 6",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

/// `target/<profile>`, two levels above this test binary.
fn profile_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_static_library() {
    let lib = profile_dir().join("libtworay_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("tworay_smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let built = Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest_dir().join("include"))
        .arg(manifest_dir().join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .expect("C compiler runs");
    assert!(built.status.success(), "{}", String::from_utf8_lossy(&built.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8(run.stdout).unwrap(), "20 22 9\n[\"z:1:8\",\"z:2:2\"]\n6 null\n");
}
