use std::ffi::{c_char, CStr, CString};
use std::ptr;

use gauge_color_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    unsafe {
        let len = gcc_last_error_message(buf.as_mut_ptr(), buf.len());
        let s = CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned();
        assert_eq!(len, s.len());
        s
    }
}

unsafe fn take_string(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_string_lossy().into_owned();
    gcc_string_free(p);
    s
}

#[test]
fn lattice_and_code_lifecycle() {
    unsafe {
        assert_eq!(gcc_abi_version(), GCC_ABI_VERSION);
        let mut lat = ptr::null_mut();
        assert_eq!(gcc_lattice_build(3, 1, &mut lat), GccStatus::Ok);
        let mut q = 0usize;
        assert_eq!(gcc_lattice_qubit_count(lat, &mut q), GccStatus::Ok);
        assert_eq!(q, 15);

        let mut code = ptr::null_mut();
        assert_eq!(gcc_code_build(lat, 1, 2, &mut code), GccStatus::Ok);
        // The code outlives the lattice handle.
        gcc_lattice_free(lat);
        let (mut s, mut g) = (0usize, 0usize);
        assert_eq!(gcc_code_stabilizer_rank(code, &mut s), GccStatus::Ok);
        assert_eq!(gcc_code_gauge_rank(code, &mut g), GccStatus::Ok);
        assert_eq!((s, g), (14, 14));

        let mut pass = false;
        let mut report = ptr::null_mut();
        assert_eq!(gcc_code_verify(code, &mut pass, &mut report), GccStatus::Ok);
        assert!(pass);
        let report: serde_json::Value = serde_json::from_str(&take_string(report)).unwrap();
        assert!(report.as_array().unwrap().iter().all(|c| c["pass"] == true));

        let mut plan = ptr::null_mut();
        assert_eq!(gcc_code_gate_plan_json(code, 3, &mut plan), GccStatus::Ok);
        let plan: serde_json::Value = serde_json::from_str(&take_string(plan)).unwrap();
        assert_eq!(plan["k"], 7);

        let dir = tempfile::tempdir().unwrap();
        let path = CString::new(dir.path().to_str().unwrap()).unwrap();
        assert_eq!(gcc_code_export(code, path.as_ptr()), GccStatus::Ok);
        assert!(dir.path().join("stabilizer.txt").exists());
        gcc_code_free(code);
    }
}

#[test]
fn json_round_trip() {
    unsafe {
        let mut lat = ptr::null_mut();
        assert_eq!(gcc_lattice_build(2, 2, &mut lat), GccStatus::Ok);
        let mut json = ptr::null_mut();
        assert_eq!(gcc_lattice_to_json(lat, &mut json), GccStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(gcc_lattice_from_json(json, &mut back), GccStatus::Ok);
        let mut q = 0;
        assert_eq!(gcc_lattice_qubit_count(back, &mut q), GccStatus::Ok);
        assert_eq!(q, 19);
        gcc_string_free(json);
        gcc_lattice_free(lat);
        gcc_lattice_free(back);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut lat = ptr::null_mut();
        assert_eq!(gcc_lattice_build(4, 1, &mut lat), GccStatus::InvalidParameter);
        assert!(last_error().contains("family"));
        assert!(lat.is_null());

        assert_eq!(gcc_lattice_build(3, 1, ptr::null_mut()), GccStatus::NullPointer);
        assert_eq!(gcc_lattice_qubit_count(ptr::null(), &mut 0), GccStatus::NullPointer);

        assert_eq!(gcc_lattice_build(3, 1, &mut lat), GccStatus::Ok);
        let mut code = ptr::null_mut();
        assert_eq!(gcc_code_build(lat, 2, 2, &mut code), GccStatus::InvalidParameter);
        assert!(last_error().contains("d + e ≤ D"));
        assert_eq!(gcc_code_build(lat, 1, 1, &mut code), GccStatus::Ok);
        let mut plan = ptr::null_mut();
        assert_eq!(gcc_code_gate_plan_json(code, 3, &mut plan), GccStatus::InvalidParameter);
        assert!(last_error().contains("D ≥ n·ē"));

        let bad = CString::new("{not json").unwrap();
        let mut other = ptr::null_mut();
        assert_ne!(gcc_lattice_from_json(bad.as_ptr(), &mut other), GccStatus::Ok);

        // Truncation keeps the terminator and reports the full length.
        let mut small = [0 as c_char; 4];
        let full = gcc_last_error_message(small.as_mut_ptr(), small.len());
        assert!(full > 3);
        assert_eq!(CStr::from_ptr(small.as_ptr()).to_bytes().len(), 3);

        gcc_code_free(code);
        gcc_lattice_free(lat);
        gcc_code_free(ptr::null_mut());
        gcc_string_free(ptr::null_mut());
    }
}
