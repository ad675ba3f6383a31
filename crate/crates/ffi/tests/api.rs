use std::ffi::{CStr, CString};
use std::ptr;

use mvcirc_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn last_error() -> String {
    CStr::from_ptr(mv_last_error()).to_string_lossy().into_owned()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_string_lossy().into_owned();
    mv_string_free(s);
    out
}

#[test]
fn solve_round_trip() {
    unsafe {
        let mut alg = ptr::null_mut();
        assert_eq!(mv_algebra_zoo(cstr("Z4").as_ptr(), &mut alg), MvStatus::Ok);
        assert_eq!(mv_algebra_size(alg), 4);
        let mut c = ptr::null_mut();
        let text = cstr("g0 = input x\ng1 = add g0 g0\ng2 = const 2\noutputs: g1 g2\n");
        assert_eq!(mv_circuit_parse(alg, text.as_ptr(), &mut c), MvStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(mv_solve(alg, c, MvProblem::Csat, 0, &mut out), MvStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["answer"], "SAT");
        assert_eq!(v["assignment"], serde_json::json!([["x", 1]]));
        assert_eq!(mv_solve(alg, c, MvProblem::Ceqv, 0, &mut out), MvStatus::Ok);
        assert!(take(out).contains("NEQUIV"));
        mv_circuit_free(c);
        mv_algebra_free(alg);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut alg = ptr::null_mut();
        assert_eq!(mv_algebra_zoo(cstr("nope").as_ptr(), &mut alg), MvStatus::NotFound);
        assert!(alg.is_null());
        assert!(last_error().contains("nope"));
        assert_eq!(mv_algebra_parse(ptr::null(), &mut alg), MvStatus::NullPointer);
        assert_eq!(
            mv_algebra_parse(cstr("algebra x size 2\nop f arity 1\n0 9\n").as_ptr(), &mut alg),
            MvStatus::Parse
        );
        assert!(last_error().contains("line 3"), "{}", last_error());

        assert_eq!(mv_algebra_zoo(cstr("S3").as_ptr(), &mut alg), MvStatus::Ok);
        assert!(last_error().is_empty());
        let mut c = ptr::null_mut();
        let text = cstr(
            "g0 = input a\ng1 = input b\ng2 = input c\ng3 = mul g0 g1\ng4 = mul g3 g2\ng5 = const 1\noutputs: g4 g5\n",
        );
        assert_eq!(mv_circuit_parse(alg, text.as_ptr(), &mut c), MvStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(mv_solve(alg, c, MvProblem::Csat, 5, &mut out), MvStatus::Budget);
        assert!(out.is_null());
        // a circuit parsed over another algebra is rejected
        let mut other = ptr::null_mut();
        assert_eq!(mv_algebra_zoo(cstr("Z6").as_ptr(), &mut other), MvStatus::Ok);
        assert_eq!(mv_solve(other, c, MvProblem::Csat, 0, &mut out), MvStatus::Precondition);
        mv_circuit_free(c);
        mv_algebra_free(alg);
        mv_algebra_free(other);
        mv_algebra_free(ptr::null_mut());
        mv_string_free(ptr::null_mut());
    }
}

#[test]
fn classify_json() {
    unsafe {
        let mut alg = ptr::null_mut();
        let text = cstr("algebra z2 size 2\nop add arity 2\n0 1\n1 0\n");
        assert_eq!(mv_algebra_parse(text.as_ptr(), &mut alg), MvStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(mv_classify_json(alg, &mut out), MvStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["size"], 2);
        assert_eq!(v["verdicts"]["CSAT"]["verdict"], "PolyTime");
        mv_algebra_free(alg);
    }
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/mvcirc.h")).unwrap();
    for f in [
        "mv_algebra_parse",
        "mv_algebra_zoo",
        "mv_algebra_free",
        "mv_algebra_size",
        "mv_classify_json",
        "mv_circuit_parse",
        "mv_circuit_free",
        "mv_solve",
        "mv_string_free",
        "mv_last_error",
    ] {
        assert!(h.contains(&format!("{f}(")), "{f}");
    }
    assert!(h.contains("typedef struct MvAlgebra MvAlgebra;"));
    assert!(h.contains("MV_STATUS_BUDGET"));
    // the header is valid C when a compiler is around
    if let Ok(o) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-xc", "-std=c99", "-Wall", "-Werror", "-"])
        .stdin(std::process::Stdio::piped())
        .spawn()
        .and_then(|mut child| {
            use std::io::Write;
            child
                .stdin
                .take()
                .unwrap()
                .write_all(format!("{h}\nint main(void) {{ return 0; }}\n").as_bytes())?;
            child.wait_with_output()
        })
    {
        assert!(o.status.success(), "header does not compile");
    }
}
