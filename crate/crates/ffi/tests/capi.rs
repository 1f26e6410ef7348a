use std::f64::consts::PI;
use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::ptr;

use pq_ffi::*;

fn last_error() -> String {
    let p = pq_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn plane() -> *mut PqSpace {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { pq_space_euclidean(1, &mut s) }, PqStatus::Ok);
    s
}

fn path(space: *const PqSpace, pts: &[[f64; 2]]) -> *mut PqPath {
    let n = pts.len();
    let times: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let coords: Vec<f64> = pts.iter().flatten().copied().collect();
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { pq_path_new(space, times.as_ptr(), coords.as_ptr(), n, &mut p) },
        PqStatus::Ok,
        "{}",
        last_error()
    );
    p
}

#[test]
fn square_cocycle_through_handles() {
    unsafe {
        let s = plane();
        let mut dim = 0;
        assert_eq!(pq_space_dim(s, &mut dim), PqStatus::Ok);
        assert_eq!(dim, 2);
        let a = path(s, &[[0.0, 0.0], [1.0, 0.0]]);
        let b = path(s, &[[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]]);
        let mut ctx = ptr::null_mut();
        assert_eq!(pq_context_new(s, &mut ctx), PqStatus::Ok);
        let (mut raw, mut phase) = (f64::NAN, f64::NAN);
        assert_eq!(pq_cocycle(ctx, a, b, &mut raw, &mut phase), PqStatus::Ok);
        assert!((raw - 1.0).abs() < 1e-12);
        assert_eq!(raw, phase);
        assert_eq!(pq_cocycle(ctx, a, b, ptr::null_mut(), ptr::null_mut()), PqStatus::Ok);
        pq_path_free(a);
        pq_path_free(b);
        pq_context_free(ctx);
        pq_space_free(s);
    }
}

#[test]
fn cone_isotropy_and_class_phase() {
    unsafe {
        let mut cone = ptr::null_mut();
        assert_eq!(pq_space_cone(5, &mut cone), PqStatus::Ok);
        let n = 4096;
        let times: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let coords: Vec<f64> = times
            .iter()
            .flat_map(|t| {
                let a = 2.0 * PI / 5.0 * t;
                [a.cos(), a.sin()]
            })
            .collect();
        let mut l = ptr::null_mut();
        assert_eq!(
            pq_path_new(cone, times.as_ptr(), coords.as_ptr(), n + 1, &mut l),
            PqStatus::Ok
        );
        let mut ctx = ptr::null_mut();
        assert_eq!(pq_context_new(cone, &mut ctx), PqStatus::Ok);
        let mut phase = 0.0;
        assert_eq!(pq_isotropy(ctx, l, ptr::null_mut(), &mut phase), PqStatus::Ok);
        assert!((phase - PI / 5.0).abs() < 1e-6, "{phase}");
        let mut cls = f64::NAN;
        assert_eq!(pq_class_phase(ctx, l, &mut cls), PqStatus::Ok);
        assert!(cls.is_finite());
        pq_path_free(l);
        pq_context_free(ctx);
        pq_space_free(cone);
    }
}

#[test]
fn path_from_json_and_periods() {
    unsafe {
        let json =
            CString::new(r#"{"space": "sphere2", "knots": [[0.0, [1.0, 0.0, 0.0]], [1.0, [0.0, 1.0, 0.0]]]}"#).unwrap();
        let mut p = ptr::null_mut();
        assert_eq!(pq_path_from_json(json.as_ptr(), &mut p), PqStatus::Ok);
        let mut n = 0;
        assert_eq!(pq_path_knot_count(p, &mut n), PqStatus::Ok);
        assert_eq!(n, 2);
        pq_path_free(p);

        let mut s = ptr::null_mut();
        assert_eq!(pq_space_sphere2(&mut s), PqStatus::Ok);
        let (mut kind, mut a) = (PqGroupKind::Zero, 0.0);
        assert_eq!(pq_detect_periods(s, 64, 128, &mut kind, &mut a), PqStatus::Ok);
        assert_eq!(kind, PqGroupKind::Cyclic);
        assert!((a - 2.0 * PI).abs() < 1e-2);
        pq_space_free(s);
        let p = plane();
        assert_eq!(pq_detect_periods(p, 8, 8, &mut kind, &mut a), PqStatus::Ok);
        assert_eq!((kind, a), (PqGroupKind::Zero, 0.0));
        pq_space_free(p);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(pq_space_cone(0, &mut s), PqStatus::InvalidInput);
        assert!(s.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(pq_space_sphere2(ptr::null_mut()), PqStatus::NullPointer);
        assert_eq!(pq_space_dim(ptr::null(), &mut 0), PqStatus::NullPointer);

        let plane = plane();
        let a = path(plane, &[[0.0, 0.0], [1.0, 0.0]]);
        let b = path(plane, &[[0.0, 0.0], [2.0, 0.0]]);
        let mut ctx = ptr::null_mut();
        assert_eq!(pq_context_new(plane, &mut ctx), PqStatus::Ok);
        assert_eq!(
            pq_cocycle(ctx, a, b, ptr::null_mut(), ptr::null_mut()),
            PqStatus::Geometry
        );
        assert!(last_error().contains("end points"));
        assert_eq!(
            pq_isotropy(ctx, a, ptr::null_mut(), ptr::null_mut()),
            PqStatus::Geometry
        );
        assert_eq!(pq_context_set_quadrature(ctx, 0, 128, 1e-4), PqStatus::InvalidConfig);
        assert_eq!(pq_context_set_quadrature(ctx, 2, 64, 1e-4), PqStatus::Ok);
        assert!(pq_last_error().is_null());

        let bad = CString::new("{\"space\": ").unwrap();
        let mut p = ptr::null_mut();
        assert_eq!(pq_path_from_json(bad.as_ptr(), &mut p), PqStatus::Parse);
        let bytes = [0xffu8, 0];
        assert_eq!(pq_path_from_json(bytes.as_ptr().cast(), &mut p), PqStatus::InvalidUtf8);
        let times = [0.0, 0.5, 0.4, 1.0];
        let coords = [0.0; 8];
        assert_eq!(
            pq_path_new(plane, times.as_ptr(), coords.as_ptr(), 4, &mut p),
            PqStatus::InvalidInput
        );
        assert!(p.is_null());

        pq_path_free(a);
        pq_path_free(b);
        pq_context_free(ctx);
        pq_space_free(plane);
        pq_space_free(ptr::null_mut());
        pq_string_free(ptr::null_mut());
    }
}

#[test]
fn run_job_matches_cli() {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures");
    let job = std::fs::read_to_string(fixtures.join("job_cocycle_square.json")).unwrap();
    let (cmd, job, dir) = (
        CString::new("cocycle").unwrap(),
        CString::new(job).unwrap(),
        CString::new(fixtures.to_str().unwrap()).unwrap(),
    );
    unsafe {
        let (mut report, mut exit) = (ptr::null_mut(), -1);
        assert_eq!(
            pq_run_job(cmd.as_ptr(), job.as_ptr(), dir.as_ptr(), &mut report, &mut exit),
            PqStatus::Ok,
            "{}",
            last_error()
        );
        assert_eq!(exit, 0);
        let text = CStr::from_ptr(report).to_str().unwrap().to_owned();
        pq_string_free(report);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["results"]["raw"].as_f64(), Some(1.0));

        let verify = CString::new("verify").unwrap();
        let tight = CString::new(r#"{"suite": "paths", "cfg": {"tol": 1e-300}}"#).unwrap();
        assert_eq!(
            pq_run_job(verify.as_ptr(), tight.as_ptr(), ptr::null(), &mut report, &mut exit),
            PqStatus::Ok
        );
        assert_eq!(exit, 1);
        pq_string_free(report);

        let bogus = CString::new("bogus").unwrap();
        assert_eq!(
            pq_run_job(bogus.as_ptr(), job.as_ptr(), ptr::null(), &mut report, &mut exit),
            PqStatus::Parse
        );
        let unknown = CString::new(r#"{"suite": "nope"}"#).unwrap();
        assert_eq!(
            pq_run_job(verify.as_ptr(), unknown.as_ptr(), ptr::null(), &mut report, &mut exit),
            PqStatus::InvalidConfig
        );
    }
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(pq_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/pq.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in ["pq_run_job", "pq_cocycle", "pq_last_error", "PQ_STATUS_PANIC"] {
        assert!(text.contains(f), "{f} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"pq.h\"\nint main(void) { PqSpace *s = 0; PqStatus st = pq_space_sphere2(&s); pq_space_free(s); return st == PQ_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let out = std::process::Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(header.parent().unwrap())
        .arg(&src)
        .output()
        .expect("run C compiler");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
