use std::ffi::CStr;
use std::ptr;

use hamilton_group_ffi::*;

fn message() -> String {
    unsafe { CStr::from_ptr(hg_last_error_message()) }.to_string_lossy().into_owned()
}

unsafe fn make(n: usize, epsilon: i32, rot: &[f64], f: &[f64], v: &[f64], r: f64) -> *mut HgHamilton {
    let mut out = ptr::null_mut();
    let status = hg_hamilton_new(n, epsilon, rot.as_ptr(), f.as_ptr(), v.as_ptr(), r, &mut out);
    assert_eq!(status, HgStatus::Ok, "{}", message());
    out
}

#[test]
fn compose_matches_example() {
    unsafe {
        let g2 = make(1, 1, &[1.0], &[1.0], &[2.0], 0.0);
        let g1 = make(1, 1, &[1.0], &[3.0], &[4.0], 0.0);
        let mut g = ptr::null_mut();
        assert_eq!(hg_hamilton_compose(g2, g1, &mut g), HgStatus::Ok);
        let (mut eps, mut f, mut v, mut r) = (0, 0.0, 0.0, 0.0);
        assert_eq!(
            hg_hamilton_params(g, &mut eps, ptr::null_mut(), &mut f, &mut v, &mut r),
            HgStatus::Ok
        );
        assert_eq!((eps, f, v, r), (1, 4.0, 6.0, 2.0));
        assert_eq!(hg_hamilton_dim(g), 1);
        for h in [g, g1, g2] {
            hg_hamilton_free(h);
        }
    }
}

#[test]
fn inverse_and_matrix_roundtrip() {
    unsafe {
        let c = 0.6_f64;
        let s = 0.8_f64;
        let g = make(2, -1, &[c, -s, s, c], &[0.5, -1.0], &[0.25, 2.0], 1.5);
        let mut inv = ptr::null_mut();
        assert_eq!(hg_hamilton_inverse(g, &mut inv), HgStatus::Ok);
        let mut id = ptr::null_mut();
        assert_eq!(hg_hamilton_compose(inv, g, &mut id), HgStatus::Ok);
        let mut m = vec![0.0; 36];
        assert_eq!(hg_hamilton_to_matrix(id, m.as_mut_ptr(), m.len()), HgStatus::Ok);
        for i in 0..6 {
            for j in 0..6 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((m[i * 6 + j] - expected).abs() <= 1e-12);
            }
        }

        assert_eq!(hg_hamilton_to_matrix(g, m.as_mut_ptr(), m.len()), HgStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(hg_hamilton_from_matrix(m.as_ptr(), 6, 1e-10, &mut back), HgStatus::Ok);
        let mut rot = [0.0; 4];
        let mut r = 0.0;
        hg_hamilton_params(back, ptr::null_mut(), rot.as_mut_ptr(), ptr::null_mut(), ptr::null_mut(), &mut r);
        assert_eq!(rot, [c, -s, s, c]);
        assert_eq!(r, 1.5);

        let mut verdict = HgVerdict::GeneralLinear;
        assert_eq!(hg_classify(m.as_ptr(), 6, 1e-10, &mut verdict), HgStatus::Ok);
        assert_eq!(verdict, HgVerdict::Hamilton);
        for role in [HgFormRole::Time, HgFormRole::Symplectic] {
            let mut res = f64::NAN;
            assert_eq!(hg_form_residual(m.as_ptr(), 6, role, &mut res), HgStatus::Ok);
            assert!(res <= 1e-12);
        }
        for h in [g, inv, id, back] {
            hg_hamilton_free(h);
        }
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut out = ptr::null_mut();
        let status = hg_hamilton_new(1, 0, [1.0].as_ptr(), [0.0].as_ptr(), [0.0].as_ptr(), 0.0, &mut out);
        assert_eq!(status, HgStatus::InvalidArgument);
        assert!(message().contains("sign"));

        let status = hg_hamilton_new(1, 1, [2.0].as_ptr(), [0.0].as_ptr(), [0.0].as_ptr(), 0.0, &mut out);
        assert_eq!(status, HgStatus::NotAMember);

        assert_eq!(hg_hamilton_inverse(ptr::null(), &mut out), HgStatus::NullPointer);
        assert_eq!(hg_hamilton_identity(0, &mut out), HgStatus::InvalidArgument);

        let a = make(1, 1, &[1.0], &[0.0], &[0.0], 0.0);
        let mut b = ptr::null_mut();
        assert_eq!(hg_hamilton_identity(2, &mut b), HgStatus::Ok);
        assert_eq!(hg_hamilton_compose(a, b, &mut out), HgStatus::DimensionMismatch);
        let mut m = [0.0; 3];
        assert_eq!(hg_hamilton_to_matrix(a, m.as_mut_ptr(), 3), HgStatus::DimensionMismatch);

        let zero = [0.0; 16];
        let mut verdict = HgVerdict::Hamilton;
        assert_eq!(hg_classify(zero.as_ptr(), 4, 1e-10, &mut verdict), HgStatus::Singular);
        assert_eq!(hg_classify(zero.as_ptr(), 3, 1e-10, &mut verdict), HgStatus::DimensionMismatch);

        let mut id = ptr::null_mut();
        assert_eq!(hg_hamilton_identity(1, &mut id), HgStatus::Ok);
        assert_eq!(message(), "");
        for h in [a, b, id] {
            hg_hamilton_free(h);
        }
        hg_hamilton_free(ptr::null_mut());
    }
}
