use std::ffi::{c_char, CStr, CString};
use std::ptr;

use fermat_actions_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(fa_last_error_message()) }
        .to_str()
        .unwrap()
        .to_owned()
}

fn group(degree: u32, gens: &[&str]) -> *mut FaPermGroup {
    let owned: Vec<CString> = gens.iter().map(|g| CString::new(*g).unwrap()).collect();
    let ptrs: Vec<*const c_char> = owned.iter().map(|c| c.as_ptr()).collect();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { fa_group_new(degree, ptrs.as_ptr(), ptrs.len(), &mut out) },
        FaStatus::Ok
    );
    out
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(fa_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn genus() {
    let mut g = 0;
    assert_eq!(unsafe { fa_total_genus(5, 3, 2, &mut g) }, FaStatus::Ok);
    assert_eq!(g, 16);
    assert_eq!(unsafe { fa_total_genus(2, 3, 1, &mut g) }, FaStatus::InvalidArgument);
    assert!(last_error().contains("hyperbolic"));
    assert_eq!(
        unsafe { fa_total_genus(5, 3, 2, ptr::null_mut()) },
        FaStatus::NullPointer
    );
}

#[test]
fn orbits_and_invariants() {
    unsafe {
        let mut set = ptr::null_mut();
        assert_eq!(fa_enumerate(5, 3, 2, &mut set), FaStatus::Ok);
        let mut len = 0;
        assert_eq!(fa_keyset_len(set, &mut len), FaStatus::Ok);
        assert_eq!(len, 27);

        let s4 = group(4, &["(1 2)", "(1 2 3 4)"]);
        let mut order = 0;
        assert_eq!(fa_group_order(s4, &mut order), FaStatus::Ok);
        assert_eq!(order, 24);
        let mut orbits = 0;
        assert_eq!(fa_count_orbits(set, s4, &mut orbits), FaStatus::Ok);
        assert_eq!(orbits, 4);

        let q7 = group(4, &["(1 2 3 4)", "(2 4)"]);
        let mut inv = ptr::null_mut();
        assert_eq!(fa_invariant_set(set, q7, &mut inv), FaStatus::Ok);
        assert_eq!(fa_keyset_len(inv, &mut len), FaStatus::Ok);
        assert_eq!(len, 1);
        let mut s = ptr::null_mut();
        assert_eq!(fa_keyset_key_string(inv, 0, &mut s), FaStatus::Ok);
        assert!(CStr::from_ptr(s).to_str().unwrap().starts_with("5/3/2:"));
        fa_string_free(s);
        assert_eq!(fa_keyset_key_string(inv, 1, &mut s), FaStatus::OutOfRange);

        let wrong = group(5, &["(1 2)"]);
        assert_eq!(fa_count_orbits(set, wrong, &mut orbits), FaStatus::InvalidArgument);
        assert_eq!(fa_invariant_set(set, wrong, &mut inv), FaStatus::InvalidArgument);

        for g in [s4, q7, wrong] {
            fa_group_free(g);
        }
        fa_keyset_free(inv);
        fa_keyset_free(set);
    }
}

#[test]
fn triples_and_normalizer() {
    unsafe {
        let mut q = ptr::null_mut();
        let name = CString::new("N5_D3").unwrap();
        assert_eq!(fa_group_from_case(name.as_ptr(), &mut q), FaStatus::Ok);
        let mut n = ptr::null_mut();
        assert_eq!(fa_group_normalizer(q, &mut n), FaStatus::Ok);
        let mut order = 0;
        assert_eq!(fa_group_order(n, &mut order), FaStatus::Ok);
        assert_eq!(order, 36);
        let mut count = 0;
        assert_eq!(fa_classify_triples(7, 5, q, 0, &mut count), FaStatus::Ok);
        assert_eq!(count, 3);
        assert_eq!(fa_classify_triples(31, 5, q, 1, &mut count), FaStatus::Ok);
        assert_eq!(count, 7);
        assert_eq!(fa_classify_triples(4, 5, q, 1, &mut count), FaStatus::InvalidArgument);
        assert!(last_error().contains("composite modulus unsupported"));
        assert_eq!(fa_classify_triples(101, 5, q, 0, &mut count), FaStatus::ScaleCap);
        fa_group_free(n);
        fa_group_free(q);
    }
}

#[test]
fn bad_inputs() {
    unsafe {
        let mut out = ptr::null_mut();
        let bad = CString::new("(1 1)").unwrap();
        let ptrs = [bad.as_ptr()];
        assert_eq!(fa_group_new(4, ptrs.as_ptr(), 1, &mut out), FaStatus::InvalidArgument);
        assert_eq!(fa_group_new(4, ptr::null(), 1, &mut out), FaStatus::NullPointer);
        assert_eq!(fa_group_new(4, ptr::null(), 0, &mut out), FaStatus::Ok);
        fa_group_free(out);
        let mut len = 0;
        assert_eq!(fa_keyset_len(ptr::null(), &mut len), FaStatus::NullPointer);
        assert_eq!(last_error(), "key set is null");
        let name = CString::new("N9_Q1").unwrap();
        assert_eq!(fa_group_from_case(name.as_ptr(), &mut out), FaStatus::InvalidArgument);
        fa_group_free(ptr::null_mut());
        fa_keyset_free(ptr::null_mut());
        fa_string_free(ptr::null_mut());
    }
}
