use tautring::intersect::{compare_all, psi_integral_dvv, psi_integral_ppz};
use tautring::Rational;

#[test]
fn ppz_matches_dvv_up_to_dimension_five() {
    let rows = compare_all(5, Some(2)).unwrap();
    assert_eq!(rows.len(), 41);
    for r in &rows {
        assert!(r.equal(), "g={} exps={:?}: ppz {} vs dvv {}", r.g, r.exps, r.ppz, r.dvv);
    }
}

#[test]
fn genus_three_one_point() {
    let v = psi_integral_ppz(3, &[7]).unwrap();
    assert_eq!(v, psi_integral_dvv(3, &[7]).unwrap());
    assert_eq!(v, Rational::new(1.into(), 82944.into()));
}
