use num_traits::Zero;
use tautring::reduce::{
    c_coeffs, eliminate_kappa, monomials_of_degree, nondegeneracy_check, socle_reduce, vanish_reduce,
};
use tautring::taut::Monomial;
use tautring::{Rational, Scalar};

#[test]
fn genus_one_marking_residuals_are_top_psi() {
    for g in 2..=5u32 {
        for mu in monomials_of_degree(1, g - 1) {
            let c = eliminate_kappa(g, 1, &mu).unwrap();
            assert!(c.verify().unwrap());
            let top = Monomial::psi_only(vec![g - 1]);
            assert!(c.residual.terms().all(|(m, _)| *m == top), "g={g} {mu}: {}", c.residual);
        }
    }
}

#[test]
fn socle_three_two_psi_two_squared() {
    let r = socle_reduce(3, 2, &Monomial::psi_only(vec![0, 2])).unwrap();
    assert!(r.certificate.verify().unwrap());
    assert_eq!(r.coords.len(), 2);
    assert!(r.coords.iter().any(|c| !c.is_zero()));
}

#[test]
fn socle_all_ones_monomial() {
    // ψ_1^{g-n} ψ_2 ... ψ_n at (4,3)
    let r = socle_reduce(4, 3, &Monomial::psi_only(vec![1, 1, 1])).unwrap();
    assert!(r.certificate.verify().unwrap());
    assert!(r.certificate.residual.terms().all(|(m, _)| r.basis.contains(m)));
}

#[test]
fn socle_rejects_kappa_input() {
    assert!(socle_reduce(3, 2, &Monomial::new(vec![0, 0], vec![2]).unwrap()).is_err());
}

#[test]
fn vanishing_certificates_serialize() {
    let c = vanish_reduce(2, 1, &Monomial::new(vec![0], vec![2]).unwrap()).unwrap();
    let v = c.to_json_value();
    assert_eq!(v["residual"], tautring::taut::TautClass::zero(2, 1).to_json_value());
    assert!(!v["steps"].as_array().unwrap().is_empty());
}

#[test]
fn nondegeneracy_small() {
    let (ok, s) = nondegeneracy_check(4, 3).unwrap();
    assert!(ok);
    assert_eq!(s, Rational::from_frac(-201, 8));
    let (_, s) = nondegeneracy_check(5, 3).unwrap();
    assert_eq!(s, Rational::from_frac(-213, 4));
    assert!(c_coeffs(3, 3).is_err());
}
