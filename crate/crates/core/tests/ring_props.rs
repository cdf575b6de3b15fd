use proptest::prelude::*;
use tautring::taut::{Monomial, TautClass};
use tautring::{Rational, Scalar};

fn class(g: u32, n: usize) -> impl Strategy<Value = TautClass> {
    let term = (
        prop::collection::vec(0u32..3, n),
        prop::collection::vec(1u32..3, 0..3),
        -5i64..6,
        1i64..4,
    );
    prop::collection::vec(term, 1..4).prop_map(move |ts| {
        let mut x = TautClass::zero(g, n);
        for (psi, kappa, p, q) in ts {
            x.add_term(Monomial::new(psi, kappa).unwrap(), Rational::from_frac(p, q)).unwrap();
        }
        x
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn multiply_is_associative_and_commutative((a, b, c) in (class(2, 2), class(2, 2), class(2, 2))) {
        let ab = a.multiply(&b).unwrap();
        prop_assert_eq!(&ab, &b.multiply(&a).unwrap());
        prop_assert_eq!(ab.multiply(&c).unwrap(), a.multiply(&b.multiply(&c).unwrap()).unwrap());
    }
}
