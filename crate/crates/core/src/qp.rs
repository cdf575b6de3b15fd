//! The `Q_m` polynomials and the bivariate R-matrix polynomials `P_m(r, a)`.
//!
//! `P_m` is pinned by `P_0 = 1`, the difference equation
//!
//! ```text
//! P_m(r, a) - P_m(r, a - 1) = ((m - 1/2) r - a) P_{m-1}(r, a - 1)
//! ```
//!
//! and the boundary condition `P_m(r, 0) = P_m(r, r - 1)`. The boundary
//! condition at level `m + 1` is what fixes the free constant `c_m(r)` of
//! level `m`: summing the difference equation over `a = 1..r-1` gives
//! `m r (r - 1) c_m(r) + (known polynomial) = 0`.

use std::sync::{OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::poly::{BiPoly, Poly};
use crate::scalar::Scalar;
use crate::Rational;

fn factorial<T: Scalar>(m: usize) -> T {
    (1..=m as i64).fold(T::one(), |acc, k| acc * T::from_int(k))
}

fn half_product<T: Scalar>(m: usize, a: &T) -> T {
    // prod_{k=1}^{2m} (a + 1 - k/2)
    (1..=2 * m as i64).fold(T::one(), |acc, k| acc * (a.clone() + T::one() - T::from_frac(k, 2)))
}

/// `(1/m!) prod_{k=1}^{2m} (a + 1 - k/2)`: `Q_m` without the `(-1)^m / 2^m` factor.
pub fn q_norm<T: Scalar>(m: usize, a: &T) -> T {
    half_product(m, a) / factorial::<T>(m)
}

/// `Q_m(a) = (-1)^m / (2^m m!) prod_{k=1}^{2m} (a + 1 - k/2)`.
pub fn q_full<T: Scalar>(m: usize, a: &T) -> T {
    let sign = if m % 2 == 0 { T::one() } else { -T::one() };
    sign * q_norm(m, a) / crate::poly::pow(&T::from_int(2), m as u32)
}

/// `Q_m` as a polynomial in `a`.
pub fn q_sym<T: Scalar>(m: usize) -> Poly<T> {
    let mut p = Poly::constant(T::one(), 'a');
    for k in 1..=2 * m as i64 {
        p = p.mul(&Poly::linear(T::one() - T::from_frac(k, 2), 'a'));
    }
    let sign = if m % 2 == 0 { T::one() } else { -T::one() };
    p.scale(&(sign / (factorial::<T>(m) * crate::poly::pow(&T::from_int(2), m as u32))))
}

/// Part of `P_m` fixed by the difference equation alone (zero at `a = 0`).
fn p_particular<T: Scalar>(m: usize, prev: &BiPoly<T>) -> BiPoly<T> {
    // f(r, t) = ((m - 1/2) r - t) P_{m-1}(r, t - 1); P_m^part(a) = sum_{t=1}^{a} f(r, t).
    let factor = BiPoly::monomial(1, 0, T::from_frac(2 * m as i64 - 1, 2))
        .add(&BiPoly::monomial(0, 1, -T::one()));
    factor.mul(&prev.shift_a(&-T::one())).indefinite_sum_a()
}

/// Computes `P_0..=P_max` from scratch.
pub fn p_family<T: Scalar>(max: usize) -> Result<Vec<BiPoly<T>>> {
    let mut out = vec![BiPoly::constant(T::one())];
    let mut particular = p_particular(1, &out[0]);
    for m in 1..=max {
        // With c_m = 0 the next level misses its boundary condition by G(r);
        // a constant c_m shifts P_{m+1}(r, r - 1) by m r (r - 1) c_m.
        let g_line = p_particular(m + 1, &particular).on_line_a_eq_r_plus(&-T::one());
        let denom = Poly::from_coeffs(vec![T::zero(), -T::one(), T::one()], 'r')
            .scale(&T::from_int(m as i64));
        let (c, rem) = g_line.scale(&-T::one()).div_rem(&denom)?;
        if !rem.is_zero() {
            return Err(Error::Determination { level: m, detail: format!("remainder {rem}") });
        }
        let full = particular.add(&BiPoly::from_r_poly(&c));
        check_total_degree(m, &full)?;
        particular = p_particular(m + 1, &full);
        out.push(full);
    }
    for (m, p) in out.iter().enumerate() {
        let at_half = p.eval_r(&T::from_frac(1, 2));
        if at_half != q_sym::<T>(m) {
            return Err(Error::Determination {
                level: m,
                detail: format!("P_{m}(1/2, a) = {at_half} differs from Q_{m}"),
            });
        }
    }
    Ok(out)
}

fn check_total_degree<T: Scalar>(m: usize, p: &BiPoly<T>) -> Result<()> {
    if p.total_degree() != Some(2 * m as u32) {
        return Err(Error::Determination {
            level: m,
            detail: format!("total degree {:?}, expected {}", p.total_degree(), 2 * m),
        });
    }
    Ok(())
}

fn cache() -> &'static RwLock<Vec<BiPoly<Rational>>> {
    static CACHE: OnceLock<RwLock<Vec<BiPoly<Rational>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(Vec::new()))
}

/// `P_m(r, a)` over the rationals, memoized.
pub fn p_sym(m: usize) -> Result<BiPoly<Rational>> {
    if let Some(p) = cache().read().expect("p cache poisoned").get(m) {
        return Ok(p.clone());
    }
    let fam = p_family::<Rational>(m.max(4))?;
    let mut guard = cache().write().expect("p cache poisoned");
    if guard.len() < fam.len() {
        *guard = fam;
    }
    Ok(guard[m].clone())
}

/// Table `P_m(r, b)` for a fixed integer `r`, `0 <= m <= max_m`, `0 <= b <= r - 2`.
#[derive(Clone, Debug)]
pub struct PTable {
    pub r: i64,
    rows: Vec<Vec<Rational>>,
}

impl PTable {
    pub fn new(r: i64, max_m: usize) -> Result<Self> {
        let rq = Rational::from_int(r);
        let mut rows = Vec::with_capacity(max_m + 1);
        for m in 0..=max_m {
            let slice = p_sym(m)?.eval_r(&rq);
            rows.push((0..=(r - 2).max(0)).map(|b| slice.eval(&Rational::from_int(b))).collect());
        }
        Ok(PTable { r, rows })
    }

    pub fn max_m(&self) -> usize {
        self.rows.len() - 1
    }

    /// `P_m(r, b)`; `b` must already be reduced into `0..=r-2`.
    pub fn get(&self, m: usize, b: i64) -> &Rational {
        &self.rows[m][b as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_frac(n, d)
    }

    #[test]
    fn normalized_table_values() {
        let cases = [
            (1, q(3, 2), q(3, 1)),
            (1, q(1, 1), q(3, 2)),
            (1, q(1, 2), q(1, 2)),
            (1, q(0, 1), q(0, 1)),
            (2, q(5, 2), q(45, 4)),
            (2, q(2, 1), q(15, 4)),
            (2, q(3, 2), q(3, 4)),
            (3, q(5, 2), q(15, 8)),
            (3, q(2, 1), q(0, 1)),
            (2, q(3, 1), q(105, 4)),
        ];
        for (m, a, v) in cases {
            assert_eq!(q_norm(m, &a), v, "Q~_{m}({a})");
        }
        assert_eq!(q_norm(0, &q(17, 3)), q(1, 1));
    }

    #[test]
    fn full_normalization() {
        assert_eq!(q_full(1, &q(1, 1)), q(-3, 4));
        assert_eq!(q_full(2, &q(3, 2)), q(3, 16));
        for m in 1..6 {
            assert_eq!(q_full(m, &q(-1, 2)), q(0, 1));
        }
    }

    #[test]
    fn roots_of_q() {
        for m in 1..=10usize {
            for k in -1..=(2 * m as i64 - 2) {
                assert_eq!(q_full(m, &q(k, 2)), q(0, 1), "m={m} a={k}/2");
            }
            assert_ne!(q_full(m, &q(m as i64, 1)), q(0, 1));
        }
    }

    #[test]
    fn symbolic_q() {
        assert_eq!(q_sym::<Rational>(0), Poly::constant(q(1, 1), 'a'));
        let q1 = q_sym::<Rational>(1);
        assert_eq!(q1.coeffs(), &[q(0, 1), q(-1, 4), q(-1, 2)]);
        assert_eq!(q_sym::<Rational>(2).eval(&q(3, 2)), q(3, 16));
        for m in 0..=10 {
            let s = q_sym::<Rational>(m);
            assert_eq!(s.degree(), Some(2 * m));
            for a in [q(7, 3), q(-5, 2), q(11, 1)] {
                assert_eq!(s.eval(&a), q_full(m, &a));
            }
        }
    }

    #[test]
    fn q_difference_identity() {
        for m in 1..=10usize {
            let qm = q_sym::<Rational>(m);
            let lhs = qm.sub(&qm.compose(&Poly::linear(q(-1, 1), 'a')));
            let factor = Poly::from_coeffs(vec![q(2 * m as i64 - 1, 4), q(-1, 1)], 'a');
            let rhs = q_sym::<Rational>(m - 1).compose(&Poly::linear(q(-1, 1), 'a')).mul(&factor);
            assert_eq!(lhs, rhs, "m={m}");
        }
    }

    #[test]
    fn q1_reflection() {
        for k in -10..10 {
            let x = q(3 * k + 1, 7);
            assert_eq!(q_full(1, &(q(-1, 2) - x.clone())), q_full(1, &x));
        }
    }

    #[test]
    fn p_low_levels() {
        assert_eq!(p_sym(0).unwrap(), BiPoly::constant(q(1, 1)));
        // P_1 = (a/2)(r - 1 - a) - (r - 2)(2r - 1)/24
        let p1 = p_sym(1).unwrap();
        for (r, a) in [(3, 0), (3, 1), (7, 2), (10, 5), (-4, 3)] {
            let (rr, aa) = (q(r, 1), q(a, 1));
            let expect = aa.clone() / q(2, 1) * (rr.clone() - q(1, 1) - aa.clone())
                - (rr.clone() - q(2, 1)) * (q(2, 1) * rr - q(1, 1)) / q(24, 1);
            assert_eq!(p1.eval(&q(r, 1), &q(a, 1)), expect);
        }
        // r = 3 reproduces the Airy pattern -5/24, 7/24.
        assert_eq!(p1.eval(&q(3, 1), &q(0, 1)), q(-5, 24));
        assert_eq!(p1.eval(&q(3, 1), &q(1, 1)), q(7, 24));
    }

    #[test]
    fn p_specializes_to_q_and_solves_recursion() {
        for m in 0..=8usize {
            let p = p_sym(m).unwrap();
            assert_eq!(p.total_degree(), Some(2 * m as u32));
            assert_eq!(p.eval_r(&q(1, 2)), q_sym::<Rational>(m), "m={m}");
            if m == 0 {
                continue;
            }
            let prev = p_sym(m - 1).unwrap();
            for r in [3i64, 5, 8] {
                for a in 1..6 {
                    let (rr, aa) = (q(r, 1), q(a, 1));
                    let lhs = p.eval(&rr, &aa) - p.eval(&rr, &(aa.clone() - q(1, 1)));
                    let rhs = (q(2 * m as i64 - 1, 2) * rr.clone() - aa.clone())
                        * prev.eval(&rr, &(aa - q(1, 1)));
                    assert_eq!(lhs, rhs);
                }
                assert_eq!(p.eval(&q(r, 1), &q(0, 1)), p.eval(&q(r, 1), &q(r - 1, 1)));
            }
        }
    }

    #[test]
    fn family_is_generic_over_scalar() {
        let small = p_family::<Ratio<i128>>(3).unwrap();
        let big = p_family::<Rational>(3).unwrap();
        for m in 0..=3 {
            assert_eq!(small[m].eval(&Ratio::from_int(9), &Ratio::from_int(4)).to_string(),
                       big[m].eval(&q(9, 1), &q(4, 1)).to_string());
        }
    }

    #[test]
    fn r_slice_interpolation() {
        let p1 = p_sym(1).unwrap();
        let pts: Vec<_> = (5..=10).map(|r| (q(r, 1), p1.eval(&q(r, 1), &q(2, 1)))).collect();
        let slice = crate::poly::interpolate(&pts, 'r').unwrap();
        assert_eq!(slice, p1.eval_a(&q(2, 1)));
        assert_eq!(slice.degree(), Some(2));
    }
}
