//! The coefficients `c_0, c_1, c_2` of the `s = 0` socle system and the
//! non-degeneracy polynomial `S(g, n)`.
//!
//! All values use the normalized `Q̃_m = (-2)^m Q_m`; every quantity here is
//! homogeneous, so this only rescales by a common power of `-2`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::pushed;
use crate::error::{Error, Result};
use crate::poly::BiPoly;
use crate::qp::{q_norm, q_sym};
use crate::relation::RelationSpec;
use crate::scalar::Scalar;
use crate::taut::Monomial;
use crate::Rational;

fn fr(n: i64, d: i64) -> Rational {
    Rational::from_frac(n, d)
}

fn q(m: i64, a: &Rational) -> Rational {
    if m < 0 {
        return Rational::zero();
    }
    q_norm(m as usize, a)
}

/// `hi (hi - 1/2) ... lo`.
fn desc(hi: &Rational, lo: &Rational) -> Rational {
    let mut acc = Rational::one();
    let mut x = hi.clone();
    while &x >= lo {
        acc *= &x;
        x -= fr(1, 2);
    }
    acc
}

fn factorial(k: i64) -> Rational {
    (1..=k).fold(Rational::one(), |acc, x| acc * Rational::from_int(x))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CCoeffs {
    pub g: u32,
    pub n: usize,
    pub c: [Rational; 3],
    pub c_hat: [Rational; 3],
}

impl CCoeffs {
    /// `ĉ_0 - 2ĉ_1 + ĉ_2`.
    pub fn second_difference(&self) -> Rational {
        &self.c_hat[0] - Rational::from_int(2) * &self.c_hat[1] + &self.c_hat[2]
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let s = |v: &[Rational; 3]| v.iter().map(crate::scalar::rational_to_string).collect::<Vec<_>>();
        serde_json::json!({ "g": self.g, "n": self.n, "c": s(&self.c), "c_hat": s(&self.c_hat) })
    }
}

fn check_range(g: u32, n: usize) -> Result<()> {
    if n < 3 || n as u32 + 1 > g {
        return Err(Error::InvalidInput(format!("c coefficients need 3 <= n <= g-1, got (g,n)=({g},{n})")));
    }
    Ok(())
}

/// `a_1` of the field vector `v_k`.
fn first_field(g: u32, n: usize, k: usize) -> Rational {
    Rational::from_int(2 * g as i64) - fr(n as i64 + 2 + k as i64, 2)
}

/// The fields `v_k = (a_1, 1^k, (1/2)^{n-1-k}, 3/2, -1/2)`.
pub(crate) fn v_fields(g: u32, n: usize, k: usize) -> Vec<Rational> {
    let mut v = vec![first_field(g, n, k)];
    v.extend(std::iter::repeat(Rational::one()).take(k));
    v.extend(std::iter::repeat(fr(1, 2)).take(n - 1 - k));
    v.push(fr(3, 2));
    v.push(fr(-1, 2));
    v
}

fn normalizer(g: u32, n: usize, k: usize) -> Rational {
    let a1 = first_field(g, n, k);
    let m = g as i64 + 1 - n as i64;
    let delta = q(m, &a1) - q(m, &(&a1 - fr(1, 2)));
    let legs = q(1, &fr(1, 2)).pow((n - 1 - k) as i32) * q(1, &Rational::one()).pow(k as i32);
    delta * legs * q(2, &fr(3, 2))
}

fn with_hats(g: u32, n: usize, c: [Rational; 3]) -> CCoeffs {
    let c_hat = [0, 1, 2].map(|k| &c[k] / normalizer(g, n, k));
    CCoeffs { g, n, c, c_hat }
}

/// Closed forms for `c_0, c_1, c_2`.
pub fn c_coeffs(g: u32, n: usize) -> Result<CCoeffs> {
    check_range(g, n)?;
    let (gr, nr) = (Rational::from_int(g as i64), Rational::from_int(n as i64));
    let half = fr(1, 2);
    let fact = factorial(g as i64 - n as i64);
    let gamma = Rational::from_int(3) * &gr + fr(5, 2) - Rational::from_int(3) * &nr;
    let c = [0i64, 1, 2].map(|k| {
        let h = fr(k, 2);
        let top = Rational::from_int(2) * &gr - &half - &nr * &half - &h;
        let alpha = fr(3, 2) * &gr - fr(9, 4) - Rational::from_int(3) * &h + fr(3, 2) * &nr;
        let beta = Rational::from_int(2) * &gr + &half - &nr * &half - &h;
        let t1 = desc(&top, &(&gr + &nr * &half - &h));
        let t2 = desc(&top, &(&gr - &half + &nr * &half - &h));
        let t3 = desc(&(&top - &half), &(&gr - Rational::one() + &nr * &half - &h));
        let legs = q(1, &half).pow((n as i64 - 1 - k) as i32) * q(1, &Rational::one()).pow(k as i32);
        legs * (alpha * t1 - beta * t2 + &gamma * t3) / &fact
    });
    Ok(with_hats(g, n, c))
}

/// The general formula for fields `a_2..a_n` in `{1/2, 1}`.
pub fn general_formula(g: u32, rest: &[Rational]) -> Rational {
    let n = rest.len() as i64 + 1;
    let g_ = g as i64;
    let a1 = Rational::from_int(2 * g_) - fr(3, 2) - rest.iter().cloned().sum::<Rational>();
    let half = fr(1, 2);
    let dil = Rational::from_int(2 * g_ - 2 + n);
    let q32 = |m| q(m, &fr(3, 2));
    let d1 = q(g_ + 1 - n, &a1) - q(g_ + 1 - n, &(&a1 - &half));
    let mut inner = &dil * q32(2) * q(g_ - n, &a1)
        + &dil * q32(1) * &d1
        + q(g_ + 2 - n, &a1) - q(g_ + 2 - n, &(&a1 - &half))
        + q(g_ + 2 - n, &(&a1 + Rational::one())) - q(g_ + 2 - n, &(&a1 + fr(3, 2)))
        + (q32(1) - q(1, &Rational::one())) * q(g_ + 1 - n, &a1);
    for al in rest {
        let q1 = q(1, al);
        inner += q32(2) * (q(1, al) - q(1, &(al - &half))) * q(g_ - n, &a1) / &q1;
        inner += (q(3, &(al + Rational::one())) - q(3, &(al + fr(3, 2)))) * q(g_ - n, &a1) / &q1;
        inner += (q32(2) - q(2, &(al + fr(3, 2)))) * &d1 / &q1;
    }
    rest.iter().fold(inner, |acc, al| acc * q(1, al))
}

/// `c_k` from the general formula at the fields `v_k`.
pub fn c_coeffs_general(g: u32, n: usize) -> Result<CCoeffs> {
    check_range(g, n)?;
    let c = [0usize, 1, 2].map(|k| general_formula(g, &v_fields(g, n, k)[1..n]));
    Ok(with_hats(g, n, c))
}

/// The monomials whose coefficients are summed into `c_k`.
pub(crate) fn z_monomials(g: u32, n: usize) -> Vec<Monomial> {
    let mut base = vec![1u32; n];
    base[0] = g - n as u32;
    let mut out = vec![Monomial::psi_only(base.clone())];
    for l in 1..n {
        let mut p = base.clone();
        p[l] = 0;
        out.push(Monomial { psi: p, kappa: vec![1] });
    }
    out
}

/// `c_k` read off the pushforward of the relation with fields `v_k`.
pub fn c_coeffs_graph_sum(g: u32, n: usize) -> Result<CCoeffs> {
    check_range(g, n)?;
    let scale = Rational::from_int(-2).pow(g as i32 + 1);
    let zs = z_monomials(g, n);
    let mut c = [Rational::zero(), Rational::zero(), Rational::zero()];
    for (k, slot) in c.iter_mut().enumerate() {
        let spec = RelationSpec::new(g, n, g + 1, v_fields(g, n, k), 1);
        let cls = pushed(&spec, &vec![0; n + 2])?;
        *slot = zs.iter().map(|m| cls.coeff(m)).sum::<Rational>() * &scale;
    }
    Ok(with_hats(g, n, c))
}

/// `S(g,n) = -g + 11n/8 - 9g²/4 + 9gn/8 - g³/2 + 3g²n/4 - n³/4`.
pub fn s_poly(g: i64, n: i64) -> Rational {
    let (g, n) = (Rational::from_int(g), Rational::from_int(n));
    -&g + fr(11, 8) * &n - fr(9, 4) * &g * &g + fr(9, 8) * &g * &n - fr(1, 2) * &g * &g * &g
        + fr(3, 4) * &g * &g * &n
        - fr(1, 4) * &n * &n * &n
}

/// Coefficients of `S(a+b+4, b+3)` keyed by `(deg_a, deg_b)`.
pub fn s_shifted_coeffs() -> BTreeMap<(u32, u32), Rational> {
    // Slot `r` carries `a`, slot `a` carries `b`.
    let lin = |ca: i64, cb: i64, c0: i64| {
        let mut p = BiPoly::constant(Rational::from_int(c0));
        p.add_term(1, 0, Rational::from_int(ca));
        p.add_term(0, 1, Rational::from_int(cb));
        p
    };
    let g = lin(1, 1, 4);
    let n = lin(0, 1, 3);
    let g2 = g.mul(&g);
    let s = g.scale(&fr(-1, 1))
        .add(&n.scale(&fr(11, 8)))
        .add(&g2.scale(&fr(-9, 4)))
        .add(&g.mul(&n).scale(&fr(9, 8)))
        .add(&g2.mul(&g).scale(&fr(-1, 2)))
        .add(&g2.mul(&n).scale(&fr(3, 4)))
        .add(&n.mul(&n).mul(&n).scale(&fr(-1, 4)));
    s.terms().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (*k, v.clone())).collect()
}

/// Whether `ĉ_0 - 2ĉ_1 + ĉ_2 != 0`, together with `S(g,n)`. The closed form is
/// checked against `S / ((g-1/2+n/2)(g-1+n/2)(g-3/2+n/2)(g-2+n/2))`.
pub fn nondegeneracy_check(g: u32, n: usize) -> Result<(bool, Rational)> {
    let cc = c_coeffs(g, n)?;
    let s = s_poly(g as i64, n as i64);
    let (gr, nh) = (Rational::from_int(g as i64), fr(n as i64, 2));
    let den = [fr(1, 2), Rational::one(), fr(3, 2), Rational::from_int(2)]
        .iter()
        .fold(Rational::one(), |acc, k| acc * (&gr - k + &nh));
    let lhs = fr(3, 4) * cc.second_difference();
    if lhs != &s / &den {
        return Err(Error::NonDegeneracy(format!("(3/4)(ĉ0-2ĉ1+ĉ2) = {lhs} disagrees with S/den = {}", &s / &den)));
    }
    Ok((!s.is_zero() && !lhs.is_zero(), s))
}

/// `Q_1(-1/2-α-β-γ) + Q_1(α) + Q_1(β) + Q_1(γ) - Q_1(α+β) - Q_1(α+γ) - Q_1(β+γ)`
/// expanded in `α, β, γ`; the identity says it is zero.
pub fn seven_term_residue() -> BTreeMap<[u32; 3], Rational> {
    type P = BTreeMap<[u32; 3], Rational>;
    fn add(p: &mut P, q: &P, s: &Rational) {
        for (k, v) in q {
            let e = p.entry(*k).or_insert_with(Rational::zero);
            *e += v * s;
        }
    }
    fn mul(p: &P, q: &P) -> P {
        let mut out = P::new();
        for (k1, v1) in p {
            for (k2, v2) in q {
                let k = [k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2]];
                *out.entry(k).or_insert_with(Rational::zero) += v1 * v2;
            }
        }
        out
    }
    // Q_1 composed with a linear form c + Σ x_i.
    let q1 = q_sym::<Rational>(1);
    let compose = |c: Rational, vars: &[(usize, i64)]| -> P {
        let mut lin = P::new();
        lin.insert([0, 0, 0], c);
        for &(i, s) in vars {
            let mut k = [0, 0, 0];
            k[i] = 1;
            lin.insert(k, Rational::from_int(s));
        }
        let mut out = P::new();
        let mut pw = P::from([([0, 0, 0], Rational::one())]);
        for coef in q1.coeffs() {
            add(&mut out, &pw, coef);
            pw = mul(&pw, &lin);
        }
        out
    };
    let one = Rational::one();
    let mut total = P::new();
    add(&mut total, &compose(fr(-1, 2), &[(0, -1), (1, -1), (2, -1)]), &one);
    for i in 0..3 {
        add(&mut total, &compose(Rational::zero(), &[(i, 1)]), &one);
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        add(&mut total, &compose(Rational::zero(), &[(i, 1), (j, 1)]), &-one.clone());
    }
    total.retain(|_, v| !v.is_zero());
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_at_four_three() {
        let (ok, s) = nondegeneracy_check(4, 3).unwrap();
        assert!(ok);
        assert_eq!(s, fr(-201, 8));
        assert_eq!(s_poly(5, 3), fr(-213, 4));
    }

    #[test]
    fn shifted_polynomial() {
        let c = s_shifted_coeffs();
        let want: BTreeMap<(u32, u32), Rational> = [
            ((0, 0), fr(-201, 8)),
            ((1, 0), fr(-173, 8)),
            ((0, 1), fr(-21, 2)),
            ((2, 0), fr(-6, 1)),
            ((1, 1), fr(-39, 8)),
            ((0, 2), fr(-9, 8)),
            ((3, 0), fr(-1, 2)),
            ((2, 1), fr(-3, 4)),
        ]
        .into_iter()
        .collect();
        assert_eq!(c, want);
    }

    #[test]
    fn seven_terms_cancel() {
        assert!(seven_term_residue().is_empty());
    }

    #[test]
    fn closed_form_matches_general_formula() {
        for (g, n) in [(4, 3), (5, 3), (5, 4), (7, 5)] {
            assert_eq!(c_coeffs(g, n).unwrap(), c_coeffs_general(g, n).unwrap(), "({g},{n})");
        }
    }

    #[test]
    fn range() {
        assert!(c_coeffs(3, 3).is_err());
        assert!(c_coeffs(5, 2).is_err());
    }
}
