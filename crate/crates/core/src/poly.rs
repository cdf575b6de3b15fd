//! Dense univariate and sparse bivariate polynomials over an exact field,
//! plus exact Lagrange interpolation.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Univariate polynomial; `coeffs[k]` is the coefficient of `var^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
    var: char,
}

impl<T: Scalar> Poly<T> {
    pub fn zero(var: char) -> Self {
        Poly { coeffs: Vec::new(), var }
    }

    pub fn constant(c: T, var: char) -> Self {
        Self::from_coeffs(vec![c], var)
    }

    /// The monomial `var`.
    pub fn var(var: char) -> Self {
        Self::from_coeffs(vec![T::zero(), T::one()], var)
    }

    /// `var + c`
    pub fn linear(c: T, var: char) -> Self {
        Self::from_coeffs(vec![c, T::one()], var)
    }

    pub fn from_coeffs(mut coeffs: Vec<T>, var: char) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs, var }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn variable(&self) -> char {
        self.var
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(), self.var)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect(), self.var)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect(), self.var)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.var);
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::from_coeffs(out, self.var)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(T::one(), self.var);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `p(q(x))`.
    pub fn compose(&self, q: &Self) -> Self {
        let mut acc = Self::zero(q.var);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q).add(&Self::constant(c.clone(), q.var));
        }
        acc
    }

    /// Euclidean division; returns `(quotient, remainder)`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead = d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let qlen = rem.len().saturating_sub(dd);
        let mut quot = vec![T::zero(); qlen];
        for k in (0..qlen).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].clone() - c.clone() * dc.clone();
                }
            }
            quot[k] = c;
        }
        Ok((Self::from_coeffs(quot, self.var), Self::from_coeffs(rem, self.var)))
    }

    /// Quotient of an exact division; errors on a nonzero remainder.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::InexactDivision(format!("remainder {r}")));
        }
        Ok(q)
    }
}

impl<T: Scalar> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*{}", self.var)?,
                _ => write!(f, "({c})*{}^{k}", self.var)?,
            }
        }
        Ok(())
    }
}

/// Unique polynomial of degree `< points.len()` through all points.
pub fn interpolate<T: Scalar>(points: &[(T, T)], var: char) -> Result<Poly<T>> {
    if points.is_empty() {
        return Err(Error::Interpolation("no points".into()));
    }
    for (i, (x, _)) in points.iter().enumerate() {
        if points[..i].iter().any(|(y, _)| y == x) {
            return Err(Error::Interpolation(format!("duplicate abscissa {x}")));
        }
    }
    // Newton divided differences.
    let n = points.len();
    let xs: Vec<T> = points.iter().map(|p| p.0.clone()).collect();
    let mut dd: Vec<T> = points.iter().map(|p| p.1.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (dd[i].clone() - dd[i - 1].clone()) / (xs[i].clone() - xs[i - level].clone());
        }
    }
    let mut acc = Poly::constant(dd[n - 1].clone(), var);
    for i in (0..n - 1).rev() {
        acc = acc.mul(&Poly::linear(-xs[i].clone(), var)).add(&Poly::constant(dd[i].clone(), var));
    }
    Ok(acc)
}

/// Value at `x` of the interpolating polynomial, without building it.
pub fn interpolate_at<T: Scalar>(points: &[(T, T)], x: &T) -> Result<T> {
    Ok(interpolate(points, 'x')?.eval(x))
}

/// Sparse polynomial in `r` and `a`, keyed by `(exp_r, exp_a)`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct BiPoly<T> {
    terms: BTreeMap<(u32, u32), T>,
}

impl<T: Scalar> BiPoly<T> {
    pub fn zero() -> Self {
        BiPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: T) -> Self {
        let mut p = Self::zero();
        p.add_term(0, 0, c);
        p
    }

    pub fn monomial(er: u32, ea: u32, c: T) -> Self {
        let mut p = Self::zero();
        p.add_term(er, ea, c);
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, er: u32, ea: u32) -> T {
        self.terms.get(&(er, ea)).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, er: u32, ea: u32, c: T) {
        let e = self.terms.entry((er, ea)).or_insert_with(T::zero);
        *e = e.clone() + c;
        if e.is_zero() {
            self.terms.remove(&(er, ea));
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            out.add_term(i, j, c.clone() * s.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            for (&(k, l), d) in &other.terms {
                out.add_term(i + k, j + l, c.clone() * d.clone());
            }
        }
        out
    }

    pub fn eval(&self, r: &T, a: &T) -> T {
        self.terms.iter().fold(T::zero(), |acc, (&(i, j), c)| {
            acc + c.clone() * pow(r, i) * pow(a, j)
        })
    }

    /// Specializes `r`, leaving a polynomial in `a`.
    pub fn eval_r(&self, r: &T) -> Poly<T> {
        let mut out = Poly::zero('a');
        for (&(i, j), c) in &self.terms {
            let mut v = vec![T::zero(); j as usize + 1];
            v[j as usize] = c.clone() * pow(r, i);
            out = out.add(&Poly::from_coeffs(v, 'a'));
        }
        out
    }

    /// Specializes `a`, leaving a polynomial in `r`.
    pub fn eval_a(&self, a: &T) -> Poly<T> {
        let mut out = Poly::zero('r');
        for (&(i, j), c) in &self.terms {
            let mut v = vec![T::zero(); i as usize + 1];
            v[i as usize] = c.clone() * pow(a, j);
            out = out.add(&Poly::from_coeffs(v, 'r'));
        }
        out
    }

    /// Substitutes `a := a + shift` (shift an exact constant).
    pub fn shift_a(&self, shift: &T) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            let expanded = Poly::linear(shift.clone(), 'a').pow(j);
            for (k, b) in expanded.coeffs().iter().enumerate() {
                out.add_term(i, k as u32, c.clone() * b.clone());
            }
        }
        out
    }

    /// Substitutes `a := r + shift`, leaving a polynomial in `r`.
    pub fn on_line_a_eq_r_plus(&self, shift: &T) -> Poly<T> {
        let mut out = Poly::zero('r');
        for (&(i, j), c) in &self.terms {
            let mut rpow = vec![T::zero(); i as usize + 1];
            rpow[i as usize] = c.clone();
            let term = Poly::from_coeffs(rpow, 'r').mul(&Poly::linear(shift.clone(), 'r').pow(j));
            out = out.add(&term);
        }
        out
    }

    /// Embeds a polynomial in `r` (constant in `a`).
    pub fn from_r_poly(p: &Poly<T>) -> Self {
        let mut out = Self::zero();
        for (i, c) in p.coeffs().iter().enumerate() {
            out.add_term(i as u32, 0, c.clone());
        }
        out
    }

    /// `F(r, a) = sum_{t=1}^{a} self(r, t)` as a polynomial identity in `a`.
    pub fn indefinite_sum_a(&self) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            let s = power_sum::<T>(j);
            for (k, b) in s.coeffs().iter().enumerate() {
                out.add_term(i, k as u32, c.clone() * b.clone());
            }
        }
        out
    }
}

impl<T: Scalar> fmt::Display for BiPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&(i, j), c)| format!("({c})*r^{i}*a^{j}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub(crate) fn pow<T: Scalar>(x: &T, e: u32) -> T {
    let mut acc = T::one();
    for _ in 0..e {
        acc = acc * x.clone();
    }
    acc
}

/// `S_k(a) = sum_{t=1}^{a} t^k`, a polynomial of degree `k + 1` in `a`.
pub fn power_sum<T: Scalar>(k: u32) -> Poly<T> {
    let mut pts = Vec::with_capacity(k as usize + 2);
    let mut acc = T::zero();
    pts.push((T::zero(), T::zero()));
    for t in 1..=(k as i64 + 1) {
        acc = acc + pow(&T::from_int(t), k);
        pts.push((T::from_int(t), acc.clone()));
    }
    interpolate(&pts, 'a').expect("distinct integer abscissae")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::{BigRational, Ratio};
    use proptest::prelude::*;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_frac(n, d)
    }

    #[test]
    fn interpolation_examples() {
        let c = interpolate(&[(q(0, 1), q(1, 1)), (q(1, 1), q(1, 1))], 'x').unwrap();
        assert_eq!(c, Poly::constant(q(1, 1), 'x'));
        let sq = interpolate(&[(q(0, 1), q(0, 1)), (q(1, 1), q(1, 1)), (q(2, 1), q(4, 1))], 'x').unwrap();
        assert_eq!(sq, Poly::var('x').pow(2));
        let err = interpolate(&[(q(1, 1), q(0, 1)), (q(1, 1), q(2, 1))], 'x');
        assert!(matches!(err, Err(Error::Interpolation(_))));
        assert!(interpolate::<Q>(&[], 'x').is_err());
    }

    #[test]
    fn zero_degree_is_sentinel() {
        assert_eq!(Poly::<Q>::zero('a').degree(), None);
        assert_eq!(Poly::constant(q(0, 1), 'a').degree(), None);
        assert_eq!(Poly::constant(q(3, 1), 'a').degree(), Some(0));
    }

    #[test]
    fn power_sums_match_brute_force() {
        for k in 0..6u32 {
            let s = power_sum::<Q>(k);
            for a in 0..8i64 {
                let brute: i64 = (1..=a).map(|t| t.pow(k)).sum();
                assert_eq!(s.eval(&q(a, 1)), q(brute, 1));
            }
        }
    }

    #[test]
    fn division_round_trip() {
        let p = Poly::from_coeffs(vec![q(1, 1), q(-3, 2), q(0, 1), q(5, 1)], 'x');
        let d = Poly::linear(q(2, 3), 'x');
        let (qu, r) = p.div_rem(&d).unwrap();
        assert_eq!(qu.mul(&d).add(&r), p);
        assert!(r.degree().unwrap_or(0) == 0);
        assert!(p.mul(&d).div_exact(&d).unwrap() == p);
    }

    #[test]
    fn generic_over_small_rationals() {
        let pts: Vec<(Ratio<i64>, Ratio<i64>)> =
            (0..4).map(|x| (Ratio::from_int(x), Ratio::from_int(x * x * x - 2))).collect();
        let p = interpolate(&pts, 'x').unwrap();
        assert_eq!(p.coeff(3), Ratio::from_int(1));
        assert_eq!(p.coeff(0), Ratio::from_int(-2));
    }

    #[test]
    fn bipoly_shift_and_line() {
        // (r - a) a
        let p = BiPoly::monomial(1, 1, q(1, 1)).add(&BiPoly::monomial(0, 2, q(-1, 1)));
        let shifted = p.shift_a(&q(-1, 1));
        for (r, a) in [(3, 1), (7, 4), (-2, 5)] {
            assert_eq!(shifted.eval(&q(r, 1), &q(a, 1)), p.eval(&q(r, 1), &q(a - 1, 1)));
        }
        let line = p.on_line_a_eq_r_plus(&q(-1, 1));
        assert_eq!(line.eval(&q(5, 1)), p.eval(&q(5, 1), &q(4, 1)));
        let summed = p.indefinite_sum_a();
        let brute: Q = (1..=4).map(|t| p.eval(&q(9, 1), &q(t, 1))).fold(q(0, 1), |a, b| a + b);
        assert_eq!(summed.eval(&q(9, 1), &q(4, 1)), brute);
    }

    proptest! {
        #[test]
        fn interpolation_reproduces_inputs(ys in proptest::collection::vec(-50i64..50, 1..8), off in -5i64..5) {
            let pts: Vec<(Q, Q)> = ys.iter().enumerate()
                .map(|(i, &y)| (q(2 * i as i64 + off, 3), q(y, 7))).collect();
            let p = interpolate(&pts, 'x').unwrap();
            prop_assert!(p.degree().map_or(true, |d| d < pts.len()));
            for (x, y) in &pts {
                prop_assert_eq!(&p.eval(x), y);
            }
        }
    }
}
