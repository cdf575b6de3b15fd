//! Removing κ classes: degree `g-1` elimination and the low-degree index bound.

use std::cmp::Reverse;

use super::{monomial_class, pushed, Certificate, RelationUse, Work};
use crate::error::{Error, Result};
use crate::relation::RelationSpec;
use crate::scalar::Scalar;
use crate::taut::{Monomial, TautClass};
use crate::Rational;

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from_int(x)).collect()
}

/// `π_*Ω^{g-1+m}_{g,n+m}(a_1..a_n, b_1..b_m)` on `M_{g,n}` with `m = fields - n`.
pub fn firstgraph_relation(g: u32, n: usize, fields: &[i64]) -> Result<TautClass> {
    if fields.len() <= n {
        return Err(Error::InvalidInput("need at least one extra field".into()));
    }
    let m = fields.len() - n;
    let spec = RelationSpec::new(g, n, g - 1 + m as u32, ints(fields), 0);
    Ok((*pushed(&spec, &vec![0; fields.len()])?).clone())
}

/// The relation with `a_1 = d_1 + g - 1`, `a_i = d_i`, `b_j = e_j + 1`.
pub(crate) fn elimination_relation(g: u32, n: usize, mu: &Monomial) -> RelationUse {
    let mut fields: Vec<i64> = mu.psi.iter().map(|&d| d as i64).collect();
    fields[0] += g as i64 - 1;
    fields.extend(mu.kappa.iter().map(|&e| e as i64 + 1));
    let m = mu.kappa.len() as u32;
    RelationUse::new(RelationSpec::new(g, n, g - 1 + m, ints(&fields), 0))
}

/// Expresses a degree `g-1` monomial through pure ψ monomials.
pub fn eliminate_kappa(g: u32, n: usize, mu: &Monomial) -> Result<Certificate> {
    if g < 2 || n < 1 {
        return Err(Error::InvalidInput(format!("κ elimination needs g >= 2 and n >= 1, got ({g},{n})")));
    }
    if mu.degree() != g - 1 {
        return Err(Error::InvalidInput(format!("{mu} has degree {} instead of {}", mu.degree(), g - 1)));
    }
    eliminate_kappa_class(monomial_class(g, n, mu)?)
}

pub(crate) fn eliminate_kappa_class(input: TautClass) -> Result<Certificate> {
    let (g, n) = (input.g, input.n);
    let mut w = Work::new(input);
    // Most κ indices first, then the lowest ψ_1 exponent.
    while let Some(mu) = w
        .cur
        .terms()
        .map(|(m, _)| m)
        .filter(|m| !m.kappa.is_empty())
        .max_by_key(|m| (m.kappa.len(), Reverse(m.psi[0]), m.psi.clone(), m.kappa.clone()))
        .cloned()
    {
        w.apply(elimination_relation(g, n, &mu), &mu)?;
    }
    Ok(w.finish())
}

/// The relation `π_*(σ Ω^g_{g,n+m}(a))` reducing `mu` in degree `d < g`.
fn lowdeg_relation(g: u32, n: usize, d: u32, mu: &Monomial) -> Result<RelationUse> {
    let m = mu.kappa.len();
    let mut budget = d as i64 - g as i64 + m as i64;
    if budget < 0 {
        return Err(Error::InvalidInput(format!("{mu} has fewer than g-d = {} κ indices", g - d)));
    }
    // Caps on f for the legs after the distinguished one.
    // With no markings the point carrying the largest κ index is distinguished.
    let mut caps: Vec<i64> = if n >= 1 {
        let mut c: Vec<i64> = mu.psi[1..].iter().map(|&x| x as i64).collect();
        c.extend(mu.kappa.iter().map(|&e| e as i64 + 1));
        c
    } else {
        mu.kappa[1..].iter().map(|&e| e as i64 + 1).collect()
    };
    let mut f = vec![0i64; caps.len()];
    // Extra points first, from the end.
    for k in (0..caps.len()).rev() {
        let take = budget.min(caps[k]);
        f[k] = take;
        budget -= take;
    }
    if budget > 0 {
        return Err(Error::Reduction(format!("no admissible (f, a) split for {mu} in degree {d}")));
    }
    for (c, x) in caps.iter_mut().zip(&f) {
        *c -= x;
    }
    let rest: i64 = caps.iter().sum();
    let a1 = 2 * g as i64 - 1 - rest;
    let mut fields = vec![a1];
    fields.extend(&caps);
    let mut sigma = vec![0u32];
    sigma.extend(f.iter().map(|&x| x as u32));
    let total = fields.len();
    let spec = RelationSpec::new(g, total - m, g, ints(&fields), 0);
    Ok(RelationUse::new(spec).with_sigma(sigma))
}

/// Lowers the number of κ indices of a degree-`d` class, `d < g`, until every
/// term has fewer than `g - d` indices.
pub fn kappa_reduce_lowdeg(g: u32, n: usize, d: u32, mu: &Monomial) -> Result<Certificate> {
    if d >= g {
        return Err(Error::InvalidInput(format!("degree {d} is not below the genus {g}")));
    }
    if mu.degree() != d {
        return Err(Error::InvalidInput(format!("{mu} has degree {} instead of {d}", mu.degree())));
    }
    let need = (g - d) as usize;
    if mu.kappa.len() < need {
        return Err(Error::InvalidInput(format!("{mu} has fewer than g-d = {need} κ indices")));
    }
    let mut w = Work::new(monomial_class(g, n, mu)?);
    loop {
        let pick = w
            .cur
            .terms()
            .map(|(m, _)| m)
            .filter(|m| m.kappa.len() >= need)
            .max_by_key(|m| {
                let lead = if n >= 1 { m.psi[0] } else { m.kappa[0] };
                (m.kappa.len(), Reverse(lead), m.psi.clone(), m.kappa.clone())
            })
            .cloned();
        let Some(nu) = pick else { break };
        let rel = lowdeg_relation(g, n, d, &nu)?;
        w.apply(rel, &nu)?;
    }
    Ok(w.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qp::{q_full, q_norm};

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_frac(n, d)
    }

    #[test]
    fn genus_two_kappa_one() {
        // (0,3): the κ_1 coefficient is Q_2(3), i.e. 105/4 before the (-1/2)^2 factor
        let rel = firstgraph_relation(2, 1, &[0, 3]).unwrap();
        let k1 = Monomial::new(vec![0], vec![1]).unwrap();
        assert_eq!(rel.coeff(&k1), q_full(2, &r(3, 1)));
        assert_eq!(q_norm(2, &r(3, 1)), r(105, 4));
        let cert = eliminate_kappa(2, 1, &k1).unwrap();
        assert!(cert.verify().unwrap());
        assert!(cert.residual.terms().all(|(m, _)| m.kappa.is_empty()));
        assert_eq!(cert.residual.len(), 1);
    }

    #[test]
    fn firstgraph_coefficients() {
        // κ-part of the one-point pushforward
        for (g, n, a) in [(3u32, 1usize, vec![2i64, 3]), (3, 2, vec![1, 1, 3]), (4, 2, vec![3, 1, 3]), (4, 1, vec![1, 6])] {
            let rel = firstgraph_relation(g, n, &a).unwrap();
            let mut expect = TautClass::zero(g, n);
            for e in 1..g {
                for d in crate::graphs::compositions(g - 1 - e, n) {
                    let c = d.iter().zip(&a).fold(q_full(e as usize + 1, &r(a[n], 1)), |acc, (&di, &ai)| acc * q_full(di as usize, &r(ai, 1)));
                    expect.add_term(Monomial::new(d, vec![e]).unwrap(), c).unwrap();
                }
            }
            let kpart: Vec<_> = rel.terms().filter(|(m, _)| !m.kappa.is_empty()).map(|(m, c)| (m.clone(), c.clone())).collect();
            let want: Vec<_> = expect.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
            assert_eq!(kpart, want, "g={g} n={n} a={a:?}");
        }
    }

    #[test]
    fn genus_three_kappa_two() {
        let cert = eliminate_kappa(3, 1, &Monomial::new(vec![0], vec![2]).unwrap()).unwrap();
        assert!(cert.verify().unwrap());
        assert_eq!(cert.residual.terms().map(|(m, _)| m.psi.clone()).collect::<Vec<_>>(), vec![vec![2]]);
    }

    #[test]
    fn lowdeg_examples() {
        for (g, n, d, k) in [(3u32, 1usize, 2u32, vec![1u32, 1]), (2, 1, 1, vec![1]), (4, 1, 2, vec![1, 1]), (3, 0, 2, vec![1, 1]), (4, 0, 2, vec![1, 1])] {
            let mu = Monomial::new(vec![0; n], k).unwrap();
            let cert = kappa_reduce_lowdeg(g, n, d, &mu).unwrap();
            assert!(cert.verify().unwrap(), "({g},{n},{d}) {mu}");
            assert!(cert.residual.terms().all(|(m, _)| (m.kappa.len() as u32) < g - d), "({g},{n},{d}) {}", cert.residual);
        }
    }
}
