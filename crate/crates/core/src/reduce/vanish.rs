//! Zero certificates for ψ-κ monomials of degree at least `g` on `M_{g,n}`.

use std::cmp::Reverse;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::kappa::eliminate_kappa_class;
use super::{monomial_class, Certificate, RelationUse, Work};
use crate::error::{Error, Result};
use crate::relation::RelationSpec;
use crate::scalar::Scalar;
use crate::taut::Monomial;
use crate::Rational;

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from_int(x)).collect()
}

/// `Ω^D_{g,n}` on the open space with `a_i = d_i` for `i >= 2`.
fn psi_relation(g: u32, mu: &Monomial) -> RelationUse {
    let mut fields: Vec<i64> = mu.psi.iter().map(|&d| d as i64).collect();
    fields[0] += g as i64 - 1;
    RelationUse::new(RelationSpec::open(g, mu.degree(), ints(&fields)))
}

/// `π_*(∏ψ_{n+j}^{f_j+1} Ω^g_{g,n+k}(0..0, a))` for a pure κ class.
fn kappa_relation(g: u32, n: usize, mu: &Monomial) -> Result<RelationUse> {
    let e = &mu.kappa;
    let d = mu.degree() as i64;
    let g_ = g as i64;
    let mut f = vec![0i64; e.len()];
    f[0] = (e[0] as i64 - g_).max(0);
    let mut budget = d - g_ - f[0];
    for j in (1..e.len()).rev() {
        let take = budget.min(e[j] as i64);
        f[j] = take;
        budget -= take;
    }
    if budget != 0 {
        return Err(Error::Reduction(format!("no σ split for {mu}")));
    }
    let mut fields = vec![0i64; n];
    let rest: i64 = (1..e.len()).map(|j| e[j] as i64 - f[j]).sum();
    fields.push(2 * g_ - 1 - rest);
    fields.extend((1..e.len()).map(|j| e[j] as i64 - f[j]));
    let mut sigma = vec![0u32; n];
    sigma.extend(f.iter().map(|&x| x as u32 + 1));
    Ok(RelationUse::new(RelationSpec::new(g, n, g, ints(&fields), 0)).with_sigma(sigma))
}

type Key = (u32, usize, Monomial);

fn cache() -> &'static Mutex<HashMap<Key, Arc<Certificate>>> {
    static C: OnceLock<Mutex<HashMap<Key, Arc<Certificate>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// A certificate with zero residual for a monomial of degree `>= g`, `g >= 1`.
pub fn vanish_reduce(g: u32, n: usize, mu: &Monomial) -> Result<Certificate> {
    Ok((*vanish_cached(g, n, mu)?).clone())
}

fn vanish_cached(g: u32, n: usize, mu: &Monomial) -> Result<Arc<Certificate>> {
    if g == 0 {
        return Err(Error::Unimplemented("genus 0 has no nontrivial open relations of this type".into()));
    }
    if mu.degree() < g {
        return Err(Error::InvalidInput(format!("{mu} has degree {} below g = {g}", mu.degree())));
    }
    let key = (g, n, mu.clone());
    if let Some(c) = cache().lock().expect("cache").get(&key) {
        return Ok(c.clone());
    }
    let mut w = Work::new(monomial_class(g, n, mu)?);
    loop {
        let pick = w
            .cur
            .terms()
            .map(|(m, _)| m)
            .max_by_key(|m| {
                let has_psi = m.psi.iter().any(|&p| p > 0);
                match (has_psi, m.kappa.is_empty()) {
                    (true, false) => (2, 0, Reverse(0), m.psi.clone(), m.kappa.clone()),
                    (false, false) => (1, m.kappa.len(), Reverse(m.kappa[0]), m.psi.clone(), m.kappa.clone()),
                    _ => (0, 0, Reverse(m.psi[0]), m.psi.clone(), m.kappa.clone()),
                }
            })
            .cloned();
        let Some(nu) = pick else { break };
        let has_psi = nu.psi.iter().any(|&p| p > 0);
        if !has_psi {
            if nu.kappa.is_empty() {
                return Err(Error::Reduction("degree-zero term in a vanishing reduction".into()));
            }
            w.apply(kappa_relation(g, n, &nu)?, &nu)?;
        } else if nu.kappa.is_empty() {
            w.apply(psi_relation(g, &nu), &nu)?;
        } else {
            // Split off one ψ and reduce the rest first.
            let i = nu.psi.iter().position(|&p| p > 0).expect("has ψ");
            let mut rest = nu.clone();
            rest.psi[i] -= 1;
            let sub = if rest.degree() >= g {
                vanish_cached(g, n, &rest)?
            } else {
                Arc::new(eliminate_kappa_class(monomial_class(g, n, &rest)?)?)
            };
            let mut e = vec![0; n];
            e[i] = 1;
            let c = w.cur.coeff(&nu);
            w.absorb(&sub, &e, &c)?;
        }
    }
    let cert = Arc::new(w.finish());
    cache().lock().expect("cache").insert(key, cert.clone());
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(g: u32, n: usize, psi: Vec<u32>, kappa: Vec<u32>) {
        let mu = Monomial::new(psi, kappa).unwrap();
        let cert = vanish_reduce(g, n, &mu).unwrap();
        assert!(cert.residual.is_zero(), "{mu}: {}", cert.residual);
        assert!(cert.verify().unwrap(), "{mu}");
    }

    #[test]
    fn examples() {
        check(1, 1, vec![1], vec![]);
        check(2, 1, vec![0], vec![2]);
        check(2, 2, vec![1, 0], vec![1]);
        check(2, 1, vec![0], vec![3]);
        check(3, 2, vec![1, 2], vec![]);
    }

    #[test]
    fn genus_one_psi_uses_open_relation() {
        let mu = Monomial::psi_only(vec![1]);
        let cert = vanish_reduce(1, 1, &mu).unwrap();
        assert_eq!(cert.steps.len(), 1);
        assert_eq!(cert.steps[0].relation.spec, RelationSpec::open(1, 1, ints(&[1])));
    }
}
