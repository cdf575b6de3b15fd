//! Reduction of degree `g-1` classes on `M_{g,n}` into
//! `{ψ_1^{g-1}, ψ_1^{g-2}ψ_2, ..., ψ_1^{g-2}ψ_n}`.
//!
//! The relations used are the `x = 1` pushforwards with two extra points
//! (fields `(a_1, ..., a_n, 3/2, -1/2)` with `a_i ∈ ½Z_{>=0}` for `i >= 2`),
//! the κ elimination relations, and pullbacks of both families from
//! `M_{g,n-1}`. They are put in echelon form, pivoting on the term furthest
//! from the basis.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use super::kappa::elimination_relation;
use super::{monomial_class, monomials_of_degree, Certificate, RelationUse, Step};
use crate::error::{Error, Result};
use crate::relation::RelationSpec;
use crate::scalar::Scalar;
use crate::taut::{Monomial, TautClass};
use crate::Rational;

#[derive(Clone, Debug)]
pub struct SocleResult {
    pub g: u32,
    pub n: usize,
    pub basis: Vec<Monomial>,
    pub coords: Vec<Rational>,
    pub certificate: Certificate,
}

impl SocleResult {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "basis": self.basis.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            "coords": self.coords.iter().map(crate::scalar::rational_to_string).collect::<Vec<_>>(),
            "certificate": self.certificate.to_json_value(),
        })
    }
}

pub fn socle_basis(g: u32, n: usize) -> Vec<Monomial> {
    (0..n)
        .map(|i| {
            let mut psi = vec![0; n];
            psi[0] = g - 1;
            if i > 0 {
                psi[0] -= 1;
                psi[i] = 1;
            }
            Monomial::psi_only(psi)
        })
        .collect()
}

/// Order in which terms are eliminated: κ terms first, then low ψ_1.
fn badness(m: &Monomial) -> (bool, Reverse<u32>, Vec<u32>, Vec<u32>) {
    (!m.kappa.is_empty(), Reverse(m.psi[0]), m.psi.clone(), m.kappa.clone())
}

struct Row {
    class: TautClass,
    combo: BTreeMap<usize, Rational>,
}

struct Plan {
    basis: Vec<Monomial>,
    rels: Vec<RelationUse>,
    rows: HashMap<Monomial, Row>,
}

impl Plan {
    fn worst(&self, x: &TautClass) -> Option<Monomial> {
        x.terms().map(|(m, _)| m).filter(|m| !self.basis.contains(m)).max_by_key(|m| badness(m)).cloned()
    }

    fn insert(&mut self, mut class: TautClass, mut combo: BTreeMap<usize, Rational>) -> Result<()> {
        while let Some(t) = self.worst(&class) {
            let Some(row) = self.rows.get(&t) else {
                let lead = class.coeff(&t);
                let inv = Rational::one() / lead;
                combo.values_mut().for_each(|v| *v *= &inv);
                self.rows.insert(t, Row { class: class.scale(&inv), combo });
                return Ok(());
            };
            let c = class.coeff(&t);
            class = class.sub(&row.class.scale(&c))?;
            for (k, v) in &row.combo {
                *combo.entry(*k).or_insert_with(Rational::zero) -= v * &c;
            }
        }
        Ok(())
    }
}

/// The `x = 1` relations on `M_{g,n}` with `a_2..a_n ∈ ½Z_{>=0}` summing to at most `g-1`.
fn x1_relations(g: u32, n: usize) -> Vec<RelationUse> {
    if n < 2 {
        return vec![];
    }
    let half = Rational::from_frac(1, 2);
    let mut out = vec![];
    // twice the fields a_2..a_n
    for tw in (0..=2 * (g - 1)).flat_map(|t| crate::graphs::compositions(t, n - 1)) {
        let rest: Vec<Rational> = tw.iter().map(|&t| Rational::from_int(t as i64) * &half).collect();
        let a1 = Rational::from_frac(4 * g as i64 - 3, 2) - rest.iter().cloned().sum::<Rational>();
        let mut fields = vec![a1];
        fields.extend(rest);
        fields.push(Rational::from_frac(3, 2));
        fields.push(-half.clone());
        out.push(RelationUse::new(RelationSpec::new(g, n, g + 1, fields, 1)));
    }
    out
}

fn kappa_relations(g: u32, n: usize) -> Vec<RelationUse> {
    monomials_of_degree(n, g - 1)
        .into_iter()
        .filter(|m| !m.kappa.is_empty())
        .map(|m| elimination_relation(g, n, &m))
        .collect()
}

fn own_relations(g: u32, n: usize) -> Vec<RelationUse> {
    let mut v = kappa_relations(g, n);
    v.extend(x1_relations(g, n));
    v
}

fn plans() -> &'static Mutex<HashMap<(u32, usize), Arc<Plan>>> {
    static P: OnceLock<Mutex<HashMap<(u32, usize), Arc<Plan>>>> = OnceLock::new();
    P.get_or_init(|| Mutex::new(HashMap::new()))
}

fn plan(g: u32, n: usize) -> Result<Arc<Plan>> {
    if let Some(p) = plans().lock().expect("plans").get(&(g, n)) {
        return Ok(p.clone());
    }
    let mut rels = own_relations(g, n);
    if n >= 3 {
        for r in own_relations(g, n - 1) {
            for at in 1..n {
                rels.push(r.pulled_back(at));
            }
        }
    }
    let mut p = Plan { basis: socle_basis(g, n), rels: vec![], rows: HashMap::new() };
    for (i, r) in rels.iter().enumerate() {
        let cls = r.class()?;
        p.insert(cls, BTreeMap::from([(i, Rational::one())]))?;
    }
    p.rels = rels;
    let p = Arc::new(p);
    plans().lock().expect("plans").insert((g, n), p.clone());
    Ok(p)
}

fn reduce_class(g: u32, n: usize, input: TautClass) -> Result<SocleResult> {
    let p = plan(g, n)?;
    let mut cur = input.clone();
    let mut combo: BTreeMap<usize, Rational> = BTreeMap::new();
    while let Some(t) = p.worst(&cur) {
        let row = p
            .rows
            .get(&t)
            .ok_or_else(|| Error::NonDegeneracy(format!("no relation eliminates {t} on M_{{{g},{n}}}")))?;
        let c = cur.coeff(&t);
        cur = cur.sub(&row.class.scale(&c))?;
        for (k, v) in &row.combo {
            *combo.entry(*k).or_insert_with(Rational::zero) += v * &c;
        }
    }
    let steps = combo
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(k, v)| Step { relation: p.rels[k].clone(), multiplier: v })
        .collect();
    let coords = p.basis.iter().map(|b| cur.coeff(b)).collect();
    let certificate = Certificate { g, n, input, steps, residual: cur };
    Ok(SocleResult { g, n, basis: p.basis.clone(), coords, certificate })
}

/// Coordinates of a pure ψ monomial of degree `g-1` over the socle basis.
pub fn socle_reduce(g: u32, n: usize, mu: &Monomial) -> Result<SocleResult> {
    if g < 2 || n < 2 {
        return Err(Error::InvalidInput(format!("socle reduction needs g >= 2 and n >= 2, got ({g},{n})")));
    }
    if !mu.kappa.is_empty() {
        return Err(Error::InvalidInput(format!("{mu} is not a pure ψ monomial")));
    }
    socle_reduce_any(g, n, mu)
}

/// As [`socle_reduce`] but for any ψ-κ monomial of degree `g-1` and `n >= 1`.
pub fn socle_reduce_any(g: u32, n: usize, mu: &Monomial) -> Result<SocleResult> {
    if g < 2 || n < 1 {
        return Err(Error::InvalidInput(format!("socle reduction needs g >= 2 and n >= 1, got ({g},{n})")));
    }
    if mu.degree() != g - 1 {
        return Err(Error::InvalidInput(format!("{mu} has degree {} instead of {}", mu.degree(), g - 1)));
    }
    if n == 1 {
        let certificate = super::eliminate_kappa(g, n, mu)?;
        let basis = socle_basis(g, 1);
        let coords = vec![certificate.residual.coeff(&basis[0])];
        if certificate.residual.len() > usize::from(!coords[0].is_zero()) {
            return Err(Error::Reduction(format!("{mu} did not reduce to a multiple of ψ_1^{}", g - 1)));
        }
        return Ok(SocleResult { g, n, basis, coords, certificate });
    }
    reduce_class(g, n, monomial_class(g, n, mu)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sweep(g: u32, n: usize) {
        for mu in monomials_of_degree(n, g - 1) {
            let r = socle_reduce_any(g, n, &mu).unwrap();
            assert!(r.certificate.verify().unwrap(), "({g},{n}) {mu}");
            assert!(r.certificate.residual.terms().all(|(m, _)| r.basis.contains(m)));
        }
    }

    #[test]
    fn basis_elements_stay() {
        let mu = Monomial::psi_only(vec![1, 1]);
        let r = socle_reduce(3, 2, &mu).unwrap();
        assert_eq!(r.coords, vec![Rational::zero(), Rational::one()]);
        assert!(r.certificate.steps.is_empty());
    }

    #[test]
    fn small_sweeps() {
        sweep(2, 2);
        sweep(3, 2);
        sweep(3, 1);
        sweep(4, 1);
    }

    #[test]
    fn psi_two_squared() {
        let r = socle_reduce(3, 2, &Monomial::psi_only(vec![0, 2])).unwrap();
        assert!(r.certificate.verify().unwrap());
        assert!(r.certificate.residual.terms().all(|(m, _)| m.kappa.is_empty()));
    }
}
