//! Reductions in the tautological ring of the open space `M_{g,n}`, each
//! backed by a certificate that re-expands to its input exactly.

mod coeffs;
mod dims;
mod kappa;
mod socle;
mod vanish;

pub use coeffs::{c_coeffs, c_coeffs_general, c_coeffs_graph_sum, nondegeneracy_check, s_poly, s_shifted_coeffs, seven_term_residue, CCoeffs};
pub use dims::{dim_bound, partitions, partitions_bounded, spanning_check, SpanReport};
pub use kappa::{eliminate_kappa, firstgraph_relation, kappa_reduce_lowdeg};
pub use socle::{socle_reduce, socle_reduce_any, socle_basis, SocleResult};
pub use vanish::vanish_reduce;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::relation::{omega_open, omega_rt_any, RelationSpec};
use crate::scalar::rational_to_string;
use crate::taut::{pullback_forget, Monomial, TautClass};
use crate::Rational;

/// One relation as used in a certificate: `factor · π^*( π_*(σ · Ω(spec)) )`
/// where the pushforward forgets the extra points of `spec` and the
/// pullbacks insert markings at the listed positions, in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelationUse {
    pub spec: RelationSpec,
    /// ψ exponents on all `n + m` legs, multiplied before the pushforward.
    pub sigma: Vec<u32>,
    pub pullbacks: Vec<usize>,
    pub factor: Monomial,
}

impl RelationUse {
    pub fn new(spec: RelationSpec) -> Self {
        let sigma = vec![0; spec.fields.len()];
        let factor = Monomial::one(spec.n);
        RelationUse { spec, sigma, pullbacks: vec![], factor }
    }

    pub fn with_sigma(mut self, sigma: Vec<u32>) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn target_n(&self) -> usize {
        self.spec.n + self.pullbacks.len()
    }

    /// Pulls back along forgetting a marking inserted at `at`.
    pub fn pulled_back(&self, at: usize) -> Self {
        let mut out = self.clone();
        out.pullbacks.push(at);
        let mut psi = out.factor.psi.clone();
        psi.insert(at, 0);
        out.factor = Monomial { psi, kappa: out.factor.kappa.clone() };
        out
    }

    /// Multiplies by a further ψ monomial on the target space.
    pub fn times_psi(&self, psi: &[u32]) -> Self {
        let mut out = self.clone();
        for (a, b) in out.factor.psi.iter_mut().zip(psi) {
            *a += b;
        }
        out
    }

    /// The relation as a class on `M_{g, target_n}`.
    pub fn class(&self) -> Result<TautClass> {
        let mut x = (*pushed(&self.spec, &self.sigma)?).clone();
        for &at in &self.pullbacks {
            x = pullback_forget(&x, at)?;
        }
        let f = TautClass::from_monomial(x.g, x.n, self.factor.clone(), one())?;
        if self.factor.kappa.is_empty() {
            x.times_psi(&self.factor.psi)
        } else {
            x.multiply(&f)
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "relation": self.spec.to_json_value(),
            "sigma": self.sigma,
            "pullbacks": self.pullbacks,
            "factor": self.factor.to_json_value(),
        })
    }
}

impl fmt::Display for RelationUse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec)?;
        if self.sigma.iter().any(|&s| s > 0) {
            write!(f, " sigma={:?}", self.sigma)?;
        }
        if !self.pullbacks.is_empty() {
            write!(f, " pullback{:?}", self.pullbacks)?;
        }
        if self.factor.degree() > 0 {
            write!(f, " times {}", self.factor)?;
        }
        Ok(())
    }
}

fn one() -> Rational {
    Rational::one()
}

type PushKey = (RelationSpec, Vec<u32>);

fn push_cache() -> &'static Mutex<HashMap<PushKey, Arc<TautClass>>> {
    static CACHE: OnceLock<Mutex<HashMap<PushKey, Arc<TautClass>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `π_*(σ · Ω(spec))` restricted to `M_{g,n}`, memoized.
pub fn pushed(spec: &RelationSpec, sigma: &[u32]) -> Result<Arc<TautClass>> {
    let key = (spec.clone(), sigma.to_vec());
    if let Some(hit) = push_cache().lock().expect("cache").get(&key) {
        return Ok(hit.clone());
    }
    if sigma.len() != spec.fields.len() {
        return Err(Error::InvalidInput("σ length differs from the number of fields".into()));
    }
    let value = if spec.extra() == 0 {
        omega_open(spec)?.times_psi(sigma)?
    } else {
        omega_rt_any(spec)?.times_leg_psi(sigma).push_open()?
    };
    let value = Arc::new(value);
    push_cache().lock().expect("cache").insert(key, value.clone());
    Ok(value)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub relation: RelationUse,
    pub multiplier: Rational,
}

/// `input = residual + Σ multiplier · relation`, where every relation is zero
/// in `R^*(M_{g,n})`.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub g: u32,
    pub n: usize,
    pub input: TautClass,
    pub steps: Vec<Step>,
    pub residual: TautClass,
}

impl Certificate {
    pub fn trivial(input: TautClass) -> Self {
        Certificate { g: input.g, n: input.n, residual: input.clone(), input, steps: vec![] }
    }

    /// Re-expands every relation and compares exactly.
    pub fn verify(&self) -> Result<bool> {
        let mut acc = self.residual.clone();
        for s in &self.steps {
            acc = acc.add(&s.relation.class()?.scale(&s.multiplier))?;
        }
        Ok(acc == self.input)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "g": self.g,
            "n": self.n,
            "input": self.input.to_json_value(),
            "steps": self.steps.iter().map(|s| {
                let mut v = s.relation.to_json_value();
                v["multiplier"] = serde_json::Value::String(rational_to_string(&s.multiplier));
                v
            }).collect::<Vec<_>>(),
            "residual": self.residual.to_json_value(),
        })
    }
}

/// Running reduction: `cur` is the residual so far.
pub(crate) struct Work {
    pub input: TautClass,
    pub cur: TautClass,
    pub steps: Vec<Step>,
    budget: usize,
}

impl Work {
    pub fn new(input: TautClass) -> Self {
        Work { cur: input.clone(), input, steps: vec![], budget: 200_000 }
    }

    fn tick(&mut self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::Reduction("step budget exhausted".into()));
        }
        self.budget -= 1;
        Ok(())
    }

    /// Cancels the `target` term of the residual with `rel`.
    pub fn apply(&mut self, rel: RelationUse, target: &Monomial) -> Result<()> {
        self.tick()?;
        let cls = rel.class()?;
        let lead = cls.coeff(target);
        if lead.is_zero() {
            return Err(Error::Reduction(format!("{rel} does not contain {target}")));
        }
        let c = self.cur.coeff(target) / lead;
        self.cur = self.cur.sub(&cls.scale(&c))?;
        self.steps.push(Step { relation: rel, multiplier: c });
        Ok(())
    }

    /// Applies a certificate for `sub.input`, multiplied by `∏ψ^psi` and `s`.
    pub fn absorb(&mut self, sub: &Certificate, psi: &[u32], s: &Rational) -> Result<()> {
        self.tick()?;
        let lift = |x: &TautClass| -> Result<TautClass> { Ok(x.times_psi(psi)?.scale(s)) };
        self.cur = self.cur.sub(&lift(&sub.input)?)?.add(&lift(&sub.residual)?)?;
        for st in &sub.steps {
            self.steps.push(Step { relation: st.relation.times_psi(psi), multiplier: &st.multiplier * s });
        }
        Ok(())
    }

    pub fn finish(self) -> Certificate {
        Certificate { g: self.input.g, n: self.input.n, input: self.input, steps: self.steps, residual: self.cur }
    }
}

pub(crate) fn monomial_class(g: u32, n: usize, m: &Monomial) -> Result<TautClass> {
    if m.psi.len() != n {
        return Err(Error::AmbientMismatch(format!("monomial {m} on M_{{{g},{n}}}")));
    }
    TautClass::from_monomial(g, n, m.clone(), one())
}

/// All ψ-κ monomials of degree `d` on `n` markings.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    let mut out = vec![];
    for kd in 0..=d {
        for kappa in crate::reduce::dims::partitions(kd) {
            for psi in crate::graphs::compositions(d - kd, n) {
                out.push(Monomial { psi, kappa: kappa.clone() });
            }
        }
    }
    out.sort();
    out
}
