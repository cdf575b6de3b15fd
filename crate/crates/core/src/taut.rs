//! ψ-κ monomials on the open moduli space `M_{g,n}` and their algebra.
//!
//! κ classes are stored in the multi-index basis
//! `κ_{e_1..e_m} = π_*(ψ_{n+1}^{e_1+1} ... ψ_{n+m}^{e_m+1})` with positive indices.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graphs::{tails, DecoratedGraph};
use crate::scalar::{rational_to_string, Scalar};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub psi: Vec<u32>,
    /// Multi-index κ, sorted descending, no zero entries.
    pub kappa: Vec<u32>,
}

impl Monomial {
    pub fn new(psi: Vec<u32>, mut kappa: Vec<u32>) -> Result<Self> {
        if kappa.contains(&0) {
            return Err(Error::InvalidInput("κ index 0 is not stored".into()));
        }
        kappa.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Monomial { psi, kappa })
    }

    pub fn psi_only(psi: Vec<u32>) -> Self {
        Monomial { psi, kappa: vec![] }
    }

    pub fn one(n: usize) -> Self {
        Monomial { psi: vec![0; n], kappa: vec![] }
    }

    pub fn degree(&self) -> u32 {
        self.psi.iter().sum::<u32>() + self.kappa.iter().sum::<u32>()
    }

    pub fn is_pure_psi(&self) -> bool {
        self.kappa.is_empty()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({ "psi": self.psi, "kappa": self.kappa })
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.psi.cmp(&other.psi))
            .then_with(|| self.kappa.cmp(&other.kappa))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![];
        for (i, &e) in self.psi.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("psi{}", i + 1)),
                _ => parts.push(format!("psi{}^{}", i + 1, e)),
            }
        }
        if !self.kappa.is_empty() {
            let idx: Vec<String> = self.kappa.iter().map(|k| k.to_string()).collect();
            parts.push(format!("kappa[{}]", idx.join(",")));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// A tautological class on `M_{g,n}` as a combination of monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TautClass {
    pub g: u32,
    pub n: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl TautClass {
    pub fn zero(g: u32, n: usize) -> Self {
        TautClass { g, n, terms: BTreeMap::new() }
    }

    pub fn from_monomial(g: u32, n: usize, m: Monomial, c: Rational) -> Result<Self> {
        let mut out = TautClass::zero(g, n);
        out.add_term(m, c)?;
        Ok(out)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) -> Result<()> {
        if m.psi.len() != self.n {
            return Err(Error::AmbientMismatch(format!("monomial {m} on M_{{{},{}}}", self.g, self.n)));
        }
        if c.is_zero() {
            return Ok(());
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
        Ok(())
    }

    fn check_ambient(&self, other: &TautClass) -> Result<()> {
        if self.g != other.g || self.n != other.n {
            return Err(Error::AmbientMismatch(format!(
                "M_{{{},{}}} vs M_{{{},{}}}",
                self.g, self.n, other.g, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &TautClass) -> Result<TautClass> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TautClass) -> Result<TautClass> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> TautClass {
        let mut out = TautClass::zero(self.g, self.n);
        if s.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect();
        out
    }

    /// Scales so that the largest monomial has coefficient 1.
    pub fn normalized(&self) -> TautClass {
        match self.leading() {
            Some((_, c)) => self.scale(&(Rational::one() / c)),
            None => self.clone(),
        }
    }

    pub fn multiply(&self, other: &TautClass) -> Result<TautClass> {
        self.check_ambient(other)?;
        let mut out = TautClass::zero(self.g, self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                for (m, c) in multiply_monomials(m1, m2) {
                    out.add_term(m, c * c1 * c2)?;
                }
            }
        }
        Ok(out)
    }

    /// Multiplies by a pure ψ monomial (cheap path, no κ conversion).
    pub fn times_psi(&self, psi: &[u32]) -> Result<TautClass> {
        if psi.len() != self.n {
            return Err(Error::AmbientMismatch("ψ multiplier length".into()));
        }
        let mut out = TautClass::zero(self.g, self.n);
        for (m, c) in &self.terms {
            let p = m.psi.iter().zip(psi).map(|(a, b)| a + b).collect();
            out.terms.insert(Monomial { psi: p, kappa: m.kappa.clone() }, c.clone());
        }
        Ok(out)
    }

    /// Keeps only the terms of the given degree.
    pub fn degree_part(&self, d: u32) -> TautClass {
        let mut out = TautClass::zero(self.g, self.n);
        out.terms = self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect();
        out
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| serde_json::json!({ "psi": m.psi, "kappa": m.kappa, "coeff": rational_to_string(c) }))
            .collect();
        serde_json::json!({ "g": self.g, "n": self.n, "terms": terms })
    }
}

impl fmt::Display for TautClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().rev().map(|(m, c)| format!("({c})*{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Set partitions of `0..m` as lists of blocks.
pub fn set_partitions(m: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(i: usize, m: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == m {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(i);
            rec(i + 1, m, cur, out);
            cur[b].pop();
        }
        cur.push(vec![i]);
        rec(i + 1, m, cur, out);
        cur.pop();
    }
    let mut out = vec![];
    rec(0, m, &mut vec![], &mut out);
    out
}

fn factorial(k: usize) -> Rational {
    (1..=k as i64).fold(Rational::one(), |acc, x| acc * Rational::from_int(x))
}

fn sorted_desc(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// Multi-index κ as a combination of products of single-index κ's:
/// a sum over permutations, grouped by cycle type into set partitions.
pub fn multi_to_singles(kappa: &[u32]) -> Vec<(Vec<u32>, Rational)> {
    let mut acc: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    for p in set_partitions(kappa.len()) {
        let weight = p.iter().fold(Rational::one(), |w, b| w * factorial(b.len() - 1));
        let prod = sorted_desc(p.iter().map(|b| b.iter().map(|&i| kappa[i]).sum()).collect());
        *acc.entry(prod).or_insert_with(Rational::zero) += weight;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// A product of single-index κ's in the multi-index basis.
pub fn singles_to_multi(singles: &[u32]) -> Vec<(Vec<u32>, Rational)> {
    let m = singles.len();
    let mut acc: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    for p in set_partitions(m) {
        let sign = if (m - p.len()) % 2 == 0 { Rational::one() } else { -Rational::one() };
        let idx = sorted_desc(p.iter().map(|b| b.iter().map(|&i| singles[i]).sum()).collect());
        *acc.entry(idx).or_insert_with(Rational::zero) += sign;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn multiply_monomials(a: &Monomial, b: &Monomial) -> Vec<(Monomial, Rational)> {
    let psi: Vec<u32> = a.psi.iter().zip(&b.psi).map(|(x, y)| x + y).collect();
    if a.kappa.is_empty() || b.kappa.is_empty() {
        let kappa = sorted_desc(a.kappa.iter().chain(&b.kappa).copied().collect());
        return vec![(Monomial { psi, kappa }, Rational::one())];
    }
    let mut acc: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    for (s1, c1) in multi_to_singles(&a.kappa) {
        for (s2, c2) in multi_to_singles(&b.kappa) {
            let singles: Vec<u32> = s1.iter().chain(&s2).copied().collect();
            for (k, c) in singles_to_multi(&singles) {
                *acc.entry(k).or_insert_with(Rational::zero) += c * &c1 * &c2;
            }
        }
    }
    acc.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (Monomial { psi: psi.clone(), kappa: k }, c))
        .collect()
}

/// Pushes `∏ ψ_i^{psi_i} · ∏ κ_{singles}` forward along the map forgetting
/// the points `keep..psi.len()` (last one first), on rational-tails spaces.
/// Returns ψ-monomials on `keep` points with products of single κ's.
pub fn push_forget(g: u32, psi: Vec<u32>, singles: Vec<u32>, keep: usize) -> BTreeMap<(Vec<u32>, Vec<u32>), Rational> {
    let mut state: BTreeMap<(Vec<u32>, Vec<u32>), Rational> = BTreeMap::new();
    state.insert((psi, sorted_desc(singles)), Rational::one());
    let mut big_n = state.keys().next().map_or(0, |k| k.0.len());
    while big_n > keep {
        let mut next: BTreeMap<(Vec<u32>, Vec<u32>), Rational> = BTreeMap::new();
        let mut put = |k: (Vec<u32>, Vec<u32>), c: Rational| {
            let slot = next.entry(k).or_insert_with(Rational::zero);
            *slot += c;
        };
        for ((psi, singles), coeff) in state {
            let f0 = psi[big_n - 1];
            let base = &psi[..big_n - 1];
            for mask in 0u32..(1 << singles.len()) {
                let f = f0 + (0..singles.len()).filter(|&j| mask >> j & 1 == 1).map(|j| singles[j]).sum::<u32>();
                let rest: Vec<u32> = (0..singles.len()).filter(|&j| mask >> j & 1 == 0).map(|j| singles[j]).collect();
                if f >= 2 {
                    let mut ks = rest;
                    ks.push(f - 1);
                    put((base.to_vec(), sorted_desc(ks)), coeff.clone());
                } else if f == 1 {
                    let dil = Rational::from_int(2 * g as i64 - 2 + big_n as i64 - 1);
                    put((base.to_vec(), rest), coeff.clone() * dil);
                } else {
                    for i in 0..base.len() {
                        if base[i] > 0 {
                            let mut p = base.to_vec();
                            p[i] -= 1;
                            put((p, rest.clone()), coeff.clone());
                        }
                    }
                }
            }
        }
        state = next.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        big_n -= 1;
    }
    state
}

/// `∫_{M̄_{0,k}} ∏ ψ^{d}`.
pub fn genus0_integral(exps: &[u32]) -> Rational {
    let k = exps.len();
    if k < 3 || exps.iter().sum::<u32>() as usize != k - 3 {
        return Rational::zero();
    }
    exps.iter().fold(factorial(k - 3), |acc, &d| acc / factorial(d as usize))
}

/// Pushforward of a ψ-decorated rational-tails stratum class on
/// `M^{rt[n]}_{g,n+m}` to the open space `M_{g,n}`.
pub fn push_rt(g: u32, n: usize, dg: &DecoratedGraph) -> Result<TautClass> {
    let gr = &dg.graph;
    if !crate::graphs::is_rational_tails(gr, n) {
        return Err(Error::InvalidInput("not a rational-tails stratum".into()));
    }
    let core = (0..gr.num_vertices()).find(|&v| gr.genera()[v] == g).ok_or_else(|| Error::InvalidInput("no core".into()))?;
    let mut coeff = Rational::one();
    let mut marked: Vec<Option<u32>> = vec![None; n];
    let mut forgotten = vec![];
    for t in tails(gr, core) {
        for &v in &t.vertices {
            let exps: Vec<u32> = gr.half_edges_at(v).iter().map(|&h| dg.psi[h]).collect();
            coeff *= genus0_integral(&exps);
        }
        match t.legs.iter().find(|&&l| l < n) {
            Some(&l) => marked[l] = Some(dg.psi[t.attach]),
            None => forgotten.push(dg.psi[t.attach]),
        }
    }
    let mut out = TautClass::zero(g, n);
    if coeff.is_zero() {
        return Ok(out);
    }
    for l in 0..gr.num_legs() {
        if gr.legs()[l] == core {
            if l < n {
                marked[l] = Some(dg.psi[l]);
            } else {
                forgotten.push(dg.psi[l]);
            }
        }
    }
    let mut psi: Vec<u32> = marked
        .into_iter()
        .map(|x| x.ok_or_else(|| Error::InvalidInput("marking lost in pushforward".into())))
        .collect::<Result<_>>()?;
    psi.extend(forgotten);
    for ((p, singles), c) in push_forget(g, psi, vec![], n) {
        for (k, c2) in singles_to_multi(&singles) {
            out.add_term(Monomial { psi: p.clone(), kappa: k }, c.clone() * c2 * &coeff)?;
        }
    }
    Ok(out)
}

/// Pullback along the map `M_{g,n+1} -> M_{g,n}` forgetting a marking that is
/// inserted at position `at`. On the open space `π^*ψ_i = ψ_i` and
/// `π^*κ_a = κ_a - ψ_at^a`.
pub fn pullback_forget(x: &TautClass, at: usize) -> Result<TautClass> {
    if at > x.n {
        return Err(Error::InvalidInput(format!("insertion point {at} beyond {} markings", x.n)));
    }
    let mut out = TautClass::zero(x.g, x.n + 1);
    for (m, c) in &x.terms {
        let mut psi = m.psi.clone();
        psi.insert(at, 0);
        for (singles, w) in multi_to_singles(&m.kappa) {
            let k = singles.len();
            for mask in 0u32..(1 << k) {
                let mut p = psi.clone();
                let mut keep = vec![];
                for (j, &a) in singles.iter().enumerate() {
                    if mask >> j & 1 == 1 {
                        p[at] += a;
                    } else {
                        keep.push(a);
                    }
                }
                let sign = if mask.count_ones() % 2 == 0 { Rational::one() } else { -Rational::one() };
                for (kk, c2) in singles_to_multi(&keep) {
                    out.add_term(Monomial { psi: p.clone(), kappa: kk }, c.clone() * &w * &sign * c2)?;
                }
            }
        }
    }
    Ok(out)
}

/// Multi-index κ class computed directly from its definition as a pushforward.
pub fn kappa_by_pushforward(g: u32, n: usize, kappa: &[u32]) -> TautClass {
    let mut psi = vec![0; n];
    psi.extend(kappa.iter().map(|e| e + 1));
    let mut out = TautClass::zero(g, n);
    for ((p, singles), c) in push_forget(g, psi, vec![], n) {
        for (k, c2) in singles_to_multi(&singles) {
            out.add_term(Monomial { psi: p.clone(), kappa: k }, c.clone() * c2).expect("ambient");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn kappa(g: u32, n: usize, k: &[u32]) -> TautClass {
        TautClass::from_monomial(g, n, Monomial::new(vec![0; n], k.to_vec()).unwrap(), q(1)).unwrap()
    }

    #[test]
    fn kappa_product_in_multi_basis() {
        // κ_a κ_b = κ_{a,b} - κ_{a+b}
        let p = kappa(3, 1, &[1]).multiply(&kappa(3, 1, &[2])).unwrap();
        let mut expect = kappa(3, 1, &[2, 1]);
        expect = expect.sub(&kappa(3, 1, &[3])).unwrap();
        assert_eq!(p, expect);
    }

    #[test]
    fn conversions_round_trip() {
        for k in [vec![1], vec![2, 1], vec![1, 1], vec![3, 2, 1], vec![2, 2, 1, 1]] {
            let mut acc: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
            for (s, c) in multi_to_singles(&k) {
                for (m, c2) in singles_to_multi(&s) {
                    *acc.entry(m).or_insert_with(Rational::zero) += c.clone() * c2;
                }
            }
            acc.retain(|_, c| !c.is_zero());
            assert_eq!(acc, [(k.clone(), q(1))].into_iter().collect());
        }
    }

    #[test]
    fn pushforward_defines_multi_kappa() {
        for k in [vec![1], vec![2, 1], vec![1, 1], vec![2, 1, 1], vec![3, 2, 1]] {
            assert_eq!(kappa_by_pushforward(4, 2, &k), kappa(4, 2, &k), "{k:?}");
        }
    }

    #[test]
    fn push_open_rules() {
        use crate::graphs::{DecoratedGraph, StableGraph};
        let (g, n) = (3, 2);
        // π_*(ψ_{n+1}^2) = κ_1
        let smooth = StableGraph::smooth(g, n + 1);
        let d = DecoratedGraph::new(smooth.clone(), vec![0, 0, 2]).unwrap();
        assert_eq!(push_rt(g, n, &d).unwrap(), kappa(g, n, &[1]));
        // π_*(ψ_1^2 ψ_{n+1}) = (2g-2+n) ψ_1^2
        let d = DecoratedGraph::new(smooth, vec![2, 0, 1]).unwrap();
        let expect = TautClass::from_monomial(g, n, Monomial::psi_only(vec![2, 0]), q(6)).unwrap();
        assert_eq!(push_rt(g, n, &d).unwrap(), expect);
        // π_*(D_{1,n+1} ψ_1^d) = ψ_1^d with ψ_1 on the core side
        let div = StableGraph::new(vec![g, 0], vec![1, 0, 1], vec![(0, 1)]).unwrap();
        let n_leg = div.num_legs();
        let mut psi = vec![0; div.num_half_edges()];
        let core_end = (n_leg..div.num_half_edges()).find(|&h| div.vertex_of(h) == 0).unwrap();
        psi[core_end] = 2;
        let d = DecoratedGraph::new(div, psi).unwrap();
        let expect = TautClass::from_monomial(g, n, Monomial::psi_only(vec![2, 0]), q(1)).unwrap();
        assert_eq!(push_rt(g, n, &d).unwrap(), expect);
    }

    #[test]
    fn basic_products() {
        let one = TautClass::from_monomial(3, 2, Monomial::one(2), q(1)).unwrap();
        let x = kappa(3, 2, &[1]).add(&TautClass::from_monomial(3, 2, Monomial::psi_only(vec![1, 0]), q(2)).unwrap()).unwrap();
        assert_eq!(one.multiply(&x).unwrap(), x);
        let p1 = TautClass::from_monomial(3, 2, Monomial::psi_only(vec![1, 0]), q(1)).unwrap();
        let p1sq = TautClass::from_monomial(3, 2, Monomial::psi_only(vec![2, 0]), q(1)).unwrap();
        assert_eq!(p1.multiply(&p1).unwrap(), p1sq);
        assert!(matches!(p1.multiply(&kappa(2, 2, &[1])), Err(Error::AmbientMismatch(_))));
    }

    #[test]
    fn pullback_then_dilaton() {
        let (g, n) = (3u32, 1usize);
        let mut x = kappa(g, n, &[2, 1]);
        x.add_term(Monomial::new(vec![1], vec![2]).unwrap(), q(3)).unwrap();
        let up = pullback_forget(&x, n).unwrap();
        // π_*(π^*x · ψ_{n+1}) = (2g-2+n) x
        let mut down = TautClass::zero(g, n);
        for (m, c) in up.terms() {
            let mut psi = m.psi.clone();
            psi[n] += 1;
            for (s, w) in multi_to_singles(&m.kappa) {
                for ((p, singles), c2) in push_forget(g, psi.clone(), s, n) {
                    for (k, c3) in singles_to_multi(&singles) {
                        down.add_term(Monomial { psi: p.clone(), kappa: k }, c.clone() * &w * &c2 * c3).unwrap();
                    }
                }
            }
        }
        assert_eq!(down, x.scale(&q(2 * g as i64 - 2 + n as i64)));
        let k1 = pullback_forget(&kappa(g, 1, &[1]), 0).unwrap();
        let mut expect = kappa(g, 2, &[1]);
        expect.add_term(Monomial::psi_only(vec![1, 0]), q(-1)).unwrap();
        assert_eq!(k1, expect);
    }

    #[test]
    fn genus_zero_integrals() {
        assert_eq!(genus0_integral(&[0, 0, 0]), q(1));
        assert_eq!(genus0_integral(&[1, 0, 0, 0]), q(1));
        assert_eq!(genus0_integral(&[1, 1, 0, 0, 0]), q(2));
        assert_eq!(genus0_integral(&[2, 0, 0, 0, 0]), q(1));
        assert_eq!(genus0_integral(&[1, 0, 0]), q(0));
    }
}
