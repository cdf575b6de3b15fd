//! ψ intersection numbers on `M̄_{g,n}`: a DVV oracle and the reduction
//! through `r = 1/2` relations.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::relation::{omega_bar_cached, RelationSpec};
use crate::scalar::{rational_to_string, Scalar};
use crate::taut::Monomial;
use crate::Rational;

fn key(g: u32, exps: &[u32]) -> (u32, Vec<u32>) {
    let mut e = exps.to_vec();
    e.sort_unstable_by(|a, b| b.cmp(a));
    (g, e)
}

fn check_key(g: u32, exps: &[u32]) -> Result<()> {
    let n = exps.len();
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::Unstable { g: g as usize, n });
    }
    let dim = 3 * g as i64 - 3 + n as i64;
    if exps.iter().map(|&e| e as i64).sum::<i64>() != dim {
        return Err(Error::InvalidInput(format!("exponents {exps:?} do not have degree {dim}")));
    }
    Ok(())
}

fn top_degree(g: u32, exps: &[u32]) -> bool {
    let n = exps.len() as i64;
    2 * g as i64 - 2 + n > 0 && exps.iter().map(|&e| e as i64).sum::<i64>() == 3 * g as i64 - 3 + n
}

fn double_factorial(k: i64) -> Rational {
    let mut acc = Rational::one();
    let mut x = k;
    while x > 1 {
        acc *= Rational::from_int(x);
        x -= 2;
    }
    acc
}

type Memo = Mutex<HashMap<(u32, Vec<u32>), Rational>>;

fn dvv_memo() -> &'static Memo {
    static M: OnceLock<Memo> = OnceLock::new();
    M.get_or_init(Default::default)
}

/// `<τ_{d_1} ... τ_{d_n}>_g` by the string equation and the DVV recursion.
pub fn psi_integral_dvv(g: u32, exps: &[u32]) -> Result<Rational> {
    check_key(g, exps)?;
    Ok(dvv(g, exps))
}

fn dvv(g: u32, exps: &[u32]) -> Rational {
    if !top_degree(g, exps) {
        return Rational::zero();
    }
    let k = key(g, exps);
    if let Some(v) = dvv_memo().lock().expect("memo").get(&k) {
        return v.clone();
    }
    let v = dvv_raw(g, &k.1);
    dvv_memo().lock().expect("memo").insert(k, v.clone());
    v
}

fn dvv_raw(g: u32, e: &[u32]) -> Rational {
    let n = e.len();
    if g == 0 && n == 3 {
        return Rational::one();
    }
    if g == 1 && n == 1 {
        return Rational::from_frac(1, 24);
    }
    // `e` is sorted descending, so a zero sits at the end.
    if e[n - 1] == 0 {
        let rest = &e[..n - 1];
        let mut s = Rational::zero();
        for i in 0..rest.len() {
            if rest[i] > 0 {
                let mut f = rest.to_vec();
                f[i] -= 1;
                s += dvv(g, &f);
            }
        }
        return s;
    }
    let kk = e[0] as i64 - 1;
    let rest = &e[1..];
    let mut s = Rational::zero();
    for j in 0..rest.len() {
        let dj = rest[j] as i64;
        let mut f = rest.to_vec();
        f[j] = (kk + dj) as u32;
        s += double_factorial(2 * kk + 2 * dj + 1) / double_factorial(2 * dj - 1) * dvv(g, &f);
    }
    let half = Rational::from_frac(1, 2);
    for a in 0..kk {
        let b = kk - 1 - a;
        let w = double_factorial(2 * a + 1) * double_factorial(2 * b + 1) * &half;
        if g >= 1 {
            let mut f = rest.to_vec();
            f.push(a as u32);
            f.push(b as u32);
            s += w.clone() * dvv(g - 1, &f);
        }
        for mask in 0u64..(1 << rest.len()) {
            let (i1, i2): (Vec<u32>, Vec<u32>) = {
                let mut x = vec![];
                let mut y = vec![];
                for (t, &d) in rest.iter().enumerate() {
                    if mask >> t & 1 == 1 { x.push(d) } else { y.push(d) }
                }
                (x, y)
            };
            for g1 in 0..=g {
                let mut f1 = i1.clone();
                f1.push(a as u32);
                let mut f2 = i2.clone();
                f2.push(b as u32);
                let v1 = dvv(g1, &f1);
                if v1.is_zero() {
                    continue;
                }
                s += w.clone() * v1 * dvv(g - g1, &f2);
            }
        }
    }
    s / double_factorial(2 * kk + 3)
}

fn ppz_memo() -> &'static Memo {
    static M: OnceLock<Memo> = OnceLock::new();
    M.get_or_init(Default::default)
}

/// `∫_{M̄_{g,n}} ∏ ψ_i^{d_i}` through the `r = 1/2` relations.
pub fn psi_integral_ppz(g: u32, exps: &[u32]) -> Result<Rational> {
    check_key(g, exps)?;
    ppz(g, exps)
}

fn ppz(g: u32, exps: &[u32]) -> Result<Rational> {
    if !top_degree(g, exps) {
        return Ok(Rational::zero());
    }
    let k = key(g, exps);
    if let Some(v) = ppz_memo().lock().expect("memo").get(&k) {
        return Ok(v.clone());
    }
    let v = if g == 0 { ppz_genus0(&k.1)? } else { ppz_raw(g, &k.1)? };
    ppz_memo().lock().expect("memo").insert(k, v.clone());
    Ok(v)
}

/// Genus 0: `ψ_i = Σ D_I` over `i ∈ I` with two fixed other markings outside `I`.
fn ppz_genus0(e: &[u32]) -> Result<Rational> {
    let n = e.len();
    if n == 3 {
        return Ok(Rational::one());
    }
    let i = (0..n).find(|&t| e[t] > 0).expect("positive exponent when n > 3");
    let others: Vec<usize> = (0..n).filter(|&t| t != i).collect();
    let (j, k) = (others[0], others[1]);
    let free: Vec<usize> = others[2..].to_vec();
    let mut total = Rational::zero();
    for mask in 0u64..(1 << free.len()) {
        let inside: Vec<usize> = free.iter().enumerate().filter(|(t, _)| mask >> t & 1 == 1).map(|(_, &x)| x).collect();
        if inside.is_empty() {
            continue;
        }
        let mut left: Vec<u32> = vec![e[i] - 1];
        left.extend(inside.iter().map(|&x| e[x]));
        left.push(0);
        let mut right: Vec<u32> = (0..n).filter(|t| *t != i && !inside.contains(t)).map(|t| e[t]).collect();
        right.push(0);
        let _ = (j, k);
        let l = ppz(0, &left)?;
        if l.is_zero() {
            continue;
        }
        total += l * ppz(0, &right)?;
    }
    Ok(total)
}

/// Splits a degree-`g` sub-monomial off `e`, taking as much as possible of
/// the largest exponent `p` (lowest index on ties) and then greedily.
fn split(g: u32, e: &[u32]) -> (usize, Vec<u32>) {
    let max = *e.iter().max().expect("n >= 1");
    let p = e.iter().position(|&x| x == max).expect("max exists");
    let mut d = vec![0; e.len()];
    d[p] = e[p].min(g);
    let mut left = g - d[p];
    for i in 0..e.len() {
        if i != p && left > 0 {
            d[i] = e[i].min(left);
            left -= d[i];
        }
    }
    (p, d)
}

fn ppz_raw(g: u32, e: &[u32]) -> Result<Rational> {
    let n = e.len();
    let (p, d) = split(g, e);
    let mut fields: Vec<Rational> = d.iter().map(|&x| Rational::from_int(x as i64)).collect();
    let others: u32 = (0..n).filter(|&i| i != p).map(|i| d[i]).sum();
    fields[p] = Rational::from_int(2 * g as i64 - 1 - others as i64);
    let rel = omega_bar_cached(&RelationSpec::open(g, g, fields))?;
    let rest: Vec<u32> = e.iter().zip(&d).map(|(a, b)| a - b).collect();
    let target = Monomial::psi_only(d.clone());
    let mut lead = Rational::zero();
    let mut acc = Rational::zero();
    for (dg, c) in &rel.terms {
        let gr = &dg.graph;
        if gr.num_edges() == 0 {
            if dg.psi == target.psi {
                lead = c.clone();
                continue;
            }
            let mono: Vec<u32> = dg.psi.iter().zip(&rest).map(|(a, b)| a + b).collect();
            acc += c.clone() * ppz(g, &mono)?;
            continue;
        }
        let mut prod = c.clone();
        for v in 0..gr.num_vertices() {
            let exps: Vec<u32> = gr
                .half_edges_at(v)
                .iter()
                .map(|&h| dg.psi[h] + if h < n { rest[h] } else { 0 })
                .collect();
            let val = ppz(gr.genera()[v], &exps)?;
            prod *= val;
            if prod.is_zero() {
                break;
            }
        }
        acc += prod;
    }
    if lead.is_zero() {
        return Err(Error::Reduction(format!("relation misses the monomial {target} on M_{{{g},{n}}}")));
    }
    Ok(-acc / lead)
}

/// One row of [`compare_all`].
#[derive(Clone, Debug)]
pub struct CompareRow {
    pub g: u32,
    pub exps: Vec<u32>,
    pub ppz: Rational,
    pub dvv: Rational,
}

impl CompareRow {
    pub fn equal(&self) -> bool {
        self.ppz == self.dvv
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "g": self.g,
            "exps": self.exps,
            "ppz": rational_to_string(&self.ppz),
            "dvv": rational_to_string(&self.dvv),
            "equal": self.equal(),
        })
    }
}

/// Sorted exponent vectors of top degree on `M̄_{g,n}`, `n >= 1`.
pub fn keys(g: u32, n: usize) -> Vec<Vec<u32>> {
    let dim = 3 * g as i64 - 3 + n as i64;
    if n == 0 || dim < 0 || 2 * g as i64 - 2 + n as i64 <= 0 {
        return vec![];
    }
    fn rec(left: u32, max: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for x in (0..=max.min(left)).rev() {
            cur.push(x);
            rec(left - x, x, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(dim as u32, dim as u32, n, &mut vec![], &mut out);
    out
}

/// Both methods on every key with `3g - 3 + n <= max_dim`, optionally capping the genus.
pub fn compare_all(max_dim: u32, max_genus: Option<u32>) -> Result<Vec<CompareRow>> {
    let mut rows = vec![];
    let gmax = (max_dim + 3) / 3;
    for g in 0..=max_genus.map_or(gmax, |m| m.min(gmax)) {
        for n in 1..=(max_dim as i64 + 3 - 3 * g as i64).max(0) as usize {
            for exps in keys(g, n) {
                rows.push(CompareRow {
                    g,
                    ppz: psi_integral_ppz(g, &exps)?,
                    dvv: psi_integral_dvv(g, &exps)?,
                    exps,
                });
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_frac(n, d)
    }

    #[test]
    fn dvv_anchors() {
        assert_eq!(psi_integral_dvv(0, &[0, 0, 0]).unwrap(), q(1, 1));
        assert_eq!(psi_integral_dvv(0, &[1, 0, 0, 0]).unwrap(), q(1, 1));
        assert_eq!(psi_integral_dvv(1, &[1]).unwrap(), q(1, 24));
        assert_eq!(psi_integral_dvv(2, &[4]).unwrap(), q(1, 1152));
        assert_eq!(psi_integral_dvv(1, &[1, 1]).unwrap(), q(1, 24));
        assert_eq!(psi_integral_dvv(2, &[3, 2]).unwrap(), q(29, 5760));
        assert_eq!(psi_integral_dvv(3, &[7]).unwrap(), q(1, 82944));
        assert_eq!(psi_integral_dvv(0, &[2, 0, 0, 0, 0]).unwrap(), psi_integral_dvv(0, &[0, 0, 2, 0, 0]).unwrap());
        assert!(psi_integral_dvv(1, &[0]).is_err());
    }

    #[test]
    fn ppz_small() {
        assert_eq!(psi_integral_ppz(0, &[0, 0, 0]).unwrap(), q(1, 1));
        assert_eq!(psi_integral_ppz(0, &[1, 1, 0, 0, 0]).unwrap(), q(2, 1));
        assert_eq!(psi_integral_ppz(1, &[1]).unwrap(), q(1, 24));
    }

    #[test]
    fn key_listing() {
        assert_eq!(keys(0, 3), vec![vec![0, 0, 0]]);
        assert_eq!(keys(1, 2), vec![vec![2, 0], vec![1, 1]]);
        assert!(keys(1, 0).is_empty());
    }
}
