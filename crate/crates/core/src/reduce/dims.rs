//! Dimension bound for `R^d(M_{g,n})`, `d <= g - 2`, and its constructive check.

use std::collections::BTreeSet;

use super::{kappa_reduce_lowdeg, monomial_class, monomials_of_degree, Certificate};
use crate::error::Result;
use crate::taut::Monomial;

/// Partitions of `d` as descending lists of positive parts.
pub fn partitions(d: u32) -> Vec<Vec<u32>> {
    fn rec(left: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=left.min(max)).rev() {
            cur.push(p);
            rec(left - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(d, d, &mut vec![], &mut out);
    out
}

/// `p(n, k)`: partitions of `n` with at most `k` parts; zero for negative `k`.
pub fn partitions_bounded(n: u32, k: i64) -> u128 {
    if k < 0 {
        return 0;
    }
    // p(n, k) = p(n, k-1) + p(n-k, k)
    let k = k as usize;
    let n = n as usize;
    let mut t = vec![vec![0u128; k + 1]; n + 1];
    for row in t.iter_mut().take(1) {
        row.iter_mut().for_each(|x| *x = 1);
    }
    for i in 1..=n {
        for j in 1..=k {
            t[i][j] = t[i][j - 1] + if i >= j { t[i - j][j] } else { 0 };
        }
    }
    t[n][k]
}

fn binom(n: i64, k: i64) -> u128 {
    if k == 0 {
        return 1;
    }
    if n < k || n < 0 {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `Σ_{k=0}^d C(n+k-1, k) p(d-k, g-1-d)`, reading `C(k-1, k)` as `δ_{k,0}`.
pub fn dim_bound(d: u32, g: u32, n: usize) -> u128 {
    (0..=d)
        .map(|k| binom(n as i64 + k as i64 - 1, k as i64) * partitions_bounded(d - k, g as i64 - 1 - d as i64))
        .sum()
}

/// Outcome of reducing every degree-`d` monomial with the low-degree κ step.
#[derive(Clone, Debug)]
pub struct SpanReport {
    pub g: u32,
    pub n: usize,
    pub d: u32,
    pub bound: u128,
    /// Monomials left in some residual.
    pub support: BTreeSet<Monomial>,
    pub certificates: Vec<Certificate>,
    pub all_verified: bool,
}

impl SpanReport {
    /// Every residual lies in the counted spanning set and fits the bound.
    pub fn confirms(&self) -> bool {
        let max_idx = self.g as i64 - 1 - self.d as i64;
        self.all_verified
            && self.support.iter().all(|m| (m.kappa.len() as i64) <= max_idx)
            && self.support.len() as u128 <= self.bound
    }
}

/// Reduces all ψ-κ monomials of degree `d` on `M_{g,n}` with enough κ indices.
pub fn spanning_check(g: u32, n: usize, d: u32) -> Result<SpanReport> {
    let mut support = BTreeSet::new();
    let mut certificates = vec![];
    let mut all_verified = true;
    let need = g as i64 - d as i64;
    for m in monomials_of_degree(n, d) {
        let cert = if m.kappa.len() as i64 >= need {
            kappa_reduce_lowdeg(g, n, d, &m)?
        } else {
            Certificate::trivial(monomial_class(g, n, &m)?)
        };
        all_verified &= cert.verify()?;
        support.extend(cert.residual.terms().map(|(k, _)| k.clone()));
        certificates.push(cert);
    }
    Ok(SpanReport { g, n, d, bound: dim_bound(d, g, n), support, certificates, all_verified })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(partitions_bounded(4, 2), 3);
        assert_eq!(partitions_bounded(0, 0), 1);
        assert_eq!(partitions_bounded(1, 0), 0);
        assert_eq!(partitions_bounded(5, 5), 7);
        assert_eq!(partitions_bounded(3, -1), 0);
    }

    #[test]
    fn bound_examples() {
        assert_eq!(dim_bound(1, 3, 1), 2);
        assert_eq!(dim_bound(1, 2, 1), 1);
        for g in 2..6 {
            for n in 0..4 {
                assert_eq!(dim_bound(0, g, n), 1);
            }
        }
        // n = 0: only k = 0 survives
        assert_eq!(dim_bound(2, 5, 0), partitions_bounded(2, 2));
    }
}
