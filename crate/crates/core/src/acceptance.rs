//! End-to-end checks, one per numbered acceptance criterion. Shared by the
//! `verify` subcommand and the `acceptance` test target.

use std::time::Instant;

use num_traits::Zero;

use crate::intersect::{compare_all, keys, psi_integral_dvv, psi_integral_ppz};
use crate::qp::{p_sym, q_norm, q_sym};
use crate::reduce::{
    c_coeffs, c_coeffs_general, c_coeffs_graph_sum, dim_bound, firstgraph_relation, monomials_of_degree,
    nondegeneracy_check, partitions_bounded, s_poly, s_shifted_coeffs, seven_term_residue, socle_reduce_any,
    spanning_check, vanish_reduce,
};
use crate::relation::bar_stats;
use crate::scalar::Scalar;
use crate::taut::{Monomial, TautClass};
use crate::{Rational, Result};

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "{} criterion {} ({}): {} [{:.2}s]",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "id": self.id,
            "name": self.name,
            "pass": self.pass,
            "detail": self.detail,
            "seconds": self.seconds,
        })
    }
}

fn r(n: i64, d: i64) -> Rational {
    Rational::from_frac(n, d)
}

fn timed(id: u32, name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> Outcome {
    let t = Instant::now();
    let (pass, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    Outcome { id, name, pass, detail, seconds: t.elapsed().as_secs_f64() }
}

pub fn q_and_p() -> Outcome {
    timed(1, "Q/P consistency", || {
        for m in 0..=8 {
            if p_sym(m)?.eval_r(&r(1, 2)) != q_sym::<Rational>(m) {
                return Ok((false, format!("P_{m}(1/2, a) != Q_{m}(a)")));
            }
        }
        let table = [
            (1, r(3, 2), r(3, 1)),
            (1, r(1, 1), r(3, 2)),
            (1, r(1, 2), r(1, 2)),
            (1, r(0, 1), r(0, 1)),
            (2, r(5, 2), r(45, 4)),
            (2, r(2, 1), r(15, 4)),
            (2, r(3, 2), r(3, 4)),
            (3, r(5, 2), r(15, 8)),
            (3, r(2, 1), r(0, 1)),
        ];
        for (m, a, want) in &table {
            let got = q_norm(*m, a);
            if &got != want {
                return Ok((false, format!("Q_{m}({a}) = {got}, expected {want}")));
            }
        }
        Ok((true, format!("m <= 8 and {} tabulated values", table.len())))
    })
}

pub fn seven_terms() -> Outcome {
    timed(2, "seven-term identity", || {
        let res = seven_term_residue();
        Ok((res.is_empty(), format!("{} surviving monomials", res.len())))
    })
}

pub fn oracle_equivalence() -> Outcome {
    timed(3, "ppz vs dvv", || {
        let mut rows = compare_all(5, Some(2))?;
        let mut extra = 0;
        for exps in keys(3, 1) {
            let (ppz, dvv) = (psi_integral_ppz(3, &exps)?, psi_integral_dvv(3, &exps)?);
            rows.push(crate::intersect::CompareRow { g: 3, exps, ppz, dvv });
            extra += 1;
        }
        let bad: Vec<_> = rows.iter().filter(|x| !x.equal()).collect();
        let anchors = [(0, vec![0, 0, 0], r(1, 1)), (1, vec![1], r(1, 24)), (2, vec![4], r(1, 1152))];
        for (g, e, want) in &anchors {
            if &psi_integral_dvv(*g, e)? != want {
                return Ok((false, format!("anchor <tau {e:?}>_{g} is off")));
            }
        }
        Ok((bad.is_empty(), format!("{} keys ({extra} at (3,1)), {} mismatches, 3 anchors", rows.len(), bad.len())))
    })
}

pub fn vanishing() -> Outcome {
    timed(4, "vanishing in degrees g, g+1", || {
        let mut count = 0;
        for g in 1..=3u32 {
            for n in 0..=3usize {
                for d in [g, g + 1] {
                    for mu in monomials_of_degree(n, d) {
                        let c = vanish_reduce(g, n, &mu)?;
                        if !c.residual.is_zero() || !c.verify()? {
                            return Ok((false, format!("({g},{n}) {mu} not certified")));
                        }
                        count += 1;
                    }
                }
            }
        }
        Ok((true, format!("{count} monomials with zero residual")))
    })
}

pub fn socle() -> Outcome {
    timed(5, "socle bound", || {
        let mut count = 0;
        let cases = [(2u32, 2usize), (3, 2), (4, 2), (4, 3), (2, 1), (3, 1), (4, 1), (5, 1), (6, 1)];
        for (g, n) in cases {
            for mu in monomials_of_degree(n, g - 1) {
                let res = socle_reduce_any(g, n, &mu)?;
                let inside = res.certificate.residual.terms().all(|(m, _)| res.basis.contains(m));
                if !inside || !res.certificate.verify()? {
                    return Ok((false, format!("({g},{n}) {mu} left the basis")));
                }
                count += 1;
            }
        }
        Ok((true, format!("{count} monomials over {} spaces", cases.len())))
    })
}

pub fn nondegeneracy() -> Outcome {
    timed(6, "non-degeneracy", || {
        let mut pairs = 0;
        for g in 4..=50u32 {
            for n in 3..g as usize {
                let (ok, s) = nondegeneracy_check(g, n)?;
                if !ok || s.is_zero() {
                    return Ok((false, format!("vanishes at ({g},{n})")));
                }
                pairs += 1;
            }
        }
        if s_poly(4, 3) != r(-201, 8) {
            return Ok((false, "S(4,3) != -201/8".into()));
        }
        let mut got: Vec<Rational> = s_shifted_coeffs().into_values().collect();
        let mut want: Vec<Rational> =
            [(-201, 8), (-173, 8), (-21, 2), (-6, 1), (-39, 8), (-9, 8), (-1, 2), (-3, 4)].iter().map(|&(a, b)| r(a, b)).collect();
        got.sort();
        want.sort();
        let negative = got.iter().all(|c| c < &Rational::zero());
        Ok((got == want && negative, format!("{pairs} pairs, S(4,3) = -201/8, shifted coefficients match")))
    })
}

pub fn cross_validation() -> Outcome {
    timed(7, "relation cross-validation", || {
        // κ-part of the one-point pushforward against the closed product formula
        for (g, n, a) in [(3u32, 1usize, vec![2i64, 3]), (3, 2, vec![1, 1, 3]), (4, 2, vec![3, 1, 3])] {
            let rel = firstgraph_relation(g, n, &a)?;
            let mut expect = TautClass::zero(g, n);
            for e in 1..g {
                for d in crate::graphs::compositions(g - 1 - e, n) {
                    let c = d.iter().zip(&a).fold(crate::qp::q_full(e as usize + 1, &r(a[n], 1)), |acc, (&di, &ai)| {
                        acc * crate::qp::q_full(di as usize, &r(ai, 1))
                    });
                    expect.add_term(Monomial::new(d, vec![e])?, c)?;
                }
            }
            for (m, c) in expect.terms() {
                if &rel.coeff(m) != c {
                    return Ok((false, format!("({g},{n},{a:?}) coefficient of {m}")));
                }
            }
        }
        for (g, n) in [(4u32, 3usize), (5, 3), (5, 4)] {
            let a = c_coeffs(g, n)?;
            if a != c_coeffs_general(g, n)? || a != c_coeffs_graph_sum(g, n)? {
                return Ok((false, format!("c coefficients disagree at ({g},{n})")));
            }
        }
        Ok((true, "one-point κ terms and three-way c agreement at (4,3),(5,3),(5,4)".into()))
    })
}

/// Reads the global counters, so it should run after criteria 3 and 4.
pub fn interpolation_stability() -> Outcome {
    timed(8, "interpolation stability", || {
        let (runs, checked) = bar_stats();
        Ok((runs > 0, format!("{runs} compactified relations, {checked} coefficients stable under doubled sampling")))
    })
}

pub fn dimension_bounds() -> Outcome {
    timed(9, "dimension bounds", || {
        // direct formula against enumerated partitions
        let parts = |m: u32, k: i64| crate::reduce::partitions(m).iter().filter(|p| (p.len() as i64) <= k).count() as u128;
        for g in 2..=8u32 {
            for d in 0..=g - 2 {
                for n in 0..=4usize {
                    let direct: u128 = (0..=d)
                        .map(|k| {
                            let b = if n == 0 { u128::from(k == 0) } else { binom(n + k as usize - 1, k as usize) };
                            b * parts(d - k, g as i64 - 1 - d as i64)
                        })
                        .sum();
                    if dim_bound(d, g, n) != direct || partitions_bounded(d, g as i64 - 1 - d as i64) != parts(d, g as i64 - 1 - d as i64) {
                        return Ok((false, format!("formula mismatch at (d,g,n)=({d},{g},{n})")));
                    }
                }
            }
        }
        if dim_bound(1, 3, 1) != 2 || dim_bound(1, 2, 1) != 1 {
            return Ok((false, "anchor values".into()));
        }
        let mut reports = 0;
        for (g, d) in [(3u32, 1u32), (4, 2)] {
            for n in 0..=2usize {
                let rep = spanning_check(g, n, d)?;
                if !rep.confirms() {
                    return Ok((false, format!("spanning set not confirmed at (g,d,n)=({g},{d},{n})")));
                }
                reports += 1;
            }
        }
        Ok((true, format!("formula on d <= g-2 <= 6, n <= 4; {reports} spanning checks")))
    })
}

fn binom(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// All criteria in order.
pub fn run_all() -> Vec<Outcome> {
    vec![
        q_and_p(),
        seven_terms(),
        oracle_equivalence(),
        vanishing(),
        socle(),
        nondegeneracy(),
        cross_validation(),
        interpolation_stability(),
        dimension_bounds(),
    ]
}
