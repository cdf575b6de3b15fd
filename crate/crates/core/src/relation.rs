//! The `r = 1/2` relations `Ω^D_{g,n}(a_1, ..., a_n)`.
//!
//! Integer-`r` graph sums use the degree-0 theory with vertex weight
//! `(r-1)^h δ(Σ b ≡ h - 1 mod r - 1)`, leg weights `P_m(r, a)` sending the
//! field `a` to `a - m`, and the edge series
//! `(η^{-1} - R^{-1}(ψ') η^{-1} R^{-1}(ψ'')^t) / (ψ' + ψ'')`. Global factors
//! that do not depend on the graph are dropped; relations are projective.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graphs::{decorations, enumerate_stable_capped, rt_graphs, tails, DecoratedGraph, StableGraph};
use crate::poly::interpolate_at;
use crate::qp::{p_sym, q_full, PTable};
use crate::scalar::{as_integer, rational_to_string, Scalar};
use crate::taut::{push_rt, Monomial, TautClass};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationSpec {
    pub g: u32,
    /// Number of original markings; any further fields belong to extra points.
    pub n: usize,
    pub degree: u32,
    pub fields: Vec<Rational>,
    pub x: u8,
}

impl RelationSpec {
    pub fn new(g: u32, n: usize, degree: u32, fields: Vec<Rational>, x: u8) -> Self {
        RelationSpec { g, n, degree, fields, x }
    }

    /// Spec on `M_{g,n}` with all fields attached to markings.
    pub fn open(g: u32, degree: u32, fields: Vec<Rational>) -> Self {
        let n = fields.len();
        RelationSpec { g, n, degree, fields, x: 0 }
    }

    pub fn extra(&self) -> usize {
        self.fields.len() - self.n
    }

    /// Checks the admissibility constraints and returns the φ-exponent `d`.
    pub fn validate(&self) -> Result<i64> {
        let (g, dg) = (self.g as i64, self.degree as i64);
        if self.fields.len() < self.n {
            return Err(Error::InvalidSpec("fewer fields than markings".into()));
        }
        let total = self.fields.len();
        if 2 * g - 2 + total as i64 <= 0 {
            return Err(Error::Unstable { g: self.g as usize, n: total });
        }
        let sum: Rational = self.fields.iter().cloned().sum();
        match self.x {
            0 => {
                if let Some(a) = self.fields.iter().find(|a| as_integer(a).map_or(true, |v| v < 0)) {
                    return Err(Error::InvalidSpec(format!("x=0 needs non-negative integer fields, got {a}")));
                }
                if dg < g {
                    return Err(Error::InvalidSpec(format!("degree {dg} is below the genus {g}")));
                }
                if sum != Rational::from_int(g - 1 + dg) {
                    return Err(Error::InvalidSpec(format!("field sum {sum} differs from g-1+D = {}", g - 1 + dg)));
                }
                Ok(g - 1 - dg)
            }
            1 => {
                if dg != g + 1 {
                    return Err(Error::InvalidSpec(format!("x=1 needs D = g+1, got {dg}")));
                }
                let m = self.extra();
                if m != 2
                    || self.fields[self.n] != Rational::from_frac(3, 2)
                    || self.fields[self.n + 1] != Rational::from_frac(-1, 2)
                {
                    return Err(Error::InvalidSpec("x=1 needs the two extra fields 3/2, -1/2".into()));
                }
                let first: Rational = self.fields[..self.n].iter().cloned().sum();
                if first != Rational::from_frac(4 * g - 3, 2) {
                    return Err(Error::InvalidSpec(format!("x=1 fields sum to {first}, expected 2g-3/2")));
                }
                if self.n < 2 {
                    return Err(Error::InvalidSpec("x=1 needs at least two markings".into()));
                }
                Ok(-1)
            }
            x => Err(Error::InvalidSpec(format!("regime x={x} is not 0 or 1"))),
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "g": self.g,
            "n": self.n,
            "D": self.degree,
            "fields": self.fields.iter().map(rational_to_string).collect::<Vec<_>>(),
            "x": self.x,
        })
    }
}

impl fmt::Display for RelationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fs: Vec<String> = self.fields.iter().map(rational_to_string).collect();
        write!(f, "Omega^{}_{{{},{}}}({}; x={})", self.degree, self.g, self.n, fs.join(","), self.x)
    }
}

/// `Σ_{|m| = D} ∏ Q_{m_i}(a_i) ψ^m` on `M_{g,n}`.
pub fn omega_open(spec: &RelationSpec) -> Result<TautClass> {
    spec.validate()?;
    if spec.extra() != 0 {
        return Err(Error::InvalidSpec("open relation with extra points".into()));
    }
    let mut out = TautClass::zero(spec.g, spec.n);
    for m in crate::graphs::compositions(spec.degree, spec.n) {
        let c = m.iter().zip(&spec.fields).fold(Rational::one(), |acc, (&mi, a)| acc * q_full(mi as usize, a));
        out.add_term(Monomial::psi_only(m), c)?;
    }
    Ok(out)
}

fn rep(x: i64, r: i64) -> i64 {
    x.rem_euclid(r - 1)
}

/// Edge-series coefficient of `ψ'^{k'} ψ''^{k''}` at integer `r` for the
/// vertex-side fields `b'`, `b''`, using a precomputed table of `P`.
pub fn edge_value(t: &PTable, bp: i64, bc: i64, kp: u32, kc: u32) -> Result<Rational> {
    let r = t.r;
    let big_m = (kp + kc + 1) as i64;
    if rep(bp + bc + big_m + 1, r) != 0 {
        return Ok(Rational::zero());
    }
    if big_m as usize > t.max_m() {
        return Err(Error::InvalidInput("P table too small for edge".into()));
    }
    let c = |j: i64| -> Rational {
        let jc = rep(bc + big_m - j, r);
        let jp = r - 2 - jc;
        -(t.get(j as usize, jp).clone() * t.get((big_m - j) as usize, jc))
    };
    let kp = kp as i64;
    let mut lower = Rational::zero();
    for j in 0..=kp {
        let s = c(j);
        if (kp - j) % 2 == 0 { lower += s } else { lower -= s }
    }
    let mut upper = Rational::zero();
    for j in kp + 1..=big_m {
        let s = c(j);
        if (j - kp - 1) % 2 == 0 { upper += s } else { upper -= s }
    }
    if lower != upper {
        return Err(Error::InexactDivision(format!(
            "edge numerator not divisible by psi'+psi'' at r={r}, b'={bp}, b''={bc}, M={big_m}"
        )));
    }
    Ok(lower)
}

/// [`edge_value`] with its own table; fields must lie in `0..=r-2`.
pub fn edge_expand(r: i64, bp: i64, bc: i64, kp: u32, kc: u32) -> Result<Rational> {
    if r < 2 || !(0..=r - 2).contains(&bp) || !(0..=r - 2).contains(&bc) {
        return Err(Error::InvalidInput(format!("fields {bp}, {bc} outside 0..=r-2 for r={r}")));
    }
    let t = PTable::new(r, (kp + kc + 1) as usize)?;
    edge_value(&t, bp, bc, kp, kc)
}

/// Spanning-tree plan for evaluating a graph sum by peeling vertices.
struct Plan {
    /// BFS order from vertex 0.
    order: Vec<usize>,
    /// For non-root vertices: (edge, half-edge at vertex, half-edge at parent).
    parent: Vec<Option<(usize, usize, usize)>>,
    free_edges: Vec<usize>,
    at: Vec<Vec<usize>>,
}

impl Plan {
    fn new(gr: &StableGraph) -> Plan {
        let n = gr.num_legs();
        let nv = gr.num_vertices();
        let mut parent = vec![None; nv];
        let mut seen = vec![false; nv];
        let mut tree_edge = vec![false; gr.num_edges()];
        let mut order = vec![0];
        seen[0] = true;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            for (e, &(a, b)) in gr.edges().iter().enumerate() {
                for (x, y, hx, hy) in [(a, b, n + 2 * e, n + 2 * e + 1), (b, a, n + 2 * e + 1, n + 2 * e)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        tree_edge[e] = true;
                        parent[y] = Some((e, hy, hx));
                        order.push(y);
                    }
                }
            }
            i += 1;
        }
        let free_edges = (0..gr.num_edges()).filter(|&e| !tree_edge[e]).collect();
        let at = (0..nv).map(|v| gr.half_edges_at(v)).collect();
        Plan { order, parent, free_edges, at }
    }
}

/// Per-`r` data: the `P` table and memoized edge coefficients indexed by `b''`.
struct Sample {
    t: PTable,
    edges: HashMap<(u32, u32), Vec<Rational>>,
}

impl Sample {
    fn new(r: i64, max_m: usize) -> Result<Sample> {
        Ok(Sample { t: PTable::new(r, max_m)?, edges: HashMap::new() })
    }

    fn edge_row(&mut self, k0: u32, k1: u32) -> Result<&Vec<Rational>> {
        if !self.edges.contains_key(&(k0, k1)) {
            let r = self.t.r;
            let big_m = (k0 + k1 + 1) as i64;
            let row = (0..r - 1)
                .map(|b1| edge_value(&self.t, rep(r - 2 - b1 - big_m, r), b1, k0, k1))
                .collect::<Result<Vec<_>>>()?;
            self.edges.insert((k0, k1), row);
        }
        Ok(&self.edges[&(k0, k1)])
    }
}

/// Graph-sum contribution of one decorated graph at integer `r` (without `1/|Aut|`).
fn bar_value(s: &mut Sample, dg: &DecoratedGraph, plan: &Plan, a: &[i64]) -> Result<Rational> {
    let r = s.t.r;
    let gr = &dg.graph;
    let n = gr.num_legs();
    let rq = Rational::from_int(r);
    let mut weight = Rational::one();
    let mut f = vec![0i64; gr.num_half_edges()];
    for i in 0..n {
        let m = dg.psi[i];
        weight *= p_sym(m as usize)?.eval(&rq, &Rational::from_int(a[i]));
        f[i] = rep(a[i] - m as i64, r);
    }
    for &h in gr.genera() {
        weight *= crate::poly::pow(&Rational::from_int(r - 1), h);
    }
    if weight.is_zero() {
        return Ok(weight);
    }
    let em = |e: usize| (dg.psi[n + 2 * e] + dg.psi[n + 2 * e + 1] + 1) as i64;
    let mut total = Rational::zero();
    let mut free = vec![0i64; plan.free_edges.len()];
    loop {
        for (k, &e) in plan.free_edges.iter().enumerate() {
            f[n + 2 * e + 1] = free[k];
            f[n + 2 * e] = rep(r - 2 - free[k] - em(e), r);
        }
        for &v in plan.order.iter().rev() {
            let Some((e, hv, hp)) = plan.parent[v] else { continue };
            let others: i64 = plan.at[v].iter().filter(|&&h| h != hv).map(|&h| f[h]).sum();
            f[hv] = rep(gr.genera()[v] as i64 - 1 - others, r);
            f[hp] = rep(r - 2 - f[hv] - em(e), r);
        }
        debug_assert_eq!(
            rep(plan.at[0].iter().map(|&h| f[h]).sum::<i64>() - gr.genera()[0] as i64 + 1, r),
            0
        );
        let mut term = weight.clone();
        for e in 0..gr.num_edges() {
            let (h0, h1) = (n + 2 * e, n + 2 * e + 1);
            term *= &s.edge_row(dg.psi[h0], dg.psi[h1])?[f[h1] as usize];
            if term.is_zero() {
                break;
            }
        }
        total += term;
        let mut k = 0;
        while k < free.len() && free[k] == r - 2 {
            free[k] = 0;
            k += 1;
        }
        if k == free.len() {
            break;
        }
        free[k] += 1;
    }
    Ok(total)
}

/// Where a relation lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ambient {
    Open { g: u32, n: usize },
    /// `M^{rt[n]}_{g, n+m}`.
    RationalTails { g: u32, n: usize, m: usize },
    Compactified { g: u32, n: usize },
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ambient::Open { g, n } => write!(f, "open(g={g},n={n})"),
            Ambient::RationalTails { g, n, m } => write!(f, "rt(g={g},n={n},m={m})"),
            Ambient::Compactified { g, n } => write!(f, "compactified(g={g},n={n})"),
        }
    }
}

/// A relation as a combination of ψ-decorated strata `ξ_{Γ*}(∏ψ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TautRelation {
    pub ambient: Ambient,
    pub degree: u32,
    pub terms: BTreeMap<DecoratedGraph, Rational>,
}

impl TautRelation {
    fn new(ambient: Ambient, degree: u32) -> Self {
        TautRelation { ambient, degree, terms: BTreeMap::new() }
    }

    fn add(&mut self, dg: &DecoratedGraph, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = dg.canonical();
        let slot = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Scales so that the term with the smallest serialized key has coefficient 1.
    pub fn canonicalized(&self) -> TautRelation {
        let first = self.terms.iter().min_by_key(|(d, _)| d.key()).map(|(_, c)| c.clone());
        let mut out = self.clone();
        if let Some(c) = first {
            for v in out.terms.values_mut() {
                *v /= &c;
            }
        }
        out
    }

    /// Terms supported on the one-vertex graph, as a class on the open space.
    pub fn open_part(&self) -> Result<TautClass> {
        let (g, n) = match self.ambient {
            Ambient::Compactified { g, n } | Ambient::Open { g, n } => (g, n),
            Ambient::RationalTails { g, n, m } => (g, n + m),
        };
        let mut out = TautClass::zero(g, n);
        for (dg, c) in &self.terms {
            if dg.graph.num_edges() == 0 {
                out.add_term(Monomial::psi_only(dg.psi.clone()), c.clone())?;
            }
        }
        Ok(out)
    }

    /// Multiplies by `∏ ψ_i^{e_i}` pulled back to every stratum.
    pub fn times_leg_psi(&self, psi: &[u32]) -> TautRelation {
        let mut out = TautRelation::new(self.ambient, self.degree + psi.iter().sum::<u32>());
        for (dg, c) in &self.terms {
            let mut d = dg.clone();
            for (i, e) in psi.iter().enumerate() {
                d.psi[i] += e;
            }
            out.add(&d, c.clone());
        }
        out
    }

    /// Pushforward of a rational-tails relation to the open space `M_{g,n}`.
    pub fn push_open(&self) -> Result<TautClass> {
        let Ambient::RationalTails { g, n, .. } = self.ambient else {
            return Err(Error::AmbientMismatch(format!("push_open from {}", self.ambient)));
        };
        let mut out = TautClass::zero(g, n);
        for (dg, c) in &self.terms {
            out = out.add(&push_rt(g, n, dg)?.scale(c))?;
        }
        Ok(out)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let mut rows: Vec<(String, serde_json::Value)> = self
            .terms
            .iter()
            .map(|(d, c)| {
                let mut v = d.to_json_value();
                v["coeff"] = serde_json::Value::String(rational_to_string(c));
                (d.key(), v)
            })
            .collect();
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        serde_json::json!({
            "ambient": self.ambient.to_string(),
            "degree": self.degree,
            "terms": rows.into_iter().map(|r| r.1).collect::<Vec<_>>(),
        })
    }
}

/// Sampling window for the integer-`r` computation of `omega_bar`.
#[derive(Clone, Copy, Debug)]
pub struct Sampling {
    pub r_min: i64,
    pub count: usize,
}

impl Sampling {
    pub fn for_spec(spec: &RelationSpec) -> Sampling {
        let sum: i64 = spec.fields.iter().map(|a| as_integer(a).unwrap_or(0)).sum();
        Sampling {
            r_min: 2 * (spec.degree as i64 + sum) + spec.g as i64 + 10,
            count: 2 * spec.degree as usize + spec.g as usize + 3,
        }
    }
}

/// Diagnostics of one `omega_bar` run.
#[derive(Clone, Debug)]
pub struct BarReport {
    pub relation: TautRelation,
    pub sampling: Sampling,
    /// Number of per-graph coefficients compared between `count` and `2 count` samples.
    pub checked: usize,
}

/// Relation on the compactified space, with a stability check that doubles
/// the number of integer samples.
pub fn omega_bar(spec: &RelationSpec) -> Result<TautRelation> {
    Ok(omega_bar_report(spec)?.relation)
}

static BAR_RUNS: AtomicUsize = AtomicUsize::new(0);
static BAR_CHECKED: AtomicUsize = AtomicUsize::new(0);

/// Number of `omega_bar` computations so far and of coefficients that passed
/// the doubled-sample check.
pub fn bar_stats() -> (usize, usize) {
    (BAR_RUNS.load(AtomicOrdering::Relaxed), BAR_CHECKED.load(AtomicOrdering::Relaxed))
}

type BarCache = Mutex<HashMap<RelationSpec, Arc<TautRelation>>>;

/// Memoized [`omega_bar`].
pub fn omega_bar_cached(spec: &RelationSpec) -> Result<Arc<TautRelation>> {
    static CACHE: OnceLock<BarCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.lock().expect("bar cache poisoned").get(spec) {
        return Ok(r.clone());
    }
    let rel = Arc::new(omega_bar(spec)?);
    cache.lock().expect("bar cache poisoned").insert(spec.clone(), rel.clone());
    Ok(rel)
}

pub fn omega_bar_report(spec: &RelationSpec) -> Result<BarReport> {
    spec.validate()?;
    if spec.x != 0 {
        return Err(Error::InvalidSpec("the compactified relation is only defined for x=0".into()));
    }
    if spec.extra() != 0 {
        return Err(Error::InvalidSpec("omega_bar takes fields for the markings only".into()));
    }
    let (g, n, big_d) = (spec.g, spec.n, spec.degree);
    let a: Vec<i64> = spec.fields.iter().map(|x| as_integer(x).expect("validated")).collect();
    let sampling = Sampling::for_spec(spec);
    let graphs = enumerate_stable_capped(g, n, big_d as usize)?;
    let mut items = vec![];
    for gr in &graphs {
        let aut = Rational::from_int(gr.aut_order() as i64);
        for dg in decorations(gr, big_d) {
            items.push((dg, gr.clone(), aut.clone()));
        }
    }
    let plans: BTreeMap<StableGraph, Plan> = graphs.iter().map(|gr| (gr.clone(), Plan::new(gr))).collect();
    let rs: Vec<i64> = (0..2 * sampling.count as i64).map(|k| sampling.r_min + k).collect();
    let mut values: Vec<Vec<(Rational, Rational)>> = vec![Vec::with_capacity(rs.len()); items.len()];
    for &r in &rs {
        let mut sample = Sample::new(r, big_d as usize + 1)?;
        for (k, (dg, gr, _)) in items.iter().enumerate() {
            let v = bar_value(&mut sample, dg, &plans[gr], &a)?;
            values[k].push((Rational::from_int(r), v));
        }
    }
    let half = Rational::from_frac(1, 2);
    let mut rel = TautRelation::new(Ambient::Compactified { g, n }, big_d);
    for (k, (dg, _, aut)) in items.iter().enumerate() {
        let short = interpolate_at(&values[k][..sampling.count], &half)?;
        let long = interpolate_at(&values[k], &half)?;
        if short != long {
            return Err(Error::InterpolationUnstable {
                what: format!("{spec}, graph {}", dg.key()),
                detail: format!("{short} with {} samples vs {long} with {}", sampling.count, 2 * sampling.count),
            });
        }
        rel.add(dg, short / aut);
    }
    BAR_RUNS.fetch_add(1, AtomicOrdering::Relaxed);
    BAR_CHECKED.fetch_add(items.len(), AtomicOrdering::Relaxed);
    Ok(BarReport { relation: rel, sampling, checked: items.len() })
}

/// Affine form `c_0 + c_r r + Σ c_i a_i` over sample variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Affine(Vec<Rational>);

impl Affine {
    fn constant(c: Rational, nvars: usize) -> Affine {
        let mut v = vec![Rational::zero(); nvars + 2];
        v[0] = c;
        Affine(v)
    }

    fn plus(&self, o: &Affine) -> Affine {
        Affine(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    fn neg(&self) -> Affine {
        Affine(self.0.iter().map(|a| -a).collect())
    }

    fn shift(&self, c: i64) -> Affine {
        let mut v = self.0.clone();
        v[0] += Rational::from_int(c);
        Affine(v)
    }

    /// Adds `k (r - 1)`.
    fn plus_r_minus_1(&self, k: i64) -> Affine {
        let mut v = self.0.clone();
        v[0] -= Rational::from_int(k);
        v[1] += Rational::from_int(k);
        Affine(v)
    }

    fn eval(&self, point: &[Rational]) -> Rational {
        self.0.iter().zip(point).fold(Rational::zero(), |acc, (c, x)| acc + c * x)
    }
}

/// Symbolic field calculus: an integer sample point decides every reduction
/// modulo `r - 1`; the resulting affine forms are evaluated at `r = 1/2`.
struct FieldModel {
    legs: Vec<Affine>,
    sample: Vec<Rational>,
    target: Vec<Rational>,
    r_sample: i64,
    edges: RefCell<HashMap<(Affine, u32, u32), Rational>>,
}

impl FieldModel {
    fn new(spec: &RelationSpec) -> FieldModel {
        let total = spec.fields.len();
        let half = Rational::from_frac(1, 2);
        if spec.x == 0 {
            let r_sample = 1_000_003;
            let legs = spec.fields.iter().map(|a| Affine::constant(a.clone(), 0)).collect();
            let sample = vec![Rational::one(), Rational::from_int(r_sample)];
            let target = vec![Rational::one(), half];
            return FieldModel { legs, sample, target, r_sample, edges: RefCell::default() };
        }
        // Variables a_2..a_total; a_1 = (g - 1 + D) + x (r - 1) - Σ_{i>1} a_i.
        let nv = total - 1;
        let r_sample = 1_000_000_007;
        let mut legs = vec![];
        let mut first = Affine::constant(Rational::from_int(spec.g as i64 - 1 + spec.degree as i64), nv)
            .plus_r_minus_1(spec.x as i64);
        for i in 1..total {
            let mut v = Affine::constant(Rational::zero(), nv);
            v.0[i + 1] = Rational::one();
            first = first.plus(&v.neg());
            legs.push(v);
        }
        legs.insert(0, first);
        let mut sample = vec![Rational::one(), Rational::from_int(r_sample)];
        let mut target = vec![Rational::one(), half];
        for i in 1..total {
            sample.push(Rational::from_int(1000 * (i as i64 + 1) + 7 * i as i64));
            target.push(spec.fields[i].clone());
        }
        FieldModel { legs, sample, target, r_sample, edges: RefCell::default() }
    }

    /// Reduces into `0..=r-2` at the sample point.
    fn wrap(&self, x: &Affine) -> Result<Affine> {
        let s = x.eval(&self.sample);
        let si = as_integer(&s).ok_or_else(|| Error::Determination { level: 0, detail: format!("non-integer sample {s}") })?;
        let k = si.div_euclid(self.r_sample - 1);
        Ok(x.plus_r_minus_1(-k))
    }

    fn r_minus_2(&self) -> Affine {
        let mut v = Affine::constant(Rational::from_int(-2), self.sample.len() - 2);
        v.0[1] = Rational::one();
        v
    }
}

/// Relation on the rational-tails space `M^{rt[n]}_{g, n+m}` with `m` extra
/// points, evaluated at `r = 1/2` through symbolic fields. Any `m` is accepted.
pub fn omega_rt_any(spec: &RelationSpec) -> Result<TautRelation> {
    spec.validate()?;
    let (g, n, m, big_d) = (spec.g, spec.n, spec.extra(), spec.degree);
    if g == 0 {
        return Err(Error::InvalidSpec("rational tails need g >= 1".into()));
    }
    let model = FieldModel::new(spec);
    let mut rel = TautRelation::new(Ambient::RationalTails { g, n, m }, big_d);
    for gr in rt_graphs(g, n, m, big_d as usize)? {
        for dg in decorations(&gr, big_d) {
            let c = rt_value(&model, &dg, g)?;
            rel.add(&dg, c);
        }
    }
    Ok(rel)
}

/// [`omega_rt_any`] restricted to the catalogued strata, `m <= 2`.
pub fn omega_rt(spec: &RelationSpec) -> Result<TautRelation> {
    if spec.fields.len() >= spec.n && spec.extra() > 2 {
        return Err(Error::Unimplemented(format!("omega_rt with m = {} > 2", spec.extra())));
    }
    omega_rt_any(spec)
}

fn rt_value(model: &FieldModel, dg: &DecoratedGraph, g: u32) -> Result<Rational> {
    let gr = &dg.graph;
    let n = gr.num_legs();
    let mut coeff = Rational::one();
    let mut f: Vec<Option<Affine>> = vec![None; gr.num_half_edges()];
    for i in 0..n {
        let m = dg.psi[i];
        coeff *= q_full(m as usize, &model.legs[i].eval(&model.target));
        if coeff.is_zero() {
            return Ok(coeff);
        }
        f[i] = Some(model.wrap(&model.legs[i].shift(-(m as i64)))?);
    }
    let core = (0..gr.num_vertices()).find(|&v| gr.genera()[v] == g).expect("rt core");
    for t in tails(gr, core) {
        // Peel the tail from its leaves inward; `vertices[0]` is the root.
        let mut order = t.vertices.clone();
        order.reverse();
        let mut pending: Vec<usize> = order.clone();
        while let Some(pos) = pending.iter().position(|&v| {
            gr.half_edges_at(v).iter().filter(|&&h| f[h].is_none()).count() == 1
        }) {
            let v = pending.remove(pos);
            let hv = *gr.half_edges_at(v).iter().find(|&&h| f[h].is_none()).expect("one open half-edge");
            let mut s = Affine::constant(Rational::from_int(-1), model.sample.len() - 2);
            for &h in gr.half_edges_at(v).iter().filter(|&&h| h != hv) {
                s = s.plus(&f[h].as_ref().expect("assigned").neg());
            }
            let fv = model.wrap(&s)?;
            let hp = gr.partner(hv).expect("edge");
            let big_m = (dg.psi[hv] + dg.psi[hp] + 1) as i64;
            let fp = model.wrap(&model.r_minus_2().plus(&fv.neg()).shift(-big_m))?;
            coeff *= rt_edge(model, &fv, dg.psi[hp], dg.psi[hv])?;
            f[hv] = Some(fv);
            f[hp] = Some(fp);
            if coeff.is_zero() {
                return Ok(coeff);
            }
        }
        if !pending.is_empty() {
            return Err(Error::Determination { level: 0, detail: "tail fields not determined".into() });
        }
    }
    Ok(coeff)
}

fn rt_edge(model: &FieldModel, fc: &Affine, kp: u32, kc: u32) -> Result<Rational> {
    let key = (fc.clone(), kp, kc);
    if let Some(v) = model.edges.borrow().get(&key) {
        return Ok(v.clone());
    }
    let v = rt_edge_uncached(model, fc, kp, kc)?;
    model.edges.borrow_mut().insert(key, v.clone());
    Ok(v)
}

fn rt_edge_uncached(model: &FieldModel, fc: &Affine, kp: u32, kc: u32) -> Result<Rational> {
    let big_m = (kp + kc + 1) as i64;
    let c = |j: i64| -> Result<Rational> {
        let jc = model.wrap(&fc.shift(big_m - j))?;
        let jp = model.r_minus_2().plus(&jc.neg());
        Ok(-(q_full(j as usize, &jp.eval(&model.target)) * q_full((big_m - j) as usize, &jc.eval(&model.target))))
    };
    let kp = kp as i64;
    let mut lower = Rational::zero();
    for j in 0..=kp {
        let s = c(j)?;
        if (kp - j) % 2 == 0 { lower += s } else { lower -= s }
    }
    let mut upper = Rational::zero();
    for j in kp + 1..=big_m {
        let s = c(j)?;
        if (j - kp - 1) % 2 == 0 { upper += s } else { upper -= s }
    }
    if lower != upper {
        return Err(Error::InexactDivision(format!("symbolic edge with M={big_m}")));
    }
    Ok(lower)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_frac(n, d)
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x, 1)).collect()
    }

    #[test]
    fn validation() {
        assert_eq!(RelationSpec::open(2, 2, ints(&[3])).validate().unwrap(), -1);
        assert!(matches!(RelationSpec::open(2, 1, ints(&[2])).validate(), Err(Error::InvalidSpec(_))));
        let mut f = vec![q(5, 2), q(2, 1), q(3, 2), q(-1, 2)];
        let s = RelationSpec::new(3, 2, 4, f.clone(), 1);
        assert_eq!(s.validate().unwrap(), -1);
        f[0] = q(3, 1);
        assert!(RelationSpec::new(3, 2, 4, f, 1).validate().is_err());
    }

    #[test]
    fn open_examples() {
        let c = omega_open(&RelationSpec::open(1, 1, ints(&[1]))).unwrap();
        assert_eq!(c.len(), 1);
        let c = omega_open(&RelationSpec::open(2, 2, ints(&[3]))).unwrap();
        assert_eq!(c.coeff(&Monomial::psi_only(vec![2])), q_full(2, &q(3, 1)));
        let c = omega_open(&RelationSpec::open(2, 2, ints(&[3, 0]))).unwrap();
        assert_eq!(c.len(), 1);
        assert!(!c.coeff(&Monomial::psi_only(vec![2, 0])).is_zero());
    }

    #[test]
    fn edge_unitarity_and_symmetry() {
        for (r, bp, bc) in [(5, 0, 1), (7, 3, 2), (9, 8, 7), (11, 0, 0), (6, 4, 1), (13, 5, 9), (8, 6, 6), (10, 2, 7), (12, 11, 3), (4, 1, 2)] {
            let t = PTable::new(r, 7).unwrap();
            for kp in 0..3 {
                for kc in 0..3 {
                    let a = edge_value(&t, bp, bc, kp, kc).unwrap();
                    let b = edge_value(&t, bc, bp, kc, kp).unwrap();
                    assert_eq!(a, b, "r={r} b=({bp},{bc}) k=({kp},{kc})");
                }
            }
        }
    }

    #[test]
    fn bar_restricts_to_open() {
        let spec = RelationSpec::open(1, 1, ints(&[1]));
        let rel = omega_bar(&spec).unwrap();
        let open = rel.open_part().unwrap().normalized();
        assert_eq!(open, omega_open(&spec).unwrap().normalized());
    }
}
