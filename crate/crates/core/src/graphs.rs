//! Stable dual graphs, their decorations and rational-tails strata.
//!
//! Half-edges are numbered `0..n` for the legs (leg `i` carries marking
//! `i + 1`), then `n + 2e` and `n + 2e + 1` for the two ends of edge `e`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StableGraph {
    genera: Vec<u32>,
    legs: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<u32>,
    edges: Vec<[usize; 2]>,
    legs: BTreeMap<usize, usize>,
}

impl StableGraph {
    /// Builds and validates a graph; edge endpoints are normalized and sorted.
    pub fn new(genera: Vec<u32>, legs: Vec<usize>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let v = genera.len();
        if v == 0 {
            return Err(Error::InvalidInput("graph without vertices".into()));
        }
        if legs.iter().chain(edges.iter().flat_map(|e| [&e.0, &e.1])).any(|&x| x >= v) {
            return Err(Error::InvalidInput("vertex index out of range".into()));
        }
        let mut edges: Vec<_> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort();
        let g = StableGraph { genera, legs, edges };
        if !g.is_connected() {
            return Err(Error::InvalidInput("graph is not connected".into()));
        }
        for (i, &gv) in g.genera.iter().enumerate() {
            if 2 * gv as i64 - 2 + g.valence(i) as i64 <= 0 {
                return Err(Error::InvalidInput(format!("vertex {i} is unstable")));
            }
        }
        Ok(g)
    }

    pub fn smooth(g: u32, n: usize) -> Self {
        StableGraph { genera: vec![g], legs: vec![0; n], edges: vec![] }
    }

    pub fn genera(&self) -> &[u32] {
        &self.genera
    }

    pub fn legs(&self) -> &[usize] {
        &self.legs
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.genera.len()
    }

    pub fn num_legs(&self) -> usize {
        self.legs.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_half_edges(&self) -> usize {
        self.legs.len() + 2 * self.edges.len()
    }

    /// First Betti number plus vertex genera.
    pub fn genus(&self) -> u32 {
        let betti = self.edges.len() + 1 - self.genera.len();
        self.genera.iter().sum::<u32>() + betti as u32
    }

    pub fn valence(&self, v: usize) -> usize {
        self.legs.iter().filter(|&&x| x == v).count()
            + self.edges.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum::<usize>()
    }

    /// Vertex carrying half-edge `h`.
    pub fn vertex_of(&self, h: usize) -> usize {
        let n = self.legs.len();
        if h < n {
            self.legs[h]
        } else {
            let (a, b) = self.edges[(h - n) / 2];
            if (h - n) % 2 == 0 { a } else { b }
        }
    }

    /// The other end of an edge half-edge; `None` for legs.
    pub fn partner(&self, h: usize) -> Option<usize> {
        let n = self.legs.len();
        (h >= n).then(|| n + ((h - n) ^ 1))
    }

    pub fn half_edges_at(&self, v: usize) -> Vec<usize> {
        (0..self.num_half_edges()).filter(|&h| self.vertex_of(h) == v).collect()
    }

    /// `3 g_v - 3 + val(v)`.
    pub fn vertex_dim(&self, v: usize) -> i64 {
        3 * self.genera[v] as i64 - 3 + self.valence(v) as i64
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.genera.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &(a, b) in &self.edges {
                for (p, q) in [(a, b), (b, a)] {
                    if p == x && !seen[q] {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    fn vertex_invariant(&self, v: usize) -> (u32, usize, Vec<usize>, usize) {
        let legs = (0..self.legs.len()).filter(|&i| self.legs[i] == v).collect();
        let loops = self.edges.iter().filter(|&&(a, b)| a == v && b == v).count();
        (self.genera[v], self.valence(v), legs, loops)
    }

    /// Vertex order sorted by invariant, plus the block boundaries of equal invariants.
    fn blocks(&self) -> (Vec<usize>, Vec<usize>) {
        let mut order: Vec<usize> = (0..self.genera.len()).collect();
        order.sort_by_key(|&v| self.vertex_invariant(v));
        let mut bounds = vec![0];
        for i in 1..order.len() {
            if self.vertex_invariant(order[i]) != self.vertex_invariant(order[i - 1]) {
                bounds.push(i);
            }
        }
        bounds.push(order.len());
        (order, bounds)
    }

    /// Calls `f(new_index_of)` for every relabeling compatible with the invariant blocks.
    fn for_each_relabeling(&self, mut f: impl FnMut(&[usize])) {
        let (order, bounds) = self.blocks();
        let mut perm = order.clone();
        let mut map = vec![0; order.len()];
        fn rec(
            block: usize,
            bounds: &[usize],
            perm: &mut Vec<usize>,
            map: &mut Vec<usize>,
            f: &mut dyn FnMut(&[usize]),
        ) {
            if block + 1 == bounds.len() {
                for (pos, &v) in perm.iter().enumerate() {
                    map[v] = pos;
                }
                f(map);
                return;
            }
            permute(bounds[block], bounds[block + 1], perm, &mut |p| {
                rec(block + 1, bounds, p, map, f)
            });
        }
        rec(0, &bounds, &mut perm, &mut map, &mut f);
    }

    fn relabeled(&self, map: &[usize]) -> StableGraph {
        let mut genera = vec![0; self.genera.len()];
        for (v, &g) in self.genera.iter().enumerate() {
            genera[map[v]] = g;
        }
        let legs = self.legs.iter().map(|&v| map[v]).collect();
        let mut edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(a, b)| (map[a].min(map[b]), map[a].max(map[b])))
            .collect();
        edges.sort();
        StableGraph { genera, legs, edges }
    }

    pub fn canonical(&self) -> StableGraph {
        let mut best: Option<StableGraph> = None;
        self.for_each_relabeling(|map| {
            let cand = self.relabeled(map);
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
        });
        best.expect("at least one relabeling")
    }

    pub fn canonical_key(&self) -> Vec<u8> {
        self.canonical().to_json().into_bytes()
    }

    pub fn is_isomorphic(&self, other: &StableGraph) -> bool {
        self.canonical() == other.canonical()
    }

    /// Order of the automorphism group acting on half-edges, fixing every leg.
    pub fn aut_order(&self) -> u64 {
        let mut vertex_auts = 0u64;
        let mut first: Option<StableGraph> = None;
        self.for_each_relabeling(|map| {
            let r = self.relabeled(map);
            match &first {
                None => {
                    first = Some(r);
                    vertex_auts = 1;
                }
                Some(f) if *f == r => vertex_auts += 1,
                _ => {}
            }
        });
        let mut mult: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for &e in &self.edges {
            *mult.entry(e).or_default() += 1;
        }
        let edge_factor: u64 = mult
            .iter()
            .map(|(&(a, b), &k)| factorial(k) * if a == b { 1 << k } else { 1 })
            .product();
        vertex_auts * edge_factor
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("graph serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let j = GraphJson {
            vertices: self.genera.clone(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            legs: self.legs.iter().enumerate().map(|(i, &v)| (i + 1, v)).collect(),
        };
        serde_json::to_value(j).expect("graph serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: GraphJson =
            serde_json::from_str(s).map_err(|e| Error::InvalidInput(e.to_string()))?;
        let n = j.legs.len();
        if j.legs.keys().copied().ne(1..=n) {
            return Err(Error::InvalidInput("legs must be labelled 1..n".into()));
        }
        StableGraph::new(j.vertices, j.legs.into_values().collect(), j.edges.iter().map(|e| (e[0], e[1])).collect())
    }

    /// All codimension-one degenerations: a self-node at a vertex of positive
    /// genus, or a split of a vertex into two joined by a new edge.
    pub fn degenerations(&self) -> Vec<StableGraph> {
        let mut out = vec![];
        for v in 0..self.genera.len() {
            if self.genera[v] > 0 {
                let mut g = self.clone();
                g.genera[v] -= 1;
                g.edges.push((v, v));
                g.edges.sort();
                out.push(g);
            }
            let hs = self.half_edges_at(v);
            let w = self.genera.len();
            for mask in 0u64..(1 << hs.len()) {
                let moved = |i: usize| mask >> i & 1 == 1;
                let k = mask.count_ones() as i64;
                let rest = hs.len() as i64 - k;
                for g2 in 0..=self.genera[v] {
                    let g1 = self.genera[v] - g2;
                    if 2 * g1 as i64 - 1 + rest <= 0 || 2 * g2 as i64 - 1 + k <= 0 {
                        continue;
                    }
                    let mut g = self.clone();
                    g.genera[v] = g1;
                    g.genera.push(g2);
                    let n = self.legs.len();
                    for (i, &h) in hs.iter().enumerate() {
                        if !moved(i) {
                            continue;
                        }
                        if h < n {
                            g.legs[h] = w;
                        } else {
                            let e = &mut g.edges[(h - n) / 2];
                            if (h - n) % 2 == 0 { e.0 = w } else { e.1 = w }
                        }
                    }
                    g.edges.push((v, w));
                    for e in g.edges.iter_mut() {
                        *e = (e.0.min(e.1), e.0.max(e.1));
                    }
                    g.edges.sort();
                    out.push(g);
                }
            }
        }
        out
    }
}

fn permute(k: usize, end: usize, perm: &mut Vec<usize>, f: &mut dyn FnMut(&mut Vec<usize>)) {
    if k + 1 >= end {
        f(perm);
        return;
    }
    for i in k..end {
        perm.swap(k, i);
        permute(k + 1, end, perm, f);
        perm.swap(k, i);
    }
}

fn factorial(k: u64) -> u64 {
    (1..=k).product()
}

fn check_stable(g: u32, n: usize) -> Result<()> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::Unstable { g: g as usize, n });
    }
    Ok(())
}

/// Stable graphs of `(g, n)` with at most `max_edges` edges, grouped by edge
/// count, keeping only graphs accepted by `keep`. `keep` must be closed under
/// edge contraction for the result to be complete.
pub fn enumerate_filtered(
    g: u32,
    n: usize,
    max_edges: usize,
    keep: impl Fn(&StableGraph) -> bool,
) -> Result<Vec<Vec<StableGraph>>> {
    check_stable(g, n)?;
    let smooth = StableGraph::smooth(g, n);
    let mut levels = vec![if keep(&smooth) { vec![smooth] } else { vec![] }];
    let cap = max_edges.min((3 * g as usize + n).saturating_sub(3));
    for _ in 0..cap {
        let mut seen = BTreeSet::new();
        let mut next = vec![];
        for gr in levels.last().unwrap() {
            for d in gr.degenerations() {
                if !keep(&d) {
                    continue;
                }
                let c = d.canonical();
                if seen.insert(c.clone()) {
                    next.push(c);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        levels.push(next);
    }
    Ok(levels)
}

/// Stable graphs of `(g, n)` up to isomorphism, with at most `max_edges` edges.
pub fn enumerate_stable_capped(g: u32, n: usize, max_edges: usize) -> Result<Vec<StableGraph>> {
    Ok(enumerate_filtered(g, n, max_edges, |_| true)?.into_iter().flatten().collect())
}

/// All stable graphs of `(g, n)` up to isomorphism.
pub fn enumerate_stable(g: u32, n: usize) -> Result<Vec<StableGraph>> {
    enumerate_stable_capped(g, n, usize::MAX)
}

/// Is `gr` a rational-tails graph: one genus-`g` core vertex and genus-0 trees
/// each carrying at most one of the markings `1..=primary`.
pub fn is_rational_tails(gr: &StableGraph, primary: usize) -> bool {
    rt_core(gr).is_some_and(|core| {
        gr.num_edges() + 1 == gr.num_vertices()
            && tails(gr, core).iter().all(|t| t.legs.iter().filter(|&&l| l < primary).count() <= 1)
    })
}

fn rt_core(gr: &StableGraph) -> Option<usize> {
    let pos: Vec<usize> = (0..gr.num_vertices()).filter(|&v| gr.genera[v] > 0).collect();
    match pos.as_slice() {
        [c] => Some(*c),
        [] if gr.num_vertices() == 1 => Some(0),
        _ => None,
    }
}

/// One genus-0 tree hanging off the core of a rational-tails graph.
#[derive(Clone, Debug)]
pub struct Tail {
    /// Half-edge at the core where the tail is attached.
    pub attach: usize,
    pub vertices: Vec<usize>,
    /// Leg indices (0-based) carried by the tail.
    pub legs: Vec<usize>,
}

/// The tails of a tree-shaped graph around `core`.
pub fn tails(gr: &StableGraph, core: usize) -> Vec<Tail> {
    let mut out = vec![];
    for h in gr.half_edges_at(core) {
        let Some(p) = gr.partner(h) else { continue };
        let root = gr.vertex_of(p);
        if root == core {
            continue;
        }
        let mut vertices = vec![root];
        let mut stack = vec![(root, core)];
        while let Some((x, parent)) = stack.pop() {
            for &(a, b) in &gr.edges {
                for (p, q) in [(a, b), (b, a)] {
                    if p == x && q != parent && !vertices.contains(&q) && q != core {
                        vertices.push(q);
                        stack.push((q, x));
                    }
                }
            }
        }
        let legs = (0..gr.num_legs()).filter(|&l| vertices.contains(&gr.legs[l])).collect();
        out.push(Tail { attach: h, vertices, legs });
    }
    out
}

/// Rational-tails graphs of `M_{g, n+m}` (at most one of the first `n`
/// markings per tail) with at most `max_edges` edges.
pub fn rt_graphs(g: u32, n: usize, m: usize, max_edges: usize) -> Result<Vec<StableGraph>> {
    if g == 0 {
        return Err(Error::InvalidInput("rational tails need a positive-genus core".into()));
    }
    Ok(enumerate_filtered(g, n + m, max_edges, |gr| is_rational_tails(gr, n))?
        .into_iter()
        .flatten()
        .collect())
}

/// Strata of the rational-tails space with `m` extra points, `m <= 2`.
pub fn rt_strata(g: u32, n: usize, m: usize) -> Result<Vec<StableGraph>> {
    if m > 2 {
        return Err(Error::Unimplemented(format!("rt_strata with m = {m} > 2")));
    }
    if g < 2 {
        return Err(Error::InvalidInput("rt_strata needs g >= 2".into()));
    }
    rt_graphs(g, n, m, usize::MAX)
}

/// Roman-numeral family of an `m = 2` rational-tails stratum, following the
/// catalogue: (i) smooth, (ii)/(iii) one bubble with `j` and `n+2` / `n+1`,
/// (iv) bubble with both extra points, (v) two bubbles, (vi) bubble with
/// `j, n+1, n+2`, (vii)-(ix) chains.
pub fn fig_family(gr: &StableGraph, n: usize) -> Option<&'static str> {
    let core = rt_core(gr)?;
    let ts = tails(gr, core);
    let (p1, p2) = (n, n + 1);
    let has = |t: &Tail, l: usize| t.legs.contains(&l);
    match ts.as_slice() {
        [] => Some("i"),
        [t] if t.vertices.len() == 1 => match (t.legs.len(), has(t, p1), has(t, p2)) {
            (2, false, true) => Some("ii"),
            (2, true, false) => Some("iii"),
            (2, true, true) => Some("iv"),
            (3, true, true) => Some("vi"),
            _ => None,
        },
        [t] if t.vertices.len() == 2 => {
            let outer = t.vertices[1];
            let outer_legs: Vec<usize> = t.legs.iter().copied().filter(|&l| gr.legs[l] == outer).collect();
            match (outer_legs.contains(&p1), outer_legs.contains(&p2)) {
                (true, true) => Some("vii"),
                (false, true) => Some("viii"),
                (true, false) => Some("ix"),
                _ => None,
            }
        }
        [_, _] => Some("v"),
        _ => None,
    }
}

/// A stable graph with ψ-exponents on every half-edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecoratedGraph {
    pub graph: StableGraph,
    /// ψ-exponent per half-edge, indexed as in [`StableGraph`].
    pub psi: Vec<u32>,
}

impl DecoratedGraph {
    pub fn new(graph: StableGraph, psi: Vec<u32>) -> Result<Self> {
        if psi.len() != graph.num_half_edges() {
            return Err(Error::InvalidInput("decoration length mismatch".into()));
        }
        Ok(DecoratedGraph { graph, psi })
    }

    pub fn undecorated(graph: StableGraph) -> Self {
        let psi = vec![0; graph.num_half_edges()];
        DecoratedGraph { graph, psi }
    }

    pub fn degree(&self) -> u32 {
        self.psi.iter().sum::<u32>() + self.graph.num_edges() as u32
    }

    pub fn leg_psi(&self) -> &[u32] {
        &self.psi[..self.graph.num_legs()]
    }

    /// Canonical representative: vertex relabeling plus ordering of edge ends.
    pub fn canonical(&self) -> DecoratedGraph {
        let gr = &self.graph;
        let n = gr.num_legs();
        let mut best: Option<(Vec<u32>, Vec<usize>, Vec<(usize, u32, usize, u32)>, Vec<u32>)> = None;
        gr.for_each_relabeling(|map| {
            let mut genera = vec![0; gr.num_vertices()];
            for (v, &g) in gr.genera.iter().enumerate() {
                genera[map[v]] = g;
            }
            let legs: Vec<usize> = gr.legs.iter().map(|&v| map[v]).collect();
            let mut es: Vec<_> = gr
                .edges
                .iter()
                .enumerate()
                .map(|(e, &(a, b))| {
                    let x = (map[a], self.psi[n + 2 * e]);
                    let y = (map[b], self.psi[n + 2 * e + 1]);
                    let (x, y) = if x <= y { (x, y) } else { (y, x) };
                    (x.0, x.1, y.0, y.1)
                })
                .collect();
            es.sort();
            let cand = (genera, legs, es, self.psi[..n].to_vec());
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
        });
        let (genera, legs, es, leg_psi) = best.expect("at least one relabeling");
        let mut psi = leg_psi;
        for &(_, pa, _, pb) in &es {
            psi.push(pa);
            psi.push(pb);
        }
        let graph = StableGraph { genera, legs, edges: es.iter().map(|&(a, _, b, _)| (a, b)).collect() };
        DecoratedGraph { graph, psi }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let n = self.graph.num_legs();
        serde_json::json!({
            "graph": self.graph.to_json_value(),
            "legs_psi": self.psi[..n],
            "edges_psi": self.psi[n..].chunks(2).map(|c| [c[0], c[1]]).collect::<Vec<_>>(),
        })
    }

    pub fn key(&self) -> String {
        self.canonical().to_json_value().to_string()
    }
}

/// All ways of writing `total` as an ordered sum of `parts` non-negative integers.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = vec![];
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// ψ-decorations of total degree `degree` on a fixed graph (degree counts edges).
pub fn decorations(gr: &StableGraph, degree: u32) -> Vec<DecoratedGraph> {
    let e = gr.num_edges() as u32;
    if e > degree {
        return vec![];
    }
    // Fill half-edges vertex by vertex, never exceeding a vertex's dimension.
    let hs: Vec<Vec<usize>> = (0..gr.num_vertices()).map(|v| gr.half_edges_at(v)).collect();
    let caps: Vec<i64> = (0..gr.num_vertices()).map(|v| gr.vertex_dim(v)).collect();
    let order: Vec<(usize, usize)> = hs.iter().enumerate().flat_map(|(v, h)| h.iter().map(move |&x| (v, x))).collect();
    // Capacity of the vertices after the one owning position i.
    let after: Vec<i64> = order.iter().map(|&(v, _)| caps[v + 1..].iter().sum()).collect();
    let mut out = vec![];
    let mut psi = vec![0u32; gr.num_half_edges()];
    let mut used = vec![0i64; gr.num_vertices()];
    fn rec(
        i: usize,
        left: i64,
        order: &[(usize, usize)],
        after: &[i64],
        caps: &[i64],
        used: &mut [i64],
        psi: &mut [u32],
        gr: &StableGraph,
        out: &mut Vec<DecoratedGraph>,
    ) {
        if i == order.len() {
            if left == 0 {
                out.push(DecoratedGraph { graph: gr.clone(), psi: psi.to_vec() });
            }
            return;
        }
        let (v, h) = order[i];
        if left > caps[v] - used[v] + after[i] {
            return;
        }
        let room = (caps[v] - used[v]).min(left);
        for k in 0..=room {
            psi[h] = k as u32;
            used[v] += k;
            rec(i + 1, left - k, order, after, caps, used, psi, gr, out);
            used[v] -= k;
        }
        psi[h] = 0;
    }
    let total = (degree - e) as i64;
    if caps.iter().all(|&c| c >= 0) {
        rec(0, total, &order, &after, &caps, &mut used, &mut psi, gr, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_stable(0, 3).unwrap().len(), 1);
        assert_eq!(enumerate_stable(1, 1).unwrap().len(), 2);
        assert_eq!(enumerate_stable(0, 4).unwrap().len(), 4);
        assert_eq!(enumerate_stable(0, 5).unwrap().len(), 26);
        assert_eq!(enumerate_stable(1, 2).unwrap().len(), 5);
        assert_eq!(enumerate_stable(2, 0).unwrap().len(), 7);
        assert!(matches!(enumerate_stable(0, 2), Err(Error::Unstable { .. })));
        assert!(matches!(enumerate_stable(1, 0), Err(Error::Unstable { .. })));
    }

    #[test]
    fn automorphism_examples() {
        assert_eq!(StableGraph::smooth(2, 1).aut_order(), 1);
        let loop1 = StableGraph::new(vec![0], vec![0], vec![(0, 0)]).unwrap();
        assert_eq!(loop1.aut_order(), 2);
        let banana = StableGraph::new(vec![0, 0], vec![0, 1], vec![(0, 1), (0, 1)]).unwrap();
        assert_eq!(banana.aut_order(), 2);
        let two_loops = StableGraph::new(vec![0], vec![], vec![(0, 0), (0, 0)]).unwrap();
        assert_eq!(two_loops.aut_order(), 8);
        let dumbbell = StableGraph::new(vec![1, 1], vec![], vec![(0, 1)]).unwrap();
        assert_eq!(dumbbell.aut_order(), 2);
    }

    #[test]
    fn keys() {
        let a = StableGraph::new(vec![0, 1], vec![0, 0, 1], vec![(0, 1)]).unwrap();
        let b = StableGraph::new(vec![1, 0], vec![1, 1, 0], vec![(1, 0)]).unwrap();
        assert_eq!(a.canonical_key(), b.canonical_key());
        assert_ne!(a.canonical_key(), StableGraph::smooth(1, 3).canonical_key());
        let back = StableGraph::from_json(&a.to_json()).unwrap();
        assert_eq!(back.canonical_key(), a.canonical_key());
    }

    #[test]
    fn rt_catalogue() {
        assert_eq!(rt_strata(2, 3, 0).unwrap().len(), 1);
        for n in 1..=4 {
            assert_eq!(rt_strata(3, n, 1).unwrap().len(), 1 + n);
        }
        let strata = rt_strata(2, 3, 2).unwrap();
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for s in &strata {
            *counts.entry(fig_family(s, 3).expect("classified")).or_default() += 1;
        }
        let expect = [("i", 1), ("ii", 3), ("iii", 3), ("iv", 1), ("v", 6), ("vi", 3), ("vii", 3), ("viii", 3), ("ix", 3)];
        assert_eq!(counts, expect.into_iter().collect());
        assert!(strata.iter().all(|s| s.aut_order() == 1));
        assert!(matches!(rt_strata(2, 3, 3), Err(Error::Unimplemented(_))));
    }

    #[test]
    fn decorated_canonical_merges_symmetric_ends() {
        let gr = StableGraph::new(vec![0], vec![0], vec![(0, 0)]).unwrap();
        let a = DecoratedGraph::new(gr.clone(), vec![0, 1, 0]).unwrap();
        let b = DecoratedGraph::new(gr, vec![0, 0, 1]).unwrap();
        assert_eq!(a.key(), b.key());
        assert_eq!(a.degree(), 2);
    }
}
