use std::collections::BTreeSet;

use tautring::graphs::{enumerate_stable, StableGraph};

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for p in permutations(k - 1) {
        for pos in 0..k {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

type Raw = (Vec<u32>, Vec<usize>, Vec<(usize, usize)>);

fn relabel(raw: &Raw, p: &[usize]) -> Raw {
    let mut gen = vec![0; raw.0.len()];
    for (v, &g) in raw.0.iter().enumerate() {
        gen[p[v]] = g;
    }
    let legs = raw.1.iter().map(|&v| p[v]).collect();
    let mut edges: Vec<_> = raw.2.iter().map(|&(a, b)| (p[a].min(p[b]), p[a].max(p[b]))).collect();
    edges.sort();
    (gen, legs, edges)
}

fn multisets(pairs: &[(usize, usize)], k: usize, from: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
    if k == 0 {
        out.push(cur.clone());
        return;
    }
    for i in from..pairs.len() {
        cur.push(pairs[i]);
        multisets(pairs, k - 1, i, cur, out);
        cur.pop();
    }
}

fn connected(v: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; v];
    seen[0] = true;
    let mut changed = true;
    while changed {
        changed = false;
        for &(a, b) in edges {
            if seen[a] != seen[b] {
                seen[a] = true;
                seen[b] = true;
                changed = true;
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Every vertex-labelled configuration, deduplicated by the minimum over all vertex permutations.
fn brute_force(g: u32, n: usize) -> BTreeSet<Raw> {
    let mut classes = BTreeSet::new();
    for v in 1..=(2 * g as usize + n).saturating_sub(2).max(1) {
        let perms = permutations(v);
        let pairs: Vec<_> = (0..v).flat_map(|a| (a..v).map(move |b| (a, b))).collect();
        let mut gens = vec![vec![]];
        for _ in 0..v {
            gens = gens.into_iter().flat_map(|p: Vec<u32>| (0..=g).map(move |x| { let mut q = p.clone(); q.push(x); q })).collect();
        }
        for gen in gens {
            let s: u32 = gen.iter().sum();
            if s > g {
                continue;
            }
            let e = (g - s) as usize + v - 1;
            let mut sets = vec![];
            multisets(&pairs, e, 0, &mut vec![], &mut sets);
            for edges in sets {
                if !connected(v, &edges) {
                    continue;
                }
                let mut legs = vec![0; n];
                loop {
                    let stable = (0..v).all(|x| {
                        let val = legs.iter().filter(|&&l| l == x).count()
                            + edges.iter().map(|&(a, b)| (a == x) as usize + (b == x) as usize).sum::<usize>();
                        2 * gen[x] as i64 - 2 + val as i64 > 0
                    });
                    if stable {
                        let raw = (gen.clone(), legs.clone(), edges.clone());
                        let best = perms.iter().map(|p| relabel(&raw, p)).min().unwrap();
                        classes.insert(best);
                    }
                    let mut i = 0;
                    while i < n && legs[i] == v - 1 {
                        legs[i] = 0;
                        i += 1;
                    }
                    if i == n {
                        break;
                    }
                    legs[i] += 1;
                }
            }
        }
    }
    classes
}

#[test]
fn enumeration_matches_brute_force() {
    for (g, n) in [(0, 3), (0, 4), (0, 5), (0, 6), (0, 7), (1, 1), (1, 2), (1, 3), (1, 4), (2, 0), (2, 1)] {
        let fast = enumerate_stable(g, n).unwrap();
        let slow = brute_force(g, n);
        assert_eq!(fast.len(), slow.len(), "(g, n) = ({g}, {n})");
        for gr in &fast {
            assert_eq!(gr.genus(), g);
            let raw = (gr.genera().to_vec(), gr.legs().to_vec(), gr.edges().to_vec());
            let best = permutations(gr.num_vertices()).iter().map(|p| relabel(&raw, p)).min().unwrap();
            assert!(slow.contains(&best));
        }
    }
}

fn brute_aut(gr: &StableGraph) -> u64 {
    let h = gr.num_half_edges();
    let n = gr.num_legs();
    let mut count = 0;
    'perm: for p in permutations(h) {
        if (0..n).any(|i| p[i] != i) {
            continue;
        }
        for a in n..h {
            if p[gr.partner(a).unwrap()] != gr.partner(p[a]).unwrap() {
                continue 'perm;
            }
        }
        for a in 0..h {
            if gr.genera()[gr.vertex_of(a)] != gr.genera()[gr.vertex_of(p[a])] {
                continue 'perm;
            }
            for b in 0..h {
                let same = gr.vertex_of(a) == gr.vertex_of(b);
                if same != (gr.vertex_of(p[a]) == gr.vertex_of(p[b])) {
                    continue 'perm;
                }
            }
        }
        count += 1;
    }
    count
}

#[test]
fn automorphisms_match_half_edge_brute_force() {
    let mut checked = 0;
    for (g, n) in [(0, 3), (0, 4), (0, 5), (0, 6), (1, 1), (1, 2), (1, 3), (1, 4), (2, 0), (2, 1), (2, 2), (3, 0)] {
        for gr in enumerate_stable(g, n).unwrap() {
            if gr.num_half_edges() <= 6 {
                assert_eq!(gr.aut_order(), brute_aut(&gr), "{}", gr.to_json());
                checked += 1;
            }
        }
    }
    assert!(checked > 40);
}

#[test]
fn stability_and_genus_hold() {
    for (g, n) in [(2, 2), (3, 1), (1, 5)] {
        for gr in enumerate_stable(g, n).unwrap() {
            assert_eq!(gr.genus(), g);
            for v in 0..gr.num_vertices() {
                assert!(2 * gr.genera()[v] as i64 - 2 + gr.valence(v) as i64 > 0);
            }
            let back = StableGraph::from_json(&gr.to_json()).unwrap();
            assert_eq!(back.canonical_key(), gr.canonical_key());
        }
    }
}
