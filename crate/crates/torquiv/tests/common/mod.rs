//! Random instance generators and brute-force oracles shared by the
//! integration tests. None of the oracles call into the divisor-graph code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torquiv::lp::{rat, LinearProgram, LpOutcome};
use torquiv::quiver::{IntFlow, Quiver, Weight};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random acyclic quiver on `2..=max_vertices` vertices with at most
/// `max_arrows` arrows, and a weight realized by a random small flow, so
/// the polytope is never empty.
pub fn random_acyclic_pair(rng: &mut ChaCha8Rng, max_vertices: usize, max_arrows: usize, max_theta: i64) -> (Quiver, Weight) {
    loop {
        let n = rng.gen_range(2..=max_vertices);
        let m = rng.gen_range(n - 1..=max_arrows);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut arrows = Vec::new();
        for i in 0..m {
            let a = rng.gen_range(0..n);
            let mut b = rng.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            let (t, h) = if order[a] < order[b] { (a, b) } else { (b, a) };
            arrows.push((format!("a{}", i + 1), t, h));
        }
        let names = (1..=n).map(|i| format!("v{i}")).collect();
        let q = Quiver::from_indexed(names, arrows).unwrap();
        let x: Vec<i64> = (0..m).map(|_| rng.gen_range(0..=2)).collect();
        let theta = q.divergence(&x);
        if theta.iter().all(|&t| t.abs() <= max_theta) && theta.iter().any(|&t| t != 0) {
            return (q, theta);
        }
    }
}

/// A random acyclic pair in which one arrow has been doubled; returns the
/// indices of the two parallel arrows.
pub fn random_parallel_pair(rng: &mut ChaCha8Rng) -> (Quiver, Weight, (usize, usize)) {
    let (q, _) = random_acyclic_pair(rng, 4, 5, 3);
    let pick = rng.gen_range(0..q.arrow_count());
    let base = &q.arrows()[pick];
    let mut arrows: Vec<(String, usize, usize)> = q.arrows().iter().map(|a| (a.id.clone(), a.tail, a.head)).collect();
    arrows.push(("p".into(), base.tail, base.head));
    let first = base.id.clone();
    let q = Quiver::from_indexed(q.vertices().to_vec(), arrows).unwrap();
    let x: Vec<i64> = (0..q.arrow_count()).map(|_| rng.gen_range(0..=2)).collect();
    let theta = q.divergence(&x);
    let pair = (q.arrow_index(&first).unwrap(), q.arrow_index("p").unwrap());
    (q, theta, pair)
}

/// Sources x1.., sinks y1.. with each arrow present independently.
/// The returned hint marks sources with −1 so isolated ones keep their role.
pub fn random_bipartite(rng: &mut ChaCha8Rng, max_sources: usize, max_sinks: usize) -> (Quiver, Vec<i64>) {
    let s = rng.gen_range(1..=max_sources);
    let t = rng.gen_range(s..=max_sinks);
    let mut names: Vec<String> = (1..=s).map(|i| format!("x{i}")).collect();
    names.extend((1..=t).map(|j| format!("y{j}")));
    let mut arrows = Vec::new();
    for i in 0..s {
        for j in 0..t {
            if rng.gen_bool(0.6) {
                arrows.push((format!("a{}_{}", i + 1, j + 1), i, s + j));
            }
        }
    }
    let hint: Vec<i64> = (0..s + t).map(|v| if v < s { -1 } else { 1 }).collect();
    Quiver::from_indexed_weighted(names, arrows, hint).unwrap()
}

fn sum(gens: &[IntFlow], u: &[usize]) -> IntFlow {
    let mut out = vec![0; gens.first().map_or(0, |g| g.len())];
    for &i in u {
        for (o, v) in out.iter_mut().zip(&gens[i]) {
            *o += v;
        }
    }
    out
}

/// Every multiset of k generator indices, grouped by the sum it maps to.
pub fn fibres(gens: &[IntFlow], k: usize) -> BTreeMap<IntFlow, Vec<Vec<usize>>> {
    fn rec(n: usize, k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in from..n {
            cur.push(i);
            rec(n, k, i, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    rec(gens.len(), k, 0, &mut Vec::new(), &mut all);
    let mut out: BTreeMap<IntFlow, Vec<Vec<usize>>> = BTreeMap::new();
    for u in all {
        out.entry(sum(gens, &u)).or_default().push(u);
    }
    out
}

fn remove_sub(u: &[usize], sub: &[usize]) -> Option<Vec<usize>> {
    let mut rest = u.to_vec();
    for x in sub {
        let p = rest.iter().position(|y| y == x)?;
        rest.remove(p);
    }
    Some(rest)
}

/// Whether single-binomial rewrites connect every pair of equal-image
/// monomials of degree ≤ `max_degree`.
pub fn rewriting_connects(gens: &[IntFlow], moves: &[(Vec<usize>, Vec<usize>)], max_degree: usize) -> bool {
    for k in 2..=max_degree {
        for fibre in fibres(gens, k).values() {
            if fibre.len() < 2 {
                continue;
            }
            let members: BTreeSet<&Vec<usize>> = fibre.iter().collect();
            let mut seen = BTreeSet::from([fibre[0].clone()]);
            let mut queue = VecDeque::from([fibre[0].clone()]);
            while let Some(u) = queue.pop_front() {
                for (l, r) in moves {
                    for (from, to) in [(l, r), (r, l)] {
                        if let Some(mut w) = remove_sub(&u, from) {
                            w.extend(to);
                            w.sort_unstable();
                            if members.contains(&w) && seen.insert(w.clone()) {
                                queue.push_back(w);
                            }
                        }
                    }
                }
            }
            if seen.len() != fibre.len() {
                return false;
            }
        }
    }
    true
}

/// Number of minimal generators needed in each degree 2..=max_degree:
/// in a fibre of degree k the relations of lower degree join exactly the
/// monomials that share a variable, so each fibre needs one new binomial
/// per extra component.
pub fn minimal_generator_counts(gens: &[IntFlow], max_degree: usize) -> Vec<usize> {
    (2..=max_degree)
        .map(|k| {
            fibres(gens, k)
                .values()
                .map(|fibre| {
                    let mut comp: Vec<usize> = (0..fibre.len()).collect();
                    fn find(c: &mut [usize], x: usize) -> usize {
                        if c[x] != x {
                            let r = find(c, c[x]);
                            c[x] = r;
                        }
                        c[x]
                    }
                    for i in 0..fibre.len() {
                        for j in i + 1..fibre.len() {
                            if fibre[i].iter().any(|g| fibre[j].contains(g)) {
                                let (a, b) = (find(&mut comp, i), find(&mut comp, j));
                                comp[a] = b;
                            }
                        }
                    }
                    let roots: BTreeSet<usize> = (0..fibre.len()).map(|i| find(&mut comp, i)).collect();
                    roots.len() - 1
                })
                .sum()
        })
        .collect()
}

/// Lattice points that are not convex combinations of the other lattice
/// points, decided by exact LP feasibility.
pub fn hull_vertices(points: &[IntFlow]) -> Vec<IntFlow> {
    let mut out = Vec::new();
    for (p, x) in points.iter().enumerate() {
        let others: Vec<&IntFlow> = points.iter().enumerate().filter(|&(j, _)| j != p).map(|(_, y)| y).collect();
        if others.is_empty() {
            out.push(x.clone());
            continue;
        }
        let mut lp = LinearProgram::new(others.len());
        lp.add_equality_i64(&vec![1; others.len()], 1);
        for c in 0..x.len() {
            let row: Vec<i64> = others.iter().map(|y| y[c]).collect();
            lp.add_equality_i64(&row, x[c]);
        }
        if lp.minimize(&vec![rat(0); others.len()]) == LpOutcome::Infeasible {
            out.push(x.clone());
        }
    }
    out
}
