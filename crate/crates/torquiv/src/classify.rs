//! Finite classification lists (skeletons L_d, L′_d; quivers R_d, R′_d,
//! R″_d) and the identification of 2-dimensional toric quiver varieties.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use num::Integer;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{canonical_labelling, quiver_code, Multigraph};
use crate::lp::{rat, LpOutcome, Rat};
use crate::polytope::{dimension, facet_groups, flow_lp, forest_solution};
use crate::quiver::{is_strongly_connected, Dsu, Quiver, Weight};
use crate::reductions::{in_rd_form, is_contractible, is_prime, skeleton, tighten};
use crate::{Budget, Limits};

/// Largest d accepted by the skeleton and affine enumerations.
pub const MAX_SKELETON_DIM: usize = 5;
/// Largest d accepted by [`enumerate_rd`].
pub const MAX_RD_DIM: usize = 4;

fn check_cap(d: usize, limit: usize, what: &str) -> Result<()> {
    if d > limit {
        return Err(Error::CapExceeded { what: format!("{what} dimension"), limit: limit as u64 });
    }
    Ok(())
}

/// Non-increasing sequences of `n` integers ≥ 3 summing to `total`, with
/// no entry above half the total (a loopless graph needs that).
fn degree_sequences(n: usize, total: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, left: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let rest = n - cur.len() - 1;
        for d in (3..=max.min(left)).rev() {
            if left - d < 3 * rest || left - d > d * rest {
                continue;
            }
            cur.push(d);
            rec(n, left - d, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, total, total / 2, &mut Vec::new(), &mut out);
    out
}

/// All loopless multigraphs realizing `seq` (vertex i has degree seq[i])
/// that are prime, keyed by canonical code.
fn realize(seq: &[usize], limits: &Limits) -> Result<Vec<(Vec<u32>, Multigraph)>> {
    struct St<'a> {
        n: usize,
        rem: Vec<usize>,
        edges: Vec<(usize, usize)>,
        found: BTreeMap<Vec<u32>, Multigraph>,
        budget: Budget,
        _seq: &'a [usize],
    }
    impl St<'_> {
        fn go(&mut self, i: usize, j: usize) -> Result<()> {
            self.budget.tick()?;
            let n = self.n;
            if i + 1 >= n {
                if self.rem[n - 1] == 0 {
                    let g = Multigraph::unlabeled(n, self.edges.iter().copied());
                    if g.is_prime() {
                        let code = g.canonical_code();
                        self.found.entry(code).or_insert_with(|| g.canonical());
                    }
                }
                return Ok(());
            }
            if j == n {
                return if self.rem[i] == 0 { self.go(i + 1, i + 2) } else { Ok(()) };
            }
            let (lo, hi) = if j + 1 == n {
                (self.rem[i], self.rem[i])
            } else {
                (0, self.rem[i].min(self.rem[j]))
            };
            if lo > self.rem[j] {
                return Ok(());
            }
            for m in lo..=hi {
                self.rem[i] -= m;
                self.rem[j] -= m;
                for _ in 0..m {
                    self.edges.push((i, j));
                }
                let r = self.go(i, j + 1);
                self.edges.truncate(self.edges.len() - m);
                self.rem[i] += m;
                self.rem[j] += m;
                r?;
            }
            Ok(())
        }
    }
    let mut st = St {
        n: seq.len(),
        rem: seq.to_vec(),
        edges: Vec::new(),
        found: BTreeMap::new(),
        budget: Budget::new(limits, "skeleton enumeration"),
        _seq: seq,
    };
    st.go(0, 1)?;
    Ok(st.found.into_iter().collect())
}

/// L_d: prime loopless multigraphs with χ = d and all valencies ≥ 3, up to
/// isomorphism, in canonical form and canonical-code order.
pub fn enumerate_skeletons(d: usize) -> Result<Vec<Multigraph>> {
    enumerate_skeletons_with(d, &Limits::default())
}

pub fn enumerate_skeletons_with(d: usize, limits: &Limits) -> Result<Vec<Multigraph>> {
    check_cap(d, MAX_SKELETON_DIM, "skeleton")?;
    // χ ≤ 1 forces a vertex of valency ≤ 2 in a prime graph.
    if d < 2 {
        return Ok(Vec::new());
    }
    let mut shards = Vec::new();
    for v in 2..=2 * d - 2 {
        shards.extend(degree_sequences(v, 2 * (v + d - 1)));
    }
    let parts: Vec<Result<Vec<(Vec<u32>, Multigraph)>>> = shards.par_iter().map(|s| realize(s, limits)).collect();
    let mut all = BTreeMap::new();
    for part in parts {
        all.extend(part?);
    }
    Ok(all.into_values().collect())
}

/// L′_d: members of L_d that are not a single-edge contraction of another
/// member. Cross-checked against the 3-regular members.
pub fn enumerate_maximal_skeletons(d: usize) -> Result<Vec<Multigraph>> {
    let all = enumerate_skeletons(d)?;
    let codes: HashSet<Vec<u32>> = all.iter().map(|g| g.canonical_code()).collect();
    let mut dominated = HashSet::new();
    for g in &all {
        for e in 0..g.edges.len() {
            let (u, w) = g.edges[e];
            if g.multiplicity(u, w) != 1 {
                continue;
            }
            let code = g.contract_edge(e).canonical_code();
            if codes.contains(&code) {
                dominated.insert(code);
            }
        }
    }
    let maximal: Vec<Multigraph> = all.iter().filter(|g| !dominated.contains(&g.canonical_code())).cloned().collect();
    let regular: Vec<&Multigraph> = all.iter().filter(|g| g.is_regular(3)).collect();
    if maximal.len() != regular.len() || maximal.iter().zip(&regular).any(|(a, b)| a != *b) {
        return Err(Error::CrossCheck("maximal skeletons differ from the 3-regular ones".into()));
    }
    Ok(maximal)
}

/// How an edge of a skeleton becomes part of a quiver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeChoice {
    /// One arrow from the lower- to the higher-indexed endpoint.
    Forward,
    Backward,
    /// A sink vertex on the edge with an arrow from each endpoint.
    Sink,
}

fn fresh(taken: &BTreeSet<String>, base: String) -> String {
    let mut s = base;
    while taken.contains(&s) {
        s.push('\'');
    }
    s
}

/// Quiver from a skeleton: vertices keep their ids; edge j gets arrow
/// `a{j+1}` when oriented, or sink `s{j+1}` with arrows `a{j+1}`, `b{j+1}`.
pub fn build_rd_quiver(g: &Multigraph, choices: &[EdgeChoice]) -> Result<Quiver> {
    if choices.len() != g.edges.len() {
        return Err(Error::InvalidQuiver(format!(
            "expected {} edge choices, got {}",
            g.edges.len(),
            choices.len()
        )));
    }
    let mut names = g.vertices.clone();
    let taken: BTreeSet<String> = names.iter().cloned().collect();
    let mut arrows = Vec::new();
    for (j, (&(u, w), &c)) in g.edges.iter().zip(choices).enumerate() {
        let a = format!("a{}", j + 1);
        match c {
            EdgeChoice::Forward => arrows.push((a, u, w)),
            EdgeChoice::Backward => arrows.push((a, w, u)),
            EdgeChoice::Sink => {
                let s = names.len();
                names.push(fresh(&taken, format!("s{}", j + 1)));
                arrows.push((a, u, s));
                arrows.push((format!("b{}", j + 1), w, s));
            }
        }
    }
    Quiver::from_indexed(names, arrows)
}

/// The quiver with a sink on every edge of `g`.
pub fn sink_subdivision(g: &Multigraph) -> Quiver {
    build_rd_quiver(g, &vec![EdgeChoice::Sink; g.edges.len()]).expect("choices match edges")
}

fn renamed(g: &Multigraph) -> Multigraph {
    Multigraph::new((1..=g.vertex_count()).map(|i| format!("u{i}")).collect(), g.edges.iter().copied())
}

/// Code of a skeleton decorated by edge choices: cell (i,j) counts arrows
/// i → j and sinks between i and j.
fn decorated_code(g: &Multigraph, choices: &[EdgeChoice]) -> Vec<u32> {
    let n = g.vertex_count();
    let mut m = vec![vec![0u32; n]; n];
    for (&(u, w), &c) in g.edges.iter().zip(choices) {
        match c {
            EdgeChoice::Forward => m[u][w] += 256,
            EdgeChoice::Backward => m[w][u] += 256,
            EdgeChoice::Sink => {
                m[u][w] += 1;
                m[w][u] += 1;
            }
        }
    }
    let colors: Vec<u32> = (0..n).map(|v| g.degree(v) as u32).collect();
    canonical_labelling(n, &colors, |i, j| m[i][j]).0
}

fn orientation_acyclic(n: usize, g: &Multigraph, choices: &[EdgeChoice]) -> bool {
    let mut indeg = vec![0; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (&(u, w), &c) in g.edges.iter().zip(choices) {
        let (t, h) = match c {
            EdgeChoice::Forward => (u, w),
            EdgeChoice::Backward => (w, u),
            EdgeChoice::Sink => continue,
        };
        out[t].push(h);
        indeg[h] += 1;
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &h in &out[v] {
            indeg[h] -= 1;
            if indeg[h] == 0 {
                stack.push(h);
            }
        }
    }
    seen == n
}

/// R_d: acyclic quivers obtained from members of L_d by orienting some
/// edges and putting a sink on the others, up to isomorphism. R₁ is the
/// Kronecker quiver.
pub fn enumerate_rd(d: usize) -> Result<Vec<Quiver>> {
    check_cap(d, MAX_RD_DIM, "R_d")?;
    if d == 1 {
        return Ok(vec![crate::corpus::kronecker()]);
    }
    let graphs: Vec<Multigraph> = enumerate_skeletons(d)?.iter().map(renamed).collect();
    let per_graph: Vec<Vec<Quiver>> = graphs
        .par_iter()
        .map(|g| {
            let e = g.edges.len();
            let mut seen = BTreeMap::new();
            let mut choices = vec![EdgeChoice::Forward; e];
            for mut code in 0..3usize.pow(e as u32) {
                for c in choices.iter_mut() {
                    *c = [EdgeChoice::Forward, EdgeChoice::Backward, EdgeChoice::Sink][code % 3];
                    code /= 3;
                }
                if !orientation_acyclic(g.vertex_count(), g, &choices) {
                    continue;
                }
                seen.entry(decorated_code(g, &choices)).or_insert_with(|| choices.clone());
            }
            seen.into_values().map(|c| build_rd_quiver(g, &c).expect("choices match edges")).collect()
        })
        .collect();
    Ok(per_graph.into_iter().flatten().collect())
}

/// R′_d: a sink on every edge of each member of L′_d.
pub fn enumerate_rprime(d: usize) -> Result<Vec<Quiver>> {
    if d == 1 {
        return Ok(vec![crate::corpus::kronecker()]);
    }
    Ok(enumerate_maximal_skeletons(d)?.iter().map(|g| sink_subdivision(&renamed(g))).collect())
}

/// Every weak component of Q and of each Q∖a is strongly connected, i.e.
/// (Q, 0) is tight.
pub fn is_zero_tight(q: &Quiver) -> bool {
    let components_sc = |q: &Quiver| {
        q.component_indices().iter().all(|c| is_strongly_connected(&q.full_subquiver(c).0))
    };
    components_sc(q) && (0..q.arrow_count()).all(|a| components_sc(&q.without_arrow(a)))
}

/// R″_d: prime quivers with χ = d for which (Q, 0) is tight, up to
/// isomorphism, ordered by canonical code.
///
/// Such quivers have at most max(1, d−1) vertices. A loop is a block of its
/// own, so loops occur only on the one-vertex quiver.
pub fn enumerate_affine_rdd(d: usize) -> Result<Vec<Quiver>> {
    enumerate_affine_rdd_with(d, &Limits::default())
}

pub fn enumerate_affine_rdd_with(d: usize, limits: &Limits) -> Result<Vec<Quiver>> {
    check_cap(d, MAX_SKELETON_DIM, "affine list")?;
    if d == 0 {
        return Ok(Vec::new());
    }
    let mut found: BTreeMap<Vec<u32>, Quiver> = BTreeMap::new();
    let mut budget = Budget::new(limits, "affine quiver enumeration");
    for v in 1..=(d - 1).max(1) {
        let e = v + d - 1;
        let names: Vec<String> = (1..=v).map(|i| format!("v{i}")).collect();
        if v == 1 {
            let arrows = (1..=e).map(|i| (format!("a{i}"), 0, 0)).collect();
            let q = Quiver::from_indexed(names, arrows)?;
            if is_prime(&q) && is_zero_tight(&q) {
                found.insert(quiver_code(&q), q);
            }
            continue;
        }
        let pairs: Vec<(usize, usize)> =
            (0..v).flat_map(|i| (0..v).filter(move |&j| j != i).map(move |j| (i, j))).collect();
        let mut counts = vec![0usize; pairs.len()];
        compositions(e, &mut counts, 0, &mut |counts| {
            budget.tick()?;
            let mut indeg = vec![0; v];
            let mut outdeg = vec![0; v];
            for (&(i, j), &c) in pairs.iter().zip(counts.iter()) {
                outdeg[i] += c;
                indeg[j] += c;
            }
            // Q∖a strongly connected for every a needs in, out ≥ 2.
            if (0..v).any(|x| indeg[x] < 2 || outdeg[x] < 2) {
                return Ok(());
            }
            let mut arrows = Vec::new();
            for (&(i, j), &c) in pairs.iter().zip(counts.iter()) {
                for _ in 0..c {
                    arrows.push((format!("a{}", arrows.len() + 1), i, j));
                }
            }
            let q = Quiver::from_indexed(names.clone(), arrows)?;
            if is_prime(&q) && is_zero_tight(&q) {
                found.entry(quiver_code(&q)).or_insert(q);
            }
            Ok(())
        })?;
    }
    Ok(found.into_values().collect())
}

fn compositions(left: usize, counts: &mut [usize], i: usize, f: &mut dyn FnMut(&[usize]) -> Result<()>) -> Result<()> {
    if i + 1 == counts.len() {
        counts[i] = left;
        return f(counts);
    }
    for c in 0..=left {
        counts[i] = c;
        compositions(left - c, counts, i + 1, f)?;
    }
    counts[i] = 0;
    Ok(())
}

/// Complete 2-dimensional fan given by its rays, sorted counterclockwise
/// starting from the positive x-axis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fan2D {
    pub rays: Vec<[i64; 2]>,
}

fn half(r: &[i64; 2]) -> u8 {
    if r[1] > 0 || (r[1] == 0 && r[0] > 0) {
        0
    } else {
        1
    }
}

fn det(a: &[i64; 2], b: &[i64; 2]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

impl Fan2D {
    pub fn new(mut rays: Vec<[i64; 2]>) -> Fan2D {
        rays.sort_by(|a, b| half(a).cmp(&half(b)).then_with(|| 0.cmp(&det(a, b))));
        rays.dedup();
        Fan2D { rays }
    }

    /// Two opposite pairs and nothing else.
    fn is_two_opposite_pairs(&self) -> bool {
        self.rays.len() == 4 && (0..2).all(|i| {
            let (a, b) = (self.rays[i], self.rays[i + 2]);
            a[0] == -b[0] && a[1] == -b[1]
        })
    }

    /// Whether some element of GL₂(Z) maps this fan onto `other`.
    pub fn is_equivalent(&self, other: &Fan2D) -> bool {
        let n = self.rays.len();
        if n != other.rays.len() || n < 2 {
            return false;
        }
        let (r0, r1) = (self.rays[0], self.rays[1]);
        let dr = det(&r0, &r1);
        if dr.abs() != 1 {
            return false;
        }
        let target: HashSet<[i64; 2]> = other.rays.iter().copied().collect();
        for s0 in &other.rays {
            for s1 in &other.rays {
                if det(s0, s1).abs() != 1 {
                    continue;
                }
                // M = [s0 s1] · [r0 r1]⁻¹, integral since det = ±1.
                let inv = [[r1[1] * dr, -r1[0] * dr], [-r0[1] * dr, r0[0] * dr]];
                let m = [
                    [s0[0] * inv[0][0] + s1[0] * inv[1][0], s0[0] * inv[0][1] + s1[0] * inv[1][1]],
                    [s0[1] * inv[0][0] + s1[1] * inv[1][0], s0[1] * inv[0][1] + s1[1] * inv[1][1]],
                ];
                if self
                    .rays
                    .iter()
                    .all(|r| target.contains(&[m[0][0] * r[0] + m[0][1] * r[1], m[1][0] * r[0] + m[1][1] * r[1]]))
                {
                    return true;
                }
            }
        }
        false
    }
}

/// Kruskal in arrow order: the spanning forest with the lexicographically
/// smallest set of arrow indices.
fn smallest_spanning_forest(q: &Quiver) -> Vec<usize> {
    let mut dsu = Dsu::new(q.vertex_count());
    (0..q.arrow_count()).filter(|&i| dsu.union(q.arrows()[i].tail, q.arrows()[i].head)).collect()
}

/// Outward primitive normals of the polygon ∇(Q,θ) after tightening, in
/// spanning-tree coordinates: the free coordinates are x on the two arrows
/// outside the smallest spanning forest.
pub fn normal_fan_2d(q: &Quiver, theta: &[i64]) -> Result<Fan2D> {
    let (t, w, _) = tighten(q, theta)?;
    let dim = dimension(&t, &w)?;
    if dim != 2 {
        return Err(Error::WrongDimension { expected: 2, found: dim });
    }
    if !t.is_acyclic() {
        return Err(Error::UnsupportedCase("the polygon is unbounded".into()));
    }
    let forest = smallest_spanning_forest(&t);
    let free: Vec<usize> = (0..t.arrow_count()).filter(|a| !forest.contains(a)).collect();
    if free.len() != 2 {
        return Err(Error::CrossCheck(format!("tight pair of dimension 2 with χ = {}", free.len())));
    }
    // The fundamental circulation of f is e_f plus the forest flow that
    // cancels its divergence.
    let circulations: Vec<Vec<i64>> = free
        .iter()
        .map(|&f| {
            let mut ef = vec![0; t.arrow_count()];
            ef[f] = 1;
            let div: Vec<i64> = t.divergence(&ef).iter().map(|x| -x).collect();
            let mut c = forest_solution(&t, &div, &forest).expect("divergence sums to zero per component");
            c[f] = 1;
            c
        })
        .collect();
    let mut rays = Vec::new();
    for group in facet_groups(&t, &w)? {
        let a = group[0];
        let n = [-circulations[0][a], -circulations[1][a]];
        let g = n[0].gcd(&n[1]);
        if g == 0 {
            return Err(Error::CrossCheck("facet with a zero normal".into()));
        }
        rays.push([n[0] / g, n[1] / g]);
    }
    let fan = Fan2D::new(rays);
    Ok(fan)
}

/// The smooth complete toric surfaces arising from quivers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Surface {
    P2,
    Bl1P2,
    Bl2P2,
    Bl3P2,
    P1xP1,
}

impl Surface {
    pub const ALL: [Surface; 5] = [Surface::P2, Surface::Bl1P2, Surface::Bl2P2, Surface::Bl3P2, Surface::P1xP1];

    pub fn name(self) -> &'static str {
        match self {
            Surface::P2 => "P2",
            Surface::Bl1P2 => "Bl1P2",
            Surface::Bl2P2 => "Bl2P2",
            Surface::Bl3P2 => "Bl3P2",
            Surface::P1xP1 => "P1xP1",
        }
    }

    pub fn reference_fan(self) -> Fan2D {
        let rays: &[[i64; 2]] = match self {
            Surface::P2 => &[[1, 0], [0, 1], [-1, -1]],
            Surface::Bl1P2 => &[[1, 0], [1, 1], [0, 1], [-1, -1]],
            Surface::Bl2P2 => &[[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1]],
            Surface::Bl3P2 => &[[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1], [0, -1]],
            Surface::P1xP1 => &[[1, 0], [0, 1], [-1, 0], [0, -1]],
        };
        Fan2D::new(rays.to_vec())
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Identifies a fan by its ray count, then confirms the answer by a GL₂(Z)
/// match with the reference fan.
pub fn classify_fan(fan: &Fan2D) -> Result<Surface> {
    let s = match fan.rays.len() {
        3 => Surface::P2,
        4 if fan.is_two_opposite_pairs() => Surface::P1xP1,
        4 => Surface::Bl1P2,
        5 => Surface::Bl2P2,
        6 => Surface::Bl3P2,
        n => return Err(Error::CrossCheck(format!("a fan with {n} rays is not a toric quiver surface"))),
    };
    if !fan.is_equivalent(&s.reference_fan()) {
        return Err(Error::CrossCheck(format!("fan is not lattice equivalent to the {s} fan")));
    }
    Ok(s)
}

pub fn classify_2d(q: &Quiver, theta: &[i64]) -> Result<Surface> {
    classify_fan(&normal_fan_2d(q, theta)?)
}

fn lp_min(q: &Quiver, theta: &[i64], c: &[i64]) -> Result<Rat> {
    let c: Vec<Rat> = c.iter().map(|&v| rat(v)).collect();
    match flow_lp(q, theta).minimize(&c) {
        LpOutcome::Infeasible => Err(Error::EmptyPolyhedron),
        LpOutcome::Unbounded => Err(Error::UnboundedPolyhedron),
        LpOutcome::Optimal { value, .. } => Ok(value),
    }
}

fn floor_i64(r: &Rat) -> i64 {
    i64::try_from(r.floor().to_integer()).expect("bump fits in i64")
}

/// Un-contractions of a new arrow c, with the weight bumped by
/// max(0, θ(c⁻) − min L) so that c becomes contractible, where L is the
/// in-minus-out form at c⁻ without c, minimized over ∇ by exact LP.
struct Uncontract<'a> {
    q: &'a Quiver,
    theta: &'a [i64],
}

impl Uncontract<'_> {
    /// Replaces the skeleton arrow a: u → w by a: u → s and c: w → s.
    fn subdivide(&self, a: usize) -> Result<(Quiver, Weight)> {
        let (q, theta) = (self.q, self.theta);
        let arrow = &q.arrows()[a];
        let w = arrow.head;
        let vset: BTreeSet<String> = q.vertices().iter().cloned().collect();
        let aset: BTreeSet<String> = q.arrows().iter().map(|b| b.id.clone()).collect();
        let s_name = fresh(&vset, format!("s[{}]", arrow.id));
        let c_name = fresh(&aset, format!("c[{}]", arrow.id));
        // L(x) over the arrows of Q at w other than a's new copy: in − out.
        let l: Vec<i64> = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, b)| if i == a { 0 } else { (b.head == w) as i64 - (b.tail == w) as i64 })
            .collect();
        // New θ: s gets 0, w keeps θ(w); c⁻ = w, c⁺ = s.
        let bump = (theta[w] - floor_i64(&lp_min(q, theta, &l)?)).max(0);
        let mut names = q.vertices().to_vec();
        let s = names.len();
        names.push(s_name);
        let mut weight = theta.to_vec();
        weight.push(bump);
        weight[w] -= bump;
        let mut arrows: Vec<(String, usize, usize)> = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, b)| if i == a { (b.id.clone(), b.tail, s) } else { (b.id.clone(), b.tail, b.head) })
            .collect();
        arrows.push((c_name.clone(), w, s));
        let (nq, nw) = Quiver::from_indexed_weighted(names, arrows, weight)?;
        self.verify(&nq, &nw, &c_name)?;
        Ok((nq, nw))
    }

    /// Moves the arrows `moved` (all leaving v) to a fresh source v′ and adds
    /// c: v′ → v.
    fn split(&self, v: usize, moved: &[usize]) -> Result<(Quiver, Weight)> {
        let (q, theta) = (self.q, self.theta);
        let vset: BTreeSet<String> = q.vertices().iter().cloned().collect();
        let aset: BTreeSet<String> = q.arrows().iter().map(|b| b.id.clone()).collect();
        let v_name = fresh(&vset, format!("{}'", q.vertices()[v]));
        let c_name = fresh(&aset, format!("c[{v_name}]"));
        // c⁻ = v′ with θ(v′) = 0; L(x) = −Σ_{moved} x.
        let l: Vec<i64> = (0..q.arrow_count()).map(|i| -(moved.contains(&i) as i64)).collect();
        let bump = (-floor_i64(&lp_min(q, theta, &l)?)).max(0);
        let mut names = q.vertices().to_vec();
        let vp = names.len();
        names.push(v_name);
        let mut weight = theta.to_vec();
        weight.push(-bump);
        weight[v] += bump;
        let mut arrows: Vec<(String, usize, usize)> = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, b)| if moved.contains(&i) { (b.id.clone(), vp, b.head) } else { (b.id.clone(), b.tail, b.head) })
            .collect();
        arrows.push((c_name.clone(), vp, v));
        let (nq, nw) = Quiver::from_indexed_weighted(names, arrows, weight)?;
        self.verify(&nq, &nw, &c_name)?;
        Ok((nq, nw))
    }

    fn verify(&self, q: &Quiver, w: &[i64], c: &str) -> Result<()> {
        if !is_contractible(q, w, q.require_arrow(c)?)? {
            return Err(Error::CrossCheck(format!("bumped arrow {c} is not contractible")));
        }
        Ok(())
    }
}

/// Realizes the polytope of a pair on an R_d quiver by a pair on an R′_d
/// quiver (3-regular skeleton, sink on every edge) that contracts back to
/// it. Oriented skeleton edges get a sink; vertices of valency ≥ 4 are split.
pub fn realize_rprime(q: &Quiver, theta: &[i64]) -> Result<(Quiver, Weight)> {
    if theta.len() != q.vertex_count() {
        return Err(Error::WeightMismatch(format!("expected {} values, got {}", q.vertex_count(), theta.len())));
    }
    if !in_rd_form(q) {
        return Err(Error::NotInRd("valency-2 vertices must be sinks between branch vertices".into()));
    }
    if !q.is_acyclic() {
        return Err(Error::NotInRd("oriented cycle".into()));
    }
    if crate::quiver::euler_characteristic(q) < 2 {
        return Err(Error::NotInRd("χ < 2".into()));
    }
    let mut q = q.clone();
    let mut w = theta.to_vec();
    loop {
        let branch = |q: &Quiver, v: usize| q.valency(v) >= 3;
        if let Some(a) = (0..q.arrow_count()).find(|&a| {
            let arrow = &q.arrows()[a];
            branch(&q, arrow.tail) && branch(&q, arrow.head)
        }) {
            (q, w) = Uncontract { q: &q, theta: &w }.subdivide(a)?;
            continue;
        }
        let Some(v) = (0..q.vertex_count()).find(|&v| q.valency(v) >= 4) else { break };
        let inc = q.incident(v);
        let mut done = false;
        'pairs: for i in 0..inc.len() {
            for j in i + 1..inc.len() {
                let (nq, nw) = Uncontract { q: &q, theta: &w }.split(v, &[inc[i], inc[j]])?;
                if is_prime(&nq) {
                    (q, w) = (nq, nw);
                    done = true;
                    break 'pairs;
                }
            }
        }
        if !done {
            return Err(Error::CrossCheck(format!("no prime split at vertex {}", q.vertices()[v])));
        }
    }
    let g = skeleton(&q)?;
    if !g.is_regular(3) || !in_rd_form(&q) {
        return Err(Error::CrossCheck("realization is not on a 3-regular skeleton".into()));
    }
    Ok((q, w))
}
