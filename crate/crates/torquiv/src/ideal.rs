//! Toric ideals of quiver semigroups: divisor graphs, minimal binomial
//! generators, degree-bound certificates, lifting along parallel arrows,
//! one-sided matching semigroups, and the affine relation degree.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::polytope::{dimension, lattice_points_with};
use crate::quiver::{primitive_cycles, Dsu, IntFlow, Quiver, Weight};
use crate::{Budget, Limits};

/// A monoid generated in degree one by finitely many non-negative integer
/// vectors, with explicit graded pieces.
pub trait GradedMonoid: Sync {
    /// Degree-one elements, sorted lexicographically.
    fn generators(&self) -> &[IntFlow];

    /// All elements of degree k, sorted lexicographically.
    fn piece(&self, k: u32) -> Result<Arc<Vec<IntFlow>>>;

    /// Whether `x` lies in the degree-k piece.
    fn contains(&self, x: &[i64], k: u32) -> Result<bool>;
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn nonneg(x: &[i64]) -> bool {
    x.iter().all(|&v| v >= 0)
}

#[derive(Debug, Default)]
struct PieceCache(Mutex<BTreeMap<u32, Arc<Vec<IntFlow>>>>);

impl PieceCache {
    fn get_or(&self, k: u32, f: impl FnOnce() -> Result<Vec<IntFlow>>) -> Result<Arc<Vec<IntFlow>>> {
        if let Some(p) = self.0.lock().unwrap().get(&k) {
            return Ok(p.clone());
        }
        let p = Arc::new(f()?);
        self.0.lock().unwrap().insert(k, p.clone());
        Ok(p)
    }
}

/// S(Q,θ) = ∐ ∇(Q,kθ) ∩ Z^{Q₁} for acyclic Q; by normality S_k is exactly
/// the set of lattice points of ∇(Q,kθ).
#[derive(Debug)]
pub struct GradedSemigroup {
    pub quiver: Quiver,
    pub weight: Weight,
    generators: Vec<IntFlow>,
    cache: PieceCache,
    limits: Limits,
}

impl GradedSemigroup {
    pub fn new(quiver: Quiver, weight: Weight) -> Result<GradedSemigroup> {
        GradedSemigroup::with_limits(quiver, weight, Limits::default())
    }

    pub fn with_limits(quiver: Quiver, weight: Weight, limits: Limits) -> Result<GradedSemigroup> {
        if !quiver.is_acyclic() {
            let why = if weight.iter().any(|&t| t != 0) {
                "quiver with oriented cycles and non-zero weight (quasi-projective case)"
            } else {
                "quiver with oriented cycles has no degree-one generation; use the affine relation degree"
            };
            return Err(Error::UnsupportedCase(why.into()));
        }
        if weight.len() != quiver.vertex_count() {
            return Err(Error::WeightMismatch(format!(
                "expected {} values, got {}",
                quiver.vertex_count(),
                weight.len()
            )));
        }
        let generators = lattice_points_with(&quiver, &weight, 1, &limits)?;
        Ok(GradedSemigroup { quiver, weight, generators, cache: PieceCache::default(), limits })
    }

    /// dim ∇(Q,θ), or `None` if the polytope is empty.
    pub fn dimension(&self) -> Option<usize> {
        if self.generators.is_empty() {
            return None;
        }
        dimension(&self.quiver, &self.weight).ok()
    }

    /// Horizon used when none is given: max(dim + 1, r + 1).
    pub fn default_horizon(&self, r: u32) -> u32 {
        let d = self.dimension().map_or(0, |d| d as u32 + 1);
        d.max(r + 1)
    }
}

impl GradedMonoid for GradedSemigroup {
    fn generators(&self) -> &[IntFlow] {
        &self.generators
    }

    fn piece(&self, k: u32) -> Result<Arc<Vec<IntFlow>>> {
        self.cache.get_or(k, || {
            if k > 0 && self.generators.is_empty() {
                return Ok(Vec::new());
            }
            lattice_points_with(&self.quiver, &self.weight, k, &self.limits)
        })
    }

    fn contains(&self, x: &[i64], k: u32) -> Result<bool> {
        if k > 0 && self.generators.is_empty() {
            return Ok(false);
        }
        Ok(nonneg(x) && self.quiver.is_flow(&self.weight, k as i64, x))
    }
}

/// Generators dividing an element s of degree k, joined when their sum
/// divides s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorGraph {
    pub element: IntFlow,
    pub degree: u32,
    /// Generator indices, increasing.
    pub nodes: Vec<usize>,
    /// Pairs of generator indices `(m, n)` with `m < n`.
    pub edges: Vec<(usize, usize)>,
    /// Components as generator index lists, ordered by smallest member.
    pub components: Vec<Vec<usize>>,
}

impl DivisorGraph {
    pub fn is_connected(&self) -> bool {
        self.components.len() <= 1
    }
}

fn divisors<S: GradedMonoid + ?Sized>(s: &S, x: &[i64], k: u32) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, g) in s.generators().iter().enumerate() {
        let rest = sub(x, g);
        if nonneg(&rest) && s.contains(&rest, k - 1)? {
            out.push(i);
        }
    }
    Ok(out)
}

fn joined<S: GradedMonoid + ?Sized>(s: &S, x: &[i64], k: u32, m: usize, n: usize) -> Result<bool> {
    let g = s.generators();
    let rest: Vec<i64> = x.iter().zip(&g[m]).zip(&g[n]).map(|((a, b), c)| a - b - c).collect();
    Ok(nonneg(&rest) && s.contains(&rest, k - 2)?)
}

pub fn divisor_graph<S: GradedMonoid + ?Sized>(s: &S, x: &[i64], k: u32) -> Result<DivisorGraph> {
    if k < 2 {
        return Err(Error::UnsupportedCase("divisor graphs are defined in degree at least 2".into()));
    }
    if !s.contains(x, k)? {
        return Err(Error::NotInSemigroup(k));
    }
    let nodes = divisors(s, x, k)?;
    let mut edges = Vec::new();
    let mut dsu = Dsu::new(nodes.len());
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if joined(s, x, k, nodes[i], nodes[j])? {
                edges.push((nodes[i], nodes[j]));
                dsu.union(i, j);
            }
        }
    }
    let components = dsu.groups().into_iter().map(|c| c.into_iter().map(|i| nodes[i]).collect()).collect();
    Ok(DivisorGraph { element: x.to_vec(), degree: k, nodes, edges, components })
}

/// Connectivity by breadth-first search, stopping once every divisor is
/// reached.
fn is_connected_at<S: GradedMonoid + ?Sized>(s: &S, x: &[i64], k: u32) -> Result<bool> {
    let nodes = divisors(s, x, k)?;
    if nodes.len() <= 1 {
        return Ok(true);
    }
    let mut seen = vec![false; nodes.len()];
    seen[0] = true;
    let mut reached = 1;
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        for j in 0..nodes.len() {
            if !seen[j] && joined(s, x, k, nodes[i], nodes[j])? {
                seen[j] = true;
                reached += 1;
                if reached == nodes.len() {
                    return Ok(true);
                }
                queue.push_back(j);
            }
        }
    }
    Ok(false)
}

/// A factorization of `x ∈ S_k` into k generators, peeling the smallest
/// divisor first (restricted to `first` for the first step, if given).
pub fn greedy_factorization<S: GradedMonoid + ?Sized>(
    s: &S,
    x: &[i64],
    k: u32,
    first: Option<usize>,
) -> Result<Option<Vec<usize>>> {
    let mut rest = x.to_vec();
    let mut out = Vec::with_capacity(k as usize);
    for j in (1..=k).rev() {
        let pick = match (j == k, first) {
            (true, Some(f)) => {
                let r = sub(&rest, &s.generators()[f]);
                (nonneg(&r) && s.contains(&r, j - 1)?).then_some(f)
            }
            _ => {
                let mut found = None;
                for (i, g) in s.generators().iter().enumerate() {
                    let r = sub(&rest, g);
                    if nonneg(&r) && s.contains(&r, j - 1)? {
                        found = Some(i);
                        break;
                    }
                }
                found
            }
        };
        let Some(i) = pick else { return Ok(None) };
        rest = sub(&rest, &s.generators()[i]);
        out.push(i);
    }
    out.sort_unstable();
    Ok(Some(out))
}

/// t^left − t^right with both sides of degree k and image s.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinomialGen {
    pub degree: u32,
    pub image: IntFlow,
    /// Sorted generator indices.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl BinomialGen {
    pub fn to_json(&self) -> Value {
        json!({ "degree": self.degree, "image": self.image, "left": self.left, "right": self.right })
    }
}

fn binomials_at<S: GradedMonoid + ?Sized>(s: &S, x: &[i64], k: u32) -> Result<Vec<BinomialGen>> {
    let g = divisor_graph(s, x, k)?;
    if g.is_connected() {
        return Ok(Vec::new());
    }
    let reps: Vec<Vec<usize>> = g
        .components
        .iter()
        .map(|c| {
            greedy_factorization(s, x, k, Some(c[0]))?
                .ok_or_else(|| Error::CrossCheck("divisor without a cofactor factorization".into()))
        })
        .collect::<Result<_>>()?;
    Ok(reps[1..]
        .iter()
        .map(|r| BinomialGen { degree: k, image: x.to_vec(), left: reps[0].clone(), right: r.clone() })
        .collect())
}

/// Minimal binomial generators of degree ≤ `max_degree`: at every s with
/// c(s) > 1 divisor-graph components, c(s) − 1 binomials pairing the first
/// component's representative with each other one. Ordered by (k, s).
pub fn minimal_generators<S: GradedMonoid + ?Sized>(s: &S, max_degree: u32) -> Result<Vec<BinomialGen>> {
    let mut out = Vec::new();
    for k in 2..=max_degree {
        let piece = s.piece(k)?;
        s.piece(k - 1)?;
        let parts: Vec<Result<Vec<BinomialGen>>> = piece.par_iter().map(|x| binomials_at(s, x, k)).collect();
        for p in parts {
            out.extend(p?);
        }
    }
    Ok(out)
}

/// An element of degree > r whose divisor graph is disconnected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub degree: u32,
    pub element: IntFlow,
    pub components: Vec<Vec<usize>>,
}

/// Outcome of checking "generated in degree ≤ r" up to a finite horizon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certification {
    pub bound: u32,
    pub horizon: u32,
    pub verdict: bool,
    pub violation: Option<Violation>,
    /// Elements examined, per degree r+1..=horizon.
    pub checked: Vec<usize>,
}

impl Certification {
    pub fn to_json(&self) -> Value {
        json!({
            "bound": self.bound,
            "horizon": self.horizon,
            "verdict": self.verdict,
            "checked": self.checked,
            "violation": self.violation.as_ref().map(|v| json!({
                "degree": v.degree,
                "element": v.element,
                "components": v.components,
            })),
            "assumption": if self.horizon > self.bound {
                format!(
                    "divisor graphs checked only in degrees {}..={}; higher degrees are not examined",
                    self.bound + 1,
                    self.horizon
                )
            } else {
                "horizon does not exceed the bound; no degree was examined".to_string()
            },
        })
    }
}

/// Checks that every s of degree k ∈ (r, horizon] has a connected divisor
/// graph; reports the first violation in (k, s) order. An empty range is
/// vacuously certified.
pub fn certify_degree_bound<S: GradedMonoid + ?Sized>(s: &S, r: u32, horizon: u32) -> Result<Certification> {
    let mut checked = Vec::new();
    for k in (r + 1).max(2)..=horizon {
        let piece = s.piece(k)?;
        s.piece(k - 1)?;
        s.piece(k - 2)?;
        checked.push(piece.len());
        let bad = piece.par_iter().find_map_first(|x| match is_connected_at(s, x, k) {
            Ok(true) => None,
            Ok(false) => Some(Ok(x.clone())),
            Err(e) => Some(Err(e)),
        });
        if let Some(x) = bad {
            let x = x?;
            let g = divisor_graph(s, &x, k)?;
            return Ok(Certification {
                bound: r,
                horizon,
                verdict: false,
                violation: Some(Violation { degree: k, element: x, components: g.components }),
                checked,
            });
        }
    }
    Ok(Certification { bound: r, horizon, verdict: true, violation: None, checked })
}

/// Q′: the parallel arrows α₁, α₂ collapsed to one arrow, which keeps α₁'s id.
pub fn collapse_parallel(q: &Quiver, a1: usize, a2: usize) -> Result<Quiver> {
    let (x, y) = (&q.arrows()[a1], &q.arrows()[a2]);
    if a1 == a2 || x.tail != y.tail || x.head != y.head {
        return Err(Error::NotParallel(x.id.clone(), y.id.clone()));
    }
    Ok(q.without_arrow(a2))
}

/// π: Z^{Q₁} → Z^{Q′₁}, adding the α₂ coordinate onto α₁.
fn collapse_flow(x: &[i64], a1: usize, a2: usize) -> IntFlow {
    let mut y = x.to_vec();
    y[a1] += y[a2];
    y.remove(a2);
    y
}

/// Lifts generators of ker(φ′) for the collapsed quiver Q′ (indices into
/// the degree-one points of Q′) to generators of ker(φ) for Q: every
/// ψ_s(u) − ψ_s(v) over the lifts s of each image, plus the quadratic
/// swaps t_m t_n − t_{m+ε₂−ε₁} t_{n+ε₁−ε₂}. Trivial and repeated binomials
/// are dropped; the result generates but need not be minimal.
pub fn lift_generators(
    q: &Quiver,
    theta: &[i64],
    alphas: (usize, usize),
    gens_prime: &[BinomialGen],
) -> Result<Vec<BinomialGen>> {
    let (a1, a2) = alphas;
    let qp = collapse_parallel(q, a1, a2)?;
    let s = GradedSemigroup::new(q.clone(), theta.to_vec())?;
    let sp = GradedSemigroup::new(qp, theta.to_vec())?;
    let gens = s.generators();
    let index: BTreeMap<&IntFlow, usize> = gens.iter().enumerate().map(|(i, g)| (g, i)).collect();
    // α₁ in Q′ sits where α₁ sits in Q, shifted if α₂ came before it.
    let ap = if a2 < a1 { a1 - 1 } else { a1 };
    let mut seen: BTreeSet<(Vec<usize>, Vec<usize>)> = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |deg: u32, left: Vec<usize>, right: Vec<usize>, out: &mut Vec<BinomialGen>| {
        if left == right {
            return;
        }
        let key = if left < right { (left.clone(), right.clone()) } else { (right.clone(), left.clone()) };
        if !seen.insert(key) {
            return;
        }
        let mut image = vec![0; gens.first().map_or(0, |g| g.len())];
        for &i in &left {
            image = add(&image, &gens[i]);
        }
        out.push(BinomialGen { degree: deg, image, left, right });
    };
    // ψ_s(u): hand out s(α₁) greedily along the factors of u.
    let psi = |u: &[usize], s_a1: i64| -> Result<Vec<usize>> {
        let mut left = s_a1;
        let mut out = Vec::new();
        for &j in u {
            let m = &sp.generators()[j];
            let take = left.min(m[ap]);
            left -= take;
            let mut n = m.clone();
            n.insert(a2, m[ap] - take);
            n[a1] = take;
            let i = *index.get(&n).ok_or_else(|| Error::CrossCheck("lift is not a lattice point".into()))?;
            out.push(i);
        }
        out.sort_unstable();
        Ok(out)
    };
    for b in gens_prime {
        if b.left.iter().chain(&b.right).any(|&j| j >= sp.generators().len()) {
            return Err(Error::CrossCheck("generator index out of range for the collapsed quiver".into()));
        }
        for s_a1 in 0..=b.image[ap] {
            let l = psi(&b.left, s_a1)?;
            let r = psi(&b.right, s_a1)?;
            push(b.degree, l, r, &mut out);
        }
    }
    for (i, m) in gens.iter().enumerate() {
        if m[a1] == 0 {
            continue;
        }
        for (j, n) in gens.iter().enumerate() {
            if n[a2] == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[a1] -= 1;
            m2[a2] += 1;
            let mut n2 = n.clone();
            n2[a1] += 1;
            n2[a2] -= 1;
            let (Some(&i2), Some(&j2)) = (index.get(&m2), index.get(&n2)) else {
                return Err(Error::CrossCheck("swap leaves the polytope".into()));
            };
            let mut left = vec![i, j];
            left.sort_unstable();
            let mut right = vec![i2, j2];
            right.sort_unstable();
            push(2, left, right, &mut out);
        }
    }
    debug_assert!(out.iter().all(|b| {
        let sum = |v: &[usize]| v.iter().fold(vec![0; gens[0].len()], |acc, &i| add(&acc, &gens[i]));
        sum(&b.left) == sum(&b.right) && sp.contains(&collapse_flow(&sum(&b.left), a1, a2), b.degree).unwrap_or(false)
    }));
    Ok(out)
}

/// Sources and sinks of a bipartite quiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
}

/// Splits the vertices into sources and sinks. Isolated vertices are sinks
/// unless `hint` gives them a negative value.
pub fn bipartition(q: &Quiver, hint: Option<&[i64]>) -> Result<Bipartition> {
    let mut sources = Vec::new();
    let mut sinks = Vec::new();
    for v in 0..q.vertex_count() {
        let (i, o) = (q.in_degree(v), q.out_degree(v));
        let name = &q.vertices()[v];
        if i > 0 && o > 0 {
            return Err(Error::NotBipartite(format!("vertex `{name}` has incoming and outgoing arrows")));
        }
        let source = o > 0 || (i == 0 && hint.is_some_and(|h| h[v] < 0));
        if source {
            sources.push(v);
        } else {
            sinks.push(v);
        }
    }
    if sources.len() > sinks.len() {
        return Err(Error::NotBipartite(format!(
            "{} sources but only {} sinks",
            sources.len(),
            sinks.len()
        )));
    }
    Ok(Bipartition { sources, sinks })
}

/// One-sided matchings: exactly one arrow at each source, at most one at
/// each sink, as 0/1 vectors, sorted.
pub fn osm_lattice_points(q: &Quiver, bip: &Bipartition) -> Result<Vec<IntFlow>> {
    osm_lattice_points_with(q, bip, &Limits::default())
}

pub fn osm_lattice_points_with(q: &Quiver, bip: &Bipartition, limits: &Limits) -> Result<Vec<IntFlow>> {
    let mut outs: Vec<Vec<usize>> = vec![Vec::new(); q.vertex_count()];
    for (i, a) in q.arrows().iter().enumerate() {
        outs[a.tail].push(i);
    }
    fn rec(
        q: &Quiver,
        bip: &Bipartition,
        outs: &[Vec<usize>],
        pos: usize,
        used: &mut [bool],
        x: &mut Vec<i64>,
        out: &mut Vec<IntFlow>,
        budget: &mut Budget,
    ) -> Result<()> {
        budget.tick()?;
        if pos == bip.sources.len() {
            out.push(x.clone());
            return Ok(());
        }
        for &a in &outs[bip.sources[pos]] {
            let h = q.arrows()[a].head;
            if used[h] {
                continue;
            }
            used[h] = true;
            x[a] = 1;
            rec(q, bip, outs, pos + 1, used, x, out, budget)?;
            x[a] = 0;
            used[h] = false;
        }
        Ok(())
    }
    let mut out = Vec::new();
    let mut budget = Budget::new(limits, "one-sided matching enumeration");
    rec(
        q,
        bip,
        &outs,
        0,
        &mut vec![false; q.vertex_count()],
        &mut vec![0; q.arrow_count()],
        &mut out,
        &mut budget,
    )?;
    out.sort();
    Ok(out)
}

/// The monoid generated by the one-sided matchings, graded by the number
/// of matchings; pieces are built as sumsets.
#[derive(Debug)]
pub struct OsmSemigroup {
    generators: Vec<IntFlow>,
    cache: PieceCache,
    limits: Limits,
}

impl OsmSemigroup {
    pub fn new(q: &Quiver, bip: &Bipartition) -> Result<OsmSemigroup> {
        OsmSemigroup::with_limits(q, bip, Limits::default())
    }

    pub fn with_limits(q: &Quiver, bip: &Bipartition, limits: Limits) -> Result<OsmSemigroup> {
        let generators = osm_lattice_points_with(q, bip, &limits)?;
        Ok(OsmSemigroup { generators, cache: PieceCache::default(), limits })
    }
}

impl GradedMonoid for OsmSemigroup {
    fn generators(&self) -> &[IntFlow] {
        &self.generators
    }

    fn piece(&self, k: u32) -> Result<Arc<Vec<IntFlow>>> {
        if k == 0 {
            let m = self.generators.first().map_or(0, |g| g.len());
            return Ok(Arc::new(vec![vec![0; m]]));
        }
        if k == 1 {
            return Ok(Arc::new(self.generators.clone()));
        }
        if let Some(p) = self.cache.0.lock().unwrap().get(&k) {
            return Ok(p.clone());
        }
        let prev = self.piece(k - 1)?;
        self.cache.get_or(k, || {
            let mut set = BTreeSet::new();
            let mut budget = Budget::new(&self.limits, "semigroup piece construction");
            for x in prev.iter() {
                for g in &self.generators {
                    budget.tick()?;
                    set.insert(add(x, g));
                }
            }
            Ok(set.into_iter().collect())
        })
    }

    fn contains(&self, x: &[i64], k: u32) -> Result<bool> {
        if !nonneg(x) {
            return Ok(false);
        }
        Ok(self.piece(k)?.binary_search_by(|p| p.as_slice().cmp(x)).is_ok())
    }
}

/// The equal-parts completion: new sources, each with an arrow to every
/// sink, until sources and sinks balance; weight −1 on sources, +1 on sinks.
pub fn osm_completion(q: &Quiver, bip: &Bipartition) -> Result<(Quiver, Weight)> {
    let mut names = q.vertices().to_vec();
    let mut weight = vec![0; names.len()];
    for &v in &bip.sources {
        weight[v] = -1;
    }
    for &v in &bip.sinks {
        weight[v] = 1;
    }
    let mut arrows: Vec<(String, usize, usize)> = q.arrows().iter().map(|a| (a.id.clone(), a.tail, a.head)).collect();
    let taken: BTreeSet<String> = names.iter().cloned().collect();
    let extra = bip.sinks.len() - bip.sources.len();
    for i in 1..=extra {
        let mut name = format!("z{i}");
        while taken.contains(&name) {
            name.push('\'');
        }
        let z = names.len();
        for &w in &bip.sinks {
            arrows.push((format!("{name}>{}", q.vertices()[w]), z, w));
        }
        names.push(name);
        weight.push(-1);
    }
    Quiver::from_indexed_weighted(names, arrows, weight)
}

/// Degree-3 certification for a one-sided matching semigroup, together
/// with the same certification on the completed quiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OsmCertificate {
    pub osm: Certification,
    pub completed: Certification,
}

impl OsmCertificate {
    pub fn verdict(&self) -> bool {
        self.osm.verdict
    }
}

/// Default horizon for one-sided matching certification.
pub const OSM_HORIZON: u32 = 5;

pub fn osm_certify_degree3(q: &Quiver, bip: &Bipartition, horizon: u32) -> Result<OsmCertificate> {
    osm_certify_degree3_with(q, bip, horizon, &Limits::default())
}

pub fn osm_certify_degree3_with(q: &Quiver, bip: &Bipartition, horizon: u32, limits: &Limits) -> Result<OsmCertificate> {
    let osm = certify_degree_bound(&OsmSemigroup::with_limits(q, bip, *limits)?, 3, horizon)?;
    let (cq, cw) = osm_completion(q, bip)?;
    let completed = certify_degree_bound(&GradedSemigroup::with_limits(cq, cw, *limits)?, 3, horizon)?;
    if osm.verdict != completed.verdict {
        return Err(Error::CrossCheck(
            "one-sided matching and completed-quiver certifications disagree".into(),
        ));
    }
    Ok(OsmCertificate { osm, completed })
}

/// Largest k such that c₁ + c₂ = e₁ + … + e_k for primitive cycles with
/// {e_i} ≠ {c₁, c₂}, over all pairs c₁, c₂; 0 when no pair has another
/// decomposition.
pub fn affine_relation_degree(q: &Quiver) -> Result<usize> {
    affine_relation_degree_with(q, &Limits::default())
}

pub fn affine_relation_degree_with(q: &Quiver, limits: &Limits) -> Result<usize> {
    let cycles: Vec<IntFlow> = primitive_cycles(q).iter().map(|c| c.vector(q)).collect();
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); q.arrow_count()];
    for (i, c) in cycles.iter().enumerate() {
        for (a, &v) in c.iter().enumerate() {
            if v > 0 {
                containing[a].push(i);
            }
        }
    }
    // Peels the cycle through the first arrow still in use; returns the
    // largest decomposition other than `avoid` (as a sorted index list).
    fn peel(
        rest: &mut Vec<i64>,
        cycles: &[IntFlow],
        containing: &[Vec<usize>],
        chosen: &mut Vec<usize>,
        avoid: &[usize],
        budget: &mut Budget,
    ) -> Result<usize> {
        budget.tick()?;
        let Some(a) = rest.iter().position(|&v| v > 0) else {
            let mut sorted = chosen.clone();
            sorted.sort_unstable();
            return Ok(if sorted == avoid { 0 } else { chosen.len() });
        };
        let mut best = 0;
        for &c in &containing[a] {
            if cycles[c].iter().zip(rest.iter()).any(|(x, r)| x > r) {
                continue;
            }
            for (r, x) in rest.iter_mut().zip(&cycles[c]) {
                *r -= x;
            }
            chosen.push(c);
            let got = peel(rest, cycles, containing, chosen, avoid, budget);
            chosen.pop();
            for (r, x) in rest.iter_mut().zip(&cycles[c]) {
                *r += x;
            }
            best = best.max(got?);
        }
        Ok(best)
    }
    let mut budget = Budget::new(limits, "cycle decomposition");
    let mut best = 0;
    for i in 0..cycles.len() {
        for j in i..cycles.len() {
            let mut rest = add(&cycles[i], &cycles[j]);
            best = best.max(peel(&mut rest, &cycles, &containing, &mut Vec::new(), &[i, j], &mut budget)?);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{affine_degree, bipartite_weight, complete_bipartite, cycle, kronecker, quiver_a};

    fn k33() -> GradedSemigroup {
        let q = complete_bipartite(3, 3);
        let w = bipartite_weight(&q);
        GradedSemigroup::new(q, w).unwrap()
    }

    /// Brute force: all multisets of k generators, grouped by sum.
    fn fibres(s: &GradedSemigroup, k: usize) -> BTreeMap<IntFlow, Vec<Vec<usize>>> {
        let g = s.generators();
        let mut out: BTreeMap<IntFlow, Vec<Vec<usize>>> = BTreeMap::new();
        fn rec(g: &[IntFlow], k: usize, from: usize, cur: &mut Vec<usize>, out: &mut BTreeMap<IntFlow, Vec<Vec<usize>>>) {
            if cur.len() == k {
                let sum = cur.iter().fold(vec![0; g[0].len()], |acc, &i| add(&acc, &g[i]));
                out.entry(sum).or_default().push(cur.clone());
                return;
            }
            for i in from..g.len() {
                cur.push(i);
                rec(g, k, i, cur, out);
                cur.pop();
            }
        }
        rec(g, k, 0, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn kronecker_divisor_graph() {
        let s = GradedSemigroup::new(kronecker(), vec![-1, 1]).unwrap();
        let g = divisor_graph(&s, &[1, 1], 2).unwrap();
        assert_eq!(g.nodes.len(), 2);
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.components.len(), 1);
        assert_eq!(divisor_graph(&s, &[1, 2], 2).unwrap_err(), Error::NotInSemigroup(2));
        assert!(minimal_generators(&s, 3).unwrap().is_empty());
        let single = divisor_graph(&s, &[3, 0], 3).unwrap();
        assert_eq!((single.nodes.len(), single.components.len()), (1, 1));
    }

    #[test]
    fn birkhoff_relation() {
        let s = k33();
        assert_eq!(s.generators().len(), 6);
        let gens = minimal_generators(&s, 3).unwrap();
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0].degree, 3);
        // even and odd permutation matchings
        let g = s.generators();
        let sum = |v: &[usize]| v.iter().fold(vec![0; 9], |acc, &i| add(&acc, &g[i]));
        assert_eq!(sum(&gens[0].left), sum(&gens[0].right));
        let all_ones = vec![1; 9];
        assert_eq!(gens[0].image, all_ones);
        let c = certify_degree_bound(&s, 2, 4).unwrap();
        assert!(!c.verdict);
        assert_eq!(c.violation.unwrap().degree, 3);
        assert!(certify_degree_bound(&s, 3, 5).unwrap().verdict);
    }

    #[test]
    fn birkhoff_divisor_graph_against_brute_force() {
        let s = k33();
        let fib = fibres(&s, 3);
        let ones = vec![1; 9];
        let facts = &fib[&ones];
        // every generator dividing s appears in some factorization
        let g = divisor_graph(&s, &ones, 3).unwrap();
        let mut dividing: Vec<usize> = facts.iter().flatten().copied().collect();
        dividing.sort_unstable();
        dividing.dedup();
        assert_eq!(g.nodes, dividing);
        assert_eq!(g.components.len(), 2);
        for comp in &g.components {
            assert_eq!(comp.len(), 3);
        }
    }

    #[test]
    fn quiver_a_triangle_has_no_relations() {
        let s = GradedSemigroup::new(quiver_a(), vec![-1, 1, 1, 1, -2]).unwrap();
        assert_eq!(s.generators().len(), 3);
        assert!(minimal_generators(&s, 3).unwrap().is_empty());
    }

    #[test]
    fn generator_count_law() {
        let s = GradedSemigroup::new(quiver_a(), vec![-3, 2, 2, 2, -3]).unwrap();
        let gens = minimal_generators(&s, 3).unwrap();
        for k in 2..=3 {
            let expected: usize = s
                .piece(k)
                .unwrap()
                .iter()
                .map(|x| divisor_graph(&s, x, k).unwrap().components.len() - 1)
                .sum();
            assert_eq!(gens.iter().filter(|b| b.degree == k).count(), expected);
        }
    }

    #[test]
    fn empty_semigroup_certifies() {
        let s = GradedSemigroup::new(kronecker(), vec![1, 1]).unwrap();
        assert!(s.generators().is_empty());
        assert!(certify_degree_bound(&s, 3, 4).unwrap().verdict);
        let vacuous = certify_degree_bound(&k33(), 3, 2).unwrap();
        assert!(vacuous.verdict && vacuous.checked.is_empty());
    }

    #[test]
    fn cyclic_quivers_are_refused() {
        assert!(matches!(GradedSemigroup::new(cycle(2), vec![1, -1]), Err(Error::UnsupportedCase(_))));
    }

    #[test]
    fn kronecker_lift() {
        let q = kronecker();
        let theta = vec![-2, 2];
        let qp = collapse_parallel(&q, 0, 1).unwrap();
        let sp = GradedSemigroup::new(qp, theta.clone()).unwrap();
        assert_eq!(sp.generators().len(), 1);
        let gp = minimal_generators(&sp, 3).unwrap();
        assert!(gp.is_empty());
        let lifted = lift_generators(&q, &theta, (0, 1), &gp).unwrap();
        assert_eq!(lifted.len(), 1);
        assert_eq!(lifted[0].degree, 2);
        let s = GradedSemigroup::new(q.clone(), theta.clone()).unwrap();
        assert_eq!(minimal_generators(&s, 3).unwrap().len(), 1);
        let a = quiver_a();
        assert_eq!(lift_generators(&a, &[-1, 1, 1, 1, -2], (0, 1), &[]).unwrap_err(), Error::NotParallel("a1".into(), "a2".into()));
    }

    #[test]
    fn osm_counts() {
        let k12 = complete_bipartite(1, 2);
        let bip = bipartition(&k12, None).unwrap();
        assert_eq!(osm_lattice_points(&k12, &bip).unwrap().len(), 2);
        let k23 = complete_bipartite(2, 3);
        let bip = bipartition(&k23, None).unwrap();
        assert_eq!(osm_lattice_points(&k23, &bip).unwrap().len(), 6);
        let iso = Quiver::new(["x", "y1", "y2", "x2"], [("a", "x", "y1")]).unwrap();
        let bip = bipartition(&iso, Some(&[-1, 1, 1, -1])).unwrap();
        assert_eq!(bip.sources.len(), 2);
        assert!(osm_lattice_points(&iso, &bip).unwrap().is_empty());
        assert!(matches!(bipartition(&cycle(2), None), Err(Error::NotBipartite(_))));
    }

    #[test]
    fn osm_certificates() {
        let k23 = complete_bipartite(2, 3);
        let bip = bipartition(&k23, None).unwrap();
        assert!(osm_certify_degree3(&k23, &bip, 5).unwrap().verdict());
        let single = complete_bipartite(1, 3);
        let bip = bipartition(&single, None).unwrap();
        assert!(osm_certify_degree3(&single, &bip, 4).unwrap().verdict());
        // K(3,3): perfect matchings, with the degree-3 relation present
        let k33q = complete_bipartite(3, 3);
        let bip = bipartition(&k33q, None).unwrap();
        let s = OsmSemigroup::new(&k33q, &bip).unwrap();
        assert_eq!(minimal_generators(&s, 3).unwrap().len(), 1);
        assert!(!certify_degree_bound(&s, 2, 3).unwrap().verdict);
        assert!(osm_certify_degree3(&k33q, &bip, 4).unwrap().verdict());
    }

    #[test]
    fn osm_agrees_with_flow_semigroup_on_perfect_matchings() {
        let q = complete_bipartite(2, 2);
        let bip = bipartition(&q, None).unwrap();
        let osm = OsmSemigroup::new(&q, &bip).unwrap();
        let flow = GradedSemigroup::new(q.clone(), bipartite_weight(&q)).unwrap();
        for k in 0..=4 {
            assert_eq!(osm.piece(k).unwrap(), flow.piece(k).unwrap());
        }
    }

    #[test]
    fn affine_degrees() {
        for d in 3..=5 {
            assert_eq!(affine_relation_degree(&affine_degree(d)).unwrap(), d);
        }
        assert_eq!(affine_relation_degree(&cycle(2)).unwrap(), 0);
    }
}
