//! Quiver polyhedra ∇(Q,θ) = {x ≥ 0 : F(x) = θ}.

use std::collections::{BTreeMap, HashMap};

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{rank, rat, LinearProgram, LpOutcome, Rat};
use crate::quiver::{euler_characteristic, primitive_cycles, Dsu, IntFlow, Quiver, Weight};
use crate::{Budget, Limits};

fn check_weight(q: &Quiver, theta: &[i64]) -> Result<()> {
    if theta.len() != q.vertex_count() {
        return Err(Error::WeightMismatch(format!(
            "expected {} values, got {}",
            q.vertex_count(),
            theta.len()
        )));
    }
    Ok(())
}

/// Lattice points of ∇(Q, kθ) for acyclic Q, sorted lexicographically.
///
/// Returns an empty list when θ does not sum to zero.
pub fn lattice_points(q: &Quiver, theta: &[i64], k: u32) -> Result<Vec<IntFlow>> {
    lattice_points_with(q, theta, k, &Limits::default())
}

pub fn lattice_points_with(q: &Quiver, theta: &[i64], k: u32, limits: &Limits) -> Result<Vec<IntFlow>> {
    check_weight(q, theta)?;
    let order = q.topological_order().ok_or(Error::UnboundedPolyhedron)?;
    if theta.iter().sum::<i64>() != 0 {
        return Ok(Vec::new());
    }
    let k = k as i64;
    let n = q.vertex_count();
    let mut outs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, a) in q.arrows().iter().enumerate() {
        outs[a.tail].push(i);
    }
    let target: Vec<i64> = theta.iter().map(|t| k * t).collect();
    // Flow out of v ends at descendants with positive weight, which bounds
    // what v can absorb.
    let cap = (0..n)
        .map(|v| {
            let mut seen = vec![false; n];
            let mut stack = outs[v].iter().map(|&a| q.arrows()[a].head).collect::<Vec<_>>();
            let mut room = target[v];
            while let Some(w) = stack.pop() {
                if std::mem::replace(&mut seen[w], true) {
                    continue;
                }
                room += target[w].max(0);
                stack.extend(outs[w].iter().map(|&a| q.arrows()[a].head));
            }
            room
        })
        .collect();
    let mut st = Enum {
        q,
        target,
        cap,
        order,
        outs,
        inflow: vec![0; n],
        x: vec![0; q.arrow_count()],
        out: Vec::new(),
        budget: Budget::new(limits, "lattice point backtracking"),
    };
    st.vertex(0)?;
    let mut out = st.out;
    out.sort();
    Ok(out)
}

struct Enum<'a> {
    q: &'a Quiver,
    target: Vec<i64>,
    cap: Vec<i64>,
    order: Vec<usize>,
    outs: Vec<Vec<usize>>,
    inflow: Vec<i64>,
    x: Vec<i64>,
    out: Vec<IntFlow>,
    budget: Budget,
}

impl Enum<'_> {
    // Vertices are visited in topological order, so all inflow at `v` is fixed
    // and its outflow is forced to inflow − kθ(v).
    fn vertex(&mut self, pos: usize) -> Result<()> {
        self.budget.tick()?;
        if pos == self.order.len() {
            self.out.push(self.x.clone());
            return Ok(());
        }
        let v = self.order[pos];
        let need = self.inflow[v] - self.target[v];
        if need < 0 || (need > 0 && self.outs[v].is_empty()) {
            return Ok(());
        }
        self.spread(pos, v, 0, need)
    }

    fn spread(&mut self, pos: usize, v: usize, j: usize, left: i64) -> Result<()> {
        let arrows = &self.outs[v];
        if j == arrows.len() {
            return if left == 0 { self.vertex(pos + 1) } else { Ok(()) };
        }
        let a = arrows[j];
        let head = self.q.arrows()[a].head;
        let last = j + 1 == arrows.len();
        let lo = if last { left } else { 0 };
        let hi = left.min(self.cap[head] - self.inflow[head]);
        for val in lo..=hi {
            self.budget.tick()?;
            self.x[a] = val;
            self.inflow[head] += val;
            let r = self.spread(pos, v, j + 1, left - val);
            self.inflow[head] -= val;
            r?;
        }
        self.x[a] = 0;
        Ok(())
    }
}

/// Flow polytope data: weight θ with lower and upper bounds per arrow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedFlowSpec {
    pub quiver: Quiver,
    pub weight: Weight,
    pub lower: Vec<i64>,
    pub upper: Vec<i64>,
}

impl BoundedFlowSpec {
    pub fn new(quiver: Quiver, weight: Weight, lower: Vec<i64>, upper: Vec<i64>) -> Result<Self> {
        check_weight(&quiver, &weight)?;
        let m = quiver.arrow_count();
        if lower.len() != m || upper.len() != m {
            return Err(Error::InvalidQuiver("bounds must be given for every arrow".into()));
        }
        if lower.iter().zip(&upper).any(|(&l, &u)| l < 0 || l > u) {
            return Err(Error::InvalidQuiver("bounds must satisfy 0 ≤ l ≤ u".into()));
        }
        Ok(BoundedFlowSpec { quiver, weight, lower, upper })
    }
}

/// Integer flows with divergence θ and l ≤ x ≤ u, sorted.
pub fn bounded_lattice_points(spec: &BoundedFlowSpec) -> Vec<IntFlow> {
    let q = &spec.quiver;
    let n = q.vertex_count();
    if spec.weight.iter().sum::<i64>() != 0 {
        return Vec::new();
    }
    // After assigning arrow i, vertices whose last incident arrow is i are final.
    let mut last: Vec<Option<usize>> = vec![None; n];
    for (i, a) in q.arrows().iter().enumerate() {
        last[a.tail] = Some(i);
        last[a.head] = Some(i);
    }
    if (0..n).any(|v| last[v].is_none() && spec.weight[v] != 0) {
        return Vec::new();
    }
    let mut closes: Vec<Vec<usize>> = vec![Vec::new(); q.arrow_count()];
    for v in 0..n {
        if let Some(i) = last[v] {
            closes[i].push(v);
        }
    }
    fn rec(
        spec: &BoundedFlowSpec,
        closes: &[Vec<usize>],
        i: usize,
        div: &mut [i64],
        x: &mut Vec<i64>,
        out: &mut Vec<IntFlow>,
    ) {
        let q = &spec.quiver;
        if i == q.arrow_count() {
            out.push(x.clone());
            return;
        }
        let a = &q.arrows()[i];
        for val in spec.lower[i]..=spec.upper[i] {
            div[a.head] += val;
            div[a.tail] -= val;
            x[i] = val;
            if closes[i].iter().all(|&v| div[v] == spec.weight[v]) {
                rec(spec, closes, i + 1, div, x, out);
            }
            div[a.head] -= val;
            div[a.tail] += val;
        }
    }
    let mut out = Vec::new();
    let mut div = vec![0; n];
    let mut x = vec![0; q.arrow_count()];
    rec(spec, &closes, 0, &mut div, &mut x, &mut out);
    out.sort();
    out
}

fn gadget_names(a: &str) -> [String; 5] {
    [format!("v[{a}]"), format!("w[{a}]"), format!("{a}.1"), format!("{a}.2"), format!("{a}.3")]
}

/// Converts a flow polytope into an isomorphic quiver polytope on an
/// acyclic quiver: shift by the lower bounds, then replace every arrow
/// a: s → t by s → v[a] ← w[a] → t with θ′(v[a]) = u(a) − l(a) = −θ′(w[a]).
pub fn to_quiver_polytope(spec: &BoundedFlowSpec) -> (Quiver, Weight) {
    let q = &spec.quiver;
    let mut names: Vec<String> = q.vertices().to_vec();
    let mut theta: Vec<i64> = spec.weight.clone();
    for (i, a) in q.arrows().iter().enumerate() {
        theta[a.head] -= spec.lower[i];
        theta[a.tail] += spec.lower[i];
    }
    let mut arrows = Vec::new();
    for (i, a) in q.arrows().iter().enumerate() {
        let [va, wa, a1, a2, a3] = gadget_names(&a.id);
        let (vi, wi) = (names.len(), names.len() + 1);
        names.push(va);
        names.push(wa);
        let cap = spec.upper[i] - spec.lower[i];
        theta.push(cap);
        theta.push(-cap);
        arrows.push((a1, a.tail, vi));
        arrows.push((a2, wi, vi));
        arrows.push((a3, wi, a.head));
    }
    let out = Quiver::from_indexed(names.clone(), arrows).expect("gadget ids are fresh");
    let mut w = vec![0; out.vertex_count()];
    for (name, t) in names.iter().zip(theta) {
        w[out.vertex_index(name).unwrap()] = t;
    }
    (out, w)
}

/// Image of a lattice point of the flow polytope under [`to_quiver_polytope`].
pub fn gadget_image(spec: &BoundedFlowSpec, gadget: &Quiver, x: &[i64]) -> IntFlow {
    let mut y = vec![0; gadget.arrow_count()];
    for (i, a) in spec.quiver.arrows().iter().enumerate() {
        let [_, _, a1, a2, a3] = gadget_names(&a.id);
        let shifted = x[i] - spec.lower[i];
        y[gadget.arrow_index(&a1).unwrap()] = shifted;
        y[gadget.arrow_index(&a2).unwrap()] = spec.upper[i] - x[i];
        y[gadget.arrow_index(&a3).unwrap()] = shifted;
    }
    y
}

/// Inverse of [`gadget_image`].
pub fn gadget_preimage(spec: &BoundedFlowSpec, gadget: &Quiver, y: &[i64]) -> IntFlow {
    spec.quiver
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| y[gadget.arrow_index(&gadget_names(&a.id)[2]).unwrap()] + spec.lower[i])
        .collect()
}

/// Vertices of ∇(Q,θ) via the stable-forest characterization: m is a vertex
/// iff the components of supp(m) are θ-stable trees, and every spanning
/// forest of θ-stable trees carries exactly one such m.
///
/// For a tree, θ-stability is equivalent to the unique tree flow being
/// strictly positive on every arrow: a successor-closed set has weight equal
/// to the total flow entering it.
pub fn vertices(q: &Quiver, theta: &[i64]) -> Result<Vec<IntFlow>> {
    check_weight(q, theta)?;
    if theta.iter().sum::<i64>() != 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    forests(q, 0, &mut Dsu::new(q.vertex_count()), &mut chosen, &mut |forest| {
        if let Some(m) = forest_flow(q, theta, forest) {
            out.push(m);
        }
    });
    out.sort();
    Ok(out)
}

fn forests(q: &Quiver, i: usize, dsu: &mut Dsu, chosen: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
    if i == q.arrow_count() {
        visit(chosen);
        return;
    }
    forests(q, i + 1, dsu, chosen, visit);
    let a = &q.arrows()[i];
    if dsu.find(a.tail) != dsu.find(a.head) {
        let mut next = dsu.clone();
        next.union(a.tail, a.head);
        chosen.push(i);
        forests(q, i + 1, &mut next, chosen, visit);
        chosen.pop();
    }
}

/// The unique flow supported on the forest, if it is positive on every
/// forest arrow (i.e. the forest consists of θ-stable trees).
pub fn forest_flow(q: &Quiver, theta: &[i64], forest: &[usize]) -> Option<IntFlow> {
    let x = forest_solution(q, theta, forest)?;
    forest.iter().all(|&a| x[a] > 0).then_some(x)
}

/// The unique x supported on the forest with F(x) = θ (entries of any
/// sign), or `None` if θ does not vanish on some tree.
pub fn forest_solution(q: &Quiver, theta: &[i64], forest: &[usize]) -> Option<IntFlow> {
    let n = q.vertex_count();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &i in forest {
        let a = &q.arrows()[i];
        adj[a.tail].push(i);
        adj[a.head].push(i);
    }
    let mut x = vec![0; q.arrow_count()];
    let mut seen = vec![false; n];
    let mut sub: Vec<i64> = theta.to_vec();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        // Iterative DFS; then settle arrows from the leaves up.
        let mut order = Vec::new();
        let mut parent_arrow = vec![usize::MAX; n];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &i in &adj[v] {
                let a = &q.arrows()[i];
                let w = if a.tail == v { a.head } else { a.tail };
                if !seen[w] {
                    seen[w] = true;
                    parent_arrow[w] = i;
                    stack.push(w);
                }
            }
        }
        for &v in order.iter().rev() {
            if v == root {
                if sub[v] != 0 {
                    return None;
                }
                continue;
            }
            let i = parent_arrow[v];
            let a = &q.arrows()[i];
            // The arrow into the subtree supplies its total weight.
            x[i] = if a.head == v { sub[v] } else { -sub[v] };
            let p = if a.head == v { a.tail } else { a.head };
            sub[p] += sub[v];
        }
    }
    Some(x)
}

/// Characteristic vectors of the primitive cycles: the Hilbert basis of the
/// recession cone.
pub fn recession_hilbert_basis(q: &Quiver) -> Vec<IntFlow> {
    primitive_cycles(q).iter().map(|c| c.vector(q)).collect()
}

pub(crate) fn flow_lp(q: &Quiver, theta: &[i64]) -> LinearProgram {
    let mut lp = LinearProgram::new(q.arrow_count());
    for (v, &t) in theta.iter().enumerate() {
        let row: Vec<i64> = q
            .arrows()
            .iter()
            .map(|a| (a.head == v) as i64 - (a.tail == v) as i64)
            .collect();
        lp.add_equality_i64(&row, t);
    }
    lp
}

fn unit(m: usize, a: usize) -> Vec<Rat> {
    (0..m).map(|i| rat((i == a) as i64)).collect()
}

/// max x(a) over ∇(Q,θ); `Ok(None)` when unbounded.
pub fn max_on_arrow(q: &Quiver, theta: &[i64], a: usize) -> Result<Option<Rat>> {
    check_weight(q, theta)?;
    match flow_lp(q, theta).maximize(&unit(q.arrow_count(), a)) {
        LpOutcome::Infeasible => Err(Error::EmptyPolyhedron),
        LpOutcome::Unbounded => Ok(None),
        LpOutcome::Optimal { value, .. } => Ok(Some(value)),
    }
}

/// Arrows with x(a) = 0 on all of ∇(Q,θ), or `None` if ∇(Q,θ) is empty.
pub fn zero_arrows(q: &Quiver, theta: &[i64]) -> Option<Vec<bool>> {
    let m = q.arrow_count();
    let lp = flow_lp(q, theta);
    let mut zero = vec![false; m];
    let mut positive = vec![false; m];
    for a in 0..m {
        if positive[a] {
            continue;
        }
        match lp.maximize(&unit(m, a)) {
            LpOutcome::Infeasible => return None,
            LpOutcome::Unbounded => positive[a] = true,
            LpOutcome::Optimal { value, point } => {
                if value.is_zero() {
                    zero[a] = true;
                }
                for (b, v) in point.iter().enumerate() {
                    if v.is_positive() {
                        positive[b] = true;
                    }
                }
            }
        }
    }
    if m == 0 && theta.iter().any(|&t| t != 0) {
        return None;
    }
    Some(zero)
}

/// Dimension of ∇(Q,θ).
///
/// Deleting the arrows that vanish identically leaves a polyhedron with a
/// point positive on every arrow, which is therefore open in its affine
/// span; the dimension is χ of the remaining quiver.
pub fn dimension(q: &Quiver, theta: &[i64]) -> Result<usize> {
    check_weight(q, theta)?;
    let zero = zero_arrows(q, theta).ok_or(Error::EmptyPolyhedron)?;
    let keep: Vec<bool> = zero.iter().map(|z| !z).collect();
    Ok(euler_characteristic(&q.keep_arrows(&keep)) as usize)
}

/// Dimension from vertex differences and recession generators.
pub fn dimension_from_vertices(q: &Quiver, theta: &[i64]) -> Result<usize> {
    let vs = vertices(q, theta)?;
    let Some(first) = vs.first() else { return Err(Error::EmptyPolyhedron) };
    let mut gens: Vec<Vec<i64>> = vs[1..].iter().map(|v| v.iter().zip(first).map(|(a, b)| a - b).collect()).collect();
    gens.extend(recession_hilbert_basis(q));
    Ok(rank(&gens))
}

/// Groups of arrows whose coordinate hyperplane cuts out a facet; arrows in
/// one group cut out the same facet. Groups and their members are in arrow
/// order.
pub fn facet_arrows(q: &Quiver, theta: &[i64]) -> Result<Vec<Vec<String>>> {
    Ok(facet_groups(q, theta)?
        .into_iter()
        .map(|g| g.into_iter().map(|a| q.arrows()[a].id.clone()).collect())
        .collect())
}

pub fn facet_groups(q: &Quiver, theta: &[i64]) -> Result<Vec<Vec<usize>>> {
    check_weight(q, theta)?;
    let zero = zero_arrows(q, theta).ok_or(Error::EmptyPolyhedron)?;
    let keep: Vec<bool> = zero.iter().map(|z| !z).collect();
    let dim = euler_characteristic(&q.keep_arrows(&keep));
    let m = q.arrow_count();
    let mut face_zero: Vec<Option<Vec<bool>>> = vec![None; m];
    for a in 0..m {
        if zero[a] {
            continue;
        }
        let sub = q.without_arrow(a);
        let Some(z) = zero_arrows(&sub, theta) else { continue };
        let keep: Vec<bool> = z.iter().map(|z| !z).collect();
        if euler_characteristic(&sub.keep_arrows(&keep)) != dim - 1 {
            continue;
        }
        // Re-index to Q: the face also has x(a) = 0 and all of `zero`.
        let mut full: Vec<bool> = Vec::with_capacity(m);
        let mut it = z.into_iter();
        for b in 0..m {
            full.push(if b == a { true } else { it.next().unwrap() });
        }
        face_zero[a] = Some(full);
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut assigned = vec![false; m];
    for a in 0..m {
        let Some(fa) = &face_zero[a] else { continue };
        if assigned[a] {
            continue;
        }
        let group: Vec<usize> = (a..m).filter(|&b| face_zero[b].as_ref() == Some(fa)).collect();
        for &b in &group {
            assigned[b] = true;
        }
        groups.push(group);
    }
    Ok(groups)
}

/// Result of a normality check: either a decomposition of every lattice
/// point of ∇(Q,kθ) into k degree-one points (by index), or a point with no
/// such decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalityReport {
    pub k: u32,
    pub generators: Vec<IntFlow>,
    pub decompositions: Vec<(IntFlow, Vec<usize>)>,
    pub counterexample: Option<IntFlow>,
}

impl NormalityReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

pub fn check_normality(q: &Quiver, theta: &[i64], k: u32) -> Result<NormalityReport> {
    check_normality_with(q, theta, k, &Limits::default())
}

pub fn check_normality_with(q: &Quiver, theta: &[i64], k: u32, limits: &Limits) -> Result<NormalityReport> {
    let generators = lattice_points_with(q, theta, 1, limits)?;
    let points = lattice_points_with(q, theta, k, limits)?;
    let index: HashMap<&IntFlow, usize> = generators.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let mut budget = Budget::new(limits, "normality decomposition");
    let mut decompositions = Vec::with_capacity(points.len());
    for p in &points {
        let mut parts = Vec::new();
        if decompose(p, k, 0, &generators, &index, &mut parts, &mut budget)? {
            decompositions.push((p.clone(), parts));
        } else {
            return Ok(NormalityReport { k, generators, decompositions, counterexample: Some(p.clone()) });
        }
    }
    Ok(NormalityReport { k, generators, decompositions, counterexample: None })
}

/// Writes into `parts` a non-decreasing list of `k` generator indices (all
/// ≥ `from`) summing to `p`.
pub(crate) fn decompose(
    p: &[i64],
    k: u32,
    from: usize,
    gens: &[IntFlow],
    index: &HashMap<&IntFlow, usize>,
    parts: &mut Vec<usize>,
    budget: &mut Budget,
) -> Result<bool> {
    budget.tick()?;
    if k == 0 {
        return Ok(p.iter().all(|&v| v == 0));
    }
    if k == 1 {
        let key: IntFlow = p.to_vec();
        return Ok(match index.get(&key) {
            Some(&i) if i >= from => {
                parts.push(i);
                true
            }
            _ => false,
        });
    }
    for (i, g) in gens.iter().enumerate().skip(from) {
        if g.iter().zip(p).all(|(a, b)| a <= b) {
            let rest: IntFlow = p.iter().zip(g).map(|(a, b)| a - b).collect();
            parts.push(i);
            if decompose(&rest, k - 1, i, gens, index, parts, budget)? {
                return Ok(true);
            }
            parts.pop();
        }
    }
    Ok(false)
}

/// Cached structural data of a quiver polyhedron.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyhedronSummary {
    pub quiver: Quiver,
    pub weight: Weight,
    pub bounded: bool,
    pub lattice_points_by_degree: BTreeMap<u32, Vec<IntFlow>>,
    pub vertices: Vec<IntFlow>,
    pub dimension: usize,
    pub facet_arrows: Vec<Vec<String>>,
    pub recession_hilbert_basis: Vec<IntFlow>,
}

impl PolyhedronSummary {
    /// Lattice points are enumerated up to `max_degree` in the bounded case
    /// only.
    pub fn compute(q: &Quiver, theta: &[i64], max_degree: u32) -> Result<PolyhedronSummary> {
        let bounded = q.is_acyclic();
        let mut by_degree = BTreeMap::new();
        if bounded {
            for k in 1..=max_degree {
                by_degree.insert(k, lattice_points(q, theta, k)?);
            }
        }
        Ok(PolyhedronSummary {
            quiver: q.clone(),
            weight: theta.to_vec(),
            bounded,
            lattice_points_by_degree: by_degree,
            vertices: vertices(q, theta)?,
            dimension: dimension(q, theta)?,
            facet_arrows: facet_arrows(q, theta)?,
            recession_hilbert_basis: recession_hilbert_basis(q),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::is_theta_stable;

    pub(crate) fn quiver_a() -> Quiver {
        Quiver::new(
            ["v1", "v2", "v3", "v4", "v5"],
            [
                ("a1", "v1", "v2"),
                ("a2", "v1", "v3"),
                ("a3", "v1", "v4"),
                ("a4", "v5", "v2"),
                ("a5", "v5", "v3"),
                ("a6", "v5", "v4"),
            ],
        )
        .unwrap()
    }

    fn kronecker() -> Quiver {
        Quiver::new(["s", "t"], [("a", "s", "t"), ("b", "s", "t")]).unwrap()
    }

    /// Every x in a box, filtered by divergence.
    fn brute_points(q: &Quiver, theta: &[i64], k: i64, bound: i64) -> Vec<IntFlow> {
        let m = q.arrow_count();
        let mut out = Vec::new();
        let mut x = vec![0; m];
        loop {
            if q.is_flow(theta, k, &x) {
                out.push(x.clone());
            }
            let mut i = 0;
            while i < m && x[i] == bound {
                x[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
            x[i] += 1;
        }
        out.sort();
        out
    }

    #[test]
    fn kronecker_points() {
        assert_eq!(lattice_points(&kronecker(), &[-1, 1], 1).unwrap(), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn quiver_a_counts_match_brute_force() {
        let q = quiver_a();
        for theta in [[-1, 1, 1, 1, -2], [-3, 2, 2, 2, -3], [-3, 2, 1, 2, -2], [-4, 3, 2, 2, -3]] {
            for k in 1..=2 {
                let fast = lattice_points(&q, &theta, k).unwrap();
                assert_eq!(fast, brute_points(&q, &theta, k as i64, 4 * k as i64), "{theta:?} k={k}");
            }
        }
        assert_eq!(lattice_points(&q, &[-1, 1, 1, 1, -2], 1).unwrap().len(), 3);
        assert_eq!(lattice_points(&q, &[-3, 2, 2, 2, -3], 1).unwrap().len(), 7);
    }

    #[test]
    fn cyclic_and_unbalanced() {
        let c = Quiver::new(["u", "w"], [("a", "u", "w"), ("b", "w", "u")]).unwrap();
        assert_eq!(lattice_points(&c, &[0, 0], 1), Err(Error::UnboundedPolyhedron));
        assert!(lattice_points(&kronecker(), &[1, 1], 1).unwrap().is_empty());
    }

    #[test]
    fn node_cap_is_enforced() {
        let r = lattice_points_with(&quiver_a(), &[-3, 2, 2, 2, -3], 3, &Limits { max_nodes: 10 });
        assert!(matches!(r, Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn bounded_examples() {
        let one = Quiver::new(["s", "t"], [("a", "s", "t")]).unwrap();
        let spec = BoundedFlowSpec::new(one.clone(), vec![-1, 1], vec![0], vec![2]).unwrap();
        assert_eq!(bounded_lattice_points(&spec), vec![vec![1]]);
        let c = Quiver::new(["u", "w"], [("a", "u", "w"), ("b", "w", "u")]).unwrap();
        let spec = BoundedFlowSpec::new(c, vec![0, 0], vec![0, 0], vec![1, 1]).unwrap();
        assert_eq!(bounded_lattice_points(&spec), vec![vec![0, 0], vec![1, 1]]);
        let spec = BoundedFlowSpec::new(one, vec![1, 1], vec![0], vec![2]).unwrap();
        assert!(bounded_lattice_points(&spec).is_empty());
    }

    #[test]
    fn gadget_example() {
        let one = Quiver::new(["s", "t"], [("a", "s", "t")]).unwrap();
        let spec = BoundedFlowSpec::new(one, vec![-2, 2], vec![1], vec![3]).unwrap();
        let (g, w) = to_quiver_polytope(&spec);
        assert_eq!(g.vertex_count(), 4);
        assert!(g.is_acyclic());
        assert_eq!(w[g.vertex_index("v[a]").unwrap()], 2);
        assert_eq!(w[g.vertex_index("w[a]").unwrap()], -2);
        assert_eq!(lattice_points(&g, &w, 1).unwrap().len(), bounded_lattice_points(&spec).len());
    }

    #[test]
    fn forced_bounds_give_single_point() {
        let q = quiver_a();
        let x = vec![1, 0, 0, 0, 1, 1];
        let theta = q.divergence(&x);
        let spec = BoundedFlowSpec::new(q, theta, x.clone(), x.clone()).unwrap();
        let (g, w) = to_quiver_polytope(&spec);
        let pts = lattice_points(&g, &w, 1).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(gadget_preimage(&spec, &g, &pts[0]), x);
    }

    #[test]
    fn vertex_examples() {
        let q = quiver_a();
        assert_eq!(vertices(&kronecker(), &[-1, 1]).unwrap().len(), 2);
        assert_eq!(vertices(&q, &[-1, 1, 1, 1, -2]).unwrap().len(), 3);
        let hex = vertices(&q, &[-3, 2, 2, 2, -3]).unwrap();
        assert_eq!(hex.len(), 6);
        // interior point x = y = 1 in tree coordinates
        assert!(!hex.contains(&vec![1, 1, 1, 1, 1, 1]));
    }

    #[test]
    fn tree_positivity_matches_stability() {
        // every spanning forest of quiver A, every small weight
        let q = quiver_a();
        let mut chosen = Vec::new();
        let mut trees = Vec::new();
        forests(&q, 0, &mut Dsu::new(5), &mut chosen, &mut |f| {
            if f.len() == 4 {
                trees.push(f.to_vec());
            }
        });
        for t in &trees {
            let sub = q.subquiver(&[0, 1, 2, 3, 4], t);
            for theta in [[-1, 1, 1, 1, -2], [-3, 2, 1, 2, -2], [1, -1, 0, 2, -2], [-2, 1, 1, 2, -2]] {
                let stable = is_theta_stable(&sub, &theta).unwrap();
                assert_eq!(forest_flow(&q, &theta, t).is_some(), stable, "{t:?} {theta:?}");
            }
        }
    }

    #[test]
    fn dimension_examples() {
        let q = quiver_a();
        assert_eq!(dimension(&kronecker(), &[-1, 1]).unwrap(), 1);
        assert_eq!(dimension(&q, &[-3, 2, 2, 2, -3]).unwrap(), 2);
        assert_eq!(dimension_from_vertices(&q, &[-3, 2, 2, 2, -3]).unwrap(), 2);
        let one = Quiver::new(["s", "t"], [("a", "s", "t")]).unwrap();
        assert_eq!(dimension(&one, &[-1, 1]).unwrap(), 0);
        assert_eq!(dimension(&one, &[1, 1]), Err(Error::EmptyPolyhedron));
    }

    #[test]
    fn facet_examples() {
        let q = quiver_a();
        let tri = facet_groups(&q, &[-1, 1, 1, 1, -2]).unwrap();
        assert_eq!(tri.len(), 3);
        let hex = facet_groups(&q, &[-3, 2, 2, 2, -3]).unwrap();
        assert_eq!(hex.len(), 6);
        assert!(hex.iter().all(|g| g.len() == 1));
        let one = Quiver::new(["s", "t"], [("a", "s", "t")]).unwrap();
        assert!(facet_groups(&one, &[-1, 1]).unwrap().is_empty());
    }

    #[test]
    fn normality_examples() {
        let r = check_normality(&kronecker(), &[-1, 1], 2).unwrap();
        assert!(r.holds());
        assert_eq!(r.decompositions.len(), 3);
        let r = check_normality(&kronecker(), &[1, 1], 2).unwrap();
        assert!(r.holds() && r.decompositions.is_empty());
    }

    #[test]
    fn hilbert_basis() {
        assert!(recession_hilbert_basis(&kronecker()).is_empty());
        let c = Quiver::new(["u", "w"], [("a", "u", "w"), ("b", "w", "u")]).unwrap();
        assert_eq!(recession_hilbert_basis(&c), vec![vec![1, 1]]);
    }

    #[test]
    fn summary_invariants() {
        let q = quiver_a();
        let s = PolyhedronSummary::compute(&q, &[-3, 2, 1, 2, -2], 2).unwrap();
        assert!(s.bounded);
        assert!(s.vertices.iter().all(|v| s.lattice_points_by_degree[&1].contains(v)));
        assert!(s.dimension as i64 <= euler_characteristic(&q));
    }
}
