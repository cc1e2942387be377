//! Transformations of (Q,θ) that preserve ∇(Q,θ) up to integral-affine
//! equivalence, and the combinatorial normal forms built from them.

use num::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{blocks, Multigraph};
use crate::lp::{rat, LpOutcome, Rat};
use crate::polytope::{flow_lp, forest_flow, max_on_arrow, zero_arrows};
use crate::quiver::{euler_characteristic, flow_to_json, is_theta_stable, quiver_to_json, Dsu, IntFlow, Quiver, Weight};

/// x(a) vanishes on all of ∇(Q,θ).
pub fn is_removable(q: &Quiver, theta: &[i64], a: usize) -> Result<bool> {
    Ok(matches!(max_on_arrow(q, theta, a)?, Some(v) if v.is_zero()))
}

/// The half-space x(a) ≥ 0 is implied by the other constraints.
pub fn is_contractible(q: &Quiver, theta: &[i64], a: usize) -> Result<bool> {
    let arrow = &q.arrows()[a];
    if arrow.is_loop() {
        return Err(Error::LoopArrow(arrow.id.clone()));
    }
    let mut lp = flow_lp(q, theta);
    lp.set_free(a);
    let c: Vec<Rat> = (0..q.arrow_count()).map(|i| rat((i == a) as i64)).collect();
    match lp.minimize(&c) {
        LpOutcome::Infeasible => Err(Error::EmptyPolyhedron),
        LpOutcome::Unbounded => Ok(false),
        LpOutcome::Optimal { value, .. } => Ok(!value.is_negative()),
    }
}

/// Glues the endpoints of `a` into a vertex named `tail+head`.
pub fn contract(q: &Quiver, theta: &[i64], a: usize) -> Result<(Quiver, Weight)> {
    let arrow = &q.arrows()[a];
    if arrow.is_loop() {
        return Err(Error::LoopArrow(arrow.id.clone()));
    }
    let (t, h) = (arrow.tail, arrow.head);
    let mut merged = format!("{}+{}", q.vertices()[t], q.vertices()[h]);
    while q.vertex_index(&merged).is_some() {
        merged.push('\'');
    }
    let mut names = Vec::new();
    let mut pos = vec![0; q.vertex_count()];
    let mut weight = Vec::new();
    for v in 0..q.vertex_count() {
        if v == h {
            continue;
        }
        pos[v] = names.len();
        names.push(if v == t { merged.clone() } else { q.vertices()[v].clone() });
        weight.push(if v == t { theta[t] + theta[h] } else { theta[v] });
    }
    pos[h] = pos[t];
    let arrows = q
        .arrows()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != a)
        .map(|(_, b)| (b.id.clone(), pos[b.tail], pos[b.head]))
        .collect();
    Quiver::from_indexed_weighted(names, arrows, weight)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    Remove(String),
    Contract(String),
    Reflect(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub action: Move,
    pub quiver: Quiver,
    pub weight: Weight,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
}

impl ReductionTrace {
    pub fn is_identity(&self) -> bool {
        self.steps.is_empty()
    }

    fn push(&mut self, action: Move, q: &Quiver, w: &[i64]) {
        self.steps.push(TraceStep { action, quiver: q.clone(), weight: w.to_vec() });
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.steps
                .iter()
                .map(|s| {
                    let (kind, id) = match &s.action {
                        Move::Remove(a) => ("remove", a),
                        Move::Contract(a) => ("contract", a),
                        Move::Reflect(v) => ("reflect", v),
                    };
                    json!({"move": kind, "target": id, "result": quiver_to_json(&s.quiver, Some(&s.weight))})
                })
                .collect(),
        )
    }
}

/// Removes and contracts arrows until the pair is tight. Arrows are scanned
/// in id order, removals before contractions, restarting after every move.
pub fn tighten(q: &Quiver, theta: &[i64]) -> Result<(Quiver, Weight, ReductionTrace)> {
    let mut q = q.clone();
    let mut w = theta.to_vec();
    let mut trace = ReductionTrace::default();
    'outer: loop {
        let zero = zero_arrows(&q, &w).ok_or(Error::EmptyPolyhedron)?;
        if let Some(a) = zero.iter().position(|&z| z) {
            let id = q.arrows()[a].id.clone();
            q = q.without_arrow(a);
            trace.push(Move::Remove(id), &q, &w);
            continue;
        }
        for a in 0..q.arrow_count() {
            if !q.arrows()[a].is_loop() && is_contractible(&q, &w, a)? {
                let id = q.arrows()[a].id.clone();
                (q, w) = contract(&q, &w, a)?;
                trace.push(Move::Contract(id), &q, &w);
                continue 'outer;
            }
        }
        return Ok((q, w, trace));
    }
}

/// No arrow is removable or contractible. The LP answer is cross-checked
/// against the combinatorial criterion (components of Q and of every Q∖{a}
/// are θ-stable).
pub fn is_tight(q: &Quiver, theta: &[i64]) -> Result<bool> {
    let by_lp = is_tight_lp(q, theta)?;
    let by_stability = is_tight_combinatorial(q, theta)?;
    if by_lp != by_stability {
        return Err(Error::CrossCheck(format!(
            "tightness: linear programming says {by_lp}, stability criterion says {by_stability}"
        )));
    }
    Ok(by_lp)
}

pub fn is_tight_lp(q: &Quiver, theta: &[i64]) -> Result<bool> {
    let zero = zero_arrows(q, theta).ok_or(Error::EmptyPolyhedron)?;
    if zero.iter().any(|&z| z) {
        return Ok(false);
    }
    for a in 0..q.arrow_count() {
        if !q.arrows()[a].is_loop() && is_contractible(q, theta, a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn components_stable(q: &Quiver, theta: &[i64]) -> Result<bool> {
    for comp in q.component_indices() {
        let (sub, vs, _) = q.full_subquiver(&comp);
        let w: Vec<i64> = vs.iter().map(|&v| theta[v]).collect();
        if !is_theta_stable(&sub, &w)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_tight_combinatorial(q: &Quiver, theta: &[i64]) -> Result<bool> {
    if !components_stable(q, theta)? {
        return Ok(false);
    }
    for a in 0..q.arrow_count() {
        if !components_stable(&q.without_arrow(a), theta)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Reverses the two arrows at a valency-2 sink or source `v`.
///
/// θ′(v) = −θ(v) and every other endpoint gains θ(v) once per arrow joining
/// it to `v` (for two distinct neighbours this is θ(u) + θ(v) each).
pub fn reflect(q: &Quiver, theta: &[i64], v: usize) -> Result<(Quiver, Weight)> {
    let inc = q.incident(v);
    let bad = || Error::WrongValencyPattern(q.vertices()[v].clone());
    if inc.len() != 2 || inc.iter().any(|&i| q.arrows()[i].is_loop()) {
        return Err(bad());
    }
    let (a, b) = (&q.arrows()[inc[0]], &q.arrows()[inc[1]]);
    let into = a.head == v && b.head == v;
    let out_of = a.tail == v && b.tail == v;
    if !into && !out_of {
        return Err(bad());
    }
    let mut w = theta.to_vec();
    w[v] = -theta[v];
    for &i in &inc {
        let arrow = &q.arrows()[i];
        let other = if arrow.tail == v { arrow.head } else { arrow.tail };
        w[other] += theta[v];
    }
    let arrows = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, x)| if inc.contains(&i) { (x.id.clone(), x.head, x.tail) } else { (x.id.clone(), x.tail, x.head) })
        .collect();
    Quiver::from_indexed_weighted(q.vertices().to_vec(), arrows, w)
}

/// Splits (Q,θ) into its blocks. The weight of a block at a vertex `c` is
/// the total weight of everything attached to the rest of the quiver
/// through `c`, so each factor sums to zero when θ does.
pub fn prime_decompose(q: &Quiver, theta: &[i64]) -> Result<Vec<(Quiver, Weight)>> {
    let edges: Vec<(usize, usize)> = q.arrows().iter().map(|a| (a.tail, a.head)).collect();
    let n = q.vertex_count();
    let mut out = Vec::new();
    for block in blocks(n, &edges) {
        let mut vs: Vec<usize> = block.iter().flat_map(|&e| [edges[e].0, edges[e].1]).collect();
        vs.sort_unstable();
        vs.dedup();
        let mut dsu = Dsu::new(n);
        for (i, &(s, t)) in edges.iter().enumerate() {
            if !block.contains(&i) {
                dsu.union(s, t);
            }
        }
        let mut w = Vec::with_capacity(vs.len());
        for &c in &vs {
            let root = dsu.find(c);
            w.push((0..n).filter(|&u| dsu.find(u) == root).map(|u| theta[u]).sum());
        }
        out.push((q.subquiver(&vs, &block), w));
    }
    Ok(out)
}

pub fn is_prime(q: &Quiver) -> bool {
    Multigraph::underlying(q).is_prime()
}

/// Multigraph on the vertices of valency ≥ 3 with one edge per maximal path
/// through valency-2 vertices.
pub fn skeleton(q: &Quiver) -> Result<Multigraph> {
    let n = q.vertex_count();
    for v in 0..n {
        if q.valency(v) < 2 {
            return Err(Error::ValencyTooLow(q.vertices()[v].clone()));
        }
    }
    if !is_prime(q) {
        return Err(Error::NotPrime);
    }
    let branch: Vec<usize> = (0..n).filter(|&v| q.valency(v) >= 3).collect();
    if branch.is_empty() {
        return Err(Error::UnsupportedCase("a skeleton needs a vertex of valency at least 3".into()));
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in branch.iter().enumerate() {
        pos[v] = i;
    }
    let mut used = vec![false; q.arrow_count()];
    let mut edges = Vec::new();
    for &s in &branch {
        for a in q.incident(s) {
            if used[a] {
                continue;
            }
            used[a] = true;
            let arrow = &q.arrows()[a];
            let mut cur = if arrow.tail == s { arrow.head } else { arrow.tail };
            let mut last = a;
            while pos[cur] == usize::MAX {
                let next = q.incident(cur).into_iter().find(|&b| b != last).expect("valency 2");
                used[next] = true;
                let arrow = &q.arrows()[next];
                cur = if arrow.tail == cur { arrow.head } else { arrow.tail };
                last = next;
            }
            edges.push((pos[s], pos[cur]));
        }
    }
    Ok(Multigraph::new(q.vertex_ids(&branch), edges))
}

/// Membership in R_d: prime, no arrow between two valency-2 vertices, and
/// every valency-2 vertex a sink.
pub fn in_rd_form(q: &Quiver) -> bool {
    let v2: Vec<bool> = (0..q.vertex_count()).map(|v| q.valency(v) == 2).collect();
    is_prime(q)
        && q.arrows().iter().all(|a| !(v2[a.tail] && v2[a.head]))
        && (0..q.vertex_count()).all(|v| !v2[v] || q.out_degree(v) == 0)
}

/// Brings a tight prime pair with χ ≥ 2 into R_d form by shrinking
/// one-in-one-out valency-2 vertices and reflecting valency-2 sources.
pub fn normalize_to_rd(q: &Quiver, theta: &[i64]) -> Result<(Quiver, Weight, ReductionTrace)> {
    if !is_prime(q) {
        return Err(Error::NotPrime);
    }
    if euler_characteristic(q) < 2 {
        return Err(Error::UnsupportedCase("R_d normal form needs χ ≥ 2".into()));
    }
    if !is_tight(q, theta)? {
        return Err(Error::NotTight);
    }
    let mut q = q.clone();
    let mut w = theta.to_vec();
    let mut trace = ReductionTrace::default();
    'outer: loop {
        for v in 0..q.vertex_count() {
            if q.valency(v) == 2 && q.in_degree(v) == 1 && q.out_degree(v) == 1 {
                for a in q.incident(v) {
                    if is_contractible(&q, &w, a)? {
                        let id = q.arrows()[a].id.clone();
                        (q, w) = contract(&q, &w, a)?;
                        trace.push(Move::Contract(id), &q, &w);
                        continue 'outer;
                    }
                }
            }
        }
        for v in 0..q.vertex_count() {
            if q.valency(v) == 2 && q.in_degree(v) == 0 {
                let id = q.vertices()[v].clone();
                (q, w) = reflect(&q, &w, v)?;
                trace.push(Move::Reflect(id), &q, &w);
                continue 'outer;
            }
        }
        break;
    }
    if !in_rd_form(&q) {
        return Err(Error::CrossCheck("normal form does not satisfy the R_d conditions".into()));
    }
    Ok((q, w, trace))
}

/// Bipartite double: v ↦ v-, v+; a: v → w ↦ v- → w+; plus e[v]: v- → v+.
/// Weight (θ̃ + dκ)(v-) = −d, (v+) = θ(v) + d.
pub fn double_quiver(q: &Quiver, theta: &[i64], d: i64) -> (Quiver, Weight) {
    let n = q.vertex_count();
    let mut names = Vec::with_capacity(2 * n);
    let mut weight = Vec::with_capacity(2 * n);
    for (v, name) in q.vertices().iter().enumerate() {
        names.push(format!("{name}-"));
        weight.push(-d);
        names.push(format!("{name}+"));
        weight.push(theta[v] + d);
    }
    let mut arrows: Vec<(String, usize, usize)> =
        q.arrows().iter().map(|a| (a.id.clone(), 2 * a.tail, 2 * a.head + 1)).collect();
    for (v, name) in q.vertices().iter().enumerate() {
        arrows.push((format!("e[{name}]"), 2 * v, 2 * v + 1));
    }
    Quiver::from_indexed_weighted(names, arrows, weight).expect("doubled ids are fresh")
}

/// A value of d for which θ-stable subtrees of Q lift to stable trees of
/// the double quiver: any d > Σ|θ(v)|.
pub fn compactification_bound(theta: &[i64]) -> i64 {
    theta.iter().map(|t| t.abs()).sum::<i64>() + 1
}

/// Contracts the support of a vertex m of ∇(Q,θ); the result carries the
/// zero weight.
pub fn vertex_localization(q: &Quiver, theta: &[i64], m: &[i64]) -> Result<Quiver> {
    if !q.is_flow(theta, 1, m) {
        return Err(Error::NotAVertex);
    }
    let support: Vec<usize> = (0..q.arrow_count()).filter(|&a| m[a] > 0).collect();
    let mut dsu = Dsu::new(q.vertex_count());
    for &a in &support {
        let arrow = &q.arrows()[a];
        if !dsu.union(arrow.tail, arrow.head) {
            return Err(Error::NotAVertex);
        }
    }
    if forest_flow(q, theta, &support).as_deref() != Some(m) {
        return Err(Error::NotAVertex);
    }
    let ids: Vec<String> = support.iter().map(|&a| q.arrows()[a].id.clone()).collect();
    let mut cur = q.clone();
    let mut w = theta.to_vec();
    for id in ids {
        let a = cur.require_arrow(&id)?;
        (cur, w) = contract(&cur, &w, a)?;
    }
    debug_assert!(w.iter().all(|&t| t == 0));
    Ok(cur)
}

/// JSON rendering of a list of (quiver, weight) pairs.
pub fn pairs_to_json(pairs: &[(Quiver, Weight)]) -> Value {
    Value::Array(pairs.iter().map(|(q, w)| quiver_to_json(q, Some(w))).collect())
}

/// Flows rendered by arrow id.
pub fn flows_to_json(q: &Quiver, xs: &[IntFlow]) -> Value {
    Value::Array(xs.iter().map(|x| flow_to_json(q, x)).collect())
}
