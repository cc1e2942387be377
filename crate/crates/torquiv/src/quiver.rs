//! Quivers, weights and integer flows.
//!
//! A [`Quiver`] keeps its vertices and arrows sorted by id in natural order
//! (`v2` before `v10`), so index-aligned vectors ([`Weight`], [`IntFlow`])
//! have a canonical layout and every derived quiver is reproducible.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// Integer weight θ, indexed like [`Quiver::vertices`].
pub type Weight = Vec<i64>;

/// Integer flow x, indexed like [`Quiver::arrows`].
pub type IntFlow = Vec<i64>;

/// Largest vertex count for which successor-closed subsets are enumerated.
pub const STABILITY_VERTEX_CAP: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

impl Arrow {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

/// Compares ids so that embedded decimal numbers sort by value.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut x, mut y) = (a.as_bytes(), b.as_bytes());
    loop {
        match (x.first(), y.first()) {
            (None, None) => return a.cmp(b),
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(c), Some(d)) if c.is_ascii_digit() && d.is_ascii_digit() => {
                let i = x.iter().take_while(|c| c.is_ascii_digit()).count();
                let j = y.iter().take_while(|c| c.is_ascii_digit()).count();
                let (nx, ny) = (trim_zeros(&x[..i]), trim_zeros(&y[..j]));
                let ord = nx.len().cmp(&ny.len()).then_with(|| nx.cmp(ny));
                if ord != Ordering::Equal {
                    return ord;
                }
                x = &x[i..];
                y = &y[j..];
            }
            (Some(c), Some(d)) => {
                if c != d {
                    return c.cmp(d);
                }
                x = &x[1..];
                y = &y[1..];
            }
        }
    }
}

fn trim_zeros(s: &[u8]) -> &[u8] {
    let k = s.iter().take_while(|&&c| c == b'0').count();
    &s[k..]
}

impl Quiver {
    /// Builds a quiver from vertex ids and `(id, tail, head)` arrow triples.
    pub fn new<S: Into<String>>(
        vertices: impl IntoIterator<Item = S>,
        arrows: impl IntoIterator<Item = (S, S, S)>,
    ) -> Result<Quiver> {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut pos = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if pos.insert(v.clone(), i).is_some() {
                return Err(Error::InvalidQuiver(format!("duplicate vertex id `{v}`")));
            }
        }
        let mut raw = Vec::new();
        for (id, t, h) in arrows {
            let (id, t, h): (String, String, String) = (id.into(), t.into(), h.into());
            let tail = *pos.get(&t).ok_or_else(|| Error::UnknownVertex(t.clone()))?;
            let head = *pos.get(&h).ok_or_else(|| Error::UnknownVertex(h.clone()))?;
            raw.push((id, tail, head));
        }
        Quiver::from_indexed(vertices, raw)
    }

    /// Builds a quiver whose arrows refer to positions in `vertices`; both
    /// lists are re-sorted into natural id order.
    pub fn from_indexed(vertices: Vec<String>, arrows: Vec<(String, usize, usize)>) -> Result<Quiver> {
        let n = vertices.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| natural_cmp(&vertices[i], &vertices[j]));
        for w in order.windows(2) {
            if vertices[w[0]] == vertices[w[1]] {
                return Err(Error::InvalidQuiver(format!("duplicate vertex id `{}`", vertices[w[0]])));
            }
        }
        let mut new_pos = vec![0; n];
        for (k, &i) in order.iter().enumerate() {
            new_pos[i] = k;
        }
        let mut out: Vec<Arrow> = Vec::with_capacity(arrows.len());
        for (id, t, h) in arrows {
            if t >= n || h >= n {
                return Err(Error::InvalidQuiver(format!("arrow `{id}` has an endpoint out of range")));
            }
            out.push(Arrow { id, tail: new_pos[t], head: new_pos[h] });
        }
        out.sort_by(|a, b| natural_cmp(&a.id, &b.id));
        for w in out.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::InvalidQuiver(format!("duplicate arrow id `{}`", w[0].id)));
            }
        }
        let vertices = order.into_iter().map(|i| vertices[i].clone()).collect();
        Ok(Quiver { vertices, arrows: out })
    }

    /// Like [`Quiver::from_indexed`], carrying a weight given in the order
    /// of `vertices` along to the sorted quiver.
    pub fn from_indexed_weighted(
        vertices: Vec<String>,
        arrows: Vec<(String, usize, usize)>,
        weight: Vec<i64>,
    ) -> Result<(Quiver, Weight)> {
        let q = Quiver::from_indexed(vertices.clone(), arrows)?;
        let mut w = vec![0; q.vertex_count()];
        for (name, t) in vertices.iter().zip(weight) {
            w[q.vertex_index(name).expect("vertex kept")] = t;
        }
        Ok((q, w))
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.binary_search_by(|v| natural_cmp(v, id)).ok()
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.binary_search_by(|a| natural_cmp(&a.id, id)).ok()
    }

    pub fn require_vertex(&self, id: &str) -> Result<usize> {
        self.vertex_index(id).ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn require_arrow(&self, id: &str) -> Result<usize> {
        self.arrow_index(id).ok_or_else(|| Error::UnknownArrow(id.to_string()))
    }

    /// Number of arrow ends at `v`; a loop counts twice.
    pub fn valency(&self, v: usize) -> usize {
        self.arrows.iter().map(|a| (a.tail == v) as usize + (a.head == v) as usize).sum()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.arrows.iter().filter(|a| a.head == v).count()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.arrows.iter().filter(|a| a.tail == v).count()
    }

    /// Arrow indices incident to `v` (a loop appears once).
    pub fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&i| self.arrows[i].tail == v || self.arrows[i].head == v)
            .collect()
    }

    /// F(x)(v) = inflow − outflow.
    pub fn divergence(&self, x: &[i64]) -> Vec<i64> {
        let mut d = vec![0; self.vertices.len()];
        for (a, &val) in self.arrows.iter().zip(x) {
            d[a.head] += val;
            d[a.tail] -= val;
        }
        d
    }

    /// Whether `x` is a non-negative flow with divergence `k·θ`.
    pub fn is_flow(&self, theta: &[i64], k: i64, x: &[i64]) -> bool {
        x.len() == self.arrows.len()
            && x.iter().all(|&v| v >= 0)
            && self.divergence(x).iter().zip(theta).all(|(&d, &t)| d == k * t)
    }

    /// Vertices in topological order, or `None` if there is an oriented cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.head] += 1;
        }
        let mut ready: Vec<usize> = (0..n).rev().filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop() {
            order.push(v);
            let mut next = Vec::new();
            for a in self.arrows.iter().filter(|a| a.tail == v) {
                indeg[a.head] -= 1;
                if indeg[a.head] == 0 {
                    next.push(a.head);
                }
            }
            next.sort_unstable_by(|a, b| b.cmp(a));
            ready.extend(next);
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Weakly connected components as sorted index lists, ordered by their
    /// smallest vertex.
    pub fn component_indices(&self) -> Vec<Vec<usize>> {
        let mut dsu = Dsu::new(self.vertices.len());
        for a in &self.arrows {
            dsu.union(a.tail, a.head);
        }
        dsu.groups()
    }

    /// The quiver with the arrows whose mask entry is false deleted.
    pub fn keep_arrows(&self, keep: &[bool]) -> Quiver {
        Quiver {
            vertices: self.vertices.clone(),
            arrows: self.arrows.iter().zip(keep).filter(|(_, &k)| k).map(|(a, _)| a.clone()).collect(),
        }
    }

    pub fn without_arrow(&self, a: usize) -> Quiver {
        let mut keep = vec![true; self.arrows.len()];
        keep[a] = false;
        self.keep_arrows(&keep)
    }

    /// Full subquiver on a vertex subset, together with the positions of the
    /// kept vertices and arrows in `self`.
    pub fn full_subquiver(&self, vs: &[usize]) -> (Quiver, Vec<usize>, Vec<usize>) {
        let mut vs = vs.to_vec();
        vs.sort_unstable();
        vs.dedup();
        let mut pos = vec![usize::MAX; self.vertices.len()];
        for (i, &v) in vs.iter().enumerate() {
            pos[v] = i;
        }
        let mut arrows = Vec::new();
        let mut kept = Vec::new();
        for (i, a) in self.arrows.iter().enumerate() {
            if pos[a.tail] != usize::MAX && pos[a.head] != usize::MAX {
                arrows.push(Arrow { id: a.id.clone(), tail: pos[a.tail], head: pos[a.head] });
                kept.push(i);
            }
        }
        let vertices = vs.iter().map(|&v| self.vertices[v].clone()).collect();
        (Quiver { vertices, arrows }, vs, kept)
    }

    /// Subquiver on a vertex subset with only the listed arrows.
    pub fn subquiver(&self, vs: &[usize], arrow_idx: &[usize]) -> Quiver {
        let (full, _, kept) = self.full_subquiver(vs);
        let keep: Vec<bool> = kept.iter().map(|k| arrow_idx.contains(k)).collect();
        full.keep_arrows(&keep)
    }

    /// Ids of the vertices in `set`.
    pub fn vertex_ids(&self, set: &[usize]) -> Vec<String> {
        set.iter().map(|&v| self.vertices[v].clone()).collect()
    }
}

/// Disjoint-set forest over `0..n`.
#[derive(Clone, Debug)]
pub struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Dsu {
        Dsu { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    /// Classes as sorted lists, ordered by smallest member.
    pub fn groups(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            let r = self.find(v);
            by_root.entry(r).or_default().push(v);
        }
        let mut out: Vec<Vec<usize>> = by_root.into_values().collect();
        out.sort_by_key(|g| g[0]);
        out
    }
}

/// χ(Q) = |Q₁| − |Q₀| + number of connected components.
pub fn euler_characteristic(q: &Quiver) -> i64 {
    q.arrow_count() as i64 - q.vertex_count() as i64 + q.component_indices().len() as i64
}

/// Weakly connected components as vertex-id sets.
pub fn components(q: &Quiver) -> Vec<Vec<String>> {
    q.component_indices().iter().map(|c| q.vertex_ids(c)).collect()
}

fn reach_masks(q: &Quiver) -> Vec<u64> {
    let n = q.vertex_count();
    let mut succ = vec![0u64; n];
    for a in q.arrows() {
        succ[a.tail] |= 1 << a.head;
    }
    let mut reach: Vec<u64> = (0..n).map(|v| 1u64 << v).collect();
    loop {
        let mut changed = false;
        for v in 0..n {
            let mut r = reach[v];
            let mut m = reach[v];
            while m != 0 {
                let w = m.trailing_zeros() as usize;
                m &= m - 1;
                r |= succ[w];
            }
            if r != reach[v] {
                reach[v] = r;
                changed = true;
            }
        }
        if !changed {
            return reach;
        }
    }
}

pub fn is_strongly_connected(q: &Quiver) -> bool {
    let n = q.vertex_count();
    if n <= 1 {
        return true;
    }
    if n <= 64 {
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        return reach_masks(q).iter().all(|&r| r == full);
    }
    let fwd = |rev: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for a in q.arrows() {
                let (s, t) = if rev { (a.head, a.tail) } else { (a.tail, a.head) };
                if s == v && !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen.iter().all(|&b| b)
    };
    fwd(false) && fwd(true)
}

/// θ-stability: θ(Q₀) = 0 and θ(S) > 0 for every non-empty proper
/// successor-closed S ⊂ Q₀.
pub fn is_theta_stable(q: &Quiver, theta: &[i64]) -> Result<bool> {
    let n = q.vertex_count();
    if theta.len() != n {
        return Err(Error::WeightMismatch(format!("expected {n} values, got {}", theta.len())));
    }
    if theta.iter().sum::<i64>() != 0 {
        return Ok(false);
    }
    if n > STABILITY_VERTEX_CAP {
        return Err(Error::CapExceeded {
            what: "vertex count for stability check".into(),
            limit: STABILITY_VERTEX_CAP as u64,
        });
    }
    let closure = reach_masks(q);
    let full = (1u64 << n) - 1;
    // Enumerate successor-closed sets: include v (with its closure) or exclude it.
    fn walk(i: usize, inc: u64, exc: u64, n: usize, full: u64, closure: &[u64], theta: &[i64]) -> bool {
        if i == n {
            if inc != 0 && inc != full {
                let s: i64 = (0..n).filter(|&v| inc >> v & 1 == 1).map(|v| theta[v]).sum();
                return s > 0;
            }
            return true;
        }
        if inc >> i & 1 == 1 {
            return walk(i + 1, inc, exc, n, full, closure, theta);
        }
        let with = inc | closure[i];
        if with & exc == 0 && !walk(i + 1, with, exc, n, full, closure, theta) {
            return false;
        }
        walk(i + 1, inc, exc | 1 << i, n, full, closure, theta)
    }
    Ok(walk(0, 0, 0, n, full, &closure, theta))
}

/// δ_Q(v) = indegree − outdegree.
pub fn canonical_weight(q: &Quiver) -> Weight {
    (0..q.vertex_count()).map(|v| q.in_degree(v) as i64 - q.out_degree(v) as i64).collect()
}

/// A minimal oriented cycle, rotated to start at its smallest arrow.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimitiveCycle {
    pub arrows: Vec<usize>,
}

impl PrimitiveCycle {
    pub fn vector(&self, q: &Quiver) -> IntFlow {
        let mut x = vec![0; q.arrow_count()];
        for &a in &self.arrows {
            x[a] += 1;
        }
        x
    }

    pub fn arrow_ids(&self, q: &Quiver) -> Vec<String> {
        self.arrows.iter().map(|&a| q.arrows()[a].id.clone()).collect()
    }
}

/// All minimal oriented cycles, sorted by arrow sequence.
pub fn primitive_cycles(q: &Quiver) -> Vec<PrimitiveCycle> {
    let n = q.vertex_count();
    let mut out = Vec::new();
    let mut on_path = vec![false; n];
    let mut path = Vec::new();
    fn dfs(
        q: &Quiver,
        start: usize,
        v: usize,
        on_path: &mut [bool],
        path: &mut Vec<usize>,
        out: &mut Vec<PrimitiveCycle>,
    ) {
        for (i, a) in q.arrows().iter().enumerate() {
            if a.tail != v || a.head < start {
                continue;
            }
            if a.head == start {
                path.push(i);
                let m = (0..path.len()).min_by_key(|&j| path[j]).unwrap();
                let mut arrows = path[m..].to_vec();
                arrows.extend_from_slice(&path[..m]);
                out.push(PrimitiveCycle { arrows });
                path.pop();
            } else if !on_path[a.head] {
                on_path[a.head] = true;
                path.push(i);
                dfs(q, start, a.head, on_path, path, out);
                path.pop();
                on_path[a.head] = false;
            }
        }
    }
    for s in 0..n {
        on_path[s] = true;
        dfs(q, s, s, &mut on_path, &mut path, &mut out);
        on_path[s] = false;
    }
    out.sort();
    out
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrowDoc {
    id: String,
    tail: String,
    head: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuiverDoc {
    vertices: Vec<String>,
    arrows: Vec<ArrowDoc>,
    #[serde(default)]
    weight: Option<BTreeMap<String, i64>>,
}

/// Parses the JSON quiver format. A missing `weight` field yields `None`.
pub fn parse_quiver_json(text: &str) -> Result<(Quiver, Option<Weight>)> {
    let doc: QuiverDoc = serde_json::from_str(text).map_err(|e| Error::InvalidQuiver(e.to_string()))?;
    let q = Quiver::new(
        doc.vertices,
        doc.arrows.into_iter().map(|a| (a.id, a.tail, a.head)),
    )?;
    let weight = match doc.weight {
        None => None,
        Some(map) => Some(weight_from_map(&q, &map)?),
    };
    Ok((q, weight))
}

pub fn weight_from_map(q: &Quiver, map: &BTreeMap<String, i64>) -> Result<Weight> {
    let mut w = vec![None; q.vertex_count()];
    for (id, &val) in map {
        let v = q.vertex_index(id).ok_or_else(|| Error::WeightMismatch(format!("weight.{id}: not a vertex")))?;
        w[v] = Some(val);
    }
    w.iter()
        .enumerate()
        .map(|(v, x)| x.ok_or_else(|| Error::WeightMismatch(format!("weight.{}: missing", q.vertices()[v]))))
        .collect()
}

/// Weight given by `(vertex id, value)` pairs; missing vertices get 0.
pub fn weight_from_pairs<'a>(q: &Quiver, pairs: impl IntoIterator<Item = (&'a str, i64)>) -> Result<Weight> {
    let mut w = vec![0; q.vertex_count()];
    for (id, val) in pairs {
        w[q.require_vertex(id)?] += val;
    }
    Ok(w)
}

pub fn quiver_to_json(q: &Quiver, theta: Option<&[i64]>) -> Value {
    let mut obj = Map::new();
    obj.insert("vertices".into(), Value::from(q.vertices().to_vec()));
    let arrows: Vec<Value> = q
        .arrows()
        .iter()
        .map(|a| {
            let mut m = Map::new();
            m.insert("id".into(), Value::from(a.id.clone()));
            m.insert("tail".into(), Value::from(q.vertices()[a.tail].clone()));
            m.insert("head".into(), Value::from(q.vertices()[a.head].clone()));
            Value::Object(m)
        })
        .collect();
    obj.insert("arrows".into(), Value::Array(arrows));
    if let Some(theta) = theta {
        let mut m = Map::new();
        for (v, &t) in q.vertices().iter().zip(theta) {
            m.insert(v.clone(), Value::from(t));
        }
        obj.insert("weight".into(), Value::Object(m));
    }
    Value::Object(obj)
}

/// Flow as an object keyed by arrow id, in arrow order.
pub fn flow_to_json(q: &Quiver, x: &[i64]) -> Value {
    let mut m = Map::new();
    for (a, &v) in q.arrows().iter().zip(x) {
        m.insert(a.id.clone(), Value::from(v));
    }
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kronecker() -> Quiver {
        Quiver::new(["s", "t"], [("a", "s", "t"), ("b", "s", "t")]).unwrap()
    }

    fn two_cycle() -> Quiver {
        Quiver::new(["u", "w"], [("a", "u", "w"), ("b", "w", "u")]).unwrap()
    }

    #[test]
    fn natural_order() {
        let mut ids = vec!["v10", "v2", "v1", "a", "v1+v2"];
        ids.sort_by(|a, b| natural_cmp(a, b));
        assert_eq!(ids, ["a", "v1", "v1+v2", "v2", "v10"]);
        assert_eq!(natural_cmp("x01", "x1"), Ordering::Less);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Quiver::new(["a", "a"], []), Err(Error::InvalidQuiver(_))));
        assert!(matches!(Quiver::new(["a"], [("x", "a", "b")]), Err(Error::UnknownVertex(_))));
        assert!(matches!(
            Quiver::new(["a"], [("x", "a", "a"), ("x", "a", "a")]),
            Err(Error::InvalidQuiver(_))
        ));
    }

    #[test]
    fn euler_and_components() {
        assert_eq!(euler_characteristic(&kronecker()), 1);
        let lp = Quiver::new(["v"], [("l", "v", "v")]).unwrap();
        assert_eq!(euler_characteristic(&lp), 1);
        let two = Quiver::new(
            ["a", "b", "c", "d"],
            [("x", "a", "b"), ("y", "a", "b"), ("z", "c", "d"), ("w", "c", "d")],
        )
        .unwrap();
        assert_eq!(components(&two).len(), 2);
        let empty = Quiver::new(Vec::<String>::new(), Vec::<(String, String, String)>::new()).unwrap();
        assert!(components(&empty).is_empty());
    }

    #[test]
    fn strong_connectivity() {
        assert!(is_strongly_connected(&two_cycle()));
        assert!(!is_strongly_connected(&kronecker()));
    }

    #[test]
    fn stability_examples() {
        let k = kronecker();
        assert!(is_theta_stable(&k, &[-1, 1]).unwrap());
        assert!(!is_theta_stable(&k, &[1, -1]).unwrap());
        assert!(is_theta_stable(&two_cycle(), &[0, 0]).unwrap());
    }

    #[test]
    fn cycles_and_canonical_weight() {
        assert!(primitive_cycles(&kronecker()).is_empty());
        let c = primitive_cycles(&two_cycle());
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].vector(&two_cycle()), vec![1, 1]);
        assert_eq!(canonical_weight(&kronecker()), vec![-2, 2]);
        assert_eq!(canonical_weight(&two_cycle()), vec![0, 0]);
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"vertices":["v2","v1"],"arrows":[{"id":"a1","tail":"v1","head":"v2"}],"weight":{"v1":-1,"v2":1}}"#;
        let (q, w) = parse_quiver_json(text).unwrap();
        assert_eq!(q.vertices(), ["v1", "v2"]);
        assert_eq!(w.unwrap(), vec![-1, 1]);
        let out = quiver_to_json(&q, Some(&[-1, 1])).to_string();
        let (q2, w2) = parse_quiver_json(&out).unwrap();
        assert_eq!(q, q2);
        assert_eq!(w2.unwrap(), vec![-1, 1]);
    }

    #[test]
    fn json_errors_name_the_field() {
        let e = parse_quiver_json(r#"{"vertices":["a"]}"#).unwrap_err();
        assert!(e.to_string().contains("arrows"), "{e}");
        let e = parse_quiver_json(r#"{"vertices":["a"],"arrows":[],"weight":{"b":1}}"#).unwrap_err();
        assert!(e.to_string().contains("weight.b"), "{e}");
    }
}
