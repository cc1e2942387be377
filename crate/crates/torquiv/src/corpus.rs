//! Named example quivers and the checked-in corpus built from them.

use crate::classify::{enumerate_affine_rdd, sink_subdivision};
use crate::graph::Multigraph;
use crate::quiver::{canonical_weight, quiver_to_json, Quiver, Weight};
use crate::reductions::{compactification_bound, double_quiver};

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn build(vertices: Vec<String>, arrows: &[(&str, usize, usize)]) -> Quiver {
    Quiver::from_indexed(vertices, arrows.iter().map(|&(id, t, h)| (id.to_string(), t, h)).collect())
        .expect("example quivers are well formed")
}

/// Two sources v1, v5 joined to three sinks v2, v3, v4.
pub fn quiver_a() -> Quiver {
    build(
        names("v", 5),
        &[("a1", 0, 1), ("a2", 0, 2), ("a3", 0, 3), ("a4", 4, 1), ("a5", 4, 2), ("a6", 4, 3)],
    )
}

pub fn kronecker() -> Quiver {
    build(names("v", 2), &[("a1", 0, 1), ("a2", 0, 1)])
}

/// Two disjoint Kronecker quivers.
pub fn double_kronecker() -> Quiver {
    build(names("v", 4), &[("a1", 0, 1), ("a2", 0, 1), ("a3", 2, 3), ("a4", 2, 3)])
}

/// The five pairs realizing P², Bl₁P², Bl₂P², Bl₃P² and P¹×P¹, in that order.
pub fn twodim_pairs() -> Vec<(&'static str, Quiver, Weight)> {
    let a = quiver_a();
    vec![
        ("P2", a.clone(), vec![-1, 1, 1, 1, -2]),
        ("Bl1P2", a.clone(), vec![-3, 2, 1, 2, -2]),
        ("Bl2P2", a.clone(), vec![-4, 3, 2, 2, -3]),
        ("Bl3P2", a, vec![-3, 2, 2, 2, -3]),
        ("P1xP1", double_kronecker(), vec![-1, 1, -1, 1]),
    ]
}

/// Quiver A with a weight whose polytope is a square: not tight, and it
/// tightens to two Kronecker quivers glued at a vertex.
pub fn square_pair() -> (Quiver, Weight) {
    (quiver_a(), vec![-2, 1, 1, 2, -2])
}

/// Skeleton of the sharp example: a ladder with rows t0.., b0.. of length
/// d−1, closed up by the two crossing edges t0–b_last and b0–t_last.
pub fn two_sharp_graph(d: usize) -> Multigraph {
    assert!(d >= 2);
    let r = d - 1;
    let mut vertices: Vec<String> = (0..r).map(|i| format!("t{i}")).collect();
    vertices.extend((0..r).map(|i| format!("b{i}")));
    let mut edges = Vec::new();
    for i in 0..r {
        edges.push((i, r + i));
        if i + 1 < r {
            edges.push((i, i + 1));
            edges.push((r + i, r + i + 1));
        }
    }
    edges.push((0, 2 * r - 1));
    edges.push((r, r - 1));
    Multigraph::new(vertices, edges)
}

/// Sink on every edge of [`two_sharp_graph`], with the canonical weight
/// (2 on sinks, −3 on sources).
pub fn two_sharp(d: usize) -> (Quiver, Weight) {
    let q = sink_subdivision(&two_sharp_graph(d));
    let w = canonical_weight(&q);
    (q, w)
}

/// d-cycle a_i: i → i+1 together with the reversed arrows b_i.
pub fn affine_degree(d: usize) -> Quiver {
    let mut arrows = Vec::new();
    for i in 0..d {
        let j = (i + 1) % d;
        arrows.push((format!("a{}", i + 1), i, j));
        arrows.push((format!("b{}", i + 1), j, i));
    }
    Quiver::from_indexed(names("v", d), arrows).expect("well formed")
}

/// Oriented d-cycle.
pub fn cycle(d: usize) -> Quiver {
    let arrows = (0..d).map(|i| (format!("a{}", i + 1), i, (i + 1) % d)).collect();
    Quiver::from_indexed(names("v", d), arrows).expect("well formed")
}

/// Sources x1..xn, sinks y1..ym, one arrow ai_j: xi → yj for every pair.
pub fn complete_bipartite(n: usize, m: usize) -> Quiver {
    let mut vertices = names("x", n);
    vertices.extend(names("y", m));
    let mut arrows = Vec::new();
    for i in 0..n {
        for j in 0..m {
            arrows.push((format!("a{}_{}", i + 1, j + 1), i, n + j));
        }
    }
    Quiver::from_indexed(vertices, arrows).expect("well formed")
}

/// −1 on sources, +1 on sinks.
pub fn bipartite_weight(q: &Quiver) -> Weight {
    (0..q.vertex_count()).map(|v| if q.out_degree(v) > 0 { -1 } else { 1 }).collect()
}

/// The two 3-regular skeletons with χ = 3: a 4-cycle with two opposite
/// sides doubled, and K₄.
pub fn threedim_graphs() -> [Multigraph; 2] {
    let corners = || vec!["p1".to_string(), "p2".into(), "p3".into(), "p4".into()];
    [
        Multigraph::new(corners(), [(0, 1), (1, 2), (2, 3), (3, 0), (0, 3), (1, 2)]),
        Multigraph::new(corners(), [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)]),
    ]
}

/// Sink on every edge of the graphs of [`threedim_graphs`], with the
/// canonical weight.
pub fn threedim_pairs() -> [(Quiver, Weight); 2] {
    threedim_graphs().map(|g| {
        let q = sink_subdivision(&g);
        let w = canonical_weight(&q);
        (q, w)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub quiver: Quiver,
    pub weight: Weight,
}

impl Instance {
    fn new(name: impl Into<String>, quiver: Quiver, weight: Weight) -> Instance {
        Instance { name: name.into(), quiver, weight }
    }
}

/// Every corpus instance, in a fixed order.
pub fn instances() -> Vec<Instance> {
    let mut out = Vec::new();
    for (i, (name, q, w)) in twodim_pairs().into_iter().enumerate() {
        out.push(Instance::new(format!("twodim-{}-{}", i + 1, name.to_lowercase()), q, w));
    }
    let (q, w) = square_pair();
    out.push(Instance::new("square", q, w));
    out.push(Instance::new("kronecker", kronecker(), vec![-1, 1]));
    for d in [3, 4] {
        let (q, w) = two_sharp(d);
        out.push(Instance::new(format!("two-sharp-{d}"), q, w));
    }
    for d in [3, 4, 5] {
        let q = affine_degree(d);
        let w = vec![0; q.vertex_count()];
        out.push(Instance::new(format!("affine-degree-{d}"), q, w));
    }
    for (i, (q, w)) in threedim_pairs().into_iter().enumerate() {
        out.push(Instance::new(format!("threedim-{}", i + 1), q, w));
    }
    for d in [1, 3, 4] {
        let list = enumerate_affine_rdd(d).expect("small dimensions are within the caps");
        for (i, q) in list.into_iter().enumerate() {
            let w = vec![0; q.vertex_count()];
            out.push(Instance::new(format!("affine-r{d}-{}", i + 1), q, w));
        }
    }
    for n in [2, 3] {
        let q = complete_bipartite(n, n);
        let w = bipartite_weight(&q);
        out.push(Instance::new(format!("bipartite-{n}-{n}"), q, w));
    }
    let loop_quiver = Quiver::new(["v1"], [("a1", "v1", "v1")]).expect("well formed");
    let cyclic = [("loop", loop_quiver), ("cycle-2", cycle(2)), ("cycle-3", cycle(3)), ("affine-degree-3", affine_degree(3))];
    for (name, q) in cyclic {
        let zero = vec![0; q.vertex_count()];
        let (dq, dw) = double_quiver(&q, &zero, compactification_bound(&zero));
        out.push(Instance::new(format!("double-{name}"), dq, dw));
    }
    out
}

/// Serialized form of an instance, as stored in the corpus directory.
pub fn to_file_contents(inst: &Instance) -> String {
    let mut s = serde_json::to_string_pretty(&quiver_to_json(&inst.quiver, Some(&inst.weight))).expect("serializable");
    s.push('\n');
    s
}

/// `(file name, contents)` for every corpus file, deterministic.
pub fn regenerate() -> Vec<(String, String)> {
    instances().iter().map(|inst| (format!("{}.json", inst.name), to_file_contents(inst))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::parse_quiver_json;

    #[test]
    fn two_sharp_shape() {
        for d in 2..=5 {
            let g = two_sharp_graph(d);
            assert!(g.is_regular(3), "d={d}");
            assert!(g.is_prime());
            assert_eq!(g.euler_characteristic(), d as i64);
            let (q, w) = two_sharp(d);
            assert_eq!(q.vertex_count(), 5 * (d - 1));
            assert_eq!(q.arrow_count(), 6 * (d - 1));
            assert!(w.iter().all(|&t| t == 2 || t == -3));
        }
    }

    #[test]
    fn two_sharp_three_is_k4() {
        let g = two_sharp_graph(3);
        assert_eq!(g.canonical_code(), threedim_graphs()[1].canonical_code());
    }

    #[test]
    fn corpus_round_trips() {
        for inst in instances() {
            let text = to_file_contents(&inst);
            let (q, w) = parse_quiver_json(&text).unwrap();
            assert_eq!(q, inst.quiver, "{}", inst.name);
            assert_eq!(w.as_deref(), Some(&inst.weight[..]), "{}", inst.name);
        }
    }

    #[test]
    fn regeneration_is_deterministic() {
        assert_eq!(regenerate(), regenerate());
    }

    #[test]
    fn names_are_unique() {
        let mut names: Vec<String> = instances().into_iter().map(|i| i.name).collect();
        let n = names.len();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), n);
    }
}
