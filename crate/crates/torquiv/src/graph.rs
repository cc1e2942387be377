//! Undirected multigraphs, block decomposition and canonical labelling.

use serde_json::{json, Value};

use crate::quiver::{Dsu, Quiver};

/// Undirected multigraph; each edge is stored with `u ≤ w`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multigraph {
    pub vertices: Vec<String>,
    pub edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(vertices: Vec<String>, edges: impl IntoIterator<Item = (usize, usize)>) -> Multigraph {
        let mut edges: Vec<(usize, usize)> = edges.into_iter().map(|(u, w)| (u.min(w), u.max(w))).collect();
        edges.sort_unstable();
        Multigraph { vertices, edges }
    }

    /// Vertices named `0..n`.
    pub fn unlabeled(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Multigraph {
        Multigraph::new((0..n).map(|i| i.to_string()).collect(), edges)
    }

    pub fn underlying(q: &Quiver) -> Multigraph {
        Multigraph::new(q.vertices().to_vec(), q.arrows().iter().map(|a| (a.tail, a.head)))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// `{"vertices": [...], "edges": [[u, w], ...]}` with edges by vertex name.
    pub fn to_json(&self) -> Value {
        let edges: Vec<Value> =
            self.edges.iter().map(|&(u, w)| json!([self.vertices[u], self.vertices[w]])).collect();
        json!({ "vertices": self.vertices, "edges": edges })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum()
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(|&(a, b)| a == b)
    }

    pub fn multiplicity(&self, u: usize, w: usize) -> usize {
        let key = (u.min(w), u.max(w));
        self.edges.iter().filter(|&&e| e == key).count()
    }

    pub fn euler_characteristic(&self) -> i64 {
        let mut dsu = Dsu::new(self.vertices.len());
        for &(a, b) in &self.edges {
            dsu.union(a, b);
        }
        self.edges.len() as i64 - self.vertices.len() as i64 + dsu.groups().len() as i64
    }

    pub fn is_connected(&self) -> bool {
        let mut dsu = Dsu::new(self.vertices.len());
        for &(a, b) in &self.edges {
            dsu.union(a, b);
        }
        dsu.groups().len() <= 1
    }

    /// Connected with at least one edge and a single block.
    pub fn is_prime(&self) -> bool {
        !self.edges.is_empty() && self.is_connected() && blocks(self.vertices.len(), &self.edges).len() == 1
    }

    pub fn is_regular(&self, k: usize) -> bool {
        (0..self.vertices.len()).all(|v| self.degree(v) == k)
    }

    /// Merges the endpoints of edge `e` (the lower-indexed vertex survives).
    pub fn contract_edge(&self, e: usize) -> Multigraph {
        let (u, w) = self.edges[e];
        let relabel = |x: usize| {
            let x = if x == w { u } else { x };
            if x > w {
                x - 1
            } else {
                x
            }
        };
        let mut vertices = self.vertices.clone();
        vertices.remove(w);
        let edges = self.edges.iter().enumerate().filter(|&(i, _)| i != e).map(|(_, &(a, b))| (relabel(a), relabel(b)));
        Multigraph::new(vertices, edges)
    }

    /// Multiplicity matrix cell for the canonical labelling.
    fn cell(&self, i: usize, j: usize) -> u32 {
        self.multiplicity(i, j) as u32
    }

    pub fn canonical_code(&self) -> Vec<u32> {
        let n = self.vertices.len();
        let mut m = vec![vec![0u32; n]; n];
        for &(a, b) in &self.edges {
            m[a][b] += 1;
            if a != b {
                m[b][a] += 1;
            }
        }
        let colors: Vec<u32> = (0..n).map(|v| self.degree(v) as u32).collect();
        canonical_labelling(n, &colors, |i, j| m[i][j]).0
    }

    /// Isomorphic copy with vertices `0..n` in canonical order.
    pub fn canonical(&self) -> Multigraph {
        let n = self.vertices.len();
        let colors: Vec<u32> = (0..n).map(|v| self.degree(v) as u32).collect();
        let (_, perm) = canonical_labelling(n, &colors, |i, j| self.cell(i, j));
        let mut pos = vec![0; n];
        for (k, &v) in perm.iter().enumerate() {
            pos[v] = k;
        }
        Multigraph::unlabeled(n, self.edges.iter().map(|&(a, b)| (pos[a], pos[b])))
    }
}

/// Blocks of an undirected multigraph as sorted lists of edge indices:
/// 2-connected pieces, bridges, and every loop on its own.
pub fn blocks(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, &(a, b)) in edges.iter().enumerate() {
        if a == b {
            out.push(vec![i]);
        } else {
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
    }
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut stack: Vec<usize> = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        v: usize,
        parent_edge: usize,
        adj: &[Vec<(usize, usize)>],
        disc: &mut [usize],
        low: &mut [usize],
        time: &mut usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        disc[v] = *time;
        low[v] = *time;
        *time += 1;
        for &(w, e) in &adj[v] {
            if e == parent_edge {
                continue;
            }
            if disc[w] == usize::MAX {
                stack.push(e);
                dfs(w, e, adj, disc, low, time, stack, out);
                low[v] = low[v].min(low[w]);
                if low[w] >= disc[v] {
                    let mut block = Vec::new();
                    while let Some(f) = stack.pop() {
                        block.push(f);
                        if f == e {
                            break;
                        }
                    }
                    block.sort_unstable();
                    out.push(block);
                }
            } else if disc[w] < disc[v] {
                stack.push(e);
                low[v] = low[v].min(disc[w]);
            }
        }
    }
    for v in 0..n {
        if disc[v] == usize::MAX {
            dfs(v, usize::MAX, &adj, &mut disc, &mut low, &mut time, &mut stack, &mut out);
        }
    }
    out.sort();
    out
}

/// Canonical labelling of a vertex-coloured structure given by a cell
/// function on ordered vertex pairs: returns the lexicographically largest
/// code over all orderings, and one ordering attaining it.
///
/// Code layout per position `i`: colour, diagonal cell, then for each
/// earlier position `j` the cells `(p_j, p_i)` and `(p_i, p_j)`. Branch and
/// bound on the prefix keeps this fast for the small graphs used here.
pub fn canonical_labelling(n: usize, colors: &[u32], cell: impl Fn(usize, usize) -> u32) -> (Vec<u32>, Vec<usize>) {
    struct Search<'a, F: Fn(usize, usize) -> u32> {
        n: usize,
        colors: &'a [u32],
        cell: F,
        best: Option<Vec<u32>>,
        best_perm: Vec<usize>,
        code: Vec<u32>,
        perm: Vec<usize>,
        used: Vec<bool>,
    }
    impl<F: Fn(usize, usize) -> u32> Search<'_, F> {
        fn block(&self, v: usize) -> Vec<u32> {
            let mut b = vec![self.colors[v], (self.cell)(v, v)];
            for &u in &self.perm {
                b.push((self.cell)(u, v));
                b.push((self.cell)(v, u));
            }
            b
        }
        fn go(&mut self) {
            let pos = self.perm.len();
            if pos == self.n {
                if self.best.as_ref().map_or(true, |b| self.code > *b) {
                    self.best = Some(self.code.clone());
                    self.best_perm = self.perm.clone();
                }
                return;
            }
            let mut cands: Vec<(Vec<u32>, usize)> =
                (0..self.n).filter(|&v| !self.used[v]).map(|v| (self.block(v), v)).collect();
            cands.sort_by(|a, b| b.0.cmp(&a.0));
            let top = cands[0].0.clone();
            for (block, v) in cands {
                if block != top {
                    break;
                }
                let start = self.code.len();
                if let Some(best) = &self.best {
                    let ord = self.code[..]
                        .cmp(&best[..start])
                        .then_with(|| block[..].cmp(&best[start..start + block.len()]));
                    if ord == std::cmp::Ordering::Less {
                        continue;
                    }
                }
                self.code.extend_from_slice(&block);
                self.perm.push(v);
                self.used[v] = true;
                self.go();
                self.used[v] = false;
                self.perm.pop();
                self.code.truncate(start);
            }
        }
    }
    let mut s = Search {
        n,
        colors,
        cell,
        best: None,
        best_perm: Vec::new(),
        code: Vec::new(),
        perm: Vec::new(),
        used: vec![false; n],
    };
    s.go();
    (s.best.unwrap_or_default(), s.best_perm)
}

/// Canonical code of a quiver: arrow counts on ordered vertex pairs.
pub fn quiver_code(q: &Quiver) -> Vec<u32> {
    let n = q.vertex_count();
    let mut m = vec![vec![0u32; n]; n];
    for a in q.arrows() {
        m[a.tail][a.head] += 1;
    }
    let colors: Vec<u32> = (0..n).map(|v| (q.in_degree(v) * 64 + q.out_degree(v)) as u32).collect();
    let mut code = canonical_labelling(n, &colors, |i, j| m[i][j]).0;
    code.insert(0, n as u32);
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_of_bowtie_and_loops() {
        // two triangles sharing vertex 0, plus a pendant edge and a loop
        let edges = [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4), (4, 5), (5, 5)];
        let b = blocks(6, &edges);
        assert_eq!(b.len(), 4);
        assert!(b.contains(&vec![0, 1, 2]));
        assert!(b.contains(&vec![6]));
        assert!(b.contains(&vec![7]));
    }

    #[test]
    fn parallel_edges_are_one_block() {
        let g = Multigraph::unlabeled(2, [(0, 1), (0, 1), (1, 0)]);
        assert!(g.is_prime());
        assert_eq!(g.euler_characteristic(), 2);
        let lp = Multigraph::unlabeled(1, [(0, 0)]);
        assert!(lp.is_prime());
        let two = Multigraph::unlabeled(1, [(0, 0), (0, 0)]);
        assert!(!two.is_prime());
    }

    fn brute_code(g: &Multigraph) -> Vec<u32> {
        // max over all permutations, same layout as canonical_labelling
        let n = g.vertex_count();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best: Option<Vec<u32>> = None;
        fn heap(k: usize, perm: &mut Vec<usize>, g: &Multigraph, best: &mut Option<Vec<u32>>) {
            if k <= 1 {
                let mut code = Vec::new();
                for i in 0..perm.len() {
                    code.push(g.degree(perm[i]) as u32);
                    code.push(g.multiplicity(perm[i], perm[i]) as u32);
                    for j in 0..i {
                        code.push(g.multiplicity(perm[j], perm[i]) as u32);
                        code.push(g.multiplicity(perm[i], perm[j]) as u32);
                    }
                }
                if best.as_ref().map_or(true, |b| code > *b) {
                    *best = Some(code);
                }
                return;
            }
            for i in 0..k {
                heap(k - 1, perm, g, best);
                let j = if k % 2 == 0 { i } else { 0 };
                perm.swap(j, k - 1);
            }
        }
        heap(n, &mut perm, g, &mut best);
        best.unwrap_or_default()
    }

    #[test]
    fn canonical_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let n = rng.gen_range(1..=6);
            let m = rng.gen_range(0..=9);
            let edges: Vec<(usize, usize)> = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
            let g = Multigraph::unlabeled(n, edges.clone());
            assert_eq!(g.canonical_code(), brute_code(&g));
            // relabelled copies agree; canonical form is a fixed point
            let mut p: Vec<usize> = (0..n).collect();
            p.reverse();
            let h = Multigraph::unlabeled(n, edges.iter().map(|&(a, b)| (p[a], p[b])));
            assert_eq!(g.canonical_code(), h.canonical_code());
            assert_eq!(g.canonical().canonical(), g.canonical());
        }
    }

    #[test]
    fn contraction() {
        let tri = Multigraph::unlabeled(3, [(0, 1), (1, 2), (0, 2)]);
        let c = tri.contract_edge(0);
        assert_eq!(c.vertex_count(), 2);
        assert_eq!(c.edges, vec![(0, 1), (0, 1)]);
    }
}
