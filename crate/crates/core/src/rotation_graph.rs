//! Oriented cubic multigraphs sampled from the configuration model.
//!
//! A graph on `2n` vertices owns `6n` stubs (half-edges). Vertex `v` owns
//! stubs `3v`, `3v + 1` and `3v + 2`. Edges are a perfect matching on the
//! stubs, so loops and parallel edges are allowed. The rotation at a vertex
//! is a cyclic order of its three stubs; with three stubs there are exactly
//! two such orders, picked by one fair coin per vertex.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::Seed;

/// Serialized form of a [`RotationGraph`].
///
/// This is also the on-disk JSON layout:
/// `{"vertex_count": 2n, "edges": [[a, b], ...], "rotation": [[s0, s1, s2], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphData {
    pub vertex_count: usize,
    pub edges: Vec<[usize; 2]>,
    pub rotation: Vec<Vec<usize>>,
}

/// `true` iff `data` describes a valid oriented cubic multigraph: every
/// vertex has exactly three stubs, the edges form a perfect matching of the
/// stubs, and every rotation entry is a cyclic order of the vertex's own
/// three stubs.
pub fn degree_check(data: &GraphData) -> bool {
    validate(data).is_ok()
}

fn validate(data: &GraphData) -> Result<()> {
    let v = data.vertex_count;
    if v == 0 || !v.is_multiple_of(2) {
        return Err(Error::InvalidGraph(format!("vertex count {v} is not a positive even number")));
    }
    let stubs = 3 * v;
    let mut seen = vec![false; stubs];
    for &[a, b] in &data.edges {
        if a == b {
            return Err(Error::InvalidGraph(format!("edge pairs stub {a} with itself")));
        }
        for s in [a, b] {
            if s >= stubs {
                return Err(Error::InvalidGraph(format!("stub {s} out of range")));
            }
            if std::mem::replace(&mut seen[s], true) {
                return Err(Error::InvalidGraph(format!("stub {s} used by two edges")));
            }
        }
    }
    if let Some(s) = seen.iter().position(|&x| !x) {
        return Err(Error::InvalidGraph(format!(
            "vertex {} has fewer than 3 incident stubs (stub {s} unmatched)",
            s / 3
        )));
    }
    if data.rotation.len() != v {
        return Err(Error::InvalidGraph(format!(
            "{} rotation entries for {v} vertices",
            data.rotation.len()
        )));
    }
    for (vertex, rot) in data.rotation.iter().enumerate() {
        let mut sorted = rot.clone();
        sorted.sort_unstable();
        if sorted != [3 * vertex, 3 * vertex + 1, 3 * vertex + 2] {
            return Err(Error::InvalidGraph(format!(
                "rotation at vertex {vertex} is {rot:?}, not a cyclic order of its stubs"
            )));
        }
    }
    Ok(())
}

/// A cubic multigraph together with a rotation system.
///
/// Immutable once built; share freely across threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationGraph {
    vertex_count: usize,
    partner: Vec<u32>,
    rotation: Vec<[u32; 3]>,
    succ: Vec<u32>,
}

impl RotationGraph {
    fn from_matching(partner: Vec<u32>, rotation: Vec<[u32; 3]>) -> Self {
        let mut succ = vec![0u32; partner.len()];
        for rot in &rotation {
            for i in 0..3 {
                succ[rot[i] as usize] = rot[(i + 1) % 3];
            }
        }
        RotationGraph {
            vertex_count: rotation.len(),
            partner,
            rotation,
            succ,
        }
    }

    pub fn from_data(data: &GraphData) -> Result<Self> {
        validate(data)?;
        let mut partner = vec![0u32; 3 * data.vertex_count];
        for &[a, b] in &data.edges {
            partner[a] = b as u32;
            partner[b] = a as u32;
        }
        let rotation = data
            .rotation
            .iter()
            .map(|r| [r[0] as u32, r[1] as u32, r[2] as u32])
            .collect();
        Ok(Self::from_matching(partner, rotation))
    }

    /// Canonical serialized form: edges listed as `[lo, hi]` sorted by `lo`.
    pub fn to_data(&self) -> GraphData {
        let edges = (0..self.stub_count())
            .filter(|&s| s < self.partner(s))
            .map(|s| [s, self.partner(s)])
            .collect();
        let rotation = self
            .rotation
            .iter()
            .map(|r| r.iter().map(|&s| s as usize).collect())
            .collect();
        GraphData {
            vertex_count: self.vertex_count,
            edges,
            rotation,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let data: GraphData = serde_json::from_str(text)?;
        Self::from_data(&data)
    }

    /// Compact single-line JSON followed by a newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(&self.to_data()).expect("graph data serializes");
        s.push('\n');
        s
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn stub_count(&self) -> usize {
        self.partner.len()
    }

    pub fn edge_count(&self) -> usize {
        self.partner.len() / 2
    }

    #[inline]
    pub fn partner(&self, stub: usize) -> usize {
        self.partner[stub] as usize
    }

    #[inline]
    pub fn vertex_of(stub: usize) -> usize {
        stub / 3
    }

    #[inline]
    pub fn stubs_of(vertex: usize) -> [usize; 3] {
        [3 * vertex, 3 * vertex + 1, 3 * vertex + 2]
    }

    /// Next stub after `stub` in the cyclic rotation at its vertex.
    #[inline]
    pub fn succ(&self, stub: usize) -> usize {
        self.succ[stub] as usize
    }

    pub fn rotation(&self, vertex: usize) -> [usize; 3] {
        self.rotation[vertex].map(|s| s as usize)
    }

    /// Canonical edge id: the smaller of its two stubs.
    #[inline]
    pub fn edge_id(&self, stub: usize) -> usize {
        stub.min(self.partner(stub))
    }

    pub fn loop_count(&self) -> usize {
        (0..self.stub_count())
            .filter(|&s| s < self.partner(s) && Self::vertex_of(s) == Self::vertex_of(self.partner(s)))
            .count()
    }

    /// Same graph with every rotation reversed.
    pub fn flipped(&self) -> RotationGraph {
        let rotation = self.rotation.iter().map(|&[a, b, c]| [a, c, b]).collect();
        Self::from_matching(self.partner.clone(), rotation)
    }

    /// Same graph with the rotation at `vertex` reversed.
    pub fn with_flipped_vertex(&self, vertex: usize) -> RotationGraph {
        let mut rotation = self.rotation.clone();
        let [a, b, c] = rotation[vertex];
        rotation[vertex] = [a, c, b];
        Self::from_matching(self.partner.clone(), rotation)
    }

    /// Number of faces of the ribbon graph: orbits of `s -> succ(partner(s))`.
    pub fn face_count(&self) -> usize {
        let mut seen = vec![false; self.stub_count()];
        let mut faces = 0;
        for start in 0..self.stub_count() {
            if seen[start] {
                continue;
            }
            faces += 1;
            let mut s = start;
            while !seen[s] {
                seen[s] = true;
                s = self.succ(self.partner(s));
            }
        }
        faces
    }

    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.vertex_count];
        let mut stack = Vec::new();
        let mut count = 0;
        for root in 0..self.vertex_count {
            if seen[root] {
                continue;
            }
            count += 1;
            seen[root] = true;
            stack.push(root);
            while let Some(v) = stack.pop() {
                for s in Self::stubs_of(v) {
                    let w = Self::vertex_of(self.partner(s));
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    /// Genus of the closed surface carried by the rotation system, from the
    /// Euler characteristic `V - E + F = 2c - 2g` summed over the `c`
    /// connected components.
    pub fn genus(&self) -> usize {
        let v = self.vertex_count as i64;
        let e = self.edge_count() as i64;
        let f = self.face_count() as i64;
        let c = self.component_count() as i64;
        let twice = 2 * c - v + e - f;
        debug_assert!(twice >= 0 && twice % 2 == 0);
        (twice / 2) as usize
    }

    /// Edges as an unordered set of `[lo, hi]` stub pairs.
    pub fn edge_set(&self) -> HashSet<[usize; 2]> {
        self.to_data().edges.into_iter().collect()
    }
}

/// Sample an oriented cubic multigraph on `2n` vertices.
///
/// The stubs `0..6n` are shuffled and paired off consecutively, which is
/// exactly uniform over perfect matchings. Then one fair bit per vertex, in
/// vertex order, picks its rotation.
pub fn sample_graph(n: usize, seed: Seed) -> Result<RotationGraph> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let vertex_count = 2 * n;
    let stubs = 3 * vertex_count;
    let mut rng = seed.rng();
    let mut order: Vec<u32> = (0..stubs as u32).collect();
    order.shuffle(&mut rng);
    let mut partner = vec![0u32; stubs];
    for pair in order.chunks_exact(2) {
        partner[pair[0] as usize] = pair[1];
        partner[pair[1] as usize] = pair[0];
    }
    let rotation = (0..vertex_count as u32)
        .map(|v| {
            let base = 3 * v;
            if rng.random::<bool>() {
                [base, base + 2, base + 1]
            } else {
                [base, base + 1, base + 2]
            }
        })
        .collect();
    Ok(RotationGraph::from_matching(partner, rotation))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_one_is_cubic_on_two_vertices() {
        for s in 0..50 {
            let g = sample_graph(1, Seed(s)).unwrap();
            assert_eq!(g.vertex_count(), 2);
            assert_eq!(g.edge_count(), 3);
            assert!(degree_check(&g.to_data()));
        }
    }

    #[test]
    fn zero_is_rejected() {
        assert!(matches!(sample_graph(0, Seed(1)), Err(Error::EmptyGraph)));
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let a = sample_graph(100, Seed(99)).unwrap();
        let b = sample_graph(100, Seed(99)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
        assert_ne!(a, sample_graph(100, Seed(100)).unwrap());
    }

    #[test]
    fn two_stub_vertex_fails_check() {
        // stub 5 is never matched, so vertex 1 has degree 2
        let data = GraphData {
            vertex_count: 2,
            edges: vec![[0, 3], [1, 4], [2, 2]],
            rotation: vec![vec![0, 1, 2], vec![3, 4, 5]],
        };
        assert!(!degree_check(&data));
        let data = GraphData {
            vertex_count: 2,
            edges: vec![[0, 3], [1, 4]],
            rotation: vec![vec![0, 1, 2], vec![3, 4, 5]],
        };
        assert!(!degree_check(&data));
    }

    #[test]
    fn non_cyclic_rotation_fails_check() {
        let good = GraphData {
            vertex_count: 2,
            edges: vec![[0, 3], [1, 4], [2, 5]],
            rotation: vec![vec![0, 1, 2], vec![3, 5, 4]],
        };
        assert!(degree_check(&good));
        let mut bad = good.clone();
        bad.rotation[1] = vec![3, 3, 4];
        assert!(!degree_check(&bad));
        let mut bad = good.clone();
        bad.rotation[0] = vec![0, 1, 3];
        assert!(!degree_check(&bad));
        let mut bad = good;
        bad.rotation[0] = vec![0, 1];
        assert!(!degree_check(&bad));
    }

    #[test]
    fn theta_graph_genus() {
        // theta graph: two vertices, three parallel edges
        let planar = GraphData {
            vertex_count: 2,
            edges: vec![[0, 3], [1, 4], [2, 5]],
            rotation: vec![vec![0, 1, 2], vec![3, 5, 4]],
        };
        let g = RotationGraph::from_data(&planar).unwrap();
        assert_eq!(g.face_count(), 3);
        assert_eq!(g.genus(), 0);
        let torus = GraphData {
            rotation: vec![vec![0, 1, 2], vec![3, 4, 5]],
            ..planar
        };
        let g = RotationGraph::from_data(&torus).unwrap();
        assert_eq!(g.face_count(), 1);
        assert_eq!(g.genus(), 1);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let g = sample_graph(37, Seed(5)).unwrap();
        let text = g.to_json();
        let back = RotationGraph::from_json(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn loops_and_parallel_edges_occur() {
        let mut loops = 0;
        let mut doubles = 0;
        for s in 0..500 {
            let g = sample_graph(4, Seed(s)).unwrap();
            loops += g.loop_count();
            let mut pairs: Vec<(usize, usize)> = g
                .to_data()
                .edges
                .iter()
                .map(|&[a, b]| {
                    let (u, v) = (a / 3, b / 3);
                    (u.min(v), u.max(v))
                })
                .filter(|(u, v)| u != v)
                .collect();
            pairs.sort_unstable();
            doubles += pairs.windows(2).filter(|w| w[0] == w[1]).count();
        }
        assert!(loops > 0);
        assert!(doubles > 0);
    }
}
