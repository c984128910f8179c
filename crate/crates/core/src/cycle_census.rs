//! Short simple cycles of a [`RotationGraph`].
//!
//! A cycle is stored as the closed walk it traces: one `(in_stub, out_stub)`
//! step per vertex, where the walk enters the vertex through `in_stub` and
//! leaves through `out_stub`, and `partner(out_stub)` is the next step's
//! `in_stub`. The canonical form is the lexicographically smallest of the
//! `2k` rotations/reflections of that step sequence, so the same cycle
//! compares equal however it was found.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rotation_graph::RotationGraph;

/// Default slack in the cutoff `alpha = (1 - epsilon) log2(vertex_count)`.
pub const DEFAULT_EPSILON: f64 = 0.02;

/// How [`enumerate_cycles`] bounds `max_len`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CapPolicy {
    /// Require `max_len <= floor((1 - epsilon) log2(vertex_count))`.
    Alpha { epsilon: f64 },
    /// No cap. Enumeration cost grows like `2^max_len` per vertex.
    Unchecked,
}

impl Default for CapPolicy {
    fn default() -> Self {
        CapPolicy::Alpha {
            epsilon: DEFAULT_EPSILON,
        }
    }
}

/// `floor((1 - epsilon) * log2(vertex_count))`.
pub fn alpha_cap(vertex_count: usize, epsilon: f64) -> usize {
    if vertex_count < 2 {
        return 0;
    }
    let a = (1.0 - epsilon) * (vertex_count as f64).log2();
    // guard against 0.98 * 10.0 = 9.799999... style rounding at integers
    (a + 1e-9).floor().max(0.0) as usize
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Cycle {
    steps: Vec<(u32, u32)>,
}

impl Cycle {
    /// Build a cycle from a closed walk, checking it against `g` and
    /// canonicalizing it.
    pub fn from_walk(g: &RotationGraph, steps: &[(usize, usize)]) -> Result<Cycle> {
        if steps.is_empty() {
            return Err(Error::CycleNotInGraph("empty walk".into()));
        }
        let k = steps.len();
        let mut vertices = HashSet::with_capacity(k);
        for (j, &(inp, out)) in steps.iter().enumerate() {
            if inp >= g.stub_count() || out >= g.stub_count() {
                return Err(Error::CycleNotInGraph(format!("stub out of range at step {j}")));
            }
            let v = RotationGraph::vertex_of(inp);
            if RotationGraph::vertex_of(out) != v || inp == out {
                return Err(Error::CycleNotInGraph(format!(
                    "step {j} does not pass through a vertex ({inp}, {out})"
                )));
            }
            if !vertices.insert(v) {
                return Err(Error::CycleNotInGraph(format!("vertex {v} repeated")));
            }
            let next_in = steps[(j + 1) % k].0;
            if g.partner(out) != next_in {
                return Err(Error::CycleNotInGraph(format!(
                    "stub {out} is not matched to {next_in}"
                )));
            }
        }
        Ok(Self::canonical(steps))
    }

    fn canonical(steps: &[(usize, usize)]) -> Cycle {
        let k = steps.len();
        // All stubs are distinct, so the canonical form is the variant that
        // starts with the globally smallest stub.
        let (pos, as_in) = steps
            .iter()
            .enumerate()
            .map(|(j, &(i, o))| if i < o { (i, j, true) } else { (o, j, false) })
            .min()
            .map(|(_, j, as_in)| (j, as_in))
            .expect("nonempty walk");
        let out: Vec<(u32, u32)> = if as_in {
            (0..k)
                .map(|t| {
                    let (i, o) = steps[(pos + t) % k];
                    (i as u32, o as u32)
                })
                .collect()
        } else {
            (0..k)
                .map(|t| {
                    let (i, o) = steps[(pos + k - t) % k];
                    (o as u32, i as u32)
                })
                .collect()
        };
        Cycle { steps: out }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Canonical `(in_stub, out_stub)` steps.
    pub fn steps(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.steps.iter().map(|&(i, o)| (i as usize, o as usize))
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.steps.iter().map(|&(i, _)| i as usize / 3)
    }

    /// Edge ids (smaller stub of each edge) in traversal order.
    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        let k = self.steps.len();
        (0..k).map(move |j| {
            let out = self.steps[j].1;
            let next_in = self.steps[(j + 1) % k].0;
            out.min(next_in) as usize
        })
    }

    /// Flattened canonical stub sequence `in0 out0 in1 out1 ...`.
    pub fn stub_sequence(&self) -> Vec<usize> {
        self.steps.iter().flat_map(|&(i, o)| [i as usize, o as usize]).collect()
    }

    /// Space separated canonical stub sequence.
    pub fn stub_string(&self) -> String {
        self.stub_sequence()
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// The same cycle traversed in the opposite direction, as a raw walk.
    pub fn reversed_walk(&self) -> Vec<(usize, usize)> {
        let k = self.steps.len();
        (0..k)
            .map(|t| {
                let (i, o) = self.steps[(k - t) % k];
                (o as usize, i as usize)
            })
            .collect()
    }
}

impl Ord for Cycle {
    fn cmp(&self, other: &Self) -> Ordering {
        self.steps
            .len()
            .cmp(&other.steps.len())
            .then_with(|| self.steps.cmp(&other.steps))
    }
}

impl PartialOrd for Cycle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Every simple cycle of length `<= max_len`, once each, sorted by length
/// then canonical form.
pub fn enumerate_cycles(g: &RotationGraph, max_len: usize, cap: CapPolicy) -> Result<Vec<Cycle>> {
    if let CapPolicy::Alpha { epsilon } = cap {
        let limit = alpha_cap(g.vertex_count(), epsilon);
        if max_len > limit {
            return Err(Error::CycleCapExceeded {
                max_len,
                cap: limit,
                epsilon,
                vertex_count: g.vertex_count(),
            });
        }
    }
    let mut search = Search::new(g, max_len);
    let mut out = Vec::new();
    for root in 0..g.vertex_count() {
        search.search_root(root, &mut out);
    }
    out.sort_unstable();
    Ok(out)
}

/// Rooted depth-first search. A cycle is reported from its smallest vertex
/// only, in the direction whose first out-stub is smaller than its closing
/// in-stub. Paths are pruned with a BFS distance bound back to the root.
struct Search<'g> {
    g: &'g RotationGraph,
    max_len: usize,
    radius: usize,
    dist: Vec<u32>,
    touched: Vec<usize>,
    on_path: Vec<bool>,
    path: Vec<(usize, usize)>,
    queue: std::collections::VecDeque<usize>,
}

const FAR: u32 = u32::MAX;

impl<'g> Search<'g> {
    fn new(g: &'g RotationGraph, max_len: usize) -> Self {
        Search {
            g,
            max_len,
            radius: max_len.div_ceil(2),
            dist: vec![FAR; g.vertex_count()],
            touched: Vec::new(),
            on_path: vec![false; g.vertex_count()],
            path: Vec::with_capacity(max_len),
            queue: Default::default(),
        }
    }

    fn bfs(&mut self, root: usize) {
        for &v in &self.touched {
            self.dist[v] = FAR;
        }
        self.touched.clear();
        self.dist[root] = 0;
        self.touched.push(root);
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            let d = self.dist[v];
            if d as usize >= self.radius {
                continue;
            }
            for s in RotationGraph::stubs_of(v) {
                let w = RotationGraph::vertex_of(self.g.partner(s));
                if w > root && self.dist[w] == FAR {
                    self.dist[w] = d + 1;
                    self.touched.push(w);
                    self.queue.push_back(w);
                }
            }
        }
    }

    /// Lower bound on the remaining steps from `v` back to the root.
    #[inline]
    fn can_return(&self, v: usize, used: usize) -> bool {
        let left = self.max_len - used;
        match self.dist[v] {
            FAR => left > self.radius,
            d => d as usize <= left,
        }
    }

    fn search_root(&mut self, root: usize, out: &mut Vec<Cycle>) {
        if self.max_len == 0 {
            return;
        }
        self.bfs(root);
        let g = self.g;
        for first_out in RotationGraph::stubs_of(root) {
            let t = g.partner(first_out);
            let w = RotationGraph::vertex_of(t);
            if w == root {
                if first_out < t {
                    out.push(Cycle::canonical(&[(t, first_out)]));
                }
                continue;
            }
            if w < root || !self.can_return(w, 1) {
                continue;
            }
            self.on_path[root] = true;
            self.path.clear();
            self.path.push((usize::MAX, first_out));
            self.extend(root, first_out, t, out);
            self.on_path[root] = false;
        }
    }

    fn extend(&mut self, root: usize, first_out: usize, in_stub: usize, out: &mut Vec<Cycle>) {
        let g = self.g;
        let v = RotationGraph::vertex_of(in_stub);
        let used = self.path.len();
        self.on_path[v] = true;
        for s in RotationGraph::stubs_of(v) {
            if s == in_stub {
                continue;
            }
            let t = g.partner(s);
            let w = RotationGraph::vertex_of(t);
            if w == root {
                if first_out < t {
                    self.path.push((in_stub, s));
                    let mut steps = self.path.clone();
                    steps[0].0 = t;
                    out.push(Cycle::canonical(&steps));
                    self.path.pop();
                }
            } else if w > root && !self.on_path[w] && used < self.max_len && self.can_return(w, used + 1) {
                self.path.push((in_stub, s));
                self.extend(root, first_out, t, out);
                self.path.pop();
            }
        }
        self.on_path[v] = false;
    }
}

/// Shared edges `j` and connected components `p` of `C1 ∩ C2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionProfile {
    pub shared_edges: usize,
    pub components: usize,
}

pub fn intersection_profile(c1: &Cycle, c2: &Cycle) -> Result<IntersectionProfile> {
    if c1 == c2 {
        return Err(Error::IdenticalCycles);
    }
    let v1: HashSet<usize> = c1.vertices().collect();
    let shared: Vec<usize> = c2.vertices().filter(|v| v1.contains(v)).collect();
    if shared.is_empty() {
        return Ok(IntersectionProfile {
            shared_edges: 0,
            components: 0,
        });
    }
    let e1: HashSet<usize> = c1.edges().collect();
    let index: HashMap<usize, usize> = shared.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..shared.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = shared.len();
    let mut shared_edges = 0;
    let k = c2.steps.len();
    for j in 0..k {
        let out = c2.steps[j].1 as usize;
        let next_in = c2.steps[(j + 1) % k].0 as usize;
        if !e1.contains(&out.min(next_in)) {
            continue;
        }
        shared_edges += 1;
        let a = find(&mut parent, index[&(out / 3)]);
        let b = find(&mut parent, index[&(next_in / 3)]);
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    Ok(IntersectionProfile {
        shared_edges,
        components,
    })
}

/// Whether deleting every vertex of `cycles` (with incident edges) leaves a
/// disconnected remainder. An empty remainder counts as not disconnected.
pub fn is_disconnecting(g: &RotationGraph, cycles: &[&Cycle]) -> bool {
    let mut removed = vec![false; g.vertex_count()];
    let mut removed_count = 0;
    for c in cycles {
        for v in c.vertices() {
            if !std::mem::replace(&mut removed[v], true) {
                removed_count += 1;
            }
        }
    }
    let remaining = g.vertex_count() - removed_count;
    let Some(start) = (0..g.vertex_count()).find(|&v| !removed[v]) else {
        return false;
    };
    let mut seen = removed;
    seen[start] = true;
    let mut stack = vec![start];
    let mut reached = 1;
    while let Some(v) = stack.pop() {
        for s in RotationGraph::stubs_of(v) {
            let w = RotationGraph::vertex_of(g.partner(s));
            if !seen[w] {
                seen[w] = true;
                reached += 1;
                stack.push(w);
            }
        }
    }
    reached < remaining
}
