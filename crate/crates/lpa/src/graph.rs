//! Finite directed graphs, paths, cycles and the vertex-set machinery.
//!
//! The graph `E = (E⁰, E¹, r, s)` is the ground object of the whole
//! engine. Everything here is finite: every vertex is either a sink or a
//! finite emitter, so every finite path extends to a boundary point
//! (a path ending at a sink, a sink vertex, or an infinite path).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },
    #[error("edge `{edge}` has endpoint `{vertex}` that is not a declared vertex")]
    DanglingEndpoint { edge: String, vertex: String },
    #[error("vertex set must be nonempty")]
    EmptyVertexSet,
    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge id `{0}`")]
    UnknownEdge(String),
    #[error("vertex enumeration cap exceeded: {vertices} vertices > cap {cap}")]
    CapExceeded { vertices: usize, cap: usize },
}

/// Index into the graph's (name-sorted) vertex table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

/// Index into the graph's (name-sorted) edge table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

/// JSON wire form of a graph, as accepted by the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub id: String,
    pub src: String,
    pub dst: String,
}

/// A finite directed graph with id-keyed vertices and edges.
///
/// Vertex and edge tables are sorted by name at construction, so the
/// numeric id order coincides with lexicographic name order; every
/// canonical ordering downstream leans on this.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_names: Vec<String>,
    edge_names: Vec<String>,
    /// Per edge: (source, destination).
    endpoints: Vec<(VertexId, VertexId)>,
    /// Per vertex: out-edges, sorted.
    out_edges: Vec<Vec<EdgeId>>,
}

impl Graph {
    pub fn build(spec: &GraphSpec) -> Result<Graph, GraphError> {
        if spec.vertices.is_empty() {
            return Err(GraphError::EmptyVertexSet);
        }
        let mut vertex_names = spec.vertices.clone();
        vertex_names.sort();
        for w in vertex_names.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateId {
                    kind: "vertex",
                    id: w[0].clone(),
                });
            }
        }
        let mut edge_specs: Vec<&EdgeSpec> = spec.edges.iter().collect();
        edge_specs.sort_by(|a, b| a.id.cmp(&b.id));
        for w in edge_specs.windows(2) {
            if w[0].id == w[1].id {
                return Err(GraphError::DuplicateId {
                    kind: "edge",
                    id: w[0].id.clone(),
                });
            }
        }
        let vertex_index = |name: &str| -> Option<VertexId> {
            vertex_names
                .binary_search_by(|v| v.as_str().cmp(name))
                .ok()
                .map(|i| VertexId(i as u32))
        };
        let mut edge_names = Vec::with_capacity(edge_specs.len());
        let mut endpoints = Vec::with_capacity(edge_specs.len());
        for e in &edge_specs {
            let src = vertex_index(&e.src).ok_or_else(|| GraphError::DanglingEndpoint {
                edge: e.id.clone(),
                vertex: e.src.clone(),
            })?;
            let dst = vertex_index(&e.dst).ok_or_else(|| GraphError::DanglingEndpoint {
                edge: e.id.clone(),
                vertex: e.dst.clone(),
            })?;
            edge_names.push(e.id.clone());
            endpoints.push((src, dst));
        }
        let mut out_edges = vec![Vec::new(); vertex_names.len()];
        for (i, &(src, _)) in endpoints.iter().enumerate() {
            out_edges[src.0 as usize].push(EdgeId(i as u32));
        }
        Ok(Graph {
            vertex_names,
            edge_names,
            endpoints,
            out_edges,
        })
    }

    /// Convenience builder from name lists; mostly for tests and the catalog.
    pub fn from_parts(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<Graph, GraphError> {
        Graph::build(&GraphSpec {
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            edges: edges
                .iter()
                .map(|(id, src, dst)| EdgeSpec {
                    id: id.to_string(),
                    src: src.to_string(),
                    dst: dst.to_string(),
                })
                .collect(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_names.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_names.len() as u32).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edge_names.len() as u32).map(EdgeId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0 as usize]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edge_names[e.0 as usize]
    }

    pub fn vertex_by_name(&self, name: &str) -> Result<VertexId, GraphError> {
        self.vertex_names
            .binary_search_by(|v| v.as_str().cmp(name))
            .map(|i| VertexId(i as u32))
            .map_err(|_| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn edge_by_name(&self, name: &str) -> Result<EdgeId, GraphError> {
        self.edge_names
            .binary_search_by(|v| v.as_str().cmp(name))
            .map(|i| EdgeId(i as u32))
            .map_err(|_| GraphError::UnknownEdge(name.to_string()))
    }

    pub fn src(&self, e: EdgeId) -> VertexId {
        self.endpoints[e.0 as usize].0
    }

    pub fn dst(&self, e: EdgeId) -> VertexId {
        self.endpoints[e.0 as usize].1
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v.0 as usize]
    }

    pub fn is_sink(&self, v: VertexId) -> bool {
        self.out_edges(v).is_empty()
    }

    pub fn sinks(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.is_sink(v)).collect()
    }

    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec {
            vertices: self.vertex_names.clone(),
            edges: self
                .edges()
                .map(|e| EdgeSpec {
                    id: self.edge_name(e).to_string(),
                    src: self.vertex_name(self.src(e)).to_string(),
                    dst: self.vertex_name(self.dst(e)).to_string(),
                })
                .collect(),
        }
    }
}

/// A finite path: a trivial path at a vertex, or a composable nonempty
/// edge sequence. `|a|` is the number of edges (0 for trivial paths).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    src: VertexId,
    edges: Vec<EdgeId>,
}

impl Path {
    pub fn trivial(v: VertexId) -> Path {
        Path {
            src: v,
            edges: Vec::new(),
        }
    }

    pub fn from_edges(g: &Graph, edges: &[EdgeId]) -> Option<Path> {
        let first = *edges.first()?;
        for w in edges.windows(2) {
            if g.dst(w[0]) != g.src(w[1]) {
                return None;
            }
        }
        Some(Path {
            src: g.src(first),
            edges: edges.to_vec(),
        })
    }

    pub fn from_edge_names(g: &Graph, names: &[&str]) -> Result<Option<Path>, GraphError> {
        let ids: Result<Vec<EdgeId>, GraphError> =
            names.iter().map(|n| g.edge_by_name(n)).collect();
        Ok(Path::from_edges(g, &ids?))
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn source(&self) -> VertexId {
        self.src
    }

    pub fn range(&self, g: &Graph) -> VertexId {
        match self.edges.last() {
            Some(&e) => g.dst(e),
            None => self.src,
        }
    }

    /// `self · other`, when `r(self) = s(other)`.
    pub fn compose(&self, g: &Graph, other: &Path) -> Option<Path> {
        if self.range(g) != other.source() {
            return None;
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Some(Path {
            src: self.src,
            edges,
        })
    }

    pub fn extend_edge(&self, g: &Graph, e: EdgeId) -> Option<Path> {
        if self.range(g) != g.src(e) {
            return None;
        }
        let mut edges = self.edges.clone();
        edges.push(e);
        Some(Path {
            src: self.src,
            edges,
        })
    }

    pub fn is_closed(&self, g: &Graph) -> bool {
        !self.is_trivial() && self.range(g) == self.src
    }

    /// `self^m`; requires a closed path for m ≥ 2.
    pub fn repeat(&self, g: &Graph, m: usize) -> Option<Path> {
        if m == 0 {
            return Some(Path::trivial(self.src));
        }
        let mut acc = self.clone();
        for _ in 1..m {
            acc = acc.compose(g, self)?;
        }
        Some(acc)
    }

    /// The "beginning of" relation: is `self` a prefix of `other`?
    /// A trivial path at `v` is a prefix of any path with source `v`.
    pub fn is_prefix_of(&self, other: &Path) -> bool {
        if self.src != other.src {
            return false;
        }
        other.edges.len() >= self.edges.len() && other.edges[..self.edges.len()] == self.edges[..]
    }

    /// Drop a prefix, keeping the tail (trivial tail at the range if equal).
    pub fn strip_prefix(&self, g: &Graph, prefix: &Path) -> Option<Path> {
        if !prefix.is_prefix_of(self) {
            return None;
        }
        let tail = &self.edges[prefix.len()..];
        Some(match tail.first() {
            Some(&e) => Path {
                src: g.src(e),
                edges: tail.to_vec(),
            },
            None => Path::trivial(self.range(g)),
        })
    }

    pub fn prefix(&self, g: &Graph, len: usize) -> Path {
        assert!(len <= self.len());
        if len == 0 {
            Path::trivial(self.src)
        } else {
            Path {
                src: g.src(self.edges[0]),
                edges: self.edges[..len].to_vec(),
            }
        }
    }

    pub fn render(&self, g: &Graph) -> String {
        if self.is_trivial() {
            g.vertex_name(self.src).to_string()
        } else {
            self.edges
                .iter()
                .map(|&e| g.edge_name(e))
                .collect::<Vec<_>>()
                .join(" ")
        }
    }
}

// Paths are ordered by (length, source-for-trivial / edge sequence);
// since edge ids are name-sorted this is the canonical (length,
// lexicographic) order used for all deterministic output.
impl Ord for Path {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.edges
            .len()
            .cmp(&other.edges.len())
            .then_with(|| {
                if self.edges.is_empty() {
                    self.src.cmp(&other.src)
                } else {
                    self.edges.cmp(&other.edges)
                }
            })
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A representable boundary point: a finite path to a sink, a sink vertex,
/// or an eventually periodic infinite path `prefix · cycle^∞`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointDescriptor {
    FiniteToSink(Path),
    SinkVertex(VertexId),
    EventuallyPeriodic { prefix: Path, cycle: Path },
}

impl PointDescriptor {
    /// Canonical representative: primitive cycle, minimal prefix.
    pub fn normalize(self, g: &Graph) -> PointDescriptor {
        match self {
            PointDescriptor::FiniteToSink(p) if p.is_trivial() => {
                PointDescriptor::SinkVertex(p.source())
            }
            PointDescriptor::EventuallyPeriodic { prefix, cycle } => {
                // Shrink the cycle to its primitive root.
                let n = cycle.len();
                let mut cyc = cycle;
                for d in 1..n {
                    if n % d != 0 {
                        continue;
                    }
                    let root = cyc.prefix(g, d);
                    if root.is_closed(g) && root.repeat(g, n / d) == Some(cyc.clone()) {
                        cyc = root;
                        break;
                    }
                }
                // Absorb prefix letters that merely rotate the cycle.
                let mut pre = prefix;
                while let Some(&last) = pre.edges().last() {
                    if *cyc.edges().last().unwrap() != last {
                        break;
                    }
                    pre = pre.prefix(g, pre.len() - 1);
                    // rotate cycle backwards: c1..ck -> ck c1..c_{k-1}
                    let k = cyc.len();
                    let mut edges = vec![*cyc.edges().last().unwrap()];
                    edges.extend_from_slice(&cyc.edges()[..k - 1]);
                    cyc = Path::from_edges(g, &edges).expect("rotated cycle composes");
                }
                PointDescriptor::EventuallyPeriodic { prefix: pre, cycle: cyc }
            }
            other => other,
        }
    }

    pub fn source(&self) -> VertexId {
        match self {
            PointDescriptor::FiniteToSink(p) => p.source(),
            PointDescriptor::SinkVertex(v) => *v,
            PointDescriptor::EventuallyPeriodic { prefix, cycle } => {
                if prefix.is_trivial() {
                    cycle.source()
                } else {
                    prefix.source()
                }
            }
        }
    }

    /// The i-th edge (0-based) of the underlying (finite or infinite) word.
    pub fn letter(&self, i: usize) -> Option<EdgeId> {
        match self {
            PointDescriptor::FiniteToSink(p) => p.edges().get(i).copied(),
            PointDescriptor::SinkVertex(_) => None,
            PointDescriptor::EventuallyPeriodic { prefix, cycle } => {
                if i < prefix.len() {
                    Some(prefix.edges()[i])
                } else {
                    Some(cycle.edges()[(i - prefix.len()) % cycle.len()])
                }
            }
        }
    }

    /// Does the underlying word begin with the path `mu`?
    /// A trivial `mu` at `v` matches iff the point starts at `v`.
    pub fn has_path_prefix(&self, mu: &Path) -> bool {
        if mu.is_trivial() {
            return self.source() == mu.source();
        }
        mu.edges()
            .iter()
            .enumerate()
            .all(|(i, &e)| self.letter(i) == Some(e))
    }

    /// Remove the first `k` letters. Fails if fewer than `k` letters exist.
    pub fn strip(&self, g: &Graph, k: usize) -> Option<PointDescriptor> {
        if k == 0 {
            return Some(self.clone());
        }
        match self {
            PointDescriptor::SinkVertex(_) => None,
            PointDescriptor::FiniteToSink(p) => {
                if k > p.len() {
                    None
                } else {
                    let tail = p.strip_prefix(g, &p.prefix(g, k)).unwrap();
                    Some(if tail.is_trivial() {
                        PointDescriptor::SinkVertex(tail.source())
                    } else {
                        PointDescriptor::FiniteToSink(tail)
                    })
                }
            }
            PointDescriptor::EventuallyPeriodic { prefix, cycle } => {
                if k <= prefix.len() {
                    let pre = prefix.strip_prefix(g, &prefix.prefix(g, k)).unwrap();
                    Some(
                        PointDescriptor::EventuallyPeriodic {
                            prefix: pre,
                            cycle: cycle.clone(),
                        }
                        .normalize(g),
                    )
                } else {
                    let rot = (k - prefix.len()) % cycle.len();
                    let mut edges = cycle.edges()[rot..].to_vec();
                    edges.extend_from_slice(&cycle.edges()[..rot]);
                    let cyc = Path::from_edges(g, &edges).expect("rotated cycle composes");
                    Some(
                        PointDescriptor::EventuallyPeriodic {
                            prefix: Path::trivial(cyc.source()),
                            cycle: cyc,
                        }
                        .normalize(g),
                    )
                }
            }
        }
    }

    /// Prepend the path `a`; requires `r(a) = s(self)`.
    pub fn prepend(&self, g: &Graph, a: &Path) -> Option<PointDescriptor> {
        if a.range(g) != self.source() {
            return None;
        }
        if a.is_trivial() {
            return Some(self.clone());
        }
        Some(match self {
            PointDescriptor::SinkVertex(_) => PointDescriptor::FiniteToSink(a.clone()),
            PointDescriptor::FiniteToSink(p) => {
                PointDescriptor::FiniteToSink(a.compose(g, p).unwrap())
            }
            PointDescriptor::EventuallyPeriodic { prefix, cycle } => {
                let pre = if prefix.is_trivial() {
                    a.clone()
                } else {
                    a.compose(g, prefix).unwrap()
                };
                PointDescriptor::EventuallyPeriodic {
                    prefix: pre,
                    cycle: cycle.clone(),
                }
                .normalize(g)
            }
        })
    }

    pub fn render(&self, g: &Graph) -> String {
        match self {
            PointDescriptor::FiniteToSink(p) => p.render(g),
            PointDescriptor::SinkVertex(v) => g.vertex_name(*v).to_string(),
            PointDescriptor::EventuallyPeriodic { prefix, cycle } => {
                if prefix.is_trivial() {
                    format!("({})^inf", cycle.render(g))
                } else {
                    format!("{} ({})^inf", prefix.render(g), cycle.render(g))
                }
            }
        }
    }
}

/// All finite paths of length in `1..=max_len`, canonical order.
pub fn paths_up_to(g: &Graph, max_len: usize) -> Vec<Path> {
    let mut out = Vec::new();
    let mut frontier: Vec<Path> = g.vertices().map(Path::trivial).collect();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &frontier {
            for &e in g.out_edges(p.range(g)) {
                next.push(p.extend_edge(g, e).unwrap());
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.sort();
    out
}

/// All boundary points with description size ≤ `max_size` (path length for
/// finite points, |prefix| + |cycle| for eventually periodic ones),
/// canonicalized and deduplicated.
pub fn enumerate_points(g: &Graph, max_size: usize) -> Vec<PointDescriptor> {
    let mut out = BTreeSet::new();
    for v in g.vertices() {
        if g.is_sink(v) {
            out.insert(PointDescriptor::SinkVertex(v));
        }
    }
    let mut prefixes: Vec<Path> = g.vertices().map(Path::trivial).collect();
    prefixes.extend(paths_up_to(g, max_size));
    for p in &prefixes {
        if !p.is_trivial() && g.is_sink(p.range(g)) {
            out.insert(PointDescriptor::FiniteToSink(p.clone()));
        }
        // attach cycles at r(p)
        let budget = max_size.saturating_sub(p.len());
        for c in paths_up_to(g, budget) {
            if c.is_closed(g) && c.source() == p.range(g) {
                out.insert(
                    PointDescriptor::EventuallyPeriodic {
                        prefix: p.clone(),
                        cycle: c,
                    }
                    .normalize(g),
                );
            }
        }
    }
    out.into_iter().collect()
}

/// A simple cycle together with its exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionLVerdict {
    pub holds: bool,
    /// An exitless cycle, when the condition fails.
    pub witness: Option<Path>,
}

/// Enumerate the simple cycles of the graph (distinct vertices along the
/// cycle), each rooted at its minimal vertex, in canonical order.
pub fn simple_cycles(g: &Graph) -> Vec<Path> {
    let mut cycles = Vec::new();
    for root in g.vertices() {
        // DFS over paths from `root` through vertices ≥ root, no repeats.
        let mut stack: Vec<(Path, BTreeSet<VertexId>)> = vec![(
            Path::trivial(root),
            std::iter::once(root).collect(),
        )];
        while let Some((path, seen)) = stack.pop() {
            let head = path.range(g);
            for &e in g.out_edges(head) {
                let to = g.dst(e);
                if to == root {
                    cycles.push(path.extend_edge(g, e).unwrap());
                } else if to > root && !seen.contains(&to) {
                    let mut seen2 = seen.clone();
                    seen2.insert(to);
                    stack.push((path.extend_edge(g, e).unwrap(), seen2));
                }
            }
        }
    }
    cycles.sort();
    cycles
}

/// Does the closed path have an exit: an edge `t ≠ b_i` with `s(t) = s(b_i)`?
pub fn cycle_has_exit(g: &Graph, cycle: &Path) -> bool {
    cycle
        .edges()
        .iter()
        .any(|&b_i| g.out_edges(g.src(b_i)).iter().any(|&t| t != b_i))
}

/// Condition (L): every closed path has an exit. Checking simple cycles
/// suffices, since any closed path traverses one.
pub fn condition_l(g: &Graph) -> ConditionLVerdict {
    for cycle in simple_cycles(g) {
        if !cycle_has_exit(g, &cycle) {
            return ConditionLVerdict {
                holds: false,
                witness: Some(cycle),
            };
        }
    }
    ConditionLVerdict {
        holds: true,
        witness: None,
    }
}

pub fn is_hereditary(g: &Graph, set: &BTreeSet<VertexId>) -> bool {
    set.iter().all(|&v| {
        g.out_edges(v).iter().all(|&e| set.contains(&g.dst(e)))
    })
}

pub fn is_saturated(g: &Graph, set: &BTreeSet<VertexId>) -> bool {
    g.vertices().all(|v| {
        let out = g.out_edges(v);
        if out.is_empty() || set.contains(&v) {
            true
        } else {
            !out.iter().all(|&e| set.contains(&g.dst(e)))
        }
    })
}

/// Smallest hereditary and saturated superset of `seed`, by fixed-point
/// iteration of the two closure rules.
pub fn hs_closure(g: &Graph, seed: &BTreeSet<VertexId>) -> BTreeSet<VertexId> {
    let mut h = seed.clone();
    loop {
        let mut changed = false;
        for v in g.vertices() {
            if h.contains(&v) {
                for &e in g.out_edges(v) {
                    if h.insert(g.dst(e)) {
                        changed = true;
                    }
                }
            }
        }
        for v in g.vertices() {
            let out = g.out_edges(v);
            if !out.is_empty()
                && !h.contains(&v)
                && out.iter().all(|&e| h.contains(&g.dst(e)))
            {
                h.insert(v);
                changed = true;
            }
        }
        if !changed {
            return h;
        }
    }
}

/// All simultaneously hereditary and saturated vertex subsets, in
/// (size, lexicographic) order.
pub fn enumerate_hs_subsets(g: &Graph, cap: usize) -> Result<Vec<BTreeSet<VertexId>>, GraphError> {
    let n = g.vertex_count();
    if n > cap {
        return Err(GraphError::CapExceeded { vertices: n, cap });
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let set: BTreeSet<VertexId> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| VertexId(i as u32))
            .collect();
        if is_hereditary(g, &set) && is_saturated(g, &set) {
            out.push(set);
        }
    }
    out.sort_by(|a, b| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.iter().collect::<Vec<_>>().cmp(&b.iter().collect::<Vec<_>>()))
    });
    Ok(out)
}

/// The depth partition of `X_root`: all paths extending `root` by exactly
/// `depth` edges, plus shorter extensions that end at sinks (including the
/// root itself if its range is a sink). The corresponding `X_c` are
/// pairwise disjoint with union `X_root`.
pub fn partition_basis(g: &Graph, root: &Path, depth: usize) -> Vec<Path> {
    assert!(depth >= 1, "partition depth must be ≥ 1");
    let mut out = Vec::new();
    let mut frontier = vec![root.clone()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for p in frontier {
            let r = p.range(g);
            if g.is_sink(r) {
                out.push(p);
            } else {
                for &e in g.out_edges(r) {
                    next.push(p.extend_edge(g, e).unwrap());
                }
            }
        }
        frontier = next;
    }
    out.extend(frontier);
    out.sort();
    out
}

/// Sorted vertex names, for reports.
pub fn render_vertex_set(g: &Graph, set: &BTreeSet<VertexId>) -> Vec<String> {
    set.iter().map(|&v| g.vertex_name(v).to_string()).collect()
}

pub fn vertex_set(g: &Graph, names: &[&str]) -> Result<BTreeSet<VertexId>, GraphError> {
    names.iter().map(|n| g.vertex_by_name(n)).collect()
}

/// True when the graph has no (simple) cycle.
pub fn is_acyclic(g: &Graph) -> bool {
    simple_cycles(g).is_empty()
}

/// Number of paths (including trivial ones) ending at each vertex;
/// only meaningful on acyclic graphs.
pub fn paths_ending_at(g: &Graph) -> BTreeMap<VertexId, usize> {
    let mut counts: BTreeMap<VertexId, usize> = g.vertices().map(|v| (v, 1)).collect();
    let max_len = g.vertex_count();
    for p in paths_up_to(g, max_len) {
        *counts.get_mut(&p.range(g)).unwrap() += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn build_catalog_graphs() {
        let r2 = catalog::r2();
        assert_eq!(r2.vertex_count(), 1);
        assert_eq!(r2.edge_count(), 2);
        let a2 = catalog::a2();
        assert_eq!(a2.vertex_count(), 2);
    }

    #[test]
    fn build_rejects_dangling_endpoint() {
        let err = Graph::from_parts(&["v"], &[("e", "x", "v")]).unwrap_err();
        assert!(matches!(err, GraphError::DanglingEndpoint { .. }));
    }

    #[test]
    fn build_rejects_duplicates_and_empty() {
        let err = Graph::from_parts(&["v", "v"], &[]).unwrap_err();
        assert!(matches!(err, GraphError::DuplicateId { .. }));
        let err = Graph::from_parts(&[], &[]).unwrap_err();
        assert_eq!(err, GraphError::EmptyVertexSet);
    }

    #[test]
    fn graph_json_rejects_unknown_fields() {
        let bad = r#"{"vertices": ["v"], "edges": [], "extra": 1}"#;
        assert!(serde_json::from_str::<GraphSpec>(bad).is_err());
    }

    #[test]
    fn condition_l_on_catalog() {
        assert!(condition_l(&catalog::r2()).holds);
        assert!(condition_l(&catalog::a2()).holds);
        let verdict = condition_l(&catalog::single_loop());
        assert!(!verdict.holds);
        let g = catalog::single_loop();
        let w = verdict.witness.unwrap();
        assert_eq!(w.render(&g), "g");
        // the witness has out-degree exactly 1 along its traversal
        for &e in w.edges() {
            assert_eq!(g.out_edges(g.src(e)).len(), 1);
        }
    }

    #[test]
    fn hs_closure_examples() {
        let t = catalog::t_graph();
        let w = vertex_set(&t, &["w"]).unwrap();
        assert_eq!(hs_closure(&t, &w), w);
        let a2 = catalog::a2();
        assert_eq!(hs_closure(&a2, &BTreeSet::new()), BTreeSet::new());
        let v2 = vertex_set(&a2, &["v2"]).unwrap();
        assert_eq!(hs_closure(&a2, &v2), vertex_set(&a2, &["v1", "v2"]).unwrap());
    }

    #[test]
    fn hs_subsets_examples() {
        let a2 = catalog::a2();
        let subs = enumerate_hs_subsets(&a2, 16).unwrap();
        assert_eq!(subs.len(), 2);
        assert!(subs[0].is_empty());
        assert_eq!(subs[1].len(), 2);

        let t = catalog::t_graph();
        let subs = enumerate_hs_subsets(&t, 16).unwrap();
        let rendered: Vec<Vec<String>> =
            subs.iter().map(|s| render_vertex_set(&t, s)).collect();
        assert_eq!(
            rendered,
            vec![
                Vec::<String>::new(),
                vec!["w".to_string()],
                vec!["u".to_string(), "w".to_string()]
            ]
        );

        let r2 = catalog::r2();
        assert_eq!(enumerate_hs_subsets(&r2, 16).unwrap().len(), 2);
    }

    #[test]
    fn hs_cap() {
        let r2 = catalog::r2();
        assert!(matches!(
            enumerate_hs_subsets(&r2, 0),
            Err(GraphError::CapExceeded { .. })
        ));
    }

    #[test]
    fn partition_basis_examples() {
        let r2 = catalog::r2();
        let v = r2.vertex_by_name("v").unwrap();
        let parts = partition_basis(&r2, &Path::trivial(v), 2);
        let names: Vec<String> = parts.iter().map(|p| p.render(&r2)).collect();
        assert_eq!(names, vec!["e e", "e f", "f e", "f f"]);

        let a2 = catalog::a2();
        let v1 = a2.vertex_by_name("v1").unwrap();
        let parts = partition_basis(&a2, &Path::trivial(v1), 2);
        let names: Vec<String> = parts.iter().map(|p| p.render(&a2)).collect();
        assert_eq!(names, vec!["e"]);

        let t = catalog::t_graph();
        let u = t.vertex_by_name("u").unwrap();
        let parts = partition_basis(&t, &Path::trivial(u), 1);
        let names: Vec<String> = parts.iter().map(|p| p.render(&t)).collect();
        assert_eq!(names, vec!["g", "h"]);
    }

    #[test]
    fn partition_is_prefix_incomparable_and_covers_points() {
        for (_, g) in catalog::all() {
            for v in g.vertices() {
                for depth in 1..=2usize {
                    let parts = partition_basis(&g, &Path::trivial(v), depth);
                    for (i, p) in parts.iter().enumerate() {
                        for q in &parts[i + 1..] {
                            assert!(!p.is_prefix_of(q) && !q.is_prefix_of(p));
                        }
                    }
                    for pt in enumerate_points(&g, 2 * depth) {
                        if pt.source() != v {
                            continue;
                        }
                        let n = parts.iter().filter(|p| pt.has_path_prefix(p)).count();
                        assert_eq!(n, 1, "point {} in graph", pt.render(&g));
                    }
                }
            }
        }
    }

    #[test]
    fn point_normalization() {
        let r2 = catalog::r2();
        let e = r2.edge_by_name("e").unwrap();
        let ee = Path::from_edges(&r2, &[e, e]).unwrap();
        let single = Path::from_edges(&r2, &[e]).unwrap();
        let p1 = PointDescriptor::EventuallyPeriodic {
            prefix: single.clone(),
            cycle: ee,
        }
        .normalize(&r2);
        let p2 = PointDescriptor::EventuallyPeriodic {
            prefix: Path::trivial(r2.vertex_by_name("v").unwrap()),
            cycle: single,
        }
        .normalize(&r2);
        assert_eq!(p1, p2);
    }
}
