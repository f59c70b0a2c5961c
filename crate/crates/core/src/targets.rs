//! The two 16-vertex target graphs and the small-graph tools used to check them.
//!
//! Vertices are numbered `1..=vertex_count` everywhere in the public API, so the
//! canonical edge lists can be written down verbatim. Internally each graph keeps
//! one adjacency bitmask per vertex (bit `v - 1` set when `v` is a neighbour).

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest vertex count a [`SmallGraph`] can hold (one `u64` mask per vertex).
pub const MAX_VERTICES: usize = 64;

/// Canonical Shrikhande edge list, vertices 1..=16.
#[rustfmt::skip]
pub const SHRIKHANDE_EDGES: [(u8, u8); 48] = [
    (1, 2), (1, 4), (1, 5), (1, 8), (1, 13), (1, 14), (2, 3), (2, 5),
    (2, 6), (2, 14), (2, 15), (3, 4), (3, 6), (3, 7), (3, 15), (3, 16),
    (4, 7), (4, 8), (4, 13), (4, 16), (5, 6), (5, 8), (5, 9), (5, 12),
    (6, 7), (6, 9), (6, 10), (7, 8), (7, 10), (7, 11), (8, 11), (8, 12),
    (9, 10), (9, 12), (9, 13), (9, 16), (10, 11), (10, 13), (10, 14), (11, 12),
    (11, 14), (11, 15), (12, 15), (12, 16), (13, 14), (13, 16), (14, 15), (15, 16),
];

/// Canonical L(K4,4) edge list, vertices 1..=16.
#[rustfmt::skip]
pub const LINE_K44_EDGES: [(u8, u8); 48] = [
    (1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (1, 7), (2, 3), (2, 4),
    (2, 8), (2, 11), (2, 12), (3, 4), (3, 9), (3, 13), (3, 15), (4, 10),
    (4, 14), (4, 16), (5, 6), (5, 7), (5, 8), (5, 9), (5, 10), (6, 7),
    (6, 11), (6, 13), (6, 14), (7, 12), (7, 15), (7, 16), (8, 9), (8, 10),
    (8, 11), (8, 12), (9, 10), (9, 13), (9, 15), (10, 14), (10, 16), (11, 12),
    (11, 13), (11, 14), (12, 15), (12, 16), (13, 14), (13, 15), (14, 16), (15, 16),
];

/// A simple undirected graph on at most 64 vertices.
#[derive(Clone, PartialEq, Eq)]
pub struct SmallGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<u64>,
}

impl fmt::Debug for SmallGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmallGraph")
            .field("vertex_count", &self.vertex_count)
            .field("edges", &self.edges)
            .finish()
    }
}

impl SmallGraph {
    /// Builds a graph from 1-based edges. Endpoint order does not matter, but
    /// loops, repeated edges and out-of-range endpoints are rejected.
    pub fn new<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if vertex_count == 0 || vertex_count > MAX_VERTICES {
            return Err(Error::MalformedGraph(format!(
                "vertex count {vertex_count} outside 1..={MAX_VERTICES}"
            )));
        }
        let mut adjacency = vec![0u64; vertex_count];
        let mut list = Vec::new();
        for (a, b) in edges {
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if u == v {
                return Err(Error::MalformedGraph(format!("loop at vertex {u}")));
            }
            if u < 1 || v > vertex_count {
                return Err(Error::MalformedGraph(format!(
                    "edge {{{u},{v}}} outside 1..={vertex_count}"
                )));
            }
            if adjacency[u - 1] >> (v - 1) & 1 == 1 {
                return Err(Error::MalformedGraph(format!("repeated edge {{{u},{v}}}")));
            }
            adjacency[u - 1] |= 1 << (v - 1);
            adjacency[v - 1] |= 1 << (u - 1);
            list.push((u, v));
        }
        list.sort_unstable();

        let graph = SmallGraph {
            vertex_count,
            edges: list,
            adjacency,
        };
        // The edge list and the bitmasks must describe the same graph.
        let from_masks: Vec<(usize, usize)> = (1..=vertex_count)
            .flat_map(|u| {
                graph
                    .neighbors(u)
                    .filter(move |&v| v > u)
                    .map(move |v| (u, v))
            })
            .collect();
        if from_masks != graph.edges {
            return Err(Error::MalformedGraph(
                "edge list and adjacency masks disagree".into(),
            ));
        }
        Ok(graph)
    }

    /// The complete graph on `n` vertices.
    pub fn complete(n: usize) -> Result<Self> {
        SmallGraph::new(n, (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))))
    }

    /// The path `1 - 2 - ... - n`.
    pub fn path(n: usize) -> Result<Self> {
        SmallGraph::new(n, (1..n).map(|u| (u, u + 1)))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, in ascending lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Adjacency bitmask of vertex `v` (bit `w - 1` set when `w ~ v`).
    pub fn adjacency_mask(&self, v: usize) -> u64 {
        self.adjacency[v - 1]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u == 0 || v == 0 || u > self.vertex_count || v > self.vertex_count {
            return false;
        }
        self.adjacency[u - 1] >> (v - 1) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v - 1].count_ones() as usize
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let mut mask = self.adjacency[v - 1];
        std::iter::from_fn(move || {
            if mask == 0 {
                return None;
            }
            let bit = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(bit + 1)
        })
    }

    /// Subgraph induced on `vertices`, renumbered `1..=vertices.len()` in the
    /// order given.
    pub fn induced(&self, vertices: &[usize]) -> Result<SmallGraph> {
        let mut edges = Vec::new();
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    edges.push((i + 1, j + 1));
                }
            }
        }
        SmallGraph::new(vertices.len(), edges)
    }

    /// Image of this graph under `perm`, where `perm[v - 1]` is the new name of `v`.
    pub fn relabel(&self, perm: &[usize]) -> Result<SmallGraph> {
        if perm.len() != self.vertex_count {
            return Err(Error::MalformedGraph("permutation has wrong length".into()));
        }
        SmallGraph::new(
            self.vertex_count,
            self.edges.iter().map(|&(u, v)| (perm[u - 1], perm[v - 1])),
        )
    }

    /// Dense 0/1 adjacency matrix, row-major, 0-based.
    pub fn adjacency_matrix(&self) -> Vec<Vec<i64>> {
        (1..=self.vertex_count)
            .map(|u| {
                (1..=self.vertex_count)
                    .map(|v| i64::from(self.has_edge(u, v)))
                    .collect()
            })
            .collect()
    }

    /// Renders the edge-list text format: `graph <n>` followed by `u v` lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("graph {}\n", self.vertex_count);
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parses the edge-list text format. Edges must be written with `u < v`
    /// and in ascending order.
    pub fn from_text(text: &str) -> Result<SmallGraph> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty graph file"))?;
        let n = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["graph", n] => n
                .parse::<usize>()
                .map_err(|_| Error::parse(1, format!("bad vertex count {n:?}")))?,
            _ => return Err(Error::parse(1, "expected `graph <vertex_count>`")),
        };
        let mut edges = Vec::new();
        let mut last = (0, 0);
        for (idx, line) in lines {
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::parse(line_no, "non-integer vertex"))?;
            let &[u, v] = fields.as_slice() else {
                return Err(Error::parse(line_no, "expected `u v`"));
            };
            if u >= v {
                return Err(Error::parse(line_no, "edge must be written with u < v"));
            }
            if (u, v) <= last {
                return Err(Error::parse(line_no, "edges out of ascending order"));
            }
            last = (u, v);
            edges.push((u, v));
        }
        SmallGraph::new(n, edges).map_err(|e| Error::parse(1, e.to_string()))
    }

    fn neighbour_degree_profile(&self, v: usize) -> (usize, Vec<usize>) {
        let mut degs: Vec<usize> = self.neighbors(v).map(|w| self.degree(w)).collect();
        degs.sort_unstable();
        (self.degree(v), degs)
    }
}

/// Which of the two canonical targets a design decomposes into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TargetId {
    Shrikhande,
    LineK44,
}

impl TargetId {
    pub const ALL: [TargetId; 2] = [TargetId::Shrikhande, TargetId::LineK44];

    /// Short name used in certificates, catalog files and the CLI.
    pub fn as_str(self) -> &'static str {
        match self {
            TargetId::Shrikhande => "shrikhande",
            TargetId::LineK44 => "lk44",
        }
    }

    pub fn graph(self) -> &'static TargetGraph {
        match self {
            TargetId::Shrikhande => shrikhande(),
            TargetId::LineK44 => line_k44(),
        }
    }
}

impl fmt::Display for TargetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TargetId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shrikhande" => Ok(TargetId::Shrikhande),
            "lk44" | "line_k44" => Ok(TargetId::LineK44),
            other => Err(Error::Precondition(format!(
                "unknown target graph {other:?} (expected shrikhande or lk44)"
            ))),
        }
    }
}

/// One of the two canonical 16-vertex, 48-edge, 6-regular targets.
#[derive(Debug, Clone)]
pub struct TargetGraph {
    pub id: TargetId,
    pub graph: SmallGraph,
}

impl TargetGraph {
    pub const VERTICES: usize = 16;
    pub const EDGES: usize = 48;

    fn build(id: TargetId, edges: &[(u8, u8)]) -> TargetGraph {
        let graph = SmallGraph::new(
            Self::VERTICES,
            edges.iter().map(|&(u, v)| (u as usize, v as usize)),
        )
        .expect("canonical edge list is well formed");
        assert_eq!(graph.edge_count(), Self::EDGES);
        assert!((1..=16).all(|v| graph.degree(v) == 6));
        TargetGraph { id, graph }
    }

    /// Canonical edges as 0-based position pairs, the form used when a
    /// 16-tuple of labels is pushed through the graph.
    pub fn position_pairs(&self) -> [(usize, usize); 48] {
        let mut out = [(0, 0); 48];
        for (slot, &(u, v)) in out.iter_mut().zip(self.graph.edges()) {
            *slot = (u - 1, v - 1);
        }
        out
    }
}

pub fn shrikhande() -> &'static TargetGraph {
    static G: OnceLock<TargetGraph> = OnceLock::new();
    G.get_or_init(|| TargetGraph::build(TargetId::Shrikhande, &SHRIKHANDE_EDGES))
}

pub fn line_k44() -> &'static TargetGraph {
    static G: OnceLock<TargetGraph> = OnceLock::new();
    G.get_or_init(|| TargetGraph::build(TargetId::LineK44, &LINE_K44_EDGES))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SrgParameters {
    pub v: usize,
    pub k: usize,
    pub lambda: usize,
    pub mu: usize,
}

/// Strongly regular parameters `(v, k, λ, μ)` of `g`, or `None` if `g` is not
/// strongly regular. Complete and empty graphs report `None` for the
/// parameter that is undefined for them only if some pair contradicts it.
pub fn srg_parameters(g: &SmallGraph) -> Option<SrgParameters> {
    let n = g.vertex_count();
    let k = g.degree(1);
    if (1..=n).any(|v| g.degree(v) != k) {
        return None;
    }
    let mut lambda = None;
    let mut mu = None;
    for u in 1..=n {
        for v in u + 1..=n {
            let common = (g.adjacency_mask(u) & g.adjacency_mask(v)).count_ones() as usize;
            let slot = if g.has_edge(u, v) {
                &mut lambda
            } else {
                &mut mu
            };
            match *slot {
                None => *slot = Some(common),
                Some(c) if c != common => return None,
                _ => {}
            }
        }
    }
    Some(SrgParameters {
        v: n,
        k,
        lambda: lambda.unwrap_or(0),
        mu: mu.unwrap_or(0),
    })
}

/// Searches for an isomorphism from `g` to `h`.
///
/// On success returns `f` with `f[u - 1]` the image of vertex `u`, so that
/// `{u, v} ∈ E(g)` iff `{f(u), f(v)} ∈ E(h)`. Plain backtracking: vertices of
/// `g` are mapped in a connectivity-first order, and a candidate image must
/// agree on degree, on the sorted multiset of neighbour degrees, and on
/// adjacency with every vertex already mapped.
pub fn is_isomorphic(g: &SmallGraph, h: &SmallGraph) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    if n != h.vertex_count() || g.edge_count() != h.edge_count() {
        return None;
    }
    let profile_g: Vec<_> = (1..=n).map(|v| g.neighbour_degree_profile(v)).collect();
    let profile_h: Vec<_> = (1..=n).map(|v| h.neighbour_degree_profile(v)).collect();
    {
        let mut a = profile_g.clone();
        let mut b = profile_h.clone();
        a.sort();
        b.sort();
        if a != b {
            return None;
        }
    }
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| profile_g[i] == profile_h[j]).collect())
        .collect();
    let order = search_order(g);

    struct State<'a> {
        g: &'a SmallGraph,
        h: &'a SmallGraph,
        order: Vec<usize>,
        candidates: Vec<Vec<usize>>,
        image: Vec<usize>,
        used: u64,
    }

    fn extend(s: &mut State<'_>, depth: usize) -> bool {
        if depth == s.order.len() {
            return true;
        }
        let u = s.order[depth];
        for ci in 0..s.candidates[u].len() {
            let x = s.candidates[u][ci];
            if s.used >> x & 1 == 1 {
                continue;
            }
            let consistent = s.order[..depth]
                .iter()
                .all(|&w| s.g.has_edge(u + 1, w + 1) == s.h.has_edge(x + 1, s.image[w] + 1));
            if !consistent {
                continue;
            }
            s.image[u] = x;
            s.used |= 1 << x;
            if extend(s, depth + 1) {
                return true;
            }
            s.used &= !(1 << x);
        }
        false
    }

    let mut state = State {
        g,
        h,
        order,
        candidates,
        image: vec![usize::MAX; n],
        used: 0,
    };
    if extend(&mut state, 0) {
        Some(state.image.into_iter().map(|x| x + 1).collect())
    } else {
        None
    }
}

// 0-based vertex order: repeatedly take the vertex with the most neighbours
// already placed, breaking ties by degree then index.
fn search_order(g: &SmallGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut placed = 0u64;
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| placed >> v & 1 == 0)
            .max_by_key(|&v| {
                let mask = g.adjacency_mask(v + 1);
                ((mask & placed).count_ones(), mask.count_ones(), n - v)
            })
            .expect("unplaced vertex remains");
        placed |= 1 << next;
        order.push(next);
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let n = m.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| m[i][k] * m[k][j]).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn shrikhande_edges_match_canonical_list() {
        let g = &shrikhande().graph;
        assert!(g.has_edge(1, 2) && g.has_edge(15, 16));
        assert!(g.has_edge(2, 1));
        assert!(!g.has_edge(1, 3));
        assert_eq!(g.degree(1), 6);
    }

    #[test]
    fn line_k44_edges_match_canonical_list() {
        let g = &line_k44().graph;
        assert!(g.has_edge(1, 7));
        assert!(!g.has_edge(1, 8));
        assert_eq!(g.degree(16), 6);
    }

    #[test]
    fn both_targets_satisfy_integer_srg_identity() {
        for id in TargetId::ALL {
            let a = id.graph().graph.adjacency_matrix();
            let a2 = square(&a);
            for (i, row) in a2.iter().enumerate() {
                for (j, &entry) in row.iter().enumerate() {
                    let expected = 2 + if i == j { 4 } else { 0 };
                    assert_eq!(entry, expected, "{id} at ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn srg_parameters_of_targets_and_non_examples() {
        let want = SrgParameters {
            v: 16,
            k: 6,
            lambda: 2,
            mu: 2,
        };
        assert_eq!(srg_parameters(&shrikhande().graph), Some(want));
        assert_eq!(srg_parameters(&line_k44().graph), Some(want));
        assert_eq!(srg_parameters(&SmallGraph::path(3).unwrap()), None);
        // C5 is srg(5,2,0,1).
        let c5 = SmallGraph::new(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]).unwrap();
        assert_eq!(
            srg_parameters(&c5),
            Some(SrgParameters {
                v: 5,
                k: 2,
                lambda: 0,
                mu: 1
            })
        );
    }

    #[test]
    fn targets_are_not_isomorphic() {
        assert!(is_isomorphic(&shrikhande().graph, &line_k44().graph).is_none());
        assert!(is_isomorphic(&line_k44().graph, &shrikhande().graph).is_none());
    }

    #[test]
    fn neighbourhood_shapes_distinguish_targets() {
        // Shrikhande: each neighbourhood induces a 6-cycle.
        // L(K4,4): each neighbourhood induces two disjoint triangles.
        let cycle = SmallGraph::new(6, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 6)]).unwrap();
        let triangles =
            SmallGraph::new(6, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)]).unwrap();
        for (target, shape) in [(shrikhande(), &cycle), (line_k44(), &triangles)] {
            for v in 1..=16 {
                let nbrs: Vec<usize> = target.graph.neighbors(v).collect();
                let local = target.graph.induced(&nbrs).unwrap();
                assert!(
                    is_isomorphic(&local, shape).is_some(),
                    "{} vertex {v}",
                    target.id
                );
            }
        }
        assert!(is_isomorphic(&cycle, &triangles).is_none());
    }

    #[test]
    fn small_non_isomorphic_pairs() {
        let k3 = SmallGraph::complete(3).unwrap();
        let p3 = SmallGraph::path(3).unwrap();
        assert!(is_isomorphic(&k3, &p3).is_none());
        let p4 = SmallGraph::path(4).unwrap();
        let star = SmallGraph::new(4, [(1, 2), (1, 3), (1, 4)]).unwrap();
        assert!(is_isomorphic(&p4, &star).is_none());
    }

    #[test]
    fn rejects_malformed_graphs() {
        assert!(SmallGraph::new(3, [(1, 1)]).is_err());
        assert!(SmallGraph::new(3, [(1, 2), (2, 1)]).is_err());
        assert!(SmallGraph::new(3, [(1, 4)]).is_err());
        assert!(SmallGraph::new(3, [(0, 2)]).is_err());
        assert!(SmallGraph::new(65, []).is_err());
    }

    #[test]
    fn edge_list_text_round_trip() {
        let text = shrikhande().graph.to_text();
        assert!(text.starts_with("graph 16\n1 2\n1 4\n"));
        let back = SmallGraph::from_text(&text).unwrap();
        assert_eq!(back, shrikhande().graph);
        assert!(SmallGraph::from_text("graph 3\n2 1\n").is_err());
        assert!(SmallGraph::from_text("graph 3\n1 3\n1 2\n").is_err());
        assert!(SmallGraph::from_text("graf 3\n").is_err());
    }

    #[test]
    fn target_id_names() {
        assert_eq!("lk44".parse::<TargetId>().unwrap(), TargetId::LineK44);
        assert_eq!(
            "shrikhande".parse::<TargetId>().unwrap(),
            TargetId::Shrikhande
        );
        assert!("petersen".parse::<TargetId>().is_err());
    }
}
