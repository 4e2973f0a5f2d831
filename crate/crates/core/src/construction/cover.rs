use num_rational::BigRational;

use crate::polyhedra::{cone_meets_halfplane, FlagPair, PolyhedraError};
use crate::tropical::WeightedFan;
use crate::IntVec;

/// Finite undirected multigraph on vertices `0..n_vertices`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub n_vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize)>) -> Self {
        assert!(edges.iter().all(|&(a, b)| a < n_vertices && b < n_vertices), "edge endpoint out of range");
        Graph { n_vertices, edges }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n_vertices];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    /// Component label of every vertex, labels numbered by first appearance.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.n_vertices);
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        let mut label = vec![usize::MAX; self.n_vertices];
        let mut next = 0;
        let mut out = vec![0; self.n_vertices];
        for (v, slot) in out.iter_mut().enumerate() {
            let r = uf.find(v);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            *slot = label[r];
        }
        out
    }

    pub fn component_count(&self) -> usize {
        self.component_labels().iter().max().map(|m| m + 1).unwrap_or(0)
    }

    /// The subgraph on the given edge indices, keeping all vertices.
    pub fn edge_subgraph(&self, keep: impl Fn(usize) -> bool) -> Graph {
        Graph {
            n_vertices: self.n_vertices,
            edges: self.edges.iter().enumerate().filter(|(i, _)| keep(*i)).map(|(_, e)| *e).collect(),
        }
    }

    /// Drops isolated vertices, renumbering the rest in order.
    pub fn without_isolated(&self) -> Graph {
        let deg = self.degrees();
        let mut map = vec![usize::MAX; self.n_vertices];
        let mut k = 0;
        for v in 0..self.n_vertices {
            if deg[v] > 0 {
                map[v] = k;
                k += 1;
            }
        }
        Graph { n_vertices: k, edges: self.edges.iter().map(|&(a, b)| (map[a], map[b])).collect() }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// The link graph of a pure 2-dimensional fan: rays as vertices, 2-cones as edges.
pub fn link_graph(f: &WeightedFan) -> Graph {
    assert_eq!(f.dim, 2 + f.lineality.len(), "link graphs need a 2-dimensional fan");
    Graph::new(
        f.rays.len(),
        f.cones
            .iter()
            .map(|c| {
                assert_eq!(c.rays.len(), 2, "2-cones have two rays");
                (c.rays[0], c.rays[1])
            })
            .collect(),
    )
}

/// An edge of the double cover, lifted from edge `source` of the base graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverEdge {
    pub ends: (usize, usize),
    pub crossing: bool,
    pub source: usize,
    /// Weight of the base 2-cone.
    pub weight: BigRational,
}

/// Double cover of a link graph. Vertex `v < base_vertices` is `a = v` on the
/// first sheet; `v + base_vertices` is its copy `a′` on the second sheet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverGraph {
    pub base_vertices: usize,
    /// Ray direction of each of the `2 · base_vertices` cover vertices.
    pub rays: Vec<IntVec>,
    pub edges: Vec<CoverEdge>,
}

impl CoverGraph {
    /// Lifts every base edge to two cover edges: `a–b, a′–b′` when it does not
    /// cross, `a–b′, a′–b` when it does.
    pub fn from_crossings(x: &Graph, rays: &[IntVec], weights: &[BigRational], crossing: &[bool]) -> Self {
        let v = x.n_vertices;
        assert_eq!(rays.len(), v);
        let mut edges = Vec::with_capacity(2 * x.edges.len());
        for (i, &(a, b)) in x.edges.iter().enumerate() {
            let (e1, e2) = if crossing[i] { ((a, b + v), (a + v, b)) } else { ((a, b), (a + v, b + v)) };
            for ends in [e1, e2] {
                edges.push(CoverEdge { ends, crossing: crossing[i], source: i, weight: weights[i].clone() });
            }
        }
        CoverGraph { base_vertices: v, rays: rays.iter().chain(rays).cloned().collect(), edges }
    }

    pub fn n_vertices(&self) -> usize {
        self.rays.len()
    }

    pub fn sheet(&self, v: usize) -> usize {
        v / self.base_vertices
    }

    pub fn base_vertex(&self, v: usize) -> usize {
        v % self.base_vertices
    }

    pub fn graph(&self) -> Graph {
        Graph::new(self.n_vertices(), self.edges.iter().map(|e| e.ends).collect())
    }

    /// The cover with all crossing edges removed.
    pub fn cut_graph(&self) -> Graph {
        let g = self.graph();
        g.edge_subgraph(|i| !self.edges[i].crossing)
    }
}

/// Crossing flags of the base edges against the half-hyperplane of `flags`,
/// followed by the lift.
pub fn double_cover(
    x: &Graph,
    rays: &[IntVec],
    weights: &[BigRational],
    flags: &FlagPair,
) -> Result<CoverGraph, PolyhedraError> {
    if let Some(bad) = rays.iter().position(|r| num_traits::Zero::is_zero(&flags.l_value(r))) {
        return Err(PolyhedraError::NotTransversal(bad));
    }
    let crossing = crossing_flags(x, rays, flags)?;
    Ok(CoverGraph::from_crossings(x, rays, weights, &crossing))
}

pub fn crossing_flags(x: &Graph, rays: &[IntVec], flags: &FlagPair) -> Result<Vec<bool>, PolyhedraError> {
    x.edges.iter().map(|&(a, b)| cone_meets_halfplane(&[rays[a].clone(), rays[b].clone()], flags)).collect()
}
