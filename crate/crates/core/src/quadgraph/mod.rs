//! Finite bipartite quad-graphs Λ, their duals ◊ and medial graphs X.
//!
//! Quads are stored as `[b-, w-, b+, w+]` in counterclockwise order. Corner
//! `c` of a quad is its `c`-th vertex and side `c` is the Λ-edge from corner
//! `c` to corner `c + 1`. The medial edge `[Q, v]` at corner `c` gets the
//! index `4 * q + c` and is canonically oriented along the counterclockwise
//! boundary of the Varignon parallelogram F_Q.

mod build;
mod cone;
mod io;
mod medial;
mod strips;

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use build::{build_quadgraph, VertexSpec};
pub use cone::{arg_span, ConePath, ConeTree};
pub use io::{GraphFile, GraphFileQuad, GraphFileVertex};
pub use medial::{MedialEdge, MedialFace, MedialPath, MedialStep};
pub use strips::Strip;

/// Relative tolerance of geometric predicates.
pub const GEOMETRIC_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "b", alias = "black")]
    Black,
    #[serde(rename = "w", alias = "white")]
    White,
}

impl Color {
    pub fn other(self) -> Self {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

/// A vertex of Λ or a vertex of ◊ (a quad).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Site {
    Vertex(usize),
    Quad(usize),
}

/// Per-quad quantities derived from the two diagonals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadGeometry {
    /// ρ_Q = −i (w+ − w−)/(b+ − b−).
    pub rho: Complex64,
    /// Angle between the diagonals, in (0, π).
    pub phi: f64,
    /// λ_Q with 2λ_Q = exp(−i(φ − π/2))/sin φ.
    pub lambda: Complex64,
    /// Twice the Euclidean area of the Varignon parallelogram.
    pub ar: f64,
}

#[derive(Debug, Clone)]
pub struct QuadGraph {
    pub(crate) pos: Vec<Complex64>,
    pub(crate) color: Vec<Color>,
    pub(crate) flagged: Vec<bool>,
    pub(crate) boundary: Vec<bool>,
    pub(crate) quads: Vec<[usize; 4]>,
    pub(crate) edges: Vec<[usize; 2]>,
    pub(crate) edge_index: HashMap<(usize, usize), usize>,
    pub(crate) edge_quads: Vec<Vec<(usize, usize)>>,
    pub(crate) quad_edges: Vec<[usize; 4]>,
    pub(crate) stars: Vec<Vec<(usize, usize)>>,
    pub(crate) star_closed: Vec<bool>,
    pub(crate) neighbors: Vec<Vec<usize>>,
    pub(crate) geometry: Vec<QuadGeometry>,
    pub(crate) ar_v: Vec<f64>,
    pub(crate) centers: Vec<Complex64>,
    pub(crate) parallelogram: bool,
}

impl QuadGraph {
    pub fn num_vertices(&self) -> usize {
        self.pos.len()
    }

    pub fn num_quads(&self) -> usize {
        self.quads.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn position(&self, v: usize) -> Complex64 {
        self.pos[v]
    }

    pub fn positions(&self) -> &[Complex64] {
        &self.pos
    }

    pub fn color(&self, v: usize) -> Color {
        self.color[v]
    }

    /// Vertices marked as boundary in the input, before topological closure.
    pub fn is_flagged_boundary(&self, v: usize) -> bool {
        self.flagged[v]
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.boundary[v]
    }

    pub fn is_interior(&self, v: usize) -> bool {
        !self.boundary[v]
    }

    pub fn interior_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_vertices()).filter(|&v| !self.boundary[v])
    }

    pub fn boundary_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_vertices()).filter(|&v| self.boundary[v])
    }

    /// `[b-, w-, b+, w+]`.
    pub fn quad(&self, q: usize) -> [usize; 4] {
        self.quads[q]
    }

    pub fn quads(&self) -> &[[usize; 4]] {
        &self.quads
    }

    pub fn quad_positions(&self, q: usize) -> [Complex64; 4] {
        self.quads[q].map(|v| self.pos[v])
    }

    pub fn geometry(&self, q: usize) -> &QuadGeometry {
        &self.geometry[q]
    }

    /// Position of the ◊-vertex of `q`: the mean of its four vertices, which
    /// is the parallelogram center whenever `q` is a parallelogram.
    pub fn center(&self, q: usize) -> Complex64 {
        self.centers[q]
    }

    pub fn centers(&self) -> &[Complex64] {
        &self.centers
    }

    pub fn site_position(&self, s: Site) -> Complex64 {
        match s {
            Site::Vertex(v) => self.pos[v],
            Site::Quad(q) => self.centers[q],
        }
    }

    pub fn ar_fq(&self, q: usize) -> f64 {
        self.geometry[q].ar
    }

    /// Twice the Euclidean area of the medial face F_v.
    pub fn ar_fv(&self, v: usize) -> Result<f64> {
        if self.boundary[v] {
            Err(Error::BoundaryVertexFace(v))
        } else {
            Ok(self.ar_v[v])
        }
    }

    /// ar(F) for a face of X.
    pub fn face_weight(&self, face: MedialFace) -> Result<f64> {
        match face {
            MedialFace::Vertex(v) => self.ar_fv(v),
            MedialFace::Quad(q) => Ok(self.ar_fq(q)),
        }
    }

    /// Quads around `v` as `(quad, corner)` in counterclockwise order. For a
    /// closed star, quad `s` has vertices `v, v'_{s-1}, v_s, v'_s` in this
    /// order, i.e. corners `c, c+1, c+2, c+3`.
    pub fn star(&self, v: usize) -> &[(usize, usize)] {
        &self.stars[v]
    }

    pub fn star_closed(&self, v: usize) -> bool {
        self.star_closed[v]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&(a.min(b), a.max(b))).copied()
    }

    /// `(quad, side)` incidences of a Λ-edge (one or two).
    pub fn edge_quads(&self, e: usize) -> &[(usize, usize)] {
        &self.edge_quads[e]
    }

    /// Λ-edge ids of the four sides of `q`.
    pub fn quad_edges(&self, q: usize) -> [usize; 4] {
        self.quad_edges[q]
    }

    pub fn is_parallelogram_graph(&self) -> bool {
        self.parallelogram
    }

    pub fn require_parallelogram(&self) -> Result<()> {
        if self.parallelogram {
            return Ok(());
        }
        let quad = (0..self.num_quads()).find(|&q| !self.is_parallelogram(q)).unwrap_or(0);
        Err(Error::NotParallelogramGraph { quad })
    }

    pub fn is_parallelogram(&self, q: usize) -> bool {
        let [p0, p1, p2, p3] = self.quad_positions(q);
        let scale = (p2 - p0).norm().max((p3 - p1).norm());
        ((p1 - p0) - (p2 - p3)).norm() <= GEOMETRIC_TOL * scale
    }

    /// Quads adjacent to `q` across a Λ-edge.
    pub fn quad_neighbors(&self, q: usize) -> impl Iterator<Item = usize> + '_ {
        self.quad_edges[q]
            .into_iter()
            .flat_map(move |e| self.edge_quads[e].iter().map(|&(o, _)| o).filter(move |&o| o != q))
    }

    /// Largest edge length of Λ.
    pub fn max_edge_length(&self) -> f64 {
        self.edges.iter().map(|[a, b]| (self.pos[*a] - self.pos[*b]).norm()).fold(0.0, f64::max)
    }

    /// Smallest interior angle over all quads (α₀) and smallest ratio of
    /// shortest to longest side within a quad.
    pub fn angle_and_ratio_bounds(&self) -> (f64, f64) {
        let mut alpha = f64::INFINITY;
        let mut ratio = f64::INFINITY;
        for q in 0..self.num_quads() {
            let p = self.quad_positions(q);
            let mut lo = f64::INFINITY;
            let mut hi: f64 = 0.0;
            for c in 0..4 {
                let a = p[(c + 1) % 4] - p[c];
                let b = p[(c + 3) % 4] - p[c];
                let ang = (b / a).arg();
                let ang = if ang < 0.0 { ang + std::f64::consts::TAU } else { ang };
                alpha = alpha.min(ang);
                lo = lo.min(a.norm());
                hi = hi.max(a.norm());
            }
            ratio = ratio.min(lo / hi);
        }
        (alpha, ratio)
    }

    /// `V - E + F == 1` and the boundary edges form one closed cycle.
    pub fn is_disk(&self) -> bool {
        let euler = self.num_vertices() as i64 - self.num_edges() as i64 + self.num_quads() as i64;
        if euler != 1 {
            return false;
        }
        let boundary_edges: Vec<usize> =
            (0..self.num_edges()).filter(|&e| self.edge_quads[e].len() == 1).collect();
        if boundary_edges.is_empty() {
            return false;
        }
        let mut degree: HashMap<usize, usize> = HashMap::new();
        for &e in &boundary_edges {
            for v in self.edges[e] {
                *degree.entry(v).or_default() += 1;
            }
        }
        if degree.values().any(|&d| d != 2) {
            return false;
        }
        // one cycle: walk from the first boundary edge and count
        let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
        for &e in &boundary_edges {
            let [a, b] = self.edges[e];
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        let start = self.edges[boundary_edges[0]][0];
        let (mut prev, mut cur, mut steps) = (start, adj[&start][0], 1);
        while cur != start {
            let next = if adj[&cur][0] == prev { adj[&cur][1] } else { adj[&cur][0] };
            prev = cur;
            cur = next;
            steps += 1;
            if steps > boundary_edges.len() {
                return false;
            }
        }
        steps == boundary_edges.len()
    }

    /// Subgraph spanned by a set of quads. Returns the graph and the map from
    /// new vertex indices to old ones; quads keep the order given.
    pub fn restrict(&self, quads: &[usize]) -> Result<(QuadGraph, Vec<usize>)> {
        let mut new_index: HashMap<usize, usize> = HashMap::new();
        let mut old: Vec<usize> = Vec::new();
        let mut new_quads = Vec::with_capacity(quads.len());
        for &q in quads {
            let nq = self.quads[q].map(|v| {
                *new_index.entry(v).or_insert_with(|| {
                    old.push(v);
                    old.len() - 1
                })
            });
            new_quads.push(nq);
        }
        let specs = old
            .iter()
            .map(|&v| VertexSpec { position: self.pos[v], color: self.color[v], boundary: self.flagged[v] })
            .collect();
        Ok((build_quadgraph(specs, new_quads)?, old))
    }

    /// Breadth-first distances on Λ from a set of sources.
    pub fn bfs_distances(&self, sources: &[usize]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.num_vertices()];
        let mut queue = std::collections::VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.neighbors[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// The vertex closest to a point (ties to the lowest index).
    pub fn nearest_vertex(&self, z: Complex64) -> usize {
        let mut best = 0;
        for v in 1..self.num_vertices() {
            if (self.pos[v] - z).norm() < (self.pos[best] - z).norm() {
                best = v;
            }
        }
        best
    }

    /// The quad whose center is closest to a point.
    pub fn nearest_quad(&self, z: Complex64) -> usize {
        let mut best = 0;
        for q in 1..self.num_quads() {
            if (self.centers[q] - z).norm() < (self.centers[best] - z).norm() {
                best = q;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests;
