//! The medial graph X: vertices are Λ-edge midpoints, edges are pairs
//! `[Q, v]`, faces are F_v (interior vertices) and F_Q (all quads).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::QuadGraph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MedialEdge {
    pub id: usize,
    pub quad: usize,
    pub corner: usize,
    /// The Λ-vertex `v` of `[Q, v]`.
    pub vertex: usize,
    /// Medial vertex (Λ-edge id) the canonical orientation starts at.
    pub from: usize,
    pub to: usize,
    /// Displacement in the canonical orientation.
    pub displacement: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MedialFace {
    Vertex(usize),
    Quad(usize),
}

/// One traversed medial edge; `forward` follows the canonical orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MedialStep {
    pub edge: usize,
    pub forward: bool,
}

impl MedialStep {
    pub fn new(edge: usize, forward: bool) -> Self {
        Self { edge, forward }
    }

    pub fn sign(&self) -> f64 {
        if self.forward {
            1.0
        } else {
            -1.0
        }
    }

    pub fn reversed(self) -> Self {
        Self { edge: self.edge, forward: !self.forward }
    }
}

/// A directed sequence of medial edges. Closed paths are discrete contours
/// when they bound a topological disk.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MedialPath {
    pub steps: Vec<MedialStep>,
}

impl MedialPath {
    pub fn new(steps: Vec<MedialStep>) -> Self {
        Self { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn reversed(&self) -> Self {
        Self { steps: self.steps.iter().rev().map(|s| s.reversed()).collect() }
    }

    /// Checks that every edge exists and consecutive steps are joined.
    pub fn validate(&self, g: &QuadGraph) -> Result<()> {
        for s in &self.steps {
            g.medial_edge(s.edge)?;
        }
        for w in self.steps.windows(2) {
            if g.step_end(w[0]) != g.step_start(w[1]) {
                return Err(Error::NotContour(format!("steps on edges {} and {} are not joined", w[0].edge, w[1].edge)));
            }
        }
        Ok(())
    }

    pub fn is_closed(&self, g: &QuadGraph) -> bool {
        match (self.steps.first(), self.steps.last()) {
            (Some(&a), Some(&b)) => self.validate(g).is_ok() && g.step_start(a) == g.step_end(b),
            _ => false,
        }
    }

    /// Sum of the signed displacements.
    pub fn displacement(&self, g: &QuadGraph) -> Complex64 {
        self.steps.iter().map(|&s| g.step_displacement(s)).sum()
    }
}

impl QuadGraph {
    pub fn num_medial_edges(&self) -> usize {
        4 * self.num_quads()
    }

    pub fn medial_edge_id(&self, quad: usize, corner: usize) -> usize {
        4 * quad + corner
    }

    pub fn medial_edge(&self, id: usize) -> Result<MedialEdge> {
        if id >= self.num_medial_edges() {
            return Err(Error::EdgeNotInGraph(id));
        }
        let (quad, corner) = (id / 4, id % 4);
        let q = self.quads[quad];
        let e = self.quad_edges[quad];
        Ok(MedialEdge {
            id,
            quad,
            corner,
            vertex: q[corner],
            from: e[(corner + 3) % 4],
            to: e[corner],
            displacement: self.medial_displacement(id),
        })
    }

    /// `(p_{c+1} - p_{c-1}) / 2` for edge `4q + c`.
    pub fn medial_displacement(&self, id: usize) -> Complex64 {
        let (quad, c) = (id / 4, id % 4);
        let q = self.quads[quad];
        (self.pos[q[(c + 1) % 4]] - self.pos[q[(c + 3) % 4]]) / 2.0
    }

    pub fn step_displacement(&self, s: MedialStep) -> Complex64 {
        self.medial_displacement(s.edge) * s.sign()
    }

    /// Medial vertex (Λ-edge id) where a step starts.
    pub fn step_start(&self, s: MedialStep) -> usize {
        let (quad, c) = (s.edge / 4, s.edge % 4);
        if s.forward {
            self.quad_edges[quad][(c + 3) % 4]
        } else {
            self.quad_edges[quad][c]
        }
    }

    pub fn step_end(&self, s: MedialStep) -> usize {
        self.step_start(s.reversed())
    }

    /// The edge `[Q, v]`, if `v` is a corner of `Q`.
    pub fn medial_edge_for(&self, quad: usize, vertex: usize) -> Option<usize> {
        self.quads[quad].iter().position(|&x| x == vertex).map(|c| 4 * quad + c)
    }

    /// Position of a medial vertex.
    pub fn midpoint(&self, lambda_edge: usize) -> Complex64 {
        let [a, b] = self.edges[lambda_edge];
        (self.pos[a] + self.pos[b]) / 2.0
    }

    /// The medial edge of F_Q parallel to the black diagonal, oriented
    /// along `b+ - b-`.
    pub fn edge_e(&self, quad: usize) -> usize {
        4 * quad + 1
    }

    /// The medial edge of F_Q parallel to the white diagonal, oriented
    /// along `w+ - w-`.
    pub fn edge_e_star(&self, quad: usize) -> usize {
        4 * quad + 2
    }

    /// Counterclockwise boundary of F_Q.
    pub fn cycle_quad(&self, quad: usize) -> MedialPath {
        MedialPath::new((0..4).map(|c| MedialStep::new(4 * quad + c, true)).collect())
    }

    /// Counterclockwise boundary of F_v; only closed for interior stars.
    pub fn cycle_vertex(&self, v: usize) -> Result<MedialPath> {
        if !self.star_closed[v] {
            return Err(Error::BoundaryVertexFace(v));
        }
        Ok(MedialPath::new(self.stars[v].iter().map(|&(q, c)| MedialStep::new(4 * q + c, false)).collect()))
    }

    pub fn face_boundary(&self, face: MedialFace) -> Result<MedialPath> {
        match face {
            MedialFace::Vertex(v) => self.cycle_vertex(v),
            MedialFace::Quad(q) => Ok(self.cycle_quad(q)),
        }
    }

    /// Faces of X: F_v for interior `v`, then F_Q for every quad.
    pub fn medial_faces(&self) -> Vec<MedialFace> {
        self.interior_vertices()
            .map(MedialFace::Vertex)
            .chain((0..self.num_quads()).map(MedialFace::Quad))
            .collect()
    }

    /// Export id of a medial face: `v` for F_v and `V + q` for F_Q.
    pub fn face_id(&self, face: MedialFace) -> usize {
        match face {
            MedialFace::Vertex(v) => v,
            MedialFace::Quad(q) => self.num_vertices() + q,
        }
    }

    pub fn face_from_id(&self, id: usize) -> Option<MedialFace> {
        let n = self.num_vertices();
        if id < n {
            Some(MedialFace::Vertex(id))
        } else if id < n + self.num_quads() {
            Some(MedialFace::Quad(id - n))
        } else {
            None
        }
    }
}
