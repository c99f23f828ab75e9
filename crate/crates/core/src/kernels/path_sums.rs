use std::collections::VecDeque;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadgraph::{QuadGraph, Site};

/// The asymptotic correction data `J(x, x0)` and `τ(x, x0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathSums {
    pub j: Complex64,
    /// Only defined when at least one endpoint is a quad.
    pub tau: Option<Complex64>,
    /// `+1` if the anchoring vertices have the same color, `−1` otherwise.
    pub parity: i8,
}

/// How a site attaches to Λ: a vertex, and for quads the half-edge terms
/// from its first black corner `b` with `d₁ = w₋ − b`, `d₂ = w₊ − b`.
struct Anchor {
    vertex: usize,
    half: Complex64,
    product: Option<Complex64>,
}

fn anchor(g: &QuadGraph, site: Site) -> Result<Anchor> {
    match site {
        Site::Vertex(v) if v < g.num_vertices() => Ok(Anchor { vertex: v, half: Complex64::new(0.0, 0.0), product: None }),
        Site::Quad(q) if q < g.num_quads() => {
            let [b, wm, _, wp] = g.quad_positions(q);
            let (d1, d2) = (wm - b, wp - b);
            Ok(Anchor { vertex: g.quad(q)[0], half: 0.5 / d1 + 0.5 / d2, product: Some(d1 * d2) })
        }
        s => Err(Error::InvalidInput(format!("{s:?} does not exist"))),
    }
}

/// `Σ 1/e_j` along an explicit vertex path.
pub fn inverse_edge_sum(g: &QuadGraph, vertices: &[usize]) -> Result<Complex64> {
    let mut s = Complex64::new(0.0, 0.0);
    for w in vertices.windows(2) {
        if g.edge_between(w[0], w[1]).is_none() {
            return Err(Error::InvalidInput(format!("{} and {} are not adjacent", w[0], w[1])));
        }
        s += 1.0 / (g.position(w[1]) - g.position(w[0]));
    }
    Ok(s)
}

/// `Φ(v) = J(v, root)` on every vertex at once; path independence makes
/// `J(v, v′) = Φ(v) − Φ(v′)`.
#[derive(Debug, Clone)]
pub struct JPotential {
    root: usize,
    phi: Vec<Option<Complex64>>,
    depth: Vec<usize>,
}

impl JPotential {
    pub fn new(g: &QuadGraph, root: usize) -> Result<Self> {
        g.require_parallelogram()?;
        let mut phi = vec![None; g.num_vertices()];
        let mut depth = vec![0; g.num_vertices()];
        phi[root] = Some(Complex64::new(0.0, 0.0));
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if phi[w].is_none() {
                    phi[w] = Some(phi[u].unwrap() + 1.0 / (g.position(w) - g.position(u)));
                    depth[w] = depth[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        Ok(Self { root, phi, depth })
    }

    fn at(&self, v: usize) -> Result<(Complex64, usize)> {
        self.phi[v].map(|p| (p, self.depth[v])).ok_or(Error::Unreachable { from: self.root, to: v })
    }

    /// `J(x, x0)` and `τ(x, x0)` for any two sites.
    pub fn sums(&self, g: &QuadGraph, x: Site, x0: Site) -> Result<PathSums> {
        let (a, a0) = (anchor(g, x)?, anchor(g, x0)?);
        let (p, d) = self.at(a.vertex)?;
        let (p0, d0) = self.at(a0.vertex)?;
        let parity = if (d + d0) % 2 == 0 { 1 } else { -1 };
        let j = p - p0 + a.half - a0.half;
        let tau = match (a.product, a0.product) {
            (None, None) => None,
            (Some(t), None) | (None, Some(t)) => Some(parity as f64 / t),
            (Some(t), Some(t0)) => Some(parity as f64 / (t * t0)),
        };
        Ok(PathSums { j, tau, parity })
    }
}

/// `J(x, x0)` and `τ(x, x0)`, summed along a breadth-first path from the
/// anchor of `x0` to the anchor of `x`.
pub fn path_sums(g: &QuadGraph, x: Site, x0: Site) -> Result<PathSums> {
    let root = anchor(g, x0)?.vertex;
    JPotential::new(g, root)?.sums(g, x, x0)
}
