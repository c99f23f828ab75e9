use std::collections::VecDeque;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::VertexField;
use crate::quadgraph::{ConeTree, QuadGraph};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn is_pole(lambda: Complex64, e: Complex64) -> bool {
    (lambda - e).norm() <= 1e-14 * lambda.norm().max(e.norm()).max(f64::MIN_POSITIVE)
}

/// `(λ + e)/(λ − e)`.
pub fn edge_ratio(lambda: Complex64, e: Complex64) -> Result<Complex64> {
    if is_pole(lambda, e) {
        return Err(Error::PoleHit(lambda));
    }
    Ok((lambda + e) / (lambda - e))
}

/// The product of edge ratios along a path with the given edge vectors.
pub fn exp_along(lambda: Complex64, edges: &[Complex64]) -> Result<Complex64> {
    edges.iter().try_fold(ONE, |acc, &e| Ok(acc * edge_ratio(lambda, e)?))
}

/// `e(λ, v; v0)`, evaluated along a cone path.
pub fn discrete_exp(g: &QuadGraph, lambda: Complex64, v: usize, v0: usize) -> Result<Complex64> {
    exp_along(lambda, &g.cone_path(v0, v)?.edges)
}

/// `e(λ, v; Q0)`, anchored at the first black corner of `Q0`.
pub fn discrete_exp_face(g: &QuadGraph, lambda: Complex64, v: usize, q0: usize) -> Result<Complex64> {
    let [b, wm, _, wp] = g.quad_positions(q0);
    let base = discrete_exp(g, lambda, v, g.quad(q0)[0])?;
    let (p1, p2) = (b - wp, b - wm);
    if is_pole(lambda, p1) || is_pole(lambda, p2) {
        return Err(Error::PoleHit(lambda));
    }
    Ok(base / ((lambda - p1) * (lambda - p2)))
}

fn check_exp_pole(lambda: Complex64, e: Complex64) -> Result<()> {
    // 1 − λe/2 vanishes
    if (ONE - lambda * e / 2.0).norm() <= 1e-14 * (lambda * e).norm().max(1.0) {
        return Err(Error::PoleHit(lambda));
    }
    Ok(())
}

/// The other parametrization, `exp(λ, ·; v0) = e(2/λ, ·; v0)`.
pub fn exp_vertex(g: &QuadGraph, lambda: Complex64, v: usize, v0: usize) -> Result<Complex64> {
    g.cone_path(v0, v)?.edges.iter().try_fold(ONE, |acc, &e| {
        check_exp_pole(lambda, e)?;
        Ok(acc * (ONE + lambda * e / 2.0) / (ONE - lambda * e / 2.0))
    })
}

/// `exp(λ, Q; v0)` on a quad, so that `∂_Λ exp(λ, ·; v0) = λ exp(λ, ·; v0)`.
pub fn exp_face(g: &QuadGraph, lambda: Complex64, q: usize, v0: usize) -> Result<Complex64> {
    let [b, wm, _, wp] = g.quad_positions(q);
    check_exp_pole(lambda, wp - b)?;
    check_exp_pole(lambda, wm - b)?;
    let base = exp_vertex(g, lambda, g.quad(q)[0], v0)?;
    Ok(base / ((ONE - lambda * (wp - b) / 2.0) * (ONE - lambda * (wm - b) / 2.0)))
}

/// `e(λ, ·; v0)` on every reachable vertex.
#[derive(Debug, Clone)]
pub struct DiscreteExponential {
    lambda: Complex64,
    base: usize,
    values: VertexField,
    tree: ConeTree,
}

impl DiscreteExponential {
    /// Propagates the edge ratios breadth first. Any spanning tree gives
    /// the same values; the cone tree is kept for [`Self::poles`].
    pub fn new(g: &QuadGraph, lambda: Complex64, v0: usize) -> Result<Self> {
        g.require_parallelogram()?;
        let mut values = vec![None; g.num_vertices()];
        values[v0] = Some(ONE);
        let mut queue = VecDeque::from([v0]);
        while let Some(u) = queue.pop_front() {
            let eu = values[u].expect("queued vertices have values");
            for &w in g.neighbors(u) {
                if values[w].is_none() {
                    values[w] = Some(eu * edge_ratio(lambda, g.position(w) - g.position(u))?);
                    queue.push_back(w);
                }
            }
        }
        let tree = ConeTree::new(g, v0);
        Ok(Self { lambda, base: v0, values: VertexField::from_options(values), tree })
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn value(&self, v: usize) -> Result<Complex64> {
        self.values.get(v).ok_or(Error::Unreachable { from: self.base, to: v })
    }

    pub fn field(&self) -> &VertexField {
        &self.values
    }

    /// The poles of `e(·, v; v0)`: the edge vectors of the cone path.
    pub fn poles(&self, g: &QuadGraph, v: usize) -> Result<Vec<Complex64>> {
        Ok(self.tree.path_to(g, v)?.edges)
    }

    /// `∂_Λ e(λ, ·; v0)(Q) = 2λ e(λ, v; v0) / ((λ − d₁)(λ − d₂))` with
    /// `d₁, d₂` the edges of `Q` leaving its first black corner `v`.
    pub fn derivative_at(&self, g: &QuadGraph, q: usize) -> Result<Complex64> {
        let [b, wm, _, wp] = g.quad_positions(q);
        let (d1, d2) = (wm - b, wp - b);
        if is_pole(self.lambda, d1) || is_pole(self.lambda, d2) {
            return Err(Error::PoleHit(self.lambda));
        }
        Ok(2.0 * self.lambda * self.value(g.quad(q)[0])? / ((self.lambda - d1) * (self.lambda - d2)))
    }
}
