//! Higher derivatives on the integer lattice of a skew coordinate system,
//! where ◊ is Λ shifted by `(e₁ + e₂)/2` and one operator `∂` acts on both.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::cauchy::{cauchy_kernel_face, cauchy_kernel_vertex, contour_product, partial_d_diamond, partial_d_lambda};
use super::path_sums::JPotential;
use super::table::{KernelKind, KernelTable};
use super::KernelOptions;
use crate::contour::Contour;
use crate::error::{Error, Result};
use crate::field::VertexField;
use crate::quadgraph::{QuadGraph, Site};

/// Spanning vectors of a skew lattice and integer coordinates on the
/// refined lattice spanned by `e₁/2, e₂/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewFrame {
    pub e1: Complex64,
    pub e2: Complex64,
    origin: Complex64,
}

impl SkewFrame {
    /// The frame of a skew lattice, with `e₁, e₂` the edges leaving the
    /// first black corner of quad `q`.
    pub fn at_quad(g: &QuadGraph, q: usize) -> Result<Self> {
        if !g.is_parallelogram_graph() {
            return Err(Error::NotSkewLattice("not a parallelogram-graph".into()));
        }
        if q >= g.num_quads() {
            return Err(Error::InvalidInput(format!("quad {q} does not exist")));
        }
        let [b, wm, _, wp] = g.quad_positions(q);
        let (e1, e2) = (wm - b, wp - b);
        let tol = 1e-9 * e1.norm().max(e2.norm());
        for (k, &[a, c]) in g.edges().iter().enumerate() {
            let d = g.position(c) - g.position(a);
            if ![e1, -e1, e2, -e2].iter().any(|&e| (d - e).norm() <= tol) {
                return Err(Error::NotSkewLattice(format!("edge {k} is not parallel to a spanning vector")));
            }
        }
        Ok(Self { e1, e2, origin: b })
    }

    /// Coordinates `(a, b)` with `z = origin + (a e₁ + b e₂)/2`.
    pub fn half_coords(&self, z: Complex64) -> (i64, i64) {
        let w = 2.0 * (z - self.origin);
        let det = (self.e1.conj() * self.e2).im;
        let a = (w.conj() * self.e2).im / -det;
        let b = (self.e1.conj() * w).im / det;
        (a.round() as i64, b.round() as i64)
    }

    /// The `|·|_∞` distance in half-steps.
    pub fn distance(&self, z: Complex64, z0: Complex64) -> i64 {
        let (a, b) = self.half_coords(z);
        let (a0, b0) = self.half_coords(z0);
        (a - a0).abs().max((b - b0).abs())
    }
}

/// `∂ⁿ` of a function on V(Λ) or V(◊), alternating between the two. Entries without a complete stencil stay
/// undefined. Returns the values and whether they live on vertices.
pub fn iterate_derivative(g: &QuadGraph, values: &[Option<Complex64>], on_vertices: bool, n: usize) -> (Vec<Option<Complex64>>, bool) {
    let mut cur = values.to_vec();
    let mut vertices = on_vertices;
    for _ in 0..n {
        cur = if vertices {
            partial_d_lambda(g, &cur).into_iter().map(|d| d.map(|d| d.0)).collect()
        } else {
            partial_d_diamond(g, &cur).into_iter().map(|d| d.map(|d| d.0)).collect()
        };
        vertices = !vertices;
    }
    (cur, vertices)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Result of checking the n-th derivative Cauchy formula at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HigherDerivative {
    pub n: usize,
    /// `v0` for even `n`, `Q0 = v0 + (e₁ + e₂)/2` for odd `n`.
    pub base: Site,
    /// `((−1)ⁿ/2πi) ∮ f ∂ⁿK dz`.
    pub contour_value: Complex64,
    /// `∂ⁿ f` by repeated differentiation.
    pub direct: Complex64,
}

impl HigherDerivative {
    pub fn defect(&self) -> f64 {
        (self.contour_value - self.direct).norm()
    }
}

/// Evaluates `∂ⁿ f(x0)` through the n-th derivative Cauchy formula and by
/// repeated differentiation. For odd `n` the base is a quad `Q0` at `v0`;
/// choosing the signs of `e₁, e₂` suitably makes `Q0 = v0 + (e₁ + e₂)/2`.
pub fn skew_higher_derivative(
    g: &QuadGraph,
    f: &VertexField,
    v0: usize,
    n: usize,
    contour: &Contour,
    opts: &KernelOptions,
) -> Result<HigherDerivative> {
    let frame = SkewFrame::at_quad(g, 0)?;
    let q0 = g.star(v0).first().map(|&(q, _)| q).ok_or_else(|| Error::InvalidInput(format!("vertex {v0} has no quads")))?;
    let base = if n.is_multiple_of(2) { Site::Vertex(v0) } else { Site::Quad(q0) };

    match base {
        Site::Quad(q) if contour.touches_quad(q) => return Err(Error::ContourTouchesBase),
        _ if !contour.encloses(base) => return Err(Error::BasePointNotEnclosed),
        _ => {}
    }
    let p0 = g.site_position(base);
    // D ≤ n/2 in units of e₁, e₂, i.e. at most n half-steps
    let limit = n as i64;
    let tight = (0..g.num_vertices())
        .filter(|&v| frame.distance(g.position(v), p0) <= limit)
        .any(|v| !contour.encloses_vertex(v))
        || (0..g.num_quads())
            .filter(|&q| frame.distance(g.center(q), p0) <= limit)
            .any(|q| !contour.encloses_quad(q) || contour.touches_quad(q));
    if tight {
        return Err(Error::ContourTooTight(n as f64 / 2.0));
    }

    let kernel = if n.is_multiple_of(2) { cauchy_kernel_vertex(g, v0, opts)? } else { cauchy_kernel_face(g, q0, opts)? };
    let (dk, on_vertices) = iterate_derivative(g, &kernel.values, kernel.kind.on_vertices(), n);
    debug_assert!(!on_vertices);
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let value = |q: usize| dk[q].ok_or(Error::MissingValues { what: "quad", index: q });
    let contour_value = sign * contour_product(g, contour, |v| f.at(v), value)? / Complex64::new(0.0, 2.0 * PI);

    let (df, _) = iterate_derivative(g, f.options(), true, n);
    let index = match base {
        Site::Vertex(v) => v,
        Site::Quad(q) => q,
    };
    let direct = df[index].ok_or(Error::MissingValues { what: if n.is_multiple_of(2) { "vertex" } else { "quad" }, index })?;
    Ok(HigherDerivative { n, base, contour_value, direct })
}

/// `(−1)ⁿ/n! · ∂ⁿ K_{Q0}` with the predicted asymptote
/// `1/(x − Q0)ⁿ⁺¹ + τ′/(J(x, Q0) e₁e₂)ⁿ⁺¹`, where `e₁, e₂` leave the
/// first black corner of `Q0`.
pub fn skew_kernel_table(g: &QuadGraph, q0: usize, n: usize, opts: &KernelOptions) -> Result<KernelTable> {
    let frame = SkewFrame::at_quad(g, q0)?;
    let face = cauchy_kernel_face(g, q0, &opts.widened(n as f64 * g.max_edge_length()))?;
    let (dk, on_vertices) = iterate_derivative(g, &face.values, true, n);
    let scale = if n.is_multiple_of(2) { 1.0 } else { -1.0 } / factorial(n);
    let kind = KernelKind::SkewDerivative(n);
    let base = Site::Quad(q0);
    let site = |i: usize| if on_vertices { Site::Vertex(i) } else { Site::Quad(i) };
    let values: Vec<Option<Complex64>> =
        dk.iter().enumerate().map(|(i, d)| d.filter(|_| opts.contains(g, site(i), base)).map(|d| scale * d)).collect();

    let pot = JPotential::new(g, g.quad(q0)[0])?;
    let center = g.center(q0);
    let shift = if on_vertices { (frame.e1 + frame.e2) / 2.0 } else { Complex64::new(0.0, 0.0) };
    let mut predicted = vec![None; values.len()];
    for i in (0..values.len()).filter(|&i| values[i].is_some() && site(i) != base) {
        let x = g.site_position(site(i));
        let j = pot.sums(g, site(i), base)?.j;
        // ◊-steps change one half-coordinate by 2
        let (a, b) = frame.half_coords(x + shift);
        let (a0, b0) = frame.half_coords(center);
        let tau = if ((a - a0) / 2 + (b - b0) / 2).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let p = n as i32 + 1;
        predicted[i] = Some(1.0 / (x - center).powi(p) + tau / (j * frame.e1 * frame.e2).powi(p));
    }
    let mut diagnostics = face.diagnostics.clone();
    diagnostics.evaluated = values.iter().flatten().count();
    diagnostics.normalization = None;
    diagnostics.expected_normalization = 0.0;
    Ok(KernelTable { kind, base, values, predicted, diagnostics })
}
