//! Discrete Cauchy–Riemann operators and everything built directly on them:
//! holomorphicity tests, averaging, primitives, the Laplacian, the Dirichlet
//! energy, harmonic conjugates and the black/white splitting of contours.

use std::collections::VecDeque;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, FaceField, VertexField};
use crate::forms::{exterior_d_function, quad_values, scalar_one};
use crate::quadgraph::{Color, MedialPath, QuadGraph};

/// Default relative tolerance for holomorphicity and harmonicity tests.
pub const HOLOMORPHIC_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const TWO_I: Complex64 = Complex64::new(0.0, 2.0);

/// `(∂_Λ f(Q), ∂̄_Λ f(Q))` from the values at `[b-, w-, b+, w+]`.
pub fn quad_derivative(g: &QuadGraph, q: usize, vals: [Complex64; 4]) -> (Complex64, Complex64) {
    let p = g.quad_positions(q);
    let lambda = g.geometry(q).lambda;
    let (db, dw) = (p[2] - p[0], p[3] - p[1]);
    let (fb, fw) = (vals[2] - vals[0], vals[3] - vals[1]);
    let d = lambda * fb / db + lambda.conj() * fw / dw;
    let dbar = lambda.conj() * fb / db.conj() + lambda * fw / dw.conj();
    (d, dbar)
}

/// The same pair from the contour integrals `∮_{P_Q} f dz̄` and `∮_{P_Q} f dz`.
pub fn quad_derivative_contour(g: &QuadGraph, q: usize, vals: [Complex64; 4]) -> (Complex64, Complex64) {
    let mut dz = ZERO;
    let mut dzbar = ZERO;
    for (c, &val) in vals.iter().enumerate() {
        let d = g.medial_displacement(4 * q + c);
        dz += val * d;
        dzbar += val * d.conj();
    }
    let k = TWO_I * g.ar_fq(q);
    (-dzbar / k, dz / k)
}

fn derivative_fields(
    g: &QuadGraph,
    f: &VertexField,
    rule: fn(&QuadGraph, usize, [Complex64; 4]) -> (Complex64, Complex64),
) -> Result<(FaceField, FaceField)> {
    let mut d = Vec::with_capacity(g.num_quads());
    let mut db = Vec::with_capacity(g.num_quads());
    for q in 0..g.num_quads() {
        let (a, b) = rule(g, q, quad_values(g, q, f)?);
        d.push(a);
        db.push(b);
    }
    Ok((FaceField::from_values(d), FaceField::from_values(db)))
}

/// `(∂_Λ f, ∂̄_Λ f)` on every quad.
pub fn d_lambda(g: &QuadGraph, f: &VertexField) -> Result<(FaceField, FaceField)> {
    derivative_fields(g, f, quad_derivative)
}

/// `(∂_Λ f, ∂̄_Λ f)` evaluated through elementary cycles.
pub fn d_lambda_contour(g: &QuadGraph, f: &VertexField) -> Result<(FaceField, FaceField)> {
    derivative_fields(g, f, quad_derivative_contour)
}

/// `(∂_◊ h(v), ∂̄_◊ h(v))` at an interior vertex, with `h` supplied per quad.
pub fn d_diamond_at(
    g: &QuadGraph,
    v: usize,
    h: impl Fn(usize) -> Result<Complex64>,
) -> Result<(Complex64, Complex64)> {
    if g.is_boundary(v) {
        return Err(Error::BoundaryVertex(v));
    }
    let mut dz = ZERO;
    let mut dzbar = ZERO;
    // P_v runs through the star against the canonical edge orientation
    for &(q, c) in g.star(v) {
        let d = -g.medial_displacement(4 * q + c);
        let val = h(q)?;
        dz += val * d;
        dzbar += val * d.conj();
    }
    let k = TWO_I * g.ar_fv(v)?;
    Ok((-dzbar / k, dz / k))
}

/// `(∂_◊ h, ∂̄_◊ h)`, defined on interior vertices only.
pub fn d_diamond(g: &QuadGraph, h: &FaceField) -> Result<(VertexField, VertexField)> {
    let mut d = VertexField::undefined(g.num_vertices());
    let mut db = VertexField::undefined(g.num_vertices());
    for v in g.interior_vertices() {
        let (a, b) = d_diamond_at(g, v, |q| h.at(q))?;
        d.set(v, Some(a));
        db.set(v, Some(b));
    }
    Ok((d, db))
}

/// Per-site defects of a holomorphicity test.
#[derive(Debug, Clone, PartialEq)]
pub struct HolomorphicityReport<D> {
    pub residual: Field<D>,
    pub max_abs: f64,
    /// Typical size of the terms that cancel in the residual.
    pub scale: f64,
}

impl<D: crate::field::Domain> HolomorphicityReport<D> {
    pub fn relative_defect(&self) -> f64 {
        if self.scale == 0.0 {
            self.max_abs
        } else {
            self.max_abs / self.scale
        }
    }

    pub fn is_holomorphic(&self, rel_tol: f64) -> bool {
        self.relative_defect() <= rel_tol
    }
}

/// Discrete Cauchy–Riemann defect `Δ_w f/Δw − Δ_b f/Δb` on every quad.
pub fn check_holomorphic_vertex(g: &QuadGraph, f: &VertexField) -> Result<HolomorphicityReport<crate::field::OnQuads>> {
    let mut res = Vec::with_capacity(g.num_quads());
    let mut scale: f64 = 0.0;
    for q in 0..g.num_quads() {
        let p = g.quad_positions(q);
        let v = quad_values(g, q, f)?;
        let rb = (v[2] - v[0]) / (p[2] - p[0]);
        let rw = (v[3] - v[1]) / (p[3] - p[1]);
        scale = scale.max(rb.norm().max(rw.norm()));
        res.push(rw - rb);
    }
    let residual = FaceField::from_values(res);
    Ok(HolomorphicityReport { max_abs: residual.max_abs(), residual, scale })
}

/// Morera defect `∮_{P_v} h dz` at every interior vertex.
pub fn check_holomorphic_face(g: &QuadGraph, h: &FaceField) -> Result<HolomorphicityReport<crate::field::OnVertices>> {
    let mut residual = VertexField::undefined(g.num_vertices());
    let mut scale: f64 = 0.0;
    for v in g.interior_vertices() {
        let mut s = ZERO;
        let mut size = 0.0;
        for &(q, c) in g.star(v) {
            let term = h.at(q)? * g.medial_displacement(4 * q + c);
            s -= term;
            size += term.norm();
        }
        scale = scale.max(size);
        residual.set(v, Some(s));
    }
    Ok(HolomorphicityReport { max_abs: residual.max_abs(), residual, scale })
}

/// `m(f)(Q)`: the mean of the four corner values.
pub fn average(g: &QuadGraph, f: &VertexField) -> Result<FaceField> {
    (0..g.num_quads())
        .map(|q| Ok(quad_values(g, q, f)?.iter().sum::<Complex64>() / 4.0))
        .collect::<Result<Vec<_>>>()
        .map(FaceField::from_values)
}

/// Values prescribed at one black and one white vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Basepoints {
    pub black: usize,
    pub white: usize,
    pub black_value: Complex64,
    pub white_value: Complex64,
}

impl Basepoints {
    /// Lowest-index black and white vertices, both set to zero.
    pub fn first(g: &QuadGraph) -> Self {
        let find = |c| (0..g.num_vertices()).find(|&v| g.color(v) == c).expect("both colors occur");
        Self { black: find(Color::Black), white: find(Color::White), black_value: ZERO, white_value: ZERO }
    }

    pub fn with_values(mut self, black: Complex64, white: Complex64) -> Self {
        self.black_value = black;
        self.white_value = white;
        self
    }
}

/// Integrates per-quad diagonal increments over Γ and Γ*. `inc(q, color)` is
/// the increment from the minus to the plus vertex of that color in `q`.
fn integrate_diagonals(
    g: &QuadGraph,
    base: &Basepoints,
    inc: impl Fn(usize, Color) -> Complex64,
) -> VertexField {
    let mut out = VertexField::undefined(g.num_vertices());
    for (start, value) in [(base.black, base.black_value), (base.white, base.white_value)] {
        out.set(start, Some(value));
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let fu = out.get(u).expect("visited vertices carry values");
            for &(q, c) in g.star(u) {
                let other = g.quad(q)[(c + 2) % 4];
                if out.is_defined(other) {
                    continue;
                }
                let d = inc(q, g.color(u));
                out.set(other, Some(if c < 2 { fu + d } else { fu - d }));
                queue.push_back(other);
            }
        }
    }
    out
}

/// A function `f` on V(Λ) with `∂_Λ f = h` and `∂̄_Λ f = 0`.
pub fn primitive(g: &QuadGraph, h: &FaceField, base: &Basepoints) -> Result<VertexField> {
    if !g.is_disk() {
        return Err(Error::NotSimplyConnected);
    }
    let report = check_holomorphic_face(g, h)?;
    if !report.is_holomorphic(HOLOMORPHIC_TOL) {
        return Err(Error::NotHolomorphic { defect: report.relative_defect() });
    }
    let values: Vec<Complex64> = h.values()?;
    Ok(integrate_diagonals(g, base, |q, color| {
        let p = g.quad_positions(q);
        match color {
            Color::Black => values[q] * (p[2] - p[0]),
            Color::White => values[q] * (p[3] - p[1]),
        }
    }))
}

/// `△f(v)` at an interior vertex by the explicit stencil.
pub fn laplacian_at(g: &QuadGraph, f: &VertexField, v: usize) -> Result<Complex64> {
    if g.is_boundary(v) {
        return Err(Error::BoundaryVertex(v));
    }
    let fv = f.at(v)?;
    let black = g.color(v) == Color::Black;
    let mut sum = ZERO;
    for &(q, c) in g.star(v) {
        let idx = g.quad(q);
        let rho = if black { g.geometry(q).rho } else { 1.0 / g.geometry(q).rho };
        let (prev, opposite, next) = (f.at(idx[(c + 1) % 4])?, f.at(idx[(c + 2) % 4])?, f.at(idx[(c + 3) % 4])?);
        sum += (rho.norm_sqr() * (opposite - fv) + rho.im * (next - prev)) / rho.re;
    }
    Ok(sum / (2.0 * g.ar_fv(v)?))
}

/// `△f` on interior vertices, undefined on the boundary.
pub fn laplacian(g: &QuadGraph, f: &VertexField) -> Result<VertexField> {
    let mut out = VertexField::undefined(g.num_vertices());
    for v in g.interior_vertices() {
        out.set(v, Some(laplacian_at(g, f, v)?));
    }
    Ok(out)
}

/// `(4 ∂̄_◊ ∂_Λ f, 4 ∂_◊ ∂̄_Λ f)`, both equal to `△f`.
pub fn laplacian_factored(g: &QuadGraph, f: &VertexField) -> Result<(VertexField, VertexField)> {
    let (d, db) = d_lambda(g, f)?;
    let (_, dbar_d) = d_diamond(g, &d)?;
    let (d_dbar, _) = d_diamond(g, &db)?;
    Ok((dbar_d.scale(Complex64::new(4.0, 0.0)), d_dbar.scale(Complex64::new(4.0, 0.0))))
}

/// Contribution of one quad to the Dirichlet energy.
pub fn quad_energy(g: &QuadGraph, q: usize, vals: [Complex64; 4]) -> f64 {
    let rho = g.geometry(q).rho;
    let (fb, fw) = (vals[2] - vals[0], vals[3] - vals[1]);
    (rho.norm_sqr() * fb.norm_sqr() + fw.norm_sqr()) / (2.0 * rho.re) + rho.im / rho.re * (fb * fw.conj()).re
}

/// `E(f)` summed over all quads by the per-quad formula.
pub fn dirichlet_energy(g: &QuadGraph, f: &VertexField) -> Result<f64> {
    (0..g.num_quads()).map(|q| Ok(quad_energy(g, q, quad_values(g, q, f)?))).sum()
}

/// `E(f) = ⟨df, df⟩` through the wedge product and Hodge star.
pub fn dirichlet_energy_forms(g: &QuadGraph, f: &VertexField) -> Result<f64> {
    let df = exterior_d_function(g, f)?;
    Ok(scalar_one(g, &df, &df)?.re)
}

/// A real `f̃` with `f + i f̃` discrete holomorphic.
pub fn harmonic_conjugate(g: &QuadGraph, f: &VertexField, base: &Basepoints) -> Result<VertexField> {
    let values = f.values()?;
    let scale = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(v) = values.iter().position(|z| z.im.abs() > 1e-12 * scale.max(1.0)) {
        return Err(Error::InvalidInput(format!("harmonic conjugate needs a real function (vertex {v})")));
    }
    if !g.is_disk() {
        return Err(Error::NotSimplyConnected);
    }
    let lap = laplacian(g, f)?;
    let defect = g
        .interior_vertices()
        .map(|v| lap.get(v).map_or(0.0, |z| z.norm()) * g.ar_fv(v).unwrap_or(0.0))
        .fold(0.0, f64::max);
    if defect > HOLOMORPHIC_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotHarmonic { defect });
    }
    let (d, _) = d_lambda(g, &f.re())?;
    let d = d.values()?;
    let base = base.with_values(
        Complex64::new(base.black_value.re, 0.0),
        Complex64::new(base.white_value.re, 0.0),
    );
    Ok(integrate_diagonals(g, &base, |q, color| {
        let p = g.quad_positions(q);
        let diag = match color {
            Color::Black => p[2] - p[0],
            Color::White => p[3] - p[1],
        };
        Complex64::new(2.0 * (d[q] * diag).im, 0.0)
    }))
}

/// One edge of a white cycle (on Γ*) or black cycle (on Γ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CycleEdge {
    pub quad: usize,
    /// `b(Q)` for a white-cycle edge, `w(Q)` for a black-cycle edge.
    pub apex: usize,
    pub from: usize,
    pub to: usize,
}

/// The cycles W on Γ* and B on Γ induced by a discrete contour.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlackWhiteCycles {
    pub white: Vec<CycleEdge>,
    pub black: Vec<CycleEdge>,
}

impl BlackWhiteCycles {
    /// `∮_W F(Q, b(Q)) dz + ∮_B G(Q, w(Q)) dz` where `F`, `G` give the
    /// integrand on an edge from its quad and apex.
    pub fn integrate(
        &self,
        g: &QuadGraph,
        white: impl Fn(usize, usize, Complex64) -> Result<Complex64>,
        black: impl Fn(usize, usize, Complex64) -> Result<Complex64>,
    ) -> Result<(Complex64, Complex64)> {
        let mut w = ZERO;
        for e in &self.white {
            w += white(e.quad, e.apex, g.position(e.to) - g.position(e.from))?;
        }
        let mut b = ZERO;
        for e in &self.black {
            b += black(e.quad, e.apex, g.position(e.to) - g.position(e.from))?;
        }
        Ok((w, b))
    }
}

/// Splits a closed medial path into its white and black cycles.
pub fn contour_decompose(g: &QuadGraph, path: &MedialPath) -> Result<BlackWhiteCycles> {
    path.validate(g)?;
    if path.is_empty() || !path.is_closed(g) {
        return Err(Error::NotContour("path is not closed".into()));
    }
    let mut white = Vec::new();
    let mut black = Vec::new();
    for &s in &path.steps {
        let (q, c) = (s.edge / 4, s.edge % 4);
        let idx = g.quad(q);
        let (mut from, mut to) = (idx[(c + 3) % 4], idx[(c + 1) % 4]);
        if !s.forward {
            std::mem::swap(&mut from, &mut to);
        }
        let e = CycleEdge { quad: q, apex: idx[c], from, to };
        match g.color(idx[c]) {
            Color::Black => white.push(e),
            Color::White => black.push(e),
        }
    }
    for (name, cycle) in [("white", &white), ("black", &black)] {
        if !chains(cycle) {
            return Err(Error::NotContour(format!("the {name} cycle does not close up")));
        }
    }
    Ok(BlackWhiteCycles { white, black })
}

fn chains(cycle: &[CycleEdge]) -> bool {
    cycle.is_empty()
        || (0..cycle.len()).all(|k| cycle[k].to == cycle[(k + 1) % cycle.len()].from)
}

#[cfg(test)]
mod tests;
