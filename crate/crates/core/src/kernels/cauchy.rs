use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::green::{check_vertex, green_free, merge_stats};
use super::path_sums::JPotential;
use super::rays::{cauchy_integral as ray_integral, Rational, RayStats};
use super::table::{KernelDiagnostics, KernelKind, KernelTable};
use super::KernelOptions;
use crate::contour::Contour;
use crate::error::{Error, Result};
use crate::forms::Cochain;
use crate::operators::{d_diamond_at, quad_derivative};
use crate::quadgraph::{ConeTree, QuadGraph, Site};

const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * PI);

/// `∂_Λ` and `∂̄_Λ` of a partial vertex function, where all four corners are known.
pub(crate) fn partial_d_lambda(g: &QuadGraph, f: &[Option<Complex64>]) -> Vec<Option<(Complex64, Complex64)>> {
    (0..g.num_quads())
        .map(|q| {
            let c = g.quad(q);
            let vals = [f[c[0]]?, f[c[1]]?, f[c[2]]?, f[c[3]]?];
            Some(quad_derivative(g, q, vals))
        })
        .collect()
}

/// `∂_◊` and `∂̄_◊` of a partial face function, where the whole star is known.
pub(crate) fn partial_d_diamond(g: &QuadGraph, h: &[Option<Complex64>]) -> Vec<Option<(Complex64, Complex64)>> {
    (0..g.num_vertices())
        .map(|v| {
            if g.is_boundary(v) || g.star(v).iter().any(|&(q, _)| h[q].is_none()) {
                return None;
            }
            d_diamond_at(g, v, |q| Ok(h[q].unwrap())).ok()
        })
        .collect()
}

/// `K_{v0} = 8π ∂_Λ G(·; v0)` on the quads.
pub fn cauchy_kernel_vertex(g: &QuadGraph, v0: usize, opts: &KernelOptions) -> Result<KernelTable> {
    check_vertex(g, v0)?;
    let base = Site::Vertex(v0);
    let green = green_free(g, v0, &opts.widened(g.max_edge_length()))?;
    let values: Vec<Option<Complex64>> = partial_d_lambda(g, &green.values)
        .into_iter()
        .enumerate()
        .map(|(q, d)| d.filter(|_| opts.contains(g, Site::Quad(q), base)).map(|(d, _)| 8.0 * PI * d))
        .collect();

    let mut diag = KernelDiagnostics { expected_normalization: 1.0, scale_factor: 1.0, ..green.diagnostics.clone() };
    diag.evaluated = values.iter().flatten().count();
    diag.residual = 0.0;
    diag.residual_sites = 0;
    diag.normalization = None;
    for (v, d) in partial_d_diamond(g, &values).into_iter().enumerate() {
        let Some((_, dbar)) = d else { continue };
        if v == v0 {
            diag.normalization = Some((dbar * g.ar_fv(v)? / PI).re);
        } else {
            diag.residual = diag.residual.max(dbar.norm());
            diag.residual_sites += 1;
        }
    }

    let pot = JPotential::new(g, v0)?;
    let p0 = g.position(v0);
    let mut predicted = vec![None; g.num_quads()];
    for q in (0..g.num_quads()).filter(|&q| values[q].is_some()) {
        let s = pot.sums(g, Site::Quad(q), base)?;
        predicted[q] = Some(1.0 / (g.center(q) - p0) + s.tau.expect("face endpoint") / s.j);
    }
    Ok(KernelTable { kind: KernelKind::CauchyVertex, base, values, predicted, diagnostics: diag })
}

fn check_quad(g: &QuadGraph, q: usize) -> Result<()> {
    if q >= g.num_quads() {
        return Err(Error::InvalidInput(format!("quad {q} does not exist")));
    }
    Ok(())
}

/// `K_{Q0}(v) = (1/πi) ∮ log(λ) e(λ, v; Q0) dλ` on the vertices.
pub fn cauchy_kernel_face(g: &QuadGraph, q0: usize, opts: &KernelOptions) -> Result<KernelTable> {
    g.require_parallelogram()?;
    check_quad(g, q0)?;
    let base = Site::Quad(q0);
    let [pb, pwm, _, pwp] = g.quad_positions(q0);
    let center = g.center(q0);
    let tree = ConeTree::new(g, g.quad(q0)[0]);
    let sites: Vec<usize> = (0..g.num_vertices()).filter(|&v| opts.contains(g, Site::Vertex(v), base)).collect();
    let evaluated: Vec<(usize, Complex64, RayStats)> = sites
        .par_iter()
        .map(|&v| {
            let path = tree.path_to(g, v)?;
            let e = Rational::exponential(&path.edges).with_pole(pb - pwp).with_pole(pb - pwm).cancel();
            let d = g.position(v) - center;
            let u = -d / d.norm();
            e.check_cut(u, v)?;
            let (value, stats) = ray_integral(&e, u, &opts.quadrature)?;
            Ok((v, value, stats))
        })
        .collect::<Result<_>>()?;

    let mut values = vec![None; g.num_vertices()];
    for &(v, k, _) in &evaluated {
        values[v] = Some(k);
    }
    let mut diag = KernelDiagnostics {
        evaluated: evaluated.len(),
        expected_normalization: 1.0,
        scale_factor: 1.0,
        ..Default::default()
    };
    merge_stats(&mut diag, &evaluated.iter().map(|e| e.2).collect::<Vec<_>>());
    for (q, d) in partial_d_lambda(g, &values).into_iter().enumerate() {
        let Some((_, dbar)) = d else { continue };
        if q == q0 {
            diag.normalization = Some((dbar * g.ar_fq(q) / PI).re);
        } else {
            diag.residual = diag.residual.max(dbar.norm());
            diag.residual_sites += 1;
        }
    }

    let pot = JPotential::new(g, g.quad(q0)[0])?;
    let mut predicted = vec![None; g.num_vertices()];
    for &(v, _, _) in &evaluated {
        let s = pot.sums(g, Site::Vertex(v), base)?;
        predicted[v] = Some(1.0 / (g.position(v) - center) + s.tau.expect("face endpoint") / s.j);
    }
    Ok(KernelTable { kind: KernelKind::CauchyFace, base, values, predicted, diagnostics: diag })
}

/// `∂_Λ K_{Q0}` from a table of `K_{Q0}`. Its defining residual is
/// `∂̄_◊ ∂_Λ K_{Q0}`, which vanishes away from the corners of `Q0`.
pub fn cauchy_kernel_face_derivative(g: &QuadGraph, face: &KernelTable) -> Result<KernelTable> {
    let (KernelKind::CauchyFace, Site::Quad(q0)) = (face.kind, face.base) else {
        return Err(Error::KindMismatch(format!("expected a face kernel, got {:?}", face.kind)));
    };
    let values: Vec<Option<Complex64>> = partial_d_lambda(g, &face.values).into_iter().map(|d| d.map(|d| d.0)).collect();
    let mut diag = KernelDiagnostics { expected_normalization: 0.0, normalization: None, ..face.diagnostics.clone() };
    diag.evaluated = values.iter().flatten().count();
    diag.residual = 0.0;
    diag.residual_sites = 0;
    let corners = g.quad(q0);
    for (v, d) in partial_d_diamond(g, &values).into_iter().enumerate() {
        if let (Some((_, dbar)), false) = (d, corners.contains(&v)) {
            diag.residual = diag.residual.max(dbar.norm());
            diag.residual_sites += 1;
        }
    }
    let pot = JPotential::new(g, corners[0])?;
    let center = g.center(q0);
    let mut predicted = vec![None; g.num_quads()];
    for q in (0..g.num_quads()).filter(|&q| q != q0 && values[q].is_some()) {
        let s = pot.sums(g, Site::Quad(q), face.base)?;
        let d = g.center(q) - center;
        predicted[q] = Some(-1.0 / (d * d) - s.tau.expect("face endpoints") / (s.j * s.j));
    }
    Ok(KernelTable {
        kind: KernelKind::CauchyFaceDerivative,
        base: face.base,
        values,
        predicted,
        diagnostics: diag,
    })
}

/// `∮ f h dz` over a contour, with `f` read at the vertex and `h` at the
/// quad of each medial edge `[Q, v]`.
pub fn contour_product(
    g: &QuadGraph,
    contour: &Contour,
    f: impl Fn(usize) -> Result<Complex64>,
    h: impl Fn(usize) -> Result<Complex64>,
) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for &s in &contour.path().steps {
        let q = s.edge / 4;
        if q >= g.num_quads() {
            return Err(Error::NotContour(format!("medial edge {} does not exist", s.edge)));
        }
        sum += f(g.quad(q)[s.edge % 4])? * h(q)? * g.step_displacement(s);
    }
    Ok(sum)
}

fn expect_vertex(input: &Cochain) -> Result<&crate::field::VertexField> {
    match input {
        Cochain::Vertex(f) => Ok(f),
        other => Err(Error::KindMismatch(format!("expected a vertex function, got a {}", other.kind_name()))),
    }
}

/// The discrete Cauchy integral formulae.
///
/// * `K_{v0}` with a vertex function `f`: `f(v0) = (1/2πi) ∮ f K_{v0} dz`.
/// * `K_{Q0}` with a face function `h`: `h(Q0) = (1/2πi) ∮ h K_{Q0} dz`.
/// * `∂_Λ K_{Q0}` with a vertex function `f`: `∂_Λ f(Q0) = −(1/2πi) ∮ f ∂_Λ K_{Q0} dz`;
///   the contour must not run through `Q0`.
pub fn cauchy_integral(g: &QuadGraph, input: &Cochain, kernel: &KernelTable, contour: &Contour) -> Result<Complex64> {
    if !contour.encloses(kernel.base) {
        if let (KernelKind::CauchyFaceDerivative, Site::Quad(q0)) = (kernel.kind, kernel.base) {
            if contour.touches_quad(q0) {
                return Err(Error::ContourTouchesBase);
            }
        }
        return Err(Error::BasePointNotEnclosed);
    }
    match kernel.kind {
        KernelKind::CauchyVertex => {
            let f = expect_vertex(input)?;
            Ok(contour_product(g, contour, |v| f.at(v), |q| kernel.value(q))? / TWO_PI_I)
        }
        KernelKind::CauchyFace => match input {
            Cochain::Face(h) => Ok(contour_product(g, contour, |v| kernel.value(v), |q| h.at(q))? / TWO_PI_I),
            other => Err(Error::KindMismatch(format!("expected a face function, got a {}", other.kind_name()))),
        },
        KernelKind::CauchyFaceDerivative => {
            let Site::Quad(q0) = kernel.base else { unreachable!("face kernels sit on quads") };
            if contour.touches_quad(q0) {
                return Err(Error::ContourTouchesBase);
            }
            let f = expect_vertex(input)?;
            Ok(-contour_product(g, contour, |v| f.at(v), |q| kernel.value(q))? / TWO_PI_I)
        }
        kind => Err(Error::KindMismatch(format!("{kind:?} tables have no Cauchy formula of this form"))),
    }
}
