use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use super::path_sums::JPotential;
use super::rays::{green_integral, Rational, RayStats};
use super::table::{KernelDiagnostics, KernelKind, KernelTable};
use super::KernelOptions;
use crate::error::{Error, Result};
use crate::field::VertexField;
use crate::operators::laplacian_at;
use crate::quadgraph::{ConeTree, QuadGraph, Site};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// The leading terms of `G(v; v0)` for `v ≠ v0`, from `J(v, v0)`.
pub fn green_asymptote(displacement: Complex64, j: Complex64, same_color: bool) -> f64 {
    if same_color {
        (EULER_GAMMA + LN_2) / (2.0 * PI) + (displacement * j).norm().ln() / (4.0 * PI)
    } else {
        (displacement / j).norm().ln() / (4.0 * PI)
    }
}

pub(crate) fn check_vertex(g: &QuadGraph, v: usize) -> Result<()> {
    if v >= g.num_vertices() {
        return Err(Error::InvalidInput(format!("vertex {v} does not exist")));
    }
    Ok(())
}

pub(crate) fn merge_stats(diag: &mut KernelDiagnostics, stats: &[RayStats]) {
    for s in stats {
        diag.max_pole_multiplicity = diag.max_pole_multiplicity.max(s.multiplicity);
        diag.max_quadrature_intervals = diag.max_quadrature_intervals.max(s.intervals);
        diag.quadrature_evaluations += s.evaluations;
    }
}

/// The free Green's function `G(·; v0)` with `G(v0; v0) = 0` and
/// `△G(·; v0) = δ_{v0} / (2 ar(F_{v0}))`.
///
/// This normalization is the one for which `8π ∂_Λ G` is a Cauchy kernel;
/// the measured constant is reported in the diagnostics and no rescaling
/// is applied.
pub fn green_free(g: &QuadGraph, v0: usize, opts: &KernelOptions) -> Result<KernelTable> {
    g.require_parallelogram()?;
    check_vertex(g, v0)?;
    let base = Site::Vertex(v0);
    let tree = ConeTree::new(g, v0);
    let p0 = g.position(v0);
    let sites: Vec<usize> = (0..g.num_vertices()).filter(|&v| opts.contains(g, Site::Vertex(v), base)).collect();
    let evaluated: Vec<(usize, f64, RayStats)> = sites
        .par_iter()
        .map(|&v| {
            if v == v0 {
                return Ok((v, 0.0, RayStats::default()));
            }
            let path = tree.path_to(g, v)?;
            let e = Rational::exponential(&path.edges).cancel();
            let d = g.position(v) - p0;
            let u = -d / d.norm();
            e.check_cut(u, v)?;
            let (value, stats) = green_integral(&e, u, &opts.quadrature)?;
            Ok((v, value, stats))
        })
        .collect::<Result<_>>()?;

    let mut values = vec![None; g.num_vertices()];
    for &(v, x, _) in &evaluated {
        values[v] = Some(Complex64::new(x, 0.0));
    }
    let mut diag = KernelDiagnostics {
        evaluated: evaluated.len(),
        expected_normalization: 0.5,
        scale_factor: 1.0,
        ..Default::default()
    };
    merge_stats(&mut diag, &evaluated.iter().map(|e| e.2).collect::<Vec<_>>());

    let field = VertexField::from_options(values.clone());
    for v in g.interior_vertices() {
        // vertices next to the evaluation boundary have no complete stencil
        let Ok(lap) = laplacian_at(g, &field, v) else { continue };
        if v == v0 {
            diag.normalization = Some(lap.re * g.ar_fv(v0)?);
        } else {
            diag.residual = diag.residual.max(lap.norm());
            diag.residual_sites += 1;
        }
    }

    let pot = JPotential::new(g, v0)?;
    let mut predicted = vec![None; g.num_vertices()];
    for &(v, _, _) in &evaluated {
        if v != v0 {
            let s = pot.sums(g, Site::Vertex(v), base)?;
            let value = green_asymptote(g.position(v) - p0, s.j, s.parity == 1);
            predicted[v] = Some(Complex64::new(value, 0.0));
        }
    }
    Ok(KernelTable { kind: KernelKind::GreenFree, base, values, predicted, diagnostics: diag })
}
