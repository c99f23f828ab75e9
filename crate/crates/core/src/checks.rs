//! Numerical checks of the exact identities of the calculus on a given
//! graph, with random fields. Each returns the worst residual found.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::contour::Contour;
use crate::elliptic::{solve_dirichlet, DirichletProblem};
use crate::error::{Error, Result};
use crate::field::{FaceField, VertexField};
use crate::forms::{
    codifferential, exterior_d_form, exterior_d_function, hodge_one, integrate_one, scalar_one, scalar_two,
    scalar_vertex, scalar_face, wedge, Cochain, OneForm, OneFormType, TwoForm,
};
use crate::operators::{d_diamond, d_lambda, d_lambda_contour, laplacian, laplacian_factored};
use crate::quadgraph::QuadGraph;

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self { name: name.into(), residual, tolerance, passed: residual < tolerance }
    }
}

fn random_c(r: &mut impl Rng) -> Complex64 {
    Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

fn random_vertex_field(g: &QuadGraph, r: &mut impl Rng) -> VertexField {
    VertexField::from_fn(g.num_vertices(), |_| random_c(r))
}

fn random_face_field(g: &QuadGraph, r: &mut impl Rng) -> FaceField {
    FaceField::from_fn(g.num_quads(), |_| random_c(r))
}

/// A random type-◊ one-form.
pub fn random_diamond_form(g: &QuadGraph, r: &mut impl Rng) -> Result<OneForm> {
    let p = random_face_field(g, r);
    let q = random_face_field(g, r);
    OneForm::from_coefficients(g, &p, &q)
}

/// A random field vanishing on every vertex closer than `margin` to ∂Λ₀.
pub fn random_supported_field(g: &QuadGraph, margin: usize, r: &mut impl Rng) -> VertexField {
    let boundary: Vec<usize> = g.boundary_vertices().collect();
    let dist = g.bfs_distances(&boundary);
    VertexField::from_fn(g.num_vertices(), |v| {
        let z = random_c(r);
        if dist[v].is_some_and(|d| d >= margin) {
            z
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

/// The discrete contour bounding the whole graph.
pub fn outer_contour(g: &QuadGraph) -> Result<Contour> {
    let all: Vec<usize> = (0..g.num_quads()).collect();
    Contour::from_quads(g, &all)
}

/// `∮ f ★dḡ` along a contour.
fn flux(g: &QuadGraph, f: &VertexField, h: &VertexField, contour: &Contour) -> Result<Complex64> {
    let star_dh = hodge_one(g, &exterior_d_function(g, &h.conj())?)?;
    integrate_one(&star_dh.mul_vertex(g, f), contour.path())
}

/// Both sides of `⟨f, △h⟩ + ⟨df, dh⟩ = ∮_{∂X₀} f ★dh̄`, the relative residual.
pub fn green_first_identity(g: &QuadGraph, f: &VertexField, h: &VertexField) -> Result<f64> {
    let lap = laplacian(g, h)?;
    let lhs = scalar_vertex(g, f, &lap)? + scalar_one(g, &exterior_d_function(g, f)?, &exterior_d_function(g, h)?)?;
    Ok(rel(lhs, flux(g, f, h, &outer_contour(g)?)?))
}

/// `⟨f, △h⟩ − ⟨△f, h⟩ = ∮_{∂X₀} (f ★dh̄ − h̄ ★df)`, the relative residual.
/// This is the first identity minus its conjugate with `f` and `h` swapped.
pub fn green_second_identity(g: &QuadGraph, f: &VertexField, h: &VertexField) -> Result<f64> {
    let outer = outer_contour(g)?;
    let lhs = scalar_vertex(g, f, &laplacian(g, h)?)? - scalar_vertex(g, &laplacian(g, f)?, h)?;
    let star_df = hodge_one(g, &exterior_d_function(g, f)?)?;
    let rhs = flux(g, f, h, &outer)? - integrate_one(&star_df.mul_vertex(g, &h.conj()), outer.path())?;
    Ok(rel(lhs, rhs))
}

/// `max |⟨f, △h⟩|` over `count` random fields `h` supported three steps away
/// from the boundary, so that `h` vanishes on every quad touching it; zero for harmonic `f`. `None` if the graph is too
/// small to carry such fields.
pub fn weyl_defect(g: &QuadGraph, f: &VertexField, count: usize, r: &mut impl Rng) -> Result<Option<f64>> {
    let boundary: Vec<usize> = g.boundary_vertices().collect();
    if !g.bfs_distances(&boundary).iter().any(|d| d.is_some_and(|d| d >= 3)) {
        return Ok(None);
    }
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let h = random_supported_field(g, 3, r);
        worst = worst.max(scalar_vertex(g, f, &laplacian(g, &h)?)?.norm());
    }
    Ok(Some(worst))
}

/// A contour around a random connected set of up to `max_quads` quads.
pub fn random_contour(g: &QuadGraph, max_quads: usize, r: &mut impl Rng) -> Result<Contour> {
    let mut region = vec![r.gen_range(0..g.num_quads())];
    let target = r.gen_range(1..=max_quads.max(1));
    let mut inside = vec![false; g.num_quads()];
    inside[region[0]] = true;
    while region.len() < target {
        let from = region[r.gen_range(0..region.len())];
        let next: Vec<usize> = g.quad_neighbors(from).filter(|&q| !inside[q]).collect();
        if next.is_empty() {
            if region.iter().all(|&q| g.quad_neighbors(q).all(|n| inside[n])) {
                break;
            }
            continue;
        }
        let q = next[r.gen_range(0..next.len())];
        inside[q] = true;
        region.push(q);
    }
    Contour::from_quads(g, &region)
}

/// `max |∮ f dz|` and `max |∮ h dz|` over the given contours.
pub fn morera_defect(g: &QuadGraph, f: &VertexField, h: &FaceField, contours: &[Contour]) -> Result<f64> {
    let dz = OneForm::dz(g);
    let (fdz, hdz) = (dz.mul_vertex(g, f), dz.mul_face(h));
    let mut worst: f64 = 0.0;
    for c in contours {
        worst = worst.max(integrate_one(&fdz, c.path())?.norm());
        worst = worst.max(integrate_one(&hdz, c.path())?.norm());
    }
    Ok(worst)
}

fn max_diff(a: &TwoForm, b: &TwoForm) -> f64 {
    a.sub(b).max_abs()
}

fn one_form_diff(a: &OneForm, b: &OneForm) -> Result<f64> {
    (0..a.len()).map(|e| Ok((a.get(e)? - b.get(e)?).norm())).try_fold(0.0, |m: f64, x: Result<f64>| Ok(m.max(x?)))
}

/// A function known to be discrete holomorphic on `g`, with its values on
/// quads: `v` plus a random biconstant in general, and `v²` added on
/// parallelogram-graphs.
fn holomorphic_pair(g: &QuadGraph, r: &mut impl Rng) -> Result<(VertexField, FaceField)> {
    let (cb, cw) = (random_c(r), random_c(r));
    let quadratic = g.is_parallelogram_graph();
    let f = VertexField::from_fn(g.num_vertices(), |v| {
        let z = g.position(v);
        let c = if g.color(v) == crate::Color::Black { cb } else { cw };
        z + c + if quadratic { z * z } else { Complex64::new(0.0, 0.0) }
    });
    // ∂_Λ f is holomorphic on ◊ for every harmonic f
    let (h, _) = d_lambda(g, &f)?;
    Ok((f, h))
}

/// The identity suite on one graph: Stokes, Leibniz, `ddf = 0`, `★²`,
/// derivative formulas, the Laplacian factorization, Green's identities,
/// adjointness, Weyl and Morera. Random data are drawn from `seed`.
pub fn identity_suite(g: &QuadGraph, seed: u64) -> Result<Vec<CheckResult>> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let f = random_vertex_field(g, &mut r);
    let h = random_vertex_field(g, &mut r);

    let generic = OneForm::from_fn(g, OneFormType::Generic, |_| random_c(&mut r));
    let d = exterior_d_form(g, &generic)?;
    let mut stokes: f64 = 0.0;
    for face in g.medial_faces() {
        let boundary = integrate_one(&generic, &g.face_boundary(face)?)?;
        stokes = stokes.max((d.get(face)? - boundary).norm());
    }
    out.push(CheckResult::new("stokes", stokes, 1e-12));

    let omega = random_diamond_form(g, &mut r)?;
    let df = exterior_d_function(g, &f)?;
    let lhs = exterior_d_form(g, &omega.mul_vertex(g, &f))?;
    let rhs = wedge(g, &df, &omega)?.add(&exterior_d_form(g, &omega)?.mul_vertex(&f));
    out.push(CheckResult::new("leibniz", max_diff(&lhs, &rhs), 1e-11));

    out.push(CheckResult::new("ddf", exterior_d_form(g, &df)?.max_abs(), 1e-12));

    let twice = hodge_one(g, &hodge_one(g, &omega)?)?;
    let mut hodge = one_form_diff(&twice, &omega.scale(Complex64::new(-1.0, 0.0)))?;
    let Cochain::Two(sf) = crate::forms::hodge(g, &Cochain::Vertex(f.clone()))? else { unreachable!() };
    let Cochain::Vertex(back) = crate::forms::hodge(g, &Cochain::Two(sf))? else { unreachable!() };
    for v in g.interior_vertices() {
        hodge = hodge.max((back.at(v)? - f.at(v)?).norm());
    }
    let hf = random_face_field(g, &mut r);
    let Cochain::Two(sh) = crate::forms::hodge(g, &Cochain::Face(hf.clone()))? else { unreachable!() };
    let Cochain::Face(back) = crate::forms::hodge(g, &Cochain::Two(sh))? else { unreachable!() };
    hodge = hodge.max(back.max_abs_diff(&hf));
    out.push(CheckResult::new("hodge_squared", hodge, 1e-13));

    let (a, ab) = d_lambda(g, &f)?;
    let (c, cb) = d_lambda_contour(g, &f)?;
    out.push(CheckResult::new("derivative_vs_contour", a.max_abs_diff(&c).max(ab.max_abs_diff(&cb)), 1e-12));

    let lap = laplacian(g, &f)?;
    let (l1, l2) = laplacian_factored(g, &f)?;
    out.push(CheckResult::new("laplacian_factorization", lap.max_abs_diff(&l1).max(lap.max_abs_diff(&l2)), 1e-11));

    out.push(CheckResult::new("green_first_identity", green_first_identity(g, &f, &h)?, 1e-10));
    out.push(CheckResult::new("green_second_identity", green_second_identity(g, &f, &h)?, 1e-10));

    let fc = random_supported_field(g, 1, &mut r);
    let hq = random_face_field(g, &mut r);
    let (dfc, dbfc) = d_lambda(g, &fc)?;
    let (dh, dbh) = d_diamond(g, &hq)?;
    let adj = (scalar_face(g, &dfc, &hq)? + scalar_vertex(g, &fc, &dbh)?).norm()
        .max((scalar_face(g, &dbfc, &hq)? + scalar_vertex(g, &fc, &dh)?).norm());
    out.push(CheckResult::new("adjoint_derivatives", adj, 1e-11));

    let Cochain::Vertex(delta) = codifferential(g, &Cochain::One(omega.clone()))? else { unreachable!() };
    let mut adj = (scalar_one(g, &exterior_d_function(g, &fc)?, &omega)? - scalar_vertex(g, &fc, &delta)?).norm();
    let compact_h = FaceField::from_fn(g.num_quads(), |q| {
        let z = random_c(&mut r);
        if g.quad(q).iter().any(|&v| g.is_boundary(v)) {
            Complex64::new(0.0, 0.0)
        } else {
            z
        }
    });
    let compact_omega = OneForm::dz(g).mul_face(&compact_h);
    let two = crate::forms::hodge_vertex(g, &random_vertex_field(g, &mut r));
    let Cochain::One(delta) = codifferential(g, &Cochain::Two(two.clone()))? else { unreachable!() };
    adj = adj.max((scalar_two(g, &exterior_d_form(g, &compact_omega)?, &two)? - scalar_one(g, &compact_omega, &delta)?).norm());
    out.push(CheckResult::new("adjoint_d_delta", adj, 1e-11));

    let boundary: Vec<Option<f64>> =
        (0..g.num_vertices()).map(|v| g.is_boundary(v).then(|| r.gen_range(-1.0..1.0))).collect();
    let harmonic = solve_dirichlet(g, &DirichletProblem::new(g, boundary, 1e-12)?)?.field;
    if let Some(w) = weyl_defect(g, &harmonic, 50, &mut r)? {
        out.push(CheckResult::new("weyl", w, 1e-10));
    }

    let (hf, hh) = holomorphic_pair(g, &mut r)?;
    let contours = (0..50)
        .map(|_| random_contour(g, 60, &mut r))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::InvalidInput(format!("random contour: {e}")))?;
    out.push(CheckResult::new("morera", morera_defect(g, &hf, &hh, &contours)?, 1e-11));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattices;

    #[test]
    fn identities_hold_on_small_graphs() {
        let graphs = [
            lattices::skew(Complex64::new(1.0, 0.0), Complex64::new(0.3, 0.9), 8, 7).unwrap(),
            lattices::perturbed_square(8, 8, 0.2, 3).unwrap(),
            lattices::fixture(lattices::Fixture::Fig3).unwrap(),
        ];
        for g in &graphs {
            for c in identity_suite(g, 5).unwrap() {
                assert!(c.passed, "{c:?}");
            }
        }
    }

    #[test]
    fn non_harmonic_functions_fail_weyl() {
        let g = lattices::perturbed_square(8, 8, 0.2, 3).unwrap();
        let f = VertexField::from_fn(g.num_vertices(), |v| Complex64::new(g.position(v).norm_sqr().powi(2), 0.0));
        let w = weyl_defect(&g, &f, 10, &mut ChaCha8Rng::seed_from_u64(1)).unwrap().unwrap();
        assert!(w > 1e-3, "{w}");
    }

    #[test]
    fn morera_detects_non_holomorphic_input() {
        let g = lattices::skew(Complex64::new(1.0, 0.0), Complex64::new(0.3, 0.9), 6, 6).unwrap();
        let mut r = ChaCha8Rng::seed_from_u64(2);
        let contours: Vec<Contour> = (0..10).map(|_| random_contour(&g, 30, &mut r).unwrap()).collect();
        let f = VertexField::from_fn(g.num_vertices(), |v| g.position(v).conj());
        let h = FaceField::constant(g.num_quads(), Complex64::new(0.0, 0.0));
        assert!(morera_defect(&g, &f, &h, &contours).unwrap() > 1e-3);
    }
}
