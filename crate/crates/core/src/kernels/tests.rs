use num_complex::Complex64;

use super::*;
use crate::contour::Contour;
use crate::elliptic::{green_in_domain, solve_dirichlet, DirichletProblem};
use crate::error::Error;
use crate::field::{FaceField, VertexField};
use crate::forms::Cochain;
use crate::lattices;
use crate::operators::d_lambda;
use crate::quadgraph::{QuadGraph, Site};
use crate::testutil::*;

fn skew() -> QuadGraph {
    lattices::skew(c(1., 0.2), c(0.3, 1.1), 20, 20).unwrap()
}

fn bruijn() -> QuadGraph {
    lattices::de_bruijn(&[c(1., 0.), c(0.3, 0.8), c(-0.6, 0.9)], 7.0, None, 5).unwrap()
}

fn center_vertex(g: &QuadGraph) -> usize {
    g.nearest_vertex(c(0., 0.))
}

#[test]
fn green_solves_its_defining_equation() {
    for g in [skew(), bruijn()] {
        let v0 = center_vertex(&g);
        let t = green_free(&g, v0, &KernelOptions::default()).unwrap();
        assert_eq!(t.value(v0).unwrap(), c(0., 0.));
        assert!(t.values.iter().flatten().all(|z| z.im == 0.0));
        let d = &t.diagnostics;
        assert!(d.residual < 1e-8 && d.residual_sites > 100, "{d:?}");
        assert!((d.normalization.unwrap() - 0.5).abs() < 1e-8, "{d:?}");
        assert_eq!(d.scale_factor, 1.0);
    }
}

#[test]
fn green_on_the_square_lattice() {
    // G vanishes on the other color; on the black sublattice Γ ≅ √2·Z² it is
    // a quarter of the random-walk potential kernel, which is 1 at a neighbour
    let g = lattices::skew(c(1., 0.), c(0., 1.), 6, 6).unwrap();
    let v0 = center_vertex(&g);
    let t = green_free(&g, v0, &KernelOptions::default()).unwrap();
    for &w in g.neighbors(v0) {
        assert!(t.value(w).unwrap().norm() < 1e-14, "{:?}", t.value(w));
    }
    let diag = g.nearest_vertex(c(1., 1.));
    assert!((t.value(diag).unwrap().re - 0.25).abs() < 1e-13, "{:?}", t.value(diag));
}

#[test]
fn domain_green_is_free_green_minus_a_harmonic_correction() {
    let g = lattices::skew(c(1., 0.1), c(-0.2, 0.9), 10, 10).unwrap();
    let v0 = center_vertex(&g);
    let free = green_free(&g, v0, &KernelOptions::default()).unwrap().vertex_field().unwrap();
    let boundary: Vec<Option<f64>> =
        (0..g.num_vertices()).map(|v| g.is_boundary(v).then(|| free.get(v).unwrap().re)).collect();
    let h = solve_dirichlet(&g, &DirichletProblem::new(&g, boundary, 1e-11).unwrap()).unwrap().field;
    let expected = free.sub(&h).scale(c(0.5, 0.));
    assert!(green_in_domain(&g, v0).unwrap().max_abs_diff(&expected) < 1e-9);
}

#[test]
fn vertex_kernel_residuals() {
    let g = bruijn();
    let v0 = center_vertex(&g);
    let k = cauchy_kernel_vertex(&g, v0, &KernelOptions::default()).unwrap();
    let d = &k.diagnostics;
    assert!(d.residual < 1e-8 && d.residual_sites > 50, "{d:?}");
    assert!((d.normalization.unwrap() - 1.0).abs() < 1e-9, "{d:?}");
}

#[test]
fn face_kernel_residuals() {
    for g in [skew(), bruijn()] {
        let q0 = g.nearest_quad(c(0.3, 0.3));
        let k = cauchy_kernel_face(&g, q0, &KernelOptions::default()).unwrap();
        let d = &k.diagnostics;
        assert!(d.residual < 1e-8 && d.residual_sites > 50, "{d:?}");
        assert!((d.normalization.unwrap() - 1.0).abs() < 1e-9, "{d:?}");
        let dk = cauchy_kernel_face_derivative(&g, &k).unwrap();
        assert!(dk.diagnostics.residual < 1e-8, "{:?}", dk.diagnostics);
    }
}

#[test]
fn radius_limits_the_evaluation() {
    let g = skew();
    let v0 = center_vertex(&g);
    let t = green_free(&g, v0, &KernelOptions::with_radius(3.0)).unwrap();
    for v in 0..g.num_vertices() {
        assert_eq!(t.values[v].is_some(), (g.position(v) - g.position(v0)).norm() <= 3.0);
    }
    assert!(t.diagnostics.residual < 1e-8);
}

#[test]
fn cauchy_formulae_reconstruct_holomorphic_data() {
    let g = bruijn();
    let v0 = center_vertex(&g);
    let q0 = g.star(v0)[0].0;
    let opts = KernelOptions::default();
    let kv = cauchy_kernel_vertex(&g, v0, &opts).unwrap();
    let kf = cauchy_kernel_face(&g, q0, &opts).unwrap();
    let dk = cauchy_kernel_face_derivative(&g, &kf).unwrap();
    let lambda = c(0.8, -0.4);
    let exp = DiscreteExponential::new(&g, lambda, v0).unwrap();
    let fields = [vertex_fn(&g, |z| z), vertex_fn(&g, |z| z * z), exp.field().clone()];
    let h = Cochain::Face(FaceField::constant(g.num_quads(), c(2., -3.)));
    for r in 3..=5 {
        let ring = Contour::ring(&g, Site::Vertex(v0), r).unwrap();
        for f in &fields {
            let input = Cochain::Vertex(f.clone());
            let value = cauchy_integral(&g, &input, &kv, &ring).unwrap();
            assert!((value - f.get(v0).unwrap()).norm() < 1e-9, "r={r}: {value}");
            let d = d_lambda(&g, f).unwrap().0.get(q0).unwrap();
            let value = cauchy_integral(&g, &input, &dk, &ring).unwrap();
            assert!((value - d).norm() < 1e-9, "r={r}: {value} vs {d}");
        }
        let value = cauchy_integral(&g, &h, &kf, &ring).unwrap();
        assert!((value - c(2., -3.)).norm() < 1e-12);
        let q_center = g.center(q0);
        let v2 = cauchy_integral(&g, &Cochain::Vertex(fields[1].clone()), &dk, &ring).unwrap();
        assert!((v2 - 2.0 * q_center).norm() < 1e-10);
    }
}

#[test]
fn cauchy_formula_errors() {
    let g = skew();
    let v0 = center_vertex(&g);
    let q0 = g.star(v0)[0].0;
    let opts = KernelOptions::default();
    let kv = cauchy_kernel_vertex(&g, v0, &opts).unwrap();
    let kf = cauchy_kernel_face(&g, q0, &opts).unwrap();
    let dk = cauchy_kernel_face_derivative(&g, &kf).unwrap();
    let f = Cochain::Vertex(vertex_fn(&g, |z| z));
    let far = Contour::ring(&g, Site::Vertex(g.nearest_vertex(c(6., 6.))), 2).unwrap();
    assert_eq!(cauchy_integral(&g, &f, &kv, &far), Err(Error::BasePointNotEnclosed));
    // a contour through Q0: the boundary of Q0's own star region
    let tight = Contour::from_quads(&g, &[q0]).unwrap();
    assert!(tight.touches_quad(q0));
    assert_eq!(cauchy_integral(&g, &f, &dk, &tight), Err(Error::ContourTouchesBase));
    let green = green_free(&g, v0, &KernelOptions::with_radius(2.0)).unwrap();
    let ring = Contour::ring(&g, Site::Vertex(v0), 2).unwrap();
    assert!(matches!(cauchy_integral(&g, &f, &green, &ring), Err(Error::KindMismatch(_))));
    assert!(matches!(cauchy_integral(&g, &f, &kf, &ring), Err(Error::KindMismatch(_))));
}

#[test]
fn higher_derivatives_on_the_skew_lattice() {
    let g = lattices::skew(c(1., 0.), c(0.4, 0.8), 18, 18).unwrap();
    let v0 = center_vertex(&g);
    let lambda = c(0.6, 0.3);
    let exp = DiscreteExponential::new(&g, lambda, v0).unwrap();
    let fields = [vertex_fn(&g, |z| z * z), exp.field().clone()];
    let opts = KernelOptions::default();
    for n in 0..=3 {
        for rad in [n + 2, 7] {
            let ring = Contour::ring(&g, Site::Vertex(v0), rad).unwrap();
            for f in &fields {
                let r = skew_higher_derivative(&g, f, v0, n, &ring, &opts).unwrap();
                assert!(r.defect() < 1e-8 * r.direct.norm().max(1.0), "n={n}: {r:?}");
            }
        }
    }
    // ∂²(v³) at a vertex, against two direct applications of ∂
    let cube = vertex_fn(&g, |z| z * z * z);
    let ring = Contour::ring(&g, Site::Vertex(v0), 3).unwrap();
    let r = skew_higher_derivative(&g, &cube, v0, 2, &ring, &opts).unwrap();
    assert!(r.defect() < 1e-10, "{r:?}");
    let ring = Contour::ring(&g, Site::Vertex(v0), 4).unwrap();
    assert_eq!(skew_higher_derivative(&g, &cube, v0, 3, &ring, &opts), Err(Error::ContourTooTight(1.5)));
    let star = Contour::ring(&g, Site::Vertex(v0), 1).unwrap();
    assert_eq!(skew_higher_derivative(&g, &cube, v0, 1, &star, &opts), Err(Error::ContourTouchesBase));
    let far = Contour::ring(&g, Site::Vertex(g.nearest_vertex(c(5., 0.))), 1).unwrap();
    assert_eq!(skew_higher_derivative(&g, &cube, v0, 0, &far, &opts), Err(Error::BasePointNotEnclosed));
    let b = bruijn();
    let ring = Contour::ring(&b, Site::Vertex(0), 1).unwrap();
    assert!(matches!(
        skew_higher_derivative(&b, &vertex_fn(&b, |z| z), 0, 1, &ring, &opts),
        Err(Error::NotSkewLattice(_))
    ));
}

#[test]
fn skew_tables_extend_the_face_kernel() {
    let g = lattices::skew(c(1., 0.), c(0.4, 0.8), 10, 10).unwrap();
    let q0 = g.nearest_quad(c(0.7, 0.4));
    let opts = KernelOptions::default();
    let face = cauchy_kernel_face(&g, q0, &opts).unwrap();
    let t0 = skew_kernel_table(&g, q0, 0, &opts).unwrap();
    for v in 0..g.num_vertices() {
        let (a, b) = (face.predicted[v].unwrap(), t0.predicted[v].unwrap());
        assert!((a - b).norm() < 1e-12 * a.norm(), "{v}: {a} {b}");
        assert_eq!(face.values[v], t0.values[v]);
    }
    let t1 = skew_kernel_table(&g, q0, 1, &opts).unwrap();
    let dk = cauchy_kernel_face_derivative(&g, &face).unwrap();
    for q in (0..g.num_quads()).filter(|&q| q != q0) {
        if let (Some(a), Some(b)) = (t1.predicted[q], dk.predicted[q]) {
            assert!((a + b).norm() < 1e-12 * a.norm(), "{q}: {a} {b}");
        }
    }
}

#[test]
fn table_files_round_trip() {
    let g = lattices::skew(c(1., 0.), c(0., 1.), 6, 6).unwrap();
    let t = green_free(&g, center_vertex(&g), &KernelOptions::default()).unwrap();
    let file = t.to_file(&g);
    let back = KernelTableFile::from_json(&file.to_json()).unwrap();
    assert_eq!(back, file);
    assert_eq!(back.asymptote_rows(), t.asymptote_rows(&g));
    assert_eq!(file.entries.len(), g.num_vertices());
    assert!(file.to_json().contains("\"schema\": \"quadcalc/1\""));
}

#[test]
fn exponential_field_matches_pointwise_products() {
    let g = bruijn();
    let v0 = center_vertex(&g);
    let lambda = c(-0.3, 1.7);
    let e = DiscreteExponential::new(&g, lambda, v0).unwrap();
    for v in (0..g.num_vertices()).step_by(3) {
        let direct = discrete_exp(&g, lambda, v, v0).unwrap();
        let poles = e.poles(&g, v).unwrap();
        let along = exp_along(lambda, &poles).unwrap();
        assert!((direct - e.value(v).unwrap()).norm() <= 1e-11 * direct.norm());
        assert_eq!(direct, along);
    }
    let f: VertexField = e.field().clone();
    assert!(f.is_complete());
    let _ = Complex64::new(0.0, 0.0);
}
