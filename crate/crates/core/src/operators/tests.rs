use super::*;
use crate::lattices::{self, Fixture};
use crate::quadgraph::{build_quadgraph, VertexSpec};
use crate::testutil::*;

fn skew() -> QuadGraph {
    lattices::skew(c(1.0, 0.1), c(0.3, 0.9), 6, 5).unwrap()
}

fn perturbed() -> QuadGraph {
    lattices::perturbed_square(6, 6, 0.2, 11).unwrap()
}

fn unit_square() -> QuadGraph {
    let v = |x, y, col| VertexSpec::new(c(x, y), col);
    build_quadgraph(
        vec![v(0., 0., Color::Black), v(1., 0., Color::White), v(1., 1., Color::Black), v(0., 1., Color::White)],
        vec![[0, 1, 2, 3]],
    )
    .unwrap()
}

#[test]
fn identity_has_unit_derivative() {
    for g in [skew(), perturbed()] {
        let (d, db) = d_lambda(&g, &vertex_fn(&g, |z| z)).unwrap();
        assert!(d.max_abs_diff(&FaceField::constant(g.num_quads(), c(1., 0.))) < 1e-14);
        assert!(db.max_abs() < 1e-14);
    }
}

#[test]
fn quadratic_derivatives_on_parallelograms() {
    let g = skew();
    let (d, db) = d_lambda(&g, &vertex_fn(&g, |z| z * z)).unwrap();
    assert!(d.max_abs_diff(&face_fn(&g, |q| 2.0 * q)) < 1e-12);
    assert!(db.max_abs() < 1e-12);
    let (d, db) = d_lambda(&g, &vertex_fn(&g, |z| c(z.norm_sqr(), 0.))).unwrap();
    assert!(db.max_abs_diff(&face_fn(&g, |q| q)) < 1e-12);
    assert!(d.max_abs_diff(&db.conj()) < 1e-12);
}

#[test]
fn lambda_and_contour_derivatives_agree() {
    let g = perturbed();
    let f = random_vertex_field(&g, &mut rng(3));
    let (a, b) = d_lambda(&g, &f).unwrap();
    let (ac, bc) = d_lambda_contour(&g, &f).unwrap();
    assert!(a.max_abs_diff(&ac) < 1e-12);
    assert!(b.max_abs_diff(&bc) < 1e-12);
}

#[test]
fn missing_values_are_reported() {
    let g = unit_square();
    let f = VertexField::from_options(vec![Some(c(1., 0.)), None, Some(c(0., 0.)), Some(c(0., 0.))]);
    assert_eq!(d_lambda(&g, &f).unwrap_err(), Error::MissingValues { what: "vertex", index: 1 });
}

#[test]
fn diamond_derivative_examples() {
    let g = skew();
    let (d, db) = d_diamond(&g, &FaceField::constant(g.num_quads(), c(2., -1.))).unwrap();
    assert!(d.max_abs() < 1e-13 && db.max_abs() < 1e-13);
    let (d, db) = d_diamond(&g, &face_fn(&g, |q| q)).unwrap();
    for v in g.interior_vertices() {
        assert!((d.at(v).unwrap() - 1.0).norm() < 1e-12);
        assert!(db.at(v).unwrap().norm() < 1e-12);
    }
    assert!(d.get(g.boundary_vertices().next().unwrap()).is_none());
    assert_eq!(d_diamond_at(&g, 0, |_| Ok(c(0., 0.))).unwrap_err(), Error::BoundaryVertex(0));
}

#[test]
fn derivative_of_harmonic_function_is_holomorphic() {
    let g = skew();
    // v^2 is holomorphic hence harmonic; its real part is harmonic as well
    let f = vertex_fn(&g, |z| c((z * z).re, 0.));
    let (d, _) = d_lambda(&g, &f).unwrap();
    let (_, db) = d_diamond(&g, &d).unwrap();
    assert!(db.max_abs() < 1e-11);
}

#[test]
fn real_nonconstant_functions_are_not_holomorphic() {
    let g = perturbed();
    let f = vertex_fn(&g, |z| c(z.re, 0.));
    let report = check_holomorphic_vertex(&g, &f).unwrap();
    assert!(report.max_abs > 0.1);
    assert!(!report.is_holomorphic(HOLOMORPHIC_TOL));
    let id = check_holomorphic_vertex(&g, &vertex_fn(&g, |z| z)).unwrap();
    assert!(id.is_holomorphic(1e-14));
}

#[test]
fn conjugate_identity_defect_matches_formula() {
    let g = perturbed();
    let report = check_holomorphic_vertex(&g, &vertex_fn(&g, |z| z.conj())).unwrap();
    for q in 0..g.num_quads() {
        let p = g.quad_positions(q);
        let expected = (p[3] - p[1]).conj() / (p[3] - p[1]) - (p[2] - p[0]).conj() / (p[2] - p[0]);
        assert!((report.residual.at(q).unwrap() - expected).norm() < 1e-14);
    }
}

#[test]
fn averaging_examples() {
    let g = skew();
    let bicon = VertexField::from_fn(g.num_vertices(), |v| {
        if g.color(v) == Color::Black {
            c(1., 2.)
        } else {
            c(-3., 0.5)
        }
    });
    assert!(average(&g, &bicon).unwrap().max_abs_diff(&FaceField::constant(g.num_quads(), c(-1., 1.25))) < 1e-15);
    let m = average(&g, &vertex_fn(&g, |z| z)).unwrap();
    assert!(m.max_abs_diff(&face_fn(&g, |q| q)) < 1e-14);
    let m = average(&g, &vertex_fn(&g, |z| z * z)).unwrap();
    assert!(check_holomorphic_face(&g, &m).unwrap().max_abs < 1e-11);
}

#[test]
fn primitive_examples() {
    let g = skew();
    let base = Basepoints::first(&g);
    let f = primitive(&g, &FaceField::constant(g.num_quads(), c(1., 0.)), &base).unwrap();
    assert!(biconstant_defect(&g, &f, &vertex_fn(&g, |z| z)) < 1e-12);
    let f = primitive(&g, &face_fn(&g, |q| q), &base).unwrap();
    assert!(biconstant_defect(&g, &f, &vertex_fn(&g, |z| z * z / 2.0)) < 1e-12);
    assert_eq!(f.at(base.black).unwrap(), c(0., 0.));
    assert!(matches!(
        primitive(&g, &face_fn(&g, |q| q.conj()), &base),
        Err(Error::NotHolomorphic { .. })
    ));
}

#[test]
fn primitive_inverts_derivative_up_to_biconstants() {
    let g = skew();
    let f = vertex_fn(&g, |z| z * z - 3.0 * z);
    let (d, _) = d_lambda(&g, &f).unwrap();
    let back = primitive(&g, &d, &Basepoints::first(&g)).unwrap();
    assert!(biconstant_defect(&g, &back, &f) < 1e-12);
}

#[test]
fn primitive_requires_a_disk() {
    let g = lattices::skew(c(1., 0.), c(0., 1.), 3, 3).unwrap();
    let ring: Vec<usize> = (0..g.num_quads()).filter(|&q| (g.center(q) - c(0.5, 0.5)).norm() > 0.1).collect();
    let (annulus, _) = g.restrict(&ring).unwrap();
    let h = FaceField::constant(annulus.num_quads(), c(1., 0.));
    assert_eq!(primitive(&annulus, &h, &Basepoints::first(&annulus)).unwrap_err(), Error::NotSimplyConnected);
}

#[test]
fn laplacian_examples() {
    for g in [skew(), perturbed()] {
        let lap = laplacian(&g, &vertex_fn(&g, |z| c(2.0 * z.re - 3.0 * z.im + 1.0, z.im))).unwrap();
        assert!(lap.max_abs() < 1e-11);
    }
    let g = skew();
    let lap = laplacian(&g, &vertex_fn(&g, |z| c(z.norm_sqr(), 0.))).unwrap();
    for v in g.interior_vertices() {
        assert!((lap.at(v).unwrap() - 4.0).norm() < 1e-10);
    }
    assert!(laplacian(&g, &vertex_fn(&g, |z| z * z)).unwrap().max_abs() < 1e-10);
}

#[test]
fn fig3_counterexample_value() {
    let g = lattices::fixture(Fixture::Fig3).unwrap();
    let value = laplacian_at(&g, &vertex_fn(&g, |z| z * z), 0).unwrap();
    // hand evaluation of the stencil: the quad towards 2+2i has ρ = 1/2 and
    // contributes 4i instead of 2i, all others cancel; ar(F_0) = 1
    assert!((value - c(0., 1.)).norm() < 1e-14);
    assert_eq!(laplacian_at(&g, &vertex_fn(&g, |z| z), 1).unwrap_err(), Error::BoundaryVertex(1));
}

#[test]
fn stencil_matches_factorizations() {
    let g = perturbed();
    let f = random_vertex_field(&g, &mut rng(8));
    let lap = laplacian(&g, &f).unwrap();
    let (a, b) = laplacian_factored(&g, &f).unwrap();
    assert!(lap.max_abs_diff(&a) < 1e-11);
    assert!(lap.max_abs_diff(&b) < 1e-11);
    let re = laplacian(&g, &f.re()).unwrap();
    assert!(re.max_abs_diff(&lap.re()) < 1e-12);
    assert!(re.defined().all(|(_, z)| z.im == 0.0));
}

#[test]
fn energy_examples() {
    let g = unit_square();
    let f = vertex_fn(&g, |z| z);
    assert!((dirichlet_energy(&g, &f).unwrap() - 2.0).abs() < 1e-15);
    assert!((dirichlet_energy_forms(&g, &f).unwrap() - 2.0).abs() < 1e-15);

    let g = perturbed();
    let bicon = VertexField::from_fn(g.num_vertices(), |v| if g.color(v) == Color::Black { c(4., 1.) } else { c(0., 0.) });
    assert!(dirichlet_energy(&g, &bicon).unwrap().abs() < 1e-12);
    let f = random_vertex_field(&g, &mut rng(2));
    let e = dirichlet_energy(&g, &f).unwrap();
    assert!(e > 0.0);
    assert!((e - dirichlet_energy_forms(&g, &f).unwrap()).abs() < 1e-10 * e);
    let split = dirichlet_energy(&g, &f.re()).unwrap() + dirichlet_energy(&g, &f.im()).unwrap();
    assert!((e - split).abs() < 1e-12 * e);
}

#[test]
fn harmonic_conjugate_examples() {
    let g = skew();
    let base = Basepoints::first(&g);
    let t = harmonic_conjugate(&g, &vertex_fn(&g, |z| c(z.re, 0.)), &base).unwrap();
    assert!(biconstant_defect(&g, &t, &vertex_fn(&g, |z| c(z.im, 0.))) < 1e-12);
    let t = harmonic_conjugate(&g, &vertex_fn(&g, |z| c((z * z).re, 0.)), &base).unwrap();
    assert!(biconstant_defect(&g, &t, &vertex_fn(&g, |z| c((z * z).im, 0.))) < 1e-11);
    let h = vertex_fn(&g, |z| c((z * z).re, 0.)).add(&t.scale(c(0., 1.)));
    assert!(check_holomorphic_vertex(&g, &h).unwrap().is_holomorphic(1e-10));
    assert!(matches!(
        harmonic_conjugate(&g, &vertex_fn(&g, |z| c(z.norm_sqr(), 0.)), &base),
        Err(Error::NotHarmonic { .. })
    ));
    assert!(matches!(harmonic_conjugate(&g, &vertex_fn(&g, |z| z), &base), Err(Error::InvalidInput(_))));
}

#[test]
fn elementary_cycle_decomposition() {
    let g = perturbed();
    let mut r = rng(5);
    let f = random_vertex_field(&g, &mut r);
    let h = random_face_field(&g, &mut r);
    let v = g.interior_vertices().next().unwrap();
    for path in [g.cycle_vertex(v).unwrap(), g.cycle_quad(7)] {
        let bw = contour_decompose(&g, &path).unwrap();
        let (w, b) = bw
            .integrate(&g, |q, apex, d| Ok(f.at(apex)? * h.at(q)? * d), |q, apex, d| Ok(f.at(apex)? * h.at(q)? * d))
            .unwrap();
        let direct: Complex64 = path
            .steps
            .iter()
            .map(|&s| f.at(g.quad(s.edge / 4)[s.edge % 4]).unwrap() * h.at(s.edge / 4).unwrap() * g.step_displacement(s))
            .sum();
        assert!((w + b - 2.0 * direct).norm() < 1e-12);
    }
    let bw = contour_decompose(&g, &g.cycle_vertex(v).unwrap()).unwrap();
    // around a vertex one of the two cycles degenerates to the vertex itself
    assert!(bw.white.is_empty() || bw.black.is_empty());
}

#[test]
fn open_paths_are_not_contours() {
    let g = perturbed();
    let mut path = g.cycle_quad(0);
    path.steps.pop();
    assert!(matches!(contour_decompose(&g, &path), Err(Error::NotContour(_))));
}
