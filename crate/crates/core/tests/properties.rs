//! Randomized invariants over generated quad-graphs.

use proptest::prelude::*;
use quadcalc::elliptic::{solve_dirichlet, DirichletProblem};
use quadcalc::kernels::DiscreteExponential;
use quadcalc::lattices;
use quadcalc::operators::{
    check_holomorphic_vertex, d_lambda, d_lambda_contour, dirichlet_energy, laplacian, laplacian_factored,
};
use quadcalc::{QuadGraph, VertexField, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn perturbed() -> impl Strategy<Value = QuadGraph> {
    (4usize..9, 4usize..9, 0.0f64..0.3, any::<u64>())
        .prop_map(|(m, n, jitter, seed)| lattices::perturbed_square(m, n, jitter, seed).unwrap())
}

fn parallelogram() -> impl Strategy<Value = QuadGraph> {
    prop_oneof![
        (0.2f64..2.9, 0.5f64..2.0, 4usize..9).prop_map(|(angle, len, m)| {
            lattices::skew(c(1.0, 0.0), C64::from_polar(len, angle), m, m + 1).unwrap()
        }),
        (any::<u64>(), 3.0f64..5.0).prop_map(|(seed, radius)| {
            lattices::de_bruijn(&[c(1.0, 0.0), c(0.3, 0.8), c(-0.6, 0.9)], radius, None, seed).unwrap()
        }),
    ]
}

fn field(g: &QuadGraph, seed: u64) -> VertexField {
    // deterministic pseudo-random values from a simple hash of the index
    VertexField::from_fn(g.num_vertices(), |v| {
        let h = (v as u64 ^ seed).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        let a = ((h >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0;
        let b = ((h.rotate_left(29) >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0;
        c(a, b)
    })
}

fn relative(a: f64, scale: f64) -> f64 {
    a / scale.max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn derivative_formula_matches_contour_integral(g in perturbed(), seed in any::<u64>()) {
        let f = field(&g, seed);
        let (d1, db1) = d_lambda(&g, &f).unwrap();
        let (d2, db2) = d_lambda_contour(&g, &f).unwrap();
        let scale = d1.max_abs().max(db1.max_abs());
        prop_assert!(relative(d1.max_abs_diff(&d2).max(db1.max_abs_diff(&db2)), scale) < 1e-12);
    }

    #[test]
    fn laplacian_factors_through_both_derivatives(g in perturbed(), seed in any::<u64>()) {
        let f = field(&g, seed);
        let lap = laplacian(&g, &f).unwrap();
        let (a, b) = laplacian_factored(&g, &f).unwrap();
        prop_assert!(relative(lap.max_abs_diff(&a).max(lap.max_abs_diff(&b)), lap.max_abs()) < 1e-11);
    }

    #[test]
    fn energy_is_nonnegative_and_ignores_constants(g in perturbed(), seed in any::<u64>(), shift in -5.0f64..5.0) {
        let f = field(&g, seed).re();
        let e = dirichlet_energy(&g, &f).unwrap();
        prop_assert!(e >= 0.0);
        let shifted = f.map(|z| z + shift);
        prop_assert!((dirichlet_energy(&g, &shifted).unwrap() - e).abs() < 1e-10 * e.max(1.0));
    }

    #[test]
    fn laplacian_of_real_field_is_real(g in perturbed(), seed in any::<u64>()) {
        let lap = laplacian(&g, &field(&g, seed).re()).unwrap();
        prop_assert!(lap.defined().all(|(_, z)| z.im.abs() <= 1e-14 * z.norm().max(1.0)));
    }

    #[test]
    fn harmonic_functions_obey_the_maximum_principle(g in perturbed(), seed in any::<u64>()) {
        let values = field(&g, seed);
        let boundary: Vec<Option<f64>> =
            (0..g.num_vertices()).map(|v| g.is_boundary(v).then(|| values.get(v).unwrap().re)).collect();
        let (lo, hi) = boundary.iter().flatten().fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
        let sol = solve_dirichlet(&g, &DirichletProblem::new(&g, boundary, 1e-10).unwrap()).unwrap();
        for (_, z) in sol.field.defined() {
            prop_assert!(z.re >= lo - 1e-10 && z.re <= hi + 1e-10);
        }
    }

    #[test]
    fn discrete_exponentials_are_holomorphic(g in parallelogram(), re in -1.5f64..1.5, im in -1.5f64..1.5) {
        let lambda = c(re, im);
        // λ must avoid ± every edge vector
        let clear = g.edges().iter().all(|&[a, b]| {
            let e = g.position(b) - g.position(a);
            (lambda - e).norm() > 0.05 && (lambda + e).norm() > 0.05
        });
        prop_assume!(clear);
        let v0 = g.nearest_vertex(c(0.0, 0.0));
        let exp = DiscreteExponential::new(&g, lambda, v0).unwrap();
        prop_assert!(check_holomorphic_vertex(&g, exp.field()).unwrap().relative_defect() < 1e-10);
    }

    #[test]
    fn graph_json_round_trips(g in perturbed()) {
        let text = g.to_json();
        let back = QuadGraph::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json(), text);
        prop_assert_eq!(back.num_quads(), g.num_quads());
    }
}
