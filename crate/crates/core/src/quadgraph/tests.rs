use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::*;
use crate::lattices::{self, Fixture};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn v(re: f64, im: f64, color: Color) -> VertexSpec {
    VertexSpec::new(c(re, im), color)
}

use Color::{Black as B, White as W};

fn unit_square() -> QuadGraph {
    build_quadgraph(vec![v(0., 0., B), v(1., 0., W), v(1., 1., B), v(0., 1., W)], vec![[0, 1, 2, 3]]).unwrap()
}

#[test]
fn unit_square_geometry() {
    let g = unit_square();
    let geo = g.geometry(0);
    assert!((geo.rho - c(1.0, 0.0)).norm() < 1e-15);
    assert!((geo.phi - FRAC_PI_2).abs() < 1e-15);
    assert!((geo.ar - 1.0).abs() < 1e-15);
    assert!((g.face_weight(MedialFace::Quad(0)).unwrap() - 1.0).abs() < 1e-15);
    assert!((geo.lambda + geo.lambda.conj() - 1.0).norm() < 1e-15);
    assert_eq!(g.interior_vertices().count(), 0);
    assert_eq!(g.face_weight(MedialFace::Vertex(0)), Err(Error::BoundaryVertexFace(0)));
}

#[test]
fn swapped_color_is_not_bipartite() {
    let r = build_quadgraph(vec![v(0., 0., B), v(1., 0., B), v(1., 1., B), v(0., 1., W)], vec![[0, 1, 2, 3]]);
    assert_eq!(r.unwrap_err(), Error::NonBipartite { quad: 0 });
}

#[test]
fn clockwise_and_white_first_quads_are_normalized() {
    let verts = vec![v(0., 0., B), v(1., 0., W), v(1., 1., B), v(0., 1., W)];
    for quad in [[0, 3, 2, 1], [1, 2, 3, 0], [3, 2, 1, 0]] {
        let g = build_quadgraph(verts.clone(), vec![quad]).unwrap();
        assert!(g.quad(0) == [0, 1, 2, 3] || g.quad(0) == [2, 3, 0, 1]);
    }
}

#[test]
fn repeated_directed_edge_is_inconsistent() {
    let verts = vec![v(0., 0., B), v(1., 0., W), v(1., 1., B), v(0., 1., W), v(1.5, 1.0, B), v(0.5, 1.5, W)];
    let r = build_quadgraph(verts, vec![[0, 1, 2, 3], [0, 1, 4, 5]]);
    assert_eq!(r.unwrap_err(), Error::OrientationInconsistent { quad: 1, other: 0 });
}

#[test]
fn quads_sharing_two_vertices_without_an_edge_are_rejected() {
    let verts = vec![v(0., 0., B), v(1., 0., W), v(1., 1., B), v(0., 1., W), v(2.0, -1.0, W), v(-1.0, 2.0, W)];
    let r = build_quadgraph(verts, vec![[0, 1, 2, 3], [0, 4, 2, 5]]);
    assert!(matches!(r, Err(Error::StrongRegularityViolated(_))));
}

#[test]
fn quads_meeting_in_a_white_vertex_disconnect_the_black_graph() {
    let verts = vec![
        v(0., 0., B),
        v(1., 0., W),
        v(1., 1., B),
        v(0., 1., W),
        v(-1., 1., B),
        v(0., 2., B),
        v(-1., 2., W),
    ];
    let r = build_quadgraph(verts, vec![[0, 1, 2, 3], [4, 3, 5, 6]]);
    assert_eq!(r.unwrap_err(), Error::DisconnectedColorClass(Color::Black));
}

#[test]
fn fig3_graph_is_accepted() {
    let g = lattices::fixture(Fixture::Fig3).unwrap();
    assert!(g.is_interior(0));
    assert_eq!(g.boundary_vertices().count(), 8);
    assert!((g.ar_fv(0).unwrap() - 1.0).abs() < 1e-15);
    assert!(!g.is_parallelogram_graph());
}

#[test]
fn unit_lattice_vertex_face_weight() {
    let g = lattices::skew(c(1., 0.), c(0., 1.), 2, 2).unwrap();
    let v0 = g.nearest_vertex(c(0., 0.));
    assert!(g.is_interior(v0));
    // F_v is the diamond through the four edge midpoints, of area 1/2
    assert!((g.ar_fv(v0).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn vertex_face_weight_matches_independent_shoelace() {
    let g = lattices::perturbed_square(4, 4, 0.2, 5).unwrap();
    for v in g.interior_vertices() {
        let mids: Vec<Complex64> = g
            .star(v)
            .iter()
            .map(|&(q, c)| (g.position(v) + g.position(g.quad(q)[(c + 1) % 4])) / 2.0)
            .collect();
        let mut area = 0.0;
        for k in 0..mids.len() {
            let (a, b) = (mids[k], mids[(k + 1) % mids.len()]);
            area += (a.conj() * b).im / 2.0;
        }
        assert!((g.ar_fv(v).unwrap() - 2.0 * area).abs() < 1e-12);
    }
}

#[test]
fn quad_weight_matches_varignon_shoelace() {
    let g = lattices::perturbed_square(5, 5, 0.25, 2).unwrap();
    for q in 0..g.num_quads() {
        let p = g.quad_positions(q);
        let mids: Vec<Complex64> = (0..4).map(|k| (p[k] + p[(k + 1) % 4]) / 2.0).collect();
        let area: f64 = (0..4).map(|k| (mids[k].conj() * mids[(k + 1) % 4]).im / 2.0).sum();
        assert!((g.ar_fq(q) - 2.0 * area).abs() < 1e-12);
        assert!(g.geometry(q).rho.re > 0.0);
        assert!(g.geometry(q).phi > 0.0 && g.geometry(q).phi < PI);
    }
}

#[test]
fn elementary_cycles_close_up() {
    let g = lattices::perturbed_square(4, 3, 0.2, 9).unwrap();
    for face in g.medial_faces() {
        let p = g.face_boundary(face).unwrap();
        assert!(p.is_closed(&g));
        assert!(p.displacement(&g).norm() < 1e-13);
    }
    assert_eq!(g.medial_faces().len(), g.interior_vertices().count() + g.num_quads());
}

#[test]
fn medial_edge_displacement_is_half_a_diagonal() {
    let g = unit_square();
    let e = g.medial_edge(0).unwrap();
    assert_eq!(e.vertex, 0);
    // traversed around v = 0 it runs from the midpoint towards 1 to the one towards i
    assert!((g.step_displacement(MedialStep::new(0, false)) - c(-0.5, 0.5)).norm() < 1e-15);
    let from = g.midpoint(e.from);
    let to = g.midpoint(e.to);
    assert!((to - from - e.displacement).norm() < 1e-15);
    assert_eq!(g.medial_edge(4), Err(Error::EdgeNotInGraph(4)));
    assert!((g.medial_displacement(g.edge_e(0)) - c(0.5, 0.5)).norm() < 1e-15);
    assert!((g.medial_displacement(g.edge_e_star(0)) - c(-0.5, 0.5)).norm() < 1e-15);
}

#[test]
fn face_ids_roundtrip() {
    let g = lattices::skew(c(1., 0.), c(0., 1.), 3, 2).unwrap();
    for face in g.medial_faces() {
        assert_eq!(g.face_from_id(g.face_id(face)), Some(face));
    }
}

#[test]
fn strip_counts() {
    let g = lattices::skew(c(1., 0.), c(0.3, 1.), 4, 3).unwrap();
    let strips = g.strips();
    assert_eq!(strips.len(), 7);
    let mut seen = vec![0; g.num_edges()];
    for s in &strips {
        assert!(s.common_parallel.is_some());
        for &e in &s.edges {
            seen[e] += 1;
        }
    }
    assert!(seen.iter().all(|&n| n == 1));

    let one = unit_square().strips();
    assert_eq!(one.len(), 2);
    assert!(one.iter().all(|s| s.quads.len() == 1 && s.edges.len() == 2));
}

#[test]
fn de_bruijn_strip_families_cross_once() {
    let dirs: Vec<Complex64> =
        (0..3).map(|k| Complex64::from_polar(1.0, k as f64 * 2.0 * PI / 3.0 + 0.1)).collect();
    let g = lattices::de_bruijn(&dirs, 3.0, None, 1).unwrap();
    let strips = g.strips();
    let family = |s: &Strip| {
        let a = s.common_parallel.unwrap();
        dirs.iter().position(|d| (a - d).norm() < 1e-9 || (a + d).norm() < 1e-9).unwrap()
    };
    for (i, s) in strips.iter().enumerate() {
        for t in &strips[i + 1..] {
            let shared = s.quads.iter().filter(|q| t.quads.contains(q)).count();
            if family(s) == family(t) {
                assert_eq!(shared, 0);
            } else {
                assert_eq!(shared, 1);
            }
        }
    }
}

#[test]
fn cone_path_examples() {
    let g = lattices::skew(c(1., 0.), c(0., 1.), 6, 6).unwrap();
    let v0 = g.nearest_vertex(c(0., 0.));
    assert!(g.cone_path(v0, v0).unwrap().is_empty());
    let v = g.nearest_vertex(c(2., 1.));
    let path = g.cone_path(v0, v).unwrap();
    let mut edges: Vec<(i64, i64)> = path.edges.iter().map(|z| (z.re.round() as i64, z.im.round() as i64)).collect();
    edges.sort();
    assert_eq!(edges, vec![(0, 1), (1, 0), (1, 0)]);
    assert!(path.span() <= FRAC_PI_2 + 1e-12);
}

#[test]
fn cone_path_requires_parallelograms() {
    let g = lattices::fixture(Fixture::Fig3).unwrap();
    assert!(matches!(g.cone_path(0, 5), Err(Error::NotParallelogramGraph { .. })));
}

#[test]
fn cone_paths_exist_on_de_bruijn_tilings() {
    let dirs = vec![c(1., 0.), c(0.5, 0.9), c(-0.6, 0.8)];
    let g = lattices::de_bruijn(&dirs, 3.0, None, 4).unwrap();
    let v0 = g.nearest_vertex(c(0., 0.));
    let tree = ConeTree::new(&g, v0);
    for v in 0..g.num_vertices() {
        let p = tree.path_to(&g, v).unwrap();
        assert!(p.span() < PI);
        assert_eq!(p.len(), tree.distance(v).unwrap());
    }
}

#[test]
fn arg_span_wraps_around() {
    assert!((arg_span(&[c(1., -0.1), c(1., 0.1)]) - 0.2).abs() < 1e-2);
    assert!((arg_span(&[c(1., 0.), c(-1., 0.)]) - PI).abs() < 1e-15);
    assert_eq!(arg_span(&[c(1., 0.)]), 0.0);
}

#[test]
fn json_roundtrip_and_strictness() {
    let g = lattices::perturbed_square(3, 3, 0.1, 1).unwrap();
    let text = g.to_json();
    let h = QuadGraph::from_json(&text).unwrap();
    assert_eq!(h.to_json(), text);
    let bad = r#"{"vertices":[{"x":0,"y":0,"color":"b","boundary":false,"z":1}],"quads":[]}"#;
    assert!(matches!(QuadGraph::from_json(bad), Err(Error::Parse(_))));
}

#[test]
fn disk_check_and_restriction() {
    let g = lattices::skew(c(1., 0.), c(0., 1.), 3, 3).unwrap();
    assert!(g.is_disk());
    let ring: Vec<usize> = (0..g.num_quads()).filter(|&q| (g.center(q) - c(0.5, 0.5)).norm() > 0.1).collect();
    let (annulus, _) = g.restrict(&ring).unwrap();
    assert!(!annulus.is_disk());
    let (one, map) = g.restrict(&[4]).unwrap();
    assert_eq!(one.num_quads(), 1);
    assert_eq!(map.len(), 4);
}
