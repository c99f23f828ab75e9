//! Helpers shared by the unit tests.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{FaceField, VertexField};
use crate::quadgraph::{Color, QuadGraph};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_c(r: &mut impl Rng) -> Complex64 {
    c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

pub fn random_vertex_field(g: &QuadGraph, r: &mut impl Rng) -> VertexField {
    VertexField::from_fn(g.num_vertices(), |_| random_c(r))
}

pub fn random_face_field(g: &QuadGraph, r: &mut impl Rng) -> FaceField {
    FaceField::from_fn(g.num_quads(), |_| random_c(r))
}

/// A random field vanishing on the boundary.
pub fn random_compact_field(g: &QuadGraph, r: &mut impl Rng) -> VertexField {
    VertexField::from_fn(g.num_vertices(), |v| if g.is_boundary(v) { c(0., 0.) } else { random_c(r) })
}

pub fn vertex_fn(g: &QuadGraph, f: impl Fn(Complex64) -> Complex64) -> VertexField {
    VertexField::from_fn(g.num_vertices(), |v| f(g.position(v)))
}

pub fn face_fn(g: &QuadGraph, f: impl Fn(Complex64) -> Complex64) -> FaceField {
    FaceField::from_fn(g.num_quads(), |q| f(g.center(q)))
}

/// Largest deviation of `a - b` from a biconstant.
pub fn biconstant_defect(g: &QuadGraph, a: &VertexField, b: &VertexField) -> f64 {
    let diff = a.sub(b);
    let mut worst: f64 = 0.0;
    for color in [Color::Black, Color::White] {
        let vals: Vec<Complex64> =
            (0..g.num_vertices()).filter(|&v| g.color(v) == color).filter_map(|v| diff.get(v)).collect();
        if let Some(&first) = vals.first() {
            worst = worst.max(vals.iter().map(|z| (z - first).norm()).fold(0.0, f64::max));
        }
    }
    worst
}
