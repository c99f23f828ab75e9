//! Graph fixtures shared by the benchmarks.

use quadcalc::lattices;
use quadcalc::{QuadGraph, C64};

/// Rhombic skew lattice cut to a disk of the given radius.
pub fn rhombic_disk(radius: f64) -> QuadGraph {
    lattices::skew_disk(C64::new(1.0, 0.0), C64::from_polar(1.0, 1.1), radius).expect("valid skew disk")
}

/// Non-rhombic de Bruijn parallelogram patch.
pub fn bruijn_patch(radius: f64) -> QuadGraph {
    let dirs = [C64::new(1.0, 0.0), C64::new(0.3, 0.8), C64::new(-0.6, 0.9)];
    lattices::de_bruijn(&dirs, radius, None, 7).expect("valid de Bruijn patch")
}

pub fn skew_block(m: usize) -> QuadGraph {
    lattices::skew(C64::new(1.0, 0.0), C64::new(0.35, 0.85), m, m).expect("valid skew lattice")
}
