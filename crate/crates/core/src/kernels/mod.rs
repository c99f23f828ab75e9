//! Discrete exponentials, the free Green's function and the Cauchy kernels
//! of parallelogram-graphs, their asymptotic reference values, and the
//! Cauchy integral formulae built on them.
//!
//! Green's function and `K_{Q0}` come from loop integrals around the poles
//! of a discrete exponential. Each loop integral is collapsed onto the cut
//! ray of the logarithm and evaluated by adaptive Gauss–Kronrod quadrature,
//! which treats simple and repeated poles alike.

mod cauchy;
mod exponential;
mod green;
mod path_sums;
pub mod quadrature;
mod rays;
mod skew;
mod table;

#[cfg(test)]
mod tests;

pub use cauchy::{cauchy_integral, cauchy_kernel_face, cauchy_kernel_face_derivative, cauchy_kernel_vertex, contour_product};
pub use exponential::{
    discrete_exp, discrete_exp_face, edge_ratio, exp_along, exp_face, exp_vertex, DiscreteExponential,
};
pub use green::{green_asymptote, green_free, EULER_GAMMA};
pub use path_sums::{inverse_edge_sum, path_sums, JPotential, PathSums};
pub use skew::{iterate_derivative, skew_higher_derivative, skew_kernel_table, HigherDerivative, SkewFrame};
pub use table::{
    binned_decay, AsymptoteRow, DecayBin, DecayReport, KernelDiagnostics, KernelEntry, KernelKind, KernelTable,
    KernelTableFile, DECAY_BINS,
};

use quadrature::QuadratureOptions;

use crate::quadgraph::{QuadGraph, Site};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KernelOptions {
    pub quadrature: QuadratureOptions,
    /// Only sites within this distance of the base point are evaluated.
    pub radius: Option<f64>,
}

impl KernelOptions {
    pub fn with_radius(radius: f64) -> Self {
        Self { radius: Some(radius), ..Default::default() }
    }

    fn contains(&self, g: &QuadGraph, site: Site, base: Site) -> bool {
        self.radius.is_none_or(|r| (g.site_position(site) - g.site_position(base)).norm() <= r)
    }

    fn widened(&self, by: f64) -> Self {
        Self { radius: self.radius.map(|r| r + by), ..*self }
    }
}
