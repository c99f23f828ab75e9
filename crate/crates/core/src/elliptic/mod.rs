//! Dirichlet problems for the discrete Laplacian, Green's functions in a
//! bounded domain, and preimages under the first-order operators.
//!
//! The system matrix comes from the energy: for real `f`, `E(f) = fᵀ M f`
//! and `(M f)(v) = −ar(F_v) △f(v)` at interior vertices, so the interior
//! block of `M` is symmetric positive definite.

pub mod solver;

use nalgebra_sparse::{CooMatrix, CsrMatrix};
use rayon::prelude::*;
use serde::Serialize;

pub use solver::{Method, SolveDiagnostics, SolverOptions, SpdSolver, DIRECT_LIMIT, RELATIVE_RESIDUAL};

use crate::error::{Error, Result};
use crate::field::{FaceField, VertexField};
use crate::forms::Cochain;
use crate::operators::{d_diamond, d_lambda, laplacian, primitive, Basepoints};
use crate::quadgraph::QuadGraph;
use crate::Complex64;

/// Default bound on `|△f − target|` accepted after a solve.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Relative residual accepted for first-order preimages.
pub const PREIMAGE_TOL: f64 = 1e-9;

/// The symmetric 4×4 matrix of one quad's energy in corner order
/// `[b−, w−, b+, w+]`.
pub fn quad_energy_matrix(g: &QuadGraph, q: usize) -> [[f64; 4]; 4] {
    let rho = g.geometry(q).rho;
    let a = rho.norm_sqr() / (2.0 * rho.re);
    let c = 1.0 / (2.0 * rho.re);
    let s = rho.im / (2.0 * rho.re);
    let db = [-1.0, 0.0, 1.0, 0.0];
    let dw = [0.0, -1.0, 0.0, 1.0];
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = a * db[i] * db[j] + c * dw[i] * dw[j] + s * (db[i] * dw[j] + dw[i] * db[j]);
        }
    }
    m
}

/// The full `V × V` energy matrix.
pub fn energy_matrix(g: &QuadGraph) -> CsrMatrix<f64> {
    let n = g.num_vertices();
    let locals: Vec<_> = (0..g.num_quads()).into_par_iter().map(|q| (g.quad(q), quad_energy_matrix(g, q))).collect();
    let mut coo = CooMatrix::new(n, n);
    for (idx, m) in locals {
        for i in 0..4 {
            for j in 0..4 {
                coo.push(idx[i], idx[j], m[i][j]);
            }
        }
    }
    CsrMatrix::from(&coo)
}

/// The interior system `A x = b` together with its unknown ordering.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub matrix: CsrMatrix<f64>,
    pub rhs: Vec<f64>,
    /// Vertex of each unknown.
    pub interior: Vec<usize>,
}

/// The Laplacian with Dirichlet conditions on a fixed domain, factored once
/// for any number of boundary data and sources.
pub struct DirichletOperator<'g> {
    graph: &'g QuadGraph,
    interior: Vec<usize>,
    /// Rows: unknowns. Columns: all vertices, boundary ones only.
    coupling: CsrMatrix<f64>,
    ar: Vec<f64>,
    solver: SpdSolver,
}

impl<'g> DirichletOperator<'g> {
    pub fn new(g: &'g QuadGraph, method: Method) -> Result<Self> {
        let interior: Vec<usize> = g.interior_vertices().collect();
        if interior.is_empty() {
            return Err(Error::EmptyInterior);
        }
        let mut index = vec![None; g.num_vertices()];
        for (k, &v) in interior.iter().enumerate() {
            index[v] = Some(k);
        }
        let full = energy_matrix(g);
        let n = interior.len();
        let mut a = CooMatrix::new(n, n);
        let mut coupling = CooMatrix::new(n, g.num_vertices());
        for (k, &v) in interior.iter().enumerate() {
            let row = full.row(v);
            for (&u, &w) in row.col_indices().iter().zip(row.values()) {
                match index[u] {
                    Some(l) => a.push(k, l, w),
                    None => coupling.push(k, u, w),
                }
            }
        }
        let ar = interior.iter().map(|&v| g.ar_fv(v)).collect::<Result<Vec<_>>>()?;
        let solver = SpdSolver::new(CsrMatrix::from(&a), method)?;
        Ok(Self { graph: g, interior, coupling: CsrMatrix::from(&coupling), ar, solver })
    }

    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    pub fn method(&self) -> Method {
        self.solver.method()
    }

    /// The system for `△f = source` in the interior and `f = boundary` on
    /// ∂Λ₀; both slices are indexed by vertex.
    pub fn system(&self, boundary: &[f64], source: &[f64]) -> LinearSystem {
        LinearSystem { matrix: self.solver.matrix().clone(), rhs: self.rhs(boundary, source), interior: self.interior.clone() }
    }

    fn rhs(&self, boundary: &[f64], source: &[f64]) -> Vec<f64> {
        let mut coupled = vec![0.0; self.interior.len()];
        solver::mat_vec(&self.coupling, boundary, &mut coupled);
        self.interior.iter().zip(&self.ar).zip(coupled).map(|((&v, &ar), c)| -ar * source[v] - c).collect()
    }

    /// Solves for real data; returns values on all vertices.
    pub fn solve_real(
        &self,
        boundary: &[f64],
        source: &[f64],
        opts: &SolverOptions,
    ) -> Result<(Vec<f64>, SolveDiagnostics)> {
        let (mut x, diag) = self.solver.solve(&[self.rhs(boundary, source)], opts)?;
        Ok((self.scatter(boundary, &x.pop().expect("one right-hand side")), diag))
    }

    /// Solves for complex data as two real systems. `boundary` must be
    /// defined on ∂Λ₀; undefined sources count as zero.
    pub fn solve(
        &self,
        boundary: &VertexField,
        source: &VertexField,
        opts: &SolverOptions,
    ) -> Result<(VertexField, SolveDiagnostics)> {
        let g = self.graph;
        let mut bre = vec![0.0; g.num_vertices()];
        let mut bim = vec![0.0; g.num_vertices()];
        for v in g.boundary_vertices() {
            let z = boundary.get(v).ok_or(Error::MissingBoundaryData(v))?;
            bre[v] = z.re;
            bim[v] = z.im;
        }
        let sre: Vec<f64> = (0..g.num_vertices()).map(|v| source.get(v).map_or(0.0, |z| z.re)).collect();
        let sim: Vec<f64> = (0..g.num_vertices()).map(|v| source.get(v).map_or(0.0, |z| z.im)).collect();
        let (x, diag) = self.solver.solve(&[self.rhs(&bre, &sre), self.rhs(&bim, &sim)], opts)?;
        let re = self.scatter(&bre, &x[0]);
        let im = self.scatter(&bim, &x[1]);
        let values = re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect();
        Ok((VertexField::from_values(values), diag))
    }

    fn scatter(&self, boundary: &[f64], x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.graph.num_vertices()];
        for v in self.graph.boundary_vertices() {
            out[v] = boundary[v];
        }
        for (&v, &xv) in self.interior.iter().zip(x) {
            out[v] = xv;
        }
        out
    }
}

/// `max |△f − source|` over interior vertices.
pub fn laplacian_residual(g: &QuadGraph, f: &VertexField, source: &VertexField) -> Result<f64> {
    let lap = laplacian(g, f)?;
    Ok(g.interior_vertices()
        .map(|v| (lap.get(v).unwrap_or_default() - source.get(v).unwrap_or_default()).norm())
        .fold(0.0, f64::max))
}

/// Real boundary values on ∂Λ₀ and the accepted Laplacian residual.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirichletProblem {
    pub boundary: Vec<Option<f64>>,
    pub tolerance: f64,
}

impl DirichletProblem {
    pub fn new(g: &QuadGraph, boundary: Vec<Option<f64>>, tolerance: f64) -> Result<Self> {
        if boundary.len() != g.num_vertices() {
            return Err(Error::InvalidInput(format!(
                "boundary data has {} entries for {} vertices",
                boundary.len(),
                g.num_vertices()
            )));
        }
        if let Some(v) = g.boundary_vertices().find(|&v| boundary[v].is_none()) {
            return Err(Error::MissingBoundaryData(v));
        }
        if g.interior_vertices().next().is_none() {
            return Err(Error::EmptyInterior);
        }
        if !(tolerance > 0.0) {
            return Err(Error::InvalidInput("tolerance must be positive".into()));
        }
        Ok(Self { boundary, tolerance })
    }

    /// Boundary data sampled from a function of position.
    pub fn from_fn(g: &QuadGraph, f: impl Fn(Complex64) -> f64, tolerance: f64) -> Result<Self> {
        let data = (0..g.num_vertices()).map(|v| g.is_boundary(v).then(|| f(g.position(v)))).collect();
        Self::new(g, data, tolerance)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirichletSolution {
    #[serde(skip)]
    pub field: VertexField,
    pub diagnostics: SolveDiagnostics,
    pub laplacian_residual: f64,
}

pub fn solve_dirichlet(g: &QuadGraph, p: &DirichletProblem) -> Result<DirichletSolution> {
    solve_dirichlet_with(g, p, &SolverOptions::default())
}

/// As [`solve_dirichlet`], with control over the method and starting point.
pub fn solve_dirichlet_with(g: &QuadGraph, p: &DirichletProblem, opts: &SolverOptions) -> Result<DirichletSolution> {
    let op = DirichletOperator::new(g, opts.method)?;
    let boundary: Vec<f64> = p.boundary.iter().map(|b| b.unwrap_or(0.0)).collect();
    let (values, diagnostics) = op.solve_real(&boundary, &vec![0.0; g.num_vertices()], opts)?;
    let field = VertexField::from_real(&values);
    let residual = laplacian_residual(g, &field, &VertexField::undefined(g.num_vertices()))?;
    if residual > p.tolerance {
        return Err(Error::SolverDivergence { residual, iterations: diagnostics.iterations });
    }
    Ok(DirichletSolution { field, diagnostics, laplacian_residual: residual })
}

/// The Green's function of Λ₀: zero on ∂Λ₀ with
/// `△G = δ_{v v0} / (4 ar(F_{v0}))` at interior vertices.
pub fn green_in_domain(g: &QuadGraph, v0: usize) -> Result<VertexField> {
    if v0 >= g.num_vertices() {
        return Err(Error::InvalidInput(format!("vertex {v0} does not exist")));
    }
    if g.is_boundary(v0) {
        return Err(Error::BoundaryVertexRequested(v0));
    }
    let op = DirichletOperator::new(g, Method::Auto)?;
    let mut source = vec![0.0; g.num_vertices()];
    source[v0] = 1.0 / (4.0 * g.ar_fv(v0)?);
    let (values, diag) = op.solve_real(&vec![0.0; g.num_vertices()], &source, &SolverOptions::default())?;
    let field = VertexField::from_real(&values);
    let residual = laplacian_residual(g, &field, &VertexField::from_real(&source))?;
    if residual > DEFAULT_TOL * source[v0] {
        return Err(Error::SolverDivergence { residual, iterations: diag.iterations });
    }
    Ok(field)
}

/// The operators whose preimages [`solve_preimage`] computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PreimageOperator {
    DLambda,
    DbarLambda,
    DDiamond,
    DbarDiamond,
    Laplacian,
}

fn require_disk(g: &QuadGraph) -> Result<()> {
    if g.is_disk() {
        Ok(())
    } else {
        Err(Error::NotDiskLike)
    }
}

/// `u` with `u = 0` on ∂Λ₀ and `△u = t` inside.
fn poisson(g: &QuadGraph, t: &VertexField) -> Result<VertexField> {
    let op = DirichletOperator::new(g, Method::Auto)?;
    let zero = VertexField::constant(g.num_vertices(), Complex64::new(0.0, 0.0));
    Ok(op.solve(&zero, t, &SolverOptions::default())?.0)
}

fn interior_target(g: &QuadGraph, t: &VertexField) -> Result<VertexField> {
    if t.len() != g.num_vertices() {
        return Err(Error::InvalidInput("target has the wrong length".into()));
    }
    let mut out = VertexField::undefined(g.num_vertices());
    for v in g.interior_vertices() {
        out.set(v, Some(t.at(v)?));
    }
    Ok(out)
}

fn check_residual<D: crate::field::Domain>(
    image: &crate::field::Field<D>,
    target: &crate::field::Field<D>,
    sites: impl Iterator<Item = usize>,
) -> Result<()> {
    let (mut defect, mut scale) = (0.0f64, 1.0f64);
    for k in sites {
        let (a, b) = (image.at(k)?, target.at(k)?);
        defect = defect.max((a - b).norm());
        scale = scale.max(b.norm());
    }
    if defect > PREIMAGE_TOL * scale {
        return Err(Error::InconsistentTarget(defect / scale));
    }
    Ok(())
}

/// `f` with `∂_Λ f = h`: solve `△F = 4 ∂̄_◊ h`, then integrate the
/// holomorphic remainder `h − ∂_Λ F`.
pub fn preimage_d_lambda(g: &QuadGraph, h: &FaceField) -> Result<VertexField> {
    require_disk(g)?;
    let (_, dbar) = d_diamond(g, h)?;
    let big_f = poisson(g, &dbar.scale(Complex64::new(4.0, 0.0)))?;
    let (d_f, _) = d_lambda(g, &big_f)?;
    let rest = h.sub(&d_f);
    let f = big_f.add(&primitive(g, &rest, &Basepoints::first(g))?);
    check_residual(&d_lambda(g, &f)?.0, h, 0..g.num_quads())?;
    Ok(f)
}

/// `f` with `∂̄_Λ f = h`, using `∂̄_Λ f = conj(∂_Λ f̄)`.
pub fn preimage_dbar_lambda(g: &QuadGraph, h: &FaceField) -> Result<VertexField> {
    Ok(preimage_d_lambda(g, &h.conj())?.conj())
}

/// `h` with `∂_◊ h = t` at interior vertices, as `h = ∂̄_Λ u` for `△u = 4t`.
pub fn preimage_d_diamond(g: &QuadGraph, t: &VertexField) -> Result<FaceField> {
    require_disk(g)?;
    let t = interior_target(g, t)?;
    let u = poisson(g, &t.scale(Complex64::new(4.0, 0.0)))?;
    let h = d_lambda(g, &u)?.1;
    check_residual(&d_diamond(g, &h)?.0, &t, g.interior_vertices())?;
    Ok(h)
}

/// `h` with `∂̄_◊ h = t` at interior vertices, as `h = ∂_Λ u` for `△u = 4t`.
pub fn preimage_dbar_diamond(g: &QuadGraph, t: &VertexField) -> Result<FaceField> {
    require_disk(g)?;
    let t = interior_target(g, t)?;
    let u = poisson(g, &t.scale(Complex64::new(4.0, 0.0)))?;
    let h = d_lambda(g, &u)?.0;
    check_residual(&d_diamond(g, &h)?.1, &t, g.interior_vertices())?;
    Ok(h)
}

/// `u` with `△u = t` at interior vertices and `u = 0` on ∂Λ₀.
pub fn preimage_laplacian(g: &QuadGraph, t: &VertexField) -> Result<VertexField> {
    require_disk(g)?;
    let t = interior_target(g, t)?;
    let u = poisson(g, &t)?;
    check_residual(&laplacian(g, &u)?, &t, g.interior_vertices())?;
    Ok(u)
}

/// Dispatches on the operator; vertex targets for ∂_◊, ∂̄_◊ and △, face
/// targets for ∂_Λ and ∂̄_Λ.
pub fn solve_preimage(g: &QuadGraph, op: PreimageOperator, target: &Cochain) -> Result<Cochain> {
    use PreimageOperator::*;
    Ok(match (op, target) {
        (DLambda, Cochain::Face(h)) => Cochain::Vertex(preimage_d_lambda(g, h)?),
        (DbarLambda, Cochain::Face(h)) => Cochain::Vertex(preimage_dbar_lambda(g, h)?),
        (DDiamond, Cochain::Vertex(t)) => Cochain::Face(preimage_d_diamond(g, t)?),
        (DbarDiamond, Cochain::Vertex(t)) => Cochain::Face(preimage_dbar_diamond(g, t)?),
        (Laplacian, Cochain::Vertex(t)) => Cochain::Vertex(preimage_laplacian(g, t)?),
        (op, t) => return Err(Error::KindMismatch(format!("{op:?} cannot take a {} as target", t.kind_name()))),
    })
}
