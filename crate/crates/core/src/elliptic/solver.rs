//! Sparse SPD solves: Cholesky on a bandwidth-reducing ordering for small
//! systems, Jacobi-preconditioned conjugate gradients for large ones.

use std::collections::VecDeque;

use nalgebra::DMatrix;
use nalgebra_sparse::factorization::CscCholesky;
use nalgebra_sparse::{CooMatrix, CscMatrix, CsrMatrix};
use serde::Serialize;

use crate::error::{Error, Result};

/// Systems up to this many unknowns are factored directly.
pub const DIRECT_LIMIT: usize = 20_000;
/// Convergence threshold on `‖b − Ax‖ / ‖b‖`, unless rounding in `Ax`
/// alone exceeds it.
pub const RELATIVE_RESIDUAL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Auto,
    Direct,
    Iterative,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolverOptions {
    pub method: Method,
    /// Starting point for the iterative method, indexed like the unknowns.
    pub initial_guess: Option<Vec<f64>>,
    /// Iteration cap; defaults to `10 n + 100`.
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveDiagnostics {
    pub method: Method,
    pub unknowns: usize,
    pub iterations: usize,
    /// Largest relative residual over the right-hand sides.
    pub relative_residual: f64,
}

pub(crate) fn mat_vec(a: &CsrMatrix<f64>, x: &[f64], y: &mut [f64]) {
    for (yi, row) in y.iter_mut().zip(a.row_iter()) {
        *yi = row.col_indices().iter().zip(row.values()).map(|(&j, &v)| v * x[j]).sum();
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// `16 ε ‖|A| |x|‖`, the residual level reachable in floating point.
fn rounding_floor(a: &CsrMatrix<f64>, x: &[f64]) -> f64 {
    let sq: f64 = a
        .row_iter()
        .map(|row| row.col_indices().iter().zip(row.values()).map(|(&j, &v)| (v * x[j]).abs()).sum::<f64>().powi(2))
        .sum();
    16.0 * f64::EPSILON * sq.sqrt()
}

fn residual(a: &CsrMatrix<f64>, x: &[f64], b: &[f64]) -> Vec<f64> {
    let mut r = vec![0.0; b.len()];
    mat_vec(a, x, &mut r);
    r.iter_mut().zip(b).for_each(|(ri, bi)| *ri = bi - *ri);
    r
}

/// Reverse Cuthill–McKee ordering of the matrix graph: `perm[new] = old`.
fn rcm_ordering(a: &CsrMatrix<f64>) -> Vec<usize> {
    let n = a.nrows();
    let degree: Vec<usize> = (0..n).map(|i| a.row(i).nnz()).collect();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&i| (degree[i], i));
    for &root in &by_degree {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            let mut next: Vec<usize> = a.row(u).col_indices().iter().copied().filter(|&j| !seen[j]).collect();
            next.sort_by_key(|&j| (degree[j], j));
            for j in next {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    order.reverse();
    order
}

#[allow(clippy::large_enum_variant)] // one per operator, never stored in bulk
enum Factor {
    Direct { chol: CscCholesky<f64>, perm: Vec<usize> },
    Iterative { inv_diag: Vec<f64> },
}

/// A symmetric positive definite system prepared for repeated solves.
pub struct SpdSolver {
    matrix: CsrMatrix<f64>,
    factor: Factor,
    method: Method,
}

impl SpdSolver {
    pub fn new(matrix: CsrMatrix<f64>, method: Method) -> Result<Self> {
        let n = matrix.nrows();
        let method = match method {
            Method::Auto if n <= DIRECT_LIMIT => Method::Direct,
            Method::Auto => Method::Iterative,
            m => m,
        };
        let factor = if method == Method::Direct {
            let perm = rcm_ordering(&matrix);
            let mut inverse = vec![0; n];
            for (new, &old) in perm.iter().enumerate() {
                inverse[old] = new;
            }
            let mut coo = CooMatrix::new(n, n);
            for (i, row) in matrix.row_iter().enumerate() {
                for (&j, &v) in row.col_indices().iter().zip(row.values()) {
                    coo.push(inverse[i], inverse[j], v);
                }
            }
            let chol = CscCholesky::factor(&CscMatrix::from(&coo))
                .map_err(|e| Error::InvalidInput(format!("system matrix is not positive definite: {e}")))?;
            Factor::Direct { chol, perm }
        } else {
            let inv_diag = (0..n)
                .map(|i| {
                    let row = matrix.row(i);
                    let d = row.col_indices().iter().zip(row.values()).find(|(&j, _)| j == i).map_or(0.0, |(_, &v)| v);
                    if d > 0.0 {
                        1.0 / d
                    } else {
                        1.0
                    }
                })
                .collect();
            Factor::Iterative { inv_diag }
        };
        Ok(Self { matrix, factor, method })
    }

    pub fn matrix(&self) -> &CsrMatrix<f64> {
        &self.matrix
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// Solves `A x = b` for each right-hand side.
    pub fn solve(&self, rhs: &[Vec<f64>], opts: &SolverOptions) -> Result<(Vec<Vec<f64>>, SolveDiagnostics)> {
        let n = self.matrix.nrows();
        let mut diag = SolveDiagnostics { method: self.method, unknowns: n, iterations: 0, relative_residual: 0.0 };
        let mut out = Vec::with_capacity(rhs.len());
        for b in rhs {
            let (x, iterations) = match &self.factor {
                Factor::Direct { chol, perm } => (self.direct(chol, perm, b), 1),
                Factor::Iterative { inv_diag } => self.pcg(inv_diag, b, opts)?,
            };
            let scale = norm(b);
            let rel = if scale > 0.0 { norm(&residual(&self.matrix, &x, b)) / scale } else { norm(&x) };
            diag.iterations = diag.iterations.max(iterations);
            diag.relative_residual = diag.relative_residual.max(rel);
            out.push(x);
        }
        Ok((out, diag))
    }

    fn direct(&self, chol: &CscCholesky<f64>, perm: &[usize], b: &[f64]) -> Vec<f64> {
        let apply = |r: &[f64]| {
            let pb = DMatrix::from_iterator(r.len(), 1, perm.iter().map(|&old| r[old]));
            let y = chol.solve(&pb);
            let mut x = vec![0.0; r.len()];
            for (new, &old) in perm.iter().enumerate() {
                x[old] = y[new];
            }
            x
        };
        let mut x = apply(b);
        // one step of iterative refinement
        let dx = apply(&residual(&self.matrix, &x, b));
        x.iter_mut().zip(dx).for_each(|(xi, d)| *xi += d);
        x
    }

    fn pcg(&self, inv_diag: &[f64], b: &[f64], opts: &SolverOptions) -> Result<(Vec<f64>, usize)> {
        let n = b.len();
        let mut x = match &opts.initial_guess {
            Some(x0) if x0.len() == n => x0.clone(),
            Some(x0) => {
                return Err(Error::InvalidInput(format!("initial guess has length {}, expected {n}", x0.len())));
            }
            None => vec![0.0; n],
        };
        let mut r = residual(&self.matrix, &x, b);
        let reference = if norm(b) > 0.0 { norm(b) } else { norm(&r) };
        let goal = RELATIVE_RESIDUAL * reference;
        let mut target = goal.max(rounding_floor(&self.matrix, &x));
        let cap = opts.max_iterations.unwrap_or(10 * n + 100);
        let mut z: Vec<f64> = r.iter().zip(inv_diag).map(|(a, d)| a * d).collect();
        let mut p = z.clone();
        let mut rz = dot(&r, &z);
        let mut ap = vec![0.0; n];
        let mut res = norm(&r);
        for it in 0..cap {
            if res <= target {
                // confirm with the true residual before stopping
                r = residual(&self.matrix, &x, b);
                res = norm(&r);
                target = goal.max(rounding_floor(&self.matrix, &x));
                if res <= target {
                    return Ok((x, it));
                }
                // restart from the true residual
                z.iter_mut().zip(r.iter().zip(inv_diag)).for_each(|(zi, (ri, d))| *zi = ri * d);
                p.clone_from(&z);
                rz = dot(&r, &z);
            }
            mat_vec(&self.matrix, &p, &mut ap);
            let alpha = rz / dot(&p, &ap);
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            // recompute the true residual now and then to avoid drift
            if it % 50 == 49 {
                r = residual(&self.matrix, &x, b);
                target = goal.max(rounding_floor(&self.matrix, &x));
            }
            res = norm(&r);
            z.iter_mut().zip(r.iter().zip(inv_diag)).for_each(|(zi, (ri, d))| *zi = ri * d);
            let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            p.iter_mut().zip(&z).for_each(|(pi, zi)| *pi = zi + beta * *pi);
        }
        if res <= target {
            return Ok((x, cap));
        }
        Err(Error::SolverDivergence { residual: res / reference.max(f64::MIN_POSITIVE), iterations: cap })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_laplacian(n: usize) -> CsrMatrix<f64> {
        let mut coo = CooMatrix::new(n, n);
        for i in 0..n {
            coo.push(i, i, 2.0);
            if i + 1 < n {
                coo.push(i, i + 1, -1.0);
                coo.push(i + 1, i, -1.0);
            }
        }
        CsrMatrix::from(&coo)
    }

    #[test]
    fn direct_and_iterative_agree() {
        let a = path_laplacian(40);
        let b: Vec<f64> = (0..40).map(|i| (i as f64).sin()).collect();
        let (xd, dd) = SpdSolver::new(a.clone(), Method::Direct).unwrap().solve(std::slice::from_ref(&b), &Default::default()).unwrap();
        let (xi, di) = SpdSolver::new(a, Method::Iterative).unwrap().solve(&[b], &Default::default()).unwrap();
        assert!(dd.relative_residual < 1e-14);
        assert!(di.relative_residual < 1e-11 && di.iterations > 1);
        let diff = xd[0].iter().zip(&xi[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(diff < 1e-9, "{diff}");
    }

    #[test]
    fn rcm_is_a_permutation() {
        let mut p = rcm_ordering(&path_laplacian(17));
        p.sort_unstable();
        assert_eq!(p, (0..17).collect::<Vec<_>>());
    }

    #[test]
    fn iteration_cap_reports_divergence() {
        let a = path_laplacian(200);
        let b = vec![1.0; 200];
        let opts = SolverOptions { max_iterations: Some(3), ..Default::default() };
        let err = SpdSolver::new(a, Method::Iterative).unwrap().solve(&[b], &opts).unwrap_err();
        assert!(matches!(err, Error::SolverDivergence { iterations: 3, .. }));
    }

    #[test]
    fn indefinite_matrices_are_rejected() {
        let mut coo = CooMatrix::new(2, 2);
        coo.push(0, 0, 1.0);
        coo.push(1, 1, -1.0);
        assert!(SpdSolver::new(CsrMatrix::from(&coo), Method::Direct).is_err());
    }
}
