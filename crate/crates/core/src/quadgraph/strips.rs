use num_complex::Complex64;

use super::{QuadGraph, GEOMETRIC_TOL};

/// A maximal chain of quads, each left through the side opposite to the
/// one it was entered by.
#[derive(Debug, Clone, PartialEq)]
pub struct Strip {
    pub quads: Vec<usize>,
    /// Crossed Λ-edges; one more than `quads` unless the strip is closed.
    pub edges: Vec<usize>,
    /// Common edge vector a_S, oriented as the first crossed edge read from
    /// the first quad. `None` when the traversed edges are not all ±a_S.
    pub common_parallel: Option<Complex64>,
    pub closed: bool,
}

impl QuadGraph {
    /// Partition of all Λ-edges into strips, in order of first edge id.
    pub fn strips(&self) -> Vec<Strip> {
        let mut used = vec![false; self.num_edges()];
        let mut out = Vec::new();
        for e0 in 0..self.num_edges() {
            if used[e0] {
                continue;
            }
            let inc = self.edge_quads[e0].clone();
            let (fwd, closed) = self.walk(e0, inc[0]);
            let (mut quads, mut edges) = if closed || inc.len() == 1 {
                (Vec::new(), vec![e0])
            } else {
                // `back` moves away from e0; reverse it so the strip runs toward e0
                let (back, _) = self.walk(e0, inc[1]);
                let q: Vec<usize> = back.iter().rev().map(|&(q, _, _)| q).collect();
                let mut e: Vec<usize> = back.iter().rev().map(|&(_, _, exit)| exit).collect();
                e.push(e0);
                (q, e)
            };
            for &(q, _, exit) in &fwd {
                quads.push(q);
                if !(closed && exit == e0) {
                    edges.push(exit);
                }
            }
            for &e in &edges {
                used[e] = true;
            }
            let common_parallel = self.strip_parallel(&quads, &edges);
            out.push(Strip { quads, edges, common_parallel, closed });
        }
        out
    }

    /// Walk from edge `e0` into `(quad, side)`; returns `(quad, entry side,
    /// exit edge)` triples and whether the walk came back to `e0`.
    fn walk(&self, e0: usize, start: (usize, usize)) -> (Vec<(usize, usize, usize)>, bool) {
        let mut out = Vec::new();
        let (mut q, mut side) = start;
        loop {
            let exit = self.quad_edges[q][(side + 2) % 4];
            out.push((q, side, exit));
            if exit == e0 {
                return (out, true);
            }
            match self.edge_quads[exit].iter().find(|&&(o, _)| o != q) {
                Some(&(o, s)) => {
                    q = o;
                    side = s;
                }
                None => return (out, false),
            }
            if out.len() > self.num_quads() {
                return (out, false);
            }
        }
    }

    fn strip_parallel(&self, quads: &[usize], edges: &[usize]) -> Option<Complex64> {
        let vector = |e: usize| {
            let [a, b] = self.edges[e];
            self.pos[b] - self.pos[a]
        };
        let reference = match quads.first() {
            Some(&q) => {
                let side = self.quad_edges[q].iter().position(|&x| x == edges[0])?;
                let p = self.quad_positions(q);
                p[(side + 1) % 4] - p[side]
            }
            None => vector(edges[0]),
        };
        let tol = GEOMETRIC_TOL.max(1e-12) * reference.norm();
        edges
            .iter()
            .all(|&e| {
                let v = vector(e);
                (v - reference).norm() <= tol || (v + reference).norm() <= tol
            })
            .then_some(reference)
    }
}
