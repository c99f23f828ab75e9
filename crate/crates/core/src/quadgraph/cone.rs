//! Shortest Λ-paths whose edge directions fit into a half-plane.

use std::collections::VecDeque;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::QuadGraph;
use crate::error::{Error, Result};

/// A directed edge path `vertices[0] -> ... -> vertices[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConePath {
    pub vertices: Vec<usize>,
    /// Edge vectors `vertices[j+1] - vertices[j]`.
    pub edges: Vec<Complex64>,
}

impl ConePath {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn span(&self) -> f64 {
        arg_span(&self.edges)
    }
}

/// Length of the smallest closed arc containing all arguments.
pub fn arg_span(values: &[Complex64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let mut args: Vec<f64> = values.iter().map(|z| z.arg().rem_euclid(TAU)).collect();
    args.sort_by(f64::total_cmp);
    let mut gap = args[0] + TAU - args[args.len() - 1];
    for w in args.windows(2) {
        gap = gap.max(w[1] - w[0]);
    }
    TAU - gap
}

fn arg0(z: Complex64) -> f64 {
    z.arg().rem_euclid(TAU)
}

/// Breadth-first tree from a root with the lexicographic tie-break
/// (path length, smallest maximal edge argument in `[0, 2π)`).
#[derive(Debug, Clone)]
pub struct ConeTree {
    root: usize,
    dist: Vec<Option<usize>>,
    parent: Vec<Option<usize>>,
}

impl ConeTree {
    pub fn new(g: &QuadGraph, root: usize) -> Self {
        let n = g.num_vertices();
        let dist = g.bfs_distances(&[root]);
        let mut order: Vec<usize> = (0..n).filter(|&v| dist[v].is_some()).collect();
        order.sort_by_key(|&v| (dist[v], v));
        let mut best = vec![f64::INFINITY; n];
        let mut parent = vec![None; n];
        best[root] = f64::NEG_INFINITY;
        for &v in &order {
            if v == root {
                continue;
            }
            let dv = dist[v].unwrap();
            for &u in g.neighbors(v) {
                if dist[u] != Some(dv - 1) {
                    continue;
                }
                let cand = best[u].max(arg0(g.position(v) - g.position(u)));
                if cand < best[v] {
                    best[v] = cand;
                    parent[v] = Some(u);
                }
            }
        }
        Self { root, dist, parent }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn distance(&self, v: usize) -> Option<usize> {
        self.dist[v]
    }

    /// The tree path to `v`; falls back to a half-plane restricted search
    /// if the tree path spans π or more.
    pub fn path_to(&self, g: &QuadGraph, v: usize) -> Result<ConePath> {
        if self.dist[v].is_none() {
            return Err(Error::Unreachable { from: self.root, to: v });
        }
        let mut vertices = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            vertices.push(p);
            cur = p;
        }
        vertices.reverse();
        let path = make_path(g, vertices);
        if path.span() < PI - 1e-12 {
            return Ok(path);
        }
        restricted_search(g, self.root, v).ok_or(Error::NoConePath { from: self.root, to: v })
    }
}

fn make_path(g: &QuadGraph, vertices: Vec<usize>) -> ConePath {
    let edges = vertices.windows(2).map(|w| g.position(w[1]) - g.position(w[0])).collect();
    ConePath { vertices, edges }
}

/// Shortest path using only edges with argument in `[θ, θ + π - ε)` for
/// some θ taken from the edge directions of the graph.
fn restricted_search(g: &QuadGraph, from: usize, to: usize) -> Option<ConePath> {
    let mut thetas: Vec<f64> = Vec::new();
    for &[a, b] in g.edges() {
        let d = g.position(b) - g.position(a);
        thetas.push(arg0(d));
        thetas.push(arg0(-d));
    }
    thetas.sort_by(f64::total_cmp);
    thetas.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let mut best: Option<ConePath> = None;
    for &theta in &thetas {
        let allowed = |d: Complex64| {
            let rel = (arg0(d) - theta).rem_euclid(TAU);
            !(PI - 1e-9..=TAU - 1e-12).contains(&rel)
        };
        let mut parent = vec![usize::MAX; g.num_vertices()];
        parent[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for &w in g.neighbors(u) {
                if parent[w] == usize::MAX && allowed(g.position(w) - g.position(u)) {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if parent[to] == usize::MAX {
            continue;
        }
        let mut vertices = vec![to];
        let mut cur = to;
        while cur != from {
            cur = parent[cur];
            vertices.push(cur);
        }
        vertices.reverse();
        let path = make_path(g, vertices);
        if path.span() < PI && best.as_ref().is_none_or(|b| path.len() < b.len()) {
            best = Some(path);
        }
    }
    best
}

impl QuadGraph {
    /// Shortest path `v0 -> v` whose edge arguments span less than π.
    pub fn cone_path(&self, v0: usize, v: usize) -> Result<ConePath> {
        self.require_parallelogram()?;
        ConeTree::new(self, v0).path_to(self, v)
    }
}
