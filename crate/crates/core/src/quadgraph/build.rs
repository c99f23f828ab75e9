use std::collections::{HashMap, HashSet};

use num_complex::Complex64;

use super::{Color, QuadGeometry, QuadGraph, GEOMETRIC_TOL};
use crate::error::{Error, Result};

/// Input description of a vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexSpec {
    pub position: Complex64,
    pub color: Color,
    /// Force the vertex onto ∂Λ₀ even if its star is closed.
    pub boundary: bool,
}

impl VertexSpec {
    pub fn new(position: Complex64, color: Color) -> Self {
        Self { position, color, boundary: false }
    }
}

/// Validate a quad list and derive all combinatorial and geometric data.
///
/// Quads may start at any vertex and may be listed clockwise; they are
/// rotated to start at a black vertex and reoriented counterclockwise.
pub fn build_quadgraph(vertices: Vec<VertexSpec>, quads: Vec<[usize; 4]>) -> Result<QuadGraph> {
    let n = vertices.len();
    if quads.is_empty() {
        return Err(Error::InvalidInput("graph has no quads".into()));
    }
    let pos: Vec<Complex64> = vertices.iter().map(|v| v.position).collect();
    let color: Vec<Color> = vertices.iter().map(|v| v.color).collect();
    if pos.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidInput("non-finite vertex coordinate".into()));
    }

    let mut normalized = Vec::with_capacity(quads.len());
    for (qi, q) in quads.iter().enumerate() {
        if q.iter().any(|&v| v >= n) {
            return Err(Error::InvalidInput(format!("quad {qi} references a missing vertex")));
        }
        let distinct: HashSet<usize> = q.iter().copied().collect();
        if distinct.len() != 4 {
            return Err(Error::InvalidInput(format!("quad {qi} repeats a vertex")));
        }
        let mut q = *q;
        if color[q[0]] == Color::White {
            q.rotate_left(1);
        }
        let expected = [Color::Black, Color::White, Color::Black, Color::White];
        if (0..4).any(|c| color[q[c]] != expected[c]) {
            return Err(Error::NonBipartite { quad: qi });
        }
        let d_b = pos[q[2]] - pos[q[0]];
        let d_w = pos[q[3]] - pos[q[1]];
        let cross = (d_b.conj() * d_w).im;
        if d_b.norm() == 0.0 || d_w.norm() == 0.0 || cross.abs() <= GEOMETRIC_TOL * d_b.norm() * d_w.norm() {
            return Err(Error::DegenerateQuad(qi));
        }
        if cross < 0.0 {
            q = [q[0], q[3], q[2], q[1]];
        }
        normalized.push(q);
    }
    let quads = normalized;

    // Λ-edges with their incidences; a directed side may occur only once.
    let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
    let mut edge_index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut edges: Vec<[usize; 2]> = Vec::new();
    let mut edge_quads: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut quad_edges = vec![[0usize; 4]; quads.len()];
    for (qi, q) in quads.iter().enumerate() {
        for c in 0..4 {
            let (a, b) = (q[c], q[(c + 1) % 4]);
            if let Some(&other) = directed.get(&(a, b)) {
                return Err(Error::OrientationInconsistent { quad: qi, other });
            }
            directed.insert((a, b), qi);
            let key = (a.min(b), a.max(b));
            let e = *edge_index.entry(key).or_insert_with(|| {
                edges.push([key.0, key.1]);
                edge_quads.push(Vec::new());
                edges.len() - 1
            });
            edge_quads[e].push((qi, c));
            quad_edges[qi][c] = e;
        }
    }

    // Two quads intersect in nothing, a vertex or a single edge.
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (qi, q) in quads.iter().enumerate() {
        for (c, &v) in q.iter().enumerate() {
            incident[v].push((qi, c));
        }
    }
    if let Some(v) = (0..n).find(|&v| incident[v].is_empty()) {
        return Err(Error::InvalidInput(format!("vertex {v} belongs to no quad")));
    }
    let mut shared: HashMap<(usize, usize), usize> = HashMap::new();
    for inc in &incident {
        for i in 0..inc.len() {
            for j in i + 1..inc.len() {
                let (a, b) = (inc[i].0.min(inc[j].0), inc[i].0.max(inc[j].0));
                *shared.entry((a, b)).or_default() += 1;
            }
        }
    }
    for (&(a, b), &count) in &shared {
        if count >= 2 {
            let common = quad_edges[a].iter().filter(|e| quad_edges[b].contains(e)).count();
            if count > 2 || common != 1 {
                return Err(Error::StrongRegularityViolated(format!(
                    "quads {a} and {b} share {count} vertices but {common} edges"
                )));
            }
        }
    }

    check_color_class_connected(&quads, &color, Color::Black)?;
    check_color_class_connected(&quads, &color, Color::White)?;

    // Vertex stars in counterclockwise order.
    let mut stars = Vec::with_capacity(n);
    let mut star_closed = Vec::with_capacity(n);
    for (v, inc) in incident.iter().enumerate() {
        let (star, closed) = order_star(&quads, v, inc)?;
        stars.push(star);
        star_closed.push(closed);
    }

    let flagged: Vec<bool> = vertices.iter().map(|v| v.boundary).collect();
    let boundary: Vec<bool> = (0..n).map(|v| flagged[v] || !star_closed[v]).collect();

    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &[a, b] in &edges {
        neighbors[a].push(b);
        neighbors[b].push(a);
    }
    for nb in &mut neighbors {
        nb.sort_unstable();
    }

    let geometry: Vec<QuadGeometry> = quads.iter().map(|q| quad_geometry(q.map(|v| pos[v]))).collect();
    let centers: Vec<Complex64> = quads.iter().map(|q| q.iter().map(|&v| pos[v]).sum::<Complex64>() / 4.0).collect();

    let mut ar_v = vec![0.0; n];
    for v in 0..n {
        if boundary[v] {
            continue;
        }
        let mut area = 0.0;
        for &(q, c) in &stars[v] {
            let qq = quads[q];
            let prev = pos[qq[(c + 1) % 4]] - pos[v];
            let next = pos[qq[(c + 3) % 4]] - pos[v];
            area += (next * prev.conj()).im;
        }
        ar_v[v] = area / 4.0;
    }

    let mut graph = QuadGraph {
        pos,
        color,
        flagged,
        boundary,
        quads,
        edges,
        edge_index,
        edge_quads,
        quad_edges,
        stars,
        star_closed,
        neighbors,
        geometry,
        ar_v,
        centers,
        parallelogram: false,
    };
    graph.parallelogram = (0..graph.num_quads()).all(|q| graph.is_parallelogram(q));
    Ok(graph)
}

pub(crate) fn quad_geometry(p: [Complex64; 4]) -> QuadGeometry {
    let d_b = p[2] - p[0];
    let d_w = p[3] - p[1];
    let i = Complex64::i();
    let rho = -i * d_w / d_b;
    let phi = (d_w * d_b.conj()).arg();
    let lambda = Complex64::from_polar(1.0, -(phi - std::f64::consts::FRAC_PI_2)) / (2.0 * phi.sin());
    let ar = 0.5 * d_b.norm() * d_w.norm() * phi.sin();
    QuadGeometry { rho, phi, lambda, ar }
}

/// Sort the quads around `v` counterclockwise. Quad `(q, c)` covers the
/// angle from `p_{c+1}` to `p_{c+3}`; its successor starts where it ends.
fn order_star(quads: &[[usize; 4]], v: usize, inc: &[(usize, usize)]) -> Result<(Vec<(usize, usize)>, bool)> {
    let start_of: HashMap<usize, usize> =
        inc.iter().enumerate().map(|(i, &(q, c))| (quads[q][(c + 1) % 4], i)).collect();
    let end_of: HashSet<usize> = inc.iter().map(|&(q, c)| quads[q][(c + 3) % 4]).collect();
    let fan_starts: Vec<usize> =
        (0..inc.len()).filter(|&i| !end_of.contains(&quads[inc[i].0][(inc[i].1 + 1) % 4])).collect();
    let bad = || Error::StrongRegularityViolated(format!("neighbourhood of vertex {v} is not a disk"));
    let (first, closed) = match fan_starts.len() {
        0 => (0, true),
        1 => (fan_starts[0], false),
        _ => return Err(bad()),
    };
    let mut order = Vec::with_capacity(inc.len());
    let mut seen = vec![false; inc.len()];
    let mut cur = first;
    loop {
        if seen[cur] {
            break;
        }
        seen[cur] = true;
        order.push(inc[cur]);
        let (q, c) = inc[cur];
        match start_of.get(&quads[q][(c + 3) % 4]) {
            Some(&next) => cur = next,
            None => break,
        }
    }
    if order.len() != inc.len() {
        return Err(bad());
    }
    Ok((order, closed))
}

fn check_color_class_connected(quads: &[[usize; 4]], color: &[Color], which: Color) -> Result<()> {
    let n = color.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for q in quads {
        let (a, b) = match which {
            Color::Black => (q[0], q[2]),
            Color::White => (q[1], q[3]),
        };
        adj[a].push(b);
        adj[b].push(a);
    }
    let members: Vec<usize> = (0..n).filter(|&v| color[v] == which).collect();
    let Some(&start) = members.first() else {
        return Err(Error::DisconnectedColorClass(which));
    };
    let mut seen = vec![false; n];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    if members.iter().all(|&v| seen[v]) {
        Ok(())
    } else {
        Err(Error::DisconnectedColorClass(which))
    }
}
