//! Discrete contours: counterclockwise boundaries of medial domains made of
//! faces F_Q together with the faces F_v they enclose.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::quadgraph::{MedialPath, MedialStep, QuadGraph, Site};

const MAX_REPAIRS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    path: MedialPath,
    region: Vec<bool>,
    enclosed: Vec<bool>,
}

impl Contour {
    /// The boundary of all quads with a vertex at Λ-distance at most
    /// `radius - 1` from the center (a vertex, or the four corners of a quad).
    pub fn ring(g: &QuadGraph, center: Site, radius: usize) -> Result<Self> {
        if radius == 0 {
            return Err(Error::InvalidInput("ring radius must be positive".into()));
        }
        let sources: Vec<usize> = match center {
            Site::Vertex(v) => vec![v],
            Site::Quad(q) => g.quad(q).to_vec(),
        };
        let dist = g.bfs_distances(&sources);
        let quads: Vec<usize> = (0..g.num_quads())
            .filter(|&q| g.quad(q).iter().any(|&v| dist[v].is_some_and(|d| d < radius)))
            .collect();
        Self::from_quads(g, &quads)
    }

    /// The contour around a set of quads. Pinched or multiply connected
    /// regions are repaired by adding the quads around the offending
    /// vertices; `NotContour` is raised if that does not converge.
    pub fn from_quads(g: &QuadGraph, quads: &[usize]) -> Result<Self> {
        let mut region = vec![false; g.num_quads()];
        for &q in quads {
            *region.get_mut(q).ok_or_else(|| Error::NotContour(format!("quad {q} does not exist")))? = true;
        }
        if quads.is_empty() {
            return Err(Error::NotContour("empty region".into()));
        }
        for _ in 0..MAX_REPAIRS {
            let enclosed = enclosed_vertices(g, &region);
            match boundary_cycles(g, &region, &enclosed) {
                Ok(mut cycles) if cycles.len() == 1 => {
                    let path = MedialPath::new(cycles.pop().unwrap());
                    return Ok(Self { path, region, enclosed });
                }
                Ok(cycles) => {
                    // keep the longest cycle as the outer boundary and fill the rest
                    let outer = (0..cycles.len()).max_by_key(|&k| cycles[k].len()).unwrap();
                    let vertices: Vec<usize> = cycles
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != outer)
                        .flat_map(|(_, c)| c.iter().map(|s| g.quad(s.edge / 4)[s.edge % 4]))
                        .collect();
                    if !grow(g, &mut region, &vertices) {
                        return Err(Error::NotContour("region has holes that cannot be filled".into()));
                    }
                }
                Err(pinched) => {
                    let [a, b] = g.edges()[pinched];
                    if !grow(g, &mut region, &[a, b]) {
                        return Err(Error::NotContour(format!("region is pinched at Λ-edge {pinched}")));
                    }
                }
            }
        }
        Err(Error::NotContour("region repair did not converge".into()))
    }

    pub fn path(&self) -> &MedialPath {
        &self.path
    }

    pub fn into_path(self) -> MedialPath {
        self.path
    }

    /// Whether F_v lies inside the contour.
    pub fn encloses_vertex(&self, v: usize) -> bool {
        self.enclosed[v]
    }

    /// Whether F_Q lies inside the contour.
    pub fn encloses_quad(&self, q: usize) -> bool {
        self.region[q]
    }

    pub fn encloses(&self, site: Site) -> bool {
        match site {
            Site::Vertex(v) => self.encloses_vertex(v),
            Site::Quad(q) => self.encloses_quad(q),
        }
    }

    /// Whether some step of the contour is a medial edge inside quad `q`.
    pub fn touches_quad(&self, q: usize) -> bool {
        self.path.steps.iter().any(|s| s.edge / 4 == q)
    }

    pub fn region_quads(&self) -> impl Iterator<Item = usize> + '_ {
        self.region.iter().enumerate().filter(|(_, &r)| r).map(|(q, _)| q)
    }
}

fn enclosed_vertices(g: &QuadGraph, region: &[bool]) -> Vec<bool> {
    (0..g.num_vertices())
        .map(|v| g.star_closed(v) && g.star(v).iter().all(|&(q, _)| region[q]))
        .collect()
}

/// Adds the stars of the given vertices; returns whether anything changed.
fn grow(g: &QuadGraph, region: &mut [bool], vertices: &[usize]) -> bool {
    let mut changed = false;
    for &v in vertices {
        for &(q, _) in g.star(v) {
            changed |= !region[q];
            region[q] = true;
        }
    }
    changed
}

/// Chains the boundary steps into cycles; `Err(edge)` names a Λ-edge whose
/// midpoint is visited twice.
fn boundary_cycles(
    g: &QuadGraph,
    region: &[bool],
    enclosed: &[bool],
) -> std::result::Result<Vec<Vec<MedialStep>>, usize> {
    let mut by_start: HashMap<usize, MedialStep> = HashMap::new();
    for (q, _) in region.iter().enumerate().filter(|(_, &r)| r) {
        for c in 0..4 {
            if enclosed[g.quad(q)[c]] {
                continue;
            }
            let step = MedialStep::new(4 * q + c, true);
            let start = g.step_start(step);
            if by_start.insert(start, step).is_some() {
                return Err(start);
            }
        }
    }
    let mut starts: Vec<usize> = by_start.keys().copied().collect();
    starts.sort_unstable();
    let mut used: HashMap<usize, bool> = HashMap::new();
    let mut cycles = Vec::new();
    for s in starts {
        if used.contains_key(&s) {
            continue;
        }
        let mut cycle = Vec::new();
        let mut cur = s;
        loop {
            used.insert(cur, true);
            let step = by_start[&cur];
            cycle.push(step);
            cur = g.step_end(step);
            if cur == s {
                break;
            }
            if used.contains_key(&cur) || !by_start.contains_key(&cur) {
                return Err(cur);
            }
        }
        cycles.push(cycle);
    }
    Ok(cycles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{integrate_one, OneForm};
    use crate::lattices;
    use crate::operators::contour_decompose;
    use crate::testutil::c;

    #[test]
    fn vertex_ring_of_radius_one_is_the_star_boundary() {
        let g = lattices::skew(c(1., 0.), c(0., 1.), 6, 6).unwrap();
        let v0 = g.nearest_vertex(c(0., 0.));
        let ring = Contour::ring(&g, Site::Vertex(v0), 1).unwrap();
        assert!(ring.encloses_vertex(v0));
        assert_eq!(ring.region_quads().count(), 4);
        assert_eq!(ring.path().len(), 12);
        assert!(ring.path().is_closed(&g));
    }

    #[test]
    fn rings_are_counterclockwise_and_enclose_the_center() {
        let g = lattices::perturbed_square(12, 12, 0.2, 3).unwrap();
        let q0 = g.nearest_quad(c(0.5, 0.5));
        let dz = OneForm::dz(&g);
        for r in 1..5 {
            let ring = Contour::ring(&g, Site::Quad(q0), r).unwrap();
            assert!(ring.encloses_quad(q0));
            assert!(!ring.touches_quad(q0));
            assert!(integrate_one(&dz, ring.path()).unwrap().norm() < 1e-12);
            // counterclockwise: positive signed area of the midpoint polygon
            let pts: Vec<_> = ring.path().steps.iter().map(|&s| g.midpoint(g.step_start(s))).collect();
            let area: f64 = (0..pts.len()).map(|k| (pts[k].conj() * pts[(k + 1) % pts.len()]).im).sum();
            assert!(area > 0.0);
            contour_decompose(&g, ring.path()).unwrap();
        }
    }

    #[test]
    fn rings_reaching_the_graph_boundary_follow_it() {
        let g = lattices::skew(c(1., 0.), c(0.2, 1.), 4, 4).unwrap();
        let ring = Contour::ring(&g, Site::Vertex(g.nearest_vertex(c(0., 0.))), 10).unwrap();
        assert_eq!(ring.region_quads().count(), g.num_quads());
        let corners: usize =
            (0..g.num_quads()).map(|q| g.quad(q).iter().filter(|&&v| g.is_boundary(v)).count()).sum();
        assert_eq!(ring.path().len(), corners);
    }

    #[test]
    fn holes_are_filled() {
        let g = lattices::skew(c(1., 0.), c(0., 1.), 5, 5).unwrap();
        let v0 = g.nearest_vertex(c(0., 0.));
        let star: Vec<usize> = g.star(v0).iter().map(|&(q, _)| q).collect();
        let quads: Vec<usize> = (0..g.num_quads()).filter(|q| !star.contains(q)).collect();
        let ring = Contour::from_quads(&g, &quads).unwrap();
        assert!(ring.encloses_vertex(v0));
        assert!(matches!(Contour::from_quads(&g, &[]), Err(Error::NotContour(_))));
    }
}
