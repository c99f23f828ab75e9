use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{build_quadgraph, Color, QuadGraph, VertexSpec};
use crate::error::{Error, Result};

/// On-disk graph description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<GraphFileVertex>,
    pub quads: Vec<GraphFileQuad>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFileVertex {
    pub x: f64,
    pub y: f64,
    pub color: Color,
    #[serde(default)]
    pub boundary: bool,
}

pub type GraphFileQuad = [usize; 4];

impl GraphFile {
    pub fn build(&self) -> Result<QuadGraph> {
        let specs = self
            .vertices
            .iter()
            .map(|v| VertexSpec { position: Complex64::new(v.x, v.y), color: v.color, boundary: v.boundary })
            .collect();
        build_quadgraph(specs, self.quads.clone())
    }
}

impl QuadGraph {
    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            vertices: (0..self.num_vertices())
                .map(|v| GraphFileVertex {
                    x: self.pos[v].re,
                    y: self.pos[v].im,
                    color: self.color[v],
                    boundary: self.boundary[v],
                })
                .collect(),
            quads: self.quads.clone(),
        }
    }

    pub fn from_json(text: &str) -> Result<QuadGraph> {
        let file: GraphFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.build()
    }

    pub fn to_json(&self) -> String {
        crate::json::to_string(&self.to_file())
    }
}
