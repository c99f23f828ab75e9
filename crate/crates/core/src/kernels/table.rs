use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FaceField, VertexField};
use crate::quadgraph::{QuadGraph, Site};

/// Annuli of the decay checks.
pub const DECAY_BINS: [f64; 4] = [10.0, 20.0, 30.0, 40.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum KernelKind {
    /// `G(·; v0)` on V(Λ).
    GreenFree,
    /// `K_{v0}` on V(◊).
    CauchyVertex,
    /// `K_{Q0}` on V(Λ).
    CauchyFace,
    /// `∂_Λ K_{Q0}` on V(◊).
    CauchyFaceDerivative,
    /// `(−1)ⁿ/n! · ∂ⁿ K_{Q0}` on a skew lattice.
    SkewDerivative(usize),
}

impl KernelKind {
    pub fn on_vertices(self) -> bool {
        match self {
            KernelKind::GreenFree | KernelKind::CauchyFace => true,
            KernelKind::CauchyVertex | KernelKind::CauchyFaceDerivative => false,
            KernelKind::SkewDerivative(n) => n % 2 == 0,
        }
    }

    /// Power `p` with asymptote defect `O(r⁻ᵖ)`.
    pub fn decay_power(self) -> i32 {
        match self {
            KernelKind::GreenFree | KernelKind::CauchyVertex => 2,
            KernelKind::CauchyFace | KernelKind::CauchyFaceDerivative => 3,
            KernelKind::SkewDerivative(n) => n as i32 + 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct KernelDiagnostics {
    /// Number of sites with a value.
    pub evaluated: usize,
    /// Largest defining-equation residual away from the base point.
    pub residual: f64,
    /// Where that residual could be evaluated.
    pub residual_sites: usize,
    /// Defining expression at the base point, in units of its target
    /// (`△G·ar` for Green's function, `∂̄K·ar/π` for kernels).
    pub normalization: Option<f64>,
    pub expected_normalization: f64,
    /// Factor applied to the raw construction.
    pub scale_factor: f64,
    pub max_pole_multiplicity: usize,
    pub max_quadrature_intervals: usize,
    pub quadrature_evaluations: usize,
}

/// Values of a Green's function or Cauchy kernel together with their
/// predicted asymptotes.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelTable {
    pub kind: KernelKind,
    pub base: Site,
    pub values: Vec<Option<Complex64>>,
    pub predicted: Vec<Option<Complex64>>,
    pub diagnostics: KernelDiagnostics,
}

impl KernelTable {
    pub fn site(&self, i: usize) -> Site {
        if self.kind.on_vertices() {
            Site::Vertex(i)
        } else {
            Site::Quad(i)
        }
    }

    pub fn value(&self, i: usize) -> Result<Complex64> {
        self.values.get(i).copied().flatten().ok_or(Error::MissingValues {
            what: if self.kind.on_vertices() { "vertex" } else { "quad" },
            index: i,
        })
    }

    pub fn vertex_field(&self) -> Result<VertexField> {
        if !self.kind.on_vertices() {
            return Err(Error::KindMismatch(format!("{:?} lives on quads", self.kind)));
        }
        Ok(VertexField::from_options(self.values.clone()))
    }

    pub fn face_field(&self) -> Result<FaceField> {
        if self.kind.on_vertices() {
            return Err(Error::KindMismatch(format!("{:?} lives on vertices", self.kind)));
        }
        Ok(FaceField::from_options(self.values.clone()))
    }

    pub fn to_file(&self, g: &QuadGraph) -> KernelTableFile {
        let entries = self
            .values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| {
                v.map(|value| KernelEntry {
                    id: i,
                    position: g.site_position(self.site(i)),
                    value,
                    predicted: self.predicted[i],
                })
            })
            .collect();
        KernelTableFile {
            schema: crate::json::SCHEMA.to_string(),
            kind: self.kind,
            base: self.base,
            base_position: g.site_position(self.base),
            diagnostics: self.diagnostics.clone(),
            entries,
        }
    }

    pub fn asymptote_rows(&self, g: &QuadGraph) -> Vec<AsymptoteRow> {
        self.to_file(g).asymptote_rows()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelEntry {
    pub id: usize,
    pub position: Complex64,
    pub value: Complex64,
    pub predicted: Option<Complex64>,
}

/// The persisted form of a [`KernelTable`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct KernelTableFile {
    pub schema: String,
    pub kind: KernelKind,
    pub base: Site,
    pub base_position: Complex64,
    pub diagnostics: KernelDiagnostics,
    pub entries: Vec<KernelEntry>,
}

impl KernelTableFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        crate::json::to_string(self)
    }

    /// `(distance, defect, defect·rᵖ)` for every entry with a prediction,
    /// sorted by distance.
    pub fn asymptote_rows(&self) -> Vec<AsymptoteRow> {
        let p = self.kind.decay_power();
        let mut rows: Vec<AsymptoteRow> = self
            .entries
            .iter()
            .filter_map(|e| {
                let predicted = e.predicted?;
                let distance = (e.position - self.base_position).norm();
                let defect = (e.value - predicted).norm();
                Some(AsymptoteRow { id: e.id, distance, defect, scaled: defect * distance.powi(p) })
            })
            .collect();
        rows.sort_by(|a, b| a.distance.total_cmp(&b.distance).then(a.id.cmp(&b.id)));
        rows
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoteRow {
    pub id: usize,
    pub distance: f64,
    pub defect: f64,
    /// `defect · distanceᵖ`.
    pub scaled: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub max_scaled: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    pub bins: Vec<DecayBin>,
    /// Every bin is populated and the binned maxima do not increase.
    pub passed: bool,
}

/// Binned maxima of `scaled` over consecutive `[edges[k], edges[k+1])`.
pub fn binned_decay(rows: &[AsymptoteRow], edges: &[f64]) -> DecayReport {
    let bins: Vec<DecayBin> = edges
        .windows(2)
        .map(|w| {
            let inside = rows.iter().filter(|r| r.distance >= w[0] && r.distance < w[1]);
            let (count, max_scaled) = inside.fold((0, 0.0f64), |(n, m), r| (n + 1, m.max(r.scaled)));
            DecayBin { lo: w[0], hi: w[1], count, max_scaled }
        })
        .collect();
    let passed = bins.iter().all(|b| b.count > 0) && bins.windows(2).all(|w| w[1].max_scaled <= w[0].max_scaled);
    DecayReport { bins, passed }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(distance: f64, scaled: f64) -> AsymptoteRow {
        AsymptoteRow { id: 0, distance, defect: 0.0, scaled }
    }

    #[test]
    fn decay_bins() {
        let rows = [row(11.0, 3.0), row(15.0, 4.0), row(25.0, 3.5), row(35.0, 3.5)];
        let r = binned_decay(&rows, &DECAY_BINS);
        assert!(r.passed);
        assert_eq!(r.bins.iter().map(|b| b.count).collect::<Vec<_>>(), [2, 1, 1]);
        let rows = [row(11.0, 3.0), row(25.0, 3.5), row(35.0, 1.0)];
        assert!(!binned_decay(&rows, &DECAY_BINS).passed);
        assert!(!binned_decay(&rows[..2], &DECAY_BINS).passed);
    }

    #[test]
    fn kinds_know_their_domain_and_power() {
        assert!(KernelKind::GreenFree.on_vertices());
        assert!(!KernelKind::SkewDerivative(3).on_vertices());
        assert_eq!(KernelKind::SkewDerivative(2).decay_power(), 5);
        assert_eq!(serde_json::to_string(&KernelKind::CauchyFace).unwrap(), "\"cauchyFace\"");
    }
}
