//! Discrete differential forms on the medial graph.
//!
//! One-forms store one value per medial edge in its canonical orientation;
//! reading along the reverse orientation flips the sign. Two-forms store
//! one value per F_v (interior vertices) and per F_Q.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FaceField, VertexField};
use crate::operators::{d_diamond_at, quad_derivative};
use crate::quadgraph::{MedialFace, MedialPath, MedialStep, QuadGraph};

/// Relative tolerance of the type-◊ test on a quad.
pub const TYPE_DIAMOND_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum OneFormType {
    Generic,
    /// `ω = p dz + q dz̄` on the boundary of every F_Q.
    Diamond,
    /// `ω = p dz + q dz̄` on the boundary of every F_v.
    Lambda,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum TwoFormType {
    /// Vanishes on every F_Q.
    Lambda,
    /// Vanishes on every F_v.
    Diamond,
    Mixed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OneForm {
    values: Vec<Option<Complex64>>,
    kind: OneFormType,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoForm {
    vertex: Vec<Option<Complex64>>,
    quad: Vec<Option<Complex64>>,
    kind: TwoFormType,
}

impl OneForm {
    pub fn from_options(values: Vec<Option<Complex64>>, kind: OneFormType) -> Self {
        Self { values, kind }
    }

    pub fn from_fn(g: &QuadGraph, kind: OneFormType, f: impl FnMut(usize) -> Complex64) -> Self {
        Self::from_options((0..g.num_medial_edges()).map(f).map(Some).collect(), kind)
    }

    pub fn zero(g: &QuadGraph) -> Self {
        Self::from_fn(g, OneFormType::Diamond, |_| Complex64::new(0.0, 0.0))
    }

    pub fn dz(g: &QuadGraph) -> Self {
        Self::from_fn(g, OneFormType::Diamond, |e| g.medial_displacement(e))
    }

    pub fn dzbar(g: &QuadGraph) -> Self {
        Self::from_fn(g, OneFormType::Diamond, |e| g.medial_displacement(e).conj())
    }

    /// `p dz + q dz̄` with coefficients per quad.
    pub fn from_coefficients(g: &QuadGraph, p: &FaceField, q: &FaceField) -> Result<Self> {
        let mut values = Vec::with_capacity(g.num_medial_edges());
        for e in 0..g.num_medial_edges() {
            let d = g.medial_displacement(e);
            values.push(Some(p.at(e / 4)? * d + q.at(e / 4)? * d.conj()));
        }
        Ok(Self::from_options(values, OneFormType::Diamond))
    }

    pub fn kind(&self) -> OneFormType {
        self.kind
    }

    pub fn with_kind(mut self, kind: OneFormType) -> Self {
        self.kind = kind;
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn options(&self) -> &[Option<Complex64>] {
        &self.values
    }

    /// Value on a medial edge in canonical orientation.
    pub fn get(&self, edge: usize) -> Result<Complex64> {
        match self.values.get(edge) {
            None => Err(Error::EdgeNotInGraph(edge)),
            Some(None) => Err(Error::MissingValues { what: "medial edge", index: edge }),
            Some(Some(z)) => Ok(*z),
        }
    }

    pub fn along(&self, step: MedialStep) -> Result<Complex64> {
        Ok(self.get(step.edge)? * step.sign())
    }

    pub fn map(&self, mut f: impl FnMut(Complex64) -> Complex64) -> Self {
        Self::from_options(self.values.iter().map(|v| v.map(&mut f)).collect(), self.kind)
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    fn zip(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let kind = if self.kind == other.kind { self.kind } else { OneFormType::Generic };
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => Some(f(*a, *b)),
                _ => None,
            })
            .collect();
        Self::from_options(values, kind)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    /// `fω`: the value on `[Q, v]` is multiplied by `f(v)`.
    pub fn mul_vertex(&self, g: &QuadGraph, f: &VertexField) -> Self {
        let values = (0..self.len())
            .map(|e| Some(self.values[e]? * f.get(g.quad(e / 4)[e % 4])?))
            .collect();
        Self::from_options(values, OneFormType::Generic)
    }

    /// `hω`: the value on `[Q, v]` is multiplied by `h(Q)`; keeps type ◊.
    pub fn mul_face(&self, h: &FaceField) -> Self {
        let values = (0..self.len()).map(|e| Some(self.values[e]? * h.get(e / 4)?)).collect();
        let kind = if self.kind == OneFormType::Diamond { OneFormType::Diamond } else { OneFormType::Generic };
        Self::from_options(values, kind)
    }

    /// Largest relative defect `|ω(e_c) + ω(e_{c+2})|` over the quads.
    pub fn diamond_defect(&self, q: usize) -> Result<f64> {
        let v: Vec<Complex64> = (0..4).map(|c| self.get(4 * q + c)).collect::<Result<_>>()?;
        let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return Ok(0.0);
        }
        Ok(((v[0] + v[2]).norm()).max((v[1] + v[3]).norm()) / scale)
    }

    /// Checks the type-◊ condition on every quad.
    pub fn check_diamond(&self, g: &QuadGraph) -> Result<()> {
        for q in 0..g.num_quads() {
            let defect = self.diamond_defect(q)?;
            if defect > TYPE_DIAMOND_TOL {
                return Err(Error::NotTypeDiamond { quad: q, defect });
            }
        }
        Ok(())
    }

    /// Rows `edge_id,re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,re,im\n");
        for (i, z) in self.values.iter().enumerate() {
            if let Some(z) = z {
                let _ = writeln!(out, "{},{:.16e},{:.16e}", i, z.re, z.im);
            }
        }
        out
    }
}

impl TwoForm {
    pub fn new(vertex: Vec<Option<Complex64>>, quad: Vec<Option<Complex64>>, kind: TwoFormType) -> Self {
        Self { vertex, quad, kind }
    }

    pub fn zero(g: &QuadGraph) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self::new(
            (0..g.num_vertices()).map(|v| g.is_interior(v).then_some(zero)).collect(),
            vec![Some(zero); g.num_quads()],
            TwoFormType::Mixed,
        )
    }

    /// Ω_Λ: `−2i ar(F_v)` on F_v, zero on F_Q.
    pub fn omega_lambda(g: &QuadGraph) -> Self {
        let m2i = Complex64::new(0.0, -2.0);
        Self::new(
            (0..g.num_vertices()).map(|v| g.ar_fv(v).ok().map(|a| m2i * a)).collect(),
            vec![Some(Complex64::new(0.0, 0.0)); g.num_quads()],
            TwoFormType::Lambda,
        )
    }

    /// Ω_◊: `−2i ar(F_Q)` on F_Q, zero on F_v.
    pub fn omega_diamond(g: &QuadGraph) -> Self {
        let m2i = Complex64::new(0.0, -2.0);
        Self::new(
            (0..g.num_vertices()).map(|v| g.is_interior(v).then_some(Complex64::new(0.0, 0.0))).collect(),
            (0..g.num_quads()).map(|q| Some(m2i * g.ar_fq(q))).collect(),
            TwoFormType::Diamond,
        )
    }

    pub fn kind(&self) -> TwoFormType {
        self.kind
    }

    pub fn get(&self, face: MedialFace) -> Result<Complex64> {
        let slot = match face {
            MedialFace::Vertex(v) => self.vertex.get(v),
            MedialFace::Quad(q) => self.quad.get(q),
        };
        match slot {
            Some(Some(z)) => Ok(*z),
            _ => Err(Error::MissingValues { what: "medial face", index: face_index(face) }),
        }
    }

    pub fn vertex_values(&self) -> &[Option<Complex64>] {
        &self.vertex
    }

    pub fn quad_values(&self) -> &[Option<Complex64>] {
        &self.quad
    }

    pub fn map(&self, mut f: impl FnMut(Complex64) -> Complex64) -> Self {
        Self::new(
            self.vertex.iter().map(|v| v.map(&mut f)).collect(),
            self.quad.iter().map(|v| v.map(&mut f)).collect(),
            self.kind,
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    fn zip(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let pair = |a: &[Option<Complex64>], b: &[Option<Complex64>]| -> Vec<Option<Complex64>> {
            a.iter()
                .zip(b)
                .map(|(x, y)| match (x, y) {
                    (Some(x), Some(y)) => Some(f(*x, *y)),
                    _ => None,
                })
                .collect()
        };
        let kind = if self.kind == other.kind { self.kind } else { TwoFormType::Mixed };
        Self::new(pair(&self.vertex, &other.vertex), pair(&self.quad, &other.quad), kind)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    /// `fΩ` for a type-Λ two-form: `f(v)Ω` on F_v and 0 on F_Q.
    pub fn mul_vertex(&self, f: &VertexField) -> Self {
        Self::new(
            self.vertex.iter().enumerate().map(|(v, z)| Some(z.as_ref()? * f.get(v)?)).collect(),
            vec![Some(Complex64::new(0.0, 0.0)); self.quad.len()],
            TwoFormType::Lambda,
        )
    }

    /// `hΩ` for a type-◊ two-form: `h(Q)Ω` on F_Q and 0 on F_v.
    pub fn mul_face(&self, h: &FaceField) -> Self {
        Self::new(
            self.vertex.iter().map(|z| z.map(|_| Complex64::new(0.0, 0.0))).collect(),
            self.quad.iter().enumerate().map(|(q, z)| Some(z.as_ref()? * h.get(q)?)).collect(),
            TwoFormType::Diamond,
        )
    }

    /// Largest modulus over the defined faces.
    pub fn max_abs(&self) -> f64 {
        self.vertex.iter().chain(&self.quad).flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Rows `face_id,re,im` with F_v ↦ v and F_Q ↦ V + q.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,re,im\n");
        let n = self.vertex.len();
        for (i, z) in self.vertex.iter().chain(&self.quad).enumerate() {
            if let Some(z) = z {
                let _ = writeln!(out, "{},{:.16e},{:.16e}", i, z.re, z.im);
            }
        }
        debug_assert!(n <= out.len());
        out
    }
}

fn face_index(face: MedialFace) -> usize {
    match face {
        MedialFace::Vertex(v) | MedialFace::Quad(v) => v,
    }
}

/// `∫_P ω`.
pub fn integrate_one(omega: &OneForm, path: &MedialPath) -> Result<Complex64> {
    path.steps.iter().map(|&s| omega.along(s)).sum()
}

/// `∬ Ω` over a set of faces.
pub fn integrate_two(form: &TwoForm, faces: &[MedialFace]) -> Result<Complex64> {
    faces.iter().map(|&f| form.get(f)).sum()
}

/// `df = ∂_Λ f dz + ∂̄_Λ f dz̄`, of type ◊.
pub fn exterior_d_function(g: &QuadGraph, f: &VertexField) -> Result<OneForm> {
    let mut values = Vec::with_capacity(g.num_medial_edges());
    for q in 0..g.num_quads() {
        let vals = quad_values(g, q, f)?;
        let (d, db) = quad_derivative(g, q, vals);
        for c in 0..4 {
            let disp = g.medial_displacement(4 * q + c);
            values.push(Some(d * disp + db * disp.conj()));
        }
    }
    Ok(OneForm::from_options(values, OneFormType::Diamond))
}

/// `dh = ∂_◊ h dz + ∂̄_◊ h dz̄`, of type Λ. Defined on the edges `[Q, v]`
/// with `v` interior.
pub fn exterior_d_face(g: &QuadGraph, h: &FaceField) -> Result<OneForm> {
    let mut values = vec![None; g.num_medial_edges()];
    for v in g.interior_vertices() {
        let (d, db) = d_diamond_at(g, v, |q| h.at(q))?;
        for &(q, c) in g.star(v) {
            let disp = g.medial_displacement(4 * q + c);
            values[4 * q + c] = Some(d * disp + db * disp.conj());
        }
    }
    Ok(OneForm::from_options(values, OneFormType::Lambda))
}

/// `dω` with the representation `ω = p dz + q dz̄` where `q = 0`.
pub fn exterior_d_form(g: &QuadGraph, omega: &OneForm) -> Result<TwoForm> {
    exterior_d_form_split(g, omega, |_| Complex64::new(0.0, 0.0))
}

/// `dω` from the local representation `ω = p dz + q dz̄` in which the
/// dz̄-coefficient on medial edge `e` is `split(e)`.
///
/// On F_Q the coefficients are read as functions on the four corners and
/// `dω = (∂_Λ q − ∂̄_Λ p) Ω_◊`; on F_v they live on the surrounding quads
/// and `dω = (∂_◊ q − ∂̄_◊ p) Ω_Λ`. The result does not depend on `split`.
pub fn exterior_d_form_split(
    g: &QuadGraph,
    omega: &OneForm,
    split: impl Fn(usize) -> Complex64,
) -> Result<TwoForm> {
    let m2i = Complex64::new(0.0, -2.0);
    let coeffs = |e: usize| -> Result<(Complex64, Complex64)> {
        let d = g.medial_displacement(e);
        let q = split(e);
        Ok(((omega.get(e)? - q * d.conj()) / d, q))
    };
    let mut quad = Vec::with_capacity(g.num_quads());
    for qi in 0..g.num_quads() {
        let mut p = [Complex64::new(0.0, 0.0); 4];
        let mut q = [Complex64::new(0.0, 0.0); 4];
        for c in 0..4 {
            (p[c], q[c]) = coeffs(4 * qi + c)?;
        }
        let (dq, _) = quad_derivative(g, qi, q);
        let (_, dbp) = quad_derivative(g, qi, p);
        quad.push(Some(m2i * g.ar_fq(qi) * (dq - dbp)));
    }
    let mut vertex = vec![None; g.num_vertices()];
    for v in g.interior_vertices() {
        let star = g.star(v);
        let mut pc = Vec::with_capacity(star.len());
        for &(qi, c) in star {
            pc.push(coeffs(4 * qi + c)?);
        }
        let lookup = |which: usize| {
            let pc = &pc;
            move |qi: usize| -> Result<Complex64> {
                let k = star.iter().position(|&(x, _)| x == qi).expect("quad in star");
                Ok(if which == 0 { pc[k].0 } else { pc[k].1 })
            }
        };
        let (dq, _) = d_diamond_at(g, v, lookup(1))?;
        let (_, dbp) = d_diamond_at(g, v, lookup(0))?;
        vertex[v] = Some(m2i * g.ar_fv(v)? * (dq - dbp));
    }
    let kind = match omega.kind() {
        OneFormType::Diamond => TwoFormType::Lambda,
        OneFormType::Lambda => TwoFormType::Diamond,
        OneFormType::Generic => TwoFormType::Mixed,
    };
    Ok(TwoForm::new(vertex, quad, kind))
}

/// The unique `(p, q)` with `ω = p dz + q dz̄` on the boundary of F_Q.
pub fn decompose_diamond(g: &QuadGraph, omega: &OneForm, quad: usize) -> Result<(Complex64, Complex64)> {
    let defect = omega.diamond_defect(quad)?;
    if defect > TYPE_DIAMOND_TOL {
        return Err(Error::NotTypeDiamond { quad, defect });
    }
    let (e, es) = (g.edge_e(quad), g.edge_e_star(quad));
    let (de, des) = (g.medial_displacement(e), g.medial_displacement(es));
    let (ie, ies) = (omega.get(e)?, omega.get(es)?);
    let lambda = g.geometry(quad).lambda;
    let p = lambda * ie / de + lambda.conj() * ies / des;
    let q = lambda.conj() * ie / de.conj() + lambda * ies / des.conj();
    Ok((p, q))
}

/// Per-quad coefficient fields `(p, q)` of a type-◊ form.
pub fn coefficients(g: &QuadGraph, omega: &OneForm) -> Result<(FaceField, FaceField)> {
    let mut p = Vec::with_capacity(g.num_quads());
    let mut q = Vec::with_capacity(g.num_quads());
    for quad in 0..g.num_quads() {
        let (a, b) = decompose_diamond(g, omega, quad)?;
        p.push(a);
        q.push(b);
    }
    Ok((FaceField::from_values(p), FaceField::from_values(q)))
}

/// `ω ∧ ω' = (p q' − q p') Ω_◊`.
pub fn wedge(g: &QuadGraph, omega: &OneForm, omega2: &OneForm) -> Result<TwoForm> {
    let m2i = Complex64::new(0.0, -2.0);
    let mut quad = Vec::with_capacity(g.num_quads());
    for qi in 0..g.num_quads() {
        let (p, q) = decompose_diamond(g, omega, qi)?;
        let (p2, q2) = decompose_diamond(g, omega2, qi)?;
        quad.push(Some((p * q2 - q * p2) * m2i * g.ar_fq(qi)));
    }
    let vertex = (0..g.num_vertices()).map(|v| g.is_interior(v).then_some(Complex64::new(0.0, 0.0))).collect();
    Ok(TwoForm::new(vertex, quad, TwoFormType::Diamond))
}

/// `★ω = −ip dz + iq dz̄` for type-◊ one-forms.
pub fn hodge_one(g: &QuadGraph, omega: &OneForm) -> Result<OneForm> {
    let (p, q) = coefficients(g, omega)?;
    let i = Complex64::i();
    OneForm::from_coefficients(g, &p.scale(-i), &q.scale(i))
}

/// `★f = f ar(F_v)` on F_v, a type-Λ two-form (interior vertices only).
pub fn hodge_vertex(g: &QuadGraph, f: &VertexField) -> TwoForm {
    TwoForm::new(
        (0..g.num_vertices()).map(|v| Some(f.get(v)? * g.ar_fv(v).ok()?)).collect(),
        vec![Some(Complex64::new(0.0, 0.0)); g.num_quads()],
        TwoFormType::Lambda,
    )
}

/// `★h = h ar(F_Q)` on F_Q, a type-◊ two-form.
pub fn hodge_face(g: &QuadGraph, h: &FaceField) -> TwoForm {
    TwoForm::new(
        (0..g.num_vertices()).map(|v| g.is_interior(v).then_some(Complex64::new(0.0, 0.0))).collect(),
        (0..g.num_quads()).map(|q| Some(h.get(q)? * g.ar_fq(q))).collect(),
        TwoFormType::Diamond,
    )
}

/// `★Ω = Ω / ar(F)` restricted to F_v.
pub fn hodge_two_lambda(g: &QuadGraph, form: &TwoForm) -> VertexField {
    VertexField::from_options(
        (0..g.num_vertices()).map(|v| Some(form.vertex_values()[v]? / g.ar_fv(v).ok()?)).collect(),
    )
}

/// `★Ω = Ω / ar(F)` restricted to F_Q.
pub fn hodge_two_diamond(g: &QuadGraph, form: &TwoForm) -> FaceField {
    FaceField::from_options((0..g.num_quads()).map(|q| Some(form.quad_values()[q]? / g.ar_fq(q))).collect())
}

/// Any of the four kinds of cochain, for the operations that dispatch on
/// the kind at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum Cochain {
    Vertex(VertexField),
    Face(FaceField),
    One(OneForm),
    Two(TwoForm),
}

impl Cochain {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Cochain::Vertex(_) => "vertex function",
            Cochain::Face(_) => "face function",
            Cochain::One(_) => "one-form",
            Cochain::Two(_) => "two-form",
        }
    }
}

/// The Hodge star on any cochain.
pub fn hodge(g: &QuadGraph, x: &Cochain) -> Result<Cochain> {
    Ok(match x {
        Cochain::Vertex(f) => Cochain::Two(hodge_vertex(g, f)),
        Cochain::Face(h) => Cochain::Two(hodge_face(g, h)),
        Cochain::One(omega) => Cochain::One(hodge_one(g, omega)?),
        Cochain::Two(form) => match form.kind() {
            TwoFormType::Lambda => Cochain::Vertex(hodge_two_lambda(g, form)),
            TwoFormType::Diamond => Cochain::Face(hodge_two_diamond(g, form)),
            TwoFormType::Mixed => {
                return Err(Error::TypeMismatch("the Hodge star needs a two-form of type Λ or ◊".into()))
            }
        },
    })
}

/// `δ = −★d★` on type-◊ one-forms (giving a function on interior vertices)
/// and on type-Λ two-forms (giving the type-◊ one-form `−★d(★Ω)`, where
/// the function `★Ω` is extended by zero to ∂Λ₀).
pub fn codifferential(g: &QuadGraph, x: &Cochain) -> Result<Cochain> {
    match x {
        Cochain::One(omega) if omega.kind() == OneFormType::Diamond => {
            let star = hodge_one(g, omega)?;
            let values = (0..g.num_vertices())
                .map(|v| -> Result<Option<Complex64>> {
                    if g.is_boundary(v) {
                        return Ok(None);
                    }
                    let s = integrate_one(&star, &g.cycle_vertex(v)?)?;
                    Ok(Some(-s / g.ar_fv(v)?))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Cochain::Vertex(VertexField::from_options(values)))
        }
        Cochain::Two(form) if form.kind() == TwoFormType::Lambda => {
            let f = hodge_two_lambda(g, form);
            let f = VertexField::from_options(
                (0..g.num_vertices()).map(|v| Some(f.get(v).unwrap_or(Complex64::new(0.0, 0.0)))).collect(),
            );
            let star = hodge_one(g, &exterior_d_function(g, &f)?)?;
            Ok(Cochain::One(star.scale(Complex64::new(-1.0, 0.0))))
        }
        other => Err(Error::TypeMismatch(format!(
            "the codifferential needs a type-◊ one-form or a type-Λ two-form, got a {}",
            other.kind_name()
        ))),
    }
}

/// `⟨f, g⟩ = Σ f ḡ ar(F_v)` over interior vertices.
pub fn scalar_vertex(g: &QuadGraph, a: &VertexField, b: &VertexField) -> Result<Complex64> {
    g.interior_vertices().map(|v| Ok(a.at(v)? * b.at(v)?.conj() * g.ar_fv(v)?)).sum()
}

/// `⟨h, h'⟩ = Σ h h̄' ar(F_Q)`.
pub fn scalar_face(g: &QuadGraph, a: &FaceField, b: &FaceField) -> Result<Complex64> {
    (0..g.num_quads()).map(|q| Ok(a.at(q)? * b.at(q)?.conj() * g.ar_fq(q))).sum()
}

/// `⟨ω, ω'⟩ = ∬ ω ∧ ★ω̄' = Σ 2 ar(F_Q) (p p̄' + q q̄')`.
pub fn scalar_one(g: &QuadGraph, a: &OneForm, b: &OneForm) -> Result<Complex64> {
    (0..g.num_quads())
        .map(|q| {
            let (p, qq) = decompose_diamond(g, a, q)?;
            let (p2, q2) = decompose_diamond(g, b, q)?;
            Ok(2.0 * g.ar_fq(q) * (p * p2.conj() + qq * q2.conj()))
        })
        .sum()
}

/// `⟨Ω, Ω'⟩ = Σ Ω Ω̄' / ar(F)` over all faces where both are defined.
pub fn scalar_two(g: &QuadGraph, a: &TwoForm, b: &TwoForm) -> Result<Complex64> {
    let mut s = Complex64::new(0.0, 0.0);
    for v in g.interior_vertices() {
        if let (Some(x), Some(y)) = (a.vertex_values()[v], b.vertex_values()[v]) {
            s += x * y.conj() / g.ar_fv(v)?;
        }
    }
    for q in 0..g.num_quads() {
        if let (Some(x), Some(y)) = (a.quad_values()[q], b.quad_values()[q]) {
            s += x * y.conj() / g.ar_fq(q);
        }
    }
    Ok(s)
}

pub fn scalar_product(g: &QuadGraph, a: &Cochain, b: &Cochain) -> Result<Complex64> {
    match (a, b) {
        (Cochain::Vertex(x), Cochain::Vertex(y)) => scalar_vertex(g, x, y),
        (Cochain::Face(x), Cochain::Face(y)) => scalar_face(g, x, y),
        (Cochain::One(x), Cochain::One(y)) => scalar_one(g, x, y),
        (Cochain::Two(x), Cochain::Two(y)) => scalar_two(g, x, y),
        _ => Err(Error::KindMismatch(format!("cannot pair a {} with a {}", a.kind_name(), b.kind_name()))),
    }
}

/// Fails unless `f` vanishes on ∂Λ₀.
pub fn require_compact(g: &QuadGraph, f: &VertexField) -> Result<()> {
    for v in g.boundary_vertices() {
        if f.get(v).is_some_and(|z| z != Complex64::new(0.0, 0.0)) {
            return Err(Error::NotCompactlySupported(v));
        }
    }
    Ok(())
}

/// `f dg + g df`, closed for every pair of functions on V(Λ).
pub fn product_closed_form(g: &QuadGraph, f: &VertexField, h: &VertexField) -> Result<OneForm> {
    let df = exterior_d_function(g, f)?;
    let dh = exterior_d_function(g, h)?;
    Ok(dh.mul_vertex(g, f).add(&df.mul_vertex(g, h)).with_kind(OneFormType::Generic))
}

pub(crate) fn quad_values(g: &QuadGraph, q: usize, f: &VertexField) -> Result<[Complex64; 4]> {
    let idx = g.quad(q);
    Ok([f.at(idx[0])?, f.at(idx[1])?, f.at(idx[2])?, f.at(idx[3])?])
}
