//! Complex-valued functions on the vertices of Λ and of ◊.
//!
//! A field may be partial: operators that only make sense at interior
//! vertices leave the remaining entries undefined.

use std::fmt::Write as _;
use std::marker::PhantomData;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Marker for functions on V(Λ).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OnVertices;
/// Marker for functions on V(◊), i.e. on quads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OnQuads;

pub trait Domain {
    const NAME: &'static str;
}
impl Domain for OnVertices {
    const NAME: &'static str = "vertex";
}
impl Domain for OnQuads {
    const NAME: &'static str = "quad";
}

#[derive(Debug, Clone, PartialEq)]
pub struct Field<D> {
    values: Vec<Option<Complex64>>,
    _domain: PhantomData<D>,
}

pub type VertexField = Field<OnVertices>;
pub type FaceField = Field<OnQuads>;

impl<D: Domain> Field<D> {
    pub fn from_options(values: Vec<Option<Complex64>>) -> Self {
        Self { values, _domain: PhantomData }
    }

    pub fn from_values(values: Vec<Complex64>) -> Self {
        Self::from_options(values.into_iter().map(Some).collect())
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::from_values(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn from_fn(len: usize, f: impl FnMut(usize) -> Complex64) -> Self {
        Self::from_values((0..len).map(f).collect())
    }

    pub fn undefined(len: usize) -> Self {
        Self::from_options(vec![None; len])
    }

    pub fn constant(len: usize, c: Complex64) -> Self {
        Self::from_values(vec![c; len])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<Complex64> {
        self.values.get(i).copied().flatten()
    }

    /// Value at `i`, or [`Error::MissingValues`].
    pub fn at(&self, i: usize) -> Result<Complex64> {
        self.get(i).ok_or(Error::MissingValues { what: D::NAME, index: i })
    }

    pub fn set(&mut self, i: usize, value: Option<Complex64>) {
        self.values[i] = value;
    }

    pub fn is_defined(&self, i: usize) -> bool {
        self.get(i).is_some()
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    pub fn options(&self) -> &[Option<Complex64>] {
        &self.values
    }

    /// Indices and values of the defined entries.
    pub fn defined(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.values.iter().enumerate().filter_map(|(i, v)| v.map(|v| (i, v)))
    }

    /// All values; fails on the first undefined entry.
    pub fn values(&self) -> Result<Vec<Complex64>> {
        (0..self.len()).map(|i| self.at(i)).collect()
    }

    pub fn map(&self, mut f: impl FnMut(Complex64) -> Complex64) -> Self {
        Self::from_options(self.values.iter().map(|v| v.map(&mut f)).collect())
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn re(&self) -> Self {
        self.map(|z| Complex64::new(z.re, 0.0))
    }

    pub fn im(&self) -> Self {
        self.map(|z| Complex64::new(z.im, 0.0))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    /// Entrywise combination; undefined where either side is undefined.
    pub fn zip_with(&self, other: &Self, mut f: impl FnMut(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.len(), other.len(), "field length mismatch");
        Self::from_options(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| match (a, b) {
                    (Some(a), Some(b)) => Some(f(*a, *b)),
                    _ => None,
                })
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    /// Largest modulus over the defined entries (0 for an empty field).
    pub fn max_abs(&self) -> f64 {
        self.defined().map(|(_, z)| z.norm()).fold(0.0, f64::max)
    }

    /// Largest modulus of `self - other` over entries defined in both.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).max_abs()
    }

    /// CSV rows `id,re,im` with a header; undefined entries are skipped.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,re,im\n");
        for (i, z) in self.defined() {
            let _ = writeln!(out, "{},{:.16e},{:.16e}", i, z.re, z.im);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_fields_propagate_undefined_entries() {
        let a = VertexField::from_options(vec![Some(Complex64::new(1.0, 0.0)), None]);
        let b = VertexField::constant(2, Complex64::new(0.0, 2.0));
        let s = a.add(&b);
        assert_eq!(s.get(0), Some(Complex64::new(1.0, 2.0)));
        assert_eq!(s.get(1), None);
        assert!(matches!(s.at(1), Err(Error::MissingValues { what: "vertex", index: 1 })));
    }

    #[test]
    fn csv_uses_seventeen_significant_digits() {
        let f = FaceField::from_values(vec![Complex64::new(1.0 / 3.0, -2.0)]);
        let csv = f.to_csv();
        assert_eq!(csv.lines().nth(1).unwrap(), "0,3.3333333333333331e-1,-2.0000000000000000e0");
    }
}
