//! Exponential-type rational functions integrated along the branch cut ray.
//!
//! A loop integral of `log(λ)·R(λ)` around all poles of `R` equals, after
//! collapsing the loops onto the cut ray `{t u : t > 0}`, an ordinary
//! integral of `R` along that ray. The ray `[0, ∞)` is split at `t = 1`
//! and the outer half is mapped back to `[0, 1]` through `t = 1/s`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::quadrature::{integrate, QuadratureOptions, QuadratureResult};
use crate::error::{Error, Result};

/// Largest angle between a pole and the cut ray counted as lying on it.
const CUT_TOL: f64 = 1e-9;
/// Pole and zero closer than this (relative) cancel.
const CANCEL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Default)]
pub(crate) struct Rational {
    zeros: Vec<Complex64>,
    poles: Vec<Complex64>,
}

impl Rational {
    /// `∏ (λ + e)/(λ − e)` over the edge vectors of a path.
    pub fn exponential(edges: &[Complex64]) -> Self {
        Self { zeros: edges.iter().map(|&e| -e).collect(), poles: edges.to_vec() }
    }

    pub fn with_pole(mut self, p: Complex64) -> Self {
        self.poles.push(p);
        self
    }

    /// Drops coinciding pole–zero pairs.
    pub fn cancel(mut self) -> Self {
        let mut k = 0;
        while k < self.poles.len() {
            let p = self.poles[k];
            if let Some(j) = self.zeros.iter().position(|&z| (z - p).norm() <= CANCEL_TOL * p.norm()) {
                self.zeros.swap_remove(j);
                self.poles.swap_remove(k);
            } else {
                k += 1;
            }
        }
        self
    }

    pub fn eval(&self, lambda: Complex64) -> Complex64 {
        let num: Complex64 = self.zeros.iter().map(|&z| lambda - z).product();
        let den: Complex64 = self.poles.iter().map(|&p| lambda - p).product();
        num / den
    }

    /// `∏ (u − s z) / ∏ (u − s p)`, i.e. `s^{#poles − #zeros} R(u/s)`.
    pub fn eval_inverted(&self, u: Complex64, s: f64) -> Complex64 {
        let num: Complex64 = self.zeros.iter().map(|&z| u - s * z).product();
        let den: Complex64 = self.poles.iter().map(|&p| u - s * p).product();
        num / den
    }

    /// `e(λ) − e(0)` without cancellation for small `λ`.
    pub fn eval_minus_origin(&self, lambda: Complex64) -> Complex64 {
        let ratio = |a: Complex64| log1p(-lambda / a);
        let sum: Complex64 = self.zeros.iter().map(|&z| ratio(z)).sum::<Complex64>() - self.poles.iter().map(|&p| ratio(p)).sum::<Complex64>();
        self.eval(Complex64::new(0.0, 0.0)) * expm1(sum)
    }

    /// `eval_inverted(u, s) − 1` without cancellation for small `s`, when
    /// there are as many zeros as poles.
    pub fn eval_inverted_minus_one(&self, u: Complex64, s: f64) -> Complex64 {
        debug_assert_eq!(self.degree_gap(), 0);
        let ratio = |a: Complex64| log1p(-s * a / u);
        expm1(self.zeros.iter().map(|&z| ratio(z)).sum::<Complex64>() - self.poles.iter().map(|&p| ratio(p)).sum::<Complex64>())
    }

    /// Highest multiplicity among the poles.
    pub fn max_multiplicity(&self) -> usize {
        let mut best = 0;
        for &p in &self.poles {
            let m = self.poles.iter().filter(|&&q| (q - p).norm() <= CANCEL_TOL * p.norm()).count();
            best = best.max(m);
        }
        best
    }

    /// `BranchConflict` if a pole lies on the ray through `u`.
    pub fn check_cut(&self, u: Complex64, site: usize) -> Result<()> {
        if self.poles.iter().any(|&p| (p / u).arg().abs() < CUT_TOL) {
            return Err(Error::BranchConflict { site });
        }
        Ok(())
    }

    pub fn degree_gap(&self) -> isize {
        self.poles.len() as isize - self.zeros.len() as isize
    }
}

fn log1p(w: Complex64) -> Complex64 {
    let (x, y) = (w.re, w.im);
    Complex64::new(0.5 * (x * (2.0 + x) + y * y).ln_1p(), y.atan2(1.0 + x))
}

fn expm1(w: Complex64) -> Complex64 {
    let (a, b) = (w.re, w.im);
    let half = (b / 2.0).sin();
    Complex64::new(a.exp_m1() * b.cos() - 2.0 * half * half, a.exp() * b.sin())
}

/// Quadrature effort of one ray integral.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct RayStats {
    pub intervals: usize,
    pub evaluations: usize,
    pub multiplicity: usize,
}

impl RayStats {
    fn new(r: &QuadratureResult, e: &Rational) -> Self {
        Self { intervals: r.intervals, evaluations: r.evaluations, multiplicity: e.max_multiplicity() }
    }
}

/// `(1/2π) Re[(1/2πi) ∮ log(λ)/(2λ) · e(λ) dλ]` for a rational `e` with
/// `e(∞) = 1`, the cut being the ray through `u`:
/// `−(1/4π) Re[∫₀¹ (e(tu) − e(0))/t dt + ∫₀¹ (e(u/s) − 1)/s ds]`.
pub(crate) fn green_integral(e: &Rational, u: Complex64, opts: &QuadratureOptions) -> Result<(f64, RayStats)> {
    debug_assert_eq!(e.degree_gap(), 0);
    let r = integrate(|t| (e.eval_minus_origin(u * t) + e.eval_inverted_minus_one(u, t)) / t, 0.0, 1.0, opts)?;
    Ok((-r.value.re / (4.0 * PI), RayStats::new(&r, e)))
}

/// `(1/πi) ∮ log(λ) e(λ) dλ = −2u ∫₀^∞ e(tu) dt` for a rational `e`
/// decaying like `λ⁻²`.
pub(crate) fn cauchy_integral(e: &Rational, u: Complex64, opts: &QuadratureOptions) -> Result<(Complex64, RayStats)> {
    debug_assert_eq!(e.degree_gap(), 2);
    let r = integrate(|t| e.eval(u * t) + e.eval_inverted(u, t), 0.0, 1.0, opts)?;
    Ok((-2.0 * u * r.value, RayStats::new(&r, e)))
}
