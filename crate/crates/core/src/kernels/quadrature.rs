//! Globally adaptive 7/15-point Gauss–Kronrod quadrature for complex
//! integrands on finite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-14, rel_tol: 1e-13, max_intervals: 4000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub error: f64,
    pub intervals: usize,
    pub evaluations: usize,
}

struct Piece {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    /// Rounding level of the rule on this piece, `50 ε ∫|f|`.
    floor: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rule(f: &mut impl FnMut(f64) -> Complex64, a: f64, b: f64) -> Piece {
    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
    let center = f(mid);
    let mut kronrod = center * WGK[7];
    let mut gauss = center * WG[3];
    let mut abs = center.norm() * WGK[7];
    for j in 0..7 {
        let x = half * XGK[j];
        let (l, r) = (f(mid - x), f(mid + x));
        kronrod += (l + r) * WGK[j];
        abs += (l.norm() + r.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (l + r) * WG[j / 2];
        }
    }
    let half = half.abs();
    Piece { a, b, value: kronrod * half, error: ((kronrod - gauss) * half).norm(), floor: 50.0 * f64::EPSILON * abs * half }
}

/// `∫_a^b f(t) dt`, bisecting the interval with the largest error estimate
/// until the total estimate meets the tolerance. When cancellation in the
/// integrand puts its rounding level above the tolerance, that level is
/// accepted instead.
pub fn integrate(mut f: impl FnMut(f64) -> Complex64, a: f64, b: f64, opts: &QuadratureOptions) -> Result<QuadratureResult> {
    let first = rule(&mut f, a, b);
    if !first.value.re.is_finite() || !first.value.im.is_finite() {
        return Err(Error::QuadratureFailed(f64::INFINITY));
    }
    let (mut total, mut total_err, mut total_floor) = (first.value, first.error, first.floor);
    let mut heap = BinaryHeap::from([first]);
    let mut evaluations = 15;
    loop {
        if total_err <= opts.abs_tol.max(opts.rel_tol * total.norm()).max(total_floor) {
            return Ok(QuadratureResult { value: total, error: total_err, intervals: heap.len(), evaluations });
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::QuadratureFailed(total_err));
        }
        let worst = heap.pop().expect("heap is never empty");
        let m = (worst.a + worst.b) / 2.0;
        let (left, right) = (rule(&mut f, worst.a, m), rule(&mut f, m, worst.b));
        evaluations += 30;
        let sum = left.value + right.value;
        if !sum.re.is_finite() || !sum.im.is_finite() {
            return Err(Error::QuadratureFailed(f64::INFINITY));
        }
        total += sum - worst.value;
        total_err += left.error + right.error - worst.error;
        total_floor += left.floor + right.floor - worst.floor;
        heap.push(left);
        heap.push(right);
        // rebuild the running sums now and then to shed rounding drift
        if heap.len() % 256 == 0 {
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.error).sum();
            total_floor = heap.iter().map(|p| p.floor).sum();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let r = integrate(|t| Complex64::new(t.powi(9), t * t), -1.0, 2.0, &Default::default()).unwrap();
        assert!((r.value - Complex64::new((1024.0 - 1.0) / 10.0, 3.0)).norm() < 1e-12);
        assert_eq!(r.intervals, 1);
    }

    #[test]
    fn peaked_and_log_integrands() {
        let opts = QuadratureOptions::default();
        let r = integrate(|t| Complex64::new(1e-3 / (t * t + 1e-6), 0.0), -1.0, 1.0, &opts).unwrap();
        assert!((r.value.re - 2.0 * (1e3f64).atan()).abs() < 1e-12);
        let r = integrate(|t| Complex64::new(t.ln(), 0.0), 0.0, 1.0, &opts).unwrap();
        assert!((r.value.re + 1.0).abs() < 1e-12);
    }

    #[test]
    fn rounding_level_is_accepted() {
        // every sample carries rounding noise of order 1e-8
        let r = integrate(|t| Complex64::new((1e8 + t) - 1e8, 0.0), 0.0, 1.0, &Default::default()).unwrap();
        assert!((r.value.re - 0.5).abs() < 1e-7);
    }

    #[test]
    fn failure_is_reported() {
        let opts = QuadratureOptions { max_intervals: 4, ..Default::default() };
        let err = integrate(|t| Complex64::new(1.0 / t.abs().sqrt(), 0.0), -1.0, 1.0, &opts).unwrap_err();
        assert!(matches!(err, Error::QuadratureFailed(_)));
    }
}
