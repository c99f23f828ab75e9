//! Graph generators: skew integer lattices, de Bruijn multigrid duals,
//! jittered square grids and small fixtures.

use std::collections::HashMap;

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::quadgraph::{build_quadgraph, Color, QuadGraph, VertexSpec};

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Vertices `i e1 + j e2` for an `m × n` block of quads, shifted so that
    /// `(⌊m/2⌋, ⌊n/2⌋)` sits at the origin.
    Skew { e1: Complex64, e2: Complex64, m: usize, n: usize },
    /// Quads of the skew lattice whose center lies within `radius` of 0.
    SkewDisk { e1: Complex64, e2: Complex64, radius: f64 },
    /// de Bruijn multigrid dual with unit edge vectors along `dirs`.
    RhombicStrips { dirs: Vec<Complex64>, radius: f64 },
    /// de Bruijn multigrid dual with edge vectors `dirs` as given. `offsets`
    /// are the grid shifts γ; random when absent.
    DeBruijn { dirs: Vec<Complex64>, radius: f64, offsets: Option<Vec<f64>> },
    /// Unit square grid with every vertex moved uniformly inside a disk.
    PerturbedSquare { m: usize, n: usize, jitter: f64 },
    Fixture(Fixture),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixture {
    /// Four quads around 0 on which `v²` is not harmonic.
    Fig3,
    UnitSquare,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpec {
    pub family: Family,
    pub seed: u64,
}

impl LatticeSpec {
    pub fn new(family: Family) -> Self {
        Self { family, seed: 0 }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Smallest interior angle α₀ and smallest side-length ratio q₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeStats {
    pub alpha0: f64,
    pub q0: f64,
}

pub fn stats(g: &QuadGraph) -> LatticeStats {
    let (alpha0, q0) = g.angle_and_ratio_bounds();
    LatticeStats { alpha0, q0 }
}

pub fn generate(spec: &LatticeSpec) -> Result<QuadGraph> {
    match &spec.family {
        Family::Skew { e1, e2, m, n } => skew(*e1, *e2, *m, *n),
        Family::SkewDisk { e1, e2, radius } => skew_disk(*e1, *e2, *radius),
        Family::RhombicStrips { dirs, radius } => {
            let unit: Vec<Complex64> = dirs.iter().map(|d| d / d.norm()).collect();
            de_bruijn(&unit, *radius, None, spec.seed)
        }
        Family::DeBruijn { dirs, radius, offsets } => de_bruijn(dirs, *radius, offsets.as_deref(), spec.seed),
        Family::PerturbedSquare { m, n, jitter } => perturbed_square(*m, *n, *jitter, spec.seed),
        Family::Fixture(f) => fixture(*f),
    }
}

fn check_basis(e1: Complex64, e2: Complex64) -> Result<()> {
    let cross = (e1.conj() * e2).im;
    if !(cross.abs() > 1e-12 * e1.norm() * e2.norm()) {
        return Err(Error::DegenerateSpec("e1 and e2 must be non-parallel and nonzero".into()));
    }
    Ok(())
}

fn parity_color(k: i64) -> Color {
    if k.rem_euclid(2) == 0 {
        Color::Black
    } else {
        Color::White
    }
}

/// Builds a graph from quads given by integer lattice keys.
fn from_keyed_quads<K: std::hash::Hash + Eq + Clone>(
    quads: Vec<[(K, Complex64, Color); 4]>,
) -> Result<QuadGraph> {
    let mut index: HashMap<K, usize> = HashMap::new();
    let mut specs = Vec::new();
    let mut out = Vec::with_capacity(quads.len());
    for q in quads {
        let mut idx = [0usize; 4];
        for (c, (key, pos, color)) in q.into_iter().enumerate() {
            idx[c] = *index.entry(key).or_insert_with(|| {
                specs.push(VertexSpec::new(pos, color));
                specs.len() - 1
            });
        }
        out.push(idx);
    }
    build_quadgraph(specs, out)
}

pub fn skew(e1: Complex64, e2: Complex64, m: usize, n: usize) -> Result<QuadGraph> {
    check_basis(e1, e2)?;
    if m == 0 || n == 0 {
        return Err(Error::DegenerateSpec("lattice extent must be positive".into()));
    }
    let (i0, j0) = ((m / 2) as i64, (n / 2) as i64);
    let mut quads = Vec::with_capacity(m * n);
    for i in 0..m as i64 {
        for j in 0..n as i64 {
            quads.push(skew_quad(e1, e2, i - i0, j - j0));
        }
    }
    from_keyed_quads(quads)
}

fn skew_quad(e1: Complex64, e2: Complex64, i: i64, j: i64) -> [((i64, i64), Complex64, Color); 4] {
    let corner = |a: i64, b: i64| ((a, b), e1 * a as f64 + e2 * b as f64, parity_color(a + b));
    let mut q = [corner(i, j), corner(i + 1, j), corner(i + 1, j + 1), corner(i, j + 1)];
    if (e1.conj() * e2).im < 0.0 {
        q.reverse();
    }
    q
}

pub fn skew_disk(e1: Complex64, e2: Complex64, radius: f64) -> Result<QuadGraph> {
    check_basis(e1, e2)?;
    if !(radius > 0.0) {
        return Err(Error::DegenerateSpec("radius must be positive".into()));
    }
    let basis = Matrix2::new(e1.re, e2.re, e1.im, e2.im);
    let reach = (radius / basis.svd(false, false).singular_values.min()).ceil() as i64 + 1;
    let mut quads = Vec::new();
    for i in -reach..=reach {
        for j in -reach..=reach {
            let center = e1 * (i as f64 + 0.5) + e2 * (j as f64 + 0.5);
            if center.norm() <= radius {
                quads.push(skew_quad(e1, e2, i, j));
            }
        }
    }
    if quads.is_empty() {
        return Err(Error::DegenerateSpec("radius smaller than one cell".into()));
    }
    from_keyed_quads(quads)
}

/// Dual of the multigrid `{x : Re(x ū_l) = k + γ_l}`, `u_l = a_l/|a_l|`,
/// over the full finite arrangement of `2N + 1` lines per family.
pub fn de_bruijn(dirs: &[Complex64], radius: f64, offsets: Option<&[f64]>, seed: u64) -> Result<QuadGraph> {
    if dirs.len() < 2 {
        return Err(Error::DegenerateSpec("need at least two directions".into()));
    }
    if !(radius > 0.0) {
        return Err(Error::DegenerateSpec("radius must be positive".into()));
    }
    for (i, a) in dirs.iter().enumerate() {
        if !(a.norm() > 0.0) || !a.re.is_finite() || !a.im.is_finite() {
            return Err(Error::DegenerateSpec(format!("direction {i} is zero")));
        }
        for (j, b) in dirs.iter().enumerate().skip(i + 1) {
            if (a.conj() * b).im.abs() <= 1e-9 * a.norm() * b.norm() {
                return Err(Error::DegenerateSpec(format!("directions {i} and {j} are parallel")));
            }
        }
    }
    if let Some(off) = offsets {
        if off.len() != dirs.len() {
            return Err(Error::DegenerateSpec("one offset per direction is required".into()));
        }
        return de_bruijn_with(dirs, radius, off);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = Error::DegenerateSpec("no admissible offsets found".into());
    for _ in 0..16 {
        let off: Vec<f64> = (0..dirs.len()).map(|_| rng.gen_range(0.05..0.95)).collect();
        match de_bruijn_with(dirs, radius, &off) {
            Err(e @ Error::DegenerateSpec(_)) => last = e,
            other => return other,
        }
    }
    Err(last)
}

fn de_bruijn_with(dirs: &[Complex64], radius: f64, offsets: &[f64]) -> Result<QuadGraph> {
    let units: Vec<Complex64> = dirs.iter().map(|a| a / a.norm()).collect();
    // T(x) = Σ Re(x ū_l) a_l maps grid coordinates to tiling coordinates
    let t1: Complex64 = units.iter().zip(dirs).map(|(u, a)| a * u.re).sum();
    let ti: Complex64 = units.iter().zip(dirs).map(|(u, a)| a * u.im).sum();
    let sigma = Matrix2::new(t1.re, ti.re, t1.im, ti.im).svd(false, false).singular_values.min();
    if !(sigma > 1e-12) {
        return Err(Error::DegenerateSpec("direction set does not span the plane".into()));
    }
    let big_n = (radius / sigma).ceil() as i64 + 1;
    let lines = 2 * big_n + 1;
    if lines as usize * lines as usize * dirs.len() * dirs.len() > 8_000_000 {
        return Err(Error::DegenerateSpec("requested patch is too large".into()));
    }
    let shift: Complex64 = dirs.iter().map(|a| a * big_n as f64).sum();
    let count_below = |l: usize, x: Complex64| -> Result<i64> {
        let s = (x * units[l].conj()).re - offsets[l];
        let nearest = s.round();
        if (s - nearest).abs() < 1e-7 && nearest >= -big_n as f64 && nearest <= big_n as f64 {
            return Err(Error::DegenerateSpec("three grid lines meet in a point".into()));
        }
        Ok(((s.ceil() as i64) + big_n).clamp(0, lines))
    };
    let mut quads = Vec::new();
    for l in 0..dirs.len() {
        for m in l + 1..dirs.len() {
            let (ul, um) = (units[l], units[m]);
            // Re(x ū) = c is the real linear system [ul.re ul.im; um.re um.im] x = c
            let mat = Matrix2::new(ul.re, ul.im, um.re, um.im);
            let inv = mat.try_inverse().ok_or_else(|| Error::DegenerateSpec("parallel directions".into()))?;
            for k in -big_n..=big_n {
                for kk in -big_n..=big_n {
                    let rhs = nalgebra::Vector2::new(k as f64 + offsets[l], kk as f64 + offsets[m]);
                    let sol = inv * rhs;
                    let x = Complex64::new(sol[0], sol[1]);
                    let mut key = vec![0i64; dirs.len()];
                    for (j, slot) in key.iter_mut().enumerate() {
                        if j != l && j != m {
                            *slot = count_below(j, x)?;
                        }
                    }
                    key[l] = k + big_n;
                    key[m] = kk + big_n;
                    let corner = |s: i64, t: i64| {
                        let mut kc = key.clone();
                        kc[l] += s;
                        kc[m] += t;
                        let pos: Complex64 =
                            kc.iter().zip(dirs).map(|(&c, a)| a * c as f64).sum::<Complex64>() - shift;
                        let color = parity_color(kc.iter().sum());
                        (kc, pos, color)
                    };
                    let mut q = [corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1)];
                    if (dirs[l].conj() * dirs[m]).im < 0.0 {
                        q.reverse();
                    }
                    quads.push(q);
                }
            }
        }
    }
    from_keyed_quads(quads).map_err(|e| Error::RegularityLost(e.to_string()))
}

pub fn perturbed_square(m: usize, n: usize, jitter: f64, seed: u64) -> Result<QuadGraph> {
    if m == 0 || n == 0 {
        return Err(Error::DegenerateSpec("grid extent must be positive".into()));
    }
    if !(0.0..0.5).contains(&jitter) {
        return Err(Error::DegenerateSpec("jitter must lie in [0, 0.5)".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (i0, j0) = ((m / 2) as i64, (n / 2) as i64);
    let mut offset: HashMap<(i64, i64), Complex64> = HashMap::new();
    for i in 0..=m as i64 {
        for j in 0..=n as i64 {
            let r = jitter * rng.gen::<f64>().sqrt();
            let t = rng.gen_range(0.0..std::f64::consts::TAU);
            offset.insert((i - i0, j - j0), Complex64::from_polar(r, t));
        }
    }
    let mut quads = Vec::with_capacity(m * n);
    for i in 0..m as i64 {
        for j in 0..n as i64 {
            let corner = |a: i64, b: i64| {
                let a = a - i0;
                let b = b - j0;
                ((a, b), Complex64::new(a as f64, b as f64) + offset[&(a, b)], parity_color(a + b))
            };
            quads.push([corner(i, j), corner(i + 1, j), corner(i + 1, j + 1), corner(i, j + 1)]);
        }
    }
    from_keyed_quads(quads).map_err(|e| Error::RegularityLost(e.to_string()))
}

pub fn fixture(f: Fixture) -> Result<QuadGraph> {
    let c = Complex64::new;
    let (b, w) = (Color::Black, Color::White);
    let (verts, quads): (Vec<(Complex64, Color)>, Vec<[usize; 4]>) = match f {
        Fixture::Fig3 => (
            vec![
                (c(0.0, 0.0), b),
                (c(1.0, 0.0), w),
                (c(0.0, 1.0), w),
                (c(-1.0, 0.0), w),
                (c(0.0, -1.0), w),
                (c(2.0, 2.0), b),
                (c(-1.0, 1.0), b),
                (c(-1.0, -1.0), b),
                (c(1.0, -1.0), b),
            ],
            vec![[0, 1, 5, 2], [0, 2, 6, 3], [0, 3, 7, 4], [0, 4, 8, 1]],
        ),
        Fixture::UnitSquare => (
            vec![(c(0.0, 0.0), b), (c(1.0, 0.0), w), (c(1.0, 1.0), b), (c(0.0, 1.0), w)],
            vec![[0, 1, 2, 3]],
        ),
    };
    build_quadgraph(verts.into_iter().map(|(p, col)| VertexSpec::new(p, col)).collect(), quads)
}
