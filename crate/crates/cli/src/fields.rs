//! Complex literals and the built-in symbolic test fields.

use quadcalc::kernels::DiscreteExponential;
use quadcalc::{QuadGraph, VertexField, C64};

use crate::error::{usage, Result};

/// Parses `2`, `-1.5i`, `i`, `0.3+0.8i`, `1e-3-2i`.
pub fn parse_complex(text: &str) -> Result<C64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || usage(format!("cannot parse complex number {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    // split before a sign that is not the leading one or part of an exponent
    let bytes = s.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| {
        (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E')
    });
    let (head, tail) = match split {
        Some(k) => (&s[..k], &s[k..]),
        None => ("", s.as_str()),
    };
    let imaginary = |t: &str| -> Result<f64> {
        let coeff = t.strip_suffix('i').ok_or_else(bad)?;
        match coeff {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            c => c.parse().map_err(|_| bad()),
        }
    };
    match (head.is_empty(), tail.ends_with('i')) {
        (true, true) => Ok(C64::new(0.0, imaginary(tail)?)),
        (true, false) => Ok(C64::new(tail.parse().map_err(|_| bad())?, 0.0)),
        (false, true) => Ok(C64::new(head.parse().map_err(|_| bad())?, imaginary(tail)?)),
        (false, false) => Err(bad()),
    }
}

/// Comma-separated complex numbers.
pub fn parse_complex_list(text: &str) -> Result<Vec<C64>> {
    text.split(',').map(parse_complex).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Symbolic {
    One,
    V,
    VBar,
    VSquared,
    AbsSquared,
    ReVSquared,
    Exp(C64),
}

impl Symbolic {
    pub fn parse(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
        let s = s.replace('²', "^2");
        Ok(match s.as_str() {
            "1" => Symbolic::One,
            "v" | "z" => Symbolic::V,
            "vbar" | "v̄" | "conj(v)" | "zbar" => Symbolic::VBar,
            "v^2" | "v*v" => Symbolic::VSquared,
            "|v|^2" | "abs(v)^2" => Symbolic::AbsSquared,
            "rev^2" | "re(v^2)" => Symbolic::ReVSquared,
            _ => {
                let inner = s
                    .strip_prefix("exp(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| usage(format!("unknown field {text:?}; expected 1, v, vbar, v^2, |v|^2, Re v^2 or exp(λ)")))?;
                let inner = inner.strip_prefix("λ=").or_else(|| inner.strip_prefix("lambda=")).unwrap_or(inner);
                Symbolic::Exp(parse_complex(inner)?)
            }
        })
    }

    /// Samples the field on V(Λ). The discrete exponential is normalized to
    /// 1 at the vertex nearest the origin.
    pub fn sample(self, g: &QuadGraph) -> Result<VertexField> {
        let at = |f: fn(C64) -> C64| VertexField::from_fn(g.num_vertices(), |v| f(g.position(v)));
        Ok(match self {
            Symbolic::One => at(|_| C64::new(1.0, 0.0)),
            Symbolic::V => at(|z| z),
            Symbolic::VBar => at(|z| z.conj()),
            Symbolic::VSquared => at(|z| z * z),
            Symbolic::AbsSquared => at(|z| C64::new(z.norm_sqr(), 0.0)),
            Symbolic::ReVSquared => at(|z| C64::new((z * z).re, 0.0)),
            Symbolic::Exp(lambda) => {
                let v0 = g.nearest_vertex(C64::new(0.0, 0.0));
                DiscreteExponential::new(g, lambda, v0)?.field().clone()
            }
        })
    }
}
