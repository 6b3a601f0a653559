//! Closed-form sequence formulas accepted by the CLI and carried as
//! provenance metadata. Two shapes cover everything the toolkit needs:
//! `a*n^p` (polynomial growth) and `a*b^n` (geometric growth).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Terms larger than this are not generated; geometric formulas simply stop.
const MODULUS_CAP: f64 = 1e300;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SequenceFormula {
    /// `coeff * n^exp`, n = 1, 2, ...
    Power { coeff: f64, exp: u32 },
    /// `coeff * base^n`, n = 1, 2, ...
    Exponential { coeff: f64, base: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulusGrowth {
    /// |term_n| <= C * n — reciprocal sums of any gap subsequence diverge.
    Linear,
    Superlinear,
}

impl SequenceFormula {
    /// Accepts `n`, `n^2`, `3*n`, `0.5*n^3`, `2^n`, `3*2^n`, ...
    pub fn parse(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let (coeff, rest) = match s.split_once('*') {
            Some((c, rest)) => {
                let coeff: f64 = c
                    .parse()
                    .map_err(|_| Error::parameter("formula", format!("bad coefficient in `{text}`")))?;
                (coeff, rest.to_string())
            }
            None => (1.0, s.clone()),
        };
        if coeff == 0.0 || !coeff.is_finite() {
            return Err(Error::parameter("formula", "coefficient must be finite and nonzero"));
        }
        if rest == "n" {
            return Ok(SequenceFormula::Power { coeff, exp: 1 });
        }
        if let Some(exp) = rest.strip_prefix("n^") {
            let exp: u32 = exp
                .parse()
                .map_err(|_| Error::parameter("formula", format!("bad exponent in `{text}`")))?;
            if exp == 0 {
                return Err(Error::parameter("formula", "exponent must be positive"));
            }
            return Ok(SequenceFormula::Power { coeff, exp });
        }
        if let Some(base) = rest.strip_suffix("^n") {
            let base: f64 = base
                .parse()
                .map_err(|_| Error::parameter("formula", format!("bad base in `{text}`")))?;
            if !(base > 1.0) {
                return Err(Error::parameter("formula", "base must exceed 1"));
            }
            return Ok(SequenceFormula::Exponential { coeff, base });
        }
        Err(Error::parameter(
            "formula",
            format!("`{text}` is not of the form a*n^p or a*b^n"),
        ))
    }

    /// Generate up to `len` terms; geometric formulas stop at the f64 cap.
    pub fn generate(&self, len: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(len.min(4096));
        for n in 1..=len {
            let v = match *self {
                SequenceFormula::Power { coeff, exp } => coeff * (n as f64).powi(exp as i32),
                SequenceFormula::Exponential { coeff, base } => coeff * base.powi(n as i32),
            };
            if !v.is_finite() || v.abs() > MODULUS_CAP {
                break;
            }
            out.push(Complex64::new(v, 0.0));
        }
        out
    }

    pub fn modulus_growth(&self) -> ModulusGrowth {
        match *self {
            SequenceFormula::Power { exp: 1, .. } => ModulusGrowth::Linear,
            _ => ModulusGrowth::Superlinear,
        }
    }
}

impl std::fmt::Display for SequenceFormula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            SequenceFormula::Power { coeff, exp } => {
                if coeff != 1.0 {
                    write!(f, "{coeff}*")?;
                }
                if exp == 1 {
                    write!(f, "n")
                } else {
                    write!(f, "n^{exp}")
                }
            }
            SequenceFormula::Exponential { coeff, base } => {
                if coeff != 1.0 {
                    write!(f, "{coeff}*")?;
                }
                write!(f, "{base}^n")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_usual_shapes() {
        assert_eq!(
            SequenceFormula::parse("n").unwrap(),
            SequenceFormula::Power { coeff: 1.0, exp: 1 }
        );
        assert_eq!(
            SequenceFormula::parse("n^2").unwrap(),
            SequenceFormula::Power { coeff: 1.0, exp: 2 }
        );
        assert_eq!(
            SequenceFormula::parse("3*2^n").unwrap(),
            SequenceFormula::Exponential { coeff: 3.0, base: 2.0 }
        );
        assert_eq!(
            SequenceFormula::parse("3^n").unwrap(),
            SequenceFormula::Exponential { coeff: 1.0, base: 3.0 }
        );
        assert!(SequenceFormula::parse("log n").is_err());
        assert!(SequenceFormula::parse("0.5^n").is_err());
    }

    #[test]
    fn geometric_generation_stops_before_overflow() {
        let f = SequenceFormula::parse("3*2^n").unwrap();
        let terms = f.generate(100_000);
        assert!(terms.len() < 1100);
        assert!(terms.iter().all(|t| t.re.is_finite()));
        assert_eq!(terms[0].re, 6.0);
        assert_eq!(terms[3].re, 48.0);
    }

    #[test]
    fn growth_classification() {
        assert_eq!(
            SequenceFormula::parse("2*n").unwrap().modulus_growth(),
            ModulusGrowth::Linear
        );
        assert_eq!(
            SequenceFormula::parse("n^2").unwrap().modulus_growth(),
            ModulusGrowth::Superlinear
        );
    }

    #[test]
    fn display_roundtrip() {
        for text in ["n", "n^2", "3*2^n", "2*n", "1.5^n"] {
            let f = SequenceFormula::parse(text).unwrap();
            let g = SequenceFormula::parse(&f.to_string()).unwrap();
            assert_eq!(f, g);
        }
    }
}
