//! Complex polynomials (dense, ascending coefficients) and exact
//! Gaussian-rational polynomials with a rank/unrank bijection onto the
//! positive integers.

use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

/// Polynomial with complex coefficients, ascending powers. Trailing zero
/// coefficients are trimmed on construction, so `degree` is well defined
/// (the zero polynomial has an empty coefficient list).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::ZERO) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Poly::new(vec![c])
    }

    /// p(z) = z
    pub fn identity() -> Self {
        Poly::new(vec![Complex64::ZERO, Complex64::ONE])
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    #[inline]
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| c * (i as f64 + 1.0))
                .collect(),
        )
    }

    /// Taylor coefficients of `p` at `center`: returns `t` with
    /// `p(z) = sum t[k] (z - center)^k`, by repeated synthetic division.
    pub fn taylor_at(&self, center: Complex64) -> Vec<Complex64> {
        let n = self.coeffs.len();
        if n == 0 {
            return Vec::new();
        }
        let mut work = self.coeffs.clone();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            // divide work by (z - center); remainder is the k-th Taylor coeff
            for i in (k..n - 1).rev() {
                let high = work[i + 1];
                work[i] += high * center;
            }
            out.push(work[k]);
        }
        out
    }

    /// Max of |p| over `samples` points of the circle `|z| = radius`.
    pub fn max_modulus_on_circle(&self, radius: f64, samples: usize) -> f64 {
        let tau = std::f64::consts::TAU;
        (0..samples)
            .map(|i| {
                self.eval(Complex64::from_polar(radius, tau * i as f64 / samples as f64))
                    .norm()
            })
            .fold(0.0, f64::max)
    }
}

/// A Gaussian rational: re + im*i with exact rational parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rational64,
    pub im: Rational64,
}

impl GaussianRational {
    pub fn zero() -> Self {
        GaussianRational {
            re: Rational64::from_integer(0),
            im: Rational64::from_integer(0),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re == Rational64::from_integer(0) && self.im == Rational64::from_integer(0)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(
            *self.re.numer() as f64 / *self.re.denom() as f64,
            *self.im.numer() as f64 / *self.im.denom() as f64,
        )
    }
}

/// Polynomial with Gaussian-rational coefficients, ascending powers, leading
/// coefficient nonzero (empty list encodes the zero polynomial).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<GaussianRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn to_poly(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c.to_complex()).collect())
    }
}

// ---------------------------------------------------------------------------
// Rank/unrank machinery.
//
// The enumeration is a fixed bijection j in {1, 2, ...} -> QPoly built from:
//   * Cantor pairing pi(a, b) = (a+b)(a+b+1)/2 + b on non-negative integers,
//   * the Calkin-Wilf bijection n in {1, 2, ...} -> positive rationals,
//   * signs folded in by parity: e_Q(0) = 0, e_Q(2k-1) = CW(k), e_Q(2k) = -CW(k),
//   * e_G(n) = e_Q(a) + i e_Q(b) where (a, b) = unpair(n),
//   * nonzero Gaussian rationals via e_nz(n) = e_G(n + 1).
//
// j = 1 is the zero polynomial. For j >= 2 let (d, t) = unpair(j - 2); if
// d = 0 the polynomial is the constant e_nz(t); otherwise (u, v) = unpair(t),
// the leading coefficient is e_nz(v) and u encodes the lower d coefficients
// as a right-nested Cantor tuple.
// ---------------------------------------------------------------------------

fn pair(a: u64, b: u64) -> u64 {
    let (a, b) = (a as u128, b as u128);
    let s = a + b;
    u64::try_from(s * (s + 1) / 2 + b).expect("pairing overflow")
}

fn unpair(n: u64) -> (u64, u64) {
    let n = n as u128;
    // s = floor((sqrt(8n+1) - 1) / 2)
    let mut s = (((8.0 * n as f64 + 1.0).sqrt() - 1.0) / 2.0) as u128;
    while s * (s + 1) / 2 > n {
        s -= 1;
    }
    while (s + 1) * (s + 2) / 2 <= n {
        s += 1;
    }
    let b = n - s * (s + 1) / 2;
    ((s - b) as u64, b as u64)
}

/// Calkin-Wilf: the n-th positive rational (n >= 1), by reading the binary
/// expansion of n below its leading bit as a root-to-node path.
fn calkin_wilf(n: u64) -> Rational64 {
    debug_assert!(n >= 1);
    let (mut num, mut den) = (1i64, 1i64);
    if n > 1 {
        let bits = 63 - n.leading_zeros();
        for shift in (0..bits).rev() {
            if (n >> shift) & 1 == 0 {
                den += num; // left child: a / (a + b)
            } else {
                num += den; // right child: (a + b) / b
            }
        }
    }
    Rational64::new(num, den)
}

fn calkin_wilf_rank(q: Rational64) -> Option<u64> {
    let (mut num, mut den) = (*q.numer(), *q.denom());
    if num <= 0 || den <= 0 {
        return None;
    }
    let mut bits = Vec::new();
    while num != 1 || den != 1 {
        if num > den {
            bits.push(1u64);
            num -= den;
        } else {
            bits.push(0u64);
            den -= num;
        }
        if bits.len() > 62 {
            return None;
        }
    }
    let mut n = 1u64;
    for &b in bits.iter().rev() {
        n = n.checked_mul(2)?.checked_add(b)?;
    }
    Some(n)
}

fn rational_unrank(n: u64) -> Rational64 {
    if n == 0 {
        Rational64::from_integer(0)
    } else if n % 2 == 1 {
        calkin_wilf(n / 2 + 1)
    } else {
        -calkin_wilf(n / 2)
    }
}

fn rational_rank(q: Rational64) -> Option<u64> {
    if q == Rational64::from_integer(0) {
        Some(0)
    } else if q > Rational64::from_integer(0) {
        Some(2 * calkin_wilf_rank(q)? - 1)
    } else {
        Some(2 * calkin_wilf_rank(-q)?)
    }
}

fn gaussian_unrank(n: u64) -> GaussianRational {
    let (a, b) = unpair(n);
    GaussianRational {
        re: rational_unrank(a),
        im: rational_unrank(b),
    }
}

fn gaussian_rank(g: GaussianRational) -> Option<u64> {
    Some(pair(rational_rank(g.re)?, rational_rank(g.im)?))
}

fn nonzero_gaussian_unrank(n: u64) -> GaussianRational {
    gaussian_unrank(n + 1)
}

fn nonzero_gaussian_rank(g: GaussianRational) -> Option<u64> {
    let n = gaussian_rank(g)?;
    n.checked_sub(1)
}

/// Decode a right-nested Cantor tuple of length `len`.
fn tuple_unrank(mut u: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for slot in (1..len).rev() {
        let (rest, last) = unpair(u);
        out[slot] = last;
        u = rest;
    }
    if len > 0 {
        out[0] = u;
    }
    out
}

fn tuple_rank(parts: &[u64]) -> u64 {
    let mut u = parts[0];
    for &p in &parts[1..] {
        u = pair(u, p);
    }
    u
}

/// The `j`-th polynomial of the fixed enumeration of Q+iQ polynomials
/// (`j >= 1`; `j = 1` is the zero polynomial).
pub fn qpoly_unrank(j: u64) -> QPoly {
    assert!(j >= 1, "enumeration starts at j = 1");
    if j == 1 {
        return QPoly::zero();
    }
    let (d, t) = unpair(j - 2);
    let d = d as usize;
    if d == 0 {
        return QPoly::new(vec![nonzero_gaussian_unrank(t)]);
    }
    let (u, v) = unpair(t);
    let lower = tuple_unrank(u, d);
    let mut coeffs: Vec<GaussianRational> = lower.into_iter().map(gaussian_unrank).collect();
    coeffs.push(nonzero_gaussian_unrank(v));
    QPoly::new(coeffs)
}

/// Index of `p` in the enumeration; `None` when intermediate ranks overflow
/// u64 (coefficients with huge continued-fraction expansions).
pub fn qpoly_rank(p: &QPoly) -> Option<u64> {
    if p.coeffs.is_empty() {
        return Some(1);
    }
    let d = p.coeffs.len() - 1;
    if d == 0 {
        let t = nonzero_gaussian_rank(p.coeffs[0])?;
        return pair(0, t).checked_add(2);
    }
    let lower: Vec<u64> = p.coeffs[..d]
        .iter()
        .map(|&c| gaussian_rank(c))
        .collect::<Option<_>>()?;
    let u = tuple_rank(&lower);
    let v = nonzero_gaussian_rank(p.coeffs[d])?;
    pair(d as u64, pair(u, v)).checked_add(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner_eval() {
        let p = Poly::from_real(&[1.0, -2.0, 3.0]);
        let z = Complex64::new(0.5, -1.5);
        let direct = Complex64::new(1.0, 0.0) - 2.0 * z + 3.0 * z * z;
        assert!((p.eval(z) - direct).norm() < 1e-14);
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let p = Poly::new(vec![Complex64::ONE, Complex64::ZERO, Complex64::ZERO]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(Poly::zero().degree(), None);
    }

    #[test]
    fn derivative_and_taylor() {
        // p(z) = (z - 2)^3 = z^3 - 6z^2 + 12z - 8
        let p = Poly::from_real(&[-8.0, 12.0, -6.0, 1.0]);
        let t = p.taylor_at(Complex64::new(2.0, 0.0));
        for (k, expect) in [(0usize, 0.0), (1, 0.0), (2, 0.0), (3, 1.0)] {
            assert!((t[k] - expect).norm() < 1e-12, "taylor[{k}]");
        }
        let dp = p.derivative();
        assert!((dp.eval(Complex64::ZERO) - Complex64::new(12.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn calkin_wilf_first_terms() {
        let expect = [(1, 1), (1, 2), (2, 1), (1, 3), (3, 2), (2, 3), (3, 1)];
        for (i, &(n, d)) in expect.iter().enumerate() {
            assert_eq!(calkin_wilf(i as u64 + 1), Rational64::new(n, d));
        }
    }

    #[test]
    fn enumeration_starts_with_zero_polynomial() {
        assert!(qpoly_unrank(1).coeffs().is_empty());
        // j = 2 decodes to the constant 1
        let p2 = qpoly_unrank(2);
        assert_eq!(p2.coeffs().len(), 1);
        assert_eq!(p2.coeffs()[0].re, Rational64::from_integer(1));
        assert_eq!(p2.coeffs()[0].im, Rational64::from_integer(0));
    }

    #[test]
    fn rank_unrank_roundtrip() {
        for j in 1..=10_000u64 {
            let p = qpoly_unrank(j);
            assert_eq!(qpoly_rank(&p), Some(j), "roundtrip failed at j = {j}");
        }
    }

    #[test]
    fn known_polynomials_have_finite_rank() {
        // p(z) = z
        let z = QPoly::new(vec![
            GaussianRational::zero(),
            GaussianRational {
                re: Rational64::from_integer(1),
                im: Rational64::from_integer(0),
            },
        ]);
        let j = qpoly_rank(&z).unwrap();
        assert_eq!(qpoly_unrank(j), z);
        assert_eq!(j, 3);

        // p(z) = 1/2 - (3/4) i z^2
        let p = QPoly::new(vec![
            GaussianRational {
                re: Rational64::new(1, 2),
                im: Rational64::from_integer(0),
            },
            GaussianRational::zero(),
            GaussianRational {
                re: Rational64::from_integer(0),
                im: Rational64::new(-3, 4),
            },
        ]);
        let j = qpoly_rank(&p).unwrap();
        assert_eq!(qpoly_unrank(j), p);
    }
}
