//! Compensated summation and small floating-point helpers shared by the
//! partition, sequence and claim checkers.

/// Neumaier-compensated accumulator. The compensation term also rescues the
/// case where the running sum is smaller than the addend, which plain Kahan
/// gets wrong.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_value(v: f64) -> Self {
        Self { sum: v, comp: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of an iterator of f64.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = KahanSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Suffix sums `S[i] = sum_{k >= i} 1/moduli[k]` (0-based, `S[len] = 0`),
/// each entry compensated.
pub fn reciprocal_suffix_sums(moduli: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; moduli.len() + 1];
    let mut acc = KahanSum::new();
    for (i, &m) in moduli.iter().enumerate().rev() {
        acc.add(1.0 / m);
        out[i] = acc.value();
    }
    out
}

/// Chord length between two points of the circle of radius `r`:
/// `|r e^{2 pi i t2} - r e^{2 pi i t1}| = 2 r sin(pi (t2 - t1))`
/// for `0 <= t2 - t1 <= 1/2`.
pub fn chord(r: f64, t1: f64, t2: f64) -> f64 {
    2.0 * r * (std::f64::consts::PI * (t2 - t1)).sin()
}

/// Indices 1, 2, 4, ..., capped at `n` (inclusive, `n` always present).
pub fn dyadic_checkpoints(n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut c = 1usize;
    while c < n {
        out.push(c);
        c *= 2;
    }
    if n > 0 {
        out.push(n);
    }
    out
}

/// Number of representable doubles strictly between a and b (saturating).
pub fn ulps_between(a: f64, b: f64) -> u64 {
    if a == b {
        return 0;
    }
    if a.is_nan() || b.is_nan() || a.signum() != b.signum() {
        return u64::MAX;
    }
    let (lo, hi) = if a.abs() < b.abs() { (a, b) } else { (b, a) };
    (hi.abs().to_bits()).saturating_sub(lo.abs().to_bits())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_recovers_cancelled_digits() {
        let mut acc = KahanSum::new();
        acc.add(1.0);
        for _ in 0..10_000_000 {
            acc.add(1e-17);
        }
        let exact = 1.0 + 1e-10;
        assert!((acc.value() - exact).abs() < 1e-15);

        // naive summation loses the tail entirely
        let mut naive = 1.0;
        for _ in 0..10_000_000 {
            naive += 1e-17;
        }
        assert_eq!(naive, 1.0);
    }

    #[test]
    fn suffix_sums_match_direct() {
        let m: Vec<f64> = (1..=100).map(|k| (10 * k) as f64).collect();
        let s = reciprocal_suffix_sums(&m);
        let direct: f64 = m.iter().map(|v| 1.0 / v).sum();
        assert!((s[0] - direct).abs() < 1e-14);
        assert_eq!(s[100], 0.0);
        assert!((s[99] - 1.0 / 1000.0).abs() < 1e-18);
    }

    #[test]
    fn chord_matches_complex_arithmetic() {
        use num_complex::Complex64;
        let tau = std::f64::consts::TAU;
        for &(t1, t2) in &[(0.0, 0.1), (0.03, 0.27), (0.2, 0.45), (0.0, 0.5)] {
            let a = Complex64::from_polar(2.5, tau * t1);
            let b = Complex64::from_polar(2.5, tau * t2);
            assert!(((b - a).norm() - chord(2.5, t1, t2)).abs() < 1e-12);
        }
    }

    #[test]
    fn jordan_inequality_on_quarter_turn() {
        // sin(pi x) > 2 x for x in (0, 1/4); sampled
        for i in 1..2500 {
            let x = i as f64 * 1e-4;
            assert!((std::f64::consts::PI * x).sin() > 2.0 * x, "x = {x}");
        }
    }

    #[test]
    fn dyadic_points() {
        assert_eq!(dyadic_checkpoints(10), vec![1, 2, 4, 8, 10]);
        assert_eq!(dyadic_checkpoints(8), vec![1, 2, 4, 8]);
        assert_eq!(dyadic_checkpoints(1), vec![1]);
        assert!(dyadic_checkpoints(0).is_empty());
    }

    #[test]
    fn ulp_distance() {
        assert_eq!(ulps_between(1.0, 1.0), 0);
        assert_eq!(ulps_between(1.0, 1.0 + f64::EPSILON), 1);
        assert!(ulps_between(1.0, 1.0000001) > 4);
    }
}
