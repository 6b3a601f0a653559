//! Interval partitions of `[theta0, theta_T]` and their images on the circle
//! of radius `r0`: the stopping time, the block period `sigma_m`, the cutoff
//! `nu_m`, the point-to-subsequence-term assignment and the bracket lookup
//! used by the verification stage.
//!
//! All `m` arguments are 1-based indices into the gap subsequence, matching
//! the reports; partition point indices `nu` are 0-based.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::KahanSum;
use crate::sequences::GapSubsequence;

/// Fixed geometry parameters plus the four derived constants.
///
/// `m0` is unset until a gap subsequence has been bound via [`compute_m0`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub r0: f64,
    pub theta0: f64,
    pub theta_t: f64,
    /// Bounding radius R1 (covers the evaluation disk and the compact set).
    pub r1: f64,
    pub delta0: f64,
    pub s1: u32,
    pub k1: u32,
    pub eps0: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub m0: Option<usize>,
}

const ARC_LEN_TOL: f64 = 1e-12;

impl ConstructionParams {
    /// Derive `c1..c4` from the geometry:
    /// `c4 = R1 + delta0`, `c2 = delta0 / (2 (2 pi r0 + 1))`,
    /// `c3 = c4 / (r0 c2)`, `c1 = 4 (c3 + 1)`.
    #[allow(clippy::too_many_arguments)]
    pub fn derive(
        r0: f64,
        theta0: f64,
        theta_t: f64,
        r1: f64,
        delta0: f64,
        s1: u32,
        k1: u32,
        eps0: f64,
    ) -> Result<Self> {
        if !(r0 > 0.0) || !r0.is_finite() {
            return Err(Error::parameter("r0", "must be a positive real"));
        }
        if !(0.0..1.0).contains(&theta0) || !(theta_t <= 1.0) || theta0 >= theta_t {
            return Err(Error::parameter(
                "theta0/theta_t",
                "need 0 <= theta0 < theta_t <= 1",
            ));
        }
        if (theta_t - theta0 - 0.25).abs() > ARC_LEN_TOL {
            return Err(Error::parameter(
                "theta_t",
                format!("arc length must be exactly 1/4, got {}", theta_t - theta0),
            ));
        }
        if !(delta0 > 0.0 && delta0 < 1.0) {
            return Err(Error::parameter("delta0", "must lie in the open interval (0, 1)"));
        }
        if s1 < 1 {
            return Err(Error::parameter("s1", "must be a positive integer"));
        }
        if k1 < 1 {
            return Err(Error::parameter("k1", "must be a positive integer"));
        }
        if (k1 as f64) > r1 {
            return Err(Error::parameter("k1", "must not exceed the bounding radius R1"));
        }
        if !(eps0 > 0.0) {
            return Err(Error::parameter("eps0", "must be positive"));
        }
        let c4 = r1 + delta0;
        let c2 = delta0 / (2.0 * (2.0 * r0 * std::f64::consts::PI + 1.0));
        let c3 = c4 / (r0 * c2);
        let c1 = 4.0 * (c3 + 1.0);
        let params = ConstructionParams {
            r0,
            theta0,
            theta_t,
            r1,
            delta0,
            s1,
            k1,
            eps0,
            c1,
            c2,
            c3,
            c4,
            m0: None,
        };
        params.check_constants()?;
        Ok(params)
    }

    /// Diagnostic constructor with the partition constants set directly
    /// (`c4 = r0 c2 c3`, `c1 = 4 (c3 + 1)`). Used for small-scale geometry
    /// work and tests; the full invariants of [`derive`](Self::derive) are
    /// not enforced here.
    pub fn from_raw_constants(r0: f64, theta0: f64, theta_t: f64, c2: f64, c3: f64) -> Self {
        let c4 = r0 * c2 * c3;
        ConstructionParams {
            r0,
            theta0,
            theta_t,
            r1: c4,
            delta0: 0.5,
            s1: 1,
            k1: 1,
            eps0: 0.25,
            c1: 4.0 * (c3 + 1.0),
            c2,
            c3,
            c4,
            m0: None,
        }
    }

    fn check_constants(&self) -> Result<()> {
        let ok = self.c1 > 1.0
            && self.c2 > 0.0
            && self.c2 < 1.0
            && self.c3 > 1.0
            && self.c4 > 1.0
            && (self.c3 - self.c4 / (self.r0 * self.c2)).abs() <= 1e-9 * self.c3
            && (self.c1 - 4.0 * (self.c3 + 1.0)).abs() <= 1e-9 * self.c1;
        if ok {
            Ok(())
        } else {
            Err(Error::Inconsistency(format!(
                "derived constants violate their ranges: c1={} c2={} c3={} c4={}",
                self.c1, self.c2, self.c3, self.c4
            )))
        }
    }

    pub fn with_m0(mut self, m0: usize) -> Self {
        self.m0 = Some(m0);
        self
    }
}

/// Smallest `m` such that the stored reciprocal tail clears `c3 / |mu_m'|`
/// for every `m'` between `m` and half the truncation (the second half is
/// excluded: its stored tails are too short to be meaningful). The result is
/// certified only for the stored prefix.
pub fn compute_m0(
    sub: &GapSubsequence,
    params: &ConstructionParams,
    truncation: usize,
) -> Result<usize> {
    let n = truncation.min(sub.len());
    if n < 2 {
        return Err(Error::InsufficientData(
            "need at least 2 subsequence terms".into(),
        ));
    }
    let window = (n / 2).max(1);
    let suffix = crate::numeric::reciprocal_suffix_sums(&sub.moduli()[..n]);
    let mut last_violation = 0usize;
    for mp in 1..=window {
        if !(suffix[mp - 1] > params.c3 / sub.modulus(mp)) {
            last_violation = mp;
        }
    }
    if last_violation == window {
        return Err(Error::TailTooThin {
            m: window,
            needed: params.c3 / sub.modulus(window),
            reached: suffix[window - 1],
        });
    }
    Ok(last_violation + 1)
}

/// The stopping time: minimal `m1 >= m` with
/// `sum_{k=m}^{m1} 1/|mu_k| > c3 / |mu_m|`. Since `c3 > 1` this always
/// returns at least `m + 1`.
pub fn compute_m1(m: usize, sub: &GapSubsequence, c3: f64) -> Result<usize> {
    if m < 1 || m > sub.len() {
        return Err(Error::parameter("m", format!("index {m} outside the stored prefix")));
    }
    let target = c3 / sub.modulus(m);
    let mut acc = KahanSum::new();
    for k in m..=sub.len() {
        acc.add(1.0 / sub.modulus(k));
        if acc.value() > target {
            return Ok(k);
        }
    }
    Err(Error::TailTooThin {
        m,
        needed: target,
        reached: acc.value(),
    })
}

/// The partition for block-start index `m`: base points from the recurrence
/// `theta_{n+1} = theta_n + c2 / |mu_{m+n}|`, extended periodically by
/// `theta_{kB+j} = theta_j + k sigma_m`, cut off at the last point `<= theta_T`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Partition {
    pub m: usize,
    pub m1: usize,
    /// B = m1 - m + 1
    pub block_len: usize,
    pub sigma: f64,
    pub nu_m: usize,
    pub thetas: Vec<f64>,
    pub theta0: f64,
    pub theta_t: f64,
    pub r0: f64,
    pub c2: f64,
    /// mu_m .. mu_{m1} (the values assigned cyclically to the points)
    pub block_terms: Vec<Complex64>,
    pub block_moduli: Vec<f64>,
}

pub fn build_partition(
    m: usize,
    sub: &GapSubsequence,
    params: &ConstructionParams,
) -> Result<Partition> {
    if let Some(m0) = params.m0 {
        if m < m0 {
            return Err(Error::Precondition(format!(
                "m = {m} is below the certified m0 = {m0}"
            )));
        }
    }
    let m1 = compute_m1(m, sub, params.c3)?;
    let b = m1 - m + 1;

    let mut base = Vec::with_capacity(b + 1);
    base.push(params.theta0);
    let mut acc = KahanSum::from_value(params.theta0);
    for k in m..=m1 {
        acc.add(params.c2 / sub.modulus(k));
        base.push(acc.value());
    }
    let sigma = base[b] - params.theta0;
    if !(sigma < 0.25) {
        return Err(Error::Inconsistency(format!(
            "sigma_m = {sigma} >= 1/4; the partition constants are corrupted"
        )));
    }

    // nu_m by column: for each residue j the largest k with
    // theta_j + k sigma <= theta_T, with floating-point guards.
    let mut nu_m = 0usize;
    for (j, &tj) in base.iter().enumerate().take(b) {
        let mut k = ((params.theta_t - tj) / sigma).floor().max(0.0) as u64;
        while tj + ((k + 1) as f64) * sigma <= params.theta_t {
            k += 1;
        }
        while k > 0 && tj + (k as f64) * sigma > params.theta_t {
            k -= 1;
        }
        nu_m = nu_m.max(k as usize * b + j);
    }
    if nu_m < b {
        return Err(Error::Inconsistency(format!(
            "nu_m = {nu_m} < block length {b}; contradicts sigma_m < 1/4"
        )));
    }
    const MAX_POINTS: usize = 200_000_000;
    if nu_m >= MAX_POINTS {
        return Err(Error::parameter(
            "m",
            format!("partition at m = {m} would carry {nu_m} points; pick a larger m"),
        ));
    }

    let mut thetas = Vec::with_capacity(nu_m + 1);
    thetas.extend_from_slice(&base[..=b.min(nu_m)]);
    for nu in (b + 1)..=nu_m {
        let (k, j) = (nu / b, nu % b);
        thetas.push(base[j] + k as f64 * sigma);
    }
    debug_assert!(thetas.windows(2).all(|w| w[0] < w[1]));
    debug_assert!(*thetas.last().expect("nonempty") <= params.theta_t);

    let block_terms: Vec<Complex64> = (m..=m1).map(|k| sub.term(k)).collect();
    let block_moduli: Vec<f64> = (m..=m1).map(|k| sub.modulus(k)).collect();
    Ok(Partition {
        m,
        m1,
        block_len: b,
        sigma,
        nu_m,
        thetas,
        theta0: params.theta0,
        theta_t: params.theta_t,
        r0: params.r0,
        c2: params.c2,
        block_terms,
        block_moduli,
    })
}

impl Partition {
    /// Mesh width at point `nu`: `c2 / |mu_{m+j}|` for `j = nu mod B`.
    pub fn mesh(&self, nu: usize) -> f64 {
        self.c2 / self.block_moduli[nu % self.block_len]
    }

    /// The subsequence term assigned to point `nu`.
    pub fn mu_at(&self, nu: usize) -> Complex64 {
        self.block_terms[nu % self.block_len]
    }

    /// 1-based index into the gap subsequence of the term assigned to `nu`.
    pub fn mu_index(&self, nu: usize) -> usize {
        self.m + nu % self.block_len
    }

    pub fn export_json(&self) -> serde_json::Value {
        serde_json::json!({
            "m": self.m,
            "m1": self.m1,
            "sigma": self.sigma,
            "nu_m": self.nu_m,
            "thetas": self.thetas,
        })
    }
}

/// A partition point mapped onto the arc, with its block decomposition
/// `n = k B + j` and assigned subsequence term.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ArcPoint {
    pub n: usize,
    pub k: usize,
    pub j: usize,
    pub w: Complex64,
    pub mu: Complex64,
}

/// The point of the arc partition at index `n`.
pub fn arc_point(part: &Partition, n: usize) -> ArcPoint {
    let b = part.block_len;
    let (k, j) = (n / b, n % b);
    ArcPoint {
        n,
        k,
        j,
        w: Complex64::from_polar(part.r0, std::f64::consts::TAU * part.thetas[n]),
        mu: part.block_terms[j],
    }
}

/// All points of the arc partition. For very large partitions prefer
/// [`arc_point`] or the disk-family constructor, which do not materialize.
pub fn arc_points(part: &Partition) -> Vec<ArcPoint> {
    (0..=part.nu_m).map(|n| arc_point(part, n)).collect()
}

/// Bracket data for a point of the arc.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LocateResult {
    pub a: Complex64,
    pub theta: f64,
    pub rho: usize,
    pub theta1: f64,
    pub theta2: f64,
    pub w0: Complex64,
    pub mu_w0: Complex64,
}

const RADIUS_REL_TOL: f64 = 1e-9;
const THETA_SNAP: f64 = 1e-12;

/// Bracket `a` between consecutive partition points (or in the terminal
/// segment `[theta_{nu_m}, theta_T]`). `a` must lie on the arc up to a
/// relative radius tolerance of 1e-9; it is projected onto the circle before
/// the parameter is extracted.
pub fn locate(a: Complex64, part: &Partition) -> Result<LocateResult> {
    let r = a.norm();
    if ((r - part.r0) / part.r0).abs() > RADIUS_REL_TOL {
        return Err(Error::Domain(format!(
            "|a| = {r} is off the circle of radius {}",
            part.r0
        )));
    }
    let mut theta = a.arg() / std::f64::consts::TAU;
    if theta < 0.0 {
        theta += 1.0;
    }
    // arcs with theta_T = 1 wrap the branch point of arg
    if theta + 1.0 <= part.theta_t + THETA_SNAP {
        theta += 1.0;
    }
    if theta < part.theta0 - THETA_SNAP || theta > part.theta_t + THETA_SNAP {
        return Err(Error::Domain(format!(
            "arg(a)/2pi = {theta} outside [{}, {}]",
            part.theta0, part.theta_t
        )));
    }
    theta = theta.clamp(part.theta0, part.theta_t);
    // snap onto a partition point when within round-trip noise of one
    let mut rho = part.thetas.partition_point(|&t| t <= theta) - 1;
    if rho + 1 <= part.nu_m && (part.thetas[rho + 1] - theta).abs() <= THETA_SNAP {
        rho += 1;
    }
    if (part.thetas[rho] - theta).abs() <= THETA_SNAP {
        theta = part.thetas[rho];
    }
    let (theta1, theta2) = if rho == part.nu_m {
        (part.thetas[rho], part.theta_t)
    } else {
        (part.thetas[rho], part.thetas[rho + 1])
    };
    debug_assert!(theta1 <= theta && theta <= theta2);
    debug_assert!(theta2 - theta1 <= part.mesh(rho) + 1e-15);
    Ok(LocateResult {
        a,
        theta,
        rho,
        theta1,
        theta2,
        w0: Complex64::from_polar(part.r0, std::f64::consts::TAU * theta1),
        mu_w0: part.mu_at(rho),
    })
}
