//! Candidate sequences, gap subsequences, divergence-condition checkers and
//! the explicit block families interpolating between the two condition
//! classes.
//!
//! The divergence conditions are asymptotic statements; every checker here
//! returns a finite-truncation *proxy* verdict with the thresholds it used
//! recorded in the report. The only exception is the analytic path for
//! formula-backed sequences of linear modulus growth.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{ModulusGrowth, SequenceFormula};
use crate::numeric::{dyadic_checkpoints, reciprocal_suffix_sums, ulps_between, KahanSum};

/// Where a sequence came from; formula provenance enables analytic verdicts.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    UserSupplied,
    Generated { ratio: f64, blocks: usize },
    Formula(SequenceFormula),
}

/// A stored prefix of a sequence of non-zero complex numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Sequence {
    terms: Vec<Complex64>,
    provenance: Provenance,
}

/// Serialized form: `{"provenance": ..., "terms": [[re, im], ...],
/// "formula": ...?, "generator": {...}?}`.
#[derive(Serialize, Deserialize)]
struct SequenceFile {
    provenance: String,
    terms: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    formula: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", rename = "generator")]
    generator: Option<GeneratorMeta>,
}

#[derive(Serialize, Deserialize)]
struct GeneratorMeta {
    #[serde(rename = "M")]
    ratio: f64,
    blocks: usize,
}

impl Sequence {
    /// Every term must be nonzero and finite.
    pub fn new(terms: Vec<Complex64>, provenance: Provenance) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::parameter("terms", "sequence prefix is empty"));
        }
        for (i, t) in terms.iter().enumerate() {
            if t.norm() == 0.0 || !t.re.is_finite() || !t.im.is_finite() {
                return Err(Error::parameter(
                    "terms",
                    format!("term {} is zero or non-finite", i + 1),
                ));
            }
        }
        Ok(Sequence { terms, provenance })
    }

    pub fn from_formula(formula: SequenceFormula, len: usize) -> Result<Self> {
        let terms = formula.generate(len);
        Sequence::new(terms, Provenance::Formula(formula))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Complex64] {
        &self.terms
    }

    /// 1-based accessor matching the index convention of the reports.
    pub fn term(&self, n: usize) -> Complex64 {
        self.terms[n - 1]
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn formula(&self) -> Option<SequenceFormula> {
        match self.provenance {
            Provenance::Formula(f) => Some(f),
            _ => None,
        }
    }

    /// Finite-prefix proxy for "moduli tend to infinity": every stored index
    /// either has a later term exceeding its modulus by more than 1, or sits
    /// within 1 of the prefix maximum (where no truncation could contain a
    /// witness).
    pub fn growth_proxy_ok(&self) -> bool {
        let moduli: Vec<f64> = self.terms.iter().map(|t| t.norm()).collect();
        let global_max = moduli.iter().cloned().fold(0.0, f64::max);
        let mut suffix_max = f64::NEG_INFINITY;
        let mut ok = true;
        for i in (0..moduli.len()).rev() {
            let exempt = moduli[i] + 1.0 >= global_max;
            if !exempt && suffix_max <= moduli[i] + 1.0 {
                ok = false;
                break;
            }
            suffix_max = suffix_max.max(moduli[i]);
        }
        ok
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (prov, formula, generator) = match &self.provenance {
            Provenance::UserSupplied => ("user-supplied", None, None),
            Provenance::Generated { ratio, blocks } => (
                "generated",
                None,
                Some(GeneratorMeta {
                    ratio: *ratio,
                    blocks: *blocks,
                }),
            ),
            Provenance::Formula(f) => ("formula", Some(f.to_string()), None),
        };
        serde_json::to_value(SequenceFile {
            provenance: prov.to_string(),
            terms: self.terms.iter().map(|t| [t.re, t.im]).collect(),
            formula,
            generator,
        })
        .expect("sequence serialization cannot fail")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let file: SequenceFile = serde_json::from_value(value.clone())?;
        let terms = file
            .terms
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        let provenance = match file.provenance.as_str() {
            "user-supplied" => Provenance::UserSupplied,
            "generated" => {
                let meta = file.generator.ok_or_else(|| {
                    Error::parameter("generator", "generated sequence file lacks generator metadata")
                })?;
                Provenance::Generated {
                    ratio: meta.ratio,
                    blocks: meta.blocks,
                }
            }
            "formula" => {
                let text = file
                    .formula
                    .ok_or_else(|| Error::parameter("formula", "formula provenance without formula"))?;
                Provenance::Formula(SequenceFormula::parse(&text)?)
            }
            other => {
                return Err(Error::parameter(
                    "provenance",
                    format!("unknown provenance `{other}`"),
                ))
            }
        };
        Sequence::new(terms, provenance)
    }
}

/// A gap subsequence: strictly increasing indices into the parent with
/// `|mu_1| > gap` and `|mu_{k+1}| - |mu_k| > gap`.
#[derive(Debug, Clone)]
pub struct GapSubsequence {
    indices: Vec<usize>, // 0-based into the parent
    terms: Vec<Complex64>,
    moduli: Vec<f64>,
    gap: f64,
    exhausted: bool,
}

impl GapSubsequence {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    /// True when the parent prefix ran out before `max_len` terms were found.
    pub fn exhausted(&self) -> bool {
        self.exhausted
    }

    /// 1-based: |mu_k|.
    pub fn modulus(&self, k: usize) -> f64 {
        self.moduli[k - 1]
    }

    /// 1-based: mu_k.
    pub fn term(&self, k: usize) -> Complex64 {
        self.terms[k - 1]
    }

    /// 1-based index into the parent sequence (the n with lambda_n = mu_k).
    pub fn parent_index(&self, k: usize) -> usize {
        self.indices[k - 1] + 1
    }

    pub fn moduli(&self) -> &[f64] {
        &self.moduli
    }

    pub fn terms(&self) -> &[Complex64] {
        &self.terms
    }
}

/// Greedy gap extraction: take the earliest term with modulus above `gap`,
/// then repeatedly the earliest later term whose modulus exceeds the previous
/// pick by more than `gap`.
pub fn extract_gap_subsequence(
    seq: &Sequence,
    gap: f64,
    max_len: usize,
) -> Result<GapSubsequence> {
    if !(gap > 0.0) {
        return Err(Error::parameter("gap", "must be positive"));
    }
    if max_len == 0 {
        return Err(Error::parameter("max_len", "must be at least 1"));
    }
    let mut indices = Vec::new();
    let mut terms = Vec::new();
    let mut moduli = Vec::new();
    let mut threshold = gap;
    for (i, &t) in seq.terms().iter().enumerate() {
        let m = t.norm();
        if m > threshold {
            indices.push(i);
            terms.push(t);
            moduli.push(m);
            threshold = m + gap;
            if terms.len() == max_len {
                return Ok(GapSubsequence {
                    indices,
                    terms,
                    moduli,
                    gap,
                    exhausted: false,
                });
            }
        }
    }
    if terms.is_empty() {
        return Err(Error::InsufficientGrowth { gap });
    }
    Ok(GapSubsequence {
        indices,
        terms,
        moduli,
        gap,
        exhausted: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConditionKind {
    #[serde(rename = "C")]
    C,
    #[serde(rename = "sigma")]
    Sigma,
    #[serde(rename = "liminf-ratio")]
    LiminfRatio,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionVerdict {
    /// The finite-truncation diagnostics are consistent with the condition.
    PassesProxy,
    /// The diagnostics contradict the condition at this truncation.
    FailsProxy,
    /// For the ratio criterion: the stored prefix satisfies the exclusion
    /// hypothesis (every consecutive ratio above 2).
    ProvablyFails,
    /// Divergence follows from the formula metadata, not from the numerics.
    AnalyticPass,
}

/// Diagnostics plus verdict for one condition check. `evidence` holds the
/// diagnostic value at each index of `evidence_indices` (dyadic checkpoints).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: ConditionKind,
    pub gap: f64,
    pub truncation: usize,
    pub threshold: f64,
    pub evidence: Vec<f64>,
    pub evidence_indices: Vec<usize>,
    /// Maxima of the diagnostic over the dyadic sub-truncations N/8..N
    /// (condition C) or the partial-sum increments used for the plateau test.
    pub checkpoint_values: Vec<f64>,
    pub peak: f64,
    pub verdict: ConditionVerdict,
    pub note: String,
}

const MIN_SUBSEQUENCE_LEN: usize = 10;

fn require_gap_len(sub: &GapSubsequence) -> Result<()> {
    if sub.len() < MIN_SUBSEQUENCE_LEN {
        return Err(Error::InsufficientData(format!(
            "gap subsequence has only {} terms within the stored prefix (need {})",
            sub.len(),
            MIN_SUBSEQUENCE_LEN
        )));
    }
    Ok(())
}

/// Condition (C) proxy: extracts the gap subsequence and evaluates
/// `L_n = |mu_n| * sum_{k=n}^{N} 1/|mu_k|`. Passes when the peak exceeds
/// `growth_threshold` and the peaks over the dyadic sub-truncations
/// N/8, N/4, N/2, N are strictly increasing.
pub fn check_condition_c(
    seq: &Sequence,
    gap: f64,
    truncation: usize,
    growth_threshold: f64,
) -> Result<ConditionReport> {
    if truncation < MIN_SUBSEQUENCE_LEN {
        return Err(Error::parameter("truncation", "must be at least 10"));
    }
    if !(growth_threshold > 0.0) {
        return Err(Error::parameter("growth_threshold", "must be positive"));
    }
    let sub = extract_gap_subsequence(seq, gap, truncation)?;
    require_gap_len(&sub)?;
    let n = sub.len();
    let suffix = reciprocal_suffix_sums(sub.moduli());

    let l_at = |i: usize, cut: usize| -> f64 {
        // L_i truncated at index `cut` (both 1-based, i <= cut)
        sub.modulus(i) * (suffix[i - 1] - suffix[cut])
    };

    let cuts: Vec<usize> = [n / 8, n / 4, n / 2, n]
        .into_iter()
        .filter(|&c| c >= MIN_SUBSEQUENCE_LEN)
        .collect();
    let mut maxima = Vec::with_capacity(cuts.len());
    for &cut in &cuts {
        let mut best = f64::NEG_INFINITY;
        for i in 1..=cut {
            best = best.max(l_at(i, cut));
        }
        maxima.push(best);
    }
    let peak = *maxima.last().expect("at least the full truncation");
    let strictly_growing = maxima.windows(2).all(|w| w[1] > w[0]);
    let verdict = if peak > growth_threshold && strictly_growing {
        ConditionVerdict::PassesProxy
    } else {
        ConditionVerdict::FailsProxy
    };

    let evidence_indices = dyadic_checkpoints(n);
    let evidence = evidence_indices.iter().map(|&i| l_at(i, n)).collect();
    Ok(ConditionReport {
        condition: ConditionKind::C,
        gap,
        truncation: n,
        threshold: growth_threshold,
        evidence,
        evidence_indices,
        checkpoint_values: maxima,
        peak,
        verdict,
        note: format!(
            "finite-truncation proxy over {n} subsequence terms; peak L = {peak:.6e}, \
             dyadic sub-truncation peaks {} strictly increasing; not a proof",
            if strictly_growing { "are" } else { "are NOT" }
        ),
    })
}

/// Condition (Sigma) proxy: partial sums of `1/|mu_n|` must clear `threshold`
/// without plateauing (the second half of the prefix must contribute at least
/// 2% of the total). Linear-growth formula sequences pass analytically.
pub fn check_condition_sigma(
    seq: &Sequence,
    gap: f64,
    truncation: usize,
    threshold: f64,
) -> Result<ConditionReport> {
    if truncation < MIN_SUBSEQUENCE_LEN {
        return Err(Error::parameter("truncation", "must be at least 10"));
    }
    if !(threshold > 0.0) {
        return Err(Error::parameter("threshold", "must be positive"));
    }
    let sub = extract_gap_subsequence(seq, gap, truncation)?;
    require_gap_len(&sub)?;
    let n = sub.len();

    let mut acc = KahanSum::new();
    let mut partial = Vec::with_capacity(n);
    for k in 1..=n {
        acc.add(1.0 / sub.modulus(k));
        partial.push(acc.value());
    }
    let total = partial[n - 1];
    let half = partial[n / 2 - 1];
    let tail_fraction = (total - half) / total.max(f64::MIN_POSITIVE);
    let plateaued = tail_fraction < 0.02;

    let analytic = seq
        .formula()
        .is_some_and(|f| f.modulus_growth() == ModulusGrowth::Linear);

    let verdict = if analytic {
        ConditionVerdict::AnalyticPass
    } else if total > threshold && !plateaued {
        ConditionVerdict::PassesProxy
    } else {
        ConditionVerdict::FailsProxy
    };

    let evidence_indices = dyadic_checkpoints(n);
    let evidence = evidence_indices.iter().map(|&i| partial[i - 1]).collect();
    let note = if analytic {
        "formula has linear modulus growth: greedy extraction advances by at most \
         gap + step per pick, so the reciprocal sums diverge; analytic verdict"
            .to_string()
    } else {
        format!(
            "finite-truncation proxy; partial sum {total:.6e} at N={n}, \
             second-half contribution {:.2}%; not a proof",
            100.0 * tail_fraction
        )
    };
    Ok(ConditionReport {
        condition: ConditionKind::Sigma,
        gap,
        truncation: n,
        threshold,
        evidence,
        evidence_indices,
        checkpoint_values: vec![half, total],
        peak: total,
        verdict,
        note,
    })
}

/// Exclusion criterion: sequences with liminf |lambda_{n+1}| / |lambda_n| > 2
/// admit no common hypercyclic vector over the circle. The proxy flags
/// `provably-fails` when every suffix infimum of the stored ratios exceeds 2.
pub fn check_liminf_ratio(seq: &Sequence, truncation: usize) -> Result<ConditionReport> {
    if truncation < 2 {
        return Err(Error::parameter("truncation", "must be at least 2"));
    }
    let n = truncation.min(seq.len());
    if n < 2 {
        return Err(Error::InsufficientData(
            "need at least two stored terms for ratio scanning".into(),
        ));
    }
    let ratios: Vec<f64> = (1..n)
        .map(|i| seq.term(i + 1).norm() / seq.term(i).norm())
        .collect();
    let mut suffix_min = vec![f64::INFINITY; ratios.len() + 1];
    for i in (0..ratios.len()).rev() {
        suffix_min[i] = suffix_min[i + 1].min(ratios[i]);
    }
    let evidence_indices = dyadic_checkpoints(ratios.len());
    let evidence: Vec<f64> = evidence_indices.iter().map(|&t| suffix_min[t - 1]).collect();
    let flagged = suffix_min[0] > 2.0;
    Ok(ConditionReport {
        condition: ConditionKind::LiminfRatio,
        gap: 0.0,
        truncation: n,
        threshold: 2.0,
        evidence,
        evidence_indices,
        checkpoint_values: vec![suffix_min[0]],
        peak: suffix_min[0],
        verdict: if flagged {
            ConditionVerdict::ProvablyFails
        } else {
            ConditionVerdict::PassesProxy
        },
        note: if flagged {
            format!(
                "every stored consecutive modulus ratio exceeds 2 (min {:.6}); the prefix \
                 satisfies the non-existence hypothesis",
                suffix_min[0]
            )
        } else {
            format!(
                "minimum stored consecutive modulus ratio is {:.6} <= 2; the non-existence \
                 criterion does not apply to this prefix",
                suffix_min[0]
            )
        },
    })
}

/// One block of the generated family: values `(a + nu)^2` for
/// `nu = 0..=floor(a)+1` (the first block is just `{1}`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Block {
    pub a: f64,
    pub values: Vec<f64>,
}

/// The explicit family realizing `i(Lambda) = M`: geometric jumps of ratio
/// exactly `M` between blocks of consecutive squares.
#[derive(Debug, Clone)]
pub struct GeneratedSequence {
    ratio: f64,
    blocks: Vec<Block>,
    enumeration: Sequence,
}

const MAX_ENUMERATION_LEN: usize = 50_000_000;

/// Build the block family for `M > 1`.
pub fn generate_prop51_sequence(ratio: f64, num_blocks: usize) -> Result<GeneratedSequence> {
    if !(ratio > 1.0) || !ratio.is_finite() {
        return Err(Error::parameter("M", "must be a finite real greater than 1"));
    }
    if num_blocks < 2 {
        return Err(Error::parameter("blocks", "need at least 2 blocks"));
    }
    let mut blocks = Vec::with_capacity(num_blocks);
    blocks.push(Block {
        a: 1.0,
        values: vec![1.0],
    });
    let mut total = 1usize;
    let mut min_next = ratio; // M * max D_1 = M * 1
    for _ in 1..num_blocks {
        let a = min_next.sqrt();
        let count = a.floor() as usize + 2;
        total += count;
        if total > MAX_ENUMERATION_LEN {
            return Err(Error::parameter(
                "blocks",
                format!("enumeration would exceed {MAX_ENUMERATION_LEN} terms"),
            ));
        }
        let values: Vec<f64> = (0..count)
            .map(|nu| {
                let b = a + nu as f64;
                b * b
            })
            .collect();
        min_next = ratio * values.last().expect("block is nonempty");
        blocks.push(Block { a, values });
    }
    let mut terms = Vec::with_capacity(total);
    for b in &blocks {
        terms.extend(b.values.iter().map(|&v| Complex64::new(v, 0.0)));
    }
    debug_assert!(terms.windows(2).all(|w| w[0].re < w[1].re));
    let enumeration = Sequence::new(
        terms,
        Provenance::Generated {
            ratio,
            blocks: num_blocks,
        },
    )?;
    Ok(GeneratedSequence {
        ratio,
        blocks,
        enumeration,
    })
}

impl GeneratedSequence {
    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn enumeration(&self) -> &Sequence {
        &self.enumeration
    }

    /// 0-based offset of block `i` within the enumeration.
    pub fn block_start(&self, i: usize) -> usize {
        self.blocks[..i].iter().map(|b| b.values.len()).sum()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Claim3Row {
    pub block: usize,
    pub s_m: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Claim4Row {
    pub block: usize,
    pub t: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuxRow {
    pub block: usize,
    pub lhs: f64,
    pub rhs: f64,
}

/// Composite report over the structural claims of the generated family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClaimsReport {
    #[serde(rename = "M")]
    pub ratio: f64,
    pub num_blocks: usize,
    pub truncation: usize,
    /// max over block boundaries of |ratio - M| / M
    pub cross_block_max_rel_err: f64,
    /// min over in-block steps of (1 + 1/a_m)^2 - ratio
    pub in_block_margin_min: f64,
    pub claim3: Vec<Claim3Row>,
    pub claim4: Vec<Claim4Row>,
    pub aux_eq: Vec<AuxRow>,
    pub violations: Vec<String>,
    pub pass: bool,
}

const CROSS_BLOCK_REL_TOL: f64 = 1e-12;
const IN_BLOCK_ABS_TOL: f64 = 1e-12;

/// Check the block-family claims on the stored blocks:
/// exact cross-block ratio, the in-block ratio cap, the partial-sum bound
/// `S_m < 1/(a_m - 1)`, growth of the block-start tail products past
/// `a_{m+1} / (36 M)`, and the auxiliary bound `a_m^2 S_m > a_m / 4`.
pub fn verify_claims(gen: &GeneratedSequence, truncation: usize) -> ClaimsReport {
    let blocks = gen.blocks();
    let m_ratio = gen.ratio();
    let mut violations = Vec::new();

    let mut cross_max_rel = 0.0f64;
    for i in 1..blocks.len() {
        let prev_max = *blocks[i - 1].values.last().expect("nonempty");
        let ratio = blocks[i].values[0] / prev_max;
        let rel = (ratio - m_ratio).abs() / m_ratio;
        cross_max_rel = cross_max_rel.max(rel);
        if rel > CROSS_BLOCK_REL_TOL {
            violations.push(format!(
                "cross-block ratio at boundary {i}: {ratio} differs from M by {rel:.3e} relative"
            ));
        }
        // min D_{i+1} = M * max D_i up to a few ulp
        if ulps_between(blocks[i].values[0], m_ratio * prev_max) > 4 {
            violations.push(format!("block {} start is not M * previous max within 4 ulp", i + 1));
        }
    }

    let mut in_block_margin = f64::INFINITY;
    for (bi, b) in blocks.iter().enumerate().skip(1) {
        let bound = (1.0 + 1.0 / b.a) * (1.0 + 1.0 / b.a);
        for w in b.values.windows(2) {
            let ratio = w[1] / w[0];
            in_block_margin = in_block_margin.min(bound - ratio);
            if ratio > bound + IN_BLOCK_ABS_TOL {
                violations.push(format!(
                    "in-block ratio {ratio} exceeds (1 + 1/a)^2 = {bound} in block {}",
                    bi + 1
                ));
            }
        }
    }

    let mut claim3 = Vec::new();
    let mut aux_eq = Vec::new();
    for (bi, b) in blocks.iter().enumerate().skip(1) {
        let s_m = crate::numeric::kahan_sum(b.values.iter().map(|&v| 1.0 / v));
        let bound = 1.0 / (b.a - 1.0);
        if !(s_m < bound) {
            violations.push(format!("S_{} = {s_m} fails the bound {bound}", bi + 1));
        }
        claim3.push(Claim3Row {
            block: bi + 1,
            s_m,
            bound,
        });
        let lhs = b.a * b.a * s_m;
        let rhs = b.a / 4.0;
        if !(lhs > rhs) {
            violations.push(format!(
                "auxiliary bound fails in block {}: a^2 S = {lhs} <= a/4 = {rhs}",
                bi + 1
            ));
        }
        aux_eq.push(AuxRow {
            block: bi + 1,
            lhs,
            rhs,
        });
    }

    // Block-start tail products t = lambda_start * sum_{k=start}^{N} 1/lambda_k
    // with N the end of block m+3 (clamped to the stored blocks).
    let terms = gen.enumeration().terms();
    let truncation = truncation.min(terms.len());
    let mut claim4 = Vec::new();
    let mut prev_t = f64::NEG_INFINITY;
    for bi in 1..blocks.len().saturating_sub(1) {
        let start = gen.block_start(bi);
        let end_block = (bi + 3).min(blocks.len() - 1);
        let end = (gen.block_start(end_block) + blocks[end_block].values.len()).min(truncation);
        if start >= end {
            break;
        }
        let tail = crate::numeric::kahan_sum(terms[start..end].iter().map(|t| 1.0 / t.re));
        let t = terms[start].re * tail;
        let bound = blocks[bi + 1].a / (36.0 * m_ratio);
        if !(t > bound) {
            violations.push(format!(
                "block-start tail product t_{} = {t} fails the bound {bound}",
                bi + 1
            ));
        }
        if !(t > prev_t) {
            violations.push(format!(
                "block-start tail products not strictly increasing at block {}",
                bi + 1
            ));
        }
        prev_t = t;
        claim4.push(Claim4Row {
            block: bi + 1,
            t,
            bound,
        });
    }

    let pass = violations.is_empty();
    ClaimsReport {
        ratio: m_ratio,
        num_blocks: blocks.len(),
        truncation,
        cross_block_max_rel_err: cross_max_rel,
        in_block_margin_min: in_block_margin,
        claim3,
        claim4,
        aux_eq,
        violations,
        pass,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundsMethod {
    Structural,
    Empirical,
}

/// Certified bracket for `i(Lambda)` of a generated family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ILambdaBounds {
    pub lower: f64,
    pub upper: f64,
    pub method: BoundsMethod,
}

/// Lower bound from the block structure (every subsequence must straddle a
/// block boundary infinitely often; boundaries carry ratio exactly M), upper
/// bound from the ratio supremum over the tail starting at the second-to-last
/// block.
pub fn i_lambda_bounds(gen: &GeneratedSequence) -> Result<ILambdaBounds> {
    let blocks = gen.blocks();
    if blocks.len() < 3 {
        return Err(Error::InsufficientData(
            "need at least 3 blocks to bracket i(Lambda)".into(),
        ));
    }
    // the structural argument needs the exact cross-block ratios and the
    // in-block cap verified on this instance
    let mut lower = f64::INFINITY;
    for i in 1..blocks.len() {
        let prev_max = *blocks[i - 1].values.last().expect("nonempty");
        let ratio = blocks[i].values[0] / prev_max;
        if (ratio - gen.ratio()).abs() / gen.ratio() > 1e-9 {
            return Err(Error::Inconsistency(format!(
                "cross-block ratio {ratio} deviates from M = {}",
                gen.ratio()
            )));
        }
        lower = lower.min(ratio);
    }
    for b in blocks.iter().skip(1) {
        let bound = (1.0 + 1.0 / b.a) * (1.0 + 1.0 / b.a);
        if b.values.windows(2).any(|w| w[1] / w[0] > bound + 1e-9) {
            return Err(Error::Inconsistency(
                "in-block ratio exceeds the structural cap".into(),
            ));
        }
    }

    let tail_start = gen.block_start(blocks.len() - 2);
    let terms = gen.enumeration().terms();
    let mut upper = f64::NEG_INFINITY;
    for w in terms[tail_start..].windows(2) {
        upper = upper.max(w[1].re / w[0].re);
    }
    Ok(ILambdaBounds {
        lower,
        upper,
        method: BoundsMethod::Structural,
    })
}
