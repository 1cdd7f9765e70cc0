//! Dynamical-degree bookkeeping and arithmetic-degree estimation from
//! orbit height series.
//!
//! The limsup/liminf of the defining limit are not observable on a
//! truncated orbit; estimates are reported as min/max over a tail window,
//! and a finite-value classification snaps only when the tail is tight.

use crate::error::DegreeError;
use crate::heights::SubschemeSpec;
use crate::maps::OrbitRecord;

/// Degree-growth profile of a self-map: d_0 = 1, d_1, ..., d_dim and the
/// ratios mu_i = d_i / d_{i-1}, with a peak index p when d_1 > 1.
///
/// For supported families the entries are exact integers; for anything
/// else the profile must be supplied by the caller and conclusions are
/// conditional on it.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeProfile {
    d_seq: Vec<f64>,
    mu_seq: Vec<f64>,
    peak: Option<usize>,
}

impl DegreeProfile {
    /// Profile from explicit ratios mu_1 >= mu_2 >= ... (log-concavity is
    /// required, matching what dynamical degrees always satisfy).
    pub fn from_mu(mu_seq: Vec<f64>) -> Result<DegreeProfile, DegreeError> {
        if mu_seq.windows(2).any(|w| w[0] < w[1]) {
            return Err(DegreeError::UnsortedInput);
        }
        let mut d_seq = vec![1.0];
        for (i, &mu) in mu_seq.iter().enumerate() {
            d_seq.push(d_seq[i] * mu);
        }
        let peak = mu_seq.iter().rposition(|&m| m > 1.0).map(|i| i + 1);
        Ok(DegreeProfile { d_seq, mu_seq, peak })
    }

    pub fn d_seq(&self) -> &[f64] {
        &self.d_seq
    }

    pub fn mu_seq(&self) -> &[f64] {
        &self.mu_seq
    }

    /// mu_l with the convention mu_{dim+1} = 0.
    pub fn mu(&self, l: usize) -> f64 {
        if l == 0 {
            1.0
        } else if l <= self.mu_seq.len() {
            self.mu_seq[l - 1]
        } else {
            0.0
        }
    }

    /// Peak index p with mu_p > 1 >= mu_{p+1}; present iff d_1 > 1.
    pub fn peak(&self) -> Option<usize> {
        self.peak
    }

    /// The finite set of values the arithmetic degree can take for a map
    /// with this profile: {1, mu_p, ..., mu_1}.
    pub fn alpha_candidates(&self) -> Vec<f64> {
        let mut vals = vec![1.0];
        if let Some(p) = self.peak {
            for l in (1..=p).rev() {
                let v = self.mu(l);
                if !vals.contains(&v) {
                    vals.push(v);
                }
            }
        }
        vals
    }
}

/// Exact integer profile of a product of P^1 maps with factor degrees
/// a_1 >= a_2 >= ...: d_i is the product of the first i factors and
/// mu_i = a_i. The peak is the last index with a_i > 1.
pub fn product_map_profile(factor_degrees: &[u64]) -> Result<DegreeProfile, DegreeError> {
    if factor_degrees.is_empty() || factor_degrees.iter().any(|&a| a < 1) {
        return Err(DegreeError::UnsortedInput);
    }
    if factor_degrees.windows(2).any(|w| w[0] < w[1]) {
        return Err(DegreeError::UnsortedInput);
    }
    DegreeProfile::from_mu(factor_degrees.iter().map(|&a| a as f64).collect())
}

/// Finite-horizon estimate of the arithmetic degree.
#[derive(Clone, Debug)]
pub struct AlphaEstimate {
    /// max{1, h_n}^{1/n} for n = 1..; index 0 holds the n=1 entry.
    pub sequence: Vec<f64>,
    pub alpha_lower: f64,
    pub alpha_upper: f64,
    /// Snapped value from the profile's finite candidate set, when the
    /// tail is tight enough to commit.
    pub classified_value: Option<f64>,
}

/// Tail bracket of max{1, h_n}^{1/n} over the last `tail_window` entries,
/// with optional classification against a degree profile.
///
/// Classification snaps to the candidate nearest the tail midpoint, and
/// only when the tail spread is below 10% of the gap to the nearest other
/// candidate; otherwise the estimate is reported unclassified.
pub fn alpha_estimate(
    orbit: &[OrbitRecord],
    tail_window: usize,
    profile: Option<&DegreeProfile>,
) -> Result<AlphaEstimate, DegreeError> {
    assert!(tail_window >= 1);
    if orbit.len() < tail_window + 2 {
        return Err(DegreeError::OrbitTooShort(tail_window + 2, orbit.len()));
    }
    let sequence: Vec<f64> = orbit
        .iter()
        .skip(1)
        .map(|r| {
            let h = r.height.max(1.0);
            (h.ln() / r.n as f64).exp()
        })
        .collect();
    let tail = &sequence[sequence.len() - tail_window..];
    let alpha_lower = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let alpha_upper = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let classified_value = profile.and_then(|prof| {
        let mid = 0.5 * (alpha_lower + alpha_upper);
        let cands = prof.alpha_candidates();
        let chosen = cands
            .iter()
            .cloned()
            .min_by(|a, b| {
                (a - mid)
                    .abs()
                    .partial_cmp(&(b - mid).abs())
                    .expect("finite candidates")
            })
            .expect("candidate set nonempty");
        let gap = cands
            .iter()
            .cloned()
            .filter(|&c| c != chosen)
            .map(|c| (c - chosen).abs())
            .fold(f64::INFINITY, f64::min);
        let gap = if gap.is_finite() { gap } else { 1.0 };
        let spread = alpha_upper - alpha_lower;
        if spread < 0.1 * gap {
            Some(chosen)
        } else {
            None
        }
    });
    Ok(AlphaEstimate {
        sequence,
        alpha_lower,
        alpha_upper,
        classified_value,
    })
}

/// Report of the empirical height-growth recursion check.
#[derive(Clone, Debug)]
pub struct RecursionReport {
    /// min over admissible (n >= n0, k >= 0) of
    /// H_{n+k} / ((eta*mu_l)^{mk} * H_n) on the subsample H_j = h_{mj+s}.
    pub best_c: f64,
    /// Pairs (n, k, ratio) falling below the violation floor.
    pub violations: Vec<(usize, usize, f64)>,
    pub pairs_checked: usize,
    pub mu_l: f64,
    pub mu_l_plus_1: f64,
    pub m: usize,
    pub eta: f64,
    pub s: usize,
    pub n0: usize,
}

/// Check the k-step growth inequality
/// `H_{n+k} >= C * (eta*mu_l)^{mk} * H_n` empirically: the constants are
/// outputs, never inputs to assert against. `floor` marks violations.
#[allow(clippy::too_many_arguments)]
pub fn recursion_verify(
    heights: &[f64],
    mu_l: f64,
    mu_l_plus_1: f64,
    m: usize,
    eta: f64,
    n0: usize,
    s: usize,
    floor: f64,
) -> Result<RecursionReport, DegreeError> {
    assert!(m >= 1);
    assert!(eta > 0.0 && eta < 1.0);
    let sub: Vec<f64> = (0..)
        .map(|j| m * j + s)
        .take_while(|&idx| idx < heights.len())
        .map(|idx| heights[idx])
        .collect();
    if sub.len() < n0 + 2 {
        return Err(DegreeError::OrbitTooShort(n0 + 2, sub.len()));
    }
    let rate = (eta * mu_l).powi(m as i32);
    let mut best_c = f64::INFINITY;
    let mut violations = Vec::new();
    let mut pairs = 0usize;
    let last = sub.len() - 1;
    for n in n0..=last {
        if sub[n] <= 0.0 {
            continue; // height-zero steps cannot seed the inequality
        }
        let mut scale = 1.0;
        for k in 0..=(last - n) {
            let ratio = sub[n + k] / (scale * sub[n]);
            pairs += 1;
            if ratio < best_c {
                best_c = ratio;
            }
            if ratio < floor {
                violations.push((n, k, ratio));
            }
            scale *= rate;
        }
    }
    Ok(RecursionReport {
        best_c,
        violations,
        pairs_checked: pairs,
        mu_l,
        mu_l_plus_1,
        m,
        eta,
        s,
        n0,
    })
}

/// Per-set orbit hit counts against proper closed subsets.
#[derive(Clone, Debug)]
pub struct GenericnessReport {
    /// (set index, hit count, indices of hits, still growing in final third)
    pub per_set: Vec<SetHits>,
}

#[derive(Clone, Debug)]
pub struct SetHits {
    pub set_index: usize,
    pub hits: Vec<usize>,
    pub non_generic_witness: bool,
}

/// Count orbit points lying on each closed set (form evaluation exactly
/// zero, or point equality in points mode). A set is flagged when its
/// count exceeds `threshold` and hits continue in the final third of the
/// orbit: finitely many hits are what a generic orbit allows.
pub fn genericness_report(
    orbit: &[OrbitRecord],
    closed_sets: &[SubschemeSpec],
    threshold: usize,
) -> GenericnessReport {
    let cutoff = orbit.len().saturating_sub(orbit.len() / 3);
    let per_set = closed_sets
        .iter()
        .enumerate()
        .map(|(set_index, set)| {
            let hits: Vec<usize> = orbit
                .iter()
                .filter(|r| {
                    r.point
                        .as_single()
                        .map(|p| set.contains(p))
                        .unwrap_or(false)
                })
                .map(|r| r.n)
                .collect();
            let growing = hits.iter().any(|&n| n >= cutoff);
            SetHits {
                set_index,
                non_generic_witness: hits.len() > threshold && growing,
                hits,
            }
        })
        .collect();
    GenericnessReport { per_set }
}
