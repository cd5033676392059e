//! Pairwise post-hoc procedures for the Friedman test (Nemenyi and
//! Conover) and the standard family of p-value adjustment methods.

use crate::error::{Error, Result};
use crate::friedman::friedman_statistic;
use crate::ranking::{rank_sums, RankMatrix};
use crate::specfun::{studentized_range_sf, t_two_sided_p, Probability};
use serde::Serialize;

/// One of the G(G−1)/2 pairwise comparisons.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairwiseComparison {
    pub group_i: String,
    pub group_j: String,
    /// |R̄_i − R̄_j| on the mean-rank scale.
    pub mean_rank_diff: f64,
    /// The standardized test statistic (studentized-range q for Nemenyi,
    /// t for Conover).
    pub statistic: f64,
    /// Two-sided p-value after the requested adjustment (`none` keeps the
    /// raw value).
    pub p_value: Probability,
    pub significant: bool,
}

/// Multiple-comparison correction applied to a family of p-values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AdjustMethod {
    Bonferroni,
    /// Šidák's exact correction, `1 − (1−p)^n`.
    SidakExact,
    Holm,
    Hochberg,
    Hommel,
    /// Benjamini–Hochberg false discovery rate.
    Bh,
    /// Benjamini–Yekutieli false discovery rate.
    By,
    None,
}

impl std::fmt::Display for AdjustMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            AdjustMethod::Bonferroni => "bonferroni",
            AdjustMethod::SidakExact => "sidak_exact",
            AdjustMethod::Holm => "holm",
            AdjustMethod::Hochberg => "hochberg",
            AdjustMethod::Hommel => "hommel",
            AdjustMethod::Bh => "bh",
            AdjustMethod::By => "by",
            AdjustMethod::None => "none",
        };
        f.write_str(name)
    }
}

/// Nemenyi all-pairs comparison: `q = |R̄_i − R̄_j| / √(G(G+1)/(12B))`
/// against the range distribution of G standard normals. The procedure is
/// family-wise by construction, so no further adjustment is applied.
pub fn nemenyi(ranks: &RankMatrix, family_alpha: Probability) -> Result<Vec<PairwiseComparison>> {
    let g = ranks.n_groups();
    let b = ranks.n_blocks() as f64;
    let gf = g as f64;
    let sums = rank_sums(ranks);
    let se = (gf * (gf + 1.0) / (12.0 * b)).sqrt();
    let mut out = Vec::with_capacity(g * (g - 1) / 2);
    for i in 0..g {
        for j in i + 1..g {
            let diff = ((sums[i] - sums[j]) / b).abs();
            let q = diff / se;
            let p = studentized_range_sf(q, g as u32)?;
            out.push(PairwiseComparison {
                group_i: ranks.group_labels()[i].clone(),
                group_j: ranks.group_labels()[j].clone(),
                mean_rank_diff: diff,
                statistic: q,
                p_value: p,
                significant: p.value() < family_alpha.value(),
            });
        }
    }
    Ok(out)
}

/// The Nemenyi critical difference on the mean-rank scale: pairs with
/// `|R̄_i − R̄_j|` above it are exactly the significant ones.
pub fn nemenyi_critical_difference(
    g: usize,
    b: usize,
    family_alpha: Probability,
) -> Result<f64> {
    let gf = g as f64;
    let q = crate::specfun::studentized_range_quantile(
        Probability::new(1.0 - family_alpha.value())?,
        g as u32,
    )?;
    Ok(q * (gf * (gf + 1.0) / (12.0 * b as f64)).sqrt())
}

/// Conover all-pairs comparison on rank sums: `t = |R_i − R_j| / SE` with
/// `SE² = 2G(1 − χ²_R/(G(B−1)))(ΣΣR² − BG(G+1)²/4)/((B−1)(G−1))` and
/// `(B−1)(G−1)` degrees of freedom.
pub fn conover(
    ranks: &RankMatrix,
    family_alpha: Probability,
    adjust: AdjustMethod,
) -> Result<Vec<PairwiseComparison>> {
    let g = ranks.n_groups();
    let b = ranks.n_blocks();
    if b < 2 {
        return Err(Error::InvalidDesign("Conover test needs at least two blocks".into()));
    }
    let (gf, bf) = (g as f64, b as f64);
    let sums = rank_sums(ranks);
    let chi = friedman_statistic(ranks)?.statistic;
    let a1: f64 = ranks.ranks().iter().flatten().map(|r| r * r).sum();
    let c1 = bf * gf * (gf + 1.0) * (gf + 1.0) / 4.0;
    let df = (bf - 1.0) * (gf - 1.0);
    let se2 = 2.0 * gf * (1.0 - chi / (gf * (bf - 1.0))) * (a1 - c1) / (df);
    if !(se2 > 0.0) {
        return Err(Error::Degenerate(format!(
            "Conover pooled variance is not positive (SE² = {se2}); the rank \
             variance is exhausted by the group effect"
        )));
    }
    let se = se2.sqrt();
    let mut raw = Vec::with_capacity(g * (g - 1) / 2);
    let mut pairs = Vec::with_capacity(g * (g - 1) / 2);
    for i in 0..g {
        for j in i + 1..g {
            let t = (sums[i] - sums[j]).abs() / se;
            raw.push(t_two_sided_p(t, df)?);
            pairs.push((i, j, t));
        }
    }
    let adjusted = adjust_pvalues(&raw, adjust);
    Ok(pairs
        .into_iter()
        .zip(adjusted)
        .map(|((i, j, t), p)| PairwiseComparison {
            group_i: ranks.group_labels()[i].clone(),
            group_j: ranks.group_labels()[j].clone(),
            mean_rank_diff: (sums[i] - sums[j]).abs() / bf,
            statistic: t,
            p_value: p,
            significant: p.value() < family_alpha.value(),
        })
        .collect())
}

/// Adjusts a family of p-values; definitions follow the classical papers
/// and agree with R's `p.adjust` / statsmodels `multipletests`.
pub fn adjust_pvalues(p: &[Probability], method: AdjustMethod) -> Vec<Probability> {
    let n = p.len();
    let nf = n as f64;
    let raw: Vec<f64> = p.iter().map(|q| q.value()).collect();
    if n == 0 {
        return Vec::new();
    }
    let adjusted: Vec<f64> = match method {
        AdjustMethod::None => raw,
        AdjustMethod::Bonferroni => raw.iter().map(|&q| nf * q).collect(),
        AdjustMethod::SidakExact => raw.iter().map(|&q| 1.0 - (1.0 - q).powf(nf)).collect(),
        AdjustMethod::Holm => {
            // Step-down: running maximum of (n−k)·p over ascending p.
            let order = sort_order(&raw, false);
            let mut out = vec![0.0; n];
            let mut running = 0.0f64;
            for (k, &idx) in order.iter().enumerate() {
                running = running.max((nf - k as f64) * raw[idx]);
                out[idx] = running;
            }
            out
        }
        AdjustMethod::Hochberg => {
            // Step-up: running minimum of (k+1)·p over descending p.
            let order = sort_order(&raw, true);
            let mut out = vec![0.0; n];
            let mut running = f64::INFINITY;
            for (k, &idx) in order.iter().enumerate() {
                running = running.min((k as f64 + 1.0) * raw[idx]);
                out[idx] = running;
            }
            out
        }
        AdjustMethod::Hommel => hommel(&raw),
        AdjustMethod::Bh => {
            // Running minimum of (n/rank)·p over descending p.
            let order = sort_order(&raw, true);
            let mut out = vec![0.0; n];
            let mut running = f64::INFINITY;
            for (k, &idx) in order.iter().enumerate() {
                let rank = nf - k as f64;
                running = running.min(nf / rank * raw[idx]);
                out[idx] = running;
            }
            out
        }
        AdjustMethod::By => {
            let harmonic: f64 = (1..=n).map(|k| 1.0 / k as f64).sum();
            let order = sort_order(&raw, true);
            let mut out = vec![0.0; n];
            let mut running = f64::INFINITY;
            for (k, &idx) in order.iter().enumerate() {
                let rank = nf - k as f64;
                running = running.min(harmonic * nf / rank * raw[idx]);
                out[idx] = running;
            }
            out
        }
    };
    adjusted.into_iter().map(Probability::clamped).collect()
}

fn sort_order(values: &[f64], descending: bool) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        let cmp = values[a].partial_cmp(&values[b]).expect("p-values are finite");
        if descending {
            cmp.reverse()
        } else {
            cmp
        }
    });
    order
}

/// Hommel's (1988) closure-based adjustment, following the recurrence used
/// by R's `p.adjust`.
fn hommel(raw: &[f64]) -> Vec<f64> {
    let n = raw.len();
    if n < 2 {
        return raw.to_vec();
    }
    let nf = n as f64;
    let order = sort_order(raw, false);
    let p: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
    let q_min = (0..n).map(|i| nf * p[i] / (i as f64 + 1.0)).fold(f64::INFINITY, f64::min);
    let mut pa = vec![q_min; n];
    let mut q = vec![q_min; n];
    for m in (2..n).rev() {
        let mf = m as f64;
        // Smallest m·p over the top m−1 order statistics, at denominators 2..m.
        let mut q1 = f64::INFINITY;
        for (offset, idx) in (n - m + 1..n).enumerate() {
            q1 = q1.min(mf * p[idx] / (offset as f64 + 2.0));
        }
        for (i, qi) in q.iter_mut().enumerate().take(n - m + 1) {
            *qi = (mf * p[i]).min(q1);
        }
        let tail = q[n - m];
        for qi in q.iter_mut().skip(n - m + 1) {
            *qi = tail;
        }
        for (a, &b) in pa.iter_mut().zip(&q) {
            *a = a.max(b);
        }
    }
    let mut out = vec![0.0; n];
    for (k, &idx) in order.iter().enumerate() {
        out[idx] = pa[k].max(p[k]);
    }
    out
}
