//! Per-group decomposition of the Friedman statistic, the gamma
//! method-of-moments fit to the sampling distribution of `S_g`, and the
//! decision limit that turns the decomposition into a plottable test.

use crate::error::{Error, Result};
use crate::friedman::{check_design_size, MomentSet};
use crate::posthoc::AdjustMethod;
use crate::ranking::{rank_sums, rank_within_blocks, BlockDesign, RankMatrix, TieMethod};
use crate::specfun::{gamma_quantile, GammaParams, Probability};
use serde::Serialize;

/// The standardized squared contributions `S_g` whose sum is the Friedman
/// statistic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SComponents {
    /// `S_g = ((R_g − 0.5B(G+1)) / √(BG(G+1)/12))²` in input column order.
    pub s: Vec<f64>,
    pub rank_sums: Vec<f64>,
    pub n_groups: usize,
    pub n_blocks: usize,
    pub group_labels: Vec<String>,
}

impl SComponents {
    /// Sum of the components; equals the Friedman statistic.
    pub fn total(&self) -> f64 {
        self.s.iter().sum()
    }
}

/// Gamma parameters fitted by matching the mean and skewness of `S_g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaFit {
    /// α̂ = 4[(2−2/G)(1−1/B)]³ / [(8−8/G)(1−3/B+2/B²)]².
    pub shape: f64,
    /// β̂ = α̂ / (1 − 1/G); a rate, so the fitted mean is shape/rate.
    pub rate: f64,
    /// M1 of S_g, the mean being matched.
    pub target_mean: f64,
    /// Skewness of S_g being matched.
    pub target_skewness: f64,
}

impl GammaFit {
    pub fn params(&self) -> GammaParams {
        GammaParams { shape: self.shape, rate: self.rate }
    }

    /// Variance implied by the fit, α̂/β̂².
    pub fn implied_variance(&self) -> f64 {
        self.shape / (self.rate * self.rate)
    }

    /// Excess kurtosis implied by the fit, 6/α̂.
    pub fn implied_excess_kurtosis(&self) -> f64 {
        6.0 / self.shape
    }
}

/// Everything needed to draw and read the S-plot.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SPlotReport {
    pub components: SComponents,
    pub fit: GammaFit,
    pub family_alpha: Probability,
    pub per_test_alpha: Probability,
    pub decision_limit: f64,
    /// Labels of groups with `S_g > DL`, in input column order.
    pub flagged: Vec<String>,
    /// `S_g / ΣS_g` per group; `None` when the total is zero (0/0).
    pub contributions: Option<Vec<f64>>,
    pub overall_reject: bool,
}

/// Decomposes the rank sums into the standardized squared contributions.
pub fn s_components(ranks: &RankMatrix) -> SComponents {
    let g = ranks.n_groups();
    let b = ranks.n_blocks();
    let (gf, bf) = (g as f64, b as f64);
    let center = 0.5 * bf * (gf + 1.0);
    let scale = (bf * gf * (gf + 1.0) / 12.0).sqrt();
    let sums = rank_sums(ranks);
    let s = sums.iter().map(|r| ((r - center) / scale).powi(2)).collect();
    SComponents {
        s,
        rank_sums: sums,
        n_groups: g,
        n_blocks: b,
        group_labels: ranks.group_labels().to_vec(),
    }
}

/// Exact moments of a single `S_g` under H0: mean `1 − 1/G`, variance
/// `(2 − 2/G)(1 − 1/B)`, third central moment `(8 − 8/G)(1 − 3/B + 2/B²)`.
pub fn s_moments(g: usize, b: usize) -> Result<MomentSet> {
    check_design_size(g, b)?;
    let (gf, bf) = (g as f64, b as f64);
    let m1 = 1.0 - 1.0 / gf;
    let m2 = (2.0 - 2.0 / gf) * (1.0 - 1.0 / bf);
    let m3 = (8.0 - 8.0 / gf) * (1.0 - 3.0 / bf + 2.0 / (bf * bf));
    Ok(MomentSet { m1, m2, m3, skewness: m3 / m2.powf(1.5) })
}

/// Fits a gamma distribution to `S_g` by matching its mean and skewness.
/// Needs B ≥ 3: the third-moment factor `1 − 3/B + 2/B² = (B−1)(B−2)/B²`
/// vanishes at B = 2, which would drive the fitted shape to infinity.
pub fn gamma_fit(g: usize, b: usize) -> Result<GammaFit> {
    if b < 3 {
        return Err(Error::Degenerate(format!(
            "the gamma fit needs B ≥ 3 blocks (the skewness of S_g is zero at B = {b})"
        )));
    }
    let m = s_moments(g, b)?;
    let shape = 4.0 * m.m2.powi(3) / (m.m3 * m.m3);
    let rate = shape / m.m1;
    Ok(GammaFit { shape, rate, target_mean: m.m1, target_skewness: m.skewness })
}

/// Per-test alpha for a family of G tests under the chosen correction.
/// Only `bonferroni` (α/G) and `sidak_exact` (1 − (1−α)^{1/G}) define a
/// per-test level; the stepwise methods depend on the observed p-values.
pub fn per_test_alpha(
    family_alpha: Probability,
    g: usize,
    adjust: AdjustMethod,
) -> Result<Probability> {
    let alpha = family_alpha.value();
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(Error::domain(format!("family alpha must be in (0, 1), got {alpha}")));
    }
    let gf = g as f64;
    let per = match adjust {
        AdjustMethod::Bonferroni => alpha / gf,
        AdjustMethod::SidakExact => 1.0 - (1.0 - alpha).powf(1.0 / gf),
        other => {
            return Err(Error::domain(format!(
                "decision limits support bonferroni or sidak_exact, not {other}"
            )))
        }
    };
    Probability::new(per)
}

/// The `(1 − α_PT)`-quantile of the fitted gamma: any `S_g` above it flags
/// group g and rejects H0.
pub fn decision_limit(
    g: usize,
    b: usize,
    family_alpha: Probability,
    adjust: AdjustMethod,
) -> Result<f64> {
    let fit = gamma_fit(g, b)?;
    let per = per_test_alpha(family_alpha, g, adjust)?;
    gamma_quantile(Probability::new(1.0 - per.value())?, fit.params())
}

/// Runs the complete S-plot analysis on raw data.
pub fn splot_analysis(
    design: &BlockDesign,
    family_alpha: Probability,
    ties: TieMethod,
    adjust: AdjustMethod,
) -> Result<SPlotReport> {
    let ranks = rank_within_blocks(design, ties);
    let components = s_components(&ranks);
    let fit = gamma_fit(components.n_groups, components.n_blocks)?;
    let per = per_test_alpha(family_alpha, components.n_groups, adjust)?;
    let dl = gamma_quantile(Probability::new(1.0 - per.value())?, fit.params())?;
    // Strict inequality: a component exactly on the limit does not reject.
    let flagged: Vec<String> = components
        .s
        .iter()
        .zip(&components.group_labels)
        .filter(|(s, _)| **s > dl)
        .map(|(_, label)| label.clone())
        .collect();
    let total = components.total();
    let contributions =
        if total > 0.0 { Some(components.s.iter().map(|s| s / total).collect()) } else { None };
    Ok(SPlotReport {
        overall_reject: !flagged.is_empty(),
        components,
        fit,
        family_alpha,
        per_test_alpha: per,
        decision_limit: dl,
        flagged,
        contributions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::friedman::friedman_statistic;
    use approx::assert_abs_diff_eq;

    fn p(v: f64) -> Probability {
        Probability::new(v).unwrap()
    }

    fn questions_design() -> BlockDesign {
        let rows = vec![
            vec![14.0, 23.0, 26.0, 30.0],
            vec![19.0, 25.0, 24.0, 33.0],
            vec![17.0, 22.0, 29.0, 28.0],
            vec![17.0, 21.0, 28.0, 27.0],
            vec![16.0, 24.0, 28.0, 32.0],
            vec![15.0, 23.0, 27.0, 36.0],
            vec![18.0, 26.0, 27.0, 25.0],
            vec![16.0, 22.0, 30.0, 32.0],
        ];
        let blocks = (1..=8).map(|i| i.to_string()).collect();
        let groups = ["A", "B", "C", "D"].iter().map(|s| s.to_string()).collect();
        BlockDesign::new(rows, blocks, groups).unwrap()
    }

    #[test]
    fn questions_data_components() {
        let ranks = rank_within_blocks(&questions_design(), TieMethod::Average);
        let c = s_components(&ranks);
        let expected = [10.8, 0.3, 2.7, 4.8];
        for (got, want) in c.s.iter().zip(expected) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-10);
        }
        assert_abs_diff_eq!(c.total(), 18.6, epsilon = 1e-10);
    }

    #[test]
    fn decomposition_matches_friedman_statistic() {
        let ranks = rank_within_blocks(&questions_design(), TieMethod::Average);
        let f = friedman_statistic(&ranks).unwrap();
        let c = s_components(&ranks);
        assert_abs_diff_eq!(c.total(), f.statistic, epsilon = 1e-10);
    }

    #[test]
    fn balanced_ranks_give_zero_components() {
        // Two blocks with opposite orderings balance every rank sum.
        let rows = vec![vec![1.0, 2.0, 3.0, 4.0], vec![4.0, 3.0, 2.0, 1.0]];
        let d = BlockDesign::with_default_labels(rows).unwrap();
        let c = s_components(&rank_within_blocks(&d, TieMethod::Average));
        for s in &c.s {
            assert_abs_diff_eq!(*s, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn s_moment_table_values() {
        let m = s_moments(3, 3).unwrap();
        assert_abs_diff_eq!(m.m1, 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.skewness, 1.41, epsilon = 5e-3);
        assert_abs_diff_eq!(s_moments(5, 3).unwrap().m1, 0.80, epsilon = 1e-15);
        assert_abs_diff_eq!(s_moments(5, 3).unwrap().skewness, 1.29, epsilon = 5e-3);
        assert_abs_diff_eq!(s_moments(3, 5).unwrap().skewness, 2.32, epsilon = 5e-3);
    }

    #[test]
    fn gamma_fit_closed_forms() {
        let fit = gamma_fit(3, 3).unwrap();
        assert_abs_diff_eq!(fit.shape, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.rate, 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.implied_variance(), 0.222, epsilon = 5e-4);
        assert_abs_diff_eq!(fit.implied_excess_kurtosis(), 3.00, epsilon = 1e-12);
        let fit = gamma_fit(3, 5).unwrap();
        assert_abs_diff_eq!(fit.implied_variance(), 0.600, epsilon = 5e-4);
        assert_abs_diff_eq!(fit.implied_excess_kurtosis(), 8.10, epsilon = 5e-3);
    }

    #[test]
    fn gamma_fit_matches_target_moments() {
        for (g, b) in [(3, 3), (4, 8), (5, 25), (10, 7)] {
            let fit = gamma_fit(g, b).unwrap();
            assert_abs_diff_eq!(fit.shape / fit.rate, fit.target_mean, epsilon = 1e-12);
            assert_abs_diff_eq!(2.0 / fit.shape.sqrt(), fit.target_skewness, epsilon = 1e-12);
        }
    }

    #[test]
    fn gamma_fit_rejects_degenerate_block_counts() {
        assert!(gamma_fit(4, 1).is_err());
        assert!(gamma_fit(4, 2).is_err());
        assert!(gamma_fit(1, 8).is_err());
        assert!(gamma_fit(4, 3).is_ok());
    }

    #[test]
    fn per_test_alpha_values() {
        let bon = per_test_alpha(p(0.05), 5, AdjustMethod::Bonferroni).unwrap();
        assert_abs_diff_eq!(bon.value(), 0.01, epsilon = 1e-15);
        let sid = per_test_alpha(p(0.05), 5, AdjustMethod::SidakExact).unwrap();
        assert_abs_diff_eq!(sid.value(), 0.010206, epsilon = 5e-7);
        assert!(per_test_alpha(p(0.05), 5, AdjustMethod::Holm).is_err());
    }

    #[test]
    fn decision_limit_frozen_values() {
        // Frozen from an independent inversion of the regularized lower
        // incomplete gamma at 0.9875 with shape 7/12, rate 7/9.
        let dl = decision_limit(4, 8, p(0.05), AdjustMethod::Bonferroni).unwrap();
        assert_abs_diff_eq!(dl, 4.315910744443, epsilon = 1e-9);
        assert!(dl > 2.7 && dl < 4.8);
        let dl01 = decision_limit(4, 8, p(0.01), AdjustMethod::Bonferroni).unwrap();
        assert_abs_diff_eq!(dl01, 6.17, epsilon = 0.1);
        assert!(dl01 > 4.8 && dl01 < 10.8);
    }

    #[test]
    fn decision_limit_monotone_in_alpha_and_g() {
        let a = decision_limit(4, 8, p(0.01), AdjustMethod::Bonferroni).unwrap();
        let b = decision_limit(4, 8, p(0.05), AdjustMethod::Bonferroni).unwrap();
        assert!(a > b);
        let g5 = decision_limit(5, 8, p(0.05), AdjustMethod::Bonferroni).unwrap();
        assert!(g5 > b);
    }

    #[test]
    fn questions_analysis_flags() {
        let d = questions_design();
        let r5 = splot_analysis(&d, p(0.05), TieMethod::Average, AdjustMethod::Bonferroni).unwrap();
        assert_eq!(r5.flagged, vec!["A", "D"]);
        assert!(r5.overall_reject);
        let contrib = r5.contributions.as_ref().unwrap();
        assert_abs_diff_eq!(contrib[0], 0.58, epsilon = 3e-3);
        assert_abs_diff_eq!(contrib[3], 0.258, epsilon = 3e-3);
        let r1 = splot_analysis(&d, p(0.01), TieMethod::Average, AdjustMethod::Bonferroni).unwrap();
        assert_eq!(r1.flagged, vec!["A"]);
    }

    #[test]
    fn balanced_data_never_rejects() {
        let rows = vec![
            vec![1.0, 2.0, 3.0, 4.0],
            vec![4.0, 3.0, 2.0, 1.0],
            vec![1.0, 2.0, 3.0, 4.0],
            vec![4.0, 3.0, 2.0, 1.0],
        ];
        let d = BlockDesign::with_default_labels(rows).unwrap();
        let r = splot_analysis(&d, p(0.05), TieMethod::Average, AdjustMethod::Bonferroni).unwrap();
        assert!(r.flagged.is_empty());
        assert!(!r.overall_reject);
        assert!(r.contributions.is_none());
    }
}
