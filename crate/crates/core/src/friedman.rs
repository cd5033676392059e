//! The Friedman chi-square test and the exact moments of its statistic.

use crate::error::{Error, Result};
use crate::ranking::{rank_sums, RankMatrix};
use crate::specfun::{chi_square_sf, Probability};
use serde::Serialize;

/// Outcome of the Friedman test on a rank matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FriedmanResult {
    /// The statistic F_g (also written χ²_R).
    pub statistic: f64,
    /// Degrees of freedom, G − 1.
    pub df: u32,
    /// Upper chi-square tail probability of the statistic.
    pub p_value: Probability,
    /// Rank sums R_1..R_G in input column order.
    pub rank_sums: Vec<f64>,
    pub n_groups: usize,
    pub n_blocks: usize,
    pub group_labels: Vec<String>,
}

/// First three central moments plus skewness, shared by the F_g and S_g
/// moment formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentSet {
    /// Mean.
    pub m1: f64,
    /// Variance.
    pub m2: f64,
    /// Third central moment.
    pub m3: f64,
    /// m3 / m2^{3/2}.
    pub skewness: f64,
}

/// Computes `F_g = 12/(BG(G+1))·ΣR_g² − 3B(G+1)` and its chi-square
/// p-value with G − 1 degrees of freedom.
pub fn friedman_statistic(ranks: &RankMatrix) -> Result<FriedmanResult> {
    let g = ranks.n_groups();
    let b = ranks.n_blocks();
    let sums = rank_sums(ranks);
    let (gf, bf) = (g as f64, b as f64);
    let sum_sq: f64 = sums.iter().map(|r| r * r).sum();
    let statistic = 12.0 / (bf * gf * (gf + 1.0)) * sum_sq - 3.0 * bf * (gf + 1.0);
    // Tied ranks can push the uncorrected statistic a hair below zero.
    let statistic = statistic.max(0.0);
    let df = (g - 1) as u32;
    let p_value = chi_square_sf(statistic, df as f64)?;
    Ok(FriedmanResult {
        statistic,
        df,
        p_value,
        rank_sums: sums,
        n_groups: g,
        n_blocks: b,
        group_labels: ranks.group_labels().to_vec(),
    })
}

/// Exact moments of F_g under H0: mean `G−1`, variance `2(G−1)(1−1/B)`,
/// third central moment `8(G−1)(1−3/B+2/B²)`.
pub fn friedman_moments(g: usize, b: usize) -> Result<MomentSet> {
    check_design_size(g, b)?;
    let (gf, bf) = (g as f64, b as f64);
    let m1 = gf - 1.0;
    let m2 = 2.0 * (gf - 1.0) * (1.0 - 1.0 / bf);
    let m3 = 8.0 * (gf - 1.0) * (1.0 - 3.0 / bf + 2.0 / (bf * bf));
    Ok(MomentSet { m1, m2, m3, skewness: m3 / m2.powf(1.5) })
}

pub(crate) fn check_design_size(g: usize, b: usize) -> Result<()> {
    if g < 2 {
        return Err(Error::domain(format!("moment formulas need G ≥ 2 groups, got {g}")));
    }
    if b < 2 {
        return Err(Error::domain(format!("moment formulas need B ≥ 2 blocks, got {b}")));
    }
    Ok(())
}
