//! Within-block ranking of a complete block design, with configurable tie
//! handling mirroring the classical `average`/`first`/`last`/`random`/
//! `max`/`min` strategies.

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// A B×G table of raw responses: rows are blocks, columns are groups
/// (treatments).
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDesign {
    values: Vec<Vec<f64>>,
    block_labels: Vec<String>,
    group_labels: Vec<String>,
}

impl BlockDesign {
    pub fn new(
        values: Vec<Vec<f64>>,
        block_labels: Vec<String>,
        group_labels: Vec<String>,
    ) -> Result<Self> {
        let b = values.len();
        if b < 1 {
            return Err(Error::InvalidDesign("design needs at least one block".into()));
        }
        let g = values[0].len();
        if g < 2 {
            return Err(Error::InvalidDesign(format!(
                "design needs at least two groups, got {g}"
            )));
        }
        for (i, row) in values.iter().enumerate() {
            if row.len() != g {
                return Err(Error::InvalidDesign(format!(
                    "block {} has {} cells, expected {g}",
                    i + 1,
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidDesign(format!(
                    "non-finite value in block {}, group {}",
                    i + 1,
                    j + 1
                )));
            }
        }
        if block_labels.len() != b {
            return Err(Error::InvalidDesign(format!(
                "{} block labels for {b} blocks",
                block_labels.len()
            )));
        }
        if group_labels.len() != g {
            return Err(Error::InvalidDesign(format!(
                "{} group labels for {g} groups",
                group_labels.len()
            )));
        }
        check_unique(&block_labels, "block")?;
        check_unique(&group_labels, "group")?;
        Ok(BlockDesign { values, block_labels, group_labels })
    }

    /// Builds a design with numbered block labels and letter-free group
    /// labels; convenient for simulations and tests.
    pub fn with_default_labels(values: Vec<Vec<f64>>) -> Result<Self> {
        let b = values.len();
        let g = values.first().map_or(0, Vec::len);
        let blocks = (1..=b).map(|i| i.to_string()).collect();
        let groups = (1..=g).map(|j| format!("g{j}")).collect();
        Self::new(values, blocks, groups)
    }

    pub fn n_blocks(&self) -> usize {
        self.values.len()
    }

    pub fn n_groups(&self) -> usize {
        self.values[0].len()
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn block_labels(&self) -> &[String] {
        &self.block_labels
    }

    pub fn group_labels(&self) -> &[String] {
        &self.group_labels
    }
}

fn check_unique(labels: &[String], kind: &str) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(Error::InvalidDesign(format!("duplicate {kind} label {l:?}")));
        }
    }
    Ok(())
}

/// How tied values inside a block share ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TieMethod {
    /// Tied values share the mean of the ranks they occupy (the default).
    Average,
    /// Earlier column gets the smaller rank.
    First,
    /// Later column gets the smaller rank.
    Last,
    /// Tied ranks are permuted pseudo-randomly; fully determined by the
    /// seed and the block index.
    Random { seed: u64 },
    Max,
    Min,
}

impl Default for TieMethod {
    fn default() -> Self {
        TieMethod::Average
    }
}

/// Within-block ranks of a design. With `average` ties every row sums to
/// `G(G+1)/2`; without ties every row is a permutation of `1..=G`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankMatrix {
    ranks: Vec<Vec<f64>>,
    tie_method: TieMethod,
    group_labels: Vec<String>,
}

impl RankMatrix {
    pub fn n_blocks(&self) -> usize {
        self.ranks.len()
    }

    pub fn n_groups(&self) -> usize {
        self.ranks[0].len()
    }

    pub fn ranks(&self) -> &[Vec<f64>] {
        &self.ranks
    }

    pub fn tie_method(&self) -> TieMethod {
        self.tie_method
    }

    pub fn group_labels(&self) -> &[String] {
        &self.group_labels
    }
}

/// Ranks each block independently, ascending (rank 1 for the smallest value
/// in the block, rank G for the largest).
pub fn rank_within_blocks(design: &BlockDesign, ties: TieMethod) -> RankMatrix {
    let ranks = design
        .values()
        .iter()
        .enumerate()
        .map(|(block_index, row)| rank_row(row, ties, block_index as u64))
        .collect();
    RankMatrix { ranks, tie_method: ties, group_labels: design.group_labels().to_vec() }
}

fn rank_row(row: &[f64], ties: TieMethod, block_index: u64) -> Vec<f64> {
    let g = row.len();
    let mut order: Vec<usize> = (0..g).collect();
    // Stable sort: within a tie group, original column order is preserved.
    order.sort_by(|&a, &b| row[a].partial_cmp(&row[b]).expect("finite values"));

    let mut rng = match ties {
        TieMethod::Random { seed } => {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            r.set_stream(block_index);
            Some(r)
        }
        _ => None,
    };

    let mut ranks = vec![0.0; g];
    let mut start = 0;
    while start < g {
        let mut end = start + 1;
        while end < g && row[order[end]] == row[order[start]] {
            end += 1;
        }
        // The tie group occupies ranks start+1 ..= end.
        match ties {
            TieMethod::Average => {
                let r = (start + 1 + end) as f64 / 2.0;
                for &col in &order[start..end] {
                    ranks[col] = r;
                }
            }
            TieMethod::Min => {
                for &col in &order[start..end] {
                    ranks[col] = (start + 1) as f64;
                }
            }
            TieMethod::Max => {
                for &col in &order[start..end] {
                    ranks[col] = end as f64;
                }
            }
            TieMethod::First => {
                for (offset, &col) in order[start..end].iter().enumerate() {
                    ranks[col] = (start + 1 + offset) as f64;
                }
            }
            TieMethod::Last => {
                for (offset, &col) in order[start..end].iter().rev().enumerate() {
                    ranks[col] = (start + 1 + offset) as f64;
                }
            }
            TieMethod::Random { .. } => {
                let rng = rng.as_mut().expect("rng present for random ties");
                let mut pool: Vec<f64> = (start + 1..=end).map(|r| r as f64).collect();
                for &col in &order[start..end] {
                    let pick = rng.gen_range(0..pool.len());
                    ranks[col] = pool.swap_remove(pick);
                }
            }
        }
        start = end;
    }
    ranks
}

/// Column sums `R_1..R_G` of a rank matrix.
pub fn rank_sums(ranks: &RankMatrix) -> Vec<f64> {
    let g = ranks.n_groups();
    let mut sums = vec![0.0; g];
    for row in ranks.ranks() {
        for (s, r) in sums.iter_mut().zip(row) {
            *s += r;
        }
    }
    sums
}
