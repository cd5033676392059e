//! Rank analysis for randomized complete block designs.
//!
//! The crate computes the Friedman chi-square test, decomposes it into
//! per-group contributions `S_g`, fits a gamma distribution to the sampling
//! distribution of `S_g` by matching its mean and skewness, and derives a
//! decision limit so the whole test can be read off a single plot. Classical
//! Nemenyi and Conover pairwise post-hoc procedures and a seeded Monte Carlo
//! harness for moment and type-I-error studies round out the toolkit.
//!
//! Everything is pure and deterministic: simulations derive all randomness
//! from an explicit seed and produce identical results under any thread
//! count.

pub mod error;
pub mod friedman;
pub mod posthoc;
pub mod ranking;
pub mod sim;
pub mod specfun;
pub mod splot;

pub use error::{Error, Result};
pub use friedman::{FriedmanResult, MomentSet};
pub use posthoc::{AdjustMethod, PairwiseComparison};
pub use ranking::{BlockDesign, RankMatrix, TieMethod};
pub use sim::{Distribution, MomentQuad, MomentRow, Robustness, SimConfig, Type1Row};
pub use specfun::{GammaParams, Probability};
pub use splot::{GammaFit, SComponents, SPlotReport};
