//! The JSON report bundle: analysis results plus enough metadata to rerun
//! the exact computation.

use serde::Serialize;
use sha2::{Digest, Sha256};
use splot_core::{FriedmanResult, PairwiseComparison, SPlotReport, TieMethod};

/// Everything the `splot` subcommand emits as JSON.
#[derive(Debug, Serialize)]
pub struct ReportBundle {
    pub friedman: FriedmanResult,
    pub splot: SPlotReport,
    /// Pairwise tables; `null` when the subcommand did not run them.
    pub posthoc: Option<PosthocTables>,
    pub metadata: Metadata,
}

#[derive(Debug, Serialize)]
pub struct PosthocTables {
    pub nemenyi: Option<Vec<PairwiseComparison>>,
    pub conover: Option<Vec<PairwiseComparison>>,
}

/// Provenance of a report: input digest plus every knob that affects the
/// numbers.
#[derive(Debug, Serialize)]
pub struct Metadata {
    /// SHA-256 of the raw input bytes, lowercase hex.
    pub input_sha256: String,
    pub alpha: f64,
    pub adjust: String,
    pub ties: String,
    /// Seed for random tie-breaking; `null` unless `--ties random`.
    pub seed: Option<u64>,
    pub version: String,
}

impl Metadata {
    pub fn new(input: &[u8], alpha: f64, adjust: String, ties: TieMethod) -> Self {
        let digest = Sha256::digest(input);
        let mut hex = String::with_capacity(64);
        for byte in digest {
            hex.push_str(&format!("{byte:02x}"));
        }
        let (tie_name, seed) = match ties {
            TieMethod::Average => ("average", None),
            TieMethod::First => ("first", None),
            TieMethod::Last => ("last", None),
            TieMethod::Max => ("max", None),
            TieMethod::Min => ("min", None),
            TieMethod::Random { seed } => ("random", Some(seed)),
        };
        Metadata {
            input_sha256: hex,
            alpha,
            adjust,
            ties: tie_name.to_string(),
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

pub fn to_json(bundle: &ReportBundle) -> String {
    let mut s = serde_json::to_string_pretty(bundle).expect("report serializes");
    s.push('\n');
    s
}
