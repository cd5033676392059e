//! Shared fixtures for the benchmark suite.

use splot_core::BlockDesign;

/// The eight-block, four-group classroom-questions design used throughout
/// the test suite; small enough to benchmark the fixed costs.
pub fn questions_design() -> BlockDesign {
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
