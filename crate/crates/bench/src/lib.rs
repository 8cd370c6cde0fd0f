//! Shared fixtures for the criterion benchmarks.

use jflmsc::data::{generate_synthetic, SynthSpec};
use jflmsc::MultiViewDataset;

/// Three-view Gaussian dataset with `per_cluster` samples in each of three
/// clusters.
pub fn fixture(per_cluster: usize) -> MultiViewDataset {
    generate_synthetic(&SynthSpec {
        samples_per_cluster: per_cluster,
        ..SynthSpec::default()
    })
    .expect("valid fixture spec")
}
