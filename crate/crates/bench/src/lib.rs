//! Shared fixtures for the benchmarks.

use spice_core::stats::ClusteredBinaryDataset;
use spice_core::synthetic::{generate_clustered, paper_shaped_groups};
use spice_core::RngStream;

/// The 30-cluster, 480-observation layout used across benches.
pub fn bench_dataset() -> ClusteredBinaryDataset {
    generate_clustered(&paper_shaped_groups(), 0.5, &mut RngStream::new(42, 0))
        .expect("valid generator spec")
}
