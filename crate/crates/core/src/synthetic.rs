//! Seeded beta-binomial generator for clustered binary data.
//!
//! Used by the simulation-based checks: each cluster draws a latent success
//! probability from a Beta with the requested mean and intracluster
//! correlation, then fills the cluster with Bernoulli outcomes, so the
//! generated data have ICC equal to `icc` by construction.

use crate::error::StatsError;
use crate::numerics::{sample_beta, RngStream};
use crate::stats::{Cluster, ClusteredBinaryDataset};

/// One group of clusters sharing a mean success rate.
#[derive(Debug, Clone)]
pub struct GroupSpec {
    pub label: String,
    pub clusters: usize,
    pub cluster_size: usize,
    pub rate: f64,
}

/// Generate a clustered dataset; draws come only from `stream`.
pub fn generate_clustered(
    groups: &[GroupSpec],
    icc: f64,
    stream: &mut RngStream,
) -> Result<ClusteredBinaryDataset, StatsError> {
    if !(0.0..1.0).contains(&icc) {
        return Err(StatsError::Invalid(format!("icc must be in [0,1), got {icc}")));
    }
    let mut clusters = Vec::new();
    for group in groups {
        if !(0.0..=1.0).contains(&group.rate) {
            return Err(StatsError::Invalid(format!(
                "rate must be in [0,1], got {}",
                group.rate
            )));
        }
        for c in 0..group.clusters {
            let latent = if icc == 0.0 {
                group.rate
            } else {
                // Beta(a, b) with mean `rate` and a+b = (1-icc)/icc has
                // Var(p) = icc·rate·(1-rate).
                let concentration = (1.0 - icc) / icc;
                let a = (group.rate * concentration).max(1e-9);
                let b = ((1.0 - group.rate) * concentration).max(1e-9);
                sample_beta(a, b, stream)?
            };
            let outcomes = (0..group.cluster_size)
                .map(|_| stream.uniform() < latent)
                .collect();
            clusters.push(Cluster {
                id: format!("{}_{c}", group.label),
                group: group.label.clone(),
                outcomes,
            });
        }
    }
    Ok(ClusteredBinaryDataset::from_clusters(clusters))
}

/// The 30-cluster layout with the published tone-wise YES rates.
pub fn paper_shaped_groups() -> Vec<GroupSpec> {
    [
        ("abusive", 0.179),
        ("unclear", 0.604),
        ("friendly", 0.975),
    ]
    .iter()
    .map(|&(label, rate)| GroupSpec {
        label: label.to_string(),
        clusters: 10,
        cluster_size: 16,
        rate,
    })
    .collect()
}
