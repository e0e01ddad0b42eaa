//! Statistical battery for clustered binary outcomes.

pub mod bayes;
pub mod freq;
pub mod glm;
pub mod resample;

pub use freq::{
    bh_adjust, chi_square, cluster_permutation_test, cramers_v, estimate_icc, holm_adjust,
    paired_sign_test, rao_scott, wilson_interval, ChiSquare, ClusterSummary, ContingencyTable,
    PermutationStatistic, SignTestResult,
};
pub use glm::{cluster_robust_cov, fit_logit, odds_ratios, CovCorrection, DesignMatrix, GlmFit};

use crate::error::StatsError;

/// One cluster of binary outcomes sharing a group label.
#[derive(Debug, Clone)]
pub struct Cluster {
    pub id: String,
    pub group: String,
    pub outcomes: Vec<bool>,
}

impl Cluster {
    pub fn size(&self) -> usize {
        self.outcomes.len()
    }

    pub fn successes(&self) -> usize {
        self.outcomes.iter().filter(|&&y| y).count()
    }
}

/// Rows of (cluster id, group label, binary outcome), grouped by cluster.
///
/// The group label is constant within a cluster; with tone-labeled trials the
/// cluster is the interaction and the group is its tone.
#[derive(Debug, Clone)]
pub struct ClusteredBinaryDataset {
    clusters: Vec<Cluster>,
}

impl ClusteredBinaryDataset {
    /// Build from observation rows, preserving first-appearance cluster order.
    pub fn from_rows<I>(rows: I) -> Result<Self, StatsError>
    where
        I: IntoIterator<Item = (String, String, bool)>,
    {
        let mut clusters: Vec<Cluster> = Vec::new();
        let mut index: std::collections::HashMap<String, usize> = std::collections::HashMap::new();
        for (id, group, outcome) in rows {
            match index.get(&id) {
                Some(&i) => {
                    if clusters[i].group != group {
                        return Err(StatsError::MixedCluster {
                            cluster: id,
                            a: clusters[i].group.clone(),
                            b: group,
                        });
                    }
                    clusters[i].outcomes.push(outcome);
                }
                None => {
                    index.insert(id.clone(), clusters.len());
                    clusters.push(Cluster {
                        id,
                        group,
                        outcomes: vec![outcome],
                    });
                }
            }
        }
        Ok(Self { clusters })
    }

    /// Build directly from clusters. Resampling uses this; duplicated ids are
    /// allowed there because each drawn cluster counts as its own cluster.
    pub fn from_clusters(clusters: Vec<Cluster>) -> Self {
        Self { clusters }
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn n_clusters(&self) -> usize {
        self.clusters.len()
    }

    pub fn n_observations(&self) -> usize {
        self.clusters.iter().map(Cluster::size).sum()
    }

    pub fn mean_cluster_size(&self) -> f64 {
        self.n_observations() as f64 / self.n_clusters() as f64
    }

    /// Distinct group labels in first-appearance order.
    pub fn group_labels(&self) -> Vec<String> {
        let mut seen = Vec::new();
        for c in &self.clusters {
            if !seen.contains(&c.group) {
                seen.push(c.group.clone());
            }
        }
        seen
    }

    /// (successes, total) per group label, in the given label order.
    pub fn group_counts(&self, labels: &[String]) -> Vec<(u64, u64)> {
        labels
            .iter()
            .map(|g| {
                let mut k = 0;
                let mut n = 0;
                for c in self.clusters.iter().filter(|c| &c.group == g) {
                    k += c.successes() as u64;
                    n += c.size() as u64;
                }
                (k, n)
            })
            .collect()
    }

    /// Contingency table of group × outcome (columns NO, YES).
    pub fn to_contingency(&self) -> Result<ContingencyTable, StatsError> {
        let labels = self.group_labels();
        let counts = self.group_counts(&labels);
        let rows = counts
            .iter()
            .map(|&(k, n)| vec![n - k, k])
            .collect::<Vec<_>>();
        ContingencyTable::new(labels, vec!["NO".into(), "YES".into()], rows)
    }
}
