//! Leave-one-cluster-out and cluster bootstrap robustness checks.

use crate::error::StatsError;
use crate::numerics::RngStream;

use super::{Cluster, ClusteredBinaryDataset};

/// A named per-replicate statistic. `None` marks the statistic as undefined
/// on that replicate (for example, a group absent after resampling); missing
/// replicates are counted, never silently dropped.
pub struct ResampleStatistic<'a> {
    pub name: String,
    pub compute: Box<dyn Fn(&ClusteredBinaryDataset) -> Option<f64> + 'a>,
    /// When set, the report tracks the fraction of replicates with
    /// value < threshold (missing replicates count as not meeting it).
    pub significance_threshold: Option<f64>,
}

impl<'a> ResampleStatistic<'a> {
    pub fn new<F>(name: &str, compute: F) -> Self
    where
        F: Fn(&ClusteredBinaryDataset) -> Option<f64> + 'a,
    {
        Self {
            name: name.to_string(),
            compute: Box::new(compute),
            significance_threshold: None,
        }
    }

    pub fn with_significance(mut self, threshold: f64) -> Self {
        self.significance_threshold = Some(threshold);
        self
    }
}

/// Summary of one statistic across replicates.
#[derive(Debug, Clone, serde::Serialize)]
pub struct StatisticSummary {
    pub name: String,
    /// Per-replicate values in replicate order; `None` when undefined.
    pub values: Vec<Option<f64>>,
    pub missing: usize,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub p2_5: Option<f64>,
    pub median: Option<f64>,
    pub p97_5: Option<f64>,
    /// Fraction of all replicates with value < threshold, when requested.
    pub significant_fraction: Option<f64>,
}

/// Replicate-level report for a resampling procedure.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ResampleReport {
    pub replicates: usize,
    pub statistics: Vec<StatisticSummary>,
}

impl ResampleReport {
    pub fn statistic(&self, name: &str) -> Option<&StatisticSummary> {
        self.statistics.iter().find(|s| s.name == name)
    }
}

/// G replicates, each omitting one cluster.
pub fn leave_one_cluster_out(
    dataset: &ClusteredBinaryDataset,
    statistics: &[ResampleStatistic],
) -> Result<ResampleReport, StatsError> {
    let g = dataset.n_clusters();
    if g < 2 {
        return Err(StatsError::TooFewClusters { need: 2, found: g });
    }
    let mut per_stat: Vec<Vec<Option<f64>>> = vec![Vec::with_capacity(g); statistics.len()];
    for omit in 0..g {
        let clusters: Vec<Cluster> = dataset
            .clusters()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != omit)
            .map(|(_, c)| c.clone())
            .collect();
        let replicate = ClusteredBinaryDataset::from_clusters(clusters);
        for (s, stat) in statistics.iter().enumerate() {
            per_stat[s].push((stat.compute)(&replicate));
        }
    }
    Ok(summarize(g, statistics, per_stat))
}

/// Cluster bootstrap: each replicate resamples G clusters with replacement,
/// carrying every cluster's rows whole. Replicate b draws its indices from
/// stream id b of the given stream's seed, so reports are identical under any
/// parallel schedule.
pub fn cluster_bootstrap(
    dataset: &ClusteredBinaryDataset,
    statistics: &[ResampleStatistic],
    replicates: u32,
    stream: &RngStream,
) -> Result<ResampleReport, StatsError> {
    let g = dataset.n_clusters();
    if g < 2 {
        return Err(StatsError::TooFewClusters { need: 2, found: g });
    }
    if replicates == 0 {
        return Err(StatsError::BadReplicateCount);
    }
    let mut per_stat: Vec<Vec<Option<f64>>> =
        vec![Vec::with_capacity(replicates as usize); statistics.len()];
    for b in 1..=replicates {
        let mut rng = RngStream::new(stream.seed(), b as u64);
        let clusters: Vec<Cluster> = (0..g)
            .map(|_| dataset.clusters()[rng.below(g)].clone())
            .collect();
        let replicate = ClusteredBinaryDataset::from_clusters(clusters);
        for (s, stat) in statistics.iter().enumerate() {
            per_stat[s].push((stat.compute)(&replicate));
        }
    }
    Ok(summarize(replicates as usize, statistics, per_stat))
}

/// Stratified variant: resample within each group label separately, keeping
/// the per-group cluster counts fixed.
pub fn cluster_bootstrap_stratified(
    dataset: &ClusteredBinaryDataset,
    statistics: &[ResampleStatistic],
    replicates: u32,
    stream: &RngStream,
) -> Result<ResampleReport, StatsError> {
    let g = dataset.n_clusters();
    if g < 2 {
        return Err(StatsError::TooFewClusters { need: 2, found: g });
    }
    if replicates == 0 {
        return Err(StatsError::BadReplicateCount);
    }
    let labels = dataset.group_labels();
    let strata: Vec<Vec<usize>> = labels
        .iter()
        .map(|l| {
            dataset
                .clusters()
                .iter()
                .enumerate()
                .filter(|(_, c)| &c.group == l)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let mut per_stat: Vec<Vec<Option<f64>>> =
        vec![Vec::with_capacity(replicates as usize); statistics.len()];
    for b in 1..=replicates {
        let mut rng = RngStream::new(stream.seed(), b as u64);
        let mut clusters = Vec::with_capacity(g);
        for stratum in &strata {
            for _ in 0..stratum.len() {
                clusters.push(dataset.clusters()[stratum[rng.below(stratum.len())]].clone());
            }
        }
        let replicate = ClusteredBinaryDataset::from_clusters(clusters);
        for (s, stat) in statistics.iter().enumerate() {
            per_stat[s].push((stat.compute)(&replicate));
        }
    }
    Ok(summarize(replicates as usize, statistics, per_stat))
}

fn summarize(
    replicates: usize,
    statistics: &[ResampleStatistic],
    per_stat: Vec<Vec<Option<f64>>>,
) -> ResampleReport {
    let summaries = statistics
        .iter()
        .zip(per_stat)
        .map(|(stat, values)| {
            let mut present: Vec<f64> = values.iter().flatten().copied().collect();
            present.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let missing = values.len() - present.len();
            let significant_fraction = stat.significance_threshold.map(|thr| {
                values
                    .iter()
                    .filter(|v| matches!(v, Some(x) if *x < thr))
                    .count() as f64
                    / values.len() as f64
            });
            StatisticSummary {
                name: stat.name.clone(),
                min: present.first().copied(),
                max: present.last().copied(),
                p2_5: percentile(&present, 0.025),
                median: percentile(&present, 0.5),
                p97_5: percentile(&present, 0.975),
                missing,
                significant_fraction,
                values,
            }
        })
        .collect();
    ResampleReport {
        replicates,
        statistics: summaries,
    }
}

/// Linear-interpolation percentile on a sorted slice.
pub(crate) fn percentile(sorted: &[f64], q: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    Some(sorted[lo] + (sorted[hi] - sorted[lo]) * frac)
}
