//! Contingency analysis, interval estimation, clustering corrections,
//! permutation and sign tests, and multiplicity control.

use crate::error::StatsError;
use crate::numerics::{chi2_sf, ln_gamma, normal_quantile, RngStream};

use super::ClusteredBinaryDataset;

/// r×c counts with labeled margins.
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTable {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    counts: Vec<Vec<u64>>,
    total: u64,
}

impl ContingencyTable {
    pub fn new(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        counts: Vec<Vec<u64>>,
    ) -> Result<Self, StatsError> {
        if counts.len() != row_labels.len()
            || counts.iter().any(|r| r.len() != col_labels.len())
        {
            return Err(StatsError::Invalid(
                "count matrix does not match label dimensions".into(),
            ));
        }
        let total = counts.iter().flatten().sum();
        Ok(Self {
            row_labels,
            col_labels,
            counts,
            total,
        })
    }

    /// Tally (row label, column label) pairs; labels ordered by first appearance.
    pub fn from_pairs<I>(pairs: I) -> Result<Self, StatsError>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        let mut row_labels: Vec<String> = Vec::new();
        let mut col_labels: Vec<String> = Vec::new();
        let mut cells: Vec<(usize, usize)> = Vec::new();
        for (r, c) in pairs {
            let ri = match row_labels.iter().position(|x| *x == r) {
                Some(i) => i,
                None => {
                    row_labels.push(r);
                    row_labels.len() - 1
                }
            };
            let ci = match col_labels.iter().position(|x| *x == c) {
                Some(i) => i,
                None => {
                    col_labels.push(c);
                    col_labels.len() - 1
                }
            };
            cells.push((ri, ci));
        }
        let mut counts = vec![vec![0u64; col_labels.len()]; row_labels.len()];
        for (r, c) in cells {
            counts[r][c] += 1;
        }
        Self::new(row_labels, col_labels, counts)
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn count(&self, row: usize, col: usize) -> u64 {
        self.counts[row][col]
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn row_totals(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_totals(&self) -> Vec<u64> {
        (0..self.col_labels.len())
            .map(|c| self.counts.iter().map(|r| r[c]).sum())
            .collect()
    }
}

/// Tally compliant records into a contingency table.
///
/// Returns the table and how many records the compliance filter excluded.
pub fn contingency_from_records<T, RK, CK, F>(
    records: &[T],
    row_key: RK,
    col_key: CK,
    include: F,
) -> Result<(ContingencyTable, usize), StatsError>
where
    RK: Fn(&T) -> String,
    CK: Fn(&T) -> String,
    F: Fn(&T) -> bool,
{
    let mut pairs = Vec::new();
    let mut excluded = 0usize;
    for rec in records {
        if include(rec) {
            pairs.push((row_key(rec), col_key(rec)));
        } else {
            excluded += 1;
        }
    }
    if pairs.is_empty() {
        return Err(StatsError::EmptyCompliantSubset);
    }
    Ok((ContingencyTable::from_pairs(pairs)?, excluded))
}

/// Pearson χ² result.
#[derive(Debug, Clone, Copy)]
pub struct ChiSquare {
    pub statistic: f64,
    pub df: u32,
    pub p: f64,
}

/// Pearson χ² test of independence.
pub fn chi_square(table: &ContingencyTable) -> Result<ChiSquare, StatsError> {
    let rows = table.row_totals();
    let cols = table.col_totals();
    if rows.iter().any(|&t| t == 0) {
        return Err(StatsError::ZeroMargin("row"));
    }
    if cols.iter().any(|&t| t == 0) {
        return Err(StatsError::ZeroMargin("column"));
    }
    let n = table.total() as f64;
    let mut statistic = 0.0;
    for (i, &rt) in rows.iter().enumerate() {
        for (j, &ct) in cols.iter().enumerate() {
            let expected = rt as f64 * ct as f64 / n;
            let observed = table.count(i, j) as f64;
            statistic += (observed - expected).powi(2) / expected;
        }
    }
    let df = ((rows.len() - 1) * (cols.len() - 1)) as u32;
    let p = if df == 0 { 1.0 } else { chi2_sf(statistic, df)? };
    Ok(ChiSquare { statistic, df, p })
}

/// Cramér's V: √(χ² / (N · min(r−1, c−1))).
pub fn cramers_v(table: &ContingencyTable) -> Result<f64, StatsError> {
    let chi2 = chi_square(table)?;
    let min_dim = (table.row_labels().len() - 1).min(table.col_labels().len() - 1);
    if min_dim == 0 {
        return Ok(0.0);
    }
    Ok((chi2.statistic / (table.total() as f64 * min_dim as f64)).sqrt())
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(k: u64, n: u64, confidence: f64) -> Result<(f64, f64), StatsError> {
    if n == 0 {
        return Err(StatsError::Invalid("wilson interval requires n >= 1".into()));
    }
    if k > n {
        return Err(StatsError::Invalid(format!(
            "wilson interval requires k <= n (k={k}, n={n})"
        )));
    }
    let z = normal_quantile((1.0 + confidence) / 2.0)?;
    let nf = n as f64;
    let p_hat = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p_hat + z2 / (2.0 * nf)) / denom;
    let half = z * (p_hat * (1.0 - p_hat) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    // At the boundary cells the endpoint is exactly the point estimate;
    // keep it there rather than a rounding ulp away.
    let lo = if k == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if k == n { 1.0 } else { (center + half).min(1.0) };
    Ok((lo, hi))
}

/// Intracluster correlation with its design effect.
#[derive(Debug, Clone, Copy)]
pub struct ClusterSummary {
    /// ANOVA-type ICC estimate, clamped to [0, 1].
    pub icc: f64,
    /// Mean cluster size N/G.
    pub mean_cluster_size: f64,
    /// 1 + (m̄ − 1)·ρ.
    pub design_effect: f64,
}

/// One-way ANOVA estimator of the ICC on binary outcomes.
///
/// The group label (tone) is a fixed effect: cluster means are deviated from
/// their group mean before the between-cluster sum of squares, so systematic
/// group differences do not inflate the estimate. With adjusted cluster size
/// m₀ = (N − Σmᵢ²/N)/(G−1), ρ̂ = (MSB − MSW)/(MSB + (m₀−1)·MSW).
pub fn estimate_icc(dataset: &ClusteredBinaryDataset) -> Result<ClusterSummary, StatsError> {
    let g = dataset.n_clusters();
    if g < 2 {
        return Err(StatsError::TooFewClusters { need: 2, found: g });
    }
    if dataset.clusters().iter().all(|c| c.size() < 2) {
        return Err(StatsError::AllSingletonClusters);
    }
    let n = dataset.n_observations() as f64;
    let labels = dataset.group_labels();
    let q = labels.len();

    let group_mean: Vec<f64> = dataset
        .group_counts(&labels)
        .iter()
        .map(|&(k, tot)| k as f64 / tot as f64)
        .collect();
    let group_index =
        |group: &str| labels.iter().position(|l| l == group).expect("known label");

    let mut ssb = 0.0;
    let mut ssw = 0.0;
    let mut sum_sq_sizes = 0.0;
    for cluster in dataset.clusters() {
        let m = cluster.size() as f64;
        sum_sq_sizes += m * m;
        let cluster_mean = cluster.successes() as f64 / m;
        let centered = cluster_mean - group_mean[group_index(&cluster.group)];
        ssb += m * centered * centered;
        for &y in &cluster.outcomes {
            let d = (y as u8 as f64) - cluster_mean;
            ssw += d * d;
        }
    }
    let df_between = (g - q).max(1) as f64;
    let df_within = (dataset.n_observations() - g).max(1) as f64;
    let msb = ssb / df_between;
    let msw = ssw / df_within;
    let m0 = (n - sum_sq_sizes / n) / (g as f64 - 1.0);
    let denom = msb + (m0 - 1.0) * msw;
    let icc = if denom <= 0.0 {
        0.0
    } else {
        ((msb - msw) / denom).clamp(0.0, 1.0)
    };
    let mean_cluster_size = dataset.mean_cluster_size();
    Ok(ClusterSummary {
        icc,
        mean_cluster_size,
        design_effect: 1.0 + (mean_cluster_size - 1.0) * icc,
    })
}

/// First-order Rao–Scott correction: divide the χ² statistic by the design
/// effect, keep the degrees of freedom.
pub fn rao_scott(statistic: f64, df: u32, design_effect: f64) -> Result<(f64, f64), StatsError> {
    if design_effect < 1.0 {
        return Err(StatsError::BadDesignEffect(design_effect));
    }
    let adjusted = statistic / design_effect;
    Ok((adjusted, chi2_sf(adjusted, df)?))
}

/// Which statistic a permutation test tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermutationStatistic {
    ChiSquare,
    CramersV,
}

/// Group-association statistic that tolerates degenerate permuted tables.
fn permutation_statistic(
    per_cluster: &[(u64, u64)],
    labels: &[usize],
    n_groups: usize,
    which: PermutationStatistic,
) -> f64 {
    let mut yes = vec![0u64; n_groups];
    let mut tot = vec![0u64; n_groups];
    for (i, &(k, n)) in per_cluster.iter().enumerate() {
        yes[labels[i]] += k;
        tot[labels[i]] += n;
    }
    let n: u64 = tot.iter().sum();
    let yes_total: u64 = yes.iter().sum();
    let no_total = n - yes_total;
    if yes_total == 0 || no_total == 0 {
        return 0.0;
    }
    let mut statistic = 0.0;
    let mut active_rows = 0usize;
    for g in 0..n_groups {
        if tot[g] == 0 {
            continue;
        }
        active_rows += 1;
        for (observed, col_total) in [(yes[g], yes_total), (tot[g] - yes[g], no_total)] {
            let expected = tot[g] as f64 * col_total as f64 / n as f64;
            statistic += (observed as f64 - expected).powi(2) / expected;
        }
    }
    if active_rows < 2 {
        return 0.0;
    }
    match which {
        PermutationStatistic::ChiSquare => statistic,
        PermutationStatistic::CramersV => (statistic / n as f64).sqrt(),
    }
}

/// Cluster permutation test: relabel the group factor across clusters,
/// preserving the observed label multiset, and recompute the statistic B
/// times. p = (1 + #{T_b ≥ T_obs}) / (1 + B).
///
/// Replicate b draws its shuffle from stream id b of the given stream's seed,
/// so the p-value does not depend on scheduling.
pub fn cluster_permutation_test(
    dataset: &ClusteredBinaryDataset,
    statistic: PermutationStatistic,
    replicates: u32,
    stream: &RngStream,
) -> Result<(f64, f64), StatsError> {
    if replicates == 0 {
        return Err(StatsError::BadReplicateCount);
    }
    let labels = dataset.group_labels();
    if labels.len() < 2 {
        return Err(StatsError::TooFewGroups(labels.len()));
    }
    let per_cluster: Vec<(u64, u64)> = dataset
        .clusters()
        .iter()
        .map(|c| (c.successes() as u64, c.size() as u64))
        .collect();
    let observed_labels: Vec<usize> = dataset
        .clusters()
        .iter()
        .map(|c| labels.iter().position(|l| *l == c.group).unwrap())
        .collect();
    let observed = permutation_statistic(&per_cluster, &observed_labels, labels.len(), statistic);

    let mut at_least_as_extreme = 0u32;
    let mut shuffled = observed_labels.clone();
    for b in 1..=replicates {
        let mut rng = RngStream::new(stream.seed(), b as u64);
        shuffled.copy_from_slice(&observed_labels);
        // Fisher-Yates over cluster labels.
        for i in (1..shuffled.len()).rev() {
            let j = rng.below(i + 1);
            shuffled.swap(i, j);
        }
        let t = permutation_statistic(&per_cluster, &shuffled, labels.len(), statistic);
        if t >= observed {
            at_least_as_extreme += 1;
        }
    }
    let p = (1.0 + at_least_as_extreme as f64) / (1.0 + replicates as f64);
    Ok((observed, p))
}

/// Outcome of a paired sign test.
#[derive(Debug, Clone, Copy)]
pub struct SignTestResult {
    pub n_pos: u64,
    pub n_neg: u64,
    pub n_ties: u64,
    /// Exact two-sided binomial p on (n_pos, n_pos + n_neg) at ½, capped at 1.
    pub p: f64,
    /// Mean of (B − A) over the supplied pairs.
    pub mean_delta: f64,
}

/// Paired sign test over per-cluster (value_A, value_B) pairs. Ties drop out
/// of the binomial but still count toward the mean difference.
pub fn paired_sign_test(pairs: &[(f64, f64)]) -> Result<SignTestResult, StatsError> {
    if pairs.is_empty() {
        return Err(StatsError::Invalid("sign test requires at least one pair".into()));
    }
    let mut n_pos = 0u64;
    let mut n_neg = 0u64;
    let mut n_ties = 0u64;
    let mut delta_sum = 0.0;
    for &(a, b) in pairs {
        let d = b - a;
        delta_sum += d;
        if d > 0.0 {
            n_pos += 1;
        } else if d < 0.0 {
            n_neg += 1;
        } else {
            n_ties += 1;
        }
    }
    let n = n_pos + n_neg;
    let p = if n == 0 {
        1.0
    } else {
        let k = n_pos.min(n_neg);
        (2.0 * binomial_cdf_half(k, n)).min(1.0)
    };
    Ok(SignTestResult {
        n_pos,
        n_neg,
        n_ties,
        p,
        mean_delta: delta_sum / pairs.len() as f64,
    })
}

/// P(X ≤ k) for X ~ Binomial(n, ½). Exact integer arithmetic up to n = 62
/// (so ties-heavy small samples give p = 1 exactly), log space beyond.
fn binomial_cdf_half(k: u64, n: u64) -> f64 {
    if n <= 62 {
        let mut choose: u128 = 1;
        let mut sum: u128 = 0;
        for i in 0..=k {
            if i > 0 {
                choose = choose * (n - i + 1) as u128 / i as u128;
            }
            sum += choose;
        }
        return sum as f64 / (1u128 << n) as f64;
    }
    let ln_half_n = -(n as f64) * std::f64::consts::LN_2;
    let ln_n_fact = ln_gamma(n as f64 + 1.0).expect("positive argument");
    (0..=k)
        .map(|i| {
            let ln_choose = ln_n_fact
                - ln_gamma(i as f64 + 1.0).expect("positive argument")
                - ln_gamma((n - i) as f64 + 1.0).expect("positive argument");
            (ln_choose + ln_half_n).exp()
        })
        .sum()
}

/// Holm–Bonferroni step-down adjustment; original order restored.
pub fn holm_adjust(pvalues: &[f64]) -> Result<Vec<f64>, StatsError> {
    validate_pvalues(pvalues)?;
    let m = pvalues.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| pvalues[a].partial_cmp(&pvalues[b]).unwrap());
    let mut adjusted = vec![0.0; m];
    let mut running_max = 0.0_f64;
    for (rank, &idx) in order.iter().enumerate() {
        let scaled = (m - rank) as f64 * pvalues[idx];
        running_max = running_max.max(scaled);
        adjusted[idx] = running_max.min(1.0);
    }
    Ok(adjusted)
}

/// Benjamini–Hochberg step-up adjustment; original order restored.
pub fn bh_adjust(pvalues: &[f64]) -> Result<Vec<f64>, StatsError> {
    validate_pvalues(pvalues)?;
    let m = pvalues.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| pvalues[a].partial_cmp(&pvalues[b]).unwrap());
    let mut adjusted = vec![0.0; m];
    let mut running_min = f64::INFINITY;
    for rank in (0..m).rev() {
        let idx = order[rank];
        let scaled = pvalues[idx] * m as f64 / (rank + 1) as f64;
        running_min = running_min.min(scaled);
        adjusted[idx] = running_min.min(1.0);
    }
    Ok(adjusted)
}

fn validate_pvalues(pvalues: &[f64]) -> Result<(), StatsError> {
    for &p in pvalues {
        if !(0.0..=1.0).contains(&p) {
            return Err(StatsError::BadPValue(p));
        }
    }
    Ok(())
}
