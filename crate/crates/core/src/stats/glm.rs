//! Binomial logit with cluster-robust covariance and odds-ratio reporting.

use crate::error::StatsError;
use crate::numerics::chi2_sf;

use super::ClusteredBinaryDataset;

/// N×K design with named columns, a binary response, and a cluster id per row.
#[derive(Debug, Clone)]
pub struct DesignMatrix {
    col_names: Vec<String>,
    data: Vec<f64>, // row-major
    response: Vec<bool>,
    clusters: Vec<String>,
    n: usize,
    k: usize,
}

impl DesignMatrix {
    pub fn new(
        col_names: Vec<String>,
        rows: Vec<Vec<f64>>,
        response: Vec<bool>,
        clusters: Vec<String>,
    ) -> Result<Self, StatsError> {
        let k = col_names.len();
        let n = rows.len();
        if k == 0 {
            return Err(StatsError::Invalid("design needs at least one column".into()));
        }
        if rows.iter().any(|r| r.len() != k) || response.len() != n || clusters.len() != n {
            return Err(StatsError::Invalid(
                "design rows, response, and clusters must agree in shape".into(),
            ));
        }
        // Degenerate-column screening: a column of zeros can never be identified.
        for (j, name) in col_names.iter().enumerate() {
            if rows.iter().all(|r| r[j] == 0.0) {
                return Err(StatsError::RankDeficient(name.clone()));
            }
        }
        let data = rows.into_iter().flatten().collect();
        Ok(Self {
            col_names,
            data,
            response,
            clusters,
            n,
            k,
        })
    }

    /// Intercept plus one indicator column per non-reference group.
    pub fn with_group_indicators(
        dataset: &ClusteredBinaryDataset,
        reference_group: &str,
    ) -> Result<Self, StatsError> {
        let labels = dataset.group_labels();
        if !labels.iter().any(|l| l == reference_group) {
            return Err(StatsError::Invalid(format!(
                "reference group {reference_group:?} not present"
            )));
        }
        let others: Vec<&String> = labels.iter().filter(|l| *l != reference_group).collect();
        let mut col_names = vec!["intercept".to_string()];
        col_names.extend(others.iter().map(|l| format!("group={l}")));
        let mut rows = Vec::new();
        let mut response = Vec::new();
        let mut clusters = Vec::new();
        for cluster in dataset.clusters() {
            for &y in &cluster.outcomes {
                let mut row = vec![1.0];
                row.extend(
                    others
                        .iter()
                        .map(|l| if **l == cluster.group { 1.0 } else { 0.0 }),
                );
                rows.push(row);
                response.push(y);
                clusters.push(cluster.id.clone());
            }
        }
        Self::new(col_names, rows, response, clusters)
    }

    pub fn n_rows(&self) -> usize {
        self.n
    }

    pub fn n_cols(&self) -> usize {
        self.k
    }

    pub fn col_names(&self) -> &[String] {
        &self.col_names
    }

    pub fn response(&self) -> &[bool] {
        &self.response
    }

    fn x(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.k + j]
    }
}

/// Maximum-likelihood logit fit.
#[derive(Debug, Clone)]
pub struct GlmFit {
    pub col_names: Vec<String>,
    pub coefficients: Vec<f64>,
    /// Model-based covariance (X'WX)⁻¹ at the MLE.
    pub model_covariance: Vec<Vec<f64>>,
    pub converged: bool,
    pub iterations: usize,
    pub log_likelihood: f64,
    /// Columns whose coefficient or fitted class sits at the boundary.
    pub separation_warnings: Vec<String>,
    fitted: Vec<f64>,
}

impl GlmFit {
    /// Fitted success probabilities per row.
    pub fn fitted(&self) -> &[f64] {
        &self.fitted
    }

    /// Standard errors from a covariance matrix.
    pub fn standard_errors(covariance: &[Vec<f64>]) -> Vec<f64> {
        covariance
            .iter()
            .enumerate()
            .map(|(j, row)| row[j].max(0.0).sqrt())
            .collect()
    }

    /// Two-sided Wald p-value for β/se, via the χ²₁ survival function.
    pub fn wald_p(beta: f64, se: f64) -> Result<f64, StatsError> {
        let z = beta / se;
        Ok(chi2_sf(z * z, 1)?)
    }
}

const MAX_IRLS_ITER: usize = 100;
const IRLS_TOL: f64 = 1e-8;
const WEIGHT_FLOOR: f64 = 1e-10;
const SEPARATION_BETA: f64 = 15.0;
const SEPARATION_PROB: f64 = 1e-8;

/// Fit a binomial logit by iteratively reweighted least squares.
///
/// Newton steps are halved whenever they would decrease the log-likelihood,
/// so the likelihood path is non-decreasing. Separation is reported, never
/// silently regularized.
pub fn fit_logit(design: &DesignMatrix) -> Result<GlmFit, StatsError> {
    let (n, k) = (design.n_rows(), design.n_cols());
    if n <= k {
        return Err(StatsError::TooFewObservations { n, k });
    }
    let successes = design.response.iter().filter(|&&y| y).count();
    if successes == 0 || successes == n {
        return Err(StatsError::ConstantResponse);
    }

    let mut beta = vec![0.0; k];
    let mut log_likelihood = logit_loglik(design, &beta);
    let mut converged = false;
    let mut iterations = 0;
    let mut fitted = vec![0.5; n];

    for iter in 1..=MAX_IRLS_ITER {
        iterations = iter;
        // Weighted normal equations: (X'WX) δ = X'W z with z = η + (y−p)/w.
        let mut xtwx = vec![vec![0.0; k]; k];
        let mut xtwz = vec![0.0; k];
        for i in 0..n {
            let eta: f64 = (0..k).map(|j| design.x(i, j) * beta[j]).sum();
            let p = sigmoid(eta);
            fitted[i] = p;
            let w = (p * (1.0 - p)).max(WEIGHT_FLOOR);
            let z = eta + (design.response[i] as u8 as f64 - p) / w;
            for a in 0..k {
                let xa = design.x(i, a);
                xtwz[a] += xa * w * z;
                for b in a..k {
                    xtwx[a][b] += xa * w * design.x(i, b);
                }
            }
        }
        mirror_lower(&mut xtwx);
        let chol = cholesky(&xtwx)
            .map_err(|j| StatsError::RankDeficient(design.col_names[j].clone()))?;
        let mut proposal = cholesky_solve(&chol, &xtwz);

        // Step-halve toward the current iterate if the likelihood would drop.
        let mut next_ll = logit_loglik(design, &proposal);
        let mut halvings = 0;
        while next_ll < log_likelihood - 1e-12 && halvings < 40 {
            for j in 0..k {
                proposal[j] = 0.5 * (proposal[j] + beta[j]);
            }
            next_ll = logit_loglik(design, &proposal);
            halvings += 1;
        }

        let max_delta = beta
            .iter()
            .zip(&proposal)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        beta = proposal;
        log_likelihood = next_ll;
        if max_delta < IRLS_TOL {
            converged = true;
            break;
        }
    }

    // Final weights and fitted values at the accepted coefficients.
    let mut xtwx = vec![vec![0.0; k]; k];
    for i in 0..n {
        let eta: f64 = (0..k).map(|j| design.x(i, j) * beta[j]).sum();
        let p = sigmoid(eta);
        fitted[i] = p;
        let w = (p * (1.0 - p)).max(WEIGHT_FLOOR);
        for a in 0..k {
            for b in a..k {
                xtwx[a][b] += design.x(i, a) * w * design.x(i, b);
            }
        }
    }
    mirror_lower(&mut xtwx);
    let chol =
        cholesky(&xtwx).map_err(|j| StatsError::RankDeficient(design.col_names[j].clone()))?;
    let model_covariance = cholesky_inverse(&chol);

    let mut separation_warnings = Vec::new();
    for (j, name) in design.col_names.iter().enumerate() {
        let big_beta = beta[j].abs() > SEPARATION_BETA;
        // Indicator columns: flag when the whole covariate class is fitted at
        // a boundary.
        let is_indicator = (0..n).all(|i| design.x(i, j) == 0.0 || design.x(i, j) == 1.0);
        let class_at_boundary = is_indicator && {
            let class: Vec<usize> = (0..n).filter(|&i| design.x(i, j) == 1.0).collect();
            !class.is_empty()
                && (class.iter().all(|&i| fitted[i] < SEPARATION_PROB)
                    || class.iter().all(|&i| fitted[i] > 1.0 - SEPARATION_PROB))
        };
        if big_beta || class_at_boundary {
            separation_warnings.push(name.clone());
        }
    }

    Ok(GlmFit {
        col_names: design.col_names.clone(),
        coefficients: beta,
        model_covariance,
        converged,
        iterations,
        log_likelihood,
        separation_warnings,
        fitted,
    })
}

/// Small-sample handling for the cluster-robust covariance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovCorrection {
    None,
    /// Scale the meat by (G/(G−1)) · ((N−1)/(N−K)).
    Cr1,
}

/// Sandwich covariance clustered on the design's cluster ids:
/// B⁻¹ M B⁻¹ with bread B = X'WX and meat M = Σ_g (X_g'u_g)(X_g'u_g)'.
pub fn cluster_robust_cov(
    fit: &GlmFit,
    design: &DesignMatrix,
    correction: CovCorrection,
) -> Result<Vec<Vec<f64>>, StatsError> {
    if !fit.converged {
        return Err(StatsError::NotConverged);
    }
    let (n, k) = (design.n_rows(), design.n_cols());
    let mut cluster_order: Vec<&String> = Vec::new();
    let mut scores: Vec<Vec<f64>> = Vec::new();
    for i in 0..n {
        let id = &design.clusters[i];
        let slot = match cluster_order.iter().position(|c| *c == id) {
            Some(s) => s,
            None => {
                cluster_order.push(id);
                scores.push(vec![0.0; k]);
                scores.len() - 1
            }
        };
        let u = design.response[i] as u8 as f64 - fit.fitted[i];
        for j in 0..k {
            scores[slot][j] += u * design.x(i, j);
        }
    }
    let g = scores.len();
    if g < 2 {
        return Err(StatsError::TooFewClusters { need: 2, found: g });
    }

    let mut meat = vec![vec![0.0; k]; k];
    for s in &scores {
        for a in 0..k {
            for b in 0..k {
                meat[a][b] += s[a] * s[b];
            }
        }
    }
    if correction == CovCorrection::Cr1 {
        let scale =
            (g as f64 / (g as f64 - 1.0)) * ((n as f64 - 1.0) / (n as f64 - k as f64));
        for row in &mut meat {
            for v in row {
                *v *= scale;
            }
        }
    }

    // B⁻¹ M B⁻¹ using the cached model covariance as B⁻¹.
    let left = mat_mul(&fit.model_covariance, &meat);
    Ok(mat_mul(&left, &fit.model_covariance))
}

/// One exponentiated coefficient with its Wald interval.
#[derive(Debug, Clone)]
pub struct OddsRatio {
    pub name: String,
    pub odds_ratio: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// OR = exp(β) with CI [exp(β − 1.96·SE), exp(β + 1.96·SE)].
pub fn odds_ratios(fit: &GlmFit, covariance: &[Vec<f64>]) -> Result<Vec<OddsRatio>, StatsError> {
    if !fit.converged {
        return Err(StatsError::NotConverged);
    }
    let se = GlmFit::standard_errors(covariance);
    Ok(fit
        .coefficients
        .iter()
        .zip(&fit.col_names)
        .zip(&se)
        .map(|((beta, name), se)| OddsRatio {
            name: name.clone(),
            odds_ratio: beta.exp(),
            ci_low: (beta - 1.96 * se).exp(),
            ci_high: (beta + 1.96 * se).exp(),
        })
        .collect())
}

fn sigmoid(eta: f64) -> f64 {
    1.0 / (1.0 + (-eta).exp())
}

fn logit_loglik(design: &DesignMatrix, beta: &[f64]) -> f64 {
    let k = design.n_cols();
    (0..design.n_rows())
        .map(|i| {
            let eta: f64 = (0..k).map(|j| design.x(i, j) * beta[j]).sum();
            // y·η − ln(1 + e^η), computed stably on both signs.
            let y = design.response[i] as u8 as f64;
            if eta > 0.0 {
                y * eta - eta - (-eta).exp().ln_1p()
            } else {
                y * eta - eta.exp().ln_1p()
            }
        })
        .sum()
}

fn mirror_lower(m: &mut [Vec<f64>]) {
    let k = m.len();
    for a in 0..k {
        for b in 0..a {
            m[a][b] = m[b][a];
        }
    }
}

/// Cholesky factor of an SPD matrix; Err(j) names the failing pivot column.
fn cholesky(a: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, usize> {
    let k = a.len();
    let mut l = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..=i {
            let mut sum = a[i][j];
            for t in 0..j {
                sum -= l[i][t] * l[j][t];
            }
            if i == j {
                if sum <= 1e-12 * a[i][i].abs().max(1.0) {
                    return Err(i);
                }
                l[i][j] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    Ok(l)
}

fn cholesky_solve(l: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let k = l.len();
    let mut y = vec![0.0; k];
    for i in 0..k {
        let mut sum = b[i];
        for t in 0..i {
            sum -= l[i][t] * y[t];
        }
        y[i] = sum / l[i][i];
    }
    let mut x = vec![0.0; k];
    for i in (0..k).rev() {
        let mut sum = y[i];
        for t in (i + 1)..k {
            sum -= l[t][i] * x[t];
        }
        x[i] = sum / l[i][i];
    }
    x
}

fn cholesky_inverse(l: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = l.len();
    let mut inv = vec![vec![0.0; k]; k];
    for col in 0..k {
        let mut e = vec![0.0; k];
        e[col] = 1.0;
        let x = cholesky_solve(l, &e);
        for row in 0..k {
            inv[row][col] = x[row];
        }
    }
    // Symmetrize away round-off.
    let mut out = vec![vec![0.0; k]; k];
    for a in 0..k {
        for b in 0..k {
            out[a][b] = 0.5 * (inv[a][b] + inv[b][a]);
        }
    }
    out
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let m = b[0].len();
    let inner = b.len();
    let mut out = vec![vec![0.0; m]; n];
    for i in 0..n {
        for t in 0..inner {
            let av = a[i][t];
            for j in 0..m {
                out[i][j] += av * b[t][j];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngStream;
    use approx::assert_abs_diff_eq;

    /// 470 rows expanded from the tone × outcome counts, clusters assigned
    /// round-robin over 10 interactions per tone.
    pub(crate) fn tone_design() -> DesignMatrix {
        let cells: [(&str, u64, u64); 3] = [
            ("abusive", 28, 156),
            ("unclear", 93, 154),
            ("friendly", 156, 160),
        ];
        let mut rows = Vec::new();
        for (tone, yes, n) in cells {
            for i in 0..n {
                let outcome = i < yes;
                rows.push((format!("{tone}_{}", i % 10), tone.to_string(), outcome));
            }
        }
        let ds = ClusteredBinaryDataset::from_rows(rows).unwrap();
        DesignMatrix::with_group_indicators(&ds, "friendly").unwrap()
    }

    #[test]
    fn saturated_tone_model_matches_published_coefficients() {
        let design = tone_design();
        let fit = fit_logit(&design).unwrap();
        assert!(fit.converged);
        let idx = |name: &str| {
            fit.col_names
                .iter()
                .position(|c| c == name)
                .unwrap_or_else(|| panic!("missing column {name}"))
        };
        assert_abs_diff_eq!(fit.coefficients[idx("intercept")], 3.664, epsilon = 0.01);
        assert_abs_diff_eq!(
            fit.coefficients[idx("group=unclear")],
            -3.242,
            epsilon = 0.01
        );
        assert_abs_diff_eq!(
            fit.coefficients[idx("group=abusive")],
            -5.183,
            epsilon = 0.01
        );

        // Saturated one-factor fit reproduces cell proportions exactly.
        for (i, &p) in fit.fitted().iter().enumerate() {
            let expected = match design
                .col_names()
                .iter()
                .enumerate()
                .skip(1)
                .find(|(j, _)| design.x(i, *j) == 1.0)
            {
                Some((_, name)) if name == "group=abusive" => 28.0 / 156.0,
                Some((_, name)) if name == "group=unclear" => 93.0 / 154.0,
                _ => 156.0 / 160.0,
            };
            assert_abs_diff_eq!(p, expected, epsilon = 1e-8);
        }
    }

    #[test]
    fn intercept_only_balanced_response_is_zero() {
        let rows: Vec<(String, String, bool)> = (0..50)
            .map(|i| (format!("c{}", i % 5), "g".to_string(), i % 2 == 0))
            .collect();
        let ds = ClusteredBinaryDataset::from_rows(rows).unwrap();
        let design = DesignMatrix::new(
            vec!["intercept".into()],
            vec![vec![1.0]; ds.n_observations()],
            ds.clusters()
                .iter()
                .flat_map(|c| c.outcomes.clone())
                .collect(),
            ds.clusters()
                .iter()
                .flat_map(|c| vec![c.id.clone(); c.size()])
                .collect(),
        )
        .unwrap();
        let fit = fit_logit(&design).unwrap();
        assert_abs_diff_eq!(fit.coefficients[0], 0.0, epsilon = 1e-10);
    }

    #[test]
    fn constant_response_and_rank_deficiency_rejected() {
        let design = DesignMatrix::new(
            vec!["intercept".into()],
            vec![vec![1.0]; 10],
            vec![true; 10],
            (0..10).map(|i| format!("c{i}")).collect(),
        )
        .unwrap();
        assert!(matches!(fit_logit(&design), Err(StatsError::ConstantResponse)));

        assert!(matches!(
            DesignMatrix::new(
                vec!["intercept".into(), "dead".into()],
                vec![vec![1.0, 0.0]; 10],
                (0..10).map(|i| i % 2 == 0).collect(),
                (0..10).map(|i| format!("c{i}")).collect(),
            ),
            Err(StatsError::RankDeficient(name)) if name == "dead"
        ));

        // Duplicated column caught by the Cholesky pivot.
        let dup = DesignMatrix::new(
            vec!["intercept".into(), "copy".into()],
            vec![vec![1.0, 1.0]; 10],
            (0..10).map(|i| i % 2 == 0).collect(),
            (0..10).map(|i| format!("c{i}")).collect(),
        )
        .unwrap();
        assert!(matches!(
            fit_logit(&dup),
            Err(StatsError::RankDeficient(_))
        ));
    }

    /// Newton oracle on the analytic log-likelihood with a Gauss-Jordan solve,
    /// independent of the IRLS path.
    fn newton_oracle(design: &DesignMatrix) -> Vec<f64> {
        let (n, k) = (design.n_rows(), design.n_cols());
        let mut beta = vec![0.0; k];
        for _ in 0..200 {
            let mut grad = vec![0.0; k];
            let mut hess = vec![vec![0.0; k + 1]; k];
            for i in 0..n {
                let eta: f64 = (0..k).map(|j| design.x(i, j) * beta[j]).sum();
                let p = 1.0 / (1.0 + (-eta).exp());
                let u = design.response()[i] as u8 as f64 - p;
                for a in 0..k {
                    grad[a] += u * design.x(i, a);
                    for b in 0..k {
                        hess[a][b] += design.x(i, a) * design.x(i, b) * p * (1.0 - p);
                    }
                }
            }
            for a in 0..k {
                hess[a][k] = grad[a];
            }
            // Gauss-Jordan with partial pivoting on the augmented system.
            for col in 0..k {
                let pivot = (col..k)
                    .max_by(|&a, &b| hess[a][col].abs().partial_cmp(&hess[b][col].abs()).unwrap())
                    .unwrap();
                hess.swap(col, pivot);
                let pv = hess[col][col];
                for j in col..=k {
                    hess[col][j] /= pv;
                }
                for row in 0..k {
                    if row != col {
                        let factor = hess[row][col];
                        for j in col..=k {
                            hess[row][j] -= factor * hess[col][j];
                        }
                    }
                }
            }
            let mut max_step = 0.0_f64;
            for a in 0..k {
                max_step = max_step.max(hess[a][k].abs());
                beta[a] += hess[a][k];
            }
            if max_step < 1e-12 {
                break;
            }
        }
        beta
    }

    #[test]
    fn irls_matches_newton_oracle_on_random_datasets() {
        let mut produced = 0;
        let mut stream_id = 0u64;
        while produced < 50 {
            stream_id += 1;
            let mut rng = RngStream::new(911, stream_id);
            let n = 20 + rng.below(21);
            let k = 2 + rng.below(2);
            let mut rows = Vec::with_capacity(n);
            let mut response = Vec::with_capacity(n);
            let truth: Vec<f64> = (0..k).map(|_| rng.uniform() * 2.0 - 1.0).collect();
            for _ in 0..n {
                let mut row = vec![1.0];
                for _ in 1..k {
                    row.push(rng.uniform() * 2.0 - 1.0);
                }
                let eta: f64 = row.iter().zip(&truth).map(|(x, b)| x * b).sum();
                response.push(rng.uniform() < 1.0 / (1.0 + (-eta).exp()));
                rows.push(row);
            }
            let yes = response.iter().filter(|&&y| y).count();
            if yes == 0 || yes == n {
                continue;
            }
            let design = DesignMatrix::new(
                (0..k).map(|j| format!("x{j}")).collect(),
                rows,
                response,
                (0..n).map(|i| format!("c{i}")).collect(),
            )
            .unwrap();
            let fit = match fit_logit(&design) {
                Ok(f) if f.converged && f.separation_warnings.is_empty() => f,
                _ => continue,
            };
            let oracle = newton_oracle(&design);
            for (a, b) in fit.coefficients.iter().zip(&oracle) {
                assert!(
                    (a - b).abs() < 1e-4,
                    "stream {stream_id}: IRLS {a} vs Newton {b}"
                );
            }
            produced += 1;
        }
    }

    #[test]
    fn robust_cov_reduces_to_hc1_with_singleton_clusters() {
        let mut rng = RngStream::new(7, 0);
        let n = 60;
        let mut rows = Vec::new();
        let mut response = Vec::new();
        for _ in 0..n {
            let x = rng.uniform() * 2.0 - 1.0;
            rows.push(vec![1.0, x]);
            response.push(rng.uniform() < 1.0 / (1.0 + (-x).exp()));
        }
        let design = DesignMatrix::new(
            vec!["intercept".into(), "x".into()],
            rows.clone(),
            response.clone(),
            (0..n).map(|i| format!("row{i}")).collect(),
        )
        .unwrap();
        let fit = fit_logit(&design).unwrap();
        let cr1 = cluster_robust_cov(&fit, &design, CovCorrection::Cr1).unwrap();

        // Explicit-summation HC1 oracle: Σ u² x x' scaled by N/(N−K).
        let k = 2;
        let mut meat = vec![vec![0.0; k]; k];
        for i in 0..n {
            let u = response[i] as u8 as f64 - fit.fitted()[i];
            for a in 0..k {
                for b in 0..k {
                    meat[a][b] += u * u * rows[i][a] * rows[i][b];
                }
            }
        }
        let scale = n as f64 / (n as f64 - k as f64);
        for row in &mut meat {
            for v in row {
                *v *= scale;
            }
        }
        let hc1 = mat_mul(&mat_mul(&fit.model_covariance, &meat), &fit.model_covariance);
        for a in 0..k {
            for b in 0..k {
                assert!(
                    (cr1[a][b] - hc1[a][b]).abs() < 1e-10,
                    "({a},{b}): {} vs {}",
                    cr1[a][b],
                    hc1[a][b]
                );
            }
        }
    }

    #[test]
    fn duplicated_clusters_inflate_robust_se() {
        // Homogeneous clusters duplicated k times: robust SEs exceed model SEs.
        let mut rows = Vec::new();
        let mut response = Vec::new();
        let mut clusters = Vec::new();
        let mut rng = RngStream::new(3, 1);
        for c in 0..12 {
            let x = rng.uniform() * 2.0 - 1.0;
            let y = rng.uniform() < 1.0 / (1.0 + (-1.5 * x).exp());
            for _ in 0..6 {
                rows.push(vec![1.0, x]);
                response.push(y);
                clusters.push(format!("c{c}"));
            }
        }
        let design =
            DesignMatrix::new(vec!["intercept".into(), "x".into()], rows, response, clusters)
                .unwrap();
        let fit = fit_logit(&design).unwrap();
        let robust = cluster_robust_cov(&fit, &design, CovCorrection::Cr1).unwrap();
        let robust_se = GlmFit::standard_errors(&robust);
        let model_se = GlmFit::standard_errors(&fit.model_covariance);
        for (r, m) in robust_se.iter().zip(&model_se) {
            assert!(r > m, "robust {r} should exceed model {m}");
        }
    }

    #[test]
    fn odds_ratios_published_values() {
        let design = tone_design();
        let fit = fit_logit(&design).unwrap();
        let ors = odds_ratios(&fit, &fit.model_covariance).unwrap();
        let by_name = |name: &str| {
            ors.iter()
                .find(|o| o.name == name)
                .unwrap_or_else(|| panic!("missing {name}"))
        };
        assert!((by_name("group=unclear").odds_ratio / 0.039 - 1.0).abs() < 0.02);
        assert!((by_name("group=abusive").odds_ratio / 0.0056 - 1.0).abs() < 0.02);
    }

    #[test]
    fn zero_coefficient_gives_unit_odds_ratio() {
        let mut rows = Vec::new();
        let mut response = Vec::new();
        // x is balanced and independent of y, so its coefficient is ~0.
        for i in 0..40 {
            rows.push(vec![1.0, (i % 2) as f64]);
            response.push((i / 2) % 2 == 0);
        }
        let design = DesignMatrix::new(
            vec!["intercept".into(), "x".into()],
            rows,
            response,
            (0..40).map(|i| format!("c{i}")).collect(),
        )
        .unwrap();
        let fit = fit_logit(&design).unwrap();
        let ors = odds_ratios(&fit, &fit.model_covariance).unwrap();
        let x = &ors[1];
        assert_abs_diff_eq!(x.odds_ratio, 1.0, epsilon = 1e-6);
        assert!(x.ci_low < 1.0 && 1.0 < x.ci_high);
    }

    #[test]
    fn rescaling_covariate_rescales_beta_only() {
        let mut rng = RngStream::new(13, 2);
        let n = 80;
        let mut base_rows = Vec::new();
        let mut response = Vec::new();
        for _ in 0..n {
            let x = rng.uniform() * 2.0 - 1.0;
            base_rows.push(vec![1.0, x]);
            response.push(rng.uniform() < 1.0 / (1.0 + (-x).exp()));
        }
        let scaled_rows: Vec<Vec<f64>> = base_rows
            .iter()
            .map(|r| vec![r[0], r[1] * 10.0])
            .collect();
        let clusters: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
        let d1 = DesignMatrix::new(
            vec!["intercept".into(), "x".into()],
            base_rows,
            response.clone(),
            clusters.clone(),
        )
        .unwrap();
        let d2 = DesignMatrix::new(
            vec!["intercept".into(), "x".into()],
            scaled_rows,
            response,
            clusters,
        )
        .unwrap();
        let f1 = fit_logit(&d1).unwrap();
        let f2 = fit_logit(&d2).unwrap();
        assert_abs_diff_eq!(f1.coefficients[1], f2.coefficients[1] * 10.0, epsilon = 1e-6);
        for (a, b) in f1.fitted().iter().zip(f2.fitted()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-8);
        }
    }

    #[test]
    fn separation_is_reported_not_regularized() {
        // Indicator perfectly predicts the outcome.
        let mut rows = Vec::new();
        let mut response = Vec::new();
        for i in 0..30 {
            let flag = i < 15;
            rows.push(vec![1.0, flag as u8 as f64]);
            response.push(flag);
        }
        let design = DesignMatrix::new(
            vec!["intercept".into(), "flag".into()],
            rows,
            response,
            (0..30).map(|i| format!("c{i}")).collect(),
        )
        .unwrap();
        let fit = fit_logit(&design).unwrap();
        assert!(
            fit.separation_warnings.iter().any(|w| w == "flag"),
            "warnings: {:?}",
            fit.separation_warnings
        );
    }
}
