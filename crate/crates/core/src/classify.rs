//! Two-population decision rules over training statistics.
//!
//! Every rule reports a [`Decision`] whose `statistic` is negative when the
//! observation is assigned to Π₁. A statistic of exactly zero also goes to Π₁.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::model::{CovarianceSpec, CONDITION_LIMIT};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Pi1,
    Pi2,
}

impl Label {
    pub fn other(self) -> Self {
        match self {
            Label::Pi1 => Label::Pi2,
            Label::Pi2 => Label::Pi1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub label: Label,
    pub statistic: f64,
}

impl Decision {
    #[inline]
    pub fn from_statistic(statistic: f64) -> Self {
        let label = if statistic <= 0.0 {
            Label::Pi1
        } else {
            Label::Pi2
        };
        Self { label, statistic }
    }
}

/// Pooled within-group scatter A and its lower Cholesky factor L (A = LL').
#[derive(Debug, Clone)]
pub struct PooledScatter {
    matrix: DMatrix<f64>,
    factor: DMatrix<f64>,
    condition_estimate: f64,
}

impl PooledScatter {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn factor(&self) -> &DMatrix<f64> {
        &self.factor
    }

    /// (max Lᵢᵢ / min Lᵢᵢ)², a lower bound on the condition number of A.
    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }

    fn from_matrix(mut matrix: DMatrix<f64>) -> Result<Self> {
        matrix.fill_upper_triangle_with_lower_triangle();
        let chol = matrix.clone().cholesky().ok_or_else(|| {
            Error::Singularity("pooled scatter matrix is not positive definite".into())
        })?;
        let factor = chol.unpack();
        let diag = factor.diagonal();
        let ratio = diag.max() / diag.min();
        let condition_estimate = ratio * ratio;
        if !(condition_estimate <= CONDITION_LIMIT) {
            return Err(Error::Conditioning {
                estimate: condition_estimate,
                limit: CONDITION_LIMIT,
                context: "pooled scatter matrix; p/n is too close to 1".into(),
            });
        }
        Ok(Self {
            matrix,
            factor,
            condition_estimate,
        })
    }
}

/// Everything the rules need from the two training samples.
#[derive(Debug, Clone)]
pub struct TrainedStats {
    mean_x: DVector<f64>,
    mean_y: DVector<f64>,
    n1: usize,
    n2: usize,
    alpha1: f64,
    alpha2: f64,
    pooled_variances: DVector<f64>,
    scatter: Option<PooledScatter>,
}

impl TrainedStats {
    pub fn mean_x(&self) -> &DVector<f64> {
        &self.mean_x
    }

    pub fn mean_y(&self) -> &DVector<f64> {
        &self.mean_y
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn p(&self) -> usize {
        self.mean_x.len()
    }

    /// n₁/(n₁+1).
    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    /// n₂/(n₂+1).
    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    /// Aₗₗ/(n₁+n₂-2), available whether or not the full scatter was kept.
    pub fn pooled_variances(&self) -> &DVector<f64> {
        &self.pooled_variances
    }

    pub fn scatter(&self) -> Option<&PooledScatter> {
        self.scatter.as_ref()
    }

    fn require_scatter(&self) -> Result<&PooledScatter> {
        self.scatter.as_ref().ok_or_else(|| {
            Error::Usage("the D-criterion needs statistics fitted with the pooled scatter".into())
        })
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.p() {
            return Err(Error::DimensionMismatch {
                expected: self.p(),
                found: len,
            });
        }
        Ok(())
    }
}

fn centered(rows: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let mean = rows.row_mean().transpose();
    let mut c = rows.clone();
    for (mut col, m) in c.column_iter_mut().zip(mean.iter()) {
        col.add_scalar_mut(-m);
    }
    (mean, c)
}

/// Group means, pooled variances and, when `need_scatter`, the pooled scatter
/// A = Σ(xᵢ-x̄)(xᵢ-x̄)' + Σ(yⱼ-ȳ)(yⱼ-ȳ)' with its factorization.
///
/// Rows are observations. The scatter is only invertible when
/// p < n₁+n₂-2, which is the D-criterion's dimension limit.
pub fn fit(x: &DMatrix<f64>, y: &DMatrix<f64>, need_scatter: bool) -> Result<TrainedStats> {
    let (n1, n2) = (x.nrows(), y.nrows());
    if n1 < 2 || n2 < 2 {
        return Err(Error::Domain(format!(
            "each training group needs at least 2 observations, got {n1} and {n2}"
        )));
    }
    let p = x.ncols();
    if y.ncols() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            found: y.ncols(),
        });
    }
    let dof = n1 + n2 - 2;
    if need_scatter && p >= dof {
        return Err(Error::Singularity(format!(
            "the D-criterion needs the dimension p = {p} to be smaller than n1 + n2 - 2 = {dof}"
        )));
    }

    let (mean_x, xc) = centered(x);
    let (mean_y, yc) = centered(y);

    let pooled_variances = DVector::from_fn(p, |l, _| {
        (xc.column(l).norm_squared() + yc.column(l).norm_squared()) / dof as f64
    });

    let scatter = if need_scatter {
        let mut a = xc.transpose() * &xc;
        a.gemm(1.0, &yc.transpose(), &yc, 1.0);
        Some(PooledScatter::from_matrix(a)?)
    } else {
        None
    };

    Ok(TrainedStats {
        mean_x,
        mean_y,
        n1,
        n2,
        alpha1: n1 as f64 / (n1 as f64 + 1.0),
        alpha2: n2 as f64 / (n2 as f64 + 1.0),
        pooled_variances,
        scatter,
    })
}

/// α₁(z-x̄)'A⁻¹(z-x̄) - α₂(z-ȳ)'A⁻¹(z-ȳ) via triangular solves with L.
pub fn d_criterion(stats: &TrainedStats, z: &DVector<f64>) -> Result<Decision> {
    stats.check_len(z.len())?;
    let scatter = stats.require_scatter()?;
    let l = &scatter.factor;
    let solve = |d: DVector<f64>| -> Result<f64> {
        let w = l
            .solve_lower_triangular(&d)
            .ok_or_else(|| Error::Singularity("zero pivot in scatter factor".into()))?;
        Ok(w.norm_squared())
    };
    let q1 = solve(z - &stats.mean_x)?;
    let q2 = solve(z - &stats.mean_y)?;
    Ok(Decision::from_statistic(
        stats.alpha1 * q1 - stats.alpha2 * q2,
    ))
}

/// D-criterion statistics for every row of `rows`.
///
/// One triangular solve per observation: L⁻¹(z-ȳ) = L⁻¹(z-x̄) + L⁻¹(x̄-ȳ).
pub fn d_statistics(stats: &TrainedStats, rows: &DMatrix<f64>) -> Result<Vec<f64>> {
    stats.check_len(rows.ncols())?;
    let scatter = stats.require_scatter()?;
    let l = &scatter.factor;
    let mut w = rows.transpose();
    for mut col in w.column_iter_mut() {
        col -= &stats.mean_x;
    }
    if !l.solve_lower_triangular_mut(&mut w) {
        return Err(Error::Singularity("zero pivot in scatter factor".into()));
    }
    let shift = l
        .solve_lower_triangular(&(&stats.mean_x - &stats.mean_y))
        .ok_or_else(|| Error::Singularity("zero pivot in scatter factor".into()))?;
    let shift_sq = shift.norm_squared();
    Ok(w.column_iter()
        .map(|c| {
            let q1 = c.norm_squared();
            let q2 = q1 + 2.0 * c.dot(&shift) + shift_sq;
            stats.alpha1 * q1 - stats.alpha2 * q2
        })
        .collect())
}

/// D-criterion by direct comparison of det(A₁) and det(A₂).
///
/// This is the slow O(p³)-per-query route, kept for cross-checking
/// [`d_criterion`]. Determinants come from an LU factorization and are
/// compared on the log scale, so the statistic is ln det A₁ - ln det A₂.
pub fn d_criterion_det(x: &DMatrix<f64>, y: &DMatrix<f64>, z: &DVector<f64>) -> Result<Decision> {
    let (n1, n2, p) = (x.nrows(), y.nrows(), x.ncols());
    if n1 < 2 || n2 < 2 {
        return Err(Error::Domain(
            "each training group needs at least 2 observations".into(),
        ));
    }
    if y.ncols() != p || z.len() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            found: if y.ncols() != p { y.ncols() } else { z.len() },
        });
    }
    if p + 1 >= n1 + n2 {
        return Err(Error::Singularity(format!(
            "determinant comparison needs p = {p} < n1 + n2 - 1 = {}",
            n1 + n2 - 1
        )));
    }

    let mut a = DMatrix::<f64>::zeros(p, p);
    let mut add_group = |rows: &DMatrix<f64>| -> DVector<f64> {
        let n = rows.nrows() as f64;
        let mean = DVector::from_fn(p, |l, _| rows.column(l).sum() / n);
        for r in rows.row_iter() {
            let d = r.transpose() - &mean;
            a.ger(1.0, &d, &d, 1.0);
        }
        mean
    };
    let mean_x = add_group(x);
    let mean_y = add_group(y);

    let augmented = |alpha: f64, mean: &DVector<f64>| -> Result<f64> {
        let d = z - mean;
        let mut m = a.clone();
        m.ger(alpha, &d, &d, 1.0);
        log_det_positive(m)
    };
    let a1 = augmented(n1 as f64 / (n1 as f64 + 1.0), &mean_x)?;
    let a2 = augmented(n2 as f64 / (n2 as f64 + 1.0), &mean_y)?;
    Ok(Decision::from_statistic(a1 - a2))
}

fn log_det_positive(m: DMatrix<f64>) -> Result<f64> {
    let lu = m.lu();
    let u = lu.u();
    let mut sign = if lu.p().determinant::<f64>() < 0.0 {
        -1.0
    } else {
        1.0
    };
    let mut log = 0.0;
    for &d in u.diagonal().iter() {
        if d == 0.0 {
            return Err(Error::Singularity(
                "augmented scatter matrix is singular".into(),
            ));
        }
        if d < 0.0 {
            sign = -sign;
        }
        log += d.abs().ln();
    }
    if sign < 0.0 || !log.is_finite() {
        return Err(Error::Singularity(
            "augmented scatter matrix is not positive definite".into(),
        ));
    }
    Ok(log)
}

/// α₁‖z-x̄‖² - α₂‖z-ȳ‖².
pub fn t_criterion(stats: &TrainedStats, z: &DVector<f64>) -> Result<Decision> {
    stats.check_len(z.len())?;
    let q1 = (z - &stats.mean_x).norm_squared();
    let q2 = (z - &stats.mean_y).norm_squared();
    Ok(Decision::from_statistic(
        stats.alpha1 * q1 - stats.alpha2 * q2,
    ))
}

/// T-criterion statistics for every row of `rows`.
pub fn t_statistics(stats: &TrainedStats, rows: &DMatrix<f64>) -> Result<Vec<f64>> {
    stats.check_len(rows.ncols())?;
    let mut q1 = vec![0.0; rows.nrows()];
    let mut q2 = vec![0.0; rows.nrows()];
    for (l, col) in rows.column_iter().enumerate() {
        let (mx, my) = (stats.mean_x[l], stats.mean_y[l]);
        for (i, &v) in col.iter().enumerate() {
            q1[i] += (v - mx) * (v - mx);
            q2[i] += (v - my) * (v - my);
        }
    }
    Ok(q1
        .into_iter()
        .zip(q2)
        .map(|(a, b)| stats.alpha1 * a - stats.alpha2 * b)
        .collect())
}

/// Independence rule with diagonal D: Π₁ when (z - (x̄+ȳ)/2)'D⁻¹(x̄-ȳ) > 0.
/// The reported statistic is the negated score.
pub fn naive_bayes(
    stats: &TrainedStats,
    pooled_variances: &DVector<f64>,
    z: &DVector<f64>,
) -> Result<Decision> {
    let rule = NaiveBayesRule::new(stats, pooled_variances)?;
    stats.check_len(z.len())?;
    Ok(Decision::from_statistic(-rule.score(z.iter().copied())))
}

/// Naive Bayes with precomputed weights D⁻¹(x̄-ȳ).
#[derive(Debug, Clone)]
pub struct NaiveBayesRule {
    weights: DVector<f64>,
    midpoint: DVector<f64>,
}

impl NaiveBayesRule {
    pub fn new(stats: &TrainedStats, pooled_variances: &DVector<f64>) -> Result<Self> {
        stats.check_len(pooled_variances.len())?;
        if let Some(index) = pooled_variances.iter().position(|&v| !(v > 0.0)) {
            return Err(Error::DegenerateFeature { index });
        }
        let weights = DVector::from_fn(stats.p(), |l, _| {
            (stats.mean_x[l] - stats.mean_y[l]) / pooled_variances[l]
        });
        let midpoint = (&stats.mean_x + &stats.mean_y) * 0.5;
        Ok(Self { weights, midpoint })
    }

    fn score(&self, z: impl Iterator<Item = f64>) -> f64 {
        z.zip(self.midpoint.iter())
            .zip(self.weights.iter())
            .map(|((z, m), w)| (z - m) * w)
            .sum()
    }

    /// Negated scores for every row.
    pub fn statistics(&self, rows: &DMatrix<f64>) -> Vec<f64> {
        linear_statistics(rows, &self.weights, &self.midpoint)
    }
}

/// Fisher's rule with the true means and covariance.
#[derive(Debug, Clone)]
pub struct FisherRule {
    weights: DVector<f64>,
    midpoint: DVector<f64>,
}

impl FisherRule {
    pub fn new(mu1: &DVector<f64>, mu2: &DVector<f64>, sigma: &CovarianceSpec) -> Result<Self> {
        let weights = sigma.solve(&(mu1 - mu2))?;
        let midpoint = (mu1 + mu2) * 0.5;
        Ok(Self { weights, midpoint })
    }

    pub fn decide(&self, z: &DVector<f64>) -> Result<Decision> {
        if z.len() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                found: z.len(),
            });
        }
        Ok(Decision::from_statistic(
            -(z - &self.midpoint).dot(&self.weights),
        ))
    }

    pub fn statistics(&self, rows: &DMatrix<f64>) -> Vec<f64> {
        linear_statistics(rows, &self.weights, &self.midpoint)
    }
}

/// Π₁ when (z - (μ₁+μ₂)/2)'Σ⁻¹(μ₁-μ₂) > 0.
pub fn oracle_fisher(
    mu1: &DVector<f64>,
    mu2: &DVector<f64>,
    sigma: &CovarianceSpec,
    z: &DVector<f64>,
) -> Result<Decision> {
    FisherRule::new(mu1, mu2, sigma)?.decide(z)
}

fn linear_statistics(rows: &DMatrix<f64>, weights: &DVector<f64>, mid: &DVector<f64>) -> Vec<f64> {
    let offset = mid.dot(weights);
    let scores = rows * weights;
    scores.iter().map(|s| offset - s).collect()
}
