//! Closed-form asymptotics for both criteria and simulation diagnostics.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::model::{CovarianceKind, CovarianceSpec, InnovationSpec, MixingMatrix};
use crate::{Error, Result};

/// Standard normal distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Limit parameters for the D-criterion: y = p/n, λ = n₁/n, Δ².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoryInputsD {
    y: f64,
    lambda: f64,
    delta2: f64,
}

fn check_unit_interval(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::Domain(format!("{name} = {v} must lie in (0, 1)")));
    }
    Ok(())
}

impl TheoryInputsD {
    pub fn new(y: f64, lambda: f64, delta2: f64) -> Result<Self> {
        check_unit_interval("y", y)?;
        check_unit_interval("lambda", lambda)?;
        if !(delta2 >= 0.0 && delta2.is_finite()) {
            return Err(Error::Domain(format!(
                "squared Mahalanobis distance {delta2} must be finite and nonnegative"
            )));
        }
        Ok(Self { y, lambda, delta2 })
    }

    /// Plug-in values for a concrete design: y = p/(n₁+n₂-2), λ = n₁/(n₁+n₂-2).
    pub fn from_design(p: usize, n1: usize, n2: usize, delta2: f64) -> Result<Self> {
        if n1 + n2 <= 2 {
            return Err(Error::Domain("training sizes too small".into()));
        }
        let n = (n1 + n2 - 2) as f64;
        Self::new(p as f64 / n, n1 as f64 / n, delta2)
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn delta2(&self) -> f64 {
        self.delta2
    }

    /// ϑ₁; the D-criterion misclassifies with probability → Φ(ϑ₁).
    pub fn theta1(&self) -> f64 {
        let TheoryInputsD { y, lambda, delta2 } = *self;
        let spread = y / (lambda * (1.0 - lambda)) + delta2;
        -(delta2 / (2.0 * spread.sqrt())) * (1.0 - y).sqrt()
    }

    pub fn theta2(&self) -> f64 {
        theta2(self.y, self.delta2).expect("inputs validated on construction")
    }

    /// τ with ϑ₁ = τ·ϑ₂.
    pub fn tau(&self) -> Result<f64> {
        if self.delta2 == 0.0 {
            return Err(Error::Domain("tau is undefined when delta2 = 0".into()));
        }
        let TheoryInputsD { y, lambda, delta2 } = *self;
        Ok(1.0 / (y / (lambda * (1.0 - lambda) * delta2) + 1.0).sqrt())
    }

    pub fn misclass(&self) -> f64 {
        normal_cdf(self.theta1())
    }
}

/// Older limit -Δ√(1-y)/2, which ignores the estimation of both means.
pub fn theta2(y: f64, delta2: f64) -> Result<f64> {
    check_unit_interval("y", y)?;
    if !(delta2 >= 0.0) {
        return Err(Error::Domain(format!(
            "delta2 = {delta2} must be nonnegative"
        )));
    }
    Ok(-0.5 * delta2.sqrt() * (1.0 - y).sqrt())
}

/// Finite-sample inputs for the T-criterion.
#[derive(Debug, Clone)]
pub struct TheoryInputsT {
    pub delta: DVector<f64>,
    pub sigma: CovarianceSpec,
    pub mixing: MixingMatrix,
    pub n1: usize,
    pub n2: usize,
    pub theta_x: f64,
    pub theta_y: f64,
    pub gamma_x: f64,
    pub gamma_y: f64,
}

impl TheoryInputsT {
    /// Moments are taken from the innovation law of each population.
    pub fn new(
        delta: DVector<f64>,
        sigma: CovarianceSpec,
        n1: usize,
        n2: usize,
        innov1: InnovationSpec,
        innov2: InnovationSpec,
    ) -> Result<Self> {
        if delta.len() != sigma.p() {
            return Err(Error::DimensionMismatch {
                expected: sigma.p(),
                found: delta.len(),
            });
        }
        if n1 == 0 || n2 == 0 {
            return Err(Error::Domain("training sizes must be positive".into()));
        }
        let mixing = MixingMatrix::from_covariance(&sigma)?;
        Ok(Self {
            delta,
            sigma,
            mixing,
            n1,
            n2,
            theta_x: innov1.theta(),
            theta_y: innov2.theta(),
            gamma_x: innov1.gamma4(),
            gamma_y: innov2.gamma4(),
        })
    }

    pub fn alpha1(&self) -> f64 {
        self.n1 as f64 / (self.n1 as f64 + 1.0)
    }

    pub fn alpha2(&self) -> f64 {
        self.n2 as f64 / (self.n2 as f64 + 1.0)
    }

    /// Mean of the T statistic for an observation from Π₁: -α₂‖δ‖².
    pub fn mean(&self) -> f64 {
        -self.alpha2() * self.delta.norm_squared()
    }

    fn delta_sigma_delta(&self) -> f64 {
        self.delta.dot(&self.sigma.mul_vec(&self.delta))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceVariant {
    /// Exact variance, diagonal Σ only.
    Full,
    /// Keeps the skewness term.
    V1,
    /// Drops the skewness term.
    V2,
    /// Leading term only.
    V3,
}

impl VarianceVariant {
    pub const ALL: [VarianceVariant; 4] = [
        VarianceVariant::Full,
        VarianceVariant::V1,
        VarianceVariant::V2,
        VarianceVariant::V3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VarianceVariant::Full => "full",
            VarianceVariant::V1 => "v1",
            VarianceVariant::V2 => "v2",
            VarianceVariant::V3 => "v3",
        }
    }
}

fn is_diagonal(sigma: &CovarianceSpec) -> bool {
    match sigma.kind() {
        CovarianceKind::Identity | CovarianceKind::Diagonal(_) => true,
        CovarianceKind::EqualCorr { rho } | CovarianceKind::Ar1 { rho } => *rho == 0.0,
        CovarianceKind::Explicit(m) => {
            let p = m.nrows();
            (0..p).all(|i| (0..p).all(|j| i == j || m[(i, j)] == 0.0))
        }
    }
}

/// Variance of the T statistic for an observation from Π₁.
pub fn t_variance(inputs: &TheoryInputsT, variant: VarianceVariant) -> Result<f64> {
    let tr2 = inputs.sigma.trace_of_square();
    let dsd = inputs.delta_sigma_delta();
    let (n1, n2) = (inputs.n1 as f64, inputs.n2 as f64);
    let v = match variant {
        VarianceVariant::V3 => 4.0 * dsd,
        VarianceVariant::V2 => 4.0 * (1.0 / n1 + 1.0 / n2) * tr2 + 4.0 * (1.0 - 1.0 / n2) * dsd,
        VarianceVariant::V1 => {
            let cube = inputs.mixing.ones_cubed_dot(&inputs.delta);
            4.0 * (1.0 / n1 + 1.0 / n2) * tr2
                + 4.0 * inputs.theta_x * (1.0 / n2 - 1.0 / n1) * cube
                + 4.0 * (1.0 - 1.0 / n2) * dsd
        }
        VarianceVariant::Full => {
            if !is_diagonal(&inputs.sigma) {
                return Err(Error::AssumptionViolation(
                    "the exact variance needs a diagonal covariance matrix".into(),
                ));
            }
            let (a1, a2) = (inputs.alpha1(), inputs.alpha2());
            let beta0 = a1 * a1 * (6.0 * n1 * n1 + 3.0 * n1 - 3.0) / n1.powi(3)
                + a2 * a2 * (6.0 * n2 * n2 + 3.0 * n2 - 3.0) / n2.powi(3)
                + 2.0 * (a1 * a2 - 1.0);
            let beta1 = inputs.gamma_x * (a1 * a1 / n1.powi(3) + (a1 - a2).powi(2))
                + a2 * a2 * inputs.gamma_y / n2.powi(3);
            let beta2 = 4.0 * a2 * (a1 - a2) * inputs.theta_x + 4.0 * inputs.theta_y / (n2 * n2);
            let cube = inputs.mixing.ones_cubed_dot(&inputs.delta);
            (beta0 + beta1) * tr2 + beta2 * cube + 4.0 * a2 * dsd
        }
    };
    Ok(v)
}

/// Φ(-α₂‖δ‖²/B), the predicted T-criterion error for Π₁ observations.
pub fn t_misclass(inputs: &TheoryInputsT, variant: VarianceVariant) -> Result<f64> {
    let v = t_variance(inputs, variant)?;
    if !(v > 0.0) {
        return Err(Error::Domain(format!("variance {v} is not positive")));
    }
    Ok(normal_cdf(inputs.mean() / v.sqrt()))
}

/// Exact mean and variance of the T statistic for an observation from Π₁.
pub fn t_exact_moments(inputs: &TheoryInputsT) -> Result<(f64, f64)> {
    let variance = t_variance(inputs, VarianceVariant::Full)?;
    Ok((inputs.mean(), variance))
}

/// Almost-sure limits of tr(S̃⁻¹)/p and tr(S̃⁻²)/p when p/n → y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MpLimits {
    pub a1: f64,
    pub a2: f64,
}

pub fn mp_limits(y: f64) -> Result<MpLimits> {
    if !(0.0..1.0).contains(&y) {
        return Err(Error::Domain(format!("y = {y} must lie in [0, 1)")));
    }
    let a1 = 1.0 / (1.0 - y);
    Ok(MpLimits {
        a1,
        a2: a1 * a1 * a1,
    })
}

/// Sample counterparts of the limits in [`mp_limits`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MpSample {
    /// tr(S̃⁻¹)/p
    pub t1: f64,
    /// tr(S̃⁻²)/p
    pub t2: f64,
    /// x̄*'S̃⁻¹x̄* / ‖x̄*‖²
    pub q1: f64,
    /// x̄*'S̃⁻²x̄* / ‖x̄*‖²
    pub q2: f64,
}

/// Simulates the standardized pooled scatter from two innovation samples.
///
/// Group sizes are chosen so that n₁+n₂-2 = n, making S̃ = Ã/n an unbiased
/// estimate of the identity with n degrees of freedom.
pub fn mp_empirical<R: Rng + ?Sized>(
    n: usize,
    p: usize,
    innovation: InnovationSpec,
    rng: &mut R,
) -> Result<MpSample> {
    if p == 0 || p >= n {
        return Err(Error::Singularity(format!(
            "the pooled scatter is singular unless 0 < p < n (p = {p}, n = {n})"
        )));
    }
    let n1 = (n + 2) / 2;
    let n2 = n + 2 - n1;
    let sampler = innovation.sampler()?;
    let mut draw = |rows: usize| DMatrix::from_fn(rows, p, |_, _| sampler.draw(rng));
    let x = draw(n1);
    let y = draw(n2);

    let centered = |m: &DMatrix<f64>| {
        let mean = m.row_mean();
        let mut c = m.clone();
        for mut r in c.row_iter_mut() {
            r -= &mean;
        }
        (mean.transpose(), c)
    };
    let (mean_x, xc) = centered(&x);
    let (_, yc) = centered(&y);
    let mut s = xc.transpose() * &xc;
    s.gemm(1.0, &yc.transpose(), &yc, 1.0);
    s /= n as f64;
    s.fill_upper_triangle_with_lower_triangle();

    let inv = s
        .cholesky()
        .ok_or_else(|| Error::Singularity("standardized scatter is not positive definite".into()))?
        .inverse();
    let pf = p as f64;
    let t1 = inv.trace() / pf;
    let t2 = inv.norm_squared() / pf;
    let w = &inv * &mean_x;
    let norm2 = mean_x.norm_squared();
    Ok(MpSample {
        t1,
        t2,
        q1: mean_x.dot(&w) / norm2,
        q2: w.norm_squared() / norm2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::localized_vector;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn normal_cdf_values() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert!((normal_cdf(-1.0) - 0.158_655_253_931_457_05).abs() < 1e-15);
        assert!((normal_cdf(1.959_963_984_540_054) - 0.975).abs() < 1e-14);
        assert!((normal_cdf(-8.0) - 6.220_960_574_271_785e-16).abs() < 1e-27);
    }

    #[test]
    fn theta1_examples() {
        assert_eq!(TheoryInputsD::new(0.3, 0.4, 0.0).unwrap().misclass(), 0.5);
        let d = TheoryInputsD::new(0.5, 0.5, 2.0).unwrap();
        let expected = -(2.0 / (2.0 * 4.0f64.sqrt())) * 0.5f64.sqrt();
        assert!((d.theta1() - expected).abs() < 1e-15);
        assert!((d.theta1() + 0.353_553_390_593_273_8).abs() < 1e-12);
        assert!((d.misclass() - 0.3618).abs() < 1e-4);
    }

    #[test]
    fn theta2_examples() {
        assert_eq!(theta2(0.2, 0.0).unwrap(), 0.0);
        let t = theta2(0.5, 2.0).unwrap();
        assert!((t + 0.5).abs() < 1e-15);
        assert!((normal_cdf(t) - 0.3085).abs() < 1e-4);
    }

    #[test]
    fn domain_errors() {
        assert!(TheoryInputsD::new(1.0, 0.5, 1.0).is_err());
        assert!(TheoryInputsD::new(0.5, 0.0, 1.0).is_err());
        assert!(TheoryInputsD::new(0.5, 0.5, -1.0).is_err());
        assert!(theta2(1.2, 1.0).is_err());
        assert!(TheoryInputsD::new(0.5, 0.5, 0.0).unwrap().tau().is_err());
        assert!(mp_limits(1.0).is_err());
    }

    #[test]
    fn tau_examples() {
        let half = TheoryInputsD::new(0.75, 0.5, 1.0).unwrap().tau().unwrap();
        assert!((half - 0.5).abs() < 1e-15);
        let d = TheoryInputsD::new(0.5, 0.5, 2.0).unwrap();
        assert!((d.tau().unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        let classical = TheoryInputsD::new(1e-12, 0.5, 2.0).unwrap().tau().unwrap();
        assert!((classical - 1.0).abs() < 1e-11);
    }

    #[test]
    fn theta1_is_tau_times_theta2_and_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let y = rng.random_range(0.01..0.99);
            let lambda = rng.random_range(0.01..0.99);
            let delta2 = rng.random_range(0.01..50.0);
            let d = TheoryInputsD::new(y, lambda, delta2).unwrap();
            assert!((d.theta1() - d.tau().unwrap() * d.theta2()).abs() < 1e-12);
            let mirror = TheoryInputsD::new(y, 1.0 - lambda, delta2).unwrap();
            // 1 - (1 - λ) can differ from λ in the last bit.
            assert!((d.theta1() - mirror.theta1()).abs() <= 1e-14 * d.theta1().abs().max(1.0));
        }
        let d = TheoryInputsD::new(0.3, 0.25, 4.0).unwrap();
        let m = TheoryInputsD::new(0.3, 0.75, 4.0).unwrap();
        assert_eq!(d.theta1(), m.theta1());
    }

    #[test]
    fn misclass_monotone() {
        let lambda = 0.4;
        let grid: Vec<f64> = (1..20).map(|i| i as f64 * 0.05).collect();
        let deltas: Vec<f64> = (1..40).map(|i| i as f64 * 0.5).collect();
        for &y in &grid {
            for w in deltas.windows(2) {
                let a = TheoryInputsD::new(y, lambda, w[0]).unwrap().misclass();
                let b = TheoryInputsD::new(y, lambda, w[1]).unwrap().misclass();
                assert!(b < a + 1e-9, "not decreasing in delta2 at y={y}");
            }
        }
        for &delta2 in &deltas {
            for w in grid.windows(2) {
                let a = TheoryInputsD::new(w[0], lambda, delta2).unwrap().misclass();
                let b = TheoryInputsD::new(w[1], lambda, delta2).unwrap().misclass();
                assert!(b > a - 1e-9, "not increasing in y at delta2={delta2}");
            }
        }
    }

    #[test]
    fn from_design_plug_in() {
        let d = TheoryInputsD::from_design(125, 250, 250, 10.0).unwrap();
        assert!((d.y() - 125.0 / 498.0).abs() < 1e-15);
        assert!((d.lambda() - 250.0 / 498.0).abs() < 1e-15);
        // Identity Σ, ten unit mean shifts: about 9.6%.
        assert!((d.misclass() - 0.0961).abs() < 5e-4);
    }

    fn identity_inputs(
        p: usize,
        n0: usize,
        n1: usize,
        n2: usize,
        innov: InnovationSpec,
    ) -> TheoryInputsT {
        TheoryInputsT::new(
            localized_vector(p, n0),
            CovarianceSpec::identity(p).unwrap(),
            n1,
            n2,
            innov,
            innov,
        )
        .unwrap()
    }

    #[test]
    fn variance_examples() {
        let t = identity_inputs(500, 10, 100, 100, InnovationSpec::StandardNormal);
        let v2 = t_variance(&t, VarianceVariant::V2).unwrap();
        assert!((v2 - 79.6).abs() < 1e-10);
        assert_eq!(t_variance(&t, VarianceVariant::V1).unwrap(), v2);
        assert!((t_variance(&t, VarianceVariant::V3).unwrap() - 40.0).abs() < 1e-12);
        assert!((t_misclass(&t, VarianceVariant::V2).unwrap() - 0.1335).abs() < 5e-4);
        let big = identity_inputs(500, 10, 500, 500, InnovationSpec::StandardNormal);
        assert!((t_misclass(&big, VarianceVariant::V2).unwrap() - 0.0747).abs() < 5e-4);
    }

    #[test]
    fn variances_approach_leading_term() {
        let g = InnovationSpec::gamma_shifted();
        let huge = identity_inputs(50, 10, 10_000_000, 20_000_000, g);
        let v3 = t_variance(&huge, VarianceVariant::V3).unwrap();
        for variant in [
            VarianceVariant::Full,
            VarianceVariant::V1,
            VarianceVariant::V2,
        ] {
            let v = t_variance(&huge, variant).unwrap();
            assert!((v - v3).abs() / v3 < 1e-4, "{variant:?}");
        }
    }

    #[test]
    fn zero_shift_is_chance() {
        let mut t = identity_inputs(20, 5, 30, 30, InnovationSpec::StandardNormal);
        t.delta = DVector::zeros(20);
        assert_eq!(t_misclass(&t, VarianceVariant::V2).unwrap(), 0.5);
        assert_eq!(t_exact_moments(&t).unwrap().0, 0.0);
    }

    #[test]
    fn exact_mean_example() {
        let t = identity_inputs(500, 10, 100, 100, InnovationSpec::StandardNormal);
        let (mean, _) = t_exact_moments(&t).unwrap();
        assert!((mean + 1000.0 / 101.0).abs() < 1e-12);
    }

    #[test]
    fn full_variance_needs_diagonal() {
        let t = TheoryInputsT::new(
            localized_vector(5, 2),
            CovarianceSpec::ar1(5, 0.5).unwrap(),
            20,
            20,
            InnovationSpec::StandardNormal,
            InnovationSpec::StandardNormal,
        )
        .unwrap();
        assert!(matches!(
            t_variance(&t, VarianceVariant::Full),
            Err(Error::AssumptionViolation(_))
        ));
        assert!(t_variance(&t, VarianceVariant::V1).is_ok());
    }

    #[test]
    fn leading_term_is_smallest_when_skew_term_nonnegative() {
        for (n1, n2) in [(20, 40), (40, 20), (100, 100)] {
            for innov in [
                InnovationSpec::gamma_shifted(),
                InnovationSpec::GammaShifted { reflected: true },
            ] {
                let t = identity_inputs(60, 10, n1, n2, innov);
                let skew = t.theta_x * (1.0 / n2 as f64 - 1.0 / n1 as f64);
                let v3 = t_variance(&t, VarianceVariant::V3).unwrap();
                assert!(t_variance(&t, VarianceVariant::V2).unwrap() >= v3);
                if skew >= 0.0 {
                    assert!(t_variance(&t, VarianceVariant::V1).unwrap() >= v3);
                }
            }
        }
    }

    #[test]
    fn normal_full_close_to_v2() {
        let mut worst: f64 = 0.0;
        for (p, n1, n2) in [
            (50, 50, 50),
            (100, 50, 80),
            (200, 200, 100),
            (500, 400, 400),
            (20, 30, 60),
        ] {
            let t = identity_inputs(p, 10.min(p), n1, n2, InnovationSpec::StandardNormal);
            let full = t_variance(&t, VarianceVariant::Full).unwrap();
            let v2 = t_variance(&t, VarianceVariant::V2).unwrap();
            let n_star = n1.min(n2) as f64;
            worst = worst.max((full - v2).abs() / (p as f64 / (n_star * n_star)));
        }
        assert!(worst < 15.0, "scaled gap {worst}");
    }

    /// Draws of the T statistic for z ~ Π₁ under normal innovations and
    /// Σ = I, sampling each group mean directly from its exact law.
    fn simulate_normal_t(t: &TheoryInputsT, draws: usize, seed: u64) -> (f64, f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = t.delta.len();
        let (s1, s2) = (1.0 / (t.n1 as f64).sqrt(), 1.0 / (t.n2 as f64).sqrt());
        let (a1, a2) = (t.alpha1(), t.alpha2());
        let mut values = Vec::with_capacity(draws);
        for _ in 0..draws {
            let mut q1 = 0.0;
            let mut q2 = 0.0;
            for l in 0..p {
                let z: f64 = rng.sample(StandardNormal);
                let xbar: f64 = s1 * rng.sample::<f64, _>(StandardNormal);
                let ybar: f64 = t.delta[l] + s2 * rng.sample::<f64, _>(StandardNormal);
                q1 += (z - xbar).powi(2);
                q2 += (z - ybar).powi(2);
            }
            values.push(a1 * q1 - a2 * q2);
        }
        let mean = values.iter().sum::<f64>() / draws as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (draws as f64 - 1.0);
        (mean, var)
    }

    #[test]
    fn exact_moments_match_simulation() {
        let t = identity_inputs(50, 10, 50, 50, InnovationSpec::StandardNormal);
        let (mean, var) = t_exact_moments(&t).unwrap();
        let (m, v) = simulate_normal_t(&t, 100_000, 17);
        assert!((m - mean).abs() / mean.abs() < 0.01, "mean {m} vs {mean}");
        assert!((v - var).abs() / var < 0.02, "variance {v} vs {var}");
    }

    #[test]
    fn mp_limit_values() {
        let l = mp_limits(0.5).unwrap();
        assert_eq!((l.a1, l.a2), (2.0, 8.0));
        assert_eq!(mp_limits(0.0).unwrap(), MpLimits { a1: 1.0, a2: 1.0 });
        for y in [0.1, 0.37, 0.9] {
            let l = mp_limits(y).unwrap();
            assert!((l.a2 - l.a1.powi(3)).abs() < 1e-12 * l.a2);
        }
    }

    #[test]
    fn mp_sample_near_limits() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = mp_empirical(400, 200, InnovationSpec::StandardNormal, &mut rng).unwrap();
        assert!((s.t1 - 2.0).abs() < 0.05, "t1 {}", s.t1);
        assert!((s.t2 - 8.0).abs() < 0.5, "t2 {}", s.t2);
        // A single direction: fluctuates with sd about 0.2 at p = 200.
        assert!((s.q1 - 2.0).abs() < 0.8, "q1 {}", s.q1);
        let classical = mp_empirical(4000, 10, InnovationSpec::StandardNormal, &mut rng).unwrap();
        assert!((classical.t1 - 1.0).abs() < 0.02);
        assert!(matches!(
            mp_empirical(10, 10, InnovationSpec::StandardNormal, &mut rng),
            Err(Error::Singularity(_))
        ));
    }
}
