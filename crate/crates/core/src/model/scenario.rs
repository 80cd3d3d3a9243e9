use nalgebra::DVector;
use rand::Rng;
use rand_distr::{Distribution, Uniform};
use serde::{Deserialize, Serialize};

use super::covariance::{beta_squared, mahalanobis, CovarianceSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    /// μ₂ has `n0` leading unit entries and zeros elsewhere.
    Localized,
    /// μ₂ entries drawn i.i.d. uniform, calibrated to the localized distance.
    Delocalized,
}

/// How the mean difference δ = μ₂ - μ₁ is laid out. μ₁ is always zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    pub n0: usize,
    /// Redraw the delocalized μ₂ for every replication instead of once.
    pub redraw_mu2: bool,
}

impl ScenarioSpec {
    pub fn localized(n0: usize) -> Self {
        Self {
            kind: ScenarioKind::Localized,
            n0,
            redraw_mu2: false,
        }
    }

    pub fn delocalized(n0: usize) -> Self {
        Self {
            kind: ScenarioKind::Delocalized,
            n0,
            redraw_mu2: true,
        }
    }

    pub fn validate(&self, p: usize) -> Result<()> {
        if self.n0 == 0 || self.n0 > p {
            return Err(Error::Domain(format!(
                "sparsity size n0 = {} must lie in 1..={p}",
                self.n0
            )));
        }
        Ok(())
    }

    /// True when μ₂ depends on the random stream.
    pub fn is_random(&self) -> bool {
        self.kind == ScenarioKind::Delocalized
    }
}

/// (1_{n0}, 0_{p-n0}).
pub fn localized_vector(p: usize, n0: usize) -> DVector<f64> {
    DVector::from_fn(p, |l, _| if l < n0 { 1.0 } else { 0.0 })
}

/// Center e = Δ_L/β of the uniform law used by the delocalized scenario.
pub fn delocalized_center(n0: usize, sigma: &CovarianceSpec) -> Result<f64> {
    let beta2 = beta_squared(sigma)?;
    let local = localized_vector(sigma.p(), n0);
    let delta_l2 = mahalanobis(&local, sigma)?;
    Ok((delta_l2 / beta2).sqrt())
}

/// Draws (μ₁, μ₂) for the scenario. The localized case consumes no randomness.
pub fn make_scenario_means<R: Rng + ?Sized>(
    scenario: &ScenarioSpec,
    sigma: &CovarianceSpec,
    rng: &mut R,
) -> Result<(DVector<f64>, DVector<f64>)> {
    let p = sigma.p();
    scenario.validate(p)?;
    let mu1 = DVector::zeros(p);
    let mu2 = match scenario.kind {
        ScenarioKind::Localized => localized_vector(p, scenario.n0),
        ScenarioKind::Delocalized => {
            let e = delocalized_center(scenario.n0, sigma)?;
            draw_delocalized(p, e, rng)?
        }
    };
    Ok((mu1, mu2))
}

pub(crate) fn draw_delocalized<R: Rng + ?Sized>(
    p: usize,
    center: f64,
    rng: &mut R,
) -> Result<DVector<f64>> {
    let law = Uniform::new(0.5 * center, 1.5 * center)
        .map_err(|e| Error::Domain(format!("uniform law for delocalized means: {e}")))?;
    Ok(DVector::from_fn(p, |_, _| law.sample(rng)))
}
