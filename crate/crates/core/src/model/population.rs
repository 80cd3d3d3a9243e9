use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::covariance::CovarianceSpec;
use super::innovation::InnovationSpec;
use super::mixing::MixingMatrix;
use crate::{Error, Result};

/// One population Γx* + μ, borrowing its mixing matrix.
#[derive(Debug, Clone, Copy)]
pub struct Population<'a> {
    pub mean: &'a DVector<f64>,
    pub mixing: &'a MixingMatrix,
    pub innovation: InnovationSpec,
}

/// Two populations sharing Σ and Γ, differing in mean and innovation law.
#[derive(Debug, Clone)]
pub struct PopulationPair {
    pub mu1: DVector<f64>,
    pub mu2: DVector<f64>,
    pub sigma: CovarianceSpec,
    pub mixing: MixingMatrix,
    pub innov1: InnovationSpec,
    pub innov2: InnovationSpec,
}

impl PopulationPair {
    pub fn new(
        mu1: DVector<f64>,
        mu2: DVector<f64>,
        sigma: CovarianceSpec,
        innov1: InnovationSpec,
        innov2: InnovationSpec,
    ) -> Result<Self> {
        let p = sigma.p();
        for mu in [&mu1, &mu2] {
            if mu.len() != p {
                return Err(Error::DimensionMismatch {
                    expected: p,
                    found: mu.len(),
                });
            }
        }
        innov1.validate()?;
        innov2.validate()?;
        let mixing = MixingMatrix::from_covariance(&sigma)?;
        Ok(Self {
            mu1,
            mu2,
            sigma,
            mixing,
            innov1,
            innov2,
        })
    }

    pub fn first(&self) -> Population<'_> {
        Population {
            mean: &self.mu1,
            mixing: &self.mixing,
            innovation: self.innov1,
        }
    }

    pub fn second(&self) -> Population<'_> {
        Population {
            mean: &self.mu2,
            mixing: &self.mixing,
            innovation: self.innov2,
        }
    }

    /// δ = μ₂ - μ₁.
    pub fn delta(&self) -> DVector<f64> {
        &self.mu2 - &self.mu1
    }
}

/// Draws `n` i.i.d. rows Γx* + μ. Innovations are consumed row by row.
pub fn sample_population<R: Rng + ?Sized>(
    n: usize,
    population: &Population<'_>,
    rng: &mut R,
) -> Result<DMatrix<f64>> {
    let p = population.mixing.p();
    if population.mean.len() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            found: population.mean.len(),
        });
    }
    let sampler = population.innovation.sampler()?;
    let mut rows = DMatrix::zeros(n, p);
    for i in 0..n {
        for j in 0..p {
            rows[(i, j)] = sampler.draw(rng);
        }
    }
    population.mixing.apply_rows(&mut rows);
    if population.mean.iter().any(|&m| m != 0.0) {
        for (mut col, m) in rows.column_iter_mut().zip(population.mean.iter()) {
            col.add_scalar_mut(*m);
        }
    }
    Ok(rows)
}
