use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal, StudentT};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Law of one centered, unit-variance innovation component x*.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InnovationSpec {
    #[default]
    StandardNormal,
    /// Student's t with `df` degrees of freedom, rescaled to unit variance.
    StudentT { df: u32 },
    /// u - 1 with u ~ Gamma(shape 1, scale 1); `reflected` uses 1 - u instead.
    GammaShifted { reflected: bool },
}

impl InnovationSpec {
    /// A finite fourth moment is needed by both limit theorems, hence df > 4.
    pub fn student_t(df: u32) -> Result<Self> {
        if df <= 4 {
            return Err(Error::Domain(format!(
                "Student t degrees of freedom must exceed 4, got {df}"
            )));
        }
        Ok(InnovationSpec::StudentT { df })
    }

    pub fn gamma_shifted() -> Self {
        InnovationSpec::GammaShifted { reflected: false }
    }

    pub fn validate(&self) -> Result<()> {
        if let InnovationSpec::StudentT { df } = *self {
            Self::student_t(df)?;
        }
        Ok(())
    }

    /// Third moment θ = E x*³.
    pub fn theta(&self) -> f64 {
        match self {
            InnovationSpec::StandardNormal | InnovationSpec::StudentT { .. } => 0.0,
            InnovationSpec::GammaShifted { reflected: false } => 2.0,
            InnovationSpec::GammaShifted { reflected: true } => -2.0,
        }
    }

    /// Fourth moment γ = E x*⁴.
    pub fn gamma4(&self) -> f64 {
        match self {
            InnovationSpec::StandardNormal => 3.0,
            InnovationSpec::StudentT { df } => 3.0 + 6.0 / (*df as f64 - 4.0),
            InnovationSpec::GammaShifted { .. } => 9.0,
        }
    }

    pub fn sampler(&self) -> Result<InnovationSampler> {
        Ok(match *self {
            InnovationSpec::StandardNormal => InnovationSampler::Normal,
            InnovationSpec::StudentT { df } => {
                Self::student_t(df)?;
                let nu = df as f64;
                let dist =
                    StudentT::new(nu).map_err(|e| Error::Domain(format!("Student t: {e}")))?;
                InnovationSampler::StudentT {
                    dist,
                    scale: ((nu - 2.0) / nu).sqrt(),
                }
            }
            InnovationSpec::GammaShifted { reflected } => InnovationSampler::Gamma {
                sign: if reflected { -1.0 } else { 1.0 },
            },
        })
    }
}

#[derive(Debug, Clone)]
pub enum InnovationSampler {
    Normal,
    StudentT { dist: StudentT<f64>, scale: f64 },
    Gamma { sign: f64 },
}

impl InnovationSampler {
    #[inline]
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            InnovationSampler::Normal => StandardNormal.sample(rng),
            InnovationSampler::StudentT { dist, scale } => dist.sample(rng) * scale,
            InnovationSampler::Gamma { sign } => {
                let u: f64 = Exp1.sample(rng);
                sign * (u - 1.0)
            }
        }
    }

    pub fn fill<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        for v in out {
            *v = self.draw(rng);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn moments(spec: InnovationSpec, n: usize, seed: u64) -> [f64; 4] {
        let s = spec.sampler().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut acc = [0.0; 4];
        for _ in 0..n {
            let x = s.draw(&mut rng);
            let mut pw = 1.0;
            for a in acc.iter_mut() {
                pw *= x;
                *a += pw;
            }
        }
        acc.map(|a| a / n as f64)
    }

    #[test]
    fn analytic_moments() {
        assert_eq!(InnovationSpec::StandardNormal.theta(), 0.0);
        assert_eq!(InnovationSpec::StandardNormal.gamma4(), 3.0);
        let t7 = InnovationSpec::student_t(7).unwrap();
        assert_eq!((t7.theta(), t7.gamma4()), (0.0, 5.0));
        let g = InnovationSpec::gamma_shifted();
        assert_eq!((g.theta(), g.gamma4()), (2.0, 9.0));
        assert_eq!(
            InnovationSpec::GammaShifted { reflected: true }.theta(),
            -2.0
        );
    }

    #[test]
    fn student_t_needs_four_moments() {
        assert!(InnovationSpec::student_t(4).is_err());
        assert!(InnovationSpec::StudentT { df: 3 }.sampler().is_err());
    }

    #[test]
    fn standardized_first_two_moments() {
        for spec in [
            InnovationSpec::StandardNormal,
            InnovationSpec::student_t(7).unwrap(),
            InnovationSpec::gamma_shifted(),
        ] {
            let m = moments(spec, 200_000, 11);
            assert!(m[0].abs() < 0.01, "{spec:?} mean {}", m[0]);
            assert!((m[1] - 1.0).abs() < 0.02, "{spec:?} var {}", m[1]);
        }
    }

    #[test]
    fn student_t_fourth_moment() {
        let m = moments(InnovationSpec::student_t(7).unwrap(), 1_000_000, 5);
        assert!((m[3] - 5.0).abs() < 0.3, "fourth moment {}", m[3]);
    }

    #[test]
    fn gamma_third_moment() {
        let m = moments(InnovationSpec::gamma_shifted(), 1_000_000, 9);
        assert!((m[2] - 2.0).abs() < 0.05, "third moment {}", m[2]);
        let r = moments(
            InnovationSpec::GammaShifted { reflected: true },
            1_000_000,
            9,
        );
        assert!((r[2] + 2.0).abs() < 0.05);
    }
}
