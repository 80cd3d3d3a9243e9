//! Replicated Monte Carlo experiments and their aggregation.
//!
//! Every replication draws from its own ChaCha stream selected by
//! `(master_seed, rep_index)`, so results do not depend on how replications
//! are scheduled across workers.

mod realdata;
mod reference;
mod reproduce;

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{self, FisherRule, NaiveBayesRule};
use crate::model::{
    beta_squared, delocalized_center, draw_delocalized, localized_vector, mahalanobis,
    sample_population, CovarianceSpec, InnovationSpec, MixingMatrix, Population, ScenarioKind,
    ScenarioSpec,
};
use crate::theory::{normal_cdf, t_misclass, TheoryInputsD, TheoryInputsT, VarianceVariant};
use crate::{Error, Result};

pub use realdata::{classify_dataset, DatasetErrors};
pub use reference::{QuotedCell, QUOTED_TABLE5};
pub use reproduce::{reproduce, ComparisonRow, GridCell, PlotPanel, Report, Target};

/// Stream reserved for a μ₂ that stays fixed across replications.
const FIXED_MEAN_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierId {
    D,
    T,
    Nb,
    Oracle,
}

impl ClassifierId {
    pub const ALL: [ClassifierId; 4] = [
        ClassifierId::D,
        ClassifierId::T,
        ClassifierId::Nb,
        ClassifierId::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassifierId::D => "d",
            ClassifierId::T => "t",
            ClassifierId::Nb => "nb",
            ClassifierId::Oracle => "oracle",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            ClassifierId::D => "D-criterion",
            ClassifierId::T => "T-criterion",
            ClassifierId::Nb => "NB",
            ClassifierId::Oracle => "Oracle",
        }
    }
}

impl fmt::Display for ClassifierId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassifierId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "d" | "d_criterion" => Ok(ClassifierId::D),
            "t" | "t_criterion" => Ok(ClassifierId::T),
            "nb" | "naive_bayes" => Ok(ClassifierId::Nb),
            "oracle" | "oracle_fisher" => Ok(ClassifierId::Oracle),
            _ => Err(Error::Usage(format!(
                "unknown classifier {s:?}; expected one of d, t, nb, oracle"
            ))),
        }
    }
}

/// Where μ₂ comes from. μ₁ is always zero.
#[derive(Debug, Clone, PartialEq)]
pub enum MeanDesign {
    Scenario(ScenarioSpec),
    /// The same μ₂ in every replication.
    Fixed(DVector<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub id: String,
    pub n1: usize,
    pub n2: usize,
    /// Test points drawn from Π₁ per replication.
    pub m1: usize,
    /// Test points drawn from Π₂ per replication; may be zero to estimate P(2|1).
    pub m2: usize,
    pub reps: usize,
    pub master_seed: u64,
    pub covariance: CovarianceSpec,
    pub means: MeanDesign,
    pub innovation1: InnovationSpec,
    pub innovation2: InnovationSpec,
    pub classifiers: Vec<ClassifierId>,
    pub theory_overlay: bool,
}

impl ExperimentConfig {
    /// Test sizes equal training sizes, 1000 replications, normal samples and
    /// every classifier.
    pub fn new(covariance: CovarianceSpec, scenario: ScenarioSpec, n1: usize, n2: usize) -> Self {
        Self {
            id: "experiment".into(),
            n1,
            n2,
            m1: n1,
            m2: n2,
            reps: 1000,
            master_seed: 0,
            covariance,
            means: MeanDesign::Scenario(scenario),
            innovation1: InnovationSpec::StandardNormal,
            innovation2: InnovationSpec::StandardNormal,
            classifiers: ClassifierId::ALL.to_vec(),
            theory_overlay: false,
        }
    }

    pub fn p(&self) -> usize {
        self.covariance.p()
    }

    /// The μ₂ of a fixed design. Redrawn delocalized means give the draw the
    /// same seed would fix with `redraw_mu2 = false`.
    pub fn reference_mu2(&self) -> Result<DVector<f64>> {
        let p = self.p();
        match &self.means {
            MeanDesign::Fixed(mu2) => Ok(mu2.clone()),
            MeanDesign::Scenario(s) => match s.kind {
                ScenarioKind::Localized => Ok(localized_vector(p, s.n0)),
                ScenarioKind::Delocalized => {
                    let center = delocalized_center(s.n0, &self.covariance)?;
                    let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
                    rng.set_stream(FIXED_MEAN_STREAM);
                    draw_delocalized(p, center, &mut rng)
                }
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.p();
        if self.n1 < 2 {
            return Err(Error::config(
                "[experiment].n1",
                "training sizes must be at least 2",
            ));
        }
        if self.n2 < 2 {
            return Err(Error::config(
                "[experiment].n2",
                "training sizes must be at least 2",
            ));
        }
        if self.m1 + self.m2 == 0 {
            return Err(Error::config(
                "[experiment].m1",
                "at least one test point is needed",
            ));
        }
        if self.reps == 0 {
            return Err(Error::config("[experiment].reps", "must be positive"));
        }
        if self.classifiers.is_empty() {
            return Err(Error::config(
                "[classifiers].ids",
                "no classifier requested",
            ));
        }
        for (i, c) in self.classifiers.iter().enumerate() {
            if self.classifiers[..i].contains(c) {
                return Err(Error::config(
                    "[classifiers].ids",
                    format!("{c} listed twice"),
                ));
            }
        }
        if self.classifiers.contains(&ClassifierId::D) && p + 2 >= self.n1 + self.n2 {
            return Err(Error::config(
                "[classifiers].ids",
                format!(
                    "the D-criterion needs the dimension p = {p} to be smaller than n1 + n2 - 2 = {}",
                    self.n1 + self.n2 - 2
                ),
            ));
        }
        self.innovation1
            .validate()
            .map_err(|e| Error::config("[innovation].df", e.to_string()))?;
        self.innovation2
            .validate()
            .map_err(|e| Error::config("[innovation].df2", e.to_string()))?;
        match &self.means {
            MeanDesign::Scenario(s) => {
                s.validate(p)
                    .map_err(|e| Error::config("[scenario].n0", e.to_string()))?;
                if s.kind == ScenarioKind::Delocalized {
                    beta_squared(&self.covariance)
                        .map_err(|e| Error::config("[scenario].kind", e.to_string()))?;
                }
            }
            MeanDesign::Fixed(mu2) => {
                if mu2.len() != p {
                    return Err(Error::DimensionMismatch {
                        expected: p,
                        found: mu2.len(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Asymptotic predictions for one replication's true parameters, in percent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct TheoryPoint {
    pub delta2: f64,
    pub phi_theta1: Option<f64>,
    pub phi_theta2: Option<f64>,
    pub t_full: Option<f64>,
    pub t_v1: Option<f64>,
    pub t_v2: Option<f64>,
    pub t_v3: Option<f64>,
    pub oracle: Option<f64>,
}

impl TheoryPoint {
    fn for_classifier(&self, id: ClassifierId) -> Option<f64> {
        match id {
            ClassifierId::D => self.phi_theta1,
            ClassifierId::T => self.t_v1,
            ClassifierId::Nb => None,
            ClassifierId::Oracle => self.oracle,
        }
    }

    fn average(points: &[TheoryPoint]) -> TheoryPoint {
        let avg = |f: fn(&TheoryPoint) -> Option<f64>| -> Option<f64> {
            let mut total = 0.0;
            for p in points {
                total += f(p)?;
            }
            (!points.is_empty()).then(|| total / points.len() as f64)
        };
        TheoryPoint {
            delta2: avg(|p| Some(p.delta2)).unwrap_or(0.0),
            phi_theta1: avg(|p| p.phi_theta1),
            phi_theta2: avg(|p| p.phi_theta2),
            t_full: avg(|p| p.t_full),
            t_v1: avg(|p| p.t_v1),
            t_v2: avg(|p| p.t_v2),
            t_v3: avg(|p| p.t_v3),
            oracle: avg(|p| p.oracle),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationOutcome {
    /// Test error in percent, aligned with the configured classifiers.
    pub errors_pct: Vec<f64>,
    pub theory: Option<TheoryPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierSummary {
    pub classifier: ClassifierId,
    pub median_error_pct: f64,
    /// Standard deviation of the per-replication errors.
    pub se_pct: f64,
    /// False when a single replication leaves the spread undefined.
    pub se_defined: bool,
    pub mean_error_pct: f64,
    pub per_rep_errors: Vec<f64>,
    pub theory_pred_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub experiment_id: String,
    pub reps: usize,
    pub master_seed: u64,
    pub classifiers: Vec<ClassifierSummary>,
    /// Predictions averaged over replications, when requested.
    pub theory: Option<TheoryPoint>,
}

impl ExperimentResult {
    pub fn get(&self, id: ClassifierId) -> Option<&ClassifierSummary> {
        self.classifiers.iter().find(|c| c.classifier == id)
    }
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Sample standard deviation; `None` with fewer than two values.
pub fn std_dev(values: &[f64]) -> Option<f64> {
    let n = values.len();
    if n < 2 {
        return None;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    Some((ss / (n - 1) as f64).sqrt())
}

/// A validated configuration with everything shared by its replications.
#[derive(Debug)]
pub struct Experiment {
    config: ExperimentConfig,
    mixing: MixingMatrix,
    mu1: DVector<f64>,
    fixed_mu2: Option<DVector<f64>>,
    redraw_center: Option<f64>,
    t_template: Option<TheoryInputsT>,
}

impl Experiment {
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let p = config.p();
        let mixing = MixingMatrix::from_covariance(&config.covariance)?;
        let (fixed_mu2, redraw_center) = match &config.means {
            MeanDesign::Fixed(mu2) => (Some(mu2.clone()), None),
            MeanDesign::Scenario(s) => match s.kind {
                ScenarioKind::Localized => (Some(localized_vector(p, s.n0)), None),
                ScenarioKind::Delocalized => {
                    let center = delocalized_center(s.n0, &config.covariance)?;
                    if s.redraw_mu2 {
                        (None, Some(center))
                    } else {
                        let mut rng = ChaCha8Rng::seed_from_u64(config.master_seed);
                        rng.set_stream(FIXED_MEAN_STREAM);
                        (Some(draw_delocalized(p, center, &mut rng)?), None)
                    }
                }
            },
        };
        let t_template = if config.theory_overlay {
            Some(TheoryInputsT::new(
                DVector::zeros(p),
                config.covariance.clone(),
                config.n1,
                config.n2,
                config.innovation1,
                config.innovation2,
            )?)
        } else {
            None
        };
        Ok(Self {
            mu1: DVector::zeros(p),
            config,
            mixing,
            fixed_mu2,
            redraw_center,
            t_template,
        })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.config
    }

    /// Errors from replication `rep` are wrapped with its index.
    pub fn run_replication(&self, rep: usize) -> Result<ReplicationOutcome> {
        self.replicate(rep).map_err(|e| Error::Replication {
            rep,
            source: Box::new(e),
        })
    }

    fn replicate(&self, rep: usize) -> Result<ReplicationOutcome> {
        let cfg = &self.config;
        let p = cfg.p();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.master_seed);
        rng.set_stream(rep as u64);

        let drawn;
        let mu2 = match (&self.fixed_mu2, self.redraw_center) {
            (Some(m), _) => m,
            (None, Some(center)) => {
                drawn = draw_delocalized(p, center, &mut rng)?;
                &drawn
            }
            (None, None) => unreachable!("means are fixed or redrawn"),
        };
        let first = Population {
            mean: &self.mu1,
            mixing: &self.mixing,
            innovation: cfg.innovation1,
        };
        let second = Population {
            mean: mu2,
            mixing: &self.mixing,
            innovation: cfg.innovation2,
        };
        let x = sample_population(cfg.n1, &first, &mut rng)?;
        let y = sample_population(cfg.n2, &second, &mut rng)?;
        let z1 = sample_population(cfg.m1, &first, &mut rng)?;
        let z2 = sample_population(cfg.m2, &second, &mut rng)?;

        let need_scatter = cfg.classifiers.contains(&ClassifierId::D);
        let stats = classify::fit(&x, &y, need_scatter)?;
        let total = (cfg.m1 + cfg.m2) as f64;
        let mut errors_pct = Vec::with_capacity(cfg.classifiers.len());
        for &id in &cfg.classifiers {
            let statistics = |z: &DMatrix<f64>| -> Result<Vec<f64>> {
                match id {
                    ClassifierId::D => classify::d_statistics(&stats, z),
                    ClassifierId::T => classify::t_statistics(&stats, z),
                    ClassifierId::Nb => {
                        Ok(NaiveBayesRule::new(&stats, stats.pooled_variances())?.statistics(z))
                    }
                    ClassifierId::Oracle => {
                        Ok(FisherRule::new(&self.mu1, mu2, &cfg.covariance)?.statistics(z))
                    }
                }
            };
            let wrong1 = statistics(&z1)?.iter().filter(|&&s| s > 0.0).count();
            let wrong2 = statistics(&z2)?.iter().filter(|&&s| s <= 0.0).count();
            errors_pct.push(100.0 * (wrong1 + wrong2) as f64 / total);
        }

        let theory = match &self.t_template {
            Some(template) => Some(self.theory_point(template, mu2)?),
            None => None,
        };
        Ok(ReplicationOutcome { errors_pct, theory })
    }

    fn theory_point(&self, template: &TheoryInputsT, mu2: &DVector<f64>) -> Result<TheoryPoint> {
        let cfg = &self.config;
        let delta = mu2 - &self.mu1;
        let delta2 = mahalanobis(&delta, &cfg.covariance)?;
        let mut point = TheoryPoint {
            delta2,
            oracle: Some(100.0 * normal_cdf(-0.5 * delta2.sqrt())),
            ..TheoryPoint::default()
        };
        if cfg.p() + 2 < cfg.n1 + cfg.n2 {
            let d = TheoryInputsD::from_design(cfg.p(), cfg.n1, cfg.n2, delta2)?;
            point.phi_theta1 = Some(100.0 * d.misclass());
            point.phi_theta2 = Some(100.0 * normal_cdf(d.theta2()));
        }
        let mut t = template.clone();
        t.delta = delta;
        let pct = |v| t_misclass(&t, v).ok().map(|q| 100.0 * q);
        point.t_full = pct(VarianceVariant::Full);
        point.t_v1 = pct(VarianceVariant::V1);
        point.t_v2 = pct(VarianceVariant::V2);
        point.t_v3 = pct(VarianceVariant::V3);
        Ok(point)
    }

    /// Runs every replication on the current rayon pool.
    pub fn run(&self) -> Result<ExperimentResult> {
        let outcomes = (0..self.config.reps)
            .into_par_iter()
            .map(|rep| self.run_replication(rep))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.aggregate(outcomes))
    }

    fn aggregate(&self, outcomes: Vec<ReplicationOutcome>) -> ExperimentResult {
        let cfg = &self.config;
        let theory: Option<Vec<TheoryPoint>> = outcomes.iter().map(|o| o.theory).collect();
        let theory = theory.map(|t| TheoryPoint::average(&t));
        let classifiers = cfg
            .classifiers
            .iter()
            .enumerate()
            .map(|(k, &id)| {
                let errors: Vec<f64> = outcomes.iter().map(|o| o.errors_pct[k]).collect();
                let sd = std_dev(&errors);
                ClassifierSummary {
                    classifier: id,
                    median_error_pct: median(&errors),
                    se_pct: sd.unwrap_or(0.0),
                    se_defined: sd.is_some(),
                    mean_error_pct: errors.iter().sum::<f64>() / errors.len() as f64,
                    per_rep_errors: errors,
                    theory_pred_pct: theory.as_ref().and_then(|t| t.for_classifier(id)),
                }
            })
            .collect();
        ExperimentResult {
            experiment_id: cfg.id.clone(),
            reps: cfg.reps,
            master_seed: cfg.master_seed,
            classifiers,
            theory,
        }
    }
}

/// Runs one replication of a configuration from scratch.
pub fn run_replication(config: &ExperimentConfig, rep: usize) -> Result<ReplicationOutcome> {
    Experiment::new(config.clone())?.run_replication(rep)
}

/// Runs all replications on the global rayon pool.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    Experiment::new(config.clone())?.run()
}

/// Runs all replications on a dedicated pool of `workers` threads.
pub fn run_experiment_with_workers(
    config: &ExperimentConfig,
    workers: usize,
) -> Result<ExperimentResult> {
    let experiment = Experiment::new(config.clone())?;
    worker_pool(workers)?.install(|| experiment.run())
}

pub(crate) fn worker_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Usage(format!("cannot start {workers} worker threads: {e}")))
}
