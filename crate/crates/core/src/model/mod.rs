//! Covariance structures, mean scenarios and population samplers for the
//! data-generation model X = Γx* + μ.

mod covariance;
mod innovation;
mod mixing;
mod population;
mod scenario;

pub use covariance::{
    beta_squared, build_covariance, inverse_covariance, mahalanobis, CovarianceKind,
    CovarianceSpec, CONDITION_LIMIT,
};
pub use innovation::{InnovationSampler, InnovationSpec};
pub use mixing::MixingMatrix;
pub use population::{sample_population, Population, PopulationPair};
pub(crate) use scenario::draw_delocalized;
pub use scenario::{
    delocalized_center, localized_vector, make_scenario_means, ScenarioKind, ScenarioSpec,
};
