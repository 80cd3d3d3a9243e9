//! TOML run configuration.

use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::harness::{ClassifierId, ExperimentConfig, MeanDesign};
use crate::model::{CovarianceKind, CovarianceSpec, InnovationSpec, ScenarioKind, ScenarioSpec};
use crate::{Error, Result};

pub const CONFIG_SCHEMA: &str = r#"Run configuration (TOML). Only [experiment] is required.

[experiment]
id = "name"            # optional, labels output rows
p = 125                # dimension (required)
n = 250                # both training sizes, or give n1 and n2
n1 = 250
n2 = 250
m1 = 250               # test points from each population, default n1 / n2
m2 = 250
reps = 1000            # default 1000
seed = 42              # master seed (required)
theory_overlay = false

[covariance]
kind = "identity"      # identity | equal_corr | ar1 | diagonal | explicit
rho = 0.5              # equal_corr and ar1
sigmas = [1.0, 2.0]    # diagonal variances
matrix = [[1.0, 0.0], [0.0, 1.0]]  # explicit

[scenario]
kind = "delocalized"   # localized | delocalized
n0 = 10                # default min(10, p)
redraw_mu2 = true

[innovation]
kind = "normal"        # normal | student_t | gamma, for population 1
df = 7                 # student_t degrees of freedom, must exceed 4
reflected = false      # gamma: use 1 - u instead of u - 1
kind2 = "normal"       # population 2, defaults to population 1
df2 = 7
reflected2 = false

[classifiers]
ids = ["d", "t", "nb", "oracle"]   # default: all that apply

[output]
directory = "out"      # default $DETRACE_OUT_DIR, then ./detrace-out
formats = ["csv", "json"]
"#;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigFile {
    pub experiment: ExperimentSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covariance: Option<CovarianceSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ScenarioSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub innovation: Option<InnovationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classifiers: Option<ClassifiersSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSection>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub p: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n1: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n2: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m1: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m2: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reps: Option<usize>,
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theory_overlay: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovarianceSection {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigmas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n0: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub redraw_mu2: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InnovationSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub df: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reflected: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub df2: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reflected2: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifiersSection {
    pub ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directory: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formats: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
}

impl Default for Formats {
    fn default() -> Self {
        Self {
            csv: true,
            json: true,
        }
    }
}

impl Formats {
    pub fn parse(names: &[String]) -> Result<Self> {
        let mut f = Formats {
            csv: false,
            json: false,
        };
        for n in names {
            match n.to_ascii_lowercase().as_str() {
                "csv" => f.csv = true,
                "json" => f.json = true,
                other => {
                    return Err(Error::config(
                        "[output].formats",
                        format!("unknown format {other:?}; expected csv or json"),
                    ))
                }
            }
        }
        Ok(f)
    }
}

/// A parsed configuration file.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: ExperimentConfig,
    pub out_dir: Option<PathBuf>,
    pub formats: Formats,
}

pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<RunConfig> {
    let file: RunConfigFile =
        toml::from_str(text).map_err(|e| Error::config("config", e.message().to_string()))?;
    file.resolve()
}

fn required<T>(value: Option<T>, key: &str) -> Result<T> {
    value.ok_or_else(|| Error::config(key, "missing required key"))
}

fn innovation(
    kind: Option<&str>,
    df: Option<u32>,
    reflected: Option<bool>,
    suffix: &str,
) -> Result<InnovationSpec> {
    let key = |k: &str| format!("[innovation].{k}{suffix}");
    let spec = match kind.unwrap_or("normal") {
        "normal" | "standard_normal" => InnovationSpec::StandardNormal,
        "student_t" | "t" => {
            let df = required(df, &key("df"))?;
            InnovationSpec::student_t(df).map_err(|e| Error::config(key("df"), e.to_string()))?
        }
        "gamma" | "gamma_shifted" => InnovationSpec::GammaShifted {
            reflected: reflected.unwrap_or(false),
        },
        other => {
            return Err(Error::config(
                key("kind"),
                format!("unknown innovation {other:?}; expected normal, student_t or gamma"),
            ))
        }
    };
    Ok(spec)
}

impl RunConfigFile {
    pub fn resolve(&self) -> Result<RunConfig> {
        let e = &self.experiment;
        let p = required(e.p, "[experiment].p")?;
        if p == 0 {
            return Err(Error::config("[experiment].p", "must be positive"));
        }
        let (n1, n2) = match (e.n, e.n1, e.n2) {
            (Some(n), None, None) => (n, n),
            (None, Some(n1), Some(n2)) => (n1, n2),
            (Some(_), _, _) => {
                return Err(Error::config(
                    "[experiment].n",
                    "give either n or both n1 and n2",
                ))
            }
            (None, None, _) => {
                return Err(Error::config("[experiment].n1", "missing required key"))
            }
            (None, _, None) => {
                return Err(Error::config("[experiment].n2", "missing required key"))
            }
        };
        let seed = required(e.seed, "[experiment].seed")?;

        let covariance = match &self.covariance {
            None => CovarianceSpec::identity(p)?,
            Some(c) => {
                let rho = || required(c.rho, "[covariance].rho");
                let range = |r: Result<CovarianceSpec>| {
                    r.map_err(|err| Error::config("[covariance].rho", err.to_string()))
                };
                match c.kind.as_str() {
                    "identity" => CovarianceSpec::identity(p)?,
                    "equal_corr" => range(CovarianceSpec::equal_corr(p, rho()?))?,
                    "ar1" => range(CovarianceSpec::ar1(p, rho()?))?,
                    "diagonal" => {
                        let s = required(c.sigmas.clone(), "[covariance].sigmas")?;
                        if s.len() != p {
                            return Err(Error::config(
                                "[covariance].sigmas",
                                format!("{} entries for p = {p}", s.len()),
                            ));
                        }
                        CovarianceSpec::diagonal(s)
                            .map_err(|err| Error::config("[covariance].sigmas", err.to_string()))?
                    }
                    "explicit" => {
                        let rows = required(c.matrix.clone(), "[covariance].matrix")?;
                        if rows.len() != p || rows.iter().any(|r| r.len() != p) {
                            return Err(Error::config(
                                "[covariance].matrix",
                                format!("must be {p} rows of {p} values"),
                            ));
                        }
                        let m = DMatrix::from_fn(p, p, |i, j| rows[i][j]);
                        CovarianceSpec::explicit(m)
                            .map_err(|err| Error::config("[covariance].matrix", err.to_string()))?
                    }
                    other => {
                        return Err(Error::config(
                            "[covariance].kind",
                            format!(
                                "unknown kind {other:?}; expected identity, equal_corr, ar1, diagonal or explicit"
                            ),
                        ))
                    }
                }
            }
        };

        let s = self.scenario.clone().unwrap_or(ScenarioSection {
            kind: None,
            n0: None,
            redraw_mu2: None,
        });
        let n0 = s.n0.unwrap_or(10.min(p));
        let mut scenario = match s.kind.as_deref().unwrap_or("delocalized") {
            "localized" => ScenarioSpec::localized(n0),
            "delocalized" => ScenarioSpec::delocalized(n0),
            other => {
                return Err(Error::config(
                    "[scenario].kind",
                    format!("unknown scenario {other:?}; expected localized or delocalized"),
                ))
            }
        };
        if let Some(r) = s.redraw_mu2 {
            scenario.redraw_mu2 = r;
        }

        let (innov1, innov2) = match &self.innovation {
            None => (
                InnovationSpec::StandardNormal,
                InnovationSpec::StandardNormal,
            ),
            Some(i) => {
                let first = innovation(i.kind.as_deref(), i.df, i.reflected, "")?;
                let second = if i.kind2.is_none() && i.df2.is_none() && i.reflected2.is_none() {
                    first
                } else {
                    innovation(
                        i.kind2.as_deref().or(i.kind.as_deref()),
                        i.df2.or(i.df),
                        i.reflected2.or(i.reflected),
                        "2",
                    )?
                };
                (first, second)
            }
        };

        let classifiers = match &self.classifiers {
            Some(c) => c
                .ids
                .iter()
                .map(|id| {
                    id.parse::<ClassifierId>()
                        .map_err(|err| Error::config("[classifiers].ids", err.to_string()))
                })
                .collect::<Result<Vec<_>>>()?,
            None => ClassifierId::ALL
                .into_iter()
                .filter(|&c| c != ClassifierId::D || p + 2 < n1 + n2)
                .collect(),
        };

        let mut experiment = ExperimentConfig::new(covariance, scenario, n1, n2);
        experiment.id = e.id.clone().unwrap_or_else(|| "simulate".into());
        experiment.m1 = e.m1.unwrap_or(n1);
        experiment.m2 = e.m2.unwrap_or(n2);
        experiment.reps = e.reps.unwrap_or(1000);
        experiment.master_seed = seed;
        experiment.innovation1 = innov1;
        experiment.innovation2 = innov2;
        experiment.classifiers = classifiers;
        experiment.theory_overlay = e.theory_overlay.unwrap_or(false);
        experiment.validate()?;

        let (out_dir, formats) = match &self.output {
            None => (None, Formats::default()),
            Some(o) => (
                o.directory.clone(),
                match &o.formats {
                    Some(f) => Formats::parse(f)?,
                    None => Formats::default(),
                },
            ),
        };
        Ok(RunConfig {
            experiment,
            out_dir,
            formats,
        })
    }
}

fn innovation_fields(spec: InnovationSpec) -> (String, Option<u32>, Option<bool>) {
    match spec {
        InnovationSpec::StandardNormal => ("normal".into(), None, None),
        InnovationSpec::StudentT { df } => ("student_t".into(), Some(df), None),
        InnovationSpec::GammaShifted { reflected } => ("gamma".into(), None, Some(reflected)),
    }
}

/// Serializes a configuration back to the file format, fully explicit.
pub fn to_toml(config: &RunConfig) -> Result<String> {
    let c = &config.experiment;
    let p = c.p();
    let scenario = match &c.means {
        MeanDesign::Scenario(s) => s,
        MeanDesign::Fixed(_) => {
            return Err(Error::Usage(
                "fixed mean vectors cannot be written as a run configuration".into(),
            ))
        }
    };
    let covariance = match c.covariance.kind() {
        CovarianceKind::Identity => CovarianceSection {
            kind: "identity".into(),
            rho: None,
            sigmas: None,
            matrix: None,
        },
        CovarianceKind::EqualCorr { rho } => CovarianceSection {
            kind: "equal_corr".into(),
            rho: Some(*rho),
            sigmas: None,
            matrix: None,
        },
        CovarianceKind::Ar1 { rho } => CovarianceSection {
            kind: "ar1".into(),
            rho: Some(*rho),
            sigmas: None,
            matrix: None,
        },
        CovarianceKind::Diagonal(s) => CovarianceSection {
            kind: "diagonal".into(),
            rho: None,
            sigmas: Some(s.clone()),
            matrix: None,
        },
        CovarianceKind::Explicit(m) => CovarianceSection {
            kind: "explicit".into(),
            rho: None,
            sigmas: None,
            matrix: Some((0..p).map(|i| m.row(i).iter().copied().collect()).collect()),
        },
    };
    let (kind, df, reflected) = innovation_fields(c.innovation1);
    let (kind2, df2, reflected2) = innovation_fields(c.innovation2);
    let mut formats = Vec::new();
    if config.formats.csv {
        formats.push("csv".to_string());
    }
    if config.formats.json {
        formats.push("json".to_string());
    }
    let file = RunConfigFile {
        experiment: ExperimentSection {
            id: Some(c.id.clone()),
            p: Some(p),
            n: None,
            n1: Some(c.n1),
            n2: Some(c.n2),
            m1: Some(c.m1),
            m2: Some(c.m2),
            reps: Some(c.reps),
            seed: Some(c.master_seed),
            theory_overlay: Some(c.theory_overlay),
        },
        covariance: Some(covariance),
        scenario: Some(ScenarioSection {
            kind: Some(
                match scenario.kind {
                    ScenarioKind::Localized => "localized",
                    ScenarioKind::Delocalized => "delocalized",
                }
                .into(),
            ),
            n0: Some(scenario.n0),
            redraw_mu2: Some(scenario.redraw_mu2),
        }),
        innovation: Some(InnovationSection {
            kind: Some(kind),
            df,
            reflected,
            kind2: Some(kind2),
            df2,
            reflected2,
        }),
        classifiers: Some(ClassifiersSection {
            ids: c
                .classifiers
                .iter()
                .map(|id| id.name().to_string())
                .collect(),
        }),
        output: Some(OutputSection {
            directory: config.out_dir.clone(),
            formats: Some(formats),
        }),
    };
    toml::to_string(&file).map_err(|e| Error::Usage(format!("cannot serialize configuration: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config_str("[experiment]\np = 20\nn = 30\nseed = 7\n").unwrap();
        let e = &c.experiment;
        assert_eq!((e.n1, e.n2, e.m1, e.m2, e.reps), (30, 30, 30, 30, 1000));
        assert_eq!(e.master_seed, 7);
        assert!(e.covariance.is_identity());
        assert_eq!(e.means, MeanDesign::Scenario(ScenarioSpec::delocalized(10)));
        assert_eq!(e.classifiers, ClassifierId::ALL.to_vec());
        assert_eq!(c.formats, Formats::default());
    }

    #[test]
    fn d_dropped_by_default_when_too_wide() {
        let c = parse_config_str("[experiment]\np = 100\nn = 30\nseed = 7\n").unwrap();
        assert!(!c.experiment.classifiers.contains(&ClassifierId::D));
        let err = parse_config_str(
            "[experiment]\np = 100\nn = 30\nseed = 7\n[classifiers]\nids = [\"d\"]\n",
        )
        .unwrap_err();
        assert!(err.to_string().contains("smaller than n1 + n2 - 2"));
    }

    #[test]
    fn errors_name_the_key() {
        let cases = [
            ("[experiment]\nn = 30\nseed = 1\n", "[experiment].p"),
            ("[experiment]\np = 5\nseed = 1\n", "[experiment].n1"),
            ("[experiment]\np = 5\nn = 30\n", "[experiment].seed"),
            (
                "[experiment]\np = 5\nn = 30\nseed = 1\n[covariance]\nkind = \"equal_corr\"\nrho = 1.2\n",
                "[covariance].rho",
            ),
            (
                "[experiment]\np = 5\nn = 30\nseed = 1\n[covariance]\nkind = \"ar1\"\n",
                "[covariance].rho",
            ),
            (
                "[experiment]\np = 5\nn = 30\nseed = 1\n[classifiers]\nids = [\"road\"]\n",
                "[classifiers].ids",
            ),
            (
                "[experiment]\np = 5\nn = 30\nseed = 1\n[innovation]\nkind = \"student_t\"\ndf = 3\n",
                "[innovation].df",
            ),
            ("[experiment]\np = 5\nn = 30\nseed = 1\n[scenario]\nn0 = 9\n", "[scenario].n0"),
        ];
        for (text, key) in cases {
            let msg = parse_config_str(text).unwrap_err().to_string();
            assert!(msg.contains(key), "{msg:?} should mention {key}");
        }
    }

    #[test]
    fn unknown_keys_rejected() {
        let msg = parse_config_str("[experiment]\np = 5\nn = 30\nseed = 1\nrepz = 3\n")
            .unwrap_err()
            .to_string();
        assert!(msg.contains("repz"), "{msg}");
        assert!(
            parse_config_str("[experiment]\np = 5\nn = 30\nseed = 1\n[extra]\na = 1\n").is_err()
        );
    }

    #[test]
    fn table_config() {
        let text = r#"
[experiment]
id = "table1_rho0.5"
p = 125
n1 = 250
n2 = 250
reps = 200
seed = 11
theory_overlay = true

[covariance]
kind = "equal_corr"
rho = 0.5

[scenario]
kind = "delocalized"
n0 = 10

[classifiers]
ids = ["d", "nb", "oracle", "t"]
"#;
        let c = parse_config_str(text).unwrap();
        assert_eq!(c.experiment.p(), 125);
        assert_eq!((c.experiment.n1, c.experiment.n2), (250, 250));
        assert_eq!(c.experiment.classifiers.len(), 4);
    }

    #[test]
    fn round_trip_is_idempotent() {
        let texts = [
            "[experiment]\np = 20\nn = 30\nseed = 7\n",
            "[experiment]\np = 3\nn1 = 10\nn2 = 12\nm1 = 4\nm2 = 0\nseed = 1\n[covariance]\nkind = \"explicit\"\nmatrix = [[2.0, 0.5, 0.0], [0.5, 1.0, 0.0], [0.0, 0.0, 1.0]]\n[scenario]\nkind = \"localized\"\nn0 = 2\n[innovation]\nkind = \"gamma\"\nkind2 = \"student_t\"\ndf2 = 9\n[output]\ndirectory = \"out\"\nformats = [\"csv\"]\n",
            "[experiment]\np = 4\nn = 30\nseed = 3\n[covariance]\nkind = \"diagonal\"\nsigmas = [1.0, 2.0, 3.5, 0.25]\n[scenario]\nkind = \"localized\"\n",
            "[experiment]\np = 40\nn = 60\nseed = 3\nreps = 5\n[covariance]\nkind = \"ar1\"\nrho = -0.3\n[scenario]\nredraw_mu2 = false\n",
        ];
        for text in texts {
            let first = parse_config_str(text).unwrap();
            let again = parse_config_str(&to_toml(&first).unwrap()).unwrap();
            assert_eq!(first, again, "{text}");
        }
    }
}
