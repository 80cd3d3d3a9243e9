//! Experiment grids behind the published tables and figures, run and laid
//! out next to the quoted numbers.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::reference::{
    QuotedCell, AR1_COLUMNS, EQUAL_CORR_COLUMNS, RHO_GRID, TABLE1, TABLE2, TABLE3, TABLE4,
    TABLE4_SIZES,
};
use super::{
    worker_pool, ClassifierId, Experiment, ExperimentConfig, ExperimentResult, MeanDesign,
};
use crate::model::{CovarianceSpec, InnovationSpec, ScenarioSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Table1,
    Table2,
    Table3,
    Table4,
    Fig1,
    Fig2,
    Fig5,
}

impl Target {
    pub const ALL: [Target; 7] = [
        Target::Table1,
        Target::Table2,
        Target::Table3,
        Target::Table4,
        Target::Fig1,
        Target::Fig2,
        Target::Fig5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::Table1 => "table1",
            Target::Table2 => "table2",
            Target::Table3 => "table3",
            Target::Table4 => "table4",
            Target::Fig1 => "fig1",
            Target::Fig2 => "fig2",
            Target::Fig5 => "fig5",
        }
    }

    /// Replications behind the published numbers; `scale` multiplies this.
    pub fn full_reps(self) -> usize {
        match self {
            Target::Table1 | Target::Table2 | Target::Table3 | Target::Table4 => 1_000,
            Target::Fig1 | Target::Fig2 | Target::Fig5 => 10_000,
        }
    }

    pub fn is_figure(self) -> bool {
        matches!(self, Target::Fig1 | Target::Fig2 | Target::Fig5)
    }

    /// The experiment grid with `reps` replications per cell.
    pub fn experiments(self, reps: usize, master_seed: u64) -> Result<Vec<GridCell>> {
        let mut cells = match self {
            Target::Table1 => equal_corr_grid(self, InnovationSpec::StandardNormal)?,
            Target::Table2 => equal_corr_grid(self, InnovationSpec::student_t(7)?)?,
            Target::Table3 => ar1_grid()?,
            Target::Table4 => table4_grid()?,
            Target::Fig1 => d_accuracy_grid("fig1", 250, 250)?,
            Target::Fig2 => {
                let mut cells = d_accuracy_grid("fig2_equal", 250, 250)?;
                cells.extend(d_accuracy_grid("fig2_quarter", 125, 375)?);
                cells
            }
            Target::Fig5 => {
                let mut cells = t_variance_grid("normal", InnovationSpec::StandardNormal)?;
                cells.extend(t_variance_grid("gamma", InnovationSpec::gamma_shifted())?);
                cells
            }
        };
        for cell in &mut cells {
            cell.config.reps = reps;
            cell.config.master_seed = master_seed;
        }
        Ok(cells)
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Target::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::Usage(format!(
                    "unknown target {s:?}; expected one of table1, table2, table3, table4, fig1, fig2, fig5"
                ))
            })
    }
}

/// One experiment of a reproduction grid.
#[derive(Debug, Clone)]
pub struct GridCell {
    /// Plot panel the cell belongs to; empty for tables.
    pub panel: String,
    pub setting: String,
    pub x: f64,
    pub config: ExperimentConfig,
    /// Quoted (column, value) pairs for this row.
    pub quoted: Vec<(&'static str, QuotedCell)>,
}

fn equal_corr_grid(target: Target, innovation: InnovationSpec) -> Result<Vec<GridCell>> {
    let table = if target == Target::Table2 {
        &TABLE2
    } else {
        &TABLE1
    };
    RHO_GRID
        .iter()
        .zip(table)
        .map(|(&rho, row)| {
            let mut config = ExperimentConfig::new(
                CovarianceSpec::equal_corr(125, rho)?,
                ScenarioSpec::delocalized(10),
                250,
                250,
            );
            config.id = format!("{}_rho{rho:.1}", target.name());
            config.innovation1 = innovation;
            config.innovation2 = innovation;
            config.classifiers = vec![
                ClassifierId::D,
                ClassifierId::Nb,
                ClassifierId::Oracle,
                ClassifierId::T,
            ];
            config.theory_overlay = true;
            Ok(GridCell {
                panel: String::new(),
                setting: format!("rho={rho:.1}"),
                x: rho,
                config,
                quoted: EQUAL_CORR_COLUMNS
                    .iter()
                    .copied()
                    .zip(row.iter().copied())
                    .collect(),
            })
        })
        .collect()
}

fn ar1_grid() -> Result<Vec<GridCell>> {
    RHO_GRID
        .iter()
        .zip(&TABLE3)
        .map(|(&rho, row)| {
            let mut config = ExperimentConfig::new(
                CovarianceSpec::ar1(125, rho)?,
                ScenarioSpec::delocalized(10),
                250,
                250,
            );
            config.id = format!("table3_rho{rho:.1}");
            config.classifiers = vec![ClassifierId::D, ClassifierId::Oracle, ClassifierId::T];
            config.theory_overlay = true;
            Ok(GridCell {
                panel: String::new(),
                setting: format!("rho={rho:.1}"),
                x: rho,
                config,
                quoted: AR1_COLUMNS
                    .iter()
                    .copied()
                    .zip(row.iter().copied())
                    .collect(),
            })
        })
        .collect()
}

fn table4_grid() -> Result<Vec<GridCell>> {
    TABLE4_SIZES
        .iter()
        .zip(&TABLE4)
        .map(|(&n, &cell)| {
            let mut config = ExperimentConfig::new(
                CovarianceSpec::identity(500)?,
                ScenarioSpec::delocalized(10),
                n,
                n,
            );
            config.id = format!("table4_n{n}");
            config.classifiers = vec![ClassifierId::T];
            config.theory_overlay = true;
            Ok(GridCell {
                panel: String::new(),
                setting: format!("n1=n2={n}"),
                x: n as f64,
                config,
                quoted: vec![("T-criterion", cell)],
            })
        })
        .collect()
}

/// Σ = I and δ spread evenly over all coordinates with Δ² = 4y/3, the
/// regime where ϑ₁ = ϑ₂/2 at λ = 1/2.
fn d_accuracy_grid(panel: &str, n1: usize, n2: usize) -> Result<Vec<GridCell>> {
    (1..=9)
        .map(|k| {
            let p = 50 * k;
            let y = p as f64 / (n1 + n2 - 2) as f64;
            let delta2 = 4.0 * y / 3.0;
            let shift = (delta2 / p as f64).sqrt();
            let mut config = ExperimentConfig::new(
                CovarianceSpec::identity(p)?,
                ScenarioSpec::localized(1),
                n1,
                n2,
            );
            config.id = format!("{panel}_p{p}");
            config.means = MeanDesign::Fixed(DVector::from_element(p, shift));
            config.classifiers = vec![ClassifierId::D];
            config.theory_overlay = true;
            Ok(GridCell {
                panel: panel.to_string(),
                setting: format!("p={p}"),
                x: y,
                config,
                quoted: Vec::new(),
            })
        })
        .collect()
}

/// p = 500, Σ = I, delocalized means; errors on Π₁ test points only.
fn t_variance_grid(panel: &str, innovation: InnovationSpec) -> Result<Vec<GridCell>> {
    (1..=10)
        .map(|k| {
            let n1 = 50 * k;
            let n2 = n1 + 100;
            let mut config = ExperimentConfig::new(
                CovarianceSpec::identity(500)?,
                ScenarioSpec::delocalized(10),
                n1,
                n2,
            );
            config.id = format!("fig5_{panel}_n{n1}");
            config.m2 = 0;
            config.innovation1 = innovation;
            config.innovation2 = innovation;
            config.classifiers = vec![ClassifierId::T];
            config.theory_overlay = true;
            Ok(GridCell {
                panel: format!("fig5_{panel}"),
                setting: format!("n1={n1},n2={n2}"),
                x: n1 as f64,
                config,
                quoted: Vec::new(),
            })
        })
        .collect()
}

/// One produced-versus-quoted comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub setting: String,
    pub column: String,
    pub produced_median: Option<f64>,
    pub produced_se: Option<f64>,
    pub quoted_median: Option<f64>,
    pub quoted_se: Option<f64>,
    pub theory_pct: Option<f64>,
}

/// Plot data: the first column is the x coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotPanel {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub target: Target,
    pub reps: usize,
    pub master_seed: u64,
    pub rows: Vec<ComparisonRow>,
    pub panels: Vec<PlotPanel>,
    pub experiments: Vec<ExperimentResult>,
}

impl Report {
    pub fn row(&self, setting: &str, column: &str) -> Option<&ComparisonRow> {
        self.rows
            .iter()
            .find(|r| r.setting == setting && r.column == column)
    }

    pub fn panel(&self, name: &str) -> Option<&PlotPanel> {
        self.panels.iter().find(|p| p.name == name)
    }

    /// Plain-text side-by-side table.
    pub fn render(&self) -> String {
        let fmt_pair = |m: Option<f64>, se: Option<f64>| match (m, se) {
            (Some(m), Some(se)) => format!("{m:6.2} ({se:5.2})"),
            (Some(m), None) => format!("{m:6.2}"),
            _ => "-".to_string(),
        };
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} with {} replications per cell (seed {}); quoted values are the published ones",
            self.target, self.reps, self.master_seed
        );
        let _ = writeln!(
            out,
            "{:<16} {:<12} {:>16} {:>16} {:>8}",
            "setting", "column", "produced", "quoted", "theory"
        );
        for r in &self.rows {
            let theory = r.theory_pct.map_or("-".to_string(), |t| format!("{t:.2}"));
            let _ = writeln!(
                out,
                "{:<16} {:<12} {:>16} {:>16} {:>8}",
                r.setting,
                r.column,
                fmt_pair(r.produced_median, r.produced_se),
                fmt_pair(r.quoted_median, r.quoted_se),
                theory
            );
        }
        for panel in &self.panels {
            let _ = writeln!(out, "\n[{}]", panel.name);
            let _ = writeln!(out, "{}", panel.columns.join("  "));
            for row in &panel.rows {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:.4}")).collect();
                let _ = writeln!(out, "{}", cells.join("  "));
            }
        }
        out
    }
}

fn reps_for(target: Target, scale: f64) -> Result<usize> {
    if !(scale > 0.0 && scale <= 1.0) {
        return Err(Error::Usage(format!("scale {scale} must lie in (0, 1]")));
    }
    let reps = (scale * target.full_reps() as f64).round() as usize;
    if reps < 50 {
        return Err(Error::Usage(format!(
            "scale {scale} gives {reps} replications for {target}; at least 50 are needed"
        )));
    }
    Ok(reps)
}

/// Runs the grid for `target` with `scale` times the published replication count.
pub fn reproduce(target: Target, scale: f64, master_seed: u64, workers: usize) -> Result<Report> {
    let reps = reps_for(target, scale)?;
    let cells = target.experiments(reps, master_seed)?;
    let pool = worker_pool(workers)?;
    let mut results = Vec::with_capacity(cells.len());
    for cell in &cells {
        let experiment = Experiment::new(cell.config.clone())?;
        results.push(pool.install(|| experiment.run())?);
    }
    Ok(assemble(target, reps, master_seed, &cells, results))
}

fn assemble(
    target: Target,
    reps: usize,
    master_seed: u64,
    cells: &[GridCell],
    results: Vec<ExperimentResult>,
) -> Report {
    let mut rows = Vec::new();
    for (cell, result) in cells.iter().zip(&results) {
        let mut columns: Vec<&str> = cell.quoted.iter().map(|(c, _)| *c).collect();
        for s in &result.classifiers {
            if !columns.contains(&s.classifier.title()) {
                columns.push(s.classifier.title());
            }
        }
        for column in columns {
            let produced = result
                .classifiers
                .iter()
                .find(|s| s.classifier.title() == column);
            let quoted = cell
                .quoted
                .iter()
                .find(|(c, _)| *c == column)
                .map(|(_, q)| *q);
            rows.push(ComparisonRow {
                setting: if cell.panel.is_empty() {
                    cell.setting.clone()
                } else {
                    format!("{}:{}", cell.panel, cell.setting)
                },
                column: column.to_string(),
                produced_median: produced.map(|s| s.median_error_pct),
                produced_se: produced.map(|s| s.se_pct),
                quoted_median: quoted.map(|q| q.median),
                quoted_se: quoted.map(|q| q.se),
                theory_pct: produced.and_then(|s| s.theory_pred_pct),
            });
        }
    }

    let mut panels: Vec<PlotPanel> = Vec::new();
    if target.is_figure() {
        for (cell, result) in cells.iter().zip(&results) {
            let (columns, row) = figure_row(target, cell, result);
            match panels.iter_mut().find(|p| p.name == cell.panel) {
                Some(p) => p.rows.push(row),
                None => panels.push(PlotPanel {
                    name: cell.panel.clone(),
                    columns,
                    rows: vec![row],
                }),
            }
        }
    }

    Report {
        target,
        reps,
        master_seed,
        rows,
        panels,
        experiments: results,
    }
}

/// Probabilities rather than percentages, matching the Φ curves.
fn figure_row(
    target: Target,
    cell: &GridCell,
    result: &ExperimentResult,
) -> (Vec<String>, Vec<f64>) {
    let theory = result.theory.unwrap_or_default();
    let prob = |v: Option<f64>| v.map_or(f64::NAN, |v| v / 100.0);
    let empirical = result.classifiers[0].mean_error_pct / 100.0;
    let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect();
    match target {
        Target::Fig1 => (
            names(&["x", "phi_theta1", "phi_theta2", "empirical"]),
            vec![
                cell.x,
                prob(theory.phi_theta1),
                prob(theory.phi_theta2),
                empirical,
            ],
        ),
        Target::Fig2 => (
            names(&["x", "phi_theta1", "empirical"]),
            vec![cell.x, prob(theory.phi_theta1), empirical],
        ),
        _ => (
            names(&["x", "empirical", "phi_v1", "phi_v2", "phi_v3"]),
            vec![
                cell.x,
                empirical,
                prob(theory.t_v1),
                prob(theory.t_v2),
                prob(theory.t_v3),
            ],
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn target_names_round_trip() {
        for t in Target::ALL {
            assert_eq!(t.name().parse::<Target>().unwrap(), t);
        }
        assert!("table5".parse::<Target>().is_err());
    }

    #[test]
    fn scale_limits() {
        assert_eq!(reps_for(Target::Table4, 0.1).unwrap(), 100);
        assert_eq!(reps_for(Target::Fig1, 1.0).unwrap(), 10_000);
        assert!(reps_for(Target::Table1, 0.01).is_err());
        assert!(reps_for(Target::Table1, 1.5).is_err());
    }

    #[test]
    fn grids_have_published_shapes() {
        assert_eq!(Target::Table1.experiments(50, 0).unwrap().len(), 10);
        assert_eq!(Target::Table4.experiments(50, 0).unwrap().len(), 9);
        let fig1 = Target::Fig1.experiments(50, 0).unwrap();
        assert_eq!(fig1.len(), 9);
        assert!((fig1[0].x - 50.0 / 498.0).abs() < 1e-15);
        assert!((fig1[8].x - 450.0 / 498.0).abs() < 1e-15);
        assert_eq!(Target::Fig2.experiments(50, 0).unwrap().len(), 18);
        assert_eq!(Target::Fig5.experiments(50, 0).unwrap().len(), 20);
        for t in Target::ALL {
            for cell in t.experiments(50, 3).unwrap() {
                cell.config.validate().unwrap();
            }
        }
    }

    #[test]
    fn fig1_construction_hits_half_tau() {
        for cell in Target::Fig1.experiments(50, 0).unwrap() {
            let MeanDesign::Fixed(mu2) = &cell.config.means else {
                panic!("fixed means expected")
            };
            let delta2 = mu2.norm_squared();
            let d = crate::theory::TheoryInputsD::from_design(cell.config.p(), 250, 250, delta2)
                .unwrap();
            assert!((d.y() / delta2 - 0.75).abs() < 1e-12);
            // λ = 250/498 rather than exactly 1/2.
            assert!((d.tau().unwrap() - 0.5).abs() < 1e-4);
        }
    }
}
