//! Command-line front end: config parsing, CSV ingestion and result emission.

mod config;
mod ingest;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{
    parse_config, parse_config_str, to_toml, ClassifiersSection, CovarianceSection,
    ExperimentSection, Formats, InnovationSection, OutputSection, RunConfig, RunConfigFile,
    ScenarioSection, CONFIG_SCHEMA,
};
pub use ingest::{
    ingest_csv, ingest_test_csv, read_labeled, IngestOptions, LabelSource, RawDataset,
};
pub use output::{
    default_out_dir, emit_report, emit_results, write_comparison_csv, write_dataset_errors_csv,
    write_panel_csv, write_results_csv, OUT_DIR_ENV,
};

use crate::harness::{self, ClassifierId, Target};
use crate::theory::{self, TheoryInputsD, TheoryInputsT, VarianceVariant};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "detrace",
    version,
    about = "Determinant- and trace-based two-population classifiers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a Monte Carlo experiment described by a TOML file.
    #[command(after_long_help = CONFIG_SCHEMA)]
    Simulate(SimulateArgs),
    /// Evaluate asymptotic misclassification probabilities.
    #[command(subcommand)]
    Theory(TheoryCommand),
    /// Fit on a labeled training CSV and count errors on a test CSV.
    Classify(ClassifyArgs),
    /// Regenerate a published table or figure.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory; overrides the config file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum TheoryCommand {
    /// D-criterion limits from y = p/(n1+n2), λ = n1/(n1+n2) and Δ².
    D(TheoryDArgs),
    /// T-criterion predictions for the design in a TOML file.
    #[command(after_long_help = CONFIG_SCHEMA)]
    T(TheoryTArgs),
}

#[derive(Debug, Args)]
pub struct TheoryDArgs {
    #[arg(long, required_unless_present = "p", conflicts_with = "p")]
    pub y: Option<f64>,
    #[arg(long, required_unless_present = "p", conflicts_with = "p")]
    pub lambda: Option<f64>,
    /// Use a finite design instead of y and λ.
    #[arg(long, requires_all = ["n1", "n2"])]
    pub p: Option<usize>,
    #[arg(long)]
    pub n1: Option<usize>,
    #[arg(long)]
    pub n2: Option<usize>,
    #[arg(long)]
    pub delta2: f64,
}

#[derive(Debug, Args)]
pub struct TheoryTArgs {
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    /// Labels for the training file, one per observation.
    #[arg(long, conflicts_with = "label_column", requires = "test_labels")]
    pub labels: Option<PathBuf>,
    #[arg(long)]
    pub test_labels: Option<PathBuf>,
    /// Label column in both files, by header name or zero-based index.
    #[arg(long, required_unless_present = "labels")]
    pub label_column: Option<String>,
    /// Classifiers to apply (d, t, nb); repeat the flag for several.
    #[arg(long = "classifier", default_values_t = [ClassifierId::T])]
    pub classifiers: Vec<ClassifierId>,
    /// Class mapped to the first population.
    #[arg(long)]
    pub positive_label: Option<String>,
    /// Files hold features in rows and observations in columns.
    #[arg(long)]
    pub transpose: bool,
    /// Also write the error counts as CSV into this directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// table1, table2, table3, table4, fig1, fig2 or fig5.
    pub target: Target,
    /// Fraction of the published replication count.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Skip the JSON report.
    #[arg(long)]
    pub csv_only: bool,
}

fn workers(requested: Option<usize>) -> usize {
    requested.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn pct(v: Option<f64>) -> String {
    v.map_or("-".to_string(), |x| format!("{x:.2}"))
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let run = parse_config(&args.config)?;
    let result = harness::run_experiment_with_workers(&run.experiment, workers(args.workers))?;
    println!(
        "{} with {} replications (seed {})",
        result.experiment_id, result.reps, result.master_seed
    );
    println!(
        "{:<12} {:>10} {:>8} {:>10} {:>8}",
        "classifier", "median %", "se", "mean %", "theory"
    );
    for s in &result.classifiers {
        println!(
            "{:<12} {:>10.2} {:>8} {:>10.2} {:>8}",
            s.classifier.title(),
            s.median_error_pct,
            pct(s.se_defined.then_some(s.se_pct)),
            s.mean_error_pct,
            pct(s.theory_pred_pct)
        );
    }
    let dir = args.out.or(run.out_dir).unwrap_or_else(default_out_dir);
    for path in emit_results(&result, run.formats, &dir)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn theory_d(args: TheoryDArgs) -> Result<()> {
    let inputs = match (args.y, args.lambda, args.p) {
        (Some(y), Some(lambda), None) => TheoryInputsD::new(y, lambda, args.delta2)?,
        (None, None, Some(p)) => {
            let (n1, n2) = args
                .n1
                .zip(args.n2)
                .ok_or_else(|| Error::Usage("--p needs both --n1 and --n2".into()))?;
            TheoryInputsD::from_design(p, n1, n2, args.delta2)?
        }
        _ => {
            return Err(Error::Usage(
                "give --y and --lambda, or --p, --n1 and --n2".into(),
            ))
        }
    };
    let (t1, t2) = (inputs.theta1(), inputs.theta2());
    println!("y           {}", inputs.y());
    println!("lambda      {}", inputs.lambda());
    println!("delta2      {}", inputs.delta2());
    println!("theta1      {t1}");
    println!("Phi(theta1) {}", theory::normal_cdf(t1));
    println!("theta2      {t2}");
    println!("Phi(theta2) {}", theory::normal_cdf(t2));
    match inputs.tau() {
        Ok(tau) => println!("tau         {tau}"),
        Err(e) => println!("tau         undefined ({e})"),
    }
    Ok(())
}

fn theory_t(args: TheoryTArgs) -> Result<()> {
    let run = parse_config(&args.config)?;
    let c = &run.experiment;
    let mu2 = c.reference_mu2()?;
    let inputs = TheoryInputsT::new(
        mu2,
        c.covariance.clone(),
        c.n1,
        c.n2,
        c.innovation1,
        c.innovation2,
    )?;
    println!(
        "T-criterion, p = {}, n1 = {}, n2 = {}, mean {}",
        c.p(),
        c.n1,
        c.n2,
        inputs.mean()
    );
    println!("{:<8} {:>16} {:>14}", "variant", "variance", "error %");
    for variant in VarianceVariant::ALL {
        let v = theory::t_variance(&inputs, variant);
        let e = theory::t_misclass(&inputs, variant);
        match (v, e) {
            (Ok(v), Ok(e)) => println!("{:<8} {:>16.6} {:>14.4}", variant.name(), v, 100.0 * e),
            (Err(err), _) | (_, Err(err)) => println!("{:<8} n/a ({err})", variant.name()),
        }
    }
    Ok(())
}

fn classify(args: ClassifyArgs) -> Result<()> {
    let options = IngestOptions {
        transpose: args.transpose,
        positive_label: args.positive_label.clone(),
    };
    let (train_src, test_src) = match (&args.labels, &args.test_labels, &args.label_column) {
        (Some(l), Some(tl), None) => (LabelSource::File(l), LabelSource::File(tl)),
        (None, None, Some(col)) => (LabelSource::Column(col), LabelSource::Column(col)),
        _ => {
            return Err(Error::Usage(
                "give --labels with --test-labels, or --label-column".into(),
            ))
        }
    };
    let train = ingest_csv(&args.train, train_src, &options)?;
    let test = ingest_test_csv(&args.test, test_src, &options, &train)?;
    let errors = harness::classify_dataset(&train, &test, &args.classifiers)?;
    let [c1, c2] = train.class_names();
    println!(
        "train n = {}, test n = {}, p = {}, classes {c1} / {c2}",
        train.n(),
        test.n(),
        train.p()
    );
    println!(
        "{:<12} {:>14} {:>14}",
        "classifier", "train errors", "test errors"
    );
    for e in &errors {
        println!(
            "{:<12} {:>14} {:>14}",
            e.classifier.title(),
            format!("{}/{}", e.train_errors, e.train_n),
            format!("{}/{}", e.test_errors, e.test_n)
        );
    }
    if let Some(dir) = args.out {
        std::fs::create_dir_all(&dir)?;
        let path = dir.join("classify_errors.csv");
        write_dataset_errors_csv(&errors, std::fs::File::create(&path)?)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn reproduce(args: ReproduceArgs) -> Result<()> {
    let report = harness::reproduce(args.target, args.scale, args.seed, workers(args.workers))?;
    print!("{}", report.render());
    let formats = Formats {
        csv: true,
        json: !args.csv_only,
    };
    let dir = args.out.unwrap_or_else(default_out_dir);
    for path in emit_report(&report, formats, &dir)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Theory(TheoryCommand::D(a)) => theory_d(a),
        Command::Theory(TheoryCommand::T(a)) => theory_t(a),
        Command::Classify(a) => classify(a),
        Command::Reproduce(a) => reproduce(a),
    }
}

/// Exit status for a failure: 2 for numerical breakdown, 1 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_numerical() {
        2
    } else {
        1
    }
}

/// Parses `args` and runs the command, returning the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::Config { .. }) {
                eprintln!("\n{CONFIG_SCHEMA}");
            }
            exit_code(&e)
        }
    }
}
