use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::ClassifierId;
use crate::classify::{self, Label, NaiveBayesRule, TrainedStats};
use crate::dataset::LabeledDataset;
use crate::{Error, Result};

/// Misclassification counts for one classifier on a train/test split.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetErrors {
    pub classifier: ClassifierId,
    /// Re-substitution errors on the training set.
    pub train_errors: usize,
    pub train_n: usize,
    pub test_errors: usize,
    pub test_n: usize,
}

/// Fits on `train` and counts errors on both sets. The oracle is unavailable
/// because the true parameters of real data are unknown.
pub fn classify_dataset(
    train: &LabeledDataset,
    test: &LabeledDataset,
    classifiers: &[ClassifierId],
) -> Result<Vec<DatasetErrors>> {
    if train.p() != test.p() {
        return Err(Error::DimensionMismatch {
            expected: train.p(),
            found: test.p(),
        });
    }
    if train.class_names() != test.class_names() {
        return Err(Error::Dataset(
            "training and test sets use different class labels".into(),
        ));
    }
    if classifiers.contains(&ClassifierId::Oracle) {
        return Err(Error::Usage(
            "the oracle needs the true means and covariance, which real data lacks".into(),
        ));
    }
    let x = train.group(Label::Pi1);
    let y = train.group(Label::Pi2);
    let stats = classify::fit(&x, &y, classifiers.contains(&ClassifierId::D))?;

    classifiers
        .iter()
        .map(|&id| {
            Ok(DatasetErrors {
                classifier: id,
                train_errors: count_errors(id, &stats, train)?,
                train_n: train.n(),
                test_errors: count_errors(id, &stats, test)?,
                test_n: test.n(),
            })
        })
        .collect()
}

fn count_errors(id: ClassifierId, stats: &TrainedStats, data: &LabeledDataset) -> Result<usize> {
    let rows: &DMatrix<f64> = data.features();
    let statistics = match id {
        ClassifierId::D => classify::d_statistics(stats, rows)?,
        ClassifierId::T => classify::t_statistics(stats, rows)?,
        ClassifierId::Nb => NaiveBayesRule::new(stats, stats.pooled_variances())?.statistics(rows),
        ClassifierId::Oracle => unreachable!("rejected above"),
    };
    Ok(statistics
        .iter()
        .zip(data.labels())
        .filter(|(&s, &label)| classify::Decision::from_statistic(s).label != label)
        .count())
}
