//! Two-class labeled data for the real-data pathway.

use nalgebra::DMatrix;

use crate::classify::Label;
use crate::{Error, Result};

/// Observations in rows with one of exactly two class names each.
///
/// `class_names[0]` is mapped to Π₁ and `class_names[1]` to Π₂.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    features: DMatrix<f64>,
    labels: Vec<Label>,
    class_names: [String; 2],
    feature_names: Option<Vec<String>>,
}

impl LabeledDataset {
    /// Infers the two classes from `raw_labels`. The first label seen becomes
    /// Π₁ unless `positive_label` names the class to use instead.
    pub fn new(
        features: DMatrix<f64>,
        raw_labels: &[String],
        positive_label: Option<&str>,
        feature_names: Option<Vec<String>>,
    ) -> Result<Self> {
        let mut seen: Vec<&str> = Vec::new();
        for l in raw_labels {
            if !seen.contains(&l.as_str()) {
                seen.push(l);
            }
        }
        if seen.len() != 2 {
            return Err(Error::Dataset(format!(
                "expected exactly two distinct labels, found {}: {:?}",
                seen.len(),
                seen.iter().take(5).collect::<Vec<_>>()
            )));
        }
        if let Some(pos) = positive_label {
            match seen.iter().position(|&s| s == pos) {
                Some(0) => {}
                Some(_) => seen.swap(0, 1),
                None => {
                    return Err(Error::Dataset(format!(
                        "positive label {pos:?} does not occur in the labels"
                    )))
                }
            }
        }
        let classes = [seen[0].to_string(), seen[1].to_string()];
        Self::with_classes(features, raw_labels, classes, feature_names)
    }

    /// Maps labels onto an existing class pair, e.g. a test set onto the
    /// classes of its training set. Either class may be absent.
    pub fn with_classes(
        features: DMatrix<f64>,
        raw_labels: &[String],
        class_names: [String; 2],
        feature_names: Option<Vec<String>>,
    ) -> Result<Self> {
        if raw_labels.len() != features.nrows() {
            return Err(Error::Dataset(format!(
                "{} feature rows but {} labels",
                features.nrows(),
                raw_labels.len()
            )));
        }
        if let Some(names) = &feature_names {
            if names.len() != features.ncols() {
                return Err(Error::Dataset(format!(
                    "{} feature names for {} columns",
                    names.len(),
                    features.ncols()
                )));
            }
        }
        if let Some(pos) = features.iter().position(|v| !v.is_finite()) {
            let (r, c) = (pos % features.nrows(), pos / features.nrows());
            return Err(Error::Dataset(format!(
                "non-finite value at row {}, column {}",
                r + 1,
                c + 1
            )));
        }
        let labels = raw_labels
            .iter()
            .map(|l| {
                if *l == class_names[0] {
                    Ok(Label::Pi1)
                } else if *l == class_names[1] {
                    Ok(Label::Pi2)
                } else {
                    Err(Error::Dataset(format!(
                        "label {l:?} is neither {:?} nor {:?}",
                        class_names[0], class_names[1]
                    )))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            features,
            labels,
            class_names,
            feature_names,
        })
    }

    pub fn n(&self) -> usize {
        self.features.nrows()
    }

    pub fn p(&self) -> usize {
        self.features.ncols()
    }

    pub fn features(&self) -> &DMatrix<f64> {
        &self.features
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn class_names(&self) -> &[String; 2] {
        &self.class_names
    }

    pub fn feature_names(&self) -> Option<&[String]> {
        self.feature_names.as_deref()
    }

    /// Number of observations in Π₁ and Π₂.
    pub fn counts(&self) -> (usize, usize) {
        let n1 = self.labels.iter().filter(|&&l| l == Label::Pi1).count();
        (n1, self.n() - n1)
    }

    /// Rows belonging to one class, in their original order.
    pub fn group(&self, label: Label) -> DMatrix<f64> {
        let idx: Vec<usize> = (0..self.n()).filter(|&i| self.labels[i] == label).collect();
        self.features.select_rows(idx.iter())
    }
}
