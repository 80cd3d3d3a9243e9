//! Reading labeled feature matrices from CSV.

use std::path::Path;

use nalgebra::DMatrix;

use crate::dataset::LabeledDataset;
use crate::{Error, Result};

/// Where the class labels live.
#[derive(Debug, Clone, PartialEq)]
pub enum LabelSource<'a> {
    /// A separate file with one label per observation, optionally headed.
    File(&'a Path),
    /// A column of the feature file, by header name or zero-based index.
    Column(&'a str),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IngestOptions {
    /// The file stores features in rows and observations in columns.
    pub transpose: bool,
    /// Class to map to Π₁; otherwise the first label seen.
    pub positive_label: Option<String>,
}

struct RawTable {
    header: Option<Vec<String>>,
    rows: Vec<Vec<String>>,
}

fn read_table(path: &Path) -> Result<RawTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        if record.iter().all(|c| c.is_empty()) {
            continue;
        }
        rows.push(record.iter().map(str::to_string).collect::<Vec<_>>());
    }
    if rows.is_empty() {
        return Err(Error::Dataset(format!("{} is empty", path.display())));
    }
    let numeric = |c: &String| c.parse::<f64>().is_ok();
    // A first row is a header when it has text where the data below is numeric.
    let is_header = match rows.get(1) {
        Some(next) => rows[0]
            .iter()
            .zip(next)
            .any(|(h, d)| !numeric(h) && numeric(d)),
        None => !rows[0].iter().all(numeric),
    };
    let header = if is_header {
        Some(rows.remove(0))
    } else {
        None
    };
    let width = header
        .as_ref()
        .map_or(rows.first().map_or(0, Vec::len), Vec::len);
    for (i, r) in rows.iter().enumerate() {
        if r.len() != width {
            return Err(Error::Dataset(format!(
                "{}: data row {} has {} fields, expected {width}",
                path.display(),
                i + 1,
                r.len()
            )));
        }
    }
    Ok(RawTable { header, rows })
}

fn parse_cell(path: &Path, row: usize, col: usize, cell: &str) -> Result<f64> {
    cell.parse::<f64>().map_err(|_| {
        Error::Dataset(format!(
            "{}: row {}, column {}: {cell:?} is not a number",
            path.display(),
            row + 1,
            col + 1
        ))
    })
}

fn read_labels(path: &Path, n: usize) -> Result<Vec<String>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut labels = Vec::new();
    for record in reader.records() {
        labels.extend(record?.iter().filter(|c| !c.is_empty()).map(str::to_string));
    }
    if labels.len() == n + 1 {
        labels.remove(0);
    }
    if labels.len() != n {
        return Err(Error::Dataset(format!(
            "{} holds {} labels for {n} observations",
            path.display(),
            labels.len()
        )));
    }
    Ok(labels)
}

/// Features with observations in rows, raw labels and optional feature names.
pub type RawDataset = (DMatrix<f64>, Vec<String>, Option<Vec<String>>);

/// Reads features and labels into raw parts, observations in rows.
pub fn read_labeled(
    features: &Path,
    labels: LabelSource<'_>,
    options: &IngestOptions,
) -> Result<RawDataset> {
    let table = read_table(features)?;
    let mut label_column = None;
    if let LabelSource::Column(name) = labels {
        if options.transpose {
            return Err(Error::Usage(
                "a label column cannot be combined with a transposed feature file".into(),
            ));
        }
        let width = table.rows.first().map_or(0, Vec::len);
        let by_name = table
            .header
            .as_ref()
            .and_then(|h| h.iter().position(|c| c == name));
        let idx = match (by_name, name.parse::<usize>()) {
            (Some(i), _) => i,
            (None, Ok(i)) if i < width => i,
            _ => {
                return Err(Error::Dataset(format!(
                    "{}: no label column {name:?}",
                    features.display()
                )))
            }
        };
        label_column = Some(idx);
    }

    let (matrix, names) = if options.transpose {
        let p = table.rows.len();
        let n = table.rows.first().map_or(0, Vec::len);
        let mut m = DMatrix::zeros(n, p);
        for (j, row) in table.rows.iter().enumerate() {
            for (i, cell) in row.iter().enumerate() {
                m[(i, j)] = parse_cell(features, j, i, cell)?;
            }
        }
        (m, None)
    } else {
        let n = table.rows.len();
        let width = table.rows.first().map_or(0, Vec::len);
        let keep: Vec<usize> = (0..width).filter(|&c| Some(c) != label_column).collect();
        let mut m = DMatrix::zeros(n, keep.len());
        for (i, row) in table.rows.iter().enumerate() {
            for (j, &c) in keep.iter().enumerate() {
                m[(i, j)] = parse_cell(features, i, c, &row[c])?;
            }
        }
        let names = table
            .header
            .as_ref()
            .map(|h| keep.iter().map(|&c| h[c].clone()).collect());
        (m, names)
    };
    let raw_labels = match labels {
        LabelSource::File(path) => read_labels(path, matrix.nrows())?,
        LabelSource::Column(_) => {
            let c = label_column.expect("resolved above");
            table.rows.iter().map(|r| r[c].clone()).collect()
        }
    };
    Ok((matrix, raw_labels, names))
}

/// Reads a training set, deciding which class is Π₁.
pub fn ingest_csv(
    features: &Path,
    labels: LabelSource<'_>,
    options: &IngestOptions,
) -> Result<LabeledDataset> {
    let (m, raw, names) = read_labeled(features, labels, options)?;
    LabeledDataset::new(m, &raw, options.positive_label.as_deref(), names)
}

/// Reads a test set using the classes of `train`.
pub fn ingest_test_csv(
    features: &Path,
    labels: LabelSource<'_>,
    options: &IngestOptions,
    train: &LabeledDataset,
) -> Result<LabeledDataset> {
    let (m, raw, names) = read_labeled(features, labels, options)?;
    LabeledDataset::with_classes(m, &raw, train.class_names().clone(), names)
}
