//! Observations, ground-truth labels and index sets.
//!
//! Indices are zero-based inside the library. Everything that leaves the
//! process (index files, traces, reports) is rendered one-based, see
//! [`IndexSet::to_one_based`] and [`IndexSet::from_one_based`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An immutable `N x M` matrix of finite reals stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    values: Vec<f64>,
    n: usize,
    m: usize,
}

impl Dataset {
    /// Builds a dataset from row-major `values`.
    pub fn new(values: Vec<f64>, n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidDataset(format!(
                "need at least one row and one column, got {n}x{m}"
            )));
        }
        if values.len() != n * m {
            return Err(Error::InvalidDataset(format!(
                "{} values cannot fill a {n}x{m} matrix",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite value {} at row {}, column {}",
                values[pos],
                pos / m + 1,
                pos % m + 1
            )));
        }
        Ok(Dataset { values, n, m })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let m = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut values = Vec::with_capacity(rows.len() * m);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != m {
                return Err(Error::InvalidDataset(format!(
                    "row {} has {} columns, expected {m}",
                    i + 1,
                    row.len()
                )));
            }
            values.extend_from_slice(row);
        }
        Dataset::new(values, rows.len(), m)
    }

    /// Number of observations.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimensionality.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.m..(i + 1) * self.m]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.m)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The observations at `indices`, in index order.
    pub fn select(&self, indices: &IndexSet) -> Result<Dataset> {
        indices.check_bounds(self.n)?;
        let mut values = Vec::with_capacity(indices.len() * self.m);
        for i in indices.iter() {
            values.extend_from_slice(self.row(i));
        }
        Dataset::new(values, indices.len(), self.m)
    }
}

/// Ground-truth or predicted class of one observation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    In,
    Out,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::In => "in",
            Label::Out => "out",
        }
    }

    pub fn flip(self) -> Label {
        match self {
            Label::In => Label::Out,
            Label::Out => Label::In,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "in" => Ok(Label::In),
            "out" => Ok(Label::Out),
            other => Err(Error::param(
                "label",
                format!("expected `in` or `out`, got {other:?}"),
            )),
        }
    }
}

/// One label per observation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelVector(Vec<Label>);

impl LabelVector {
    pub fn new(labels: Vec<Label>) -> Self {
        LabelVector(labels)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Label] {
        &self.0
    }

    pub fn count(&self, label: Label) -> usize {
        self.0.iter().filter(|&&l| l == label).count()
    }

    /// Indices carrying `label`.
    pub fn indices_of(&self, label: Label) -> IndexSet {
        IndexSet::from_sorted(
            self.0
                .iter()
                .enumerate()
                .filter(|(_, &l)| l == label)
                .map(|(i, _)| i)
                .collect(),
        )
    }

    pub fn complement(&self) -> LabelVector {
        LabelVector(self.0.iter().map(|l| l.flip()).collect())
    }
}

impl From<Vec<Label>> for LabelVector {
    fn from(labels: Vec<Label>) -> Self {
        LabelVector(labels)
    }
}

impl FromIterator<Label> for LabelVector {
    fn from_iter<T: IntoIterator<Item = Label>>(iter: T) -> Self {
        LabelVector(iter.into_iter().collect())
    }
}

impl std::ops::Index<usize> for LabelVector {
    type Output = Label;

    fn index(&self, i: usize) -> &Label {
        &self.0[i]
    }
}

/// A sorted set of distinct zero-based observation indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    /// Sorts and validates `indices` against a dataset of `n` observations.
    pub fn new(mut indices: Vec<usize>, n: usize) -> Result<Self> {
        indices.sort_unstable();
        if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::param(
                "indices",
                format!("duplicate index {}", w[0] + 1),
            ));
        }
        let set = IndexSet(indices);
        set.check_bounds(n)?;
        Ok(set)
    }

    /// Parses one-based indices.
    pub fn from_one_based(indices: &[usize], n: usize) -> Result<Self> {
        let zero_based = indices
            .iter()
            .map(|&i| {
                i.checked_sub(1)
                    .ok_or(Error::IndexOutOfRange { index: 0, len: n })
            })
            .collect::<Result<Vec<_>>>()?;
        IndexSet::new(zero_based, n)
    }

    pub(crate) fn from_sorted(indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        IndexSet(indices)
    }

    /// `0..n`.
    pub fn all(n: usize) -> Self {
        IndexSet((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.iter().all(|i| other.contains(i))
    }

    /// Indices in `0..n` that are not in `self`.
    pub fn complement(&self, n: usize) -> IndexSet {
        IndexSet((0..n).filter(|&i| !self.contains(i)).collect())
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    /// Membership mask of length `n`.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for i in self.iter() {
            mask[i] = true;
        }
        mask
    }

    pub(crate) fn check_bounds(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&last) if last >= n => Err(Error::IndexOutOfRange {
                index: last + 1,
                len: n,
            }),
            _ => Ok(()),
        }
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        IndexSet(v)
    }
}
