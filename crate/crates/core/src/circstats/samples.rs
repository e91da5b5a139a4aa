use crate::error::{argument, Result};

use super::angle::normalize_angle;

/// A set of angles in `(−π, π]`, optionally labelled with 1-based class ids.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularSampleSet {
    angles: Vec<f64>,
    labels: Option<Vec<usize>>,
}

impl AngularSampleSet {
    /// Builds an unlabelled set; angles are normalized on entry.
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if let Some(bad) = angles.iter().find(|a| !a.is_finite()) {
            return Err(argument(
                "AngularSampleSet",
                format!("non-finite angle {bad}"),
            ));
        }
        Ok(Self {
            angles: angles.into_iter().map(normalize_angle).collect(),
            labels: None,
        })
    }

    /// Builds a labelled set. Labels are 1-based class indices.
    pub fn labeled(angles: Vec<f64>, labels: Vec<usize>) -> Result<Self> {
        if angles.len() != labels.len() {
            return Err(argument(
                "AngularSampleSet",
                format!("{} angles but {} labels", angles.len(), labels.len()),
            ));
        }
        if labels.contains(&0) {
            return Err(argument("AngularSampleSet", "class labels are 1-based"));
        }
        let mut set = Self::new(angles)?;
        set.labels = Some(labels);
        Ok(set)
    }

    pub(crate) fn from_parts_unchecked(angles: Vec<f64>, labels: Option<Vec<usize>>) -> Self {
        Self { angles, labels }
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// Angles carrying the given class label.
    pub fn class(&self, j: usize) -> Vec<f64> {
        match &self.labels {
            Some(labels) => self
                .angles
                .iter()
                .zip(labels)
                .filter(|(_, &l)| l == j)
                .map(|(&a, _)| a)
                .collect(),
            None => Vec::new(),
        }
    }
}
