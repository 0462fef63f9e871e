//! Finite discrete probability mass functions.
//!
//! A [`Pmf`] is an ordered list of labelled atoms. Zero-mass atoms are kept in
//! storage (so index positions line up with value vectors) but are skipped by
//! [`Pmf::support`], which is what every entropy formula iterates over.

pub mod io;

use std::collections::HashSet;

use crate::error::{Error, Result};

pub const DEFAULT_NORMALIZATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    labels: Vec<String>,
    probs: Vec<f64>,
    tolerance: f64,
}

impl Pmf {
    /// Builds a pmf from labelled probabilities, rejecting anything that is
    /// not normalized to within the default tolerance.
    pub fn new<L: Into<String>>(atoms: impl IntoIterator<Item = (L, f64)>) -> Result<Self> {
        Self::with_tolerance(atoms, DEFAULT_NORMALIZATION_TOLERANCE)
    }

    pub fn with_tolerance<L: Into<String>>(
        atoms: impl IntoIterator<Item = (L, f64)>,
        tolerance: f64,
    ) -> Result<Self> {
        let (labels, probs) = split_atoms(atoms)?;
        Self::checked(labels, probs, tolerance)
    }

    /// Like [`Pmf::new`] but divides by the total mass instead of rejecting
    /// unnormalized input.
    pub fn renormalized<L: Into<String>>(atoms: impl IntoIterator<Item = (L, f64)>) -> Result<Self> {
        let (labels, mut probs) = split_atoms(atoms)?;
        let total: f64 = probs.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidDistribution(format!(
                "cannot renormalize: total mass {total}"
            )));
        }
        for p in &mut probs {
            *p /= total;
        }
        Self::checked(labels, probs, DEFAULT_NORMALIZATION_TOLERANCE)
    }

    /// Unlabelled construction; atoms are labelled `"0"`, `"1"`, ...
    pub fn from_probs(probs: &[f64]) -> Result<Self> {
        Self::new(probs.iter().enumerate().map(|(i, &p)| (i.to_string(), p)))
    }

    /// Empirical pmf from non-negative counts.
    pub fn from_counts<L: Into<String>>(counts: impl IntoIterator<Item = (L, i64)>) -> Result<Self> {
        let mut labels = Vec::new();
        let mut raw = Vec::new();
        for (label, count) in counts {
            let label = label.into();
            if count < 0 {
                return Err(Error::InvalidDistribution(format!(
                    "negative count {count} for label {label:?}"
                )));
            }
            labels.push(label);
            raw.push(count as u64);
        }
        let total: u64 = raw.iter().sum();
        if total == 0 {
            return Err(Error::InvalidDistribution("all counts are zero".into()));
        }
        let probs = raw.iter().map(|&c| c as f64 / total as f64).collect();
        Self::checked(labels, probs, DEFAULT_NORMALIZATION_TOLERANCE)
    }

    /// `n` equally likely atoms labelled `"0"..n`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDistribution("uniform(0) has no atoms".into()));
        }
        let p = 1.0 / n as f64;
        Ok(Self {
            labels: (0..n).map(|i| i.to_string()).collect(),
            probs: vec![p; n],
            tolerance: DEFAULT_NORMALIZATION_TOLERANCE,
        })
    }

    /// A single atom of mass one.
    pub fn degenerate(label: impl Into<String>) -> Self {
        Self {
            labels: vec![label.into()],
            probs: vec![1.0],
            tolerance: DEFAULT_NORMALIZATION_TOLERANCE,
        }
    }

    fn checked(labels: Vec<String>, probs: Vec<f64>, tolerance: f64) -> Result<Self> {
        if !tolerance.is_finite() || tolerance < 0.0 {
            return Err(Error::InvalidParameter {
                name: "normalization_tolerance",
                value: tolerance,
                reason: "must be finite and >= 0",
            });
        }
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("no atoms".into()));
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidDistribution(format!("duplicate label {label:?}")));
            }
        }
        for (label, &p) in labels.iter().zip(&probs) {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidDistribution(format!(
                    "probability of {label:?} is {p}"
                )));
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > tolerance {
            return Err(Error::NotNormalized { sum, tolerance });
        }
        Ok(Self {
            labels,
            probs,
            tolerance,
        })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&str, f64)> + '_ {
        self.labels.iter().map(String::as_str).zip(self.probs.iter().copied())
    }

    /// Atoms with strictly positive mass, with their storage index.
    pub fn support(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.probs
            .iter()
            .copied()
            .enumerate()
            .filter(|&(_, p)| p > 0.0)
    }

    pub fn support_labels(&self) -> Vec<&str> {
        self.support().map(|(i, _)| self.labels[i].as_str()).collect()
    }

    pub fn support_size(&self) -> usize {
        self.support().count()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn prob(&self, label: &str) -> Result<f64> {
        self.index_of(label)
            .map(|i| self.probs[i])
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn is_degenerate(&self) -> bool {
        self.support_size() == 1
    }

    /// Joint pmf of two independent variables. Atom `(i, j)` sits at index
    /// `i * r.len() + j` and is labelled `"(a,b)"`.
    pub fn product(&self, other: &Pmf) -> Pmf {
        let mut labels = Vec::with_capacity(self.len() * other.len());
        let mut probs = Vec::with_capacity(self.len() * other.len());
        for (la, &pa) in self.labels.iter().zip(&self.probs) {
            for (lb, &pb) in other.labels.iter().zip(&other.probs) {
                labels.push(format!("({la},{lb})"));
                probs.push(pa * pb);
            }
        }
        Pmf {
            labels,
            probs,
            tolerance: self.tolerance + other.tolerance,
        }
    }

    /// Atomwise `β·f + (1-β)·g` over the union of both label sets; labels of
    /// `self` come first, then labels only present in `other`.
    pub fn mixture(&self, other: &Pmf, beta: f64) -> Result<Pmf> {
        if !(0.0..=1.0).contains(&beta) {
            return Err(Error::InvalidParameter {
                name: "beta",
                value: beta,
                reason: "must lie in [0, 1]",
            });
        }
        let mut labels = self.labels.clone();
        let mut probs: Vec<f64> = self.probs.iter().map(|&p| beta * p).collect();
        for (label, &p) in other.labels.iter().zip(&other.probs) {
            let w = (1.0 - beta) * p;
            match self.index_of(label) {
                Some(i) => probs[i] += w,
                None => {
                    labels.push(label.clone());
                    probs.push(w);
                }
            }
        }
        Ok(Pmf {
            labels,
            probs,
            tolerance: self.tolerance.max(other.tolerance),
        })
    }

    /// Sum of the joint masses over the second factor, for a pmf produced by
    /// [`Pmf::product`] with a right factor of `right_len` atoms.
    pub fn marginals(&self, right_len: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        if right_len == 0 || self.len() % right_len != 0 {
            return Err(Error::LengthMismatch(self.len(), right_len));
        }
        let left_len = self.len() / right_len;
        let mut left = vec![0.0; left_len];
        let mut right = vec![0.0; right_len];
        for (idx, &p) in self.probs.iter().enumerate() {
            left[idx / right_len] += p;
            right[idx % right_len] += p;
        }
        Ok((left, right))
    }
}

fn split_atoms<L: Into<String>>(
    atoms: impl IntoIterator<Item = (L, f64)>,
) -> Result<(Vec<String>, Vec<f64>)> {
    let (labels, probs): (Vec<String>, Vec<f64>) =
        atoms.into_iter().map(|(l, p)| (l.into(), p)).unzip();
    if probs.is_empty() {
        return Err(Error::InvalidDistribution("no atoms".into()));
    }
    Ok((labels, probs))
}
