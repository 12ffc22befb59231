//! The reciprocal judgment matrix, its fill order, and the JSON file format.
//!
//! Indices are zero-based throughout the library. Matrix files and the HTTP
//! API use one-based indices; conversion happens only at those boundaries.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::judgment::{JudgmentValue, Ratio, Relation};
use crate::scale::ScaleSpec;

/// An `h x h` positive reciprocal matrix, possibly partially filled.
///
/// Both `a_ij` and `a_ji` are stored; setting one always sets the other.
#[derive(Debug, Clone, PartialEq)]
pub struct JudgmentMatrix {
    h: usize,
    labels: Vec<String>,
    entries: Vec<Option<JudgmentValue>>,
}

pub fn default_labels(h: usize) -> Vec<String> {
    (1..=h).map(|k| format!("O{k}")).collect()
}

impl JudgmentMatrix {
    pub fn new(h: usize, labels: Vec<String>) -> Result<Self> {
        if h < 2 {
            return Err(Error::BadDimension(format!("need at least 2 objects, got {h}")));
        }
        if labels.len() != h {
            return Err(Error::BadDimension(format!("{} labels for {h} objects", labels.len())));
        }
        let mut entries = vec![None; h * h];
        for k in 0..h {
            entries[k * h + k] = Some(JudgmentValue::Exact(Ratio::ONE));
        }
        Ok(JudgmentMatrix { h, labels, entries })
    }

    /// A matrix with generated labels `O1..Oh`.
    pub fn with_size(h: usize) -> Result<Self> {
        JudgmentMatrix::new(h, default_labels(h))
    }

    /// The perfectly consistent matrix `a_ij = w_i / w_j`.
    pub fn from_weights(w: &[f64]) -> Result<Self> {
        let mut m = JudgmentMatrix::with_size(w.len())?;
        for (i, j) in pair_sequence(w.len())? {
            m.set(i, j, JudgmentValue::real(w[i] / w[j])?)?;
        }
        Ok(m)
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Sets `a_ij = v` and `a_ji = 1/v` for an upper-triangle pair `i < j`.
    pub fn set(&mut self, i: usize, j: usize, v: JudgmentValue) -> Result<()> {
        if i >= j || j >= self.h {
            return Err(Error::BadIndex { i, j, h: self.h });
        }
        if !(v.value().is_finite() && v.value() > 0.0) {
            return Err(Error::BadValue(v.value()));
        }
        self.entries[i * self.h + j] = Some(v);
        self.entries[j * self.h + i] = Some(v.recip());
        Ok(())
    }

    /// Removes an upper-triangle judgment and its reciprocal.
    pub fn clear(&mut self, i: usize, j: usize) -> Result<()> {
        if i >= j || j >= self.h {
            return Err(Error::BadIndex { i, j, h: self.h });
        }
        self.entries[i * self.h + j] = None;
        self.entries[j * self.h + i] = None;
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize) -> Option<JudgmentValue> {
        if i >= self.h || j >= self.h {
            return None;
        }
        self.entries[i * self.h + j]
    }

    pub fn value(&self, i: usize, j: usize) -> Option<f64> {
        self.get(i, j).map(JudgmentValue::value)
    }

    pub fn relation(&self, i: usize, j: usize) -> Option<Relation> {
        self.get(i, j).map(JudgmentValue::relation)
    }

    pub fn is_complete(&self) -> bool {
        self.entries.iter().all(Option::is_some)
    }

    /// Number of upper-triangle pairs currently set.
    pub fn set_count(&self) -> usize {
        pair_sequence(self.h).map(|ps| ps.into_iter().filter(|&(i, j)| self.get(i, j).is_some()).count()).unwrap_or(0)
    }

    /// Row-major dense copy; fails on the first unset pair.
    pub fn dense(&self) -> Result<Vec<f64>> {
        self.entries
            .iter()
            .enumerate()
            .map(|(k, e)| {
                e.map(JudgmentValue::value).ok_or_else(|| {
                    let (i, j) = (k / self.h, k % self.h);
                    Error::IncompleteMatrix { i: i.min(j), j: i.max(j) }
                })
            })
            .collect()
    }

    /// Relabels objects: object `k` of the result is object `perm[k]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let h = self.h;
        let mut seen = vec![false; h];
        if perm.len() != h || perm.iter().any(|&p| p >= h || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::BadDimension("permutation does not match matrix size".into()));
        }
        let labels = perm.iter().map(|&p| self.labels[p].clone()).collect();
        let mut out = JudgmentMatrix::new(h, labels)?;
        for a in 0..h {
            for b in 0..h {
                out.entries[a * h + b] = self.entries[perm[a] * h + perm[b]];
            }
        }
        Ok(out)
    }

    pub fn to_file(&self, scale: ScaleSpec) -> MatrixFile {
        let entries = pair_sequence(self.h)
            .unwrap_or_default()
            .into_iter()
            .filter_map(|(i, j)| {
                self.get(i, j).map(|v| EntryRecord {
                    i: i + 1,
                    j: j + 1,
                    value: match v {
                        JudgmentValue::Exact(r) => EntryValue::Rational { value_num: r.num(), value_den: r.den() },
                        JudgmentValue::Real(x) => EntryValue::Real { value: x },
                    },
                })
            })
            .collect();
        MatrixFile { h: self.h, labels: self.labels.clone(), scale, entries }
    }

    pub fn from_file(file: &MatrixFile) -> Result<Self> {
        let labels = if file.labels.is_empty() { default_labels(file.h) } else { file.labels.clone() };
        file.scale.scale()?;
        let mut m = JudgmentMatrix::new(file.h, labels)?;
        for e in &file.entries {
            if e.i == 0 || e.j == 0 {
                return Err(Error::BadIndex { i: e.i, j: e.j, h: file.h });
            }
            let v = match e.value {
                EntryValue::Rational { value_num, value_den } => JudgmentValue::Exact(Ratio::new(value_num, value_den)?),
                EntryValue::Real { value } => JudgmentValue::real(value)?,
            };
            m.set(e.i - 1, e.j - 1, v)?;
        }
        Ok(m)
    }

    pub fn from_json(json: &str) -> Result<(Self, ScaleSpec)> {
        let file: MatrixFile = serde_json::from_str(json).map_err(|e| Error::Format(e.to_string()))?;
        Ok((JudgmentMatrix::from_file(&file)?, file.scale))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<(Self, ScaleSpec)> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        JudgmentMatrix::from_json(&text)
    }
}

/// Upper-triangle pairs in the order an expert fills them: row by row,
/// `(0,1), (0,2), ..., (0,h-1), (1,2), ..., (h-2,h-1)`.
pub fn pair_sequence(h: usize) -> Result<Vec<(usize, usize)>> {
    if h < 2 {
        return Err(Error::BadDimension(format!("need at least 2 objects, got {h}")));
    }
    Ok((0..h).flat_map(|i| ((i + 1)..h).map(move |j| (i, j))).collect())
}

/// On-disk matrix: upper triangle only, one-based indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub h: usize,
    #[serde(default)]
    pub labels: Vec<String>,
    pub scale: ScaleSpec,
    pub entries: Vec<EntryRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryRecord {
    pub i: usize,
    pub j: usize,
    #[serde(flatten)]
    pub value: EntryValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryValue {
    Rational { value_num: u32, value_den: u32 },
    Real { value: f64 },
}
