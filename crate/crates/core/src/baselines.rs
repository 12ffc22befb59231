//! Classical ranking baselines over 0 / 0.5 / 1 paired scores: win counts
//! (C-frequencies) and Thurstone-style preference intensities.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::normal_quantile;

/// Paired scores `b_ij ∈ {0, 0.5, 1}`, diagonal unset. `b_ij = 1` means `i`
/// was preferred, `0.5` a tie.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryComparisonMatrix {
    h: usize,
    labels: Vec<String>,
    b: Vec<Option<f64>>,
}

fn valid_score(x: f64) -> bool {
    x == 0.0 || x == 0.5 || x == 1.0
}

impl BinaryComparisonMatrix {
    pub fn new(h: usize) -> Result<Self> {
        if h < 2 {
            return Err(Error::BadDimension(format!("need at least 2 objects, got {h}")));
        }
        Ok(BinaryComparisonMatrix { h, labels: crate::matrix::default_labels(h), b: vec![None; h * h] })
    }

    /// Scores for a strict total order given best-first.
    pub fn from_order(order: &[usize]) -> Result<Self> {
        let mut m = BinaryComparisonMatrix::new(order.len())?;
        for (a, &winner) in order.iter().enumerate() {
            for &loser in &order[a + 1..] {
                m.set(winner, loser, 1.0)?;
            }
        }
        Ok(m)
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Records `b_ij = score` and the complementary `b_ji = 1 - score`.
    pub fn set(&mut self, i: usize, j: usize, score: f64) -> Result<()> {
        if i == j || i >= self.h || j >= self.h {
            return Err(Error::BadIndex { i, j, h: self.h });
        }
        if !valid_score(score) {
            return Err(Error::MalformedMatrix(format!("score {score} at ({i}, {j}) is not 0, 0.5 or 1")));
        }
        self.b[i * self.h + j] = Some(score);
        self.b[j * self.h + i] = Some(1.0 - score);
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.b.get(i * self.h + j).copied().flatten()
    }

    /// Raw cell access without the complement rule, for loading data that
    /// may violate asymmetry.
    fn set_raw(&mut self, i: usize, j: usize, score: f64) -> Result<()> {
        if i == j || i >= self.h || j >= self.h {
            return Err(Error::BadIndex { i, j, h: self.h });
        }
        if !valid_score(score) {
            return Err(Error::MalformedMatrix(format!("score {score} at ({i}, {j}) is not 0, 0.5 or 1")));
        }
        self.b[i * self.h + j] = Some(score);
        Ok(())
    }

    /// Checks asymmetry (`b_ij = 1 ⇒ b_ji = 0`) and tie symmetry.
    pub fn validate(&self) -> Result<()> {
        for i in 0..self.h {
            for j in (i + 1)..self.h {
                if let (Some(x), Some(y)) = (self.get(i, j), self.get(j, i)) {
                    if x + y != 1.0 {
                        return Err(Error::MalformedMatrix(format!(
                            "b[{}][{}] = {x} and b[{}][{}] = {y} violate asymmetry",
                            i + 1,
                            j + 1,
                            j + 1,
                            i + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Reads the binary matrix JSON: the matrix file layout with `value`
    /// entries in {0, 0.5, 1}. A missing mirror entry is filled as the
    /// complement; an explicit one must agree with it.
    pub fn from_json(json: &str) -> Result<Self> {
        let file: BinaryFile = serde_json::from_str(json).map_err(|e| Error::Format(e.to_string()))?;
        let mut m = BinaryComparisonMatrix::new(file.h)?;
        if !file.labels.is_empty() {
            if file.labels.len() != file.h {
                return Err(Error::BadDimension(format!("{} labels for {} objects", file.labels.len(), file.h)));
            }
            m.labels = file.labels;
        }
        for e in &file.entries {
            if e.i == 0 || e.j == 0 {
                return Err(Error::BadIndex { i: e.i, j: e.j, h: file.h });
            }
            m.set_raw(e.i - 1, e.j - 1, e.value)?;
        }
        m.validate()?;
        for i in 0..m.h {
            for j in 0..m.h {
                if i != j && m.get(i, j).is_none() {
                    if let Some(y) = m.get(j, i) {
                        m.b[i * m.h + j] = Some(1.0 - y);
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        BinaryComparisonMatrix::from_json(&text)
    }
}

#[derive(Deserialize)]
struct BinaryFile {
    h: usize,
    #[serde(default)]
    labels: Vec<String>,
    entries: Vec<BinaryEntry>,
}

#[derive(Deserialize)]
struct BinaryEntry {
    i: usize,
    j: usize,
    value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CFrequencyResult {
    /// Strict wins per object.
    pub c: Vec<usize>,
    /// Objects by descending `c`, ties by index.
    pub ranking: Vec<usize>,
}

/// Counts strict wins per object.
pub fn c_frequencies(b: &BinaryComparisonMatrix) -> Result<CFrequencyResult> {
    b.validate()?;
    let h = b.h();
    let c: Vec<usize> = (0..h).map(|i| (0..h).filter(|&j| j != i && b.get(i, j) == Some(1.0)).count()).collect();
    let mut ranking: Vec<usize> = (0..h).collect();
    ranking.sort_by(|&x, &y| c[y].cmp(&c[x]).then(x.cmp(&y)));
    Ok(CFrequencyResult { c, ranking })
}

/// Preference counts `f_ij` over `k` experts and intensities `p_ij = f_ij / k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreferenceIntensities {
    pub k: usize,
    pub h: usize,
    /// Row-major `h x h`; ties contribute 0.5.
    pub f: Vec<f64>,
    /// Row-major `h x h`; diagonal is 0.5.
    pub p: Vec<f64>,
}

impl PreferenceIntensities {
    pub fn p(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.h + j]
    }

    pub fn f(&self, i: usize, j: usize) -> f64 {
        self.f[i * self.h + j]
    }
}

/// Pools `k` experts' binary matrices. Unanswered pairs count as ties.
pub fn preference_intensities(matrices: &[BinaryComparisonMatrix]) -> Result<PreferenceIntensities> {
    let first = matrices.first().ok_or_else(|| Error::BadDimension("need at least one expert".into()))?;
    let h = first.h();
    let k = matrices.len();
    let mut f = vec![0.0; h * h];
    for m in matrices {
        if m.h() != h {
            return Err(Error::DimensionMismatch { expected: h, found: m.h() });
        }
        m.validate()?;
        for i in 0..h {
            for j in 0..h {
                f[i * h + j] += if i == j { 0.5 } else { m.get(i, j).unwrap_or(0.5) };
            }
        }
    }
    let p = f.iter().map(|x| x / k as f64).collect();
    Ok(PreferenceIntensities { k, h, f, p })
}

/// Options for the inverse-normal scaling step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThurstoneOptions {
    /// Clamp `p` into `[1/(2k), 1 - 1/(2k)]` before taking quantiles.
    pub clamp: bool,
}

impl Default for ThurstoneOptions {
    fn default() -> Self {
        ThurstoneOptions { clamp: true }
    }
}

/// Case V scaling: `s_i = mean_{j≠i} Φ⁻¹(p_ij)`, shifted so the minimum is 0.
///
/// Without clamping, pairs with `p ∈ {0, 1}` are skipped; if every pair is
/// saturated the input is degenerate.
pub fn thurstone_scale(p: &PreferenceIntensities, opts: ThurstoneOptions) -> Result<Vec<f64>> {
    let h = p.h;
    let lo = 1.0 / (2.0 * p.k as f64);
    let mut usable = 0usize;
    let mut scores = Vec::with_capacity(h);
    for i in 0..h {
        let mut total = 0.0;
        let mut n = 0usize;
        for j in (0..h).filter(|&j| j != i) {
            let mut x = p.p(i, j);
            if opts.clamp {
                x = x.clamp(lo.min(0.5), (1.0 - lo).max(0.5));
            } else if x <= 0.0 || x >= 1.0 {
                continue;
            }
            total += normal_quantile(x);
            n += 1;
        }
        usable += n;
        scores.push(if n == 0 { 0.0 } else { total / n as f64 });
    }
    if usable == 0 {
        return Err(Error::DegenerateIntensities);
    }
    let min = scores.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(scores.into_iter().map(|s| s - min).collect())
}
