//! Ordinal transitivity control over judgment triads.
//!
//! A triad is three objects `m < i < j` with judgments `a_mj` (M vs J),
//! `a_ij` (I vs J) and `a_mi` (M vs I). It is consistent iff some weak order
//! on the three objects realizes all three relations. Of the 27 relation
//! triples, 14 are conflicts.
//!
//! During elicitation, row `i` is filled after rows `0..i`, so every `a_mi`
//! and `a_mj` with `m < i` is known when `a_ij` arrives and each new judgment
//! can be checked against all of its triads immediately.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::judgment::{JudgmentValue, Relation};
use crate::matrix::JudgmentMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriadStatus {
    Consistent,
    Conflict,
}

/// Outcome of classifying one triad. `required` is the relation `r_ij` that
/// the other two judgments force, when they force one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConflictVerdict {
    pub status: TriadStatus,
    pub required: Option<Relation>,
}

impl ConflictVerdict {
    pub fn is_conflict(self) -> bool {
        self.status == TriadStatus::Conflict
    }
}

/// Composes two relations along a chain `x ? y ? z`; `None` when the chain
/// leaves `x ? z` undetermined (one step up, one step down).
fn compose(xy: Relation, yz: Relation) -> Option<Relation> {
    let (u, v) = (i32::from(xy.sign()), i32::from(yz.sign()));
    if u * v < 0 {
        None
    } else {
        Some(Relation::from_sign(u + v))
    }
}

/// The relation `r_ij` forced by `r_mi` and `r_mj`: I vs J = (I vs M) then (M vs J).
pub fn forced_ij(r_mi: Relation, r_mj: Relation) -> Option<Relation> {
    compose(r_mi.reverse(), r_mj)
}

/// Classifies a triad from its relations `r_mj` (M vs J), `r_ij` (I vs J)
/// and `r_mi` (M vs I).
pub fn classify_triad(r_mj: Relation, r_ij: Relation, r_mi: Relation) -> ConflictVerdict {
    // M vs J composed with J vs I must agree with M vs I when determined.
    let conflict = compose(r_mj, r_ij.reverse()).is_some_and(|forced_mi| forced_mi != r_mi);
    ConflictVerdict {
        status: if conflict { TriadStatus::Conflict } else { TriadStatus::Consistent },
        required: forced_ij(r_mi, r_mj),
    }
}

/// Number of conflicting triples among all 27 relation combinations.
pub fn conflict_census() -> usize {
    all_relation_triples().filter(|&(mj, ij, mi)| classify_triad(mj, ij, mi).is_conflict()).count()
}

/// Every `(r_mj, r_ij, r_mi)` triple.
pub fn all_relation_triples() -> impl Iterator<Item = (Relation, Relation, Relation)> {
    Relation::ALL
        .into_iter()
        .flat_map(|a| Relation::ALL.into_iter().flat_map(move |b| Relation::ALL.into_iter().map(move |c| (a, b, c))))
}

/// Relations for `a_ij` that keep the triad consistent given `r_mi` and `r_mj`.
pub fn admissible_relations(r_mi: Relation, r_mj: Relation) -> Vec<Relation> {
    Relation::ALL.into_iter().filter(|&r| !classify_triad(r_mj, r, r_mi).is_conflict()).collect()
}

/// Three matrix positions `m < i < j` and their relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triad {
    pub m: usize,
    pub i: usize,
    pub j: usize,
    pub r_mj: Relation,
    pub r_ij: Relation,
    pub r_mi: Relation,
}

impl Triad {
    pub fn verdict(&self) -> ConflictVerdict {
        classify_triad(self.r_mj, self.r_ij, self.r_mi)
    }
}

/// Prints one-based positions, the three relations and the relation forced
/// on `r_ij`, in the audit line format.
impl fmt::Display for Triad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{}): {} {} {}", self.m + 1, self.i + 1, self.j + 1, self.r_mj, self.r_ij, self.r_mi)?;
        match self.verdict().required {
            Some(r) => write!(f, " — forced r_ij = {r}"),
            None => write!(f, " — r_ij unconstrained"),
        }
    }
}

/// Conflicting triads for a prospective `a_ij = v`, one per violated `m < i`.
/// An empty result means the judgment is accepted. Row 0 is never checked.
pub fn check_new_judgment(matrix: &JudgmentMatrix, i: usize, j: usize, v: JudgmentValue) -> Result<Vec<Triad>> {
    if i >= j || j >= matrix.h() {
        return Err(Error::BadIndex { i, j, h: matrix.h() });
    }
    let r_ij = v.relation();
    let mut conflicts = Vec::new();
    for m in 0..i {
        let r_mi = matrix.relation(m, i).ok_or(Error::MissingPrerequisite { i: m, j: i })?;
        let r_mj = matrix.relation(m, j).ok_or(Error::MissingPrerequisite { i: m, j })?;
        let triad = Triad { m, i, j, r_mj, r_ij, r_mi };
        if triad.verdict().is_conflict() {
            conflicts.push(triad);
        }
    }
    Ok(conflicts)
}

/// Relations for `a_ij` consistent with every triad `(m, i, j)`, `m < i`.
pub fn admissible_for_pair(matrix: &JudgmentMatrix, i: usize, j: usize) -> Result<Vec<Relation>> {
    if i >= j || j >= matrix.h() {
        return Err(Error::BadIndex { i, j, h: matrix.h() });
    }
    let mut allowed = Relation::ALL.to_vec();
    for m in 0..i {
        let r_mi = matrix.relation(m, i).ok_or(Error::MissingPrerequisite { i: m, j: i })?;
        let r_mj = matrix.relation(m, j).ok_or(Error::MissingPrerequisite { i: m, j })?;
        let ok = admissible_relations(r_mi, r_mj);
        allowed.retain(|r| ok.contains(r));
    }
    Ok(allowed)
}

/// Pairs an expert may change to resolve a conflict at `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RevisionCandidates(pub Vec<(usize, usize)>);

impl RevisionCandidates {
    pub fn contains(&self, pair: (usize, usize)) -> bool {
        self.0.contains(&pair)
    }
}

/// In the second row (index 1) the only prior object is 0, and any of the
/// three judgments of triad `(0, 1, j)` may be wrong. From the third row on
/// the earlier rows are already checked, so only the current pair is open.
pub fn revision_candidates(i: usize, j: usize) -> Result<RevisionCandidates> {
    if i < 1 || j <= i {
        return Err(Error::BadIndex { i, j, h: j + 1 });
    }
    Ok(RevisionCandidates(if i == 1 { vec![(i, j), (0, j), (0, i)] } else { vec![(i, j)] }))
}

/// Every conflicting triad of a complete matrix, in `(m, i, j)` order.
pub fn full_matrix_audit(matrix: &JudgmentMatrix) -> Result<Vec<Triad>> {
    matrix.dense()?;
    let h = matrix.h();
    let mut out = Vec::new();
    for m in 0..h {
        for i in (m + 1)..h {
            for j in (i + 1)..h {
                let rel = |a, b| matrix.relation(a, b).expect("complete");
                let triad = Triad { m, i, j, r_mj: rel(m, j), r_ij: rel(i, j), r_mi: rel(m, i) };
                if triad.verdict().is_conflict() {
                    out.push(triad);
                }
            }
        }
    }
    Ok(out)
}
