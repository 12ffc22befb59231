//! One expert's elicitation session.
//!
//! Pairs are presented in fill order. Each submitted value is checked against
//! every triad it closes; a conflicting value is never written to the matrix
//! but parked as the pending value until the expert revises one of the
//! revision candidates. The event log records every commit, revision and
//! rejection and replays to the current matrix.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::judgment::{JudgmentValue, Ratio, Relation};
use crate::matrix::{pair_sequence, JudgmentMatrix, MatrixFile};
use crate::scale::{Choice, ComparisonScale};
use crate::transitivity::{admissible_for_pair, check_new_judgment, revision_candidates, RevisionCandidates, Triad};
use crate::weights::{weight_report, WeightReport};

/// Consecutive rejections after which a session is flagged for the UI.
pub const REJECTION_ALERT: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SessionError {
    #[error("operation not allowed while session is {0:?}")]
    WrongState(SessionState),
    #[error("value {0} is not on the session's scale")]
    ValueNotInScale(Ratio),
    #[error("pair ({}, {}) is not a revision candidate", .0.0 + 1, .0.1 + 1)]
    IllegalRevisionTarget((usize, usize)),
    #[error("session is not complete")]
    SessionIncomplete,
    #[error("event log does not replay: {0}")]
    CorruptLog(String),
    #[error(transparent)]
    Core(#[from] Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SessionState {
    AwaitingJudgment,
    AwaitingRevision,
    Complete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventAction {
    /// Value written at the current pair.
    Commit,
    /// Earlier pair overwritten during a second-row revision.
    Revise,
    /// Value refused; the matrix is unchanged.
    Reject,
}

/// One log entry. `pair` is zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub at_ms: u64,
    pub action: EventAction,
    pub pair: (usize, usize),
    pub value: Ratio,
}

/// What the expert sees for the next pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairPrompt {
    pub i: usize,
    pub j: usize,
    pub label_i: String,
    pub label_j: String,
    pub choices: Vec<Choice>,
    pub committed: usize,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NextPair {
    Pair(PairPrompt),
    Done,
}

/// Why the current value was refused and how the expert may fix it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConflictReport {
    /// The pair being filled.
    pub pair: (usize, usize),
    /// The refused value awaiting revision.
    pub pending: Ratio,
    pub triads: Vec<Triad>,
    pub candidates: RevisionCandidates,
    /// Relations the current pair may take given the committed judgments.
    pub admissible: Vec<Relation>,
    pub consecutive_rejections: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Accepted { complete: bool },
    Conflict(ConflictReport),
}

impl Outcome {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Outcome::Accepted { .. })
    }
}

type SessionResult<T> = std::result::Result<T, SessionError>;

fn now_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Session {
    id: String,
    study_id: String,
    expert: String,
    scale: ComparisonScale,
    pairs: Vec<(usize, usize)>,
    matrix: JudgmentMatrix,
    cursor: usize,
    state: SessionState,
    pending: Option<ConflictReport>,
    rejections: usize,
    event_log: Vec<Event>,
}

impl Session {
    pub fn new(
        id: impl Into<String>,
        study_id: impl Into<String>,
        expert: impl Into<String>,
        labels: Vec<String>,
        scale: ComparisonScale,
    ) -> SessionResult<Self> {
        let matrix = JudgmentMatrix::new(labels.len(), labels)?;
        let pairs = pair_sequence(matrix.h())?;
        Ok(Session {
            id: id.into(),
            study_id: study_id.into(),
            expert: expert.into(),
            scale: scale.validate()?,
            pairs,
            matrix,
            cursor: 0,
            state: SessionState::AwaitingJudgment,
            pending: None,
            rejections: 0,
            event_log: Vec::new(),
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn study_id(&self) -> &str {
        &self.study_id
    }

    pub fn expert(&self) -> &str {
        &self.expert
    }

    pub fn scale(&self) -> ComparisonScale {
        self.scale
    }

    pub fn matrix(&self) -> &JudgmentMatrix {
        &self.matrix
    }

    pub fn state(&self) -> SessionState {
        self.state
    }

    /// Number of committed pairs.
    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn total_pairs(&self) -> usize {
        self.pairs.len()
    }

    pub fn current_pair(&self) -> Option<(usize, usize)> {
        self.pairs.get(self.cursor).copied()
    }

    pub fn pending(&self) -> Option<&ConflictReport> {
        self.pending.as_ref()
    }

    pub fn event_log(&self) -> &[Event] {
        &self.event_log
    }

    /// More than [`REJECTION_ALERT`] consecutive rejections.
    pub fn needs_attention(&self) -> bool {
        self.rejections > REJECTION_ALERT
    }

    pub fn next_pair(&self) -> SessionResult<NextPair> {
        match self.state {
            SessionState::AwaitingRevision => Err(SessionError::WrongState(self.state)),
            SessionState::Complete => Ok(NextPair::Done),
            SessionState::AwaitingJudgment => {
                let (i, j) = self.pairs[self.cursor];
                Ok(NextPair::Pair(PairPrompt {
                    i,
                    j,
                    label_i: self.matrix.labels()[i].clone(),
                    label_j: self.matrix.labels()[j].clone(),
                    choices: self.scale.choices(),
                    committed: self.cursor,
                    total: self.pairs.len(),
                }))
            }
        }
    }

    fn check_scale(&self, v: Ratio) -> SessionResult<()> {
        if self.scale.contains(v) {
            Ok(())
        } else {
            Err(SessionError::ValueNotInScale(v))
        }
    }

    fn log(&mut self, action: EventAction, pair: (usize, usize), value: Ratio) {
        self.event_log.push(Event { at_ms: now_ms(), action, pair, value });
    }

    pub fn submit_judgment(&mut self, v: Ratio) -> SessionResult<Outcome> {
        if self.state != SessionState::AwaitingJudgment {
            return Err(SessionError::WrongState(self.state));
        }
        self.check_scale(v)?;
        self.try_current(v)
    }

    /// Checks `v` at the current pair; commits it or parks it as pending.
    fn try_current(&mut self, v: Ratio) -> SessionResult<Outcome> {
        let (i, j) = self.pairs[self.cursor];
        let triads = check_new_judgment(&self.matrix, i, j, v.into())?;
        if triads.is_empty() {
            self.matrix.set(i, j, v.into())?;
            self.log(EventAction::Commit, (i, j), v);
            self.cursor += 1;
            self.rejections = 0;
            self.pending = None;
            self.state = if self.cursor == self.pairs.len() { SessionState::Complete } else { SessionState::AwaitingJudgment };
            return Ok(Outcome::Accepted { complete: self.state == SessionState::Complete });
        }
        self.log(EventAction::Reject, (i, j), v);
        let report = self.conflict_report(v, triads)?;
        self.pending = Some(report.clone());
        self.state = SessionState::AwaitingRevision;
        Ok(Outcome::Conflict(report))
    }

    fn conflict_report(&mut self, pending: Ratio, triads: Vec<Triad>) -> SessionResult<ConflictReport> {
        let (i, j) = self.pairs[self.cursor];
        self.rejections += 1;
        Ok(ConflictReport {
            pair: (i, j),
            pending,
            triads,
            candidates: revision_candidates(i, j)?,
            admissible: admissible_for_pair(&self.matrix, i, j)?,
            consecutive_rejections: self.rejections,
        })
    }

    /// Changes one of the pending conflict's candidate pairs.
    ///
    /// Revising the current pair re-runs the judgment check with `v`.
    /// Revising an earlier pair (second row only) is applied only if every
    /// committed judgment still passes its check afterwards; the pending
    /// value is then re-checked and committed if it now fits.
    pub fn submit_revision(&mut self, pair: (usize, usize), v: Ratio) -> SessionResult<Outcome> {
        if self.state != SessionState::AwaitingRevision {
            return Err(SessionError::WrongState(self.state));
        }
        self.check_scale(v)?;
        let pending = self.pending.clone().expect("pending conflict in AwaitingRevision");
        if !pending.candidates.contains(pair) {
            return Err(SessionError::IllegalRevisionTarget(pair));
        }
        if pair == pending.pair {
            return self.try_current(v);
        }

        let mut trial = self.matrix.clone();
        trial.set(pair.0, pair.1, v.into())?;
        let broken = self.revalidate(&trial)?;
        if !broken.is_empty() {
            self.log(EventAction::Reject, pair, v);
            let report = self.conflict_report(pending.pending, broken)?;
            self.pending = Some(report.clone());
            return Ok(Outcome::Conflict(report));
        }
        self.matrix = trial;
        self.log(EventAction::Revise, pair, v);
        self.try_current(pending.pending)
    }

    /// Triads violated by any committed judgment of `matrix`.
    fn revalidate(&self, matrix: &JudgmentMatrix) -> SessionResult<Vec<Triad>> {
        let mut out = Vec::new();
        for &(i, j) in &self.pairs[..self.cursor] {
            let v = matrix.get(i, j).expect("committed pair is set");
            out.extend(check_new_judgment(matrix, i, j, v)?);
        }
        Ok(out)
    }

    pub fn results(&self) -> SessionResult<WeightReport> {
        if self.state != SessionState::Complete {
            return Err(SessionError::SessionIncomplete);
        }
        Ok(weight_report(&self.matrix)?)
    }

    /// Rebuilds the matrix by applying every commit and revision in order.
    pub fn replay(&self) -> SessionResult<JudgmentMatrix> {
        replay_events(self.matrix.labels().to_vec(), &self.event_log)
    }

    pub fn to_record(&self) -> SessionRecord {
        SessionRecord {
            id: self.id.clone(),
            study_id: self.study_id.clone(),
            expert: self.expert.clone(),
            scale: self.scale,
            labels: self.matrix.labels().to_vec(),
            cursor: self.cursor,
            state: self.state,
            pending: self.pending.clone(),
            consecutive_rejections: self.rejections,
            matrix: self.matrix.to_file(self.scale.into()),
            event_log: self.event_log.clone(),
        }
    }

    /// Restores a session from its record. The event log is authoritative:
    /// the matrix, cursor and state are rebuilt from it, and a pending
    /// conflict is kept only if it still matches the rebuilt cursor.
    pub fn from_record(record: SessionRecord) -> SessionResult<Self> {
        let mut s = Session::new(record.id, record.study_id, record.expert, record.labels, record.scale)?;
        s.matrix = replay_events(s.matrix.labels().to_vec(), &record.event_log)?;
        s.event_log = record.event_log;
        s.cursor = s.pairs.iter().take_while(|&&(i, j)| s.matrix.get(i, j).is_some()).count();
        if s.pairs[s.cursor..].iter().any(|&(i, j)| s.matrix.get(i, j).is_some()) {
            return Err(SessionError::CorruptLog("committed pairs are not a prefix of the fill order".into()));
        }
        if !s.revalidate(&s.matrix)?.is_empty() {
            return Err(SessionError::CorruptLog("log replays to a conflicting matrix".into()));
        }
        s.state = if s.cursor == s.pairs.len() { SessionState::Complete } else { SessionState::AwaitingJudgment };
        if let Some(p) = record.pending.filter(|p| s.state == SessionState::AwaitingJudgment && Some(p.pair) == s.current_pair()) {
            s.pending = Some(p);
            s.state = SessionState::AwaitingRevision;
            s.rejections = record.consecutive_rejections;
        }
        Ok(s)
    }
}

/// Applies commits and revisions of a log to an empty matrix.
pub fn replay_events(labels: Vec<String>, events: &[Event]) -> SessionResult<JudgmentMatrix> {
    let mut m = JudgmentMatrix::new(labels.len(), labels)?;
    for e in events {
        match e.action {
            EventAction::Commit | EventAction::Revise => m
                .set(e.pair.0, e.pair.1, JudgmentValue::Exact(e.value))
                .map_err(|err| SessionError::CorruptLog(err.to_string()))?,
            EventAction::Reject => {}
        }
    }
    Ok(m)
}

/// Persisted form of a session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionRecord {
    pub id: String,
    pub study_id: String,
    pub expert: String,
    pub scale: ComparisonScale,
    pub labels: Vec<String>,
    pub cursor: usize,
    pub state: SessionState,
    pub pending: Option<ConflictReport>,
    #[serde(default)]
    pub consecutive_rejections: usize,
    pub matrix: MatrixFile,
    pub event_log: Vec<Event>,
}
