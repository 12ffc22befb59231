//! Multi-study elicitation service behind the HTTP API.
//!
//! Sessions are single-writer: each lives behind its own mutex, so calls on
//! one session serialize while distinct sessions proceed in parallel. Every
//! mutation is persisted before the call returns when a store is attached.

use std::collections::{HashMap, HashSet};
use std::io;
use std::sync::Arc;

use parking_lot::{Mutex, RwLock};
use thiserror::Error;

use crate::aggregation::{aggregate, StudyAggregate};
use crate::judgment::Ratio;
use crate::scale::ComparisonScale;
use crate::session::{NextPair, Outcome, Session, SessionError, SessionState};
use crate::store::FileStore;
use crate::weights::{WeightMethod, WeightReport};

pub use crate::store::Study;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("unknown study {0}")]
    StudyNotFound(String),
    #[error("unknown session {0}")]
    SessionNotFound(String),
    #[error("duplicate label {0:?}")]
    DuplicateLabels(String),
    #[error("a study needs at least 2 objects, got {0}")]
    TooFewObjects(usize),
    #[error("bad scale: {0}")]
    BadScale(String),
    #[error("study has no completed sessions")]
    NoCompletedSessions,
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error(transparent)]
    Core(#[from] crate::Error),
    #[error("storage: {0}")]
    Io(#[from] io::Error),
}

pub type ServiceResult<T> = std::result::Result<T, ServiceError>;

type SharedSession = Arc<Mutex<Session>>;

#[derive(Default)]
pub struct Service {
    store: Option<FileStore>,
    studies: RwLock<HashMap<String, Study>>,
    sessions: RwLock<HashMap<String, SharedSession>>,
}

impl Service {
    /// A service that keeps everything in memory.
    pub fn in_memory() -> Self {
        Service::default()
    }

    /// A service persisted under `store`, reloading any studies and sessions
    /// already there.
    pub fn open(store: FileStore) -> ServiceResult<Self> {
        let mut studies = HashMap::new();
        let mut sessions = HashMap::new();
        for id in store.study_ids()? {
            let mut study = store.load_study(&id)?;
            for record in store.load_sessions(&id)? {
                let session = Session::from_record(record)?;
                if !study.sessions.contains(&session.id().to_string()) {
                    study.sessions.push(session.id().to_string());
                }
                sessions.insert(session.id().to_string(), Arc::new(Mutex::new(session)));
            }
            studies.insert(id, study);
        }
        Ok(Service { store: Some(store), studies: RwLock::new(studies), sessions: RwLock::new(sessions) })
    }

    pub fn create_study(&self, labels: Vec<String>, scale: ComparisonScale) -> ServiceResult<Study> {
        if labels.len() < 2 {
            return Err(ServiceError::TooFewObjects(labels.len()));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(ServiceError::DuplicateLabels(dup.clone()));
        }
        scale.validate().map_err(|e| ServiceError::BadScale(e.to_string()))?;
        let study = Study { id: uuid::Uuid::new_v4().to_string(), labels, scale, sessions: Vec::new() };
        if let Some(store) = &self.store {
            store.save_study(&study)?;
        }
        self.studies.write().insert(study.id.clone(), study.clone());
        Ok(study)
    }

    pub fn study(&self, study_id: &str) -> ServiceResult<Study> {
        self.studies.read().get(study_id).cloned().ok_or_else(|| ServiceError::StudyNotFound(study_id.into()))
    }

    pub fn create_session(&self, study_id: &str, expert: &str) -> ServiceResult<String> {
        let mut studies = self.studies.write();
        let study = studies.get_mut(study_id).ok_or_else(|| ServiceError::StudyNotFound(study_id.into()))?;
        let id = uuid::Uuid::new_v4().to_string();
        let session = Session::new(id.clone(), study_id, expert, study.labels.clone(), study.scale)?;
        study.sessions.push(id.clone());
        if let Some(store) = &self.store {
            store.save_session(&session.to_record())?;
            store.save_study(study)?;
        }
        self.sessions.write().insert(id.clone(), Arc::new(Mutex::new(session)));
        Ok(id)
    }

    fn session(&self, session_id: &str) -> ServiceResult<SharedSession> {
        self.sessions.read().get(session_id).cloned().ok_or_else(|| ServiceError::SessionNotFound(session_id.into()))
    }

    /// Runs `f` with exclusive access to the session and persists it after.
    fn mutate<T>(&self, session_id: &str, f: impl FnOnce(&mut Session) -> Result<T, SessionError>) -> ServiceResult<T> {
        let shared = self.session(session_id)?;
        let mut session = shared.lock();
        let out = f(&mut session)?;
        if let Some(store) = &self.store {
            store.save_session(&session.to_record())?;
        }
        Ok(out)
    }

    /// Read-only snapshot of a session.
    pub fn snapshot(&self, session_id: &str) -> ServiceResult<Session> {
        Ok(self.session(session_id)?.lock().clone())
    }

    pub fn next_pair(&self, session_id: &str) -> ServiceResult<NextPair> {
        Ok(self.session(session_id)?.lock().next_pair()?)
    }

    pub fn submit_judgment(&self, session_id: &str, v: Ratio) -> ServiceResult<Outcome> {
        self.mutate(session_id, |s| s.submit_judgment(v))
    }

    /// `pair` is zero-based.
    pub fn submit_revision(&self, session_id: &str, pair: (usize, usize), v: Ratio) -> ServiceResult<Outcome> {
        self.mutate(session_id, |s| s.submit_revision(pair, v))
    }

    pub fn session_results(&self, session_id: &str) -> ServiceResult<WeightReport> {
        Ok(self.session(session_id)?.lock().results()?)
    }

    /// Aggregate over the study's completed sessions; abandoned or
    /// in-progress sessions are left out.
    pub fn study_aggregate(&self, study_id: &str, level: f64, method: WeightMethod) -> ServiceResult<StudyAggregate> {
        let study = self.study(study_id)?;
        let mut ws = Vec::new();
        let mut crs = Vec::new();
        for sid in &study.sessions {
            let session = self.snapshot(sid)?;
            if session.state() == SessionState::Complete {
                let report = session.results()?;
                ws.push(report.weights(method).clone());
                crs.push(report.cr);
            }
        }
        if ws.is_empty() {
            return Err(ServiceError::NoCompletedSessions);
        }
        Ok(aggregate(&ws, &crs, level)?)
    }
}
