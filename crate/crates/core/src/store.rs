//! On-disk study layout: `<root>/<study_id>/study.json` and
//! `<root>/<study_id>/sessions/<session_id>.json`.
//!
//! Every write goes to a sibling temporary file which is then renamed over
//! the target, so a reader never sees a half-written document.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::scale::ComparisonScale;
use crate::session::SessionRecord;

/// Persisted study header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Study {
    pub id: String,
    pub labels: Vec<String>,
    pub scale: ComparisonScale,
    #[serde(default)]
    pub sessions: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct FileStore {
    root: PathBuf,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> io::Error {
    io::Error::other(format!("{}: {e}", path.display()))
}

/// Serializes `value` to `path` via write-then-rename.
pub fn write_json_atomic<T: Serialize>(path: &Path, value: &T) -> io::Result<()> {
    let dir = path.parent().ok_or_else(|| io_err(path, "no parent directory"))?;
    fs::create_dir_all(dir)?;
    let bytes = serde_json::to_vec_pretty(value).map_err(|e| io_err(path, e))?;
    let tmp = path.with_extension(format!("json.tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

fn read_json<T: DeserializeOwned>(path: &Path) -> io::Result<T> {
    let bytes = fs::read(path)?;
    serde_json::from_slice(&bytes).map_err(|e| io_err(path, e))
}

impl FileStore {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        FileStore { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn study_dir(&self, study_id: &str) -> PathBuf {
        self.root.join(study_id)
    }

    pub fn study_path(&self, study_id: &str) -> PathBuf {
        self.study_dir(study_id).join("study.json")
    }

    pub fn session_path(&self, study_id: &str, session_id: &str) -> PathBuf {
        self.study_dir(study_id).join("sessions").join(format!("{session_id}.json"))
    }

    pub fn save_study(&self, study: &Study) -> io::Result<()> {
        write_json_atomic(&self.study_path(&study.id), study)
    }

    pub fn save_session(&self, record: &SessionRecord) -> io::Result<()> {
        write_json_atomic(&self.session_path(&record.study_id, &record.id), record)
    }

    pub fn load_study(&self, study_id: &str) -> io::Result<Study> {
        read_json(&self.study_path(study_id))
    }

    /// All session records of a study, sorted by id. Leftover temporary
    /// files from interrupted writes are ignored.
    pub fn load_sessions(&self, study_id: &str) -> io::Result<Vec<SessionRecord>> {
        load_sessions_in(&self.study_dir(study_id))
    }

    /// Ids of every directory under the root that holds a `study.json`.
    pub fn study_ids(&self) -> io::Result<Vec<String>> {
        if !self.root.exists() {
            return Ok(Vec::new());
        }
        let mut ids = Vec::new();
        for entry in fs::read_dir(&self.root)? {
            let entry = entry?;
            if entry.path().join("study.json").is_file() {
                ids.push(entry.file_name().to_string_lossy().into_owned());
            }
        }
        ids.sort();
        Ok(ids)
    }
}

/// Session records under `<study_dir>/sessions`.
pub fn load_sessions_in(study_dir: &Path) -> io::Result<Vec<SessionRecord>> {
    let dir = study_dir.join("sessions");
    if !dir.exists() {
        return Ok(Vec::new());
    }
    let mut paths: Vec<PathBuf> = fs::read_dir(&dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<io::Result<_>>()?;
    paths.retain(|p| p.extension().is_some_and(|x| x == "json"));
    paths.sort();
    paths.iter().map(|p| read_json(p)).collect()
}
