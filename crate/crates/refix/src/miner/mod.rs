//! Commit-history mining.
//!
//! Talks to the version-control executable as a subprocess, selects commits
//! inside a trailing time window, and extracts one-hunk before/after change
//! pairs. `.patch` files are accepted as an alternative input channel so the
//! pipeline stays testable on plain fixtures.

pub mod diff;

pub use diff::{parse_unified_diff, ParsedDiff};

use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::process::Command;

pub const TIMESTAMP_FORMAT: &str = "%Y-%m-%d %H:%M:%S";

#[derive(Debug, thiserror::Error)]
pub enum MineError {
    #[error("not a version-controlled directory: {path}: {message}")]
    NotARepository { path: String, message: String },
    #[error("version-control command failed in {path}: {message}")]
    Vcs { path: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Provenance of one mined change.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommitMeta {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub repository: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub sha: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub author: String,
    /// Rendered as "YYYY-MM-DD HH:MM:SS"; parse with [`CommitMeta::timestamp`].
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub created_at: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub file_path: String,
}

impl CommitMeta {
    pub fn timestamp(&self) -> Option<NaiveDateTime> {
        NaiveDateTime::parse_from_str(&self.created_at, TIMESTAMP_FORMAT).ok()
    }
}

/// One contiguous before/after line-block pair: the deleted lines, the added
/// lines, and where they came from. Both sides are non-empty by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChangeHunk {
    pub before: Vec<String>,
    pub after: Vec<String>,
    pub meta: CommitMeta,
}

/// Everything `mine` pulled out of one source, plus parser warnings.
#[derive(Debug, Default)]
pub struct MineReport {
    pub hunks: Vec<ChangeHunk>,
    pub skipped_sections: usize,
}

fn run_git(repo: &Path, args: &[&str]) -> Result<String, MineError> {
    let output = Command::new("git")
        .arg("-C")
        .arg(repo)
        .args(args)
        .output()
        .map_err(|e| MineError::Vcs {
            path: repo.display().to_string(),
            message: format!("failed to invoke git: {e}"),
        })?;
    if !output.status.success() {
        return Err(MineError::Vcs {
            path: repo.display().to_string(),
            message: String::from_utf8_lossy(&output.stderr).trim().to_string(),
        });
    }
    Ok(String::from_utf8_lossy(&output.stdout).into_owned())
}

/// Derive an "owner/name" label from the origin remote, falling back to the
/// directory name.
fn repository_label(repo: &Path) -> String {
    if let Ok(url) = run_git(repo, &["config", "--get", "remote.origin.url"]) {
        let url = url.trim().trim_end_matches(".git");
        let tail: Vec<&str> = url.rsplit(|c| c == '/' || c == ':').take(2).collect();
        if tail.len() == 2 && !tail[0].is_empty() && !tail[1].is_empty() {
            return format!("{}/{}", tail[1], tail[0]);
        }
    }
    repo.canonicalize()
        .ok()
        .and_then(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        .unwrap_or_else(|| repo.display().to_string())
}

/// List non-merge commits whose author timestamp t satisfies
/// `end_time - window_days <= t <= end_time`, oldest first, each paired with
/// its full-commit unified diff. `end_time` defaults to the newest commit's
/// timestamp so mining static fixtures is reproducible.
pub fn collect_commits(
    repo_path: &Path,
    window_days: u32,
    end_time: Option<NaiveDateTime>,
) -> Result<Vec<(CommitMeta, String)>, MineError> {
    run_git(repo_path, &["rev-parse", "--is-inside-work-tree"]).map_err(|e| {
        MineError::NotARepository {
            path: repo_path.display().to_string(),
            message: match e {
                MineError::Vcs { message, .. } => message,
                other => other.to_string(),
            },
        }
    })?;

    let format = format!("--date=format:{TIMESTAMP_FORMAT}");
    let listing = match run_git(
        repo_path,
        &[
            "log",
            "--no-merges",
            "--reverse",
            &format,
            "--pretty=format:%H%x09%ad%x09%an",
        ],
    ) {
        Ok(text) => text,
        Err(MineError::Vcs { message, .. })
            if message.contains("does not have any commits")
                || message.contains("bad default revision") =>
        {
            return Ok(Vec::new());
        }
        Err(e) => return Err(e),
    };

    let repository = repository_label(repo_path);
    let mut commits: Vec<(CommitMeta, NaiveDateTime)> = Vec::new();
    for line in listing.lines() {
        let mut parts = line.splitn(3, '\t');
        let (Some(sha), Some(date), Some(author)) = (parts.next(), parts.next(), parts.next())
        else {
            continue;
        };
        let Ok(ts) = NaiveDateTime::parse_from_str(date, TIMESTAMP_FORMAT) else {
            continue;
        };
        commits.push((
            CommitMeta {
                repository: repository.clone(),
                sha: sha.to_string(),
                author: author.to_string(),
                created_at: date.to_string(),
                file_path: String::new(),
            },
            ts,
        ));
    }

    let Some(end) = end_time.or_else(|| commits.iter().map(|(_, ts)| *ts).max()) else {
        return Ok(Vec::new());
    };
    let start = end - chrono::Duration::days(i64::from(window_days));

    let mut result = Vec::new();
    for (meta, ts) in commits {
        if ts < start || ts > end {
            continue;
        }
        let diff = run_git(
            repo_path,
            &["show", &meta.sha, "--no-color", "--no-renames", "--format="],
        )?;
        result.push((meta, diff));
    }
    Ok(result)
}

/// Read one `.patch` / `.diff` file, recovering commit metadata from
/// `git format-patch` style headers when present.
pub fn ingest_patch_file(path: &Path, max_hunk_lines: usize) -> Result<MineReport, MineError> {
    let bytes = std::fs::read(path).map_err(|source| MineError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let text = String::from_utf8_lossy(&bytes);

    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    let mut meta = CommitMeta {
        repository: stem.clone(),
        sha: stem,
        author: String::new(),
        created_at: String::new(),
        file_path: String::new(),
    };

    for line in text.lines().take(20) {
        if let Some(rest) = line.strip_prefix("From ") {
            let candidate: String = rest.chars().take_while(|c| c.is_ascii_hexdigit()).collect();
            if candidate.len() == 40 {
                meta.sha = candidate;
            }
        } else if let Some(rest) = line.strip_prefix("From: ") {
            meta.author = rest.split('<').next().unwrap_or(rest).trim().to_string();
        } else if let Some(rest) = line.strip_prefix("Date: ") {
            if let Ok(dt) = chrono::DateTime::parse_from_rfc2822(rest.trim()) {
                meta.created_at = dt.naive_local().format(TIMESTAMP_FORMAT).to_string();
            }
        }
    }
    if meta.created_at.is_empty() {
        if let Ok(modified) = std::fs::metadata(path).and_then(|m| m.modified()) {
            let dt: chrono::DateTime<chrono::Local> = modified.into();
            meta.created_at = dt.naive_local().format(TIMESTAMP_FORMAT).to_string();
        }
    }

    let parsed = parse_unified_diff(&text, &meta, max_hunk_lines);
    Ok(MineReport {
        hunks: parsed.hunks,
        skipped_sections: parsed.skipped_sections,
    })
}

/// Mine one source: a version-controlled directory, or a patch file.
/// Commit order is preserved, then in-diff order within each commit.
pub fn mine(
    source: &Path,
    window_days: u32,
    end_time: Option<NaiveDateTime>,
    max_hunk_lines: usize,
) -> Result<MineReport, MineError> {
    if source.is_file() {
        return ingest_patch_file(source, max_hunk_lines);
    }
    let mut report = MineReport::default();
    for (meta, diff) in collect_commits(source, window_days, end_time)? {
        let parsed = parse_unified_diff(&diff, &meta, max_hunk_lines);
        report.hunks.extend(parsed.hunks);
        report.skipped_sections += parsed.skipped_sections;
    }
    Ok(report)
}
