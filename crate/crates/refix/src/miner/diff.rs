//! Unified-diff hunk extraction.
//!
//! Pulls before/after line-block pairs out of `git show` / `.patch` text.
//! Positions are irrelevant here: a hunk is a maximal run of deleted lines
//! immediately followed by a maximal run of added lines. Runs with only one
//! side, and runs larger than the configured bound, yield nothing.

use super::{ChangeHunk, CommitMeta};

/// Extraction result plus the number of sections skipped because no file
/// path could be determined from their headers.
#[derive(Debug, Default)]
pub struct ParsedDiff {
    pub hunks: Vec<ChangeHunk>,
    pub skipped_sections: usize,
}

struct HunkCollector<'a> {
    meta: &'a CommitMeta,
    max_hunk_lines: usize,
    file_path: Option<String>,
    before: Vec<String>,
    after: Vec<String>,
    section_warned: bool,
    out: ParsedDiff,
}

impl<'a> HunkCollector<'a> {
    fn new(meta: &'a CommitMeta, max_hunk_lines: usize) -> Self {
        HunkCollector {
            meta,
            max_hunk_lines,
            file_path: None,
            before: Vec::new(),
            after: Vec::new(),
            section_warned: false,
            out: ParsedDiff::default(),
        }
    }

    fn flush(&mut self) {
        if self.before.is_empty() && self.after.is_empty() {
            return;
        }
        let before = std::mem::take(&mut self.before);
        let after = std::mem::take(&mut self.after);
        if before.is_empty() || after.is_empty() {
            return; // pure addition or deletion
        }
        if before.len() > self.max_hunk_lines || after.len() > self.max_hunk_lines {
            return;
        }
        match &self.file_path {
            Some(path) => {
                let mut meta = self.meta.clone();
                meta.file_path = path.clone();
                self.out.hunks.push(ChangeHunk {
                    before,
                    after,
                    meta,
                });
            }
            None => {
                // change lines with no usable file header
                if !self.section_warned {
                    self.section_warned = true;
                    self.out.skipped_sections += 1;
                }
            }
        }
    }

    fn start_section(&mut self) {
        self.flush();
        self.file_path = None;
        self.section_warned = false;
    }
}

/// Strip the `a/` or `b/` prefix git puts on header paths.
fn header_path(raw: &str) -> Option<String> {
    // tolerate "path\t2020-01-01 ..." timestamp suffixes
    let raw = raw.split('\t').next().unwrap_or("").trim_end();
    if raw == "/dev/null" {
        return None;
    }
    let path = raw
        .strip_prefix("a/")
        .or_else(|| raw.strip_prefix("b/"))
        .unwrap_or(raw);
    if path.is_empty() {
        None
    } else {
        Some(path.to_string())
    }
}

/// Extract one-hunk change pairs from unified diff text (possibly covering
/// several files). `meta.file_path` is replaced per hunk from the enclosing
/// file header.
pub fn parse_unified_diff(
    diff_text: &str,
    meta: &CommitMeta,
    max_hunk_lines: usize,
) -> ParsedDiff {
    let mut c = HunkCollector::new(meta, max_hunk_lines);

    for line in diff_text.lines() {
        if line.starts_with("diff --git ") || line.starts_with("diff -") {
            c.start_section();
        } else if let Some(rest) = line.strip_prefix("--- ") {
            // a new pre-image header opens a new file pair
            c.flush();
            c.file_path = header_path(rest);
            c.section_warned = false;
        } else if let Some(rest) = line.strip_prefix("+++ ") {
            c.flush();
            // the post-image path wins unless the file was deleted
            if let Some(path) = header_path(rest) {
                c.file_path = Some(path);
            }
        } else if line.starts_with("@@") {
            c.flush();
        } else if line.starts_with('\\') {
            // "\ No newline at end of file" must not split a run
        } else if let Some(text) = line.strip_prefix('-') {
            if !c.after.is_empty() {
                c.flush();
            }
            c.before.push(text.to_string());
        } else if let Some(text) = line.strip_prefix('+') {
            c.after.push(text.to_string());
        } else if let Some(text) = line.strip_prefix(' ') {
            let _ = text;
            c.flush();
        } else {
            // index lines, mode lines, mail headers, blank separators
            c.flush();
        }
    }
    c.flush();
    c.out
}
