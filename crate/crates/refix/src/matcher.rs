//! Pattern compilation and replay.
//!
//! Condition snippets compile to one anchored regular expression per line.
//! Literal text is escaped; the first occurrence of placeholder `$k` becomes
//! the named group `token{k+1}`; identifier and number placeholders match
//! `[\w.]+`, string placeholders match a delimiter-balanced literal. Repeat
//! occurrences compile to auxiliary groups whose captures must equal the
//! primary capture, which also enforces consistency across lines — the
//! behavioral equivalent of backreferences.

use crate::lexer::{tokenize_line, TokenClass};
use crate::pattern::{fill_snippet, snippet_segments, FixPattern, SnippetSegment};
use crate::profile::LanguageProfile;
use regex::Regex;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum CompileError {
    #[error("pattern {sha}: condition and consequent must each have at least one line")]
    EmptySnippet { sha: String },
    #[error("pattern {sha}: placeholder ${index} is not in the abstracted table")]
    MissingPlaceholder { sha: String, index: u32 },
    #[error("pattern {sha}: generated regex is invalid: {source}")]
    Regex {
        sha: String,
        source: regex::Error,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum ApplyError {
    #[error("consequent placeholder ${index} has no binding")]
    UnboundPlaceholder { index: u32 },
}

/// A condition snippet compiled to per-line anchored regexes.
#[derive(Debug, Clone)]
pub struct CompiledPattern {
    pub source: FixPattern,
    pub line_regexes: Vec<Regex>,
    pub placeholder_classes: BTreeMap<u32, TokenClass>,
    /// per line: capture-group name and the placeholder it binds
    groups: Vec<Vec<(String, u32)>>,
}

/// A located condition match; the replacement is rendered by [`apply`].
#[derive(Debug, Clone)]
pub struct MatchedRegion {
    /// 1-based inclusive
    pub start_line: usize,
    pub end_line: usize,
    /// the matched file lines, joined with `\n`
    pub original: String,
    /// captured leading whitespace of the first matched line
    pub leading_whitespace: String,
    pub bindings: BTreeMap<u32, String>,
}

/// A matched region with its rendered replacement and provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Suggestion {
    pub file_path: PathBuf,
    pub start_line: usize,
    pub end_line: usize,
    pub original: String,
    pub replacement: String,
    pub pattern: FixPattern,
}

impl Suggestion {
    pub fn overlaps(&self, other: &Suggestion) -> bool {
        self.start_line <= other.end_line && other.start_line <= self.end_line
    }
}

fn class_char(c: char) -> String {
    match c {
        '\\' | ']' | '^' | '-' => format!("\\{c}"),
        _ => c.to_string(),
    }
}

/// Regex for one delimiter-balanced string literal with backslash escapes,
/// over any of the profile's delimiters.
fn string_literal_body(profile: &LanguageProfile) -> String {
    let alternatives: Vec<String> = profile
        .string_delimiters
        .iter()
        .map(|&d| {
            let d = class_char(d);
            format!("{d}(?:[^{d}\\\\]|\\\\.)*{d}")
        })
        .collect();
    format!("(?:{})", alternatives.join("|"))
}

/// Recover a placeholder's token class by re-tokenizing its stored text.
/// Anything that does not lex as a single abstractable token falls back to
/// the identifier class, matching the type-free `[\w.]+` default.
fn recover_class(value: &str, profile: &LanguageProfile) -> TokenClass {
    let tokens = tokenize_line(value, profile);
    match tokens.as_slice() {
        [only] if only.is_abstractable_class() && only.text == value => only.class,
        _ => TokenClass::Identifier,
    }
}

/// Compile arbitrary snippet lines as if they were a condition. Used for the
/// condition itself and for consequent-presence scans.
pub fn compile_lines(
    pattern: &FixPattern,
    lines: &[String],
    profile: &LanguageProfile,
) -> Result<CompiledPattern, CompileError> {
    let sha = || {
        if pattern.meta.sha.is_empty() {
            "<no sha>".to_string()
        } else {
            pattern.meta.sha.clone()
        }
    };
    if lines.is_empty() || pattern.consequent.is_empty() || pattern.condition.is_empty() {
        return Err(CompileError::EmptySnippet { sha: sha() });
    }

    let mut placeholder_classes: BTreeMap<u32, TokenClass> = BTreeMap::new();
    let mut line_regexes = Vec::with_capacity(lines.len());
    let mut groups: Vec<Vec<(String, u32)>> = Vec::with_capacity(lines.len());
    let mut seen: BTreeMap<u32, usize> = BTreeMap::new(); // placeholder -> occurrences

    for line in lines {
        let mut src = String::from("^(?P<indent>[ \\t]*)");
        let mut line_groups = Vec::new();
        for segment in snippet_segments(line) {
            match segment {
                SnippetSegment::Literal(text) => src.push_str(&regex::escape(text)),
                SnippetSegment::Placeholder(index) => {
                    let value = pattern.abstracted.get(&index).ok_or_else(|| {
                        CompileError::MissingPlaceholder {
                            sha: sha(),
                            index,
                        }
                    })?;
                    let class = *placeholder_classes
                        .entry(index)
                        .or_insert_with(|| recover_class(value, profile));
                    let body = match class {
                        TokenClass::String => string_literal_body(profile),
                        _ => String::from("[\\w.]+"),
                    };
                    let occurrence = seen.entry(index).or_insert(0);
                    let name = if *occurrence == 0 {
                        format!("token{}", index + 1)
                    } else {
                        format!("token{}_r{}", index + 1, occurrence)
                    };
                    *occurrence += 1;
                    src.push_str(&format!("(?P<{name}>{body})"));
                    line_groups.push((name, index));
                }
            }
        }
        src.push_str("[ \\t]*$");
        let regex = Regex::new(&src).map_err(|source| CompileError::Regex {
            sha: sha(),
            source,
        })?;
        line_regexes.push(regex);
        groups.push(line_groups);
    }

    Ok(CompiledPattern {
        source: pattern.clone(),
        line_regexes,
        placeholder_classes,
        groups,
    })
}

/// Compile a pattern's condition.
pub fn compile(
    pattern: &FixPattern,
    profile: &LanguageProfile,
) -> Result<CompiledPattern, CompileError> {
    compile_lines(pattern, &pattern.condition, profile)
}

fn match_at(lines: &[String], at: usize, cp: &CompiledPattern) -> Option<MatchedRegion> {
    let mut bindings: BTreeMap<u32, String> = BTreeMap::new();
    let mut leading_whitespace = String::new();
    for (offset, regex) in cp.line_regexes.iter().enumerate() {
        let caps = regex.captures(&lines[at + offset])?;
        if offset == 0 {
            leading_whitespace = caps
                .name("indent")
                .map(|m| m.as_str().to_string())
                .unwrap_or_default();
        }
        for (name, index) in &cp.groups[offset] {
            let text = caps.name(name)?.as_str();
            match bindings.get(index) {
                Some(existing) if existing != text => return None,
                Some(_) => {}
                None => {
                    bindings.insert(*index, text.to_string());
                }
            }
        }
    }
    let len = cp.line_regexes.len();
    Some(MatchedRegion {
        start_line: at + 1,
        end_line: at + len,
        original: lines[at..at + len].join("\n"),
        leading_whitespace,
        bindings,
    })
}

/// Locate condition matches. A match at line `i` requires every condition
/// line `j` to match file line `i + j` with placeholder bindings consistent
/// across lines. Matches of one pattern never overlap: they are taken
/// greedily from the top.
pub fn find_matches(lines: &[String], cp: &CompiledPattern) -> Vec<MatchedRegion> {
    let len = cp.line_regexes.len();
    let mut out = Vec::new();
    if len == 0 || lines.len() < len {
        return out;
    }
    let mut i = 0;
    while i + len <= lines.len() {
        match match_at(lines, i, cp) {
            Some(region) => {
                out.push(region);
                i += len;
            }
            None => i += 1,
        }
    }
    out
}

/// Render the replacement for one match: consequent lines with bindings
/// substituted, each prefixed by the first matched line's leading
/// whitespace on top of the line's own relative indentation.
pub fn apply(
    region: &MatchedRegion,
    cp: &CompiledPattern,
    file_path: &Path,
) -> Result<Suggestion, ApplyError> {
    let filled = fill_snippet(&cp.source.consequent, &region.bindings)
        .map_err(|e| ApplyError::UnboundPlaceholder { index: e.index })?;
    let replacement = filled
        .iter()
        .map(|line| format!("{}{}", region.leading_whitespace, line))
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Suggestion {
        file_path: file_path.to_path_buf(),
        start_line: region.start_line,
        end_line: region.end_line,
        original: region.original.clone(),
        replacement,
        pattern: cp.source.clone(),
    })
}

/// Find and render every suggestion of one pattern in one file.
pub fn suggest(
    file_path: &Path,
    lines: &[String],
    cp: &CompiledPattern,
) -> Result<Vec<Suggestion>, ApplyError> {
    find_matches(lines, cp)
        .iter()
        .map(|region| apply(region, cp, file_path))
        .collect()
}

/// Apply suggestions to a file's lines, top priority first. A suggestion
/// whose span intersects an already-applied span is skipped; later line
/// numbers are remapped for earlier length changes. Returns the new lines
/// and the applied suggestions in document order.
pub fn patch_file(lines: &[String], suggestions: &[Suggestion]) -> (Vec<String>, Vec<Suggestion>) {
    let mut accepted: Vec<&Suggestion> = Vec::new();
    for s in suggestions {
        if s.start_line < 1 || s.start_line > s.end_line || s.end_line > lines.len() {
            continue;
        }
        if accepted.iter().any(|a| a.overlaps(s)) {
            continue;
        }
        accepted.push(s);
    }
    accepted.sort_by_key(|s| s.start_line);

    let mut out: Vec<String> = Vec::new();
    let mut next = 0usize; // 0-based index of the next unconsumed line
    for s in &accepted {
        out.extend(lines[next..s.start_line - 1].iter().cloned());
        out.extend(s.replacement.split('\n').map(str::to_string));
        next = s.end_line;
    }
    out.extend(lines[next..].iter().cloned());
    (out, accepted.into_iter().cloned().collect())
}

/// Split text into (line, ending) pairs; endings are "\n", "\r\n", or ""
/// for a final line without a newline. Concatenating the pairs reproduces
/// the input exactly.
pub fn split_lines_keep_endings(text: &str) -> Vec<(String, String)> {
    let mut out = Vec::new();
    let mut rest = text;
    while !rest.is_empty() {
        match rest.find('\n') {
            Some(pos) => {
                let (line, ending) = if pos > 0 && rest.as_bytes()[pos - 1] == b'\r' {
                    (&rest[..pos - 1], "\r\n")
                } else {
                    (&rest[..pos], "\n")
                };
                out.push((line.to_string(), ending.to_string()));
                rest = &rest[pos + 1..];
            }
            None => {
                out.push((rest.to_string(), String::new()));
                break;
            }
        }
    }
    out
}

/// Apply suggestions to raw file text, preserving the original line endings
/// and the presence or absence of a trailing newline.
pub fn patch_text(text: &str, suggestions: &[Suggestion]) -> (String, Vec<Suggestion>) {
    let parts = split_lines_keep_endings(text);
    let lines: Vec<String> = parts.iter().map(|(l, _)| l.clone()).collect();
    let (_, applied) = patch_file(&lines, suggestions);

    let mut out = String::with_capacity(text.len());
    let mut next = 0usize;
    for s in &applied {
        for (line, ending) in &parts[next..s.start_line - 1] {
            out.push_str(line);
            out.push_str(ending);
        }
        let first_ending = parts[s.start_line - 1].1.as_str();
        let last_ending = parts[s.end_line - 1].1.as_str();
        let mid_ending = if first_ending.is_empty() {
            "\n"
        } else {
            first_ending
        };
        let replacement_lines: Vec<&str> = s.replacement.split('\n').collect();
        for (i, line) in replacement_lines.iter().enumerate() {
            out.push_str(line);
            out.push_str(if i + 1 == replacement_lines.len() {
                last_ending
            } else {
                mid_ending
            });
        }
        next = s.end_line;
    }
    for (line, ending) in &parts[next..] {
        out.push_str(line);
        out.push_str(ending);
    }
    (out, applied)
}
