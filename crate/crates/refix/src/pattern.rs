//! Fix patterns: hunk abstraction, the snippet placeholder syntax, and the
//! JSON pattern-file format.
//!
//! A pattern is a pair of snippet line lists. Tokens common to both sides of
//! the origin hunk are replaced by numbered `$k` placeholders; everything
//! else stays literal, spacing included. The `abstracted` table remembers the
//! original texts so the origin hunk can be reconstructed exactly.

use crate::lexer::{tokenize_line, Token, TokenClass};
use crate::miner::{ChangeHunk, CommitMeta};
use crate::profile::LanguageProfile;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};

#[derive(Debug, thiserror::Error)]
pub enum PatternFileError {
    #[error("pattern file is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("pattern file must be a JSON array of pattern records")]
    NotArray,
}

/// A record that failed to load; the rest of the file still loads.
#[derive(Debug)]
pub struct RecordError {
    pub index: usize,
    pub message: String,
}

impl std::fmt::Display for RecordError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "pattern record {}: {}", self.index, self.message)
    }
}

mod abstracted_keys {
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<u32, String>,
        ser: S,
    ) -> Result<S::Ok, S::Error> {
        ser.collect_map(map.iter().map(|(k, v)| (k.to_string(), v)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> Result<BTreeMap<u32, String>, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(de)?;
        raw.into_iter()
            .map(|(k, v)| {
                k.parse::<u32>()
                    .map(|k| (k, v))
                    .map_err(|_| D::Error::custom(format!("abstracted key {k:?} is not an index")))
            })
            .collect()
    }
}

/// One editable fix pattern: condition snippet (pre-change side), consequent
/// snippet (post-change side), placeholder table, and provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixPattern {
    #[serde(flatten)]
    pub meta: CommitMeta,
    pub condition: Vec<String>,
    pub consequent: Vec<String>,
    #[serde(with = "abstracted_keys", default)]
    pub abstracted: BTreeMap<u32, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub severity: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    /// Unknown fields are kept on read and re-emitted on write.
    #[serde(flatten)]
    pub extra: serde_json::Map<String, serde_json::Value>,
}

impl FixPattern {
    pub fn new(meta: CommitMeta, condition: Vec<String>, consequent: Vec<String>) -> Self {
        FixPattern {
            meta,
            condition,
            consequent,
            abstracted: BTreeMap::new(),
            severity: None,
            description: None,
            extra: serde_json::Map::new(),
        }
    }
}

/// An ordered pattern collection; serializes to a single JSON array.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PatternFile {
    pub patterns: Vec<FixPattern>,
}

/// Result of loading a pattern file: what loaded, and which records did not.
#[derive(Debug)]
pub struct LoadedPatterns {
    pub file: PatternFile,
    pub record_errors: Vec<RecordError>,
}

impl PatternFile {
    pub fn new(patterns: Vec<FixPattern>) -> Self {
        PatternFile { patterns }
    }

    /// Render as a JSON array, 1-space indented.
    pub fn serialize(&self) -> String {
        let mut buf = Vec::new();
        let formatter = serde_json::ser::PrettyFormatter::with_indent(b" ");
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, formatter);
        Serialize::serialize(&self.patterns, &mut ser).expect("pattern serialization");
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }

    /// Parse a pattern file. Records missing `condition` or `consequent` (or
    /// otherwise malformed) are reported individually; the rest still load.
    pub fn deserialize(text: &str) -> Result<LoadedPatterns, PatternFileError> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let serde_json::Value::Array(records) = value else {
            return Err(PatternFileError::NotArray);
        };
        let mut patterns = Vec::new();
        let mut record_errors = Vec::new();
        for (index, record) in records.into_iter().enumerate() {
            match serde_json::from_value::<FixPattern>(record) {
                Ok(p) => patterns.push(p),
                Err(e) => record_errors.push(RecordError {
                    index,
                    message: e.to_string(),
                }),
            }
        }
        Ok(LoadedPatterns {
            file: PatternFile { patterns },
            record_errors,
        })
    }
}

/// Strip the longest common leading-whitespace prefix shared by all lines.
pub fn normalize_indentation(lines: &[String]) -> Vec<String> {
    fn leading_ws(line: &str) -> &str {
        let end = line
            .char_indices()
            .find(|(_, c)| !c.is_whitespace())
            .map_or(line.len(), |(i, _)| i);
        &line[..end]
    }
    let mut prefix: Option<&str> = None;
    for line in lines {
        let ws = leading_ws(line);
        prefix = Some(match prefix {
            None => ws,
            Some(p) => {
                let common = p
                    .char_indices()
                    .zip(ws.chars())
                    .take_while(|((_, a), b)| a == b)
                    .last()
                    .map_or(0, |((i, a), _)| i + a.len_utf8());
                &p[..common]
            }
        });
    }
    let strip = prefix.map_or(0, str::len);
    lines.iter().map(|l| l[strip..].to_string()).collect()
}

fn has_literal_dollar_digit(line: &str) -> bool {
    line.as_bytes()
        .windows(2)
        .any(|w| w[0] == b'$' && w[1].is_ascii_digit())
}

/// Can this character appear inside an identifier/number token value? Word
/// placeholders compile to `[\w.]+`, so anything in this set cannot act as a
/// separator between two of them.
fn is_word_or_dot(c: char) -> bool {
    c == '_' || c == '.' || c.is_alphanumeric()
}

/// True when `text` is a complete string literal: opens and closes with the
/// same delimiter, with backslash escapes honored.
fn is_terminated_string(text: &str, profile: &LanguageProfile) -> bool {
    let mut chars = text.chars();
    let Some(delim) = chars.next() else {
        return false;
    };
    if !profile.is_string_delimiter(delim) || text.chars().count() < 2 {
        return false;
    }
    let mut escaped = false;
    let mut closed_at_end = false;
    for c in chars {
        if closed_at_end {
            return false; // text continues past the closing delimiter
        }
        if escaped {
            escaped = false;
        } else if c == '\\' {
            escaped = true;
        } else if c == delim {
            closed_at_end = true;
        }
    }
    closed_at_end
}

/// True when a token with this text can be faithfully re-matched by the
/// group body its class compiles to.
fn is_rematchable(text: &str, class: TokenClass, profile: &LanguageProfile) -> bool {
    match class {
        TokenClass::String => is_terminated_string(text, profile),
        TokenClass::Identifier | TokenClass::Number => text.chars().all(is_word_or_dot),
        _ => false,
    }
}

fn render_side(
    lines: &[Vec<Token>],
    placeholder_of: &HashMap<&str, u32>,
    word_bodied: &HashMap<&str, bool>,
) -> Option<Vec<String>> {
    let mut rendered = Vec::with_capacity(lines.len());
    for tokens in lines {
        let mut out = String::new();
        // no word placeholder emitted yet, so a separator is not required
        let mut separated = true;
        let mut prev_was_placeholder = false;
        for token in tokens {
            let slot = if token.is_abstractable_class() {
                placeholder_of.get(token.text.as_str()).copied()
            } else {
                None
            };
            match slot {
                Some(k) => {
                    if word_bodied[token.text.as_str()] {
                        if !separated {
                            return None; // two word placeholders with no hard separator
                        }
                        separated = false;
                    } else {
                        separated = true; // string literals delimit themselves
                    }
                    out.push('$');
                    out.push_str(&k.to_string());
                    prev_was_placeholder = true;
                }
                None => {
                    if prev_was_placeholder
                        && token.text.starts_with(|c: char| c.is_ascii_digit())
                    {
                        return None; // "$k" would bleed into a literal digit
                    }
                    if token.text.chars().any(|c| !is_word_or_dot(c)) {
                        separated = true;
                    }
                    out.push_str(&token.text);
                    prev_was_placeholder = false;
                }
            }
        }
        rendered.push(out);
    }
    Some(rendered)
}

/// Abstract a change hunk into a fix pattern.
///
/// Indentation common to each side is stripped, both sides are tokenized,
/// and identifier/number/string texts that occur on both sides — with at
/// least one non-member-access occurrence on each side — become numbered
/// placeholders in first-occurrence order of the pre-change side. Every
/// occurrence of an abstracted text is replaced, member accesses included.
///
/// Returns `None` when the two sides render identically, or when the hunk
/// cannot be represented so that the resulting pattern re-matches its own
/// origin (literal `$<digit>` text, unterminated string literals among the
/// shared tokens, or two word-class placeholders with no separator between
/// them).
pub fn abstract_hunk(hunk: &ChangeHunk, profile: &LanguageProfile) -> Option<FixPattern> {
    let before = normalize_indentation(&hunk.before);
    let after = normalize_indentation(&hunk.after);

    if before
        .iter()
        .chain(after.iter())
        .any(|l| has_literal_dollar_digit(l))
    {
        return None;
    }

    let tokenize_side =
        |lines: &[String]| -> Vec<Vec<Token>> { lines.iter().map(|l| tokenize_line(l, profile)).collect() };

    let before_tokens = tokenize_side(&before);
    let after_tokens = tokenize_side(&after);

    let non_member_texts = |side: &[Vec<Token>]| -> HashSet<String> {
        side.iter()
            .flatten()
            .filter(|t| t.is_abstractable_class() && !t.member_access)
            .map(|t| t.text.clone())
            .collect()
    };
    let before_non_member = non_member_texts(&before_tokens);
    let after_non_member = non_member_texts(&after_tokens);

    // placeholder indices by first occurrence, scanning the before side
    let mut placeholder_of: HashMap<&str, u32> = HashMap::new();
    let mut word_bodied: HashMap<&str, bool> = HashMap::new();
    let mut abstracted: BTreeMap<u32, String> = BTreeMap::new();
    for token in before_tokens.iter().flatten() {
        if !token.is_abstractable_class() || placeholder_of.contains_key(token.text.as_str()) {
            continue;
        }
        let text = token.text.as_str();
        let eligible = before_non_member.contains(text)
            && after_non_member.contains(text)
            && is_rematchable(text, token.class, profile);
        if eligible {
            let index = placeholder_of.len() as u32;
            abstracted.insert(index, token.text.clone());
            word_bodied.insert(text, token.class != TokenClass::String);
            placeholder_of.insert(text, index);
        }
    }

    let condition = render_side(&before_tokens, &placeholder_of, &word_bodied)?;
    let consequent = render_side(&after_tokens, &placeholder_of, &word_bodied)?;
    if condition == consequent {
        return None;
    }

    let mut pattern = FixPattern::new(hunk.meta.clone(), condition, consequent);
    pattern.abstracted = abstracted;
    Some(pattern)
}

#[derive(Debug, thiserror::Error)]
#[error("placeholder ${index} has no abstracted value")]
pub struct UnboundPlaceholder {
    pub index: u32,
}

/// Walk snippet text, splitting it into literal runs and `$k` placeholders.
/// A `$` not followed by a digit is literal text.
pub fn snippet_segments(line: &str) -> Vec<SnippetSegment<'_>> {
    let mut segments = Vec::new();
    let bytes = line.as_bytes();
    let mut lit_start = 0;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'$' && i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
            if lit_start < i {
                segments.push(SnippetSegment::Literal(&line[lit_start..i]));
            }
            let mut end = i + 1;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
            let index: u32 = line[i + 1..end].parse().unwrap_or(u32::MAX);
            segments.push(SnippetSegment::Placeholder(index));
            i = end;
            lit_start = end;
        } else {
            i += 1;
        }
    }
    if lit_start < bytes.len() {
        segments.push(SnippetSegment::Literal(&line[lit_start..]));
    }
    segments
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnippetSegment<'a> {
    Literal(&'a str),
    Placeholder(u32),
}

/// Substitute placeholder values into snippet lines. Single pass: inserted
/// values are never rescanned, so values containing `$` stay intact.
pub fn fill_snippet(
    lines: &[String],
    values: &BTreeMap<u32, String>,
) -> Result<Vec<String>, UnboundPlaceholder> {
    lines
        .iter()
        .map(|line| {
            let mut out = String::with_capacity(line.len());
            for segment in snippet_segments(line) {
                match segment {
                    SnippetSegment::Literal(text) => out.push_str(text),
                    SnippetSegment::Placeholder(index) => match values.get(&index) {
                        Some(value) => out.push_str(value),
                        None => return Err(UnboundPlaceholder { index }),
                    },
                }
            }
            Ok(out)
        })
        .collect()
}

/// Collapse patterns with identical condition/consequent pairs, keeping the
/// most recently created one. Relative order of survivors is preserved.
pub fn dedupe(patterns: Vec<FixPattern>) -> Vec<FixPattern> {
    let mut order: Vec<(Vec<String>, Vec<String>)> = Vec::new();
    let mut best: HashMap<(Vec<String>, Vec<String>), FixPattern> = HashMap::new();
    for pattern in patterns {
        let key = (pattern.condition.clone(), pattern.consequent.clone());
        match best.get(&key) {
            None => {
                order.push(key.clone());
                best.insert(key, pattern);
            }
            Some(current) => {
                if pattern.meta.timestamp() > current.meta.timestamp() {
                    best.insert(key, pattern);
                }
            }
        }
    }
    order
        .into_iter()
        .map(|key| best.remove(&key).expect("key recorded on insert"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::ProfileRegistry;

    fn meta() -> CommitMeta {
        CommitMeta {
            repository: "tensorflow/tensorflow".into(),
            sha: "d0414a39f97fb99edc06a2943b4dba259d59fcf4".into(),
            author: "A. Unique TensorFlower".into(),
            created_at: "2020-01-05 18:02:30".into(),
            file_path: String::new(),
        }
    }

    fn hunk(before: &[&str], after: &[&str]) -> ChangeHunk {
        ChangeHunk {
            before: before.iter().map(|s| s.to_string()).collect(),
            after: after.iter().map(|s| s.to_string()).collect(),
            meta: meta(),
        }
    }

    #[test]
    fn golden_one_line_date_bump() {
        let reg = ProfileRegistry::bundled();
        let h = hunk(
            &["_FORWARD_COMPATIBILITY_HORIZON = datetime.date(2020, 1, 4)"],
            &["_FORWARD_COMPATIBILITY_HORIZON = datetime.date(2020, 1, 5)"],
        );
        let p = abstract_hunk(&h, reg.for_extension("py")).unwrap();
        assert_eq!(p.condition, vec!["$0 = $1.date($2, $3, 4)"]);
        assert_eq!(p.consequent, vec!["$0 = $1.date($2, $3, 5)"]);
        let expected: BTreeMap<u32, String> = [
            (0, "_FORWARD_COMPATIBILITY_HORIZON"),
            (1, "datetime"),
            (2, "2020"),
            (3, "1"),
        ]
        .into_iter()
        .map(|(k, v)| (k, v.to_string()))
        .collect();
        assert_eq!(p.abstracted, expected);
    }

    #[test]
    fn identical_sides_yield_nothing() {
        let reg = ProfileRegistry::bundled();
        let h = hunk(&["x = 1"], &["x = 1"]);
        assert!(abstract_hunk(&h, reg.generic()).is_none());
        // whitespace-only reformat collapses after indentation normalization
        let h = hunk(&["    x = 1"], &["x = 1"]);
        assert!(abstract_hunk(&h, reg.generic()).is_none());
    }

    #[test]
    fn member_only_occurrences_replace_everywhere_once_eligible() {
        // "Module" has a non-member occurrence on each side, so it is
        // abstracted and its member-access occurrence is replaced too.
        // "interface" and "extends" occur non-member on both sides and are
        // abstracted as well, in first-occurrence order.
        let reg = ProfileRegistry::bundled();
        let h = hunk(
            &["interface Module extends NodeJS.Module {}"],
            &["interface Module extends NodeModule {}"],
        );
        let p = abstract_hunk(&h, reg.for_extension("ts")).unwrap();
        assert_eq!(p.condition, vec!["$0 $1 $2 NodeJS.$1 {}"]);
        assert_eq!(p.consequent, vec!["$0 $1 $2 NodeModule {}"]);
        let expected: BTreeMap<u32, String> = [(0, "interface"), (1, "Module"), (2, "extends")]
            .into_iter()
            .map(|(k, v)| (k, v.to_string()))
            .collect();
        assert_eq!(p.abstracted, expected);
    }

    #[test]
    fn member_only_texts_stay_literal() {
        // "date" is a member access on both sides, so it stays literal even
        // though it occurs on both sides.
        let reg = ProfileRegistry::bundled();
        let h = hunk(&["a = m.date(1, 9)"], &["a = m.date(2, 9)"]);
        let p = abstract_hunk(&h, reg.generic()).unwrap();
        assert!(p.condition[0].contains(".date("));
        assert!(!p.abstracted.values().any(|v| v == "date"));
    }

    #[test]
    fn indentation_is_normalized_jointly_per_side() {
        let reg = ProfileRegistry::bundled();
        let h = hunk(
            &["    if x:", "        y = 1"],
            &["    if x:", "        y = 2"],
        );
        let p = abstract_hunk(&h, reg.for_extension("py")).unwrap();
        assert_eq!(p.condition[0], "$0 $1:");
        assert_eq!(p.condition[1], "    $2 = 1");
    }

    #[test]
    fn literal_dollar_digit_cannot_be_represented() {
        let reg = ProfileRegistry::bundled();
        let h = hunk(&["echo $1 x"], &["echo $1 y"]);
        assert!(abstract_hunk(&h, reg.generic()).is_none());
    }

    #[test]
    fn unterminated_shared_strings_stay_literal() {
        let reg = ProfileRegistry::bundled();
        let h = hunk(&["x = \"abc"], &["y = \"abc"]);
        let p = abstract_hunk(&h, reg.generic()).unwrap();
        // the unterminated string cannot be re-matched, so it is not abstracted
        assert!(p.condition[0].ends_with("\"abc"));
        assert!(p.abstracted.values().all(|v| v != "\"abc"));
    }

    #[test]
    fn reconstruction_inverts_abstraction() {
        let reg = ProfileRegistry::bundled();
        let h = hunk(
            &["_FORWARD_COMPATIBILITY_HORIZON = datetime.date(2020, 1, 4)"],
            &["_FORWARD_COMPATIBILITY_HORIZON = datetime.date(2020, 1, 5)"],
        );
        let p = abstract_hunk(&h, reg.for_extension("py")).unwrap();
        assert_eq!(
            fill_snippet(&p.condition, &p.abstracted).unwrap(),
            h.before
        );
        assert_eq!(
            fill_snippet(&p.consequent, &p.abstracted).unwrap(),
            h.after
        );
    }

    #[test]
    fn fill_snippet_reports_unbound_placeholders() {
        let err = fill_snippet(&["$9 = 1".to_string()], &BTreeMap::new()).unwrap_err();
        assert_eq!(err.index, 9);
    }

    #[test]
    fn snippet_segments_parse_dollars() {
        use SnippetSegment::*;
        assert_eq!(
            snippet_segments("$0 = $12x$"),
            vec![
                Placeholder(0),
                Literal(" = "),
                Placeholder(12),
                Literal("x$"),
            ]
        );
        assert_eq!(snippet_segments("no placeholders"), vec![Literal("no placeholders")]);
        assert_eq!(snippet_segments("$$1"), vec![Literal("$"), Placeholder(1)]);
    }

    mod serde_format {
        use super::*;

        const LISTING_STYLE: &str = r#"[
 {
  "repository": "tensorflow/tensorflow",
  "sha": "d0414a39f97fb99edc06a2943b4dba259d59fcf4",
  "author": "A. Unique TensorFlower",
  "created_at": "2020-01-05 18:02:30",
  "condition": [
   "$0 = $1.date($2, $3, 4)"
  ],
  "consequent": [
   "$0 = $1.date($2, $3, 5)"
  ],
  "abstracted": {
   "0": "_FORWARD_COMPATIBILITY_HORIZON",
   "1": "datetime",
   "2": "2020",
   "3": "1"
  }
 }
]"#;

        #[test]
        fn loads_the_reference_record() {
            let loaded = PatternFile::deserialize(LISTING_STYLE).unwrap();
            assert!(loaded.record_errors.is_empty());
            assert_eq!(loaded.file.patterns.len(), 1);
            let p = &loaded.file.patterns[0];
            assert_eq!(p.meta.sha, "d0414a39f97fb99edc06a2943b4dba259d59fcf4");
            assert_eq!(p.meta.repository, "tensorflow/tensorflow");
            assert_eq!(p.condition, vec!["$0 = $1.date($2, $3, 4)"]);
            assert_eq!(p.abstracted[&0], "_FORWARD_COMPATIBILITY_HORIZON");
        }

        #[test]
        fn empty_array_is_an_empty_file() {
            let loaded = PatternFile::deserialize("[]").unwrap();
            assert!(loaded.file.patterns.is_empty());
            assert!(loaded.record_errors.is_empty());
        }

        #[test]
        fn round_trip_is_structurally_equal() {
            let loaded = PatternFile::deserialize(LISTING_STYLE).unwrap();
            let text = loaded.file.serialize();
            let a: serde_json::Value = serde_json::from_str(LISTING_STYLE).unwrap();
            let b: serde_json::Value = serde_json::from_str(&text).unwrap();
            assert_eq!(a, b);
            let again = PatternFile::deserialize(&text).unwrap();
            assert_eq!(again.file, loaded.file);
        }

        #[test]
        fn records_missing_condition_or_consequent_are_rejected_individually() {
            let text = r#"[
                {"condition": ["a"], "consequent": ["b"]},
                {"condition": ["only condition"]},
                {"consequent": ["only consequent"]},
                {"condition": ["c"], "consequent": ["d"]}
            ]"#;
            let loaded = PatternFile::deserialize(text).unwrap();
            assert_eq!(loaded.file.patterns.len(), 2);
            assert_eq!(loaded.record_errors.len(), 2);
            assert_eq!(loaded.record_errors[0].index, 1);
            assert_eq!(loaded.record_errors[1].index, 2);
            assert!(loaded.record_errors[0].message.contains("consequent"));
        }

        #[test]
        fn unknown_fields_survive_a_round_trip() {
            let text = r#"[{"condition": ["a"], "consequent": ["b"], "reviewed_by": "someone", "priority": 3}]"#;
            let loaded = PatternFile::deserialize(text).unwrap();
            let p = &loaded.file.patterns[0];
            assert_eq!(p.extra["reviewed_by"], "someone");
            let out = loaded.file.serialize();
            assert!(out.contains("reviewed_by"));
            assert!(out.contains("priority"));
        }

        #[test]
        fn hand_written_sparse_indices_are_tolerated() {
            // hand-written files may start at $1 with no $0
            let text = r#"[{"condition": ["F.crelu($1, axis=1)"], "consequent": ["torch.cat((F.relu($1), F.relu(-$1)))"], "abstracted": {"1": "x"}}]"#;
            let loaded = PatternFile::deserialize(text).unwrap();
            assert_eq!(loaded.file.patterns.len(), 1);
            assert_eq!(loaded.file.patterns[0].abstracted[&1], "x");
        }
    }

    mod dedupe_behavior {
        use super::*;

        fn pattern(cond: &str, cons: &str, date: &str) -> FixPattern {
            let mut m = meta();
            m.created_at = date.to_string();
            m.sha = format!("sha-{date}");
            FixPattern::new(m, vec![cond.to_string()], vec![cons.to_string()])
        }

        #[test]
        fn duplicates_collapse_to_most_recent() {
            let older = pattern("a", "b", "2020-01-01 00:00:00");
            let newer = pattern("a", "b", "2020-01-05 00:00:00");
            let out = dedupe(vec![older, newer.clone()]);
            assert_eq!(out.len(), 1);
            assert_eq!(out[0].meta.created_at, newer.meta.created_at);
        }

        #[test]
        fn disjoint_patterns_are_unchanged() {
            let a = pattern("a", "b", "2020-01-01 00:00:00");
            let c = pattern("c", "d", "2020-01-02 00:00:00");
            let out = dedupe(vec![a.clone(), c.clone()]);
            assert_eq!(out, vec![a, c]);
        }

        #[test]
        fn same_condition_different_consequent_both_kept() {
            // oracle: pairwise comparison of (condition, consequent) pairs
            let a = pattern("a", "b", "2020-01-01 00:00:00");
            let c = pattern("a", "d", "2020-01-02 00:00:00");
            let input = vec![a, c];
            let mut expected = Vec::new();
            for (i, p) in input.iter().enumerate() {
                if !input[..i]
                    .iter()
                    .any(|q| q.condition == p.condition && q.consequent == p.consequent)
                {
                    expected.push(p.clone());
                }
            }
            assert_eq!(dedupe(input.clone()), expected);
        }
    }
}
