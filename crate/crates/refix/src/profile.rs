//! Language profiles: per-extension lexing parameters.
//!
//! A profile only carries what tokenization needs (string delimiters and the
//! line-comment prefix); everything else about a language is irrelevant to
//! text-level matching. Profiles can be overridden from a JSON file keyed by
//! file extension.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum ProfileError {
    #[error("cannot read profile file {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed profile file {path}: {source}")]
    Parse {
        path: String,
        source: serde_json::Error,
    },
    #[error("profile {name:?}: {reason}")]
    Invalid { name: String, reason: String },
}

fn default_identifier_charset() -> String {
    "word characters and underscore, first char non-digit".to_string()
}

/// Lexing parameters for one language.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageProfile {
    pub name: String,
    pub string_delimiters: Vec<char>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line_comment_prefix: Option<String>,
    /// Descriptive only; the identifier rule itself is fixed in the lexer.
    #[serde(default = "default_identifier_charset")]
    pub identifier_charset: String,
}

impl LanguageProfile {
    pub fn new(
        name: impl Into<String>,
        string_delimiters: &[char],
        line_comment_prefix: Option<&str>,
    ) -> Self {
        LanguageProfile {
            name: name.into(),
            string_delimiters: string_delimiters.to_vec(),
            line_comment_prefix: line_comment_prefix.map(str::to_string),
            identifier_charset: default_identifier_charset(),
        }
    }

    /// Check the profile invariants: at least one string delimiter, and a
    /// non-empty comment prefix when one is configured.
    pub fn validate(&self) -> Result<(), ProfileError> {
        if self.string_delimiters.is_empty() {
            return Err(ProfileError::Invalid {
                name: self.name.clone(),
                reason: "string_delimiters must be non-empty".into(),
            });
        }
        if let Some(prefix) = &self.line_comment_prefix {
            if prefix.is_empty() {
                return Err(ProfileError::Invalid {
                    name: self.name.clone(),
                    reason: "line_comment_prefix must be non-empty when present".into(),
                });
            }
        }
        Ok(())
    }

    pub fn is_string_delimiter(&self, c: char) -> bool {
        self.string_delimiters.contains(&c)
    }
}

/// Bundled profiles plus any overrides, looked up by file extension.
#[derive(Debug, Clone)]
pub struct ProfileRegistry {
    generic: LanguageProfile,
    by_ext: BTreeMap<String, LanguageProfile>,
}

impl ProfileRegistry {
    /// The default registry: a generic profile for unknown extensions plus
    /// entries for common languages, differing only in string delimiters and
    /// comment prefixes.
    pub fn bundled() -> Self {
        let mut by_ext = BTreeMap::new();
        let mut add = |exts: &[&str], profile: LanguageProfile| {
            for ext in exts {
                by_ext.insert(ext.to_string(), profile.clone());
            }
        };

        add(
            &["py"],
            LanguageProfile::new("python", &['"', '\''], Some("#")),
        );
        add(&["rs"], LanguageProfile::new("rust", &['"'], Some("//")));
        add(
            &["js", "jsx", "ts", "tsx"],
            LanguageProfile::new("javascript", &['"', '\'', '`'], Some("//")),
        );
        add(
            &["c", "h", "cc", "cpp", "cxx", "hpp", "hh"],
            LanguageProfile::new("c", &['"', '\''], Some("//")),
        );
        add(
            &["java", "kt", "swift", "cs", "dart", "scala"],
            LanguageProfile::new("java", &['"', '\''], Some("//")),
        );
        add(
            &["go"],
            LanguageProfile::new("go", &['"', '\'', '`'], Some("//")),
        );
        add(
            &["rb", "sh", "bash", "yml", "yaml", "pl"],
            LanguageProfile::new("script", &['"', '\''], Some("#")),
        );
        add(
            &["php"],
            LanguageProfile::new("php", &['"', '\''], Some("//")),
        );

        ProfileRegistry {
            generic: LanguageProfile::new("generic", &['"', '\''], None),
            by_ext,
        }
    }

    /// Merge overrides from a JSON file mapping extension -> profile.
    pub fn load_overrides(&mut self, path: &Path) -> Result<(), ProfileError> {
        let text = std::fs::read_to_string(path).map_err(|source| ProfileError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let overrides: BTreeMap<String, LanguageProfile> =
            serde_json::from_str(&text).map_err(|source| ProfileError::Parse {
                path: path.display().to_string(),
                source,
            })?;
        for (ext, profile) in overrides {
            profile.validate()?;
            if ext == "generic" {
                self.generic = profile;
            } else {
                self.by_ext.insert(ext, profile);
            }
        }
        Ok(())
    }

    pub fn generic(&self) -> &LanguageProfile {
        &self.generic
    }

    pub fn for_extension(&self, ext: &str) -> &LanguageProfile {
        self.by_ext
            .get(&ext.to_ascii_lowercase())
            .unwrap_or(&self.generic)
    }

    /// Profile for a file path, falling back to the generic profile when the
    /// extension is unknown or absent.
    pub fn for_path(&self, path: impl AsRef<Path>) -> &LanguageProfile {
        match path.as_ref().extension().and_then(|e| e.to_str()) {
            Some(ext) => self.for_extension(ext),
            None => &self.generic,
        }
    }
}

impl Default for ProfileRegistry {
    fn default() -> Self {
        Self::bundled()
    }
}
