use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::validate_name;

const DEFAULT_LEXICON: &str = include_str!("../../data/default.lex");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PartOfSpeech {
    Noun,
    MassNoun,
    ProperNoun,
    Verb,
    ColorAdjective,
    Determiner,
    NumberWord,
    Copula,
}

impl PartOfSpeech {
    pub fn as_str(self) -> &'static str {
        match self {
            PartOfSpeech::Noun => "noun",
            PartOfSpeech::MassNoun => "mass-noun",
            PartOfSpeech::ProperNoun => "proper-noun",
            PartOfSpeech::Verb => "verb",
            PartOfSpeech::ColorAdjective => "color-adjective",
            PartOfSpeech::Determiner => "determiner",
            PartOfSpeech::NumberWord => "number-word",
            PartOfSpeech::Copula => "copula",
        }
    }

    pub fn is_nominal(self) -> bool {
        matches!(
            self,
            PartOfSpeech::Noun | PartOfSpeech::MassNoun | PartOfSpeech::ProperNoun
        )
    }
}

impl fmt::Display for PartOfSpeech {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PartOfSpeech {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "noun" => PartOfSpeech::Noun,
            "mass-noun" => PartOfSpeech::MassNoun,
            "proper-noun" => PartOfSpeech::ProperNoun,
            "verb" => PartOfSpeech::Verb,
            "color-adjective" => PartOfSpeech::ColorAdjective,
            "determiner" => PartOfSpeech::Determiner,
            "number-word" => PartOfSpeech::NumberWord,
            "copula" => PartOfSpeech::Copula,
            other => return Err(format!("unknown part of speech {other:?}")),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexEntry {
    pub surface: String,
    pub lemma: String,
    pub pos: PartOfSpeech,
    /// Plural morphology; only meaningful for nouns.
    pub plural: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("lexicon line {line}: {reason}")]
pub struct LexiconError {
    pub line: usize,
    pub reason: String,
}

/// Surface form to lemma and part of speech.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<String, LexEntry>,
    plural_forms: BTreeMap<String, String>,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// The shipped lexicon covering every word of the built-in curricula.
    pub fn default_english() -> Self {
        Self::parse(DEFAULT_LEXICON).expect("shipped lexicon is well-formed")
    }

    pub fn insert(&mut self, entry: LexEntry) -> Result<(), String> {
        validate_name(&entry.lemma).map_err(|e| e.to_string())?;
        if entry.plural && entry.pos != PartOfSpeech::Noun {
            return Err(format!(
                "{}: only common nouns can be plural",
                entry.surface
            ));
        }
        if entry.plural {
            self.plural_forms
                .insert(entry.lemma.clone(), entry.surface.clone());
        }
        self.entries.insert(entry.surface.clone(), entry);
        Ok(())
    }

    /// Reads lines of the form `word <surface> <pos> lemma=<lemma> [plural-of=<lemma>]`.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut lex = Lexicon::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |reason: String| LexiconError { line, reason };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            if fields.len() < 4 || fields[0] != "word" {
                return Err(err(
                    "expected: word <surface> <pos> lemma=<lemma> [plural-of=<lemma>]".into(),
                ));
            }
            let surface = fields[1].to_string();
            let pos: PartOfSpeech = fields[2].parse().map_err(err)?;
            let mut lemma = None;
            let mut plural_of = None;
            for attr in &fields[3..] {
                match attr.split_once('=') {
                    Some(("lemma", v)) => lemma = Some(v.to_string()),
                    Some(("plural-of", v)) => plural_of = Some(v.to_string()),
                    _ => return Err(err(format!("unknown attribute {attr:?}"))),
                }
            }
            let lemma = lemma.ok_or_else(|| err("missing lemma=".into()))?;
            if let Some(p) = &plural_of {
                if *p != lemma {
                    return Err(err(format!("plural-of={p} disagrees with lemma={lemma}")));
                }
            }
            lex.insert(LexEntry {
                surface,
                lemma,
                pos,
                plural: plural_of.is_some(),
            })
            .map_err(err)?;
        }
        Ok(lex)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in self.entries.values() {
            out.push_str(&format!("word {} {} lemma={}", e.surface, e.pos, e.lemma));
            if e.plural {
                out.push_str(&format!(" plural-of={}", e.lemma));
            }
            out.push('\n');
        }
        out
    }

    pub fn lookup(&self, surface: &str) -> Option<&LexEntry> {
        self.entries.get(surface)
    }

    pub fn entries(&self) -> impl Iterator<Item = &LexEntry> {
        self.entries.values()
    }

    /// Part of speech of the base (non-plural) form of `lemma`, if listed.
    pub fn lemma_pos(&self, lemma: &str) -> Option<PartOfSpeech> {
        self.entries
            .values()
            .find(|e| e.lemma == lemma && !e.plural && e.pos != PartOfSpeech::Verb)
            .map(|e| e.pos)
            .or_else(|| {
                self.plural_forms
                    .contains_key(lemma)
                    .then_some(PartOfSpeech::Noun)
            })
    }

    pub fn has_verb(&self, lemma: &str) -> bool {
        self.entries
            .values()
            .any(|e| e.pos == PartOfSpeech::Verb && e.lemma == lemma)
    }

    pub fn has_color(&self, lemma: &str) -> bool {
        self.entries
            .values()
            .any(|e| e.pos == PartOfSpeech::ColorAdjective && e.lemma == lemma)
    }

    /// Plural surface form of a noun lemma: the listed form, else lemma + `s`.
    pub fn pluralize(&self, lemma: &str) -> String {
        self.plural_forms
            .get(lemma)
            .cloned()
            .unwrap_or_else(|| format!("{lemma}s"))
    }

    /// Lemmas of nouns that have a plural form.
    pub fn countable_nouns(&self) -> impl Iterator<Item = &str> {
        self.plural_forms.keys().map(String::as_str)
    }

    /// Base surface used when a lemma appears in the singular (`mom`, `ball`).
    pub fn singular_surface(&self, lemma: &str) -> Option<&str> {
        self.entries
            .values()
            .find(|e| e.lemma == lemma && !e.plural && e.pos.is_nominal())
            .map(|e| e.surface.as_str())
    }

    /// Third-person singular form of a verb lemma (`sits`, `flies`).
    pub fn verb_singular(&self, lemma: &str) -> Option<&str> {
        self.entries
            .values()
            .find(|e| e.pos == PartOfSpeech::Verb && e.lemma == lemma && e.surface != lemma)
            .map(|e| e.surface.as_str())
    }
}
