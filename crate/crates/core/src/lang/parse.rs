//! Template parser for the toy-English fragment.
//!
//! Supported shapes:
//!
//! ```text
//! DET (COLOR) N            a red truck
//! NUM N-pl                 two balls, many cookies
//! PROPN                    Mom
//! N-pl                     bears
//! N-pl are COLOR           cookies are light brown
//! N-pl are N-pl            wugs are animals
//! N-pl V (N-pl | N-mass)   birds fly, cats eat cookies
//! (PROPN | DET N) V (DET N | N-mass)
//!                          Mom drinks juice, a bear sits
//! ```

use std::fmt;

use thiserror::Error;

use super::lexicon::{Lexicon, PartOfSpeech};
use crate::graph::validate_name;

/// Lowercases, strips punctuation, and splits on whitespace.
pub fn tokenize(utterance: &str) -> Vec<String> {
    utterance
        .split_whitespace()
        .map(|w| {
            w.trim_matches(|c: char| !c.is_alphanumeric())
                .to_lowercase()
        })
        .filter(|w| !w.is_empty())
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NounClass {
    Count,
    Mass,
    Proper,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NounPhrase {
    pub lemma: String,
    pub class: NounClass,
    pub plural: bool,
    pub has_determiner: bool,
    /// Number word (`two`, `many`) in front of the noun.
    pub quantified: bool,
    pub count: Option<u32>,
    pub modifier: Option<String>,
    /// Not in the lexicon; lemmatized by stripping the final `s`.
    pub novel: bool,
}

impl NounPhrase {
    /// Plural with neither determiner nor number word.
    pub fn is_bare_plural(&self) -> bool {
        self.plural && !self.has_determiner && !self.quantified
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerbFrame {
    pub lemma: String,
    pub subject: usize,
    pub object: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Complement {
    Color(String),
    /// Index into `noun_phrases`.
    Noun(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Predicate {
    pub subject: usize,
    pub complement: Complement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedUtterance {
    pub noun_phrases: Vec<NounPhrase>,
    pub verb: Option<VerbFrame>,
    pub predicate: Option<Predicate>,
    pub is_generic: bool,
}

impl ParsedUtterance {
    pub fn is_generic(&self) -> bool {
        self.is_generic
    }
}

/// True iff there is at least one noun and every noun is a bare plural.
pub fn is_generic(parsed: &ParsedUtterance) -> bool {
    parsed.is_generic
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub struct ParseError {
    /// Offending token, or `None` when the utterance ended too early.
    pub token: Option<String>,
    pub position: usize,
    pub reason: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.token {
            Some(t) => write!(
                f,
                "unexpected {t:?} at token {}: {}",
                self.position, self.reason
            ),
            None => write!(
                f,
                "utterance ended at token {}: {}",
                self.position, self.reason
            ),
        }
    }
}

#[derive(Clone, Debug)]
enum Word {
    Known {
        lemma: String,
        pos: PartOfSpeech,
        plural: bool,
    },
    NovelPlural {
        lemma: String,
    },
    Unknown,
}

fn novel_plural_lemma(surface: &str) -> Option<String> {
    let stem = surface.strip_suffix('s')?;
    (stem.len() >= 2 && validate_name(stem).is_ok() && !stem.ends_with('-'))
        .then(|| stem.to_string())
}

/// Joins `light brown` into `light-brown` when the lexicon lists the joined form.
fn join_multiword(tokens: &[String], lexicon: &Lexicon) -> Vec<String> {
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        if i + 1 < tokens.len() {
            let joined = format!("{}-{}", tokens[i], tokens[i + 1]);
            if lexicon.lookup(&joined).is_some() {
                out.push(joined);
                i += 2;
                continue;
            }
        }
        out.push(tokens[i].clone());
        i += 1;
    }
    out
}

struct Parser<'a> {
    tokens: Vec<String>,
    words: Vec<Word>,
    pos: usize,
    nps: Vec<NounPhrase>,
    _lex: &'a Lexicon,
}

impl<'a> Parser<'a> {
    fn new(tokens: Vec<String>, lexicon: &'a Lexicon) -> Self {
        let words = tokens
            .iter()
            .map(|t| match lexicon.lookup(t) {
                Some(e) => Word::Known {
                    lemma: e.lemma.clone(),
                    pos: e.pos,
                    plural: e.plural,
                },
                None => match novel_plural_lemma(t) {
                    Some(lemma) => Word::NovelPlural { lemma },
                    None => Word::Unknown,
                },
            })
            .collect();
        Parser {
            tokens,
            words,
            pos: 0,
            nps: Vec::new(),
            _lex: lexicon,
        }
    }

    fn peek(&self) -> Option<&Word> {
        self.words.get(self.pos)
    }

    fn peek_pos(&self) -> Option<PartOfSpeech> {
        match self.peek()? {
            Word::Known { pos, .. } => Some(*pos),
            _ => None,
        }
    }

    fn error(&self, reason: impl Into<String>) -> ParseError {
        ParseError {
            token: self.tokens.get(self.pos).cloned(),
            position: self.pos,
            reason: reason.into(),
        }
    }

    fn push(&mut self, np: NounPhrase) -> usize {
        self.nps.push(np);
        self.nps.len() - 1
    }

    /// A plural noun with nothing in front of it; novel plurals allowed.
    fn bare_plural(&mut self) -> Result<usize, ParseError> {
        let np = match self.peek() {
            Some(Word::Known {
                lemma,
                pos: PartOfSpeech::Noun,
                plural: true,
            }) => NounPhrase {
                lemma: lemma.clone(),
                class: NounClass::Count,
                plural: true,
                has_determiner: false,
                quantified: false,
                count: None,
                modifier: None,
                novel: false,
            },
            Some(Word::NovelPlural { lemma }) => NounPhrase {
                lemma: lemma.clone(),
                class: NounClass::Count,
                plural: true,
                has_determiner: false,
                quantified: false,
                count: None,
                modifier: None,
                novel: true,
            },
            _ => return Err(self.error("expected a bare plural noun")),
        };
        self.pos += 1;
        Ok(self.push(np))
    }

    fn bare_mass(&mut self) -> Result<usize, ParseError> {
        let Some(Word::Known {
            lemma,
            pos: PartOfSpeech::MassNoun,
            ..
        }) = self.peek()
        else {
            return Err(self.error("expected a mass noun"));
        };
        let np = NounPhrase {
            lemma: lemma.clone(),
            class: NounClass::Mass,
            plural: false,
            has_determiner: false,
            quantified: false,
            count: None,
            modifier: None,
            novel: false,
        };
        self.pos += 1;
        Ok(self.push(np))
    }

    /// `DET (COLOR) N`, where N is a singular count noun or a mass noun.
    fn determined(&mut self) -> Result<usize, ParseError> {
        self.pos += 1;
        let modifier = match self.peek() {
            Some(Word::Known {
                lemma,
                pos: PartOfSpeech::ColorAdjective,
                ..
            }) => {
                let m = lemma.clone();
                self.pos += 1;
                Some(m)
            }
            _ => None,
        };
        let (lemma, class) = match self.peek() {
            Some(Word::Known {
                lemma,
                pos: PartOfSpeech::Noun,
                plural: false,
            }) => (lemma.clone(), NounClass::Count),
            Some(Word::Known {
                lemma,
                pos: PartOfSpeech::MassNoun,
                ..
            }) => (lemma.clone(), NounClass::Mass),
            _ => return Err(self.error("expected a singular noun after the determiner")),
        };
        self.pos += 1;
        Ok(self.push(NounPhrase {
            lemma,
            class,
            plural: false,
            has_determiner: true,
            quantified: false,
            count: None,
            modifier,
            novel: false,
        }))
    }

    /// `NUM N-pl`.
    fn quantified(&mut self, number: &str) -> Result<usize, ParseError> {
        let count = match number {
            "two" => Some(2),
            "three" => Some(3),
            _ => None,
        };
        self.pos += 1;
        let Some(Word::Known {
            lemma,
            pos: PartOfSpeech::Noun,
            plural: true,
        }) = self.peek()
        else {
            return Err(self.error("expected a plural noun after the number word"));
        };
        let np = NounPhrase {
            lemma: lemma.clone(),
            class: NounClass::Count,
            plural: true,
            has_determiner: false,
            quantified: true,
            count,
            modifier: None,
            novel: false,
        };
        self.pos += 1;
        Ok(self.push(np))
    }

    fn proper(&mut self, lemma: String) -> usize {
        self.pos += 1;
        self.push(NounPhrase {
            lemma,
            class: NounClass::Proper,
            plural: false,
            has_determiner: false,
            quantified: false,
            count: None,
            modifier: None,
            novel: false,
        })
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.pos < self.tokens.len() {
            Err(self.error("expected end of utterance"))
        } else {
            Ok(())
        }
    }

    fn utterance(mut self) -> Result<ParsedUtterance, ParseError> {
        let mut verb = None;
        let mut predicate = None;

        match self.peek().cloned() {
            None => return Err(self.error("empty utterance")),
            Some(Word::Known {
                pos: PartOfSpeech::Determiner,
                ..
            }) => {
                let subject = self.determined()?;
                verb = self.singular_tail(subject)?;
            }
            Some(Word::Known {
                pos: PartOfSpeech::ProperNoun,
                lemma,
                ..
            }) => {
                let subject = self.proper(lemma);
                verb = self.singular_tail(subject)?;
            }
            Some(Word::Known {
                pos: PartOfSpeech::NumberWord,
                lemma,
                ..
            }) => {
                self.quantified(&lemma)?;
            }
            Some(Word::Known {
                pos: PartOfSpeech::Noun,
                plural: true,
                ..
            })
            | Some(Word::NovelPlural { .. }) => {
                let subject = self.bare_plural()?;
                match self.peek_pos() {
                    None if self.pos >= self.tokens.len() => {}
                    Some(PartOfSpeech::Copula) if self.tokens[self.pos] == "are" => {
                        self.pos += 1;
                        let complement = match self.peek() {
                            Some(Word::Known {
                                lemma,
                                pos: PartOfSpeech::ColorAdjective,
                                ..
                            }) => {
                                let c = Complement::Color(lemma.clone());
                                self.pos += 1;
                                c
                            }
                            _ => Complement::Noun(self.bare_plural().map_err(|mut e| {
                                e.reason =
                                    "expected a color or a bare plural noun after 'are'".into();
                                e
                            })?),
                        };
                        predicate = Some(Predicate {
                            subject,
                            complement,
                        });
                    }
                    Some(PartOfSpeech::Verb) => {
                        let lemma = self.verb_lemma();
                        let object = match self.peek_pos() {
                            None if self.pos >= self.tokens.len() => None,
                            Some(PartOfSpeech::MassNoun) => Some(self.bare_mass()?),
                            _ => Some(self.bare_plural().map_err(|mut e| {
                                e.reason = "expected a bare plural or mass noun object".into();
                                e
                            })?),
                        };
                        verb = Some(VerbFrame {
                            lemma,
                            subject,
                            object,
                        });
                    }
                    _ => return Err(self.error("expected 'are' or a verb after a bare plural")),
                }
            }
            Some(_) => return Err(self.error("utterance must start with a noun phrase")),
        }
        self.expect_end()?;

        let is_generic = !self.nps.is_empty() && self.nps.iter().all(NounPhrase::is_bare_plural);
        Ok(ParsedUtterance {
            noun_phrases: self.nps,
            verb,
            predicate,
            is_generic,
        })
    }

    fn verb_lemma(&mut self) -> String {
        let Some(Word::Known { lemma, .. }) = self.peek() else {
            unreachable!("caller checked for a verb");
        };
        let lemma = lemma.clone();
        self.pos += 1;
        lemma
    }

    /// After a singular subject: nothing, or `V (DET N | N-mass)`.
    fn singular_tail(&mut self, subject: usize) -> Result<Option<VerbFrame>, ParseError> {
        match self.peek_pos() {
            None if self.pos >= self.tokens.len() => Ok(None),
            Some(PartOfSpeech::Verb) => {
                let lemma = self.verb_lemma();
                let object = match self.peek_pos() {
                    None if self.pos >= self.tokens.len() => None,
                    Some(PartOfSpeech::Determiner) => Some(self.determined()?),
                    Some(PartOfSpeech::MassNoun) => Some(self.bare_mass()?),
                    _ => return Err(self.error("expected a determined noun or a mass noun object")),
                };
                Ok(Some(VerbFrame {
                    lemma,
                    subject,
                    object,
                }))
            }
            _ => Err(self.error("expected a verb or end of utterance")),
        }
    }
}

/// Parses an already tokenized utterance.
pub fn parse(tokens: &[String], lexicon: &Lexicon) -> Result<ParsedUtterance, ParseError> {
    let tokens = join_multiword(tokens, lexicon);
    Parser::new(tokens, lexicon).utterance()
}

/// Tokenizes and parses.
pub fn parse_text(utterance: &str, lexicon: &Lexicon) -> Result<ParsedUtterance, ParseError> {
    parse(&tokenize(utterance), lexicon)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> ParsedUtterance {
        parse_text(s, &Lexicon::default_english()).unwrap_or_else(|e| panic!("{s:?}: {e}"))
    }

    fn perr(s: &str) -> ParseError {
        parse_text(s, &Lexicon::default_english()).unwrap_err()
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(tokenize("a red truck"), ["a", "red", "truck"]);
        assert_eq!(tokenize("Mom rolls a ball."), ["mom", "rolls", "a", "ball"]);
        assert!(tokenize("").is_empty());
        assert!(tokenize("  ,. ").is_empty());
    }

    #[test]
    fn determined_with_color() {
        let u = p("a red truck");
        assert!(!u.is_generic);
        assert_eq!(u.noun_phrases.len(), 1);
        let np = &u.noun_phrases[0];
        assert_eq!(np.lemma, "truck");
        assert_eq!(np.modifier.as_deref(), Some("red"));
        assert!(np.has_determiner);
    }

    #[test]
    fn multiword_color_joined() {
        let u = p("a light brown cookie");
        assert_eq!(u.noun_phrases[0].modifier.as_deref(), Some("light-brown"));
        let u = p("cookies are light brown");
        assert!(u.is_generic);
        assert_eq!(
            u.predicate.unwrap().complement,
            Complement::Color("light-brown".into())
        );
    }

    #[test]
    fn bare_plural_verb_is_generic() {
        let u = p("bears sit");
        assert!(u.is_generic);
        assert_eq!(u.noun_phrases[0].lemma, "bear");
        assert!(u.noun_phrases[0].is_bare_plural());
        assert_eq!(
            u.verb,
            Some(VerbFrame {
                lemma: "sit".into(),
                subject: 0,
                object: None
            })
        );
    }

    #[test]
    fn singular_verb_is_not_generic() {
        let u = p("a bear sits");
        assert!(!u.is_generic);
        assert_eq!(u.verb.unwrap().lemma, "sit");
    }

    #[test]
    fn novel_plural_subject() {
        let u = p("wugs are animals");
        assert!(u.is_generic);
        assert_eq!(u.noun_phrases[0].lemma, "wug");
        assert!(u.noun_phrases[0].novel);
        assert_eq!(u.noun_phrases[1].lemma, "animal");
        assert!(!u.noun_phrases[1].novel);
        assert_eq!(
            u.predicate,
            Some(Predicate {
                subject: 0,
                complement: Complement::Noun(1)
            })
        );
    }

    #[test]
    fn suppletive_people() {
        let u = p("snarps are people");
        assert!(u.is_generic);
        assert_eq!(u.noun_phrases[1].lemma, "people");
    }

    #[test]
    fn number_words_block_genericity() {
        let u = p("two balls");
        assert!(!u.is_generic);
        assert_eq!(u.noun_phrases[0].count, Some(2));
        let u = p("many cookies");
        assert!(!u.is_generic);
        assert!(u.noun_phrases[0].quantified);
        assert_eq!(u.noun_phrases[0].count, None);
    }

    #[test]
    fn proper_noun_frames() {
        let u = p("Moms eat");
        assert!(u.is_generic);
        assert_eq!(u.noun_phrases[0].lemma, "mom");

        let u = p("Mom drinks juice");
        assert!(!u.is_generic);
        let v = u.verb.unwrap();
        assert_eq!(v.lemma, "drink");
        assert_eq!(u.noun_phrases[v.object.unwrap()].lemma, "juice");
        assert_eq!(u.noun_phrases[v.object.unwrap()].class, NounClass::Mass);

        let u = p("Mom rolls a ball");
        assert_eq!(u.noun_phrases[1].lemma, "ball");
        let u = p("a baby drinks milk");
        assert_eq!(u.noun_phrases[0].lemma, "baby");
    }

    #[test]
    fn mass_object_makes_generic_false() {
        // Mass nouns are not plural, so the all-bare-plural test fails.
        let u = p("moms drink milk");
        assert!(!u.is_generic);
        let u = p("cats eat cookies");
        assert!(u.is_generic);
    }

    #[test]
    fn predicate_and_verb_exclusive() {
        for s in [
            "bears sit",
            "bears are brown",
            "dogs are animals",
            "a dog eats a cookie",
        ] {
            let u = p(s);
            assert!(!(u.verb.is_some() && u.predicate.is_some()), "{s}");
        }
    }

    #[test]
    fn errors_name_offending_token() {
        let e = perr("bear sits");
        assert_eq!(e.token.as_deref(), Some("bear"));
        let e = perr("a bear are red");
        assert_eq!(e.token.as_deref(), Some("are"));
        let e = perr("two balls roll");
        assert_eq!(e.token.as_deref(), Some("roll"));
        let e = perr("a zorp");
        assert_eq!(e.token.as_deref(), Some("zorp"));
        let e = perr("a");
        assert_eq!(e.token, None);
        let e = perr("quickly");
        assert_eq!(e.position, 0);
        assert!(parse(&[], &Lexicon::default_english()).is_err());
    }

    #[test]
    fn plural_round_trip_for_every_noun() {
        let lex = Lexicon::default_english();
        for lemma in lex.countable_nouns() {
            let u = parse_text(&lex.pluralize(lemma), &lex).unwrap();
            assert_eq!(u.noun_phrases[0].lemma, lemma);
            assert!(u.is_generic);
        }
    }
}
